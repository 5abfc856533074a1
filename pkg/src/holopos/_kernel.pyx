# cython: language_level=3, boundscheck=False, wraparound=False
"""GMP-backed term kernel.

Same functions and signatures as ``_kernel_py``.  Python ints cross the
boundary as hex strings (linear time); the recurrence loop itself runs on
``mpz_t`` values held in a ring buffer.
"""
from libc.stdlib cimport malloc, free
from libc.string cimport strlen


ctypedef void (*free_fn)(void *, size_t)


cdef extern from "gmp.h":
    ctypedef struct __mpz_struct:
        pass
    ctypedef __mpz_struct mpz_t[1]

    void mpz_init(mpz_t x)
    void mpz_clear(mpz_t x)
    void mpz_set(mpz_t rop, const mpz_t op)
    void mpz_set_ui(mpz_t rop, unsigned long op)
    void mpz_set_si(mpz_t rop, long op)
    int mpz_set_str(mpz_t rop, const char *s, int base)
    char *mpz_get_str(char *s, int base, const mpz_t op)
    void mpz_swap(mpz_t a, mpz_t b)
    void mpz_add(mpz_t rop, const mpz_t a, const mpz_t b)
    void mpz_mul(mpz_t rop, const mpz_t a, const mpz_t b)
    void mpz_mul_si(mpz_t rop, const mpz_t a, long b)
    void mpz_addmul(mpz_t rop, const mpz_t a, const mpz_t b)
    void mpz_neg(mpz_t rop, const mpz_t op)
    void mpz_divexact(mpz_t q, const mpz_t n, const mpz_t d)
    void mpz_gcd(mpz_t rop, const mpz_t a, const mpz_t b)
    void mpz_lcm(mpz_t rop, const mpz_t a, const mpz_t b)
    int mpz_sgn(const mpz_t op)
    int mpz_cmp(const mpz_t a, const mpz_t b)
    int mpz_cmp_ui(const mpz_t a, unsigned long b)
    void mp_get_memory_functions(void *alloc, void *realloc, free_fn *free_func)


cdef void _load(mpz_t rop, object value) except *:
    cdef bytes s = format(value, "x").encode("ascii")
    if mpz_set_str(rop, s, 16) != 0:
        raise ValueError("bad integer")


cdef object _store(const mpz_t op):
    cdef free_fn freefunc
    cdef char *buf = mpz_get_str(NULL, 16, op)
    cdef size_t size = strlen(buf)
    try:
        return int(buf[:size].decode("ascii"), 16)
    finally:
        mp_get_memory_functions(NULL, NULL, &freefunc)
        freefunc(buf, size + 1)


cdef class _Poly:
    cdef mpz_t *c
    cdef int len

    def __cinit__(self, coeffs):
        self.len = len(coeffs)
        self.c = <mpz_t *> malloc(max(self.len, 1) * sizeof(mpz_t))
        cdef int i
        for i in range(self.len):
            mpz_init(self.c[i])
            _load(self.c[i], coeffs[i])

    def __dealloc__(self):
        cdef int i
        if self.c != NULL:
            for i in range(self.len):
                mpz_clear(self.c[i])
            free(self.c)

    cdef void eval(self, mpz_t out, long n):
        cdef int i
        mpz_set_ui(out, 0)
        for i in range(self.len - 1, -1, -1):
            mpz_mul_si(out, out, n)
            mpz_add(out, out, self.c[i])


cdef class _Machine:
    """Ring buffer of the last ``size >= d`` terms plus scratch registers."""
    cdef int d
    cdef int size
    cdef int head            # slot of the newest term
    cdef mpz_t *xs
    cdef mpz_t *ys
    cdef mpz_t *pv
    cdef mpz_t *pe
    cdef mpz_t c, e, lcm, s, g, t
    cdef list nums
    cdef list dens

    def __cinit__(self, nums, dens, int size):
        cdef int i
        self.d = len(nums)
        if size < self.d:
            raise ValueError(f"window of {size} terms is shorter than the order {self.d}")
        self.size = size
        self.head = size - 1
        self.nums = [_Poly(p) for p in nums]
        self.dens = [_Poly(p) for p in dens]
        self.xs = <mpz_t *> malloc(size * sizeof(mpz_t))
        self.ys = <mpz_t *> malloc(size * sizeof(mpz_t))
        self.pv = <mpz_t *> malloc(self.d * sizeof(mpz_t))
        self.pe = <mpz_t *> malloc(self.d * sizeof(mpz_t))
        for i in range(size):
            mpz_init(self.xs[i])
            mpz_init(self.ys[i])
        for i in range(self.d):
            mpz_init(self.pv[i])
            mpz_init(self.pe[i])
        mpz_init(self.c)
        mpz_init(self.e)
        mpz_init(self.lcm)
        mpz_init(self.s)
        mpz_init(self.g)
        mpz_init(self.t)

    def __dealloc__(self):
        cdef int i
        if self.xs != NULL:
            for i in range(self.size):
                mpz_clear(self.xs[i])
                mpz_clear(self.ys[i])
            for i in range(self.d):
                mpz_clear(self.pv[i])
                mpz_clear(self.pe[i])
            free(self.xs)
            free(self.ys)
            free(self.pv)
            free(self.pe)
            mpz_clear(self.c)
            mpz_clear(self.e)
            mpz_clear(self.lcm)
            mpz_clear(self.s)
            mpz_clear(self.g)
            mpz_clear(self.t)

    cdef void load_window(self, xs, ys) except *:
        cdef int i
        for i in range(self.size):
            _load(self.xs[i], xs[i])
            _load(self.ys[i], ys[i])
        self.head = self.size - 1

    cdef void store_window(self, list xs, list ys) except *:
        cdef int i, slot
        del xs[:]
        del ys[:]
        for i in range(self.size):
            slot = (self.head + 1 + i) % self.size
            xs.append(_store(self.xs[slot]))
            ys.append(_store(self.ys[slot]))

    cdef int slot(self, int j):
        # slot holding a_{n-j} when head holds a_{n-1}
        return (self.head - j + 1 + self.size) % self.size

    cdef void step(self, long n) except *:
        """Compute a_n into self.s / self.g (numerator / denominator)."""
        cdef int j, k, sl, used = 0
        cdef int idx[64]
        cdef _Poly pn, pd
        mpz_set_ui(self.lcm, 1)
        for j in range(1, self.d + 1):
            sl = self.slot(j)
            if mpz_sgn(self.xs[sl]) == 0:
                continue
            pn = <_Poly> self.nums[j - 1]
            pn.eval(self.c, n)
            if mpz_sgn(self.c) == 0:
                continue
            pd = <_Poly> self.dens[j - 1]
            pd.eval(self.e, n)
            if mpz_sgn(self.e) == 0:
                raise ZeroDivisionError(f"denominator {j} vanishes at n={n}")
            mpz_mul(self.e, self.e, self.ys[sl])
            if mpz_sgn(self.e) < 0:
                mpz_neg(self.e, self.e)
                mpz_neg(self.c, self.c)
            mpz_mul(self.pv[j - 1], self.c, self.xs[sl])
            mpz_set(self.pe[j - 1], self.e)
            mpz_lcm(self.lcm, self.lcm, self.e)
            if used < 64:
                idx[used] = j - 1
            used += 1
        mpz_set_ui(self.s, 0)
        if used == 0:
            mpz_set_ui(self.g, 1)
            return
        if used > 64:
            raise ValueError("order above 64 not supported by the compiled kernel")
        for k in range(used):
            j = idx[k]
            mpz_divexact(self.t, self.lcm, self.pe[j])
            mpz_addmul(self.s, self.pv[j], self.t)
        if mpz_cmp_ui(self.lcm, 1) == 0:
            mpz_set_ui(self.g, 1)
            return
        mpz_gcd(self.t, self.s, self.lcm)
        mpz_divexact(self.s, self.s, self.t)
        mpz_divexact(self.g, self.lcm, self.t)

    cdef void push(self):
        self.head = (self.head + 1) % self.size
        mpz_swap(self.xs[self.head], self.s)
        mpz_swap(self.ys[self.head], self.g)


cdef bint _ratio_in_mpz(const mpz_t x1, const mpz_t y1, const mpz_t x0, const mpz_t y0,
                        const mpz_t lo_n, const mpz_t lo_d, const mpz_t hi_n, const mpz_t hi_d,
                        mpz_t num, mpz_t den, mpz_t a, mpz_t b):
    if mpz_sgn(x0) == 0:
        return False
    mpz_mul(num, x1, y0)
    mpz_mul(den, y1, x0)
    if mpz_sgn(den) < 0:
        mpz_neg(num, num)
        mpz_neg(den, den)
    mpz_mul(a, lo_n, den)
    mpz_mul(b, num, lo_d)
    if mpz_cmp(a, b) >= 0:
        return False
    mpz_mul(a, num, hi_d)
    mpz_mul(b, hi_n, den)
    return mpz_cmp(a, b) < 0


def eval_int_poly(coeffs, n):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * n + c
    return acc


def next_term(nums, dens, xs, ys, n):
    """Return ``a_n`` given the window ``xs[-j] / ys[-j] == a_{n-j}``."""
    cdef _Machine m = _Machine(nums, dens, len(xs))
    m.load_window(xs, ys)
    m.step(n)
    return _store(m.s), _store(m.g)


def ratio_in(x1, y1, x0, y0, lo_n, lo_d, hi_n, hi_d):
    """Exact test of ``lo < (x1/y1) / (x0/y0) < hi`` with positive ``lo_d, hi_d``."""
    if x0 == 0:
        return False
    num = x1 * y0
    den = y1 * x0
    if den < 0:
        num, den = -num, -den
    return lo_n * den < num * lo_d and num * hi_d < hi_n * den


def scan(nums, dens, list xs, list ys, long n, long stop, lo_n, lo_d, hi_n, hi_d,
         long run_from, long need, long run, long pos_from, long first_bad):
    """See ``_kernel_py.scan``."""
    cdef _Machine m = _Machine(nums, dens, len(xs))
    cdef mpz_t ln, ld, hn, hd, r1, r2, r3, r4
    cdef long last = n - 1
    cdef int prev
    cdef bint ok
    mpz_init(ln); mpz_init(ld); mpz_init(hn); mpz_init(hd)
    mpz_init(r1); mpz_init(r2); mpz_init(r3); mpz_init(r4)
    try:
        _load(ln, lo_n); _load(ld, lo_d); _load(hn, hi_n); _load(hd, hi_d)
        m.load_window(xs, ys)
        while n <= stop:
            m.step(n)
            if first_bad < 0 and n >= pos_from and mpz_sgn(m.s) <= 0:
                first_bad = n
            if n >= run_from:
                prev = m.head
                ok = _ratio_in_mpz(m.s, m.g, m.xs[prev], m.ys[prev],
                                   ln, ld, hn, hd, r1, r2, r3, r4)
                run = run + 1 if ok else 0
            m.push()
            last = n
            if need > 0 and run >= need:
                break
            n += 1
        m.store_window(xs, ys)
    finally:
        mpz_clear(ln); mpz_clear(ld); mpz_clear(hn); mpz_clear(hd)
        mpz_clear(r1); mpz_clear(r2); mpz_clear(r3); mpz_clear(r4)
    return last, run, first_bad


def block(nums, dens, list xs, list ys, long n, long count):
    """See ``_kernel_py.block``."""
    cdef _Machine m = _Machine(nums, dens, len(xs))
    cdef long i
    out = []
    m.load_window(xs, ys)
    for i in range(n, n + count):
        m.step(i)
        out.append((_store(m.s), _store(m.g)))
        m.push()
    m.store_window(xs, ys)
    return out
