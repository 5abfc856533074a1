"""Pure-Python term kernel.

Terms travel as ``(x, y)`` integer pairs meaning ``x / y`` with ``y > 0``
and ``gcd(x, y) == 1``.  Windows ``xs, ys`` end with the newest term and
keep whatever length (at least ``d``) the caller hands in.  Coefficient
``j`` of the recurrence is the ratio of two integer polynomials
``nums[j-1](n) / dens[j-1](n)``.

The compiled twin in ``_kernel.pyx`` implements the same functions with the
same signatures; keep them in lockstep.
"""
from math import gcd


def eval_int_poly(coeffs, n):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * n + c
    return acc


def next_term(nums, dens, xs, ys, n):
    """Return ``a_n`` given the window ``xs[-j] / ys[-j] == a_{n-j}``."""
    d = len(nums)
    parts = []
    lcm = 1
    for j in range(1, d + 1):
        x = xs[-j]
        if x == 0:
            continue
        c = eval_int_poly(nums[j - 1], n)
        if c == 0:
            continue
        e = eval_int_poly(dens[j - 1], n)
        if e == 0:
            raise ZeroDivisionError(f"denominator {j} vanishes at n={n}")
        e *= ys[-j]
        if e < 0:
            c, e = -c, -e
        parts.append((c * x, e))
        lcm = lcm * e // gcd(lcm, e)
    if not parts:
        return 0, 1
    s = 0
    for v, e in parts:
        s += v * (lcm // e)
    if lcm == 1:
        return s, 1
    g = gcd(s, lcm)
    return s // g, lcm // g


def ratio_in(x1, y1, x0, y0, lo_n, lo_d, hi_n, hi_d):
    """Exact test of ``lo < (x1/y1) / (x0/y0) < hi`` with positive ``lo_d, hi_d``."""
    if x0 == 0:
        return False
    num = x1 * y0
    den = y1 * x0
    if den < 0:
        num, den = -num, -den
    return lo_n * den < num * lo_d and num * hi_d < hi_n * den


def scan(nums, dens, xs, ys, n, stop, lo_n, lo_d, hi_n, hi_d,
         run_from, need, run, pos_from, first_bad):
    """Generate ``a_n .. a_stop`` in place, tracking two streaming checks.

    ``run`` counts consecutive indices ``>= run_from`` whose ratio
    ``a_i / a_{i-1}`` lies strictly in ``(lo, hi)``; the scan stops as soon
    as it reaches ``need``.  ``first_bad`` records the first index
    ``>= pos_from`` with a nonpositive term (``-1`` while none).

    Returns ``(last_index, run, first_bad)``.  The window ``xs, ys`` is
    rotated so that it ends with ``a_last_index``.
    """
    last = n - 1
    while n <= stop:
        x, y = next_term(nums, dens, xs, ys, n)
        if first_bad < 0 and n >= pos_from and x <= 0:
            first_bad = n
        if n >= run_from:
            if ratio_in(x, y, xs[-1], ys[-1], lo_n, lo_d, hi_n, hi_d):
                run += 1
            else:
                run = 0
        xs.append(x)
        ys.append(y)
        del xs[0]
        del ys[0]
        last = n
        if need > 0 and run >= need:
            break
        n += 1
    return last, run, first_bad


def block(nums, dens, xs, ys, n, count):
    """Return ``[a_n, ..., a_{n+count-1}]`` as ``(x, y)`` pairs, advancing the window."""
    out = []
    for i in range(n, n + count):
        x, y = next_term(nums, dens, xs, ys, i)
        out.append((x, y))
        xs.append(x)
        ys.append(y)
        del xs[0]
        del ys[0]
    return out
