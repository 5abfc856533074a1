"""P-recursive recurrences: spec files, sign normalization, exact terms.

A recurrence of order ``d`` is

    a_n = sum_{j=1..d} P1_j(n) / P2_j(n) * a_{n-j},    n >= recurrence_start

with ``d`` initial terms at indices ``recurrence_start - d .. recurrence_start - 1``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterator, Mapping

from . import kernel
from .exactmath import Poly, format_rational, integer_content_form, poly_eval, to_rational

ZERO_NUMERATOR = "zero-numerator term"
DEGREE_RELAXED = "degree-relaxed"


class SpecError(ValueError):
    """Invalid recurrence description.  ``field`` names the offending entry."""

    def __init__(self, message: str, field: str | None = None):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


class NormalizationError(ValueError):
    pass


@dataclass(frozen=True)
class RecurrenceSpec:
    order: int
    numerators: tuple[Poly, ...]
    denominators: tuple[Poly, ...]
    initial_terms: Mapping[int, Fraction]
    recurrence_start: int
    claim_start: int
    name: str = ""

    @property
    def first_index(self) -> int:
        return self.recurrence_start - self.order

    def to_json(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "order": self.order,
            "recurrence_start": self.recurrence_start,
            "claim_start": self.claim_start,
            "numerators": [p.to_json() for p in self.numerators],
            "denominators": [p.to_json() for p in self.denominators],
            "initial_terms": {
                str(i): format_rational(v) for i, v in sorted(self.initial_terms.items())
            },
        }


def _need(doc: Mapping, key: str, kind):
    if key not in doc:
        raise SpecError("missing field", key)
    value = doc[key]
    if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
        raise SpecError(f"expected an integer, got {value!r}", key)
    if kind is not int and not isinstance(value, kind):
        raise SpecError(f"expected {kind.__name__}, got {type(value).__name__}", key)
    return value


def _poly_list(doc: Mapping, key: str, order: int) -> tuple[Poly, ...]:
    raw = _need(doc, key, list)
    if len(raw) != order:
        raise SpecError(f"expected {order} polynomials, got {len(raw)}", key)
    out = []
    for j, coeffs in enumerate(raw, start=1):
        where = f"{key}[{j - 1}]"
        if not isinstance(coeffs, list):
            raise SpecError("expected an array of coefficient strings", where)
        try:
            out.append(Poly(_coeff(c) for c in coeffs))
        except (TypeError, ValueError) as exc:
            raise SpecError(str(exc), where) from None
    return tuple(out)


def _coeff(c) -> Fraction:
    if isinstance(c, int) and not isinstance(c, bool):
        return Fraction(c)
    if not isinstance(c, str):
        raise TypeError(f"coefficient must be a rational string, got {c!r}")
    return to_rational(c)


def parse_spec(document: str | bytes | Mapping[str, Any]) -> RecurrenceSpec:
    """Build a :class:`RecurrenceSpec` from a JSON document or decoded mapping."""
    if isinstance(document, (str, bytes)):
        try:
            doc = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SpecError(f"malformed JSON: {exc}") from None
    else:
        doc = document
    if not isinstance(doc, Mapping):
        raise SpecError("top level must be an object")

    order = _need(doc, "order", int)
    if order <= 0:
        raise SpecError(f"order must be positive, got {order}", "order")
    n0 = _need(doc, "recurrence_start", int)
    claim = _need(doc, "claim_start", int)
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise SpecError("expected a string", "name")
    nums = _poly_list(doc, "numerators", order)
    dens = _poly_list(doc, "denominators", order)
    for j, p in enumerate(dens):
        if p.is_zero():
            raise SpecError("zero denominator polynomial", f"denominators[{j}]")

    raw_init = _need(doc, "initial_terms", dict)
    init: dict[int, Fraction] = {}
    for key, value in raw_init.items():
        try:
            idx = int(key)
        except ValueError:
            raise SpecError(f"index {key!r} is not an integer", "initial_terms") from None
        try:
            init[idx] = _coeff(value)
        except (TypeError, ValueError) as exc:
            raise SpecError(str(exc), f"initial_terms[{key}]") from None
    wanted = range(n0 - order, n0)
    for idx in wanted:
        if idx not in init:
            raise SpecError(f"missing initial term a_{idx}", "initial_terms")
    extra = sorted(set(init) - set(wanted))
    if extra:
        raise SpecError(
            f"unexpected indices {extra}; expected exactly {n0 - order}..{n0 - 1}",
            "initial_terms",
        )
    if claim < n0 - order:
        raise SpecError(
            f"claim_start {claim} precedes the first known index {n0 - order}", "claim_start"
        )
    return RecurrenceSpec(order, nums, dens, init, n0, claim, name)


def load_spec(path: str | Path) -> RecurrenceSpec:
    return parse_spec(Path(path).read_text())


def dump_spec(spec: RecurrenceSpec) -> str:
    return json.dumps(spec.to_json(), indent=2) + "\n"


@dataclass(frozen=True)
class NormalizedRecurrence:
    """Recurrence rewritten as ``a_n = sum_j signs[j] * Q_j(n)/P2_j(n) * a_{n-j}``.

    Every denominator has positive leading coefficient and degree ``k``;
    each nonzero ``Q_j`` has positive leading coefficient.
    """

    order: int
    signs: tuple[int, ...]
    q_polys: tuple[Poly, ...]
    den_polys: tuple[Poly, ...]
    k: int
    initial_terms: Mapping[int, Fraction]
    recurrence_start: int
    claim_start: int
    relaxations: tuple[str, ...] = ()
    name: str = ""
    _int_polys: tuple = field(default=None, repr=False, compare=False)
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def first_index(self) -> int:
        return self.recurrence_start - self.order

    def limit_numerator(self, j: int) -> Fraction:
        """Coefficient of ``n**k`` in ``Q_j`` (1-based ``j``); zero when ``deg Q_j < k``."""
        c = self.q_polys[j - 1].coeffs
        return c[self.k] if len(c) == self.k + 1 else Fraction(0)

    def limit_denominator(self, j: int) -> Fraction:
        return self.den_polys[j - 1].leading

    def coefficient(self, j: int, n: int) -> Fraction:
        """Exact value of ``signs[j] * Q_j(n) / P2_j(n)``."""
        return self.signs[j - 1] * poly_eval(self.q_polys[j - 1], Fraction(n)) / poly_eval(
            self.den_polys[j - 1], Fraction(n)
        )

    def as_spec(self) -> RecurrenceSpec:
        return RecurrenceSpec(
            self.order,
            tuple(q.scale(s) for s, q in zip(self.signs, self.q_polys)),
            self.den_polys,
            dict(self.initial_terms),
            self.recurrence_start,
            self.claim_start,
            self.name,
        )

    def integer_polys(self) -> tuple[list[list[int]], list[list[int]]]:
        """Per-coefficient integer numerator/denominator polynomials for the kernel."""
        if self._int_polys is None:
            nums, dens = [], []
            for s, q, p in zip(self.signs, self.q_polys, self.den_polys):
                (a, b), _ = integer_content_form([q.scale(s), p])
                nums.append(a)
                dens.append(b)
            object.__setattr__(self, "_int_polys", (nums, dens))
        return self._int_polys


def normalize(spec: RecurrenceSpec, strict: bool = False) -> NormalizedRecurrence:
    signs, qs, dens = [], [], []
    for j, (num, den) in enumerate(zip(spec.numerators, spec.denominators), start=1):
        if den.leading < 0:
            num, den = -num, -den
        if num.is_zero():
            signs.append(0)
            qs.append(Poly())
        else:
            s = 1 if num.leading > 0 else -1
            signs.append(s)
            qs.append(num.scale(s))
            if num.degree > den.degree:
                raise NormalizationError(
                    f"numerator dominates denominator in coefficient {j}: "
                    f"degree {num.degree} > {den.degree}"
                )
        dens.append(den)

    k = max(p.degree for p in dens)
    low = [j for j, p in enumerate(dens, start=1) if p.degree != k]
    if low:
        raise NormalizationError(
            f"denominator degree below common degree k={k} in coefficients {low}; "
            "rewrite the recurrence over denominators of equal degree"
        )
    relaxed = [j for j, q in enumerate(qs, start=1) if not q.is_zero() and q.degree < k]
    zeros = [j for j, s in enumerate(signs, start=1) if s == 0]
    if strict and (relaxed or zeros):
        bad = sorted(relaxed + zeros)
        raise NormalizationError(
            f"degree mismatch with strict mode: numerators {bad} do not have degree k={k}"
        )
    relaxations = []
    if zeros:
        relaxations.append(ZERO_NUMERATOR)
    if relaxed:
        relaxations.append(DEGREE_RELAXED)
    return NormalizedRecurrence(
        order=spec.order,
        signs=tuple(signs),
        q_polys=tuple(qs),
        den_polys=tuple(dens),
        k=k,
        initial_terms=dict(spec.initial_terms),
        recurrence_start=spec.recurrence_start,
        claim_start=spec.claim_start,
        relaxations=tuple(relaxations),
        name=spec.name,
    )


_ROOT_SCAN_LIMIT = 10**7


def _integer_roots_from(coeffs: list[int], start: int) -> list[int]:
    # strip the factor n**m: root 0, then the remaining constant term is nonzero
    roots = []
    m = 0
    while coeffs[m] == 0:
        m += 1
    if m and start <= 0:
        roots.append(0)
    rest = coeffs[m:]
    if len(rest) == 1:
        return roots
    lead = abs(rest[-1])
    bound = 1 + max(abs(c) for c in rest[:-1]) // lead + 1
    lo = max(start, -bound)
    if bound - lo > _ROOT_SCAN_LIMIT:
        raise NormalizationError(f"root bound {bound} too large to scan for integer roots")
    c0 = rest[0]
    for x in range(lo, bound + 1):
        if x == 0 or c0 % x:
            continue
        if kernel.eval_int_poly(rest, x) == 0:
            roots.append(x)
    return sorted(roots)


def validate_denominators(nr: NormalizedRecurrence) -> list[int]:
    """Integer indices ``n >= recurrence_start`` at which some denominator vanishes."""
    found = set()
    for p in nr.den_polys:
        coeffs, _ = integer_content_form([p])
        found.update(_integer_roots_from(coeffs[0], nr.recurrence_start))
    return sorted(found)


def ensure_well_defined(nr: NormalizedRecurrence) -> None:
    bad = validate_denominators(nr)
    if bad:
        raise NormalizationError(f"denominator vanishes at n = {bad}")


def _frac(x: int, y: int) -> Fraction:
    # kernel output is already reduced; skip the big gcd when integral
    return Fraction(x) if y == 1 else Fraction(x, y)


def _window(nr: NormalizedRecurrence) -> tuple[list[int], list[int]]:
    xs, ys = [], []
    for i in range(nr.first_index, nr.recurrence_start):
        v = nr.initial_terms[i]
        xs.append(v.numerator)
        ys.append(v.denominator)
    return xs, ys


class TermGenerator:
    """Memoized forward evaluation of the sequence.

    With ``keep_history=False`` only the last ``d`` terms are retained, so
    ``term`` only accepts indices at or after the oldest retained one.
    """

    block_size = 256

    def __init__(self, nr: NormalizedRecurrence, keep_history: bool = True):
        self.nr = nr
        self.keep_history = keep_history
        self._nums, self._dens = nr.integer_polys()
        self._xs, self._ys = _window(nr)
        self._next = nr.recurrence_start
        self._history: dict[int, Fraction] = dict(nr.initial_terms)

    @property
    def computed_through(self) -> int:
        return self._next - 1

    def _extend(self, upto: int) -> None:
        while self._next <= upto:
            count = min(self.block_size, upto - self._next + 1)
            out = kernel.block(self._nums, self._dens, self._xs, self._ys, self._next, count)
            if self.keep_history:
                for i, (x, y) in enumerate(out, start=self._next):
                    self._history[i] = _frac(x, y)
            self._next += count
        if not self.keep_history:
            d = self.nr.order
            self._history = {
                self._next - d + i: _frac(x, y)
                for i, (x, y) in enumerate(zip(self._xs, self._ys))
            }

    def term(self, n: int) -> Fraction:
        if n < self.nr.first_index:
            raise IndexError(f"index {n} is below the first known index {self.nr.first_index}")
        if n >= self._next:
            self._extend(n)
        try:
            return self._history[n]
        except KeyError:
            raise IndexError(f"term {n} was discarded (history disabled)") from None

    def __iter__(self) -> Iterator[tuple[int, Fraction]]:
        return iter_terms(self.nr)


def term(nr: NormalizedRecurrence, n: int) -> Fraction:
    """Exact ``a_n``, memoized on ``nr`` so consecutive calls cost one step each."""
    gen = nr._cache.get("terms")
    if gen is None:
        gen = nr._cache["terms"] = TermGenerator(nr)
    return gen.term(n)


def iter_terms(nr: NormalizedRecurrence, start: int | None = None) -> Iterator[tuple[int, Fraction]]:
    """Yield ``(n, a_n)`` from ``start`` onward, holding only a sliding window."""
    first = nr.first_index
    start = first if start is None else start
    if start < first:
        raise IndexError(f"index {start} is below the first known index {first}")
    for i in range(max(start, first), nr.recurrence_start):
        yield i, nr.initial_terms[i]
    nums, dens = nr.integer_polys()
    xs, ys = _window(nr)
    n = nr.recurrence_start
    block = 64
    while True:
        out = kernel.block(nums, dens, xs, ys, n, block)
        for i, (x, y) in enumerate(out, start=n):
            if i >= start:
                yield i, _frac(x, y)
        n += block

