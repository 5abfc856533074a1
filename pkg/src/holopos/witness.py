"""Ratio-bound witnesses: constants, guard polynomials and the threshold index.

For rationals ``0 < p < q`` the guard polynomials are

    f(n) = sum_j s_j Q_j(n+1) A_j(n+1) / l_j**(j-1) - p * prod_j P2_j(n+1)
    g(n) = q * prod_j P2_j(n+1) - sum_j s_j Q_j(n+1) A_j(n+1) / h_j**(j-1)

with ``A_j = prod_{i != j} P2_i``, ``l_j = q`` and ``h_j = p`` for positive
signs (swapped for negative ones).  Their leading coefficients ``p0, q0``
must be positive; ``r`` is the index past which ``f``, ``g`` and every
``Q_j``, ``P2_j`` are provably positive.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .exactmath import Poly, floor_rational, l_bound, poly_prod, poly_shift, to_rational
from .recurrence import NormalizedRecurrence

GRID_MARGINS = tuple(Fraction(x) for x in ("1/2", "3/10", "1/5", "1/10", "1/20", "1/50", "1/100"))
DENOMINATOR_CAP = 64


class WitnessError(ValueError):
    pass


@dataclass(frozen=True)
class Witness:
    p: Fraction
    q: Fraction
    p0: Fraction
    q0: Fraction
    f: Poly
    g: Poly
    r: int
    lows: tuple[Fraction, ...]
    highs: tuple[Fraction, ...]


def selectors(nr: NormalizedRecurrence, p: Fraction, q: Fraction):
    """Per-coefficient ``(l_j, h_j)``; zero-sign coefficients get ``(q, p)`` but never matter."""
    lows = tuple(p if s < 0 else q for s in nr.signs)
    highs = tuple(q if s < 0 else p for s in nr.signs)
    return lows, highs


def _check_pq(p: Fraction, q: Fraction) -> None:
    if not 0 < p < q:
        raise WitnessError(f"need 0 < p < q, got p={p}, q={q}")


def compute_constants(nr: NormalizedRecurrence, p, q) -> tuple[Fraction, Fraction]:
    p, q = to_rational(p), to_rational(q)
    _check_pq(p, q)
    lows, highs = selectors(nr, p, q)
    leads = [nr.limit_denominator(j) for j in range(1, nr.order + 1)]
    total = Fraction(1)
    for a in leads:
        total *= a
    sum_l = Fraction(0)
    sum_h = Fraction(0)
    for j in range(1, nr.order + 1):
        s = nr.signs[j - 1]
        if s == 0:
            continue
        a_j = total / leads[j - 1]
        term = s * nr.limit_numerator(j) * a_j
        sum_l += term / lows[j - 1] ** (j - 1)
        sum_h += term / highs[j - 1] ** (j - 1)
    return sum_l - p * total, q * total - sum_h


def compute_guards(nr: NormalizedRecurrence, p, q) -> tuple[Poly, Poly]:
    p, q = to_rational(p), to_rational(q)
    _check_pq(p, q)
    lows, highs = selectors(nr, p, q)
    dens = [poly_shift(P, Fraction(1)) for P in nr.den_polys]
    full = poly_prod(dens)
    sum_l = Poly()
    sum_h = Poly()
    for j in range(1, nr.order + 1):
        s = nr.signs[j - 1]
        if s == 0:
            continue
        others = poly_prod(dens[i] for i in range(nr.order) if i != j - 1)
        term = (poly_shift(nr.q_polys[j - 1], Fraction(1)) * others).scale(s)
        sum_l = sum_l + term.scale(1 / lows[j - 1] ** (j - 1))
        sum_h = sum_h + term.scale(1 / highs[j - 1] ** (j - 1))
    return sum_l - full.scale(p), full.scale(q) - sum_h


def threshold_terms(nr: NormalizedRecurrence, f: Poly, g: Poly, p0: Fraction, q0: Fraction):
    """Named ratios whose floors make up ``r - 1``.

    Numerators with a degree below ``k`` are bounded with their own leading
    coefficient, which is what the positivity argument for ``Q_j`` needs.
    """
    if p0 <= 0 or q0 <= 0:
        raise WitnessError(f"constants must be positive: p0={p0}, q0={q0}")
    out = [("f", l_bound(f) / p0), ("g", l_bound(g) / q0)]
    for j in range(1, nr.order + 1):
        q = nr.q_polys[j - 1]
        if nr.signs[j - 1] != 0:
            out.append((f"Q{j}", l_bound(q) / q.leading))
        den = nr.den_polys[j - 1]
        out.append((f"P2{j}", l_bound(den) / den.leading))
    return out


def compute_r(nr: NormalizedRecurrence, f: Poly, g: Poly, p0: Fraction, q0: Fraction) -> int:
    r = max(floor_rational(v) for _, v in threshold_terms(nr, f, g, p0, q0)) + 1
    if r > sys.maxsize:
        raise WitnessError(f"threshold r={r} exceeds the native integer range")
    return max(r, 1)


def build_witness(nr: NormalizedRecurrence, p, q) -> Witness:
    p, q = to_rational(p), to_rational(q)
    p0, q0 = compute_constants(nr, p, q)
    if p0 <= 0 or q0 <= 0:
        raise WitnessError(f"(p, q) = ({p}, {q}) gives p0 = {p0}, q0 = {q0}; both must be positive")
    f, g = compute_guards(nr, p, q)
    r = compute_r(nr, f, g, p0, q0)
    lows, highs = selectors(nr, p, q)
    return Witness(p, q, p0, q0, f, g, r, lows, highs)


def lemma_guard(w: Witness, nr: NormalizedRecurrence) -> bool:
    """Exact inequalities making every guard polynomial positive for ``n >= r``."""
    if w.r < 1 or w.p0 <= 0 or w.q0 <= 0:
        return False
    pairs = [(w.p0, w.f), (w.q0, w.g)]
    for j in range(1, nr.order + 1):
        if nr.signs[j - 1] != 0:
            q = nr.q_polys[j - 1]
            pairs.append((q.leading, q))
        den = nr.den_polys[j - 1]
        pairs.append((den.leading, den))
    return all(lead * w.r > l_bound(h) for lead, h in pairs)


def round_down(x: Fraction, cap: int = DENOMINATOR_CAP) -> Fraction:
    """Largest rational ``<= x`` whose denominator is at most ``cap``."""
    return max(Fraction((x * b).__floor__(), b) for b in range(1, cap + 1))


def round_up(x: Fraction, cap: int = DENOMINATOR_CAP) -> Fraction:
    return -round_down(-x, cap)


def candidate_pairs(lo: Fraction, hi: Fraction, margins: Iterable[Fraction] = GRID_MARGINS):
    seen = set()
    for delta in margins:
        p = round_down(lo * (1 - delta))
        q = round_up(hi * (1 + delta))
        if p <= 0 or (p, q) in seen:
            continue
        seen.add((p, q))
        yield delta, p, q


def auto_select_pq(nr: NormalizedRecurrence, mu_interval) -> tuple[Fraction, Fraction, Witness]:
    """Pick ``(p, q)`` around the dominant root from a fixed grid, minimizing ``r``."""
    lo, hi = to_rational(mu_interval.lo), to_rational(mu_interval.hi)
    if lo < 0 or hi <= 0:
        raise WitnessError("dominant root interval must be positive")
    best = None
    rejected = []
    for delta, p, q in candidate_pairs(lo, hi):
        p0, q0 = compute_constants(nr, p, q)
        if p0 <= 0 or q0 <= 0:
            rejected.append((p, q, p0, q0))
            continue
        w = build_witness(nr, p, q)
        key = (w.r, q - p, p.denominator + q.denominator)
        if best is None or key < best[0]:
            best = (key, w)
    if best is None and not rejected:
        raise WitnessError(f"no valid (p,q) found: no positive grid point below {lo}")
    if best is None:
        detail = "; ".join(f"p={p}, q={q}: p0={p0}, q0={q0}" for p, q, p0, q0 in rejected)
        raise WitnessError(f"no valid (p,q) found ({detail})")
    w = best[1]
    return w.p, w.q, w
