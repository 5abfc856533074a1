"""Search for an admissible index and turn a witness into a positivity verdict.

An index ``u >= r`` is admissible when ``p < a_n / a_{n-1} < q`` for the
``d`` indices ``u .. u+d-1``.  Together with ``a_u > 0`` this makes every
later term positive; adding ``a_n > 0`` on ``[N0, u]`` gives positivity
from ``N0``.  All comparisons are integer cross-multiplications.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import kernel
from .recurrence import NormalizedRecurrence, _window
from .witness import Witness

POSITIVE = "PositiveFrom"
ULTIMATELY_POSITIVE = "UltimatelyPositiveFrom"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Verdict:
    kind: str
    start: Optional[int] = None
    reason: str = ""

    def __str__(self) -> str:
        if self.kind == INCONCLUSIVE:
            return f"{INCONCLUSIVE}({self.reason})"
        return f"{self.kind}({self.start})"

    @property
    def positive(self) -> bool:
        return self.kind != INCONCLUSIVE


@dataclass
class ProofResult:
    witness: Witness
    u: Optional[int]
    window_ratios: list[Fraction]
    prefix_checked_through: Optional[int]
    verdict: Verdict
    first_nonpositive: Optional[int] = None
    scanned_through: Optional[int] = None
    window_terms: list[Fraction] = field(default_factory=list)


def default_scan_budget(r: int) -> int:
    return 10 * r + 10**6


class _Stream:
    """Walk over the sequence holding ``a_{n-d-1} .. a_{n-1}`` (``d + 1`` terms).

    Indices before the first known term are padded with zeros, which the
    recurrence never reads.
    """

    def __init__(self, nr: NormalizedRecurrence):
        self.nr = nr
        self.nums, self.dens = nr.integer_polys()
        xs, ys = _window(nr)
        self.xs, self.ys = [0] + xs, [1] + ys
        self.n = nr.recurrence_start  # next index to compute

    def scan(self, stop, lo=(0, 1), hi=(0, 1), run_from=None, need=0, run=0,
             pos_from=None, first_bad=-1):
        run_from = stop + 1 if run_from is None else run_from
        pos_from = stop + 1 if pos_from is None else pos_from
        if stop < self.n:
            return self.n - 1, run, first_bad
        last, run, first_bad = kernel.scan(
            self.nums, self.dens, self.xs, self.ys, self.n, stop, lo[0], lo[1], hi[0], hi[1],
            run_from, need, run, pos_from, first_bad,
        )
        self.n = last + 1
        return last, run, first_bad

    def tail(self) -> dict[int, Fraction]:
        """The retained terms by index (padding excluded)."""
        size = len(self.xs)
        out = {}
        for i, (x, y) in enumerate(zip(self.xs, self.ys)):
            idx = self.n - size + i
            if idx >= self.nr.first_index:
                out[idx] = Fraction(x, y)
        return out


def _initial_pairs(nr: NormalizedRecurrence):
    return [(i, nr.initial_terms[i]) for i in range(nr.first_index, nr.recurrence_start)]


def _ratio_ok(cur: Fraction, prev: Fraction, w: Witness) -> bool:
    return kernel.ratio_in(
        cur.numerator, cur.denominator, prev.numerator, prev.denominator,
        w.p.numerator, w.p.denominator, w.q.numerator, w.q.denominator,
    )


def _walk(nr: NormalizedRecurrence, w: Witness, start: int, stop: int, pos_from: int):
    """Stream ``a`` until ``d`` consecutive ratios from index ``start`` on lie in ``(p, q)``.

    Returns ``(last_index, run, first_bad, terms)`` where ``terms`` maps the
    indices ``last-d .. last`` to their values and ``first_bad`` is the
    first index ``>= pos_from`` with a nonpositive term (``-1`` if none).
    """
    d = nr.order
    run = 0
    first_bad = -1
    prev = None
    last = nr.first_index - 1
    init = _initial_pairs(nr)
    for i, v in init:
        if i > stop:
            break
        if first_bad < 0 and i >= pos_from and v <= 0:
            first_bad = i
        if i >= start:
            run = run + 1 if _ratio_ok(v, prev, w) else 0
        prev = v
        last = i
        if run >= d:
            return last, run, first_bad, {j: t for j, t in init if last - d <= j <= last}
    s = _Stream(nr)
    last, run, first_bad = s.scan(
        stop, (w.p.numerator, w.p.denominator), (w.q.numerator, w.q.denominator),
        start, d, run, pos_from, first_bad,
    )
    return last, run, first_bad, s.tail()


def terms_between(nr: NormalizedRecurrence, lo: int, hi: int) -> dict[int, Fraction]:
    """Exact ``a_lo .. a_hi`` using a sliding window (no history kept)."""
    if lo < nr.first_index:
        raise IndexError(f"index {lo} is below the first known index {nr.first_index}")
    out = {i: v for i, v in _initial_pairs(nr) if lo <= i <= hi}
    if hi >= nr.recurrence_start:
        s = _Stream(nr)
        s.scan(lo - 1)
        nums, dens = s.nums, s.dens
        count = hi - s.n + 1
        for i, (x, y) in enumerate(kernel.block(nums, dens, s.xs, s.ys, s.n, count), start=s.n):
            if i >= lo:
                out[i] = Fraction(x, y)
    return out


def check_window(nr: NormalizedRecurrence, w: Witness, u: int) -> tuple[bool, list[Fraction], str]:
    """Test ``p < a_n/a_{n-1} < q`` for ``n = u .. u+d-1``.

    Returns ``(ok, ratios, diagnostic)``; ratios stop at the first zero divisor.
    """
    if u < w.r:
        return False, [], f"u={u} is below the threshold r={w.r}"
    if u - 1 < nr.first_index:
        return False, [], f"a_{u - 1} precedes the first known index"
    return window_ratios(terms_between(nr, u - 1, u + nr.order - 1), u, nr.order, w.p, w.q)


def window_ratios(terms, u: int, d: int, p: Fraction, q: Fraction):
    ratios = []
    ok = True
    diag = ""
    for n in range(u, u + d):
        prev, cur = terms[n - 1], terms[n]
        if prev == 0:
            return False, ratios, f"a_{n - 1} = 0 inside the window"
        ratio = cur / prev
        ratios.append(ratio)
        if ok and not (p < ratio < q):
            ok = False
            diag = f"ratio a_{n}/a_{n - 1} outside ({p}, {q})"
    return ok, ratios, diag


def find_min_admissible_u(nr: NormalizedRecurrence, w: Witness, scan_budget: Optional[int] = None):
    """Smallest admissible ``u`` in ``[r, r + scan_budget]``.

    Returns ``(u, last_index_scanned)`` with ``u = None`` when the budget runs out.
    """
    budget = default_scan_budget(w.r) if scan_budget is None else scan_budget
    d = nr.order
    start = max(w.r, nr.first_index + 1)
    last, run, _, _ = _walk(nr, w, start, w.r + budget + d - 1, pos_from=w.r + budget + d)
    if run >= d:
        return last - d + 1, last
    return None, last


def check_prefix(nr: NormalizedRecurrence, start: int, u: int) -> tuple[bool, Optional[int]]:
    """``a_n > 0`` for every ``start <= n <= u``; returns ``(ok, first_failing_index)``."""
    if start < nr.first_index:
        raise IndexError(f"index {start} is below the first known index {nr.first_index}")
    for i, v in _initial_pairs(nr):
        if start <= i <= u and v <= 0:
            return False, i
    _, _, bad = _Stream(nr).scan(u, pos_from=start)
    return (bad < 0), (bad if bad >= 0 else None)


def prove(nr: NormalizedRecurrence, w: Witness, scan_budget: Optional[int] = None) -> ProofResult:
    """One streaming pass: locate the minimal admissible ``u`` and check the prefix on the way."""
    d = nr.order
    budget = default_scan_budget(w.r) if scan_budget is None else scan_budget
    start = max(w.r, nr.first_index + 1)
    last, run, bad, tail = _walk(nr, w, start, w.r + budget + d - 1, nr.claim_start)
    bad = bad if bad >= 0 else None
    if run < d:
        return ProofResult(
            w, None, [], None,
            Verdict(INCONCLUSIVE, reason=f"no admissible u within budget (scanned through n={last})"),
            first_nonpositive=bad, scanned_through=last,
        )
    u = last - d + 1
    ok, ratios, diag = window_ratios(tail, u, d, w.p, w.q)
    assert ok, diag
    a_u = tail[u]
    if a_u <= 0:
        verdict = Verdict(INCONCLUSIVE, reason=f"a_{u} <= 0: the tail past u is not positive")
    elif bad is None or bad > u:
        verdict = Verdict(POSITIVE, nr.claim_start)
    else:
        verdict = Verdict(ULTIMATELY_POSITIVE, u)
    return ProofResult(
        witness=w,
        u=u,
        window_ratios=ratios,
        prefix_checked_through=u,
        verdict=verdict,
        first_nonpositive=bad,
        scanned_through=last,
        window_terms=[tail[i] for i in range(u, u + d)],
    )
