"""Positivity certificates: emission, canonical serialization, independent checking.

``check`` trusts nothing stored in the file except the embedded spec and
the claimed ``(p, q, r, u)``.  It renormalizes, recomputes every derived
quantity and regenerates the sequence with its own integer loop.  It
deliberately does not import the root-finding or dominance code: the
ratio-limit hypothesis plays no part in validity.
"""
from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

from .exactmath import Poly, format_rational, to_rational
from .prover import INCONCLUSIVE, POSITIVE, ULTIMATELY_POSITIVE, ProofResult
from .recurrence import (
    NormalizationError,
    NormalizedRecurrence,
    RecurrenceSpec,
    SpecError,
    normalize,
    parse_spec,
    validate_denominators,
)
from .witness import WitnessError, compute_constants, compute_guards, compute_r

FORMAT_VERSION = 1
KIND = "holopos.positivity-certificate"
EXTENSION = ".poscert.json"

NOTES = (
    "validity rests on the window check at u and the threshold r; the ratio-limit "
    "hypothesis is not asserted",
)


class CertificateError(ValueError):
    """Raised for certificates that cannot be parsed or emitted."""


@dataclass(frozen=True)
class CheckResult:
    accepted: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.accepted


def emit(pr: ProofResult, nr: NormalizedRecurrence, spec: RecurrenceSpec) -> dict[str, Any]:
    if pr.verdict.kind == INCONCLUSIVE or pr.u is None:
        raise CertificateError(f"cannot certify an inconclusive result: {pr.verdict.reason}")
    w = pr.witness
    notes = list(NOTES)
    if pr.verdict.kind == POSITIVE and pr.verdict.start != 0:
        notes.append(f"positivity is claimed from index {pr.verdict.start} rather than 0")
    return {
        "kind": KIND,
        "format_version": FORMAT_VERSION,
        "spec": spec.to_json(),
        "normalization": {
            "signs": list(nr.signs),
            "q_polys": [q.to_json() for q in nr.q_polys],
            "k": nr.k,
        },
        "witness": {
            "p": format_rational(w.p),
            "q": format_rational(w.q),
            "p0": format_rational(w.p0),
            "q0": format_rational(w.q0),
            "f": w.f.to_json(),
            "g": w.g.to_json(),
            "r": w.r,
        },
        "u": pr.u,
        "window_ratios": [format_rational(x) for x in pr.window_ratios],
        "claim": {"verdict": pr.verdict.kind, "start": pr.verdict.start},
        "relaxations": list(nr.relaxations),
        "notes": notes,
    }


def dumps(cert: dict[str, Any]) -> str:
    """Canonical text: sorted keys, no insignificant whitespace, trailing newline."""
    return json.dumps(cert, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


def write(cert: dict[str, Any], path: str | Path) -> None:
    Path(path).write_text(dumps(cert), encoding="utf-8")


def loads(text: str | bytes) -> dict[str, Any]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CertificateError(f"not JSON: {exc}") from None
    if not isinstance(doc, dict) or doc.get("kind") != KIND:
        raise CertificateError("not a positivity certificate (missing or wrong 'kind')")
    return doc


def read(path: str | Path) -> dict[str, Any]:
    return loads(Path(path).read_bytes())


class _Reject(Exception):
    pass


def _get(doc, *keys):
    cur = doc
    for key in keys:
        if not isinstance(cur, dict) or key not in cur:
            raise _Reject(f"missing field {'.'.join(keys)}")
        cur = cur[key]
    return cur


def _rational(doc, *keys) -> Fraction:
    raw = _get(doc, *keys)
    if not isinstance(raw, str):
        raise _Reject(f"{'.'.join(keys)} must be a rational string")
    try:
        return to_rational(raw)
    except ValueError as exc:
        raise _Reject(f"{'.'.join(keys)}: {exc}") from None


def _integer(doc, *keys) -> int:
    raw = _get(doc, *keys)
    if isinstance(raw, bool) or not isinstance(raw, int):
        raise _Reject(f"{'.'.join(keys)} must be an integer")
    return raw


def _poly(doc, *keys) -> Poly:
    raw = _get(doc, *keys)
    if not isinstance(raw, list) or not all(isinstance(c, str) for c in raw):
        raise _Reject(f"{'.'.join(keys)} must be an array of rational strings")
    try:
        return Poly(raw)
    except ValueError as exc:
        raise _Reject(f"{'.'.join(keys)}: {exc}") from None


def _int_pairs(spec: RecurrenceSpec) -> list[tuple[list[int], list[int]]]:
    out = []
    for num, den in zip(spec.numerators, spec.denominators):
        scale = 1
        for c in num.coeffs + den.coeffs:
            scale = math.lcm(scale, c.denominator)
        out.append(([int(c * scale) for c in num.coeffs], [int(c * scale) for c in den.coeffs]))
    return out


def _horner(coeffs: list[int], n: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = acc * n + c
    return acc


def fresh_terms(spec: RecurrenceSpec):
    """Yield ``(n, a_n)`` straight from the raw spec, independently of the prover's kernel."""
    d = spec.order
    win = deque(spec.initial_terms[i] for i in range(spec.first_index, spec.recurrence_start))
    for i in range(spec.first_index, spec.recurrence_start):
        yield i, spec.initial_terms[i]
    pairs = _int_pairs(spec)
    n = spec.recurrence_start
    while True:
        coeffs = []
        for a, b in pairs:
            den = _horner(b, n)
            if den == 0:
                raise ZeroDivisionError(f"denominator vanishes at n={n}")
            coeffs.append(Fraction(_horner(a, n), den))
        lcm = 1
        for j in range(1, d + 1):
            lcm = math.lcm(lcm, coeffs[j - 1].denominator * win[-j].denominator)
        num = 0
        for j in range(1, d + 1):
            c, t = coeffs[j - 1], win[-j]
            num += c.numerator * t.numerator * (lcm // (c.denominator * t.denominator))
        g = math.gcd(lcm, num % lcm)
        a = Fraction(num // g) if g == lcm else Fraction(num // g, lcm // g)
        yield n, a
        win.append(a)
        win.popleft()
        n += 1


def _check(doc: dict[str, Any]) -> None:
    version = _get(doc, "format_version")
    if version != FORMAT_VERSION:
        raise _Reject(f"unsupported format version {version!r}")
    if doc.get("kind") != KIND:
        raise _Reject("wrong certificate kind")
    try:
        spec = parse_spec(_get(doc, "spec"))
        nr = normalize(spec)
    except (SpecError, NormalizationError) as exc:
        raise _Reject(f"embedded spec invalid: {exc}") from None
    d = spec.order

    signs = _get(doc, "normalization", "signs")
    qs = _get(doc, "normalization", "q_polys")
    if (
        signs != list(nr.signs)
        or not isinstance(qs, list)
        or len(qs) != d
        or [_poly({"x": q}, "x") for q in qs] != list(nr.q_polys)
        or _get(doc, "normalization", "k") != nr.k
    ):
        raise _Reject("normalization record does not match the embedded spec")
    if _get(doc, "relaxations") != list(nr.relaxations):
        raise _Reject("relaxation flags do not match the embedded spec")
    bad = validate_denominators(nr)
    if bad:
        raise _Reject(f"denominator vanishes at n = {bad}")

    p = _rational(doc, "witness", "p")
    q = _rational(doc, "witness", "q")
    if not 0 < p < q:
        raise _Reject(f"need 0 < p < q, got p={p}, q={q}")
    p0, q0 = compute_constants(nr, p, q)
    if (p0, q0) != (_rational(doc, "witness", "p0"), _rational(doc, "witness", "q0")):
        raise _Reject(f"constant mismatch: recomputed p0={p0}, q0={q0}")
    if p0 <= 0 or q0 <= 0:
        raise _Reject(f"constants not positive: p0={p0}, q0={q0}")
    f, g = compute_guards(nr, p, q)
    if f != _poly(doc, "witness", "f") or g != _poly(doc, "witness", "g"):
        raise _Reject("guard-polynomial mismatch")
    if f.leading != p0 or g.leading != q0:
        raise _Reject("guard polynomial leading coefficients differ from p0, q0")
    try:
        r_min = compute_r(nr, f, g, p0, q0)
    except WitnessError as exc:
        raise _Reject(str(exc)) from None
    r = _integer(doc, "witness", "r")
    if r < r_min:
        raise _Reject(f"r below recomputed threshold: stored r={r}, recomputed r={r_min}")
    u = _integer(doc, "u")
    if u < r:
        raise _Reject(f"u={u} below threshold r={r}")
    if u - 1 < spec.first_index:
        raise _Reject(f"a_{u - 1} precedes the first known index")

    verdict = _get(doc, "claim", "verdict")
    start = _get(doc, "claim", "start")
    if verdict == POSITIVE:
        if start != spec.claim_start:
            raise _Reject(f"claim start {start!r} differs from the spec's claim_start {spec.claim_start}")
    elif verdict == ULTIMATELY_POSITIVE:
        if start != u:
            raise _Reject(f"ultimate-positivity claim must start at u={u}, got {start!r}")
    else:
        raise _Reject(f"unknown verdict {verdict!r}")

    stored = _get(doc, "window_ratios")
    if not isinstance(stored, list) or len(stored) != d:
        raise _Reject(f"expected {d} window ratios")
    stored = [_rational({"x": x}, "x") for x in stored]

    prefix_from = spec.claim_start if verdict == POSITIVE else u + 1
    prev = None
    ratios = []
    for n, a in fresh_terms(spec):
        if prefix_from <= n <= u and a <= 0:
            raise _Reject(f"prefix failure at index {n}: a_{n} = {'0' if a == 0 else 'negative'}")
        if n == u and a <= 0:
            raise _Reject(f"a_{u} is not positive")
        if u <= n <= u + d - 1:
            if prev == 0:
                raise _Reject(f"window failure at index {n}: a_{n - 1} = 0")
            ratio = a / prev
            if not p < ratio < q:
                raise _Reject(f"window failure at index {n}: ratio outside ({p}, {q})")
            ratios.append(ratio)
        if n >= u + d - 1:
            break
        prev = a
    if ratios != stored:
        raise _Reject("stored window ratios differ from the recomputed ones")


def check(cert: dict[str, Any] | str | bytes) -> CheckResult:
    """Re-verify a certificate from scratch."""
    try:
        doc = loads(cert) if isinstance(cert, (str, bytes)) else cert
        _check(doc)
    except _Reject as exc:
        return CheckResult(False, str(exc))
    except CertificateError as exc:
        return CheckResult(False, str(exc))
    return CheckResult(True)
