"""Command-line front end: ``analyze``, ``certify``, ``check`` and ``terms``.

Exit codes: 0 success or accept, 1 error or reject, 2 inconclusive.
"""
from __future__ import annotations

import argparse
import decimal
import hashlib
import itertools
import json
import logging
import math
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import certificate
from .exactmath import Poly, format_rational, to_rational
from .prover import INCONCLUSIVE, prove
from .recurrence import (
    NormalizationError,
    SpecError,
    ensure_well_defined,
    iter_terms,
    load_spec,
    normalize,
)
from .spectrum import char_poly, isolate_positive_roots, refine
from .witness import WitnessError, auto_select_pq, build_witness

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INCONCLUSIVE = 2

DATA_DIR = Path(__file__).with_name("data")
MU_WIDTH = Fraction(1, 10**8)
DIGIT_LIMIT = 200

log = logging.getLogger("holopos")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which here means "inconclusive"
    def error(self, message):
        raise UsageError(message)


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    path: str
    p: Optional[Fraction] = None
    q: Optional[Fraction] = None
    scan_budget: Optional[int] = None
    strict: bool = False
    output: Optional[str] = None
    full: bool = False
    json: bool = False
    verbosity: int = 0
    upto: Optional[int] = None


def parse_rational_arg(text: str) -> Fraction:
    """``a/b`` or an integer; decimals are refused."""
    try:
        return to_rational(text)
    except (TypeError, ValueError):
        raise UsageError(f"not an exact rational: {text!r} (use a/b or an integer)") from None


def resolve_spec_path(name: str) -> Path:
    """A file path, or the name of a bundled fixture (with or without ``.json``)."""
    path = Path(name)
    if path.exists():
        return path
    for candidate in (DATA_DIR / name, DATA_DIR / f"{name}.json"):
        if candidate.exists():
            return candidate
    raise FileNotFoundError(f"no such spec file: {name}")


def bundled_fixtures() -> list[str]:
    return sorted(p.name for p in DATA_DIR.glob("*.json"))


def digit_count(x: int) -> int:
    x = abs(x)
    if x == 0:
        return 1
    est = int(x.bit_length() * math.log10(2))
    return est + 1 if x >= 10**est else est


def format_term(value: Fraction, full: bool = False) -> str:
    num, den = abs(value.numerator), value.denominator
    digits = digit_count(num)
    if full or (digits <= DIGIT_LIMIT and digit_count(den) <= DIGIT_LIMIT):
        return format_rational(value)
    sign = "-" if value < 0 else ""
    lead = num // 10 ** max(digits - 12, 0)
    text = f"{sign}⟨{digits} digits, leading {lead} …⟩"
    if den != 1:
        text += f"/⟨{digit_count(den)} digits⟩"
    return text


def decimal_text(x: Fraction, digits: int = 20) -> str:
    ctx = decimal.Context(prec=digits)
    return str(ctx.divide(decimal.Decimal(x.numerator), decimal.Decimal(x.denominator)))


def term_digest(x: Fraction) -> str:
    """Short fingerprint of an exact term, for eyeballing huge values."""
    return hashlib.sha256(format_rational(x).encode()).hexdigest()[:16]


def _interval_json(iv) -> dict:
    return {
        "lo": format_rational(iv.lo),
        "hi": format_rational(iv.hi),
        "exact": iv.exact,
        "approx": float(iv.midpoint()),
    }


def _interval_text(iv) -> str:
    if iv.exact:
        return f"{format_rational(iv.lo)} (exact root)"
    return f"({float(iv.lo):.12g}, {float(iv.hi):.12g}) ~ {float(iv.midpoint()):.10g}"


def _coeff_summary(h: Poly) -> dict:
    c = h.to_json()
    return {"degree": h.degree, "highest": c[::-1][:3], "lowest": c[:3]}


def _load(cfg: RunConfig):
    spec = load_spec(resolve_spec_path(cfg.path))
    nr = normalize(spec, strict=cfg.strict)
    ensure_well_defined(nr)
    return spec, nr


def _witness(cfg: RunConfig, nr, mu):
    if cfg.p is not None:
        return build_witness(nr, cfg.p, cfg.q)
    if mu is None:
        raise WitnessError("no positive real root to place (p, q) around; pass --p and --q")
    return auto_select_pq(nr, mu)[2]


def _roots(nr):
    cp = char_poly(nr)
    roots = [refine(cp, iv, MU_WIDTH) for iv in isolate_positive_roots(cp)]
    return cp, roots, (roots[-1] if roots else None)


def cmd_analyze(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    from .dominance import dominance_report

    spec, nr = _load(cfg)
    cp, roots, mu = _roots(nr)
    dom = dominance_report(cp)
    report = {
        "name": spec.name,
        "order": nr.order,
        "k": nr.k,
        "signs": list(nr.signs),
        "relaxations": list(nr.relaxations),
        "char_poly": cp.poly.to_json(),
        "char_poly_text": cp.poly.pretty("t"),
        "positive_roots": [_interval_json(iv) for iv in roots],
        "mu": _interval_json(mu) if mu else None,
        "dominance": dom.to_json(),
        "witness": None,
    }
    w = _witness(cfg, nr, mu)
    report["witness"] = {
        "p": format_rational(w.p),
        "q": format_rational(w.q),
        "source": "override" if cfg.p is not None else "auto",
        "p0": format_rational(w.p0),
        "q0": format_rational(w.q0),
        "r": w.r,
        "f": _coeff_summary(w.f),
        "g": _coeff_summary(w.g),
    }
    if cfg.json:
        print(json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False), file=out)
        return EXIT_OK

    print(f"sequence:        {spec.name or cfg.path}", file=out)
    print(f"order d, k:      {nr.order}, {nr.k}", file=out)
    print(f"signs:           {list(nr.signs)}", file=out)
    if nr.relaxations:
        print(f"relaxations:     {', '.join(nr.relaxations)}", file=out)
    print(f"char poly:       {cp.poly.pretty('t')}", file=out)
    print(f"mu:              {_interval_text(mu) if mu else 'none (no positive real root)'}", file=out)
    verdict = "unique" if dom.unique_dominant else "NOT unique"
    print(
        f"dominance:       {verdict} (|mu1| ~ {dom.dominant_modulus:.10g}, "
        f"|mu2| ~ {dom.second_modulus:.10g}; heuristic, not part of any certificate)",
        file=out,
    )
    if dom.diagnostic:
        print(f"                 {dom.diagnostic}", file=out)
    wj = report["witness"]
    print(f"(p, q):          ({wj['p']}, {wj['q']}) [{wj['source']}]", file=out)
    print(f"p0, q0:          {wj['p0']}, {wj['q0']}", file=out)
    print(f"r:               {w.r}", file=out)
    for label, h in (("f", w.f), ("g", w.g)):
        s = _coeff_summary(h)
        head = f"{label} (deg {s['degree']}):".ljust(17)
        print(f"{head}highest {', '.join(s['highest'])}; lowest {', '.join(s['lowest'])}", file=out)
    return EXIT_OK


def default_output(spec_path: str) -> Path:
    stem = Path(spec_path).name
    if stem.endswith(".json"):
        stem = stem[: -len(".json")]
    return Path(stem + certificate.EXTENSION)


def cmd_certify(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    t0 = time.perf_counter()
    spec, nr = _load(cfg)
    mu = _roots(nr)[2] if cfg.p is None else None
    w = _witness(cfg, nr, mu)
    log.info("witness p=%s q=%s r=%d", w.p, w.q, w.r)
    pr = prove(nr, w, cfg.scan_budget)
    elapsed = time.perf_counter() - t0
    summary = {
        "name": spec.name,
        "p": format_rational(w.p),
        "q": format_rational(w.q),
        "r": w.r,
        "u": pr.u,
        "verdict": pr.verdict.kind,
        "start": pr.verdict.start,
        "reason": pr.verdict.reason,
        "scanned_through": pr.scanned_through,
        "window": [
            {"n": pr.u + i, "ratio": decimal_text(ratio), "term_sha256": term_digest(t)}
            for i, (ratio, t) in enumerate(zip(pr.window_ratios, pr.window_terms))
        ],
        "certificate": None,
        "wall_time_s": round(elapsed, 3),
    }
    code = EXIT_INCONCLUSIVE
    if pr.verdict.kind != INCONCLUSIVE:
        path = Path(cfg.output) if cfg.output else default_output(cfg.path)
        certificate.write(certificate.emit(pr, nr, spec), path)
        summary["certificate"] = str(path)
        code = EXIT_OK
    if cfg.json:
        print(json.dumps(summary, sort_keys=True, indent=2, ensure_ascii=False), file=out)
        return code
    print(f"(p, q):    ({summary['p']}, {summary['q']})", file=out)
    print(f"r:         {w.r}", file=out)
    print(f"u:         {pr.u if pr.u is not None else '-'}", file=out)
    for row in summary["window"]:
        n = row["n"]
        print(f"  a_{n}/a_{n - 1} ~ {row['ratio']}  (a_{n} sha256 {row['term_sha256']})", file=out)
    print(f"verdict:   {pr.verdict}", file=out)
    if code == EXIT_INCONCLUSIVE:
        print(f"scanned through n = {pr.scanned_through}", file=out)
    else:
        print(f"written:   {summary['certificate']}", file=out)
    print(f"wall time: {elapsed:.2f} s", file=out)
    return code


def cmd_check(cfg: RunConfig, out=None, err=None) -> int:
    out, err = out or sys.stdout, err or sys.stderr
    raw = Path(cfg.path).read_bytes()
    try:
        doc = certificate.loads(raw)
    except certificate.CertificateError as exc:
        print(f"error: cannot parse certificate: {exc}", file=err)
        return EXIT_ERROR
    res = certificate.check(doc)
    if cfg.json:
        print(json.dumps({"accepted": res.accepted, "reason": res.reason}, sort_keys=True), file=out)
    elif res.accepted:
        print("accept", file=out)
    if not res.accepted:
        print(f"reject: {res.reason}", file=err)
        return EXIT_ERROR
    return EXIT_OK


def cmd_terms(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    spec, nr = _load(cfg)
    n = cfg.upto
    if n < nr.first_index:
        raise UsageError(f"n = {n} is below the first known index {nr.first_index}")
    rows = itertools.takewhile(lambda t: t[0] <= n, iter_terms(nr))
    if cfg.json:
        doc = {"name": spec.name, "terms": [{"n": i, "value": format_rational(v)} for i, v in rows]}
        print(json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False), file=out)
        return EXIT_OK
    for i, v in rows:
        print(f"{i}\t{format_term(v, cfg.full)}", file=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="holopos", description="Certified positivity for P-recursive sequences.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    parser.add_argument("--list-fixtures", action="store_true", help="list bundled spec files")
    sub = parser.add_subparsers(dest="subcommand", parser_class=_Parser)

    def witness_flags(sp):
        sp.add_argument("--p", help="lower ratio bound (a/b or integer)")
        sp.add_argument("--q", help="upper ratio bound (a/b or integer)")
        sp.add_argument("--strict", action="store_true", help="refuse degree-relaxed recurrences")
        sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("analyze", help="characteristic polynomial, root and witness")
    sp.add_argument("spec")
    witness_flags(sp)

    sp = sub.add_parser("certify", help="prove positivity and write a certificate")
    sp.add_argument("spec")
    witness_flags(sp)
    sp.add_argument("--scan-budget", type=int, help="indices to scan past r (default 10r + 10^6)")
    sp.add_argument("--output", "-o", help="certificate path (default <spec>.poscert.json)")

    sp = sub.add_parser("check", help="re-verify a certificate")
    sp.add_argument("certificate")
    sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("terms", help="print a_n up to an index")
    sp.add_argument("spec")
    sp.add_argument("n", type=int)
    sp.add_argument("--full", action="store_true", help="print huge terms in full")
    sp.add_argument("--strict", action="store_true")
    sp.add_argument("--json", action="store_true")
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    p = q = None
    raw_p, raw_q = getattr(args, "p", None), getattr(args, "q", None)
    if (raw_p is None) != (raw_q is None):
        raise UsageError("--p and --q must be given together")
    if raw_p is not None:
        p, q = parse_rational_arg(raw_p), parse_rational_arg(raw_q)
        if not 0 < p < q:
            raise UsageError(f"need 0 < p < q, got p={raw_p}, q={raw_q}")
    budget = getattr(args, "scan_budget", None)
    if budget is not None and budget < 0:
        raise UsageError("--scan-budget must be nonnegative")
    path = getattr(args, "spec", None) or getattr(args, "certificate", None)
    return RunConfig(
        subcommand=args.subcommand,
        path=path,
        p=p,
        q=q,
        scan_budget=budget,
        strict=getattr(args, "strict", False),
        output=getattr(args, "output", None),
        full=getattr(args, "full", False),
        json=getattr(args, "json", False),
        verbosity=args.verbose,
        upto=getattr(args, "n", None),
    )


COMMANDS = {"analyze": cmd_analyze, "certify": cmd_certify, "check": cmd_check, "terms": cmd_terms}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.list_fixtures:
            print("\n".join(bundled_fixtures()))
            return EXIT_OK
        if not args.subcommand:
            raise UsageError("a subcommand is required")
        cfg = make_config(args)
        logging.basicConfig(
            level=logging.WARNING - 10 * min(cfg.verbosity, 2),
            format="%(levelname)s: %(message)s",
        )
        return COMMANDS[cfg.subcommand](cfg)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"holopos: usage error: {exc}", file=sys.stderr)
    except (SpecError, NormalizationError, WitnessError, ValueError) as exc:
        print(f"holopos: error: {exc}", file=sys.stderr)
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"holopos: error: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
