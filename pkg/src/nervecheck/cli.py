"""Command-line interface.

Reports go to stdout as JSON with a fixed field order; a short human
summary goes to stderr. Exit codes: 0 pass or informational, 1 property
failure, 2 input error, 3 invalid cover, 4 theorem falsified.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .algebra import CoefficientSpec
from .complexes import homology
from .covers import DowkerRelation, InvalidCoverError, dowker_pair, nerve, vietoris_rips
from .formats import FormatError, complex_to_doc, load_complex, load_cover, load_points
from .mvss import build_double_complex, row_homology, ss_limit, ss_pages
from .nervethm import TheoremFalsified, check_g_chain_map, check_theorem

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_COVER, EXIT_FALSIFIED = 0, 1, 2, 3, 4


def _emit(doc: dict, summary: str) -> None:
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")
    print(summary, file=sys.stderr)


def _groups(gs) -> list[dict]:
    return [{"degree": j, **g.to_dict()} for j, g in enumerate(gs)]


def _ring(coeff: CoefficientSpec) -> str:
    return {"z": "Z", "q": "Q"}.get(coeff.kind, f"F{coeff.p}")


def _fmt(gs, coeff: CoefficientSpec = CoefficientSpec("z")) -> str:
    return ", ".join(f"H{j}={g.format(_ring(coeff))}" for j, g in enumerate(gs))


def cmd_homology(args) -> int:
    name, K = load_complex(args.complex)
    gs = homology(K, args.coeff, reduced=args.reduced)
    _emit(
        {"name": name, "coeff": str(args.coeff), "reduced": args.reduced, "homology": _groups(gs)},
        f"{name or args.complex}: {_fmt(gs, args.coeff)}",
    )
    return EXIT_OK


def cmd_nerve(args) -> int:
    name, cover = load_cover(args.cover)
    N = nerve(cover, max_dim=args.max_dim)
    _emit(complex_to_doc(f"nerve({name})", N), f"nerve of {name}: f-vector {N.f_vector}")
    return EXIT_OK


def cmd_rips(args) -> int:
    ms = load_points(args.points)
    if args.r <= 0:
        raise FormatError("--r must be positive")
    K = vietoris_rips(ms, args.r, args.max_dim)
    gs = homology(K)
    _emit(
        {
            "r": str(args.r),
            "max_dim": args.max_dim,
            "complex": complex_to_doc(f"VR(r={args.r})", K),
            "homology": _groups(gs),
        },
        f"VR(r={args.r}): f-vector {K.f_vector}, {_fmt(gs)}",
    )
    return EXIT_OK


def _check_theorem(cover, name, args) -> int:
    try:
        report = check_theorem(cover, args.k, with_trace=args.trace)
    except TheoremFalsified as exc:
        _emit({"mode": "theorem", "cover": name, "status": "theorem-falsified", "error": str(exc),
               "report": exc.report.to_dict()}, f"THEOREM FALSIFIED: {exc}")
        return EXIT_FALSIFIED
    status = "pass" if report.hypothesis.passed else "hypothesis-failed"
    _emit(
        {"mode": "theorem", "cover": name, "status": status, "report": report.to_dict()},
        f"{name} k={args.k}: {status}; X: {_fmt(report.h_base)}; N: {_fmt(report.h_nerve)}; "
        f"conclusion2 {report.conclusion2}",
    )
    return EXIT_OK


def _check_prop1(cover, name, args) -> int:
    D = build_double_complex(cover)
    rows = []
    ok = True
    for q in range(D.q_max + 1):
        gs = row_homology(D, q, args.coeff)
        exact = all(g.is_zero() for g in gs[1:])
        h0 = gs[0] if gs else None
        h0_ok = h0 is not None and h0.free_rank == cover.base.count(q) and not h0.torsion
        ok &= exact and h0_ok
        rows.append({"q": q, "homology": _groups(gs), "exact_above_0": exact,
                     "h0_rank_matches": h0_ok, "base_simplices": cover.base.count(q)})
    _emit({"mode": "prop1", "cover": name, "coeff": str(args.coeff), "status": "pass" if ok else "fail", "rows": rows},
          f"{name}: row exactness {'holds' if ok else 'FAILS'} over {args.coeff}")
    return EXIT_OK if ok else EXIT_FAIL


def _check_collapse(cover, name, args) -> int:
    D = build_double_complex(cover)
    pages = ss_pages(D, "second", args.field, r_max=max(args.r_max, 2), r_min=1)
    limit = ss_limit(D, "second", args.field)
    betti = [g.free_rank for g in homology(cover.base, args.field, degrees=range(D.q_max + 1))]
    e2 = next(p for p in pages if p.r == 2)
    checks = {
        "e2_zero_off_column_0": all(d == 0 for (p, q), d in e2.dims.items() if p > 0),
        "e2_column_0_is_betti": all(e2[(0, q)] == betti[q] for q in range(D.q_max + 1)),
        "stable_from_page_2": all(p.stable for p in pages if p.r >= 2),
        "limit_totals_are_betti": all(limit.total(n) == betti[n] for n in range(D.q_max + 1)),
    }
    ok = all(checks.values())
    _emit(
        {"mode": "collapse", "cover": name, "field": str(args.field), "status": "pass" if ok else "fail",
         "checks": checks, "betti": betti, "pages": [p.to_dict() for p in pages], "limit": limit.to_dict()},
        f"{name}: second spectral sequence {'collapses at E2' if ok else 'FAILS collapse checks'}",
    )
    return EXIT_OK if ok else EXIT_FAIL


def _check_dowker(cover, name, args) -> int:
    rel = DowkerRelation.membership(cover)
    rows, cols = dowker_pair(rel)
    top = max(rows.dim, cols.dim, 0)
    hr = homology(rows, args.coeff, degrees=range(top + 1))
    hc = homology(cols, args.coeff, degrees=range(top + 1))
    ok = hr == hc
    _emit(
        {"mode": "dowker", "cover": name, "coeff": str(args.coeff), "status": "pass" if ok else "fail",
         "vietoris": {"f_vector": rows.f_vector, "homology": _groups(hr)},
         "nerve": {"f_vector": cols.f_vector, "homology": _groups(hc)}},
        f"{name}: Dowker complexes {'agree' if ok else 'DISAGREE'}: {_fmt(hr, args.coeff)} vs {_fmt(hc, args.coeff)}",
    )
    return EXIT_OK if ok else EXIT_FAIL


def _check_gmap(cover, name, args) -> int:
    m_max = args.k + 1
    ok = check_g_chain_map(cover, m_max)
    _emit({"mode": "gmap", "cover": name, "m_max": m_max, "status": "pass" if ok else "fail", "chain_map": ok},
          f"{name}: g {'is' if ok else 'is NOT'} a chain map up to degree {m_max}")
    return EXIT_OK if ok else EXIT_FAIL


MODES = {
    "theorem": _check_theorem,
    "prop1": _check_prop1,
    "collapse": _check_collapse,
    "dowker": _check_dowker,
    "gmap": _check_gmap,
}


def cmd_check(args) -> int:
    name, cover = load_cover(args.cover)
    if args.k < 0:
        raise FormatError("--k must be nonnegative")
    return MODES[args.mode](cover, name, args)


def _coeff(text: str) -> CoefficientSpec:
    try:
        return CoefficientSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _field(text: str) -> CoefficientSpec:
    c = _coeff(text)
    if not c.is_field:
        raise argparse.ArgumentTypeError("a field is required: q or p:<prime>")
    return c


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_INPUT)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nervecheck", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("homology", help="homology of a complex file")
    p.add_argument("complex")
    p.add_argument("--coeff", type=_coeff, default=CoefficientSpec("z"), help="z, q or p:<prime>")
    p.add_argument("--reduced", action="store_true")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("nerve", help="nerve of a cover file")
    p.add_argument("cover")
    p.add_argument("--max-dim", type=int, default=None)
    p.set_defaults(func=cmd_nerve)

    p = sub.add_parser("rips", help="Vietoris-Rips complex of a points file")
    p.add_argument("points")
    p.add_argument("--r", type=_rational, required=True)
    p.add_argument("--max-dim", type=int, default=2)
    p.set_defaults(func=cmd_rips)

    p = sub.add_parser("check", help="verify a property of a cover")
    p.add_argument("cover")
    p.add_argument("--mode", choices=sorted(MODES), default="theorem")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--coeff", type=_coeff, default=CoefficientSpec("z"), help="homology coefficients")
    p.add_argument("--field", type=_field, default=CoefficientSpec("q"), help="spectral-sequence field")
    p.add_argument("--r-max", type=int, default=3, help="last page reported in collapse mode")
    p.add_argument("--trace", action="store_true", help="replay the proof steps (theorem mode)")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvalidCoverError as exc:
        _emit({"status": "invalid-cover", "error": str(exc),
               "uncovered": [list(s) for s in exc.uncovered], "bad_parts": exc.bad_parts},
              f"invalid cover: {exc}")
        return EXIT_COVER
    except (FormatError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
