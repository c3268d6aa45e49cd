"""Command-line entry point: ``mirror-stokes <command> ...``.

Exit codes: 0 ok, 1 other library error, 2 parse / bad input,
3 inadmissible direction, 4 tracking failure, 5 unsupported degeneracy.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import MirrorStokesError, ParseError
from .exact import format_fraction
from .geometry import parse_laurent
from .pipeline import RunSettings, dumps, resolve_seed, run_stokes_pipeline, write_atomic


def _print(obj) -> None:
    sys.stdout.write(dumps(obj))


def _settings(args) -> RunSettings:
    if getattr(args, "replay", None):
        manifest = json.loads(Path(args.replay).read_text(encoding="utf-8"))
        s = RunSettings.from_manifest(manifest)
    else:
        if not args.f:
            raise ParseError("--f is required unless --replay is given")
        s = RunSettings(f=args.f, alpha_phase=args.alpha_phase)
        if args.seed is not None:
            s.seed = args.seed
    s.seed = resolve_seed(s.seed)
    return s


def cmd_stokes(args) -> int:
    manifest = run_stokes_pipeline(_settings(args))
    if args.out:
        write_atomic(args.out, dumps(manifest))
    _print(manifest)
    return 0


def cmd_figures(args) -> int:
    from .figures import emit_figures
    paths = emit_figures(_settings(args), args.out_dir)
    _print({"schema": 1, "files": [str(p) for p in paths]})
    return 0


def cmd_gauss_manin(args) -> int:
    from .gaussmanin import gm_connection
    _print({"schema": 1, "f": args.f, **gm_connection(parse_laurent(args.f)).to_json()})
    return 0


def cmd_operator(args) -> int:
    from .gaussmanin import cyclic_operator, gm_connection
    P = cyclic_operator(gm_connection(parse_laurent(args.f)), seed=args.cyclic_seed)
    _print({"schema": 1, "f": args.f, **P.to_json(),
            "cyclic_vector": [c.format("θ") for c in P.cyclic_vector]})
    return 0


def cmd_newton(args) -> int:
    from .gaussmanin import cyclic_operator, gm_connection, newton_slopes
    P = cyclic_operator(gm_connection(parse_laurent(args.f)))
    _print({"schema": 1, "f": args.f, "operator": P.format(), **newton_slopes(P).to_json()})
    return 0


def cmd_quantum(args) -> int:
    from .quantum import quantum_connection
    _print({"schema": 1, **quantum_connection(*args.weights).to_json()})
    return 0


def cmd_gram(args) -> int:
    from .euler import gram_matrix
    _print({"schema": 1, "weights": args.weights, "gram": gram_matrix(*args.weights)})
    return 0


def _matrix_arg(text: str) -> list[list[int]]:
    try:
        M = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"matrix is not valid JSON: {exc.msg}", exc.pos) from None
    if not isinstance(M, list) or not all(isinstance(r, list) for r in M):
        raise ParseError("matrix must be a JSON list of rows")
    return [[int(x) for x in r] for r in M]


def cmd_braid_search(args) -> int:
    from .braid import search_equivalence
    from .euler import gram_matrix
    if args.gram:
        source = gram_matrix(*args.gram)
    elif args.source:
        source = _matrix_arg(args.source)
    else:
        raise ParseError("give --source or --gram")
    cert = search_equivalence(source, _matrix_arg(args.target), max_depth=args.depth)
    _print({"schema": 1, "source": source, **cert.to_json()})
    return 0


def cmd_gauge_compare(args) -> int:
    from .gaussmanin import gauge_compare, gm_connection
    from .quantum import quantum_connection
    f = parse_laurent(args.f)
    a, b = args.weights or (f.a, f.b)
    q = quantum_connection(a, b)
    report = gauge_compare(gm_connection(f), q.as_theta_matrix(), flip=not args.no_flip)
    _print({"schema": 1, "f": args.f, "weights": [a, b], "flip": not args.no_flip,
            "quantum_mu": [format_fraction(m) for m in q.mu], **report.to_json()})
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mirror-stokes",
                                description="Stokes data of x^a + x^-b and the mirror P(a, b).")
    sub = p.add_subparsers(dest="command", required=True)

    def pipeline_flags(sp):
        sp.add_argument("--f", help='Laurent polynomial, e.g. "x + x^-3"')
        sp.add_argument("--alpha-phase", default="pi/8", help='rational multiple of pi, e.g. "3pi/8"')
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--replay", metavar="MANIFEST", help="reuse the inputs of a previous manifest")

    sp = sub.add_parser("stokes", help="run the full monodromy -> Stokes pipeline")
    pipeline_flags(sp)
    sp.add_argument("--out", help="also write the manifest here")
    sp.set_defaults(func=cmd_stokes)

    sp = sub.add_parser("figures", help="write SVG figures of paths and lifts")
    pipeline_flags(sp)
    sp.add_argument("--out-dir", default="figures")
    sp.set_defaults(func=cmd_figures)

    for name, func, hlp in [("gauss-manin", cmd_gauss_manin, "connection matrix M(theta)"),
                            ("operator", cmd_operator, "scalar operator from a cyclic vector"),
                            ("newton", cmd_newton, "Newton polygon slopes of the operator")]:
        sp = sub.add_parser(name, help=hlp)
        sp.add_argument("--f", required=True)
        if name == "operator":
            sp.add_argument("--cyclic-seed", type=int, default=0)
        sp.set_defaults(func=func)

    for name, func in [("quantum", cmd_quantum), ("gram", cmd_gram)]:
        sp = sub.add_parser(name, help=f"{name} data of P(a, b)")
        sp.add_argument("--weights", type=int, nargs=2, required=True, metavar=("A", "B"))
        sp.set_defaults(func=func)

    sp = sub.add_parser("braid-search", help="shortest braid word relating two Stokes matrices")
    sp.add_argument("--source", help="JSON matrix")
    sp.add_argument("--gram", type=int, nargs=2, metavar=("A", "B"), help="use gram_matrix(A, B) as source")
    sp.add_argument("--target", required=True, help="JSON matrix")
    sp.add_argument("--depth", type=int, default=6)
    sp.set_defaults(func=cmd_braid_search)

    sp = sub.add_parser("gauge-compare", help="compare Gauss-Manin and quantum connections")
    sp.add_argument("--f", required=True)
    sp.add_argument("--weights", type=int, nargs=2, metavar=("A", "B"))
    sp.add_argument("--no-flip", action="store_true", help="skip theta -> -theta")
    sp.set_defaults(func=cmd_gauge_compare)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MirrorStokesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
