"""Command-line interface.

Verbs: analyze, derlog, kernel, lct, corpus.  Exit codes: 0 on success,
1 on a corpus expectation mismatch, 2 on input errors.  The environment
variable LOGSING_CUTOFF overrides the default jet cutoff.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import cohomology, derlog, jets, report
from .poly import Poly, PolyParseError, parse_poly


def _default_cutoff() -> int:
    raw = os.environ.get("LOGSING_CUTOFF")
    if raw is None:
        return jets.DEFAULT_CUTOFF
    try:
        value = int(raw)
    except ValueError as exc:
        raise SystemExit(f"logsing: invalid LOGSING_CUTOFF {raw!r}") from exc
    return value


def _split_vars(raw: str) -> tuple[str, ...]:
    names = tuple(v.strip() for v in raw.split(",") if v.strip())
    if not names:
        raise ValueError("empty variable list")
    return names


def _parse_weights(raw: str) -> tuple[Fraction, ...]:
    return tuple(Fraction(part.strip()) for part in raw.split(","))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="logsing",
        description="Exact analysis of isolated hypersurface singularity germs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, needs_f=True):
        if needs_f:
            p.add_argument("f", help="polynomial expression, e.g. 'x^2 + y^3'")
            p.add_argument("--vars", required=True, help="comma-separated variable names")
        p.add_argument("--cutoff", type=int, default=_default_cutoff(),
                       help="jet cutoff for colength stabilization")
        p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("analyze", help="full singularity report")
    add_common(p)
    p.add_argument("--truncation", type=int, default=report.DEFAULT_TRUNCATION,
                   help="pole-order truncation for the injectivity check")
    p.add_argument("--name", default=None)

    p = sub.add_parser("derlog", help="generators of the logarithmic vector fields")
    add_common(p)

    p = sub.add_parser("kernel", help="kernel membership of a class under d1")
    add_common(p)
    p.add_argument("--class", dest="class_exponents", default=None,
                   help="inverse-monomial exponents, e.g. '1,1' for [1/(x*y)]")

    p = sub.add_parser("lct", help="graded test for the logarithmic comparison property")
    add_common(p)
    p.add_argument("--weights", default=None,
                   help="comma-separated positive weights; found automatically if omitted")

    p = sub.add_parser("corpus", help="run the bundled or a user corpus")
    p.add_argument("path", nargs="?", default=None, help="corpus file (bundled corpus if omitted)")
    p.add_argument("--cutoff", type=int, default=_default_cutoff())
    p.add_argument("--truncation", type=int, default=report.DEFAULT_TRUNCATION)

    return parser


def _read_poly(args) -> tuple[Poly, tuple[str, ...]]:
    names = _split_vars(args.vars)
    return parse_poly(args.f, names), names


def _cmd_analyze(args) -> int:
    f, names = _read_poly(args)
    job = report.AnalysisJob(
        f=f, variables=names, name=args.name, cutoff=args.cutoff, truncation=args.truncation
    )
    rep = report.analyze(job)
    sys.stdout.write(report.emit_report(rep, args.format).decode())
    return 0


def _cmd_derlog(args) -> int:
    f, names = _read_poly(args)
    module = derlog.derlog_generators(f)
    if args.format == "json":
        import json

        payload = {
            "f": f.to_string(names),
            "variables": list(names),
            "generators": [report._derivation_payload(g, names) for g in module.generators],
        }
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(f"Der(-log D) generators for f = {f.to_string(names)}:")
        for i, g in enumerate(module.generators):
            check = "ok" if g.satisfies_relation(f) else "FAILED"
            print(f"  [{i}] {g.to_string(names)}  (delta(f) = a*f: {check}; "
                  f"trace {derlog.linear_part(g).trace})")
    return 0


def _cmd_kernel(args) -> int:
    f, names = _read_poly(args)
    n = f.nvars
    if args.class_exponents:
        expo = tuple(int(e.strip()) for e in args.class_exponents.split(","))
        if len(expo) != n or any(e < 1 for e in expo):
            raise ValueError("class exponents must be n integers >= 1")
    else:
        expo = (1,) * n
    g = cohomology.CohElem.inverse_monomial(n, expo)
    jets.milnor_tjurina(f, args.cutoff)  # isolated gate
    module = derlog.derlog_generators(f)
    verdict = cohomology.kernel_test(f, g, module, args.cutoff)
    if isinstance(verdict, cohomology.InKernel):
        print(f"{g.to_string(names)} lies in ker d1")
        print(f"  certificate h = {verdict.certificate.to_string(names)}")
        print("  identities f*h = 0 and f_i*h = -[d_i g] verified exactly")
    else:
        print(f"{g.to_string(names)} is not in ker d1")
        print(f"  witness field: {verdict.witness.to_string(names)}")
        print(f"  delta([g]) = {verdict.value.to_string(names)}")
    return 0


def _cmd_lct(args) -> int:
    f, names = _read_poly(args)
    if args.weights:
        weights = _parse_weights(args.weights)
    else:
        weights = derlog.find_weights(f)
        if weights is None:
            raise ValueError(
                "no positive weight vector exists in these coordinates; pass --weights"
            )
    result = jets.lct_check(f, weights, args.cutoff)
    print(f"logarithmic comparison for f = {f.to_string(names)}: {result}")
    return 0


def _cmd_corpus(args) -> int:
    path = args.path
    if path is None:
        from importlib.resources import files

        path = str(files("logsing").joinpath("data/corpus.txt"))
    return report.corpus_run(path, cutoff=args.cutoff, truncation=args.truncation)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "analyze": _cmd_analyze,
        "derlog": _cmd_derlog,
        "kernel": _cmd_kernel,
        "lct": _cmd_lct,
        "corpus": _cmd_corpus,
    }
    try:
        return handlers[args.command](args)
    except (PolyParseError, ValueError, OSError, jets.NotSingularAtOrigin, jets.NotIsolated) as exc:
        print(f"logsing: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
