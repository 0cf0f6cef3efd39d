"""Full-germ analysis pipeline, report data model, and corpus runner.

A SingularityReport is a flat, JSON-ready record: every embedded
polynomial, rational, and cohomology class is stored in its canonical
string or list form, so serialization is the identity on the data model
and identical jobs produce byte-identical JSON.  verify_report
reconstructs the mathematical objects and re-checks every embedded
certificate; emit_report runs it before producing output.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from . import cohomology, derlog, jets
from .poly import Poly, format_fraction, jacobian, parse_poly

SCHEMA_VERSION = 1
DEFAULT_TRUNCATION = 8


@dataclass
class AnalysisJob:
    f: Poly
    variables: tuple[str, ...]
    name: str | None = None
    cutoff: int = jets.DEFAULT_CUTOFF
    truncation: int = DEFAULT_TRUNCATION

    def __post_init__(self):
        if len(self.variables) != self.f.nvars:
            raise ValueError("variable list does not match the polynomial")
        if self.cutoff < 2:
            raise ValueError("cutoff must be at least 2")
        if self.truncation < 1:
            raise ValueError("truncation must be at least 1")


@dataclass
class SingularityReport:
    """Analysis outcome with all certificates embedded in serialized form."""

    schema_version: int
    name: str | None
    variables: list[str]
    f: str
    options: dict
    gates: dict
    mu: dict | None
    tau: dict | None
    quasihomogeneous: bool | None
    weights: list[str] | None
    weights_note: str | None
    lct: dict
    derlog: dict
    trace_check: dict
    theorem: dict
    freeness: dict


def _frac(s) -> Fraction:
    return Fraction(s)


def _colength_payload(result: jets.ColengthResult) -> dict:
    return {
        "finite": result.finite,
        "value": result.value,
        "stabilization_order": result.stabilization_order,
        "cutoff": result.cutoff,
        "certificate": result.certificate,
        "d_values": {str(k): v for k, v in sorted(result.d_values.items())},
        "growth_witnesses": {
            str(k): list(w) for k, w in sorted(result.growth_witnesses.items())
        },
    }


def _cohelem_payload(e: cohomology.CohElem) -> list:
    return [
        [list(a), format_fraction(e.terms[a])]
        for a in sorted(e.terms, key=lambda a: (sum(a), a))
    ]


def _cohelem_from_payload(n: int, payload: list) -> cohomology.CohElem:
    return cohomology.CohElem(n, {tuple(a): Fraction(c) for a, c in payload})


def _derivation_payload(d: derlog.LogDerivation, names) -> dict:
    return {
        "multiplier": d.multiplier.to_string(names),
        "coefficients": [c.to_string(names) for c in d.coefficients],
        "trace": format_fraction(derlog.linear_part(d).trace),
    }


def _derivation_from_payload(payload: dict, names) -> derlog.LogDerivation:
    return derlog.LogDerivation(
        multiplier=parse_poly(payload["multiplier"], names),
        coefficients=tuple(parse_poly(c, names) for c in payload["coefficients"]),
    )


def analyze(job: AnalysisJob) -> SingularityReport:
    """Run the full pipeline: gates, invariants, fields, theorem check.

    Gate failures become structured report fields; only invalid input
    raises."""
    f = job.f
    names = list(job.variables)
    n = f.nvars
    if f.is_zero:
        raise ValueError("f must be nonzero")

    singular = f.min_degree() >= 2
    isolated: bool | None = None
    mu_payload = tau_payload = None
    quasihomogeneous: bool | None = None
    qh_result = None
    if singular:
        try:
            mu, tau = jets.milnor_tjurina(f, job.cutoff)
            isolated = True
            mu_payload = _colength_payload(mu)
            tau_payload = _colength_payload(tau)
            quasihomogeneous = mu.value == tau.value
            qh_result = derlog.QuasihomogeneityResult(quasihomogeneous, mu, tau)
        except jets.NotIsolated as exc:
            isolated = False
            mu_payload = _colength_payload(exc.colength_result)

    module = derlog.derlog_generators(f)
    generator_payloads = [_derivation_payload(g, names) for g in module.generators]

    weights = derlog.find_weights(f) if singular else None
    weights_note = None
    if quasihomogeneous and weights is None:
        weights_note = (
            "quasihomogeneous by mu = tau, but no positive weight vector exists "
            "in the given coordinates; a coordinate change may reveal one"
        )
    elif quasihomogeneous is False:
        weights = None  # mu != tau rules out weights in any coordinates

    if quasihomogeneous and weights is not None:
        lct_result = jets.lct_check(f, weights, job.cutoff)
        lct = {
            "status": "holds" if lct_result.holds else "fails",
            "k": lct_result.failed_k,
            "piece_dims": {str(k): v for k, v in sorted(lct_result.piece_dims.items())},
        }
    else:
        reason = (
            "requires a quasihomogeneous isolated germ with weights in the given coordinates"
        )
        lct = {"status": "not-applicable", "k": None, "reason": reason}

    trace_applicable = bool(isolated) and quasihomogeneous is False
    trace_payload = {"applicable": trace_applicable, "all_zero": None, "combinations_checked": 0}
    if trace_applicable:
        trace_report = derlog.trace_vanishing_report(f, module, qh_result, job.cutoff)
        trace_payload["all_zero"] = trace_report.all_zero
        trace_payload["combinations_checked"] = trace_report.combinations_checked

    if isolated and quasihomogeneous:
        injectivity = cohomology.truncated_injectivity(f, module, job.truncation, weights)
        euler_payload = None
        if injectivity.euler is not None:
            euler_payload = {
                "weights": [format_fraction(w) for w in injectivity.euler.weights],
                "eigenvalues": [format_fraction(ev) for ev in injectivity.euler.eigenvalues],
                "all_negative": injectivity.euler.all_negative,
            }
        theorem = {
            "branch": "quasihomogeneous",
            "truncation": injectivity.truncation,
            "basis_size": injectivity.basis_size,
            "kernel_dimension": injectivity.kernel_dimension,
            "injective_up_to_truncation": injectivity.injective_up_to_truncation,
            "euler": euler_payload,
        }
        if not injectivity.injective_up_to_truncation:
            raise AssertionError(
                "kernel found for a quasihomogeneous germ; implementation bug"
            )
    elif isolated and quasihomogeneous is False:
        verdict = cohomology.kernel_test(f, cohomology.CohElem.unit_class(n), module, job.cutoff)
        if not isinstance(verdict, cohomology.InKernel):
            raise AssertionError(
                "unit class escaped the kernel on a non-quasihomogeneous isolated germ"
            )
        theorem = {
            "branch": "not-quasihomogeneous",
            "class": [1] * n,
            "verdict": "in-kernel",
            "certificate": _cohelem_payload(verdict.certificate),
            "identities_verified": True,
        }
    else:
        reason = "origin is not a singular point" if not singular else "singularity is not isolated"
        theorem = {"branch": "not-applicable", "reason": reason}

    if len(module.generators) >= n:
        saito = derlog.freeness_from_module(f, module)
        freeness = {
            "status": saito.verdict,
            "determinant": saito.determinant.to_string(names),
            "cofactor": saito.cofactor.to_string(names) if saito.cofactor else None,
            "fields": [_derivation_payload(d, names) for d in saito.fields],
        }
    else:
        freeness = {"status": "not-checked", "determinant": None, "cofactor": None, "fields": []}

    return SingularityReport(
        schema_version=SCHEMA_VERSION,
        name=job.name,
        variables=names,
        f=f.to_string(names),
        options={"cutoff": job.cutoff, "truncation": job.truncation},
        gates={"singular_at_origin": singular, "isolated": isolated},
        mu=mu_payload,
        tau=tau_payload,
        quasihomogeneous=quasihomogeneous,
        weights=[format_fraction(w) for w in weights] if weights is not None else None,
        weights_note=weights_note,
        lct=lct,
        derlog={"count": len(generator_payloads), "generators": generator_payloads},
        trace_check=trace_payload,
        theorem=theorem,
        freeness=freeness,
    )


def verify_report(report: SingularityReport) -> None:
    """Re-verify every certificate embedded in a report; raises on failure."""
    names = report.variables
    f = parse_poly(report.f, names)
    n = f.nvars
    for payload in report.derlog["generators"]:
        d = _derivation_from_payload(payload, names)
        if not d.satisfies_relation(f):
            raise AssertionError("embedded generator violates delta(f) = a*f")
        if derlog.linear_part(d).trace != Fraction(payload["trace"]):
            raise AssertionError("embedded generator trace mismatch")
    if report.quasihomogeneous is False and report.trace_check["applicable"]:
        if report.trace_check["all_zero"] is not True:
            raise AssertionError("trace vanishing must hold on non-quasihomogeneous germs")
    theorem = report.theorem
    if theorem["branch"] == "not-quasihomogeneous":
        g = cohomology.CohElem(n, {tuple(theorem["class"]): Fraction(1)})
        h = _cohelem_from_payload(n, theorem["certificate"])
        if not cohomology.verify_certificate(f, g, h):
            raise AssertionError("embedded kernel certificate failed re-verification")
    elif theorem["branch"] == "quasihomogeneous":
        euler = theorem.get("euler")
        if euler is not None:
            eigenvalues = [Fraction(ev) for ev in euler["eigenvalues"]]
            if not all(ev < 0 for ev in eigenvalues) or not euler["all_negative"]:
                raise AssertionError("Euler eigenvalue certificate failed re-verification")
    if report.freeness["status"] == "free":
        det = parse_poly(report.freeness["determinant"], names)
        q = parse_poly(report.freeness["cofactor"], names)
        fields = [_derivation_from_payload(p, names) for p in report.freeness["fields"]]
        rows = [[d.coefficients[j] for j in range(n)] for d in fields]
        if derlog._poly_determinant(rows) != det:
            raise AssertionError("freeness determinant does not match its fields")
        if q * f != det or q.constant_term() == 0:
            raise AssertionError("freeness certificate failed re-verification")


def report_from_dict(data: dict) -> SingularityReport:
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema version {data.get('schema_version')!r}")
    return SingularityReport(**data)


def emit_report(report: SingularityReport, fmt: str = "json") -> bytes:
    """Serialize a report after re-verifying its certificates."""
    verify_report(report)
    if fmt == "json":
        return (json.dumps(asdict(report), sort_keys=True, indent=2) + "\n").encode()
    if fmt == "text":
        return _render_text(report).encode()
    raise ValueError(f"unknown format {fmt!r}")


def _render_text(report: SingularityReport) -> str:
    lines = []
    title = report.name or "singularity"
    lines.append(f"=== {title} ===")
    lines.append(f"f = {report.f}   (variables: {', '.join(report.variables)})")
    gates = report.gates
    lines.append(
        f"gates: singular at origin: {_yn(gates['singular_at_origin'])}; "
        f"isolated: {_yn(gates['isolated'])}"
    )
    if report.mu is not None:
        lines.append(f"mu  = {_colength_str(report.mu)}")
    if report.tau is not None:
        lines.append(f"tau = {_colength_str(report.tau)}")
    if report.quasihomogeneous is not None:
        lines.append(f"quasihomogeneous: {_yn(report.quasihomogeneous)} (decided by mu = tau)")
    if report.weights is not None:
        lines.append(f"weights: ({', '.join(report.weights)})")
    elif report.weights_note:
        lines.append(f"weights: none; {report.weights_note}")
    elif report.quasihomogeneous is False:
        lines.append("weights: none (mu != tau rules them out)")
    lct = report.lct
    if lct["status"] == "fails":
        lines.append(f"logarithmic comparison: fails(k={lct['k']})")
    else:
        lines.append(f"logarithmic comparison: {lct['status']}")
    lines.append(f"Der(-log D) generators ({report.derlog['count']}):")
    for i, g in enumerate(report.derlog["generators"]):
        coeffs = ", ".join(g["coefficients"])
        lines.append(
            f"  [{i}] coefficients ({coeffs}); multiplier {g['multiplier']}; trace {g['trace']}"
        )
    if report.trace_check["applicable"]:
        lines.append(
            f"trace vanishing: all generator traces zero: {_yn(report.trace_check['all_zero'])} "
            f"({report.trace_check['combinations_checked']} random combinations checked)"
        )
    theorem = report.theorem
    if theorem["branch"] == "quasihomogeneous":
        lines.append(
            f"theorem check: d1 injective on pole orders <= {theorem['truncation']} "
            f"(kernel dimension {theorem['kernel_dimension']} on a "
            f"{theorem['basis_size']}-dimensional truncation)"
        )
        if theorem.get("euler"):
            lines.append(
                "  Euler certificate: all diagonal eigenvalues strictly negative: "
                f"{_yn(theorem['euler']['all_negative'])}"
            )
    elif theorem["branch"] == "not-quasihomogeneous":
        names = report.variables
        n = len(names)
        h = _cohelem_from_payload(n, theorem["certificate"])
        g = cohomology.CohElem(n, {tuple(theorem["class"]): Fraction(1)})
        lines.append(f"theorem check: {g.to_string(names)} lies in ker d1")
        lines.append(f"  certificate h = {h.to_string(names)}")
        f = parse_poly(report.f, names)
        lines.append("  verified identities: f*h = 0 and, for each i:")
        for i, fi in enumerate(jacobian(f)):
            lines.append(
                f"    f_{i + 1}*h = {cohomology.module_action(fi, h).to_string(names)}"
            )
    else:
        lines.append(f"theorem check: not applicable ({theorem['reason']})")
    free = report.freeness
    if free["status"] == "free":
        lines.append(
            f"freeness: free (Saito determinant = {free['determinant']} "
            f"= q*f with q = {free['cofactor']})"
        )
    else:
        lines.append(f"freeness: {free['status']}")
    return "\n".join(lines) + "\n"


def _yn(value) -> str:
    if value is None:
        return "n/a"
    return "yes" if value else "no"


def _colength_str(payload: dict) -> str:
    if payload["finite"]:
        return f"{payload['value']} (Nakayama stabilization at order {payload['stabilization_order']})"
    return f"not finite up to cutoff {payload['cutoff']}"


# -- corpus ------------------------------------------------------------------


@dataclass
class CorpusEntry:
    name: str
    variables: list[str]
    f_text: str
    expectations: dict = field(default_factory=dict)


def parse_corpus(text: str) -> list[CorpusEntry]:
    """Parse the bundled key-value corpus format.

    Entries start with a [name] header; fields are key = value lines;
    '#' starts a comment.  Expectation keys use the expect. prefix.
    """
    entries: list[CorpusEntry] = []
    current: CorpusEntry | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip()
            if not name:
                raise ValueError(f"line {lineno}: empty corpus entry name")
            current = CorpusEntry(name=name, variables=[], f_text="")
            entries.append(current)
            continue
        if current is None:
            raise ValueError(f"line {lineno}: field outside of an entry")
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key == "vars":
            current.variables = [v.strip() for v in value.split(",") if v.strip()]
        elif key == "f":
            current.f_text = value
        elif key.startswith("expect."):
            current.expectations[key[len("expect.") :]] = value
        else:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
    for entry in entries:
        if not entry.variables or not entry.f_text:
            raise ValueError(f"corpus entry {entry.name!r} is missing vars or f")
    return entries


def _check_expectation(report: SingularityReport, key: str, expected: str) -> str | None:
    """None when satisfied, else a human-readable mismatch description."""

    def got(actual):
        return f"{key}: expected {expected!r}, got {actual!r}"

    if key == "isolated":
        actual = report.gates["isolated"]
        return None if actual is (expected == "true") else got(actual)
    if key == "qh":
        actual = report.quasihomogeneous
        return None if actual is (expected == "true") else got(actual)
    if key in ("mu", "tau"):
        payload = report.mu if key == "mu" else report.tau
        actual = payload["value"] if payload else None
        return None if actual == int(expected) else got(actual)
    if key == "weights":
        actual = report.weights
        if expected == "none":
            return None if actual is None else got(actual)
        want = [str(Fraction(w.strip())) for w in expected.split(",")]
        have = [str(Fraction(w)) for w in actual] if actual else None
        return None if have == want else got(actual)
    if key == "lct":
        status = report.lct["status"]
        if expected.startswith("fails("):
            k = int(expected[len("fails(") : -1])
            ok = status == "fails" and report.lct["k"] == k
        else:
            ok = status == expected
        return None if ok else got(status)
    if key == "theorem":
        branch = report.theorem["branch"]
        if expected == "injective":
            ok = branch == "quasihomogeneous" and report.theorem["kernel_dimension"] == 0
        elif expected == "kernel":
            ok = branch == "not-quasihomogeneous" and report.theorem["verdict"] == "in-kernel"
        elif expected == "not-applicable":
            ok = branch == "not-applicable"
        else:
            return f"{key}: unknown expectation {expected!r}"
        return None if ok else got(branch)
    if key == "free":
        actual = report.freeness["status"]
        return None if actual == expected else got(actual)
    return f"{key}: unknown expectation key"


def corpus_run(path: str, out=None, cutoff: int | None = None, truncation: int | None = None) -> int:
    """Analyze every corpus entry and compare against its expectations.

    Returns 0 when all expectations hold, 1 on any mismatch.  The table
    is assembled in input order."""
    import sys

    stream = out or sys.stdout
    with open(path, "r", encoding="utf-8") as fh:
        entries = parse_corpus(fh.read())
    failures = 0
    rows = []
    for entry in entries:
        f = parse_poly(entry.f_text, entry.variables)
        job = AnalysisJob(
            f=f,
            variables=tuple(entry.variables),
            name=entry.name,
            cutoff=cutoff or jets.DEFAULT_CUTOFF,
            truncation=truncation or DEFAULT_TRUNCATION,
        )
        report = analyze(job)
        verify_report(report)
        problems = []
        for key, expected in entry.expectations.items():
            mismatch = _check_expectation(report, key, expected)
            if mismatch:
                problems.append(mismatch)
        status = "ok" if not problems else "MISMATCH"
        if problems:
            failures += 1
        mu = report.mu["value"] if report.mu and report.mu["finite"] else "-"
        tau = report.tau["value"] if report.tau else "-"
        rows.append(
            (
                entry.name,
                _yn(report.gates["isolated"]),
                _yn(report.quasihomogeneous),
                str(mu),
                str(tau),
                report.lct["status"],
                report.theorem["branch"],
                report.freeness["status"],
                status,
                problems,
            )
        )
    header = ("name", "isolated", "qh", "mu", "tau", "lct", "theorem", "freeness", "status")
    widths = [
        max(len(header[i]), max((len(r[i]) for r in rows), default=0)) for i in range(len(header))
    ]
    print("  ".join(h.ljust(w) for h, w in zip(header, widths)), file=stream)
    for row in rows:
        print("  ".join(str(c).ljust(w) for c, w in zip(row[:9], widths)), file=stream)
        for problem in row[9]:
            print(f"    !! {problem}", file=stream)
    print(
        f"{len(rows)} entries, {len(rows) - failures} ok, {failures} mismatched",
        file=stream,
    )
    return 0 if failures == 0 else 1
