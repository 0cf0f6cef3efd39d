"""Logarithmic vector fields of a hypersurface germ.

A derivation delta = sum s_i d/dx_i is logarithmic for f when
delta(f) = a*f for a polynomial multiplier a; these correspond exactly
to syzygies (s_0, s_1, .., s_n) of (f, f_1, .., f_n) via a = -s_0, and
the polynomial syzygy module generates the local one, so the generators
returned here generate Der(-log D) at the origin.

Quasihomogeneity is decided coordinate-free by mu = tau.  Weight finding
is a separate convenience and only meaningful in the given coordinates:
a missing weight vector never proves non-quasihomogeneity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import jets
from .groebner import GroebnerBasis, ModVector, buchberger, syzygies
from .linalg import nullspace_dense, solve_dense, strict_positive_solution
from .orders import GREVLEX, top_over
from .poly import Poly, Weights, jacobian


class TraceObstructionFound(AssertionError):
    """A nonzero linear-part trace on a non-quasihomogeneous isolated germ.

    This cannot happen for correct inputs; it signals an implementation bug."""


@dataclass(frozen=True)
class LogDerivation:
    """A logarithmic field delta = sum coefficients[i] * d/dx_i with
    delta(f) = multiplier * f."""

    multiplier: Poly
    coefficients: tuple[Poly, ...]

    @property
    def nvars(self) -> int:
        return len(self.coefficients)

    def apply_to(self, p: Poly) -> Poly:
        out = Poly.zero(p.nvars)
        for i, s in enumerate(self.coefficients):
            if not s.is_zero:
                out = out + s * p.diff(i)
        return out

    def satisfies_relation(self, f: Poly) -> bool:
        return self.apply_to(f) == self.multiplier * f

    def as_syzygy_vector(self) -> ModVector:
        return ModVector([-self.multiplier, *self.coefficients])

    def is_in_maximal_ideal_times_der(self) -> bool:
        return all(s.constant_term() == 0 for s in self.coefficients)

    def to_string(self, names=None) -> str:
        from .poly import default_var_names

        if names is None:
            names = default_var_names(self.nvars)
        parts = [
            f"({s.to_string(names)})*d/d{name}"
            for s, name in zip(self.coefficients, names)
            if not s.is_zero
        ]
        body = " + ".join(parts) if parts else "0"
        return f"{body}  [multiplier {self.multiplier.to_string(names)}]"

    def __str__(self) -> str:
        return self.to_string()


@dataclass
class LogDerModule:
    """Generating set of the logarithmic fields of f."""

    f: Poly
    generators: list[LogDerivation]

    def groebner_basis(self) -> GroebnerBasis:
        vectors = [g.as_syzygy_vector() for g in self.generators]
        return buchberger(vectors, top_over(GREVLEX))

    def contains(self, derivation: LogDerivation) -> bool:
        """Membership in the module generated by the generators, over the
        polynomial ring."""
        return self.groebner_basis().contains(derivation.as_syzygy_vector())


def derlog_generators(f: Poly) -> LogDerModule:
    """Generators of Der(-log D) from the syzygies of (f, f_1, .., f_n)."""
    if f.is_zero:
        raise ValueError("f must be nonzero")
    vectors = syzygies([f] + jacobian(f))
    generators = []
    for v in vectors:
        delta = LogDerivation(multiplier=-v.components[0], coefficients=v.components[1:])
        if not delta.satisfies_relation(f):
            raise AssertionError("syzygy produced a field violating delta(f) = a*f")
        generators.append(delta)
    return LogDerModule(f=f, generators=generators)


@dataclass
class QuasihomogeneityResult:
    quasihomogeneous: bool
    mu: jets.ColengthResult
    tau: jets.ColengthResult


def quasihomogeneity_test(f: Poly, cutoff: int = jets.DEFAULT_CUTOFF) -> QuasihomogeneityResult:
    """Decide quasihomogeneity of an isolated germ by mu = tau."""
    mu, tau = jets.milnor_tjurina(f, cutoff)
    return QuasihomogeneityResult(mu.value == tau.value, mu, tau)


def find_weights(f: Poly) -> Weights | None:
    """Strictly positive weights giving every support monomial degree 1.

    Solves the affine system over the support exactly and then decides
    strict positivity on its solution space by Fourier-Motzkin.  A None
    result means no such weights exist in these coordinates; it does not
    decide quasihomogeneity.
    """
    if f.is_zero:
        return None
    n = f.nvars
    rows = [[Fraction(e) for e in mono] for mono in sorted(f.terms)]
    rhs = [Fraction(1)] * len(rows)
    particular = solve_dense(rows, rhs)
    if particular is None:
        return None
    directions = nullspace_dense(rows)
    point = strict_positive_solution(particular, directions)
    if point is None:
        return None
    weights = tuple(point)
    euler = LogDerivation(
        multiplier=Poly.constant(n, 1),
        coefficients=tuple(Poly.variable(n, i) * w for i, w in enumerate(weights)),
    )
    if not euler.satisfies_relation(f):
        raise AssertionError("weight solution failed the Euler identity")
    return weights


@dataclass
class LinearPart:
    """Matrix of the degree-one part of a field's coefficients."""

    matrix: list[list[Fraction]]

    @property
    def trace(self) -> Fraction:
        return sum((self.matrix[i][i] for i in range(len(self.matrix))), Fraction(0))


def linear_part(delta: LogDerivation) -> LinearPart:
    n = delta.nvars
    unit = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    matrix = [[delta.coefficients[i].coefficient(unit[j]) for j in range(n)] for i in range(n)]
    return LinearPart(matrix)


def trace(part: LinearPart) -> Fraction:
    return part.trace


@dataclass
class TraceReport:
    """Linear-part traces of the generators, and the vanishing check for
    non-quasihomogeneous isolated germs."""

    quasihomogeneous: bool
    traces: list[Fraction]
    all_zero: bool
    combinations_checked: int


def trace_vanishing_report(
    f: Poly,
    module: LogDerModule | None = None,
    qh: QuasihomogeneityResult | None = None,
    cutoff: int = jets.DEFAULT_CUTOFF,
    combinations: int = 8,
) -> TraceReport:
    """Traces of all generators; on a non-quasihomogeneous isolated germ
    every trace must vanish, including traces of random polynomial
    combinations of the generators (checked with a fixed seed)."""
    import random

    if qh is None:
        qh = quasihomogeneity_test(f, cutoff)
    if module is None:
        module = derlog_generators(f)
    traces = [linear_part(g).trace for g in module.generators]
    all_zero = all(t == 0 for t in traces)
    checked = 0
    if not qh.quasihomogeneous:
        if not all_zero:
            raise TraceObstructionFound(
                "nonzero linear-part trace on a non-quasihomogeneous isolated germ"
            )
        rng = random.Random(20230517)
        n = f.nvars
        for _ in range(combinations):
            combo_coeffs = [
                Poly(
                    n,
                    {
                        tuple(e): Fraction(rng.randint(-3, 3))
                        for e in _small_exponents(n)
                    },
                )
                for _ in module.generators
            ]
            combined = _combine(module.generators, combo_coeffs, n)
            if linear_part(combined).trace != 0:
                raise TraceObstructionFound("combination trace failed to vanish")
            checked += 1
    return TraceReport(qh.quasihomogeneous, traces, all_zero, checked)


def _small_exponents(n: int):
    out = [(0,) * n]
    for i in range(n):
        e = [0] * n
        e[i] = 1
        out.append(tuple(e))
    return out


def _combine(generators, coeffs, n) -> LogDerivation:
    mult = Poly.zero(n)
    comps = [Poly.zero(n) for _ in range(n)]
    for g, c in zip(generators, coeffs):
        mult = mult + c * g.multiplier
        for i in range(n):
            comps[i] = comps[i] + c * g.coefficients[i]
    return LogDerivation(multiplier=mult, coefficients=tuple(comps))


def annihilator_generators(f: Poly) -> list[LogDerivation]:
    """The fields f_i d_j - f_j d_i (i < j); each annihilates f exactly."""
    n = f.nvars
    grads = jacobian(f)
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            comps = [Poly.zero(n) for _ in range(n)]
            comps[j] = grads[i]
            comps[i] = -grads[j]
            delta = LogDerivation(multiplier=Poly.zero(n), coefficients=tuple(comps))
            if not delta.apply_to(f).is_zero:
                raise AssertionError("annihilator field failed to annihilate f")
            out.append(delta)
    return out


@dataclass
class SaitoResult:
    """Determinant test for freeness of the logarithmic module.

    verdict is "free" when det = q*f with q(0) != 0 (sufficient), else
    "inconclusive": a unit cofactor in the local ring need not be a
    polynomial, so nothing is claimed in the negative direction."""

    verdict: str
    determinant: Poly
    cofactor: Poly | None
    fields: list[LogDerivation]


def _poly_determinant(rows: list[list[Poly]]) -> Poly:
    n = len(rows)
    nv = rows[0][0].nvars
    if n == 1:
        return rows[0][0]
    det = Poly.zero(nv)
    for j in range(n):
        entry = rows[0][j]
        if entry.is_zero:
            continue
        minor = [[rows[i][k] for k in range(n) if k != j] for i in range(1, n)]
        term = entry * _poly_determinant(minor)
        det = det + term if j % 2 == 0 else det - term
    return det


def saito_freeness_check(f: Poly, fields: list[LogDerivation]) -> SaitoResult:
    """Saito's criterion on exactly n fields: free if the coefficient
    determinant equals q*f with q a polynomial unit at the origin."""
    n = f.nvars
    if len(fields) != n:
        raise ValueError(f"need exactly {n} fields, got {len(fields)}")
    rows = [[fields[i].coefficients[j] for j in range(n)] for i in range(n)]
    det = _poly_determinant(rows)
    if det.is_zero:
        return SaitoResult("inconclusive", det, None, fields)
    gb = buchberger([f])
    remainder, quotients = gb.reduce(det)
    if remainder.is_zero:
        q = gb.input_cofactors(quotients)[0]
        if q * f != det:
            raise AssertionError("division certificate failed to re-expand")
        if q.constant_term() != 0:
            return SaitoResult("free", det, q, fields)
    return SaitoResult("inconclusive", det, None, fields)


def freeness_from_module(f: Poly, module: LogDerModule) -> SaitoResult:
    """Search deterministic n-subsets of the generators for a Saito basis.

    Sound only in the positive direction: returns the first subset whose
    determinant certifies freeness, else an inconclusive result."""
    import itertools

    n = f.nvars
    gens = module.generators
    if len(gens) < n:
        return SaitoResult("inconclusive", Poly.zero(n), None, [])
    best = None
    for subset in itertools.combinations(range(len(gens)), n):
        result = saito_freeness_check(f, [gens[i] for i in subset])
        if result.verdict == "free":
            return result
        if best is None:
            best = result
    return best
