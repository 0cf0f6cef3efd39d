"""Top local cohomology at the origin and the first logarithmic differential.

H is realized as finite rational combinations of inverse monomials
[x^-a] with every exponent a_i >= 1.  A polynomial acts by truncating
contraction: x^b * [x^-a] is [x^-(a-b)] when a - b stays componentwise
positive and zero otherwise, and a vector field acts through formal
differentiation followed by that action.  The residue reads off the
coefficient of [1/(x_1..x_n)], and pairing inverse monomials against
ordinary monomials is a perfect pairing in dual bases.

Membership of a class [g] in the kernel of the differential is decided
in two certified directions: any logarithmic field with delta([g]) != 0
is a sound witness against membership, and otherwise an element h with
f*h = 0 and f_i*h = -[d_i g] is constructed by an exact linear solve
over a finite inverse-monomial box whose size is certified by a
Nakayama bound, then re-verified term by term.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import jets
from .derlog import LogDerModule, LogDerivation
from .linalg import nullspace_sparse, solve_sparse
from .poly import Monomial, Poly, grevlex_key, jacobian, mono_degree


class CertificateSearchFailed(AssertionError):
    """No kernel certificate found inside the certified bound.

    All generator actions vanished, so by the extension property a
    certificate must exist; reaching this signals an implementation bug."""


class CohElem:
    """Element of H: finite sum of inverse monomials with Fraction weights."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms=None):
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for expo, coeff in terms.items():
                if len(expo) != n:
                    raise ValueError("exponent length does not match variable count")
                if any(e < 1 for e in expo):
                    raise ValueError("inverse-monomial exponents must all be >= 1")
                c = Fraction(coeff)
                if c != 0:
                    clean[tuple(expo)] = c
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("CohElem is immutable")

    @classmethod
    def zero(cls, n: int) -> CohElem:
        return cls(n)

    @classmethod
    def inverse_monomial(cls, n: int, expo: Monomial, coeff=1) -> CohElem:
        return cls(n, {tuple(expo): Fraction(coeff)})

    @classmethod
    def unit_class(cls, n: int) -> CohElem:
        """The class [1/(x_1 .. x_n)]."""
        return cls(n, {(1,) * n: Fraction(1)})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def pole_order(self) -> int:
        """Largest exponent sum over the support; 0 for the zero class."""
        if not self.terms:
            return 0
        return max(sum(a) for a in self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CohElem):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __add__(self, other: CohElem) -> CohElem:
        out = dict(self.terms)
        for a, c in other.terms.items():
            s = out.get(a, Fraction(0)) + c
            if s:
                out[a] = s
            else:
                out.pop(a, None)
        return CohElem(self.n, out)

    def __sub__(self, other: CohElem) -> CohElem:
        return self + (-other)

    def __neg__(self) -> CohElem:
        return CohElem(self.n, {a: -c for a, c in self.terms.items()})

    def scale(self, coeff) -> CohElem:
        c = Fraction(coeff)
        if c == 0:
            return CohElem(self.n)
        return CohElem(self.n, {a: v * c for a, v in self.terms.items()})

    def to_string(self, names: Sequence[str] | None = None) -> str:
        from .poly import default_var_names, format_fraction

        if not self.terms:
            return "0"
        if names is None:
            names = default_var_names(self.n)
        parts = []
        for a in sorted(self.terms, key=grevlex_key):
            c = self.terms[a]
            denom = "*".join(
                name if e == 1 else f"{name}^{e}" for name, e in zip(names, a)
            )
            mag = abs(c)
            body = f"[1/({denom})]" if mag == 1 else f"{format_fraction(mag)}*[1/({denom})]"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    def __str__(self) -> str:
        return self.to_string()

    def __repr__(self) -> str:
        return f"CohElem({self.n}, {self.to_string()!r})"


def module_action(p: Poly, e: CohElem) -> CohElem:
    """p * e under the truncating contraction action."""
    if p.nvars != e.n:
        raise ValueError("variable count mismatch")
    out: dict[Monomial, Fraction] = {}
    for b, cp in p.terms.items():
        for a, ce in e.terms.items():
            shifted = tuple(ai - bi for ai, bi in zip(a, b))
            if all(s >= 1 for s in shifted):
                s = out.get(shifted, Fraction(0)) + cp * ce
                if s:
                    out[shifted] = s
                else:
                    del out[shifted]
    return CohElem(e.n, out)


def diff_class(e: CohElem, index: int) -> CohElem:
    """Formal d/dx_index: [x^-a] goes to -a_index [x^-(a + e_index)]."""
    if not 0 <= index < e.n:
        raise ValueError("variable index out of range")
    out: dict[Monomial, Fraction] = {}
    for a, c in e.terms.items():
        raised = list(a)
        raised[index] += 1
        out[tuple(raised)] = -c * a[index]
    return CohElem(e.n, out)


def derivation_action(delta, e: CohElem) -> CohElem:
    """Apply a vector field: delta(e) = sum s_i * d_i(e).

    Accepts a LogDerivation or a plain sequence of coefficient Polys."""
    coefficients = delta.coefficients if isinstance(delta, LogDerivation) else tuple(delta)
    out = CohElem.zero(e.n)
    for i, s in enumerate(coefficients):
        if s.is_zero:
            continue
        out = out + module_action(s, diff_class(e, i))
    return out


def residue(e: CohElem) -> Fraction:
    """Coefficient of [1/(x_1 .. x_n)]."""
    return e.terms.get((1,) * e.n, Fraction(0))


def residue_pairing(e: CohElem, p: Poly) -> Fraction:
    """<e, p> = residue(p * e); dual bases pair to the identity."""
    return residue(module_action(p, e))


@dataclass(frozen=True)
class CohVector:
    """Element of H^(n+1); slot 0 is reserved for the f-component."""

    components: tuple[CohElem, ...]

    @property
    def n(self) -> int:
        return self.components[0].n

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.components)


def d1_presentation(f: Poly, g: CohElem) -> CohVector:
    """The lift (0, -d_1 g, .., -d_n g) of d1([g]) through the standard
    presentation; the class of d1([g]) is this vector modulo the image
    of h -> (f*h, f_1*h, .., f_n*h)."""
    if f.nvars != g.n:
        raise ValueError("variable count mismatch")
    comps = [CohElem.zero(g.n)]
    for i in range(g.n):
        comps.append(-diff_class(g, i))
    return CohVector(tuple(comps))


@dataclass
class PartialHom:
    """Values on (f, f_1, .., f_n) of a candidate Hom(J, H) element."""

    f_image: CohElem
    gradient_images: tuple[CohElem, ...]

    @classmethod
    def from_class(cls, f: Poly, g: CohElem) -> PartialHom:
        psi = d1_presentation(f, g)
        return cls(f_image=psi.components[0], gradient_images=psi.components[1:])

    def consistent_on(self, syzygy_vectors: Iterable) -> bool:
        """Check sum s_i * phi(g_i) = 0 in H for each syzygy of
        (f, f_1, .., f_n)."""
        images = (self.f_image, *self.gradient_images)
        for vec in syzygy_vectors:
            total = CohElem.zero(self.f_image.n)
            for s, img in zip(vec.components, images):
                if not s.is_zero and not img.is_zero:
                    total = total + module_action(s, img)
            if not total.is_zero:
                return False
        return True


@dataclass
class InKernel:
    """d1([g]) = 0, certified by h with f*h = 0 and f_i*h = -[d_i g]."""

    certificate: CohElem


@dataclass
class NotInKernel:
    """d1([g]) != 0, witnessed by a logarithmic field with delta([g]) != 0."""

    witness: LogDerivation
    value: CohElem


KernelVerdict = InKernel | NotInKernel


def _pole_box(n: int, max_pole: int) -> list[Monomial]:
    """Inverse-monomial exponents of pole order <= max_pole, sorted."""
    out: list[Monomial] = []
    for d in range(0, max_pole - n + 1):
        for raw in jets.monomials_of_degree(n, d):
            out.append(tuple(e + 1 for e in raw))
    out.sort(key=grevlex_key)
    return out


def verify_certificate(f: Poly, g: CohElem, h: CohElem) -> bool:
    """Exact re-check of the kernel identities for h."""
    if not module_action(f, h).is_zero:
        return False
    for i, fi in enumerate(jacobian(f)):
        if module_action(fi, h) != -diff_class(g, i):
            return False
    return True


def certificate_solve(f: Poly, g: CohElem, cutoff: int = jets.DEFAULT_CUTOFF) -> CohElem | None:
    """Construct h in H with f*h = 0 and f_i*h = -[d_i g], or None.

    The search space is the inverse-monomial box certified by a Nakayama
    bound: with p the top pole order among the -[d_i g], the ideal
    K = <f> + m^p <f_1, .., f_n> is annihilated by the sought functional,
    and m^(N+1) inside K confines it to pole order N + n.  The linear
    system matches residue pairings against all monomials below the
    truncation; any solution is re-verified exactly before return.
    """
    n = f.nvars
    if g.n != n:
        raise ValueError("variable count mismatch")
    grads = jacobian(f)
    psi = [-diff_class(g, i) for i in range(n)]
    p = max((img.pole_order() for img in psi), default=0)

    kgens = [f]
    for fi in grads:
        if fi.is_zero:
            continue
        if p == 0:
            kgens.append(fi)
        else:
            for beta in jets.monomials_of_degree(n, p):
                kgens.append(fi.mul_term(1, beta))
    kcol = jets.colength(kgens, cutoff)
    if not kcol.finite:
        return None
    bound = kcol.stabilization_order  # m^bound is contained in K
    max_pole = max(bound - 1 + n, p, n)

    box = _pole_box(n, max_pole)
    box_set = set(box)
    equations: list[tuple[dict, Fraction]] = []
    targets = [(f, CohElem.zero(n))] + list(zip(grads, psi))
    for mono in jets.monomials_below(n, max_pole - n + 1):
        for gen, image in targets:
            # <h, mono*gen> must equal the coefficient of image at mono+1
            row: dict[Monomial, Fraction] = {}
            for b, c in gen.terms.items():
                u = tuple(m + bb + 1 for m, bb in zip(mono, b))
                if u in box_set:
                    row[u] = row.get(u, Fraction(0)) + c
            rhs = image.terms.get(tuple(m + 1 for m in mono), Fraction(0))
            if row or rhs:
                equations.append((row, rhs))
    solution = solve_sparse(equations, col_key=grevlex_key)
    if solution is None:
        return None
    h = CohElem(n, solution)
    if not verify_certificate(f, g, h):
        raise AssertionError("solved certificate failed exact re-verification")
    return h


def kernel_test(
    f: Poly, g: CohElem, derlog: LogDerModule, cutoff: int = jets.DEFAULT_CUTOFF
) -> KernelVerdict:
    """Decide d1([g]) = 0 with a certificate either way.

    Forward direction: a generator with delta([g]) != 0 proves the class
    is not in the kernel, by the pairing identity.  Backward direction:
    when every generator kills [g] the partial homomorphism it defines is
    consistent and a certificate is constructed and verified; failure of
    that construction raises CertificateSearchFailed.
    """
    for delta in derlog.generators:
        value = derivation_action(delta, g)
        if not value.is_zero:
            return NotInKernel(witness=delta, value=value)
    h = certificate_solve(f, g, cutoff)
    if h is None:
        raise CertificateSearchFailed(
            "all generator actions vanish but no certificate was found in the certified bound"
        )
    return InKernel(certificate=h)


@dataclass
class EulerCertificate:
    """Diagonal action of the Euler field on the inverse-monomial basis."""

    weights: tuple[Fraction, ...]
    eigenvalues: list[Fraction]

    @property
    def all_negative(self) -> bool:
        return all(ev < 0 for ev in self.eigenvalues)


@dataclass
class InjectivityReport:
    """Kernel of [g] -> (delta_j([g]))_j on pole orders <= N.

    An empty kernel certifies ker d1 is zero on the truncation: any
    kernel class of d1 is killed by every logarithmic field."""

    truncation: int
    basis_size: int
    kernel_dimension: int
    kernel_basis: list[CohElem]
    euler: EulerCertificate | None

    @property
    def injective_up_to_truncation(self) -> bool:
        return self.kernel_dimension == 0


def truncated_injectivity(
    f: Poly,
    derlog: LogDerModule,
    truncation: int,
    weights: tuple[Fraction, ...] | None = None,
) -> InjectivityReport:
    """Assemble the generator-action map on pole order <= truncation and
    report its kernel, plus the Euler eigenvalue certificate when
    weights are supplied."""
    if truncation < 1:
        raise ValueError("truncation must be at least 1")
    n = f.nvars
    box = _pole_box(n, truncation)
    rows: list[dict] = []
    # one row per (generator, output exponent): entries index the box
    for j, delta in enumerate(derlog.generators):
        outputs: dict[Monomial, dict] = {}
        for b in box:
            image = derivation_action(delta, CohElem.inverse_monomial(n, b))
            for a, c in image.terms.items():
                outputs.setdefault(a, {})[b] = c
        for a in sorted(outputs, key=grevlex_key):
            rows.append(outputs[a])
    kernel = nullspace_sparse(rows, box, col_key=grevlex_key)
    kernel_basis = [CohElem(n, vec) for vec in kernel]
    euler = None
    if weights is not None:
        eigenvalues = [
            -sum((Fraction(w) * a for w, a in zip(weights, b)), Fraction(0)) for b in box
        ]
        euler = EulerCertificate(tuple(Fraction(w) for w in weights), eigenvalues)
    return InjectivityReport(
        truncation=truncation,
        basis_size=len(box),
        kernel_dimension=len(kernel_basis),
        kernel_basis=kernel_basis,
        euler=euler,
    )
