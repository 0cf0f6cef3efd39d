"""Certified local-algebra computations at the origin via truncated jets.

Colengths of ideals in the local ring are computed degree by degree:
dim O/(I + m^k) is read off an exact row echelon of the truncated
multiples of the generators, and the first k with equal consecutive
dimensions certifies m^k contained in I by Nakayama, so the value is the
true colength.  Non-stabilising inputs are reported honestly as
NotFiniteUpTo the configured cutoff.

Strict growth d_{k+1} > d_k can often be certified much more cheaply
than by a full rank computation: a single inverse monomial that kills
every generator under the contraction action exhibits a functional on
O/(I + m^{k+1}) that is nonzero on a degree-k monomial.  The colength
loop tries such witnesses first and falls back to exact elimination,
inserting any deferred rows, whenever a witness is missing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .linalg import FracEchelon, IntEchelon
from .poly import (
    Monomial,
    Poly,
    Weights,
    grevlex_key,
    is_weighted_homogeneous,
    jacobian,
    mono_degree,
    mono_mul,
    poly_weighted_degree,
    weighted_degree,
)

DEFAULT_CUTOFF = 30


class NotSingularAtOrigin(ValueError):
    """The germ has a nonzero constant or linear part, so 0 is not a singular point."""


class NotIsolated(ValueError):
    """The Jacobian colength did not stabilize below the cutoff."""

    def __init__(self, message: str, colength_result: "ColengthResult"):
        super().__init__(message)
        self.colength_result = colength_result


class NotQuasihomogeneousInput(ValueError):
    """The polynomial is not weighted-homogeneous for the supplied weights."""


def monomials_of_degree(n: int, d: int) -> list[Monomial]:
    """All exponent tuples of total degree d, in increasing grevlex order."""
    if d < 0:
        return []
    out = []
    for bars in itertools.combinations(range(d + n - 1), n - 1):
        prev = -1
        exps = []
        for b in bars:
            exps.append(b - prev - 1)
            prev = b
        exps.append(d + n - 2 - prev)
        out.append(tuple(exps))
    out.sort(key=grevlex_key)
    return out


def monomials_below(n: int, k: int) -> list[Monomial]:
    """All monomials of total degree < k, sorted by (degree, grevlex)."""
    out: list[Monomial] = []
    for d in range(k):
        out.extend(monomials_of_degree(n, d))
    return out


@dataclass(frozen=True)
class JetSpace:
    """The finite-dimensional space of jets of order < k."""

    n: int
    k: int
    basis: tuple[Monomial, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)


def jet_space(n: int, k: int) -> JetSpace:
    if k < 1:
        raise ValueError("jet order must be at least 1")
    basis = tuple(monomials_below(n, k))
    assert len(basis) == comb(n + k - 1, n)
    return JetSpace(n, k, basis)


def _truncated_multiple(g: Poly, beta: Monomial, max_degree: int):
    """Row dict of x^beta * g keeping entries of total degree < max_degree."""
    row = {}
    base = mono_degree(beta)
    for mono, coeff in g.terms.items():
        if base + mono_degree(mono) < max_degree:
            row[mono_mul(beta, mono)] = coeff
    return row


def quotient_basis(gens: list[Poly], k: int) -> list[Monomial]:
    """Monomial basis of O/(I + m^k), deterministic under the jet order.

    Spans all truncated multiples of the generators, row reduces, and
    returns the non-pivot monomials.
    """
    if k < 1:
        raise ValueError("jet order must be at least 1")
    if not gens:
        raise ValueError("empty generator list")
    n = gens[0].nvars
    ech = IntEchelon(col_key=grevlex_key)
    for g in gens:
        if g.is_zero:
            continue
        low = g.min_degree()
        for d in range(k - low):
            for beta in monomials_of_degree(n, d):
                row = _truncated_multiple(g, beta, k)
                if row:
                    ech.insert(row)
    return [m for m in monomials_below(n, k) if m not in ech.pivots]


@dataclass
class ColengthResult:
    """Outcome of a local colength computation.

    When finite, `value` is dim O/I, certified by the Nakayama equality
    at `stabilization_order`.  `d_values` holds the exactly computed jet
    dimensions and `growth_witnesses` the inverse-monomial exponents that
    certified strict growth where full elimination was skipped.
    """

    finite: bool
    value: int | None
    stabilization_order: int | None
    cutoff: int
    certificate: str | None = None
    d_values: dict[int, int] = field(default_factory=dict)
    growth_witnesses: dict[int, Monomial] = field(default_factory=dict)

    def __str__(self) -> str:
        if self.finite:
            return f"{self.value} (stabilized at order {self.stabilization_order})"
        return f"NotFiniteUpTo({self.cutoff})"


def _growth_witness(supports: list[set[Monomial]], n: int, k: int) -> Monomial | None:
    """An exponent a (all entries >= 1, sum = k+n) with: for every support
    monomial b of every generator some coordinate has b_t >= a_t.

    Such an a makes [x^-a] kill every generator under contraction, which
    proves the degree-k monomial x^(a-1) avoids I + m^(k+1)."""
    for raw in monomials_of_degree(n, k):
        a = tuple(e + 1 for e in raw)
        ok = True
        for support in supports:
            for b in support:
                if not any(bt >= at for bt, at in zip(b, a)):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return a
    return None


class _ColengthEngine:
    """Incremental exact echelon of the truncated generator multiples.

    Rows are grouped into batches by the total degree of their lowest
    term; batch b must be inserted before pivot counts below degree b+1
    are read.  Entries of degree >= max_order are dropped, which cannot
    disturb any pivot below that bound.
    """

    def __init__(self, gens: list[Poly], max_order: int):
        self.gens = [g for g in gens if not g.is_zero]
        self.n = gens[0].nvars
        self.max_order = max_order
        self.ech = IntEchelon(col_key=grevlex_key)
        self.next_batch = 0
        self.pivot_degrees: list[int] = []

    def ensure_batches(self, through: int) -> None:
        through = min(through, self.max_order - 1)
        while self.next_batch <= through:
            b = self.next_batch
            for g in self.gens:
                d = b - g.min_degree()
                if d < 0:
                    continue
                for beta in monomials_of_degree(self.n, d):
                    row = _truncated_multiple(g, beta, self.max_order)
                    if row:
                        col = self.ech.insert(row)
                        if col is not None:
                            self.pivot_degrees.append(mono_degree(col))
            self.next_batch = b + 1

    def dimension(self, k: int) -> int:
        """dim O/(I + m^k); requires (and triggers) batches below k."""
        self.ensure_batches(k - 1)
        total = comb(self.n + k - 1, self.n)
        rank = sum(1 for d in self.pivot_degrees if d < k)
        return total - rank


def colength(gens: list[Poly], cutoff: int = DEFAULT_CUTOFF, recheck: int = 3) -> ColengthResult:
    """Colength of the ideal generated by `gens` in the local ring at 0.

    Walks k = 1, 2, ... comparing dim O/(I+m^k) with the next order;
    the first equality certifies the value (Nakayama) and is re-checked
    `recheck` extra orders past the stabilization.  Without stabilization
    below `cutoff` the result is an honest NotFiniteUpTo verdict.
    """
    if cutoff < 2:
        raise ValueError("cutoff must be at least 2")
    if not gens:
        raise ValueError("empty generator list")
    n = gens[0].nvars
    supports = [set(g.terms) for g in gens if not g.is_zero]
    engine = _ColengthEngine(gens, max_order=cutoff + recheck + 2)
    d_values: dict[int, int] = {}
    witnesses: dict[int, Monomial] = {}

    for k in range(1, cutoff):
        witness = _growth_witness(supports, n, k)
        if witness is not None:
            witnesses[k] = witness
            continue
        dk = engine.dimension(k)
        dk1 = engine.dimension(k + 1)
        d_values[k] = dk
        d_values[k + 1] = dk1
        if dk == dk1:
            for extra in range(2, recheck + 2):
                d_extra = engine.dimension(k + extra)
                d_values[k + extra] = d_extra
                if d_extra != dk:
                    raise AssertionError("jet dimensions changed after claimed stabilization")
            certificate = (
                f"dim O/(I+m^{k}) = dim O/(I+m^{k + 1}) = {dk}, "
                f"hence m^{k} is contained in I (Nakayama) and the colength is {dk}"
            )
            return ColengthResult(
                finite=True,
                value=dk,
                stabilization_order=k,
                cutoff=cutoff,
                certificate=certificate,
                d_values=d_values,
                growth_witnesses=witnesses,
            )
    return ColengthResult(
        finite=False,
        value=None,
        stabilization_order=None,
        cutoff=cutoff,
        certificate=None,
        d_values=d_values,
        growth_witnesses=witnesses,
    )


def milnor_tjurina(f: Poly, cutoff: int = DEFAULT_CUTOFF) -> tuple[ColengthResult, ColengthResult]:
    """Milnor and Tjurina numbers of the germ, with their certificates.

    Gates: f must lie in m^2 (no constant or linear terms) and the
    Jacobian colength must stabilize below the cutoff; otherwise
    NotSingularAtOrigin or NotIsolated is raised.
    """
    if f.is_zero:
        raise NotSingularAtOrigin("the zero polynomial does not define a divisor germ")
    if f.min_degree() < 2:
        raise NotSingularAtOrigin("f has a constant or linear term, so the origin is not singular")
    grads = jacobian(f)
    mu = colength(grads, cutoff)
    if not mu.finite:
        raise NotIsolated(
            f"Jacobian ideal colength did not stabilize up to cutoff {cutoff}", mu
        )
    tau = colength([f] + grads, cutoff)
    if not tau.finite or tau.value > mu.value:
        raise AssertionError("Tjurina computation inconsistent with finite Milnor number")
    return mu, tau


@dataclass
class MPowerResult:
    """Decision of m^k contained in I, with expansion certificates.

    For a positive answer, `certificates` maps each degree-k monomial to
    the list of ((generator index, multiplier exponent), coefficient)
    pairs whose combination equals the monomial modulo m^(k+1); each
    combination is re-expanded exactly before being returned.  For a
    negative answer `failed_monomial` is a degree-k monomial outside
    I + m^(k+1)."""

    contained: bool
    k: int
    certificates: dict[Monomial, list] = field(default_factory=dict)
    failed_monomial: Monomial | None = None


def mpower_in_ideal(gens: list[Poly], k: int) -> MPowerResult:
    """Decide m^k subset of I in the local ring (exact, certified).

    By Nakayama the inclusion holds iff every degree-k monomial lies in
    I + m^(k+1), which is a finite jet-space membership question.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if not gens:
        raise ValueError("empty generator list")
    n = gens[0].nvars
    order = k + 1
    ech = FracEchelon(col_key=grevlex_key, track=True)
    originals: dict = {}
    for i, g in enumerate(gens):
        if g.is_zero:
            continue
        low = g.min_degree()
        for d in range(order - low):
            for beta in monomials_of_degree(n, d):
                row = _truncated_multiple(g, beta, order)
                if row:
                    tag = (i, beta)
                    originals[tag] = (i, beta)
                    ech.insert(row, tag=tag)
    certificates: dict[Monomial, list] = {}
    for mono in monomials_of_degree(n, k):
        remainder, hist = ech.reduce({mono: Fraction(1)}, {})
        if remainder:
            return MPowerResult(False, k, failed_monomial=mono)
        combo = [((i, beta), -c) for (i, beta), c in sorted(hist.items()) if c]
        check = Poly.zero(n)
        for (i, beta), coeff in combo:
            check = check + gens[i].mul_term(coeff, beta)
        diff = check - Poly.monomial(n, mono)
        if any(mono_degree(m) <= k for m in diff.terms):
            raise AssertionError("expansion certificate failed exact verification")
        certificates[mono] = combo
    return MPowerResult(True, k, certificates=certificates)


def smallest_mpower_order(gens: list[Poly], cutoff: int = DEFAULT_CUTOFF) -> int | None:
    """Least k with m^k contained in I, found by direct per-order tests."""
    for k in range(1, cutoff + 1):
        if mpower_in_ideal(gens, k).contained:
            return k
    return None


def weighted_monomials(n: int, weights: Weights, d: Fraction) -> list[Monomial]:
    """All monomials of weighted degree exactly d, sorted by grevlex."""
    d = Fraction(d)
    if d < 0:
        return []
    out: list[Monomial] = []

    def rec(i: int, remaining: Fraction, prefix: tuple):
        if i == n - 1:
            e = remaining / Fraction(weights[i])
            if e.denominator == 1 and e >= 0:
                out.append(prefix + (int(e),))
            return
        w = Fraction(weights[i])
        e = 0
        while e * w <= remaining:
            rec(i + 1, remaining - e * w, prefix + (e,))
            e += 1

    rec(0, d, ())
    out.sort(key=grevlex_key)
    return out


def graded_milnor_piece(f: Poly, weights: Weights, d: Fraction) -> int:
    """dim of the weighted-degree-d piece of O/(Jacobian ideal of f).

    Requires f weighted-homogeneous for `weights` so that the Jacobian
    ideal is graded and the piece is well-defined.
    """
    if len(weights) != f.nvars:
        raise ValueError("weight vector length does not match variable count")
    if any(Fraction(w) <= 0 for w in weights):
        raise ValueError("weights must be strictly positive")
    if not is_weighted_homogeneous(f, weights):
        raise NotQuasihomogeneousInput("f is not weighted-homogeneous for the given weights")
    n = f.nvars
    cols = weighted_monomials(n, weights, Fraction(d))
    if not cols:
        return 0
    fdeg = poly_weighted_degree(f, weights)
    ech = IntEchelon(col_key=grevlex_key)
    for i, fi in enumerate(jacobian(f)):
        if fi.is_zero:
            continue
        target = Fraction(d) - (fdeg - Fraction(weights[i]))
        for beta in weighted_monomials(n, weights, target):
            row = {mono_mul(beta, m): c for m, c in fi.terms.items()}
            ech.insert(row)
    return len(cols) - ech.rank


@dataclass
class LctResult:
    """Graded vanishing test for the logarithmic comparison property."""

    holds: bool
    failed_k: int | None
    piece_dims: dict[int, int]

    def __str__(self) -> str:
        return "holds" if self.holds else f"fails(k={self.failed_k})"


def lct_check(f: Poly, weights: Weights, cutoff: int = DEFAULT_CUTOFF) -> LctResult:
    """Decide the comparison property for a quasihomogeneous isolated germ.

    Checks that the weighted piece of the Milnor algebra in degree
    k - sum(weights) vanishes for k = 1 .. n-2; for n <= 2 the range is
    empty and the property holds.
    """
    if any(Fraction(w) <= 0 for w in weights):
        raise ValueError("weights must be strictly positive")
    if not is_weighted_homogeneous(f, weights) or poly_weighted_degree(f, weights) != 1:
        raise NotQuasihomogeneousInput(
            "f must be weighted-homogeneous of weighted degree 1 for the given weights"
        )
    milnor_tjurina(f, cutoff)  # isolated gate
    total = sum(Fraction(w) for w in weights)
    pieces: dict[int, int] = {}
    for k in range(1, f.nvars - 1):
        dim = graded_milnor_piece(f, weights, Fraction(k) - total)
        pieces[k] = dim
        if dim != 0:
            return LctResult(False, k, pieces)
    return LctResult(True, None, pieces)
