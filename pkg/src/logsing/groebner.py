"""Buchberger engine over the rational polynomial ring.

Handles ideals and submodules of free modules through one code path: a
module element is a :class:`ModVector` (a tuple of Poly components of a
fixed rank), and a plain ideal computation wraps its polynomials as
rank-one vectors.  The basis computation tracks cofactor representations
of every basis element in terms of the input generators, which makes
membership certificates and the Schreyer syzygy construction exact.

Selection strategy: smallest S-pair lcm under the order, ties broken by
generator indices.  The product criterion is applied for ideals only
(it is not valid for module lead terms) and the chain criterion in its
safe "both subpairs already treated" form.  All outputs are sorted, so
results are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from .orders import GREVLEX, TermOrder, top_over
from .poly import Poly, mono_divides, mono_lcm, mono_mul, mono_quotient


class ModVector:
    """Element of a free module O^r, stored as r polynomial components."""

    __slots__ = ("components",)

    def __init__(self, components: Sequence[Poly]):
        comps = tuple(components)
        if not comps:
            raise ValueError("a module vector needs at least one component")
        n = comps[0].nvars
        for c in comps:
            if c.nvars != n:
                raise ValueError("mixed variable counts in module vector")
        object.__setattr__(self, "components", comps)

    def __setattr__(self, name, value):
        raise AttributeError("ModVector is immutable")

    @classmethod
    def zero(cls, rank: int, nvars: int) -> ModVector:
        return cls([Poly.zero(nvars)] * rank)

    @classmethod
    def unit(cls, rank: int, nvars: int, pos: int) -> ModVector:
        comps = [Poly.zero(nvars)] * rank
        comps[pos] = Poly.constant(nvars, 1)
        return cls(comps)

    @property
    def rank(self) -> int:
        return len(self.components)

    @property
    def nvars(self) -> int:
        return self.components[0].nvars

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.components)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModVector):
            return NotImplemented
        return self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __add__(self, other: ModVector) -> ModVector:
        return ModVector([a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: ModVector) -> ModVector:
        return ModVector([a - b for a, b in zip(self.components, other.components)])

    def __neg__(self) -> ModVector:
        return ModVector([-c for c in self.components])

    def scale(self, coeff) -> ModVector:
        return ModVector([c * coeff for c in self.components])

    def mul_term(self, coeff, mono) -> ModVector:
        return ModVector([c.mul_term(coeff, mono) for c in self.components])

    def mul_poly(self, p: Poly) -> ModVector:
        return ModVector([c * p for c in self.components])

    def terms(self):
        for pos, comp in enumerate(self.components):
            for mono, coeff in comp.terms.items():
                yield pos, mono, coeff

    def lead_term(self, order: TermOrder):
        """(position, monomial, coefficient) of the greatest term."""
        best = None
        best_key = None
        for pos, mono, coeff in self.terms():
            key = order.term_key(pos, mono)
            if best_key is None or key > best_key:
                best_key = key
                best = (pos, mono, coeff)
        if best is None:
            raise ValueError("zero vector has no lead term")
        return best

    def to_string(self, names=None) -> str:
        return "(" + ", ".join(c.to_string(names) for c in self.components) + ")"

    def __repr__(self) -> str:
        return f"ModVector{self.to_string()}"


def _as_vectors(gens: Sequence[Poly | ModVector]) -> tuple[list[ModVector], bool, int, int]:
    """Normalize inputs to vectors; returns (vectors, was_poly, rank, nvars)."""
    if not gens:
        raise ValueError("empty generator list")
    first = gens[0]
    if isinstance(first, Poly):
        nvars = first.nvars
        vecs = []
        for g in gens:
            if not isinstance(g, Poly) or g.nvars != nvars:
                raise ValueError("inconsistent generators")
            vecs.append(ModVector([g]))
        return vecs, True, 1, nvars
    rank = first.rank
    nvars = first.nvars
    for g in gens:
        if not isinstance(g, ModVector) or g.rank != rank or g.nvars != nvars:
            raise ValueError("inconsistent generators")
    return list(gens), False, rank, nvars


def _divide_vector(v: ModVector, basis: Sequence[ModVector], order: TermOrder):
    """Full division: v = sum(q_i * basis_i) + r with r irreducible.

    Returns (quotients, remainder); the remainder has no term divisible by
    any basis lead term.  Divisor choice is the first match in listing
    order, so the result is deterministic.
    """
    nvars = v.nvars
    leads = [b.lead_term(order) for b in basis]
    quotients = [Poly.zero(nvars) for _ in basis]
    remainder = ModVector.zero(v.rank, nvars)
    p = v
    while not p.is_zero:
        pos, mono, coeff = p.lead_term(order)
        for i, (bpos, bmono, bcoeff) in enumerate(leads):
            if bpos == pos and mono_divides(bmono, mono):
                t = mono_quotient(mono, bmono)
                q = coeff / bcoeff
                p = p - basis[i].mul_term(q, t)
                quotients[i] = quotients[i] + Poly.monomial(nvars, t, q)
                break
        else:
            term = ModVector.zero(v.rank, nvars)
            comps = list(term.components)
            comps[pos] = Poly.monomial(nvars, mono, coeff)
            term = ModVector(comps)
            remainder = remainder + term
            p = p - term
    return quotients, remainder


@dataclass
class GroebnerBasis:
    """Reduced Groebner basis with cofactor bookkeeping.

    `elements` holds Poly for ideal inputs and ModVector for module
    inputs, sorted by increasing lead term.  `representations[i]` are the
    cofactors expressing element i in the input generators.
    """

    elements: list
    order: TermOrder
    reduced: bool
    nvars: int
    rank: int
    inputs: list = field(repr=False, default_factory=list)
    representations: list = field(repr=False, default_factory=list)
    _vectors: list = field(repr=False, default_factory=list)

    def __len__(self) -> int:
        return len(self.elements)

    def reduce(self, p: Poly | ModVector):
        """Normal form plus cofactors with respect to the basis elements."""
        v = ModVector([p]) if isinstance(p, Poly) else p
        if v.nvars != self.nvars or v.rank != self.rank:
            raise ValueError("rank or variable count mismatch with basis")
        if not self._vectors:
            return p, []
        quotients, remainder = _divide_vector(v, self._vectors, self.order)
        if isinstance(p, Poly):
            return remainder.components[0], quotients
        return remainder, quotients

    def normal_form(self, p: Poly | ModVector):
        return self.reduce(p)[0]

    def contains(self, p: Poly | ModVector) -> bool:
        nf = self.normal_form(p)
        return nf.is_zero

    def input_cofactors(self, quotients: Sequence[Poly]) -> list[Poly]:
        """Convert basis-element quotients into cofactors on the inputs."""
        cof = [Poly.zero(self.nvars) for _ in self.inputs]
        for q, rep in zip(quotients, self.representations):
            if q.is_zero:
                continue
            for j, r in enumerate(rep):
                if not r.is_zero:
                    cof[j] = cof[j] + q * r
        return cof


def buchberger(gens: Sequence[Poly | ModVector], order: TermOrder | None = None) -> GroebnerBasis:
    """Compute the reduced Groebner basis of the ideal or submodule."""
    vecs, was_poly, rank, nvars = _as_vectors(gens)
    if order is None:
        order = GREVLEX if was_poly else top_over(GREVLEX)
    if order.is_module_order and was_poly and rank == 1:
        pass  # a module order on rank one behaves like its base
    elif was_poly and order.is_module_order:
        raise ValueError("module order supplied for polynomial input")

    inputs = list(vecs)
    basis: list[ModVector] = []
    reps: list[list[Poly]] = []
    leads: list[tuple] = []

    def push(v: ModVector, rep: list[Poly]):
        pos, mono, coeff = v.lead_term(order)
        inv = 1 / coeff
        basis.append(v.scale(inv))
        reps.append([r * inv for r in rep])
        leads.append((pos, mono))

    for i, v in enumerate(vecs):
        if v.is_zero:
            continue
        rep = [Poly.zero(nvars) for _ in vecs]
        rep[i] = Poly.constant(nvars, 1)
        push(v, rep)

    def pair_key(i: int, j: int):
        pos, mi = leads[i]
        _, mj = leads[j]
        lcm = mono_lcm(mi, mj)
        return (order.term_key(pos, lcm), i, j)

    pending: set[tuple[int, int]] = set()
    treated: set[tuple[int, int]] = set()
    for j in range(len(basis)):
        for i in range(j):
            if leads[i][0] == leads[j][0]:
                pending.add((i, j))

    while pending:
        i, j = min(pending, key=lambda p: pair_key(*p))
        pending.discard((i, j))
        treated.add((i, j))
        pos, mi = leads[i]
        _, mj = leads[j]
        lcm = mono_lcm(mi, mj)
        # product criterion (coprime lead monomials), valid for ideals only
        if rank == 1 and all(a + b == c for a, b, c in zip(mi, mj, lcm)):
            continue
        # chain criterion, safe form: both subpairs already treated
        skip = False
        for k in range(len(basis)):
            if k in (i, j) or leads[k][0] != pos:
                continue
            if mono_divides(leads[k][1], lcm):
                pik = (min(i, k), max(i, k))
                pjk = (min(j, k), max(j, k))
                if pik in treated and pjk in treated and pik not in pending and pjk not in pending:
                    skip = True
                    break
        if skip:
            continue
        ti = mono_quotient(lcm, mi)
        tj = mono_quotient(lcm, mj)
        s = basis[i].mul_term(1, ti) - basis[j].mul_term(1, tj)
        if s.is_zero:
            continue
        quotients, remainder = _divide_vector(s, basis, order)
        if remainder.is_zero:
            continue
        rep = [Poly.zero(nvars) for _ in vecs]
        for l, q in enumerate(quotients):
            if q.is_zero:
                continue
            for m, r in enumerate(reps[l]):
                if not r.is_zero:
                    rep[m] = rep[m] - q * r
        for m, r in enumerate(reps[i]):
            if not r.is_zero:
                rep[m] = rep[m] + r.mul_term(1, ti)
        for m, r in enumerate(reps[j]):
            if not r.is_zero:
                rep[m] = rep[m] - r.mul_term(1, tj)
        new_index = len(basis)
        push(remainder, rep)
        for k in range(new_index):
            if leads[k][0] == leads[new_index][0]:
                pending.add((k, new_index))

    # minimalize: drop elements whose lead term another element's lead divides
    order_idx = sorted(range(len(basis)), key=lambda i: order.term_key(*leads[i]))
    kept: list[int] = []
    for i in order_idx:
        pos, mono = leads[i]
        if any(leads[k][0] == pos and mono_divides(leads[k][1], mono) for k in kept):
            continue
        kept.append(i)
    basis = [basis[i] for i in kept]
    reps = [reps[i] for i in kept]
    leads = [leads[i] for i in kept]

    # inter-reduce the tails; lead terms are untouched by construction
    for i in range(len(basis)):
        others = basis[:i] + basis[i + 1 :]
        if not others:
            continue
        quotients, remainder = _divide_vector(basis[i], others, order)
        if remainder == basis[i]:
            continue
        rep = list(reps[i])
        other_reps = reps[:i] + reps[i + 1 :]
        for q, orep in zip(quotients, other_reps):
            if q.is_zero:
                continue
            for m, r in enumerate(orep):
                if not r.is_zero:
                    rep[m] = rep[m] - q * r
        pos, mono, coeff = remainder.lead_term(order)
        inv = 1 / coeff
        basis[i] = remainder.scale(inv)
        reps[i] = [r * inv for r in rep]

    elements = [v.components[0] if was_poly else v for v in basis]
    return GroebnerBasis(
        elements=elements,
        order=order,
        reduced=True,
        nvars=nvars,
        rank=rank,
        inputs=gens if isinstance(gens, list) else list(gens),
        representations=reps,
        _vectors=basis,
    )


def normal_form(p: Poly | ModVector, gb: GroebnerBasis):
    return gb.normal_form(p)


@dataclass
class MembershipResult:
    member: bool
    cofactors: list[Poly] | None
    remainder: Poly


def ideal_membership(p: Poly, gens: Sequence[Poly]) -> MembershipResult:
    """Decide p in <gens> over the polynomial ring, with exact cofactors."""
    gb = buchberger(gens)
    nf, quotients = gb.reduce(p)
    if not nf.is_zero:
        return MembershipResult(False, None, nf)
    cof = gb.input_cofactors(quotients)
    check = Poly.zero(p.nvars)
    for c, g in zip(cof, gens):
        check = check + c * g
    if check != p:
        raise AssertionError("cofactor expansion failed to reproduce the input")
    return MembershipResult(True, cof, nf)


def _normalize_syzygy(v: ModVector, order: TermOrder) -> ModVector:
    """Scale to integer coefficients with content 1 and positive lead."""
    coeffs = [c for _, _, c in v.terms()]
    den = 1
    for c in coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    scaled = v.scale(den)
    num = 0
    for _, _, c in scaled.terms():
        num = gcd(num, abs(c.numerator))
    if num > 1:
        scaled = scaled.scale(Fraction(1, num))
    _, _, lead = scaled.lead_term(order)
    if lead < 0:
        scaled = -scaled
    return scaled


def syzygies(gens: Sequence[Poly]) -> list[ModVector]:
    """Generators of the syzygy module {(s_1..s_r) : sum s_i g_i = 0}.

    Built from the Buchberger trace: Schreyer's S-pair relations on the
    computed basis, mapped back through the cofactor matrix, together
    with the rows of I - B*A (A expresses the basis in the generators,
    B the generators in the basis).  Every returned vector is verified
    to satisfy its relation exactly.
    """
    gens = list(gens)
    if not gens:
        raise ValueError("empty generator list")
    nvars = gens[0].nvars
    r = len(gens)
    module_order = top_over(GREVLEX)

    candidates: list[ModVector] = []
    for i, g in enumerate(gens):
        if g.is_zero:
            candidates.append(ModVector.unit(r, nvars, i))

    if any(not g.is_zero for g in gens):
        gb = buchberger(gens)
        basis = gb._vectors
        reps = gb.representations  # A: basis element = sum reps[k][i] * gens[i]
        order = gb.order

        bmat: list[list[Poly]] = []
        for g in gens:
            remainder, quotients = gb.reduce(g)
            if not remainder.is_zero:
                raise AssertionError("input generator did not reduce to zero in its own basis")
            bmat.append(quotients)
        # rows of I - B*A are syzygies of the generators
        for i in range(r):
            row = [Poly.zero(nvars) for _ in range(r)]
            row[i] = Poly.constant(nvars, 1)
            for k, q in enumerate(bmat[i]):
                if q.is_zero:
                    continue
                for j, a in enumerate(reps[k]):
                    if not a.is_zero:
                        row[j] = row[j] - q * a
            vec = ModVector(row)
            if not vec.is_zero:
                candidates.append(vec)

        # Schreyer relations from all S-pairs of the final basis
        leads = [v.lead_term(order) for v in basis]
        s = len(basis)
        for j in range(s):
            for i in range(j):
                if leads[i][0] != leads[j][0]:
                    continue
                mi, mj = leads[i][1], leads[j][1]
                lcm = mono_lcm(mi, mj)
                ti = mono_quotient(lcm, mi)
                tj = mono_quotient(lcm, mj)
                spoly = basis[i].mul_term(1, ti) - basis[j].mul_term(1, tj)
                if spoly.is_zero:
                    quotients = [Poly.zero(nvars) for _ in basis]
                else:
                    quotients, remainder = _divide_vector(spoly, basis, order)
                    if not remainder.is_zero:
                        raise AssertionError("S-pair failed to reduce to zero on a Groebner basis")
                # relation: x^ti e_i - x^tj e_j - sum quotients_k e_k, mapped through A
                row = [Poly.zero(nvars) for _ in range(r)]
                for m, a in enumerate(reps[i]):
                    if not a.is_zero:
                        row[m] = row[m] + a.mul_term(1, ti)
                for m, a in enumerate(reps[j]):
                    if not a.is_zero:
                        row[m] = row[m] - a.mul_term(1, tj)
                for k, q in enumerate(quotients):
                    if q.is_zero:
                        continue
                    for m, a in enumerate(reps[k]):
                        if not a.is_zero:
                            row[m] = row[m] - q * a
                vec = ModVector(row)
                if not vec.is_zero:
                    candidates.append(vec)

    for vec in candidates:
        total = Poly.zero(nvars)
        for comp, g in zip(vec.components, gens):
            total = total + comp * g
        if not total.is_zero:
            raise AssertionError("candidate syzygy does not annihilate the generators")

    normalized = [_normalize_syzygy(v, module_order) for v in candidates]
    normalized = sorted(set(normalized), key=lambda v: module_order.term_key(*v.lead_term(order=module_order)[:2]))

    # prune to an irredundant generating set, smallest leads first
    kept: list[ModVector] = []
    kept_gb: GroebnerBasis | None = None
    for vec in normalized:
        if kept_gb is not None and kept_gb.contains(vec):
            continue
        kept.append(vec)
        kept_gb = buchberger(kept, module_order)
    return kept


def spair_closure_holds(gb: GroebnerBasis) -> bool:
    """Post-hoc check that every S-pair of the basis reduces to zero."""
    basis = gb._vectors
    if not basis:
        return True
    order = gb.order
    leads = [v.lead_term(order) for v in basis]
    for j in range(len(basis)):
        for i in range(j):
            if leads[i][0] != leads[j][0]:
                continue
            mi, mj = leads[i][1], leads[j][1]
            lcm = mono_lcm(mi, mj)
            s = basis[i].mul_term(1, mono_quotient(lcm, mi)) - basis[j].mul_term(
                1, mono_quotient(lcm, mj)
            )
            if s.is_zero:
                continue
            _, remainder = _divide_vector(s, basis, order)
            if not remainder.is_zero:
                return False
    return True
