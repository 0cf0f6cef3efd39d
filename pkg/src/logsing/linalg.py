"""Exact linear algebra over the rationals.

Two sparse echelon flavours share the same interface: IntEchelon keeps
rows as integer vectors (denominators cleared, content reduced) and is
used for rank and pivot structure; FracEchelon keeps Fraction rows and
can track how each pivot row was combined from the inserted originals,
which yields expansion certificates.  Pivoting is deterministic: the
pivot of a row is its first nonzero column in the supplied column order.

Dense helpers cover small systems (weight finding, nullspaces of
assembled maps) and a Fourier-Motzkin feasibility routine decides
whether an affine subspace meets the open positive orthant.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Callable, Hashable, Sequence

Row = dict


def _int_normalize(row: Row) -> Row:
    """Clear denominators and divide out the content; sign of the smallest
    column (by insertion into an echelon this is the pivot) is made positive
    by the caller when needed."""
    den = 1
    for c in row.values():
        c = Fraction(c)
        den = den * c.denominator // gcd(den, c.denominator)
    out = {k: int(Fraction(c) * den) for k, c in row.items() if c != 0}
    if not out:
        return out
    g = 0
    for v in out.values():
        g = gcd(g, abs(v))
    if g > 1:
        out = {k: v // g for k, v in out.items()}
    return out


class IntEchelon:
    """Sparse fraction-free row echelon; rank and pivot columns only."""

    def __init__(self, col_key: Callable[[Hashable], object]):
        self.col_key = col_key
        self.pivots: dict[Hashable, Row] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: Row) -> Row:
        """Eliminate all pivot columns from the row (row is consumed)."""
        work = _int_normalize(row)
        while work:
            col = min(work, key=self.col_key)
            pivot = self.pivots.get(col)
            if pivot is None:
                return work
            a = pivot[col]
            b = work[col]
            merged: Row = {}
            for k, v in work.items():
                merged[k] = v * a
            for k, v in pivot.items():
                merged[k] = merged.get(k, 0) - v * b
            work = {k: v for k, v in merged.items() if v}
            g = 0
            for v in work.values():
                g = gcd(g, abs(v))
            if g > 1:
                work = {k: v // g for k, v in work.items()}
        return work

    def insert(self, row: Row) -> Hashable | None:
        """Insert a row; returns its pivot column, or None if it reduced away."""
        rem = self.reduce(row)
        if not rem:
            return None
        col = min(rem, key=self.col_key)
        if rem[col] < 0:
            rem = {k: -v for k, v in rem.items()}
        self.pivots[col] = rem
        return col


class FracEchelon:
    """Sparse echelon over Fractions with optional provenance tracking.

    With track=True each pivot row remembers its expansion as a linear
    combination of the rows passed to insert (indexed by insertion tag).
    """

    def __init__(self, col_key: Callable[[Hashable], object], track: bool = False):
        self.col_key = col_key
        self.track = track
        self.pivots: dict[Hashable, tuple[Row, Row]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: Row, prov: Row | None = None) -> tuple[Row, Row]:
        work = {k: Fraction(v) for k, v in row.items() if v != 0}
        hist: Row = dict(prov) if prov else {}
        while work:
            col = min(work, key=self.col_key)
            entry = self.pivots.get(col)
            if entry is None:
                return work, hist
            prow, pprov = entry
            q = work[col] / prow[col]
            for k, v in prow.items():
                s = work.get(k, Fraction(0)) - q * v
                if s:
                    work[k] = s
                else:
                    work.pop(k, None)
            if self.track:
                for k, v in pprov.items():
                    s = hist.get(k, Fraction(0)) - q * v
                    if s:
                        hist[k] = s
                    else:
                        hist.pop(k, None)
        return work, hist

    def insert(self, row: Row, tag: Hashable | None = None) -> Hashable | None:
        prov = {tag: Fraction(1)} if (self.track and tag is not None) else None
        rem, hist = self.reduce(row, prov)
        if not rem:
            return None
        col = min(rem, key=self.col_key)
        self.pivots[col] = (rem, hist)
        return col


def solve_sparse(
    equations: Sequence[tuple[Row, Fraction]],
    col_key: Callable[[Hashable], object],
) -> Row | None:
    """One exact solution of a sparse linear system, or None.

    Each equation is (coefficient row, right-hand side).  Free unknowns
    are set to zero; unknowns absent from the returned dict are zero.
    """
    rhs_sentinel = ("#rhs",)

    def key(col):
        if col is rhs_sentinel:
            return (1,)
        return (0, col_key(col))

    ech = FracEchelon(key)
    for row, b in equations:
        full = {k: Fraction(v) for k, v in row.items() if v != 0}
        if b:
            full[rhs_sentinel] = Fraction(b)
        ech.insert(full)
    if rhs_sentinel in ech.pivots:
        return None  # a row reduced to 0 = nonzero
    solution: Row = {}
    for col in sorted(ech.pivots, key=key, reverse=True):
        row, _ = ech.pivots[col]
        total = Fraction(0)
        for k, v in row.items():
            if k is rhs_sentinel:
                total -= v
            elif k != col:
                total += v * solution.get(k, Fraction(0))
        solution[col] = -total / row[col]
    return {k: v for k, v in solution.items() if v}


def nullspace_sparse(
    rows: Sequence[Row],
    columns: Sequence[Hashable],
    col_key: Callable[[Hashable], object],
) -> list[Row]:
    """Basis of the kernel of the map defined by the rows, one dict per vector."""
    ech = FracEchelon(col_key)
    for row in rows:
        ech.insert(row)
    pivot_cols = set(ech.pivots)
    free_cols = [c for c in columns if c not in pivot_cols]
    basis: list[Row] = []
    ordered_pivots = sorted(ech.pivots, key=col_key, reverse=True)
    for free in free_cols:
        vec: Row = {free: Fraction(1)}
        for col in ordered_pivots:
            row, _ = ech.pivots[col]
            total = Fraction(0)
            for k, v in row.items():
                if k != col:
                    total += v * vec.get(k, Fraction(0))
            if total:
                vec[col] = -total / row[col]
        basis.append({k: v for k, v in vec.items() if v})
    return basis


# -- dense helpers ----------------------------------------------------------


def rref_dense(matrix: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot column indices."""
    m = [[Fraction(x) for x in row] for row in matrix]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        sel = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                sel = i
                break
        if sel is None:
            continue
        m[r], m[sel] = m[sel], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                factor = m[i][c]
                m[i] = [a - factor * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def solve_dense(a: list[list[Fraction]], b: list[Fraction]):
    """Particular solution of A x = b with free variables zero, or None."""
    if not a:
        return []
    aug = [row + [rhs] for row, rhs in zip(a, b)]
    rref, pivots = rref_dense(aug)
    ncols = len(a[0])
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        x[c] = rref[i][ncols]
    return x


def nullspace_dense(a: list[list[Fraction]]) -> list[list[Fraction]]:
    if not a:
        return []
    rref, pivots = rref_dense(a)
    ncols = len(a[0])
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for i, c in enumerate(pivots):
            vec[c] = -rref[i][free]
        basis.append(vec)
    return basis


def strict_positive_solution(
    offset: Sequence[Fraction], directions: Sequence[Sequence[Fraction]]
) -> list[Fraction] | None:
    """A point of {offset + span(directions)} with all coordinates > 0.

    Decides strict feasibility by Fourier-Motzkin elimination, which is
    exact over the rationals, and reconstructs a witness by choosing each
    eliminated parameter strictly between its surviving bounds.
    """
    nparams = len(directions)
    # inequalities: const + sum(coeffs * t) > 0
    inequalities = [
        (Fraction(offset[i]), [Fraction(d[i]) for d in directions])
        for i in range(len(offset))
    ]

    def eliminate(ineqs: list, k: int) -> list:
        """Project out parameter k, pairing strict lower and upper bounds."""
        lowers, uppers, rest = [], [], []
        for const, coeffs in ineqs:
            c = coeffs[k]
            reduced = coeffs[:k] + coeffs[k + 1 :]
            if c == 0:
                rest.append((const, reduced))
            elif c > 0:
                # t_k > -(const + rest)/c
                lowers.append((Fraction(const, c), [Fraction(x, c) for x in reduced]))
            else:
                uppers.append((Fraction(const, -c), [Fraction(x, -c) for x in reduced]))
        for lc, lv in lowers:
            for uc, uv in uppers:
                rest.append((lc + uc, [a + b for a, b in zip(lv, uv)]))
        return rest

    # systems[i] is over parameters t_0 .. t_{nparams-1-i}; each elimination
    # projects out the last remaining parameter
    systems = [inequalities]
    for i in range(nparams):
        systems.append(eliminate(systems[-1], nparams - 1 - i))
    if any(const <= 0 for const, _ in systems[-1]):
        return None

    params: list[Fraction] = []
    for j in range(nparams):
        # systems[nparams-1-j] involves t_0 .. t_j; t_0 .. t_{j-1} are chosen
        lower, upper = None, None
        for const, coeffs in systems[nparams - 1 - j]:
            c = coeffs[j]
            if c == 0:
                continue
            tail = const
            for i in range(j):
                tail += coeffs[i] * params[i]
            bound = -tail / c
            if c > 0:
                lower = bound if lower is None else max(lower, bound)
            else:
                upper = bound if upper is None else min(upper, bound)
        if lower is not None and upper is not None:
            t = (lower + upper) / 2
        elif lower is not None:
            t = lower + 1
        elif upper is not None:
            t = upper - 1
        else:
            t = Fraction(0)
        params.append(t)

    point = [Fraction(c) for c in offset]
    for t, d in zip(params, directions):
        point = [p + t * Fraction(x) for p, x in zip(point, d)]
    if any(p <= 0 for p in point):
        raise AssertionError("feasible system produced a non-positive witness")
    return point
