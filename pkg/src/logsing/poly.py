"""Exact sparse multivariate polynomial arithmetic over the rationals.

A monomial is an exponent tuple, one entry per variable.  A Poly maps
monomials to nonzero Fraction coefficients and remembers its variable
count; the zero polynomial stores no terms.  All operations are exact and
return new objects, so values may be shared freely between threads.

The canonical printed form lists terms in decreasing graded reverse
lexicographic order and is accepted back by :func:`parse_poly`.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Rational = Fraction
Monomial = tuple
Weights = tuple


def mono_degree(m: Monomial) -> int:
    return sum(m)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_quotient(b: Monomial, a: Monomial) -> Monomial:
    """Exponent difference b - a; caller guarantees divisibility."""
    return tuple(x - y for x, y in zip(b, a))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def grevlex_key(m: Monomial):
    """Sort key listing monomials in increasing grevlex order."""
    return (sum(m), tuple(-e for e in reversed(m)))


def default_var_names(n: int) -> tuple[str, ...]:
    if n <= 3:
        return ("x", "y", "z")[:n]
    return tuple(f"x{i + 1}" for i in range(n))


def format_fraction(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


class PolyParseError(ValueError):
    """Syntax or name error in a polynomial expression, with position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class Poly:
    """Sparse polynomial with exact rational coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Monomial, Rational] | None = None):
        if nvars < 1:
            raise ValueError("nvars must be positive")
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for mono, coeff in terms.items():
                if len(mono) != nvars:
                    raise ValueError(f"monomial {mono} has wrong length for nvars={nvars}")
                c = Fraction(coeff)
                if c != 0:
                    clean[tuple(mono)] = c
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def zero(cls, nvars: int) -> Poly:
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, value) -> Poly:
        return cls(nvars, {(0,) * nvars: Fraction(value)})

    @classmethod
    def variable(cls, nvars: int, index: int) -> Poly:
        if not 0 <= index < nvars:
            raise ValueError(f"variable index {index} out of range for nvars={nvars}")
        exp = [0] * nvars
        exp[index] = 1
        return cls(nvars, {tuple(exp): Fraction(1)})

    @classmethod
    def monomial(cls, nvars: int, mono: Monomial, coeff=1) -> Poly:
        return cls(nvars, {tuple(mono): Fraction(coeff)})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def _check_same_ring(self, other: Poly) -> None:
        if self.nvars != other.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} != {other.nvars}")

    def __add__(self, other: Poly) -> Poly:
        self._check_same_ring(other)
        out = dict(self.terms)
        for mono, coeff in other.terms.items():
            s = out.get(mono, Fraction(0)) + coeff
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return _raw(self.nvars, out)

    def __sub__(self, other: Poly) -> Poly:
        self._check_same_ring(other)
        out = dict(self.terms)
        for mono, coeff in other.terms.items():
            s = out.get(mono, Fraction(0)) - coeff
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return _raw(self.nvars, out)

    def __neg__(self) -> Poly:
        return _raw(self.nvars, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Poly):
            self._check_same_ring(other)
            out: dict[Monomial, Fraction] = {}
            for ma, ca in self.terms.items():
                for mb, cb in other.terms.items():
                    m = mono_mul(ma, mb)
                    s = out.get(m, Fraction(0)) + ca * cb
                    if s:
                        out[m] = s
                    else:
                        del out[m]
            return _raw(self.nvars, out)
        c = Fraction(other)
        if c == 0:
            return Poly(self.nvars)
        return _raw(self.nvars, {m: coeff * c for m, coeff in self.terms.items()})

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, exponent: int) -> Poly:
        if exponent < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.constant(self.nvars, 1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def mul_term(self, coeff, mono: Monomial) -> Poly:
        """Multiply by the single term coeff * x^mono."""
        c = Fraction(coeff)
        if c == 0:
            return Poly(self.nvars)
        return _raw(self.nvars, {mono_mul(m, mono): cc * c for m, cc in self.terms.items()})

    def diff(self, index: int) -> Poly:
        """Formal partial derivative with respect to variable `index` (0-based)."""
        if not 0 <= index < self.nvars:
            raise ValueError(f"variable index {index} out of range for nvars={self.nvars}")
        out: dict[Monomial, Fraction] = {}
        for mono, coeff in self.terms.items():
            e = mono[index]
            if e == 0:
                continue
            lowered = list(mono)
            lowered[index] = e - 1
            out[tuple(lowered)] = coeff * e
        return _raw(self.nvars, out)

    def coefficient(self, mono: Monomial) -> Fraction:
        return self.terms.get(tuple(mono), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def total_degree(self) -> int | None:
        """Largest total degree of a term, or None for the zero polynomial."""
        if not self.terms:
            return None
        return max(sum(m) for m in self.terms)

    def min_degree(self) -> int | None:
        """Smallest total degree of a term (the vanishing order at 0)."""
        if not self.terms:
            return None
        return min(sum(m) for m in self.terms)

    def truncate_below(self, k: int) -> Poly:
        """Keep only terms of total degree < k."""
        return _raw(self.nvars, {m: c for m, c in self.terms.items() if sum(m) < k})

    def monomials(self) -> list[Monomial]:
        return sorted(self.terms, key=grevlex_key)

    def lead_monomial(self) -> Monomial:
        """Greatest monomial in grevlex order; undefined on zero."""
        if not self.terms:
            raise ValueError("zero polynomial has no lead monomial")
        return max(self.terms, key=grevlex_key)

    def to_string(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        if names is None:
            names = default_var_names(self.nvars)
        parts: list[str] = []
        for mono in sorted(self.terms, key=grevlex_key, reverse=True):
            coeff = self.terms[mono]
            factors = []
            for name, e in zip(names, mono):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            mag = abs(coeff)
            if not factors:
                body = format_fraction(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([format_fraction(mag)] + factors)
            if not parts:
                parts.append(body if coeff > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if coeff > 0 else f"- {body}")
        return " ".join(parts)

    def __str__(self) -> str:
        return self.to_string()

    def __repr__(self) -> str:
        return f"Poly({self.nvars}, {self.to_string()!r})"


def _raw(nvars: int, terms: dict[Monomial, Fraction]) -> Poly:
    """Build a Poly from an already-normalized term dict (no copies)."""
    p = object.__new__(Poly)
    object.__setattr__(p, "nvars", nvars)
    object.__setattr__(p, "terms", terms)
    return p


def poly_arith(a: Poly, b: Poly, op: str) -> Poly:
    """Ring operation dispatch; op is one of 'add', 'sub', 'mul'."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def partial_derivative(p: Poly, index: int) -> Poly:
    return p.diff(index)


def jacobian(f: Poly) -> list[Poly]:
    """The partial derivatives of f, one per variable."""
    return [f.diff(i) for i in range(f.nvars)]


def jacobian_ideals(f: Poly) -> tuple[list[Poly], list[Poly]]:
    """Generators of the gradient ideal and of the ideal including f itself."""
    grads = jacobian(f)
    return grads, [f] + grads


def weighted_degree(mono: Monomial, weights: Weights) -> Fraction:
    if len(mono) != len(weights):
        raise ValueError("weight vector length does not match variable count")
    return sum((Fraction(w) * e for w, e in zip(weights, mono)), Fraction(0))


def poly_weighted_degree(p: Poly, weights: Weights) -> Fraction | None:
    """Common weighted degree of all terms, or None if mixed or zero."""
    degs = {weighted_degree(m, weights) for m in p.terms}
    if len(degs) != 1:
        return None
    return degs.pop()


def is_weighted_homogeneous(p: Poly, weights: Weights) -> bool:
    if p.is_zero:
        return True
    return poly_weighted_degree(p, weights) is not None


# ---------------------------------------------------------------------------
# Expression parser.
#
# Grammar (EBNF, also documented in the README):
#   expr     = [ sign ] term { sign term } ;
#   sign     = "+" | "-" ;
#   term     = factor { "*" factor } ;
#   factor   = atom [ "^" integer ] ;
#   atom     = rational | variable | "(" expr ")" ;
#   rational = integer [ "/" integer ] ;
# Implicit multiplication is deliberately not accepted.
# ---------------------------------------------------------------------------

_TOKEN_OPS = "+-*^()"


def _tokenize(text: str) -> list[tuple[str, object, int]]:
    tokens: list[tuple[str, object, int]] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _TOKEN_OPS:
            tokens.append(("op", ch, i))
            i += 1
            continue
        if ch.isdigit():
            start = i
            while i < len(text) and text[i].isdigit():
                i += 1
            num = int(text[start:i])
            if i < len(text) and text[i] == "/":
                j = i + 1
                if j < len(text) and text[j].isdigit():
                    i = j
                    while i < len(text) and text[i].isdigit():
                        i += 1
                    den = int(text[j:i])
                    if den == 0:
                        raise PolyParseError("zero denominator", start)
                    tokens.append(("num", Fraction(num, den), start))
                    continue
            tokens.append(("num", Fraction(num), start))
            continue
        if ch.isalpha() or ch == "_":
            start = i
            while i < len(text) and (text[i].isalnum() or text[i] == "_"):
                i += 1
            tokens.append(("name", text[start:i], start))
            continue
        raise PolyParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, names: Sequence[str]):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.nvars = len(names)
        self.index = {name: i for i, name in enumerate(names)}
        if len(self.index) != len(names):
            raise ValueError("duplicate variable names")

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str):
        kind, value, pos = self.peek()
        if kind != "op" or value != op:
            raise PolyParseError(f"expected {op!r}", pos)
        self.advance()

    def parse(self) -> Poly:
        p = self.expr()
        kind, value, pos = self.peek()
        if kind != "end":
            raise PolyParseError(f"unexpected token {value!r}", pos)
        return p

    def expr(self) -> Poly:
        kind, value, _ = self.peek()
        negate = False
        if kind == "op" and value in "+-":
            negate = value == "-"
            self.advance()
        result = self.term()
        if negate:
            result = -result
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.advance()
                rhs = self.term()
                result = result - rhs if value == "-" else result + rhs
            else:
                return result

    def term(self) -> Poly:
        result = self.factor()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value == "*":
                self.advance()
                result = result * self.factor()
            else:
                return result

    def factor(self) -> Poly:
        base = self.atom()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.advance()
            kind, value, pos = self.advance()
            if kind != "num" or not isinstance(value, Fraction) or value.denominator != 1 or value < 0:
                raise PolyParseError("exponent must be a non-negative integer", pos)
            return base ** int(value)
        return base

    def atom(self) -> Poly:
        kind, value, pos = self.advance()
        if kind == "num":
            return Poly.constant(self.nvars, value)
        if kind == "name":
            idx = self.index.get(value)
            if idx is None:
                raise PolyParseError(f"unknown variable {value!r}", pos)
            return Poly.variable(self.nvars, idx)
        if kind == "op" and value == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise PolyParseError("expected a number, variable, or parenthesis", pos)


def parse_poly(text: str, names: Sequence[str]) -> Poly:
    """Parse an expression into expanded normal form over the given variables."""
    return _Parser(text, names).parse()
