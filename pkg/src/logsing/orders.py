"""Term orders for polynomials and free-module vectors.

Ring orders: graded reverse lexicographic (the default) and pure
lexicographic.  Module orders are built on top of a ring order, either
term-over-position (compare monomials first) or position-over-term
(compare positions first).  Positions compare so that a lower index is
the greater one.

Every order exposes sort keys: terms compare as their keys compare, so
``max(..., key=order.term_key)`` picks the lead term.
"""

from __future__ import annotations

from dataclasses import dataclass

from .poly import Monomial

_RING_KINDS = ("grevlex", "lex")
_MODULE_KINDS = ("top", "pot")


@dataclass(frozen=True)
class TermOrder:
    """A monomial or module-term order.

    kind is one of "grevlex", "lex" (ring orders) or "top", "pot"
    (module orders, carrying a ring order in `base`).
    """

    kind: str
    base: "TermOrder | None" = None

    def __post_init__(self):
        if self.kind in _RING_KINDS:
            if self.base is not None:
                raise ValueError(f"ring order {self.kind!r} takes no base order")
        elif self.kind in _MODULE_KINDS:
            if self.base is None or self.base.kind not in _RING_KINDS:
                raise ValueError(f"module order {self.kind!r} needs a ring base order")
        else:
            raise ValueError(f"unknown order kind {self.kind!r}")

    @property
    def is_module_order(self) -> bool:
        return self.kind in _MODULE_KINDS

    @property
    def is_graded(self) -> bool:
        if self.is_module_order:
            return self.base.is_graded
        return self.kind == "grevlex"

    def monomial_key(self, m: Monomial):
        kind = self.base.kind if self.is_module_order else self.kind
        if kind == "grevlex":
            return (sum(m), tuple(-e for e in reversed(m)))
        return tuple(m)  # lex

    def term_key(self, pos: int, m: Monomial):
        """Sort key for a module term (position, monomial)."""
        if self.kind == "pot":
            return (-pos, self.monomial_key(m))
        # "top"; ring orders treat everything as position 0
        return (self.monomial_key(m), -pos)


GREVLEX = TermOrder("grevlex")
LEX = TermOrder("lex")


def top_over(base: TermOrder = GREVLEX) -> TermOrder:
    return TermOrder("top", base)


def pot_over(base: TermOrder = GREVLEX) -> TermOrder:
    return TermOrder("pot", base)
