"""Differential polynomials in the curvature kappa and its derivatives.

A monomial is ``coeff * k0^e0 * k1^e1 * ...`` where ``ki`` stands for the
i-th derivative of the curvature with respect to arclength.  The ring
carries the arclength derivation (``ki`` maps to ``k(i+1)`` under the
Leibniz rule) and a parity grading by *odd degree*: the total exponent of
factors with odd derivative order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import MissingAssignmentError
from .scalar import QR2Scalar

__all__ = ["DiffMonomial", "DiffPoly", "GradedClass", "class_product_bound"]

# ((derivative order, exponent), ...) with orders strictly increasing and
# exponents >= 1; the empty tuple is the constant monomial.
ExponentMap = tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class DiffMonomial:
    """One summand of a differential polynomial."""

    coeff: QR2Scalar
    exponents: ExponentMap

    def degree(self) -> int:
        return sum(e for _, e in self.exponents)

    def odd_degree(self) -> int:
        """Total exponent over odd derivative orders."""
        return sum(e for order, e in self.exponents if order % 2 == 1)

    def __str__(self) -> str:
        factors = "*".join(
            f"k{order}" if e == 1 else f"k{order}^{e}" for order, e in self.exponents
        )
        head = f"({self.coeff})"
        return head if not factors else f"{head}*{factors}"


def _monomial_key(exps: ExponentMap) -> tuple:
    # graded-lex: total degree first, then the exponent map itself
    return (sum(e for _, e in exps), exps)


def _merge_exponents(e1: ExponentMap, e2: ExponentMap) -> ExponentMap:
    merged: dict[int, int] = dict(e1)
    for order, e in e2:
        merged[order] = merged.get(order, 0) + e
    return tuple(sorted(merged.items()))


class DiffPoly:
    """Polynomial in k0, k1, k2, ... with coefficients in Q(sqrt2).

    Immutable; the zero polynomial has no terms.  The canonical term
    order used for display and serialization is graded-lexicographic on
    (total degree, exponent map).
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[ExponentMap, QR2Scalar] | None = None):
        clean: dict[ExponentMap, QR2Scalar] = {}
        if terms:
            for exps, coeff in terms.items():
                if coeff:
                    clean[exps] = coeff
        self._terms = clean

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls) -> DiffPoly:
        return cls()

    @classmethod
    def constant(cls, value) -> DiffPoly:
        c = value if isinstance(value, QR2Scalar) else QR2Scalar(value)
        return cls({(): c})

    @classmethod
    def kappa(cls, order: int = 0) -> DiffPoly:
        """The single variable k<order>, i.e. the order-th derivative of kappa."""
        if order < 0:
            raise ValueError("derivative order must be nonnegative")
        return cls({((order, 1),): QR2Scalar(1)})

    @classmethod
    def monomial(cls, coeff, exponents: Mapping[int, int]) -> DiffPoly:
        c = coeff if isinstance(coeff, QR2Scalar) else QR2Scalar(coeff)
        for order, e in exponents.items():
            if order < 0 or e < 0:
                raise ValueError("orders and exponents must be nonnegative")
        exps = tuple(sorted((o, e) for o, e in exponents.items() if e > 0))
        return cls({exps: c})

    # -- inspection ------------------------------------------------------

    def monomials(self) -> list[DiffMonomial]:
        """Terms in canonical order."""
        return [
            DiffMonomial(self._terms[exps], exps)
            for exps in sorted(self._terms, key=_monomial_key)
        ]

    def coefficient_of(self, exponents: Mapping[int, int]) -> QR2Scalar:
        exps = tuple(sorted((o, e) for o, e in exponents.items() if e > 0))
        return self._terms.get(exps, QR2Scalar(0))

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_constant(self) -> bool:
        return all(exps == () for exps in self._terms)

    def constant_value(self) -> QR2Scalar:
        """Value of a constant polynomial (0 for the zero polynomial)."""
        if not self.is_constant:
            raise ValueError(f"not a constant polynomial: {self}")
        return self._terms.get((), QR2Scalar(0))

    def max_order(self) -> int:
        """Highest derivative order appearing, or -1 for constants."""
        orders = [order for exps in self._terms for order, _ in exps]
        return max(orders, default=-1)

    def degree(self) -> int:
        return max((sum(e for _, e in exps) for exps in self._terms), default=0)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction, QR2Scalar)):
            other = DiffPoly.constant(other)
        if not isinstance(other, DiffPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(str(m) for m in self.monomials())

    def __repr__(self) -> str:
        return f"DiffPoly({self})"

    # -- ring operations ---------------------------------------------------

    def __add__(self, other) -> DiffPoly:
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        terms = dict(self._terms)
        for exps, coeff in other._terms.items():
            acc = terms.get(exps)
            terms[exps] = coeff if acc is None else acc + coeff
        return DiffPoly(terms)

    __radd__ = __add__

    def __sub__(self, other) -> DiffPoly:
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> DiffPoly:
        return (-self) + other

    def __neg__(self) -> DiffPoly:
        return DiffPoly({exps: -c for exps, c in self._terms.items()})

    def __mul__(self, other) -> DiffPoly:
        if isinstance(other, (int, Fraction, QR2Scalar)):
            return self.scale(other)
        if not isinstance(other, DiffPoly):
            return NotImplemented
        terms: dict[ExponentMap, QR2Scalar] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                exps = _merge_exponents(e1, e2)
                c = c1 * c2
                acc = terms.get(exps)
                terms[exps] = c if acc is None else acc + c
        return DiffPoly(terms)

    __rmul__ = __mul__

    def scale(self, factor) -> DiffPoly:
        f = factor if isinstance(factor, QR2Scalar) else QR2Scalar(factor)
        if not f:
            return DiffPoly.zero()
        return DiffPoly({exps: c * f for exps, c in self._terms.items()})

    def differentiate(self) -> DiffPoly:
        """Arclength derivation: Leibniz rule with ki mapping to k(i+1)."""
        terms: dict[ExponentMap, QR2Scalar] = {}
        for exps, coeff in self._terms.items():
            for i, (order, e) in enumerate(exps):
                factors = dict(exps)
                if e == 1:
                    del factors[order]
                else:
                    factors[order] = e - 1
                factors[order + 1] = factors.get(order + 1, 0) + 1
                new = tuple(sorted(factors.items()))
                c = coeff * e
                acc = terms.get(new)
                terms[new] = c if acc is None else acc + c
        return DiffPoly(terms)

    # -- grading -----------------------------------------------------------

    def in_class(self, cls: GradedClass) -> bool:
        """Membership in the graded class; see GradedClass."""
        for exps in self._terms:
            if any(order > cls.k for order, _ in exps):
                return False
            d = sum(e for order, e in exps if order % 2 == 1)
            if d % 2 != cls.parity:
                return False
        return True

    def kill_odd_derivatives(self) -> DiffPoly:
        """Substitute 0 for every odd-order derivative of kappa.

        Keeps exactly the monomials of odd degree 0; idempotent.
        """
        return DiffPoly(
            {
                exps: c
                for exps, c in self._terms.items()
                if all(order % 2 == 0 for order, _ in exps)
            }
        )

    # -- evaluation ----------------------------------------------------------

    def substitute(self, assign: Mapping[int, float]) -> float:
        """Numeric value with the given derivative-order assignments."""
        missing = sorted(
            {order for exps in self._terms for order, _ in exps if order not in assign}
        )
        if missing:
            raise MissingAssignmentError(missing)
        total = 0.0
        for exps, coeff in self._terms.items():
            val = coeff.to_float()
            for order, e in exps:
                val *= float(assign[order]) ** e
            total += val
        return total

    def substitute_partial(self, assign: Mapping[int, object]) -> DiffPoly:
        """Exactly substitute scalars for a subset of the derivative orders."""
        values = {
            order: (v if isinstance(v, QR2Scalar) else QR2Scalar(v))
            for order, v in assign.items()
        }
        terms: dict[ExponentMap, QR2Scalar] = {}
        for exps, coeff in self._terms.items():
            c = coeff
            kept: list[tuple[int, int]] = []
            for order, e in exps:
                if order in values:
                    c = c * values[order] ** e
                else:
                    kept.append((order, e))
            if not c:
                continue
            new = tuple(kept)
            acc = terms.get(new)
            terms[new] = c if acc is None else acc + c
        return DiffPoly(terms)


@dataclass(frozen=True)
class GradedClass:
    """The class of differential polynomials with derivative orders <= k
    whose summands all have odd degree of parity sigma.

    Even sigma gives the P-type class, odd sigma the Q-type class.  For
    negative k the convention is that the P-type class is the constants
    and the Q-type class is {0}; both fall out of the same membership
    test since constants use no derivative orders and have odd degree 0.
    """

    k: int
    sigma: int

    @property
    def parity(self) -> int:
        return self.sigma % 2

    def contains(self, poly: DiffPoly) -> bool:
        return poly.in_class(self)

    def __mul__(self, other: GradedClass) -> GradedClass:
        if not isinstance(other, GradedClass):
            return NotImplemented
        return GradedClass(max(self.k, other.k), self.sigma + other.sigma)

    def __str__(self) -> str:
        return f"{'P' if self.parity == 0 else 'Q'}^{self.k}"


def class_product_bound(c1: GradedClass, c2: GradedClass) -> GradedClass:
    """Class containing every product of members of c1 and c2."""
    return c1 * c2


def _as_poly(x) -> DiffPoly | None:
    if isinstance(x, DiffPoly):
        return x
    if isinstance(x, (int, Fraction, QR2Scalar)):
        return DiffPoly.constant(x)
    return None
