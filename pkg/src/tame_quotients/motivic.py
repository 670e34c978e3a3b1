"""
Motivic bookkeeping in the subring Z[L] of the Grothendieck ring.

Every space produced by the calculator is stratified by affine cells and
tori, so its class is an integer polynomial in L = [A^1]. The Serre
invariant is the image in Z[L]/(L - 1) and the rational volume is the
compactly supported Euler characteristic; both are evaluation at L = 1
on this subring, but they are kept as separate operations.

The full Grothendieck ring, its mixed characteristic variant and
cohomological realizations beyond chi_c are not modelled.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Union

import sympy

from .algebra import TameViolation
from .fiber_geometry import fiber_dimension, fixed_locus, has_integral_point
from .models import (
    ComponentPart,
    EulerCongruenceReport,
    Factor,
    SerreInvariant,
    SerreReport,
    StratifiedModel,
    VolumeReport,
)
from .utils import TameQuotientError

logger = logging.getLogger(__name__)

_L = sympy.Symbol("L")


class NotQGroup(TameQuotientError):
    """Raised when the group order is not a power of the prime q."""

    pass


class NotProper(TameQuotientError):
    """Raised when the Euler characteristic congruence is requested for a non-proper model."""

    pass


@dataclass(frozen=True)
class MotivicClass:
    """
    Integer polynomial in L, coefficients lowest degree first.

    Example:
        >>> (MotivicClass.affine(1) * MotivicClass.torus(1)).coefficients
        (0, -1, 1)
    """

    coefficients: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        coeffs = [int(c) for c in self.coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    # --- constructors ---

    @classmethod
    def from_poly(cls, poly: sympy.Poly) -> "MotivicClass":
        return cls(tuple(int(c) for c in reversed(poly.all_coeffs())))

    @classmethod
    def point(cls) -> "MotivicClass":
        return cls((1,))

    @classmethod
    def lefschetz(cls) -> "MotivicClass":
        return cls((0, 1))

    @classmethod
    def affine(cls, n: int) -> "MotivicClass":
        return cls((0,) * n + (1,))

    @classmethod
    def torus(cls, n: int) -> "MotivicClass":
        return cls.from_poly(sympy.Poly((_L - 1) ** n, _L))

    @classmethod
    def projective(cls, n: int) -> "MotivicClass":
        return cls((1,) * (n + 1))

    @classmethod
    def of_factor(cls, factor: Factor) -> "MotivicClass":
        builders = {"affine": cls.affine, "torus": cls.torus, "projective": cls.projective}
        return builders[factor.kind](factor.dim)

    # --- ring structure ---

    def as_poly(self) -> sympy.Poly:
        return sympy.Poly(list(reversed(self.coefficients)) or [0], _L)

    def __add__(self, other: "MotivicClass") -> "MotivicClass":
        size = max(len(self.coefficients), len(other.coefficients))
        a = self.coefficients + (0,) * (size - len(self.coefficients))
        b = other.coefficients + (0,) * (size - len(other.coefficients))
        return MotivicClass(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> "MotivicClass":
        return MotivicClass(tuple(-c for c in self.coefficients))

    def __sub__(self, other: "MotivicClass") -> "MotivicClass":
        return self + (-other)

    def __mul__(self, other: Union["MotivicClass", int]) -> "MotivicClass":
        if isinstance(other, int):
            return MotivicClass(tuple(c * other for c in self.coefficients))
        return MotivicClass.from_poly(self.as_poly() * other.as_poly())

    __rmul__ = __mul__

    def evaluate(self, value: int) -> int:
        """Value of the class at ``L = value``; at a prime power this is a point count."""
        return sum(c * value**k for k, c in enumerate(self.coefficients))

    def is_zero(self) -> bool:
        return not self.coefficients

    def to_json(self) -> list[int]:
        return list(self.coefficients)

    def __str__(self) -> str:
        return str(self.as_poly().as_expr()) if self.coefficients else "0"


def _class_of_part(part: ComponentPart) -> MotivicClass:
    if part.kind == "affine":
        return MotivicClass.affine(part.dimension)
    if part.kind == "torus":
        return MotivicClass.torus(part.dimension)
    return MotivicClass.projective(part.dimension)


def class_of_special_fiber(m: StratifiedModel) -> MotivicClass:
    """
    Class of the special fiber of the model: the product of its factor classes.

    Example:
        >>> model = StratifiedModel.parse("affine:1,torus:1", 2, [1, 0, 0])
        >>> class_of_special_fiber(model).to_json()
        [0, -1, 1]
    """
    result = MotivicClass.point()
    for factor in m.factors:
        result = result * MotivicClass.of_factor(factor)
    return result


def class_of_fixed_locus(m: StratifiedModel) -> MotivicClass:
    """Sum of the cell classes of the fixed components; zero when the locus is empty."""
    total = MotivicClass()
    for component in fixed_locus(m).components:
        piece = MotivicClass.point()
        for part in component.parts:
            piece = piece * _class_of_part(part)
        total = total + piece
    return total


def class_of_weak_neron_fiber(m: StratifiedModel) -> MotivicClass:
    """
    Class of the weak Neron special fiber, stratified over the fixed locus.

    Over a component of local fiber dimension d the special fiber is an
    affine bundle of rank d, contributing ``L^d`` times the component class.
    """
    total = MotivicClass()
    for component in fixed_locus(m).components:
        piece = MotivicClass.affine(fiber_dimension(m, component))
        for part in component.parts:
            piece = piece * _class_of_part(part)
        total = total + piece
    return total


def serre_invariant(c: MotivicClass) -> SerreInvariant:
    """Image of the class in ``Z[L]/(L - 1)``."""
    return SerreInvariant(value=c.evaluate(1))


def rational_volume(c: MotivicClass) -> int:
    """Compactly supported Euler characteristic of the class."""
    return c.evaluate(1)


def check_serre_theorem(m: StratifiedModel) -> SerreReport:
    """
    Compare the Serre invariant of the weak Neron fiber with that of the fixed locus.

    Example:
        >>> model = StratifiedModel.parse("affine:1", 2, [1, 1])
        >>> check_serre_theorem(model).to_json()
        {'serre_lhs': 1, 'serre_rhs': 1, 'pass': True}
    """
    lhs = serre_invariant(class_of_weak_neron_fiber(m)).value
    rhs = serre_invariant(class_of_fixed_locus(m)).value
    report = SerreReport(serre_lhs=lhs, serre_rhs=rhs, passed=lhs == rhs)
    if not report.passed:
        logger.warning(f"Serre invariants differ for {m.label}: {lhs} != {rhs}")
    return report


def _require_q_group(r: int, q: int, p: Optional[int]) -> None:
    if not sympy.isprime(q):
        raise NotQGroup(f"q must be prime, got {q}")
    if r > 1 and set(sympy.factorint(r)) != {q}:
        logger.error(f"Group order {r} is not a power of {q}")
        raise NotQGroup(f"Group order {r} is not a power of {q}")
    if p is not None and p == q and r > 1:
        raise TameViolation(f"q = {q} equals the residue characteristic")


def check_volume_congruence(
    m: StratifiedModel, q: int, p: Optional[int] = None
) -> VolumeReport:
    """
    Check ``s(X_L) = s(X) mod q`` for a q-group action.

    ``s(X_L)`` is the rational volume of the model's special fiber and
    ``s(X)`` that of the weak Neron fiber of the quotient. A nonzero
    ``s(X_L)`` modulo q forces a rational point on the quotient.

    Args:
        m: Stratified model
        q: Prime with r a power of q
        p: Residue characteristic, when known

    Raises:
        NotQGroup: If r is not a power of q
        TameViolation: If p equals q and the group is nontrivial
    """
    _require_q_group(m.r, q, p)
    upstairs = rational_volume(class_of_special_fiber(m))
    quotient = rational_volume(class_of_weak_neron_fiber(m))
    difference = (upstairs - quotient) % q
    integral = has_integral_point(m)
    report = VolumeReport(
        q=q,
        r=m.r,
        volume_special_fiber=upstairs,
        volume_weak_neron=quotient,
        difference_mod_q=difference,
        passed=difference == 0,
        rational_point_forced=upstairs % q != 0,
        integral_point=integral,
    )
    logger.debug(f"Volume congruence for {m.label} at q={q}: {upstairs} vs {quotient}")
    return report


def check_euler_congruence(m: StratifiedModel, q: int) -> EulerCongruenceReport:
    """
    Check ``chi(X) = s(X) mod q`` for proper models.

    Only products of projective spaces are accepted; their Euler
    characteristic is that of the special fiber.

    Raises:
        NotProper: If the model has an affine or torus factor
        NotQGroup: If r is not a power of q
    """
    if any(f.kind != "projective" for f in m.factors):
        raise NotProper(f"Model {m.label} is not proper")
    _require_q_group(m.r, q, None)
    euler = rational_volume(class_of_special_fiber(m))
    volume = rational_volume(class_of_weak_neron_fiber(m))
    difference = (euler - volume) % q
    return EulerCongruenceReport(
        q=q,
        euler_characteristic=euler,
        rational_volume=volume,
        difference_mod_q=difference,
        passed=difference == 0,
    )
