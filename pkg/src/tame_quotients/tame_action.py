"""
Tame cyclic actions on truncated local rings.

Builds diagonal actions from weight systems, reads off the residual
linear part of a finite-order endomorphism, and diagonalizes tame
actions: eigenspaces of the linear part are computed by exact kernels
over F_p, lifted to degree-one polynomials and projected onto the
right character by Reynolds averaging.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property

from . import linalg
from .algebra import (
    DomainMismatch,
    PrimeField,
    RingElement,
    RingEndomorphism,
    TameViolation,
    TruncatedLocalRing,
    primitive_root_of_unity,
)
from .config import config
from .models import WeightSystem
from .utils import TameQuotientError

logger = logging.getLogger(__name__)


class NotFiniteOrder(TameQuotientError):
    """Raised when the r-th power of an endomorphism is not the identity."""

    pass


class NotDiagonalizable(TameQuotientError):
    """Raised when the eigenspaces of the linear part do not span."""

    pass


class PinnedInconsistent(TameQuotientError):
    """Raised when a pinned parameter is not an eigenvector of its claimed weight."""

    pass


def coordinate_names(n: int) -> tuple[str, ...]:
    """Variable names for t plus n coordinates: ``(t, x)`` or ``(t, x1, ..., xn)``."""
    if n == 1:
        return ("t", "x")
    return ("t", *(f"x{i}" for i in range(1, n + 1)))


@dataclass(frozen=True)
class TameEndomorphism:
    """An endomorphism together with its claimed order r."""

    endo: RingEndomorphism
    r: int

    @property
    def ring(self) -> TruncatedLocalRing:
        return self.endo.domain

    @property
    def p(self) -> int:
        return self.ring.p

    @cached_property
    def mu(self) -> int:
        """Primitive r-th root of unity the weights refer to."""
        return primitive_root_of_unity(self.p, self.r)

    def check_order(self) -> bool:
        """Return True when ``endo^r`` is the identity modulo truncation."""
        return self.endo.power(self.r).is_identity()

    def is_eigenvector(self, v: RingElement, weight: int) -> bool:
        """Return True when ``endo(v) = mu^weight * v`` exactly."""
        return self.endo.apply(v) == v.scale(pow(self.mu, weight % self.r, self.p))

    def to_json(self) -> dict:
        return {"r": self.r, "p": self.p, "N": self.ring.trunc, "images": self.endo.describe()}


@dataclass(frozen=True)
class DiagonalizationResult:
    """Exact eigenparameters of a tame action and their weights."""

    parameters: tuple[RingElement, ...]
    weights: WeightSystem
    mu: int

    def to_json(self) -> dict:
        return {
            **self.weights.to_json(),
            "mu": self.mu,
            "parameters": [
                {"weight": w, "polynomial": str(v), "terms": v.to_json()}
                for v, w in zip(self.parameters, self.weights.ell)
            ],
        }


def make_diagonal_action(
    w: WeightSystem, p: int, N: int = config.DEFAULT_TRUNCATION
) -> TameEndomorphism:
    """
    Diagonal action ``x_i -> mu^{l_i} x_i`` on ``F_p[t, x_1..x_n]`` truncated at N.

    Args:
        w: Weight system, l_0 acting on t
        p: Prime with r | p - 1
        N: Truncation degree

    Returns:
        TameEndomorphism: The action with claimed order r

    Raises:
        NoSuchRoot: If F_p has no primitive r-th root of unity

    Example:
        >>> action = make_diagonal_action(WeightSystem(r=2, weights=[1, 1]), 5)
        >>> action.endo.describe()
        {'t': '4*t', 'x': '4*x'}
    """
    mu = primitive_root_of_unity(p, w.r)
    ring = TruncatedLocalRing(PrimeField(p), coordinate_names(w.n), N)
    images = tuple(x.scale(pow(mu, ell, p)) for x, ell in zip(ring.gens(), w.ell))
    logger.debug(f"Diagonal action {w.to_json()} over F_{p} with mu={mu}")
    return TameEndomorphism(RingEndomorphism(ring, images), w.r)


def residual_linear_part(a: TameEndomorphism) -> linalg.Matrix:
    """
    Matrix of degree-one coefficients of the variable images.

    Row i lists the coefficients of ``a(x_i)`` on ``x_0, ..., x_n``.
    """
    return a.endo.linear_matrix()


def _require_tame(a: TameEndomorphism) -> None:
    if a.r % a.p == 0:
        logger.error(f"Action of order {a.r} in characteristic {a.p} is wild")
        raise TameViolation(
            f"Characteristic {a.p} divides the group order {a.r}; the action is not diagonalizable"
        )


def reynolds_project(a: TameEndomorphism, candidate: RingElement, weight: int) -> RingElement:
    """
    Project onto the weight eigenspace: ``(1/r) * sum_j mu^(-weight*j) * a^j(candidate)``.

    Raises:
        TameViolation: If p divides r
    """
    _require_tame(a)
    p = a.p
    mu_inv = pow(a.mu, -1, p)
    step = pow(mu_inv, weight % a.r, p)

    total = a.ring.zero()
    current = candidate
    factor = 1
    for _ in range(a.r):
        total = total + current.scale(factor)
        current = a.endo.apply(current)
        factor = factor * step % p
    return total.scale(pow(a.r, -1, p))


def eigenspaces(a: TameEndomorphism) -> dict[int, linalg.Matrix]:
    """Kernel basis of ``M^T - mu^j`` for every weight j with nonzero kernel."""
    p = a.p
    transposed = linalg.transpose(residual_linear_part(a))
    size = len(transposed)
    spaces = {}
    for j in range(a.r):
        eigenvalue = pow(a.mu, j, p)
        shifted = [
            [(transposed[row][col] - (eigenvalue if row == col else 0)) % p for col in range(size)]
            for row in range(size)
        ]
        kernel = linalg.nullspace(shifted, p, size)
        if kernel:
            spaces[j] = kernel
    return spaces


def diagonalize(
    a: TameEndomorphism, pinned: Sequence[tuple[RingElement, int]] = ()
) -> DiagonalizationResult:
    """
    Exact regular system of eigenparameters of a tame action.

    Pinned parameters keep their positions at the front and are returned
    unchanged. The remaining slots are filled with eigenvectors of the
    linear part, by weight ascending, lifted to degree-one polynomials and
    made exact by ``reynolds_project``.

    Args:
        a: Tame endomorphism
        pinned: ``(element, weight)`` pairs that must appear as parameters

    Returns:
        DiagonalizationResult: Parameters and their weights

    Raises:
        TameViolation: If p divides r
        NotFiniteOrder: If ``a^r`` is not the identity
        PinnedInconsistent: If a pinned element is not an eigenvector of its
            weight, or the pinned linear parts are dependent
        NotDiagonalizable: If the eigenspaces do not span
    """
    _require_tame(a)
    if not a.check_order():
        logger.error(f"Endomorphism does not have order dividing {a.r}")
        raise NotFiniteOrder(f"The {a.r}-th power of the endomorphism is not the identity")

    p = a.p
    mu = a.mu
    ring = a.ring
    size = ring.nvars

    parameters: list[RingElement] = []
    weights: list[int] = []
    for element, weight in pinned:
        if element.ring != ring:
            raise DomainMismatch(f"Pinned element {element} is not in {ring}")
        weight %= a.r
        if not a.is_eigenvector(element, weight):
            logger.error(f"Pinned element {element} is not an eigenvector of weight {weight}")
            raise PinnedInconsistent(f"{element} is not an eigenvector of weight {weight}")
        parameters.append(element)
        weights.append(weight)
    if not linalg.is_independent([v.linear_part() for v in parameters], p):
        raise PinnedInconsistent("Pinned parameters have dependent linear parts")

    spaces = eigenspaces(a)
    if sum(len(basis) for basis in spaces.values()) != size:
        logger.error(f"Eigenspace dimensions {[len(b) for b in spaces.values()]} do not sum to {size}")
        raise NotDiagonalizable(
            f"Eigenspaces of the linear part span {sum(len(b) for b in spaces.values())} "
            f"of {size} dimensions"
        )

    linear_parts = [v.linear_part() for v in parameters]
    gens = ring.gens()
    for weight in sorted(spaces):
        for vector in spaces[weight]:
            if len(parameters) == size:
                break
            if not linalg.is_independent(linear_parts + [vector], p):
                continue
            lift = sum((g.scale(c) for g, c in zip(gens, vector) if c), ring.zero())
            parameter = reynolds_project(a, lift, weight)
            if not a.is_eigenvector(parameter, weight):
                raise NotDiagonalizable(f"Averaged lift of weight {weight} is not an eigenvector")
            parameters.append(parameter)
            weights.append(weight)
            linear_parts.append(vector)

    result = DiagonalizationResult(
        parameters=tuple(parameters),
        weights=WeightSystem(r=a.r, weights=weights),
        mu=mu,
    )
    logger.info(f"Diagonalized action of order {a.r} over F_{p}: weights {list(result.weights.ell)}")
    return result


def conjugate_action(a: TameEndomorphism, phi: RingEndomorphism) -> TameEndomorphism:
    """Return ``phi o a o phi^-1``, an action of the same order."""
    conjugated = phi.compose(a.endo).compose(phi.inverse())
    return TameEndomorphism(conjugated, a.r)
