"""
Brute-force point counting over prime fields.

These counts are independent of the class formulas in ``motivic``: they
enumerate every tuple of field elements and test the defining equations
or the group action directly. Enumeration is vectorized with numpy and
processed in chunks.
"""

import itertools
import logging
from collections.abc import Iterator

import numpy as np
import sympy

from .algebra import primitive_root_of_unity
from .config import config
from .models import CountReport, Factor, StratifiedModel, ToricPresentation
from .motivic import class_of_fixed_locus, class_of_special_fiber
from .utils import TameQuotientError, UsageError

logger = logging.getLogger(__name__)


class TooLarge(TameQuotientError):
    """Raised when an exhaustive search would exceed the configured bound."""

    pass


def _require_field(q: int) -> None:
    if not sympy.isprime(q) or q > config.MAX_COUNT_FIELD:
        logger.error(f"Unsupported counting field size {q}")
        raise UsageError(f"q must be a prime <= {config.MAX_COUNT_FIELD}, got {q}")


def _require_size(q: int, nvars: int) -> None:
    if q**nvars > config.MAX_SEARCH_SPACE:
        logger.error(f"Search space {q}^{nvars} exceeds {config.MAX_SEARCH_SPACE}")
        raise TooLarge(f"Search space {q}^{nvars} exceeds {config.MAX_SEARCH_SPACE} tuples")


def _digits(indices: np.ndarray, q: int, nvars: int) -> np.ndarray:
    """Base-q digits of each index, least significant first."""
    out = np.zeros((indices.size, nvars), dtype=np.int64)
    rest = indices.copy()
    for i in range(nvars):
        out[:, i], rest = np.mod(rest, q), rest // q
    return out


def _chunks(q: int, nvars: int) -> Iterator[np.ndarray]:
    total = q**nvars
    for start in range(0, total, config.COUNT_CHUNK_SIZE):
        stop = min(start + config.COUNT_CHUNK_SIZE, total)
        yield _digits(np.arange(start, stop, dtype=np.int64), q, nvars)


def _monomial_values(points: np.ndarray, exponents: tuple[int, ...], q: int) -> np.ndarray:
    values = np.ones(points.shape[0], dtype=np.int64)
    for column, e in enumerate(exponents):
        for _ in range(e):
            values = np.mod(values * points[:, column], q)
    return values


def count_points_presented(pres: ToricPresentation, q: int) -> int:
    """
    Number of points of ``F_q^g`` satisfying every binomial relation.

    Args:
        pres: Quotient presentation with g generators
        q: Prime field size

    Raises:
        UsageError: If q is not a supported prime
        TooLarge: If ``q^g`` exceeds the search bound

    Example:
        >>> from tame_quotients.invariant_ring import quotient_presentation
        >>> from tame_quotients.models import WeightSystem
        >>> count_points_presented(quotient_presentation(WeightSystem(r=2, weights=[1, 1])), 3)
        9
    """
    _require_field(q)
    g = len(pres.generators)
    _require_size(q, g)

    count = 0
    for points in _chunks(q, g):
        ok = np.ones(points.shape[0], dtype=bool)
        for rel in pres.relations:
            ok &= _monomial_values(points, rel.lhs, q) == _monomial_values(points, rel.rhs, q)
        count += int(ok.sum())
    logger.debug(f"Counted {count} points of a {g}-generator presentation over F_{q}")
    return count


def count_points_stratified(m: StratifiedModel, q: int) -> int:
    """Class of the special fiber evaluated at ``L = q``."""
    return class_of_special_fiber(m).evaluate(q)


def _projective_points(q: int, dim: int) -> list[tuple[int, ...]]:
    """Normalized representatives: first nonzero coordinate equal to 1."""
    points = []
    for lead in range(dim + 1):
        for tail in itertools.product(range(q), repeat=dim - lead):
            points.append((0,) * lead + (1,) + tail)
    return points


def _normalize(point: tuple[int, ...], q: int) -> tuple[int, ...]:
    lead = next(c for c in point if c)
    scale = pow(lead, -1, q)
    return tuple(c * scale % q for c in point)


def _factor_points(factor: Factor, q: int) -> list[tuple[int, ...]]:
    _require_size(q, factor.coordinate_count)
    if factor.kind == "affine":
        return list(itertools.product(range(q), repeat=factor.dim))
    if factor.kind == "torus":
        return list(itertools.product(range(1, q), repeat=factor.dim))
    return _projective_points(q, factor.dim)


def count_model_points(m: StratifiedModel, q: int) -> int:
    """Number of F_q-points of the special fiber, by enumerating each factor."""
    _require_field(q)
    count = 1
    for factor in m.factors:
        count *= len(_factor_points(factor, q))
    return count


def count_fixed_points(m: StratifiedModel, q: int) -> int:
    """
    Number of F_q-points of the special fiber fixed by the generator of mu_r.

    Raises:
        UsageError: If q is not a supported prime
        NoSuchRoot: If r does not divide q - 1
    """
    _require_field(q)
    mu = primitive_root_of_unity(q, m.r)
    count = 1
    for factor, weights in m.factor_weights():
        scalars = [pow(mu, w, q) for w in weights]
        fixed = 0
        for point in _factor_points(factor, q):
            moved = tuple(s * c % q for s, c in zip(scalars, point))
            if factor.kind == "projective":
                moved = _normalize(moved, q)
            if moved == point:
                fixed += 1
        count *= fixed
    return count


def model_count_report(m: StratifiedModel, q: int) -> CountReport:
    """Brute-force count of the special fiber against the class at ``L = q``."""
    return CountReport(q=q, counted=count_model_points(m, q), predicted=count_points_stratified(m, q))


def fixed_count_report(m: StratifiedModel, q: int) -> CountReport:
    """Brute-force count of fixed points against the fixed-locus class at ``L = q``."""
    return CountReport(
        q=q, counted=count_fixed_points(m, q), predicted=class_of_fixed_locus(m).evaluate(q)
    )


def presented_count_report(pres: ToricPresentation, q: int) -> CountReport:
    """
    Count of a presentation; predicted only for relation-free presentations.
    """
    predicted = q ** len(pres.generators) if not pres.relations else None
    return CountReport(q=q, counted=count_points_presented(pres, q), predicted=predicted)
