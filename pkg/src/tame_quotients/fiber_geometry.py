"""
Fixed loci, special fibers and sections of quotient models.

Models are products of affine spaces, tori and projective spaces with
diagonal actions. Their fixed loci, the local fiber dimensions of the
weak Neron model over each fixed component, the monomial presentation
of the special fiber over a fixed point, and explicit sections of the
quotient through fixed points are all computed combinatorially.
"""

import itertools
import logging
from collections.abc import Sequence
from math import gcd
from typing import Union

import sympy

from .config import config
from .invariant_ring import NotGaloisWeights, minimal_congruent_monomials
from .models import (
    ComponentPart,
    Factor,
    FixedComponent,
    FixedLocusDescription,
    MonomialIdealPresentation,
    SectionMap,
    StratifiedModel,
    ToricPresentation,
    WeightSystem,
)
from .tame_action import coordinate_names
from .utils import Exponent, TameQuotientError, UsageError, divides, exponents_up_to_degree

logger = logging.getLogger(__name__)

SubstitutionValue = Union[int, str, sympy.Expr]


class ComponentMismatch(TameQuotientError):
    """Raised when a component does not belong to the model's fixed locus."""

    pass


class ArityMismatch(TameQuotientError):
    """Raised when the number of supplied values does not match the variables."""

    pass


class NotARingMap(TameQuotientError):
    """Raised when a section fails to annihilate a relation."""

    exit_code = 1


def projective_remark_model() -> StratifiedModel:
    """
    The projective line with ``(t, [x_0 : x_1]) -> (-t, [-x_0 : x_1])``.

    Its fixed locus is two points.
    """
    return StratifiedModel(
        factors=(Factor(kind="projective", dim=1),),
        weights=WeightSystem(r=2, weights=[1, 1, 0]),
    )


def _factor_parts(index: int, factor: Factor, weights: Sequence[int]) -> list[ComponentPart]:
    if factor.kind == "affine":
        fixed = sum(1 for w in weights if w == 0)
        return [ComponentPart(factor_index=index, factor=factor, kind="affine", dimension=fixed)]
    if factor.kind == "torus":
        if any(weights):
            return []
        return [ComponentPart(factor_index=index, factor=factor, kind="torus", dimension=factor.dim)]

    parts = []
    for value in sorted(set(weights)):
        count = sum(1 for w in weights if w == value)
        parts.append(
            ComponentPart(
                factor_index=index,
                factor=factor,
                kind="projective",
                dimension=count - 1,
                weight_value=value,
                multiplicity=count,
            )
        )
    return parts


def fixed_locus(m: StratifiedModel) -> FixedLocusDescription:
    """
    Fixed locus of the diagonal action on the special fiber.

    Affine factors contribute the coordinate subspace of zero weights, a
    torus is fixed only when all its weights vanish, and a projective
    space contributes one linear subspace per homogeneous weight value.
    Components of the product are products of factor components.

    Example:
        >>> locus = fixed_locus(projective_remark_model())
        >>> len(locus.components)
        2
    """
    per_factor = [
        _factor_parts(index, factor, weights)
        for index, (factor, weights) in enumerate(m.factor_weights())
    ]
    components = tuple(FixedComponent(parts=combo) for combo in itertools.product(*per_factor))
    empty = not components
    logger.debug(f"Fixed locus of {m.label}: {len(components)} components, empty={empty}")
    return FixedLocusDescription(model=m, components=components, empty=empty)


def fiber_dimension(m: StratifiedModel, component: FixedComponent) -> int:
    """
    Number of local coordinates of nonzero weight at a fixed component.

    Over that component the weak Neron special fiber is an affine space of
    this dimension.

    Raises:
        ComponentMismatch: If the component is not one of ``fixed_locus(m)``
    """
    if component not in fixed_locus(m).components:
        logger.error(f"Component {component.to_json()} is not fixed in {m.label}")
        raise ComponentMismatch(f"Component does not belong to the fixed locus of {m.label}")

    slices = m.factor_weights()
    total = 0
    for part in component.parts:
        _, weights = slices[part.factor_index]
        if part.kind == "affine":
            total += sum(1 for w in weights if w != 0)
        elif part.kind == "projective":
            total += sum(1 for w in weights if w != part.weight_value)
    return total


def has_integral_point(m: StratifiedModel) -> bool:
    """True exactly when the fixed locus is nonempty."""
    return not fixed_locus(m).empty


def special_fiber_presentation(w: WeightSystem) -> MonomialIdealPresentation:
    """
    Monomial ideal of the weak Neron special fiber over a fixed point.

    Variables are the coordinates of nonzero weight, ``x0`` standing for t.
    The ideal is generated by the minimal monomials whose weighted degree
    is divisible by r.

    Example:
        >>> special_fiber_presentation(WeightSystem(r=3, weights=[1, 2])).min_generators
        ((1, 1), (3, 0), (0, 3))
    """
    indices = tuple(i for i, ell in enumerate(w.ell) if ell != 0)
    weights = tuple(w.ell[i] for i in indices)
    generators = tuple(minimal_congruent_monomials(weights, w.r)) if indices else ()
    presentation = MonomialIdealPresentation(
        weight_system=w,
        variables=tuple(f"x{i}" for i in indices),
        variable_indices=indices,
        variable_weights=weights,
        min_generators=generators,
        finite_dimension=len(_standard_monomials(generators, len(indices), w.r)),
    )
    logger.debug(
        f"Special fiber of {w.to_json()}: {len(generators)} generators, "
        f"dimension {presentation.finite_dimension}"
    )
    return presentation


def _standard_monomials(generators: Sequence[Exponent], nvars: int, r: int) -> list[Exponent]:
    # Every monomial of degree >= r is divisible by a congruent one.
    return [
        e
        for e in exponents_up_to_degree(nvars, max(r - 1, 0))
        if not any(divides(g, e) for g in generators)
    ]


def standard_monomials(pres: MonomialIdealPresentation) -> list[Exponent]:
    """Monomials outside the ideal, graded-lex sorted."""
    return _standard_monomials(pres.min_generators, len(pres.variables), pres.r)


def ideal_contains(pres: MonomialIdealPresentation, s: Sequence[int]) -> bool:
    """
    Return True when ``x^s`` lies in the monomial ideal.

    Raises:
        ArityMismatch: If ``s`` has the wrong length
    """
    if len(s) != len(pres.variables):
        raise ArityMismatch(f"Expected {len(pres.variables)} exponents, got {len(s)}")
    return any(divides(g, s) for g in pres.min_generators)


def _test_value(value: SubstitutionValue) -> sympy.Expr:
    try:
        expr = sympy.sympify(value)
    except (sympy.SympifyError, TypeError, SyntaxError) as e:
        raise UsageError(f"Test value {value!r} is not a polynomial") from e
    if any(symbol.name == "t" for symbol in expr.free_symbols):
        logger.error(f"Test value {value!r} uses the substitution variable t")
        raise UsageError(f"Test value {value!r} must not involve t")
    return expr


def cosection_check(
    pres: MonomialIdealPresentation,
    values: Sequence[SubstitutionValue],
    p: int = config.DEFAULT_PRIME,
) -> bool:
    """
    Substitute ``x0 -> t`` and ``x_j -> a_j * t^(l_j)`` into every generator.

    Weights are normalized so that t carries weight 1. Returns True when
    every generator vanishes in ``A[t]/(t^r)`` with A the polynomials over
    F_p in the symbols of the test values.

    Args:
        pres: Special fiber presentation
        values: One test polynomial per variable after ``x0``
        p: Characteristic of the coefficients

    Raises:
        NotGaloisWeights: If t does not act through a unit weight
        ArityMismatch: If the number of values is wrong
        UsageError: If a test value is not a polynomial or involves t
    """
    w = pres.weight_system
    if not pres.variable_indices or pres.variable_indices[0] != 0 or gcd(w.ell0, w.r) != 1:
        raise NotGaloisWeights("Substitution needs t among the variables with a unit weight")
    if len(values) != len(pres.variables) - 1:
        logger.error(f"Got {len(values)} test values for {len(pres.variables) - 1} variables")
        raise ArityMismatch(f"Expected {len(pres.variables) - 1} test values, got {len(values)}")

    r = w.r
    unit_inverse = pow(w.ell0, -1, r)
    normalized = [(ell * unit_inverse) % r for ell in pres.variable_weights]
    t = sympy.Symbol("t")
    images = [t] + [
        _test_value(a) * t ** normalized[j] for j, a in enumerate(values, start=1)
    ]

    for generator in pres.min_generators:
        expr = sympy.expand(sympy.Mul(*(img**e for img, e in zip(images, generator))))
        if expr == 0:
            continue
        others = sorted(expr.free_symbols - {t}, key=str)
        poly = sympy.Poly(expr, t, *others, modulus=p)
        if any(monom[0] < r for monom, coeff in poly.terms() if coeff % p):
            logger.debug(f"Generator {generator} survives modulo t^{r}")
            return False
    return True


def _format_poly(poly: sympy.Poly, p: int, name: str) -> str:
    terms = []
    for (degree,), coeff in sorted(poly.terms(), key=lambda item: -item[0][0]):
        c = int(coeff) % p
        if not c:
            continue
        power = "" if degree == 0 else (name if degree == 1 else f"{name}^{degree}")
        if not power:
            terms.append(str(c))
        elif c == 1:
            terms.append(power)
        else:
            terms.append(f"{c}*{power}")
    return " + ".join(terms) if terms else "0"


def section_through_fixed_point(
    pres: ToricPresentation,
    point: Sequence[int],
    p: int = config.DEFAULT_PRIME,
) -> SectionMap:
    """
    Section of the quotient model through a fixed point, as a map to k[s].

    A generator ``t^(a*r) * x^e`` with e supported on zero-weight coordinates
    goes to ``s^a`` times the point values raised to e; a generator involving
    a nonzero-weight coordinate goes to 0. Every relation is checked.

    Args:
        pres: Quotient presentation
        point: Values of the zero-weight coordinates, in coordinate order
        p: Characteristic of the residue field

    Returns:
        SectionMap: Generator images and the equivariant section upstairs

    Raises:
        ArityMismatch: If the point has the wrong number of values
        NotARingMap: If a relation is not annihilated
    """
    w = pres.basis.weight_system
    zero_indices = [i for i in range(1, len(w.ell)) if w.ell[i] == 0]
    if len(point) != len(zero_indices):
        raise ArityMismatch(
            f"Point needs {len(zero_indices)} zero-weight coordinate values, got {len(point)}"
        )
    value_of = {i: v % p for i, v in zip(zero_indices, point)}

    s = sympy.Symbol("s")
    images: list[sympy.Poly] = []
    for generator in pres.generators:
        e = generator.exponents
        if any(e[i] for i in range(1, len(e)) if i not in value_of):
            images.append(sympy.Poly(0, s, modulus=p))
            continue
        coeff = 1
        for i, v in value_of.items():
            coeff = coeff * pow(v, e[i], p) % p
        images.append(sympy.Poly(coeff * s ** (e[0] // w.r), s, modulus=p))

    one = sympy.Poly(1, s, modulus=p)
    for rel in pres.relations:
        lhs, rhs = one, one
        for img, a, b in zip(images, rel.lhs, rel.rhs):
            lhs = lhs * img**a
            rhs = rhs * img**b
        if lhs != rhs:
            logger.error(f"Section breaks relation {rel.equation(pres.names)}")
            raise NotARingMap(f"Section does not respect {rel.equation(pres.names)}")

    names = coordinate_names(w.n)
    lift = {names[0]: "t"}
    for i in range(1, len(w.ell)):
        lift[names[i]] = str(value_of[i]) if i in value_of else "0"

    return SectionMap(
        assignment={g.name: _format_poly(img, p, "s") for g, img in zip(pres.generators, images)},
        point=tuple(value_of[i] for i in zero_indices),
        equivariant_lift=lift,
        verified=True,
    )
