"""
Invariant rings of diagonal cyclic actions.

The invariant ring of a diagonal mu_r action on k[t, x_1..x_n] is the
monoid algebra of the exponent vectors e with sum(l_i * e_i) = 0 mod r.
This module computes its Hilbert basis, the binomial relations among
the generators, the quotient-model presentation with the uniformizer
s = t^r singled out, and degree-bounded certificates for generation,
relation connectivity and relation minimality.
"""

import logging
from collections import defaultdict
from collections.abc import Iterator, Sequence

from . import linalg
from .config import GENERATOR_LETTERS, config
from .models import Generator, HilbertBasis, Relation, ToricPresentation, WeightSystem
from .utils import (
    Exponent,
    TameQuotientError,
    divides,
    exponents_up_to_degree,
    grlex_key,
    weighted_residue,
)

logger = logging.getLogger(__name__)


class LengthMismatch(TameQuotientError):
    """Raised when an exponent vector does not match the number of weights."""

    pass


class NotGaloisWeights(TameQuotientError):
    """Raised when the weight on t is not a unit modulo r."""

    pass


def is_invariant_monomial(w: WeightSystem, e: Sequence[int]) -> bool:
    """
    Return True when ``t^e_0 x^e`` is invariant, i.e. ``sum(l_i * e_i) = 0 mod r``.

    Raises:
        LengthMismatch: If ``len(e)`` differs from ``n + 1``
    """
    if len(e) != len(w.ell):
        logger.error(f"Exponent {tuple(e)} has length {len(e)}, expected {len(w.ell)}")
        raise LengthMismatch(f"Exponent vector needs {len(w.ell)} entries, got {len(e)}")
    return weighted_residue(w.ell, e, w.r) == 0


def minimal_congruent_monomials(weights: Sequence[int], r: int) -> list[Exponent]:
    """
    Minimal nonzero exponents with ``sum(w_i * e_i) = 0 mod r``, graded-lex sorted.

    A minimal zero-sum sequence over Z/r has length at most r, so candidates
    of total degree at most r suffice. A candidate is minimal exactly when
    no smaller congruent exponent divides it.
    """
    nvars = len(weights)
    minimal: list[Exponent] = []
    for e in exponents_up_to_degree(nvars, r):
        if not any(e) or weighted_residue(weights, e, r) != 0:
            continue
        if any(divides(g, e) for g in minimal):
            continue
        minimal.append(e)
    return minimal


def hilbert_basis(w: WeightSystem) -> HilbertBasis:
    """
    Minimal generating set of the invariant exponent monoid.

    Example:
        >>> hilbert_basis(WeightSystem(r=2, weights=[1, 1])).generators
        ((2, 0), (1, 1), (0, 2))
    """
    generators = minimal_congruent_monomials(w.ell, w.r)
    logger.debug(f"Hilbert basis of {w.to_json()}: {len(generators)} generators")
    return HilbertBasis(weight_system=w, generators=tuple(generators))


def _image(generators: Sequence[Exponent], u: Sequence[int]) -> Exponent:
    size = len(generators[0])
    return tuple(sum(c * g[i] for c, g in zip(u, generators)) for i in range(size))


def _products_up_to(degrees: Sequence[int], budget: int) -> Iterator[Exponent]:
    """Yield generator-space vectors u with ``sum(u_g * deg_g) <= budget``."""
    if not degrees:
        yield ()
        return
    first, rest = degrees[0], degrees[1:]
    for k in range(budget // first + 1):
        for tail in _products_up_to(rest, budget - k * first):
            yield (k, *tail)


def _fibers(generators: Sequence[Exponent], degree_bound: int) -> list[tuple[Exponent, list[Exponent]]]:
    """Group generator products of image degree <= bound by image, images ascending."""
    degrees = [sum(g) for g in generators]
    groups: dict[Exponent, list[Exponent]] = defaultdict(list)
    for u in _products_up_to(degrees, degree_bound):
        groups[_image(generators, u)].append(u)
    ordered = sorted(groups, key=grlex_key)
    return [(image, sorted(groups[image], key=grlex_key)) for image in ordered]


class _UnionFind:
    def __init__(self, items: Sequence[Exponent]):
        self.parent = {item: item for item in items}

    def find(self, item: Exponent) -> Exponent:
        while self.parent[item] != item:
            self.parent[item] = self.parent[self.parent[item]]
            item = self.parent[item]
        return item

    def union(self, a: Exponent, b: Exponent) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def _connect(fiber: Sequence[Exponent], relations: Sequence[Relation]) -> _UnionFind:
    """Union-find of a fiber under single relation moves in either direction."""
    members = set(fiber)
    uf = _UnionFind(fiber)
    for u in fiber:
        for rel in relations:
            for a, b in ((rel.lhs, rel.rhs), (rel.rhs, rel.lhs)):
                if divides(a, u):
                    moved = tuple(x - y + z for x, y, z in zip(u, a, b))
                    if moved in members:
                        uf.union(u, moved)
    return uf


def _normalized(u: Sequence[int], v: Sequence[int]) -> Relation:
    u, v = tuple(u), tuple(v)
    if grlex_key(v) < grlex_key(u):
        u, v = v, u
    return Relation(lhs=u, rhs=v)


def lattice_seeds(basis: HilbertBasis) -> list[Relation]:
    """
    Binomials from a Z-basis of the kernel lattice of the exponent matrix.

    Each basis vector is split into its positive and negative parts. The
    vectors generate every integer relation among the generators, so the
    seeds generate the relation lattice (though not, in general, the toric
    ideal on their own).
    """
    if not basis.generators:
        return []
    seeds = []
    for vector in linalg.integer_kernel(basis.matrix()):
        u = [max(x, 0) for x in vector]
        v = [max(-x, 0) for x in vector]
        seeds.append(_normalized(u, v))
    return seeds


def toric_relations(
    basis: HilbertBasis, degree_bound: int = config.DEFAULT_DEGREE_BOUND
) -> list[Relation]:
    """
    Binomial relations among the Hilbert basis generators.

    Starts from the kernel seeds and sweeps the fibers of the monoid map
    degree by degree up to ``degree_bound``. In each fiber, seeds of that
    image are tried first, then the graded-lex smallest member of the first
    component is joined to the smallest member of every other component.
    A relation is kept only when it merges two components. Seeds beyond the
    bound are appended so the relations span the relation lattice, but
    they are not certified: only fibers of degree <= ``degree_bound`` are
    known to be connected. When twice the smallest generator degree exceeds
    the bound no fiber with two members is swept, and every relation is an
    uncertified seed.

    Args:
        basis: Hilbert basis of the monoid
        degree_bound: Largest image degree swept

    Returns:
        list[Relation]: Relations, graded-lex smaller side first
    """
    generators = basis.generators
    seeds = lattice_seeds(basis)
    relations: list[Relation] = []

    for image, fiber in _fibers(generators, degree_bound):
        if len(fiber) < 2:
            continue
        uf = _connect(fiber, relations)
        for seed in seeds:
            if _image(generators, seed.lhs) == image and uf.union(seed.lhs, seed.rhs):
                relations.append(seed)
        roots: dict[Exponent, Exponent] = {}
        for u in fiber:
            roots.setdefault(uf.find(u), u)
        representatives = sorted(roots.values(), key=grlex_key)
        anchor = representatives[0] if representatives else None
        for other in representatives[1:]:
            if uf.union(anchor, other):
                relations.append(_normalized(anchor, other))

    for seed in seeds:
        if sum(_image(generators, seed.lhs)) > degree_bound and seed not in relations:
            relations.append(seed)

    logger.debug(f"{len(relations)} relations for {len(generators)} generators up to degree {degree_bound}")
    return relations


def generator_names(basis: HilbertBasis) -> list[str]:
    """
    Name generators: ``s`` for the pure power ``t^r``, then letters in order.

    Example:
        >>> generator_names(hilbert_basis(WeightSystem(r=3, weights=[1, 2])))
        ['b', 's', 'c']
    """
    r = basis.weight_system.r
    uniformizer = (r,) + (0,) * basis.weight_system.n
    names = []
    letters = iter(GENERATOR_LETTERS)
    for index, g in enumerate(basis.generators):
        if g == uniformizer:
            names.append("s")
        else:
            names.append(next(letters, f"g{index}"))
    return names


def quotient_presentation(
    w: WeightSystem, degree_bound: int = config.DEFAULT_DEGREE_BOUND
) -> ToricPresentation:
    """
    Presentation of the quotient model ``Spec k[[s]][generators]/(relations)``.

    Args:
        w: Weight system with l_0 a unit modulo r
        degree_bound: Degree up to which relations are certified

    Returns:
        ToricPresentation: Named generators, relations and the uniformizer

    Raises:
        NotGaloisWeights: If gcd(l_0, r) != 1

    Example:
        >>> pres = quotient_presentation(WeightSystem(r=2, weights=[1, 1]))
        >>> [rel.equation(pres.names) for rel in pres.relations]
        ['s*c = b^2']
    """
    if not w.is_galois:
        logger.error(f"Weight {w.ell0} on t is not a unit modulo {w.r}")
        raise NotGaloisWeights(
            f"The weight on t must be a unit modulo r, got l_0={w.ell0}, r={w.r}"
        )
    basis = hilbert_basis(w)
    names = generator_names(basis)
    relations = toric_relations(basis, degree_bound)
    generators = tuple(
        Generator(name=name, exponents=g) for name, g in zip(names, basis.generators)
    )
    presentation = ToricPresentation(
        basis=basis,
        generators=generators,
        relations=tuple(relations),
        uniformizer_index=names.index("s"),
    )
    logger.info(
        f"Quotient of {w.to_json()}: {len(generators)} generators, {len(relations)} relations"
    )
    return presentation


def invariant_monomial_count(w: WeightSystem, degree_bound: int) -> list[int]:
    """Number of invariant monomials in each total degree ``0..degree_bound``."""
    counts = [0] * (degree_bound + 1)
    for e in exponents_up_to_degree(len(w.ell), degree_bound):
        if weighted_residue(w.ell, e, w.r) == 0:
            counts[sum(e)] += 1
    return counts


def generation_certificate(
    basis: HilbertBasis, degree_bound: int = config.DEFAULT_DEGREE_BOUND
) -> bool:
    """
    Check that every invariant monomial of degree <= bound is a sum of generators.

    Reachable monomials are built up by adding generators to already
    reachable ones, by increasing degree.
    """
    w = basis.weight_system
    reachable: set[Exponent] = {(0,) * len(w.ell)}
    frontier = list(reachable)
    while frontier:
        next_frontier = []
        for m in frontier:
            for g in basis.generators:
                candidate = tuple(a + b for a, b in zip(m, g))
                if sum(candidate) <= degree_bound and candidate not in reachable:
                    reachable.add(candidate)
                    next_frontier.append(candidate)
        frontier = next_frontier

    invariant = {
        e for e in exponents_up_to_degree(len(w.ell), degree_bound)
        if weighted_residue(w.ell, e, w.r) == 0
    }
    return invariant == reachable


def connectivity_certificate(
    presentation: ToricPresentation,
    degree_bound: int = config.DEFAULT_DEGREE_BOUND,
    relations: Sequence[Relation] | None = None,
) -> bool:
    """
    Check that every fiber of degree <= bound is connected by relation moves.

    Args:
        presentation: Quotient presentation
        degree_bound: Largest image degree checked
        relations: Relations to use instead of the presentation's own

    Returns:
        bool: True when every fiber is a single component
    """
    generators = presentation.basis.generators
    moves = presentation.relations if relations is None else relations
    for image, fiber in _fibers(generators, degree_bound):
        if len(fiber) < 2:
            continue
        uf = _connect(fiber, moves)
        if len({uf.find(u) for u in fiber}) > 1:
            logger.debug(f"Fiber over {image} is disconnected")
            return False
    return True


def minimality_certificate(
    presentation: ToricPresentation, degree_bound: int = config.DEFAULT_DEGREE_BOUND
) -> bool:
    """Check that dropping any relation of degree <= bound disconnects some fiber."""
    generators = presentation.basis.generators
    relations = list(presentation.relations)
    for index, rel in enumerate(relations):
        if sum(_image(generators, rel.lhs)) > degree_bound:
            continue
        rest = relations[:index] + relations[index + 1 :]
        if connectivity_certificate(presentation, degree_bound, rest):
            return False
    return True


def relation_sound(presentation: ToricPresentation, relation: Relation) -> bool:
    """Return True when both sides of the relation have the same monomial image."""
    generators = presentation.basis.generators
    return relation.lhs != relation.rhs and _image(generators, relation.lhs) == _image(
        generators, relation.rhs
    )
