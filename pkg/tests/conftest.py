"""
Pytest configuration and shared fixtures.
"""

import random

import pytest

from tame_quotients.algebra import PrimeField, RingElement, TruncatedLocalRing
from tame_quotients.models import StratifiedModel, WeightSystem
from tame_quotients.tame_action import make_diagonal_action
from tame_quotients.utils import exponents_up_to_degree


@pytest.fixture
def sign_weights():
    """Fixture providing the weight system (2; 1, 1) of P(t, x) -> P(-t, -x)."""
    return WeightSystem(r=2, weights=[1, 1])


@pytest.fixture
def cubic_weights():
    """Fixture providing the weight system (3; 1, 2)."""
    return WeightSystem(r=3, weights=[1, 2])


@pytest.fixture
def affine_line_model():
    """Fixture providing A^1 with the sign action."""
    return StratifiedModel.parse("affine:1", 2, [1, 1])


@pytest.fixture
def torus_model():
    """Fixture providing G_m with the sign action, which has no fixed points."""
    return StratifiedModel.parse("torus:1", 2, [1, 1])


@pytest.fixture
def projective_line_model():
    """Fixture providing P^1 with weights (0, 1) on [x_0 : x_1]."""
    return StratifiedModel.parse("projective:1", 2, [1, 0, 1])


@pytest.fixture
def f5_ring():
    """Fixture providing F_5[t, x] truncated above degree 4."""
    return TruncatedLocalRing(PrimeField(5), ("t", "x"), 4)


@pytest.fixture
def line_ring():
    """Fixture providing F_5[x] truncated above degree 3."""
    return TruncatedLocalRing(PrimeField(5), ("x",), 3)


@pytest.fixture
def sign_action(sign_weights):
    """Fixture providing the diagonal action (2; 1, 1) over F_5."""
    return make_diagonal_action(sign_weights, 5, 4)


@pytest.fixture
def random_element():
    """Fixture providing a factory of seeded random ring elements.

    Each monomial of degree between ``min_degree`` and the truncation degree
    is kept with probability one half, with a random coefficient.
    """

    def build(rng: random.Random, ring: TruncatedLocalRing, min_degree: int = 0) -> RingElement:
        terms = {
            e: rng.randrange(ring.p)
            for e in exponents_up_to_degree(ring.nvars, ring.trunc)
            if sum(e) >= min_degree and rng.random() < 0.5
        }
        return ring.element(terms)

    return build
