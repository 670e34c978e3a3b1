"""
Unit tests for tame actions: diagonal actions, linear parts and diagonalization.
"""

import itertools
import random

import pytest

from tame_quotients.algebra import (
    NoSuchRoot,
    PrimeField,
    RingEndomorphism,
    TameViolation,
    TruncatedLocalRing,
)
from tame_quotients.models import WeightSystem
from tame_quotients.tame_action import (
    NotFiniteOrder,
    PinnedInconsistent,
    TameEndomorphism,
    conjugate_action,
    coordinate_names,
    diagonalize,
    make_diagonal_action,
    residual_linear_part,
    reynolds_project,
)
from tame_quotients.sweep import random_substitution


@pytest.fixture
def swap_action(f5_ring):
    """Fixture providing the involution t <-> x over F_5."""
    t, x = f5_ring.gens()
    return TameEndomorphism(RingEndomorphism(f5_ring, (x, t)), 2)


class TestMakeDiagonalAction:
    """Test suite for make_diagonal_action."""

    def test_sign_action(self, sign_weights):
        """Test (2; 1, 1) over F_5 multiplies both variables by 4."""
        action = make_diagonal_action(sign_weights, 5)
        assert action.endo.describe() == {"t": "4*t", "x": "4*x"}

    def test_trivial_group_is_identity(self):
        """Test the trivial group acts as the identity."""
        action = make_diagonal_action(WeightSystem(r=1, weights=[0]), 7)
        assert action.endo.is_identity()

    def test_cubic_weights(self, cubic_weights):
        """Test mu = 2 in F_7 gives t -> 2t, x -> 4x."""
        action = make_diagonal_action(cubic_weights, 7)
        assert action.endo.describe() == {"t": "2*t", "x": "4*x"}
        assert action.check_order()

    def test_missing_root_of_unity(self, cubic_weights):
        """Test F_5 has no cube root of unity."""
        with pytest.raises(NoSuchRoot):
            make_diagonal_action(cubic_weights, 5)

    def test_coordinate_names(self):
        """Test coordinate names for one and two coordinates."""
        assert coordinate_names(1) == ("t", "x")
        assert coordinate_names(2) == ("t", "x1", "x2")


class TestResidualLinearPart:
    """Test suite for residual_linear_part."""

    def test_diagonal(self, sign_action):
        """Test the linear part of a diagonal action."""
        assert residual_linear_part(sign_action) == [[4, 0], [0, 4]]

    def test_higher_order_terms_invisible(self, line_ring):
        """Test higher order terms do not reach the linear part."""
        x = line_ring.var(0)
        action = TameEndomorphism(RingEndomorphism(line_ring, (x + x * x,)), 2)
        assert residual_linear_part(action) == [[1]]

    def test_unipotent(self):
        """Test a unipotent linear part is reported as is."""
        ring = TruncatedLocalRing(PrimeField(3), ("t", "x"), 3)
        t, x = ring.gens()
        action = TameEndomorphism(RingEndomorphism(ring, (t, x + t)), 2)
        assert residual_linear_part(action) == [[1, 0], [1, 1]]


class TestReynoldsProject:
    """Test suite for reynolds_project."""

    def test_removes_other_weight(self, sign_action):
        """Test (x + x^2) projects to x in weight 1."""
        ring = sign_action.ring
        assert reynolds_project(sign_action, ring.parse("x + x^2"), 1) == ring.var("x")

    def test_eigenvector_unchanged(self, sign_action):
        """Test an eigenvector projects to itself."""
        x = sign_action.ring.var("x")
        assert reynolds_project(sign_action, x, 1) == x

    def test_orthogonal_weight_vanishes(self, sign_action):
        """Test an eigenvector projects to zero in another weight."""
        x = sign_action.ring.var("x")
        assert reynolds_project(sign_action, x, 0).is_zero()


class TestDiagonalize:
    """Test suite for diagonalize."""

    def test_already_diagonal(self, sign_action):
        """Test a diagonal action keeps its variables."""
        result = diagonalize(sign_action)
        assert result.parameters == tuple(sign_action.ring.gens())
        assert result.weights.ell == (1, 1)
        assert result.mu == 4

    def test_swap(self, swap_action):
        """Test t <-> x has eigenparameters t + x (weight 0) and t - x (weight 1)."""
        result = diagonalize(swap_action)
        assert result.weights.ell == (0, 1)
        assert result.parameters[0].linear_part() == [1, 1]
        assert result.parameters[1].linear_part() == [4, 1]
        for v, w in zip(result.parameters, result.weights.ell):
            assert swap_action.is_eigenvector(v, w)

    def test_wild_action(self):
        """Test an order divisible by p raises TameViolation."""
        ring = TruncatedLocalRing(PrimeField(2), ("t", "x"), 4)
        t, x = ring.gens()
        action = TameEndomorphism(RingEndomorphism(ring, (t, x + x * x)), 2)
        with pytest.raises(TameViolation):
            diagonalize(action)

    def test_not_finite_order(self, f5_ring):
        """Test an automorphism of infinite order is rejected."""
        t, x = f5_ring.gens()
        action = TameEndomorphism(RingEndomorphism(f5_ring, (t, x + x * x)), 2)
        with pytest.raises(NotFiniteOrder):
            diagonalize(action)

    def test_pinned_parameter_kept(self, sign_action):
        """Test a pinned eigenvector is kept as the first parameter."""
        t, x = sign_action.ring.gens()
        result = diagonalize(sign_action, [(t + x, 1)])
        assert result.parameters == (t + x, t)
        assert result.weights.ell == (1, 1)

    def test_pinned_wrong_weight(self, sign_action):
        """Test a pinned element of the wrong weight is rejected."""
        x = sign_action.ring.var("x")
        with pytest.raises(PinnedInconsistent):
            diagonalize(sign_action, [(x, 0)])

    def test_pinned_dependent(self, sign_action):
        """Test dependent pinned elements are rejected."""
        t = sign_action.ring.var("t")
        with pytest.raises(PinnedInconsistent):
            diagonalize(sign_action, [(t, 1), (t.scale(2), 1)])

    def test_conjugated_action(self, sign_action):
        """Test diagonalizing a conjugated sign action."""
        ring = sign_action.ring
        t, x = ring.gens()
        phi = RingEndomorphism(ring, (t + x * x, x + t * t))
        conjugated = conjugate_action(sign_action, phi)
        assert conjugated.check_order()
        result = diagonalize(conjugated)
        assert sorted(result.weights.ell) == [1, 1]
        for v, w in zip(result.parameters, result.weights.ell):
            assert conjugated.is_eigenvector(v, w)

    def test_result_json(self, sign_action):
        """Test the JSON payload of a diagonalization."""
        payload = diagonalize(sign_action).to_json()
        assert payload["weights"] == [1, 1]
        assert [entry["polynomial"] for entry in payload["parameters"]] == ["t", "x"]


def _all_weight_systems(r: int, n: int):
    for weights in itertools.product(range(r), repeat=n + 1):
        yield WeightSystem(r=r, weights=list(weights))


class TestActionProperties:
    """Seeded and exhaustive checks of the group action invariants."""

    @pytest.mark.parametrize("p, r, n", [(7, 2, 2), (7, 3, 2), (7, 6, 1), (5, 4, 2), (13, 12, 1)])
    def test_diagonal_action_has_order_r(self, p, r, n):
        """Test the r-th power of every diagonal action is the identity."""
        for w in _all_weight_systems(r, n):
            action = make_diagonal_action(w, p, 3)
            assert action.endo.power(r).is_identity(), w.to_json()

    @pytest.mark.parametrize("seed", range(10))
    def test_linear_part_ignores_higher_order_lifts(self, random_element, seed):
        """Test two lifts agreeing modulo m^2 have the same residual matrix."""
        rng = random.Random(seed)
        w = WeightSystem(r=3, weights=[1, rng.randrange(3), rng.randrange(3)])
        action = make_diagonal_action(w, 7, 4)
        ring = action.ring
        lifted = tuple(img + random_element(rng, ring, 2) for img in action.endo.images)
        other = TameEndomorphism(RingEndomorphism(ring, lifted), w.r)
        assert residual_linear_part(other) == residual_linear_part(action)

    @pytest.mark.parametrize("seed", range(10))
    def test_reynolds_projection_is_idempotent_eigenvector(self, random_element, seed):
        """Test projecting twice changes nothing and lands in the weight space."""
        rng = random.Random(seed)
        p, r = 7, rng.choice([2, 3, 6])
        w = WeightSystem(r=r, weights=[1, rng.randrange(r), rng.randrange(r)])
        diagonal = make_diagonal_action(w, p, 3)
        phi = random_substitution(rng, diagonal.ring.gens(), p, 3)
        action = conjugate_action(diagonal, phi)
        assert action.check_order()

        candidate = random_element(rng, action.ring, 1)
        for weight in range(r):
            v = reynolds_project(action, candidate, weight)
            assert reynolds_project(action, v, weight) == v
            assert action.is_eigenvector(v, weight)

    @pytest.mark.parametrize("seed", range(5))
    def test_weight_zero_projection_is_invariant(self, random_element, seed):
        """Test the weight-zero projection is fixed by the action."""
        rng = random.Random(seed)
        action = make_diagonal_action(WeightSystem(r=3, weights=[1, 2]), 7, 4)
        v = reynolds_project(action, random_element(rng, action.ring), 0)
        assert action.endo.apply(v) == v

    @pytest.mark.parametrize("seed", range(5))
    def test_projections_sum_to_candidate(self, random_element, seed):
        """Test the weight projections decompose the candidate."""
        rng = random.Random(seed)
        action = make_diagonal_action(WeightSystem(r=3, weights=[1, 2]), 7, 4)
        candidate = random_element(rng, action.ring)
        total = action.ring.zero()
        for weight in range(3):
            total = total + reynolds_project(action, candidate, weight)
        assert total == candidate
