"""
Unit tests for the brute-force point counting oracle.
"""

import random

import pytest

from tame_quotients.algebra import NoSuchRoot
from tame_quotients.config import config
from tame_quotients.count_oracle import (
    TooLarge,
    count_fixed_points,
    count_model_points,
    count_points_presented,
    count_points_stratified,
    fixed_count_report,
    model_count_report,
    presented_count_report,
)
from tame_quotients.invariant_ring import quotient_presentation
from tame_quotients.models import Relation, StratifiedModel, WeightSystem
from tame_quotients.utils import UsageError


class TestCountPointsPresented:
    """Test suite for count_points_presented."""

    @pytest.mark.parametrize("q, expected", [(3, 9), (5, 25), (7, 49)])
    def test_cone_over_conic(self, sign_weights, q, expected):
        """Test sc = b^2 has q^2 points."""
        assert count_points_presented(quotient_presentation(sign_weights), q) == expected

    @pytest.mark.parametrize("q, expected", [(2, 4), (3, 9)])
    def test_cubic_cone(self, cubic_weights, q, expected):
        """Test the cubic cone over F_2 and F_3."""
        assert count_points_presented(quotient_presentation(cubic_weights), q) == expected

    def test_relation_free_report(self):
        """Test a relation-free presentation is predicted as q^g."""
        pres = quotient_presentation(WeightSystem(r=2, weights=[1, 0]))
        report = presented_count_report(pres, 3)
        assert (report.counted, report.predicted, report.match) == (9, 9, True)

    def test_no_prediction_with_relations(self, sign_weights):
        """Test a presentation with relations reports no verdict."""
        report = presented_count_report(quotient_presentation(sign_weights), 3)
        assert report.predicted is None
        assert report.match is None
        assert report.to_json() == {"q": 3, "counted": 9, "predicted": None, "match": None}

    @pytest.mark.parametrize("q", [4, 11])
    def test_unsupported_field(self, sign_weights, q):
        """Test q must be a prime the oracle supports."""
        with pytest.raises(UsageError):
            count_points_presented(quotient_presentation(sign_weights), q)

    def test_search_space_bound(self, sign_weights, mocker):
        """Test the search space bound raises TooLarge."""
        mocker.patch.object(config, "MAX_SEARCH_SPACE", 10)
        with pytest.raises(TooLarge):
            count_points_presented(quotient_presentation(sign_weights), 3)

    def test_small_chunks_same_count(self, sign_weights, mocker):
        """Test chunking does not change the count."""
        mocker.patch.object(config, "COUNT_CHUNK_SIZE", 4)
        assert count_points_presented(quotient_presentation(sign_weights), 5) == 25


class TestRelabelingInvariance:
    """Test suite for counts under a permutation of the generators."""

    @pytest.mark.parametrize(
        "r, weights", [(2, [1, 1]), (3, [1, 2]), (3, [1, 1]), (4, [1, 3]), (2, [1, 1, 1])]
    )
    @pytest.mark.parametrize("q", [3, 5])
    def test_permuted_generators_same_count(self, r, weights, q):
        """Test relabeling generators and relations together leaves the count unchanged."""
        pres = quotient_presentation(WeightSystem(r=r, weights=weights))
        expected = count_points_presented(pres, q)
        rng = random.Random(f"{r}:{weights}:{q}")
        for _ in range(3):
            perm = list(range(len(pres.generators)))
            rng.shuffle(perm)
            relabeled = pres.model_copy(
                update={
                    "generators": tuple(pres.generators[i] for i in perm),
                    "relations": tuple(
                        Relation(
                            lhs=tuple(rel.lhs[i] for i in perm),
                            rhs=tuple(rel.rhs[i] for i in perm),
                        )
                        for rel in pres.relations
                    ),
                }
            )
            assert count_points_presented(relabeled, q) == expected


class TestStratifiedCounts:
    """Test suite for counts of stratified models."""

    @pytest.mark.parametrize(
        "text, weights, q, expected",
        [
            ("affine:2", [0, 0, 0], 3, 9),
            ("projective:1", [0, 0, 0], 5, 6),
            ("torus:2", [0, 0, 0], 3, 4),
        ],
    )
    def test_class_evaluation_matches_enumeration(self, text, weights, q, expected):
        """Test class evaluation and enumeration agree on simple models."""
        model = StratifiedModel.parse(text, 1, weights)
        assert count_points_stratified(model, q) == expected
        assert count_model_points(model, q) == expected

    def test_model_report(self, projective_line_model):
        """Test the model report matches for the projective line."""
        assert model_count_report(projective_line_model, 3).match


class TestFixedPointCounts:
    """Test suite for count_fixed_points."""

    def test_affine_line(self, affine_line_model):
        """Test the affine line has one fixed point."""
        assert count_fixed_points(affine_line_model, 3) == 1

    def test_projective_line(self, projective_line_model):
        """Test the projective line has two fixed points."""
        assert count_fixed_points(projective_line_model, 3) == 2

    def test_torus(self, torus_model):
        """Test a moving torus has no fixed points."""
        assert count_fixed_points(torus_model, 5) == 0

    def test_product_matches_class(self):
        """Test fixed points of a product match its class."""
        model = StratifiedModel.parse("projective:2,affine:1", 2, [1, 0, 0, 1, 0])
        report = fixed_count_report(model, 5)
        assert report.counted == (5 + 1 + 1) * 5
        assert report.match

    def test_needs_root_of_unity(self):
        """Test counting fixed points needs r to divide q - 1."""
        model = StratifiedModel.parse("affine:1", 3, [1, 1])
        with pytest.raises(NoSuchRoot):
            count_fixed_points(model, 5)
