"""
Unit tests for exact algebra: prime fields, truncated rings and endomorphisms.
"""

import dataclasses
import random

import pytest

from tame_quotients.algebra import (
    DomainMismatch,
    InvalidEndomorphism,
    NoSuchRoot,
    NotPrime,
    PrimeField,
    RingEndomorphism,
    TameViolation,
    TruncatedLocalRing,
    apply_endomorphism,
    compose_endomorphisms,
    primitive_root_of_unity,
)
from tame_quotients.utils import UsageError


class TestPrimeField:
    """Test suite for PrimeField."""

    def test_rejects_composite(self):
        """Test a composite modulus is rejected."""
        with pytest.raises(NotPrime):
            PrimeField(4)

    def test_inverse(self):
        """Test field inverses multiply to one."""
        assert PrimeField(7).inv(3) == 5


class TestPrimitiveRootOfUnity:
    """Test suite for primitive_root_of_unity."""

    @pytest.mark.parametrize("p, r, expected", [(5, 2, 4), (7, 3, 2), (7, 1, 1), (13, 12, 2)])
    def test_smallest_root(self, p, r, expected):
        """Test the smallest primitive root of each order."""
        assert primitive_root_of_unity(p, r) == expected

    def test_no_root_when_r_does_not_divide(self):
        """Test 3 does not divide 5 - 1."""
        with pytest.raises(NoSuchRoot):
            primitive_root_of_unity(5, 3)

    def test_wild_order(self):
        """Test an order divisible by p raises TameViolation."""
        with pytest.raises(TameViolation):
            primitive_root_of_unity(7, 7)

    def test_non_prime_modulus(self):
        """Test a root of unity needs a prime modulus."""
        with pytest.raises(NotPrime):
            primitive_root_of_unity(9, 2)


class TestTruncatedLocalRing:
    """Test suite for ring elements."""

    def test_parse_reduces_coefficients(self, f5_ring):
        """Test parsed coefficients are reduced mod p."""
        element = f5_ring.parse("x + 3*x^2 - t*x")
        assert element.terms == {(0, 1): 1, (0, 2): 3, (1, 1): 4}

    def test_parse_rational_coefficient(self, f5_ring):
        """Test 1/2 is 3 in F_5."""
        assert f5_ring.parse("x/2") == f5_ring.var("x").scale(3)

    def test_parse_unknown_symbol(self, f5_ring):
        """Test a symbol outside the ring is rejected."""
        with pytest.raises(UsageError):
            f5_ring.parse("y + x")

    def test_parse_coefficient_not_defined_mod_p(self, f5_ring):
        """Test a fraction with denominator divisible by p is rejected."""
        with pytest.raises(UsageError):
            f5_ring.parse("x/5")

    def test_truncation_drops_high_degrees(self, line_ring):
        """Test monomials above the truncation degree are dropped."""
        x = line_ring.var(0)
        assert (x**2) * (x**2) == 0
        assert (x**3).min_degree() == 3

    def test_string_rendering(self, f5_ring, line_ring):
        """Test elements render as readable polynomials."""
        assert str(f5_ring.parse("4*t")) == "4*t"
        assert str(line_ring.parse("x^2 + 2*x^3")) == "x^2 + 2*x^3"
        assert str(f5_ring.zero()) == "0"

    def test_linear_part(self, f5_ring):
        """Test the linear part lists the degree-one coefficients."""
        assert f5_ring.parse("2*t + x + t*x").linear_part() == [2, 1]

    def test_mixing_rings_raises(self, f5_ring, line_ring):
        """Test adding elements of different rings raises."""
        with pytest.raises(DomainMismatch):
            f5_ring.var(0) + line_ring.var(0)

    def test_truncation_below_minimum(self):
        """Test a truncation degree below 2 is rejected."""
        with pytest.raises(UsageError):
            TruncatedLocalRing(PrimeField(5), ("x",), 1)

    def test_json_is_graded_lex(self, f5_ring):
        """Test JSON terms come out in graded-lex order."""
        assert f5_ring.parse("x^2 + t").to_json() == [[[1, 0], 1], [[0, 2], 1]]


class TestEndomorphisms:
    """Test suite for apply, compose and inverse."""

    def test_identity_fixes_elements(self, f5_ring):
        """Test the identity endomorphism fixes an element."""
        a = f5_ring.parse("t + x^2 + 3*t*x")
        assert apply_endomorphism(RingEndomorphism.identity(f5_ring), a) == a

    def test_sign_change_fixes_square(self, line_ring):
        """Test x -> -x fixes x^2."""
        x = line_ring.var(0)
        f = RingEndomorphism(line_ring, (-x,))
        assert f(x**2) == x**2

    def test_apply_truncates(self, line_ring):
        """Test x -> x + x^2 sends x^2 to x^2 + 2x^3 when N = 3."""
        x = line_ring.var(0)
        f = RingEndomorphism(line_ring, (x + x**2,))
        assert f(x**2) == line_ring.parse("x^2 + 2*x^3")

    def test_compose_with_identity(self, line_ring):
        """Test composing with the identity changes nothing."""
        x = line_ring.var(0)
        f = RingEndomorphism(line_ring, (x + x**2,))
        assert compose_endomorphisms(f, RingEndomorphism.identity(line_ring)) == f

    def test_square(self, line_ring):
        """Test (x -> x + x^2) squared is x -> x + 2x^2 + 2x^3."""
        x = line_ring.var(0)
        f = RingEndomorphism(line_ring, (x + x**2,))
        assert f.power(2).images[0] == line_ring.parse("x + 2*x^2 + 2*x^3")

    def test_root_of_unity_scaling_has_order_r(self):
        """Test scaling by a cube root of unity in F_7 has order 3."""
        ring = TruncatedLocalRing(PrimeField(7), ("x",), 5)
        f = RingEndomorphism(ring, (ring.var(0).scale(2),))
        assert f.power(3).is_identity()
        assert not f.power(2).is_identity()

    def test_image_with_constant_term(self, line_ring):
        """Test an image with a constant term is not a local endomorphism."""
        with pytest.raises(InvalidEndomorphism):
            RingEndomorphism(line_ring, (line_ring.var(0) + 1,))

    def test_wrong_number_of_images(self, f5_ring):
        """Test the number of images must match the variables."""
        with pytest.raises(InvalidEndomorphism):
            RingEndomorphism(f5_ring, (f5_ring.var(0),))

    def test_apply_to_foreign_element(self, f5_ring, line_ring):
        """Test applying to an element of another ring raises."""
        with pytest.raises(DomainMismatch):
            RingEndomorphism.identity(line_ring).apply(f5_ring.var(0))

    def test_inverse_is_two_sided(self, f5_ring):
        """Test the inverse of a jet automorphism works on both sides."""
        t, x = f5_ring.gens()
        f = RingEndomorphism(f5_ring, (t + x * x, x.scale(2) + t * t * x))
        g = f.inverse()
        assert f.compose(g).is_identity()
        assert g.compose(f).is_identity()

    def test_singular_inverse(self, line_ring):
        """Test x -> x^2 has no inverse."""
        x = line_ring.var(0)
        with pytest.raises(InvalidEndomorphism):
            RingEndomorphism(line_ring, (x * x,)).inverse()

    def test_describe(self, f5_ring):
        """Test describe maps variable names to rendered images."""
        t, x = f5_ring.gens()
        f = RingEndomorphism(f5_ring, (t.scale(4), x.scale(4)))
        assert f.describe() == {"t": "4*t", "x": "4*x"}

    def test_applying_leaves_equality_and_hash_alone(self, f5_ring):
        """Test memoized monomial images are not part of the value."""
        t, x = f5_ring.gens()
        f = RingEndomorphism(f5_ring, (t + x * x, x.scale(2)))
        g = RingEndomorphism(f5_ring, (t + x * x, x.scale(2)))
        before = hash(f)
        f.apply(f5_ring.parse("t^2*x + x^3"))
        assert f == g
        assert hash(f) == before == hash(g)
        assert [field.name for field in dataclasses.fields(RingEndomorphism)] == ["domain", "images"]

    def test_endomorphisms_are_immutable(self, f5_ring):
        """Test assigning to a field of an endomorphism raises."""
        f = RingEndomorphism.identity(f5_ring)
        with pytest.raises(dataclasses.FrozenInstanceError):
            f.images = ()


RING_SHAPES = [(2, 1, 3), (3, 2, 4), (5, 2, 3), (7, 3, 3)]


def _ring(p: int, nvars: int, trunc: int) -> TruncatedLocalRing:
    return TruncatedLocalRing(PrimeField(p), tuple(f"v{i}" for i in range(nvars)), trunc)


class TestRingAxioms:
    """Seeded checks of the commutative ring axioms in truncated rings."""

    @pytest.mark.parametrize("p, nvars, trunc", RING_SHAPES)
    @pytest.mark.parametrize("seed", range(5))
    def test_addition(self, random_element, p, nvars, trunc, seed):
        """Test addition is associative and commutative with inverses."""
        rng = random.Random(seed)
        ring = _ring(p, nvars, trunc)
        a, b, c = (random_element(rng, ring) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert a + b == b + a
        assert (a + (-a)).is_zero()
        assert a + ring.zero() == a

    @pytest.mark.parametrize("p, nvars, trunc", RING_SHAPES)
    @pytest.mark.parametrize("seed", range(5))
    def test_multiplication(self, random_element, p, nvars, trunc, seed):
        """Test multiplication is associative, commutative and distributive."""
        rng = random.Random(seed)
        ring = _ring(p, nvars, trunc)
        a, b, c = (random_element(rng, ring) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c
        assert a * ring.one() == a

    @pytest.mark.parametrize("p, nvars, trunc", RING_SHAPES)
    @pytest.mark.parametrize("seed", range(5))
    def test_truncation_commutes_with_operations(self, random_element, p, nvars, trunc, seed):
        """Test truncating to a lower degree is a ring map."""
        rng = random.Random(seed)
        ring = _ring(p, nvars, trunc)
        a, b = random_element(rng, ring), random_element(rng, ring)
        low = trunc - 1
        assert (a + b).truncate(low) == a.truncate(low) + b.truncate(low)
        assert (a * b).truncate(low) == a.truncate(low) * b.truncate(low)


class TestEndomorphismProperties:
    """Seeded checks that substitution maps are ring homomorphisms."""

    @staticmethod
    def _endomorphism(rng, ring, random_element):
        return RingEndomorphism(ring, tuple(random_element(rng, ring, 1) for _ in ring.variables))

    @pytest.mark.parametrize("p, nvars, trunc", RING_SHAPES)
    @pytest.mark.parametrize("seed", range(5))
    def test_preserves_sums_and_products(self, random_element, p, nvars, trunc, seed):
        """Test f(a + b) = f(a) + f(b) and f(a * b) = f(a) * f(b)."""
        rng = random.Random(seed)
        ring = _ring(p, nvars, trunc)
        f = self._endomorphism(rng, ring, random_element)
        a, b = random_element(rng, ring), random_element(rng, ring)
        assert f(a + b) == f(a) + f(b)
        assert f(a * b) == f(a) * f(b)
        assert f(ring.one()) == ring.one()

    @pytest.mark.parametrize("p, nvars, trunc", RING_SHAPES)
    @pytest.mark.parametrize("seed", range(5))
    def test_composition_is_substitution(self, random_element, p, nvars, trunc, seed):
        """Test (f o g)(a) = f(g(a))."""
        rng = random.Random(seed)
        ring = _ring(p, nvars, trunc)
        f = self._endomorphism(rng, ring, random_element)
        g = self._endomorphism(rng, ring, random_element)
        a = random_element(rng, ring)
        assert compose_endomorphisms(f, g)(a) == f(g(a))

    @pytest.mark.parametrize("p, nvars, trunc", RING_SHAPES)
    @pytest.mark.parametrize("seed", range(5))
    def test_truncation_commutes_with_substitution(
        self, random_element, p, nvars, trunc, seed
    ):
        """Test applying then truncating equals truncating then applying."""
        rng = random.Random(seed)
        ring = _ring(p, nvars, trunc)
        f = self._endomorphism(rng, ring, random_element)
        a = random_element(rng, ring)
        low = trunc - 1
        assert f(a).truncate(low) == f.truncate(low)(a.truncate(low))
