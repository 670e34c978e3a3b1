"""
Exact algebra over prime fields.

This module provides the arithmetic foundation of the calculator:

- ``PrimeField`` and ``primitive_root_of_unity`` for F_p and its roots of unity
- ``TruncatedLocalRing`` / ``RingElement``: sparse polynomials truncated at a
  total degree N, the computable stand-in for a complete local ring
- ``RingEndomorphism``: substitution maps preserving the maximal ideal

All values are immutable after construction. Terms are kept in a dict
from exponent tuples to residues; zero coefficients and terms of degree
above N are never stored.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Union

import sympy
from sympy.ntheory import n_order
from sympy.polys.polyerrors import PolynomialError

from . import linalg
from .config import config
from .utils import Exponent, TameQuotientError, UsageError, grlex_key

logger = logging.getLogger(__name__)


class NotPrime(TameQuotientError):
    """Raised when a field modulus is not prime."""

    pass


class NoSuchRoot(TameQuotientError):
    """Raised when F_p has no primitive r-th root of unity (r does not divide p-1)."""

    pass


class TameViolation(TameQuotientError):
    """Raised when the group order is divisible by the characteristic."""

    pass


class DomainMismatch(TameQuotientError):
    """Raised when elements or maps from different rings are combined."""

    pass


class InvalidEndomorphism(TameQuotientError):
    """Raised when variable images do not define a local endomorphism."""

    pass


@dataclass(frozen=True)
class PrimeField:
    """
    The prime field F_p.

    Raises:
        NotPrime: If p is not a prime number
    """

    p: int

    def __post_init__(self) -> None:
        if not isinstance(self.p, int) or not sympy.isprime(self.p):
            logger.error(f"Field modulus {self.p} is not prime")
            raise NotPrime(f"p must be prime, got {self.p}")

    def reduce(self, value: int) -> int:
        return value % self.p

    def inv(self, value: int) -> int:
        """Multiplicative inverse of a unit."""
        return pow(value % self.p, -1, self.p)

    def __str__(self) -> str:
        return f"F_{self.p}"


def primitive_root_of_unity(p: int, r: int) -> int:
    """
    Smallest residue of exact multiplicative order r in F_p.

    Args:
        p: Prime modulus
        r: Desired order (r >= 1)

    Returns:
        int: The root of unity, in 1..p-1

    Raises:
        NotPrime: If p is not prime
        TameViolation: If p divides r
        NoSuchRoot: If r does not divide p - 1

    Example:
        >>> primitive_root_of_unity(7, 3)
        2
    """
    PrimeField(p)
    if r < 1:
        raise NoSuchRoot(f"Group order must be positive, got r={r}")
    if r % p == 0:
        logger.error(f"Characteristic {p} divides group order {r}")
        raise TameViolation(f"Characteristic {p} divides the group order {r}")
    if (p - 1) % r != 0:
        logger.error(f"No primitive {r}-th root of unity in F_{p}")
        raise NoSuchRoot(f"F_{p} has no primitive {r}-th root of unity ({r} does not divide {p - 1})")

    for candidate in range(1, p):
        if n_order(candidate, p) == r:
            return candidate
    raise NoSuchRoot(f"No element of order {r} found in F_{p}")  # pragma: no cover


@dataclass(frozen=True)
class TruncatedLocalRing:
    """
    Polynomials over F_p in ordered variables, truncated above total degree N.

    The first variable is conventionally the uniformizer t.
    """

    field: PrimeField
    variables: tuple[str, ...]
    trunc: int = config.DEFAULT_TRUNCATION

    def __post_init__(self) -> None:
        if self.trunc < config.MIN_TRUNCATION:
            logger.error(f"Truncation degree {self.trunc} below {config.MIN_TRUNCATION}")
            raise UsageError(f"Truncation N must be >= {config.MIN_TRUNCATION}, got {self.trunc}")
        if len(set(self.variables)) != len(self.variables) or not self.variables:
            raise UsageError(f"Variables must be distinct and nonempty, got {self.variables}")

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def element(self, terms: dict[Exponent, int]) -> "RingElement":
        return RingElement(self, terms)

    def zero(self) -> "RingElement":
        return RingElement(self, {})

    def constant(self, value: int) -> "RingElement":
        return RingElement(self, {(0,) * self.nvars: value})

    def one(self) -> "RingElement":
        return self.constant(1)

    def monomial(self, exponent: Exponent, coeff: int = 1) -> "RingElement":
        return RingElement(self, {tuple(exponent): coeff})

    def var(self, index_or_name: Union[int, str]) -> "RingElement":
        """Return a variable by position or by name."""
        if isinstance(index_or_name, str):
            if index_or_name not in self.variables:
                raise UsageError(f"Unknown variable {index_or_name!r}, ring has {self.variables}")
            index = self.variables.index(index_or_name)
        else:
            index = index_or_name
        exponent = tuple(int(i == index) for i in range(self.nvars))
        return self.monomial(exponent)

    def gens(self) -> list["RingElement"]:
        return [self.var(i) for i in range(self.nvars)]

    def with_trunc(self, trunc: int) -> "TruncatedLocalRing":
        return TruncatedLocalRing(self.field, self.variables, trunc)

    def parse(self, text: str) -> "RingElement":
        """
        Parse a polynomial such as ``"x + 3*x^2 - t*x"``.

        Rational coefficients are reduced modulo p.

        Raises:
            UsageError: If the text is not a polynomial in the ring variables
        """
        symbols = {name: sympy.Symbol(name) for name in self.variables}
        try:
            expr = sympy.sympify(text.replace("^", "**"), locals=symbols)
            if not expr.free_symbols <= set(symbols.values()):
                raise TypeError(f"unknown symbols {expr.free_symbols}")
            poly = sympy.Poly(expr, *symbols.values())
        except (sympy.SympifyError, PolynomialError, TypeError, SyntaxError) as e:
            logger.error(f"Could not parse {text!r} over {self}")
            raise UsageError(f"Not a polynomial in {', '.join(self.variables)}: {text!r}") from e

        terms: dict[Exponent, int] = {}
        for exponent, coeff in poly.terms():
            coeff = sympy.Rational(coeff)
            if coeff.q % self.p == 0:
                raise UsageError(f"Coefficient {coeff} is not defined modulo {self.p}")
            terms[tuple(int(e) for e in exponent)] = int(coeff.p) * self.field.inv(int(coeff.q))
        return RingElement(self, terms)

    def __str__(self) -> str:
        return f"{self.field}[{', '.join(self.variables)}]/(deg > {self.trunc})"


@dataclass(frozen=True, eq=False)
class RingElement:
    """Element of a truncated local ring."""

    ring: TruncatedLocalRing
    terms: dict[Exponent, int]

    def __post_init__(self) -> None:
        p = self.ring.p
        n = self.ring.trunc
        clean: dict[Exponent, int] = {}
        for exponent, coeff in self.terms.items():
            if len(exponent) != self.ring.nvars:
                raise DomainMismatch(
                    f"Exponent {exponent} has wrong length for {self.ring.nvars} variables"
                )
            c = coeff % p
            if c and sum(exponent) <= n:
                clean[tuple(exponent)] = c
        object.__setattr__(self, "terms", clean)

    # --- comparison ---

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            return self == self.ring.constant(other)
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.ring, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # --- arithmetic ---

    def _coerce(self, other: Union["RingElement", int]) -> "RingElement":
        if isinstance(other, int):
            return self.ring.constant(other)
        if not isinstance(other, RingElement):
            raise TypeError(f"Cannot combine ring element with {type(other).__name__}")
        if other.ring != self.ring:
            logger.error(f"Ring mismatch: {self.ring} vs {other.ring}")
            raise DomainMismatch(f"Elements belong to different rings: {self.ring} and {other.ring}")
        return other

    def __add__(self, other: Union["RingElement", int]) -> "RingElement":
        other = self._coerce(other)
        result = dict(self.terms)
        for exponent, coeff in other.terms.items():
            result[exponent] = result.get(exponent, 0) + coeff
        return RingElement(self.ring, result)

    __radd__ = __add__

    def __neg__(self) -> "RingElement":
        return RingElement(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: Union["RingElement", int]) -> "RingElement":
        return self + (-self._coerce(other))

    def __rsub__(self, other: int) -> "RingElement":
        return self._coerce(other) - self

    def scale(self, factor: int) -> "RingElement":
        return RingElement(self.ring, {e: c * factor for e, c in self.terms.items()})

    def __mul__(self, other: Union["RingElement", int]) -> "RingElement":
        if isinstance(other, int):
            return self.scale(other)
        other = self._coerce(other)
        n = self.ring.trunc
        p = self.ring.p
        result: dict[Exponent, int] = {}
        right = [(e, c, sum(e)) for e, c in other.terms.items()]
        for e1, c1 in self.terms.items():
            d1 = sum(e1)
            for e2, c2, d2 in right:
                if d1 + d2 > n:
                    continue
                exponent = tuple(a + b for a, b in zip(e1, e2))
                result[exponent] = (result.get(exponent, 0) + c1 * c2) % p
        return RingElement(self.ring, result)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "RingElement":
        if k < 0:
            raise ValueError("Negative powers are not supported")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # --- inspection ---

    def constant_term(self) -> int:
        return self.terms.get((0,) * self.ring.nvars, 0)

    def linear_part(self) -> list[int]:
        """Coefficients of the degree-one monomials, in variable order."""
        nvars = self.ring.nvars
        return [
            self.terms.get(tuple(int(i == j) for i in range(nvars)), 0) for j in range(nvars)
        ]

    def min_degree(self) -> int:
        """Order of vanishing; the truncation degree plus one for zero."""
        if not self.terms:
            return self.ring.trunc + 1
        return min(sum(e) for e in self.terms)

    def homogeneous_part(self, degree: int) -> "RingElement":
        return RingElement(self.ring, {e: c for e, c in self.terms.items() if sum(e) == degree})

    def truncate(self, trunc: int) -> "RingElement":
        """Image in the ring truncated at a lower degree."""
        return RingElement(self.ring.with_trunc(trunc), dict(self.terms))

    def sorted_terms(self) -> list[tuple[Exponent, int]]:
        return sorted(self.terms.items(), key=lambda item: grlex_key(item[0]))

    def to_json(self) -> list:
        """Graded-lex sorted list of ``[exponents, coefficient]`` pairs."""
        return [[list(e), c] for e, c in self.sorted_terms()]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exponent, coeff in self.sorted_terms():
            factors = []
            for name, e in zip(self.ring.variables, exponent):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            if not factors:
                parts.append(str(coeff))
            elif coeff == 1:
                parts.append("*".join(factors))
            else:
                parts.append(f"{coeff}*" + "*".join(factors))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"RingElement({self})"


@dataclass(frozen=True)
class RingEndomorphism:
    """
    Local endomorphism of a truncated ring, given by the images of the variables.

    Applying it substitutes every variable simultaneously and truncates.

    Raises:
        InvalidEndomorphism: If an image has a nonzero constant term or the
            number of images does not match the number of variables
        DomainMismatch: If an image lives in another ring
    """

    domain: TruncatedLocalRing
    images: tuple[RingElement, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "images", tuple(self.images))
        if len(self.images) != self.domain.nvars:
            raise InvalidEndomorphism(
                f"Expected {self.domain.nvars} images, got {len(self.images)}"
            )
        for name, image in zip(self.domain.variables, self.images):
            if image.ring != self.domain:
                raise DomainMismatch(f"Image of {name} lives in {image.ring}, not {self.domain}")
            if image.constant_term():
                logger.error(f"Image of {name} has constant term {image.constant_term()}")
                raise InvalidEndomorphism(
                    f"Image of {name} must lie in the maximal ideal, got {image}"
                )

    @classmethod
    def identity(cls, ring: TruncatedLocalRing) -> "RingEndomorphism":
        return cls(ring, tuple(ring.gens()))

    @cached_property
    def _monomial_image(self) -> Callable[[Exponent], RingElement]:
        """Memoized image of a single monomial, built one variable at a time."""

        @lru_cache(maxsize=None)
        def image(exponent: Exponent) -> RingElement:
            if not any(exponent):
                return self.domain.one()
            i = next(idx for idx, e in enumerate(exponent) if e)
            lower = exponent[:i] + (exponent[i] - 1,) + exponent[i + 1 :]
            return image(lower) * self.images[i]

        return image

    def apply(self, a: RingElement) -> RingElement:
        """Substitute the variable images into ``a``."""
        if a.ring != self.domain:
            logger.error(f"Cannot apply endomorphism of {self.domain} to element of {a.ring}")
            raise DomainMismatch(f"Element belongs to {a.ring}, endomorphism to {self.domain}")
        result: dict[Exponent, int] = {}
        p = self.domain.p
        for exponent, coeff in a.terms.items():
            for e, c in self._monomial_image(exponent).terms.items():
                result[e] = (result.get(e, 0) + coeff * c) % p
        return RingElement(self.domain, result)

    __call__ = apply

    def compose(self, other: "RingEndomorphism") -> "RingEndomorphism":
        """Return ``self o other``: the variable x_i goes to ``self(other(x_i))``."""
        if other.domain != self.domain:
            raise DomainMismatch(f"Cannot compose maps of {self.domain} and {other.domain}")
        return RingEndomorphism(self.domain, tuple(self.apply(img) for img in other.images))

    def power(self, k: int) -> "RingEndomorphism":
        result = RingEndomorphism.identity(self.domain)
        for _ in range(k):
            result = self.compose(result)
        return result

    def is_identity(self) -> bool:
        return all(img == x for img, x in zip(self.images, self.domain.gens()))

    def linear_matrix(self) -> linalg.Matrix:
        """Row i holds the degree-one coefficients of the image of x_i."""
        return [img.linear_part() for img in self.images]

    def truncate(self, trunc: int) -> "RingEndomorphism":
        ring = self.domain.with_trunc(trunc)
        return RingEndomorphism(ring, tuple(RingElement(ring, dict(img.terms)) for img in self.images))

    def inverse(self) -> "RingEndomorphism":
        """
        Inverse automorphism in the truncated ring.

        Solves ``G = M^-1 (x - H(G))`` degree by degree, where M is the linear
        part and H the higher-order part of the images.

        Raises:
            InvalidEndomorphism: If the linear part is singular
        """
        try:
            m_inv = linalg.inverse(self.linear_matrix(), self.domain.p)
        except linalg.SingularMatrix as e:
            raise InvalidEndomorphism("Endomorphism with singular linear part is not invertible") from e

        gens = self.domain.gens()
        higher = [img - img.homogeneous_part(1) for img in self.images]

        def solve(rhs: list[RingElement]) -> tuple[RingElement, ...]:
            return tuple(
                sum((rhs[j] * m_inv[i][j] for j in range(len(rhs))), self.domain.zero())
                for i in range(len(rhs))
            )

        guess = RingEndomorphism(self.domain, solve(gens))
        for _ in range(self.domain.trunc):
            corrected = [x - guess.apply(h) for x, h in zip(gens, higher)]
            guess = RingEndomorphism(self.domain, solve(corrected))
        return guess

    def to_json(self) -> dict:
        return {name: img.to_json() for name, img in zip(self.domain.variables, self.images)}

    def describe(self) -> dict[str, str]:
        return {name: str(img) for name, img in zip(self.domain.variables, self.images)}


def apply_endomorphism(f: RingEndomorphism, a: RingElement) -> RingElement:
    """
    Simultaneous substitution of the variable images of ``f`` into ``a``.

    Raises:
        DomainMismatch: If ``a`` does not belong to the domain of ``f``
    """
    return f.apply(a)


def compose_endomorphisms(f: RingEndomorphism, g: RingEndomorphism) -> RingEndomorphism:
    """
    Composition ``f o g``.

    Raises:
        DomainMismatch: If the maps live on different rings
    """
    return f.compose(g)
