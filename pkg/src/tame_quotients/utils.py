"""
Utility functions for the tame quotient calculator.

This module contains the shared exception base class, exponent-vector
helpers (graded-lex ordering, bounded enumeration, divisibility) and
the parsing and JSON helpers used by the command line front end.
"""

import json
import logging
from collections.abc import Iterator, Sequence
from typing import Any

from .config import config

logger = logging.getLogger(__name__)

Exponent = tuple[int, ...]


class TameQuotientError(Exception):
    """
    Base class for every named library error.

    Subclasses are reported by the CLI under their class name. ``exit_code``
    is 2 for validation failures and 1 for internal failures.
    """

    exit_code: int = 2

    @property
    def name(self) -> str:
        return type(self).__name__


class UsageError(TameQuotientError):
    """Raised when command line arguments or a job document are malformed."""

    pass


def grlex_key(exponent: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """
    Sort key for the graded lexicographic order.

    Total degree first; within a degree, a larger exponent on an earlier
    variable sorts first, so ``t^2 < t*x < x^2``.

    Example:
        >>> sorted([(0, 2), (1, 1), (2, 0)], key=grlex_key)
        [(2, 0), (1, 1), (0, 2)]
    """
    return sum(exponent), tuple(-e for e in exponent)


def exponents_of_degree(nvars: int, degree: int) -> Iterator[Exponent]:
    """
    Yield every exponent vector in ``nvars`` variables of the given total degree.

    Vectors come out in graded-lex order.
    """
    if nvars == 0:
        if degree == 0:
            yield ()
        return
    if nvars == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in exponents_of_degree(nvars - 1, degree - first):
            yield (first, *rest)


def exponents_up_to_degree(nvars: int, max_degree: int) -> Iterator[Exponent]:
    """Yield exponent vectors of total degree ``0..max_degree`` in graded-lex order."""
    for degree in range(max_degree + 1):
        yield from exponents_of_degree(nvars, degree)


def divides(small: Sequence[int], big: Sequence[int]) -> bool:
    """Return True when the monomial ``small`` divides ``big`` (componentwise <=)."""
    return all(a <= b for a, b in zip(small, big))


def add_exponents(a: Sequence[int], b: Sequence[int]) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


def weighted_residue(weights: Sequence[int], exponent: Sequence[int], modulus: int) -> int:
    """Return ``sum(w_i * e_i) mod modulus``."""
    return sum(w * e for w, e in zip(weights, exponent)) % modulus


def parse_int_list(text: str, field_name: str) -> list[int]:
    """
    Parse a comma-separated list of integers.

    Args:
        text: Raw text such as ``"1,1"``
        field_name: Name of the option for error messages

    Returns:
        list[int]: Parsed integers

    Raises:
        UsageError: If any entry is not an integer

    Example:
        >>> parse_int_list("1, 0,2", "--weights")
        [1, 0, 2]
    """
    if text is None or not text.strip():
        return []
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        logger.error(f"Could not parse {field_name}: {text!r}")
        raise UsageError(f"{field_name} must be comma-separated integers, got {text!r}") from e


def to_json_text(payload: Any) -> str:
    """
    Serialize a CLI payload deterministically.

    Key order is the insertion order of the payload; no timestamps or
    floats are ever added, so identical inputs give identical bytes.
    """
    return json.dumps(payload, indent=config.JSON_INDENT, ensure_ascii=False)


def configure_logging(verbose: bool = False) -> None:
    """Configure root logging to standard error."""
    level = logging.DEBUG if verbose else getattr(logging, config.LOG_LEVEL, logging.INFO)
    logging.basicConfig(
        level=level,
        format=config.LOG_FORMAT,
        handlers=[logging.StreamHandler()],
        force=True,
    )
