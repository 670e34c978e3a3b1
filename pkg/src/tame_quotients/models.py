"""
Pydantic models for data validation and type safety.

This module defines the serializable records of the tame quotient
calculator: weight systems, stratified models, toric and monomial
presentations, fixed loci, sections, motivic reports and CLI jobs.
"""

from math import gcd
from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .config import config
from .utils import UsageError

FactorKind = Literal["affine", "torus", "projective"]

COMMANDS = (
    "quotient",
    "fixed-locus",
    "special-fiber",
    "serre",
    "volume",
    "diagonalize",
    "section",
    "count",
    "sweep",
)


class WeightSystem(BaseModel):
    """
    Action data (r; l_0, ..., l_n) of a diagonal mu_r action.

    ``l_0`` is the weight on the uniformizer t, the remaining entries are
    coordinate weights. Inputs are reduced modulo r.
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    r: int = Field(ge=1, description="Group order")
    ell: tuple[int, ...] = Field(
        alias="weights",
        min_length=1,
        description="Residue weights, l_0 first",
    )
    galois_flag: bool = Field(
        default=False,
        description="Whether the action on t generates the Galois group",
    )

    @model_validator(mode="before")
    @classmethod
    def reduce_weights(cls, data: Any) -> Any:
        """Reduce weights modulo r before validation."""
        if not isinstance(data, dict):
            return data
        r = data.get("r")
        key = "weights" if "weights" in data else "ell"
        weights = data.get(key)
        if isinstance(r, int) and r >= 1 and isinstance(weights, (list, tuple)):
            if all(isinstance(w, int) for w in weights):
                data = {**data, key: tuple(w % r for w in weights)}
        return data

    @model_validator(mode="after")
    def validate_galois(self) -> "WeightSystem":
        """Ensure the t-weight is a unit modulo r when galois_flag is set."""
        if self.galois_flag and gcd(self.ell[0], self.r) != 1:
            raise ValueError(
                f"Galois weight systems need gcd(l_0, r) = 1, got l_0={self.ell[0]}, r={self.r}"
            )
        return self

    @property
    def n(self) -> int:
        """Number of coordinates besides t."""
        return len(self.ell) - 1

    @property
    def ell0(self) -> int:
        return self.ell[0]

    @property
    def coordinate_weights(self) -> tuple[int, ...]:
        return self.ell[1:]

    @property
    def is_galois(self) -> bool:
        return gcd(self.ell[0], self.r) == 1

    def to_json(self) -> dict:
        return {"r": self.r, "weights": list(self.ell)}


class Factor(BaseModel):
    """One factor of a stratified model: affine space, torus or projective space."""

    model_config = ConfigDict(frozen=True)

    kind: FactorKind = Field(description="Factor type")
    dim: int = Field(ge=0, le=config.MAX_COORDINATES, description="Dimension")

    @property
    def coordinate_count(self) -> int:
        """Number of weights the factor consumes (homogeneous for projective)."""
        return self.dim + 1 if self.kind == "projective" else self.dim

    @property
    def label(self) -> str:
        return f"{self.kind}:{self.dim}"

    @classmethod
    def parse(cls, text: str) -> "Factor":
        """
        Parse a factor written as ``kind:dim``.

        Example:
            >>> Factor.parse("projective:1").coordinate_count
            2
        """
        kind, _, dim = text.strip().partition(":")
        try:
            size = int(dim) if dim.strip() else 1
        except ValueError as e:
            raise UsageError(f"Factor dimension must be an integer, got {text!r}") from e
        return cls(kind=kind.strip().lower(), dim=size)


class StratifiedModel(BaseModel):
    """
    Product of affine spaces, tori and projective spaces over k[[t]].

    Weights list l_0 followed by one weight per affine or torus coordinate
    and per homogeneous coordinate of each projective factor, in factor order.
    """

    model_config = ConfigDict(frozen=True)

    factors: tuple[Factor, ...] = Field(min_length=1, description="Ordered factors")
    weights: WeightSystem = Field(description="Action weights, t first")

    @model_validator(mode="after")
    def validate_weight_count(self) -> "StratifiedModel":
        """Ensure weights cover every coordinate and the action is Galois."""
        expected = 1 + sum(f.coordinate_count for f in self.factors)
        if len(self.weights.ell) != expected:
            raise ValueError(
                f"Model {self.label} needs {expected} weights (t first), "
                f"got {len(self.weights.ell)}"
            )
        if not self.weights.is_galois:
            raise ValueError(
                f"Model weights need gcd(l_0, r) = 1, got l_0={self.weights.ell0}, "
                f"r={self.weights.r}"
            )
        return self

    @property
    def label(self) -> str:
        return ",".join(f.label for f in self.factors)

    @property
    def r(self) -> int:
        return self.weights.r

    def factor_weights(self) -> list[tuple[Factor, tuple[int, ...]]]:
        """Pair each factor with the slice of coordinate weights it owns."""
        result = []
        offset = 1
        for factor in self.factors:
            count = factor.coordinate_count
            result.append((factor, self.weights.ell[offset : offset + count]))
            offset += count
        return result

    def to_json(self) -> dict:
        return {"factors": [f.label for f in self.factors], **self.weights.to_json()}

    @classmethod
    def parse(cls, text: str, r: int, weights: list[int]) -> "StratifiedModel":
        """Build a model from ``"affine:1,torus:2"`` plus weights."""
        factors = tuple(Factor.parse(part) for part in text.split(",") if part.strip())
        return cls(factors=factors, weights=WeightSystem(r=r, weights=weights))


# --- Invariant ring records ---


class HilbertBasis(BaseModel):
    """Minimal generators of the invariant exponent monoid, graded-lex sorted."""

    model_config = ConfigDict(frozen=True)

    weight_system: WeightSystem
    generators: tuple[tuple[int, ...], ...] = Field(description="Exponent vectors, t first")

    def matrix(self) -> list[list[int]]:
        """Exponent matrix with one column per generator."""
        rows = len(self.weight_system.ell)
        return [[g[i] for g in self.generators] for i in range(rows)]


class Generator(BaseModel):
    """Named quotient generator."""

    model_config = ConfigDict(frozen=True)

    name: str
    exponents: tuple[int, ...]


class Relation(BaseModel):
    """Binomial relation between generator products, exponents in generator space."""

    model_config = ConfigDict(frozen=True)

    lhs: tuple[int, ...]
    rhs: tuple[int, ...]

    def equation(self, names: list[str]) -> str:
        """
        Render the relation as ``lhs = rhs`` in generator names.

        Example:
            >>> Relation(lhs=(1, 0, 1), rhs=(0, 2, 0)).equation(["s", "b", "c"])
            's*c = b^2'
        """
        return f"{_product(self.lhs, names)} = {_product(self.rhs, names)}"


def _product(exponents: tuple[int, ...], names: list[str]) -> str:
    parts = []
    for name, e in zip(names, exponents):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


class ToricPresentation(BaseModel):
    """Generators and binomial relations presenting an invariant ring."""

    model_config = ConfigDict(frozen=True)

    basis: HilbertBasis
    generators: tuple[Generator, ...]
    relations: tuple[Relation, ...]
    uniformizer_index: Optional[int] = Field(
        default=None, description="Index of the generator t^r, when present"
    )

    @property
    def names(self) -> list[str]:
        return [g.name for g in self.generators]

    @property
    def uniformizer(self) -> Optional[str]:
        if self.uniformizer_index is None:
            return None
        return self.generators[self.uniformizer_index].name

    def to_json(self) -> dict:
        names = self.names
        return {
            **self.basis.weight_system.to_json(),
            "generators": [
                {"name": g.name, "exponents": list(g.exponents)} for g in self.generators
            ],
            "relations": [
                {"lhs": list(rel.lhs), "rhs": list(rel.rhs), "equation": rel.equation(names)}
                for rel in self.relations
            ],
            "uniformizer": self.uniformizer,
        }


# --- Fiber geometry records ---


class ComponentPart(BaseModel):
    """Fixed locus of a single factor: a point, affine space, torus or projective space."""

    model_config = ConfigDict(frozen=True)

    factor_index: int = Field(ge=0)
    factor: Factor
    kind: FactorKind = Field(description="Type of the fixed piece")
    dimension: int = Field(ge=0)
    weight_value: Optional[int] = Field(
        default=None, description="Shared homogeneous weight (projective only)"
    )
    multiplicity: Optional[int] = Field(
        default=None, description="Number of homogeneous coordinates of that weight"
    )

    def to_json(self) -> dict:
        return {
            "factor": self.factor.label,
            "dimension": self.dimension,
            "weight_value": self.weight_value,
        }


class FixedComponent(BaseModel):
    """Connected component of the fixed locus, one part per factor."""

    model_config = ConfigDict(frozen=True)

    parts: tuple[ComponentPart, ...]

    @property
    def dimension(self) -> int:
        return sum(part.dimension for part in self.parts)

    def to_json(self) -> dict:
        return {"dimension": self.dimension, "parts": [part.to_json() for part in self.parts]}


class FixedLocusDescription(BaseModel):
    """All fixed components of a stratified model."""

    model_config = ConfigDict(frozen=True)

    model: StratifiedModel
    components: tuple[FixedComponent, ...]
    empty: bool

    def to_json(self) -> dict:
        return {
            **self.model.to_json(),
            "empty": self.empty,
            "components": [c.to_json() for c in self.components],
        }


class MonomialIdealPresentation(BaseModel):
    """
    Monomial ideal in the nonzero-weight coordinates of a weight system.

    The special fiber of the weak Neron model over a fixed point is the
    spectrum of the polynomial ring in ``variables`` modulo this ideal.
    """

    model_config = ConfigDict(frozen=True)

    weight_system: WeightSystem
    variables: tuple[str, ...] = Field(description="Names x<i> of nonzero-weight coordinates")
    variable_indices: tuple[int, ...] = Field(description="Coordinate index of each variable")
    variable_weights: tuple[int, ...]
    min_generators: tuple[tuple[int, ...], ...] = Field(description="Graded-lex sorted")
    finite_dimension: Optional[int] = Field(
        default=None, description="Number of standard monomials when finite"
    )

    @property
    def r(self) -> int:
        return self.weight_system.r

    def to_json(self) -> dict:
        return {
            **self.weight_system.to_json(),
            "variables": list(self.variables),
            "variable_weights": list(self.variable_weights),
            "min_generators": [list(g) for g in self.min_generators],
            "finite_dimension": self.finite_dimension,
        }


class SectionMap(BaseModel):
    """Section of the quotient model through a fixed point, as a ring map to k[s]."""

    model_config = ConfigDict(frozen=True)

    assignment: dict[str, str] = Field(description="Generator name to polynomial in s")
    point: tuple[int, ...] = Field(description="Values of the zero-weight coordinates")
    equivariant_lift: dict[str, str] = Field(
        description="Upstairs section: variable name to polynomial in t"
    )
    verified: bool = Field(description="Every relation maps to zero")

    def to_json(self) -> dict:
        return {
            "assignment": dict(self.assignment),
            "point": list(self.point),
            "equivariant_lift": dict(self.equivariant_lift),
            "verified": self.verified,
        }


# --- Motivic records ---


class SerreInvariant(BaseModel):
    """Serre invariant, the image of a class in Z[L]/(L-1)."""

    model_config = ConfigDict(frozen=True)

    value: int


class SerreReport(BaseModel):
    """Comparison of the Serre invariants of the weak Neron fiber and the fixed locus."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    serre_lhs: int = Field(description="Serre invariant of the weak Neron special fiber")
    serre_rhs: int = Field(description="Serre invariant of the fixed locus")
    passed: bool = Field(alias="pass")

    def to_json(self) -> dict:
        return self.model_dump(by_alias=True)


class VolumeReport(BaseModel):
    """Rational volume congruence between a model and its quotient."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    q: int
    r: int
    volume_special_fiber: int = Field(description="s(X_L): volume of the model upstairs")
    volume_weak_neron: int = Field(description="s(X): volume of the quotient")
    difference_mod_q: int
    passed: bool = Field(alias="pass")
    rational_point_forced: bool = Field(
        description="s(X_L) is nonzero mod q, so X has a rational point"
    )
    integral_point: bool = Field(description="Fixed locus is nonempty")

    def to_json(self) -> dict:
        return self.model_dump(by_alias=True)


class EulerCongruenceReport(BaseModel):
    """Euler characteristic against rational volume for proper models."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    q: int
    euler_characteristic: int
    rational_volume: int
    difference_mod_q: int
    passed: bool = Field(alias="pass")

    def to_json(self) -> dict:
        return self.model_dump(by_alias=True)


class CountReport(BaseModel):
    """Brute-force point count against the predicted value."""

    model_config = ConfigDict(frozen=True)

    q: int = Field(ge=2)
    counted: int = Field(ge=0)
    predicted: Optional[int] = Field(default=None)

    @property
    def match(self) -> Optional[bool]:
        """None when there is no prediction to compare against."""
        if self.predicted is None:
            return None
        return self.counted == self.predicted

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "counted": self.counted,
            "predicted": self.predicted,
            "match": self.match,
        }


# --- Sweep records ---


class SuiteSummary(BaseModel):
    """Pass/fail tally of one randomized suite."""

    model_config = ConfigDict(frozen=True)

    name: str
    trials: int = Field(ge=0)
    passed: int = Field(ge=0)
    failures: tuple[str, ...] = Field(default=(), description="Descriptions of failed trials")

    @property
    def failed(self) -> int:
        return self.trials - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "trials": self.trials,
            "passed": self.passed,
            "failed": self.failed,
            "failures": list(self.failures),
        }


class SweepReport(BaseModel):
    """Results of every sweep suite for one seed."""

    model_config = ConfigDict(frozen=True)

    seed: int
    suites: tuple[SuiteSummary, ...]

    @property
    def all_passed(self) -> bool:
        return all(s.ok for s in self.suites)

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "pass": self.all_passed,
            "suites": [s.to_json() for s in self.suites],
        }


# --- CLI job document ---


class JobSpec(BaseModel):
    """
    Job document accepted by ``--json``.

    Field names follow the command line flags; unknown fields are rejected.
    """

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    command: str = Field(description="Subcommand name")
    r: Optional[int] = Field(default=None, ge=1)
    weights: Optional[list[int]] = None
    model: Optional[str] = Field(default=None, description='e.g. "affine:1,torus:1"')
    p: Optional[int] = None
    truncation: Optional[int] = Field(default=None, alias="N", ge=config.MIN_TRUNCATION)
    degree_bound: Optional[int] = Field(default=None, ge=0)
    q: Optional[int] = None
    seed: Optional[int] = None
    images: Optional[list[str]] = None
    pin: Optional[list[str]] = None
    point: Optional[list[int]] = None
    output: Optional[str] = None
    excel: Optional[str] = None

    @field_validator("command")
    @classmethod
    def validate_command(cls, v: str) -> str:
        """Ensure the command is a known subcommand."""
        if v not in COMMANDS:
            raise ValueError(f"Command must be one of {list(COMMANDS)}, got {v}")
        return v
