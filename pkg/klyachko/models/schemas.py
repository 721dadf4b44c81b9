# klyachko/models/schemas.py
"""
Wire models: the JSON model file a user writes, the command parameters,
and the report every command emits.
"""
import re
from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, StrictInt
from typing_extensions import Annotated

from ..config import settings

_RATIONAL = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")


def parse_rational(value: Any) -> Fraction:
    """Accept a JSON integer or an "a/b" string"""
    if isinstance(value, bool):
        raise ValueError("expected a rational number, got a boolean")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str) and _RATIONAL.match(value):
        try:
            return Fraction(value.replace(" ", ""))
        except ZeroDivisionError:
            raise ValueError(f"zero denominator in {value!r}")
    raise ValueError(f"expected an integer or an 'a/b' string, got {value!r}")


Rational = Annotated[Fraction, BeforeValidator(parse_rational)]


# Input models (what users put in a model file)
class FiltrationStepSpec(BaseModel):
    """One step (j, E(j)) of a ray filtration"""
    model_config = ConfigDict(extra="forbid")

    jump: StrictInt = Field(
        ...,
        examples=[0],
        description="Integer level j; the step is E(j') for every j' <= j down to the previous jump",
    )
    basis: List[List[Rational]] = Field(
        ...,
        examples=[[[1, 0], ["1/2", 1]]],
        description="Rows spanning the step subspace; entries are integers or 'a/b' strings",
    )


class SplitBundleSpec(BaseModel):
    """⊕_i O(Σ_ρ a_ρ^(i) D_ρ)"""
    model_config = ConfigDict(extra="forbid")

    type: Literal["split"]
    coefficients: List[List[StrictInt]] = Field(
        ...,
        examples=[[[-1, 0], [2, 0]]],
        description="One row per line-bundle summand, one column per ray",
    )


class KlyachkoBundleSpec(BaseModel):
    """Explicit filtration data, one filtration per ray"""
    model_config = ConfigDict(extra="forbid")

    type: Literal["klyachko"]
    rank: int = Field(..., ge=0, examples=[2], description="Rank of the bundle (dimension of the fiber E)")
    filtrations: List[List[FiltrationStepSpec]] = Field(
        ...,
        description="Per ray, the steps in increasing jump order; the first step must be all of E",
    )


BundleSpec = Annotated[Union[SplitBundleSpec, KlyachkoBundleSpec], Field(discriminator="type")]


class AssertionsSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    projective: Optional[bool] = Field(
        None,
        examples=[True],
        description="User assertion that X is projective; recorded, not checked",
    )


class ModelFile(BaseModel):
    """A fan together with a toric vector bundle on it"""
    model_config = ConfigDict(extra="forbid")

    lattice_rank: int = Field(..., ge=1, examples=[2], description="Rank of N (and M)")
    rays: List[List[int]] = Field(
        ...,
        examples=[[[-1, -1], [1, 0], [0, 1]]],
        description="Primitive ray generators v_ρ",
    )
    max_cones: List[List[int]] = Field(
        ...,
        examples=[[[1, 2], [0, 2], [0, 1]]],
        description="Maximal cones as lists of ray indices",
    )
    bundle: BundleSpec
    assertions: AssertionsSpec = Field(default_factory=AssertionsSpec)


# Parameter models (what users pass on the command line)
class BignessParams(BaseModel):
    """Knobs of the bigness analysis"""
    p: int = Field(settings.default_p, ge=1, description="Symmetric power whose sections generate")
    l_max: int = Field(settings.default_l_max, ge=1, description="Largest l in the image and α tables")
    p_max: int = Field(settings.default_p_max, ge=1, description="Largest power scanned for L(X,E)")
    degree_bound: int = Field(
        settings.default_degree_bound, ge=1,
        description="Largest degree a searched for a full-dimensional Δ_f",
    )
    budget: int = Field(
        default_factory=lambda: settings.sym_budget, ge=1,
        description="Cap on dim Sym^(pl) E",
    )


# Response models (what every command emits)
class Report(BaseModel):
    """Result of one command; every leaf is JSON-native and exact"""
    command: str = Field(..., examples=["h0"])
    params: Dict[str, Any] = Field(default_factory=dict)
    input_digest: str = Field(..., description="sha256 of the model file bytes")
    results: Dict[str, Any] = Field(default_factory=dict)
    verdicts: List[Dict[str, Any]] = Field(default_factory=list)
    warnings: List[str] = Field(default_factory=list)
    error: Optional[Dict[str, Any]] = None
