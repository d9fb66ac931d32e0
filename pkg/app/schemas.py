from enum import Enum
from pathlib import Path
from typing import Any, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.services.classify import IsometryClass
from app.services.triangle import TriangleParams


# Shared value schemas
class ComplexValue(BaseModel):
    re: float
    im: float


class CandidateModel(BaseModel):
    n: int
    k1: int
    k2: int
    k3: int


# Check schemas
class CheckOutcome(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"
    OFF_CIRCLE = "off_circle"  # the candidate does not satisfy the circle equation


class CheckRecord(BaseModel):
    name: str
    inputs: dict[str, Any]
    outcome: CheckOutcome
    precision_bits: Optional[int] = None
    details: dict[str, Any] = {}


# Search schemas
class SearchSummary(BaseModel):
    m: int
    n_max: int
    symmetry_reduced: bool
    candidates_examined: int
    rejections: dict[str, int]
    case_families: dict[str, int]
    inconclusive: int
    survivor_count: int
    survivors: List[CandidateModel] = []
    max_precision_bits: Optional[int] = None


class SearchBounds(BaseModel):
    n_max: int
    m: int


# Certificate schemas
class Verdict(str, Enum):
    NON_DISCRETE_OR_NON_FAITHFUL = "NonDiscreteOrNonFaithful"
    NOT_APPLICABLE = "NotApplicable"
    INCONCLUSIVE = "Inconclusive"


class Certificate(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    params: TriangleParams
    tau: ComplexValue
    isometry_class: IsometryClass = Field(alias="class")
    verdict: Verdict
    n_max: Optional[int] = None
    lift_factor: int = 0
    checks: List[CheckRecord] = []
    search: Optional[SearchSummary] = None
    search_bounds: Optional[SearchBounds] = None
    basis: str = ""


# Report schemas
class ScanRow(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    alpha: float
    tau_re: float
    tau_im: float
    f: float
    isometry_class: IsometryClass = Field(alias="class")


class WindowModel(BaseModel):
    lo: float
    hi: float


class NtFunction(str, Enum):
    PHI = "phi"
    MOEBIUS = "moebius"
    CYCLOPOLY = "cyclopoly"


class NtResult(BaseModel):
    function: NtFunction
    argument: int
    value: Union[int, str]


# Run configuration
class Command(str, Enum):
    SCAN = "scan"
    CERTIFY = "certify"
    SEARCH = "search"
    WINDOWS = "windows"
    NT = "nt"


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"
    TEXT = "text"


class RunConfig(BaseModel):
    command: Command
    m: Optional[int] = Field(default=None, ge=2)
    alpha: Optional[float] = None
    alpha_turns: Optional[str] = None
    alpha_steps: int = Field(default=1024, ge=1)
    n_max: int = Field(default=24, ge=1)
    precision_bits: int = Field(default=128, ge=53, le=4096)
    precision_cap_bits: int = Field(default=512, ge=53, le=4096)
    output_format: OutputFormat = OutputFormat.JSON
    output_path: Optional[Path] = None

    @model_validator(mode="after")
    def _check_command_inputs(self) -> "RunConfig":
        if self.command != Command.NT and self.m is None:
            raise ValueError(f"--m is required for {self.command.value}")
        if self.command == Command.CERTIFY and self.alpha is None and self.alpha_turns is None:
            raise ValueError("certify needs --alpha or --alpha-turns")
        return self


# API request schemas
API_N_MAX = 48
API_PRECISION_MAX = 4096


class CertifyRequest(BaseModel):
    m: int = Field(ge=2)
    alpha: Optional[float] = None
    alpha_turns: Optional[str] = None
    n_max: int = Field(default=24, ge=1, le=API_N_MAX)
    precision_bits: Optional[int] = Field(default=None, ge=53, le=API_PRECISION_MAX)


class SearchRequest(BaseModel):
    m: int = Field(ge=2)
    n_max: int = Field(default=24, ge=1, le=API_N_MAX)
    symmetry_reduced: bool = True
