"""Request and response models for the service layer.

These mirror the canonical JSON formats: requests embed the same system
mapping the CLI reads from --input files, responses carry exactly the
fields the CLI renders.
"""

from __future__ import annotations

from pydantic import BaseModel, Field, field_validator

from .model import OscillatorSystem

__all__ = [
    "CouplingsIn",
    "SystemIn",
    "ExpectedValues",
    "DecoupleRequest",
    "SpectrumRequest",
    "WavefunctionRequest",
    "PurityRequest",
    "SweepRequest",
    "VerifyRequest",
    "AnglesOut",
    "DecoupleResponse",
    "SpectrumLevel",
    "SpectrumResponse",
    "WavefunctionResponse",
    "PurityResponse",
    "SweepResponse",
    "VerifyCheck",
    "VerifyResponse",
]


class CouplingsIn(BaseModel):
    d12: float = 0.0
    d13: float = 0.0
    d23: float = 0.0


class SystemIn(BaseModel):
    masses: list[float]
    frequencies: list[float]
    couplings: CouplingsIn = Field(default_factory=CouplingsIn)
    hbar: float = 1.0

    @field_validator("masses", "frequencies")
    @classmethod
    def _three(cls, v: list[float], info) -> list[float]:
        if len(v) != 3:
            raise ValueError(f"{info.field_name} must have exactly three entries")
        return v

    def to_system(self) -> OscillatorSystem:
        return OscillatorSystem(
            m1=self.masses[0],
            m2=self.masses[1],
            m3=self.masses[2],
            w1=self.frequencies[0],
            w2=self.frequencies[1],
            w3=self.frequencies[2],
            d12=self.couplings.d12,
            d13=self.couplings.d13,
            d23=self.couplings.d23,
            hbar=self.hbar,
        )

    @classmethod
    def from_system(cls, sys: OscillatorSystem) -> "SystemIn":
        return cls(
            masses=[sys.m1, sys.m2, sys.m3],
            frequencies=[sys.w1, sys.w2, sys.w3],
            couplings=CouplingsIn(d12=sys.d12, d13=sys.d13, d23=sys.d23),
            hbar=sys.hbar,
        )


class ExpectedValues(BaseModel):
    """Reference values a verify run must reproduce, all optional."""

    L: float | None = None
    w: float | None = None
    purity: float | None = None


class DecoupleRequest(BaseModel):
    system: SystemIn


class SpectrumRequest(BaseModel):
    system: SystemIn
    n_max: int = 1


class WavefunctionRequest(BaseModel):
    system: SystemIn
    n: list[int]
    points: int = 9
    extent: float = 3.0

    @field_validator("n")
    @classmethod
    def _three(cls, v: list[int]) -> list[int]:
        if len(v) != 3:
            raise ValueError("n must have exactly three entries")
        return v


class PurityRequest(BaseModel):
    system: SystemIn
    kept: int = 1
    oracle: bool = False


class SweepRequest(BaseModel):
    system: SystemIn
    parameter: str
    start: float
    stop: float
    steps: int
    parameter2: str | None = None
    start2: float | None = None
    stop2: float | None = None
    steps2: int | None = None
    kept: int = 1
    threads: int = 1


class VerifyRequest(BaseModel):
    system: SystemIn | None = None
    expected: ExpectedValues | None = None


class AnglesOut(BaseModel):
    theta: float
    phi: float
    varphi: float


class DecoupleResponse(BaseModel):
    sigma: list[float]
    angles: AnglesOut
    varpi: float
    log_diffs: list[float]
    residual: float
    degenerate: bool


class SpectrumLevel(BaseModel):
    n1: int
    n2: int
    n3: int
    energy: float


class SpectrumResponse(BaseModel):
    levels: list[SpectrumLevel]


class WavefunctionResponse(BaseModel):
    columns: list[str]
    rows: list[list[float]]


class PurityResponse(BaseModel):
    kept: int
    L: float
    w: float
    purity: float
    entropy: float
    oracle_purity: float | None = None
    discrepancy: float | None = None


class SweepResponse(BaseModel):
    columns: list[str]
    rows: list[list[float | str]]


class VerifyCheck(BaseModel):
    name: str
    threshold: float
    observed: float
    passed: bool


class VerifyResponse(BaseModel):
    passed: bool
    checks: list[VerifyCheck]
