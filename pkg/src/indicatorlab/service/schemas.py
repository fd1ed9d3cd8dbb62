"""Pydantic request/response models for the compute service."""
from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field, model_validator

from ..fixtures import resolve_measure
from ..measures import AngularMeasure


class AtomModel(BaseModel):
    theta: float
    mass: float


class PieceModel(BaseModel):
    start: float
    end: float
    density: float


class MeasureIn(BaseModel):
    """Inline measure (atoms/pieces) or a fixture reference with parameters."""

    atoms: Optional[list[AtomModel]] = None
    pieces: Optional[list[PieceModel]] = None
    fixture: Optional[str] = None
    params: dict[str, float] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _one_source(self):
        inline = self.atoms is not None or self.pieces is not None
        if inline == (self.fixture is not None):
            raise ValueError("provide either atoms/pieces or a fixture name, not both")
        return self

    def resolve(self, rho: float) -> AngularMeasure:
        if self.fixture is not None:
            return resolve_measure(f"fixture:{self.fixture}", rho, self.params)
        return AngularMeasure(
            atoms=tuple((a.theta, a.mass) for a in self.atoms or ()),
            pieces=tuple((p.start, p.end, p.density) for p in self.pieces or ()),
        )

    @property
    def fixture_token(self) -> Optional[str]:
        return f"fixture:{self.fixture}" if self.fixture is not None else None


class MeasureOut(BaseModel):
    atoms: list[AtomModel]
    pieces: list[PieceModel]

    @classmethod
    def from_measure(cls, m: AngularMeasure) -> "MeasureOut":
        d = m.to_dict()
        return cls(atoms=d["atoms"], pieces=d["pieces"])


class MultiplierPieceModel(BaseModel):
    start: float
    end: float
    a: float = 0.0
    b: float = 0.0
    t0: float = 0.0


class MultiplierIn(BaseModel):
    pieces: list[MultiplierPieceModel]


class IndicatorRequest(BaseModel):
    measure: MeasureIn
    rho: float = Field(gt=0)
    grid: Optional[int] = None


class IndicatorResponse(BaseModel):
    rho: float
    total_mass: float
    moment: tuple[float, float]
    theta: list[float]
    h: list[float]


class BalanceRequest(BaseModel):
    measure: MeasureIn
    rho: float = Field(gt=0)
    grid: Optional[int] = None


class BalanceResponse(BaseModel):
    sigma_like_max: float
    circumcenter: tuple[float, float]
    circumradius: float
    balanced: bool
    locally_balanced: bool
    witness: Optional[tuple[float, float, float]]
    max_set: list[tuple[float, float]]


class SigmaRequest(BaseModel):
    measure: MeasureIn
    rho: float = Field(gt=0)
    grid: Optional[int] = None
    multiplier: Optional[MultiplierIn] = None


class SigmaResponse(BaseModel):
    sigma_z: float
    sigma_u: tuple[float, float]
    equality: bool
    method_notes: dict


class BoundsRequest(BaseModel):
    theorem: str = Field(pattern="^(7|als1)$")
    rho: float = Field(gt=0)


class BoundsResponse(BaseModel):
    lower: float
    upper: float
    lower_measure: MeasureOut
    upper_measure: MeasureOut
    nodes: Optional[list[float]] = None
    profile_theta: list[float]
    profile_h: list[float]


class RandomizeRequest(BaseModel):
    measure: MeasureIn
    rho: float = Field(gt=0)
    density: float = Field(gt=0)
    count: int = Field(gt=0, le=5_000_000)
    seed: int = 0


class RandomizeResponse(BaseModel):
    moduli: list[float]
    arguments: list[float]


class ClassifyRequest(BaseModel):
    measure: MeasureIn
    rho: float = Field(gt=0)
    density: float = Field(gt=0)
    normalize: bool = False
    grid: Optional[int] = None


class ClassifyResponse(BaseModel):
    density: float
    sigma_z: float
    sigma_u: tuple[float, float]
    zero_verdict: str
    uniqueness_verdict: str
    label: str
    notes: dict


class VerifyDensityRequest(BaseModel):
    points: list[tuple[float, float]]
    measure: MeasureIn
    rho: float = Field(gt=0)
    density: float = Field(gt=0)
    arcs: list[tuple[float, float]]
    checkpoints: list[float]


class DensityRow(BaseModel):
    R: float
    alpha: float
    beta: float
    ratio: float
    predicted: float
    deviation: float


class VerifyDensityResponse(BaseModel):
    rows: list[DensityRow]


class FixtureInfo(BaseModel):
    name: str
    params: dict[str, float]
    doc: str


class FixturesResponse(BaseModel):
    fixtures: list[FixtureInfo]
