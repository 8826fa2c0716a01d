"""Request/response models of the HTTP service; the CLI reuses them in-process."""
from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

Convention = Literal["similarity", "dissimilarity"]
ThresholdMode = Literal["above", "below"]


class NetworkPayload(BaseModel):
    weights: list[list[float]]
    convention: Convention = "similarity"


class DiagramPayload(BaseModel):
    dim: int = 0
    points: list[tuple[float, float]] = Field(default_factory=list)


class GridPayload(BaseModel):
    xmin: float
    xmax: float
    nx: int
    ymin: float
    ymax: float
    ny: int


class HealthResponse(BaseModel):
    status: str
    version: str


class CorrelationRequest(BaseModel):
    corr: list[list[float]]


class BettiRequest(BaseModel):
    network: NetworkPayload
    dim: Literal[0, 1] = 0
    convention: ThresholdMode = "above"


class BettiResponse(BaseModel):
    dim: int
    breakpoints: list[float]
    values: list[int]
    side: str


class PdRequest(BaseModel):
    network: NetworkPayload
    death_level: Optional[float] = None
    convention: ThresholdMode = "above"


class PdResponse(BaseModel):
    births0: list[float]
    deaths1: list[float]
    death_level: float
    p: int
    n_components: int
    diagrams: list[DiagramPayload]


class MorseRequest(BaseModel):
    samples: list[float]


class ValueResponse(BaseModel):
    value: float


class ApfRequest(BaseModel):
    barcode: DiagramPayload
    t: float


class EntropyRequest(BaseModel):
    barcode: DiagramPayload


class LandscapeRequest(BaseModel):
    barcode: DiagramPayload
    k: int = 1
    eps: Optional[float] = None
    grid: Optional[list[float]] = None


class LandscapeResponse(BaseModel):
    values: list[float]


class ImageRequest(BaseModel):
    diagram: DiagramPayload
    grid: GridPayload
    sigma: float
    weight: Literal["uniform", "linear", "exponential"] = "uniform"
    normalize: bool = False


class ImageResponse(BaseModel):
    grid: GridPayload
    sigma: float
    weight: str
    pixels: list[list[float]]


DistanceMethod = Literal["lp", "logeuclid", "gh", "bottleneck", "wasserstein", "ks"]


class DistanceRequest(BaseModel):
    method: DistanceMethod
    networks: Optional[list[NetworkPayload]] = None
    diagrams: Optional[list[DiagramPayload]] = None
    dim: Literal[0, 1] = 0
    order: float = 2.0
    q: float = 2.0
    alpha: Optional[float] = None
    convention: ThresholdMode = "above"


class PairwiseDistanceRequest(BaseModel):
    method: DistanceMethod
    networks: list[NetworkPayload]
    dim: Literal[0, 1] = 0
    order: float = 2.0
    q: float = 2.0
    convention: ThresholdMode = "above"


class PairwiseDistanceResponse(BaseModel):
    matrix: list[list[float]]


class KsInferRequest(BaseModel):
    dq: float
    q: int
    mode: Literal["continuous", "paper_integer"] = "continuous"


class PermutationRequest(BaseModel):
    group1: list[NetworkPayload]
    group2: list[NetworkPayload]
    method: DistanceMethod = "ks"
    dim: Literal[0, 1] = 0
    order: float = 2.0
    q: float = 2.0
    convention: ThresholdMode = "above"
    n_perm: int = 999
    seed: int = 0


class PermutationResponse(BaseModel):
    observed: float
    p: float
    n_perm: int
    seed: int
    null_quantiles: dict[str, float]


class TopLossRequest(BaseModel):
    network1: NetworkPayload
    network2: NetworkPayload


class PdRegRequest(BaseModel):
    diagram: DiagramPayload
    p: float
    q: float
    i0: int = 1


class RegressRequest(BaseModel):
    observations: list[NetworkPayload]
    prior: NetworkPayload
    lam: float = 0.0
    max_iter: int = 200
    step_size: Optional[float] = None


class RegressResponse(BaseModel):
    weights: list[list[float]]
    trace: list[float]
    converged: bool


class SimplexPayload(BaseModel):
    dim: int
    vertices: list[int]
    time: float = 0.0


class RipsRequest(BaseModel):
    points: Optional[list[list[float]]] = None
    network: Optional[NetworkPayload] = None
    eps: float
    max_dim: int = 2
    betti: bool = True


class WitnessRequest(BaseModel):
    points: list[list[float]]
    eps: float
    max_dim: int = 2
    landmark_count: Optional[int] = None
    landmarks: Optional[list[int]] = None
    seed: int = 0
    betti: bool = True


class ComplexResponse(BaseModel):
    simplices: list[SimplexPayload]
    betti: Optional[list[int]] = None
    landmarks: Optional[list[int]] = None
