"""Pydantic request/response models of the contextuality service."""

from __future__ import annotations

from pydantic import BaseModel, Field

from ..experiment import DEFAULT_SHOTS


class EntanglementInfo(BaseModel):
    chsh_max: float
    ppt_min_eig: float
    violates_chsh: bool
    is_ppt_separable: bool


class CatalogEntry(BaseModel):
    id: str
    kind: str
    definition: str
    entanglement: EntanglementInfo


class RunRequest(BaseModel):
    """Parameters of a counting run; fully determines the report."""

    states: list[str] | None = Field(default=None, description="Catalog ids; all when omitted")
    shots: int = Field(default=DEFAULT_SHOTS, ge=1, description="Prepared photons per context")
    seed: int = Field(default=0, ge=0)
    vis_ps: float = Field(default=0.92, ge=0.0, le=1.0, description="Phase-sensitive visibility")
    vis_pi: float = Field(default=0.995, ge=0.0, le=1.0, description="Phase-insensitive visibility")
    efficiency: float = Field(default=0.50, gt=0.0, le=1.0, description="Detection efficiency")
    ideal: bool = Field(default=False, description="Exact noiseless mode, bypasses sampling")
    direct: bool = Field(default=False,
                         description="Simulate mixed states directly instead of combining pure-state counts")


class RunConfigEcho(BaseModel):
    shots: int
    seed: int
    vis_ps: float
    vis_pi: float
    efficiency: float
    ideal: bool
    direct: bool


class ContextResult(BaseModel):
    labels: list[str]
    display: str
    sign: int
    expectation: float
    sd: float
    outcomes: list[str]
    counts: list[int]
    probabilities: list[float]


class StateResult(BaseModel):
    state: str
    kind: str
    chi: float
    chi_sd: float
    sds_of_violation: float | None
    violates_bound: bool
    contexts: list[ContextResult]


class RunReport(BaseModel):
    config: RunConfigEcho
    classical_bound: int = 4
    results: list[StateResult]
    all_violating: bool


class SweepRequest(BaseModel):
    vis_ps: list[float] = Field(min_length=1)
    vis_pi: list[float] = Field(default=[0.995], min_length=1)
    states: list[str] | None = None
    shots: int = Field(default=DEFAULT_SHOTS, ge=1)
    seed: int = Field(default=0, ge=0)
    efficiency: float = Field(default=0.50, gt=0.0, le=1.0)


class SweepRow(BaseModel):
    vis_ps: float
    vis_pi: float
    state: str
    chi: float
    chi_sd: float


class SweepReport(BaseModel):
    rows: list[SweepRow]


class ElementInfo(BaseModel):
    kind: str
    location: str
    parameter: float


class NetlistInfo(BaseModel):
    observable: str
    phase_sensitive: bool
    elements: list[ElementInfo]
    outcome_map: dict[str, list[str]]


class DeviceCheck(BaseModel):
    observable: str
    phase_sensitive: bool
    unitarity_error: float
    instrument_error_plus: float
    instrument_error_minus: float


class OpticsCheck(BaseModel):
    state: str
    context: str
    total_variation: float


class OpticsReport(BaseModel):
    passed: bool
    checks: int
    max_total_variation: float
    tolerance: float
    device_checks: list[DeviceCheck]
    equivalence_checks: list[OpticsCheck]
    netlists: list[NetlistInfo]


class AssignmentRow(BaseModel):
    values: dict[str, int]
    chi: int


class CertifyReport(BaseModel):
    max_chi: int
    min_chi: int
    argmax_count: int
    num_assignments: int
    quantum_value: float
    gap: float
    passed: bool
    table: list[AssignmentRow] | None = None
