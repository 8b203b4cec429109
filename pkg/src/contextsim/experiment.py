"""Sequential-measurement semantics, noise, photon counting and chi statistics.

``luders_distribution`` is the reference quantum prediction for a context;
``run_experiment`` reproduces a counting run: propagate the state through the
optical cascade with visibility confusion, thin by the detection efficiency,
draw Poissonian counts and propagate the standard deviations into chi.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import optics
from .outcomes import (
    OUTCOME_LABELS,
    OUTCOME_SIGNS,
    OUTCOME_TRIPLES,
    OutcomeDistribution,
    correlation,
    total_variation,
)
from .pm_square import Context, context_operators, contexts
from .qcore import check_density_matrix, dagger, pm_projectors
from .state_catalog import StateSpec, density, state_index

__all__ = [
    "NoiseModel", "IDEAL_NOISE", "DEFAULT_NOISE", "RunConfig",
    "OutcomeDistribution", "CorrelationResult", "ChiResult",
    "OUTCOME_TRIPLES", "OUTCOME_LABELS", "OUTCOME_SIGNS",
    "luders_distribution", "correlation", "total_variation", "chi_ideal",
    "apply_device_noise", "sample_counts", "estimate",
    "run_experiment", "exact_chi_result", "mix_results",
]

#: Photons prepared per context in the reference experiment.
DEFAULT_SHOTS = 17_000_000


@dataclass(frozen=True)
class NoiseModel:
    """Visibility of the two interferometer classes plus detection efficiency.

    Visibility V enters as a confusion of the recorded outcome bit with flip
    probability (1-V)/2, which reproduces fringes of visibility V in a
    two-arm interferometer; V=1 is exactly ideal.  The detection efficiency
    thins the recorded counts without biasing expectation values.
    """

    vis_phase_sensitive: float = 1.0
    vis_phase_insensitive: float = 1.0
    detection_efficiency: float = 1.0

    def __post_init__(self):
        for name in ("vis_phase_sensitive", "vis_phase_insensitive"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        if not 0.0 < self.detection_efficiency <= 1.0:
            raise ValueError("detection_efficiency must lie in (0, 1]")

    def flip_probability(self, phase_sensitive: bool) -> float:
        v = self.vis_phase_sensitive if phase_sensitive else self.vis_phase_insensitive
        return (1.0 - v) / 2.0


IDEAL_NOISE = NoiseModel()
#: Reference noise settings of the tabletop runs.
DEFAULT_NOISE = NoiseModel(vis_phase_sensitive=0.92, vis_phase_insensitive=0.995,
                           detection_efficiency=0.50)


@dataclass(frozen=True)
class RunConfig:
    shots: int = DEFAULT_SHOTS
    seed: int = 0
    noise: NoiseModel = IDEAL_NOISE

    def __post_init__(self):
        if self.shots < 1:
            raise ValueError("shots must be >= 1")


@dataclass(frozen=True)
class CorrelationResult:
    """One context's estimate: expectation, propagated SD and raw counts."""

    context: Context
    expectation: float
    sd: float
    counts: OutcomeDistribution


@dataclass(frozen=True)
class ChiResult:
    state_id: str
    per_context: tuple[CorrelationResult, ...]
    chi: float
    chi_sd: float
    sds_of_violation: float | None
    config: RunConfig


def luders_distribution(rho: np.ndarray, ctx: Context) -> OutcomeDistribution:
    """Joint outcome probabilities of the sequential Lueders measurement.

    p(o1,o2,o3) = Tr(P3 P2 P1 rho P1 P2 P3) with P_i the outcome projector of
    the i-th observable in measured order.
    """
    rho = check_density_matrix(rho)
    projs = []
    for op in context_operators(ctx):
        p_plus, p_minus = pm_projectors(op)
        projs.append({+1: p_plus, -1: p_minus})
    probs = []
    for o1, o2, o3 in OUTCOME_TRIPLES:
        k = projs[2][o3] @ projs[1][o2] @ projs[0][o1]
        probs.append(np.trace(k @ rho @ dagger(k)).real)
    return OutcomeDistribution(np.clip(np.array(probs), 0.0, None), "probability")


def chi_ideal(rho: np.ndarray) -> float:
    """Noiseless chi: signed sum of the six context correlations (= 6 always)."""
    return float(sum(ctx.sign * correlation(luders_distribution(rho, ctx))
                     for ctx in contexts()))


def apply_device_noise(branches: dict[int, np.ndarray], device: "optics.MeasurementDevice",
                       noise: NoiseModel) -> dict[int, np.ndarray]:
    """Confuse the recorded outcome of one device with probability (1-V)/2.

    Operates on the pair of unnormalized Lueders branches: each recorded
    branch receives the complementary physical branch with the flip weight.
    """
    f = noise.flip_probability(device.phase_sensitive)
    if f == 0.0:
        return branches
    return {
        +1: (1.0 - f) * branches[+1] + f * branches[-1],
        -1: (1.0 - f) * branches[-1] + f * branches[+1],
    }


def _stream_seed(seed: int, state_idx: int, ctx_idx: int) -> np.random.SeedSequence:
    """Independent, scheduling-invariant RNG stream per (run, state, context)."""
    return np.random.SeedSequence([seed & 0xFFFFFFFFFFFFFFFF, state_idx, ctx_idx])


def sample_counts(dist: OutcomeDistribution, shots: int,
                  seed: int | np.random.SeedSequence,
                  efficiency: float = 1.0) -> OutcomeDistribution:
    """Poissonian detector counts for ``shots`` prepared photons.

    The detected total is Poisson(shots * efficiency) split multinomially by
    the distribution, which is distribution-identical to thinning each bin's
    Poissonian count by the efficiency.  Deterministic given the seed.
    """
    if dist.kind != "probability":
        raise ValueError("sample_counts expects a probability-mode distribution")
    if shots < 1:
        raise ValueError("shots must be >= 1")
    if not 0.0 < efficiency <= 1.0:
        raise ValueError("efficiency must lie in (0, 1]")
    rng = np.random.default_rng(seed)
    total = rng.poisson(shots * efficiency)
    p = dist.values / dist.values.sum()
    counts = rng.multinomial(total, p)
    return OutcomeDistribution(counts.astype(float), "count")


def estimate(counts: OutcomeDistribution) -> tuple[float, float]:
    """Expectation of o1*o2*o3 and its SD from Poissonian bin counts.

    E = sum_o s_o n_o / T and, by the delta method with independent Poisson
    bins, sd = sqrt(sum_o n_o (s_o - E)^2) / T.
    """
    if counts.kind != "count":
        raise ValueError("estimate expects a count-mode distribution")
    n = counts.values
    t = n.sum()
    if t < 1:
        raise ValueError("cannot estimate from zero total counts")
    e = float(np.dot(OUTCOME_SIGNS, n) / t)
    sd = float(np.sqrt(np.dot(n, (OUTCOME_SIGNS - e) ** 2)) / t)
    return e, sd


def _assemble(state_id: str, cfg: RunConfig,
              per_context: list[CorrelationResult]) -> ChiResult:
    chi = float(sum(r.context.sign * r.expectation for r in per_context))
    chi_sd = float(np.sqrt(sum(r.sd ** 2 for r in per_context)))
    sds = (chi - 4.0) / chi_sd if chi_sd > 0.0 else None
    return ChiResult(state_id, tuple(per_context), chi, chi_sd, sds, cfg)


def run_experiment(spec: StateSpec, cfg: RunConfig) -> ChiResult:
    """Simulate one full counting run of all six contexts on one state."""
    rho = density(spec)
    idx = state_index(spec.id)
    per_context = []
    for k, ctx in enumerate(contexts()):
        cascade = optics.build_cascade(ctx)
        dist = optics.run_cascade(rho, cascade, cfg.noise)
        counts = sample_counts(dist, cfg.shots, _stream_seed(cfg.seed, idx, k),
                               cfg.noise.detection_efficiency)
        e, sd = estimate(counts)
        per_context.append(CorrelationResult(ctx, e, sd, counts))
    return _assemble(spec.id, cfg, per_context)


def exact_chi_result(spec: StateSpec, cfg: RunConfig | None = None) -> ChiResult:
    """Noiseless, sampling-free reference result (chi = 6, zero SDs)."""
    cfg = cfg or RunConfig()
    rho = density(spec)
    per_context = []
    for ctx in contexts():
        dist = luders_distribution(rho, ctx)
        # Report exact probabilities scaled to the nominal shot count.
        counts = OutcomeDistribution(np.rint(dist.values * cfg.shots), "count")
        per_context.append(CorrelationResult(ctx, correlation(dist), 0.0, counts))
    return _assemble(spec.id, cfg, per_context)


def mix_results(results: list[ChiResult], weights: list[Fraction],
                state_id: str | None = None) -> ChiResult:
    """Combine pure-state runs into a mixed-state result.

    Per-context counts are added with the given weights (rounded back to
    integer counts) and re-estimated, mirroring how mixed-state data is
    obtained from pure-state runs.
    """
    if len(results) != len(weights) or not results:
        raise ValueError("need one weight per result")
    if sum(weights) != 1:
        raise ValueError(f"weights sum to {sum(weights)}, expected 1")
    cfg = results[0].config
    for r in results[1:]:
        if r.config != cfg:
            raise ValueError("cannot mix results with different configurations")
    per_context = []
    for k, ctx in enumerate(contexts()):
        mixed = np.zeros(8)
        for r, w in zip(results, weights):
            if r.per_context[k].context.ordered_labels != ctx.ordered_labels:
                raise ValueError("context mismatch between results")
            mixed += float(w) * r.per_context[k].counts.values
        counts = OutcomeDistribution(np.rint(mixed), "count")
        e, sd = estimate(counts)
        per_context.append(CorrelationResult(ctx, e, sd, counts))
    mixed_id = state_id or "mix(" + ",".join(r.state_id for r in results) + ")"
    return _assemble(mixed_id, cfg, per_context)
