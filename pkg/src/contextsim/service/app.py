"""FastAPI service exposing the contextuality simulator.

Every endpoint is a pure function of its request payload (seeds included),
so responses are reproducible byte for byte.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, HTTPException, Query

from .. import __version__, nchv, optics
from ..experiment import (
    IDEAL_NOISE,
    ChiResult,
    NoiseModel,
    RunConfig,
    exact_chi_result,
    luders_distribution,
    mix_results,
    run_experiment,
    total_variation,
)
from ..outcomes import OUTCOME_LABELS
from ..pm_square import contexts
from ..state_catalog import StateSpec, catalog, density, entanglement_report, get_state, state_index
from . import schemas

#: Largest tolerated optics-vs-reference total-variation distance.
OPTICS_TOLERANCE = 1e-9

app = FastAPI(
    title="contextsim",
    version=__version__,
    description="State-independent quantum contextuality simulator for a "
                "path/polarization encoded single photon.",
)


@app.get("/healthz")
def healthz() -> dict:
    return {"status": "ok", "version": __version__}


@app.get("/catalog", response_model=list[schemas.CatalogEntry])
def catalog_listing() -> list[schemas.CatalogEntry]:
    """The 20 benchmark states with their entanglement classification."""
    entries = []
    for spec in catalog():
        report = entanglement_report(density(spec))
        entries.append(schemas.CatalogEntry(
            id=spec.id,
            kind=spec.kind,
            definition=spec.definition,
            entanglement=schemas.EntanglementInfo(
                chsh_max=report.chsh_max,
                ppt_min_eig=report.ppt_min_eig,
                violates_chsh=report.violates_chsh,
                is_ppt_separable=report.is_ppt_separable,
            ),
        ))
    return entries


def _resolve_states(ids: list[str] | None) -> list[StateSpec]:
    if ids is None:
        return list(catalog())
    try:
        specs = [get_state(i) for i in ids]
    except KeyError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from None
    # Deterministic reports: deduplicate and order by catalog index.
    unique = {spec.id: spec for spec in specs}
    return sorted(unique.values(), key=lambda s: state_index(s.id))


def _context_results(result: ChiResult) -> list[schemas.ContextResult]:
    out = []
    for cr in result.per_context:
        counts = cr.counts.values
        total = counts.sum()
        probs = counts / total if total > 0 else counts
        out.append(schemas.ContextResult(
            labels=list(cr.context.ordered_labels),
            display=cr.context.display,
            sign=cr.context.sign,
            expectation=cr.expectation,
            sd=cr.sd,
            outcomes=list(OUTCOME_LABELS),
            counts=[int(c) for c in counts],
            probabilities=[float(p) for p in probs],
        ))
    return out


def _violates(result: ChiResult) -> bool:
    return (result.chi - 4.0) > 3.0 * result.chi_sd


def _state_result(spec: StateSpec, result: ChiResult) -> schemas.StateResult:
    return schemas.StateResult(
        state=spec.id,
        kind=spec.kind,
        chi=result.chi,
        chi_sd=result.chi_sd,
        sds_of_violation=result.sds_of_violation,
        violates_bound=_violates(result),
        contexts=_context_results(result),
    )


def _simulate(spec: StateSpec, cfg: RunConfig, ideal: bool, direct: bool,
              pure_cache: dict[str, ChiResult]) -> ChiResult:
    if ideal:
        return exact_chi_result(spec, cfg)
    if spec.kind == "mixed" and not direct:
        components, weights = [], []
        for component_id, weight in spec.mixture:
            if component_id not in pure_cache:
                pure_cache[component_id] = run_experiment(get_state(component_id), cfg)
            components.append(pure_cache[component_id])
            weights.append(weight)
        return mix_results(components, weights, state_id=spec.id)
    return run_experiment(spec, cfg)


def execute_run(request: schemas.RunRequest) -> schemas.RunReport:
    specs = _resolve_states(request.states)
    noise = IDEAL_NOISE if request.ideal else NoiseModel(
        vis_phase_sensitive=request.vis_ps,
        vis_phase_insensitive=request.vis_pi,
        detection_efficiency=request.efficiency,
    )
    cfg = RunConfig(shots=request.shots, seed=request.seed, noise=noise)
    pure_cache: dict[str, ChiResult] = {}
    results = [
        _state_result(spec, _simulate(spec, cfg, request.ideal, request.direct, pure_cache))
        for spec in specs
    ]
    return schemas.RunReport(
        config=schemas.RunConfigEcho(
            shots=request.shots, seed=request.seed, vis_ps=request.vis_ps,
            vis_pi=request.vis_pi, efficiency=request.efficiency,
            ideal=request.ideal, direct=request.direct,
        ),
        results=results,
        all_violating=all(r.violates_bound for r in results),
    )


@app.post("/run", response_model=schemas.RunReport)
def run(request: schemas.RunRequest) -> schemas.RunReport:
    """Simulate counting runs and report chi per state."""
    try:
        return execute_run(request)
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from None


@app.post("/sweep", response_model=schemas.SweepReport)
def sweep(request: schemas.SweepRequest) -> schemas.SweepReport:
    """Chi across a visibility grid, one row per (vis_ps, vis_pi, state)."""
    rows = []
    try:
        for vis_pi in request.vis_pi:
            for vis_ps in request.vis_ps:
                report = execute_run(schemas.RunRequest(
                    states=request.states, shots=request.shots, seed=request.seed,
                    vis_ps=vis_ps, vis_pi=vis_pi, efficiency=request.efficiency,
                ))
                rows.extend(
                    schemas.SweepRow(vis_ps=vis_ps, vis_pi=vis_pi, state=r.state,
                                     chi=r.chi, chi_sd=r.chi_sd)
                    for r in report.results
                )
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from None
    return schemas.SweepReport(rows=rows)


@app.get("/verify-optics", response_model=schemas.OpticsReport)
def verify_optics() -> schemas.OpticsReport:
    """Check every compiled device and the optics/reference equivalence.

    Runs all 6 contexts on all 20 catalog states at ideal noise and compares
    the cascade distribution with the sequential-projection reference.
    """
    device_checks = []
    for label, device in optics.compiled_devices().items():
        u = device.analysis_unitary
        unitarity = float(np.max(np.abs(u.conj().T @ u - np.eye(4))))
        device_checks.append(schemas.DeviceCheck(
            observable=label,
            phase_sensitive=device.phase_sensitive,
            unitarity_error=unitarity,
            instrument_error_plus=optics.instrument_deviation(device, +1),
            instrument_error_minus=optics.instrument_deviation(device, -1),
        ))
    equivalence = []
    worst = 0.0
    for spec in catalog():
        rho = density(spec)
        for ctx in contexts():
            tv = total_variation(
                optics.run_cascade(rho, optics.build_cascade(ctx)),
                luders_distribution(rho, ctx),
            )
            worst = max(worst, tv)
            equivalence.append(schemas.OpticsCheck(
                state=spec.id, context=ctx.display, total_variation=tv,
            ))
    passed = worst < OPTICS_TOLERANCE and all(
        c.unitarity_error < 1e-10 and c.instrument_error_plus < 1e-10
        and c.instrument_error_minus < 1e-10
        for c in device_checks
    )
    return schemas.OpticsReport(
        passed=passed,
        checks=len(equivalence),
        max_total_variation=worst,
        tolerance=OPTICS_TOLERANCE,
        device_checks=device_checks,
        equivalence_checks=equivalence,
        netlists=[schemas.NetlistInfo(**d) for d in optics.netlists_document()],
    )


@app.get("/certify-classical", response_model=schemas.CertifyReport)
def certify_classical(full: bool = Query(default=False,
                                         description="Include the full 512-assignment table")) -> schemas.CertifyReport:
    """Exhaustive noncontextual-bound certification (chi <= 4)."""
    cert = nchv.certify_bound()
    quantum = float(np.round(luders_chi_quantum(), 12))
    table = None
    if full:
        table = [
            schemas.AssignmentRow(values=a, chi=nchv.chi_of_assignment(a))
            for a in nchv.enumerate_assignments()
        ]
    return schemas.CertifyReport(
        max_chi=cert.max_chi,
        min_chi=cert.min_chi,
        argmax_count=cert.argmax_count,
        num_assignments=cert.num_assignments,
        quantum_value=quantum,
        gap=quantum - cert.max_chi,
        passed=cert.max_chi == 4,
        table=table,
    )


def luders_chi_quantum() -> float:
    """The state-independent quantum chi, evaluated on the maximally mixed state."""
    from ..experiment import chi_ideal

    return chi_ideal(np.eye(4, dtype=complex) / 4.0)
