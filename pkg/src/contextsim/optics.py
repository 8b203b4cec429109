"""Linear-optics model: elements, state preparation, measuring devices, cascades.

Elements act as unitaries on the four optical modes (tH, tV, rH, rV).  A
measuring device analyzes one square observable by mapping its two eigenspaces
onto disjoint pairs of output modes; branch-wise restore unitaries then
recreate the eigenstates so the next device in a cascade sees a proper
post-measurement state (Lueders update).  A cascade chains three devices into
a binary tree of 7 device slots feeding 8 detectors.

Conventions (all phases are a fixed choice; the compile-time instrument check
is what is normative):

* HWP(theta) = [[cos 2t, sin 2t], [sin 2t, -cos 2t]] on (H, V);
* QWP(theta) = R(theta) diag(1, i) R(-theta) with R a real rotation;
* PBS transmits H, reflects V into the other path with phase i;
* BS is a symmetric 50/50 splitter [[1, i], [i, 1]]/sqrt(2) on (t, r);
* the wedge W(phi) multiplies one path by exp(i phi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import TYPE_CHECKING

import numpy as np

from . import pm_square
from .outcomes import OUTCOME_TRIPLES, OutcomeDistribution
from .qcore import (
    ATOL_SPECTRAL,
    DIM,
    I2,
    MODE_LABELS,
    check_ket,
    dagger,
    is_unitary,
    normalize,
    pm_projectors,
    tensor,
)

if TYPE_CHECKING:  # pragma: no cover
    from .experiment import NoiseModel

TWO_PI = 2.0 * math.pi


class DeviceCompileError(ValueError):
    """A compiled device failed its unitarity or instrument-equality check."""


@dataclass(frozen=True)
class Element:
    """One optical element: kind, which path it sits in, and its parameter.

    ``location`` is "t" or "r" for path-local elements (wave plates, wedge)
    and "both" for elements acting on the path pair (PBS, BS).  The parameter
    is the fast-axis angle for wave plates and the phase for the wedge, in
    radians; it is ignored for PBS/BS.
    """

    kind: str  # "HWP" | "QWP" | "PBS" | "BS" | "W"
    location: str  # "t" | "r" | "both"
    parameter: float = 0.0

    def __post_init__(self):
        if self.kind not in ("HWP", "QWP", "PBS", "BS", "W"):
            raise ValueError(f"unknown element kind: {self.kind!r}")
        if self.kind in ("PBS", "BS"):
            if self.location != "both":
                raise ValueError(f"{self.kind} acts on the path pair")
        elif self.location not in ("t", "r"):
            raise ValueError(f"{self.kind} needs location 't' or 'r'")
        if self.kind in ("HWP", "QWP") and not 0.0 <= self.parameter < math.pi:
            raise ValueError("wave-plate angle must lie in [0, pi)")
        if self.kind == "W" and not 0.0 <= self.parameter < TWO_PI:
            raise ValueError("wedge phase must lie in [0, 2*pi)")


def hwp_jones(theta: float) -> np.ndarray:
    c, s = math.cos(2.0 * theta), math.sin(2.0 * theta)
    return np.array([[c, s], [s, -c]], dtype=complex)


def qwp_jones(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    rot = np.array([[c, -s], [s, c]], dtype=complex)
    return rot @ np.diag([1.0, 1.0j]) @ rot.T


def _in_path(jones: np.ndarray, location: str) -> np.ndarray:
    """Embed a polarization Jones matrix into one path, identity on the other."""
    u = np.eye(DIM, dtype=complex)
    offset = 0 if location == "t" else 2
    u[offset:offset + 2, offset:offset + 2] = jones
    return u


#: PBS action: tH -> tH, rH -> rH, tV -> i|rV>, rV -> i|tV>.
_PBS = np.zeros((DIM, DIM), dtype=complex)
_PBS[0, 0] = 1.0
_PBS[2, 2] = 1.0
_PBS[3, 1] = 1.0j
_PBS[1, 3] = 1.0j

#: Symmetric beam splitter on the path pair, per polarization.
_BS = tensor(np.array([[1.0, 1.0j], [1.0j, 1.0]], dtype=complex) / math.sqrt(2.0), I2)


def element_unitary(element: Element) -> np.ndarray:
    """4x4 unitary of one element in the fixed mode basis."""
    if element.kind == "HWP":
        return _in_path(hwp_jones(element.parameter), element.location)
    if element.kind == "QWP":
        return _in_path(qwp_jones(element.parameter), element.location)
    if element.kind == "PBS":
        return _PBS.copy()
    if element.kind == "BS":
        return _BS.copy()
    phase = np.exp(1.0j * element.parameter)
    return _in_path(np.diag([phase, phase]), element.location)


def chain_unitary(elements: tuple[Element, ...]) -> np.ndarray:
    """Compose element unitaries; elements are applied in list order."""
    return reduce(lambda acc, e: element_unitary(e) @ acc, elements, np.eye(DIM, dtype=complex))


# ---------------------------------------------------------------------------
# State preparation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PreparationParams:
    """Settings of the preparation stage.

    An H-polarized photon in path t passes HWP(theta0), a PBS splitting the
    paths, a wedge on path r, then one HWP and one QWP per path.
    """

    theta0: float = 0.0
    wedge_phase: float = 0.0
    t_hwp: float = 0.0
    t_qwp: float = 0.0
    r_hwp: float = 0.0
    r_qwp: float = 0.0

    def elements(self) -> tuple[Element, ...]:
        return (
            Element("HWP", "t", self.theta0),
            Element("PBS", "both"),
            Element("W", "r", self.wedge_phase),
            Element("HWP", "t", self.t_hwp),
            Element("QWP", "t", self.t_qwp),
            Element("HWP", "r", self.r_hwp),
            Element("QWP", "r", self.r_qwp),
        )


#: Source state fed into the preparation pipeline: |t,H>.
SOURCE_KET = np.array([1.0, 0.0, 0.0, 0.0], dtype=complex)


def prepare(params: PreparationParams) -> np.ndarray:
    """Propagate |t,H> through the preparation chain; returns the output ket."""
    psi = chain_unitary(params.elements()) @ SOURCE_KET
    return normalize(psi)


def _plate_angles_for(target_pol: np.ndarray, input_pol: str) -> tuple[float, float, float]:
    """HWP/QWP angles mapping the given input polarization onto ``target_pol``.

    Works through the polarization-ellipse parameters of the target: with
    orientation psi and ellipticity delta, QWP(psi) . HWP((psi+delta)/2)
    turns |H> into exactly R(psi)(cos delta, i sin delta).  An input of |V>
    shifts the HWP angle by pi/4.  Returns (hwp, qwp, mu) where mu is the
    residual phase of the produced Jones vector relative to ``target_pol``.
    """
    x, y = target_pol
    s1 = abs(x) ** 2 - abs(y) ** 2
    s2 = 2.0 * (np.conj(x) * y).real
    s3 = 2.0 * (np.conj(x) * y).imag
    orientation = 0.5 * math.atan2(s2, s1)
    delta = 0.5 * math.asin(min(1.0, max(-1.0, s3)))
    hwp = (orientation + delta) / 2.0
    if input_pol == "V":
        hwp += math.pi / 4.0
    hwp %= math.pi
    qwp = orientation % math.pi
    e_in = np.array([1.0, 0.0] if input_pol == "H" else [0.0, 1.0], dtype=complex)
    produced = qwp_jones(qwp) @ hwp_jones(hwp) @ e_in
    overlap = np.vdot(target_pol, produced)
    if abs(abs(overlap) - 1.0) > 1e-9:
        raise ValueError("polarization target not reached by HWP+QWP pair")
    return hwp, qwp, float(np.angle(overlap))


def solve_preparation(target: np.ndarray) -> PreparationParams:
    """Preparation settings reproducing ``target`` up to a global phase.

    Any normalized ket cos(e)|t>|chi_t> + exp(i phi) sin(e)|r>|chi_r> is
    reachable: theta0 fixes the path weights, the per-path plates fix the
    polarizations, and the wedge absorbs the relative phase (including the i
    picked up at the PBS reflection).
    """
    target = check_ket(target)
    v_t, v_r = target[:2], target[2:]
    n_t, n_r = float(np.linalg.norm(v_t)), float(np.linalg.norm(v_r))
    theta0 = 0.5 * math.atan2(n_r, n_t)

    t_hwp = t_qwp = r_hwp = r_qwp = 0.0
    mu_t = mu_r = 0.0
    if n_t > 1e-12:
        t_hwp, t_qwp, mu_t = _plate_angles_for(v_t / n_t, "H")
    if n_r > 1e-12:
        r_hwp, r_qwp, mu_r = _plate_angles_for(v_r / n_r, "V")

    # The r branch carries the PBS reflection phase i on top of the plate
    # residual; the wedge cancels both against the t branch.
    wedge = (mu_t - mu_r - math.pi / 2.0) % TWO_PI if n_t > 1e-12 and n_r > 1e-12 else 0.0

    params = PreparationParams(theta0=theta0, wedge_phase=wedge,
                               t_hwp=t_hwp, t_qwp=t_qwp, r_hwp=r_hwp, r_qwp=r_qwp)
    fidelity = abs(np.vdot(target, prepare(params))) ** 2
    if fidelity < 1.0 - 1e-9:
        raise ValueError(f"target not reachable: roundtrip fidelity {fidelity:.12f}")
    return params


# ---------------------------------------------------------------------------
# Measuring devices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DeviceNetlist:
    """Element list and outcome partition for one square observable.

    ``outcome_map`` assigns each of the four output modes to the +1 or -1
    result; ``phase_sensitive`` marks devices whose analysis interferes the
    two paths on a BS.
    """

    observable_label: str
    elements: tuple[Element, ...]
    outcome_map: dict[int, tuple[int, ...]]
    phase_sensitive: bool

    def __post_init__(self):
        plus = set(self.outcome_map[+1])
        minus = set(self.outcome_map[-1])
        if not plus or not minus or plus & minus or plus | minus != set(range(DIM)):
            raise ValueError("outcome map must partition the four output modes")


@dataclass(frozen=True)
class MeasurementDevice:
    """Compiled device: analysis unitary, outcome partition, branch restores.

    For each outcome s, restore . (projection onto the s modes) . analysis
    acts on states exactly as the Lueders projector of the observable.
    """

    label: str
    analysis_unitary: np.ndarray
    outcome_map: dict[int, tuple[int, ...]]
    restore_unitaries: dict[int, np.ndarray]
    luders_projectors: dict[int, np.ndarray]
    phase_sensitive: bool

    def mode_projector(self, outcome: int) -> np.ndarray:
        p = np.zeros((DIM, DIM), dtype=complex)
        for m in self.outcome_map[outcome]:
            p[m, m] = 1.0
        return p

    def branch(self, rho: np.ndarray) -> dict[int, np.ndarray]:
        """Unnormalized post-measurement branches (trace = outcome probability)."""
        u = self.analysis_unitary
        analyzed = u @ rho @ dagger(u)
        out = {}
        for s in (+1, -1):
            pi_s = self.mode_projector(s)
            r_s = self.restore_unitaries[s]
            out[s] = r_s @ (pi_s @ analyzed @ pi_s) @ dagger(r_s)
        return out


#: Interference core shared by the Bell-measurement devices: a path-controlled
#: polarization flip, a wedge steering (|t>+|r>)/sqrt(2) onto path t under the
#: i-reflection BS convention, the BS itself, and a PBS on each output path.
_BELL_CORE = (
    Element("HWP", "r", math.pi / 4.0),
    Element("W", "r", 1.5 * math.pi),
    Element("BS", "both"),
    Element("PBS", "both"),
)

#: Polarization Hadamard in both paths (HWP at pi/8).
_POL_ROTATION = (Element("HWP", "t", math.pi / 8.0), Element("HWP", "r", math.pi / 8.0))

#: Path interferometer used for b: wedge plus BS, eigenstates (|t>+|r>)/sqrt(2)
#: mapped to path t.
_PATH_INTERFEROMETER = (Element("W", "r", 1.5 * math.pi), Element("BS", "both"))

_NETLISTS: dict[str, tuple[tuple[Element, ...], dict[int, tuple[int, ...]]]] = {
    # Path readout: the two t modes are the +1 result.
    "A": ((), {+1: (0, 1), -1: (2, 3)}),
    # Polarization readouts; the PBS routes V to the other path, so the -1
    # modes are the V modes with paths swapped.
    "B": ((Element("PBS", "both"),), {+1: (0, 2), -1: (1, 3)}),
    "a": (_POL_ROTATION + (Element("PBS", "both"),), {+1: (0, 2), -1: (1, 3)}),
    # Path-superposition readout via interference.
    "b": (_PATH_INTERFEROMETER, {+1: (0, 1), -1: (2, 3)}),
    # Bell measurements; the analyzer sends Phi+ -> tH, Psi- -> tV,
    # Phi- -> rH, Psi+ -> rV, and the outcome grouping per observable follows
    # its joint eigenspaces.
    "C": (_BELL_CORE, {+1: (0, 2), -1: (1, 3)}),
    "c": (_BELL_CORE, {+1: (0, 3), -1: (1, 2)}),
    "gamma": (_BELL_CORE, {+1: (2, 3), -1: (0, 1)}),
    # Bell measurements preceded by a polarization rotation.
    "alpha": (_POL_ROTATION + _BELL_CORE, {+1: (0, 2), -1: (1, 3)}),
    "beta": (_POL_ROTATION + _BELL_CORE, {+1: (0, 3), -1: (1, 2)}),
}


def device_netlist(label: str) -> DeviceNetlist:
    """Netlist of the device measuring the labeled observable."""
    if label not in _NETLISTS:
        raise KeyError(f"unknown observable label: {label!r}")
    elements, outcome_map = _NETLISTS[label]
    phase_sensitive = any(e.kind == "BS" for e in elements)
    return DeviceNetlist(label, elements, dict(outcome_map), phase_sensitive)


def compile_device(netlist: DeviceNetlist) -> MeasurementDevice:
    """Compose the netlist into a device and verify it is a Lueders instrument.

    The restore unitary of each branch is the inverse of the analysis
    restricted to that branch's output modes (extended unitarily), so that
    restore . projection . analysis reproduces P_s exactly.
    """
    analysis = chain_unitary(netlist.elements)
    if not is_unitary(analysis, ATOL_SPECTRAL):
        raise DeviceCompileError(f"analysis of {netlist.observable_label!r} is not unitary")
    p_plus, p_minus = pm_projectors(pm_square.observable(netlist.observable_label))
    projectors = {+1: p_plus, -1: p_minus}
    restores = {s: dagger(analysis) for s in (+1, -1)}
    device = MeasurementDevice(
        label=netlist.observable_label,
        analysis_unitary=analysis,
        outcome_map=dict(netlist.outcome_map),
        restore_unitaries=restores,
        luders_projectors=projectors,
        phase_sensitive=netlist.phase_sensitive,
    )
    for s in (+1, -1):
        err = instrument_deviation(device, s)
        if err > ATOL_SPECTRAL:
            raise DeviceCompileError(
                f"device {netlist.observable_label!r} outcome {s:+d} deviates from the "
                f"Lueders instrument by {err:.3e}"
            )
    return device


def instrument_deviation(device: MeasurementDevice, outcome: int) -> float:
    """How far restore.projection.analysis is from P_s as a map on states.

    The branch map has the single Kraus operator K = R Pi U; it equals the
    Lueders branch iff K = exp(i theta) P_s for some phase, so the deviation
    is measured after fitting that phase.
    """
    k = device.restore_unitaries[outcome] @ device.mode_projector(outcome) @ device.analysis_unitary
    p_s = device.luders_projectors[outcome]
    overlap = np.trace(dagger(p_s) @ k)
    phase = overlap / abs(overlap) if abs(overlap) > 1e-15 else 1.0
    return float(np.linalg.norm(k - phase * p_s))


@lru_cache(maxsize=1)
def compiled_devices() -> dict[str, MeasurementDevice]:
    """One compiled device per observable; the same instance is shared by every
    cascade that measures the observable, whichever context it appears in."""
    return {label: compile_device(device_netlist(label)) for label in pm_square.LABELS}


# ---------------------------------------------------------------------------
# Cascades
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Cascade:
    """Binary tree of measuring devices for one context: 1 + 2 + 4 slots.

    Both level-2 slots hold the identical device instance, as do all four
    level-3 slots; detector leaves are labeled by ordered outcome triples.
    """

    ordered_labels: tuple[str, str, str]
    levels: tuple[tuple[MeasurementDevice, ...], ...]
    detectors: tuple[tuple[int, int, int], ...]

    @property
    def device_count(self) -> int:
        return sum(len(level) for level in self.levels)


def build_cascade(ctx: pm_square.Context) -> Cascade:
    """Arrange the three devices of a context in measured order."""
    devices = compiled_devices()
    d1, d2, d3 = (devices[label] for label in ctx.ordered_labels)
    return Cascade(
        ordered_labels=ctx.ordered_labels,
        levels=((d1,), (d2, d2), (d3, d3, d3, d3)),
        detectors=OUTCOME_TRIPLES,
    )


def run_cascade(rho: np.ndarray, cascade: Cascade,
                noise: "NoiseModel | None" = None) -> OutcomeDistribution:
    """Propagate a state through the cascade tree as a density operator.

    Each device analyzes, suffers its visibility confusion, branches on the
    outcome modes and restores; unnormalized branches carry the probability
    weight.  Returns the 8 detector probabilities (before any detection
    thinning, which is a sampling-stage effect).
    """
    from .experiment import IDEAL_NOISE, apply_device_noise

    noise = noise if noise is not None else IDEAL_NOISE
    branches = [np.asarray(rho, dtype=complex)]
    for level in cascade.levels:
        device = level[0]  # identical instances across the level
        split = []
        for sigma in branches:
            noisy = apply_device_noise(device.branch(sigma), device, noise)
            split.extend((noisy[+1], noisy[-1]))
        branches = split
    probs = np.array([sigma.trace().real for sigma in branches])
    return OutcomeDistribution(np.clip(probs, 0.0, None), "probability")


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def netlist_as_dict(netlist: DeviceNetlist) -> dict:
    """JSON-ready description of a netlist (elements and outcome map)."""
    return {
        "observable": netlist.observable_label,
        "phase_sensitive": netlist.phase_sensitive,
        "elements": [
            {"kind": e.kind, "location": e.location, "parameter": e.parameter}
            for e in netlist.elements
        ],
        "outcome_map": {
            "+1": [MODE_LABELS[m] for m in netlist.outcome_map[+1]],
            "-1": [MODE_LABELS[m] for m in netlist.outcome_map[-1]],
        },
    }


def netlists_document() -> list[dict]:
    return [netlist_as_dict(device_netlist(label)) for label in pm_square.LABELS]
