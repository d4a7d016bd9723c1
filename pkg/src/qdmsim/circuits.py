"""Interferometer topologies compiled to ordered element circuits.

Four topologies are supported:

* ``DIRECT_HOMODYNE`` -- modulated coherent beam split onto two homodyne
  detectors (the classical joint-measurement baseline).
* ``MZI`` -- Mach-Zehnder with the modulators in arm B, read out at the
  dark port, optionally split by a third splitter for joint measurement.
* ``NESTED_SUI`` -- Mach-Zehnder dark port feeding the internal arm of a
  non-degenerate parametric-amplifier interferometer; homodyne on both
  amplifier outputs.
* ``DEGENERATE_SUI`` -- same nesting with degenerate (phase-sensitive)
  amplifiers and a single output read at angles referenced to half the
  second amplifier's phase.

Modulation handling: in ``EXACT`` mode the compiled circuit contains the
physical modulators (a phase shifter for delta, a loss channel with
transmission e^{-2 eps} for epsilon) inside the full two-splitter
Mach-Zehnder, so finite-R corrections are observable.  In ``LINEARIZED``
mode the modulators become a pure mean-field displacement, first order in
(delta, eps) with the vacuum contribution dropped; for the two amplifier
topologies the displacement uses the dark-port coupling sqrt(R) of the
T ~ 1 limit, which is the regime the closed-form results describe.

Sign note: with the sign conventions above, the Mach-Zehnder dark-port
mean under phase modulation is <Y> = -2 alpha delta sqrt(TR).  Published
treatments usually quote the magnitude 2 alpha delta sqrt(TR); only the
squared signal enters any SNR, so the overall sign is a convention and is
not corrected here.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .elements import (
    PaGain,
    SplitterSpec,
    beam_splitter,
    loss_channel,
    phase_shifter,
    single_mode_squeezer,
    two_mode_squeezer,
)
from .exceptions import ValidationError
from .gaussian import (
    GaussianMap,
    GaussianState,
    apply_map,
    displacement_map,
    quadrature_stats,
    vacuum_state,
)

#: Small-modulation guard for the linearized treatment.
LINEAR_MOD_LIMIT = 0.1


class Topology(str, Enum):
    DIRECT_HOMODYNE = "DIRECT_HOMODYNE"
    MZI = "MZI"
    NESTED_SUI = "NESTED_SUI"
    DEGENERATE_SUI = "DEGENERATE_SUI"


class ModulationMode(str, Enum):
    EXACT = "EXACT"
    LINEARIZED = "LINEARIZED"


@dataclass(frozen=True)
class CircuitSpec:
    """All physical parameters of one interferometer run.

    ``splitters`` holds (T1, T2) and optionally T3 for the output splitter
    (MZI), or the single splitting ratio for direct homodyne.  ``gains``
    holds the two amplifier settings for the parametric topologies; the
    gain phases are the squeezing angles theta1/theta2 in the degenerate
    case and pump phases (kept at zero) otherwise.  ``phi`` is the internal
    phase of the amplifier interferometer and ``mzi_phi`` the internal
    Mach-Zehnder phase (0 = dark fringe).
    """

    topology: Topology
    alpha: complex = 0j
    splitters: tuple[SplitterSpec, ...] = ()
    gains: tuple[PaGain, ...] = ()
    phi: float = math.pi
    mzi_phi: float = 0.0
    delta: float = 0.0
    epsilon: float = 0.0
    modulation_mode: ModulationMode = ModulationMode.LINEARIZED
    detection_loss: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "topology", Topology(self.topology))
        object.__setattr__(self, "modulation_mode", ModulationMode(self.modulation_mode))
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "splitters", tuple(self.splitters))
        object.__setattr__(self, "gains", tuple(self.gains))
        for s in self.splitters:
            if not isinstance(s, SplitterSpec):
                raise ValidationError("splitters must be SplitterSpec instances")
        for g in self.gains:
            if not isinstance(g, PaGain):
                raise ValidationError("gains must be PaGain instances")
        if not 0.0 < self.detection_loss <= 1.0:
            raise ValidationError(
                f"detection_loss must lie in (0, 1], got {self.detection_loss}"
            )
        if self.modulation_mode is ModulationMode.LINEARIZED:
            if abs(self.delta) >= LINEAR_MOD_LIMIT or abs(self.epsilon) >= LINEAR_MOD_LIMIT:
                raise ValidationError(
                    "linearized mode requires |delta|, |epsilon| < "
                    f"{LINEAR_MOD_LIMIT}, got delta={self.delta}, epsilon={self.epsilon}"
                )
        else:
            if self.epsilon < 0.0:
                raise ValidationError(
                    "exact mode models amplitude modulation as loss, so epsilon >= 0"
                )


@dataclass(frozen=True)
class CircuitOp:
    """One placed element: kind, target modes and scalar parameters."""

    kind: str
    modes: tuple[int, ...]
    params: tuple[float, ...]


@dataclass(frozen=True)
class Monitor:
    """A homodyne tap: output label, mode index and quadrature angle."""

    label: str
    mode: int
    angle: float


@dataclass(frozen=True)
class CompiledCircuit:
    spec: CircuitSpec
    n_modes: int
    ops: tuple[CircuitOp, ...]
    monitors: tuple[Monitor, ...]
    #: (stage label, number of leading ops making up that stage) pairs,
    #: populated for the degenerate topology only.
    stage_bounds: tuple[tuple[str, int], ...] = ()

    def monitor(self, label: str) -> Monitor:
        for mon in self.monitors:
            if mon.label == label:
                return mon
        known = ", ".join(m.label for m in self.monitors)
        raise ValidationError(f"unknown output {label!r}; circuit monitors: {known}")


def _op_to_map(op: CircuitOp) -> GaussianMap:
    if op.kind == "beam_splitter":
        return beam_splitter(SplitterSpec(op.params[0]))
    if op.kind == "phase_shifter":
        return phase_shifter(op.params[0])
    if op.kind == "loss_channel":
        return loss_channel(op.params[0])
    if op.kind == "two_mode_squeezer":
        return two_mode_squeezer(PaGain(op.params[0], op.params[1]))
    if op.kind == "single_mode_squeezer":
        return single_mode_squeezer(PaGain(op.params[0], op.params[1]))
    if op.kind == "displace":
        return displacement_map(complex(op.params[0], op.params[1]))
    raise ValidationError(f"unknown circuit op kind {op.kind!r}")


def evaluate_circuit(circuit: CompiledCircuit, upto: int | None = None) -> GaussianState:
    """Run the compiled circuit on vacuum inputs; optionally only the first
    ``upto`` ops (used for stage snapshots)."""
    state = vacuum_state(circuit.n_modes)
    ops = circuit.ops if upto is None else circuit.ops[:upto]
    for op in ops:
        state = apply_map(state, _op_to_map(op), op.modes)
    return state


def monitor_stats(circuit: CompiledCircuit) -> dict[str, tuple[float, float]]:
    """(mean, variance) of every monitored quadrature."""
    state = evaluate_circuit(circuit)
    return {
        mon.label: quadrature_stats(state, mon.mode, mon.angle)
        for mon in circuit.monitors
    }


def _modulation_displacement(arm_mean: complex, delta: float, epsilon: float) -> complex:
    # first order of e^{-eps} e^{i delta} acting on the arm's mean field
    return (1j * delta - epsilon) * arm_mean


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ValidationError(message)


def _displace_op(mode: int, amplitude: complex) -> CircuitOp:
    return CircuitOp("displace", (mode,), (amplitude.real, amplitude.imag))


def _detection_loss_ops(spec: CircuitSpec, modes: tuple[int, ...]) -> list[CircuitOp]:
    if spec.detection_loss >= 1.0:
        return []
    return [CircuitOp("loss_channel", (m,), (spec.detection_loss,)) for m in modes]


def _mzi_block(
    spec: CircuitSpec,
    a_mode: int,
    b_mode: int,
    linearized_coupling: float | None = None,
) -> list[CircuitOp]:
    """Ops for the two-splitter Mach-Zehnder with modulators in arm B.

    ``linearized_coupling`` switches to the displacement-only encoding: the
    modulators act on the arm-B mean field ``-coupling * alpha`` and the
    splitters are elided (used for the amplifier topologies, where the
    closed forms take the very unbalanced limit and the arm coupling is
    sqrt(R)).
    """
    if linearized_coupling is not None:
        arm_mean = -linearized_coupling * spec.alpha
        shift = _modulation_displacement(arm_mean, spec.delta, spec.epsilon)
        return [_displace_op(b_mode, shift)]

    t1, t2 = spec.splitters[0], spec.splitters[1]
    ops = [CircuitOp("beam_splitter", (a_mode, b_mode), (t1.T,))]
    if spec.modulation_mode is ModulationMode.EXACT:
        ops.append(CircuitOp("phase_shifter", (b_mode,), (spec.mzi_phi + spec.delta,)))
        if spec.epsilon != 0.0:
            ops.append(
                CircuitOp("loss_channel", (b_mode,), (math.exp(-2.0 * spec.epsilon),))
            )
    else:
        ops.append(CircuitOp("phase_shifter", (b_mode,), (spec.mzi_phi,)))
        arm_mean = -math.sqrt(t1.R) * spec.alpha * cmath.exp(1j * spec.mzi_phi)
        shift = _modulation_displacement(arm_mean, spec.delta, spec.epsilon)
        ops.append(_displace_op(b_mode, shift))
    # second splitter: same element with the mode roles swapped
    ops.append(CircuitOp("beam_splitter", (b_mode, a_mode), (t2.T,)))
    return ops


def _sui_common_checks(spec: CircuitSpec, name: str) -> None:
    _require(len(spec.gains) == 2, f"{name} needs two amplifier gains, got {len(spec.gains)}")
    _require(
        len(spec.splitters) == 2,
        f"{name} needs the two embedded splitter transmissivities, got {len(spec.splitters)}",
    )
    if spec.modulation_mode is ModulationMode.LINEARIZED:
        _require(
            spec.splitters[0].T == spec.splitters[1].T,
            f"{name} linearized encoding assumes identical splitters",
        )
        _require(
            spec.mzi_phi == 0.0,
            f"{name} linearized encoding assumes the embedded interferometer at dark fringe",
        )


def build_direct_homodyne(spec: CircuitSpec) -> CompiledCircuit:
    """Modulators straight on the coherent beam, then a splitting BS onto
    two homodynes (phase channel transmitted, amplitude channel reflected)."""
    _require(spec.topology is Topology.DIRECT_HOMODYNE, "spec topology mismatch")
    _require(len(spec.splitters) == 1, "direct homodyne needs exactly the output splitter")
    t3 = spec.splitters[0]
    ops = [_displace_op(0, spec.alpha)]
    if spec.modulation_mode is ModulationMode.EXACT:
        ops.append(CircuitOp("phase_shifter", (0,), (spec.delta,)))
        if spec.epsilon != 0.0:
            ops.append(CircuitOp("loss_channel", (0,), (math.exp(-2.0 * spec.epsilon),)))
    else:
        ops.append(_displace_op(0, _modulation_displacement(spec.alpha, spec.delta, spec.epsilon)))
    ops.append(CircuitOp("beam_splitter", (0, 1), (t3.T,)))
    monitors = (Monitor("phase", 0, math.pi / 2), Monitor("amplitude", 1, 0.0))
    ops.extend(_detection_loss_ops(spec, (0, 1)))
    return CompiledCircuit(spec, 2, tuple(ops), monitors)


def build_mzi(spec: CircuitSpec) -> CompiledCircuit:
    """Mach-Zehnder: coherent input on mode 0, vacuum on mode 1; the dark
    port comes back out on mode 1.  An optional third splitter splits the
    dark port onto separate phase/amplitude detectors."""
    _require(spec.topology is Topology.MZI, "spec topology mismatch")
    _require(
        len(spec.splitters) in (2, 3),
        f"MZI needs splitters (T1, T2[, T3]), got {len(spec.splitters)}",
    )
    ops = [_displace_op(0, spec.alpha)]
    ops.extend(_mzi_block(spec, a_mode=0, b_mode=1))
    if len(spec.splitters) == 3:
        n_modes = 3
        ops.append(CircuitOp("beam_splitter", (1, 2), (spec.splitters[2].T,)))
        monitors = (Monitor("phase", 1, math.pi / 2), Monitor("amplitude", 2, 0.0))
        loss_modes: tuple[int, ...] = (1, 2)
    else:
        n_modes = 2
        monitors = (Monitor("phase", 1, math.pi / 2), Monitor("amplitude", 1, 0.0))
        loss_modes = (1,)
    ops.extend(_detection_loss_ops(spec, loss_modes))
    return CompiledCircuit(spec, n_modes, tuple(ops), monitors)


def build_nested_sui(spec: CircuitSpec) -> CompiledCircuit:
    """Non-degenerate amplifier interferometer with the Mach-Zehnder dark
    port on its internal arm.

    Modes: 0 = idler arm (first amplifier output C, then detector output
    d1), 1 = probe arm (b_in -> dark port -> d2), 2 = coherent input of the
    embedded Mach-Zehnder.
    """
    _require(spec.topology is Topology.NESTED_SUI, "spec topology mismatch")
    _sui_common_checks(spec, "nested amplifier interferometer")
    g1, g2 = spec.gains
    coupling = (
        math.sqrt(spec.splitters[0].R)
        if spec.modulation_mode is ModulationMode.LINEARIZED
        else None
    )
    ops = [_displace_op(2, spec.alpha)]
    ops.append(CircuitOp("two_mode_squeezer", (0, 1), (g1.G, g1.phase)))
    if coupling is not None:
        ops.extend(_mzi_block(spec, a_mode=2, b_mode=1, linearized_coupling=coupling))
    else:
        ops.extend(_mzi_block(spec, a_mode=2, b_mode=1))
    ops.append(CircuitOp("phase_shifter", (0,), (spec.phi,)))
    ops.append(CircuitOp("two_mode_squeezer", (0, 1), (g2.G, g2.phase)))
    monitors = (Monitor("phase", 0, math.pi / 2), Monitor("amplitude", 1, 0.0))
    ops.extend(_detection_loss_ops(spec, (0, 1)))
    return CompiledCircuit(spec, 3, tuple(ops), monitors)


def build_degenerate_sui(spec: CircuitSpec) -> CompiledCircuit:
    """Degenerate (phase-sensitive) amplifier interferometer.

    Modes: 0 = probe arm (squeezed, encoded, re-amplified), 1 = coherent
    input of the embedded Mach-Zehnder.  The two monitored quadratures sit
    at theta2/2 and theta2/2 + pi/2; they read the two orthogonal
    modulation mixtures gamma_minus (amplified) and gamma_plus
    (de-amplified).
    """
    _require(spec.topology is Topology.DEGENERATE_SUI, "spec topology mismatch")
    _sui_common_checks(spec, "degenerate amplifier interferometer")
    g1, g2 = spec.gains
    ops = [_displace_op(1, spec.alpha)]
    stage_bounds = [("input", 1)]
    ops.append(CircuitOp("single_mode_squeezer", (0,), (g1.G, g1.phase)))
    stage_bounds.append(("after_first_amplifier", 2))
    if spec.modulation_mode is ModulationMode.LINEARIZED:
        ops.extend(
            _mzi_block(
                spec, a_mode=1, b_mode=0,
                linearized_coupling=math.sqrt(spec.splitters[0].R),
            )
        )
    else:
        ops.extend(_mzi_block(spec, a_mode=1, b_mode=0))
    stage_bounds.append(("after_encoding", len(ops)))
    ops.append(CircuitOp("single_mode_squeezer", (0,), (g2.G, g2.phase)))
    stage_bounds.append(("output", len(ops)))
    half = g2.phase / 2.0
    monitors = (
        Monitor("mix_minus", 0, half),
        Monitor("mix_plus", 0, half + math.pi / 2),
    )
    ops.extend(_detection_loss_ops(spec, (0,)))
    return CompiledCircuit(spec, 2, tuple(ops), monitors, tuple(stage_bounds))


_BUILDERS = {
    Topology.DIRECT_HOMODYNE: build_direct_homodyne,
    Topology.MZI: build_mzi,
    Topology.NESTED_SUI: build_nested_sui,
    Topology.DEGENERATE_SUI: build_degenerate_sui,
}


def build_circuit(spec: CircuitSpec) -> CompiledCircuit:
    return _BUILDERS[spec.topology](spec)


def with_modulations(spec: CircuitSpec, delta: float, epsilon: float) -> CircuitSpec:
    return replace(spec, delta=delta, epsilon=epsilon)


@dataclass(frozen=True)
class StageSnapshot:
    """Single-mode state of the probe arm at one circuit stage, with its
    covariance ellipse (variances along principal axes, major-axis angle)."""

    label: str
    state: GaussianState
    center_x: float
    center_y: float
    major_variance: float
    minor_variance: float
    orientation: float


def _ellipse(block: np.ndarray) -> tuple[float, float, float]:
    evals, evecs = np.linalg.eigh(block)
    minor, major = float(evals[0]), float(evals[1])
    vec = evecs[:, 1]
    orientation = math.atan2(vec[1], vec[0]) % math.pi
    return major, minor, orientation


def stage_snapshots(spec: CircuitSpec) -> list[StageSnapshot]:
    """Probe-mode phase-space snapshots of the degenerate topology:
    input vacuum, squeezed, encoded, re-amplified."""
    if Topology(spec.topology) is not Topology.DEGENERATE_SUI:
        raise ValidationError(
            f"stage snapshots are defined for DEGENERATE_SUI only, got {spec.topology}"
        )
    circuit = build_circuit(spec)
    snapshots = []
    for label, upto in circuit.stage_bounds:
        state = evaluate_circuit(circuit, upto=upto)
        probe = state.reduced(0)
        major, minor, orientation = _ellipse(probe.cov)
        snapshots.append(
            StageSnapshot(
                label=label,
                state=probe,
                center_x=float(probe.mean[0]),
                center_y=float(probe.mean[1]),
                major_variance=major,
                minor_variance=minor,
                orientation=orientation,
            )
        )
    return snapshots
