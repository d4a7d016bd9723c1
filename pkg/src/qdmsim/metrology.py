"""Signal, noise, SNR and resource accounting for compiled circuits.

Numeric quantities are measured on the compiled circuit: slopes by
differentiating the monitored quadrature mean with respect to a modulation
depth at the operating point, noise as the quadrature variance with
modulations off.  The closed forms the measurements are checked against
live in the ``*_snr`` / ``*_noise`` functions below and are evaluated
exactly as printed, so the two routes stay independent.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

from .circuits import (
    CircuitSpec,
    ModulationMode,
    Topology,
    build_circuit,
    monitor_stats,
    with_modulations,
)
from .elements import PaGain
from .exceptions import NumericalError, ValidationError

#: Relative agreement required between successive difference estimates.
SLOPE_AGREEMENT_RTOL = 1e-7
#: Default central-difference half width for exact-mode slopes.
DEFAULT_SLOPE_STEP = 1e-5

_PARAMETERS = ("delta", "epsilon")


@dataclass(frozen=True)
class SnrReport:
    """Signal and noise budget for one monitored quadrature.

    ``signal_slope`` is d<quadrature>/d(parameter) at the operating point,
    ``signal`` the slope times the parameter value, ``snr`` their squared
    ratio to the noise variance, ``i_ps`` the phase-sensing photon number
    R |alpha|^2 and ``enhancement`` the SNR relative to the ideal classical
    single-channel bound 4 i_ps value^2.
    """

    quadrature: str
    parameter: str
    value: float
    signal_slope: float
    signal: float
    noise_var: float
    snr: float
    i_ps: float
    enhancement: float


@dataclass(frozen=True)
class MixtureAngle:
    """Orthogonal modulation mixtures selected by the readout angle theta2."""

    theta2: float
    gamma_minus: float
    gamma_plus: float


def mixture_angles(theta2: float, delta: float, epsilon: float) -> MixtureAngle:
    half = theta2 / 2.0
    gamma_minus = -epsilon * math.cos(half) + delta * math.sin(half)
    gamma_plus = epsilon * math.sin(half) + delta * math.cos(half)
    return MixtureAngle(theta2, gamma_minus, gamma_plus)


def probe_photon_number(spec: CircuitSpec) -> float:
    """Photon number actually probing the modulators (R |alpha|^2, or
    |alpha|^2 when the full beam is modulated)."""
    if spec.topology is Topology.DIRECT_HOMODYNE:
        return abs(spec.alpha) ** 2
    return spec.splitters[0].R * abs(spec.alpha) ** 2


def _monitor_mean(spec: CircuitSpec, output: str) -> float:
    circuit = build_circuit(spec)
    mon = circuit.monitor(output)
    return monitor_stats(circuit)[mon.label][0]


def _central_slope(spec: CircuitSpec, parameter: str, output: str, h: float) -> float:
    up = _monitor_mean(_spec_at(spec, parameter, h), output)
    down = _monitor_mean(_spec_at(spec, parameter, -h), output)
    return (up - down) / (2.0 * h)


def _forward_slope(spec: CircuitSpec, parameter: str, output: str, h: float) -> float:
    base = _monitor_mean(_spec_at(spec, parameter, 0.0), output)
    up = _monitor_mean(_spec_at(spec, parameter, h), output)
    return (up - base) / h


def _spec_at(spec: CircuitSpec, parameter: str, value: float) -> CircuitSpec:
    if parameter == "delta":
        return with_modulations(spec, delta=value, epsilon=0.0)
    return with_modulations(spec, delta=0.0, epsilon=value)


def signal_slope(
    spec: CircuitSpec, parameter: str, output: str, step: float = DEFAULT_SLOPE_STEP
) -> float:
    """d<quadrature>/d(parameter) at zero modulation.

    Linearized circuits are linear in the modulations by construction, so a
    single central difference is exact there.  Exact-mode circuits use a
    Richardson-refined difference: central for delta, one-sided for epsilon
    (negative epsilon would be amplification, not loss).
    """
    if parameter not in _PARAMETERS:
        raise ValidationError(f"parameter must be one of {_PARAMETERS}, got {parameter!r}")
    if step <= 0.0:
        raise ValidationError(f"step must be positive, got {step}")
    if spec.modulation_mode is ModulationMode.LINEARIZED:
        # exact for a linear response; the wide step only helps conditioning
        slope = _central_slope(spec, parameter, output, 0.01)
        if not math.isfinite(slope):
            raise NumericalError(f"non-finite slope for {parameter} on {output}")
        return slope

    if parameter == "delta":
        estimates = [_central_slope(spec, parameter, output, step / 2**k) for k in range(3)]
        first = (4.0 * estimates[1] - estimates[0]) / 3.0
        second = (4.0 * estimates[2] - estimates[1]) / 3.0
    else:
        estimates = [_forward_slope(spec, parameter, output, step / 2**k) for k in range(3)]
        first = 2.0 * estimates[1] - estimates[0]
        second = 2.0 * estimates[2] - estimates[1]
    if not math.isfinite(second):
        raise NumericalError(f"non-finite slope for {parameter} on {output}")
    # rounding on the differenced means grows like eps * (field scale) / step
    field_scale = max(abs(_monitor_mean(_spec_at(spec, parameter, step), output)),
                      2.0 * abs(spec.alpha), 1.0)
    rounding_floor = 64.0 * 2.3e-16 * field_scale / step
    if abs(second - first) > max(SLOPE_AGREEMENT_RTOL * abs(second), rounding_floor):
        raise NumericalError(
            f"refined difference estimates for {parameter} on {output} disagree: "
            f"{first!r} vs {second!r}"
        )
    return second


def output_noise(spec: CircuitSpec, output: str) -> float:
    """Variance of the monitored quadrature at the operating point
    (modulations off)."""
    circuit = build_circuit(with_modulations(spec, 0.0, 0.0))
    mon = circuit.monitor(output)
    return monitor_stats(circuit)[mon.label][1]


def _classical_bound(i_ps: float, noise_var: float, slope: float) -> float:
    # enhancement = snr / (4 i_ps value^2); the value cancels against signal^2
    if i_ps == 0.0:
        return math.nan
    return slope * slope / (4.0 * i_ps * noise_var)


def snr_numeric(spec: CircuitSpec, parameter: str, output: str, value: float) -> SnrReport:
    """Combine measured slope and noise into an SNR report for one channel."""
    if abs(value) >= 0.1:
        raise ValidationError(f"modulation value {value} outside the linear regime guard")
    slope = signal_slope(spec, parameter, output)
    noise = output_noise(spec, output)
    signal = slope * value
    return SnrReport(
        quadrature=output,
        parameter=parameter,
        value=value,
        signal_slope=slope,
        signal=signal,
        noise_var=noise,
        snr=signal * signal / noise,
        i_ps=probe_photon_number(spec),
        enhancement=_classical_bound(probe_photon_number(spec), noise, slope),
    )


def channel_report(spec: CircuitSpec, output: str) -> SnrReport:
    """SNR report for a monitor's canonical channel.

    ``phase`` reads delta and ``amplitude`` reads epsilon.  The degenerate
    topology's two outputs read the mixtures gamma_minus / gamma_plus; their
    response per unit mixture is recovered by projecting the measured delta
    and epsilon slopes onto the mixture direction.
    """
    if output in ("phase", "amplitude"):
        parameter = "delta" if output == "phase" else "epsilon"
        value = spec.delta if output == "phase" else spec.epsilon
        return snr_numeric(spec, parameter, output, value)
    if output not in ("mix_minus", "mix_plus"):
        raise ValidationError(f"no canonical channel for output {output!r}")

    theta2 = spec.gains[1].phase
    half = theta2 / 2.0
    slope_d = signal_slope(spec, "delta", output)
    slope_e = signal_slope(spec, "epsilon", output)
    mix = mixture_angles(theta2, spec.delta, spec.epsilon)
    if output == "mix_minus":
        slope = slope_d * math.sin(half) - slope_e * math.cos(half)
        parameter, value = "gamma_minus", mix.gamma_minus
    else:
        slope = slope_d * math.cos(half) + slope_e * math.sin(half)
        parameter, value = "gamma_plus", mix.gamma_plus
    noise = output_noise(spec, output)
    signal = slope * value
    i_ps = probe_photon_number(spec)
    return SnrReport(
        quadrature=output,
        parameter=parameter,
        value=value,
        signal_slope=slope,
        signal=signal,
        noise_var=noise,
        snr=signal * signal / noise,
        i_ps=i_ps,
        enhancement=_classical_bound(i_ps, noise, slope),
    )


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------


def su2_snr(T: float, i_ps: float, depth: float) -> float:
    """Linear-interferometer SNR 4 T i_ps depth^2 (same form for both
    modulations)."""
    return 4.0 * T * i_ps * depth * depth


def split_snr(T3: float, i_ps: float, delta: float, epsilon: float) -> tuple[float, float]:
    """Joint classical measurement through an output splitter: the two
    channels share the probe resource."""
    return (4.0 * T3 * i_ps * delta * delta, 4.0 * (1.0 - T3) * i_ps * epsilon * epsilon)


def sui_output_noise(gain1: PaGain, gain2: PaGain, phi: float) -> float:
    """Output quadrature variance of the non-degenerate amplifier pair,
    minimal at phi = pi."""
    G1, g1, G2, g2 = gain1.G, gain1.g, gain2.G, gain2.g
    return (G1 * G1 + g1 * g1) * (G2 * G2 + g2 * g2) + 4.0 * G1 * G2 * g1 * g2 * math.cos(phi)


def sui_snr_phase(
    gain1: PaGain, gain2: PaGain, i_ps: float, delta: float, phi: float = math.pi
) -> float:
    """Phase channel of the nested amplifier interferometer: signal slope
    2 g2 sqrt(i_ps) over the amplifier-pair noise."""
    g2 = gain2.g
    return 4.0 * g2 * g2 * i_ps * delta * delta / sui_output_noise(gain1, gain2, phi)


def sui_snr_amplitude(
    gain1: PaGain, gain2: PaGain, i_ps: float, epsilon: float, phi: float = math.pi
) -> float:
    """Amplitude channel: slope 2 G2 sqrt(i_ps) over the same noise."""
    G2 = gain2.G
    return 4.0 * G2 * G2 * i_ps * epsilon * epsilon / sui_output_noise(gain1, gain2, phi)


def sui_snr_optimum(gain1: PaGain, i_ps: float, depth: float) -> float:
    """Large-second-gain limit of both channels: 2 i_ps depth^2 (G1 + g1)^2."""
    amp = gain1.G + gain1.g
    return 2.0 * i_ps * depth * depth * amp * amp


def dsui_output_noise(gain1: PaGain, gain2: PaGain) -> tuple[float, float]:
    """Variances of the two monitored quadratures of the degenerate pair,
    general in the amplifier phases (difference Delta = theta1 - theta2)."""
    G1, g1, G2, g2 = gain1.G, gain1.g, gain2.G, gain2.g
    delta_angle = gain1.phase - gain2.phase
    plus = abs(G1 + g1 * cmath.exp(-1j * delta_angle)) ** 2
    minus = abs(G1 - g1 * cmath.exp(-1j * delta_angle)) ** 2
    return ((G2 + g2) ** 2 * plus, (G2 - g2) ** 2 * minus)


def dsui_snr(
    gain1: PaGain, i_ps: float, delta: float, epsilon: float, theta2: float
) -> tuple[float, float]:
    """Degenerate-pair SNRs at dark fringe: the amplified mixture gains
    (G1 + g1)^2, the de-amplified one loses (G1 - g1)^2; independent of the
    second gain."""
    mix = mixture_angles(theta2, delta, epsilon)
    up = (gain1.G + gain1.g) ** 2
    down = (gain1.G - gain1.g) ** 2
    return (
        4.0 * i_ps * mix.gamma_minus**2 * up,
        4.0 * i_ps * mix.gamma_plus**2 * down,
    )


_CLOSED_FORMS = {
    "su2": su2_snr,
    "split": split_snr,
    "sui_noise": sui_output_noise,
    "sui_snr_phase": sui_snr_phase,
    "sui_snr_amplitude": sui_snr_amplitude,
    "sui_optimum": sui_snr_optimum,
    "dsui_noise": dsui_output_noise,
    "dsui_snr": dsui_snr,
}


def closed_form(name: str, **params):
    """Evaluate one of the named closed forms; unknown names or missing
    parameters raise a validation error."""
    try:
        fn = _CLOSED_FORMS[name]
    except KeyError:
        raise ValidationError(
            f"unknown closed form {name!r}; available: {sorted(_CLOSED_FORMS)}"
        ) from None
    try:
        return fn(**params)
    except TypeError as exc:
        raise ValidationError(f"bad parameters for closed form {name!r}: {exc}") from None


# ---------------------------------------------------------------------------
# resource accounting and loss tolerance
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ResourceSummary:
    """Joint-measurement enhancement and quantum-resource bookkeeping."""

    enhancement_delta: float
    enhancement_epsilon: float
    resource_total: float
    resource_bound: float


def enhancement_and_resources(
    report_delta: SnrReport, report_epsilon: SnrReport, gain1: PaGain
) -> ResourceSummary:
    """Per-channel enhancement over the classical bound plus the shared
    resource total SNR_d/d^2 + SNR_e/e^2, to compare against
    4 i_ps (G1 + g1)^2."""
    if report_delta.value == 0.0 or report_epsilon.value == 0.0:
        raise ValidationError("resource accounting needs nonzero modulation depths")
    i_ps = report_delta.i_ps
    total = (
        report_delta.snr / report_delta.value**2
        + report_epsilon.snr / report_epsilon.value**2
    )
    amp = gain1.G + gain1.g
    return ResourceSummary(
        enhancement_delta=report_delta.enhancement,
        enhancement_epsilon=report_epsilon.enhancement,
        resource_total=total,
        resource_bound=4.0 * i_ps * amp * amp,
    )


@dataclass(frozen=True)
class LossTolerancePoint:
    g2: float
    lossless_noise: float
    retention_numeric: float
    retention_formula: float


def loss_tolerance_scan(
    spec: CircuitSpec, eta: float, g2_values, output: str | None = None
) -> list[LossTolerancePoint]:
    """SNR retention under detection loss eta for a range of second-amplifier
    gains: retention = eta V / (eta V + 1 - eta) with V the lossless output
    noise, approaching 1 once the amplified noise dwarfs the injected vacuum."""
    if not 0.0 < eta <= 1.0:
        raise ValidationError(f"detection efficiency must lie in (0, 1], got {eta}")
    base = replace(spec, detection_loss=1.0)
    label = output or build_circuit(base).monitors[0].label
    points = []
    for g2 in g2_values:
        gains = (spec.gains[0], PaGain(float(g2), spec.gains[1].phase))
        lossless = replace(base, gains=gains)
        lossy = replace(lossless, detection_loss=eta)
        rep_free = channel_report(lossless, label)
        rep_loss = channel_report(lossy, label)
        numeric = (
            (rep_loss.signal_slope**2 / rep_loss.noise_var)
            / (rep_free.signal_slope**2 / rep_free.noise_var)
        )
        noise = rep_free.noise_var
        formula = eta * noise / (eta * noise + 1.0 - eta)
        points.append(LossTolerancePoint(float(g2), noise, numeric, formula))
    return points
