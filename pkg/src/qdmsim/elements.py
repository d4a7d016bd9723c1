"""Gaussian maps for the optical elements used by the interferometer circuits.

Sign conventions for the beam splitter follow the first-splitter row used
throughout the circuit assembly: A = sqrt(T) a + sqrt(R) b and
B = sqrt(T) b - sqrt(R) a.  The second splitter of a Mach-Zehnder is the
same element applied with its two modes swapped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ValidationError
from .gaussian import GaussianMap


@dataclass(frozen=True)
class SplitterSpec:
    """Beam-splitter transmissivity; reflectivity is derived as 1 - T."""

    T: float

    def __post_init__(self):
        if not 0.0 <= self.T <= 1.0:
            raise ValidationError(f"transmissivity must lie in [0, 1], got {self.T}")

    @property
    def R(self) -> float:
        return 1.0 - self.T


@dataclass(frozen=True)
class PaGain:
    """Parametric amplifier gain G >= 1 with g = sqrt(G^2 - 1).

    ``phase`` is the pump phase for the non-degenerate amplifier and the
    squeezing angle theta for the degenerate one.
    """

    G: float
    phase: float = 0.0

    def __post_init__(self):
        if self.G < 1.0:
            raise ValidationError(f"amplifier gain must be >= 1, got {self.G}")

    @property
    def g(self) -> float:
        return math.sqrt(self.G * self.G - 1.0)


def beam_splitter(spec: SplitterSpec) -> GaussianMap:
    """Two-mode splitter: out0 = sqrt(T) in0 + sqrt(R) in1, out1 = sqrt(T) in1 - sqrt(R) in0."""
    t = math.sqrt(spec.T)
    r = math.sqrt(spec.R)
    eye = np.eye(2)
    linear = np.block([[t * eye, r * eye], [-r * eye, t * eye]])
    return GaussianMap(linear, np.zeros((4, 4)), np.zeros(4))


def phase_shifter(phi: float) -> GaussianMap:
    """Single-mode rotation a -> a e^{i phi}."""
    c, s = math.cos(phi), math.sin(phi)
    linear = np.array([[c, -s], [s, c]])
    return GaussianMap(linear, np.zeros((2, 2)), np.zeros(2))


def loss_channel(transmission: float) -> GaussianMap:
    """Single-mode loss: mean -> sqrt(t) mean, cov -> t cov + (1 - t) I.

    Serves both for detection loss and for exact amplitude modulation with
    transmission e^{-2 eps}, where the replaced noise is the vacuum entering
    through the unused splitter port.
    """
    if not 0.0 < transmission <= 1.0:
        raise ValidationError(f"transmission must lie in (0, 1], got {transmission}")
    linear = math.sqrt(transmission) * np.eye(2)
    noise = (1.0 - transmission) * np.eye(2)
    return GaussianMap(linear, noise, np.zeros(2))


def two_mode_squeezer(gain: PaGain) -> GaussianMap:
    """Non-degenerate amplifier: out_i = G in_i + g e^{i phase} in_j† (j != i)."""
    G, g, phi = gain.G, gain.g, gain.phase
    c, s = math.cos(phi), math.sin(phi)
    # quadrature image of g e^{i phi} (partner mode, conjugated): a reflection
    coupling = g * np.array([[c, s], [s, -c]])
    eye = np.eye(2)
    linear = np.block([[G * eye, coupling], [coupling, G * eye]])
    return GaussianMap(linear, np.zeros((4, 4)), np.zeros(4))


def single_mode_squeezer(gain: PaGain) -> GaussianMap:
    """Degenerate amplifier: out = G in + g e^{i theta} in†.

    Amplifies the quadrature along theta/2 by (G + g) and de-amplifies the
    orthogonal one by (G - g).
    """
    G, g, theta = gain.G, gain.g, gain.phase
    c, s = math.cos(theta), math.sin(theta)
    linear = np.array([[G + g * c, g * s], [g * s, G - g * c]])
    return GaussianMap(linear, np.zeros((2, 2)), np.zeros(2))
