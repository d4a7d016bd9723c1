"""Shared helpers: random-circuit generation and full-register map embedding."""

import math

import numpy as np

import qdmsim as q


def embed_map(gmap, modes, n_modes):
    """Lift a small map to the full register (identity elsewhere)."""
    idx = np.array([2 * m + k for m in modes for k in (0, 1)])
    dim = 2 * n_modes
    linear = np.eye(dim)
    linear[np.ix_(idx, idx)] = gmap.linear
    noise = np.zeros((dim, dim))
    noise[np.ix_(idx, idx)] = gmap.noise
    disp = np.zeros(dim)
    disp[idx] = gmap.displacement
    return q.GaussianMap(linear, noise, disp)


def random_element(rng, n_modes):
    """One random element with its target modes, drawn over all kinds."""
    kind = rng.integers(0, 6)
    mode = int(rng.integers(0, n_modes))
    if kind == 0:
        return q.phase_shifter(rng.uniform(0, 2 * math.pi)), (mode,)
    if kind == 1:
        return q.loss_channel(rng.uniform(0.2, 1.0)), (mode,)
    if kind == 2:
        gain = q.PaGain(rng.uniform(1.0, 2.5), rng.uniform(0, 2 * math.pi))
        return q.single_mode_squeezer(gain), (mode,)
    if kind == 3:
        return q.displacement_map(complex(rng.normal(), rng.normal())), (mode,)
    other = int(rng.integers(0, n_modes - 1))
    other = other if other < mode else other + 1
    if kind == 4:
        return q.beam_splitter(q.SplitterSpec(rng.uniform(0, 1))), (mode, other)
    gain = q.PaGain(rng.uniform(1.0, 2.0), rng.uniform(0, 2 * math.pi))
    return q.two_mode_squeezer(gain), (mode, other)


def random_state(rng, n_modes, depth=6):
    state = q.vacuum_state(n_modes)
    for _ in range(depth):
        gmap, modes = random_element(rng, n_modes)
        state = q.apply_map(state, gmap, modes)
    return state
