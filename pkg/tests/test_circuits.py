from __future__ import annotations

import math

import numpy as np
import pytest

from contractio.bounds import circuit_lower
from contractio.channels import amplitude_damping, dephasing, depolarizing, global_depolarizing, pauli_channel
from contractio.circuits import (
    BRICKWORK_2Q_HAAR,
    HAAR_GLOBAL,
    PAIR,
    RANDOM_PAULI,
    VS_MIXED,
    CircuitConfig,
    avg_contraction_vs_depth,
    run_noisy_circuit,
)
from contractio.ensembles import ComputationalBasisUniform, HaarPure, SeedSpec
from contractio.errors import ConfigError, InvalidShapeError


def _cfg(n=3, depth=2, layer=HAAR_GLOBAL, noise=None, samples=30, seed=0, **kw):
    noise = depolarizing(0.1) if noise is None else noise
    return CircuitConfig(n, depth, layer, noise, n_samples=samples, seed=SeedSpec(seed), **kw)


@pytest.mark.parametrize("layer", [HAAR_GLOBAL, RANDOM_PAULI, BRICKWORK_2Q_HAAR])
@pytest.mark.parametrize("noise", [depolarizing(0.2), dephasing(0.5), pauli_channel(0.1, 0.3)], ids=lambda c: c.label)
def test_fixed_point_and_depth_monotonicity(layer, noise):
    rows = avg_contraction_vs_depth(_cfg(3, 3, layer, noise, samples=40), [0, 1, 2, 3], (PAIR, VS_MIXED))
    for mode in (PAIR, VS_MIXED):
        series = [r for r in rows if r.mode == mode]
        assert series[0].mean == pytest.approx(1.0)
        for a, b in zip(series, series[1:]):
            assert b.mean <= a.mean + 3 * math.hypot(a.stderr, b.stderr) + 1e-12
    assert max(r.max_fixed_point_residual for r in rows) <= 1e-9


def test_global_noise_on_all_qubits():
    rows = avg_contraction_vs_depth(_cfg(2, 2, RANDOM_PAULI, global_depolarizing(0.3, 2)), [1, 2], (PAIR,))
    # Paulis commute with global depolarizing, so the ratio is exactly (1-p)^D.
    assert [r.mean for r in rows] == pytest.approx([0.7, 0.49], abs=1e-12)


@pytest.mark.parametrize("n", [4, 6, 8])
@pytest.mark.parametrize("p", [0.01, 0.04])
def test_lower_bound_respected(n, p):
    cfg = _cfg(n, 3, HAAR_GLOBAL, depolarizing(p), samples=12 if n == 8 else 30, seed=n)
    for row in avg_contraction_vs_depth(cfg, [1, 2, 3], (PAIR,)):
        bound = circuit_lower(depolarizing(p), n, row.depth, 0.1, 0.05).value
        if bound > 0:
            assert row.mean >= bound - 3 * row.stderr


def test_layer_ensembles_agree_at_first_layer():
    # A Haar input makes one layer's law irrelevant; deeper circuits differ.
    means = {}
    for layer in (HAAR_GLOBAL, RANDOM_PAULI):
        (row,) = avg_contraction_vs_depth(_cfg(4, 1, layer, depolarizing(0.2), samples=200, seed=1), [1], (VS_MIXED,))
        means[layer] = row
    a, b = means[HAAR_GLOBAL], means[RANDOM_PAULI]
    assert abs(a.mean - b.mean) <= 3 * math.hypot(a.stderr, b.stderr)


def test_deterministic_across_threads():
    cfg = _cfg(3, 2, BRICKWORK_2Q_HAAR, samples=16, seed=5)
    assert avg_contraction_vs_depth(cfg, [1, 2], threads=1) == avg_contraction_vs_depth(cfg, [1, 2], threads=4)


def test_run_noisy_circuit_keeps_state_valid():
    cfg = _cfg(3, 2, RANDOM_PAULI)
    rho = np.zeros((8, 8), dtype=complex)
    rho[0, 0] = 1
    out = run_noisy_circuit(cfg, rho, SeedSpec(0).rng(0, 0))
    assert np.trace(out).real == pytest.approx(1.0)
    assert np.min(np.linalg.eigvalsh(out)) >= -1e-12
    with pytest.raises(InvalidShapeError):
        run_noisy_circuit(cfg, np.eye(4) / 4, SeedSpec(0).rng(0, 0))


def test_computational_inputs_and_noiseless_circuit():
    cfg = CircuitConfig(2, 2, HAAR_GLOBAL, None, ComputationalBasisUniform(4), n_samples=10)
    rows = avg_contraction_vs_depth(cfg, [2])
    assert all(r.mean == pytest.approx(1.0) for r in rows)


def test_config_validation():
    with pytest.raises(ConfigError):
        _cfg(noise=amplitude_damping(0.2))
    with pytest.raises(ConfigError):
        _cfg(n=13)
    with pytest.raises(ConfigError):
        _cfg(layer="nope")
    with pytest.raises(ConfigError):
        _cfg(input_ensemble=HaarPure(4))
    with pytest.raises(ConfigError):
        avg_contraction_vs_depth(_cfg(), [1], ("bogus",))
