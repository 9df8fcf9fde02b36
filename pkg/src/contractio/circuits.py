"""Density-matrix simulation of noisy layered random circuits.

A circuit of depth ``D`` applies ``D`` rounds of (fresh random layer
unitary, then unital noise). Local noise is applied site by site by tensor
reshaping, so the expectation over Kraus branches is exact and only the
unitaries and input states are sampled.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .channels import PAULI_I, PAULI_X, PAULI_Y, PAULI_Z, KrausChannel, apply, apply_on_sites, is_unital
from .divergences import trace_distance
from .ensembles import (
    ComputationalBasisUniform,
    HaarPure,
    ProductDistinct,
    SeedSpec,
    sample_haar_unitary,
    sample_pair,
    sample_state,
)
from .errors import ConfigError, InvalidShapeError

__all__ = [
    "HAAR_GLOBAL",
    "RANDOM_PAULI",
    "BRICKWORK_2Q_HAAR",
    "LAYER_ENSEMBLES",
    "MAX_QUBITS",
    "PAIR",
    "VS_MIXED",
    "CircuitConfig",
    "CircuitSample",
    "DepthRow",
    "run_noisy_circuit",
    "evolve_states",
    "avg_contraction_vs_depth",
]

HAAR_GLOBAL = "haar_global"
RANDOM_PAULI = "random_pauli"
BRICKWORK_2Q_HAAR = "brickwork_2q_haar"
LAYER_ENSEMBLES = (HAAR_GLOBAL, RANDOM_PAULI, BRICKWORK_2Q_HAAR)
MAX_QUBITS = 12
PAIR = "pair"
VS_MIXED = "vs_mixed"

_PAULIS = np.array([PAULI_I, PAULI_X, PAULI_Y, PAULI_Z])


@dataclass(frozen=True, eq=False)
class CircuitConfig:
    """Noisy circuit ensemble.

    ``noise`` is either a qubit channel applied to every site or a channel on
    all ``2^n_qubits`` dimensions. It must be unital to ``1e-10``.
    """

    n_qubits: int
    depth: int
    layer_ensemble: str = HAAR_GLOBAL
    noise: Optional[KrausChannel] = None
    input_ensemble: Union[HaarPure, ComputationalBasisUniform, None] = None
    n_samples: int = 100
    seed: SeedSpec = SeedSpec(0)

    def __post_init__(self) -> None:
        n = self.n_qubits
        if int(n) != n or not 1 <= n <= MAX_QUBITS:
            raise ConfigError(f"n_qubits must be an integer in [1, {MAX_QUBITS}], got {n!r}")
        if int(self.depth) != self.depth or self.depth < 0:
            raise ConfigError(f"depth must be a non-negative integer, got {self.depth!r}")
        if self.layer_ensemble not in LAYER_ENSEMBLES:
            raise ConfigError(f"unknown layer ensemble {self.layer_ensemble!r}; use one of {LAYER_ENSEMBLES}")
        if int(self.n_samples) != self.n_samples or self.n_samples < 1:
            raise ConfigError("n_samples must be a positive integer")
        d = 2**n
        if self.noise is not None:
            if self.noise.d_in != self.noise.d_out or self.noise.d_in not in (2, d):
                raise ConfigError(f"noise must act on one qubit or on all {n} qubits")
            if not is_unital(self.noise):
                raise ConfigError("noise must be unital")
        ens = self.input_ensemble if self.input_ensemble is not None else HaarPure(d)
        if not isinstance(ens, (HaarPure, ComputationalBasisUniform)) or ens.d != d:
            raise ConfigError(f"input ensemble must be HaarPure or ComputationalBasisUniform on dimension {d}")
        object.__setattr__(self, "input_ensemble", ens)

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    @property
    def local_noise(self) -> bool:
        return self.noise is not None and self.noise.d_in == 2 and self.n_qubits > 1


@dataclass(frozen=True)
class CircuitSample:
    ratio: float
    fixed_point_residual: float


@dataclass(frozen=True)
class DepthRow:
    """One output row; ``max_fixed_point_residual`` is ``max ‖E(I/d) − I/d‖₁`` over samples."""

    depth: int
    mode: str
    mean: float
    stderr: float
    n_samples: int
    max_fixed_point_residual: float


def _apply_layer(cfg: CircuitConfig, states: list[np.ndarray], rng: np.random.Generator, layer_index: int) -> list[np.ndarray]:
    n = cfg.n_qubits
    dims = [2] * n
    if cfg.layer_ensemble == HAAR_GLOBAL:
        u = sample_haar_unitary(cfg.dim, rng)
        return [u @ s @ u.conj().T for s in states]
    if cfg.layer_ensemble == RANDOM_PAULI:
        picks = rng.integers(4, size=n)
        out = []
        for s in states:
            for site, k in enumerate(picks):
                if k:
                    s, _ = apply_on_sites(s, dims, _PAULIS[k], [site])
            out.append(s)
        return out
    start = layer_index % 2
    gates = [(i, sample_haar_unitary(4, rng)) for i in range(start, n - 1, 2)]
    out = []
    for s in states:
        for i, g in gates:
            s, _ = apply_on_sites(s, dims, g, [i, i + 1])
        out.append(s)
    return out


def _apply_noise(cfg: CircuitConfig, s: np.ndarray) -> np.ndarray:
    if cfg.noise is None:
        return s
    if cfg.local_noise:
        dims = [2] * cfg.n_qubits
        for site in range(cfg.n_qubits):
            s, _ = apply_on_sites(s, dims, cfg.noise.kraus, [site])
        return 0.5 * (s + s.conj().T)
    return apply(cfg.noise, s)


def evolve_states(
    cfg: CircuitConfig,
    states: Sequence[np.ndarray],
    rng: np.random.Generator,
    depth: Optional[int] = None,
) -> list[np.ndarray]:
    """Send every state through one sampled circuit (the same unitaries for all)."""
    depth = cfg.depth if depth is None else int(depth)
    out = []
    for s in states:
        m = np.asarray(s, dtype=complex)
        if m.shape != (cfg.dim, cfg.dim):
            raise InvalidShapeError(f"states must be {cfg.dim}x{cfg.dim}, got {m.shape}")
        out.append(m)
    for layer in range(depth):
        out = _apply_layer(cfg, out, rng, layer)
        out = [_apply_noise(cfg, s) for s in out]
    return out


def run_noisy_circuit(
    cfg: CircuitConfig,
    rho0: np.ndarray,
    rng: np.random.Generator,
    depth: Optional[int] = None,
) -> np.ndarray:
    """Output of one sampled noisy circuit on ``rho0``."""
    return evolve_states(cfg, [rho0], rng, depth)[0]


def _one(cfg: CircuitConfig, depth: int, mode: str, rng: np.random.Generator) -> CircuitSample:
    d = cfg.dim
    mixed = np.eye(d, dtype=complex) / d
    if mode == PAIR:
        pair = sample_pair(ProductDistinct(cfg.input_ensemble), rng)
        if pair.collision:
            return CircuitSample(math.nan, 0.0)
        a, b, m = evolve_states(cfg, [pair.rho, pair.sigma, mixed], rng, depth)
        ratio = trace_distance(a, b) / trace_distance(pair.rho, pair.sigma)
    else:
        rho = sample_state(cfg.input_ensemble, rng)
        a, m = evolve_states(cfg, [rho, mixed], rng, depth)
        ratio = trace_distance(a, mixed) / (1.0 - 1.0 / d)
    residual = 2.0 * trace_distance(m, mixed)
    return CircuitSample(ratio, residual)


def avg_contraction_vs_depth(
    cfg: CircuitConfig,
    depths: Sequence[int],
    modes: Sequence[str] = (PAIR, VS_MIXED),
    threads: int = 1,
) -> list[DepthRow]:
    """Mean trace-distance contraction per depth and mode.

    Pair mode shares one circuit between the two inputs of a sample. The
    vs-mixed mode uses the exact denominator ``1 − 2⁻ⁿ``. Sample ``i`` at
    depth index ``k`` and mode index ``j`` uses stream ``(2k + j, i)``.
    """
    for m in modes:
        if m not in (PAIR, VS_MIXED):
            raise ConfigError(f"unknown mode {m!r}")
    rows = []
    for k, depth in enumerate(depths):
        if int(depth) != depth or depth < 0:
            raise ConfigError(f"depths must be non-negative integers, got {depth!r}")
        for j, mode in enumerate(modes):
            task = 2 * k + (0 if mode == PAIR else 1)

            def job(i: int, depth=int(depth), mode=mode, task=task) -> CircuitSample:
                return _one(cfg, depth, mode, cfg.seed.rng(task, i))

            if threads > 1:
                with ThreadPoolExecutor(max_workers=threads) as pool:
                    samples = list(pool.map(job, range(cfg.n_samples)))
            else:
                samples = [job(i) for i in range(cfg.n_samples)]
            vals = np.array([s.ratio for s in samples], dtype=float)
            vals = vals[~np.isnan(vals)]
            se = float(np.std(vals, ddof=1) / math.sqrt(vals.size)) if vals.size > 1 else 0.0
            rows.append(
                DepthRow(
                    int(depth),
                    mode,
                    float(np.mean(vals)) if vals.size else math.nan,
                    se,
                    int(vals.size),
                    max(s.fixed_point_residual for s in samples),
                )
            )
    return rows
