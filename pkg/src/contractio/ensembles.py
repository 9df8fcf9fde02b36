"""Seeded random states, Haar unitaries and pair distributions.

Samplers take an explicit ``numpy.random.Generator``. Reproducible parallel
work goes through :class:`SeedSpec`, which derives an independent
counter-based stream for every ``(task, index)`` so the value of sample ``i``
never depends on how samples are scheduled across workers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError

__all__ = [
    "HaarPure",
    "InducedMixed",
    "Fixed",
    "ComputationalBasisUniform",
    "EnsembleSpec",
    "Product",
    "ProductDistinct",
    "VsMaximallyMixed",
    "VsFixed",
    "PairDistribution",
    "PairSample",
    "SeedSpec",
    "MAX_REDRAWS",
    "COLLISION_TOL",
    "ensemble_dim",
    "pair_dim",
    "ginibre",
    "sample_haar_vector",
    "sample_haar_pure",
    "sample_induced_mixed",
    "sample_haar_unitary",
    "sample_state",
    "sample_pair",
]

# ProductDistinct gives up after this many redraws and reports the sample as skipped.
MAX_REDRAWS = 100
# Two states closer than this in Frobenius norm count as a collision.
COLLISION_TOL = 1e-12


def _check_dim(d: int, what: str = "d") -> int:
    if int(d) != d or d < 1:
        raise DomainError(f"{what} must be a positive integer, got {d!r}")
    return int(d)


@dataclass(frozen=True)
class HaarPure:
    """Unitarily invariant measure on pure states of ``C^d``."""

    d: int

    def __post_init__(self) -> None:
        _check_dim(self.d)


@dataclass(frozen=True)
class InducedMixed:
    """Partial trace of a Haar pure state on ``C^d ⊗ C^r``; ``r = d`` is Hilbert–Schmidt."""

    d: int
    r: int

    def __post_init__(self) -> None:
        _check_dim(self.d)
        _check_dim(self.r, "r")


@dataclass(frozen=True, eq=False)
class Fixed:
    """Point mass on one density matrix."""

    state: np.ndarray

    def __post_init__(self) -> None:
        s = np.asarray(self.state, dtype=complex)
        if s.ndim != 2 or s.shape[0] != s.shape[1]:
            raise DomainError(f"Fixed state must be square, got shape {s.shape}")
        if abs(np.trace(s) - 1.0) > 1e-10:
            raise DomainError("Fixed state must have unit trace")
        if np.max(np.abs(s - s.conj().T)) > 1e-10 or np.linalg.eigvalsh(0.5 * (s + s.conj().T))[0] < -1e-10:
            raise DomainError("Fixed state must be positive semidefinite")
        object.__setattr__(self, "state", s)

    @property
    def d(self) -> int:
        return self.state.shape[0]


@dataclass(frozen=True)
class ComputationalBasisUniform:
    """Uniform choice of one computational basis projector ``|k⟩⟨k|``."""

    d: int

    def __post_init__(self) -> None:
        _check_dim(self.d)


EnsembleSpec = Union[HaarPure, InducedMixed, Fixed, ComputationalBasisUniform]


@dataclass(frozen=True)
class Product:
    """Independent draws ``ρ ~ first`` and ``σ ~ second``."""

    first: EnsembleSpec
    second: EnsembleSpec

    def __post_init__(self) -> None:
        if ensemble_dim(self.first) != ensemble_dim(self.second):
            raise DomainError("both marginals must act on the same dimension")


@dataclass(frozen=True)
class ProductDistinct:
    """Two independent draws from ``ensemble`` conditioned on being different."""

    ensemble: EnsembleSpec


@dataclass(frozen=True)
class VsMaximallyMixed:
    """``ρ ~ ensemble`` paired with ``σ = I/d``."""

    ensemble: EnsembleSpec


@dataclass(frozen=True, eq=False)
class VsFixed:
    """``ρ ~ ensemble`` paired with a fixed ``σ``."""

    ensemble: EnsembleSpec
    state: np.ndarray

    def __post_init__(self) -> None:
        fixed = Fixed(self.state)
        object.__setattr__(self, "state", fixed.state)
        if ensemble_dim(self.ensemble) != fixed.d:
            raise DomainError("both marginals must act on the same dimension")


PairDistribution = Union[Product, ProductDistinct, VsMaximallyMixed, VsFixed]


@dataclass(frozen=True, eq=False)
class PairSample:
    """One draw from a pair distribution.

    ``collision`` is set when the returned states coincide (within
    ``COLLISION_TOL``); ``rejections`` counts redraws spent avoiding that.
    """

    rho: np.ndarray
    sigma: np.ndarray
    collision: bool = False
    rejections: int = 0


@dataclass(frozen=True)
class SeedSpec:
    """Master seed plus the stream rule ``(master_seed, task, index)``."""

    master_seed: int = 0

    def __post_init__(self) -> None:
        if int(self.master_seed) != self.master_seed or not 0 <= self.master_seed < 2**64:
            raise DomainError("master_seed must be an integer in [0, 2**64)")

    def rng(self, task: int, index: int) -> np.random.Generator:
        """Generator for sample ``index`` of ``task``; Philox keyed by the triple."""
        ss = np.random.SeedSequence([int(self.master_seed), int(task), int(index)])
        return np.random.Generator(np.random.Philox(ss))


def ensemble_dim(ens: EnsembleSpec) -> int:
    return int(ens.d)


def pair_dim(dist: PairDistribution) -> int:
    if isinstance(dist, Product):
        return ensemble_dim(dist.first)
    return ensemble_dim(dist.ensemble)


def ginibre(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    """Matrix of i.i.d. standard complex Gaussians, ``E|g|² = 1``."""
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2.0)


def sample_haar_vector(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unit vector in ``C^d``."""
    g = ginibre(rng, _check_dim(d), 1)[:, 0]
    return g / np.linalg.norm(g)


def sample_haar_pure(d: int, rng: np.random.Generator) -> np.ndarray:
    """Projector onto a Haar-random unit vector."""
    psi = sample_haar_vector(d, rng)
    return np.outer(psi, psi.conj())


def sample_induced_mixed(d: int, r: int, rng: np.random.Generator) -> np.ndarray:
    """``G G† / Tr(G G†)`` with ``G`` a ``d × r`` Ginibre matrix."""
    g = ginibre(rng, _check_dim(d), _check_dim(r, "r"))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def sample_haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar unitary from QR of a Ginibre matrix with the diagonal phase fix."""
    d = _check_dim(d)
    q, r = np.linalg.qr(ginibre(rng, d, d))
    diag = np.diagonal(r)
    phases = np.where(np.abs(diag) > 0, diag / np.abs(diag), 1.0)
    return q * phases


def sample_state(ens: EnsembleSpec, rng: np.random.Generator) -> np.ndarray:
    """Draw one density matrix from ``ens``."""
    if isinstance(ens, HaarPure):
        return sample_haar_pure(ens.d, rng)
    if isinstance(ens, InducedMixed):
        return sample_induced_mixed(ens.d, ens.r, rng)
    if isinstance(ens, Fixed):
        return ens.state.copy()
    if isinstance(ens, ComputationalBasisUniform):
        k = int(rng.integers(ens.d))
        out = np.zeros((ens.d, ens.d), dtype=complex)
        out[k, k] = 1.0
        return out
    raise TypeError(f"unknown ensemble {ens!r}")


def _coincide(a: np.ndarray, b: np.ndarray) -> bool:
    return bool(np.linalg.norm(a - b) <= COLLISION_TOL)


def sample_pair(dist: PairDistribution, rng: np.random.Generator) -> PairSample:
    """Draw ``(ρ, σ)`` from a pair distribution.

    ``ProductDistinct`` redraws ``σ`` while it coincides with ``ρ``, at most
    ``MAX_REDRAWS`` times; if it still coincides the sample carries
    ``collision=True`` and the caller should skip it.
    """
    if isinstance(dist, Product):
        rho = sample_state(dist.first, rng)
        sigma = sample_state(dist.second, rng)
        return PairSample(rho, sigma, collision=_coincide(rho, sigma))
    if isinstance(dist, ProductDistinct):
        rho = sample_state(dist.ensemble, rng)
        sigma = sample_state(dist.ensemble, rng)
        rejections = 0
        while _coincide(rho, sigma) and rejections < MAX_REDRAWS:
            rejections += 1
            sigma = sample_state(dist.ensemble, rng)
        return PairSample(rho, sigma, collision=_coincide(rho, sigma), rejections=rejections)
    if isinstance(dist, VsMaximallyMixed):
        rho = sample_state(dist.ensemble, rng)
        d = rho.shape[0]
        sigma = np.eye(d, dtype=complex) / d
        return PairSample(rho, sigma, collision=_coincide(rho, sigma))
    if isinstance(dist, VsFixed):
        rho = sample_state(dist.ensemble, rng)
        sigma = dist.state.copy()
        return PairSample(rho, sigma, collision=_coincide(rho, sigma))
    raise TypeError(f"unknown pair distribution {dist!r}")
