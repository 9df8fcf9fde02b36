"""Seeded Monte Carlo estimation of moments of contraction.

For a channel ``T``, divergence ``D`` and pair law ``ν`` the estimators
here target ``η_p = E[(D(T(ρ)‖T(σ))/D(ρ‖σ))^p]^{1/p}``. Sample ``i`` of a
request draws from its own stream ``seed.rng(task, i)``, ratios are stored by
index and reduced in index order, so the output is bit-identical for any
worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .channels import ChannelLike, apply_channel, choi_functionals
from .divergences import (
    ChiSquaredClosed,
    DivergenceSpec,
    FIntegral,
    HockeyStick,
    MaxRelativeEntropy,
    RelativeEntropy,
    TraceDistance,
    divergence,
)
from .ensembles import (
    ComputationalBasisUniform,
    HaarPure,
    InducedMixed,
    PairDistribution,
    Product,
    SeedSpec,
    VsMaximallyMixed,
    pair_dim,
    sample_pair,
)
from .errors import DomainError, EmptyEstimateError, InvalidShapeError

__all__ = [
    "DPI_TOL",
    "SAMPLED",
    "EXACT_WHEN_AVAILABLE",
    "MomentRequest",
    "MomentEstimate",
    "SecondMomentEstimate",
    "default_samples",
    "denominator_exact",
    "estimate_moments",
    "estimate_2norm_second_moment",
    "second_moment_target",
]

# Ratios above 1 by more than this are counted as data-processing violations.
DPI_TOL = 1e-8
SAMPLED = "sampled"
EXACT_WHEN_AVAILABLE = "exact-when-available"


def default_samples(n: int) -> int:
    """Sample count per qubit number: 2100 for n ≤ 3, 600 for n ≤ 6, else 100."""
    if n <= 3:
        return 2100
    if n <= 6:
        return 600
    return 100


@dataclass(frozen=True, eq=False)
class MomentRequest:
    """Everything that determines one moment estimate.

    ``task`` selects the seed stream, so two requests that differ only in
    ``task`` draw independent samples.
    """

    channel: ChannelLike
    divergence: DivergenceSpec
    pairs: PairDistribution
    p_list: Sequence[float] = (1.0,)
    n_samples: int = 1000
    seed: SeedSpec = SeedSpec(0)
    denominator_mode: str = SAMPLED
    task: int = 0

    def __post_init__(self) -> None:
        if int(self.n_samples) != self.n_samples or self.n_samples < 1:
            raise DomainError(f"n_samples must be a positive integer, got {self.n_samples!r}")
        ps = tuple(float(p) for p in self.p_list)
        if not ps or any(not (p >= 1.0 and math.isfinite(p)) for p in ps):
            raise DomainError(f"every p must be a finite real ≥ 1, got {self.p_list!r}")
        object.__setattr__(self, "p_list", ps)
        if self.denominator_mode not in (SAMPLED, EXACT_WHEN_AVAILABLE):
            raise DomainError(f"unknown denominator mode {self.denominator_mode!r}")


@dataclass(frozen=True)
class MomentEstimate:
    """Estimate of ``η_p`` with its delta-method standard error."""

    p: float
    mean: float
    eta_p: float
    stderr: float
    n_used: int
    n_skipped_denominator: int
    n_collisions: int
    n_dpi_violations: int


@dataclass(frozen=True)
class SecondMomentEstimate:
    """Mean of ``‖T(ρ)−T(σ)‖₂²/‖ρ−σ‖₂²`` next to its exact value."""

    mean: float
    stderr: float
    n_used: int
    exact: float


@dataclass(frozen=True)
class _Sample:
    ratio: float  # nan when skipped
    skipped_denominator: bool
    collision: bool
    dpi_violation: bool


def _pure_ensemble(dist: PairDistribution) -> bool:
    return isinstance(dist, VsMaximallyMixed) and isinstance(
        dist.ensemble, (HaarPure, ComputationalBasisUniform)
    )


def denominator_exact(dist: PairDistribution, div: DivergenceSpec) -> Optional[float]:
    """Analytic ``D(ρ‖I/d)`` for pure ``ρ`` paired with the maximally mixed state.

    Returns ``None`` unless ``dist`` pairs a pure-state ensemble with ``I/d``
    and the divergence has a known value there.
    """
    if not _pure_ensemble(dist):
        return None
    d = pair_dim(dist)
    if isinstance(div, TraceDistance):
        return 1.0 - 1.0 / d
    if isinstance(div, HockeyStick):
        return max(1.0 - div.gamma / d, 0.0)
    if isinstance(div, (RelativeEntropy, MaxRelativeEntropy)):
        return math.log(d)
    if isinstance(div, ChiSquaredClosed):
        return float(d - 1)
    if isinstance(div, FIntegral):
        f = div.generator
        if not math.isfinite(f.f0):
            return None
        return f.f(float(d)) / d + (1.0 - 1.0 / d) * f.f0
    return None


def _run_indexed(fn: Callable[[int], object], n: int, threads: int) -> list:
    """``[fn(0), …, fn(n−1)]`` computed on up to ``threads`` workers."""
    if threads <= 1 or n <= 1:
        return [fn(i) for i in range(n)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(n), chunksize=max(1, n // (8 * threads))))


def _one_sample(req: MomentRequest, exact: Optional[float], index: int) -> _Sample:
    rng = req.seed.rng(req.task, index)
    pair = sample_pair(req.pairs, rng)
    if pair.collision:
        return _Sample(math.nan, False, True, False)
    denom = exact if exact is not None else divergence(req.divergence, pair.rho, pair.sigma)
    if not (denom > 0.0) or math.isinf(denom):
        return _Sample(math.nan, True, False, False)
    num = divergence(
        req.divergence,
        apply_channel(req.channel, pair.rho),
        apply_channel(req.channel, pair.sigma),
    )
    ratio = num / denom
    violation = ratio > 1.0 + DPI_TOL or ratio < -DPI_TOL
    return _Sample(min(max(ratio, 0.0), 1.0), False, False, bool(violation))


def _moment(values: np.ndarray, p: float) -> tuple[float, float, float]:
    """Mean of ``values^p``, its p-th root and the delta-method stderr of the root."""
    powered = values**p
    mean = float(np.mean(powered))
    n = powered.size
    se_mean = float(np.std(powered, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    if mean <= 0.0:
        return 0.0, 0.0, 0.0
    eta = mean ** (1.0 / p)
    return mean, eta, se_mean * mean ** (1.0 / p - 1.0) / p


def estimate_moments(req: MomentRequest, threads: int = 1) -> list[MomentEstimate]:
    """Monte Carlo ``η_p`` for every ``p`` in ``req.p_list``.

    Each sample's ratio is computed once and reused for all ``p``. Samples
    with ``D(ρ‖σ)`` equal to 0 or ``inf`` are skipped, as are unresolved
    collisions. Ratios are clamped to ``[0, 1]``.

    Raises
    ------
    InvalidShapeError
        If the pair dimension differs from the channel input dimension.
    EmptyEstimateError
        If every sample was skipped.
    """
    if pair_dim(req.pairs) != req.channel.d_in:
        raise InvalidShapeError(
            f"pairs live in dimension {pair_dim(req.pairs)}, channel expects {req.channel.d_in}"
        )
    exact = denominator_exact(req.pairs, req.divergence) if req.denominator_mode == EXACT_WHEN_AVAILABLE else None
    samples = _run_indexed(lambda i: _one_sample(req, exact, i), req.n_samples, threads)

    ratios = np.array([s.ratio for s in samples], dtype=float)
    used = ratios[~np.isnan(ratios)]
    n_skip = sum(s.skipped_denominator for s in samples)
    n_coll = sum(s.collision for s in samples)
    n_dpi = sum(s.dpi_violation for s in samples)
    if used.size == 0:
        raise EmptyEstimateError(
            f"all {req.n_samples} samples skipped ({n_skip} degenerate denominators, {n_coll} collisions)"
        )
    out = []
    for p in req.p_list:
        mean, eta, se = _moment(used, p)
        out.append(MomentEstimate(p, mean, eta, se, int(used.size), n_skip, n_coll, n_dpi))
    return out


def second_moment_target(ch: ChannelLike) -> float:
    """Exact ``E‖T(ρ)−T(σ)‖₂²/‖ρ−σ‖₂²`` for unitarily invariant pairs: ``(d/(d²−1))[d Tr τ² − Tr π²]``."""
    fn = choi_functionals(ch)
    d = fn.d_in
    if d < 2:
        raise DomainError("the Hilbert–Schmidt ratio needs d ≥ 2")
    return d / (d * d - 1.0) * (d * fn.purity - fn.pi_purity)


def estimate_2norm_second_moment(
    ch: ChannelLike,
    d: int,
    r: int,
    n_samples: int,
    seed: SeedSpec,
    task: int = 0,
    threads: int = 1,
) -> SecondMomentEstimate:
    """Monte Carlo average of the squared Hilbert–Schmidt contraction ratio.

    Pairs are independent draws from the induced measure with environment
    dimension ``r``. The exact value does not depend on ``r``.
    """
    if ch.d_in != d:
        raise InvalidShapeError(f"channel acts on dimension {ch.d_in}, not {d}")
    if int(n_samples) != n_samples or n_samples < 1:
        raise DomainError("n_samples must be a positive integer")
    dist = Product(InducedMixed(d, r), InducedMixed(d, r))

    def one(index: int) -> float:
        pair = sample_pair(dist, seed.rng(task, index))
        den = float(np.linalg.norm(pair.rho - pair.sigma)) ** 2
        if den <= 0.0:
            return math.nan
        diff = apply_channel(ch, pair.rho) - apply_channel(ch, pair.sigma)
        return float(np.linalg.norm(diff)) ** 2 / den

    vals = np.array(_run_indexed(one, int(n_samples), threads), dtype=float)
    vals = vals[~np.isnan(vals)]
    if vals.size == 0:
        raise EmptyEstimateError("every sampled pair coincided")
    se = float(np.std(vals, ddof=1) / math.sqrt(vals.size)) if vals.size > 1 else 0.0
    return SecondMomentEstimate(float(np.mean(vals)), se, int(vals.size), second_moment_target(ch))
