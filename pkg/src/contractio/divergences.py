"""Quantum divergences between density matrices.

Natural logarithms throughout. An infinite divergence is returned as
``math.inf`` and never as a large finite number.

The general f-divergence uses the hockey-stick integral representation

    D_f(ρ‖σ) = ∫_1^∞ f''(γ) E_γ(ρ‖σ) + γ^{-3} f''(1/γ) E_γ(σ‖ρ) dγ,

with ``E_γ(ρ‖σ) = Tr(ρ − γσ)₊``. Each term vanishes beyond
``γ = exp(D_max)`` of its ordering, so both integrals run over compact
ranges whenever the supports allow.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np
from scipy import integrate

from .errors import DomainError, InvalidShapeError, QuadratureError
from .linalg import SUPPORT_CUTOFF, hermitian_eig, hermitian_eigvals, support_mask

__all__ = [
    "FSpec",
    "KL_GENERATOR",
    "CHI2_GENERATOR",
    "hellinger_generator",
    "generator_by_name",
    "TraceDistance",
    "HockeyStick",
    "RelativeEntropy",
    "MaxRelativeEntropy",
    "ChiSquaredClosed",
    "FIntegral",
    "DivergenceSpec",
    "IntegralResult",
    "trace_distance",
    "hockey_stick",
    "relative_entropy",
    "max_relative_entropy",
    "thompson",
    "f_divergence_integral",
    "f_divergence_integral_detailed",
    "classical_f_divergence",
    "chi2_closed_form",
    "reverse_pinsker_coefficient",
    "k_f",
    "divergence",
    "parse_divergence",
    "divergence_name",
]

# Weight of ρ outside supp σ above this counts as a support violation.
_SUPPORT_WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class FSpec:
    """Convex generator ``f`` with ``f(1) = 0`` and the data the integral needs.

    ``f0`` is ``lim_{x→0} f(x)`` and ``slope_inf`` is ``lim_{x→∞} f(x)/x``;
    either may be ``inf``. ``df_at_1`` is ``f'(1)``, used by limits of the
    reverse Pinsker coefficient.
    """

    name: str
    f: Callable[[float], float]
    f2: Callable[[float], float]
    f0: float
    f2_at_1: float
    df_at_1: float
    slope_inf: float

    def f_at(self, x: float) -> float:
        if x == 0.0:
            return self.f0
        return float(self.f(x))


def _xlogx(x: float) -> float:
    return float(x * math.log(x)) if x > 0 else 0.0


KL_GENERATOR = FSpec(
    name="kl",
    f=_xlogx,
    f2=lambda x: 1.0 / x,
    f0=0.0,
    f2_at_1=1.0,
    df_at_1=1.0,
    slope_inf=math.inf,
)

CHI2_GENERATOR = FSpec(
    name="chi2",
    f=lambda x: x * x - 1.0,
    f2=lambda x: 2.0,
    f0=-1.0,
    f2_at_1=2.0,
    df_at_1=2.0,
    slope_inf=math.inf,
)


def hellinger_generator(alpha: float) -> FSpec:
    """``f(x) = (x^α − 1)/(α − 1)`` for ``α > 0``, ``α ≠ 1``."""
    a = float(alpha)
    if not a > 0.0 or a == 1.0:
        raise DomainError(f"Hellinger order must be positive and different from 1, got {alpha!r}")
    return FSpec(
        name=f"hellinger:{a:g}",
        f=lambda x: (x**a - 1.0) / (a - 1.0),
        f2=lambda x: a * x ** (a - 2.0),
        f0=-1.0 / (a - 1.0),
        f2_at_1=a,
        df_at_1=a / (a - 1.0),
        slope_inf=0.0 if a < 1.0 else math.inf,
    )


def generator_by_name(name: str) -> FSpec:
    """Built-in generators: ``kl``, ``chi2`` and ``hellinger:<α>``."""
    key = name.strip().lower()
    if key in ("kl", "xlogx", "re"):
        return KL_GENERATOR
    if key in ("chi2", "x2"):
        return CHI2_GENERATOR
    if key.startswith("hellinger:"):
        try:
            alpha = float(key.split(":", 1)[1])
        except ValueError as exc:
            raise DomainError(f"bad Hellinger order in {name!r}") from exc
        return hellinger_generator(alpha)
    raise DomainError(f"unknown f-divergence generator {name!r}")


@dataclass(frozen=True)
class TraceDistance:
    pass


@dataclass(frozen=True)
class HockeyStick:
    gamma: float

    def __post_init__(self) -> None:
        if not self.gamma > 0:
            raise DomainError(f"hockey-stick parameter must be positive, got {self.gamma!r}")


@dataclass(frozen=True)
class RelativeEntropy:
    pass


@dataclass(frozen=True)
class MaxRelativeEntropy:
    pass


@dataclass(frozen=True)
class ChiSquaredClosed:
    pass


@dataclass(frozen=True)
class FIntegral:
    generator: FSpec
    tol: float = 1e-8


DivergenceSpec = Union[TraceDistance, HockeyStick, RelativeEntropy, MaxRelativeEntropy, ChiSquaredClosed, FIntegral]


@dataclass(frozen=True)
class IntegralResult:
    value: float
    abserr: float
    converged: bool
    messages: tuple = field(default=())


def _pair(rho: np.ndarray, sigma: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    r = np.asarray(rho, dtype=complex)
    s = np.asarray(sigma, dtype=complex)
    if r.shape != s.shape or r.ndim != 2 or r.shape[0] != r.shape[1]:
        raise InvalidShapeError(f"states must be square with equal shapes, got {r.shape} and {s.shape}")
    return r, s


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    """``½ Σ |eig(ρ − σ)|``."""
    r, s = _pair(rho, sigma)
    return 0.5 * float(np.sum(np.abs(hermitian_eigvals(r - s))))


def hockey_stick(rho: np.ndarray, sigma: np.ndarray, gamma: float) -> float:
    """``E_γ(ρ‖σ) = Tr(ρ − γσ)₊``."""
    if not gamma > 0:
        raise DomainError(f"gamma must be positive, got {gamma!r}")
    r, s = _pair(rho, sigma)
    w = hermitian_eigvals(r - gamma * s)
    return float(np.sum(w[w > 0.0]))


@dataclass(frozen=True)
class _RelativeSpectrum:
    """Eigenvalues of ``σ^{-1/2} ρ σ^{-1/2}`` on ``supp σ``, or a support failure."""

    contained: bool
    values: np.ndarray


def _relative_spectrum(rho: np.ndarray, sigma: np.ndarray) -> _RelativeSpectrum:
    eig = hermitian_eig(sigma)
    mask = support_mask(eig.eigenvalues)
    v_in = eig.eigenvectors[:, mask]
    v_out = eig.eigenvectors[:, ~mask]
    if v_out.shape[1]:
        outside = float(np.real(np.trace(v_out.conj().T @ rho @ v_out)))
        if outside > _SUPPORT_WEIGHT_TOL:
            return _RelativeSpectrum(False, np.empty(0))
    inv_sqrt = 1.0 / np.sqrt(eig.eigenvalues[mask])
    m = (inv_sqrt[:, None] * (v_in.conj().T @ rho @ v_in)) * inv_sqrt[None, :]
    return _RelativeSpectrum(True, hermitian_eigvals(m))


def _dmax_of(spec: _RelativeSpectrum) -> float:
    if not spec.contained:
        return math.inf
    top = float(spec.values[-1]) if spec.values.size else 0.0
    if top <= 0.0:
        return math.inf
    return max(0.0, math.log(top))


def max_relative_entropy(rho: np.ndarray, sigma: np.ndarray) -> float:
    """``D_max(ρ‖σ) = ln λ_max(σ^{-1/2} ρ σ^{-1/2})``; ``inf`` if ``supp ρ ⊄ supp σ``."""
    r, s = _pair(rho, sigma)
    return _dmax_of(_relative_spectrum(r, s))


def thompson(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Thompson metric: the larger of the two ``D_max`` orderings."""
    return max(max_relative_entropy(rho, sigma), max_relative_entropy(sigma, rho))


def relative_entropy(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Umegaki relative entropy ``Tr ρ(ln ρ − ln σ)`` in nats."""
    r, s = _pair(rho, sigma)
    er = hermitian_eig(r)
    es = hermitian_eig(s)
    mask = support_mask(es.eigenvalues)
    overlap = np.abs(er.eigenvectors.conj().T @ es.eigenvectors) ** 2  # |⟨a_i|b_j⟩|²
    p = np.clip(er.eigenvalues, 0.0, None)
    weight_outside = float(p @ overlap[:, ~mask].sum(axis=1)) if np.any(~mask) else 0.0
    if weight_outside > _SUPPORT_WEIGHT_TOL:
        return math.inf
    pos = p > 0.0
    term_rho = float(np.sum(p[pos] * np.log(p[pos])))
    log_q = np.log(es.eigenvalues[mask])
    term_sigma = float(p @ (overlap[:, mask] @ log_q))
    return max(0.0, term_rho - term_sigma)


def classical_f_divergence(f: FSpec, p: np.ndarray, q: np.ndarray) -> float:
    """``Σ_x q_x f(p_x/q_x)`` with ``0·f(a/0) = a · lim f(u)/u``."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    total = 0.0
    for px, qx in zip(p, q):
        if qx > 0.0:
            total += qx * f.f_at(px / qx)
        elif px > 0.0:
            if math.isinf(f.slope_inf):
                return math.inf
            total += px * f.slope_inf
    return total


def _quad(fn: Callable[[float], float], a: float, b: float, points, tol: float) -> tuple[float, float, Optional[str]]:
    # Breakpoints hugging an endpoint add a degenerate interval that QUADPACK flags as bad.
    margin = 1e-9 * max(1.0, abs(b))
    pts = sorted(float(x) for x in (points if points is not None else ()) if a + margin < x < b - margin)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        res = integrate.quad(fn, a, b, points=pts or None, epsabs=tol, epsrel=0.0, limit=500, full_output=1)
    value, abserr = float(res[0]), float(res[1])
    message = res[3] if len(res) > 3 else None
    return value, abserr, message


def _term(
    weight: Callable[[float], float],
    e_gamma: Callable[[float], float],
    dmax: float,
    crossings: np.ndarray,
    tol: float,
) -> tuple[float, float, Optional[str]]:
    """``∫_1^{e^{dmax}} weight(γ) E_γ dγ``; infinite ``dmax`` switches to ``u = 1/γ``."""
    if dmax == 0.0:
        return 0.0, 0.0, None
    if math.isfinite(dmax):
        upper = math.exp(dmax)
        return _quad(lambda g: weight(g) * e_gamma(g), 1.0, upper, crossings, tol)
    inv_points = 1.0 / crossings[crossings > 1.0] if crossings.size else None

    def integrand(u: float) -> float:
        if u <= 0.0:
            return 0.0
        g = 1.0 / u
        return weight(g) * e_gamma(g) * g * g

    return _quad(integrand, 0.0, 1.0, inv_points, tol)


def f_divergence_integral_detailed(f: FSpec, rho: np.ndarray, sigma: np.ndarray, tol: float = 1e-8) -> IntegralResult:
    """Integral f-divergence with its quadrature error estimate.

    Infinite results are returned without quadrature when a support mismatch
    meets a generator whose corresponding limit (``slope_inf`` or ``f0``) is
    infinite.
    """
    r, s = _pair(rho, sigma)
    if np.array_equal(r, s):
        return IntegralResult(0.0, 0.0, True)
    spec_rs = _relative_spectrum(r, s)
    spec_sr = _relative_spectrum(s, r)
    dmax_rs = _dmax_of(spec_rs)
    dmax_sr = _dmax_of(spec_sr)
    if math.isinf(dmax_rs) and math.isinf(f.slope_inf):
        return IntegralResult(math.inf, 0.0, True)
    if math.isinf(dmax_sr) and math.isinf(f.f0):
        return IntegralResult(math.inf, 0.0, True)

    half = 0.5 * tol
    first = _term(
        f.f2,
        lambda g: hockey_stick(r, s, g),
        dmax_rs,
        spec_rs.values if spec_rs.contained else np.empty(0),
        half,
    )
    second = _term(
        lambda g: g**-3 * f.f2(1.0 / g),
        lambda g: hockey_stick(s, r, g),
        dmax_sr,
        spec_sr.values if spec_sr.contained else np.empty(0),
        half,
    )
    value = first[0] + second[0]
    abserr = first[1] + second[1]
    messages = tuple(m for m in (first[2], second[2]) if m)
    return IntegralResult(value, abserr, abserr <= tol and not messages, messages)


def f_divergence_integral(f: FSpec, rho: np.ndarray, sigma: np.ndarray, tol: float = 1e-8) -> float:
    """Integral-representation f-divergence.

    Raises
    ------
    QuadratureError
        If the adaptive Gauss–Kronrod rule misses ``tol``; the exception
        carries the value reached and its error estimate.
    """
    res = f_divergence_integral_detailed(f, rho, sigma, tol)
    if not res.converged:
        raise QuadratureError(f"f-divergence '{f.name}' quadrature did not converge", res.value, res.abserr)
    return res.value


def _inverse_log_mean(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``(ln a − ln b)/(a − b)``, equal to ``1/a`` on the diagonal."""
    t = (a - b) / b
    small = np.abs(t) < 1e-6
    t_safe = np.where(small, 1.0, t)
    exact = np.log1p(t_safe) / (b * t_safe)
    series = (1.0 - t / 2.0 + t * t / 3.0 - t**3 / 4.0) / b
    return np.where(small, series, exact)


def chi2_closed_form(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Spectral closed form of the integral χ² divergence; ``inf`` unless ``σ > 0``.

    In the eigenbasis of ``σ = Σ λ_i |i⟩⟨i|`` this is
    ``Σ_{ij} |ρ_ij|² (ln λ_i − ln λ_j)/(λ_i − λ_j) − 1``.
    """
    r, s = _pair(rho, sigma)
    eig = hermitian_eig(s)
    lam = eig.eigenvalues
    if lam[0] <= SUPPORT_CUTOFF * lam[-1]:
        return math.inf
    v = eig.eigenvectors
    rr = v.conj().T @ r @ v
    kernel = _inverse_log_mean(lam[:, None], lam[None, :])
    return max(0.0, float(np.sum(kernel * np.abs(rr) ** 2)) - 1.0)


def _ratio_first(f: FSpec, a: float) -> float:
    """``f(e^a)/(e^a − 1)`` including its limits at ``a → 0`` and ``a → ∞``."""
    if math.isinf(a):
        return f.slope_inf
    x = math.expm1(a)
    if abs(x) < 1e-6:
        return f.df_at_1 + 0.5 * f.f2_at_1 * x
    return f.f(1.0 + x) / x


def _ratio_second(f: FSpec, b: float) -> float:
    """``e^b f(e^{-b})/(e^b − 1)`` including its limits."""
    if math.isinf(b):
        return f.f0
    x = math.expm1(b)
    if abs(x) < 1e-6:
        # y f(1/y)/(y-1) near y = 1 expands to -f'(1) + ½ f''(1)(y-1)
        return -f.df_at_1 + 0.5 * f.f2_at_1 * x
    y = 1.0 + x
    return y * f.f(1.0 / y) / x


def reverse_pinsker_coefficient(f: FSpec, dmax_rs: float, dmax_sr: float) -> float:
    """Coefficient ``c`` with ``D_f(ρ‖σ) ≤ c · ½‖ρ−σ‖₁``.

    ``c = f(α)/(α−1) + β f(1/β)/(β−1)`` with ``α = e^{D_max(ρ‖σ)}`` and
    ``β = e^{D_max(σ‖ρ)}``; each term is non-decreasing in its argument.
    """
    if dmax_rs < 0 or dmax_sr < 0:
        raise DomainError("D_max arguments must be non-negative")
    return _ratio_first(f, dmax_rs) + _ratio_second(f, dmax_sr)


def k_f(f: FSpec, x: float) -> float:
    """``K_f(x) = (f(x) + x f(1/x))/(x − 1)`` for ``x ≥ 1``; 0 at ``x = 1``."""
    if x < 1.0:
        raise DomainError(f"K_f is defined for x ≥ 1, got {x!r}")
    if math.isinf(x):
        return f.slope_inf + f.f0
    h = x - 1.0
    if h < 1e-4:
        return f.f2_at_1 * h * (1.0 - 0.5 * h)
    return (f.f(x) + x * f.f(1.0 / x)) / h


def divergence(spec: DivergenceSpec, rho: np.ndarray, sigma: np.ndarray) -> float:
    """Evaluate the divergence selected by ``spec``."""
    if isinstance(spec, TraceDistance):
        return trace_distance(rho, sigma)
    if isinstance(spec, HockeyStick):
        return hockey_stick(rho, sigma, spec.gamma)
    if isinstance(spec, RelativeEntropy):
        return relative_entropy(rho, sigma)
    if isinstance(spec, MaxRelativeEntropy):
        return max_relative_entropy(rho, sigma)
    if isinstance(spec, ChiSquaredClosed):
        return chi2_closed_form(rho, sigma)
    if isinstance(spec, FIntegral):
        return f_divergence_integral(spec.generator, rho, sigma, spec.tol)
    raise TypeError(f"unknown divergence spec {spec!r}")


def parse_divergence(name: str) -> DivergenceSpec:
    """Parse ``tr``, ``re``, ``maxre``, ``chi2``, ``hs:<γ>`` or ``f:<generator>``."""
    key = name.strip()
    low = key.lower()
    if low == "tr":
        return TraceDistance()
    if low == "re":
        return RelativeEntropy()
    if low == "maxre":
        return MaxRelativeEntropy()
    if low == "chi2":
        return ChiSquaredClosed()
    if low.startswith("hs:"):
        try:
            gamma = float(low[3:])
        except ValueError as exc:
            raise DomainError(f"bad hockey-stick parameter in {name!r}") from exc
        return HockeyStick(gamma)
    if low.startswith("f:"):
        return FIntegral(generator_by_name(key[2:]))
    raise DomainError(f"unknown divergence {name!r}")


def divergence_name(spec: DivergenceSpec) -> str:
    """Inverse of :func:`parse_divergence`."""
    if isinstance(spec, TraceDistance):
        return "tr"
    if isinstance(spec, RelativeEntropy):
        return "re"
    if isinstance(spec, MaxRelativeEntropy):
        return "maxre"
    if isinstance(spec, ChiSquaredClosed):
        return "chi2"
    if isinstance(spec, HockeyStick):
        return f"hs:{spec.gamma:g}"
    if isinstance(spec, FIntegral):
        return f"f:{spec.generator.name}"
    raise TypeError(f"unknown divergence spec {spec!r}")
