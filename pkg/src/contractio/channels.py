"""Quantum channels in Kraus form, their Choi states and named families.

The Choi state is ``τ = (T ⊗ id)(|Ω⟩⟨Ω|)`` with ``|Ω⟩ = d^{-1/2} Σ_i |i⟩|i⟩``
and subsystem order (output ⊗ input). Product channels ``Φ^{⊗n}`` are kept
symbolic (:class:`ProductChannelSpec`) and applied one site at a time.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .errors import DomainError, InvalidShapeError
from .linalg import hermitian_eig, hermitian_eigvals, kron_all, partial_trace

__all__ = [
    "TP_TOL",
    "CANONICAL_CUTOFF",
    "KrausChannel",
    "ChoiState",
    "ProductChannelSpec",
    "ChoiFunctionals",
    "ChannelLike",
    "input_dim",
    "output_dim",
    "apply",
    "apply_product",
    "apply_channel",
    "apply_on_sites",
    "choi",
    "pi",
    "choi_functionals",
    "product_functionals",
    "canonical_kraus",
    "transfer_matrix",
    "is_unital",
    "identity_channel",
    "depolarizing",
    "global_depolarizing",
    "dephasing",
    "schur_dephasing",
    "amplitude_damping",
    "partial_trace_channel",
    "mixture_of_unitaries",
    "pauli_channel",
    "replacer",
    "compose",
    "unitary_channel",
    "random_channel",
    "PAULI_I",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
]

TP_TOL = 1e-10
CANONICAL_CUTOFF = 1e-12
# Tr₂τ² of a product channel is only materialized up to this output size.
_MAX_PRODUCT_MATRIX = 1024

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Completely positive trace-preserving map ``X ↦ Σ_k E_k X E_k†``.

    ``kraus`` is stored as one array of shape ``(K, d_out, d_in)``.
    Construction fails with :class:`DomainError` unless
    ``‖Σ E_k†E_k − I‖_F ≤ 1e-10``.
    """

    kraus: np.ndarray
    label: str = ""

    def __post_init__(self) -> None:
        ops = np.asarray(self.kraus, dtype=complex)
        if ops.ndim == 2:
            ops = ops[None]
        if ops.ndim != 3 or ops.shape[0] == 0:
            raise InvalidShapeError(f"Kraus operators must form a (K, d_out, d_in) array, got {ops.shape}")
        gram = np.einsum("koi,koj->ij", ops.conj(), ops)
        err = float(np.linalg.norm(gram - np.eye(ops.shape[2])))
        if err > TP_TOL:
            raise DomainError(f"Kraus operators are not trace preserving (‖ΣE†E − I‖_F = {err:.3g})")
        ops.setflags(write=False)
        object.__setattr__(self, "kraus", ops)

    @property
    def d_in(self) -> int:
        return self.kraus.shape[2]

    @property
    def d_out(self) -> int:
        return self.kraus.shape[1]

    @property
    def n_kraus(self) -> int:
        return self.kraus.shape[0]

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        return apply(self, rho)


@dataclass(frozen=True, eq=False)
class ChoiState:
    """Choi matrix on ``C^{d_out} ⊗ C^{d_in}`` (output first)."""

    matrix: np.ndarray
    d_in: int
    d_out: int


@dataclass(frozen=True, eq=False)
class ProductChannelSpec:
    """Tensor power ``local^{⊗n}``, never expanded into Kraus products."""

    local: KrausChannel
    n: int

    def __post_init__(self) -> None:
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"tensor power must be a positive integer, got {self.n!r}")

    @property
    def d_in(self) -> int:
        return self.local.d_in**self.n

    @property
    def d_out(self) -> int:
        return self.local.d_out**self.n

    @property
    def label(self) -> str:
        return f"({self.local.label})^{self.n}"


ChannelLike = Union[KrausChannel, ProductChannelSpec]


@dataclass(frozen=True, eq=False)
class ChoiFunctionals:
    """Scalar and operator summaries of a Choi state.

    ``entropy`` is in nats; ``entropy_bits`` converts. ``tr2_choi_sq`` is
    ``Tr_in τ²`` as a ``d_out × d_out`` matrix, or ``None`` when it was too
    large to build for a product channel.
    """

    purity: float
    entropy: float
    tr2_choi_sq: Optional[np.ndarray]
    sqrt_trace: float
    pi_purity: float
    pi_infnorm: float
    d_in: int
    d_out: int

    @property
    def entropy_bits(self) -> float:
        return self.entropy / np.log(2.0)


def input_dim(ch: ChannelLike) -> int:
    return ch.d_in


def output_dim(ch: ChannelLike) -> int:
    return ch.d_out


def _check_input(ch: ChannelLike, rho: np.ndarray) -> np.ndarray:
    r = np.asarray(rho, dtype=complex)
    if r.ndim != 2 or r.shape != (ch.d_in, ch.d_in):
        raise InvalidShapeError(f"channel expects a {ch.d_in}x{ch.d_in} input, got {r.shape}")
    return r


def _kraus_sum(ops: np.ndarray, x: np.ndarray) -> np.ndarray:
    """``Σ_k E_k X E_k†`` as two matrix products."""
    k, d_out, d_in = ops.shape
    left = np.matmul(ops, x)  # (k, d_out, d_in)
    a = left.transpose(1, 0, 2).reshape(d_out, k * d_in)
    b = ops.transpose(1, 0, 2).reshape(d_out, k * d_in)
    return a @ b.conj().T


def apply(ch: KrausChannel, rho: np.ndarray) -> np.ndarray:
    """Apply a Kraus channel to a square matrix; output is Hermitized."""
    out = _kraus_sum(ch.kraus, _check_input(ch, rho))
    return 0.5 * (out + out.conj().T)


def apply_on_sites(
    rho: np.ndarray,
    dims: Sequence[int],
    ops: np.ndarray,
    sites: Sequence[int],
) -> tuple[np.ndarray, list[int]]:
    """Apply Kraus operators acting on ``sites`` of a multipartite operator.

    ``ops`` has shape ``(K, D_out, D_in)`` with ``D_in`` the product of the
    selected site dimensions. A dimension change is only allowed for a single
    site. Returns the new matrix and the updated dimension list.
    """
    dims = [int(x) for x in dims]
    n = len(dims)
    sites = [int(s) for s in sites]
    ops = np.asarray(ops, dtype=complex)
    if ops.ndim == 2:
        ops = ops[None]
    d_sel = int(np.prod([dims[s] for s in sites]))
    k, d_out, d_in = ops.shape
    if d_in != d_sel:
        raise InvalidShapeError(f"operators act on dimension {d_in}, selected sites have {d_sel}")
    if d_out != d_in and len(sites) != 1:
        raise InvalidShapeError("dimension-changing operators must act on a single site")
    total = int(np.prod(dims))
    if rho.shape != (total, total):
        raise InvalidShapeError(f"operator of shape {rho.shape} does not match dims {dims}")

    t = rho.reshape(dims + dims)
    src = sites + [n + s for s in sites]
    rest_axes = [a for a in range(2 * n) if a not in src]
    t = np.transpose(t, src + rest_axes)
    rest = t.shape[2 * len(sites):]
    r = int(np.prod(rest)) if rest else 1
    t = t.reshape(d_in, d_in, r)

    # u[k, o, b, r] = Σ_a E_k[o, a] t[a, b, r]
    u = (ops.reshape(k * d_out, d_in) @ t.reshape(d_in, d_in * r)).reshape(k, d_out, d_in, r)
    # v[o, r, p] = Σ_{k, b} u[k, o, b, r] conj(E_k[p, b])
    lhs = u.transpose(1, 3, 0, 2).reshape(d_out * r, k * d_in)
    rhs = ops.transpose(0, 2, 1).reshape(k * d_in, d_out).conj()
    v = (lhs @ rhs).reshape(d_out, r, d_out).transpose(0, 2, 1)

    new_dims = list(dims)
    if len(sites) == 1:
        new_dims[sites[0]] = d_out
    site_shape = [new_dims[s] for s in sites]
    v = v.reshape(site_shape + site_shape + list(rest))
    inv = np.argsort(src + rest_axes)
    v = np.transpose(v, inv)
    new_total = int(np.prod(new_dims))
    return v.reshape(new_total, new_total), new_dims


def apply_product(spec: ProductChannelSpec, rho: np.ndarray) -> np.ndarray:
    """Apply ``local^{⊗n}`` site by site without forming product Kraus operators."""
    r = _check_input(spec, rho)
    dims = [spec.local.d_in] * spec.n
    for site in range(spec.n):
        r, dims = apply_on_sites(r, dims, spec.local.kraus, [site])
    return 0.5 * (r + r.conj().T)


def apply_channel(ch: ChannelLike, rho: np.ndarray) -> np.ndarray:
    """Dispatch to :func:`apply` or :func:`apply_product`."""
    if isinstance(ch, ProductChannelSpec):
        return apply_product(ch, rho)
    return apply(ch, rho)


def choi(ch: KrausChannel) -> ChoiState:
    """Choi state ``(T ⊗ id)|Ω⟩⟨Ω|``, output subsystem first."""
    vecs = ch.kraus.reshape(ch.n_kraus, ch.d_out * ch.d_in)  # row (o, i) = E[o, i]
    tau = vecs.T @ vecs.conj() / ch.d_in
    tau = 0.5 * (tau + tau.conj().T)
    return ChoiState(tau, ch.d_in, ch.d_out)


def pi(ch: ChannelLike) -> np.ndarray:
    """Image of the maximally mixed input, ``T(I/d)``."""
    if isinstance(ch, ProductChannelSpec):
        return kron_all([pi(ch.local)] * ch.n)
    return apply(ch, np.eye(ch.d_in, dtype=complex) / ch.d_in)


def _entropy_nats(eigenvalues: np.ndarray) -> float:
    w = eigenvalues[eigenvalues > 0.0]
    return float(-np.sum(w * np.log(w)))


def choi_functionals(ch: ChannelLike) -> ChoiFunctionals:
    """Purity, entropy and partial-square functionals of the Choi state."""
    if isinstance(ch, ProductChannelSpec):
        return product_functionals(choi_functionals(ch.local), ch.n)
    tau = choi(ch).matrix
    w = hermitian_eigvals(tau)
    purity = float(np.sum(np.abs(tau) ** 2))
    tr2 = partial_trace(tau @ tau, [ch.d_out, ch.d_in], keep=[0])
    tr2 = 0.5 * (tr2 + tr2.conj().T)
    tr2_eigs = np.clip(hermitian_eigvals(tr2), 0.0, None)
    p = partial_trace(tau, [ch.d_out, ch.d_in], keep=[0])
    p_eigs = hermitian_eigvals(p)
    return ChoiFunctionals(
        purity=purity,
        entropy=_entropy_nats(w),
        tr2_choi_sq=tr2,
        sqrt_trace=float(np.sum(np.sqrt(tr2_eigs))),
        pi_purity=float(np.sum(p_eigs**2)),
        pi_infnorm=float(np.max(np.abs(p_eigs))),
        d_in=ch.d_in,
        d_out=ch.d_out,
    )


def product_functionals(local: ChoiFunctionals, n: int) -> ChoiFunctionals:
    """Functionals of ``Φ^{⊗n}`` from those of ``Φ`` (multiplicativity of τ)."""
    d_out = local.d_out**n
    tr2 = None
    if local.tr2_choi_sq is not None and d_out <= _MAX_PRODUCT_MATRIX:
        tr2 = kron_all([local.tr2_choi_sq] * n)
    return ChoiFunctionals(
        purity=local.purity**n,
        entropy=n * local.entropy,
        tr2_choi_sq=tr2,
        sqrt_trace=local.sqrt_trace**n,
        pi_purity=local.pi_purity**n,
        pi_infnorm=local.pi_infnorm**n,
        d_in=local.d_in**n,
        d_out=d_out,
    )


def canonical_kraus(ch: KrausChannel) -> KrausChannel:
    """Hilbert–Schmidt orthogonal Kraus family from the Choi eigenvectors."""
    eig = hermitian_eig(choi(ch).matrix)
    keep = eig.eigenvalues > CANONICAL_CUTOFF
    w = eig.eigenvalues[keep][::-1]
    v = eig.eigenvectors[:, keep][:, ::-1]
    ops = (np.sqrt(ch.d_in * w)[:, None] * v.T).reshape(-1, ch.d_out, ch.d_in)
    return KrausChannel(ops, label=ch.label)


def transfer_matrix(ch: KrausChannel) -> np.ndarray:
    """Matrix of ``X ↦ T(X)`` on row-major ``vec``: ``Σ_k E_k ⊗ conj(E_k)``."""
    return sum(np.kron(e, e.conj()) for e in ch.kraus)


def is_unital(ch: ChannelLike, tol: float = 1e-10) -> bool:
    """``‖T(I) − I‖_F ≤ tol`` for a channel with equal input/output dimension."""
    if ch.d_in != ch.d_out:
        return False
    if isinstance(ch, ProductChannelSpec):
        return is_unital(ch.local, tol / max(1, ch.n))
    err = np.linalg.norm(apply(ch, np.eye(ch.d_in, dtype=complex)) - np.eye(ch.d_in))
    return bool(err <= tol)


# ---------------------------------------------------------------------------
# Named families


def _unit_interval(x: float, name: str) -> float:
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {x!r}")
    return x


def _check_unitary(u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise DomainError(f"unitary must be square, got shape {u.shape}")
    if np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0])) > TP_TOL:
        raise DomainError("matrix is not unitary")
    return u


def _check_state(s: np.ndarray) -> np.ndarray:
    s = np.asarray(s, dtype=complex)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise DomainError(f"state must be square, got shape {s.shape}")
    if np.max(np.abs(s - s.conj().T)) > 1e-10 or abs(np.trace(s) - 1.0) > 1e-10:
        raise DomainError("state must be Hermitian with unit trace")
    if hermitian_eigvals(s)[0] < -1e-10:
        raise DomainError("state must be positive semidefinite")
    return 0.5 * (s + s.conj().T)


def identity_channel(d: int) -> KrausChannel:
    return KrausChannel(np.eye(d, dtype=complex)[None], label=f"identity(d={d})")


def depolarizing(p: float, d: int = 2) -> KrausChannel:
    """``ρ ↦ (1−p)ρ + p Tr(ρ) I/d`` with the ``1 + d²`` matrix-unit Kraus family."""
    p = _unit_interval(p, "p")
    if int(d) != d or d < 1:
        raise DomainError(f"d must be a positive integer, got {d!r}")
    ops = []
    if p < 1.0:
        ops.append(np.sqrt(1.0 - p) * np.eye(d, dtype=complex))
    if p > 0.0:
        scale = np.sqrt(p / d)
        for i in range(d):
            for j in range(d):
                e = np.zeros((d, d), dtype=complex)
                e[i, j] = scale
                ops.append(e)
    return KrausChannel(np.array(ops), label=f"depolarizing(p={p:g}, d={d})")


def global_depolarizing(p: float, n: int) -> KrausChannel:
    """Depolarizing channel on the full ``2^n``-dimensional register."""
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    ch = depolarizing(p, 2**n)
    return KrausChannel(ch.kraus, label=f"global_depolarizing(p={p:g}, n={n})")


def dephasing(gamma: float) -> KrausChannel:
    """Qubit phase flip ``(1−γ/2)ρ + (γ/2) ZρZ``; off-diagonals scale by ``1−γ``."""
    g = _unit_interval(gamma, "gamma")
    ops = np.array([np.sqrt(1.0 - g / 2.0) * PAULI_I, np.sqrt(g / 2.0) * PAULI_Z])
    return KrausChannel(ops, label=f"dephasing(gamma={g:g})")


def schur_dephasing(gamma_matrix: np.ndarray) -> KrausChannel:
    """Schur-product channel ``ρ ↦ Γ ∘ ρ`` for PSD ``Γ`` with unit diagonal."""
    g = np.asarray(gamma_matrix, dtype=complex)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise DomainError(f"Γ must be square, got shape {g.shape}")
    if np.max(np.abs(g - g.conj().T)) > 1e-10:
        raise DomainError("Γ must be Hermitian")
    if np.max(np.abs(np.diagonal(g) - 1.0)) > 1e-10:
        raise DomainError("Γ must have unit diagonal")
    eig = hermitian_eig(g)
    if eig.eigenvalues[0] < -1e-10:
        raise DomainError("Γ must be positive semidefinite")
    ops = [np.sqrt(w) * np.diag(v) for w, v in zip(eig.eigenvalues, eig.eigenvectors.T) if w > CANONICAL_CUTOFF]
    return KrausChannel(np.array(ops), label=f"schur_dephasing(d={g.shape[0]})")


def amplitude_damping(lam: float) -> KrausChannel:
    """Decay ``|1⟩ → |0⟩`` with probability ``λ``."""
    lam = _unit_interval(lam, "lambda")
    e0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - lam)]], dtype=complex)
    e1 = np.array([[0.0, np.sqrt(lam)], [0.0, 0.0]], dtype=complex)
    return KrausChannel(np.array([e0, e1]), label=f"amplitude_damping(lambda={lam:g})")


def partial_trace_channel(n_total: int, n_discard: int) -> KrausChannel:
    """Discard the first ``n_discard`` of ``n_total`` qubits."""
    if int(n_total) != n_total or int(n_discard) != n_discard or not 0 <= n_discard <= n_total or n_total < 1:
        raise DomainError(f"need 0 ≤ M ≤ N with N ≥ 1, got N={n_total!r}, M={n_discard!r}")
    d_keep = 2 ** (n_total - n_discard)
    d_env = 2**n_discard
    ops = np.zeros((d_env, d_keep, d_env * d_keep), dtype=complex)
    for k in range(d_env):
        ops[k, :, k * d_keep:(k + 1) * d_keep] = np.eye(d_keep)
    return KrausChannel(ops, label=f"partial_trace(N={n_total}, M={n_discard})")


def mixture_of_unitaries(weights: Sequence[float], unitaries: Sequence[np.ndarray]) -> KrausChannel:
    """``ρ ↦ Σ_i p_i U_i ρ U_i†`` for a probability vector ``p``."""
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or len(w) != len(unitaries) or len(w) == 0:
        raise DomainError("need one weight per unitary")
    if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
        raise DomainError("weights must form a probability vector")
    us = [_check_unitary(u) for u in unitaries]
    if len({u.shape for u in us}) != 1:
        raise DomainError("unitaries must share one dimension")
    ops = np.array([np.sqrt(wi) * u for wi, u in zip(w, us) if wi > 0.0])
    return KrausChannel(ops, label=f"mixture_of_unitaries(k={len(us)})")


def pauli_channel(p: float, q: float) -> KrausChannel:
    """``(1−p−q)ρ + p XρX + q ZρZ``."""
    p = _unit_interval(p, "p")
    q = _unit_interval(q, "q")
    if p + q > 1.0 + 1e-15:
        raise DomainError(f"need p + q ≤ 1, got {p + q!r}")
    ch = mixture_of_unitaries([max(0.0, 1.0 - p - q), p, q], [PAULI_I, PAULI_X, PAULI_Z])
    return KrausChannel(ch.kraus, label=f"pauli(p={p:g}, q={q:g})")


def replacer(sigma: np.ndarray, d_in: Optional[int] = None) -> KrausChannel:
    """``ρ ↦ Tr(ρ) σ``; input dimension defaults to that of ``σ``."""
    s = _check_state(sigma)
    d_out = s.shape[0]
    d_in = d_out if d_in is None else int(d_in)
    if d_in < 1:
        raise DomainError("d_in must be positive")
    eig = hermitian_eig(s)
    ops = []
    for w, v in zip(eig.eigenvalues, eig.eigenvectors.T):
        if w <= CANONICAL_CUTOFF:
            continue
        for k in range(d_in):
            e = np.zeros((d_out, d_in), dtype=complex)
            e[:, k] = np.sqrt(w) * v
            ops.append(e)
    return KrausChannel(np.array(ops), label=f"replacer(d_out={d_out}, d_in={d_in})")


def compose(second: KrausChannel, first: KrausChannel) -> KrausChannel:
    """``second ∘ first``: apply ``first`` then ``second``."""
    if first.d_out != second.d_in:
        raise InvalidShapeError(f"cannot compose: {first.d_out} outputs into {second.d_in} inputs")
    ops = np.einsum("aij,bjk->abik", second.kraus, first.kraus).reshape(-1, second.d_out, first.d_in)
    return KrausChannel(ops, label=f"{second.label}∘{first.label}")


def unitary_channel(u: np.ndarray) -> KrausChannel:
    u = _check_unitary(u)
    return KrausChannel(u[None], label=f"unitary(d={u.shape[0]})")


def random_channel(d_in: int, d_out: int, rank: int, rng: np.random.Generator) -> KrausChannel:
    """Random channel of Kraus rank ``rank`` from a Ginibre isometry.

    Stacks ``rank`` Ginibre blocks of shape ``d_out × d_in``, orthonormalizes
    the columns by QR and slices the isometry back into Kraus operators.
    """
    for v, name in ((d_in, "d_in"), (d_out, "d_out"), (rank, "rank")):
        if int(v) != v or v < 1:
            raise DomainError(f"{name} must be a positive integer, got {v!r}")
    if rank * d_out < d_in:
        raise DomainError("rank · d_out must be at least d_in for an isometry")
    g = (rng.standard_normal((rank * d_out, d_in)) + 1j * rng.standard_normal((rank * d_out, d_in))) / np.sqrt(2.0)
    q, r = np.linalg.qr(g)
    q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
    return KrausChannel(q.reshape(rank, d_out, d_in), label=f"random(d_in={d_in}, d_out={d_out}, rank={rank})")
