"""Command-line experiment runner.

``contractio <command> --config file.json --out path [--threads N] [--seed S]``

Configs are validated against a JSON schema before any computation and
unknown fields are rejected. CSV outputs start with ``#`` metadata lines
(tool version, config hash, seed) followed by a header row. Floats are
written in shortest round-trip form, so equal configs give equal bytes.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 self-test failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
import time
from typing import Any, Callable, Optional, Sequence

import jsonschema
import numpy as np

from . import __version__
from . import bounds as bnd
from .channels import (
    ChannelLike,
    KrausChannel,
    ProductChannelSpec,
    amplitude_damping,
    choi_functionals,
    dephasing,
    depolarizing,
    global_depolarizing,
    is_unital,
    partial_trace_channel,
    pauli_channel,
)
from .circuits import LAYER_ENSEMBLES, PAIR, VS_MIXED, CircuitConfig, avg_contraction_vs_depth
from .divergences import divergence_name, parse_divergence
from .ensembles import (
    ComputationalBasisUniform,
    HaarPure,
    InducedMixed,
    ProductDistinct,
    SeedSpec,
    VsMaximallyMixed,
)
from .errors import ConfigError, ContractioError, DomainError, EmptyEstimateError, QuadratureError
from .estimator import EXACT_WHEN_AVAILABLE, SAMPLED, MomentRequest, default_samples, estimate_moments

__all__ = ["main", "build_parser", "SCHEMAS", "EXIT_OK", "EXIT_CONFIG", "EXIT_NUMERICAL", "EXIT_SELFTEST"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_SELFTEST = 4

THREADS_ENV = "CONTRACTIO_THREADS"
# Kraus rank of global depolarizing is 4^n; beyond this the operator array is impractical.
MAX_GLOBAL_DEPOL_QUBITS = 5

_FAMILIES = ["depolarizing", "dephasing", "amplitude_damping", "global_depolarizing", "pauli", "partial_trace"]

_CHANNEL_SCHEMA = {
    "type": "object",
    "properties": {
        "family": {"enum": _FAMILIES},
        "param": {"type": "number", "minimum": 0, "maximum": 1},
        "q": {"type": "number", "minimum": 0, "maximum": 1},
        "N": {"type": "integer", "minimum": 1, "maximum": 12},
        "M": {"type": "integer", "minimum": 0, "maximum": 12},
    },
    "required": ["family"],
    "additionalProperties": False,
}

_SEED = {"type": "integer", "minimum": 0, "maximum": 2**63 - 1}

SCHEMAS: dict[str, dict] = {
    "sweep": {
        "type": "object",
        "properties": {
            "channel_family": {"enum": ["depolarizing", "dephasing", "amplitude_damping", "global_depolarizing"]},
            "param_values": {"type": "array", "items": {"type": "number", "minimum": 0, "maximum": 1}},
            "param_grid": {
                "type": "object",
                "properties": {
                    "start": {"type": "number", "minimum": 0, "maximum": 1},
                    "stop": {"type": "number", "minimum": 0, "maximum": 1},
                    "step": {"type": "number", "exclusiveMinimum": 0},
                },
                "required": ["start", "stop", "step"],
                "additionalProperties": False,
            },
            "n_values": {"type": "array", "items": {"type": "integer", "minimum": 1, "maximum": 10}, "minItems": 1},
            "divergences": {"type": "array", "items": {"type": "string"}, "minItems": 1},
            "pairs": {"enum": ["haar_pair", "haar_vs_mixed", "induced_pair"]},
            "induced_r": {"type": "integer", "minimum": 1},
            "p_list": {"type": "array", "items": {"type": "number", "minimum": 1}, "minItems": 1},
            "samples_per_n": {
                "type": "object",
                "patternProperties": {"^[0-9]+$": {"type": "integer", "minimum": 1}},
                "additionalProperties": False,
            },
            "denominator_mode": {"enum": [SAMPLED, EXACT_WHEN_AVAILABLE]},
            "seed": _SEED,
        },
        "required": ["channel_family", "n_values", "divergences", "pairs"],
        "additionalProperties": False,
    },
    "bounds": {
        "type": "object",
        "properties": {
            "channel": _CHANNEL_SCHEMA,
            "n": {"type": "integer", "minimum": 1, "maximum": 64},
            "epsilon": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
            "delta": {"type": "number", "exclusiveMinimum": 0},
            "depth": {"type": "integer", "minimum": 0},
            "seed": _SEED,
        },
        "required": ["channel"],
        "additionalProperties": False,
    },
    "circuit": {
        "type": "object",
        "properties": {
            "n_qubits": {"type": "integer", "minimum": 1, "maximum": 12},
            "depths": {"type": "array", "items": {"type": "integer", "minimum": 0}},
            "layer_ensemble": {"enum": list(LAYER_ENSEMBLES)},
            "noise": {
                "type": "object",
                "properties": {
                    "family": {"enum": ["depolarizing", "dephasing", "pauli", "identity"]},
                    "param": {"type": "number", "minimum": 0, "maximum": 1},
                    "q": {"type": "number", "minimum": 0, "maximum": 1},
                },
                "required": ["family"],
                "additionalProperties": False,
            },
            "input_ensemble": {"enum": ["haar", "computational"]},
            "modes": {"type": "array", "items": {"enum": [PAIR, VS_MIXED]}, "minItems": 1},
            "n_samples": {"type": "integer", "minimum": 1},
            "seed": _SEED,
        },
        "required": ["n_qubits", "depths", "noise"],
        "additionalProperties": False,
    },
    "phase-diagram": {
        "type": "object",
        "properties": {"grid": {"type": "integer", "minimum": 2, "maximum": 1001}, "seed": _SEED},
        "additionalProperties": False,
    },
    "ldp": {
        "type": "object",
        "properties": {
            "channel": _CHANNEL_SCHEMA,
            "n": {"type": "integer", "minimum": 1, "maximum": 8},
            "epsilon": {"type": "number", "minimum": 0},
            "n_random": {"type": "integer", "minimum": 0},
            "classifier": {
                "type": "object",
                "properties": {
                    "p": {"type": "array", "items": {"type": "number", "minimum": 0}, "minItems": 1},
                    "q": {"type": "array", "items": {"type": "number", "minimum": 0}, "minItems": 1},
                },
                "required": ["p", "q"],
                "additionalProperties": False,
            },
            "seed": _SEED,
        },
        "required": ["channel", "epsilon"],
        "additionalProperties": False,
    },
    "selftest": {
        "type": "object",
        "properties": {"seed": _SEED},
        "additionalProperties": False,
    },
}


# ---------------------------------------------------------------------------
# Helpers


def _fmt(x: Any) -> str:
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return repr(x)
    return str(x)


def config_hash(cfg: dict) -> str:
    blob = json.dumps(cfg, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def _write_csv(path: Optional[str], cfg: dict, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    buf = io.StringIO()
    buf.write(f"# contractio {__version__}\n")
    buf.write(f"# config_sha256 {config_hash(cfg)}\n")
    buf.write(f"# seed {cfg.get('seed', 0)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(x) for x in r])
    _emit(path, buf.getvalue())


def _write_json(path: Optional[str], payload: dict) -> None:
    _emit(path, json.dumps(payload, indent=2, ensure_ascii=False, allow_nan=False, default=_json_default) + "\n")


def _json_default(x: Any) -> Any:
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(f"not JSON serializable: {type(x).__name__}")


def _finite(x: float) -> Any:
    x = float(x)
    if math.isfinite(x):
        return x
    return None if math.isnan(x) else ("inf" if x > 0 else "-inf")


def _emit(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _local_channel(family: str, param: float) -> KrausChannel:
    if family == "depolarizing":
        return depolarizing(param)
    if family == "dephasing":
        return dephasing(param)
    if family == "amplitude_damping":
        return amplitude_damping(param)
    raise ConfigError(f"family {family!r} has no single-qubit form")


def sweep_channel(family: str, param: float, n: int) -> ChannelLike:
    """Channel on ``n`` qubits for a sweep: product of local copies, or global depolarizing."""
    if family == "global_depolarizing":
        if n > MAX_GLOBAL_DEPOL_QUBITS:
            raise ConfigError(f"global_depolarizing supports at most {MAX_GLOBAL_DEPOL_QUBITS} qubits")
        return global_depolarizing(param, n)
    local = _local_channel(family, param)
    return local if n == 1 else ProductChannelSpec(local, n)


def _config_channel(spec: dict) -> KrausChannel:
    family = spec["family"]
    if family == "pauli":
        return pauli_channel(spec.get("param", 0.0), spec.get("q", 0.0))
    if family == "partial_trace":
        if "N" not in spec or "M" not in spec:
            raise ConfigError("partial_trace needs N and M")
        return partial_trace_channel(spec["N"], spec["M"])
    if family == "global_depolarizing":
        raise ConfigError("use family 'depolarizing' with n for product noise; global_depolarizing is sweep-only")
    if "param" not in spec:
        raise ConfigError(f"family {family!r} needs 'param'")
    return _local_channel(family, spec["param"])


def _param_values(cfg: dict) -> list[float]:
    if "param_values" in cfg and "param_grid" in cfg:
        raise ConfigError("give either param_values or param_grid, not both")
    if "param_values" in cfg:
        return [float(x) for x in cfg["param_values"]]
    if "param_grid" in cfg:
        g = cfg["param_grid"]
        if g["stop"] < g["start"]:
            return []
        count = int(math.floor((g["stop"] - g["start"]) / g["step"] + 1e-9)) + 1
        return [round(g["start"] + k * g["step"], 12) for k in range(count)]
    return []


def _pairs(kind: str, d: int, r: Optional[int]):
    if kind == "haar_pair":
        return ProductDistinct(HaarPure(d))
    if kind == "haar_vs_mixed":
        return VsMaximallyMixed(HaarPure(d))
    return ProductDistinct(InducedMixed(d, d if r is None else r))


# ---------------------------------------------------------------------------
# Commands

SWEEP_HEADER = ["channel_family", "param_value", "n", "divergence", "p", "eta_p", "stderr", "n_samples", "seed"]


def cmd_sweep(cfg: dict, out: Optional[str], threads: int) -> int:
    params = _param_values(cfg)
    divs = [parse_divergence(name) for name in cfg["divergences"]]
    p_list = [float(p) for p in cfg.get("p_list", [1.0])]
    overrides = {int(k): int(v) for k, v in cfg.get("samples_per_n", {}).items()}
    seed = SeedSpec(int(cfg.get("seed", 0)))
    mode = cfg.get("denominator_mode", SAMPLED)
    rows = []
    for i, param in enumerate(params):
        for n in cfg["n_values"]:
            ch = sweep_channel(cfg["channel_family"], param, n)
            n_samples = overrides.get(n, default_samples(n))
            pairs = _pairs(cfg["pairs"], 2**n, cfg.get("induced_r"))
            for div in divs:
                req = MomentRequest(ch, div, pairs, p_list, n_samples, seed, mode, task=1000 * i + n)
                for est in estimate_moments(req, threads=threads):
                    rows.append(
                        [cfg["channel_family"], param, n, divergence_name(div), est.p, est.eta_p, est.stderr, est.n_used, seed.master_seed]
                    )
    _write_csv(out, cfg, SWEEP_HEADER, rows)
    return EXIT_OK


def bounds_bundle(cfg: dict) -> dict:
    """Every applicable report for the configured channel."""
    local = _config_channel(cfg["channel"])
    n = int(cfg.get("n", 1))
    eps = float(cfg.get("epsilon", 0.1))
    delta = float(cfg.get("delta", 0.05))
    depth = int(cfg.get("depth", 1))
    reports: list[bnd.BoundReport] = []
    square = local.d_in == local.d_out
    ch: ChannelLike = local if n == 1 else ProductChannelSpec(local, n)
    if n == 1 or square:
        reports.append(bnd.hs_upper(ch))
        reports.append(bnd.hs_second_moment(ch))
    reports.append(bnd.hs_dim_reduction(ch))
    if square:
        reports.append(bnd.hs_upper_product(local, n))
        reports.append(bnd.design2_upper_product(local, n))
        reports.append(bnd.design2_vs_mixed(local, n))
    else:
        reports.append(bnd.design2_upper(local))
    reports.append(bnd.typicality_lower(local, n, eps, delta))
    if square and local.d_in == 2 and is_unital(local):
        reports.append(bnd.circuit_lower(local, n, depth, eps, delta))
    family = cfg["channel"]["family"]
    if family == "amplitude_damping":
        reports.append(bnd.amplitude_damping_report())
    fn = choi_functionals(local)
    verdicts: dict[str, Any] = {
        "typicality": bnd.typicality_verdict(local),
        "design2_product": bnd.VERDICT_ZERO if fn.sqrt_trace < 1.0 - bnd.TIE_TOL else bnd.VERDICT_UNDETERMINED,
    }
    if family == "depolarizing":
        th = bnd.depol_thresholds()
        verdicts["depolarizing_thresholds"] = {"p1": th.p1, "p2": th.p2}
    if family == "partial_trace":
        verdicts["partial_trace"] = bnd.partial_trace_verdict(cfg["channel"]["N"], cfg["channel"]["M"])
    if family == "pauli":
        verdicts["pauli_region"] = bnd.pauli_region(cfg["channel"].get("param", 0.0), cfg["channel"].get("q", 0.0))
    if is_unital(local):
        verdicts["chi2_unital_avg"] = bnd.chi2_unital_avg(ch)
    return {
        "channel": local.label,
        "n": n,
        "choi": {
            "purity": fn.purity,
            "entropy_bits": fn.entropy_bits,
            "sqrt_trace": fn.sqrt_trace,
            "pi_purity": fn.pi_purity,
            "pi_infnorm": fn.pi_infnorm,
        },
        "reports": [r.to_json() for r in reports],
        "verdicts": verdicts,
    }


def cmd_bounds(cfg: dict, out: Optional[str], threads: int) -> int:
    _write_json(out, {"version": __version__, "config_sha256": config_hash(cfg), **bounds_bundle(cfg)})
    return EXIT_OK


def cmd_phase_diagram(cfg: dict, out: Optional[str], threads: int) -> int:
    g = int(cfg.get("grid", 101))
    rows = []
    for i in range(g):
        for j in range(g - i):
            p, q = i / (g - 1), j / (g - 1)
            rows.append([p, q, bnd.pauli_region(p, q)])
    _write_csv(out, cfg, ["p", "q", "region"], rows)
    return EXIT_OK


def _circuit_noise(spec: dict) -> Optional[KrausChannel]:
    family = spec["family"]
    if family == "identity":
        return None
    if family == "pauli":
        return pauli_channel(spec.get("param", 0.0), spec.get("q", 0.0))
    if "param" not in spec:
        raise ConfigError(f"noise family {family!r} needs 'param'")
    return _local_channel(family, spec["param"])


def cmd_circuit(cfg: dict, out: Optional[str], threads: int) -> int:
    n = int(cfg["n_qubits"])
    ens = ComputationalBasisUniform(2**n) if cfg.get("input_ensemble", "haar") == "computational" else HaarPure(2**n)
    config = CircuitConfig(
        n_qubits=n,
        depth=max(cfg["depths"], default=0),
        layer_ensemble=cfg.get("layer_ensemble", LAYER_ENSEMBLES[0]),
        noise=_circuit_noise(cfg["noise"]),
        input_ensemble=ens,
        n_samples=int(cfg.get("n_samples", 100)),
        seed=SeedSpec(int(cfg.get("seed", 0))),
    )
    rows = avg_contraction_vs_depth(config, cfg["depths"], tuple(cfg.get("modes", [PAIR, VS_MIXED])), threads)
    _write_csv(out, cfg, ["depth", "mode", "mean", "stderr", "n_samples"], [[r.depth, r.mode, r.mean, r.stderr, r.n_samples] for r in rows])
    return EXIT_OK


def cmd_ldp(cfg: dict, out: Optional[str], threads: int) -> int:
    local = _config_channel(cfg["channel"])
    n = int(cfg.get("n", 1))
    ch: ChannelLike = local if n == 1 else ProductChannelSpec(local, n)
    eps = float(cfg["epsilon"])
    rng = SeedSpec(int(cfg.get("seed", 0))).rng(0, 0)
    n_random = int(cfg.get("n_random", 64))
    found = bnd.ldp_epsilon(ch, n_random, rng)
    payload: dict[str, Any] = {
        "version": __version__,
        "config_sha256": config_hash(cfg),
        "channel": local.label,
        "n": n,
        "epsilon": eps,
        "epsilon_lower_estimate": _finite(found),
        "audit": "certified-violation" if found > eps + 1e-12 else "heuristic-satisfaction",
        "choi_purity_check": bnd.ldp_choi_purity_check(ch, eps),
        "avc_upper": bnd.ldp_avc_upper(ch, eps).to_json(),
        "min_noise_depolarizing": {
            "local": bnd.ldp_min_noise_depolarizing(eps, n, "local"),
            "global": bnd.ldp_min_noise_depolarizing(eps, n, "global"),
        },
    }
    if "classifier" in cfg:
        cb = bnd.classifier_bounds(cfg["classifier"]["p"], cfg["classifier"]["q"], eps)
        payload["classifier"] = {
            "precision": cb.precision.tolist(),
            "recall": cb.recall.tolist(),
            "accuracy": cb.accuracy,
        }
    _write_json(out, payload)
    return EXIT_OK


def selftest_checks(seed: int = 0) -> list[tuple[str, bool, str]]:
    """Fast invariant suite; returns ``(name, ok, detail)`` per check."""
    from . import linalg as la
    from .channels import choi, random_channel
    from .divergences import KL_GENERATOR, f_divergence_integral, trace_distance
    from .ensembles import sample_haar_unitary, sample_induced_mixed

    ss = SeedSpec(seed)
    checks: list[tuple[str, bool, str]] = []

    def check(name: str, fn: Callable[[], tuple[bool, str]]) -> None:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failed anchor, reported by name
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        checks.append((name, bool(ok), detail))

    def alpha_anchor():
        return abs(bnd.ALPHA - 1.24423) < 1e-4, f"alpha={bnd.ALPHA!r}"

    def dconc_anchor():
        return abs(bnd.D_CONC - 0.568310) < 1e-5, f"D_conc={bnd.D_CONC!r}"

    def partial_trace_product():
        rng = ss.rng(90, 0)
        a, b = sample_induced_mixed(2, 2, rng), sample_induced_mixed(3, 3, rng)
        err = float(np.max(np.abs(la.partial_trace(np.kron(a, b), [2, 3], [1]) - b)))
        return err < 1e-12, f"err={err:.2e}"

    def haar_unitary():
        u = sample_haar_unitary(6, ss.rng(90, 1))
        err = float(np.linalg.norm(u.conj().T @ u - np.eye(6)))
        return err < 1e-12, f"err={err:.2e}"

    def choi_facts():
        worst = 0.0
        for k in range(5):
            ch = random_channel(2, 2, 2 + k % 2, ss.rng(90, 10 + k))
            fn = choi_functionals(ch)
            tau = choi(ch).matrix
            worst = max(worst, abs(fn.purity - float(np.sum(la.hermitian_eigvals(tau) ** 2))))
            pi_state = ch(np.eye(2) / 2)
            low = la.hermitian_eigvals(2 * fn.tr2_choi_sq - pi_state @ pi_state)[0]
            if low < -1e-10 or not (fn.pi_purity / 2 - 1e-12 <= fn.purity <= 1 + 1e-12):
                return False, f"channel {k} violates a purity fact"
        return worst < 1e-9, f"purity mismatch {worst:.2e}"

    def global_depol_exact():
        ch = global_depolarizing(0.3, 2)
        req = MomentRequest(ch, parse_divergence("tr"), ProductDistinct(HaarPure(4)), (1.0,), 50, ss, task=91)
        est = estimate_moments(req)[0]
        return abs(est.eta_p - 0.7) < 1e-9, f"eta_1={est.eta_p!r}"

    def pinsker():
        rng = ss.rng(90, 30)
        for _ in range(5):
            r, s = sample_induced_mixed(2, 3, rng), sample_induced_mixed(2, 3, rng)
            lhs = f_divergence_integral(KL_GENERATOR, r, s)
            if lhs < 0.5 * trace_distance(r, s) ** 2 - 1e-8:
                return False, "Pinsker inequality violated"
        return True, "5 pairs"

    def design2_dephasing():
        v = bnd.design2_vs_mixed(dephasing(1.0)).value
        target = 1.0 / (2.0 * math.sqrt(1.0 - 0.25))
        return abs(v - target) < 1e-10, f"value={v!r}"

    check("constant.alpha", alpha_anchor)
    check("constant.d_conc", dconc_anchor)
    check("linalg.partial_trace_product", partial_trace_product)
    check("ensembles.haar_unitary", haar_unitary)
    check("channels.choi_facts", choi_facts)
    check("estimator.global_depolarizing", global_depol_exact)
    check("divergences.pinsker", pinsker)
    check("bounds.design2_dephasing", design2_dephasing)
    return checks


def cmd_selftest(cfg: dict, out: Optional[str], threads: int) -> int:
    start = time.perf_counter()
    checks = selftest_checks(int(cfg.get("seed", 0)))
    lines = [f"{'PASS' if ok else 'FAIL'} {name}: {detail}" for name, ok, detail in checks]
    failed = [name for name, ok, _ in checks if not ok]
    lines.append(f"{len(checks) - len(failed)}/{len(checks)} passed in {time.perf_counter() - start:.1f}s")
    text = "\n".join(lines) + "\n"
    if out is not None and out != "-":
        _emit(out, text)
    sys.stdout.write(text)
    return EXIT_SELFTEST if failed else EXIT_OK


COMMANDS: dict[str, Callable[[dict, Optional[str], int], int]] = {
    "sweep": cmd_sweep,
    "bounds": cmd_bounds,
    "circuit": cmd_circuit,
    "phase-diagram": cmd_phase_diagram,
    "ldp": cmd_ldp,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="contractio", description="Moments of contraction of quantum channels.")
    parser.add_argument("--version", action="version", version=f"contractio {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON config file", required=name != "selftest")
        p.add_argument("--out", help="output path; stdout when omitted")
        p.add_argument("--threads", type=int, default=None, help=f"worker threads (fallback: ${THREADS_ENV}, then 1)")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
    return parser


def _fail(code: int, kind: str, message: str) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message}, ensure_ascii=False) + "\n")
    return code


def _threads(arg: Optional[int]) -> int:
    if arg is not None:
        value = arg
    else:
        env = os.environ.get(THREADS_ENV, "").strip()
        try:
            value = int(env) if env else 1
        except ValueError as exc:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {env!r}") from exc
    if value < 1:
        raise ConfigError("thread count must be at least 1")
    return value


def load_config(command: str, path: Optional[str], seed: Optional[int]) -> dict:
    """Read, seed-override and schema-validate a config."""
    if path is None:
        cfg: dict = {}
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                cfg = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    if seed is not None:
        cfg["seed"] = seed
    try:
        jsonschema.validate(cfg, SCHEMAS[command])
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"{where}: {exc.message}") from exc
    return cfg


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        threads = _threads(args.threads)
        cfg = load_config(args.command, args.config, args.seed)
        return COMMANDS[args.command](cfg, args.out, threads)
    except (ConfigError, DomainError) as exc:
        return _fail(EXIT_CONFIG, type(exc).__name__, str(exc))
    except (QuadratureError, EmptyEstimateError, np.linalg.LinAlgError) as exc:
        return _fail(EXIT_NUMERICAL, type(exc).__name__, str(exc))
    except ContractioError as exc:
        return _fail(EXIT_NUMERICAL, type(exc).__name__, str(exc))


if __name__ == "__main__":
    sys.exit(main())
