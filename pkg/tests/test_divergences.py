from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from contractio.channels import random_channel
from contractio.divergences import (
    CHI2_GENERATOR,
    KL_GENERATOR,
    ChiSquaredClosed,
    FIntegral,
    HockeyStick,
    MaxRelativeEntropy,
    RelativeEntropy,
    TraceDistance,
    chi2_closed_form,
    classical_f_divergence,
    divergence,
    divergence_name,
    f_divergence_integral,
    f_divergence_integral_detailed,
    generator_by_name,
    hellinger_generator,
    hockey_stick,
    k_f,
    max_relative_entropy,
    parse_divergence,
    relative_entropy,
    reverse_pinsker_coefficient,
    thompson,
    trace_distance,
)
from contractio.errors import DomainError, InvalidShapeError

from conftest import random_density

GENERATORS = [KL_GENERATOR, CHI2_GENERATOR, hellinger_generator(0.5)]
ALL_SPECS = [
    TraceDistance(),
    HockeyStick(0.5),
    HockeyStick(2.0),
    RelativeEntropy(),
    MaxRelativeEntropy(),
    ChiSquaredClosed(),
    FIntegral(KL_GENERATOR),
    FIntegral(CHI2_GENERATOR),
    FIntegral(hellinger_generator(0.5)),
]

seeds = st.integers(0, 2**32 - 1)


def _pair(seed: int, d: int = 2):
    rng = np.random.default_rng(seed)
    return random_density(d, rng), random_density(d, rng)


def test_trace_distance_of_orthogonal_pure_states():
    assert trace_distance(np.diag([1.0, 0]), np.diag([0, 1.0])) == 1.0


def test_hockey_stick_special_values():
    rho, sigma = _pair(1)
    assert hockey_stick(rho, sigma, 1.0) == pytest.approx(trace_distance(rho, sigma))
    assert hockey_stick(rho, rho, 1.0) == 0.0
    big = math.exp(max_relative_entropy(rho, sigma))
    assert hockey_stick(rho, sigma, big * (1 + 1e-9)) == 0.0


def test_relative_entropy_support_and_classical():
    p, q = np.array([0.2, 0.8]), np.array([0.5, 0.5])
    assert relative_entropy(np.diag(p), np.diag(q)) == pytest.approx(float(np.sum(p * np.log(p / q))))
    assert math.isinf(relative_entropy(np.diag([0.5, 0.5]), np.diag([1.0, 0.0])))
    assert relative_entropy(np.diag([1.0, 0.0]), np.diag([0.5, 0.5])) == pytest.approx(math.log(2))


def test_max_relative_entropy_and_thompson():
    assert max_relative_entropy(np.diag([0.9, 0.1]), np.eye(2) / 2) == pytest.approx(math.log(1.8))
    assert math.isinf(max_relative_entropy(np.eye(2) / 2, np.diag([1.0, 0.0])))
    rho, sigma = _pair(2)
    assert thompson(rho, sigma) == pytest.approx(max(max_relative_entropy(rho, sigma), max_relative_entropy(sigma, rho)))


@given(seeds)
def test_integral_reduces_to_classical_on_commuting_pairs(seed):
    rng = np.random.default_rng(seed)
    p, q = rng.dirichlet(np.ones(3)), rng.dirichlet(np.ones(3))
    for f in GENERATORS:
        assert abs(f_divergence_integral(f, np.diag(p), np.diag(q)) - classical_f_divergence(f, p, q)) < 1e-7


@given(seeds)
def test_kl_integral_equals_umegaki(seed):
    rho, sigma = _pair(seed, 3)
    assert abs(f_divergence_integral(KL_GENERATOR, rho, sigma) - relative_entropy(rho, sigma)) < 1e-6


@given(seeds)
def test_chi2_integral_matches_closed_form(seed):
    rho, sigma = _pair(seed, 3)
    assert abs(f_divergence_integral(CHI2_GENERATOR, rho, sigma) - chi2_closed_form(rho, sigma)) < 1e-6


def test_integral_diagnostics_and_pure_first_argument():
    res = f_divergence_integral_detailed(KL_GENERATOR, *_pair(4))
    assert res.converged and res.abserr < 1e-8
    # Pure ρ against full-rank σ has finite f-divergence.
    pure = np.diag([1.0, 0.0])
    assert f_divergence_integral(KL_GENERATOR, pure, np.eye(2) / 2) == pytest.approx(math.log(2), abs=1e-7)


@given(seeds)
def test_pinsker_inequality(seed):
    rho, sigma = _pair(seed)
    td = trace_distance(rho, sigma)
    for f in GENERATORS:
        assert f_divergence_integral(f, rho, sigma) >= 0.5 * f.f2_at_1 * td**2 - 1e-8


@given(seeds)
def test_reverse_pinsker_inequality(seed):
    rho, sigma = _pair(seed)
    td = trace_distance(rho, sigma)
    a, b = max_relative_entropy(rho, sigma), max_relative_entropy(sigma, rho)
    for f in GENERATORS:
        assert f_divergence_integral(f, rho, sigma) <= reverse_pinsker_coefficient(f, a, b) * td + 1e-8


@given(seeds, st.sampled_from(range(len(ALL_SPECS))))
def test_data_processing(seed, k):
    rng = np.random.default_rng(seed)
    ch = random_channel(2, 2, int(rng.integers(1, 4)), rng)
    rho, sigma = random_density(2, rng), random_density(2, rng)
    spec = ALL_SPECS[k]
    before = divergence(spec, rho, sigma)
    after = divergence(spec, ch(rho), ch(sigma))
    assert after <= before + 1e-8


@given(st.floats(1.0, 50.0))
def test_k_f_nonnegative_and_zero_at_one(x):
    for f in GENERATORS:
        assert k_f(f, x) >= -1e-12
    assert k_f(KL_GENERATOR, 1.0) == 0.0


def test_reverse_pinsker_limits():
    assert math.isinf(reverse_pinsker_coefficient(KL_GENERATOR, math.inf, 1.0))
    assert reverse_pinsker_coefficient(KL_GENERATOR, 0.0, 0.0) == pytest.approx(0.0, abs=1e-12)


def test_chi2_closed_form_infinite_off_support():
    assert math.isinf(chi2_closed_form(np.eye(2) / 2, np.diag([1.0, 0.0])))


@pytest.mark.parametrize("name", ["tr", "re", "maxre", "chi2", "hs:2", "f:kl", "f:chi2", "f:hellinger:0.5"])
def test_parse_round_trip(name):
    assert divergence_name(parse_divergence(name)) == name


def test_bad_inputs():
    with pytest.raises(DomainError):
        parse_divergence("nope")
    with pytest.raises(DomainError):
        HockeyStick(0.0)
    with pytest.raises(DomainError):
        generator_by_name("hellinger:1")
    with pytest.raises(InvalidShapeError):
        trace_distance(np.eye(2), np.eye(3))
