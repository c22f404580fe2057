import json
import math

import numpy as np
import pytest

from padeclust import DegenerateInput
from padeclust.sampler import (
    DISCRETE,
    GAUSSIAN,
    KINDS,
    LAPLACE,
    LOGCONCAVE,
    UNIFORM,
    CoefficientSample,
    DistributionSpec,
    distribution,
    empirical_levy,
    sample,
)


def pooled_draws(spec, total, seed=42, per_vector=1000):
    n_trials = total // per_vector
    return np.concatenate(
        [sample(spec, per_vector - 1, seed, t).coeffs for t in range(n_trials)]
    )


# ---------------------------------------------------------------- specs

def test_distribution_kind_table():
    g = distribution(GAUSSIAN)
    assert g.isotropic and g.levy_bound_K == pytest.approx(2.0 / math.sqrt(2.0 * math.pi))
    u = distribution(UNIFORM)
    assert u.levy_bound_K == pytest.approx(1.0 / math.sqrt(3.0))
    l = distribution(LAPLACE)
    assert l.levy_bound_K == pytest.approx(math.sqrt(2.0))
    d = distribution(DISCRETE, M=10)
    assert not d.isotropic
    assert d.levy_bound_K == math.inf
    assert d.mean_abs_bound_gamma == pytest.approx(110.0 / 21.0)
    lc = distribution(LOGCONCAVE)
    assert lc.isotropic and math.isfinite(lc.levy_bound_K)


def test_distribution_rejects_bad_input():
    with pytest.raises(DegenerateInput):
        distribution("cauchy")
    with pytest.raises(DegenerateInput):
        distribution(DISCRETE)


def test_spec_serialization_round_trip():
    for kind in KINDS:
        spec = distribution(kind, M=7 if kind == DISCRETE else None)
        blob = json.dumps(spec.to_dict())
        assert DistributionSpec.from_dict(json.loads(blob)) == spec


# ---------------------------------------------------------------- determinism

def test_same_key_reproduces_bit_exactly():
    spec = distribution(GAUSSIAN)
    a = sample(spec, 50, seed=123, trial_index=7)
    b = sample(spec, 50, seed=123, trial_index=7)
    assert np.array_equal(a.coeffs, b.coeffs)
    assert a.trial_index == 7 and a.seed == 123


def test_neighbouring_keys_differ():
    spec = distribution(LOGCONCAVE)
    base = sample(spec, 20, seed=1, trial_index=0).coeffs
    assert not np.array_equal(base, sample(spec, 20, seed=1, trial_index=1).coeffs)
    assert not np.array_equal(base, sample(spec, 20, seed=2, trial_index=0).coeffs)


def test_sample_shape_and_kind():
    for kind in KINDS:
        spec = distribution(kind, M=5 if kind == DISCRETE else None)
        s = sample(spec, 9, seed=0, trial_index=0)
        assert isinstance(s, CoefficientSample)
        assert s.coeffs.shape == (10,)
    disc = sample(distribution(DISCRETE, M=5), 999, 0, 0).coeffs
    assert np.all(disc == np.round(disc)) and np.max(np.abs(disc)) <= 5


# ---------------------------------------------------------------- isotropy

def test_gaussian_n0_single_draw_statistics():
    spec = distribution(GAUSSIAN)
    vals = np.array([sample(spec, 0, 42, t).coeffs[0] for t in range(50_000)])
    assert vals.shape == (50_000,)
    # 4 standard errors at this count: +-0.018 on the mean, +-0.025 on the variance
    assert abs(vals.mean()) <= 0.018
    assert abs(vals.var() - 1.0) <= 0.025


@pytest.mark.parametrize("kind", [GAUSSIAN, UNIFORM, LAPLACE])
def test_independent_kinds_are_isotropic_at_1e6(kind):
    vals = pooled_draws(distribution(kind), 1_000_000)
    assert abs(vals.mean()) <= 0.004
    assert 0.996 <= vals.var() <= 1.004


def test_l1ball_is_isotropic_despite_dependence():
    spec = distribution(LOGCONCAVE)
    mats = np.stack([sample(spec, 63, 42, t).coeffs for t in range(15_625)])
    pooled = mats.ravel()
    assert abs(pooled.mean()) <= 0.004
    assert 0.996 <= pooled.var() <= 1.004
    per_coord = mats.var(axis=0)
    assert np.all(np.abs(per_coord - 1.0) <= 0.046)
    cov = np.cov(mats[:, :8].T)
    off = cov[~np.eye(8, dtype=bool)]
    assert np.max(np.abs(off)) <= 0.033


def test_discrete_variance_matches_closed_form():
    spec = distribution(DISCRETE, M=10)
    vals = pooled_draws(spec, 100_000)
    assert vals.var() == pytest.approx(10 * 11 / 3.0, abs=0.45)


# ---------------------------------------------------------------- Lévy window

def test_empirical_levy_examples():
    gauss = empirical_levy(distribution(GAUSSIAN), 0.1, 400_000, N=999)
    assert gauss == pytest.approx(0.0797, abs=0.004)
    unif = empirical_levy(distribution(UNIFORM), 0.1, 400_000, N=999)
    assert unif == pytest.approx(0.1 / math.sqrt(3.0), abs=0.004)
    disc = empirical_levy(distribution(DISCRETE, M=10), 0.5, 200_000, N=999)
    assert disc == pytest.approx(1.0 / 21.0, abs=0.003)


@pytest.mark.parametrize("kind", [GAUSSIAN, UNIFORM, LAPLACE, LOGCONCAVE])
def test_levy_linearity_for_continuous_kinds(kind):
    spec = distribution(kind)
    for eps in (0.01, 0.05, 0.1, 0.5):
        est = empirical_levy(spec, eps, 1_000_000, N=999)
        assert est <= spec.levy_bound_K * eps * 1.05


def test_discrete_levy_does_not_shrink_with_epsilon():
    spec = distribution(DISCRETE, M=10)
    small = empirical_levy(spec, 0.01, 50_000, N=999)
    half = empirical_levy(spec, 0.5, 50_000, N=999)
    assert small == pytest.approx(half, abs=0.01)


def test_empirical_levy_validates_input():
    spec = distribution(GAUSSIAN)
    with pytest.raises(ValueError):
        empirical_levy(spec, 0.1, 5000)
    with pytest.raises(ValueError):
        empirical_levy(spec, -0.1, 20_000)
