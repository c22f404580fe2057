"""Seeded coefficient-vector samplers for the random-series experiments.

Five kinds cover the coefficient laws the experiments exercise:
independent isotropic coordinates with a linear concentration bound
(gaussian, uniform_continuous, laplace), a discrete uniform family whose
concentration does not shrink with the window (discrete_pm_M), and a
dependent isotropic log-concave family (uniform on a scaled l1 ball).

Streams are keyed by (seed, trial_index): every vector is a pure function of
those plus the spec and N, so trials can run on any number of threads in any
order and reproduce bit-exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from .errors import DegenerateInput

GAUSSIAN = "gaussian"
UNIFORM = "uniform_continuous"
LAPLACE = "laplace"
DISCRETE = "discrete_pm_M"
LOGCONCAVE = "logconcave_l1ball"

KINDS = (GAUSSIAN, UNIFORM, LAPLACE, DISCRETE, LOGCONCAVE)

_SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class DistributionSpec:
    """One coefficient distribution: its kind, atom parameter M (discrete
    kind only), isotropy flag, Lévy-concentration slope K with
    sup_t P(|a - t| < eps) <= K*eps (inf when no such slope exists), and an
    upper bound gamma for E|a|."""

    kind: str
    M: Optional[int]
    isotropic: bool
    levy_bound_K: float
    mean_abs_bound_gamma: float

    def to_dict(self) -> Dict:
        d = {"kind": self.kind}
        if self.M is not None:
            d["M"] = self.M
        return d

    @staticmethod
    def from_dict(d: Dict) -> "DistributionSpec":
        return distribution(d["kind"], M=d.get("M"))


def distribution(kind: str, M: Optional[int] = None) -> DistributionSpec:
    """Build the spec for one of the five supported kinds."""
    if kind == GAUSSIAN:
        return DistributionSpec(kind, None, True, 2.0 / math.sqrt(2.0 * math.pi),
                                math.sqrt(2.0 / math.pi))
    if kind == UNIFORM:
        return DistributionSpec(kind, None, True, 1.0 / _SQRT3, _SQRT3 / 2.0)
    if kind == LAPLACE:
        # density peak 1/sqrt(2) at unit variance, so the window mass
        # P(|a - t| < eps) is at most 2 * (1/sqrt(2)) * eps
        return DistributionSpec(kind, None, True, math.sqrt(2.0), 1.0 / math.sqrt(2.0))
    if kind == DISCRETE:
        if M is None or M < 1:
            raise DegenerateInput("discrete_pm_M needs an atom parameter M >= 1")
        gamma = M * (M + 1) / (2 * M + 1)
        return DistributionSpec(kind, int(M), False, math.inf, gamma)
    if kind == LOGCONCAVE:
        # coordinate marginal peaks below 1/sqrt(2) for every dimension, and
        # E|a| <= sqrt(3)/2 with the worst case at dimension 1
        return DistributionSpec(kind, None, True, math.sqrt(2.0), _SQRT3 / 2.0)
    raise DegenerateInput(f"unknown distribution kind {kind!r}")


@dataclass(frozen=True)
class CoefficientSample:
    coeffs: np.ndarray
    seed: int
    trial_index: int
    spec: DistributionSpec


def _trial_rng(seed: int, trial_index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=(int(seed), int(trial_index)))
    return np.random.Generator(np.random.Philox(ss))


def _l1ball_radius(dim: int) -> float:
    # unit coordinate variance: uniform on B_1^d has E x_i^2 = 2/((d+1)(d+2))
    return math.sqrt((dim + 1) * (dim + 2) / 2.0)


def sample(spec: DistributionSpec, N: int, seed: int, trial_index: int) -> CoefficientSample:
    """Draw the coefficient vector (a_0..a_N) for one trial."""
    if N < 0:
        raise ValueError("N must be >= 0")
    rng = _trial_rng(seed, trial_index)
    dim = N + 1
    if spec.kind == GAUSSIAN:
        coeffs = rng.standard_normal(dim)
    elif spec.kind == UNIFORM:
        coeffs = rng.uniform(-_SQRT3, _SQRT3, dim)
    elif spec.kind == LAPLACE:
        coeffs = rng.laplace(0.0, 1.0 / math.sqrt(2.0), dim)
    elif spec.kind == DISCRETE:
        coeffs = rng.integers(-spec.M, spec.M + 1, dim).astype(float)
    elif spec.kind == LOGCONCAVE:
        # exponential-spacing construction: (g_1..g_d)/(g_1+..+g_{d+1}) with
        # random signs is uniform on the solid l1 ball
        g = rng.standard_exponential(dim + 1)
        signs = np.where(rng.random(dim) < 0.5, -1.0, 1.0)
        coeffs = _l1ball_radius(dim) * signs * g[:dim] / np.sum(g)
    else:
        raise DegenerateInput(f"unknown distribution kind {spec.kind!r}")
    return CoefficientSample(coeffs=coeffs, seed=int(seed), trial_index=int(trial_index), spec=spec)


def empirical_levy(
    spec: DistributionSpec,
    epsilon: float,
    draws: int,
    seed: int = 0,
    N: int = 63,
) -> float:
    """Estimate sup_t P(|a - t| < eps) for the coordinate law by sliding a
    width-2*eps window over sorted coordinate draws.

    Draws come coordinate-wise from independent sample vectors of length N+1
    (the marginal of the l1-ball kind depends on that dimension; the
    independent kinds do not).
    """
    if draws < 10_000:
        raise ValueError("draws must be >= 1e4 for a stable window estimate")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    per = N + 1
    trials = (draws + per - 1) // per
    chunks = [sample(spec, N, seed, t).coeffs for t in range(trials)]
    xs = np.sort(np.concatenate(chunks)[:draws])
    hi = np.searchsorted(xs, xs + 2.0 * epsilon, side="left")
    counts = hi - np.arange(xs.size)
    return float(np.max(counts)) / draws
