"""Named Monte Carlo protocols over the samplers, the approximant solver and
the clustering metrics.

Each protocol maps a batch of keyed trials (pure functions of
(seed, trial_index)) to TrialRecords and a summary dict.  Aggregation uses
exact counts, medians of sorted values and order-preserving maps, so results
are bit-identical for any worker count.  Probabilistic statements are checked
as event shapes and monotone trends: the theoretical constants behind them
are far too large to verify directly at desk scale, and summaries say so.
The deterministic clustering inequalities, by contrast, must hold on every
non-degenerate trial; a single violation aborts the run.

Per-trial wall times are deliberately not written to trials.csv (they would
break byte-level reproducibility); the summary carries the aggregate.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import __version__
from .cluster import (
    EmpiricalMeasure,
    annulus_mass,
    clustering_report,
    radial_two_sided_check,
    radius_R_s,
    zero_counting_integral,
)
from .errors import (
    DegenerateInput,
    DegenerateSystem,
    EndCoefficientZero,
    InvariantViolation,
    NonConvergence,
)
from .pade import et_bound_chain, et_ratio, pade
from .poly import Polynomial, find_roots
from .sampler import DISCRETE, GAUSSIAN, LOGCONCAVE, DistributionSpec, distribution, sample
from .toeplitz import assoc_matrix, build_triple, log_abs_det

SCHEMA_VERSION = 1

ET_CLUSTERING = "et-clustering"
DISCRETE_EXAMPLE = "discrete-example"
ANTICONCENTRATION = "toeplitz-anticoncentration"
DET_GROWTH = "det-growth"
ZERO_RADIUS = "zero-radius"
POLE_CLUSTERING = "pole-clustering"

PROTOCOLS = (
    ET_CLUSTERING,
    DISCRETE_EXAMPLE,
    ANTICONCENTRATION,
    DET_GROWTH,
    ZERO_RADIUS,
    POLE_CLUSTERING,
)

_METHOD_NOTE = (
    "probabilistic statements are checked as event shapes and monotone trends; "
    "the theoretical constants are too large to verify at desk scale"
)

IntOrList = Union[int, Sequence[int]]


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    spec: DistributionSpec
    trials: int = 100
    seed: int = 0
    m: Optional[IntOrList] = None
    n: Optional[IntOrList] = None
    N: Optional[int] = None
    delta: float = 0.5
    epsilon_grid: Tuple[float, ...] = (0.01, 0.05, 0.1)
    r_schedule: Tuple[float, ...] = (0.9, 0.95, 0.99, 0.995)
    s_list: Tuple[int, ...] = (4, 8, 16, 32, 64)
    rhos: Tuple[float, ...] = (0.05, 0.1, 0.2)
    grid_size: int = 256
    family_size: int = 16
    workers: int = 1
    precision: str = "double"

    def to_dict(self) -> Dict:
        d = {
            "schema_version": SCHEMA_VERSION,
            "name": self.name,
            "spec": self.spec.to_dict(),
            "trials": self.trials,
            "seed": self.seed,
            "delta": self.delta,
            "epsilon_grid": list(self.epsilon_grid),
            "r_schedule": list(self.r_schedule),
            "s_list": list(self.s_list),
            "rhos": list(self.rhos),
            "grid_size": self.grid_size,
            "family_size": self.family_size,
            "workers": self.workers,
            "precision": self.precision,
        }
        for key, val in (("m", self.m), ("n", self.n), ("N", self.N)):
            if val is not None:
                d[key] = list(val) if isinstance(val, (tuple, list)) else val
        return d

    @staticmethod
    def from_dict(d: Dict) -> "ExperimentConfig":
        if d.get("schema_version", SCHEMA_VERSION) != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {d.get('schema_version')!r}")
        name = d.get("name")
        if name not in PROTOCOLS:
            raise ValueError(f"unknown experiment {name!r}; valid: {', '.join(PROTOCOLS)}")
        base = default_config(name)
        kwargs: Dict = {}
        if "spec" in d:
            kwargs["spec"] = DistributionSpec.from_dict(d["spec"])
        for key in ("trials", "seed", "N", "delta", "grid_size", "family_size",
                    "workers", "precision"):
            if key in d:
                kwargs[key] = d[key]
        for key in ("m", "n"):
            if key in d:
                v = d[key]
                kwargs[key] = tuple(v) if isinstance(v, (list, tuple)) else int(v)
        for key in ("epsilon_grid", "r_schedule", "rhos"):
            if key in d:
                kwargs[key] = tuple(float(x) for x in d[key])
        if "s_list" in d:
            kwargs["s_list"] = tuple(int(x) for x in d["s_list"])
        return replace(base, **kwargs)


_DEFAULTS: Dict[str, Dict] = {
    ET_CLUSTERING: dict(spec=distribution(GAUSSIAN), m=(50, 100, 200, 400), n=1, trials=200),
    DISCRETE_EXAMPLE: dict(spec=distribution(DISCRETE, M=100), m=(200, 400, 800), n=10, trials=100),
    ANTICONCENTRATION: dict(spec=distribution(GAUSSIAN), n=(2, 5, 10, 20), trials=10_000),
    DET_GROWTH: dict(spec=distribution(GAUSSIAN), n=2, m=(64, 128, 256, 512), trials=50),
    ZERO_RADIUS: dict(spec=distribution(GAUSSIAN), N=2048, trials=50),
    POLE_CLUSTERING: dict(spec=distribution(GAUSSIAN), m=1, n=(8, 16, 32), N=1024, trials=30),
}


def default_config(name: str, **overrides) -> ExperimentConfig:
    if name not in _DEFAULTS:
        raise ValueError(f"unknown experiment {name!r}; valid: {', '.join(PROTOCOLS)}")
    merged = dict(_DEFAULTS[name])
    merged.update(overrides)
    return ExperimentConfig(name=name, **merged)


@dataclass(frozen=True)
class TrialRecord:
    trial_index: int
    degenerate: bool
    excluded: bool
    reason: str
    values: Dict[str, object]


# ---------------------------------------------------------------------------
# shared plumbing


def _as_tuple(v: Optional[IntOrList]) -> Tuple[int, ...]:
    if v is None:
        return ()
    if isinstance(v, (tuple, list)):
        return tuple(int(x) for x in v)
    return (int(v),)


def _map_units(units: Sequence, fn: Callable, workers: int) -> List:
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(fn, units))
    return [fn(u) for u in units]


def _median(values: Sequence[float]) -> float:
    if not values:
        return math.nan
    return float(np.median(np.sort(np.asarray(values, dtype=float))))


def _check_clustering(poly: Polynomial, mu: EmpiricalMeasure, config: ExperimentConfig,
                      context: str):
    """Evaluate the deterministic clustering inequalities; raise on breach.

    Enforced forms are theorems for every polynomial with nonzero end
    coefficients, so a single failure means a bug, not bad luck.  The radial
    inequality is enforced in its two-sided form: the sharper one-sided
    ceiling reported by clustering_report fails for end-unbalanced
    polynomials such as Pade denominators whose roots all sit well inside
    the unit disc (see radial_two_sided_check).
    """
    et = et_ratio(poly)
    rep = clustering_report(mu, et, rhos=config.rhos, grid_size=config.grid_size,
                            family_size=config.family_size)
    failed = [k for k, ok in rep.inequality_flags.items()
              if not ok and not k.startswith("radial_")]
    for rho in config.rhos:
        if not radial_two_sided_check(mu, et, rho).holds:
            failed.append(f"radial_{rho:g}")
    if failed:
        raise InvariantViolation(
            f"deterministic clustering inequality broken ({', '.join(failed)}) in {context}"
        )
    return rep


def _check_mass_inequality(coeffs: np.ndarray, pair, context: str) -> None:
    lhs = float(np.sum(np.abs(pair.p.coeffs)))
    rhs = float(np.sum(np.abs(pair.q.coeffs)) * np.sum(np.abs(coeffs[: pair.m + 1])))
    if lhs > rhs * (1.0 + 1e-12):
        raise InvariantViolation(
            f"coefficient-mass inequality broken in {context}: {lhs:.6e} > {rhs:.6e}"
        )


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, float):
        return repr(float(v))
    return str(v)


BASE_COLUMNS = ("trial", "degenerate", "excluded", "reason")


def write_trials_csv(path: Path, columns: Sequence[str], records: Sequence[TrialRecord]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(list(BASE_COLUMNS) + list(columns))
        for rec in records:
            row = [
                str(rec.trial_index),
                _fmt(rec.degenerate),
                _fmt(rec.excluded),
                rec.reason,
            ]
            row += [_fmt(rec.values.get(c)) for c in columns]
            writer.writerow(row)


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    h.update(Path(path).read_bytes())
    return h.hexdigest()


# ---------------------------------------------------------------------------
# protocol: decay of the end-coefficient ratio (continuous coefficients)


ET_COLUMNS = (
    "m", "n", "et_log", "et_log_over_m", "log_l1_bound", "log_cauchy_binet_bound",
    "log_amgm_bound", "order_residual", "condition", "sector_discrepancy",
    "bl_upper", "bl_lower", "max_radial_defect",
)


def _et_style_trial(config: ExperimentConfig, m_values: Tuple[int, ...], n: int,
                    trial: int, check_roots: bool) -> List[TrialRecord]:
    coeffs = sample(config.spec, config.N, config.seed, trial).coeffs
    records: List[TrialRecord] = []
    for m in m_values:
        values: Dict[str, object] = {"m": m, "n": n}
        window = coeffs[: m + n + 2]
        try:
            pair = pade(window, m, n, precision=config.precision)
        except DegenerateSystem:
            records.append(TrialRecord(trial, True, False, "degenerate_system", values))
            continue
        _check_mass_inequality(window, pair, f"trial {trial}, m={m}, n={n}")
        values["order_residual"] = pair.diagnostics["order_residual"]
        values["condition"] = pair.diagnostics["condition"]
        try:
            ratio = et_ratio(pair.p)
            chain = et_bound_chain(window, build_triple(window, m, n), pair)
        except EndCoefficientZero:
            records.append(TrialRecord(trial, False, True, "end_coefficient_zero", values))
            continue
        except DegenerateSystem:
            records.append(TrialRecord(trial, False, True, "singular_window", values))
            continue
        values["et_log"] = ratio.log_value
        values["et_log_over_m"] = ratio.log_value / m
        values["log_l1_bound"] = chain.log_l1
        values["log_cauchy_binet_bound"] = chain.log_cauchy_binet
        values["log_amgm_bound"] = chain.log_amgm
        if check_roots:
            try:
                roots = find_roots(pair.p)
            except NonConvergence:
                records.append(TrialRecord(trial, False, True, "nonconvergence", values))
                continue
            rep = _check_clustering(pair.p, EmpiricalMeasure(roots), config,
                                    f"trial {trial}, m={m}, n={n}")
            values["sector_discrepancy"] = rep.max_sector_discrepancy
            values["bl_upper"] = rep.bl_upper
            values["bl_lower"] = rep.bl_lower_estimate
            values["max_radial_defect"] = max(rep.radial_defect.values())
        records.append(TrialRecord(trial, False, False, "", values))
    return records


def _summarize_et(config: ExperimentConfig, records: List[TrialRecord]) -> Dict:
    m_values = _as_tuple(config.m)
    per_m: Dict[str, Dict] = {}
    threshold = config.delta ** 4
    for m in m_values:
        sub = [r for r in records if r.values.get("m") == m]
        good = [r for r in sub if not (r.degenerate or r.excluded)]
        ratios = [r.values["et_log_over_m"] for r in good]
        per_m[str(m)] = {
            "trials": len(sub),
            "degenerate": sum(1 for r in sub if r.degenerate),
            "excluded": sum(1 for r in sub if r.excluded),
            "median_et_log_over_m": _median(ratios),
            "fraction_exceeding_delta4": (
                sum(1 for v in ratios if v > threshold) / len(ratios) if ratios else math.nan
            ),
            "median_log_amgm_bound": _median([r.values["log_amgm_bound"] for r in good]),
        }
    medians = [per_m[str(m)]["median_et_log_over_m"] for m in m_values]
    return {
        "per_m": per_m,
        "delta": config.delta,
        "medians_strictly_decreasing": bool(
            all(a > b for a, b in zip(medians[:-1], medians[1:]))
        ),
        "degenerate": sum(1 for r in records if r.degenerate),
        "excluded": sum(1 for r in records if r.excluded),
        "note": _METHOD_NOTE,
    }


def run_et_clustering(config: ExperimentConfig):
    m_values = _as_tuple(config.m)
    (n,) = _as_tuple(config.n) or (1,)
    if not m_values:
        raise ValueError("et-clustering needs at least one m value")
    if config.N is None:
        config = replace(config, N=max(m_values) + n + 1)
    if config.N < max(m_values) + n + 1:
        raise ValueError("N must be at least max(m) + n + 1")
    fn = lambda t: _et_style_trial(config, m_values, n, t, check_roots=True)
    batches = _map_units(range(config.trials), fn, config.workers)
    records = [rec for batch in batches for rec in batch]
    return ET_COLUMNS, records, _summarize_et(config, records)


# ---------------------------------------------------------------------------
# protocol: discrete coefficients (atoms can make the window singular)


def run_discrete_example(config: ExperimentConfig):
    if config.spec.kind != DISCRETE:
        raise ValueError("discrete-example needs a discrete_pm_M distribution")
    if config.spec.M < 2:
        raise ValueError("discrete-example needs M >= 2")
    m_values = _as_tuple(config.m)
    (n,) = _as_tuple(config.n) or (10,)
    if not m_values:
        raise ValueError("discrete-example needs at least one m value")
    if config.N is None:
        config = replace(config, N=max(m_values) + n + 1)
    if config.N < max(m_values) + n + 1:
        raise ValueError("N must be at least max(m) + n + 1")
    fn = lambda t: _et_style_trial(config, m_values, n, t, check_roots=True)
    batches = _map_units(range(config.trials), fn, config.workers)
    records = [rec for batch in batches for rec in batch]
    summary = _summarize_et(config, records)
    xs, ys = [], []
    M = config.spec.M
    for m in m_values:
        med = summary["per_m"][str(m)]["median_et_log_over_m"]
        if math.isfinite(med):
            xs.append(n * math.log(n * M) / m)
            ys.append(med)
    if len(xs) >= 2:
        slope, intercept = np.polyfit(np.asarray(xs), np.asarray(ys), 1)
        summary["affine_model"] = {
            "x": "n*log(n*M)/m",
            "intercept": float(intercept),
            "slope": float(slope),
        }
    summary["degenerate_fraction"] = (
        summary["degenerate"] / len(records) if records else math.nan
    )
    return ET_COLUMNS, records, summary


# ---------------------------------------------------------------------------
# protocol: small-determinant probability of the square coefficient window


ANTICONC_COLUMNS = ("n", "det_abs_root", "singular")


def _anticonc_trial(config: ExperimentConfig, n: int, offset: int, trial: int) -> TrialRecord:
    coeffs = sample(config.spec, 2 * n - 2, config.seed, offset + trial).coeffs
    res = log_abs_det(assoc_matrix(coeffs, n - 1, n))
    root = 0.0 if res.singular else math.exp(res.log_abs / n)
    return TrialRecord(trial, False, False, "", {
        "n": n, "det_abs_root": root, "singular": res.singular,
    })


def run_toeplitz_anticoncentration(config: ExperimentConfig):
    n_values = _as_tuple(config.n)
    if not n_values or min(n_values) < 1:
        raise ValueError("toeplitz-anticoncentration needs n >= 1")
    records: List[TrialRecord] = []
    per_n: Dict[str, Dict] = {}
    for idx, n in enumerate(n_values):
        offset = idx * config.trials
        fn = lambda t: _anticonc_trial(config, n, offset, t)
        batch = _map_units(range(config.trials), fn, config.workers)
        records.extend(batch)
        roots_ = np.sort(np.asarray([r.values["det_abs_root"] for r in batch]))
        cdf: Dict[str, float] = {}
        bound: Dict[str, float] = {}
        within: Dict[str, bool] = {}
        for eps in config.epsilon_grid:
            p_hat = float(np.searchsorted(roots_, eps, side="left")) / config.trials
            cdf[repr(float(eps))] = p_hat
            if math.isfinite(config.spec.levy_bound_K):
                cap = n * config.spec.levy_bound_K * eps
                se = math.sqrt(max(p_hat * (1 - p_hat), 1.0 / config.trials) / config.trials)
                bound[repr(float(eps))] = cap
                within[repr(float(eps))] = bool(p_hat <= cap + 3 * se)
        per_n[str(n)] = {"cdf": cdf, "bound_nK_eps": bound, "within_3se": within}
    summary: Dict = {
        "per_n": per_n,
        "degenerate": 0,
        "excluded": 0,
        "note": _METHOD_NOTE,
    }
    if config.spec.kind == LOGCONCAVE and len(n_values) >= 2:
        xs, ys = [], []
        for n in n_values:
            for eps in config.epsilon_grid:
                p_hat = per_n[str(n)]["cdf"][repr(float(eps))]
                if p_hat > 0:
                    xs.append(math.log(n))
                    ys.append(math.log(p_hat) - math.log(eps))
        if len(xs) >= 2:
            c, logC = np.polyfit(np.asarray(xs), np.asarray(ys), 1)
            summary["fitted_power_law"] = {
                "form": "P(|det A|^(1/n) < eps) ~ C * n^c * eps",
                "C": float(math.exp(logC)),
                "c": float(c),
            }
    return ANTICONC_COLUMNS, records, summary


# ---------------------------------------------------------------------------
# protocol: growth of |det A_m^(n)|^(1/m) toward 1


DET_GROWTH_COLUMNS = ("m", "n", "log_abs_det", "growth", "deviation", "singular")


def _det_growth_trial(config: ExperimentConfig, m_values: Tuple[int, ...], n: int,
                      trial: int) -> List[TrialRecord]:
    coeffs = sample(config.spec, max(m_values) + n - 1, config.seed, trial).coeffs
    out: List[TrialRecord] = []
    for m in m_values:
        res = log_abs_det(assoc_matrix(coeffs, m, n))
        values: Dict[str, object] = {"m": m, "n": n, "singular": res.singular}
        if res.singular:
            out.append(TrialRecord(trial, True, False, "singular_window", values))
            continue
        growth = math.exp(res.log_abs / m)
        values.update({
            "log_abs_det": res.log_abs,
            "growth": growth,
            "deviation": abs(growth - 1.0),
        })
        out.append(TrialRecord(trial, False, False, "", values))
    return out


def run_det_growth(config: ExperimentConfig):
    m_values = _as_tuple(config.m)
    (n,) = _as_tuple(config.n) or (2,)
    if not m_values or min(m_values) < 1:
        raise ValueError("det-growth needs a schedule of m >= 1")
    fn = lambda t: _det_growth_trial(config, m_values, n, t)
    batches = _map_units(range(config.trials), fn, config.workers)
    records = [rec for batch in batches for rec in batch]
    per_m: Dict[str, Dict] = {}
    for m in m_values:
        devs = [r.values["deviation"] for r in records
                if r.values.get("m") == m and not r.degenerate]
        per_m[str(m)] = {"median_deviation": _median(devs), "count": len(devs)}
    medians = [per_m[str(m)]["median_deviation"] for m in m_values]
    largest = [r.values["deviation"] for r in records
               if r.values.get("m") == max(m_values) and not r.degenerate]
    return DET_GROWTH_COLUMNS, records, {
        "per_m": per_m,
        "medians_decreasing": bool(all(a > b for a, b in zip(medians[:-1], medians[1:]))),
        "max_deviation_at_largest_m": max(largest) if largest else math.nan,
        "degenerate": sum(1 for r in records if r.degenerate),
        "excluded": 0,
        "note": _METHOD_NOTE,
    }


# ---------------------------------------------------------------------------
# protocol: zeros of the truncated random series near the unit circle


def _zero_radius_columns(config: ExperimentConfig) -> Tuple[str, ...]:
    cols = ["n_roots", "roots_in_unit_disc", "min_modulus", "et_log",
            "sector_discrepancy", "bl_upper", "bl_lower", "max_radial_defect"]
    cols += [f"ratio_r{repr(float(r))}" for r in config.r_schedule]
    cols += [f"profile_dev_r{repr(float(r))}" for r in config.r_schedule]
    cols += [f"rs_norm_s{s}" for s in config.s_list]
    return tuple(cols)


def _log_variance_profile(r: float, N: int) -> float:
    # log of sum_{k=0..N} r^(2k)
    return math.log1p(-r ** (2 * N + 2)) - math.log1p(-r * r)


def _find_roots_fallback(poly: Polynomial, precision: str):
    """Double precision with a rotated restart, then (if requested) the
    extended path; the slow path only ever runs on the rare stuck seed."""
    try:
        return find_roots(poly, precision="double")
    except NonConvergence:
        try:
            return find_roots(poly, precision="double", start_offset=0.37)
        except NonConvergence:
            if precision != "extended":
                raise
            return find_roots(poly, precision="extended")


def _zero_radius_trial(config: ExperimentConfig, trial: int) -> TrialRecord:
    coeffs = sample(config.spec, config.N, config.seed, trial).coeffs
    poly = Polynomial(coeffs)
    values: Dict[str, object] = {}
    try:
        roots = _find_roots_fallback(poly, config.precision)
    except NonConvergence:
        return TrialRecord(trial, False, True, "nonconvergence", values)
    moduli = roots.moduli
    values["n_roots"] = len(roots)
    values["roots_in_unit_disc"] = int(np.sum(moduli < 1.0))
    values["min_modulus"] = float(moduli[0])
    try:
        rep = _check_clustering(poly, EmpiricalMeasure(roots), config, f"trial {trial}")
    except EndCoefficientZero:
        return TrialRecord(trial, False, True, "end_coefficient_zero", values)
    values["et_log"] = rep.et_log
    values["sector_discrepancy"] = rep.max_sector_discrepancy
    values["bl_upper"] = rep.bl_upper
    values["bl_lower"] = rep.bl_lower_estimate
    values["max_radial_defect"] = max(rep.radial_defect.values())
    for r in config.r_schedule:
        zci = zero_counting_integral(roots, r)
        values[f"ratio_r{repr(float(r))}"] = zci / (-math.log1p(-r * r))
        values[f"profile_dev_r{repr(float(r))}"] = zci - 0.5 * _log_variance_profile(r, config.N)
    for s in config.s_list:
        if s < len(roots):
            r_s = radius_R_s(roots, s)
            values[f"rs_norm_s{s}"] = (1.0 - r_s) * s / math.log(s)
    return TrialRecord(trial, False, False, "", values)


def run_zero_radius(config: ExperimentConfig):
    if config.N is None or config.N < 8:
        raise ValueError("zero-radius needs a truncation degree N >= 8")
    if min(config.s_list) < 2:
        raise ValueError("s_list entries must be >= 2 (normalization divides by log s)")
    fn = lambda t: _zero_radius_trial(config, t)
    records = _map_units(range(config.trials), fn, config.workers)
    good = [r for r in records if not r.excluded]
    per_r: Dict[str, Dict] = {}
    for r in config.r_schedule:
        key = repr(float(r))
        ratios = [rec.values[f"ratio_r{key}"] for rec in good]
        devs = [rec.values[f"profile_dev_r{key}"] for rec in good]
        per_r[key] = {
            "median_ratio": _median(ratios),
            "fraction_in_bracket": (
                sum(1 for v in ratios if 0.35 <= v <= 0.65) / len(ratios) if ratios else math.nan
            ),
            "median_profile_dev": _median(devs),
        }
    per_s: Dict[str, Dict] = {}
    for s in config.s_list:
        vals = [rec.values[f"rs_norm_s{s}"] for rec in good if f"rs_norm_s{s}" in rec.values]
        per_s[str(s)] = {
            "median_norm": _median(vals),
            "fraction_in_window": (
                sum(1 for v in vals if 0.05 <= v <= 20.0) / len(vals) if vals else math.nan
            ),
        }
    frac_root_in_disc = (
        sum(1 for rec in good if rec.values["roots_in_unit_disc"] >= 1) / len(good)
        if good else math.nan
    )
    return _zero_radius_columns(config), records, {
        "per_r": per_r,
        "per_s": per_s,
        "ratio_bracket": [0.35, 0.65],
        "rs_window": [0.05, 20.0],
        "fraction_seeds_with_root_in_disc": frac_root_in_disc,
        "degenerate": 0,
        "excluded": sum(1 for r in records if r.excluded),
        "note": _METHOD_NOTE,
    }


# ---------------------------------------------------------------------------
# protocol: denominator zeros accumulating on the circle through the
# (m+1)-th smallest zero of the series


POLE_COLUMNS = ("n", "R_m", "annulus_mass", "median_abs_dev", "q_et_log")


def _pole_trial(config: ExperimentConfig, n_values: Tuple[int, ...], m: int,
                trial: int) -> List[TrialRecord]:
    coeffs = sample(config.spec, config.N, config.seed, trial).coeffs
    poly = Polynomial(coeffs)
    out: List[TrialRecord] = []
    try:
        roots_f = _find_roots_fallback(poly, config.precision)
    except NonConvergence:
        return [TrialRecord(trial, False, True, "nonconvergence", {"n": n}) for n in n_values]
    try:
        _check_clustering(poly, EmpiricalMeasure(roots_f), config, f"trial {trial} (series)")
    except EndCoefficientZero:
        return [TrialRecord(trial, False, True, "end_coefficient_zero", {"n": n})
                for n in n_values]
    r_m = radius_R_s(roots_f, m)
    rho = config.rhos[-1]
    for n in n_values:
        values: Dict[str, object] = {"n": n, "R_m": r_m}
        try:
            pair = pade(coeffs[: m + n + 2], m, n, precision=config.precision)
            q_roots = find_roots(pair.q)
        except DegenerateSystem:
            out.append(TrialRecord(trial, True, False, "degenerate_system", values))
            continue
        except NonConvergence:
            out.append(TrialRecord(trial, False, True, "nonconvergence", values))
            continue
        mu_q = EmpiricalMeasure(q_roots)
        values["annulus_mass"] = annulus_mass(mu_q, r_m, rho)
        values["median_abs_dev"] = _median(list(np.abs(q_roots.moduli - r_m)))
        try:
            q_et = et_ratio(pair.q)
            _check_clustering(pair.q, mu_q, config, f"trial {trial}, n={n} (denominator)")
            values["q_et_log"] = q_et.log_value
        except (EndCoefficientZero, DegenerateInput):
            pass
        out.append(TrialRecord(trial, False, False, "", values))
    return out


def run_pole_clustering(config: ExperimentConfig):
    n_values = _as_tuple(config.n)
    (m,) = _as_tuple(config.m) or (1,)
    if not n_values:
        raise ValueError("pole-clustering needs an n schedule")
    if config.N is None or config.N < m + max(n_values) + 1:
        raise ValueError("N must be at least m + max(n) + 1")
    fn = lambda t: _pole_trial(config, n_values, m, t)
    batches = _map_units(range(config.trials), fn, config.workers)
    records = [rec for batch in batches for rec in batch]
    per_n: Dict[str, Dict] = {}
    for n in n_values:
        sub = [r for r in records if r.values.get("n") == n
               and not (r.degenerate or r.excluded)]
        per_n[str(n)] = {
            "median_abs_dev": _median([r.values["median_abs_dev"] for r in sub]),
            "median_annulus_mass": _median([r.values["annulus_mass"] for r in sub]),
            "cells": len(sub),
            "degenerate_cells": sum(
                1 for r in records if r.values.get("n") == n and r.degenerate
            ),
        }
    summary: Dict = {
        "per_n": per_n,
        "m": m,
        "degenerate": sum(1 for r in records if r.degenerate),
        "excluded": sum(1 for r in records if r.excluded),
        "note": _METHOD_NOTE,
    }
    if m >= 1:
        meds = [per_n[str(n)]["median_abs_dev"] for n in n_values]
        summary["deviation_medians_non_increasing"] = bool(
            all(a >= b - 1e-12 for a, b in zip(meds[:-1], meds[1:]))
        )
    else:
        summary["control_arm"] = "m=0: zeros reported without clustering verdict"
    return POLE_COLUMNS, records, summary


# ---------------------------------------------------------------------------
# dispatch and persistence


RUNNERS: Dict[str, Callable] = {
    ET_CLUSTERING: run_et_clustering,
    DISCRETE_EXAMPLE: run_discrete_example,
    ANTICONCENTRATION: run_toeplitz_anticoncentration,
    DET_GROWTH: run_det_growth,
    ZERO_RADIUS: run_zero_radius,
    POLE_CLUSTERING: run_pole_clustering,
}


def execute(config: ExperimentConfig, out_dir: Optional[Union[str, Path]] = None) -> Dict:
    """Run one protocol; optionally persist trials.csv, summary.json and
    manifest.json under out_dir.  Returns the summary dict."""
    if config.name not in RUNNERS:
        raise ValueError(f"unknown experiment {config.name!r}; valid: {', '.join(PROTOCOLS)}")
    started = datetime.now(timezone.utc).isoformat()
    t0 = time.perf_counter()
    columns, records, summary = RUNNERS[config.name](config)
    wall = time.perf_counter() - t0
    summary.setdefault("degenerate", 0)
    summary.setdefault("excluded", 0)
    summary.update({
        "protocol": config.name,
        "trials": config.trials,
        "records": len(records),
        "wall_time_s": round(wall, 3),
        "workers": config.workers,
        "seed": config.seed,
    })
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        csv_path = out / "trials.csv"
        write_trials_csv(csv_path, columns, records)
        summary_path = out / "summary.json"
        summary_path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
        manifest = {
            "schema_version": SCHEMA_VERSION,
            "config": config.to_dict(),
            "version": __version__,
            "seed": config.seed,
            "started": started,
            "ended": datetime.now(timezone.utc).isoformat(),
            "digests": {
                "trials.csv": _sha256(csv_path),
                "summary.json": _sha256(summary_path),
            },
        }
        (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return summary
