"""Polynomials with complex coefficients: evaluation, truncated products,
simultaneous root finding, and circle averages of log|p|.

Conventions used throughout the package:

* coefficient vectors are stored low-to-high: ``coeffs[k]`` multiplies z**k;
* the numerical degree is the highest index whose coefficient exceeds the
  relative zero threshold ``ZERO_REL * max|coeffs|``;
* root sets are multisets sorted by (modulus, argument).

The root finder is the Aberth-Ehrlich simultaneous iteration with initial
guesses on the Cauchy-bound circle at golden-angle phases.  For |z| > 1 the
Newton ratio p/p' is evaluated through the reversed polynomial at w = 1/z,
which keeps Horner finite at any start radius and any degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .errors import DegenerateInput, NonConvergence

# Relative magnitude below which a coefficient counts as zero.
ZERO_REL = 1e-13

# Golden angle in radians, 2*pi*(1 - 1/phi).  Irrational rotation, so the
# start points never align with roots of unity of any small order.
_GOLDEN_ANGLE = 2.0 * math.pi * (1.0 - 2.0 / (1.0 + math.sqrt(5.0)))

_STEP_REL = 1e-14  # per-root stopping threshold on the Aberth step


@dataclass(frozen=True)
class Polynomial:
    """Dense polynomial; ``coeffs[k]`` is the coefficient of z**k."""

    coeffs: np.ndarray

    def __init__(self, coeffs: Union[Sequence, np.ndarray]):
        arr = np.atleast_1d(np.asarray(coeffs))
        if arr.size == 0:
            raise DegenerateInput("empty coefficient vector")
        if arr.dtype.kind not in "fc":
            arr = arr.astype(float)
        object.__setattr__(self, "coeffs", arr)

    @property
    def zero_threshold(self) -> float:
        m = float(np.max(np.abs(self.coeffs)))
        return ZERO_REL * m

    @property
    def degree(self) -> int:
        """Highest index with |coefficient| above the zero threshold; -1 for
        the zero polynomial."""
        mags = np.abs(self.coeffs)
        m = float(mags.max())
        if m == 0.0:
            return -1
        nz = np.nonzero(mags > ZERO_REL * m)[0]
        return int(nz[-1]) if nz.size else -1

    def __call__(self, z):
        return evaluate(self, z)

    def __len__(self) -> int:
        return len(self.coeffs)


@dataclass(frozen=True)
class RootSet:
    """Multiset of roots, sorted by (modulus, argument).

    ``residual`` is max |P(root)| / (1 + |root|)**degree over the set and
    ``converged`` records whether it met the tolerance of the producing call.
    """

    roots: np.ndarray
    residual: float
    converged: bool

    @property
    def moduli(self) -> np.ndarray:
        return np.abs(self.roots)

    def __len__(self) -> int:
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)


def _as_poly(p) -> Polynomial:
    return p if isinstance(p, Polynomial) else Polynomial(p)


def evaluate(p, z):
    """Evaluate p at z (scalar or array) by Horner's scheme.

    evaluate(p, 0) returns coeffs[0] exactly.
    """
    p = _as_poly(p)
    zs = np.asarray(z)
    scalar = zs.ndim == 0
    zs = np.atleast_1d(zs)
    if zs.dtype.kind not in "fc":
        zs = zs.astype(float)
    rtype = np.result_type(p.coeffs.dtype, zs.dtype)
    acc = np.zeros(zs.shape, dtype=rtype)
    for ck in p.coeffs[::-1]:
        acc = acc * zs + ck
    return acc[0] if scalar else acc


def truncated_product(f, g, order: int) -> Polynomial:
    """Coefficients of f*g through z**order, zero-padded to length order+1."""
    if order < 0:
        raise ValueError("order must be >= 0")
    f = _as_poly(f)
    g = _as_poly(g)
    full = np.convolve(f.coeffs, g.coeffs)
    out = np.zeros(order + 1, dtype=full.dtype)
    k = min(order + 1, full.size)
    out[:k] = full[:k]
    return Polynomial(out)


# ---------------------------------------------------------------------------
# stable evaluation helpers


def _horner_pair(c: np.ndarray, z: np.ndarray):
    """p(z) and p'(z) for coefficient array c (low-to-high)."""
    p = np.zeros_like(z)
    dp = np.zeros_like(z)
    for ck in c[::-1]:
        dp = dp * z + p
        p = p * z + ck
    return p, dp


def _newton_ratio(c: np.ndarray, cr: np.ndarray, z: np.ndarray) -> np.ndarray:
    """p(z)/p'(z), switching to the reversed polynomial for |z| > 1.

    With w = 1/z:  p(z) = z^d p_rev(w)  and
    p/p' = z * p_rev(w) / (d * p_rev(w) - w * p_rev'(w)).
    """
    d = len(c) - 1
    out = np.empty_like(z)
    inner = np.abs(z) <= 1.0
    if inner.any():
        zi = z[inner]
        p, dp = _horner_pair(c, zi)
        with np.errstate(divide="ignore", invalid="ignore"):
            out[inner] = p / dp
    outer = ~inner
    if outer.any():
        zo = z[outer]
        w = 1.0 / zo
        pr, dpr = _horner_pair(cr, w)
        with np.errstate(divide="ignore", invalid="ignore"):
            out[outer] = zo * pr / (d * pr - w * dpr)
    return out


def _log_abs_eval(c: np.ndarray, z: np.ndarray) -> np.ndarray:
    """log|p(z)| through the direct or reversed polynomial, overflow-free."""
    d = len(c) - 1
    out = np.empty(z.shape, dtype=float)
    inner = np.abs(z) <= 1.0
    if inner.any():
        p, _ = _horner_pair(c, z[inner])
        with np.errstate(divide="ignore"):
            out[inner] = np.log(np.abs(p))
    outer = ~inner
    if outer.any():
        zo = z[outer]
        pr, _ = _horner_pair(c[::-1].copy(), 1.0 / zo)
        with np.errstate(divide="ignore"):
            out[outer] = d * np.log(np.abs(zo)) + np.log(np.abs(pr))
    return out


def _repulsion(z: np.ndarray, idx: np.ndarray, chunk: int = 256) -> np.ndarray:
    """S_i = sum_{j != i} 1/(z_i - z_j) for i in idx, via conj/|.|^2.

    The conj trick avoids numpy's branchy complex division; rows are chunked
    to bound the temporary at chunk*len(z) entries.
    """
    n = len(z)
    S = np.empty(len(idx), dtype=complex)
    for s0 in range(0, len(idx), chunk):
        rows = idx[s0:s0 + chunk]
        d = z[rows, None] - z[None, :]
        mag = d.real * d.real + d.imag * d.imag
        mag[np.arange(len(rows)), rows] = np.inf
        np.conjugate(d, out=d)
        d /= mag
        S[s0:s0 + len(rows)] = d.sum(axis=1)
    return S


def _scaled_residual_log(c: np.ndarray, roots: np.ndarray) -> float:
    """log of max |P(root)| / (1+|root|)**degree, computed in log space."""
    if len(roots) == 0:
        return -math.inf
    d = len(c) - 1
    vals = _log_abs_eval(c, roots) - d * np.log1p(np.abs(roots))
    return float(np.max(vals))


# ---------------------------------------------------------------------------
# Aberth-Ehrlich iteration


def _start_points(c: np.ndarray, offset: float) -> np.ndarray:
    """Initial guesses: Newton-polygon radii with golden-angle phases.

    The radii come from the upper convex hull of (j, log|c_j|): a hull
    segment from j=a to j=b contributes b-a start radii |c_a/c_b|^(1/(b-a)),
    which tracks the moduli of the actual roots.  A plain Cauchy-bound circle
    is a valid but far start whose radial collapse costs O(degree)
    iterations; the hull start removes that transient.  Radii are capped by
    the Cauchy bound.
    """
    d = len(c) - 1
    mags = np.abs(c)
    with np.errstate(divide="ignore"):
        logm = np.log(mags)
    hull = [0]
    for j in range(1, d + 1):
        if np.isneginf(logm[j]) and j < d:
            continue
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            if (logm[b] - logm[a]) * (j - a) <= (logm[j] - logm[a]) * (b - a):
                hull.pop()
            else:
                break
        hull.append(j)
    radii = np.empty(d)
    pos = 0
    for a, b in zip(hull[:-1], hull[1:]):
        radii[pos:pos + (b - a)] = math.exp((logm[a] - logm[b]) / (b - a))
        pos += b - a
    cauchy = 1.0 + float(np.max(mags[:-1]) / mags[-1])
    np.clip(radii, 1e-12, cauchy, out=radii)
    k = np.arange(d)
    return radii * np.exp(1j * (offset + _GOLDEN_ANGLE * k))


def _aberth_double(c: np.ndarray, max_iter: int, offset: float):
    d = len(c) - 1
    cr = c[::-1].copy()
    radius = 1.0 + float(np.max(np.abs(c[:-1])) / np.abs(c[-1]))
    z = _start_points(c, offset)
    active = np.ones(d, dtype=bool)
    for it in range(max_iter):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        s = _newton_ratio(c, cr, z[idx])
        S = _repulsion(z, idx)
        with np.errstate(divide="ignore", invalid="ignore"):
            corr = s / (1.0 - s * S)
        bad = ~np.isfinite(corr)
        if bad.any():
            # derivative hit a saddle or two iterates collided: kick those
            # points deterministically and keep going
            kick = 1e-3 * radius * np.exp(1j * _GOLDEN_ANGLE * (it + idx[bad]))
            corr[bad] = -kick
        z[idx] -= corr
        # settled means both the Aberth step and the Newton ratio are tiny;
        # the ratio check keeps collided pairs (tiny step, large ratio) alive
        done = (np.abs(corr) <= _STEP_REL * (1.0 + np.abs(z[idx]))) & (
            np.abs(s) <= 1e-12 * (1.0 + np.abs(z[idx]))
        )
        active[idx[done]] = False
    return z, not active.any()


def _aberth_extended(c: np.ndarray, max_iter: int, offset: float, dps: int):
    """Scalar mpmath version of the same iteration; slow but arbitrary
    precision.  Intended for modest degrees or as a retry path."""
    import mpmath as mp

    with mp.workdps(dps):
        cm = [mp.mpc(complex(v)) for v in c]
        crm = cm[::-1]
        d = len(cm) - 1
        radius = 1 + max(abs(v) for v in cm[:-1]) / abs(cm[-1])
        z = [mp.mpc(complex(v)) for v in _start_points(c, offset)]
        stop = mp.mpf(10) ** (-dps + 2)

        def ratio(zi):
            if abs(zi) <= 1:
                p = dp = mp.mpc(0)
                for ck in reversed(cm):
                    dp = dp * zi + p
                    p = p * zi + ck
                return p / dp if dp != 0 else None
            w = 1 / zi
            pr = dpr = mp.mpc(0)
            for ck in reversed(crm):
                dpr = dpr * w + pr
                pr = pr * w + ck
            den = d * pr - w * dpr
            return zi * pr / den if den != 0 else None

        active = [True] * d
        for it in range(max_iter):
            for i in range(d):
                if not active[i]:
                    continue
                s = ratio(z[i])
                if s is None:
                    z[i] += 1e-3 * radius * mp.expjpi(_GOLDEN_ANGLE * (it + i) / mp.pi)
                    continue
                S = mp.mpc(0)
                for j in range(d):
                    if j != i:
                        S += 1 / (z[i] - z[j])
                den = 1 - s * S
                if den == 0:
                    z[i] += 1e-3 * radius * mp.expjpi(_GOLDEN_ANGLE * (it + i) / mp.pi)
                    continue
                corr = s / den
                z[i] -= corr
                if abs(corr) <= stop * (1 + abs(z[i])) and abs(s) <= stop * 100 * (1 + abs(z[i])):
                    active[i] = False
            if not any(active):
                break
        return (
            np.array([complex(v) for v in z], dtype=complex),
            not any(active),
        )


def _sorted_roots(roots: np.ndarray) -> np.ndarray:
    mod = np.abs(roots)
    ang = np.angle(roots)
    order = np.lexsort((ang, mod))
    return roots[order]


def find_roots(
    p,
    tol: float = 1e-10,
    max_iter: int = 150,
    precision: str = "double",
    dps: int = 30,
    start_offset: float = 0.0,
) -> RootSet:
    """All roots of p, with zeros at the origin split off exactly.

    Raises NonConvergence (carrying the partial RootSet) if the iteration
    budget runs out with the residual above tol; the caller may retry with a
    different ``start_offset`` or with precision="extended".
    """
    p = _as_poly(p)
    deg = p.degree
    if deg < 1:
        raise DegenerateInput("root finding needs degree >= 1")
    c = np.asarray(p.coeffs[: deg + 1], dtype=complex)
    thresh = p.zero_threshold
    k0 = 0
    while k0 < deg and abs(c[k0]) <= thresh:
        k0 += 1
    origin = np.zeros(k0, dtype=complex)
    c = c[k0:]
    d = len(c) - 1
    settled = True
    if d == 0:
        roots = origin
    elif d == 1:
        roots = np.concatenate([origin, [-c[0] / c[1]]])
    else:
        if precision == "extended":
            inner, settled = _aberth_extended(c, max_iter, start_offset, dps)
        elif precision == "double":
            inner, settled = _aberth_double(c, max_iter, start_offset)
        else:
            raise ValueError("precision must be 'double' or 'extended'")
        roots = np.concatenate([origin, inner])
    roots = _sorted_roots(roots)
    # residual of the full polynomial, including origin zeros
    full = np.asarray(p.coeffs[: deg + 1], dtype=complex)
    log_res = _scaled_residual_log(full, roots)
    residual = float(np.exp(min(log_res, 700.0))) if np.isfinite(log_res) else 0.0
    converged = settled and residual <= tol
    rs = RootSet(roots=roots, residual=residual, converged=converged)
    if not converged:
        why = "residual above tol" if settled else "iteration did not settle"
        raise NonConvergence(
            f"{why} after {max_iter} iterations (residual {residual:.3e}, tol {tol:.3e})",
            partial=rs,
        )
    return rs


# ---------------------------------------------------------------------------
# circle averages


def circle_log_average(p, r: float, quad_points: Optional[int] = None) -> float:
    """Trapezoid average of log|p(r e^{i theta})| over theta in [0, 2 pi).

    Nodes where log|p| comes out non-finite (a root sits on the node, or the
    value overflowed) are re-evaluated half a grid step away so the result is
    always finite.
    """
    p = _as_poly(p)
    deg = p.degree
    if deg < 0:
        raise DegenerateInput("circle average of the zero polynomial")
    if r <= 0:
        raise ValueError("radius must be positive")
    min_q = 2 * deg + 16
    if quad_points is None:
        quad_points = min_q
    if quad_points < min_q:
        raise ValueError(f"quad_points must be >= 2*degree+16 = {min_q}")
    c = np.asarray(p.coeffs[: deg + 1], dtype=complex)
    theta = np.linspace(0.0, 2.0 * math.pi, quad_points, endpoint=False)
    vals = _log_abs_eval(c, r * np.exp(1j * theta))
    bad = ~np.isfinite(vals)
    if bad.any():
        jitter = theta[bad] + math.pi / quad_points
        vals[bad] = _log_abs_eval(c, r * np.exp(1j * jitter))
    # uniform grid over the full period: trapezoid rule = plain mean
    return float(np.mean(vals))


def jensen_rhs(roots, p0_abs: float, r: float) -> float:
    """log(p0_abs) + sum over |z_j| < r of log(r / |z_j|).

    This is the root side of Jensen's identity for a polynomial with
    |p(0)| = p0_abs; it must match circle_log_average away from root moduli.
    """
    if p0_abs <= 0.0:
        raise DegenerateInput("jensen_rhs needs p0_abs > 0")
    if r <= 0:
        raise ValueError("radius must be positive")
    arr = roots.roots if isinstance(roots, RootSet) else np.asarray(roots, dtype=complex)
    mod = np.abs(arr)
    if np.any(mod == 0.0):
        raise DegenerateInput("root at the origin contradicts p0_abs > 0")
    inside = mod < r
    return float(math.log(p0_abs) + np.sum(np.log(r / mod[inside])))
