"""Eigenvalue computation and zero counting.

Two independent pipelines produce the eigenvalues lambda = rho^2:

* real_eigenvalues brackets sign changes of the characteristic function
  on a uniform rho scan and polishes each bracket by bisection plus a
  Newton finish;
* shooting_eigenvalues never forms the characteristic function: it
  integrates the base solution and the unit frozen-response by fixed-step
  RK4 and applies the endpoint condition in product form.

Agreement of the two is the main internal consistency check of the whole
package.  count_zeros_disk counts zeros of any entire function inside
|rho| <= r through the argument principle (phase winding on the circle),
with sample doubling until the winding is integer and radius retries
when a zero sits too close to the contour.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .charfn import char_closed, char_det
from .model import PI, NumericalError, Potential, ProblemConfig, as_vectorized

try:
    from numba import njit
    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a soft dependency
    _HAVE_NUMBA = False

DEFAULT_SCAN_STEP = 0.05
DEFAULT_RK4_STEP = PI / 4096
DEDUP_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Nonnegative zeros rho_k of a characteristic function, with
    lambda_k = rho_k^2 and the residual |f(rho_k)| actually achieved."""

    rhos: np.ndarray
    lambdas: np.ndarray
    residuals: np.ndarray
    method: str

    def __post_init__(self):
        for name in ("rhos", "lambdas", "residuals"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        if np.any(self.rhos < 0):
            raise ValueError("rhos must be nonnegative")
        if np.any(np.diff(self.rhos) <= 0):
            raise ValueError("rhos must be strictly increasing")

    def __len__(self):
        return len(self.rhos)


@dataclass(frozen=True)
class ZeroCount:
    """Argument-principle count inside |rho| <= radius.

    radius is the contour actually used (retries nudge it when a zero
    sits within 1e-4 * radius of the circle); winding_error is the
    distance of the raw winding number from the reported integer.
    """

    radius: float
    count: int
    samples: int
    winding_error: float


@dataclass(frozen=True)
class SpectrumMatch:
    """Index-wise pairing of two sorted zero lists (common prefix)."""

    gaps: np.ndarray
    max_gap: float
    max_gap_index: int
    l2_distance: float
    surplus_a: int
    surplus_b: int

    @property
    def paired(self) -> int:
        return len(self.gaps)


# ---------------------------------------------------------------------------
# real-axis zero location for an even real-analytic function


def _bisect_refine(fvec: Callable, lo: np.ndarray, hi: np.ndarray,
                   flo: np.ndarray, iters: int = 30):
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = fvec(mid)
        left = (flo * fm) > 0
        lo = np.where(left, mid, lo)
        flo = np.where(left, fm, flo)
        hi = np.where(left, hi, mid)
    return 0.5 * (lo + hi)


def _newton_polish(fvec: Callable, x: np.ndarray, lo: np.ndarray,
                   hi: np.ndarray, iters: int = 8):
    for _ in range(iters):
        h = 1e-7 * np.maximum(1.0, np.abs(x))
        f0 = fvec(x)
        deriv = (fvec(x + h) - fvec(x - h)) / (2.0 * h)
        safe = np.abs(deriv) > 1e-300
        dx = np.where(safe, f0 / np.where(safe, deriv, 1.0), 0.0)
        x = np.clip(x - dx, lo, hi)
        if np.max(np.abs(dx)) < 1e-14 * np.max(1.0 + np.abs(x)):
            break
    return x


def _locate_real_zeros(fvec: Callable, hi_end: float, step: float):
    """All zeros of fvec on [0, hi_end]: sign-change brackets, grid hits,
    an origin tangency test, and local refinement of suspicious dips."""
    grid = np.arange(0.0, hi_end + step, step)
    vals = fvec(grid)
    scale = float(np.max(np.abs(vals)))
    if scale == 0.0:
        raise NumericalError("characteristic function vanished identically on the scan")

    zeros = []

    # origin: even functions can only touch zero at rho = 0, never cross
    if abs(vals[0]) <= 1e-9 * scale:
        zeros.append(0.0)

    exact = np.abs(vals) <= 1e-13 * scale
    exact[0] = False
    signs = np.where(exact, 0.0, np.sign(vals))

    crossings = []
    for i in range(len(grid) - 1):
        if signs[i] != 0 and signs[i + 1] != 0 and signs[i] * signs[i + 1] < 0:
            crossings.append(i)
        elif signs[i + 1] == 0 and i + 1 < len(grid):
            zeros.append(float(grid[i + 1]))

    if crossings:
        lo = grid[np.array(crossings)]
        hi = grid[np.array(crossings) + 1]
        flo = vals[np.array(crossings)]
        mids = _bisect_refine(fvec, lo.copy(), hi.copy(), flo.copy())
        mids = _newton_polish(fvec, mids, lo, hi)
        zeros.extend(float(m) for m in mids)

    # dips of |f| that do not cross: refine locally to expose either a
    # genuine pair of crossings or a tangent (double) zero
    absv = np.abs(vals)
    for i in range(1, len(grid) - 1):
        if (absv[i] < absv[i - 1] and absv[i] <= absv[i + 1]
                and absv[i] < 1e-4 * scale and signs[i] != 0
                and signs[i - 1] * signs[i] > 0 and signs[i] * signs[i + 1] > 0):
            zeros.extend(_refine_dip(fvec, grid[i - 1], grid[i + 1], scale, depth=3))

    zeros = sorted(zeros)
    merged = []
    for z in zeros:
        if not merged or z - merged[-1] > DEDUP_TOL:
            merged.append(z)
    return np.array(merged), scale


def _refine_dip(fvec, lo, hi, scale, depth):
    grid = np.linspace(lo, hi, 41)
    vals = fvec(grid)
    signs = np.sign(vals)
    flips = np.nonzero(signs[:-1] * signs[1:] < 0)[0]
    if flips.size:
        out = []
        for i in flips:
            x = _bisect_refine(fvec, grid[i:i + 1].copy(), grid[i + 1:i + 2].copy(),
                               vals[i:i + 1].copy())
            x = _newton_polish(fvec, x, grid[i:i + 1], grid[i + 1:i + 2])
            out.append(float(x[0]))
        return out
    i = int(np.argmin(np.abs(vals)))
    if depth > 0 and 0 < i < len(grid) - 1:
        return _refine_dip(fvec, grid[i - 1], grid[i + 1], scale, depth - 1)
    if abs(vals[i]) < 1e-12 * scale:
        return [float(grid[i])]  # tangent zero at scan resolution
    return []


def _spectrum_from_zeros(fvec, zeros, count, method):
    if len(zeros) < count:
        raise NumericalError(
            f"found only {len(zeros)} zeros on the scan window, need {count}; "
            "widen the window or reduce the scan step")
    rhos = np.asarray(zeros[:count], dtype=float)
    residuals = np.abs(fvec(rhos))
    return Spectrum(rhos, rhos ** 2, residuals, method)


def real_eigenvalues(q: Potential, config: ProblemConfig, count: int,
                     scan_step: float = DEFAULT_SCAN_STEP, method: str = "closed",
                     check_complex: bool = True) -> Spectrum:
    """First `count` nonnegative zeros of the characteristic function.

    Scans [0, count + 2.5] with the given step, brackets sign changes,
    and polishes by bisection plus Newton.  With check_complex=True the
    real count is compared against the argument-principle count on a
    disk; a mismatch means eigenvalues moved off the real axis and is
    reported as a warning (they are counted, not located).
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    evaluate = char_closed if method == "closed" else char_det
    fvec = lambda rr: np.real(evaluate(q, config, np.asarray(rr, dtype=complex)))
    hi_end = count + 2.5
    zeros, scale = _locate_real_zeros(fvec, hi_end, scan_step)
    spec = _spectrum_from_zeros(fvec, zeros, count, "scan")

    if check_complex:
        radius = float(spec.rhos[-1]) + 0.43
        inside = zeros[zeros <= radius]
        origin_mult = 2 if (inside.size and inside[0] == 0.0) else 0
        expected = 2 * int(np.sum(inside > 0)) + origin_mult
        try:
            zc = count_zeros_disk(lambda z: evaluate(q, config, z), radius)
        except NumericalError:
            zc = None
        if zc is not None and zc.count != expected:
            warnings.warn(
                f"disk |rho| <= {zc.radius:.3f} holds {zc.count} zeros but the real "
                f"axis accounts for {expected}; some eigenvalues are complex",
                stacklevel=2)
    return spec


# ---------------------------------------------------------------------------
# shooting oracle


def _rk4_numpy(y, yp, v, vp, lam, qa, qm, qb, h):
    for i in range(qa.shape[0]):
        q1, q2, q3 = qa[i], qm[i], qb[i]
        k1y = yp;               k1p = -lam * y
        k2y = yp + 0.5 * h * k1p; k2p = -lam * (y + 0.5 * h * k1y)
        k3y = yp + 0.5 * h * k2p; k3p = -lam * (y + 0.5 * h * k2y)
        k4y = yp + h * k3p;       k4p = -lam * (y + h * k3y)
        k1v = vp;               k1w = -lam * v + q1
        k2v = vp + 0.5 * h * k1w; k2w = -lam * (v + 0.5 * h * k1v) + q2
        k3v = vp + 0.5 * h * k2w; k3w = -lam * (v + 0.5 * h * k2v) + q2
        k4v = vp + h * k3w;       k4w = -lam * (v + h * k3v) + q3
        y = y + (h / 6.0) * (k1y + 2 * k2y + 2 * k3y + k4y)
        yp = yp + (h / 6.0) * (k1p + 2 * k2p + 2 * k3p + k4p)
        v = v + (h / 6.0) * (k1v + 2 * k2v + 2 * k3v + k4v)
        vp = vp + (h / 6.0) * (k1w + 2 * k2w + 2 * k3w + k4w)
    return y, yp, v, vp


if _HAVE_NUMBA:
    @njit(cache=False)
    def _rk4_numba(y, yp, v, vp, lam, qa, qm, qb, h):  # pragma: no cover - jit
        n = qa.shape[0]
        m = lam.shape[0]
        for i in range(n):
            q1 = qa[i]; q2 = qm[i]; q3 = qb[i]
            for j in range(m):
                l = lam[j]
                k1y = yp[j];                 k1p = -l * y[j]
                k2y = yp[j] + 0.5 * h * k1p; k2p = -l * (y[j] + 0.5 * h * k1y)
                k3y = yp[j] + 0.5 * h * k2p; k3p = -l * (y[j] + 0.5 * h * k2y)
                k4y = yp[j] + h * k3p;       k4p = -l * (y[j] + h * k3y)
                k1v = vp[j];                 k1w = -l * v[j] + q1
                k2v = vp[j] + 0.5 * h * k1w; k2w = -l * (v[j] + 0.5 * h * k1v) + q2
                k3v = vp[j] + 0.5 * h * k2w; k3w = -l * (v[j] + 0.5 * h * k2v) + q2
                k4v = vp[j] + h * k3w;       k4w = -l * (v[j] + h * k3v) + q3
                y[j] += (h / 6.0) * (k1y + 2 * k2y + 2 * k3y + k4y)
                yp[j] += (h / 6.0) * (k1p + 2 * k2p + 2 * k3p + k4p)
                v[j] += (h / 6.0) * (k1v + 2 * k2v + 2 * k3v + k4v)
                vp[j] += (h / 6.0) * (k1w + 2 * k2w + 2 * k3w + k4w)
        return y, yp, v, vp


def shooting_values(q: Potential, config: ProblemConfig, rhos,
                    step: float = DEFAULT_RK4_STEP) -> np.ndarray:
    """Endpoint condition value D(rho) from direct ODE integration.

    Integrates y0'' = -rho^2 y0 (base solution fixed by the left
    condition) and the unit response v'' = -rho^2 v + q(x), v(0) = v'(0)
    = 0, with fixed-step RK4, splitting steps so every frozen point is a
    step endpoint, then forms
        D = y0^(beta)(pi) * (1 - sum_i v(a_i)) + (sum_i y0(a_i)) * v^(beta)(pi),
    whose zeros are the eigenvalue square roots.  No division anywhere,
    so the value is stable through eigenvalues of the base problem.
    """
    rhos = np.asarray(rhos, dtype=float)
    scalar = rhos.ndim == 0
    flat = np.atleast_1d(rhos).ravel().astype(float)
    lam = flat ** 2
    m = flat.size
    if config.alpha == 0:
        y = np.zeros(m); yp = np.ones(m)
    else:
        y = np.ones(m); yp = np.zeros(m)
    v = np.zeros(m); vp = np.zeros(m)
    sum_y = np.zeros(m); sum_v = np.zeros(m)

    kernel = _rk4_numba if _HAVE_NUMBA else _rk4_numpy
    edges = (0.0,) + config.frozen + (PI,)
    frozen_set = set(config.frozen)
    for lo, hi in zip(edges[:-1], edges[1:]):
        length = hi - lo
        n = max(1, int(math.ceil(length / step)))
        h = length / n
        xs = lo + h * np.arange(n)
        qa = np.asarray(q(xs), dtype=float)
        qm = np.asarray(q(xs + 0.5 * h), dtype=float)
        qb = np.asarray(q(xs + h), dtype=float)
        y, yp, v, vp = kernel(y, yp, v, vp, lam, qa, qm, qb, h)
        if hi in frozen_set:
            sum_y += y
            sum_v += v
    by = yp if config.beta == 1 else y
    bv = vp if config.beta == 1 else v
    out = by * (1.0 - sum_v) + sum_y * bv
    return float(out[0]) if scalar else out.reshape(np.atleast_1d(rhos).shape)


def shooting_eigenvalues(q: Potential, config: ProblemConfig, count: int,
                         step: float = DEFAULT_RK4_STEP,
                         scan_step: float = DEFAULT_SCAN_STEP,
                         check_step: bool = True) -> Spectrum:
    """Eigenvalues from the shooting condition, independent of charfn.

    With check_step=True the located zeros are re-polished at half the
    integration step; if any lambda moves by more than 1e-6 the run
    warns and returns the half-step values.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    fvec = lambda rr: shooting_values(q, config, np.asarray(rr, dtype=float), step)
    zeros, _ = _locate_real_zeros(fvec, count + 2.5, scan_step)
    spec = _spectrum_from_zeros(fvec, zeros, count, "shoot")
    if not check_step:
        return spec
    fvec_half = lambda rr: shooting_values(q, config, np.asarray(rr, dtype=float),
                                           step / 2.0)
    width = 0.25 * np.ones_like(spec.rhos)
    polished = _newton_polish(fvec_half, spec.rhos.copy(),
                              np.maximum(spec.rhos - width, 0.0),
                              spec.rhos + width, iters=4)
    drift = np.max(np.abs(polished ** 2 - spec.lambdas))
    if drift > 1e-6:
        warnings.warn(
            f"RK4 eigenvalues moved by {drift:.2e} when the step halved; "
            "returning the half-step values", stacklevel=2)
        polished = np.sort(polished)
        return Spectrum(polished, polished ** 2,
                        np.abs(fvec_half(polished)), "shoot")
    return spec


# ---------------------------------------------------------------------------
# argument-principle counting


def count_zeros_disk(f: Callable, radius: float, samples: int = 4096,
                     integer_tol: float = 1e-3, max_samples: int = 2 ** 20,
                     retries: int = 5) -> ZeroCount:
    """Number of zeros (with multiplicity) of f inside |rho| <= radius.

    The phase of f is accumulated around the circle; samples double until
    the winding number is within integer_tol of an integer.  If the
    phase data indicates a zero within 1e-4 * radius of the contour the
    radius is nudged by +/-1.3%, up to `retries` attempts.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    fv = as_vectorized(f)

    def attempt(r: float) -> Optional[ZeroCount]:
        n = samples
        while n <= max_samples:
            theta = (2.0 * PI / n) * np.arange(n)
            with np.errstate(over="ignore", invalid="ignore"):
                vals = np.asarray(fv(r * np.exp(1j * theta)), dtype=complex)
            if not np.all(np.isfinite(vals)):
                raise NumericalError(
                    f"function overflowed on |rho| = {r:.6g}; "
                    "reduce the radius or rescale")
            if np.any(vals == 0):
                return None
            phases = np.angle(vals)
            d = np.diff(np.concatenate([phases, phases[:1]]))
            wrapped = (d + PI) % (2.0 * PI) - PI
            winding = float(np.sum(wrapped) / (2.0 * PI))
            peak = float(np.max(np.abs(wrapped)))
            arc = 2.0 * PI * r / n
            if peak > 0 and arc / peak < 1e-4 * r:
                return None
            nearest = round(winding)
            # an aliased step is off by a full turn yet leaves the sum
            # integer, so integer_tol alone cannot detect undersampling;
            # demand every step stays clear of the +/-pi wrap as well
            if peak <= 2.2 and abs(winding - nearest) <= integer_tol:
                return ZeroCount(r, int(nearest), n, abs(winding - nearest))
            n *= 2
        return None

    tried = [radius]
    for k in range(1, retries + 1):
        sign = 1 if k % 2 == 1 else -1
        tried.append(radius * (1.0 + sign * 0.013 * ((k + 1) // 2)))
    for r in tried:
        result = attempt(r)
        if result is not None:
            return result
    raise NumericalError(
        f"winding number near |rho| = {radius:.6g} never settled on an "
        "integer; a zero is pinned to every retried contour")


def match_spectra(a, b) -> SpectrumMatch:
    """Pair two sorted zero lists index-wise and report the gap profile.

    Works on Spectrum objects or plain arrays.  Unequal lengths pair the
    common prefix; the surplus is reported, not matched.
    """
    ra = np.asarray(a.rhos if isinstance(a, Spectrum) else a, dtype=float)
    rb = np.asarray(b.rhos if isinstance(b, Spectrum) else b, dtype=float)
    n = min(ra.size, rb.size)
    gaps = np.abs(ra[:n] - rb[:n])
    if n == 0:
        return SpectrumMatch(gaps, 0.0, -1, 0.0, ra.size, rb.size)
    idx = int(np.argmax(gaps))
    return SpectrumMatch(gaps, float(gaps[idx]), idx,
                         float(np.sqrt(np.sum(gaps ** 2))),
                         ra.size - n, rb.size - n)
