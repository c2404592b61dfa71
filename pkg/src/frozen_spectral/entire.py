"""Entire-function diagnostics: growth, zeros, density, product recovery.

The functions this package cares about (characteristic functions and
their differences) are entire of exponential type with zeros confined to
a horizontal strip.  This module measures that structure numerically:

* indicator / function_type fit the ray growth ln|f(r e^{i theta})|;
* collect_zeros finds all zeros in a rectangle by recursive subdivision
  on argument-principle counts, polishing isolated zeros by Newton;
* zero_density and effective_support_width convert zero counts N(r)
  into the width of the convex hull of the support of the underlying
  density (count slope times pi);
* cartwright_product rebuilds the function from its zeros and its value
  at the origin, multiplying factors in modulus order.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .model import PI, NumericalError, as_vectorized
from .spectrum import ZeroCount, count_zeros_disk

# Subdivision fraction kept away from 1/2 so that split lines avoid the
# symmetric zero patterns these functions tend to have.
SPLIT_FRACTION = 0.5137
MIN_BOX = 1e-7
MERGE_TOL = 1e-8


@dataclass(frozen=True)
class IndicatorFit:
    """Least-squares slope of ln|f| along one ray, with fit residual."""

    theta: float
    value: float
    residual: float


@dataclass(frozen=True)
class TypeEstimate:
    """Exponential type as the maximum ray indicator over a theta grid."""

    value: float
    theta: float
    residual: float


@dataclass(frozen=True, eq=False)
class ZeroSet:
    """Zeros of an entire function, repeated by multiplicity, sorted by
    modulus (ties by phase) for deterministic downstream products."""

    zeros: np.ndarray
    x_half_width: float
    y_half_width: float

    def __post_init__(self):
        z = np.asarray(self.zeros, dtype=complex)
        order = np.lexsort((np.angle(z), np.round(np.abs(z), 12)))
        z = z[order]
        z.flags.writeable = False
        object.__setattr__(self, "zeros", z)

    def __len__(self):
        return len(self.zeros)

    def count_within(self, r: float) -> int:
        return int(np.sum(np.abs(self.zeros) <= r))

    def density(self, r: float) -> float:
        return self.count_within(r) / r


def default_radii(r_max: float, points: int = 12) -> np.ndarray:
    """Geometric ray radii spanning one decade up to r_max."""
    return np.geomspace(r_max / 10.0, r_max, points)


def _ray_log_abs(fv: Callable, theta: float, r_list: np.ndarray):
    vals = np.asarray(fv(r_list * np.exp(1j * theta)), dtype=complex)
    with np.errstate(divide="ignore"):
        return np.log(np.abs(vals))


def indicator(f: Callable, theta: float, r_list: Optional[Sequence[float]] = None,
              r_max: float = 50.0) -> IndicatorFit:
    """Ray indicator h(theta): slope of ln|f(r e^{i theta})| in r.

    Fits the top half of r_list (default: a geometric decade up to
    r_max), where the exponential term dominates algebraic prefactors.
    Rays that hit zeros of f (log = -inf) are jittered by 1e-4 in theta;
    radii that still misbehave are dropped from the fit.
    """
    fv = as_vectorized(f)
    r_list = np.asarray(default_radii(r_max) if r_list is None else r_list,
                        dtype=float)
    if r_list.size < 5:
        raise ValueError("r_list needs at least 5 radii")
    th = float(theta)
    for _ in range(4):
        logs = _ray_log_abs(fv, th, r_list)
        if np.all(np.isfinite(logs)):
            break
        th += 1e-4
    top = r_list >= np.median(r_list)
    good = top & np.isfinite(logs)
    if np.sum(good) < 4:
        raise NumericalError(
            f"ray theta = {theta:.6g}: too few usable radii for a growth fit")
    slope, intercept = np.polyfit(r_list[good], logs[good], 1)
    fit = slope * r_list[good] + intercept
    residual = float(np.sqrt(np.mean((fit - logs[good]) ** 2)))
    return IndicatorFit(th, float(slope), residual)


def function_type(f: Callable, theta_grid: Optional[Sequence[float]] = None,
                  r_list: Optional[Sequence[float]] = None,
                  r_max: float = 50.0) -> TypeEstimate:
    """Exponential type: max of the ray indicator over a theta grid.

    The default grid has 16 equispaced rays anchored so that pi/2 and
    3 pi/2 are included exactly; for functions real on the real axis the
    maximum sits on the imaginary rays.
    """
    if theta_grid is None:
        theta_grid = PI / 2.0 + 2.0 * PI * np.arange(16) / 16.0
    best = None
    for th in theta_grid:
        fit = indicator(f, float(th), r_list=r_list, r_max=r_max)
        if best is None or fit.value > best.value:
            best = fit
    return TypeEstimate(best.value, best.theta, best.residual)


def zero_density(zero_set: ZeroSet, r: float) -> float:
    """Counting density N(r)/r of a zero set at radius r."""
    if r <= 0:
        raise ValueError("r must be positive")
    return zero_set.density(r)


# ---------------------------------------------------------------------------
# zero collection by rectangle subdivision


def _rect_winding(fv: Callable, x0: float, x1: float, y0: float, y1: float,
                  integer_tol: float = 1e-3) -> Optional[int]:
    """Winding of f around the rectangle boundary, or None if ambiguous."""
    width, height = x1 - x0, y1 - y0
    perimeter = 2.0 * (width + height)
    n_base = 256
    for level in range(8):
        n = n_base * (1 << level)
        step = perimeter / n
        nx = max(8, int(round(width / step)))
        ny = max(8, int(round(height / step)))
        bottom = x0 + (x1 - x0) * np.arange(nx) / nx + 1j * y0
        right = x1 + 1j * (y0 + (y1 - y0) * np.arange(ny) / ny)
        top = x1 - (x1 - x0) * np.arange(nx) / nx + 1j * y1
        left = x0 + 1j * (y1 - (y1 - y0) * np.arange(ny) / ny)
        path = np.concatenate([bottom, right, top, left])
        vals = np.asarray(fv(path), dtype=complex)
        if not np.all(np.isfinite(vals)):
            raise NumericalError("function overflowed on a subdivision contour")
        if np.any(vals == 0):
            return None
        phases = np.angle(vals)
        d = np.diff(np.concatenate([phases, phases[:1]]))
        wrapped = (d + PI) % (2.0 * PI) - PI
        winding = float(np.sum(wrapped) / (2.0 * PI))
        nearest = round(winding)
        if abs(winding - nearest) <= integer_tol and np.max(np.abs(wrapped)) < 2.5:
            return int(nearest)
    return None


def _newton_zero(fv: Callable, z0: complex, iters: int = 60,
                 trust_radius: float = np.inf) -> Optional[complex]:
    """Newton from z0, or None.  Leaving the trust region around z0 means
    the iteration latched onto the function's decay rather than a nearby
    zero (steps then grow geometrically), so bail out early."""
    z = complex(z0)
    for _ in range(iters):
        if abs(z - z0) > trust_radius:
            return None
        h = 1e-6 * (1.0 + abs(z))
        f0 = complex(np.asarray(fv(np.array([z])))[0])
        fp = complex(np.asarray(fv(np.array([z + h])))[0])
        fm = complex(np.asarray(fv(np.array([z - h])))[0])
        deriv = (fp - fm) / (2.0 * h)
        if deriv == 0:
            return None
        dz = f0 / deriv
        z -= dz
        if abs(dz) <= 1e-13 * (1.0 + abs(z)):
            return z if abs(z - z0) <= trust_radius else None
    return None


def collect_zeros(f: Callable, x_max: float, x_min: Optional[float] = None,
                  strip_half_height: float = 10.0, max_boxes: int = 200000,
                  verify: bool = False) -> ZeroSet:
    """All zeros of f in [x_min, x_max] x [-H, H], multiplicity repeated.

    Rectangles with winding 0 are dropped, winding 1 is polished by
    complex Newton from the center, winding >= 2 is split across its
    longer side at an off-center fraction.  Ambiguous contours (phase
    running through a boundary zero) grow the rectangle by 0.3% and
    retry.  Boxes that shrink to the resolution floor contribute their
    center at the counted multiplicity, which is how genuinely multiple
    zeros are reported.
    """
    if x_min is None:
        x_min = -x_max
    fv = as_vectorized(f)
    stack = [(float(x_min), float(x_max), -float(strip_half_height),
              float(strip_half_height))]
    zeros = []
    processed = 0
    while stack:
        x0, x1, y0, y1 = stack.pop()
        processed += 1
        if processed > max_boxes:
            raise NumericalError("zero collection exceeded the subdivision budget")
        w = None
        gx, gy = x1 - x0, y1 - y0
        for grow in range(4):
            w = _rect_winding(fv, x0, x1, y0, y1)
            if w is not None:
                break
            pad_x, pad_y = 1.5e-3 * gx * (grow + 1), 1.5e-3 * gy * (grow + 1)
            x0, x1, y0, y1 = x0 - pad_x, x1 + pad_x, y0 - pad_y, y1 + pad_y
        if w is None:
            raise NumericalError(
                f"winding ambiguous on [{x0:.4g},{x1:.4g}]x[{y0:.4g},{y1:.4g}] "
                "after contour growth")
        if w == 0:
            continue
        width, height = x1 - x0, y1 - y0
        if max(width, height) < MIN_BOX:
            center = complex(0.5 * (x0 + x1), 0.5 * (y0 + y1))
            zeros.extend([center] * w)
            continue
        if w == 1:
            z = _newton_zero(fv, complex(0.5 * (x0 + x1), 0.5 * (y0 + y1)),
                             trust_radius=1.5 * math.hypot(width, height))
            # accept only zeros essentially inside this box: a generous
            # margin would let Newton wander to a neighbouring zero that
            # some other box already accounts for
            if (z is not None
                    and x0 - MERGE_TOL <= z.real <= x1 + MERGE_TOL
                    and y0 - MERGE_TOL <= z.imag <= y1 + MERGE_TOL):
                zeros.append(z)
                continue
        if width >= height:
            xs = x0 + SPLIT_FRACTION * width
            stack.append((x0, xs, y0, y1))
            stack.append((xs, x1, y0, y1))
        else:
            ys = y0 + SPLIT_FRACTION * height
            stack.append((x0, x1, y0, ys))
            stack.append((x0, x1, ys, y1))

    zeros = _merge_zeros(zeros)
    out = ZeroSet(np.array(zeros, dtype=complex), x_max, strip_half_height)
    if verify:
        total = _rect_winding(fv, x_min, x_max, -strip_half_height,
                              strip_half_height)
        if total is not None and total != len(out):
            warnings.warn(
                f"collected {len(out)} zeros but the outer contour counts "
                f"{total}", stacklevel=2)
    return out


def _merge_zeros(zeros):
    """Merge zeros closer than MERGE_TOL (keeps multiplicity by repetition)."""
    merged = []
    for z in sorted(zeros, key=lambda w: (w.real, w.imag)):
        if merged and abs(z - merged[-1]) <= MERGE_TOL:
            merged.append(merged[-1])
        else:
            merged.append(z)
    return merged


@dataclass(frozen=True)
class SupportEstimate:
    """Width of the convex hull of the transform's support, from the
    slope of the zero count N(r) against r (width = pi * slope)."""

    width: float
    radii: tuple
    counts: tuple
    slope: float


def effective_support_width(F: Callable, r_max: float,
                            radii: Optional[Sequence[float]] = None,
                            samples: int = 8192) -> SupportEstimate:
    """Support width of the density behind the entire function F.

    Counts zeros on disks at the three largest working radii (default
    r_max/2, 3 r_max/4, r_max), fits N(r) ~ slope * r by least squares,
    and returns pi * slope.  The radii actually used (after near-contour
    retries) enter the fit.
    """
    if radii is None:
        radii = (0.5 * r_max, 0.75 * r_max, r_max)
    counts, used = [], []
    for r in radii:
        zc = count_zeros_disk(F, float(r), samples=samples)
        used.append(zc.radius)
        counts.append(zc.count)
    slope = float(np.polyfit(used, counts, 1)[0])
    return SupportEstimate(PI * slope, tuple(used), tuple(counts), slope)


def cartwright_product(zeros, c: complex, rho, radius: Optional[float] = None):
    """Value of c * prod_k (1 - rho / alpha_k) over the given zeros.

    Factors multiply in order of increasing |alpha_k| (symmetric
    truncation for conjugate-paired zero sets).  The product is formed
    as exp(sum log) so magnitude stays representable for thousands of
    factors; a rho that hits a zero exactly yields 0.  Zeros at the
    origin are rejected: the representation assumes f(0) = c != 0.
    """
    alphas = np.asarray(zeros.zeros if isinstance(zeros, ZeroSet) else zeros,
                        dtype=complex)
    if radius is not None:
        alphas = alphas[np.abs(alphas) <= radius]
    order = np.argsort(np.abs(alphas), kind="stable")
    alphas = alphas[order]
    if alphas.size and np.min(np.abs(alphas)) < 1e-12:
        raise ValueError("zero at the origin: divide it out before reconstructing")
    rho = np.asarray(rho, dtype=complex)
    scalar = rho.ndim == 0
    flat = np.atleast_1d(rho).ravel()
    acc = np.zeros(flat.shape, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        for i in range(0, alphas.size, 512):
            block = alphas[i:i + 512]
            acc += np.sum(np.log(1.0 - flat[:, None] / block[None, :]), axis=1)
    out = c * np.exp(acc)
    out = np.where(np.isneginf(acc.real), 0.0, out)
    out = out.reshape(np.atleast_1d(rho).shape)
    return complex(out[0]) if scalar else out
