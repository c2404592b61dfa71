"""Potentials, problem configuration, and Fourier-type transforms.

This module is the base layer: it owns the representation of a potential
q on [0, pi], the frozen-point boundary problem configuration, Fourier
coefficients of the zero-extended potential, and the oscillatory
quadrature all higher layers consume.  Everything here is pure and
immutable; values depend only on explicit arguments, so instances are
safe to share across threads.

Conventions fixed here and relied on everywhere else:

* potentials live on the uniform grid x_j = j*pi/M, j = 0..M, and are
  extended by zero outside [0, pi];
* the transform of a function psi supported in [-pi, pi] is
      F(rho) = (1/2pi) * integral_{-pi}^{pi} exp(-i rho t) psi(t) dt,
  so the Fourier coefficients are c_k = F(k) and, for real psi,
  c_{-k} = conj(c_k).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

PI = math.pi
TWO_PI = 2.0 * math.pi

# Composite Gauss-Legendre rule: order-10 panels resolve about one
# oscillation period per panel to ~1e-14 relative accuracy.
GAUSS_ORDER = 10

# Batches of rho values are chunked so kernel matrices stay small.
RHO_CHUNK = 256

MIN_GRID = 16


class NumericalError(RuntimeError):
    """A numerical routine could not meet its accuracy contract."""


class QuadratureError(NumericalError):
    """Panel refinement failed to converge; carries a diagnostic."""


@lru_cache(maxsize=32)
def _gauss_rule(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


# Hard ceiling on panel counts: above this the requested contour is out
# of any sensible range and allocation would dominate memory.
PANELS_MAX = 1 << 21


@lru_cache(maxsize=4096)
def composite_rule(upper: float, panels: int, order: int = GAUSS_ORDER):
    """Nodes and weights for composite Gauss-Legendre on [0, upper]."""
    if panels > PANELS_MAX:
        raise NumericalError(
            f"quadrature would need {panels} panels; |rho| * length is out "
            "of the supported range")
    x, w = _gauss_rule(order)
    edges = np.linspace(0.0, upper, panels + 1)
    half = np.diff(edges) / 2.0
    mid = (edges[:-1] + edges[1:]) / 2.0
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return nodes, weights


def oscillation_panels(upper: float, rho_scale: float, m_hint: int = 256,
                       min_panels: int = 0) -> int:
    """Panel count for integrals of kernel(rho*t)*q(t) on [0, upper].

    Keeps panel width below ~4/|rho| so an order-10 panel sees well under
    one oscillation period, and never coarser than the sample grid /8.
    """
    p = max(int(math.ceil(m_hint / 8)),
            int(math.ceil(abs(rho_scale) * upper / 4.0)) if upper > 0 else 1,
            4)
    return max(p, min_panels)


def as_vectorized(f: Callable) -> Callable:
    """Wrap f so it accepts ndarray arguments even if written scalar."""
    def call(z):
        z = np.asarray(z)
        try:
            out = np.asarray(f(z))
            if out.shape == z.shape:
                return out
        except (TypeError, ValueError):
            pass
        flat = np.array([f(zz) for zz in np.atleast_1d(z).ravel()])
        return flat.reshape(np.atleast_1d(z).shape) if z.shape else flat[0]
    return call


@dataclass(frozen=True)
class ProblemConfig:
    """Boundary problem data: frozen points and endpoint condition pair.

    frozen holds 0 < a_1 < ... < a_N < pi; alpha, beta in {0, 1} select
    y(0) = 0 / y'(0) = 0 and y(pi) = 0 / y'(pi) = 0 respectively.
    """

    frozen: tuple
    alpha: int = 0
    beta: int = 0

    def __post_init__(self):
        pts = tuple(float(a) for a in self.frozen)
        if len(pts) == 0:
            raise ValueError("frozen: need at least one interior point")
        if any(not (0.0 < a < PI) for a in pts):
            raise ValueError("frozen: points must lie strictly inside (0, pi)")
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise ValueError("frozen: points must be strictly increasing")
        if self.alpha not in (0, 1) or self.beta not in (0, 1):
            raise ValueError("alpha and beta must each be 0 or 1")
        object.__setattr__(self, "frozen", pts)

    @property
    def N(self) -> int:
        return len(self.frozen)


@dataclass(frozen=True)
class FourierCoefficients:
    """Coefficients c_k, k = -K..K, of the zero-extended potential."""

    coeffs: np.ndarray
    K: int

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.shape != (2 * self.K + 1,):
            raise ValueError("coeffs must have length 2K+1")
        if not np.all(np.isfinite(c)):
            raise ValueError("coeffs must be finite")
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    def __getitem__(self, k: int) -> complex:
        if abs(k) > self.K:
            raise IndexError(f"coefficient index {k} outside [-{self.K}, {self.K}]")
        return complex(self.coeffs[k + self.K])

    def l2_norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def is_conjugate_symmetric(self, tol: float = 1e-12) -> bool:
        scale = max(1.0, float(np.max(np.abs(self.coeffs))))
        return bool(np.max(np.abs(self.coeffs - np.conj(self.coeffs[::-1]))) <= tol * scale)


@dataclass(frozen=True, eq=False)
class Potential:
    """A potential q on [0, pi], sampled on the uniform grid j*pi/M.

    Evaluation between nodes is piecewise linear by default, natural
    cubic on request.  Outside [0, pi] the potential evaluates to zero
    (the extension used by all transforms).  Instances are immutable;
    the samples array is frozen on construction.
    """

    samples: np.ndarray
    M: int
    fourier: Optional[FourierCoefficients] = None
    interpolation: str = "linear"

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if self.M < MIN_GRID:
            raise ValueError(f"M must be >= {MIN_GRID}")
        if s.shape != (self.M + 1,):
            raise ValueError(f"samples must have length M+1 = {self.M + 1}")
        if not np.all(np.isfinite(s)):
            raise ValueError("samples must be finite")
        if self.interpolation not in ("linear", "cubic"):
            raise ValueError("interpolation must be 'linear' or 'cubic'")
        s = s.copy()
        s.flags.writeable = False
        object.__setattr__(self, "samples", s)
        grid = np.linspace(0.0, PI, self.M + 1)
        grid.flags.writeable = False
        object.__setattr__(self, "_grid", grid)
        spline = CubicSpline(grid, s, bc_type="natural") if self.interpolation == "cubic" else None
        object.__setattr__(self, "_spline", spline)
        object.__setattr__(self, "_node_cache", {})
        object.__setattr__(self, "_cell_cache", {})

    @property
    def grid(self) -> np.ndarray:
        return self._grid

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.interpolation == "linear":
            out = np.interp(x, self._grid, self.samples, left=0.0, right=0.0)
        else:
            inside = (x >= 0.0) & (x <= PI)
            out = np.where(inside, self._spline(np.clip(x, 0.0, PI)), 0.0)
        return out if out.shape else float(out)

    # -- arithmetic: results are plain sampled potentials on the finer grid

    def _binary(self, other: "Potential", op) -> "Potential":
        if not isinstance(other, Potential):
            raise TypeError("expected a Potential")
        M = max(self.M, other.M)
        a, b = self.resample(M), other.resample(M)
        return Potential(op(a.samples, b.samples), M, interpolation=self.interpolation)

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    def scaled(self, t: float) -> "Potential":
        return Potential(self.samples * float(t), self.M, interpolation=self.interpolation)

    def resample(self, M: int) -> "Potential":
        """Resample on a finer grid; exact when M is a multiple of self.M."""
        if M == self.M:
            return self
        grid = np.linspace(0.0, PI, M + 1)
        return Potential(self.__call__(grid), M, interpolation=self.interpolation)

    # -- norms and support

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.samples)))

    def l1_norm(self) -> float:
        if self.interpolation == "linear":
            g0, g1 = self.samples[:-1], self.samples[1:]
            w = PI / self.M
            same = g0 * g1 >= 0.0
            # a sign change splits the cell into two triangles at the root
            denom = np.where(same, 1.0, np.abs(g0) + np.abs(g1))
            cells = np.where(same, (np.abs(g0) + np.abs(g1)) / 2.0,
                             (g0 * g0 + g1 * g1) / (2.0 * denom))
            return float(w * np.sum(cells))
        nodes, weights = composite_rule(PI, max(self.M // 2, 16))
        return float(np.sum(weights * np.abs(self.__call__(nodes))))

    def l2_norm(self) -> float:
        if self.interpolation == "linear":
            g0, g1 = self.samples[:-1], self.samples[1:]
            w = PI / self.M
            return float(math.sqrt(w * np.sum(g0 * g0 + g0 * g1 + g1 * g1) / 3.0))
        nodes, weights = composite_rule(PI, max(self.M // 2, 16))
        return float(math.sqrt(np.sum(weights * self.__call__(nodes) ** 2)))

    def support_interval(self, threshold: Optional[float] = None):
        """Convex hull [lo, hi] of the samples exceeding threshold.

        Default threshold is 1e-9 times the sup norm.  Returns (0.0, 0.0)
        for an identically negligible potential.
        """
        if threshold is None:
            threshold = 1e-9 * self.sup_norm()
        idx = np.nonzero(np.abs(self.samples) > threshold)[0]
        if idx.size == 0:
            return (0.0, 0.0)
        return (float(self._grid[idx[0]]), float(self._grid[idx[-1]]))

    def support_measure(self, threshold: Optional[float] = None) -> float:
        lo, hi = self.support_interval(threshold)
        return hi - lo

    def node_values(self, upper: float, panels: int, reflect: bool) -> np.ndarray:
        """Cached q values on the composite rule for [0, upper]."""
        key = (upper, panels, reflect)
        cached = self._node_cache.get(key)
        if cached is None:
            nodes, _ = composite_rule(upper, panels)
            cached = self.__call__(upper - nodes if reflect else nodes)
            if len(self._node_cache) > 256:
                self._node_cache.clear()
            self._node_cache[key] = cached
        return cached

    def linear_cells(self, upper: float, reflect: bool):
        """Breakpoint-exact cell decomposition of [0, upper] for the
        piecewise-linear interpolant.

        Returns (edges, values, mid, half, widths, slopes) where every
        sample node falling inside (0, upper) is a cell edge, so the
        integrand restricted to one cell is a single linear piece.  With
        reflect the cells describe u -> q(upper - u).
        """
        if self.interpolation != "linear":
            raise ValueError("linear_cells requires linear interpolation")
        key = (upper, reflect)
        cached = self._cell_cache.get(key)
        if cached is None:
            step = PI / self.M
            inner = np.arange(1, int(math.ceil(upper / step - 1e-9))) * step
            # a node within 1e-9 cells of an endpoint would create a
            # degenerate cell and a 0/0 slope; merge it into the endpoint
            inner = inner[(inner > 1e-9 * step) & (inner < upper - 1e-9 * step)]
            edges = np.concatenate(([0.0], inner, [upper]))
            if reflect:
                edges = upper - edges[::-1]
            values = self.__call__(upper - edges if reflect else edges)
            widths = np.diff(edges)
            cached = (edges, values, (edges[:-1] + edges[1:]) / 2.0,
                      widths / 2.0, widths, np.diff(values) / widths)
            if len(self._cell_cache) > 64:
                self._cell_cache.clear()
            self._cell_cache[key] = cached
        return cached


def potential_from_samples(values: Sequence[float], M: Optional[int] = None,
                           interpolation: str = "linear") -> Potential:
    values = np.asarray(values, dtype=float)
    if M is None:
        M = len(values) - 1
    return Potential(values, M, interpolation=interpolation)


def potential_from_fourier(coeffs: Sequence, K: Optional[int] = None, M: int = 256,
                           interpolation: str = "linear") -> Potential:
    """Reconstruct samples of q(x) = sum_k c_k exp(i k x) on [0, pi].

    coeffs is the full run c_{-K}..c_K; it must be conjugate-symmetric
    (real-valued potential) within 1e-9 of its own scale.
    """
    c = np.asarray(coeffs, dtype=complex)
    if K is None:
        if c.size % 2 == 0:
            raise ValueError("coeffs must have odd length 2K+1")
        K = (c.size - 1) // 2
    fc = FourierCoefficients(c, K)
    if not fc.is_conjugate_symmetric(1e-9):
        raise ValueError("coeffs must be conjugate-symmetric for a real potential")
    x = np.linspace(0.0, PI, M + 1)
    k = np.arange(-K, K + 1)
    vals = np.real(np.exp(1j * np.outer(x, k)) @ fc.coeffs)
    return Potential(vals, M, fourier=fc, interpolation=interpolation)


def _linear_oscillatory(q: "Potential", upper: float, flat: np.ndarray,
                        kernel: str, reflect: bool) -> np.ndarray:
    """Cell-exact integral of kernel(rho u) times a piecewise-linear q.

    On one cell [e0, e1] with q = a + b (u - e0) the antiderivative is
    elementary; written with the midpoint m and half width h it becomes

      int sin = (2a + bw) sin(rho m) sin(rho h) / rho
                + b cos(rho m) (2 sin(rho h) - rho w cos(rho h)) / rho^2

    and the cos form swaps sin(rho m) <-> cos(rho m) and flips the sign
    of the rho^-2 term.  The differences of endpoint values enter only
    through the products above, so nothing cancels catastrophically for
    small |rho|, and there is no oscillation constraint at large |rho|.
    """
    _, values, mid, half, widths, slopes = q.linear_cells(upper, reflect)
    lead = 2.0 * values[:-1] + slopes * widths
    trapezoid = float(widths @ (values[:-1] + values[1:])) / 2.0
    out = np.empty(flat.shape, dtype=complex)
    # overflow is detected by the caller and reported as NumericalError
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(0, flat.size, RHO_CHUNK):
            block = flat[i:i + RHO_CHUNK].copy()
            zero = block == 0.0
            block[zero] = 1.0
            rm = block[:, None] * mid[None, :]
            rh = block[:, None] * half[None, :]
            sm, cm = np.sin(rm), np.cos(rm)
            sh, ch = np.sin(rh), np.cos(rh)
            tail = 2.0 * sh - (block[:, None] * widths[None, :]) * ch
            if kernel == "sin":
                acc = (sm * sh) @ lead + ((cm * tail) @ slopes) / block
            else:
                acc = (cm * sh) @ lead - ((sm * tail) @ slopes) / block
            acc = acc / block
            acc[zero] = 0.0 if kernel == "sin" else trapezoid
            out[i:i + RHO_CHUNK] = acc
    return out


def oscillatory_integral(q, upper: float, rhos, kernel: str = "sin",
                         reflect: bool = False, m_hint: Optional[int] = None,
                         min_panels: int = 0) -> np.ndarray:
    """integral_0^upper kernel(rho t) * q(t) dt, vectorized over rho.

    With reflect=True the integrand is kernel(rho t) * q(upper - t),
    which is the substituted form of integral kernel(rho (upper-t)) q(t) dt.
    rho may be real or complex.  Piecewise-linear potentials are
    integrated cell by cell in closed form, which is exact through the
    interpolation kinks; other integrands use composite Gauss panels
    whose count follows the largest |rho| in the batch.
    """
    if upper <= 0:
        raise ValueError("upper must be positive")
    rhos = np.asarray(rhos, dtype=complex)
    scalar = rhos.ndim == 0
    flat = np.atleast_1d(rhos).ravel()
    if isinstance(q, Potential) and q.interpolation == "linear":
        out = _linear_oscillatory(q, upper, flat, kernel, reflect)
    else:
        if m_hint is None:
            m_hint = q.M if isinstance(q, Potential) else 256
        rho_scale = float(np.max(np.abs(flat))) if flat.size else 1.0
        panels = oscillation_panels(upper, rho_scale, m_hint, min_panels)
        nodes, weights = composite_rule(upper, panels)
        if isinstance(q, Potential):
            qv = q.node_values(upper, panels, reflect)
        else:
            qv = np.asarray(q(upper - nodes if reflect else nodes), dtype=float)
        wq = weights * qv
        fn = np.sin if kernel == "sin" else np.cos
        out = np.empty(flat.shape, dtype=complex)
        # overflow is detected below and reported as NumericalError
        with np.errstate(over="ignore", invalid="ignore"):
            for i in range(0, flat.size, RHO_CHUNK):
                block = flat[i:i + RHO_CHUNK]
                out[i:i + RHO_CHUNK] = fn(block[:, None] * nodes[None, :]) @ wq
    if not np.all(np.isfinite(out)):
        raise NumericalError(
            "oscillatory integral overflowed; |Im rho| * interval length "
            "exceeds the floating-point range, rescale the contour")
    out = out.reshape(np.atleast_1d(rhos).shape)
    return complex(out[0]) if scalar else out


def polynomial_moments(q, upper: float, max_power: int,
                       m_hint: Optional[int] = None) -> np.ndarray:
    """Moments integral_0^upper t^p q(upper - t) dt for p = 0..max_power."""
    if isinstance(q, Potential) and q.interpolation == "linear":
        edges, values, _, _, widths, slopes = q.linear_cells(upper, True)
        # per cell q = a + b (t - e0):
        # int t^p q dt = (a - b e0) (e1^p+1 - e0^p+1)/(p+1)
        #                + b (e1^p+2 - e0^p+2)/(p+2)
        const = values[:-1] - slopes * edges[:-1]
        pw = edges[None, :] ** np.arange(1, max_power + 3)[:, None]
        dpw = np.diff(pw, axis=1)
        out = np.empty(max_power + 1)
        for p in range(max_power + 1):
            out[p] = (dpw[p] @ const) / (p + 1) + (dpw[p + 1] @ slopes) / (p + 2)
        return out
    if m_hint is None:
        m_hint = q.M if isinstance(q, Potential) else 256
    panels = max(int(math.ceil(m_hint / 8)), 8)
    nodes, weights = composite_rule(upper, panels)
    if isinstance(q, Potential):
        qv = q.node_values(upper, panels, True)
    else:
        qv = np.asarray(q(upper - nodes), dtype=float)
    powers = nodes[None, :] ** np.arange(max_power + 1)[:, None]
    return powers @ (weights * qv)


def fourier_coefficients(q, K: int) -> FourierCoefficients:
    """Coefficients c_k = (1/2pi) integral_0^pi exp(-i k t) q(t) dt.

    The potential is zero-extended to [-pi, pi], so only [0, pi]
    contributes.  Conjugate symmetry c_{-k} = conj(c_k) is exact by
    construction for the real-valued q handled here.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    k = np.arange(0, K + 1, dtype=float)
    # panel edges on the sample nodes make the rule exact through the
    # interpolation kinks of sampled potentials; keep a multiple of M
    align = 0
    if isinstance(q, Potential):
        base = oscillation_panels(PI, float(K), q.M)
        align = q.M * int(math.ceil(base / q.M))
    cos_part = oscillatory_integral(q, PI, k, kernel="cos", min_panels=align)
    sin_part = oscillatory_integral(q, PI, k, kernel="sin", min_panels=align)
    pos = (cos_part - 1j * sin_part) / TWO_PI
    full = np.concatenate([np.conj(pos[1:][::-1]), pos])
    return FourierCoefficients(full, K)


def paley_wiener_transform(psi, rho, rtol: float = 1e-11,
                           max_refinements: int = 12,
                           breakpoints: Optional[Sequence[float]] = None):
    """Transform F(rho) = (1/2pi) integral exp(-i rho t) psi(t) dt.

    psi is either a Potential (integrated over [0, pi]) or a callable on
    [-pi, pi].  Panels are doubled until two consecutive refinements
    agree to rtol relative to the natural scale (1/2pi) * ||psi||_1;
    failure raises QuadratureError with the last refinement delta.
    Optional breakpoints become permanent panel edges, which restores
    fast convergence for piecewise-smooth psi.
    """
    rho = np.asarray(rho, dtype=complex)
    scalar = rho.ndim == 0
    flat = np.atleast_1d(rho).ravel()

    if isinstance(psi, Potential):
        segments = [(0.0, PI)]
        fn = psi
        m_hint = psi.M
    else:
        edges = [-PI] + sorted(float(b) for b in (breakpoints or []) if -PI < b < PI) + [PI]
        segments = list(zip(edges[:-1], edges[1:]))
        fn = psi
        m_hint = 256

    rho_scale = float(np.max(np.abs(flat))) if flat.size else 1.0

    def level(refine: int):
        total = np.zeros(flat.shape, dtype=complex)
        scale = 0.0
        for lo, hi in segments:
            length = hi - lo
            panels = oscillation_panels(length, rho_scale, m_hint) * (1 << refine)
            if isinstance(fn, Potential):
                # align panel edges to the sample grid so the integrand
                # is analytic on every panel; otherwise the kinks of the
                # interpolant cap convergence at O(panels^-2)
                panels = fn.M * int(math.ceil(panels / fn.M))
            nodes, weights = composite_rule(length, panels)
            t = lo + nodes
            vals = np.asarray(fn(t), dtype=float)
            wv = weights * vals
            scale += float(np.sum(weights * np.abs(vals)))
            for i in range(0, flat.size, RHO_CHUNK):
                block = flat[i:i + RHO_CHUNK]
                total[i:i + RHO_CHUNK] += np.exp(-1j * block[:, None] * t[None, :]) @ wv
        return total / TWO_PI, scale / TWO_PI

    prev, scale = level(0)
    for refine in range(1, max_refinements + 1):
        cur, scale = level(refine)
        delta = float(np.max(np.abs(cur - prev)))
        if delta <= rtol * (scale + float(np.max(np.abs(cur))) + 1e-300):
            out = cur.reshape(np.atleast_1d(rho).shape)
            return complex(out[0]) if scalar else out
        prev = cur
    raise QuadratureError(
        f"transform quadrature did not converge after {max_refinements} "
        f"refinements (last delta {delta:.3e}, scale {scale:.3e}); "
        "supply breakpoints at discontinuities or lower rtol")


def transform_function(psi, **kwargs) -> Callable:
    """Vectorized callable rho -> paley_wiener_transform(psi, rho)."""
    def call(rho):
        return paley_wiener_transform(psi, rho, **kwargs)
    return call
