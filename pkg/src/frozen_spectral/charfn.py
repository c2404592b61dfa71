"""Characteristic functions of the frozen-argument boundary problem.

For -y'' + q(x) * (y(a_1) + ... + y(a_N)) = rho^2 y on (0, pi) with
endpoint conditions y^(alpha)(0) = y^(beta)(pi) = 0, the eigenvalues are
the squares of the zeros of an entire characteristic function of rho.
Two evaluation paths are provided:

* char_det builds the (N+1) x (N+1) determinant whose columns couple the
  base solution, the q-dependent kernel integrals, and the frozen values;
* char_closed evaluates the algebraically expanded form
      B(rho) * (1 - sum_i V_i(rho)) + (sum_i C(a_i, rho)) * W(rho),
  where C is the base solution of -y'' = rho^2 y fixed by the left
  endpoint condition, B = C^(beta)(pi), V_i is the kernel integral over
  [0, a_i], and W the kernel integral over [0, pi] with the beta-th
  kernel derivative.

Both paths share one quadrature, are entire in rho (even, real on the
real axis for real q), and agree to rounding; the determinant is the
reference implementation, the closed form the fast one.

char_difference evaluates the difference of the characteristic functions
of two potentials directly from q1 - q2; the q-independent leading term
cancels exactly, which is what makes the difference small and worth
resolving without cancellation error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .model import (PI, NumericalError, Potential, ProblemConfig,
                    oscillatory_integral, polynomial_moments)

# Below this |rho| the kernels switch to 5-term even power series; the
# switch keeps sin(rho x)/rho and friends smooth through rho = 0.
RHO_SERIES_SWITCH = 1e-3

_SIN_FACTORIALS = np.array([math.factorial(2 * j + 1) for j in range(5)], dtype=float)
_COS_FACTORIALS = np.array([math.factorial(2 * j) for j in range(5)], dtype=float)
_SIGNS = np.array([1.0, -1.0, 1.0, -1.0, 1.0])


def _split_small(rhos: np.ndarray):
    small = np.abs(rhos) < RHO_SERIES_SWITCH
    return small, ~small


def sin_over_rho(rhos, x: float):
    """sin(rho x)/rho, entire in rho, evaluated stably through rho = 0."""
    rhos = np.asarray(rhos, dtype=complex)
    scalar = rhos.ndim == 0
    flat = np.atleast_1d(rhos)
    out = np.empty(flat.shape, dtype=complex)
    small, big = _split_small(flat)
    if np.any(big):
        out[big] = np.sin(flat[big] * x) / flat[big]
    if np.any(small):
        z2 = (flat[small] * x) ** 2
        acc = np.zeros_like(z2)
        for j in range(4, -1, -1):
            acc = acc * z2 + _SIGNS[j] / _SIN_FACTORIALS[j]
        out[small] = x * acc
    out = out.reshape(rhos.shape) if not scalar else out
    return complex(out[0]) if scalar else out


def kernel_value_integral(q: Potential, upper: float, rhos) -> np.ndarray:
    """integral_0^upper sin(rho (upper - t))/rho * q(t) dt.

    The value branch of the transmutation kernel; entire in rho.  Large
    |rho| uses the oscillatory rule on the substituted integrand
    sin(rho u) q(upper - u); small |rho| sums the even power series whose
    coefficients are polynomial moments of q.
    """
    rhos = np.asarray(rhos, dtype=complex)
    scalar = rhos.ndim == 0
    flat = np.atleast_1d(rhos).ravel()
    out = np.empty(flat.shape, dtype=complex)
    small, big = _split_small(flat)
    if np.any(big):
        out[big] = oscillatory_integral(q, upper, flat[big], kernel="sin",
                                        reflect=True) / flat[big]
    if np.any(small):
        moments = polynomial_moments(q, upper, 9)[1::2]  # odd powers 1,3,5,7,9
        r2 = flat[small] ** 2
        acc = np.zeros_like(r2)
        for j in range(4, -1, -1):
            acc = acc * r2 + _SIGNS[j] * moments[j] / _SIN_FACTORIALS[j]
        out[small] = acc
    out = out.reshape(np.atleast_1d(rhos).shape)
    return complex(out[0]) if scalar else out


def kernel_derivative_integral(q: Potential, upper: float, rhos) -> np.ndarray:
    """integral_0^upper cos(rho (upper - t)) * q(t) dt (kernel x-derivative)."""
    rhos = np.asarray(rhos, dtype=complex)
    scalar = rhos.ndim == 0
    flat = np.atleast_1d(rhos).ravel()
    out = np.empty(flat.shape, dtype=complex)
    small, big = _split_small(flat)
    if np.any(big):
        out[big] = oscillatory_integral(q, upper, flat[big], kernel="cos",
                                        reflect=True)
    if np.any(small):
        moments = polynomial_moments(q, upper, 8)[0::2]  # even powers 0,2,4,6,8
        r2 = flat[small] ** 2
        acc = np.zeros_like(r2)
        for j in range(4, -1, -1):
            acc = acc * r2 + _SIGNS[j] * moments[j] / _COS_FACTORIALS[j]
        out[small] = acc
    out = out.reshape(np.atleast_1d(rhos).shape)
    return complex(out[0]) if scalar else out


def _base_values(config: ProblemConfig, flat: np.ndarray):
    """C(a_i), i = 1..N, and the boundary factor B = C^(beta)(pi)."""
    if config.alpha == 0:
        cvals = [sin_over_rho(flat, a) for a in config.frozen]
        boundary = sin_over_rho(flat, PI) if config.beta == 0 else np.cos(flat * PI)
    else:
        cvals = [np.cos(flat * a) for a in config.frozen]
        boundary = np.cos(flat * PI) if config.beta == 0 else -flat * np.sin(flat * PI)
    return cvals, boundary


def _kernel_terms(q: Potential, config: ProblemConfig, flat: np.ndarray):
    """V_i over [0, a_i] and the boundary kernel integral W over [0, pi]."""
    vvals = [kernel_value_integral(q, a, flat) for a in config.frozen]
    if config.beta == 0:
        w = kernel_value_integral(q, PI, flat)
    else:
        w = kernel_derivative_integral(q, PI, flat)
    return vvals, w


def _as_batch(rho):
    rho = np.asarray(rho, dtype=complex)
    return rho, rho.ndim == 0, np.atleast_1d(rho).ravel()


def char_closed(q: Potential, config: ProblemConfig, rho):
    """Characteristic function via the expanded closed form."""
    rho, scalar, flat = _as_batch(rho)
    # overflow is detected on the combined value and raised below
    with np.errstate(over="ignore", invalid="ignore"):
        cvals, boundary = _base_values(config, flat)
        vvals, w = _kernel_terms(q, config, flat)
        out = boundary * (1.0 - sum(vvals)) + sum(cvals) * w
    if not np.all(np.isfinite(out)):
        raise NumericalError("characteristic function overflowed; reduce |Im rho|")
    out = out.reshape(np.atleast_1d(rho).shape)
    return complex(out[0]) if scalar else out


def char_det(q: Potential, config: ProblemConfig, rho):
    """Characteristic function via the (N+1) x (N+1) determinant.

    Row i < N carries the frozen point a_{i+1}: base solution value,
    kernel integral (the first row absorbs the -1 from the frozen-value
    coupling), and a sparse +/-1 block expressing that all rows share one
    frozen-sum unknown.  The last row carries the endpoint condition.
    Evaluated by LU factorization with partial pivoting on the stacked
    batch.
    """
    rho, scalar, flat = _as_batch(rho)
    n, N = flat.size, config.N
    with np.errstate(over="ignore", invalid="ignore"):
        cvals, boundary = _base_values(config, flat)
        vvals, w = _kernel_terms(q, config, flat)
        A = np.zeros((n, N + 1, N + 1), dtype=complex)
        for i in range(N):
            A[:, i, 0] = cvals[i]
            A[:, i, 1] = vvals[i]
        A[:, 0, 1] -= 1.0
        A[:, N, 0] = boundary
        A[:, N, 1] = w
        for j in range(2, N + 1):
            A[:, 0, j] = 1.0
            A[:, j - 1, j] = -1.0
        out = np.linalg.det(A)
    if not np.all(np.isfinite(out)):
        raise NumericalError("characteristic determinant overflowed; reduce |Im rho|")
    out = out.reshape(np.atleast_1d(rho).shape)
    return complex(out[0]) if scalar else out


def char_difference(q1: Potential, q2: Potential, config: ProblemConfig, rho):
    """Difference of the two characteristic functions, formed from q1 - q2.

    The q-independent leading term cancels algebraically, so the result
    is linear in qhat = q1 - q2 and decays on the real axis; evaluating
    it from qhat avoids subtracting two nearly equal characteristic
    values.
    """
    rho, scalar, flat = _as_batch(rho)
    qhat = q1 - q2
    with np.errstate(over="ignore", invalid="ignore"):
        cvals, boundary = _base_values(config, flat)
        vvals, w = _kernel_terms(qhat, config, flat)
        out = -boundary * sum(vvals) + sum(cvals) * w
    if not np.all(np.isfinite(out)):
        raise NumericalError("characteristic difference overflowed; reduce |Im rho|")
    out = out.reshape(np.atleast_1d(rho).shape)
    return complex(out[0]) if scalar else out


def char_difference_at_zero(q1: Potential, q2: Potential,
                            config: ProblemConfig) -> float:
    """Value of the characteristic difference at rho = 0.

    Evaluated through the power-series kernel branch, where the limits
    sin(rho x)/rho -> x and sin(rho(u-t))/rho -> u - t are exact; for
    real potentials the value is real.
    """
    value = char_difference(q1, q2, config, 0.0)
    return float(np.real(value))


@dataclass(frozen=True)
class CharacteristicFunction:
    """Entire function rho -> characteristic value for one potential.

    method selects the evaluation path: "closed" (default, fast) or
    "det" (reference determinant).  Instances are callable on scalars or
    arrays of real or complex rho.
    """

    q: Potential
    config: ProblemConfig
    method: str = "closed"

    def __post_init__(self):
        if self.method not in ("closed", "det"):
            raise ValueError("method must be 'closed' or 'det'")

    def __call__(self, rho):
        fn = char_closed if self.method == "closed" else char_det
        return fn(self.q, self.config, rho)

    def at_zero(self) -> float:
        # rho=0 goes through the small-|rho| series branch, so this is
        # finite for every boundary pair.
        return float(np.real(char_closed(self.q, self.config, 0.0)))


@dataclass(frozen=True)
class CharDifference:
    """Entire function rho -> difference of characteristic values."""

    q1: Potential
    q2: Potential
    config: ProblemConfig

    def __call__(self, rho):
        return char_difference(self.q1, self.q2, self.config, rho)

    def at_zero(self) -> float:
        return char_difference_at_zero(self.q1, self.q2, self.config)
