"""Least-squares and closed-form approximation of ideal transfer maps.

Two non-causal targets are approximated by causal unit-step
polynomials on the two-sided band I = [-pi, -hw] U [hw, pi]:

* a T-step predictor, target zeta(omega) = exp(i*omega*T);
* an ideal high-pass filter, target the indicator of |omega| >= cutoff.

Neither target is continuous across the excluded band, so plain
polynomial approximation in e^{i*omega} cannot work; polynomials in
u(omega) can, because u separates the band from the pole at 0.

The weighted least-squares solve is linear algebra on a fixed grid;
the exponential construction gives explicit predictor coefficients
with a provable error budget and is used both as a fallback and as an
achievability certificate for the solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spectral import (
    FrequencyGrid,
    TransferPoly,
    eval_transfer,
    expand_one_minus_u_power,
    poly_multiply,
    u_of_omega,
)

__all__ = [
    "PredictorTarget",
    "HighPassTarget",
    "ApproxReport",
    "make_grid",
    "target_value",
    "solve_ls",
    "solve_ls_real_even",
    "exponential_predictor",
    "exponential_predictor_limit",
    "select_nu_and_d",
    "predictor_power",
]

# Relative singular-value cutoff shared by every least-squares solve.
SVD_RCOND = 1e-12


@dataclass(frozen=True)
class PredictorTarget:
    """T-step-ahead prediction target e^{i*omega*T} on I.

    horizon 0 is the degenerate identity target; it is accepted so the
    fitting layer can exercise the trivial case.
    """

    horizon: int
    gap_half_width: float

    def __post_init__(self):
        if self.horizon < 0 or self.horizon != int(self.horizon):
            raise ValueError("prediction horizon must be a non-negative integer")
        if not 0.0 < self.gap_half_width < math.pi:
            raise ValueError("gap half-width must lie in (0, pi)")


@dataclass(frozen=True)
class HighPassTarget:
    """Ideal high-pass target 1_{|omega| >= cutoff} on I, cutoff >= hw."""

    cutoff: float
    gap_half_width: float

    def __post_init__(self):
        if not 0.0 < self.gap_half_width <= self.cutoff < math.pi:
            raise ValueError("need 0 < gap half-width <= cutoff < pi")


ApproximationTarget = PredictorTarget | HighPassTarget


@dataclass(frozen=True)
class ApproxReport:
    """Quality report for one solve: weighted L2 error over the grid,
    max pointwise modulus error, and design-matrix condition number."""

    l2_error: float
    sup_error: float
    condition_number: float

    def to_dict(self) -> dict:
        return {
            "l2Error": self.l2_error,
            "supError": self.sup_error,
            "conditionNumber": self.condition_number,
        }


def make_grid(gap_half_width: float, m: int = 1024) -> FrequencyGrid:
    """Symmetric trapezoid grid on I with m points per side."""
    if not 0.0 < gap_half_width < math.pi:
        raise ValueError("gap half-width must lie in (0, pi)")
    if m < 2:
        raise ValueError("need at least two points per side")
    pos = np.linspace(gap_half_width, math.pi, m)
    h = (math.pi - gap_half_width) / (m - 1)
    w = np.full(m, h)
    w[0] = w[-1] = h / 2.0
    points = np.concatenate([-pos[::-1], pos])
    weights = np.concatenate([w[::-1], w])
    return FrequencyGrid(points, weights, half_width=gap_half_width)


def target_value(target: ApproximationTarget, omega):
    """Ideal transfer value of the target at omega (scalar or array)."""
    om = np.asarray(omega, dtype=float)
    if isinstance(target, PredictorTarget):
        val = np.exp(1j * om * target.horizon)
    elif isinstance(target, HighPassTarget):
        val = (np.abs(om) >= target.cutoff).astype(complex)
    else:
        raise TypeError(f"unknown target {target!r}")
    return complex(val) if np.isscalar(omega) else val


def _u_powers(omega: np.ndarray, degree: int) -> np.ndarray:
    """Column k holds u(omega)^k, k = 0..degree."""
    u = u_of_omega(omega)
    V = np.empty((omega.size, degree + 1), dtype=complex)
    V[:, 0] = 1.0
    for k in range(1, degree + 1):
        V[:, k] = V[:, k - 1] * u
    return V


def _report(poly: TransferPoly, target, grid: FrequencyGrid, cond: float) -> ApproxReport:
    resid = target_value(target, grid.points) - eval_transfer(poly, grid.points)
    l2 = math.sqrt(float(np.sum(grid.weights * np.abs(resid) ** 2)))
    return ApproxReport(l2, float(np.max(np.abs(resid))), cond)


def solve_ls(
    target: ApproximationTarget, degree: int, grid: FrequencyGrid
) -> tuple[TransferPoly, ApproxReport]:
    """Weighted least squares for real coefficients a_0..a_d.

    The complex residual on the symmetric grid is split into real and
    imaginary parts and stacked into one real system, which is solved
    by SVD with relative cutoff SVD_RCOND.  Ill conditioning is
    reported, never fatal; only an empty grid is an error.
    """
    if degree < 0:
        raise ValueError("degree must be non-negative")
    if grid.points.size == 0:
        raise ValueError("empty frequency grid")
    V = _u_powers(grid.points, degree)
    zeta = target_value(target, grid.points)
    sw = np.sqrt(grid.weights)
    A = np.vstack([(V * sw[:, None]).real, (V * sw[:, None]).imag])
    b = np.concatenate([(zeta * sw).real, (zeta * sw).imag])
    coef, _, _, svals = np.linalg.lstsq(A, b, rcond=SVD_RCOND)
    cond = float(svals[0] / svals[-1]) if svals[-1] > 0 else float("inf")
    poly = TransferPoly(coef)
    return poly, _report(poly, target, grid, cond)


def solve_ls_real_even(
    cutoff: float, gap_half_width: float, degree: int, grid: FrequencyGrid
) -> tuple[TransferPoly, ApproxReport]:
    """High-pass fit in the real even basis q(omega)^k, then u-basis.

    q(omega) = 1/(2 - 2*cos(omega)) equals |u|^2 and also u*(1-u), so a
    degree-d fit in q converts exactly to a degree-2d polynomial in u.
    The target being real and even, the whole solve stays real.
    """
    target = HighPassTarget(cutoff, gap_half_width)
    if degree < 0:
        raise ValueError("degree must be non-negative")
    q = 1.0 / (2.0 - 2.0 * np.cos(grid.points))
    Q = np.empty((grid.points.size, degree + 1))
    Q[:, 0] = 1.0
    for k in range(1, degree + 1):
        Q[:, k] = Q[:, k - 1] * q
    sw = np.sqrt(grid.weights)
    A = Q * sw[:, None]
    b = target_value(target, grid.points).real * sw
    coef, _, _, svals = np.linalg.lstsq(A, b, rcond=SVD_RCOND)
    cond = float(svals[0] / svals[-1]) if svals[-1] > 0 else float("inf")

    # sum_k b_k (u*(1-u))^k, assembled with the exact binomial expansion
    out = np.zeros(2 * degree + 1)
    for k, bk in enumerate(coef):
        term = poly_multiply(
            TransferPoly(np.concatenate([np.zeros(k), [1.0]])),
            expand_one_minus_u_power(k),
        )
        out[: term.coeffs.size] += bk * term.coeffs
    poly = TransferPoly(out)
    return poly, _report(poly, target, grid, cond)


def exponential_predictor(nu: float, degree: int) -> TransferPoly:
    """Degree-d truncation of the exponential one-step predictor.

    The closed form z*(1 - exp(nu/(1-z))) approaches z as nu -> -inf
    on the unit circle minus the pole; expanding the exponential and
    using z/(1-z) = -u, 1/(1-z) = 1-u gives the causal truncation

        sum_{k=1}^{d} (nu^k / k!) * u * (1-u)^(k-1).

    nu must be negative; the modulus of the omitted factor exp(nu/(1-z))
    equals e^{nu/2} on the whole circle.
    """
    if not nu < 0:
        raise ValueError("nu must be negative")
    if degree < 1:
        raise ValueError("degree must be at least 1")
    out = np.zeros(degree + 1)
    scale = 1.0
    for k in range(1, degree + 1):
        scale *= nu / k
        term = poly_multiply(
            TransferPoly(np.array([0.0, 1.0])), expand_one_minus_u_power(k - 1)
        )
        out[: term.coeffs.size] += scale * term.coeffs
    return TransferPoly(out)


def exponential_predictor_limit(nu: float, omega):
    """Untruncated predictor z*(1 - exp(nu/(1-z))) at z = e^{i*omega}.

    Reference for tests: |value - e^{i*omega}| = e^{nu/2} identically,
    because Re(1/(1 - e^{i*omega})) = 1/2.
    """
    if not nu < 0:
        raise ValueError("nu must be negative")
    z = np.exp(1j * np.asarray(omega, dtype=float))
    val = z * (1.0 - np.exp(nu / (1.0 - z)))
    return complex(val) if np.isscalar(omega) else val


def select_nu_and_d(eps: float, gap_half_width: float) -> tuple[float, int]:
    """Split an error budget eps between truncation and exponential tail.

    nu = 2*ln(eps/2) makes the untruncated predictor miss by exactly
    eps/2 in modulus; d is the smallest degree whose Taylor remainder
    bound e^r * r^(d+1) / (d+1)! with r = |nu| / (2*sin(hw/2)) fits in
    the remaining eps/2, which gives sup error <= eps on I.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0, 1)")
    if not 0.0 < gap_half_width < math.pi:
        raise ValueError("gap half-width must lie in (0, pi)")
    nu = 2.0 * math.log(eps / 2.0)
    r = abs(nu) / (2.0 * math.sin(gap_half_width / 2.0))
    log_budget = math.log(eps / 2.0)
    for d in range(1, 100_000):
        log_tail = r + (d + 1) * math.log(r) - math.lgamma(d + 2)
        if log_tail <= log_budget:
            return nu, d
    raise ValueError("no feasible degree found")  # pragma: no cover


def predictor_power(p: TransferPoly, T: int) -> TransferPoly:
    """T-step predictor as the T-th power of a one-step predictor."""
    if T < 1:
        raise ValueError("T must be a positive integer")
    out = p
    for _ in range(T - 1):
        out = poly_multiply(out, p)
    return out
