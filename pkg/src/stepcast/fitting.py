"""Estimating cascade initial states from observations only.

The causal cascade output is affine in the unknown initial
accumulators eta.  Over a window of observations x(t1..theta) the k-th
running sum splits as

    s_k(t) = sum_l C_{k,l}(t) * eta_l + F_k(t)

where F is the zero-state response to the data (F_0 = x, each F_k a
cumulative sum of the previous) and C collects the integer propagation
weights of each initial accumulator (C_{k,l} = delta_{k,l} at t1 - 1,
then the same cumulative recursion with zero input).  Both depend only
on the observations and t1, never on the polynomial, so one window of
rows serves predictor and filter alike.

Matching predicted outputs against later observed samples gives a
small linear least-squares problem for eta; with the fitted (or exact)
eta the same rows evaluate predictions and filtered estimates anywhere
in the window.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .spectral import TransferPoly, poly_pad
from .signals import PeriodicSignal, modulate

__all__ = [
    "RegressionRow",
    "FitResult",
    "build_rows",
    "predict_value",
    "predict_series",
    "fit_eta",
    "predict_ahead",
    "filter_with_shared_eta",
    "eta_deviation_response",
    "fit_eta_modulated",
    "predict_modulated",
    "filter_modulated",
    "fit_to_dict",
    "fit_from_dict",
]

SVD_RCOND = 1e-12
COND_WARN = 1e12


@dataclass(frozen=True)
class RegressionRow:
    """Window time t with F (length d+1) and C (shape (d+1, d))."""

    t: int
    F: np.ndarray
    C: np.ndarray


@dataclass(frozen=True)
class FitResult:
    """Fitted initial accumulators plus solve diagnostics."""

    eta: np.ndarray
    residual_norm: float
    condition_number: float
    holdout_error: float

    def __post_init__(self):
        if not np.all(np.isfinite(self.eta)):
            raise ValueError("fitted eta must be finite")


def build_rows(x, t1: int, degree: int) -> list[RegressionRow]:
    """Rows for every window time t1..t1+len(x)-1.

    F_k is the k-fold cumulative sum of the observations; C_{k,l} obeys
    C_{k,l}(t) = delta_{k,l} + sum_{s=t1}^{t} C_{k-1,l}(s) with
    C_{0,l} = 0, so C_{k,l} is zero for l > k, one for l = k, and the
    binomial ramp C(t - t1 + k - l, k - l) below the diagonal.
    """
    x = np.asarray(x)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("need a non-empty 1-D observation window")
    if degree < 0:
        raise ValueError("degree must be non-negative")
    L = x.size
    F = np.empty((degree + 1, L), dtype=np.result_type(x.dtype, float))
    F[0] = x
    for k in range(1, degree + 1):
        F[k] = np.cumsum(F[k - 1])
    C = np.zeros((degree + 1, degree, L))
    for l in range(1, degree + 1):
        C[l, l - 1] = 1.0
        for k in range(l + 1, degree + 1):
            C[k, l - 1] = np.cumsum(C[k - 1, l - 1])
    return [
        RegressionRow(t=t1 + i, F=F[:, i].copy(), C=C[:, :, i].copy())
        for i in range(L)
    ]


def _check_dims(row: RegressionRow, p: TransferPoly, eta: np.ndarray) -> None:
    d = p.degree
    if row.F.size != d + 1 or row.C.shape != (d + 1, d) or eta.size != d:
        raise ValueError("row, polynomial and eta dimensions disagree")


def predict_value(row: RegressionRow, p: TransferPoly, eta):
    """Cascade output at row.t for initial accumulators eta."""
    eta = np.asarray(eta)
    _check_dims(row, p, eta)
    states = row.C @ eta + row.F if eta.size else row.F
    return p.coeffs @ states


def predict_series(rows, p: TransferPoly, eta) -> np.ndarray:
    """predict_value mapped over a row sequence."""
    return np.array([predict_value(r, p, eta) for r in rows])


def _design(rows, times, p: TransferPoly):
    by_t = {r.t: r for r in rows}
    picked = [by_t[t] for t in times]
    A = np.array([p.coeffs @ r.C for r in picked])
    f = np.array([p.coeffs @ r.F for r in picked])
    return picked, A, f


def fit_eta(
    x,
    t1: int,
    p_pred: TransferPoly,
    T: int,
    sample_times=None,
    dbar: int | None = None,
) -> FitResult:
    """Least-squares eta from pairs (x(t_m + T) vs predicted output).

    Sample times default to the dbar most recent admissible times
    t_m <= theta - T (dbar = 2*degree).  Admissible times not used for
    fitting are scored as holdout; holdout_error is 0 when there are
    none.  The solve uses an SVD cutoff and reports, never fails on,
    ill conditioning.
    """
    x = np.asarray(x)
    if T < 0:
        raise ValueError("horizon must be non-negative")
    d = p_pred.degree
    theta = t1 + x.size - 1
    admissible = np.arange(t1, theta - T + 1)
    if sample_times is None:
        if dbar is None:
            dbar = 2 * d
        if dbar < d:
            raise ValueError("need at least degree-many sample times")
        sample_times = admissible[-dbar:] if dbar else admissible[:0]
    sample_times = np.asarray(sample_times, dtype=int)
    if sample_times.size < d:
        raise ValueError("need at least degree-many sample times")
    if sample_times.size and (
        sample_times.min() < t1 or sample_times.max() > theta - T
    ):
        raise ValueError("sample times must satisfy t1 <= t <= theta - T")

    rows = build_rows(x, t1, d)
    picked, A, f = _design(rows, sample_times, p_pred)
    b = x[sample_times + T - t1] - f
    if d == 0:
        eta = np.zeros(0)
        resid = float(np.linalg.norm(b))
        cond = 1.0
    else:
        if np.iscomplexobj(b):
            A = A.astype(complex)
        eta, _, _, svals = np.linalg.lstsq(A, b, rcond=SVD_RCOND)
        resid = float(np.linalg.norm(A @ eta - b))
        cond = float(svals[0] / svals[-1]) if svals[-1] > 0 else float("inf")
        if cond > COND_WARN:
            warnings.warn(f"eta fit condition number {cond:.3g}", stacklevel=2)

    holdout = sorted(set(admissible.tolist()) - set(sample_times.tolist()))
    hold_err = 0.0
    if holdout:
        by_t = {r.t: r for r in rows}
        errs = [
            abs(predict_value(by_t[t], p_pred, eta) - x[t + T - t1]) for t in holdout
        ]
        hold_err = float(max(errs))
    return FitResult(eta, resid, cond, hold_err)


def predict_ahead(x, t1: int, p_pred: TransferPoly, T: int, fit: FitResult):
    """Estimate of x(theta + T) from the window and fitted eta."""
    rows = build_rows(x, t1, p_pred.degree)
    return predict_value(rows[-1], p_pred, fit.eta)


def filter_with_shared_eta(
    x, t1: int, p_pred: TransferPoly, T: int, p_filt: TransferPoly, fit: FitResult
) -> np.ndarray:
    """Filtered estimate over the window, reusing the predictor's eta.

    The accumulators are a property of the signal, not of the target,
    so eta fitted through the prediction equations feeds the filter
    polynomial directly.  Degrees are aligned by zero padding; eta
    entries beyond the fitted length are unconstrained by the shorter
    polynomial and enter as zeros.
    """
    d = max(p_pred.degree, p_filt.degree)
    pf = poly_pad(p_filt, d)
    eta = np.zeros(d, dtype=np.asarray(fit.eta).dtype if fit.eta.size else float)
    eta[: fit.eta.size] = fit.eta
    rows = build_rows(x, t1, d)
    return predict_series(rows, pf, eta)


def eta_deviation_response(rows, p: TransferPoly, delta_eta) -> np.ndarray:
    """Output deviation series caused by a state error delta_eta.

    Used to measure the sensitivity factor of shared-eta filtering:
    the realized deviation of a fitted run from the exact-eta run is
    exactly this response with delta_eta = eta_hat - eta_exact.
    """
    delta = np.asarray(delta_eta)
    return np.array([p.coeffs @ (r.C @ delta) for r in rows])


def _carrier(theta_mod: float, t: np.ndarray) -> np.ndarray:
    # multiples of pi get the exact alternating-sign carrier; the
    # complex exponential would leak roundoff into sin(pi t)
    m = theta_mod / math.pi
    if m == round(m):
        return np.where((t * int(round(m))) % 2 == 0, 1.0, -1.0)
    return np.exp(1j * theta_mod * t)


def _demodulated(x_hat, t1: int, theta_mod: float) -> np.ndarray:
    x_hat = np.asarray(x_hat)
    t = np.arange(t1, t1 + x_hat.size)
    return x_hat * np.conj(_carrier(theta_mod, t))


def fit_eta_modulated(
    x_hat, t1: int, theta_mod: float, p_pred: TransferPoly, T: int, **kw
) -> FitResult:
    """fit_eta on the demodulated window e^{-i*theta*t} x_hat(t)."""
    return fit_eta(_demodulated(x_hat, t1, theta_mod), t1, p_pred, T, **kw)


def predict_modulated(
    x_hat, t1: int, theta_mod: float, p_pred: TransferPoly, T: int, fit: FitResult
) -> np.ndarray:
    """T-ahead estimates of a signal with gap centered at theta_mod.

    Demodulates to a centered-gap signal, predicts causally there, and
    remodulates each estimate by e^{i*theta*(t+T)}.  Returns the series
    over the window; the last entry estimates x_hat(theta + T).
    """
    x = _demodulated(x_hat, t1, theta_mod)
    rows = build_rows(x, t1, p_pred.degree)
    y = predict_series(rows, p_pred, fit.eta)
    t = np.arange(t1, t1 + y.size)
    out = y * _carrier(theta_mod, t + T)
    return _realify(out, x_hat, theta_mod)


def filter_modulated(
    x_hat,
    t1: int,
    theta_mod: float,
    p_pred: TransferPoly,
    T: int,
    p_filt: TransferPoly,
    fit: FitResult,
) -> np.ndarray:
    """Shared-eta filtering around a gap centered at theta_mod."""
    x = _demodulated(x_hat, t1, theta_mod)
    y = filter_with_shared_eta(x, t1, p_pred, T, p_filt, fit)
    t = np.arange(t1, t1 + y.size)
    out = y * _carrier(theta_mod, t)
    return _realify(out, x_hat, theta_mod)


def _realify(out: np.ndarray, x_hat, theta_mod: float) -> np.ndarray:
    # a real input under a half-turn-per-sample modulation stays real
    if not np.iscomplexobj(np.asarray(x_hat)):
        if abs(math.remainder(theta_mod, math.pi)) < 1e-12:
            return out.real
    return out


def fit_to_dict(fit: FitResult) -> dict:
    eta = np.asarray(fit.eta)
    if np.iscomplexobj(eta):
        eta_json = [[float(v.real), float(v.imag)] for v in eta]
    else:
        eta_json = [float(v) for v in eta]
    return {
        "eta": eta_json,
        "residual": fit.residual_norm,
        "cond": fit.condition_number,
        "holdout": fit.holdout_error,
    }


def fit_from_dict(d: dict) -> FitResult:
    raw = d["eta"]
    if raw and isinstance(raw[0], (list, tuple)):
        eta = np.array([complex(re, im) for re, im in raw])
    else:
        eta = np.asarray(raw, dtype=float)
    return FitResult(eta, float(d["residual"]), float(d["cond"]), float(d["holdout"]))
