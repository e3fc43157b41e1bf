"""Transfer functions that are polynomials in the unit-step basis.

The basis variable is u(omega) = 1/(1 - exp(-i*omega)), the transfer
function of the running-sum (cumulative) operator.  A causal linear
map built from d nested running sums has transfer function

    psi(e^{i*omega}) = sum_k a_k * u(omega)**k,   a_k real.

Two identities make this basis convenient and are relied on throughout:

* Re u(omega) = 1/2 exactly, for every omega not a multiple of 2*pi.
* |u(omega)| = 1 / (2*sin(|omega|/2)), so u is small only away from
  omega = 0 and blows up at the pole.

Polynomials are kept as plain real coefficient arrays in ascending
powers of u; the declared degree is len(coeffs) - 1 and trailing zeros
are never trimmed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "TransferPoly",
    "SpectrumGap",
    "FrequencyGrid",
    "u_of_omega",
    "eval_transfer",
    "poly_multiply",
    "poly_pad",
    "expand_one_minus_u_power",
    "poly_to_dict",
    "poly_from_dict",
    "save_poly",
    "load_poly",
]


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class TransferPoly:
    """Real polynomial sum_k coeffs[k] * u**k in the unit-step basis.

    The degree is declared by the coefficient length; a zero leading
    coefficient is legal and preserved.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coeffs must be a non-empty 1-D real array")
        if not np.all(np.isfinite(c)):
            raise ValueError("coeffs must be finite")
        object.__setattr__(self, "coeffs", _readonly(c))

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, omega):
        return eval_transfer(self, omega)


@dataclass(frozen=True)
class SpectrumGap:
    """Open frequency band (center - half_width, center + half_width)
    on which a signal's spectrum vanishes.  Angles in radians."""

    half_width: float
    center: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.half_width < math.pi:
            raise ValueError("gap half-width must lie in (0, pi)")
        if not -math.pi < self.center <= math.pi:
            raise ValueError("gap center must lie in (-pi, pi]")


@dataclass(frozen=True)
class FrequencyGrid:
    """Quadrature grid on I = [-pi, -hw] U [hw, pi].

    points are sorted ascending and symmetric about 0; weights are a
    trapezoid rule per side, so weights.sum() equals the measure
    2*(pi - hw) of I.
    """

    points: np.ndarray
    weights: np.ndarray
    half_width: float = field(default=0.0)

    def __post_init__(self):
        p = np.asarray(self.points, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if p.ndim != 1 or p.shape != w.shape or p.size == 0:
            raise ValueError("points and weights must be matching 1-D arrays")
        if np.any(w <= 0):
            raise ValueError("weights must be positive")
        if np.any(np.abs(p) < self.half_width) or np.any(p == 0.0):
            raise ValueError("grid points must avoid the open gap and omega=0")
        # symmetry: the reversed, negated point set must coincide
        if not np.allclose(p, -p[::-1], rtol=0, atol=1e-12):
            raise ValueError("grid must be symmetric about omega=0")
        object.__setattr__(self, "points", _readonly(p))
        object.__setattr__(self, "weights", _readonly(w))


def u_of_omega(omega):
    """Evaluate u(omega) = 1/(1 - exp(-i*omega)).

    Accepts a scalar or ndarray.  Raises ValueError at the pole
    (omega a multiple of 2*pi), where the running sum has no transfer
    value.
    """
    om = np.asarray(omega, dtype=float)
    if np.any(np.mod(om, 2.0 * np.pi) == 0.0):
        raise ValueError("u(omega) has a pole at omega = 0 mod 2*pi")
    val = 1.0 / (1.0 - np.exp(-1j * om))
    return complex(val) if np.isscalar(omega) else val


def eval_transfer(p: TransferPoly, omega):
    """Evaluate psi(e^{i*omega}) = sum_k a_k u(omega)^k by Horner.

    A degree-0 polynomial is constant and may be evaluated anywhere,
    including the pole of u.
    """
    if p.degree == 0:
        c = complex(p.coeffs[0])
        return c if np.isscalar(omega) else np.full(np.shape(omega), c)
    u = u_of_omega(omega)
    val = np.full_like(u, complex(p.coeffs[-1]))
    for a in p.coeffs[-2::-1]:
        val = val * u + a
    return complex(val) if np.isscalar(omega) else val


def poly_multiply(p: TransferPoly, q: TransferPoly) -> TransferPoly:
    """Product polynomial; degree adds, coefficients convolve."""
    return TransferPoly(np.convolve(p.coeffs, q.coeffs))


def poly_pad(p: TransferPoly, degree: int) -> TransferPoly:
    """Same polynomial re-declared at a higher degree (zero padding)."""
    if degree < p.degree:
        raise ValueError("cannot pad to a lower degree")
    c = np.zeros(degree + 1)
    c[: p.coeffs.size] = p.coeffs
    return TransferPoly(c)


def expand_one_minus_u_power(k: int) -> TransferPoly:
    """(1 - u)**k as a TransferPoly: coefficients C(k,j) * (-1)^j.

    Note that 1 - u(omega) = 1/(1 - e^{i*omega}) = conj(u), i.e. the
    anticausal running sum; the expansion stays inside the causal
    polynomial algebra.
    """
    if k < 0:
        raise ValueError("power must be non-negative")
    c = np.array([(-1.0) ** j * math.comb(k, j) for j in range(k + 1)])
    return TransferPoly(c)


def poly_to_dict(p: TransferPoly, target: dict | None = None) -> dict:
    d = {"degree": p.degree, "coeffs": [float(a) for a in p.coeffs]}
    if target is not None:
        d["target"] = target
    return d


def poly_from_dict(d: dict) -> TransferPoly:
    coeffs = np.asarray(d["coeffs"], dtype=float)
    if int(d["degree"]) != coeffs.size - 1:
        raise ValueError("declared degree does not match coefficient count")
    return TransferPoly(coeffs)


def save_poly(p: TransferPoly, path, target: dict | None = None) -> None:
    with open(path, "w") as fh:
        json.dump(poly_to_dict(p, target), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_poly(path) -> TransferPoly:
    with open(path) as fh:
        return poly_from_dict(json.load(fh))
