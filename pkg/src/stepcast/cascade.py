"""Causal runtime: nested running sums driven sample by sample.

The state is one accumulator per basis power.  Consuming x(t) updates
accumulators in ascending order, each one adding the already-updated
accumulator below it:

    s_1 += x(t);  s_k += s_{k-1}  (k = 2..d)

after which s_k holds the k-fold running sum of x up to t, and the
output is y(t) = a_0*x(t) + sum_k a_k*s_k.  Initial accumulator values
(eta) stand in for the unobserved past; with the exact values the run
reproduces the frequency-domain oracle on gap signals.

Accumulation is plain float64; the update is isolated in _advance so a
compensated scheme could be swapped in without touching callers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectral import TransferPoly
from .signals import PeriodicSignal

__all__ = ["CascadeState", "init_state", "step", "run_causal", "run_truncated"]


@dataclass
class CascadeState:
    """Mutable accumulator bank; single-owner, advanced by step()."""

    s: np.ndarray
    t_start: int
    t_next: int


def init_state(eta, t1: int) -> CascadeState:
    """State positioned to consume x(t1), with accumulators preset to eta."""
    s = np.atleast_1d(np.asarray(eta))
    if s.ndim != 1:
        raise ValueError("eta must be a vector")
    if not np.all(np.isfinite(s)):
        raise ValueError("eta must be finite")
    return CascadeState(s=s.copy(), t_start=t1, t_next=t1)


def _advance(s: np.ndarray, x_t) -> None:
    # ascending order: each accumulator sees the already-updated one below
    if s.size:
        s[0] += x_t
        for k in range(1, s.size):
            s[k] += s[k - 1]


def step(state: CascadeState, x_t, p: TransferPoly):
    """Consume one sample; returns the output and the advanced state."""
    if p.degree != state.s.size:
        raise ValueError("polynomial degree does not match state size")
    _advance(state.s, x_t)
    y = p.coeffs[0] * x_t
    if state.s.size:
        y = y + np.dot(p.coeffs[1:], state.s)
    state.t_next += 1
    return y, state


def run_causal(x, p: TransferPoly, eta, t1: int = 0) -> np.ndarray:
    """Fold step() over samples x(t1), x(t1+1), ...; returns outputs."""
    x = np.asarray(x)
    dtype = np.result_type(x.dtype, np.asarray(eta).dtype if np.size(eta) else float, float)
    state = init_state(np.asarray(eta, dtype=dtype), t1)
    out = np.empty(x.size, dtype=dtype)
    for i, xt in enumerate(x):
        out[i], _ = step(state, xt, p)
    return out


def run_truncated(sig: PeriodicSignal, p: TransferPoly, M: int, t2: int) -> np.ndarray:
    """Zero-state run over the unrolled periodic samples t = -M..t2.

    This is the naive 'start from silence' alternative to estimating
    eta.  Its error against the oracle does not vanish as M grows (the
    cascade sums do not converge for periodic inputs), which is the
    motivation for fitting eta instead; see the fitting module.
    """
    if M < 0 or t2 < -M:
        raise ValueError("need M >= 0 and t2 >= -M")
    t = np.arange(-M, t2 + 1)
    x = sig.samples[t % len(sig)]
    return run_causal(x, p, np.zeros(p.degree), t1=-M)
