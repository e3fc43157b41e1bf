"""Periodic desk-scale test signals and exact frequency-domain oracles.

A signal is one period x(0..N-1) of an N-periodic sequence.  The DFT
convention is numpy's:

    X_j = sum_t x(t) * exp(-i*omega_j*t),   x(t) = (1/N) sum_j X_j e^{i*omega_j*t}

with bin frequencies omega_j = 2*pi*j/N wrapped into (-pi, pi]; for
even N the +/-pi bin is the single bin at +pi.  Parseval then reads
||x||_2^2 = (1/N) * sum_j |X_j|^2.

A "gap" signal has X_j = 0 on all bins inside an open band around its
gap center (DC always included for a centered gap), which is what
makes running-sum cascades well defined on it: every per-bin
multiplier u(omega_j)^k is finite on the surviving bins.

All oracles here are diagonal in frequency and serve as ground truth
for the causal time-domain implementations.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .spectral import SpectrumGap, TransferPoly, eval_transfer, u_of_omega

__all__ = [
    "PeriodicSignal",
    "bin_frequencies",
    "gen_gap_signal",
    "verify_gap",
    "ideal_shift_oracle",
    "ideal_filter_oracle",
    "cascade_oracle",
    "apply_freq_oracle",
    "exact_eta",
    "make_left_sided",
    "left_sided_residual",
    "modulate",
    "write_signal",
    "read_signal",
]

# Relative DC-bin tolerance below which a signal counts as DC-free.
DC_TOL = 1e-9


@dataclass(frozen=True)
class PeriodicSignal:
    """One period of samples, plus optional gap tag and generator seed."""

    samples: np.ndarray
    gap: SpectrumGap | None = None
    seed: int | None = None

    def __post_init__(self):
        s = np.array(self.samples, copy=True)
        if s.ndim != 1 or s.size == 0:
            raise ValueError("samples must be a non-empty 1-D array")
        if not np.iscomplexobj(s):
            s = s.astype(float)
        if not np.all(np.isfinite(s)):
            raise ValueError("samples must be finite")
        s.flags.writeable = False
        object.__setattr__(self, "samples", s)

    def __len__(self) -> int:
        return self.samples.size

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.samples)

    def spectrum(self) -> np.ndarray:
        return np.fft.fft(self.samples)

    def norm(self) -> float:
        return float(np.linalg.norm(self.samples))

    def bin_freqs(self) -> np.ndarray:
        return bin_frequencies(len(self))


def bin_frequencies(n: int) -> np.ndarray:
    """DFT bin frequencies wrapped into (-pi, pi]; +pi kept positive."""
    if n < 1:
        raise ValueError("need at least one sample")
    f = 2.0 * np.pi * np.fft.fftfreq(n)
    f[f == -np.pi] = np.pi
    return f


def _wrap(omega: np.ndarray) -> np.ndarray:
    """Wrap angles into (-pi, pi]."""
    w = np.mod(np.asarray(omega, dtype=float) + np.pi, 2.0 * np.pi) - np.pi
    if np.ndim(w) == 0:
        return w if w != -np.pi else np.float64(np.pi)
    w[w == -np.pi] = np.pi
    return w


def _gap_mask(n: int, half_width: float, center: float = 0.0) -> np.ndarray:
    """True on bins strictly inside the open gap band."""
    return np.abs(_wrap(bin_frequencies(n) - center)) < half_width


def _cast_like(y: np.ndarray, template: PeriodicSignal) -> np.ndarray:
    return y.real if template.is_real else y


def gen_gap_signal(
    n: int, gap_half_width: float, seed: int, real: bool = True
) -> PeriodicSignal:
    """Draw a unit-norm signal with an exact spectral gap around 0.

    Bin values are standard normal draws (real and imaginary parts),
    zeroed inside the gap, conjugate-symmetrized when a real signal is
    requested, inverse transformed, mean-cleaned and normalized to unit
    l2 norm over the period.
    """
    gap = SpectrumGap(gap_half_width, 0.0)
    rng = np.random.default_rng(seed)
    X = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    keep = ~_gap_mask(n, gap_half_width)
    if not np.any(keep):
        raise ValueError("no DFT bins survive the requested gap")
    X[~keep] = 0.0
    if real:
        X = 0.5 * (X + np.conj(X[(-np.arange(n)) % n]))
    x = np.fft.ifft(X)
    if real:
        x = x.real
    # the gap contains DC, so the mean must vanish; scrub the rounding
    # residue twice to push it to the summation floor
    x = x - x.mean()
    x = x - x.mean()
    x = x / np.linalg.norm(x)
    return PeriodicSignal(x, gap=gap, seed=seed)


def verify_gap(sig: PeriodicSignal, half_width: float, center: float = 0.0) -> float:
    """Largest in-gap bin magnitude relative to the spectrum norm.

    Returns 0 when there are no in-gap bins or the signal is zero.
    """
    X = sig.spectrum()
    mask = _gap_mask(len(sig), half_width, center)
    total = float(np.linalg.norm(X))
    if not np.any(mask) or total == 0.0:
        return 0.0
    return float(np.max(np.abs(X[mask])) / total)


def ideal_shift_oracle(sig: PeriodicSignal, T: int) -> PeriodicSignal:
    """Per-bin multiply by e^{i*omega_j*T}: the circular left shift."""
    if T != int(T):
        raise ValueError("shift must be an integer number of samples")
    X = sig.spectrum() * np.exp(1j * bin_frequencies(len(sig)) * int(T))
    return PeriodicSignal(_cast_like(np.fft.ifft(X), sig), gap=sig.gap, seed=sig.seed)


def ideal_filter_oracle(sig: PeriodicSignal, cutoff: float) -> PeriodicSignal:
    """Zero every bin with |omega_j| < cutoff (ideal high pass)."""
    if not 0.0 < cutoff <= math.pi:
        raise ValueError("cutoff must lie in (0, pi]")
    X = sig.spectrum()
    X[_gap_mask(len(sig), cutoff)] = 0.0
    return PeriodicSignal(_cast_like(np.fft.ifft(X), sig), gap=sig.gap, seed=sig.seed)


def _require_dc_free(X: np.ndarray) -> None:
    if np.abs(X[0]) > DC_TOL * np.linalg.norm(X):
        raise ValueError("signal has a nonzero DC bin; cascade pole at omega=0")


def cascade_oracle(sig: PeriodicSignal, k: int) -> PeriodicSignal:
    """Per-bin multiply by u(omega_j)^k: k nested running sums.

    Requires a DC-free signal; the DC multiplier is a pole and the bin
    is pinned to zero.
    """
    if k < 0:
        raise ValueError("cascade depth must be non-negative")
    X = sig.spectrum()
    _require_dc_free(X)
    n = len(sig)
    omega = bin_frequencies(n)
    H = np.zeros(n, dtype=complex)
    H[1:] = u_of_omega(omega[1:]) ** k
    Y = X * H
    Y[0] = 0.0
    return PeriodicSignal(_cast_like(np.fft.ifft(Y), sig), gap=sig.gap, seed=sig.seed)


def apply_freq_oracle(
    sig: PeriodicSignal, p: TransferPoly, half_width: float, center: float = 0.0
) -> PeriodicSignal:
    """Ideal application of psi restricted to the surviving bins.

    Bins inside the gap are forced to zero rather than multiplied:
    on the signal class the two operators agree, and the masked form
    is the numerically meaningful one since psi is unconstrained (and
    typically enormous) inside the gap.
    """
    X = sig.spectrum()
    mask = _gap_mask(len(sig), half_width, center)
    omega = bin_frequencies(len(sig))
    Y = np.zeros(len(sig), dtype=complex)
    Y[~mask] = eval_transfer(p, omega[~mask]) * X[~mask]
    return PeriodicSignal(_cast_like(np.fft.ifft(Y), sig), gap=sig.gap, seed=sig.seed)


def exact_eta(sig: PeriodicSignal, d: int, t1: int) -> np.ndarray:
    """Cascade states eta_k = (k running sums of x)(t1 - 1), k = 1..d.

    These are the initial accumulator values that make the causal
    cascade started at t1 agree with the frequency-domain oracle.
    """
    if d < 0:
        raise ValueError("cascade depth must be non-negative")
    n = len(sig)
    idx = (t1 - 1) % n
    eta = np.array([cascade_oracle(sig, k).samples[idx] for k in range(1, d + 1)])
    return eta if eta.size else np.zeros(0, dtype=sig.samples.dtype)


def make_left_sided(tau: int, base: PeriodicSignal) -> PeriodicSignal:
    """Even (tau = 0) or odd (tau = -1) part of a real periodic signal.

    The even part satisfies the cosine moment condition at every in-gap
    frequency and the odd part the sine condition: exactly the two
    boundary cases in which one-sided data pins down a gap signal.
    Either part keeps the original gap, since its spectrum is the real
    (resp. imaginary) part of the original one.
    """
    if tau not in (0, -1):
        raise ValueError("tau must be 0 (even part) or -1 (odd part)")
    if not base.is_real:
        raise ValueError("left-sided construction needs a real base signal")
    x = base.samples
    rev = x[(-np.arange(len(base))) % len(base)]
    part = 0.5 * (x + rev) if tau == 0 else 0.5 * (x - rev)
    return PeriodicSignal(part, gap=base.gap, seed=base.seed)


def left_sided_residual(sig: PeriodicSignal, tau: int, omegas) -> np.ndarray:
    """Discretized one-sided moment sums at the given frequencies.

    tau = 0:   | x(0) + 2 * sum_{t<0} cos(omega*t) x(t) |
    tau = -1:  | sum_{t<0} sin(omega*t) x(t) |

    with t running over one period of past samples -floor(N/2)..-1.
    For even N the sample at -N/2 coincides with its own mirror modulo
    the period, so it enters the even-part sum once, not twice; at
    bin-aligned omega the sums then equal Re/Im of the DFT bin.
    """
    if tau not in (0, -1):
        raise ValueError("tau must be 0 or -1")
    n = len(sig)
    x = sig.samples
    om = np.atleast_1d(np.asarray(omegas, dtype=float))
    tpast = -np.arange(1, n // 2 + 1)
    past = x[tpast % n]
    w = np.ones(tpast.size)
    if tau == 0 and n % 2 == 0:
        w[-1] = 0.5  # self-paired sample at -N/2
    phase = om[:, None] * tpast[None, :]
    if tau == 0:
        vals = x[0] + 2.0 * np.cos(phase) @ (w * past)
    else:
        vals = np.sin(phase) @ past
    return np.abs(vals)


def modulate(sig: PeriodicSignal, theta: float) -> PeriodicSignal:
    """Multiply samples by e^{-i*theta*t}, shifting spectrum by -theta.

    theta must be bin-aligned so the shifted spectrum still lives on
    DFT bins.  theta = pi on a real signal is the exact sign flip
    (-1)^t and stays real; other angles produce complex samples.
    A tagged gap is re-centered accordingly.
    """
    n = len(sig)
    j0 = theta * n / (2.0 * math.pi)
    if abs(j0 - round(j0)) > 1e-9:
        raise ValueError("modulation angle must be a multiple of 2*pi/N")
    j0 = int(round(j0)) % n
    t = np.arange(n)
    if sig.is_real and (2 * j0) % n == 0:
        factor = np.where(t * j0 % n == 0, 1.0, -1.0) if j0 else np.ones(n)
        y = sig.samples * factor
    else:
        y = sig.samples * np.exp(-1j * theta * t)
    gap = None
    if sig.gap is not None:
        gap = SpectrumGap(sig.gap.half_width, float(_wrap(sig.gap.center - theta)))
    return PeriodicSignal(y, gap=gap, seed=sig.seed)


def write_signal(sig: PeriodicSignal, path) -> None:
    """Write samples as CSV (t, re, im) plus a JSON sidecar."""
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "re", "im"])
        z = sig.samples.astype(complex)
        for t in range(len(sig)):
            writer.writerow([t, repr(float(z[t].real)), repr(float(z[t].imag))])
    meta = {
        "N": len(sig),
        "gap": None
        if sig.gap is None
        else {"halfWidth": sig.gap.half_width, "center": sig.gap.center},
        "seed": sig.seed,
    }
    with open(path.with_suffix(".json"), "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_signal(path) -> PeriodicSignal:
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["t", "re", "im"]:
            raise ValueError("signal CSV must have header t,re,im")
        rows = [(int(r[0]), float(r[1]), float(r[2])) for r in reader]
    rows.sort(key=lambda r: r[0])
    z = np.array([re + 1j * im for _, re, im in rows])
    if np.all(z.imag == 0.0):
        z = z.real
    gap = None
    seed = None
    sidecar = path.with_suffix(".json")
    if sidecar.exists():
        with open(sidecar) as fh:
            meta = json.load(fh)
        if meta.get("N") != len(rows):
            raise ValueError("sidecar N does not match CSV row count")
        if meta.get("gap") is not None:
            gap = SpectrumGap(meta["gap"]["halfWidth"], meta["gap"].get("center", 0.0))
        seed = meta.get("seed")
    return PeriodicSignal(z, gap=gap, seed=seed)
