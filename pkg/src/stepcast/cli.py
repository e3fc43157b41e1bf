"""Command line driver: approximation sweeps, signal generation,
prediction and filtering experiments.

Outputs are plain CSV/JSON so external tools can plot them.  Every
emitted number is a pure function of the flags (plus the seed), so
rerunning a command reproduces its output files byte for byte.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .approx import (
    HighPassTarget,
    PredictorTarget,
    exponential_predictor,
    make_grid,
    predictor_power,
    select_nu_and_d,
    solve_ls,
    target_value,
)
from .fitting import (
    FitResult,
    filter_modulated,
    filter_with_shared_eta,
    fit_eta,
    fit_eta_modulated,
    predict_ahead,
    predict_modulated,
)
from .signals import exact_eta, gen_gap_signal, make_left_sided, modulate, verify_gap, write_signal
from .spectral import eval_transfer, save_poly


def parse_angle(text: str) -> float:
    """Accept radians as a float or as a symbolic multiple of pi.

    "pi/2", "2pi/3", "-pi/4", "pi" and plain decimals all work.
    """
    s = text.strip().lower().replace(" ", "")
    sign = 1.0
    if s.startswith("-"):
        sign = -1.0
        s = s[1:]
    if "pi" in s:
        head, _, tail = s.partition("pi")
        num = float(head) if head else 1.0
        den = 1.0
        if tail:
            if not tail.startswith("/"):
                raise ValueError(f"cannot parse angle {text!r}")
            den = float(tail[1:])
        return sign * num * math.pi / den
    return sign * float(s)


def _dump_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _write_csv(path: Path, header: str, rows) -> None:
    lines = [header]
    for row in rows:
        lines.append(",".join(repr(v) if isinstance(v, float) else str(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_approx(args) -> int:
    gap = parse_angle(args.gap)
    if args.target == "predict":
        target = PredictorTarget(args.T, gap)
    else:
        if args.cutoff is None:
            raise ValueError("highpass target needs --cutoff")
        target = HighPassTarget(parse_angle(args.cutoff), gap)
    grid = make_grid(gap, args.grid)
    out = _outdir(args)
    rows = []
    for d in range(args.dmax + 1):
        p, rep = solve_ls(target, d, grid)
        save_poly(p, out / f"coeffs_d{d}.json", target={"kind": args.target})
        rows.append((d, rep.l2_error, rep.sup_error, rep.condition_number))
    _write_csv(out / "sweep.csv", "d,l2Error,supError,conditionNumber", rows)
    if args.curve:
        p, _ = solve_ls(target, args.dmax, grid)
        err = np.abs(target_value(target, grid.points) - eval_transfer(p, grid.points))
        _write_csv(
            out / "error_curve.csv",
            "omega,absError",
            [(float(w), float(e)) for w, e in zip(grid.points, err)],
        )
    return 0


def cmd_gen(args) -> int:
    gap = parse_angle(args.gap)
    out = _outdir(args)
    sig = gen_gap_signal(args.N, gap, seed=args.seed, real=not getattr(args, "complex"))
    if args.left_sided is not None:
        tau = 0 if args.left_sided == "even" else -1
        sig = make_left_sided(tau, sig)
    path = out / "signal.csv"
    write_signal(sig, path)
    sidecar = json.loads(path.with_suffix(".json").read_text())
    sidecar["gapResidual"] = verify_gap(sig, gap)
    _dump_json(path.with_suffix(".json"), sidecar)
    return 0


def _trailing_window(x, t1: int, theta: int, d: int, T: int, dbar: int):
    # trailing window keeps the binomial design columns from blowing up
    lo = max(t1, theta - (4 * d + T) + 1)
    w = x[lo - t1 : theta - t1 + 1]
    adm = np.arange(lo, theta - T + 1)
    if adm.size > 2 * dbar:
        sample = adm[-2 * dbar :][::2][-dbar:]
    else:
        sample = adm[-dbar:]
    return w, lo, sample


def cmd_predict(args) -> int:
    gap = parse_angle(args.gap)
    theta_mod = parse_angle(args.theta_mod) if args.theta_mod else 0.0
    out = _outdir(args)
    sig = gen_gap_signal(args.N, gap, seed=args.seed)
    if theta_mod:
        sig = modulate(sig, theta_mod)
    grid = make_grid(gap, args.grid)
    p, rep = solve_ls(PredictorTarget(args.T, gap), args.d, grid)
    bound = rep.l2_error * sig.norm()
    x = sig.samples
    # all admissible rows of the trailing window; overdetermined fits
    # average out the per-row feasibility error
    dbar = args.dbar if args.dbar else 4 * args.d
    t1 = args.t1
    rows = []
    errs = []
    start = t1 + max(dbar + args.T - 1, args.d)
    for theta in range(start, args.N - args.T):
        w, lo, sample = _trailing_window(x, t1, theta, args.d, args.T, dbar)
        if theta_mod:
            fit = fit_eta_modulated(w, lo, theta_mod, p, args.T, sample_times=sample)
            est = predict_modulated(w, lo, theta_mod, p, args.T, fit)[-1]
        else:
            fit = fit_eta(w, lo, p, args.T, sample_times=sample)
            est = predict_ahead(w, lo, p, args.T, fit)
        truth = x[(theta + args.T) % args.N]
        err = abs(truth - est)
        errs.append(err)
        rows.append((theta + args.T, complex(truth).real, complex(est).real, float(err)))
    _write_csv(out / "predict.csv", "t,truth,estimate,error", rows)
    summary = {
        "N": args.N,
        "T": args.T,
        "degree": args.d,
        "maxError": float(max(errs)),
        "bound": float(bound),
        "l2Error": rep.l2_error,
        "norm": sig.norm(),
        "seed": args.seed,
    }
    _dump_json(out / "summary.json", summary)
    return 0


def cmd_filter(args) -> int:
    gap = parse_angle(args.gap)
    cutoff = parse_angle(args.cutoff)
    if gap > cutoff:
        raise ValueError("signal gap must not exceed the filter cutoff")
    theta_mod = parse_angle(args.theta_mod) if args.theta_mod else 0.0
    out = _outdir(args)
    sig = gen_gap_signal(args.N, gap, seed=args.seed)
    if theta_mod:
        sig = modulate(sig, theta_mod)
    grid = make_grid(gap, args.grid)
    p_filt, rep_f = solve_ls(HighPassTarget(cutoff, gap), args.d, grid)
    p_pred, _ = solve_ls(PredictorTarget(1, gap), args.d, grid)
    x = sig.samples
    t1 = args.t1
    if args.eta == "exact":
        base = modulate(sig, -theta_mod) if theta_mod else sig
        eta = exact_eta(base, args.d, t1)
        fit = FitResult(np.asarray(eta), 0.0, 1.0, 0.0)
    else:
        if theta_mod:
            fit = fit_eta_modulated(x, t1, theta_mod, p_pred, 1)
        else:
            fit = fit_eta(x, t1, p_pred, 1)
    if theta_mod:
        y = filter_modulated(x, t1, theta_mod, p_pred, 1, p_filt, fit)
    else:
        y = filter_with_shared_eta(x, t1, p_pred, 1, p_filt, fit)
    n = args.N
    X = sig.spectrum()
    Y = np.fft.fft(np.asarray(y, dtype=complex))
    om = sig.bin_freqs()
    center = theta_mod if theta_mod else 0.0
    rel = np.mod(om - center + np.pi, 2 * np.pi) - np.pi
    ideal = (np.abs(rel) >= cutoff).astype(float)
    scale = 1.0 / math.sqrt(n)
    spec_rows = [
        (float(w), float(abs(Xj) * scale), float(abs(Yj) * scale), float(i))
        for w, Xj, Yj, i in zip(om, X, Y, ideal)
    ]
    _write_csv(out / "spectrum.csv", "omega,inputMag,outputMag,idealMag", spec_rows)
    inband = np.abs(rel) < cutoff
    measured = float(np.abs(Y[inband]).max() * scale) if inband.any() else 0.0
    summary = {
        "N": n,
        "cutoff": cutoff,
        "degree": args.d,
        "inBandMax": measured,
        "bound": rep_f.sup_error * sig.norm() + 1e-8,
        "epsFilt": rep_f.sup_error,
        "norm": sig.norm(),
        "seed": args.seed,
        "conditionNumber": fit.condition_number,
    }
    _dump_json(out / "summary.json", summary)
    return 0


def cmd_expcoeffs(args) -> int:
    gap = parse_angle(args.gap)
    out = _outdir(args)
    if args.nu is not None:
        if args.d is None:
            raise ValueError("--nu needs an explicit --d")
        nu, d = args.nu, args.d
    else:
        nu, d = select_nu_and_d(args.eps, gap)
    p = exponential_predictor(nu, d)
    if args.T > 1:
        p = predictor_power(p, args.T)
    grid = make_grid(gap, args.grid)
    err = np.abs(eval_transfer(p, grid.points) - np.exp(1j * grid.points * args.T))
    save_poly(p, out / "coeffs.json", target={"kind": "predict", "T": args.T})
    # powering T factors inflates the budget to T(1+eps)^(T-1) eps
    budget = args.eps * args.T * (1.0 + args.eps) ** (args.T - 1)
    summary = {
        "nu": float(nu),
        "degree": int(d),
        "T": args.T,
        "supError": float(err.max()),
        "budget": budget,
    }
    _dump_json(out / "summary.json", summary)
    print(f"sup error {err.max():.6e} vs budget {budget:.6e}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stepcast")
    sub = ap.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("approx", help="least-squares transfer sweep over degrees")
    pa.add_argument("--target", choices=("predict", "highpass"), default="predict")
    pa.add_argument("--T", type=int, default=1)
    pa.add_argument("--gap", required=True, help='half-width, radians or "pi/2"')
    pa.add_argument("--cutoff", default=None)
    pa.add_argument("--dmax", type=int, default=20)
    pa.add_argument("--grid", type=int, default=1024)
    pa.add_argument("--curve", action="store_true", help="also write the error curve at dmax")
    pa.add_argument("--out", default="out_approx")
    pa.set_defaults(func=cmd_approx)

    pg = sub.add_parser("gen", help="generate a periodic signal with a spectral gap")
    pg.add_argument("--N", type=int, default=64)
    pg.add_argument("--gap", required=True)
    pg.add_argument("--seed", type=int, default=0)
    pg.add_argument("--left-sided", choices=("even", "odd"), default=None)
    pg.add_argument("--complex", action="store_true")
    pg.add_argument("--out", default="out_gen")
    pg.set_defaults(func=cmd_gen)

    pp = sub.add_parser("predict", help="rolling causal prediction experiment")
    pp.add_argument("--N", type=int, default=64)
    pp.add_argument("--gap", default="pi/2")
    pp.add_argument("--seed", type=int, default=0)
    pp.add_argument("--T", type=int, default=1)
    pp.add_argument("--d", type=int, default=6)
    pp.add_argument("--dbar", type=int, default=None)
    pp.add_argument("--t1", type=int, default=0)
    pp.add_argument("--grid", type=int, default=1024)
    pp.add_argument("--theta-mod", default=None)
    pp.add_argument("--out", default="out_predict")
    pp.set_defaults(func=cmd_predict)

    pf = sub.add_parser("filter", help="causal high-pass filtering experiment")
    pf.add_argument("--N", type=int, default=64)
    pf.add_argument("--gap", default="0.6", help="signal gap half-width")
    pf.add_argument("--cutoff", default="1.0", help="suppression cutoff")
    pf.add_argument("--seed", type=int, default=0)
    pf.add_argument("--d", type=int, default=8)
    pf.add_argument("--t1", type=int, default=0)
    pf.add_argument("--grid", type=int, default=1024)
    pf.add_argument("--eta", choices=("fit", "exact"), default="exact")
    pf.add_argument("--theta-mod", default=None)
    pf.add_argument("--out", default="out_filter")
    pf.set_defaults(func=cmd_filter)

    pe = sub.add_parser("expcoeffs", help="closed-form exponential predictor coefficients")
    pe.add_argument("--eps", type=float, default=0.1)
    pe.add_argument("--gap", default="pi/2")
    pe.add_argument("--T", type=int, default=1)
    pe.add_argument("--nu", type=float, default=None)
    pe.add_argument("--d", type=int, default=None)
    pe.add_argument("--grid", type=int, default=1024)
    pe.add_argument("--out", default="out_exp")
    pe.set_defaults(func=cmd_expcoeffs)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
