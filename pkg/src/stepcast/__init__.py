"""Causal prediction and near-ideal filtering of gap-spectrum signals.

Sequences whose spectrum vanishes on a band around zero admit causal
T-step predictors and causal high-pass filters with arbitrarily small
uniform error on the surviving band.  Both are realized here as
polynomials in the running-sum transfer function u = 1/(1 - e^{-i w}):
approximation lives in `approx`, the sample-by-sample runtime in
`cascade`, frequency-domain ground truth and test signals in
`signals`, and recovery of unknown accumulator states from data in
`fitting`.
"""

from .spectral import (
    FrequencyGrid,
    SpectrumGap,
    TransferPoly,
    eval_transfer,
    expand_one_minus_u_power,
    poly_from_dict,
    poly_multiply,
    poly_pad,
    poly_to_dict,
    u_of_omega,
)
from .approx import (
    ApproxReport,
    HighPassTarget,
    PredictorTarget,
    exponential_predictor,
    exponential_predictor_limit,
    make_grid,
    predictor_power,
    select_nu_and_d,
    solve_ls,
    solve_ls_real_even,
    target_value,
)
from .signals import (
    PeriodicSignal,
    apply_freq_oracle,
    bin_frequencies,
    cascade_oracle,
    exact_eta,
    gen_gap_signal,
    ideal_filter_oracle,
    ideal_shift_oracle,
    left_sided_residual,
    make_left_sided,
    modulate,
    read_signal,
    verify_gap,
    write_signal,
)
from .cascade import CascadeState, init_state, run_causal, run_truncated, step
from .fitting import (
    FitResult,
    RegressionRow,
    build_rows,
    eta_deviation_response,
    filter_modulated,
    filter_with_shared_eta,
    fit_eta,
    fit_eta_modulated,
    fit_from_dict,
    fit_to_dict,
    predict_ahead,
    predict_modulated,
    predict_series,
    predict_value,
)

__version__ = "0.1.0"
