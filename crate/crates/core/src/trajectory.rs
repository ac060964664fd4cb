//! Closed-form trajectories, error envelopes and tail bounds.
//!
//! Time is `t = i / s` with `s = p n^2`. The open-pair density follows
//! `q(t) = exp(-2 e_H / aut(H) * (2t)^{e_H - 1})` and an extension variable
//! with `e_J` edge constraints and `e_Γ - e_J` open constraints follows
//! `x(t) = (2t)^{e_J} q(t)^{e_Γ - e_J}` in units of its scaling.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::exponent::ScalingExponent;
use crate::scaling::ForbiddenGraph;

/// The four tuning constants. Their intended ordering is
/// `0 < mu << epsilon << 1/w << 1/v << 1/e_H`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Constants {
    pub v: f64,
    pub w: f64,
    pub epsilon: f64,
    pub mu: f64,
}

impl Constants {
    pub const DEFAULT_MU: f64 = 0.1;
    pub const DEFAULT_EPSILON: f64 = 0.01;
    pub const DEFAULT_W: f64 = 10.0;

    /// Desk-scale defaults; `v` is one more than the largest tracked pattern size.
    pub fn defaults(v: f64) -> Self {
        Constants {
            v,
            w: Self::DEFAULT_W,
            epsilon: Self::DEFAULT_EPSILON,
            mu: Self::DEFAULT_MU,
        }
    }

    /// Whether the strict ordering holds at least numerically.
    pub fn respects_ordering(&self, e_h: usize) -> bool {
        0.0 < self.mu && self.mu < self.epsilon && self.epsilon < 1.0 / self.w && 1.0 / self.w < 1.0 / self.v
            && 1.0 / self.v < 1.0 / e_h as f64
    }
}

/// Constants together with the `H`- and `n`-derived quantities.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryParams {
    pub e_h: usize,
    pub aut_h: u64,
    /// `4 e_H (e_H - 1) / aut(H)`.
    pub a_h: Ratio<i64>,
    pub rho: ScalingExponent,
    pub constants: Constants,
    pub n: usize,
    /// `s = p n^2`.
    pub s: f64,
    /// `s_e = n^{1/(2 e_H) - epsilon}`.
    pub s_e: f64,
    /// `mu (ln n)^{1/(e_H - 1)}`.
    pub t_max: f64,
    /// `round(t_max * s)`.
    pub m: u64,
}

impl TrajectoryParams {
    pub fn new(h: &ForbiddenGraph, n: usize, constants: Constants) -> Self {
        let e_h = h.edge_count();
        let aut_h = h.aut_count();
        let a_h = Ratio::new(4 * e_h as i64 * (e_h as i64 - 1), aut_h as i64);
        let nf = n as f64;
        let s = h.time_scale(n);
        let s_e = nf.powf(1.0 / (2.0 * e_h as f64) - constants.epsilon);
        let t_max = constants.mu * nf.ln().powf(1.0 / (e_h as f64 - 1.0));
        TrajectoryParams {
            e_h,
            aut_h,
            a_h,
            rho: h.rho(),
            constants,
            n,
            s,
            s_e,
            t_max,
            m: (t_max * s).round() as u64,
        }
    }

    pub fn a_h_f64(&self) -> f64 {
        *self.a_h.numer() as f64 / *self.a_h.denom() as f64
    }

    /// Numeric `p = n^{-rho}`.
    pub fn p(&self) -> f64 {
        (-self.rho).eval(self.n as f64)
    }

    /// `n^{exp}` at this `n`.
    pub fn scale(&self, exp: ScalingExponent) -> f64 {
        exp.eval(self.n as f64)
    }

    pub fn q(&self, t: f64) -> f64 {
        q_of_t(self, t)
    }

    pub fn c(&self, t: f64) -> f64 {
        c_of_t(self, t)
    }
}

/// `q(t) = exp(-2 e_H aut(H)^{-1} (2t)^{e_H - 1})`.
pub fn q_of_t(params: &TrajectoryParams, t: f64) -> f64 {
    let e = params.e_h as f64;
    (-2.0 * e / params.aut_h as f64 * (2.0 * t).powf(e - 1.0)).exp()
}

/// `c(t) = a_H (2t)^{e_H - 2} q(t)`, so that `q' = -c`.
pub fn c_of_t(params: &TrajectoryParams, t: f64) -> f64 {
    params.a_h_f64() * (2.0 * t).powi(params.e_h as i32 - 2) * q_of_t(params, t)
}

/// `x(t) = (2t)^{e_J} q(t)^{e_Γ - e_J}`.
pub fn x_of_t(params: &TrajectoryParams, e_gamma: usize, e_j: usize, t: f64) -> f64 {
    assert!(e_j <= e_gamma, "J must be a subgraph of Γ");
    (2.0 * t).powi(e_j as i32) * q_of_t(params, t).powi((e_gamma - e_j) as i32)
}

/// `P(t) = W (t^{e_H - 1} + t)`.
pub fn p_of_t(params: &TrajectoryParams, t: f64) -> f64 {
    params.constants.w * (t.powi(params.e_h as i32 - 1) + t)
}

/// `e(t) = exp(P(t)) - 1`.
pub fn e_of_t(params: &TrajectoryParams, t: f64) -> f64 {
    p_of_t(params, t).exp_m1()
}

const GAMMA_CEILING: f64 = 0.499;

/// Smooth increasing `gamma` with `gamma(0) = 0` and `gamma < 1/2`.
///
/// Starts on the line `40 V e^{40 V} t`, which is followed until
/// `min(40V/W, c/(2k))` (`k` the slope, `c` = 0.499), then continues C¹ along
/// an exponential approach to `c`.
pub fn gamma_of_t(params: &TrajectoryParams, t: f64) -> f64 {
    let v = params.constants.v;
    let w = params.constants.w;
    let k = (40.0 * v * (40.0 * v).exp()).min(f64::MAX);
    let t1 = (40.0 * v / w).min(GAMMA_CEILING / (2.0 * k));
    if t <= t1 {
        return k * t;
    }
    let g1 = k * t1;
    let room = GAMMA_CEILING - g1;
    g1 + room * (-(k * (t - t1) / room)).exp_m1().abs()
}

/// `theta(t) = 1/2 + gamma(t)`.
pub fn theta_of_t(params: &TrajectoryParams, t: f64) -> f64 {
    0.5 + gamma_of_t(params, t)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnvelopeRow {
    pub t: f64,
    pub q: f64,
    pub e_t: f64,
    pub theta_t: f64,
    pub gamma_t: f64,
}

pub fn envelope_row(params: &TrajectoryParams, t: f64) -> EnvelopeRow {
    EnvelopeRow {
        t,
        q: q_of_t(params, t),
        e_t: e_of_t(params, t),
        theta_t: theta_of_t(params, t),
        gamma_t: gamma_of_t(params, t),
    }
}

/// `(1 ∓ e(t)/s_e)(x ∓ θ(t)/s_e) n^{scaling_exp}`. Each factor of the lower end
/// is clamped at 0, which keeps `lo <= x n^{scaling_exp}` once `e(t) > s_e`.
pub fn envelope(params: &TrajectoryParams, t: f64, scaling_exp: ScalingExponent, x_t: f64) -> (f64, f64) {
    let scale = params.scale(scaling_exp);
    let rel = e_of_t(params, t) / params.s_e;
    let abs = theta_of_t(params, t) / params.s_e;
    let lo = (1.0 - rel).max(0.0) * (x_t - abs).max(0.0) * scale;
    let hi = (1.0 + rel) * (x_t + abs) * scale;
    (lo, hi)
}

/// Residual of `q x' = 2 Σ_{e∈J} x_{J∖e} - (e_Γ - e_J) c x` with `x'` by central
/// difference of width `step_h`.
pub fn ode_residual(params: &TrajectoryParams, e_gamma: usize, e_j: usize, t: f64, step_h: f64) -> f64 {
    let x = |s: f64| x_of_t(params, e_gamma, e_j, s);
    let dx = (x(t + step_h) - x(t - step_h)) / (2.0 * step_h);
    let source = if e_j == 0 {
        0.0
    } else {
        2.0 * e_j as f64 * x_of_t(params, e_gamma, e_j - 1, t)
    };
    let sink = (e_gamma - e_j) as f64 * c_of_t(params, t) * x(t);
    (q_of_t(params, t) * dx - source + sink).abs()
}

/// Which Azuma-type bound is being evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailVariant {
    /// Lower tail of a bounded submartingale.
    Submartingale,
    /// Upper tail of a bounded supermartingale; additionally needs `a <= eta m / 10`.
    Supermartingale,
}

/// `exp(-a^2 / (3 eta m N))` for an `(eta, N)`-bounded sequence over `m` steps.
pub fn martingale_tail(eta: f64, big_n: f64, m: u64, a: f64, variant: TailVariant) -> Result<f64> {
    if !(eta > 0.0 && big_n > 0.0) {
        return Err(Error::Precondition("eta > 0 and N > 0 required".into()));
    }
    if eta > big_n / 10.0 {
        return Err(Error::Precondition(format!("eta <= N/10 violated: eta = {eta}, N = {big_n}")));
    }
    if m < 1 {
        return Err(Error::Precondition("m >= 1 violated".into()));
    }
    if a.is_nan() || a <= 0.0 {
        return Err(Error::Precondition(format!("a > 0 violated: a = {a}")));
    }
    if variant == TailVariant::Supermartingale && a > eta * m as f64 / 10.0 {
        return Err(Error::Precondition(format!(
            "a <= eta m / 10 violated: a = {a}, eta m / 10 = {}",
            eta * m as f64 / 10.0
        )));
    }
    Ok((-(a * a) / (3.0 * eta * m as f64 * big_n)).exp())
}

/// `alpha = 3 mu^{-1} (ln n)^{1 - 1/(e_H - 1)} p^{-1}`, the target independent-set size.
pub fn alpha_bound(params: &TrajectoryParams) -> f64 {
    let nf = params.n as f64;
    3.0 / params.constants.mu * nf.ln().powf(1.0 - 1.0 / (params.e_h as f64 - 1.0)) / params.p()
}

/// Largest values of `e(t)` and `q(t)^{-V}` on `[0, t_max]` against `n^epsilon`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BudgetReport {
    pub max_e: f64,
    pub max_q_inv_v: f64,
    pub n_eps: f64,
}

impl BudgetReport {
    pub fn within_budget(&self) -> bool {
        self.max_e <= self.n_eps && self.max_q_inv_v <= self.n_eps
    }
}

/// Both quantities increase in `t`, so their maxima sit at `t_max`.
pub fn budget_report(params: &TrajectoryParams) -> BudgetReport {
    let t = params.t_max;
    BudgetReport {
        max_e: e_of_t(params, t),
        max_q_inv_v: q_of_t(params, t).powf(-params.constants.v),
        n_eps: (params.n as f64).powf(params.constants.epsilon),
    }
}
