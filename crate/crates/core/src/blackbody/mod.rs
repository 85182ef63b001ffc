//! Modified blackbody spectrum with the oscillator number treated as a
//! conserved species carrying a chemical potential `μ ≤ 0`.
//!
//! Natural units throughout: `ħ = c = k_B = 1`.

mod sweep;

use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

pub use sweep::{
    surface, sweep, thread_count, write_csv, write_surface_csv, LinearGrid, SurfacePoint,
};

pub const DEFAULT_TOL: f64 = 1e-14;
pub const DEFAULT_M_CAP: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BlackbodyError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("series not converged after {m_cap} terms (tail bound {tail_bound:e})")]
    ConvergenceFailure { m_cap: usize, tail_bound: f64 },
    #[error("{0}")]
    Io(String),
}

impl BlackbodyError {
    pub fn name(&self) -> &'static str {
        match self {
            BlackbodyError::Invalid(_) => "InvalidInput",
            BlackbodyError::ConvergenceFailure { .. } => "ConvergenceFailure",
            BlackbodyError::Io(_) => "IoError",
        }
    }
}

/// Inverse temperature and chemical potential.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThermoParams {
    pub beta: f64,
    pub mu: f64,
}

impl ThermoParams {
    pub fn new(beta: f64, mu: f64) -> Result<Self, BlackbodyError> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(BlackbodyError::Invalid(format!(
                "beta must be positive and finite, got {beta}"
            )));
        }
        if !(mu.is_finite() && mu <= 0.0) {
            return Err(BlackbodyError::Invalid(format!(
                "mu must be finite and ≤ 0, got {mu}"
            )));
        }
        Ok(ThermoParams { beta, mu })
    }

    /// `β = 1`, `μ` in units of `k_B T`.
    pub fn reduced(mu_over_kbt: f64) -> Result<Self, BlackbodyError> {
        ThermoParams::new(1.0, mu_over_kbt)
    }
}

/// Truncated series value with the number of terms and a rigorous bound on the omitted tail.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Series {
    pub value: f64,
    pub m_terms: usize,
    pub tail_bound: f64,
}

/// Summation controls.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesControl {
    pub tol: f64,
    pub m_cap: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            tol: DEFAULT_TOL,
            m_cap: DEFAULT_M_CAP,
        }
    }
}

fn check_omega(omega: f64) -> Result<(), BlackbodyError> {
    if omega.is_finite() && omega > 0.0 {
        Ok(())
    } else {
        Err(BlackbodyError::Invalid(format!(
            "omega must be positive and finite, got {omega}"
        )))
    }
}

/// Per-`m` data: `e^{βm(μ−ω/2)}`, `x_m = e^{−βmω}` and `1 − x_m`.
fn lambert_factors(p: &ThermoParams, omega: f64, m: usize) -> (f64, f64, f64) {
    let mf = m as f64;
    let weight = (p.beta * mf * (p.mu - 0.5 * omega)).exp();
    let bw = p.beta * mf * omega;
    (weight, (-bw).exp(), -(-bw).exp_m1())
}

struct Sums {
    z: f64,
    numerator: f64,
    m_terms: usize,
    z_tail: f64,
    numerator_tail: f64,
}

fn lambert_sums(p: &ThermoParams, omega: f64, ctl: SeriesControl) -> Result<Sums, BlackbodyError> {
    check_omega(omega)?;
    let r = (-p.beta * (0.5 * omega - p.mu)).exp();
    let one_minus_r = -(-p.beta * (0.5 * omega - p.mu)).exp_m1();
    let x1 = (-p.beta * omega).exp();
    let one_minus_x1 = -(-p.beta * omega).exp_m1();
    let s = r * x1;
    let one_minus_s = -(-p.beta * (1.5 * omega - p.mu)).exp_m1();
    let mut z = 0.0;
    let mut numerator = 0.0;
    let mut r_pow = r;
    let mut s_pow = s;
    let mut z_tail = f64::INFINITY;
    let mut numerator_tail = f64::INFINITY;
    for m in 1..=ctl.m_cap {
        let (w, x, one_minus_x) = lambert_factors(p, omega, m);
        z += w / one_minus_x;
        numerator += m as f64 * w * x / (one_minus_x * one_minus_x);
        r_pow *= r;
        s_pow *= s;
        // Σ_{j>m} r^j / (1 − x_j) ≤ r^{m+1} / ((1 − r)(1 − x_1))
        z_tail = r_pow / (one_minus_r * one_minus_x1);
        // Σ_{j>m} j s^j / (1 − x_1)², closed form of the arithmetic-geometric tail
        let mf = m as f64;
        numerator_tail = s_pow * ((mf + 1.0) - mf * s)
            / (one_minus_s * one_minus_s)
            / (one_minus_x1 * one_minus_x1);
        let done = |tail: f64, sum: f64| tail <= ctl.tol && tail <= ctl.tol * sum;
        if done(z_tail, z) && done(numerator_tail, numerator) {
            return Ok(Sums {
                z,
                numerator,
                m_terms: m,
                z_tail,
                numerator_tail,
            });
        }
    }
    Err(BlackbodyError::ConvergenceFailure {
        m_cap: ctl.m_cap,
        tail_bound: z_tail.max(numerator_tail),
    })
}

/// `Z = Σ_{m≥1} e^{βm(μ−ω/2)} / (1 − e^{−βmω})`.
pub fn partition_function(p: &ThermoParams, omega: f64) -> Result<Series, BlackbodyError> {
    partition_function_with(p, omega, SeriesControl::default())
}

pub fn partition_function_with(
    p: &ThermoParams,
    omega: f64,
    ctl: SeriesControl,
) -> Result<Series, BlackbodyError> {
    let s = lambert_sums(p, omega, ctl)?;
    Ok(Series {
        value: s.z,
        m_terms: s.m_terms,
        tail_bound: s.z_tail,
    })
}

/// `n̄_ω = Z⁻¹ Σ_m m e^{βm(μ−ω/2)} x_m/(1−x_m)²`, the inner excitation sum in closed form.
///
/// The reported tail bound is the larger of the bounds on `Z` and on the numerator.
pub fn mean_excitations(p: &ThermoParams, omega: f64) -> Result<Series, BlackbodyError> {
    mean_excitations_with(p, omega, SeriesControl::default())
}

pub fn mean_excitations_with(
    p: &ThermoParams,
    omega: f64,
    ctl: SeriesControl,
) -> Result<Series, BlackbodyError> {
    let s = lambert_sums(p, omega, ctl)?;
    Ok(Series {
        value: s.numerator / s.z,
        m_terms: s.m_terms,
        tail_bound: s.z_tail.max(s.numerator_tail),
    })
}

/// `n̄_ω` with the oscillator-number sum cut at `m_max`; `m_max = 1` is the Planck case.
pub fn mean_excitations_truncated(
    p: &ThermoParams,
    omega: f64,
    m_max: usize,
) -> Result<f64, BlackbodyError> {
    check_omega(omega)?;
    if m_max == 0 {
        return Err(BlackbodyError::Invalid("m_max must be ≥ 1".into()));
    }
    let mut z = 0.0;
    let mut numerator = 0.0;
    for m in 1..=m_max {
        let (w, x, one_minus_x) = lambert_factors(p, omega, m);
        z += w / one_minus_x;
        numerator += m as f64 * w * x / (one_minus_x * one_minus_x);
    }
    Ok(numerator / z)
}

/// `ρ_new = ω³ n̄_ω / π²`.
pub fn rho_new(p: &ThermoParams, omega: f64) -> Result<f64, BlackbodyError> {
    Ok(omega.powi(3) / (PI * PI) * mean_excitations(p, omega)?.value)
}

/// `ρ = ω³ / (π² (e^{βω} − 1))`.
pub fn rho_planck(p: &ThermoParams, omega: f64) -> f64 {
    omega.powi(3) / (PI * PI) / (p.beta * omega).exp_m1()
}

/// `ω³ / (π² ([1 + (q−1)βω]^{1/(q−1)} − 1))`, zero beyond the `q < 1` cut-off.
pub fn rho_tsallis(p: &ThermoParams, omega: f64, q: f64) -> Result<f64, BlackbodyError> {
    check_omega(omega)?;
    if q.is_nan() || (q - 1.0).abs() >= 0.5 {
        return Err(BlackbodyError::Invalid(format!(
            "q must satisfy |q − 1| < 0.5, got {q}"
        )));
    }
    if q == 1.0 {
        return Ok(rho_planck(p, omega));
    }
    let u = (q - 1.0) * p.beta * omega;
    if 1.0 + u <= 0.0 {
        return Ok(0.0);
    }
    let q_exp_minus_one = (u.ln_1p() / (q - 1.0)).exp_m1();
    Ok(omega.powi(3) / (PI * PI) / q_exp_minus_one)
}

/// Maximum of `ρ_planck` by golden-section search.
pub fn planck_peak(p: &ThermoParams) -> f64 {
    let f = |w: f64| rho_planck(p, w);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (0.5 / p.beta, 6.0 / p.beta);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    while (b - a).abs() > 1e-13 * b {
        if f(c) > f(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    0.5 * (a + b)
}

/// One spectrum sample.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumPoint {
    pub omega: f64,
    pub rho_new: f64,
    pub rho_planck: f64,
    /// `(q, ρ_q)` for each requested `q`.
    pub rho_tsallis: Vec<(f64, f64)>,
    pub m_terms: usize,
    pub tail_bound: f64,
}

pub fn spectrum_point(
    p: &ThermoParams,
    omega: f64,
    q_list: &[f64],
) -> Result<SpectrumPoint, BlackbodyError> {
    let n = mean_excitations(p, omega)?;
    let rho_tsallis = q_list
        .iter()
        .map(|&q| rho_tsallis(p, omega, q).map(|r| (q, r)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SpectrumPoint {
        omega,
        rho_new: omega.powi(3) / (PI * PI) * n.value,
        rho_planck: rho_planck(p, omega),
        rho_tsallis,
        m_terms: n.m_terms,
        tail_bound: n.tail_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn params_are_validated() {
        assert!(ThermoParams::new(1.0, 0.1).is_err());
        assert!(ThermoParams::new(0.0, -1.0).is_err());
        assert!(ThermoParams::new(2.0, 0.0).is_ok());
    }

    #[test]
    fn deep_negative_mu_keeps_first_term() {
        let p = ThermoParams::new(1.0, -50.0).unwrap();
        let z = partition_function(&p, 1.0).unwrap();
        let first = (-50.5f64).exp() / (1.0 - (-1.0f64).exp());
        assert!(rel(z.value, first) < 1e-12);
    }

    #[test]
    fn large_frequency_single_term() {
        let p = ThermoParams::new(1.0, -0.3).unwrap();
        let z = partition_function(&p, 80.0).unwrap();
        assert!(rel(z.value, (-40.3f64).exp()) < 1e-12);
    }

    #[test]
    fn reference_value_at_zero_mu() {
        let p = ThermoParams::reduced(0.0).unwrap();
        let n = mean_excitations(&p, 1.0).unwrap();
        assert!(rel(n.value, 0.377_533_548_352_311_97) < 1e-13);
        assert!(n.tail_bound <= DEFAULT_TOL);
    }

    #[test]
    fn first_term_alone_is_planck() {
        let p = ThermoParams::reduced(-0.8).unwrap();
        for w in [0.01, 0.5, 2.0, 9.0] {
            let n1 = mean_excitations_truncated(&p, w, 1).unwrap();
            assert!(rel(n1, 1.0 / w.exp_m1()) < 1e-12);
        }
    }

    #[test]
    fn cap_reports_convergence_failure() {
        let p = ThermoParams::reduced(0.0).unwrap();
        let err = partition_function_with(
            &p,
            0.01,
            SeriesControl {
                tol: 1e-14,
                m_cap: 10,
            },
        )
        .unwrap_err();
        assert!(matches!(
            err,
            BlackbodyError::ConvergenceFailure { m_cap: 10, .. }
        ));
    }

    #[test]
    fn tsallis_limits() {
        let p = ThermoParams::reduced(0.0).unwrap();
        let w = 2.0;
        assert_eq!(rho_tsallis(&p, w, 1.0).unwrap(), rho_planck(&p, w));
        for q in [1.0 - 1e-6, 1.0 + 1e-6] {
            assert!(rel(rho_tsallis(&p, w, q).unwrap(), rho_planck(&p, w)) < 1e-5);
        }
        assert!(rho_tsallis(&p, 2.8, 0.95).unwrap() < rho_planck(&p, 2.8));
        assert!(rho_tsallis(&p, 2.8, 1.05).unwrap() > rho_planck(&p, 2.8));
        assert_eq!(rho_tsallis(&p, 25.0, 0.95).unwrap(), 0.0);
        assert!(rho_tsallis(&p, 1.0, 1.6).is_err());
    }

    #[test]
    fn planck_peak_location() {
        // a maximum is located only to about √ε relative
        let p = ThermoParams::reduced(0.0).unwrap();
        let x = planck_peak(&p);
        assert!((x - 2.821_439_372_122_078_9).abs() < 1e-7, "{x}");
        let half = ThermoParams::new(0.5, 0.0).unwrap();
        assert!((planck_peak(&half) - 2.0 * x).abs() < 1e-6);
    }

    #[test]
    fn low_frequency_density_vanishes() {
        let p = ThermoParams::reduced(0.0).unwrap();
        assert!(rho_new(&p, 0.01).unwrap() < 1e-4);
    }
}
