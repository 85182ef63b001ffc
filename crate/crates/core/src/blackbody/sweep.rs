use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use super::{spectrum_point, BlackbodyError, SpectrumPoint, ThermoParams};

/// `count` evenly spaced points from `start` to `end` inclusive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearGrid {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl LinearGrid {
    pub fn new(start: f64, end: f64, count: usize) -> Result<Self, BlackbodyError> {
        if !(start.is_finite() && end.is_finite()) || count == 0 || (count > 1 && end <= start) {
            return Err(BlackbodyError::Invalid(format!(
                "bad grid {start}:{end}:{count}"
            )));
        }
        Ok(LinearGrid { start, end, count })
    }

    /// The 512-point spectrum grid `0.01..10`.
    pub fn default_spectrum() -> Self {
        LinearGrid {
            start: 0.01,
            end: 10.0,
            count: 512,
        }
    }

    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.end - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.end
                } else {
                    self.start + step * i as f64
                }
            })
            .collect()
    }
}

impl FromStr for LinearGrid {
    type Err = BlackbodyError;

    /// `start:end:count`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || BlackbodyError::Invalid(format!("grid `{s}` is not start:end:count"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let start = parts[0].trim().parse().map_err(|_| bad())?;
        let end = parts[1].trim().parse().map_err(|_| bad())?;
        let count = parts[2].trim().parse().map_err(|_| bad())?;
        LinearGrid::new(start, end, count)
    }
}

/// Worker count from `NCQO_THREADS`, or `None` for the rayon default.
pub fn thread_count() -> Result<Option<usize>, BlackbodyError> {
    match std::env::var("NCQO_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(BlackbodyError::Invalid(format!(
                "NCQO_THREADS must be a positive integer, got `{v}`"
            ))),
        },
    }
}

fn in_pool<T: Send>(job: impl FnOnce() -> T + Send) -> Result<T, BlackbodyError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count()? {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| BlackbodyError::Io(e.to_string()))?;
    Ok(pool.install(job))
}

fn check_grid(omegas: &[f64]) -> Result<(), BlackbodyError> {
    if omegas.iter().any(|w| !(w.is_finite() && *w > 0.0))
        || omegas.windows(2).any(|w| w[1] <= w[0])
    {
        return Err(BlackbodyError::Invalid(
            "frequency grid must be positive and strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Spectrum on a frequency grid, in grid order.
pub fn sweep(
    p: &ThermoParams,
    omegas: &[f64],
    q_list: &[f64],
) -> Result<Vec<SpectrumPoint>, BlackbodyError> {
    check_grid(omegas)?;
    in_pool(|| {
        omegas
            .par_iter()
            .map(|&w| spectrum_point(p, w, q_list))
            .collect()
    })?
}

/// Sample of the `(μ, ω)` surface.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfacePoint {
    pub mu: f64,
    pub point: SpectrumPoint,
}

/// Long-format `(μ, ω)` surface: rows ordered by `μ`, then `ω`.
pub fn surface(
    beta: f64,
    mus: &[f64],
    omegas: &[f64],
) -> Result<Vec<SurfacePoint>, BlackbodyError> {
    check_grid(omegas)?;
    let params = mus
        .iter()
        .map(|&mu| ThermoParams::new(beta, mu))
        .collect::<Result<Vec<_>, _>>()?;
    let cells: Vec<(usize, usize)> = (0..mus.len())
        .flat_map(|i| (0..omegas.len()).map(move |j| (i, j)))
        .collect();
    in_pool(|| {
        cells
            .par_iter()
            .map(|&(i, j)| {
                spectrum_point(&params[i], omegas[j], &[]).map(|point| SurfacePoint {
                    mu: params[i].mu,
                    point,
                })
            })
            .collect()
    })?
}

fn io(e: std::io::Error) -> BlackbodyError {
    BlackbodyError::Io(e.to_string())
}

fn q_header(q_list: &[f64]) -> String {
    q_list
        .iter()
        .map(|q| format!(",rho_tsallis_q{q}"))
        .collect()
}

fn row(point: &SpectrumPoint) -> String {
    let mut s = format!(
        "{:.16e},{:.16e},{:.16e}",
        point.omega, point.rho_new, point.rho_planck
    );
    for (_, r) in &point.rho_tsallis {
        s.push_str(&format!(",{r:.16e}"));
    }
    s.push_str(&format!(",{},{:.16e}", point.m_terms, point.tail_bound));
    s
}

/// CSV with columns `omega_over_kBT,rho_new,rho_planck,rho_tsallis_q<q>...,m_terms,tail_bound`.
pub fn write_csv<W: Write>(
    mut out: W,
    points: &[SpectrumPoint],
    q_list: &[f64],
) -> Result<(), BlackbodyError> {
    writeln!(
        out,
        "omega_over_kBT,rho_new,rho_planck{},m_terms,tail_bound",
        q_header(q_list)
    )
    .map_err(io)?;
    for p in points {
        writeln!(out, "{}", row(p)).map_err(io)?;
    }
    Ok(())
}

/// Surface CSV: the spectrum columns preceded by `mu_over_kBT`.
pub fn write_surface_csv<W: Write>(
    mut out: W,
    points: &[SurfacePoint],
) -> Result<(), BlackbodyError> {
    writeln!(
        out,
        "mu_over_kBT,omega_over_kBT,rho_new,rho_planck,m_terms,tail_bound"
    )
    .map_err(io)?;
    for p in points {
        writeln!(out, "{:.16e},{}", p.mu, row(&p.point)).map_err(io)?;
    }
    Ok(())
}
