//! Monitored functionals: entropies, free energies, moments, dissipation
//! rates and residuals of the energy identities.

mod entropy;
mod gamma;
mod radial;
mod torus;

pub use entropy::{entropy_split, EntropySplit};
pub use gamma::{gamma_branch, gamma_fn, GammaBranch, GammaParams};
pub(crate) use radial::relative_fisher_information;
pub use radial::{
    dissipation_radial, free_energy_plane_radial, kinetic_energy_radial, loghls_functional,
    modified_free_energy, radial_record, s_minus_bound_check, second_moment_radial,
    second_moment_raw,
};
pub use torus::{dissipation_torus, free_energy_torus, torus_record};

use crate::scalar::Real;

/// Which solver produced a record; selfsim rows carry τ in the time column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RecordMode {
    Torus,
    Radial,
    SelfSim,
}

impl RecordMode {
    pub fn as_str(self) -> &'static str {
        match self {
            RecordMode::Torus => "torus",
            RecordMode::Radial => "radial",
            RecordMode::SelfSim => "selfsim",
        }
    }
}

/// One row of monitored quantities. Quantities that do not apply to a mode
/// are NaN (second moment and log-HLS on the torus, `E_gamma` off the plane).
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsRecord<T: Real> {
    pub t: T,
    pub dt: T,
    pub mass: T,
    pub mean_u1: T,
    pub mean_u2: T,
    pub l2_n: T,
    pub linf_n: T,
    pub l2_u: T,
    pub l2_omega: T,
    pub second_moment: T,
    pub entropy: T,
    pub entropy_plus: T,
    pub entropy_minus: T,
    pub energy: T,
    pub energy_gamma: T,
    pub dissipation_n: T,
    pub dissipation_u: T,
    pub energy_residual: T,
    pub loghls: T,
    pub mode: RecordMode,
}

impl<T: Real> DiagnosticsRecord<T> {
    /// CSV column names, in serialization order.
    pub const COLUMNS: [&'static str; 20] = [
        "t",
        "dt",
        "M",
        "mean_u1",
        "mean_u2",
        "L2_n",
        "Linf_n",
        "L2_u",
        "L2_omega",
        "V",
        "S",
        "S_plus",
        "S_minus",
        "E",
        "E_gamma",
        "D_n",
        "D_u",
        "E_residual",
        "loghls",
        "mode",
    ];

    /// Numeric columns in [`Self::COLUMNS`] order (the trailing mode column excluded).
    pub fn values(&self) -> [T; 19] {
        [
            self.t,
            self.dt,
            self.mass,
            self.mean_u1,
            self.mean_u2,
            self.l2_n,
            self.linf_n,
            self.l2_u,
            self.l2_omega,
            self.second_moment,
            self.entropy,
            self.entropy_plus,
            self.entropy_minus,
            self.energy,
            self.energy_gamma,
            self.dissipation_n,
            self.dissipation_u,
            self.energy_residual,
            self.loghls,
        ]
    }

    /// Total dissipation rate `D_n + D_u`.
    pub fn dissipation(&self) -> T {
        self.dissipation_n + self.dissipation_u
    }
}

/// Signed residual of `dE/dt = −(D_n + D_u)` on each recorded interval:
/// difference quotient of E plus the trapezoidal average of the dissipation.
pub fn energy_residual<T: Real>(records: &[DiagnosticsRecord<T>]) -> Vec<T> {
    records
        .windows(2)
        .map(|w| {
            let dt = w[1].t - w[0].t;
            (w[1].energy - w[0].energy) / dt
                + T::lit(0.5) * (w[0].dissipation() + w[1].dissipation())
        })
        .collect()
}

/// Writes [`energy_residual`] into each record (the first row gets NaN).
pub fn fill_energy_residuals<T: Real>(records: &mut [DiagnosticsRecord<T>]) {
    let residuals = energy_residual(records);
    if let Some(first) = records.first_mut() {
        first.energy_residual = T::nan();
    }
    for (rec, r) in records.iter_mut().skip(1).zip(residuals) {
        rec.energy_residual = r;
    }
}

/// Least-squares slope of `ys` against `xs`; `None` with fewer than two points.
pub fn least_squares_slope<T: Real>(xs: &[T], ys: &[T]) -> Option<T> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let count = T::from_index(xs.len());
    let mx = xs.iter().fold(T::zero(), |a, &x| a + x) / count;
    let my = ys.iter().fold(T::zero(), |a, &y| a + y) / count;
    let mut sxy = T::zero();
    let mut sxx = T::zero();
    for (&x, &y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    if sxx == T::zero() {
        None
    } else {
        Some(sxy / sxx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn blank(t: f64, energy: f64, dissipation: f64) -> DiagnosticsRecord<f64> {
        DiagnosticsRecord {
            t,
            dt: 0.1,
            mass: 1.0,
            mean_u1: 0.0,
            mean_u2: 0.0,
            l2_n: 0.0,
            linf_n: 0.0,
            l2_u: 0.0,
            l2_omega: 0.0,
            second_moment: f64::NAN,
            entropy: 0.0,
            entropy_plus: 0.0,
            entropy_minus: 0.0,
            energy,
            energy_gamma: f64::NAN,
            dissipation_n: dissipation,
            dissipation_u: 0.0,
            energy_residual: f64::NAN,
            loghls: f64::NAN,
            mode: RecordMode::Torus,
        }
    }

    #[test]
    fn residual_of_equilibrium_is_zero() {
        let recs: Vec<_> = (0..5).map(|k| blank(k as f64 * 0.1, 3.0, 0.0)).collect();
        assert!(energy_residual(&recs).iter().all(|r| *r == 0.0));
    }

    #[test]
    fn residual_of_exact_exponential_decay_is_second_order() {
        // E = e^{-t}, D = e^{-t}: exact identity, trapezoid error O(Δt²).
        let residual_at = |dt: f64| {
            let recs: Vec<_> = (0..=10)
                .map(|k| {
                    let t = k as f64 * dt;
                    blank(t, (-t).exp(), (-t).exp())
                })
                .collect();
            energy_residual(&recs)
                .iter()
                .fold(0.0f64, |a, r| a.max(r.abs()))
        };
        let ratio = residual_at(0.1) / residual_at(0.05);
        assert!((ratio - 4.0).abs() < 0.2, "ratio {ratio}");
    }

    #[test]
    fn slope_of_line() {
        let xs = [0.0f64, 1.0, 2.0, 3.0];
        let ys = [1.0, 3.0, 5.0, 7.0];
        assert!((least_squares_slope(&xs, &ys).unwrap() - 2.0).abs() < 1e-15);
        assert!(least_squares_slope(&[1.0], &[2.0]).is_none());
    }

    #[test]
    fn column_count_matches_values() {
        let rec = blank(0.0, 0.0, 0.0);
        assert_eq!(
            rec.values().len() + 1,
            DiagnosticsRecord::<f64>::COLUMNS.len()
        );
    }
}
