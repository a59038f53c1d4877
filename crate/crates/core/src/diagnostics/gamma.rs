//! Quadratic splice of `log` below a cutoff, used by the modified free energy.

use crate::scalar::Real;

/// Cutoff parameters: `η = min{1, δ/M}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaParams<T: Real> {
    pub delta: T,
    pub mass: T,
    pub eta: T,
}

impl<T: Real> GammaParams<T> {
    /// `delta` must be positive; zero mass gives `η = 1`.
    pub fn new(delta: T, mass: T) -> Self {
        assert!(delta > T::zero(), "growth budget must be positive");
        let eta = if mass > T::zero() {
            T::one().min(delta / mass)
        } else {
            T::one()
        };
        Self { delta, mass, eta }
    }

    /// Parameters with an explicit cutoff, bypassing the `δ/M` rule.
    pub fn with_eta(eta: T) -> Self {
        assert!(
            eta > T::zero() && eta <= T::one(),
            "cutoff must lie in (0, 1]"
        );
        Self {
            delta: eta,
            mass: T::one(),
            eta,
        }
    }

    /// `Γ(0) = log η − 3/2`, the global minimum of Γ on `[0, ∞)`.
    pub fn lower_bound(&self) -> T {
        self.eta.ln() - T::lit(1.5)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaBranch {
    Log,
    Quadratic,
}

/// Value, first and second derivative of one branch of Γ at `n`.
pub fn gamma_branch<T: Real>(n: T, eta: T, branch: GammaBranch) -> (T, T, T) {
    match branch {
        GammaBranch::Log => (n.ln(), n.recip(), -(n * n).recip()),
        GammaBranch::Quadratic => {
            let d = n - eta;
            let inv = eta.recip();
            let inv2 = inv * inv;
            (
                eta.ln() + inv * d - T::lit(0.5) * inv2 * d * d,
                inv - inv2 * d,
                -inv2,
            )
        }
    }
}

/// Γ(n): `log n` for `n ≥ η`, its second-order Taylor polynomial at η below.
pub fn gamma_fn<T: Real>(n: T, params: &GammaParams<T>) -> T {
    let branch = if n >= params.eta {
        GammaBranch::Log
    } else {
        GammaBranch::Quadratic
    };
    gamma_branch(n, params.eta, branch).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn log_branch_at_e() {
        let p = GammaParams::with_eta(1.0);
        assert_relative_eq!(gamma_fn(std::f64::consts::E, &p), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn value_at_zero_is_lower_bound() {
        for eta in [1.0f64, 0.5, 0.01, 1e-6] {
            let p = GammaParams::with_eta(eta);
            assert_relative_eq!(gamma_fn(0.0, &p), eta.ln() - 1.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn quadratic_branch_value() {
        let p = GammaParams::with_eta(0.5);
        let expected = 0.5f64.ln() - 0.5 - 0.125;
        assert_relative_eq!(gamma_fn(0.25, &p), expected, epsilon = 1e-15);
        assert_relative_eq!(expected, -1.318147180559945, epsilon = 1e-14);
    }

    #[test]
    fn eta_rule() {
        assert_eq!(
            GammaParams::new(0.01, 4.0 * std::f64::consts::PI).eta,
            0.01 / (4.0 * std::f64::consts::PI)
        );
        assert_eq!(GammaParams::new(5.0, 2.0).eta, 1.0);
        assert_eq!(GammaParams::new(0.1, 0.0).eta, 1.0);
    }

    proptest! {
        #[test]
        fn branches_agree_to_second_order(eta in 1e-6f64..=1.0) {
            let a = gamma_branch(eta, eta, GammaBranch::Log);
            let b = gamma_branch(eta, eta, GammaBranch::Quadratic);
            prop_assert!((a.0 - b.0).abs() <= 1e-12 * (1.0 + a.0.abs()));
            prop_assert!((a.1 - b.1).abs() <= 1e-12 * a.1.abs());
            prop_assert!((a.2 - b.2).abs() <= 1e-12 * a.2.abs());
        }

        #[test]
        fn bounded_below(eta in 1e-6f64..=1.0, n in 0.0f64..10.0) {
            let p = GammaParams::with_eta(eta);
            prop_assert!(gamma_fn(n, &p) >= p.lower_bound() - 1e-12);
        }
    }
}
