use crate::scalar::{xlogx, Real};

/// `S = ∫ n log n` split into `S⁺ = ∫ n log⁺ n` and `S⁻ = ∫ n log⁻ n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropySplit<T: Real> {
    pub total: T,
    pub positive: T,
    pub negative: T,
}

/// Entropy split by quadrature; `measure(j)` is the area of cell `j`.
///
/// `total` is formed as `positive − negative` so the split is exact.
pub fn entropy_split<T: Real>(density: &[T], measure: impl Fn(usize) -> T) -> EntropySplit<T> {
    let mut positive = T::zero();
    let mut negative = T::zero();
    for (j, &n) in density.iter().enumerate() {
        let w = measure(j);
        if n > T::one() {
            positive += w * xlogx(n);
        } else if n > T::zero() {
            negative -= w * xlogx(n);
        }
    }
    EntropySplit {
        total: positive - negative,
        positive,
        negative,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::E;

    fn unit_torus(value: f64) -> EntropySplit<f64> {
        let n = 16;
        let w = 1.0 / (n * n) as f64;
        entropy_split(&vec![value; n * n], |_| w)
    }

    #[test]
    fn constant_densities() {
        let s = unit_torus(1.0);
        assert_eq!((s.total, s.positive, s.negative), (0.0, 0.0, 0.0));

        let s = unit_torus(E);
        assert_relative_eq!(s.total, E, epsilon = 1e-13);
        assert_relative_eq!(s.positive, E, epsilon = 1e-13);
        assert_eq!(s.negative, 0.0);

        let s = unit_torus(1.0 / E);
        assert_relative_eq!(s.total, -1.0 / E, epsilon = 1e-13);
        assert_eq!(s.positive, 0.0);
        assert_relative_eq!(s.negative, 1.0 / E, epsilon = 1e-13);
    }

    #[test]
    fn zero_and_negative_cells_contribute_nothing() {
        let s = entropy_split(&[0.0, -1e-12, 2.0], |_| 1.0);
        assert_relative_eq!(s.positive, 2.0 * 2f64.ln());
        assert_eq!(s.negative, 0.0);
    }
}
