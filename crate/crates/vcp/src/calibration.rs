use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use xalg::basis::{self, binomial};
use xalg::Multivector;

use crate::sampling::random_orthonormal_frame;
use crate::{Result, VcpError};

/// Alternating form of a fixed degree, stored on lexicographic index sets.
#[derive(Debug, Clone, PartialEq)]
pub struct Calibration {
    n: usize,
    degree: usize,
    components: Vec<f64>,
}

impl Calibration {
    pub fn new(n: usize, degree: usize, components: Vec<f64>) -> Result<Self> {
        let expected = binomial(n, degree);
        if components.len() != expected || degree == 0 || degree > n {
            return Err(VcpError::Table(format!(
                "degree-{degree} form on R^{n} needs {expected} components, got {}",
                components.len()
            )));
        }
        Ok(Self { n, degree, components })
    }

    /// Builds a form from (index tuple, value) pairs with 0-based indices. An
    /// unsorted tuple contributes with the sign of its sorting permutation.
    pub fn from_terms(n: usize, degree: usize, terms: &[(Vec<usize>, f64)]) -> Result<Self> {
        let mut components = vec![0.0; binomial(n, degree)];
        for (idx, value) in terms {
            if idx.len() != degree || idx.iter().any(|&i| i >= n) {
                return Err(VcpError::Table(format!("index {idx:?} invalid for degree {degree} on R^{n}")));
            }
            let (sorted, sign) = basis::sort_with_sign(idx)
                .ok_or_else(|| VcpError::Table(format!("repeated index in {idx:?}")))?;
            components[basis::rank(n, &sorted)?] += sign * value;
        }
        Self::new(n, degree, components)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    /// Component on an arbitrary (possibly unsorted) index tuple.
    pub fn component(&self, idx: &[usize]) -> f64 {
        match basis::sort_with_sign(idx) {
            Some((sorted, sign)) => basis::rank(self.n, &sorted).map_or(0.0, |r| sign * self.components[r]),
            None => 0.0,
        }
    }

    /// Nonzero components as (sorted 0-based index set, value).
    pub fn nonzero_terms(&self) -> Vec<(Vec<usize>, f64)> {
        basis::subsets(self.n, self.degree)
            .into_iter()
            .zip(&self.components)
            .filter(|(_, c)| **c != 0.0)
            .map(|(s, c)| (s, *c))
            .collect()
    }

    /// α(v₁, …, v_p).
    pub fn eval(&self, vectors: &[&[f64]]) -> Result<f64> {
        if vectors.len() != self.degree || vectors.iter().any(|v| v.len() != self.n) {
            return Err(VcpError::ArgumentMismatch {
                expected: self.degree,
                n: self.n,
                got: format!("{:?}", vectors.iter().map(|v| v.len()).collect::<Vec<_>>()),
            });
        }
        let w = Multivector::wedge_all(vectors)?;
        Ok(w.coeffs().iter().zip(&self.components).map(|(a, b)| a * b).sum())
    }

    /// Largest value of α over `samples` random orthonormal frames; a lower
    /// estimate of the comass.
    pub fn sampled_comass(&self, samples: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut best = f64::NEG_INFINITY;
        for _ in 0..samples {
            let frame = random_orthonormal_frame(&mut rng, self.n, self.degree);
            let refs: Vec<&[f64]> = frame.iter().map(|v| v.as_slice()).collect();
            let value = self.eval(&refs).expect("frame has the form's shape");
            best = best.max(value.abs());
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_terms_respects_permutation_sign() {
        let a = Calibration::from_terms(3, 2, &[(vec![1, 0], 1.0)]).unwrap();
        assert_eq!(a.component(&[0, 1]), -1.0);
        assert_eq!(a.component(&[1, 0]), 1.0);
        assert_eq!(a.component(&[0, 0]), 0.0);
    }

    #[test]
    fn eval_is_alternating() {
        let vol = Calibration::from_terms(3, 3, &[(vec![0, 1, 2], 1.0)]).unwrap();
        let e = |i: usize| {
            let mut v = vec![0.0; 3];
            v[i] = 1.0;
            v
        };
        let (a, b, c) = (e(0), e(1), e(2));
        assert_eq!(vol.eval(&[&a, &b, &c]).unwrap(), 1.0);
        assert_eq!(vol.eval(&[&b, &a, &c]).unwrap(), -1.0);
        assert!(vol.eval(&[&a, &b]).is_err());
    }
}
