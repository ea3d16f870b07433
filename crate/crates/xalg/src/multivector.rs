use crate::basis::{self, binomial};
use crate::{Result, XalgError, MAX_DIM};

/// Homogeneous element of Λᵏℝⁿ in the lexicographic basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Multivector {
    n: usize,
    k: usize,
    coeffs: Vec<f64>,
}

impl Multivector {
    pub fn new(n: usize, k: usize, coeffs: Vec<f64>) -> Result<Self> {
        check_dim(n)?;
        if k > n {
            return Err(XalgError::DegreeOverflow { degree: k, n });
        }
        let expected = binomial(n, k);
        if coeffs.len() != expected {
            return Err(XalgError::LengthMismatch { got: coeffs.len(), expected });
        }
        Ok(Self { n, k, coeffs })
    }

    pub fn zero(n: usize, k: usize) -> Result<Self> {
        Self::new(n, k, vec![0.0; binomial(n, k)])
    }

    pub fn scalar(n: usize, c: f64) -> Result<Self> {
        Self::new(n, 0, vec![c])
    }

    pub fn vector(v: &[f64]) -> Result<Self> {
        Self::new(v.len(), 1, v.to_vec())
    }

    /// The basis blade e_{i₁} ∧ … ∧ e_{iₖ}; indices may be unsorted, and a
    /// repeated index yields zero.
    pub fn blade(n: usize, idx: &[usize]) -> Result<Self> {
        check_dim(n)?;
        if idx.iter().any(|&i| i >= n) {
            return Err(XalgError::InvalidIndexSet(idx.to_vec()));
        }
        let mut out = Self::zero(n, idx.len())?;
        if let Some((sorted, sign)) = basis::sort_with_sign(idx) {
            out.coeffs[basis::rank(n, &sorted)?] = sign;
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(XalgError::DimensionMismatch(self.n, other.n));
        }
        let k = self.k + other.k;
        if k > self.n {
            return Err(XalgError::DegreeOverflow { degree: k, n: self.n });
        }
        let left = basis::subsets(self.n, self.k);
        let right = basis::subsets(self.n, other.k);
        let mut out = Self::zero(self.n, k)?;
        for (a, ca) in left.iter().zip(&self.coeffs) {
            if *ca == 0.0 {
                continue;
            }
            for (b, cb) in right.iter().zip(&other.coeffs) {
                if *cb == 0.0 {
                    continue;
                }
                if let Some((set, sign)) = basis::merge(a, b) {
                    out.coeffs[basis::rank(self.n, &set)?] += sign * ca * cb;
                }
            }
        }
        Ok(out)
    }

    /// v₁ ∧ … ∧ vₖ for vectors of a common length.
    pub fn wedge_all(vectors: &[&[f64]]) -> Result<Self> {
        let n = vectors.first().map_or(0, |v| v.len());
        check_dim(n)?;
        let mut acc = Self::scalar(n, 1.0)?;
        for v in vectors {
            if v.len() != n {
                return Err(XalgError::DimensionMismatch(n, v.len()));
            }
            acc = acc.wedge(&Self::vector(v)?)?;
        }
        Ok(acc)
    }

    pub fn dot(&self, other: &Self) -> Result<f64> {
        if self.n != other.n || self.k != other.k {
            return Err(XalgError::DimensionMismatch(self.n, other.n));
        }
        Ok(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a * b).sum())
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { n: self.n, k: self.k, coeffs: self.coeffs.iter().map(|x| c * x).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n || self.k != other.k {
            return Err(XalgError::DimensionMismatch(self.n, other.n));
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self { n: self.n, k: self.k, coeffs })
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DIM {
        Err(XalgError::UnsupportedDimension(n))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, i: usize) -> Multivector {
        Multivector::blade(n, &[i]).unwrap()
    }

    #[test]
    fn basis_wedge() {
        let w = e(3, 0).wedge(&e(3, 1)).unwrap();
        assert_eq!(w.coeffs(), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn repeated_vector_vanishes() {
        let w = e(3, 0).wedge(&e(3, 0)).unwrap();
        assert_eq!(w.norm(), 0.0);
        assert_eq!(Multivector::blade(3, &[1, 1]).unwrap().norm(), 0.0);
    }

    #[test]
    fn bilinear_and_antisymmetric() {
        let a = e(3, 0).add(&e(3, 1)).unwrap();
        let w = a.wedge(&e(3, 1)).unwrap();
        assert_eq!(w, Multivector::blade(3, &[0, 1]).unwrap());
        let swapped = e(3, 1).wedge(&a).unwrap();
        assert_eq!(swapped, w.scale(-1.0));
    }

    #[test]
    fn errors() {
        let a = e(3, 0);
        let b = e(4, 0);
        assert!(matches!(a.wedge(&b), Err(XalgError::DimensionMismatch(3, 4))));
        let top = Multivector::blade(3, &[0, 1, 2]).unwrap();
        assert!(matches!(top.wedge(&a), Err(XalgError::DegreeOverflow { .. })));
        assert!(Multivector::new(3, 2, vec![1.0]).is_err());
    }

    #[test]
    fn blade_sign_follows_permutation() {
        let b = Multivector::blade(4, &[2, 0, 1]).unwrap();
        let r = basis::rank(4, &[0, 1, 2]).unwrap();
        assert_eq!(b.coeffs()[r], 1.0);
        let b = Multivector::blade(4, &[1, 0, 2]).unwrap();
        assert_eq!(b.coeffs()[r], -1.0);
    }
}
