use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use xalg::basis::{self, binomial};
use xalg::Multivector;

use crate::calibration::Calibration;
use crate::sampling::random_unit_vector;
use crate::{Result, VcpError};

/// The four Brown–Gray families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VcpKind {
    /// (n, n−1): the Hodge star of a wedge of n−1 vectors.
    HodgeStar,
    /// (2r, 1): the standard complex structure.
    Complex,
    /// (7, 2)
    G2,
    /// (8, 3)
    Spin7,
}

impl VcpKind {
    pub fn name(self) -> &'static str {
        match self {
            VcpKind::HodgeStar => "HodgeStar",
            VcpKind::Complex => "Complex",
            VcpKind::G2 => "G2",
            VcpKind::Spin7 => "Spin7",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "HodgeStar" => Some(VcpKind::HodgeStar),
            "Complex" => Some(VcpKind::Complex),
            "G2" => Some(VcpKind::G2),
            "Spin7" => Some(VcpKind::Spin7),
            _ => None,
        }
    }

    /// Fold for a legal (kind, n) pairing.
    pub fn fold(self, n: usize) -> Option<usize> {
        match self {
            VcpKind::HodgeStar if (2..=8).contains(&n) => Some(n - 1),
            VcpKind::Complex if n >= 2 && n <= 8 && n % 2 == 0 => Some(1),
            VcpKind::G2 if n == 7 => Some(2),
            VcpKind::Spin7 if n == 8 => Some(3),
            _ => None,
        }
    }
}

/// Associative 3-form terms, 1-based.
const PHI_TERMS: [([usize; 3], f64); 7] = [
    ([1, 2, 3], 1.0),
    ([1, 4, 5], 1.0),
    ([1, 6, 7], 1.0),
    ([2, 4, 6], 1.0),
    ([2, 5, 7], -1.0),
    ([3, 4, 7], -1.0),
    ([3, 5, 6], -1.0),
];

/// k-fold cross product P on ℝⁿ. Column J of the table is P(e_J) for the
/// J-th lexicographic k-subset.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossProduct {
    n: usize,
    k: usize,
    kind: VcpKind,
    table: DMatrix<f64>,
    /// Nonzero (i, j, l, c) with i < j meaning P(eᵢ ∧ eⱼ) has l-component c;
    /// populated for fold 2 only.
    pairs: Vec<(usize, usize, usize, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxiomDefect {
    /// max |⟨P(v₁∧…∧vₖ), vᵢ⟩|
    pub orth: f64,
    /// max ||P(v₁∧…∧vₖ)|² − |v₁∧…∧vₖ|²|
    pub metric: f64,
}

impl CrossProduct {
    pub fn builtin(kind: VcpKind, n: usize) -> Result<Self> {
        let k = kind.fold(n).ok_or(VcpError::IllegalPairing { kind, n })?;
        let alpha = match kind {
            VcpKind::HodgeStar => Calibration::from_terms(n, n, &[((0..n).collect(), 1.0)])?,
            VcpKind::Complex => {
                let terms: Vec<_> = (0..n / 2).map(|j| (vec![2 * j, 2 * j + 1], 1.0)).collect();
                Calibration::from_terms(n, 2, &terms)?
            }
            VcpKind::G2 => associative_form(),
            VcpKind::Spin7 => cayley_form(),
        };
        debug_assert_eq!(alpha.degree(), k + 1);
        Self::from_calibration(kind, &alpha)
    }

    /// Reads off P from its form: P(e_J)ⁱ = α(e_J, eᵢ).
    pub fn from_calibration(kind: VcpKind, alpha: &Calibration) -> Result<Self> {
        let n = alpha.dim();
        let k = alpha.degree() - 1;
        let subsets = basis::subsets(n, k);
        let mut table = DMatrix::zeros(n, subsets.len());
        for (col, set) in subsets.iter().enumerate() {
            for i in 0..n {
                let mut idx = set.clone();
                idx.push(i);
                table[(i, col)] = alpha.component(&idx);
            }
        }
        let mut pairs = Vec::new();
        if k == 2 {
            for (col, set) in subsets.iter().enumerate() {
                for l in 0..n {
                    let c = table[(l, col)];
                    if c != 0.0 {
                        pairs.push((set[0], set[1], l, c));
                    }
                }
            }
        }
        Ok(Self { n, k, kind, table, pairs })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn fold(&self) -> usize {
        self.k
    }

    pub fn kind(&self) -> VcpKind {
        self.kind
    }

    /// The n × C(n,k) matrix of P as a linear map Λᵏℝⁿ → ℝⁿ.
    pub fn table(&self) -> &DMatrix<f64> {
        &self.table
    }

    /// P applied to a degree-k multivector.
    pub fn apply_multivector(&self, xi: &Multivector) -> Result<Vec<f64>> {
        if xi.dim() != self.n || xi.degree() != self.k {
            return Err(VcpError::ArgumentMismatch {
                expected: self.k,
                n: self.n,
                got: format!("degree {} on R^{}", xi.degree(), xi.dim()),
            });
        }
        let mut out = vec![0.0; self.n];
        for (col, c) in xi.coeffs().iter().enumerate() {
            if *c != 0.0 {
                for (o, t) in out.iter_mut().zip(self.table.column(col).iter()) {
                    *o += c * t;
                }
            }
        }
        Ok(out)
    }

    /// P(v₁ ∧ … ∧ vₖ).
    pub fn apply(&self, vectors: &[&[f64]]) -> Result<Vec<f64>> {
        if vectors.len() != self.k || vectors.iter().any(|v| v.len() != self.n) {
            return Err(VcpError::ArgumentMismatch {
                expected: self.k,
                n: self.n,
                got: format!("{:?}", vectors.iter().map(|v| v.len()).collect::<Vec<_>>()),
            });
        }
        self.apply_multivector(&Multivector::wedge_all(vectors)?)
    }

    /// Fast bilinear evaluation for fold 2; `out` must have length n.
    pub fn apply2_into(&self, a: &[f64], b: &[f64], out: &mut [f64]) {
        assert_eq!(self.k, 2, "apply2 requires a 2-fold product");
        out.iter_mut().for_each(|x| *x = 0.0);
        for &(i, j, l, c) in &self.pairs {
            out[l] += c * (a[i] * b[j] - a[j] * b[i]);
        }
    }

    /// The calibration α(v₁, …, v_{k+1}) = ⟨P(v₁∧…∧vₖ), v_{k+1}⟩.
    pub fn calibration(&self) -> Calibration {
        let sets = basis::subsets(self.n, self.k + 1);
        let mut comps = Vec::with_capacity(sets.len());
        for set in &sets {
            let (head, last) = set.split_at(self.k);
            let col = basis::rank(self.n, head).expect("valid subset");
            comps.push(self.table[(last[0], col)]);
        }
        Calibration::new(self.n, self.k + 1, comps).expect("component count matches")
    }

    /// Worst violations of the orthogonality and norm axioms over all basis
    /// k-tuples and `samples` seeded random unit tuples.
    pub fn axiom_defect(&self, samples: usize, seed: u64) -> AxiomDefect {
        let mut worst = AxiomDefect { orth: 0.0, metric: 0.0 };
        let mut check = |vectors: &[Vec<f64>]| {
            let refs: Vec<&[f64]> = vectors.iter().map(|v| v.as_slice()).collect();
            let xi = Multivector::wedge_all(&refs).expect("shapes checked");
            let p = self.apply_multivector(&xi).expect("shapes checked");
            for v in vectors {
                let d: f64 = p.iter().zip(v).map(|(a, b)| a * b).sum();
                worst.orth = worst.orth.max(d.abs());
            }
            let pn: f64 = p.iter().map(|x| x * x).sum();
            worst.metric = worst.metric.max((pn - xi.norm().powi(2)).abs());
        };
        for set in basis::subsets(self.n, self.k) {
            let tuple: Vec<Vec<f64>> = set.iter().map(|&i| unit(self.n, i)).collect();
            check(&tuple);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let tuple: Vec<Vec<f64>> = (0..self.k).map(|_| random_unit_vector(&mut rng, self.n)).collect();
            check(&tuple);
        }
        worst
    }
}

pub(crate) fn unit(n: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[i] = 1.0;
    v
}

fn associative_form() -> Calibration {
    let terms: Vec<_> = PHI_TERMS.iter().map(|(idx, c)| (idx.iter().map(|i| i - 1).collect(), *c)).collect();
    Calibration::from_terms(7, 3, &terms).expect("static table")
}

/// Φ = dθ∧φ + ∗φ on ℝ⁸ with θ at index 0 and φ on indices 1..=7.
fn cayley_form() -> Calibration {
    let mut terms = Vec::new();
    for (idx, c) in PHI_TERMS {
        // shift 1-based ℝ⁷ indices to slots 1..=7 of ℝ⁸
        terms.push((vec![0, idx[0], idx[1], idx[2]], c));
        let set: Vec<usize> = idx.iter().map(|i| i - 1).collect();
        let rest = basis::complement(7, &set);
        let (_, sign) = basis::merge(&set, &rest).expect("disjoint");
        terms.push((rest.iter().map(|i| i + 1).collect(), sign * c));
    }
    let alpha = Calibration::from_terms(8, 4, &terms).expect("static table");
    debug_assert_eq!(alpha.components().iter().filter(|c| **c != 0.0).count(), 14);
    debug_assert_eq!(binomial(8, 4), alpha.components().len());
    alpha
}
