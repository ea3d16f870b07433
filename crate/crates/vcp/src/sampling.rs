use rand::Rng;
use rand_distr::StandardNormal;

/// Uniform sample from the unit sphere of ℝⁿ.
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Haar-distributed orthonormal p-frame in ℝⁿ (modified Gram–Schmidt on
/// Gaussian columns).
pub fn random_orthonormal_frame<R: Rng + ?Sized>(rng: &mut R, n: usize, p: usize) -> Vec<Vec<f64>> {
    assert!(p <= n, "frame larger than ambient space");
    let mut frame: Vec<Vec<f64>> = Vec::with_capacity(p);
    while frame.len() < p {
        let mut v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        for _ in 0..2 {
            for e in &frame {
                let d: f64 = v.iter().zip(e).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(e).for_each(|(a, b)| *a -= d * b);
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            frame.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    frame
}
