use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{domain, Result};

/// The generator for replicate `index` of a run seeded with `seed`.
///
/// Every replicate owns a separate ChaCha stream, so results do not depend on
/// how replicates are scheduled.
pub fn replicate_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// `n` independent uniform points on `S^{d-1}`, drawn from replicate
/// stream 0 of `seed`.
pub fn sample_sphere(n: usize, d: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    if n == 0 {
        return domain("need at least one point");
    }
    if d < 2 {
        return domain(format!("dimension must be at least 2, got d={d}"));
    }
    Ok(sample_with(&mut replicate_rng(seed, 0), n, d))
}

pub(crate) fn sample_with<R: Rng>(rng: &mut R, n: usize, d: usize) -> Vec<Vec<f64>> {
    (0..n).map(|_| unit_vector(rng, d)).collect()
}

fn unit_vector<R: Rng>(rng: &mut R, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-150 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_norm_and_determinism() {
        let a = sample_sphere(500, 6, 9).unwrap();
        for p in &a {
            let norm = p.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-12);
        }
        assert_eq!(a, sample_sphere(500, 6, 9).unwrap());
        assert_ne!(a, sample_sphere(500, 6, 10).unwrap());
    }

    #[test]
    fn streams_differ() {
        let a = sample_with(&mut replicate_rng(1, 0), 4, 3);
        let b = sample_with(&mut replicate_rng(1, 1), 4, 3);
        assert_ne!(a, b);
        assert!(sample_sphere(0, 3, 1).is_err());
        assert!(sample_sphere(3, 1, 1).is_err());
    }

    #[test]
    fn coordinate_means_vanish() {
        let n = 100_000;
        let pts = sample_sphere(n, 5, 2024).unwrap();
        for k in 0..5 {
            let mean = pts.iter().map(|p| p[k]).sum::<f64>() / n as f64;
            assert!(mean.abs() < 4.0 / (n as f64).sqrt(), "coordinate {k}: {mean}");
        }
    }
}
