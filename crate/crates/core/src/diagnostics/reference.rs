//! Independent uniform-sample oracles (not MCMC), used as ground truth in
//! tests and reference curves.

use crate::rng::RandomStream;

/// Uniform point in the unit cube by direct per-coordinate draws.
pub fn uniform_cube(stream: &mut RandomStream, n: usize) -> Vec<f64> {
    (0..n).map(|_| stream.uniform01()).collect()
}

/// Uniform point of the standard simplex in `R^{n+1}` by normalized
/// exponential spacings.
pub fn uniform_simplex(stream: &mut RandomStream, n: usize) -> Vec<f64> {
    let mut e: Vec<f64> = (0..=n).map(|_| -stream.uniform01().ln()).collect();
    let sum: f64 = e.iter().sum();
    for v in e.iter_mut() {
        *v /= sum;
    }
    e
}

/// Uniform point in a ball: uniform direction scaled by `radius * U^{1/n}`.
pub fn uniform_ball(stream: &mut RandomStream, center: &[f64], radius: f64) -> Vec<f64> {
    let n = center.len();
    let d = stream.unit_direction(n).expect("dimension >= 1");
    let r = radius * stream.uniform01().powf(1.0 / n as f64);
    center.iter().zip(&d).map(|(c, di)| c + r * di).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_oracle_on_hyperplane() {
        let mut s = RandomStream::new(2);
        for _ in 0..100 {
            let p = uniform_simplex(&mut s, 10);
            assert_eq!(p.len(), 11);
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(p.iter().all(|&x| x > 0.0));
        }
    }

    #[test]
    fn ball_oracle_inside() {
        let mut s = RandomStream::new(3);
        let c = [1.0, -2.0, 0.5];
        for _ in 0..1000 {
            let p = uniform_ball(&mut s, &c, 2.0);
            assert!(crate::linalg::dist(&p, &c) <= 2.0);
        }
    }
}
