use std::f64::consts::PI;

use crate::class::{FunctionClass, Labels};
use crate::error::{check_unit_open, param, Error, Result};

/// Largest net the constructor will build.
pub const MAX_NET_SIZE: usize = 4096;

/// Fibonacci-sphere covering constant: covering radius <= this / sqrt(n).
/// Measured near 2.70; the margin keeps the net conservative.
const FIBONACCI_COVER: f64 = 3.0;

/// Deterministic `radius`-net of the unit sphere in `R^dimension`.
///
/// Dimension 1 is the two-point sphere `{-1, +1}`; dimension 2 is a uniform
/// angular grid; dimension 3 a Fibonacci-sphere lattice.
pub fn sphere_net(dimension: usize, radius: f64) -> Result<Vec<Vec<f64>>> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(param("radius", format!("{radius} must be positive")));
    }
    let size = match dimension {
        1 => 2,
        2 => {
            let half_angle = (radius.min(2.0) / 2.0).asin();
            ((PI / (2.0 * half_angle)).ceil() as usize).max(2)
        }
        3 => ((FIBONACCI_COVER / radius).powi(2).ceil() as usize).max(4),
        _ => return Err(param("dimension", format!("{dimension} is not in {{1, 2, 3}}"))),
    };
    if size > MAX_NET_SIZE {
        return Err(Error::Capacity(format!(
            "a {radius}-net in dimension {dimension} needs {size} points (limit {MAX_NET_SIZE})"
        )));
    }
    Ok(match dimension {
        1 => vec![vec![-1.0], vec![1.0]],
        2 => (0..size)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / size as f64;
                vec![t.cos(), t.sin()]
            })
            .collect(),
        _ => {
            let golden = PI * (3.0 - 5f64.sqrt());
            (0..size)
                .map(|i| {
                    let z = 1.0 - (2 * i + 1) as f64 / size as f64;
                    let r = (1.0 - z * z).sqrt();
                    let t = golden * i as f64;
                    vec![r * t.cos(), r * t.sin(), z]
                })
                .collect()
        }
    })
}

/// Finite linear class on an `(alpha/2)`-net of the sphere.
///
/// Arms and weight vectors are the same net, and
/// `means[w][x] = (w·x + 1) / 2` maps inner products into `[0, 1]`. Gaps in
/// this class are half the gaps of the raw linear functions.
pub fn make_linear_net_class(dimension: usize, alpha: f64) -> Result<FunctionClass> {
    check_unit_open("alpha", alpha)?;
    let net = sphere_net(dimension, alpha / 2.0)?;
    let means = net
        .iter()
        .map(|w| {
            net.iter()
                .map(|x| {
                    let dot: f64 = w.iter().zip(x).map(|(a, b)| a * b).sum();
                    ((dot + 1.0) / 2.0).clamp(0.0, 1.0)
                })
                .collect()
        })
        .collect();
    let labels = Labels {
        class: Some(format!("linear-net-d{dimension}-a{alpha}")),
        functions: None,
        arms: None,
    };
    FunctionClass::new(means)?.with_labels(labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, UnitCircle, UnitSphere};

    fn covering_radius(net: &[Vec<f64>], probes: &[Vec<f64>]) -> f64 {
        probes
            .iter()
            .map(|q| {
                net.iter()
                    .map(|p| {
                        p.iter()
                            .zip(q)
                            .map(|(a, b)| (a - b).powi(2))
                            .sum::<f64>()
                            .sqrt()
                    })
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn nets_cover_the_sphere() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let circle: Vec<Vec<f64>> = (0..20_000)
            .map(|_| UnitCircle.sample(&mut rng).to_vec())
            .collect();
        let sphere: Vec<Vec<f64>> = (0..20_000)
            .map(|_| UnitSphere.sample(&mut rng).to_vec())
            .collect();
        for &r in &[0.5, 0.2, 0.1] {
            let net = sphere_net(2, r).unwrap();
            assert!(covering_radius(&net, &circle) <= r, "d=2 r={r}");
            let net = sphere_net(3, r).unwrap();
            assert!(covering_radius(&net, &sphere) <= r, "d=3 r={r}");
        }
        for p in sphere_net(3, 0.2).unwrap() {
            let norm: f64 = p.iter().map(|v| v * v).sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn one_dimensional_class() {
        let class = make_linear_net_class(1, 0.5).unwrap();
        assert_eq!(class.means(), &[vec![1.0, 0.0], vec![0.0, 1.0]]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(make_linear_net_class(4, 0.5).is_err());
        assert!(make_linear_net_class(2, 1.0).is_err());
        assert!(matches!(make_linear_net_class(3, 0.01), Err(Error::Capacity(_))));
    }
}
