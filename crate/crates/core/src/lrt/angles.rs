use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Tolerance for treating two folded angles as the same direction.
const SAME_DIRECTION: f64 = 1e-9;

/// `n` equally spaced angles over 360 degrees, starting at 0.
pub fn uniform_angles(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::param(format!("need at least 2 angles, got {n}")));
    }
    Ok((0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect())
}

/// The golden angle `pi (3 - sqrt 5)`, about 137.5 degrees.
pub fn golden_angle() -> f64 {
    PI * (3.0 - 5f64.sqrt())
}

/// `n` angles `start + k * golden_angle` reduced modulo `2 pi`, sorted.
pub fn golden_angles(n: usize, start: f64) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::param(format!("need at least 2 angles, got {n}")));
    }
    if !start.is_finite() {
        return Err(Error::param("start angle must be finite"));
    }
    let mut a: Vec<f64> = (0..n)
        .map(|k| (start + k as f64 * golden_angle()).rem_euclid(2.0 * PI))
        .collect();
    a.sort_by(f64::total_cmp);
    Ok(a)
}

/// Quadrature weights for back projection over a list of angles.
///
/// Directions `theta` and `theta + pi` see the same ray, so angles are folded
/// into `[0, pi)`. Each distinct folded direction receives half the sum of the
/// circular gaps to its neighbours, shared equally among the angles that fold
/// onto it. The weights sum to `pi`; for `n` uniform angles over 360 degrees
/// every weight is `pi / n`.
pub fn angle_weights(angles: &[f64]) -> Result<Vec<f64>> {
    if angles.len() < 2 {
        return Err(Error::param(format!(
            "need at least 2 angles for back projection, got {}",
            angles.len()
        )));
    }
    let mut folded: Vec<(f64, usize)> = angles
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let f = a.rem_euclid(PI);
            (if PI - f < SAME_DIRECTION { 0.0 } else { f }, k)
        })
        .collect();
    folded.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut groups: Vec<(f64, Vec<usize>)> = Vec::new();
    for (f, k) in folded {
        match groups.last_mut() {
            Some((g, members)) if f - *g < SAME_DIRECTION => members.push(k),
            _ => groups.push((f, vec![k])),
        }
    }
    if groups.len() < 2 {
        return Err(Error::param("all angles view the same direction"));
    }

    let m = groups.len();
    let mut w = vec![0.0; angles.len()];
    for g in 0..m {
        let prev = if g == 0 { groups[m - 1].0 - PI } else { groups[g - 1].0 };
        let next = if g + 1 == m { groups[0].0 + PI } else { groups[g + 1].0 };
        let weight = 0.5 * (next - prev);
        let members = &groups[g].1;
        for &k in members {
            w[k] = weight / members.len() as f64;
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn uniform_weights_are_half_step() {
        assert!(angle_weights(&uniform_angles(2).unwrap()).is_err());
        for n in [3usize, 4, 7, 200] {
            let a = uniform_angles(n).unwrap();
            let w = angle_weights(&a).unwrap();
            for v in &w {
                assert!((v - PI / n as f64).abs() < 1e-12, "n={n}: {v}");
            }
        }
    }

    #[test]
    fn golden_sequence() {
        let a = golden_angles(50, 0.0).unwrap();
        assert_eq!(a.len(), 50);
        assert!(a.windows(2).all(|p| p[0] < p[1]));
        assert!(a.iter().all(|&x| (0.0..2.0 * PI).contains(&x)));
        // Every member is k * golden angle mod 2 pi for some k < 50.
        for &x in &a {
            assert!((0..50).any(|k| {
                let r = (k as f64 * golden_angle()).rem_euclid(2.0 * PI);
                (r - x).abs() < 1e-12
            }));
        }
        assert!((golden_angle().to_degrees() - 137.50776405).abs() < 1e-6);
    }

    #[test]
    fn degenerate_lists_rejected() {
        assert!(angle_weights(&[0.3]).is_err());
        assert!(angle_weights(&[0.3, 0.3 + PI]).is_err());
        assert!(uniform_angles(1).is_err());
    }

    proptest! {
        #[test]
        fn weights_sum_to_pi(mut a in prop::collection::vec(0.0f64..std::f64::consts::TAU, 2..40)) {
            a.sort_by(f64::total_cmp);
            a.dedup();
            prop_assume!(a.len() >= 2);
            if let Ok(w) = angle_weights(&a) {
                let s: f64 = w.iter().sum();
                prop_assert!((s - PI).abs() < 1e-9);
                prop_assert!(w.iter().all(|&v| v >= 0.0));
            }
        }
    }
}
