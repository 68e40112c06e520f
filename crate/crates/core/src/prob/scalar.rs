//! Scalar entropy helpers on probability parameters.

use crate::error::{Error, Result};

/// Slack accepted on parameters that drift just outside `[0, 1]`.
const PARAM_SLACK: f64 = 1e-12;

fn unit(t: f64, what: &str) -> Result<f64> {
    if t.is_nan() || t < -PARAM_SLACK || t > 1.0 + PARAM_SLACK {
        return Err(Error::Domain(format!("{what} = {t} outside [0, 1]")));
    }
    Ok(t.clamp(0.0, 1.0))
}

fn nlog(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

/// Binary entropy in bits.
pub fn h2(t: f64) -> Result<f64> {
    let t = unit(t, "h2 argument")?;
    Ok(nlog(t) + nlog(1.0 - t))
}

/// Entropy of the three-point pmf `(p, q, 1 - p - q)`.
pub fn h3(p: f64, q: f64) -> Result<f64> {
    let p = unit(p, "h3 first argument")?;
    let q = unit(q, "h3 second argument")?;
    let r = unit(1.0 - p - q, "h3 remainder")?;
    Ok(nlog(p) + nlog(q) + nlog(r))
}

/// Binary convolution `p1 (1 - p2) + (1 - p1) p2`.
pub fn conv(p1: f64, p2: f64) -> Result<f64> {
    let p1 = unit(p1, "conv first argument")?;
    let p2 = unit(p2, "conv second argument")?;
    Ok(p1 * (1.0 - p2) + (1.0 - p1) * p2)
}

/// Inverse of `h2` on `[0, 1/2]`, by bisection.
pub fn h2_inverse(h: f64) -> Result<f64> {
    let h = unit(h, "h2 value")?;
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h2(mid)? < h {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-17 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h2_endpoints_and_midpoint() {
        assert_eq!(h2(0.0).unwrap(), 0.0);
        assert_eq!(h2(1.0).unwrap(), 0.0);
        assert!((h2(0.5).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn h2_at_eleven_percent() {
        // -0.11 log2 0.11 - 0.89 log2 0.89
        let want = -(0.11f64 * 0.11f64.log2() + 0.89 * 0.89f64.log2());
        assert!((h2(0.11).unwrap() - want).abs() < 1e-15);
        assert!((h2(0.11).unwrap() - 0.49992).abs() < 1e-4);
    }

    #[test]
    fn h3_reference_value() {
        let want = -(0.2f64 * 0.2f64.log2() + 0.3 * 0.3f64.log2() + 0.5 * 0.5f64.log2());
        assert!((h3(0.2, 0.3).unwrap() - want).abs() < 1e-15);
        assert!((h3(0.2, 0.3).unwrap() - 1.4855).abs() < 1e-4);
    }

    #[test]
    fn conv_identities() {
        assert_eq!(conv(0.3, 0.0).unwrap(), 0.3);
        assert!((conv(0.3, 1.0).unwrap() - 0.7).abs() < 1e-15);
        assert!((conv(0.2, 0.5).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn inverse_of_half_bit() {
        let p = h2_inverse(0.5).unwrap();
        assert!((h2(p).unwrap() - 0.5).abs() < 1e-12);
        assert!((p - 0.110_028).abs() < 1e-6);
    }

    #[test]
    fn domain_violations() {
        assert!(h2(1.5).is_err());
        assert!(h2(-0.1).is_err());
        assert!(h3(0.7, 0.7).is_err());
        assert!(conv(f64::NAN, 0.1).is_err());
    }
}
