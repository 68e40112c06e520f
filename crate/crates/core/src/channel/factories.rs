//! Concrete binary-state relay channels.

use super::names::*;
use super::{hamming, ChannelClass, RelayChannelSpec, StructureTags};
use crate::error::{Error, Result};
use crate::prob::{h2_inverse, Alphabet, ConditionalKernel, JointDistribution};

fn check_params(params: &[(&str, f64)]) -> Result<()> {
    for &(name, p) in params {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("{name} = {p} outside [0, 1]")));
        }
    }
    Ok(())
}

fn bern(p: f64, bit: usize) -> f64 {
    if bit == 1 {
        p
    } else {
        1.0 - p
    }
}

/// Unpacks a state index into its binary components, most significant first.
fn bits(s: usize, n: usize) -> Vec<usize> {
    (0..n).rev().map(|k| (s >> k) & 1).collect()
}

/// State law over independent binary components with `Sd` equal to component `sd_of`.
fn product_state_law(ps: &[f64], sd_of: usize) -> Result<JointDistribution> {
    let n = ps.len();
    JointDistribution::from_fn(
        vec![Alphabet::sized(S, 1 << n), Alphabet::binary(SD)],
        |t| {
            let b = bits(t[0], n);
            if t[1] != b[sd_of] {
                return 0.0;
            }
            b.iter().zip(ps).map(|(&bit, &p)| bern(p, bit)).product()
        },
    )
}

/// Kernel whose outputs are a deterministic function of `(x, x1, state bits)`.
fn deterministic_kernel(
    x: usize,
    ny: usize,
    ny1: usize,
    n_state_bits: usize,
    f: impl Fn(usize, usize, &[usize]) -> (usize, usize),
) -> Result<ConditionalKernel> {
    ConditionalKernel::deterministic(
        vec![
            Alphabet::sized(X, x),
            Alphabet::binary(X1),
            Alphabet::sized(S, 1 << n_state_bits),
        ],
        vec![Alphabet::sized(Y, ny), Alphabet::sized(Y1, ny1)],
        |g| {
            let (y, y1) = f(g[0], g[1], &bits(g[2], n_state_bits));
            vec![y, y1]
        },
    )
}

/// `Y1 = S1 X`, `Y = S2 X + S3 X1`, `Sd = S1`, Hamming distortion.
pub fn make_example1(ps1: f64, ps2: f64, ps3: f64) -> Result<RelayChannelSpec> {
    check_params(&[("ps1", ps1), ("ps2", ps2), ("ps3", ps3)])?;
    let kernel = deterministic_kernel(2, 3, 2, 3, |x, x1, s| (s[1] * x + s[2] * x1, s[0] * x))?;
    RelayChannelSpec::new(
        kernel,
        product_state_law(&[ps1, ps2, ps3], 0)?,
        hamming(2),
        StructureTags {
            classes: vec![ChannelClass::C2],
            s_components: Some(vec![2, 4]),
            ..Default::default()
        },
    )
}

/// `X = (Xr, Xd)`, `Y1 = S1 Xr`, `Y = S2 Xd + S3 X1`, `Sd = S2`.
pub fn make_example4(ps1: f64, ps2: f64, ps3: f64) -> Result<RelayChannelSpec> {
    check_params(&[("ps1", ps1), ("ps2", ps2), ("ps3", ps3)])?;
    let kernel = deterministic_kernel(4, 3, 2, 3, |x, x1, s| {
        let (xr, xd) = (x / 2, x % 2);
        (s[1] * xd + s[2] * x1, s[0] * xr)
    })?;
    RelayChannelSpec::new(
        kernel,
        product_state_law(&[ps1, ps2, ps3], 1)?,
        hamming(2),
        StructureTags {
            classes: vec![ChannelClass::C1, ChannelClass::C3],
            x_split: Some((2, 2)),
            s_components: Some(vec![2, 4]),
            ..Default::default()
        },
    )
}

/// `Y = (Yr, Yd)` with `Yr = X1 xor N`, `Yd = S X`; `Y1 = S X + X`; `Sd = S`.
/// `N ~ Bern(pn)` is internal to the kernel.
pub fn make_example5(ps: f64, pn: f64) -> Result<RelayChannelSpec> {
    check_params(&[("ps", ps), ("pn", pn)])?;
    let kernel = ConditionalKernel::from_fn(
        vec![Alphabet::binary(X), Alphabet::binary(X1), Alphabet::binary(S)],
        vec![Alphabet::sized(Y, 4), Alphabet::sized(Y1, 3)],
        |g, o| {
            let (x, x1, s) = (g[0], g[1], g[2]);
            let (yr, yd, y1) = (o[0] / 2, o[0] % 2, o[1]);
            if yd != s * x || y1 != s * x + x {
                return 0.0;
            }
            bern(pn, yr ^ x1)
        },
    )?;
    RelayChannelSpec::new(
        kernel,
        product_state_law(&[ps], 0)?,
        hamming(2),
        StructureTags {
            classes: vec![ChannelClass::C4],
            y_split: Some((2, 2)),
            relay_map: Some(vec![vec![0, 1], vec![1, 2]]),
            ..Default::default()
        },
    )
}

/// `X = (Xr, Xd)`, `Y = (Yr, Yd)`; `Y1 = S1 Xr`, `Yr = S2 X1`, `Yd = S3 Xd`; `Sd = S1`.
pub fn make_example6(ps1: f64, ps2: f64, ps3: f64) -> Result<RelayChannelSpec> {
    check_params(&[("ps1", ps1), ("ps2", ps2), ("ps3", ps3)])?;
    let kernel = deterministic_kernel(4, 4, 2, 3, |x, x1, s| {
        let (xr, xd) = (x / 2, x % 2);
        let (yr, yd) = (s[1] * x1, s[2] * xd);
        (yr * 2 + yd, s[0] * xr)
    })?;
    RelayChannelSpec::new(
        kernel,
        product_state_law(&[ps1, ps2, ps3], 0)?,
        hamming(2),
        StructureTags {
            classes: vec![ChannelClass::C2, ChannelClass::C5],
            x_split: Some((2, 2)),
            y_split: Some((2, 2)),
            s_components: Some(vec![2, 2, 2]),
            ..Default::default()
        },
    )
}

/// `Y1 = X1 xor S`, `Y = (X xor X1, X xor N)` with fair `S`, `H(N) = 1/2`, `Sd = S`.
pub fn make_appendix_c_counterexample() -> Result<RelayChannelSpec> {
    let pn = h2_inverse(0.5)?;
    let kernel = ConditionalKernel::from_fn(
        vec![Alphabet::binary(X), Alphabet::binary(X1), Alphabet::binary(S)],
        vec![Alphabet::sized(Y, 4), Alphabet::binary(Y1)],
        |g, o| {
            let (x, x1, s) = (g[0], g[1], g[2]);
            let (ya, yb, y1) = (o[0] / 2, o[0] % 2, o[1]);
            if y1 != x1 ^ s || ya != x ^ x1 {
                return 0.0;
            }
            bern(pn, yb ^ x)
        },
    )?;
    RelayChannelSpec::new(
        kernel,
        product_state_law(&[0.5], 0)?,
        hamming(2),
        StructureTags::default(),
    )
}

/// `Y1 = S1 X + S2 X1`, `Y = S3 X + S4 X1`, independent states, `Sd = S3`.
pub fn make_sensing_mac(ps1: f64, ps2: f64, ps3: f64, ps4: f64) -> Result<RelayChannelSpec> {
    check_params(&[("ps1", ps1), ("ps2", ps2), ("ps3", ps3), ("ps4", ps4)])?;
    let kernel = deterministic_kernel(2, 3, 3, 4, |x, x1, s| {
        (s[2] * x + s[3] * x1, s[0] * x + s[1] * x1)
    })?;
    RelayChannelSpec::new(
        kernel,
        product_state_law(&[ps1, ps2, ps3, ps4], 2)?,
        hamming(2),
        StructureTags {
            classes: vec![ChannelClass::C1],
            s_components: Some(vec![4, 4]),
            ..Default::default()
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_parameter_sets_pass_audits() {
        make_example1(0.9, 0.1, 0.9).unwrap();
        make_example4(0.4, 0.2, 0.6).unwrap();
        let e5 = make_example5(0.5, 0.2).unwrap();
        assert!(e5.tags().has(ChannelClass::C4));
        let e6 = make_example6(0.9, 0.8, 0.5).unwrap();
        assert!(e6.tags().has(ChannelClass::C5));
        make_appendix_c_counterexample().unwrap();
        make_sensing_mac(0.5, 0.5, 0.5, 0.5).unwrap();
    }

    #[test]
    fn example5_relay_map_holds_on_every_cell() {
        let spec = make_example5(0.5, 0.2).unwrap();
        let k = spec.kernel();
        let mut checked = 0;
        for r in 0..k.num_rows() {
            let x = r / 4;
            for (o, &p) in k.row(r).iter().enumerate() {
                if p > 0.0 {
                    let (yd, y1) = ((o / 3) % 2, o % 3);
                    assert_eq!(y1, yd + x);
                    checked += 1;
                }
            }
        }
        // 8 input rows, each with two noisy Yr outcomes.
        assert_eq!(checked, 16);
    }

    #[test]
    fn out_of_range_parameters_are_rejected() {
        assert!(matches!(make_example1(1.2, 0.1, 0.9), Err(Error::Domain(_))));
        assert!(matches!(make_example5(0.5, -0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn c4_audit_catches_a_wrong_map() {
        let spec = make_example5(0.5, 0.2).unwrap();
        let mut tags = spec.tags().clone();
        tags.relay_map = Some(vec![vec![0, 1], vec![2, 1]]);
        let err = RelayChannelSpec::new(
            spec.kernel().clone(),
            spec.state_law().clone(),
            hamming(2),
            tags,
        );
        assert!(matches!(err, Err(Error::Audit(_))));
    }

    #[test]
    fn counterexample_noise_has_half_bit_entropy() {
        let pn = h2_inverse(0.5).unwrap();
        assert!((crate::prob::h2(pn).unwrap() - 0.5).abs() < 1e-12);
    }
}
