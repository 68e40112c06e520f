//! Candidate generation over products of simplices.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// All compositions of `g` into `k` nonnegative parts, in lexicographic order.
pub(crate) fn compositions(g: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for v in 0..=left {
            cur.push(v);
            rec(left - v, k - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(g, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// `C(g + k - 1, k - 1)` saturating at `usize::MAX`.
pub(crate) fn composition_count(g: usize, k: usize) -> usize {
    let mut c: u128 = 1;
    for i in 1..k as u128 {
        c = c * (g as u128 + i) / i;
        if c > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    c as usize
}

/// Splitmix-style mixing of a base seed and a stream index.
pub(crate) fn stream_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Layout of the search space: per factor, its row count and row width.
#[derive(Clone, Debug)]
pub(crate) struct Shape {
    pub factors: Vec<(usize, usize)>,
}

impl Shape {
    pub fn blocks(&self) -> impl Iterator<Item = usize> + '_ {
        self.factors
            .iter()
            .flat_map(|&(rows, width)| std::iter::repeat(width).take(rows))
    }

    pub fn dimension(&self) -> usize {
        self.factors.iter().map(|&(r, w)| r * w).sum()
    }

    /// Number of full-lattice points, saturating.
    pub fn lattice_size(&self, g: usize) -> usize {
        self.blocks()
            .map(|k| composition_count(g, k))
            .fold(1usize, |a, b| a.saturating_mul(b))
    }
}

/// Unranks full-lattice points (last block varies fastest).
pub(crate) struct Lattice {
    g: usize,
    widths: Vec<usize>,
    tables: Vec<Vec<Vec<usize>>>,
}

impl Lattice {
    pub fn new(shape: &Shape, g: usize) -> Self {
        let widths: Vec<usize> = shape.blocks().collect();
        let max_k = widths.iter().copied().max().unwrap_or(1);
        let tables = (0..=max_k).map(|k| if k == 0 { Vec::new() } else { compositions(g, k) }).collect();
        Self { g, widths, tables }
    }

    pub fn point(&self, mut index: usize) -> Vec<f64> {
        let mut blocks: Vec<&Vec<usize>> = Vec::with_capacity(self.widths.len());
        for &k in self.widths.iter().rev() {
            let t = &self.tables[k];
            blocks.push(&t[index % t.len()]);
            index /= t.len();
        }
        blocks
            .into_iter()
            .rev()
            .flat_map(|c| c.iter().map(|&v| v as f64 / self.g as f64))
            .collect()
    }
}

fn random_lattice_row(rng: &mut ChaCha8Rng, g: usize, k: usize) -> Vec<f64> {
    // Uniform random composition via stars and bars.
    let mut cuts: Vec<usize> = (0..k - 1).map(|_| rng.gen_range(0..=g)).collect();
    cuts.sort_unstable();
    let mut prev = 0;
    let mut row = Vec::with_capacity(k);
    for c in cuts {
        row.push((c - prev) as f64 / g as f64);
        prev = c;
    }
    row.push((g - prev) as f64 / g as f64);
    row
}

/// Structured random point: per factor, either every row shares one lattice
/// point, every row is a random vertex, or every row is an independent
/// lattice point.
pub(crate) fn structured_sample(shape: &Shape, g: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(shape.dimension());
    for &(rows, k) in &shape.factors {
        match rng.gen_range(0..3) {
            0 => {
                let row = random_lattice_row(&mut rng, g, k);
                for _ in 0..rows {
                    out.extend_from_slice(&row);
                }
            }
            1 => {
                for _ in 0..rows {
                    let v = rng.gen_range(0..k);
                    out.extend((0..k).map(|i| if i == v { 1.0 } else { 0.0 }));
                }
            }
            _ => {
                for _ in 0..rows {
                    out.extend(random_lattice_row(&mut rng, g, k));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_counts_match_enumeration() {
        for g in 1..6 {
            for k in 1..5 {
                assert_eq!(compositions(g, k).len(), composition_count(g, k));
            }
        }
        assert_eq!(composition_count(10, 2), 11);
    }

    #[test]
    fn lattice_unranking_is_a_bijection() {
        let shape = Shape {
            factors: vec![(1, 2), (2, 3)],
        };
        let lat = Lattice::new(&shape, 2);
        let n = shape.lattice_size(2);
        assert_eq!(n, 3 * 6 * 6);
        let mut seen = std::collections::BTreeSet::new();
        for i in 0..n {
            let p = lat.point(i);
            let key: Vec<i64> = p.iter().map(|v| (v * 2.0).round() as i64).collect();
            assert!(seen.insert(key));
        }
    }

    #[test]
    fn samples_are_points_of_the_product_simplex() {
        let shape = Shape {
            factors: vec![(3, 4), (1, 2)],
        };
        for s in 0..50 {
            let p = structured_sample(&shape, 10, stream_seed(7, s));
            assert_eq!(p.len(), 14);
            for block in p[..12].chunks(4).chain(p[12..].chunks(2)) {
                assert!((block.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                assert!(block.iter().all(|&v| v >= 0.0));
            }
        }
    }
}
