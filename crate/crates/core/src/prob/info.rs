//! Entropy and conditional mutual information in bits.

use std::collections::HashMap;

use super::{advance, Alphabet, JointDistribution};
use crate::error::{Error, Result};

const DENSE_LIMIT: usize = 1 << 22;

#[inline]
fn neg_xlogx(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

/// Read-only view over a joint's support that memoizes subset entropies.
///
/// Subsets are bitmasks over the joint's variable positions, so a joint may
/// hold at most 64 variables.
pub struct InfoView<'a> {
    joint: &'a JointDistribution,
    digits: Vec<u32>,
    probs: Vec<f64>,
    cache: HashMap<u64, f64>,
}

impl<'a> InfoView<'a> {
    pub fn new(joint: &'a JointDistribution) -> Self {
        let vars = joint.variables();
        assert!(vars.len() <= 64, "at most 64 variables per joint");
        let mut digits = Vec::new();
        let mut probs = Vec::new();
        let mut cur = vec![0usize; vars.len()];
        for &p in joint.probabilities() {
            if p > 0.0 {
                digits.extend(cur.iter().map(|&d| d as u32));
                probs.push(p);
            }
            advance(vars, &mut cur);
        }
        Self {
            joint,
            digits,
            probs,
            cache: HashMap::new(),
        }
    }

    pub fn variables(&self) -> &[Alphabet] {
        self.joint.variables()
    }

    /// Bitmask of the named variables; duplicates are an error.
    pub fn mask(&self, names: &[&str]) -> Result<u64> {
        let mut m = 0u64;
        for n in names {
            let bit = 1u64 << self.joint.position(n)?;
            if m & bit != 0 {
                return Err(Error::Name(format!("{n} listed twice")));
            }
            m |= bit;
        }
        Ok(m)
    }

    /// Joint entropy `H(vars in mask)`.
    pub fn entropy_mask(&mut self, mask: u64) -> f64 {
        if mask == 0 {
            return 0.0;
        }
        if let Some(&h) = self.cache.get(&mask) {
            return h;
        }
        let vars = self.joint.variables();
        let n = vars.len();
        let sel: Vec<(usize, usize)> = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| (i, vars[i].size()))
            .collect();
        let total: usize = sel.iter().map(|&(_, s)| s).product();
        let key = |c: usize| {
            let row = &self.digits[c * n..(c + 1) * n];
            sel.iter().fold(0usize, |acc, &(i, s)| acc * s + row[i] as usize)
        };
        let h = if total <= DENSE_LIMIT {
            let mut acc = vec![0.0; total];
            for c in 0..self.probs.len() {
                acc[key(c)] += self.probs[c];
            }
            acc.into_iter().map(neg_xlogx).sum()
        } else {
            let mut acc: HashMap<usize, f64> = HashMap::new();
            for c in 0..self.probs.len() {
                *acc.entry(key(c)).or_default() += self.probs[c];
            }
            acc.into_values().map(neg_xlogx).sum()
        };
        self.cache.insert(mask, h);
        h
    }

    /// `I(A;B|C)` from disjoint masks.
    pub fn mi_masks(&mut self, a: u64, b: u64, c: u64) -> f64 {
        if a == 0 || b == 0 {
            return 0.0;
        }
        self.entropy_mask(a | c) + self.entropy_mask(b | c)
            - self.entropy_mask(a | b | c)
            - self.entropy_mask(c)
    }

    /// `H(A|C)`; `A` must be nonempty and disjoint from `C`.
    pub fn entropy(&mut self, a: &[&str], given: &[&str]) -> Result<f64> {
        if a.is_empty() {
            return Err(Error::Name("entropy of an empty set".into()));
        }
        let (ma, mc) = (self.mask(a)?, self.mask(given)?);
        if ma & mc != 0 {
            return Err(Error::Name("entropy arguments overlap".into()));
        }
        Ok(self.entropy_mask(ma | mc) - self.entropy_mask(mc))
    }

    /// `I(A;B|C)` for pairwise disjoint name sets.
    pub fn mutual_information(&mut self, a: &[&str], b: &[&str], given: &[&str]) -> Result<f64> {
        let (ma, mb, mc) = (self.mask(a)?, self.mask(b)?, self.mask(given)?);
        if ma & mb != 0 || ma & mc != 0 || mb & mc != 0 {
            return Err(Error::Name("mutual information arguments overlap".into()));
        }
        Ok(self.mi_masks(ma, mb, mc))
    }

    /// Shorthand taking whitespace-separated name lists, e.g. `mi("X X1", "Y", "U")`.
    pub fn mi(&mut self, a: &str, b: &str, given: &str) -> Result<f64> {
        let a: Vec<&str> = a.split_whitespace().collect();
        let b: Vec<&str> = b.split_whitespace().collect();
        let c: Vec<&str> = given.split_whitespace().collect();
        self.mutual_information(&a, &b, &c)
    }
}

/// `H(A|C)` in bits.
pub fn entropy(joint: &JointDistribution, a: &[&str], given: &[&str]) -> Result<f64> {
    InfoView::new(joint).entropy(a, given)
}

/// `I(A;B|C)` in bits.
pub fn mutual_information(
    joint: &JointDistribution,
    a: &[&str],
    b: &[&str],
    given: &[&str],
) -> Result<f64> {
    InfoView::new(joint).mutual_information(a, b, given)
}
