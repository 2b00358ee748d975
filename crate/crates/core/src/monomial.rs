//! Monomials as exponent vectors with a cached total degree.
//!
//! Exponents are stored inline for up to 8 variables and spill to the heap
//! beyond that, which keeps the common germ computations allocation-light.

use smallvec::SmallVec;
use std::fmt;

/// An exponent vector `x_0^{a_0} ... x_{n-1}^{a_{n-1}}` with cached degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: SmallVec<[u32; 8]>,
    deg: u32,
}

impl Monomial {
    /// The monomial `1` in `n` variables.
    pub fn one(n: usize) -> Self {
        Monomial { exps: SmallVec::from_elem(0, n), deg: 0 }
    }

    /// The single variable `x_i`.
    pub fn var(n: usize, i: usize) -> Self {
        let mut exps = SmallVec::from_elem(0, n);
        exps[i] = 1;
        Monomial { exps, deg: 1 }
    }

    pub fn from_exps(exps: &[u32]) -> Self {
        let deg = exps.iter().sum();
        Monomial { exps: SmallVec::from_slice(exps), deg }
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn deg(&self) -> u32 {
        self.deg
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i]
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    /// Total degree over a subrange of variables.
    pub fn deg_range(&self, lo: usize, hi: usize) -> u32 {
        self.exps[lo..hi].iter().sum()
    }

    /// Weighted degree with the given positive weights.
    pub fn weighted_deg(&self, weights: &[u32]) -> u64 {
        self.exps.iter().zip(weights).map(|(e, w)| *e as u64 * *w as u64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        let exps: SmallVec<[u32; 8]> =
            self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect();
        Monomial { exps, deg: self.deg + other.deg }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.deg <= other.deg && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn div_into(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let exps: SmallVec<[u32; 8]> =
            other.exps.iter().zip(&self.exps).map(|(b, a)| b - a).collect();
        Monomial { exps, deg: other.deg - self.deg }.into()
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let exps: SmallVec<[u32; 8]> =
            self.exps.iter().zip(&other.exps).map(|(a, b)| (*a).max(*b)).collect();
        let deg = exps.iter().sum();
        Monomial { exps, deg }
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let exps: SmallVec<[u32; 8]> =
            self.exps.iter().zip(&other.exps).map(|(a, b)| (*a).min(*b)).collect();
        let deg = exps.iter().sum();
        Monomial { exps, deg }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Rebuild with the variables permuted: new exponent `i` is old `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Monomial {
        let exps: SmallVec<[u32; 8]> = perm.iter().map(|&j| self.exps[j]).collect();
        Monomial { exps, deg: self.deg }
    }

    /// Display against a list of variable names, e.g. `x^2*y`.
    pub fn display<'a>(&'a self, names: &'a [String]) -> MonomialDisplay<'a> {
        MonomialDisplay { mono: self, names }
    }
}

pub struct MonomialDisplay<'a> {
    mono: &'a Monomial,
    names: &'a [String],
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mono.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.mono.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{}", self.names[i])?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// All monomials in `nvars` variables of total degree exactly `d`,
/// in a fixed deterministic order (lexicographic on exponent tuples).
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; nvars];
    fill_degree(&mut out, &mut exps, 0, d);
    out
}

fn fill_degree(out: &mut Vec<Monomial>, exps: &mut [u32], i: usize, remaining: u32) {
    if i + 1 == exps.len() {
        exps[i] = remaining;
        out.push(Monomial::from_exps(exps));
        exps[i] = 0;
        return;
    }
    for e in (0..=remaining).rev() {
        exps[i] = e;
        fill_degree(out, exps, i + 1, remaining - e);
        exps[i] = 0;
    }
}

/// All monomials of total degree at most `d`, grouped by increasing degree.
pub fn monomials_up_to(nvars: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for k in 0..=d {
        out.extend(monomials_of_degree(nvars, k));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_is_cached_consistently() {
        let m = Monomial::from_exps(&[2, 0, 3]);
        assert_eq!(m.deg(), 5);
        let n = Monomial::var(3, 1);
        assert_eq!(m.mul(&n).deg(), 6);
        assert_eq!(m.mul(&n).exps(), &[2, 1, 3]);
    }

    #[test]
    fn division_and_lcm() {
        let a = Monomial::from_exps(&[1, 2]);
        let b = Monomial::from_exps(&[2, 2]);
        assert!(a.divides(&b));
        assert!(!b.divides(&a));
        assert_eq!(a.div_into(&b).unwrap().exps(), &[1, 0]);
        assert_eq!(a.lcm(&b).exps(), &[2, 2]);
        assert_eq!(a.gcd(&b).exps(), &[1, 2]);
    }

    #[test]
    fn enumeration_counts_match_binomials() {
        // #monomials of degree d in n vars = C(n+d-1, n-1)
        assert_eq!(monomials_of_degree(3, 4).len(), 15);
        assert_eq!(monomials_of_degree(2, 5).len(), 6);
        // #monomials of degree <= d in n vars = C(n+d, n)
        assert_eq!(monomials_up_to(3, 4).len(), 35);
        assert_eq!(monomials_up_to(1, 7).len(), 8);
        // deterministic and duplicate-free
        let ms = monomials_up_to(3, 3);
        let set: std::collections::HashSet<_> = ms.iter().cloned().collect();
        assert_eq!(set.len(), ms.len());
    }

    #[test]
    fn spills_past_eight_variables() {
        let exps: Vec<u32> = (0..12).map(|i| i as u32).collect();
        let m = Monomial::from_exps(&exps);
        assert_eq!(m.deg(), 66);
        assert_eq!(m.exp(11), 11);
    }
}
