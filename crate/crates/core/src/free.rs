//! Elements of a finite free module over the polynomial ring: fixed-rank
//! column vectors of polynomials.

use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::ring::Ctx;
use crate::scalar::Scalar;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeElement {
    comps: Vec<Polynomial>,
}

impl FreeElement {
    pub fn new(comps: Vec<Polynomial>) -> Self {
        assert!(!comps.is_empty(), "free element needs at least one component");
        FreeElement { comps }
    }

    pub fn zero(ctx: Ctx, rank: usize) -> Self {
        FreeElement { comps: (0..rank).map(|_| Polynomial::zero(ctx.clone())).collect() }
    }

    /// `p` placed in component `i` of a rank-`rank` element.
    pub fn unit(ctx: Ctx, rank: usize, i: usize, p: Polynomial) -> Self {
        let mut e = FreeElement::zero(ctx, rank);
        e.comps[i] = p;
        e
    }

    pub fn from_ideal_gen(p: Polynomial) -> Self {
        FreeElement { comps: vec![p] }
    }

    pub fn rank(&self) -> usize {
        self.comps.len()
    }

    pub fn ctx(&self) -> &Ctx {
        self.comps[0].ctx()
    }

    pub fn comp(&self, i: usize) -> &Polynomial {
        &self.comps[i]
    }

    pub fn comps(&self) -> &[Polynomial] {
        &self.comps
    }

    pub fn into_comps(self) -> Vec<Polynomial> {
        self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|p| p.is_zero())
    }

    pub fn add(&self, other: &FreeElement) -> FreeElement {
        assert_eq!(self.rank(), other.rank());
        FreeElement {
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &FreeElement) -> FreeElement {
        assert_eq!(self.rank(), other.rank());
        FreeElement {
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn neg(&self) -> FreeElement {
        FreeElement { comps: self.comps.iter().map(|p| p.neg()).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> FreeElement {
        FreeElement { comps: self.comps.iter().map(|p| p.scale(c)).collect() }
    }

    pub fn mul_poly(&self, p: &Polynomial) -> FreeElement {
        FreeElement { comps: self.comps.iter().map(|q| q.mul(p)).collect() }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Scalar) -> FreeElement {
        FreeElement { comps: self.comps.iter().map(|q| q.mul_term(m, c)).collect() }
    }

    /// Re-attach every component to a compatible ring.
    pub fn into_ctx(&self, ctx: &Ctx) -> FreeElement {
        FreeElement { comps: self.comps.iter().map(|p| p.into_ctx(ctx)).collect() }
    }

    /// Keep only components in `range`, producing a lower-rank element.
    pub fn project(&self, range: std::ops::Range<usize>) -> FreeElement {
        FreeElement::new(self.comps[range].to_vec())
    }

    /// The largest total degree over all components (0 if zero).
    pub fn deg(&self) -> u32 {
        self.comps.iter().map(|p| p.deg()).max().unwrap_or(0)
    }
}

impl fmt::Display for FreeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.comps.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}
