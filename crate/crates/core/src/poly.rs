//! Sparse multivariate polynomials attached to a ring context.
//!
//! Terms are kept sorted in decreasing context order, so the leading term is
//! `terms[0]` and printing is canonical: two equal polynomials in compatible
//! contexts always serialize to the same string.

use crate::monomial::Monomial;
use crate::ring::{Ctx, CtxExt};
use crate::scalar::Scalar;
use std::collections::HashMap;
use std::fmt;

#[derive(Clone, Debug)]
pub struct Polynomial {
    ctx: Ctx,
    terms: Vec<(Monomial, Scalar)>,
}

impl Polynomial {
    pub fn zero(ctx: Ctx) -> Self {
        Polynomial { ctx, terms: Vec::new() }
    }

    pub fn one(ctx: Ctx) -> Self {
        let one = Scalar::one(ctx.field());
        Polynomial { terms: vec![(Monomial::one(ctx.nvars()), one)], ctx }
    }

    pub fn constant(ctx: Ctx, c: Scalar) -> Self {
        if c.is_zero() {
            return Polynomial::zero(ctx);
        }
        Polynomial { terms: vec![(Monomial::one(ctx.nvars()), c)], ctx }
    }

    pub fn var(ctx: Ctx, i: usize) -> Self {
        let one = Scalar::one(ctx.field());
        Polynomial { terms: vec![(Monomial::var(ctx.nvars(), i), one)], ctx }
    }

    /// Build from raw terms: merges duplicates, drops zeros, sorts.
    pub fn from_terms(ctx: Ctx, terms: Vec<(Monomial, Scalar)>) -> Self {
        let mut map: HashMap<Monomial, Scalar> = HashMap::with_capacity(terms.len());
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), ctx.nvars());
            match map.entry(m) {
                std::collections::hash_map::Entry::Occupied(mut e) => {
                    let s = e.get().add(&c);
                    if s.is_zero() {
                        e.remove();
                    } else {
                        *e.get_mut() = s;
                    }
                }
                std::collections::hash_map::Entry::Vacant(e) => {
                    if !c.is_zero() {
                        e.insert(c);
                    }
                }
            }
        }
        let mut terms: Vec<(Monomial, Scalar)> = map.into_iter().collect();
        let order = ctx.order().clone();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Polynomial { ctx, terms }
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero constant (a unit of the local ring when the order is local).
    pub fn is_unit_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    pub fn lt(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.first().map(|(m, c)| (m, c))
    }

    /// Maximum total degree among terms (0 for the zero polynomial).
    pub fn deg(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.deg()).max().unwrap_or(0)
    }

    /// Minimum total degree among terms: the order of vanishing at 0.
    pub fn ord(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.deg()).min().unwrap_or(0)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        debug_assert!(self.ctx.compatible(&other.ctx), "context mismatch");
        let order = self.ctx.order().clone();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match order.cmp(&self.terms[i].0, &other.terms[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = self.terms[i].1.add(&other.terms[j].1);
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Polynomial { ctx: self.ctx.clone(), terms: out }
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.ctx.clone());
        }
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k.mul(c))).collect(),
        }
    }

    /// Multiply by a single term. Multiplying by a monomial preserves the
    /// term order, so no re-sorting happens.
    pub fn mul_term(&self, mono: &Monomial, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.ctx.clone());
        }
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.mul(mono), k.mul(c))).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        debug_assert!(self.ctx.compatible(&other.ctx), "context mismatch");
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(self.ctx.clone());
        }
        let mut acc: HashMap<Monomial, Scalar> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                let c = c1.mul(c2);
                match acc.entry(m) {
                    std::collections::hash_map::Entry::Occupied(mut e) => {
                        let s = e.get().add(&c);
                        if s.is_zero() {
                            e.remove();
                        } else {
                            *e.get_mut() = s;
                        }
                    }
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                }
            }
        }
        let mut terms: Vec<(Monomial, Scalar)> = acc.into_iter().collect();
        let order = self.ctx.order().clone();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Polynomial { ctx: self.ctx.clone(), terms }
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut out = Polynomial::one(self.ctx.clone());
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Divide every coefficient so the leading coefficient becomes 1.
    pub fn monic(&self) -> Polynomial {
        match self.lt() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Polynomial {
        let field = self.ctx.field();
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exp(i) > 0)
            .map(|(m, c)| {
                let e = m.exp(i);
                let mut exps = m.exps().to_vec();
                exps[i] -= 1;
                (Monomial::from_exps(&exps), c.mul(&Scalar::from_i64(field, e as i64)))
            })
            .collect();
        Polynomial::from_terms(self.ctx.clone(), terms)
    }

    /// Re-attach to a compatible ring (same variable count and field),
    /// re-sorting under the new order.
    pub fn into_ctx(&self, ctx: &Ctx) -> Polynomial {
        assert_eq!(self.ctx.nvars(), ctx.nvars(), "variable count mismatch");
        assert_eq!(self.ctx.field(), ctx.field(), "field mismatch");
        Polynomial::from_terms(ctx.clone(), self.terms.clone())
    }

    /// Rebuild with permuted variables (`new index i` = old `perm[i]`).
    pub fn permute_vars(&self, ctx: &Ctx, perm_inv: &[usize]) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.permute(perm_inv), c.clone()))
            .collect();
        Polynomial::from_terms(ctx.clone(), terms)
    }

    /// Substitute `map[i]` (a polynomial over `target`) for variable `i`.
    pub fn substitute(&self, target: &Ctx, map: &[Polynomial]) -> Polynomial {
        assert_eq!(map.len(), self.ctx.nvars(), "substitution map length mismatch");
        let mut powers: Vec<Vec<Polynomial>> =
            map.iter().map(|p| vec![Polynomial::one(target.clone()), p.clone()]).collect();
        let power = |i: usize, e: u32, pows: &mut Vec<Vec<Polynomial>>| -> Polynomial {
            while pows[i].len() <= e as usize {
                let next = pows[i].last().unwrap().mul(&map[i]);
                pows[i].push(next);
            }
            pows[i][e as usize].clone()
        };
        let mut out = Polynomial::zero(target.clone());
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(target.clone(), c.clone());
            for i in 0..map.len() {
                let e = m.exp(i);
                if e > 0 {
                    term = term.mul(&power(i, e, &mut powers));
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Evaluate at a rational point (full scalar substitution).
    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        let field = self.ctx.field();
        let mut acc = Scalar::zero(field);
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for i in 0..point.len() {
                for _ in 0..m.exp(i) {
                    v = v.mul(&point[i]);
                }
            }
            acc = acc.add(&v);
        }
        acc
    }

    /// Exact coordinate shift of the space variables: `x_i -> x_i + c_i`.
    /// Parameters are left untouched. `point` lists space coordinates only.
    pub fn translate_space(&self, point: &[Scalar]) -> Polynomial {
        assert_eq!(point.len(), self.ctx.nspace());
        let ctx = self.ctx.clone();
        let map: Vec<Polynomial> = (0..ctx.nvars())
            .map(|i| {
                let v = Polynomial::var(ctx.clone(), i);
                if i >= ctx.space_range().start {
                    v.add(&Polynomial::constant(ctx.clone(), point[i - ctx.space_range().start].clone()))
                } else {
                    v
                }
            })
            .collect();
        self.substitute(&ctx, &map)
    }
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.compatible(&other.ctx) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = self.ctx.var_names();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.signum() < 0;
            let cc = if neg { c.neg() } else { c.clone() };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{cc}")?;
            } else if cc.is_one() {
                write!(f, "{}", m.display(&names))?;
            } else {
                write!(f, "{}*{}", cc, m.display(&names))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingContext;

    fn ctx2() -> Ctx {
        RingContext::global(&["x", "y"])
    }

    #[test]
    fn arithmetic_and_display() {
        let ctx = ctx2();
        let x = Polynomial::var(ctx.clone(), 0);
        let y = Polynomial::var(ctx.clone(), 1);
        let p = x.mul(&x).add(&y.scale(&Scalar::from_ratio(ctx.field(), 3, 2)));
        assert_eq!(p.to_string(), "x^2 + 3/2*y");
        let q = p.sub(&p);
        assert!(q.is_zero());
        assert_eq!(q.to_string(), "0");
    }

    #[test]
    fn association_does_not_change_serialization() {
        let ctx = ctx2();
        let x = Polynomial::var(ctx.clone(), 0);
        let y = Polynomial::var(ctx.clone(), 1);
        let one = Polynomial::one(ctx.clone());
        let a = x.add(&y).add(&one);
        let b = one.add(&y.add(&x));
        assert_eq!(a, b);
        assert_eq!(a.to_string(), b.to_string());
    }

    #[test]
    fn leading_term_follows_context_order() {
        let global = ctx2();
        let x = Polynomial::var(global.clone(), 0);
        let p = x.add(&x.mul(&x)); // x + x^2
        assert_eq!(p.lt().unwrap().0.exps(), &[2, 0]);

        let local = RingContext::local(&["x", "y"]);
        let xl = Polynomial::var(local.clone(), 0);
        let pl = xl.add(&xl.mul(&xl));
        assert_eq!(pl.lt().unwrap().0.exps(), &[1, 0]);
    }

    #[test]
    fn derivative_leibniz_spot_check() {
        let ctx = ctx2();
        let x = Polynomial::var(ctx.clone(), 0);
        let y = Polynomial::var(ctx.clone(), 1);
        let p = x.mul(&x).mul(&y); // x^2 y
        let q = x.add(&y); // x + y
        let lhs = p.mul(&q).derivative(0);
        let rhs = p.derivative(0).mul(&q).add(&p.mul(&q.derivative(0)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn translate_shifts_exactly() {
        let ctx = ctx2();
        let x = Polynomial::var(ctx.clone(), 0);
        let p = x.mul(&x); // x^2
        let t = p.translate_space(&[Scalar::from_i64(ctx.field(), 1), Scalar::zero(ctx.field())]);
        // (x+1)^2 = x^2 + 2x + 1
        assert_eq!(t.to_string(), "x^2 + 2*x + 1");
    }

    #[test]
    fn eval_at_rational_point() {
        let ctx = ctx2();
        let x = Polynomial::var(ctx.clone(), 0);
        let y = Polynomial::var(ctx.clone(), 1);
        let p = x.mul(&x).sub(&y);
        let v = p.eval(&[Scalar::from_ratio(ctx.field(), 1, 2), Scalar::from_i64(ctx.field(), 3)]);
        assert_eq!(v, Scalar::from_ratio(ctx.field(), -11, 4));
    }
}
