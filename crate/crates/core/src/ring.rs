//! Ring contexts: variables, coefficient field, monomial order, and an
//! optional quotient ideal.
//!
//! A context describes the ambient ring `k[params, space]` (or its quotient
//! `O_X = O/(F)`), together with the order every polynomial attached to it is
//! sorted by. Parameters come first in the variable numbering, space
//! variables last. Contexts are immutable; "modifying" builders return a new
//! context, and polynomials are re-sorted when they migrate.
//!
//! `dim_d` is the declared dimension of the fiber germ: for a plain ring it
//! is the number of space variables, and attaching a quotient with `r`
//! equations lowers it to `n - r` (the complete-intersection convention used
//! throughout; it can be overridden).

use crate::monomial::Monomial;
use crate::order::{ModuleExt, MonomialOrder};
use crate::poly::Polynomial;
use crate::scalar::{Field, Scalar};
use std::fmt;
use std::sync::Arc;

pub type Ctx = Arc<RingContext>;

/// Raw term data for quotient generators, kept free of context back-references.
pub type PolyData = Vec<(Monomial, Scalar)>;

#[derive(Clone, Debug, PartialEq)]
pub struct RingContext {
    param_vars: Vec<String>,
    space_vars: Vec<String>,
    field: Field,
    order: MonomialOrder,
    module_ext: ModuleExt,
    dim_d: usize,
    quotient: Vec<PolyData>,
}

impl RingContext {
    pub fn new(
        space_vars: &[&str],
        param_vars: &[&str],
        field: Field,
        order: MonomialOrder,
    ) -> Ctx {
        let ctx = RingContext {
            param_vars: param_vars.iter().map(|s| s.to_string()).collect(),
            space_vars: space_vars.iter().map(|s| s.to_string()).collect(),
            field,
            order,
            module_ext: ModuleExt::Top,
            dim_d: space_vars.len(),
            quotient: Vec::new(),
        };
        ctx.validate();
        Arc::new(ctx)
    }

    fn validate(&self) {
        let mut names: Vec<&String> = self.param_vars.iter().chain(&self.space_vars).collect();
        names.sort();
        names.dedup();
        assert_eq!(
            names.len(),
            self.param_vars.len() + self.space_vars.len(),
            "duplicate variable names"
        );
        if let MonomialOrder::Weighted(w) = &self.order {
            assert_eq!(w.len(), self.nvars(), "weight vector length mismatch");
            assert!(w.iter().all(|&x| x >= 1), "weights must be positive");
        }
        if let MonomialOrder::EliminationBlock(s) = self.order {
            assert!(s <= self.nvars(), "elimination split out of range");
        }
    }

    /// Shorthand for a plain local ring in the given space variables.
    pub fn local(space_vars: &[&str]) -> Ctx {
        Self::new(space_vars, &[], Field::Rat, MonomialOrder::LocalDegrevlex)
    }

    /// Shorthand for a plain global polynomial ring.
    pub fn global(space_vars: &[&str]) -> Ctx {
        Self::new(space_vars, &[], Field::Rat, MonomialOrder::GlobalDegrevlex)
    }

    pub fn nvars(&self) -> usize {
        self.param_vars.len() + self.space_vars.len()
    }

    pub fn nparams(&self) -> usize {
        self.param_vars.len()
    }

    pub fn nspace(&self) -> usize {
        self.space_vars.len()
    }

    /// Index range of the space variables in the combined numbering.
    pub fn space_range(&self) -> std::ops::Range<usize> {
        self.param_vars.len()..self.nvars()
    }

    pub fn var_name(&self, i: usize) -> &str {
        if i < self.param_vars.len() {
            &self.param_vars[i]
        } else {
            &self.space_vars[i - self.param_vars.len()]
        }
    }

    pub fn var_names(&self) -> Vec<String> {
        (0..self.nvars()).map(|i| self.var_name(i).to_string()).collect()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        (0..self.nvars()).find(|&i| self.var_name(i) == name)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn module_ext(&self) -> ModuleExt {
        self.module_ext
    }

    pub fn dim_d(&self) -> usize {
        self.dim_d
    }

    pub fn quotient_data(&self) -> &[PolyData] {
        &self.quotient
    }

    pub fn has_quotient(&self) -> bool {
        !self.quotient.is_empty()
    }
}

/// Builder-style derivations. All of these return a fresh context; use
/// [`Polynomial::into_ctx`] to migrate attached values.
pub trait CtxExt {
    fn with_order(&self, order: MonomialOrder) -> Ctx;
    fn with_module_ext(&self, ext: ModuleExt) -> Ctx;
    fn with_dim(&self, d: usize) -> Ctx;
    fn with_quotient(&self, gens: &[Polynomial]) -> Ctx;
    fn without_quotient(&self) -> Ctx;
    fn with_permuted_vars(&self, perm: &[usize], order: MonomialOrder) -> Ctx;
    fn quotient_polys(&self) -> Vec<Polynomial>;
    fn compatible(&self, other: &Ctx) -> bool;
}

impl CtxExt for Ctx {
    fn with_order(&self, order: MonomialOrder) -> Ctx {
        let mut c = (**self).clone();
        c.order = order;
        c.validate();
        Arc::new(c)
    }

    fn with_module_ext(&self, ext: ModuleExt) -> Ctx {
        let mut c = (**self).clone();
        c.module_ext = ext;
        Arc::new(c)
    }

    fn with_dim(&self, d: usize) -> Ctx {
        let mut c = (**self).clone();
        c.dim_d = d;
        Arc::new(c)
    }

    /// Attach quotient equations; `dim_d` drops by the number of equations
    /// (complete-intersection convention).
    fn with_quotient(&self, gens: &[Polynomial]) -> Ctx {
        let mut c = (**self).clone();
        for g in gens {
            assert!(g.ctx().compatible(self), "quotient generator from another context");
            c.quotient.push(g.terms().to_vec());
        }
        c.dim_d = self.nspace().saturating_sub(c.quotient.len());
        Arc::new(c)
    }

    fn without_quotient(&self) -> Ctx {
        let mut c = (**self).clone();
        c.quotient.clear();
        c.dim_d = c.space_vars.len();
        Arc::new(c)
    }

    /// Same ring with variables renumbered (`new index i` = `old perm[i]`)
    /// and a new order; used for elimination. Quotient data is permuted too.
    fn with_permuted_vars(&self, perm: &[usize], order: MonomialOrder) -> Ctx {
        assert_eq!(perm.len(), self.nvars());
        let names: Vec<String> = perm.iter().map(|&j| self.var_name(j).to_string()).collect();
        let quotient = self
            .quotient
            .iter()
            .map(|data| data.iter().map(|(m, c)| (m.permute(perm), c.clone())).collect())
            .collect();
        let c = RingContext {
            param_vars: Vec::new(),
            space_vars: names,
            field: self.field,
            order,
            module_ext: self.module_ext,
            dim_d: self.dim_d,
            quotient,
        };
        c.validate();
        Arc::new(c)
    }

    fn quotient_polys(&self) -> Vec<Polynomial> {
        self.quotient
            .iter()
            .map(|data| Polynomial::from_terms(self.clone(), data.clone()))
            .collect()
    }

    fn compatible(&self, other: &Ctx) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }
}

impl fmt::Display for RingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ring space {}", self.space_vars.join(","))?;
        if !self.param_vars.is_empty() {
            write!(f, " params {}", self.param_vars.join(","))?;
        }
        write!(f, " over {} order {}", self.field, self.order.name())?;
        if !self.quotient.is_empty() {
            write!(f, " quotient[{}]", self.quotient.len())?;
        }
        Ok(())
    }
}
