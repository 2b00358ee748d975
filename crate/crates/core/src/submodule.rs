//! A finitely generated submodule of a free module `O^rank`, carrying its
//! ring context and a lazily computed standard basis.

use crate::free::FreeElement;
use crate::gb::{ColengthError, GBasis};
use crate::poly::Polynomial;
use crate::ring::Ctx;
use std::sync::OnceLock;

#[derive(Clone, Debug)]
pub struct Submodule {
    ctx: Ctx,
    rank: usize,
    gens: Vec<FreeElement>,
    basis: OnceLock<GBasis>,
    grank: OnceLock<usize>,
}

impl Submodule {
    pub fn new(ctx: Ctx, rank: usize, gens: Vec<FreeElement>) -> Submodule {
        assert!(rank >= 1, "rank must be positive");
        for g in &gens {
            assert_eq!(g.rank(), rank, "generator rank mismatch");
        }
        Submodule { ctx, rank, gens, basis: OnceLock::new(), grank: OnceLock::new() }
    }

    pub fn ideal(ctx: Ctx, gens: Vec<Polynomial>) -> Submodule {
        let gens = gens.into_iter().map(FreeElement::from_ideal_gen).collect();
        Submodule::new(ctx, 1, gens)
    }

    pub fn zero(ctx: Ctx, rank: usize) -> Submodule {
        Submodule::new(ctx, rank, Vec::new())
    }

    /// The whole free module `O^rank`.
    pub fn full(ctx: Ctx, rank: usize) -> Submodule {
        let gens = (0..rank)
            .map(|j| FreeElement::unit(ctx.clone(), rank, j, Polynomial::one(ctx.clone())))
            .collect();
        Submodule::new(ctx, rank, gens)
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gens(&self) -> &[FreeElement] {
        &self.gens
    }

    pub fn ngens(&self) -> usize {
        self.gens.len()
    }

    /// Generator matrix: `rank` rows by `ngens` columns.
    pub fn matrix(&self) -> Vec<Vec<Polynomial>> {
        (0..self.rank)
            .map(|i| self.gens.iter().map(|g| g.comp(i).clone()).collect())
            .collect()
    }

    pub fn basis(&self) -> &GBasis {
        self.basis.get_or_init(|| GBasis::new(&self.ctx, self.rank, &self.gens))
    }

    pub fn contains(&self, fe: &FreeElement) -> bool {
        self.basis().contains(fe)
    }

    pub fn contains_module(&self, other: &Submodule) -> bool {
        assert_eq!(self.rank, other.rank, "rank mismatch");
        other.gens.iter().all(|g| self.contains(g))
    }

    pub fn module_eq(&self, other: &Submodule) -> bool {
        self.contains_module(other) && other.contains_module(self)
    }

    /// Vector-space dimension of `O^rank` modulo this submodule (and the
    /// context's quotient relations).
    pub fn colength(&self, budget: u64) -> Result<u64, ColengthError> {
        self.basis().colength(budget)
    }

    /// Concatenated generators: the submodule sum.
    pub fn sum(&self, other: &Submodule) -> Submodule {
        assert_eq!(self.rank, other.rank, "rank mismatch");
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Submodule::new(self.ctx.clone(), self.rank, gens)
    }

    pub fn with_extra_gens(&self, extra: &[FreeElement]) -> Submodule {
        let mut gens = self.gens.clone();
        gens.extend(extra.iter().cloned());
        Submodule::new(self.ctx.clone(), self.rank, gens)
    }

    /// Same generators attached to a compatible context (e.g. a different
    /// order or module extension); caches reset.
    pub fn with_ctx(&self, ctx: &Ctx) -> Submodule {
        let gens = self.gens.iter().map(|g| g.into_ctx(ctx)).collect();
        Submodule::new(ctx.clone(), self.rank, gens)
    }

    /// Largest `t` such that some `t×t` minor of the generator matrix is
    /// nonzero in the quotient ring. Cached after the first call.
    pub fn generic_rank(&self) -> usize {
        *self.grank.get_or_init(|| crate::modops::generic_rank_of(self))
    }
}
