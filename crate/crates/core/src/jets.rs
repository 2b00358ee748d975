//! Truncated-jet linear algebra: quotient sizes measured without any
//! standard-basis machinery.
//!
//! Everything here reduces to sparse Gaussian elimination over the scalar
//! field on the finite-dimensional space of jets (polynomial vectors with
//! all terms of total degree at most `D`). It is deliberately independent of
//! the division-based engine so the two can cross-check each other.
//!
//! For a submodule `S` of `O^r` over the local ring at the origin, the
//! dimension of `O^r / (S + m^{D+1})` is computed for increasing `D`. Once
//! two consecutive dimensions agree, `m^{D+1} ⊆ S + m^{D+2}` forces
//! `m^{D+1} ⊆ S` (Nakayama), so the stabilized value is exactly the
//! colength. Quotient relations attached to the ring context are folded in
//! as extra generators in every component.

use crate::free::FreeElement;
use crate::monomial::{monomials_up_to, Monomial};
use crate::ring::{Ctx, CtxExt};
use crate::scalar::Scalar;
use std::collections::{BTreeMap, HashMap};

type SparseRow = Vec<(usize, Scalar)>;

/// Row-echelon accumulator over sparse rows (columns sorted ascending).
struct Echelon {
    pivots: BTreeMap<usize, SparseRow>,
}

impl Echelon {
    fn new() -> Self {
        Echelon { pivots: BTreeMap::new() }
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduce `row` by the stored pivots; the result has no pivot columns.
    fn reduce(&self, mut row: SparseRow) -> SparseRow {
        loop {
            let Some(&(lead, ref c)) = row.first() else { return row };
            let Some(pivot) = self.pivots.get(&lead) else { return row };
            let factor = c.clone();
            row = sub_scaled(&row, pivot, &factor);
        }
    }

    /// Insert after reduction; returns true when the rank grew.
    fn insert(&mut self, row: SparseRow) -> bool {
        let row = self.reduce(row);
        let Some((lead, c)) = row.first().cloned() else { return false };
        let inv = c.inv().expect("nonzero leading entry");
        let monic: SparseRow = row.into_iter().map(|(j, v)| (j, v.mul(&inv))).collect();
        self.pivots.insert(lead, monic);
        true
    }
}

/// `a - c·b` for sparse rows sorted by column (b is monic at its lead).
fn sub_scaled(a: &SparseRow, b: &SparseRow, c: &Scalar) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push((b[j].0, b[j].1.mul(c).neg()));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let v = a[i].1.sub(&b[j].1.mul(c));
                if !v.is_zero() {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    for (col, v) in &b[j..] {
        out.push((*col, v.mul(c).neg()));
    }
    out
}

/// Column bookkeeping for rank-`rank` jets of degree at most `deg`.
struct JetSpace {
    rank: usize,
    monos: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl JetSpace {
    fn new(nvars: usize, rank: usize, deg: u32) -> Self {
        let monos = monomials_up_to(nvars, deg);
        let index = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        JetSpace { rank, monos, index }
    }

    fn dim(&self) -> usize {
        self.rank * self.monos.len()
    }

    /// Sparse row of `e`, dropping terms above the jet degree when
    /// `truncate` is set; returns None if a term overflows otherwise.
    fn row_of(&self, e: &FreeElement, truncate: bool) -> Option<SparseRow> {
        let per = self.monos.len();
        let mut cols: Vec<(usize, Scalar)> = Vec::new();
        for (comp, p) in e.comps().iter().enumerate() {
            for (m, c) in p.terms() {
                match self.index.get(m) {
                    Some(&i) => cols.push((comp * per + i, c.clone())),
                    None => {
                        if !truncate {
                            return None;
                        }
                    }
                }
            }
        }
        cols.sort_by_key(|(j, _)| *j);
        Some(cols)
    }
}

/// Generators together with the ring's quotient relations placed in every
/// component, so quotient rings are handled uniformly.
fn effective_gens(ctx: &Ctx, gens: &[FreeElement], rank: usize) -> Vec<FreeElement> {
    let mut out: Vec<FreeElement> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    for q in ctx.quotient_polys() {
        for j in 0..rank {
            out.push(FreeElement::unit(ctx.clone(), rank, j, q.clone()));
        }
    }
    out
}

/// Echelon span of all monomial multiples of the generators inside the
/// degree-`deg` jet space (truncating terms beyond `deg`).
fn local_span(ctx: &Ctx, gens: &[FreeElement], jet: &JetSpace, deg: u32) -> Echelon {
    let mut ech = Echelon::new();
    let one = Scalar::one(ctx.field());
    for g in gens {
        let gord = g.comps().iter().filter(|p| !p.is_zero()).map(|p| p.ord()).min().unwrap_or(0);
        if gord > deg {
            continue;
        }
        for m in monomials_up_to(ctx.nvars(), deg - gord) {
            let mult = g.mul_term(&m, &one);
            if let Some(row) = jet.row_of(&mult, true) {
                if !row.is_empty() {
                    ech.insert(row);
                }
            }
        }
    }
    ech
}

fn local_dim_at(ctx: &Ctx, gens: &[FreeElement], rank: usize, deg: u32) -> usize {
    let jet = JetSpace::new(ctx.nvars(), rank, deg);
    let ech = local_span(ctx, gens, &jet, deg);
    jet.dim() - ech.rank()
}

/// Colength of the submodule of `O^r` generated by `gens` over the local
/// ring at the origin (with the context's quotient relations folded in).
/// Returns None when no two consecutive jet dimensions agree up to `dmax`,
/// i.e. when the colength is infinite or exceeds the budget.
pub fn local_colength(ctx: &Ctx, gens: &[FreeElement], rank: usize, dmax: u32) -> Option<usize> {
    let eff = effective_gens(ctx, gens, rank);
    let mut prev: Option<usize> = None;
    for deg in 0..=dmax {
        let dim = local_dim_at(ctx, &eff, rank, deg);
        if prev == Some(dim) {
            return Some(dim);
        }
        prev = Some(dim);
    }
    None
}

/// Membership of `elem` in the finite-colength submodule generated by
/// `gens`, over the local ring. None when the colength never stabilizes.
pub fn local_contains(
    ctx: &Ctx,
    elem: &FreeElement,
    gens: &[FreeElement],
    rank: usize,
    dmax: u32,
) -> Option<bool> {
    let eff = effective_gens(ctx, gens, rank);
    let mut prev: Option<(u32, usize)> = None;
    for deg in 0..=dmax {
        let dim = local_dim_at(ctx, &eff, rank, deg);
        if let Some((pdeg, pdim)) = prev {
            if pdim == dim {
                // Stabilized: the maximal-ideal power beyond `pdeg` lies in
                // the module, so membership is decided at jet level `pdeg`.
                let jet = JetSpace::new(ctx.nvars(), rank, pdeg);
                let ech = local_span(ctx, &eff, &jet, pdeg);
                let row = jet.row_of(elem, true).expect("truncated row");
                return Some(ech.reduce(row).is_empty());
            }
        }
        prev = Some((deg, dim));
    }
    None
}

/// Length of `N/M` for nested submodules `M ⊆ N` of `O^r` over the local
/// ring, by the difference of jet span ranks. The sequence of differences
/// increases monotonically to the true length. Because an early plateau of
/// a monotone sequence is not a proof, the value is only accepted after it
/// repeats three times past the largest generator degree; callers assert
/// the result against independently known values.
pub fn local_quotient_length(
    ctx: &Ctx,
    outer: &[FreeElement],
    inner: &[FreeElement],
    rank: usize,
    dmax: u32,
) -> Option<usize> {
    let eff_outer = effective_gens(ctx, outer, rank);
    let eff_inner = effective_gens(ctx, inner, rank);
    let settle = eff_outer
        .iter()
        .chain(&eff_inner)
        .map(|g| g.deg())
        .max()
        .unwrap_or(0);
    let mut run: Option<(usize, u32)> = None; // (value, consecutive count)
    for deg in 0..=dmax {
        let jet = JetSpace::new(ctx.nvars(), rank, deg);
        let ro = local_span(ctx, &eff_outer, &jet, deg).rank();
        let ri = local_span(ctx, &eff_inner, &jet, deg).rank();
        let diff = ro - ri;
        run = match run {
            Some((v, k)) if v == diff => Some((v, k + 1)),
            _ => Some((diff, 1)),
        };
        if let Some((v, k)) = run {
            if k >= 3 && deg >= settle {
                return Some(v);
            }
        }
    }
    None
}

/// Vector-space dimensions of `O^r/(S + terms of degree > D)` for the
/// polynomial ring (no localization): full multiples only, no truncation.
/// The sequence converges to the affine quotient dimension from above when
/// that dimension is finite; callers assert the tail against known values.
pub fn global_dim_sequence(ctx: &Ctx, gens: &[FreeElement], rank: usize, dmax: u32) -> Vec<usize> {
    let eff = effective_gens(ctx, gens, rank);
    let mut out = Vec::with_capacity(dmax as usize + 1);
    for deg in 0..=dmax {
        let jet = JetSpace::new(ctx.nvars(), rank, deg);
        let mut ech = Echelon::new();
        let one = Scalar::one(ctx.field());
        for g in &eff {
            let gd = g.deg();
            if gd > deg {
                continue;
            }
            for m in monomials_up_to(ctx.nvars(), deg - gd) {
                let mult = g.mul_term(&m, &one);
                if let Some(row) = jet.row_of(&mult, false) {
                    if !row.is_empty() {
                        ech.insert(row);
                    }
                }
            }
        }
        out.push(jet.dim() - ech.rank());
    }
    out
}
