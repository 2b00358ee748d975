//! Standard bases for submodules of free modules, with one driver for both
//! settings: Buchberger completion with full reduction for global orders,
//! and Mora's ecart-controlled weak normal form for local orders.
//!
//! Quotient relations attached to the ring context are folded in as extra
//! generators in every component, so all answers are relative to the
//! quotient ring. Bases are interreduced to a canonical form: minimal
//! leads, monic, sorted. Under a local order with finite colength, tails
//! are additionally truncated above the staircase (every term of degree
//! beyond the largest standard monomial lies in the module, so dropping it
//! changes nothing) and then fully tail-reduced, which makes the local
//! canonical form unique as well.

use crate::free::FreeElement;
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::ring::{Ctx, CtxExt};
use crate::scalar::Scalar;
use std::cmp::Ordering;
use thiserror::Error;

/// One term of a free-module element: coefficient, monomial, component.
#[derive(Clone, Debug, PartialEq)]
pub struct MTerm {
    pub comp: usize,
    pub mono: Monomial,
    pub coef: Scalar,
}

/// Flat free-module element with terms sorted in decreasing module order.
#[derive(Clone, Debug, PartialEq)]
pub struct MElem {
    terms: Vec<MTerm>,
}

fn term_cmp(ctx: &Ctx, a: &MTerm, b: &MTerm) -> Ordering {
    ctx.module_ext().cmp(ctx.order(), &a.mono, a.comp, &b.mono, b.comp)
}

impl MElem {
    pub fn from_free(ctx: &Ctx, fe: &FreeElement) -> MElem {
        let mut terms: Vec<MTerm> = Vec::new();
        for (comp, p) in fe.comps().iter().enumerate() {
            for (m, c) in p.terms() {
                terms.push(MTerm { comp, mono: m.clone(), coef: c.clone() });
            }
        }
        terms.sort_by(|a, b| term_cmp(ctx, b, a));
        MElem { terms }
    }

    pub fn to_free(&self, ctx: &Ctx, rank: usize) -> FreeElement {
        let mut comps: Vec<Vec<(Monomial, Scalar)>> = vec![Vec::new(); rank];
        for t in &self.terms {
            comps[t.comp].push((t.mono.clone(), t.coef.clone()));
        }
        FreeElement::new(
            comps
                .into_iter()
                .map(|ts| Polynomial::from_terms(ctx.clone(), ts))
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> &MTerm {
        &self.terms[0]
    }

    pub fn terms(&self) -> &[MTerm] {
        &self.terms
    }

    /// Largest total degree among terms.
    fn deg(&self) -> u32 {
        self.terms.iter().map(|t| t.mono.deg()).max().unwrap_or(0)
    }

    /// Degree excess of the tail over the lead.
    fn ecart(&self) -> u32 {
        self.deg() - self.terms[0].mono.deg()
    }

    fn monic(mut self) -> MElem {
        if let Some(lead) = self.terms.first() {
            if !lead.coef.is_one() {
                let inv = lead.coef.inv().expect("nonzero lead");
                for t in &mut self.terms {
                    t.coef = t.coef.mul(&inv);
                }
            }
        }
        self
    }
}

/// `a - c·x^m·b`, merging the two sorted term lists.
fn combine(ctx: &Ctx, a: &MElem, b: &MElem, m: &Monomial, c: &Scalar) -> MElem {
    let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
    let mut i = 0;
    let mut j = 0;
    let bt = |j: usize| -> MTerm {
        let t = &b.terms[j];
        MTerm { comp: t.comp, mono: t.mono.mul(m), coef: t.coef.mul(c).neg() }
    };
    while i < a.terms.len() && j < b.terms.len() {
        let bj = bt(j);
        match term_cmp(ctx, &a.terms[i], &bj) {
            Ordering::Greater => {
                out.push(a.terms[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push(bj);
                j += 1;
            }
            Ordering::Equal => {
                let v = a.terms[i].coef.add(&bj.coef);
                if !v.is_zero() {
                    out.push(MTerm { comp: bj.comp, mono: bj.mono, coef: v });
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a.terms[i..]);
    while j < b.terms.len() {
        out.push(bt(j));
        j += 1;
    }
    MElem { terms: out }
}

/// Full normal form for a global order: reduce the lead while possible,
/// otherwise move it to the remainder and keep going.
fn nf_global(ctx: &Ctx, f: MElem, basis: &[MElem]) -> MElem {
    let mut rem: Vec<MTerm> = Vec::new();
    let mut h = f;
    'outer: while !h.is_zero() {
        let lead = h.lead().clone();
        for g in basis {
            let gl = g.lead();
            if gl.comp == lead.comp {
                if let Some(q) = gl.mono.div_into(&lead.mono) {
                    let c = lead.coef.div(&gl.coef);
                    h = combine(ctx, &h, g, &q, &c);
                    continue 'outer;
                }
            }
        }
        rem.push(h.terms.remove(0));
    }
    MElem { terms: rem }
}

/// Mora's weak normal form for local orders. The result is zero exactly
/// when the element lies in the module generated by `basis` over the local
/// ring (for `basis` a standard basis); tails are not reduced.
fn nf_mora(ctx: &Ctx, f: MElem, basis: &[MElem]) -> MElem {
    let mut extra: Vec<MElem> = Vec::new();
    let mut h = f;
    loop {
        if h.is_zero() {
            return h;
        }
        let (lead_comp, lead_mono) = {
            let l = h.lead();
            (l.comp, l.mono.clone())
        };
        let mut best: Option<(u32, bool, usize)> = None; // (ecart, in_extra, idx)
        for (idx, g) in basis.iter().enumerate() {
            let gl = g.lead();
            if gl.comp == lead_comp && gl.mono.divides(&lead_mono) {
                let e = g.ecart();
                if best.map_or(true, |(be, _, _)| e < be) {
                    best = Some((e, false, idx));
                }
            }
        }
        for (idx, g) in extra.iter().enumerate() {
            let gl = g.lead();
            if gl.comp == lead_comp && gl.mono.divides(&lead_mono) {
                let e = g.ecart();
                if best.map_or(true, |(be, _, _)| e < be) {
                    best = Some((e, true, idx));
                }
            }
        }
        let Some((ecart_g, in_extra, idx)) = best else { return h };
        if ecart_g > h.ecart() {
            extra.push(h.clone().monic());
        }
        let g = if in_extra { extra[idx].clone() } else { basis[idx].clone() };
        let gl = g.lead();
        let q = gl.mono.div_into(&lead_mono).expect("divisor lead");
        let c = h.lead().coef.div(&gl.coef);
        h = combine(ctx, &h, &g, &q, &c);
    }
}

fn normal_form_melem(ctx: &Ctx, f: MElem, basis: &[MElem]) -> MElem {
    if ctx.order().is_global() {
        nf_global(ctx, f, basis)
    } else {
        nf_mora(ctx, f, basis)
    }
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

/// Deterministic pair selection: lowest sugar, then smallest lcm degree,
/// then lexicographically smallest lcm exponents, then indices.
fn pop_best_pair(pairs: &mut Vec<Pair>) -> Pair {
    let mut best = 0;
    for k in 1..pairs.len() {
        let a = &pairs[k];
        let b = &pairs[best];
        let key = (a.sugar, a.lcm.deg(), a.lcm.exps(), a.i, a.j)
            .cmp(&(b.sugar, b.lcm.deg(), b.lcm.exps(), b.i, b.j));
        if key == Ordering::Less {
            best = k;
        }
    }
    pairs.swap_remove(best)
}

/// Generators together with the context's quotient relations placed in
/// every component.
fn effective_input(ctx: &Ctx, rank: usize, gens: &[FreeElement]) -> Vec<MElem> {
    let mut input: Vec<MElem> = Vec::new();
    for g in gens {
        let me = MElem::from_free(ctx, g);
        if !me.is_zero() {
            input.push(me.monic());
        }
    }
    for q in ctx.quotient_polys() {
        if q.is_zero() {
            continue;
        }
        for j in 0..rank {
            let fe = FreeElement::unit(ctx.clone(), rank, j, q.clone());
            input.push(MElem::from_free(ctx, &fe).monic());
        }
    }
    input
}

/// Completion loop shared by both settings.
fn complete(ctx: &Ctx, rank: usize, input: Vec<MElem>) -> Vec<MElem> {
    let is_ideal = rank == 1;
    let global = ctx.order().is_global();
    let mut g: Vec<MElem> = Vec::new();
    let mut sugars: Vec<u32> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let push_elem = |elem: MElem,
                         sugar: u32,
                         g: &mut Vec<MElem>,
                         sugars: &mut Vec<u32>,
                         pairs: &mut Vec<Pair>| {
        let new_idx = g.len();
        let nl = elem.lead().clone();
        for (k, other) in g.iter().enumerate() {
            let ol = other.lead();
            if ol.comp != nl.comp {
                continue;
            }
            if is_ideal && global && ol.mono.is_coprime(&nl.mono) {
                continue; // product criterion (ideals, global order only)
            }
            let lcm = ol.mono.lcm(&nl.mono);
            let s = (sugars[k] + lcm.deg() - ol.mono.deg())
                .max(sugar + lcm.deg() - nl.mono.deg());
            pairs.push(Pair { i: k, j: new_idx, lcm, sugar: s });
        }
        sugars.push(sugar);
        g.push(elem);
    };

    for elem in input {
        let s = elem.deg();
        push_elem(elem, s, &mut g, &mut sugars, &mut pairs);
    }

    while !pairs.is_empty() {
        let pair = pop_best_pair(&mut pairs);
        let (gi, gj) = (&g[pair.i], &g[pair.j]);
        let ui = gi.lead().mono.div_into(&pair.lcm).expect("lcm multiple");
        let uj = gj.lead().mono.div_into(&pair.lcm).expect("lcm multiple");
        let one = Scalar::one(ctx.field());
        let lhs = combine(ctx, &MElem { terms: vec![] }, gi, &ui, &one.neg());
        let s = combine(ctx, &lhs, gj, &uj, &one);
        let h = normal_form_melem(ctx, s, &g);
        if !h.is_zero() {
            let sugar = pair.sugar;
            push_elem(h.monic(), sugar, &mut g, &mut sugars, &mut pairs);
        }
    }
    g
}

/// Minimalize leads, make monic, canonicalize tails, sort.
fn interreduce(ctx: &Ctx, rank: usize, elems: Vec<MElem>) -> Vec<MElem> {
    let mut nonzero: Vec<MElem> = elems.into_iter().filter(|e| !e.is_zero()).collect();
    // Divisors have strictly smaller lead degree (or equal monomial), so a
    // degree-ascending sweep keeps exactly the minimal leads.
    nonzero.sort_by(|a, b| {
        let (la, lb) = (a.lead(), b.lead());
        (la.mono.deg(), la.comp, la.mono.exps())
            .cmp(&(lb.mono.deg(), lb.comp, lb.mono.exps()))
    });
    let mut kept: Vec<MElem> = Vec::new();
    'next: for e in nonzero {
        let el = e.lead();
        for k in &kept {
            let kl = k.lead();
            if kl.comp == el.comp && kl.mono.divides(&el.mono) {
                continue 'next;
            }
        }
        kept.push(e.monic());
    }

    if ctx.order().is_global() {
        // Full tail reduction against the other leads: the reduced basis.
        let snapshot = kept.clone();
        for i in 0..kept.len() {
            let others: Vec<MElem> = snapshot
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, e)| e.clone())
                .collect();
            kept[i] = nf_global(ctx, kept[i].clone(), &others).monic();
        }
    } else if let Some(bound) = truncation_bound(ctx, rank, &kept) {
        // Finite colength: every term of degree >= bound lies in the module
        // (the staircase tops out below it), so tails may be truncated; the
        // lead itself is kept unconditionally.
        for e in &mut kept {
            let lead = e.terms[0].clone();
            e.terms.retain(|t| t.mono.deg() < bound);
            if e.terms.first() != Some(&lead) {
                e.terms.insert(0, lead);
            }
        }
        let leads: Vec<MTerm> = kept.iter().map(|e| e.lead().clone()).collect();
        let snapshot = kept.clone();
        for i in 0..kept.len() {
            kept[i] = tail_reduce_bounded(ctx, kept[i].clone(), &leads, &snapshot, bound);
        }
    }

    kept.sort_by(|a, b| term_cmp(ctx, b.lead(), a.lead()));
    kept
}

/// Largest standard-monomial degree + 1, when the staircase is finite.
fn truncation_bound(ctx: &Ctx, rank: usize, elems: &[MElem]) -> Option<u32> {
    let leads: Vec<(usize, Monomial)> =
        elems.iter().map(|e| (e.lead().comp, e.lead().mono.clone())).collect();
    match staircase(ctx.nvars(), rank, &leads, 5_000_000) {
        Ok(StaircaseCount { count: _, max_deg }) => Some(max_deg + 1),
        Err(_) => None,
    }
}

/// Reduce every tail term of `f` below all leads — including the element's
/// own lead, whose multiples can appear in local-order tails — truncating
/// any generated term of degree >= `bound` (legitimate: such terms lie in
/// the module). Terminates because each replacement is strictly smaller in
/// the order within a finite monomial set; ends with every tail term a
/// standard monomial, which pins the form uniquely.
fn tail_reduce_bounded(
    ctx: &Ctx,
    f: MElem,
    leads: &[MTerm],
    basis: &[MElem],
    bound: u32,
) -> MElem {
    let mut h = f;
    loop {
        // Truncate tail terms at/above the bound; the lead stays put.
        if h.terms.len() > 1 {
            let lead = h.terms[0].clone();
            h.terms.retain(|t| t.mono.deg() < bound);
            if h.terms.first() != Some(&lead) {
                h.terms.insert(0, lead);
            }
        }
        let mut target: Option<(usize, usize)> = None; // (term idx, basis idx)
        'scan: for (ti, t) in h.terms.iter().enumerate().skip(1) {
            for (bi, l) in leads.iter().enumerate() {
                if l.comp == t.comp && l.mono.divides(&t.mono) {
                    target = Some((ti, bi));
                    break 'scan;
                }
            }
        }
        let Some((ti, bi)) = target else { return h };
        let t = h.terms[ti].clone();
        let q = leads[bi].mono.div_into(&t.mono).expect("divisor");
        let c = t.coef.div(&leads[bi].coef);
        h = combine(ctx, &h, &basis[bi], &q, &c);
    }
}

/// Count of monomials under the staircase of the given lead terms, with the
/// largest standard-monomial degree. Fails fast when there is no finite
/// bound or the cell budget is exceeded.
struct StaircaseCount {
    count: u64,
    max_deg: u32,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColengthError {
    #[error("quotient is not finite dimensional")]
    Infinite,
    #[error("quotient dimension exceeds the budget of {0} cells")]
    Budget(u64),
}

fn staircase(
    nvars: usize,
    rank: usize,
    leads: &[(usize, Monomial)],
    budget: u64,
) -> Result<StaircaseCount, ColengthError> {
    let mut count: u64 = 0;
    let mut max_deg: u32 = 0;
    for comp in 0..rank {
        let here: Vec<&Monomial> =
            leads.iter().filter(|(c, _)| *c == comp).map(|(_, m)| m).collect();
        if here.iter().any(|m| m.is_one()) {
            continue; // unit in this component: nothing standard
        }
        // Finite iff every variable has a pure-power lead in this component.
        let mut bounds: Vec<u32> = Vec::with_capacity(nvars);
        for v in 0..nvars {
            let b = here
                .iter()
                .filter(|m| (0..nvars).all(|w| w == v || m.exp(w) == 0))
                .map(|m| m.exp(v))
                .min();
            match b {
                Some(b) => bounds.push(b),
                None => return Err(ColengthError::Infinite),
            }
        }
        let cells: u64 = bounds.iter().map(|&b| b as u64).product();
        if cells > budget {
            return Err(ColengthError::Budget(budget));
        }
        // Enumerate the box and drop multiples of a lead.
        let mut exps = vec![0u32; nvars];
        loop {
            let mono = Monomial::from_exps(&exps);
            if !here.iter().any(|m| m.divides(&mono)) {
                count += 1;
                max_deg = max_deg.max(mono.deg());
                if count > budget {
                    return Err(ColengthError::Budget(budget));
                }
            }
            // increment mixed-radix counter
            let mut k = 0;
            loop {
                if k == nvars {
                    break;
                }
                exps[k] += 1;
                if exps[k] < bounds[k] {
                    break;
                }
                exps[k] = 0;
                k += 1;
            }
            if k == nvars {
                break;
            }
        }
    }
    Ok(StaircaseCount { count, max_deg })
}

/// An interreduced standard basis of a submodule of `O^rank`, relative to
/// the ring context's order and quotient relations.
#[derive(Clone, Debug)]
pub struct GBasis {
    ctx: Ctx,
    rank: usize,
    elems: Vec<MElem>,
}

impl GBasis {
    pub fn new(ctx: &Ctx, rank: usize, gens: &[FreeElement]) -> GBasis {
        assert!(rank >= 1, "rank must be positive");
        let input = effective_input(ctx, rank, gens);
        let completed = complete(ctx, rank, input);
        let elems = interreduce(ctx, rank, completed);
        GBasis { ctx: ctx.clone(), rank, elems }
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn elements(&self) -> Vec<FreeElement> {
        self.elems.iter().map(|e| e.to_free(&self.ctx, self.rank)).collect()
    }

    pub fn lead_terms(&self) -> Vec<(usize, Monomial)> {
        self.elems.iter().map(|e| (e.lead().comp, e.lead().mono.clone())).collect()
    }

    /// Normal form: canonical remainder for global orders, weak normal form
    /// (zero exactly on members) for local orders.
    pub fn normal_form(&self, fe: &FreeElement) -> FreeElement {
        assert_eq!(fe.rank(), self.rank, "rank mismatch");
        let me = MElem::from_free(&self.ctx, fe);
        normal_form_melem(&self.ctx, me, &self.elems).to_free(&self.ctx, self.rank)
    }

    pub fn contains(&self, fe: &FreeElement) -> bool {
        let me = MElem::from_free(&self.ctx, fe);
        normal_form_melem(&self.ctx, me, &self.elems).is_zero()
    }

    /// Vector-space dimension of the quotient by the module: standard
    /// monomial count under the staircase.
    pub fn colength(&self, budget: u64) -> Result<u64, ColengthError> {
        let leads = self.lead_terms();
        if self.elems.is_empty() {
            return Err(ColengthError::Infinite);
        }
        staircase(self.ctx.nvars(), self.rank, &leads, budget).map(|s| s.count)
    }
}
