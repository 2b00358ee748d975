//! Module-level operations built on standard bases: preimages along module
//! maps, ideal quotients and saturation, variable elimination, minors,
//! symmetric-power images, and generic rank.

use crate::free::FreeElement;
use crate::monomial::{monomials_of_degree, Monomial};
use crate::order::{ModuleExt, MonomialOrder};
use crate::poly::Polynomial;
use crate::ring::{Ctx, CtxExt, RingContext};
use crate::scalar::Scalar;
use crate::submodule::Submodule;

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] + (k - i) < n {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Determinant by cofactor expansion along the first row.
pub fn det(ctx: &Ctx, mat: &[Vec<Polynomial>]) -> Polynomial {
    let n = mat.len();
    if n == 0 {
        return Polynomial::one(ctx.clone());
    }
    if n == 1 {
        return mat[0][0].clone();
    }
    let mut acc = Polynomial::zero(ctx.clone());
    for (j, entry) in mat[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let minor: Vec<Vec<Polynomial>> = mat[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let cof = entry.mul(&det(ctx, &minor));
        acc = if j % 2 == 0 { acc.add(&cof) } else { acc.sub(&cof) };
    }
    acc
}

/// All `k×k` minors of a rectangular matrix, rows/column subsets in
/// lexicographic order.
pub fn minors(ctx: &Ctx, mat: &[Vec<Polynomial>], k: usize) -> Vec<Polynomial> {
    let nrows = mat.len();
    let ncols = if nrows == 0 { 0 } else { mat[0].len() };
    let mut out = Vec::new();
    if k == 0 {
        return vec![Polynomial::one(ctx.clone())];
    }
    for rows in combinations(nrows, k) {
        for cols in combinations(ncols, k) {
            let sub: Vec<Vec<Polynomial>> = rows
                .iter()
                .map(|&r| cols.iter().map(|&c| mat[r][c].clone()).collect())
                .collect();
            out.push(det(ctx, &sub));
        }
    }
    out
}

/// The submodule of `O^s` of coefficient vectors `u` with
/// `u_1 h_1 + … + u_s h_s` inside `target`.
///
/// Computed by tagging: in `O^{r+s}` take the generators `(h_i, e_i)` and
/// `(t_k, 0)`, complete a basis under a component-block order that makes
/// any term in the first block dominate; basis elements with no first-block
/// part have coefficient vectors that generate the preimage.
pub fn preimage_submodule(h_list: &[FreeElement], target: &Submodule) -> Submodule {
    let ctx = target.ctx().clone();
    let r = target.rank();
    let s = h_list.len();
    assert!(s >= 1, "need at least one map component");
    for h in h_list {
        assert_eq!(h.rank(), r, "map component rank mismatch");
    }
    let work = ctx.with_module_ext(ModuleExt::BlockTop { split: r });
    let pad = |v: &FreeElement, tag: Option<usize>| -> FreeElement {
        let mut comps: Vec<Polynomial> =
            v.comps().iter().map(|p| p.into_ctx(&work)).collect();
        comps.extend((0..s).map(|_| Polynomial::zero(work.clone())));
        if let Some(t) = tag {
            comps[r + t] = Polynomial::one(work.clone());
        }
        FreeElement::new(comps)
    };
    let mut gens: Vec<FreeElement> = Vec::new();
    for (i, h) in h_list.iter().enumerate() {
        gens.push(pad(h, Some(i)));
    }
    for t in target.gens() {
        gens.push(pad(t, None));
    }
    let basis = crate::gb::GBasis::new(&work, r + s, &gens);
    let mut result: Vec<FreeElement> = Vec::new();
    for e in basis.elements() {
        if e.comps()[..r].iter().all(|p| p.is_zero()) {
            let tail = e.project(r..r + s);
            result.push(tail.into_ctx(&ctx));
        }
    }
    Submodule::new(ctx, s, result)
}

/// Ideal quotient `(I : J)` for `J = (j_gens)`: the preimage of `I ⊕ … ⊕ I`
/// under `f ↦ (f·j_1, …, f·j_m)`.
pub fn ideal_quotient(i: &Submodule, j_gens: &[Polynomial]) -> Submodule {
    assert_eq!(i.rank(), 1, "ideal quotient needs an ideal");
    let ctx = i.ctx().clone();
    let nonzero: Vec<&Polynomial> = j_gens.iter().filter(|p| !p.is_zero()).collect();
    if nonzero.is_empty() {
        return Submodule::ideal(ctx.clone(), vec![Polynomial::one(ctx)]);
    }
    let m = nonzero.len();
    let column = FreeElement::new(nonzero.iter().map(|p| (*p).clone()).collect());
    let mut target_gens: Vec<FreeElement> = Vec::new();
    for t in i.gens() {
        for j in 0..m {
            target_gens.push(FreeElement::unit(ctx.clone(), m, j, t.comp(0).clone()));
        }
    }
    let target = Submodule::new(ctx.clone(), m, target_gens);
    preimage_submodule(&[column], &target)
}

/// Saturation `(I : J^∞)`: iterate the ideal quotient until it stabilizes.
pub fn saturate(i: &Submodule, j_gens: &[Polynomial]) -> Submodule {
    let mut cur = i.clone();
    for _ in 0..10_000 {
        let next = ideal_quotient(&cur, j_gens);
        if next.module_eq(&cur) {
            return next;
        }
        cur = next;
    }
    unreachable!("saturation did not stabilize");
}

/// Eliminate the given variables from a submodule over a global order:
/// returns the context on the remaining variables and generators of the
/// intersection with the subring.
pub fn eliminate(m: &Submodule, drop_vars: &[usize]) -> (Ctx, Vec<FreeElement>) {
    let ctx = m.ctx().clone();
    assert!(ctx.order().is_global(), "elimination requires a global order");
    assert_eq!(ctx.nparams(), 0, "elimination works on parameter-free rings");
    let mut drop: Vec<usize> = drop_vars.to_vec();
    drop.sort_unstable();
    drop.dedup();
    let k = drop.len();
    let keep: Vec<usize> = (0..ctx.nvars()).filter(|i| !drop.contains(i)).collect();
    let perm: Vec<usize> = drop.iter().chain(keep.iter()).copied().collect();
    let work = ctx
        .with_permuted_vars(&perm, MonomialOrder::EliminationBlock(k))
        .with_module_ext(ModuleExt::Top);
    // old index -> new index
    let mut inv = vec![0usize; perm.len()];
    for (new, &old) in perm.iter().enumerate() {
        inv[old] = new;
    }
    let gens: Vec<FreeElement> = m
        .gens()
        .iter()
        .map(|g| {
            FreeElement::new(
                g.comps().iter().map(|p| p.permute_vars(&work, &inv)).collect(),
            )
        })
        .collect();
    let basis = crate::gb::GBasis::new(&work, m.rank(), &gens);

    let keep_names: Vec<&str> = keep.iter().map(|&i| ctx.var_name(i)).collect();
    let out_ctx = RingContext::new(&keep_names, &[], ctx.field(), MonomialOrder::GlobalDegrevlex);
    let mut out: Vec<FreeElement> = Vec::new();
    'elem: for e in basis.elements() {
        let mut comps: Vec<Polynomial> = Vec::with_capacity(e.rank());
        for p in e.comps() {
            let mut terms: Vec<(Monomial, Scalar)> = Vec::new();
            for (mono, c) in p.terms() {
                if (0..k).any(|i| mono.exp(i) > 0) {
                    continue 'elem; // depends on a dropped variable
                }
                let exps: Vec<u32> = (k..ctx.nvars()).map(|i| mono.exp(i)).collect();
                terms.push((Monomial::from_exps(&exps), c.clone()));
            }
            comps.push(Polynomial::from_terms(out_ctx.clone(), terms));
        }
        out.push(FreeElement::new(comps));
    }
    (out_ctx, out)
}

/// Swaps the generating set for the canonical basis elements when that is
/// both exact and no larger than the original set. The stored basis
/// generates the module on the nose under any global order; under a local
/// order it does so whenever the staircase is finite in every component,
/// because the truncated tails then lie back inside the module.
fn compact_generators(m: &Submodule) -> Submodule {
    let elems = m.basis().elements();
    if elems.is_empty() || elems.len() > m.ngens() {
        return m.clone();
    }
    if !m.ctx().order().is_global() {
        let leads = m.basis().lead_terms();
        let nv = m.ctx().nvars();
        for c in 0..m.rank() {
            for j in 0..nv {
                let covered = leads.iter().any(|(lc, mono)| {
                    *lc == c
                        && mono.exps().iter().enumerate().all(|(k, &e)| k == j || e == 0)
                });
                if !covered {
                    return m.clone();
                }
            }
        }
    }
    Submodule::new(m.ctx().clone(), m.rank(), elems)
}

/// Image of the `n`-fold power of a module inside the degree-`n` part of
/// the symmetric algebra on `O^p`, presented on the monomial basis of that
/// degree. `n = 1` returns the module unchanged.
pub fn power_in_sym(m: &Submodule, n: u32) -> Submodule {
    let ctx = m.ctx().clone();
    let p = m.rank();
    if n == 1 {
        return m.clone();
    }
    if n == 0 {
        return Submodule::ideal(ctx.clone(), vec![Polynomial::one(ctx)]);
    }
    let m = &compact_generators(m);
    let basis_monos = monomials_of_degree(p, n);
    let index: std::collections::HashMap<Monomial, usize> =
        basis_monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let rank = basis_monos.len();
    let ngens = m.ngens();

    // Multisets of generator indices of size n, non-decreasing.
    let mut multisets: Vec<Vec<usize>> = Vec::new();
    let mut cur = vec![0usize; n as usize];
    if ngens > 0 {
        loop {
            multisets.push(cur.clone());
            let mut i = n as usize;
            loop {
                if i == 0 {
                    multisets.reverse();
                    multisets.sort(); // stable deterministic order
                    let mut out_gens: Vec<FreeElement> = Vec::new();
                    for ms in &multisets {
                        out_gens.push(expand_product(&ctx, m, ms, &index, rank, p));
                    }
                    return Submodule::new(ctx, rank, out_gens);
                }
                i -= 1;
                if cur[i] + 1 < ngens {
                    cur[i] += 1;
                    for j in i + 1..n as usize {
                        cur[j] = cur[i];
                    }
                    break;
                }
            }
        }
    }
    Submodule::new(ctx, rank, Vec::new())
}

/// Expand the product of the chosen generators (each a linear form in the
/// symmetric variables) on the degree-`n` monomial basis.
fn expand_product(
    ctx: &Ctx,
    m: &Submodule,
    multiset: &[usize],
    index: &std::collections::HashMap<Monomial, usize>,
    rank: usize,
    p: usize,
) -> FreeElement {
    let mut acc: std::collections::HashMap<Monomial, Polynomial> =
        std::collections::HashMap::new();
    acc.insert(Monomial::one(p), Polynomial::one(ctx.clone()));
    for &gi in multiset {
        let g = &m.gens()[gi];
        let mut next: std::collections::HashMap<Monomial, Polynomial> =
            std::collections::HashMap::new();
        for (tm, coef) in &acc {
            for j in 0..p {
                let gj = g.comp(j);
                if gj.is_zero() {
                    continue;
                }
                let key = tm.mul(&Monomial::var(p, j));
                let add = coef.mul(gj);
                next.entry(key)
                    .and_modify(|e| *e = e.add(&add))
                    .or_insert(add);
            }
        }
        acc = next;
    }
    let mut comps = vec![Polynomial::zero(ctx.clone()); rank];
    for (tm, poly) in acc {
        comps[*index.get(&tm).expect("degree-n monomial")] = poly;
    }
    FreeElement::new(comps)
}

/// `count` generic linear combinations of the generators, with coefficients
/// drawn from the stream.
pub fn generic_combinations(
    m: &Submodule,
    count: usize,
    stream: &mut crate::genstream::GenericScalarStream,
) -> Vec<FreeElement> {
    let ctx = m.ctx().clone();
    (0..count)
        .map(|_| {
            let mut acc = FreeElement::zero(ctx.clone(), m.rank());
            for g in m.gens() {
                acc = acc.add(&g.scale(&stream.draw(ctx.field())));
            }
            acc
        })
        .collect()
}

/// Products `f·g` over all ideal generators `f` and module generators `g`.
pub fn ideal_times_module(i_gens: &[Polynomial], m: &Submodule) -> Submodule {
    let gens = i_gens
        .iter()
        .flat_map(|f| m.gens().iter().map(move |g| g.mul_poly(f)))
        .collect();
    Submodule::new(m.ctx().clone(), m.rank(), gens)
}

/// Largest size of a nonvanishing minor of the generator matrix, modulo
/// the context's quotient relations.
pub fn generic_rank_of(m: &Submodule) -> usize {
    let ctx = m.ctx().clone();
    let zero_ideal = Submodule::ideal(ctx.clone(), Vec::new());
    let mat = m.matrix();
    let upper = m.rank().min(m.ngens());
    for t in (1..=upper).rev() {
        for rows in combinations(m.rank(), t) {
            for cols in combinations(m.ngens(), t) {
                let sub: Vec<Vec<Polynomial>> = rows
                    .iter()
                    .map(|&r| cols.iter().map(|&c| mat[r][c].clone()).collect())
                    .collect();
                let d = det(&ctx, &sub);
                if d.is_zero() {
                    continue;
                }
                if !zero_ideal.contains(&FreeElement::from_ideal_gen(d)) {
                    return t;
                }
            }
        }
    }
    0
}
