//! Monomial orders, global and local, plus their module extensions.
//!
//! Global orders have `1` as the smallest monomial and make Buchberger's
//! algorithm terminate with ordinary division; the local order has `1` as the
//! largest monomial and is served by Mora's tangent-cone algorithm instead.
//! Convention for ties: degrevlex compares total degree first, then prefers
//! the monomial whose last differing exponent is smaller.

use crate::monomial::Monomial;
use std::cmp::Ordering;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    /// Degree first, reverse-lexicographic tie-break. Global.
    GlobalDegrevlex,
    /// Pure lexicographic with `x_0 > x_1 > ...`. Global.
    GlobalLex,
    /// Weighted degree (all weights >= 1) with degrevlex tie-break. Global.
    Weighted(Vec<u32>),
    /// Negative degree order: lower total degree is larger, degrevlex
    /// tie-break. Local: `1` is the largest monomial.
    LocalDegrevlex,
    /// Eliminates the first `split` variables: block degree first, then
    /// degrevlex on the block, then degrevlex on the rest. Global.
    EliminationBlock(usize),
}

/// How module terms `(monomial, component)` are compared on top of the ring
/// order. Lower component index wins ties (and leads in `Pot`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModuleExt {
    /// Term over position: monomial first, then component.
    Top,
    /// Position over term: component first, then monomial.
    Pot,
    /// Two blocks of components split at `split`; any term in the first block
    /// beats any term in the second, then as `Top` within a block. Used for
    /// syzygy-style eliminations of tag components.
    BlockTop { split: usize },
}

fn revlex_tie(a: &Monomial, b: &Monomial) -> Ordering {
    // Last differing exponent smaller => larger monomial.
    for i in (0..a.nvars()).rev() {
        match a.exp(i).cmp(&b.exp(i)) {
            Ordering::Equal => continue,
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
        }
    }
    Ordering::Equal
}

fn grevlex(a: &Monomial, b: &Monomial) -> Ordering {
    a.deg().cmp(&b.deg()).then_with(|| revlex_tie(a, b))
}

fn grevlex_range(a: &Monomial, b: &Monomial, lo: usize, hi: usize) -> Ordering {
    let da = a.deg_range(lo, hi);
    let db = b.deg_range(lo, hi);
    da.cmp(&db).then_with(|| {
        for i in (lo..hi).rev() {
            match a.exp(i).cmp(&b.exp(i)) {
                Ordering::Equal => continue,
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
            }
        }
        Ordering::Equal
    })
}

impl MonomialOrder {
    /// Compare monomials; `Greater` means `a` leads.
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.nvars(), b.nvars());
        match self {
            MonomialOrder::GlobalDegrevlex => grevlex(a, b),
            MonomialOrder::GlobalLex => {
                for i in 0..a.nvars() {
                    match a.exp(i).cmp(&b.exp(i)) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::Weighted(w) => {
                a.weighted_deg(w).cmp(&b.weighted_deg(w)).then_with(|| revlex_tie(a, b))
            }
            MonomialOrder::LocalDegrevlex => {
                b.deg().cmp(&a.deg()).then_with(|| revlex_tie(a, b))
            }
            MonomialOrder::EliminationBlock(split) => grevlex_range(a, b, 0, *split)
                .then_with(|| grevlex_range(a, b, *split, a.nvars())),
        }
    }

    /// Whether `1` is the smallest monomial (Buchberger applies) rather than
    /// the largest (Mora applies).
    pub fn is_global(&self) -> bool {
        !matches!(self, MonomialOrder::LocalDegrevlex)
    }

    pub fn name(&self) -> &'static str {
        match self {
            MonomialOrder::GlobalDegrevlex => "global_degrevlex",
            MonomialOrder::GlobalLex => "global_lex",
            MonomialOrder::Weighted(_) => "weighted",
            MonomialOrder::LocalDegrevlex => "local_degrevlex",
            MonomialOrder::EliminationBlock(_) => "elimination_block",
        }
    }
}

impl ModuleExt {
    /// Compare module terms; `Greater` means `(a, ca)` leads.
    pub fn cmp(
        &self,
        ring: &MonomialOrder,
        a: &Monomial,
        ca: usize,
        b: &Monomial,
        cb: usize,
    ) -> Ordering {
        match self {
            ModuleExt::Top => ring.cmp(a, b).then_with(|| cb.cmp(&ca)),
            ModuleExt::Pot => cb.cmp(&ca).then_with(|| ring.cmp(a, b)),
            ModuleExt::BlockTop { split } => {
                let ba = usize::from(ca >= *split);
                let bb = usize::from(cb >= *split);
                bb.cmp(&ba).then_with(|| ring.cmp(a, b)).then_with(|| cb.cmp(&ca))
            }
        }
    }
}
