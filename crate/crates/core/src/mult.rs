//! Multiplicity invariants of finite-colength submodules.
//!
//! Everything here is driven by a single primitive — the length of a quotient
//! of free modules — sampled along symmetric powers. A [`MultiplicityResult`]
//! records the sampled length table λ(0..=n_max), its finite-difference
//! triangle, and the stabilized difference at the expected degree, which is
//! the reported multiplicity. Samuel multiplicities of ideals, Buchsbaum–Rim
//! multiplicities of modules, and pair multiplicities of nested modules all
//! share this shape; a seeded generic-perturbation count provides an
//! independent geometric way to arrive at the same numbers.

use crate::free::FreeElement;
use crate::gb::ColengthError;
use crate::genstream::GenericScalarStream;
use crate::modops;
use crate::order::MonomialOrder;
use crate::poly::Polynomial;
use crate::ring::CtxExt;
use crate::scalar::Scalar;
use crate::submodule::Submodule;
use thiserror::Error;

/// Default number of symmetric-power samples for length tables.
pub const DEFAULT_N_MAX: usize = 6;

/// Default cell budget for staircase counting inside length computations.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Number of fresh draws attempted before a perturbation is declared bad.
const PERTURBATION_RETRIES: usize = 4;

/// Failure modes of the multiplicity computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MultError {
    /// The difference row of the requested order has fewer than two entries,
    /// or its last two entries disagree; a larger sample bound is needed.
    #[error("length table not stabilized at difference order {degree} by n = {n_max}; raise n_max")]
    NotStabilized { degree: usize, n_max: usize },
    /// The quotient by the submodule has infinite length.
    #[error("submodule has infinite colength")]
    InfiniteColength,
    /// The quotient of the two nested submodules has infinite length.
    #[error("quotient of the submodule pair has infinite length")]
    InfiniteLength,
    /// The module's generic rank is below its ambient rank.
    #[error("generic rank {generic} is below ambient rank {ambient}")]
    RankDeficient { ambient: usize, generic: usize },
    /// The first module is not contained in the second.
    #[error("submodule is not contained in the comparison module")]
    NotContained,
    /// The two modules have different generic ranks.
    #[error("generic ranks differ: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    /// Every attempted perturbation left a positive-dimensional witness.
    #[error("perturbed witness ideal stayed infinite after {retries} draws")]
    InfiniteWitness { retries: usize },
    /// A length computation exceeded its cell budget.
    #[error("length computation exceeded budget of {0} cells")]
    Budget(u64),
}

fn length_err(e: ColengthError, infinite: MultError) -> MultError {
    match e {
        ColengthError::Infinite => infinite,
        ColengthError::Budget(b) => MultError::Budget(b),
    }
}

/// Which length function a [`MultiplicityResult`] sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MultKind {
    Samuel,
    BuchsbaumRim,
    Pair,
}

impl std::fmt::Display for MultKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MultKind::Samuel => write!(f, "samuel"),
            MultKind::BuchsbaumRim => write!(f, "buchsbaum_rim"),
            MultKind::Pair => write!(f, "pair"),
        }
    }
}

/// A sampled length table with its difference triangle and stabilized value.
#[derive(Debug, Clone)]
pub struct MultiplicityResult {
    pub kind: MultKind,
    /// Difference order at which the table must stabilize (d + e − 1).
    pub degree: usize,
    /// λ(n) for n = 0..=n_max; λ(0) = 0 by convention.
    pub lambda: Vec<u64>,
    /// Row k holds the k-th finite differences of `lambda`.
    pub differences: Vec<Vec<i64>>,
    /// The settled entry of row `degree`.
    pub value: u64,
    /// Sample index from which the settled value is attained.
    pub stabilized_at: usize,
}

fn difference_triangle(lambda: &[u64]) -> Vec<Vec<i64>> {
    let mut rows: Vec<Vec<i64>> = vec![lambda.iter().map(|&x| x as i64).collect()];
    while rows.last().unwrap().len() > 1 {
        let prev = rows.last().unwrap();
        rows.push(prev.windows(2).map(|w| w[1] - w[0]).collect());
    }
    rows
}

/// Builds the result from a sampled table, checking stabilization at `degree`.
fn settle(kind: MultKind, degree: usize, lambda: Vec<u64>) -> Result<MultiplicityResult, MultError> {
    let n_max = lambda.len().saturating_sub(1);
    let differences = difference_triangle(&lambda);
    let row = match differences.get(degree) {
        Some(r) if r.len() >= 2 => r,
        _ => return Err(MultError::NotStabilized { degree, n_max }),
    };
    let last = row[row.len() - 1];
    if row[row.len() - 2] != last || last < 0 {
        return Err(MultError::NotStabilized { degree, n_max });
    }
    let settled_from = (0..row.len()).rev().take_while(|&j| row[j] == last).last().unwrap();
    Ok(MultiplicityResult {
        kind,
        degree,
        lambda,
        value: last as u64,
        stabilized_at: degree + settled_from,
        differences,
    })
}

/// Samuel multiplicity of a finite-colength ideal: the stabilized d-th
/// difference of n ↦ len(O/Iⁿ), d = the context's ambient dimension.
pub fn samuel_multiplicity(
    i: &Submodule,
    n_max: usize,
    budget: u64,
) -> Result<MultiplicityResult, MultError> {
    assert_eq!(i.rank(), 1, "samuel multiplicity takes an ideal");
    let d = i.ctx().dim_d();
    let mut lambda = vec![0u64];
    for n in 1..=n_max {
        let pow = modops::power_in_sym(i, n as u32);
        lambda.push(pow.colength(budget).map_err(|e| length_err(e, MultError::InfiniteColength))?);
    }
    settle(MultKind::Samuel, d, lambda)
}

/// Buchsbaum–Rim multiplicity of a finite-colength submodule M ⊆ O^p of full
/// generic rank: the stabilized (d+p−1)-th difference of n ↦ len(Symⁿ/Mⁿ).
pub fn buchsbaum_rim(
    m: &Submodule,
    n_max: usize,
    budget: u64,
) -> Result<MultiplicityResult, MultError> {
    let p = m.rank();
    let e = m.generic_rank();
    if e < p {
        return Err(MultError::RankDeficient { ambient: p, generic: e });
    }
    let degree = m.ctx().dim_d() + p - 1;
    let mut lambda = vec![0u64];
    for n in 1..=n_max {
        let pow = modops::power_in_sym(m, n as u32);
        lambda.push(pow.colength(budget).map_err(|e| length_err(e, MultError::InfiniteColength))?);
    }
    settle(MultKind::BuchsbaumRim, degree, lambda)
}

/// Length of N/M realized as the colength of the preimage U ⊆ O^s of M under
/// the map sending the unit vectors to chosen generators of N.
pub fn quotient_length(m: &Submodule, n: &Submodule, budget: u64) -> Result<u64, MultError> {
    let u = modops::preimage_submodule(n.gens(), m);
    u.colength(budget).map_err(|e| length_err(e, MultError::InfiniteLength))
}

/// Multiplicity of a pair M ⊆ N of equal generic rank: the stabilized
/// (d+e−1)-th difference of n ↦ len(Nⁿ/Mⁿ) in the symmetric powers.
pub fn pair_multiplicity(
    m: &Submodule,
    n: &Submodule,
    n_max: usize,
    budget: u64,
) -> Result<MultiplicityResult, MultError> {
    assert!(m.ctx().compatible(n.ctx()), "pair over mismatched contexts");
    assert_eq!(m.rank(), n.rank(), "pair needs a common ambient rank");
    if !n.contains_module(m) {
        return Err(MultError::NotContained);
    }
    let (em, en) = (m.generic_rank(), n.generic_rank());
    if em != en {
        return Err(MultError::RankMismatch { left: em, right: en });
    }
    let degree = m.ctx().dim_d() + em - 1;
    let mut lambda = vec![0u64];
    for k in 1..=n_max {
        let m_pow = modops::power_in_sym(m, k as u32);
        let n_pow = modops::power_in_sym(n, k as u32);
        lambda.push(quotient_length(&m_pow, &n_pow, budget)?);
    }
    settle(MultKind::Pair, degree, lambda)
}

/// True iff M is a reduction of N, detected by vanishing pair multiplicity.
pub fn reduction_check(
    m: &Submodule,
    n: &Submodule,
    n_max: usize,
    budget: u64,
) -> Result<bool, MultError> {
    Ok(pair_multiplicity(m, n, n_max, budget)?.value == 0)
}

/// Outcome of a seeded generic perturbation of a generator matrix.
#[derive(Debug, Clone)]
pub struct PerturbationCount {
    /// Seed of the stream the entries were drawn from.
    pub seed: u64,
    /// The p × (d+p−1) constant matrix added to the generator matrix.
    pub epsilon_matrix: Vec<Vec<Scalar>>,
    /// Multiplicity-weighted number of rank-drop points of the perturbation.
    pub count: u64,
    /// Ideal of maximal minors of the perturbed matrix, in a global order.
    pub witness_ideal: Submodule,
    /// Whether every witness point is reduced (None when not testable).
    pub simple_points: Option<bool>,
}

/// Counts, with multiplicity, the points where a generically perturbed
/// generator matrix of M drops below full rank. The generators are first
/// replaced by d+p−1 generic combinations when their number differs, and two
/// independent draws must agree before a count is accepted.
pub fn generic_perturbation_count(
    m: &Submodule,
    stream: &mut GenericScalarStream,
    budget: u64,
) -> Result<PerturbationCount, MultError> {
    let ctx = m.ctx().clone();
    let p = m.rank();
    let need = ctx.dim_d() + p - 1;
    assert!(need >= p, "perturbation needs a positive-dimensional ring");
    m.colength(budget).map_err(|e| length_err(e, MultError::InfiniteColength))?;
    let base: Vec<FreeElement> = if m.ngens() == need {
        m.gens().to_vec()
    } else {
        modops::generic_combinations(m, need, stream)
    };
    let glob = ctx.with_order(MonomialOrder::GlobalDegrevlex);
    let base: Vec<FreeElement> = base.iter().map(|g| g.into_ctx(&glob)).collect();

    let draw_matrix = |stream: &mut GenericScalarStream| -> Vec<Vec<Scalar>> {
        (0..p).map(|_| stream.draw_row(glob.field(), need)).collect()
    };
    let witness = |eps: &Vec<Vec<Scalar>>| -> Submodule {
        let mat: Vec<Vec<Polynomial>> = (0..p)
            .map(|i| {
                (0..need)
                    .map(|j| base[j].comp(i).add(&Polynomial::constant(glob.clone(), eps[i][j].clone())))
                    .collect()
            })
            .collect();
        Submodule::ideal(glob.clone(), modops::minors(&glob, &mat, p))
    };

    for _ in 0..PERTURBATION_RETRIES {
        let eps = draw_matrix(stream);
        let wit = witness(&eps);
        let count = match wit.colength(budget) {
            Ok(c) => c,
            Err(ColengthError::Infinite) => continue,
            Err(ColengthError::Budget(b)) => return Err(MultError::Budget(b)),
        };
        let eps2 = draw_matrix(stream);
        let count2 = match witness(&eps2).colength(budget) {
            Ok(c) => c,
            Err(ColengthError::Infinite) => continue,
            Err(ColengthError::Budget(b)) => return Err(MultError::Budget(b)),
        };
        if count != count2 {
            continue;
        }
        let simple_points = simpleness(&wit, budget);
        return Ok(PerturbationCount {
            seed: stream.seed(),
            epsilon_matrix: eps,
            count,
            witness_ideal: wit,
            simple_points,
        });
    }
    Err(MultError::InfiniteWitness { retries: PERTURBATION_RETRIES })
}

/// Tests whether the witness scheme is reduced: its ideal plus the full-size
/// minors of its Jacobian must cut out the empty set.
fn simpleness(wit: &Submodule, budget: u64) -> Option<bool> {
    let ctx = wit.ctx().clone();
    if ctx.nparams() > 0 || ctx.has_quotient() {
        return None;
    }
    let nv = ctx.nvars();
    let gens: Vec<&Polynomial> = wit.gens().iter().map(|g| g.comp(0)).collect();
    if gens.len() < nv {
        return None;
    }
    let jac: Vec<Vec<Polynomial>> =
        gens.iter().map(|g| (0..nv).map(|i| g.derivative(i)).collect()).collect();
    let sing = wit.with_extra_gens(
        &modops::minors(&ctx, &jac, nv).into_iter().map(FreeElement::from_ideal_gen).collect::<Vec<_>>(),
    );
    match sing.colength(budget) {
        Ok(c) => Some(c == 0),
        Err(_) => None,
    }
}
