//! Singularity invariants of function germs and map germs: Jacobian modules,
//! the j-invariant of a function with one-dimensional singular locus,
//! classification of fiber singular points, presentations of pushforward
//! modules with their Fitting ideals, image-singularity reports, Milnor
//! numbers of isolated complete intersections, indices of 1-forms, and a
//! fiberwise independence test for weighted Jacobian multiplicities.

use crate::free::FreeElement;
use crate::gb::ColengthError;
use crate::genstream::GenericScalarStream;
use crate::modops;
use crate::mult::{self, MultError};
use crate::order::MonomialOrder;
use crate::polar;
use crate::poly::Polynomial;
use crate::ring::{Ctx, CtxExt, RingContext};
use crate::scalar::Scalar;
use crate::submodule::Submodule;
use thiserror::Error;

/// Number of fresh draws attempted before a generic choice is declared bad.
const GENERIC_RETRIES: usize = 4;

/// Failure modes of the germ computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GermError {
    /// A map germ whose first component is not the first source variable.
    #[error("map germ is not in corank-one shape (first component must be the first source variable)")]
    NotCorank1,
    /// The map germ is not finite over its target.
    #[error("map germ is not finite over the target")]
    NotFinite,
    /// The given point is not a critical point of the function.
    #[error("point is not a critical point of the function")]
    NotCritical,
    /// Some truncation of the equation list fails to cut an isolated
    /// complete intersection singularity.
    #[error("equations do not define an isolated complete intersection singularity")]
    NotIcis,
    /// A Jacobian-type module has infinite colength on the fiber.
    #[error("singularity is not isolated on the fiber")]
    NotIsolated,
    /// The function does not lie in the square of the singular-locus ideal.
    #[error("function does not lie in the square of the singular-locus ideal")]
    NotInSquare,
    /// The declared points do not account for all critical points off the
    /// singular locus.
    #[error("declared points carry length {declared} off the singular locus but the fiber carries {global}")]
    IncompletePointList { declared: u64, global: u64 },
    /// A derivative scope selecting no variables.
    #[error("derivative scope selects no variables")]
    EmptySelection,
    /// Bases of dimension other than one are not supported.
    #[error("unsupported base dimension {0}; only one base parameter is handled")]
    UnsupportedBaseDim(usize),
    /// A minimal presentation with the expected number of rows was not found.
    #[error("presentation has fewer relations than basis elements")]
    PresentationDeficient,
    #[error(transparent)]
    Mult(#[from] MultError),
}

fn length_err(e: ColengthError, infinite: GermError) -> GermError {
    match e {
        ColengthError::Infinite => infinite,
        ColengthError::Budget(b) => GermError::Mult(MultError::Budget(b)),
    }
}

/// Which variables a Jacobian-type module differentiates by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JacobianScope {
    All,
    SpaceOnly,
    ParamsOnly,
}

/// Submodule generated by the selected partial-derivative columns of the
/// stacked Jacobian of `f_list` (with the gradient of `f` appended as a last
/// row when present). With `f_list` empty this is the Jacobian ideal of `f`.
pub fn jacobian_module(
    f_list: &[Polynomial],
    f: Option<&Polynomial>,
    scope: JacobianScope,
) -> Result<Submodule, GermError> {
    let ctx = f_list
        .first()
        .or(f)
        .expect("jacobian module needs at least one function")
        .ctx()
        .clone();
    let vars: Vec<usize> = match scope {
        JacobianScope::All => (0..ctx.nvars()).collect(),
        JacobianScope::SpaceOnly => ctx.space_range().collect(),
        JacobianScope::ParamsOnly => (0..ctx.nparams()).collect(),
    };
    if vars.is_empty() {
        return Err(GermError::EmptySelection);
    }
    let rank = f_list.len() + usize::from(f.is_some());
    let gens = vars
        .into_iter()
        .map(|i| {
            FreeElement::new(f_list.iter().chain(f).map(|p| p.derivative(i)).collect())
        })
        .collect();
    Ok(Submodule::new(ctx, rank, gens))
}

/// j-invariant of a function whose singular locus is cut out by the rank-one
/// module `i`: the length of I/J(f), requiring J(f) ⊆ I.
pub fn j_invariant(f: &Polynomial, i: &Submodule, budget: u64) -> Result<u64, GermError> {
    assert_eq!(i.rank(), 1, "the singular-locus module must be an ideal");
    let jf = jacobian_module(&[], Some(f), JacobianScope::All)?;
    if !i.contains_module(&jf) {
        return Err(MultError::NotContained.into());
    }
    Ok(mult::quotient_length(&jf, i, budget)?)
}

/// Classification outcome of one critical point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointClass {
    AInfinity,
    DInfinity,
    AOne,
    Other,
}

impl std::fmt::Display for PointClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PointClass::AInfinity => write!(f, "A_infinity"),
            PointClass::DInfinity => write!(f, "D_infinity"),
            PointClass::AOne => write!(f, "A_1"),
            PointClass::Other => write!(f, "other"),
        }
    }
}

/// A classified critical point.
#[derive(Debug, Clone)]
pub struct SingularPointClass {
    pub point: Vec<Scalar>,
    pub class: PointClass,
    pub local_j: Option<u64>,
    pub hessian_rank: Option<usize>,
}

fn scalar_rank(mut rows: Vec<Vec<Scalar>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        for r in rank + 1..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col].div(&rows[rank][col]);
            for c in col..ncols {
                let delta = rows[rank][c].mul(&factor);
                rows[r][c] = rows[r][c].sub(&delta);
            }
        }
        rank += 1;
    }
    rank
}

/// Classifies a critical point of `f`: off the locus of `sigma` a point is
/// Morse exactly when its Hessian has full rank; on the locus the translated
/// j-invariant separates the two stable transversal types.
pub fn classify_singular_point(
    f: &Polynomial,
    sigma: &Submodule,
    point: &[Scalar],
    budget: u64,
) -> Result<SingularPointClass, GermError> {
    let ctx = f.ctx().clone();
    assert_eq!(ctx.nparams(), 0, "classification runs on a fiber ring");
    assert_eq!(point.len(), ctx.nvars(), "point has the wrong number of coordinates");
    let loc = ctx.with_order(MonomialOrder::LocalDegrevlex);
    let g = f.translate_space(point).into_ctx(&loc);
    let zeros = vec![Scalar::zero(ctx.field()); ctx.nvars()];
    for i in 0..ctx.nvars() {
        if !g.derivative(i).eval(&zeros).is_zero() {
            return Err(GermError::NotCritical);
        }
    }
    let on_locus = sigma.gens().iter().all(|s| s.comp(0).eval(point).is_zero());
    if !on_locus {
        let hessian: Vec<Vec<Scalar>> = (0..ctx.nvars())
            .map(|i| (0..ctx.nvars()).map(|j| g.derivative(i).derivative(j).eval(&zeros)).collect())
            .collect();
        let rank = scalar_rank(hessian);
        let class = if rank == ctx.nvars() { PointClass::AOne } else { PointClass::Other };
        return Ok(SingularPointClass {
            point: point.to_vec(),
            class,
            local_j: None,
            hessian_rank: Some(rank),
        });
    }
    let sigma_loc = Submodule::ideal(
        loc.clone(),
        sigma.gens().iter().map(|s| s.comp(0).translate_space(point).into_ctx(&loc)).collect(),
    );
    let (class, local_j) = match j_invariant(&g, &sigma_loc, budget) {
        Ok(0) => (PointClass::AInfinity, Some(0)),
        Ok(1) => (PointClass::DInfinity, Some(1)),
        Ok(j) => (PointClass::Other, Some(j)),
        Err(_) => (PointClass::Other, None),
    };
    Ok(SingularPointClass { point: point.to_vec(), class, local_j, hessian_rank: None })
}

/// Tally of classified fiber points.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FiberCensus {
    pub a_one: usize,
    pub d_infinity: usize,
    pub a_infinity: usize,
    pub other: usize,
}

/// Report tying the j-invariant, the pair multiplicity of the Jacobian ideal
/// against the singular-locus ideal, and a census of a generic fiber of a
/// one-parameter deformation.
#[derive(Debug, Clone)]
pub struct PellikaanReport {
    pub j: u64,
    pub e_pair: u64,
    pub census: FiberCensus,
    pub classifications: Vec<SingularPointClass>,
    pub fiber_value: Scalar,
    pub j_equals_pair: bool,
    pub j_equals_census: bool,
    pub off_locus_global: u64,
    pub off_locus_declared: u64,
}

/// Computes the invariants of `f` with singular locus `i`, then classifies
/// the declared points of a generic fiber of the deformation `family_f` and
/// checks the two counting identities. Completeness of the declared points is
/// verified against a global count of critical points off the singular locus.
#[allow(clippy::too_many_arguments)]
pub fn pellikaan_report(
    f: &Polynomial,
    i: &Submodule,
    family_f: &Polynomial,
    sigma_family: &Submodule,
    points: &[Vec<Scalar>],
    stream: &mut GenericScalarStream,
    n_max: usize,
    budget: u64,
) -> Result<PellikaanReport, GermError> {
    let i2 = modops::power_in_sym(i, 2);
    if !i2.contains(&FreeElement::from_ideal_gen(f.clone())) {
        return Err(GermError::NotInSquare);
    }
    let j = j_invariant(f, i, budget)?;
    let jf = jacobian_module(&[], Some(f), JacobianScope::All)?;
    let e_pair = mult::pair_multiplicity(&jf, i, n_max, budget)?.value;

    let fam_ctx = family_f.ctx().clone();
    if fam_ctx.nparams() != 1 {
        return Err(GermError::UnsupportedBaseDim(fam_ctx.nparams()));
    }
    let fiber_value = stream.draw(fam_ctx.field());
    let bundle = Submodule::ideal(fam_ctx.clone(), vec![family_f.clone()]);
    let f_fib = polar::specialize(&bundle, &fiber_value, MonomialOrder::GlobalDegrevlex);
    let f_fib_poly = f_fib.gens()[0].comp(0).clone();
    let sigma_fib =
        polar::specialize(sigma_family, &fiber_value, MonomialOrder::GlobalDegrevlex);

    let mut census = FiberCensus::default();
    let mut classifications = Vec::new();
    for pt in points {
        let class = classify_singular_point(&f_fib_poly, &sigma_fib, pt, budget)?;
        match class.class {
            PointClass::AOne => census.a_one += 1,
            PointClass::DInfinity => census.d_infinity += 1,
            PointClass::AInfinity => census.a_infinity += 1,
            PointClass::Other => census.other += 1,
        }
        classifications.push(class);
    }

    // Global-versus-local completeness check for critical points that sit
    // off the singular locus of the fiber.
    let j_fib = jacobian_module(&[], Some(&f_fib_poly), JacobianScope::All)?;
    let sigma_polys: Vec<Polynomial> =
        sigma_fib.gens().iter().map(|g| g.comp(0).clone()).collect();
    let off_locus = modops::saturate(&j_fib, &sigma_polys);
    let off_locus_global =
        off_locus.colength(budget).map_err(|e| length_err(e, GermError::NotIsolated))?;
    let mut off_locus_declared = 0u64;
    for pt in points {
        let on_locus = sigma_fib.gens().iter().all(|s| s.comp(0).eval(pt).is_zero());
        if !on_locus {
            let local = polar::localize_at(&j_fib, pt);
            off_locus_declared +=
                local.colength(budget).map_err(|e| length_err(e, GermError::NotIsolated))?;
        }
    }
    if off_locus_declared != off_locus_global {
        return Err(GermError::IncompletePointList {
            declared: off_locus_declared,
            global: off_locus_global,
        });
    }

    let census_total = (census.d_infinity + census.a_one) as u64;
    Ok(PellikaanReport {
        j,
        e_pair,
        census,
        classifications,
        fiber_value,
        j_equals_pair: j == e_pair,
        j_equals_census: j == census_total,
        off_locus_global,
        off_locus_declared,
    })
}

/// A finite map germ in corank-one shape: the first component is the first
/// source variable and the germ is finite in the remaining source direction.
#[derive(Debug, Clone)]
pub struct MapGerm {
    pub source: Ctx,
    pub target: Ctx,
    /// One component per target variable, written in the source ring.
    pub components: Vec<Polynomial>,
    /// Index of the source variable carrying the finite direction.
    pub finite_var: usize,
}

impl MapGerm {
    pub fn new(source: Ctx, target: Ctx, components: Vec<Polynomial>) -> MapGerm {
        assert_eq!(components.len(), target.nspace(), "one component per target variable");
        assert!(source.nparams() == 0 && target.nparams() == 0, "germ rings have no parameters");
        for c in &components {
            assert!(c.ctx().compatible(&source), "component from another context");
        }
        let finite_var = source.nvars() - 1;
        MapGerm { source, target, components, finite_var }
    }
}

/// A presentation of the pushforward of the source ring over the target,
/// with the two Fitting ideals read off its matrix.
#[derive(Debug, Clone)]
pub struct Pushforward {
    /// Number of sheets: the colength of the pulled-back maximal ideal.
    pub sheets: usize,
    /// Minimal relation set among the basis 1, v, …, v^{sheets−1}.
    pub presentation: Submodule,
    /// Presentation matrix (sheets rows, one column per relation).
    pub matrix: Vec<Vec<Polynomial>>,
    /// Ideal of maximal minors: the equation of the image.
    pub f0: Submodule,
    /// Ideal of next-size minors: the conductor on the image.
    pub f1: Submodule,
}

/// Drops elements that already lie in the span of the others, biggest
/// first, leaving a minimal generating set in a deterministic order.
fn prune_redundant(ctx: &Ctx, rank: usize, elems: Vec<FreeElement>) -> Vec<FreeElement> {
    let mut kept: Vec<FreeElement> = elems.into_iter().filter(|e| !e.is_zero()).collect();
    kept.sort_by_key(|e| {
        (e.deg(), e.comps().iter().map(|c| c.terms().len()).sum::<usize>(), format!("{e}"))
    });
    let mut idx = kept.len();
    while idx > 0 {
        idx -= 1;
        let candidate = kept.remove(idx);
        let others = Submodule::new(ctx.clone(), rank, kept.clone());
        if !others.contains(&candidate) {
            kept.insert(idx, candidate);
        }
    }
    kept
}

/// Computes a presentation of the pushforward module of a finite corank-one
/// map germ over its target, using the powers of the finite source direction
/// as a basis, and reads off the two Fitting ideals.
pub fn pushforward_presentation(germ: &MapGerm, budget: u64) -> Result<Pushforward, GermError> {
    let src = germ.source.with_order(MonomialOrder::LocalDegrevlex);
    let first = Polynomial::var(src.clone(), 0);
    if germ.components[0].into_ctx(&src) != first {
        return Err(GermError::NotCorank1);
    }
    let pullback = Submodule::ideal(
        src.clone(),
        germ.components.iter().map(|c| c.into_ctx(&src)).collect(),
    );
    let sheets =
        pullback.colength(budget).map_err(|e| length_err(e, GermError::NotFinite))? as usize;

    // Combined ring with the source variables in the leading block, so that
    // eliminating them projects onto the target.
    let src_n = germ.source.nvars();
    let names: Vec<String> = germ
        .source
        .var_names()
        .into_iter()
        .chain(germ.target.var_names())
        .collect();
    let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let comb = RingContext::new(
        &name_refs,
        &[],
        germ.source.field(),
        MonomialOrder::EliminationBlock(src_n),
    );
    let src_map: Vec<Polynomial> = (0..src_n).map(|i| Polynomial::var(comb.clone(), i)).collect();
    let graph_gens: Vec<Polynomial> = germ
        .components
        .iter()
        .enumerate()
        .map(|(j, c)| Polynomial::var(comb.clone(), src_n + j).sub(&c.substitute(&comb, &src_map)))
        .collect();
    let graph = Submodule::ideal(comb.clone(), graph_gens);

    let v = Polynomial::var(comb.clone(), germ.finite_var);
    let basis: Vec<FreeElement> =
        (0..sheets).map(|i| FreeElement::from_ideal_gen(v.pow(i as u32))).collect();
    let relations_comb = modops::preimage_submodule(&basis, &graph);
    let (_, rel_elems) = modops::eliminate(&relations_comb, &(0..src_n).collect::<Vec<_>>());

    let tloc = germ.target.with_order(MonomialOrder::LocalDegrevlex);
    let rels: Vec<FreeElement> =
        rel_elems.iter().map(|e| e.into_ctx(&tloc)).collect();
    let rels = prune_redundant(&tloc, sheets, rels);
    if rels.len() < sheets {
        return Err(GermError::PresentationDeficient);
    }
    let matrix: Vec<Vec<Polynomial>> =
        (0..sheets).map(|i| rels.iter().map(|r| r.comp(i).clone()).collect()).collect();
    let f0 = Submodule::ideal(tloc.clone(), modops::minors(&tloc, &matrix, sheets));
    let f1 = Submodule::ideal(tloc.clone(), modops::minors(&tloc, &matrix, sheets - 1));
    Ok(Pushforward {
        sheets,
        presentation: Submodule::new(tloc, sheets, rels),
        matrix,
        f0,
        f1,
    })
}

/// Invariants of the image of a finite corank-one map germ built from its
/// conductor: the pair multiplicity against the Jacobian ideal, the two
/// conductor quotients, and the image Milnor number tying them together.
#[derive(Debug, Clone)]
pub struct DisentanglementReport {
    pub image_ideal: Submodule,
    pub conductor: Submodule,
    pub conductor_sub: Submodule,
    pub e_pair: u64,
    pub dim_c_over_cp: u64,
    pub dim_c_over_j: u64,
    pub dim_c_over_j_pullback: u64,
    pub mu: i64,
    /// e_pair + dim C/C_P = dim C/J, all three computed independently.
    pub quotient_identity: bool,
    /// mu = e_pair + dim C/C_P − dim C/(J pulled back to the source).
    pub mu_identity: bool,
    /// Generator-count emptiness of the codimension-3 polar locus of the
    /// conductor agrees with the vanishing of dim C/C_P.
    pub polar_empty_consistent: bool,
}

/// Computes the conductor-based invariants of the image of a map germ and
/// evaluates the identities connecting them.
pub fn disentanglement_report(
    germ: &MapGerm,
    stream: &mut GenericScalarStream,
    n_max: usize,
    budget: u64,
) -> Result<DisentanglementReport, GermError> {
    let push = pushforward_presentation(germ, budget)?;
    let tloc = push.f0.ctx().clone();
    let f_im = push.f0.gens()[0].comp(0).clone();
    let conductor = Submodule::new(
        tloc.clone(),
        1,
        prune_redundant(&tloc, 1, push.f1.gens().to_vec()),
    );
    let jf = jacobian_module(&[], Some(&f_im), JacobianScope::All)?;

    // Pair multiplicity of the Jacobian ideal inside the conductor, both
    // viewed as ideals of the ambient target ring.
    let e_pair = mult::pair_multiplicity(&jf, &conductor, n_max, budget)?.value;

    // dim C/C_P with C_P three drawn combinations; two draws must agree.
    let mut dim_c_over_cp = None;
    let mut conductor_sub = None;
    for _ in 0..GENERIC_RETRIES {
        let cp1 = Submodule::new(tloc.clone(), 1, modops::generic_combinations(&conductor, 3, stream));
        let cp2 = Submodule::new(tloc.clone(), 1, modops::generic_combinations(&conductor, 3, stream));
        let v1 = mult::quotient_length(&cp1, &conductor, budget)?;
        let v2 = mult::quotient_length(&cp2, &conductor, budget)?;
        if v1 == v2 {
            dim_c_over_cp = Some(v1);
            conductor_sub = Some(cp1);
            break;
        }
    }
    let (dim_c_over_cp, conductor_sub) = match (dim_c_over_cp, conductor_sub) {
        (Some(v), Some(cp)) => (v, cp),
        _ => return Err(MultError::InfiniteWitness { retries: GENERIC_RETRIES }.into()),
    };

    let dim_c_over_j = mult::quotient_length(&jf, &conductor, budget)?;

    // Pull the conductor and the Jacobian ideal back to the source.
    let src = germ.source.with_order(MonomialOrder::LocalDegrevlex);
    let comp_map: Vec<Polynomial> = germ.components.iter().map(|c| c.into_ctx(&src)).collect();
    let pull = |sub: &Submodule| -> Submodule {
        Submodule::ideal(
            src.clone(),
            sub.gens().iter().map(|g| g.comp(0).substitute(&src, &comp_map)).collect(),
        )
    };
    let dim_c_over_j_pullback = mult::quotient_length(&pull(&jf), &pull(&conductor), budget)?;

    let mu = e_pair as i64 + dim_c_over_cp as i64 - dim_c_over_j_pullback as i64;
    let polar_empty =
        (conductor.ngens() as i64) - 3 - (conductor.generic_rank() as i64) + 1 < 1;
    Ok(DisentanglementReport {
        image_ideal: push.f0,
        conductor: conductor.clone(),
        conductor_sub,
        e_pair,
        dim_c_over_cp,
        dim_c_over_j,
        dim_c_over_j_pullback,
        mu,
        quotient_identity: e_pair + dim_c_over_cp == dim_c_over_j,
        mu_identity: mu == e_pair as i64 + dim_c_over_cp as i64 - dim_c_over_j_pullback as i64,
        polar_empty_consistent: polar_empty == (dim_c_over_cp == 0),
    })
}

/// Milnor number of an isolated complete intersection singularity, by the
/// two-term recursion over the ordered equation list.
pub fn milnor_icis(eqs: &[Polynomial], budget: u64) -> Result<u64, GermError> {
    if eqs.is_empty() {
        return Ok(0);
    }
    let ctx = eqs[0].ctx().with_order(MonomialOrder::LocalDegrevlex);
    let eqs: Vec<Polynomial> = eqs.iter().map(|p| p.into_ctx(&ctx)).collect();
    let nv = ctx.nvars();
    let mut mu_prev: i64 = 0;
    for i in 1..=eqs.len() {
        let jac: Vec<Vec<Polynomial>> =
            eqs[..i].iter().map(|p| (0..nv).map(|v| p.derivative(v)).collect()).collect();
        let mut gens: Vec<Polynomial> = eqs[..i - 1].to_vec();
        gens.extend(modops::minors(&ctx, &jac, i));
        let step = Submodule::ideal(ctx.clone(), gens)
            .colength(budget)
            .map_err(|e| length_err(e, GermError::NotIcis))? as i64;
        mu_prev = step - mu_prev;
        if mu_prev < 0 {
            return Err(GermError::NotIcis);
        }
    }
    Ok(mu_prev as u64)
}

/// Index of a 1-form on an isolated complete intersection, via the
/// difference of two module multiplicities plus a sliced Milnor number.
#[derive(Debug, Clone)]
pub struct OneFormIndexReport {
    pub index: i64,
    pub e_omega: Option<u64>,
    pub e_reference: Option<u64>,
    /// True when the two modules coincide and their terms cancel exactly.
    pub cancelled: bool,
    pub slice_milnor: u64,
    pub dim_d: usize,
    pub assumptions: Vec<String>,
}

/// Builds the augmented Jacobian module of the equations with an extra
/// coefficient row, over the given ring.
fn augmented_jacobian(ctx: &Ctx, eqs: &[Polynomial], row: &[Polynomial]) -> Submodule {
    let nv = ctx.nvars();
    assert_eq!(row.len(), nv, "one row coefficient per variable");
    let rank = eqs.len() + 1;
    let gens = (0..nv)
        .map(|i| {
            let mut comps: Vec<Polynomial> =
                eqs.iter().map(|p| p.derivative(i).into_ctx(ctx)).collect();
            comps.push(row[i].into_ctx(ctx));
            FreeElement::new(comps)
        })
        .collect();
    Submodule::new(ctx.clone(), rank, gens)
}

/// Computes the index of the 1-form with coefficient vector `omega` on the
/// complete intersection cut by `x_eqs`, against the differential of the
/// linear function `l` (asserted generic by the caller).
pub fn one_form_index(
    x_eqs: &[Polynomial],
    omega: &FreeElement,
    l: &Polynomial,
    n_max: usize,
    budget: u64,
) -> Result<OneFormIndexReport, GermError> {
    let ctx = l.ctx().with_order(MonomialOrder::LocalDegrevlex);
    let nv = ctx.nvars();
    assert_eq!(omega.rank(), nv, "one form coefficient per variable");
    let eqs: Vec<Polynomial> = x_eqs.iter().map(|p| p.into_ctx(&ctx)).collect();
    milnor_icis(&eqs, budget)?;
    let d = nv - eqs.len();

    let on_x = if eqs.is_empty() { ctx.clone() } else { ctx.with_quotient(&eqs) };
    let omega_row: Vec<Polynomial> = omega.comps().iter().map(|p| p.into_ctx(&on_x)).collect();
    let dl_row: Vec<Polynomial> = (0..nv).map(|i| l.derivative(i).into_ctx(&on_x)).collect();
    let jm_omega = augmented_jacobian(&on_x, &eqs, &omega_row);
    let jm_dl = augmented_jacobian(&on_x, &eqs, &dl_row);

    let mut slice_eqs = eqs.clone();
    slice_eqs.push(l.into_ctx(&ctx));
    let slice_milnor = milnor_icis(&slice_eqs, budget)?;

    let assumptions = vec!["linear form asserted generic".to_string()];
    if jm_omega.module_eq(&jm_dl) {
        return Ok(OneFormIndexReport {
            index: slice_milnor as i64,
            e_omega: None,
            e_reference: None,
            cancelled: true,
            slice_milnor,
            dim_d: d,
            assumptions,
        });
    }
    let br = |m: &Submodule| -> Result<u64, GermError> {
        match mult::buchsbaum_rim(m, n_max, budget) {
            Ok(r) => Ok(r.value),
            Err(MultError::InfiniteColength) => Err(GermError::NotIsolated),
            Err(e) => Err(e.into()),
        }
    };
    let e_omega = br(&jm_omega)?;
    let e_reference = br(&jm_dl)?;
    Ok(OneFormIndexReport {
        index: e_omega as i64 - e_reference as i64 + slice_milnor as i64,
        e_omega: Some(e_omega),
        e_reference: Some(e_reference),
        cancelled: false,
        slice_milnor,
        dim_d: d,
        assumptions,
    })
}

/// Fiberwise values of the weighted Jacobian multiplicity of a family.
#[derive(Debug, Clone)]
pub struct WfReport {
    pub e_f_zero: u64,
    pub e_l_zero: u64,
    pub e_f_sample: u64,
    pub e_l_sample: u64,
    pub difference_zero: i64,
    pub difference_sample: i64,
    pub independent: bool,
    pub y_sample: Scalar,
}

/// Evaluates, at the special fiber and at one sampled base value, the
/// multiplicity of the maximal-ideal multiple of the augmented Jacobian
/// module of (equations; function), for the family function `f` and the
/// reference function `l`, and reports whether the leading value is
/// independent of the base point.
pub fn wf_invariant(
    x_eqs: &[Polynomial],
    f: &Polynomial,
    l: &Polynomial,
    y_sample: &Scalar,
    n_max: usize,
    budget: u64,
) -> Result<WfReport, GermError> {
    let fam_ctx = f.ctx().clone();
    if fam_ctx.nparams() != 1 {
        return Err(GermError::UnsupportedBaseDim(fam_ctx.nparams()));
    }
    let mut bundle_gens = vec![f.clone(), l.clone()];
    bundle_gens.extend(x_eqs.iter().cloned());
    let bundle = Submodule::ideal(fam_ctx.clone(), bundle_gens);

    let eval_at = |y: &Scalar, budget: u64| -> Result<(u64, u64), GermError> {
        let fib = polar::specialize(&bundle, y, MonomialOrder::LocalDegrevlex);
        let fib_ctx = fib.ctx().clone();
        let f_y = fib.gens()[0].comp(0).clone();
        let l_y = fib.gens()[1].comp(0).clone();
        let eqs_y: Vec<Polynomial> =
            fib.gens()[2..].iter().map(|g| g.comp(0).clone()).collect();
        milnor_icis(&eqs_y, budget)?;
        let on_x = if eqs_y.is_empty() { fib_ctx.clone() } else { fib_ctx.with_quotient(&eqs_y) };
        let m_gens: Vec<Polynomial> =
            (0..on_x.nvars()).map(|i| Polynomial::var(on_x.clone(), i)).collect();
        let weighted = |g: &Polynomial| -> Result<u64, GermError> {
            let row: Vec<Polynomial> =
                (0..on_x.nvars()).map(|i| g.derivative(i).into_ctx(&on_x)).collect();
            let eqs_on: Vec<Polynomial> = eqs_y.iter().map(|p| p.into_ctx(&on_x)).collect();
            let jm = augmented_jacobian(&on_x, &eqs_on, &row);
            let m_jm = modops::ideal_times_module(&m_gens, &jm);
            match mult::buchsbaum_rim(&m_jm, n_max, budget) {
                Ok(r) => Ok(r.value),
                Err(MultError::InfiniteColength) => Err(GermError::NotIsolated),
                Err(e) => Err(e.into()),
            }
        };
        Ok((weighted(&f_y)?, weighted(&l_y)?))
    };

    let zero = Scalar::zero(fam_ctx.field());
    let (e_f_zero, e_l_zero) = eval_at(&zero, budget)?;
    let (e_f_sample, e_l_sample) = eval_at(y_sample, budget)?;
    Ok(WfReport {
        e_f_zero,
        e_l_zero,
        e_f_sample,
        e_l_sample,
        difference_zero: e_f_zero as i64 - e_l_zero as i64,
        difference_sample: e_f_sample as i64 - e_l_sample as i64,
        independent: e_f_zero == e_f_sample,
        y_sample: y_sample.clone(),
    })
}
