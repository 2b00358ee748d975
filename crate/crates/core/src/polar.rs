//! Polar loci of module generator matrices over a one-parameter base, the
//! multiplicity of such a locus over the base, and the family checker that
//! compares the jump of a pair multiplicity across a family with the
//! difference of the two extreme polar multiplicities.

use crate::free::FreeElement;
use crate::genstream::GenericScalarStream;
use crate::modops;
use crate::mult::{self, MultError};
use crate::order::MonomialOrder;
use crate::poly::Polynomial;
use crate::ring::{CtxExt, RingContext};
use crate::scalar::Scalar;
use crate::submodule::Submodule;
use thiserror::Error;

/// Number of fresh base points tried before giving up on a fiber.
const FIBER_RETRIES: usize = 4;

/// Failure modes of the polar computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolarError {
    /// The polar locus meets a generic fiber in a positive-dimensional set.
    #[error("polar locus is not finite over the base")]
    NotFiniteOverBase,
    /// Bases of dimension other than one are not supported.
    #[error("unsupported base dimension {0}; only one base parameter is handled")]
    UnsupportedBaseDim(usize),
    /// The declared fiber points do not account for the whole fiber length.
    #[error("declared fiber points carry length {declared} but the fiber carries {global}")]
    FiberPointDiscovery { declared: u64, global: u64 },
    #[error(transparent)]
    Mult(#[from] MultError),
}

/// A polar locus of codimension `k`, together with the generic rows that
/// defined it and, once computed, its multiplicity over the base.
#[derive(Debug, Clone)]
pub struct PolarReport {
    pub k: usize,
    /// Ideal of the polar locus in a global order; the unit ideal when empty.
    pub gamma_ideal: Submodule,
    /// The drawn constant rows appended to the generator matrix.
    pub submersion_rows: Vec<Vec<Scalar>>,
    /// True when the generator count already forces the locus to be empty.
    pub empty: bool,
    /// Multiplicity over the base, filled by [`polar_mult_over_base`].
    pub mult_over_base: Option<u64>,
    /// Colength data at the sampled base point, filled alongside.
    pub fiber_witness: Option<FiberWitness>,
}

/// Colength evidence gathered at one generic base value.
#[derive(Debug, Clone)]
pub struct FiberWitness {
    pub y0: Scalar,
    pub colength: u64,
}

/// A one-parameter family of nested submodules with declared fiber support
/// points and user-asserted hypotheses.
#[derive(Debug, Clone)]
pub struct FamilySpec {
    pub m: Submodule,
    pub n: Submodule,
    /// Fiber-space coordinates of the points supporting N/M at a generic
    /// base value; points are expected to converge to the origin with y.
    pub fiber_points: Vec<Vec<Scalar>>,
    /// User-asserted hypotheses, echoed verbatim into reports.
    pub assumptions: Vec<String>,
}

impl FamilySpec {
    pub fn new(m: Submodule, n: Submodule) -> FamilySpec {
        assert!(m.ctx().compatible(n.ctx()), "family modules over mismatched contexts");
        assert_eq!(m.rank(), n.rank(), "family modules need a common ambient rank");
        FamilySpec { m, n, fiber_points: Vec::new(), assumptions: Vec::new() }
    }

    pub fn with_points(mut self, points: Vec<Vec<Scalar>>) -> FamilySpec {
        self.fiber_points = points;
        self
    }

    pub fn with_assumptions(mut self, assumptions: Vec<String>) -> FamilySpec {
        self.assumptions = assumptions;
        self
    }
}

/// Two-sided summary of the family identity: the pair-multiplicity jump on
/// the left, the difference of polar multiplicities on the right.
#[derive(Debug, Clone)]
pub struct FamilyReport {
    pub e_origin: u64,
    pub e_fiber_sum: u64,
    pub delta_e: i64,
    pub gamma_m: PolarReport,
    pub gamma_n: PolarReport,
    pub rhs: i64,
    pub verdict: bool,
    pub y0: Scalar,
    pub fiber_global_length: u64,
    pub fiber_local_lengths: Vec<u64>,
    pub assumptions: Vec<String>,
}

/// Ideal of the codimension-`k` polar locus of M: minors of the generator
/// matrix augmented with drawn constant rows, saturated by the minors that
/// cut out the rank-drop locus of M itself.
pub fn polar_ideal(m: &Submodule, k: usize, stream: &mut GenericScalarStream) -> PolarReport {
    assert!(k >= 1, "polar codimension must be at least 1");
    let ctx = m.ctx().clone();
    let glob = ctx.with_order(MonomialOrder::GlobalDegrevlex);
    let p_m = m.ngens();
    let e = m.generic_rank();
    let rows_needed = p_m as i64 - k as i64 - e as i64 + 1;
    if rows_needed < 1 {
        return PolarReport {
            k,
            gamma_ideal: Submodule::ideal(glob.clone(), vec![Polynomial::one(glob)]),
            submersion_rows: Vec::new(),
            empty: true,
            mult_over_base: Some(0),
            fiber_witness: None,
        };
    }
    let gen_matrix: Vec<Vec<Polynomial>> = m
        .matrix()
        .iter()
        .map(|row| row.iter().map(|p| p.into_ctx(&glob)).collect())
        .collect();
    let submersion_rows: Vec<Vec<Scalar>> =
        (0..rows_needed).map(|_| stream.draw_row(glob.field(), p_m)).collect();
    let mut augmented = gen_matrix.clone();
    for row in &submersion_rows {
        augmented.push(row.iter().map(|c| Polynomial::constant(glob.clone(), c.clone())).collect());
    }
    let raw = modops::minors(&glob, &augmented, p_m - k + 1);
    let rank_drop = modops::minors(&glob, &gen_matrix, e);
    let gamma_ideal = modops::saturate(&Submodule::ideal(glob, raw), &rank_drop);
    let empty = gamma_ideal.gens().iter().any(|g| g.comp(0).is_unit_constant());
    PolarReport {
        k,
        gamma_ideal,
        submersion_rows,
        empty,
        mult_over_base: if empty { Some(0) } else { None },
        fiber_witness: None,
    }
}

/// Builds the fiber ring at one base value and specializes a submodule to it.
pub fn specialize(sub: &Submodule, y0: &Scalar, order: MonomialOrder) -> Submodule {
    let ctx = sub.ctx().clone();
    assert_eq!(ctx.nparams(), 1, "specialization needs exactly one base parameter");
    let names = ctx.var_names();
    let space: Vec<&str> = names[1..].iter().map(|s| s.as_str()).collect();
    let mut fiber = RingContext::new(&space, &[], ctx.field(), order).with_dim(ctx.dim_d());
    let mut map = vec![Polynomial::constant(fiber.clone(), y0.clone())];
    for i in 0..space.len() {
        map.push(Polynomial::var(fiber.clone(), i));
    }
    if ctx.has_quotient() {
        let q: Vec<Polynomial> =
            ctx.quotient_polys().iter().map(|p| p.substitute(&fiber, &map)).collect();
        fiber = fiber.with_quotient(&q);
        for p in &mut map {
            *p = p.into_ctx(&fiber);
        }
    }
    let gens = sub
        .gens()
        .iter()
        .map(|g| {
            FreeElement::new(g.comps().iter().map(|c| c.substitute(&fiber, &map)).collect())
        })
        .collect();
    Submodule::new(fiber, sub.rank(), gens)
}

/// Moves a fiber point to the origin of a fresh local ring.
pub fn localize_at(sub: &Submodule, point: &[Scalar]) -> Submodule {
    let loc = sub.ctx().with_order(MonomialOrder::LocalDegrevlex);
    let gens = sub
        .gens()
        .iter()
        .map(|g| {
            FreeElement::new(
                g.comps().iter().map(|c| c.translate_space(point).into_ctx(&loc)).collect(),
            )
        })
        .collect();
    Submodule::new(loc, sub.rank(), gens)
}

/// Multiplicity of the polar locus over the base: the colength of its
/// specialization at a generic base value, retried over fresh draws. Fills
/// the report's `mult_over_base` and `fiber_witness` fields.
pub fn polar_mult_over_base(
    rep: &mut PolarReport,
    stream: &mut GenericScalarStream,
    budget: u64,
) -> Result<u64, PolarError> {
    if rep.empty {
        rep.mult_over_base = Some(0);
        return Ok(0);
    }
    let ctx = rep.gamma_ideal.ctx().clone();
    if ctx.nparams() != 1 {
        return Err(PolarError::UnsupportedBaseDim(ctx.nparams()));
    }
    for _ in 0..FIBER_RETRIES {
        let y0 = stream.draw(ctx.field());
        let fiber = specialize(&rep.gamma_ideal, &y0, MonomialOrder::GlobalDegrevlex);
        match fiber.colength(budget) {
            Ok(c) => {
                rep.mult_over_base = Some(c);
                rep.fiber_witness = Some(FiberWitness { y0, colength: c });
                return Ok(c);
            }
            Err(crate::gb::ColengthError::Infinite) => continue,
            Err(crate::gb::ColengthError::Budget(b)) => return Err(MultError::Budget(b).into()),
        }
    }
    Err(PolarError::NotFiniteOverBase)
}

/// Checks the family identity: the drop of the pair multiplicity from the
/// special fiber to a generic one equals the difference of the multiplicities
/// of the two extreme polar loci over the base.
pub fn multiplicity_polar_check(
    fam: &FamilySpec,
    stream: &mut GenericScalarStream,
    n_max: usize,
    budget: u64,
) -> Result<FamilyReport, PolarError> {
    let ctx = fam.m.ctx().clone();
    if ctx.nparams() != 1 {
        return Err(PolarError::UnsupportedBaseDim(ctx.nparams()));
    }
    if !fam.n.contains_module(&fam.m) {
        return Err(MultError::NotContained.into());
    }
    let d = ctx.dim_d();

    // Left side: pair multiplicity at the origin of the special fiber.
    let zero = Scalar::zero(ctx.field());
    let m0 = specialize(&fam.m, &zero, MonomialOrder::LocalDegrevlex);
    let n0 = specialize(&fam.n, &zero, MonomialOrder::LocalDegrevlex);
    let e_origin = mult::pair_multiplicity(&m0, &n0, n_max, budget)?.value;

    // Generic fiber: verify the declared points account for the whole length,
    // then sum their local pair multiplicities.
    let y0 = stream.draw(ctx.field());
    let mg = specialize(&fam.m, &y0, MonomialOrder::GlobalDegrevlex);
    let ng = specialize(&fam.n, &y0, MonomialOrder::GlobalDegrevlex);
    let fiber_global_length = mult::quotient_length(&mg, &ng, budget)?;
    let mut fiber_local_lengths = Vec::new();
    let mut e_fiber_sum = 0u64;
    for pt in &fam.fiber_points {
        let m_pt = localize_at(&mg, pt);
        let n_pt = localize_at(&ng, pt);
        fiber_local_lengths.push(mult::quotient_length(&m_pt, &n_pt, budget)?);
        e_fiber_sum += mult::pair_multiplicity(&m_pt, &n_pt, n_max, budget)?.value;
    }
    let declared: u64 = fiber_local_lengths.iter().sum();
    if declared != fiber_global_length {
        return Err(PolarError::FiberPointDiscovery { declared, global: fiber_global_length });
    }
    let delta_e = e_origin as i64 - e_fiber_sum as i64;

    // Right side: multiplicities of the extreme polar loci over the base.
    let mut gamma_m = polar_ideal(&fam.m, d, stream);
    let mult_m = polar_mult_over_base(&mut gamma_m, stream, budget)?;
    let mut gamma_n = polar_ideal(&fam.n, d, stream);
    let mult_n = polar_mult_over_base(&mut gamma_n, stream, budget)?;
    let rhs = mult_m as i64 - mult_n as i64;

    Ok(FamilyReport {
        e_origin,
        e_fiber_sum,
        delta_e,
        gamma_m,
        gamma_n,
        rhs,
        verdict: delta_e == rhs,
        y0,
        fiber_global_length,
        fiber_local_lengths,
        assumptions: fam.assumptions.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;
    use crate::ring::Ctx;
    use crate::scalar::Field;

    fn family_ctx() -> Ctx {
        RingContext::new(&["x"], &["y"], Field::Rat, MonomialOrder::LocalDegrevlex)
    }

    fn ideal_of(ctx: &Ctx, gens: &[&str]) -> Submodule {
        Submodule::ideal(
            ctx.clone(),
            gens.iter().map(|s| parse_polynomial(ctx, s).unwrap()).collect(),
        )
    }

    #[test]
    fn polar_of_two_generator_ideal_is_a_drawn_line() {
        let ctx = family_ctx();
        let m = ideal_of(&ctx, &["x^2", "x*y"]);
        let mut stream = GenericScalarStream::new(7);
        let rep = polar_ideal(&m, 1, &mut stream);
        assert!(!rep.empty);
        assert_eq!(rep.submersion_rows.len(), 1);
        // The saturation strips the rank-drop factor x, leaving b·x − a·y.
        let (a, b) = (rep.submersion_rows[0][0].clone(), rep.submersion_rows[0][1].clone());
        let glob = rep.gamma_ideal.ctx().clone();
        let expected = Polynomial::var(glob.clone(), 1)
            .scale(&b)
            .sub(&Polynomial::var(glob.clone(), 0).scale(&a));
        assert_eq!(rep.gamma_ideal.gens().len(), 1);
        assert!(rep.gamma_ideal.contains(&FreeElement::from_ideal_gen(expected.clone())));
        assert!(Submodule::ideal(glob, vec![expected]).contains_module(&rep.gamma_ideal));
    }

    #[test]
    fn polar_multiplicity_of_the_drawn_line_is_one() {
        let ctx = family_ctx();
        let m = ideal_of(&ctx, &["x^2", "x*y"]);
        let mut stream = GenericScalarStream::new(7);
        let mut rep = polar_ideal(&m, 1, &mut stream);
        let v = polar_mult_over_base(&mut rep, &mut stream, mult::DEFAULT_BUDGET).unwrap();
        assert_eq!(v, 1);
        assert_eq!(rep.mult_over_base, Some(1));
        assert!(rep.fiber_witness.is_some());
    }

    #[test]
    fn polar_multiplicity_is_seed_stable() {
        let ctx = family_ctx();
        let m = ideal_of(&ctx, &["x^2", "x*y"]);
        for seed in [1, 99] {
            let mut stream = GenericScalarStream::new(seed);
            let mut rep = polar_ideal(&m, 1, &mut stream);
            let v = polar_mult_over_base(&mut rep, &mut stream, mult::DEFAULT_BUDGET).unwrap();
            assert_eq!(v, 1, "seed {seed}");
        }
    }

    #[test]
    fn polar_of_principal_ideal_is_empty() {
        let ctx = family_ctx();
        let m = ideal_of(&ctx, &["x^2"]);
        let mut stream = GenericScalarStream::new(3);
        let rep = polar_ideal(&m, 1, &mut stream);
        assert!(rep.empty);
        assert_eq!(rep.mult_over_base, Some(0));
        assert!(rep.gamma_ideal.gens()[0].comp(0).is_unit_constant());
    }

    #[test]
    fn polar_of_free_module_is_empty() {
        let ctx = family_ctx();
        let m = Submodule::full(ctx.clone(), 2);
        let mut stream = GenericScalarStream::new(3);
        let rep = polar_ideal(&m, 1, &mut stream);
        assert!(rep.empty);
    }

    #[test]
    fn degree_two_cover_of_the_base() {
        let ctx = family_ctx();
        let glob = ctx.with_order(MonomialOrder::GlobalDegrevlex);
        let gamma = ideal_of(&glob, &["x^2 - y"]);
        let mut rep = PolarReport {
            k: 1,
            gamma_ideal: gamma,
            submersion_rows: Vec::new(),
            empty: false,
            mult_over_base: None,
            fiber_witness: None,
        };
        let mut stream = GenericScalarStream::new(17);
        let v = polar_mult_over_base(&mut rep, &mut stream, mult::DEFAULT_BUDGET).unwrap();
        assert_eq!(v, 2);
    }

    #[test]
    fn vertical_locus_is_rejected_as_not_finite() {
        let ctx = family_ctx();
        let glob = ctx.with_order(MonomialOrder::GlobalDegrevlex);
        // The whole fiber x-axis sits over every base value.
        let gamma = Submodule::zero(glob.clone(), 1);
        let mut rep = PolarReport {
            k: 1,
            gamma_ideal: gamma,
            submersion_rows: Vec::new(),
            empty: false,
            mult_over_base: None,
            fiber_witness: None,
        };
        let mut stream = GenericScalarStream::new(1);
        let err = polar_mult_over_base(&mut rep, &mut stream, mult::DEFAULT_BUDGET);
        assert_eq!(err.unwrap_err(), PolarError::NotFiniteOverBase);
    }

    #[test]
    fn family_identity_for_the_module_jump() {
        let ctx = family_ctx();
        let fam = FamilySpec::new(ideal_of(&ctx, &["x^2", "x*y"]), ideal_of(&ctx, &["x"]));
        let mut stream = GenericScalarStream::new(29);
        let rep =
            multiplicity_polar_check(&fam, &mut stream, 4, mult::DEFAULT_BUDGET).unwrap();
        assert_eq!(rep.e_origin, 1);
        assert_eq!(rep.e_fiber_sum, 0);
        assert_eq!(rep.delta_e, 1);
        assert_eq!(rep.gamma_m.mult_over_base, Some(1));
        assert_eq!(rep.gamma_n.mult_over_base, Some(0));
        assert_eq!(rep.rhs, 1);
        assert!(rep.verdict);
    }

    #[test]
    fn constant_family_has_zero_jump_and_empty_polars() {
        let ctx = family_ctx();
        let fam = FamilySpec::new(ideal_of(&ctx, &["x^2"]), ideal_of(&ctx, &["x"]))
            .with_points(vec![vec![Scalar::zero(Field::Rat)]]);
        let mut stream = GenericScalarStream::new(31);
        let rep =
            multiplicity_polar_check(&fam, &mut stream, 4, mult::DEFAULT_BUDGET).unwrap();
        assert_eq!(rep.e_origin, 1);
        assert_eq!(rep.e_fiber_sum, 1);
        assert_eq!(rep.delta_e, 0);
        assert!(rep.gamma_m.empty && rep.gamma_n.empty);
        assert_eq!(rep.rhs, 0);
        assert!(rep.verdict);
    }

    #[test]
    fn missing_fiber_point_is_detected() {
        let ctx = family_ctx();
        // N/M has length 1 at x = 0 on every fiber, but no point is declared.
        let fam = FamilySpec::new(ideal_of(&ctx, &["x^2"]), ideal_of(&ctx, &["x"]));
        let mut stream = GenericScalarStream::new(37);
        let err = multiplicity_polar_check(&fam, &mut stream, 4, mult::DEFAULT_BUDGET);
        assert_eq!(
            err.unwrap_err(),
            PolarError::FiberPointDiscovery { declared: 0, global: 1 }
        );
    }

    #[test]
    fn multiparameter_bases_are_rejected() {
        let ctx = RingContext::new(&["x"], &["y", "z"], Field::Rat, MonomialOrder::LocalDegrevlex);
        let fam = FamilySpec::new(ideal_of(&ctx, &["x^2"]), ideal_of(&ctx, &["x"]));
        let mut stream = GenericScalarStream::new(41);
        let err = multiplicity_polar_check(&fam, &mut stream, 3, mult::DEFAULT_BUDGET);
        assert_eq!(err.unwrap_err(), PolarError::UnsupportedBaseDim(2));
    }
}
