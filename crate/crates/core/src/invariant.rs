//! Detection and certification of invariant objects: cofactors, invariant
//! hypersurfaces, exponential factors, extactic polynomials, multiplicities
//! and the meridian/parallel searches on the ellipsoid.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::coeff::Coeff;
use crate::context::Context;
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::poly::{linear_parts, Monomial, MultiPoly};
use crate::surface::{Ellipsoid, Tangency};
use crate::unipoly::{gaussian_roots, UniPoly};
use crate::vector_field::VectorField;

/// Where an invariance statement lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvarianceContext {
    Ambient,
    OnSurface,
}

/// The polynomial multiplier K in X(f) = K·f (exactly, or modulo the
/// surface ideal).
#[derive(Debug, Clone)]
pub struct Cofactor {
    pub poly: MultiPoly,
    pub degree_bound: u32,
    pub context: InvarianceContext,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransversalityStatus {
    /// Condition (ii) verified (linear form on a surface, not tangent).
    Verified,
    /// Not checked: ambient context, or a non-linear hypersurface where the
    /// full check would need elimination theory.
    Unchecked,
}

/// A certified invariant hypersurface f = 0.
#[derive(Debug, Clone)]
pub struct InvariantHypersurface {
    pub f: MultiPoly,
    pub cofactor: Cofactor,
    pub transversality: TransversalityStatus,
    /// Discriminant classification for linear forms on a surface.
    pub tangency: Option<Tangency>,
    pub multiplicity: Option<u32>,
}

/// Why a candidate was not certified. Rejection is a value, not an error.
#[derive(Debug, Clone)]
pub enum Rejection {
    /// No cofactor exists within the degree bound.
    NoCofactorAtBound { bound: u32 },
    /// Linear form tangent to the surface: condition (ii) fails.
    TangentPlane,
    /// The certifying identity needs a cofactor beyond the degree bound;
    /// the computed cofactor is carried for inspection.
    CofactorDegreeExceeded { cofactor: MultiPoly, bound: u32 },
    /// h·X(g) − g·X(h) is not divisible by h².
    NotExact,
}

#[derive(Debug, Clone)]
pub enum InvarianceOutcome {
    Invariant(InvariantHypersurface),
    Rejected(Rejection),
}

impl InvarianceOutcome {
    pub fn invariant(self) -> Option<InvariantHypersurface> {
        match self {
            InvarianceOutcome::Invariant(h) => Some(h),
            InvarianceOutcome::Rejected(_) => None,
        }
    }

    pub fn is_invariant(&self) -> bool {
        matches!(self, InvarianceOutcome::Invariant(_))
    }
}

/// Exponential factor exp(g/h) certified by h·X(g) − g·X(h) = L·h².
#[derive(Debug, Clone)]
pub struct ExponentialFactor {
    pub g: MultiPoly,
    pub h: MultiPoly,
    pub cofactor: MultiPoly,
}

#[derive(Debug, Clone)]
pub enum ExpFactorOutcome {
    Factor(ExponentialFactor),
    Rejected(Rejection),
}

impl ExpFactorOutcome {
    pub fn factor(self) -> Option<ExponentialFactor> {
        match self {
            ExpFactorOutcome::Factor(f) => Some(f),
            ExpFactorOutcome::Rejected(_) => None,
        }
    }
}

/// A linear factor found in an extactic polynomial.
#[derive(Debug, Clone)]
pub struct FoundFactor {
    /// Normalized form (first nonzero coefficient 1).
    pub form: MultiPoly,
    /// Largest k with form^k dividing the ambient extactic (at least 1 for
    /// surface-only factors).
    pub multiplicity: u32,
    pub certificate: InvariantHypersurface,
}

/// Result of an extactic computation or a meridian/parallel search.
#[derive(Debug, Clone)]
pub struct ExtacticReport {
    pub basis: Vec<MultiPoly>,
    /// Ambient extactic determinant.
    pub extactic: MultiPoly,
    /// Normal form of the extactic when a surface is in play.
    pub reduced: Option<MultiPoly>,
    /// Certified factors dividing the ambient extactic; the product of
    /// form^multiplicity times `residual` equals the extactic.
    pub factors: Vec<FoundFactor>,
    /// Certified invariants that divide only the reduced form: invariant on
    /// the surface without dividing the ambient extactic.
    pub surface_only: Vec<FoundFactor>,
    pub residual: MultiPoly,
    /// E_W ≡ 0: not finitely many invariant objects.
    pub degenerate: bool,
}

impl ExtacticReport {
    pub fn distinct_count(&self) -> usize {
        self.factors.len() + self.surface_only.len()
    }

    pub fn count_with_multiplicity(&self) -> u32 {
        self.factors
            .iter()
            .chain(&self.surface_only)
            .map(|f| f.multiplicity)
            .sum()
    }

    /// Factors whose normalized form has real coefficients.
    pub fn real_factors(&self) -> Vec<&FoundFactor> {
        self.factors
            .iter()
            .chain(&self.surface_only)
            .filter(|f| f.form.terms().all(|(_, c)| c.is_real()))
            .collect()
    }

    pub fn all_factors(&self) -> impl Iterator<Item = &FoundFactor> {
        self.factors.iter().chain(&self.surface_only)
    }
}

/// The extactic polynomial of the field for a basis W: the determinant of
/// the matrix whose j-th row is Xʲ applied to the basis.
pub fn extactic(x: &VectorField, basis: &[MultiPoly]) -> Result<ExtacticReport> {
    if basis.is_empty() {
        return Err(Error::InvalidInput("empty basis".into()));
    }
    check_independent(basis)?;
    let l = basis.len();
    let mut rows: Vec<Vec<MultiPoly>> = vec![basis.to_vec()];
    for j in 1..l {
        let prev = &rows[j - 1];
        let next = prev
            .iter()
            .map(|v| x.lie_derivative(v))
            .collect::<Result<Vec<_>>>()?;
        rows.push(next);
    }
    let e = crate::det::poly_det(&rows)?;
    let degenerate = e.is_zero();
    Ok(ExtacticReport {
        basis: basis.to_vec(),
        residual: e.clone(),
        extactic: e,
        reduced: None,
        factors: Vec::new(),
        surface_only: Vec::new(),
        degenerate,
    })
}

/// Rank check over the coefficient field; a dependency relation is the
/// deficiency certificate.
fn check_independent(basis: &[MultiPoly]) -> Result<()> {
    let ctx = basis[0].context().clone();
    let np = ctx.n_params();
    let mut monos: BTreeMap<Monomial, usize> = BTreeMap::new();
    for b in basis {
        for (m, _) in b.terms() {
            let next = monos.len();
            monos.entry(m.clone()).or_insert(next);
        }
    }
    let mut mat = Mat::zero(monos.len().max(1), basis.len(), np);
    for (j, b) in basis.iter().enumerate() {
        for (m, c) in b.terms() {
            mat.set(monos[m], j, c.clone());
        }
    }
    let ns = mat.nullspace();
    if let Some(rel) = ns.first() {
        let parts: Vec<String> = rel
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("{}*v{}", c.render(ctx.params()), i + 1))
            .collect();
        return Err(Error::DependentBasis(parts.join(" + ")));
    }
    Ok(())
}

/// Largest k with f^k dividing the (non-degenerate) extactic.
pub fn multiplicity(f: &MultiPoly, report: &ExtacticReport) -> Result<u32> {
    if report.degenerate {
        return Err(Error::InvalidInput(
            "degenerate extactic: every power divides".into(),
        ));
    }
    let m = divisibility_multiplicity(f, &report.extactic)?;
    if m == 0 {
        return Err(Error::NotAFactor);
    }
    Ok(m)
}

fn divisibility_multiplicity(f: &MultiPoly, e: &MultiPoly) -> Result<u32> {
    if f.is_zero() {
        return Err(Error::DivisionByZeroPoly);
    }
    if f.is_constant() {
        return Err(Error::InvalidInput(
            "multiplicity of a constant factor is not defined".into(),
        ));
    }
    let mut mult = 0;
    let mut rest = e.clone();
    loop {
        if rest.is_zero() {
            break;
        }
        match rest.div_exact(f) {
            Ok(q) => {
                mult += 1;
                rest = q;
            }
            Err(_) => break,
        }
    }
    Ok(mult)
}

/// Solves X(f) = k·f for the cofactor k, exactly in the ambient ring or
/// modulo the surface ideal. `None` means no cofactor exists at the bound.
pub fn cofactor_solve(
    x: &VectorField,
    f: &MultiPoly,
    surface: Option<&Ellipsoid>,
    degree_bound: Option<u32>,
) -> Result<Option<Cofactor>> {
    if f.is_zero() {
        return Err(Error::InvalidInput(
            "the zero polynomial has no cofactor".into(),
        ));
    }
    let bound = degree_bound
        .or_else(|| x.degree_vector().max_degree().map(|m1| m1.saturating_sub(1)))
        .unwrap_or(0);
    let xf = x.lie_derivative(f)?;
    match surface {
        None => {
            let (q, r) = xf.divrem(f)?;
            if !r.is_zero() {
                return Ok(None);
            }
            if q.degree().is_some_and(|d| d > bound) {
                return Ok(None);
            }
            Ok(Some(Cofactor {
                poly: q,
                degree_bound: bound,
                context: InvarianceContext::Ambient,
            }))
        }
        Some(e) => {
            let rhs = e.normal_form(&xf)?.into_poly();
            match solve_multiplier(x.context(), &rhs, f, e, bound)? {
                Some(k) => Ok(Some(Cofactor {
                    poly: k,
                    degree_bound: bound,
                    context: InvarianceContext::OnSurface,
                })),
                None => Ok(None),
            }
        }
    }
}

/// Solves normal_form(rhs − L·base) = 0 for L supported on the reduced
/// monomials of total degree ≤ bound.
fn solve_multiplier(
    ctx: &Arc<Context>,
    rhs: &MultiPoly,
    base: &MultiPoly,
    e: &Ellipsoid,
    bound: u32,
) -> Result<Option<MultiPoly>> {
    let basis = reduced_monomials(ctx, bound, e.dim());
    let np = ctx.n_params();
    let cols: Vec<MultiPoly> = basis
        .iter()
        .map(|m| {
            let term = monomial_poly(ctx, m)?;
            Ok(e.normal_form(&term.mul(base)?)?.into_poly())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut monos: BTreeMap<Monomial, usize> = BTreeMap::new();
    for p in cols.iter().chain(std::iter::once(rhs)) {
        for (m, _) in p.terms() {
            let next = monos.len();
            monos.entry(m.clone()).or_insert(next);
        }
    }
    let rows = monos.len().max(1);
    let mut mat = Mat::zero(rows, cols.len(), np);
    let mut b = vec![Coeff::zero(np); rows];
    for (j, col) in cols.iter().enumerate() {
        for (m, c) in col.terms() {
            mat.set(monos[m], j, c.clone());
        }
    }
    for (m, c) in rhs.terms() {
        b[monos[m]] = c.clone();
    }
    let Some(sol) = mat.solve(&b) else {
        return Ok(None);
    };
    let mut l = MultiPoly::zero(ctx);
    for (m, u) in basis.iter().zip(&sol) {
        if u.is_zero() {
            continue;
        }
        l = l.add(&monomial_poly(ctx, m)?.scale(u))?;
    }
    Ok(Some(l))
}

fn monomial_poly(ctx: &Arc<Context>, m: &Monomial) -> Result<MultiPoly> {
    let mut term = MultiPoly::one(ctx);
    for (j, &ej) in m.0.iter().enumerate() {
        if ej > 0 {
            term = term.mul(&MultiPoly::coord(ctx, j).pow(ej))?;
        }
    }
    Ok(term)
}

/// All monomials of total degree ≤ bound with x_{n+1}-exponent ≤ 1 (the
/// canonical representatives modulo the surface ideal).
fn reduced_monomials(ctx: &Arc<Context>, bound: u32, n: usize) -> Vec<Monomial> {
    fn rec(exps: &mut Vec<u32>, pos: usize, remaining: u32, last: usize, out: &mut Vec<Monomial>) {
        if pos == exps.len() {
            out.push(Monomial(exps.clone()));
            return;
        }
        let cap = if pos == last {
            remaining.min(1)
        } else {
            remaining
        };
        for e in 0..=cap {
            exps[pos] = e;
            rec(exps, pos + 1, remaining - e, last, out);
        }
        exps[pos] = 0;
    }
    let mut out = Vec::new();
    let mut exps = vec![0u32; ctx.n_coords()];
    rec(&mut exps, 0, bound, n, &mut out);
    out.sort();
    out
}

/// Certifies f = 0 as an invariant hypersurface: cofactor solve plus, for
/// linear forms on a surface, the tangency gate of condition (ii).
pub fn invariance_check(
    x: &VectorField,
    f: &MultiPoly,
    surface: Option<&Ellipsoid>,
    degree_bound: Option<u32>,
) -> Result<InvarianceOutcome> {
    if f.is_zero() {
        return Err(Error::InvalidInput(
            "the zero polynomial is not a hypersurface".into(),
        ));
    }
    let bound = degree_bound
        .or_else(|| x.degree_vector().max_degree().map(|m1| m1.saturating_sub(1)))
        .unwrap_or(0);
    let Some(cof) = cofactor_solve(x, f, surface, Some(bound))? else {
        return Ok(InvarianceOutcome::Rejected(Rejection::NoCofactorAtBound {
            bound,
        }));
    };
    let mut tangency = None;
    let mut transversality = TransversalityStatus::Unchecked;
    if let Some(e) = surface {
        if f.degree() == Some(1) {
            let (coeffs, cst) = linear_parts(f).expect("degree checked");
            // plane Σcᵢxᵢ = -cst
            let t = e.hyperplane_tangency(&coeffs, &cst.neg())?;
            if t == Tangency::Tangent {
                return Ok(InvarianceOutcome::Rejected(Rejection::TangentPlane));
            }
            tangency = Some(t);
            transversality = TransversalityStatus::Verified;
        }
    }
    // re-verify the certificate independently of the solver path
    let lhs = x.lie_derivative(f)?.sub(&cof.poly.mul(f)?)?;
    let holds = match surface {
        None => lhs.is_zero(),
        Some(e) => e.normal_form(&lhs)?.is_zero(),
    };
    if !holds {
        return Err(Error::Verification(
            "cofactor certificate failed re-verification".into(),
        ));
    }
    Ok(InvarianceOutcome::Invariant(InvariantHypersurface {
        f: f.clone(),
        cofactor: cof,
        transversality,
        tangency,
        multiplicity: None,
    }))
}

/// Certifies exp(g/h) as an exponential factor via the denominator-cleared
/// identity h·X(g) − g·X(h) = L·h².
pub fn exp_factor_check(
    x: &VectorField,
    g: &MultiPoly,
    h: &MultiPoly,
    surface: Option<&Ellipsoid>,
    degree_bound: Option<u32>,
) -> Result<ExpFactorOutcome> {
    if h.is_zero() {
        return Err(Error::InvalidInput(
            "exponential factor with zero denominator".into(),
        ));
    }
    let bound = degree_bound
        .or_else(|| x.degree_vector().max_degree().map(|m1| m1.saturating_sub(1)))
        .unwrap_or(0);
    let n = h
        .mul(&x.lie_derivative(g)?)?
        .sub(&g.mul(&x.lie_derivative(h)?)?)?;
    let h2 = h.pow(2);
    match surface {
        None => {
            let (q, r) = n.divrem(&h2)?;
            if !r.is_zero() {
                return Ok(ExpFactorOutcome::Rejected(Rejection::NotExact));
            }
            if q.degree().is_some_and(|d| d > bound) {
                return Ok(ExpFactorOutcome::Rejected(
                    Rejection::CofactorDegreeExceeded { cofactor: q, bound },
                ));
            }
            Ok(ExpFactorOutcome::Factor(ExponentialFactor {
                g: g.clone(),
                h: h.clone(),
                cofactor: q,
            }))
        }
        Some(e) => {
            let rhs = e.normal_form(&n)?.into_poly();
            match solve_multiplier(x.context(), &rhs, &h2, e, bound)? {
                Some(l) => Ok(ExpFactorOutcome::Factor(ExponentialFactor {
                    g: g.clone(),
                    h: h.clone(),
                    cofactor: l,
                })),
                None => Ok(ExpFactorOutcome::Rejected(Rejection::NotExact)),
            }
        }
    }
}

/// Meridian search: extactic with W = {x₁,…,xₙ}, pencil resolution for
/// n = 2 (plus the two axis planes), verification of every candidate.
/// Caller-supplied candidate forms are always verified; for parametric
/// systems they are the only route, since root extraction needs
/// instantiated coefficients.
pub fn find_meridians(
    x: &VectorField,
    e: &Ellipsoid,
    caller_candidates: &[MultiPoly],
) -> Result<ExtacticReport> {
    require_on_surface(x, e)?;
    let ctx = x.context().clone();
    let n = e.dim();
    let basis: Vec<MultiPoly> = (0..n).map(|i| MultiPoly::coord(&ctx, i)).collect();
    let base = extactic(x, &basis)?;
    let ambient = base.extactic;
    let reduced = e.normal_form(&ambient)?.into_poly();

    if ambient.is_zero() {
        return Ok(ExtacticReport {
            basis,
            extactic: ambient.clone(),
            reduced: Some(reduced),
            factors: Vec::new(),
            surface_only: Vec::new(),
            residual: ambient,
            degenerate: true,
        });
    }

    let mut candidates: Vec<MultiPoly> = Vec::new();
    for c in caller_candidates {
        candidates.push(validate_meridian_form(c, n)?);
    }
    if n == 2 {
        for i in 0..2 {
            candidates.push(MultiPoly::coord(&ctx, i));
        }
        if x.is_parameter_free() {
            for source in [&ambient, &reduced] {
                for t in pencil_roots(source, &ctx)? {
                    candidates
                        .push(MultiPoly::coord(&ctx, 1).sub(&MultiPoly::coord(&ctx, 0).scale(&t))?);
                }
            }
        }
    }

    let normalized = normalize_and_dedupe(&candidates)?;
    let (factors, surface_only, residual) =
        certify_factors(x, e, &normalized, &ambient, &reduced)?;
    let report = ExtacticReport {
        basis,
        extactic: ambient,
        reduced: Some(reduced),
        factors,
        surface_only,
        residual,
        degenerate: false,
    };
    let bound = crate::darboux::bound_meridians(n as u32, &x.degree_vector())?;
    if (report.distinct_count() as u128) > bound.value {
        return Err(Error::Verification(format!(
            "meridian count {} exceeds the bound {}",
            report.distinct_count(),
            bound.value
        )));
    }
    Ok(report)
}

/// Parallel search: the extactic for W = {1, x_{n+1}} collapses to the last
/// field component. Candidate heights come from exact section reduction
/// (complete even when a parallel divides the extactic only modulo the
/// surface ideal); each is verified with a cofactor certificate.
pub fn find_parallels(
    x: &VectorField,
    e: &Ellipsoid,
    caller_candidates: &[Coeff],
) -> Result<ExtacticReport> {
    require_on_surface(x, e)?;
    let ctx = x.context().clone();
    let n = e.dim();
    let basis = vec![MultiPoly::one(&ctx), MultiPoly::coord(&ctx, n)];
    let ambient = x.component(n).clone();
    let reduced = e.normal_form(&ambient)?.into_poly();
    if reduced.is_zero() {
        // every parallel is invariant
        return Ok(ExtacticReport {
            basis,
            extactic: ambient.clone(),
            reduced: Some(reduced),
            factors: Vec::new(),
            surface_only: Vec::new(),
            residual: ambient,
            degenerate: true,
        });
    }

    let mut values: Vec<Coeff> = caller_candidates.to_vec();
    if x.is_parameter_free() && e.semi_axes().iter().all(Coeff::is_constant) {
        values.extend(section_roots(&reduced, e)?);
    }
    let mut seen: Vec<Coeff> = Vec::new();
    for v in values {
        if !seen.contains(&v) {
            seen.push(v);
        }
    }
    let forms: Vec<MultiPoly> = seen
        .iter()
        .map(|c| MultiPoly::coord(&ctx, n).sub(&MultiPoly::constant(&ctx, c.clone())))
        .collect::<Result<Vec<_>>>()?;

    let (factors, surface_only, residual) = certify_factors(x, e, &forms, &ambient, &reduced)?;
    let report = ExtacticReport {
        basis,
        extactic: ambient,
        reduced: Some(reduced),
        factors,
        surface_only,
        residual,
        degenerate: false,
    };
    let bound = crate::darboux::bound_parallels(&x.degree_vector());
    if let Some(limit) = bound.finite_value() {
        if (report.distinct_count() as u128) > limit {
            return Err(Error::Verification(format!(
                "parallel count {} exceeds the bound {}",
                report.distinct_count(),
                limit
            )));
        }
    }
    Ok(report)
}

/// Runs invariance checks over candidate forms and splits them into
/// ambient-dividing factors (with multiplicities peeled off the residual)
/// and surface-only invariants.
fn certify_factors(
    x: &VectorField,
    e: &Ellipsoid,
    forms: &[MultiPoly],
    ambient: &MultiPoly,
    reduced: &MultiPoly,
) -> Result<(Vec<FoundFactor>, Vec<FoundFactor>, MultiPoly)> {
    let mut factors = Vec::new();
    let mut surface_only = Vec::new();
    let mut residual = ambient.clone();
    for form in forms {
        let outcome = invariance_check(x, form, Some(e), None)?;
        let InvarianceOutcome::Invariant(mut cert) = outcome else {
            continue;
        };
        let amb_mult = divisibility_multiplicity(form, ambient)?;
        if amb_mult > 0 {
            cert.multiplicity = Some(amb_mult);
            for _ in 0..amb_mult {
                residual = residual.div_exact(form)?;
            }
            factors.push(FoundFactor {
                form: form.clone(),
                multiplicity: amb_mult,
                certificate: cert,
            });
        } else {
            let red_mult = divisibility_multiplicity(form, reduced)?.max(1);
            cert.multiplicity = Some(red_mult);
            surface_only.push(FoundFactor {
                form: form.clone(),
                multiplicity: red_mult,
                certificate: cert,
            });
        }
    }
    sort_factors(&mut factors);
    sort_factors(&mut surface_only);
    Ok((factors, surface_only, residual))
}

fn require_on_surface(x: &VectorField, e: &Ellipsoid) -> Result<()> {
    match x.on_surface_check(e)? {
        crate::vector_field::OnSurfaceCertificate::OnSurface { .. } => Ok(()),
        crate::vector_field::OnSurfaceCertificate::NotOnSurface { residual } => {
            Err(Error::NotOnSurface(residual.render()))
        }
    }
}

/// A meridian candidate must be a linear form in x₁..xₙ with no constant
/// term and no x_{n+1} component.
fn validate_meridian_form(f: &MultiPoly, n: usize) -> Result<MultiPoly> {
    if f.degree() != Some(1) {
        return Err(Error::InvalidInput(
            "meridian candidates must be linear forms".into(),
        ));
    }
    let (coeffs, cst) = linear_parts(f).expect("degree 1");
    if !cst.is_zero() || !coeffs[n].is_zero() {
        return Err(Error::InvalidInput(
            "meridian candidates must contain the polar axis".into(),
        ));
    }
    Ok(f.clone())
}

/// Normalizes linear forms to first nonzero coefficient 1 and removes
/// duplicates, keeping a deterministic order.
fn normalize_and_dedupe(forms: &[MultiPoly]) -> Result<Vec<MultiPoly>> {
    let mut out: Vec<MultiPoly> = Vec::new();
    for f in forms {
        let (coeffs, _) =
            linear_parts(f).ok_or_else(|| Error::InvalidInput("expected a linear form".into()))?;
        let lead = coeffs
            .iter()
            .find(|c| !c.is_zero())
            .ok_or_else(|| Error::InvalidInput("zero form".into()))?;
        let norm = f.scale(&lead.inv()?);
        if !out.contains(&norm) {
            out.push(norm);
        }
    }
    Ok(out)
}

fn sort_factors(factors: &mut [FoundFactor]) {
    factors.sort_by_key(|f| f.form.render());
}

/// Gaussian-rational slopes t for which the substitution y → t·x kills the
/// polynomial, i.e. the forms y − t·x dividing it.
fn pencil_roots(e_w: &MultiPoly, ctx: &Arc<Context>) -> Result<Vec<Coeff>> {
    if e_w.is_zero() {
        return Ok(Vec::new());
    }
    let ext = ctx.with_extra_params(&["_t"])?;
    let t_idx = ctx.n_params();
    let e_ext = e_w.into_context(&ext)?;
    let t_const = MultiPoly::constant(&ext, Coeff::param(ext.n_params(), t_idx));
    let mut bind = BTreeMap::new();
    bind.insert(1usize, t_const.mul(&MultiPoly::coord(&ext, 0))?);
    let substituted = e_ext.subst(&bind)?;
    let conditions = coefficient_conditions(&substituted, t_idx)?;
    roots_of_conditions(conditions, ctx.n_params())
}

/// Heights t where the reduced extactic vanishes on the section
/// x_{n+1} = t of the ellipsoid.
fn section_roots(reduced: &MultiPoly, e: &Ellipsoid) -> Result<Vec<Coeff>> {
    let ctx = e.context();
    let n = e.dim();
    let ext = ctx.with_extra_params(&["_t"])?;
    let t_idx = ctx.n_params();
    let t_const = MultiPoly::constant(&ext, Coeff::param(ext.n_params(), t_idx));
    let mut bind = BTreeMap::new();
    bind.insert(n, t_const);
    let r_t = reduced.into_context(&ext)?.subst(&bind)?;
    let s_t = e.defining_poly().into_context(&ext)?.subst(&bind)?;
    if s_t.is_zero() {
        return Ok(Vec::new());
    }
    let (_, q) = r_t.divrem(&s_t)?;
    let conditions = coefficient_conditions(&q, t_idx)?;
    roots_of_conditions(conditions, ctx.n_params())
}

/// The numerators of all coefficients, as univariate polynomials in the
/// extension parameter.
fn coefficient_conditions(p: &MultiPoly, t_idx: usize) -> Result<Vec<UniPoly>> {
    let mut out = Vec::new();
    for (_, c) in p.terms() {
        match c.num().as_unipoly_in(t_idx) {
            Some(coeffs) => {
                let dense: Vec<Coeff> = coeffs.into_iter().map(|g| Coeff::from_gauss(0, g)).collect();
                out.push(UniPoly::new("_t", dense));
            }
            None => {
                return Err(Error::ParameterBearing(
                    "pencil resolution needs instantiated parameters".into(),
                ))
            }
        }
    }
    Ok(out)
}

fn roots_of_conditions(conditions: Vec<UniPoly>, target_nparams: usize) -> Result<Vec<Coeff>> {
    let mut gcd: Option<UniPoly> = None;
    for c in conditions {
        if c.is_zero() {
            continue;
        }
        gcd = Some(match gcd {
            None => c,
            Some(g) => g.gcd(&c),
        });
    }
    let Some(g) = gcd else {
        return Ok(Vec::new());
    };
    if g.degree().is_none_or(|d| d == 0) {
        return Ok(Vec::new());
    }
    let report = gaussian_roots(&g)?;
    Ok(report
        .roots
        .into_iter()
        .map(|(r, _)| const_to_nparams(&r, target_nparams))
        .collect())
}

fn const_to_nparams(c: &Coeff, np: usize) -> Coeff {
    let (n, d) = c.as_gauss_ratio().expect("constant root");
    Coeff::new(
        crate::coeff::ParamPoly::constant(np, n),
        crate::coeff::ParamPoly::constant(np, crate::gaussian::GaussInt::from_int(d)),
    )
    .expect("nonzero denominator")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_expression;

    fn plane_ctx() -> Arc<Context> {
        Context::new(vec!["x", "y"], vec![] as Vec<&str>).unwrap()
    }

    fn field(ctx: &Arc<Context>, comps: &[&str]) -> VectorField {
        VectorField::new(
            ctx,
            comps
                .iter()
                .map(|s| parse_expression(s, ctx).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn extactic_rejects_dependent_basis() {
        let ctx = plane_ctx();
        let x = field(&ctx, &["y", "-x"]);
        let b1 = parse_expression("x + y", &ctx).unwrap();
        let b2 = parse_expression("2*x + 2*y", &ctx).unwrap();
        match extactic(&x, &[b1, b2]) {
            Err(Error::DependentBasis(_)) => {}
            other => panic!("expected dependent basis, got {other:?}"),
        }
    }

    #[test]
    fn ambient_cofactor_by_exact_division() {
        let ctx = plane_ctx();
        let x = field(&ctx, &["x", "y"]);
        let f = parse_expression("x", &ctx).unwrap();
        let k = cofactor_solve(&x, &f, None, None).unwrap().unwrap();
        assert_eq!(k.poly, MultiPoly::one(&ctx));
        // constants are invariant with zero cofactor
        let one = MultiPoly::one(&ctx);
        let k0 = cofactor_solve(&x, &one, None, None).unwrap().unwrap();
        assert!(k0.poly.is_zero());
        // x + 1 is not invariant under the rotation field
        let rot = field(&ctx, &["y", "-x"]);
        let g = parse_expression("x + 1", &ctx).unwrap();
        assert!(cofactor_solve(&rot, &g, None, None).unwrap().is_none());
    }

    #[test]
    fn exp_factor_identity_and_bound() {
        let ctx = plane_ctx();
        let x = field(&ctx, &["x", "y"]);
        let g = parse_expression("x", &ctx).unwrap();
        let h = MultiPoly::one(&ctx);
        // h·X(g) − g·X(h) = x = L·h² forces deg L = 1, above the m₁−1 = 0 bound
        match exp_factor_check(&x, &g, &h, None, None).unwrap() {
            ExpFactorOutcome::Rejected(Rejection::CofactorDegreeExceeded { cofactor, bound }) => {
                assert_eq!(cofactor, g);
                assert_eq!(bound, 0);
            }
            other => panic!("expected degree overflow, got {other:?}"),
        }
        // with the bound relaxed the identity certifies L = x
        let fac = exp_factor_check(&x, &g, &h, None, Some(1))
            .unwrap()
            .factor()
            .unwrap();
        assert_eq!(fac.cofactor, g);
        // F = exp(0/1) = 1 has cofactor 0
        let zero = MultiPoly::zero(&ctx);
        let triv = exp_factor_check(&x, &zero, &h, None, None)
            .unwrap()
            .factor()
            .unwrap();
        assert!(triv.cofactor.is_zero());
        // zero denominator is an error
        assert!(exp_factor_check(&x, &g, &zero, None, None).is_err());
    }

    #[test]
    fn multiplicity_counts_powers() {
        let ctx = Context::new(vec!["x", "y", "z"], vec!["a011"]).unwrap();
        let e = parse_expression("-a011*y^2*z", &ctx).unwrap();
        let report = ExtacticReport {
            basis: vec![],
            extactic: e.clone(),
            reduced: None,
            factors: vec![],
            surface_only: vec![],
            residual: e,
            degenerate: false,
        };
        let y = parse_expression("y", &ctx).unwrap();
        let z = parse_expression("z", &ctx).unwrap();
        let x = parse_expression("x", &ctx).unwrap();
        assert_eq!(multiplicity(&y, &report).unwrap(), 2);
        assert_eq!(multiplicity(&z, &report).unwrap(), 1);
        assert!(matches!(multiplicity(&x, &report), Err(Error::NotAFactor)));
        let y2 = parse_expression("y^2", &ctx).unwrap();
        assert_eq!(multiplicity(&y2, &report).unwrap(), 1);
    }

    #[test]
    fn reduced_monomial_enumeration() {
        let ctx = Context::new(vec!["x", "y", "z"], vec![] as Vec<&str>).unwrap();
        let monos = reduced_monomials(&ctx, 1, 2);
        assert_eq!(monos.len(), 4); // 1, x, y, z
        let monos2 = reduced_monomials(&ctx, 2, 2);
        assert_eq!(monos2.len(), 9); // no z² among the ten degree-≤2 monomials
        assert!(monos2.iter().all(|m| m.0[2] <= 1));
    }
}
