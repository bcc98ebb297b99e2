//! Darboux synthesis: exact solution of the cofactor relation
//! Σλᵢkᵢ + ΣμⱼLⱼ = −σ, assembly and verification of the resulting first
//! integrals and time-dependent invariants, realification of conjugate
//! pairs, and the counting bounds and integrability thresholds.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::invariant::{ExponentialFactor, InvariantHypersurface};
use crate::linalg::Mat;
use crate::poly::{Monomial, MultiPoly};
use crate::surface::{binomial, dim_on_surface, Ellipsoid};
use crate::vector_field::{DegreeVector, VectorField};

/// Exponent data certifying Σλᵢkᵢ + ΣμⱼLⱼ + σ = 0.
#[derive(Debug, Clone)]
pub struct DarbouxRelation {
    pub lambdas: Vec<Coeff>,
    pub mus: Vec<Coeff>,
    pub sigma: Coeff,
}

impl DarbouxRelation {
    /// σ = 0 certifies a first integral; σ ≠ 0 a time-dependent invariant
    /// carrying e^{σt}.
    pub fn is_first_integral(&self) -> bool {
        self.sigma.is_zero()
    }

    pub fn support_all_zero(&self) -> bool {
        self.lambdas.iter().chain(&self.mus).all(Coeff::is_zero)
    }

    /// Re-checks the certifying identity against the given cofactors.
    pub fn verify(
        &self,
        ks: &[MultiPoly],
        ls: &[MultiPoly],
        surface: Option<&Ellipsoid>,
    ) -> Result<bool> {
        if ks.len() != self.lambdas.len() || ls.len() != self.mus.len() {
            return Err(Error::InvalidInput("cofactor count mismatch".into()));
        }
        let ctx = ks
            .first()
            .or_else(|| ls.first())
            .ok_or_else(|| Error::InvalidInput("no cofactors".into()))?
            .context()
            .clone();
        let mut acc = MultiPoly::constant(&ctx, self.sigma.clone());
        for (l, k) in self.lambdas.iter().zip(ks) {
            acc = acc.add(&k.scale(l))?;
        }
        for (m, l) in self.mus.iter().zip(ls) {
            acc = acc.add(&l.scale(m))?;
        }
        match surface {
            None => Ok(acc.is_zero()),
            Some(e) => Ok(e.normal_form(&acc)?.is_zero()),
        }
    }
}

/// Exact basis of the solution space of Σλᵢkᵢ + ΣμⱼLⱼ (+ σ) = 0, with the
/// all-zero-(λ,μ) solutions filtered out. On a surface the identity is
/// required modulo the ideal, so cofactors are reduced first.
pub fn solve_relation(
    ks: &[MultiPoly],
    ls: &[MultiPoly],
    surface: Option<&Ellipsoid>,
    allow_sigma: bool,
) -> Result<Vec<DarbouxRelation>> {
    if ks.is_empty() && ls.is_empty() {
        return Err(Error::InvalidInput("no cofactors to relate".into()));
    }
    let ctx = ks.first().or_else(|| ls.first()).unwrap().context().clone();
    let np = ctx.n_params();
    let reduce = |p: &MultiPoly| -> Result<MultiPoly> {
        match surface {
            None => Ok(p.clone()),
            Some(e) => Ok(e.normal_form(p)?.into_poly()),
        }
    };
    let kr: Vec<MultiPoly> = ks.iter().map(&reduce).collect::<Result<_>>()?;
    let lr: Vec<MultiPoly> = ls.iter().map(&reduce).collect::<Result<_>>()?;

    let p = kr.len();
    let q = lr.len();
    let cols = p + q + usize::from(allow_sigma);
    let mut monos: std::collections::BTreeMap<Monomial, usize> = std::collections::BTreeMap::new();
    let const_mono = Monomial::constant(ctx.n_coords());
    if allow_sigma {
        monos.insert(const_mono.clone(), 0);
    }
    for poly in kr.iter().chain(&lr) {
        for (m, _) in poly.terms() {
            let next = monos.len();
            monos.entry(m.clone()).or_insert(next);
        }
    }
    let mut mat = Mat::zero(monos.len().max(1), cols, np);
    for (j, poly) in kr.iter().chain(&lr).enumerate() {
        for (m, c) in poly.terms() {
            mat.set(monos[m], j, c.clone());
        }
    }
    if allow_sigma {
        mat.set(monos[&const_mono], p + q, Coeff::one(np));
    }
    let basis = mat.nullspace();
    let mut out = Vec::new();
    for vec in basis {
        let mut rel = DarbouxRelation {
            lambdas: vec[..p].to_vec(),
            mus: vec[p..p + q].to_vec(),
            sigma: if allow_sigma {
                vec[p + q].clone()
            } else {
                Coeff::zero(np)
            },
        };
        if rel.support_all_zero() {
            continue;
        }
        // normalize: first nonzero exponent scaled to 1
        let lead = rel
            .lambdas
            .iter()
            .chain(&rel.mus)
            .find(|c| !c.is_zero())
            .cloned()
            .expect("nonzero support");
        let inv = lead.inv()?;
        for c in rel.lambdas.iter_mut().chain(rel.mus.iter_mut()) {
            *c = c.mul(&inv);
        }
        rel.sigma = rel.sigma.mul(&inv);
        if !rel.verify(&kr, &lr, surface)? {
            return Err(Error::Verification(
                "relation failed re-verification".into(),
            ));
        }
        out.push(rel);
    }
    Ok(out)
}

/// One factor of a Darboux function.
#[derive(Debug, Clone)]
pub enum FactorBase {
    Hypersurface(MultiPoly),
    Exponential { g: MultiPoly, h: MultiPoly },
}

#[derive(Debug, Clone)]
pub struct DarbouxFactor {
    pub base: FactorBase,
    pub exponent: Coeff,
}

/// Real-form rendering of factors (a printing directive; the core stays
/// exact and never evaluates the multivalued powers).
#[derive(Debug, Clone)]
pub enum RealForm {
    /// Real base and exponent: render |f|^λ.
    Identity { f: MultiPoly, lambda: Coeff },
    /// Conjugate pair f, f̄ with exponents λ, λ̄:
    /// [(Re f)² + (Im f)²]^{Re λ} · exp(−2·Im λ·arctan(Im f / Re f)).
    Pair {
        re_f: MultiPoly,
        im_f: MultiPoly,
        modulus_base: MultiPoly,
        re_lambda: Coeff,
        im_lambda: Coeff,
    },
    /// Conjugate exponential pair: exp(2·Re(μ·g/h)) = exp(numer/denom).
    ExpPair { numer: MultiPoly, denom: MultiPoly },
}

/// A verified product Πfᵢ^{λᵢ}·ΠFⱼ^{μⱼ}·e^{σt}.
#[derive(Debug, Clone)]
pub struct DarbouxFunction {
    pub factors: Vec<DarbouxFactor>,
    pub sigma: Coeff,
    /// The expanded polynomial when every factor is a hypersurface with a
    /// small non-negative integer exponent.
    pub expanded: Option<MultiPoly>,
    /// Real renderings of conjugate pairs and real factors, when the whole
    /// factor list pairs up.
    pub realified: Option<Vec<RealForm>>,
    /// Human-readable verification transcript.
    pub transcript: Vec<String>,
}

/// Assembles the Darboux function for a certified relation and verifies the
/// denominator-cleared logarithmic-derivative identity
/// Σλᵢ·X(fᵢ)·Π_{k≠i}fₖ·Πh² + Σμⱼ·(hⱼX(gⱼ)−gⱼX(hⱼ))·Πf·Π_{l≠j}h² + σ·Πf·Πh² = 0.
pub fn build_darboux_function(
    hypersurfaces: &[InvariantHypersurface],
    exp_factors: &[ExponentialFactor],
    relation: &DarbouxRelation,
    x: &VectorField,
    surface: Option<&Ellipsoid>,
) -> Result<DarbouxFunction> {
    if hypersurfaces.len() != relation.lambdas.len()
        || exp_factors.len() != relation.mus.len()
    {
        return Err(Error::InvalidInput(
            "relation does not match the object lists".into(),
        ));
    }
    if relation.support_all_zero() {
        return Err(Error::InvalidInput(
            "all exponents vanish; the product is trivially constant".into(),
        ));
    }
    let ctx = x.context().clone();
    let mut transcript = Vec::new();

    // certify the relation against the objects' cofactors
    let ks: Vec<MultiPoly> = hypersurfaces.iter().map(|h| h.cofactor.poly.clone()).collect();
    let ls: Vec<MultiPoly> = exp_factors.iter().map(|f| f.cofactor.clone()).collect();
    if !relation.verify(&ks, &ls, surface)? {
        return Err(Error::Verification(
            "relation is not certified by the cofactors".into(),
        ));
    }
    transcript.push("cofactor relation verified".to_string());

    // cleared logarithmic-derivative identity
    let f_polys: Vec<&MultiPoly> = hypersurfaces.iter().map(|h| &h.f).collect();
    let h_polys: Vec<&MultiPoly> = exp_factors.iter().map(|f| &f.h).collect();
    let prod_f = f_polys
        .iter()
        .try_fold(MultiPoly::one(&ctx), |acc, f| acc.mul(f))?;
    let prod_h2 = h_polys
        .iter()
        .try_fold(MultiPoly::one(&ctx), |acc, h| acc.mul(&h.pow(2)))?;
    let mut v = prod_f.mul(&prod_h2)?.scale(&relation.sigma);
    for (i, h) in hypersurfaces.iter().enumerate() {
        let mut term = x.lie_derivative(&h.f)?;
        for (k, other) in f_polys.iter().enumerate() {
            if k != i {
                term = term.mul(other)?;
            }
        }
        term = term.mul(&prod_h2)?;
        v = v.add(&term.scale(&relation.lambdas[i]))?;
    }
    for (j, f) in exp_factors.iter().enumerate() {
        let mut term = f
            .h
            .mul(&x.lie_derivative(&f.g)?)?
            .sub(&f.g.mul(&x.lie_derivative(&f.h)?)?)?;
        term = term.mul(&prod_f)?;
        for (l, other) in h_polys.iter().enumerate() {
            if l != j {
                term = term.mul(&other.pow(2))?;
            }
        }
        v = v.add(&term.scale(&relation.mus[j]))?;
    }
    let identity_holds = match surface {
        None => v.is_zero(),
        Some(e) => e.normal_form(&v)?.is_zero(),
    };
    if !identity_holds {
        return Err(Error::Verification(
            "logarithmic-derivative identity failed".into(),
        ));
    }
    transcript.push("denominator-cleared logarithmic derivative vanishes".to_string());

    let mut factors = Vec::new();
    for (h, l) in hypersurfaces.iter().zip(&relation.lambdas) {
        factors.push(DarbouxFactor {
            base: FactorBase::Hypersurface(h.f.clone()),
            exponent: l.clone(),
        });
    }
    for (f, m) in exp_factors.iter().zip(&relation.mus) {
        factors.push(DarbouxFactor {
            base: FactorBase::Exponential {
                g: f.g.clone(),
                h: f.h.clone(),
            },
            exponent: m.clone(),
        });
    }

    let expanded = expand_if_polynomial(&factors)?;
    if let Some(p) = &expanded {
        transcript.push(format!("expanded product: {}", p.render()));
    }
    let realified = realify_factors(&factors);

    Ok(DarbouxFunction {
        factors,
        sigma: relation.sigma.clone(),
        expanded,
        realified,
        transcript,
    })
}

/// Expands Πfᵢ^{λᵢ} into a single polynomial when every exponent is a small
/// non-negative integer and no exponential factors are present.
fn expand_if_polynomial(factors: &[DarbouxFactor]) -> Result<Option<MultiPoly>> {
    let mut acc: Option<MultiPoly> = None;
    for f in factors {
        let FactorBase::Hypersurface(base) = &f.base else {
            return Ok(None);
        };
        let Some((n, d)) = f.exponent.as_gauss_ratio() else {
            return Ok(None);
        };
        use num_traits::One;
        if !d.is_one() || !n.is_real() || n.re.is_zero() && n.im.is_zero() {
            if n.is_zero() {
                continue;
            }
            return Ok(None);
        }
        let e: u32 = match u32::try_from(&n.re) {
            Ok(e) if e <= 16 => e,
            _ => return Ok(None),
        };
        let powered = base.pow(e);
        acc = Some(match acc {
            None => powered,
            Some(a) => a.mul(&powered)?,
        });
    }
    Ok(acc)
}

/// Pairs conjugate factors and realifies them; `None` when the factor list
/// does not close under conjugation.
fn realify_factors(factors: &[DarbouxFactor]) -> Option<Vec<RealForm>> {
    let mut used = vec![false; factors.len()];
    let mut out = Vec::new();
    for i in 0..factors.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        match &factors[i].base {
            FactorBase::Hypersurface(f) => {
                let lam = &factors[i].exponent;
                if f.conj() == *f && lam.conj() == *lam {
                    out.push(realify_pair(f, lam));
                    continue;
                }
                let partner = (i + 1..factors.len()).find(|&j| {
                    !used[j]
                        && match &factors[j].base {
                            FactorBase::Hypersurface(g) => {
                                g == &f.conj() && factors[j].exponent == lam.conj()
                            }
                            _ => false,
                        }
                });
                {
                    let j = partner?;
                    used[j] = true;
                    out.push(realify_pair(f, lam));
                }
            }
            FactorBase::Exponential { g, h } => {
                let mu = &factors[i].exponent;
                if g.conj() == *g && h.conj() == *h && mu.conj() == *mu {
                    out.push(RealForm::ExpPair {
                        numer: g.scale(mu),
                        denom: h.clone(),
                    });
                    continue;
                }
                let partner = (i + 1..factors.len()).find(|&j| {
                    !used[j]
                        && match &factors[j].base {
                            FactorBase::Exponential { g: g2, h: h2 } => {
                                g2 == &g.conj()
                                    && h2 == &h.conj()
                                    && factors[j].exponent == mu.conj()
                            }
                            _ => false,
                        }
                });
                {
                    let j = partner?;
                    used[j] = true;
                    out.push(realify_exp_pair(g, h, mu));
                }
            }
        }
    }
    Some(out)
}

/// Real form of the pair f^λ·f̄^λ̄. With real f and λ nothing needs doing
/// and the identity directive is returned.
pub fn realify_pair(f: &MultiPoly, lambda: &Coeff) -> RealForm {
    if f.conj() == *f && lambda.conj() == *lambda {
        return RealForm::Identity {
            f: f.clone(),
            lambda: lambda.clone(),
        };
    }
    let re_f = f.real_part();
    let im_f = f.imag_part();
    let modulus_base = re_f
        .mul(&re_f)
        .and_then(|a| im_f.mul(&im_f).and_then(|b| a.add(&b)))
        .expect("same context");
    RealForm::Pair {
        re_f,
        im_f,
        modulus_base,
        re_lambda: lambda.real_part(),
        im_lambda: lambda.imag_part(),
    }
}

/// Real form of the exponential pair F^μ·F̄^μ̄ = exp(2·Re(μ·g/h)), returned
/// as the exact ratio numer/denom of real polynomials.
pub fn realify_exp_pair(g: &MultiPoly, h: &MultiPoly, mu: &Coeff) -> RealForm {
    let w = g.mul(&h.conj()).expect("same context").scale(mu);
    let numer = w.add(&w.conj()).expect("same context");
    let denom = h.mul(&h.conj()).expect("same context");
    RealForm::ExpPair { numer, denom }
}

/// Which counting formula a report came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundFormula {
    HyperplanesRn,
    HyperplanesRnThroughPoint,
    Meridians,
    Parallels,
}

#[derive(Debug, Clone)]
pub struct BoundReport {
    pub formula: BoundFormula,
    pub n: u32,
    pub degrees: Vec<Option<u32>>,
    pub value: u128,
    /// Zero components were skipped where the formula needs a degree.
    pub excluded_zero_components: bool,
}

fn sorted_finite(m: &DegreeVector) -> (Vec<u32>, bool) {
    let finite: Vec<u32> = m.sorted().iter().filter_map(|d| *d).collect();
    let excluded = finite.len() != m.len();
    (finite, excluded)
}

/// Invariant hyperplanes in ℝⁿ: C(n,2)(m₁−1) + Σ m_k, or through a common
/// point C(n−1,2)(m₁−1) + Σ_{k<n} m_k + 1.
pub fn bound_hyperplanes_rn(
    n: u32,
    m: &DegreeVector,
    through_point: bool,
) -> Result<BoundReport> {
    if n < 2 {
        return Err(Error::InvalidInput("bounds need n ≥ 2".into()));
    }
    let (finite, excluded) = sorted_finite(m);
    let Some(&m1) = finite.first() else {
        return Err(Error::InvalidInput(
            "the zero field has no hyperplane bound".into(),
        ));
    };
    let value = if through_point {
        let sum: u128 = finite
            .iter()
            .take((n - 1) as usize)
            .map(|&d| d as u128)
            .sum();
        binomial(n as i64 - 1, 2) * (m1 as u128 - 1) + sum + 1
    } else {
        let sum: u128 = finite.iter().take(n as usize).map(|&d| d as u128).sum();
        binomial(n as i64, 2) * (m1.saturating_sub(1)) as u128 + sum
    };
    Ok(BoundReport {
        formula: if through_point {
            BoundFormula::HyperplanesRnThroughPoint
        } else {
            BoundFormula::HyperplanesRn
        },
        n,
        degrees: m.sorted().to_vec(),
        value,
        excluded_zero_components: excluded,
    })
}

/// Invariant meridians on the n-dimensional ellipsoid:
/// C(n−1,2)(m₁−1) + Σ_{i≤n−1} mᵢ + 1, with C(1,2) = 0 at n = 2.
pub fn bound_meridians(n: u32, m: &DegreeVector) -> Result<BoundReport> {
    if n < 2 {
        return Err(Error::InvalidInput("bounds need n ≥ 2".into()));
    }
    let (finite, excluded) = sorted_finite(m);
    let Some(&m1) = finite.first() else {
        return Err(Error::InvalidInput(
            "the zero field has no meridian bound".into(),
        ));
    };
    let sum: u128 = finite
        .iter()
        .take((n - 1) as usize)
        .map(|&d| d as u128)
        .sum();
    let value = binomial(n as i64 - 1, 2) * (m1.saturating_sub(1)) as u128 + sum + 1;
    Ok(BoundReport {
        formula: BoundFormula::Meridians,
        n,
        degrees: m.sorted().to_vec(),
        value,
        excluded_zero_components: excluded,
    })
}

/// The parallel bound m_{n+1}: the smallest entry of the sorted degree
/// vector. Degenerate when the component along x_{n+1} vanishes (every
/// parallel is then invariant).
#[derive(Debug, Clone)]
pub struct ParallelBound {
    pub degrees: Vec<Option<u32>>,
    pub value: Option<u32>,
    pub degenerate: bool,
    pub excluded_zero_components: bool,
}

impl ParallelBound {
    pub fn finite_value(&self) -> Option<u128> {
        if self.degenerate {
            None
        } else {
            self.value.map(|v| v as u128)
        }
    }
}

pub fn bound_parallels(m: &DegreeVector) -> ParallelBound {
    let degenerate = m.per_component().last().is_none_or(Option::is_none);
    let (finite, excluded) = sorted_finite(m);
    ParallelBound {
        degrees: m.sorted().to_vec(),
        value: finite.last().copied(),
        degenerate,
        excluded_zero_components: excluded,
    }
}

/// The sufficient-object-count thresholds for a guaranteed relation and a
/// guaranteed rational first integral.
#[derive(Debug, Clone)]
pub struct Thresholds {
    pub darboux: u128,
    pub rational: u128,
    pub on_ellipsoid: bool,
    /// For the ellipsoid: the on-surface dimension count d(m₁) + 1,
    /// reported alongside for comparison (the two differ in general).
    pub d_m_plus_one: Option<u128>,
}

/// Ambient: C(n+m₁−1, m₁−1) + 1 and + n. Ellipsoid:
/// ((n+2m₁)/(n+m₁))·C(n+m₁, m₁) + 1 and + n, the prefactor evaluated in
/// exact rational arithmetic and asserted integral.
pub fn integrability_thresholds(n: u32, m1: u32, on_ellipsoid: bool) -> Result<Thresholds> {
    if n < 2 || m1 < 1 {
        return Err(Error::InvalidInput("thresholds need n ≥ 2 and m₁ ≥ 1".into()));
    }
    let base: u128 = if on_ellipsoid {
        let c = BigInt::from(binomial((n + m1) as i64, m1 as i64));
        let num = BigInt::from(n + 2 * m1) * &c;
        let den = BigInt::from(n + m1);
        let (q, r) = num_integer::Integer::div_rem(&num, &den);
        if !r.is_zero() {
            return Err(Error::Verification(
                "ellipsoid threshold is not an integer".into(),
            ));
        }
        u128::try_from(&q).map_err(|_| Error::InvalidInput("threshold overflow".into()))?
    } else {
        binomial((n + m1 - 1) as i64, (m1 - 1) as i64)
    };
    Ok(Thresholds {
        darboux: base + 1,
        rational: base + n as u128,
        on_ellipsoid,
        d_m_plus_one: on_ellipsoid.then(|| dim_on_surface(n, m1) + 1),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdVerdict {
    /// p+q reaches the rational-first-integral threshold.
    RationalFirstIntegralGuaranteed,
    /// p+q reaches the relation threshold.
    RelationGuaranteed,
    NoGuarantee,
}

/// Purely arithmetic check of the sufficient conditions; existence itself
/// is certified separately by `solve_relation`.
pub fn check_threshold(p: u64, q: u64, thresholds: &Thresholds) -> ThresholdVerdict {
    let total = p as u128 + q as u128;
    if total >= thresholds.rational {
        ThresholdVerdict::RationalFirstIntegralGuaranteed
    } else if total >= thresholds.darboux {
        ThresholdVerdict::RelationGuaranteed
    } else {
        ThresholdVerdict::NoGuarantee
    }
}
