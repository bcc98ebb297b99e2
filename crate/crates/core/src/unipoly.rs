//! Dense univariate polynomials over the exact scalar field, with
//! Gaussian-rational root extraction.
//!
//! Root finding is deliberately restricted: candidates come from divisor
//! search on the leading and trailing Gaussian integers of the primitive
//! integer form, so only roots in ℚ(i) are found. Whatever refuses to split
//! is returned as an unfactored residual, never dropped.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::gaussian::GaussInt;

/// Coefficients from degree 0 upward; the leading one is nonzero unless the
/// polynomial is zero (empty vector).
#[derive(Debug, Clone, PartialEq)]
pub struct UniPoly {
    pub var: String,
    pub coeffs: Vec<Coeff>,
}

impl UniPoly {
    pub fn new(var: impl Into<String>, mut coeffs: Vec<Coeff>) -> Self {
        while coeffs.last().is_some_and(Coeff::is_zero) {
            coeffs.pop();
        }
        UniPoly {
            var: var.into(),
            coeffs,
        }
    }

    pub fn zero(var: impl Into<String>) -> Self {
        UniPoly {
            var: var.into(),
            coeffs: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        if self.is_zero() {
            None
        } else {
            Some((self.coeffs.len() - 1) as u32)
        }
    }

    pub fn leading(&self) -> Option<&Coeff> {
        self.coeffs.last()
    }

    pub fn eval(&self, at: &Coeff) -> Coeff {
        let np = at.nparams();
        let mut acc = Coeff::zero(np);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(at).add(c);
        }
        acc
    }

    pub fn is_parameter_free(&self) -> bool {
        self.coeffs.iter().all(Coeff::is_constant)
    }

    pub fn scale(&self, c: &Coeff) -> UniPoly {
        UniPoly::new(
            self.var.clone(),
            self.coeffs.iter().map(|x| x.mul(c)).collect(),
        )
    }

    pub fn sub(&self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let np = self
            .coeffs
            .first()
            .or_else(|| rhs.coeffs.first())
            .map_or(0, Coeff::nparams);
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.coeffs.get(k).cloned().unwrap_or_else(|| Coeff::zero(np));
            let b = rhs.coeffs.get(k).cloned().unwrap_or_else(|| Coeff::zero(np));
            coeffs.push(a.sub(&b));
        }
        UniPoly::new(self.var.clone(), coeffs)
    }

    /// Euclidean division over the coefficient field.
    pub fn divrem(&self, d: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        if d.is_zero() {
            return Err(Error::DivisionByZeroPoly);
        }
        let dl = d.coeffs.len();
        let lc = d.leading().unwrap().clone();
        let mut rem = self.clone();
        let np = lc.nparams();
        let mut quot = vec![Coeff::zero(np); self.coeffs.len().saturating_sub(dl) + 1];
        while !rem.is_zero() && rem.coeffs.len() >= dl {
            let shift = rem.coeffs.len() - dl;
            let q = rem.leading().unwrap().div(&lc)?;
            quot[shift] = q.clone();
            let mut sub = vec![Coeff::zero(np); shift];
            sub.extend(d.coeffs.iter().map(|c| c.mul(&q)));
            rem = rem.sub(&UniPoly::new(self.var.clone(), sub));
        }
        Ok((UniPoly::new(self.var.clone(), quot), rem))
    }

    /// Monic gcd over the coefficient field.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        if let Some(lc) = a.leading().cloned() {
            a = a.scale(&lc.inv().expect("leading coefficient nonzero"));
        }
        a
    }

    /// Synthetic division by `(var - r)`; returns the quotient when the
    /// remainder vanishes.
    fn deflate(&self, r: &Coeff) -> Option<UniPoly> {
        if self.is_zero() {
            return None;
        }
        let n = self.coeffs.len();
        let mut out = vec![Coeff::zero(r.nparams()); n - 1];
        let mut carry = Coeff::zero(r.nparams());
        for k in (0..n).rev() {
            let v = self.coeffs[k].add(&carry);
            if k == 0 {
                if !v.is_zero() {
                    return None;
                }
            } else {
                out[k - 1] = v.clone();
                carry = v.mul(r);
            }
        }
        Some(UniPoly::new(self.var.clone(), out))
    }
}

/// Result of Gaussian-rational root extraction.
#[derive(Debug, Clone)]
pub struct RootReport {
    /// Roots with multiplicities.
    pub roots: Vec<(Coeff, u32)>,
    /// Unfactored part of degree ≥ 1 with no Gaussian-rational roots.
    pub residual: Option<UniPoly>,
}

/// All Gaussian-rational roots of a nonzero, parameter-free polynomial,
/// with multiplicities; candidates come from divisors of the leading and
/// trailing integer coefficients.
pub fn gaussian_roots(u: &UniPoly) -> Result<RootReport> {
    if u.is_zero() {
        return Err(Error::InvalidInput(
            "root extraction requires a nonzero polynomial".into(),
        ));
    }
    if !u.is_parameter_free() {
        return Err(Error::ParameterBearing("uni_gaussian_roots".into()));
    }
    let np = u.coeffs[0].nparams();
    let mut work = u.clone();
    let mut roots: Vec<(Coeff, u32)> = Vec::new();

    // root at 0
    let mut zero_mult = 0u32;
    while !work.is_zero() && work.coeffs[0].is_zero() {
        work = UniPoly::new(work.var.clone(), work.coeffs[1..].to_vec());
        zero_mult += 1;
    }
    if zero_mult > 0 {
        roots.push((Coeff::zero(np), zero_mult));
    }

    if work.degree().is_none_or(|d| d == 0) {
        return Ok(RootReport {
            roots,
            residual: None,
        });
    }

    // primitive Gaussian-integer form
    let mut den_lcm = BigInt::one();
    for c in &work.coeffs {
        let (_, d) = c.as_gauss_ratio().expect("parameter-free coefficient");
        den_lcm = den_lcm.lcm(&d);
    }
    let ints: Vec<GaussInt> = work
        .coeffs
        .iter()
        .map(|c| {
            let (n, d) = c.as_gauss_ratio().unwrap();
            let scale = &den_lcm / d;
            &n * &GaussInt::from_int(scale)
        })
        .collect();
    let mut content = GaussInt::zero();
    for c in &ints {
        content = content.gcd(c);
    }
    let ints: Vec<GaussInt> = ints
        .iter()
        .map(|c| c.div_exact(&content).expect("content divides"))
        .collect();

    let trailing = ints.first().unwrap().clone();
    let leading = ints.last().unwrap().clone();
    let mut candidates: Vec<Coeff> = Vec::new();
    for p in trailing.divisors_up_to_units() {
        for q in leading.divisors_up_to_units() {
            for unit in GaussInt::units() {
                let numc = &p * &unit;
                let cand = Coeff::new(
                    crate::coeff::ParamPoly::constant(np, numc),
                    crate::coeff::ParamPoly::constant(np, q.clone()),
                )
                .expect("divisor is nonzero");
                if !candidates.contains(&cand) {
                    candidates.push(cand);
                }
            }
        }
    }

    for cand in candidates {
        let mut mult = 0u32;
        while work.degree().is_some_and(|d| d >= 1) && work.eval(&cand).is_zero() {
            if let Some(next) = work.deflate(&cand) {
                work = next;
                mult += 1;
            } else {
                break;
            }
        }
        if mult > 0 {
            roots.push((cand, mult));
        }
    }

    let residual = if work.degree().is_some_and(|d| d >= 1) {
        Some(work)
    } else {
        None
    };
    Ok(RootReport { roots, residual })
}
