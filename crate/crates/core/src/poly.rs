//! Sparse multivariate polynomials over the exact coefficient field.
//!
//! Monomials are exponent vectors over the context's coordinates, ordered by
//! graded lexicographic order with the *last* coordinate most significant.
//! That choice makes the ellipsoid polynomial's leading monomial x_{n+1}²,
//! so reduction modulo the surface ideal is a single-rule rewrite.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::coeff::Coeff;
use crate::context::{same_context, Context};
use crate::error::{Error, Result};

/// Exponent vector, one entry per coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn constant(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, idx: usize) -> Self {
        let mut e = vec![0; n];
        e[idx] = 1;
        Monomial(e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

/// Graded lex, ties broken from the last coordinate down; larger exponent on
/// a later coordinate wins.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for (a, b) in self.0.iter().rev().zip(other.0.iter().rev()) {
            match a.cmp(b) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial: canonical form stores no zero
/// coefficients, so structural equality of the term maps is value equality.
#[derive(Debug, Clone)]
pub struct MultiPoly {
    ctx: Arc<Context>,
    terms: BTreeMap<Monomial, Coeff>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        same_context(&self.ctx, &other.ctx) && self.terms == other.terms
    }
}

impl Eq for MultiPoly {}

impl MultiPoly {
    pub fn zero(ctx: &Arc<Context>) -> Self {
        MultiPoly {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ctx: &Arc<Context>, c: Coeff) -> Self {
        let mut p = MultiPoly::zero(ctx);
        p.insert_add(Monomial::constant(ctx.n_coords()), c);
        p
    }

    pub fn one(ctx: &Arc<Context>) -> Self {
        MultiPoly::constant(ctx, Coeff::one(ctx.n_params()))
    }

    pub fn from_int(ctx: &Arc<Context>, n: impl Into<BigInt>) -> Self {
        MultiPoly::constant(ctx, Coeff::from_int(ctx.n_params(), n))
    }

    pub fn coord(ctx: &Arc<Context>, idx: usize) -> Self {
        let mut p = MultiPoly::zero(ctx);
        p.insert_add(
            Monomial::var(ctx.n_coords(), idx),
            Coeff::one(ctx.n_params()),
        );
        p
    }

    pub fn coord_named(ctx: &Arc<Context>, name: &str) -> Result<Self> {
        let idx = ctx
            .coord_index(name)
            .ok_or_else(|| Error::UnknownCoordinate(name.to_string()))?;
        Ok(MultiPoly::coord(ctx, idx))
    }

    pub fn param(ctx: &Arc<Context>, idx: usize) -> Self {
        MultiPoly::constant(ctx, Coeff::param(ctx.n_params(), idx))
    }

    pub fn context(&self) -> &Arc<Context> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_constant())
    }

    pub fn constant_value(&self) -> Option<Coeff> {
        if self.is_zero() {
            return Some(Coeff::zero(self.ctx.n_params()));
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff_of(&self, m: &Monomial) -> Coeff {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| Coeff::zero(self.ctx.n_params()))
    }

    /// Total degree; `None` is the distinguished minus-infinity marker of
    /// the zero polynomial (never 0 or -1).
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    /// Degree in one coordinate.
    pub fn degree_in(&self, idx: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[idx]).max()
    }

    pub fn leading(&self) -> Option<(&Monomial, &Coeff)> {
        self.terms.iter().next_back()
    }

    fn insert_add(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_ctx(&self, other: &MultiPoly) -> Result<()> {
        if same_context(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn add(&self, rhs: &MultiPoly) -> Result<MultiPoly> {
        self.check_ctx(rhs)?;
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert_add(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &MultiPoly) -> Result<MultiPoly> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn mul(&self, rhs: &MultiPoly) -> Result<MultiPoly> {
        self.check_ctx(rhs)?;
        let mut out = MultiPoly::zero(&self.ctx);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.insert_add(ma.mul(mb), ca.mul(cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Coeff) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.ctx);
        }
        MultiPoly {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.clone(), x.mul(c)))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(&self.ctx);
        for _ in 0..e {
            acc = acc.mul(self).expect("same context");
        }
        acc
    }

    /// Formal partial derivative; parameters are constants.
    pub fn diff(&self, coord: &str) -> Result<MultiPoly> {
        let idx = self
            .ctx
            .coord_index(coord)
            .ok_or_else(|| Error::UnknownCoordinate(coord.to_string()))?;
        Ok(self.diff_idx(idx))
    }

    pub fn diff_idx(&self, idx: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.ctx);
        for (m, c) in &self.terms {
            let e = m.0[idx];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[idx] -= 1;
            out.insert_add(
                Monomial(exps),
                c.mul(&Coeff::from_int(self.ctx.n_params(), e as i64)),
            );
        }
        out
    }

    /// Division with remainder by a single divisor under the monomial
    /// order: `self = q·d + r` and no term of `r` is divisible by the
    /// leading monomial of `d`.
    pub fn divrem(&self, d: &MultiPoly) -> Result<(MultiPoly, MultiPoly)> {
        self.check_ctx(d)?;
        if d.is_zero() {
            return Err(Error::DivisionByZeroPoly);
        }
        let (lm, lc) = d.leading().expect("nonzero divisor");
        let lm = lm.clone();
        let lc = lc.clone();
        let mut quot = MultiPoly::zero(&self.ctx);
        let mut rem = MultiPoly::zero(&self.ctx);
        let mut work = self.clone();
        while let Some((m, c)) = work.leading().map(|(m, c)| (m.clone(), c.clone())) {
            if lm.divides(&m) {
                let t = m.div(&lm);
                let tc = c.div(&lc).expect("leading coefficient nonzero");
                quot.insert_add(t.clone(), tc.clone());
                // work -= (tc·x^t)·d
                let mut shift = MultiPoly::zero(&self.ctx);
                shift.insert_add(t, tc);
                work = work.sub(&shift.mul(d)?)?;
            } else {
                rem.insert_add(m.clone(), c);
                work.terms.remove(&m);
            }
        }
        Ok((quot, rem))
    }

    pub fn divides(&self, other: &MultiPoly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        match other.divrem(self) {
            Ok((_, r)) => r.is_zero(),
            Err(_) => false,
        }
    }

    pub fn div_exact(&self, d: &MultiPoly) -> Result<MultiPoly> {
        let (q, r) = self.divrem(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InexactDivision)
        }
    }

    /// Simultaneous substitution of coordinates by polynomials.
    pub fn subst(&self, bindings: &BTreeMap<usize, MultiPoly>) -> Result<MultiPoly> {
        for v in bindings.values() {
            self.check_ctx(v)?;
        }
        let mut out = MultiPoly::zero(&self.ctx);
        for (m, c) in &self.terms {
            let mut term = MultiPoly::constant(&self.ctx, c.clone());
            for (j, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match bindings.get(&j) {
                    Some(repl) => term = term.mul(&repl.pow(e))?,
                    None => {
                        let mut mono = MultiPoly::zero(&self.ctx);
                        mono.insert_add(
                            Monomial({
                                let mut v = vec![0; self.ctx.n_coords()];
                                v[j] = e;
                                v
                            }),
                            Coeff::one(self.ctx.n_params()),
                        );
                        term = term.mul(&mono)?;
                    }
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    pub fn subst_named(&self, bindings: &BTreeMap<String, MultiPoly>) -> Result<MultiPoly> {
        let mut by_idx = BTreeMap::new();
        for (name, v) in bindings {
            let idx = self
                .ctx
                .coord_index(name)
                .ok_or_else(|| Error::UnknownCoordinate(name.clone()))?;
            by_idx.insert(idx, v.clone());
        }
        self.subst(&by_idx)
    }

    /// Substitutes parameter values inside every coefficient.
    pub fn subst_params(&self, bindings: &BTreeMap<usize, Coeff>) -> Result<MultiPoly> {
        let mut out = MultiPoly::zero(&self.ctx);
        for (m, c) in &self.terms {
            out.insert_add(m.clone(), c.subst_params(bindings)?);
        }
        Ok(out)
    }

    /// Coefficient-wise complex conjugation (parameters treated as real).
    pub fn conj(&self) -> MultiPoly {
        MultiPoly {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.conj()))
                .collect(),
        }
    }

    pub fn real_part(&self) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.ctx);
        for (m, c) in &self.terms {
            out.insert_add(m.clone(), c.real_part());
        }
        out
    }

    pub fn imag_part(&self) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.ctx);
        for (m, c) in &self.terms {
            out.insert_add(m.clone(), c.imag_part());
        }
        out
    }

    pub fn is_parameter_free(&self) -> bool {
        self.terms.values().all(|c| c.is_constant())
    }

    /// Moves this polynomial into a context that shares the coordinate list
    /// and extends the parameter list (positionally, by name).
    pub fn into_context(&self, target: &Arc<Context>) -> Result<MultiPoly> {
        if same_context(&self.ctx, target) {
            return Ok(MultiPoly {
                ctx: target.clone(),
                terms: self.terms.clone(),
            });
        }
        if self.ctx.coords() != target.coords() {
            return Err(Error::ContextMismatch);
        }
        let map: Vec<usize> = self
            .ctx
            .params()
            .iter()
            .map(|p| {
                target
                    .param_index(p)
                    .ok_or_else(|| Error::InvalidContext(format!("parameter `{p}` missing")))
            })
            .collect::<Result<_>>()?;
        let np = target.n_params();
        Ok(MultiPoly {
            ctx: target.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.remap_params(&map, np)))
                .collect(),
        })
    }

    /// Renders in the expression grammar (descending monomial order).
    pub fn render(&self) -> String {
        crate::parser::render_poly(self)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Linear form helper: the coefficient vector of a degree-≤1 polynomial,
/// plus its constant term.
pub fn linear_parts(p: &MultiPoly) -> Option<(Vec<Coeff>, Coeff)> {
    if p.degree().is_some_and(|d| d > 1) {
        return None;
    }
    let n = p.context().n_coords();
    let np = p.context().n_params();
    let mut coeffs = vec![Coeff::zero(np); n];
    let mut cst = Coeff::zero(np);
    for (m, c) in p.terms() {
        if m.is_constant() {
            cst = c.clone();
        } else {
            let idx = m.0.iter().position(|&e| e == 1).expect("degree one");
            coeffs[idx] = c.clone();
        }
    }
    Some((coeffs, cst))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::Context;

    fn ctx2() -> Arc<Context> {
        Context::new(["x", "y"], ["a", "b"]).unwrap()
    }

    fn x(ctx: &Arc<Context>) -> MultiPoly {
        MultiPoly::coord(ctx, 0)
    }

    fn y(ctx: &Arc<Context>) -> MultiPoly {
        MultiPoly::coord(ctx, 1)
    }

    #[test]
    fn monomial_order_ranks_last_coordinate_highest() {
        let z2 = Monomial(vec![0, 0, 2]);
        let yz = Monomial(vec![0, 1, 1]);
        let x2 = Monomial(vec![2, 0, 0]);
        let xy = Monomial(vec![1, 1, 0]);
        assert!(z2 > yz && yz > xy && xy > x2);
        assert!(Monomial(vec![3, 0, 0]) > z2); // degree first
    }

    #[test]
    fn addition_cancels() {
        let ctx = ctx2();
        let p = x(&ctx).add(&y(&ctx)).unwrap();
        let q = y(&ctx).neg();
        assert_eq!(p.add(&q).unwrap(), x(&ctx));
    }

    #[test]
    fn pow_zero_is_one() {
        let ctx = ctx2();
        let p = x(&ctx).add(&MultiPoly::one(&ctx)).unwrap();
        assert_eq!(p.pow(0), MultiPoly::one(&ctx));
    }

    #[test]
    fn conjugate_meridian_product() {
        // (-i·b·x + a·y)(i·b·x + a·y) = b²x² + a²y²
        let ctx = ctx2();
        let a = MultiPoly::param(&ctx, 0);
        let b = MultiPoly::param(&ctx, 1);
        let i = MultiPoly::constant(&ctx, Coeff::imaginary_unit(2));
        let f1 = i
            .neg()
            .mul(&b)
            .unwrap()
            .mul(&x(&ctx))
            .unwrap()
            .add(&a.mul(&y(&ctx)).unwrap())
            .unwrap();
        let f2 = i
            .mul(&b)
            .unwrap()
            .mul(&x(&ctx))
            .unwrap()
            .add(&a.mul(&y(&ctx)).unwrap())
            .unwrap();
        let prod = f1.mul(&f2).unwrap();
        let expect = b
            .pow(2)
            .mul(&x(&ctx).pow(2))
            .unwrap()
            .add(&a.pow(2).mul(&y(&ctx).pow(2)).unwrap())
            .unwrap();
        assert_eq!(prod, expect);
    }

    #[test]
    fn derivative_examples() {
        let ctx = ctx2();
        let p = x(&ctx).pow(2);
        assert!(p.diff("y").unwrap().is_zero());
        let two_x = x(&ctx).scale(&Coeff::from_int(2, 2));
        assert_eq!(p.diff("x").unwrap(), two_x);
        assert!(p.diff("w").is_err());
    }

    #[test]
    fn divrem_examples() {
        let ctx = ctx2();
        // x² - y² = (x - y)(x + y)
        let p = x(&ctx).pow(2).sub(&y(&ctx).pow(2)).unwrap();
        let d = x(&ctx).add(&y(&ctx)).unwrap();
        let (q, r) = p.divrem(&d).unwrap();
        assert!(r.is_zero());
        assert_eq!(q.mul(&d).unwrap(), p);
        // x² + 1 by y: no progress
        let p2 = x(&ctx).pow(2).add(&MultiPoly::one(&ctx)).unwrap();
        let (q2, r2) = p2.divrem(&y(&ctx)).unwrap();
        assert!(q2.is_zero());
        assert_eq!(r2, p2);
        assert!(p2.divrem(&MultiPoly::zero(&ctx)).is_err());
    }

    #[test]
    fn divrem_roundtrip_general() {
        let ctx = ctx2();
        let p = x(&ctx)
            .pow(3)
            .add(&x(&ctx).mul(&y(&ctx)).unwrap().scale(&Coeff::from_int(2, 5)))
            .unwrap()
            .add(&MultiPoly::param(&ctx, 0))
            .unwrap();
        let d = x(&ctx).add(&y(&ctx).scale(&Coeff::from_int(2, 3))).unwrap();
        let (q, r) = p.divrem(&d).unwrap();
        assert_eq!(q.mul(&d).unwrap().add(&r).unwrap(), p);
        let (dm, _) = d.leading().unwrap();
        assert!(r.terms.keys().all(|m| !dm.divides(m)));
    }

    #[test]
    fn substitution_examples() {
        let ctx = ctx2();
        let p = x(&ctx).pow(2).add(&y(&ctx).pow(2)).unwrap();
        let mut bind = BTreeMap::new();
        bind.insert("x".to_string(), MultiPoly::zero(&ctx));
        assert_eq!(p.subst_named(&bind).unwrap(), y(&ctx).pow(2));

        // αx + βy with y → -(α/β)x vanishes
        let alpha = Coeff::param(2, 0);
        let beta = Coeff::param(2, 1);
        let form = x(&ctx).scale(&alpha).add(&y(&ctx).scale(&beta)).unwrap();
        let mut bind2 = BTreeMap::new();
        bind2.insert(
            "y".to_string(),
            x(&ctx).scale(&alpha.div(&beta).unwrap().neg()),
        );
        assert!(form.subst_named(&bind2).unwrap().is_zero());
    }

    #[test]
    fn zero_degree_is_marker() {
        let ctx = ctx2();
        assert_eq!(MultiPoly::zero(&ctx).degree(), None);
        assert_eq!(MultiPoly::one(&ctx).degree(), Some(0));
        assert_eq!(x(&ctx).degree(), Some(1));
    }

    #[test]
    fn mul_degree_adds() {
        let ctx = ctx2();
        let p = x(&ctx).pow(2).add(&y(&ctx)).unwrap();
        let q = y(&ctx).pow(3).add(&MultiPoly::one(&ctx)).unwrap();
        assert_eq!(
            p.mul(&q).unwrap().degree(),
            Some(p.degree().unwrap() + q.degree().unwrap())
        );
    }
}
