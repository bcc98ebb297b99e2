//! The n-dimensional ellipsoid as an algebraic surface: defining polynomial,
//! canonical reduction modulo its ideal, on-surface equality, hyperplane
//! tangency classification, and the on-surface dimension count.

use std::sync::Arc;

use crate::coeff::Coeff;
use crate::context::Context;
use crate::error::{Error, Result};
use crate::poly::MultiPoly;

/// The ellipsoid Σ xᵢ²/aᵢ² = 1 in n+1 coordinates.
///
/// The gradient of the defining polynomial vanishes only at the origin,
/// which is not on the surface, so the surface is regular for any nonzero
/// semi-axes (symbolic ones are assumed nonzero; that assumption is part of
/// the reported metadata).
#[derive(Debug, Clone)]
pub struct Ellipsoid {
    ctx: Arc<Context>,
    semi_axes: Vec<Coeff>,
    defining: MultiPoly,
}

impl Ellipsoid {
    pub fn new(ctx: &Arc<Context>, semi_axes: Vec<Coeff>) -> Result<Ellipsoid> {
        let ncoords = ctx.n_coords();
        if ncoords < 3 {
            return Err(Error::InvalidInput(
                "an ellipsoid needs dimension n ≥ 2, i.e. at least 3 coordinates".into(),
            ));
        }
        if semi_axes.len() != ncoords {
            return Err(Error::InvalidInput(format!(
                "expected {ncoords} semi-axes, got {}",
                semi_axes.len()
            )));
        }
        if semi_axes.iter().any(Coeff::is_zero) {
            return Err(Error::InvalidInput("semi-axes must be nonzero".into()));
        }
        let mut defining = MultiPoly::constant(ctx, Coeff::one(ctx.n_params()).neg());
        for (i, ai) in semi_axes.iter().enumerate() {
            let xi2 = MultiPoly::coord(ctx, i).pow(2);
            let inv = ai.mul(ai).inv()?;
            defining = defining.add(&xi2.scale(&inv))?;
        }
        Ok(Ellipsoid {
            ctx: ctx.clone(),
            semi_axes,
            defining,
        })
    }

    /// Dimension n of the surface (coordinates are n+1).
    pub fn dim(&self) -> usize {
        self.ctx.n_coords() - 1
    }

    pub fn context(&self) -> &Arc<Context> {
        &self.ctx
    }

    pub fn semi_axes(&self) -> &[Coeff] {
        &self.semi_axes
    }

    /// The defining polynomial M = Σ xᵢ²/aᵢ² − 1.
    pub fn defining_poly(&self) -> &MultiPoly {
        &self.defining
    }

    /// Canonical representative modulo ⟨M⟩: the remainder of division by M,
    /// which rewrites x_{n+1}² away so every term has x_{n+1}-degree ≤ 1.
    pub fn normal_form(&self, p: &MultiPoly) -> Result<NormalForm> {
        let (_, r) = p.divrem(&self.defining)?;
        debug_assert!(r.degree_in(self.dim()).is_none_or(|d| d <= 1));
        Ok(NormalForm { poly: r })
    }

    pub fn equal_on_surface(&self, p: &MultiPoly, q: &MultiPoly) -> Result<bool> {
        Ok(self.normal_form(&p.sub(q)?)?.is_zero())
    }

    /// Dimension of the space of degree-≤m polynomials on the surface:
    /// C(n+m, n) − C(n+m−2, n), the surface having degree 2.
    pub fn dim_on_surface(&self, m: u32) -> u128 {
        dim_on_surface(self.dim() as u32, m)
    }

    /// Classifies the hyperplane Σ cᵢxᵢ = d against the surface using the
    /// discriminant S − d² with S = Σ aᵢ²cᵢ².
    ///
    /// A vanishing discriminant with S ≠ 0 pins an affine tangency point
    /// (xᵢ = 2d·aᵢ²cᵢ/(2S)); with S = 0 the would-be tangency escapes to
    /// infinity and the affine intersection is transversal — that case is
    /// exactly the isotropic meridian forms, which must not be rejected.
    pub fn hyperplane_tangency(&self, coeffs: &[Coeff], d: &Coeff) -> Result<Tangency> {
        if coeffs.len() != self.ctx.n_coords() {
            return Err(Error::InvalidInput(
                "hyperplane coefficient count must match the coordinates".into(),
            ));
        }
        if coeffs.iter().all(Coeff::is_zero) {
            return Err(Error::InvalidInput("zero normal vector".into()));
        }
        let np = self.ctx.n_params();
        let mut s = Coeff::zero(np);
        for (ai, ci) in self.semi_axes.iter().zip(coeffs) {
            s = s.add(&ai.mul(ai).mul(&ci.mul(ci)));
        }
        let disc = s.sub(&d.mul(d));
        if disc.is_zero() {
            if s.is_zero() {
                return Ok(Tangency::Transversal);
            }
            return Ok(Tangency::Tangent);
        }
        match disc.sign_if_decidable() {
            Some(std::cmp::Ordering::Greater) => Ok(Tangency::Transversal),
            Some(std::cmp::Ordering::Less) => Ok(Tangency::EmptyOverReals),
            _ => Ok(Tangency::NonTangentUndecided),
        }
    }
}

/// Polynomial reduced modulo the surface ideal: x_{n+1}-degree ≤ 1.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalForm {
    poly: MultiPoly,
}

impl NormalForm {
    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    pub fn into_poly(self) -> MultiPoly {
        self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }
}

/// How a hyperplane meets the surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tangency {
    /// Meets transversally (affine tangency excluded exactly).
    Transversal,
    /// Touches at an affine point; rejected as an invariant hypersurface.
    Tangent,
    /// Real data with negative discriminant: no real intersection.
    EmptyOverReals,
    /// Not tangent; the real sign question is undecidable for the given
    /// parametric or complex data.
    NonTangentUndecided,
}

pub(crate) fn binomial(u: i64, v: i64) -> u128 {
    if v < 0 || u < v {
        return 0;
    }
    let v = v.min(u - v);
    let mut acc: u128 = 1;
    for k in 0..v {
        acc = acc * (u - k) as u128 / (k as u128 + 1);
    }
    acc
}

/// d(m) = C(n+m, n) − C(n+m−2, n), with C(u, v) = 0 when u < v.
pub fn dim_on_surface(n: u32, m: u32) -> u128 {
    binomial((n + m) as i64, n as i64) - binomial(n as i64 + m as i64 - 2, n as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_expression;

    fn setup() -> (Arc<Context>, Ellipsoid) {
        let ctx = Context::new(vec!["x", "y", "z"], vec!["a", "b", "c"]).unwrap();
        let axes = vec![
            Coeff::param(3, 0),
            Coeff::param(3, 1),
            Coeff::param(3, 2),
        ];
        let e = Ellipsoid::new(&ctx, axes).unwrap();
        (ctx, e)
    }

    #[test]
    fn defining_polynomial_reduces_to_zero() {
        let (_, e) = setup();
        assert!(e.normal_form(e.defining_poly()).unwrap().is_zero());
    }

    #[test]
    fn z_squared_rewrites() {
        let (ctx, e) = setup();
        let z2 = parse_expression("z^2", &ctx).unwrap();
        let expect = parse_expression("c^2*(1 - x^2/a^2 - y^2/b^2)", &ctx).unwrap();
        assert_eq!(e.normal_form(&z2).unwrap().into_poly(), expect);
        assert!(e.equal_on_surface(&z2, &expect).unwrap());
    }

    #[test]
    fn reduced_input_unchanged() {
        let (ctx, e) = setup();
        let xy = parse_expression("x*y", &ctx).unwrap();
        assert_eq!(e.normal_form(&xy).unwrap().into_poly(), xy);
        let x = parse_expression("x", &ctx).unwrap();
        let y = parse_expression("y", &ctx).unwrap();
        assert!(!e.equal_on_surface(&x, &y).unwrap());
    }

    #[test]
    fn idempotent_reduction() {
        let (ctx, e) = setup();
        let p = parse_expression("z^4 + x*z^2 + y", &ctx).unwrap();
        let r1 = e.normal_form(&p).unwrap().into_poly();
        let r2 = e.normal_form(&r1).unwrap().into_poly();
        assert_eq!(r1, r2);
        assert!(r1.degree_in(2).is_none_or(|d| d <= 1));
    }

    #[test]
    fn dimension_formula() {
        assert_eq!(dim_on_surface(2, 0), 1);
        assert_eq!(dim_on_surface(2, 1), 3);
        assert_eq!(dim_on_surface(3, 2), 9);
        // strictly increasing in m
        for n in 2..5u32 {
            for m in 0..8u32 {
                assert!(dim_on_surface(n, m + 1) > dim_on_surface(n, m));
            }
        }
    }

    #[test]
    fn tangency_classification() {
        let (_, e) = setup();
        let np = 3;
        let a = Coeff::param(np, 0);
        let one = Coeff::one(np);
        let zero = Coeff::zero(np);
        // x = a touches at a vertex
        let t = e
            .hyperplane_tangency(&[one.clone(), zero.clone(), zero.clone()], &a)
            .unwrap();
        assert_eq!(t, Tangency::Tangent);
        // x = 0 cuts through
        let t2 = e
            .hyperplane_tangency(&[one.clone(), zero.clone(), zero.clone()], &zero)
            .unwrap();
        assert_eq!(t2, Tangency::Transversal);
        // αx + βy = 0 with real α, β (here 2, -3)
        let t3 = e
            .hyperplane_tangency(
                &[Coeff::from_int(np, 2), Coeff::from_int(np, -3), zero.clone()],
                &zero,
            )
            .unwrap();
        assert_eq!(t3, Tangency::Transversal);
        // isotropic meridian form -i·b·x + a·y: S = 0, affinely transversal
        let b = Coeff::param(np, 1);
        let ib_neg = b.mul(&Coeff::imaginary_unit(np)).neg();
        let t4 = e
            .hyperplane_tangency(&[ib_neg, a.clone(), zero.clone()], &zero)
            .unwrap();
        assert_eq!(t4, Tangency::Transversal);
        // zero normal rejected
        assert!(e
            .hyperplane_tangency(&[zero.clone(), zero.clone(), zero.clone()], &zero)
            .is_err());
    }

    #[test]
    fn constructor_validation() {
        let ctx = Context::new(vec!["x", "y"], vec![] as Vec<&str>).unwrap();
        assert!(Ellipsoid::new(&ctx, vec![Coeff::one(0), Coeff::one(0)]).is_err());
        let ctx3 = Context::new(vec!["x", "y", "z"], vec![] as Vec<&str>).unwrap();
        assert!(Ellipsoid::new(
            &ctx3,
            vec![Coeff::one(0), Coeff::zero(0), Coeff::one(0)]
        )
        .is_err());
    }
}
