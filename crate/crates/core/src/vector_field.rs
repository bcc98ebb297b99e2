//! Polynomial vector fields: Lie derivatives, degree bookkeeping, and the
//! certified tangency test against an ellipsoid.

use std::sync::Arc;

use crate::context::{same_context, Context};
use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::surface::Ellipsoid;

/// One polynomial component per coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    ctx: Arc<Context>,
    components: Vec<MultiPoly>,
}

impl VectorField {
    pub fn new(ctx: &Arc<Context>, components: Vec<MultiPoly>) -> Result<VectorField> {
        if components.len() != ctx.n_coords() {
            return Err(Error::InvalidInput(format!(
                "expected {} components, got {}",
                ctx.n_coords(),
                components.len()
            )));
        }
        for c in &components {
            if !same_context(c.context(), ctx) {
                return Err(Error::ContextMismatch);
            }
        }
        Ok(VectorField {
            ctx: ctx.clone(),
            components,
        })
    }

    pub fn context(&self) -> &Arc<Context> {
        &self.ctx
    }

    pub fn components(&self) -> &[MultiPoly] {
        &self.components
    }

    pub fn component(&self, idx: usize) -> &MultiPoly {
        &self.components[idx]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(MultiPoly::is_zero)
    }

    /// Lie derivative X(f) = Σ Pᵢ ∂f/∂xᵢ.
    pub fn lie_derivative(&self, f: &MultiPoly) -> Result<MultiPoly> {
        if !same_context(f.context(), &self.ctx) {
            return Err(Error::ContextMismatch);
        }
        let mut acc = MultiPoly::zero(&self.ctx);
        for (i, p) in self.components.iter().enumerate() {
            acc = acc.add(&p.mul(&f.diff_idx(i))?)?;
        }
        Ok(acc)
    }

    /// Iterated Lie derivative: X⁰(f) = f, Xʲ(f) = X(X^{j-1}(f)).
    pub fn lie_iterate(&self, f: &MultiPoly, j: u32) -> Result<MultiPoly> {
        let mut acc = f.clone();
        for _ in 0..j {
            acc = self.lie_derivative(&acc)?;
        }
        Ok(acc)
    }

    /// Per-component total degrees plus the sorted view.
    pub fn degree_vector(&self) -> DegreeVector {
        DegreeVector::new(self.components.iter().map(MultiPoly::degree).collect())
    }

    /// Certifies Eq-style tangency to the ellipsoid: either X(M) = K·M
    /// exactly (the multiplier is returned) or the nonzero residual of the
    /// reduction witnesses failure.
    pub fn on_surface_check(&self, e: &Ellipsoid) -> Result<OnSurfaceCertificate> {
        if !same_context(&self.ctx, e.context()) {
            return Err(Error::ContextMismatch);
        }
        let xm = self.lie_derivative(e.defining_poly())?;
        let (q, r) = xm.divrem(e.defining_poly())?;
        if r.is_zero() {
            Ok(OnSurfaceCertificate::OnSurface { multiplier: q })
        } else {
            Ok(OnSurfaceCertificate::NotOnSurface { residual: r })
        }
    }

    /// Substitutes parameter values in every component.
    pub fn subst_params(
        &self,
        bindings: &std::collections::BTreeMap<usize, crate::coeff::Coeff>,
    ) -> Result<VectorField> {
        let components = self
            .components
            .iter()
            .map(|p| p.subst_params(bindings))
            .collect::<Result<Vec<_>>>()?;
        VectorField::new(&self.ctx, components)
    }

    pub fn is_parameter_free(&self) -> bool {
        self.components.iter().all(MultiPoly::is_parameter_free)
    }

    pub fn into_context(&self, target: &Arc<Context>) -> Result<VectorField> {
        let components = self
            .components
            .iter()
            .map(|p| p.into_context(target))
            .collect::<Result<Vec<_>>>()?;
        VectorField::new(target, components)
    }
}

/// Component degrees; `None` is the minus-infinity marker of a zero
/// component. The sorted view puts finite degrees first, non-increasing,
/// matching the usual convention m₁ ≥ m₂ ≥ …
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeVector {
    per_component: Vec<Option<u32>>,
    sorted: Vec<Option<u32>>,
}

impl DegreeVector {
    pub fn new(per_component: Vec<Option<u32>>) -> DegreeVector {
        let mut sorted = per_component.clone();
        sorted.sort_by(|a, b| match (a, b) {
            (Some(x), Some(y)) => y.cmp(x),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => std::cmp::Ordering::Equal,
        });
        DegreeVector {
            per_component,
            sorted,
        }
    }

    pub fn from_degrees(degs: &[u32]) -> DegreeVector {
        DegreeVector::new(degs.iter().map(|&d| Some(d)).collect())
    }

    pub fn per_component(&self) -> &[Option<u32>] {
        &self.per_component
    }

    /// Sorted non-increasing, zero components (minus infinity) last.
    pub fn sorted(&self) -> &[Option<u32>] {
        &self.sorted
    }

    /// m₁: the largest finite component degree.
    pub fn max_degree(&self) -> Option<u32> {
        self.sorted.first().copied().flatten()
    }

    /// Entry k (1-based) of the sorted vector.
    pub fn sorted_entry(&self, k: usize) -> Option<u32> {
        self.sorted.get(k - 1).copied().flatten()
    }

    pub fn len(&self) -> usize {
        self.per_component.len()
    }

    pub fn is_empty(&self) -> bool {
        self.per_component.is_empty()
    }

    pub fn has_zero_component(&self) -> bool {
        self.per_component.iter().any(Option::is_none)
    }

    /// The whole field is zero.
    pub fn is_degenerate(&self) -> bool {
        self.per_component.iter().all(Option::is_none)
    }
}

/// Outcome of the tangency certification.
#[derive(Debug, Clone)]
pub enum OnSurfaceCertificate {
    /// X(M) = multiplier · M identically.
    OnSurface { multiplier: MultiPoly },
    /// normal_form(X(M)) ≠ 0; the residual is the counterexample.
    NotOnSurface { residual: MultiPoly },
}

impl OnSurfaceCertificate {
    pub fn multiplier(&self) -> Option<&MultiPoly> {
        match self {
            OnSurfaceCertificate::OnSurface { multiplier } => Some(multiplier),
            OnSurfaceCertificate::NotOnSurface { .. } => None,
        }
    }

    pub fn is_on_surface(&self) -> bool {
        matches!(self, OnSurfaceCertificate::OnSurface { .. })
    }
}
