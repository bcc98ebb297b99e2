//! Shared naming context: the ordered coordinate list and the ordered
//! parameter list every polynomial in a computation refers to.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Ordered coordinates and parameters.
///
/// Coordinates are the ring variables (`x`, `y`, `z`, ...); parameters are
/// symbolic constants (`a`, `b`, `k2`, ...) that live inside coefficients.
/// All polynomial values built against the same context share it through an
/// `Arc`, so exponent vectors can be zipped positionally.
#[derive(Debug, PartialEq, Eq)]
pub struct Context {
    coords: Vec<String>,
    params: Vec<String>,
}

impl Context {
    pub fn new<S: Into<String>>(
        coords: impl IntoIterator<Item = S>,
        params: impl IntoIterator<Item = S>,
    ) -> Result<Arc<Context>> {
        let coords: Vec<String> = coords.into_iter().map(Into::into).collect();
        let params: Vec<String> = params.into_iter().map(Into::into).collect();
        let mut seen = std::collections::BTreeSet::new();
        for name in coords.iter().chain(params.iter()) {
            if name.is_empty() {
                return Err(Error::InvalidContext("empty symbol name".into()));
            }
            if name == "I" {
                return Err(Error::InvalidContext(
                    "`I` is reserved for the imaginary unit".into(),
                ));
            }
            if !seen.insert(name.clone()) {
                return Err(Error::InvalidContext(format!("duplicate symbol `{name}`")));
            }
        }
        Ok(Arc::new(Context { coords, params }))
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn n_coords(&self) -> usize {
        self.coords.len()
    }

    pub fn n_params(&self) -> usize {
        self.params.len()
    }

    pub fn coord_index(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| c == name)
    }

    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.params.iter().position(|p| p == name)
    }

    pub fn coord_name(&self, idx: usize) -> &str {
        &self.coords[idx]
    }

    pub fn param_name(&self, idx: usize) -> &str {
        &self.params[idx]
    }

    /// A copy of this context with extra parameters appended.
    ///
    /// Used internally when a computation needs a fresh indeterminate (for
    /// example the pencil slope in meridian detection). Extra names may start
    /// with `_`, which the expression grammar cannot produce, so they can
    /// never collide with user symbols.
    pub fn with_extra_params(&self, extra: &[&str]) -> Result<Arc<Context>> {
        let mut params = self.params.clone();
        for e in extra {
            params.push((*e).to_string());
        }
        let coords = self.coords.clone();
        let mut seen = std::collections::BTreeSet::new();
        for name in coords.iter().chain(params.iter()) {
            if !seen.insert(name.clone()) {
                return Err(Error::InvalidContext(format!("duplicate symbol `{name}`")));
            }
        }
        Ok(Arc::new(Context { coords, params }))
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "coords [{}], params [{}]",
            self.coords.join(", "),
            self.params.join(", ")
        )
    }
}

/// Checks that two values come from the same context (pointer or structural).
pub(crate) fn same_context(a: &Arc<Context>, b: &Arc<Context>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}
