//! Line-oriented system files: coordinates, parameters, semi-axes, field
//! components, and optional expected artifacts for regression.
//!
//! ```text
//! [name] pp0
//! [coordinates] x y z
//! [parameters] a b c k2 a020 k001
//! [ellipsoid] a b c
//! [field]
//! y*((I*a*k2*x)/b + a020*y)
//! ...
//! [expect]
//! surface_multiplier: k001*z
//! plane: -I*b*x + a*y
//! ```
//!
//! Blank lines and `#` comments are ignored. Every expression uses the
//! grammar of the expression parser.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::coeff::Coeff;
use crate::context::Context;
use crate::error::{Error, Result};
use crate::parser::parse_expression;
use crate::poly::MultiPoly;
use crate::surface::Ellipsoid;
use crate::vector_field::VectorField;

/// Textual description of a system, as read from a file or the catalog.
#[derive(Debug, Clone, Default)]
pub struct SystemSpec {
    pub name: String,
    pub title: String,
    pub coordinates: Vec<String>,
    pub parameters: Vec<String>,
    /// Semi-axis expressions; empty means no surface (ambient system).
    pub semi_axes: Vec<String>,
    pub components: Vec<String>,
    pub expect: Expectations,
}

/// Expected artifacts for regression checks.
#[derive(Debug, Clone, Default)]
pub struct Expectations {
    /// Multiplier K with X(M) = K·M.
    pub surface_multiplier: Option<String>,
    /// Parameter substitutions under which the expected extactic holds.
    pub settings: Vec<(String, String)>,
    /// Expected extactic for the basis {x, y}, up to a nonzero constant.
    pub extactic: Option<String>,
    /// Expected extactic for the basis {1, x_{n+1}}, up to a nonzero
    /// constant.
    pub parallel_extactic: Option<String>,
    /// Expected invariant meridian planes.
    pub planes: Vec<String>,
    /// Expected invariant parallel heights (constant expressions).
    pub parallels: Vec<String>,
    /// Pairs (hypersurface, cofactor).
    pub cofactors: Vec<(String, String)>,
    pub flags: Vec<String>,
    pub notes: Vec<String>,
}

impl SystemSpec {
    pub fn parse(text: &str) -> Result<SystemSpec> {
        let mut spec = SystemSpec::default();
        let mut section = String::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = strip_comment(raw).trim().to_string();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| Error::FileFormat {
                line: lineno + 1,
                msg: msg.to_string(),
            };
            if let Some(rest) = line.strip_prefix('[') {
                let Some(end) = rest.find(']') else {
                    return Err(err("unterminated section header"));
                };
                let head = &rest[..end];
                let tail = rest[end + 1..].trim();
                match head {
                    "name" => spec.name = tail.to_string(),
                    "title" => spec.title = tail.to_string(),
                    "coordinates" => {
                        spec.coordinates = tail.split_whitespace().map(String::from).collect();
                        section = "coordinates".into();
                    }
                    "parameters" => {
                        spec.parameters = tail.split_whitespace().map(String::from).collect();
                        section = "parameters".into();
                    }
                    "ellipsoid" => {
                        spec.semi_axes = tail.split_whitespace().map(String::from).collect();
                        section = "ellipsoid".into();
                    }
                    "field" => section = "field".into(),
                    "expect" => section = "expect".into(),
                    other => return Err(err(&format!("unknown section `{other}`"))),
                }
                continue;
            }
            match section.as_str() {
                "field" => spec.components.push(line),
                "expect" => parse_expect_line(&line, &mut spec.expect, lineno + 1)?,
                "coordinates" => {
                    spec.coordinates
                        .extend(line.split_whitespace().map(String::from));
                }
                "parameters" => {
                    spec.parameters
                        .extend(line.split_whitespace().map(String::from));
                }
                "ellipsoid" => {
                    spec.semi_axes
                        .extend(line.split_whitespace().map(String::from));
                }
                _ => return Err(err("content outside any section")),
            }
        }
        if spec.coordinates.is_empty() {
            return Err(Error::FileFormat {
                line: 0,
                msg: "missing [coordinates]".into(),
            });
        }
        if spec.components.len() != spec.coordinates.len() {
            return Err(Error::FileFormat {
                line: 0,
                msg: format!(
                    "expected {} field components, found {}",
                    spec.coordinates.len(),
                    spec.components.len()
                ),
            });
        }
        Ok(spec)
    }

    /// Canonical text form; `parse` of the output reproduces the spec.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("[name] {}\n", self.name));
        if !self.title.is_empty() {
            out.push_str(&format!("[title] {}\n", self.title));
        }
        out.push_str(&format!("[coordinates] {}\n", self.coordinates.join(" ")));
        out.push_str(&format!("[parameters] {}\n", self.parameters.join(" ")));
        if !self.semi_axes.is_empty() {
            out.push_str(&format!("[ellipsoid] {}\n", self.semi_axes.join(" ")));
        }
        out.push_str("[field]\n");
        for c in &self.components {
            out.push_str(c);
            out.push('\n');
        }
        let e = &self.expect;
        if e.surface_multiplier.is_some()
            || !e.settings.is_empty()
            || e.extactic.is_some()
            || e.parallel_extactic.is_some()
            || !e.planes.is_empty()
            || !e.parallels.is_empty()
            || !e.cofactors.is_empty()
            || !e.flags.is_empty()
            || !e.notes.is_empty()
        {
            out.push_str("[expect]\n");
            if let Some(m) = &e.surface_multiplier {
                out.push_str(&format!("surface_multiplier: {m}\n"));
            }
            if !e.settings.is_empty() {
                let s: Vec<String> = e
                    .settings
                    .iter()
                    .map(|(k, v)| format!("{k}={v}"))
                    .collect();
                out.push_str(&format!("settings: {}\n", s.join(" ")));
            }
            if let Some(x) = &e.extactic {
                out.push_str(&format!("extactic: {x}\n"));
            }
            if let Some(x) = &e.parallel_extactic {
                out.push_str(&format!("parallel_extactic: {x}\n"));
            }
            for p in &e.planes {
                out.push_str(&format!("plane: {p}\n"));
            }
            for p in &e.parallels {
                out.push_str(&format!("parallel: {p}\n"));
            }
            for (f, k) in &e.cofactors {
                out.push_str(&format!("cofactor: {f} => {k}\n"));
            }
            for f in &e.flags {
                out.push_str(&format!("flag: {f}\n"));
            }
            for n in &e.notes {
                out.push_str(&format!("note: {n}\n"));
            }
        }
        out
    }

    /// Builds the exact objects and validates the surface tangency when an
    /// ellipsoid is declared.
    pub fn build(&self) -> Result<LoadedSystem> {
        let ctx = Context::new(
            self.coordinates.iter().map(String::as_str),
            self.parameters.iter().map(String::as_str),
        )?;
        let components = self
            .components
            .iter()
            .map(|s| parse_expression(s, &ctx))
            .collect::<Result<Vec<_>>>()?;
        let field = VectorField::new(&ctx, components)?;
        let mut ellipsoid = None;
        let mut multiplier = None;
        if !self.semi_axes.is_empty() {
            let axes = self
                .semi_axes
                .iter()
                .map(|s| {
                    let p = parse_expression(s, &ctx)?;
                    p.constant_value().ok_or_else(|| {
                        Error::InvalidInput("semi-axes must be coordinate-free".into())
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let e = Ellipsoid::new(&ctx, axes)?;
            match field.on_surface_check(&e)? {
                crate::vector_field::OnSurfaceCertificate::OnSurface { multiplier: k } => {
                    multiplier = Some(k)
                }
                crate::vector_field::OnSurfaceCertificate::NotOnSurface { residual } => {
                    return Err(Error::NotOnSurface(residual.render()))
                }
            }
            ellipsoid = Some(e);
        }
        Ok(LoadedSystem {
            spec: self.clone(),
            ctx,
            field,
            ellipsoid,
            multiplier,
        })
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(p) => &line[..p],
        None => line,
    }
}

fn parse_expect_line(line: &str, e: &mut Expectations, lineno: usize) -> Result<()> {
    let err = |msg: &str| Error::FileFormat {
        line: lineno,
        msg: msg.to_string(),
    };
    let Some((key, value)) = line.split_once(':') else {
        return Err(err("expected `key: value`"));
    };
    let value = value.trim().to_string();
    match key.trim() {
        "surface_multiplier" => e.surface_multiplier = Some(value),
        "settings" => {
            for part in value.split_whitespace() {
                let Some((k, v)) = part.split_once('=') else {
                    return Err(err("settings entries are `param=expr`"));
                };
                e.settings.push((k.to_string(), v.to_string()));
            }
        }
        "extactic" => e.extactic = Some(value),
        "parallel_extactic" => e.parallel_extactic = Some(value),
        "plane" => e.planes.push(value),
        "parallel" => e.parallels.push(value),
        "cofactor" => {
            let Some((f, k)) = value.split_once("=>") else {
                return Err(err("cofactor entries are `f => k`"));
            };
            e.cofactors.push((f.trim().to_string(), k.trim().to_string()));
        }
        "flag" => e.flags.push(value),
        "note" => e.notes.push(value),
        other => return Err(err(&format!("unknown expect key `{other}`"))),
    }
    Ok(())
}

/// A fully validated system: context, field, optional surface, and the
/// tangency multiplier when a surface is present.
#[derive(Debug, Clone)]
pub struct LoadedSystem {
    pub spec: SystemSpec,
    pub ctx: Arc<Context>,
    pub field: VectorField,
    pub ellipsoid: Option<Ellipsoid>,
    pub multiplier: Option<MultiPoly>,
}

impl LoadedSystem {
    /// Applies the spec's `settings` substitutions to the field.
    pub fn with_settings(&self) -> Result<LoadedSystem> {
        self.substituted(&self.spec.expect.settings)
    }

    /// Applies `param=expr` substitutions to the field, the semi-axes and
    /// the tangency multiplier.
    pub fn substituted(&self, bindings: &[(String, String)]) -> Result<LoadedSystem> {
        let mut map: BTreeMap<usize, Coeff> = BTreeMap::new();
        for (name, expr) in bindings {
            let idx = self
                .ctx
                .param_index(name)
                .ok_or_else(|| Error::InvalidInput(format!("unknown parameter `{name}`")))?;
            let value = parse_expression(expr, &self.ctx)?
                .constant_value()
                .ok_or_else(|| {
                    Error::InvalidInput("substitution values must be coordinate-free".into())
                })?;
            map.insert(idx, value);
        }
        let field = self.field.subst_params(&map)?;
        let mut out = self.clone();
        out.field = field;
        if let Some(e) = &self.ellipsoid {
            let axes = e
                .semi_axes()
                .iter()
                .map(|a| a.subst_params(&map))
                .collect::<Result<Vec<_>>>()?;
            out.ellipsoid = Some(Ellipsoid::new(&self.ctx, axes)?);
        }
        // the multiplier transforms covariantly under substitution
        out.multiplier = match &self.multiplier {
            Some(k) => Some(k.subst_params(&map)?),
            None => None,
        };
        Ok(out)
    }

    /// Parses an expression in this system's context.
    pub fn parse(&self, src: &str) -> Result<MultiPoly> {
        parse_expression(src, &self.ctx)
    }
}
