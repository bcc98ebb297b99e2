//! Implementations of the CLI subcommands.

use serde_json::{json, Value};

use darboux_core::catalog;
use darboux_core::coeff::Coeff;
use darboux_core::darboux::{
    bound_hyperplanes_rn, bound_meridians, bound_parallels, build_darboux_function,
    check_threshold, integrability_thresholds, solve_relation, FactorBase, RealForm,
    ThresholdVerdict,
};
use darboux_core::error::{Error, Result};
use darboux_core::invariant::{
    cofactor_solve, exp_factor_check, extactic, find_meridians, find_parallels,
    invariance_check, multiplicity, ExtacticReport, InvarianceOutcome,
};
use darboux_core::poly::MultiPoly;
use darboux_core::sysfile::LoadedSystem;
use darboux_core::vector_field::DegreeVector;

use crate::output::{strings, Report};
use crate::Command;

pub fn run(cmd: &Command, as_json: bool) -> Result<()> {
    let report = match cmd {
        Command::CheckSurface {
            system,
            instantiate,
        } => check_surface(system, instantiate.as_deref())?,
        Command::Cofactor {
            system,
            f,
            ambient,
            degree_bound,
            instantiate,
        } => cofactor(system, f, *ambient, *degree_bound, instantiate.as_deref())?,
        Command::Extactic {
            system,
            basis,
            settings,
            instantiate,
        } => extactic_cmd(system, basis, *settings, instantiate.as_deref())?,
        Command::Meridians {
            system,
            instantiate,
            candidates,
            real,
            settings,
        } => meridians(
            system,
            instantiate.as_deref(),
            candidates.as_deref(),
            *real,
            *settings,
        )?,
        Command::Parallels {
            system,
            instantiate,
            candidates,
            settings,
        } => parallels(
            system,
            instantiate.as_deref(),
            candidates.as_deref(),
            *settings,
        )?,
        Command::Multiplicity {
            system,
            f,
            basis,
            settings,
            instantiate,
        } => multiplicity_cmd(system, f, basis, *settings, instantiate.as_deref())?,
        Command::Darboux {
            system,
            planes,
            exp,
            allow_sigma,
            ambient,
            instantiate,
        } => darboux_cmd(
            system,
            planes,
            exp.as_deref(),
            *allow_sigma,
            *ambient,
            instantiate.as_deref(),
        )?,
        Command::Bounds {
            n,
            m,
            hyperplanes,
            through_point,
            meridians,
            parallels,
        } => bounds_cmd(*n, m, *hyperplanes, *through_point, *meridians, *parallels)?,
        Command::Thresholds { n, m1, context, p, q } => {
            thresholds_cmd(*n, *m1, context, *p, *q)?
        }
        Command::Catalog { name } => catalog_cmd(name.as_deref())?,
        Command::VerifyCatalog => return verify_catalog(as_json),
    };
    report.print(as_json);
    Ok(())
}

fn load(system: &str, instantiate: Option<&str>, settings: bool) -> Result<LoadedSystem> {
    let mut sys = catalog::load(system)?;
    if settings {
        sys = sys.with_settings()?;
    }
    if let Some(spec) = instantiate {
        let bindings = parse_bindings(spec)?;
        sys = sys.substituted(&bindings)?;
    }
    Ok(sys)
}

fn parse_bindings(spec: &str) -> Result<Vec<(String, String)>> {
    spec.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|part| {
            part.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| {
                    Error::InvalidInput(format!("instantiation entries are `param=value`: `{part}`"))
                })
        })
        .collect()
}

fn check_surface(system: &str, instantiate: Option<&str>) -> Result<Report> {
    let sys = load(system, instantiate, false)?;
    let mut r = Report::new("check-surface");
    r.set("system", Value::String(sys.spec.name.clone()));
    match (&sys.ellipsoid, &sys.multiplier) {
        (Some(e), Some(k)) => {
            let axes: Vec<String> = e
                .semi_axes()
                .iter()
                .map(|a| a.render(sys.ctx.params()))
                .collect();
            r.line(format!("system {} is tangent to its ellipsoid", sys.spec.name));
            r.line(format!("semi-axes: {}", axes.join(", ")));
            r.line(format!("multiplier: X(M) = ({}) * M", k.render()));
            r.line("assumption: symbolic semi-axes and parameters are nonzero".to_string());
            r.set("on_surface", Value::Bool(true));
            r.set("multiplier", Value::String(k.render()));
            r.set("semi_axes", strings(axes));
        }
        _ => {
            return Err(Error::InvalidInput(format!(
                "system {} declares no ellipsoid",
                sys.spec.name
            )))
        }
    }
    Ok(r)
}

fn cofactor(
    system: &str,
    f_src: &str,
    ambient: bool,
    degree_bound: Option<u32>,
    instantiate: Option<&str>,
) -> Result<Report> {
    let sys = load(system, instantiate, false)?;
    let f = sys.parse(f_src)?;
    let surface = if ambient { None } else { sys.ellipsoid.as_ref() };
    let mut r = Report::new("cofactor");
    r.set("system", Value::String(sys.spec.name.clone()));
    r.set("f", Value::String(f.render()));
    r.set("context", Value::String(if surface.is_some() {
        "on-surface".into()
    } else {
        "ambient".into()
    }));
    match cofactor_solve(&sys.field, &f, surface, degree_bound)? {
        Some(k) => {
            r.line(format!("cofactor of {}: {}", f.render(), k.poly.render()));
            r.line(format!("degree bound: {}", k.degree_bound));
            r.set("cofactor", Value::String(k.poly.render()));
            r.set("degree_bound", json!(k.degree_bound));
            r.set("found", Value::Bool(true));
        }
        None => {
            r.line(format!("no cofactor for {} at the degree bound", f.render()));
            r.set("found", Value::Bool(false));
        }
    }
    Ok(r)
}

fn parse_basis(sys: &LoadedSystem, basis: &str) -> Result<Vec<MultiPoly>> {
    basis
        .split(',')
        .map(|s| sys.parse(s.trim()))
        .collect::<Result<Vec<_>>>()
}

fn extactic_cmd(
    system: &str,
    basis: &str,
    settings: bool,
    instantiate: Option<&str>,
) -> Result<Report> {
    let sys = load(system, instantiate, settings)?;
    let w = parse_basis(&sys, basis)?;
    let rep = extactic(&sys.field, &w)?;
    let mut r = Report::new("extactic");
    r.set("system", Value::String(sys.spec.name.clone()));
    r.set(
        "basis",
        strings(w.iter().map(MultiPoly::render)),
    );
    r.line(format!("extactic for basis {{{}}}:", basis));
    r.line(format!("  {}", rep.extactic.render()));
    r.set("extactic", Value::String(rep.extactic.render()));
    r.set("degenerate", Value::Bool(rep.degenerate));
    if rep.degenerate {
        r.line("degenerate: identically zero (not finitely many invariants in this family)");
    }
    if let Some(e) = &sys.ellipsoid {
        let reduced = e.normal_form(&rep.extactic)?.into_poly();
        r.line(format!("reduced modulo the ellipsoid: {}", reduced.render()));
        r.set("reduced", Value::String(reduced.render()));
    }
    Ok(r)
}

fn factor_json(rep: &ExtacticReport) -> Value {
    let items: Vec<Value> = rep
        .all_factors()
        .map(|f| {
            json!({
                "form": f.form.render(),
                "multiplicity": f.multiplicity,
                "cofactor": f.certificate.cofactor.poly.render(),
                "divides_ambient_extactic": rep.factors.iter().any(|g| g.form == f.form),
            })
        })
        .collect();
    Value::Array(items)
}

fn meridians(
    system: &str,
    instantiate: Option<&str>,
    candidates: Option<&str>,
    real_only: bool,
    settings: bool,
) -> Result<Report> {
    let sys = load(system, instantiate, settings)?;
    let e = sys
        .ellipsoid
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("meridians need an ellipsoid".into()))?;
    let cands: Vec<MultiPoly> = match candidates {
        Some(spec) => spec
            .split(';')
            .filter(|s| !s.trim().is_empty())
            .map(|s| sys.parse(s.trim()))
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    let rep = find_meridians(&sys.field, e, &cands)?;
    let mut r = Report::new("meridians");
    r.set("system", Value::String(sys.spec.name.clone()));
    if rep.degenerate {
        r.line("degenerate extactic: not finitely many invariant meridians");
        r.set("degenerate", Value::Bool(true));
        return Ok(r);
    }
    let bound = bound_meridians(e.dim() as u32, &sys.field.degree_vector())?;
    let shown: Vec<_> = if real_only {
        rep.real_factors().into_iter().cloned().collect()
    } else {
        rep.all_factors().cloned().collect()
    };
    r.line(format!(
        "{} invariant meridian(s){} (bound {}):",
        shown.len(),
        if real_only { " with real forms" } else { "" },
        bound.value
    ));
    for f in &shown {
        r.line(format!(
            "  {} = 0   multiplicity {}   cofactor {}",
            f.form.render(),
            f.multiplicity,
            f.certificate.cofactor.poly.render()
        ));
    }
    r.line(format!("extactic: {}", rep.extactic.render()));
    r.line(format!("residual: {}", rep.residual.render()));
    r.set("count", json!(shown.len()));
    r.set(
        "count_with_multiplicity",
        json!(shown.iter().map(|f| f.multiplicity).sum::<u32>()),
    );
    r.set("bound", json!(bound.value as u64));
    r.set("factors", factor_json(&rep));
    r.set("extactic", Value::String(rep.extactic.render()));
    r.set("residual", Value::String(rep.residual.render()));
    r.set("degenerate", Value::Bool(false));
    if !sys.field.is_parameter_free() {
        r.line(
            "parametric system: only supplied candidates were verified; \
             use --instantiate for exhaustive pencil search",
        );
    }
    Ok(r)
}

fn parallels(
    system: &str,
    instantiate: Option<&str>,
    candidates: Option<&str>,
    settings: bool,
) -> Result<Report> {
    let sys = load(system, instantiate, settings)?;
    let e = sys
        .ellipsoid
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("parallels need an ellipsoid".into()))?;
    let cands: Vec<Coeff> = match candidates {
        Some(spec) => spec
            .split(';')
            .filter(|s| !s.trim().is_empty())
            .map(|s| {
                sys.parse(s.trim())?.constant_value().ok_or_else(|| {
                    Error::InvalidInput("parallel candidates are constant heights".into())
                })
            })
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    let rep = find_parallels(&sys.field, e, &cands)?;
    let mut r = Report::new("parallels");
    r.set("system", Value::String(sys.spec.name.clone()));
    if rep.degenerate {
        r.line("degenerate: the polar component vanishes on the surface; every parallel is invariant");
        r.set("degenerate", Value::Bool(true));
        return Ok(r);
    }
    let bound = bound_parallels(&sys.field.degree_vector());
    r.line(format!(
        "{} invariant parallel(s) (bound {}):",
        rep.distinct_count(),
        bound
            .finite_value()
            .map_or("degenerate".to_string(), |v| v.to_string())
    ));
    for f in rep.all_factors() {
        r.line(format!(
            "  {} = 0   multiplicity {}   cofactor {}",
            f.form.render(),
            f.multiplicity,
            f.certificate.cofactor.poly.render()
        ));
    }
    r.line(format!("extactic: {}", rep.extactic.render()));
    r.set("count", json!(rep.distinct_count()));
    r.set(
        "bound",
        bound
            .finite_value()
            .map_or(Value::Null, |v| json!(v as u64)),
    );
    r.set("factors", factor_json(&rep));
    r.set("extactic", Value::String(rep.extactic.render()));
    r.set("degenerate", Value::Bool(false));
    Ok(r)
}

fn multiplicity_cmd(
    system: &str,
    f_src: &str,
    basis: &str,
    settings: bool,
    instantiate: Option<&str>,
) -> Result<Report> {
    let sys = load(system, instantiate, settings)?;
    let f = sys.parse(f_src)?;
    let w = parse_basis(&sys, basis)?;
    let rep = extactic(&sys.field, &w)?;
    let m = multiplicity(&f, &rep)?;
    let mut r = Report::new("multiplicity");
    r.set("system", Value::String(sys.spec.name.clone()));
    r.line(format!(
        "multiplicity of {} in the extactic: {}",
        f.render(),
        m
    ));
    r.set("f", Value::String(f.render()));
    r.set("multiplicity", json!(m));
    r.set("extactic", Value::String(rep.extactic.render()));
    Ok(r)
}

fn darboux_cmd(
    system: &str,
    planes: &str,
    exp: Option<&str>,
    allow_sigma: bool,
    ambient: bool,
    instantiate: Option<&str>,
) -> Result<Report> {
    let sys = load(system, instantiate, false)?;
    let surface = if ambient { None } else { sys.ellipsoid.as_ref() };
    let mut hypersurfaces = Vec::new();
    for src in planes.split(',').filter(|s| !s.trim().is_empty()) {
        let f = sys.parse(src.trim())?;
        match invariance_check(&sys.field, &f, surface, None)? {
            InvarianceOutcome::Invariant(h) => hypersurfaces.push(h),
            InvarianceOutcome::Rejected(rej) => {
                return Err(Error::Verification(format!(
                    "{} is not certified invariant: {rej:?}",
                    f.render()
                )))
            }
        }
    }
    let mut exp_factors = Vec::new();
    if let Some(spec) = exp {
        for pair in spec.split(',').filter(|s| !s.trim().is_empty()) {
            let (g_src, h_src) = pair.split_once('/').ok_or_else(|| {
                Error::InvalidInput("exponential factors are written g/h".into())
            })?;
            let g = sys.parse(g_src.trim())?;
            let h = sys.parse(h_src.trim())?;
            match exp_factor_check(&sys.field, &g, &h, surface, None)? {
                darboux_core::invariant::ExpFactorOutcome::Factor(f) => exp_factors.push(f),
                darboux_core::invariant::ExpFactorOutcome::Rejected(rej) => {
                    return Err(Error::Verification(format!(
                        "exp({pair}) is not certified: {rej:?}"
                    )))
                }
            }
        }
    }
    let ks: Vec<MultiPoly> = hypersurfaces.iter().map(|h| h.cofactor.poly.clone()).collect();
    let ls: Vec<MultiPoly> = exp_factors.iter().map(|f| f.cofactor.clone()).collect();
    let relations = solve_relation(&ks, &ls, surface, allow_sigma)?;

    let mut r = Report::new("darboux");
    r.set("system", Value::String(sys.spec.name.clone()));
    r.set(
        "cofactors",
        strings(ks.iter().chain(&ls).map(MultiPoly::render)),
    );
    if relations.is_empty() {
        r.line("no nontrivial cofactor relation exists for these objects");
        r.set("relations", Value::Array(vec![]));
        return Ok(r);
    }
    let mut rel_json = Vec::new();
    for (idx, rel) in relations.iter().enumerate() {
        let lambdas: Vec<String> = rel
            .lambdas
            .iter()
            .map(|c| c.render(sys.ctx.params()))
            .collect();
        let mus: Vec<String> = rel.mus.iter().map(|c| c.render(sys.ctx.params())).collect();
        let sigma = rel.sigma.render(sys.ctx.params());
        r.line(format!(
            "relation {}: lambda = ({}), mu = ({}), sigma = {}",
            idx + 1,
            lambdas.join(", "),
            mus.join(", "),
            sigma
        ));
        let func = build_darboux_function(&hypersurfaces, &exp_factors, rel, &sys.field, surface)?;
        let kind = if rel.is_first_integral() {
            "first integral"
        } else {
            "time-dependent invariant"
        };
        let rendered = render_function(&func, sys.ctx.params());
        r.line(format!("  {kind}: {rendered}"));
        let sigma_complex = !rel.sigma.is_zero() && !rel.sigma.is_real();
        if sigma_complex {
            r.line("  note: sigma is not real; the time factor exp(sigma*t) is complex");
        }
        let mut obj = serde_json::Map::new();
        obj.insert("lambdas".into(), strings(lambdas));
        obj.insert("mus".into(), strings(mus));
        obj.insert("sigma".into(), Value::String(sigma));
        obj.insert("sigma_complex".into(), Value::Bool(sigma_complex));
        obj.insert("kind".into(), Value::String(kind.into()));
        obj.insert("function".into(), Value::String(rendered));
        if let Some(expanded) = &func.expanded {
            r.line(format!("  expanded product: {}", expanded.render()));
            obj.insert("expanded".into(), Value::String(expanded.render()));
        }
        if let Some(real) = &func.realified {
            for form in real {
                r.line(format!("  real form: {}", render_real_form(form, &sys)));
            }
            obj.insert(
                "real_forms".into(),
                strings(real.iter().map(|f| render_real_form(f, &sys))),
            );
        }
        rel_json.push(Value::Object(obj));
    }
    r.set("relations", Value::Array(rel_json));
    Ok(r)
}

fn render_function(func: &darboux_core::darboux::DarbouxFunction, params: &[String]) -> String {
    let mut parts: Vec<String> = Vec::new();
    for f in &func.factors {
        let expo = f.exponent.render(params);
        match &f.base {
            FactorBase::Hypersurface(p) => parts.push(format!("({})^({})", p.render(), expo)),
            FactorBase::Exponential { g, h } => {
                parts.push(format!("exp(({})/({}))^({})", g.render(), h.render(), expo))
            }
        }
    }
    let mut s = parts.join(" * ");
    if !func.sigma.is_zero() {
        s.push_str(&format!(" * exp(({})*t)", func.sigma.render(params)));
    }
    s
}

fn render_real_form(form: &RealForm, sys: &LoadedSystem) -> String {
    let params = sys.ctx.params();
    match form {
        RealForm::Identity { f, lambda } => {
            format!("|{}|^({})", f.render(), lambda.render(params))
        }
        RealForm::Pair {
            modulus_base,
            re_lambda,
            im_lambda,
            re_f,
            im_f,
        } => {
            let mut s = format!("({})^({})", modulus_base.render(), re_lambda.render(params));
            if !im_lambda.is_zero() {
                s.push_str(&format!(
                    " * exp(-2*({})*arctan(({})/({})))",
                    im_lambda.render(params),
                    im_f.render(),
                    re_f.render()
                ));
            }
            s
        }
        RealForm::ExpPair { numer, denom } => {
            format!("exp(({})/({}))", numer.render(), denom.render())
        }
    }
}

fn parse_degrees(m: &str) -> Result<DegreeVector> {
    let degs: Vec<u32> = m
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<u32>()
                .map_err(|_| Error::InvalidInput(format!("bad degree `{s}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    if degs.is_empty() {
        return Err(Error::InvalidInput("empty degree vector".into()));
    }
    Ok(DegreeVector::from_degrees(&degs))
}

fn bounds_cmd(
    n: u32,
    m: &str,
    hyperplanes: bool,
    through_point: bool,
    meridians: bool,
    parallels: bool,
) -> Result<Report> {
    let dv = parse_degrees(m)?;
    let all = !(hyperplanes || meridians || parallels);
    let mut r = Report::new("bounds");
    r.set("n", json!(n));
    r.set("m", Value::String(m.to_string()));
    if hyperplanes || all {
        let b = bound_hyperplanes_rn(n, &dv, through_point)?;
        let label = if through_point {
            "invariant hyperplanes through a point"
        } else {
            "invariant hyperplanes"
        };
        r.line(format!("{label}: {}", b.value));
        r.set("hyperplanes", json!(b.value as u64));
    }
    if meridians || all {
        let b = bound_meridians(n, &dv)?;
        r.line(format!("invariant meridians: {}", b.value));
        r.set("meridians", json!(b.value as u64));
    }
    if parallels || all {
        let b = bound_parallels(&dv);
        match b.finite_value() {
            Some(v) => {
                r.line(format!("invariant parallels: {v}"));
                r.set("parallels", json!(v as u64));
            }
            None => {
                r.line("invariant parallels: degenerate (zero polar component)");
                r.set("parallels", Value::Null);
            }
        }
    }
    Ok(r)
}

fn thresholds_cmd(n: u32, m1: u32, context: &str, p: Option<u64>, q: Option<u64>) -> Result<Report> {
    let on_ellipsoid = match context {
        "ambient" => false,
        "ellipsoid" => true,
        other => {
            return Err(Error::InvalidInput(format!(
                "context is `ambient` or `ellipsoid`, got `{other}`"
            )))
        }
    };
    let t = integrability_thresholds(n, m1, on_ellipsoid)?;
    let mut r = Report::new("thresholds");
    r.set("n", json!(n));
    r.set("m1", json!(m1));
    r.set("context", Value::String(context.into()));
    r.line(format!(
        "relation guaranteed when p + q >= {} ({} context, n = {n}, m1 = {m1})",
        t.darboux, context
    ));
    r.line(format!(
        "rational first integral guaranteed when p + q >= {}",
        t.rational
    ));
    r.set("darboux_threshold", json!(t.darboux as u64));
    r.set("rational_threshold", json!(t.rational as u64));
    if let Some(d) = t.d_m_plus_one {
        r.line(format!(
            "on-surface dimension count d(m1) + 1 = {d} (reported for comparison)"
        ));
        r.set("d_m_plus_one", json!(d as u64));
    }
    if let Some(p) = p {
        let q = q.unwrap_or(0);
        let verdict = check_threshold(p, q, &t);
        let text = match verdict {
            ThresholdVerdict::RationalFirstIntegralGuaranteed => {
                "rational first integral guaranteed"
            }
            ThresholdVerdict::RelationGuaranteed => "relation guaranteed",
            ThresholdVerdict::NoGuarantee => "no guarantee",
        };
        r.line(format!("verdict for p = {p}, q = {q}: {text}"));
        r.set("verdict", Value::String(text.into()));
    }
    Ok(r)
}

fn catalog_cmd(name: Option<&str>) -> Result<Report> {
    let mut r = Report::new("catalog");
    match name {
        None => {
            r.line("built-in systems:");
            let mut entries = Vec::new();
            for n in catalog::names() {
                let sys = catalog::get(n)?;
                r.line(format!("  {:6} {}", n, sys.spec.title));
                entries.push(json!({"name": n, "title": sys.spec.title}));
            }
            r.set("entries", Value::Array(entries));
        }
        Some(n) => {
            let sys = catalog::get(n)?;
            let text = sys.spec.to_text();
            for l in text.lines() {
                r.line(l.to_string());
            }
            r.set("name", Value::String(n.into()));
            r.set("definition", Value::String(text));
        }
    }
    Ok(r)
}

fn verify_catalog(as_json: bool) -> Result<()> {
    let results = catalog::verify_all()?;
    let mut failed = 0;
    let mut entries = Vec::new();
    for v in &results {
        let status = if v.passed { "PASS" } else { "FAIL" };
        let flag = if v.flagged { " [flagged]" } else { "" };
        if !as_json {
            println!("{status} {}{flag}", v.name);
            for (label, ok) in &v.checks {
                if !ok {
                    println!("    failed: {label}");
                }
            }
            for note in &v.notes {
                println!("    note: {note}");
            }
        }
        if !v.passed {
            failed += 1;
        }
        entries.push(json!({
            "name": v.name,
            "passed": v.passed,
            "flagged": v.flagged,
            "checks": v.checks.iter().map(|(l, ok)| json!({"check": l, "ok": ok})).collect::<Vec<_>>(),
            "notes": v.notes,
        }));
    }
    if !as_json {
        println!(
            "{} of {} entries verified",
            results.len() - failed,
            results.len()
        );
    } else {
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "command": "verify-catalog",
                "entries": entries,
                "passed": failed == 0,
            }))
            .expect("serializable")
        );
    }
    if failed > 0 {
        return Err(Error::Verification(format!(
            "{failed} catalog entries failed verification"
        )));
    }
    Ok(())
}
