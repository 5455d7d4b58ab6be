//! One function per subcommand: typed parameters in, JSON results out.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use deloc_core::charclass::{lefschetz_terms, FixedComponent, IntersectionNumber, NormalSummand};
use deloc_core::cyclo::{
    euler_phi, q_gamma_field, recognize, vanishing_check, CycloField, ElementOrder, Recognition, RecognizeConfig,
    VanishingHypotheses,
};
use deloc_core::detmap::{boundary_path, rho_path, tau_h, winding_loop, Idempotent, InvertiblePath, RhoConfig, Tail};
use deloc_core::eta::{
    circle_deck_eta, delocalized_spectrum, eta_delocalized, rho_eta_check, DeckKernelModel, EtaMode, SpectrumEntry,
    SpectrumTable,
};
use deloc_core::group::GroupElement;
use deloc_core::growth::growth_fit;
use deloc_core::seminorm::{cm_seminorm, seminorm_trace_constant, SeminormContext, SeminormMode, TraceConstantConfig};
use deloc_core::suite::{run_criterion, CRITERIA};
use deloc_core::{AlgElem, GaussianRational, GroupSpec, C64};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::convert::{alg_elem, element, element_repr, scalar, ComplexRepr, ParseScalar};
use crate::job::{self, *};
use crate::report::Failure;

/// The open question on the value field, attached to every report that
/// produces eta values.
pub const VALUE_FIELD_ANNOTATION: &str =
    "whether delocalized eta invariants are always algebraic, and which values they can take, is open; \
     recognition below is evidence, not proof";

pub struct Ctx<'a> {
    pub backend: Backend,
    pub tol: &'a Tolerances,
}

pub struct Output {
    pub parameters: Value,
    pub results: Value,
    pub items: BTreeMap<String, f64>,
    /// Failures that leave the remaining results meaningful.
    pub soft_failures: Vec<Failure>,
}

impl Output {
    fn new(parameters: Value, results: Value) -> Self {
        Output { parameters, results, items: BTreeMap::new(), soft_failures: Vec::new() }
    }
}

fn echo<T: serde::Serialize>(p: &T) -> Value {
    serde_json::to_value(p).expect("parameter types serialize")
}

fn float_only(ctx: &Ctx, command: Command) -> Result<(), Failure> {
    if ctx.backend == Backend::Exact {
        return Err(Failure::at("backend", format!("the exact backend is not available for {}", command.name())));
    }
    Ok(())
}

pub fn run(command: Command, parameters: &Value, ctx: &Ctx) -> Result<Output, Failure> {
    match command {
        Command::GroupInfo => group_info(&job::parameters(parameters)?, ctx),
        Command::Trace => trace(&job::parameters(parameters)?, ctx),
        Command::Tau => tau(&job::parameters(parameters)?, ctx),
        Command::Eta => eta(&job::parameters(parameters)?, ctx),
        Command::Theorem43 => rho_eta(&job::parameters(parameters)?, ctx),
        Command::Lefschetz => lefschetz(&job::parameters(parameters)?, ctx),
        Command::Recognize => recognize_cmd(&job::parameters(parameters)?, ctx),
        Command::Suite => suite(&job::parameters(parameters)?, ctx),
    }
}


struct ResolvedClass {
    representative: GroupElement,
    members: Vec<GroupElement>,
    radius: Option<u32>,
}

impl ResolvedClass {
    fn describe(&self) -> Value {
        json!({
            "representative": element_repr(&self.representative),
            "radius": self.radius,
            "size": self.members.len(),
        })
    }
}

fn resolve_class(group: &GroupSpec, spec: &ClassSpec, pointer: &str) -> Result<ResolvedClass, Failure> {
    let h = element(group, &spec.representative, &format!("{pointer}.representative"))?;
    if h == group.identity() {
        return Err(Failure::at(&format!("{pointer}.representative"), "the class of the identity has no delocalized trace"));
    }
    let members = match (group.is_finite(), spec.radius) {
        (_, Some(r)) => group.conjugacy_class_ball(&h, r)?,
        (true, None) => group.conjugacy_class_ball(&h, u32::MAX - deloc_core::group::CLASS_EXPLORATION_SLACK)?,
        (false, None) => {
            return Err(Failure::at(&format!("{pointer}.radius"), "a class radius is required for infinite groups"))
        }
    };
    Ok(ResolvedClass { representative: h, members, radius: spec.radius })
}

fn default_classes(group: &GroupSpec) -> Result<Vec<GroupElement>, Failure> {
    if group.is_finite() {
        return Ok(group.nontrivial_class_representatives()?);
    }
    let mut out: Vec<GroupElement> = Vec::new();
    for g in group.generators() {
        if !out.contains(&group.inverse(g)) {
            out.push(g.clone());
        }
    }
    Ok(out)
}

fn group_info(p: &GroupInfoParams, ctx: &Ctx) -> Result<Output, Failure> {
    float_only(ctx, Command::GroupInfo)?;
    let group = p.group.build("parameters.group")?;
    let mut sizes = vec![0u64; p.radius as usize + 1];
    for g in group.ball(p.radius)? {
        sizes[group.word_length(&g)? as usize] += 1;
    }
    for r in 1..sizes.len() {
        sizes[r] += sizes[r - 1];
    }
    let reps = match &p.classes {
        Some(list) => list
            .iter()
            .enumerate()
            .map(|(i, e)| element(&group, e, &format!("parameters.classes[{i}]")))
            .collect::<Result<Vec<_>, _>>()?,
        None => default_classes(&group)?,
    };
    let mut classes = Vec::new();
    for h in &reps {
        let counts = group.class_growth_counts(h, p.radius)?;
        let growth = if counts.len() >= deloc_core::growth::MIN_WINDOW {
            match growth_fit(&counts) {
                Ok(r) => json!(r),
                Err(e) => json!({ "unavailable": e.to_string() }),
            }
        } else {
            json!({ "unavailable": format!("radius below the minimum fit window {}", deloc_core::growth::MIN_WINDOW) })
        };
        classes.push(json!({
            "representative": element_repr(h),
            "class_finite": group.class_is_finite(h),
            "min_length": group.min_class_length(h, p.radius)?,
            "counts": counts,
            "growth": growth,
        }));
    }
    let finite = group.is_finite();
    let results = json!({
        "module": "group-core",
        // Counts are exact integers; the growth fits are heuristics with residuals.
        "exact": true,
        "finite": finite,
        "order": group.order()?,
        "element_orders": if finite { Some(group.element_orders()?) } else { None },
        "generators": group.generators().iter().map(element_repr).collect::<Vec<_>>(),
        "radius": p.radius,
        "ball_sizes": sizes,
        "classes": classes,
    });
    Ok(Output::new(echo(p), results))
}

fn trace_value<S: ParseScalar>(a: &AlgElem<S>, class: &ResolvedClass) -> Result<(S, Option<f64>), Failure> {
    let value = a.tr_h(&class.members)?;
    if S::is_exact() {
        return Ok((value, None));
    }
    let mut terms = 0usize;
    let mut magnitude = 0.0;
    for g in &class.members {
        if let Some(m) = a.coefficient(g) {
            for i in 0..m.dim() {
                magnitude += m.get(i, i).modulus();
                terms += 1;
            }
        }
    }
    Ok((value, Some(f64::EPSILON * terms as f64 * magnitude)))
}

fn trace(p: &TraceParams, ctx: &Ctx) -> Result<Output, Failure> {
    let group = p.group.build("parameters.group")?;
    let class = resolve_class(&group, &p.class, "parameters.class")?;
    let (value, float_elem) = match ctx.backend {
        Backend::Exact => {
            let a: AlgElem<GaussianRational> = alg_elem(&group, &p.element, "parameters.element")?;
            let (v, _) = trace_value(&a, &class)?;
            let approx = deloc_core::Coeff::to_c64(&v);
            (
                json!({ "value": v.repr(), "exact": true, "approx": ComplexRepr::from_c64(approx) }),
                a.map_scalar(deloc_core::Coeff::to_c64),
            )
        }
        Backend::Float => {
            let a: AlgElem<C64> = alg_elem(&group, &p.element, "parameters.element")?;
            let (v, bound) = trace_value(&a, &class)?;
            (json!({ "value": v.repr(), "exact": false, "error_bound": bound }), a)
        }
    };
    let mut results = json!({
        "module": "group-algebra",
        "backend": ctx.backend,
        "class": class.describe(),
        "propagation": float_elem.propagation()?,
        "trace": value,
    });
    if let Some(s) = &p.seminorm {
        let k = float_elem.k();
        let seminorm = cm_seminorm(&float_elem, &SeminormContext::new(s.order, k), SeminormMode::UpperBound)?;
        let radius = s.radius.unwrap_or(float_elem.propagation()?.max(10));
        let constant =
            seminorm_trace_constant(&group, &class.representative, s.order, radius, TraceConstantConfig::default())?;
        let bound = constant.sqrt() * seminorm;
        let modulus = float_elem.tr_h(&class.members)?.norm();
        results["seminorm"] = json!({
            "order": s.order,
            "mode": "upper-bound",
            "seminorm": seminorm,
            "constant_radius": radius,
            "trace_constant": constant,
            "bound": bound,
            "trace_modulus": modulus,
            "bound_holds": modulus <= bound,
        });
    }
    Ok(Output::new(echo(p), results))
}

fn idempotent(group: &GroupSpec, repr: &crate::convert::AlgElemRepr, ctx: &Ctx) -> Result<Idempotent, Failure> {
    let pointer = "parameters.path.idempotent";
    let p = match ctx.backend {
        Backend::Exact => Idempotent::from_exact(&alg_elem::<GaussianRational>(group, repr, pointer)?),
        Backend::Float => Idempotent::new(alg_elem::<C64>(group, repr, pointer)?),
    };
    p.map_err(|e| Failure::at(pointer, e.to_string()))
}

fn tau(p: &TauParams, ctx: &Ctx) -> Result<Output, Failure> {
    let group = p.group.build("parameters.group")?;
    let class = resolve_class(&group, &p.class, "parameters.class")?;
    let (kind, path): (&str, InvertiblePath) = match &p.path {
        PathDesc::Boundary { idempotent: e } => ("boundary", boundary_path(&idempotent(&group, e, ctx)?)?),
        PathDesc::Winding { idempotent: e } => ("winding", winding_loop(&idempotent(&group, e, ctx)?)?),
        PathDesc::Rho { operator, horizon } => {
            float_only(ctx, Command::Tau)?;
            let d: AlgElem<C64> = alg_elem(&group, operator, "parameters.path.operator")?;
            let cfg = RhoConfig { spectral_gap: ctx.tol.spectral_gap, horizon: *horizon, grid: None };
            ("rho", rho_path(&d, &cfg)?)
        }
        PathDesc::Samples { samples, tail } => {
            float_only(ctx, Command::Tau)?;
            let samples = samples
                .iter()
                .enumerate()
                .map(|(i, s)| Ok((s.t, alg_elem::<C64>(&group, &s.value, &format!("parameters.path.samples[{i}].value"))?)))
                .collect::<Result<Vec<_>, Failure>>()?;
            let tail = match tail {
                Some(f) => Tail::CommutingFamily { f_at_horizon: alg_elem(&group, f, "parameters.path.tail")? },
                None => Tail::None,
            };
            ("samples", InvertiblePath::from_samples(samples, tail)?)
        }
    };
    let r = tau_h(&path, &class.members, &ctx.tol.quad)?;
    let mut out = Output::new(
        echo(p),
        json!({
            "module": "det-map",
            "path": kind,
            "horizon": path.horizon(),
            "class": class.describe(),
            "tau": r,
        }),
    );
    if !r.converged {
        out.soft_failures.push(Failure::Computation("quadrature did not reach the tolerance within the panel cap".into()));
    }
    Ok(out)
}

fn eta_modes(table: &SpectrumTable, mode: EtaModeName, ctx: &Ctx) -> Result<Value, Failure> {
    let sign = match mode {
        EtaModeName::SignSum | EtaModeName::Both => Some(eta_delocalized(table, EtaMode::SignSum)?),
        EtaModeName::HeatIntegral => None,
    };
    let heat = match mode {
        EtaModeName::HeatIntegral | EtaModeName::Both => {
            Some(eta_delocalized(table, EtaMode::HeatIntegral { quad: ctx.tol.quad })?)
        }
        EtaModeName::SignSum => None,
    };
    let agreement = match (&sign, &heat) {
        (Some(s), Some(h)) => {
            let d = (s.value - h.value).norm();
            json!({ "difference": d, "within_certified_error": d <= h.error })
        }
        _ => Value::Null,
    };
    Ok(json!({ "spectrum": table, "sign_sum": sign, "heat_integral": heat, "agreement": agreement }))
}

fn eta(p: &EtaParams, ctx: &Ctx) -> Result<Output, Failure> {
    float_only(ctx, Command::Eta)?;
    let mut results = match &p.source {
        EtaSource::Operator { group, operator, class } => {
            let group = group.build("parameters.source.group")?;
            let class = resolve_class(&group, class, "parameters.source.class")?;
            let d: AlgElem<C64> = alg_elem(&group, operator, "parameters.source.operator")?;
            let mut r = eta_modes(&delocalized_spectrum(&d, &class.members)?, p.mode, ctx)?;
            r["class"] = class.describe();
            r
        }
        EtaSource::Spectrum { class_label, entries } => {
            let entries = entries
                .iter()
                .enumerate()
                .map(|(i, e)| {
                    Ok(SpectrumEntry {
                        eigenvalue: e.eigenvalue,
                        multiplicity: scalar(&e.multiplicity, &format!("parameters.source.entries[{i}].multiplicity"))?,
                    })
                })
                .collect::<Result<Vec<_>, Failure>>()?;
            let table = SpectrumTable::user_supplied(entries, class_label.clone())
                .map_err(|e| Failure::at("parameters.source.entries", e.to_string()))?;
            eta_modes(&table, p.mode, ctx)?
        }
        EtaSource::CircleDeck { n } => {
            if p.mode == EtaModeName::SignSum {
                return Err(Failure::at("parameters.mode", "the circle deck model has no discrete spectrum; use heat-integral"));
            }
            let model = DeckKernelModel::new(*n).map_err(|e| Failure::at("parameters.source.n", e.to_string()))?;
            let r = circle_deck_eta(&model, &ctx.tol.quad)?;
            // The model operator is not invertible, so vanishing is not
            // predicted for this infinite-order class.
            let hypotheses = VanishingHypotheses { invertible: false, polynomial_growth: true };
            let verdict = vanishing_check(ElementOrder::Infinite, r.value, ctx.tol.vanishing, hypotheses)?;
            json!({ "deck_element": n, "heat_integral": r, "vanishing": verdict })
        }
    };
    results["module"] = json!("spectral-eta");
    results["annotation"] = json!(VALUE_FIELD_ANNOTATION);
    Ok(Output::new(echo(p), results))
}

fn recognition_config(ctx: &Ctx) -> RecognizeConfig {
    RecognizeConfig::new(ctx.tol.recognition_height, ctx.tol.recognition_residual)
}

fn recognition_json(field: &CycloField, cfg: &RecognizeConfig, r: &Recognition) -> Value {
    let label = match r {
        Recognition::Recognized { .. } => format!(
            "consistent with Q_Gamma = Q(zeta_{}) (height <= {}, residual <= {:e})",
            field.conductor, cfg.height, cfg.tol
        ),
        Recognition::NotRecognized { .. } => format!(
            "no relation in Q(zeta_{}) with height <= {} and residual <= {:e}",
            field.conductor, cfg.height, cfg.tol
        ),
    };
    let phi = euler_phi(field.conductor) as usize;
    json!({
        "field": field,
        "lattice": { "rows": phi + 1, "columns": phi + 3, "scale": cfg.scale },
        "height": cfg.height,
        "tolerance": cfg.tol,
        "result": r,
        "label": label,
    })
}

fn rho_eta(p: &RhoEtaParams, ctx: &Ctx) -> Result<Output, Failure> {
    float_only(ctx, Command::Theorem43)?;
    let group = p.group.build("parameters.group")?;
    let d: AlgElem<C64> = alg_elem(&group, &p.operator, "parameters.operator")?;
    let reps = match &p.classes {
        Some(list) => list
            .iter()
            .enumerate()
            .map(|(i, e)| element(&group, e, &format!("parameters.classes[{i}]")))
            .collect::<Result<Vec<_>, _>>()?,
        None => default_classes(&group)?,
    };
    let rho = RhoConfig { spectral_gap: ctx.tol.spectral_gap, horizon: p.horizon, grid: None };
    let field = q_gamma_field(&group.element_orders()?)?;
    let rc = recognition_config(ctx);
    let mut out = Output::new(echo(p), Value::Null);
    let mut rows = Vec::new();
    for (i, h) in reps.iter().enumerate() {
        let class = resolve_class(
            &group,
            &ClassSpec { representative: element_repr(h), radius: None },
            &format!("parameters.classes[{i}]"),
        )?;
        let r = rho_eta_check(&d, &class.members, &ctx.tol.quad, &rho)?;
        let passed = r.difference < ctx.tol.rho_eta;
        if !passed {
            out.soft_failures.push(Failure::Computation(format!(
                "class of {h}: |tau + eta/2| = {:.3e} exceeds {:.1e}",
                r.difference, ctx.tol.rho_eta
            )));
        }
        let recognition = recognize(r.eta, &field, &rc)?;
        rows.push(json!({
            "class": class.describe(),
            "tau": r.tau,
            "eta": r.eta,
            "minus_half_eta": r.minus_half_eta,
            "difference": r.difference,
            "tolerance": ctx.tol.rho_eta,
            "exact": false,
            "passed": passed,
            "eta_recognition": recognition_json(&field, &rc, &recognition),
        }));
    }
    out.results = json!({
        "module": "det-map+spectral-eta",
        "classes": rows,
        "annotation": VALUE_FIELD_ANNOTATION,
    });
    Ok(out)
}

fn component(c: &ComponentRepr, pointer: &str) -> Result<FixedComponent, Failure> {
    let normal = c
        .normal
        .iter()
        .enumerate()
        .map(|(i, n)| {
            Ok(NormalSummand { angle: n.angle.radians(&format!("{pointer}.normal[{i}].angle"))?, roots: n.roots.clone() })
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    let e_roots = c
        .e_roots
        .iter()
        .enumerate()
        .map(|(i, e)| Ok((e.root.clone(), e.angle.radians(&format!("{pointer}.e_roots[{i}].angle"))?)))
        .collect::<Result<Vec<_>, Failure>>()?;
    let integration = c
        .integration
        .iter()
        .enumerate()
        .map(|(i, n)| {
            Ok(IntersectionNumber {
                monomial: n.monomial.clone(),
                value: scalar(&n.value, &format!("{pointer}.integration[{i}].value"))?,
            })
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    let beta = match &c.beta {
        Some(b) => b.radians(&format!("{pointer}.beta"))?,
        None => 0.0,
    };
    let comp = FixedComponent {
        dimension: c.dimension,
        ambient_dimension: c.ambient_dimension,
        normal,
        tangent_roots: c.tangent_roots.clone(),
        beta,
        c1_root: c.c1_root.clone(),
        e_roots,
        integration,
        sign: c.sign,
    };
    comp.validate().map_err(|e| Failure::at(pointer, e.to_string()))?;
    Ok(comp)
}

fn lefschetz(p: &LefschetzParams, ctx: &Ctx) -> Result<Output, Failure> {
    float_only(ctx, Command::Lefschetz)?;
    let comps = p
        .components
        .iter()
        .enumerate()
        .map(|(i, c)| component(c, &format!("parameters.components[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let terms = lefschetz_terms(&comps)?;
    let index: C64 = terms.iter().sum();
    // Closed-form terms: a few roundings per factor, summed without cancellation control.
    let error_bound = 64.0 * f64::EPSILON * terms.iter().map(|t| t.norm()).sum::<f64>().max(1.0);
    let recognition = match p.order {
        Some(n) => {
            let field = q_gamma_field(&BTreeSet::from([n])).map_err(|e| Failure::at("parameters.order", e.to_string()))?;
            let rc = recognition_config(ctx);
            Some(recognition_json(&field, &rc, &recognize(index, &field, &rc)?))
        }
        None => None,
    };
    let results = json!({
        "module": "charclass",
        "index": index,
        "exact_zero": comps.is_empty(),
        "exact": comps.is_empty(),
        "error_bound": error_bound,
        "terms": terms,
        "recognition": recognition,
    });
    Ok(Output::new(echo(p), results))
}

fn recognize_cmd(p: &RecognizeParams, ctx: &Ctx) -> Result<Output, Failure> {
    float_only(ctx, Command::Recognize)?;
    let value: C64 = scalar(&p.value, "parameters.value")?;
    let orders = match (&p.orders, &p.group) {
        (Some(o), None) => o.clone(),
        (None, Some(g)) => {
            let group = g.build("parameters.group")?;
            if !group.is_finite() {
                return Err(Failure::at("parameters.group", "the field is generated by a finite group's element orders"));
            }
            group.element_orders()?
        }
        _ => return Err(Failure::at("parameters", "give exactly one of `orders` and `group`")),
    };
    let field = q_gamma_field(&orders).map_err(|e| Failure::at("parameters.orders", e.to_string()))?;
    let rc = recognition_config(ctx);
    let r = recognize(value, &field, &rc)?;
    let mut results = recognition_json(&field, &rc, &r);
    results["module"] = json!("cyclo");
    results["value"] = json!(value);
    results["annotation"] = json!(VALUE_FIELD_ANNOTATION);
    Ok(Output::new(echo(p), results))
}

fn suite(p: &SuiteParams, ctx: &Ctx) -> Result<Output, Failure> {
    float_only(ctx, Command::Suite)?;
    let ids = p.criteria.clone().unwrap_or_else(|| CRITERIA.iter().map(|(i, _)| *i).collect());
    for (i, id) in ids.iter().enumerate() {
        if !(1..=10).contains(id) {
            return Err(Failure::at(&format!("parameters.criteria[{i}]"), format!("unknown criterion {id}")));
        }
    }
    let runs: Vec<_> = ids
        .par_iter()
        .map(|&id| {
            let start = Instant::now();
            let r = run_criterion(id, &p.config);
            (id, r, start.elapsed().as_secs_f64())
        })
        .collect();
    let mut out = Output::new(echo(p), Value::Null);
    let mut matrix = Vec::new();
    for (id, r, secs) in runs {
        out.items.insert(format!("criterion {id:02}"), secs);
        match r {
            Ok(report) => {
                if !report.passed {
                    out.soft_failures.push(Failure::Computation(format!("criterion {id} failed")));
                }
                matrix.push(json!(report));
            }
            Err(e) => {
                out.soft_failures.push(Failure::Computation(format!("criterion {id}: {e}")));
                matrix.push(json!({ "id": id, "passed": false, "error": e.to_string() }));
            }
        }
    }
    let passed = matrix.iter().filter(|m| m["passed"] == json!(true)).count();
    out.results = json!({
        "module": "suite",
        "criteria": matrix,
        "passed": passed,
        "total": ids.len(),
    });
    Ok(out)
}
