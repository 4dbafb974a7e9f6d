//! Subcommand bodies. Each returns the `result` part of the report.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use hkr_core::formality::{closed_form_map, tilde_todd_series, todd_series, twisted_first_taylor, MaurerCartanForm};
use hkr_core::graph::{canonical_hash, classify_wheels, enumerate_graphs, gamma_zero, vanishing_detector, AdmissibleGraph};
use hkr_core::linfty::{mc_residual, toy_morphism, twist_morphism, EtaDgLie, EtaElement, LInftyAlgebra, PolyVectorLie};
use hkr_core::polyvector::PolyVectorField;
use hkr_core::rational::rat;
use hkr_core::verify::{self, compare_closed_form, reference_omega, SuiteReport};
use hkr_core::weight::{wheel_weights, WeightCache};
use hkr_core::{grassmann, UnivariateSeries};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::Suite;

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn labels(mask: u32) -> Vec<usize> {
    grassmann::indices(mask).into_iter().map(|i| i + 1).collect()
}

pub fn graphs(n: usize, m: usize, epsilon: i64, tags: bool) -> Result<Value, CliError> {
    let list = enumerate_graphs(n, m, epsilon)?;
    let rows: Vec<Value> = list
        .iter()
        .map(|g| {
            let mut row = json!({ "graph": g, "hash": canonical_hash(g) });
            if tags {
                row["vanishing"] = json!(vanishing_detector(g));
            }
            row
        })
        .collect();
    Ok(json!({ "n": n, "m": m, "epsilon": epsilon, "count": rows.len(), "graphs": rows }))
}

pub fn weights_closed(max_l: usize) -> Result<Value, CliError> {
    if max_l == 0 {
        return Err(CliError::Usage("max_l must be positive".into()));
    }
    let rows: Vec<Value> = wheel_weights(max_l)
        .into_iter()
        .map(|(l, w)| json!({ "l": l, "weight": w.to_string() }))
        .collect();
    Ok(json!({ "mode": "closed", "weights": rows }))
}

pub fn pick_graph(path: Option<&Path>, gamma0: Option<usize>, wheel: Option<usize>) -> Result<AdmissibleGraph, CliError> {
    if let Some(p) = path {
        return read_json(p);
    }
    if let Some(m) = gamma0 {
        return Ok(gamma_zero(m));
    }
    let l = wheel.ok_or_else(|| CliError::Usage("one of --graph, --gamma0, --wheel is required".into()))?;
    if l == 0 {
        return Err(CliError::Usage("a wheel needs at least one spoke".into()));
    }
    classify_wheels(l, l - 1)?
        .into_iter()
        .find(|f| f.cycles == [l])
        .map(|f| f.representative())
        .ok_or_else(|| CliError::Usage(format!("no wheel with {l} spokes")))
}

pub fn weights_mc(g: &AdmissibleGraph, cfg: &RunConfig, cache_path: &Path) -> Result<Value, CliError> {
    let (mut cache, warnings) = WeightCache::open(cache_path)?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    let mc = cfg.monte_carlo();
    if cache.get(&canonical_hash(g), &mc).is_some() {
        eprintln!("served from cache {}", cache_path.display());
    }
    let estimate = cache.get_or_compute(g, &mc)?;
    Ok(json!({ "mode": "mc", "graph": g, "estimate": estimate }))
}

fn load_omega(path: Option<&Path>, cfg: &RunConfig) -> Result<MaurerCartanForm, CliError> {
    match path {
        Some(p) => read_json(p),
        None => Ok(reference_omega(cfg.cap)?),
    }
}

pub fn formality(omega: Option<&Path>, gamma: Option<&Path>, indices: &[usize], cfg: &RunConfig) -> Result<(bool, Value), CliError> {
    let omega = load_omega(omega, cfg)?;
    let gamma: PolyVectorField = match gamma {
        Some(p) => read_json(p)?,
        None => {
            if indices.iter().any(|&i| i == 0 || i > omega.dim()) {
                return Err(CliError::Usage(format!("indices must lie in 1..={}", omega.dim())));
            }
            let idx: Vec<usize> = indices.iter().map(|i| i - 1).collect();
            PolyVectorField::basis(omega.dim(), cfg.cap, &idx)?
        }
    };
    let graph_side = twisted_first_taylor(&omega, &gamma, omega.generators())?;
    let closed = closed_form_map(&omega, &gamma)?;
    let per_j: Vec<Value> = compare_closed_form(&omega, &gamma)?.into_iter().map(|c| json!({ "j": c.j, "passed": c.passed })).collect();
    let ok = graph_side.agrees_with(&closed);
    Ok((
        ok,
        json!({ "omega": omega, "gamma": gamma, "per_j": per_j, "graph_side": graph_side, "closed_form": closed }),
    ))
}

fn eta_terms<E: serde::Serialize>(x: &EtaElement<E>) -> Value {
    let rows: Vec<Value> = x.terms().map(|(&(eta, _), v)| json!({ "eta": labels(eta), "value": v })).collect();
    Value::Array(rows)
}

pub fn twist(omega: Option<&Path>, toy: bool, cfg: &RunConfig) -> Result<Value, CliError> {
    if toy {
        let (src, tgt, psi) = toy_morphism(2)?;
        let omega = src.add(&src.element(&[0], src.base().basis(0))?, &src.element(&[1], src.base().basis(1))?)?;
        let (_, pushed) = twist_morphism(&psi, &src, &tgt, &omega)?;
        let residual = mc_residual(&tgt, &pushed)?;
        let coords = |x: &EtaElement<_>| -> Value {
            let rows: Vec<Value> = x
                .terms()
                .map(|(&(eta, _), v): (&(u32, i32), &hkr_core::linfty::FiniteVector)| {
                    json!({ "eta": labels(eta), "coords": v.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>() })
                })
                .collect();
            Value::Array(rows)
        };
        return Ok(json!({
            "mode": "toy-morphism",
            "pushforward": coords(&pushed),
            "residual": coords(&residual),
            "maurer_cartan": tgt.is_zero(&residual),
        }));
    }
    let omega = load_omega(omega, cfg)?;
    let g = EtaDgLie::new(PolyVectorLie { dim: omega.dim() }, omega.generators())?;
    let mut element = g.zero();
    for (alpha, f) in omega.fields().iter().enumerate() {
        element = g.add(&element, &g.element(&[alpha], f.clone())?)?;
    }
    let residual = mc_residual(&g, &element)?;
    Ok(json!({
        "mode": "tpoly",
        "omega": omega,
        "residual": eta_terms(&residual),
        "maurer_cartan": g.is_zero(&residual),
    }))
}

fn suite_value(report: &SuiteReport) -> Value {
    serde_json::to_value(report).expect("reports serialize")
}

pub fn verify(suite: Suite, cfg: &RunConfig) -> Result<(bool, Value), CliError> {
    let suites = if suite == Suite::All {
        vec![
            Suite::Hkr,
            Suite::WheelWeights,
            Suite::WheelClassification,
            Suite::ClosedForm,
            Suite::Gerstenhaber,
            Suite::Twisting,
            Suite::Todd,
            Suite::Derivation,
            Suite::McWeights,
        ]
    } else {
        vec![suite]
    };
    let mut reports = Vec::new();
    let mut ok = true;
    for s in suites {
        let (report, extra) = run_suite(s, cfg)?;
        ok &= report.passed();
        let mut v = suite_value(&report);
        if let Some(extra) = extra {
            v["details"] = extra;
        }
        reports.push(v);
    }
    Ok((ok, json!({ "suites": reports })))
}

fn run_suite(suite: Suite, cfg: &RunConfig) -> Result<(SuiteReport, Option<Value>), CliError> {
    let n = cfg.instances;
    Ok(match suite {
        Suite::Gerstenhaber => (verify::gerstenhaber_suite(n, cfg.d, cfg.cap, cfg.seed)?, None),
        Suite::Derivation => (verify::derivation_suite(n, cfg.d, cfg.cap, cfg.seed)?, None),
        Suite::ClosedForm => {
            let (report, cases) = verify::closed_form_suite(n.min(50), cfg.cap, cfg.seed)?;
            let rows: Vec<Value> = cases
                .iter()
                .map(|c| json!({ "d": c.d, "s": c.s, "j": c.j, "passed": c.passed }))
                .collect();
            (report, Some(Value::Array(rows)))
        }
        Suite::Twisting => (verify::twisting_suite(n.min(50), cfg.cap, cfg.seed)?, None),
        Suite::Todd => (verify::todd_suite(n.min(50), 10, 6, cfg.seed)?, None),
        Suite::Hkr => (verify::hkr_suite(cfg.d, cfg.cap)?, None),
        Suite::WheelWeights => (verify::wheel_weight_suite(4)?, None),
        Suite::WheelClassification => (verify::wheel_classification_suite(3, 3)?, None),
        Suite::McWeights => {
            let (report, table) = verify::mc_weights_suite(&cfg.monte_carlo())?;
            (report, Some(serde_json::to_value(table).expect("weights serialize")))
        }
        Suite::All => unreachable!("expanded by the caller"),
    })
}

pub fn todd(order: usize) -> Result<(bool, Value), CliError> {
    if order == 0 {
        return Err(CliError::Usage("order must be positive".into()));
    }
    let q = todd_series(order);
    let qt = tilde_todd_series(order);
    let e = UnivariateSeries::exp_x(order).rescale_var(&rat(-1, 2));
    let ok = qt == q.mul_series(&e);
    let show = |s: &UnivariateSeries| s.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>();
    Ok((ok, json!({ "order": order, "todd": show(&q), "tilde_todd": show(&qt), "tilde_equals_todd_times_exp": ok })))
}
