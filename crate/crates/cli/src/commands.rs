use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use dac_core::exact::{connection_poly, pivotality_poly, Caps};
use dac_core::graph::{complete_bipartite_dk, parallel_gadget_dn, parse_graph_file, path_gadget, single_edge};
use dac_core::mc::{continuity_scan, duality_check, estimate_crossing, estimate_event, psi_fit, rc_estimate, DualityReport, EstimatorResult, PsiFit, RcCurvePoint, ScanSettings};
use dac_core::rational::{self, Q};
use dac_core::rng::{batch_len, batches, stream};
use dac_core::sampler::{clusters, pivotal, sample_dac};
use dac_core::tree::{
    bounded_degree_certificate, discontinuity_family_certificate, nonmonotonicity_certificate, rcbounds_check, BridgeFamily, CurveMethod, CurvePoint,
    RcFamily, Status,
};
use dac_core::{DacError, Exec, Gadget, LatticeBox, MultiGraph, SiteMode};

use crate::config::{ConfigError, RunConfig};
use crate::CliError;

/// Primary output text and, for certificates, the overall status.
pub type Output = (String, Option<Status>);

pub fn dispatch(name: &str, cfg: &RunConfig) -> Result<Output, CliError> {
    match name {
        "sample" => sample(cfg),
        "exact" => exact(cfg),
        "certify" => certify(cfg),
        "curve" => curve(cfg),
        other => unreachable!("unknown subcommand {other}"),
    }
}

enum Source {
    Gadget(Gadget),
    Plain(MultiGraph),
    Lattice(LatticeBox),
}

impl Source {
    fn graph(&self) -> &MultiGraph {
        match self {
            Source::Gadget(g) => g.graph(),
            Source::Plain(g) => g,
            Source::Lattice(b) => b.graph(),
        }
    }

    fn gadget(&self, what: &str) -> Result<&Gadget, CliError> {
        match self {
            Source::Gadget(g) => Ok(g),
            _ => Err(ConfigError::Value {
                key: "graph".into(),
                value: String::new(),
                msg: format!("{what} needs a two-terminal graph"),
            }
            .into()),
        }
    }
}

fn mode(cfg: &RunConfig) -> Result<SiteMode, CliError> {
    match cfg.raw("mode").unwrap_or("nn") {
        "nn" => Ok(SiteMode::NearestNeighbor),
        "star" => Ok(SiteMode::Star),
        other => Err(ConfigError::Value {
            key: "mode".into(),
            value: other.into(),
            msg: "expected nn or star".into(),
        }
        .into()),
    }
}

fn source(cfg: &RunConfig) -> Result<Source, CliError> {
    let name = cfg.get::<String>("graph")?;
    Ok(match name.as_str() {
        "edge" => Source::Gadget(single_edge()),
        "path" => Source::Gadget(path_gadget()),
        "dk" => Source::Gadget(complete_bipartite_dk(cfg.get("k")?)?),
        "dn" => Source::Gadget(parallel_gadget_dn(cfg.get("gadget-n")?)?),
        "z2box" => Source::Lattice(LatticeBox::crossing_box(cfg.get("L")?, mode(cfg)?)?),
        other => match other.strip_prefix("file:") {
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                let file = parse_graph_file(&text)?;
                match file.gadget() {
                    Ok(g) => Source::Gadget(g),
                    Err(_) => Source::Plain(file.graph),
                }
            }
            None => {
                return Err(ConfigError::Value {
                    key: "graph".into(),
                    value: other.into(),
                    msg: "expected edge, path, dk, dn, z2box or file:PATH".into(),
                }
                .into())
            }
        },
    })
}

/// Parses a probability given as `a/b` or a decimal.
fn unit(cfg: &RunConfig, key: &str) -> Result<f64, CliError> {
    let q = cfg.rational(key)?.ok_or_else(|| ConfigError::Missing(key.into()))?;
    rational::check_unit(key_name(key), &q)?;
    Ok(rational::to_f64(&q))
}

fn key_name(key: &str) -> &'static str {
    match key {
        "p" => "p",
        "r" => "r",
        _ => "parameter",
    }
}

fn sample(cfg: &RunConfig) -> Result<Output, CliError> {
    let src = source(cfg)?;
    let (p, r) = (unit(cfg, "p")?, unit(cfg, "r")?);
    let samples: usize = cfg.get("samples")?;
    let seed: u64 = cfg.get("seed")?;
    let mut out = cfg.header();
    let Some(event) = cfg.raw("event") else {
        if samples == 0 {
            return Err(ConfigError::Missing("samples > 0".into()).into());
        }
        let graph = src.graph();
        out.push_str("sample_id,edge_bits_hex,vertex_bits_hex\n");
        let mut id = 0;
        for b in 0..batches(samples) {
            let mut rng = stream(seed, b as u64);
            for _ in 0..batch_len(samples, b) {
                let (eta, xi) = sample_dac(graph, p, r, &mut rng)?;
                writeln!(out, "{id},{},{}", eta.0.to_hex(), xi.0.to_hex()).expect("write to string");
                id += 1;
            }
        }
        return Ok((out, None));
    };
    let exec = Exec::Parallel;
    let res: EstimatorResult = match event {
        "crossing" => match &src {
            Source::Lattice(b) => estimate_crossing(b, p, r, samples, seed, exec)?,
            _ => return Err(DacError::Geometry("the crossing event needs --graph z2box".into()).into()),
        },
        "all-black" => estimate_event(src.graph(), &|_: &_, xi: &dac_core::bits::SiteConfig| xi.0.count_ones() == xi.len(), p, r, samples, seed, exec)?,
        "connect" => {
            let g = src.gadget("connect")?;
            let (a, b) = (g.a(), g.b());
            let graph = g.graph();
            let ev = |eta: &dac_core::bits::BondConfig, _: &_| {
                let mut part = clusters(graph, eta).expect("sizes match");
                part.same(a, b)
            };
            estimate_event(graph, &ev, p, r, samples, seed, exec)?
        }
        "pivotal" => {
            let g = src.gadget("pivotal")?;
            estimate_event(g.graph(), &|eta: &_, xi: &_| pivotal(g, eta, xi).expect("sizes match"), p, r, samples, seed, exec)?
        }
        other => {
            return Err(ConfigError::Value {
                key: "event".into(),
                value: other.into(),
                msg: "expected all-black, connect, pivotal or crossing".into(),
            }
            .into())
        }
    };
    out.push_str(EstimatorResult::CSV_HEADER);
    out.push('\n');
    out.push_str(&res.csv_row());
    out.push('\n');
    Ok((out, None))
}

fn exact(cfg: &RunConfig) -> Result<Output, CliError> {
    let src = source(cfg)?;
    let g = src.gadget("exact")?;
    let caps = Caps {
        max_edges: cfg.get("max-edges")?,
        ..Caps::default()
    };
    let which = cfg.get::<String>("poly")?;
    let (want_h, want_f) = match which.as_str() {
        "h" => (true, false),
        "f" => (false, true),
        "both" => (true, true),
        other => {
            return Err(ConfigError::Value {
                key: "poly".into(),
                value: other.into(),
                msg: "expected h, f or both".into(),
            }
            .into())
        }
    };
    let eval_h = cfg.rational("eval-h")?;
    let eval_f = cfg.rationals("eval-f")?;
    let h = if want_h || eval_h.is_some() { Some(connection_poly(g, &caps)?) } else { None };
    let f = if want_f || eval_f.is_some() { Some(pivotality_poly(g, &caps)?) } else { None };
    let mut out = cfg.header();
    let mut coeffs = String::from("poly,i,j,numerator,denominator\n");
    for (name, poly, wanted) in [("h", &h, want_h), ("f", &f, want_f)] {
        if let (Some(poly), true) = (poly, wanted) {
            writeln!(out, "{name} = {poly}").expect("write to string");
            for ((i, j), c) in poly.terms() {
                writeln!(coeffs, "{name},{i},{j},{},{}", c.numer(), c.denom()).expect("write to string");
            }
        }
    }
    out.push('\n');
    out.push_str(&coeffs);
    let mut evals = Vec::new();
    let zero = Q::from_integer(0.into());
    if let (Some(p), Some(h)) = (&eval_h, &h) {
        rational::check_unit("p", p)?;
        evals.push(("h", p.clone(), zero.clone(), h.eval(p, &zero)));
    }
    if let (Some(pr), Some(f)) = (&eval_f, &f) {
        let [p, r] = pr.as_slice() else {
            return Err(ConfigError::Value {
                key: "eval-f".into(),
                value: cfg.raw("eval-f").unwrap_or_default().into(),
                msg: "expected two values P R".into(),
            }
            .into());
        };
        rational::check_unit("p", p)?;
        rational::check_unit("r", r)?;
        evals.push(("f", p.clone(), r.clone(), f.eval(p, r)));
    }
    if !evals.is_empty() {
        out.push_str("\nvalue,p,r,exact,decimal\n");
        for (name, p, r, v) in evals {
            writeln!(out, "{name},{},{},{},{:.12}", rational::show(&p), rational::show(&r), rational::show(&v), rational::to_f64(&v)).expect("write to string");
        }
    }
    Ok((out, None))
}

fn certify(cfg: &RunConfig) -> Result<Output, CliError> {
    let which = cfg.get::<String>("certificate")?;
    let caps = Caps {
        max_edges: cfg.get("max-edges")?,
        ..Caps::default()
    };
    let mut out = cfg.header();
    let bundle = match which.as_str() {
        "dk-nonmonotone" => nonmonotonicity_certificate(cfg.opt("k")?, cfg.rational("p0")?.as_ref(), &caps)?,
        "nonbounded-discontinuity" => {
            let grid = cfg.grid("grid")?.unwrap_or_else(|| (0..=5).map(|i| rational::q(i, 10)).collect());
            let rep = discontinuity_family_certificate(&grid, cfg.get("nmax")?, &caps)?;
            writeln!(out, "jump = {} ≈ {:.10}", rep.jump, rep.jump.to_f64()).expect("write to string");
            out.push_str(&rep.curve.to_csv());
            out.push('\n');
            rep.bundle
        }
        "bounded-degree-discontinuity" => {
            let depths = cfg.list::<usize>("depths")?.unwrap_or_default();
            bounded_degree_certificate(&BridgeFamily, cfg.get("delta")?, &depths, &caps)?
        }
        "rcbounds-check" => {
            let family: RcFamily = cfg.get::<String>("family")?.parse()?;
            let grid = cfg.grid("grid")?.unwrap_or_else(|| (0..=3).map(|i| rational::q(i, 10)).collect());
            rcbounds_check(family, &grid, &caps)?
        }
        other => {
            return Err(ConfigError::Value {
                key: "certificate".into(),
                value: other.into(),
                msg: "expected dk-nonmonotone, nonbounded-discontinuity, bounded-degree-discontinuity or rcbounds-check".into(),
            }
            .into())
        }
    };
    out.push_str(&bundle.report());
    Ok((out, Some(bundle.status())))
}

fn curve(cfg: &RunConfig) -> Result<Output, CliError> {
    let which = cfg.get::<String>("kind")?;
    let size: usize = cfg.get("L")?;
    let samples: usize = cfg.get("samples")?;
    let seed: u64 = cfg.get("seed")?;
    let exec = Exec::Parallel;
    let mut out = cfg.header();
    match which.as_str() {
        "rc" => {
            let grid: Vec<f64> = cfg.grid("grid")?.unwrap_or_default().iter().map(rational::to_f64).collect();
            let site_mode = mode(cfg)?;
            let cache: RefCell<BTreeMap<u64, RcCurvePoint>> = RefCell::default();
            let source = |p: f64| -> dac_core::Result<CurvePoint> {
                let pt = rc_estimate(p, size, samples, site_mode, seed, exec)?;
                let cp = CurvePoint {
                    p,
                    r_lo: pt.ci_lo,
                    r_hi: pt.ci_hi,
                    method: CurveMethod::MonteCarlo,
                };
                cache.borrow_mut().insert(p.to_bits(), pt);
                Ok(cp)
            };
            let report = continuity_scan(&source, &grid, ScanSettings::default())?;
            writeln!(out, "{},estimate", RcCurvePoint::CSV_HEADER).expect("write to string");
            let cache = cache.borrow();
            for p in &grid {
                let pt = &cache[&p.to_bits()];
                writeln!(out, "{},{:.6}", pt.csv_row(), pt.estimate).expect("write to string");
            }
            writeln!(out, "# scan: max jump = {:.6}, flagged = {}", report.max_jump, report.flagged).expect("write to string");
            writeln!(out, "# {}", dac_core::mc::ScanReport::CSV_HEADER).expect("write to string");
            for row in report.csv_rows() {
                writeln!(out, "# {row}").expect("write to string");
            }
        }
        "duality" => {
            let p = unit(cfg, "p")?;
            let rep = duality_check(p, size, samples, seed, exec)?;
            out.push_str(DualityReport::CSV_HEADER);
            out.push('\n');
            out.push_str(&rep.csv_row());
            out.push('\n');
        }
        "psi" => {
            let p = unit(cfg, "p")?;
            let nmax: usize = cfg.get("nmax")?;
            let ns: Vec<usize> = (1..=nmax).collect();
            let fit: PsiFit = psi_fit(p, &ns, samples, seed, exec)?;
            out.push_str("p,nmax,samples,psi,se,positive,points\n");
            let show = |x: Option<f64>| x.map(|v| format!("{v:.6}")).unwrap_or_default();
            writeln!(out, "{p},{nmax},{samples},{},{},{},{}", show(fit.psi), show(fit.se), fit.positive, fit.used.len()).expect("write to string");
            writeln!(out, "# {}", PsiFit::CSV_HEADER).expect("write to string");
            for row in fit.csv_rows() {
                writeln!(out, "# {row}").expect("write to string");
            }
        }
        other => {
            return Err(ConfigError::Value {
                key: "kind".into(),
                value: other.into(),
                msg: "expected rc, duality or psi".into(),
            }
            .into())
        }
    }
    Ok((out, None))
}
