use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use conftc::certificate::{build, CertificateError, CertificateKind};
use conftc::closed_forms::{tc_case, upper_bound};
use conftc::expr::{reduce_ring, reduce_tensor};
use conftc::isotopy::{format_path_table, Point};
use conftc::{
    brute_force_zcl, build_isotopy, cat_conf, cl_s_conf, map_f, map_g, parse, plan_with_moving_obstacles, tc_s,
    verify, Coefficients, DetourPlanner, Instance, IsotopyConfig, IsotopyError, IsotopyField, RingSpec, TcQuery,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::{Failure, Global};

fn require(value: Option<u32>, flag: &str) -> Result<u32> {
    value.ok_or_else(|| anyhow!("missing required flag {flag}"))
}

fn ring_spec(g: &Global) -> Result<RingSpec> {
    let m = require(g.m, "--m")?;
    let n = require(g.n, "--n")?;
    let coeff = g.coeff.unwrap_or_else(|| Coefficients::for_dimension(m));
    Ok(RingSpec::new(m, n, g.p, coeff)?)
}

fn query(g: &Global) -> Result<TcQuery> {
    Ok(TcQuery::new(require(g.m, "--m")?, require(g.n, "--n")?, g.p, g.s)?)
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

#[derive(Serialize)]
struct ReduceOutput {
    input: String,
    normal_form: String,
    terms: usize,
}

pub fn reduce(g: &Global, text: &str) -> Result<String> {
    let spec = ring_spec(g)?;
    let slotted = parse(text).map_err(|e| anyhow!("parse error at {e}"))?.is_slotted();
    let (normal_form, terms) = if slotted {
        let t = reduce_tensor(text, spec, g.s)?;
        (t.to_string(), t.len())
    } else {
        let e = reduce_ring(text, spec)?;
        (e.to_string(), e.len())
    };
    if g.json {
        to_json(&ReduceOutput { input: text.to_string(), normal_form, terms })
    } else {
        Ok(normal_form + "\n")
    }
}

pub fn basis(g: &Global, factors: Option<usize>, degree: Option<u32>) -> Result<String> {
    let spec = ring_spec(g)?;
    let step = spec.generator_degree();
    let counts: Vec<usize> = match (factors, degree) {
        (Some(r), _) => vec![r],
        (None, Some(d)) if d % step == 0 => vec![(d / step) as usize],
        (None, Some(d)) => bail!("degree {d} is not a multiple of m-1 = {step}"),
        (None, None) => (0..=spec.n() as usize).collect(),
    };
    let mut monomials = Vec::new();
    for r in counts {
        monomials.extend(conftc::basis(&spec, r)?.into_iter().map(|m| m.to_string()));
    }
    if g.json {
        to_json(&monomials)
    } else {
        Ok(monomials.iter().map(|m| m.clone() + "\n").collect())
    }
}

#[derive(Serialize)]
struct TcOutput {
    m: u32,
    n: u32,
    p: u32,
    s: u32,
    tc: u32,
    case: &'static str,
    upper_bound: u32,
}

pub fn tc(g: &Global) -> Result<String> {
    let q = query(g)?;
    let out = TcOutput {
        m: q.m,
        n: q.n,
        p: q.p,
        s: q.s,
        tc: tc_s(&q),
        case: tc_case(&q).label(),
        upper_bound: upper_bound(&q),
    };
    if g.json {
        to_json(&out)
    } else {
        Ok(format!("{}\ncase: {}\n", out.tc, out.case))
    }
}

#[derive(Serialize)]
struct CatOutput {
    m: u32,
    n: u32,
    p: u32,
    cat: u32,
}

pub fn cat(g: &Global) -> Result<String> {
    let (m, n) = (require(g.m, "--m")?, require(g.n, "--n")?);
    let out = CatOutput { m, n, p: g.p, cat: cat_conf(m, n, g.p)? };
    if g.json {
        to_json(&out)
    } else {
        let case = if g.p == 0 { "p=0" } else { "p>=1" };
        Ok(format!("{}\ncase: {case}\n", out.cat))
    }
}

pub fn certify(g: &Global, kind: &str, golden: Option<&Path>) -> Result<String> {
    let kind: CertificateKind = kind.parse().map_err(|e: String| anyhow!(e))?;
    if kind == CertificateKind::Custom {
        bail!("custom certificates cannot be built from the command line");
    }
    let spec = ring_spec(g)?;
    let cert = build(kind, spec, g.s).map_err(|e| match e {
        CertificateError::Regime { .. } => anyhow!(e),
        other => anyhow!(Failure(other.to_string())),
    })?;
    let report = verify(&cert);
    let record = cert.record(&report);
    if let Some(dir) = golden {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let file = dir.join(format!("{}_m{}_n{}_p{}_s{}.json", kind, spec.m(), spec.n(), spec.p(), g.s));
        fs::write(&file, to_json(&record)?).with_context(|| format!("writing {}", file.display()))?;
    }
    if !report.passed() {
        return Err(Failure(format!("{kind}: {report:?}")).into());
    }
    if g.json {
        return to_json(&record);
    }
    let mut out = String::new();
    writeln!(out, "certificate: {kind} (m={}, n={}, p={}, s={}, {})", spec.m(), spec.n(), spec.p(), g.s, spec.coeff())?;
    writeln!(out, "length: {}", record.length)?;
    for (k, f) in record.factors.iter().enumerate() {
        writeln!(out, "factor {}: {f}", k + 1)?;
    }
    writeln!(out, "product ({} terms): {}", record.product_terms, record.product)?;
    if let Some(w) = &record.witness {
        writeln!(out, "witness ({} terms): {w}", record.witness_terms.unwrap_or(0))?;
    }
    writeln!(out, "lower bound: TC_{} >= {}", g.s, record.length)?;
    Ok(out)
}

#[derive(Serialize)]
struct ZclOutput {
    m: u32,
    n: u32,
    p: u32,
    s: u32,
    coeff: Coefficients,
    max_len: usize,
    zcl: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed_form: Option<u32>,
}

pub fn zcl(g: &Global, max_len: Option<usize>) -> Result<String> {
    let spec = ring_spec(g)?;
    let max_len = max_len.unwrap_or((spec.n() * g.s) as usize);
    let zcl = brute_force_zcl(spec, g.s, max_len)?;
    let closed_form = (spec.p() == 0).then(|| cl_s_conf(spec.m(), spec.n(), g.s).ok()).flatten();
    let out = ZclOutput { m: spec.m(), n: spec.n(), p: spec.p(), s: g.s, coeff: spec.coeff(), max_len, zcl, closed_form };
    if g.json {
        return to_json(&out);
    }
    let mut text = format!("{zcl}\n");
    if let Some(c) = closed_form {
        writeln!(text, "closed form: {c}")?;
    }
    Ok(text)
}

/// Input problems exit with status 2; everything the numerics reject is a
/// verification failure.
fn numeric_error(e: IsotopyError) -> anyhow::Error {
    match e {
        IsotopyError::Instance(_) | IsotopyError::InvalidInput(_) | IsotopyError::UnsupportedDimension(_) => anyhow!(e),
        other => Failure(other.to_string()).into(),
    }
}

fn load(g: &Global, file: &Path) -> Result<(Instance, IsotopyConfig)> {
    let inst = Instance::load(file).map_err(numeric_error)?;
    let mut config = inst.isotopy_config();
    if let Some(tol) = g.tol {
        config.tol_inv = tol;
    }
    Ok((inst, config))
}

/// Square (cube) around everything the instance mentions, padded by the bump radius.
fn bounding_box(inst: &Instance, field: &IsotopyField) -> Result<(Point, f64)> {
    let traj = field.trajectory();
    let mut pts: Vec<Point> = (0..=100).flat_map(|k| traj.positions(k as f64 / 100.0)).collect();
    pts.extend(inst.sequence().map_err(numeric_error)?.configs().iter().flatten().copied());
    let (mut lo, mut hi) = ([f64::INFINITY; 3], [f64::NEG_INFINITY; 3]);
    for p in &pts {
        for a in 0..3 {
            lo[a] = lo[a].min(p[a]);
            hi[a] = hi[a].max(p[a]);
        }
    }
    let center = [(lo[0] + hi[0]) / 2.0, (lo[1] + hi[1]) / 2.0, (lo[2] + hi[2]) / 2.0];
    let half = (0..3).map(|a| (hi[a] - lo[a]) / 2.0).fold(0.0, f64::max) + field.radius();
    Ok((center, half))
}

#[derive(Serialize)]
struct GridReport {
    t: f64,
    points: usize,
    max_round_trip: f64,
    min_pairwise_image_distance: f64,
}

#[derive(Serialize)]
struct IsotopyReport {
    dim: usize,
    obstacles: usize,
    radius: f64,
    step: f64,
    tracking_samples: usize,
    tracking_error: f64,
    tol_track: f64,
    tol_inv: f64,
    grids: Vec<GridReport>,
    random_points: usize,
    random_max_round_trip: f64,
    stationary_configurations: Vec<Vec<Vec<f64>>>,
    stationary_clearance: f64,
}

fn coords(p: &Point, dim: usize) -> Vec<f64> {
    p[..dim].to_vec()
}

pub fn isotopy(g: &Global, file: &Path) -> Result<String> {
    let (inst, config) = load(g, file)?;
    let traj = inst.trajectory().map_err(numeric_error)?;
    let field = build_isotopy(&traj, &config).map_err(numeric_error)?;
    let (center, half) = bounding_box(&inst, &field)?;
    let grids: Vec<GridReport> = [0.5, 1.0]
        .into_iter()
        .map(|t| {
            let d = field.grid_diagnostics(t, &center, half, 20);
            GridReport {
                t,
                points: d.points,
                max_round_trip: d.max_round_trip,
                min_pairwise_image_distance: d.min_pairwise_image_distance,
            }
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let dim = traj.dim();
    let random_points = 200;
    let mut random_max_round_trip = 0.0f64;
    for _ in 0..random_points {
        let mut x = [0.0; 3];
        for (a, c) in x.iter_mut().enumerate().take(dim) {
            *c = center[a] + rng.random_range(-half..=half);
        }
        let t = rng.random_range(0.0..=1.0);
        let y = field.psi(&field.phi(&x, t), t);
        random_max_round_trip = random_max_round_trip.max(conftc_dist(&x, &y));
    }
    let seq = inst.sequence().map_err(numeric_error)?;
    seq.check(&traj, true, config.min_clearance).map_err(numeric_error)?;
    let stationary = map_g(&seq, &field).map_err(numeric_error)?;
    let report = IsotopyReport {
        dim,
        obstacles: traj.p(),
        radius: field.radius(),
        step: config.step,
        tracking_samples: config.track_samples,
        tracking_error: field.tracking_error(),
        tol_track: config.tol_track,
        tol_inv: config.tol_inv,
        random_points,
        random_max_round_trip,
        stationary_configurations: stationary
            .configs()
            .iter()
            .map(|c| c.iter().map(|x| coords(x, dim)).collect())
            .collect(),
        stationary_clearance: stationary.clearance(&traj, false),
        grids,
    };
    let worst = report.grids.iter().map(|r| r.max_round_trip).fold(report.random_max_round_trip, f64::max);
    if worst > config.tol_inv {
        return Err(Failure(format!("round trip error {worst:.3e} exceeds {:.3e}", config.tol_inv)).into());
    }
    if report.grids.iter().any(|r| !(r.min_pairwise_image_distance > 0.0)) {
        return Err(Failure("grid images are not distinct".into()).into());
    }
    if g.json {
        return to_json(&report);
    }
    let mut out = String::new();
    writeln!(out, "obstacles: {} in R^{}", report.obstacles, report.dim)?;
    writeln!(out, "bump radius: {:.6}", report.radius)?;
    writeln!(out, "tracking error: {:.3e} over {} times (tol {:.1e})", report.tracking_error, report.tracking_samples, report.tol_track)?;
    for r in &report.grids {
        writeln!(out, "grid t={}: round trip {:.3e}, min image distance {:.3e}", r.t, r.max_round_trip, r.min_pairwise_image_distance)?;
    }
    writeln!(out, "random round trip: {:.3e} over {} points", report.random_max_round_trip, report.random_points)?;
    writeln!(out, "stationary clearance: {:.6}", report.stationary_clearance)?;
    Ok(out)
}

fn conftc_dist(a: &Point, b: &Point) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

#[derive(Serialize)]
struct PlanReport {
    samples: usize,
    min_clearance: f64,
    max_visit_error: f64,
    snap_error: f64,
    commutation_error: f64,
    path: Vec<Vec<f64>>,
}

pub fn plan(g: &Global, file: &Path) -> Result<String> {
    let (inst, config) = load(g, file)?;
    let traj = inst.trajectory().map_err(numeric_error)?;
    let seq = inst.sequence().map_err(numeric_error)?;
    let planner = DetourPlanner { margin: inst.settings.margin };
    let planned = plan_with_moving_obstacles(&seq, &traj, &planner, &config, inst.settings.samples_per_leg)
        .map_err(numeric_error)?;
    // the two routes to stationary data must agree at the visiting times
    let via_f = map_f(&planned.path, &planned.field).map_err(numeric_error)?.sample(seq.s()).map_err(numeric_error)?;
    let commutation_error = via_f
        .configs()
        .iter()
        .zip(planned.stationary_sequence.configs())
        .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| conftc_dist(x, y)))
        .fold(0.0, f64::max);
    if commutation_error > config.tol_inv {
        return Err(Failure(format!("commutation error {commutation_error:.3e} exceeds {:.3e}", config.tol_inv)).into());
    }
    let dim = traj.dim();
    if g.json {
        let path = planned
            .path
            .samples()
            .iter()
            .enumerate()
            .map(|(k, c)| std::iter::once(planned.path.time(k)).chain(c.iter().flat_map(|x| coords(x, dim))).collect())
            .collect();
        return to_json(&PlanReport {
            samples: planned.report.samples,
            min_clearance: planned.report.min_clearance,
            max_visit_error: planned.report.max_visit_error,
            snap_error: planned.snap_error,
            commutation_error,
            path,
        });
    }
    let mut out = format_path_table(&planned.path);
    writeln!(out, "# verified: {} samples, min clearance {:.6}", planned.report.samples, planned.report.min_clearance)?;
    writeln!(out, "# visits exact at t = (i-1)/(s-1); snap correction {:.3e}", planned.snap_error)?;
    writeln!(out, "# commutation error {commutation_error:.3e}")?;
    Ok(out)
}
