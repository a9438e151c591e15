//! Experiment runner: resolves a config into registry objects, executes
//! the requested checks in canonical pipeline order, and isolates each
//! stage so one broken check never hides its siblings.

use std::time::Instant;

use serde_json::json;

use crate::config::ExperimentConfig;
use crate::criteria::{
    hayman_verify, thm11_maxmin, thm5_verify, thm8_index_bound, thm8_ratio,
};
use crate::dirderiv::QuadratureSpec;
use crate::error::{Error, Result};
use crate::funcs::{registry_get, AnalyticMap};
use crate::geometry::{Direction, Point, C64};
use crate::growth::{
    growth_verify, hypothesis_decay_sup, limsup_sequence, ratio_curve, ray,
};
use crate::index::{global_index_estimate, IndexOutcome};
use crate::lfield::{check_condition2, estimate_lambda, lfield_registry, DiscSampling, LField};
use crate::pde::{remark4_pde, thm13_harness, thm13_stage_map};
use crate::report::{
    CheckResult, CheckStatus, GrowthCheckDetails, LclassCheckDetails, RunReport,
};
use crate::sampling::{BallGridSpec, SliceGrid};
use crate::zeros::{thm12_counting, thm12_logderiv};

/// Everything a stage needs, resolved once per run.
pub struct RunContext {
    pub cfg: ExperimentConfig,
    pub f: AnalyticMap,
    pub l: LField,
    pub b: Direction,
    pub ball: BallGridSpec,
    pub slices: SliceGrid,
    pub spec: QuadratureSpec,
    n_hat: Option<usize>,
    p1_emp: Option<f64>,
}

/// Resolves registry names, the direction, and the grids.
pub fn build_context(cfg: &ExperimentConfig) -> Result<RunContext> {
    cfg.validate()?;
    let b = Direction::new(
        cfg.direction
            .iter()
            .map(|p| C64::new(p[0], p[1]))
            .collect(),
    )?;
    let f = registry_get(&cfg.function.name, &cfg.function.params)?;
    if f.dimension() != b.dim() {
        return Err(Error::Config {
            field: "direction".into(),
            message: format!(
                "direction has {} components but {} needs {}",
                b.dim(),
                f.name(),
                f.dimension()
            ),
        });
    }
    let l = lfield_registry(&cfg.lfield.name, &cfg.lfield.params, cfg.beta, &b)?;
    let spec = QuadratureSpec {
        nodes: cfg.quadrature.nodes,
        max_order: cfg.quadrature.max_order,
        ..Default::default()
    };
    spec.validate()?;
    let scale = cfg.grid.scale;
    let scaled = |base: usize| ((base as f64 * scale).round() as usize).max(4);
    let ball = BallGridSpec::standard(scale, cfg.seed);
    let slice_base = BallGridSpec::small(scaled(cfg.grid.slice_points), cfg.seed ^ 1);
    let slices = SliceGrid::through_points(
        &slice_base.points(f.dimension()),
        &b,
        cfg.grid.t_per_slice.max(2),
    );
    Ok(RunContext {
        cfg: cfg.clone(),
        f,
        l,
        b,
        ball,
        slices,
        spec,
        n_hat: None,
        p1_emp: None,
    })
}

/// Runs every requested check in canonical order. Stage errors become
/// `CheckStatus::Error` entries; only config resolution aborts the run.
pub fn run(cfg: &ExperimentConfig) -> Result<RunReport> {
    let mut ctx = build_context(cfg)?;
    let mut report = RunReport::new(cfg.clone());
    for name in cfg.ordered_criteria() {
        let started = Instant::now();
        let check = run_check(&mut ctx, &name).unwrap_or_else(|e| CheckResult {
            check: name.clone(),
            status: CheckStatus::Error,
            message: e.to_string(),
            details: serde_json::Value::Null,
        });
        report.timings.push((name.clone(), started.elapsed()));
        report.checks.push(check);
    }
    Ok(report)
}

fn to_details<T: serde::Serialize>(value: &T) -> Result<serde_json::Value> {
    serde_json::to_value(value).map_err(|e| Error::Config {
        field: "<details>".into(),
        message: e.to_string(),
    })
}

/// The measured global index, computed at most once per run.
fn ensure_n_hat(ctx: &mut RunContext) -> Result<usize> {
    if let Some(n) = ctx.n_hat {
        return Ok(n);
    }
    let est = global_index_estimate(
        &ctx.f,
        &ctx.l,
        &ctx.b,
        &ctx.ball,
        ctx.cfg.m_max,
        &ctx.spec,
    )?;
    match est.n_global {
        IndexOutcome::Determined(n) => {
            ctx.n_hat = Some(n);
            Ok(n)
        }
        IndexOutcome::NotDetermined => Err(Error::BudgetExceeded {
            detail: "global index undetermined on the configured grid".into(),
        }),
    }
}

fn run_check(ctx: &mut RunContext, name: &str) -> Result<CheckResult> {
    match name {
        "lclass" => lclass_check(ctx),
        "index" => index_check(ctx),
        "thm5" => thm5_check(ctx),
        "hayman" => hayman_check(ctx),
        "thm8" => thm8_check(ctx),
        "thm11" => thm11_check(ctx),
        "zeros" => zeros_check(ctx),
        "growth" => growth_check(ctx),
        "pde" => pde_check(ctx),
        other => Err(Error::Config {
            field: "criteria".into(),
            message: format!("unknown criterion {other:?}"),
        }),
    }
}

fn lclass_check(ctx: &mut RunContext) -> Result<CheckResult> {
    let points = ctx.ball.points(ctx.f.dimension());
    let violations = check_condition2(&ctx.l, &ctx.b, &points);
    let mut lambdas = Vec::new();
    for eta in [0.25, 0.5, 1.0, 2.0] {
        if eta <= ctx.l.beta() {
            lambdas.push(estimate_lambda(
                &ctx.l,
                &ctx.b,
                eta,
                &ctx.slices,
                &DiscSampling::default(),
            )?);
        }
    }
    let lambdas_ok = lambdas
        .iter()
        .all(|e| e.lambda1 > 0.0 && e.lambda2.is_finite() && e.lambda1 <= e.lambda2);
    let details = LclassCheckDetails {
        condition2_violations: violations.len(),
        points_checked: points.len(),
        violation_samples: violations.iter().take(5).map(|v| v.z.clone()).collect(),
        lambdas,
    };
    let passed = violations.is_empty() && lambdas_ok;
    Ok(CheckResult {
        check: "lclass".into(),
        status: if passed {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        message: if violations.is_empty() {
            "weight satisfies the growth condition on the grid".into()
        } else {
            format!(
                "{} of {} grid points violate the growth condition",
                violations.len(),
                points.len()
            )
        },
        details: to_details(&details)?,
    })
}

fn index_check(ctx: &mut RunContext) -> Result<CheckResult> {
    let est = global_index_estimate(
        &ctx.f,
        &ctx.l,
        &ctx.b,
        &ctx.ball,
        ctx.cfg.m_max,
        &ctx.spec,
    )?;
    let (status, message) = match est.n_global {
        IndexOutcome::Determined(n) => {
            ctx.n_hat = Some(n);
            (
                CheckStatus::Pass,
                format!(
                    "global index {n} ({} of {} points undetermined)",
                    est.not_determined, est.points_evaluated
                ),
            )
        }
        IndexOutcome::NotDetermined => (
            CheckStatus::Fail,
            "no grid point certified an index at the trusted truncation".into(),
        ),
    };
    Ok(CheckResult {
        check: "index".into(),
        status,
        message,
        details: to_details(&est)?,
    })
}

fn thm5_check(ctx: &mut RunContext) -> Result<CheckResult> {
    let rep = thm5_verify(
        &ctx.f,
        &ctx.l,
        &ctx.b,
        ctx.cfg.eta,
        &ctx.slices,
        ctx.cfg.m_max,
        &ctx.spec,
    )?;
    ctx.p1_emp = rep.constant("P1");
    let passed = rep.passed;
    let message = format!(
        "local-maximum criterion: P1 = {:.6e}, n0 = {}",
        rep.constant("P1").unwrap_or(f64::NAN),
        rep.constant("n0").unwrap_or(f64::NAN)
    );
    Ok(CheckResult {
        check: "thm5".into(),
        status: if passed {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        message,
        details: to_details(&rep)?,
    })
}

fn hayman_check(ctx: &mut RunContext) -> Result<CheckResult> {
    let p = ensure_n_hat(ctx)?;
    let rep = hayman_verify(
        &ctx.f,
        &ctx.l,
        &ctx.b,
        p,
        ctx.cfg.hayman_c,
        &ctx.ball,
        &ctx.spec,
    )?;
    let min_c = rep.constant("min_C").unwrap_or(f64::NAN);
    let message = format!(
        "derivative bound at p = {p}: smallest C = {min_c:.6e} (asked {})",
        ctx.cfg.hayman_c
    );
    Ok(CheckResult {
        check: "hayman".into(),
        status: if rep.passed {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        message,
        details: to_details(&rep)?,
    })
}

fn thm8_check(ctx: &mut RunContext) -> Result<CheckResult> {
    let [r1, r2] = ctx.cfg.thm8_radii;
    if ctx.p1_emp.is_none() {
        let rep = thm5_verify(
            &ctx.f,
            &ctx.l,
            &ctx.b,
            ctx.cfg.eta,
            &ctx.slices,
            ctx.cfg.m_max,
            &ctx.spec,
        )?;
        ctx.p1_emp = rep.constant("P1");
    }
    let p1 = ctx.p1_emp.unwrap_or(f64::NAN).max(1.0);
    let bound = thm8_index_bound(r1, r2, p1)?;
    let mut sup_ratio = 0.0f64;
    let mut sampled = 0usize;
    let mut escaped = 0usize;
    for (z0, t0) in ctx.slices.pairs() {
        match thm8_ratio(&ctx.f, &ctx.l, &ctx.b, r1, r2, z0, t0) {
            Ok(v) => {
                sup_ratio = sup_ratio.max(v);
                sampled += 1;
            }
            Err(Error::CircleEscapesDomain { .. }) => escaped += 1,
            Err(e) => return Err(e),
        }
    }
    let floor = bound.floor();
    let consistent = ctx
        .n_hat
        .map_or(true, |n| floor >= n as f64 || !bound.is_finite());
    let passed = bound.is_finite() && sup_ratio.is_finite() && consistent;
    let details = json!({
        "r1": r1,
        "r2": r2,
        "p1_empirical": p1,
        "index_bound": bound,
        "index_bound_floor": floor,
        "sup_ratio": sup_ratio,
        "pairs_sampled": sampled,
        "pairs_escaped": escaped,
        "measured_index": ctx.n_hat,
    });
    let message = if sampled == 0 {
        format!(
            "no circle pair with r2 = {r2} fits any sampled slice; index bound {bound:.3} (floor {floor})"
        )
    } else {
        format!(
            "two-circle ratio sup = {sup_ratio:.6e} over {sampled} pairs, index bound {bound:.3} (floor {floor})"
        )
    };
    Ok(CheckResult {
        check: "thm8".into(),
        status: if passed {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        message,
        details,
    })
}

fn thm11_check(ctx: &mut RunContext) -> Result<CheckResult> {
    let big_r = ctx.l.beta().min(1.0);
    let mut rows = Vec::new();
    let mut skipped = 0usize;
    for entry in ctx.slices.entries.iter().take(6) {
        match thm11_maxmin(
            &ctx.f,
            &ctx.l,
            &ctx.b,
            big_r,
            &entry.z0,
            C64::new(0.0, 0.0),
            24,
            &ctx.spec,
        ) {
            Ok((r_star, ratio)) => rows.push(json!({
                "z0": entry.z0.to_pairs(),
                "r_star": r_star,
                "ratio": ratio,
            })),
            Err(Error::CircleEscapesDomain { .. }) | Err(Error::AllCirclesDegenerate) => {
                skipped += 1;
            }
            Err(e) => return Err(e),
        }
    }
    let worst = rows
        .iter()
        .filter_map(|r| r["ratio"].as_f64())
        .fold(0.0f64, f64::max);
    let passed = !rows.is_empty() && worst.is_finite();
    Ok(CheckResult {
        check: "thm11".into(),
        status: if passed {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        message: format!(
            "max/min circle ratio bounded at some radius on {} slices (worst {worst:.6e}, {skipped} skipped)",
            rows.len()
        ),
        details: json!({ "big_r": big_r, "slices": rows, "skipped": skipped }),
    })
}

fn zeros_check(ctx: &mut RunContext) -> Result<CheckResult> {
    let r = ctx.cfg.exclusion_radius;
    let logderiv = thm12_logderiv(&ctx.f, &ctx.l, &ctx.b, r, &ctx.slices, &ctx.spec)?;
    let counting = thm12_counting(&ctx.f, &ctx.l, &ctx.b, r, &ctx.slices, &ctx.spec)?;
    let passed = logderiv.passed && counting.passed;
    let message = format!(
        "log-derivative P = {:.6e} over {} survivors; max zero count {}",
        logderiv.constant("P").unwrap_or(f64::NAN),
        logderiv.constant("survivors").unwrap_or(f64::NAN),
        counting.constant("n_tilde").unwrap_or(f64::NAN)
    );
    Ok(CheckResult {
        check: "zeros".into(),
        status: if passed {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        message,
        details: json!({ "logderiv": logderiv, "counting": counting }),
    })
}

fn growth_check(ctx: &mut RunContext) -> Result<CheckResult> {
    let n_used = match ctx.cfg.growth.n_override {
        Some(n) => n,
        None => ensure_n_hat(ctx)?,
    };
    let z0 = Point::origin(ctx.f.dimension());
    let rays = ctx.cfg.growth.rays.max(1);
    let radii = ctx.cfg.growth.radii.max(2);
    let p = ctx.cfg.growth.p;
    let mut reports = Vec::with_capacity(rays);
    let mut thetas = Vec::with_capacity(rays);
    let mut curves = Vec::with_capacity(rays);
    let mut ratio_radii = Vec::new();
    let mut limsup_max = f64::NEG_INFINITY;
    let mut hyp_max = 0.0f64;
    let mut min_margin = f64::INFINITY;
    for i in 0..rays {
        let theta = std::f64::consts::TAU * i as f64 / rays as f64;
        let ry = ray(&z0, &ctx.b, theta)?;
        let r_grid: Vec<f64> = (1..=radii)
            .map(|j| ry.exit * j as f64 / (radii + 1) as f64)
            .collect();
        let mut rep = growth_verify(
            &ctx.f, &ctx.l, &ctx.b, &ry, &r_grid, p, n_used, &ctx.spec,
        )?;
        let rs = limsup_sequence(ry.exit, 24);
        let curve = ratio_curve(&ctx.f, &ctx.l, &ctx.b, &ry, &rs)?;
        let tail = (3 * curve.len()) / 4;
        let limsup = curve[tail..]
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        let hyp = hypothesis_decay_sup(&ctx.l, &ctx.b, &ry, &rs);
        rep.limsup = Some(limsup);
        rep.hypothesis_sup = Some(hyp);
        min_margin = rep.margins.iter().copied().fold(min_margin, f64::min);
        limsup_max = limsup_max.max(limsup);
        hyp_max = hyp_max.max(hyp);
        if ratio_radii.is_empty() {
            ratio_radii = rs;
        }
        reports.push(rep);
        thetas.push(theta);
        curves.push(curve);
    }
    let details = GrowthCheckDetails {
        rays: reports,
        thetas,
        ratio_radii,
        ratio_curves: curves,
        limsup_max,
        hypothesis_sup: hyp_max,
        n_used,
    };
    let passed = min_margin >= -1e-6 && limsup_max <= n_used as f64 + 1.0 + 0.05;
    Ok(CheckResult {
        check: "growth".into(),
        status: if passed {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        message: format!(
            "growth margins >= {min_margin:.3e}; limsup {limsup_max:.4} vs N+1 = {}",
            n_used + 1
        ),
        details: to_details(&details)?,
    })
}

fn pde_check(ctx: &mut RunContext) -> Result<CheckResult> {
    if ctx.cfg.pde.builtin != "remark4" {
        return Err(Error::Config {
            field: "pde.builtin".into(),
            message: format!(
                "unknown built-in equation {:?}; available: remark4",
                ctx.cfg.pde.builtin
            ),
        });
    }
    if ctx.f.dimension() != 2 {
        return Err(Error::Config {
            field: "pde.builtin".into(),
            message: "the remark4 equation lives in dimension 2".into(),
        });
    }
    let pde = remark4_pde()?;
    let scaled = ((ctx.cfg.grid.residual_points as f64 * ctx.cfg.grid.scale).round()
        as usize)
        .max(8);
    let ball = BallGridSpec::small(scaled, ctx.cfg.seed ^ 2);
    let rep = thm13_harness(
        &pde,
        &ctx.l,
        &ctx.b,
        &ctx.f,
        &ball,
        &ctx.slices,
        ctx.cfg.exclusion_radius,
        8,
        ctx.cfg.pde.residual_tolerance,
        &ctx.spec,
    )?;
    let stages = thm13_stage_map(&rep);
    let message = format!(
        "residual sup {:.3e} over {} points, T = {:.6e}, stages {}/4 passed",
        rep.max_residual,
        rep.residual_points,
        rep.condition43.t_hat,
        stages.values().filter(|v| **v).count()
    );
    let passed = rep.consistent;
    Ok(CheckResult {
        check: "pde".into(),
        status: if passed {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        message,
        details: json!({ "harness": rep, "stages": stages }),
    })
}
