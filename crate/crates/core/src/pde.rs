//! Directional linear PDE checks: residuals of candidate solutions, the
//! coefficient-domination condition, the log-derivative bound for a single
//! function, and the composite consistency harness tying them together.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criteria::WorstSample;
use crate::dirderiv::{dirderiv_sequence, QuadratureSpec};
use crate::error::{Error, Result};
use crate::funcs::AnalyticMap;
use crate::geometry::{Direction, Point, C64};
use crate::index::{global_index_estimate, IndexOutcome};
use crate::lfield::LField;
use crate::sampling::{BallGridSpec, SliceGrid};
use crate::zeros::{exceptional_contains, exceptional_set, grid_zero_sets};

/// g_0 d^p w / db^p + g_1 d^{p-1} w / db^{p-1} + ... + g_p w = h.
pub struct DirectionalPde {
    /// g_0 ..= g_p; the leading coefficient must not vanish identically.
    pub coeffs: Vec<AnalyticMap>,
    pub rhs: AnalyticMap,
    pub b: Direction,
}

impl DirectionalPde {
    pub fn new(coeffs: Vec<AnalyticMap>, rhs: AnalyticMap, b: Direction) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::Config {
                field: "coeffs".into(),
                message: format!(
                    "a directional equation needs order >= 1, got {} coefficients",
                    coeffs.len()
                ),
            });
        }
        let dim = rhs.dimension();
        if b.dim() != dim || coeffs.iter().any(|g| g.dimension() != dim) {
            return Err(Error::Config {
                field: "coeffs".into(),
                message: "coefficients, right side, and direction must share one dimension"
                    .into(),
            });
        }
        Ok(DirectionalPde { coeffs, rhs, b })
    }

    /// Order p of the equation.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn dimension(&self) -> usize {
        self.rhs.dimension()
    }
}

/// Residual sum_j g_j(z) d^{p-j} w / db^{p-j} (z) - h(z) of a candidate
/// solution at one point.
pub fn residual(
    pde: &DirectionalPde,
    w: &AnalyticMap,
    z: &Point,
    spec: &QuadratureSpec,
) -> Result<C64> {
    let p = pde.order();
    let derivs = dirderiv_sequence(w, z, &pde.b, C64::new(0.0, 0.0), p, spec, None)?;
    let mut acc = -pde.rhs.eval(z);
    for (j, g) in pde.coeffs.iter().enumerate() {
        acc += g.eval(z) * derivs[p - j];
    }
    Ok(acc)
}

/// Outcome of the coefficient-domination check: outside the exceptional
/// discs of the leading coefficient, |g_j| <= T L^j |g_0| for j = 1..=p.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Condition43Report {
    pub t_hat: f64,
    /// Empirical sup of the ratio per coefficient order j = 1..=p.
    pub per_order: Vec<f64>,
    pub survivors: usize,
    pub excluded: usize,
    pub samples: usize,
    pub passed: bool,
    pub worst: Option<WorstSample>,
}

/// Empirical T of the domination condition over a slice grid, excluding
/// the discs of radius r / L around zeros of g_0.
pub fn condition43_check(
    pde: &DirectionalPde,
    l: &LField,
    b: &Direction,
    r: f64,
    grid: &SliceGrid,
    spec: &QuadratureSpec,
) -> Result<Condition43Report> {
    let beta = l.beta();
    if !(r > 0.0 && r <= beta) {
        return Err(Error::EtaOutOfRange { eta: r, beta });
    }
    let _ = spec.validate()?;
    let p = pde.order();
    let g0 = &pde.coeffs[0];
    let zero_sets = grid_zero_sets(g0, b, grid, 1e-9)?;
    let mut t_hat = 0.0f64;
    let mut per_order = vec![0.0f64; p];
    let mut worst: Option<WorstSample> = None;
    let mut survivors = 0usize;
    let mut survivors_beta = 0usize;
    let mut excluded = 0usize;
    let mut passed = true;
    let mut samples = 0usize;
    for (entry, zs) in grid.entries.iter().zip(&zero_sets) {
        let e_r = exceptional_set(zs.clone(), r);
        let e_beta = exceptional_set(zs.clone(), beta);
        for &t in &entry.ts {
            samples += 1;
            if !exceptional_contains(&e_beta, &entry.z0, b, t, l) {
                survivors_beta += 1;
            }
            if exceptional_contains(&e_r, &entry.z0, b, t, l) {
                excluded += 1;
                continue;
            }
            survivors += 1;
            let z = entry.z0.translate(t, b);
            let g0v = g0.eval(&z).norm();
            if g0v <= 1e-300 {
                // Zero of g_0 that survived the exclusion: the zero search
                // missed it, so no finite T is certified.
                passed = false;
                continue;
            }
            let lv = l.eval(&z);
            let mut lpow = 1.0;
            for j in 1..=p {
                lpow *= lv;
                let ratio = pde.coeffs[j].eval(&z).norm() / (lpow * g0v);
                per_order[j - 1] = per_order[j - 1].max(ratio);
                if ratio > t_hat {
                    t_hat = ratio;
                    worst = Some(WorstSample {
                        z0: entry.z0.to_pairs(),
                        t0: [t.re, t.im],
                        value: ratio,
                    });
                }
            }
        }
    }
    if survivors_beta == 0 {
        return Err(Error::EmptyComplement);
    }
    Ok(Condition43Report {
        t_hat,
        per_order,
        survivors,
        excluded,
        samples,
        passed: passed && t_hat.is_finite(),
        worst,
    })
}

/// Outcome of the order-m log-derivative bound |d^m F / db^m| <= P L^m |F|
/// outside the exceptional discs of F itself.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Lemma6Report {
    pub p_hat: f64,
    pub order: usize,
    pub survivors: usize,
    pub excluded: usize,
    pub samples: usize,
    pub passed: bool,
    pub worst: Option<WorstSample>,
}

/// Empirical P of the order-m bound over a slice grid.
pub fn lemma6_check(
    f: &AnalyticMap,
    l: &LField,
    b: &Direction,
    r: f64,
    m: usize,
    grid: &SliceGrid,
    spec: &QuadratureSpec,
) -> Result<Lemma6Report> {
    let beta = l.beta();
    if !(r > 0.0 && r <= beta) {
        return Err(Error::EtaOutOfRange { eta: r, beta });
    }
    if m == 0 {
        return Err(Error::Config {
            field: "m".into(),
            message: "the derivative bound needs order m >= 1".into(),
        });
    }
    let zero_sets = grid_zero_sets(f, b, grid, 1e-9)?;
    let mut p_hat = 0.0f64;
    let mut worst: Option<WorstSample> = None;
    let mut survivors = 0usize;
    let mut survivors_beta = 0usize;
    let mut excluded = 0usize;
    let mut passed = true;
    let mut samples = 0usize;
    for (entry, zs) in grid.entries.iter().zip(&zero_sets) {
        let e_r = exceptional_set(zs.clone(), r);
        let e_beta = exceptional_set(zs.clone(), beta);
        for &t in &entry.ts {
            samples += 1;
            if !exceptional_contains(&e_beta, &entry.z0, b, t, l) {
                survivors_beta += 1;
            }
            if exceptional_contains(&e_r, &entry.z0, b, t, l) {
                excluded += 1;
                continue;
            }
            survivors += 1;
            let z = entry.z0.translate(t, b);
            let fv = f.eval(&z).norm();
            if fv <= 1e-300 {
                passed = false;
                continue;
            }
            let dm = dirderiv_sequence(f, &entry.z0, b, t, m, spec, Some(l))?[m].norm();
            let val = dm / (l.eval(&z).powi(m as i32) * fv);
            if val > p_hat {
                p_hat = val;
                worst = Some(WorstSample {
                    z0: entry.z0.to_pairs(),
                    t0: [t.re, t.im],
                    value: val,
                });
            }
        }
    }
    if survivors_beta == 0 {
        return Err(Error::EmptyComplement);
    }
    Ok(Lemma6Report {
        p_hat,
        order: m,
        survivors,
        excluded,
        samples,
        passed: passed && p_hat.is_finite(),
        worst,
    })
}

/// Index outcome of one map in the harness, by coefficient name.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MapIndexSummary {
    pub name: String,
    pub outcome: IndexOutcome,
    pub not_determined_points: usize,
}

/// Composite verdict: coefficient indices, the domination constant, the
/// residual sweep, and the solution's own index.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Thm13Report {
    pub coefficient_indices: Vec<MapIndexSummary>,
    pub rhs_index: MapIndexSummary,
    pub condition43: Condition43Report,
    pub max_residual: f64,
    pub residual_points: usize,
    pub residual_tolerance: f64,
    pub solution_index: MapIndexSummary,
    /// True iff every stage passed: all maps of determined index, finite
    /// domination constant, residuals within tolerance.
    pub consistent: bool,
}

fn map_index(
    g: &AnalyticMap,
    l: &LField,
    b: &Direction,
    ball: &BallGridSpec,
    m_max: usize,
    spec: &QuadratureSpec,
) -> Result<MapIndexSummary> {
    // The zero map has index 0 by convention; the generic estimator cannot
    // certify a truncation for it because every scale is noise.
    let points = ball.points(g.dimension());
    if points.iter().all(|z| g.eval(z).norm() == 0.0) {
        return Ok(MapIndexSummary {
            name: g.name().to_string(),
            outcome: IndexOutcome::Determined(0),
            not_determined_points: 0,
        });
    }
    let est = global_index_estimate(g, l, b, ball, m_max, spec)?;
    Ok(MapIndexSummary {
        name: g.name().to_string(),
        outcome: est.n_global,
        not_determined_points: est.not_determined,
    })
}

/// Runs the four stages of the consistency harness: indices of the data,
/// coefficient domination, residual sweep of the candidate solution, and
/// the solution's index.
#[allow(clippy::too_many_arguments)]
pub fn thm13_harness(
    pde: &DirectionalPde,
    l: &LField,
    b: &Direction,
    w: &AnalyticMap,
    ball: &BallGridSpec,
    slices: &SliceGrid,
    r: f64,
    m_max: usize,
    residual_tolerance: f64,
    spec: &QuadratureSpec,
) -> Result<Thm13Report> {
    let mut coefficient_indices = Vec::with_capacity(pde.coeffs.len());
    for g in &pde.coeffs {
        coefficient_indices.push(map_index(g, l, b, ball, m_max, spec)?);
    }
    let rhs_index = map_index(&pde.rhs, l, b, ball, m_max, spec)?;

    let condition43 = condition43_check(pde, l, b, r, slices, spec)?;

    let points = ball.points(pde.dimension());
    let residuals: Vec<Result<f64>> = points
        .par_iter()
        .map(|z| residual(pde, w, z, spec).map(|v| v.norm()))
        .collect();
    let mut max_residual = 0.0f64;
    for v in residuals {
        max_residual = max_residual.max(v?);
    }

    let solution_index = map_index(w, l, b, ball, m_max, spec)?;

    let data_bounded = coefficient_indices
        .iter()
        .chain(std::iter::once(&rhs_index))
        .all(|s| matches!(s.outcome, IndexOutcome::Determined(_)));
    let consistent = data_bounded
        && condition43.passed
        && max_residual <= residual_tolerance
        && matches!(solution_index.outcome, IndexOutcome::Determined(_));
    Ok(Thm13Report {
        coefficient_indices,
        rhs_index,
        condition43,
        max_residual,
        residual_points: points.len(),
        residual_tolerance,
        solution_index,
        consistent,
    })
}

/// Pretty map of the harness verdicts, used by reports.
pub fn thm13_stage_map(rep: &Thm13Report) -> BTreeMap<String, bool> {
    let mut m = BTreeMap::new();
    m.insert(
        "data_index_bounded".into(),
        rep.coefficient_indices
            .iter()
            .chain(std::iter::once(&rep.rhs_index))
            .all(|s| matches!(s.outcome, IndexOutcome::Determined(_))),
    );
    m.insert("condition43".into(), rep.condition43.passed);
    m.insert(
        "residual_within_tolerance".into(),
        rep.max_residual <= rep.residual_tolerance,
    );
    m.insert(
        "solution_index_bounded".into(),
        matches!(rep.solution_index.outcome, IndexOutcome::Determined(_)),
    );
    m
}

/// The order-1 homogeneous equation dw/db = 2 (z2 - z1) w along b = (1, 1)
/// whose normalized solution the registry ships.
pub fn remark4_pde() -> Result<DirectionalPde> {
    let g0 = AnalyticMap::from_fn("one", 2, |_| C64::new(1.0, 0.0));
    let g1 = AnalyticMap::from_fn("-2(z2-z1)", 2, |z| -2.0 * (z[1] - z[0]));
    let h = AnalyticMap::from_fn("zero", 2, |_| C64::new(0.0, 0.0));
    let b = Direction::new(vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)])?;
    DirectionalPde::new(vec![g0, g1], h, b)
}
