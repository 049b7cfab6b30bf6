//! Experiment dispatch: runs named checks against a fixture and collects the
//! verdicts into a versioned JSON report.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use prefmax_core::cone::{build_t, normal_membership, strict_normal_membership, BodyMode, DEFAULT_TOL};
use prefmax_core::descent::{
    gap_convergence_stat, quasi_fejer_check, run_descent, DescentConfig, DescentTrace, StepSchedule, Termination,
};
use prefmax_core::plastria::{nf_membership, zero_maximality_check};
use prefmax_core::point::same_point_set;
use prefmax_core::vip::{mvip_solutions, svip_inclusion_check, svip_solutions, uniqueness_check, VipKind};
use prefmax_core::{check_property, maxima, maximal_elements, GroundSet, Point, Property, Relation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::fixtures::{get_fixture, Fixture};
use crate::trace_io::emit_trace;
use crate::HarnessError;

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_SEED: u64 = 42;
/// Descent passes when the final iterate is this close to the reference.
pub const DESCENT_DIST_TOL: f64 = 0.01;
/// Descent passes when the tail gap statistic is at most this.
pub const DESCENT_GAP_TOL: f64 = 0.02;
const STRICT_MARGIN: f64 = 1e-7;
const CONE_PROBES: usize = 100;
const MAX_BASES: usize = 25;
const RANDOM_RELATIONS: usize = 100;
const RANDOM_RELATION_SIZE: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Maximal,
    Maxima,
    Properties,
    Cones,
    Nstar,
    SvipInclusion,
    Mvip,
    MvipEmpty,
    Uniqueness,
    ZeroMaximality,
    TransFip,
    PlastriaCone,
    Descent,
}

impl Check {
    pub const ALL: [Check; 13] = [
        Check::Maximal,
        Check::Maxima,
        Check::Properties,
        Check::Cones,
        Check::Nstar,
        Check::SvipInclusion,
        Check::Mvip,
        Check::MvipEmpty,
        Check::Uniqueness,
        Check::ZeroMaximality,
        Check::TransFip,
        Check::PlastriaCone,
        Check::Descent,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Maximal => "maximal",
            Check::Maxima => "maxima",
            Check::Properties => "properties",
            Check::Cones => "cones",
            Check::Nstar => "nstar",
            Check::SvipInclusion => "svip-inclusion",
            Check::Mvip => "mvip",
            Check::MvipEmpty => "mvip-empty",
            Check::Uniqueness => "uniqueness",
            Check::ZeroMaximality => "zero-maximality",
            Check::TransFip => "trans-fip",
            Check::PlastriaCone => "plastria-cone",
            Check::Descent => "descent",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Check::ALL.into_iter().find(|c| c.name() == s.trim()).ok_or_else(|| {
            let names: Vec<_> = Check::ALL.iter().map(|c| c.name()).collect();
            HarnessError::Config(format!("unknown check {s:?}; known checks: {}", names.join(", ")))
        })
    }
}

pub fn parse_suite(s: &str) -> Result<Vec<Check>, HarnessError> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(str::parse).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescentParams {
    /// Starting point; the fixture default when absent.
    pub x0: Option<Vec<f64>>,
    pub schedule: StepSchedule,
    pub max_iters: usize,
    /// Stop once `‖x_k*‖ ≤ eps`.
    pub eps: f64,
}

impl Default for DescentParams {
    fn default() -> Self {
        DescentParams { x0: None, schedule: StepSchedule::harmonic(1.0), max_iters: 10_000, eps: 0.0 }
    }
}

/// Everything a run needs. `suite: None` runs the fixture's default suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Experiment {
    pub command: String,
    pub fixture: String,
    pub suite: Option<Vec<Check>>,
    pub grid: Option<String>,
    pub tol: f64,
    pub seed: u64,
    pub descent: DescentParams,
    pub trace: Option<PathBuf>,
}

impl Experiment {
    pub fn new(fixture: impl Into<String>) -> Self {
        let fixture = fixture.into();
        Experiment {
            command: format!("check --fixture {fixture}"),
            fixture,
            suite: None,
            grid: None,
            tol: DEFAULT_TOL,
            seed: DEFAULT_SEED,
            descent: DescentParams::default(),
            trace: None,
        }
    }

    pub fn suite(mut self, checks: &[Check]) -> Self {
        self.suite = Some(checks.to_vec());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub check: String,
    /// Observed outcome matches the registered expectation.
    pub pass: bool,
    /// Raw outcome of the check before polarity is applied.
    pub holds: bool,
    pub expected: bool,
    pub detail: String,
    pub witness: Option<Vec<Point>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescentSummary {
    pub termination: Termination,
    pub steps: usize,
    pub final_point: Point,
    pub final_distance: Option<f64>,
    pub gap_stat: Option<f64>,
    pub quasi_fejer: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: String,
    pub fixture: String,
    pub seed: u64,
    pub tol: f64,
    pub verdicts: Vec<Verdict>,
    pub artifacts: Vec<PathBuf>,
    pub wall_time: f64,
    pub descent: Option<DescentSummary>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    /// 0 when every verdict passes, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn verdict(&self, check: Check) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.check == check.name())
    }
}

struct Outcome {
    holds: bool,
    detail: String,
    witness: Option<Vec<Point>>,
}

impl Outcome {
    fn new(holds: bool, detail: impl Into<String>, witness: Option<Vec<Point>>) -> Self {
        Outcome { holds, detail: detail.into(), witness }
    }
}

fn fmt_points(pts: &[Point]) -> String {
    const SHOWN: usize = 8;
    let head: Vec<String> = pts.iter().take(SHOWN).map(|p| p.to_string()).collect();
    let more = if pts.len() > SHOWN { format!(", … {} more", pts.len() - SHOWN) } else { String::new() };
    format!("{{{}{more}}}", head.join(", "))
}

fn capability(f: &Fixture, check: Check, reason: &str) -> HarnessError {
    HarnessError::Capability { fixture: f.name.to_string(), check: check.name().to_string(), reason: reason.to_string() }
}

fn validate_tol(tol: f64) -> Result<(), HarnessError> {
    if tol.is_finite() && tol >= 0.0 {
        Ok(())
    } else {
        Err(HarnessError::Config(format!("tolerance must be a finite non-negative number, got {tol}")))
    }
}

fn resolve_fixture(name: &str, grid: Option<&str>) -> Result<Fixture, HarnessError> {
    let f = get_fixture(name)?;
    match grid {
        Some(spec) => f.with_grid(spec),
        None => Ok(f.clone()),
    }
}

/// Validates the descriptor against the fixture, then runs the checks in
/// suite order. Configuration and capability problems are reported before
/// any check runs.
pub fn run_experiment(exp: &Experiment) -> Result<RunReport, HarnessError> {
    let start = Instant::now();
    validate_tol(exp.tol)?;
    let fixture = resolve_fixture(&exp.fixture, exp.grid.as_deref())?;
    let suite = exp.suite.clone().unwrap_or_else(|| fixture.default_suite.clone());
    if suite.is_empty() {
        return Err(HarnessError::Config("the check suite is empty".into()));
    }
    for &check in &suite {
        preflight(&fixture, check, exp)?;
    }
    let mut verdicts = Vec::with_capacity(suite.len());
    let mut artifacts = Vec::new();
    let mut descent = None;
    for &check in &suite {
        let outcome = if check == Check::Descent {
            let (outcome, summary, trace) = descent_check(&fixture, exp)?;
            if let Some(path) = &exp.trace {
                artifacts.push(emit_trace(&trace, path)?);
            }
            descent = Some(summary);
            outcome
        } else {
            run_check(&fixture, check, exp.tol, exp.seed)?
        };
        let expected = fixture.expects_pass(check);
        verdicts.push(Verdict {
            check: check.name().to_string(),
            pass: outcome.holds == expected,
            holds: outcome.holds,
            expected,
            detail: outcome.detail,
            witness: outcome.witness,
        });
    }
    Ok(RunReport {
        schema: SCHEMA_VERSION,
        command: exp.command.clone(),
        fixture: fixture.name.to_string(),
        seed: exp.seed,
        tol: exp.tol,
        verdicts,
        artifacts,
        wall_time: start.elapsed().as_secs_f64(),
        descent,
    })
}

fn preflight(f: &Fixture, check: Check, exp: &Experiment) -> Result<(), HarnessError> {
    match check {
        Check::Cones if f.cones.is_none() => Err(capability(f, check, "no closed-form cones registered")),
        Check::ZeroMaximality => {
            let gap = f.gap.as_ref().ok_or_else(|| capability(f, check, "no gap function registered"))?;
            if gap.flags().a && gap.flags().b {
                Ok(())
            } else {
                Err(capability(f, check, "the gap function does not satisfy assumptions (a) and (b)"))
            }
        }
        Check::PlastriaCone if f.gap.is_none() || f.nf_boundary.is_none() => {
            Err(capability(f, check, "needs a gap function with a closed-form N_f"))
        }
        Check::Properties if f.properties.is_empty() => Err(capability(f, check, "no property expectations registered")),
        Check::Descent => {
            if f.gap.is_none() {
                return Err(capability(f, check, "no gap function registered"));
            }
            if f.oracle.is_none() {
                return Err(capability(f, check, "no subgradient oracle registered"));
            }
            let p = &exp.descent;
            match (&p.x0, &f.default_x0) {
                (Some(x0), _) if x0.len() != f.relation.dim() => Err(HarnessError::Config(format!(
                    "--x0 has {} coordinates, fixture {} lives in dimension {}",
                    x0.len(),
                    f.name,
                    f.relation.dim()
                ))),
                (None, None) => Err(HarnessError::Config(format!("fixture {} has no default start; pass --x0", f.name))),
                _ => Ok(()),
            }?;
            if !(p.eps.is_finite() && p.eps >= 0.0) {
                return Err(HarnessError::Config(format!("--eps must be non-negative, got {}", p.eps)));
            }
            p.schedule.validate(p.max_iters).map_err(|e| HarnessError::Config(e.to_string()))
        }
        _ => Ok(()),
    }
}

fn run_check(f: &Fixture, check: Check, tol: f64, seed: u64) -> Result<Outcome, HarnessError> {
    let rel = &f.relation;
    let g = &f.ground;
    Ok(match check {
        Check::Maximal => set_outcome("ME", maximal_elements(rel, g)?, f.expected_maximal.as_deref()),
        Check::Maxima => set_outcome("maxima", maxima(rel, g)?, f.expected_maxima.as_deref()),
        Check::Properties => {
            let mut lines = Vec::new();
            let mut witness = None;
            let mut holds = true;
            for &(prop, want) in &f.properties {
                let report = check_property(rel, g, prop)?;
                lines.push(format!("{prop}={}", report.holds));
                if report.holds != want {
                    holds = false;
                    witness = witness.or(report.witness.clone());
                    lines.push(format!("(expected {want})"));
                }
            }
            Outcome::new(holds, lines.join(" "), witness)
        }
        Check::Cones => {
            let bases = f.bases(MAX_BASES);
            let bad = f.cone_mismatches(&bases, CONE_PROBES, tol, seed)?;
            let detail = format!("{} base points x {CONE_PROBES} probes, {} mismatches", bases.len(), bad.len());
            Outcome::new(bad.is_empty(), detail, bad.first().map(|(x, q)| vec![x.clone(), q.clone()]))
        }
        Check::Nstar => nstar_check(f, tol, seed)?,
        Check::SvipInclusion => {
            let body_at = |x: &Point| Ok(build_t(&f.cone_at(x, tol)?, f.body_mode));
            let report = svip_inclusion_check(rel, g, body_at, tol)?;
            let n = svip_solutions(body_at, g, tol)?.len();
            Outcome::new(report.holds, format!("{n} Stampacchia solutions"), report.witness)
        }
        Check::Mvip => {
            let me = maximal_elements(rel, g)?;
            let mv = mvip_solutions(|x: &Point| f.cone_at(x, tol), g, tol)?;
            Outcome::new(same_point_set(&me, &mv), format!("ME={} MVIP={}", fmt_points(&me), fmt_points(&mv)), Some(mv))
        }
        Check::MvipEmpty => {
            let mv = mvip_solutions(|x: &Point| f.cone_at(x, tol), g, tol)?;
            Outcome::new(mv.is_empty(), format!("MVIP={}", fmt_points(&mv)), (!mv.is_empty()).then_some(mv))
        }
        Check::Uniqueness => {
            let u = uniqueness_check(rel, |x: &Point| f.cone_at(x, tol), g, tol)?;
            let detail = format!("singleton={} ME=MVIP={}", u.singleton, u.coincide);
            Outcome::new(u.equivalence(), detail, Some(u.maximal))
        }
        Check::ZeroMaximality => {
            let gap = f.gap.as_ref().expect("preflight");
            let report = zero_maximality_check(gap, rel, g, tol)?;
            Outcome::new(report.holds, format!("{} grid points", g.len()), report.witness)
        }
        Check::TransFip => trans_fip(seed)?,
        Check::PlastriaCone => plastria_cone(f, tol)?,
        Check::Descent => unreachable!("descent is dispatched separately"),
    })
}

fn set_outcome(label: &str, found: Vec<Point>, expected: Option<&[Point]>) -> Outcome {
    let detail = format!("{label}={} ({} points)", fmt_points(&found), found.len());
    match expected {
        Some(want) => {
            let ok = same_point_set(&found, want);
            let detail = if ok { detail } else { format!("{detail}; expected {}", fmt_points(want)) };
            Outcome::new(ok, detail, Some(found))
        }
        None => Outcome::new(true, detail, Some(found)),
    }
}

/// `N(x) = N*(x) ∪ {0}` on random probes and the coordinate directions.
fn nstar_check(f: &Fixture, tol: f64, seed: u64) -> Result<Outcome, HarnessError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bases = f.bases(MAX_BASES);
    let dim = f.relation.dim();
    let mut probes: Vec<Point> = (0..dim).flat_map(|i| [Point::axis(dim, i, 1.0), Point::axis(dim, i, -1.0)]).collect();
    for _ in 0..CONE_PROBES {
        probes.push(Point::new((0..dim).map(|_| rng.random_range(-1.0..1.0)).collect())?);
    }
    let mut gaps = Vec::new();
    for x in &bases {
        let s = f.sampler.sample(&f.relation, x)?;
        for q in probes.iter().filter(|q| !q.is_zero()) {
            if normal_membership(&s, q, tol)? && !strict_normal_membership(&s, q, STRICT_MARGIN)? {
                gaps.push((x.clone(), q.clone()));
            }
        }
    }
    let detail = format!("{} base points, {} weak-but-not-strict normals", bases.len(), gaps.len());
    Ok(Outcome::new(gaps.is_empty(), detail, gaps.first().map(|(x, q)| vec![x.clone(), q.clone()])))
}

fn plastria_cone(f: &Fixture, tol: f64) -> Result<Outcome, HarnessError> {
    let gap = f.gap.as_ref().expect("preflight");
    let b = f.nf_boundary.expect("preflight");
    let bases = f.bases(MAX_BASES);
    let mut bad = Vec::new();
    for x in &bases {
        let s = f.sampler.sample(&f.relation, x)?;
        let edge = b(x[0]);
        let accept = nf_membership(gap, &s, &Point::scalar(edge)?, tol)?;
        let reject = !nf_membership(gap, &s, &Point::scalar(edge + 0.1)?, tol)?;
        if !(accept && reject) {
            bad.push(x.clone());
        }
    }
    let detail = format!("boundary accepted and boundary+0.1 rejected at {}/{} base points", bases.len() - bad.len(), bases.len());
    Ok(Outcome::new(bad.is_empty(), detail, (!bad.is_empty()).then_some(bad)))
}

/// Random tabular relations on 8 points (every other one transitively
/// closed): whenever transitivity and 2-FIP hold, FIP must too.
fn trans_fip(seed: u64) -> Result<Outcome, HarnessError> {
    let n = RANDOM_RELATION_SIZE;
    let line: Vec<Point> = (0..n).map(|i| Point::scalar(i as f64)).collect::<Result<_, _>>()?;
    let ground = GroundSet::explicit(line.clone())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut premise, mut counter) = (0, None);
    for case in 0..RANDOM_RELATIONS {
        let density: f64 = rng.random_range(0.2..0.9);
        let mut m: Vec<Vec<bool>> = (0..n).map(|_| (0..n).map(|_| rng.random_bool(density)).collect()).collect();
        if case % 2 == 0 {
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        if m[i][k] && m[k][j] {
                            m[i][j] = true;
                        }
                    }
                }
            }
        }
        let rel = Relation::tabular(line.clone(), m)?;
        if check_property(&rel, &ground, Property::Transitive)?.holds && check_property(&rel, &ground, Property::MFip(2))?.holds {
            premise += 1;
            let fip = check_property(&rel, &ground, Property::Fip)?;
            if !fip.holds && counter.is_none() {
                counter = Some((case, fip.witness));
            }
        }
    }
    let detail = format!("{RANDOM_RELATIONS} relations, {premise} transitive with 2-FIP");
    Ok(match counter {
        None => Outcome::new(true, detail, None),
        Some((case, w)) => Outcome::new(false, format!("{detail}; relation {case} lacks FIP"), w),
    })
}

fn descent_check(f: &Fixture, exp: &Experiment) -> Result<(Outcome, DescentSummary, DescentTrace), HarnessError> {
    let gap = f.gap.as_ref().expect("preflight");
    let oracle = f.oracle.as_ref().expect("preflight");
    let p = &exp.descent;
    let x0 = match &p.x0 {
        Some(c) => Point::new(c.clone())?,
        None => f.default_x0.clone().expect("preflight"),
    };
    let config = DescentConfig { max_iters: p.max_iters, stop_norm: p.eps, lipschitz: gap.lipschitz() };
    let trace = run_descent(|x: &Point| oracle(x), &x0, &p.schedule, &config, f.reference.as_ref(), Some(gap))?;
    let mut summary = DescentSummary {
        termination: trace.termination,
        steps: trace.steps(),
        final_point: trace.final_point().clone(),
        final_distance: None,
        gap_stat: None,
        quasi_fejer: None,
    };
    let outcome = match &f.reference {
        Some(r) => {
            let dist = trace.final_point().dist(r);
            let stat = gap_convergence_stat(&trace, gap, r)?;
            let fejer = quasi_fejer_check(&trace, r, gap.lipschitz());
            summary.final_distance = Some(dist);
            summary.gap_stat = Some(stat);
            summary.quasi_fejer = Some(fejer);
            let holds = dist <= DESCENT_DIST_TOL && stat <= DESCENT_GAP_TOL && fejer;
            let detail = format!(
                "{:?} after {} steps at {}: distance {dist:.3e}, gap {stat:.3e}, quasi-Fejer {fejer}",
                trace.termination,
                trace.steps(),
                trace.final_point()
            );
            Outcome::new(holds, detail, Some(vec![trace.final_point().clone()]))
        }
        None => {
            let holds = trace.termination == Termination::ZeroSubgradient;
            let detail = format!("{:?} after {} steps at {}", trace.termination, trace.steps(), trace.final_point());
            Outcome::new(holds, detail, Some(vec![trace.final_point().clone()]))
        }
    };
    Ok((outcome, summary, trace))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VipRequest {
    pub command: String,
    pub fixture: String,
    pub kind: VipKind,
    /// `None` keeps the fixture's registered map.
    pub mode: Option<VipMode>,
    pub grid: Option<String>,
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VipMode {
    T,
    G,
}

impl FromStr for VipMode {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "T" | "t" => Ok(VipMode::T),
            "G" | "g" => Ok(VipMode::G),
            _ => Err(HarnessError::Config(format!("--mode must be T or G, got {s:?}"))),
        }
    }
}

/// Enumerates Stampacchia or Minty solutions on the fixture grid and reports
/// them next to the maximal elements.
pub fn run_vip(req: &VipRequest) -> Result<RunReport, HarnessError> {
    let start = Instant::now();
    validate_tol(req.tol)?;
    let f = resolve_fixture(&req.fixture, req.grid.as_deref())?;
    let (rel, g, tol) = (&f.relation, &f.ground, req.tol);
    let me = maximal_elements(rel, g)?;
    let verdict = match req.kind {
        VipKind::Stampacchia => {
            let body_at = |x: &Point| {
                let mode = match req.mode {
                    None => f.body_mode,
                    Some(VipMode::T) => BodyMode::T,
                    Some(VipMode::G) => match f.body_mode {
                        g @ BodyMode::G { .. } => g,
                        BodyMode::T => {
                            BodyMode::G { empty_strict_contour: f.sampler.sample(rel, x)?.is_empty_contour() }
                        }
                    },
                };
                Ok(build_t(&f.cone_at(x, tol)?, mode))
            };
            let sv: Vec<Point> = svip_solutions(body_at, g, tol)?.into_iter().map(|c| c.solution).collect();
            let outside: Vec<Point> = sv.iter().filter(|x| !me.contains(x)).cloned().collect();
            let expected = f.expects_pass(Check::SvipInclusion);
            let holds = outside.is_empty();
            Verdict {
                check: Check::SvipInclusion.name().to_string(),
                pass: holds == expected,
                holds,
                expected,
                detail: format!("SVIP={} ({} points), ME={}", fmt_points(&sv), sv.len(), fmt_points(&me)),
                witness: Some(sv),
            }
        }
        VipKind::Minty => {
            let mv = mvip_solutions(|x: &Point| f.cone_at(x, tol), g, tol)?;
            let expected = f.expects_pass(Check::Mvip);
            let holds = same_point_set(&me, &mv);
            Verdict {
                check: Check::Mvip.name().to_string(),
                pass: holds == expected,
                holds,
                expected,
                detail: format!("MVIP={} ({} points), ME={}", fmt_points(&mv), mv.len(), fmt_points(&me)),
                witness: Some(mv),
            }
        }
    };
    Ok(RunReport {
        schema: SCHEMA_VERSION,
        command: req.command.clone(),
        fixture: f.name.to_string(),
        seed: DEFAULT_SEED,
        tol,
        verdicts: vec![verdict],
        artifacts: Vec::new(),
        wall_time: start.elapsed().as_secs_f64(),
        descent: None,
    })
}
