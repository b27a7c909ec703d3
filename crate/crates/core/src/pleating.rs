//! Bending bounds, complex shear, and rational pleating rays in a λ-slice.
//!
//! A pleating ray of slope `p/q` is the arc of the real locus of
//! `τ ↦ tr W_{p/q}` that leaves the Fuchsian line at the unique minimum
//! `τ*` of the trace and runs into the slice until `|tr| = 2`.

use std::f64::consts::PI;
use std::fmt;
use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::farey::{evaluate, Slope, SlopeTrace, Word, WordCache};
use crate::format::sig12;
use crate::groups::{build_group, gen_t, FNCoords};
use crate::moebius::Classification;
use crate::{Error, Result, C64};

/// Tolerance for treating `λ` as real.
const REAL_TOL: f64 = 1e-14;

/// `2 arccos(tanh λ)`, the largest bending angle certified tame.
pub fn theta0(lambda: f64) -> Result<f64> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::Domain(format!("theta0 needs λ > 0, got {lambda}")));
    }
    Ok(2.0 * lambda.tanh().acos())
}

fn real_lambda(coords: &FNCoords) -> Result<f64> {
    if coords.lambda.im.abs() > REAL_TOL {
        return Err(Error::Domain(format!("λ = {} is not real", coords.lambda)));
    }
    Ok(coords.lambda.re)
}

/// `|Im τ| < θ₀(λ)`. A `true` answer certifies the group quasi-Fuchsian; `false`
/// says nothing.
pub fn is_tame(coords: &FNCoords) -> Result<bool> {
    Ok(coords.tau.im.abs() < theta0(real_lambda(coords)?)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShearValue {
    pub sigma: C64,
}

/// Complex shear along `S` with respect to `T`: `σ = τ` when bent upward,
/// `σ = −τ` when bent downward.
pub fn complex_shear(coords: &FNCoords) -> Result<ShearValue> {
    let lambda = real_lambda(coords)?;
    let tau = coords.tau;
    if tau.im == 0.0 {
        return Err(Error::FuchsianInput);
    }
    let sigma = if tau.im > 0.0 { tau } else { -tau };
    debug_assert!({
        let t = gen_t(coords.lambda, tau)?;
        let rhs = t.trace() * lambda.tanh() / 2.0;
        ((sigma / 2.0).cosh() - rhs).norm() <= 1e-12 * rhs.norm().max(1.0)
    });
    Ok(ShearValue { sigma })
}

/// Real `τ*` minimizing `tr W_s` along the Fuchsian line at real `λ`.
pub fn fuchsian_footpoint(lambda: f64, s: Slope) -> Result<f64> {
    if lambda.is_nan() || lambda <= 0.0 {
        return Err(Error::Domain(format!(
            "footpoint needs λ > 0, got {lambda}"
        )));
    }
    if s.is_infinite() {
        return Err(Error::Domain(
            "the trace of W_∞ is constant on the slice".into(),
        ));
    }
    footpoint_of(&SlopeTrace::new(s, C64::new(lambda, 0.0))?)
}

fn footpoint_of(st: &SlopeTrace) -> Result<f64> {
    let s = st.slope();
    let lambda = st.lambda().re;
    let f = |x: f64| st.value(C64::new(x, 0.0)).re;
    let limit = 2.0 * s.complexity() as f64 * lambda + 10.0;
    let center = (-2.0 * lambda * s.value()).clamp(-limit, limit);

    // scan a growing window until the discrete minimum is interior
    const N: usize = 64;
    let mut half = 1.0;
    let (mut a, mut c) = loop {
        let lo = (center - half).max(-limit);
        let hi = (center + half).min(limit);
        let h = (hi - lo) / N as f64;
        let vals: Vec<f64> = (0..=N).map(|i| f(lo + i as f64 * h)).collect();
        let i = (0..=N)
            .min_by(|&i, &j| vals[i].total_cmp(&vals[j]))
            .expect("non-empty scan");
        let interior = (i > 0 || lo <= -limit) && (i < N || hi >= limit);
        if interior && vals[i].is_finite() {
            break (
                (lo + i.saturating_sub(1) as f64 * h),
                (lo + (i + 1).min(N) as f64 * h),
            );
        }
        if lo <= -limit && hi >= limit {
            return Err(Error::SearchFailure(s));
        }
        half *= 2.0;
    };

    // golden section
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = c - g * (c - a);
    let mut x2 = a + g * (c - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while c - a > 1e-9 * (1.0 + a.abs()) {
        if f1 < f2 {
            c = x2;
            (x2, f2) = (x1, f1);
            x1 = c - g * (c - a);
            f1 = f(x1);
        } else {
            a = x1;
            (x1, f1) = (x2, f2);
            x2 = a + g * (c - a);
            f2 = f(x2);
        }
    }
    let mut x = (a + c) / 2.0;

    // Newton on the derivative
    for _ in 0..20 {
        let (_, d1, d2) = st.jet(C64::new(x, 0.0));
        if d2.re.is_nan() || d2.re <= 0.0 {
            break;
        }
        let dx = d1.re / d2.re;
        x -= dx;
        if dx.abs() <= 1e-16 * x.abs().max(1.0) {
            break;
        }
    }
    let (v, d1, _) = st.jet(C64::new(x, 0.0));
    if !x.is_finite() || d1.norm() >= 1e-10 * v.norm().max(1.0) {
        return Err(Error::SearchFailure(s));
    }
    Ok(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Top,
    Bottom,
}

impl Side {
    fn sign(self) -> f64 {
        match self {
            Side::Top => 1.0,
            Side::Bottom => -1.0,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Top => "top",
            Side::Bottom => "bottom",
        })
    }
}

/// Continuation controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RayConfig {
    /// Maximum arclength step in the τ-plane.
    pub step: f64,
    /// Newton tolerance on `Im tr`, relative to `max(1, |tr|)`.
    pub corrector_tol: f64,
    /// Tolerance on `|tr| − 2` at the endpoint.
    pub endpoint_tol: f64,
}

impl Default for RayConfig {
    fn default() -> Self {
        RayConfig {
            step: 0.01,
            corrector_tol: 1e-10,
            endpoint_tol: 1e-9,
        }
    }
}

impl RayConfig {
    /// Default tolerances with step `min(0.01, θ₀/100)`.
    pub fn for_lambda(lambda: f64) -> Result<RayConfig> {
        Ok(RayConfig {
            step: (theta0(lambda)? / 100.0).min(0.01),
            ..Default::default()
        })
    }

    fn validate(&self) -> Result<()> {
        let ok = |x: f64| x > 0.0 && x.is_finite();
        if ok(self.step) && ok(self.corrector_tol) && ok(self.endpoint_tol) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "step and tolerances must be positive: {self:?}"
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RaySample {
    pub tau: C64,
    pub tr: C64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PleatingRay {
    pub slope: Slope,
    pub lambda: f64,
    pub side: Side,
    /// From the footpoint to the endpoint, in arclength order.
    pub samples: Vec<RaySample>,
    pub footpoint: f64,
    pub endpoint: C64,
}

pub const CSV_HEADER: &str = "p,q,side,re_tau,im_tau,re_tr,im_tr";

impl PleatingRay {
    pub fn csv_rows(&self) -> impl Iterator<Item = String> + '_ {
        self.samples.iter().map(move |s| {
            format!(
                "{},{},{},{},{},{},{}",
                self.slope.p(),
                self.slope.q(),
                self.side,
                sig12(s.tau.re),
                sig12(s.tau.im),
                sig12(s.tr.re),
                sig12(s.tr.im)
            )
        })
    }

    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        for row in self.csv_rows() {
            writeln!(out, "{row}")?;
        }
        Ok(())
    }

    /// Unit tangent of the first segment leaving the footpoint.
    pub fn initial_tangent(&self) -> Option<C64> {
        let d = self.samples.get(1)?.tau - self.samples.first()?.tau;
        (d.norm() > 0.0).then(|| d / d.norm())
    }
}

/// Strip of the τ-plane a ray must stay inside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauDomain {
    pub re_min: f64,
    pub re_max: f64,
    /// Open bound on `|Im τ|`, at most `π`.
    pub im_max: f64,
}

impl Default for TauDomain {
    fn default() -> Self {
        TauDomain {
            re_min: -1e3,
            re_max: 1e3,
            im_max: PI,
        }
    }
}

impl TauDomain {
    fn contains(&self, tau: C64) -> bool {
        tau.re >= self.re_min && tau.re <= self.re_max && tau.im.abs() < self.im_max
    }
}

/// Traces the pleating ray of slope `s` on the given side of the Fuchsian line.
pub fn trace_ray(lambda: f64, s: Slope, side: Side, cfg: &RayConfig) -> Result<PleatingRay> {
    trace_in(lambda, s, side, cfg, &TauDomain::default(), None)
}

struct Tracer<'a> {
    st: &'a SlopeTrace,
    cfg: &'a RayConfig,
}

impl Tracer<'_> {
    /// Newton on `Im tr` along the normal `n` through `start`.
    fn correct(&self, start: C64, n: C64) -> Option<(C64, C64)> {
        let mut tau = start;
        for _ in 0..30 {
            let (v, d1, _) = self.st.jet(tau);
            if v.im.abs() <= self.cfg.corrector_tol * v.norm().max(1.0) {
                return Some((tau, v));
            }
            let slope = (d1 * n).im;
            if slope == 0.0 || !slope.is_finite() {
                return None;
            }
            tau -= n * (v.im / slope);
        }
        None
    }

    fn tangent(&self, tau: C64, prev: C64) -> Result<C64> {
        let (v, d1, _) = self.st.jet(tau);
        if d1.norm() <= 1e-13 * v.norm().max(1.0) {
            return Err(Error::SingularRay { tau, trace: v });
        }
        let t = d1.conj() / d1.norm();
        Ok(if (t * prev.conj()).re < 0.0 { -t } else { t })
    }
}

fn trace_in(
    lambda: f64,
    s: Slope,
    side: Side,
    cfg: &RayConfig,
    domain: &TauDomain,
    word: Option<Word>,
) -> Result<PleatingRay> {
    cfg.validate()?;
    theta0(lambda)?;
    if s.is_infinite() {
        return Err(Error::Domain("no pleating ray for slope ∞".into()));
    }
    let lam = C64::new(lambda, 0.0);
    let st = match word {
        Some(w) => SlopeTrace::with_word(s, lam, w)?,
        None => SlopeTrace::new(s, lam)?,
    };
    let footpoint = footpoint_of(&st)?;
    let tracer = Tracer { st: &st, cfg };
    let start = C64::new(footpoint, 0.0);
    let mut samples = vec![RaySample {
        tau: start,
        tr: st.value(start),
    }];

    let min_step = cfg.step * 1e-9;
    let mut h = cfg.step * 1e-3;
    let mut dir = C64::new(0.0, side.sign());
    let mut tau = start;
    let max_samples = 10_000_000usize;

    loop {
        if samples.len() > max_samples {
            return Err(Error::LeftSlice { tau });
        }
        // predictor–corrector step, halving on failure
        let (next, tr) = loop {
            let predicted = tau + dir * h;
            if let Some(found) = tracer.correct(predicted, dir * C64::i()) {
                break found;
            }
            h /= 2.0;
            if h < min_step {
                return Err(Error::StepTooLarge { tau });
            }
        };
        if !domain.contains(next) || next.im * side.sign() <= 0.0 {
            return Err(Error::LeftSlice { tau: next });
        }
        let excess = tr.norm() - 2.0;
        if excess.abs() <= cfg.endpoint_tol {
            samples.push(RaySample { tau: next, tr });
            return Ok(finish(s, lambda, side, samples, footpoint));
        }
        if excess < 0.0 {
            let (end, tr_end) = bisect_endpoint(&tracer, tau, dir, h)?;
            samples.push(RaySample {
                tau: end,
                tr: tr_end,
            });
            return Ok(finish(s, lambda, side, samples, footpoint));
        }
        samples.push(RaySample { tau: next, tr });
        dir = tracer.tangent(next, dir)?;
        tau = next;
        h = (h * 2.0).min(cfg.step);
    }
}

fn finish(
    s: Slope,
    lambda: f64,
    side: Side,
    samples: Vec<RaySample>,
    footpoint: f64,
) -> PleatingRay {
    let endpoint = samples.last().expect("ray has samples").tau;
    PleatingRay {
        slope: s,
        lambda,
        side,
        samples,
        footpoint,
        endpoint,
    }
}

/// Bisects the step length from `tau` along `dir` so that `|tr| = 2` after
/// correction; the full step `h` is known to overshoot.
fn bisect_endpoint(tracer: &Tracer, tau: C64, dir: C64, h: f64) -> Result<(C64, C64)> {
    let n = dir * C64::i();
    let (mut lo, mut hi) = (0.0, h);
    let mut best = None;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let (p, v) = tracer
            .correct(tau + dir * mid, n)
            .ok_or(Error::StepTooLarge { tau })?;
        let excess = v.norm() - 2.0;
        if excess.abs() <= tracer.cfg.endpoint_tol {
            return Ok((p, v));
        }
        if excess > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        best = Some((p, v));
        if hi - lo <= f64::EPSILON * tau.norm().max(1.0) {
            break;
        }
    }
    match best {
        Some((p, v)) if (v.norm() - 2.0).abs() <= 10.0 * tracer.cfg.endpoint_tol => Ok((p, v)),
        _ => Err(Error::StepTooLarge { tau }),
    }
}

/// A fixed-λ slice with a set of rays to trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaSlice {
    pub lambda: f64,
    pub tau_domain: TauDomain,
    pub config: RayConfig,
}

/// One entry of [`LambdaSlice::trace_rays`].
#[derive(Debug, Clone, PartialEq)]
pub struct RayOutcome {
    pub slope: Slope,
    pub side: Side,
    pub result: Result<PleatingRay>,
}

impl LambdaSlice {
    pub fn new(lambda: f64) -> Result<LambdaSlice> {
        Ok(LambdaSlice {
            lambda,
            tau_domain: TauDomain::default(),
            config: RayConfig::for_lambda(lambda)?,
        })
    }

    pub fn with_config(lambda: f64, config: RayConfig) -> Result<LambdaSlice> {
        theta0(lambda)?;
        config.validate()?;
        Ok(LambdaSlice {
            lambda,
            tau_domain: TauDomain::default(),
            config,
        })
    }

    pub fn trace(&self, s: Slope, side: Side) -> Result<PleatingRay> {
        trace_in(self.lambda, s, side, &self.config, &self.tau_domain, None)
    }

    /// Traces every `(slope, side)` pair in parallel; the output is ordered
    /// slope-major, then by the order of `sides`.
    pub fn trace_rays(&self, slopes: &[Slope], sides: &[Side]) -> Vec<RayOutcome> {
        let cache = WordCache::new();
        let jobs: Vec<(Slope, Side)> = slopes
            .iter()
            .flat_map(|&s| sides.iter().map(move |&d| (s, d)))
            .collect();
        jobs.into_par_iter()
            .map(|(slope, side)| {
                let result = trace_in(
                    self.lambda,
                    slope,
                    side,
                    &self.config,
                    &self.tau_domain,
                    Some(cache.get(slope)),
                );
                RayOutcome {
                    slope,
                    side,
                    result,
                }
            })
            .collect()
    }
}

/// Outcome of the word sweep in [`qf_heuristic`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum QfVerdict {
    CertifiedTame,
    NoObstruction,
    EllipticWord { slope: Slope, word: String },
    ParabolicWord { slope: Slope, word: String },
}

fn sweep_slopes(max_len: i64) -> Vec<Slope> {
    let mut out: Vec<Slope> = Vec::new();
    if max_len >= 1 {
        out.push(Slope::INFINITY);
    }
    for q in 1..=max_len {
        let r = max_len - q;
        for p in -r..=r {
            if let Ok(s) = Slope::new(p, q) {
                if s.q() == q {
                    out.push(s);
                }
            }
        }
    }
    out.sort_by(|a, b| a.complexity().cmp(&b.complexity()).then(a.cmp(b)));
    out
}

/// Certifies tameness when possible; otherwise looks for elliptic Farey words
/// (which exclude the group from the slice) or parabolic ones (boundary).
pub fn qf_heuristic(coords: &FNCoords, max_len: i64) -> Result<QfVerdict> {
    if coords.lambda.im.abs() <= REAL_TOL && is_tame(coords)? {
        return Ok(QfVerdict::CertifiedTame);
    }
    let g = build_group(coords)?;
    let mut parabolic = None;
    for s in sweep_slopes(max_len) {
        let w = crate::farey::word(s);
        match evaluate(&w, &g).classify(1e-9) {
            Classification::Elliptic => {
                return Ok(QfVerdict::EllipticWord {
                    slope: s,
                    word: w.to_string(),
                })
            }
            Classification::Parabolic if parabolic.is_none() => {
                parabolic = Some(QfVerdict::ParabolicWord {
                    slope: s,
                    word: w.to_string(),
                })
            }
            _ => {}
        }
    }
    Ok(parabolic.unwrap_or(QfVerdict::NoObstruction))
}
