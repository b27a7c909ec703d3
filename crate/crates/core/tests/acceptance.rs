//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use qftorus::groups::NielsenMove;
use qftorus::{
    build_group, complex_shear, enumerate_slopes, from_endpoints, fuchsian_footpoint, gen_t,
    limit_points, maskit_limit_error, nielsen_move, normalize, plumbing_t, tame_mu_interval,
    trace_ray, w_coord, word, z_coord, FNCoords, Letter, MoebiusMap, RayConfig, RenderConfig, Side,
    Slope, SlopeTrace, Viewport, C64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = (bool, String);

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Deterministic coordinates with `Re λ ∈ (0.05, 3)`, `|Im λ| ≤ 1`, `|τ| ≤ 4`, `|Im τ| < π`.
fn sample_coords(rng: &mut ChaCha8Rng, real_lambda: bool) -> FNCoords {
    loop {
        let lambda = c(
            rng.gen_range(0.05..3.0),
            if real_lambda {
                0.0
            } else {
                rng.gen_range(-1.0..=1.0)
            },
        );
        let tau = c(rng.gen_range(-4.0..=4.0), rng.gen_range(-4.0..=4.0));
        if tau.norm() > 4.0 || tau.im.abs() >= PI {
            continue;
        }
        if let Ok(coords) = FNCoords::new(lambda, tau) {
            return coords;
        }
    }
}

fn samples(n: usize, seed: u64) -> Vec<FNCoords> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| sample_coords(&mut rng, false)).collect()
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let (ok, detail) = f();
    let elapsed = start.elapsed();
    match limit {
        Some(l) => (
            ok && elapsed < l,
            format!(
                "{detail}; {:.3}s (limit {:.0}s)",
                elapsed.as_secs_f64(),
                l.as_secs_f64()
            ),
        ),
        None => (ok, format!("{detail}; {:.3}s", elapsed.as_secs_f64())),
    }
}

fn commutator_parabolicity() -> Outcome {
    let mut worst: f64 = 0.0;
    for coords in samples(1000, 1) {
        let g = build_group(&coords).unwrap();
        let k = g.t.inverse() * g.s.inverse() * g.t * g.s;
        worst = worst.max((k.trace() + 2.0).norm());
    }
    (
        worst < 1e-10,
        format!("max |tr K + 2| = {worst:.3e} over 1000 samples"),
    )
}

fn coordinate_round_trip() -> Outcome {
    let mut worst: f64 = 0.0;
    for coords in samples(1000, 1) {
        let (l, t) = (coords.lambda, coords.tau);
        let expected = (l.cosh() * l.cosh(), t.exp());
        let n = normalize(&build_group(&coords).unwrap()).unwrap();
        let (x1, et) = from_endpoints(n.x1, n.x2).unwrap().h_image();
        let e1 = (x1 - expected.0).norm() / expected.0.norm().max(1.0);
        let e2 = (et - expected.1).norm() / expected.1.norm().max(1.0);
        worst = worst.max(e1).max(e2);
    }
    (
        worst < 1e-9,
        format!("max relative error {worst:.3e} over 1000 samples"),
    )
}

fn same_up_to_sign(a: C64, b: C64, tol: f64) -> bool {
    let scale = a.norm().max(b.norm()).max(1.0);
    (a - b).norm() <= tol * scale || (a + b).norm() <= tol * scale
}

fn nielsen_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut accepted = Vec::new();
    let mut drawn = 0;
    while accepted.len() < 100 {
        drawn += 1;
        let coords = sample_coords(&mut rng, false);
        let moved: Result<Vec<_>, _> = NielsenMove::ALL
            .iter()
            .map(|&m| nielsen_move(&coords, m))
            .collect();
        if let Ok(moved) = moved {
            accepted.push((coords, moved));
        }
    }
    let mut failures = 0;
    for (coords, moved) in &accepted {
        let g = build_group(coords).unwrap();
        for (mv, m) in NielsenMove::ALL.iter().zip(moved) {
            let (s, t) = mv.apply_to_pair(&g.s, &g.t);
            let matrix_level = [s.trace(), t.trace(), (s * t).trace()];
            let coord_level = build_group(m).unwrap().trace_triple();
            if !matrix_level
                .iter()
                .zip(&coord_level)
                .all(|(a, b)| same_up_to_sign(*a, *b, 1e-9))
            {
                failures += 1;
            }
        }
    }
    (
        failures == 0,
        format!("{failures} mismatches in 4×100 moves ({drawn} draws for 100 in-chart samples)"),
    )
}

fn integer_slope_sharpness() -> Outcome {
    let lambda = 2f64.ln();
    let target = 2.0 * 0.6f64.acos();
    let cfg = RayConfig::for_lambda(lambda).unwrap();
    let mut end_err: f64 = 0.0;
    let mut re_err: f64 = 0.0;
    for m in -2..=2i64 {
        for side in [Side::Top, Side::Bottom] {
            let ray = match trace_ray(lambda, Slope::integer(m), side, &cfg) {
                Ok(r) => r,
                Err(e) => return (false, format!("ray {m} {side} failed: {e}")),
            };
            for s in &ray.samples {
                re_err = re_err.max((s.tau.re + 2.0 * m as f64 * lambda).abs());
            }
            if m == 0 {
                end_err = end_err.max((ray.endpoint.im.abs() - target).abs());
            }
        }
    }
    (
        end_err < 1e-6 && re_err < 1e-6,
        format!("slope 0 endpoint error {end_err:.3e}, max |Re τ + 2mλ| = {re_err:.3e}"),
    )
}

fn slice_anchors() -> Outcome {
    let lambda = (1.25f64).acosh();
    let foot = fuchsian_footpoint(lambda, Slope::integer(0)).unwrap();
    let w = C64::i() * 2.0 * c(foot, 0.0).scale(0.5).cosh() / lambda.tanh();
    let anchor_err = (w - c(0.0, 10.0 / 3.0)).norm();
    let cfg = RayConfig::for_lambda(lambda).unwrap();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for s in enumerate_slopes(3, -2.0, 2.0) {
        for side in [Side::Top, Side::Bottom] {
            let ray = match trace_ray(lambda, s, side, &cfg) {
                Ok(r) => r,
                Err(e) => return (false, format!("ray {s} {side} failed: {e}")),
            };
            // tangent of the real locus at the first sample after the footpoint,
            // from the analytic derivative, oriented along the ray
            let d1 = SlopeTrace::new(s, c(lambda, 0.0))
                .unwrap()
                .jet(ray.samples[1].tau)
                .1;
            let mut t = d1.conj() / d1.norm();
            if (t * ray.initial_tangent().unwrap().conj()).re < 0.0 {
                t = -t;
            }
            let expected = if side == Side::Top {
                PI / 2.0
            } else {
                -PI / 2.0
            };
            worst = worst.max((t.arg() - expected).abs());
            count += 1;
        }
    }
    (
        anchor_err < 1e-12 && worst < 1e-3,
        format!("|w(τ*) − 10i/3| = {anchor_err:.3e}; max tangent angle deviation {worst:.3e} over {count} rays"),
    )
}

type M2 = [C64; 4];

fn mul(x: &M2, y: &M2) -> M2 {
    [
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ]
}

/// Brute-force trace of `W_s` on the Fuchsian line from the explicit generator formulas.
fn oracle_trace(s: Slope, lambda: f64, tau: f64) -> f64 {
    let ch = lambda.cosh();
    let sm: M2 = [c(ch, 0.0), c(ch + 1.0, 0.0), c(ch - 1.0, 0.0), c(ch, 0.0)];
    let si: M2 = [sm[3], -sm[1], -sm[2], sm[0]];
    let (k, kt) = (1.0 / (lambda / 2.0).tanh(), (lambda / 2.0).tanh());
    let (a, b) = ((tau / 2.0).cosh(), (tau / 2.0).sinh());
    let tm: M2 = [c(a * k, 0.0), c(-b, 0.0), c(-b, 0.0), c(a * kt, 0.0)];
    let ti: M2 = [tm[3], -tm[1], -tm[2], tm[0]];
    let mut acc: M2 = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
    for l in word(s).letters() {
        let m = match l {
            Letter::S => &sm,
            Letter::SInv => &si,
            Letter::T => &tm,
            Letter::TInv => &ti,
        };
        acc = mul(&acc, m);
    }
    (acc[0] + acc[3]).re.abs()
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    while b - a > 1e-11 {
        let (x1, x2) = (b - g * (b - a), a + g * (b - a));
        if f(x1) < f(x2) {
            b = x2;
        } else {
            a = x1;
        }
    }
    (a + b) / 2.0
}

fn footpoint_convexity() -> Outcome {
    let h = 1e-3;
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    for lambda in [0.3, 2f64.ln(), 1.5] {
        for s in enumerate_slopes(5, -1.0, 1.0) {
            let width = 2.0 * s.complexity() as f64 * lambda + 10.0;
            let n = (2.0 * width / h) as usize;
            let xs: Vec<f64> = (0..=n).map(|i| -width + i as f64 * h).collect();
            let vals: Vec<f64> = xs.iter().map(|&x| oracle_trace(s, lambda, x)).collect();
            let minima: Vec<usize> = (1..n)
                .filter(|&i| vals[i] < vals[i - 1] && vals[i] <= vals[i + 1])
                .collect();
            if minima.len() != 1 {
                return (
                    false,
                    format!("slope {s} at λ = {lambda}: {} local minima", minima.len()),
                );
            }
            let i = minima[0];
            let oracle = golden_min(|x| oracle_trace(s, lambda, x), xs[i - 1], xs[i + 1]);
            let found = match fuchsian_footpoint(lambda, s) {
                Ok(x) => x,
                Err(e) => return (false, format!("slope {s} at λ = {lambda}: {e}")),
            };
            worst = worst.max((found - oracle).abs());
            checked += 1;
        }
    }
    (
        worst < 1e-6,
        format!("{checked} slopes, one minimum each, max |τ* − oracle| = {worst:.3e}"),
    )
}

fn plumbing_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut worst, mut worst_rel, mut modulus): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for lambda in [0.3, 2f64.ln(), 2.0] {
        for _ in 0..100 {
            let tau = rng.gen_range(-3.0..3.0);
            let coords = FNCoords::new(c(lambda, 0.0), c(tau, 0.0)).unwrap();
            let t = plumbing_t(&coords).unwrap();
            let q = c(rng.gen_range(-3.0..3.0), rng.gen_range(0.05..3.0));
            let tq = gen_t(coords.lambda, coords.tau)
                .unwrap()
                .apply_finite(q)
                .unwrap();
            let lhs = z_coord(tq, lambda).unwrap() * w_coord(q, lambda).unwrap();
            worst = worst.max((lhs - t).norm());
            worst_rel = worst_rel.max((lhs - t).norm() / t.norm());
            let expected = (-PI * PI / lambda).exp();
            modulus = modulus.max((t.norm() - expected).abs());
        }
    }
    (
        worst < 1e-9 && modulus < 1e-12,
        format!("max |z(TQ)w(Q) − t| = {worst:.3e} (relative {worst_rel:.3e}); max ||t| − e^(−π²/λ)| = {modulus:.3e}"),
    )
}

fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn maskit_degeneration() -> Outcome {
    let lambdas = [1e-1, 1e-2, 1e-3, 1e-4];
    let mut ratio: f64 = 0.0;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for re in [-2.0, -1.0, 0.0, 1.0, 2.0] {
        for im in [1.0, 2.0, 3.0, 4.0, 5.0] {
            let mu = c(re, im);
            let errs: Vec<f64> = lambdas
                .iter()
                .map(|&l| maskit_limit_error(l, mu).unwrap())
                .collect();
            for (e, l) in errs.iter().zip(&lambdas) {
                ratio = ratio.max(e / l);
            }
            let slope = loglog_slope(&lambdas, &errs);
            lo = lo.min(slope);
            hi = hi.max(slope);
        }
    }
    let (lower, _) = tame_mu_interval(1e-3).unwrap();
    let bounded = ratio <= 20.0;
    let slope_ok = lo >= 0.9 && hi <= 1.1;
    let endpoint_ok = (lower - 2.0).abs() < 0.05;
    (
        bounded && slope_ok && endpoint_ok,
        format!(
            "max error/λ = {ratio:.3e} ({}); fitted slopes in [{lo:.4}, {hi:.4}] ({}); tame lower endpoint at λ = 1e-3: {lower:.6} ({})",
            if bounded { "ok" } else { "FAIL" },
            if slope_ok { "ok" } else { "FAIL: required [0.9, 1.1]" },
            if endpoint_ok { "ok" } else { "FAIL" },
        ),
    )
}

fn fuchsian_limit_sets() -> Outcome {
    let viewport = Viewport::new(-10.0, 10.0, -10.0, 10.0).unwrap();
    let cfg = RenderConfig::new(12, 1e-4, viewport, 512, 512).unwrap();
    let mut worst: f64 = 0.0;
    let mut total = 0;
    for (lambda, tau) in [(0.3, 0.5), (2f64.ln(), 0.0), (1.5, -1.2)] {
        let g = build_group(&FNCoords::new(c(lambda, 0.0), c(tau, 0.0)).unwrap()).unwrap();
        let ps = limit_points(&g, &cfg).unwrap();
        total += ps.len();
        for z in &ps.points {
            worst = worst.max(z.im.abs());
        }
    }
    (
        total > 0 && worst < 1e-9,
        format!("{total} points, max |Im| = {worst:.3e}"),
    )
}

fn shear_formula() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    let mut sign_errors = 0;
    let mut n = 0;
    while n < 100 {
        let lambda = rng.gen_range(0.05..3.0);
        let tau = c(rng.gen_range(-4.0..4.0), rng.gen_range(-PI..PI));
        if tau.im == 0.0 {
            continue;
        }
        let Ok(coords) = FNCoords::new(c(lambda, 0.0), tau) else {
            continue;
        };
        let sigma = complex_shear(&coords).unwrap().sigma;
        let t: MoebiusMap = gen_t(coords.lambda, tau).unwrap();
        let rhs = t.trace() * lambda.tanh() / 2.0;
        worst = worst.max(((sigma / 2.0).cosh() - rhs).norm());
        let expected = if tau.im > 0.0 { tau } else { -tau };
        if sigma != expected {
            sign_errors += 1;
        }
        n += 1;
    }
    (
        worst < 1e-12 && sign_errors == 0,
        format!("max |cosh(σ/2) − tr(T) tanh(λ)/2| = {worst:.3e}; {sign_errors} sign errors"),
    )
}

type Check = Box<dyn Fn() -> Outcome>;

fn main() -> ExitCode {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria: Vec<(&str, Check)> = vec![
        (
            "commutator parabolicity",
            Box::new(move || timed(secs(1), commutator_parabolicity)),
        ),
        (
            "coordinate round trip",
            Box::new(move || timed(secs(1), coordinate_round_trip)),
        ),
        (
            "Nielsen-move consistency",
            Box::new(|| timed(None, nielsen_consistency)),
        ),
        (
            "tameness bound at integer slopes",
            Box::new(move || timed(secs(5), integer_slope_sharpness)),
        ),
        (
            "slice anchors and orthogonality",
            Box::new(|| timed(None, slice_anchors)),
        ),
        (
            "footpoint convexity",
            Box::new(|| timed(None, footpoint_convexity)),
        ),
        (
            "plumbing identity",
            Box::new(|| timed(None, plumbing_identity)),
        ),
        (
            "Maskit degeneration",
            Box::new(|| timed(None, maskit_degeneration)),
        ),
        (
            "Fuchsian limit sets are real",
            Box::new(move || timed(secs(5), fuchsian_limit_sets)),
        ),
        (
            "complex shear formula",
            Box::new(|| timed(None, shear_formula)),
        ),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (ok, detail) = check();
        if !ok {
            failed += 1;
        }
        println!(
            "[{}] criterion {:>2}: {name}: {detail}",
            if ok { "PASS" } else { "FAIL" },
            i + 1
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
