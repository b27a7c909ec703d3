use std::fmt::Write as _;
use std::io::Write;

use qftorus::{theta0, C64};

use super::output;
use super::ray::{failure_line, require_success, trace_all};
use crate::cli::SliceArgs;
use crate::error::{CliError, CliResult};

/// `τ ↦ 2i cosh(τ/2) coth λ`, the 2-to-1 plotting coordinate `i tr T`.
fn plot_coord(tau: C64, lambda: f64) -> C64 {
    C64::new(0.0, 2.0) * (tau / 2.0).cosh() / lambda.tanh()
}

fn lambda_of(args: &SliceArgs) -> CliResult<f64> {
    match (args.lambda, args.tr_t) {
        (Some(l), None) => Ok(l),
        (None, Some(v)) if v > 2.0 => Ok((2.0 / v).atanh()),
        (None, Some(v)) => Err(CliError::Domain(format!("--trT must exceed 2, got {v}"))),
        _ => Err(CliError::Usage(
            "give exactly one of --lambda and --trT".into(),
        )),
    }
}

struct Frame {
    xmin: f64,
    ymax: f64,
    scale: f64,
}

impl Frame {
    /// Fits `points` into a `w × h` canvas with a 5% margin and equal axes.
    fn fit(points: &[C64], w: u32, h: u32) -> Frame {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for p in points.iter().filter(|p| p.is_finite()) {
            x0 = x0.min(p.re);
            x1 = x1.max(p.re);
            y0 = y0.min(p.im);
            y1 = y1.max(p.im);
        }
        let span = (x1 - x0).max(y1 - y0).max(1.0) * 1.1;
        let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
        let scale = (w.min(h) as f64) / span;
        Frame {
            xmin: cx - w as f64 / scale / 2.0,
            ymax: cy + h as f64 / scale / 2.0,
            scale,
        }
    }

    fn px(&self, z: C64) -> (f64, f64) {
        (
            (z.re - self.xmin) * self.scale,
            (self.ymax - z.im) * self.scale,
        )
    }

    fn polyline(&self, pts: &[C64], class: &str, extra: &str) -> String {
        let mut s = String::new();
        for (i, z) in pts.iter().enumerate() {
            let (x, y) = self.px(*z);
            let sep = if i == 0 { "" } else { " " };
            write!(s, "{sep}{x:.3},{y:.3}").expect("string write");
        }
        format!(r#"<polyline class="{class}"{extra} points="{s}"/>"#)
    }
}

pub fn run(args: &SliceArgs) -> CliResult {
    let lambda = lambda_of(args)?;
    let th = theta0(lambda)?;
    let outcomes = trace_all(lambda, &args.opts)?;

    let rays: Vec<(String, Vec<C64>)> = outcomes
        .iter()
        .filter_map(|o| o.result.as_ref().ok())
        .map(|r| {
            let label = format!("{} {}", r.slope, r.side);
            (
                label,
                r.samples
                    .iter()
                    .map(|s| plot_coord(s.tau, lambda))
                    .collect(),
            )
        })
        .collect();
    let fuchsian_start = plot_coord(C64::new(0.0, 0.0), lambda);
    let mut extent: Vec<C64> = rays.iter().flat_map(|(_, p)| p.iter().copied()).collect();
    extent.push(fuchsian_start);
    let (w, h) = args.px;
    let frame = Frame::fit(&extent, w, h);
    let top = frame.ymax + 1.0;

    // tame boundary Im τ = ±θ₀ over the real range the rays cover
    let taus = outcomes
        .iter()
        .filter_map(|o| o.result.as_ref().ok())
        .flat_map(|r| r.samples.iter());
    let (lo, hi) = taus.fold((-2.0f64, 2.0f64), |(lo, hi), s| {
        (lo.min(s.tau.re), hi.max(s.tau.re))
    });
    let boundary = |sign: f64| -> Vec<C64> {
        (0..=400)
            .map(|k| C64::new(lo - 1.0 + (hi - lo + 2.0) * k as f64 / 400.0, sign * th))
            .map(|tau| plot_coord(tau, lambda))
            .collect()
    };

    let mut out = output(&args.out)?;
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    )?;
    writeln!(
        out,
        "<!-- lambda = {lambda}, theta0 = {th}, fuchsian_start = {} -->",
        fuchsian_start.im
    )?;
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#)?;
    writeln!(out, r#"<g fill="none" stroke-width="1">"#)?;
    for sign in [1.0, -1.0] {
        writeln!(
            out,
            "{}",
            frame.polyline(
                &boundary(sign),
                "tame-boundary",
                r#" stroke="gray" stroke-dasharray="4 3""#
            )
        )?;
    }
    writeln!(
        out,
        "{}",
        frame.polyline(
            &[fuchsian_start, C64::new(0.0, top)],
            "fuchsian",
            r#" stroke="black" stroke-width="2""#
        )
    )?;
    for (label, pts) in &rays {
        let extra = format!(r#" stroke="steelblue" data-ray="{label}""#);
        writeln!(out, "{}", frame.polyline(pts, "ray", &extra))?;
    }
    writeln!(out, "</g>")?;
    for o in &outcomes {
        if let Some(line) = failure_line(o) {
            writeln!(out, "<!-- {} -->", line.trim_start_matches("# "))?;
        }
    }
    writeln!(out, "</svg>")?;
    out.flush()?;
    require_success(&outcomes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fuchsian_basepoint() {
        let w = plot_coord(C64::new(0.0, 0.0), 2f64.ln());
        assert!((w - C64::new(0.0, 10.0 / 3.0)).norm() < 1e-14);
    }

    #[test]
    fn frame_keeps_points_inside() {
        let pts = [C64::new(-1.0, 2.0), C64::new(3.0, 5.0)];
        let f = Frame::fit(&pts, 200, 100);
        for p in pts {
            let (x, y) = f.px(p);
            assert!((0.0..=200.0).contains(&x) && (0.0..=100.0).contains(&y));
        }
    }
}
