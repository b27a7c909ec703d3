use std::io::Write;

use qftorus::pleating::CSV_HEADER;
use qftorus::{enumerate_slopes, theta0, LambdaSlice, RayConfig, RayOutcome, Side};

use super::output;
use crate::cli::{RayArgs, RayOpts, SideArg};
use crate::error::{CliError, CliResult};

/// Traces every ray requested by `opts`, slope-major with top before bottom.
pub fn trace_all(lambda: f64, opts: &RayOpts) -> CliResult<Vec<RayOutcome>> {
    theta0(lambda)?;
    if opts.slopes < 1 {
        return Err(CliError::Usage("--slopes must be at least 1".into()));
    }
    let mut cfg = RayConfig::for_lambda(lambda)?;
    if let Some(step) = opts.step {
        cfg.step = step;
    }
    cfg.corrector_tol = opts.tol;
    cfg.endpoint_tol = opts.endpoint_tol;
    let slice = LambdaSlice::with_config(lambda, cfg)?;
    let slopes = enumerate_slopes(opts.slopes, opts.range.0, opts.range.1);
    if slopes.is_empty() {
        return Err(CliError::Domain(format!(
            "no slopes with q ≤ {} in [{}, {}]",
            opts.slopes, opts.range.0, opts.range.1
        )));
    }
    let sides: &[Side] = match opts.side {
        SideArg::Top => &[Side::Top],
        SideArg::Bottom => &[Side::Bottom],
        SideArg::Both => &[Side::Top, Side::Bottom],
    };
    Ok(slice.trace_rays(&slopes, sides))
}

pub fn failure_line(o: &RayOutcome) -> Option<String> {
    let e = o.result.as_ref().err()?;
    Some(format!("# FAILED {} {} {}", o.slope, o.side, e))
}

/// Errors with exit code 4 when every ray failed.
pub fn require_success(outcomes: &[RayOutcome]) -> CliResult {
    if outcomes.iter().any(|o| o.result.is_ok()) {
        Ok(())
    } else {
        Err(CliError::Numerical("every ray failed".into()))
    }
}

pub fn run(args: &RayArgs) -> CliResult {
    let outcomes = trace_all(args.lambda, &args.opts)?;
    let mut out = output(&args.out)?;
    writeln!(out, "{CSV_HEADER}")?;
    for o in &outcomes {
        match &o.result {
            Ok(ray) => ray.write_csv(&mut out)?,
            Err(_) => writeln!(out, "{}", failure_line(o).expect("failed ray"))?,
        }
    }
    out.flush()?;
    require_success(&outcomes)
}
