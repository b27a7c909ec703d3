use qftorus::plumbing::tau_of_mu;
use qftorus::{maskit_generators, maskit_limit_error, C64};
use serde_json::json;

use super::{complex, matrix, output, write_json};
use crate::cli::MaskitArgs;
use crate::error::{CliError, CliResult};

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() < 2 || ys.iter().any(|&y| y.is_nan() || y <= 0.0) {
        return None;
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub fn run(args: &MaskitArgs) -> CliResult {
    let lambdas = &args.lambdas.0;
    if lambdas.is_empty() {
        return Err(CliError::Usage("--lambdas is empty".into()));
    }
    let mut rows = Vec::new();
    let mut errors = Vec::new();
    for &l in lambdas {
        let err = maskit_limit_error(l, args.mu)?;
        errors.push(err);
        rows.push(json!({
            "lambda": l,
            "error": err,
            "error_over_lambda": err / l,
            "shear": complex(tau_of_mu(l, args.mu)),
        }));
    }
    let (s0, t0) = maskit_generators(args.mu);
    let report = json!({
        "mu": complex(args.mu),
        "rows": rows,
        "fitted_slope": loglog_slope(lambdas, &errors),
        "limit_shear": complex(C64::new(0.0, std::f64::consts::PI)),
        "limit": { "S0": matrix(&s0), "T0": matrix(&t0) },
    });
    write_json(&mut output(&args.out)?, &report)
}
