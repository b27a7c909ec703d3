use qftorus::plumbing::tau_of_mu;
use qftorus::{
    build_group, complex_shear, coordinate_map, is_tame, mu_of, normalize, plumbing_t, theta0,
    FNCoords,
};
use serde_json::{json, Value};

use super::{check_tau, complex, matrix, output, write_json};
use crate::cli::GroupArgs;
use crate::error::{CliError, CliResult};

/// Bending below this counts as Fuchsian in the report.
const FUCHSIAN_TOL: f64 = 1e-12;

pub fn run(args: &GroupArgs) -> CliResult {
    let lambda = args.lambda;
    let tau = match (args.tau, args.mu) {
        (Some(tau), None) => tau,
        (None, Some(mu)) => {
            if lambda.im != 0.0 {
                return Err(CliError::Usage("--mu needs a real λ".into()));
            }
            tau_of_mu(lambda.re, mu)
        }
        _ => return Err(CliError::Usage("give exactly one of --tau and --mu".into())),
    };
    check_tau(tau)?;
    let coords = FNCoords::new(lambda, tau)?;
    let g = build_group(&coords)?;
    let norm = normalize(&g)?;
    let (h1, h2) = coordinate_map(&coords);
    let real = lambda.im == 0.0;
    let fuchsian = real && tau.im.abs() < FUCHSIAN_TOL;

    let opt = |v: Option<Value>| v.unwrap_or(Value::Null);
    let report = json!({
        "lambda": complex(lambda),
        "tau": complex(tau),
        "mu": complex(mu_of(&coords)),
        "generators": {
            "S": matrix(&g.s),
            "S_prime": matrix(&g.s_prime),
            "T": matrix(&g.t),
            "K": matrix(&g.k),
        },
        "traces": {
            "S": complex(g.s.trace()),
            "T": complex(g.t.trace()),
            "K": complex(g.k.trace()),
            "ST": complex((g.s * g.t).trace()),
        },
        "h_image": [complex(h1), complex(h2)],
        "endpoints": { "x1": complex(norm.x1), "x2": complex(norm.x2) },
        "t": opt(real.then(|| plumbing_t(&coords).map(complex)).transpose()?),
        "theta0": opt(real.then(|| theta0(lambda.re).map(|x| json!(x))).transpose()?),
        "tame": opt(real.then(|| is_tame(&coords).map(|b| json!(b))).transpose()?),
        "shear": opt((real && !fuchsian).then(|| complex_shear(&coords).map(|s| complex(s.sigma))).transpose()?),
        "fuchsian": fuchsian,
    });
    write_json(&mut output(&args.out)?, &report)
}
