pub mod group;
pub mod limitset;
pub mod maskit;
pub mod ray;
pub mod slice;

use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use qftorus::{MoebiusMap, C64};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};

/// Buffered writer to `path`, or stdout.
pub fn output(path: &Option<PathBuf>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn check_tau(tau: C64) -> CliResult {
    if tau.im.abs() >= PI {
        return Err(CliError::Usage(format!(
            "|Im τ| must be below π, got τ = {tau}"
        )));
    }
    Ok(())
}

pub fn complex(z: C64) -> Value {
    json!([z.re, z.im])
}

pub fn matrix(m: &MoebiusMap) -> Value {
    json!([
        [complex(m.a()), complex(m.b())],
        [complex(m.c()), complex(m.d())]
    ])
}

pub fn write_json<W: Write + ?Sized>(out: &mut W, v: &Value) -> CliResult {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}
