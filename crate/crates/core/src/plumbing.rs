//! The `zw = t` gluing parameter and its degeneration to the Maskit embedding.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::groups::{gen_s, FNCoords};
use crate::moebius::MoebiusMap;
use crate::pleating::theta0;
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlumbingParams {
    pub t: C64,
    pub mu: C64,
}

impl PlumbingParams {
    pub fn of(coords: &FNCoords) -> Result<PlumbingParams> {
        Ok(PlumbingParams {
            t: plumbing_t(coords)?,
            mu: mu_of(coords),
        })
    }
}

fn positive(lambda: f64) -> Result<f64> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(lambda)
    } else {
        Err(Error::Domain(format!("λ must be positive, got {lambda}")))
    }
}

fn real_lambda(coords: &FNCoords) -> Result<f64> {
    if coords.lambda.im != 0.0 {
        return Err(Error::Domain(format!(
            "plumbing needs real λ, got {}",
            coords.lambda
        )));
    }
    positive(coords.lambda.re)
}

/// `t = exp(−π²/λ − iπτ/λ)`, defined for real `λ` only.
pub fn plumbing_t(coords: &FNCoords) -> Result<C64> {
    let lambda = real_lambda(coords)?;
    Ok((C64::new(-PI * PI, 0.0) / lambda - C64::i() * PI * coords.tau / lambda).exp())
}

/// `μ = (iπ − τ)/λ`.
pub fn mu_from_parts(lambda: C64, tau: C64) -> C64 {
    (C64::new(0.0, PI) - tau) / lambda
}

pub fn mu_of(coords: &FNCoords) -> C64 {
    mu_from_parts(coords.lambda, coords.tau)
}

/// `τ = iπ − λμ`.
pub fn tau_of_mu(lambda: f64, mu: C64) -> C64 {
    C64::new(0.0, PI) - lambda * mu
}

pub fn coords_of_mu(lambda: f64, mu: C64) -> Result<FNCoords> {
    positive(lambda)?;
    FNCoords::new(C64::new(lambda, 0.0), tau_of_mu(lambda, mu))
}

/// `T` written in the plumbing parameter; the same matrix as
/// `gen_t(λ, iπ − λμ)`.
pub fn gen_t_mu(lambda: f64, mu: C64) -> Result<MoebiusMap> {
    positive(lambda)?;
    let i = C64::i();
    let x = lambda * mu / 2.0;
    let (sh, ch) = (x.sinh(), x.cosh());
    let th = (lambda / 2.0).tanh();
    MoebiusMap::new(-i * sh / th, -i * ch, -i * ch, -i * sh * th)
}

/// Normal form `S₀ = [[1, 2], [0, 1]]`, `T₀ = [[−iμ, −i], [−i, 0]]`.
pub fn maskit_generators(mu: C64) -> (MoebiusMap, MoebiusMap) {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let i = C64::i();
    let s0 = MoebiusMap::new(one, 2.0 * one, zero, one).expect("det 1");
    let t0 = MoebiusMap::new(-i * mu, -i, -i, zero).expect("det 1");
    (s0, t0)
}

fn aligned_diff(a: &MoebiusMap, b: &MoebiusMap) -> f64 {
    a.max_entry_diff(b).min(a.negated().max_entry_diff(b))
}

/// Largest entry of `|T(λ, μ) − T₀(μ)|` and `|S(λ) − S₀|`, each over the
/// better of the two lifts.
pub fn maskit_limit_error(lambda: f64, mu: C64) -> Result<f64> {
    let (s0, t0) = maskit_generators(mu);
    let s = gen_s(C64::new(positive(lambda)?, 0.0))?;
    let t = gen_t_mu(lambda, mu)?;
    Ok(aligned_diff(&s, &s0).max(aligned_diff(&t, &t0)))
}

fn principal_log(ratio: C64, what: &str) -> Result<C64> {
    if !ratio.is_finite() || ratio.norm() == 0.0 {
        return Err(Error::Domain(format!(
            "{what}: ratio {ratio} has no logarithm"
        )));
    }
    if ratio.re < 0.0 && ratio.im.abs() <= 1e-15 * ratio.norm() {
        return Err(Error::BranchCut(format!(
            "{what}: ratio {ratio} is on the negative real axis"
        )));
    }
    Ok(ratio.ln())
}

fn upper(p: C64, what: &str) -> Result<C64> {
    if p.im < 0.0 || !p.is_finite() {
        return Err(Error::Domain(format!(
            "{what}: {p} is not in the closed upper half-plane"
        )));
    }
    Ok(p)
}

/// Collar coordinate about the axis of `S`:
/// `exp((πi/λ) log((P sinh(λ/2) + cosh(λ/2)) / (−P sinh(λ/2) + cosh(λ/2))))`.
pub fn z_coord(p: C64, lambda: f64) -> Result<C64> {
    let p = upper(p, "z")?;
    let l = positive(lambda)?;
    let (sh, ch) = ((l / 2.0).sinh(), (l / 2.0).cosh());
    let log = principal_log((p * sh + ch) / (-p * sh + ch), "z")?;
    Ok((C64::i() * PI / l * log).exp())
}

/// Collar coordinate about the axis of `S'`:
/// `exp((πi/λ) log((Q cosh(λ/2) − sinh(λ/2)) / (Q cosh(λ/2) + sinh(λ/2))))`.
pub fn w_coord(q: C64, lambda: f64) -> Result<C64> {
    let q = upper(q, "w")?;
    let l = positive(lambda)?;
    let (sh, ch) = ((l / 2.0).sinh(), (l / 2.0).cosh());
    let log = principal_log((q * ch - sh) / (q * ch + sh), "w")?;
    Ok((C64::i() * PI / l * log).exp())
}

/// `((π − θ₀(λ))/λ, π/λ)`: the range of `Im μ` certified tame.
pub fn tame_mu_interval(lambda: f64) -> Result<(f64, f64)> {
    let l = positive(lambda)?;
    Ok(((PI - theta0(l)?) / l, PI / l))
}
