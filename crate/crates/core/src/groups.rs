//! Normal forms for the generators of a punctured torus group and the
//! coordinate systems built on them.
//!
//! For `(λ, τ)` with `Re λ > 0` the group is generated by
//!
//! ```text
//! S  = [[cosh λ, cosh λ + 1], [cosh λ − 1, cosh λ]]
//! S' = [[cosh λ, cosh λ − 1], [cosh λ + 1, cosh λ]]
//! T  = [[cosh(τ/2) coth(λ/2), −sinh(τ/2)], [−sinh(τ/2), cosh(τ/2) tanh(λ/2)]]
//! ```
//!
//! with `T⁻¹ S T = S'` and `K = S'⁻¹ S = T⁻¹S⁻¹TS` parabolic, fixing `−1`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::moebius::MoebiusMap;
use crate::{Error, Result, C64};

/// Tolerance for identities that hold by construction.
pub const CONSTRUCTIVE_TOL: f64 = 1e-10;
/// Tolerance for analytic round trips.
pub const ROUND_TRIP_TOL: f64 = 1e-9;

const ZERO_TOL: f64 = 1e-12;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Complex Fenchel–Nielsen coordinates: half-length `lambda` of the
/// distinguished curve and twist-bend `tau`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FNCoords {
    pub lambda: C64,
    pub tau: C64,
}

impl FNCoords {
    /// Validates `Re λ > 0`, `sinh λ ≠ 0` and `cosh(τ/2) ≠ 0`.
    pub fn new(lambda: C64, tau: C64) -> Result<Self> {
        check_lambda(lambda)?;
        if lambda.sinh().norm() < ZERO_TOL {
            return Err(Error::Domain(format!("sinh(λ) = 0 at λ = {lambda}")));
        }
        if (tau / 2.0).cosh().norm() < ZERO_TOL {
            return Err(Error::Domain(format!("cosh(τ/2) = 0 at τ = {tau}")));
        }
        if !tau.is_finite() {
            return Err(Error::Domain(format!("τ = {tau} is not finite")));
        }
        Ok(FNCoords { lambda, tau })
    }

    /// Shorthand for real length and complex twist.
    pub fn real_length(lambda: f64, tau: C64) -> Result<Self> {
        FNCoords::new(c(lambda, 0.0), tau)
    }

    /// Bending angle `θ = Im τ`.
    pub fn theta(&self) -> f64 {
        self.tau.im
    }

    /// Real twist `t = Re τ`.
    pub fn twist(&self) -> f64 {
        self.tau.re
    }

    pub fn is_fuchsian(&self) -> bool {
        self.lambda.im == 0.0 && self.tau.im == 0.0
    }
}

fn check_lambda(lambda: C64) -> Result<()> {
    if lambda.re.is_nan() || lambda.re <= 0.0 || !lambda.is_finite() {
        return Err(Error::Domain(format!(
            "Re λ must be positive, got λ = {lambda}"
        )));
    }
    Ok(())
}

pub fn gen_s(lambda: C64) -> Result<MoebiusMap> {
    check_lambda(lambda)?;
    let ch = lambda.cosh();
    MoebiusMap::new(ch, ch + 1.0, ch - 1.0, ch)
}

pub fn gen_s_prime(lambda: C64) -> Result<MoebiusMap> {
    check_lambda(lambda)?;
    let ch = lambda.cosh();
    MoebiusMap::new(ch, ch - 1.0, ch + 1.0, ch)
}

pub fn gen_t(lambda: C64, tau: C64) -> Result<MoebiusMap> {
    check_lambda(lambda)?;
    let half = lambda / 2.0;
    let (ct, st) = ((tau / 2.0).cosh(), (tau / 2.0).sinh());
    let th = half.tanh();
    MoebiusMap::new(ct / th, -st, -st, ct * th)
}

/// The parabolic commutator `S'⁻¹ S`.
pub fn gen_k(lambda: C64) -> Result<MoebiusMap> {
    check_lambda(lambda)?;
    let two_ch = 2.0 * lambda.cosh();
    MoebiusMap::new(two_ch - 1.0, two_ch, -two_ch, -two_ch - 1.0)
}

/// Generators of the group with coordinates `coords`, with `S'` and `K`
/// cached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupData {
    pub s: MoebiusMap,
    pub s_prime: MoebiusMap,
    pub t: MoebiusMap,
    pub k: MoebiusMap,
    pub coords: FNCoords,
}

pub fn build_group(coords: &FNCoords) -> Result<GroupData> {
    let FNCoords { lambda, tau } = *coords;
    let group = GroupData {
        s: gen_s(lambda)?,
        s_prime: gen_s_prime(lambda)?,
        t: gen_t(lambda, tau)?,
        k: gen_k(lambda)?,
        coords: *coords,
    };
    debug_assert!(group.check_invariants().is_ok());
    Ok(group)
}

impl GroupData {
    /// Re-checks `S' = T⁻¹ S T` and `tr K = −2`.
    pub fn check_invariants(&self) -> Result<()> {
        let conj = self.t.inverse() * self.s * self.t;
        let scale = self
            .t
            .entries()
            .iter()
            .map(|z| z.norm_sqr())
            .fold(1.0, f64::max);
        if !conj.approx_eq_projective(&self.s_prime, CONSTRUCTIVE_TOL * scale) {
            return Err(Error::Degenerate(format!(
                "T⁻¹ S T = {conj} differs from S' = {}",
                self.s_prime
            )));
        }
        if (self.k.trace() + 2.0).norm() > CONSTRUCTIVE_TOL {
            return Err(Error::Degenerate(format!("tr K = {}", self.k.trace())));
        }
        Ok(())
    }

    /// Traces `(tr S, tr T, tr ST)` of the generating pair.
    pub fn trace_triple(&self) -> [C64; 3] {
        [self.s.trace(), self.t.trace(), (self.s * self.t).trace()]
    }
}

/// `h(λ, τ) = (cosh² λ, e^τ)`.
pub fn coordinate_map(coords: &FNCoords) -> (C64, C64) {
    let ch = coords.lambda.cosh();
    (ch * ch, coords.tau.exp())
}

/// A group conjugated so that `S'` becomes `diag(a, 1/a)` with `|a| > 1`,
/// `T(0) = 1`, and the group is recorded by the endpoints
/// `x1 = T(∞)`, `x2 = T(1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizedGroup {
    pub s0: MoebiusMap,
    pub t0: MoebiusMap,
    pub x1: C64,
    pub x2: C64,
    /// Multiplier square root: `s0 = diag(a, 1/a)`.
    pub a: C64,
    /// Conjugating map `R` with `s0 = R S' R⁻¹`, `t0 = R T R⁻¹`.
    pub conjugator: MoebiusMap,
}

impl NormalizedGroup {
    /// `(cosh² λ, e^τ)` recovered from the endpoints.
    pub fn h_image(&self) -> (C64, C64) {
        let (x1, x2) = (self.x1, self.x2);
        (x1, (x1 - x2) / (x1 * (x2 - 1.0)))
    }

    /// Principal-branch coordinates: `λ = log a` and `τ = log e^τ` with
    /// `Im τ ∈ (−π, π]`.
    pub fn recover_coords(&self) -> Result<FNCoords> {
        let (_, e_tau) = self.h_image();
        FNCoords::new(self.a.ln(), e_tau.ln())
    }
}

pub fn normalize(group: &GroupData) -> Result<NormalizedGroup> {
    let lambda = group.coords.lambda;
    let e_l = lambda.exp();
    if (e_l.norm() - 1.0).abs() < ZERO_TOL {
        return Err(Error::Degenerate(format!(
            "|e^λ| = 1 at λ = {lambda}: S is not loxodromic"
        )));
    }
    let ch = lambda.cosh();
    let sh = lambda.sinh();
    let r = MoebiusMap::new(ch / (1.0 - ch), -ch / sh, 1.0 / (1.0 - ch), 1.0 / sh)?;
    let r_inv = r.inverse();
    let s0 = r * group.s_prime * r_inv;
    let t0 = r * group.t * r_inv;
    let x1 = t0.a() / t0.c();
    let x2 = (t0.a() + t0.b()) / (t0.c() + t0.d());
    Ok(NormalizedGroup {
        s0,
        t0,
        x1,
        x2,
        a: s0.a(),
        conjugator: r,
    })
}

/// Rebuilds the normalized pair `(A, B)` from `x1 = B(∞)` and `x2 = B(1)`,
/// solving `tr[A, B] = −2` for the multiplier of `A`.
pub fn from_endpoints(x1: C64, x2: C64) -> Result<NormalizedGroup> {
    let one = c(1.0, 0.0);
    if x1.norm() < ZERO_TOL || (x1 - one).norm() < ZERO_TOL {
        return Err(Error::Domain(format!("x1 = {x1} must avoid 0 and 1")));
    }
    if (x1 - x2).norm() < ZERO_TOL || (x2 - one).norm() < ZERO_TOL {
        return Err(Error::Domain(format!(
            "x2 = {x2} must differ from 1 and from x1 = {x1}"
        )));
    }
    let root = (x1 * (x1 - 1.0)).sqrt();
    let candidates = [2.0 * x1 - 1.0 + 2.0 * root, 2.0 * x1 - 1.0 - 2.0 * root];
    // the two roots are reciprocal
    let a2 = if candidates[0].norm() >= candidates[1].norm() {
        candidates[0]
    } else {
        candidates[1]
    };
    if (a2.norm() - 1.0).abs() < ZERO_TOL {
        return Err(Error::Degenerate(format!(
            "both multipliers lie on the unit circle for x1 = {x1}"
        )));
    }
    let a = a2.sqrt();
    let s0 = MoebiusMap::new(a, c(0.0, 0.0), c(0.0, 0.0), 1.0 / a)?;
    let t0 = MoebiusMap::new(x1 * (x2 - 1.0), x1 - x2, x2 - 1.0, x1 - x2)?;
    let commutator = s0.inverse() * t0.inverse() * s0 * t0;
    let scale = t0
        .entries()
        .iter()
        .map(|z| z.norm_sqr())
        .fold(1.0, f64::max);
    if (commutator.trace() + 2.0).norm() > ROUND_TRIP_TOL * scale {
        return Err(Error::Degenerate(format!(
            "tr[A, B] = {} is not −2",
            commutator.trace()
        )));
    }
    Ok(NormalizedGroup {
        s0,
        t0,
        x1,
        x2,
        a,
        conjugator: MoebiusMap::IDENTITY,
    })
}

/// Elementary changes of the generating pair `(S, T)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NielsenMove {
    /// `(S, T) ↦ (S, S T)`
    MulS,
    /// `(S, T) ↦ (S, S⁻¹ T)`
    MulSInv,
    /// `(S, T) ↦ (S, T⁻¹)`
    InvertT,
    /// `(S, T) ↦ (T, S)`
    Swap,
}

impl NielsenMove {
    pub const ALL: [NielsenMove; 4] = [
        NielsenMove::MulS,
        NielsenMove::MulSInv,
        NielsenMove::InvertT,
        NielsenMove::Swap,
    ];

    /// The new generating pair expressed in the old generators.
    pub fn apply_to_pair(&self, s: &MoebiusMap, t: &MoebiusMap) -> (MoebiusMap, MoebiusMap) {
        match self {
            NielsenMove::MulS => (*s, *s * *t),
            NielsenMove::MulSInv => (*s, s.inverse() * *t),
            NielsenMove::InvertT => (*s, t.inverse()),
            NielsenMove::Swap => (*t, *s),
        }
    }
}

fn reduce_im_tau(tau: C64) -> C64 {
    // Im τ into (−π, π]; a shift by 2πi only flips the lift of T
    let k = ((PI - tau.im) / (2.0 * PI)).floor();
    c(tau.re, tau.im + 2.0 * PI * k)
}

/// Coordinates of the same group with respect to the moved generating pair.
///
/// The result satisfies
///
/// * `S^{±1}T`: `cosh λ' = cosh λ`, `sinh(τ'/2) = sinh(τ/2) cosh λ ∓ cosh(τ/2) sinh λ`
/// * `T⁻¹`: `cosh λ' = cosh λ`, `sinh(τ'/2) = −sinh(τ/2)`
/// * swap: `cosh λ' = cosh λ cosh(τ/2) / sinh λ`,
///   `sinh(τ'/2) = −sinh(τ/2) sinh λ / cosh(τ/2)`
///
/// up to the lift sign of the new `T`, with `τ'` reduced to `Im τ' ∈ (−π, π]`.
pub fn nielsen_move(coords: &FNCoords, mv: NielsenMove) -> Result<FNCoords> {
    let FNCoords { lambda, tau } = *coords;
    let (new_lambda, new_tau) = match mv {
        NielsenMove::MulS => (lambda, tau - 2.0 * lambda),
        NielsenMove::MulSInv => (lambda, tau + 2.0 * lambda),
        NielsenMove::InvertT => (lambda, -tau),
        NielsenMove::Swap => {
            let (ch, sh) = (lambda.cosh(), lambda.sinh());
            let (cth, sth) = ((tau / 2.0).cosh(), (tau / 2.0).sinh());
            let cosh_new = ch * cth / sh;
            let new_lambda = cosh_new.acosh();
            if new_lambda.re <= ZERO_TOL {
                return Err(Error::OutOfChart(format!(
                    "cosh λ' = {cosh_new} has no preimage with Re λ' > 0"
                )));
            }
            let sinh_half = -sth * sh / cth;
            // tr(S'T') = ±tr(TS) forces cosh(τ'/2) = −cosh λ · tanh λ'
            let cosh_half = -ch * new_lambda.tanh();
            (new_lambda, 2.0 * (cosh_half + sinh_half).ln())
        }
    };
    FNCoords::new(new_lambda, reduce_im_tau(new_tau)).map_err(|e| match e {
        Error::Domain(msg) => Error::OutOfChart(msg),
        other => other,
    })
}
