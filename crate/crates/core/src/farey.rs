//! Extended-rational slopes and the Farey words `W_{p/q}`.
//!
//! `W_∞ = S⁻¹`, `W_m = S⁻ᵐ T` for integers `m`, and for Farey neighbours
//! `p/q < r/s` (`qr − ps = 1`) the mediant word is `W_{(p+r)/(q+s)} = W_{r/s} W_{p/q}`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::groups::{build_group, gen_s, FNCoords, GroupData};
use crate::moebius::MoebiusMap;
use crate::{Error, Result, C64};

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A reduced fraction `p/q` with `q ≥ 0`; `1/0` is the slope `∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Slope {
    p: i64,
    q: i64,
}

impl Slope {
    pub const INFINITY: Slope = Slope { p: 1, q: 0 };

    pub fn new(p: i64, q: i64) -> Result<Slope> {
        if p == 0 && q == 0 {
            return Err(Error::Domain("0/0 is not a slope".into()));
        }
        if q == 0 {
            return Ok(Slope::INFINITY);
        }
        let g = gcd(p, q) * q.signum();
        Ok(Slope { p: p / g, q: q / g })
    }

    pub fn integer(m: i64) -> Slope {
        Slope { p: m, q: 1 }
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn is_infinite(&self) -> bool {
        self.q == 0
    }

    pub fn is_integer(&self) -> bool {
        self.q == 1
    }

    pub fn value(&self) -> f64 {
        self.p as f64 / self.q as f64
    }

    pub fn mediant(&self, other: &Slope) -> Slope {
        Slope::new(self.p + other.p, self.q + other.q).expect("mediant of slopes is a slope")
    }

    /// `|p| + q`, the length of the Farey word for non-negative slopes.
    pub fn complexity(&self) -> i64 {
        self.p.abs() + self.q
    }
}

impl Ord for Slope {
    fn cmp(&self, other: &Self) -> Ordering {
        // q ≥ 0 on both sides, and ∞ = 1/0 sorts last
        (self.p as i128 * other.q as i128).cmp(&(other.p as i128 * self.q as i128))
    }
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Slope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Slope> {
        let s = s.trim();
        if s == "inf" || s == "∞" {
            return Ok(Slope::INFINITY);
        }
        let parse = |t: &str| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Error::Domain(format!("bad slope `{s}`")))
        };
        match s.split_once('/') {
            Some((p, q)) => Slope::new(parse(p)?, parse(q)?),
            None => Ok(Slope::integer(parse(s)?)),
        }
    }
}

/// The unique Farey neighbours `(p/q, r/s)`, `qr − ps = 1`, whose mediant is
/// `s`, found by Stern–Brocot descent between `⌊s⌋` and `⌊s⌋ + 1`.
pub fn farey_parents(s: Slope) -> Result<(Slope, Slope)> {
    if s.q < 2 {
        return Err(Error::BaseCase(s));
    }
    let floor = s.p.div_euclid(s.q);
    let mut left = Slope::integer(floor);
    let mut right = Slope::integer(floor + 1);
    loop {
        let mid = left.mediant(&right);
        match s.cmp(&mid) {
            Ordering::Equal => return Ok((left, right)),
            Ordering::Less => right = mid,
            Ordering::Greater => left = mid,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Letter {
    S,
    SInv,
    T,
    TInv,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        match self {
            Letter::S => Letter::SInv,
            Letter::SInv => Letter::S,
            Letter::T => Letter::TInv,
            Letter::TInv => Letter::T,
        }
    }

    /// `S`, `s`, `T`, `t`; lowercase is the inverse.
    pub fn as_char(self) -> char {
        match self {
            Letter::S => 'S',
            Letter::SInv => 's',
            Letter::T => 'T',
            Letter::TInv => 't',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'S' => Some(Letter::S),
            's' => Some(Letter::SInv),
            'T' => Some(Letter::T),
            't' => Some(Letter::TInv),
            _ => None,
        }
    }

    pub fn matrix(self, g: &GroupData) -> MoebiusMap {
        match self {
            Letter::S => g.s,
            Letter::SInv => g.s.inverse(),
            Letter::T => g.t,
            Letter::TInv => g.t.inverse(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Word {
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// No letter is followed by its inverse.
    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0].inverse() != w[1])
    }

    /// Exponent sums `(e_S, e_T)`.
    pub fn abelianization(&self) -> (i64, i64) {
        self.0.iter().fold((0, 0), |(s, t), l| match l {
            Letter::S => (s + 1, t),
            Letter::SInv => (s - 1, t),
            Letter::T => (s, t + 1),
            Letter::TInv => (s, t - 1),
        })
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|l| write!(f, "{}", l.as_char()))
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        s.chars()
            .map(|c| Letter::from_char(c).ok_or_else(|| Error::Domain(format!("bad letter `{c}`"))))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

fn integer_word(m: i64) -> Word {
    let s_letter = if m >= 0 { Letter::SInv } else { Letter::S };
    let mut v = vec![s_letter; m.unsigned_abs() as usize];
    v.push(Letter::T);
    Word(v)
}

/// The Farey word `W_s`.
pub fn word(s: Slope) -> Word {
    if s.is_infinite() {
        return Word(vec![Letter::SInv]);
    }
    if s.is_integer() {
        return integer_word(s.p);
    }
    let (left, right) = farey_parents(s).expect("non-integer slope has parents");
    word(right).concat(&word(left))
}

/// Memo table for Farey words, shareable between threads.
#[derive(Debug, Default, Clone)]
pub struct WordCache {
    map: Arc<RwLock<HashMap<Slope, Word>>>,
}

impl WordCache {
    pub fn new() -> WordCache {
        WordCache::default()
    }

    pub fn get(&self, s: Slope) -> Word {
        if let Some(w) = self.map.read().unwrap().get(&s) {
            return w.clone();
        }
        let w = if s.is_infinite() || s.is_integer() {
            word(s)
        } else {
            let (left, right) = farey_parents(s).expect("non-integer slope has parents");
            self.get(right).concat(&self.get(left))
        };
        self.map.write().unwrap().insert(s, w.clone());
        w
    }

    pub fn len(&self) -> usize {
        self.map.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Left-to-right product of the letters' matrices.
pub fn evaluate(w: &Word, g: &GroupData) -> MoebiusMap {
    let s_inv = g.s.inverse();
    let t_inv = g.t.inverse();
    w.0.iter().fold(MoebiusMap::IDENTITY, |acc, l| {
        let m = match l {
            Letter::S => &g.s,
            Letter::SInv => &s_inv,
            Letter::T => &g.t,
            Letter::TInv => &t_inv,
        };
        acc.compose(m)
    })
}

/// `tr W_s` at `coords`, with the lift fixed so the trace at the reference
/// point `(λ, 0)` has positive real part.
pub fn trace_slope(s: Slope, coords: &FNCoords) -> Result<C64> {
    let w = word(s);
    let g = build_group(coords)?;
    let reference = build_group(&FNCoords::new(coords.lambda, C64::new(0.0, 0.0))?)?;
    let sign = lift_sign(evaluate(&w, &reference).trace());
    Ok(sign * evaluate(&w, &g).trace())
}

fn lift_sign(reference_trace: C64) -> f64 {
    if reference_trace.re < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// All reduced `p/q` in `[lo, hi]` with `1 ≤ q ≤ max_q`, ascending.
pub fn enumerate_slopes(max_q: i64, lo: f64, hi: f64) -> Vec<Slope> {
    let mut out = Vec::new();
    for q in 1..=max_q.max(0) {
        let qf = q as f64;
        let p_lo = (lo * qf - 1e-9).ceil() as i64;
        let p_hi = (hi * qf + 1e-9).floor() as i64;
        for p in p_lo..=p_hi {
            let v = p as f64 / qf;
            if gcd(p, q) == 1 && v >= lo - 1e-12 && v <= hi + 1e-12 {
                out.push(Slope { p, q });
            }
        }
    }
    out.sort();
    out
}

type Mat = [C64; 4];

fn mat_mul(x: &Mat, y: &Mat) -> Mat {
    [
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ]
}

fn mat_add(x: &Mat, y: &Mat) -> Mat {
    [x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3]]
}

fn mat_scale(x: &Mat, k: f64) -> Mat {
    [x[0] * k, x[1] * k, x[2] * k, x[3] * k]
}

/// A matrix together with its first two τ-derivatives.
#[derive(Debug, Clone, Copy)]
struct Jet {
    v: Mat,
    d1: Mat,
    d2: Mat,
}

impl Jet {
    fn constant(v: Mat) -> Jet {
        let zero = [C64::new(0.0, 0.0); 4];
        Jet {
            v,
            d1: zero,
            d2: zero,
        }
    }

    fn mul(&self, o: &Jet) -> Jet {
        Jet {
            v: mat_mul(&self.v, &o.v),
            d1: mat_add(&mat_mul(&self.d1, &o.v), &mat_mul(&self.v, &o.d1)),
            d2: mat_add(
                &mat_add(
                    &mat_mul(&self.d2, &o.v),
                    &mat_scale(&mat_mul(&self.d1, &o.d1), 2.0),
                ),
                &mat_mul(&self.v, &o.d2),
            ),
        }
    }

    fn trace(&self) -> (C64, C64, C64) {
        (
            self.v[0] + self.v[3],
            self.d1[0] + self.d1[3],
            self.d2[0] + self.d2[3],
        )
    }
}

/// `tr W_s` as a holomorphic function of `τ` at fixed `λ`, with analytic
/// first and second derivatives.
///
/// Only `T` letters depend on `τ`; their derivatives are closed form
/// (`T'' = T/4`). The lift sign matches [`trace_slope`].
#[derive(Debug, Clone)]
pub struct SlopeTrace {
    slope: Slope,
    lambda: C64,
    word: Word,
    s: Mat,
    s_inv: Mat,
    coth_half: C64,
    tanh_half: C64,
    sign: f64,
}

impl SlopeTrace {
    pub fn new(slope: Slope, lambda: C64) -> Result<SlopeTrace> {
        SlopeTrace::with_word(slope, lambda, word(slope))
    }

    pub fn with_word(slope: Slope, lambda: C64, word: Word) -> Result<SlopeTrace> {
        let s = gen_s(lambda)?;
        let tanh_half = (lambda / 2.0).tanh();
        let mut st = SlopeTrace {
            slope,
            lambda,
            word,
            s: s.entries(),
            s_inv: s.inverse().entries(),
            coth_half: 1.0 / tanh_half,
            tanh_half,
            sign: 1.0,
        };
        st.sign = lift_sign(st.raw_jet(C64::new(0.0, 0.0)).0);
        Ok(st)
    }

    pub fn slope(&self) -> Slope {
        self.slope
    }

    pub fn lambda(&self) -> C64 {
        self.lambda
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    fn t_jet(&self, tau: C64, inverse: bool) -> Jet {
        let (ch, sh) = ((tau / 2.0).cosh(), (tau / 2.0).sinh());
        let (k, kt) = (self.coth_half, self.tanh_half);
        let (v, d1) = if inverse {
            (
                [ch * kt, sh, sh, ch * k],
                [sh * kt * 0.5, ch * 0.5, ch * 0.5, sh * k * 0.5],
            )
        } else {
            (
                [ch * k, -sh, -sh, ch * kt],
                [sh * k * 0.5, -ch * 0.5, -ch * 0.5, sh * kt * 0.5],
            )
        };
        Jet {
            v,
            d1,
            d2: mat_scale(&v, 0.25),
        }
    }

    fn raw_jet(&self, tau: C64) -> (C64, C64, C64) {
        let t = self.t_jet(tau, false);
        let t_inv = self.t_jet(tau, true);
        let s = Jet::constant(self.s);
        let s_inv = Jet::constant(self.s_inv);
        let mut acc = Jet::constant([
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
        ]);
        for l in self.word.letters() {
            let m = match l {
                Letter::S => &s,
                Letter::SInv => &s_inv,
                Letter::T => &t,
                Letter::TInv => &t_inv,
            };
            acc = acc.mul(m);
        }
        acc.trace()
    }

    /// `(tr, d tr/dτ, d² tr/dτ²)` at `τ`.
    pub fn jet(&self, tau: C64) -> (C64, C64, C64) {
        let (v, d1, d2) = self.raw_jet(tau);
        (v * self.sign, d1 * self.sign, d2 * self.sign)
    }

    pub fn value(&self, tau: C64) -> C64 {
        self.jet(tau).0
    }
}
