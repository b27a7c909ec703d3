//! 2×2 complex matrices of determinant one and their action on the Riemann
//! sphere.
//!
//! A [`MoebiusMap`] stores an explicit lift to `SL(2,C)`: `M` and `-M` are
//! different values even though they act identically. Use
//! [`MoebiusMap::approx_eq_projective`] when only the action matters.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// Determinant drift above which [`MoebiusMap::new`] renormalizes its input.
pub const DET_TOL: f64 = 1e-12;

/// A point of the extended complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ExtComplex {
    Finite(C64),
    Infinity,
}

impl ExtComplex {
    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtComplex::Infinity)
    }

    pub fn finite(&self) -> Option<C64> {
        match *self {
            ExtComplex::Finite(z) => Some(z),
            ExtComplex::Infinity => None,
        }
    }

    /// Chordal distance on the Riemann sphere (diameter 2).
    pub fn chordal_distance(&self, other: &ExtComplex) -> f64 {
        match (*self, *other) {
            (ExtComplex::Infinity, ExtComplex::Infinity) => 0.0,
            (ExtComplex::Finite(z), ExtComplex::Infinity)
            | (ExtComplex::Infinity, ExtComplex::Finite(z)) => 2.0 / (1.0 + z.norm_sqr()).sqrt(),
            (ExtComplex::Finite(z), ExtComplex::Finite(w)) => {
                2.0 * (z - w).norm() / ((1.0 + z.norm_sqr()).sqrt() * (1.0 + w.norm_sqr()).sqrt())
            }
        }
    }
}

impl From<C64> for ExtComplex {
    fn from(z: C64) -> Self {
        ExtComplex::Finite(z)
    }
}

impl From<f64> for ExtComplex {
    fn from(x: f64) -> Self {
        ExtComplex::Finite(C64::new(x, 0.0))
    }
}

impl fmt::Display for ExtComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtComplex::Finite(z) => write!(f, "{z}"),
            ExtComplex::Infinity => f.write_str("∞"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Identity,
    Parabolic,
    Elliptic,
    Loxodromic,
}

/// `[[a, b], [c, d]]` with `ad - bc = 1`.
///
/// Serialized as `{"a": [re, im], "b": ..., "c": ..., "d": ...}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoebiusMap {
    a: C64,
    b: C64,
    c: C64,
    d: C64,
}

impl MoebiusMap {
    pub const IDENTITY: MoebiusMap = MoebiusMap {
        a: C64::new(1.0, 0.0),
        b: C64::new(0.0, 0.0),
        c: C64::new(0.0, 0.0),
        d: C64::new(1.0, 0.0),
    };

    /// Builds a map from raw entries, rescaling by the principal square root
    /// of the determinant when it drifts from one by more than [`DET_TOL`].
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Result<Self> {
        let det = a * d - b * c;
        if !det.is_finite() || det.norm() < 1e-300 {
            return Err(Error::Degenerate(format!("singular matrix (det = {det})")));
        }
        Ok(MoebiusMap { a, b, c, d }.renormalized())
    }

    pub fn a(&self) -> C64 {
        self.a
    }

    pub fn b(&self) -> C64 {
        self.b
    }

    pub fn c(&self) -> C64 {
        self.c
    }

    pub fn d(&self) -> C64 {
        self.d
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> [C64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> C64 {
        self.a + self.d
    }

    fn renormalized(self) -> Self {
        let det = self.det();
        if (det - 1.0).norm() <= DET_TOL {
            return self;
        }
        let r = det.sqrt();
        MoebiusMap {
            a: self.a / r,
            b: self.b / r,
            c: self.c / r,
            d: self.d / r,
        }
    }

    /// Divides by `√det` if the determinant has drifted from one.
    ///
    /// Products are not renormalized automatically: the determinant of a
    /// large product is computed with heavy cancellation, and dividing by it
    /// would add more error than it removes.
    pub fn renormalize(&self) -> MoebiusMap {
        self.renormalized()
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &MoebiusMap) -> MoebiusMap {
        MoebiusMap {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    pub fn inverse(&self) -> MoebiusMap {
        MoebiusMap {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// The other lift of the same transformation.
    pub fn negated(&self) -> MoebiusMap {
        MoebiusMap {
            a: -self.a,
            b: -self.b,
            c: -self.c,
            d: -self.d,
        }
    }

    pub fn pow(&self, n: i64) -> MoebiusMap {
        let base = if n < 0 { self.inverse() } else { *self };
        (0..n.unsigned_abs()).fold(MoebiusMap::IDENTITY, |acc, _| acc.compose(&base))
    }

    pub fn apply(&self, z: ExtComplex) -> ExtComplex {
        match z {
            ExtComplex::Infinity => {
                if self.c == C64::new(0.0, 0.0) {
                    ExtComplex::Infinity
                } else {
                    ExtComplex::Finite(self.a / self.c)
                }
            }
            ExtComplex::Finite(z) => {
                let den = self.c * z + self.d;
                if den == C64::new(0.0, 0.0) {
                    ExtComplex::Infinity
                } else {
                    ExtComplex::Finite((self.a * z + self.b) / den)
                }
            }
        }
    }

    /// Action on a finite point; `None` at the pole.
    pub fn apply_finite(&self, z: C64) -> Option<C64> {
        self.apply(ExtComplex::Finite(z)).finite()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_entry_diff(&self, other: &MoebiusMap) -> f64 {
        self.entries()
            .iter()
            .zip(other.entries())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    /// Lift-sensitive comparison.
    pub fn approx_eq(&self, other: &MoebiusMap, tol: f64) -> bool {
        self.max_entry_diff(other) <= tol
    }

    /// Equality of the Möbius transformations, i.e. up to global sign.
    pub fn approx_eq_projective(&self, other: &MoebiusMap, tol: f64) -> bool {
        self.approx_eq(other, tol) || self.approx_eq(&other.negated(), tol)
    }

    pub fn is_identity(&self, eps: f64) -> bool {
        self.approx_eq_projective(&MoebiusMap::IDENTITY, eps)
    }

    /// Roots of `cz² + (d − a)z − b = 0`, the larger-sign root first.
    ///
    /// A parabolic map returns its fixed point twice.
    pub fn fixed_points(&self) -> Result<(ExtComplex, ExtComplex)> {
        if self.is_identity(DET_TOL) {
            return Err(Error::Degenerate(
                "identity has no isolated fixed points".into(),
            ));
        }
        let scale = self.entries().iter().map(|z| z.norm()).fold(1.0, f64::max);
        let amd = self.a - self.d;
        if self.c.norm() <= 1e-15 * scale {
            // ∞ is fixed; the other root solves (d − a)z = b
            let other = if amd.norm() <= 1e-15 * scale {
                ExtComplex::Infinity
            } else {
                ExtComplex::Finite(-self.b / amd)
            };
            return Ok((ExtComplex::Infinity, other));
        }
        let tr = self.trace();
        let mut disc = tr * tr - 4.0;
        if disc.norm() <= DET_TOL * scale * scale {
            disc = C64::new(0.0, 0.0);
        }
        let root = disc.sqrt();
        let plus = amd + root;
        let minus = amd - root;
        // the product of the roots is −b/c; recover the small one from it
        let (zp, zm) = if plus.norm() >= minus.norm() {
            let zp = plus / (2.0 * self.c);
            let zm = if plus.norm() == 0.0 {
                zp
            } else {
                -2.0 * self.b / plus
            };
            (zp, zm)
        } else {
            let zm = minus / (2.0 * self.c);
            (-2.0 * self.b / minus, zm)
        };
        Ok((ExtComplex::Finite(zp), ExtComplex::Finite(zm)))
    }

    pub fn classify(&self, eps: f64) -> Classification {
        if self.is_identity(eps) {
            return Classification::Identity;
        }
        let tr2 = self.trace() * self.trace();
        if (tr2 - 4.0).norm() < eps {
            Classification::Parabolic
        } else if tr2.im.abs() < eps && (0.0..4.0).contains(&tr2.re) {
            Classification::Elliptic
        } else {
            Classification::Loxodromic
        }
    }
}

impl Mul for MoebiusMap {
    type Output = MoebiusMap;

    fn mul(self, rhs: MoebiusMap) -> MoebiusMap {
        self.compose(&rhs)
    }
}

impl Mul<&MoebiusMap> for &MoebiusMap {
    type Output = MoebiusMap;

    fn mul(self, rhs: &MoebiusMap) -> MoebiusMap {
        self.compose(rhs)
    }
}

impl fmt::Display for MoebiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}
