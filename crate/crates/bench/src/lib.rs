//! Shared inputs for the criterion benchmarks.

use qftorus::{build_group, FNCoords, GroupData, C64};

/// A tame bent group at `λ = ln 2`, `τ = 0.5i`.
pub fn bent_group() -> GroupData {
    let coords =
        FNCoords::new(C64::new(2f64.ln(), 0.0), C64::new(0.0, 0.5)).expect("valid coordinates");
    build_group(&coords).expect("valid group")
}
