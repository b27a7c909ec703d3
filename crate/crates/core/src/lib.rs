//! Complex Fenchel–Nielsen coordinates on quasi-Fuchsian punctured torus space.
//!
//! The crate builds the matrix generators of a punctured torus group from a
//! length/twist pair `(λ, τ)`, converts between the coordinate systems that
//! describe the same group (Fenchel–Nielsen, endpoint normalization, plumbing
//! parameter `t`, Maskit parameter `μ`), evaluates Farey words and their
//! traces, traces rational pleating rays inside λ-slices and renders limit
//! sets.
//!
//! ```
//! use qftorus::{build_group, FNCoords, C64};
//!
//! let coords = FNCoords::new(C64::new(2f64.ln(), 0.0), C64::new(0.0, 0.5)).unwrap();
//! let group = build_group(&coords).unwrap();
//! let commutator = group.t.inverse() * group.s.inverse() * group.t * group.s;
//! assert!((commutator.trace() + 2.0).norm() < 1e-10);
//! ```

pub mod error;
pub mod farey;
pub mod format;
pub mod groups;
pub mod limitset;
pub mod moebius;
pub mod pleating;
pub mod plumbing;

pub use num_complex::Complex64 as C64;

pub use error::{Error, Result};
pub use farey::{
    enumerate_slopes, evaluate, farey_parents, trace_slope, word, Letter, Slope, SlopeTrace, Word,
    WordCache,
};
pub use groups::{
    build_group, coordinate_map, from_endpoints, gen_k, gen_s, gen_s_prime, gen_t, nielsen_move,
    normalize, FNCoords, GroupData, NielsenMove, NormalizedGroup,
};
pub use limitset::{
    image_file_name, limit_points, pixel_of, rasterize, PointSet, Raster, RenderConfig, Viewport,
};
pub use moebius::{Classification, ExtComplex, MoebiusMap};
pub use pleating::{
    complex_shear, fuchsian_footpoint, is_tame, qf_heuristic, theta0, trace_ray, LambdaSlice,
    PleatingRay, QfVerdict, RayConfig, RayOutcome, RaySample, ShearValue, Side, TauDomain,
};
pub use plumbing::{
    coords_of_mu, gen_t_mu, maskit_generators, maskit_limit_error, mu_from_parts, mu_of,
    plumbing_t, tame_mu_interval, tau_of_mu, w_coord, z_coord, PlumbingParams,
};
