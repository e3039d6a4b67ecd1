//! Exact computational toolkit for families of generalized Cartan matrices:
//! classification of Dynkin diagrams, spherical-subset posets, node-extension
//! families, rational invariant models of maximal-rank subgroups, and higher
//! limits of those models over the poset (the E2 page of the associated
//! homotopy decomposition).
//!
//! All arithmetic is exact: integers, arbitrary-precision rationals, and a
//! certified modular fast path for very large scalar rank computations.
//! No floating point anywhere.
//!
//! ```
//! use kmstab::{classify, e2_page, Gcm};
//! use kmstab::classify::ComponentVerdict;
//! use kmstab::limits::LimitsConfig;
//!
//! // The affine rank-2 matrix: every proper subset is spherical.
//! let g = Gcm::from_json(r#"{"nodes":[1,2],"entries":[[1,2,-2],[2,1,-2]]}"#).unwrap();
//! let c = classify(&g).unwrap();
//! assert_eq!(c.components[0].verdict, ComponentVerdict::Affine);
//!
//! // Its E2 table has a derived-limit class in bidegree (1, 2).
//! let page = e2_page(&g, 4, 2, &LimitsConfig::default()).unwrap();
//! assert_eq!(page.dim(0, 2), 1);
//! assert_eq!(page.dim(1, 2), 1);
//! ```

pub mod classify;
pub mod family;
pub mod gcm;
pub mod invariants;
pub mod limits;
pub mod linalg;
pub mod poset;
pub mod shift;

pub use classify::{classify, positive_roots, weyl_data, CatalogType, Classification, WeylData};
pub use family::{extend, find_stable_base, relabel_with_pivot, FamilySpec, StableBaseReport};
pub use gcm::{graph_isomorphic, DynkinGraph, Gcm, Label, NodeSet};
pub use invariants::{
    hilbert_series, invariant_basis, molien_oracle, reflection_matrices, restriction_matrix,
    GradedInvariantModel, HilbertSeries, ReflectionAction,
};
pub use limits::{e2_page, lim_i, stability_scan, weyl_family_scan, E2Page, StabilityReport};
pub use poset::{ChainSet, SphericalPoset};
pub use shift::{block_embed, sigma, verify_composition, BlockPosition, ShiftMatrix};

/// Version tag for the sign/ordering conventions fixed across the crate
/// (reflection action `e_k -> e_k - a_{ik} e_i`, graded-lex monomials,
/// cochain differential signs). Cache keys embed this string so that a
/// convention change can never silently reuse stale results.
pub const CONVENTION_VERSION: &str = "row-convention-1";
