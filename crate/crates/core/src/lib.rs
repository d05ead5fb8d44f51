//! Exact-arithmetic toolkit for coarse geometry at desk scale.
//!
//! Everything operates on finite windows: finite metric spaces with
//! rational distance matrices, finite group windows with partial
//! multiplication tables, covers and colored decompositions of those
//! spaces, nerves with rational barycentric coordinates. All checks are
//! exact; a check that cannot be decided inside the window reports
//! `Uncertified` instead of guessing.

pub mod amenable;
pub mod boost;
pub mod decomp;
pub mod error;
pub mod fixtures;
pub mod group;
pub mod json;
pub mod metric;
pub mod nerve;
pub mod q;
pub mod report;
#[cfg(test)]
pub(crate) mod testutil;

pub use amenable::{
    ActionWindow, FCoverWindow, FSet, PipelineResult, SubgroupFamilyWindow, SubgroupWindow,
};
pub use boost::{BoostedDecomposition, CombineResult};
pub use decomp::{
    Cover, CoverStats, DecompositionCertificate, NamedSet, Piece, SearchOutcome, SpacePieces,
    Witness,
};
pub use error::Error;
pub use nerve::{
    EquivarianceOutcome, EquivariantMapWindow, NervePoint, PhiMap, SimplicialAction,
    UniformComplex,
};
pub use metric::{
    ControlFunction, ControlPair, FamilyMap, FiniteMetricSpace, MetricFamily, PointSet, SpaceMap,
    Subspace,
};
pub use q::{Extended, Q};
pub use report::{Finding, Report, Verdict};
