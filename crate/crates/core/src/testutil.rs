//! Small fixture builders shared across unit tests.

use crate::decomp::NamedSet;
use crate::metric::{FiniteMetricSpace, PointSet};
use std::sync::Arc;

pub(crate) fn path_space(id: &str, n: usize) -> Arc<FiniteMetricSpace> {
    let points = (0..n).map(|i| i.to_string()).collect();
    let coords = (0..n).map(|i| vec![i as i64]).collect();
    Arc::new(FiniteMetricSpace::new_lattice(id, points, coords).unwrap())
}

/// Points of a path space whose integer labels lie in `lo..=hi`.
pub(crate) fn interval(space: &Arc<FiniteMetricSpace>, lo: i64, hi: i64) -> PointSet {
    let pts: Vec<u32> = (lo..=hi)
        .filter_map(|v| space.point_index(&v.to_string()))
        .collect();
    PointSet::new(pts)
}

pub(crate) fn named_interval(
    space: &Arc<FiniteMetricSpace>,
    name: &str,
    lo: i64,
    hi: i64,
) -> NamedSet {
    NamedSet::new(name, interval(space, lo, hi))
}
