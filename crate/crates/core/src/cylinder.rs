//! Cylinder functions: maps on paths that only read finitely many grid
//! points. On a finite grid every function is one, so the point of the type
//! is the explicit coordinate list, which drives the separating test
//! families used to compare measures.

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::space::{Path, PathSpace, StateId};
use crate::weight::Weight;

/// phi(gamma) = table[(gamma(c_1), ..., gamma(c_k))], zero off the table.
#[derive(Clone, Debug, PartialEq)]
pub struct CylinderFunction<W: Weight> {
    coords: Vec<usize>,
    table: BTreeMap<Vec<StateId>, W>,
}

impl<W: Weight> CylinderFunction<W> {
    /// `coords` must be strictly increasing and nonempty.
    pub fn new(coords: Vec<usize>, table: BTreeMap<Vec<StateId>, W>) -> Result<Self> {
        if coords.is_empty() || !coords.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::BadCylinderCoords);
        }
        for tuple in table.keys() {
            if tuple.len() != coords.len() {
                return Err(Error::BadCylinderTuple { got: tuple.len(), want: coords.len() });
            }
        }
        Ok(CylinderFunction { coords, table })
    }

    /// The 0/1 indicator of {gamma : gamma(c_i) = tuple_i for all i}.
    pub fn indicator(coords: Vec<usize>, tuple: Vec<StateId>) -> Result<Self> {
        let mut table = BTreeMap::new();
        if tuple.len() != coords.len() {
            return Err(Error::BadCylinderTuple { got: tuple.len(), want: coords.len() });
        }
        table.insert(tuple, W::one());
        CylinderFunction::new(coords, table)
    }

    pub fn coords(&self) -> &[usize] {
        &self.coords
    }

    pub fn max_coord(&self) -> usize {
        *self.coords.last().expect("coords nonempty by construction")
    }

    pub fn check_coords(&self, last_index: usize) -> Result<()> {
        if self.max_coord() > last_index {
            return Err(Error::IndexOutOfRange {
                index: self.max_coord(),
                len: last_index + 1,
            });
        }
        Ok(())
    }

    pub fn evaluate(&self, path: &Path) -> W {
        let tuple: Vec<StateId> = self.coords.iter().map(|&c| path.state(c)).collect();
        self.table.get(&tuple).cloned().unwrap_or_else(W::zero)
    }
}

/// All indicator cylinder functions reading at most `max_arity` grid points,
/// in a fixed order: arity ascending, then coordinate sets lexicographic,
/// then state tuples lexicographic. The order is part of the crate's
/// deterministic-output contract.
pub fn enumerate_test_functions<W: Weight>(
    space: &PathSpace,
    max_arity: usize,
) -> Vec<CylinderFunction<W>> {
    let t = space.len();
    let n = space.n_states();
    let mut out = Vec::new();
    for arity in 1..=max_arity.min(t) {
        for coords in (0..t).combinations(arity) {
            for tuple in (0..arity).map(|_| 0..n).multi_cartesian_product() {
                out.push(
                    CylinderFunction::indicator(coords.clone(), tuple)
                        .expect("enumerated coords and tuples are well formed"),
                );
            }
        }
    }
    out
}

/// The default separating family: all indicators reading one or two points.
pub fn default_test_family<W: Weight>(space: &PathSpace) -> Vec<CylinderFunction<W>> {
    enumerate_test_functions(space, 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::PathMeasure;
    use crate::weight::Exact;
    use std::sync::Arc;

    fn w(n: i64, d: i64) -> Exact {
        <Exact as Weight>::ratio(n, d)
    }

    #[test]
    fn family_sizes_are_binomial_sums() {
        let s = PathSpace::unconstrained(3, 2, false).unwrap();
        // 3*2 singles + 3*4 pairs.
        assert_eq!(default_test_family::<Exact>(&s).len(), 18);
        // Plus 1*8 triples.
        assert_eq!(enumerate_test_functions::<Exact>(&s, 3).len(), 26);
        // Arity is clamped to the grid length.
        assert_eq!(enumerate_test_functions::<Exact>(&s, 9).len(), 26);
    }

    #[test]
    fn enumeration_order_is_frozen() {
        let s = PathSpace::unconstrained(3, 2, false).unwrap();
        let fam = enumerate_test_functions::<Exact>(&s, 2);
        assert_eq!(fam[0], CylinderFunction::indicator(vec![0], vec![0]).unwrap());
        assert_eq!(fam[1], CylinderFunction::indicator(vec![0], vec![1]).unwrap());
        assert_eq!(fam[2], CylinderFunction::indicator(vec![1], vec![0]).unwrap());
        assert_eq!(fam[6], CylinderFunction::indicator(vec![0, 1], vec![0, 0]).unwrap());
        assert_eq!(fam[17], CylinderFunction::indicator(vec![1, 2], vec![1, 1]).unwrap());
    }

    #[test]
    fn integrals_against_the_correlated_fixture() {
        let s = Arc::new(PathSpace::unconstrained(3, 2, false).unwrap());
        let m = PathMeasure::new(
            s.clone(),
            [
                (Path::new(vec![0, 0, 0]), w(1, 2)),
                (Path::new(vec![1, 0, 1]), w(1, 2)),
            ],
        )
        .unwrap();
        let phi = CylinderFunction::indicator(vec![0, 2], vec![0, 0]).unwrap();
        assert_eq!(m.integrate(&phi).unwrap(), w(1, 2));
        let quartet = PathMeasure::new(
            s,
            [
                (Path::new(vec![0, 0, 0]), w(1, 4)),
                (Path::new(vec![0, 0, 1]), w(1, 4)),
                (Path::new(vec![1, 0, 0]), w(1, 4)),
                (Path::new(vec![1, 0, 1]), w(1, 4)),
            ],
        )
        .unwrap();
        assert_eq!(quartet.integrate(&phi).unwrap(), w(1, 4));
    }

    #[test]
    fn malformed_functions_are_rejected() {
        assert!(matches!(
            CylinderFunction::<Exact>::indicator(vec![2, 1], vec![0, 0]),
            Err(Error::BadCylinderCoords)
        ));
        assert!(matches!(
            CylinderFunction::<Exact>::indicator(vec![], vec![]),
            Err(Error::BadCylinderCoords)
        ));
        assert!(matches!(
            CylinderFunction::<Exact>::indicator(vec![0, 1], vec![0]),
            Err(Error::BadCylinderTuple { got: 1, want: 2 })
        ));
        let phi = CylinderFunction::<Exact>::indicator(vec![0, 4], vec![0, 0]).unwrap();
        assert!(phi.check_coords(2).is_err());
        assert!(phi.check_coords(4).is_ok());
    }
}
