//! Finite groups acting on the state space, and path measures invariant
//! under the pointwise action.
//!
//! For a measure invariant under the translation action of a group on
//! itself, the conditionals of any disintegration are all translates of
//! the one at the identity, and the pin operators preserve invariance, so
//! the whole hull iteration happens inside the invariant measures.

use std::collections::BTreeMap;

use crate::disintegration::Disintegration;
use crate::error::{Error, Result};
use crate::markov::{markovianise_set, max_markov_defect};
use crate::measure::{PathMeasure, StateMeasure};
use crate::space::{Path, StateId};
use crate::weight::{within, Weight};

/// A finite group given by its multiplication table. Construction checks
/// the Latin square property, a two-sided identity, associativity, and
/// inverses, in that order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    labels: Vec<String>,
    identity: usize,
}

impl FiniteGroup {
    pub fn new(table: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|row| row.len() != n) {
            return Err(Error::NotLatinSquare);
        }
        for i in 0..n {
            let mut row_seen = vec![false; n];
            let mut col_seen = vec![false; n];
            for j in 0..n {
                let r = table[i][j];
                let c = table[j][i];
                if r >= n || c >= n || row_seen[r] || col_seen[c] {
                    return Err(Error::NotLatinSquare);
                }
                row_seen[r] = true;
                col_seen[c] = true;
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or(Error::NoIdentity)?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::NotAssociative);
                    }
                }
            }
        }
        for a in 0..n {
            if !(0..n).any(|b| table[a][b] == identity && table[b][a] == identity) {
                return Err(Error::NoInverse(a));
            }
        }
        let labels = match labels {
            Some(labels) => {
                if labels.len() != n {
                    return Err(Error::NotLatinSquare);
                }
                labels
            }
            None => (0..n).map(|i| format!("g{i}")).collect(),
        };
        Ok(FiniteGroup { table, labels, identity })
    }

    /// The cyclic group of order n, elements r0..r{n-1} under addition.
    pub fn cyclic(n: usize) -> Result<Self> {
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        FiniteGroup::new(table, Some((0..n).map(|i| format!("r{i}")).collect()))
    }

    /// The symmetric group on three letters: permutations in lexicographic
    /// one-line order, composed as (p * q)(i) = p[q[i]].
    pub fn symmetric3() -> Self {
        let perms: Vec<[usize; 3]> =
            vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).expect("closed");
        let table = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| index([p[q[0]], p[q[1]], p[q[2]]]))
                    .collect()
            })
            .collect();
        let labels = perms.iter().map(|p| format!("{}{}{}", p[0], p[1], p[2])).collect();
        FiniteGroup::new(table, Some(labels)).expect("composition table is a group")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, a: usize) -> usize {
        (0..self.order())
            .find(|&b| self.table[a][b] == self.identity)
            .expect("inverses checked at construction")
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// Which side the group multiplies on when it acts on itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActionSide {
    Left,
    Right,
}

/// An action of a finite group on the state set by bijections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAction {
    group: FiniteGroup,
    side: ActionSide,
    /// table[g][x] is g acting on x.
    table: Vec<Vec<StateId>>,
}

impl GroupAction {
    /// Checks that each element acts bijectively, the identity acts
    /// trivially, and the action law holds: g(hx) = (gh)x for a left
    /// action, g(hx) = (hg)x for a right action.
    pub fn new(group: FiniteGroup, table: Vec<Vec<StateId>>, side: ActionSide) -> Result<Self> {
        let order = group.order();
        if table.len() != order {
            return Err(Error::ActionBijectionFailure { states: 0, order });
        }
        let states = table.first().map_or(0, |row| row.len());
        if states == 0 {
            return Err(Error::ActionBijectionFailure { states, order });
        }
        for row in &table {
            if row.len() != states {
                return Err(Error::ActionBijectionFailure { states, order });
            }
            let mut seen = vec![false; states];
            for &y in row {
                if y >= states || seen[y] {
                    return Err(Error::ActionBijectionFailure { states, order });
                }
                seen[y] = true;
            }
        }
        let e = group.identity();
        if (0..states).any(|x| table[e][x] != x) {
            return Err(Error::CrossCheckFailed { context: "identity must act trivially" });
        }
        for g in 0..order {
            for h in 0..order {
                let composite = match side {
                    ActionSide::Left => group.mul(g, h),
                    ActionSide::Right => group.mul(h, g),
                };
                for x in 0..states {
                    if table[g][table[h][x]] != table[composite][x] {
                        return Err(Error::CrossCheckFailed {
                            context: "action law g(hx) = (gh)x",
                        });
                    }
                }
            }
        }
        Ok(GroupAction { group, side, table })
    }

    /// The group acting on itself by multiplication: states are the group
    /// elements.
    pub fn translation(group: FiniteGroup, side: ActionSide) -> Self {
        let order = group.order();
        let table = (0..order)
            .map(|g| {
                (0..order)
                    .map(|x| match side {
                        ActionSide::Left => group.mul(g, x),
                        ActionSide::Right => group.mul(x, g),
                    })
                    .collect()
            })
            .collect();
        GroupAction::new(group, table, side).expect("translation tables satisfy the action law")
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn side(&self) -> ActionSide {
        self.side
    }

    pub fn n_states(&self) -> usize {
        self.table[0].len()
    }

    pub fn act(&self, g: usize, x: StateId) -> StateId {
        self.table[g][x]
    }

    pub fn translate_path(&self, g: usize, path: &Path) -> Path {
        Path::new(path.states().iter().map(|&x| self.act(g, x)).collect())
    }

    /// Pushforward under the pointwise action of g. The image atoms are
    /// revalidated, so an action that breaks admissibility errors here.
    pub fn translate_measure<W: Weight>(
        &self,
        g: usize,
        m: &PathMeasure<W>,
    ) -> Result<PathMeasure<W>> {
        if m.space().n_states() != self.n_states() {
            return Err(Error::SpaceMismatch);
        }
        m.pushforward(|p| self.translate_path(g, p))
    }
}

/// The normalized uniform measure on the group, viewed on a state set of
/// the same size.
pub fn haar<W: Weight>(group: &FiniteGroup) -> StateMeasure<W> {
    StateMeasure::uniform(group.order())
}

/// (1/|G|) sum_g g#m: the invariant part of m. Always invariant, and fixes
/// m exactly when m is already invariant.
pub fn group_average<W: Weight>(
    action: &GroupAction,
    m: &PathMeasure<W>,
) -> Result<PathMeasure<W>> {
    let order = action.group.order();
    let translates: Vec<PathMeasure<W>> = (0..order)
        .map(|g| action.translate_measure(g, m))
        .collect::<Result<_>>()?;
    let share = W::ratio(1, order as i64);
    let parts: Vec<(W, &PathMeasure<W>)> =
        translates.iter().map(|t| (share.clone(), t)).collect();
    PathMeasure::mixture(&parts)
}

/// g#m = m for every group element, within tol.
pub fn is_translation_invariant<W: Weight>(
    action: &GroupAction,
    m: &PathMeasure<W>,
    tol: &W,
) -> Result<bool> {
    for g in 0..action.group.order() {
        if !action.translate_measure(g, m)?.approx_eq(m, tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// For a measure invariant under the group translating itself, the whole
/// conditional family at a pin is generated by the identity conditional:
/// eta_x = x # eta_e. Verifies that and returns eta_e.
///
/// Fails with MarginalNotHaar if the pin marginal is not uniform (invariant
/// measures always have uniform marginals), NotInvariant if the measure is
/// not invariant, and CrossCheckFailed if a translated conditional
/// disagrees with the directly disintegrated one.
pub fn invariant_disintegration<W: Weight>(
    m: &PathMeasure<W>,
    group: &FiniteGroup,
    side: ActionSide,
    pin: usize,
    tol: &W,
) -> Result<PathMeasure<W>> {
    if m.space().n_states() != group.order() {
        return Err(Error::SpaceMismatch);
    }
    let action = GroupAction::translation(group.clone(), side);
    let marginal = m.marginal_at(pin)?;
    let share = m.total_mass() * W::ratio(1, group.order() as i64);
    for x in 0..group.order() {
        let diff = (marginal.weight(x).clone() - share.clone()).abs();
        if !within(&diff, &W::zero(), tol) {
            return Err(Error::MarginalNotHaar { pin });
        }
    }
    if !is_translation_invariant(&action, m, tol)? {
        return Err(Error::NotInvariant);
    }
    let d = Disintegration::disintegrate(m, pin)?;
    let eta_e = d.conditional(group.identity())?;
    for (x, eta_x) in d.conditionals() {
        // Under either translation action, x is the unique element moving
        // the identity state to x.
        let moved = action.translate_measure(x, eta_e)?;
        if !moved.approx_eq(eta_x, tol)? {
            return Err(Error::CrossCheckFailed { context: "translated conditional mismatch" });
        }
    }
    Ok(eta_e.clone())
}

/// Invariance survives one pin application. The input must be invariant;
/// returns whether the image still is.
pub fn check_markov_preserves_invariance<W: Weight>(
    action: &GroupAction,
    m: &PathMeasure<W>,
    pins: &[usize],
    tol: &W,
) -> Result<bool> {
    if !is_translation_invariant(action, m, tol)? {
        return Err(Error::NotInvariant);
    }
    let image = markovianise_set(m, pins)?;
    is_translation_invariant(action, &image, tol)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegularityRow<W: Weight> {
    pub pins: Vec<usize>,
    pub invariant: bool,
    pub max_defect: W,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegularityReport<W: Weight> {
    pub rows: Vec<RegularityRow<W>>,
    pub all_invariant: bool,
}

/// Apply every pin subset of size at most two (including the empty one,
/// ascending within each subset) to an invariant measure and record
/// whether invariance survives, together with the image's residual defect.
pub fn markov_regularity_report<W: Weight>(
    action: &GroupAction,
    m: &PathMeasure<W>,
    tol: &W,
) -> Result<RegularityReport<W>> {
    if !is_translation_invariant(action, m, tol)? {
        return Err(Error::NotInvariant);
    }
    let interior = m.space().interior_pins();
    let mut subsets: Vec<Vec<usize>> = vec![vec![]];
    subsets.extend(interior.iter().map(|&p| vec![p]));
    for (i, &p) in interior.iter().enumerate() {
        for &q in &interior[i + 1..] {
            subsets.push(vec![p, q]);
        }
    }
    let mut rows = Vec::with_capacity(subsets.len());
    let mut all_invariant = true;
    for pins in subsets {
        let image = markovianise_set(m, &pins)?;
        let invariant = is_translation_invariant(action, &image, tol)?;
        all_invariant &= invariant;
        rows.push(RegularityRow { pins, invariant, max_defect: max_markov_defect(&image)? });
    }
    Ok(RegularityReport { rows, all_invariant })
}

/// Group elements by conjugacy class representative, useful when reporting.
pub fn element_orders(group: &FiniteGroup) -> BTreeMap<usize, usize> {
    let mut orders = BTreeMap::new();
    for a in 0..group.order() {
        let mut k = 1;
        let mut acc = a;
        while acc != group.identity() {
            acc = group.mul(acc, a);
            k += 1;
        }
        orders.insert(a, k);
    }
    orders
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::PathSpace;
    use crate::weight::Exact;
    use std::sync::Arc;

    fn w(n: i64, d: i64) -> Exact {
        <Exact as Weight>::ratio(n, d)
    }

    #[test]
    fn cyclic_groups_validate() {
        let z3 = FiniteGroup::cyclic(3).unwrap();
        assert_eq!(z3.order(), 3);
        assert_eq!(z3.identity(), 0);
        assert_eq!(z3.inverse(1), 2);
        assert_eq!(z3.mul(2, 2), 1);
        assert_eq!(z3.label(1), "r1");
    }

    #[test]
    fn symmetric3_is_the_nonabelian_order_six_group() {
        let s3 = FiniteGroup::symmetric3();
        assert_eq!(s3.order(), 6);
        assert_eq!(s3.label(s3.identity()), "012");
        let noncommuting = (0..6)
            .flat_map(|a| (0..6).map(move |b| (a, b)))
            .any(|(a, b)| s3.mul(a, b) != s3.mul(b, a));
        assert!(noncommuting);
        let orders = element_orders(&s3);
        assert_eq!(orders.values().filter(|&&k| k == 2).count(), 3);
        assert_eq!(orders.values().filter(|&&k| k == 3).count(), 2);
    }

    #[test]
    fn bad_tables_are_rejected() {
        // Repeated entry in a row.
        assert!(matches!(
            FiniteGroup::new(vec![vec![0, 0], vec![1, 1]], None),
            Err(Error::NotLatinSquare)
        ));
        // Subtraction mod 3 is a quasigroup with no two-sided identity.
        let sub3 = vec![vec![0, 2, 1], vec![1, 0, 2], vec![2, 1, 0]];
        assert!(matches!(FiniteGroup::new(sub3, None), Err(Error::NoIdentity)));
        // A loop of order five: Latin with identity, not associative.
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 3, 4, 0, 1],
            vec![3, 4, 1, 2, 0],
            vec![4, 2, 0, 1, 3],
        ];
        assert!(matches!(FiniteGroup::new(loop5, None), Err(Error::NotAssociative)));
    }

    #[test]
    fn action_laws_are_enforced() {
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let left = GroupAction::translation(z3.clone(), ActionSide::Left);
        assert_eq!(left.act(1, 2), 0);
        // Every element acting trivially is a legitimate action.
        assert!(GroupAction::new(z3.clone(), vec![vec![0, 1, 2]; 3], ActionSide::Left).is_ok());
        // Non-bijective row.
        let constant_rows = vec![vec![0, 1, 2], vec![0, 0, 0], vec![0, 1, 2]];
        assert!(matches!(
            GroupAction::new(z3.clone(), constant_rows, ActionSide::Left),
            Err(Error::ActionBijectionFailure { .. })
        ));
        // Bijective rows violating the action law.
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let _ = z2;
        let bad_law = vec![vec![0, 1, 2], vec![1, 0, 2], vec![0, 1, 2]];
        assert!(matches!(
            GroupAction::new(z3, bad_law, ActionSide::Left),
            Err(Error::CrossCheckFailed { .. })
        ));
    }

    fn z3_space() -> Arc<PathSpace> {
        Arc::new(PathSpace::unconstrained(3, 3, true).unwrap())
    }

    #[test]
    fn averaging_produces_invariant_measures() {
        let s = z3_space();
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let action = GroupAction::translation(z3, ActionSide::Left);
        let seed = PathMeasure::new(
            s.clone(),
            [
                (Path::new(vec![0, 0, 0]), w(2, 3)),
                (Path::new(vec![0, 1, 2]), w(1, 3)),
            ],
        )
        .unwrap();
        assert!(!is_translation_invariant(&action, &seed, &Weight::zero()).unwrap());
        let averaged = group_average(&action, &seed).unwrap();
        assert!(is_translation_invariant(&action, &averaged, &Weight::zero()).unwrap());
        assert_eq!(averaged.total_mass(), w(1, 1));
        // Averaging an invariant measure returns it unchanged.
        assert_eq!(group_average(&action, &averaged).unwrap(), averaged);
    }

    #[test]
    fn invariant_conditionals_are_translates_of_the_identity_one() {
        let s = z3_space();
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let action = GroupAction::translation(z3.clone(), ActionSide::Left);
        let seed = PathMeasure::new(
            s.clone(),
            [
                (Path::new(vec![0, 0, 0]), w(1, 2)),
                (Path::new(vec![0, 1, 2]), w(1, 4)),
                (Path::new(vec![0, 2, 1]), w(1, 4)),
            ],
        )
        .unwrap();
        let m = group_average(&action, &seed).unwrap();
        for pin in 0..3 {
            let eta_e = invariant_disintegration(&m, &z3, ActionSide::Left, pin, &Weight::zero())
                .unwrap();
            assert_eq!(eta_e.pin_state_at(pin).unwrap(), z3.identity());
            assert_eq!(eta_e.total_mass(), w(1, 1));
        }
    }

    #[test]
    fn invariant_disintegration_rejects_bad_inputs() {
        let s = z3_space();
        let z3 = FiniteGroup::cyclic(3).unwrap();
        // Not even Haar at the pin.
        let lump = PathMeasure::new(s.clone(), [(Path::new(vec![0, 0, 0]), w(1, 1))]).unwrap();
        assert!(matches!(
            invariant_disintegration(&lump, &z3, ActionSide::Left, 1, &Weight::zero()),
            Err(Error::MarginalNotHaar { pin: 1 })
        ));
        // Haar at the pin but not invariant.
        let skew = PathMeasure::new(
            s,
            [
                (Path::new(vec![0, 0, 0]), w(1, 3)),
                (Path::new(vec![1, 1, 0]), w(1, 3)),
                (Path::new(vec![2, 2, 0]), w(1, 3)),
            ],
        )
        .unwrap();
        assert!(matches!(
            invariant_disintegration(&skew, &z3, ActionSide::Left, 0, &Weight::zero()),
            Err(Error::NotInvariant)
        ));
    }

    #[test]
    fn pins_preserve_invariance() {
        let s = z3_space();
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let action = GroupAction::translation(z3, ActionSide::Right);
        let seed = PathMeasure::new(
            s.clone(),
            [
                (Path::new(vec![0, 1, 0]), w(1, 2)),
                (Path::new(vec![0, 2, 2]), w(1, 2)),
            ],
        )
        .unwrap();
        let m = group_average(&action, &seed).unwrap();
        assert!(check_markov_preserves_invariance(&action, &m, &[1], &Weight::zero()).unwrap());
        let report = markov_regularity_report(&action, &m, &Weight::zero()).unwrap();
        // Subsets: {}, {1}.
        assert_eq!(report.rows.len(), 2);
        assert!(report.all_invariant);
        assert_eq!(report.rows[0].pins, Vec::<usize>::new());
        assert_eq!(report.rows[1].pins, vec![1]);
        assert_eq!(report.rows[1].max_defect, w(0, 1));
    }

    #[test]
    fn non_invariant_inputs_are_refused_by_the_reports() {
        let s = z3_space();
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let action = GroupAction::translation(z3, ActionSide::Left);
        let lump = PathMeasure::new(s, [(Path::new(vec![0, 0, 0]), w(1, 1))]).unwrap();
        assert!(matches!(
            check_markov_preserves_invariance(&action, &lump, &[1], &Weight::zero()),
            Err(Error::NotInvariant)
        ));
        assert!(matches!(
            markov_regularity_report(&action, &lump, &Weight::zero()),
            Err(Error::NotInvariant)
        ));
    }
}
