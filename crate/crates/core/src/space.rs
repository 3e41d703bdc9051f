//! Finite path spaces: a time grid, a finite state space, and an optional
//! per-step reachability constraint.
//!
//! A path assigns one state to every grid point. When the state space
//! carries a metric `d` and the space a step bound `L`, a path is admissible
//! iff `d(x_i, x_{i+1}) <= L * (t_{i+1} - t_i)` for every consecutive pair;
//! without a bound every path is admissible. Admissibility is deliberately
//! local so that gluing two admissible pieces that share their endpoint is
//! again admissible.
//!
//! Cyclic grids additionally offer rotation as a symmetry. Construction
//! rejects cyclic spaces where rotating an admissible path could leave the
//! space, so rotation-closure is an invariant rather than a hope.

use num::rational::Rational64;
use num::Zero;

use crate::error::{Error, Result};

/// States are indices into the state space's label table.
pub type StateId = usize;

/// Grid times, metric entries, and step bounds are exact rationals.
pub type Time = Rational64;

/// Raw-count guard for full path enumeration: `|S|^T` must stay below this
/// unless a caller supplies its own cap (the CLI reads MARKOVHULL_ENUM_CAP).
pub const DEFAULT_ENUM_CAP: u64 = 10_000_000;

/// Strictly increasing, nonempty list of rational times.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TimeGrid {
    times: Vec<Time>,
}

impl TimeGrid {
    pub fn new(times: Vec<Time>) -> Result<Self> {
        if times.is_empty() || times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadTimeGrid);
        }
        Ok(TimeGrid { times })
    }

    /// Grid 0, 1, ..., n-1. Handy for tests and generators.
    pub fn unit(n: usize) -> Result<Self> {
        TimeGrid::new((0..n as i64).map(Time::from).collect())
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees nonempty
    }

    pub fn last_index(&self) -> usize {
        self.times.len() - 1
    }

    pub fn time(&self, i: usize) -> Time {
        self.times[i]
    }

    pub fn times(&self) -> &[Time] {
        &self.times
    }

    /// The common spacing, if all gaps agree. `None` for single-point grids
    /// and non-uniform grids.
    pub fn uniform_spacing(&self) -> Option<Time> {
        let mut gaps = self.times.windows(2).map(|w| w[1] - w[0]);
        let first = gaps.next()?;
        gaps.all(|g| g == first).then_some(first)
    }
}

/// Finite state space: distinct labels, optionally a rational metric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateSpace {
    labels: Vec<String>,
    metric: Option<Vec<Vec<Time>>>,
}

impl StateSpace {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        Self::build(labels, None)
    }

    pub fn with_metric(labels: Vec<String>, metric: Vec<Vec<Time>>) -> Result<Self> {
        Self::build(labels, Some(metric))
    }

    /// States labelled "0".."n-1" with no metric.
    pub fn numbered(n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| i.to_string()).collect())
    }

    /// States "0".."n-1" with the cycle-graph metric d(i,j) = min(|i-j|, n-|i-j|).
    pub fn cycle_graph(n: usize) -> Result<Self> {
        let metric = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let d = i.abs_diff(j);
                        Time::from(d.min(n - d) as i64)
                    })
                    .collect()
            })
            .collect();
        Self::build((0..n).map(|i| i.to_string()).collect(), Some(metric))
    }

    fn build(labels: Vec<String>, metric: Option<Vec<Vec<Time>>>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::BadStateSpace);
        }
        for (i, a) in labels.iter().enumerate() {
            if labels[..i].contains(a) {
                return Err(Error::BadStateSpace);
            }
        }
        if let Some(m) = &metric {
            let n = labels.len();
            if m.len() != n || m.iter().any(|row| row.len() != n) {
                return Err(Error::BadMetric);
            }
            for i in 0..n {
                if !m[i][i].is_zero() {
                    return Err(Error::BadMetric);
                }
                for j in 0..n {
                    if m[i][j] != m[j][i] || m[i][j] < Time::zero() {
                        return Err(Error::BadMetric);
                    }
                }
            }
        }
        Ok(StateSpace { labels, metric })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn label(&self, s: StateId) -> &str {
        &self.labels[s]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<StateId> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn metric(&self) -> Option<&Vec<Vec<Time>>> {
        self.metric.as_ref()
    }

    pub fn distance(&self, a: StateId, b: StateId) -> Option<Time> {
        self.metric.as_ref().map(|m| m[a][b])
    }
}

/// Inclusive range of grid indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    lo: usize,
    hi: usize,
}

impl Interval {
    pub fn new(lo: usize, hi: usize, grid_len: usize) -> Result<Self> {
        if lo > hi || hi >= grid_len {
            return Err(Error::BadInterval { lo, hi, len: grid_len });
        }
        Ok(Interval { lo, hi })
    }

    pub fn lo(&self) -> usize {
        self.lo
    }

    pub fn hi(&self) -> usize {
        self.hi
    }

    pub fn len(&self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, i: usize) -> bool {
        self.lo <= i && i <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Split into the sub-intervals at and before / at and after `pin`.
    /// Both halves contain the pin.
    pub fn split_at(&self, pin: usize) -> Result<(Interval, Interval)> {
        if !self.contains(pin) {
            return Err(Error::IndexOutOfRange { index: pin, len: self.hi + 1 });
        }
        Ok((Interval { lo: self.lo, hi: pin }, Interval { lo: pin, hi: self.hi }))
    }
}

/// One state per grid point.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    states: Vec<StateId>,
}

impl Path {
    pub fn new(states: Vec<StateId>) -> Self {
        Path { states }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, i: usize) -> StateId {
        self.states[i]
    }

    pub fn states(&self) -> &[StateId] {
        &self.states
    }
}

impl From<Vec<StateId>> for Path {
    fn from(states: Vec<StateId>) -> Self {
        Path::new(states)
    }
}

/// A path fragment: states on an inclusive index interval.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartialPath {
    interval: Interval,
    states: Vec<StateId>,
}

impl PartialPath {
    pub fn new(interval: Interval, states: Vec<StateId>) -> Result<Self> {
        if states.len() != interval.len() {
            return Err(Error::PathLengthMismatch { got: states.len(), want: interval.len() });
        }
        Ok(PartialPath { interval, states })
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn states(&self) -> &[StateId] {
        &self.states
    }

    /// State at an absolute grid index inside the interval.
    pub fn state_at(&self, grid_index: usize) -> StateId {
        debug_assert!(self.interval.contains(grid_index));
        self.states[grid_index - self.interval.lo]
    }

    pub fn first(&self) -> StateId {
        self.states[0]
    }

    pub fn last(&self) -> StateId {
        *self.states.last().expect("intervals are nonempty")
    }
}

/// A finite path space: grid, states, optional step bound, optional cyclic
/// symmetry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathSpace {
    grid: TimeGrid,
    states: StateSpace,
    step_bound: Option<Time>,
    cyclic: bool,
}

impl PathSpace {
    pub fn new(
        grid: TimeGrid,
        states: StateSpace,
        step_bound: Option<Time>,
        cyclic: bool,
    ) -> Result<Self> {
        if let Some(bound) = step_bound {
            if states.metric().is_none() {
                return Err(Error::StepBoundWithoutMetric);
            }
            if bound < Time::zero() {
                return Err(Error::NegativeStepBound);
            }
        }
        if cyclic && grid.len() >= 2 && grid.uniform_spacing().is_none() {
            return Err(Error::CyclicNonUniform);
        }
        let space = PathSpace { grid, states, step_bound, cyclic };
        if cyclic && space.step_bound.is_some() {
            space.check_rotation_closure()?;
        }
        Ok(space)
    }

    /// Unconstrained space: unit grid of `times` points over `n` plain states.
    pub fn unconstrained(times: usize, n: usize, cyclic: bool) -> Result<Self> {
        PathSpace::new(TimeGrid::unit(times)?, StateSpace::numbered(n)?, None, cyclic)
    }

    /// Rotating an admissible path makes the old last->first pair a
    /// consecutive step, so that pair must be allowed whenever the path
    /// exists. Equivalently: reach(x -> y in T-1 allowed steps) implies
    /// allowed(y -> x). O(T * |S|^3) boolean matrix powers.
    fn check_rotation_closure(&self) -> Result<()> {
        let n = self.states.len();
        let t = self.grid.len();
        if t <= 1 {
            return Ok(());
        }
        let allowed: Vec<Vec<bool>> = (0..n)
            .map(|a| (0..n).map(|b| self.step_allowed(0, a, b)).collect())
            .collect();
        let mut reach = vec![vec![false; n]; n];
        for (a, row) in reach.iter_mut().enumerate() {
            row[a] = true;
        }
        for _ in 0..t - 1 {
            let mut next = vec![vec![false; n]; n];
            for a in 0..n {
                for m in 0..n {
                    if reach[a][m] {
                        for (b, ok) in allowed[m].iter().enumerate() {
                            if *ok {
                                next[a][b] = true;
                            }
                        }
                    }
                }
            }
            reach = next;
        }
        for a in 0..n {
            for b in 0..n {
                if reach[a][b] && !allowed[b][a] {
                    return Err(Error::RotationNotClosed { from: b, to: a });
                }
            }
        }
        Ok(())
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn states(&self) -> &StateSpace {
        &self.states
    }

    pub fn step_bound(&self) -> Option<Time> {
        self.step_bound
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn last_index(&self) -> usize {
        self.grid.last_index()
    }

    pub fn full_interval(&self) -> Interval {
        Interval { lo: 0, hi: self.grid.last_index() }
    }

    pub fn interval(&self, lo: usize, hi: usize) -> Result<Interval> {
        Interval::new(lo, hi, self.grid.len())
    }

    /// Pins where the conditional-independence operator can act
    /// non-trivially. Boundary pins always act as the identity.
    pub fn interior_pins(&self) -> Vec<usize> {
        if self.grid.len() <= 2 {
            Vec::new()
        } else {
            (1..self.grid.last_index()).collect()
        }
    }

    /// May the step between grid points `gap` and `gap + 1` move from `a` to
    /// `b`?
    pub fn step_allowed(&self, gap: usize, a: StateId, b: StateId) -> bool {
        match self.step_bound {
            None => true,
            Some(bound) => {
                let d = self.states.distance(a, b).expect("bound implies metric");
                let dt = self.grid.time(gap + 1) - self.grid.time(gap);
                d <= bound * dt
            }
        }
    }

    pub fn validate_path(&self, path: &Path) -> Result<()> {
        if path.len() != self.grid.len() {
            return Err(Error::PathLengthMismatch { got: path.len(), want: self.grid.len() });
        }
        match path.states().iter().find(|&&s| s >= self.states.len()) {
            Some(&s) => Err(Error::UnknownState(s)),
            None => Ok(()),
        }
    }

    pub fn validate_partial(&self, pp: &PartialPath) -> Result<()> {
        if pp.interval().hi() > self.grid.last_index() {
            return Err(Error::BadInterval {
                lo: pp.interval().lo(),
                hi: pp.interval().hi(),
                len: self.grid.len(),
            });
        }
        match pp.states().iter().find(|&&s| s >= self.states.len()) {
            Some(&s) => Err(Error::UnknownState(s)),
            None => Ok(()),
        }
    }

    pub fn is_admissible(&self, path: &Path) -> bool {
        debug_assert!(self.validate_path(path).is_ok());
        (0..path.len().saturating_sub(1))
            .all(|i| self.step_allowed(i, path.state(i), path.state(i + 1)))
    }

    pub fn is_admissible_partial(&self, pp: &PartialPath) -> bool {
        debug_assert!(self.validate_partial(pp).is_ok());
        let lo = pp.interval().lo();
        (0..pp.states().len().saturating_sub(1))
            .all(|k| self.step_allowed(lo + k, pp.states()[k], pp.states()[k + 1]))
    }

    /// Lazy depth-first enumeration of all admissible paths, in
    /// lexicographic state order.
    pub fn paths(&self) -> impl Iterator<Item = Path> + '_ {
        PartialIter::new(self, self.full_interval()).map(|pp| Path::new(pp.states))
    }

    /// Lazy enumeration of admissible fragments on `interval`.
    pub fn partial_paths(&self, interval: Interval) -> impl Iterator<Item = PartialPath> + '_ {
        PartialIter::new(self, interval)
    }

    /// Materialize all admissible paths. The cap guards the raw product
    /// `|S|^T`, not the (possibly much smaller) admissible count.
    pub fn enumerate_paths(&self, cap: Option<u64>) -> Result<Vec<Path>> {
        self.check_enum_cap(self.grid.len(), cap)?;
        Ok(self.paths().collect())
    }

    /// Count admissible paths without materializing them. Same cap rule.
    pub fn count_paths(&self, cap: Option<u64>) -> Result<u64> {
        self.check_enum_cap(self.grid.len(), cap)?;
        Ok(self.paths().count() as u64)
    }

    fn check_enum_cap(&self, points: usize, cap: Option<u64>) -> Result<()> {
        let cap = cap.unwrap_or(DEFAULT_ENUM_CAP);
        let raw = (self.states.len() as u128).checked_pow(points as u32);
        match raw {
            Some(r) if r <= cap as u128 => Ok(()),
            _ => Err(Error::EnumerationTooLarge(self.states.len(), points, cap)),
        }
    }

    pub fn restrict(&self, path: &Path, interval: Interval) -> Result<PartialPath> {
        self.validate_path(path)?;
        if interval.hi() > self.grid.last_index() {
            return Err(Error::BadInterval {
                lo: interval.lo(),
                hi: interval.hi(),
                len: self.grid.len(),
            });
        }
        PartialPath::new(interval, path.states()[interval.lo()..=interval.hi()].to_vec())
    }

    /// Concatenate two fragments that share exactly their touching grid
    /// point. Locality of admissibility makes the result admissible whenever
    /// both pieces are.
    pub fn glue_partial(&self, past: &PartialPath, future: &PartialPath) -> Result<PartialPath> {
        if past.interval().hi() != future.interval().lo() {
            return Err(Error::NotAdjacent(
                format!("{:?}", past.interval()),
                format!("{:?}", future.interval()),
            ));
        }
        if past.last() != future.first() {
            return Err(Error::GlueEndpointMismatch);
        }
        let mut states = past.states().to_vec();
        states.extend_from_slice(&future.states()[1..]);
        PartialPath::new(
            Interval { lo: past.interval().lo(), hi: future.interval().hi() },
            states,
        )
    }

    /// Glue fragments covering `[0, pin]` and `[pin, last]` into a full path.
    pub fn glue(&self, past: &PartialPath, future: &PartialPath) -> Result<Path> {
        let glued = self.glue_partial(past, future)?;
        if glued.interval() != self.full_interval() {
            return Err(Error::BadInterval {
                lo: glued.interval().lo(),
                hi: glued.interval().hi(),
                len: self.grid.len(),
            });
        }
        Ok(Path::new(glued.states))
    }

    /// Rotate a path by whole grid steps: the state at index i moves to
    /// index i + steps (mod T). Only cyclic spaces offer this symmetry.
    pub fn shift(&self, path: &Path, steps: i64) -> Result<Path> {
        if !self.cyclic {
            return Err(Error::ShiftNeedsCyclic);
        }
        self.validate_path(path)?;
        let t = self.grid.len() as i64;
        let s = steps.rem_euclid(t) as usize;
        let t = t as usize;
        let states = (0..t).map(|i| path.state((i + t - s) % t)).collect();
        Ok(Path::new(states))
    }

    /// Translate a fragment's interval by whole grid steps, keeping its
    /// states. This is the window rendering of the time-shift on restricted
    /// paths; it exists only while the translated interval stays inside the
    /// window.
    pub fn shift_partial(&self, pp: &PartialPath, steps: i64) -> Result<PartialPath> {
        self.validate_partial(pp)?;
        if self.grid.len() >= 2 && self.grid.uniform_spacing().is_none() {
            return Err(Error::ShiftNeedsUniformSpacing);
        }
        let lo = pp.interval().lo() as i64 + steps;
        let hi = pp.interval().hi() as i64 + steps;
        if lo < 0 || hi > self.grid.last_index() as i64 {
            return Err(Error::ShiftOutOfWindow { steps });
        }
        PartialPath::new(Interval { lo: lo as usize, hi: hi as usize }, pp.states().to_vec())
    }

    /// The evaluation map e_t.
    pub fn evaluate(&self, path: &Path, t: usize) -> Result<StateId> {
        if t > self.grid.last_index() {
            return Err(Error::IndexOutOfRange { index: t, len: self.grid.len() });
        }
        Ok(path.state(t))
    }
}

/// DFS over admissible fragments, yielding lexicographically.
struct PartialIter<'a> {
    space: &'a PathSpace,
    interval: Interval,
    // Stack of prefixes; children pushed in reverse state order.
    stack: Vec<Vec<StateId>>,
}

impl<'a> PartialIter<'a> {
    fn new(space: &'a PathSpace, interval: Interval) -> Self {
        let stack = (0..space.n_states()).rev().map(|s| vec![s]).collect();
        PartialIter { space, interval, stack }
    }
}

impl Iterator for PartialIter<'_> {
    type Item = PartialPath;

    fn next(&mut self) -> Option<PartialPath> {
        while let Some(prefix) = self.stack.pop() {
            if prefix.len() == self.interval.len() {
                return Some(
                    PartialPath::new(self.interval, prefix).expect("prefix length matches"),
                );
            }
            let gap = self.interval.lo() + prefix.len() - 1;
            let last = *prefix.last().expect("prefixes are nonempty");
            for s in (0..self.space.n_states()).rev() {
                if self.space.step_allowed(gap, last, s) {
                    let mut next = prefix.clone();
                    next.push(s);
                    self.stack.push(next);
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Time {
        Time::new(n, d)
    }

    #[test]
    fn grid_must_increase() {
        assert!(TimeGrid::new(vec![]).is_err());
        assert!(TimeGrid::new(vec![rat(0, 1), rat(0, 1)]).is_err());
        assert!(TimeGrid::new(vec![rat(1, 1), rat(1, 2)]).is_err());
        let g = TimeGrid::new(vec![rat(0, 1), rat(1, 2), rat(1, 1)]).unwrap();
        assert_eq!(g.uniform_spacing(), Some(rat(1, 2)));
        let g = TimeGrid::new(vec![rat(0, 1), rat(1, 2), rat(2, 1)]).unwrap();
        assert_eq!(g.uniform_spacing(), None);
    }

    #[test]
    fn labels_must_be_distinct() {
        assert!(StateSpace::new(vec!["a".into(), "a".into()]).is_err());
        assert!(StateSpace::new(vec![]).is_err());
    }

    #[test]
    fn metric_validation() {
        let asym = vec![vec![rat(0, 1), rat(1, 1)], vec![rat(2, 1), rat(0, 1)]];
        assert!(StateSpace::with_metric(vec!["a".into(), "b".into()], asym).is_err());
        let diag = vec![vec![rat(1, 1), rat(1, 1)], vec![rat(1, 1), rat(0, 1)]];
        assert!(StateSpace::with_metric(vec!["a".into(), "b".into()], diag).is_err());
    }

    #[test]
    fn step_bound_needs_metric() {
        let grid = TimeGrid::unit(3).unwrap();
        let states = StateSpace::numbered(2).unwrap();
        assert!(matches!(
            PathSpace::new(grid, states, Some(rat(1, 1)), false),
            Err(Error::StepBoundWithoutMetric)
        ));
    }

    // Cycle graph on three states: every step has distance <= 1, so a unit
    // bound over unit spacing forbids nothing and all 3^3 paths remain.
    #[test]
    fn cycle_graph_bound_keeps_all_27_paths() {
        let space = PathSpace::new(
            TimeGrid::unit(3).unwrap(),
            StateSpace::cycle_graph(3).unwrap(),
            Some(rat(1, 1)),
            true,
        )
        .unwrap();
        assert_eq!(space.count_paths(None).unwrap(), 27);
    }

    // Line metric on three states, unit bound, cyclic: (0,1,2) is admissible
    // but its rotation (2,0,1) would need the step 2->0 of length 2.
    #[test]
    fn rotation_closure_rejected_on_line_metric() {
        let metric = vec![
            vec![rat(0, 1), rat(1, 1), rat(2, 1)],
            vec![rat(1, 1), rat(0, 1), rat(1, 1)],
            vec![rat(2, 1), rat(1, 1), rat(0, 1)],
        ];
        let states = StateSpace::with_metric(
            vec!["0".into(), "1".into(), "2".into()],
            metric,
        )
        .unwrap();
        let err = PathSpace::new(TimeGrid::unit(3).unwrap(), states, Some(rat(1, 1)), true);
        assert!(matches!(err, Err(Error::RotationNotClosed { .. })));
    }

    #[test]
    fn tight_bound_filters_paths() {
        // Two states at distance 1, bound 1/2 over unit spacing: only the
        // two constant paths survive.
        let metric = vec![vec![rat(0, 1), rat(1, 1)], vec![rat(1, 1), rat(0, 1)]];
        let states = StateSpace::with_metric(vec!["0".into(), "1".into()], metric).unwrap();
        let space =
            PathSpace::new(TimeGrid::unit(4).unwrap(), states, Some(rat(1, 2)), false).unwrap();
        let paths = space.enumerate_paths(None).unwrap();
        assert_eq!(paths.len(), 2);
        assert!(paths.iter().all(|p| p.states().iter().all(|&s| s == p.state(0))));
    }

    #[test]
    fn spacing_enters_the_bound() {
        // Same two states, bound 1, but spacing 1/2: moving needs distance
        // <= 1/2, so again only constants. With unit spacing all 4 paths of
        // length 2 are fine.
        let metric = vec![vec![rat(0, 1), rat(1, 1)], vec![rat(1, 1), rat(0, 1)]];
        let states = StateSpace::with_metric(vec!["0".into(), "1".into()], metric).unwrap();
        let grid = TimeGrid::new(vec![rat(0, 1), rat(1, 2)]).unwrap();
        let space = PathSpace::new(grid, states.clone(), Some(rat(1, 1)), false).unwrap();
        assert_eq!(space.count_paths(None).unwrap(), 2);
        let space =
            PathSpace::new(TimeGrid::unit(2).unwrap(), states, Some(rat(1, 1)), false).unwrap();
        assert_eq!(space.count_paths(None).unwrap(), 4);
    }

    #[test]
    fn enumeration_cap_guards_raw_count() {
        let space = PathSpace::unconstrained(5, 4, false).unwrap();
        assert!(matches!(
            space.enumerate_paths(Some(1000)),
            Err(Error::EnumerationTooLarge(4, 5, 1000))
        ));
        assert_eq!(space.count_paths(Some(1024)).unwrap(), 1024);
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let space = PathSpace::unconstrained(2, 2, false).unwrap();
        let paths: Vec<_> = space.paths().collect();
        let want: Vec<Path> = [[0, 0], [0, 1], [1, 0], [1, 1]]
            .iter()
            .map(|s| Path::new(s.to_vec()))
            .collect();
        assert_eq!(paths, want);
    }

    #[test]
    fn restrict_then_glue_round_trips() {
        let space = PathSpace::unconstrained(4, 3, false).unwrap();
        let path = Path::new(vec![2, 0, 1, 2]);
        let past = space.restrict(&path, space.interval(0, 2).unwrap()).unwrap();
        let future = space.restrict(&path, space.interval(2, 3).unwrap()).unwrap();
        assert_eq!(space.glue(&past, &future).unwrap(), path);
    }

    #[test]
    fn glue_rejects_mismatched_pieces() {
        let space = PathSpace::unconstrained(3, 2, false).unwrap();
        let a = PartialPath::new(space.interval(0, 1).unwrap(), vec![0, 1]).unwrap();
        let b_far = PartialPath::new(space.interval(2, 2).unwrap(), vec![0]).unwrap();
        assert!(matches!(space.glue_partial(&a, &b_far), Err(Error::NotAdjacent(_, _))));
        let b_off = PartialPath::new(space.interval(1, 2).unwrap(), vec![0, 0]).unwrap();
        assert!(matches!(space.glue_partial(&a, &b_off), Err(Error::GlueEndpointMismatch)));
    }

    #[test]
    fn rotation_moves_states_forward() {
        let space = PathSpace::unconstrained(3, 3, true).unwrap();
        let path = Path::new(vec![0, 1, 2]);
        assert_eq!(space.shift(&path, 1).unwrap(), Path::new(vec![2, 0, 1]));
        assert_eq!(space.shift(&path, -1).unwrap(), Path::new(vec![1, 2, 0]));
        assert_eq!(space.shift(&path, 3).unwrap(), path);
        // Rotating by t then by -t is the identity for any path.
        for p in space.paths() {
            let back = space.shift(&space.shift(&p, 2).unwrap(), -2).unwrap();
            assert_eq!(back, p);
        }
    }

    #[test]
    fn shift_requires_cyclic() {
        let space = PathSpace::unconstrained(3, 2, false).unwrap();
        assert!(matches!(
            space.shift(&Path::new(vec![0, 0, 0]), 1),
            Err(Error::ShiftNeedsCyclic)
        ));
    }

    #[test]
    fn partial_shift_translates_interval() {
        let space = PathSpace::unconstrained(5, 2, true).unwrap();
        let pp = PartialPath::new(space.interval(1, 3).unwrap(), vec![0, 1, 0]).unwrap();
        let moved = space.shift_partial(&pp, 1).unwrap();
        assert_eq!(moved.interval(), space.interval(2, 4).unwrap());
        assert_eq!(moved.states(), pp.states());
        assert!(matches!(
            space.shift_partial(&pp, 2),
            Err(Error::ShiftOutOfWindow { steps: 2 })
        ));
        assert!(matches!(
            space.shift_partial(&pp, -2),
            Err(Error::ShiftOutOfWindow { steps: -2 })
        ));
    }

    #[test]
    fn interior_pins_skip_boundaries() {
        assert_eq!(PathSpace::unconstrained(1, 2, false).unwrap().interior_pins(), Vec::<usize>::new());
        assert_eq!(PathSpace::unconstrained(2, 2, false).unwrap().interior_pins(), Vec::<usize>::new());
        assert_eq!(PathSpace::unconstrained(5, 2, false).unwrap().interior_pins(), vec![1, 2, 3]);
    }
}
