//! Finitely supported nonnegative measures on path spaces.
//!
//! Atoms live in ordered maps keyed by canonically ordered paths, so two
//! measures are equal exactly when they are structurally equal. All
//! operations preserve that canonical form; zero-weight atoms are pruned on
//! construction and never stored.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cylinder::CylinderFunction;
use crate::error::{Error, Result};
use crate::space::{Interval, PartialPath, Path, PathSpace, StateId};
use crate::weight::{within, Mode, Weight};

pub(crate) fn check_same_space(a: &Arc<PathSpace>, b: &Arc<PathSpace>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::SpaceMismatch)
    }
}

fn check_weight<W: Weight>(w: &W) -> Result<()> {
    if w.is_negative() || !w.is_finite() {
        return Err(Error::BadWeight);
    }
    Ok(())
}

/// A weighting of the states at one grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct StateMeasure<W: Weight> {
    weights: Vec<W>,
}

impl<W: Weight> StateMeasure<W> {
    pub fn new(weights: Vec<W>) -> Result<Self> {
        for w in &weights {
            check_weight(w)?;
        }
        Ok(StateMeasure { weights })
    }

    pub fn zero(n: usize) -> Self {
        StateMeasure { weights: vec![W::zero(); n] }
    }

    pub fn dirac(n: usize, x: StateId) -> Self {
        let mut m = Self::zero(n);
        m.weights[x] = W::one();
        m
    }

    /// The normalized uniform distribution 1/n on each state.
    pub fn uniform(n: usize) -> Self {
        StateMeasure { weights: vec![W::ratio(1, n as i64); n] }
    }

    pub fn n_states(&self) -> usize {
        self.weights.len()
    }

    pub fn weight(&self, x: StateId) -> &W {
        &self.weights[x]
    }

    pub fn weights(&self) -> &[W] {
        &self.weights
    }

    pub fn support(&self) -> impl Iterator<Item = StateId> + '_ {
        self.weights.iter().enumerate().filter(|(_, w)| !w.is_zero()).map(|(x, _)| x)
    }

    pub fn total_mass(&self) -> W {
        self.weights.iter().fold(W::zero(), |acc, w| acc + w.clone())
    }

    pub fn scaled(&self, c: &W) -> Result<Self> {
        check_weight(c)?;
        Ok(StateMeasure { weights: self.weights.iter().map(|w| w.clone() * c.clone()).collect() })
    }

    pub fn tv_distance(&self, other: &Self) -> Result<W> {
        if self.weights.len() != other.weights.len() {
            return Err(Error::SpaceMismatch);
        }
        let sum = self
            .weights
            .iter()
            .zip(&other.weights)
            .fold(W::zero(), |acc, (a, b)| acc + (a.clone() - b.clone()).abs());
        Ok(sum * W::ratio(1, 2))
    }

    pub fn approx_eq(&self, other: &Self, tol: &W) -> Result<bool> {
        if tol.is_zero() {
            return Ok(self == other);
        }
        Ok(within(&self.tv_distance(other)?, &W::zero(), tol))
    }
}

/// A weighting of ordered state pairs read off at two grid points.
#[derive(Clone, Debug, PartialEq)]
pub struct PairStateMeasure<W: Weight> {
    n: usize,
    weights: BTreeMap<(StateId, StateId), W>,
}

impl<W: Weight> PairStateMeasure<W> {
    pub fn new(n: usize, entries: impl IntoIterator<Item = ((StateId, StateId), W)>) -> Result<Self> {
        let mut weights = BTreeMap::new();
        for ((a, b), w) in entries {
            if a >= n || b >= n {
                return Err(Error::UnknownState(a.max(b)));
            }
            check_weight(&w)?;
            let slot = weights.entry((a, b)).or_insert_with(W::zero);
            *slot = slot.clone() + w;
        }
        weights.retain(|_, w| !w.is_zero());
        Ok(PairStateMeasure { n, weights })
    }

    pub fn n_states(&self) -> usize {
        self.n
    }

    pub fn weight(&self, a: StateId, b: StateId) -> W {
        self.weights.get(&(a, b)).cloned().unwrap_or_else(W::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = (&(StateId, StateId), &W)> {
        self.weights.iter()
    }

    pub fn total_mass(&self) -> W {
        self.weights.values().fold(W::zero(), |acc, w| acc + w.clone())
    }
}

/// A finitely supported measure on the admissible paths of one space.
#[derive(Clone, Debug, PartialEq)]
pub struct PathMeasure<W: Weight> {
    space: Arc<PathSpace>,
    atoms: BTreeMap<Path, W>,
}

impl<W: Weight> PathMeasure<W> {
    /// Build from (path, weight) pairs. Duplicate paths accumulate; zero
    /// weights are dropped; inadmissible paths and negative or non-finite
    /// weights are rejected.
    pub fn new(space: Arc<PathSpace>, atoms: impl IntoIterator<Item = (Path, W)>) -> Result<Self> {
        let mut map: BTreeMap<Path, W> = BTreeMap::new();
        for (path, w) in atoms {
            space.validate_path(&path)?;
            if !space.is_admissible(&path) {
                return Err(Error::InadmissiblePath);
            }
            check_weight(&w)?;
            let slot = map.entry(path).or_insert_with(W::zero);
            *slot = slot.clone() + w;
        }
        map.retain(|_, w| !w.is_zero());
        Ok(PathMeasure { space, atoms: map })
    }

    pub fn zero(space: Arc<PathSpace>) -> Self {
        PathMeasure { space, atoms: BTreeMap::new() }
    }

    /// Unit mass on a single path.
    pub fn dirac(space: Arc<PathSpace>, path: Path) -> Result<Self> {
        PathMeasure::new(space, [(path, W::one())])
    }

    pub fn mode(&self) -> Mode {
        W::MODE
    }

    pub fn space(&self) -> &Arc<PathSpace> {
        &self.space
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&Path, &W)> {
        self.atoms.iter()
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn weight_of(&self, path: &Path) -> W {
        self.atoms.get(path).cloned().unwrap_or_else(W::zero)
    }

    pub fn total_mass(&self) -> W {
        self.atoms.values().fold(W::zero(), |acc, w| acc + w.clone())
    }

    pub fn is_probability(&self, tol: &W) -> bool {
        let mass = self.total_mass();
        within(&mass, &W::one(), tol) && within(&W::one(), &mass, tol)
    }

    pub fn scaled(&self, c: &W) -> Result<Self> {
        check_weight(c)?;
        PathMeasure::new(
            self.space.clone(),
            self.atoms.iter().map(|(p, w)| (p.clone(), w.clone() * c.clone())),
        )
    }

    pub fn normalized(&self) -> Result<Self> {
        let mass = self.total_mass();
        if mass.is_zero() {
            return Err(Error::ZeroMass);
        }
        PathMeasure::new(
            self.space.clone(),
            self.atoms.iter().map(|(p, w)| (p.clone(), w.clone() / mass.clone())),
        )
    }

    /// Nonnegative combination sum_i c_i * m_i. All parts must share a space.
    pub fn mixture(parts: &[(W, &PathMeasure<W>)]) -> Result<Self> {
        let (_, first) = parts.first().ok_or(Error::ZeroMass)?;
        let space = first.space.clone();
        let mut atoms: Vec<(Path, W)> = Vec::new();
        for (c, m) in parts {
            check_weight(c)?;
            check_same_space(&space, &m.space)?;
            for (p, w) in &m.atoms {
                atoms.push((p.clone(), w.clone() * c.clone()));
            }
        }
        PathMeasure::new(space, atoms)
    }

    /// Image measure under a path map: weight lands on f(path). The map need
    /// not be injective; colliding atoms accumulate. Images must be
    /// admissible.
    pub fn pushforward(&self, f: impl Fn(&Path) -> Path) -> Result<Self> {
        PathMeasure::new(self.space.clone(), self.atoms.iter().map(|(p, w)| (f(p), w.clone())))
    }

    /// Preimage measure under an injective map covering the support: the
    /// returned measure assigns to gamma the weight of g(gamma). `domain`
    /// must enumerate candidate preimages; failing to hit every support atom
    /// exactly once is an error, so `pullback(domain, g)` inverts
    /// `pushforward(g)` whenever g is injective on the domain.
    pub fn pullback(
        &self,
        domain: impl IntoIterator<Item = Path>,
        g: impl Fn(&Path) -> Path,
    ) -> Result<Self> {
        let mut hits: BTreeMap<&Path, usize> = BTreeMap::new();
        let mut atoms: Vec<(Path, W)> = Vec::new();
        for gamma in domain {
            let image = g(&gamma);
            if let Some((stored, w)) = self.atoms.get_key_value(&image) {
                let count = hits.entry(stored).or_insert(0);
                *count += 1;
                if *count > 1 {
                    return Err(Error::PullbackNotInjective { hits: *count });
                }
                atoms.push((gamma, w.clone()));
            }
        }
        if hits.len() < self.atoms.len() {
            return Err(Error::PullbackNotOnto { missing: self.atoms.len() - hits.len() });
        }
        PathMeasure::new(self.space.clone(), atoms)
    }

    /// The one-time marginal (e_t)_# of the measure.
    pub fn marginal_at(&self, t: usize) -> Result<StateMeasure<W>> {
        if t > self.space.last_index() {
            return Err(Error::IndexOutOfRange { index: t, len: self.space.len() });
        }
        let mut weights = vec![W::zero(); self.space.n_states()];
        for (p, w) in &self.atoms {
            let x = p.state(t);
            weights[x] = weights[x].clone() + w.clone();
        }
        Ok(StateMeasure { weights })
    }

    /// The two-time marginal (e_{t1} x e_{t2})_#.
    pub fn pair_marginal(&self, t1: usize, t2: usize) -> Result<PairStateMeasure<W>> {
        let last = self.space.last_index();
        if t1 > last || t2 > last {
            return Err(Error::IndexOutOfRange { index: t1.max(t2), len: self.space.len() });
        }
        PairStateMeasure::new(
            self.space.n_states(),
            self.atoms.iter().map(|(p, w)| ((p.state(t1), p.state(t2)), w.clone())),
        )
    }

    /// Does every one-time marginal equal `mu` (within `tol` in total
    /// variation)?
    pub fn is_mu_invariant(&self, mu: &StateMeasure<W>, tol: &W) -> Result<bool> {
        for t in 0..self.space.len() {
            if !self.marginal_at(t)?.approx_eq(mu, tol)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Total variation distance: half the sum of absolute weight
    /// differences over the union of supports.
    pub fn tv_distance(&self, other: &Self) -> Result<W> {
        check_same_space(&self.space, &other.space)?;
        let mut sum = W::zero();
        for (p, w) in &self.atoms {
            sum = sum + (w.clone() - other.weight_of(p)).abs();
        }
        for (p, w) in &other.atoms {
            if !self.atoms.contains_key(p) {
                sum = sum + w.clone();
            }
        }
        Ok(sum * W::ratio(1, 2))
    }

    /// Equality within `tol` in total variation; `tol = 0` is structural
    /// equality.
    pub fn approx_eq(&self, other: &Self, tol: &W) -> Result<bool> {
        check_same_space(&self.space, &other.space)?;
        if tol.is_zero() {
            return Ok(self.atoms == other.atoms);
        }
        Ok(within(&self.tv_distance(other)?, &W::zero(), tol))
    }

    /// Integral of a cylinder function against the measure.
    pub fn integrate(&self, phi: &CylinderFunction<W>) -> Result<W> {
        phi.check_coords(self.space.last_index())?;
        let mut acc = W::zero();
        for (p, w) in &self.atoms {
            acc = acc + w.clone() * phi.evaluate(p);
        }
        Ok(acc)
    }

    /// Pushforward under restriction to a sub-interval.
    pub fn restrict_to(&self, interval: Interval) -> Result<PartialPathMeasure<W>> {
        let mut atoms: Vec<(PartialPath, W)> = Vec::new();
        for (p, w) in &self.atoms {
            atoms.push((self.space.restrict(p, interval)?, w.clone()));
        }
        PartialPathMeasure::new(self.space.clone(), interval, atoms)
    }

    /// The single state every support atom passes through at `pin`, if any.
    pub fn pin_state_at(&self, pin: usize) -> Result<StateId> {
        if pin > self.space.last_index() {
            return Err(Error::IndexOutOfRange { index: pin, len: self.space.len() });
        }
        let mut it = self.atoms.keys().map(|p| p.state(pin));
        let first = it.next().ok_or(Error::ZeroMass)?;
        if it.all(|x| x == first) {
            Ok(first)
        } else {
            Err(Error::NotPinned { pin })
        }
    }
}

/// A finitely supported measure on path fragments over one fixed interval.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialPathMeasure<W: Weight> {
    space: Arc<PathSpace>,
    interval: Interval,
    atoms: BTreeMap<PartialPath, W>,
}

impl<W: Weight> PartialPathMeasure<W> {
    pub fn new(
        space: Arc<PathSpace>,
        interval: Interval,
        atoms: impl IntoIterator<Item = (PartialPath, W)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<PartialPath, W> = BTreeMap::new();
        for (pp, w) in atoms {
            space.validate_partial(&pp)?;
            if pp.interval() != interval {
                return Err(Error::IntervalMismatch);
            }
            if !space.is_admissible_partial(&pp) {
                return Err(Error::InadmissiblePath);
            }
            check_weight(&w)?;
            let slot = map.entry(pp).or_insert_with(W::zero);
            *slot = slot.clone() + w;
        }
        map.retain(|_, w| !w.is_zero());
        Ok(PartialPathMeasure { space, interval, atoms: map })
    }

    pub fn zero(space: Arc<PathSpace>, interval: Interval) -> Self {
        PartialPathMeasure { space, interval, atoms: BTreeMap::new() }
    }

    pub fn space(&self) -> &Arc<PathSpace> {
        &self.space
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&PartialPath, &W)> {
        self.atoms.iter()
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn weight_of(&self, pp: &PartialPath) -> W {
        self.atoms.get(pp).cloned().unwrap_or_else(W::zero)
    }

    pub fn total_mass(&self) -> W {
        self.atoms.values().fold(W::zero(), |acc, w| acc + w.clone())
    }

    pub fn scaled(&self, c: &W) -> Result<Self> {
        check_weight(c)?;
        PartialPathMeasure::new(
            self.space.clone(),
            self.interval,
            self.atoms.iter().map(|(p, w)| (p.clone(), w.clone() * c.clone())),
        )
    }

    pub fn normalized(&self) -> Result<Self> {
        let mass = self.total_mass();
        if mass.is_zero() {
            return Err(Error::ZeroMass);
        }
        PartialPathMeasure::new(
            self.space.clone(),
            self.interval,
            self.atoms.iter().map(|(p, w)| (p.clone(), w.clone() / mass.clone())),
        )
    }

    pub fn mixture(parts: &[(W, &PartialPathMeasure<W>)]) -> Result<Self> {
        let (_, first) = parts.first().ok_or(Error::ZeroMass)?;
        let space = first.space.clone();
        let interval = first.interval;
        let mut atoms: Vec<(PartialPath, W)> = Vec::new();
        for (c, m) in parts {
            check_weight(c)?;
            check_same_space(&space, &m.space)?;
            if m.interval != interval {
                return Err(Error::IntervalMismatch);
            }
            for (p, w) in &m.atoms {
                atoms.push((p.clone(), w.clone() * c.clone()));
            }
        }
        PartialPathMeasure::new(space, interval, atoms)
    }

    /// Image measure under a fragment map into `target` (which may differ
    /// from the source interval).
    pub fn pushforward(
        &self,
        target: Interval,
        f: impl Fn(&PartialPath) -> PartialPath,
    ) -> Result<Self> {
        PartialPathMeasure::new(
            self.space.clone(),
            target,
            self.atoms.iter().map(|(p, w)| (f(p), w.clone())),
        )
    }

    pub fn marginal_at(&self, t: usize) -> Result<StateMeasure<W>> {
        if !self.interval.contains(t) {
            return Err(Error::IndexOutOfRange { index: t, len: self.space.len() });
        }
        let mut weights = vec![W::zero(); self.space.n_states()];
        for (p, w) in &self.atoms {
            let x = p.state_at(t);
            weights[x] = weights[x].clone() + w.clone();
        }
        StateMeasure::new(weights)
    }

    /// Pushforward under restriction to a nested sub-interval.
    pub fn restrict_to(&self, sub: Interval) -> Result<Self> {
        if !self.interval.contains_interval(&sub) {
            return Err(Error::BadInterval { lo: sub.lo(), hi: sub.hi(), len: self.interval.len() });
        }
        let mut atoms: Vec<(PartialPath, W)> = Vec::new();
        for (p, w) in &self.atoms {
            let states = p.states()[sub.lo() - self.interval.lo()..=sub.hi() - self.interval.lo()]
                .to_vec();
            atoms.push((PartialPath::new(sub, states)?, w.clone()));
        }
        PartialPathMeasure::new(self.space.clone(), sub, atoms)
    }

    /// Reinterpret a full-interval fragment measure as a path measure.
    pub fn to_full(&self) -> Result<PathMeasure<W>> {
        if self.interval != self.space.full_interval() {
            return Err(Error::BadInterval {
                lo: self.interval.lo(),
                hi: self.interval.hi(),
                len: self.space.len(),
            });
        }
        PathMeasure::new(
            self.space.clone(),
            self.atoms.iter().map(|(p, w)| (Path::new(p.states().to_vec()), w.clone())),
        )
    }

    /// Translate the whole measure's interval by `steps` grid points.
    pub fn shift(&self, steps: i64) -> Result<Self> {
        let mut atoms: Vec<(PartialPath, W)> = Vec::new();
        let mut target = None;
        for (p, w) in &self.atoms {
            let moved = self.space.shift_partial(p, steps)?;
            target = Some(moved.interval());
            atoms.push((moved, w.clone()));
        }
        let target = match target {
            Some(iv) => iv,
            // Empty measure: still translate the carrier interval.
            None => {
                let probe = PartialPath::new(
                    self.interval,
                    vec![0; self.interval.len()],
                )?;
                self.space.shift_partial(&probe, steps)?.interval()
            }
        };
        PartialPathMeasure::new(self.space.clone(), target, atoms)
    }

    pub fn tv_distance(&self, other: &Self) -> Result<W> {
        check_same_space(&self.space, &other.space)?;
        if self.interval != other.interval {
            return Err(Error::IntervalMismatch);
        }
        let mut sum = W::zero();
        for (p, w) in &self.atoms {
            sum = sum + (w.clone() - other.weight_of(p)).abs();
        }
        for (p, w) in &other.atoms {
            if !self.atoms.contains_key(p) {
                sum = sum + w.clone();
            }
        }
        Ok(sum * W::ratio(1, 2))
    }

    pub fn approx_eq(&self, other: &Self, tol: &W) -> Result<bool> {
        check_same_space(&self.space, &other.space)?;
        if self.interval != other.interval {
            return Err(Error::IntervalMismatch);
        }
        if tol.is_zero() {
            return Ok(self.atoms == other.atoms);
        }
        Ok(within(&self.tv_distance(other)?, &W::zero(), tol))
    }

    pub fn pin_state_at(&self, pin: usize) -> Result<StateId> {
        if !self.interval.contains(pin) {
            return Err(Error::IndexOutOfRange { index: pin, len: self.space.len() });
        }
        let mut it = self.atoms.keys().map(|p| p.state_at(pin));
        let first = it.next().ok_or(Error::ZeroMass)?;
        if it.all(|x| x == first) {
            Ok(first)
        } else {
            Err(Error::NotPinned { pin })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::Exact;

    fn space() -> Arc<PathSpace> {
        Arc::new(PathSpace::unconstrained(3, 2, false).unwrap())
    }

    fn w(n: i64, d: i64) -> Exact {
        <Exact as Weight>::ratio(n, d)
    }

    /// Half unit mass on (0,0,0) and on (1,0,1): the correlated fixture used
    /// across the crate.
    fn fixture(space: &Arc<PathSpace>) -> PathMeasure<Exact> {
        PathMeasure::new(
            space.clone(),
            [
                (Path::new(vec![0, 0, 0]), w(1, 2)),
                (Path::new(vec![1, 0, 1]), w(1, 2)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn construction_validates() {
        let s = space();
        assert!(matches!(
            PathMeasure::new(s.clone(), [(Path::new(vec![0, 0]), w(1, 1))]),
            Err(Error::PathLengthMismatch { .. })
        ));
        assert!(matches!(
            PathMeasure::new(s.clone(), [(Path::new(vec![0, 0, 5]), w(1, 1))]),
            Err(Error::UnknownState(5))
        ));
        assert!(matches!(
            PathMeasure::new(s.clone(), [(Path::new(vec![0, 0, 0]), w(-1, 2))]),
            Err(Error::BadWeight)
        ));
        let nan = PathMeasure::<f64>::new(s, [(Path::new(vec![0, 0, 0]), f64::NAN)]);
        assert!(matches!(nan, Err(Error::BadWeight)));
    }

    #[test]
    fn construction_rejects_inadmissible_atoms() {
        let metric = vec![
            vec![Time::from(0), Time::from(1)],
            vec![Time::from(1), Time::from(0)],
        ];
        use crate::space::{StateSpace, Time, TimeGrid};
        let states = StateSpace::with_metric(vec!["0".into(), "1".into()], metric).unwrap();
        let s = Arc::new(
            PathSpace::new(TimeGrid::unit(3).unwrap(), states, Some(Time::new(1, 2)), false)
                .unwrap(),
        );
        assert!(matches!(
            PathMeasure::new(s, [(Path::new(vec![0, 1, 0]), w(1, 1))]),
            Err(Error::InadmissiblePath)
        ));
    }

    #[test]
    fn duplicates_accumulate_and_zeros_vanish() {
        let s = space();
        let m = PathMeasure::new(
            s,
            [
                (Path::new(vec![0, 0, 0]), w(1, 3)),
                (Path::new(vec![0, 0, 0]), w(1, 6)),
                (Path::new(vec![1, 1, 1]), w(0, 1)),
            ],
        )
        .unwrap();
        assert_eq!(m.atom_count(), 1);
        assert_eq!(m.weight_of(&Path::new(vec![0, 0, 0])), w(1, 2));
    }

    #[test]
    fn mass_scaling_normalization() {
        let m = fixture(&space());
        assert_eq!(m.total_mass(), w(1, 1));
        let half = m.scaled(&w(1, 2)).unwrap();
        assert_eq!(half.total_mass(), w(1, 2));
        let back = half.normalized().unwrap();
        assert_eq!(back, m);
        let zero = PathMeasure::<Exact>::zero(space());
        assert!(matches!(zero.normalized(), Err(Error::ZeroMass)));
    }

    #[test]
    fn mixture_checks_spaces() {
        let a = fixture(&space());
        let other = Arc::new(PathSpace::unconstrained(3, 3, false).unwrap());
        let b = PathMeasure::new(other, [(Path::new(vec![0, 0, 0]), w(1, 1))]).unwrap();
        assert!(matches!(
            PathMeasure::mixture(&[(w(1, 2), &a), (w(1, 2), &b)]),
            Err(Error::SpaceMismatch)
        ));
    }

    #[test]
    fn pushforward_preserves_mass_and_merges() {
        let m = fixture(&space());
        // Collapse everything onto one path.
        let img = m.pushforward(|_| Path::new(vec![0, 1, 0])).unwrap();
        assert_eq!(img.atom_count(), 1);
        assert_eq!(img.total_mass(), w(1, 1));
    }

    #[test]
    fn pullback_inverts_injective_pushforward() {
        let s = Arc::new(PathSpace::unconstrained(3, 2, true).unwrap());
        let m = PathMeasure::new(
            s.clone(),
            [
                (Path::new(vec![0, 0, 1]), w(2, 3)),
                (Path::new(vec![1, 0, 1]), w(1, 3)),
            ],
        )
        .unwrap();
        let rotated = m.pushforward(|p| s.shift(p, 1).unwrap()).unwrap();
        let back = rotated.pullback(s.paths(), |p| s.shift(p, 1).unwrap()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn pullback_detects_bad_maps() {
        let s = space();
        let m = fixture(&s);
        // Constant map hits one support atom many times.
        let constant = m.pullback(s.paths(), |_| Path::new(vec![0, 0, 0]));
        assert!(matches!(constant, Err(Error::PullbackNotInjective { .. })));
        // Identity over a domain that misses the support.
        let narrow = m.pullback([Path::new(vec![0, 0, 0])], |p| p.clone());
        assert!(matches!(narrow, Err(Error::PullbackNotOnto { missing: 1 })));
    }

    #[test]
    fn marginals_of_the_fixture() {
        let m = fixture(&space());
        let m0 = m.marginal_at(0).unwrap();
        assert_eq!(m0.weight(0), &w(1, 2));
        assert_eq!(m0.weight(1), &w(1, 2));
        let m1 = m.marginal_at(1).unwrap();
        assert_eq!(m1.weight(0), &w(1, 1));
        assert_eq!(m1.weight(1), &w(0, 1));
        let pair = m.pair_marginal(0, 2).unwrap();
        assert_eq!(pair.weight(0, 0), w(1, 2));
        assert_eq!(pair.weight(1, 1), w(1, 2));
        assert_eq!(pair.weight(0, 1), w(0, 1));
    }

    #[test]
    fn fixture_is_not_mu_invariant() {
        let m = fixture(&space());
        let uniform = StateMeasure::uniform(2);
        assert!(!m.is_mu_invariant(&uniform, &Weight::zero()).unwrap());
        // A product of uniform marginals is.
        let s = space();
        let all = s.enumerate_paths(None).unwrap();
        let n = all.len() as i64;
        let m = PathMeasure::new(s, all.into_iter().map(|p| (p, w(1, n)))).unwrap();
        assert!(m.is_mu_invariant(&uniform, &Weight::zero()).unwrap());
    }

    #[test]
    fn tv_distance_fixture() {
        let s = space();
        let m = fixture(&s);
        let quarter = PathMeasure::new(
            s,
            [
                (Path::new(vec![0, 0, 0]), w(1, 4)),
                (Path::new(vec![0, 0, 1]), w(1, 4)),
                (Path::new(vec![1, 0, 0]), w(1, 4)),
                (Path::new(vec![1, 0, 1]), w(1, 4)),
            ],
        )
        .unwrap();
        assert_eq!(m.tv_distance(&quarter).unwrap(), w(1, 2));
        assert_eq!(m.tv_distance(&m).unwrap(), w(0, 1));
        assert!(m.approx_eq(&quarter, &w(1, 2)).unwrap());
        assert!(!m.approx_eq(&quarter, &w(1, 4)).unwrap());
    }

    #[test]
    fn restriction_pushes_mass_down() {
        let s = space();
        let m = fixture(&s);
        let past = m.restrict_to(s.interval(0, 1).unwrap()).unwrap();
        assert_eq!(past.atom_count(), 2);
        assert_eq!(past.total_mass(), w(1, 1));
        let future = m.restrict_to(s.interval(1, 2).unwrap()).unwrap();
        let first = PartialPath::new(s.interval(1, 2).unwrap(), vec![0, 0]).unwrap();
        assert_eq!(future.weight_of(&first), w(1, 2));
        // Restriction commutes with nesting.
        let nested = past.restrict_to(s.interval(1, 1).unwrap()).unwrap();
        let direct = m.restrict_to(s.interval(1, 1).unwrap()).unwrap();
        assert_eq!(nested, direct);
    }

    #[test]
    fn pin_state_detection() {
        let s = space();
        let m = fixture(&s);
        assert_eq!(m.pin_state_at(1).unwrap(), 0);
        assert!(matches!(m.pin_state_at(0), Err(Error::NotPinned { pin: 0 })));
        assert!(matches!(
            PathMeasure::<Exact>::zero(s).pin_state_at(1),
            Err(Error::ZeroMass)
        ));
    }

    #[test]
    fn partial_shift_moves_interval() {
        let s = Arc::new(PathSpace::unconstrained(4, 2, true).unwrap());
        let m = fixture_partial(&s);
        let moved = m.shift(1).unwrap();
        assert_eq!(moved.interval(), s.interval(1, 2).unwrap());
        assert_eq!(moved.total_mass(), m.total_mass());
        let back = moved.shift(-1).unwrap();
        assert_eq!(back, m);
    }

    fn fixture_partial(s: &Arc<PathSpace>) -> PartialPathMeasure<Exact> {
        let iv = s.interval(0, 1).unwrap();
        PartialPathMeasure::new(
            s.clone(),
            iv,
            [
                (PartialPath::new(iv, vec![0, 1]).unwrap(), w(1, 3)),
                (PartialPath::new(iv, vec![1, 1]).unwrap(), w(2, 3)),
            ],
        )
        .unwrap()
    }
}
