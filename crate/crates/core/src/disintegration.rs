//! Disintegration of a path measure over the states it passes through at a
//! pinned grid point, and the two-point refinement.
//!
//! A disintegration of m at pin t is the family of probability measures
//! eta_x, one per state x carrying mass at t, with eta_x concentrated on
//! {gamma(t) = x} and m = sum_x m_t(x) * eta_x. On a finite space it exists
//! and is unique wherever m_t(x) > 0.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::measure::{check_same_space, PairStateMeasure, PathMeasure, StateMeasure};
use crate::space::{Path, PathSpace, StateId};
use crate::weight::{within, Weight};

#[derive(Clone, Debug, PartialEq)]
pub struct Disintegration<W: Weight> {
    space: Arc<PathSpace>,
    pin: usize,
    weights: StateMeasure<W>,
    family: BTreeMap<StateId, PathMeasure<W>>,
}

impl<W: Weight> Disintegration<W> {
    /// Split `m` over its states at `pin`. Fails on the zero measure, which
    /// admits no normalized conditionals.
    pub fn disintegrate(m: &PathMeasure<W>, pin: usize) -> Result<Self> {
        if m.is_zero() {
            return Err(Error::ZeroMass);
        }
        let weights = m.marginal_at(pin)?;
        let mut buckets: BTreeMap<StateId, Vec<(Path, W)>> = BTreeMap::new();
        for (p, w) in m.atoms() {
            buckets.entry(p.state(pin)).or_default().push((p.clone(), w.clone()));
        }
        let mut family = BTreeMap::new();
        for (x, atoms) in buckets {
            let piece = PathMeasure::new(m.space().clone(), atoms)?;
            family.insert(x, piece.normalized()?);
        }
        Ok(Disintegration { space: m.space().clone(), pin, weights, family })
    }

    /// Assemble from explicit pieces. Every conditional must be a
    /// probability measure concentrated at its state, and the family keys
    /// must be exactly the support of `weights`.
    pub fn from_parts(
        space: Arc<PathSpace>,
        pin: usize,
        weights: StateMeasure<W>,
        family: BTreeMap<StateId, PathMeasure<W>>,
    ) -> Result<Self> {
        if pin > space.last_index() {
            return Err(Error::IndexOutOfRange { index: pin, len: space.len() });
        }
        if weights.n_states() != space.n_states() {
            return Err(Error::SpaceMismatch);
        }
        let support: Vec<StateId> = weights.support().collect();
        if support.len() != family.len() || support.iter().any(|x| !family.contains_key(x)) {
            return Err(Error::CrossCheckFailed { context: "disintegration family keys" });
        }
        let tol = W::default_tol();
        for (&x, eta) in &family {
            check_same_space(&space, eta.space())?;
            if !eta.is_probability(&tol) {
                return Err(Error::CrossCheckFailed { context: "conditional not normalized" });
            }
            if eta.pin_state_at(pin)? != x {
                return Err(Error::NotPinned { pin });
            }
        }
        Ok(Disintegration { space, pin, weights, family })
    }

    pub fn space(&self) -> &Arc<PathSpace> {
        &self.space
    }

    pub fn pin(&self) -> usize {
        self.pin
    }

    /// The one-time marginal the conditionals are weighted by.
    pub fn marginal(&self) -> &StateMeasure<W> {
        &self.weights
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.family.keys().copied()
    }

    pub fn conditional(&self, x: StateId) -> Result<&PathMeasure<W>> {
        self.family.get(&x).ok_or(Error::UnknownState(x))
    }

    pub fn conditionals(&self) -> impl Iterator<Item = (StateId, &PathMeasure<W>)> {
        self.family.iter().map(|(&x, eta)| (x, eta))
    }

    /// sum_x weights(x) * eta_x. Inverts `disintegrate` exactly in exact
    /// arithmetic.
    pub fn reassemble(&self) -> Result<PathMeasure<W>> {
        let parts: Vec<(W, &PathMeasure<W>)> = self
            .family
            .iter()
            .map(|(&x, eta)| (self.weights.weight(x).clone(), eta))
            .collect();
        if parts.is_empty() {
            return Ok(PathMeasure::zero(self.space.clone()));
        }
        PathMeasure::mixture(&parts)
    }

    /// Verify the three defining conditions against `m` within `tol`:
    /// matching pin marginal, normalized concentrated conditionals, and the
    /// mixture identity.
    pub fn is_disintegration_of(&self, m: &PathMeasure<W>, tol: &W) -> Result<bool> {
        check_same_space(&self.space, m.space())?;
        if !m.marginal_at(self.pin)?.approx_eq(&self.weights, tol)? {
            return Ok(false);
        }
        for (&x, eta) in &self.family {
            if !eta.is_probability(tol) {
                return Ok(false);
            }
            // Concentration is a support statement, so it is checked
            // exactly in both modes.
            if eta.atoms().any(|(p, _)| p.state(self.pin) != x) {
                return Ok(false);
            }
        }
        self.reassemble()?.approx_eq(m, tol)
    }

    /// Essential uniqueness: agreement of the marginals and of every
    /// conditional carrying positive mass.
    pub fn essentially_equal(&self, other: &Self, tol: &W) -> Result<bool> {
        check_same_space(&self.space, &other.space)?;
        if self.pin != other.pin {
            return Ok(false);
        }
        if !self.weights.approx_eq(&other.weights, tol)? {
            return Ok(false);
        }
        for (&x, eta) in &self.family {
            if let Some(theta) = other.family.get(&x) {
                if !eta.approx_eq(theta, tol)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Transport along a path map `g` with state-level shadow `h`: the
    /// family {g# eta_x} regrouped under y = h(x). Requires the square to
    /// commute on the support, gamma(pin) = x implying g(gamma)(pin) = h(x).
    pub fn pushforward(
        &self,
        g: impl Fn(&Path) -> Path,
        h: impl Fn(StateId) -> StateId,
    ) -> Result<Self> {
        let n = self.space.n_states();
        let mut mapped: BTreeMap<StateId, Vec<(W, PathMeasure<W>)>> = BTreeMap::new();
        let mut weights = vec![W::zero(); n];
        for (&x, eta) in &self.family {
            let y = h(x);
            if y >= n {
                return Err(Error::UnknownState(y));
            }
            let image = eta.pushforward(&g)?;
            if image.atoms().any(|(p, _)| p.state(self.pin) != y) {
                return Err(Error::CommutingConditionViolated);
            }
            weights[y] = weights[y].clone() + self.weights.weight(x).clone();
            mapped.entry(y).or_default().push((self.weights.weight(x).clone(), image));
        }
        let mut family = BTreeMap::new();
        for (y, pieces) in mapped {
            let parts: Vec<(W, &PathMeasure<W>)> =
                pieces.iter().map(|(c, m)| (c.clone(), m)).collect();
            family.insert(y, PathMeasure::mixture(&parts)?.normalized()?);
        }
        Disintegration::from_parts(self.space.clone(), self.pin, StateMeasure::new(weights)?, family)
    }
}

/// Disintegration over ordered state pairs read at two pinned points.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoTimeDisintegration<W: Weight> {
    space: Arc<PathSpace>,
    pins: (usize, usize),
    weights: PairStateMeasure<W>,
    family: BTreeMap<(StateId, StateId), PathMeasure<W>>,
}

impl<W: Weight> TwoTimeDisintegration<W> {
    /// Split `m` over the pair (gamma(t1), gamma(t2)) with t1 < t2.
    pub fn disintegrate(m: &PathMeasure<W>, t1: usize, t2: usize) -> Result<Self> {
        if t1 >= t2 {
            return Err(Error::BadInterval { lo: t1, hi: t2, len: m.space().len() });
        }
        if m.is_zero() {
            return Err(Error::ZeroMass);
        }
        let weights = m.pair_marginal(t1, t2)?;
        let mut buckets: BTreeMap<(StateId, StateId), Vec<(Path, W)>> = BTreeMap::new();
        for (p, w) in m.atoms() {
            buckets
                .entry((p.state(t1), p.state(t2)))
                .or_default()
                .push((p.clone(), w.clone()));
        }
        let mut family = BTreeMap::new();
        for (xy, atoms) in buckets {
            let piece = PathMeasure::new(m.space().clone(), atoms)?;
            family.insert(xy, piece.normalized()?);
        }
        Ok(TwoTimeDisintegration { space: m.space().clone(), pins: (t1, t2), weights, family })
    }

    pub fn pins(&self) -> (usize, usize) {
        self.pins
    }

    pub fn marginal(&self) -> &PairStateMeasure<W> {
        &self.weights
    }

    pub fn conditional(&self, x: StateId, y: StateId) -> Result<&PathMeasure<W>> {
        self.family.get(&(x, y)).ok_or(Error::UnknownState(x))
    }

    pub fn conditionals(&self) -> impl Iterator<Item = ((StateId, StateId), &PathMeasure<W>)> {
        self.family.iter().map(|(&xy, eta)| (xy, eta))
    }

    pub fn reassemble(&self) -> Result<PathMeasure<W>> {
        let parts: Vec<(W, &PathMeasure<W>)> = self
            .family
            .iter()
            .map(|(&(x, y), eta)| (self.weights.weight(x, y), eta))
            .collect();
        if parts.is_empty() {
            return Ok(PathMeasure::zero(self.space.clone()));
        }
        PathMeasure::mixture(&parts)
    }

    pub fn is_disintegration_of(&self, m: &PathMeasure<W>, tol: &W) -> Result<bool> {
        check_same_space(&self.space, m.space())?;
        let (t1, t2) = self.pins;
        let pair = m.pair_marginal(t1, t2)?;
        let mut diff = W::zero();
        for (&(x, y), w) in pair.support() {
            diff = diff.clone() + (w.clone() - self.weights.weight(x, y)).abs();
        }
        for (&(x, y), w) in self.weights.support() {
            if pair.weight(x, y).is_zero() {
                diff = diff.clone() + w.clone();
            }
        }
        if !within(&(diff * W::ratio(1, 2)), &W::zero(), tol) {
            return Ok(false);
        }
        for (&(x, y), eta) in &self.family {
            if !eta.is_probability(tol) {
                return Ok(false);
            }
            if eta.atoms().any(|(p, _)| p.state(t1) != x || p.state(t2) != y) {
                return Ok(false);
            }
        }
        self.reassemble()?.approx_eq(m, tol)
    }
}

/// The refinement identity linking the one-point and two-point splittings:
/// eta_x = sum_y (p(x, y) / m_{t1}(x)) * eta_{x, y} for every x charged at
/// t1. Holds for every measure; checked within `tol` per conditional.
pub fn check_two_time_mixture<W: Weight>(
    m: &PathMeasure<W>,
    t1: usize,
    t2: usize,
    tol: &W,
) -> Result<bool> {
    let one = Disintegration::disintegrate(m, t1)?;
    let two = TwoTimeDisintegration::disintegrate(m, t1, t2)?;
    for (x, eta) in one.conditionals() {
        let mass = one.marginal().weight(x).clone();
        let parts: Vec<(W, &PathMeasure<W>)> = two
            .conditionals()
            .filter(|&((a, _), _)| a == x)
            .map(|((a, b), theta)| (two.marginal().weight(a, b) / mass.clone(), theta))
            .collect();
        let blended = PathMeasure::mixture(&parts)?;
        if !blended.approx_eq(eta, tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}
