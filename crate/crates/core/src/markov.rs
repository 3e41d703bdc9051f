//! The pin-and-reglue operator: condition a path measure on its state at
//! one grid point, forget the coupling between past and future there, and
//! reassemble.
//!
//! Every application is computed twice, once as the defining
//! disintegrate-tensor-mix construction and once as a direct splice over
//! support pairs, and the two results are compared before either is
//! returned. Fixed points of all interior pins are exactly the measures
//! with the Markov property, and iterating the operator over any pin
//! ordering drives a measure to the chain product of its one-step
//! marginals.

use crate::disintegration::Disintegration;
use crate::error::{Error, Result};
use crate::measure::{PairStateMeasure, PartialPathMeasure, PathMeasure, StateMeasure};
use crate::space::{Path, StateId};
use crate::tensor::{tensor_at, PinnedMeasure};
use crate::weight::{within, Weight};

/// One pin application, dual-route checked. Boundary pins are identities.
pub fn markovianise_at<W: Weight>(m: &PathMeasure<W>, pin: usize) -> Result<PathMeasure<W>> {
    if pin > m.space().last_index() {
        return Err(Error::IndexOutOfRange { index: pin, len: m.space().len() });
    }
    if m.is_zero() {
        return Ok(m.clone());
    }
    let structured = mixture_route(m, pin)?;
    let spliced = splice_route(m, pin)?;
    if !structured.approx_eq(&spliced, &W::cross_check_tol())? {
        return Err(Error::CrossCheckFailed { context: "pin operator routes disagree" });
    }
    Ok(structured)
}

/// The defining route: disintegrate at the pin, tensor each conditional's
/// past and future restrictions back together, and mix by the pin marginal.
fn mixture_route<W: Weight>(m: &PathMeasure<W>, pin: usize) -> Result<PathMeasure<W>> {
    let space = m.space().clone();
    let past_iv = space.interval(0, pin)?;
    let future_iv = space.interval(pin, space.last_index())?;
    let d = Disintegration::disintegrate(m, pin)?;
    let mut parts: Vec<(W, PathMeasure<W>)> = Vec::new();
    for (x, eta) in d.conditionals() {
        let past = PinnedMeasure::new(eta.restrict_to(past_iv)?, pin)?;
        let future = PinnedMeasure::new(eta.restrict_to(future_iv)?, pin)?;
        let product = tensor_at(&past, &future)?.to_full()?;
        parts.push((d.marginal().weight(x).clone(), product));
    }
    let borrowed: Vec<(W, &PathMeasure<W>)> =
        parts.iter().map(|(c, piece)| (c.clone(), piece)).collect();
    PathMeasure::mixture(&borrowed)
}

/// The closed-form route: for every support pair meeting at the pin state,
/// splice prefix onto suffix with weight m(a) m(b) / m_pin(x).
fn splice_route<W: Weight>(m: &PathMeasure<W>, pin: usize) -> Result<PathMeasure<W>> {
    let mu = m.marginal_at(pin)?;
    let mut atoms: Vec<(Path, W)> = Vec::new();
    for (a, wa) in m.atoms() {
        let x = a.state(pin);
        for (b, wb) in m.atoms() {
            if b.state(pin) != x {
                continue;
            }
            let mut states = a.states()[..=pin].to_vec();
            states.extend_from_slice(&b.states()[pin + 1..]);
            atoms.push((Path::new(states), wa.clone() * wb.clone() / mu.weight(x).clone()));
        }
    }
    PathMeasure::new(m.space().clone(), atoms)
}

/// Pins applied left to right. The operators commute, so the order only
/// affects intermediate values.
pub fn markovianise_set<W: Weight>(m: &PathMeasure<W>, pins: &[usize]) -> Result<PathMeasure<W>> {
    let mut current = m.clone();
    for &pin in pins {
        current = markovianise_at(&current, pin)?;
    }
    Ok(current)
}

/// The point operator on a measure concentrated at one state at the pin:
/// reglue its own past and future restrictions, normalized by total mass so
/// mass is preserved.
pub fn markovianise_at_point<W: Weight>(m: &PathMeasure<W>, pin: usize) -> Result<PathMeasure<W>> {
    m.pin_state_at(pin)?;
    let space = m.space().clone();
    let mass = m.total_mass();
    let past = PinnedMeasure::new(m.restrict_to(space.interval(0, pin)?)?, pin)?;
    let future =
        PinnedMeasure::new(m.restrict_to(space.interval(pin, space.last_index())?)?, pin)?;
    tensor_at(&past, &future)?.to_full()?.scaled(&(W::one() / mass))
}

/// The point operator on a fragment measure, acting inside its interval.
pub fn markovianise_partial_at_point<W: Weight>(
    pm: &PartialPathMeasure<W>,
    pin: usize,
) -> Result<PartialPathMeasure<W>> {
    pm.pin_state_at(pin)?;
    let space = pm.space().clone();
    let iv = pm.interval();
    let mass = pm.total_mass();
    let past = PinnedMeasure::new(pm.restrict_to(space.interval(iv.lo(), pin)?)?, pin)?;
    let future = PinnedMeasure::new(pm.restrict_to(space.interval(pin, iv.hi())?)?, pin)?;
    tensor_at(&past, &future)?.scaled(&(W::one() / mass))
}

/// Total variation between m and its one-pin image.
pub fn markov_defect<W: Weight>(m: &PathMeasure<W>, pin: usize) -> Result<W> {
    markovianise_at(m, pin)?.tv_distance(m)
}

/// The largest one-pin defect over interior pins; zero when there are none.
pub fn max_markov_defect<W: Weight>(m: &PathMeasure<W>) -> Result<W> {
    let mut worst = W::zero();
    for pin in m.space().interior_pins() {
        let d = markov_defect(m, pin)?;
        if d > worst {
            worst = d;
        }
    }
    Ok(worst)
}

pub fn is_markov_at<W: Weight>(m: &PathMeasure<W>, pin: usize, tol: &W) -> Result<bool> {
    Ok(within(&markov_defect(m, pin)?, &W::zero(), tol))
}

/// Fixed by every interior pin operator.
pub fn is_markov<W: Weight>(m: &PathMeasure<W>, tol: &W) -> Result<bool> {
    Ok(within(&max_markov_defect(m)?, &W::zero(), tol))
}

/// Every conditional of the measure is itself fixed by its point operator.
/// On a finite grid this is equivalent to the Markov property; both are
/// kept because they are computed along different routes.
pub fn is_strong_markov<W: Weight>(m: &PathMeasure<W>, tol: &W) -> Result<bool> {
    if m.is_zero() {
        return Ok(true);
    }
    for pin in m.space().interior_pins() {
        let d = Disintegration::disintegrate(m, pin)?;
        for (_, eta) in d.conditionals() {
            let fixed = markovianise_at_point(eta, pin)?;
            if !fixed.approx_eq(eta, tol)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The chain product of the measure's one-step pair marginals: the unique
/// Markov measure with the same consecutive-pair statistics. Built without
/// the pin operator so the two constructions can be compared.
pub fn chain_product_oracle<W: Weight>(m: &PathMeasure<W>) -> Result<PathMeasure<W>> {
    let space = m.space().clone();
    let t = space.len();
    if m.is_zero() || t <= 2 {
        return Ok(m.clone());
    }
    let nodes: Vec<StateMeasure<W>> =
        (1..t - 1).map(|i| m.marginal_at(i)).collect::<Result<_>>()?;
    let pairs: Vec<PairStateMeasure<W>> =
        (0..t - 1).map(|i| m.pair_marginal(i, i + 1)).collect::<Result<_>>()?;
    let mut atoms: Vec<(Path, W)> = Vec::new();
    let mut stack: Vec<(Vec<StateId>, W)> = pairs[0]
        .support()
        .map(|(&(x, y), w)| (vec![x, y], w.clone()))
        .collect();
    while let Some((prefix, weight)) = stack.pop() {
        let i = prefix.len() - 1;
        if i == t - 1 {
            atoms.push((Path::new(prefix), weight));
            continue;
        }
        let x = prefix[i];
        // nodes[i - 1] is the marginal at time i; it charges x because the
        // running prefix already carries positive pair mass into x.
        let node = nodes[i - 1].weight(x).clone();
        for y in 0..space.n_states() {
            let p = pairs[i].weight(x, y);
            if p.is_zero() {
                continue;
            }
            let mut next = prefix.clone();
            next.push(y);
            stack.push((next, weight.clone() * p / node.clone()));
        }
    }
    PathMeasure::new(space, atoms)
}

/// Order independence of two pins, checked by applying them both ways.
pub fn check_commutativity<W: Weight>(
    m: &PathMeasure<W>,
    s: usize,
    t: usize,
    tol: &W,
) -> Result<bool> {
    let st = markovianise_at(&markovianise_at(m, s)?, t)?;
    let ts = markovianise_at(&markovianise_at(m, t)?, s)?;
    st.approx_eq(&ts, tol)
}

/// One-time marginals pass through the pin operator unchanged.
pub fn check_marginal_preservation<W: Weight>(
    m: &PathMeasure<W>,
    pin: usize,
    tol: &W,
) -> Result<bool> {
    let image = markovianise_at(m, pin)?;
    for t in 0..m.space().len() {
        if !image.marginal_at(t)?.approx_eq(&m.marginal_at(t)?, tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Translating a pinned fragment measure commutes with its point operator:
/// shifting by h then pinning at t + h agrees with pinning at t then
/// shifting. Holds on any uniformly spaced grid as long as the shifted
/// window stays inside it.
pub fn check_shift_equivariance<W: Weight>(
    nu: &PinnedMeasure<W>,
    h: i64,
    tol: &W,
) -> Result<bool> {
    let pinned_then_shifted = markovianise_partial_at_point(nu.measure(), nu.pin())?.shift(h)?;
    let shifted = nu.measure().shift(h)?;
    let new_pin = (nu.pin() as i64 + h) as usize;
    let shifted_then_pinned = markovianise_partial_at_point(&shifted, new_pin)?;
    pinned_then_shifted.approx_eq(&shifted_then_pinned, tol)
}
