//! Tensor products of fragment measures through gluing at a shared pinned
//! endpoint.
//!
//! Two fragment measures, one ending and one starting at the same grid
//! point and the same state, tensor to a measure on the union interval:
//! each glued fragment carries the product of its factor weights. Total
//! mass is multiplicative. The product is computed by two independent
//! routes so checks never trust a single code path.

use crate::error::{Error, Result};
use crate::measure::{check_same_space, PartialPathMeasure};
use crate::space::{Interval, PartialPath, StateId};
use crate::weight::Weight;

/// A fragment measure whose support passes through one state at one grid
/// point, remembered alongside the measure.
#[derive(Clone, Debug, PartialEq)]
pub struct PinnedMeasure<W: Weight> {
    measure: PartialPathMeasure<W>,
    pin: usize,
    state: StateId,
}

impl<W: Weight> PinnedMeasure<W> {
    /// Fails unless every support atom agrees at `pin`; the zero measure
    /// pins nowhere.
    pub fn new(measure: PartialPathMeasure<W>, pin: usize) -> Result<Self> {
        let state = measure.pin_state_at(pin)?;
        Ok(PinnedMeasure { measure, pin, state })
    }

    pub fn measure(&self) -> &PartialPathMeasure<W> {
        &self.measure
    }

    pub fn into_measure(self) -> PartialPathMeasure<W> {
        self.measure
    }

    pub fn pin(&self) -> usize {
        self.pin
    }

    pub fn state(&self) -> StateId {
        self.state
    }

    pub fn interval(&self) -> Interval {
        self.measure.interval()
    }

    pub fn total_mass(&self) -> W {
        self.measure.total_mass()
    }
}

fn check_tensor_shape<W: Weight>(
    past: &PinnedMeasure<W>,
    future: &PinnedMeasure<W>,
) -> Result<Interval> {
    check_same_space(past.measure.space(), future.measure.space())?;
    if past.pin != past.interval().hi() {
        return Err(Error::PinMismatch("past factor must be pinned at its right endpoint".into()));
    }
    if future.pin != future.interval().lo() {
        return Err(Error::PinMismatch("future factor must be pinned at its left endpoint".into()));
    }
    if past.pin != future.pin {
        return Err(Error::PinMismatch(format!(
            "factors pinned at different grid points {} and {}",
            past.pin, future.pin
        )));
    }
    if past.state != future.state {
        let space = past.measure.space();
        return Err(Error::PinMismatch(format!(
            "factors pinned at different states {} and {}",
            space.states().label(past.state),
            space.states().label(future.state)
        )));
    }
    past.measure.space().interval(past.interval().lo(), future.interval().hi())
}

/// The gluing tensor product: weight(a glue b) = past(a) * future(b),
/// computed directly over support pairs.
pub fn tensor_at<W: Weight>(
    past: &PinnedMeasure<W>,
    future: &PinnedMeasure<W>,
) -> Result<PartialPathMeasure<W>> {
    let union = check_tensor_shape(past, future)?;
    let space = past.measure.space().clone();
    let mut atoms: Vec<(PartialPath, W)> = Vec::new();
    for (a, wa) in past.measure.atoms() {
        for (b, wb) in future.measure.atoms() {
            atoms.push((space.glue_partial(a, b)?, wa.clone() * wb.clone()));
        }
    }
    PartialPathMeasure::new(space, union, atoms)
}

/// The same product by the opposite route: enumerate fragments on the union
/// interval and read each weight off the factor restrictions. Agrees with
/// `tensor_at` by the characterization property; kept separate so the two
/// can be compared.
pub fn tensor_via_pullback<W: Weight>(
    past: &PinnedMeasure<W>,
    future: &PinnedMeasure<W>,
) -> Result<PartialPathMeasure<W>> {
    let union = check_tensor_shape(past, future)?;
    let space = past.measure.space().clone();
    let n = space.n_states() as u128;
    let raw = n.checked_pow(union.len() as u32).unwrap_or(u128::MAX);
    if raw > crate::space::DEFAULT_ENUM_CAP as u128 {
        return Err(Error::EnumerationTooLarge(
            space.n_states(),
            union.len(),
            crate::space::DEFAULT_ENUM_CAP,
        ));
    }
    let lo = past.interval();
    let hi = future.interval();
    let mut atoms: Vec<(PartialPath, W)> = Vec::new();
    for gamma in space.partial_paths(union) {
        let a = restrict_fragment(&gamma, lo)?;
        let b = restrict_fragment(&gamma, hi)?;
        let w = past.measure.weight_of(&a) * future.measure.weight_of(&b);
        if !w.is_zero() {
            atoms.push((gamma, w));
        }
    }
    PartialPathMeasure::new(space, union, atoms)
}

fn restrict_fragment(gamma: &PartialPath, sub: Interval) -> Result<PartialPath> {
    let off = gamma.interval().lo();
    let states = gamma.states()[sub.lo() - off..=sub.hi() - off].to_vec();
    PartialPath::new(sub, states)
}

/// Both routes, compared; disagreement beyond `tol` is an error rather than
/// a value.
pub fn tensor_checked<W: Weight>(
    past: &PinnedMeasure<W>,
    future: &PinnedMeasure<W>,
    tol: &W,
) -> Result<PartialPathMeasure<W>> {
    let direct = tensor_at(past, future)?;
    let pulled = tensor_via_pullback(past, future)?;
    if !direct.approx_eq(&pulled, tol)? {
        return Err(Error::CrossCheckFailed { context: "tensor product routes disagree" });
    }
    Ok(direct)
}

/// The defining property of the tensor: pushing the product down to
/// (restriction to past window, restriction to future window) pairs gives
/// exactly the product of the factor weights, pair by pair, within `tol`.
pub fn check_tensor_characterization<W: Weight>(
    product: &PartialPathMeasure<W>,
    past: &PinnedMeasure<W>,
    future: &PinnedMeasure<W>,
    tol: &W,
) -> Result<bool> {
    let union = check_tensor_shape(past, future)?;
    if product.interval() != union {
        return Err(Error::IntervalMismatch);
    }
    check_same_space(product.space(), past.measure.space())?;
    let lo = past.interval();
    let hi = future.interval();
    let mut pushed: std::collections::BTreeMap<(PartialPath, PartialPath), W> =
        std::collections::BTreeMap::new();
    for (gamma, w) in product.atoms() {
        let key = (restrict_fragment(gamma, lo)?, restrict_fragment(gamma, hi)?);
        let slot = pushed.entry(key).or_insert_with(W::zero);
        *slot = slot.clone() + w.clone();
    }
    // Mass outside the product of supports fails immediately.
    for ((a, b), w) in &pushed {
        if (past.measure.weight_of(a).is_zero() || future.measure.weight_of(b).is_zero())
            && !crate::weight::within(w, &W::zero(), tol)
        {
            return Ok(false);
        }
    }
    for (a, wa) in past.measure.atoms() {
        for (b, wb) in future.measure.atoms() {
            let want = wa.clone() * wb.clone();
            let got = pushed.get(&(a.clone(), b.clone())).cloned().unwrap_or_else(W::zero);
            let diff = (got - want).abs();
            if !crate::weight::within(&diff, &W::zero(), tol) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Which factor of the tensor a family of measures occupies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TensorSlot {
    Past,
    Future,
}

/// Linearity in one slot: tensor(sum_i c_i m_i, fixed) = sum_i c_i
/// tensor(m_i, fixed), and symmetrically. Exact arithmetic satisfies this
/// with tol = 0 for any nonnegative coefficients.
pub fn check_bilinearity<W: Weight>(
    parts: &[(W, PinnedMeasure<W>)],
    fixed: &PinnedMeasure<W>,
    slot: TensorSlot,
    tol: &W,
) -> Result<bool> {
    let pieces: Vec<(W, &PartialPathMeasure<W>)> =
        parts.iter().map(|(c, m)| (c.clone(), m.measure())).collect();
    let blended = PartialPathMeasure::mixture(&pieces)?;
    let pin = parts[0].1.pin();
    let blended = PinnedMeasure::new(blended, pin)?;
    let (lhs, summands) = match slot {
        TensorSlot::Past => (
            tensor_at(&blended, fixed)?,
            parts
                .iter()
                .map(|(c, m)| Ok((c.clone(), tensor_at(m, fixed)?)))
                .collect::<Result<Vec<_>>>()?,
        ),
        TensorSlot::Future => (
            tensor_at(fixed, &blended)?,
            parts
                .iter()
                .map(|(c, m)| Ok((c.clone(), tensor_at(fixed, m)?)))
                .collect::<Result<Vec<_>>>()?,
        ),
    };
    let borrowed: Vec<(W, &PartialPathMeasure<W>)> =
        summands.iter().map(|(c, m)| (c.clone(), m)).collect();
    let rhs = PartialPathMeasure::mixture(&borrowed)?;
    lhs.approx_eq(&rhs, tol)
}

/// Associativity across a doubly pinned middle: (a tensor b) tensor c =
/// a tensor (b tensor c). The middle fragment must pass through a single
/// state at each of its endpoints.
pub fn check_associativity<W: Weight>(
    past: &PinnedMeasure<W>,
    middle: &PartialPathMeasure<W>,
    future: &PinnedMeasure<W>,
    tol: &W,
) -> Result<bool> {
    let mid_lo = middle.interval().lo();
    let mid_hi = middle.interval().hi();
    let middle_left = PinnedMeasure::new(middle.clone(), mid_lo)?;
    let middle_right = PinnedMeasure::new(middle.clone(), mid_hi)?;

    let left_first = tensor_at(past, &middle_left)?;
    let left_first = PinnedMeasure::new(left_first, mid_hi)?;
    let lhs = tensor_at(&left_first, future)?;

    let right_first = tensor_at(&middle_right, future)?;
    let right_first = PinnedMeasure::new(right_first, mid_lo)?;
    let rhs = tensor_at(past, &right_first)?;

    lhs.approx_eq(&rhs, tol)
}

/// Functoriality: fragment maps g1, g2 on the factors and f on the union
/// with f(a glue b) = g1(a) glue g2(b) on all support pairs satisfy
/// f#(past tensor future) = (g1# past) tensor (g2# future). The commuting
/// condition is verified on the supports; violation is an error.
pub fn check_composition<W: Weight>(
    past: &PinnedMeasure<W>,
    future: &PinnedMeasure<W>,
    g1: impl Fn(&PartialPath) -> PartialPath,
    g2: impl Fn(&PartialPath) -> PartialPath,
    f: impl Fn(&PartialPath) -> PartialPath,
    tol: &W,
) -> Result<bool> {
    let product = tensor_at(past, future)?;
    let space = past.measure().space().clone();
    let mut f_target = None;
    for (a, _) in past.measure.atoms() {
        for (b, _) in future.measure.atoms() {
            let glued = space.glue_partial(a, b)?;
            let via_f = f(&glued);
            let via_parts = space.glue_partial(&g1(a), &g2(b))?;
            if via_f != via_parts {
                return Err(Error::CommutingConditionViolated);
            }
            f_target = Some(via_f.interval());
        }
    }
    let Some(f_target) = f_target else {
        return Ok(true);
    };
    let lhs = product.pushforward(f_target, &f)?;

    let first_past = past.measure.atoms().next().expect("nonempty by pinning").0;
    let first_future = future.measure.atoms().next().expect("nonempty by pinning").0;
    let g1_iv = g1(first_past).interval();
    let g2_iv = g2(first_future).interval();
    let past_img = PinnedMeasure::new(past.measure.pushforward(g1_iv, &g1)?, g1_iv.hi())?;
    let future_img = PinnedMeasure::new(future.measure.pushforward(g2_iv, &g2)?, g2_iv.lo())?;
    let rhs = tensor_at(&past_img, &future_img)?;

    lhs.approx_eq(&rhs, tol)
}
