//! Randomized property suites over seeded instance families.
//!
//! Each suite draws its own spaces and measures from a seed, exercises one
//! law, and reports the number of cases that ran. The CLI's `check`
//! subcommand and the acceptance tests both call these, differing only in
//! case counts. Everything here runs in exact arithmetic with tolerance
//! zero; a reported failure names the first offending case.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::generate::{generate, random_measure, random_weight, GeneratorKind};
use crate::group::{
    check_markov_preserves_invariance, group_average, invariant_disintegration,
    is_translation_invariant, ActionSide, FiniteGroup, GroupAction,
};
use crate::hull::{run_hull, verify_hull_element, SubsetOrdering};
use crate::io::{load_measure, measure_from_doc, measure_to_doc, save_measure, AnyMeasure};
use crate::markov::{
    chain_product_oracle, check_shift_equivariance, markovianise_at, markovianise_at_point,
    markovianise_set,
};
use crate::measure::{PartialPathMeasure, PathMeasure};
use crate::space::{Interval, PartialPath, Path, PathSpace, StateId, StateSpace, Time, TimeGrid};
use crate::tensor::{
    check_associativity, check_bilinearity, check_tensor_characterization, tensor_at,
    tensor_via_pullback, PinnedMeasure, TensorSlot,
};
use crate::weight::{Exact, Weight};

/// Outcome of one suite. `passed` false carries the first failure in
/// `detail`; errors from malformed instances propagate as `Err` instead.
#[derive(Clone, Debug)]
pub struct CheckReport {
    pub name: &'static str,
    pub cases: usize,
    pub passed: bool,
    pub detail: String,
}

impl CheckReport {
    fn pass(name: &'static str, cases: usize) -> Self {
        CheckReport { name, cases, passed: true, detail: format!("{cases} cases") }
    }

    fn fail(name: &'static str, cases: usize, detail: String) -> Self {
        CheckReport { name, cases, passed: false, detail }
    }
}

fn zero() -> Exact {
    <Exact as Weight>::zero()
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn uniform_grid<R: Rng>(len: usize, rng: &mut R) -> TimeGrid {
    let steps = [Time::new(1, 2), Time::from(1), Time::from(2)];
    let step = steps[rng.gen_range(0..steps.len())];
    TimeGrid::new((0..len as i64).map(|i| step * i).collect()).expect("increasing by construction")
}

fn ragged_grid<R: Rng>(len: usize, rng: &mut R) -> TimeGrid {
    let gaps = [Time::new(1, 3), Time::new(1, 2), Time::from(1), Time::new(3, 2)];
    let mut acc = Time::from(0);
    let mut times = vec![acc];
    for _ in 1..len {
        acc += gaps[rng.gen_range(0..gaps.len())];
        times.push(acc);
    }
    TimeGrid::new(times).expect("increasing by construction")
}

/// A random space: sometimes cyclic (uniform grid, no metric), sometimes
/// carrying the cycle metric with a step bound, otherwise unconstrained on
/// a ragged grid.
fn random_space<R: Rng>(min_len: usize, max_len: usize, max_states: usize, rng: &mut R) -> Arc<PathSpace> {
    let len = rng.gen_range(min_len..=max_len);
    let n = rng.gen_range(2..=max_states);
    let space = if rng.gen_bool(0.3) {
        PathSpace::new(uniform_grid(len, rng), StateSpace::numbered(n).unwrap(), None, true)
    } else if rng.gen_bool(0.4) {
        // Unit spacing with bound 1 permits staying put or moving to a
        // cycle neighbour.
        PathSpace::new(
            TimeGrid::unit(len).unwrap(),
            StateSpace::cycle_graph(n).unwrap(),
            Some(Time::from(1)),
            false,
        )
    } else {
        PathSpace::new(ragged_grid(len, rng), StateSpace::numbered(n).unwrap(), None, false)
    };
    Arc::new(space.expect("construction parameters are valid"))
}

/// Rotating state labels must preserve admissibility for the averaged
/// generators; unconstrained and cycle-metric spaces both qualify.
fn rotation_friendly_space<R: Rng>(
    min_len: usize,
    max_len: usize,
    n: usize,
    rng: &mut R,
) -> Arc<PathSpace> {
    let len = rng.gen_range(min_len..=max_len);
    let space = if rng.gen_bool(0.5) {
        PathSpace::new(ragged_grid(len, rng), StateSpace::numbered(n).unwrap(), None, false)
    } else {
        PathSpace::new(
            TimeGrid::unit(len).unwrap(),
            StateSpace::cycle_graph(n).unwrap(),
            Some(Time::from(1)),
            false,
        )
    };
    Arc::new(space.expect("construction parameters are valid"))
}

fn fragments_with<F: Fn(&PartialPath) -> bool>(
    space: &Arc<PathSpace>,
    iv: Interval,
    keep: F,
) -> Vec<PartialPath> {
    space.partial_paths(iv).filter(|pp| keep(pp)).collect()
}

fn sample_fragment<R: Rng>(
    space: &Arc<PathSpace>,
    iv: Interval,
    candidates: &[PartialPath],
    rng: &mut R,
) -> Result<PartialPathMeasure<Exact>> {
    let k = rng.gen_range(1..=candidates.len().min(3));
    let chosen: Vec<&PartialPath> = candidates.choose_multiple(rng, k).collect();
    PartialPathMeasure::new(
        space.clone(),
        iv,
        chosen.into_iter().map(|pp| (pp.clone(), random_weight::<Exact, _>(rng))),
    )
}

/// A random pinned past/future pair meeting at a common state, or None if
/// this space has no state visible from both sides of the pin.
fn random_pinned_pair<R: Rng>(
    space: &Arc<PathSpace>,
    rng: &mut R,
) -> Result<Option<(PinnedMeasure<Exact>, PinnedMeasure<Exact>)>> {
    let last = space.last_index();
    let pin = rng.gen_range(0..=last);
    let a = rng.gen_range(0..=pin);
    let b = rng.gen_range(pin..=last);
    let past_iv = space.interval(a, pin)?;
    let future_iv = space.interval(pin, b)?;
    let past_all: Vec<PartialPath> = space.partial_paths(past_iv).collect();
    let future_all: Vec<PartialPath> = space.partial_paths(future_iv).collect();
    let candidates: Vec<StateId> = (0..space.n_states())
        .filter(|&x| {
            past_all.iter().any(|pp| pp.last() == x)
                && future_all.iter().any(|pp| pp.first() == x)
        })
        .collect();
    let Some(&x) = candidates.choose(rng) else {
        return Ok(None);
    };
    let past_candidates: Vec<PartialPath> =
        past_all.into_iter().filter(|pp| pp.last() == x).collect();
    let future_candidates: Vec<PartialPath> =
        future_all.into_iter().filter(|pp| pp.first() == x).collect();
    let past = PinnedMeasure::new(sample_fragment(space, past_iv, &past_candidates, rng)?, pin)?;
    let future =
        PinnedMeasure::new(sample_fragment(space, future_iv, &future_candidates, rng)?, pin)?;
    Ok(Some((past, future)))
}

/// Criterion: the tensor's pair-restriction pushforward is the product
/// measure, atom for atom, and both computation routes agree.
pub fn tensor_characterization_suite(cases: usize, seed: u64) -> Result<CheckReport> {
    const NAME: &str = "tensor-characterization";
    let mut rng = rng_for(seed);
    let mut done = 0;
    while done < cases {
        let space = random_space(2, 5, 4, &mut rng);
        let Some((past, future)) = random_pinned_pair(&space, &mut rng)? else {
            continue;
        };
        let direct = tensor_at(&past, &future)?;
        let pulled = tensor_via_pullback(&past, &future)?;
        if direct != pulled {
            return Ok(CheckReport::fail(NAME, done, format!("routes disagree at case {done}")));
        }
        if !check_tensor_characterization(&direct, &past, &future, &zero())? {
            return Ok(CheckReport::fail(
                NAME,
                done,
                format!("characterization fails at case {done}"),
            ));
        }
        let mass = direct.total_mass();
        if mass != past.total_mass() * future.total_mass() {
            return Ok(CheckReport::fail(NAME, done, format!("mass not multiplicative at {done}")));
        }
        done += 1;
    }
    Ok(CheckReport::pass(NAME, cases))
}

/// Criterion: tensoring is linear in each slot.
pub fn bilinearity_suite(cases: usize, seed: u64) -> Result<CheckReport> {
    const NAME: &str = "bilinearity";
    let mut rng = rng_for(seed);
    let mut done = 0;
    while done < cases {
        let space = random_space(2, 5, 4, &mut rng);
        let Some((past, future)) = random_pinned_pair(&space, &mut rng)? else {
            continue;
        };
        // More parts pinned exactly like the sampled one.
        let (fixed, template, slot) = if rng.gen_bool(0.5) {
            (future.clone(), past.clone(), TensorSlot::Past)
        } else {
            (past.clone(), future.clone(), TensorSlot::Future)
        };
        let iv = template.interval();
        let anchor = template.pin();
        let want = template.state();
        let keep = |pp: &PartialPath| pp.state_at(anchor) == want;
        let candidates = fragments_with(&space, iv, keep);
        let mut parts = vec![(random_weight::<Exact, _>(&mut rng), template)];
        for _ in 0..rng.gen_range(1..=2) {
            let m = sample_fragment(&space, iv, &candidates, &mut rng)?;
            parts.push((random_weight::<Exact, _>(&mut rng), PinnedMeasure::new(m, anchor)?));
        }
        if !check_bilinearity(&parts, &fixed, slot, &zero())? {
            return Ok(CheckReport::fail(NAME, done, format!("bilinearity fails at case {done}")));
        }
        done += 1;
    }
    Ok(CheckReport::pass(NAME, cases))
}

/// Criterion: tensoring across a doubly pinned middle associates.
pub fn associativity_suite(cases: usize, seed: u64) -> Result<CheckReport> {
    const NAME: &str = "associativity";
    let mut rng = rng_for(seed);
    let mut done = 0;
    while done < cases {
        let space = random_space(3, 5, 4, &mut rng);
        let last = space.last_index();
        let p1 = rng.gen_range(0..last);
        let p2 = rng.gen_range(p1 + 1..=last);
        let a = rng.gen_range(0..=p1);
        let b = rng.gen_range(p2..=last);
        let past_iv = space.interval(a, p1)?;
        let mid_iv = space.interval(p1, p2)?;
        let future_iv = space.interval(p2, b)?;
        let mids: Vec<PartialPath> = space.partial_paths(mid_iv).collect();
        let Some(seed_mid) = mids.choose(&mut rng).cloned() else {
            continue;
        };
        let (x1, x2) = (seed_mid.first(), seed_mid.last());
        let past_cand = fragments_with(&space, past_iv, |pp| pp.last() == x1);
        let future_cand = fragments_with(&space, future_iv, |pp| pp.first() == x2);
        if past_cand.is_empty() || future_cand.is_empty() {
            continue;
        }
        let mid_cand: Vec<PartialPath> =
            mids.into_iter().filter(|pp| pp.first() == x1 && pp.last() == x2).collect();
        let past = PinnedMeasure::new(sample_fragment(&space, past_iv, &past_cand, &mut rng)?, p1)?;
        let middle = sample_fragment(&space, mid_iv, &mid_cand, &mut rng)?;
        let future =
            PinnedMeasure::new(sample_fragment(&space, future_iv, &future_cand, &mut rng)?, p2)?;
        if !check_associativity(&past, &middle, &future, &zero())? {
            return Ok(CheckReport::fail(NAME, done, format!("associativity fails at {done}")));
        }
        done += 1;
    }
    Ok(CheckReport::pass(NAME, cases))
}

/// Criterion: for marginal-stationary measures, every ordering of a pin set
/// produces the identical composite, so the subset operator is well
/// defined.
pub fn commutativity_suite(measures: usize, seed: u64) -> Result<CheckReport> {
    const NAME: &str = "commutativity";
    let mut rng = rng_for(seed);
    for case in 0..measures {
        let n = rng.gen_range(2..=4);
        let space = rotation_friendly_space(3, 5, n, &mut rng);
        let m: PathMeasure<Exact> = generate(&space, &GeneratorKind::MuInvariant, &mut rng)?;
        let all: Vec<usize> = (0..space.len()).collect();
        let size = rng.gen_range(1..=3.min(all.len()));
        let pins: Vec<usize> = all.choose_multiple(&mut rng, size).copied().collect();
        let mut reference: Option<PathMeasure<Exact>> = None;
        for perm in permutations(&pins) {
            let image = markovianise_set(&m, &perm)?;
            match &reference {
                None => reference = Some(image),
                Some(want) => {
                    if &image != want {
                        return Ok(CheckReport::fail(
                            NAME,
                            case,
                            format!("ordering {perm:?} diverges at case {case}"),
                        ));
                    }
                }
            }
        }
    }
    Ok(CheckReport::pass(NAME, measures))
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (i, &head) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Criterion: every one-time marginal passes through every pin unchanged.
pub fn marginal_preservation_suite(measures: usize, seed: u64) -> Result<CheckReport> {
    const NAME: &str = "marginal-preservation";
    let mut rng = rng_for(seed);
    for case in 0..measures {
        let space = random_space(2, 5, 4, &mut rng);
        let atoms = rng.gen_range(1..=4);
        let m: PathMeasure<Exact> = random_measure(&space, atoms, &mut rng)?;
        for t in 0..space.len() {
            let image = markovianise_at(&m, t)?;
            for s in 0..space.len() {
                if image.marginal_at(s)? != m.marginal_at(s)? {
                    return Ok(CheckReport::fail(
                        NAME,
                        case,
                        format!("pin {t} moved the marginal at {s}, case {case}"),
                    ));
                }
            }
        }
    }
    Ok(CheckReport::pass(NAME, measures))
}

/// Criterion: the full sweep reaches an exact fixed point equal to the
/// chain product oracle, every random ordering lands on the same limit,
/// and the limit is strong Markov.
pub fn hull_suite(runs: usize, orderings: u64, seed: u64) -> Result<CheckReport> {
    const NAME: &str = "hull-fixed-point";
    let mut rng = rng_for(seed);
    for case in 0..runs {
        let space = random_space(3, 6, 3, &mut rng);
        let atoms = rng.gen_range(1..=3);
        let m: PathMeasure<Exact> = random_measure(&space, atoms, &mut rng)?;
        let budget = 6 * space.len() + 6;
        let sweep = run_hull(&m, &SubsetOrdering::FullSweep, &zero(), budget)?;
        if !sweep.converged {
            return Ok(CheckReport::fail(NAME, case, format!("sweep stalled at case {case}")));
        }
        let chain = chain_product_oracle(&m)?;
        if sweep.measure != chain {
            return Ok(CheckReport::fail(
                NAME,
                case,
                format!("limit differs from the chain product at case {case}"),
            ));
        }
        let report = verify_hull_element(&sweep.measure, &m, &zero())?;
        if !report.all_hold() {
            return Ok(CheckReport::fail(NAME, case, format!("hull report fails at {case}")));
        }
        for k in 0..orderings {
            let run = run_hull(
                &m,
                &SubsetOrdering::Random { seed: seed ^ (case as u64) << 8 ^ k },
                &zero(),
                budget,
            )?;
            if !run.converged || run.measure != sweep.measure {
                return Ok(CheckReport::fail(
                    NAME,
                    case,
                    format!("random ordering {k} missed the limit at case {case}"),
                ));
            }
        }
    }
    Ok(CheckReport::pass(NAME, runs))
}

/// Criterion: pins preserve invariance under group translation, and the
/// conditional family of an invariant measure is generated by the identity
/// conditional.
pub fn invariance_suite(measures: usize, seed: u64) -> Result<CheckReport> {
    const NAME: &str = "group-invariance";
    let mut rng = rng_for(seed);
    let groups = [FiniteGroup::cyclic(3)?, FiniteGroup::cyclic(5)?, FiniteGroup::symmetric3()];
    let sides = [ActionSide::Left, ActionSide::Right];
    for case in 0..measures {
        let group = &groups[case % groups.len()];
        let side = sides[(case / groups.len()) % 2];
        // Translation permutes states arbitrarily, so no metric constraint.
        let len = rng.gen_range(3..=4);
        let space = Arc::new(PathSpace::new(
            ragged_grid(len, &mut rng),
            StateSpace::numbered(group.order()).expect("order >= 2"),
            None,
            false,
        )?);
        let seed_m: PathMeasure<Exact> = random_measure(&space, 3, &mut rng)?;
        let action = GroupAction::translation(group.clone(), side);
        let m = group_average(&action, &seed_m)?;
        if !is_translation_invariant(&action, &m, &zero())? {
            return Ok(CheckReport::fail(NAME, case, format!("average not invariant at {case}")));
        }
        for t in 0..space.len() {
            if !check_markov_preserves_invariance(&action, &m, &[t], &zero())? {
                return Ok(CheckReport::fail(
                    NAME,
                    case,
                    format!("pin {t} broke invariance at case {case} ({})", group.label(0)),
                ));
            }
            // Errors if any conditional is not the matching translate.
            invariant_disintegration(&m, group, side, t, &zero())?;
        }
    }
    Ok(CheckReport::pass(NAME, measures))
}

/// Criterion: a tv-convergent sequence of point-operator fixed points has a
/// fixed-point limit. The sequences are geometric interpolations between
/// two product measures pinned at the same point, so every term and the
/// distance sequence are exact.
pub fn limit_stability_suite(sequences: usize, seed: u64) -> Result<CheckReport> {
    const NAME: &str = "limit-stability";
    let mut rng = rng_for(seed);
    let mut done = 0;
    while done < sequences {
        let space = random_space(3, 5, 3, &mut rng);
        let Some((past_a, future)) = random_pinned_pair(&space, &mut rng)? else {
            continue;
        };
        let pin = past_a.pin();
        let x = past_a.state();
        let iv = past_a.interval();
        let cands = fragments_with(&space, iv, |pp| pp.last() == x);
        let past_b = PinnedMeasure::new(sample_fragment(&space, iv, &cands, &mut rng)?, pin)?;
        // Only full-window products are path measures.
        if iv.lo() != 0 || future.interval().hi() != space.last_index() {
            continue;
        }
        let limit = tensor_at(&past_a, &future)?.to_full()?;
        let other = tensor_at(&past_b, &future)?.to_full()?;
        let gap = limit.tv_distance(&other)?;
        let mut previous = None;
        for k in 1..=6u32 {
            let c = <Exact as Weight>::half_power(k as usize - 1);
            let blend = PinnedMeasure::new(
                PartialPathMeasure::mixture(&[
                    (<Exact as Weight>::one() - c.clone(), past_a.measure()),
                    (c.clone(), past_b.measure()),
                ])?,
                pin,
            )?;
            let term = tensor_at(&blend, &future)?.to_full()?;
            if markovianise_at_point(&term, pin)? != term {
                return Ok(CheckReport::fail(
                    NAME,
                    done,
                    format!("term {k} is not a fixed point at case {done}"),
                ));
            }
            let dist = term.tv_distance(&limit)?;
            if dist != c.clone() * gap.clone() {
                return Ok(CheckReport::fail(
                    NAME,
                    done,
                    format!("tv distance is not geometric at case {done}"),
                ));
            }
            if let Some(prev) = previous {
                if dist > prev {
                    return Ok(CheckReport::fail(
                        NAME,
                        done,
                        format!("distances increase at case {done}"),
                    ));
                }
            }
            previous = Some(dist);
        }
        if markovianise_at_point(&limit, pin)? != limit {
            return Ok(CheckReport::fail(
                NAME,
                done,
                format!("limit is not a fixed point at case {done}"),
            ));
        }
        done += 1;
    }
    Ok(CheckReport::pass(NAME, sequences))
}

/// Criterion: translating a pinned fragment on a cyclic grid commutes with
/// its point operator.
pub fn shift_equivariance_suite(cases: usize, seed: u64) -> Result<CheckReport> {
    const NAME: &str = "shift-equivariance";
    let mut rng = rng_for(seed);
    let mut done = 0;
    while done < cases {
        let len = rng.gen_range(3..=6);
        let n = rng.gen_range(2..=4);
        let space = Arc::new(PathSpace::new(
            uniform_grid(len, &mut rng),
            StateSpace::numbered(n).expect("n >= 2"),
            None,
            true,
        )?);
        let last = space.last_index();
        let a = rng.gen_range(0..last);
        let b = rng.gen_range(a + 1..=last);
        let iv = space.interval(a, b)?;
        let pin = rng.gen_range(a..=b);
        let x = rng.gen_range(0..n);
        let cands = fragments_with(&space, iv, |pp| pp.state_at(pin) == x);
        if cands.is_empty() {
            continue;
        }
        let nu = PinnedMeasure::new(sample_fragment(&space, iv, &cands, &mut rng)?, pin)?;
        let h = rng.gen_range(-(a as i64)..=(last - b) as i64);
        if !check_shift_equivariance(&nu, h, &zero())? {
            return Ok(CheckReport::fail(
                NAME,
                done,
                format!("shift by {h} fails at case {done}"),
            ));
        }
        done += 1;
    }
    Ok(CheckReport::pass(NAME, cases))
}

/// Criterion: re-serializing a parsed measure reproduces its bytes, and
/// equal-seed hull runs emit identical traces.
pub fn determinism_suite(cases: usize, seed: u64) -> Result<CheckReport> {
    const NAME: &str = "determinism";
    let mut rng = rng_for(seed);
    let dir = tempfile::tempdir()?;
    for case in 0..cases {
        let space = random_space(2, 5, 4, &mut rng);
        let atoms = rng.gen_range(1..=4);
        let measure = if case % 2 == 0 {
            AnyMeasure::Exact(random_measure(&space, atoms, &mut rng)?)
        } else {
            AnyMeasure::Float(random_measure(&space, atoms, &mut rng)?)
        };
        let p1 = dir.path().join(format!("m{case}-a.json"));
        let p2 = dir.path().join(format!("m{case}-b.json"));
        save_measure(&p1, &measure)?;
        let loaded = load_measure(&p1)?;
        save_measure(&p2, &loaded)?;
        if std::fs::read(&p1)? != std::fs::read(&p2)? {
            return Ok(CheckReport::fail(NAME, case, format!("bytes differ at case {case}")));
        }
        if loaded != measure {
            return Ok(CheckReport::fail(NAME, case, format!("round trip lost atoms at {case}")));
        }
        // Doc-level round trip without touching disk.
        let doc = measure_to_doc(&measure);
        if measure_from_doc(&doc, None)? != measure {
            return Ok(CheckReport::fail(NAME, case, format!("doc round trip fails at {case}")));
        }
    }
    // Same seed, same trace bytes.
    let space = random_space(3, 5, 3, &mut rng);
    let m: PathMeasure<Exact> = random_measure(&space, 3, &mut rng)?;
    let budget = 6 * space.len();
    let a = run_hull(&m, &SubsetOrdering::Random { seed: seed ^ 0x5eed }, &zero(), budget)?;
    let b = run_hull(&m, &SubsetOrdering::Random { seed: seed ^ 0x5eed }, &zero(), budget)?;
    if a.trace.to_csv() != b.trace.to_csv() {
        return Ok(CheckReport::fail(NAME, cases, "equal-seed traces differ".into()));
    }
    Ok(CheckReport::pass(NAME, cases))
}

/// Criterion: the worked two-atom fixture and its derived values, asserted
/// exactly against hand-computed constants.
pub fn worked_fixture_suite() -> Result<CheckReport> {
    const NAME: &str = "worked-fixture";
    let space = Arc::new(PathSpace::unconstrained(3, 2, false)?);
    let half = <Exact as Weight>::ratio(1, 2);
    let quarter = <Exact as Weight>::ratio(1, 4);
    let m = PathMeasure::new(
        space.clone(),
        [
            (Path::new(vec![0, 0, 0]), half.clone()),
            (Path::new(vec![1, 0, 1]), half.clone()),
        ],
    )?;
    let image = markovianise_at(&m, 1)?;
    let want = PathMeasure::new(
        space.clone(),
        [
            (Path::new(vec![0, 0, 0]), quarter.clone()),
            (Path::new(vec![0, 0, 1]), quarter.clone()),
            (Path::new(vec![1, 0, 0]), quarter.clone()),
            (Path::new(vec![1, 0, 1]), quarter.clone()),
        ],
    )?;
    let mut failures = Vec::new();
    if image != want {
        failures.push("M_1 image".to_string());
    }
    if crate::markov::markov_defect(&m, 1)? != half {
        failures.push("defect before".to_string());
    }
    if crate::markov::max_markov_defect(&image)? != zero() {
        failures.push("defect after".to_string());
    }
    let phi = crate::cylinder::CylinderFunction::indicator(vec![0, 2], vec![0, 0])?;
    if crate::hull::pseudo_metric(&m, &image, &phi)? != quarter {
        failures.push("pseudo metric".to_string());
    }
    if chain_product_oracle(&m)? != want {
        failures.push("chain product".to_string());
    }
    if failures.is_empty() {
        Ok(CheckReport::pass(NAME, 5))
    } else {
        Ok(CheckReport::fail(NAME, 5, failures.join(", ")))
    }
}

/// Scaled case counts for one full pass over every suite.
#[derive(Clone, Copy, Debug)]
pub struct CheckProfile {
    pub tensor_cases: usize,
    pub bilinearity_cases: usize,
    pub associativity_cases: usize,
    pub commutativity_measures: usize,
    pub marginal_measures: usize,
    pub hull_runs: usize,
    pub hull_orderings: u64,
    pub invariance_measures: usize,
    pub stability_sequences: usize,
    pub equivariance_cases: usize,
    pub determinism_cases: usize,
}

impl CheckProfile {
    /// The counts the acceptance gate runs with.
    pub fn acceptance() -> Self {
        CheckProfile {
            tensor_cases: 500,
            bilinearity_cases: 1000,
            associativity_cases: 1000,
            commutativity_measures: 200,
            marginal_measures: 200,
            hull_runs: 100,
            hull_orderings: 25,
            invariance_measures: 100,
            stability_sequences: 50,
            equivariance_cases: 100,
            determinism_cases: 20,
        }
    }

    /// A lighter pass for interactive use.
    pub fn quick() -> Self {
        CheckProfile {
            tensor_cases: 50,
            bilinearity_cases: 50,
            associativity_cases: 50,
            commutativity_measures: 20,
            marginal_measures: 20,
            hull_runs: 10,
            hull_orderings: 5,
            invariance_measures: 12,
            stability_sequences: 10,
            equivariance_cases: 20,
            determinism_cases: 6,
        }
    }

    pub fn scaled(cases: usize) -> Self {
        let c = cases.max(1);
        CheckProfile {
            tensor_cases: c,
            bilinearity_cases: c,
            associativity_cases: c,
            commutativity_measures: c.div_ceil(2),
            marginal_measures: c.div_ceil(2),
            hull_runs: c.div_ceil(5),
            hull_orderings: 5,
            invariance_measures: c.div_ceil(4),
            stability_sequences: c.div_ceil(5),
            equivariance_cases: c.div_ceil(2),
            determinism_cases: c.div_ceil(8),
        }
    }
}

/// Run every suite with the given profile and seed.
pub fn run_all(profile: &CheckProfile, seed: u64) -> Result<Vec<CheckReport>> {
    Ok(vec![
        tensor_characterization_suite(profile.tensor_cases, seed)?,
        bilinearity_suite(profile.bilinearity_cases, seed.wrapping_add(1))?,
        associativity_suite(profile.associativity_cases, seed.wrapping_add(2))?,
        commutativity_suite(profile.commutativity_measures, seed.wrapping_add(3))?,
        marginal_preservation_suite(profile.marginal_measures, seed.wrapping_add(4))?,
        hull_suite(profile.hull_runs, profile.hull_orderings, seed.wrapping_add(5))?,
        invariance_suite(profile.invariance_measures, seed.wrapping_add(6))?,
        limit_stability_suite(profile.stability_sequences, seed.wrapping_add(7))?,
        shift_equivariance_suite(profile.equivariance_cases, seed.wrapping_add(8))?,
        determinism_suite(profile.determinism_cases, seed.wrapping_add(9))?,
        worked_fixture_suite()?,
    ])
}
