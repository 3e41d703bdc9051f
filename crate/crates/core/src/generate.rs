//! Seeded random instances: paths, raw measures, and the structured
//! families the self-checks exercise. Everything is driven by a caller
//! supplied RNG, so a fixed seed reproduces the same instance bit for bit.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::group::{group_average, ActionSide, FiniteGroup, GroupAction};
use crate::measure::PathMeasure;
use crate::space::{Path, PathSpace, StateId};
use crate::weight::Weight;

const SAMPLE_RETRIES: usize = 1000;

/// A random weight in (0, 9]: a small ratio so exact denominators stay
/// tame under products.
pub fn random_weight<W: Weight, R: Rng>(rng: &mut R) -> W {
    let num = rng.gen_range(1..=9i64);
    let den = rng.gen_range(1..=9i64);
    W::ratio(num, den)
}

/// A uniformly grown admissible path: pick a start state, then at each step
/// a uniform admissible successor, restarting on dead ends.
pub fn random_path<R: Rng>(space: &PathSpace, rng: &mut R) -> Result<Path> {
    let n = space.n_states();
    'attempt: for _ in 0..SAMPLE_RETRIES {
        let mut states = vec![rng.gen_range(0..n)];
        for gap in 0..space.last_index() {
            let current = *states.last().expect("nonempty");
            let options: Vec<StateId> =
                (0..n).filter(|&y| space.step_allowed(gap, current, y)).collect();
            match options.choose(rng) {
                Some(&y) => states.push(y),
                None => continue 'attempt,
            }
        }
        return Ok(Path::new(states));
    }
    Err(Error::GeneratorUnsupported {
        kind: "path".into(),
        reason: "no admissible path found; the step bound may be too tight".into(),
    })
}

/// A normalized measure on `atoms` random paths (duplicates merge, so the
/// support may be smaller).
pub fn random_measure<W: Weight, R: Rng>(
    space: &Arc<PathSpace>,
    atoms: usize,
    rng: &mut R,
) -> Result<PathMeasure<W>> {
    let mut entries = Vec::with_capacity(atoms);
    for _ in 0..atoms {
        entries.push((random_path(space, rng)?, random_weight::<W, _>(rng)));
    }
    PathMeasure::new(space.clone(), entries)?.normalized()
}

/// The structured instance families.
#[derive(Clone, Debug)]
pub enum GeneratorKind {
    /// Unit mass on one random admissible path.
    Dirac,
    /// The smallest-labeled pair of paths sharing only their midpoint
    /// state: the smallest measure with memory. Needs a three-point grid;
    /// fixed per space, independent of the seed.
    CorrelatedPair,
    /// A random chain: initial distribution times row-stochastic steps.
    /// Markov by construction.
    Chain,
    /// A random measure averaged over cyclic state rotation, making every
    /// one-time marginal uniform.
    MuInvariant,
    /// A random measure averaged over a group translating the states.
    GroupInvariant { group: FiniteGroup, side: ActionSide },
}

impl GeneratorKind {
    pub fn name(&self) -> &'static str {
        match self {
            GeneratorKind::Dirac => "dirac",
            GeneratorKind::CorrelatedPair => "pair",
            GeneratorKind::Chain => "chain",
            GeneratorKind::MuInvariant => "mu-invariant",
            GeneratorKind::GroupInvariant { .. } => "group-invariant",
        }
    }
}

/// Produce a probability measure of the requested kind on `space`.
pub fn generate<W: Weight, R: Rng>(
    space: &Arc<PathSpace>,
    kind: &GeneratorKind,
    rng: &mut R,
) -> Result<PathMeasure<W>> {
    match kind {
        GeneratorKind::Dirac => PathMeasure::dirac(space.clone(), random_path(space, rng)?),
        GeneratorKind::CorrelatedPair => correlated_pair(space),
        GeneratorKind::Chain => chain(space, rng),
        GeneratorKind::MuInvariant => {
            let group = FiniteGroup::cyclic(space.n_states())?;
            averaged(space, &group, ActionSide::Left, "mu-invariant", rng)
        }
        GeneratorKind::GroupInvariant { group, side } => {
            averaged(space, group, *side, "group-invariant", rng)
        }
    }
}

fn unsupported(kind: &str, reason: impl Into<String>) -> Error {
    Error::GeneratorUnsupported { kind: kind.into(), reason: reason.into() }
}

fn correlated_pair<W: Weight>(space: &Arc<PathSpace>) -> Result<PathMeasure<W>> {
    if space.len() != 3 {
        return Err(unsupported("pair", "needs a grid of exactly three points"));
    }
    // The smallest-labeled crossing: on two states and three times this is
    // the fixture (1/2)d(0,0,0) + (1/2)d(1,0,1).
    let n = space.n_states();
    for y in 0..n {
        let pasts: Vec<StateId> = (0..n).filter(|&x| space.step_allowed(0, x, y)).collect();
        let futures: Vec<StateId> = (0..n).filter(|&z| space.step_allowed(1, y, z)).collect();
        if pasts.len() < 2 || futures.len() < 2 {
            continue;
        }
        let half = W::ratio(1, 2);
        return PathMeasure::new(
            space.clone(),
            [
                (Path::new(vec![pasts[0], y, futures[0]]), half.clone()),
                (Path::new(vec![pasts[1], y, futures[1]]), half),
            ],
        );
    }
    Err(unsupported("pair", "no midpoint state with two admissible neighbours on each side"))
}

fn chain<W: Weight, R: Rng>(space: &Arc<PathSpace>, rng: &mut R) -> Result<PathMeasure<W>> {
    let n = space.n_states();
    let t = space.len();
    // Random positive start weights, normalized.
    let start: Vec<W> = (0..n).map(|_| random_weight::<W, _>(rng)).collect();
    let start_mass = start.iter().fold(W::zero(), |acc, w| acc + w.clone());
    // One row-stochastic kernel per step, supported on admissible moves.
    let mut kernels: Vec<Vec<Vec<W>>> = Vec::with_capacity(t.saturating_sub(1));
    for gap in 0..t.saturating_sub(1) {
        let mut kernel = vec![vec![W::zero(); n]; n];
        for (x, kernel_row) in kernel.iter_mut().enumerate() {
            let allowed: Vec<StateId> =
                (0..n).filter(|&y| space.step_allowed(gap, x, y)).collect();
            if allowed.is_empty() {
                return Err(unsupported("chain", "a state has no admissible successor"));
            }
            let raw: Vec<W> = allowed.iter().map(|_| random_weight::<W, _>(rng)).collect();
            let row_mass = raw.iter().fold(W::zero(), |acc, w| acc + w.clone());
            for (&y, w) in allowed.iter().zip(raw) {
                kernel_row[y] = w / row_mass.clone();
            }
        }
        kernels.push(kernel);
    }
    let mut atoms: Vec<(Path, W)> = Vec::new();
    let mut stack: Vec<(Vec<StateId>, W)> = (0..n)
        .map(|x| (vec![x], start[x].clone() / start_mass.clone()))
        .collect();
    while let Some((prefix, weight)) = stack.pop() {
        if prefix.len() == t {
            atoms.push((Path::new(prefix), weight));
            continue;
        }
        let i = prefix.len() - 1;
        let x = prefix[i];
        for y in 0..n {
            let step = kernels[i][x][y].clone();
            if step.is_zero() {
                continue;
            }
            let mut next = prefix.clone();
            next.push(y);
            stack.push((next, weight.clone() * step));
        }
    }
    PathMeasure::new(space.clone(), atoms)
}

fn averaged<W: Weight, R: Rng>(
    space: &Arc<PathSpace>,
    group: &FiniteGroup,
    side: ActionSide,
    kind: &str,
    rng: &mut R,
) -> Result<PathMeasure<W>> {
    if group.order() != space.n_states() {
        return Err(unsupported(kind, "group order must match the number of states"));
    }
    let action = GroupAction::translation(group.clone(), side);
    let seed = random_measure::<W, _>(space, 3, rng)?;
    group_average(&action, &seed).map_err(|e| match e {
        Error::InadmissiblePath => {
            unsupported(kind, "state translation breaks admissibility on this space")
        }
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::is_translation_invariant;
    use crate::markov::{is_markov, markov_defect};
    use crate::measure::StateMeasure;
    use crate::weight::Exact;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn w(n: i64, d: i64) -> Exact {
        <Exact as Weight>::ratio(n, d)
    }

    #[test]
    fn dirac_is_a_point_mass() {
        let s = Arc::new(PathSpace::unconstrained(4, 3, false).unwrap());
        let m: PathMeasure<Exact> = generate(&s, &GeneratorKind::Dirac, &mut rng(1)).unwrap();
        assert_eq!(m.atom_count(), 1);
        assert_eq!(m.total_mass(), w(1, 1));
    }

    #[test]
    fn correlated_pairs_have_memory() {
        let s = Arc::new(PathSpace::unconstrained(3, 3, false).unwrap());
        let m: PathMeasure<Exact> =
            generate(&s, &GeneratorKind::CorrelatedPair, &mut rng(2)).unwrap();
        assert_eq!(m.atom_count(), 2);
        assert_eq!(markov_defect(&m, 1).unwrap(), w(1, 2));
        let wide = Arc::new(PathSpace::unconstrained(4, 3, false).unwrap());
        assert!(matches!(
            generate::<Exact, _>(&wide, &GeneratorKind::CorrelatedPair, &mut rng(2)),
            Err(Error::GeneratorUnsupported { .. })
        ));
    }

    #[test]
    fn correlated_pair_on_two_states_is_the_worked_fixture() {
        let s = Arc::new(PathSpace::unconstrained(3, 2, false).unwrap());
        let m: PathMeasure<Exact> =
            generate(&s, &GeneratorKind::CorrelatedPair, &mut rng(7)).unwrap();
        let want = PathMeasure::new(
            s.clone(),
            [
                (Path::new(vec![0, 0, 0]), w(1, 2)),
                (Path::new(vec![1, 0, 1]), w(1, 2)),
            ],
        )
        .unwrap();
        assert_eq!(m, want);
    }

    #[test]
    fn chains_are_markov_by_construction() {
        use crate::space::{StateSpace, Time, TimeGrid};
        let s = Arc::new(
            PathSpace::new(
                TimeGrid::unit(4).unwrap(),
                StateSpace::cycle_graph(3).unwrap(),
                Some(Time::from(1)),
                false,
            )
            .unwrap(),
        );
        for seed in 0..5 {
            let m: PathMeasure<Exact> =
                generate(&s, &GeneratorKind::Chain, &mut rng(seed)).unwrap();
            assert_eq!(m.total_mass(), w(1, 1));
            assert!(is_markov(&m, &Weight::zero()).unwrap());
        }
    }

    #[test]
    fn mu_invariant_measures_have_uniform_marginals() {
        let s = Arc::new(PathSpace::unconstrained(3, 4, false).unwrap());
        let m: PathMeasure<Exact> =
            generate(&s, &GeneratorKind::MuInvariant, &mut rng(3)).unwrap();
        assert!(m.is_mu_invariant(&StateMeasure::uniform(4), &Weight::zero()).unwrap());
        assert_eq!(m.total_mass(), w(1, 1));
    }

    #[test]
    fn group_invariant_measures_are_invariant() {
        let s = Arc::new(PathSpace::unconstrained(3, 6, false).unwrap());
        let s3 = FiniteGroup::symmetric3();
        let kind = GeneratorKind::GroupInvariant { group: s3.clone(), side: ActionSide::Right };
        let m: PathMeasure<Exact> = generate(&s, &kind, &mut rng(4)).unwrap();
        let action = GroupAction::translation(s3, ActionSide::Right);
        assert!(is_translation_invariant(&action, &m, &Weight::zero()).unwrap());
    }

    #[test]
    fn generation_is_reproducible() {
        let s = Arc::new(PathSpace::unconstrained(4, 3, false).unwrap());
        let a: PathMeasure<Exact> = generate(&s, &GeneratorKind::Chain, &mut rng(9)).unwrap();
        let b: PathMeasure<Exact> = generate(&s, &GeneratorKind::Chain, &mut rng(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn tight_bounds_fail_loudly() {
        use crate::space::{StateSpace, Time, TimeGrid};
        // Two isolated states: no admissible step at all.
        let metric = vec![
            vec![Time::from(0), Time::from(5)],
            vec![Time::from(5), Time::from(0)],
        ];
        let states = StateSpace::with_metric(vec!["a".into(), "b".into()], metric).unwrap();
        let s = Arc::new(
            PathSpace::new(TimeGrid::unit(3).unwrap(), states, Some(Time::from(1)), false)
                .unwrap(),
        );
        // Self-loops have distance zero, so paths exist; forbid them too.
        let m = random_path(&s, &mut rng(5));
        assert!(m.is_ok());
        let constant = m.unwrap();
        assert_eq!(constant.states().iter().collect::<std::collections::BTreeSet<_>>().len(), 1);
    }
}
