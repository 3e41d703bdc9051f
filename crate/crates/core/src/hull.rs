//! Iterating the pin operator to the Markov hull.
//!
//! A hull run applies pin operators in some order, measuring progress with
//! an aggregate of cylinder-function pseudo-metrics, until the running
//! measure is fixed by every interior pin. On a finite grid the hull of a
//! measure is the single chain product of its consecutive-pair marginals,
//! so every ordering that sweeps all interior pins lands on the same limit;
//! the driver still records non-convergence as data instead of failing.

use std::io::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cylinder::{default_test_family, CylinderFunction};
use crate::error::{Error, Result};
use crate::markov::{
    chain_product_oracle, is_strong_markov, markovianise_at, max_markov_defect,
};
use crate::measure::PathMeasure;
use crate::space::PathSpace;
use crate::weight::{within, Weight};

/// |integral of phi against a - integral against b|.
pub fn pseudo_metric<W: Weight>(
    a: &PathMeasure<W>,
    b: &PathMeasure<W>,
    phi: &CylinderFunction<W>,
) -> Result<W> {
    Ok((a.integrate(phi)? - b.integrate(phi)?).abs())
}

/// sum_j 2^(-(j+1)) |integral differences| over an ordered test family.
/// With the full indicator family this is a metric; any family gives a
/// pseudo-metric.
pub fn aggregate_metric<W: Weight>(
    a: &PathMeasure<W>,
    b: &PathMeasure<W>,
    family: &[CylinderFunction<W>],
) -> Result<W> {
    let mut acc = W::zero();
    for (j, phi) in family.iter().enumerate() {
        acc = acc + W::half_power(j) * pseudo_metric(a, b, phi)?;
    }
    Ok(acc)
}

/// The order pins are applied in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubsetOrdering {
    /// Interior pins ascending, swept repeatedly.
    FullSweep,
    /// Seeded shuffled sweeps with occasional immediate repeats mixed in.
    Random { seed: u64 },
    /// Exactly these pins, once, left to right.
    Explicit(Vec<usize>),
}

impl SubsetOrdering {
    fn validate(&self, space: &PathSpace) -> Result<()> {
        if let SubsetOrdering::Explicit(pins) = self {
            for &pin in pins {
                if pin > space.last_index() {
                    return Err(Error::BadOrderingPin { pin, len: space.len() });
                }
            }
        }
        Ok(())
    }

    /// Materialize at most `max_steps` pins.
    fn sequence(&self, space: &PathSpace, max_steps: usize) -> Vec<usize> {
        let interior = space.interior_pins();
        match self {
            SubsetOrdering::FullSweep => {
                if interior.is_empty() {
                    return Vec::new();
                }
                interior.iter().copied().cycle().take(max_steps).collect()
            }
            SubsetOrdering::Random { seed } => {
                if interior.is_empty() {
                    return Vec::new();
                }
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let mut out = Vec::with_capacity(max_steps);
                'fill: loop {
                    let mut sweep = interior.clone();
                    sweep.shuffle(&mut rng);
                    for pin in sweep {
                        out.push(pin);
                        if out.len() == max_steps {
                            break 'fill;
                        }
                        if rng.gen_range(0..3) == 0 {
                            out.push(*interior.choose(&mut rng).expect("interior nonempty"));
                            if out.len() == max_steps {
                                break 'fill;
                            }
                        }
                    }
                }
                out
            }
            SubsetOrdering::Explicit(pins) => pins.iter().copied().take(max_steps).collect(),
        }
    }
}

/// One applied pin in a hull run.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow<W: Weight> {
    pub step: usize,
    pub pin: usize,
    /// Aggregate pseudo-metric between this iterate and the previous one.
    pub distance_to_previous: W,
    /// Largest interior-pin defect of this iterate.
    pub max_defect: W,
    pub converged: bool,
}

/// The per-step log of a hull run.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceTrace<W: Weight> {
    pub rows: Vec<TraceRow<W>>,
}

impl<W: Weight> Default for ConvergenceTrace<W> {
    fn default() -> Self {
        ConvergenceTrace { rows: Vec::new() }
    }
}

impl<W: Weight> ConvergenceTrace<W> {
    /// CSV with a fixed header; weights print in their canonical form, so
    /// equal runs serialize byte-identically.
    pub fn to_csv(&self) -> String {
        let mut out = Vec::new();
        writeln!(out, "step,pin,aggregate_metric_to_prev,max_markov_defect,converged")
            .expect("write to vec");
        for row in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{}",
                row.step, row.pin, row.distance_to_previous, row.max_defect, row.converged
            )
            .expect("write to vec");
        }
        String::from_utf8(out).expect("csv is ascii")
    }
}

/// Outcome of a hull run. `converged` false is a result, not an error.
#[derive(Clone, Debug, PartialEq)]
pub struct HullRun<W: Weight> {
    pub measure: PathMeasure<W>,
    pub trace: ConvergenceTrace<W>,
    pub converged: bool,
    pub steps: usize,
}

/// Apply pins from `ordering` until the iterate is Markov within `tol` or
/// `max_steps` pins have been applied.
pub fn run_hull<W: Weight>(
    m: &PathMeasure<W>,
    ordering: &SubsetOrdering,
    tol: &W,
    max_steps: usize,
) -> Result<HullRun<W>> {
    ordering.validate(m.space())?;
    let family = default_test_family::<W>(m.space());
    let mut current = m.clone();
    let mut trace = ConvergenceTrace::default();
    let mut converged = within(&max_markov_defect(&current)?, &W::zero(), tol);
    let mut steps = 0;
    if !converged {
        for pin in ordering.sequence(m.space(), max_steps) {
            let next = markovianise_at(&current, pin)?;
            let distance = aggregate_metric(&next, &current, &family)?;
            let defect = max_markov_defect(&next)?;
            converged = within(&defect, &W::zero(), tol);
            steps += 1;
            trace.rows.push(TraceRow {
                step: steps,
                pin,
                distance_to_previous: distance,
                max_defect: defect,
                converged,
            });
            current = next;
            if converged {
                break;
            }
        }
    }
    Ok(HullRun { measure: current, trace, converged, steps })
}

/// What `verify_hull_element` established about a claimed limit.
#[derive(Clone, Debug, PartialEq)]
pub struct HullReport<W: Weight> {
    pub max_defect: W,
    pub is_markov: bool,
    pub is_strong_markov: bool,
    /// Distance to the chain product of the initial measure's
    /// consecutive-pair marginals, the hull's only element.
    pub chain_distance: W,
    pub matches_chain_product: bool,
    pub mass_preserved: bool,
    pub marginals_preserved: bool,
}

impl<W: Weight> HullReport<W> {
    pub fn all_hold(&self) -> bool {
        self.is_markov
            && self.is_strong_markov
            && self.matches_chain_product
            && self.mass_preserved
            && self.marginals_preserved
    }
}

/// Check that `limit` really is the hull element of `initial`: fixed by
/// every pin, strong Markov, equal to the chain product oracle, and
/// carrying the initial mass and marginals.
pub fn verify_hull_element<W: Weight>(
    limit: &PathMeasure<W>,
    initial: &PathMeasure<W>,
    tol: &W,
) -> Result<HullReport<W>> {
    let max_defect = max_markov_defect(limit)?;
    let is_markov = within(&max_defect, &W::zero(), tol);
    let strong = is_strong_markov(limit, tol)?;
    let chain = chain_product_oracle(initial)?;
    let chain_distance = limit.tv_distance(&chain)?;
    let matches_chain = within(&chain_distance, &W::zero(), tol);
    let mass_diff = (limit.total_mass() - initial.total_mass()).abs();
    let mass_preserved = within(&mass_diff, &W::zero(), tol);
    let mut marginals_preserved = true;
    for t in 0..initial.space().len() {
        if !limit.marginal_at(t)?.approx_eq(&initial.marginal_at(t)?, tol)? {
            marginals_preserved = false;
            break;
        }
    }
    Ok(HullReport {
        max_defect,
        is_markov,
        is_strong_markov: strong,
        chain_distance,
        matches_chain_product: matches_chain,
        mass_preserved,
        marginals_preserved,
    })
}

/// Run the hull under several orderings and confirm they agree with the
/// full sweep within `tol`. Returns false if any run fails to converge or
/// lands elsewhere.
pub fn check_ordering_independence<W: Weight>(
    m: &PathMeasure<W>,
    seeds: &[u64],
    tol: &W,
    max_steps: usize,
) -> Result<bool> {
    let reference = run_hull(m, &SubsetOrdering::FullSweep, tol, max_steps)?;
    if !reference.converged {
        return Ok(false);
    }
    for &seed in seeds {
        let run = run_hull(m, &SubsetOrdering::Random { seed }, tol, max_steps)?;
        if !run.converged || !run.measure.approx_eq(&reference.measure, tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}
