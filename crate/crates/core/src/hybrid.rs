//! ChOAGNDA: ChOA(II) with the Gauss map, GNDA and opposition-based learning
//! interleaved over one shared population.
//!
//! Per outer iteration: one ChOA sweep, selective opposition of the worse
//! half, one GNDA sweep guided by the better of the attacker and the GNDA
//! incumbent, and finally an opposition attempt on the global best. Any
//! improvement found by GNDA or opposition is offered to the ChOA leaders.

use crate::chaos::ChaoticMapKind;
use crate::choa::{ChoaParams, ChoaState, ChoaVersion, Commit};
use crate::error::Result;
use crate::gnda::GndaState;
use crate::model::{Candidate, OptimizerResult, OptimizerTrace, Problem, RunConfig};
use crate::obl::{opposed_init, selective_opposition, try_opposite};
use crate::rng::{DrawSource, RandomSource};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HybridParams {
    pub gnda: bool,
    pub obl: bool,
    pub strict_alg1: bool,
}

impl Default for HybridParams {
    fn default() -> Self {
        Self {
            gnda: true,
            obl: true,
            strict_alg1: false,
        }
    }
}

impl HybridParams {
    /// The ChOA configuration used inside the hybrid.
    pub fn choa(&self) -> ChoaParams {
        ChoaParams {
            version: ChoaVersion::II,
            chaos: ChaoticMapKind::GaussMouse,
            strict_alg1: self.strict_alg1,
        }
    }
}

/// Per-iteration log entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseRecord<T> {
    pub t: usize,
    pub attacker_fitness: T,
    pub gnda_best_fitness: T,
    pub global_best_fitness: T,
    /// Whether the opposite of the global best replaced it.
    pub opposition_adopted: bool,
    /// Objective evaluations spent in this iteration.
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HybridResult<T> {
    pub result: OptimizerResult<T>,
    pub phases: Vec<PhaseRecord<T>>,
}

fn better<T: Scalar>(a: &Candidate<T>, b: &Candidate<T>) -> Candidate<T> {
    if b.fitness < a.fitness {
        b.clone()
    } else {
        a.clone()
    }
}

#[derive(Debug, Clone)]
pub struct HybridState<T> {
    pub choa: ChoaState<T>,
    pub gnda_best: Candidate<T>,
    pub global_best: Candidate<T>,
    pub t: usize,
    params: HybridParams,
}

impl<T: Scalar> HybridState<T> {
    /// Opposed initialization when opposition is on, otherwise the same
    /// random initialization ChOA uses on its own.
    pub fn init<P, R>(problem: &P, config: &RunConfig, params: HybridParams, rng: &mut R) -> Result<Self>
    where
        P: Problem<T> + ?Sized,
        R: DrawSource + ?Sized,
    {
        config.validate()?;
        let choa_params = params.choa();
        let choa = if params.obl {
            let population = opposed_init(problem, config.population_size, rng)?;
            ChoaState::from_population(population, &choa_params, rng)?
        } else {
            ChoaState::init(problem, config.population_size, &choa_params, rng)?
        };
        let best = choa.leaders.attacker().clone();
        Ok(Self {
            choa,
            gnda_best: best.clone(),
            global_best: best,
            t: 0,
            params,
        })
    }

    /// Runs one outer iteration `t` of `t_max`.
    pub fn iterate<P, R>(&mut self, problem: &P, t_max: usize, rng: &mut R) -> Result<PhaseRecord<T>>
    where
        P: Problem<T> + ?Sized,
        R: DrawSource + ?Sized,
    {
        self.t += 1;
        let t = self.t;
        let choa_params = self.params.choa();
        let mut evaluations = 0;

        // with GNDA on, the shared population is screened: ChOA proposals
        // replace a member only on strict improvement, as GNDA trials do
        let commit = if self.params.gnda { Commit::Screened } else { Commit::Replace };
        let report = self.choa.step_with(problem, &choa_params, t, t_max, commit, rng)?;
        evaluations += report.evaluations;

        if self.params.obl {
            let outcome = selective_opposition(&mut self.choa.population, problem)?;
            evaluations += outcome.evaluations;
            self.choa.permute_groups(&outcome.order);
            for (new, &old) in outcome.order.iter().enumerate() {
                if outcome.adopted.contains(&old) {
                    let c = self.choa.population.members[new].clone();
                    self.choa.leaders.offer(&c);
                }
            }
        }

        if self.params.gnda {
            let guide = better(&self.gnda_best, self.choa.leaders.attacker());
            let population = std::mem::take(&mut self.choa.population);
            let mut gnda = GndaState { population, best: guide };
            let report = gnda.step(problem, rng)?;
            evaluations += report.evaluations;
            for &i in &report.accepted {
                self.choa.leaders.offer(&gnda.population.members[i]);
            }
            self.gnda_best = gnda.best;
            self.choa.population = gnda.population;
        } else {
            self.gnda_best = better(&self.gnda_best, self.choa.leaders.attacker());
        }

        let mut global = better(&better(&self.global_best, self.choa.leaders.attacker()), &self.gnda_best);
        let mut opposition_adopted = false;
        if self.params.obl {
            evaluations += 1;
            if let Some(reflected) = try_opposite(&global, problem)? {
                self.choa.leaders.offer(&reflected);
                global = reflected;
                opposition_adopted = true;
            }
        }
        self.global_best = global;

        Ok(PhaseRecord {
            t,
            attacker_fitness: self.choa.leaders.attacker().fitness,
            gnda_best_fitness: self.gnda_best.fitness,
            global_best_fitness: self.global_best.fitness,
            opposition_adopted,
            evaluations,
        })
    }
}

pub fn choagnda_optimize<T: Scalar, P: Problem<T> + ?Sized>(
    problem: &P,
    config: &RunConfig,
    params: HybridParams,
) -> Result<HybridResult<T>> {
    let mut rng = RandomSource::new(config.seed);
    choagnda_optimize_with(problem, config, params, &mut rng)
}

pub fn choagnda_optimize_with<T: Scalar, P: Problem<T> + ?Sized, R: DrawSource + ?Sized>(
    problem: &P,
    config: &RunConfig,
    params: HybridParams,
    rng: &mut R,
) -> Result<HybridResult<T>> {
    let mut state = HybridState::init(problem, config, params, rng)?;
    let mut evaluations = config.population_size;
    let mut trace = OptimizerTrace::with_capacity(config.max_iterations);
    let mut phases = Vec::with_capacity(config.max_iterations);
    for _ in 0..config.max_iterations {
        let record = state.iterate(problem, config.max_iterations, rng)?;
        evaluations += record.evaluations;
        trace.push(record.global_best_fitness);
        phases.push(record);
    }
    Ok(HybridResult {
        result: OptimizerResult {
            best: state.global_best,
            trace,
            evaluations,
        },
        phases,
    })
}
