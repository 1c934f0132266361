//! Generalized normal distribution optimization.
//!
//! Each candidate either samples around the average of itself, the current
//! best and the population mean (local exploitation) or moves along two
//! fitness-ordered difference vectors (global exploration). A trial replaces
//! its parent only if strictly better.

use crate::error::{Error, Result};
use crate::model::{Candidate, OptimizerResult, OptimizerTrace, Population, Problem, RunConfig};
use crate::rng::{DrawSource, RandomSource};
use crate::scalar::Scalar;

/// Which branch produced a trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GndaMove {
    Local,
    Global,
}

/// Local branch for one candidate: `mu + delta * eta` per coordinate.
///
/// `mu` is the coordinate mean of `x`, `best` and `mean`; `delta` is the
/// root of the mean squared deviation of those three from `mu`.
pub fn local_trial<T: Scalar>(x: &[T], best: &[T], mean: &[T], eta: &[T]) -> Vec<T> {
    let third = T::lit(1.0 / 3.0);
    x.iter()
        .zip(best)
        .zip(mean)
        .zip(eta)
        .map(|(((&xi, &bi), &mi), &e)| {
            let mu = (xi + bi + mi) * third;
            let delta = (((xi - mu).powi(2) + (bi - mu).powi(2) + (mi - mu).powi(2)) * third).sqrt();
            mu + delta * e
        })
        .collect()
}

/// Draws the penalty factors `eta` for `dim` coordinates. Uniforms are
/// consumed as `a`, `b`, then `l1`, `l2` per coordinate; `l1 == 0` is
/// redrawn. `a > b` shifts every phase by pi.
pub fn draw_eta<R: DrawSource + ?Sized>(dim: usize, rng: &mut R) -> Vec<f64> {
    let a = rng.uniform();
    let b = rng.uniform();
    let shift = if a <= b { 0.0 } else { std::f64::consts::PI };
    (0..dim)
        .map(|_| {
            let mut l1 = rng.uniform();
            while l1 <= 0.0 {
                l1 = rng.uniform();
            }
            let l2 = rng.uniform();
            (-l1.ln()).sqrt() * (std::f64::consts::TAU * l2 + shift).cos()
        })
        .collect()
}

/// Global branch: `x + beta |l3| v1 + (1 - beta) |l4| v2` with normal
/// `l3`, `l4` per coordinate. Each difference vector points from the worse
/// of its pair toward the better.
#[allow(clippy::too_many_arguments)]
pub fn global_trial<T: Scalar>(
    x: &Candidate<T>,
    p1: &Candidate<T>,
    p2: &Candidate<T>,
    p3: &Candidate<T>,
    beta: T,
    l3: &[T],
    l4: &[T],
) -> Vec<T> {
    let v1 = |j: usize| {
        if x.fitness < p1.fitness {
            x.position[j] - p1.position[j]
        } else {
            p1.position[j] - x.position[j]
        }
    };
    let v2 = |j: usize| {
        if p2.fitness < p3.fitness {
            p2.position[j] - p3.position[j]
        } else {
            p3.position[j] - p2.position[j]
        }
    };
    (0..x.position.len())
        .map(|j| x.position[j] + beta * l3[j].abs() * v1(j) + (T::one() - beta) * l4[j].abs() * v2(j))
        .collect()
}

/// Greedy screening: the trial survives only if strictly better.
pub fn screen<T: Scalar>(incumbent: Candidate<T>, trial: Candidate<T>) -> Candidate<T> {
    if trial.fitness < incumbent.fitness {
        trial
    } else {
        incumbent
    }
}

/// Three distinct indices below `n`, all different from `exclude`.
fn distinct_three<R: DrawSource + ?Sized>(n: usize, exclude: usize, rng: &mut R) -> [usize; 3] {
    let mut picked = [usize::MAX; 3];
    for slot in 0..3 {
        loop {
            let c = rng.index(n);
            if c != exclude && !picked[..slot].contains(&c) {
                picked[slot] = c;
                break;
            }
        }
    }
    picked
}

/// What one GNDA sweep did.
#[derive(Debug, Clone, PartialEq)]
pub struct GndaReport {
    pub evaluations: usize,
    /// Indices whose trial was accepted, in acceptance order.
    pub accepted: Vec<usize>,
    pub moves: Vec<GndaMove>,
}

#[derive(Debug, Clone)]
pub struct GndaState<T> {
    pub population: Population<T>,
    pub best: Candidate<T>,
}

impl<T: Scalar> GndaState<T> {
    pub fn init<P, R>(problem: &P, population_size: usize, rng: &mut R) -> Result<Self>
    where
        P: Problem<T> + ?Sized,
        R: DrawSource + ?Sized,
    {
        let members = (0..population_size)
            .map(|_| Candidate::evaluated(problem.bounds().sample(rng), problem))
            .collect();
        Self::from_population(Population::new(members))
    }

    pub fn from_population(population: Population<T>) -> Result<Self> {
        if population.len() < 4 {
            return Err(Error::config(format!(
                "GNDA needs at least 4 candidates for distinct partners, got {}",
                population.len()
            )));
        }
        let best = population.best().expect("non-empty").clone();
        Ok(Self { population, best })
    }

    /// One sweep. Trials use the best and mean from the start of the sweep;
    /// acceptance is applied in index order.
    pub fn step<P, R>(&mut self, problem: &P, rng: &mut R) -> Result<GndaReport>
    where
        P: Problem<T> + ?Sized,
        R: DrawSource + ?Sized,
    {
        let bounds = problem.bounds();
        let n = self.population.len();
        let dim = bounds.dim();
        let mean = self.population.mean_position();
        let guide = self.best.position.clone();
        let snapshot = self.population.clone();

        let mut moves = Vec::with_capacity(n);
        let mut trials = Vec::with_capacity(n);
        for i in 0..n {
            let alpha = rng.uniform();
            let x = &snapshot.members[i];
            // alpha above one half selects local exploitation
            let mut trial = if alpha > 0.5 {
                moves.push(GndaMove::Local);
                let eta: Vec<T> = draw_eta(dim, rng).into_iter().map(T::lit).collect();
                local_trial(&x.position, &guide, &mean, &eta)
            } else {
                moves.push(GndaMove::Global);
                let beta = T::lit(rng.uniform());
                let l3: Vec<T> = (0..dim).map(|_| T::lit(rng.standard_normal())).collect();
                let l4: Vec<T> = (0..dim).map(|_| T::lit(rng.standard_normal())).collect();
                let [p1, p2, p3] = distinct_three(n, i, rng);
                let m = &snapshot.members;
                global_trial(x, &m[p1], &m[p2], &m[p3], beta, &l3, &l4)
            };
            bounds.clamp_in_place(&mut trial);
            trials.push(trial);
        }

        let mut accepted = Vec::new();
        for (i, trial) in trials.into_iter().enumerate() {
            let cand = Candidate::evaluated(trial, problem);
            if cand.fitness < self.population.members[i].fitness {
                if cand.fitness < self.best.fitness {
                    self.best = cand.clone();
                }
                self.population.members[i] = cand;
                accepted.push(i);
            }
        }
        Ok(GndaReport {
            evaluations: n,
            accepted,
            moves,
        })
    }
}

pub fn gnda_optimize<T: Scalar, P: Problem<T> + ?Sized>(problem: &P, config: &RunConfig) -> Result<OptimizerResult<T>> {
    let mut rng = RandomSource::new(config.seed);
    gnda_optimize_with(problem, config, &mut rng)
}

pub fn gnda_optimize_with<T: Scalar, P: Problem<T> + ?Sized, R: DrawSource + ?Sized>(
    problem: &P,
    config: &RunConfig,
    rng: &mut R,
) -> Result<OptimizerResult<T>> {
    config.validate_budget()?;
    let mut state = GndaState::init(problem, config.population_size, rng)?;
    let mut evaluations = config.population_size;
    let mut trace = OptimizerTrace::with_capacity(config.max_iterations);
    for _ in 0..config.max_iterations {
        evaluations += state.step(problem, rng)?.evaluations;
        trace.push(state.best.fitness);
    }
    Ok(OptimizerResult {
        best: state.best,
        trace,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{FnProblem, SearchBounds};
    use crate::rng::ScriptedDraws;
    use approx::assert_abs_diff_eq;

    fn cand(p: &[f64], f: f64) -> Candidate<f64> {
        Candidate {
            position: p.to_vec(),
            fitness: f,
        }
    }

    #[test]
    fn local_trial_at_consensus_is_fixed() {
        let p = [1.0, 2.0];
        assert_eq!(local_trial(&p, &p, &p, &[0.9, -2.0]), p.to_vec());
    }

    #[test]
    fn local_trial_numbers() {
        let t = local_trial(&[0.0], &[3.0], &[3.0], &[1.0]);
        // mu = 2, delta = sqrt((4 + 1 + 1) / 3)
        assert_abs_diff_eq!(t[0], 2.0 + 2f64.sqrt(), epsilon = 1e-12);
        assert_eq!(local_trial(&[0.0], &[3.0], &[3.0], &[0.0]), vec![2.0]);
    }

    #[test]
    fn eta_branches() {
        // a <= b: sqrt(-ln 0.5) * cos(0)
        let e = draw_eta(1, &mut ScriptedDraws::new(vec![0.1, 0.2, 0.5, 0.0]));
        assert_abs_diff_eq!(e[0], (2f64.ln()).sqrt(), epsilon = 1e-12);
        // a > b shifts the phase by pi
        let e = draw_eta(2, &mut ScriptedDraws::new(vec![0.3, 0.2, 0.5, 0.0, 1.0, 0.5]));
        assert_abs_diff_eq!(e[0], -(2f64.ln()).sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(e[1], 0.0, epsilon = 1e-12);
        // l1 = 0 is redrawn
        let e = draw_eta(1, &mut ScriptedDraws::new(vec![0.1, 0.2, 0.0, 1.0, 0.25]));
        assert_abs_diff_eq!(e[0], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn global_trial_direction() {
        let x = cand(&[0.0], 5.0);
        let p1 = cand(&[2.0], 1.0);
        let p2 = cand(&[1.0], 3.0);
        let p3 = cand(&[4.0], 2.0);
        // v1 = 2 - 0 (p1 better), v2 = 4 - 1 (p3 better)
        let t = global_trial(&x, &p1, &p2, &p3, 0.5, &[-1.0], &[2.0]);
        assert_abs_diff_eq!(t[0], 0.5 * 2.0 + 0.5 * 2.0 * 3.0, epsilon = 1e-12);
    }

    #[test]
    fn difference_vector_examples() {
        let x = cand(&[1.0], 1.0);
        let p1 = cand(&[3.0], 9.0);
        let p2 = cand(&[5.0], 25.0);
        let p3 = cand(&[2.0], 4.0);
        // beta = 1 keeps only v1 = -2
        assert_eq!(global_trial(&x, &p1, &p2, &p3, 1.0, &[1.0], &[7.0]), vec![-1.0]);
        // beta = 0 keeps only v2 = -3
        assert_eq!(global_trial(&x, &p1, &p2, &p3, 0.0, &[7.0], &[1.0]), vec![-2.0]);
        assert_eq!(global_trial(&x, &p1, &p2, &p3, 1.0, &[0.0], &[7.0]), vec![1.0]);
    }

    #[test]
    fn screening_is_strict() {
        let a = cand(&[0.0], 10.0);
        assert_eq!(screen(a.clone(), cand(&[1.0], 7.0)).fitness, 7.0);
        assert_eq!(screen(a.clone(), cand(&[1.0], 10.0)).position, vec![0.0]);
    }

    #[test]
    fn identical_population_is_fixed() {
        let p = sphere();
        let c = Candidate::evaluated(vec![1.0, 1.0, 1.0], &p);
        let mut st = GndaState::from_population(Population::new(vec![c.clone(); 6])).unwrap();
        st.step(&p, &mut RandomSource::new(4)).unwrap();
        assert!(st.population.members.iter().all(|m| *m == c));
        assert_eq!(st.best, c);
    }

    #[test]
    fn partners_distinct_and_exclude_self() {
        let mut rng = RandomSource::new(1);
        for _ in 0..1000 {
            let [a, b, c] = distinct_three(4, 2, &mut rng);
            assert!(a != b && b != c && a != c);
            assert!(![a, b, c].contains(&2));
        }
    }

    fn sphere() -> FnProblem<f64, impl Fn(&[f64]) -> f64> {
        FnProblem::new(SearchBounds::uniform(3, -5.0, 5.0).unwrap(), |x: &[f64]| {
            x.iter().map(|v| v * v).sum()
        })
    }

    #[test]
    fn never_worsens_members() {
        let p = sphere();
        let mut rng = RandomSource::new(5);
        let mut st = GndaState::init(&p, 10, &mut rng).unwrap();
        for _ in 0..30 {
            let before = st.population.fitnesses();
            let best = st.best.fitness;
            st.step(&p, &mut rng).unwrap();
            for (a, b) in before.iter().zip(st.population.fitnesses()) {
                assert!(b <= *a);
            }
            assert!(st.best.fitness <= best);
            assert_eq!(st.best.fitness, st.population.best().unwrap().fitness);
        }
    }

    #[test]
    fn converges_on_sphere() {
        let p = sphere();
        let cfg = RunConfig {
            population_size: 20,
            max_iterations: 200,
            seed: 2,
            k_clusters: 1,
        };
        let r = gnda_optimize(&p, &cfg).unwrap();
        assert!(r.trace.is_non_increasing());
        assert!(r.best.fitness < 1e-6, "{}", r.best.fitness);
        assert_eq!(r.evaluations, 20 * 201);
        assert_eq!(r, gnda_optimize(&p, &cfg).unwrap());
    }

    #[test]
    fn tiny_population_rejected() {
        let p = sphere();
        assert!(GndaState::init(&p, 3, &mut RandomSource::new(0)).is_err());
    }
}
