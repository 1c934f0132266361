//! Chimp optimization with four independently scheduled chimp groups,
//! leader-guided moves and chaotic relocation.
//!
//! Each iteration every chimp draws `mu`. Below 0.5 it moves to the average
//! of four leader-relative proposals; otherwise it is relocated inside the
//! bounds by a chaotic stream. New positions are evaluated and offered to the
//! four leaders (attacker, barrier, chaser, driver) in chimp order.

use std::fmt;
use std::str::FromStr;

use crate::chaos::{ChaoticMapKind, ChaoticState};
use crate::error::{Error, Result};
use crate::model::{Candidate, OptimizerResult, OptimizerTrace, Population, Problem, RunConfig, SearchBounds};
use crate::rng::{DrawSource, RandomSource};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChoaVersion {
    I,
    II,
}

impl fmt::Display for ChoaVersion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::I => "ChOA(I)",
            Self::II => "ChOA(II)",
        })
    }
}

impl FromStr for ChoaVersion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "i" | "1" => Ok(Self::I),
            "ii" | "2" => Ok(Self::II),
            _ => Err(Error::Lookup {
                kind: "ChOA version",
                name: s.to_string(),
                valid: "I, II".into(),
            }),
        }
    }
}

/// Group 1..=4 of a chimp, fixed for the whole run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChimpGroup(u8);

impl ChimpGroup {
    pub fn new(index: u8) -> Result<Self> {
        if (1..=4).contains(&index) {
            Ok(Self(index))
        } else {
            Err(Error::domain(format!("chimp group {index} outside 1..=4")))
        }
    }

    pub fn index(self) -> u8 {
        self.0
    }

    fn random<R: DrawSource + ?Sized>(rng: &mut R) -> Self {
        Self(1 + rng.index(4) as u8)
    }
}

/// The per-group `f` schedule at iteration `t` of `t_max` (1-based).
///
/// Logarithms are natural; the ratio in the ChOA(II) group-1 schedule is
/// base independent. With `t_max == 1` that ratio is taken as 1.
pub fn coefficient_f<T: Scalar>(version: ChoaVersion, group: ChimpGroup, t: usize, t_max: usize) -> Result<T> {
    if t == 0 || t > t_max {
        return Err(Error::domain(format!("iteration {t} outside 1..={t_max}")));
    }
    let lit = T::lit;
    let t = lit(t as f64);
    let tm = lit(t_max as f64);
    let r = t / tm;
    let third = lit(1.0 / 3.0);
    let quarter = lit(0.25);
    let v = match (version, group.0) {
        (ChoaVersion::I, 1) => lit(1.95) - lit(2.0) * t.powf(quarter) / tm.powf(third),
        (ChoaVersion::I, 2) => lit(1.95) - lit(2.0) * t.powf(third) / tm.powf(quarter),
        (ChoaVersion::I, 3) => lit(-3.0) * t.powf(third) / tm.powf(third) + lit(1.5),
        (ChoaVersion::I, _) => lit(-2.0) * r.powi(3) + lit(1.5),
        (ChoaVersion::II, 1) => {
            let ratio = if t_max == 1 { T::one() } else { t.ln() / tm.ln() };
            lit(2.5) - lit(2.0) * ratio
        }
        (ChoaVersion::II, 2) => lit(-2.2) * r.powi(3) + lit(2.5),
        (ChoaVersion::II, 3) => lit(2.2) + lit(2.0) * (-(lit(4.0) * r).powi(2)).exp(),
        (ChoaVersion::II, _) => lit(2.5) + lit(2.0) * r.powi(2) - lit(2.0) * (lit(2.0) * r),
    };
    Ok(v)
}

/// One leader's coefficient draw: `a = 2 f r1 - f`, `c = 2 r2`, chaotic `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoaCoefficients<T> {
    pub f: T,
    pub a: Vec<T>,
    pub c: Vec<T>,
    pub m: T,
}

impl<T: Scalar> ChoaCoefficients<T> {
    /// Draws `a` and `c` for `dim` coordinates from `rng` and `m` from the
    /// chaotic stream (one step).
    pub fn draw<R: DrawSource + ?Sized>(f: T, dim: usize, chaos: &mut ChaoticState<T>, rng: &mut R) -> Self {
        let two = T::lit(2.0);
        let a = (0..dim).map(|_| two * f * T::lit(rng.uniform()) - f).collect();
        let c = (0..dim).map(|_| two * T::lit(rng.uniform())).collect();
        let m = chaos.advance();
        Self { f, a, c, m }
    }

    fn mean_abs_a(&self) -> T {
        let n = T::lit(self.a.len().max(1) as f64);
        self.a.iter().map(|v| v.abs()).sum::<T>() / n
    }
}

/// Full coefficient draw for a chimp of `group` at iteration `t`.
pub fn coefficients<T: Scalar, R: DrawSource + ?Sized>(
    version: ChoaVersion,
    group: ChimpGroup,
    t: usize,
    t_max: usize,
    dim: usize,
    chaos: &mut ChaoticState<T>,
    rng: &mut R,
) -> Result<ChoaCoefficients<T>> {
    let f = coefficient_f(version, group, t, t_max)?;
    Ok(ChoaCoefficients::draw(f, dim, chaos, rng))
}

/// The four best candidates seen so far, best first.
#[derive(Debug, Clone, PartialEq)]
pub struct Leaders<T> {
    slots: [Candidate<T>; 4],
}

impl<T: Scalar> Leaders<T> {
    /// Takes the four best members. Smaller populations repeat their worst
    /// member in the remaining slots.
    pub fn from_population(population: &Population<T>) -> Result<Self> {
        if population.is_empty() {
            return Err(Error::structural("cannot pick leaders from an empty population"));
        }
        let mut sorted = population.clone();
        sorted.sort_by_fitness();
        let pick = |i: usize| sorted.members[i.min(sorted.len() - 1)].clone();
        Ok(Self {
            slots: [pick(0), pick(1), pick(2), pick(3)],
        })
    }

    pub fn attacker(&self) -> &Candidate<T> {
        &self.slots[0]
    }

    pub fn barrier(&self) -> &Candidate<T> {
        &self.slots[1]
    }

    pub fn chaser(&self) -> &Candidate<T> {
        &self.slots[2]
    }

    pub fn driver(&self) -> &Candidate<T> {
        &self.slots[3]
    }

    pub fn as_array(&self) -> &[Candidate<T>; 4] {
        &self.slots
    }

    pub fn is_ordered(&self) -> bool {
        self.slots.windows(2).all(|w| w[0].fitness <= w[1].fitness)
    }

    /// Inserts `candidate` ahead of the first leader it strictly beats,
    /// shifting the rest down and dropping the driver. A position already
    /// held by a leader is ignored. Returns the slot taken, if any.
    pub fn offer(&mut self, candidate: &Candidate<T>) -> Option<usize> {
        let rank = self.slots.iter().position(|s| candidate.fitness < s.fitness)?;
        if self.slots.iter().any(|s| s.position == candidate.position) {
            return None;
        }
        for i in (rank + 1..4).rev() {
            self.slots[i] = self.slots[i - 1].clone();
        }
        self.slots[rank] = candidate.clone();
        Some(rank)
    }
}

/// Average of the four leader-relative proposals
/// `X_L - a_L * |c_L * X_L - m_L * x|`, clamped into `bounds`.
pub fn leader_guided_position<T: Scalar>(
    x: &[T],
    leaders: [&[T]; 4],
    coeffs: &[ChoaCoefficients<T>; 4],
    bounds: &SearchBounds<T>,
) -> Result<Vec<T>> {
    let dim = x.len();
    if bounds.dim() != dim
        || leaders.iter().any(|l| l.len() != dim)
        || coeffs.iter().any(|c| c.a.len() != dim || c.c.len() != dim)
    {
        return Err(Error::structural("leader-guided update with mismatched lengths"));
    }
    let quarter = T::lit(0.25);
    let mut out: Vec<T> = (0..dim)
        .map(|j| {
            let total = leaders.iter().zip(coeffs).fold(T::zero(), |acc, (leader, k)| {
                let d = (k.c[j] * leader[j] - k.m * x[j]).abs();
                acc + (leader[j] - k.a[j] * d)
            });
            total * quarter
        })
        .collect();
    bounds.clamp_in_place(&mut out);
    Ok(out)
}

/// Relocates every coordinate to `lower + m (upper - lower)` with a fresh
/// chaotic value `m` per coordinate.
pub fn chaotic_jump<T: Scalar>(bounds: &SearchBounds<T>, chaos: &mut ChaoticState<T>) -> Vec<T> {
    bounds
        .lower()
        .iter()
        .zip(bounds.upper())
        .map(|(&lo, &hi)| lo + chaos.advance() * (hi - lo))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChoaParams {
    pub version: ChoaVersion,
    pub chaos: ChaoticMapKind,
    /// Replace a leader by a random chimp in the proposal whenever the mean
    /// `|a|` of its draw exceeds 1.
    pub strict_alg1: bool,
}

impl Default for ChoaParams {
    fn default() -> Self {
        Self {
            version: ChoaVersion::II,
            chaos: ChaoticMapKind::GaussMouse,
            strict_alg1: false,
        }
    }
}

/// How a sweep's proposals enter the population.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Commit {
    /// Every chimp moves.
    Replace,
    /// A chimp moves only if its proposal is strictly better.
    Screened,
}

/// What one sweep did.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReport<T> {
    pub best_so_far: T,
    pub evaluations: usize,
    pub chaotic_moves: usize,
}

/// Mutable ChOA state: population, fixed groups, leaders and chaos stream.
#[derive(Debug, Clone)]
pub struct ChoaState<T> {
    pub population: Population<T>,
    pub groups: Vec<ChimpGroup>,
    pub leaders: Leaders<T>,
    pub chaos: ChaoticState<T>,
}

impl<T: Scalar> ChoaState<T> {
    /// Random population inside the bounds, then random groups.
    pub fn init<P, R>(problem: &P, population_size: usize, params: &ChoaParams, rng: &mut R) -> Result<Self>
    where
        P: Problem<T> + ?Sized,
        R: DrawSource + ?Sized,
    {
        let members = (0..population_size)
            .map(|_| Candidate::evaluated(problem.bounds().sample(rng), problem))
            .collect();
        Self::from_population(Population::new(members), params, rng)
    }

    /// Uses an already evaluated population and draws the groups.
    pub fn from_population<R: DrawSource + ?Sized>(
        population: Population<T>,
        params: &ChoaParams,
        rng: &mut R,
    ) -> Result<Self> {
        let leaders = Leaders::from_population(&population)?;
        let groups = (0..population.len()).map(|_| ChimpGroup::random(rng)).collect();
        Ok(Self {
            population,
            groups,
            leaders,
            chaos: ChaoticState::with_default_start(params.chaos),
        })
    }

    /// Applies a permutation (`order[new] = old`) to the group tags after the
    /// population was reordered.
    pub fn permute_groups(&mut self, order: &[usize]) {
        self.groups = order.iter().map(|&i| self.groups[i]).collect();
    }

    /// One sweep over all chimps at iteration `t` of `t_max`. Every chimp
    /// moves to its proposal.
    pub fn step<P, R>(&mut self, problem: &P, params: &ChoaParams, t: usize, t_max: usize, rng: &mut R) -> Result<StepReport<T>>
    where
        P: Problem<T> + ?Sized,
        R: DrawSource + ?Sized,
    {
        self.step_with(problem, params, t, t_max, Commit::Replace, rng)
    }

    /// One sweep with an explicit commit rule. Leaders see every proposal
    /// either way.
    pub fn step_with<P, R>(
        &mut self,
        problem: &P,
        params: &ChoaParams,
        t: usize,
        t_max: usize,
        commit: Commit,
        rng: &mut R,
    ) -> Result<StepReport<T>>
    where
        P: Problem<T> + ?Sized,
        R: DrawSource + ?Sized,
    {
        let bounds = problem.bounds();
        let dim = bounds.dim();
        let mut f_by_group = [T::zero(); 4];
        for (g, slot) in f_by_group.iter_mut().enumerate() {
            *slot = coefficient_f(params.version, ChimpGroup(g as u8 + 1), t, t_max)?;
        }

        // positions are proposed against the leaders as they stood at the
        // start of the sweep, then evaluated and offered in chimp order
        let n = self.population.len();
        let mut proposals = Vec::with_capacity(n);
        let mut chaotic_moves = 0;
        for i in 0..n {
            let mu = rng.uniform();
            let next = if mu < 0.5 {
                let f = f_by_group[self.groups[i].0 as usize - 1];
                let coeffs: [ChoaCoefficients<T>; 4] =
                    std::array::from_fn(|_| ChoaCoefficients::draw(f, dim, &mut self.chaos, rng));
                let mut guides: [&[T]; 4] = std::array::from_fn(|l| self.leaders.slots[l].position.as_slice());
                if params.strict_alg1 {
                    for (l, k) in coeffs.iter().enumerate() {
                        if k.mean_abs_a() > T::one() {
                            guides[l] = &self.population.members[rng.index(n)].position;
                        }
                    }
                }
                leader_guided_position(&self.population.members[i].position, guides, &coeffs, bounds)?
            } else {
                chaotic_moves += 1;
                chaotic_jump(bounds, &mut self.chaos)
            };
            proposals.push(next);
        }

        for (i, position) in proposals.into_iter().enumerate() {
            let moved = Candidate::evaluated(position, problem);
            self.leaders.offer(&moved);
            if commit == Commit::Replace || moved.fitness < self.population.members[i].fitness {
                self.population.members[i] = moved;
            }
        }

        Ok(StepReport {
            best_so_far: self.leaders.attacker().fitness,
            evaluations: n,
            chaotic_moves,
        })
    }
}

/// Runs ChOA for `config.max_iterations` sweeps and returns the attacker.
pub fn choa_optimize<T: Scalar, P: Problem<T> + ?Sized>(
    problem: &P,
    config: &RunConfig,
    params: &ChoaParams,
) -> Result<OptimizerResult<T>> {
    config.validate_budget()?;
    let mut rng = RandomSource::new(config.seed);
    choa_optimize_with(problem, config, params, &mut rng)
}

pub fn choa_optimize_with<T: Scalar, P: Problem<T> + ?Sized, R: DrawSource + ?Sized>(
    problem: &P,
    config: &RunConfig,
    params: &ChoaParams,
    rng: &mut R,
) -> Result<OptimizerResult<T>> {
    config.validate_budget()?;
    let t_max = config.max_iterations;
    let mut state = ChoaState::init(problem, config.population_size, params, rng)?;
    let mut evaluations = config.population_size;
    let mut trace = OptimizerTrace::with_capacity(t_max);
    for t in 1..=t_max {
        let report = state.step(problem, params, t, t_max, rng)?;
        evaluations += report.evaluations;
        trace.push(report.best_so_far);
    }
    Ok(OptimizerResult {
        best: state.leaders.attacker().clone(),
        trace,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::FnProblem;
    use crate::rng::ScriptedDraws;
    use approx::assert_abs_diff_eq;

    fn g(i: u8) -> ChimpGroup {
        ChimpGroup::new(i).unwrap()
    }

    fn cand(x: f64, f: f64) -> Candidate<f64> {
        Candidate {
            position: vec![x],
            fitness: f,
        }
    }

    #[test]
    fn schedule_spot_values() {
        let f = |v, grp, t| coefficient_f::<f64>(v, g(grp), t, 100).unwrap();
        assert_abs_diff_eq!(f(ChoaVersion::II, 1, 1), 2.5, epsilon = 1e-12);
        assert_abs_diff_eq!(f(ChoaVersion::II, 1, 100), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(f(ChoaVersion::II, 2, 100), 0.3, epsilon = 1e-12);
        assert_abs_diff_eq!(f(ChoaVersion::I, 4, 100), -0.5, epsilon = 1e-12);
    }

    #[test]
    fn schedule_rejects_zero_iteration() {
        assert!(coefficient_f::<f64>(ChoaVersion::II, g(1), 0, 10).is_err());
        assert!(coefficient_f::<f64>(ChoaVersion::II, g(1), 11, 10).is_err());
        assert_eq!(coefficient_f::<f64>(ChoaVersion::II, g(1), 1, 1).unwrap(), 0.5);
        assert!(ChimpGroup::new(5).is_err());
    }

    #[test]
    fn coefficient_draw_extremes() {
        let mut chaos = ChaoticState::<f64>::with_default_start(ChaoticMapKind::Logistic);
        let k = ChoaCoefficients::draw(2.0, 3, &mut chaos, &mut ScriptedDraws::constant(0.5));
        assert_eq!(k.a, vec![0.0; 3]);
        assert_eq!(k.c, vec![1.0; 3]);
        assert_abs_diff_eq!(k.m, 0.84, epsilon = 1e-12);

        // r2 = 1 is outside a real uniform's range but pins the c extreme
        let k = ChoaCoefficients::draw(2.0, 2, &mut chaos, &mut ScriptedDraws::constant(1.0));
        assert_eq!(k.c, vec![2.0; 2]);
        assert_eq!(k.a, vec![2.0; 2]);
        assert!(k.m > 0.0 && k.m < 1.0);
    }

    fn fixed(a: f64, c: f64, m: f64) -> ChoaCoefficients<f64> {
        ChoaCoefficients {
            f: 1.0,
            a: vec![a],
            c: vec![c],
            m,
        }
    }

    #[test]
    fn leader_guided_examples() {
        let b = SearchBounds::uniform(1, -10.0, 10.0).unwrap();
        let four = [4.0];
        let leaders = [&four[..]; 4];

        let ks = std::array::from_fn(|_| fixed(1.0, 1.0, 1.0));
        assert_eq!(leader_guided_position(&[0.0], leaders, &ks, &b).unwrap(), vec![0.0]);

        let ks = std::array::from_fn(|_| fixed(0.0, 1.0, 0.3));
        assert_eq!(leader_guided_position(&[2.0], leaders, &ks, &b).unwrap(), vec![4.0]);

        let x = [3.0];
        let ks = std::array::from_fn(|_| fixed(1.7, 1.0, 1.0));
        assert_eq!(leader_guided_position(&x, [&x[..]; 4], &ks, &b).unwrap(), vec![3.0]);
    }

    #[test]
    fn leader_guided_clamps() {
        let b = SearchBounds::uniform(1, 0.0, 1.0).unwrap();
        let l = [1.0];
        let ks = std::array::from_fn(|_| fixed(-2.0, 2.0, 0.0));
        // 1 + 2 * |2 - 0| = 5, clamped to 1
        assert_eq!(leader_guided_position(&[0.5], [&l[..]; 4], &ks, &b).unwrap(), vec![1.0]);
    }

    #[test]
    fn chaotic_jump_affine_map() {
        let b = SearchBounds::new(vec![2.0, 5.0], vec![4.0, 5.0]).unwrap();
        // piecewise map: 0.1 -> 0.25
        let mut chaos = ChaoticState::new(ChaoticMapKind::Piecewise, 0.1).unwrap();
        let x = chaotic_jump(&b, &mut chaos);
        assert_abs_diff_eq!(x[0], 2.5, epsilon = 1e-12);
        assert_eq!(x[1], 5.0);
    }

    #[test]
    fn leader_cascade_hand_trace() {
        let pop = Population::new(vec![cand(3.0, 9.0), cand(-1.0, 1.0)]);
        let mut leaders = Leaders::from_population(&pop).unwrap();
        let fit = |l: &Leaders<f64>| l.as_array().iter().map(|c| c.fitness).collect::<Vec<_>>();
        assert_eq!(fit(&leaders), vec![1.0, 9.0, 9.0, 9.0]);

        assert_eq!(leaders.offer(&cand(2.0, 5.0)), Some(1));
        assert_eq!(fit(&leaders), vec![1.0, 5.0, 9.0, 9.0]);
        assert_eq!(leaders.offer(&cand(0.5, 0.25)), Some(0));
        assert_eq!(fit(&leaders), vec![0.25, 1.0, 5.0, 9.0]);
        assert_eq!(leaders.offer(&cand(2.5, 7.0)), Some(3));
        assert_eq!(fit(&leaders), vec![0.25, 1.0, 5.0, 7.0]);
        assert_eq!(leaders.offer(&cand(4.0, 16.0)), None);
        // same position as the barrier: ignored
        assert_eq!(leaders.offer(&cand(-1.0, 1.0)), None);
        assert_eq!(leaders.offer(&cand(1.0, 1.0)), Some(2));
        assert_eq!(fit(&leaders), vec![0.25, 1.0, 1.0, 5.0]);
        assert_eq!(leaders.attacker().position, vec![0.5]);
        assert_eq!(leaders.driver().position, vec![2.0]);
        assert!(leaders.is_ordered());
    }

    fn sphere() -> FnProblem<f64, impl Fn(&[f64]) -> f64> {
        FnProblem::new(SearchBounds::uniform(2, -5.0, 5.0).unwrap(), |x: &[f64]| {
            x.iter().map(|v| v * v).sum()
        })
    }

    #[test]
    fn stationary_when_all_leaders_coincide_and_a_is_zero() {
        let p = sphere();
        let point = vec![1.0, -2.0];
        let pop = Population::new(vec![Candidate::evaluated(point.clone(), &p); 4]);
        let params = ChoaParams::default();
        // per chimp: mu = 0.4, then 4 leaders x (2 r1 + 2 r2) = 0.5
        let mut script = vec![0.4];
        script.extend(std::iter::repeat_n(0.5, 16));
        let mut rng = ScriptedDraws::new(script.clone());
        let mut st = ChoaState::from_population(pop, &params, &mut RandomSource::new(0)).unwrap();
        let before = st.leaders.clone();
        for t in 1..=5 {
            let r = st.step(&p, &params, t, 5, &mut rng).unwrap();
            assert_eq!(r.chaotic_moves, 0);
            assert_eq!(r.best_so_far, 5.0);
        }
        assert_eq!(st.leaders, before);
        assert!(st.population.members.iter().all(|c| c.position == point));
    }

    #[test]
    fn single_chimp_single_iteration() {
        let p = sphere();
        let cfg = RunConfig {
            population_size: 1,
            max_iterations: 1,
            seed: 3,
            k_clusters: 1,
        };
        let params = ChoaParams::default();
        let mut rng = RandomSource::new(3);
        let init = Candidate::evaluated(p.bounds().sample(&mut rng.clone()), &p);
        let res = choa_optimize_with(&p, &cfg, &params, &mut rng).unwrap();
        assert!(res.best.fitness <= init.fitness);
        assert_eq!(res.trace.len(), 1);
        assert_eq!(res.evaluations, 2);
    }

    #[test]
    fn sphere_run_is_monotone_ordered_and_reproducible() {
        let p = sphere();
        let cfg = RunConfig {
            population_size: 20,
            max_iterations: 100,
            seed: 9,
            k_clusters: 1,
        };
        for version in [ChoaVersion::I, ChoaVersion::II] {
            for strict in [false, true] {
                let params = ChoaParams {
                    version,
                    chaos: ChaoticMapKind::Tent,
                    strict_alg1: strict,
                };
                let a = choa_optimize(&p, &cfg, &params).unwrap();
                let b = choa_optimize(&p, &cfg, &params).unwrap();
                assert_eq!(a, b);
                assert_eq!(a.trace.len(), 100);
                assert!(a.trace.is_non_increasing());
                assert_eq!(a.trace.last(), Some(a.best.fitness));
                assert!(a.best.fitness < 0.5, "{version} strict={strict}: {}", a.best.fitness);
            }
        }
    }

    #[test]
    fn every_step_keeps_invariants() {
        let p = sphere();
        let params = ChoaParams::default();
        let mut rng = RandomSource::new(21);
        let mut st = ChoaState::init(&p, 12, &params, &mut rng).unwrap();
        let mut prev = st.leaders.attacker().fitness;
        for t in 1..=50 {
            st.step(&p, &params, t, 50, &mut rng).unwrap();
            assert!(st.leaders.is_ordered());
            assert!(st.leaders.attacker().fitness <= prev);
            prev = st.leaders.attacker().fitness;
            for c in &st.population.members {
                assert!(p.bounds().contains(&c.position));
            }
        }
    }

    #[test]
    fn screened_sweeps_never_worsen_members() {
        let p = sphere();
        let params = ChoaParams::default();
        let mut rng = RandomSource::new(12);
        let mut st = ChoaState::init(&p, 12, &params, &mut rng).unwrap();
        for t in 1..=20 {
            let before = st.population.fitnesses();
            st.step_with(&p, &params, t, 20, Commit::Screened, &mut rng).unwrap();
            for (a, b) in before.iter().zip(st.population.fitnesses()) {
                assert!(b <= *a);
            }
        }
    }
}
