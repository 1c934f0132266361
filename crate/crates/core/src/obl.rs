//! Opposition-based learning: reflect a point through the centre of the
//! search box and keep whichever of the two is better.

use crate::error::{Error, Result};
use crate::model::{Candidate, Population, Problem, SearchBounds};
use crate::rng::DrawSource;
use crate::scalar::Scalar;

/// A point together with its reflection `lower + upper - x`.
#[derive(Debug, Clone, PartialEq)]
pub struct OpposedPair<T> {
    pub original: Vec<T>,
    pub opposite: Vec<T>,
}

impl<T: Scalar> OpposedPair<T> {
    pub fn new(original: Vec<T>, bounds: &SearchBounds<T>) -> Result<Self> {
        let opposite = opposite(&original, bounds)?;
        Ok(Self { original, opposite })
    }
}

/// `lower + upper - x` per coordinate. `x` must lie inside `bounds`.
pub fn opposite<T: Scalar>(x: &[T], bounds: &SearchBounds<T>) -> Result<Vec<T>> {
    if x.len() != bounds.dim() {
        return Err(Error::structural(format!(
            "point has {} coordinates, bounds have {}",
            x.len(),
            bounds.dim()
        )));
    }
    if !bounds.contains(x) {
        return Err(Error::domain("opposition of a point outside the bounds"));
    }
    let mut out: Vec<T> = x
        .iter()
        .zip(bounds.lower().iter().zip(bounds.upper()))
        .map(|(&v, (&lo, &hi))| lo + hi - v)
        .collect();
    // rounding can push a reflected endpoint a hair outside
    bounds.clamp_in_place(&mut out);
    Ok(out)
}

/// `size / 2` random candidates plus their opposites, evaluated and sorted
/// ascending by fitness (stable, so generation order breaks ties).
pub fn opposed_init<T, P, R>(problem: &P, size: usize, rng: &mut R) -> Result<Population<T>>
where
    T: Scalar,
    P: Problem<T> + ?Sized,
    R: DrawSource + ?Sized,
{
    if size < 2 || !size.is_multiple_of(2) {
        return Err(Error::config(format!("opposed initialization needs an even size >= 2, got {size}")));
    }
    let bounds = problem.bounds();
    let randoms: Vec<Vec<T>> = (0..size / 2).map(|_| bounds.sample(rng)).collect();
    let mut members = Vec::with_capacity(size);
    for r in &randoms {
        members.push(Candidate::evaluated(r.clone(), problem));
    }
    for r in &randoms {
        members.push(Candidate::evaluated(opposite(r, bounds)?, problem));
    }
    let mut population = Population::new(members);
    population.sort_by_fitness();
    Ok(population)
}

/// Result of [`selective_opposition`].
#[derive(Debug, Clone, PartialEq)]
pub struct OppositionOutcome {
    /// Pre-sort indices whose opposite was adopted.
    pub adopted: Vec<usize>,
    /// Re-sort permutation: `order[new] = old`.
    pub order: Vec<usize>,
    pub evaluations: usize,
}

/// Tries the opposite of each member of the worse half of a population
/// sorted best first, adopting it on strict improvement, then re-sorts.
pub fn selective_opposition<T, P>(population: &mut Population<T>, problem: &P) -> Result<OppositionOutcome>
where
    T: Scalar,
    P: Problem<T> + ?Sized,
{
    let n = population.len();
    let bounds = problem.bounds();
    let mut adopted = Vec::new();
    for i in n / 2..n {
        let member = &population.members[i];
        let reflected = Candidate::evaluated(opposite(&member.position, bounds)?, problem);
        if reflected.fitness < member.fitness {
            population.members[i] = reflected;
            adopted.push(i);
        }
    }
    let order = population.sort_by_fitness();
    Ok(OppositionOutcome {
        adopted,
        order,
        evaluations: n - n / 2,
    })
}

/// Evaluates the opposite of `candidate` and returns it if strictly better.
pub fn try_opposite<T, P>(candidate: &Candidate<T>, problem: &P) -> Result<Option<Candidate<T>>>
where
    T: Scalar,
    P: Problem<T> + ?Sized,
{
    let reflected = Candidate::evaluated(opposite(&candidate.position, problem.bounds())?, problem);
    Ok((reflected.fitness < candidate.fitness).then_some(reflected))
}
