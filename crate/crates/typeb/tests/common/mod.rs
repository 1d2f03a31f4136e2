//! Shared helpers for the integration suites: seeded random rational data.

use rand::rngs::StdRng;
use rand::Rng;

use typeb::algebra::{rat, rat_int, Rational};
use typeb::fock::{FactorSpec, FockVector, MatrixQ, VectorQ};
use typeb::moments::MomentProblem;
use typeb::BivariatePoly;

pub fn random_rational(rng: &mut StdRng) -> Rational {
    rat(rng.gen_range(-3..=3), rng.gen_range(1..=3))
}

pub fn random_vector(rng: &mut StdRng, dim: usize) -> VectorQ {
    (0..dim).map(|_| random_rational(rng)).collect()
}

pub fn random_matrix(rng: &mut StdRng, dim: usize) -> MatrixQ {
    (0..dim).map(|_| random_vector(rng, dim)).collect()
}

pub fn unit(dim: usize, i: usize) -> VectorQ {
    (0..dim)
        .map(|j| if i == j { rat_int(1) } else { rat_int(0) })
        .collect()
}

pub fn identity_matrix(dim: usize) -> MatrixQ {
    (0..dim).map(|i| unit(dim, i)).collect()
}

pub fn zero_matrix(dim: usize) -> MatrixQ {
    vec![vec![rat_int(0); dim]; dim]
}

pub fn random_factor(rng: &mut StdRng, dim: usize) -> FactorSpec {
    FactorSpec {
        x_left: random_vector(rng, dim),
        x_right: random_vector(rng, dim),
        t_left: random_matrix(rng, dim),
        t_right: random_matrix(rng, dim),
        lam_left: random_rational(rng),
        lam_right: random_rational(rng),
    }
}

pub fn random_problem(rng: &mut StdRng, dim: usize, order: usize) -> MomentProblem {
    let factors = (0..order).map(|_| random_factor(rng, dim)).collect();
    MomentProblem::new(dim, factors).expect("valid factors")
}

/// Random state supported on a single level with constant rational
/// coefficients.
pub fn random_state(rng: &mut StdRng, dim: usize, level: usize, terms: usize) -> FockVector {
    let mut v = FockVector::zero(dim);
    for _ in 0..terms {
        let word: Vec<u8> = (0..2 * level)
            .map(|_| rng.gen_range(1..=dim as u8))
            .collect();
        let c = random_rational(rng);
        v.add_term(word, &BivariatePoly::constant(c));
    }
    v
}

/// Every basis word of the given level over letters `1..=dim`.
pub fn level_words(dim: usize, level: usize) -> Vec<Vec<u8>> {
    let mut words: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 0..2 * level {
        words = words
            .into_iter()
            .flat_map(|w| {
                (1..=dim as u8).map(move |l| {
                    let mut next = w.clone();
                    next.push(l);
                    next
                })
            })
            .collect();
    }
    words
}
