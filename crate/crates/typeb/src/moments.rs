//! Combinatorial moment formulas: block cumulants, the partition sum for
//! mixed vacuum moments, the vector-level Wick expansion over marked
//! partitions, and the three specialization formulas.
//!
//! Factor index 1 is the rightmost operator of the product. A signed index
//! `j` resolves to the left member of factor `|j|` when `j < 0` and to the
//! right member when `j > 0`; block sequences are read in increasing
//! absolute value.

use num_traits::One;

use crate::algebra::{BivariatePoly, Rational};
use crate::error::{Error, Result};
use crate::fock::{
    self, annihilation_closed, creation, gauge_closed, mat_vec, vacuum_expectation_oracle,
    FactorSpec, FockVector, MatrixQ, VectorQ,
};
use crate::partitions::{
    BBlock, EpsLetter, ExtendedTypeBPartition, PartitionClass, TypeBPartition,
};

/// A mixed-moment problem: a dimension and an ordered list of factors,
/// index 1 rightmost.
#[derive(Clone, Debug)]
pub struct MomentProblem {
    dim: usize,
    factors: Vec<FactorSpec>,
}

/// One summand of the Wick expansion: a polynomial weight times the tensor
/// state contributed by the marked blocks.
///
/// The weight exponents obey the combinatorial bounds: the first exponent is
/// at most the order, the second at most order*(order-1).
#[derive(Clone, Debug)]
pub struct WickTerm {
    pub coefficient: BivariatePoly,
    pub state: FockVector,
}

/// Specializations of the moment formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecializationMode {
    /// Sum over positive-arc partitions; equals the full formula at
    /// `alpha = 0`.
    TypeA,
    /// Sum over pair partitions; equals the full formula when all gauge
    /// symbols and scalars vanish.
    Gaussian,
    /// Sum over noncrossing positive-arc partitions with outer-arc weights;
    /// equals the full formula at `q = 0` for palindromic factors.
    MeixnerQ0,
}

impl MomentProblem {
    pub fn new(dim: usize, factors: Vec<FactorSpec>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Precondition("factor list must be nonempty".into()));
        }
        for f in &factors {
            f.validate(dim)?;
        }
        Ok(MomentProblem { dim, factors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[FactorSpec] {
        &self.factors
    }

    fn factor(&self, j: i64) -> Result<&FactorSpec> {
        let a = j.unsigned_abs() as usize;
        if j == 0 || a > self.factors.len() {
            return Err(Error::IndexOutOfRange(j));
        }
        Ok(&self.factors[a - 1])
    }

    fn vector_of(&self, j: i64) -> Result<&VectorQ> {
        let f = self.factor(j)?;
        Ok(if j < 0 { &f.x_left } else { &f.x_right })
    }

    fn matrix_of(&self, j: i64) -> Result<&MatrixQ> {
        let f = self.factor(j)?;
        Ok(if j < 0 { &f.t_left } else { &f.t_right })
    }

    fn lambda_of(&self, j: i64) -> Result<&Rational> {
        let f = self.factor(j)?;
        Ok(if j < 0 { &f.lam_left } else { &f.lam_right })
    }

    /// Cumulant of a singleton pair `(-a, a)`: the product of the two
    /// scalars.
    pub fn singleton_cumulant(&self, a: i64) -> Result<Rational> {
        Ok(self.lambda_of(-a)? * self.lambda_of(a)?)
    }

    /// Cumulant of a block pair: for each side, the pairing of the extreme
    /// vector with the gauge chain over the interior indices applied to the
    /// first vector. The chain is empty for pairs.
    pub fn block_cumulant(&self, block: &BBlock) -> Result<Rational> {
        Ok(self.side_pairing(&block.negative)? * self.side_pairing(&block.positive)?)
    }

    fn side_pairing(&self, side: &[i64]) -> Result<Rational> {
        let mut v = self.vector_of(side[0])?.clone();
        for &j in &side[1..side.len() - 1] {
            v = mat_vec(self.matrix_of(j)?, &v);
        }
        Ok(fock::dot(self.vector_of(side[side.len() - 1])?, &v))
    }

    fn partition_cumulant(&self, p: &TypeBPartition) -> Result<Rational> {
        let s = p.b_structure();
        let mut acc = Rational::one();
        for &a in &s.singletons {
            acc *= self.singleton_cumulant(a)?;
        }
        for block in &s.blocks {
            acc *= self.block_cumulant(block)?;
        }
        Ok(acc)
    }

    /// The partition sum for the mixed vacuum moment. Must agree with
    /// [`MomentProblem::oracle`] exactly.
    pub fn moment(&self) -> Result<BivariatePoly> {
        let mut acc = BivariatePoly::zero();
        for p in TypeBPartition::enumerate(self.order(), PartitionClass::B)? {
            let c = self.partition_cumulant(&p)?;
            let stats = p.statistics();
            acc.add_term(&c, stats.na as u32, stats.rc as u32);
        }
        Ok(acc)
    }

    /// Ground truth by direct operator application to the vacuum.
    pub fn oracle(&self) -> Result<BivariatePoly> {
        vacuum_expectation_oracle(self.dim, &self.factors)
    }

    /// Vector-level Wick expansion for a letter sequence: the sum of
    /// [`MomentProblem::wick_terms`].
    pub fn wick_vector(&self, eps: &[EpsLetter]) -> Result<FockVector> {
        let mut acc = FockVector::zero(self.dim);
        for term in self.wick_terms(eps)? {
            acc.add_assign(&term.state.scale(&term.coefficient));
        }
        Ok(acc)
    }

    /// One Wick summand per compatible marked partition: regular blocks
    /// contribute cumulants to the coefficient, marked blocks contribute
    /// tensor legs to the state.
    pub fn wick_terms(&self, eps: &[EpsLetter]) -> Result<Vec<WickTerm>> {
        if eps.len() != self.order() {
            return Err(Error::Precondition(format!(
                "letter sequence has length {}, expected {}",
                eps.len(),
                self.order()
            )));
        }
        let mut out = Vec::new();
        for ext in ExtendedTypeBPartition::enumerate_for_letters(eps)? {
            let base = ext.base();
            let structure = base.b_structure();
            let mut scalar = Rational::one();
            for block in &structure.blocks {
                if !ext.is_extended(block.key()) {
                    scalar *= self.block_cumulant(block)?;
                }
            }
            // Marked pairs ordered by their extreme element: descending on
            // the left half, ascending on the right, so the word nests.
            let mut marked: Vec<&BBlock> = structure
                .blocks
                .iter()
                .filter(|b| ext.is_extended(b.key()))
                .collect();
            let singleton_blocks: Vec<BBlock> = structure
                .singletons
                .iter()
                .map(|&a| BBlock {
                    positive: vec![a],
                    negative: vec![-a],
                })
                .collect();
            marked.extend(singleton_blocks.iter());
            marked.sort_by_key(|b| b.key());
            let mut legs: Vec<VectorQ> = Vec::with_capacity(2 * marked.len());
            for block in marked.iter().rev() {
                legs.push(self.gauge_chain(&block.negative)?);
            }
            for block in &marked {
                legs.push(self.gauge_chain(&block.positive)?);
            }
            let word = FockVector::simple_tensor(self.dim, &legs);
            let stats = base.statistics();
            let weight = BivariatePoly::monomial(
                scalar,
                stats.na as u32,
                (stats.rc + ext.minmax()) as u32,
            );
            out.push(WickTerm {
                coefficient: weight,
                state: word,
            });
        }
        Ok(out)
    }

    /// Full gauge chain of a marked block side: every interior *and* extreme
    /// matrix applied to the first vector.
    fn gauge_chain(&self, side: &[i64]) -> Result<VectorQ> {
        let mut v = self.vector_of(side[0])?.clone();
        for &j in &side[1..] {
            v = mat_vec(self.matrix_of(j)?, &v);
        }
        Ok(v)
    }

    /// Apply the operator word selected by the letters to the vacuum:
    /// creation, closed-form annihilation or closed-form gauge per position,
    /// rightmost factor first.
    pub fn operator_word(&self, eps: &[EpsLetter]) -> Result<FockVector> {
        if eps.len() != self.order() {
            return Err(Error::Precondition(format!(
                "letter sequence has length {}, expected {}",
                eps.len(),
                self.order()
            )));
        }
        let mut state = FockVector::vacuum(self.dim);
        for (factor, letter) in self.factors.iter().zip(eps) {
            state = match letter {
                EpsLetter::Create => creation(&factor.x_left, &factor.x_right, &state)?,
                EpsLetter::Act => annihilation_closed(&factor.x_left, &factor.x_right, &state)?,
                EpsLetter::Gauge => gauge_closed(&factor.t_left, &factor.t_right, &state)?,
            };
        }
        Ok(state)
    }

    /// Independent partition-class sums for the three specializations.
    pub fn specialized_moment(&self, mode: SpecializationMode) -> Result<BivariatePoly> {
        match mode {
            SpecializationMode::TypeA => {
                let mut acc = BivariatePoly::zero();
                for p in TypeBPartition::enumerate(self.order(), PartitionClass::A)? {
                    let c = self.partition_cumulant(&p)?;
                    acc.add_term(&c, 0, p.statistics().rc as u32);
                }
                Ok(acc)
            }
            SpecializationMode::Gaussian => {
                let zero = Rational::from_integer(0.into());
                for f in &self.factors {
                    let t_zero = f
                        .t_left
                        .iter()
                        .chain(&f.t_right)
                        .all(|row| row.iter().all(|c| *c == zero));
                    if !t_zero || f.lam_left != zero || f.lam_right != zero {
                        return Err(Error::Precondition(
                            "Gaussian specialization needs zero gauge symbols and scalars".into(),
                        ));
                    }
                }
                let mut acc = BivariatePoly::zero();
                for p in TypeBPartition::enumerate(self.order(), PartitionClass::PairB)? {
                    let c = self.partition_cumulant(&p)?;
                    let stats = p.statistics();
                    acc.add_term(&c, stats.na as u32, stats.rc as u32);
                }
                Ok(acc)
            }
            SpecializationMode::MeixnerQ0 => {
                for f in &self.factors {
                    if f.x_left != f.x_right {
                        return Err(Error::Precondition(
                            "q = 0 specialization needs palindromic factors".into(),
                        ));
                    }
                }
                let mut acc = BivariatePoly::zero();
                let one_plus_alpha = {
                    let mut p = BivariatePoly::one();
                    p.add_assign(&BivariatePoly::alpha());
                    p
                };
                for p in TypeBPartition::enumerate(self.order(), PartitionClass::NcA)? {
                    let c = self.partition_cumulant(&p)?;
                    let outer = p.outer_arc_count();
                    acc.add_assign(
                        &one_plus_alpha
                            .pow(outer as u32)
                            .scale(&c),
                    );
                }
                Ok(acc)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, rat_int};
    use crate::fock::transpose;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_rational(rng: &mut StdRng) -> Rational {
        rat(rng.gen_range(-3..=3), rng.gen_range(1..=3))
    }

    fn random_factor(rng: &mut StdRng, dim: usize) -> FactorSpec {
        let vector = |rng: &mut StdRng| (0..dim).map(|_| random_rational(rng)).collect();
        let matrix = |rng: &mut StdRng| {
            (0..dim)
                .map(|_| (0..dim).map(|_| random_rational(rng)).collect())
                .collect()
        };
        FactorSpec {
            x_left: vector(rng),
            x_right: vector(rng),
            t_left: matrix(rng),
            t_right: matrix(rng),
            lam_left: random_rational(rng),
            lam_right: random_rational(rng),
        }
    }

    fn random_problem(rng: &mut StdRng, dim: usize, order: usize) -> MomentProblem {
        let factors = (0..order).map(|_| random_factor(rng, dim)).collect();
        MomentProblem::new(dim, factors).unwrap()
    }

    #[test]
    fn singleton_and_pair_cumulants() {
        let mut rng = StdRng::seed_from_u64(7);
        let p = random_problem(&mut rng, 2, 2);
        let lam = p.singleton_cumulant(1).unwrap();
        assert_eq!(lam, &p.factors[0].lam_left * &p.factors[0].lam_right);

        let pair = BBlock {
            positive: vec![1, 2],
            negative: vec![-1, -2],
        };
        let c = p.block_cumulant(&pair).unwrap();
        let expected = fock::dot(&p.factors[1].x_left, &p.factors[0].x_left)
            * fock::dot(&p.factors[1].x_right, &p.factors[0].x_right);
        assert_eq!(c, expected);
    }

    #[test]
    fn four_block_cumulant_chain() {
        let mut rng = StdRng::seed_from_u64(11);
        let p = random_problem(&mut rng, 2, 4);
        let block = BBlock {
            positive: vec![1, 2, 3, 4],
            negative: vec![-1, -2, -3, -4],
        };
        let c = p.block_cumulant(&block).unwrap();
        let left = {
            let chained = mat_vec(
                &p.factors[2].t_left,
                &mat_vec(&p.factors[1].t_left, &p.factors[0].x_left),
            );
            fock::dot(&p.factors[3].x_left, &chained)
        };
        let right = {
            let chained = mat_vec(
                &p.factors[2].t_right,
                &mat_vec(&p.factors[1].t_right, &p.factors[0].x_right),
            );
            fock::dot(&p.factors[3].x_right, &chained)
        };
        assert_eq!(c, left * right);
    }

    #[test]
    fn moment_order_one_and_two() {
        let mut rng = StdRng::seed_from_u64(3);
        let p1 = random_problem(&mut rng, 2, 1);
        let lam = p1.singleton_cumulant(1).unwrap();
        assert_eq!(p1.moment().unwrap(), BivariatePoly::constant(lam));

        let mut f = random_factor(&mut rng, 2);
        f.lam_left = rat_int(0);
        f.lam_right = rat_int(0);
        let mut g = random_factor(&mut rng, 2);
        g.lam_left = rat_int(0);
        g.lam_right = rat_int(0);
        let p2 = MomentProblem::new(2, vec![f.clone(), g.clone()]).unwrap();
        let straight = fock::dot(&g.x_left, &f.x_left) * fock::dot(&g.x_right, &f.x_right);
        let crossed = fock::dot(&g.x_left, &f.x_right) * fock::dot(&g.x_right, &f.x_left);
        let mut expected = BivariatePoly::constant(straight);
        expected.add_assign(&BivariatePoly::monomial(crossed, 1, 0));
        assert_eq!(p2.moment().unwrap(), expected);
    }

    #[test]
    fn moment_matches_oracle_randomized() {
        let mut rng = StdRng::seed_from_u64(20240601);
        for order in 1..=3 {
            for _ in 0..4 {
                let dim = rng.gen_range(2..=3);
                let p = random_problem(&mut rng, dim, order);
                assert_eq!(p.moment().unwrap(), p.oracle().unwrap(), "order {order}");
            }
        }
    }

    #[test]
    fn wick_examples() {
        let mut rng = StdRng::seed_from_u64(99);
        let p = random_problem(&mut rng, 2, 1);
        let created = p.wick_vector(&[EpsLetter::Create]).unwrap();
        let expected = FockVector::simple_tensor(
            2,
            &[p.factors[0].x_left.clone(), p.factors[0].x_right.clone()],
        );
        assert_eq!(created, expected);
        assert!(p.wick_vector(&[EpsLetter::Act]).unwrap().is_zero());
        assert!(p.wick_vector(&[EpsLetter::Gauge]).unwrap().is_zero());

        let p2 = random_problem(&mut rng, 2, 2);
        let two = p2
            .wick_vector(&[EpsLetter::Create, EpsLetter::Create])
            .unwrap();
        let legs = vec![
            p2.factors[1].x_left.clone(),
            p2.factors[0].x_left.clone(),
            p2.factors[0].x_right.clone(),
            p2.factors[1].x_right.clone(),
        ];
        assert_eq!(two, FockVector::simple_tensor(2, &legs));
    }

    #[test]
    fn wick_matches_operators_randomized() {
        let mut rng = StdRng::seed_from_u64(4242);
        let letters = [EpsLetter::Create, EpsLetter::Act, EpsLetter::Gauge];
        for order in 1..=2 {
            let p = random_problem(&mut rng, 2, order);
            let mut seqs = vec![Vec::new()];
            for _ in 0..order {
                seqs = seqs
                    .into_iter()
                    .flat_map(|s| {
                        letters.iter().map(move |&l| {
                            let mut t = s.clone();
                            t.push(l);
                            t
                        })
                    })
                    .collect();
            }
            for eps in seqs {
                assert_eq!(
                    p.wick_vector(&eps).unwrap(),
                    p.operator_word(&eps).unwrap(),
                    "letters {eps:?}"
                );
            }
        }
    }

    #[test]
    fn wick_term_exponent_bounds() {
        let mut rng = StdRng::seed_from_u64(606);
        let letters = [EpsLetter::Create, EpsLetter::Act, EpsLetter::Gauge];
        for order in 1..=3usize {
            let p = random_problem(&mut rng, 2, order);
            let mut seqs = vec![Vec::new()];
            for _ in 0..order {
                seqs = seqs
                    .into_iter()
                    .flat_map(|s: Vec<EpsLetter>| {
                        letters.iter().map(move |&l| {
                            let mut t = s.clone();
                            t.push(l);
                            t
                        })
                    })
                    .collect();
            }
            for eps in seqs {
                for term in p.wick_terms(&eps).unwrap() {
                    for (e, _) in term.coefficient.terms() {
                        assert!(e.alpha as usize <= order);
                        assert!(e.q as usize <= order * (order - 1));
                    }
                }
            }
        }
    }

    #[test]
    fn specialization_type_a() {
        let mut rng = StdRng::seed_from_u64(2025);
        for order in 1..=3 {
            let p = random_problem(&mut rng, 2, order);
            let independent = p.specialized_moment(SpecializationMode::TypeA).unwrap();
            let substituted = p.moment().unwrap().substitute_alpha_zero();
            assert_eq!(independent, substituted, "order {order}");
        }
    }

    #[test]
    fn specialization_gaussian() {
        let mut rng = StdRng::seed_from_u64(31337);
        let dim = 2;
        let zero_mat = vec![vec![rat_int(0); dim]; dim];
        for order in 1..=4 {
            let factors: Vec<FactorSpec> = (0..order)
                .map(|_| {
                    let mut f = random_factor(&mut rng, dim);
                    f.t_left = zero_mat.clone();
                    f.t_right = zero_mat.clone();
                    f.lam_left = rat_int(0);
                    f.lam_right = rat_int(0);
                    f
                })
                .collect();
            let p = MomentProblem::new(dim, factors).unwrap();
            let independent = p.specialized_moment(SpecializationMode::Gaussian).unwrap();
            assert_eq!(independent, p.moment().unwrap(), "order {order}");
        }
    }

    #[test]
    fn specialization_gaussian_rejects_gauge() {
        let mut rng = StdRng::seed_from_u64(5);
        let p = random_problem(&mut rng, 2, 2);
        assert!(p.specialized_moment(SpecializationMode::Gaussian).is_err());
    }

    #[test]
    fn specialization_meixner_q0() {
        let mut rng = StdRng::seed_from_u64(321);
        for order in 1..=4 {
            let factors: Vec<FactorSpec> = (0..order)
                .map(|_| {
                    let mut f = random_factor(&mut rng, 2);
                    f.x_right = f.x_left.clone();
                    f
                })
                .collect();
            let p = MomentProblem::new(2, factors).unwrap();
            let independent = p.specialized_moment(SpecializationMode::MeixnerQ0).unwrap();
            let substituted = p.moment().unwrap().substitute_q_zero();
            assert_eq!(independent, substituted, "order {order}");
        }
    }

    #[test]
    fn singleton_free_when_scalars_vanish() {
        let mut rng = StdRng::seed_from_u64(777);
        let factors: Vec<FactorSpec> = (0..3)
            .map(|_| {
                let mut f = random_factor(&mut rng, 2);
                f.lam_left = rat_int(0);
                f.lam_right = rat_int(0);
                f
            })
            .collect();
        let p = MomentProblem::new(2, factors).unwrap();
        // Odd order with vanishing scalars still has chain terms; check that
        // every singleton-containing partition contributes nothing by
        // comparing against the sum over singleton-free partitions.
        let mut acc = BivariatePoly::zero();
        for part in TypeBPartition::enumerate(3, PartitionClass::NoSingletonB).unwrap() {
            let c = p.partition_cumulant(&part).unwrap();
            let stats = part.statistics();
            acc.add_term(&c, stats.na as u32, stats.rc as u32);
        }
        assert_eq!(acc, p.moment().unwrap());
    }

    #[test]
    fn moment_multilinearity() {
        let mut rng = StdRng::seed_from_u64(888);
        let mut base: Vec<FactorSpec> = (0..3)
            .map(|_| {
                let mut f = random_factor(&mut rng, 2);
                f.lam_left = rat_int(0);
                f.lam_right = rat_int(0);
                f
            })
            .collect();
        let xa: VectorQ = (0..2).map(|_| random_rational(&mut rng)).collect();
        let xb: VectorQ = (0..2).map(|_| random_rational(&mut rng)).collect();
        base[1].x_left = xa.clone();
        let m_a = MomentProblem::new(2, base.clone()).unwrap().moment().unwrap();
        base[1].x_left = xb.clone();
        let m_b = MomentProblem::new(2, base.clone()).unwrap().moment().unwrap();
        base[1].x_left = xa.iter().zip(&xb).map(|(a, b)| a + b).collect();
        let m_sum = MomentProblem::new(2, base).unwrap().moment().unwrap();
        assert_eq!(m_sum, &m_a + &m_b);
    }

    #[test]
    fn adjoint_matrices_transpose() {
        // Plumbing check used by the gauge symmetry acceptance test.
        let m = vec![
            vec![rat_int(1), rat_int(2)],
            vec![rat_int(3), rat_int(4)],
        ];
        let t = transpose(&m);
        assert_eq!(t[0][1], rat_int(3));
        assert_eq!(t[1][0], rat_int(2));
    }
}
