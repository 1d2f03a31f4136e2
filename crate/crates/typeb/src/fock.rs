//! Truncated double Fock space states and operators.
//!
//! States are finite linear combinations of basis words over a
//! `d`-dimensional one-particle space, with coefficients in
//! [`BivariatePoly`]. A word of length `2n` lives on level `n`; its positions
//! are labelled `-n,...,-1,1,...,n` left to right and the empty word is the
//! vacuum.
//!
//! Operators come in two routes wherever the theory gives two: the
//! symmetrizer as a direct group sum and through its one-level recursion
//! factor, and annihilation/gauge both composed with that factor and in
//! closed form. The two routes are checked against each other exactly.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::algebra::{BivariatePoly, Rational};
use crate::coxeter::SignedPermutation;
use crate::error::{Error, Result};

/// Basis word: letters in `1..=d`, even length.
pub type Word = Vec<u8>;

/// Rational coordinate vector.
pub type VectorQ = Vec<Rational>;

/// Rational matrix, row major: `m[i][j]` is row `i`, column `j`.
pub type MatrixQ = Vec<Vec<Rational>>;

/// Dot product of rational vectors.
pub fn dot(x: &[Rational], y: &[Rational]) -> Rational {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Matrix-vector product.
pub fn mat_vec(m: &MatrixQ, x: &[Rational]) -> VectorQ {
    m.iter().map(|row| dot(row, x)).collect()
}

/// Matrix transpose.
pub fn transpose(m: &MatrixQ) -> MatrixQ {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| (0..rows).map(|i| m[i][j].clone()).collect())
        .collect()
}

/// The data of one Poisson factor: left/right vectors, gauge symbols and
/// scalar parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorSpec {
    pub x_left: VectorQ,
    pub x_right: VectorQ,
    pub t_left: MatrixQ,
    pub t_right: MatrixQ,
    pub lam_left: Rational,
    pub lam_right: Rational,
}

impl FactorSpec {
    /// Check that every component has dimension `dim`.
    pub fn validate(&self, dim: usize) -> Result<()> {
        let square = |m: &MatrixQ| m.len() == dim && m.iter().all(|r| r.len() == dim);
        if self.x_left.len() != dim || self.x_right.len() != dim {
            return Err(Error::DimensionMismatch {
                left: self.x_left.len().max(self.x_right.len()),
                right: dim,
            });
        }
        if !square(&self.t_left) || !square(&self.t_right) {
            return Err(Error::DimensionMismatch {
                left: self.t_left.len(),
                right: dim,
            });
        }
        Ok(())
    }
}

/// Finite state of the double Fock space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockVector {
    dim: usize,
    terms: BTreeMap<Word, BivariatePoly>,
}

impl FockVector {
    /// The zero vector.
    pub fn zero(dim: usize) -> Self {
        FockVector {
            dim,
            terms: BTreeMap::new(),
        }
    }

    /// The vacuum with coefficient 1.
    pub fn vacuum(dim: usize) -> Self {
        let mut v = Self::zero(dim);
        v.add_term(Vec::new(), &BivariatePoly::one());
        v
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BivariatePoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, word: &[u8]) -> BivariatePoly {
        self.terms.get(word).cloned().unwrap_or_default()
    }

    /// Coefficient of the vacuum word.
    pub fn vacuum_coeff(&self) -> BivariatePoly {
        self.coeff(&[])
    }

    /// Largest occupied level.
    pub fn max_level(&self) -> usize {
        self.terms.keys().map(|w| w.len() / 2).max().unwrap_or(0)
    }

    /// Add `poly * word`, keeping the no-zero-coefficients invariant.
    pub fn add_term(&mut self, word: Word, poly: &BivariatePoly) {
        debug_assert!(word.len().is_multiple_of(2), "words have even length");
        debug_assert!(word.iter().all(|&l| l >= 1 && l as usize <= self.dim));
        if poly.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(word) {
            Entry::Occupied(mut e) => {
                e.get_mut().add_assign(poly);
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(poly.clone());
            }
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (w, p) in &other.terms {
            self.add_term(w.clone(), p);
        }
    }

    pub fn sub_assign(&mut self, other: &Self) {
        for (w, p) in &other.terms {
            self.add_term(w.clone(), &-p);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.sub_assign(other);
        out
    }

    /// Multiply every coefficient by a polynomial.
    pub fn scale(&self, poly: &BivariatePoly) -> Self {
        let mut out = Self::zero(self.dim);
        for (w, p) in &self.terms {
            out.add_term(w.clone(), &p.mul_poly(poly));
        }
        out
    }

    /// Multiply every coefficient by a rational.
    pub fn scale_rat(&self, c: &Rational) -> Self {
        self.scale(&BivariatePoly::constant(c.clone()))
    }

    /// Expand a simple tensor of rational vectors into basis words.
    pub fn simple_tensor(dim: usize, legs: &[VectorQ]) -> Self {
        let mut out = Self::zero(dim);
        let mut word = Vec::with_capacity(legs.len());
        fn rec(
            dim: usize,
            legs: &[VectorQ],
            word: &mut Word,
            coeff: Rational,
            out: &mut FockVector,
        ) {
            if coeff.is_zero() {
                return;
            }
            let depth = word.len();
            if depth == legs.len() {
                out.add_term(word.clone(), &BivariatePoly::constant(coeff));
                return;
            }
            for letter in 1..=dim as u8 {
                let c = &legs[depth][(letter - 1) as usize];
                if c.is_zero() {
                    continue;
                }
                word.push(letter);
                rec(dim, legs, word, coeff.clone() * c, out);
                word.pop();
            }
        }
        rec(dim, legs, &mut word, Rational::one(), &mut out);
        out
    }

    /// Evaluate all coefficients at a rational parameter pair.
    pub fn eval(&self, alpha: &Rational, q: &Rational) -> BTreeMap<Word, Rational> {
        self.terms
            .iter()
            .filter_map(|(w, p)| {
                let v = p.eval(alpha, q);
                (!v.is_zero()).then(|| (w.clone(), v))
            })
            .collect()
    }
}

/// The recursion factor at level `n`: identity plus right-cycle terms plus
/// the sign-flip branch, with monomial weights. `n >= 1`.
pub(crate) fn recursion_factor_terms(n: usize) -> Vec<(u32, u32, SignedPermutation)> {
    let gen = |i: usize| SignedPermutation::generator(i, n).expect("index in range");
    let mut terms = vec![(0, 0, SignedPermutation::identity(n))];
    if n == 1 {
        terms.push((1, 0, gen(0)));
        return terms;
    }
    // pi_{n-1} ... pi_{n-k}, weight q^k.
    let mut cycle = SignedPermutation::identity(n);
    for k in 1..n {
        cycle = cycle.compose(&gen(n - k)).expect("equal rank");
        terms.push((0, k as u32, cycle.clone()));
    }
    // pi_{n-1} ... pi_1 pi_0, weight alpha q^{n-1}.
    let mut flip = SignedPermutation::identity(n);
    for i in (0..n).rev() {
        flip = flip.compose(&gen(i)).expect("equal rank");
    }
    terms.push((1, (n - 1) as u32, flip.clone()));
    // pi_{n-1} ... pi_0 pi_1 ... pi_k, weight alpha q^{n-1+k}.
    let mut tail = flip;
    for k in 1..n {
        tail = tail.compose(&gen(k)).expect("equal rank");
        terms.push((1, (n - 1 + k) as u32, tail.clone()));
    }
    terms
}

fn apply_levelwise<F>(v: &FockVector, mut word_map: F) -> FockVector
where
    F: FnMut(&Word, &BivariatePoly, &mut FockVector),
{
    let mut out = FockVector::zero(v.dim());
    for (word, coeff) in v.terms() {
        word_map(word, coeff, &mut out);
    }
    out
}

/// Apply the recursion factor levelwise; the vacuum is fixed.
pub fn apply_r(v: &FockVector) -> FockVector {
    apply_levelwise(v, |word, coeff, out| {
        let n = word.len() / 2;
        if n == 0 {
            out.add_term(word.clone(), coeff);
            return;
        }
        for (a, qp, sigma) in recursion_factor_terms(n) {
            let image = sigma.act_on_word(word).expect("length matches rank");
            out.add_term(image, &coeff.shift(a, qp));
        }
    })
}

/// Apply the type-B symmetrizer as a direct weighted group sum.
pub fn apply_symmetrizer(v: &FockVector) -> FockVector {
    apply_levelwise(v, |word, coeff, out| {
        let n = word.len() / 2;
        if n == 0 {
            out.add_term(word.clone(), coeff);
            return;
        }
        for sigma in SignedPermutation::enumerate(n) {
            let stats = sigma.inversion_stats();
            let image = sigma.act_on_word(word).expect("length matches rank");
            out.add_term(image, &coeff.shift(stats.ninv as u32, stats.pinv as u32));
        }
    })
}

/// Apply the symmetrizer through its recursion: the recursion factor first,
/// then the lower symmetrizer on the inner positions.
pub fn apply_symmetrizer_recursive(v: &FockVector) -> FockVector {
    fn sym_word(word: &Word, coeff: &BivariatePoly, dim: usize, out: &mut FockVector) {
        let n = word.len() / 2;
        if n == 0 {
            out.add_term(word.clone(), coeff);
            return;
        }
        for (a, qp, sigma) in recursion_factor_terms(n) {
            let image = sigma.act_on_word(word).expect("length matches rank");
            let weighted = coeff.shift(a, qp);
            let inner: Word = image[1..2 * n - 1].to_vec();
            let mut inner_sym = FockVector::zero(dim);
            sym_word(&inner, &weighted, dim, &mut inner_sym);
            for (mid, p) in inner_sym.terms() {
                let mut rebuilt = Vec::with_capacity(2 * n);
                rebuilt.push(image[0]);
                rebuilt.extend_from_slice(mid);
                rebuilt.push(image[2 * n - 1]);
                out.add_term(rebuilt, p);
            }
        }
    }
    apply_levelwise(v, |word, coeff, out| sym_word(word, coeff, v.dim(), out))
}

fn check_dim(v: &FockVector, len: usize) -> Result<()> {
    if v.dim() != len {
        return Err(Error::DimensionMismatch {
            left: len,
            right: v.dim(),
        });
    }
    Ok(())
}

/// Double creation: prepend `x` on the left half and append `y` on the
/// right, expanded in coordinates. Level `n` maps to `n + 1`.
pub fn creation(x: &[Rational], y: &[Rational], v: &FockVector) -> Result<FockVector> {
    check_dim(v, x.len())?;
    check_dim(v, y.len())?;
    Ok(apply_levelwise(v, |word, coeff, out| {
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let mut new_word = Word::with_capacity(word.len() + 2);
                new_word.push(a as u8 + 1);
                new_word.extend_from_slice(word);
                new_word.push(b as u8 + 1);
                out.add_term(new_word, &coeff.scale(&(xa * yb)));
            }
        }
    }))
}

/// Double annihilation as free left-right annihilation composed with the
/// recursion factor. The vacuum maps to zero.
pub fn annihilation(x: &[Rational], y: &[Rational], v: &FockVector) -> Result<FockVector> {
    check_dim(v, x.len())?;
    check_dim(v, y.len())?;
    let twisted = apply_r(v);
    Ok(apply_levelwise(&twisted, |word, coeff, out| {
        if word.is_empty() {
            return;
        }
        let first = word[0] as usize - 1;
        let last = word[word.len() - 1] as usize - 1;
        let pairing = &x[first] * &y[last];
        if pairing.is_zero() {
            return;
        }
        out.add_term(word[1..word.len() - 1].to_vec(), &coeff.scale(&pairing));
    }))
}

/// Straight part of annihilation in closed form: pairs the mirror positions
/// `-k` and `k` with weights `q^{n-k}`.
pub fn annihilation_straight(x: &[Rational], y: &[Rational], v: &FockVector) -> Result<FockVector> {
    check_dim(v, x.len())?;
    check_dim(v, y.len())?;
    Ok(apply_levelwise(v, |word, coeff, out| {
        let n = word.len() / 2;
        for k in 1..=n {
            let left = word[n - k] as usize - 1;
            let right = word[n + k - 1] as usize - 1;
            let pairing = &x[left] * &y[right];
            if pairing.is_zero() {
                continue;
            }
            let reduced = drop_pair(word, n, k);
            out.add_term(reduced, &coeff.scale(&pairing).shift(0, (n - k) as u32));
        }
    }))
}

/// Crossed part of annihilation in closed form: pairs `-k` and `k` the other
/// way round with weights `q^{n+k-2}`.
pub fn annihilation_crossed(x: &[Rational], y: &[Rational], v: &FockVector) -> Result<FockVector> {
    check_dim(v, x.len())?;
    check_dim(v, y.len())?;
    Ok(apply_levelwise(v, |word, coeff, out| {
        let n = word.len() / 2;
        for k in 1..=n {
            let left = word[n - k] as usize - 1;
            let right = word[n + k - 1] as usize - 1;
            let pairing = &x[right] * &y[left];
            if pairing.is_zero() {
                continue;
            }
            let reduced = drop_pair(word, n, k);
            out.add_term(reduced, &coeff.scale(&pairing).shift(0, (n + k - 2) as u32));
        }
    }))
}

/// Closed-form annihilation: straight part plus `alpha` times crossed part.
pub fn annihilation_closed(x: &[Rational], y: &[Rational], v: &FockVector) -> Result<FockVector> {
    let straight = annihilation_straight(x, y, v)?;
    let crossed = annihilation_crossed(x, y, v)?;
    Ok(straight.add(&crossed.scale(&BivariatePoly::alpha())))
}

fn drop_pair(word: &Word, n: usize, k: usize) -> Word {
    let mut reduced = Word::with_capacity(word.len() - 2);
    for (i, &l) in word.iter().enumerate() {
        if i != n - k && i != n + k - 1 {
            reduced.push(l);
        }
    }
    reduced
}

/// Gauge operator: outer-leg replacement composed with the recursion factor.
/// The vacuum maps to zero.
pub fn gauge(t_left: &MatrixQ, t_right: &MatrixQ, v: &FockVector) -> Result<FockVector> {
    let twisted = apply_r(v);
    gauge_outer(t_left, t_right, &twisted)
}

/// Replace the outermost legs by their images under the gauge symbols.
fn gauge_outer(t_left: &MatrixQ, t_right: &MatrixQ, v: &FockVector) -> Result<FockVector> {
    check_dim(v, t_left.len())?;
    check_dim(v, t_right.len())?;
    Ok(apply_levelwise(v, |word, coeff, out| {
        if word.is_empty() {
            return;
        }
        let first = word[0] as usize - 1;
        let last = word[word.len() - 1] as usize - 1;
        for (b, left_row) in t_left.iter().enumerate() {
            let cl = &left_row[first];
            if cl.is_zero() {
                continue;
            }
            for (c, right_row) in t_right.iter().enumerate() {
                let cr = &right_row[last];
                if cr.is_zero() {
                    continue;
                }
                let mut new_word = word.clone();
                new_word[0] = b as u8 + 1;
                let end = new_word.len() - 1;
                new_word[end] = c as u8 + 1;
                out.add_term(new_word, &coeff.scale(&(cl * cr)));
            }
        }
    }))
}

/// Straight part of the gauge operator in closed form: moves the mirror pair
/// at `-k, k` to the outer positions under the gauge symbols, weight
/// `q^{n-k}`.
pub fn gauge_straight(t_left: &MatrixQ, t_right: &MatrixQ, v: &FockVector) -> Result<FockVector> {
    gauge_closed_part(t_left, t_right, v, false)
}

/// Crossed part of the gauge operator in closed form: same surgery with the
/// two sides exchanged, weight `q^{n+k-2}`.
pub fn gauge_crossed(t_left: &MatrixQ, t_right: &MatrixQ, v: &FockVector) -> Result<FockVector> {
    gauge_closed_part(t_left, t_right, v, true)
}

/// Closed-form gauge operator: straight plus `alpha` times crossed.
pub fn gauge_closed(t_left: &MatrixQ, t_right: &MatrixQ, v: &FockVector) -> Result<FockVector> {
    let straight = gauge_straight(t_left, t_right, v)?;
    let crossed = gauge_crossed(t_left, t_right, v)?;
    Ok(straight.add(&crossed.scale(&BivariatePoly::alpha())))
}

fn gauge_closed_part(
    t_left: &MatrixQ,
    t_right: &MatrixQ,
    v: &FockVector,
    crossed: bool,
) -> Result<FockVector> {
    check_dim(v, t_left.len())?;
    check_dim(v, t_right.len())?;
    Ok(apply_levelwise(v, |word, coeff, out| {
        let n = word.len() / 2;
        for k in 1..=n {
            let mirror = word[n - k] as usize - 1;
            let direct = word[n + k - 1] as usize - 1;
            let (src_left, src_right) = if crossed {
                (direct, mirror)
            } else {
                (mirror, direct)
            };
            let q_pow = if crossed { n + k - 2 } else { n - k } as u32;
            let inner = drop_pair(word, n, k);
            for (b, left_row) in t_left.iter().enumerate() {
                let cl = &left_row[src_left];
                if cl.is_zero() {
                    continue;
                }
                for (c, right_row) in t_right.iter().enumerate() {
                    let cr = &right_row[src_right];
                    if cr.is_zero() {
                        continue;
                    }
                    let mut new_word = Word::with_capacity(word.len());
                    new_word.push(b as u8 + 1);
                    new_word.extend_from_slice(&inner);
                    new_word.push(c as u8 + 1);
                    out.add_term(new_word, &coeff.scale(&(cl * cr)).shift(0, q_pow));
                }
            }
        }
    }))
}

/// One Poisson operator: creation + annihilation + gauge + scalar part.
pub fn poisson_apply(factor: &FactorSpec, v: &FockVector) -> Result<FockVector> {
    factor.validate(v.dim())?;
    let mut out = creation(&factor.x_left, &factor.x_right, v)?;
    out.add_assign(&annihilation(&factor.x_left, &factor.x_right, v)?);
    out.add_assign(&gauge(&factor.t_left, &factor.t_right, v)?);
    let lam = &factor.lam_left * &factor.lam_right;
    out.add_assign(&v.scale_rat(&lam));
    Ok(out)
}

/// Pairing mode of [`inner_product`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairingMode {
    /// Levelwise coordinate pairing.
    Free,
    /// Free pairing against the symmetrized right argument.
    Deformed,
}

/// Bilinear pairing of two states. Cross-level terms vanish because words of
/// different lengths never coincide.
pub fn inner_product(u: &FockVector, v: &FockVector, mode: PairingMode) -> Result<BivariatePoly> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: v.dim(),
        });
    }
    let rhs = match mode {
        PairingMode::Free => v.clone(),
        PairingMode::Deformed => apply_symmetrizer(v),
    };
    let mut acc = BivariatePoly::zero();
    for (w, p) in u.terms() {
        let other = rhs.coeff(w);
        if !other.is_zero() {
            acc.add_assign(&p.mul_poly(&other));
        }
    }
    Ok(acc)
}

/// Ground truth for the moment formulas: apply the Poisson operators right to
/// left to the vacuum and read off the vacuum coefficient.
pub fn vacuum_expectation_oracle(dim: usize, factors: &[FactorSpec]) -> Result<BivariatePoly> {
    let mut state = FockVector::vacuum(dim);
    for factor in factors {
        state = poisson_apply(factor, &state)?;
    }
    Ok(state.vacuum_coeff())
}

impl fmt::Display for FockVector {
    /// One term per line: `(letters): coefficient`, vacuum first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&Word> = self.terms.keys().collect();
        keys.sort_by_key(|w| (w.len(), w.to_vec()));
        for (i, w) in keys.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let letters: Vec<String> = w.iter().map(|l| l.to_string()).collect();
            write!(f, "({}): {}", letters.join(","), self.terms[*w])?;
        }
        Ok(())
    }
}
