//! Floating-point spectral checks: symmetrizer Gram spectra, truncated
//! creation-operator norms under the deformed inner product, and free norms
//! of the recursion factor.
//!
//! The symmetrizer matrix on the level-`n` word basis is assembled either as
//! a direct group sum (small `n`) or through the one-level recursion (used
//! for the larger truncations the norm checks need).

use nalgebra::DMatrix;
use num_traits::ToPrimitive;

use crate::algebra::Rational;
use crate::coxeter::SignedPermutation;
use crate::error::{Error, Result};
use crate::fock::recursion_factor_terms;

/// Default cap on the number of basis words per spectral check.
pub const DEFAULT_BASIS_CAP: usize = 20_000;

/// Eigenvalues below this threshold count as kernel directions.
pub const KERNEL_TOLERANCE: f64 = 1e-10;

/// Outcome of a symmetrizer spectrum computation.
#[derive(Clone, Copy, Debug)]
pub struct SpectrumReport {
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    pub determinant: f64,
    pub det_zero: bool,
}

fn word_count(n: usize, d: usize) -> usize {
    d.pow(2 * n as u32)
}

fn decode_word(mut idx: usize, len: usize, d: usize) -> Vec<u8> {
    let mut word = vec![0u8; len];
    for slot in (0..len).rev() {
        word[slot] = (idx % d) as u8;
        idx /= d;
    }
    word
}

fn encode_word(word: &[u8], d: usize) -> usize {
    word.iter().fold(0usize, |acc, &l| acc * d + l as usize)
}

/// Numeric weights and permutations of the level-`n` recursion factor.
fn recursion_terms_f64(n: usize, alpha: f64, q: f64) -> Vec<(f64, SignedPermutation)> {
    recursion_factor_terms(n)
        .into_iter()
        .map(|(a, p, sigma)| (alpha.powi(a as i32) * q.powi(p as i32), sigma))
        .collect()
}

/// Symmetrizer matrix on the level-`n` word basis via the recursion factor.
pub fn symmetrizer_matrix(n: usize, d: usize, alpha: f64, q: f64) -> DMatrix<f64> {
    if n == 0 {
        return DMatrix::identity(1, 1);
    }
    let prev = symmetrizer_matrix(n - 1, d, alpha, q);
    let size = word_count(n, d);
    let inner = word_count(n - 1, d);
    let mut out = DMatrix::zeros(size, size);
    let terms = recursion_terms_f64(n, alpha, q);
    for col in 0..size {
        let word = decode_word(col, 2 * n, d);
        for (coeff, sigma) in &terms {
            if *coeff == 0.0 {
                continue;
            }
            let image = sigma.act_on_word(&word).expect("length matches rank");
            let first = image[0] as usize;
            let last = image[2 * n - 1] as usize;
            let mid = encode_word(&image[1..2 * n - 1], d);
            let base = first * size / d + last;
            for row_mid in 0..inner {
                out[(base + row_mid * d, col)] += coeff * prev[(row_mid, mid)];
            }
        }
    }
    out
}

/// Eigen-extremes of the symmetrizer Gram matrix on the full level-`n`
/// basis.
pub fn symmetrizer_spectrum(
    n: usize,
    d: usize,
    alpha: f64,
    q: f64,
    cap: usize,
) -> Result<SpectrumReport> {
    let size = word_count(n, d);
    if size > cap {
        return Err(Error::BasisCapExceeded { size, cap });
    }
    let mut m = symmetrizer_matrix(n, d, alpha, q);
    // The weights are inversion-invariant, so the matrix is symmetric up to
    // rounding.
    let mt = m.transpose();
    m = (m + mt) * 0.5;
    let eigen = m.symmetric_eigen();
    let min = eigen.eigenvalues.min();
    let max = eigen.eigenvalues.max();
    let determinant = eigen.eigenvalues.iter().product();
    Ok(SpectrumReport {
        min_eigenvalue: min,
        max_eigenvalue: max,
        determinant,
        det_zero: determinant.abs() < KERNEL_TOLERANCE,
    })
}

/// Free-norm (largest singular value) of the recursion factor at level `n`.
pub fn recursion_factor_norm(n: usize, d: usize, alpha: f64, q: f64) -> f64 {
    let size = word_count(n, d);
    let mut m = DMatrix::zeros(size, size);
    for col in 0..size {
        let word = decode_word(col, 2 * n, d);
        for (coeff, sigma) in recursion_terms_f64(n, alpha, q) {
            let image = sigma.act_on_word(&word).expect("length matches rank");
            m[(encode_word(&image, d), col)] += coeff;
        }
    }
    let gram: DMatrix<f64> = m.transpose() * &m;
    let top: f64 = gram.symmetric_eigen().eigenvalues.max();
    top.max(0.0).sqrt()
}

/// Elementwise bound for the recursion factor norm:
/// `(1 + |alpha| |q|^{n-1}) (1 + |q| + ... + |q|^{n-1})`.
pub fn recursion_factor_norm_bound(n: usize, alpha: f64, q: f64) -> f64 {
    let aq = alpha.abs() * q.abs().powi(n as i32 - 1);
    let qn: f64 = (0..n).map(|k| q.abs().powi(k as i32)).sum();
    (1.0 + aq) * qn
}

/// Norm of the state created from the vacuum: the level-one lower bound for
/// the operator norm.
pub fn creation_norm_level_one(x: &[Rational], y: &[Rational], alpha: f64) -> f64 {
    let xs = to_f64(x);
    let ys = to_f64(y);
    let nx: f64 = xs.iter().map(|v| v * v).sum();
    let ny: f64 = ys.iter().map(|v| v * v).sum();
    let mixed: f64 = xs.iter().zip(&ys).map(|(a, b)| a * b).sum();
    (nx * ny + alpha * mixed * mixed).max(0.0).sqrt()
}

/// Region-based upper bound for the creation operator norm.
pub fn creation_norm_upper_bound(x: &[Rational], y: &[Rational], alpha: f64, q: f64) -> f64 {
    let xs = to_f64(x);
    let ys = to_f64(y);
    let nx = xs.iter().map(|v| v * v).sum::<f64>().sqrt();
    let ny = ys.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (0.0..=1.0).contains(&alpha) && q > -1.0 && q <= 0.0 {
        creation_norm_level_one(x, y, alpha)
    } else if (-1.0..0.0).contains(&alpha) && q > -1.0 && q <= 0.0 {
        nx * ny
    } else if alpha.abs() <= q && q < 1.0 {
        nx * ny / (1.0 - q).sqrt()
    } else {
        ((1.0 + alpha.abs()) / (1.0 - q)).sqrt() * nx * ny
    }
}

fn to_f64(v: &[Rational]) -> Vec<f64> {
    v.iter().map(|r| r.to_f64().unwrap_or(f64::NAN)).collect()
}

/// Truncated norms of the creation operator under the deformed inner
/// product: entry `L-1` is the norm restricted to levels `<= L`.
///
/// Words are expanded over an orthonormal basis of the span of `x` and `y`,
/// so the free Gram is the identity and the deformed Gram is the
/// symmetrizer matrix itself.
pub fn creation_norm_profile(
    x: &[Rational],
    y: &[Rational],
    alpha: f64,
    q: f64,
    max_level: usize,
) -> Result<Vec<f64>> {
    if max_level == 0 {
        return Err(Error::Precondition("max_level must be at least 1".into()));
    }
    let xs = to_f64(x);
    let ys = to_f64(y);
    let nx = xs.iter().map(|v| v * v).sum::<f64>().sqrt();
    if nx == 0.0 {
        return Err(Error::Precondition("x must be nonzero".into()));
    }
    let e1: Vec<f64> = xs.iter().map(|v| v / nx).collect();
    let c1: f64 = e1.iter().zip(&ys).map(|(a, b)| a * b).sum();
    let perp: Vec<f64> = ys.iter().zip(&e1).map(|(b, a)| b - c1 * a).collect();
    let perp_norm = perp.iter().map(|v| v * v).sum::<f64>().sqrt();
    let ny = ys.iter().map(|v| v * v).sum::<f64>().sqrt();
    let (d, xf, yf) = if perp_norm <= 1e-12 * ny.max(1.0) {
        (1usize, vec![nx], vec![c1])
    } else {
        (2usize, vec![nx, 0.0], vec![c1, perp_norm])
    };

    let mut grams: Vec<DMatrix<f64>> = Vec::with_capacity(max_level);
    grams.push(DMatrix::identity(1, 1));
    for lv in 1..max_level {
        grams.push(symmetrizer_matrix(lv, d, alpha, q));
    }

    let mut profile = Vec::with_capacity(max_level);
    let mut running: f64 = 0.0;
    for (lv, gram) in grams.iter().enumerate() {
        let h = creation_block(gram, lv, d, &xf, &yf, alpha, q);
        let lambda = max_generalized_eigenvalue(gram, &h, lv)?;
        running = running.max(lambda.max(0.0));
        profile.push(running.sqrt());
    }
    Ok(profile)
}

/// Truncated creation norm at `max_level`.
pub fn creation_norm(
    x: &[Rational],
    y: &[Rational],
    alpha: f64,
    q: f64,
    max_level: usize,
) -> Result<f64> {
    Ok(*creation_norm_profile(x, y, alpha, q, max_level)?
        .last()
        .expect("nonempty profile"))
}

/// Quadratic form of the creation block from level `lv` to `lv + 1`,
/// contracted back to the level-`lv` basis. Assembled through the recursion
/// factor so the level-`lv + 1` Gram never materializes.
fn creation_block(
    gram_lv: &DMatrix<f64>,
    lv: usize,
    d: usize,
    xf: &[f64],
    yf: &[f64],
    alpha: f64,
    q: f64,
) -> DMatrix<f64> {
    let size = word_count(lv, d);
    let mut h = DMatrix::zeros(size, size);
    let terms = recursion_terms_f64(lv + 1, alpha, q);
    for col in 0..size {
        let word = decode_word(col, 2 * lv, d);
        for b in 0..d {
            for c in 0..d {
                let coeff0 = xf[b] * yf[c];
                if coeff0 == 0.0 {
                    continue;
                }
                let mut created = Vec::with_capacity(2 * lv + 2);
                created.push(b as u8);
                created.extend_from_slice(&word);
                created.push(c as u8);
                for (coeff, sigma) in &terms {
                    if *coeff == 0.0 {
                        continue;
                    }
                    let image = sigma.act_on_word(&created).expect("length matches rank");
                    let first = image[0] as usize;
                    let last = image[2 * lv + 1] as usize;
                    let mid = encode_word(&image[1..2 * lv + 1], d);
                    let total = coeff0 * coeff * xf[first] * yf[last];
                    if total == 0.0 {
                        continue;
                    }
                    for row in 0..size {
                        h[(row, col)] += total * gram_lv[(row, mid)];
                    }
                }
            }
        }
    }
    let ht = h.transpose();
    (h + ht) * 0.5
}

/// Largest eigenvalue of `G^{-1} H` for symmetric positive `G` via the
/// Cholesky whitening.
fn max_generalized_eigenvalue(g: &DMatrix<f64>, h: &DMatrix<f64>, level: usize) -> Result<f64> {
    let chol = g
        .clone()
        .cholesky()
        .ok_or(Error::SingularGram { level })?;
    let l = chol.l();
    let x = l
        .solve_lower_triangular(h)
        .ok_or(Error::SingularGram { level })?;
    let y = l
        .solve_lower_triangular(&x.transpose())
        .ok_or(Error::SingularGram { level })?;
    let yt = y.transpose();
    let m = (y + yt) * 0.5;
    Ok(m.symmetric_eigen().eigenvalues.max())
}

/// Eigenvalues of the symmetrizer on the all-equal word, in closed form:
/// the Gram entry is the product of deformed factorial terms.
pub fn symmetrizer_poincare_value(n: usize, alpha: f64, q: f64) -> f64 {
    (1..=n)
        .map(|i| {
            let qi: f64 = (0..i).map(|k| q.powi(k as i32)).sum();
            qi * (1.0 + alpha * q.powi(i as i32 - 1))
        })
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, rat_int};

    fn unit2(i: usize) -> Vec<Rational> {
        (0..2)
            .map(|j| if i == j { rat_int(1) } else { rat_int(0) })
            .collect()
    }

    #[test]
    fn spectrum_interior_point() {
        let report = symmetrizer_spectrum(2, 2, 0.5, 0.5, DEFAULT_BASIS_CAP).unwrap();
        assert!(report.min_eigenvalue > 0.0);
        assert!(!report.det_zero);
    }

    #[test]
    fn spectrum_kernel_points() {
        let report = symmetrizer_spectrum(2, 2, 1.0, 0.0, DEFAULT_BASIS_CAP).unwrap();
        assert!(report.det_zero, "determinant {}", report.determinant);
    }

    #[test]
    fn spectrum_trivial_level() {
        let report = symmetrizer_spectrum(1, 1, 0.0, 0.3, DEFAULT_BASIS_CAP).unwrap();
        assert!((report.min_eigenvalue - 1.0).abs() < 1e-12);
    }

    #[test]
    fn spectrum_cap() {
        assert!(symmetrizer_spectrum(4, 3, 0.1, 0.1, 100).is_err());
    }

    #[test]
    fn recursion_matrix_matches_direct_sum() {
        // The recursion assembly agrees with the direct weighted group sum.
        for (n, d) in [(1usize, 2usize), (2, 2), (3, 2)] {
            let (alpha, q) = (0.3, -0.4);
            let rec = symmetrizer_matrix(n, d, alpha, q);
            let size = word_count(n, d);
            let mut direct = DMatrix::zeros(size, size);
            for col in 0..size {
                let word = decode_word(col, 2 * n, d);
                for sigma in SignedPermutation::enumerate(n) {
                    let stats = sigma.inversion_stats();
                    let image = sigma.act_on_word(&word).unwrap();
                    direct[(encode_word(&image, d), col)] +=
                        alpha.powi(stats.ninv as i32) * q.powi(stats.pinv as i32);
                }
            }
            let diff = (&rec - &direct).abs().max();
            assert!(diff < 1e-12, "n = {n}, diff = {diff}");
        }
    }

    #[test]
    fn poincare_diagonal_value() {
        // Gram entry on the all-equal word equals the product formula.
        for n in 1..=4 {
            let (alpha, q) = (0.25, 0.5);
            let m = symmetrizer_matrix(n, 1, alpha, q);
            let expected = symmetrizer_poincare_value(n, alpha, q);
            assert!((m[(0, 0)] - expected).abs() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn creation_norm_free_case() {
        let norm = creation_norm(&unit2(0), &unit2(1), 0.0, 0.0, 4).unwrap();
        assert!((norm - 1.0).abs() < 1e-9, "free norm {norm}");
    }

    #[test]
    fn creation_norm_monotone_and_bounded() {
        let x = vec![rat_int(1)];
        let profile = creation_norm_profile(&x, &x, 0.3, 0.6, 6).unwrap();
        for pair in profile.windows(2) {
            assert!(pair[1] >= pair[0] - 1e-12);
        }
        let bound = 1.0 / (1.0 - 0.6f64).sqrt();
        let last = *profile.last().unwrap();
        assert!(last <= bound + 1e-8, "{last} vs {bound}");
        assert!(bound - last < 0.05, "{last} should approach {bound}");
    }

    #[test]
    fn creation_norm_rejects_kernel_parameters() {
        let x = unit2(0);
        let y = unit2(1);
        assert!(matches!(
            creation_norm(&x, &y, 1.0, 0.0, 3),
            Err(Error::SingularGram { .. })
        ));
    }

    #[test]
    fn recursion_norm_bound_sampled() {
        let samples = [(0.0, 0.5), (0.5, 0.5), (-0.7, 0.3), (0.4, -0.6), (0.9, 0.9)];
        for (alpha, q) in samples {
            for n in 1..=4 {
                let norm = recursion_factor_norm(n, 2, alpha, q);
                let bound = recursion_factor_norm_bound(n, alpha, q);
                assert!(
                    norm <= bound + 1e-9,
                    "n = {n}, alpha = {alpha}, q = {q}: {norm} > {bound}"
                );
            }
        }
    }

    #[test]
    fn level_one_value() {
        let x = unit2(0);
        let y: Vec<Rational> = vec![rat(3, 5), rat(4, 5)];
        let v = creation_norm_level_one(&x, &y, 0.5);
        let expected = (1.0f64 + 0.5 * 0.36).sqrt();
        assert!((v - expected).abs() < 1e-12);
    }
}
