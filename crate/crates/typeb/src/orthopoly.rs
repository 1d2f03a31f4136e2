//! Orthogonal polynomials of the deformed Poisson family, their Jacobi
//! parameters, exact moments via the tridiagonal operator, continued-fraction
//! Cauchy transforms, and the closed-form measure at `q = 0` with Stieltjes
//! inversion helpers.
//!
//! The exact layer works over rationals or symbolically in the deformation
//! parameters; floating point enters only for densities, atoms and
//! transforms.

use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use crate::algebra::{BivariatePoly, Rational};
use crate::error::{Error, Result};

/// The q-number `1 + q + ... + q^{n-1}` for `n >= 1`.
pub fn q_number(n: i64, q: &Rational) -> Result<Rational> {
    if n < 1 {
        return Err(Error::QIndexOutOfRange(n));
    }
    let mut acc = Rational::zero();
    let mut power = Rational::one();
    for _ in 0..n {
        acc += &power;
        power *= q;
    }
    Ok(acc)
}

/// The q-Pochhammer symbol `prod_{k=1}^n (1 - s q^{k-1})` for `n >= 1`.
pub fn q_pochhammer(s: &Rational, q: &Rational, n: i64) -> Result<Rational> {
    if n < 1 {
        return Err(Error::QIndexOutOfRange(n));
    }
    let mut acc = Rational::one();
    let mut power = Rational::one();
    for _ in 0..n {
        acc *= Rational::one() - s * &power;
        power *= q;
    }
    Ok(acc)
}

/// Symbolic q-number as a polynomial; zero for `n = 0`.
fn q_number_poly(n: usize) -> BivariatePoly {
    let mut acc = BivariatePoly::zero();
    for k in 0..n {
        acc.add_assign(&BivariatePoly::monomial(Rational::one(), 0, k as u32));
    }
    acc
}

/// Three-term recurrence coefficients of the deformed Poisson family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiParams {
    pub alpha: Rational,
    pub q: Rational,
    /// Diagonal coefficients, index 0 first; `beta[0] = 0`.
    pub beta: Vec<Rational>,
    /// Off-diagonal coefficients; `gamma[n] = beta[n+1]`.
    pub gamma: Vec<Rational>,
}

/// Jacobi parameters up to index `upto` at a rational parameter point.
pub fn jacobi(alpha: &Rational, q: &Rational, upto: usize) -> JacobiParams {
    let entry = |n: usize| -> Rational {
        if n == 0 {
            return Rational::zero();
        }
        let qn = q_number(n as i64, q).expect("n >= 1");
        let mut corr = Rational::one();
        let mut power = Rational::one();
        for _ in 0..n - 1 {
            power *= q;
        }
        corr += alpha * power;
        qn * corr
    };
    JacobiParams {
        alpha: alpha.clone(),
        q: q.clone(),
        beta: (0..=upto).map(entry).collect(),
        gamma: (0..=upto).map(|n| entry(n + 1)).collect(),
    }
}

/// Symbolic Jacobi parameters `(beta, gamma)` with the first parameter
/// replaced by an arbitrary polynomial (e.g. a scaled one).
pub fn jacobi_symbolic(alpha_poly: &BivariatePoly, upto: usize) -> (Vec<BivariatePoly>, Vec<BivariatePoly>) {
    let entry = |n: usize| -> BivariatePoly {
        if n == 0 {
            return BivariatePoly::zero();
        }
        let mut corr = BivariatePoly::one();
        corr.add_assign(&alpha_poly.shift(0, n as u32 - 1));
        q_number_poly(n).mul_poly(&corr)
    };
    let beta: Vec<BivariatePoly> = (0..=upto).map(entry).collect();
    let gamma: Vec<BivariatePoly> = (0..=upto).map(|n| entry(n + 1)).collect();
    (beta, gamma)
}

/// Monic orthogonal polynomials of the family, symbolically in both
/// deformation parameters. Returns coefficient lists in ascending powers of
/// the indeterminate for indices `0..=upto`.
pub fn poisson_polys(upto: usize) -> Vec<Vec<BivariatePoly>> {
    poisson_polys_with(&BivariatePoly::alpha(), upto)
}

/// Same as [`poisson_polys`] with the first parameter replaced by a
/// polynomial.
pub fn poisson_polys_with(alpha_poly: &BivariatePoly, upto: usize) -> Vec<Vec<BivariatePoly>> {
    let (beta, gamma) = jacobi_symbolic(alpha_poly, upto + 1);
    let mut polys: Vec<Vec<BivariatePoly>> = Vec::with_capacity(upto + 1);
    polys.push(vec![BivariatePoly::one()]);
    for n in 0..upto {
        // Q_{n+1} = (t - beta_n) Q_n - gamma_{n-1} Q_{n-1}.
        let qn = &polys[n];
        let mut next = vec![BivariatePoly::zero(); n + 2];
        for (k, c) in qn.iter().enumerate() {
            next[k + 1].add_assign(c);
            next[k].sub_assign(&beta[n].mul_poly(c));
        }
        if n > 0 {
            for (k, c) in polys[n - 1].iter().enumerate() {
                next[k].sub_assign(&gamma[n - 1].mul_poly(c));
            }
        }
        polys.push(next);
    }
    polys
}

/// Moments `m_0..m_upto` as top-left entries of powers of the truncated
/// tridiagonal operator, exactly over rationals.
pub fn moments_from_jacobi(alpha: &Rational, q: &Rational, upto: usize) -> Vec<Rational> {
    let params = jacobi(alpha, q, upto + 1);
    let size = upto + 2;
    let mut w = vec![Rational::zero(); size];
    w[0] = Rational::one();
    let mut out = Vec::with_capacity(upto + 1);
    out.push(w[0].clone());
    for _ in 0..upto {
        w = tridiag_apply(&params.beta, &params.gamma, &w);
        out.push(w[0].clone());
    }
    out
}

fn tridiag_apply(beta: &[Rational], gamma: &[Rational], w: &[Rational]) -> Vec<Rational> {
    let size = w.len();
    (0..size)
        .map(|i| {
            let mut acc = &beta[i.min(beta.len() - 1)] * &w[i];
            if i > 0 {
                acc += &gamma[i - 1] * &w[i - 1];
            }
            if i + 1 < size {
                acc += &w[i + 1];
            }
            acc
        })
        .collect()
}

/// Symbolic moments `m_0..m_upto` with the first parameter replaced by a
/// polynomial.
pub fn moments_from_jacobi_symbolic(alpha_poly: &BivariatePoly, upto: usize) -> Vec<BivariatePoly> {
    let (beta, gamma) = jacobi_symbolic(alpha_poly, upto + 1);
    let size = upto + 2;
    let mut w = vec![BivariatePoly::zero(); size];
    w[0] = BivariatePoly::one();
    let mut out = Vec::with_capacity(upto + 1);
    out.push(w[0].clone());
    for _ in 0..upto {
        let mut next = vec![BivariatePoly::zero(); size];
        for (i, entry) in next.iter_mut().enumerate() {
            entry.add_assign(&beta[i.min(beta.len() - 1)].mul_poly(&w[i]));
            if i > 0 {
                entry.add_assign(&gamma[i - 1].mul_poly(&w[i - 1]));
            }
            if i + 1 < size {
                entry.add_assign(&w[i + 1]);
            }
        }
        w = next;
        out.push(w[0].clone());
    }
    out
}

/// Depth-truncated continued fraction for the Cauchy transform at a complex
/// point. Reports divergence instead of clamping.
pub fn cauchy_cf(alpha: f64, q: f64, z: Complex64, depth: usize) -> Result<Complex64> {
    if depth == 0 {
        return Err(Error::Precondition("depth must be at least 1".into()));
    }
    let entry = |n: usize| -> f64 {
        if n == 0 {
            return 0.0;
        }
        let mut qn = 0.0;
        for k in 0..n {
            qn += q.powi(k as i32);
        }
        qn * (1.0 + alpha * q.powi(n as i32 - 1))
    };
    let mut t = z - entry(depth - 1);
    for j in (0..depth - 1).rev() {
        if !t.re.is_finite() || !t.im.is_finite() || t.norm_sqr() == 0.0 {
            return Err(Error::ContinuedFractionDiverged);
        }
        let gamma_j = entry(j + 1);
        t = z - entry(j) - gamma_j / t;
    }
    if !t.re.is_finite() || !t.im.is_finite() || t.norm_sqr() == 0.0 {
        return Err(Error::ContinuedFractionDiverged);
    }
    Ok(Complex64::new(1.0, 0.0) / t)
}

/// Square root of `(z-1)^2 - 4` on the branch fixed by taking principal
/// roots of `z - 3` and `z + 1` separately; maps the upper half-plane into
/// itself and is positive on `(3, inf)`.
fn edge_root(z: Complex64) -> Complex64 {
    (z - 3.0).sqrt() * (z + 1.0).sqrt()
}

/// Cauchy transform of the `q = 0` measure with the constant tail of the
/// continued fraction closed by the semicircle transform, so it is exact up
/// to rounding for every depth.
pub fn meixner_cauchy(alpha: f64, z: Complex64) -> Complex64 {
    let g_semi = (z - 1.0 - edge_root(z)) / 2.0;
    let a1 = alpha + 1.0;
    Complex64::new(1.0, 0.0) / (z - a1 / (z - a1 - g_semi))
}

/// Density reconstructed from the transform just above the real axis.
pub fn stieltjes_density(alpha: f64, x: f64, eps: f64) -> f64 {
    -meixner_cauchy(alpha, Complex64::new(x, eps)).im / std::f64::consts::PI
}

/// Atom mass estimate from the transform near a candidate location.
pub fn atom_mass_from_transform(alpha: f64, location: f64, eps: f64) -> f64 {
    (Complex64::new(0.0, eps) * meixner_cauchy(alpha, Complex64::new(location, eps))).norm()
}

/// Point mass of the `q = 0` measure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeixnerAtom {
    pub location: f64,
    pub mass: f64,
}

/// The `q = 0` member of the family: an absolutely continuous part on
/// `(-1, 3)` and, for positive parameter, an atom at or beyond the right
/// edge.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeixnerMeasure {
    pub alpha: f64,
    pub atom: Option<MeixnerAtom>,
}

impl MeixnerMeasure {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha <= -1.0 {
            return Err(Error::MeasureParameter(alpha));
        }
        let atom = (alpha > 0.0).then(|| {
            let s = (alpha * (alpha + 4.0)).sqrt();
            let location = (alpha + 1.0) * (alpha + s) / (2.0 * alpha);
            let inner =
                (alpha.powi(3) + (alpha * alpha - 1.0) * s + 2.0 * alpha * alpha - 3.0 * alpha
                    + 2.0)
                    / alpha;
            let numer = alpha * alpha
                + std::f64::consts::SQRT_2 * alpha * inner.max(0.0).sqrt()
                + (alpha - 1.0) * s
                + alpha;
            let denom = 2.0 * alpha * (alpha * alpha + (alpha + 3.0) * s + 5.0 * alpha + 4.0);
            MeixnerAtom {
                location,
                mass: numer / denom,
            }
        });
        Ok(MeixnerMeasure { alpha, atom })
    }

    /// Support of the absolutely continuous part.
    pub fn support(&self) -> (f64, f64) {
        (-1.0, 3.0)
    }

    /// Closed-form density on `(-1, 3)`; zero outside.
    ///
    /// The cubic weight always carries the factor `x + 1`, so the density is
    /// evaluated through the factored form to avoid cancellation at the left
    /// edge.
    pub fn density(&self, x: f64) -> f64 {
        if x <= -1.0 || x >= 3.0 {
            return 0.0;
        }
        let a = self.alpha;
        (3.0 - x).sqrt() * (a + 1.0)
            / (2.0 * std::f64::consts::PI * (x + 1.0).sqrt() * self.edge_quotient(x))
    }

    /// The cubic weight with the left-edge root divided out.
    fn edge_quotient(&self, x: f64) -> f64 {
        let a = self.alpha;
        -a * x * x + (a * a + a) * x + (a + 1.0) * (a + 1.0)
    }

    /// Integral of `x^k` against the absolutely continuous part. Midpoint
    /// quadrature after the trigonometric substitution that removes the
    /// square-root edges; the substituted integrand is smooth on the closed
    /// interval.
    pub fn continuous_moment(&self, k: u32, panels: usize) -> f64 {
        let n = panels.max(16);
        let h = std::f64::consts::PI / n as f64;
        let a = self.alpha;
        let integrand = |theta: f64| -> f64 {
            let s = theta.sin();
            let x = 1.0 + 2.0 * s;
            (1.0 - s) * (a + 1.0) / (std::f64::consts::PI * self.edge_quotient(x))
                * x.powi(k as i32)
        };
        let mut acc = 0.0;
        for i in 0..n {
            let theta = -std::f64::consts::FRAC_PI_2 + (i as f64 + 0.5) * h;
            acc += integrand(theta);
        }
        acc * h
    }

    /// `k`-th moment of the full measure (continuous part plus atom).
    pub fn moment(&self, k: u32, panels: usize) -> f64 {
        let atom_part = self
            .atom
            .map(|a| a.mass * a.location.powi(k as i32))
            .unwrap_or(0.0);
        self.continuous_moment(k, panels) + atom_part
    }

    /// Total mass (should be 1).
    pub fn total_mass(&self, panels: usize) -> f64 {
        self.moment(0, panels)
    }
}

/// Helper for tests and acceptance: numeric value of an exact moment list.
pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, rat_int};

    #[test]
    fn q_number_values() {
        assert_eq!(q_number(3, &rat(1, 2)).unwrap(), rat(7, 4));
        for n in 1..=5 {
            assert_eq!(q_number(n, &rat_int(1)).unwrap(), rat_int(n));
        }
        assert!(q_number(0, &rat(1, 2)).is_err());
    }

    #[test]
    fn q_pochhammer_values() {
        for n in 1..=4 {
            assert_eq!(
                q_pochhammer(&rat_int(1), &rat(1, 3), n).unwrap(),
                rat_int(0)
            );
        }
        // (1/2; 1/2)_2 = (1 - 1/2)(1 - 1/4).
        assert_eq!(
            q_pochhammer(&rat(1, 2), &rat(1, 2), 2).unwrap(),
            rat(3, 8)
        );
        assert!(q_pochhammer(&rat(1, 2), &rat(1, 2), 0).is_err());
    }

    #[test]
    fn jacobi_q_zero_rows() {
        let alpha = rat(1, 3);
        let params = jacobi(&alpha, &rat_int(0), 4);
        let one_plus = Rational::one() + &alpha;
        assert_eq!(params.beta[0], rat_int(0));
        assert_eq!(params.beta[1], one_plus.clone());
        assert_eq!(params.beta[2], rat_int(1));
        assert_eq!(params.beta[3], rat_int(1));
        assert_eq!(params.gamma[0], one_plus);
        assert_eq!(params.gamma[1], rat_int(1));
    }

    #[test]
    fn jacobi_general_entry() {
        let alpha = rat(2, 5);
        let q = rat(1, 2);
        let params = jacobi(&alpha, &q, 3);
        let expected = (Rational::one() + &q) * (Rational::one() + &alpha * &q);
        assert_eq!(params.gamma[1], expected);

        // Free case: all entries below the first vanish into 1.
        let free = jacobi(&rat_int(0), &rat_int(0), 3);
        assert_eq!(free.beta, vec![rat_int(0), rat_int(1), rat_int(1), rat_int(1)]);
    }

    #[test]
    fn jacobi_entries_nonnegative_in_range() {
        // gamma_n >= 0 whenever |alpha| <= 1 and |q| < 1.
        for alpha in [rat_int(-1), rat(-1, 2), rat_int(0), rat(1, 2), rat_int(1)] {
            for q in [rat(-1, 2), rat_int(0), rat(1, 2), rat(9, 10)] {
                let params = jacobi(&alpha, &q, 6);
                for (n, g) in params.gamma.iter().enumerate() {
                    assert!(*g >= rat_int(0), "gamma_{n} at alpha={alpha}, q={q}");
                }
                assert_eq!(params.beta[0], rat_int(0));
                for n in 1..=6 {
                    assert_eq!(params.beta[n], params.gamma[n - 1]);
                }
            }
        }
    }

    #[test]
    fn polynomials_low_degrees() {
        let polys = poisson_polys(3);
        assert_eq!(polys[0], vec![BivariatePoly::one()]);
        assert_eq!(polys[1], vec![BivariatePoly::zero(), BivariatePoly::one()]);
        // Q_2 = t^2 - (1 + alpha) t - (1 + alpha).
        let mut one_plus_alpha = BivariatePoly::one();
        one_plus_alpha.add_assign(&BivariatePoly::alpha());
        assert_eq!(polys[2][2], BivariatePoly::one());
        assert_eq!(polys[2][1], -&one_plus_alpha);
        assert_eq!(polys[2][0], -&one_plus_alpha);
    }

    #[test]
    fn moment_values() {
        let alpha = rat(1, 2);
        let q = rat(1, 3);
        let moments = moments_from_jacobi(&alpha, &q, 3);
        let one_plus = Rational::one() + &alpha;
        assert_eq!(moments[0], rat_int(1));
        assert_eq!(moments[1], rat_int(0));
        assert_eq!(moments[2], one_plus.clone());
        assert_eq!(moments[3], &one_plus * &one_plus);

        let symbolic = moments_from_jacobi_symbolic(&BivariatePoly::alpha(), 3);
        for (k, m) in moments.iter().enumerate() {
            assert_eq!(&symbolic[k].eval(&alpha, &q), m, "moment {k}");
        }
    }

    #[test]
    fn orthogonality_against_moment_functional() {
        let upto = 5;
        let polys = poisson_polys(upto);
        let moments = moments_from_jacobi_symbolic(&BivariatePoly::alpha(), 2 * upto);
        let (_, gamma) = jacobi_symbolic(&BivariatePoly::alpha(), upto);
        let functional = |coeffs: &[BivariatePoly]| -> BivariatePoly {
            let mut acc = BivariatePoly::zero();
            for (k, c) in coeffs.iter().enumerate() {
                acc.add_assign(&c.mul_poly(&moments[k]));
            }
            acc
        };
        for m in 0..=upto {
            for n in 0..=upto {
                let mut product = vec![BivariatePoly::zero(); m + n + 1];
                for (i, a) in polys[m].iter().enumerate() {
                    for (j, b) in polys[n].iter().enumerate() {
                        product[i + j].add_assign(&a.mul_poly(b));
                    }
                }
                let value = functional(&product);
                if m != n {
                    assert!(value.is_zero(), "L(Q_{m} Q_{n}) = {value}");
                } else {
                    let mut expected = BivariatePoly::one();
                    for g in gamma.iter().take(n) {
                        expected = expected.mul_poly(g);
                    }
                    assert_eq!(value, expected, "L(Q_{n}^2)");
                }
            }
        }
    }

    #[test]
    fn continued_fraction_converges_off_axis() {
        let z = Complex64::new(0.0, 2.0);
        let g20 = cauchy_cf(0.0, 0.0, z, 20).unwrap();
        let g40 = cauchy_cf(0.0, 0.0, z, 40).unwrap();
        assert!((g20 - g40).norm() < 1e-10);
        // Large |z| asymptotics: G ~ 1/z.
        let big = Complex64::new(50.0, 7.0);
        let g = cauchy_cf(0.3, 0.2, big, 60).unwrap();
        assert!((g - 1.0 / big).norm() < 1e-2 * (1.0 / big).norm());
    }

    #[test]
    fn continued_fraction_reports_blow_up() {
        // A pole of the depth-1 truncation sits at the origin.
        let z = Complex64::new(0.0, 0.0);
        assert!(matches!(
            cauchy_cf(0.0, 0.0, z, 1),
            Err(crate::error::Error::ContinuedFractionDiverged)
        ));
        assert!(cauchy_cf(0.0, 0.0, Complex64::new(1.0, 1.0), 0).is_err());
    }

    #[test]
    fn transform_sign_on_upper_half_plane() {
        for &alpha in &[-0.5, 0.0, 0.4, 0.9] {
            for &q in &[-0.5, 0.0, 0.5] {
                for k in 0..10 {
                    let z = Complex64::new(-2.0 + 0.5 * k as f64, 0.7);
                    let g = cauchy_cf(alpha, q, z, 120).unwrap();
                    assert!(g.im < 0.0, "alpha {alpha} q {q} z {z}");
                }
            }
        }
    }

    #[test]
    fn meixner_atom_cases() {
        assert!(MeixnerMeasure::new(-0.5).unwrap().atom.is_none());
        let m1 = MeixnerMeasure::new(1.0).unwrap();
        let atom = m1.atom.unwrap();
        assert!((atom.location - (1.0 + 5.0f64.sqrt())).abs() < 1e-12);
        assert!(MeixnerMeasure::new(-2.0).is_err());

        // The edge case: the atom sits exactly on the right edge with zero
        // mass.
        let edge = MeixnerMeasure::new(0.5).unwrap().atom.unwrap();
        assert!((edge.location - 3.0).abs() < 1e-12);
        assert!(edge.mass.abs() < 1e-12);
    }

    #[test]
    fn meixner_total_mass() {
        for &alpha in &[-0.5, 0.5, 1.0, 2.0] {
            let m = MeixnerMeasure::new(alpha).unwrap();
            assert!(
                (m.total_mass(2000) - 1.0).abs() < 1e-6,
                "mass at alpha {alpha}: {}",
                m.total_mass(2000)
            );
        }
    }

    #[test]
    fn meixner_density_nonnegative() {
        for &alpha in &[-0.9, -0.5, 0.5, 1.0, 2.0] {
            let m = MeixnerMeasure::new(alpha).unwrap();
            for i in 0..400 {
                let x = -1.0 + 4.0 * (i as f64 + 0.5) / 400.0;
                assert!(m.density(x) >= 0.0, "alpha {alpha} x {x}");
            }
        }
    }

    #[test]
    fn closed_transform_matches_truncation_off_axis() {
        // Away from the real axis the generic truncation agrees with the
        // tail-closed transform at q = 0.
        for &alpha in &[-0.5, 0.7, 2.0] {
            let z = Complex64::new(0.3, 1.5);
            let truncated = cauchy_cf(alpha, 0.0, z, 4000).unwrap();
            let closed = meixner_cauchy(alpha, z);
            assert!((truncated - closed).norm() < 1e-8, "alpha {alpha}");
        }
    }
}
