//! The hyperoctahedral group: signed permutations, generators, inversion
//! statistics and the action on tensor basis words.
//!
//! Elements are stored in one-line notation on `1..=n`; the action on
//! negatives is forced by the sign rule `sigma(-i) = -sigma(i)`. Generator 0
//! flips the sign of 1, generator `i >= 1` swaps `i` and `i+1`. Words of
//! generators evaluate right to left, so in `compose(sigma, tau)` the factor
//! `tau` acts first.

use std::fmt;

use crate::error::{Error, Result};

/// A signed permutation in one-line notation: `image[k-1] = sigma(k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPermutation {
    image: Vec<i64>,
}

/// The two length statistics of a signed permutation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InversionStats {
    /// Number of negative inversions: indices sent to negatives.
    pub ninv: usize,
    /// Number of positive inversions: descents plus negative-sum pairs.
    pub pinv: usize,
}

impl SignedPermutation {
    /// The identity of rank `n`.
    pub fn identity(n: usize) -> Self {
        SignedPermutation {
            image: (1..=n as i64).collect(),
        }
    }

    /// Build from a one-line image, validating that absolute values form a
    /// permutation of `1..=n`.
    pub fn from_image(image: Vec<i64>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &v in &image {
            let a = v.unsigned_abs() as usize;
            if v == 0 || a > n || seen[a - 1] {
                return Err(Error::InvalidImage(image));
            }
            seen[a - 1] = true;
        }
        Ok(SignedPermutation { image })
    }

    /// Coxeter generator: index 0 flips the sign of 1, index `i >= 1` swaps
    /// `i` and `i+1`.
    pub fn generator(index: usize, n: usize) -> Result<Self> {
        if n == 0 || index > n - 1 {
            return Err(Error::GeneratorOutOfRange { index, rank: n });
        }
        let mut image: Vec<i64> = (1..=n as i64).collect();
        if index == 0 {
            image[0] = -1;
        } else {
            image.swap(index - 1, index);
        }
        Ok(SignedPermutation { image })
    }

    pub fn rank(&self) -> usize {
        self.image.len()
    }

    pub fn image(&self) -> &[i64] {
        &self.image
    }

    /// Apply to a signed point `x` with `1 <= |x| <= n`.
    pub fn apply(&self, x: i64) -> i64 {
        let a = x.unsigned_abs() as usize;
        debug_assert!(a >= 1 && a <= self.image.len());
        let v = self.image[a - 1];
        if x < 0 {
            -v
        } else {
            v
        }
    }

    /// Composition `(self . other)(x) = self(other(x))`; `other` acts first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch {
                left: self.rank(),
                right: other.rank(),
            });
        }
        let image = (1..=self.rank() as i64)
            .map(|k| self.apply(other.apply(k)))
            .collect();
        Ok(SignedPermutation { image })
    }

    pub fn inverse(&self) -> Self {
        let n = self.rank();
        let mut image = vec![0i64; n];
        for k in 1..=n {
            let v = self.image[k - 1];
            let a = v.unsigned_abs() as usize;
            image[a - 1] = if v < 0 { -(k as i64) } else { k as i64 };
        }
        SignedPermutation { image }
    }

    /// Evaluate a generator word right to left: the last index acts first.
    pub fn from_word(word: &[usize], n: usize) -> Result<Self> {
        let mut acc = Self::identity(n);
        for &i in word.iter().rev() {
            acc = Self::generator(i, n)?.compose(&acc)?;
        }
        Ok(acc)
    }

    /// Negative and positive inversion counts.
    ///
    /// `ninv` counts indices with a negative image. `pinv` counts pairs
    /// `i < j` with `sigma(i) > sigma(j)` plus pairs with
    /// `sigma(i) + sigma(j) < 0`.
    pub fn inversion_stats(&self) -> InversionStats {
        let n = self.rank();
        let ninv = self.image.iter().filter(|&&v| v < 0).count();
        let mut pinv = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.image[i] > self.image[j] {
                    pinv += 1;
                }
                if self.image[i] + self.image[j] < 0 {
                    pinv += 1;
                }
            }
        }
        InversionStats { ninv, pinv }
    }

    /// Act on a tensor basis word of length `2n`.
    ///
    /// Word positions are labelled `-n, ..., -1, 1, ..., n` left to right;
    /// the output at position `k` is the input at position `sigma^{-1}(k)`.
    pub fn act_on_word<T: Clone>(&self, word: &[T]) -> Result<Vec<T>> {
        let n = self.rank();
        if word.len() != 2 * n {
            return Err(Error::WordLength {
                got: word.len(),
                rank: n,
            });
        }
        let inv = self.inverse();
        let out = (0..2 * n)
            .map(|slot| {
                let label = index_to_label(slot, n);
                let src = inv.apply(label);
                word[label_to_index(src, n)].clone()
            })
            .collect();
        Ok(out)
    }

    /// All `2^n n!` elements in lexicographic order of the one-line image.
    pub fn enumerate(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut prefix = Vec::with_capacity(n);
        let mut used = vec![false; n];
        enumerate_rec(n, &mut prefix, &mut used, &mut out);
        out
    }
}

/// Map a position label in `-n..=-1, 1..=n` to a slot index `0..2n`.
pub fn label_to_index(label: i64, n: usize) -> usize {
    debug_assert!(label != 0 && label.unsigned_abs() as usize <= n);
    if label < 0 {
        (n as i64 + label) as usize
    } else {
        (n as i64 + label - 1) as usize
    }
}

/// Inverse of [`label_to_index`].
pub fn index_to_label(index: usize, n: usize) -> i64 {
    if index < n {
        index as i64 - n as i64
    } else {
        index as i64 - n as i64 + 1
    }
}

fn enumerate_rec(
    n: usize,
    prefix: &mut Vec<i64>,
    used: &mut Vec<bool>,
    out: &mut Vec<SignedPermutation>,
) {
    if prefix.len() == n {
        out.push(SignedPermutation {
            image: prefix.clone(),
        });
        return;
    }
    // Candidate entries in ascending signed order keep the output lexicographic.
    for v in (-(n as i64)..=n as i64).filter(|&v| v != 0) {
        let a = v.unsigned_abs() as usize;
        if used[a - 1] {
            continue;
        }
        used[a - 1] = true;
        prefix.push(v);
        enumerate_rec(n, prefix, used, out);
        prefix.pop();
        used[a - 1] = false;
    }
}

impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.image.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}
