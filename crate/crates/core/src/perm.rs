use serde::{Deserialize, Serialize};

use crate::{Error, RMat, Result};

/// Permutation stored as an image list: `P e_i = e_{image[i]}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &i in &image {
            if i >= n || seen[i] {
                return Err(Error::invalid(format!("{image:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Self(image))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut v: Vec<usize> = (0..n).collect();
        v.swap(i, j);
        Self(v)
    }

    /// All `n!` permutations in lexicographic order of their image lists.
    pub fn all(n: usize) -> Vec<Self> {
        let mut cur: Vec<usize> = (0..n).collect();
        let mut out = vec![Self(cur.clone())];
        loop {
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
                return out;
            };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
            out.push(Self(cur.clone()));
        }
    }

    /// Permutation moving position `order[k]` to position `k`, i.e. `(P x)_k = x_{order[k]}`.
    pub fn from_order(order: &[usize]) -> Result<Self> {
        let o = Self::new(order.to_vec())?;
        Ok(o.inverse())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn image(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Self(inv)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self(other.0.iter().map(|&j| self.0[j]).collect())
    }

    /// `(P x)_{image[i]} = x_i`.
    pub fn apply<T: Copy + Default>(&self, x: &[T]) -> Vec<T> {
        let mut out = vec![T::default(); x.len()];
        for (i, &j) in self.0.iter().enumerate() {
            out[j] = x[i];
        }
        out
    }

    pub fn matrix(&self) -> RMat {
        let n = self.0.len();
        let mut m = RMat::zeros(n, n);
        for (i, &j) in self.0.iter().enumerate() {
            m[(j, i)] = 1.0;
        }
        m
    }

    /// `P M P⁻¹`.
    pub fn conjugate(&self, m: &RMat) -> RMat {
        let n = self.0.len();
        let mut out = RMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(self.0[i], self.0[j])] = m[(i, j)];
            }
        }
        out
    }
}

/// Indices sorting `x` in decreasing order; ties keep their original order.
pub fn argsort_desc(x: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&i, &j| x[j].partial_cmp(&x[i]).unwrap_or(std::cmp::Ordering::Equal));
    idx
}
