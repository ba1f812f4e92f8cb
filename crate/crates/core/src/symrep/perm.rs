use std::fmt;

use crate::{Error, Result};

/// A permutation of `0..n` in one-line notation: `i ↦ self[i]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
            seen[x] = true;
        }
        Ok(Permutation(images))
    }

    /// Parses 1-based one-line notation.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::InvalidPermutation(format!("{images:?} uses 0 in 1-based notation")));
        }
        Permutation::new(images.iter().map(|x| x - 1).collect())
    }

    /// The adjacent transposition exchanging `i` and `i + 1`.
    pub fn transposition(n: usize, i: usize) -> Self {
        let mut v: Vec<usize> = (0..n).collect();
        v.swap(i, i + 1);
        Permutation(v)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inversions(&self) -> usize {
        let mut count = 0;
        for a in 0..self.0.len() {
            for b in a + 1..self.0.len() {
                if self.0[a] > self.0[b] {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn is_odd(&self) -> bool {
        self.inversions() % 2 == 1
    }

    /// Adjacent transpositions `[i₁, …, i_k]` with `self = s_{i_k} ∘ … ∘ s_{i₁}`,
    /// read off from bubble sort. Applying them in list order realizes `self`.
    pub fn bubble_word(&self) -> Vec<usize> {
        let mut p = self.0.clone();
        let mut word = Vec::new();
        let n = p.len();
        for pass in 0..n {
            for i in 0..n.saturating_sub(1 + pass) {
                if p[i] > p[i + 1] {
                    p.swap(i, i + 1);
                    word.push(i);
                }
            }
        }
        word
    }

    /// All permutations of `0..n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            out.push(Permutation(cur.clone()));
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).expect("successor exists");
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        out
    }

    /// Rank among `all(n)`.
    pub fn lex_rank(&self) -> usize {
        let n = self.0.len();
        let mut rank = 0;
        let mut fact = vec![1usize; n + 1];
        for i in 1..=n {
            fact[i] = fact[i - 1] * i;
        }
        for i in 0..n {
            let smaller = self.0[i + 1..].iter().filter(|&&x| x < self.0[i]).count();
            rank += smaller * fact[n - 1 - i];
        }
        rank
    }

    /// The permutation sorting `keys` stably: position `i` moves to `result[i]`.
    pub fn sorting(keys: &[impl Ord]) -> Permutation {
        let mut idx: Vec<usize> = (0..keys.len()).collect();
        idx.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
        let mut dest = vec![0; keys.len()];
        for (new, &old) in idx.iter().enumerate() {
            dest[old] = new;
        }
        Permutation(dest)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one: Vec<String> = self.0.iter().map(|x| (x + 1).to_string()).collect();
        write!(f, "[{}]", one.join(" "))
    }
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bubble_word_realizes_permutation() {
        for p in Permutation::all(4) {
            let mut acc = Permutation::identity(4);
            for &i in &p.bubble_word() {
                acc = Permutation::transposition(4, i).compose(&acc);
            }
            assert_eq!(acc, p);
            assert_eq!(p.bubble_word().len(), p.inversions());
        }
    }

    #[test]
    fn lex_rank_matches_enumeration() {
        for (r, p) in Permutation::all(4).iter().enumerate() {
            assert_eq!(p.lex_rank(), r);
        }
    }

    #[test]
    fn sorting_moves_positions() {
        let keys = [3, 1, 2];
        let s = Permutation::sorting(&keys);
        let mut out = [0; 3];
        for i in 0..3 {
            out[s.apply(i)] = keys[i];
        }
        assert_eq!(out, [1, 2, 3]);
    }
}
