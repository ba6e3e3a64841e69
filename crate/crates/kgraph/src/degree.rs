//! Degree vectors in `N^k`.
//!
//! A degree is a tuple of non-negative integers, one entry per colour.
//! Comparison is componentwise and therefore only partial; `join` and
//! `meet` are the componentwise maximum and minimum.  The total `|n|`
//! is the sum of the entries.

use serde::{Deserialize, Serialize};
use std::fmt;

/// An element of `N^k`.  The rank `k` is the length of the vector.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Degree(Vec<u32>);

impl Degree {
    pub fn new(coords: Vec<u32>) -> Self {
        Degree(coords)
    }

    pub fn zero(k: usize) -> Self {
        Degree(vec![0; k])
    }

    /// The standard basis vector for `color` (1-based), i.e. one step of
    /// that colour.
    pub fn basis(k: usize, color: usize) -> Self {
        assert!(color >= 1 && color <= k, "color {color} out of range 1..={k}");
        let mut v = vec![0; k];
        v[color - 1] = 1;
        Degree(v)
    }

    /// All entries equal to one.
    pub fn ones(k: usize) -> Self {
        Degree(vec![1; k])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    /// Entry for `color` (1-based).
    pub fn get(&self, color: usize) -> u32 {
        self.0[color - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Componentwise order: `self <= other`.
    pub fn le(&self, other: &Degree) -> bool {
        assert_eq!(self.rank(), other.rank());
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Componentwise maximum.
    pub fn join(&self, other: &Degree) -> Degree {
        assert_eq!(self.rank(), other.rank());
        Degree(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    /// Componentwise minimum.
    pub fn meet(&self, other: &Degree) -> Degree {
        assert_eq!(self.rank(), other.rank());
        Degree(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn plus(&self, other: &Degree) -> Degree {
        assert_eq!(self.rank(), other.rank());
        Degree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference; `None` unless `other <= self`.
    pub fn minus(&self, other: &Degree) -> Option<Degree> {
        if other.le(self) {
            Some(Degree(
                self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
            ))
        } else {
            None
        }
    }

    /// The total `|n|`, i.e. the sum of the entries.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Iterator over every degree `n` with `n <= self`, in lexicographic
    /// order starting from zero.
    pub fn grid(&self) -> GridIter {
        GridIter {
            bound: self.clone(),
            next: Some(Degree::zero(self.rank())),
        }
    }

    /// Lexicographic comparison; used only as a sort key, not as the
    /// mathematical (componentwise) order.
    pub fn lex_cmp(&self, other: &Degree) -> std::cmp::Ordering {
        self.0.cmp(&other.0)
    }
}

impl fmt::Debug for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Iterates over the grid `{n : n <= bound}`.
pub struct GridIter {
    bound: Degree,
    next: Option<Degree>,
}

impl Iterator for GridIter {
    type Item = Degree;

    fn next(&mut self) -> Option<Degree> {
        let current = self.next.take()?;
        // Odometer increment with per-coordinate limits.
        let mut coords = current.0.clone();
        let mut i = coords.len();
        loop {
            if i == 0 {
                self.next = None;
                break;
            }
            i -= 1;
            if coords[i] < self.bound.0[i] {
                coords[i] += 1;
                for c in coords.iter_mut().skip(i + 1) {
                    *c = 0;
                }
                self.next = Some(Degree(coords));
                break;
            }
        }
        Some(current)
    }
}
