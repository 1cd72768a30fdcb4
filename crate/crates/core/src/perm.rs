//! Explicit permutations of `{0, …, n-1}` acting on the right.
//!
//! Composition follows the exponent convention: `p^(gh) = (p^g)^h`, so
//! `g.then(&h)` first applies `g`, then `h`.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Anything that moves points of `{0, …, degree-1}`.
pub trait PointAction {
    fn degree(&self) -> usize;
    fn act(&self, p: usize) -> usize;
}

/// A permutation stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree).collect(),
        }
    }

    /// Builds a permutation from its image array, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::arg("permutation degree must be at least 1"));
        }
        let mut seen = vec![false; n];
        for (p, &q) in images.iter().enumerate() {
            if q >= n {
                return Err(Error::arg(format!(
                    "image {q} of point {p} is out of range for degree {n}"
                )));
            }
            if std::mem::replace(&mut seen[q], true) {
                return Err(Error::arg(format!("point {q} is hit twice")));
            }
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation of the given degree from 0-based disjoint cycles.
    pub fn from_cycles<C: AsRef<[usize]>>(degree: usize, cycles: &[C]) -> Result<Self> {
        if degree == 0 {
            return Err(Error::arg("permutation degree must be at least 1"));
        }
        let mut images: Vec<usize> = (0..degree).collect();
        let mut used = vec![false; degree];
        for cycle in cycles {
            let cycle = cycle.as_ref();
            for (k, &p) in cycle.iter().enumerate() {
                if p >= degree {
                    return Err(Error::arg(format!(
                        "point {p} is out of range for degree {degree}"
                    )));
                }
                if std::mem::replace(&mut used[p], true) {
                    return Err(Error::arg(format!("point {p} repeated in cycles")));
                }
                images[p] = cycle[(k + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Image of `p`. Panics when `p` is out of range; see [`Permutation::try_apply`].
    #[inline]
    pub fn apply(&self, p: usize) -> usize {
        self.images[p]
    }

    pub fn try_apply(&self, p: usize) -> Result<usize> {
        self.images.get(p).copied().ok_or_else(|| {
            Error::arg(format!(
                "point {p} is out of range for degree {}",
                self.degree()
            ))
        })
    }

    /// The product `self · other`: apply `self`, then `other`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::arg(format!(
                "degree mismatch: {} vs {}",
                self.degree(),
                other.degree()
            )));
        }
        Ok(self.then(other))
    }

    /// Unchecked variant of [`Permutation::compose`]; degrees must agree.
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self.images.iter().map(|&q| other.images[q]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (p, &q) in self.images.iter().enumerate() {
            inv[q] = p;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(p, &q)| p == q)
    }

    /// Smallest point moved, if any.
    pub fn first_moved(&self) -> Option<usize> {
        self.images.iter().enumerate().position(|(p, &q)| p != q)
    }

    pub fn fixes(&self, p: usize) -> bool {
        self.images[p] == p
    }

    /// Disjoint cycles of length > 1, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p);
                p = self.images[p];
            }
            out.push(cycle);
        }
        out
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(images: Vec<usize>) -> Result<Self> {
        Permutation::from_images(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Vec<usize> {
        p.images
    }
}

impl PointAction for Permutation {
    fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    fn act(&self, p: usize) -> usize {
        self.images[p]
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in cycles {
            f.write_str("(")?;
            for (k, p) in cycle.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.degree(), self)
    }
}

/// A nonempty list of generators of a common degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    degree: usize,
    generators: Vec<Permutation>,
    labels: Option<Vec<String>>,
}

impl GeneratorSet {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::arg("degree must be at least 1"));
        }
        if generators.is_empty() {
            return Err(Error::arg("generator list is empty"));
        }
        if let Some(bad) = generators.iter().position(|g| g.degree() != degree) {
            return Err(Error::arg(format!(
                "generator {bad} has degree {}, expected {degree}",
                generators[bad].degree()
            )));
        }
        Ok(GeneratorSet {
            degree,
            generators,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.generators.len() {
            return Err(Error::arg(format!(
                "{} labels for {} generators",
                labels.len(),
                self.generators.len()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree
    }

    #[inline]
    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_transitive(&self) -> bool {
        is_transitive(self)
    }

    pub(crate) fn require_transitive(&self) -> Result<()> {
        if self.is_transitive() {
            Ok(())
        } else {
            Err(Error::arg("generators do not act transitively"))
        }
    }
}

/// Closure of `{start}` under all providers, in BFS discovery order.
pub fn orbit(actions: &[&dyn PointAction], start: usize) -> Vec<usize> {
    let degree = actions
        .iter()
        .map(|a| a.degree())
        .max()
        .unwrap_or(start + 1)
        .max(start + 1);
    let mut seen = vec![false; degree];
    let mut out = vec![start];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(p) = queue.pop_front() {
        for a in actions {
            let q = a.act(p);
            if !seen[q] {
                seen[q] = true;
                out.push(q);
                queue.push_back(q);
            }
        }
    }
    out
}

/// Orbit of `start` under a slice of explicit permutations.
pub fn perm_orbit(perms: &[Permutation], start: usize) -> Vec<usize> {
    let actions: Vec<&dyn PointAction> = perms.iter().map(|g| g as &dyn PointAction).collect();
    orbit(&actions, start)
}

pub fn is_transitive(gens: &GeneratorSet) -> bool {
    perm_orbit(gens.generators(), 0).len() == gens.degree()
}
