//! Blocks of imprimitivity: minimal blocks, block testing with witnesses,
//! block-system validation and the quadratic baseline test.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::{GeneratorSet, Permutation};

/// Disjoint-set forest with path compression and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    /// Merges the classes of `a` and `b`; false if they were already one.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }

    pub fn class_size(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.size[r]
    }
}

/// A partition of `{0, …, n-1}` into cells of equal size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockSystem {
    degree: usize,
    block_of: Vec<usize>,
    blocks: Vec<Vec<usize>>,
}

impl BlockSystem {
    /// Checks that `blocks` partition the points into equal-size cells.
    pub fn from_blocks(degree: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::arg("no blocks"));
        }
        let size = blocks[0].len();
        if size == 0 || blocks.iter().any(|b| b.len() != size) {
            return Err(Error::arg("blocks have unequal sizes"));
        }
        let mut block_of = vec![usize::MAX; degree];
        for (id, b) in blocks.iter_mut().enumerate() {
            b.sort_unstable();
            for &p in b.iter() {
                if p >= degree {
                    return Err(Error::arg(format!("point {p} out of range")));
                }
                if block_of[p] != usize::MAX {
                    return Err(Error::arg(format!("point {p} lies in two blocks")));
                }
                block_of[p] = id;
            }
        }
        if block_of.contains(&usize::MAX) {
            return Err(Error::arg("blocks do not cover every point"));
        }
        Ok(BlockSystem {
            degree,
            block_of,
            blocks,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_of(&self, p: usize) -> usize {
        self.block_of[p]
    }

    pub fn block_size(&self) -> usize {
        self.blocks[0].len()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Singletons or a single block.
    pub fn is_trivial(&self) -> bool {
        self.block_size() == 1 || self.block_size() == self.degree
    }

    pub fn contains_block(&self, cell: &[usize]) -> bool {
        let mut cell = cell.to_vec();
        cell.sort_unstable();
        self.blocks.contains(&cell)
    }
}

/// True iff `bs` is an equal-size partition permuted by every generator.
pub fn validate_block_system(gens: &GeneratorSet, bs: &BlockSystem) -> bool {
    if bs.degree() != gens.degree()
        || BlockSystem::from_blocks(bs.degree, bs.blocks.clone()).is_err()
    {
        return false;
    }
    gens.generators().iter().all(|s| {
        bs.blocks.iter().all(|b| {
            let target = bs.block_of[s.apply(b[0])];
            b.iter().all(|&p| bs.block_of[s.apply(p)] == target)
        })
    })
}

/// Smallest block of the group containing `seed`.
pub fn minimal_block(gens: &GeneratorSet, seed: &[usize]) -> Result<Vec<usize>> {
    if seed.is_empty() {
        return Err(Error::arg("empty seed"));
    }
    if let Some(&p) = seed.iter().find(|&&p| p >= gens.degree()) {
        return Err(Error::arg(format!("seed point {p} out of range")));
    }
    gens.require_transitive()?;
    Ok(minimal_block_unchecked(gens, seed))
}

pub(crate) fn minimal_block_unchecked(gens: &GeneratorSet, seed: &[usize]) -> Vec<usize> {
    let n = gens.degree();
    let mut uf = UnionFind::new(n);
    let mut events = VecDeque::new();
    let first = seed[0];
    for &q in &seed[1..] {
        if uf.union(first, q) {
            events.push_back((first, q));
        }
    }
    while let Some((p, q)) = events.pop_front() {
        for s in gens.generators() {
            let (a, b) = (s.apply(p), s.apply(q));
            if uf.union(a, b) {
                events.push_back((a, b));
            }
        }
    }
    let root = uf.find(first);
    (0..n).filter(|&p| uf.find(p) == root).collect()
}

/// A generator letter: generator index and whether it is inverted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GenLetter {
    pub gen: usize,
    pub inverted: bool,
}

/// Evidence that a set `Δ` is not a block: `β^{g_1} = γ` with
/// `β, γ ∈ Δ` but `Δ^{g_1} ≠ Δ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockWitness {
    pub beta: usize,
    pub gamma: usize,
    pub g1: Permutation,
    /// `g_1` as a word in the generators.
    pub word: Vec<GenLetter>,
}

#[derive(Clone, Debug)]
pub enum BlockTest {
    IsBlock(BlockSystem),
    NotBlock(BlockWitness),
}

/// Tests whether `delta` is a block by propagating its translates.
pub fn blockness_test(gens: &GeneratorSet, delta: &[usize], alpha: usize) -> Result<BlockTest> {
    let n = gens.degree();
    if delta.len() <= 1 || delta.len() >= n {
        return Err(Error::arg(format!(
            "candidate of size {} is not proper for degree {n}",
            delta.len()
        )));
    }
    if !delta.contains(&alpha) {
        return Err(Error::arg(format!("{alpha} is not in the candidate")));
    }
    let mut block_of = vec![usize::MAX; n];
    for &p in delta {
        if p >= n {
            return Err(Error::arg(format!("point {p} out of range")));
        }
        if block_of[p] != usize::MAX {
            return Err(Error::arg(format!("point {p} repeated in candidate")));
        }
        block_of[p] = 0;
    }
    gens.require_transitive()?;
    Ok(blockness_unchecked(gens, delta, block_of))
}

fn blockness_unchecked(
    gens: &GeneratorSet,
    delta: &[usize],
    mut block_of: Vec<usize>,
) -> BlockTest {
    let mut blocks = vec![delta.to_vec()];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None];
    let mut queue = VecDeque::from([0usize]);
    while let Some(b) = queue.pop_front() {
        for (si, s) in gens.generators().iter().enumerate() {
            let image: Vec<usize> = blocks[b].iter().map(|&p| s.apply(p)).collect();
            let first = block_of[image[0]];
            if first == usize::MAX && image.iter().all(|&q| block_of[q] == usize::MAX) {
                let id = blocks.len();
                for &q in &image {
                    block_of[q] = id;
                }
                blocks.push(image);
                parent.push(Some((b, si)));
                queue.push_back(id);
                continue;
            }
            if first != usize::MAX && image.iter().all(|&q| block_of[q] == first) {
                continue;
            }
            let clash = image
                .iter()
                .map(|&q| block_of[q])
                .find(|&c| c != usize::MAX)
                .expect("some image point is assigned");
            return BlockTest::NotBlock(witness(gens, delta, &parent, b, si, clash));
        }
    }
    BlockTest::IsBlock(
        BlockSystem::from_blocks(gens.degree(), blocks)
            .expect("translates of a block partition a transitive domain"),
    )
}

fn path_to(parent: &[Option<(usize, usize)>], mut b: usize) -> Vec<usize> {
    let mut gens = Vec::new();
    while let Some((p, s)) = parent[b] {
        gens.push(s);
        b = p;
    }
    gens.reverse();
    gens
}

// g1 = w · s · w'^{-1}, where Δ^w is the block being pushed and Δ^{w'} the
// block it collided with.
fn witness(
    gens: &GeneratorSet,
    delta: &[usize],
    parent: &[Option<(usize, usize)>],
    from: usize,
    s: usize,
    clash: usize,
) -> BlockWitness {
    let mut word: Vec<GenLetter> = path_to(parent, from)
        .into_iter()
        .map(|gen| GenLetter {
            gen,
            inverted: false,
        })
        .collect();
    word.push(GenLetter {
        gen: s,
        inverted: false,
    });
    word.extend(
        path_to(parent, clash)
            .into_iter()
            .rev()
            .map(|gen| GenLetter {
                gen,
                inverted: true,
            }),
    );
    let n = gens.degree();
    let mut g1 = Permutation::identity(n);
    for letter in &word {
        let g = &gens.generators()[letter.gen];
        g1 = if letter.inverted {
            g1.then(&g.inverse())
        } else {
            g1.then(g)
        };
    }
    let mut inside = vec![false; n];
    for &p in delta {
        inside[p] = true;
    }
    let beta = *delta
        .iter()
        .find(|&&p| inside[g1.apply(p)])
        .expect("colliding translate meets the candidate");
    BlockWitness {
        beta,
        gamma: g1.apply(beta),
        g1,
        word,
    }
}

/// Outcome of the baseline primitivity test.
#[derive(Clone, Debug)]
pub enum BaselineVerdict {
    Primitive,
    Blocks(BlockSystem),
}

/// Quadratic primitivity test: minimal blocks of `{0, λ}` for every `λ`.
pub fn atkinson_baseline(gens: &GeneratorSet) -> Result<BaselineVerdict> {
    gens.require_transitive()?;
    let n = gens.degree();
    for lambda in 1..n {
        let block = minimal_block_unchecked(gens, &[0, lambda]);
        if block.len() < n {
            let mut block_of = vec![usize::MAX; n];
            for &p in &block {
                block_of[p] = 0;
            }
            return match blockness_unchecked(gens, &block, block_of) {
                BlockTest::IsBlock(bs) => Ok(BaselineVerdict::Blocks(bs)),
                BlockTest::NotBlock(_) => {
                    Err(Error::internal("minimal block failed the block test"))
                }
            };
        }
    }
    Ok(BaselineVerdict::Primitive)
}

/// Expands a known proper block into its block system.
pub(crate) fn expand_block(gens: &GeneratorSet, block: &[usize]) -> Result<BlockSystem> {
    match blockness_test(gens, block, block[0])? {
        BlockTest::IsBlock(bs) => Ok(bs),
        BlockTest::NotBlock(_) => Err(Error::internal("minimal block failed the block test")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize, cycles: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(n, cycles).unwrap()
    }

    fn c(n: usize) -> GeneratorSet {
        let cycle: Vec<usize> = (0..n).collect();
        GeneratorSet::new(n, vec![cyc(n, &[&cycle])]).unwrap()
    }

    fn d4() -> GeneratorSet {
        GeneratorSet::new(4, vec![cyc(4, &[&[0, 1, 2, 3]]), cyc(4, &[&[1, 3]])]).unwrap()
    }

    #[test]
    fn union_find_basics() {
        let mut uf = UnionFind::new(5);
        assert!(uf.union(0, 1));
        assert!(uf.union(3, 4));
        assert!(!uf.union(1, 0));
        assert!(uf.union(1, 4));
        assert_eq!(uf.class_size(3), 4);
        assert_ne!(uf.find(2), uf.find(0));
    }

    #[test]
    fn minimal_block_examples() {
        assert_eq!(minimal_block(&c(4), &[0, 2]).unwrap(), vec![0, 2]);
        assert_eq!(minimal_block(&c(4), &[0, 1]).unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(minimal_block(&d4(), &[3]).unwrap(), vec![3]);
        let intrans = GeneratorSet::new(3, vec![cyc(3, &[&[0, 1]])]).unwrap();
        assert!(minimal_block(&intrans, &[0, 1]).is_err());
        assert!(minimal_block(&c(4), &[]).is_err());
    }

    #[test]
    fn blockness_examples() {
        let BlockTest::IsBlock(bs) = blockness_test(&c(4), &[0, 2], 0).unwrap() else {
            panic!()
        };
        assert_eq!(bs.blocks(), &[vec![0, 2], vec![1, 3]]);

        let BlockTest::NotBlock(w) = blockness_test(&c(4), &[0, 1], 0).unwrap() else {
            panic!()
        };
        assert_eq!(w.g1, cyc(4, &[&[0, 1, 2, 3]]));
        assert_eq!((w.beta, w.gamma), (0, 1));

        let BlockTest::IsBlock(bs) = blockness_test(&d4(), &[1, 3], 1).unwrap() else {
            panic!()
        };
        assert!(bs.contains_block(&[1, 3]) && bs.contains_block(&[0, 2]));

        assert!(blockness_test(&c(4), &[0], 0).is_err());
        assert!(blockness_test(&c(4), &[0, 1, 2, 3], 0).is_err());
        assert!(blockness_test(&c(4), &[1, 2], 0).is_err());
    }

    #[test]
    fn witness_word_evaluates_to_g1() {
        let gens = GeneratorSet::new(
            6,
            vec![cyc(6, &[&[0, 1, 2, 3, 4, 5]]), cyc(6, &[&[1, 5], &[2, 4]])],
        )
        .unwrap();
        let BlockTest::NotBlock(w) = blockness_test(&gens, &[0, 1, 3], 0).unwrap() else {
            panic!()
        };
        let mut g = Permutation::identity(6);
        for l in &w.word {
            let s = &gens.generators()[l.gen];
            g = g.then(&if l.inverted { s.inverse() } else { s.clone() });
        }
        assert_eq!(g, w.g1);
        assert_eq!(w.g1.apply(w.beta), w.gamma);
        let mut img: Vec<usize> = [0, 1, 3].iter().map(|&p| w.g1.apply(p)).collect();
        img.sort();
        assert_ne!(img, vec![0, 1, 3]);
        assert!([0, 1, 3].contains(&w.beta) && [0, 1, 3].contains(&w.gamma));
    }

    #[test]
    fn baseline_examples() {
        let a5 =
            GeneratorSet::new(5, vec![cyc(5, &[&[0, 1, 2, 3, 4]]), cyc(5, &[&[0, 1, 2]])]).unwrap();
        assert!(matches!(
            atkinson_baseline(&a5).unwrap(),
            BaselineVerdict::Primitive
        ));
        let BaselineVerdict::Blocks(bs) = atkinson_baseline(&c(6)).unwrap() else {
            panic!()
        };
        assert!(validate_block_system(&c(6), &bs) && !bs.is_trivial());
        assert!(matches!(
            atkinson_baseline(&c(2)).unwrap(),
            BaselineVerdict::Primitive
        ));
    }

    #[test]
    fn validate_examples() {
        let good = BlockSystem::from_blocks(4, vec![vec![0, 2], vec![1, 3]]).unwrap();
        assert!(validate_block_system(&c(4), &good));
        let bad = BlockSystem::from_blocks(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert!(!validate_block_system(&c(4), &bad));
        let singles = BlockSystem::from_blocks(4, (0..4).map(|p| vec![p]).collect()).unwrap();
        assert!(validate_block_system(&c(4), &singles) && singles.is_trivial());
        assert!(BlockSystem::from_blocks(4, vec![vec![0, 1, 2], vec![3]]).is_err());
        assert!(BlockSystem::from_blocks(4, vec![vec![0, 1], vec![1, 2]]).is_err());
    }
}
