//! Test corpus and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashSet;

use deepsift::corpus::GroupSpec;
use deepsift::{GeneratorSet, Permutation};
use rand::Rng;

pub fn cyclic(n: usize) -> GroupSpec {
    GroupSpec::Cyclic(n)
}

/// The fixed correctness corpus: transitive groups of degree 2..=512.
pub fn corpus() -> Vec<GroupSpec> {
    use GroupSpec::*;
    let mut v = Vec::new();
    for n in [2, 3, 4, 5, 6, 7, 8, 9, 12, 16, 30, 64, 97, 128, 256, 512] {
        v.push(Cyclic(n));
    }
    for n in [3, 4, 5, 6, 8, 10, 16, 50, 128, 512] {
        v.push(Dihedral(n));
    }
    for m in [2, 3, 4, 5, 6, 8, 12] {
        v.push(Symmetric(m));
    }
    for m in [3, 4, 5, 6, 7, 9, 12] {
        v.push(Alternating(m));
    }
    for m in 4..=12 {
        v.push(Subsets { m, k: 2 });
    }
    v.push(Subsets { m: 6, k: 3 });
    v.push(GroupSpec::wreath(Cyclic(2), 2));
    v.push(GroupSpec::wreath(Cyclic(3), 3));
    v.push(GroupSpec::wreath(Symmetric(3), 2));
    v.push(GroupSpec::wreath(Alternating(5), 2));
    v.push(GroupSpec::wreath(Alternating(8), 2));
    v.push(GroupSpec::wreath(Dihedral(5), 3));
    v.push(GroupSpec::wreath(Symmetric(4), 4));
    v.push(GroupSpec::wreath(GroupSpec::wreath(Cyclic(2), 2), 3));
    v.push(GroupSpec::wreath(Cyclic(5), 2));
    v.push(ProductAction { m: 3, d: 2 });
    v.push(ProductAction { m: 4, d: 2 });
    v.push(ProductAction { m: 3, d: 3 });
    v.push(ProductAction { m: 5, d: 2 });
    v.push(M24);
    v
}

/// Small groups (degree <= 10) for exhaustive checks.
pub fn small_corpus() -> Vec<GroupSpec> {
    corpus()
        .into_iter()
        .filter(|s| s.build().unwrap().degree() <= 10)
        .collect()
}

/// Random element as a product of `len` random generators or inverses.
pub fn random_element(gens: &GeneratorSet, len: usize, rng: &mut impl Rng) -> Permutation {
    let mut g = Permutation::identity(gens.degree());
    for _ in 0..len {
        let s = &gens.generators()[rng.gen_range(0..gens.len())];
        g = if rng.gen_bool(0.5) {
            g.then(s)
        } else {
            g.then(&s.inverse())
        };
    }
    g
}

/// Every set partition of `0..n`, as a block label per point.
pub fn all_partitions(n: usize) -> Vec<Vec<u8>> {
    fn rec(labels: &mut Vec<u8>, max: u8, n: usize, out: &mut Vec<Vec<u8>>) {
        if labels.len() == n {
            out.push(labels.clone());
            return;
        }
        for l in 0..=max + 1 {
            labels.push(l);
            rec(labels, max.max(l), n, out);
            labels.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut labels = vec![0u8];
    rec(&mut labels, 0, n, &mut out);
    out
}

/// Partitions preserved by every generator.
pub fn invariant_partitions(gens: &GeneratorSet) -> Vec<Vec<u8>> {
    let n = gens.degree();
    all_partitions(n)
        .into_iter()
        .filter(|labels| {
            gens.generators().iter().all(|s| {
                // same cell => images in same cell
                let mut map = vec![u8::MAX; n];
                (0..n).all(|p| {
                    let img = labels[s.apply(p)];
                    let slot = &mut map[labels[p] as usize];
                    if *slot == u8::MAX {
                        *slot = img;
                        true
                    } else {
                        *slot == img
                    }
                })
            })
        })
        .collect()
}

/// Smallest cell containing `a` and `b` over all invariant partitions.
pub fn oracle_minimal_block(parts: &[Vec<u8>], a: usize, b: usize) -> Vec<usize> {
    parts
        .iter()
        .filter(|l| l[a] == l[b])
        .map(|l| (0..l.len()).filter(|&p| l[p] == l[a]).collect::<Vec<_>>())
        .min_by_key(|cell| cell.len())
        .expect("the one-cell partition is invariant")
}

/// All elements of the cube over explicit factors, by subset enumeration.
pub fn enumerate_cube(n: usize, factors: &[Permutation]) -> HashSet<Permutation> {
    let mut out = HashSet::new();
    for mask in 0u64..(1 << factors.len()) {
        let mut g = Permutation::identity(n);
        for (k, f) in factors.iter().enumerate() {
            if mask >> k & 1 == 1 {
                g = g.then(f);
            }
        }
        out.insert(g);
    }
    out
}

/// The group generated by `gens`, by closure (small groups only).
pub fn enumerate_group(gens: &[Permutation]) -> HashSet<Permutation> {
    let n = gens[0].degree();
    let mut seen = HashSet::from([Permutation::identity(n)]);
    let mut frontier = vec![Permutation::identity(n)];
    while let Some(g) = frontier.pop() {
        for s in gens {
            let h = g.then(s);
            if seen.insert(h.clone()) {
                frontier.push(h);
            }
        }
    }
    seen
}
