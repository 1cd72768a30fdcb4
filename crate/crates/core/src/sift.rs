//! The deep-sifting data structure.
//!
//! The state holds base points `β_0, …, β_{ℓ-1}` (levels are numbered from
//! 0 here) and, per level, a list `X_i` of explicit elements fixing the
//! earlier base points and moving `β_i`, such that the shallow cube `C(X_i)`
//! maps `β_i` to exactly `2^{|X_i|}` points `Δ_i`.
//!
//! Sifting `g` repeatedly finds the first base point `g` moves. If `Δ_i^g`
//! misses `Δ_i`, `g` is appended to `X_i`. Otherwise `g` is replaced by
//! `s g t^{-1}` for cube elements `s, t` chosen so the result fixes `β_i`.
//! An element that survives all levels starts a new level.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::words::{deep_cube_orbit, Atom, CubeImage, CubeList, ElementStore, Word};

/// `⌈log₂ n⌉` for `n ≥ 1`.
pub fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// One level of the structure: a base point, its cube list and the shallow
/// cube image with witness back pointers.
#[derive(Clone, Debug)]
pub struct Level {
    base: usize,
    elems: Vec<usize>,
    points: Vec<usize>,
    // point -> (predecessor, factor index into `elems`); the base maps to None
    back: HashMap<usize, Option<(usize, usize)>>,
}

impl Level {
    fn seeded(store: &ElementStore, base: usize, elem: usize) -> Level {
        let image = store.get(elem).expect("seed stored").apply(base);
        debug_assert_ne!(image, base);
        let mut back = HashMap::new();
        back.insert(base, None);
        back.insert(image, Some((base, 0)));
        Level {
            base,
            elems: vec![elem],
            points: vec![base, image],
            back,
        }
    }

    pub fn base(&self) -> usize {
        self.base
    }

    /// Store indices of the elements of `X_i`.
    pub fn elems(&self) -> &[usize] {
        &self.elems
    }

    /// `Δ_i` in discovery order.
    pub fn delta(&self) -> &[usize] {
        &self.points
    }

    pub fn contains(&self, p: usize) -> bool {
        self.back.contains_key(&p)
    }

    /// Word over `X_i` (index order) mapping `β_i` to `p`.
    pub fn word(&self, p: usize) -> Option<Word> {
        let mut atoms = Vec::new();
        let mut cur = p;
        loop {
            match self.back.get(&cur)? {
                None => break,
                Some((prev, f)) => {
                    atoms.push(Atom::new(self.elems[*f]));
                    cur = *prev;
                }
            }
        }
        atoms.reverse();
        Some(Word::from_atoms(atoms))
    }

    fn append(&mut self, elem: usize, g: &Permutation) {
        let f = self.elems.len();
        self.elems.push(elem);
        let current = self.points.len();
        for k in 0..current {
            let p = self.points[k];
            let q = g.apply(p);
            let fresh = self.back.insert(q, Some((p, f))).is_none();
            debug_assert!(fresh, "appended element must be a nondegenerate extension");
            self.points.push(q);
        }
    }
}

/// What a sift did to the structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SiftKind {
    /// The (stripped) element was appended to `X_level`.
    Appended {
        level: usize,
    },
    /// A new level was created.
    NewBasePoint {
        level: usize,
    },
    SiftedToIdentity,
}

/// Factorization data: the sifted element equals
/// `s_1^{-1} s_2^{-1} ⋯ terminal ⋯ t_2 t_1`.
#[derive(Clone, Debug)]
pub struct SiftWitness {
    pub steps: Vec<(Word, Word)>,
    pub terminal: Permutation,
}

impl SiftWitness {
    pub fn reconstruct(&self, store: &ElementStore) -> Permutation {
        self.steps
            .iter()
            .rev()
            .fold(self.terminal.clone(), |g, (s, t)| {
                s.inverse().eval(store).then(&g).then(&t.eval(store))
            })
    }
}

#[derive(Clone, Debug)]
pub struct SiftOutcome {
    pub kind: SiftKind,
    pub witness: SiftWitness,
}

/// Base points with nonredundancy witnesses: `g_i` fixes `β_j` for `j < i`
/// and moves `β_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub entries: Vec<(usize, Permutation)>,
}

impl Certificate {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn base(&self) -> Vec<usize> {
        self.entries.iter().map(|(b, _)| *b).collect()
    }

    /// Checks the witness conditions (not group membership).
    pub fn validate(&self, degree: usize) -> Result<()> {
        for (i, (beta, g)) in self.entries.iter().enumerate() {
            if g.degree() != degree || *beta >= degree {
                return Err(Error::arg(format!(
                    "certificate entry {i} has wrong degree"
                )));
            }
            if g.fixes(*beta) {
                return Err(Error::arg(format!(
                    "certificate element {i} fixes its base point {beta}"
                )));
            }
            if let Some((j, (bj, _))) = self.entries[..i]
                .iter()
                .enumerate()
                .find(|(_, (bj, _))| !g.fixes(*bj))
            {
                return Err(Error::arg(format!(
                    "certificate element {i} moves earlier base point {bj} (entry {j})"
                )));
            }
        }
        Ok(())
    }
}

/// The deep-sifting structure together with its element store.
#[derive(Clone, Debug)]
pub struct SiftState {
    degree: usize,
    cap: usize,
    store: ElementStore,
    levels: Vec<Level>,
    sifts: usize,
}

impl SiftState {
    /// Starts a structure with `β_0 = base` and `X_0 = (seed)`.
    pub fn new(degree: usize, cap: usize, seed: Permutation, base: usize) -> Result<Self> {
        if cap == 0 {
            return Err(Error::arg("cap must be positive"));
        }
        if seed.degree() != degree || base >= degree {
            return Err(Error::arg("seed or base point out of range"));
        }
        if seed.fixes(base) {
            return Err(Error::arg(format!("seed fixes the base point {base}")));
        }
        let mut store = ElementStore::new(degree);
        let idx = store.push(seed)?;
        let level = Level::seeded(&store, base, idx);
        Ok(SiftState {
            degree,
            cap,
            store,
            levels: vec![level],
            sifts: 0,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn store(&self) -> &ElementStore {
        &self.store
    }

    pub(crate) fn store_mut(&mut self) -> &mut ElementStore {
        &mut self.store
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    /// Number of base points `ℓ`.
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Whether `ℓ` exceeds the cap.
    pub fn over_cap(&self) -> bool {
        self.levels.len() > self.cap
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    /// Number of deep_sift calls made so far.
    pub fn sift_count(&self) -> usize {
        self.sifts
    }

    /// `Σ_i |X_i|` over all levels.
    pub fn total_elems(&self) -> usize {
        self.levels.iter().map(|l| l.elems.len()).sum()
    }

    /// `Σ_{j ≥ level} |X_j|`, i.e. `|X_level*|`.
    pub fn elems_from(&self, level: usize) -> usize {
        self.levels.iter().skip(level).map(|l| l.elems.len()).sum()
    }

    /// Explicit elements of levels `level..ℓ`, deepest level first.
    pub fn deep_elements(&self, level: usize) -> Vec<&Permutation> {
        self.deep_list(level)
            .atoms()
            .iter()
            .map(|&a| self.store.resolve(a))
            .collect()
    }

    /// The concatenation `X_{ℓ-1}, …, X_level` as a cube list.
    pub fn deep_list(&self, level: usize) -> CubeList {
        let mut elems = Vec::new();
        for l in self.levels.iter().skip(level).rev() {
            elems.extend_from_slice(&l.elems);
        }
        CubeList::from_elems(&elems)
    }

    /// Images of `β_level` under the deep cube at that level, with words.
    pub fn level_deep_orbit(&self, level: usize) -> Result<CubeImage> {
        let lv = self
            .levels
            .get(level)
            .ok_or_else(|| Error::arg(format!("no level {level} (depth {})", self.depth())))?;
        deep_cube_orbit(&self.store, &self.deep_list(level), lv.base)
    }

    /// Takes `g_i` as the first element of every `X_i`.
    pub fn certificate(&self) -> Certificate {
        Certificate {
            entries: self
                .levels
                .iter()
                .map(|l| (l.base, self.store.get(l.elems[0]).unwrap().clone()))
                .collect(),
        }
    }

    pub(crate) fn replace_level(&mut self, idx: usize, level: Level) -> Level {
        std::mem::replace(&mut self.levels[idx], level)
    }

    /// Builds a single-element level for `β = base` from a stored element.
    pub(crate) fn make_level(&self, base: usize, elem: usize) -> Level {
        Level::seeded(&self.store, base, elem)
    }

    /// Deep-sifts `g`, updating the structure.
    pub fn sift(&mut self, g: &Permutation) -> Result<SiftOutcome> {
        if g.degree() != self.degree {
            return Err(Error::arg(format!(
                "element of degree {} sifted into structure of degree {}",
                g.degree(),
                self.degree
            )));
        }
        if self.over_cap() {
            return Err(Error::arg("base already exceeds the cap"));
        }
        self.sifts += 1;
        let mut g = g.clone();
        let mut steps = Vec::new();

        while let Some(i) = self.levels.iter().position(|l| !g.fixes(l.base)) {
            let level = &self.levels[i];
            // smallest λ in Δ^g ∩ Δ, and its preimage under g
            let mut hit: Option<(usize, usize)> = None;
            for &p in &level.points {
                let q = g.apply(p);
                if level.contains(q) && hit.is_none_or(|(lam, _)| q < lam) {
                    hit = Some((q, p));
                }
            }
            let Some((lambda, pre)) = hit else {
                let idx = self.store.push(g.clone())?;
                self.levels[i].append(idx, &g);
                return Ok(SiftOutcome {
                    kind: SiftKind::Appended { level: i },
                    witness: SiftWitness { steps, terminal: g },
                });
            };
            let s = level.word(pre).expect("preimage lies in delta");
            let t = level.word(lambda).expect("lambda lies in delta");
            let t_inv = t.inverse();
            let images = (0..self.degree)
                .map(|p| t_inv.apply(&self.store, g.apply(s.apply(&self.store, p))))
                .collect();
            g = Permutation::from_images(images)?;
            debug_assert!(g.fixes(self.levels[i].base));
            steps.push((s, t));
        }

        if g.is_identity() {
            return Ok(SiftOutcome {
                kind: SiftKind::SiftedToIdentity,
                witness: SiftWitness { steps, terminal: g },
            });
        }
        let base = g.first_moved().expect("non-identity moves a point");
        let idx = self.store.push(g.clone())?;
        let level = Level::seeded(&self.store, base, idx);
        self.levels.push(level);
        Ok(SiftOutcome {
            kind: SiftKind::NewBasePoint {
                level: self.levels.len() - 1,
            },
            witness: SiftWitness { steps, terminal: g },
        })
    }

    /// Checks every structural invariant; returns a description of the
    /// first violation.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let max_x = ceil_log2(self.degree);
        if self.levels.is_empty() {
            return Err("no levels".into());
        }
        if self.levels.len() > self.cap + 1 {
            return Err(format!(
                "{} levels exceed cap {} + 1",
                self.levels.len(),
                self.cap
            ));
        }
        for (i, l) in self.levels.iter().enumerate() {
            if self.levels[..i].iter().any(|e| e.base == l.base) {
                return Err(format!("base point {} repeated", l.base));
            }
            if l.elems.is_empty() {
                return Err(format!("level {i} has empty X"));
            }
            if l.elems.len() > max_x {
                return Err(format!(
                    "|X_{i}| = {} > ceil(log2 n) = {max_x}",
                    l.elems.len()
                ));
            }
            if l.points.len() != 1 << l.elems.len() || l.back.len() != l.points.len() {
                return Err(format!(
                    "|Δ_{i}| = {} but |X_{i}| = {}",
                    l.points.len(),
                    l.elems.len()
                ));
            }
            if !l.contains(l.base) {
                return Err(format!("β_{i} not in Δ_{i}"));
            }
            for &p in &l.points {
                let w = l
                    .word(p)
                    .ok_or_else(|| format!("no witness for {p} at level {i}"))?;
                if w.len() > l.elems.len() || w.apply(&self.store, l.base) != p {
                    return Err(format!("bad witness word for {p} at level {i}"));
                }
            }
            for &e in &l.elems {
                let x = self.store.get(e).ok_or("dangling element")?;
                if x.fixes(l.base) {
                    return Err(format!("element of X_{i} fixes β_{i}"));
                }
                if let Some(b) = self.levels[..i].iter().find(|e| !x.fixes(e.base)) {
                    return Err(format!(
                        "element of X_{i} moves earlier base point {}",
                        b.base
                    ));
                }
            }
        }
        Ok(())
    }

    /// Serializable snapshot of the levels.
    pub fn dump(&self) -> SiftDump {
        SiftDump {
            degree: self.degree,
            cap: self.cap,
            sifts: self.sifts,
            levels: self
                .levels
                .iter()
                .map(|l| LevelDump {
                    base: l.base,
                    elements: l
                        .elems
                        .iter()
                        .map(|&e| self.store.get(e).unwrap().clone())
                        .collect(),
                    delta: l.points.clone(),
                })
                .collect(),
        }
    }
}

/// JSON-friendly view of a [`SiftState`].
#[derive(Clone, Debug, Serialize)]
pub struct SiftDump {
    pub degree: usize,
    pub cap: usize,
    pub sifts: usize,
    pub levels: Vec<LevelDump>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelDump {
    pub base: usize,
    pub elements: Vec<Permutation>,
    pub delta: Vec<usize>,
}
