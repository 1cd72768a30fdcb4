//! Words over stored permutations and cube images.
//!
//! A cube `C(X)` over a list `X = (x_1, …, x_j)` is the set of subset
//! products `x_1^e_1 ⋯ x_j^e_j` with `e_t ∈ {0, 1}`. Its point images are
//! computed without enumerating the `2^j` products: `Δ_t = Δ_{t-1} ∪ Δ_{t-1}^{x_t}`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::{Permutation, PointAction};

/// Append-only store of explicit permutations, each kept with its inverse.
#[derive(Clone, Debug)]
pub struct ElementStore {
    degree: usize,
    elems: Vec<Permutation>,
    inverses: Vec<Permutation>,
}

impl ElementStore {
    pub fn new(degree: usize) -> Self {
        ElementStore {
            degree,
            elems: Vec::new(),
            inverses: Vec::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Stores `g` and returns its index.
    pub fn push(&mut self, g: Permutation) -> Result<usize> {
        if g.degree() != self.degree {
            return Err(Error::arg(format!(
                "element of degree {} pushed into store of degree {}",
                g.degree(),
                self.degree
            )));
        }
        self.inverses.push(g.inverse());
        self.elems.push(g);
        Ok(self.elems.len() - 1)
    }

    pub fn get(&self, idx: usize) -> Option<&Permutation> {
        self.elems.get(idx)
    }

    /// The explicit permutation an atom stands for.
    pub fn resolve(&self, atom: Atom) -> &Permutation {
        if atom.inverted {
            &self.inverses[atom.elem]
        } else {
            &self.elems[atom.elem]
        }
    }

    #[inline]
    pub fn apply_atom(&self, atom: Atom, p: usize) -> usize {
        self.resolve(atom).apply(p)
    }

    fn check(&self, atom: Atom) -> Result<()> {
        if atom.elem < self.elems.len() {
            Ok(())
        } else {
            Err(Error::internal(format!(
                "dangling element reference {} (store holds {})",
                atom.elem,
                self.elems.len()
            )))
        }
    }
}

/// A stored element, possibly inverted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Atom {
    pub elem: usize,
    pub inverted: bool,
}

impl Atom {
    pub fn new(elem: usize) -> Self {
        Atom {
            elem,
            inverted: false,
        }
    }

    pub fn inv(self) -> Self {
        Atom {
            elem: self.elem,
            inverted: !self.inverted,
        }
    }
}

/// A product of atoms, read left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Word {
    atoms: Vec<Atom>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn from_atoms(atoms: Vec<Atom>) -> Self {
        Word { atoms }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn push(&mut self, atom: Atom) {
        self.atoms.push(atom);
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut atoms = Vec::with_capacity(self.len() + other.len());
        atoms.extend_from_slice(&self.atoms);
        atoms.extend_from_slice(&other.atoms);
        Word { atoms }
    }

    pub fn inverse(&self) -> Word {
        Word {
            atoms: self.atoms.iter().rev().map(|a| a.inv()).collect(),
        }
    }

    /// Image of `p`. Panics on dangling references; see [`Word::try_apply`].
    #[inline]
    pub fn apply(&self, store: &ElementStore, p: usize) -> usize {
        self.atoms.iter().fold(p, |q, &a| store.apply_atom(a, q))
    }

    pub fn try_apply(&self, store: &ElementStore, p: usize) -> Result<usize> {
        for &a in &self.atoms {
            store.check(a)?;
        }
        if p >= store.degree() {
            return Err(Error::arg(format!("point {p} out of range")));
        }
        Ok(self.apply(store, p))
    }

    /// The explicit permutation, computed pointwise.
    pub fn eval(&self, store: &ElementStore) -> Permutation {
        let images = (0..store.degree()).map(|p| self.apply(store, p)).collect();
        Permutation::from_images(images).expect("word evaluates to a permutation")
    }

    pub fn try_eval(&self, store: &ElementStore) -> Result<Permutation> {
        for &a in &self.atoms {
            store.check(a)?;
        }
        Ok(self.eval(store))
    }

    /// Binds the word to a store so it can be used as a [`PointAction`].
    pub fn bind<'a>(&'a self, store: &'a ElementStore) -> BoundWord<'a> {
        BoundWord { word: self, store }
    }
}

/// A word together with the store it refers to.
#[derive(Clone, Copy)]
pub struct BoundWord<'a> {
    word: &'a Word,
    store: &'a ElementStore,
}

impl PointAction for BoundWord<'_> {
    fn degree(&self) -> usize {
        self.store.degree()
    }

    fn act(&self, p: usize) -> usize {
        self.word.apply(self.store, p)
    }
}

/// The ordered factor list `X` of a cube `C(X)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CubeList(Vec<Atom>);

impl CubeList {
    pub fn new(atoms: Vec<Atom>) -> Self {
        CubeList(atoms)
    }

    pub fn from_elems(elems: &[usize]) -> Self {
        CubeList(elems.iter().map(|&e| Atom::new(e)).collect())
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `X^{-1}`: the reverse of the list of inverses, so `C(X)^{-1} = C(X^{-1})`.
    pub fn inverse(&self) -> CubeList {
        CubeList(self.0.iter().rev().map(|a| a.inv()).collect())
    }

    pub fn concat(&self, other: &CubeList) -> CubeList {
        let mut atoms = self.0.clone();
        atoms.extend_from_slice(&other.0);
        CubeList(atoms)
    }
}

/// `X^{-1}` as a fresh list.
pub fn cube_inverse_list(list: &CubeList) -> CubeList {
    list.inverse()
}

const ABSENT: u32 = u32::MAX;
const SOURCE: u32 = u32::MAX - 1;

/// The point set `Δ^{C(X)}` with a witness for every point.
///
/// Witnesses are kept as back pointers (predecessor point, factor index);
/// [`CubeImage::word`] flattens them into a word over a subsequence of `X`.
#[derive(Clone, Debug)]
pub struct CubeImage {
    factors: CubeList,
    points: Vec<usize>,
    prev: Vec<u32>,
    factor: Vec<u32>,
}

impl CubeImage {
    pub fn factors(&self) -> &CubeList {
        &self.factors
    }

    /// Points in discovery order; the seed set comes first.
    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    #[inline]
    pub fn contains(&self, p: usize) -> bool {
        self.prev.get(p).is_some_and(|&b| b != ABSENT)
    }

    /// `(source, word)` with `word` mapping `source ∈ Δ` to `gamma`.
    pub fn witness(&self, gamma: usize) -> Option<(usize, Word)> {
        if !self.contains(gamma) {
            return None;
        }
        let mut atoms = Vec::new();
        let mut p = gamma;
        while self.prev[p] != SOURCE {
            atoms.push(self.factors.0[self.factor[p] as usize]);
            p = self.prev[p] as usize;
        }
        atoms.reverse();
        Some((p, Word { atoms }))
    }

    pub fn word(&self, gamma: usize) -> Option<Word> {
        self.witness(gamma).map(|(_, w)| w)
    }

    /// Number of atoms in the witness word for `gamma`.
    pub fn word_len(&self, gamma: usize) -> Option<usize> {
        if !self.contains(gamma) {
            return None;
        }
        let mut len = 0;
        let mut p = gamma;
        while self.prev[p] != SOURCE {
            len += 1;
            p = self.prev[p] as usize;
        }
        Some(len)
    }
}

/// Computes `Δ^{C(X)}` for a nonempty seed set `Δ`.
///
/// Factors are processed in list order; a new point keeps the first
/// preimage that reached it.
pub fn cube_set_image(store: &ElementStore, list: &CubeList, seed: &[usize]) -> Result<CubeImage> {
    if seed.is_empty() {
        return Err(Error::arg("cube image of an empty set"));
    }
    let n = store.degree();
    for &a in list.atoms() {
        store.check(a)?;
    }
    let mut prev = vec![ABSENT; n];
    let mut factor = vec![0u32; n];
    let mut points = Vec::with_capacity(seed.len());
    for &p in seed {
        if p >= n {
            return Err(Error::arg(format!("point {p} out of range for degree {n}")));
        }
        if prev[p] == ABSENT {
            prev[p] = SOURCE;
            points.push(p);
        }
    }
    for (t, &atom) in list.atoms().iter().enumerate() {
        let g = store.resolve(atom);
        let current = points.len();
        for k in 0..current {
            let p = points[k];
            let q = g.apply(p);
            if prev[q] == ABSENT {
                prev[q] = p as u32;
                factor[q] = t as u32;
                points.push(q);
            }
        }
    }
    Ok(CubeImage {
        factors: list.clone(),
        points,
        prev,
        factor,
    })
}

/// Images of `beta` under the deep cube `C(X*)^{-1} C(X*)`.
///
/// Each witness word has length at most `2|X*|`.
pub fn deep_cube_orbit(store: &ElementStore, xstar: &CubeList, beta: usize) -> Result<CubeImage> {
    let list = xstar.inverse().concat(xstar);
    cube_set_image(store, &list, &[beta])
}

/// Whether `Δ^g ∩ Δ = ∅`, i.e. whether appending `g` doubles the tracked set.
pub fn is_nondegenerate_extension(
    delta: &[usize],
    contains: impl Fn(usize) -> bool,
    g: &impl PointAction,
) -> bool {
    delta.iter().all(|&p| !contains(g.act(p)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4() -> Permutation {
        Permutation::from_cycles(4, &[vec![0, 1, 2, 3]]).unwrap()
    }

    fn store_with(elems: &[Permutation]) -> ElementStore {
        let mut store = ElementStore::new(elems[0].degree());
        for g in elems {
            store.push(g.clone()).unwrap();
        }
        store
    }

    #[test]
    fn word_apply_examples() {
        let store = store_with(&[c4()]);
        assert_eq!(Word::empty().apply(&store, 3), 3);
        let xx = Word::from_atoms(vec![Atom::new(0), Atom::new(0)]);
        assert_eq!(xx.apply(&store, 0), 2);
        let xi = Word::from_atoms(vec![Atom::new(0).inv()]);
        assert_eq!(xi.apply(&store, 0), 3);
    }

    #[test]
    fn word_eval_examples() {
        let store = store_with(&[c4()]);
        assert!(Word::empty().eval(&store).is_identity());
        assert_eq!(Word::from_atoms(vec![Atom::new(0)]).eval(&store), c4());
        let w = Word::from_atoms(vec![Atom::new(0), Atom::new(0).inv()]);
        assert!(w.eval(&store).is_identity());
    }

    #[test]
    fn dangling_reference_is_internal_error() {
        let store = store_with(&[c4()]);
        let w = Word::from_atoms(vec![Atom::new(3)]);
        assert!(matches!(w.try_eval(&store), Err(Error::Internal(_))));
        assert!(matches!(w.try_apply(&store, 0), Err(Error::Internal(_))));
    }

    #[test]
    fn cube_set_image_examples() {
        let s = Permutation::from_cycles(4, &[vec![0, 2], vec![1, 3]]).unwrap();
        let store = store_with(&[c4(), s]);

        let img = cube_set_image(&store, &CubeList::default(), &[3]).unwrap();
        assert_eq!(img.points(), &[3]);
        assert_eq!(img.witness(3), Some((3, Word::empty())));

        let img = cube_set_image(&store, &CubeList::from_elems(&[0]), &[0]).unwrap();
        assert_eq!(img.points(), &[0, 1]);
        assert_eq!(
            img.witness(1),
            Some((0, Word::from_atoms(vec![Atom::new(0)])))
        );

        let img = cube_set_image(&store, &CubeList::from_elems(&[0, 1]), &[0]).unwrap();
        let mut pts = img.points().to_vec();
        pts.sort();
        assert_eq!(pts, vec![0, 1, 2, 3]);
        for &g in img.points() {
            let (src, w) = img.witness(g).unwrap();
            assert_eq!(w.apply(&store, src), g);
            assert!(w.len() <= 2);
        }

        assert!(cube_set_image(&store, &CubeList::default(), &[]).is_err());
    }

    #[test]
    fn cube_inverse_list_examples() {
        assert!(cube_inverse_list(&CubeList::default()).is_empty());
        let l = CubeList::from_elems(&[0, 1]);
        assert_eq!(
            cube_inverse_list(&l).atoms(),
            &[Atom::new(1).inv(), Atom::new(0).inv()]
        );
        let inv = Permutation::from_cycles(4, &[vec![1, 3]]).unwrap();
        let store = store_with(&[inv]);
        let li = cube_inverse_list(&CubeList::from_elems(&[0]));
        let w = Word::from_atoms(li.atoms().to_vec());
        assert_eq!(w.eval(&store), store.get(0).unwrap().clone());
    }

    #[test]
    fn deep_cube_orbit_examples() {
        let t = Permutation::from_cycles(4, &[vec![0, 1]]).unwrap();
        let store = store_with(&[c4(), t]);

        let img = deep_cube_orbit(&store, &CubeList::default(), 0).unwrap();
        assert_eq!(img.points(), &[0]);
        assert_eq!(img.word(0), Some(Word::empty()));

        let img = deep_cube_orbit(&store, &CubeList::from_elems(&[1]), 0).unwrap();
        let mut pts = img.points().to_vec();
        pts.sort();
        assert_eq!(pts, vec![0, 1]);

        // {e, x, x^-1, x^-1 x} applied to 0
        let img = deep_cube_orbit(&store, &CubeList::from_elems(&[0]), 0).unwrap();
        let mut pts = img.points().to_vec();
        pts.sort();
        assert_eq!(pts, vec![0, 1, 3]);
        for &g in img.points() {
            let w = img.word(g).unwrap();
            assert_eq!(w.apply(&store, 0), g);
            assert!(w.len() <= 2);
        }
    }

    #[test]
    fn nondegenerate_extension_examples() {
        let delta = [0usize, 1];
        let inside = |p: usize| p == 0 || p == 1;
        let s = Permutation::from_cycles(4, &[vec![0, 2], vec![1, 3]]).unwrap();
        let t = Permutation::from_cycles(4, &[vec![0, 1]]).unwrap();
        assert!(is_nondegenerate_extension(&delta, inside, &s));
        assert!(!is_nondegenerate_extension(&delta, inside, &t));
        assert!(!is_nondegenerate_extension(
            &delta,
            inside,
            &Permutation::identity(4)
        ));
    }
}
