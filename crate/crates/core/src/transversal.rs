//! Capped transversal construction driven by deep sifting.
//!
//! The orbit `Ω_0` of `α` under the deep cube at level 0 is grown until it
//! is closed under the generators: whenever a generator `s` takes a point
//! `λ ∈ Ω_0` outside, `r_λ s` is sifted, which is guaranteed to enlarge the
//! deep cube so that `λ^s` joins `Ω_0`. The run stops early once the
//! structure has more than `L` base points.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::perm::{GeneratorSet, Permutation};
use crate::sift::{Certificate, SiftKind, SiftOutcome, SiftState};
use crate::words::{CubeImage, Word};

/// A transversal for `G : G_α`, stored as deep-cube words.
#[derive(Clone, Debug)]
pub struct Transversal {
    image: CubeImage,
}

impl Transversal {
    /// `α^G` in discovery order; `α` first.
    pub fn orbit(&self) -> &[usize] {
        self.image.points()
    }

    pub fn contains(&self, p: usize) -> bool {
        self.image.contains(p)
    }

    /// `r_λ`: a word mapping `α` to `λ`.
    pub fn word(&self, lambda: usize) -> Option<Word> {
        self.image.word(lambda)
    }

    pub fn word_len(&self, lambda: usize) -> Option<usize> {
        self.image.word_len(lambda)
    }

    pub fn max_word_len(&self) -> usize {
        self.orbit()
            .iter()
            .filter_map(|&p| self.image.word_len(p))
            .max()
            .unwrap_or(0)
    }

    pub fn image(&self) -> &CubeImage {
        &self.image
    }
}

#[derive(Clone, Debug)]
pub enum TransversalResult {
    Transversal(Transversal),
    /// `ℓ` reached `L + 1`; the certificate has `L + 1` entries.
    PartialBase(Certificate),
}

impl TransversalResult {
    pub fn transversal(&self) -> Option<&Transversal> {
        match self {
            TransversalResult::Transversal(t) => Some(t),
            TransversalResult::PartialBase(_) => None,
        }
    }
}

/// Builds a transversal for `G : G_α`, or a partial base of size `L + 1`.
pub fn build_point_transversal(
    gens: &GeneratorSet,
    alpha: usize,
    cap: usize,
) -> Result<(TransversalResult, SiftState)> {
    build_point_transversal_traced(gens, alpha, cap, |_, _| {})
}

/// As [`build_point_transversal`], calling `observe` after every sift.
pub fn build_point_transversal_traced(
    gens: &GeneratorSet,
    alpha: usize,
    cap: usize,
    mut observe: impl FnMut(&SiftState, &SiftOutcome),
) -> Result<(TransversalResult, SiftState)> {
    if alpha >= gens.degree() {
        return Err(Error::arg(format!("point {alpha} out of range")));
    }
    let seed = gens
        .generators()
        .iter()
        .find(|g| !g.fixes(alpha))
        .ok_or_else(|| Error::arg(format!("point {alpha} is fixed by every generator")))?;
    let mut state = SiftState::new(gens.degree(), cap, seed.clone(), alpha)?;
    let gen_refs: Vec<&Permutation> = gens.generators().iter().collect();
    let result = close_orbit(&mut state, &gen_refs, &mut observe)?;
    Ok((result, state))
}

/// Transversal for `K : K_α` with `K = ⟨H, r_λ⟩` and `H = ⟨X_1*⟩`.
///
/// Level 0 is temporarily replaced by the single element `r_λ`; appends to
/// deeper levels persist, appends to the temporary level are dropped. The
/// returned words refer to the shared store and stay valid.
pub fn build_scoped_transversal(
    state: &mut SiftState,
    r_lambda: &Word,
    alpha: usize,
) -> Result<TransversalResult> {
    if state.levels()[0].base() != alpha {
        return Err(Error::arg(format!("first base point is not {alpha}")));
    }
    if state.over_cap() {
        return Ok(TransversalResult::PartialBase(state.certificate()));
    }
    let r = r_lambda.try_eval(state.store())?;
    if r.fixes(alpha) {
        return Err(Error::arg(format!("r_lambda fixes {alpha}")));
    }
    let mut gens: Vec<Permutation> = vec![r.clone()];
    gens.extend(state.deep_elements(1).into_iter().cloned());
    let idx = state.store_mut().push(r)?;
    let overlay = state.make_level(alpha, idx);
    let saved = state.replace_level(0, overlay);

    let gen_refs: Vec<&Permutation> = gens.iter().collect();
    let result = close_orbit(state, &gen_refs, &mut |_, _| {});
    state.replace_level(0, saved);
    match result? {
        TransversalResult::PartialBase(_) => {
            Ok(TransversalResult::PartialBase(state.certificate()))
        }
        t => Ok(t),
    }
}

fn close_orbit(
    state: &mut SiftState,
    gens: &[&Permutation],
    observe: &mut dyn FnMut(&SiftState, &SiftOutcome),
) -> Result<TransversalResult> {
    if state.over_cap() {
        return Ok(TransversalResult::PartialBase(state.certificate()));
    }
    let n = state.degree();
    let mut omega = state.level_deep_orbit(0)?;
    let mut queued = vec![false; n];
    let mut queue = VecDeque::new();
    let mut enqueue = |omega: &CubeImage, queue: &mut VecDeque<(usize, usize)>| {
        for &p in omega.points() {
            if !std::mem::replace(&mut queued[p], true) {
                queue.extend((0..gens.len()).map(|s| (p, s)));
            }
        }
    };
    enqueue(&omega, &mut queue);

    while let Some((lambda, s)) = queue.pop_front() {
        let target = gens[s].apply(lambda);
        if omega.contains(target) {
            continue;
        }
        let r = omega.word(lambda).expect("queued points lie in the orbit");
        let store = state.store();
        let images = (0..n).map(|p| gens[s].apply(r.apply(store, p))).collect();
        let g = Permutation::from_images(images)?;
        let before = state.total_elems();
        let outcome = state.sift(&g)?;
        observe(state, &outcome);
        if outcome.kind == SiftKind::SiftedToIdentity || state.total_elems() != before + 1 {
            return Err(Error::internal(
                "sift of an orbit-extending element did not grow the structure",
            ));
        }
        if state.over_cap() {
            return Ok(TransversalResult::PartialBase(state.certificate()));
        }
        omega = state.level_deep_orbit(0)?;
        if !omega.contains(target) {
            return Err(Error::internal(format!(
                "point {target} missing from the deep orbit after sifting"
            )));
        }
        enqueue(&omega, &mut queue);
    }
    Ok(TransversalResult::Transversal(Transversal { image: omega }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::perm_orbit;

    fn cyc(n: usize, cycles: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(n, cycles).unwrap()
    }

    fn sorted(v: &[usize]) -> Vec<usize> {
        let mut v = v.to_vec();
        v.sort();
        v
    }

    #[test]
    fn cyclic_four() {
        let gens = GeneratorSet::new(4, vec![cyc(4, &[&[0, 1, 2, 3]])]).unwrap();
        let (res, state) = build_point_transversal(&gens, 0, 4).unwrap();
        let t = res.transversal().expect("transversal");
        assert_eq!(sorted(t.orbit()), vec![0, 1, 2, 3]);
        assert!(state.total_elems() <= 2);
        for &p in t.orbit() {
            assert_eq!(t.word(p).unwrap().apply(state.store(), 0), p);
            assert!(t.word_len(p).unwrap() <= 2 * state.total_elems());
        }
        state.validate().unwrap();
    }

    #[test]
    fn s3_partial_base_with_cap_one() {
        let gens = GeneratorSet::new(3, vec![cyc(3, &[&[0, 1]]), cyc(3, &[&[1, 2]])]).unwrap();
        let (res, state) = build_point_transversal(&gens, 0, 1).unwrap();
        let TransversalResult::PartialBase(cert) = res else {
            panic!("expected partial base")
        };
        assert_eq!(
            cert.entries,
            vec![(0, cyc(3, &[&[0, 1]])), (1, cyc(3, &[&[1, 2]]))]
        );
        cert.validate(3).unwrap();
        assert_eq!(state.depth(), 2);
    }

    #[test]
    fn klein_four_regular() {
        let gens = GeneratorSet::new(
            4,
            vec![cyc(4, &[&[0, 1], &[2, 3]]), cyc(4, &[&[0, 2], &[1, 3]])],
        )
        .unwrap();
        let (res, state) = build_point_transversal(&gens, 0, 1).unwrap();
        let t = res.transversal().expect("transversal");
        assert_eq!(state.depth(), 1);
        assert_eq!(sorted(t.orbit()), vec![0, 1, 2, 3]);
    }

    #[test]
    fn intransitive_orbit_is_fine() {
        let gens = GeneratorSet::new(5, vec![cyc(5, &[&[0, 1, 2]])]).unwrap();
        let (res, _) = build_point_transversal(&gens, 1, 5).unwrap();
        assert_eq!(sorted(res.transversal().unwrap().orbit()), vec![0, 1, 2]);
        assert!(build_point_transversal(&gens, 4, 5).is_err());
    }

    #[test]
    fn scoped_examples() {
        let c4 = cyc(4, &[&[0, 1, 2, 3]]);
        let gens = GeneratorSet::new(4, vec![c4.clone()]).unwrap();
        let (_, mut state) = build_point_transversal(&gens, 0, 4).unwrap();
        let x0 = state.levels()[0].elems()[0];
        let r = Word::from_atoms(vec![crate::words::Atom::new(x0)]);
        let before = state.levels()[0].elems().to_vec();
        let res = build_scoped_transversal(&mut state, &r, 0).unwrap();
        let t = res.transversal().unwrap();
        assert_eq!(sorted(t.orbit()), vec![0, 1, 2, 3]);
        assert_eq!(state.levels()[0].elems(), &before[..]);
        for &p in t.orbit() {
            assert_eq!(t.word(p).unwrap().apply(state.store(), 0), p);
        }
        state.validate().unwrap();

        let inv = cyc(4, &[&[0, 1]]);
        let mut state = SiftState::new(4, 3, inv.clone(), 0).unwrap();
        let r = Word::from_atoms(vec![crate::words::Atom::new(0)]);
        let res = build_scoped_transversal(&mut state, &r, 0).unwrap();
        assert_eq!(sorted(res.transversal().unwrap().orbit()), vec![0, 1]);
        assert!(build_scoped_transversal(&mut state, &Word::empty(), 0).is_err());
    }

    #[test]
    fn scoped_respects_cap() {
        let gens = GeneratorSet::new(3, vec![cyc(3, &[&[0, 1]]), cyc(3, &[&[1, 2]])]).unwrap();
        let (_, mut state) = build_point_transversal(&gens, 0, 1).unwrap();
        assert!(state.over_cap());
        let r = Word::from_atoms(vec![crate::words::Atom::new(0)]);
        assert!(matches!(
            build_scoped_transversal(&mut state, &r, 0).unwrap(),
            TransversalResult::PartialBase(_)
        ));
    }

    #[test]
    fn orbit_matches_plain_orbit() {
        let gens = GeneratorSet::new(
            6,
            vec![cyc(6, &[&[0, 1, 2, 3, 4, 5]]), cyc(6, &[&[1, 5], &[2, 4]])],
        )
        .unwrap();
        let (res, _) = build_point_transversal(&gens, 0, 6).unwrap();
        assert_eq!(
            sorted(res.transversal().unwrap().orbit()),
            sorted(&perm_orbit(gens.generators(), 0))
        );
    }
}
