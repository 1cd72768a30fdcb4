//! Primitivity drivers.
//!
//! [`ss_primitivity`] computes a transversal for `G : G_α` by deep sifting,
//! then tests candidate blocks `α^{⟨H, r_λ⟩}` where `H = ⟨X_1*⟩` is the
//! subgroup of `G_α` held in the deeper levels of the sift structure. A
//! failed candidate yields an element of `G_α \ H`, which is sifted to
//! enlarge `H`. Any of these steps may push the base past the cap `L`, in
//! which case the run ends with a certified partial base instead.
//!
//! The capped drivers then try to turn such a certificate into a block
//! system through minimal blocks of `{β_i, β_i^{g_i}}`.

use serde::Serialize;

use crate::blocks::{
    blockness_test, expand_block, minimal_block_unchecked, BlockSystem, BlockTest,
};
use crate::error::{Error, Result};
use crate::perm::{orbit, GeneratorSet, Permutation, PointAction};
use crate::sift::{Certificate, SiftState};
use crate::transversal::{build_point_transversal, build_scoped_transversal, TransversalResult};

#[derive(Clone, Debug)]
pub enum VerdictKind {
    Primitive,
    Blocks(BlockSystem),
    PartialBase(Certificate),
    /// Every primitive action on a nontrivial partition is large.
    AllPrimitiveActionsLarge,
    /// Every primitive action on a nontrivial partition is large with
    /// parameters `kd ≤ 2`, `md > 3 n^{1/3}` (parameters not computed).
    AllLargeWithParams,
}

impl VerdictKind {
    pub fn name(&self) -> &'static str {
        match self {
            VerdictKind::Primitive => "primitive",
            VerdictKind::Blocks(_) => "blocks",
            VerdictKind::PartialBase(_) => "partial_base",
            VerdictKind::AllPrimitiveActionsLarge => "all_primitive_actions_large",
            VerdictKind::AllLargeWithParams => "all_large_with_params",
        }
    }

    pub fn is_escape(&self) -> bool {
        matches!(
            self,
            VerdictKind::PartialBase(_)
                | VerdictKind::AllPrimitiveActionsLarge
                | VerdictKind::AllLargeWithParams
        )
    }
}

/// One enlargement of `H`: `Σ_{i≥1} |X_i|` just before and after the sift.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HUpdate {
    pub before: usize,
    pub after: usize,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Diagnostics {
    pub cap: usize,
    pub sifts: usize,
    pub h_updates: usize,
    pub candidates_tested: usize,
    pub sum_xi: usize,
    pub base_len: usize,
    pub h_update_log: Vec<HUpdate>,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub diagnostics: Diagnostics,
}

impl Verdict {
    fn new(kind: VerdictKind, diagnostics: Diagnostics) -> Self {
        Verdict { kind, diagnostics }
    }

    pub fn block_system(&self) -> Option<&BlockSystem> {
        match &self.kind {
            VerdictKind::Blocks(bs) => Some(bs),
            _ => None,
        }
    }
}

fn check_input(gens: &GeneratorSet, alpha: usize) -> Result<()> {
    if alpha >= gens.degree() {
        return Err(Error::arg(format!("point {alpha} out of range")));
    }
    gens.require_transitive()
}

/// Capped primitivity test starting from `α`.
pub fn ss_primitivity(gens: &GeneratorSet, alpha: usize, cap: usize) -> Result<Verdict> {
    check_input(gens, alpha)?;
    if cap == 0 {
        return Err(Error::arg("cap must be positive"));
    }
    let mut diag = Diagnostics {
        cap,
        ..Diagnostics::default()
    };
    if gens.degree() <= 2 {
        return Ok(Verdict::new(VerdictKind::Primitive, diag));
    }
    let (phase1, mut state) = build_point_transversal(gens, alpha, cap)?;
    let finish = |state: &SiftState, mut diag: Diagnostics, kind| {
        diag.sifts = state.sift_count();
        diag.sum_xi = state.total_elems();
        diag.base_len = state.depth();
        Ok(Verdict::new(kind, diag))
    };
    let transversal = match phase1 {
        TransversalResult::PartialBase(cert) => {
            return finish(&state, diag, VerdictKind::PartialBase(cert))
        }
        TransversalResult::Transversal(t) => t,
    };
    let n = gens.degree();

    'restart: loop {
        let h_gens: Vec<Permutation> = state.deep_elements(1).into_iter().cloned().collect();
        for lambda in candidates(n, &h_gens, alpha) {
            let r = transversal
                .word(lambda)
                .expect("transitive group: every point has r_lambda");
            let delta = {
                let bound = r.bind(state.store());
                let mut actions: Vec<&dyn PointAction> =
                    h_gens.iter().map(|h| h as &dyn PointAction).collect();
                actions.push(&bound);
                orbit(&actions, alpha)
            };
            if delta.len() == n {
                continue;
            }
            diag.candidates_tested += 1;
            let w = match blockness_test(gens, &delta, alpha)? {
                BlockTest::IsBlock(bs) => return finish(&state, diag, VerdictKind::Blocks(bs)),
                BlockTest::NotBlock(w) => w,
            };
            let scoped = match build_scoped_transversal(&mut state, &r, alpha)? {
                TransversalResult::PartialBase(cert) => {
                    return finish(&state, diag, VerdictKind::PartialBase(cert))
                }
                TransversalResult::Transversal(t) => t,
            };
            let (s, t) = match (scoped.word(w.beta), scoped.word(w.gamma)) {
                (Some(s), Some(t)) => (s, t),
                _ => {
                    return Err(Error::internal(
                        "block witness points outside the scoped orbit",
                    ))
                }
            };
            let store = state.store();
            let g = s.eval(store).then(&w.g1).then(&t.eval(store).inverse());
            if !g.fixes(alpha) {
                return Err(Error::internal(
                    "element built from a block witness moves alpha",
                ));
            }
            let before = state.elems_from(1);
            state.sift(&g)?;
            let after = state.elems_from(1);
            if after <= before {
                return Err(Error::internal(
                    "H-update did not enlarge the deeper levels",
                ));
            }
            diag.h_updates += 1;
            diag.h_update_log.push(HUpdate { before, after });
            if state.over_cap() {
                let cert = state.certificate();
                return finish(&state, diag, VerdictKind::PartialBase(cert));
            }
            continue 'restart;
        }
        return finish(&state, diag, VerdictKind::Primitive);
    }
}

/// Representatives of the `H`-orbits other than `{α}`, ordered by
/// (orbit size, smallest point).
fn candidates(n: usize, h_gens: &[Permutation], alpha: usize) -> Vec<usize> {
    let mut seen = vec![false; n];
    let mut reps = Vec::new();
    let mut stack = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        stack.push(start);
        let mut size = 0;
        let mut has_alpha = false;
        while let Some(p) = stack.pop() {
            size += 1;
            has_alpha |= p == alpha;
            for h in h_gens {
                let q = h.apply(p);
                if !seen[q] {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
        if !has_alpha {
            reps.push((size, start));
        }
    }
    reps.sort_unstable();
    reps.into_iter().map(|(_, p)| p).collect()
}

/// Looks for a proper minimal block through `{β_i, β_i^{g_i}}`.
pub fn find_blocks_from_certificate(
    gens: &GeneratorSet,
    cert: &Certificate,
) -> Result<Option<BlockSystem>> {
    cert.validate(gens.degree())?;
    gens.require_transitive()?;
    let n = gens.degree();
    for (beta, g) in &cert.entries {
        let block = minimal_block_unchecked(gens, &[*beta, g.apply(*beta)]);
        if block.len() < n {
            return expand_block(gens, &block).map(Some);
        }
    }
    Ok(None)
}

/// `max(1, ⌈5 log₂ n⌉)`.
pub fn main_cap(n: usize) -> usize {
    (5.0 * (n as f64).log2()).ceil().max(1.0) as usize
}

/// `max(1, ⌈(9/2) n^{1/3}⌉)`.
pub fn five_thirds_cap(n: usize) -> usize {
    (4.5 * (n as f64).cbrt()).ceil().max(1.0) as usize
}

fn capped_driver(gens: &GeneratorSet, cap: usize, escape: VerdictKind) -> Result<Verdict> {
    gens.require_transitive()?;
    if gens.degree() <= 2 {
        return Ok(Verdict::new(
            VerdictKind::Primitive,
            Diagnostics {
                cap,
                ..Diagnostics::default()
            },
        ));
    }
    let v = ss_primitivity(gens, 0, cap)?;
    match v.kind {
        VerdictKind::PartialBase(ref cert) => {
            let kind = match find_blocks_from_certificate(gens, cert)? {
                Some(bs) => VerdictKind::Blocks(bs),
                None => escape,
            };
            Ok(Verdict::new(kind, v.diagnostics))
        }
        _ => Ok(v),
    }
}

/// Capped test with `L = ⌈5 log₂ n⌉`.
pub fn primitivity_main(gens: &GeneratorSet) -> Result<Verdict> {
    capped_driver(
        gens,
        main_cap(gens.degree()),
        VerdictKind::AllPrimitiveActionsLarge,
    )
}

/// Capped test with `L = ⌈(9/2) n^{1/3}⌉`.
pub fn primitivity_subquadratic(gens: &GeneratorSet) -> Result<Verdict> {
    capped_driver(
        gens,
        five_thirds_cap(gens.degree()),
        VerdictKind::AllLargeWithParams,
    )
}

/// Capped driver with an explicit cap, falling back to the certificate.
pub fn primitivity_with_cap(gens: &GeneratorSet, cap: usize) -> Result<Verdict> {
    if cap == 0 {
        return Err(Error::arg("cap must be positive"));
    }
    capped_driver(gens, cap, VerdictKind::AllPrimitiveActionsLarge)
}

/// Uncapped test: `L = n` cannot be exceeded by a nonredundant base.
pub fn ss_uncapped(gens: &GeneratorSet, alpha: usize) -> Result<Verdict> {
    let v = ss_primitivity(gens, alpha, gens.degree().max(1))?;
    if v.kind.is_escape() {
        return Err(Error::internal("uncapped run produced a partial base"));
    }
    Ok(v)
}
