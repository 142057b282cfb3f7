//! The derived counit `F_! Q(F*𝓒^c) → F_! F*𝓒^c → 𝓒^c`, with `Q` the
//! truncated bar replacement over the source.

use std::sync::Arc;

use super::{counit, left_kan, left_kan_map, restrict, DgFunctor, DwyerKanError};
use crate::chain::{homology, is_quasi_iso_in_window, Degree, GradedAbelianGroup, QuasiIsoVerdict};
use crate::colim::cofibrant_replacement;
use crate::enriched::{DgCategory, Presheaf};

/// How far the verdicts can be trusted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CounitMode {
    /// Every truncation certificate is sound and all homs live in degrees
    /// `≥ 0`, so the truncated replacement agrees with the full one through
    /// the window after tensoring.
    Sound,
    /// Truncations `N` and `N+1` give the same verdicts and homology.
    HeuristicStable,
    HeuristicUnstable,
}

/// Pointwise comparison at every object `c′` of the target.
#[derive(Clone, Debug)]
pub struct CounitCheck {
    pub object: usize,
    pub truncation: usize,
    pub window: (Degree, Degree),
    pub mode: CounitMode,
    pub verdicts: Vec<QuasiIsoVerdict>,
    /// `H(F_! Q (c′))` on the window.
    pub source_homology: Vec<GradedAbelianGroup>,
    /// `H(hom(c′, c))` on the window.
    pub target_homology: Vec<GradedAbelianGroup>,
}

impl CounitCheck {
    pub fn passes(&self) -> bool {
        self.verdicts.iter().all(|v| v.quasi_iso)
    }

    /// Objects where the counit is not a quasi-isomorphism on the window.
    pub fn failures(&self) -> Vec<usize> {
        (0..self.verdicts.len()).filter(|&c| !self.verdicts[c].quasi_iso).collect()
    }
}

struct Pass {
    sound: bool,
    verdicts: Vec<QuasiIsoVerdict>,
    source_homology: Vec<GradedAbelianGroup>,
}

fn nonnegative(cat: &DgCategory) -> bool {
    let n = cat.object_count();
    (0..n).all(|a| (0..n).all(|b| cat.hom(a, b).min_degree().is_none_or(|k| k >= 0)))
}

fn run(f: &DgFunctor, v: &Arc<Presheaf>, truncation: usize, window: (Degree, Degree)) -> Result<Pass, DwyerKanError> {
    let fv = Arc::new(restrict(f, v)?);
    let q = cofibrant_replacement(fv.clone(), truncation, window)?;
    let lq = left_kan(f, q.presheaf.clone())?;
    let lfv = left_kan(f, fv)?;
    let total = counit(f, v, &lfv)?.compose(&left_kan_map(&q.augmentation, &lq, &lfv)?);
    let verdicts = total.components.iter().map(|m| is_quasi_iso_in_window(m, window)).collect();
    let source_homology = lq.presheaf.values().iter().map(|x| homology(x, window)).collect();
    let sound = q.is_sound() && nonnegative(f.source()) && nonnegative(f.target());
    Ok(Pass { sound, verdicts, source_homology })
}

/// Compares `F_! Q(F*𝓒^c)` with `𝓒^c` pointwise on `window`. Without a sound
/// certificate the computation is repeated at `truncation + 1`.
pub fn derived_counit_check(
    f: &DgFunctor,
    c: usize,
    truncation: usize,
    window: (Degree, Degree),
) -> Result<CounitCheck, DwyerKanError> {
    let v = Arc::new(Presheaf::representable(f.target().clone(), c));
    let first = run(f, &v, truncation, window)?;
    let mode = if first.sound {
        CounitMode::Sound
    } else {
        let next = run(f, &v, truncation + 1, window)?;
        let same = first.verdicts.iter().zip(&next.verdicts).all(|(a, b)| a == b)
            && first.source_homology == next.source_homology;
        if same {
            CounitMode::HeuristicStable
        } else {
            CounitMode::HeuristicUnstable
        }
    };
    let target_homology = v.values().iter().map(|x| homology(x, window)).collect();
    Ok(CounitCheck {
        object: c,
        truncation,
        window,
        mode,
        verdicts: first.verdicts,
        source_homology: first.source_homology,
        target_homology,
    })
}
