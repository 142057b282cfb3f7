//! Cofibrant replacement of a weight by realized bar resolutions,
//! `Q(c′) = |B(W, 𝓒, 𝓒(c′,−))|`.

use std::sync::Arc;

use super::bar::{BarConstruction, BarLevel};
use super::ColimError;
use crate::chain::tensor::{apply_on_factors, assemble, distribute_right, flatten_first, SumLayout, TensorLayout};
use crate::chain::{is_quasi_iso_in_window, ChainComplex, ChainMap, Degree, Matrix, QuasiIsoVerdict};
use crate::enriched::{DgCategory, Diagram, Presheaf, PresheafMap};
use crate::simplicial::{Realization, SimplicialError};

/// `Q → W` with the realized bar data at every object.
#[derive(Clone, Debug)]
pub struct CofibrantReplacement {
    pub presheaf: Arc<Presheaf>,
    pub augmentation: PresheafMap,
    pub realizations: Vec<Realization>,
    /// Normalized bar levels of `Q(c)`, indexed `[c][n]`.
    pub levels: Vec<Vec<BarLevel>>,
    /// Whether `Q(c) → W(c)` is a quasi-isomorphism on the window.
    pub verdicts: Vec<QuasiIsoVerdict>,
}

impl CofibrantReplacement {
    pub fn is_sound(&self) -> bool {
        self.realizations.iter().all(|r| r.certificate.is_sound())
    }

    pub fn is_pointwise_quasi_iso(&self) -> bool {
        self.verdicts.iter().all(|v| v.quasi_iso)
    }
}

struct Point {
    levels: Vec<BarLevel>,
    real: Realization,
}

/// Lifts maps `A_n : N_n ⊗ B → N′_n` on each level to the realizations,
/// `Tot(N) ⊗ B → Tot(N′)`, with the sign `(−1)^{n·|b|}` from moving `b`
/// past the simplicial coordinate.
pub(crate) fn total_right_action(
    src: &Realization,
    dst: &Realization,
    b: &Arc<ChainComplex>,
    level_maps: &[(TensorLayout, ChainMap)],
) -> (TensorLayout, ChainMap) {
    let layout = TensorLayout::new(vec![src.complex.clone(), b.clone()]);
    let map = ChainMap::from_fn(layout.complex().clone(), dst.complex.clone(), |m, (rows, cols)| {
        let mut out = Matrix::zeros(rows, cols);
        for blk in layout.blocks(m) {
            let (m1, p) = (blk.degrees[0], blk.degrees[1]);
            let bdim = blk.dims[1];
            for (n, (ln, a)) in level_maps.iter().enumerate() {
                let q = m1 - n as Degree;
                let Some(lb) = ln.block(&[q, p]) else { continue };
                let comp = a.component(q + p);
                if comp.rows() == 0 {
                    continue;
                }
                let negate = (n as Degree * p).rem_euclid(2) == 1;
                let row0 = dst.level_offset(m, n);
                let col0 = src.level_offset(m1, n);
                for i in 0..lb.dims[0] {
                    for j in 0..bdim {
                        let col = blk.offset + (col0 + i) * bdim + j;
                        let lcol = lb.offset + i * bdim + j;
                        for r in 0..comp.rows() {
                            let v = comp.get(r, lcol);
                            if v.sign() != num_bigint::Sign::NoSign {
                                out.set(row0 + r, col, if negate { -v } else { v.clone() });
                            }
                        }
                    }
                }
            }
        }
        Some(out)
    });
    (layout, map)
}

/// `N_n ⊗ hom(c′,c) → N′_n`, composing into the last factor of each tuple.
fn level_action(host: &DgCategory, cp: usize, c: usize, n: usize, lev: &BarLevel, levp: &BarLevel) -> (TensorLayout, ChainMap) {
    let b = host.hom(cp, c).clone();
    let ln = TensorLayout::new(vec![lev.complex().clone(), b.clone()]);
    let parts: Vec<TensorLayout> =
        lev.layouts.iter().map(|l| TensorLayout::new(vec![l.complex().clone(), b.clone()])).collect();
    let psum = SumLayout::new(parts.iter().map(|l| l.complex().clone()).collect());
    let dist = distribute_right(&lev.sum, &ln, &parts, &psum);
    let mut blocks = Vec::new();
    for (k, t) in lev.tuples.iter().enumerate() {
        let Some(kp) = levp.position(t) else { continue };
        let mut factors = lev.layouts[k].factors().to_vec();
        factors.push(b.clone());
        let flat = TensorLayout::new(factors);
        let act = apply_on_factors(&flat, n + 1..n + 3, &host.composition(cp, c, t[0]).map, &levp.layouts[kp]);
        blocks.push((kp, k, act.compose(&flatten_first(&parts[k], &lev.layouts[k], &flat))));
    }
    let map = assemble(&psum, &levp.sum, blocks.iter().map(|(a, s, f)| (*a, *s, f))).compose(&dist);
    (ln, map)
}

/// Replaces `W` by `Q`, with `Q(c′)` the realization of the normalized bar
/// resolution truncated at `truncation`. Requires split units.
pub fn cofibrant_replacement(
    w: Arc<Presheaf>,
    truncation: usize,
    window: (Degree, Degree),
) -> Result<CofibrantReplacement, ColimError> {
    let host = w.host().clone();
    let k = host.object_count();
    let mut points = Vec::with_capacity(k);
    for c in 0..k {
        let d = Arc::new(Diagram::representable(host.clone(), c));
        let bar = BarConstruction::new(w.clone(), d, truncation)?;
        if !bar.has_split_units() {
            let bad = (0..k).find(|&a| crate::chain::cofibration_check(host.unit_map(a)).is_err()).unwrap_or(0);
            return Err(ColimError::NonSplitUnit(host.name(bad).to_string()));
        }
        let levels: Vec<BarLevel> =
            (0..=truncation).map(|n| bar.normalized_level(n).expect("split units")).collect();
        let target = w.value(c).clone();
        let aug = bar.level_zero_map(&|c0| w.action(c, c0).map.clone(), target.clone());
        let aug = crate::simplicial::Augmentation { target, map: aug };
        let real = bar.realize(Some(&aug), window)?;
        points.push(Point { levels, real });
    }
    let values: Vec<Arc<ChainComplex>> = points.iter().map(|p| p.real.complex.clone()).collect();
    let q = Presheaf::new(host.clone(), values, |cp, c, layout| {
        let (p, pp) = (&points[c], &points[cp]);
        let maps: Vec<(TensorLayout, ChainMap)> =
            (0..=truncation).map(|n| level_action(&host, cp, c, n, &p.levels[n], &pp.levels[n])).collect();
        let (l, f) = total_right_action(&p.real, &pp.real, host.hom(cp, c), &maps);
        debug_assert!(**l.complex() == **layout.complex());
        Ok(f.retarget(layout.complex().clone(), pp.real.complex.clone()))
    })?;
    let q = Arc::new(q);
    let components: Vec<ChainMap> = points
        .iter()
        .map(|p| p.real.augmentation.clone().expect("augmented"))
        .collect();
    let verdicts = components.iter().map(|f| is_quasi_iso_in_window(f, window)).collect();
    let augmentation = PresheafMap::new(q.clone(), w, components)?;
    let (realizations, levels) = points.into_iter().map(|p| (p.real, p.levels)).unzip();
    Ok(CofibrantReplacement { presheaf: q, augmentation, realizations, levels, verdicts })
}

/// Like [`cofibrant_replacement`] but refuses heuristic truncations.
pub fn cofibrant_replacement_sound(
    w: Arc<Presheaf>,
    truncation: usize,
    window: (Degree, Degree),
) -> Result<CofibrantReplacement, ColimError> {
    let r = cofibrant_replacement(w, truncation, window)?;
    if !r.is_sound() {
        return Err(SimplicialError::HeuristicTruncation { truncation, window }.into());
    }
    Ok(r)
}
