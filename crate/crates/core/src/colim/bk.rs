//! Bousfield–Kan homotopy colimits of diagrams over finite categories.
//!
//! The simplicial replacement has level `n` equal to `⊕ D(i_0)` over strings
//! `i_0 → ⋯ → i_n` of `n` composable arrows, identities included, ordered
//! lexicographically by source object and then arrow indices.

use std::collections::HashMap;
use std::sync::Arc;

use super::cofrep::CofibrantReplacement;
use super::wcolim::weighted_colimit;
use super::ColimError;
use crate::chain::tensor::{assemble, SumLayout};
use crate::chain::{homology, ChainComplex, ChainMap, Degree, GradedAbelianGroup, Matrix};
use crate::enriched::{Arrow, Diagram, FiniteCategory};
use crate::simplicial::{normalize_level, realize, Realization, SimplicialObject, TailBound};

/// A string of composable arrows: source object and arrows `f_1, …, f_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArrowString {
    pub source: usize,
    pub arrows: Vec<Arrow>,
}

impl ArrowString {
    fn key(&self) -> Vec<usize> {
        let mut k = vec![self.source];
        k.extend_from_slice(&self.arrows);
        k
    }
}

/// `D(f) : D(source f) → D(target f)` read off the action of a diagram over
/// the linearization of `cat`.
pub fn arrow_map(cat: &FiniteCategory, d: &Diagram, f: Arrow) -> ChainMap {
    let a = cat.arrow_data(f);
    let pos = cat.hom(a.source, a.target).iter().position(|&g| g == f).expect("arrow in its hom");
    let act = d.action(a.source, a.target);
    let src = d.value(a.source).clone();
    ChainMap::from_fn(src.clone(), d.value(a.target).clone(), |p, (rows, cols)| {
        let mut out = Matrix::zeros(rows, cols);
        if let Some(blk) = act.layout.block(&[0, p]) {
            let full = act.map.component(p);
            out.set_block(0, 0, &full.block(0, blk.offset + pos * cols, rows, cols));
        }
        Some(out)
    })
}

fn check_host(cat: &FiniteCategory, d: &Diagram) -> Result<(), ColimError> {
    let host = d.host();
    let n = cat.object_count();
    let ok = host.object_count() == n
        && (0..n).all(|i| {
            (0..n).all(|j| {
                let h = host.hom(i, j);
                h.total_rank() == cat.hom(i, j).len() && (h.is_zero() || h.support() == Some((0, 0)))
            })
        });
    if ok {
        Ok(())
    } else {
        Err(ColimError::Malformed("diagram does not live over the linearization of the index category".into()))
    }
}

/// Strings of length `n` in lexicographic order.
fn strings(cat: &FiniteCategory, n: usize) -> Vec<ArrowString> {
    let mut out: Vec<ArrowString> = (0..cat.object_count()).map(|i| ArrowString { source: i, arrows: Vec::new() }).collect();
    for _ in 0..n {
        let mut next = Vec::new();
        for s in &out {
            let end = s.arrows.last().map_or(s.source, |&f| cat.arrow_data(f).target);
            let mut fs: Vec<Arrow> = (0..cat.object_count()).flat_map(|j| cat.hom(end, j).iter().copied()).collect();
            fs.sort_unstable();
            for f in fs {
                let mut t = s.clone();
                t.arrows.push(f);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// The simplicial replacement of `D` together with its strings per level.
#[derive(Clone, Debug)]
pub struct SimplicialReplacement {
    pub object: SimplicialObject,
    pub strings: Vec<Vec<ArrowString>>,
    pub sums: Vec<SumLayout>,
}

/// Longest string of nonidentity arrows, or `None` when the category has loops.
fn longest_string(cat: &FiniteCategory) -> Option<usize> {
    if !cat.is_loop_free() {
        return None;
    }
    let n = cat.object_count();
    let mut best = vec![None::<usize>; n];
    fn depth(i: usize, cat: &FiniteCategory, best: &mut [Option<usize>]) -> usize {
        if let Some(b) = best[i] {
            return b;
        }
        let mut len = 0;
        for j in 0..cat.object_count() {
            if j != i && !cat.hom(i, j).is_empty() {
                len = len.max(1 + depth(j, cat, best));
            }
        }
        best[i] = Some(len);
        len
    }
    Some((0..n).map(|i| depth(i, cat, &mut best)).max().unwrap_or(0))
}

pub fn simplicial_replacement(
    cat: &FiniteCategory,
    d: &Diagram,
    truncation: usize,
) -> Result<SimplicialReplacement, ColimError> {
    check_host(cat, d)?;
    let strings: Vec<Vec<ArrowString>> = (0..=truncation).map(|n| strings(cat, n)).collect();
    let index: Vec<HashMap<Vec<usize>, usize>> =
        strings.iter().map(|l| l.iter().enumerate().map(|(k, s)| (s.key(), k)).collect()).collect();
    let sums: Vec<SumLayout> =
        strings.iter().map(|l| SumLayout::new(l.iter().map(|s| d.value(s.source).clone()).collect())).collect();
    let arrow_maps: Vec<ChainMap> = (0..cat.arrows().len()).map(|f| arrow_map(cat, d, f)).collect();
    let mut faces = vec![Vec::new()];
    for n in 1..=truncation {
        let mut fs = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let mut blocks = Vec::new();
            for (k, s) in strings[n].iter().enumerate() {
                let (t, map) = if i == 0 {
                    let f = s.arrows[0];
                    let t = ArrowString { source: cat.arrow_data(f).target, arrows: s.arrows[1..].to_vec() };
                    (t, arrow_maps[f].clone())
                } else {
                    let mut arrows = s.arrows.clone();
                    if i == n {
                        arrows.pop();
                    } else {
                        let g = arrows.remove(i);
                        arrows[i - 1] = cat.compose(g, arrows[i - 1]).ok_or_else(|| {
                            ColimError::Malformed("composition table is incomplete".into())
                        })?;
                    }
                    (ArrowString { source: s.source, arrows }, ChainMap::identity(d.value(s.source).clone()))
                };
                blocks.push((index[n - 1][&t.key()], k, map));
            }
            fs.push(assemble(&sums[n], &sums[n - 1], blocks.iter().map(|(a, b, f)| (*a, *b, f))));
        }
        faces.push(fs);
    }
    let mut degeneracies = Vec::with_capacity(truncation);
    for n in 0..truncation {
        let mut ss = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let blocks: Vec<(usize, usize, ChainMap)> = strings[n]
                .iter()
                .enumerate()
                .map(|(k, s)| {
                    let at = if j == 0 { s.source } else { cat.arrow_data(s.arrows[j - 1]).target };
                    let mut arrows = s.arrows.clone();
                    arrows.insert(j, cat.identity(at));
                    let t = ArrowString { source: s.source, arrows };
                    (index[n + 1][&t.key()], k, ChainMap::identity(d.value(s.source).clone()))
                })
                .collect();
            ss.push(assemble(&sums[n], &sums[n + 1], blocks.iter().map(|(a, b, f)| (*a, *b, f))));
        }
        degeneracies.push(ss);
    }
    let levels = sums.iter().map(|s| s.complex().clone()).collect();
    let tail = match longest_string(cat) {
        Some(l) if l <= truncation => TailBound::Vanishing,
        _ => match d.values().iter().filter_map(|v| v.min_degree()).min() {
            Some(k) => TailBound::MinInternalDegree(k),
            None => TailBound::Vanishing,
        },
    };
    let object = SimplicialObject::new(levels, faces, degeneracies)?.with_tail(tail);
    Ok(SimplicialReplacement { object, strings, sums })
}

/// `hocolim D` as the realization of the simplicial replacement.
#[derive(Clone, Debug)]
pub struct BkHocolim {
    pub replacement: SimplicialReplacement,
    pub realization: Realization,
}

impl BkHocolim {
    pub fn complex(&self) -> &Arc<ChainComplex> {
        &self.realization.complex
    }

    pub fn homology(&self) -> GradedAbelianGroup {
        self.realization.homology()
    }
}

pub fn bk_hocolim(
    cat: &FiniteCategory,
    d: &Diagram,
    truncation: usize,
    window: (Degree, Degree),
) -> Result<BkHocolim, ColimError> {
    let replacement = simplicial_replacement(cat, d, truncation)?;
    let realization = realize(&replacement.object, window)?;
    Ok(BkHocolim { replacement, realization })
}

/// The comparison `hocolim D → Q ⋆ D` for `Q` the cofibrant replacement of
/// the constant weight `ℤ`, sending a nondegenerate string
/// `i_0 → ⋯ → i_n` with value `x` to `[1 ⊗ f_n ⊗ ⋯ ⊗ f_1 ⊗ id] ⊗ x`.
/// Requires a loop-free index category.
pub fn bk_comparison(
    cat: &FiniteCategory,
    d: &Diagram,
    bk: &BkHocolim,
    q: &CofibrantReplacement,
) -> Result<(ChainMap, GradedAbelianGroup), ColimError> {
    if !cat.is_loop_free() {
        return Err(ColimError::Malformed("comparison needs a loop-free index category".into()));
    }
    let colim = weighted_colimit(&q.presheaf, d)?;
    let x = &bk.replacement.object;
    let top = x.truncation().min(q.levels.first().map_or(0, |l| l.len().saturating_sub(1)));
    let sections: Vec<ChainMap> =
        (0..=x.truncation()).map(|n| normalize_level(x, n).map(|l| l.section)).collect::<Result<_, _>>()?;
    let real = &bk.realization;
    let legs: Vec<ChainMap> = (0..cat.object_count()).map(|c| colim.leg(c)).collect();
    let hom_pos = |f: Arrow| {
        let a = cat.arrow_data(f);
        cat.hom(a.source, a.target).iter().position(|&g| g == f).expect("arrow in its hom")
    };
    let map = ChainMap::from_fn(real.complex.clone(), colim.complex.clone(), |m, (rows, cols)| {
        let mut out = Matrix::zeros(rows, cols);
        for n in 0..=top {
            let k = m - n as Degree;
            let sect = sections[n].component(k);
            if sect.cols() == 0 {
                continue;
            }
            // Φ_n on the unnormalized level, column by column.
            let sum = &bk.replacement.sums[n];
            let mut phi = Matrix::zeros(rows, sum.complex().rank(k));
            for (si, s) in bk.replacement.strings[n].iter().enumerate() {
                if s.arrows.iter().any(|&f| cat.is_identity(f)) {
                    continue;
                }
                let c0 = s.source;
                let dim = d.value(c0).rank(k);
                if dim == 0 {
                    continue;
                }
                let mut tuple = vec![c0];
                tuple.extend(s.arrows.iter().map(|&f| cat.arrow_data(f).target));
                let lev = &q.levels[c0][n];
                let Some(tk) = lev.position(&tuple) else { continue };
                let mut idx = vec![0];
                idx.extend(s.arrows.iter().rev().map(|&f| hom_pos(f)));
                idx.push(hom_pos(cat.identity(c0)));
                let Some(inner) = lev.layouts[tk].index_of(&vec![0; n + 2], &idx) else { continue };
                let e = q.realizations[c0].level_offset(n as Degree, n) + lev.sum.offset(0, tk) + inner;
                let leg = legs[c0].component(m);
                let negate = (n as Degree * k).rem_euclid(2) == 1;
                for xi in 0..dim {
                    let Some(col) = colim.layouts[c0].index_of(&[n as Degree, k], &[e, xi]) else { continue };
                    let dst = sum.offset(k, si) + xi;
                    for r in 0..rows {
                        let v = leg.get(r, col);
                        if v.sign() != num_bigint::Sign::NoSign {
                            phi.set(r, dst, if negate { -v } else { v.clone() });
                        }
                    }
                }
            }
            let block = &phi * &*sect;
            out.set_block(0, real.level_offset(m, n), &block);
        }
        Some(out)
    });
    let h = homology(&colim.complex, real.certificate.window);
    Ok((map, h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{is_quasi_iso_in_window, AbelianGroup};
    use crate::colim::cofibrant_replacement;
    use crate::enriched::{free_dg_category, Presheaf};

    fn span_diagram() -> (FiniteCategory, Diagram) {
        let cat = FiniteCategory::span();
        let host = Arc::new(free_dg_category(&cat));
        let z = Arc::new(ChainComplex::z(0));
        let zero = Arc::new(ChainComplex::zero());
        let vals = vec![z, zero.clone(), zero];
        let v2 = vals.clone();
        let c2 = cat.clone();
        let d = Diagram::from_functor(host, &cat, vals, |f| {
            let a = c2.arrow_data(f);
            if a.source == a.target {
                ChainMap::identity(v2[a.source].clone())
            } else {
                ChainMap::zero(v2[a.source].clone(), v2[a.target].clone())
            }
        })
        .unwrap();
        (cat, d)
    }

    #[test]
    fn span_has_a_circle() {
        let (cat, d) = span_diagram();
        let bk = bk_hocolim(&cat, &d, 2, (-1, 3)).unwrap();
        assert_eq!(bk.replacement.object.validate(), Ok(()));
        assert!(bk.realization.certificate.is_sound());
        let h = bk.homology();
        assert_eq!(h.get(1), AbelianGroup::free(1));
        assert_eq!(h.get(0), AbelianGroup::zero());
    }

    #[test]
    fn one_object() {
        let cat = FiniteCategory::discrete(1);
        let host = Arc::new(free_dg_category(&cat));
        let c = Arc::new(ChainComplex::two_term(1, Matrix::from_i64(1, 1, &[2])));
        let d = Diagram::from_functor(host, &cat, vec![c.clone()], |_| ChainMap::identity(c.clone())).unwrap();
        let bk = bk_hocolim(&cat, &d, 1, (0, 2)).unwrap();
        assert_eq!(bk.homology().get(0), AbelianGroup::from_cyclic(0, &[2.into()]));
    }

    #[test]
    fn comparison_with_the_replaced_constant_weight() {
        let (cat, d) = span_diagram();
        let host = d.host().clone();
        let w = Arc::new(Presheaf::constant(host, &cat, Arc::new(ChainComplex::z(0))).unwrap());
        let q = cofibrant_replacement(w, 2, (-1, 3)).unwrap();
        let bk = bk_hocolim(&cat, &d, 2, (-1, 3)).unwrap();
        let (phi, _) = bk_comparison(&cat, &d, &bk, &q).unwrap();
        assert_eq!(phi.check(), Ok(()));
        assert!(is_quasi_iso_in_window(&phi, (-1, 3)).quasi_iso);
    }

    #[test]
    fn comparison_in_positive_degrees() {
        let cat = FiniteCategory::poset(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let host = Arc::new(free_dg_category(&cat));
        let c = Arc::new(ChainComplex::two_term(2, Matrix::from_i64(1, 1, &[2])));
        let e = Arc::new(ChainComplex::concentrated(1, 2));
        let vals = vec![e.clone(), c.clone(), c.clone()];
        let into_c = ChainMap::new(e.clone(), c.clone(), vec![(1, Matrix::from_i64(1, 2, &[1, -1]))]).unwrap();
        let v2 = vals.clone();
        let c2 = cat.clone();
        let d = Diagram::from_functor(host.clone(), &cat, vals, |f| {
            let a = c2.arrow_data(f);
            if a.source == a.target {
                ChainMap::identity(v2[a.source].clone())
            } else if a.source == 0 {
                into_c.clone()
            } else {
                ChainMap::identity(c.clone())
            }
        })
        .unwrap();
        assert_eq!(d.validate(), Ok(()));
        let w = Arc::new(Presheaf::constant(host, &cat, Arc::new(ChainComplex::z(0))).unwrap());
        let q = cofibrant_replacement(w, 2, (0, 5)).unwrap();
        let bk = bk_hocolim(&cat, &d, 2, (0, 5)).unwrap();
        let (phi, _) = bk_comparison(&cat, &d, &bk, &q).unwrap();
        assert_eq!(phi.check(), Ok(()));
        assert!(is_quasi_iso_in_window(&phi, (0, 5)).quasi_iso);
    }
}
