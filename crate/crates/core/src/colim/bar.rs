//! The two-sided bar construction `B(W, 𝓒, D)` and its comparison with `W ⋆ D`.
//!
//! Level `n` is `⊕ W(c_n) ⊗ hom(c_{n−1},c_n) ⊗ … ⊗ hom(c_0,c_1) ⊗ D(c_0)`
//! over tuples `(c_0, …, c_n)` in lexicographic order; tuples whose summand
//! vanishes are omitted. `d_0` acts on `D`, `d_n` acts on `W`, inner faces
//! compose and `s_j` inserts the unit of `c_j`.

use std::collections::HashMap;
use std::sync::Arc;

use super::wcolim::{same_host, weighted_colimit, WeightedColimit};
use super::ColimError;
use crate::chain::tensor::{apply_on_factors, assemble, tensor_maps, SumLayout, TensorLayout};
use crate::chain::{
    cofibration_check, cokernel_complex, homology, is_quasi_iso_in_window, ChainComplex, ChainMap, Degree,
    GradedAbelianGroup, Quotient, QuasiIsoVerdict,
};
use crate::enriched::{Diagram, Presheaf};
use crate::simplicial::{
    normalize, realize_normalized, Augmentation, Normalization, Realization, SimplicialError, SimplicialObject,
    TailBound, TruncationCertificate,
};

/// One level of a bar construction: the surviving tuples and their summands.
#[derive(Clone, Debug)]
pub struct BarLevel {
    pub tuples: Vec<Vec<usize>>,
    pub layouts: Vec<TensorLayout>,
    pub sum: SumLayout,
    index: HashMap<Vec<usize>, usize>,
}

impl BarLevel {
    /// Tuples of length `n+1` in lexicographic order, keeping those whose
    /// factors are all nonzero. `edge(a, b)` is the factor between `a` and `b`.
    fn build(
        objects: usize,
        n: usize,
        left: &dyn Fn(usize) -> Arc<ChainComplex>,
        edge: &dyn Fn(usize, usize) -> Arc<ChainComplex>,
        right: &dyn Fn(usize) -> Arc<ChainComplex>,
    ) -> Self {
        let mut tuples = Vec::new();
        let mut stack: Vec<usize> = Vec::with_capacity(n + 1);
        fn extend(
            objects: usize,
            n: usize,
            stack: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
            edge: &dyn Fn(usize, usize) -> Arc<ChainComplex>,
            left: &dyn Fn(usize) -> Arc<ChainComplex>,
        ) {
            if stack.len() == n + 1 {
                if !left(*stack.last().expect("nonempty")).is_zero() {
                    out.push(stack.clone());
                }
                return;
            }
            for c in 0..objects {
                if let Some(&prev) = stack.last() {
                    if edge(prev, c).is_zero() {
                        continue;
                    }
                }
                stack.push(c);
                extend(objects, n, stack, out, edge, left);
                stack.pop();
            }
        }
        for c0 in 0..objects {
            if right(c0).is_zero() {
                continue;
            }
            stack.push(c0);
            extend(objects, n, &mut stack, &mut tuples, edge, left);
            stack.pop();
        }
        let layouts: Vec<TensorLayout> = tuples.iter().map(|t| TensorLayout::new(factors(t, left, edge, right))).collect();
        let sum = SumLayout::new(layouts.iter().map(|l| l.complex().clone()).collect());
        let index = tuples.iter().enumerate().map(|(k, t)| (t.clone(), k)).collect();
        BarLevel { tuples, layouts, sum, index }
    }

    pub fn position(&self, t: &[usize]) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn complex(&self) -> &Arc<ChainComplex> {
        self.sum.complex()
    }
}

fn factors(
    t: &[usize],
    left: &dyn Fn(usize) -> Arc<ChainComplex>,
    edge: &dyn Fn(usize, usize) -> Arc<ChainComplex>,
    right: &dyn Fn(usize) -> Arc<ChainComplex>,
) -> Vec<Arc<ChainComplex>> {
    let n = t.len() - 1;
    let mut f = Vec::with_capacity(n + 2);
    f.push(left(t[n]));
    for j in (0..n).rev() {
        f.push(edge(t[j], t[j + 1]));
    }
    f.push(right(t[0]));
    f
}

fn remove(t: &[usize], i: usize) -> Vec<usize> {
    let mut s = t.to_vec();
    s.remove(i);
    s
}

fn duplicate(t: &[usize], j: usize) -> Vec<usize> {
    let mut s = t.to_vec();
    s.insert(j, t[j]);
    s
}

/// `B(W, 𝓒, D)` truncated at level `N`.
#[derive(Clone, Debug)]
pub struct BarConstruction {
    w: Arc<Presheaf>,
    d: Arc<Diagram>,
    truncation: usize,
    /// `hom(c,c) / unit` when every unit splits.
    reduced: Option<Vec<Quotient>>,
}

impl BarConstruction {
    pub fn new(w: Arc<Presheaf>, d: Arc<Diagram>, truncation: usize) -> Result<Self, ColimError> {
        same_host(&w, &d)?;
        let host = w.host();
        let reduced = (0..host.object_count())
            .map(|c| {
                let u = host.unit_map(c);
                if cofibration_check(u).is_err() {
                    return None;
                }
                cokernel_complex(u).ok()
            })
            .collect::<Option<Vec<_>>>();
        Ok(BarConstruction { w, d, truncation, reduced })
    }

    pub fn weight(&self) -> &Arc<Presheaf> {
        &self.w
    }

    pub fn diagram(&self) -> &Arc<Diagram> {
        &self.d
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Whether every unit is split, so normalization can be done per tuple.
    pub fn has_split_units(&self) -> bool {
        self.reduced.is_some()
    }

    fn objects(&self) -> usize {
        self.w.host().object_count()
    }

    /// Level `n` of the unnormalized construction.
    pub fn level(&self, n: usize) -> BarLevel {
        let host = self.w.host();
        BarLevel::build(
            self.objects(),
            n,
            &|c| self.w.value(c).clone(),
            &|a, b| host.hom(a, b).clone(),
            &|c| self.d.value(c).clone(),
        )
    }

    fn reduced_hom(&self, a: usize, b: usize) -> Arc<ChainComplex> {
        match (&self.reduced, a == b) {
            (Some(r), true) => r[a].complex.clone(),
            _ => self.w.host().hom(a, b).clone(),
        }
    }

    /// Level `n` of the normalized construction: equal neighbours contribute
    /// `hom(c,c) / unit`. Requires split units.
    pub fn normalized_level(&self, n: usize) -> Option<BarLevel> {
        self.reduced.as_ref()?;
        Some(BarLevel::build(
            self.objects(),
            n,
            &|c| self.w.value(c).clone(),
            &|a, b| self.reduced_hom(a, b),
            &|c| self.d.value(c).clone(),
        ))
    }

    /// `d_i` restricted to the summand of tuple `t` (level `n`), landing in
    /// the summand of `t` without `c_i`.
    pub fn face_on(&self, n: usize, i: usize, t: &[usize], src: &TensorLayout, dst: &TensorLayout) -> ChainMap {
        let host = self.w.host();
        if i == 0 {
            apply_on_factors(src, n..n + 2, &self.d.action(t[0], t[1]).map, dst)
        } else if i == n {
            apply_on_factors(src, 0..2, &self.w.action(t[n - 1], t[n]).map, dst)
        } else {
            let p = n - i;
            apply_on_factors(src, p..p + 2, &host.composition(t[i - 1], t[i], t[i + 1]).map, dst)
        }
    }

    /// `s_j` restricted to the summand of tuple `t` (level `n`).
    pub fn degeneracy_on(&self, n: usize, j: usize, t: &[usize], src: &TensorLayout, dst: &TensorLayout) -> ChainMap {
        let p = n + 1 - j;
        apply_on_factors(src, p..p, self.w.host().unit_map(t[j]), dst)
    }

    fn level_map(
        &self,
        src: &BarLevel,
        dst: &BarLevel,
        target_tuple: impl Fn(&[usize]) -> Vec<usize>,
        block: impl Fn(&[usize], &TensorLayout, &TensorLayout) -> ChainMap,
    ) -> ChainMap {
        let maps: Vec<(usize, usize, ChainMap)> = src
            .tuples
            .iter()
            .enumerate()
            .filter_map(|(k, t)| {
                let tt = target_tuple(t);
                let kt = dst.position(&tt)?;
                Some((kt, k, block(t, &src.layouts[k], &dst.layouts[kt])))
            })
            .collect();
        assemble(&src.sum, &dst.sum, maps.iter().map(|(a, b, f)| (*a, *b, f)))
    }

    /// The full truncated simplicial object, without augmentation.
    pub fn simplicial_object(&self) -> Result<SimplicialObject, ColimError> {
        let levels: Vec<BarLevel> = (0..=self.truncation).map(|n| self.level(n)).collect();
        let mut faces = Vec::with_capacity(levels.len());
        let mut degeneracies = Vec::with_capacity(levels.len());
        for n in 0..levels.len() {
            let fs = if n == 0 {
                Vec::new()
            } else {
                (0..=n)
                    .map(|i| {
                        self.level_map(&levels[n], &levels[n - 1], |t| remove(t, i), |t, s, d| self.face_on(n, i, t, s, d))
                    })
                    .collect()
            };
            faces.push(fs);
            if n == self.truncation {
                continue;
            }
            let ss = {
                (0..=n)
                    .map(|j| {
                        self.level_map(
                            &levels[n],
                            &levels[n + 1],
                            |t| duplicate(t, j),
                            |t, s, d| self.degeneracy_on(n, j, t, s, d),
                        )
                    })
                    .collect()
            };
            degeneracies.push(ss);
        }
        let x = SimplicialObject::new(levels.iter().map(|l| l.complex().clone()).collect(), faces, degeneracies)?;
        Ok(x.with_tail(self.tail()))
    }

    /// What is known about normalized levels above the truncation.
    pub fn tail(&self) -> TailBound {
        let k = self.objects();
        let edge = |a: usize, b: usize| -> Option<Arc<ChainComplex>> {
            let h = if self.reduced.is_some() {
                self.reduced_hom(a, b)
            } else {
                self.w.host().hom(a, b).clone()
            };
            (!h.is_zero()).then_some(h)
        };
        let dsupp: Vec<usize> = (0..k).filter(|&c| !self.d.value(c).is_zero()).collect();
        let wsupp: Vec<usize> = (0..k).filter(|&c| !self.w.value(c).is_zero()).collect();
        if dsupp.is_empty() || wsupp.is_empty() {
            return TailBound::Vanishing;
        }
        let forward = closure(k, &dsupp, |a, b| edge(a, b).is_some());
        let backward = closure(k, &wsupp, |a, b| edge(b, a).is_some());
        let live: Vec<usize> = (0..k).filter(|&c| forward[c] && backward[c]).collect();
        let live_edge = |a: usize, b: usize| forward[a] && backward[a] && forward[b] && backward[b] && edge(a, b).is_some();
        match longest_walk(k, &live, &live_edge) {
            Some(len) if len <= self.truncation => TailBound::Vanishing,
            _ => {
                let nonneg = live
                    .iter()
                    .all(|&a| live.iter().all(|&b| !live_edge(a, b) || edge(a, b).and_then(|h| h.min_degree()).unwrap_or(0) >= 0));
                if !nonneg {
                    return TailBound::Unknown;
                }
                let mw = live.iter().filter_map(|&c| self.w.value(c).min_degree()).min();
                let md = live.iter().filter_map(|&c| self.d.value(c).min_degree()).min();
                match (mw, md) {
                    (Some(a), Some(b)) => TailBound::MinInternalDegree(a + b),
                    _ => TailBound::Vanishing,
                }
            }
        }
    }

    /// Smallest truncation that is sound for `window`, if any.
    pub fn sound_truncation(&self, window: (Degree, Degree)) -> Option<usize> {
        let probe = BarConstruction { truncation: usize::MAX, ..self.clone() };
        match probe.tail() {
            TailBound::Vanishing => {
                let mut n = 0;
                loop {
                    let t = BarConstruction { truncation: n, ..self.clone() };
                    if t.tail() == TailBound::Vanishing {
                        return Some(n);
                    }
                    n += 1;
                }
            }
            TailBound::MinInternalDegree(delta) => Some((window.1 - delta + 1).max(0) as usize),
            TailBound::Unknown => None,
        }
    }

    /// Normalized levels and boundaries, computed per tuple when the units
    /// split and from the full object otherwise.
    pub fn normalization(&self) -> Result<Normalization, ColimError> {
        let Some(reduced) = &self.reduced else {
            return Ok(normalize(&self.simplicial_object()?)?);
        };
        let norm: Vec<BarLevel> = (0..=self.truncation)
            .map(|n| self.normalized_level(n).expect("split units"))
            .collect();
        let host = self.w.host();
        let full_layout = |t: &[usize]| {
            TensorLayout::new(factors(t, &|c| self.w.value(c).clone(), &|a, b| host.hom(a, b).clone(), &|c| {
                self.d.value(c).clone()
            }))
        };
        // Per-slot projections / sections for a tuple's summand.
        let slot_maps = |t: &[usize], full: &TensorLayout, section: bool| -> Vec<ChainMap> {
            let n = t.len() - 1;
            let mut maps = Vec::with_capacity(n + 2);
            maps.push(ChainMap::identity(full.factors()[0].clone()));
            for j in (0..n).rev() {
                let (a, b) = (t[j], t[j + 1]);
                if a == b {
                    maps.push(if section { reduced[a].section.clone() } else { reduced[a].projection.clone() });
                } else {
                    maps.push(ChainMap::identity(host.hom(a, b).clone()));
                }
            }
            maps.push(ChainMap::identity(full.factors()[n + 1].clone()));
            maps
        };
        let mut boundaries = vec![ChainMap::zero(norm[0].complex().clone(), norm[0].complex().clone())];
        let mut full_cache: HashMap<Vec<usize>, TensorLayout> = HashMap::new();
        for n in 1..norm.len() {
            let mut blocks: Vec<(usize, usize, ChainMap)> = Vec::new();
            for (k, t) in norm[n].tuples.iter().enumerate() {
                let full_t = full_cache.entry(t.clone()).or_insert_with(|| full_layout(t)).clone();
                let sect_maps = slot_maps(t, &full_t, true);
                let refs: Vec<&ChainMap> = sect_maps.iter().collect();
                let section = tensor_maps(&norm[n].layouts[k], &full_t, &refs);
                for i in 0..=n {
                    let tt = remove(t, i);
                    let Some(kt) = norm[n - 1].position(&tt) else { continue };
                    let full_tt = full_cache.entry(tt.clone()).or_insert_with(|| full_layout(&tt)).clone();
                    let proj_maps = slot_maps(&tt, &full_tt, false);
                    let refs: Vec<&ChainMap> = proj_maps.iter().collect();
                    let projection = tensor_maps(&full_tt, &norm[n - 1].layouts[kt], &refs);
                    let face = self.face_on(n, i, t, &full_t, &full_tt);
                    let mut f = projection.compose(&face).compose(&section);
                    if i % 2 == 1 {
                        f = f.neg();
                    }
                    blocks.push((kt, k, f));
                }
            }
            boundaries.push(assemble(&norm[n].sum, &norm[n - 1].sum, blocks.iter().map(|(a, b, f)| (*a, *b, f))));
        }
        Ok(Normalization { levels: norm.iter().map(|l| l.complex().clone()).collect(), boundaries })
    }

    /// Level 0 mapped into `target` by `legs[c]` on the summand of `(c)`.
    pub(crate) fn level_zero_map(&self, legs: &dyn Fn(usize) -> ChainMap, target: Arc<ChainComplex>) -> ChainMap {
        let l0 = self.level(0);
        let mut acc = ChainMap::zero(l0.complex().clone(), target.clone());
        for (k, t) in l0.tuples.iter().enumerate() {
            let f = legs(t[0]).retarget(l0.layouts[k].complex().clone(), target.clone());
            acc = acc.add(&f.compose(&l0.sum.projection(k)));
        }
        acc
    }

    /// The augmentation `X_0 → W ⋆ D`.
    pub fn augmentation_to(&self, colim: &WeightedColimit) -> Augmentation {
        let map = self.level_zero_map(&|c| colim.leg(c), colim.complex.clone());
        Augmentation { target: colim.complex.clone(), map }
    }

    /// Realizes the (normalized) construction with the given augmentation.
    pub fn realize(&self, augmentation: Option<&Augmentation>, window: (Degree, Degree)) -> Result<Realization, ColimError> {
        let norm = self.normalization()?;
        Ok(realize_normalized(norm, self.tail(), augmentation, window)?)
    }

    /// Per-level rank tables of the unnormalized construction.
    pub fn rank_table(&self) -> Vec<Vec<(Degree, usize)>> {
        (0..=self.truncation)
            .map(|n| {
                let c = self.level(n).complex().clone();
                c.degrees().map(|k| (k, c.rank(k))).filter(|(_, r)| *r > 0).collect()
            })
            .collect()
    }
}

/// Nodes reachable from `start` along `edge`.
fn closure(k: usize, start: &[usize], edge: impl Fn(usize, usize) -> bool) -> Vec<bool> {
    let mut seen = vec![false; k];
    let mut stack = start.to_vec();
    while let Some(a) = stack.pop() {
        if std::mem::replace(&mut seen[a], true) {
            continue;
        }
        stack.extend((0..k).filter(|&b| !seen[b] && edge(a, b)));
    }
    seen
}

/// Length of the longest walk inside `nodes`, or `None` if a cycle exists.
fn longest_walk(k: usize, nodes: &[usize], edge: &dyn Fn(usize, usize) -> bool) -> Option<usize> {
    // 0 unvisited, 1 on stack, 2 done
    fn visit(a: usize, k: usize, edge: &dyn Fn(usize, usize) -> bool, state: &mut [u8], best: &mut [usize]) -> bool {
        state[a] = 1;
        let mut len = 0;
        for b in 0..k {
            if !edge(a, b) {
                continue;
            }
            if state[b] == 1 || (state[b] == 0 && !visit(b, k, edge, state, best)) {
                return false;
            }
            len = len.max(best[b] + 1);
        }
        best[a] = len;
        state[a] = 2;
        true
    }
    let mut state = vec![0u8; k];
    let mut best = vec![0usize; k];
    for &a in nodes {
        if state[a] == 0 && !visit(a, k, edge, &mut state, &mut best) {
            return None;
        }
    }
    Some(nodes.iter().map(|&a| best[a]).max().unwrap_or(0))
}

/// How cofibrancy of the weight is known.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cofibrancy {
    /// Built by an explicit cell trace.
    Certified,
    /// A bar-construction replacement (a finite cell complex).
    Replacement,
    Unknown,
}

/// Outcome of comparing `|B(W, 𝓒, D)|` with `W ⋆ D`.
#[derive(Clone, Debug)]
pub struct BarComparison {
    pub realization_homology: GradedAbelianGroup,
    pub colimit_homology: GradedAbelianGroup,
    pub verdict: QuasiIsoVerdict,
    pub certificate: TruncationCertificate,
    pub cofibrancy: Cofibrancy,
    pub level_ranks: Vec<usize>,
}

impl BarComparison {
    pub fn quasi_iso(&self) -> bool {
        self.verdict.quasi_iso
    }
}

/// Realizes the bar construction, maps it to the weighted colimit and tests
/// the map on `window`. Heuristic truncations are errors unless allowed.
pub fn bar_compare(
    w: Arc<Presheaf>,
    d: Arc<Diagram>,
    truncation: usize,
    window: (Degree, Degree),
    cofibrancy: Cofibrancy,
    allow_heuristic: bool,
) -> Result<BarComparison, ColimError> {
    let colim = weighted_colimit(&w, &d)?;
    let bar = BarConstruction::new(w, d, truncation)?;
    let aug = bar.augmentation_to(&colim);
    let r = bar.realize(Some(&aug), window)?;
    if !r.certificate.is_sound() && !allow_heuristic {
        return Err(SimplicialError::HeuristicTruncation { truncation, window }.into());
    }
    let map = r.augmentation.as_ref().expect("augmented");
    let verdict = is_quasi_iso_in_window(map, window);
    Ok(BarComparison {
        realization_homology: r.homology(),
        colimit_homology: homology(&colim.complex, window),
        verdict,
        certificate: r.certificate.clone(),
        cofibrancy,
        level_ranks: r.normalization.levels.iter().map(|l| l.total_rank()).collect(),
    })
}

/// `B(W, 𝓒, 𝓒_c)` augmented to `W(c)` by the action, with the extra
/// degeneracy that appends `id_c`.
pub fn bar_resolution(w: Arc<Presheaf>, c: usize, truncation: usize) -> Result<SimplicialObject, ColimError> {
    let host = w.host().clone();
    let d = Arc::new(Diagram::representable(host.clone(), c));
    let bar = BarConstruction::new(w.clone(), d, truncation)?;
    let x = bar.simplicial_object()?;
    let target = w.value(c).clone();
    let aug = bar.level_zero_map(&|c0| w.action(c, c0).map.clone(), target.clone());
    let x = x.with_augmentation(target.clone(), aug)?;
    let mut extra = Vec::with_capacity(truncation + 1);
    let unit = host.unit_map(c);
    // Level −1 → 0: x ↦ x ⊗ id_c in the summand of (c).
    let l0 = bar.level(0);
    let single = TensorLayout::new(vec![target.clone()]);
    let mut s = ChainMap::zero(target.clone(), l0.complex().clone());
    if let Some(k) = l0.position(&[c]) {
        let f = apply_on_factors(&single, 1..1, unit, &l0.layouts[k]).retarget(target.clone(), l0.layouts[k].complex().clone());
        s = l0.sum.inclusion(k).compose(&f);
    }
    extra.push(s);
    let mut prev = l0;
    for n in 1..=truncation {
        let next = bar.level(n);
        let f = bar.level_map(
            &prev,
            &next,
            |t| {
                let mut u = vec![c];
                u.extend_from_slice(t);
                u
            },
            |_, src, dst| apply_on_factors(src, n + 1..n + 1, unit, dst),
        );
        extra.push(f);
        prev = next;
    }
    Ok(x.with_extra_degeneracy(extra)?)
}

/// Checks that the coequalizer of `d_0, d_1 : X_1 ⇉ X_0` is `W ⋆ D`: the
/// identity of `X_0` descends to an isomorphism of the two presentations.
pub fn observation_check(w: Arc<Presheaf>, d: Arc<Diagram>) -> Result<bool, ColimError> {
    let colim = weighted_colimit(&w, &d)?;
    let bar = BarConstruction::new(w, d, 1)?;
    let x = bar.simplicial_object()?;
    let diff = x.face(1, 0).sub(x.face(1, 1));
    let q = cokernel_complex(&diff)?;
    let l0 = bar.level(0);
    // Level 0 and ⊕ W(c) ⊗ D(c) share summands; match them up.
    let legs: Vec<ChainMap> = l0
        .tuples
        .iter()
        .enumerate()
        .map(|(k, t)| colim.sum.inclusion(t[0]).compose(&ChainMap::identity(colim.layouts[t[0]].complex().clone())).compose(
            &l0.sum.projection(k).retarget(l0.complex().clone(), l0.layouts[k].complex().clone()).retarget(
                l0.complex().clone(),
                colim.layouts[t[0]].complex().clone(),
            ),
        ))
        .collect();
    let mut to_sum = ChainMap::zero(l0.complex().clone(), colim.sum.complex().clone());
    for f in &legs {
        to_sum = to_sum.add(f);
    }
    let phi = q.induced(&to_sum, &colim.quotient);
    Ok(phi.check().is_ok() && phi.is_isomorphism())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{AbelianGroup, Matrix};
    use crate::enriched::{ch_full_subcategory, free_dg_category, DgCategory, FiniteCategory};
    use crate::simplicial::check_extra_degeneracy;

    fn z_z1() -> Arc<DgCategory> {
        Arc::new(ch_full_subcategory(vec![
            ("Z".into(), Arc::new(ChainComplex::z(0))),
            ("Z[1]".into(), Arc::new(ChainComplex::z(1))),
        ]))
    }

    #[test]
    fn unit_category_levels_are_constant() {
        let host = Arc::new(DgCategory::unit());
        let c = Arc::new(ChainComplex::two_term(1, Matrix::from_i64(1, 1, &[2])));
        let w = Arc::new(Presheaf::representable(host.clone(), 0));
        let d = Arc::new(
            Diagram::new(host.clone(), vec![c.clone()], |_, _, l| {
                Ok(ChainMap::identity(l.complex().clone()).retarget(l.complex().clone(), c.clone()))
            })
            .unwrap(),
        );
        let bar = BarConstruction::new(w, d, 3).unwrap();
        let x = bar.simplicial_object().unwrap();
        assert_eq!(x.validate(), Ok(()));
        for n in 0..=3 {
            assert_eq!(x.level(n).total_rank(), 2);
        }
        let norm = bar.normalization().unwrap();
        assert!(norm.levels[1..].iter().all(|l| l.is_zero()));
        assert_eq!(bar.tail(), TailBound::Vanishing);
    }

    #[test]
    fn representables_over_z_z1() {
        let host = z_z1();
        let w = Arc::new(Presheaf::representable(host.clone(), 1));
        let d = Arc::new(Diagram::representable(host.clone(), 0));
        let bar = BarConstruction::new(w.clone(), d.clone(), 2).unwrap();
        let x = bar.simplicial_object().unwrap();
        assert_eq!(x.validate(), Ok(()));
        // Level n has one summand per tuple; each is a tensor of rank-one complexes.
        for n in 0..=2 {
            assert_eq!(x.level(n).total_rank(), 2usize.pow(n as u32 + 1));
        }
        let generic = normalize(&x).unwrap();
        let blockwise = bar.normalization().unwrap();
        for n in 0..=2 {
            assert_eq!(generic.levels[n].total_rank(), blockwise.levels[n].total_rank());
        }
        // A loop of nonzero homs: no sound bound, but the window stabilizes.
        assert_eq!(bar.tail(), TailBound::Unknown);
        let cmp = bar_compare(w.clone(), d.clone(), 4, (-1, 3), Cofibrancy::Certified, true).unwrap();
        assert!(!cmp.certificate.is_sound());
        assert!(cmp.quasi_iso());
        assert!(bar_compare(w, d, 4, (-1, 3), Cofibrancy::Certified, false).is_err());
        assert_eq!(cmp.colimit_homology.get(1), AbelianGroup::free(1));
    }

    #[test]
    fn non_cofibrant_constant_weight_on_a_span() {
        let cat = FiniteCategory::span();
        let host = Arc::new(free_dg_category(&cat));
        let z = Arc::new(ChainComplex::z(0));
        let zero = Arc::new(ChainComplex::zero());
        let w = Arc::new(Presheaf::constant(host.clone(), &cat, z.clone()).unwrap());
        let vals = vec![z.clone(), zero.clone(), zero.clone()];
        let v2 = vals.clone();
        let d = Arc::new(
            Diagram::from_functor(host.clone(), &cat, vals, |f| {
                let a = cat.arrow_data(f);
                if a.source == a.target {
                    ChainMap::identity(v2[a.source].clone())
                } else {
                    ChainMap::zero(v2[a.source].clone(), v2[a.target].clone())
                }
            })
            .unwrap(),
        );
        let bar = BarConstruction::new(w.clone(), d.clone(), 2).unwrap();
        assert_eq!(bar.tail(), TailBound::Vanishing);
        let cmp = bar_compare(w, d, 2, (0, 2), Cofibrancy::Unknown, false).unwrap();
        assert!(cmp.colimit_homology.is_zero());
        assert_eq!(cmp.realization_homology.get(1), AbelianGroup::free(1));
        assert_eq!(cmp.realization_homology.get(0), AbelianGroup::zero());
        assert!(!cmp.quasi_iso());
    }

    #[test]
    fn resolution_has_an_extra_degeneracy() {
        let host = z_z1();
        let w = Arc::new(Presheaf::representable(host.clone(), 1));
        for c in 0..2 {
            let x = bar_resolution(w.clone(), c, 2).unwrap();
            assert_eq!(x.validate(), Ok(()));
            let rep = check_extra_degeneracy(&x).unwrap();
            assert!(rep.holds, "{:?}", rep.first_failure);
        }
    }

    #[test]
    fn observation_holds() {
        let host = z_z1();
        let w = Arc::new(Presheaf::representable(host.clone(), 1));
        let d = Arc::new(Diagram::representable(host.clone(), 0));
        assert!(observation_check(w, d).unwrap());
    }
}
