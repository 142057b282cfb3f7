//! Witnesses that `c` is a retract in `H₀` of a finite sum of images:
//! classes `i_k ∈ H₀ hom(c, Fd_k)`, `r_k ∈ H₀ hom(Fd_k, c)` with
//! `Σ r_k i_k = [id_c]`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::DgFunctor;
use crate::chain::smith::solve;
use crate::chain::{ChainComplex, Cyclic, HomologyDegree, Matrix};

/// One summand `c → Fd → c` of a witness, as classes and representing cycles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RetractSummand {
    pub object: usize,
    /// Class coordinates of `i_k` in `H₀ hom(c, Fd)`.
    pub inclusion: Vec<BigInt>,
    /// Class coordinates of `r_k` in `H₀ hom(Fd, c)`.
    pub retraction: Vec<BigInt>,
    pub inclusion_cycle: Vec<BigInt>,
    pub retraction_cycle: Vec<BigInt>,
}

/// A verified decomposition of `[id_c]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RetractWitness {
    pub object: usize,
    pub summands: Vec<RetractSummand>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NonexistenceReason {
    /// Every `H₀ hom(c, Fd)` or `H₀ hom(Fd, c)` vanishes while `[id_c] ≠ 0`.
    VanishingGroups,
    /// `[id_c]` lies outside the subgroup generated by all composites
    /// `r ∘ i`, which contains every finite sum of them.
    OutsideCompositeSpan,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RetractSearch {
    Found(RetractWitness),
    NotFoundWithinBounds { systems: usize },
    CertifiedNonexistent(NonexistenceReason),
}

impl RetractSearch {
    pub fn witness(&self) -> Option<&RetractWitness> {
        match self {
            RetractSearch::Found(w) => Some(w),
            _ => None,
        }
    }
}

/// Limits of the bounded search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_summands: usize,
    /// Free class coordinates of each `i_k` range over `[−b, b]`.
    pub coefficient_box: i64,
    /// Maximal number of linear systems solved.
    pub budget: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { max_summands: 3, coefficient_box: 4, budget: 20_000 }
    }
}

struct Groups<'a> {
    f: &'a DgFunctor,
    c: usize,
    end: HomologyDegree,
    into: Vec<HomologyDegree>,
    out: Vec<HomologyDegree>,
}

impl Groups<'_> {
    fn hom(&self, a: usize, b: usize) -> &ChainComplex {
        self.f.target().hom(a, b)
    }

    /// Class of `r ∘ i` in `H₀ hom(c,c)` for cycles `r`, `i`.
    fn pair(&self, d: usize, r: &[BigInt], i: &[BigInt]) -> Vec<BigInt> {
        let (c, x) = (self.c, self.f.object(d));
        let v = self.f.target().compose_vectors((c, x, c), (0, r), (0, i));
        let v = if v.is_empty() { vec![BigInt::zero(); self.hom(c, c).rank(0)] } else { v };
        self.end.class_of(self.hom(c, c), &v).expect("composite of cycles is a cycle")
    }

    fn identity_class(&self) -> Vec<BigInt> {
        let id = self.f.target().identity_vector(self.c);
        self.end.class_of(self.hom(self.c, self.c), &id).expect("identity is a cycle")
    }

    /// One column `t·e_j` per torsion summand of `H₀ hom(c,c)`.
    fn torsion_columns(&self) -> Vec<Vec<BigInt>> {
        let s = self.end.summands();
        s.iter()
            .enumerate()
            .filter_map(|(j, z)| match z {
                Cyclic::Torsion(t) => {
                    let mut col = vec![BigInt::zero(); s.len()];
                    col[j] = t.clone();
                    Some(col)
                }
                Cyclic::Free => None,
            })
            .collect()
    }

    /// Solves `Σ x_j cols_j = target` modulo the torsion of `H₀ hom(c,c)`.
    fn solve(&self, cols: &[Vec<BigInt>], target: &[BigInt]) -> Option<Vec<BigInt>> {
        let rows = target.len();
        let torsion = self.torsion_columns();
        let all: Vec<&Vec<BigInt>> = cols.iter().chain(&torsion).collect();
        if rows == 0 {
            return Some(vec![BigInt::zero(); cols.len()]);
        }
        let a = Matrix::from_fn(rows, all.len(), |i, j| all[j][i].clone());
        solve(&a, target).map(|x| x[..cols.len()].to_vec())
    }
}

fn summand(g: &Groups<'_>, d: usize, inclusion: Vec<BigInt>, retraction: Vec<BigInt>) -> RetractSummand {
    RetractSummand {
        object: d,
        inclusion_cycle: g.into[d].representative(&inclusion),
        retraction_cycle: g.out[d].representative(&retraction),
        inclusion,
        retraction,
    }
}

/// Class-coordinate vectors of a group with free coordinates in `[−b, b]`
/// and torsion coordinates in `[0, t)`, excluding zero.
fn class_box(h: &HomologyDegree, b: i64) -> Vec<Vec<BigInt>> {
    let ranges: Vec<Vec<BigInt>> = h
        .summands()
        .iter()
        .map(|z| match z {
            Cyclic::Free => (-b..=b).map(BigInt::from).collect(),
            Cyclic::Torsion(t) => {
                let mut v = Vec::new();
                let mut k = BigInt::zero();
                while &k < t {
                    v.push(k.clone());
                    k += 1;
                }
                v
            }
        })
        .collect();
    let mut out: Vec<Vec<BigInt>> = vec![Vec::new()];
    for r in &ranges {
        out = out.iter().flat_map(|p| r.iter().map(move |x| [p.clone(), vec![x.clone()]].concat())).collect();
    }
    out.retain(|v| v.iter().any(|x| !x.is_zero()));
    out
}

/// Multisets of size `k` from `0..n`, as non-decreasing sequences.
fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    multisets(n, k - 1)
        .into_iter()
        .flat_map(|m| {
            let start = m.last().copied().unwrap_or(0);
            (start..n).map(move |x| [m.clone(), vec![x]].concat())
        })
        .collect()
}

/// Next choice of inclusion classes, non-decreasing within runs of equal
/// objects.
fn advance(choice: &mut [usize], objs: &[usize], boxes: &[Vec<Vec<BigInt>>]) -> bool {
    for pos in (0..choice.len()).rev() {
        if choice[pos] + 1 < boxes[objs[pos]].len() {
            choice[pos] += 1;
            for q in pos + 1..choice.len() {
                choice[q] = if objs[q] == objs[q - 1] { choice[q - 1] } else { 0 };
            }
            return true;
        }
    }
    false
}

/// True iff `Σ r_k ∘ i_k` represents `[id_c]`.
pub fn verify_retract(f: &DgFunctor, w: &RetractWitness) -> bool {
    let g = groups(f, w.object);
    let h = g.hom(w.object, w.object);
    let mut total = vec![BigInt::zero(); h.rank(0)];
    for s in &w.summands {
        let x = f.object(s.object);
        let v = f.target().compose_vectors((w.object, x, w.object), (0, &s.retraction_cycle), (0, &s.inclusion_cycle));
        for (t, y) in total.iter_mut().zip(v) {
            *t += y;
        }
    }
    g.end.class_of(h, &total) == Some(g.identity_class())
}

fn groups(f: &DgFunctor, c: usize) -> Groups<'_> {
    let t = f.target();
    let n = f.source().object_count();
    Groups {
        f,
        c,
        end: HomologyDegree::compute(t.hom(c, c), 0),
        into: (0..n).map(|d| HomologyDegree::compute(t.hom(c, f.object(d)), 0)).collect(),
        out: (0..n).map(|d| HomologyDegree::compute(t.hom(f.object(d), c), 0)).collect(),
    }
}

/// Searches for `c → ⊕ Fd_k → c` composing to `[id_c]` in `H₀`.
///
/// First decides membership of `[id_c]` in the span of all generator
/// composites; a solution there is grouped by inclusion class and returned if
/// it fits `max_summands`. Otherwise multisets of objects and inclusion
/// classes in the coefficient box are tried, each with one linear system for
/// the retractions.
pub fn h0_retract_witness(f: &DgFunctor, c: usize, bounds: SearchBounds) -> RetractSearch {
    let g = groups(f, c);
    let n = f.source().object_count();
    let target = g.identity_class();
    if g.end.is_zero_class(&target) {
        return RetractSearch::Found(RetractWitness { object: c, summands: Vec::new() });
    }
    let unit = |len: usize, j: usize| -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); len];
        v[j] = BigInt::one();
        v
    };
    let mut pairs = Vec::new();
    for d in 0..n {
        let (ni, no) = (g.into[d].summands().len(), g.out[d].summands().len());
        for a in 0..ni {
            for b in 0..no {
                pairs.push((d, a, b));
            }
        }
    }
    if pairs.is_empty() {
        return RetractSearch::CertifiedNonexistent(NonexistenceReason::VanishingGroups);
    }
    let gens_in: Vec<Vec<Vec<BigInt>>> = g.into.iter().map(HomologyDegree::generators).collect();
    let gens_out: Vec<Vec<Vec<BigInt>>> = g.out.iter().map(HomologyDegree::generators).collect();
    let cols: Vec<Vec<BigInt>> = pairs.iter().map(|&(d, a, b)| g.pair(d, &gens_out[d][b], &gens_in[d][a])).collect();
    let Some(x) = g.solve(&cols, &target) else {
        return RetractSearch::CertifiedNonexistent(NonexistenceReason::OutsideCompositeSpan);
    };
    // Group the span solution by inclusion generator.
    let mut grouped: Vec<RetractSummand> = Vec::new();
    for d in 0..n {
        let no = g.out[d].summands().len();
        for a in 0..g.into[d].summands().len() {
            let mut r = vec![BigInt::zero(); no];
            for (k, &(pd, pa, pb)) in pairs.iter().enumerate() {
                if pd == d && pa == a {
                    r[pb] += &x[k];
                }
            }
            if r.iter().any(|v| !v.is_zero()) {
                grouped.push(summand(&g, d, unit(g.into[d].summands().len(), a), r));
            }
        }
    }
    let w = RetractWitness { object: c, summands: grouped };
    if w.summands.len() <= bounds.max_summands && verify_retract(f, &w) {
        return RetractSearch::Found(w);
    }
    let boxes: Vec<Vec<Vec<BigInt>>> = g.into.iter().map(|h| class_box(h, bounds.coefficient_box)).collect();
    let mut systems = 0;
    for k in 1..=bounds.max_summands {
        for objs in multisets(n, k) {
            if objs.iter().any(|&d| boxes[d].is_empty() || gens_out[d].is_empty()) {
                continue;
            }
            let mut choice = vec![0usize; k];
            loop {
                if systems >= bounds.budget {
                    return RetractSearch::NotFoundWithinBounds { systems };
                }
                systems += 1;
                let mut cols = Vec::new();
                let mut owners = Vec::new();
                for (slot, &d) in objs.iter().enumerate() {
                    let i_cycle = g.into[d].representative(&boxes[d][choice[slot]]);
                    for (b, r) in gens_out[d].iter().enumerate() {
                        cols.push(g.pair(d, r, &i_cycle));
                        owners.push((slot, b));
                    }
                }
                if let Some(y) = g.solve(&cols, &target) {
                    let summands = objs
                        .iter()
                        .enumerate()
                        .map(|(slot, &d)| {
                            let mut r = vec![BigInt::zero(); gens_out[d].len()];
                            for (j, &(s, b)) in owners.iter().enumerate() {
                                if s == slot {
                                    r[b] += &y[j];
                                }
                            }
                            summand(&g, d, boxes[d][choice[slot]].clone(), r)
                        })
                        .collect();
                    let w = RetractWitness { object: c, summands };
                    if verify_retract(f, &w) {
                        return RetractSearch::Found(w);
                    }
                }
                if !advance(&mut choice, &objs, &boxes) {
                    break;
                }
            }
        }
    }
    RetractSearch::NotFoundWithinBounds { systems }
}
