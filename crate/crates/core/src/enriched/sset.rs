//! Finite simplicial sets presented by their nondegenerate simplices.

use std::collections::BTreeMap;

use super::category::{Arrow, FiniteCategory};
use super::EnrichedError;
use crate::chain::{ChainComplex, Degree, Matrix};

/// Nondegenerate simplices up to a dimension cap, with faces. A face that is
/// degenerate is recorded as `None`; it vanishes in normalized chains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialSet {
    /// `faces[n][k][i]`: `d_i` of the `k`-th nondegenerate `n`-simplex.
    faces: Vec<Vec<Vec<Option<usize>>>>,
    counts: Vec<usize>,
    /// Nondegenerate simplices above the top dimension were dropped.
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("face identity d{i}∘d{j} = d{}∘d{i} fails on simplex {simplex} of dimension {dim}", j - 1)]
pub struct FaceViolation {
    pub dim: usize,
    pub simplex: usize,
    pub i: usize,
    pub j: usize,
}

impl SimplicialSet {
    /// `counts[n]` nondegenerate `n`-simplices with face table
    /// `faces[n][k]` of length `n+1` (empty for `n = 0`).
    pub fn new(faces: Vec<Vec<Vec<Option<usize>>>>, truncated: bool) -> Result<Self, EnrichedError> {
        let counts: Vec<usize> = faces.iter().map(Vec::len).collect();
        for (n, level) in faces.iter().enumerate() {
            for (k, fs) in level.iter().enumerate() {
                let want = if n == 0 { 0 } else { n + 1 };
                if fs.len() != want {
                    return Err(EnrichedError::Malformed(format!("simplex {k} in dimension {n} has {} faces", fs.len())));
                }
                if fs.iter().flatten().any(|&f| f >= counts[n - 1]) {
                    return Err(EnrichedError::Malformed(format!("simplex {k} in dimension {n} has an unknown face")));
                }
            }
        }
        Ok(SimplicialSet { faces, counts, truncated })
    }

    pub fn empty() -> Self {
        SimplicialSet { faces: Vec::new(), counts: Vec::new(), truncated: false }
    }

    /// The ordered simplicial complex generated by the given vertex sets
    /// (each sorted ascending internally).
    pub fn from_facets(facets: &[Vec<usize>]) -> Self {
        let mut by_dim: Vec<BTreeMap<Vec<usize>, usize>> = Vec::new();
        let mut stack: Vec<Vec<usize>> = facets
            .iter()
            .map(|f| {
                let mut f = f.clone();
                f.sort_unstable();
                f.dedup();
                f
            })
            .filter(|f| !f.is_empty())
            .collect();
        let mut all = std::collections::BTreeSet::new();
        while let Some(s) = stack.pop() {
            if !all.insert(s.clone()) {
                continue;
            }
            if s.len() > 1 {
                for i in 0..s.len() {
                    let mut t = s.clone();
                    t.remove(i);
                    stack.push(t);
                }
            }
        }
        for s in &all {
            let n = s.len() - 1;
            while by_dim.len() <= n {
                by_dim.push(BTreeMap::new());
            }
            let k = by_dim[n].len();
            by_dim[n].insert(s.clone(), k);
        }
        for level in &mut by_dim {
            for (k, v) in level.values_mut().enumerate() {
                *v = k;
            }
        }
        let faces = by_dim
            .iter()
            .enumerate()
            .map(|(n, level)| {
                level
                    .keys()
                    .map(|s| {
                        if n == 0 {
                            return Vec::new();
                        }
                        (0..=n)
                            .map(|i| {
                                let mut t = s.clone();
                                t.remove(i);
                                Some(by_dim[n - 1][&t])
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Self::new(faces, false).expect("faces of a simplicial complex are consistent")
    }

    /// `Δⁿ`.
    pub fn delta(n: usize) -> Self {
        Self::from_facets(&[(0..=n).collect()])
    }

    /// `∂Δⁿ`.
    pub fn boundary(n: usize) -> Self {
        let facets: Vec<Vec<usize>> = (0..=n).map(|i| (0..=n).filter(|&j| j != i).collect()).collect();
        Self::from_facets(&facets)
    }

    /// Number of nondegenerate simplices in each dimension.
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn dimension(&self) -> Option<usize> {
        self.counts.iter().rposition(|&c| c > 0)
    }

    pub fn face(&self, n: usize, k: usize, i: usize) -> Option<usize> {
        self.faces[n][k][i]
    }

    /// Face identities on nondegenerate data: whenever `d_j x` and `d_i x`
    /// are nondegenerate for `i < j`, `d_i d_j x = d_{j−1} d_i x`.
    pub fn validate(&self) -> Result<(), FaceViolation> {
        for n in 2..self.faces.len() {
            for (k, fs) in self.faces[n].iter().enumerate() {
                for j in 1..=n {
                    for i in 0..j {
                        let (Some(a), Some(b)) = (fs[j], fs[i]) else { continue };
                        if self.faces[n - 1][a][i] != self.faces[n - 1][b][j - 1] {
                            return Err(FaceViolation { dim: n, simplex: k, i, j });
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// A nondegenerate simplex of a nerve: a chain of composable nonidentity
/// arrows `x_0 → x_1 → … → x_n` (objects for `n = 0`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum NerveSimplex {
    Object(usize),
    Chain(Vec<Arrow>),
}

/// A nerve together with the chain each simplex stands for.
#[derive(Clone, Debug)]
pub struct Nerve {
    pub sset: SimplicialSet,
    pub simplices: Vec<Vec<NerveSimplex>>,
}

/// The nerve of `cat`. With `cap = None` the category must be loop-free and
/// the nerve is exact; otherwise simplices above `cap` are dropped and the
/// result is flagged as truncated when any were.
pub fn nerve(cat: &FiniteCategory, cap: Option<usize>) -> Result<Nerve, EnrichedError> {
    let loop_free = cat.is_loop_free();
    if cap.is_none() && !loop_free {
        return Err(EnrichedError::Cyclic);
    }
    let top = cap.unwrap_or(cat.object_count().saturating_sub(1));
    let nonid: Vec<Arrow> = (0..cat.arrows().len()).filter(|&f| !cat.is_identity(f)).collect();
    let mut chains: Vec<Vec<Vec<Arrow>>> = vec![Vec::new(); top + 2];
    chains[1] = nonid.iter().map(|&f| vec![f]).collect();
    for n in 2..=top + 1 {
        let mut next = Vec::new();
        for c in &chains[n - 1] {
            let t = cat.arrow_data(*c.last().expect("nonempty")).target;
            for &g in &nonid {
                if cat.arrow_data(g).source == t {
                    let mut longer = c.clone();
                    longer.push(g);
                    next.push(longer);
                }
            }
        }
        chains[n] = next;
    }
    let truncated = top + 1 < chains.len() && !chains[top + 1].is_empty();
    chains.truncate(top + 1);
    let mut simplices: Vec<Vec<NerveSimplex>> =
        vec![(0..cat.object_count()).map(NerveSimplex::Object).collect()];
    simplices.extend(chains.iter().skip(1).map(|level| level.iter().cloned().map(NerveSimplex::Chain).collect()));
    let index: Vec<BTreeMap<Vec<Arrow>, usize>> =
        chains.iter().map(|level| level.iter().enumerate().map(|(k, c)| (c.clone(), k)).collect()).collect();
    let mut faces = vec![vec![Vec::new(); cat.object_count()]];
    for (n, level) in chains.iter().enumerate().skip(1) {
        let mut lf = Vec::with_capacity(level.len());
        for c in level {
            let mut fs = Vec::with_capacity(n + 1);
            for i in 0..=n {
                let face: Option<Vec<Arrow>> = if n == 1 {
                    let a = cat.arrow_data(c[0]);
                    fs.push(Some(if i == 0 { a.target } else { a.source }));
                    continue;
                } else if i == 0 {
                    Some(c[1..].to_vec())
                } else if i == n {
                    Some(c[..n - 1].to_vec())
                } else {
                    let gf = cat.compose(c[i], c[i - 1]).expect("composable");
                    if cat.is_identity(gf) {
                        None
                    } else {
                        let mut d = c[..i - 1].to_vec();
                        d.push(gf);
                        d.extend_from_slice(&c[i + 1..]);
                        Some(d)
                    }
                };
                fs.push(face.map(|d| index[n - 1][&d]));
            }
            lf.push(fs);
        }
        faces.push(lf);
    }
    let sset = SimplicialSet::new(faces, truncated)?;
    Ok(Nerve { sset, simplices })
}

/// Normalized chains `ℤK`: one generator per nondegenerate simplex,
/// differential `Σ (−1)^i d_i` with degenerate faces dropped.
pub fn zk_chains(k: &SimplicialSet) -> ChainComplex {
    let Some(top) = k.dimension() else {
        return ChainComplex::zero();
    };
    let ranks: Vec<usize> = k.counts[..=top].to_vec();
    let mut diffs = vec![Matrix::zeros(0, ranks[0])];
    for n in 1..=top {
        let mut d = Matrix::zeros(ranks[n - 1], ranks[n]);
        for (s, fs) in k.faces[n].iter().enumerate() {
            for (i, f) in fs.iter().enumerate() {
                if let Some(f) = f {
                    *d.entry_mut(*f, s) += if i % 2 == 0 { 1 } else { -1 };
                }
            }
        }
        diffs.push(d);
    }
    ChainComplex::new(0 as Degree, ranks, diffs).expect("face identities give d² = 0")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{homology_full, validate_complex, AbelianGroup};

    #[test]
    fn delta_and_boundary() {
        assert_eq!(SimplicialSet::delta(2).counts(), &[3, 3, 1]);
        let b = SimplicialSet::boundary(2);
        assert_eq!(b.validate(), Ok(()));
        let h = homology_full(&zk_chains(&b));
        assert_eq!(h.get(0), AbelianGroup::free(1));
        assert_eq!(h.get(1), AbelianGroup::free(1));
        let h = homology_full(&zk_chains(&SimplicialSet::delta(1)));
        assert_eq!(h.nonzero_part().len(), 1);
        assert_eq!(zk_chains(&SimplicialSet::empty()), ChainComplex::zero());
    }

    #[test]
    fn nerve_counts() {
        let n = nerve(&FiniteCategory::arrow(), None).unwrap();
        assert_eq!(n.sset.counts(), &[2, 1]);
        let n = nerve(&FiniteCategory::poset(3, &[(0, 1), (1, 2)]).unwrap(), None).unwrap();
        assert_eq!(n.sset.counts(), &[3, 3, 1]);
        assert!(!n.sset.truncated);
        assert_eq!(n.sset.validate(), Ok(()));
        assert!(validate_complex(&zk_chains(&n.sset)).is_ok());
    }

    #[test]
    fn cyclic_nerves_need_a_cap() {
        let c = FiniteCategory::poset(2, &[(0, 1), (1, 0)]).unwrap();
        assert!(matches!(nerve(&c, None), Err(EnrichedError::Cyclic)));
        let n = nerve(&c, Some(3)).unwrap();
        assert!(n.sset.truncated);
        assert_eq!(n.sset.validate(), Ok(()));
        let h = homology_full(&zk_chains(&n.sset));
        assert_eq!(h.get(0), AbelianGroup::free(1));
        assert_eq!(h.get(1), AbelianGroup::zero());
    }
}
