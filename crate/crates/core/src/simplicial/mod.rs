//! Truncated (augmented) simplicial objects in chain complexes.

mod dold_kan;
mod extra;
mod realize;

use std::sync::Arc;

use thiserror::Error;

use crate::chain::{ChainComplex, ChainError, ChainMap, Degree};

pub use dold_kan::{dold_kan_gamma, dold_kan_normalize, surjections};
pub use extra::{check_extra_degeneracy, collapse_check, CollapseVerdict, ExtraDegeneracyReport};
pub use realize::{
    normalize, normalize_level, realize, realize_normalized, realize_stability, NormalizedLevel, Normalization, Realization, Stability,
    TruncationCertificate, TruncationMode,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplicialError {
    #[error("simplicial object has no augmentation")]
    MissingAugmentation,
    #[error("simplicial object carries no extra degeneracy")]
    MissingExtraDegeneracy,
    #[error("{0}")]
    Malformed(String),
    #[error("level {level} is not concentrated in internal degree 0")]
    NotDiscrete { level: usize },
    #[error("input complex has nonzero rank in negative degree {degree}")]
    NegativeDegree { degree: Degree },
    #[error("degeneracies of level {level} do not split (cokernel torsion in degree {degree})")]
    NonSplitDegeneracies { level: usize, degree: Degree },
    #[error("truncation at {truncation} is only heuristic for window [{}, {}]", window.0, window.1)]
    HeuristicTruncation { truncation: usize, window: (Degree, Degree) },
    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// What is known about normalized levels beyond the truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailBound {
    /// Nothing is known.
    Unknown,
    /// Every normalized level `n` has internal degrees `≥ δ`, so its total
    /// degrees are `≥ n + δ`.
    MinInternalDegree(Degree),
    /// Normalized levels above the truncation vanish.
    Vanishing,
}

/// The augmentation `ε : X_0 → X_{−1}`.
#[derive(Clone, Debug)]
pub struct Augmentation {
    pub target: Arc<ChainComplex>,
    pub map: ChainMap,
}

/// Levels `X_0 … X_N` with faces, degeneracies, and optional augmentation
/// and extra degeneracy `s_{−1} : X_{n−1} → X_n` (`X_{−1}` the augmentation
/// target).
#[derive(Clone, Debug)]
pub struct SimplicialObject {
    levels: Vec<Arc<ChainComplex>>,
    faces: Vec<Vec<ChainMap>>,
    degeneracies: Vec<Vec<ChainMap>>,
    augmentation: Option<Augmentation>,
    extra: Option<Vec<ChainMap>>,
    tail: TailBound,
}

/// First simplicial relation that fails.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("relation {relation} fails")]
pub struct SimplicialViolation {
    pub relation: String,
}

fn same_endpoints(f: &ChainMap, s: &Arc<ChainComplex>, t: &Arc<ChainComplex>) -> bool {
    **f.source() == **s && **f.target() == **t
}

impl SimplicialObject {
    /// `faces[n]` holds `d_0 … d_n` on level `n` (empty for `n = 0`);
    /// `degeneracies[n]` holds `s_0 … s_n` on level `n < N`.
    pub fn new(
        levels: Vec<Arc<ChainComplex>>,
        faces: Vec<Vec<ChainMap>>,
        degeneracies: Vec<Vec<ChainMap>>,
    ) -> Result<Self, SimplicialError> {
        let bad = |m: String| Err(SimplicialError::Malformed(m));
        if levels.is_empty() {
            return bad("a simplicial object needs at least level 0".into());
        }
        let top = levels.len() - 1;
        if faces.len() != levels.len() || degeneracies.len() != top {
            return bad(format!("expected {} face lists and {} degeneracy lists", levels.len(), top));
        }
        for (n, fs) in faces.iter().enumerate() {
            let want = if n == 0 { 0 } else { n + 1 };
            if fs.len() != want {
                return bad(format!("level {n} has {} faces, expected {want}", fs.len()));
            }
            if let Some(i) = fs.iter().position(|f| !same_endpoints(f, &levels[n], &levels[n - 1])) {
                return bad(format!("face d{i} on level {n} has wrong endpoints"));
            }
        }
        for (n, ss) in degeneracies.iter().enumerate() {
            if ss.len() != n + 1 {
                return bad(format!("level {n} has {} degeneracies, expected {}", ss.len(), n + 1));
            }
            if let Some(j) = ss.iter().position(|s| !same_endpoints(s, &levels[n], &levels[n + 1])) {
                return bad(format!("degeneracy s{j} on level {n} has wrong endpoints"));
            }
        }
        Ok(SimplicialObject { levels, faces, degeneracies, augmentation: None, extra: None, tail: TailBound::Unknown })
    }

    /// Constant simplicial object on `c` truncated at `n`: all structure maps are identities.
    pub fn constant(c: Arc<ChainComplex>, n: usize) -> Self {
        let id = ChainMap::identity(c.clone());
        let levels = vec![c; n + 1];
        let faces = (0..=n).map(|k| if k == 0 { Vec::new() } else { vec![id.clone(); k + 1] }).collect();
        let degeneracies = (0..n).map(|k| vec![id.clone(); k + 1]).collect();
        SimplicialObject { levels, faces, degeneracies, augmentation: None, extra: None, tail: TailBound::Vanishing }
    }

    pub fn with_augmentation(mut self, target: Arc<ChainComplex>, map: ChainMap) -> Result<Self, SimplicialError> {
        if !same_endpoints(&map, &self.levels[0], &target) {
            return Err(SimplicialError::Malformed("augmentation must map level 0 to its target".into()));
        }
        self.augmentation = Some(Augmentation { target, map });
        Ok(self)
    }

    /// Installs `s_{−1}` maps, `extra[n] : X_{n−1} → X_n` for `n = 0 … N`.
    pub fn with_extra_degeneracy(mut self, extra: Vec<ChainMap>) -> Result<Self, SimplicialError> {
        let Some(aug) = &self.augmentation else {
            return Err(SimplicialError::MissingAugmentation);
        };
        if extra.len() != self.levels.len() {
            return Err(SimplicialError::Malformed(format!(
                "expected {} extra degeneracies, found {}",
                self.levels.len(),
                extra.len()
            )));
        }
        for (n, h) in extra.iter().enumerate() {
            let src = if n == 0 { &aug.target } else { &self.levels[n - 1] };
            if !same_endpoints(h, src, &self.levels[n]) {
                return Err(SimplicialError::Malformed(format!("extra degeneracy into level {n} has wrong endpoints")));
            }
        }
        self.extra = Some(extra);
        Ok(self)
    }

    pub fn with_tail(mut self, tail: TailBound) -> Self {
        self.tail = tail;
        self
    }

    pub fn without_extra_degeneracy(mut self) -> Self {
        self.extra = None;
        self
    }

    /// Truncation level `N`.
    pub fn truncation(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> &Arc<ChainComplex> {
        &self.levels[n]
    }

    pub fn levels(&self) -> &[Arc<ChainComplex>] {
        &self.levels
    }

    /// `d_i : X_n → X_{n−1}`.
    pub fn face(&self, n: usize, i: usize) -> &ChainMap {
        &self.faces[n][i]
    }

    /// `s_j : X_n → X_{n+1}`.
    pub fn degeneracy(&self, n: usize, j: usize) -> &ChainMap {
        &self.degeneracies[n][j]
    }

    pub fn augmentation(&self) -> Option<&Augmentation> {
        self.augmentation.as_ref()
    }

    /// `s_{−1} : X_{n−1} → X_n`.
    pub fn extra_degeneracy(&self, n: usize) -> Option<&ChainMap> {
        self.extra.as_ref().map(|e| &e[n])
    }

    pub fn has_extra_degeneracy(&self) -> bool {
        self.extra.is_some()
    }

    pub fn tail(&self) -> TailBound {
        self.tail
    }

    /// Total rank of each level, per internal degree.
    pub fn rank_table(&self) -> Vec<Vec<(Degree, usize)>> {
        self.levels.iter().map(|l| l.degrees().map(|k| (k, l.rank(k))).collect()).collect()
    }

    /// Alternating face sum `Σ (−1)^i d_i : X_n → X_{n−1}`.
    pub fn alternating_face_sum(&self, n: usize) -> ChainMap {
        let mut acc = ChainMap::zero(self.levels[n].clone(), self.levels[n - 1].clone());
        for (i, f) in self.faces[n].iter().enumerate() {
            acc = if i % 2 == 0 { acc.add(f) } else { acc.sub(f) };
        }
        acc
    }

    /// Checks that all structure maps are chain maps and that the simplicial
    /// identities and the augmentation condition hold exactly.
    pub fn validate(&self) -> Result<(), SimplicialViolation> {
        let fail = |relation: String| Err(SimplicialViolation { relation });
        for (n, fs) in self.faces.iter().enumerate() {
            for (i, f) in fs.iter().enumerate() {
                if f.check().is_err() {
                    return fail(format!("d{i} on level {n} is a chain map"));
                }
            }
        }
        for (n, ss) in self.degeneracies.iter().enumerate() {
            for (j, s) in ss.iter().enumerate() {
                if s.check().is_err() {
                    return fail(format!("s{j} on level {n} is a chain map"));
                }
            }
        }
        let top = self.truncation();
        for n in 2..=top {
            for j in 1..=n {
                for i in 0..j {
                    let lhs = self.face(n - 1, i).compose(self.face(n, j));
                    let rhs = self.face(n - 1, j - 1).compose(self.face(n, i));
                    if lhs != rhs {
                        return fail(format!("d{i}∘d{j} = d{}∘d{i} on level {n}", j - 1));
                    }
                }
            }
        }
        for n in 0..top {
            for j in 0..=n {
                let s = self.degeneracy(n, j);
                for i in 0..=n + 1 {
                    let lhs = self.face(n + 1, i).compose(s);
                    let ok = if i == j || i == j + 1 {
                        lhs == ChainMap::identity(self.levels[n].clone())
                    } else if i < j {
                        lhs == self.degeneracy(n - 1, j - 1).compose(self.face(n, i))
                    } else {
                        lhs == self.degeneracy(n - 1, j).compose(self.face(n, i - 1))
                    };
                    if !ok {
                        return fail(format!("d{i}∘s{j} on level {n}"));
                    }
                }
            }
        }
        for n in 0..top.saturating_sub(1) {
            for j in 0..=n {
                for i in 0..=j {
                    let lhs = self.degeneracy(n + 1, i).compose(self.degeneracy(n, j));
                    let rhs = self.degeneracy(n + 1, j + 1).compose(self.degeneracy(n, i));
                    if lhs != rhs {
                        return fail(format!("s{i}∘s{j} = s{}∘s{i} on level {n}", j + 1));
                    }
                }
            }
        }
        if let Some(aug) = &self.augmentation {
            if aug.map.check().is_err() {
                return fail("augmentation is a chain map".into());
            }
            if top >= 1 && aug.map.compose(self.face(1, 0)) != aug.map.compose(self.face(1, 1)) {
                return fail("ε∘d0 = ε∘d1".into());
            }
        }
        Ok(())
    }
}

/// Matrix of `k` times the identity on a complex, as a chain map.
#[cfg(test)]
pub(crate) fn scalar_map(c: Arc<ChainComplex>, k: i64) -> ChainMap {
    ChainMap::from_fn(c.clone(), c, |_, (r, _)| Some(crate::chain::Matrix::scalar(r, k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::Matrix;

    #[test]
    fn constant_object_is_valid() {
        let c = Arc::new(ChainComplex::two_term(1, Matrix::from_i64(1, 1, &[2])));
        let x = SimplicialObject::constant(c, 3);
        assert!(x.validate().is_ok());
        assert_eq!(x.truncation(), 3);
    }

    #[test]
    fn broken_face_detected() {
        let c = Arc::new(ChainComplex::z(0));
        let x = SimplicialObject::constant(c.clone(), 2);
        let mut faces = x.faces.clone();
        faces[2][1] = scalar_map(c.clone(), 2);
        let y = SimplicialObject::new(x.levels.clone(), faces, x.degeneracies.clone()).unwrap();
        assert!(y.validate().is_err());
    }
}
