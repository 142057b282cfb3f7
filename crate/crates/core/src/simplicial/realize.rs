//! Normalization by degeneracies and realization as a total complex.

use std::sync::Arc;

use super::{Augmentation, SimplicialError, SimplicialObject, TailBound};
use crate::chain::smith::cokernel;
use crate::chain::{homology, ChainComplex, ChainMap, Degree, GradedAbelianGroup, Matrix};

/// `X_n / (im s_0 + … + im s_{n−1})` with projection and representatives.
#[derive(Clone, Debug)]
pub struct NormalizedLevel {
    pub complex: Arc<ChainComplex>,
    /// `X_n → N_n`.
    pub projection: ChainMap,
    /// Graded section `N_n → X_n` of the projection (not a chain map in general).
    pub section: ChainMap,
}

/// The normalized levels `N_0 … N_N` with their boundaries.
#[derive(Clone, Debug)]
pub struct Normalization {
    pub levels: Vec<Arc<ChainComplex>>,
    /// Induced `Σ (−1)^i d_i : N_n → N_{n−1}`, indexed by `n ≥ 1` (entry 0 unused).
    pub boundaries: Vec<ChainMap>,
}

/// Level `n` of [`normalize`] together with its projection and section.
pub fn normalize_level(x: &SimplicialObject, n: usize) -> Result<NormalizedLevel, SimplicialError> {
    let level = x.level(n).clone();
    if n == 0 {
        let id = ChainMap::identity(level.clone());
        return Ok(NormalizedLevel { complex: level, projection: id.clone(), section: id });
    }
    let mut projs = Vec::new();
    let mut sects = Vec::new();
    let mut ranks = Vec::new();
    let degrees: Vec<Degree> = level.degrees().collect();
    for &k in &degrees {
        let blocks: Vec<_> = (0..n).map(|j| x.degeneracy(n - 1, j).component(k)).collect();
        let refs: Vec<&Matrix> = blocks.iter().map(|b| &**b).collect();
        let stacked = Matrix::hstack(level.rank(k), &refs);
        let c = cokernel(&stacked);
        if !c.is_free() {
            return Err(SimplicialError::NonSplitDegeneracies { level: n, degree: k });
        }
        ranks.push(c.proj.rows());
        projs.push(c.proj);
        sects.push(c.section);
    }
    let Some(&lo) = degrees.first() else {
        let z = Arc::new(ChainComplex::zero());
        return Ok(NormalizedLevel {
            complex: z.clone(),
            projection: ChainMap::zero(level.clone(), z.clone()),
            section: ChainMap::zero(z, level),
        });
    };
    let mut diffs = Vec::with_capacity(degrees.len());
    for (idx, &k) in degrees.iter().enumerate() {
        if idx == 0 {
            diffs.push(Matrix::zeros(0, ranks[0]));
        } else {
            diffs.push(&(&projs[idx - 1] * &*level.diff(k)) * &sects[idx]);
        }
    }
    let complex = Arc::new(ChainComplex::new(lo, ranks.clone(), diffs)?);
    let at = |k: Degree| (k - lo) as usize;
    let projection = ChainMap::from_fn(level.clone(), complex.clone(), |k, (r, c)| {
        let m = &projs[at(k)];
        Some(if m.rows() == r { m.clone() } else { Matrix::zeros(r, c) })
    });
    let section = ChainMap::from_fn(complex.clone(), level, |k, (r, c)| {
        let m = &sects[at(k)];
        Some(if m.cols() == c { m.clone() } else { Matrix::zeros(r, c) })
    });
    Ok(NormalizedLevel { complex, projection, section })
}

/// Normalizes every level by quotienting out degenerate elements.
pub fn normalize(x: &SimplicialObject) -> Result<Normalization, SimplicialError> {
    let levels: Vec<NormalizedLevel> =
        (0..=x.truncation()).map(|n| normalize_level(x, n)).collect::<Result<_, _>>()?;
    let mut boundaries = vec![ChainMap::zero(levels[0].complex.clone(), levels[0].complex.clone())];
    for n in 1..levels.len() {
        let d = x.alternating_face_sum(n);
        boundaries.push(levels[n - 1].projection.compose(&d).compose(&levels[n].section));
    }
    Ok(Normalization { levels: levels.into_iter().map(|l| l.complex).collect(), boundaries })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TruncationMode {
    /// Homology on the window equals that of the untruncated realization.
    Sound,
    /// No such guarantee; see [`Stability`].
    Heuristic,
}

/// Result of comparing truncations `N` and `N+1` on the window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stability {
    Stable,
    Unstable,
}

/// Why a truncated realization can (or cannot) be trusted on a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncationCertificate {
    pub mode: TruncationMode,
    pub window: (Degree, Degree),
    pub truncation: usize,
    /// Lowest total degree of the normalized part of each level `0 … N`.
    pub level_min_degree: Vec<Option<Degree>>,
    /// Lower bound on total degrees of normalized levels above `N`
    /// (`None`: unbounded or unknown; levels that vanish report no bound).
    pub tail_min_degree: Option<Degree>,
    /// Filled in when a heuristic truncation was compared with the next one.
    pub stability: Option<Stability>,
}

impl TruncationCertificate {
    pub fn is_sound(&self) -> bool {
        self.mode == TruncationMode::Sound
    }

    /// Sound, or heuristic and found stable.
    pub fn is_trusted(&self) -> bool {
        self.is_sound() || self.stability == Some(Stability::Stable)
    }
}

/// A truncated realization `|X|` and its augmentation map when present.
#[derive(Clone, Debug)]
pub struct Realization {
    pub complex: Arc<ChainComplex>,
    pub certificate: TruncationCertificate,
    pub normalization: Normalization,
    /// `|X| → X_{−1}` induced by the augmentation.
    pub augmentation: Option<ChainMap>,
}

fn certificate(norm: &Normalization, tail: TailBound, window: (Degree, Degree)) -> TruncationCertificate {
    let top = norm.levels.len() - 1;
    let level_min_degree =
        norm.levels.iter().enumerate().map(|(n, l)| l.min_degree().map(|k| k + n as Degree)).collect();
    let (mode, tail_min_degree) = match tail {
        TailBound::Vanishing => (TruncationMode::Sound, None),
        TailBound::MinInternalDegree(d) => {
            let tail = top as Degree + 1 + d;
            let mode = if tail > window.1 + 1 { TruncationMode::Sound } else { TruncationMode::Heuristic };
            (mode, Some(tail))
        }
        TailBound::Unknown => (TruncationMode::Heuristic, None),
    };
    TruncationCertificate { mode, window, truncation: top, level_min_degree, tail_min_degree, stability: None }
}

/// Total complex of the normalized double complex: degree `m` is
/// `⊕_{n+k=m} N(X_n)_k` (level ascending) with differential
/// `d_internal + (−1)^k Σ(−1)^i d_i`.
pub fn realize(x: &SimplicialObject, window: (Degree, Degree)) -> Result<Realization, SimplicialError> {
    realize_normalized(normalize(x)?, x.tail(), x.augmentation(), window)
}

/// [`realize`] from an already normalized object. `augmentation` starts at
/// level 0, which normalization leaves unchanged.
pub fn realize_normalized(
    norm: Normalization,
    tail: TailBound,
    augmentation: Option<&Augmentation>,
    window: (Degree, Degree),
) -> Result<Realization, SimplicialError> {
    let top = norm.levels.len() - 1;
    let parts: Vec<&Arc<ChainComplex>> = norm.levels.iter().collect();
    let lo = parts.iter().enumerate().filter_map(|(n, c)| c.min_degree().map(|k| k + n as Degree)).min();
    let hi = parts.iter().enumerate().filter_map(|(n, c)| c.max_degree().map(|k| k + n as Degree)).max();
    let offset = |m: Degree, n: usize| -> usize { (0..n).map(|l| parts[l].rank(m - l as Degree)).sum() };
    let total = |m: Degree| -> usize { offset(m, top + 1) };
    let complex = match (lo, hi) {
        (Some(lo), Some(hi)) => {
            let mut ranks = Vec::new();
            let mut diffs = Vec::new();
            for m in lo..=hi {
                ranks.push(total(m));
                let mut d = Matrix::zeros(total(m - 1), total(m));
                for n in 0..=top {
                    let k = m - n as Degree;
                    if parts[n].rank(k) == 0 {
                        continue;
                    }
                    let col = offset(m, n);
                    d.set_block(offset(m - 1, n), col, &parts[n].diff(k));
                    if n > 0 {
                        let b = norm.boundaries[n].component(k);
                        let b = if k.rem_euclid(2) == 0 { b.into_owned() } else { -&*b };
                        d.set_block(offset(m - 1, n - 1), col, &b);
                    }
                }
                diffs.push(d);
            }
            ChainComplex::new(lo, ranks, diffs)?
        }
        _ => ChainComplex::zero(),
    };
    let complex = Arc::new(complex);
    let augmentation = augmentation.map(|aug| {
        ChainMap::from_fn(complex.clone(), aug.target.clone(), |m, (r, c)| {
            let mut out = Matrix::zeros(r, c);
            if parts[0].rank(m) > 0 && r > 0 {
                out.set_block(0, 0, &aug.map.component(m));
            }
            Some(out)
        })
    });
    let certificate = certificate(&norm, tail, window);
    Ok(Realization { complex, certificate, normalization: norm, augmentation })
}

impl Realization {
    pub fn homology(&self) -> GradedAbelianGroup {
        homology(&self.complex, self.certificate.window)
    }

    /// Position of the level-`n` summand inside total degree `m`.
    pub fn level_offset(&self, m: Degree, n: usize) -> usize {
        (0..n).map(|l| self.normalization.levels[l].rank(m - l as Degree)).sum()
    }
}

/// Compares realizations of two truncations on the window.
pub fn realize_stability(lower: &Realization, upper: &Realization) -> Stability {
    if lower.homology() == upper.homology() {
        Stability::Stable
    } else {
        Stability::Unstable
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{validate_complex, Matrix};

    #[test]
    fn constant_normalizes_to_level_zero() {
        let c = Arc::new(ChainComplex::two_term(1, Matrix::from_i64(1, 1, &[2])));
        let x = SimplicialObject::constant(c.clone(), 3);
        let norm = normalize(&x).unwrap();
        assert_eq!(*norm.levels[0], *c);
        assert!(norm.levels[1..].iter().all(|l| l.is_zero()));
        let r = realize(&x, (0, 1)).unwrap();
        assert_eq!(*r.complex, *c);
        assert!(r.certificate.is_sound());
        assert!(validate_complex(&r.complex).is_ok());
    }
}
