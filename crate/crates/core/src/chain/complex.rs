use std::borrow::Cow;
use std::fmt;
use std::ops::RangeInclusive;
use std::sync::Arc;

use num_bigint::BigInt;

use super::error::{ChainError, ComplexViolation};
use super::matrix::Matrix;
use super::smith;

pub type Degree = i32;

/// A bounded, degreewise free chain complex over ℤ.
///
/// The differential `diff(n)` maps degree `n` to degree `n − 1` and has shape
/// `rank(n − 1) × rank(n)`. Ranks are stored trimmed to the nonzero support.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ChainComplex {
    lo: Degree,
    ranks: Vec<usize>,
    diffs: Vec<Matrix>,
}

impl ChainComplex {
    pub fn zero() -> Self {
        ChainComplex { lo: 0, ranks: Vec::new(), diffs: Vec::new() }
    }

    /// Builds a complex with ranks `ranks[k]` in degree `lo + k` and
    /// differentials `diffs[k]` leaving degree `lo + k`. Only shapes are
    /// checked; see [`validate_complex`] for `d² = 0`.
    pub fn new(lo: Degree, ranks: Vec<usize>, diffs: Vec<Matrix>) -> Result<Self, ChainError> {
        if ranks.len() != diffs.len() {
            return Err(ChainError::Malformed(format!(
                "{} ranks but {} differentials",
                ranks.len(),
                diffs.len()
            )));
        }
        for (k, d) in diffs.iter().enumerate() {
            let below = if k == 0 { 0 } else { ranks[k - 1] };
            if d.shape() != (below, ranks[k]) {
                return Err(ChainError::Shape {
                    degree: lo + k as Degree,
                    expected: (below, ranks[k]),
                    found: d.shape(),
                });
            }
        }
        Ok(ChainComplex { lo, ranks, diffs }.trim())
    }

    /// Builds a complex from sparse `(degree, rank)` and `(degree, matrix)`
    /// lists; unlisted differentials are zero.
    pub fn from_parts(ranks: &[(Degree, usize)], diffs: Vec<(Degree, Matrix)>) -> Result<Self, ChainError> {
        let degrees = ranks.iter().map(|r| r.0).chain(diffs.iter().flat_map(|d| [d.0 - 1, d.0]));
        let (Some(lo), Some(hi)) = (degrees.clone().min(), degrees.max()) else {
            return Ok(ChainComplex::zero());
        };
        let len = (hi - lo + 1) as usize;
        let mut rk = vec![0usize; len];
        let mut seen = vec![false; len];
        for &(n, r) in ranks {
            let k = (n - lo) as usize;
            if seen[k] {
                return Err(ChainError::Malformed(format!("rank of degree {n} given twice")));
            }
            seen[k] = true;
            rk[k] = r;
        }
        let mut ds: Vec<Option<Matrix>> = vec![None; len];
        for (n, m) in diffs {
            let k = (n - lo) as usize;
            if ds[k].is_some() {
                return Err(ChainError::Malformed(format!("differential of degree {n} given twice")));
            }
            ds[k] = Some(m);
        }
        let diffs = ds
            .into_iter()
            .enumerate()
            .map(|(k, d)| d.unwrap_or_else(|| Matrix::zeros(if k == 0 { 0 } else { rk[k - 1] }, rk[k])))
            .collect();
        ChainComplex::new(lo, rk, diffs)
    }

    /// `ℤ^rank` concentrated in a single degree.
    pub fn concentrated(degree: Degree, rank: usize) -> Self {
        ChainComplex { lo: degree, ranks: vec![rank], diffs: vec![Matrix::zeros(0, rank)] }.trim()
    }

    /// The complex `ℤ[k]`: one generator in degree `k`.
    pub fn z(k: Degree) -> Self {
        Self::concentrated(k, 1)
    }

    /// The two-term complex `ℤ^c —m→ ℤ^r` with the source in degree `top`.
    pub fn two_term(top: Degree, m: Matrix) -> Self {
        let (r, c) = m.shape();
        ChainComplex::new(top - 1, vec![r, c], vec![Matrix::zeros(0, r), m]).expect("shapes agree")
    }

    fn trim(mut self) -> Self {
        let first = self.ranks.iter().position(|&r| r > 0);
        let Some(first) = first else {
            return ChainComplex::zero();
        };
        let last = self.ranks.iter().rposition(|&r| r > 0).unwrap_or(first);
        self.ranks.truncate(last + 1);
        self.diffs.truncate(last + 1);
        self.ranks.drain(..first);
        self.diffs.drain(..first);
        if let Some(d) = self.diffs.first_mut() {
            *d = Matrix::zeros(0, d.cols());
        }
        self.lo += first as Degree;
        self
    }

    /// Lowest and highest degree of nonzero rank, `None` for the zero complex.
    pub fn support(&self) -> Option<(Degree, Degree)> {
        (!self.ranks.is_empty()).then(|| (self.lo, self.lo + self.ranks.len() as Degree - 1))
    }

    /// Degrees in the support (empty range for the zero complex).
    pub fn degrees(&self) -> RangeInclusive<Degree> {
        match self.support() {
            Some((a, b)) => a..=b,
            None => 1..=0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn rank(&self, n: Degree) -> usize {
        self.index(n).map_or(0, |k| self.ranks[k])
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.iter().sum()
    }

    /// The differential leaving degree `n`, shape `rank(n−1) × rank(n)`.
    pub fn diff(&self, n: Degree) -> Cow<'_, Matrix> {
        match self.index(n) {
            Some(k) if k > 0 => Cow::Borrowed(&self.diffs[k]),
            _ => Cow::Owned(Matrix::zeros(self.rank(n - 1), self.rank(n))),
        }
    }

    fn index(&self, n: Degree) -> Option<usize> {
        let k = n.checked_sub(self.lo)?;
        (k >= 0 && (k as usize) < self.ranks.len()).then_some(k as usize)
    }

    pub fn euler_characteristic(&self) -> BigInt {
        self.degrees()
            .map(|n| {
                let r = BigInt::from(self.rank(n));
                if n.rem_euclid(2) == 0 {
                    r
                } else {
                    -r
                }
            })
            .sum()
    }

    /// Lowest degree with nonzero rank, if any.
    pub fn min_degree(&self) -> Option<Degree> {
        self.support().map(|s| s.0)
    }

    pub fn max_degree(&self) -> Option<Degree> {
        self.support().map(|s| s.1)
    }

    pub fn into_arc(self) -> Arc<ChainComplex> {
        Arc::new(self)
    }
}

impl fmt::Debug for ChainComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChainComplex{{")?;
        for n in self.degrees() {
            write!(f, " {}:{}", n, self.rank(n))?;
            if self.rank(n - 1) > 0 && self.rank(n) > 0 {
                write!(f, " d={}", self.diff(n))?;
            }
        }
        write!(f, " }}")
    }
}

/// Checks shapes and `d ∘ d = 0`, naming the first failing degree.
pub fn validate_complex(c: &ChainComplex) -> Result<(), ComplexViolation> {
    for n in c.degrees() {
        let d = c.diff(n);
        let expected = (c.rank(n - 1), c.rank(n));
        if d.shape() != expected {
            return Err(ComplexViolation::Shape { degree: n, expected, found: d.shape() });
        }
    }
    for n in c.degrees() {
        if c.rank(n - 2) == 0 || c.rank(n) == 0 {
            continue;
        }
        if !(&*c.diff(n - 1) * &*c.diff(n)).is_zero() {
            return Err(ComplexViolation::DSquared { degree: n });
        }
    }
    Ok(())
}

/// A degree-zero family of matrices `source_n → target_n`.
///
/// [`ChainMap::new`] enforces commutation with the differentials; the
/// unchecked constructor is used for internal maps that are chain maps by
/// construction and for non-chain graded maps such as chosen sections.
#[derive(Clone, PartialEq, Eq)]
pub struct ChainMap {
    source: Arc<ChainComplex>,
    target: Arc<ChainComplex>,
    lo: Degree,
    comps: Vec<Matrix>,
}

impl ChainMap {
    /// Builds a chain map from `(degree, matrix)` components; missing
    /// components are zero. Checks shapes and commutation.
    pub fn new(
        source: Arc<ChainComplex>,
        target: Arc<ChainComplex>,
        comps: Vec<(Degree, Matrix)>,
    ) -> Result<Self, ChainError> {
        for (n, m) in &comps {
            let expected = (target.rank(*n), source.rank(*n));
            if m.shape() != expected {
                return Err(ChainError::Shape { degree: *n, expected, found: m.shape() });
            }
        }
        let mut by_degree: std::collections::BTreeMap<Degree, Matrix> = comps.into_iter().collect();
        let f = ChainMap::from_fn(source, target, |n, _| by_degree.remove(&n));
        f.check()?;
        Ok(f)
    }

    /// Builds a graded map from a per-degree generator; `None` means zero.
    /// Shapes are asserted.
    pub fn from_fn(
        source: Arc<ChainComplex>,
        target: Arc<ChainComplex>,
        mut f: impl FnMut(Degree, (usize, usize)) -> Option<Matrix>,
    ) -> Self {
        let lo = source.support().map_or(0, |s| s.0);
        let comps = source
            .degrees()
            .map(|n| {
                let shape = (target.rank(n), source.rank(n));
                match f(n, shape) {
                    Some(m) => {
                        assert_eq!(m.shape(), shape, "component shape mismatch in degree {n}");
                        m
                    }
                    None => Matrix::zeros(shape.0, shape.1),
                }
            })
            .collect();
        ChainMap { source, target, lo, comps }
    }

    pub fn identity(c: Arc<ChainComplex>) -> Self {
        ChainMap::from_fn(c.clone(), c, |_, (r, _)| Some(Matrix::identity(r)))
    }

    pub fn zero(source: Arc<ChainComplex>, target: Arc<ChainComplex>) -> Self {
        ChainMap::from_fn(source, target, |_, _| None)
    }

    pub fn source(&self) -> &Arc<ChainComplex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<ChainComplex> {
        &self.target
    }

    /// Component in degree `n`, shape `target.rank(n) × source.rank(n)`.
    pub fn component(&self, n: Degree) -> Cow<'_, Matrix> {
        let k = n - self.lo;
        if k >= 0 && (k as usize) < self.comps.len() {
            Cow::Borrowed(&self.comps[k as usize])
        } else {
            Cow::Owned(Matrix::zeros(self.target.rank(n), self.source.rank(n)))
        }
    }

    /// Checks `d_T · f_n = f_{n−1} · d_S` in every degree.
    pub fn check(&self) -> Result<(), ChainError> {
        let (s, t) = (&self.source, &self.target);
        let lo = [s.min_degree(), t.min_degree()].into_iter().flatten().min();
        let hi = [s.max_degree(), t.max_degree()].into_iter().flatten().max();
        let (Some(lo), Some(hi)) = (lo, hi) else { return Ok(()) };
        for n in lo..=hi + 1 {
            let left = &*t.diff(n) * &*self.component(n);
            let right = &*self.component(n - 1) * &*s.diff(n);
            if left != right {
                return Err(ChainError::NotChainMap { degree: n });
            }
        }
        Ok(())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ChainMap) -> ChainMap {
        assert!(
            *other.target == *self.source,
            "composition of chain maps with mismatched middle complex"
        );
        ChainMap::from_fn(other.source.clone(), self.target.clone(), |n, _| {
            Some(&*self.component(n) * &*other.component(n))
        })
    }

    fn zip_with(&self, other: &ChainMap, op: impl Fn(&Matrix, &Matrix) -> Matrix) -> ChainMap {
        assert!(
            *self.source == *other.source && *self.target == *other.target,
            "chain maps with different endpoints"
        );
        ChainMap::from_fn(self.source.clone(), self.target.clone(), |n, _| {
            Some(op(&self.component(n), &other.component(n)))
        })
    }

    pub fn add(&self, other: &ChainMap) -> ChainMap {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ChainMap) -> ChainMap {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn neg(&self) -> ChainMap {
        self.scale(&BigInt::from(-1))
    }

    pub fn scale(&self, k: &BigInt) -> ChainMap {
        ChainMap::from_fn(self.source.clone(), self.target.clone(), |n, _| {
            Some(self.component(n).scale(k))
        })
    }

    /// Same components, reinterpreted between equal complexes.
    pub fn retarget(&self, source: Arc<ChainComplex>, target: Arc<ChainComplex>) -> ChainMap {
        assert!(*source == *self.source && *target == *self.target, "retarget to unequal complexes");
        ChainMap { source, target, lo: self.lo, comps: self.comps.clone() }
    }

    /// Degrees where either endpoint is nonzero.
    pub fn degrees(&self) -> RangeInclusive<Degree> {
        let lo = [self.source.min_degree(), self.target.min_degree()].into_iter().flatten().min();
        let hi = [self.source.max_degree(), self.target.max_degree()].into_iter().flatten().max();
        match (lo, hi) {
            (Some(a), Some(b)) => a..=b,
            _ => 1..=0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Matrix::is_zero)
    }

    /// True iff every component is invertible over ℤ.
    pub fn is_isomorphism(&self) -> bool {
        self.degrees().all(|n| {
            let c = self.component(n);
            c.rows() == c.cols() && smith::inverse(&c).is_some()
        })
    }

    /// Componentwise inverse, when every component is unimodular.
    pub fn inverse(&self) -> Option<ChainMap> {
        let mut inv = Vec::new();
        for n in self.degrees() {
            inv.push((n, smith::inverse(&self.component(n))?));
        }
        let mut inv: std::collections::BTreeMap<_, _> = inv.into_iter().collect();
        Some(ChainMap::from_fn(self.target.clone(), self.source.clone(), |n, _| inv.remove(&n)))
    }
}

impl fmt::Debug for ChainMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChainMap{{")?;
        for n in self.degrees() {
            write!(f, " {}:{}", n, self.component(n))?;
        }
        write!(f, " }}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_complex_is_valid() {
        assert!(validate_complex(&ChainComplex::zero()).is_ok());
        assert_eq!(ChainComplex::zero().support(), None);
    }

    #[test]
    fn d_squared_violation_named() {
        let one = Matrix::from_i64(1, 1, &[1]);
        let c = ChainComplex::new(0, vec![1, 1, 1], vec![Matrix::zeros(0, 1), one.clone(), one]).unwrap();
        assert_eq!(validate_complex(&c), Err(ComplexViolation::DSquared { degree: 2 }));
    }

    #[test]
    fn two_term_is_valid() {
        let c = ChainComplex::two_term(1, Matrix::from_i64(1, 1, &[2]));
        assert!(validate_complex(&c).is_ok());
        assert_eq!(c.support(), Some((0, 1)));
    }

    #[test]
    fn shape_errors_reported() {
        let err = ChainComplex::new(0, vec![1, 2], vec![Matrix::zeros(0, 1), Matrix::zeros(1, 1)]);
        assert!(matches!(err, Err(ChainError::Shape { degree: 1, .. })));
    }

    #[test]
    fn trimming_drops_zero_ends() {
        let c = ChainComplex::new(-2, vec![0, 1, 0], vec![Matrix::zeros(0, 0), Matrix::zeros(0, 1), Matrix::zeros(1, 0)])
            .unwrap();
        assert_eq!(c, ChainComplex::z(-1));
    }

    #[test]
    fn chain_map_check() {
        let c = Arc::new(ChainComplex::two_term(1, Matrix::from_i64(1, 1, &[2])));
        assert!(ChainMap::identity(c.clone()).check().is_ok());
        let bad = ChainMap::new(c.clone(), c, vec![(0, Matrix::from_i64(1, 1, &[1]))]);
        assert!(matches!(bad, Err(ChainError::NotChainMap { .. })));
    }
}
