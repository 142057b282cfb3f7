//! Basis bookkeeping for iterated tensor products and direct sums.
//!
//! The basis of `(A_1 ⊗ … ⊗ A_r)_m` is ordered first by the degree tuple
//! `(p_1, …, p_r)` lexicographically, then by the index tuple with the first
//! factor most significant. For two factors this is "p ascending, Kronecker
//! order inside a block".

use std::collections::{BTreeMap, HashMap};
use std::ops::Range;
use std::sync::Arc;

use num_bigint::BigInt;

use super::complex::{ChainComplex, ChainMap, Degree};
use super::matrix::Matrix;

/// One summand `A_1,p_1 ⊗ … ⊗ A_r,p_r` of a tensor degree.
#[derive(Clone, Debug)]
pub struct Block {
    pub degrees: Vec<Degree>,
    pub dims: Vec<usize>,
    pub offset: usize,
    pub size: usize,
}

#[derive(Clone, Debug, Default)]
struct DegreeBlocks {
    blocks: Vec<Block>,
    lookup: HashMap<Vec<Degree>, usize>,
}

/// An ordered tensor product together with its basis layout.
#[derive(Clone, Debug)]
pub struct TensorLayout {
    factors: Vec<Arc<ChainComplex>>,
    degrees: BTreeMap<Degree, DegreeBlocks>,
    complex: Arc<ChainComplex>,
}

fn sign(parity: Degree) -> BigInt {
    if parity.rem_euclid(2) == 0 {
        BigInt::from(1)
    } else {
        BigInt::from(-1)
    }
}

impl TensorLayout {
    pub fn new(factors: Vec<Arc<ChainComplex>>) -> Self {
        let mut degrees: BTreeMap<Degree, DegreeBlocks> = BTreeMap::new();
        if factors.iter().all(|f| !f.is_zero()) {
            let mut tuple = Vec::with_capacity(factors.len());
            enumerate_tuples(&factors, &mut tuple, &mut |p| {
                let total: Degree = p.iter().sum();
                let dims: Vec<usize> = p.iter().zip(&factors).map(|(&d, f)| f.rank(d)).collect();
                let size = dims.iter().product();
                let entry = degrees.entry(total).or_default();
                let offset = entry.blocks.last().map_or(0, |b| b.offset + b.size);
                entry.lookup.insert(p.to_vec(), entry.blocks.len());
                entry.blocks.push(Block { degrees: p.to_vec(), dims, offset, size });
            });
        }
        let complex = Arc::new(build_complex(&factors, &degrees));
        TensorLayout { factors, degrees, complex }
    }

    pub fn factors(&self) -> &[Arc<ChainComplex>] {
        &self.factors
    }

    pub fn complex(&self) -> &Arc<ChainComplex> {
        &self.complex
    }

    pub fn blocks(&self, n: Degree) -> &[Block] {
        self.degrees.get(&n).map_or(&[], |d| &d.blocks)
    }

    pub fn block(&self, degrees: &[Degree]) -> Option<&Block> {
        let total: Degree = degrees.iter().sum();
        let d = self.degrees.get(&total)?;
        d.lookup.get(degrees).map(|&k| &d.blocks[k])
    }

    /// Position of the basis element with the given degree and index tuples.
    pub fn index_of(&self, degrees: &[Degree], idx: &[usize]) -> Option<usize> {
        let b = self.block(degrees)?;
        let mut flat = 0;
        for (i, d) in idx.iter().zip(&b.dims) {
            if i >= d {
                return None;
            }
            flat = flat * d + i;
        }
        Some(b.offset + flat)
    }
}

fn enumerate_tuples(factors: &[Arc<ChainComplex>], tuple: &mut Vec<Degree>, f: &mut impl FnMut(&[Degree])) {
    let k = tuple.len();
    if k == factors.len() {
        f(tuple);
        return;
    }
    for p in factors[k].degrees() {
        if factors[k].rank(p) == 0 {
            continue;
        }
        tuple.push(p);
        enumerate_tuples(factors, tuple, f);
        tuple.pop();
    }
}

fn build_complex(factors: &[Arc<ChainComplex>], degrees: &BTreeMap<Degree, DegreeBlocks>) -> ChainComplex {
    let Some((&lo, _)) = degrees.first_key_value() else {
        return ChainComplex::zero();
    };
    let hi = *degrees.last_key_value().expect("nonempty").0;
    let rank = |n: Degree| degrees.get(&n).and_then(|d| d.blocks.last()).map_or(0, |b| b.offset + b.size);
    let mut ranks = Vec::new();
    let mut diffs = Vec::new();
    for n in lo..=hi {
        ranks.push(rank(n));
        let mut m = Matrix::zeros(rank(n - 1), rank(n));
        if let (Some(here), Some(below)) = (degrees.get(&n), degrees.get(&(n - 1))) {
            for b in &here.blocks {
                let mut prefix: Degree = 0;
                for k in 0..factors.len() {
                    let p = b.degrees[k];
                    let mut lowered = b.degrees.clone();
                    lowered[k] -= 1;
                    if let Some(&t) = below.lookup.get(&lowered) {
                        let tb = &below.blocks[t];
                        let d = factors[k].diff(p);
                        let left: usize = b.dims[..k].iter().product();
                        let right: usize = b.dims[k + 1..].iter().product();
                        let s = sign(prefix);
                        for (i, j, v) in d.nonzeros() {
                            let v = &s * v;
                            for l in 0..left {
                                for r in 0..right {
                                    let row = tb.offset + (l * d.rows() + i) * right + r;
                                    let col = b.offset + (l * d.cols() + j) * right + r;
                                    *m.entry_mut(row, col) += &v;
                                }
                            }
                        }
                    }
                    prefix += p;
                }
            }
        }
        diffs.push(m);
    }
    ChainComplex::new(lo, ranks, diffs).expect("tensor shapes are consistent")
}

/// `A ⊗ B` with the Koszul differential.
pub fn tensor(a: &ChainComplex, b: &ChainComplex) -> ChainComplex {
    let l = TensorLayout::new(vec![Arc::new(a.clone()), Arc::new(b.clone())]);
    (**l.complex()).clone()
}

/// `f_1 ⊗ … ⊗ f_r` between the given layouts (degree-zero maps, no signs).
pub fn tensor_maps(src: &TensorLayout, dst: &TensorLayout, maps: &[&ChainMap]) -> ChainMap {
    assert_eq!(maps.len(), src.factors.len(), "one map per factor");
    ChainMap::from_fn(src.complex.clone(), dst.complex.clone(), |n, (rows, cols)| {
        let mut m = Matrix::zeros(rows, cols);
        for b in src.blocks(n) {
            let Some(tb) = dst.block(&b.degrees) else { continue };
            let mut k = Matrix::identity(1);
            for (f, &p) in maps.iter().zip(&b.degrees) {
                k = k.kron(&f.component(p));
            }
            m.set_block(tb.offset, b.offset, &k);
        }
        Some(m)
    })
}

/// Column-sparse view of a matrix.
fn columns(m: &Matrix) -> Vec<Vec<(usize, BigInt)>> {
    let mut cols = vec![Vec::new(); m.cols()];
    for (i, j, v) in m.nonzeros() {
        cols[j].push((i, v.clone()));
    }
    cols
}

/// Applies `f : A_s ⊗ … ⊗ A_{e−1} → B` inside `src`, producing the map into
/// `dst = A_1 ⊗ … ⊗ A_{s−1} ⊗ B ⊗ A_e ⊗ …`. An empty range inserts a factor
/// via `f : ℤ[0] → B`.
pub fn apply_on_factors(src: &TensorLayout, range: Range<usize>, f: &ChainMap, dst: &TensorLayout) -> ChainMap {
    let (s, e) = (range.start, range.end);
    debug_assert_eq!(dst.factors.len(), src.factors.len() - (e - s) + 1);
    let mid = TensorLayout::new(src.factors[s..e].to_vec());
    let mut cache: HashMap<Degree, Vec<Vec<(usize, BigInt)>>> = HashMap::new();
    ChainMap::from_fn(src.complex.clone(), dst.complex.clone(), |n, (rows, cols)| {
        let mut m = Matrix::zeros(rows, cols);
        for b in src.blocks(n) {
            let q: Degree = b.degrees[s..e].iter().sum();
            let Some(mb) = mid.block(&b.degrees[s..e]) else { continue };
            let fq = cache.entry(q).or_insert_with(|| columns(&f.component(q)));
            let out_rank = f.target().rank(q);
            if out_rank == 0 {
                continue;
            }
            let mut td = b.degrees[..s].to_vec();
            td.push(q);
            td.extend_from_slice(&b.degrees[e..]);
            let Some(tb) = dst.block(&td) else { continue };
            let mid_size = mb.size;
            let suffix: usize = b.dims[e..].iter().product();
            for flat in 0..b.size {
                let pi = flat / (mid_size * suffix);
                let mi = (flat / suffix) % mid_size;
                let si = flat % suffix;
                for (r, v) in &fq[mb.offset + mi] {
                    let row = tb.offset + (pi * out_rank + r) * suffix + si;
                    *m.entry_mut(row, b.offset + flat) += v;
                }
            }
        }
        Some(m)
    })
}

/// A direct sum `P_1 ⊕ … ⊕ P_k` with summands in the given order.
#[derive(Clone, Debug)]
pub struct SumLayout {
    parts: Vec<Arc<ChainComplex>>,
    offsets: BTreeMap<Degree, Vec<usize>>,
    complex: Arc<ChainComplex>,
}

impl SumLayout {
    pub fn new(parts: Vec<Arc<ChainComplex>>) -> Self {
        let lo = parts.iter().filter_map(|p| p.min_degree()).min();
        let hi = parts.iter().filter_map(|p| p.max_degree()).max();
        let mut offsets = BTreeMap::new();
        let complex = match (lo, hi) {
            (Some(lo), Some(hi)) => {
                let mut ranks = Vec::new();
                let mut diffs = Vec::new();
                for n in lo..=hi {
                    let mut off = Vec::with_capacity(parts.len());
                    let mut acc = 0;
                    for p in &parts {
                        off.push(acc);
                        acc += p.rank(n);
                    }
                    ranks.push(acc);
                    offsets.insert(n, off);
                    let blocks: Vec<_> = parts.iter().map(|p| p.diff(n)).collect();
                    let refs: Vec<&Matrix> = blocks.iter().map(|b| &**b).collect();
                    diffs.push(Matrix::block_diag(&refs));
                }
                ChainComplex::new(lo, ranks, diffs).expect("direct sum shapes are consistent")
            }
            _ => ChainComplex::zero(),
        };
        SumLayout { parts, offsets, complex: Arc::new(complex) }
    }

    pub fn parts(&self) -> &[Arc<ChainComplex>] {
        &self.parts
    }

    pub fn complex(&self) -> &Arc<ChainComplex> {
        &self.complex
    }

    /// Offset of summand `k` inside degree `n`.
    pub fn offset(&self, n: Degree, k: usize) -> usize {
        self.offsets.get(&n).map_or(0, |o| o[k])
    }

    /// Inclusion of summand `k`.
    pub fn inclusion(&self, k: usize) -> ChainMap {
        let part = self.parts[k].clone();
        ChainMap::from_fn(part.clone(), self.complex.clone(), |n, (rows, cols)| {
            let mut m = Matrix::zeros(rows, cols);
            m.set_block(self.offset(n, k), 0, &Matrix::identity(cols));
            Some(m)
        })
    }

    /// Projection onto summand `k`.
    pub fn projection(&self, k: usize) -> ChainMap {
        let part = self.parts[k].clone();
        ChainMap::from_fn(self.complex.clone(), part, |n, (rows, cols)| {
            let mut m = Matrix::zeros(rows, cols);
            m.set_block(0, self.offset(n, k), &Matrix::identity(rows));
            Some(m)
        })
    }
}

/// Assembles a map between direct sums from blocks `(dst part, src part, map)`;
/// blocks with the same position are added.
pub fn assemble<'a>(
    src: &SumLayout,
    dst: &SumLayout,
    blocks: impl IntoIterator<Item = (usize, usize, &'a ChainMap)>,
) -> ChainMap {
    let blocks: Vec<_> = blocks.into_iter().collect();
    ChainMap::from_fn(src.complex.clone(), dst.complex.clone(), |n, (rows, cols)| {
        let mut m = Matrix::zeros(rows, cols);
        for (t, s, f) in &blocks {
            let c = f.component(n);
            if c.rows() > 0 && c.cols() > 0 && !c.is_zero() {
                m.add_block(dst.offset(n, *t), src.offset(n, *s), &c);
            }
        }
        Some(m)
    })
}

/// Direct sum of chain maps `⊕ f_k : ⊕ A_k → ⊕ B_k`.
pub fn direct_sum_maps(src: &SumLayout, dst: &SumLayout, maps: &[&ChainMap]) -> ChainMap {
    assemble(src, dst, maps.iter().enumerate().map(|(k, f)| (k, k, *f)))
}

/// The associativity isomorphism `(A_1 ⊗ … ⊗ A_r) ⊗ B_1 ⊗ … ⊗ B_s →
/// A_1 ⊗ … ⊗ A_r ⊗ B_1 ⊗ … ⊗ B_s`; `nested` has `inner.complex()` as its first
/// factor. No signs occur.
pub fn flatten_first(nested: &TensorLayout, inner: &TensorLayout, flat: &TensorLayout) -> ChainMap {
    debug_assert!(*nested.factors[0] == *inner.complex);
    ChainMap::from_fn(nested.complex.clone(), flat.complex.clone(), |n, (rows, cols)| {
        let mut m = Matrix::zeros(rows, cols);
        for nb in nested.blocks(n) {
            let rest = nb.size / nb.dims[0].max(1);
            for ib in inner.blocks(nb.degrees[0]) {
                let mut fd = ib.degrees.clone();
                fd.extend_from_slice(&nb.degrees[1..]);
                let fb = flat.block(&fd).expect("flat layout has every block");
                for li in 0..ib.size {
                    for r in 0..rest {
                        m.set(fb.offset + li * rest + r, nb.offset + (ib.offset + li) * rest + r, 1);
                    }
                }
            }
        }
        Some(m)
    })
}

/// `(⊕_k A_k) ⊗ B → ⊕_k (A_k ⊗ B)`. `src` is `[sum, B]`, `parts[k]` is
/// `[A_k, B]` and `dst` sums the `parts`.
pub fn distribute_right(sum: &SumLayout, src: &TensorLayout, parts: &[TensorLayout], dst: &SumLayout) -> ChainMap {
    ChainMap::from_fn(src.complex.clone(), dst.complex.clone(), |n, (rows, cols)| {
        let mut m = Matrix::zeros(rows, cols);
        for blk in src.blocks(n) {
            let (p, q) = (blk.degrees[0], blk.degrees[1]);
            for (k, part) in parts.iter().enumerate() {
                let ak = sum.parts[k].rank(p);
                if ak == 0 {
                    continue;
                }
                let base = sum.offset(p, k);
                let pb = part.block(&[p, q]).expect("part has the block");
                let out = dst.offset(n, k) + pb.offset;
                for i in 0..ak {
                    for b in 0..blk.dims[1] {
                        m.set(out + i * blk.dims[1] + b, blk.offset + (base + i) * blk.dims[1] + b, 1);
                    }
                }
            }
        }
        Some(m)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::complex::validate_complex;

    fn cone2() -> Arc<ChainComplex> {
        Arc::new(ChainComplex::two_term(1, Matrix::from_i64(1, 1, &[2])))
    }

    #[test]
    fn tensor_ranks_and_validity() {
        let c = cone2();
        let t = tensor(&c, &c);
        assert!(validate_complex(&t).is_ok());
        assert_eq!((t.rank(0), t.rank(1), t.rank(2)), (1, 2, 1));
    }

    #[test]
    fn triple_tensor_valid() {
        let c = cone2();
        let l = TensorLayout::new(vec![c.clone(), c.clone(), c]);
        assert!(validate_complex(l.complex()).is_ok());
        assert_eq!(l.complex().rank(1), 3);
    }

    #[test]
    fn apply_identity_on_factors_is_identity() {
        let c = cone2();
        let l = TensorLayout::new(vec![c.clone(), c.clone(), c.clone()]);
        let mid = TensorLayout::new(vec![c.clone(), c.clone()]);
        let id = ChainMap::identity(mid.complex().clone());
        let dst = TensorLayout::new(vec![c.clone(), mid.complex().clone()]);
        let f = apply_on_factors(&l, 1..3, &id, &dst);
        assert!(f.check().is_ok());
        assert!(f.is_isomorphism());
    }

    #[test]
    fn direct_sum_inclusions() {
        let s = SumLayout::new(vec![cone2(), Arc::new(ChainComplex::z(3))]);
        let i1 = s.inclusion(1);
        assert!(i1.check().is_ok());
        assert!(s.projection(1).compose(&i1).component(3).is_identity());
    }

    #[test]
    fn regrouping_isomorphisms() {
        let c = cone2();
        let z1 = Arc::new(ChainComplex::z(1));
        let inner = TensorLayout::new(vec![c.clone(), z1.clone()]);
        let nested = TensorLayout::new(vec![inner.complex().clone(), c.clone()]);
        let flat = TensorLayout::new(vec![c.clone(), z1.clone(), c.clone()]);
        let f = flatten_first(&nested, &inner, &flat);
        assert!(f.check().is_ok());
        assert!(f.is_isomorphism());

        let sum = SumLayout::new(vec![c.clone(), z1.clone()]);
        let src = TensorLayout::new(vec![sum.complex().clone(), c.clone()]);
        let parts: Vec<TensorLayout> = sum.parts().iter().map(|a| TensorLayout::new(vec![a.clone(), c.clone()])).collect();
        let dst = SumLayout::new(parts.iter().map(|l| l.complex().clone()).collect());
        let g = distribute_right(&sum, &src, &parts, &dst);
        assert!(g.check().is_ok());
        assert!(g.is_isomorphism());
    }
}
