//! Weights built by attaching cells `𝓒(−,c) ⊗ (ℤ[n−1] ↣ D(n))`.
//!
//! Attaching along a cycle `z ∈ W(c)_{n−1}` gives
//! `W′(c′) = W(c′) ⊕ hom(c′,c)[n]` with `d(e ⊗ f) = z·f + (−1)^n e ⊗ df`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use super::ColimError;
use crate::chain::{ChainComplex, ChainMap, Degree, Matrix};
use crate::enriched::{DgCategory, Presheaf};

/// One attachment: a cell of dimension `n` at `object` along `cycle`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellAttachment {
    pub object: usize,
    pub dim: Degree,
    /// Coordinates in `W(object)_{dim−1}` of the current weight.
    pub cycle: Vec<BigInt>,
}

/// A weight together with a cell trace that builds it from zero.
#[derive(Clone, Debug)]
pub struct WeightCell {
    presheaf: Arc<Presheaf>,
    trace: Vec<CellAttachment>,
}

impl WeightCell {
    pub fn empty(host: Arc<DgCategory>) -> Self {
        WeightCell { presheaf: Arc::new(Presheaf::zero(host)), trace: Vec::new() }
    }

    /// `𝓒(−,c)`, one 0-cell.
    pub fn representable(host: Arc<DgCategory>, c: usize) -> Self {
        Self::empty(host).attach_free(c, 0).expect("free cell")
    }

    /// A cell attached along zero, i.e. a free summand `𝓒(−,c)[n]`.
    pub fn attach_free(&self, object: usize, dim: Degree) -> Result<Self, ColimError> {
        let rank = if object < self.host().object_count() { self.presheaf.value(object).rank(dim - 1) } else { 0 };
        self.attach(object, dim, vec![BigInt::zero(); rank])
    }

    pub fn presheaf(&self) -> &Arc<Presheaf> {
        &self.presheaf
    }

    pub fn trace(&self) -> &[CellAttachment] {
        &self.trace
    }

    pub fn host(&self) -> &Arc<DgCategory> {
        self.presheaf.host()
    }

    pub fn attach(&self, object: usize, dim: Degree, cycle: Vec<BigInt>) -> Result<Self, ColimError> {
        let cell = CellAttachment { object, dim, cycle };
        let presheaf = Arc::new(attach_cell(&self.presheaf, &cell)?);
        let mut trace = self.trace.clone();
        trace.push(cell);
        Ok(WeightCell { presheaf, trace })
    }

    /// Rebuilds the weight from the trace alone.
    pub fn replay(host: Arc<DgCategory>, trace: &[CellAttachment]) -> Result<Self, ColimError> {
        trace.iter().try_fold(Self::empty(host), |w, c| w.attach(c.object, c.dim, c.cycle.clone()))
    }

    /// True iff replaying the trace reproduces values and actions exactly.
    pub fn verify_trace(&self) -> bool {
        let Ok(r) = Self::replay(self.host().clone(), &self.trace) else { return false };
        same_presheaf(&r.presheaf, &self.presheaf)
    }
}

pub fn same_presheaf(a: &Presheaf, b: &Presheaf) -> bool {
    let n = a.host().object_count();
    n == b.host().object_count()
        && (0..n).all(|c| **a.value(c) == **b.value(c))
        && (0..n).all(|cp| (0..n).all(|c| a.action(cp, c).map == b.action(cp, c).map))
}

fn attach_cell(w: &Presheaf, cell: &CellAttachment) -> Result<Presheaf, ColimError> {
    let host = w.host().clone();
    let k = host.object_count();
    let (c, n) = (cell.object, cell.dim);
    if c >= k {
        return Err(ColimError::Malformed(format!("cell at unknown object {c}")));
    }
    let base = w.value(c);
    if cell.cycle.len() != base.rank(n - 1) {
        return Err(ColimError::Malformed(format!(
            "attaching cycle has {} coordinates, W({})_{} has rank {}",
            cell.cycle.len(),
            host.name(c),
            n - 1,
            base.rank(n - 1)
        )));
    }
    if !base.diff(n - 1).mul_vec(&cell.cycle).iter().all(Zero::is_zero) {
        return Err(ColimError::Malformed("attaching element is not a cycle".into()));
    }
    // A(c′) : hom(c′,c)_p → W(c′)_{p+n−1}, f ↦ z·f.
    let attach_map = |cp: usize, p: Degree| -> Matrix {
        let act = w.action(cp, c);
        let h = host.hom(cp, c);
        let rows = w.value(cp).rank(p + n - 1);
        let mut out = Matrix::zeros(rows, h.rank(p));
        let Some(blk) = act.layout.block(&[n - 1, p]) else { return out };
        let comp = act.map.component(n - 1 + p);
        let dim = blk.dims[1];
        for (i, zi) in cell.cycle.iter().enumerate().filter(|(_, z)| !z.is_zero()) {
            for j in 0..dim {
                for r in 0..rows {
                    let v = comp.get(r, blk.offset + i * dim + j);
                    if !v.is_zero() {
                        *out.entry_mut(r, j) += zi * v;
                    }
                }
            }
        }
        out
    };
    let values: Vec<Arc<ChainComplex>> = (0..k)
        .map(|cp| {
            let old = w.value(cp);
            let new = host.hom(cp, c);
            extend(old, new, n, |p| attach_map(cp, p)).map(Arc::new)
        })
        .collect::<Result<_, _>>()?;
    let old_rank = |x: usize, m: Degree| w.value(x).rank(m);
    let vals = values.clone();
    let presheaf = Presheaf::new(host.clone(), values, |cpp, cp, layout| {
        let old = w.action(cpp, cp);
        let comp = host.composition(cpp, cp, c);
        Ok(ChainMap::from_fn(layout.complex().clone(), vals[cpp].clone(), |m, (rows, cols)| {
            let mut out = Matrix::zeros(rows, cols);
            for blk in layout.blocks(m) {
                let (m1, p) = (blk.degrees[0], blk.degrees[1]);
                let gdim = blk.dims[1];
                let r_old = old_rank(cp, m1);
                let top_old = old_rank(cpp, m);
                if let Some(ob) = old.layout.block(&[m1, p]) {
                    let oc = old.map.component(m);
                    for i in 0..r_old {
                        for g in 0..gdim {
                            let col = oc.column(ob.offset + i * gdim + g);
                            for (r, v) in col.into_iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                                out.set(r, blk.offset + i * gdim + g, v);
                            }
                        }
                    }
                }
                if let Some(nb) = comp.layout.block(&[m1 - n, p]) {
                    let cc = comp.map.component(m - n);
                    for f in 0..nb.dims[0] {
                        for g in 0..gdim {
                            let col = cc.column(nb.offset + f * gdim + g);
                            for (r, v) in col.into_iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                                out.set(top_old + r, blk.offset + (r_old + f) * gdim + g, v);
                            }
                        }
                    }
                }
            }
            Some(out)
        }))
    })?;
    Ok(presheaf)
}

/// `old ⊕ new[n]` with differential `[[d_old, A], [0, (−1)^n d_new]]`.
fn extend(
    old: &ChainComplex,
    new: &ChainComplex,
    n: Degree,
    attach: impl Fn(Degree) -> Matrix,
) -> Result<ChainComplex, ColimError> {
    let shifted = |m: Degree| new.rank(m - n);
    let supports = [old.support(), new.support().map(|(a, b)| (a + n, b + n))];
    let lo = supports.iter().flatten().map(|s| s.0).min();
    let hi = supports.iter().flatten().map(|s| s.1).max();
    let (Some(lo), Some(hi)) = (lo, hi) else { return Ok(ChainComplex::zero()) };
    let sign: BigInt = if n.rem_euclid(2) == 0 { 1.into() } else { (-1).into() };
    let mut ranks = Vec::new();
    let mut diffs = Vec::new();
    for m in lo..=hi {
        let (ro, rn) = (old.rank(m), shifted(m));
        let (bo, bn) = (old.rank(m - 1), shifted(m - 1));
        ranks.push(ro + rn);
        let mut d = Matrix::zeros(bo + bn, ro + rn);
        if m > lo {
            d.set_block(0, 0, &old.diff(m));
            if rn > 0 {
                d.set_block(0, ro, &attach(m - n));
                d.set_block(bo, ro, &new.diff(m - n).scale(&sign));
            }
        }
        diffs.push(d);
    }
    Ok(ChainComplex::new(lo, ranks, diffs)?)
}
