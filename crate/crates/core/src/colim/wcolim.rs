//! `W ⋆ D` as the coequalizer of the two actions on
//! `⊕ W(c₁) ⊗ hom(c₀,c₁) ⊗ D(c₀) ⇉ ⊕ W(c) ⊗ D(c)`.

use std::sync::Arc;

use super::ColimError;
use crate::chain::tensor::{apply_on_factors, assemble, SumLayout, TensorLayout};
use crate::chain::{cokernel_complex, ChainComplex, ChainMap, Quotient};
use crate::enriched::{Diagram, Presheaf};

/// A presented weighted colimit.
#[derive(Clone, Debug)]
pub struct WeightedColimit {
    pub complex: Arc<ChainComplex>,
    /// `[W(c), D(c)]` for each object `c`.
    pub layouts: Vec<TensorLayout>,
    /// `⊕_c W(c) ⊗ D(c)` in object order.
    pub sum: SumLayout,
    /// `[W(c₁), hom(c₀,c₁), D(c₀)]`, pairs `(c₀, c₁)` lexicographic.
    pub relation_layouts: Vec<TensorLayout>,
    /// `act_W ⊗ id − id ⊗ act_D`.
    pub relations: ChainMap,
    pub quotient: Quotient,
}

pub fn same_host(w: &Presheaf, d: &Diagram) -> Result<(), ColimError> {
    if Arc::ptr_eq(w.host(), d.host()) {
        Ok(())
    } else {
        Err(ColimError::HostMismatch)
    }
}

pub fn weighted_colimit(w: &Presheaf, d: &Diagram) -> Result<WeightedColimit, ColimError> {
    same_host(w, d)?;
    let host = w.host();
    let n = host.object_count();
    let layouts: Vec<TensorLayout> =
        (0..n).map(|c| TensorLayout::new(vec![w.value(c).clone(), d.value(c).clone()])).collect();
    let sum = SumLayout::new(layouts.iter().map(|l| l.complex().clone()).collect());
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    let relation_layouts: Vec<TensorLayout> = pairs
        .iter()
        .map(|&(c0, c1)| TensorLayout::new(vec![w.value(c1).clone(), host.hom(c0, c1).clone(), d.value(c0).clone()]))
        .collect();
    let rel_sum = SumLayout::new(relation_layouts.iter().map(|l| l.complex().clone()).collect());
    let mut blocks = Vec::with_capacity(2 * pairs.len());
    for (k, &(c0, c1)) in pairs.iter().enumerate() {
        let triple = &relation_layouts[k];
        let act_w = apply_on_factors(triple, 0..2, &w.action(c0, c1).map, &layouts[c0]);
        let right = d.action(c0, c1);
        let act_d = apply_on_factors(triple, 1..3, &right.map, &layouts[c1]).neg();
        blocks.push((c0, k, act_w));
        blocks.push((c1, k, act_d));
    }
    let relations = assemble(&rel_sum, &sum, blocks.iter().map(|(t, s, f)| (*t, *s, f)));
    let quotient = cokernel_complex(&relations)?;
    Ok(WeightedColimit { complex: quotient.complex.clone(), layouts, sum, relation_layouts, relations, quotient })
}

impl WeightedColimit {
    /// The cocone leg `W(c) ⊗ D(c) → W ⋆ D`.
    pub fn leg(&self, c: usize) -> ChainMap {
        self.quotient.projection.compose(&self.sum.inclusion(c))
    }

    /// The map out of `W ⋆ D` induced by maps `W(c) ⊗ D(c) → X` that agree on
    /// the relations.
    pub fn descend(&self, legs: &[ChainMap], target: Arc<ChainComplex>) -> ChainMap {
        let mut total = ChainMap::zero(self.sum.complex().clone(), target.clone());
        for (c, f) in legs.iter().enumerate() {
            total = total.add(&f.compose(&self.sum.projection(c)).retarget(self.sum.complex().clone(), target.clone()));
        }
        self.quotient.descend(&total)
    }

    /// The map `W ⋆ D → W′ ⋆ D′` induced by `legs[c] : W(c) ⊗ D(c) → W′(c) ⊗ D′(c)`.
    pub fn induced(&self, legs: &[ChainMap], target: &WeightedColimit) -> ChainMap {
        let mut total = ChainMap::zero(self.sum.complex().clone(), target.sum.complex().clone());
        for (c, f) in legs.iter().enumerate() {
            let f = target.sum.inclusion(c).compose(f).compose(&self.sum.projection(c));
            total = total.add(&f);
        }
        self.quotient.induced(&total, &target.quotient)
    }

    /// True iff `legs` are compatible with the relations, i.e. their sum kills
    /// the image of the action difference.
    pub fn respects_relations(&self, legs: &[ChainMap], target: Arc<ChainComplex>) -> bool {
        let mut total = ChainMap::zero(self.sum.complex().clone(), target.clone());
        for (c, f) in legs.iter().enumerate() {
            total = total.add(&f.compose(&self.sum.projection(c)).retarget(self.sum.complex().clone(), target.clone()));
        }
        total.compose(&self.relations).is_zero()
    }
}

/// `W_c ⋆ D → D(c)` for the representable weight at `c`, induced by the
/// actions `hom(x,c) ⊗ D(x) → D(c)`.
pub fn yoneda_map(d: &Diagram, c: usize, colim: &WeightedColimit) -> ChainMap {
    let legs: Vec<ChainMap> = (0..d.host().object_count()).map(|x| d.action(x, c).map.clone()).collect();
    colim.descend(&legs, d.value(c).clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{homology_full, shift, AbelianGroup, Matrix};
    use crate::enriched::{ch_full_subcategory, DgCategory};

    fn cone(k: i64) -> Arc<ChainComplex> {
        Arc::new(ChainComplex::two_term(1, Matrix::from_i64(1, 1, &[k])))
    }

    #[test]
    fn yoneda_is_an_isomorphism() {
        let host = Arc::new(ch_full_subcategory(vec![
            ("Z".into(), Arc::new(ChainComplex::z(0))),
            ("Z[1]".into(), Arc::new(ChainComplex::z(1))),
            ("C2".into(), cone(2)),
        ]));
        for c in 0..3 {
            for x in 0..3 {
                let w = Presheaf::representable(host.clone(), c);
                let d = Diagram::representable(host.clone(), x);
                let col = weighted_colimit(&w, &d).unwrap();
                let y = yoneda_map(&d, c, &col);
                assert!(y.check().is_ok());
                assert!(y.is_isomorphism(), "{c} {x}");
            }
        }
    }

    #[test]
    fn one_object_desuspension() {
        let host = Arc::new(DgCategory::unit());
        let z = Arc::new(ChainComplex::z(-1));
        let c = cone(3);
        let w = Presheaf::new(host.clone(), vec![z.clone()], |_, _, l| {
            Ok(ChainMap::identity(l.complex().clone()).retarget(l.complex().clone(), z.clone()))
        })
        .unwrap();
        let d = Diagram::new(host.clone(), vec![c.clone()], |_, _, l| {
            Ok(ChainMap::identity(l.complex().clone()).retarget(l.complex().clone(), c.clone()))
        })
        .unwrap();
        let col = weighted_colimit(&w, &d).unwrap();
        assert_eq!(*col.complex, shift(&c, -1));
        let h = homology_full(&col.complex);
        assert_eq!(h.get(-1), AbelianGroup::from_cyclic(0, &[3.into()]));
    }
}
