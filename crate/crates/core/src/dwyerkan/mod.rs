//! Restriction and left Kan extension along a dg-functor `F : 𝓓 → 𝓒`,
//! homotopical full faithfulness, `H₀` retract witnesses and the derived
//! counit `F_! Q(F*𝓒^c) → 𝓒^c`.

mod counit;
mod retract;

use std::sync::Arc;

use crate::chain::tensor::{apply_on_factors, assemble, distribute_right, flatten_first, tensor_maps, SumLayout, TensorLayout};
use crate::chain::{is_quasi_iso_full, ChainMap, QuasiIsoVerdict};
use crate::colim::{weighted_colimit, ColimError, WeightedColimit};
use crate::enriched::{DgCategory, Diagram, EnrichedError, Presheaf, PresheafMap};

pub use counit::{derived_counit_check, CounitCheck, CounitMode};
pub use retract::{h0_retract_witness, verify_retract, NonexistenceReason, RetractSearch, RetractSummand, RetractWitness, SearchBounds};

#[derive(Debug, thiserror::Error)]
pub enum DwyerKanError {
    #[error("functor data: {0}")]
    Malformed(String),
    #[error(transparent)]
    Colim(#[from] ColimError),
    #[error(transparent)]
    Enriched(#[from] EnrichedError),
}

/// First functor law that fails.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FunctorViolation {
    #[error("component ({from}, {to}) is not a chain map")]
    NotChainMap { from: String, to: String },
    #[error("composition on ({a}, {b}, {c}) is not preserved")]
    Composition { a: String, b: String, c: String },
    #[error("unit of {object} is not preserved")]
    Unit { object: String },
}

/// A dg-functor given by an object map and hom components
/// `hom_𝓓(d′,d) → hom_𝓒(Fd′,Fd)`.
#[derive(Clone, Debug)]
pub struct DgFunctor {
    source: Arc<DgCategory>,
    target: Arc<DgCategory>,
    objects: Vec<usize>,
    /// `components[d′·n + d]`.
    components: Vec<ChainMap>,
}

impl DgFunctor {
    /// Checks endpoints only; the laws are left to [`DgFunctor::validate`].
    pub fn new(
        source: Arc<DgCategory>,
        target: Arc<DgCategory>,
        objects: Vec<usize>,
        mut component: impl FnMut(usize, usize) -> ChainMap,
    ) -> Result<Self, DwyerKanError> {
        let n = source.object_count();
        if objects.len() != n {
            return Err(DwyerKanError::Malformed(format!("{} images for {} objects", objects.len(), n)));
        }
        if let Some(&x) = objects.iter().find(|&&x| x >= target.object_count()) {
            return Err(DwyerKanError::Malformed(format!("image {x} is not an object of the target")));
        }
        let mut components = Vec::with_capacity(n * n);
        for dp in 0..n {
            for d in 0..n {
                let f = component(dp, d);
                let (s, t) = (source.hom(dp, d), target.hom(objects[dp], objects[d]));
                if **f.source() != **s || **f.target() != **t {
                    return Err(DwyerKanError::Malformed(format!(
                        "component ({}, {}) has wrong endpoints",
                        source.name(dp),
                        source.name(d)
                    )));
                }
                components.push(f.retarget(s.clone(), t.clone()));
            }
        }
        Ok(DgFunctor { source, target, objects, components })
    }

    pub fn identity(cat: Arc<DgCategory>) -> Self {
        let n = cat.object_count();
        let c = cat.clone();
        Self::new(cat.clone(), cat, (0..n).collect(), |a, b| ChainMap::identity(c.hom(a, b).clone()))
            .expect("identity functor")
    }

    /// The inclusion of `target.full_subcategory(objects)`.
    pub fn inclusion(target: Arc<DgCategory>, objects: &[usize]) -> Result<Self, DwyerKanError> {
        let source = Arc::new(target.full_subcategory(objects)?);
        let s = source.clone();
        Self::new(source, target, objects.to_vec(), |a, b| ChainMap::identity(s.hom(a, b).clone()))
    }

    pub fn source(&self) -> &Arc<DgCategory> {
        &self.source
    }

    pub fn target(&self) -> &Arc<DgCategory> {
        &self.target
    }

    pub fn object(&self, d: usize) -> usize {
        self.objects[d]
    }

    pub fn objects(&self) -> &[usize] {
        &self.objects
    }

    pub fn component(&self, dp: usize, d: usize) -> &ChainMap {
        &self.components[dp * self.source.object_count() + d]
    }

    pub fn validate(&self) -> Result<(), FunctorViolation> {
        let (s, t) = (&self.source, &self.target);
        let n = s.object_count();
        let nm = |a: usize| s.name(a).to_string();
        for a in 0..n {
            for b in 0..n {
                if self.component(a, b).check().is_err() {
                    return Err(FunctorViolation::NotChainMap { from: nm(a), to: nm(b) });
                }
            }
        }
        for a in 0..n {
            let lhs = self.component(a, a).compose(s.unit_map(a));
            if lhs != *t.unit_map(self.objects[a]) {
                return Err(FunctorViolation::Unit { object: nm(a) });
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let cs = s.composition(a, b, c);
                    let ct = t.composition(self.objects[a], self.objects[b], self.objects[c]);
                    let lhs = self.component(a, c).compose(&cs.map);
                    let pair = tensor_maps(&cs.layout, &ct.layout, &[self.component(b, c), self.component(a, b)]);
                    if lhs != ct.map.compose(&pair) {
                        return Err(FunctorViolation::Composition { a: nm(a), b: nm(b), c: nm(c) });
                    }
                }
            }
        }
        Ok(())
    }

    /// The hom components whose quasi-isomorphism test fails, with the cone
    /// homology of each pair.
    pub fn is_homotopically_ff(&self) -> HffReport {
        let n = self.source.object_count();
        let pairs = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .map(|(a, b)| HffPair { source: a, target: b, verdict: is_quasi_iso_full(self.component(a, b)) })
            .collect();
        HffReport { pairs }
    }
}

/// Verdict of one hom component `hom_𝓓(a,b) → hom_𝓒(Fa,Fb)`.
#[derive(Clone, Debug)]
pub struct HffPair {
    pub source: usize,
    pub target: usize,
    pub verdict: QuasiIsoVerdict,
}

#[derive(Clone, Debug)]
pub struct HffReport {
    pub pairs: Vec<HffPair>,
}

impl HffReport {
    pub fn holds(&self) -> bool {
        self.pairs.iter().all(|p| p.verdict.quasi_iso)
    }

    pub fn failures(&self) -> impl Iterator<Item = &HffPair> {
        self.pairs.iter().filter(|p| !p.verdict.quasi_iso)
    }
}

/// `F*V = V ∘ F`.
pub fn restrict(f: &DgFunctor, v: &Presheaf) -> Result<Presheaf, DwyerKanError> {
    if !Arc::ptr_eq(v.host(), &f.target) {
        return Err(ColimError::HostMismatch.into());
    }
    let values = f.objects.iter().map(|&x| v.value(x).clone()).collect();
    Ok(Presheaf::new(f.source.clone(), values, |dp, d, layout| {
        let act = v.action(f.objects[dp], f.objects[d]);
        let inner = apply_on_factors(layout, 1..2, f.component(dp, d), &act.layout);
        Ok(act.map.compose(&inner))
    })?)
}

/// `F*β`, componentwise `β_{Fd}`.
pub fn restrict_map(f: &DgFunctor, beta: &PresheafMap, source: Arc<Presheaf>, target: Arc<Presheaf>) -> Result<PresheafMap, DwyerKanError> {
    let comps = f.objects.iter().map(|&x| beta.components[x].clone()).collect();
    Ok(PresheafMap::new(source, target, comps)?)
}

/// `F_! W` with the colimit presentation of each value.
#[derive(Clone, Debug)]
pub struct LeftKan {
    pub presheaf: Arc<Presheaf>,
    /// `d ↦ hom_𝓒(c, Fd)` for each object `c` of the target.
    pub diagrams: Vec<Arc<Diagram>>,
    /// `W ⋆ diagrams[c]`.
    pub colimits: Vec<WeightedColimit>,
}

/// The diagram `d ↦ hom_𝓒(c, Fd)` over the source of `f`.
pub fn corepresented(f: &DgFunctor, c: usize) -> Diagram {
    let t = &f.target;
    let values = f.objects.iter().map(|&x| t.hom(c, x).clone()).collect();
    Diagram::new(f.source.clone(), values, |d, dp, layout| {
        let comp = t.composition(c, f.objects[d], f.objects[dp]);
        Ok(comp.map.compose(&apply_on_factors(layout, 0..1, f.component(d, dp), &comp.layout)))
    })
    .expect("corepresented diagram")
}

/// `F_! W`: value `W ⋆ hom_𝓒(c, F−)`, acting by precomposition.
pub fn left_kan(f: &DgFunctor, w: Arc<Presheaf>) -> Result<LeftKan, DwyerKanError> {
    if !Arc::ptr_eq(w.host(), &f.source) {
        return Err(ColimError::HostMismatch.into());
    }
    let t = f.target.clone();
    let k = t.object_count();
    let diagrams: Vec<Arc<Diagram>> = (0..k).map(|c| Arc::new(corepresented(f, c))).collect();
    let colimits: Vec<WeightedColimit> =
        diagrams.iter().map(|d| weighted_colimit(&w, d)).collect::<Result<_, _>>()?;
    let values = colimits.iter().map(|q| q.complex.clone()).collect();
    let presheaf = Presheaf::new(t.clone(), values, |cp, c, layout| {
        let (src, dst) = (&colimits[c], &colimits[cp]);
        let hom = t.hom(cp, c).clone();
        let lifted = TensorLayout::new(vec![src.sum.complex().clone(), hom.clone()]);
        let section = tensor_maps(layout, &lifted, &[&src.quotient.section, &ChainMap::identity(hom.clone())]);
        let parts: Vec<TensorLayout> =
            src.layouts.iter().map(|l| TensorLayout::new(vec![l.complex().clone(), hom.clone()])).collect();
        let psum = SumLayout::new(parts.iter().map(|l| l.complex().clone()).collect());
        let dist = distribute_right(&src.sum, &lifted, &parts, &psum);
        let blocks: Vec<ChainMap> = (0..f.objects.len())
            .map(|d| {
                let mut factors = src.layouts[d].factors().to_vec();
                factors.push(hom.clone());
                let flat = TensorLayout::new(factors);
                let comp = &t.composition(cp, c, f.objects[d]).map;
                apply_on_factors(&flat, 1..3, comp, &dst.layouts[d]).compose(&flatten_first(&parts[d], &src.layouts[d], &flat))
            })
            .collect();
        let total = assemble(&psum, &dst.sum, blocks.iter().enumerate().map(|(d, g)| (d, d, g)));
        let map = dst.quotient.projection.compose(&total).compose(&dist).compose(&section);
        Ok(map.retarget(layout.complex().clone(), dst.complex.clone()))
    })?;
    Ok(LeftKan { presheaf: Arc::new(presheaf), diagrams, colimits })
}

/// `F_! α : F_! W → F_! W′`, induced by `α_d ⊗ id` on each summand.
pub fn left_kan_map(alpha: &PresheafMap, source: &LeftKan, target: &LeftKan) -> Result<PresheafMap, DwyerKanError> {
    let comps = source
        .colimits
        .iter()
        .zip(&target.colimits)
        .map(|(s, t)| {
            let legs: Vec<ChainMap> = (0..s.layouts.len())
                .map(|d| apply_on_factors(&s.layouts[d], 0..1, &alpha.components[d], &t.layouts[d]))
                .collect();
            s.induced(&legs, t)
        })
        .collect();
    Ok(PresheafMap::new(source.presheaf.clone(), target.presheaf.clone(), comps)?)
}

/// `η : W → F*F_!W`, `w ↦ [w ⊗ id_{Fd}]`. `restricted` must be `F*(F_!W)`.
pub fn unit(f: &DgFunctor, w: &Arc<Presheaf>, lk: &LeftKan, restricted: Arc<Presheaf>) -> Result<PresheafMap, DwyerKanError> {
    let comps = (0..f.source.object_count())
        .map(|d| {
            let x = f.objects[d];
            let q = &lk.colimits[x];
            let single = TensorLayout::new(vec![w.value(d).clone()]);
            let ins = apply_on_factors(&single, 1..1, f.target.unit_map(x), &q.layouts[d]);
            q.leg(d).compose(&ins).retarget(w.value(d).clone(), q.complex.clone())
        })
        .collect();
    Ok(PresheafMap::new(w.clone(), restricted, comps)?)
}

/// `ε : F_!F*V → V`, the action `V(Fd) ⊗ hom_𝓒(c, Fd) → V(c)` on each summand.
pub fn counit(f: &DgFunctor, v: &Arc<Presheaf>, lk: &LeftKan) -> Result<PresheafMap, DwyerKanError> {
    let comps = lk
        .colimits
        .iter()
        .enumerate()
        .map(|(c, q)| {
            let legs: Vec<ChainMap> = (0..q.layouts.len())
                .map(|d| v.action(c, f.objects[d]).map.retarget(q.layouts[d].complex().clone(), v.value(c).clone()))
                .collect();
            q.descend(&legs, v.value(c).clone())
        })
        .collect();
    Ok(PresheafMap::new(lk.presheaf.clone(), v.clone(), comps)?)
}

/// `(εF_!) ∘ (F_!η) = id` on `F_!W`, as an exact matrix identity.
pub fn left_triangle(f: &DgFunctor, w: &Arc<Presheaf>) -> Result<bool, DwyerKanError> {
    let lk = left_kan(f, w.clone())?;
    let v = lk.presheaf.clone();
    let fv = Arc::new(restrict(f, &v)?);
    let eta = unit(f, w, &lk, fv.clone())?;
    let lk2 = left_kan(f, fv)?;
    let f_eta = left_kan_map(&eta, &lk, &lk2)?;
    let eps = counit(f, &v, &lk2)?;
    Ok(eps.compose(&f_eta).same_components(&PresheafMap::identity(v)))
}

/// `(F*ε) ∘ (ηF*) = id` on `F*V`, as an exact matrix identity.
pub fn right_triangle(f: &DgFunctor, v: &Arc<Presheaf>) -> Result<bool, DwyerKanError> {
    let fv = Arc::new(restrict(f, v)?);
    let lk = left_kan(f, fv.clone())?;
    let eps = counit(f, v, &lk)?;
    let ffv = Arc::new(restrict(f, &lk.presheaf)?);
    let eta = unit(f, &fv, &lk, ffv.clone())?;
    let f_eps = restrict_map(f, &eps, ffv, fv.clone())?;
    Ok(f_eps.compose(&eta).same_components(&PresheafMap::identity(fv)))
}

#[cfg(test)]
mod tests;
