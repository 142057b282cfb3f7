//! Weights (contravariant dg-functors) and diagrams (covariant ones) with
//! values in chain complexes.

use std::sync::Arc;

use super::category::FiniteCategory;
use super::dg::DgCategory;
use super::EnrichedError;
use crate::chain::tensor::{apply_on_factors, SumLayout, TensorLayout};
use crate::chain::{shift, ChainComplex, ChainMap, Matrix};

/// An action map together with the layout of its source.
#[derive(Clone, Debug)]
pub struct Action {
    pub layout: TensorLayout,
    pub map: ChainMap,
}

/// First module law that fails.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModuleViolation {
    #[error("action ({from}, {to}) is not a chain map")]
    NotChainMap { from: String, to: String },
    #[error("action is not compatible with composition on ({a}, {b}, {c})")]
    Composition { a: String, b: String, c: String },
    #[error("unit acts nontrivially at {object}")]
    Unit { object: String },
}

fn check_endpoints(map: &ChainMap, layout: &TensorLayout, target: &Arc<ChainComplex>) -> bool {
    **map.source() == **layout.complex() && **map.target() == **target
}

/// `W : C^op → Ch` with actions `W(c) ⊗ hom(c′,c) → W(c′)`.
#[derive(Clone, Debug)]
pub struct Presheaf {
    host: Arc<DgCategory>,
    values: Vec<Arc<ChainComplex>>,
    /// `actions[c′·n + c]`.
    actions: Vec<Action>,
}

impl Presheaf {
    /// `action(c′, c, layout)` builds `W(c) ⊗ hom(c′,c) → W(c′)` on the
    /// given source layout.
    pub fn new(
        host: Arc<DgCategory>,
        values: Vec<Arc<ChainComplex>>,
        mut action: impl FnMut(usize, usize, &TensorLayout) -> Result<ChainMap, EnrichedError>,
    ) -> Result<Self, EnrichedError> {
        let n = host.object_count();
        if values.len() != n {
            return Err(EnrichedError::Malformed(format!("{} values for {} objects", values.len(), n)));
        }
        let mut actions = Vec::with_capacity(n * n);
        for cp in 0..n {
            for c in 0..n {
                let layout = TensorLayout::new(vec![values[c].clone(), host.hom(cp, c).clone()]);
                let map = action(cp, c, &layout)?;
                if !check_endpoints(&map, &layout, &values[cp]) {
                    return Err(EnrichedError::Malformed(format!(
                        "action ({}, {}) has wrong endpoints",
                        host.name(cp),
                        host.name(c)
                    )));
                }
                let map = map.retarget(layout.complex().clone(), values[cp].clone());
                actions.push(Action { layout, map });
            }
        }
        Ok(Presheaf { host, values, actions })
    }

    pub fn zero(host: Arc<DgCategory>) -> Self {
        let z = Arc::new(ChainComplex::zero());
        let n = host.object_count();
        Self::new(host, vec![z.clone(); n], |_, _, l| Ok(ChainMap::zero(l.complex().clone(), z.clone())))
            .expect("zero presheaf")
    }

    /// `hom(−, c)` acting by composition.
    pub fn representable(host: Arc<DgCategory>, c: usize) -> Self {
        let values = (0..host.object_count()).map(|x| host.hom(x, c).clone()).collect();
        let h = host.clone();
        Self::new(host, values, |cp, x, _| Ok(h.composition(cp, x, c).map.clone())).expect("representable")
    }

    /// A contravariant functor out of `cat`, linearized over
    /// `free_dg_category(cat)`: `maps(f) : W(target f) → W(source f)`.
    pub fn from_functor(
        host: Arc<DgCategory>,
        cat: &FiniteCategory,
        values: Vec<Arc<ChainComplex>>,
        maps: impl Fn(usize) -> ChainMap,
    ) -> Result<Self, EnrichedError> {
        let vals = values.clone();
        Self::new(host, values, |cp, c, layout| {
            let arrows = cat.hom(cp, c);
            let fs: Vec<ChainMap> = arrows.iter().map(|&f| maps(f)).collect();
            Ok(ChainMap::from_fn(layout.complex().clone(), vals[cp].clone(), |k, (rows, cols)| {
                let mut out = Matrix::zeros(rows, cols);
                for blk in layout.blocks(k) {
                    let (p, q) = (blk.degrees[0], blk.degrees[1]);
                    if q != 0 {
                        continue;
                    }
                    let m = blk.dims[1];
                    for (h, f) in fs.iter().enumerate() {
                        let comp = f.component(p);
                        for (i, j, v) in comp.nonzeros() {
                            *out.entry_mut(i, blk.offset + j * m + h) += v;
                        }
                    }
                }
                Some(out)
            }))
        })
    }

    /// The constant presheaf on `value` over `free_dg_category(cat)`.
    pub fn constant(host: Arc<DgCategory>, cat: &FiniteCategory, value: Arc<ChainComplex>) -> Result<Self, EnrichedError> {
        let n = cat.object_count();
        let id = ChainMap::identity(value.clone());
        Self::from_functor(host, cat, vec![value; n], |_| id.clone())
    }

    pub fn host(&self) -> &Arc<DgCategory> {
        &self.host
    }

    pub fn value(&self, c: usize) -> &Arc<ChainComplex> {
        &self.values[c]
    }

    pub fn values(&self) -> &[Arc<ChainComplex>] {
        &self.values
    }

    /// `W(c) ⊗ hom(c′,c) → W(c′)`.
    pub fn action(&self, cp: usize, c: usize) -> &Action {
        &self.actions[cp * self.host.object_count() + c]
    }

    pub fn validate(&self) -> Result<(), ModuleViolation> {
        let h = &self.host;
        let n = h.object_count();
        for cp in 0..n {
            for c in 0..n {
                if self.action(cp, c).map.check().is_err() {
                    return Err(ModuleViolation::NotChainMap { from: h.name(c).into(), to: h.name(cp).into() });
                }
            }
        }
        // W(c) ⊗ hom(b,c) ⊗ hom(a,b) → W(a)
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let triple = TensorLayout::new(vec![self.values[c].clone(), h.hom(b, c).clone(), h.hom(a, b).clone()]);
                    if triple.complex().is_zero() {
                        continue;
                    }
                    let (bc, ab) = (self.action(b, c), self.action(a, b));
                    let lhs = ab.map.compose(&apply_on_factors(&triple, 0..2, &bc.map, &ab.layout));
                    let ac = self.action(a, c);
                    let rhs = ac.map.compose(&apply_on_factors(&triple, 1..3, &h.composition(a, b, c).map, &ac.layout));
                    if lhs != rhs {
                        return Err(ModuleViolation::Composition {
                            a: h.name(a).into(),
                            b: h.name(b).into(),
                            c: h.name(c).into(),
                        });
                    }
                }
            }
        }
        for c in 0..n {
            let v = self.values[c].clone();
            let single = TensorLayout::new(vec![v.clone()]);
            let act = self.action(c, c);
            let u = act.map.compose(&apply_on_factors(&single, 1..1, h.unit_map(c), &act.layout));
            if u.retarget(v.clone(), v.clone()) != ChainMap::identity(v) {
                return Err(ModuleViolation::Unit { object: h.name(c).into() });
            }
        }
        Ok(())
    }

    /// `W[k]`; with the shift written on the left the action matrices are
    /// unchanged.
    pub fn shift(&self, k: i32) -> Self {
        let values: Vec<Arc<ChainComplex>> = self.values.iter().map(|v| Arc::new(shift(v, k))).collect();
        let vals = values.clone();
        Self::new(self.host.clone(), values, |cp, c, layout| {
            let old = &self.action(cp, c).map;
            Ok(ChainMap::from_fn(layout.complex().clone(), vals[cp].clone(), |m, _| Some(old.component(m - k).into_owned())))
        })
        .expect("shift preserves shapes")
    }

    /// `W_1 ⊕ … ⊕ W_r` over a common host.
    pub fn direct_sum(parts: &[&Presheaf]) -> Result<Self, EnrichedError> {
        let host = parts.first().map(|p| p.host.clone()).ok_or_else(|| EnrichedError::Malformed("empty sum".into()))?;
        if parts.iter().any(|p| !Arc::ptr_eq(&p.host, &host)) {
            return Err(EnrichedError::HostMismatch);
        }
        let n = host.object_count();
        let sums: Vec<SumLayout> =
            (0..n).map(|c| SumLayout::new(parts.iter().map(|p| p.values[c].clone()).collect())).collect();
        let values = sums.iter().map(|s| s.complex().clone()).collect();
        Self::new(host, values, |cp, c, layout| {
            let mut acc = ChainMap::zero(layout.complex().clone(), sums[cp].complex().clone());
            for (k, p) in parts.iter().enumerate() {
                let act = p.action(cp, c);
                let proj = sums[c].projection(k);
                let to_part = apply_on_factors(layout, 0..1, &proj, &act.layout);
                acc = acc.add(&sums[cp].inclusion(k).compose(&act.map).compose(&to_part));
            }
            Ok(acc)
        })
    }
}

/// `D : C → Ch` with actions `hom(c,c′) ⊗ D(c) → D(c′)`.
#[derive(Clone, Debug)]
pub struct Diagram {
    host: Arc<DgCategory>,
    values: Vec<Arc<ChainComplex>>,
    /// `actions[c·n + c′]`.
    actions: Vec<Action>,
}

impl Diagram {
    pub fn new(
        host: Arc<DgCategory>,
        values: Vec<Arc<ChainComplex>>,
        mut action: impl FnMut(usize, usize, &TensorLayout) -> Result<ChainMap, EnrichedError>,
    ) -> Result<Self, EnrichedError> {
        let n = host.object_count();
        if values.len() != n {
            return Err(EnrichedError::Malformed(format!("{} values for {} objects", values.len(), n)));
        }
        let mut actions = Vec::with_capacity(n * n);
        for c in 0..n {
            for cp in 0..n {
                let layout = TensorLayout::new(vec![host.hom(c, cp).clone(), values[c].clone()]);
                let map = action(c, cp, &layout)?;
                if !check_endpoints(&map, &layout, &values[cp]) {
                    return Err(EnrichedError::Malformed(format!(
                        "action ({}, {}) has wrong endpoints",
                        host.name(c),
                        host.name(cp)
                    )));
                }
                let map = map.retarget(layout.complex().clone(), values[cp].clone());
                actions.push(Action { layout, map });
            }
        }
        Ok(Diagram { host, values, actions })
    }

    /// `hom(c, −)` acting by composition.
    pub fn representable(host: Arc<DgCategory>, c: usize) -> Self {
        let values = (0..host.object_count()).map(|x| host.hom(c, x).clone()).collect();
        let h = host.clone();
        Self::new(host, values, |x, cp, _| Ok(h.composition(c, x, cp).map.clone())).expect("representable")
    }

    /// A covariant functor out of `cat` over `free_dg_category(cat)`:
    /// `maps(f) : D(source f) → D(target f)`.
    pub fn from_functor(
        host: Arc<DgCategory>,
        cat: &FiniteCategory,
        values: Vec<Arc<ChainComplex>>,
        maps: impl Fn(usize) -> ChainMap,
    ) -> Result<Self, EnrichedError> {
        let vals = values.clone();
        Self::new(host, values, |c, cp, layout| {
            let fs: Vec<ChainMap> = cat.hom(c, cp).iter().map(|&f| maps(f)).collect();
            Ok(ChainMap::from_fn(layout.complex().clone(), vals[cp].clone(), |k, (rows, cols)| {
                let mut out = Matrix::zeros(rows, cols);
                for blk in layout.blocks(k) {
                    let (q, p) = (blk.degrees[0], blk.degrees[1]);
                    if q != 0 {
                        continue;
                    }
                    let r = blk.dims[1];
                    for (h, f) in fs.iter().enumerate() {
                        let comp = f.component(p);
                        for (i, j, v) in comp.nonzeros() {
                            *out.entry_mut(i, blk.offset + h * r + j) += v;
                        }
                    }
                }
                Some(out)
            }))
        })
    }

    pub fn host(&self) -> &Arc<DgCategory> {
        &self.host
    }

    pub fn value(&self, c: usize) -> &Arc<ChainComplex> {
        &self.values[c]
    }

    pub fn values(&self) -> &[Arc<ChainComplex>] {
        &self.values
    }

    /// `hom(c,c′) ⊗ D(c) → D(c′)`.
    pub fn action(&self, c: usize, cp: usize) -> &Action {
        &self.actions[c * self.host.object_count() + cp]
    }

    pub fn validate(&self) -> Result<(), ModuleViolation> {
        let h = &self.host;
        let n = h.object_count();
        for c in 0..n {
            for cp in 0..n {
                if self.action(c, cp).map.check().is_err() {
                    return Err(ModuleViolation::NotChainMap { from: h.name(c).into(), to: h.name(cp).into() });
                }
            }
        }
        // hom(b,c) ⊗ hom(a,b) ⊗ D(a) → D(c)
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let triple = TensorLayout::new(vec![h.hom(b, c).clone(), h.hom(a, b).clone(), self.values[a].clone()]);
                    if triple.complex().is_zero() {
                        continue;
                    }
                    let (ab, bc) = (self.action(a, b), self.action(b, c));
                    let lhs = bc.map.compose(&apply_on_factors(&triple, 1..3, &ab.map, &bc.layout));
                    let ac = self.action(a, c);
                    let rhs = ac.map.compose(&apply_on_factors(&triple, 0..2, &h.composition(a, b, c).map, &ac.layout));
                    if lhs != rhs {
                        return Err(ModuleViolation::Composition {
                            a: h.name(a).into(),
                            b: h.name(b).into(),
                            c: h.name(c).into(),
                        });
                    }
                }
            }
        }
        for c in 0..n {
            let v = self.values[c].clone();
            let single = TensorLayout::new(vec![v.clone()]);
            let act = self.action(c, c);
            let u = act.map.compose(&apply_on_factors(&single, 0..0, h.unit_map(c), &act.layout));
            if u.retarget(v.clone(), v.clone()) != ChainMap::identity(v) {
                return Err(ModuleViolation::Unit { object: h.name(c).into() });
            }
        }
        Ok(())
    }

    /// `D[k]`; the action picks up `(−1)^{k·|f|}` from moving the shift
    /// past `f`.
    pub fn shift(&self, k: i32) -> Self {
        let values: Vec<Arc<ChainComplex>> = self.values.iter().map(|v| Arc::new(shift(v, k))).collect();
        let vals = values.clone();
        Self::new(self.host.clone(), values, |c, cp, layout| {
            let old = self.action(c, cp);
            Ok(ChainMap::from_fn(layout.complex().clone(), vals[cp].clone(), |m, (rows, cols)| {
                let src = old.map.component(m - k);
                let mut out = Matrix::zeros(rows, cols);
                for blk in layout.blocks(m) {
                    let (p, q) = (blk.degrees[0], blk.degrees[1]);
                    let Some(ob) = old.layout.block(&[p, q - k]) else { continue };
                    let piece = src.block(0, ob.offset, rows, ob.size);
                    let piece = if (k * p).rem_euclid(2) == 1 { piece.scale(&(-1).into()) } else { piece };
                    out.set_block(0, blk.offset, &piece);
                }
                Some(out)
            }))
        })
        .expect("shift preserves shapes")
    }

    pub fn direct_sum(parts: &[&Diagram]) -> Result<Self, EnrichedError> {
        let host = parts.first().map(|p| p.host.clone()).ok_or_else(|| EnrichedError::Malformed("empty sum".into()))?;
        if parts.iter().any(|p| !Arc::ptr_eq(&p.host, &host)) {
            return Err(EnrichedError::HostMismatch);
        }
        let n = host.object_count();
        let sums: Vec<SumLayout> =
            (0..n).map(|c| SumLayout::new(parts.iter().map(|p| p.values[c].clone()).collect())).collect();
        let values = sums.iter().map(|s| s.complex().clone()).collect();
        Self::new(host, values, |c, cp, layout| {
            let mut acc = ChainMap::zero(layout.complex().clone(), sums[cp].complex().clone());
            for (k, p) in parts.iter().enumerate() {
                let act = p.action(c, cp);
                let to_part = apply_on_factors(layout, 1..2, &sums[c].projection(k), &act.layout);
                acc = acc.add(&sums[cp].inclusion(k).compose(&act.map).compose(&to_part));
            }
            Ok(acc)
        })
    }
}

/// A natural transformation of presheaves, one chain map per object.
#[derive(Clone, Debug)]
pub struct PresheafMap {
    pub source: Arc<Presheaf>,
    pub target: Arc<Presheaf>,
    pub components: Vec<ChainMap>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NaturalityViolation {
    #[error("component at {object} is not a chain map")]
    NotChainMap { object: String },
    #[error("naturality fails on ({from}, {to})")]
    Square { from: String, to: String },
}

impl PresheafMap {
    pub fn new(source: Arc<Presheaf>, target: Arc<Presheaf>, components: Vec<ChainMap>) -> Result<Self, EnrichedError> {
        if !Arc::ptr_eq(source.host(), target.host()) {
            return Err(EnrichedError::HostMismatch);
        }
        if components.len() != source.host().object_count() {
            return Err(EnrichedError::Malformed("one component per object expected".into()));
        }
        let mut fixed = Vec::with_capacity(components.len());
        for (c, f) in components.into_iter().enumerate() {
            if **f.source() != **source.value(c) || **f.target() != **target.value(c) {
                return Err(EnrichedError::Malformed(format!("component at {} has wrong endpoints", source.host().name(c))));
            }
            fixed.push(f.retarget(source.value(c).clone(), target.value(c).clone()));
        }
        Ok(PresheafMap { source, target, components: fixed })
    }

    pub fn identity(w: Arc<Presheaf>) -> Self {
        let comps = w.values().iter().map(|v| ChainMap::identity(v.clone())).collect();
        PresheafMap { source: w.clone(), target: w, components: comps }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &PresheafMap) -> PresheafMap {
        let comps = self.components.iter().zip(&other.components).map(|(f, g)| f.compose(g)).collect();
        PresheafMap { source: other.source.clone(), target: self.target.clone(), components: comps }
    }

    /// `φ_{c′} ∘ act_W = act_V ∘ (φ_c ⊗ id)` for every pair.
    pub fn check(&self) -> Result<(), NaturalityViolation> {
        let h = self.source.host();
        for (c, f) in self.components.iter().enumerate() {
            if f.check().is_err() {
                return Err(NaturalityViolation::NotChainMap { object: h.name(c).into() });
            }
        }
        for cp in 0..h.object_count() {
            for c in 0..h.object_count() {
                let (aw, av) = (self.source.action(cp, c), self.target.action(cp, c));
                let lhs = self.components[cp].compose(&aw.map);
                let rhs = av.map.compose(&apply_on_factors(&aw.layout, 0..1, &self.components[c], &av.layout));
                if lhs != rhs {
                    return Err(NaturalityViolation::Square { from: h.name(c).into(), to: h.name(cp).into() });
                }
            }
        }
        Ok(())
    }

    pub fn is_isomorphism(&self) -> bool {
        self.components.iter().all(ChainMap::is_isomorphism)
    }

    /// Componentwise equality of matrices.
    pub fn same_components(&self, other: &PresheafMap) -> bool {
        self.components.len() == other.components.len()
            && self.components.iter().zip(&other.components).all(|(f, g)| f == g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enriched::dg::{ch_full_subcategory, free_dg_category};

    fn z_z1() -> Arc<DgCategory> {
        Arc::new(ch_full_subcategory(vec![
            ("Z".into(), Arc::new(ChainComplex::z(0))),
            ("Z[1]".into(), Arc::new(ChainComplex::z(1))),
        ]))
    }

    #[test]
    fn representables_are_modules() {
        let c = z_z1();
        for x in 0..2 {
            assert_eq!(Presheaf::representable(c.clone(), x).validate(), Ok(()));
            assert_eq!(Diagram::representable(c.clone(), x).validate(), Ok(()));
        }
        let r = Presheaf::representable(c.clone(), 1);
        assert_eq!(**r.value(0), ChainComplex::z(1));
        assert_eq!(**r.value(1), ChainComplex::z(0));
    }

    #[test]
    fn shifted_representable_is_isomorphic() {
        let c = z_z1();
        let r1 = Arc::new(Presheaf::representable(c.clone(), 1));
        let r0 = Arc::new(Presheaf::representable(c.clone(), 0).shift(1));
        assert_eq!(r0.validate(), Ok(()));
        let comps =
            (0..2).map(|x| ChainMap::identity(r1.value(x).clone()).retarget(r1.value(x).clone(), r0.value(x).clone())).collect();
        let iso = PresheafMap::new(r1, r0, comps).unwrap();
        assert_eq!(iso.check(), Ok(()));
        assert!(iso.is_isomorphism());
    }

    #[test]
    fn functor_data_over_free_categories() {
        let cat = FiniteCategory::span();
        let host = Arc::new(free_dg_category(&cat));
        let z = Arc::new(ChainComplex::z(0));
        let zero = Arc::new(ChainComplex::zero());
        let w = Presheaf::constant(host.clone(), &cat, z.clone()).unwrap();
        assert_eq!(w.validate(), Ok(()));
        let values = vec![z.clone(), zero.clone(), zero.clone()];
        let vals = values.clone();
        let d = Diagram::from_functor(host.clone(), &cat, values, |f| {
            let a = cat.arrow_data(f);
            ChainMap::zero(vals[a.source].clone(), vals[a.target].clone())
                .add(&if a.source == a.target { ChainMap::identity(vals[a.source].clone()) } else {
                    ChainMap::zero(vals[a.source].clone(), vals[a.target].clone())
                })
        })
        .unwrap();
        assert_eq!(d.validate(), Ok(()));
        let sum = Presheaf::direct_sum(&[&w, &Presheaf::representable(host.clone(), 1)]).unwrap();
        assert_eq!(sum.validate(), Ok(()));
    }

    #[test]
    fn broken_action_is_reported() {
        let c = z_z1();
        let r = Presheaf::representable(c.clone(), 0);
        let bad = Presheaf::new(c.clone(), r.values().to_vec(), |cp, x, _| {
            let m = r.action(cp, x).map.clone();
            Ok(if (cp, x) == (0, 0) { m.scale(&2.into()) } else { m })
        })
        .unwrap();
        assert!(bad.validate().is_err());
    }

    #[test]
    fn shifted_diagrams_are_modules() {
        let c = z_z1();
        for k in [-1, 1, 2] {
            for x in 0..2 {
                let d = Diagram::representable(c.clone(), x).shift(k);
                assert_eq!(d.validate(), Ok(()), "shift {k} of hom({x}, -)");
            }
        }
    }
}
