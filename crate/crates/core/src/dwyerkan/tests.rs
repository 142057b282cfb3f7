use std::sync::Arc;

use super::*;
use crate::chain::{AbelianGroup, ChainComplex, Matrix};
use crate::colim::{same_presheaf, yoneda_map};
use crate::enriched::{ch_full_subcategory, free_dg_category, FiniteCategory};

fn cat(objects: &[(&str, ChainComplex)]) -> Arc<DgCategory> {
    Arc::new(ch_full_subcategory(objects.iter().map(|(n, c)| (n.to_string(), Arc::new(c.clone()))).collect()))
}

fn z_and_z2() -> Arc<DgCategory> {
    cat(&[("Z", ChainComplex::z(0)), ("Z2", ChainComplex::concentrated(0, 2))])
}

fn z_and_z1() -> Arc<DgCategory> {
    cat(&[("Z", ChainComplex::z(0)), ("Z[1]", ChainComplex::z(1))])
}

#[test]
fn identity_functor() {
    let host = Arc::new(free_dg_category(&FiniteCategory::span()));
    let f = DgFunctor::identity(host.clone());
    assert_eq!(f.validate(), Ok(()));
    assert!(f.is_homotopically_ff().holds());
    let w = Arc::new(Presheaf::constant(host.clone(), &FiniteCategory::span(), Arc::new(ChainComplex::z(0))).unwrap());
    assert!(same_presheaf(&restrict(&f, &w).unwrap(), &w));
    let lk = left_kan(&f, w.clone()).unwrap();
    let eps = counit(&f, &w, &lk).unwrap();
    assert_eq!(eps.check(), Ok(()));
    assert!(eps.is_isomorphism());
}

#[test]
fn inclusion_into_biproducts() {
    let f = DgFunctor::inclusion(z_and_z2(), &[0]).unwrap();
    assert_eq!(f.validate(), Ok(()));
    assert!(f.is_homotopically_ff().holds());
    let w = Arc::new(Presheaf::representable(f.source().clone(), 0));
    let lk = left_kan(&f, w).unwrap();
    assert_eq!(lk.presheaf.validate(), Ok(()));
    assert_eq!(lk.presheaf.value(1).rank(0), 2);
    for c in 0..2 {
        assert!(yoneda_map(&lk.diagrams[c], 0, &lk.colimits[c]).is_isomorphism());
    }
}

#[test]
fn restriction_of_representable() {
    let f = DgFunctor::inclusion(z_and_z1(), &[0]).unwrap();
    let v = Presheaf::representable(f.target().clone(), 1);
    let r = restrict(&f, &v).unwrap();
    assert_eq!(r.validate(), Ok(()));
    assert_eq!(**r.value(0), **f.target().hom(0, 1));
}

#[test]
fn triangle_identities() {
    let f = DgFunctor::inclusion(z_and_z1(), &[1]).unwrap();
    let w = Arc::new(Presheaf::representable(f.source().clone(), 0));
    assert!(left_triangle(&f, &w).unwrap());
    for c in 0..2 {
        let v = Arc::new(Presheaf::representable(f.target().clone(), c));
        assert!(right_triangle(&f, &v).unwrap());
    }
    let g = DgFunctor::inclusion(z_and_z2(), &[1]).unwrap();
    let w = Arc::new(Presheaf::representable(g.source().clone(), 0).shift(2));
    assert!(left_triangle(&g, &w).unwrap());
}

#[test]
fn unit_and_counit_are_natural() {
    let f = DgFunctor::inclusion(z_and_z2(), &[0]).unwrap();
    let w = Arc::new(Presheaf::representable(f.source().clone(), 0));
    let lk = left_kan(&f, w.clone()).unwrap();
    let fv = Arc::new(restrict(&f, &lk.presheaf).unwrap());
    let eta = unit(&f, &w, &lk, fv).unwrap();
    assert_eq!(eta.check(), Ok(()));
    let v = Arc::new(Presheaf::representable(f.target().clone(), 1));
    let lk = left_kan(&f, Arc::new(restrict(&f, &v).unwrap())).unwrap();
    let eps = counit(&f, &v, &lk).unwrap();
    assert_eq!(eps.check(), Ok(()));
}

fn doubling() -> DgFunctor {
    let one = Arc::new(DgCategory::unit());
    let target = cat(&[("Z", ChainComplex::z(0))]);
    let t = target.clone();
    DgFunctor::new(one, target, vec![0], |_, _| {
        let h = t.hom(0, 0).clone();
        ChainMap::new(Arc::new(ChainComplex::z(0)), h, vec![(0, Matrix::from_i64(1, 1, &[2]))]).unwrap()
    })
    .unwrap()
}

#[test]
fn doubling_is_not_ff() {
    let f = doubling();
    assert!(matches!(f.validate(), Err(FunctorViolation::Unit { .. })));
    let r = f.is_homotopically_ff();
    let bad: Vec<&HffPair> = r.failures().collect();
    assert_eq!(bad.len(), 1);
    assert_eq!(bad[0].verdict.cone_homology.get(0), AbelianGroup::from_cyclic(0, &[2.into()]));
}

#[test]
fn retract_of_an_image_object() {
    let f = DgFunctor::inclusion(z_and_z2(), &[0]).unwrap();
    let s = h0_retract_witness(&f, 0, SearchBounds::default());
    let w = s.witness().expect("witness");
    assert_eq!(w.summands.len(), 1);
    assert!(verify_retract(&f, w));
}

#[test]
fn biproduct_is_a_retract_of_two_copies() {
    let f = DgFunctor::inclusion(z_and_z2(), &[0]).unwrap();
    let s = h0_retract_witness(&f, 1, SearchBounds::default());
    let w = s.witness().expect("witness");
    assert_eq!(w.summands.len(), 2);
    assert!(verify_retract(&f, w));
    let tight = h0_retract_witness(&f, 1, SearchBounds { max_summands: 1, ..SearchBounds::default() });
    assert!(matches!(tight, RetractSearch::NotFoundWithinBounds { .. }));
}

#[test]
fn shifted_object_is_not_a_retract() {
    let f = DgFunctor::inclusion(z_and_z1(), &[0]).unwrap();
    assert_eq!(
        h0_retract_witness(&f, 1, SearchBounds::default()),
        RetractSearch::CertifiedNonexistent(NonexistenceReason::VanishingGroups)
    );
}

#[test]
fn counit_on_biproducts_is_sound() {
    let f = DgFunctor::inclusion(z_and_z2(), &[0]).unwrap();
    for c in 0..2 {
        let r = derived_counit_check(&f, c, 2, (-1, 2)).unwrap();
        assert_eq!(r.mode, CounitMode::Sound);
        assert!(r.passes(), "object {c}: {:?}", r.failures());
    }
}

#[test]
fn counit_on_shift_is_heuristic_stable() {
    let f = DgFunctor::inclusion(z_and_z1(), &[0]).unwrap();
    let r = derived_counit_check(&f, 1, 2, (-2, 2)).unwrap();
    assert_eq!(r.mode, CounitMode::HeuristicStable);
    assert!(r.passes());
}

#[test]
fn discrete_pair_collapsing_to_one_object() {
    let source = Arc::new(free_dg_category(&FiniteCategory::discrete(2)));
    let target = cat(&[("Z", ChainComplex::z(0))]);
    let (s, t) = (source.clone(), target.clone());
    let f = DgFunctor::new(source, target, vec![0, 0], |a, b| {
        let id = ChainMap::identity(s.hom(a, b).clone());
        if a == b {
            id.retarget(s.hom(a, b).clone(), t.hom(0, 0).clone())
        } else {
            ChainMap::zero(s.hom(a, b).clone(), t.hom(0, 0).clone())
        }
    })
    .unwrap();
    assert_eq!(f.validate(), Ok(()));
    assert!(!f.is_homotopically_ff().holds());
    let r = derived_counit_check(&f, 0, 1, (-1, 2)).unwrap();
    assert_eq!(r.mode, CounitMode::Sound);
    assert_eq!(r.failures(), vec![0]);
    assert_eq!(r.verdicts[0].cone_homology.get(1), AbelianGroup::free(1));
}

