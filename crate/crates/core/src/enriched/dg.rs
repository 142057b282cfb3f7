//! Finite dg-categories: hom complexes with composition and unit chain maps.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use super::category::FiniteCategory;
use super::EnrichedError;
use crate::chain::smith::kernel_canonical;
use crate::chain::tensor::{apply_on_factors, TensorLayout};
use crate::chain::{
    cofibration_check, validate_complex, ChainComplex, ChainMap, CofibrationFailure, ComplexViolation, Degree, Matrix,
};

/// `hom(b,c) ⊗ hom(a,b) → hom(a,c)` with the layout of its source.
#[derive(Clone, Debug)]
pub struct Composition {
    pub layout: TensorLayout,
    pub map: ChainMap,
}

#[derive(Clone, Debug)]
pub struct DgCategory {
    names: Vec<String>,
    homs: Vec<Vec<Arc<ChainComplex>>>,
    comps: Vec<Composition>,
    units: Vec<ChainMap>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DgViolation {
    #[error("hom({a}, {b}) is not a chain complex: {violation}")]
    Hom { a: String, b: String, violation: ComplexViolation },
    #[error("{what} is not a chain map")]
    NotChainMap { what: String },
    #[error("associativity fails on ({a}, {b}, {c}, {d})")]
    Associativity { a: String, b: String, c: String, d: String },
    #[error("left unit law fails on hom({a}, {b})")]
    LeftUnit { a: String, b: String },
    #[error("right unit law fails on hom({a}, {b})")]
    RightUnit { a: String, b: String },
}

fn unit_source() -> Arc<ChainComplex> {
    Arc::new(ChainComplex::z(0))
}

impl DgCategory {
    /// Builds a dg-category from hom complexes, a composition constructor
    /// called once per triple `(a, b, c)` with the layout of
    /// `hom(b,c) ⊗ hom(a,b)`, and unit maps `ℤ[0] → hom(a,a)`. Endpoints are
    /// checked; the laws are left to [`DgCategory::validate`].
    pub fn new(
        names: Vec<String>,
        homs: Vec<Vec<Arc<ChainComplex>>>,
        mut comp: impl FnMut(usize, usize, usize, &TensorLayout) -> Result<ChainMap, EnrichedError>,
        units: Vec<ChainMap>,
    ) -> Result<Self, EnrichedError> {
        let n = names.len();
        if homs.len() != n || homs.iter().any(|row| row.len() != n) || units.len() != n {
            return Err(EnrichedError::Malformed(format!("expected {n}×{n} homs and {n} units")));
        }
        let mut comps = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let layout = TensorLayout::new(vec![homs[b][c].clone(), homs[a][b].clone()]);
                    let map = comp(a, b, c, &layout)?;
                    if **map.source() != **layout.complex() || **map.target() != *homs[a][c] {
                        return Err(EnrichedError::Malformed(format!(
                            "composition ({}, {}, {}) has wrong endpoints",
                            names[a], names[b], names[c]
                        )));
                    }
                    let map = map.retarget(layout.complex().clone(), homs[a][c].clone());
                    comps.push(Composition { layout, map });
                }
            }
        }
        let mut fixed = Vec::with_capacity(n);
        for (a, u) in units.into_iter().enumerate() {
            if **u.source() != ChainComplex::z(0) || **u.target() != *homs[a][a] {
                return Err(EnrichedError::Malformed(format!("unit of {} has wrong endpoints", names[a])));
            }
            fixed.push(u.retarget(unit_source(), homs[a][a].clone()));
        }
        Ok(DgCategory { names, homs, comps, units: fixed })
    }

    /// One object with hom `ℤ[0]` and multiplication.
    pub fn unit() -> Self {
        let z = Arc::new(ChainComplex::z(0));
        Self::new(
            vec!["*".into()],
            vec![vec![z.clone()]],
            |_, _, _, l| Ok(ChainMap::identity(l.complex().clone()).retarget(l.complex().clone(), z.clone())),
            vec![ChainMap::identity(z.clone())],
        )
        .expect("unit category is well formed")
    }

    pub fn object_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn hom(&self, a: usize, b: usize) -> &Arc<ChainComplex> {
        &self.homs[a][b]
    }

    fn slot(&self, a: usize, b: usize, c: usize) -> usize {
        let n = self.names.len();
        (a * n + b) * n + c
    }

    /// `hom(b,c) ⊗ hom(a,b) → hom(a,c)`.
    pub fn composition(&self, a: usize, b: usize, c: usize) -> &Composition {
        &self.comps[self.slot(a, b, c)]
    }

    pub fn unit_map(&self, a: usize) -> &ChainMap {
        &self.units[a]
    }

    /// The identity of `a` as a vector in `hom(a,a)_0`.
    pub fn identity_vector(&self, a: usize) -> Vec<BigInt> {
        self.units[a].component(0).column(0)
    }

    /// `g ∘ f` for `g ∈ hom(b,c)_m`, `f ∈ hom(a,b)_n`.
    pub fn compose_vectors(
        &self,
        (a, b, c): (usize, usize, usize),
        (m, g): (Degree, &[BigInt]),
        (n, f): (Degree, &[BigInt]),
    ) -> Vec<BigInt> {
        let comp = self.composition(a, b, c);
        let target = comp.map.target().rank(m + n);
        let mut x = vec![BigInt::zero(); comp.layout.complex().rank(m + n)];
        for (i, gi) in g.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, fj) in f.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                if let Some(k) = comp.layout.index_of(&[m, n], &[i, j]) {
                    x[k] += gi * fj;
                }
            }
        }
        if target == 0 {
            return Vec::new();
        }
        comp.map.component(m + n).mul_vec(&x)
    }

    /// Checks hom complexes, chain-map conditions, associativity and the
    /// unit laws as exact matrix identities.
    pub fn validate(&self) -> Result<(), DgViolation> {
        let n = self.names.len();
        let nm = |a: usize| self.names[a].clone();
        for a in 0..n {
            for b in 0..n {
                validate_complex(&self.homs[a][b])
                    .map_err(|violation| DgViolation::Hom { a: nm(a), b: nm(b), violation })?;
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.composition(a, b, c).map.check().is_err() {
                        return Err(DgViolation::NotChainMap {
                            what: format!("composition ({}, {}, {})", nm(a), nm(b), nm(c)),
                        });
                    }
                }
            }
            if self.units[a].check().is_err() {
                return Err(DgViolation::NotChainMap { what: format!("unit of {}", nm(a)) });
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        if !self.associative(a, b, c, d) {
                            return Err(DgViolation::Associativity { a: nm(a), b: nm(b), c: nm(c), d: nm(d) });
                        }
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let hom = self.homs[a][b].clone();
                let single = TensorLayout::new(vec![hom.clone()]);
                let id = ChainMap::identity(hom.clone());
                let left = self.composition(a, b, b);
                let l = apply_on_factors(&single, 0..0, &self.units[b], &left.layout);
                if left.map.compose(&l).retarget(hom.clone(), hom.clone()) != id {
                    return Err(DgViolation::LeftUnit { a: nm(a), b: nm(b) });
                }
                let right = self.composition(a, a, b);
                let r = apply_on_factors(&single, 1..1, &self.units[a], &right.layout);
                if right.map.compose(&r).retarget(hom.clone(), hom.clone()) != id {
                    return Err(DgViolation::RightUnit { a: nm(a), b: nm(b) });
                }
            }
        }
        Ok(())
    }

    fn associative(&self, a: usize, b: usize, c: usize, d: usize) -> bool {
        let triple = TensorLayout::new(vec![self.homs[c][d].clone(), self.homs[b][c].clone(), self.homs[a][b].clone()]);
        if triple.complex().is_zero() {
            return true;
        }
        let bcd = self.composition(b, c, d);
        let abd = self.composition(a, b, d);
        let lhs = abd.map.compose(&apply_on_factors(&triple, 0..2, &bcd.map, &abd.layout));
        let abc = self.composition(a, b, c);
        let acd = self.composition(a, c, d);
        let rhs = acd.map.compose(&apply_on_factors(&triple, 1..3, &abc.map, &acd.layout));
        lhs == rhs
    }

    /// The full subcategory on the given objects, in the given order.
    pub fn full_subcategory(&self, objects: &[usize]) -> Result<Self, EnrichedError> {
        let names = objects.iter().map(|&a| self.names[a].clone()).collect();
        let homs = objects.iter().map(|&a| objects.iter().map(|&b| self.homs[a][b].clone()).collect()).collect();
        let units = objects.iter().map(|&a| self.units[a].clone()).collect();
        Self::new(
            names,
            homs,
            |a, b, c, _| Ok(self.composition(objects[a], objects[b], objects[c]).map.clone()),
            units,
        )
    }

    /// Replaces each hom by its connective cover `τ≥0`: degrees `< 0`
    /// dropped, degree 0 replaced by its cycles.
    pub fn connective_cover(&self) -> Self {
        let n = self.names.len();
        let covers: Vec<Vec<Cover>> = (0..n).map(|a| (0..n).map(|b| Cover::new(&self.homs[a][b])).collect()).collect();
        let homs = covers.iter().map(|row| row.iter().map(|c| c.complex.clone()).collect()).collect();
        let units = (0..n).map(|a| covers[a][a].restrict(&self.units[a])).collect();
        Self::new(
            self.names.clone(),
            homs,
            |a, b, c, layout| {
                let comp = self.composition(a, b, c);
                let (inner, outer) = (&covers[b][c], &covers[a][b]);
                let m = ChainMap::from_fn(layout.complex().clone(), covers[a][c].complex.clone(), |k, (rows, cols)| {
                    let mut out = Matrix::zeros(rows, cols);
                    for blk in layout.blocks(k) {
                        let (p, q) = (blk.degrees[0], blk.degrees[1]);
                        let Some(src) = comp.layout.block(&[p, q]) else { continue };
                        let piece = comp.map.component(k).block(0, src.offset, comp.map.target().rank(k), src.size);
                        let piece = &piece * &inner.inclusion(p).kron(&outer.inclusion(q));
                        out.set_block(0, blk.offset, &(&covers[a][c].retraction(k) * &piece));
                    }
                    Some(out)
                });
                Ok(m)
            },
            units,
        )
        .expect("connective cover preserves shapes")
    }

    /// Hom complexes degreewise free with bounded support (always true
    /// here) and units degreewise split injective.
    pub fn flatness_report(&self) -> FlatnessReport {
        let lo = self.homs.iter().flatten().filter_map(|h| h.min_degree()).min();
        let hi = self.homs.iter().flatten().filter_map(|h| h.max_degree()).max();
        let objects: Vec<ObjectFlatness> = (0..self.names.len())
            .map(|a| ObjectFlatness { object: self.names[a].clone(), unit: cofibration_check(&self.units[a]) })
            .collect();
        FlatnessReport {
            locally_flat: true,
            locally_star_flat: objects.iter().all(|o| o.unit.is_ok()),
            hom_support: lo.zip(hi),
            objects,
        }
    }
}

/// Degree-0 cycles of a complex as a subcomplex of its nonnegative part.
struct Cover {
    complex: Arc<ChainComplex>,
    basis: Matrix,
    coords: Matrix,
}

impl Cover {
    fn new(h: &ChainComplex) -> Self {
        let k = kernel_canonical(&h.diff(0));
        let hi = h.max_degree().unwrap_or(-1);
        if hi < 0 {
            return Cover { complex: Arc::new(ChainComplex::zero()), basis: k.basis, coords: k.coords };
        }
        let mut ranks = vec![k.basis.cols()];
        let mut diffs = vec![Matrix::zeros(0, k.basis.cols())];
        for n in 1..=hi {
            ranks.push(h.rank(n));
            diffs.push(if n == 1 { &k.coords * &*h.diff(1) } else { h.diff(n).into_owned() });
        }
        let complex = ChainComplex::new(0, ranks, diffs).expect("cover shapes are consistent");
        Cover { complex: Arc::new(complex), basis: k.basis, coords: k.coords }
    }

    fn inclusion(&self, n: Degree) -> Matrix {
        if n == 0 {
            self.basis.clone()
        } else {
            Matrix::identity(self.complex.rank(n))
        }
    }

    fn retraction(&self, n: Degree) -> Matrix {
        if n == 0 {
            self.coords.clone()
        } else {
            Matrix::identity(self.complex.rank(n))
        }
    }

    fn restrict(&self, u: &ChainMap) -> ChainMap {
        ChainMap::from_fn(u.source().clone(), self.complex.clone(), |k, (rows, cols)| {
            Some(if k == 0 { &self.coords * &*u.component(0) } else { Matrix::zeros(rows, cols) })
        })
    }
}

#[derive(Clone, Debug)]
pub struct ObjectFlatness {
    pub object: String,
    /// Whether the unit `ℤ[0] → hom(c,c)` is a cofibration.
    pub unit: Result<(), CofibrationFailure>,
}

#[derive(Clone, Debug)]
pub struct FlatnessReport {
    pub locally_flat: bool,
    pub locally_star_flat: bool,
    pub hom_support: Option<(Degree, Degree)>,
    pub objects: Vec<ObjectFlatness>,
}

/// `ℤ`-linearization of a finite category: `hom(i,j) = ℤ^{I(i,j)}` in degree 0.
pub fn free_dg_category(cat: &FiniteCategory) -> DgCategory {
    let n = cat.object_count();
    let homs: Vec<Vec<Arc<ChainComplex>>> = (0..n)
        .map(|i| (0..n).map(|j| Arc::new(ChainComplex::concentrated(0, cat.hom(i, j).len()))).collect())
        .collect();
    let units = (0..n)
        .map(|i| {
            let pos = cat.hom(i, i).iter().position(|&f| f == cat.identity(i)).expect("identity is an endomorphism");
            let mut m = Matrix::zeros(cat.hom(i, i).len(), 1);
            m.set(pos, 0, 1);
            ChainMap::new(unit_source(), homs[i][i].clone(), vec![(0, m)]).expect("unit shape")
        })
        .collect();
    DgCategory::new(
        cat.objects().to_vec(),
        homs.clone(),
        |a, b, c, layout| {
            let (gs, fs, hs) = (cat.hom(b, c), cat.hom(a, b), cat.hom(a, c));
            let mut m = Matrix::zeros(hs.len(), gs.len() * fs.len());
            for (gi, &g) in gs.iter().enumerate() {
                for (fi, &f) in fs.iter().enumerate() {
                    let h = cat.compose(g, f).ok_or_else(|| EnrichedError::Malformed("composite missing".into()))?;
                    let row = hs.iter().position(|&x| x == h).expect("composite lies in hom");
                    m.set(row, gi * fs.len() + fi, 1);
                }
            }
            let comps = if layout.complex().is_zero() { Vec::new() } else { vec![(0, m)] };
            Ok(ChainMap::new(layout.complex().clone(), homs[a][c].clone(), comps)?)
        },
        units,
    )
    .expect("linearized tables have consistent shapes")
}

/// The internal hom `Hom(A,B)` of chain complexes:
/// `Hom_n = ⊕_p Hom(A_p, B_{p+n})`, `D f = d_B f − (−1)^n f d_A`.
///
/// The basis of `Hom_n` runs over `p` ascending and then the entries of the
/// `B_{p+n} × A_p` matrix in row-major order.
#[derive(Clone, Debug)]
pub struct InternalHom {
    pub complex: Arc<ChainComplex>,
    a: Arc<ChainComplex>,
    b: Arc<ChainComplex>,
    offsets: BTreeMap<(Degree, Degree), usize>,
}

impl InternalHom {
    pub fn new(a: Arc<ChainComplex>, b: Arc<ChainComplex>) -> Self {
        let (Some((alo, ahi)), Some((blo, bhi))) = (a.support(), b.support()) else {
            return InternalHom { complex: Arc::new(ChainComplex::zero()), a, b, offsets: BTreeMap::new() };
        };
        let (lo, hi) = (blo - ahi, bhi - alo);
        let mut offsets = BTreeMap::new();
        let mut ranks = Vec::new();
        for n in lo..=hi {
            let mut acc = 0;
            for p in alo..=ahi {
                offsets.insert((n, p), acc);
                acc += a.rank(p) * b.rank(p + n);
            }
            ranks.push(acc);
        }
        let mut this = InternalHom { complex: Arc::new(ChainComplex::zero()), a, b, offsets };
        let mut diffs = Vec::new();
        for (k, n) in (lo..=hi).enumerate() {
            let rows = if k == 0 { 0 } else { ranks[k - 1] };
            let mut d = Matrix::zeros(rows, ranks[k]);
            if k > 0 {
                let sign: i64 = if n.rem_euclid(2) == 0 { 1 } else { -1 };
                for p in alo..=ahi {
                    let (ra, rb) = (this.a.rank(p), this.b.rank(p + n));
                    let db = this.b.diff(p + n);
                    let da = this.a.diff(p + 1);
                    for r in 0..rb {
                        for s in 0..ra {
                            let col = this.index(n, p, r, s).expect("in range");
                            for i in 0..db.rows() {
                                let v = db.get(i, r);
                                if !v.is_zero() {
                                    let row = this.index(n - 1, p, i, s).expect("in range");
                                    *d.entry_mut(row, col) += v;
                                }
                            }
                            for j in 0..da.cols() {
                                let v = da.get(s, j);
                                if !v.is_zero() {
                                    let row = this.index(n - 1, p + 1, r, j).expect("in range");
                                    *d.entry_mut(row, col) -= v * sign;
                                }
                            }
                        }
                    }
                }
            }
            diffs.push(d);
        }
        this.complex = Arc::new(ChainComplex::new(lo, ranks, diffs).expect("internal hom is a complex"));
        this
    }

    /// Position of the elementary map `e_r e_sᵀ : A_p → B_{p+n}` in `Hom_n`.
    pub fn index(&self, n: Degree, p: Degree, r: usize, s: usize) -> Option<usize> {
        let off = *self.offsets.get(&(n, p))?;
        let (ra, rb) = (self.a.rank(p), self.b.rank(p + n));
        (r < rb && s < ra).then_some(off + r * ra + s)
    }

    /// The vector of a degree-`n` map given by its components `A_p → B_{p+n}`.
    pub fn vector(&self, n: Degree, comps: impl Fn(Degree) -> Matrix) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.complex.rank(n)];
        for p in self.a.degrees() {
            let m = comps(p);
            for (r, s, x) in m.nonzeros() {
                if let Some(k) = self.index(n, p, r, s) {
                    v[k] = x.clone();
                }
            }
        }
        v
    }
}

/// The full dg-subcategory of chain complexes on the given objects.
pub fn ch_full_subcategory(objects: Vec<(String, Arc<ChainComplex>)>) -> DgCategory {
    let n = objects.len();
    let homs: Vec<Vec<InternalHom>> = (0..n)
        .map(|i| (0..n).map(|j| InternalHom::new(objects[i].1.clone(), objects[j].1.clone())).collect())
        .collect();
    let units = (0..n)
        .map(|i| {
            let h = &homs[i][i];
            let v = h.vector(0, |p| Matrix::identity(objects[i].1.rank(p)));
            let m = Matrix::from_vec(v.len(), 1, v).expect("column");
            ChainMap::new(unit_source(), h.complex.clone(), if m.rows() == 0 { vec![] } else { vec![(0, m)] })
                .expect("unit shape")
        })
        .collect();
    DgCategory::new(
        objects.iter().map(|o| o.0.clone()).collect(),
        homs.iter().map(|row| row.iter().map(|h| h.complex.clone()).collect()).collect(),
        |a, b, c, layout| {
            let (g, f, h) = (&homs[b][c], &homs[a][b], &homs[a][c]);
            let (ca, cb) = (&objects[a].1, &objects[b].1);
            Ok(ChainMap::from_fn(layout.complex().clone(), h.complex.clone(), |k, (rows, cols)| {
                let mut out = Matrix::zeros(rows, cols);
                for blk in layout.blocks(k) {
                    let (m, nn) = (blk.degrees[0], blk.degrees[1]);
                    for p in ca.degrees() {
                        let q = p + nn;
                        let (ra, rb) = (ca.rank(p), cb.rank(q));
                        let rc = objects[c].1.rank(q + m);
                        for r in 0..rc {
                            for s in 0..rb {
                                let gi = g.index(m, q, r, s).expect("in range");
                                for t in 0..ra {
                                    let fi = f.index(nn, p, s, t).expect("in range");
                                    let col = layout.index_of(&[m, nn], &[gi, fi]).expect("in range");
                                    let row = h.index(k, p, r, t).expect("in range");
                                    *out.entry_mut(row, col) += 1;
                                }
                            }
                        }
                    }
                }
                Some(out)
            }))
        },
        units,
    )
    .expect("internal homs compose with consistent shapes")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(k: Degree) -> Arc<ChainComplex> {
        Arc::new(ChainComplex::z(k))
    }

    #[test]
    fn unit_category_is_valid() {
        assert_eq!(DgCategory::unit().validate(), Ok(()));
    }

    #[test]
    fn free_categories() {
        let d = free_dg_category(&FiniteCategory::discrete(2));
        assert_eq!(d.validate(), Ok(()));
        assert_eq!(d.hom(0, 0).rank(0), 1);
        assert!(d.hom(0, 1).is_zero());
        let a = free_dg_category(&FiniteCategory::arrow());
        assert_eq!(a.hom(0, 1).rank(0), 1);
        assert!(a.hom(1, 0).is_zero());
        let p = free_dg_category(&FiniteCategory::poset(3, &[(0, 1), (1, 2)]).unwrap());
        assert_eq!(p.validate(), Ok(()));
        assert!(p.composition(0, 1, 2).map.component(0).is_identity());
        let f = free_dg_category(&FiniteCategory::free_on_dag(3, &[(0, 1), (0, 1), (1, 2), (1, 2)]).unwrap());
        assert_eq!(f.validate(), Ok(()));
        assert_eq!(f.hom(0, 2).rank(0), 4);
    }

    #[test]
    fn z_and_z1() {
        let c = ch_full_subcategory(vec![("Z".into(), z(0)), ("Z[1]".into(), z(1))]);
        assert_eq!(c.validate(), Ok(()));
        assert_eq!(**c.hom(0, 1), ChainComplex::z(1));
        assert_eq!(**c.hom(1, 0), ChainComplex::z(-1));
        assert_eq!(**c.hom(1, 1), ChainComplex::z(0));
        let r = c.flatness_report();
        assert!(r.locally_flat && r.locally_star_flat);
    }

    #[test]
    fn cones_and_cover() {
        let cone = Arc::new(ChainComplex::two_term(1, Matrix::from_i64(1, 1, &[2])));
        let c = ch_full_subcategory(vec![("Z".into(), z(0)), ("C".into(), cone), ("Z[1]".into(), z(1))]);
        assert_eq!(c.validate(), Ok(()));
        let t = c.connective_cover();
        assert_eq!(t.validate(), Ok(()));
        assert!(t.names().iter().enumerate().all(|(a, _)| (0..3).all(|b| t.hom(a, b).min_degree().is_none_or(|d| d >= 0))));
        assert!(t.flatness_report().locally_star_flat);
    }

    #[test]
    fn broken_associativity_is_reported() {
        let c = ch_full_subcategory(vec![("Z".into(), z(0)), ("Z2".into(), Arc::new(ChainComplex::concentrated(0, 2)))]);
        let bad = DgCategory::new(
            c.names().to_vec(),
            (0..2).map(|a| (0..2).map(|b| c.hom(a, b).clone()).collect()).collect(),
            |a, b, cc, _| {
                let m = c.composition(a, b, cc).map.clone();
                Ok(if (a, b, cc) == (1, 0, 1) { m.scale(&BigInt::from(2)) } else { m })
            },
            (0..2).map(|a| c.unit_map(a).clone()).collect(),
        )
        .unwrap();
        assert!(bad.validate().is_err());
    }
}
