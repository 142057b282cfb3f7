//! Cubical diagrams, pushout-corner maps and their tensor products.
//!
//! Vertices are indexed by bitmasks over the labels; the map for adding
//! label `j` to `A` is stored under `(A, j)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::ColimError;
use crate::chain::tensor::{assemble, tensor_maps, SumLayout, TensorLayout};
use crate::chain::{cokernel_complex, ChainComplex, ChainMap, Quotient};

#[derive(Clone, Debug)]
pub struct CubicalDiagram {
    labels: Vec<String>,
    objects: Vec<Arc<ChainComplex>>,
    maps: BTreeMap<(usize, usize), ChainMap>,
}

/// A square that fails to commute, named by its bottom vertex and two labels.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("square at {mask:#b} on labels {i}, {j} does not commute")]
pub struct CubeViolation {
    pub mask: usize,
    pub i: usize,
    pub j: usize,
}

impl CubicalDiagram {
    /// `objects` has `2^|labels|` entries; `map(A, j)` gives `X(A) → X(A ∪ j)`.
    pub fn new(
        labels: Vec<String>,
        objects: Vec<Arc<ChainComplex>>,
        mut map: impl FnMut(usize, usize) -> ChainMap,
    ) -> Result<Self, ColimError> {
        let s = labels.len();
        if objects.len() != 1 << s {
            return Err(ColimError::Malformed(format!("{} vertices for {} labels", objects.len(), s)));
        }
        let mut maps = BTreeMap::new();
        for a in 0..objects.len() {
            for j in (0..s).filter(|j| a & (1 << j) == 0) {
                let f = map(a, j);
                if **f.source() != *objects[a] || **f.target() != *objects[a | 1 << j] {
                    return Err(ColimError::Malformed(format!("edge ({a:#b}, {j}) has wrong endpoints")));
                }
                maps.insert((a, j), f.retarget(objects[a].clone(), objects[a | 1 << j].clone()));
            }
        }
        Ok(CubicalDiagram { labels, objects, maps })
    }

    /// The 1-cube `f : A → B`.
    pub fn arrow(label: &str, f: &ChainMap) -> Self {
        Self::new(vec![label.into()], vec![f.source().clone(), f.target().clone()], |_, _| f.clone())
            .expect("endpoints match")
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn object(&self, mask: usize) -> &Arc<ChainComplex> {
        &self.objects[mask]
    }

    pub fn edge(&self, mask: usize, j: usize) -> &ChainMap {
        &self.maps[&(mask, j)]
    }

    pub fn top(&self) -> usize {
        (1 << self.dim()) - 1
    }

    /// Composite `X(A) → X(B)` along increasing labels, `A ⊆ B`.
    pub fn path(&self, a: usize, b: usize) -> ChainMap {
        let mut f = ChainMap::identity(self.objects[a].clone());
        let mut at = a;
        for j in (0..self.dim()).filter(|j| b & (1 << j) != 0 && a & (1 << j) == 0) {
            f = self.edge(at, j).compose(&f);
            at |= 1 << j;
        }
        f
    }

    /// Checks commutativity of every square and that edges are chain maps.
    pub fn validate(&self) -> Result<(), CubeViolation> {
        for (&(a, j), f) in &self.maps {
            if f.check().is_err() {
                return Err(CubeViolation { mask: a, i: j, j });
            }
        }
        for a in 0..self.objects.len() {
            for i in 0..self.dim() {
                for j in i + 1..self.dim() {
                    if a & (1 << i) != 0 || a & (1 << j) != 0 {
                        continue;
                    }
                    let via_i = self.edge(a | 1 << i, j).compose(self.edge(a, i));
                    let via_j = self.edge(a | 1 << j, i).compose(self.edge(a, j));
                    if via_i != via_j {
                        return Err(CubeViolation { mask: a, i, j });
                    }
                }
            }
        }
        Ok(())
    }
}

/// `colim_{A ⊊ S} X(A) → X(S)` with the presentation of the colimit.
#[derive(Clone, Debug)]
pub struct PushoutCorner {
    /// Proper subsets in increasing mask order.
    pub proper: Vec<usize>,
    pub sum: SumLayout,
    pub quotient: Quotient,
    pub map: ChainMap,
}

impl PushoutCorner {
    pub fn colimit(&self) -> &Arc<ChainComplex> {
        &self.quotient.complex
    }

    /// `X(A) → colim` for a proper subset `A`.
    pub fn leg(&self, mask: usize) -> ChainMap {
        let k = self.proper.iter().position(|&m| m == mask).expect("proper subset");
        self.quotient.projection.compose(&self.sum.inclusion(k))
    }

    /// The pushout-corner map as a 1-cube.
    pub fn as_cube(&self, label: &str) -> CubicalDiagram {
        CubicalDiagram::arrow(label, &self.map)
    }
}

/// The pushout-corner map, with the colimit presented as the cokernel of
/// `y ↦ ι_A(y) − ι_{A∪j}(X(A ⊂ A∪j) y)` over covering pairs of proper subsets.
/// Torsion in the colimit is an error.
pub fn pushout_corner_map(x: &CubicalDiagram) -> Result<PushoutCorner, ColimError> {
    let top = x.top();
    let proper: Vec<usize> = (0..top).collect();
    let sum = SumLayout::new(proper.iter().map(|&m| x.object(m).clone()).collect());
    let pairs: Vec<(usize, usize)> = proper
        .iter()
        .flat_map(|&a| (0..x.dim()).filter(move |j| a & (1 << j) == 0).map(move |j| (a, j)))
        .filter(|&(a, j)| a | 1 << j != top)
        .collect();
    let rel_sum = SumLayout::new(pairs.iter().map(|&(a, _)| x.object(a).clone()).collect());
    let mut blocks = Vec::with_capacity(2 * pairs.len());
    for (k, &(a, j)) in pairs.iter().enumerate() {
        blocks.push((a, k, ChainMap::identity(x.object(a).clone())));
        blocks.push((a | 1 << j, k, x.edge(a, j).neg()));
    }
    let relations = assemble(&rel_sum, &sum, blocks.iter().map(|(t, s, f)| (*t, *s, f)));
    let quotient = cokernel_complex(&relations)?;
    let mut total = ChainMap::zero(sum.complex().clone(), x.object(top).clone());
    for (k, &a) in proper.iter().enumerate() {
        total = total.add(&x.path(a, top).compose(&sum.projection(k)));
    }
    let map = quotient.descend(&total);
    Ok(PushoutCorner { proper, sum, quotient, map })
}

/// `(X ⊗ Y)(I ⊔ J) = X(I) ⊗ Y(J)`, vertex `I | J << dim X`.
pub fn cube_tensor(x: &CubicalDiagram, y: &CubicalDiagram) -> Result<CubicalDiagram, ColimError> {
    if let Some(l) = x.labels.iter().find(|l| y.labels.contains(l)) {
        return Err(ColimError::OverlappingLabels(l.clone()));
    }
    let (dx, dy) = (x.dim(), y.dim());
    let split = |m: usize| (m & ((1 << dx) - 1), m >> dx);
    let layouts: Vec<TensorLayout> = (0..1usize << (dx + dy))
        .map(|m| {
            let (i, j) = split(m);
            TensorLayout::new(vec![x.object(i).clone(), y.object(j).clone()])
        })
        .collect();
    let mut labels = x.labels.clone();
    labels.extend(y.labels.iter().cloned());
    CubicalDiagram::new(labels, layouts.iter().map(|l| l.complex().clone()).collect(), |m, b| {
        let (i, j) = split(m);
        let t = m | 1 << b;
        let maps = if b < dx {
            [x.edge(i, b).clone(), ChainMap::identity(y.object(j).clone())]
        } else {
            [ChainMap::identity(x.object(i).clone()), y.edge(j, b - dx).clone()]
        };
        tensor_maps(&layouts[m], &layouts[t], &[&maps[0], &maps[1]])
    })
}

/// Outcome of comparing `pcm(X ⊗ Y)` with `pcm(pcm X ⊗ pcm Y)`.
#[derive(Clone, Debug)]
pub struct PcmLawReport {
    /// The canonical map between the two colimits.
    pub comparison: ChainMap,
    pub is_isomorphism: bool,
    pub commutes: bool,
}

impl PcmLawReport {
    pub fn holds(&self) -> bool {
        self.is_isomorphism && self.commutes
    }
}

/// Builds the canonical map `colim_{proper}(X ⊗ Y) → colim_{proper}(pcm X ⊗ pcm Y)`
/// and checks it is an isomorphism compatible with both pushout-corner maps.
pub fn pcm_law(x: &CubicalDiagram, y: &CubicalDiagram) -> Result<PcmLawReport, ColimError> {
    let xy = cube_tensor(x, y)?;
    let pxy = pushout_corner_map(&xy)?;
    let px = pushout_corner_map(x)?;
    let py = pushout_corner_map(y)?;
    let z = cube_tensor(&px.as_cube("x"), &py.as_cube("y"))?;
    let pz = pushout_corner_map(&z)?;
    let (dx, sx, sy) = (x.dim(), x.top(), y.top());
    let mut total = ChainMap::zero(pxy.sum.complex().clone(), pz.sum.complex().clone());
    for (k, &m) in pxy.proper.iter().enumerate() {
        let (i, j) = (m & sx, m >> dx);
        let a = if i == sx { ChainMap::identity(x.object(sx).clone()) } else { px.leg(i) };
        let b = if j == sy { ChainMap::identity(y.object(sy).clone()) } else { py.leg(j) };
        let zm = usize::from(i == sx) | usize::from(j == sy) << 1;
        let src = TensorLayout::new(vec![x.object(i).clone(), y.object(j).clone()]);
        let dst = TensorLayout::new(vec![a.target().clone(), b.target().clone()]);
        let zk = pz.proper.iter().position(|&p| p == zm).expect("proper vertex");
        let f = tensor_maps(&src, &dst, &[&a, &b]).retarget(pxy.sum.parts()[k].clone(), pz.sum.parts()[zk].clone());
        total = total.add(&pz.sum.inclusion(zk).compose(&f).compose(&pxy.sum.projection(k)));
    }
    let comparison = pxy.quotient.induced(&total, &pz.quotient);
    let is_isomorphism = comparison.check().is_ok() && comparison.is_isomorphism();
    let commutes = pz.map.compose(&comparison) == pxy.map;
    Ok(PcmLawReport { comparison, is_isomorphism, commutes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::Matrix;

    fn z() -> Arc<ChainComplex> {
        Arc::new(ChainComplex::z(0))
    }

    #[test]
    fn one_cube_corner_is_its_map() {
        let f = ChainMap::new(z(), z(), vec![(0, Matrix::from_i64(1, 1, &[3]))]).unwrap();
        let p = pushout_corner_map(&CubicalDiagram::arrow("a", &f)).unwrap();
        assert_eq!(p.map.component(0).into_owned(), Matrix::from_i64(1, 1, &[3]));
    }

    #[test]
    fn square_with_an_identity_edge() {
        let f = ChainMap::new(z(), z(), vec![(0, Matrix::from_i64(1, 1, &[2]))]).unwrap();
        let id = ChainMap::identity(z());
        let sq = cube_tensor(&CubicalDiagram::arrow("a", &f), &CubicalDiagram::arrow("b", &id)).unwrap();
        assert_eq!(sq.validate(), Ok(()));
        let p = pushout_corner_map(&sq).unwrap();
        assert!(p.map.is_isomorphism());
    }

    #[test]
    fn pushout_product_of_zero_inclusion_and_doubling() {
        let zero = Arc::new(ChainComplex::zero());
        let i = ChainMap::zero(zero, z());
        let two = ChainMap::new(z(), z(), vec![(0, Matrix::from_i64(1, 1, &[2]))]).unwrap();
        let x = CubicalDiagram::arrow("a", &i);
        let y = CubicalDiagram::arrow("b", &two);
        let p = pushout_corner_map(&cube_tensor(&x, &y).unwrap()).unwrap();
        // Pushout of 0 ← 0 → ℤ is ℤ, mapping by 2 into ℤ ⊗ ℤ.
        assert_eq!(p.colimit().total_rank(), 1);
        assert_eq!(p.map.component(0).into_owned(), Matrix::from_i64(1, 1, &[2]));
        let law = pcm_law(&x, &y).unwrap();
        assert!(law.holds());
    }

    #[test]
    fn overlapping_labels_rejected() {
        let x = CubicalDiagram::arrow("a", &ChainMap::identity(z()));
        assert!(matches!(cube_tensor(&x, &x), Err(ColimError::OverlappingLabels(_))));
    }
}
