//! Seeded generators for small random instances: complexes, loop-free index
//! categories, dg-hosts, cell weights, diagrams and 1-cubes.

use std::sync::Arc;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chain::smith::kernel;
use crate::chain::{ChainComplex, ChainMap, Degree, Matrix};
use crate::colim::{CubicalDiagram, WeightCell};
use crate::enriched::{ch_full_subcategory, free_dg_category, DgCategory, Diagram, FiniteCategory};

pub type CorpusRng = ChaCha8Rng;

pub fn rng(seed: u64) -> CorpusRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small(rng: &mut CorpusRng, bound: i64) -> BigInt {
    BigInt::from(rng.random_range(-bound..=bound))
}

/// A complex supported in `support` with ranks `≤ max_rank`. Each
/// differential is a random integer combination of a kernel basis of the
/// next one down, so torsion appears naturally.
pub fn random_complex(rng: &mut CorpusRng, support: (Degree, Degree), max_rank: usize) -> ChainComplex {
    let (lo, hi) = support;
    let ranks: Vec<usize> = (lo..=hi).map(|_| rng.random_range(0..=max_rank)).collect();
    let mut diffs = vec![Matrix::zeros(0, ranks[0])];
    for i in 1..ranks.len() {
        let (below, here) = (ranks[i - 1], ranks[i]);
        let k = kernel(&diffs[i - 1]).basis;
        let mix = Matrix::from_fn(k.cols(), here, |_, _| if rng.random_bool(0.6) { small(rng, 2) } else { BigInt::from(0) });
        let d = &k * &mix;
        debug_assert_eq!(d.shape(), (below, here));
        diffs.push(d);
    }
    ChainComplex::new(lo, ranks, diffs).expect("consistent shapes")
}

/// A product of elementary row operations, `n × n` and invertible over ℤ.
pub fn random_unimodular(rng: &mut CorpusRng, n: usize) -> Matrix {
    let mut m = Matrix::identity(n);
    if n < 2 {
        return m;
    }
    for _ in 0..3 * n {
        let i = rng.random_range(0..n);
        let j = (i + rng.random_range(1..n)) % n;
        let k = small(rng, 2);
        for c in 0..n {
            let v = m.get(j, c) * &k;
            *m.entry_mut(i, c) += v;
        }
    }
    m
}

/// A loop-free category on `1..=max_objects` objects: a random poset or a
/// free category on a DAG with at most two parallel paths.
pub fn random_loop_free_category(rng: &mut CorpusRng, max_objects: usize) -> FiniteCategory {
    let n = rng.random_range(1..=max_objects);
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let edges: Vec<(usize, usize)> = pairs.into_iter().filter(|_| rng.random_bool(0.5)).collect();
    if rng.random_bool(0.5) {
        FiniteCategory::poset(n, &edges).expect("edges in range")
    } else {
        FiniteCategory::free_on_dag(n, &edges).expect("forward edges are acyclic")
    }
}

/// Objects of `Ch` with ranks `≤ 1` in degrees 0 and 1.
fn small_object(rng: &mut CorpusRng) -> (String, ChainComplex) {
    match rng.random_range(0..5) {
        0 => ("Z".into(), ChainComplex::z(0)),
        1 => ("Z[1]".into(), ChainComplex::z(1)),
        2 => ("Z+Z[1]".into(), ChainComplex::from_parts(&[(0, 1), (1, 1)], vec![]).expect("zero differential")),
        _ => {
            let k = rng.random_range(1..=3);
            (format!("cone({k})"), ChainComplex::two_term(1, Matrix::from_i64(1, 1, &[k])))
        }
    }
}

/// How a corpus host was built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HostKind {
    /// `free_dg_category` of a loop-free category.
    Free(FiniteCategory),
    /// A full subcategory of `Ch` on the named objects.
    Complexes(Vec<String>),
    /// The connective cover of such a subcategory.
    Connective(Vec<String>),
}

#[derive(Clone, Debug)]
pub struct CorpusHost {
    pub kind: HostKind,
    pub host: Arc<DgCategory>,
}

impl CorpusHost {
    pub fn category(&self) -> Option<&FiniteCategory> {
        match &self.kind {
            HostKind::Free(c) => Some(c),
            _ => None,
        }
    }
}

fn ch_host(rng: &mut CorpusRng, max_objects: usize) -> (Vec<String>, DgCategory) {
    let n = rng.random_range(1..=max_objects);
    let objects: Vec<(String, Arc<ChainComplex>)> = (0..n)
        .map(|i| {
            let (name, c) = small_object(rng);
            (format!("{name}#{i}"), Arc::new(c))
        })
        .collect();
    let names = objects.iter().map(|o| o.0.clone()).collect();
    (names, ch_full_subcategory(objects))
}

/// A host with at most `max_objects` objects, hom supports in `[−1, 1]` and
/// hom ranks `≤ 2`.
pub fn random_host(rng: &mut CorpusRng, max_objects: usize) -> CorpusHost {
    match rng.random_range(0..3) {
        0 => {
            let cat = random_loop_free_category(rng, max_objects.min(3));
            let host = Arc::new(free_dg_category(&cat));
            CorpusHost { kind: HostKind::Free(cat), host }
        }
        1 => {
            let (names, h) = ch_host(rng, max_objects);
            CorpusHost { kind: HostKind::Complexes(names), host: Arc::new(h) }
        }
        _ => {
            let (names, h) = ch_host(rng, max_objects);
            CorpusHost { kind: HostKind::Connective(names), host: Arc::new(h.connective_cover()) }
        }
    }
}

/// Hosts whose homs are concentrated in degrees `≥ 0`: free categories and
/// connective covers. Bar tails over these have a degree bound.
pub fn random_connective_host(rng: &mut CorpusRng, max_objects: usize) -> CorpusHost {
    loop {
        let h = random_host(rng, max_objects);
        if !matches!(h.kind, HostKind::Complexes(_)) {
            return h;
        }
    }
}

/// A weight built from `1..=max_cells` cells of dimension `≤ 1`, attached
/// along random cycles or freely.
pub fn random_weight_cell(rng: &mut CorpusRng, host: &Arc<DgCategory>, max_cells: usize) -> WeightCell {
    let k = host.object_count();
    let cells = rng.random_range(1..=max_cells);
    let mut w = WeightCell::empty(host.clone());
    for _ in 0..cells {
        let c = rng.random_range(0..k);
        let dim = rng.random_range(0..=1);
        let value = w.presheaf().value(c).clone();
        let cycles = kernel(&value.diff(dim - 1)).basis;
        let next = if cycles.cols() > 0 && rng.random_bool(0.6) {
            let coeffs: Vec<BigInt> = (0..cycles.cols()).map(|_| small(rng, 2)).collect();
            w.attach(c, dim, cycles.mul_vec(&coeffs))
        } else {
            w.attach_free(c, dim)
        };
        w = next.expect("cycles are valid attaching data");
    }
    w
}

/// A sum of one or two corepresentables, each shifted by 0 or 1, or over a
/// free host a constant diagram at a small random complex.
pub fn random_diagram(rng: &mut CorpusRng, host: &CorpusHost) -> Diagram {
    let h = host.host.clone();
    if let (Some(cat), true) = (host.category(), rng.random_bool(0.3)) {
        let value = Arc::new(random_complex(rng, (0, 1), 2));
        let id = ChainMap::identity(value.clone());
        return Diagram::from_functor(h, cat, vec![value; cat.object_count()], |_| id.clone()).expect("constant functor");
    }
    let parts: Vec<Diagram> = (0..rng.random_range(1..=2))
        .map(|_| {
            let c = rng.random_range(0..h.object_count());
            Diagram::representable(h.clone(), c).shift(rng.random_range(0..=1))
        })
        .collect();
    let refs: Vec<&Diagram> = parts.iter().collect();
    Diagram::direct_sum(&refs).expect("common host")
}

/// A diagram over `free_dg_category(cat)` with values in degrees `≥ 0`:
/// constant at a random complex, a corepresentable, or a sum of both.
pub fn random_connective_diagram(rng: &mut CorpusRng, cat: &FiniteCategory, host: &Arc<DgCategory>) -> Diagram {
    let value = Arc::new(random_complex(rng, (0, 2), 2));
    let id = ChainMap::identity(value.clone());
    let constant = Diagram::from_functor(host.clone(), cat, vec![value; cat.object_count()], |_| id.clone())
        .expect("constant functor");
    let c = rng.random_range(0..cat.object_count());
    let rep = Diagram::representable(host.clone(), c).shift(rng.random_range(0..=2));
    match rng.random_range(0..3) {
        0 => constant,
        1 => rep,
        _ => Diagram::direct_sum(&[&constant, &rep]).expect("common host"),
    }
}

/// `A → A ⊕ B`, the inclusion of the first summand: split injective.
pub fn random_cofibration(rng: &mut CorpusRng) -> ChainMap {
    let a = Arc::new(random_complex(rng, (0, 1), 2));
    let b = Arc::new(random_complex(rng, (0, 1), 1));
    let sum = crate::chain::SumLayout::new(vec![a, b]);
    sum.inclusion(0)
}

/// `k·id`, a summand projection or a summand inclusion.
pub fn random_chain_map(rng: &mut CorpusRng) -> ChainMap {
    let a = Arc::new(random_complex(rng, (0, 1), 2));
    match rng.random_range(0..3) {
        0 => {
            let k = small(rng, 3);
            ChainMap::identity(a).scale(&k)
        }
        1 => {
            let b = Arc::new(random_complex(rng, (0, 1), 1));
            crate::chain::SumLayout::new(vec![a, b]).projection(0)
        }
        _ => random_cofibration(rng),
    }
}

/// Two 1-cubes labelled `x` and `y`, one of them a cofibration.
pub fn random_cube_pair(rng: &mut CorpusRng) -> (CubicalDiagram, CubicalDiagram) {
    let cof = random_cofibration(rng);
    let other = random_chain_map(rng);
    let (f, g) = if rng.random_bool(0.5) { (cof, other) } else { (other, cof) };
    (CubicalDiagram::arrow("x", &f), CubicalDiagram::arrow("y", &g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::validate_complex;

    #[test]
    fn complexes_square_to_zero() {
        let mut r = rng(7);
        for _ in 0..50 {
            let c = random_complex(&mut r, (-1, 2), 3);
            assert_eq!(validate_complex(&c), Ok(()));
        }
    }

    #[test]
    fn unimodular_matrices_invert() {
        let mut r = rng(3);
        for n in 0..5 {
            let m = random_unimodular(&mut r, n);
            assert!(crate::chain::smith::inverse(&m).is_some());
        }
    }

    #[test]
    fn hosts_and_modules_validate() {
        let mut r = rng(11);
        for _ in 0..20 {
            let h = random_host(&mut r, 3);
            assert_eq!(h.host.validate(), Ok(()));
            let w = random_weight_cell(&mut r, &h.host, 3);
            assert_eq!(w.presheaf().validate(), Ok(()));
            assert!(w.verify_trace());
            let d = random_diagram(&mut r, &h);
            assert_eq!(d.validate(), Ok(()));
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let a = random_complex(&mut rng(5), (0, 3), 3);
        let b = random_complex(&mut rng(5), (0, 3), 3);
        assert_eq!(a, b);
    }

    #[test]
    fn cube_pairs_validate() {
        let mut r = rng(13);
        for _ in 0..20 {
            let (x, y) = random_cube_pair(&mut r);
            assert!(x.validate().is_ok() && y.validate().is_ok());
        }
    }
}
