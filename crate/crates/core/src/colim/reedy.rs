//! Latching maps of bar constructions.
//!
//! The summand of a tuple at level `n` is a tensor product in which each
//! repeated neighbour `c_j = c_{j+1}` contributes `hom(c_j, c_j)`. Its
//! degenerate part is the pushout corner of the cube that replaces any subset
//! of these factors by `ℤ` via the unit, so the latching object is the sum of
//! these corners over tuples.

use std::sync::Arc;

use super::bar::BarConstruction;
use super::cube::{pushout_corner_map, CubicalDiagram};
use super::ColimError;
use crate::chain::tensor::{apply_on_factors, assemble, SumLayout, TensorLayout};
use crate::chain::{cofibration_check, ChainComplex, ChainError, ChainMap};

/// `L_n → X_n` together with the per-tuple outcome.
#[derive(Clone, Debug)]
pub struct LatchingMap {
    pub level: usize,
    /// `None` when some corner colimit has torsion.
    pub map: Option<ChainMap>,
    /// Tuples whose corner map is not a cofibration, with the reason.
    pub failures: Vec<(Vec<usize>, String)>,
}

impl LatchingMap {
    pub fn is_cofibration(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Latching map of level `n`.
pub fn latching_map(bar: &BarConstruction, n: usize) -> Result<LatchingMap, ColimError> {
    let level = bar.level(n);
    let host = bar.weight().host().clone();
    let unit_src = Arc::new(ChainComplex::z(0));
    let mut corners = Vec::new();
    let mut failures = Vec::new();
    let mut torsion = false;
    for (k, t) in level.tuples.iter().enumerate() {
        let repeated: Vec<usize> = (0..n).filter(|&j| t[j] == t[j + 1]).collect();
        if repeated.is_empty() {
            continue;
        }
        let full = level.layouts[k].factors().to_vec();
        // Vertex A: factor at position n−j is hom(c_j,c_j) if j ∈ A, else ℤ.
        let layouts: Vec<TensorLayout> = (0..1usize << repeated.len())
            .map(|a| {
                let mut f = full.clone();
                for (b, &j) in repeated.iter().enumerate() {
                    if a & (1 << b) == 0 {
                        f[n - j] = unit_src.clone();
                    }
                }
                TensorLayout::new(f)
            })
            .collect();
        let labels = repeated.iter().map(|j| format!("s{j}")).collect();
        let cube = CubicalDiagram::new(labels, layouts.iter().map(|l| l.complex().clone()).collect(), |a, b| {
            let p = n - repeated[b];
            apply_on_factors(&layouts[a], p..p + 1, host.unit_map(t[repeated[b]]), &layouts[a | 1 << b])
        })?;
        match pushout_corner_map(&cube) {
            Ok(pcm) => {
                if let Err(e) = cofibration_check(&pcm.map) {
                    failures.push((t.clone(), e.to_string()));
                }
                corners.push((k, pcm.map));
            }
            Err(ColimError::Chain(ChainError::TorsionCokernel { degree, .. })) => {
                torsion = true;
                failures.push((t.clone(), format!("corner colimit has torsion in degree {degree}")));
            }
            Err(e) => return Err(e),
        }
    }
    let map = (!torsion).then(|| {
        let sum = SumLayout::new(corners.iter().map(|(_, f)| f.source().clone()).collect());
        let blocks: Vec<(usize, usize, ChainMap)> = corners.iter().enumerate().map(|(i, (k, f))| (*k, i, f.clone())).collect();
        assemble(&sum, &level.sum, blocks.iter().map(|(a, b, f)| (*a, *b, f)))
    });
    Ok(LatchingMap { level: n, map, failures })
}

/// Per-level cofibrancy of the latching maps.
#[derive(Clone, Debug)]
pub struct ReedyReport {
    pub levels: Vec<LatchingMap>,
}

impl ReedyReport {
    pub fn all_cofibrations(&self) -> bool {
        self.levels.iter().all(LatchingMap::is_cofibration)
    }

    pub fn verdicts(&self) -> Vec<bool> {
        self.levels.iter().map(LatchingMap::is_cofibration).collect()
    }
}

pub fn reedy_report(bar: &BarConstruction) -> Result<ReedyReport, ColimError> {
    let levels = (0..=bar.truncation()).map(|n| latching_map(bar, n)).collect::<Result<_, _>>()?;
    Ok(ReedyReport { levels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::Matrix;
    use crate::enriched::{ch_full_subcategory, DgCategory, Diagram, Presheaf};

    #[test]
    fn flat_host_is_reedy_cofibrant() {
        let host = Arc::new(ch_full_subcategory(vec![
            ("Z".into(), Arc::new(ChainComplex::z(0))),
            ("Z[1]".into(), Arc::new(ChainComplex::z(1))),
        ]));
        let w = Arc::new(Presheaf::representable(host.clone(), 1));
        let d = Arc::new(Diagram::representable(host, 0));
        let bar = BarConstruction::new(w, d, 3).unwrap();
        let r = reedy_report(&bar).unwrap();
        assert!(r.all_cofibrations());
        assert!(r.levels[0].map.as_ref().unwrap().source().is_zero());
    }

    #[test]
    fn doubling_unit_fails() {
        let z = Arc::new(ChainComplex::z(0));
        let two = ChainMap::new(z.clone(), z.clone(), vec![(0, Matrix::from_i64(1, 1, &[2]))]).unwrap();
        let host = Arc::new(
            DgCategory::new(
                vec!["x".into()],
                vec![vec![z.clone()]],
                |_, _, _, l| Ok(ChainMap::identity(l.complex().clone()).retarget(l.complex().clone(), z.clone())),
                vec![two],
            )
            .unwrap(),
        );
        let w = Arc::new(Presheaf::representable(host.clone(), 0));
        let d = Arc::new(Diagram::representable(host, 0));
        let bar = BarConstruction::new(w, d, 2).unwrap();
        let r = reedy_report(&bar).unwrap();
        assert_eq!(r.verdicts(), vec![true, false, false]);
    }
}
