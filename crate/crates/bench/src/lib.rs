//! Seeded fixtures shared by the benchmarks.

use std::sync::Arc;

use wcolim_core::chain::{ChainComplex, Degree};
use wcolim_core::colim::BarConstruction;
use wcolim_core::corpus::{self, CorpusRng};
use wcolim_core::enriched::{free_dg_category, Diagram, FiniteCategory, Presheaf};

/// A bar comparison with a sound truncation for its window.
pub struct BarInstance {
    pub weight: Arc<Presheaf>,
    pub diagram: Arc<Diagram>,
    pub truncation: usize,
    pub window: (Degree, Degree),
}

/// A loop-free category with a connective diagram on it.
pub struct BkInstance {
    pub category: FiniteCategory,
    pub diagram: Diagram,
}

pub fn complex(seed: u64, width: Degree, max_rank: usize) -> ChainComplex {
    corpus::random_complex(&mut corpus::rng(seed), (0, width), max_rank)
}

/// The first instance from `seed` whose sound truncation is at most `max_truncation`.
pub fn bar_instance(seed: u64, objects: usize, max_truncation: usize) -> BarInstance {
    let mut rng: CorpusRng = corpus::rng(seed);
    let window = (-1, 3);
    loop {
        let host = corpus::random_connective_host(&mut rng, objects);
        let weight = corpus::random_weight_cell(&mut rng, &host.host, 2).presheaf().clone();
        let diagram = Arc::new(corpus::random_diagram(&mut rng, &host));
        let bar = BarConstruction::new(weight.clone(), diagram.clone(), 0).expect("corpus instances are well formed");
        if let Some(truncation) = bar.sound_truncation(window).filter(|&n| n <= max_truncation) {
            return BarInstance { weight, diagram, truncation, window };
        }
    }
}

pub fn bk_instance(seed: u64, objects: usize) -> BkInstance {
    let mut rng = corpus::rng(seed);
    let category = corpus::random_loop_free_category(&mut rng, objects);
    let host = Arc::new(free_dg_category(&category));
    let diagram = corpus::random_connective_diagram(&mut rng, &category, &host);
    BkInstance { category, diagram }
}
