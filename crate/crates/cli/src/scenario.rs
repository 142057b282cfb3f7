//! The scenario file format: named definitions plus an ordered task list.
//!
//! Names are the only cross-references. Matrices are row-major integer
//! arrays and degrees are explicit object keys.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub type Name = String;
pub type Window = [i32; 2];

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub complexes: BTreeMap<Name, ComplexDef>,
    #[serde(default)]
    pub maps: BTreeMap<Name, MapDef>,
    #[serde(default)]
    pub categories: BTreeMap<Name, CategoryDef>,
    #[serde(default)]
    pub dg_categories: BTreeMap<Name, DgCategoryDef>,
    #[serde(default)]
    pub weights: BTreeMap<Name, WeightDef>,
    #[serde(default)]
    pub diagrams: BTreeMap<Name, DiagramDef>,
    #[serde(default)]
    pub functors: BTreeMap<Name, FunctorDef>,
    #[serde(default)]
    pub cubes: BTreeMap<Name, CubeDef>,
    /// Definitions exempt from law checks, reported as caveats.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub unchecked: Vec<Name>,
    #[serde(default)]
    pub tasks: Vec<Task>,
}

/// Ranks by degree and `d_n : C_n → C_{n−1}` keyed by `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDef {
    pub ranks: BTreeMap<i32, usize>,
    #[serde(default)]
    pub differentials: BTreeMap<i32, Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDef {
    pub source: Name,
    pub target: Name,
    #[serde(default)]
    pub components: BTreeMap<i32, Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CategoryDef {
    Discrete { objects: usize },
    Arrow,
    Span,
    /// The preorder generated by `i ≤ j`.
    Poset { objects: usize, relations: Vec<[usize; 2]> },
    /// Paths in a directed acyclic graph.
    Free { objects: usize, edges: Vec<[usize; 2]> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DgCategoryDef {
    /// The free ℤ-linear dg-category on a finite category.
    Linearize { category: Name },
    /// Full subcategory of chain complexes on named complexes.
    Complexes { objects: Vec<[Name; 2]> },
    ConnectiveCover { of: Name },
    FullSubcategory { of: Name, objects: Vec<Name> },
    /// One object `x` with `hom(x,x) = ℤ`, multiplication as composition and
    /// unit `scale`. Fails the unit law unless `scale = 1`.
    ScaledUnit { scale: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellDef {
    pub object: Name,
    pub dim: i32,
    #[serde(default)]
    pub cycle: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightDef {
    Representable { host: Name, object: Name },
    /// Constant weight over a linearized category.
    Constant { host: Name, value: Name },
    Zero { host: Name },
    Cells { host: Name, cells: Vec<CellDef> },
    Shift { of: Name, by: i32 },
    Sum { parts: Vec<Name> },
    /// `F*V` for a functor into the host of `of`.
    Restrict { functor: Name, of: Name },
    /// `F_!W` for a functor out of the host of `of`.
    LeftKan { functor: Name, of: Name },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DiagramDef {
    Representable { host: Name, object: Name },
    /// Constant diagram over a linearized category.
    Constant { host: Name, value: Name },
    /// A functor out of a linearized category: a complex per object and a
    /// map per generating arrow (edge names `e<k>` for free categories,
    /// `i<j` for posets).
    Functor { host: Name, values: BTreeMap<Name, Name>, maps: BTreeMap<Name, Name> },
    Shift { of: Name, by: i32 },
    Sum { parts: Vec<Name> },
}

/// A hom component given by a map or as `scale · id` on equal complexes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentDef {
    pub from: Name,
    pub to: Name,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<Name>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctorDef {
    Identity { of: Name },
    /// Inclusion of the full subcategory on `objects`.
    Inclusion { target: Name, objects: Vec<Name> },
    /// Object map plus components; omitted components are the identity
    /// where source and target homs coincide and zero otherwise.
    Explicit {
        source: Name,
        target: Name,
        objects: BTreeMap<Name, Name>,
        #[serde(default)]
        components: Vec<ComponentDef>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CubeDef {
    Arrow { map: Name },
    Tensor { left: Name, right: Name },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Task {
    #[serde(flatten)]
    pub spec: TaskSpec,
    /// The task passes iff its check fails; for exhibiting counterexamples.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub expect_failure: bool,
    /// Accept heuristic truncations for this task.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub allow_heuristic: bool,
}

/// Expected groups keyed by degree, written as in reports (`0`, `Z`,
/// `Z^2 + Z/3`). Keys are strings because tasks are flattened.
pub type Expectation = BTreeMap<String, String>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum TaskSpec {
    Validate {},
    Homology {
        complex: Name,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        window: Option<Window>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect: Option<Expectation>,
    },
    Wcolim {
        weight: Name,
        diagram: Name,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        window: Option<Window>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect: Option<Expectation>,
    },
    /// Without `truncation` the least sound one for the window is used.
    BarCompare {
        weight: Name,
        diagram: Name,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        truncation: Option<usize>,
        window: Window,
    },
    Hocolim {
        category: Name,
        diagram: Name,
        truncation: usize,
        window: Window,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect: Option<Expectation>,
    },
    Cofrep {
        weight: Name,
        truncation: usize,
        window: Window,
    },
    Reedy {
        weight: Name,
        diagram: Name,
        truncation: usize,
    },
    Cube {
        left: Name,
        right: Name,
    },
    DoldKan {
        complex: Name,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        top: Option<usize>,
    },
    DwyerKan {
        functor: Name,
        truncation: usize,
        window: Window,
    },
    Collapse {
        weight: Name,
        object: Name,
        truncation: usize,
        window: Window,
    },
}

impl TaskSpec {
    pub fn command(&self) -> &'static str {
        match self {
            TaskSpec::Validate {} => "validate",
            TaskSpec::Homology { .. } => "homology",
            TaskSpec::Wcolim { .. } => "wcolim",
            TaskSpec::BarCompare { .. } => "bar-compare",
            TaskSpec::Hocolim { .. } => "hocolim",
            TaskSpec::Cofrep { .. } => "cofrep",
            TaskSpec::Reedy { .. } => "reedy",
            TaskSpec::Cube { .. } => "cube",
            TaskSpec::DoldKan { .. } => "dold-kan",
            TaskSpec::DwyerKan { .. } => "dwyer-kan",
            TaskSpec::Collapse { .. } => "collapse",
        }
    }
}

pub const COMMANDS: [&str; 11] = [
    "validate",
    "homology",
    "wcolim",
    "bar-compare",
    "hocolim",
    "cofrep",
    "reedy",
    "cube",
    "dold-kan",
    "dwyer-kan",
    "collapse",
];
