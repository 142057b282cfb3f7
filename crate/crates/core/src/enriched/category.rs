//! Finite ordinary categories given by composition tables.

use std::collections::{BTreeMap, BTreeSet};

use super::EnrichedError;

/// A morphism of a [`FiniteCategory`], by position in its arrow list.
pub type Arrow = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowData {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// Objects, arrows, identities and a composition table `(g, f) ↦ g∘f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCategory {
    objects: Vec<String>,
    arrows: Vec<ArrowData>,
    identities: Vec<Arrow>,
    compose: BTreeMap<(Arrow, Arrow), Arrow>,
    hom: Vec<Vec<Vec<Arrow>>>,
}

/// First law of a category that fails.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CategoryViolation {
    #[error("identity of {object} has wrong endpoints")]
    Identity { object: String },
    #[error("composite {g}∘{f} is missing")]
    MissingComposite { g: String, f: String },
    #[error("composite {g}∘{f} has wrong endpoints")]
    CompositeEndpoints { g: String, f: String },
    #[error("composite entry {g}∘{f} is not composable")]
    NotComposable { g: String, f: String },
    #[error("unit law fails at {arrow}")]
    Unit { arrow: String },
    #[error("associativity fails at ({h}, {g}, {f})")]
    Associativity { h: String, g: String, f: String },
}

impl FiniteCategory {
    /// Builds a category from raw tables. Only index ranges are checked here;
    /// use [`FiniteCategory::validate`] for the laws.
    pub fn new(
        objects: Vec<String>,
        arrows: Vec<ArrowData>,
        identities: Vec<Arrow>,
        compose: BTreeMap<(Arrow, Arrow), Arrow>,
    ) -> Result<Self, EnrichedError> {
        let n = objects.len();
        if identities.len() != n {
            return Err(EnrichedError::Malformed(format!("{} identities for {} objects", identities.len(), n)));
        }
        if let Some(a) = arrows.iter().find(|a| a.source >= n || a.target >= n) {
            return Err(EnrichedError::Malformed(format!("arrow {} has an unknown endpoint", a.name)));
        }
        let m = arrows.len();
        if identities.iter().any(|&i| i >= m) || compose.iter().any(|(&(g, f), &h)| g >= m || f >= m || h >= m) {
            return Err(EnrichedError::Malformed("arrow index out of range".into()));
        }
        let mut hom = vec![vec![Vec::new(); n]; n];
        for (k, a) in arrows.iter().enumerate() {
            hom[a.source][a.target].push(k);
        }
        Ok(FiniteCategory { objects, arrows, identities, compose, hom })
    }

    /// The discrete category on `n` objects.
    pub fn discrete(n: usize) -> Self {
        Self::poset(n, &[]).expect("no relations")
    }

    /// The poset generated by the relations `i ≤ j`; cycles make the
    /// objects on them isomorphic (a preorder).
    pub fn poset(n: usize, relations: &[(usize, usize)]) -> Result<Self, EnrichedError> {
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(i, j) in relations {
            if i >= n || j >= n {
                return Err(EnrichedError::Malformed(format!("relation {i} ≤ {j} out of range")));
            }
            le[i][j] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if le[i][k] && le[k][j] {
                        le[i][j] = true;
                    }
                }
            }
        }
        let objects: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let mut arrows = Vec::new();
        let mut index = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                if le[i][j] {
                    index.insert((i, j), arrows.len());
                    let name = if i == j { format!("id{i}") } else { format!("{i}<{j}") };
                    arrows.push(ArrowData { name, source: i, target: j });
                }
            }
        }
        let identities = (0..n).map(|i| index[&(i, i)]).collect();
        let mut compose = BTreeMap::new();
        for (&(i, j), &f) in &index {
            for k in 0..n {
                if let Some(&g) = index.get(&(j, k)) {
                    compose.insert((g, f), index[&(i, k)]);
                }
            }
        }
        Self::new(objects, arrows, identities, compose)
    }

    /// `0 → 1`.
    pub fn arrow() -> Self {
        Self::poset(2, &[(0, 1)]).expect("valid relation")
    }

    /// The span `b ← a → c` with objects in the order `a, b, c`.
    pub fn span() -> Self {
        let mut c = Self::poset(3, &[(0, 1), (0, 2)]).expect("valid relations");
        c.objects = vec!["a".into(), "b".into(), "c".into()];
        c
    }

    /// The free category on a directed acyclic graph: arrows are paths.
    pub fn free_on_dag(n: usize, edges: &[(usize, usize)]) -> Result<Self, EnrichedError> {
        if let Some(&(i, j)) = edges.iter().find(|&&(i, j)| i >= n || j >= n) {
            return Err(EnrichedError::Malformed(format!("edge {i} → {j} out of range")));
        }
        // paths as edge sequences, grown breadth-first; a cycle shows up as a
        // path longer than the number of objects
        let mut paths: Vec<(usize, usize, Vec<usize>)> = (0..n).map(|i| (i, i, Vec::new())).collect();
        let mut frontier: Vec<usize> = (0..n).collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for p in frontier {
                let (s, t, ref es) = paths[p];
                if es.len() > n {
                    return Err(EnrichedError::Cyclic);
                }
                let es = es.clone();
                for (e, &(a, b)) in edges.iter().enumerate() {
                    if a == t {
                        let mut longer = es.clone();
                        longer.push(e);
                        paths.push((s, b, longer));
                        next.push(paths.len() - 1);
                    }
                }
            }
            frontier = next;
        }
        let index: BTreeMap<Vec<usize>, usize> =
            paths.iter().enumerate().filter(|(_, p)| !p.2.is_empty()).map(|(k, p)| (p.2.clone(), k)).collect();
        let arrows = paths
            .iter()
            .map(|(s, t, es)| {
                let name = if es.is_empty() {
                    format!("id{s}")
                } else {
                    es.iter().map(|e| format!("e{e}")).collect::<Vec<_>>().join(".")
                };
                ArrowData { name, source: *s, target: *t }
            })
            .collect();
        let mut compose = BTreeMap::new();
        for (f, (_, ft, fe)) in paths.iter().enumerate() {
            for (g, (gs, _, ge)) in paths.iter().enumerate() {
                if *gs != *ft {
                    continue;
                }
                let h = if fe.is_empty() {
                    g
                } else if ge.is_empty() {
                    f
                } else {
                    let mut joined = fe.clone();
                    joined.extend_from_slice(ge);
                    index[&joined]
                };
                compose.insert((g, f), h);
            }
        }
        Self::new((0..n).map(|i| i.to_string()).collect(), arrows, (0..n).collect(), compose)
    }

    pub fn rename_objects(mut self, names: Vec<String>) -> Result<Self, EnrichedError> {
        if names.len() != self.objects.len() {
            return Err(EnrichedError::Malformed("wrong number of object names".into()));
        }
        self.objects = names;
        Ok(self)
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn arrows(&self) -> &[ArrowData] {
        &self.arrows
    }

    pub fn arrow_data(&self, f: Arrow) -> &ArrowData {
        &self.arrows[f]
    }

    pub fn identity(&self, i: usize) -> Arrow {
        self.identities[i]
    }

    pub fn is_identity(&self, f: Arrow) -> bool {
        self.identities[self.arrows[f].source] == f
    }

    /// Arrows `i → j` in arrow-index order.
    pub fn hom(&self, i: usize, j: usize) -> &[Arrow] {
        &self.hom[i][j]
    }

    /// `g ∘ f`, when composable and tabulated.
    pub fn compose(&self, g: Arrow, f: Arrow) -> Option<Arrow> {
        self.compose.get(&(g, f)).copied()
    }

    pub fn validate(&self) -> Result<(), CategoryViolation> {
        let name = |f: Arrow| self.arrows[f].name.clone();
        for (i, &id) in self.identities.iter().enumerate() {
            let a = &self.arrows[id];
            if a.source != i || a.target != i {
                return Err(CategoryViolation::Identity { object: self.objects[i].clone() });
            }
        }
        for (&(g, f), &h) in &self.compose {
            let (ag, af, ah) = (&self.arrows[g], &self.arrows[f], &self.arrows[h]);
            if af.target != ag.source {
                return Err(CategoryViolation::NotComposable { g: name(g), f: name(f) });
            }
            if ah.source != af.source || ah.target != ag.target {
                return Err(CategoryViolation::CompositeEndpoints { g: name(g), f: name(f) });
            }
        }
        for (f, af) in self.arrows.iter().enumerate() {
            for &g in self.hom[af.target].iter().flatten() {
                if self.compose(g, f).is_none() {
                    return Err(CategoryViolation::MissingComposite { g: name(g), f: name(f) });
                }
            }
        }
        for (f, af) in self.arrows.iter().enumerate() {
            let left = self.compose(self.identities[af.target], f);
            let right = self.compose(f, self.identities[af.source]);
            if left != Some(f) || right != Some(f) {
                return Err(CategoryViolation::Unit { arrow: name(f) });
            }
        }
        for (f, af) in self.arrows.iter().enumerate() {
            for &g in self.hom[af.target].iter().flatten() {
                let gf = self.compose(g, f).expect("checked");
                for &h in self.hom[self.arrows[g].target].iter().flatten() {
                    let hg = self.compose(h, g).expect("checked");
                    if self.compose(h, gf) != self.compose(hg, f) {
                        return Err(CategoryViolation::Associativity { h: name(h), g: name(g), f: name(f) });
                    }
                }
            }
        }
        Ok(())
    }

    /// No nonidentity endomorphisms and no cycles of nonidentity arrows.
    pub fn is_loop_free(&self) -> bool {
        let n = self.objects.len();
        if (0..n).any(|i| self.hom[i][i].len() != 1) {
            return false;
        }
        // Kahn's algorithm on the relation "there is an arrow i → j, i ≠ j"
        let mut indegree = vec![0usize; n];
        for i in 0..n {
            for j in 0..n {
                if i != j && !self.hom[i][j].is_empty() {
                    indegree[j] += 1;
                }
            }
        }
        let mut ready: Vec<usize> = (0..n).filter(|&j| indegree[j] == 0).collect();
        let mut seen = 0;
        while let Some(i) = ready.pop() {
            seen += 1;
            for j in 0..n {
                if i != j && !self.hom[i][j].is_empty() {
                    indegree[j] -= 1;
                    if indegree[j] == 0 {
                        ready.push(j);
                    }
                }
            }
        }
        seen == n
    }

    /// Objects `x` such that every object has exactly one arrow to `x`.
    pub fn terminal_objects(&self) -> Vec<usize> {
        let n = self.objects.len();
        (0..n).filter(|&x| (0..n).all(|i| self.hom[i][x].len() == 1)).collect()
    }

    pub fn initial_objects(&self) -> Vec<usize> {
        let n = self.objects.len();
        (0..n).filter(|&x| (0..n).all(|j| self.hom[x][j].len() == 1)).collect()
    }
}

/// The category `i ↓ I`: objects are arrows `i → j`, morphisms `f → g` are
/// arrows `h` with `h∘f = g`. Object `0` is `id_i`.
pub fn under_category(i: usize, cat: &FiniteCategory) -> Result<FiniteCategory, EnrichedError> {
    if i >= cat.object_count() {
        return Err(EnrichedError::UnknownObject(i.to_string()));
    }
    let mut objs: Vec<Arrow> = vec![cat.identity(i)];
    objs.extend((0..cat.object_count()).flat_map(|j| cat.hom(i, j).iter().copied()).filter(|&f| f != cat.identity(i)));
    let mut arrows = Vec::new();
    let mut index = BTreeMap::new();
    for (a, &f) in objs.iter().enumerate() {
        for (b, &g) in objs.iter().enumerate() {
            let (jf, jg) = (cat.arrow_data(f).target, cat.arrow_data(g).target);
            for &h in cat.hom(jf, jg) {
                if cat.compose(h, f) == Some(g) {
                    index.insert((a, b, h), arrows.len());
                    arrows.push(ArrowData { name: cat.arrow_data(h).name.clone(), source: a, target: b });
                }
            }
        }
    }
    let identities =
        objs.iter().enumerate().map(|(a, &f)| index[&(a, a, cat.identity(cat.arrow_data(f).target))]).collect();
    let mut compose = BTreeMap::new();
    for (&(a, b, h), &x) in &index {
        for (&(b2, c, k), &y) in index.range((b, 0, 0)..(b + 1, 0, 0)) {
            debug_assert_eq!(b2, b);
            let kh = cat.compose(k, h).ok_or_else(|| EnrichedError::Malformed("composition table incomplete".into()))?;
            compose.insert((y, x), index[&(a, c, kh)]);
        }
    }
    let names = objs.iter().map(|&f| cat.arrow_data(f).name.clone()).collect();
    FiniteCategory::new(names, arrows, identities, compose)
}

/// Objects reachable along arrows from `i`, including `i`.
pub fn reachable(cat: &FiniteCategory, i: usize) -> BTreeSet<usize> {
    (0..cat.object_count()).filter(|&j| !cat.hom(i, j).is_empty()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_categories_are_valid() {
        for c in [
            FiniteCategory::discrete(2),
            FiniteCategory::arrow(),
            FiniteCategory::span(),
            FiniteCategory::poset(3, &[(0, 1), (1, 2)]).unwrap(),
            FiniteCategory::free_on_dag(3, &[(0, 1), (0, 1), (1, 2)]).unwrap(),
        ] {
            assert_eq!(c.validate(), Ok(()));
            assert!(c.is_loop_free());
        }
    }

    #[test]
    fn free_paths_count() {
        let c = FiniteCategory::free_on_dag(3, &[(0, 1), (0, 1), (1, 2)]).unwrap();
        assert_eq!(c.hom(0, 2).len(), 2);
        assert_eq!(c.hom(0, 1).len(), 2);
        assert!(matches!(FiniteCategory::free_on_dag(2, &[(0, 1), (1, 0)]), Err(EnrichedError::Cyclic)));
    }

    #[test]
    fn broken_associativity_is_named() {
        let mut c = FiniteCategory::free_on_dag(4, &[(0, 1), (1, 2), (2, 3), (2, 3)]).unwrap();
        let (f, g) = (c.hom(0, 1)[0], c.hom(1, 2)[0]);
        let (h, h2) = (c.hom(2, 3)[0], c.hom(2, 3)[1]);
        let gf = c.compose(g, f).unwrap();
        let wrong = c.compose(h2, gf).unwrap();
        c.compose.insert((h, gf), wrong);
        assert!(matches!(c.validate(), Err(CategoryViolation::Associativity { .. })));
    }

    #[test]
    fn preorder_cycle_is_not_loop_free() {
        let c = FiniteCategory::poset(2, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(c.validate(), Ok(()));
        assert!(!c.is_loop_free());
    }

    #[test]
    fn under_category_has_initial_object() {
        let c = FiniteCategory::poset(3, &[(0, 1), (0, 2)]).unwrap();
        let u = under_category(0, &c).unwrap();
        assert_eq!(u.validate(), Ok(()));
        assert_eq!(u.object_count(), 3);
        assert_eq!(u.initial_objects(), vec![0]);
    }
}
