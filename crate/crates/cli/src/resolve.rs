//! Builds core objects from scenario definitions and runs their law checks.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use wcolim_core::chain::{validate_complex, ChainComplex, ChainMap, Degree, Matrix};
use wcolim_core::colim::{cube_tensor, Cofibrancy, CubicalDiagram, WeightCell};
use wcolim_core::dwyerkan::{left_kan, restrict, DgFunctor};
use wcolim_core::enriched::{ch_full_subcategory, free_dg_category, DgCategory, Diagram, FiniteCategory, Presheaf};

use crate::scenario::*;
use crate::Diagnostic;

/// A dg-category together with the finite category it linearizes, if any.
#[derive(Clone, Debug)]
pub struct Host {
    pub cat: Arc<DgCategory>,
    pub index: Option<FiniteCategory>,
}

#[derive(Clone, Debug)]
pub struct Weight {
    pub presheaf: Arc<Presheaf>,
    pub cofibrancy: Cofibrancy,
}

/// Everything a scenario defines, by name.
#[derive(Default)]
pub struct Env {
    pub complexes: BTreeMap<Name, Arc<ChainComplex>>,
    pub maps: BTreeMap<Name, ChainMap>,
    pub categories: BTreeMap<Name, FiniteCategory>,
    pub hosts: BTreeMap<Name, Host>,
    pub weights: BTreeMap<Name, Weight>,
    pub diagrams: BTreeMap<Name, Arc<Diagram>>,
    pub functors: BTreeMap<Name, DgFunctor>,
    pub cubes: BTreeMap<Name, CubicalDiagram>,
    pub unchecked: BTreeSet<Name>,
    /// `(section, name, status)` for every definition, in build order.
    pub log: Vec<(String, Name, String)>,
}

fn diag(path: impl Into<String>, message: impl ToString) -> Diagnostic {
    Diagnostic { path: path.into(), message: message.to_string() }
}

fn get<'a, T>(table: &'a BTreeMap<Name, T>, section: &str, name: &str, at: &str) -> Result<&'a T, Diagnostic> {
    table.get(name).ok_or_else(|| diag(at, format!("unknown {section} `{name}`")))
}

/// Names in `defs` ordered so that same-section references come first.
fn order<'a, D>(
    section: &str,
    defs: &'a BTreeMap<Name, D>,
    deps: impl Fn(&'a D) -> Vec<&'a Name>,
) -> Result<Vec<&'a Name>, Diagnostic> {
    fn visit<'a, D>(
        section: &str,
        name: &'a Name,
        defs: &'a BTreeMap<Name, D>,
        deps: &dyn Fn(&'a D) -> Vec<&'a Name>,
        state: &mut BTreeMap<&'a Name, bool>,
        out: &mut Vec<&'a Name>,
    ) -> Result<(), Diagnostic> {
        match state.get(name) {
            Some(true) => return Ok(()),
            Some(false) => return Err(diag(format!("{section}.{name}"), "definition refers to itself")),
            None => {}
        }
        state.insert(name, false);
        for d in deps(&defs[name]) {
            if !defs.contains_key(d) {
                let kind = section.trim_end_matches('s');
                return Err(diag(format!("{section}.{name}"), format!("unknown {kind} `{d}`")));
            }
            visit(section, d, defs, deps, state, out)?;
        }
        state.insert(name, true);
        out.push(name);
        Ok(())
    }
    let mut state = BTreeMap::new();
    let mut out = Vec::new();
    for name in defs.keys() {
        visit(section, name, defs, &deps, &mut state, &mut out)?;
    }
    Ok(out)
}

fn matrix(rows: &[Vec<i64>], shape: (usize, usize), at: &str) -> Result<Matrix, Diagnostic> {
    let ok = rows.len() == shape.0 && rows.iter().all(|r| r.len() == shape.1);
    if !ok {
        let found_cols = rows.first().map_or(0, Vec::len);
        return Err(diag(
            at,
            format!("expected a {}x{} matrix, found {}x{}", shape.0, shape.1, rows.len(), found_cols),
        ));
    }
    Ok(Matrix::from_rows(rows, shape.1).expect("rows checked"))
}

fn object(host: &DgCategory, name: &str, at: &str) -> Result<usize, Diagnostic> {
    host.index_of(name).ok_or_else(|| {
        diag(at, format!("unknown object `{name}` (objects: {})", host.names().join(", ")))
    })
}

fn complex(def: &ComplexDef, at: &str) -> Result<ChainComplex, Diagnostic> {
    let rank = |n: Degree| def.ranks.get(&n).copied().unwrap_or(0);
    let mut diffs = Vec::new();
    for (&n, rows) in &def.differentials {
        diffs.push((n, matrix(rows, (rank(n - 1), rank(n)), &format!("{at}.differentials.{n}"))?));
    }
    let ranks: Vec<(Degree, usize)> = def.ranks.iter().map(|(&n, &r)| (n, r)).collect();
    ChainComplex::from_parts(&ranks, diffs).map_err(|e| diag(at, e))
}

fn category(def: &CategoryDef, at: &str) -> Result<FiniteCategory, Diagnostic> {
    let pairs = |v: &[[usize; 2]]| v.iter().map(|p| (p[0], p[1])).collect::<Vec<_>>();
    match def {
        CategoryDef::Discrete { objects } => Ok(FiniteCategory::discrete(*objects)),
        CategoryDef::Arrow => Ok(FiniteCategory::arrow()),
        CategoryDef::Span => Ok(FiniteCategory::span()),
        CategoryDef::Poset { objects, relations } => FiniteCategory::poset(*objects, &pairs(relations)),
        CategoryDef::Free { objects, edges } => FiniteCategory::free_on_dag(*objects, &pairs(edges)),
    }
    .map_err(|e| diag(at, e))
}

fn scaled_unit(scale: i64) -> DgCategory {
    let z = Arc::new(ChainComplex::z(0));
    let t = z.clone();
    DgCategory::new(
        vec!["x".into()],
        vec![vec![z.clone()]],
        move |_, _, _, l| Ok(ChainMap::identity(l.complex().clone()).retarget(l.complex().clone(), t.clone())),
        vec![ChainMap::identity(z).scale(&BigInt::from(scale))],
    )
    .expect("endpoints match")
}

/// `D(f)` for an arrow of `cat`, from maps given on generating arrows.
fn arrow_map(
    cat: &FiniteCategory,
    values: &[Arc<ChainComplex>],
    given: &BTreeMap<Name, ChainMap>,
    f: usize,
    depth: usize,
) -> Option<ChainMap> {
    let a = cat.arrow_data(f);
    if cat.is_identity(f) {
        return Some(ChainMap::identity(values[a.source].clone()));
    }
    if let Some(m) = given.get(&a.name) {
        return Some(m.clone());
    }
    if a.name.contains('.') {
        return a.name.split('.').try_fold(ChainMap::identity(values[a.source].clone()), |acc, e| {
            given.get(e).map(|m| m.compose(&acc))
        });
    }
    if depth == 0 {
        return None;
    }
    (0..cat.object_count()).filter(|&k| k != a.source && k != a.target).find_map(|k| {
        let first = *cat.hom(a.source, k).first()?;
        let second = *cat.hom(k, a.target).first()?;
        let g = arrow_map(cat, values, given, first, depth - 1)?;
        let h = arrow_map(cat, values, given, second, depth - 1)?;
        Some(h.compose(&g))
    })
}

impl Env {
    fn host(&self, name: &str, at: &str) -> Result<&Host, Diagnostic> {
        get(&self.hosts, "dg-category", name, at)
    }

    fn complex(&self, name: &str, at: &str) -> Result<&Arc<ChainComplex>, Diagnostic> {
        get(&self.complexes, "complex", name, at)
    }

    fn index<'a>(&'a self, host: &'a Host, name: &str, at: &str) -> Result<&'a FiniteCategory, Diagnostic> {
        host.index.as_ref().ok_or_else(|| diag(at, format!("`{name}` is not the linearization of a finite category")))
    }

    /// Builds and checks all definitions.
    pub fn build(s: &Scenario) -> Result<Env, Diagnostic> {
        let mut env = Env { unchecked: s.unchecked.iter().cloned().collect(), ..Env::default() };
        env.build_complexes(s)?;
        env.build_maps(s)?;
        for (name, def) in &s.categories {
            let at = format!("categories.{name}");
            let c = category(def, &at)?;
            env.check(&at, name, || c.validate().map_err(|e| e.to_string()))?;
            env.categories.insert(name.clone(), c);
        }
        env.build_hosts(s)?;
        env.build_functors(s)?;
        env.build_diagrams(s)?;
        env.build_weights(s)?;
        env.build_cubes(s)?;
        let known: BTreeSet<&Name> = env.log.iter().map(|l| &l.1).collect();
        if let Some(u) = s.unchecked.iter().find(|u| !known.contains(u)) {
            return Err(diag("unchecked", format!("no definition named `{u}`")));
        }
        Ok(env)
    }

    fn check(&mut self, at: &str, name: &str, law: impl FnOnce() -> Result<(), String>) -> Result<(), Diagnostic> {
        let section = at.split('.').next().unwrap_or(at).to_string();
        let status = if self.unchecked.contains(name) {
            match law() {
                Ok(()) => "unchecked (laws hold)".to_string(),
                Err(e) => format!("unchecked ({e})"),
            }
        } else {
            law().map_err(|e| diag(at, e))?;
            "ok".to_string()
        };
        self.log.push((section, name.to_string(), status));
        Ok(())
    }

    fn build_complexes(&mut self, s: &Scenario) -> Result<(), Diagnostic> {
        for (name, def) in &s.complexes {
            let at = format!("complexes.{name}");
            let c = complex(def, &at)?;
            self.check(&at, name, || validate_complex(&c).map_err(|e| e.to_string()))?;
            self.complexes.insert(name.clone(), Arc::new(c));
        }
        Ok(())
    }

    fn build_maps(&mut self, s: &Scenario) -> Result<(), Diagnostic> {
        for (name, def) in &s.maps {
            let at = format!("maps.{name}");
            let src = self.complex(&def.source, &at)?.clone();
            let dst = self.complex(&def.target, &at)?.clone();
            let mut comps = BTreeMap::new();
            for (&n, rows) in &def.components {
                let m = matrix(rows, (dst.rank(n), src.rank(n)), &format!("{at}.components.{n}"))?;
                comps.insert(n, m);
            }
            let f = ChainMap::from_fn(src, dst, |n, _| comps.remove(&n));
            self.check(&at, name, || f.check().map_err(|e| e.to_string()))?;
            self.maps.insert(name.clone(), f);
        }
        Ok(())
    }

    fn build_hosts(&mut self, s: &Scenario) -> Result<(), Diagnostic> {
        let names = order("dg_categories", &s.dg_categories, |d| match d {
            DgCategoryDef::ConnectiveCover { of } | DgCategoryDef::FullSubcategory { of, .. } => vec![of],
            _ => vec![],
        })?;
        for name in names {
            let at = format!("dg_categories.{name}");
            let host = match &s.dg_categories[name] {
                DgCategoryDef::Linearize { category } => {
                    let c = get(&self.categories, "category", category, &at)?;
                    Host { cat: Arc::new(free_dg_category(c)), index: Some(c.clone()) }
                }
                DgCategoryDef::Complexes { objects } => {
                    let objs = objects
                        .iter()
                        .map(|[o, c]| Ok((o.clone(), self.complex(c, &at)?.clone())))
                        .collect::<Result<Vec<_>, Diagnostic>>()?;
                    Host { cat: Arc::new(ch_full_subcategory(objs)), index: None }
                }
                DgCategoryDef::ConnectiveCover { of } => {
                    Host { cat: Arc::new(self.hosts[of].cat.connective_cover()), index: None }
                }
                DgCategoryDef::FullSubcategory { of, objects } => {
                    let base = &self.hosts[of].cat;
                    let idx = objects.iter().map(|o| object(base, o, &at)).collect::<Result<Vec<_>, _>>()?;
                    Host { cat: Arc::new(base.full_subcategory(&idx).map_err(|e| diag(&at, e))?), index: None }
                }
                DgCategoryDef::ScaledUnit { scale } => Host { cat: Arc::new(scaled_unit(*scale)), index: None },
            };
            let cat = host.cat.clone();
            self.check(&at, name, || cat.validate().map_err(|e| e.to_string()))?;
            self.hosts.insert(name.clone(), host);
        }
        Ok(())
    }

    fn build_functors(&mut self, s: &Scenario) -> Result<(), Diagnostic> {
        for (name, def) in &s.functors {
            let at = format!("functors.{name}");
            let f = match def {
                FunctorDef::Identity { of } => DgFunctor::identity(self.host(of, &at)?.cat.clone()),
                FunctorDef::Inclusion { target, objects } => {
                    let t = self.host(target, &at)?.cat.clone();
                    let idx = objects.iter().map(|o| object(&t, o, &at)).collect::<Result<Vec<_>, _>>()?;
                    DgFunctor::inclusion(t, &idx).map_err(|e| diag(&at, e))?
                }
                FunctorDef::Explicit { source, target, objects, components } => {
                    self.explicit_functor(&at, source, target, objects, components)?
                }
            };
            self.check(&at, name, || f.validate().map_err(|e| e.to_string()))?;
            self.functors.insert(name.clone(), f);
        }
        Ok(())
    }

    fn explicit_functor(
        &self,
        at: &str,
        source: &str,
        target: &str,
        objects: &BTreeMap<Name, Name>,
        components: &[ComponentDef],
    ) -> Result<DgFunctor, Diagnostic> {
        let s = self.host(source, at)?.cat.clone();
        let t = self.host(target, at)?.cat.clone();
        let mut images = Vec::with_capacity(s.object_count());
        for d in s.names() {
            let image = objects.get(d).ok_or_else(|| diag(format!("{at}.objects"), format!("no image for `{d}`")))?;
            images.push(object(&t, image, &format!("{at}.objects.{d}"))?);
        }
        let mut given: BTreeMap<(usize, usize), ChainMap> = BTreeMap::new();
        for (k, c) in components.iter().enumerate() {
            let here = format!("{at}.components.{k}");
            let (dp, d) = (object(&s, &c.from, &here)?, object(&s, &c.to, &here)?);
            let (hs, ht) = (s.hom(dp, d).clone(), t.hom(images[dp], images[d]).clone());
            let m = match (&c.map, c.scale) {
                (Some(m), None) => {
                    let m = get(&self.maps, "map", m, &here)?;
                    if **m.source() != *hs || **m.target() != *ht {
                        return Err(diag(here, "map endpoints differ from the hom complexes"));
                    }
                    m.retarget(hs, ht)
                }
                (None, Some(k)) if *hs == *ht => ChainMap::identity(hs.clone()).scale(&BigInt::from(k)).retarget(hs, ht),
                (None, Some(_)) => return Err(diag(here, "`scale` needs equal hom complexes")),
                _ => return Err(diag(here, "give exactly one of `map` and `scale`")),
            };
            given.insert((dp, d), m);
        }
        DgFunctor::new(s.clone(), t.clone(), images.clone(), |dp, d| {
            given.remove(&(dp, d)).unwrap_or_else(|| {
                let (hs, ht) = (s.hom(dp, d).clone(), t.hom(images[dp], images[d]).clone());
                if *hs == *ht {
                    ChainMap::identity(hs.clone()).retarget(hs, ht)
                } else {
                    ChainMap::zero(hs, ht)
                }
            })
        })
        .map_err(|e| diag(at, e))
    }

    fn build_diagrams(&mut self, s: &Scenario) -> Result<(), Diagnostic> {
        let names = order("diagrams", &s.diagrams, |d| match d {
            DiagramDef::Shift { of, .. } => vec![of],
            DiagramDef::Sum { parts } => parts.iter().collect(),
            _ => vec![],
        })?;
        for name in names {
            let at = format!("diagrams.{name}");
            let d = match &s.diagrams[name] {
                DiagramDef::Representable { host, object: o } => {
                    let h = self.host(host, &at)?.cat.clone();
                    let c = object(&h, o, &at)?;
                    Diagram::representable(h, c)
                }
                DiagramDef::Constant { host, value } => {
                    let h = self.host(host, &at)?;
                    let cat = self.index(h, host, &at)?;
                    let v = self.complex(value, &at)?.clone();
                    let id = ChainMap::identity(v.clone());
                    Diagram::from_functor(h.cat.clone(), cat, vec![v; cat.object_count()], |_| id.clone())
                        .map_err(|e| diag(&at, e))?
                }
                DiagramDef::Functor { host, values, maps } => self.functor_diagram(&at, host, values, maps)?,
                DiagramDef::Shift { of, by } => self.diagrams[of].shift(*by),
                DiagramDef::Sum { parts } => {
                    let ps: Vec<&Diagram> = parts.iter().map(|p| &*self.diagrams[p]).collect();
                    Diagram::direct_sum(&ps).map_err(|e| diag(&at, e))?
                }
            };
            self.check(&at, name, || d.validate().map_err(|e| e.to_string()))?;
            self.diagrams.insert(name.clone(), Arc::new(d));
        }
        Ok(())
    }

    fn functor_diagram(
        &self,
        at: &str,
        host: &str,
        values: &BTreeMap<Name, Name>,
        maps: &BTreeMap<Name, Name>,
    ) -> Result<Diagram, Diagnostic> {
        let h = self.host(host, at)?;
        let cat = self.index(h, host, at)?;
        let vals = cat
            .objects()
            .iter()
            .map(|o| {
                let c = values.get(o).ok_or_else(|| diag(format!("{at}.values"), format!("no value for `{o}`")))?;
                Ok(self.complex(c, &format!("{at}.values.{o}"))?.clone())
            })
            .collect::<Result<Vec<_>, Diagnostic>>()?;
        let mut given = BTreeMap::new();
        for (arrow, m) in maps {
            let here = format!("{at}.maps.{arrow}");
            let a = cat.arrows().iter().find(|a| &a.name == arrow).ok_or_else(|| {
                let names: Vec<&str> = cat.arrows().iter().map(|a| a.name.as_str()).collect();
                diag(&here, format!("no arrow `{arrow}` (arrows: {})", names.join(", ")))
            })?;
            let f = get(&self.maps, "map", m, &here)?;
            if **f.source() != *vals[a.source] || **f.target() != *vals[a.target] {
                return Err(diag(here, "map endpoints differ from the values at the arrow's ends"));
            }
            given.insert(arrow.clone(), f.retarget(vals[a.source].clone(), vals[a.target].clone()));
        }
        let n = cat.object_count();
        let mut all = Vec::with_capacity(cat.arrows().len());
        for f in 0..cat.arrows().len() {
            let m = arrow_map(cat, &vals, &given, f, n).ok_or_else(|| {
                diag(format!("{at}.maps"), format!("no map for arrow `{}`", cat.arrow_data(f).name))
            })?;
            all.push(m);
        }
        Diagram::from_functor(h.cat.clone(), cat, vals, |f| all[f].clone()).map_err(|e| diag(at, e))
    }

    fn build_weights(&mut self, s: &Scenario) -> Result<(), Diagnostic> {
        let names = order("weights", &s.weights, |d| match d {
            WeightDef::Shift { of, .. } | WeightDef::Restrict { of, .. } | WeightDef::LeftKan { of, .. } => vec![of],
            WeightDef::Sum { parts } => parts.iter().collect(),
            _ => vec![],
        })?;
        for name in names {
            let at = format!("weights.{name}");
            let w = match &s.weights[name] {
                WeightDef::Representable { host, object: o } => {
                    let h = self.host(host, &at)?.cat.clone();
                    let c = object(&h, o, &at)?;
                    Weight { presheaf: WeightCell::representable(h, c).presheaf().clone(), cofibrancy: Cofibrancy::Certified }
                }
                WeightDef::Constant { host, value } => {
                    let h = self.host(host, &at)?;
                    let cat = self.index(h, host, &at)?;
                    let v = self.complex(value, &at)?.clone();
                    let p = Presheaf::constant(h.cat.clone(), cat, v).map_err(|e| diag(&at, e))?;
                    Weight { presheaf: Arc::new(p), cofibrancy: Cofibrancy::Unknown }
                }
                WeightDef::Zero { host } => Weight {
                    presheaf: Arc::new(Presheaf::zero(self.host(host, &at)?.cat.clone())),
                    cofibrancy: Cofibrancy::Certified,
                },
                WeightDef::Cells { host, cells } => {
                    let h = self.host(host, &at)?.cat.clone();
                    let mut w = WeightCell::empty(h.clone());
                    for (k, c) in cells.iter().enumerate() {
                        let here = format!("{at}.cells.{k}");
                        let o = object(&h, &c.object, &here)?;
                        let next = if c.cycle.is_empty() {
                            w.attach_free(o, c.dim)
                        } else {
                            w.attach(o, c.dim, c.cycle.iter().map(|&x| BigInt::from(x)).collect())
                        };
                        w = next.map_err(|e| diag(here, e))?;
                    }
                    Weight { presheaf: w.presheaf().clone(), cofibrancy: Cofibrancy::Certified }
                }
                WeightDef::Shift { of, by } => {
                    let base = &self.weights[of];
                    Weight { presheaf: Arc::new(base.presheaf.shift(*by)), cofibrancy: base.cofibrancy }
                }
                WeightDef::Sum { parts } => {
                    let ps: Vec<&Presheaf> = parts.iter().map(|p| &*self.weights[p].presheaf).collect();
                    let certified = parts.iter().all(|p| self.weights[p].cofibrancy == Cofibrancy::Certified);
                    Weight {
                        presheaf: Arc::new(Presheaf::direct_sum(&ps).map_err(|e| diag(&at, e))?),
                        cofibrancy: if certified { Cofibrancy::Certified } else { Cofibrancy::Unknown },
                    }
                }
                WeightDef::Restrict { functor, of } => {
                    let f = get(&self.functors, "functor", functor, &at)?;
                    let p = restrict(f, &self.weights[of].presheaf).map_err(|e| diag(&at, e))?;
                    Weight { presheaf: Arc::new(p), cofibrancy: Cofibrancy::Unknown }
                }
                WeightDef::LeftKan { functor, of } => {
                    let f = get(&self.functors, "functor", functor, &at)?;
                    let lk = left_kan(f, self.weights[of].presheaf.clone()).map_err(|e| diag(&at, e))?;
                    Weight { presheaf: lk.presheaf, cofibrancy: Cofibrancy::Unknown }
                }
            };
            let p = w.presheaf.clone();
            self.check(&at, name, || p.validate().map_err(|e| e.to_string()))?;
            self.weights.insert(name.clone(), w);
        }
        Ok(())
    }

    fn build_cubes(&mut self, s: &Scenario) -> Result<(), Diagnostic> {
        let names = order("cubes", &s.cubes, |d| match d {
            CubeDef::Tensor { left, right } => vec![left, right],
            CubeDef::Arrow { .. } => vec![],
        })?;
        for name in names {
            let at = format!("cubes.{name}");
            let x = match &s.cubes[name] {
                CubeDef::Arrow { map } => CubicalDiagram::arrow(name, get(&self.maps, "map", map, &at)?),
                CubeDef::Tensor { left, right } => {
                    cube_tensor(&self.cubes[left], &self.cubes[right]).map_err(|e| diag(&at, e))?
                }
            };
            self.check(&at, name, || x.validate().map_err(|v| format!("square at vertex {} in directions {}, {} does not commute", v.mask, v.i, v.j)))?;
            self.cubes.insert(name.clone(), x);
        }
        Ok(())
    }

    /// Definitions listed as unchecked, with their law-check outcome.
    pub fn caveats(&self) -> Vec<String> {
        self.log
            .iter()
            .filter(|l| l.2 != "ok")
            .map(|(section, name, status)| format!("{section}.{name}: {status}"))
            .collect()
    }
}
