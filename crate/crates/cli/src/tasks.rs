//! One function per task command, each producing a [`TaskReport`].

use std::sync::Arc;

use wcolim_core::chain::{
    cofibration_check, homology, homology_full, is_quasi_iso_in_window, ChainComplex, ChainError, Degree,
    GradedAbelianGroup,
};
use wcolim_core::colim::{
    bar_compare, bar_resolution, bk_comparison, bk_hocolim, cofibrant_replacement, pcm_law, pushout_corner_map,
    reedy_report, weighted_colimit, BarComparison, BarConstruction, Cofibrancy, ColimError, CubicalDiagram,
};
use wcolim_core::dwyerkan::{
    derived_counit_check, h0_retract_witness, CounitMode, DgFunctor, DwyerKanError, NonexistenceReason,
    RetractSearch, SearchBounds,
};
use wcolim_core::enriched::{Diagram, Presheaf};
use wcolim_core::simplicial::{
    collapse_check, dold_kan_gamma, dold_kan_normalize, SimplicialError, Stability, TruncationCertificate,
};

use crate::report::{stability_name, CertificateReport, Table, TaskReport};
use crate::resolve::{Env, Weight};
use crate::scenario::{Expectation, Name, Window};
use crate::{CliError, Diagnostic};

/// Flag values that override task fields.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub window: Option<Window>,
    pub truncation: Option<usize>,
    pub allow_heuristic: bool,
    /// Run only tasks with this command.
    pub only: Option<String>,
}

/// Per-task settings after applying flags.
#[derive(Clone, Copy, Debug)]
pub struct Settings {
    pub allow_heuristic: bool,
}

fn invalid(at: &str, e: impl ToString) -> CliError {
    CliError::Invalid(Diagnostic { path: at.into(), message: e.to_string() })
}

fn unsound(at: &str, e: impl ToString) -> CliError {
    CliError::Unsound(Diagnostic { path: at.into(), message: e.to_string() })
}

fn chain_err(at: &str, e: ChainError) -> CliError {
    match e {
        ChainError::UnsoundWindow { .. } => unsound(at, e),
        e => invalid(at, e),
    }
}

fn simplicial_err(at: &str, e: SimplicialError) -> CliError {
    match e {
        SimplicialError::HeuristicTruncation { .. } => unsound(at, e),
        SimplicialError::Chain(c) => chain_err(at, c),
        e => invalid(at, e),
    }
}

pub fn colim_err(at: &str, e: ColimError) -> CliError {
    match e {
        ColimError::Simplicial(s) => simplicial_err(at, s),
        ColimError::Chain(c) => chain_err(at, c),
        e => invalid(at, e),
    }
}

fn dk_err(at: &str, e: DwyerKanError) -> CliError {
    match e {
        DwyerKanError::Colim(c) => colim_err(at, c),
        e => invalid(at, e),
    }
}

fn lookup<'a, T>(table: &'a std::collections::BTreeMap<Name, T>, kind: &str, name: &str, at: &str) -> Result<&'a T, CliError> {
    table.get(name).ok_or_else(|| invalid(at, format!("unknown {kind} `{name}`")))
}

fn pair(w: Window) -> (Degree, Degree) {
    (w[0], w[1])
}

fn normalize(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

/// Compares expected groups with computed ones; returns mismatches.
fn expectation_mismatches(expect: &Expectation, h: &GradedAbelianGroup, at: &str) -> Result<Vec<String>, CliError> {
    let mut bad = Vec::new();
    for (key, want) in expect {
        let n: Degree = key.trim().parse().map_err(|_| invalid(&format!("{at}.expect"), format!("`{key}` is not a degree")))?;
        let got = h.get(n).to_string();
        if normalize(want) != normalize(&got) {
            bad.push(format!("H_{n}: expected {want}, found {got}"));
        }
    }
    Ok(bad)
}

fn with_expectation(
    mut r: TaskReport,
    expect: Option<&Expectation>,
    h: &GradedAbelianGroup,
    at: &str,
) -> Result<TaskReport, CliError> {
    if let Some(e) = expect {
        let bad = expectation_mismatches(e, h, at)?;
        let ok = bad.is_empty() && r.check.unwrap_or(true);
        r = r.with_check(ok);
        for b in bad {
            r = r.caveat(b);
        }
    }
    Ok(r)
}

fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.into()
}

pub fn validate(env: &Env) -> TaskReport {
    let mut t = Table::new("definitions", &["section", "name", "status"]);
    for (section, name, status) in &env.log {
        t = t.row(vec![section.clone(), name.clone(), status.clone()]);
    }
    TaskReport::new("validate", "all definitions").table(t)
}

pub fn homology_task(env: &Env, at: &str, complex: &str, window: Option<Window>, expect: Option<&Expectation>) -> Result<TaskReport, CliError> {
    let c = lookup(&env.complexes, "complex", complex, at)?;
    let h = match window {
        Some(w) => homology(c, pair(w)),
        None => homology_full(c),
    };
    let r = TaskReport::new("homology", complex).table(Table::homology("homology", &h));
    with_expectation(r, expect, &h, at)
}

pub fn wcolim_task(
    env: &Env,
    at: &str,
    weight: &str,
    diagram: &str,
    window: Option<Window>,
    expect: Option<&Expectation>,
) -> Result<TaskReport, CliError> {
    let w = lookup(&env.weights, "weight", weight, at)?;
    let d = lookup(&env.diagrams, "diagram", diagram, at)?;
    let colim = weighted_colimit(&w.presheaf, d).map_err(|e| colim_err(at, e))?;
    let h = match window {
        Some(w) => homology(&colim.complex, pair(w)),
        None => homology_full(&colim.complex),
    };
    let r = TaskReport::new("wcolim", format!("{weight} * {diagram}")).table(Table::homology("homology", &h));
    with_expectation(r, expect, &h, at)
}

fn certified(mut cert: CertificateReport, stability: Option<Stability>) -> CertificateReport {
    if cert.stability.is_none() {
        cert.stability = stability.map(stability_name);
    }
    cert
}

/// `|B(W, 𝓒, D)| → W ⋆ D` on a window; with no truncation given, the least
/// sound one is used.
pub fn bar_compare_on(
    w: &Weight,
    d: &Arc<Diagram>,
    truncation: Option<usize>,
    window: Window,
    settings: Settings,
    at: &str,
    subject: String,
) -> Result<TaskReport, CliError> {
    let win = pair(window);
    let n = match truncation {
        Some(n) => n,
        None => {
            let bar = BarConstruction::new(w.presheaf.clone(), d.clone(), 0).map_err(|e| colim_err(at, e))?;
            bar.sound_truncation(win)
                .ok_or_else(|| unsound(at, "no truncation is sound for this window; give one explicitly"))?
        }
    };
    let run = |n| bar_compare(w.presheaf.clone(), d.clone(), n, win, w.cofibrancy, settings.allow_heuristic);
    let r: BarComparison = run(n).map_err(|e| colim_err(at, e))?;
    let stability = if r.certificate.is_sound() {
        None
    } else {
        let next = run(n + 1).map_err(|e| colim_err(at, e))?;
        let same = next.verdict == r.verdict && next.realization_homology == r.realization_homology;
        Some(if same { Stability::Stable } else { Stability::Unstable })
    };
    let mut t = TaskReport::new("bar-compare", subject).with_check(r.quasi_iso()).table(Table::homology_columns(
        "homology",
        &[("|B|", &r.realization_homology), ("W*D", &r.colimit_homology)],
    ));
    if !r.quasi_iso() {
        t = t.table(Table::homology("cone of |B| -> W*D", &r.verdict.cone_homology));
    }
    let mut levels = Table::new("normalized bar levels", &["level", "rank"]);
    for (k, rank) in r.level_ranks.iter().enumerate() {
        levels = levels.row(vec![k.to_string(), rank.to_string()]);
    }
    t = t.table(levels);
    t.certificate = Some(certified(CertificateReport::from(&r.certificate), stability));
    t = match r.cofibrancy {
        Cofibrancy::Certified => t,
        Cofibrancy::Replacement => t.caveat("weight is a bar replacement"),
        Cofibrancy::Unknown => t.caveat("weight is not known to be cofibrant; a quasi-isomorphism is not predicted"),
    };
    if !r.certificate.is_sound() {
        t = t.caveat("heuristic truncation");
    }
    Ok(t)
}

pub fn bar_compare_task(
    env: &Env,
    at: &str,
    weight: &str,
    diagram: &str,
    truncation: Option<usize>,
    window: Window,
    settings: Settings,
) -> Result<TaskReport, CliError> {
    let w = lookup(&env.weights, "weight", weight, at)?;
    let d = lookup(&env.diagrams, "diagram", diagram, at)?;
    bar_compare_on(w, d, truncation, window, settings, at, format!("{weight} * {diagram}"))
}

fn require_trusted(cert: &TruncationCertificate, settings: Settings, at: &str) -> Result<(), CliError> {
    if !cert.is_sound() && !settings.allow_heuristic {
        return Err(unsound(
            at,
            SimplicialError::HeuristicTruncation { truncation: cert.truncation, window: cert.window },
        ));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub fn hocolim_task(
    env: &Env,
    at: &str,
    category: &str,
    diagram: &str,
    truncation: usize,
    window: Window,
    expect: Option<&Expectation>,
    settings: Settings,
) -> Result<TaskReport, CliError> {
    let cat = lookup(&env.categories, "category", category, at)?;
    let d = lookup(&env.diagrams, "diagram", diagram, at)?;
    let host = env
        .hosts
        .values()
        .find(|h| h.index.as_ref() == Some(cat) && Arc::ptr_eq(&h.cat, d.host()))
        .ok_or_else(|| invalid(at, format!("diagram `{diagram}` does not live over the linearization of `{category}`")))?;
    let win = pair(window);
    let bk = bk_hocolim(cat, d, truncation, win).map_err(|e| colim_err(at, e))?;
    let cert = bk.realization.certificate.clone();
    require_trusted(&cert, settings, at)?;
    let h = bk.homology();
    let mut t = TaskReport::new("hocolim", format!("hocolim {diagram}"));
    t.certificate = Some(CertificateReport::from(&cert));
    if cat.is_loop_free() {
        let z = Arc::new(ChainComplex::z(0));
        let constant = Presheaf::constant(host.cat.clone(), cat, z).map_err(|e| invalid(at, e))?;
        let q = cofibrant_replacement(Arc::new(constant), truncation, win).map_err(|e| colim_err(at, e))?;
        let (map, hq) = bk_comparison(cat, d, &bk, &q).map_err(|e| colim_err(at, e))?;
        let v = is_quasi_iso_in_window(&map, win);
        t = t
            .with_check(v.quasi_iso)
            .table(Table::homology_columns("homology", &[("hocolim", &h), ("Q(Z)*D", &hq)]));
    } else {
        t = t.table(Table::homology("homology", &h)).caveat("index category has loops; comparison skipped");
    }
    if !cert.is_sound() {
        t = t.caveat("heuristic truncation");
    }
    with_expectation(t, expect, &h, at)
}

pub fn cofrep_task(
    env: &Env,
    at: &str,
    weight: &str,
    truncation: usize,
    window: Window,
    settings: Settings,
) -> Result<TaskReport, CliError> {
    let w = lookup(&env.weights, "weight", weight, at)?;
    let host = w.presheaf.host().clone();
    let q = cofibrant_replacement(w.presheaf.clone(), truncation, pair(window)).map_err(|e| colim_err(at, e))?;
    if let Some(r) = q.realizations.iter().find(|r| !r.certificate.is_sound()) {
        require_trusted(&r.certificate, settings, at)?;
    }
    let mut table = Table::new("Q(c) -> W(c)", &["object", "rank Q(c)", "quasi-iso", "truncation"]);
    for (c, v) in q.verdicts.iter().enumerate() {
        let mode = if q.realizations[c].certificate.is_sound() { "sound" } else { "heuristic" };
        table = table.row(vec![
            host.name(c).to_string(),
            q.presheaf.value(c).total_rank().to_string(),
            yes_no(v.quasi_iso),
            mode.into(),
        ]);
    }
    let mut t = TaskReport::new("cofrep", format!("Q({weight})")).with_check(q.is_pointwise_quasi_iso()).table(table);
    if !q.is_sound() {
        t = t.caveat("heuristic truncation");
    }
    Ok(t)
}

pub fn reedy_task(env: &Env, at: &str, weight: &str, diagram: &str, truncation: usize) -> Result<TaskReport, CliError> {
    let w = lookup(&env.weights, "weight", weight, at)?;
    let d = lookup(&env.diagrams, "diagram", diagram, at)?;
    let bar = BarConstruction::new(w.presheaf.clone(), d.clone(), truncation).map_err(|e| colim_err(at, e))?;
    let rep = reedy_report(&bar).map_err(|e| colim_err(at, e))?;
    let mut table = Table::new("latching maps", &["level", "cofibration", "first failure"]);
    for l in &rep.levels {
        let first = l.failures.first().map(|(t, why)| format!("{t:?}: {why}")).unwrap_or_default();
        table = table.row(vec![l.level.to_string(), yes_no(l.is_cofibration()), first]);
    }
    let mut t = TaskReport::new("reedy", format!("B({weight}, {diagram})")).with_check(rep.all_cofibrations()).table(table);
    if !bar.has_split_units() {
        t = t.caveat("units do not split");
    }
    Ok(t)
}

fn corner_row(name: &str, x: &CubicalDiagram, at: &str) -> Result<Vec<String>, CliError> {
    let pc = pushout_corner_map(x).map_err(|e| colim_err(at, e))?;
    let status = match cofibration_check(&pc.map) {
        Ok(()) => "yes".to_string(),
        Err(f) => format!("no ({f})"),
    };
    Ok(vec![name.to_string(), status])
}

pub fn cube_task(env: &Env, at: &str, left: &str, right: &str) -> Result<TaskReport, CliError> {
    let x = lookup(&env.cubes, "cube", left, at)?;
    let y = lookup(&env.cubes, "cube", right, at)?;
    let law = pcm_law(x, y).map_err(|e| colim_err(at, e))?;
    let corners = Table::new("pushout-corner maps", &["cube", "cofibration"])
        .row(corner_row(left, x, at)?)
        .row(corner_row(right, y, at)?);
    let comparison = Table::new("pushout-product law", &["property", "holds"])
        .row(vec!["comparison is an isomorphism".into(), yes_no(law.is_isomorphism)])
        .row(vec!["comparison commutes with the corners".into(), yes_no(law.commutes)]);
    Ok(TaskReport::new("cube", format!("{left} box {right}")).with_check(law.holds()).table(corners).table(comparison))
}

pub fn dold_kan_task(env: &Env, at: &str, complex: &str, top: Option<usize>) -> Result<TaskReport, CliError> {
    let c = lookup(&env.complexes, "complex", complex, at)?;
    let top = top.unwrap_or_else(|| c.max_degree().map_or(0, |d| d.max(0) as usize + 1));
    let g = dold_kan_gamma(c, top).map_err(|e| simplicial_err(at, e))?;
    let laws = g.validate();
    let n = dold_kan_normalize(&g).map_err(|e| simplicial_err(at, e))?;
    let mut levels = Table::new("levels of Gamma(C)", &["level", "rank"]);
    for k in 0..=g.truncation() {
        levels = levels.row(vec![k.to_string(), g.level(k).total_rank().to_string()]);
    }
    let mut ranks = Table::new("ranks", &["n", "C", "N Gamma C"]);
    let degrees = c.degrees().chain(n.degrees());
    let (lo, hi) = (degrees.clone().min().unwrap_or(0), degrees.max().unwrap_or(-1));
    for d in lo..=hi {
        ranks = ranks.row(vec![d.to_string(), c.rank(d).to_string(), n.rank(d).to_string()]);
    }
    let mut t = TaskReport::new("dold-kan", complex).with_check(laws.is_ok() && n == **c).table(levels).table(ranks);
    if let Err(v) = laws {
        t = t.caveat(format!("simplicial identity fails: {}", v.relation));
    }
    Ok(t)
}

fn retract_status(f: &DgFunctor, s: &RetractSearch) -> String {
    match s {
        RetractSearch::Found(w) => {
            let objs: Vec<&str> = w.summands.iter().map(|x| f.source().name(x.object)).collect();
            if objs.is_empty() {
                "zero object".into()
            } else {
                format!("retract of {}", objs.join(" + "))
            }
        }
        RetractSearch::NotFoundWithinBounds { systems } => format!("not found within bounds ({systems} systems)"),
        RetractSearch::CertifiedNonexistent(NonexistenceReason::VanishingGroups) => {
            "none: H_0 homs vanish".into()
        }
        RetractSearch::CertifiedNonexistent(NonexistenceReason::OutsideCompositeSpan) => {
            "none: identity outside the span of composites".into()
        }
    }
}

pub fn dwyer_kan_task(
    env: &Env,
    at: &str,
    functor: &str,
    truncation: usize,
    window: Window,
    settings: Settings,
) -> Result<TaskReport, CliError> {
    let f = lookup(&env.functors, "functor", functor, at)?;
    let (s, tgt) = (f.source(), f.target());
    let hff = f.is_homotopically_ff();
    let mut pairs = Table::new("hom maps", &["from", "to", "quasi-iso", "cone homology"]);
    for p in &hff.pairs {
        pairs = pairs.row(vec![
            s.name(p.source).to_string(),
            s.name(p.target).to_string(),
            yes_no(p.verdict.quasi_iso),
            p.verdict.cone_homology.to_string(),
        ]);
    }
    let mut objects = Table::new(
        "target objects",
        &["object", "H_0 retract", "counit", "mode", "failing objects"],
    );
    let mut ok = hff.holds();
    let mut caveats = Vec::new();
    for c in 0..tgt.object_count() {
        let search = h0_retract_witness(f, c, SearchBounds::default());
        let check = derived_counit_check(f, c, truncation, pair(window)).map_err(|e| dk_err(at, e))?;
        let mode = match check.mode {
            CounitMode::Sound => "sound",
            CounitMode::HeuristicStable => "heuristic, stable",
            CounitMode::HeuristicUnstable => "heuristic, unstable",
        };
        if check.mode != CounitMode::Sound && !settings.allow_heuristic {
            return Err(unsound(
                at,
                format!("counit at {} is only heuristic for truncation {truncation}", tgt.name(c)),
            ));
        }
        if check.mode == CounitMode::HeuristicUnstable {
            caveats.push(format!("counit at {} changes between truncations", tgt.name(c)));
        }
        ok &= search.witness().is_some() && check.passes();
        let failing: Vec<&str> = check.failures().into_iter().map(|x| tgt.name(x)).collect();
        objects = objects.row(vec![
            tgt.name(c).to_string(),
            retract_status(f, &search),
            if check.passes() { "quasi-iso" } else { "fails" }.into(),
            mode.into(),
            failing.join(", "),
        ]);
    }
    let mut t = TaskReport::new("dwyer-kan", functor).with_check(ok).table(pairs).table(objects);
    for c in caveats {
        t = t.caveat(c);
    }
    if env.unchecked.contains(functor) {
        t = t.caveat("functor laws were not enforced");
    }
    Ok(t)
}

#[allow(clippy::too_many_arguments)]
pub fn collapse_task(
    env: &Env,
    at: &str,
    weight: &str,
    object: &str,
    truncation: usize,
    window: Window,
    settings: Settings,
) -> Result<TaskReport, CliError> {
    let w = lookup(&env.weights, "weight", weight, at)?;
    let host = w.presheaf.host();
    let c = host.index_of(object).ok_or_else(|| invalid(at, format!("unknown object `{object}`")))?;
    let x = bar_resolution(w.presheaf.clone(), c, truncation).map_err(|e| colim_err(at, e))?;
    let v = collapse_check(&x, pair(window), settings.allow_heuristic).map_err(|e| simplicial_err(at, e))?;
    let extra = v.extra_degeneracy.as_ref();
    let mut table = Table::new("collapse", &["property", "holds"]).row(vec!["|X| -> X_-1 quasi-iso".into(), yes_no(v.collapses())]);
    if let Some(e) = extra {
        table = table.row(vec!["extra degeneracy identities".into(), yes_no(e.holds)]);
    }
    let mut t = TaskReport::new("collapse", format!("B({weight}, {object})"))
        .with_check(v.collapses() && extra.is_none_or(|e| e.holds))
        .table(table);
    if !v.collapses() {
        t = t.table(Table::homology("cone homology", &v.quasi_iso.cone_homology));
    }
    if let Some(msg) = extra.and_then(|e| e.first_failure.clone()) {
        t = t.caveat(msg);
    }
    t.certificate = Some(CertificateReport::from(&v.certificate));
    Ok(t)
}
