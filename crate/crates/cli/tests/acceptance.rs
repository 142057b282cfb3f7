//! End-to-end acceptance suite: one pass/fail line per criterion.
//!
//! Run with `cargo test -p wcolim-cli --test acceptance`.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_integer::Integer;
use rand::Rng;
use wcolim_cli::{load_scenario, run_scenario, Report, RunOptions};
use wcolim_core::chain::{
    cokernel_complex, homology, homology_full, is_quasi_iso_in_window, mapping_cone, tensor, validate_complex,
    AbelianGroup, ChainComplex, ChainMap, Degree, GradedAbelianGroup, Matrix, SumLayout,
};
use wcolim_core::colim::{
    bar_compare, bar_resolution, bk_comparison, bk_hocolim, cofibrant_replacement, pcm_law, reedy_report,
    weighted_colimit, yoneda_map, BarConstruction, Cofibrancy,
};
use wcolim_core::corpus::{self, CorpusRng};
use wcolim_core::dwyerkan::{
    derived_counit_check, h0_retract_witness, verify_retract, CounitMode, DgFunctor, NonexistenceReason,
    RetractSearch, SearchBounds,
};
use wcolim_core::enriched::{ch_full_subcategory, free_dg_category, DgCategory, Diagram, FiniteCategory, Presheaf, PresheafMap};
use wcolim_core::simplicial::{collapse_check, dold_kan_gamma, dold_kan_normalize};

/// Wall-clock budget per criterion.
const TIME_LIMIT: Duration = Duration::from_secs(60);
const KUNNETH_PAIRS: usize = 100;
const YONEDA_HOSTS: usize = 20;
const MAIN_THEOREM_INSTANCES: usize = 50;
const BK_CATEGORIES: usize = 20;
const COLLAPSE_INSTANCES: usize = 30;
const COLLAPSE_TRUNCATION: usize = 2;
const CUBE_PAIRS: usize = 50;
const REEDY_BARS: usize = 20;
const CONNECTIVITY_INSTANCES: usize = 50;
const DOLD_KAN_INSTANCES: usize = 50;
/// Largest truncation tried before an instance counts as skipped.
const MAX_TRUNCATION: usize = 4;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------- 1. Künneth ----------

fn prime_powers(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Invariant factors of `⊕ ℤ/orders`, ascending, via primary decomposition.
fn invariant_factors(orders: &[u64]) -> Vec<u64> {
    let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for &o in orders {
        for (p, e) in prime_powers(o) {
            by_prime.entry(p).or_default().push(e);
        }
    }
    let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut factors = vec![1u64; len];
    for (p, mut es) in by_prime {
        es.sort_unstable_by(|a, b| b.cmp(a));
        for (k, e) in es.into_iter().enumerate() {
            factors[k] *= p.pow(e);
        }
    }
    factors.reverse();
    factors
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Group {
    free: usize,
    orders: Vec<u64>,
}

fn group(g: &AbelianGroup) -> Group {
    Group { free: g.free_rank, orders: g.torsion.iter().map(|t| u64::try_from(t).expect("small torsion")).collect() }
}

fn kunneth(a: &GradedAbelianGroup, b: &GradedAbelianGroup) -> BTreeMap<Degree, Group> {
    let mut out: BTreeMap<Degree, Group> = BTreeMap::new();
    for (&p, ga) in &a.groups {
        for (&q, gb) in &b.groups {
            let (x, y) = (group(ga), group(gb));
            let tensor = out.entry(p + q).or_default();
            tensor.free += x.free * y.free;
            tensor.orders.extend(x.orders.iter().flat_map(|&t| std::iter::repeat_n(t, y.free)));
            tensor.orders.extend(y.orders.iter().flat_map(|&t| std::iter::repeat_n(t, x.free)));
            for &s in &x.orders {
                tensor.orders.extend(y.orders.iter().map(|&t| s.gcd(&t)));
            }
            let tor = out.entry(p + q + 1).or_default();
            for &s in &x.orders {
                tor.orders.extend(y.orders.iter().map(|&t| s.gcd(&t)));
            }
        }
    }
    for g in out.values_mut() {
        g.orders = invariant_factors(&g.orders);
    }
    out.retain(|_, g| g.free > 0 || !g.orders.is_empty());
    out
}

fn criterion_1(rng: &mut CorpusRng) -> Outcome {
    let bad = ChainComplex::from_parts(&[(0, 1), (1, 1), (2, 1)], vec![
        (1, Matrix::from_i64(1, 1, &[1])),
        (2, Matrix::from_i64(1, 1, &[1])),
    ])
    .map_err(|e| e.to_string())?;
    ensure(validate_complex(&bad).is_err(), || "d² ≠ 0 went undetected".into())?;
    let mut torsion_seen = 0;
    for k in 0..KUNNETH_PAIRS {
        let random = |rng: &mut CorpusRng| {
            let lo = rng.random_range(-2..=1);
            let width = rng.random_range(0..=3);
            corpus::random_complex(rng, (lo, lo + width), 3)
        };
        let (a, b) = (random(rng), random(rng));
        ensure(validate_complex(&a).is_ok() && validate_complex(&b).is_ok(), || format!("pair {k}: d² ≠ 0"))?;
        let (ha, hb) = (homology_full(&a), homology_full(&b));
        let expected = kunneth(&ha, &hb);
        let h = homology_full(&tensor(&a, &b));
        let found: BTreeMap<Degree, Group> =
            h.groups.iter().filter(|g| !g.1.is_zero()).map(|(&n, g)| (n, group(g))).collect();
        ensure(found == expected, || format!("pair {k}: found {found:?}, Künneth gives {expected:?}"))?;
        torsion_seen += usize::from(found.values().any(|g| !g.orders.is_empty()));
    }
    Ok(format!("{KUNNETH_PAIRS} pairs exact, {torsion_seen} with torsion"))
}

// ---------- 2. Yoneda ----------

fn criterion_2(rng: &mut CorpusRng) -> Outcome {
    let mut checks = 0;
    for k in 0..YONEDA_HOSTS {
        let host = corpus::random_host(rng, 3);
        let h = &host.host;
        let n = h.object_count();
        for a in 0..n {
            for b in 0..n {
                let hom = h.hom(a, b);
                let in_range = hom.support().is_none_or(|(lo, hi)| lo >= -1 && hi <= 1);
                let ranks = hom.degrees().all(|d| hom.rank(d) <= 2);
                ensure(in_range && ranks, || format!("host {k}: hom({a},{b}) outside the corpus bounds"))?;
            }
        }
        let d = corpus::random_diagram(rng, &host);
        for c in 0..n {
            let w = Presheaf::representable(h.clone(), c);
            let colim = weighted_colimit(&w, &d).map_err(|e| e.to_string())?;
            let y = yoneda_map(&d, c, &colim);
            ensure(y.check().is_ok() && y.is_isomorphism(), || format!("host {k}, object {c}: not an isomorphism"))?;
            checks += 1;
        }
    }
    Ok(format!("{YONEDA_HOSTS} hosts, {checks} exact isomorphisms"))
}

// ---------- 3. bar decomposition ----------

fn criterion_3(rng: &mut CorpusRng) -> Outcome {
    let window = (-1, 3);
    let (mut passed, mut skipped, mut attempts) = (0, 0, 0);
    while passed < MAIN_THEOREM_INSTANCES {
        attempts += 1;
        ensure(attempts <= 10 * MAIN_THEOREM_INSTANCES, || format!("only {passed} usable instances"))?;
        let host = corpus::random_connective_host(rng, 3);
        let flat = host.host.flatness_report();
        if !flat.locally_flat || !flat.locally_star_flat {
            skipped += 1;
            continue;
        }
        let w = corpus::random_weight_cell(rng, &host.host, 3);
        let d = Arc::new(corpus::random_diagram(rng, &host));
        let bar = BarConstruction::new(w.presheaf().clone(), d.clone(), 0).map_err(|e| e.to_string())?;
        let Some(n) = bar.sound_truncation(window).filter(|&n| n <= MAX_TRUNCATION) else {
            skipped += 1;
            continue;
        };
        let r = bar_compare(w.presheaf().clone(), d, n, window, Cofibrancy::Certified, false).map_err(|e| e.to_string())?;
        ensure(r.certificate.is_sound(), || "certificate not sound".into())?;
        ensure(r.quasi_iso(), || format!("instance {attempts}: cone homology {}", r.verdict.cone_homology))?;
        passed += 1;
    }
    Ok(format!("{passed} quasi-isomorphisms, 0 failures, {skipped} skipped (no sound truncation <= {MAX_TRUNCATION} or not flat)"))
}

// ---------- 4. non-cofibrant contrast ----------

fn criterion_4() -> Outcome {
    let cat = FiniteCategory::span();
    let host = Arc::new(free_dg_category(&cat));
    let z = Arc::new(ChainComplex::z(0));
    let zero = Arc::new(ChainComplex::zero());
    let w = Arc::new(Presheaf::constant(host.clone(), &cat, z.clone()).map_err(|e| e.to_string())?);
    let vals = vec![z.clone(), zero.clone(), zero.clone()];
    let v = vals.clone();
    let d = Diagram::from_functor(host, &cat, vals, |f| {
        let a = cat.arrow_data(f);
        if a.source == a.target {
            ChainMap::identity(v[a.source].clone())
        } else {
            ChainMap::zero(v[a.source].clone(), v[a.target].clone())
        }
    })
    .map_err(|e| e.to_string())?;
    let d = Arc::new(d);
    let window = (-1, 3);
    let n = BarConstruction::new(w.clone(), d.clone(), 0)
        .map_err(|e| e.to_string())?
        .sound_truncation(window)
        .ok_or("no sound truncation")?;
    let r = bar_compare(w, d, n, window, Cofibrancy::Unknown, false).map_err(|e| e.to_string())?;
    // Mayer–Vietoris: the homotopy pushout of B ← A → C is the cone of
    // A → B ⊕ C, the strict one its cokernel.
    let bc = SumLayout::new(vec![zero.clone(), zero]);
    let f = ChainMap::zero(z, bc.complex().clone());
    let hocolim = homology(&mapping_cone(&f).complex, window);
    let colim = homology(&cokernel_complex(&f).map_err(|e| e.to_string())?.complex, window);
    ensure(r.colimit_homology == colim && colim.is_zero(), || format!("colimit homology {}", r.colimit_homology))?;
    ensure(r.realization_homology == hocolim, || format!("bar gives {}, oracle {hocolim}", r.realization_homology))?;
    ensure(r.realization_homology.get(1) == AbelianGroup::free(1), || "H_1 of the bar is not Z".into())?;
    Ok(format!("colimit homology 0, bar H_1 = Z, truncation {n} sound"))
}

// ---------- 5. BK vs bar ----------

fn criterion_5(rng: &mut CorpusRng) -> Outcome {
    let (truncation, window) = (3, (-1, 5));
    for k in 0..BK_CATEGORIES {
        let cat = corpus::random_loop_free_category(rng, 3);
        let host = Arc::new(free_dg_category(&cat));
        let d = Arc::new(corpus::random_connective_diagram(rng, &cat, &host));
        let constant = Presheaf::constant(host.clone(), &cat, Arc::new(ChainComplex::z(0))).map_err(|e| e.to_string())?;
        let q = cofibrant_replacement(Arc::new(constant), truncation, window).map_err(|e| e.to_string())?;
        ensure(q.is_sound() && q.is_pointwise_quasi_iso(), || format!("category {k}: replacement not sound"))?;
        let bk = bk_hocolim(&cat, &d, truncation, window).map_err(|e| e.to_string())?;
        ensure(bk.realization.certificate.is_sound(), || format!("category {k}: heuristic BK truncation"))?;
        let (map, _) = bk_comparison(&cat, &d, &bk, &q).map_err(|e| e.to_string())?;
        ensure(is_quasi_iso_in_window(&map, window).quasi_iso, || format!("category {k}: comparison not a quasi-iso"))?;
        let qb = q.presheaf.clone();
        let n = BarConstruction::new(qb.clone(), d.clone(), 0)
            .map_err(|e| e.to_string())?
            .sound_truncation(window)
            .ok_or_else(|| format!("category {k}: no sound bar truncation"))?;
        let b = bar_compare(qb, d, n, window, Cofibrancy::Replacement, false).map_err(|e| e.to_string())?;
        ensure(b.quasi_iso(), || format!("category {k}: bar comparison fails"))?;
        ensure(b.realization_homology == bk.homology(), || {
            format!("category {k}: bar {} vs BK {}", b.realization_homology, bk.homology())
        })?;
    }
    Ok(format!("{BK_CATEGORIES} loop-free categories agree"))
}

// ---------- 6. collapse ----------

fn criterion_6(rng: &mut CorpusRng) -> Outcome {
    let window = (-1, 2);
    let (mut identities, mut collapsed, mut skipped) = (0, 0, 0);
    for k in 0..COLLAPSE_INSTANCES {
        let connective = k % 2 == 0;
        let host = if connective { corpus::random_connective_host(rng, 2) } else { corpus::random_host(rng, 2) };
        let w = corpus::random_weight_cell(rng, &host.host, 2);
        let c = rng.random_range(0..host.host.object_count());
        let rep = Arc::new(Diagram::representable(host.host.clone(), c));
        let sound = BarConstruction::new(w.presheaf().clone(), rep, 0)
            .map_err(|e| e.to_string())?
            .sound_truncation(window)
            .filter(|&n| n <= MAX_TRUNCATION);
        let n = sound.unwrap_or(COLLAPSE_TRUNCATION);
        let x = bar_resolution(w.presheaf().clone(), c, n).map_err(|e| e.to_string())?;
        let v = collapse_check(&x, window, true).map_err(|e| e.to_string())?;
        let extra = v.extra_degeneracy.as_ref().ok_or_else(|| format!("instance {k}: no extra degeneracy"))?;
        ensure(extra.holds, || format!("instance {k}: {:?}", extra.first_failure))?;
        identities += 1;
        if sound.is_none() {
            skipped += 1;
            continue;
        }
        ensure(v.certificate.is_sound(), || format!("instance {k}: truncation {n} not sound"))?;
        ensure(v.collapses(), || format!("instance {k}: cone homology {}", v.quasi_iso.cone_homology))?;
        collapsed += 1;
    }
    ensure(collapsed >= COLLAPSE_INSTANCES / 3, || format!("only {collapsed} sound instances"))?;
    Ok(format!(
        "{identities} resolutions satisfy the extra-degeneracy identities, {collapsed} collapse with sound certificates, \
         {skipped} without a sound truncation <= {MAX_TRUNCATION} not asserted"
    ))
}

// ---------- 7. cubes and Reedy ----------

fn doubling_unit() -> Arc<DgCategory> {
    let z = Arc::new(ChainComplex::z(0));
    let t = z.clone();
    Arc::new(
        DgCategory::new(
            vec!["x".into()],
            vec![vec![z.clone()]],
            move |_, _, _, l| Ok(ChainMap::identity(l.complex().clone()).retarget(l.complex().clone(), t.clone())),
            vec![ChainMap::identity(z).scale(&2.into())],
        )
        .expect("endpoints"),
    )
}

fn criterion_7(rng: &mut CorpusRng) -> Outcome {
    for k in 0..CUBE_PAIRS {
        let (x, y) = corpus::random_cube_pair(rng);
        let law = pcm_law(&x, &y).map_err(|e| e.to_string())?;
        ensure(law.holds(), || format!("cube pair {k}: law fails"))?;
    }
    for k in 0..REEDY_BARS {
        let host = corpus::random_host(rng, 3);
        let w = corpus::random_weight_cell(rng, &host.host, 2);
        let d = Arc::new(corpus::random_diagram(rng, &host));
        let bar = BarConstruction::new(w.presheaf().clone(), d, 2).map_err(|e| e.to_string())?;
        let r = reedy_report(&bar).map_err(|e| e.to_string())?;
        ensure(r.all_cofibrations(), || format!("bar {k}: verdicts {:?}", r.verdicts()))?;
    }
    let host = doubling_unit();
    let w = Arc::new(Presheaf::representable(host.clone(), 0));
    let d = Arc::new(Diagram::representable(host, 0));
    let r = reedy_report(&BarConstruction::new(w, d, 2).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure(!r.all_cofibrations(), || "unit = 2 was not flagged".into())?;
    Ok(format!("{CUBE_PAIRS} pcm laws exact, {REEDY_BARS} bars Reedy cofibrant, unit = 2 flagged at {:?}", r.verdicts()))
}

// ---------- 8. connectivity ----------

fn criterion_8(rng: &mut CorpusRng) -> Outcome {
    let (truncation, window) = (3, (-3, 5));
    for k in 0..CONNECTIVITY_INSTANCES {
        let cat = corpus::random_loop_free_category(rng, 3);
        let host = Arc::new(free_dg_category(&cat));
        let d = corpus::random_connective_diagram(rng, &cat, &host);
        let bk = bk_hocolim(&cat, &d, truncation, window).map_err(|e| e.to_string())?;
        let h = bk.homology();
        ensure((window.0..0).all(|n| h.get(n).is_zero()), || format!("instance {k}: negative homology {h}"))?;
    }
    let cat = FiniteCategory::span();
    let host = Arc::new(free_dg_category(&cat));
    let v = Arc::new(ChainComplex::z(-1));
    let id = ChainMap::identity(v.clone());
    let d = Diagram::from_functor(host, &cat, vec![v; 3], |_| id.clone()).map_err(|e| e.to_string())?;
    let h = bk_hocolim(&cat, &d, truncation, window).map_err(|e| e.to_string())?.homology();
    ensure(h.get(-1) == AbelianGroup::free(1), || format!("Z[-1] example gives {h}"))?;
    Ok(format!("{CONNECTIVITY_INSTANCES} connective instances, Z[-1] example has H_-1 = Z"))
}

// ---------- 9. Dwyer–Kan ----------

fn ch(objects: &[(&str, ChainComplex)]) -> Arc<DgCategory> {
    Arc::new(ch_full_subcategory(objects.iter().map(|(n, c)| (n.to_string(), Arc::new(c.clone()))).collect()))
}

fn criterion_9() -> Outcome {
    // (a)
    let f = DgFunctor::inclusion(ch(&[("Z", ChainComplex::z(0)), ("Z2", ChainComplex::concentrated(0, 2))]), &[0])
        .map_err(|e| e.to_string())?;
    ensure(f.is_homotopically_ff().holds(), || "(a) not h.f.f.".into())?;
    for c in 0..2 {
        let s = h0_retract_witness(&f, c, SearchBounds::default());
        let w = s.witness().ok_or_else(|| format!("(a) no witness at {c}"))?;
        ensure(verify_retract(&f, w), || format!("(a) witness at {c} does not verify"))?;
        let r = derived_counit_check(&f, c, 2, (-1, 2)).map_err(|e| e.to_string())?;
        ensure(r.mode == CounitMode::Sound && r.passes(), || format!("(a) counit at {c}: {:?}", r.mode))?;
    }
    // (b)
    let host = ch(&[("Z", ChainComplex::z(0)), ("Z[1]", ChainComplex::z(1))]);
    let r1 = Arc::new(Presheaf::representable(host.clone(), 1));
    let r0 = Arc::new(Presheaf::representable(host.clone(), 0).shift(1));
    let comps = (0..2).map(|x| ChainMap::identity(r1.value(x).clone()).retarget(r1.value(x).clone(), r0.value(x).clone())).collect();
    let iso = PresheafMap::new(r1, r0, comps).map_err(|e| e.to_string())?;
    ensure(iso.check().is_ok() && iso.is_isomorphism(), || "(b) shift isomorphism fails".into())?;
    let f = DgFunctor::inclusion(host, &[0]).map_err(|e| e.to_string())?;
    let s = h0_retract_witness(&f, 1, SearchBounds::default());
    ensure(s == RetractSearch::CertifiedNonexistent(NonexistenceReason::VanishingGroups), || format!("(b) {s:?}"))?;
    let r = derived_counit_check(&f, 1, 2, (-2, 2)).map_err(|e| e.to_string())?;
    ensure(r.mode == CounitMode::HeuristicStable && r.passes(), || format!("(b) counit {:?}", r.mode))?;
    // (c)
    let source = Arc::new(free_dg_category(&FiniteCategory::discrete(2)));
    let target = ch(&[("Z", ChainComplex::z(0))]);
    let (s, t) = (source.clone(), target.clone());
    let f = DgFunctor::new(source, target, vec![0, 0], |a, b| {
        if a == b {
            ChainMap::identity(s.hom(a, b).clone()).retarget(s.hom(a, b).clone(), t.hom(0, 0).clone())
        } else {
            ChainMap::zero(s.hom(a, b).clone(), t.hom(0, 0).clone())
        }
    })
    .map_err(|e| e.to_string())?;
    let failing: Vec<(usize, usize)> = f.is_homotopically_ff().failures().map(|p| (p.source, p.target)).collect();
    ensure(failing == vec![(0, 1), (1, 0)], || format!("(c) failing pairs {failing:?}"))?;
    let r = derived_counit_check(&f, 0, 1, (-1, 2)).map_err(|e| e.to_string())?;
    ensure(r.failures() == vec![0], || format!("(c) counit failures {:?}", r.failures()))?;
    let cone = &r.verdicts[0].cone_homology;
    Ok(format!("(a) sound pass, (b) iso + nonexistence + heuristic-stable, (c) fails at pairs {failing:?}, counit cone {cone}"))
}

// ---------- 10. Dold–Kan ----------

fn criterion_10(rng: &mut CorpusRng) -> Outcome {
    for k in 0..DOLD_KAN_INSTANCES {
        let c = corpus::random_complex(rng, (0, 3), 3);
        let g = dold_kan_gamma(&c, 3).map_err(|e| e.to_string())?;
        ensure(g.validate().is_ok(), || format!("instance {k}: simplicial identities fail"))?;
        let n = dold_kan_normalize(&g).map_err(|e| e.to_string())?;
        ensure(n == c, || format!("instance {k}: round trip differs"))?;
    }
    Ok(format!("{DOLD_KAN_INSTANCES} round trips exact"))
}

// ---------- 11. determinism ----------

fn criterion_11() -> Outcome {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios");
    let mut files: Vec<_> = std::fs::read_dir(dir).map_err(|e| e.to_string())?.filter_map(|e| e.ok()).map(|e| e.path()).collect();
    files.sort();
    let run = |p: &str| -> Result<String, String> {
        let s = load_scenario(p).map_err(|e| e.to_string())?;
        match run_scenario(&s, &RunOptions::default()) {
            Ok(o) => {
                let json = o.report.to_json();
                let back: Report = serde_json::from_str(&json).map_err(|e| e.to_string())?;
                ensure(back == o.report, || format!("{p}: report does not round-trip"))?;
                Ok(json)
            }
            Err(e) => Ok(format!("error {}: {e}", e.exit_code())),
        }
    };
    for f in &files {
        let p = f.to_string_lossy();
        let (a, b) = (run(&p)?, run(&p)?);
        ensure(a == b, || format!("{p}: reports differ between runs"))?;
    }
    Ok(format!("{} scenarios byte-identical across two runs", files.len()))
}

fn main() -> ExitCode {
    let mut rng = corpus::rng(20_240_611);
    let criteria: Vec<(&str, Box<dyn FnOnce(&mut CorpusRng) -> Outcome>)> = vec![
        ("chain core: Kunneth oracle", Box::new(criterion_1)),
        ("Yoneda isomorphisms", Box::new(criterion_2)),
        ("bar decomposition on cofibrant weights", Box::new(criterion_3)),
        ("non-cofibrant span contrast", Box::new(|_| criterion_4())),
        ("Bousfield-Kan vs bar", Box::new(criterion_5)),
        ("extra-degeneracy collapse", Box::new(criterion_6)),
        ("pushout-corner law and Reedy cofibrancy", Box::new(criterion_7)),
        ("connectivity of hocolim", Box::new(criterion_8)),
        ("Dwyer-Kan suite", Box::new(|_| criterion_9())),
        ("Dold-Kan round trip", Box::new(criterion_10)),
        ("determinism of shipped scenarios", Box::new(|_| criterion_11())),
    ];
    let mut failures = 0;
    for (k, (name, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run(&mut rng);
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > TIME_LIMIT => Err(format!("{detail}, but took longer than {TIME_LIMIT:?}")),
            o => o,
        };
        let (status, detail) = match &outcome {
            Ok(d) => ("PASS", d.as_str()),
            Err(d) => ("FAIL", d.as_str()),
        };
        failures += usize::from(outcome.is_err());
        println!("criterion {:>2} [{status}] {name}: {detail} ({:.2} s)", k + 1, elapsed.as_secs_f64());
    }
    println!("{} of 11 criteria passed", 11 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
