//! Acceptance suite: runs every criterion and prints one PASS/FAIL line per
//! criterion. Exits non-zero if any fails.

use std::time::Instant;

use hpmon_core::bii::{b_count, delta0, Bii, TableRow};
use hpmon_core::gmn::{invariant_buckets, Gmn};
use hpmon_core::{ConjVerdict, Letter, Monoid, Side, Verdict, Word};
use rayon::prelude::*;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn sorted(mut v: Vec<Word>) -> Vec<Word> {
    v.sort();
    v.dedup();
    v
}

fn word_problem_bii(bii: &Bii) -> Outcome {
    let m = bii.monoid();
    let class = m.enumerate_class(&m.word("bcbcbc").map_err(e)?).map_err(e)?;
    for s in ["bbcbac", "cbabba", "acbabb"] {
        let w = m.word(s).map_err(e)?;
        ensure(class.contains(&w), || format!("{s} is not in the class of bcbcbc"))?;
    }
    Ok(format!("class of bcbcbc has {} spellings, all four present", class.size()))
}

fn cancellation(bii: &Bii, g: &Gmn) -> Outcome {
    let rb = bii.monoid().cancellation_probe(6).map_err(e)?;
    let rg = g.monoid().cancellation_probe(5).map_err(e)?;
    for (name, r) in [("B_ii", &rb), ("G_{2,2}", &rg)] {
        if let Some(v) = &r.violation {
            return Err(format!("{name}: {:?}·{:?}·{:?} vs {:?}", v.a, v.x, v.b, v.y));
        }
    }
    Ok(format!("B_ii |axb| <= 6: {} instances; G_(2,2) |axb| <= 5: {} instances; 0 violations", rb.checked, rg.checked))
}

fn reduction_lemmas(bii: &Bii, g: &Gmn) -> Outcome {
    // B_ii: every pair of spellings with distinct first letters.
    let m = bii.monoid();
    let mut count_b = 0u64;
    for n in 1..=6 {
        for class in m.all_classes(n).map_err(e)? {
            for a in class.members() {
                for b in class.members().iter().filter(|b| b[0] < a[0]) {
                    let r = bii.reduce(a[0], b[0], &a[1..], &b[1..]).map_err(e)?;
                    let ok = m.words_equal(&r.x_prefix.cat(&r.z), &a[1..]).map_err(e)?
                        && m.words_equal(&r.y_prefix.cat(&r.z), &b[1..]).map_err(e)?;
                    ensure(ok, || format!("bad decomposition for {} = {}", m.fmt(a), m.fmt(b)))?;
                    count_b += 1;
                }
            }
        }
    }
    // G_{2,2}: v·X ≐ p·Y with p a letter of the other family or a nonempty
    // word of one family.
    let m = g.monoid();
    let mut count_g = 0u64;
    for n in 1..=6 {
        for class in m.all_classes(n).map_err(e)? {
            for a in class.members() {
                for b in class.members().iter().filter(|b| b[0] != a[0]) {
                    let fam = g.part_of(b[0]);
                    for k in 1..=b.len() {
                        if fam.is_none() || b[..k].iter().any(|&z| g.part_of(z) != fam) {
                            break;
                        }
                        if k > 1 && g.part_of(a[0]).is_some_and(|f| Some(f) != fam) {
                            break;
                        }
                        let r = g.reduce(a[0], &a[1..], &b[..k], &b[k..]).map_err(e)?;
                        let ok = m.words_equal(&r.x_prefix.cat(&r.z), &a[1..]).map_err(e)?
                            && m.words_equal(&r.y_prefix.cat(&r.z), &b[k..]).map_err(e)?;
                        ensure(ok, || format!("bad decomposition for {} = {}", m.fmt(a), m.fmt(b)))?;
                        count_g += 1;
                    }
                }
            }
        }
    }
    Ok(format!("B_ii: {count_b} equations; G_(2,2): {count_g} equations; all decomposed"))
}

fn delta0_divides(bii: &Bii) -> Outcome {
    let m = bii.monoid();
    let d = delta0();
    let mut count = 0;
    for n in 4..=9 {
        for class in m.all_classes(n).map_err(e)? {
            let w = class.canonical();
            if b_count(w) < 4 {
                continue;
            }
            count += 1;
            let both = m.is_divisor(Side::Left, &d, w).map_err(e)? && m.is_divisor(Side::Right, &d, w).map_err(e)?;
            ensure(both, || format!("bbb does not divide {} on both sides", m.fmt(w)))?;
        }
    }
    Ok(format!("{count} classes with >= 4 b's, all divisible by bbb on both sides"))
}

fn bii_normal_forms(bii: &Bii) -> Outcome {
    let m = bii.monoid();
    let mut seen = std::collections::HashMap::new();
    let mut count = 0;
    for n in 0..=8 {
        for class in m.all_classes(n).map_err(e)? {
            let w = class.canonical();
            let nf = bii.normal_form(w).map_err(e)?;
            ensure(m.words_equal(&nf.word(), w).map_err(e)?, || format!("{} does not reassemble", m.fmt(w)))?;
            if let Some(prev) = seen.insert(nf.word(), w.clone()) {
                return Err(format!("{} and {} share a normal form", m.fmt(&prev), m.fmt(w)));
            }
            count += 1;
        }
    }
    Ok(format!("{count} classes of length <= 8, forms exist, are unique and reassemble"))
}

fn trans_min_tables(bii: &Bii) -> Outcome {
    let m = bii.monoid();
    let rows = TableRow::printed_rows(1);
    for row in &rows {
        let w = row.representative(1);
        let brute = sorted(m.trans_min_bounded(&w, 7).map_err(e)?.value.into_iter().map(|t| t.element).collect());
        let fam = bii.trans_min_table(&w).map_err(e)?;
        ensure(bii.table_row(&w).map_err(e)? == *row, || format!("{} lands in another row", m.fmt(&w)))?;
        let table = sorted(fam.instances_up_to_len(7).iter().map(|a| m.canonical(a)).collect::<Result<_, _>>().map_err(e)?);
        ensure(table == brute, || {
            format!("row {row}, w = {}: table {:?} vs brute force {:?}", m.fmt(&w), fmt_all(m, &table), fmt_all(m, &brute))
        })?;
    }
    Ok(format!("{} rows, each representative matches trans_min_bounded(w, 7)", rows.len()))
}

fn fmt_all(m: &Monoid, v: &[Word]) -> Vec<String> {
    v.iter().map(|w| m.fmt(w)).collect()
}

fn garside_census(g: &Gmn) -> Outcome {
    let m = g.monoid();
    let d = g.delta();
    ensure(m.fundamental_cert(d).map_err(e)?.is_some(), || "Δ has no fundamental certificate".into())?;
    ensure(m.garside_check(d).map_err(e)?.is_garside(), || "Δ is not Garside".into())?;
    let minimal = m.minimal_fundamental_check(d).map_err(e)?;
    ensure(minimal == Verdict::Holds, || format!("minimal fundamental check: {minimal:?}"))?;
    let atoms: Vec<Word> = m.atoms().into_iter().map(Word::letter).collect();
    let want = vec![m.canonical(d).map_err(e)?];
    for side in [Side::Right, Side::Left] {
        let got = sorted(m.mcm_bounded(&atoms, side, 5).map_err(e)?.value);
        ensure(got == want, || format!("{side:?} mcm of the atoms is {:?}", fmt_all(m, &got)))?;
    }
    Ok("Δ fundamental, Garside and minimal; mcm of the atoms is {Δ} on both sides".into())
}

fn fundamental_vs_garside(bii: &Bii, g: &Gmn) -> Outcome {
    let mut report = Vec::new();
    for (name, m) in [("B_ii", bii.monoid()), ("G_(2,2)", g.monoid())] {
        let classes = m.classes_up_to(6).map_err(e)?;
        let results: Vec<Result<(Word, bool, bool), String>> = classes
            .par_iter()
            .filter(|c| !c.canonical().is_empty())
            .map(|c| {
                let w = c.canonical();
                let f = m.is_fundamental(w).map_err(e)?;
                let gs = m.garside_check(w).map_err(e)?.is_garside();
                Ok((w.clone(), f, gs))
            })
            .collect();
        let mut agree = 0;
        for r in results {
            let (w, f, gs) = r?;
            ensure(f == gs, || format!("{name}: {} fundamental={f} garside={gs}", m.fmt(&w)))?;
            agree += 1;
        }
        report.push(format!("{name}: {agree} candidates agree"));
    }
    let m = bii.monoid();
    for (s, want) in [("bbb", false), ("bcbcbc", true)] {
        let w = m.word(s).map_err(e)?;
        ensure(m.is_fundamental(&w).map_err(e)? == want, || format!("{s} fundamental != {want}"))?;
        ensure(m.garside_check(&w).map_err(e)?.is_garside() == want, || format!("{s} Garside != {want}"))?;
    }
    ensure(g.monoid().garside_check(g.delta()).map_err(e)?.is_garside(), || "Δ not Garside".into())?;
    Ok(report.join("; "))
}

fn gmn_conjugacy(g: &Gmn) -> Outcome {
    // The oracle at transit bound |u| + 2|Δ| is sandwiched: orbit elements
    // reached by a checked conjugator within the bound are in it, and it
    // lies inside the classes sharing u's conjugacy invariants. When the two
    // coincide they pin the oracle set exactly.
    let m = g.monoid();
    let reach = 2 * g.delta().len();
    let mut pairs = 0u64;
    let mut spot = 0;
    for n in 0..=4 {
        let buckets = invariant_buckets(g, n).map_err(e)?;
        let classes = m.all_classes(n).map_err(e)?;
        let results: Vec<Result<u64, String>> = classes
            .par_iter()
            .map(|c| {
                let u = c.canonical();
                let (orbit, reports) = g.certified_orbit(u).map_err(e)?;
                ensure(reports.iter().all(|r| r.holds()), || format!("property P fails in the orbit of {}", m.fmt(u)))?;
                for entry in &orbit.entries {
                    let a = &entry.conjugator;
                    let ok = a.len() <= n + reach
                        && m.words_equal(&a.cat(&entry.element), &u.cat(a)).map_err(e)?;
                    ensure(ok, || format!("bad conjugator {} for {}", m.fmt(a), m.fmt(u)))?;
                }
                let counts: Vec<usize> = (0..m.rank() as Letter).map(|x| u.count(x)).collect();
                let bucket = sorted(buckets[&(g.free_invariant(u), counts)].clone());
                let oracle = sorted(orbit.members().to_vec());
                ensure(oracle == bucket, || format!("orbit of {} is smaller than its invariant bucket", m.fmt(u)))?;
                let mut local = 0;
                for v in &classes {
                    let v = v.canonical();
                    let verdict = g.conjugate(u, v).map_err(e)?;
                    let expected = oracle.contains(v);
                    let definitive = matches!(verdict, ConjVerdict::Yes { .. } | ConjVerdict::No { .. });
                    ensure(definitive && verdict.is_yes() == expected, || {
                        format!("{} vs {}: {verdict:?}, oracle {expected}", m.fmt(u), m.fmt(v))
                    })?;
                    local += 1;
                }
                Ok(local)
            })
            .collect();
        for r in results {
            pairs += r?;
        }
        // Independent spot check with the brute-force oracle at bound 5.
        if n <= 3 {
            for c in &classes {
                let u = c.canonical();
                let brute = m.conj_oracle_bounded(u, 5).map_err(e)?.value;
                let orbit = m.orbit_closure(u, g.delta()).map_err(e)?;
                for v in brute {
                    ensure(orbit.entry(&v).is_some(), || format!("brute force conjugate {} missing", m.fmt(&v)))?;
                }
                spot += 1;
            }
        }
    }
    Ok(format!("{pairs} ordered pairs agree; {spot} classes spot-checked against brute force at bound 5"))
}

fn gmn_property_p(g: &Gmn) -> Outcome {
    let m = g.monoid();
    let classes = m.classes_up_to(5).map_err(e)?;
    let results: Vec<Result<(), String>> = classes
        .par_iter()
        .map(|c| {
            let w = c.canonical();
            let rep = g.property_p(w).map_err(e)?;
            ensure(rep.holds() && !rep.witnesses.is_empty(), || {
                format!("{}: uncovered {:?}, rejected {}", m.fmt(w), fmt_all(m, &rep.uncovered), rep.rejected.len())
            })?;
            let probe = m.property_p_probe(w, g.delta(), 6).map_err(e)?;
            ensure(probe.confirmed(), || format!("{}: probe found {probe:?}", m.fmt(w)))?;
            Ok(())
        })
        .collect();
    let mut count = 0;
    for r in results {
        r?;
        count += 1;
    }
    Ok(format!("{count} classes of length <= 5 certified; probe at bound 6 confirms all"))
}

fn bii_conjugacy(bii: &Bii) -> Outcome {
    let m = bii.monoid();
    let classes = m.classes_up_to(5).map_err(e)?;
    let oracles: Vec<Result<Vec<Word>, String>> =
        classes.par_iter().map(|c| m.conj_oracle_bounded(c.canonical(), 7).map(|b| b.value).map_err(e)).collect();
    let mut pairs = 0;
    for (c, oracle) in classes.iter().zip(oracles) {
        let oracle = oracle?;
        let u = c.canonical();
        for d in classes.iter().filter(|d| d.word_len() == c.word_len()) {
            let v = d.canonical();
            let verdict = bii.conjugate(u, v).map_err(e)?;
            ensure(verdict.is_yes() == oracle.contains(v), || format!("{} vs {}: {verdict:?}", m.fmt(u), m.fmt(v)))?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} same-length pairs of length <= 5 agree with the oracle at bound 7"))
}

fn group_bridge(g: &Gmn) -> Outcome {
    let m = g.monoid();
    let p = m.presentation();
    let cert = m.fundamental_cert(g.delta()).map_err(e)?.ok_or("Δ has no certificate")?;
    let gw = |s: &str| p.parse_group_word(s).map_err(e);
    ensure(m.group_equal(&gw("s s^-1")?, &gw("e")?, &cert).map_err(e)?, || "s·s^-1 != e".into())?;
    let t1 = m.word("t1").map_err(e)?;
    let orbit = m.orbit_closure(&t1, g.delta()).map_err(e)?;
    for v in orbit.members() {
        let target: Vec<_> = v.iter().map(|&x| (x, false)).collect();
        let verdict = m.group_conjugate(&gw("s^-1 t1 s")?, &target, &cert, true).map_err(e)?;
        ensure(verdict.is_yes(), || format!("s^-1 t1 s vs {}: {verdict:?}", m.fmt(v)))?;
    }
    for (a, b) in [("t1", "u1"), ("s", "t1"), ("t1 t1", "u1 s")] {
        let verdict = m.group_conjugate(&gw(a)?, &gw(b)?, &cert, true).map_err(e)?;
        ensure(matches!(verdict, ConjVerdict::No { .. }), || format!("{a} vs {b}: {verdict:?}"))?;
    }
    Ok(format!("s·s^-1 = e; s^-1 t1 s conjugate to all {} orbit members of t1; separated pairs say no", orbit.members().len()))
}

fn lcm_failure(bii: &Bii) -> Outcome {
    let m = bii.monoid();
    let f = m.lcm_failure_witness(Side::Right, 6).map_err(e)?.ok_or("no witness found")?;
    let pair = (m.fmt(&[f.pair.0]), m.fmt(&[f.pair.1]));
    ensure(pair == ("b".into(), "c".into()), || format!("witness pair is {pair:?}"))?;
    ensure(f.minimal.len() >= 2, || "fewer than two minimal multiples".into())?;
    Ok(format!("(b, c) has {} incomparable minimal common right multiples: {:?}", f.minimal.len(), fmt_all(m, &f.minimal)))
}

fn main() {
    let bii = Bii::new();
    let g = Gmn::new(2, 2).expect("G_(2,2) builds");
    let criteria: Vec<Criterion> = vec![
        ("word problem, B_ii", Box::new(|| word_problem_bii(&bii))),
        ("cancellativity probes", Box::new(|| cancellation(&bii, &g))),
        ("reduction lemma decompositions", Box::new(|| reduction_lemmas(&bii, &g))),
        ("bbb divides b-count >= 4", Box::new(|| delta0_divides(&bii))),
        ("B_ii normal form", Box::new(|| bii_normal_forms(&bii))),
        ("B_ii minimal transit tables", Box::new(|| trans_min_tables(&bii))),
        ("Garside census, G_(2,2)", Box::new(|| garside_census(&g))),
        ("fundamental <=> Garside", Box::new(|| fundamental_vs_garside(&bii, &g))),
        ("G_(2,2) conjugacy vs oracle", Box::new(|| gmn_conjugacy(&g))),
        ("property P, G_(2,2)", Box::new(|| gmn_property_p(&g))),
        ("B_ii conjugacy vs oracle", Box::new(|| bii_conjugacy(&bii))),
        ("group bridge", Box::new(|| group_bridge(&g))),
        ("LCM failure witness", Box::new(|| lcm_failure(&bii))),
    ];
    let filter = std::env::args().nth(1).and_then(|a| a.parse::<usize>().ok());
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = i + 1;
        if filter.is_some_and(|f| f != id) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {id:>2} {name}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {id:>2} {name}: {detail} ({secs:.1}s)");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
