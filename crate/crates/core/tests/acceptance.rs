//! One PASS/FAIL line per acceptance criterion.
//!
//! The process exits non-zero on any failure not listed in `KNOWN_FAILURES`.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::Arc;

use chordgroups::analysis::{analyze, detect_flip_flop, verify_grid_network};
use chordgroups::bijection::{conjugate_perm, pcseg_modification_bijection, table2_bijection, OrbitBijection, Table2};
use chordgroups::catalog::{catalog, parse_chord_list, ChordFamily};
use chordgroups::config::presets;
use chordgroups::expr::EvalContext;
use chordgroups::extension::{
    contextual_inversion_subgroup, dual_extension_anti, extend_group, fbar_two_sets, generalized_contextual_instance,
    ExtensionKind, ANTI_HYPOTHESES,
};
use chordgroups::perm::{
    centralizer_simply_transitive, commutes_elementwise, is_simply_transitive, ses_check, GeneratedGroup, Perm, Universe,
};
use chordgroups::pitchclass::{ti_orbit, Form, Modulus, OrbitSet, PcSeg};
use chordgroups::scales::{
    diatonic_sevenths_universe, fbar_flat_perm, fifthfall_step, flattening_cycle, generated_scales_chain, phi_perm,
    phi_universe, FifthFall, JParams, LetterState,
};
use chordgroups::transforms::{atom_perm, Atom};
use chordgroups::voicing::{
    enumerate_soprano_bass_family, harvest_pairs, pc_set, trace, Voice, OMNIBUS_SCHEDULE, OMNIBUS_START,
    PUBLISHED_FAMILY_COUNT, U_ALTO, U_SOPR, U_TENOR,
};

/// Criteria whose published value is not reproduced, with the reason.
const KNOWN_FAILURES: &[(usize, &str)] = &[(
    15,
    "no stated constraint set yields 36 soprano/bass matrices; all U_sopr pairs from one traced cycle give 324",
)];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn e<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|x| x.to_string())
}

fn seg(v: &[i64]) -> PcSeg {
    PcSeg::chromatic(v)
}

fn z7(v: &[i64]) -> PcSeg {
    PcSeg::new(Modulus::DIATONIC, v).expect("nonempty")
}

fn single(f: ChordFamily) -> Arc<Universe> {
    Arc::new(Universe::single(catalog().set(f).clone()))
}

fn triads() -> EvalContext {
    EvalContext::new(single(ChordFamily::Triads))
}

fn set_of(g: &GeneratedGroup) -> BTreeSet<Vec<u32>> {
    g.elements().iter().map(|p| p.images().to_vec()).collect()
}

fn rows(text: &str) -> Result<Vec<Vec<PcSeg>>, String> {
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| e(parse_chord_list(l, Modulus::CHROMATIC)))
        .collect()
}

fn c1() -> Outcome {
    let ti = e(triads().group(&["T1", "I0"]))?;
    ensure!(ti.order() == 24, "order {}", ti.order());
    ensure!(is_simply_transitive(&ti), "not simply transitive");
    Ok("|<T1,I0>| = 24, simply transitive".into())
}

fn c2() -> Outcome {
    let ctx = triads();
    let lr = e(ctx.group(&["L", "R"]))?;
    ensure!(lr.order() == 24, "|<L,R>| = {}", lr.order());
    ensure!(e(ctx.perm("P"))? == e(ctx.perm("R*(L*R)^3"))?, "P != R(LR)^3");
    let a = e(ctx.group(&["Q1", "P"]))?;
    let b = e(ctx.group(&["L*R", "R"]))?;
    ensure!(set_of(&a) == set_of(&b), "<Q1,P> != <LR,R>");
    Ok("|<L,R>| = 24, P = R(LR)^3, <Q1,P> = <LR,R>".into())
}

fn c3() -> Outcome {
    let ctx = triads();
    let ti = e(ctx.group(&["T1", "I0"]))?;
    let lr = e(ctx.group(&["L", "R"]))?;
    let cz = e(centralizer_simply_transitive(&ti))?;
    ensure!(set_of(&cz) == set_of(&lr), "centralizer differs from <L,R>");
    ensure!(commutes_elementwise(&ti, &lr), "TI and PLR do not commute");
    ensure!(is_simply_transitive(&ti) && is_simply_transitive(&lr), "not both simply transitive");
    Ok("C(TI) = <L,R>; dual pair".into())
}

fn c4() -> Outcome {
    let sys = e(presets::triads_dom7())?;
    let (g, h) = (&sys.ext.gbar, sys.ext.hbar.as_ref().ok_or("no dual")?);
    ensure!(g.order() == 48 && h.order() == 48, "orders {} {}", g.order(), h.order());
    ensure!(is_simply_transitive(g) && is_simply_transitive(h), "not simply transitive");
    ensure!(commutes_elementwise(g, h), "do not commute");
    let f = sys.fbar.perm();
    ensure!(!f.is_identity() && f.pow(2).is_identity(), "fbar^2 != id");
    ensure!(sys.fbar.order() == 2 && ses_check(g, &sys.ext.g, f), "quotient check failed");
    Ok("|Gbar| = |Hbar| = 48, commute, fbar^2 = id, quotient 2".into())
}

fn conjugated_plr() -> Result<(Arc<Universe>, [Perm; 3]), String> {
    let f = e(table2_bijection(Table2::Dom7Tr))?;
    let t = single(ChordFamily::Triads);
    let mut out = Vec::new();
    for a in [Atom::P, Atom::L, Atom::R] {
        out.push(e(conjugate_perm(&f, &e(atom_perm(a, &t))?, &t))?);
    }
    Ok((single(ChordFamily::DomHalfDim), out.try_into().expect("three")))
}

fn c5() -> Outcome {
    let (u, plr) = conjugated_plr()?;
    for (p, (i, j)) in plr.iter().zip([(1, 3), (2, 3), (1, 2)]) {
        ensure!(*p == e(atom_perm(Atom::K(i, j), &u))?, "conjugate differs from K{i},{j}");
        for x in 0..u.len() {
            if u.block(0).form_of(x) != Some(Form::T) {
                continue;
            }
            let a: BTreeSet<u32> = u.seg(x).entries().iter().copied().collect();
            let b: BTreeSet<u32> = u.seg(p.apply(x)).entries().iter().copied().collect();
            let ma: Vec<u32> = a.difference(&b).copied().collect();
            let mb: Vec<u32> = b.difference(&a).copied().collect();
            let semi = |x: u32, y: u32| (x + 1) % 12 == y || (y + 1) % 12 == x;
            let ok = a.intersection(&b).count() == 2
                && ma.len() == 2
                && mb.len() == 2
                && ((semi(ma[0], mb[0]) && semi(ma[1], mb[1])) || (semi(ma[0], mb[1]) && semi(ma[1], mb[0])));
            ensure!(ok, "K{i},{j} on {} is not 2 fixed + 2 semitones", u.seg(x));
        }
    }
    Ok("fPf^-1 = K1,3, fLf^-1 = K2,3, fRf^-1 = K1,2; 2 common tones, 2 semitone moves".into())
}

fn c6() -> Outcome {
    let (u, [p, l, r]) = conjugated_plr()?;
    let k14 = e(atom_perm(Atom::K(1, 4), &u))?;
    let q = |i| atom_perm(Atom::Q(i), &u).map_err(|x| x.to_string());
    ensure!(k14 == &p * &q(3)?, "K1,4 != fPf^-1 Q3");
    ensure!(k14 == &l * &q(11)?, "K1,4 != fLf^-1 Q11");
    ensure!(k14 == &r * &q(6)?, "K1,4 != fRf^-1 Q6");
    Ok("K1,4 = fPf^-1 Q3 = fLf^-1 Q11 = fRf^-1 Q6".into())
}

fn c7() -> Outcome {
    let mut found = Vec::new();
    for (g, expect) in [(&[0, 4, 7][..], true), (&[0, 4, 7, 10], true), (&[1, 4, 7], false), (&[1, 4, 7, 10], false)] {
        let k = e(contextual_inversion_subgroup(&ti_orbit(&seg(g))))?;
        let has = k.contains(&e(atom_perm(Atom::Q(1), k.universe()))?);
        ensure!(has == expect, "{} contains Q1: {has}", seg(g));
        found.push(format!("{}:{has}", seg(g)));
    }
    Ok(found.join(" "))
}

fn c8() -> Outcome {
    let four = e(presets::four_set())?;
    let h4 = four.ext.hbar.as_ref().ok_or("no dual")?;
    ensure!(four.ext.gbar.order() == 96 && h4.order() == 96, "4-set orders {} {}", four.ext.gbar.order(), h4.order());
    let five = e(presets::five_class())?;
    let (g, h) = (&five.ext.gbar, five.ext.hbar.as_ref().ok_or("no dual")?);
    ensure!(g.order() == 120 && h.order() == 120, "5-class orders {} {}", g.order(), h.order());
    ensure!(five.fbar.order() == 5, "fbar order {}", five.fbar.order());
    ensure!(commutes_elementwise(g, h) && is_simply_transitive(g) && is_simply_transitive(h), "5-class not dual");
    let u = five.universe();
    let img = u.seg(five.fbar.perm().apply(e(u.require(&seg(&[7, 3, 0])))?));
    ensure!(*img == seg(&[7, 3, 0, 8]), "fbar<7,3,0> = {img}");
    Ok("4-set 96/96; 5-class 120/120, fbar order 5".into())
}

fn c9() -> Outcome {
    let sys = e(presets::triads_dom7())?;
    for (name, text, mid) in [
        ("omnibus", include_str!("../../../data/progressions/omnibus.txt"), "Q9"),
        ("inverted omnibus", include_str!("../../../data/progressions/omnibus_inverted.txt"), "Q3"),
    ] {
        let r = rows(text)?;
        let grid = e(verify_grid_network(&r, &sys.row_analyzer(), &sys.column_analyzer()))?;
        ensure!(grid.report.passed(), "{name}: {}", grid.report);
        let squares = grid.report.clauses.iter().find(|c| c.name == "all squares commute").map(|c| c.detail.as_str());
        ensure!(squares == Some("9 squares"), "{name}: {squares:?}");
        let u = sys.universe();
        let a = e(u.require(&r[0][0]))?;
        let end = grid.network.edges[..12].iter().fold(a, |x, ed| ed.perm.apply(x));
        ensure!(end == a, "{name}: 12-step composite moves the start");
        let labels: Vec<&str> = grid.network.edges[..12].iter().map(|ed| ed.label.as_str()).collect();
        ensure!(labels.chunks(3).all(|c| c == ["fbar*Lbar", mid, "fbar*Lbar"]), "{name}: labels {labels:?}");
    }
    Ok("9 squares commute in both grids; 12-step composites fix the start".into())
}

fn c10() -> Outcome {
    let sys = e(presets::triads_dom7())?;
    let chain = |t: &str| e(parse_chord_list(t, Modulus::CHROMATIC));
    let rm = chain(include_str!("../../../data/progressions/round_midnight.txt"))?;
    let net = e(analyze(&rm, &sys.row_analyzer()))?;
    ensure!(net.labels() == ["K3,4", "Q7*K1,4", "K3,4", "Q7*K1,4", "K3,4"], "round midnight {:?}", net.labels());
    let ff = detect_flip_flop(&net);
    ensure!(
        ff.len() == 1 && ff[0].pair == ("K3,4".to_string(), "Q7*K1,4".to_string()),
        "flip-flop {:?}",
        ff.iter().map(|f| f.pair.clone()).collect::<Vec<_>>()
    );
    let v = chain(include_str!("../../../data/progressions/virginia.txt"))?;
    let s = chain(include_str!("../../../data/progressions/stella.txt"))?;
    let expect = ["K3,4", "Q7*K1,4", "K3,4", "Q7*K1,4", "K3,4", "Q5*fbar"];
    for (n, c) in [("virginia", &v), ("stella", &s)] {
        let l = e(analyze(c, &sys.row_analyzer()))?;
        ensure!(l.labels() == expect, "{n} {:?}", l.labels());
    }
    let grid = e(verify_grid_network(&[v.clone(), s], &sys.row_analyzer(), &sys.column_analyzer()))?;
    ensure!(grid.report.passed(), "{}", grid.report);
    let t = e(sys.resolve_g("T-7"))?;
    ensure!(grid.network.edges.iter().filter(|ed| ed.to - ed.from == v.len()).all(|ed| ed.perm == t), "rows not T-7");
    Ok("flip-flop K3,4 / Q7*K1,4; Virginia and Stella related by T-7".into())
}

fn c11() -> Outcome {
    let u = Arc::new(Universe::single(ti_orbit(&seg(&[0, 4, 10]))));
    let k = |i, j| atom_perm(Atom::K(i, j), &u).map_err(|x| x.to_string());
    ensure!(&k(2, 3)? * &k(1, 2)? == e(atom_perm(Atom::Q(2), &u))?, "K2,3 K1,2 != Q2");
    let m = e(pcseg_modification_bijection(&seg(&[0, 4, 7]), 3, 10))?;
    let t = single(ChordFamily::Triads);
    let c = e(conjugate_perm(&m, &e(atom_perm(Atom::K(2, 3), &t))?, &t))?;
    let target = m.target();
    ensure!(target.len() == 24, "target size {}", target.len());
    for (i, s) in target.elements().iter().enumerate() {
        let out = target.get(c.apply(i));
        ensure!(s.entries().iter().all(|pc| !out.entries().contains(pc)), "{s} -> {out} shares a pc");
    }
    Ok("K2,3 K1,2 = Q2; conjugated K2,3 shares no pc on all 24 inputs".into())
}

fn c12() -> Outcome {
    let s1 = OrbitSet::t_orbit(&seg(&[0, 4, 7]), Form::T);
    let s2 = OrbitSet::t_orbit(&seg(&[7, 3, 0]), Form::I);
    let u = Arc::new(e(Universe::new(vec![s1.clone(), s2.clone()]))?);
    let ctx = EvalContext::new(u.clone());
    let t1 = e(ctx.group(&["T1"]))?;
    let i0 = e(OrbitBijection::from_fn("I0", s1.clone(), s2.clone(), |s| s.invert(0)))?;
    let fbar = e(fbar_two_sets(&i0))?;
    let ext = e(extend_group(&t1, &fbar, ExtensionKind::AntiEquivariant))?;
    ensure!(ext.gbar.order() == 24, "rebuilt order {}", ext.gbar.order());
    let f = fbar.perm();
    for n in 0..12 {
        let tn = e(atom_perm(Atom::T(n), &u))?;
        ensure!(&(f * &tn) * &f.inverse() == e(atom_perm(Atom::T(-n), &u))?, "fbar T{n} fbar^-1 != T{}", -n);
    }
    for (h, k, (i, j)) in [("L*R", "R", (1, 2)), ("Q1", "P", (1, 3))] {
        let hg = e(ctx.group(&[h]))?;
        let kb = e(OrbitBijection::from_fn(k, s1.clone(), s2.clone(), |s| {
            s.invert(i64::from(s.at(i)) + i64::from(s.at(j)))
        }))?;
        let res = e(dual_extension_anti(&t1, &i0, &hg, &kb))?;
        for hyp in ANTI_HYPOTHESES {
            ensure!(res.report.clauses.iter().any(|c| c.name == hyp && c.passed), "({h}, {k}): {hyp}");
        }
        let hbar = res.hbar.as_ref().ok_or("no dual")?;
        ensure!(commutes_elementwise(&res.gbar, hbar), "({h}, {k}) not dual");
    }
    let gc = e(generalized_contextual_instance(&seg(&[0, 4, 7, 10])))?;
    ensure!(gc.report.passed() && gc.gbar.order() == 24, "generalized contextual failed");
    Ok("<T1> + I0 semidirect 24; both anti duals verify 5 hypotheses; <0,4,7,10> rebuilt".into())
}

fn c13() -> Outcome {
    let j = e(JParams::new(7, 4, 3))?;
    ensure!(j.chord(&[0, 1, 2, 3]) == [0, 2, 4, 6], "J = {:?}", j.chord(&[0, 1, 2, 3]));
    let u = e(phi_universe())?;
    let phi = e(phi_perm(&u))?;
    ensure!(phi.order() == 28 && phi.pow(2).order() == 14, "phi orders {} {}", phi.order(), phi.pow(2).order());
    let f = phi.pow(14);
    for n in 0..7 {
        for (a, b) in [
            ([n, n + 2, n + 4, n + 6], [n + 4, n + 6, n, n + 2]),
            ([n, n + 2, n + 4, n + 5], [n + 4, n + 5, n, n + 2]),
        ] {
            ensure!(*u.seg(f.apply(e(u.require(&z7(&a)))?)) == z7(&b), "phi^14 on {}", z7(&a));
        }
    }
    let du = e(diatonic_sevenths_universe())?;
    let fl = e(fbar_flat_perm(&du))?;
    let mut seen = HashSet::new();
    let mut x = 0;
    while seen.insert(x) {
        x = fl.apply(x);
    }
    ensure!(fl.order() == 48 && seen.len() == 48, "flat order {}, orbit {}", fl.order(), seen.len());
    let steps = flattening_cycle(LetterState::new());
    let productive = steps.iter().filter(|s| s.productive).count();
    ensure!(steps.len() == 84 && productive == 48, "cycle {} / {productive}", steps.len());
    Ok("J = (0,2,4,6); phi 28, phi^2 14; flat order 48 on 48; cycle 84 with 48 productive".into())
}

fn c14() -> Outcome {
    for n in 0..7 {
        let y = z7(&[n, n + 2, n + 4, n + 6]);
        let k = Atom::K(1, 2).apply(&y, Some(Form::T)).ok_or("K undefined")?;
        let q = Atom::Q(-4).apply(&y, Some(Form::T)).ok_or("Q undefined")?;
        ensure!(k == q.retrograde(), "K1,2 {y} = {k}");
    }
    for kind in [FifthFall::F1, FifthFall::F2] {
        let (_, p) = e(fifthfall_step(kind, -1))?;
        ensure!(p.order() == 14, "{kind:?} order {}", p.order());
    }
    let sys = e(presets::mod7_inclusion())?;
    let g = &sys.ext.gbar;
    ensure!(sys.universe().len() == 28 && g.order() == 28 && is_simply_transitive(g), "mod-7 order {}", g.order());
    Ok("K1,2 = retro Q-4; t-1 fbar orders 14; mod-7 extension 28, simply transitive".into())
}

fn c15() -> Outcome {
    for (n, m) in [("sopr", U_SOPR), ("alto", U_ALTO), ("tenor", U_TENOR)] {
        ensure!(m.in_sl4() && e(m.order())? == 12, "U_{n}: det {}, order {:?}", m.det(), m.order().ok());
    }
    let t = trace(OMNIBUS_START, &OMNIBUS_SCHEDULE);
    // one omnibus pc-set per step, back to a
    let expected: Vec<Vec<u32>> = [
        "a", "F7", "D7", "f#", "D7", "B7", "d#", "B7", "G#7", "c", "G#7", "F7", "a",
    ]
    .iter()
    .map(|c| chordgroups::catalog::parse_chord(c, None).map(|s| s.pc_set()))
    .collect::<Result<_, _>>()
    .map_err(|x| x.to_string())?;
    let got: Vec<Vec<u32>> = t.iter().map(pc_set).collect();
    ensure!(got == expected, "trace {got:?}");
    ensure!(pc_set(&t[12]) == pc_set(&OMNIBUS_START), "does not close after 12 steps");
    let pairs = harvest_pairs(OMNIBUS_START, &OMNIBUS_SCHEDULE, Voice::Sopr);
    let fam = enumerate_soprano_bass_family(&pairs);
    ensure!(
        fam.len() == PUBLISHED_FAMILY_COUNT,
        "family count {} != expected {PUBLISHED_FAMILY_COUNT} (constraints: {} U_sopr pairs from one traced cycle, det 1, inner rows fixed)",
        fam.len(),
        pairs.len()
    );
    Ok(format!("family of {}", fam.len()))
}

fn c16() -> Outcome {
    let ext = e(generated_scales_chain())?;
    let g = &ext.gbar;
    ensure!(g.order() == 48 && g.is_abelian(), "order {}, abelian {}", g.order(), g.is_abelian());
    let gcd = |mut a: u32, mut b: u32| {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    };
    let mut oracle = BTreeMap::new();
    for a in 0..12u32 {
        for b in 0..4u32 {
            let (oa, ob) = (12 / gcd(a, 12), 4 / gcd(b, 4));
            *oracle.entry(oa * ob / gcd(oa, ob)).or_insert(0) += 1;
        }
    }
    let mut got = BTreeMap::new();
    for o in g.element_orders() {
        *got.entry(o as u32).or_insert(0) += 1;
    }
    ensure!(got == oracle, "orders {got:?} vs {oracle:?}");
    Ok("|<T1,fbar>| = 48, abelian, orders match Z12 x Z4".into())
}

fn main() {
    let criteria: [Criterion; 16] = [
        ("TI group on triads", c1),
        ("PLR words and Schritt-Wechsel equality", c2),
        ("PLR is the TI centralizer", c3),
        ("triads + dominant/half-diminished extension", c4),
        ("conjugated PLR are contextual inversions", c5),
        ("K1,4 identities", c6),
        ("Q1 from contextual inversions", c7),
        ("four-set and five-class stars", c8),
        ("omnibus grids", c9),
        ("jazz chains", c10),
        ("strides", c11),
        ("anti-equivariant duals", c12),
        ("J function and flattening", c13),
        ("mod-7 constructions", c14),
        ("voicing matrices", c15),
        ("generated scales", c16),
    ];
    let mut unexpected = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let n = i + 1;
        match f() {
            Ok(detail) => println!("PASS {n}: {name}: {detail}"),
            Err(detail) => {
                println!("FAIL {n}: {name}: {detail}");
                match KNOWN_FAILURES.iter().find(|(k, _)| *k == n) {
                    Some((_, why)) => println!("     known: {why}"),
                    None => unexpected += 1,
                }
            }
        }
    }
    if unexpected > 0 {
        std::process::exit(1);
    }
}
