use std::collections::{BTreeMap, HashSet};

use chordgroups::config::presets;
use chordgroups::perm::{is_simply_transitive, Perm};
use chordgroups::pitchclass::{Form, Modulus, PcSeg};
use chordgroups::scales::*;
use chordgroups::transforms::Atom;
use proptest::prelude::*;

fn z7(e: &[i64]) -> PcSeg {
    PcSeg::new(Modulus::DIATONIC, e).unwrap()
}

// independent floor division through f64 for small arguments
fn j_oracle(c: i64, d: i64, m: i64, k: i64) -> i64 {
    ((c * k + m) as f64 / d as f64).floor() as i64
}

#[test]
fn j_values() {
    let j = JParams::new(7, 4, 3).unwrap();
    assert_eq!(j.chord(&[0, 1, 2, 3]), [0, 2, 4, 6]);
    for k in -5..5 {
        assert_eq!(j_fn(12, 1, 0, k), 12 * k);
    }
    let d = JParams::new(12, 7, 0).unwrap();
    let expect: Vec<i64> = [0, 2, 4, 6].iter().map(|&k| j_oracle(12, 7, 0, k).rem_euclid(12)).collect();
    let got: Vec<i64> = d.pcseg(&[0, 2, 4, 6]).unwrap().entries().iter().map(|&x| i64::from(x)).collect();
    assert_eq!(got, expect);
    assert!(JParams::new(7, 0, 0).is_err());
}

#[test]
fn j_templates_are_diatonic_sevenths() {
    // J^m_{12,7} over the stacked-third template gives each of the four shapes
    let mut shapes = HashSet::new();
    for m in 0..84 {
        let c = JParams::new(12, 7, m).unwrap().chord(&JParams::new(7, 4, 3).unwrap().chord(&[0, 1, 2, 3]));
        shapes.insert([c[1] - c[0], c[2] - c[0], c[3] - c[0]]);
    }
    let expect: HashSet<[i64; 3]> = SEVENTH_TEMPLATES.iter().map(|(_, t)| [t[1], t[2], t[3]]).collect();
    assert_eq!(shapes, expect);
}

proptest! {
    #[test]
    fn j_matches_oracle_and_is_monotone(c in 1i64..30, d in 1i64..30, m in -50i64..50, k in -40i64..40) {
        prop_assert_eq!(j_fn(c, d, m, k), j_oracle(c, d, m, k));
        prop_assert!(j_fn(c, d, m, k) <= j_fn(c, d, m, k + 1));
    }
}

#[test]
fn phi_orders_and_fourteenth_power() {
    let u = phi_universe().unwrap();
    assert_eq!(u.len(), 28);
    let phi = phi_perm(&u).unwrap();
    assert_eq!(phi.order(), 28);
    assert_eq!(phi.pow(2).order(), 14);
    let f = phi.pow(14);
    for n in 0..7 {
        let s = z7(&[n, n + 2, n + 4, n + 6]);
        assert_eq!(*u.seg(f.apply(u.require(&s).unwrap())), z7(&[n + 4, n + 6, n, n + 2]));
        let s = z7(&[n, n + 2, n + 4, n + 5]);
        assert_eq!(*u.seg(f.apply(u.require(&s).unwrap())), z7(&[n + 4, n + 5, n, n + 2]));
    }
    // φ² = t_3 ∘ φ^14; the inverse square is t_4 ∘ φ^14
    let t = |n: i64| Perm::from_fn(&u, |_, s| Ok(s.transpose(n))).unwrap();
    assert_eq!(phi.pow(2), &t(3) * &f);
    assert_eq!(phi.pow(-2), &t(4) * &f);
    assert_eq!(phi_map(0), 27);
}

#[test]
fn phi_squared_generates_both_fifth_fall_orbits() {
    let u = phi_universe().unwrap();
    let p2 = phi_perm(&u).unwrap().pow(2);
    let orbit = |s: &PcSeg| {
        let mut x = u.require(s).unwrap();
        let mut seen = HashSet::new();
        while seen.insert(x) {
            x = p2.apply(x);
        }
        seen.into_iter().map(|i| u.seg(i).clone()).collect::<HashSet<_>>()
    };
    let a = orbit(&z7(&[0, 2, 4, 6]));
    assert_eq!(a.len(), 14);
    assert!(a.contains(&z7(&[0, 2, 3, 5])));
    let b = orbit(&z7(&[0, 2, 4, 5]));
    assert!(b.contains(&z7(&[0, 1, 3, 5])));
    assert!(a.is_disjoint(&b));
}

#[test]
fn fbar_flat_cycle() {
    let u = diatonic_sevenths_universe().unwrap();
    assert_eq!(u.len(), 48);
    let p = fbar_flat_perm(&u).unwrap();
    assert_eq!(p.order(), 48);
    let start = u.require(&PcSeg::chromatic(&[0, 4, 7, 11])).unwrap();
    let mut seen = HashSet::new();
    let mut x = start;
    for _ in 0..48 {
        seen.insert(x);
        x = p.apply(x);
    }
    assert_eq!(seen.len(), 48);
    assert_eq!(fbar_flat(&PcSeg::chromatic(&[0, 4, 7, 11])).unwrap(), PcSeg::chromatic(&[0, 4, 7, 10]));
    assert_eq!(fbar_flat(&PcSeg::chromatic(&[5, 8, 11, 3])).unwrap(), PcSeg::chromatic(&[4, 8, 11, 3]));
    assert!(fbar_flat(&PcSeg::chromatic(&[0, 4, 7])).is_err());
    assert!(fbar_flat(&PcSeg::chromatic(&[0, 3, 6, 9])).is_err());

    // agrees with the root-preserving meta-rotation off the half-diminished block,
    // and four steps of either give T_{-1} and the identity
    let meta = diatonic_sevenths_meta().unwrap();
    assert_eq!(meta.order(), 4);
    let mu = meta.universe();
    for x in 0..mu.len() {
        let s = mu.seg(x);
        let y = mu.seg(meta.perm().apply(x));
        if mu.block_of(x) < 3 {
            assert_eq!(fbar_flat(s).unwrap(), *y);
        } else {
            assert_eq!(fbar_flat(s).unwrap(), y.transpose(-1));
        }
    }
    let p4 = p.pow(4);
    for x in 0..u.len() {
        assert_eq!(*u.seg(p4.apply(x)), u.seg(x).transpose(-1));
    }
}

#[test]
fn letter_name_flattening() {
    let steps = flattening_cycle(LetterState::new());
    assert_eq!(steps.len(), 84);
    assert_eq!(steps.iter().filter(|s| s.productive).count(), 48);
    let distinct: HashSet<&PcSeg> = steps.iter().map(|s| &s.pcseg).collect();
    assert_eq!(distinct.len(), 48);
    assert_eq!(steps.last().unwrap().pcseg, PcSeg::chromatic(&[0, 4, 7, 11]));
    let first: Vec<&str> = steps[..7].iter().map(|s| s.chord.as_str()).collect();
    assert_eq!(first, ["C7", "Cm7", "Cm7", "Cm7", "Ch7", "BM7", "BM7"]);
    let mut prev = PcSeg::chromatic(&[0, 4, 7, 11]);
    for s in &steps {
        assert_eq!(s.productive, ['C', 'E', 'G', 'B'].contains(&s.letter_flattened));
        if s.productive {
            assert_eq!(fbar_flat(&prev).unwrap(), s.pcseg);
        } else {
            assert_eq!(prev, s.pcseg);
        }
        prev = s.pcseg.clone();
    }
}

#[test]
fn flattening_from_a_signature() {
    let start = LetterState::with_signature(2);
    assert_eq!(start.pc('B'), 10);
    assert_eq!(start.pc('E'), 3);
    assert_eq!(start.chord(), PcSeg::chromatic(&[0, 3, 7, 10]));
    let steps = flattening_cycle(start);
    assert_eq!(steps.len(), 84);
    assert_eq!(steps[0].letter_flattened, 'A');
    assert_eq!(LetterState::with_signature(-1).pc('F'), 6);
}

#[test]
fn mod7_k12_is_retrograde_q_minus4() {
    for n in 0..7 {
        let y = z7(&[n, n + 2, n + 4, n + 6]);
        let k = Atom::K(1, 2).apply(&y, Some(Form::T)).unwrap();
        let q = Atom::Q(-4).apply(&y, Some(Form::T)).unwrap();
        assert_eq!(k, q.retrograde());
        assert_eq!(k, z7(&[n + 2, n, n + 5, n + 3]));
    }
}

#[test]
fn fifth_fall_bijections() {
    let f1 = fifthfall_bijection(FifthFall::F1).unwrap();
    let f2 = fifthfall_bijection(FifthFall::F2).unwrap();
    let f3 = fifthfall_bijection(FifthFall::F3).unwrap();
    for n in 0..7 {
        assert_eq!(*f1.apply(&z7(&[n, n + 2, n + 4, n + 6])).unwrap(), z7(&[n, n + 2, n + 3, n + 5]));
        assert_eq!(*f2.apply(&z7(&[n, n + 2, n + 4, n + 5])).unwrap(), z7(&[n, n + 1, n + 3, n + 5]));
        assert_eq!(*f3.apply(&z7(&[n, n + 2, n + 4, n + 6])).unwrap(), z7(&[n, n + 4, n + 6, n + 2]));
    }
    for k in [FifthFall::F1, FifthFall::F2] {
        let (meta, p) = fifthfall_step(k, -1).unwrap();
        assert_eq!(meta.order(), 2);
        assert_eq!(p.order(), 14);
    }
    let chain = fifthfall_chain(FifthFall::F3, -4, &z7(&[1, 3, 5, 0]), 5).unwrap();
    let expect = [[1, 3, 5, 0], [4, 1, 3, 6], [0, 2, 4, 6], [3, 0, 2, 5], [6, 1, 3, 5], [2, 6, 1, 4]];
    for (s, e) in chain.iter().zip(expect) {
        assert_eq!(*s, z7(&e));
    }
    // the chain visits the figure's chords as pitch-class sets
    let figure = [[1, 3, 5, 0], [3, 1, 6, 4], [0, 2, 4, 6], [2, 0, 5, 3], [6, 1, 3, 5], [1, 6, 4, 2]];
    for (s, e) in chain.iter().zip(figure) {
        assert_eq!(s.pc_set(), z7(&e).pc_set());
    }
}

#[test]
fn mod7_inclusion_extension() {
    let sys = presets::mod7_inclusion().unwrap();
    let u = sys.universe();
    assert_eq!(u.len(), 28);
    assert_eq!(sys.ext.gbar.order(), 28);
    assert!(is_simply_transitive(&sys.ext.gbar));
    let hbar = sys.ext.hbar.as_ref().unwrap();
    assert_eq!(hbar.order(), 28);
    assert!(is_simply_transitive(hbar));
    // f is the inclusion of a triad into the top of a seventh
    let f = sys.star.arms().last().unwrap();
    for s in f.source().elements() {
        let t = f.apply(s).unwrap();
        assert_eq!(&t.entries()[1..], s.entries());
    }
}

#[test]
fn generated_scales() {
    let ext = generated_scales_chain().unwrap();
    let g = &ext.gbar;
    assert_eq!(g.order(), 48);
    assert!(g.is_abelian());
    assert_eq!(ext.fbar.order(), 4);
    let u = g.universe();
    let fcg = PcSeg::chromatic(&[5, 0, 7]);
    let x = ext.fbar.perm().apply(u.require(&fcg).unwrap());
    assert_eq!(*u.seg(x), PcSeg::chromatic(&[5, 0, 7, 2, 9]));
    assert!(ext.fbar.perm().pow(4).is_identity());

    // element orders of Z_12 x Z_4
    let mut oracle = BTreeMap::new();
    for a in 0..12u32 {
        for b in 0..4u32 {
            let oa = 12 / gcd(a, 12);
            let ob = 4 / gcd(b, 4);
            *oracle.entry(oa * ob / gcd(oa, ob)).or_insert(0) += 1;
        }
    }
    let mut got = BTreeMap::new();
    for o in g.element_orders() {
        *got.entry(o as u32).or_insert(0) += 1;
    }
    assert_eq!(got, oracle);
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
