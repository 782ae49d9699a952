//! J-function, the φ map on generic sevenths, the flattening transformation, mod-7
//! fifth-fall bijections, and the generated-scales chain.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::bijection::{extend_assignment_with, Action, OrbitBijection};
use crate::catalog::chord_label;
use crate::config::presets;
use crate::error::{Error, Result};
use crate::extension::{fbar_from_star, fbar_two_sets, ExtensionResult, MetaRotation, StarDiagram};
use crate::perm::{Perm, Universe};
use crate::pitchclass::{Form, Modulus, OrbitSet, PcSeg};

/// Parameters of `J^m_{c,d}(k) = floor((ck + m) / d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JParams {
    pub c: i64,
    pub d: i64,
    pub m: i64,
}

impl JParams {
    pub fn new(c: i64, d: i64, m: i64) -> Result<Self> {
        if c < 1 || d < 1 {
            return Err(Error::Scope(format!("J needs c, d >= 1 (got c={c}, d={d})")));
        }
        Ok(JParams { c, d, m })
    }

    #[must_use]
    pub fn j(&self, k: i64) -> i64 {
        j_fn(self.c, self.d, self.m, k)
    }

    #[must_use]
    pub fn chord(&self, ks: &[i64]) -> Vec<i64> {
        ks.iter().map(|&k| self.j(k)).collect()
    }

    /// The chord reduced mod c.
    pub fn pcseg(&self, ks: &[i64]) -> Result<PcSeg> {
        PcSeg::new(Modulus::new(self.c)?, &self.chord(ks))
    }
}

/// `floor((c*k + m) / d)`. Panics when `d == 0`.
#[must_use]
pub fn j_fn(c: i64, d: i64, m: i64, k: i64) -> i64 {
    (c * k + m).div_euclid(d)
}

/// Number of generic-seventh inversions in Z_7.
pub const PHI_CYCLE: i64 = 28;

/// `m ↦ m - 1` on mode indices mod 28.
#[must_use]
pub fn phi_map(m: i64) -> i64 {
    (m - 1).rem_euclid(PHI_CYCLE)
}

/// `J^m_{7,4}⟨0,1,2,3⟩` in Z_7.
#[must_use]
pub fn phi_chord(m: i64) -> PcSeg {
    let p = JParams { c: 7, d: 4, m };
    p.pcseg(&[0, 1, 2, 3]).expect("modulus 7")
}

/// The 28 generic sevenths of Z_7, position `m` holding `J^m_{7,4}⟨0,1,2,3⟩`.
pub fn phi_universe() -> Result<Arc<Universe>> {
    let elems = (0..PHI_CYCLE).map(phi_chord).collect();
    Ok(Arc::new(Universe::single(OrbitSet::from_elements("GenericSevenths", elems, None)?)))
}

/// φ as a permutation of [`phi_universe`].
pub fn phi_perm(u: &Universe) -> Result<Perm> {
    Perm::from_fn(u, |_, s| {
        let m = (0..PHI_CYCLE).find(|&m| phi_chord(m) == *s).ok_or_else(|| Error::NotInUniverse(s.to_string()))?;
        Ok(phi_chord(phi_map(m)))
    })
}

/// Root-position diatonic seventh templates, in meta-rotation order.
pub const SEVENTH_TEMPLATES: [(&str, [i64; 4]); 4] = [
    ("Maj7", [0, 4, 7, 11]),
    ("Dom7", [0, 4, 7, 10]),
    ("Min7", [0, 3, 7, 10]),
    ("HalfDim7", [0, 3, 6, 10]),
];

fn template_of(s: &PcSeg) -> Option<usize> {
    if s.len() != 4 || s.modulus() != Modulus::CHROMATIC {
        return None;
    }
    let r = i64::from(s.at(1));
    let shape: Vec<i64> = s.entries().iter().map(|&x| (i64::from(x) - r).rem_euclid(12)).collect();
    SEVENTH_TEMPLATES.iter().position(|(_, t)| t[..] == shape[..])
}

/// T-classes of the four root-position templates.
pub fn diatonic_sevenths_universe() -> Result<Arc<Universe>> {
    let blocks = SEVENTH_TEMPLATES
        .iter()
        .map(|(n, t)| OrbitSet::t_orbit(&PcSeg::chromatic(t), Form::T).with_name(*n))
        .collect();
    Ok(Arc::new(Universe::new(blocks)?))
}

/// Root-preserving meta-rotation Maj7 → Dom7 → Min7 → ø7 → Maj7 over the T-group.
pub fn diatonic_sevenths_meta() -> Result<MetaRotation> {
    let center = PcSeg::chromatic(&SEVENTH_TEMPLATES[0].1);
    let arms = SEVENTH_TEMPLATES[1..]
        .iter()
        .map(|(n, t)| extend_assignment_with(&center, &PcSeg::chromatic(t), Action::T).map(|b| b.with_name(*n)))
        .collect::<Result<Vec<_>>>()?;
    fbar_from_star(&StarDiagram::new(OrbitSet::t_orbit(&center, Form::T).with_name("Maj7"), arms)?)
}

/// The flattening shadow: the root-preserving rotation, except ø7 on n goes to Maj7 on n-1.
pub fn fbar_flat(s: &PcSeg) -> Result<PcSeg> {
    let i = template_of(s).ok_or_else(|| Error::Scope(format!("{s} is not a root-position diatonic seventh")))?;
    let r = i64::from(s.at(1));
    let (root, next) = if i == 3 { (r - 1, 0) } else { (r, i + 1) };
    Ok(PcSeg::chromatic(&SEVENTH_TEMPLATES[next].1).transpose(root))
}

pub fn fbar_flat_perm(u: &Universe) -> Result<Perm> {
    Perm::from_fn(u, |_, s| fbar_flat(s))
}

pub const LETTERS: [char; 7] = ['C', 'D', 'E', 'F', 'G', 'A', 'B'];
const LETTER_PC: [i64; 7] = [0, 2, 4, 5, 7, 9, 11];

/// Order in which flats enter a key signature.
pub const FLAT_ORDER: [char; 7] = ['B', 'E', 'A', 'D', 'G', 'C', 'F'];

/// Chord tones of the fixed material ⟨C, E, G, B⟩.
pub const CHORD_LETTERS: [char; 4] = ['C', 'E', 'G', 'B'];

fn letter_index(l: char) -> usize {
    LETTERS.iter().position(|&x| x == l).expect("letter name")
}

/// Accidentals per letter name; flats negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct LetterState {
    pub accidentals: [i64; 7],
}

impl LetterState {
    #[must_use]
    pub fn new() -> Self {
        Self::default()
    }

    /// Key signature with `flats` flats (negative for sharps), applied in signature order.
    #[must_use]
    pub fn with_signature(flats: i64) -> Self {
        let mut s = Self::new();
        for k in 0..flats.unsigned_abs() as usize {
            let l = if flats > 0 { FLAT_ORDER[k % 7] } else { FLAT_ORDER[6 - k % 7] };
            s.accidentals[letter_index(l)] += if flats > 0 { -1 } else { 1 };
        }
        s
    }

    #[must_use]
    pub fn pc(&self, letter: char) -> u32 {
        let i = letter_index(letter);
        (LETTER_PC[i] + self.accidentals[i]).rem_euclid(12) as u32
    }

    #[must_use]
    pub fn chord(&self) -> PcSeg {
        let e: Vec<i64> = CHORD_LETTERS.iter().map(|&l| i64::from(self.pc(l))).collect();
        PcSeg::chromatic(&e)
    }

    /// Equal at pitch-class level on every letter.
    #[must_use]
    pub fn same_pcs(&self, other: &LetterState) -> bool {
        LETTERS.iter().all(|&l| self.pc(l) == other.pc(l))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlatStep {
    pub index: usize,
    pub letter_flattened: char,
    pub productive: bool,
    pub pcseg: PcSeg,
    pub chord: String,
}

impl fmt::Display for FlatStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:>2} flat {} {} {} {}",
            self.index,
            self.letter_flattened,
            if self.productive { "*" } else { " " },
            self.pcseg,
            self.chord
        )
    }
}

/// Adds flats in signature order until every letter is back at its starting pitch class.
#[must_use]
pub fn flattening_cycle(start: LetterState) -> Vec<FlatStep> {
    // position in the signature order is determined by how many flats are present
    let mut next = start.accidentals.iter().map(|&a| -a).sum::<i64>().rem_euclid(7) as usize;
    let mut state = start;
    let mut out = Vec::new();
    loop {
        let l = FLAT_ORDER[next];
        next = (next + 1) % 7;
        let before = state.chord();
        state.accidentals[letter_index(l)] -= 1;
        let pcseg = state.chord();
        out.push(FlatStep {
            index: out.len() + 1,
            letter_flattened: l,
            productive: pcseg != before,
            chord: chord_label_7th(&pcseg),
            pcseg,
        });
        if state.same_pcs(&start) {
            return out;
        }
    }
}

fn chord_label_7th(s: &PcSeg) -> String {
    match template_of(s) {
        Some(i) => {
            let names = ["C", "Db", "D", "Eb", "E", "F", "Gb", "G", "Ab", "A", "Bb", "B"];
            let suffix = ["M7", "7", "m7", "h7"][i];
            format!("{}{suffix}", names[s.at(1) as usize])
        }
        None => chord_label(s),
    }
}

/// The three mod-7 fifth-fall voicing pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FifthFall {
    F1,
    F2,
    F3,
}

impl FifthFall {
    pub const ALL: [FifthFall; 3] = [FifthFall::F1, FifthFall::F2, FifthFall::F3];

    /// Source and target shapes at n = 0.
    #[must_use]
    pub fn shapes(self) -> ([i64; 4], [i64; 4]) {
        match self {
            FifthFall::F1 => ([0, 2, 4, 6], [0, 2, 3, 5]),
            FifthFall::F2 => ([0, 2, 4, 5], [0, 1, 3, 5]),
            FifthFall::F3 => ([0, 2, 4, 6], [0, 4, 6, 2]),
        }
    }

    #[must_use]
    pub fn name(self) -> &'static str {
        match self {
            FifthFall::F1 => "f1",
            FifthFall::F2 => "f2",
            FifthFall::F3 => "f3",
        }
    }
}

/// The T-equivariant map between the two mod-7 T-classes of `kind`.
pub fn fifthfall_bijection(kind: FifthFall) -> Result<OrbitBijection> {
    let (a, b) = kind.shapes();
    let m = Modulus::DIATONIC;
    Ok(extend_assignment_with(&PcSeg::new(m, &a)?, &PcSeg::new(m, &b)?, Action::T)?.with_name(kind.name()))
}

/// `f ⊔ f^{-1}` for a fifth-fall bijection.
pub fn fifthfall_meta(kind: FifthFall) -> Result<MetaRotation> {
    fbar_two_sets(&fifthfall_bijection(kind)?)
}

/// `t_n ∘ f̄` on the union of the two classes.
pub fn fifthfall_step(kind: FifthFall, n: i64) -> Result<(MetaRotation, Perm)> {
    let meta = fifthfall_meta(kind)?;
    let t = Perm::from_fn(meta.universe(), |_, s| Ok(s.transpose(n)))?;
    let p = &t * meta.perm();
    Ok((meta, p))
}

/// Iterates `t_n ∘ f̄` from `start`, returning `steps + 1` segments.
pub fn fifthfall_chain(kind: FifthFall, n: i64, start: &PcSeg, steps: usize) -> Result<Vec<PcSeg>> {
    let (meta, p) = fifthfall_step(kind, n)?;
    let u = meta.universe();
    let mut x = u.require(start)?;
    let mut out = vec![start.clone()];
    for _ in 0..steps {
        x = p.apply(x);
        out.push(u.seg(x).clone());
    }
    Ok(out)
}

/// `⟨T_1, f̄⟩` over the T-classes of tetractys, pentatonic, diatonic, and chromatic
/// segments generated by fifths from F.
pub fn generated_scales_chain() -> Result<ExtensionResult> {
    Ok(presets::generated_scales()?.ext)
}
