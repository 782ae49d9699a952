//! Pitch classes mod `c`, pitch-class segments, and the entrywise T/I action.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Chromatic cardinality. 12 for the usual chromatic setting, 7 for diatonic work.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus(u32);

impl Modulus {
    pub const CHROMATIC: Modulus = Modulus(12);
    pub const DIATONIC: Modulus = Modulus(7);

    pub fn new(c: i64) -> Result<Self> {
        if c < 2 || c > u32::MAX as i64 {
            return Err(Error::BadModulus(c));
        }
        Ok(Modulus(c as u32))
    }

    #[must_use]
    pub fn get(self) -> u32 {
        self.0
    }

    #[must_use]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.0 as i64) as u32
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An ordered tuple of pitch classes, all reduced mod the segment's modulus.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PcSeg {
    modulus: Modulus,
    entries: Vec<u32>,
}

impl PcSeg {
    pub fn new(modulus: Modulus, entries: &[i64]) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptySegment);
        }
        Ok(PcSeg {
            modulus,
            entries: entries.iter().map(|&x| modulus.reduce(x)).collect(),
        })
    }

    /// Shorthand for a mod-12 segment. Panics on an empty slice.
    #[must_use]
    pub fn chromatic(entries: &[i64]) -> Self {
        PcSeg::new(Modulus::CHROMATIC, entries).expect("nonempty segment")
    }

    /// Parses `<0,4,7>`; the angle brackets are optional.
    pub fn parse(text: &str, modulus: Modulus) -> Result<Self> {
        let trimmed = text.trim();
        let lead = text.len() - text.trim_start().len();
        let mut body = trimmed;
        let mut offset = lead;
        if let Some(rest) = body.strip_prefix('<') {
            body = rest;
            offset += 1;
            body = body.strip_suffix('>').ok_or(Error::Parse {
                position: text.len(),
                message: "missing closing '>'".into(),
            })?;
        }
        let mut entries = Vec::new();
        let mut pos = offset;
        for piece in body.split(',') {
            let t = piece.trim();
            if t.is_empty() {
                return Err(Error::Parse { position: pos, message: "empty entry".into() });
            }
            let v: i64 = t.parse().map_err(|_| Error::Parse {
                position: pos + (piece.len() - piece.trim_start().len()),
                message: format!("not an integer: {t:?}"),
            })?;
            entries.push(v);
            pos += piece.len() + 1;
        }
        PcSeg::new(modulus, &entries)
    }

    #[must_use]
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    #[must_use]
    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry at a 1-based position.
    #[must_use]
    pub fn at(&self, one_based: usize) -> u32 {
        self.entries[one_based - 1]
    }

    #[must_use]
    pub fn map(&self, f: impl Fn(i64) -> i64) -> PcSeg {
        PcSeg {
            modulus: self.modulus,
            entries: self.entries.iter().map(|&x| self.modulus.reduce(f(x as i64))).collect(),
        }
    }

    #[must_use]
    pub fn transpose(&self, n: i64) -> PcSeg {
        self.map(|x| x + n)
    }

    #[must_use]
    pub fn invert(&self, n: i64) -> PcSeg {
        self.map(|x| n - x)
    }

    #[must_use]
    pub fn retrograde(&self) -> PcSeg {
        let mut entries = self.entries.clone();
        entries.reverse();
        PcSeg { modulus: self.modulus, entries }
    }

    /// Replaces the entry at a 1-based position.
    #[must_use]
    pub fn with_entry(&self, one_based: usize, pc: i64) -> PcSeg {
        let mut entries = self.entries.clone();
        entries[one_based - 1] = self.modulus.reduce(pc);
        PcSeg { modulus: self.modulus, entries }
    }

    #[must_use]
    pub fn is_prefix_of(&self, other: &PcSeg) -> bool {
        self.modulus == other.modulus && other.entries.starts_with(&self.entries)
    }

    /// Sorted distinct pitch classes.
    #[must_use]
    pub fn pc_set(&self) -> Vec<u32> {
        let mut v = self.entries.clone();
        v.sort_unstable();
        v.dedup();
        v
    }
}

impl fmt::Display for PcSeg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(">")
    }
}

impl Serialize for PcSeg {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum TiKind {
    T,
    I,
}

/// `T_n` or `I_n`; the index is kept reduced mod the element's modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TiElement {
    pub kind: TiKind,
    pub index: u32,
    pub modulus: Modulus,
}

impl TiElement {
    #[must_use]
    pub fn t(n: i64, modulus: Modulus) -> Self {
        TiElement { kind: TiKind::T, index: modulus.reduce(n), modulus }
    }

    #[must_use]
    pub fn i(n: i64, modulus: Modulus) -> Self {
        TiElement { kind: TiKind::I, index: modulus.reduce(n), modulus }
    }

    /// All 2c elements: T_0..T_{c-1}, then I_0..I_{c-1}.
    pub fn all(modulus: Modulus) -> impl Iterator<Item = TiElement> {
        let c = modulus.get() as i64;
        (0..c)
            .map(move |n| TiElement::t(n, modulus))
            .chain((0..c).map(move |n| TiElement::i(n, modulus)))
    }

    #[must_use]
    pub fn apply_pc(&self, x: i64) -> u32 {
        match self.kind {
            TiKind::T => self.modulus.reduce(x + self.index as i64),
            TiKind::I => self.modulus.reduce(self.index as i64 - x),
        }
    }

    /// `self ∘ other`.
    #[must_use]
    pub fn compose(&self, other: &TiElement) -> TiElement {
        let m = self.modulus;
        let (a, b) = (self.index as i64, other.index as i64);
        match (self.kind, other.kind) {
            (TiKind::T, TiKind::T) => TiElement::t(a + b, m),
            (TiKind::T, TiKind::I) => TiElement::i(a + b, m),
            (TiKind::I, TiKind::T) => TiElement::i(a - b, m),
            (TiKind::I, TiKind::I) => TiElement::t(a - b, m),
        }
    }

    #[must_use]
    pub fn inverse(&self) -> TiElement {
        match self.kind {
            TiKind::T => TiElement::t(-(self.index as i64), self.modulus),
            TiKind::I => *self,
        }
    }
}

impl fmt::Display for TiElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            TiKind::T => "T",
            TiKind::I => "I",
        };
        write!(f, "{k}{}", self.index)
    }
}

/// Entrywise action of a TI element.
#[must_use]
pub fn apply_ti(e: &TiElement, s: &PcSeg) -> PcSeg {
    match e.kind {
        TiKind::T => s.transpose(e.index as i64),
        TiKind::I => s.invert(e.index as i64),
    }
}

/// True iff only `T_0` fixes `s` as an ordered tuple.
#[must_use]
pub fn stabilizer_is_trivial(s: &PcSeg) -> bool {
    TiElement::all(s.modulus()).filter(|e| apply_ti(e, s) == *s).count() == 1
}

/// True iff some pair of entries spans an interval other than unison or tritone.
#[must_use]
pub fn tritone_condition(s: &PcSeg) -> bool {
    let c = s.modulus().get();
    let e = s.entries();
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            let d = (e[j] + c - e[i]) % c;
            if d != 0 && 2 * d != c {
                return true;
            }
        }
    }
    false
}

#[must_use]
pub fn retrograde(s: &PcSeg) -> PcSeg {
    s.retrograde()
}

/// The unique TI element carrying `src` to `dst`, if any.
pub fn ti_solve(src: &PcSeg, dst: &PcSeg) -> Result<Option<TiElement>> {
    let mut found = None;
    for e in TiElement::all(src.modulus()) {
        if apply_ti(&e, src) == *dst {
            if found.is_some() {
                return Err(Error::NontrivialStabilizer(src.to_string()));
            }
            found = Some(e);
        }
    }
    Ok(found)
}

/// Whether an orbit element was first reached by some `T_n` or some `I_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Form {
    T,
    I,
}

/// An indexed list of distinct segments, optionally partitioned into T-forms and I-forms.
#[derive(Debug, Clone)]
pub struct OrbitSet {
    name: String,
    elements: Vec<PcSeg>,
    forms: Option<Vec<Form>>,
    generator: Option<PcSeg>,
    index: HashMap<PcSeg, usize>,
}

impl PartialEq for OrbitSet {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements && self.forms == other.forms
    }
}

impl Eq for OrbitSet {}

impl OrbitSet {
    /// Builds an orbit set from explicit elements. Duplicates are rejected.
    pub fn from_elements(
        name: impl Into<String>,
        elements: Vec<PcSeg>,
        forms: Option<Vec<Form>>,
    ) -> Result<Self> {
        let mut index = HashMap::with_capacity(elements.len());
        for (i, s) in elements.iter().enumerate() {
            if index.insert(s.clone(), i).is_some() {
                return Err(Error::DuplicateSegment(s.to_string()));
            }
        }
        if let Some(f) = &forms {
            if f.len() != elements.len() {
                return Err(Error::Scope("form list length differs from element count".into()));
            }
        }
        Ok(OrbitSet { name: name.into(), elements, forms, generator: None, index })
    }

    /// Orbit of `seed` under the group generated by `gens`, in BFS order.
    /// The seed is a T-form; each `I` generator flips the form.
    pub fn orbit_under(name: impl Into<String>, seed: &PcSeg, gens: &[TiElement]) -> OrbitSet {
        let mut elements = vec![seed.clone()];
        let mut forms = vec![Form::T];
        let mut index = HashMap::new();
        index.insert(seed.clone(), 0);
        let mut i = 0;
        while i < elements.len() {
            let cur = elements[i].clone();
            for g in gens {
                let img = apply_ti(g, &cur);
                if !index.contains_key(&img) {
                    index.insert(img.clone(), elements.len());
                    let parent = forms[i];
                    let flip = g.kind == TiKind::I;
                    forms.push(match (parent, flip) {
                        (Form::T, false) | (Form::I, true) => Form::T,
                        _ => Form::I,
                    });
                    elements.push(img);
                }
            }
            i += 1;
        }
        OrbitSet {
            name: name.into(),
            elements,
            forms: Some(forms),
            generator: Some(seed.clone()),
            index,
        }
    }

    /// The T-class of `seed` (all transpositions), every element tagged with `form`.
    #[must_use]
    pub fn t_orbit(seed: &PcSeg, form: Form) -> OrbitSet {
        let m = seed.modulus();
        let mut elements = Vec::new();
        let mut index = HashMap::new();
        for n in 0..m.get() as i64 {
            let s = seed.transpose(n);
            if !index.contains_key(&s) {
                index.insert(s.clone(), elements.len());
                elements.push(s);
            }
        }
        let forms = vec![form; elements.len()];
        OrbitSet {
            name: format!("T{seed}"),
            elements,
            forms: Some(forms),
            generator: Some(seed.clone()),
            index,
        }
    }

    #[must_use]
    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    #[must_use]
    pub fn name(&self) -> &str {
        &self.name
    }

    #[must_use]
    pub fn elements(&self) -> &[PcSeg] {
        &self.elements
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    #[must_use]
    pub fn get(&self, i: usize) -> &PcSeg {
        &self.elements[i]
    }

    #[must_use]
    pub fn position(&self, s: &PcSeg) -> Option<usize> {
        self.index.get(s).copied()
    }

    #[must_use]
    pub fn contains(&self, s: &PcSeg) -> bool {
        self.index.contains_key(s)
    }

    #[must_use]
    pub fn forms(&self) -> Option<&[Form]> {
        self.forms.as_deref()
    }

    #[must_use]
    pub fn form_of(&self, i: usize) -> Option<Form> {
        self.forms.as_ref().map(|f| f[i])
    }

    #[must_use]
    pub fn generator(&self) -> Option<&PcSeg> {
        self.generator.as_ref()
    }

    #[must_use]
    pub fn modulus(&self) -> Option<Modulus> {
        self.elements.first().map(PcSeg::modulus)
    }
}

/// All distinct images of `s` under the TI group: T-forms by n ascending, then I-forms.
#[must_use]
pub fn ti_orbit(s: &PcSeg) -> OrbitSet {
    let mut elements = Vec::new();
    let mut forms = Vec::new();
    let mut index = HashMap::new();
    for e in TiElement::all(s.modulus()) {
        let img = apply_ti(&e, s);
        if !index.contains_key(&img) {
            index.insert(img.clone(), elements.len());
            elements.push(img);
            forms.push(match e.kind {
                TiKind::T => Form::T,
                TiKind::I => Form::I,
            });
        }
    }
    OrbitSet {
        name: format!("TI{s}"),
        elements,
        forms: Some(forms),
        generator: Some(s.clone()),
        index,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(v: &[i64]) -> PcSeg {
        PcSeg::chromatic(v)
    }

    #[test]
    fn ti_examples() {
        let m = Modulus::CHROMATIC;
        assert_eq!(apply_ti(&TiElement::i(7, m), &seg(&[0, 4, 7])), seg(&[7, 3, 0]));
        assert_eq!(apply_ti(&TiElement::i(0, m), &seg(&[0, 4, 7, 10])), seg(&[0, 8, 5, 2]));
    }

    #[test]
    fn orbit_sizes() {
        assert_eq!(ti_orbit(&seg(&[0, 4, 7])).len(), 24);
        assert_eq!(ti_orbit(&seg(&[1, 4, 7, 10])).len(), 24);
        let m7 = PcSeg::new(Modulus::DIATONIC, &[0, 2, 4]).unwrap();
        assert_eq!(ti_orbit(&m7).len(), 14);
    }

    #[test]
    fn solve_and_stabilizer() {
        let m = Modulus::CHROMATIC;
        let c = seg(&[0, 4, 7]);
        assert_eq!(ti_solve(&c, &seg(&[7, 3, 0])).unwrap(), Some(TiElement::i(7, m)));
        assert_eq!(ti_solve(&c, &c).unwrap(), Some(TiElement::t(0, m)));
        assert_eq!(ti_solve(&c, &seg(&[0, 3, 7])).unwrap(), None);
        assert!(ti_solve(&seg(&[0, 6]), &seg(&[0, 6])).is_err());
        assert!(stabilizer_is_trivial(&seg(&[0, 4, 7, 11])));
        assert!(!stabilizer_is_trivial(&seg(&[0])));
        assert!(!stabilizer_is_trivial(&seg(&[0, 6])));
    }

    #[test]
    fn tritone() {
        assert!(tritone_condition(&seg(&[0, 4, 7])));
        assert!(!tritone_condition(&seg(&[0, 6])));
        assert!(tritone_condition(&seg(&[1, 4, 7, 10])));
    }

    #[test]
    fn parse_roundtrip() {
        let s = PcSeg::parse(" < 0, 4 ,7> ", Modulus::CHROMATIC).unwrap();
        assert_eq!(s, seg(&[0, 4, 7]));
        assert_eq!(s.to_string(), "<0,4,7>");
        assert!(matches!(PcSeg::parse("<0,x>", Modulus::CHROMATIC), Err(Error::Parse { .. })));
        assert!(PcSeg::parse("<0,4", Modulus::CHROMATIC).is_err());
    }

    #[test]
    fn forms_follow_provenance() {
        let o = ti_orbit(&seg(&[0, 4, 7]));
        assert_eq!(o.form_of(o.position(&seg(&[7, 3, 0])).unwrap()), Some(Form::I));
        assert_eq!(o.form_of(o.position(&seg(&[5, 9, 0])).unwrap()), Some(Form::T));
    }
}
