//! Tabulated bijections between orbit sets and their equivariance.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::catalog::{catalog, ChordFamily};
use crate::error::{Error, Result};
use crate::perm::{GeneratedGroup, Perm, Universe};
use crate::pitchclass::{
    apply_ti, stabilizer_is_trivial, ti_orbit, tritone_condition, Form, OrbitSet, PcSeg, TiElement,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BijectionKind {
    Assignment,
    Extension,
    Truncation,
    Modification,
    Formula,
    Custom,
}

/// A bijection `source → target` stored as a position table.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitBijection {
    name: String,
    source: OrbitSet,
    target: OrbitSet,
    table: Vec<usize>,
    kind: BijectionKind,
}

impl OrbitBijection {
    /// Tabulates `f` on `source`; every image must lie in `target` and the map must be bijective.
    pub fn from_fn(
        name: impl Into<String>,
        source: OrbitSet,
        target: OrbitSet,
        mut f: impl FnMut(&PcSeg) -> PcSeg,
    ) -> Result<Self> {
        let name = name.into();
        if source.len() != target.len() {
            return Err(Error::OrbitSizeMismatch(source.len(), target.len()));
        }
        let mut hit = vec![false; target.len()];
        let mut table = Vec::with_capacity(source.len());
        for s in source.elements() {
            let img = f(s);
            let j = target
                .position(&img)
                .ok_or_else(|| Error::Bijection(format!("{name}: image {img} of {s} is not in {}", target.name())))?;
            if std::mem::replace(&mut hit[j], true) {
                return Err(Error::Bijection(format!("{name}: {img} is hit twice")));
            }
            table.push(j);
        }
        Ok(OrbitBijection { name, source, target, table, kind: BijectionKind::Custom })
    }

    #[must_use]
    pub fn identity(set: &OrbitSet) -> Self {
        OrbitBijection {
            name: "id".into(),
            source: set.clone(),
            target: set.clone(),
            table: (0..set.len()).collect(),
            kind: BijectionKind::Custom,
        }
    }

    #[must_use]
    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    #[must_use]
    pub fn with_kind(mut self, kind: BijectionKind) -> Self {
        self.kind = kind;
        self
    }

    #[must_use]
    pub fn name(&self) -> &str {
        &self.name
    }

    #[must_use]
    pub fn kind(&self) -> BijectionKind {
        self.kind
    }

    #[must_use]
    pub fn source(&self) -> &OrbitSet {
        &self.source
    }

    #[must_use]
    pub fn target(&self) -> &OrbitSet {
        &self.target
    }

    #[must_use]
    pub fn table(&self) -> &[usize] {
        &self.table
    }

    #[must_use]
    pub fn apply(&self, s: &PcSeg) -> Option<&PcSeg> {
        self.source.position(s).map(|i| self.target.get(self.table[i]))
    }

    #[must_use]
    pub fn apply_inverse(&self, t: &PcSeg) -> Option<&PcSeg> {
        let j = self.target.position(t)?;
        self.table.iter().position(|&x| x == j).map(|i| self.source.get(i))
    }

    #[must_use]
    pub fn inverse(&self) -> OrbitBijection {
        let mut table = vec![0; self.table.len()];
        for (i, &j) in self.table.iter().enumerate() {
            table[j] = i;
        }
        let kind = match self.kind {
            BijectionKind::Extension => BijectionKind::Truncation,
            BijectionKind::Truncation => BijectionKind::Extension,
            k => k,
        };
        OrbitBijection {
            name: format!("{}^-1", self.name),
            source: self.target.clone(),
            target: self.source.clone(),
            table,
            kind,
        }
    }

    /// `self ∘ other`; requires `other.target == self.source`.
    pub fn compose(&self, other: &OrbitBijection) -> Result<OrbitBijection> {
        if other.target != self.source {
            return Err(Error::Bijection(format!("cannot compose {} after {}", self.name, other.name)));
        }
        Ok(OrbitBijection {
            name: format!("{}*{}", self.name, other.name),
            source: other.source.clone(),
            target: self.target.clone(),
            table: other.table.iter().map(|&j| self.table[j]).collect(),
            kind: BijectionKind::Custom,
        })
    }

    #[must_use]
    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.table.iter().enumerate().all(|(i, &j)| i == j)
    }

    #[must_use]
    pub fn pairs(&self) -> Vec<(PcSeg, PcSeg)> {
        self.source
            .elements()
            .iter()
            .zip(&self.table)
            .map(|(s, &j)| (s.clone(), self.target.get(j).clone()))
            .collect()
    }

    /// `{"name": ..., "pairs": [["<0,4,7>", "<0,4,7,10>"], ...]}`.
    #[must_use]
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct View<'a> {
            name: &'a str,
            source: &'a str,
            target: &'a str,
            pairs: Vec<(PcSeg, PcSeg)>,
        }
        serde_json::to_value(View {
            name: &self.name,
            source: self.source.name(),
            target: self.target.name(),
            pairs: self.pairs(),
        })
        .expect("serializable")
    }
}

impl fmt::Display for OrbitBijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (s, t) in self.pairs() {
            writeln!(f, "{s} -> {t}")?;
        }
        Ok(())
    }
}

/// Which group a single assignment is extended along.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Action {
    /// All T_n and I_n.
    Ti,
    /// Transpositions only; orbits are T-classes.
    T,
}

impl Action {
    fn elements(self, s: &PcSeg) -> Vec<TiElement> {
        let m = s.modulus();
        match self {
            Action::Ti => TiElement::all(m).collect(),
            Action::T => (0..m.get() as i64).map(|n| TiElement::t(n, m)).collect(),
        }
    }

    fn orbit(self, s: &PcSeg) -> OrbitSet {
        match self {
            Action::Ti => ti_orbit(s),
            Action::T => OrbitSet::t_orbit(s, Form::T),
        }
    }

    fn stabilizer_trivial(self, s: &PcSeg) -> bool {
        match self {
            Action::Ti => stabilizer_is_trivial(s),
            Action::T => (1..s.modulus().get() as i64).all(|n| s.transpose(n) != *s),
        }
    }
}

fn named_orbit(s: &PcSeg, action: Action) -> OrbitSet {
    let o = action.orbit(s);
    if action == Action::Ti {
        if let Some(f) = ChordFamily::ALL.iter().find(|f| f.generator() == *s) {
            return o.with_name(f.set_name());
        }
    }
    o
}

/// The unique TI-equivariant map sending `src` to `dst`.
pub fn extend_assignment(src: &PcSeg, dst: &PcSeg) -> Result<OrbitBijection> {
    extend_assignment_with(src, dst, Action::Ti)
}

/// The unique equivariant map for `action` sending `src` to `dst`, checked exhaustively.
pub fn extend_assignment_with(src: &PcSeg, dst: &PcSeg, action: Action) -> Result<OrbitBijection> {
    for s in [src, dst] {
        if !action.stabilizer_trivial(s) {
            return Err(Error::NontrivialStabilizer(s.to_string()));
        }
    }
    if src.modulus() != dst.modulus() {
        return Err(Error::Bijection("segments have different moduli".into()));
    }
    let source = named_orbit(src, action);
    let target = named_orbit(dst, action);
    if source.len() != target.len() {
        return Err(Error::OrbitSizeMismatch(source.len(), target.len()));
    }
    let elems = action.elements(src);
    let mut table = vec![usize::MAX; source.len()];
    for e in &elems {
        let i = source.position(&apply_ti(e, src)).expect("orbit member");
        let j = target.position(&apply_ti(e, dst)).expect("orbit member");
        table[i] = j;
    }
    let b = OrbitBijection {
        name: format!("{src}->{dst}"),
        source,
        target,
        table,
        kind: BijectionKind::Assignment,
    };
    for e in &elems {
        for s in b.source.elements() {
            let lhs = b.apply(&apply_ti(e, s));
            let rhs = apply_ti(e, b.apply(s).expect("source member"));
            if lhs != Some(&rhs) {
                return Err(Error::Bijection(format!("not equivariant under {e} at {s}")));
            }
        }
    }
    Ok(b)
}

/// Extension of `x1` to the longer segment `x2` (truncation is the inverse).
pub fn pcseg_extension_bijection(x1: &PcSeg, x2: &PcSeg) -> Result<OrbitBijection> {
    if !x1.is_prefix_of(x2) {
        return Err(Error::NotAPrefix(x1.to_string(), x2.to_string()));
    }
    if !tritone_condition(x1) {
        return Err(Error::TritoneCondition(x1.to_string()));
    }
    Ok(extend_assignment(x1, x2)?.with_kind(BijectionKind::Extension))
}

/// Replaces the entry at `position` (1-based) with `new_pc`.
pub fn pcseg_modification_bijection(x1: &PcSeg, position: usize, new_pc: i64) -> Result<OrbitBijection> {
    if position == 0 || position > x1.len() {
        return Err(Error::IndexOutOfRange(position, position, x1.len()));
    }
    let x2 = x1.with_entry(position, new_pc);
    for s in [x1, &x2] {
        if !tritone_condition(s) {
            return Err(Error::TritoneCondition(s.to_string()));
        }
    }
    Ok(extend_assignment(x1, &x2)?.with_kind(BijectionKind::Modification))
}

/// The four triad-to-seventh bijections, plus the alternate minor-seventh encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Table2 {
    Dom7Tr,
    Maj7Tr,
    Min7Tr,
    Dim7Tr,
    /// ⟨w,x,y⟩ ↦ ⟨w+x−y, w, x, y⟩, giving ⟨9,0,4,7⟩ for C.
    Min7TrAlt,
}

impl Table2 {
    pub const ALL: [Table2; 4] = [Table2::Dom7Tr, Table2::Maj7Tr, Table2::Min7Tr, Table2::Dim7Tr];

    #[must_use]
    pub fn name(self) -> &'static str {
        match self {
            Table2::Dom7Tr => "Dom7Tr",
            Table2::Maj7Tr => "Maj7Tr",
            Table2::Min7Tr => "Min7Tr",
            Table2::Dim7Tr => "Dim7Tr",
            Table2::Min7TrAlt => "Min7TrAlt",
        }
    }

    #[must_use]
    pub fn formula(self, s: &PcSeg) -> PcSeg {
        let e = s.entries();
        let (w, x, y) = (i64::from(e[0]), i64::from(e[1]), i64::from(e[2]));
        let v = match self {
            Table2::Dom7Tr => vec![w, x, y, 2 * y - x],
            Table2::Maj7Tr => vec![w, x, y, x + y - w],
            Table2::Min7Tr => vec![w, x, y, w + x - y],
            Table2::Dim7Tr => vec![2 * x - y, x, y, 2 * y - x],
            Table2::Min7TrAlt => vec![w + x - y, w, x, y],
        };
        PcSeg::new(s.modulus(), &v).expect("nonempty")
    }

    fn target(self) -> OrbitSet {
        let cat = catalog();
        match self {
            Table2::Dom7Tr => cat.set(ChordFamily::DomHalfDim).clone(),
            Table2::Maj7Tr => cat.set(ChordFamily::Maj7).clone(),
            Table2::Min7Tr => cat.set(ChordFamily::Min7).clone(),
            Table2::Dim7Tr => cat.set(ChordFamily::Dim7).clone(),
            Table2::Min7TrAlt => ti_orbit(&PcSeg::chromatic(&[9, 0, 4, 7])).with_name("MinorSeventhChordsAlt"),
        }
    }
}

impl std::str::FromStr for Table2 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Table2::Dom7Tr, Table2::Maj7Tr, Table2::Min7Tr, Table2::Dim7Tr, Table2::Min7TrAlt]
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

/// Tabulates a triad-to-seventh formula and cross-checks it against the
/// equivariant extension of its value on ⟨0,4,7⟩.
pub fn table2_bijection(which: Table2) -> Result<OrbitBijection> {
    let source = catalog().set(ChordFamily::Triads).clone();
    let b = OrbitBijection::from_fn(which.name(), source, which.target(), |s| which.formula(s))?
        .with_kind(BijectionKind::Formula);
    let c = PcSeg::chromatic(&[0, 4, 7]);
    let ext = extend_assignment(&c, &which.formula(&c))?;
    if ext.pairs() != b.pairs() {
        return Err(Error::Bijection(format!("{} formula disagrees with its equivariant extension", which.name())));
    }
    Ok(b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Equivariance {
    Equivariant,
    AntiEquivariant,
    Neither,
}

/// Above this group order anti-equivariance is checked on generators plus a sample.
pub const EXHAUSTIVE_LIMIT: usize = 48;

/// Classifies `b` against a group acting on a universe that contains source and target.
/// A map that is both equivariant and anti-equivariant is reported as equivariant.
pub fn check_equivariance(b: &OrbitBijection, group: &GeneratedGroup) -> Result<Equivariance> {
    let u = group.universe();
    let src: Vec<usize> = b.source.elements().iter().map(|s| u.require(s)).collect::<Result<_>>()?;
    let img: Vec<usize> = src.iter().map(|&x| u.require(b.apply(u.seg(x)).expect("source member"))).collect::<Result<_>>()?;
    let mut equi = true;
    for g in group.generators() {
        for (&x, &fx) in src.iter().zip(&img) {
            match b.apply(u.seg(g.apply(x))) {
                Some(s) if u.index_of(s) == Some(g.apply(fx)) => {}
                _ => {
                    equi = false;
                    break;
                }
            }
        }
    }
    if equi {
        return Ok(Equivariance::Equivariant);
    }
    let elements: Vec<&Perm> = if group.order() <= EXHAUSTIVE_LIMIT {
        group.elements().iter().collect()
    } else {
        let step = group.order() / 64 + 1;
        group.generators().iter().chain(group.elements().iter().step_by(step)).collect()
    };
    for g in elements {
        let gi = g.inverse();
        for (&x, &fx) in src.iter().zip(&img) {
            match b.apply(u.seg(g.apply(x))) {
                Some(s) if u.index_of(s) == Some(gi.apply(fx)) => {}
                _ => return Ok(Equivariance::Neither),
            }
        }
    }
    Ok(Equivariance::AntiEquivariant)
}

/// `b ∘ h ∘ b^-1` on the target set, where `h` acts on a universe containing the source.
pub fn conjugate_perm(b: &OrbitBijection, h: &Perm, hu: &Universe) -> Result<Perm> {
    let mut images = Vec::with_capacity(b.target.len());
    for t in b.target.elements() {
        let s = b.apply_inverse(t).expect("target member");
        let hs = hu.seg(h.apply(hu.require(s)?));
        let out = b.apply(hs).ok_or_else(|| Error::Scope(format!("{hs} leaves the source set")))?;
        images.push(b.target.position(out).expect("target member") as u32);
    }
    Perm::from_images(images)
}

/// The conjugate group on `b`'s target, with the same generator names.
pub fn conjugate_group(b: &OrbitBijection, h: &GeneratedGroup) -> Result<GeneratedGroup> {
    let u = Arc::new(Universe::single(b.target.clone()));
    let gens = h
        .named_generators()
        .into_iter()
        .map(|(n, p)| conjugate_perm(b, &p, h.universe()).map(|c| (n, c)))
        .collect::<Result<Vec<_>>>()?;
    GeneratedGroup::generate(u, gens)
}
