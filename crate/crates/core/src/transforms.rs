//! Named transformations as permutations: T/I, Schritte, contextual inversions, P/L/R.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::perm::{Perm, Universe};
use crate::pitchclass::{apply_ti, ti_solve, Form, Modulus, PcSeg, TiElement};

/// A single transformation given by a formula on segments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Atom {
    T(i64),
    I(i64),
    /// Schritt: T_i on T-forms, T_{-i} on I-forms.
    Q(i64),
    /// Contextual inversion by entries i and j (1-based).
    K(usize, usize),
    P,
    L,
    R,
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::T(n) => write!(f, "T{n}"),
            Atom::I(n) => write!(f, "I{n}"),
            Atom::Q(n) => write!(f, "Q{n}"),
            Atom::K(i, j) => write!(f, "K{i},{j}"),
            Atom::P => write!(f, "P"),
            Atom::L => write!(f, "L"),
            Atom::R => write!(f, "R"),
        }
    }
}

/// True for the 24 consonant triads in dualistic root position (mod 12).
#[must_use]
pub fn is_consonant_triad(s: &PcSeg) -> bool {
    if s.len() != 3 || s.modulus() != Modulus::CHROMATIC {
        return false;
    }
    matches!(ti_solve(&PcSeg::chromatic(&[0, 4, 7]), s), Ok(Some(_)))
}

/// I_{y_i + y_j}(Y), 1-based. `None` when an index exceeds the length.
#[must_use]
pub fn k_formula(s: &PcSeg, i: usize, j: usize) -> Option<PcSeg> {
    if i == 0 || j == 0 || i > s.len() || j > s.len() {
        return None;
    }
    Some(s.invert(i64::from(s.at(i)) + i64::from(s.at(j))))
}

impl Atom {
    /// Applies the formula; `None` where it is not defined on `s`.
    #[must_use]
    pub fn apply(&self, s: &PcSeg, form: Option<Form>) -> Option<PcSeg> {
        let m = s.modulus();
        match *self {
            Atom::T(n) => Some(apply_ti(&TiElement::t(n, m), s)),
            Atom::I(n) => Some(apply_ti(&TiElement::i(n, m), s)),
            Atom::Q(n) => match form? {
                Form::T => Some(s.transpose(n)),
                Form::I => Some(s.transpose(-n)),
            },
            Atom::K(i, j) => k_formula(s, i, j),
            Atom::P => is_consonant_triad(s).then(|| k_formula(s, 1, 3)).flatten(),
            Atom::L => is_consonant_triad(s).then(|| k_formula(s, 2, 3)).flatten(),
            Atom::R => is_consonant_triad(s).then(|| k_formula(s, 1, 2)).flatten(),
        }
    }

    /// Images on every point of `u`, `None` where undefined or landing outside `u`.
    #[must_use]
    pub fn partial_images(&self, u: &Universe) -> Vec<Option<u32>> {
        (0..u.len())
            .map(|x| {
                let (b, p) = u.locate(x);
                let form = u.block(b).form_of(p);
                self.apply(u.seg(x), form).and_then(|y| u.index_of(&y)).map(|y| y as u32)
            })
            .collect()
    }
}

/// A permutation with the name it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedTransform {
    pub name: String,
    pub perm: Perm,
    pub scope: Arc<Universe>,
}

impl NamedTransform {
    #[must_use]
    pub fn apply(&self, s: &PcSeg) -> Option<&PcSeg> {
        self.scope.index_of(s).map(|x| self.scope.seg(self.perm.apply(x)))
    }

    #[must_use]
    pub fn pair(&self) -> (String, Perm) {
        (self.name.clone(), self.perm.clone())
    }
}

fn total(atom: Atom, u: &Arc<Universe>) -> Result<NamedTransform> {
    let images = atom
        .partial_images(u)
        .into_iter()
        .enumerate()
        .map(|(x, y)| y.ok_or_else(|| Error::Scope(format!("{atom} undefined on {}", u.seg(x)))))
        .collect::<Result<Vec<u32>>>()?;
    Ok(NamedTransform { name: atom.to_string(), perm: Perm::from_images(images)?, scope: u.clone() })
}

/// Q_i on a universe whose blocks record T/I provenance.
pub fn schritt(i: i64, u: &Arc<Universe>) -> Result<NamedTransform> {
    if let Some(b) = u.blocks().iter().find(|b| b.forms().is_none()) {
        return Err(Error::NoFormPartition(b.name().to_string()));
    }
    total(Atom::Q(i), u)
}

/// K_{i,j}: Y ↦ I_{y_i + y_j}(Y).
pub fn contextual_inversion(i: usize, j: usize, u: &Arc<Universe>) -> Result<NamedTransform> {
    let min_len = u.blocks().iter().flat_map(|b| b.elements().first()).map(PcSeg::len).min().unwrap_or(0);
    if i == 0 || j == 0 || i > min_len || j > min_len {
        return Err(Error::IndexOutOfRange(i, j, min_len));
    }
    total(Atom::K(i, j), u)
}

/// P, L, R on a universe of consonant triads.
pub fn plr(u: &Arc<Universe>) -> Result<[NamedTransform; 3]> {
    if let Some(x) = (0..u.len()).find(|&x| !is_consonant_triad(u.seg(x))) {
        return Err(Error::Scope(format!("{} is not a consonant triad", u.seg(x))));
    }
    Ok([total(Atom::P, u)?, total(Atom::L, u)?, total(Atom::R, u)?])
}

/// Blockwise entrywise action of a TI element.
pub fn ti_as_perm(e: &TiElement, u: &Arc<Universe>) -> Result<NamedTransform> {
    let atom = match e.kind {
        crate::pitchclass::TiKind::T => Atom::T(i64::from(e.index)),
        crate::pitchclass::TiKind::I => Atom::I(i64::from(e.index)),
    };
    total(atom, u).map_err(|_| Error::Scope(format!("universe is not closed under {e}")))
}

/// The permutation of a total atom on `u`.
pub fn atom_perm(atom: Atom, u: &Arc<Universe>) -> Result<Perm> {
    total(atom, u).map(|t| t.perm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog, ChordFamily};

    fn triads() -> Arc<Universe> {
        Arc::new(Universe::single(catalog().set(ChordFamily::Triads).clone()))
    }

    #[test]
    fn plr_examples() {
        let u = triads();
        let [p, l, r] = plr(&u).unwrap();
        let c = PcSeg::chromatic(&[0, 4, 7]);
        assert_eq!(p.apply(&c).unwrap(), &PcSeg::chromatic(&[7, 3, 0]));
        assert_eq!(l.apply(&c).unwrap(), &PcSeg::chromatic(&[11, 7, 4]));
        assert_eq!(r.apply(&c).unwrap(), &PcSeg::chromatic(&[4, 0, 9]));
    }

    #[test]
    fn schritt_on_dominants() {
        let u = Arc::new(Universe::single(catalog().set(ChordFamily::DomHalfDim).clone()));
        let q9 = schritt(9, &u).unwrap();
        assert_eq!(q9.apply(&PcSeg::chromatic(&[5, 9, 0, 3])).unwrap(), &PcSeg::chromatic(&[2, 6, 9, 0]));
        assert!(schritt(0, &u).unwrap().perm.is_identity());
    }

    #[test]
    fn k_examples() {
        let u = Arc::new(Universe::single(catalog().set(ChordFamily::DomHalfDim).clone()));
        let k14 = contextual_inversion(1, 4, &u).unwrap();
        assert_eq!(k14.apply(&PcSeg::chromatic(&[0, 4, 7, 10])).unwrap(), &PcSeg::chromatic(&[10, 6, 3, 0]));
        let k34 = contextual_inversion(3, 4, &u).unwrap();
        assert_eq!(k34.apply(&PcSeg::chromatic(&[7, 3, 0, 9])).unwrap(), &PcSeg::chromatic(&[2, 6, 9, 0]));
        assert!(matches!(contextual_inversion(1, 5, &u), Err(Error::IndexOutOfRange(1, 5, 4))));
        assert!(plr(&u).is_err());
    }
}
