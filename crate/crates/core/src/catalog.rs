//! The five chord families as TI-orbits, with chord-symbol parsing and formatting.

use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pitchclass::{ti_orbit, Form, Modulus, OrbitSet, PcSeg};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ChordQuality {
    MajorTriad,
    MinorTriad,
    Dom7,
    HalfDim7,
    Maj7,
    Min7,
    Dim7,
}

impl ChordQuality {
    fn suffix(self) -> &'static str {
        match self {
            ChordQuality::MajorTriad | ChordQuality::MinorTriad => "",
            ChordQuality::Dom7 => "7",
            ChordQuality::HalfDim7 => "h7",
            ChordQuality::Maj7 => "M7",
            ChordQuality::Min7 => "m7",
            ChordQuality::Dim7 => "o7",
        }
    }

    #[must_use]
    pub fn family(self) -> ChordFamily {
        match self {
            ChordQuality::MajorTriad | ChordQuality::MinorTriad => ChordFamily::Triads,
            ChordQuality::Dom7 | ChordQuality::HalfDim7 => ChordFamily::DomHalfDim,
            ChordQuality::Maj7 => ChordFamily::Maj7,
            ChordQuality::Min7 => ChordFamily::Min7,
            ChordQuality::Dim7 => ChordFamily::Dim7,
        }
    }

    /// Form used when a symbol carries no `:T`/`:I` selector.
    #[must_use]
    pub fn default_form(self) -> Form {
        match self {
            ChordQuality::MajorTriad | ChordQuality::Dom7 | ChordQuality::Maj7 | ChordQuality::Dim7 => Form::T,
            ChordQuality::MinorTriad | ChordQuality::HalfDim7 | ChordQuality::Min7 => Form::I,
        }
    }

    fn allowed_forms(self) -> &'static [Form] {
        match self {
            ChordQuality::MajorTriad | ChordQuality::Dom7 => &[Form::T],
            ChordQuality::MinorTriad | ChordQuality::HalfDim7 => &[Form::I],
            _ => &[Form::T, Form::I],
        }
    }
}

/// The five chord families, in catalog order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ChordFamily {
    Triads,
    DomHalfDim,
    Maj7,
    Min7,
    Dim7,
}

impl ChordFamily {
    pub const ALL: [ChordFamily; 5] = [
        ChordFamily::Triads,
        ChordFamily::DomHalfDim,
        ChordFamily::Maj7,
        ChordFamily::Min7,
        ChordFamily::Dim7,
    ];

    #[must_use]
    pub fn generator(self) -> PcSeg {
        PcSeg::chromatic(match self {
            ChordFamily::Triads => &[0, 4, 7],
            ChordFamily::DomHalfDim => &[0, 4, 7, 10],
            ChordFamily::Maj7 => &[0, 4, 7, 11],
            ChordFamily::Min7 => &[0, 4, 7, 9],
            ChordFamily::Dim7 => &[1, 4, 7, 10],
        })
    }

    #[must_use]
    pub fn set_name(self) -> &'static str {
        match self {
            ChordFamily::Triads => "DualRootPosTriads",
            ChordFamily::DomHalfDim => "DomHalfDiminished",
            ChordFamily::Maj7 => "MajorSeventhChords",
            ChordFamily::Min7 => "MinorSeventhChords",
            ChordFamily::Dim7 => "DimSeventhChords",
        }
    }

    /// Short scope names used on the command line.
    pub fn from_scope(name: &str) -> Option<ChordFamily> {
        Some(match name.to_ascii_lowercase().as_str() {
            "triads" | "dualrootpostriads" => ChordFamily::Triads,
            "dom7" | "domhalfdim" | "domhalfdiminished" => ChordFamily::DomHalfDim,
            "maj7" | "majorseventhchords" => ChordFamily::Maj7,
            "min7" | "minorseventhchords" => ChordFamily::Min7,
            "dim7" | "dimseventhchords" => ChordFamily::Dim7,
            _ => return None,
        })
    }

    fn quality(self, form: Form) -> ChordQuality {
        match (self, form) {
            (ChordFamily::Triads, Form::T) => ChordQuality::MajorTriad,
            (ChordFamily::Triads, Form::I) => ChordQuality::MinorTriad,
            (ChordFamily::DomHalfDim, Form::T) => ChordQuality::Dom7,
            (ChordFamily::DomHalfDim, Form::I) => ChordQuality::HalfDim7,
            (ChordFamily::Maj7, _) => ChordQuality::Maj7,
            (ChordFamily::Min7, _) => ChordQuality::Min7,
            (ChordFamily::Dim7, _) => ChordQuality::Dim7,
        }
    }

    /// 1-based position of the root entry for a given form.
    fn root_position(self, form: Form) -> usize {
        match (self, form) {
            (ChordFamily::Triads, Form::I) => 3,
            (ChordFamily::Min7, Form::T) => 4,
            (ChordFamily::Min7, Form::I) => 3,
            (_, Form::T) => 1,
            (_, Form::I) => 4,
        }
    }
}

impl fmt::Display for ChordFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.set_name())
    }
}

/// The five 24-chord orbit sets.
#[derive(Debug, Clone)]
pub struct Catalog {
    sets: Vec<OrbitSet>,
}

impl Catalog {
    #[must_use]
    pub fn set(&self, family: ChordFamily) -> &OrbitSet {
        &self.sets[ChordFamily::ALL.iter().position(|&f| f == family).unwrap()]
    }

    #[must_use]
    pub fn sets(&self) -> &[OrbitSet] {
        &self.sets
    }

    /// Family, form, and position of a catalog member.
    #[must_use]
    pub fn locate(&self, s: &PcSeg) -> Option<(ChordFamily, Form, usize)> {
        for (fam, set) in ChordFamily::ALL.iter().zip(&self.sets) {
            if let Some(i) = set.position(s) {
                return Some((*fam, set.form_of(i).unwrap(), i));
            }
        }
        None
    }
}

#[must_use]
pub fn build_catalog() -> Catalog {
    Catalog {
        sets: ChordFamily::ALL
            .iter()
            .map(|f| ti_orbit(&f.generator()).with_name(f.set_name()))
            .collect(),
    }
}

/// Shared catalog instance.
pub fn catalog() -> &'static Catalog {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    CATALOG.get_or_init(build_catalog)
}

const UPPER: [&str; 12] = ["C", "C#", "D", "Eb", "E", "F", "F#", "G", "Ab", "A", "Bb", "B"];
const LOWER: [&str; 12] = ["c", "c#", "d", "d#", "e", "f", "f#", "g", "g#", "a", "bb", "b"];

/// Chord symbol: root plus quality, with the representative form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChordSymbol {
    pub root: u32,
    pub quality: ChordQuality,
    pub form: Form,
}

impl ChordSymbol {
    #[must_use]
    pub fn to_pcseg(&self) -> PcSeg {
        let r = self.root as i64;
        let e: Vec<i64> = match (self.quality, self.form) {
            (ChordQuality::MajorTriad, _) => vec![r, r + 4, r + 7],
            (ChordQuality::MinorTriad, _) => vec![r + 7, r + 3, r],
            (ChordQuality::Dom7, _) => vec![r, r + 4, r + 7, r + 10],
            (ChordQuality::HalfDim7, _) => vec![r + 10, r + 6, r + 3, r],
            (ChordQuality::Maj7, Form::T) => vec![r, r + 4, r + 7, r + 11],
            (ChordQuality::Maj7, Form::I) => vec![r + 11, r + 7, r + 4, r],
            (ChordQuality::Min7, Form::T) => vec![r + 3, r + 7, r + 10, r],
            (ChordQuality::Min7, Form::I) => vec![r + 7, r + 3, r, r + 10],
            (ChordQuality::Dim7, Form::T) => vec![r, r + 3, r + 6, r + 9],
            (ChordQuality::Dim7, Form::I) => vec![r + 9, r + 6, r + 3, r],
        };
        PcSeg::chromatic(&e)
    }
}

impl fmt::Display for ChordSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.root as usize % 12;
        if self.quality == ChordQuality::MinorTriad {
            return f.write_str(LOWER[r]);
        }
        write!(f, "{}{}", UPPER[r], self.quality.suffix())?;
        if self.form != self.quality.default_form() {
            f.write_str(match self.form {
                Form::T => ":T",
                Form::I => ":I",
            })?;
        }
        Ok(())
    }
}

/// Identifies a catalog member by root, quality, and form.
pub fn symbol_of(s: &PcSeg) -> Result<ChordSymbol> {
    let (family, form, _) = catalog().locate(s).ok_or_else(|| Error::NotInCatalog(s.to_string()))?;
    Ok(ChordSymbol {
        root: s.at(family.root_position(form)),
        quality: family.quality(form),
        form,
    })
}

/// The root of a catalog member.
pub fn root_of(s: &PcSeg) -> Result<u32> {
    symbol_of(s).map(|c| c.root)
}

pub fn format_chord(s: &PcSeg) -> Result<String> {
    symbol_of(s).map(|c| c.to_string())
}

/// Chord symbol when `s` is a catalog member, otherwise the segment itself.
#[must_use]
pub fn chord_label(s: &PcSeg) -> String {
    if s.modulus() == Modulus::CHROMATIC {
        if let Ok(name) = format_chord(s) {
            return name;
        }
    }
    s.to_string()
}

fn letter_pc(c: char) -> Option<i64> {
    Some(match c.to_ascii_uppercase() {
        'C' => 0,
        'D' => 2,
        'E' => 4,
        'F' => 5,
        'G' => 7,
        'A' => 9,
        'B' => 11,
        _ => return None,
    })
}

/// Parses a chord symbol. `form` overrides the quality's default representative.
///
/// Grammar: `[A-G]` then optional `#`/`b`, then one of ``, `m`, `7`, `M7`,
/// `maj7`, `m7`, `-7`, `h7`, `m7b5`, `o7`, `dim7`; a lowercase letter with no
/// suffix is a minor triad. A trailing `:T` or `:I` picks the representative.
pub fn parse_chord(text: &str, form: Option<Form>) -> Result<PcSeg> {
    parse_symbol(text, form).map(|c| c.to_pcseg())
}

pub fn parse_symbol(text: &str, form: Option<Form>) -> Result<ChordSymbol> {
    let lead = text.len() - text.trim_start().len();
    let t = text.trim();
    let err = |position: usize, message: &str| Error::Parse { position: lead + position, message: message.into() };
    let mut chars = t.char_indices();
    let (_, letter) = chars.next().ok_or_else(|| err(0, "empty chord symbol"))?;
    let mut root = letter_pc(letter).ok_or_else(|| err(0, "expected a root letter A-G"))?;
    let lowercase = letter.is_ascii_lowercase();
    let mut rest = &t[letter.len_utf8()..];
    let mut pos = letter.len_utf8();
    if let Some(r) = rest.strip_prefix('#') {
        root += 1;
        rest = r;
        pos += 1;
    } else if let Some(r) = rest.strip_prefix('b') {
        root -= 1;
        rest = r;
        pos += 1;
    }
    let (suffix, selector) = match rest.find(':') {
        Some(i) => (&rest[..i], Some((&rest[i + 1..], pos + i + 1))),
        None => (rest, None),
    };
    let quality = if lowercase {
        if !suffix.is_empty() {
            return Err(err(pos, "a lowercase root denotes a minor triad and takes no suffix"));
        }
        ChordQuality::MinorTriad
    } else {
        match suffix {
            "" => ChordQuality::MajorTriad,
            "m" => ChordQuality::MinorTriad,
            "7" => ChordQuality::Dom7,
            "M7" | "maj7" => ChordQuality::Maj7,
            "m7" | "-7" => ChordQuality::Min7,
            "h7" | "m7b5" => ChordQuality::HalfDim7,
            "o7" | "dim7" => ChordQuality::Dim7,
            other => return Err(Error::UnknownQuality(other.to_string())),
        }
    };
    let mut chosen = form.unwrap_or(quality.default_form());
    if let Some((sel, at)) = selector {
        chosen = match sel {
            "T" => Form::T,
            "I" => Form::I,
            _ => return Err(err(at, "form selector must be T or I")),
        };
    }
    if !quality.allowed_forms().contains(&chosen) {
        return Err(err(pos, "form selector not available for this quality"));
    }
    Ok(ChordSymbol { root: root.rem_euclid(12) as u32, quality, form: chosen })
}

/// Reads a chord-list file body: whitespace or comma separated, `#` starts a comment.
/// Entries in angle brackets are read as raw segments.
pub fn parse_chord_list(text: &str, modulus: Modulus) -> Result<Vec<PcSeg>> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = match line.find('#') {
            Some(0) => continue,
            _ => line,
        };
        let mut rest = line;
        while !rest.trim().is_empty() {
            rest = rest.trim_start_matches(|c: char| c.is_whitespace() || c == ',');
            if rest.is_empty() {
                break;
            }
            if rest.starts_with('<') {
                let end = rest.find('>').ok_or(Error::Parse { position: 0, message: "unterminated segment".into() })?;
                out.push(PcSeg::parse(&rest[..=end], modulus)?);
                rest = &rest[end + 1..];
            } else {
                let end = rest.find(|c: char| c.is_whitespace() || c == ',').unwrap_or(rest.len());
                out.push(parse_chord(&rest[..end], None)?);
                rest = &rest[end..];
            }
        }
    }
    Ok(out)
}
