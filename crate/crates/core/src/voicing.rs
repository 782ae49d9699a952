//! 4×4 voicing matrices over Z_12.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Four voices over Z_12, in the order of the start vector (4, 9, 0, 4).
pub type Voicing = [u32; 4];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Mat4(pub [[u32; 4]; 4]);

pub const U_SOPR: Mat4 = Mat4([[8, 7, 3, 7], [0, 1, 0, 0], [0, 0, 1, 0], [5, 5, 9, 6]]);
pub const U_ALTO: Mat4 = Mat4([[11, 1, 10, 3], [0, 1, 0, 0], [2, 7, 3, 1], [0, 0, 0, 1]]);
pub const U_TENOR: Mat4 = Mat4([[2, 1, 7, 3], [11, 0, 5, 9], [0, 0, 1, 0], [0, 0, 0, 1]]);

pub const OMNIBUS_START: Voicing = [4, 9, 0, 4];

fn m12(x: i64) -> u32 {
    x.rem_euclid(12) as u32
}

impl Mat4 {
    pub const IDENTITY: Mat4 = Mat4([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]);
    pub const ZERO: Mat4 = Mat4([[0; 4]; 4]);

    /// Reduces every entry mod 12.
    #[must_use]
    pub fn new(rows: [[i64; 4]; 4]) -> Self {
        Mat4(rows.map(|r| r.map(m12)))
    }

    /// Reads 16 integers, row-major.
    pub fn from_slice(v: &[i64]) -> Result<Self> {
        if v.len() != 16 {
            return Err(Error::Scope(format!("expected 16 entries, got {}", v.len())));
        }
        let mut rows = [[0i64; 4]; 4];
        for (i, x) in v.iter().enumerate() {
            rows[i / 4][i % 4] = *x;
        }
        Ok(Mat4::new(rows))
    }

    #[must_use]
    pub fn mul(&self, o: &Mat4) -> Mat4 {
        let mut r = [[0u32; 4]; 4];
        for (i, row) in r.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = (0..4).map(|k| self.0[i][k] * o.0[k][j]).sum::<u32>() % 12;
            }
        }
        Mat4(r)
    }

    #[must_use]
    pub fn apply(&self, v: &Voicing) -> Voicing {
        let mut w = [0; 4];
        for (i, e) in w.iter_mut().enumerate() {
            *e = (0..4).map(|k| self.0[i][k] * v[k]).sum::<u32>() % 12;
        }
        w
    }

    /// Cofactor expansion over the integers, reduced mod 12.
    #[must_use]
    pub fn det(&self) -> u32 {
        let a: Vec<Vec<i64>> = self.0.iter().map(|r| r.iter().map(|&x| i64::from(x)).collect()).collect();
        m12(det_int(&a))
    }

    #[must_use]
    pub fn in_sl4(&self) -> bool {
        self.det() == 1
    }

    #[must_use]
    pub fn is_invertible(&self) -> bool {
        let d = self.det();
        !d.is_multiple_of(2) && !d.is_multiple_of(3)
    }

    /// Least k ≥ 1 with `self^k = I`.
    pub fn order(&self) -> Result<usize> {
        if !self.is_invertible() {
            return Err(Error::NotInvertible);
        }
        let mut p = *self;
        let mut k = 1;
        while p != Mat4::IDENTITY {
            p = p.mul(self);
            k += 1;
        }
        Ok(k)
    }

    #[must_use]
    pub fn pow(&self, k: u32) -> Mat4 {
        (0..k).fold(Mat4::IDENTITY, |acc, _| acc.mul(self))
    }
}

fn det_int(a: &[Vec<i64>]) -> i64 {
    let n = a.len();
    if n == 1 {
        return a[0][0];
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> =
                a[1..].iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, &x)| x).collect()).collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * a[0][j] * det_int(&minor)
        })
        .sum()
}

impl fmt::Display for Mat4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            self.0.iter().map(|r| r.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")).collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Voice {
    Sopr,
    Alto,
    Tenor,
}

impl Voice {
    #[must_use]
    pub fn matrix(self) -> Mat4 {
        match self {
            Voice::Sopr => U_SOPR,
            Voice::Alto => U_ALTO,
            Voice::Tenor => U_TENOR,
        }
    }
}

impl FromStr for Voice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sopr" | "soprano" | "s" => Ok(Voice::Sopr),
            "alto" | "a" => Ok(Voice::Alto),
            "tenor" | "t" => Ok(Voice::Tenor),
            other => Err(Error::UnknownName(other.to_string())),
        }
    }
}

impl fmt::Display for Voice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Voice::Sopr => "sopr",
            Voice::Alto => "alto",
            Voice::Tenor => "tenor",
        })
    }
}

/// The published 12-step schedule.
pub const OMNIBUS_SCHEDULE: [Voice; 12] = [
    Voice::Sopr,
    Voice::Sopr,
    Voice::Alto,
    Voice::Alto,
    Voice::Alto,
    Voice::Tenor,
    Voice::Tenor,
    Voice::Tenor,
    Voice::Sopr,
    Voice::Sopr,
    Voice::Sopr,
    Voice::Alto,
];

pub fn parse_schedule(text: &str) -> Result<Vec<Voice>> {
    text.split(',').filter(|s| !s.trim().is_empty()).map(str::parse).collect()
}

pub fn parse_voicing(text: &str) -> Result<Voicing> {
    let v = text
        .split(',')
        .map(|s| s.trim().parse::<i64>().map(m12))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| Error::Parse { position: 0, message: e.to_string() })?;
    v.try_into().map_err(|_| Error::Parse { position: 0, message: "a voicing has four entries".into() })
}

/// Voicings visited by the schedule, starting with `start`.
#[must_use]
pub fn trace(start: Voicing, schedule: &[Voice]) -> Vec<Voicing> {
    let mut out = vec![start];
    for v in schedule {
        let next = v.matrix().apply(out.last().expect("nonempty"));
        out.push(next);
    }
    out
}

/// Sorted distinct pitch classes.
#[must_use]
pub fn pc_set(v: &Voicing) -> Vec<u32> {
    let mut s = v.to_vec();
    s.sort_unstable();
    s.dedup();
    s
}

/// `(before, after)` pairs for the steps of the trace that use `voice`.
#[must_use]
pub fn harvest_pairs(start: Voicing, schedule: &[Voice], voice: Voice) -> Vec<(Voicing, Voicing)> {
    let t = trace(start, schedule);
    let mut pairs: Vec<_> = schedule.iter().enumerate().filter(|(_, v)| **v == voice).map(|(i, _)| (t[i], t[i + 1])).collect();
    pairs.sort_unstable();
    pairs.dedup();
    pairs
}

type Row = [u32; 4];

fn all_rows() -> impl Iterator<Item = Row> {
    (0..12u32.pow(4)).map(|n| [n / 1728, (n / 144) % 12, (n / 12) % 12, n % 12])
}

fn dot(r: &Row, v: &Voicing) -> u32 {
    (0..4).map(|k| r[k] * v[k]).sum::<u32>() % 12
}

/// Candidate first rows and fourth rows meeting every constraint.
#[must_use]
pub fn family_row_candidates(constraints: &[(Voicing, Voicing)]) -> (Vec<Row>, Vec<Row>) {
    if constraints.iter().any(|(v, w)| v[1] != w[1] || v[2] != w[2]) {
        return (vec![], vec![]);
    }
    let pick = |i: usize| all_rows().filter(|r| constraints.iter().all(|(v, w)| dot(r, v) == w[i])).collect::<Vec<_>>();
    (pick(0), pick(3))
}

/// All matrices `[a; e2; e3; d]` with determinant 1 and `m·v = w` for every pair,
/// sorted lexicographically.
#[must_use]
pub fn enumerate_soprano_bass_family(constraints: &[(Voicing, Voicing)]) -> Vec<Mat4> {
    let (firsts, fourths) = family_row_candidates(constraints);
    let mut out = Vec::new();
    for a in &firsts {
        for d in &fourths {
            // with middle rows e2, e3 the determinant is a1 d4 - a4 d1
            if m12(i64::from(a[0] * d[3]) - i64::from(a[3] * d[0])) == 1 {
                out.push(Mat4([*a, [0, 1, 0, 0], [0, 0, 1, 0], *d]));
            }
        }
    }
    out.sort_unstable();
    out
}

/// Size of the unconstrained family, counted over the (a1, a4) and (d1, d4) pairs;
/// the other four free entries contribute 12^4.
#[must_use]
pub fn family_count_unconstrained() -> u64 {
    let mut sl2 = 0u64;
    for a1 in 0..12i64 {
        for a4 in 0..12 {
            for d1 in 0..12 {
                for d4 in 0..12 {
                    if m12(a1 * d4 - a4 * d1) == 1 {
                        sl2 += 1;
                    }
                }
            }
        }
    }
    sl2 * 12u64.pow(4)
}

/// The count the published example states for its constrained family.
pub const PUBLISHED_FAMILY_COUNT: usize = 36;
