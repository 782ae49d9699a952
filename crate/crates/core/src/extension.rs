//! Extending a group acting on one orbit set to a disjoint union of several,
//! together with the dual group and a clause-by-clause verification report.

use std::sync::Arc;

use serde::Serialize;

use crate::bijection::{check_equivariance, Equivariance, OrbitBijection};
use crate::error::{Error, Result};
use crate::perm::{
    block_shift, centralizer_simply_transitive, commutes_elementwise, is_simply_transitive, ses_check,
    verify_product_structure, BlockShift, GeneratedGroup, Perm, ProductKind, Report, Universe,
};
use crate::pitchclass::{apply_ti, Form, OrbitSet, PcSeg, TiElement};
use crate::transforms::{atom_perm, schritt, Atom};

/// A center set with equivariant arms `f_j: S_1 → S_j`; the first arm is the identity.
#[derive(Debug, Clone)]
pub struct StarDiagram {
    center: OrbitSet,
    arms: Vec<OrbitBijection>,
}

impl StarDiagram {
    /// `arms` lists `f_2, …, f_n`; the identity arm is prepended.
    pub fn new(center: OrbitSet, arms: Vec<OrbitBijection>) -> Result<Self> {
        for a in &arms {
            if *a.source() != center {
                return Err(Error::Bijection(format!("arm {} does not start at the center", a.name())));
            }
        }
        let mut all = vec![OrbitBijection::identity(&center)];
        all.extend(arms);
        Ok(StarDiagram { center, arms: all })
    }

    #[must_use]
    pub fn center(&self) -> &OrbitSet {
        &self.center
    }

    #[must_use]
    pub fn arms(&self) -> &[OrbitBijection] {
        &self.arms
    }

    /// Number of sets, center included.
    #[must_use]
    pub fn len(&self) -> usize {
        self.arms.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.arms.is_empty()
    }

    /// The disjoint union of the arm targets; fails if two targets overlap.
    pub fn universe(&self) -> Result<Universe> {
        Universe::new(self.arms.iter().map(|a| a.target().clone()).collect())
    }
}

/// The block-cycling permutation `⊔_j f_{j+1} ∘ f_j^{-1}`.
#[derive(Debug, Clone)]
pub struct MetaRotation {
    universe: Arc<Universe>,
    perm: Perm,
    order: usize,
    arms: Vec<OrbitBijection>,
}

impl MetaRotation {
    #[must_use]
    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    #[must_use]
    pub fn perm(&self) -> &Perm {
        &self.perm
    }

    #[must_use]
    pub fn order(&self) -> usize {
        self.order
    }

    #[must_use]
    pub fn arms(&self) -> &[OrbitBijection] {
        &self.arms
    }

    /// Transfers `h`, a permutation of the center, to every block by arm conjugation.
    pub fn lift(&self, h: &Perm) -> Result<Perm> {
        let center = self.arms[0].source();
        if h.len() != center.len() {
            return Err(Error::UniverseMismatch);
        }
        let u = &self.universe;
        let mut images = Vec::with_capacity(u.len());
        for x in 0..u.len() {
            let (b, _) = u.locate(x);
            let arm = &self.arms[b];
            let s1 = arm.apply_inverse(u.seg(x)).expect("block member");
            let y = h.apply(center.position(s1).expect("center member"));
            let t = arm.apply(center.get(y)).expect("center member");
            images.push(u.flat(b, arm.target().position(t).expect("arm target")) as u32);
        }
        Perm::from_images(images)
    }
}

/// Meta-rotation of a star diagram.
pub fn fbar_from_star(d: &StarDiagram) -> Result<MetaRotation> {
    let universe = Arc::new(d.universe()?);
    let n = d.len();
    let mut images = Vec::with_capacity(universe.len());
    for x in 0..universe.len() {
        let (b, _) = universe.locate(x);
        let next = (b + 1) % n;
        let s1 = d.arms[b].apply_inverse(universe.seg(x)).expect("block member");
        let t = d.arms[next].apply(s1).expect("center member");
        images.push(universe.flat(next, d.arms[next].target().position(t).expect("arm target")) as u32);
    }
    let perm = Perm::from_images(images)?;
    let order = perm.order();
    if order != n || block_shift(&universe, &perm).cyclic() != Some(1 % n) {
        return Err(Error::Verification(format!("meta-rotation has order {order}, expected {n}")));
    }
    Ok(MetaRotation { universe, perm, order, arms: d.arms.clone() })
}

/// `f ⊔ f^{-1}` on `source ⊔ target`.
pub fn fbar_two_sets(f: &OrbitBijection) -> Result<MetaRotation> {
    if f.source() == f.target() {
        return Err(Error::Scope("source and target coincide".into()));
    }
    fbar_from_star(&StarDiagram::new(f.source().clone(), vec![f.clone()])?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExtensionKind {
    Equivariant,
    AntiEquivariant,
}

/// Output of a verified extension. `hbar` and `hrot` are present for dual constructions;
/// `hrot` is the permutation adjoined to H (f̄ itself, or k̄ in the anti case).
#[derive(Debug, Clone)]
pub struct ExtensionResult {
    pub g: GeneratedGroup,
    pub gbar: GeneratedGroup,
    pub fbar: MetaRotation,
    pub h: Option<GeneratedGroup>,
    pub hbar: Option<GeneratedGroup>,
    pub hrot: Option<Perm>,
    pub report: Report,
}

fn fail(report: &Report) -> Error {
    let c = report.first_failure().expect("failing report");
    Error::Verification(format!("{}: {}", c.name, c.detail))
}

/// Builds `⟨G, f̄⟩` and checks every clause, returning the report even when a clause fails.
pub fn extension_report(g: &GeneratedGroup, fbar: &MetaRotation, kind: ExtensionKind) -> Result<(GeneratedGroup, Report)> {
    if g.universe().len() != fbar.universe.len() || **g.universe() != *fbar.universe {
        return Err(Error::UniverseMismatch);
    }
    let u = g.universe().clone();
    let f = &fbar.perm;
    let n = fbar.order;
    let mut r = Report::default();
    r.check(
        "fbar cycles the blocks",
        f.order() == n && block_shift(&u, f).cyclic() == Some(1 % n),
        format!("order {}", f.order()),
    );
    r.check(
        "G preserves every block",
        g.generators().iter().all(|s| block_shift(&u, s).cyclic() == Some(0)),
        "",
    );
    let finv = f.inverse();
    let equi = g.generators().iter().all(|s| s.commutes_with(f));
    let anti = g.generators().iter().all(|s| &(f * s) * &finv == s.inverse());
    let ok = match kind {
        ExtensionKind::Equivariant => equi,
        ExtensionKind::AntiEquivariant => anti,
    };
    if !ok {
        return Err(Error::Verification(format!("fbar is not {kind:?} for G")));
    }
    r.check(format!("fbar {kind:?} for G"), true, "");
    let pk = match kind {
        ExtensionKind::Equivariant => ProductKind::Direct,
        ExtensionKind::AntiEquivariant => ProductKind::Semidirect,
    };
    let prod = verify_product_structure(g, f, pk)?;
    r.extend(prod.report.clone());
    let mut gens = g.named_generators();
    gens.push(("fbar".into(), f.clone()));
    let gbar = GeneratedGroup::generate(u.clone(), gens)?;
    let shifts_ok = gbar
        .elements()
        .iter()
        .zip(&prod.coset_table)
        .all(|(p, &(_, i))| block_shift(&u, p).cyclic() == Some(i));
    r.check("coset g*fbar^i shifts blocks by i", shifts_ok, "");
    r.check("short exact sequence G -> Gbar -> <fbar>", ses_check(&gbar, g, f), format!("quotient order {n}"));
    let g1 = g.restrict_to_block(0)?;
    if is_simply_transitive(&g1) {
        r.check(
            "Gbar simply transitive",
            is_simply_transitive(&gbar) && gbar.order() == n * g.order(),
            format!("|Gbar| = {}, |S| = {}", gbar.order(), u.len()),
        );
    }
    Ok((gbar, r))
}

/// `⟨G, f̄⟩` with every clause verified.
pub fn extend_group(g: &GeneratedGroup, fbar: &MetaRotation, kind: ExtensionKind) -> Result<ExtensionResult> {
    let (gbar, report) = extension_report(g, fbar, kind)?;
    if !report.passed() {
        return Err(fail(&report));
    }
    Ok(ExtensionResult { g: g.clone(), gbar, fbar: fbar.clone(), h: None, hbar: None, hrot: None, report })
}

/// Extension of G together with the dual `H̄ = ⟨H, f̄⟩`, where H is the centralizer of G
/// on the center transferred to each block along the arms. When `h_names` is given its
/// permutations (of the center) must generate that centralizer, and name H's generators.
pub fn dual_extension(
    g: &GeneratedGroup,
    fbar: &MetaRotation,
    h_names: Option<Vec<(String, Perm)>>,
) -> Result<ExtensionResult> {
    let g1 = g.restrict_to_block(0)?;
    if !is_simply_transitive(&g1) {
        return Err(Error::NotSimplyTransitive);
    }
    let mut res = extend_group(g, fbar, ExtensionKind::Equivariant)?;
    let centralizer = centralizer_simply_transitive(&g1)?;
    let h1 = match h_names {
        Some(gens) => GeneratedGroup::generate(g1.universe().clone(), gens)?,
        None => centralizer.clone(),
    };
    let r = &mut res.report;
    r.check(
        "H is the centralizer of G on the center",
        h1.order() == centralizer.order() && centralizer.elements().iter().all(|p| h1.contains(p)),
        format!("|H| = {}", h1.order()),
    );
    let lifted = h1
        .named_generators()
        .into_iter()
        .map(|(n, p)| fbar.lift(&p).map(|q| (n, q)))
        .collect::<Result<Vec<_>>>()?;
    let u = g.universe().clone();
    let h = GeneratedGroup::generate(u.clone(), lifted.clone())?;
    let mut hgens = lifted;
    hgens.push(("fbar".into(), fbar.perm.clone()));
    let hbar = GeneratedGroup::generate(u.clone(), hgens)?;
    let gbar = &res.gbar;
    r.check("Gbar and Hbar commute elementwise", commutes_elementwise(gbar, &hbar), "");
    r.check(
        "Hbar simply transitive",
        is_simply_transitive(&hbar),
        format!("|Hbar| = {}", hbar.order()),
    );
    r.check(
        "|Gbar| = |Hbar| = n|G|",
        gbar.order() == hbar.order() && gbar.order() == fbar.order * g1.order(),
        format!("{} = {} = {}*{}", gbar.order(), hbar.order(), fbar.order, g1.order()),
    );
    let cz = centralizer_simply_transitive(gbar)?;
    r.check(
        "Hbar is the centralizer of Gbar",
        cz.order() == hbar.order() && cz.elements().iter().all(|p| hbar.contains(p)),
        "",
    );
    let arms = &fbar.arms;
    let center = arms[0].source();
    let nblocks = arms.len();
    let mut part6 = true;
    'outer: for hp in h1.elements() {
        let fh = &fbar.perm * &fbar.lift(hp)?;
        for x in 0..u.len() {
            let (b, _) = u.locate(x);
            let s1 = arms[b].apply_inverse(u.seg(x)).expect("block member");
            let hs = center.get(hp.apply(center.position(s1).expect("center")));
            let next = (b + 1) % nblocks;
            let t = arms[next].apply(hs).expect("center");
            if u.seg(fh.apply(x)) != t {
                part6 = false;
                break 'outer;
            }
        }
    }
    r.check("fbar*hbar on S_j equals f_(j+1) h f_j^-1", part6, "");
    if !res.report.passed() {
        return Err(fail(&res.report));
    }
    res.h = Some(h);
    res.hbar = Some(hbar);
    res.hrot = Some(fbar.perm.clone());
    Ok(res)
}

/// The five hypotheses of the anti-equivariant dual construction, in order.
pub const ANTI_HYPOTHESES: [&str; 5] = [
    "k^-1 f = f^-1 k",
    "G and H commute on S1",
    "f is H-equivariant",
    "k is G-equivariant",
    "G and H simply transitive on S1",
];

/// Hypotheses of the anti-equivariant dual construction, checked exhaustively.
/// `g` and `h` act on `S1 ⊔ S2` where `f, k: S1 → S2`.
pub fn anti_hypotheses(
    g: &GeneratedGroup,
    f: &OrbitBijection,
    h: &GeneratedGroup,
    k: &OrbitBijection,
) -> Result<Report> {
    let mut r = Report::default();
    let s1 = f.source();
    let k_then = s1.elements().iter().all(|s| {
        let lhs = k.apply_inverse(f.apply(s).expect("source"));
        let rhs = f.apply_inverse(k.apply(s).expect("source"));
        lhs.is_some() && lhs == rhs
    });
    r.check(ANTI_HYPOTHESES[0], k_then, "");
    let g1 = g.restrict_to_block(0)?;
    let h1 = h.restrict_to_block(0)?;
    r.check(ANTI_HYPOTHESES[1], commutes_elementwise(&g1, &h1), "");
    r.check(ANTI_HYPOTHESES[2], check_equivariance(f, h)? == Equivariance::Equivariant, "");
    r.check(ANTI_HYPOTHESES[3], check_equivariance(k, g)? == Equivariance::Equivariant, "");
    r.check(
        ANTI_HYPOTHESES[4],
        is_simply_transitive(&g1) && is_simply_transitive(&h1),
        format!("|G| = {}, |H| = {}, |S1| = {}", g1.order(), h1.order(), s1.len()),
    );
    Ok(r)
}

/// `Ḡ = ⟨G, f̄⟩` and `H̄ = ⟨H, k̄⟩` for anti-equivariant `f` (for G) and `k` (for H).
pub fn dual_extension_anti(
    g: &GeneratedGroup,
    f: &OrbitBijection,
    h: &GeneratedGroup,
    k: &OrbitBijection,
) -> Result<ExtensionResult> {
    let fbar = fbar_two_sets(f)?;
    let kbar = fbar_two_sets(k)?;
    if *kbar.universe != *fbar.universe || !g.same_universe(h) {
        return Err(Error::UniverseMismatch);
    }
    let mut report = anti_hypotheses(g, f, h, k)?;
    if !report.passed() {
        return Err(fail(&report));
    }
    let gx = extend_group(g, &fbar, ExtensionKind::AntiEquivariant)?;
    let hx = extend_group(h, &kbar, ExtensionKind::AntiEquivariant)?;
    report.extend(gx.report.clone());
    report.extend(hx.report);
    report.check("Gbar and Hbar commute elementwise", commutes_elementwise(&gx.gbar, &hx.gbar), "");
    report.check(
        "Gbar and Hbar simply transitive",
        is_simply_transitive(&gx.gbar) && is_simply_transitive(&hx.gbar),
        format!("|Gbar| = {}, |Hbar| = {}", gx.gbar.order(), hx.gbar.order()),
    );
    if !report.passed() {
        return Err(fail(&report));
    }
    Ok(ExtensionResult {
        g: g.clone(),
        gbar: gx.gbar,
        fbar,
        h: Some(h.clone()),
        hbar: Some(hx.gbar),
        hrot: Some(kbar.perm),
        report,
    })
}

/// `p = g ∘ rot^i` with `g` in G (or H) and `i` read from the block shift of `p`.
pub fn canonical_decompose(r: &ExtensionResult, p: &Perm) -> Result<(Perm, usize)> {
    let u = r.gbar.universe();
    let candidates = [
        (Some(&r.gbar), Some(&r.g), Some(r.fbar.perm())),
        (r.hbar.as_ref(), r.h.as_ref(), r.hrot.as_ref()),
    ];
    for (big, sub, rot) in candidates {
        let (Some(big), Some(sub), Some(rot)) = (big, sub, rot) else { continue };
        if !big.contains(p) {
            continue;
        }
        let i = match block_shift(u, p) {
            BlockShift::Mixed => return Err(Error::Verification("element splits a block".into())),
            s => s.cyclic().ok_or_else(|| Error::Verification("block map is not a rotation".into()))?,
        };
        let g = p * &rot.pow(-(i as i64));
        if !sub.contains(&g) || block_shift(u, &g).cyclic() != Some(0) {
            return Err(Error::Verification("factor is not in the base group".into()));
        }
        return Ok((g, i));
    }
    Err(Error::NotAMember)
}

/// Closure of every contextual inversion `K_{i,j}`, `i ≤ j`, on one orbit set.
pub fn contextual_inversion_subgroup(scope: &OrbitSet) -> Result<GeneratedGroup> {
    let u = Arc::new(Universe::single(scope.clone()));
    let k = scope.elements().first().map_or(0, PcSeg::len);
    let mut gens = Vec::new();
    for i in 1..=k {
        for j in i..=k {
            gens.push((format!("K{i},{j}"), atom_perm(Atom::K(i, j), &u)?));
        }
    }
    GeneratedGroup::generate(u, gens)
}

/// Reconstruction of the generalized contextual group of `x` from `⟨Q_1⟩` and `K_{1,2}`,
/// dual to `⟨T_1⟩` extended by `I_0`, on the T-forms and I-forms of `x`.
pub fn generalized_contextual_instance(x: &PcSeg) -> Result<ExtensionResult> {
    let m = x.modulus();
    let s1 = OrbitSet::t_orbit(x, Form::T).with_name("T-forms");
    let s2 = OrbitSet::t_orbit(&apply_ti(&TiElement::i(0, m), x), Form::I).with_name("I-forms");
    let u = Arc::new(Universe::new(vec![s1.clone(), s2.clone()])?);
    let q1 = schritt(1, &u)?.perm;
    let t1 = atom_perm(Atom::T(1), &u)?;
    let g = GeneratedGroup::generate(u.clone(), vec![("Q1".into(), q1)])?;
    let h = GeneratedGroup::generate(u, vec![("T1".into(), t1)])?;
    let f = OrbitBijection::from_fn("K1,2", s1.clone(), s2.clone(), |s| s.invert(i64::from(s.at(1)) + i64::from(s.at(2))))?;
    let k = OrbitBijection::from_fn("I0", s1, s2, |s| s.invert(0))?;
    dual_extension_anti(&g, &f, &h, &k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bijection::{table2_bijection, Table2};
    use crate::catalog::{catalog, ChordFamily};
    use crate::expr::EvalContext;

    #[test]
    fn triads_and_sevenths() {
        let f = table2_bijection(Table2::Dom7Tr).unwrap();
        let fbar = fbar_two_sets(&f).unwrap();
        assert_eq!(fbar.order(), 2);
        let ctx = EvalContext::new(fbar.universe().clone());
        let g = ctx.group(&["T1", "I0"]).unwrap();
        let res = dual_extension(&g, &fbar, None).unwrap();
        assert_eq!(res.gbar.order(), 48);
        assert_eq!(res.hbar.as_ref().unwrap().order(), 48);
        let a = PcSeg::chromatic(&[4, 0, 9]);
        let u = fbar.universe();
        let img = u.seg(fbar.perm().apply(u.require(&a).unwrap()));
        assert_eq!(img, &PcSeg::chromatic(&[4, 0, 9, 6]));
        assert_eq!(canonical_decompose(&res, fbar.perm()).unwrap().1, 1);
    }

    #[test]
    fn single_set_star_is_identity() {
        let d = StarDiagram::new(catalog().set(ChordFamily::Triads).clone(), vec![]).unwrap();
        let m = fbar_from_star(&d).unwrap();
        assert!(m.perm().is_identity());
        assert_eq!(m.order(), 1);
    }

    #[test]
    fn same_set_rejected() {
        let s = catalog().set(ChordFamily::Triads);
        assert!(fbar_two_sets(&OrbitBijection::identity(s)).is_err());
    }
}
