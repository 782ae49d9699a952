//! JSON star-diagram configurations.
//!
//! ```json
//! {
//!   "name": "triads-dom7",
//!   "modulus": 12,
//!   "action": "ti",
//!   "center": "<0,4,7>",
//!   "arms": ["<0,4,7,10>"],
//!   "group": "ti",
//!   "dual_generators": [["Lbar", "L"], ["Rbar", "R"]],
//!   "vocabulary": ["K3,4", "Q7*K1,4"]
//! }
//! ```
//! Arms are single-element assignments from the center, extended equivariantly.
//! `group` is `"ti"`, `"t"`, or a list of expressions on the whole union.
//! Dual generators are expressions on the center, transferred along the arms.
//! Vocabulary entries are expressions lifted into the dual group and used as edge labels.

use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use crate::analysis::Analyzer;
use crate::bijection::{extend_assignment_with, Action};
use crate::error::{Error, Result};
use crate::expr::EvalContext;
use crate::extension::{dual_extension, fbar_from_star, ExtensionResult, MetaRotation, StarDiagram};
use crate::perm::{Perm, Universe};
use crate::pitchclass::{Form, Modulus, OrbitSet, PcSeg};

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Named(String),
    Exprs(Vec<String>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ArmSpec {
    Seg(String),
    Named { to: String, name: String },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StarConfig {
    #[serde(default)]
    pub name: String,
    #[serde(default = "default_modulus")]
    pub modulus: i64,
    #[serde(default = "default_action")]
    pub action: String,
    pub center: String,
    #[serde(default)]
    pub arms: Vec<ArmSpec>,
    #[serde(default = "default_group")]
    pub group: GroupSpec,
    #[serde(default)]
    pub dual_generators: Vec<(String, String)>,
    #[serde(default)]
    pub vocabulary: Vec<String>,
}

fn default_modulus() -> i64 {
    12
}

fn default_action() -> String {
    "ti".into()
}

fn default_group() -> GroupSpec {
    GroupSpec::Named("ti".into())
}

impl StarConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

/// A built star diagram with its extension, dual, and expression context.
#[derive(Debug, Clone)]
pub struct StarSystem {
    pub config: StarConfig,
    pub star: StarDiagram,
    pub fbar: MetaRotation,
    pub ext: ExtensionResult,
    /// Universe of the union, with `fbar` and the lifted dual generators by name.
    pub ctx: EvalContext,
    pub vocabulary: Vec<(String, Perm)>,
}

impl StarSystem {
    pub fn build(config: StarConfig) -> Result<Self> {
        let m = Modulus::new(config.modulus)?;
        let action = match config.action.to_ascii_lowercase().as_str() {
            "ti" => Action::Ti,
            "t" => Action::T,
            other => return Err(Error::Config(format!("unknown action {other:?}"))),
        };
        let center = PcSeg::parse(&config.center, m)?;
        let mut arms = Vec::new();
        for (i, a) in config.arms.iter().enumerate() {
            let (to, name) = match a {
                ArmSpec::Seg(s) => (s, format!("f{}", i + 2)),
                ArmSpec::Named { to, name } => (to, name.clone()),
            };
            arms.push(extend_assignment_with(&center, &PcSeg::parse(to, m)?, action)?.with_name(name));
        }
        let center_set = match action {
            Action::Ti => arms.first().map_or_else(|| crate::pitchclass::ti_orbit(&center), |a| a.source().clone()),
            Action::T => arms.first().map_or_else(|| OrbitSet::t_orbit(&center, Form::T), |a| a.source().clone()),
        };
        let star = StarDiagram::new(center_set.clone(), arms)?;
        let fbar = fbar_from_star(&star)?;
        let base = EvalContext::new(fbar.universe().clone()).with_name("fbar", fbar.perm().clone());
        let gexprs: Vec<String> = match &config.group {
            GroupSpec::Named(n) => match n.to_ascii_lowercase().as_str() {
                "ti" => vec!["T1".into(), "I0".into()],
                "t" => vec!["T1".into()],
                other => return Err(Error::Config(format!("unknown group {other:?}"))),
            },
            GroupSpec::Exprs(v) => v.clone(),
        };
        let grefs: Vec<&str> = gexprs.iter().map(String::as_str).collect();
        let g = base.group(&grefs)?;
        let center_ctx = EvalContext::new(Arc::new(Universe::single(center_set)));
        let hnames = if config.dual_generators.is_empty() {
            None
        } else {
            Some(
                config
                    .dual_generators
                    .iter()
                    .map(|(n, e)| center_ctx.perm(e).map(|p| (n.clone(), p)))
                    .collect::<Result<Vec<_>>>()?,
            )
        };
        let ext = dual_extension(&g, &fbar, hnames)?;
        let mut ctx = base;
        for (n, p) in ext.h.as_ref().expect("dual present").named_generators() {
            ctx.names.insert(n, p);
        }
        let hbar = ext.hbar.as_ref().expect("dual present");
        let vocabulary = config
            .vocabulary
            .iter()
            .map(|v| ctx.resolve(v, hbar).map(|p| (v.clone(), p)))
            .collect::<Result<Vec<_>>>()?;
        Ok(StarSystem { config, star, fbar, ext, ctx, vocabulary })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::build(StarConfig::from_json(text)?)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::build(StarConfig::from_file(path)?)
    }

    #[must_use]
    pub fn universe(&self) -> &Arc<Universe> {
        &self.ctx.universe
    }

    /// Lifts an expression into the dual group H̄.
    pub fn resolve_h(&self, e: &str) -> Result<Perm> {
        self.ctx.resolve(e, self.ext.hbar.as_ref().expect("dual present"))
    }

    /// Lifts an expression into Ḡ.
    pub fn resolve_g(&self, e: &str) -> Result<Perm> {
        self.ctx.resolve(e, &self.ext.gbar)
    }

    /// Labels edges in H̄: vocabulary, then `h*fbar^i`.
    #[must_use]
    pub fn row_analyzer(&self) -> Analyzer {
        Analyzer::new(self.ext.hbar.clone().expect("dual present"))
            .with_base(self.ext.h.clone().expect("dual present"), self.fbar.perm().clone(), "fbar")
            .with_vocabulary(self.vocabulary.clone())
    }

    /// Labels edges in Ḡ: T_n and I_n by name, then `g*fbar^i`.
    #[must_use]
    pub fn column_analyzer(&self) -> Analyzer {
        let c = i64::from(self.config.modulus as u32);
        let mut vocab = Vec::new();
        for n in 0..c {
            let signed = if 2 * n > c { n - c } else { n };
            if let Ok(p) = self.resolve_g(&format!("T{signed}")) {
                vocab.push((format!("T{signed}"), p));
            }
        }
        for n in 0..c {
            if let Ok(p) = self.resolve_g(&format!("I{n}")) {
                vocab.push((format!("I{n}"), p));
            }
        }
        Analyzer::new(self.ext.gbar.clone())
            .with_base(self.ext.g.clone(), self.fbar.perm().clone(), "fbar")
            .with_vocabulary(vocab)
    }
}

/// Configurations shipped in `data/stars`.
pub mod presets {
    use super::{Result, StarSystem};

    pub const TRIADS_DOM7: &str = include_str!("../../../data/stars/triads_dom7.json");
    pub const FOUR_SET: &str = include_str!("../../../data/stars/four_set.json");
    pub const FIVE_CLASS: &str = include_str!("../../../data/stars/five_class.json");
    pub const PASSACAGLIA: &str = include_str!("../../../data/stars/passacaglia.json");
    pub const TETRACTYS_ROTATION: &str = include_str!("../../../data/stars/tetractys_rotation.json");
    pub const GENERATED_SCALES: &str = include_str!("../../../data/stars/generated_scales.json");
    pub const MOD7_INCLUSION: &str = include_str!("../../../data/stars/mod7_inclusion.json");

    pub fn triads_dom7() -> Result<StarSystem> {
        StarSystem::from_json(TRIADS_DOM7)
    }

    pub fn four_set() -> Result<StarSystem> {
        StarSystem::from_json(FOUR_SET)
    }

    pub fn five_class() -> Result<StarSystem> {
        StarSystem::from_json(FIVE_CLASS)
    }

    pub fn passacaglia() -> Result<StarSystem> {
        StarSystem::from_json(PASSACAGLIA)
    }

    pub fn tetractys_rotation() -> Result<StarSystem> {
        StarSystem::from_json(TETRACTYS_ROTATION)
    }

    pub fn generated_scales() -> Result<StarSystem> {
        StarSystem::from_json(GENERATED_SCALES)
    }

    pub fn mod7_inclusion() -> Result<StarSystem> {
        StarSystem::from_json(MOD7_INCLUSION)
    }
}
