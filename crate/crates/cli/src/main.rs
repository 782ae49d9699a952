use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use chordgroups::analysis::{analyze, detect_flip_flop, emit_dot, verify_grid_network, TransformationNetwork};
use chordgroups::catalog::{catalog, chord_label, parse_chord_list, ChordFamily};
use chordgroups::config::{presets, StarSystem};
use chordgroups::expr::EvalContext;
use chordgroups::perm::{centralizer_simply_transitive, is_simply_transitive, GeneratedGroup, Universe};
use chordgroups::pitchclass::{ti_orbit, Modulus, PcSeg};
use chordgroups::scales::{flattening_cycle, phi_chord, phi_map, JParams, LetterState, PHI_CYCLE};
use chordgroups::voicing::{
    enumerate_soprano_bass_family, harvest_pairs, parse_schedule, parse_voicing, pc_set, trace, Voice,
    OMNIBUS_SCHEDULE, OMNIBUS_START, PUBLISHED_FAMILY_COUNT,
};
use chordgroups::Error;

#[derive(Parser)]
#[command(name = "chordgroups", version, about = "Group actions on chords and transformational networks")]
struct Cli {
    /// Modulus for raw pitch-class segments.
    #[arg(long, global = true, default_value_t = 12)]
    modulus: i64,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the TI-orbit of a segment.
    Orbit { seg: String },
    /// Apply a transformation expression to one chord.
    Apply(ApplyArgs),
    /// Build a group and report its structure.
    Group(GroupArgs),
    /// Centralizer of a simply transitive group, or the dual of a star extension.
    Dual(GroupArgs),
    /// Label a chord progression with transformations.
    Analyze(AnalyzeArgs),
    /// J-function, the 28-cycle of sevenths, or the flattening cycle.
    Jcycle(JcycleArgs),
    /// 4x4 voicing matrices.
    Voicing {
        #[command(subcommand)]
        cmd: VoicingCmd,
    },
}

#[derive(Args)]
struct ApplyArgs {
    #[arg(long)]
    transform: String,
    #[arg(long)]
    chord: String,
    /// Chord family (triads, dom7, maj7, min7, dim7) or a segment whose TI-orbit is the scope.
    #[arg(long)]
    scope: Option<String>,
    /// Star file or preset name; the scope becomes the star's union.
    #[arg(long, conflicts_with = "scope")]
    star: Option<String>,
}

#[derive(Args)]
struct GroupArgs {
    /// Star file or preset name.
    #[arg(long)]
    star: Option<String>,
    /// ti, t, plr, or custom:FILE (a JSON list of expressions).
    #[arg(long, default_value = "ti")]
    group: String,
    #[arg(long, default_value = "triads")]
    scope: String,
    /// Exit 1 unless every check passes.
    #[arg(long)]
    verify: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    /// The dual group H̄ (default for progressions).
    Dual,
    /// The extended group Ḡ.
    Gbar,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Star file or preset name.
    #[arg(long, default_value = "triads_dom7")]
    star: String,
    #[arg(long, value_enum, default_value_t = Side::Dual)]
    group: Side,
    /// Chord list on the command line.
    #[arg(long, conflicts_with = "file")]
    chords: Option<String>,
    /// Chord list file; one row per line with --grid.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Read rows as a grid and check every square.
    #[arg(long)]
    grid: bool,
    /// Write Graphviz output here ("-" for stdout).
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum JMode {
    J,
    Phi,
    Flatten,
}

#[derive(Args)]
struct JcycleArgs {
    #[arg(long, value_enum, default_value_t = JMode::Flatten)]
    mode: JMode,
    #[arg(long, default_value_t = 7)]
    c: i64,
    #[arg(long, default_value_t = 4)]
    d: i64,
    #[arg(long, default_value_t = 3)]
    m: i64,
    /// Inputs for the J-function, comma separated.
    #[arg(long, default_value = "0,1,2,3")]
    k: String,
    /// Flats in the starting signature for the flattening cycle.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    flats: i64,
    /// Print every step rather than a summary.
    #[arg(long)]
    emit: bool,
}

#[derive(Subcommand)]
enum VoicingCmd {
    /// Apply a schedule of voice matrices from a start voicing.
    Trace {
        #[arg(long, default_value = "4,9,0,4")]
        start: String,
        #[arg(long)]
        schedule: Option<String>,
    },
    /// Count soprano/bass matrices agreeing with one voice's steps in a trace.
    Family {
        #[arg(long, default_value = "4,9,0,4")]
        start: String,
        #[arg(long)]
        schedule: Option<String>,
        #[arg(long, default_value = "sopr")]
        voice: String,
        /// Exit 1 unless the count equals this.
        #[arg(long)]
        expect: Option<usize>,
    },
}

/// Usage problems exit 2, failed checks exit 1.
enum Fail {
    Usage(String),
    Check(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::Verification(_) | Error::NotSimplyTransitive => Fail::Check(e.to_string()),
            _ => Fail::Usage(e.to_string()),
        }
    }
}

type Out = Result<(), Fail>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Check(m)) => {
            eprintln!("verification failed: {m}");
            ExitCode::from(1)
        }
        Err(Fail::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Out {
    let m = Modulus::new(cli.modulus)?;
    match &cli.cmd {
        Cmd::Orbit { seg } => orbit(cli, &PcSeg::parse(seg, m)?),
        Cmd::Apply(a) => apply(cli, m, a),
        Cmd::Group(a) => group(cli, a, false),
        Cmd::Dual(a) => group(cli, a, true),
        Cmd::Analyze(a) => analyze_cmd(cli, m, a),
        Cmd::Jcycle(a) => jcycle(cli, a),
        Cmd::Voicing { cmd } => voicing(cli, cmd),
    }
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn load_star(name: &str) -> Result<StarSystem, Fail> {
    let path = Path::new(name);
    if path.exists() {
        return Ok(StarSystem::from_file(path)?);
    }
    let key = name.trim_end_matches(".json").to_ascii_lowercase().replace('-', "_");
    let text = match key.as_str() {
        "triads_dom7" => presets::TRIADS_DOM7,
        "four_set" | "4set" => presets::FOUR_SET,
        "five_class" | "5class" => presets::FIVE_CLASS,
        "passacaglia" => presets::PASSACAGLIA,
        "tetractys_rotation" => presets::TETRACTYS_ROTATION,
        "generated_scales" => presets::GENERATED_SCALES,
        "mod7_inclusion" => presets::MOD7_INCLUSION,
        _ => return Err(Fail::Usage(format!("no star file or preset named {name:?}"))),
    };
    Ok(StarSystem::from_json(text)?)
}

fn scope_universe(scope: &str, m: Modulus) -> Result<Arc<Universe>, Fail> {
    let set = match ChordFamily::from_scope(scope) {
        Some(f) => catalog().set(f).clone(),
        None => ti_orbit(&PcSeg::parse(scope, m)?),
    };
    Ok(Arc::new(Universe::single(set)))
}

fn read_chord(text: &str, m: Modulus) -> Result<PcSeg, Fail> {
    let v = parse_chord_list(text, m)?;
    match v.as_slice() {
        [s] => Ok(s.clone()),
        _ => Err(Fail::Usage(format!("expected one chord, got {}", v.len()))),
    }
}

fn orbit(cli: &Cli, s: &PcSeg) -> Out {
    let o = ti_orbit(s);
    if cli.json {
        let forms: Vec<Value> = (0..o.len())
            .map(|i| json!({"pcseg": o.get(i), "form": format!("{:?}", o.form_of(i).expect("orbit forms"))}))
            .collect();
        print_json(&json!({"generator": s, "size": o.len(), "elements": forms}));
    } else {
        for x in o.elements() {
            println!("{x}");
        }
    }
    Ok(())
}

fn apply(cli: &Cli, m: Modulus, a: &ApplyArgs) -> Out {
    let s = read_chord(&a.chord, m)?;
    let ctx = match (&a.star, &a.scope) {
        (Some(star), _) => load_star(star)?.ctx,
        (None, Some(scope)) => EvalContext::new(scope_universe(scope, m)?),
        (None, None) => {
            let (f, _, _) = catalog()
                .locate(&s)
                .ok_or_else(|| Fail::Usage(format!("{s} is not a catalog chord; pass --scope")))?;
            EvalContext::new(Arc::new(Universe::single(catalog().set(f).clone())))
        }
    };
    let u = &ctx.universe;
    let x = u.require(&s)?;
    let p = ctx.eval_str(&a.transform)?;
    let y = p
        .get(x)
        .ok_or_else(|| Fail::Usage(format!("{} is undefined on {s}", a.transform)))?;
    let out = u.seg(y);
    if cli.json {
        print_json(&json!({"transform": a.transform, "input": s, "output": out, "chord": chord_label(out)}));
    } else {
        println!("{} {}", chord_label(out), out);
    }
    Ok(())
}

fn group_exprs(spec: &str) -> Result<Vec<String>, Fail> {
    Ok(match spec.to_ascii_lowercase().as_str() {
        "ti" => vec!["T1".into(), "I0".into()],
        "t" => vec!["T1".into()],
        "plr" => vec!["P".into(), "L".into(), "R".into()],
        _ => {
            let path = spec
                .strip_prefix("custom:")
                .ok_or_else(|| Fail::Usage(format!("unknown group {spec:?}")))?;
            let text = std::fs::read_to_string(path).map_err(|e| Fail::Usage(format!("{path}: {e}")))?;
            serde_json::from_str(&text).map_err(|e| Fail::Usage(format!("{path}: {e}")))?
        }
    })
}

fn group_summary(g: &GeneratedGroup) -> Value {
    json!({
        "order": g.order(),
        "simply_transitive": is_simply_transitive(g),
        "abelian": g.is_abelian(),
        "generator_names": g.generator_names(),
    })
}

fn group(cli: &Cli, a: &GroupArgs, dual: bool) -> Out {
    let m = Modulus::new(cli.modulus)?;
    let (v, passed) = match &a.star {
        Some(star) => {
            let sys = load_star(star)?;
            let ext = &sys.ext;
            let mut v = json!({
                "name": sys.config.name,
                "universe": sys.universe().len(),
                "blocks": sys.universe().blocks().iter().map(|b| json!({"name": b.name(), "size": b.len()})).collect::<Vec<_>>(),
                "fbar_order": sys.fbar.order(),
                "gbar": group_summary(&ext.gbar),
                "report": ext.report,
            });
            if let Some(h) = &ext.hbar {
                v["hbar"] = group_summary(h);
            }
            (v, ext.report.passed())
        }
        None => {
            let u = scope_universe(&a.scope, m)?;
            let ctx = EvalContext::new(u.clone());
            let exprs = group_exprs(&a.group)?;
            let refs: Vec<&str> = exprs.iter().map(String::as_str).collect();
            let g = ctx.group(&refs)?;
            let mut v = json!({"scope": u.block(0).name(), "universe": u.len(), "group": group_summary(&g)});
            let mut ok = true;
            if dual {
                let c = centralizer_simply_transitive(&g)?;
                ok = chordgroups::perm::commutes_elementwise(&g, &c) && is_simply_transitive(&c);
                v["centralizer"] = group_summary(&c);
                v["dual"] = json!(ok);
            } else if a.verify {
                ok = is_simply_transitive(&g);
            }
            (v, ok)
        }
    };
    if cli.json {
        print_json(&v);
    } else {
        print_group_text(&v, dual);
    }
    if (a.verify || dual) && !passed {
        return Err(Fail::Check("report has failing clauses".into()));
    }
    Ok(())
}

fn print_group_text(v: &Value, dual: bool) {
    let line = |label: &str, g: &Value| {
        println!(
            "{label}: order {}, simply transitive {}, abelian {}, generators {}",
            g["order"],
            g["simply_transitive"],
            g["abelian"],
            g["generator_names"].as_array().map_or(String::new(), |a| {
                a.iter().filter_map(Value::as_str).collect::<Vec<_>>().join(",")
            })
        );
    };
    if v.get("gbar").is_some() {
        println!("star {} on {} segments, fbar order {}", v["name"].as_str().unwrap_or(""), v["universe"], v["fbar_order"]);
        if let Some(bs) = v["blocks"].as_array() {
            for b in bs {
                println!("  block {} ({})", b["name"].as_str().unwrap_or(""), b["size"]);
            }
        }
        line("Gbar", &v["gbar"]);
        if v.get("hbar").is_some() {
            line("Hbar", &v["hbar"]);
        }
        if let Some(cs) = v["report"]["clauses"].as_array() {
            for c in cs {
                let mark = if c["passed"].as_bool() == Some(true) { "PASS" } else { "FAIL" };
                let d = c["detail"].as_str().unwrap_or("");
                if d.is_empty() {
                    println!("{mark} {}", c["name"].as_str().unwrap_or(""));
                } else {
                    println!("{mark} {} ({d})", c["name"].as_str().unwrap_or(""));
                }
            }
        }
    } else {
        println!("scope {} ({} segments)", v["scope"].as_str().unwrap_or(""), v["universe"]);
        line("group", &v["group"]);
        if dual {
            line("centralizer", &v["centralizer"]);
            println!("dual {}", v["dual"]);
        }
    }
}

fn analyze_cmd(cli: &Cli, m: Modulus, a: &AnalyzeArgs) -> Out {
    let sys = load_star(&a.star)?;
    let text = match (&a.chords, &a.file) {
        (Some(c), _) => c.clone(),
        (None, Some(p)) => std::fs::read_to_string(p).map_err(|e| Fail::Usage(format!("{}: {e}", p.display())))?,
        (None, None) => return Err(Fail::Usage("pass --chords or --file".into())),
    };
    let analyzer = match a.group {
        Side::Dual => sys.row_analyzer(),
        Side::Gbar => sys.column_analyzer(),
    };
    let (net, report) = if a.grid {
        let rows = text
            .lines()
            .filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
            .map(|l| parse_chord_list(l, m))
            .collect::<chordgroups::Result<Vec<_>>>()?;
        let g = verify_grid_network(&rows, &analyzer, &sys.column_analyzer())?;
        (g.network, Some(g.report))
    } else {
        (analyze(&parse_chord_list(&text, m)?, &analyzer)?, None)
    };
    let flips = detect_flip_flop(&net);
    if let Some(path) = &a.dot {
        let dot = emit_dot(&net);
        if path.as_os_str() == "-" {
            print!("{dot}");
        } else {
            std::fs::write(path, dot).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))?;
        }
    }
    if cli.json {
        let mut v = net.to_json();
        v["flip_flops"] = json!(flips
            .iter()
            .map(|f| json!({"first_edge": f.first_edge, "last_edge": f.last_edge, "pair": [f.pair.0, f.pair.1]}))
            .collect::<Vec<_>>());
        if let Some(r) = &report {
            v["report"] = json!(r);
        }
        print_json(&v);
    } else if a.dot.as_ref().is_none_or(|p| p.as_os_str() != "-") {
        print_network(&net);
        for f in &flips {
            println!("flip-flop {} / {} over edges {}..{}", f.pair.0, f.pair.1, f.first_edge, f.last_edge);
        }
        if let Some(r) = &report {
            print!("{r}");
        }
    }
    match report {
        Some(r) if !r.passed() => Err(Fail::Check("grid squares do not commute".into())),
        _ => Ok(()),
    }
}

fn print_network(net: &TransformationNetwork) {
    for e in &net.edges {
        let (a, b) = (&net.nodes[e.from], &net.nodes[e.to]);
        println!("{} {} --{}--> {} {}", a.chord, a.pcseg, e.label, b.chord, b.pcseg);
    }
}

fn jcycle(cli: &Cli, a: &JcycleArgs) -> Out {
    match a.mode {
        JMode::J => {
            let p = JParams::new(a.c, a.d, a.m)?;
            let ks = a
                .k
                .split(',')
                .map(|s| s.trim().parse::<i64>().map_err(|e| Fail::Usage(format!("{s:?}: {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            let vals = p.chord(&ks);
            if cli.json {
                print_json(&json!({"c": a.c, "d": a.d, "m": a.m, "k": ks, "values": vals}));
            } else {
                let s: Vec<String> = vals.iter().map(i64::to_string).collect();
                println!("({})", s.join(","));
            }
        }
        JMode::Phi => {
            let mut m = 0;
            let mut cycle = Vec::new();
            for _ in 0..PHI_CYCLE {
                cycle.push((m, phi_chord(m)));
                m = phi_map(m);
            }
            if cli.json {
                let v: Vec<Value> = cycle.iter().map(|(m, s)| json!({"mode": m, "pcseg": s})).collect();
                print_json(&json!({"length": PHI_CYCLE, "cycle": v}));
            } else if a.emit {
                for (m, s) in &cycle {
                    println!("{m:>2} {s}");
                }
            } else {
                println!("phi cycle length {PHI_CYCLE}");
            }
        }
        JMode::Flatten => {
            let steps = flattening_cycle(LetterState::with_signature(a.flats));
            let productive = steps.iter().filter(|s| s.productive).count();
            if cli.json {
                print_json(&json!({"length": steps.len(), "productive": productive, "steps": steps}));
            } else {
                if a.emit {
                    for s in &steps {
                        println!("{s}");
                    }
                }
                println!("length {}, productive {productive}", steps.len());
            }
        }
    }
    Ok(())
}

fn schedule(s: &Option<String>) -> Result<Vec<Voice>, Fail> {
    Ok(match s {
        Some(t) => parse_schedule(t)?,
        None => OMNIBUS_SCHEDULE.to_vec(),
    })
}

fn voicing(cli: &Cli, cmd: &VoicingCmd) -> Out {
    match cmd {
        VoicingCmd::Trace { start, schedule: sch } => {
            let start = parse_voicing(start)?;
            let sch = schedule(sch)?;
            let t = trace(start, &sch);
            if cli.json {
                let steps: Vec<Value> = t
                    .iter()
                    .enumerate()
                    .map(|(i, v)| {
                        json!({"step": i, "voice": i.checked_sub(1).map(|j| sch[j].to_string()), "voicing": v, "pc_set": pc_set(v)})
                    })
                    .collect();
                print_json(&json!({"steps": steps, "closes": pc_set(&t[t.len() - 1]) == pc_set(&start)}));
            } else {
                for (i, v) in t.iter().enumerate() {
                    let voice = if i == 0 { "start".to_string() } else { sch[i - 1].to_string() };
                    println!("{i:>2} {voice:<5} {:?} {:?}", v, pc_set(v));
                }
            }
        }
        VoicingCmd::Family { start, schedule: sch, voice, expect } => {
            let start = if start.is_empty() { OMNIBUS_START } else { parse_voicing(start)? };
            let voice: Voice = voice.parse()?;
            let pairs = harvest_pairs(start, &schedule(sch)?, voice);
            let fam = enumerate_soprano_bass_family(&pairs);
            if cli.json {
                print_json(&json!({
                    "voice": voice,
                    "constraints": pairs,
                    "count": fam.len(),
                    "published": PUBLISHED_FAMILY_COUNT,
                    "matrices": fam,
                }));
            } else {
                println!("{} constraint pairs, {} matrices (published count {PUBLISHED_FAMILY_COUNT})", pairs.len(), fam.len());
            }
            if let Some(n) = expect {
                if fam.len() != *n {
                    return Err(Fail::Check(format!("count {} != {n}", fam.len())));
                }
            }
        }
    }
    Ok(())
}
