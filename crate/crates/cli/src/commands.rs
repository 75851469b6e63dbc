//! The subcommands. Each returns the files it produced and an exit status;
//! writing them out is left to the caller.

use std::fmt;
use std::path::PathBuf;

use serde_json::{json, Map, Value};
use ttcur_core::dynamics::{
    bcc_estimate, dichotomy, goodness_constant, hyperbolicity_scan, inp_search, limit_length,
    translation_length, InpSearch, MetricGraphTree, NorthSouth, NorthSouthConfig, PackedConfig,
    PackedIterator, SeedRun, Verdict, CSV_HEADER, DEFAULT_SEARCH_DEPTH,
};
use ttcur_core::spectral::{
    orientation_split, stable_frequencies, tt_metric, OrientationType, PfSolver, DEFAULT_TOL,
};
use ttcur_core::{Circuit, Error, Graph, GraphMap, Irreducibility, TrainTrackCertificate, Turn};

use crate::examples::{self, Status};
use crate::formats::{self, Automorphism, FormatError};
use crate::output::num;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VALIDATION: u8 = 1;
pub const EXIT_NOT_CONVERGED: u8 = 2;
pub const EXIT_RESOURCE_CAP: u8 = 3;

pub const MAX_DEPTH: usize = 8;
pub const MAX_STEPS: usize = 200;
/// Iterates checked by the hyperbolicity scan.
pub const SCAN_POWERS: usize = 6;
/// Relative tolerance of limit lengths.
pub const LIMIT_TOL: f64 = 1e-12;

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn validation(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_VALIDATION,
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Failure {}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ResourceCap { .. }
        | Error::SearchTooLarge(_)
        | Error::CountOverflow
        | Error::CompressionExhausted => EXIT_RESOURCE_CAP,
        Error::NonConvergence { .. } => EXIT_NOT_CONVERGED,
        _ => EXIT_VALIDATION,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Failure {
        Failure::validation(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::validation(e.to_string())
    }
}

pub type Outcome<T> = Result<T, Failure>;

/// Settings shared by all commands.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub power: Option<usize>,
    pub depth: usize,
    pub steps: usize,
    pub eps: f64,
    pub out: Option<PathBuf>,
    pub max_word_len: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            power: None,
            depth: 3,
            steps: 40,
            eps: 1e-2,
            out: None,
            max_word_len: 1_000_000,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Outcome<()> {
        if self.depth == 0 || self.depth > MAX_DEPTH {
            return Err(Failure::validation(format!(
                "--depth must be between 1 and {MAX_DEPTH}"
            )));
        }
        if self.steps > MAX_STEPS {
            return Err(Failure::validation(format!(
                "--steps must be at most {MAX_STEPS}"
            )));
        }
        if self.eps.is_nan() || self.eps <= 0.0 || self.eps.is_infinite() {
            return Err(Failure::validation("--eps must be positive"));
        }
        if self.power == Some(0) {
            return Err(Failure::validation("--power must be positive"));
        }
        if self.max_word_len == 0 {
            return Err(Failure::validation("--max-word-len must be positive"));
        }
        Ok(())
    }
}

/// Files produced by a command, in output order, and the exit status.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub files: Vec<(String, String)>,
    pub code: u8,
    pub message: Option<String>,
}

impl Report {
    fn one(name: &str, content: String) -> Report {
        Report {
            files: vec![(name.into(), content)],
            code: EXIT_OK,
            message: None,
        }
    }

    fn json(name: &str, value: &Value) -> Report {
        Report::one(name, pretty(value))
    }
}

fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("values serialize");
    s.push('\n');
    s
}

/// Reads a document from a path, or a shipped example by name.
pub fn load_input(input: &str) -> Outcome<Automorphism> {
    let path = std::path::Path::new(input);
    let text = if path.exists() {
        std::fs::read_to_string(path)?
    } else if let Some(e) = examples::find(input) {
        e.document.to_string()
    } else {
        return Err(Failure::validation(format!(
            "no such file or example: {input}"
        )));
    };
    Ok(formats::load(&text)
        .map_err(|e| Failure::validation(format!("{input}: {e}")))?
        .1)
}

/// The power the single-map commands work with: the override or the
/// normalizing power.
fn working_map(f: &GraphMap, cfg: &RunConfig) -> Outcome<(usize, GraphMap)> {
    match cfg.power {
        Some(k) => {
            if !f.is_train_track() {
                return Err(Error::NotTrainTrack.into());
            }
            Ok((k, f.power(k)?))
        }
        None => Ok(f.normalize_power()?),
    }
}

fn turn_json(g: &Graph, t: Turn) -> Value {
    json!([g.token(t.first()), g.token(t.second())])
}

fn kind_str(k: OrientationType) -> &'static str {
    match k {
        OrientationType::Type1 => "type1",
        OrientationType::Type2 => "type2",
    }
}

fn inps_json(g: &Graph, s: &InpSearch) -> Value {
    let records: Vec<Value> = s
        .records
        .iter()
        .map(|r| {
            json!({
                "path": g.format_path(&r.path),
                "alpha": g.format_edges(&r.alpha),
                "beta": g.format_edges(&r.beta),
                "tip": turn_json(g, r.tip),
                "period": r.period,
                "closed": r.closed,
            })
        })
        .collect();
    json!({
        "leg_bound": s.leg_bound,
        "cancellation_bound": s.cancellation_bound,
        "records": records,
    })
}

/// Certification: scan for periodic classes and closed INPs.
pub fn certify(f: &GraphMap, scan_len: usize) -> Outcome<Status> {
    if !f.transition_matrix().is_primitive() || !f.is_train_track() {
        return Ok(Status::Unverified);
    }
    Ok(
        match hyperbolicity_scan(f, scan_len, SCAN_POWERS)?.verdict {
            Verdict::GeometricEvidence => Status::GeometricEvidence,
            Verdict::AtoroidalConsistent => Status::AtoroidalConsistent,
        },
    )
}

pub fn analyze(
    aut: &Automorphism,
    cfg: &RunConfig,
    scan_len: usize,
    solver: &dyn PfSolver,
) -> Outcome<Report> {
    let f = &aut.f;
    let g = f.graph();
    let mut r = Map::new();
    r.insert("name".into(), json!(aut.name));
    r.insert("rank".into(), json!(g.rank()));
    r.insert("tight".into(), json!(true));
    let certificate = f.train_track_certificate();
    let train_track = matches!(certificate, TrainTrackCertificate::Holds { .. });
    r.insert("train_track".into(), json!(train_track));
    if let TrainTrackCertificate::Fails {
        edge,
        turn,
        cancellation_at,
    } = certificate
    {
        r.insert(
            "train_track_certificate".into(),
            json!({ "edge": g.token(edge), "turn": turn_json(g, turn), "cancellation_at": cancellation_at }),
        );
    }
    let m = f.transition_matrix();
    let irr = m.irreducibility();
    r.insert(
        "irreducible".into(),
        json!(!matches!(irr, Irreducibility::Reducible)),
    );
    r.insert(
        "primitive".into(),
        json!(matches!(irr, Irreducibility::Primitive { .. })),
    );
    if let Irreducibility::Primitive { exponent } = irr {
        r.insert("primitivity_exponent".into(), json!(exponent));
    }
    let normalized = if train_track {
        working_map(f, cfg)
    } else {
        Err(Error::NotTrainTrack.into())
    };
    let (k, h) = match normalized {
        Ok(x) => x,
        Err(e) => {
            for key in [
                "power_used",
                "lambda",
                "tt_lengths",
                "illegal_turns",
                "inps",
                "orientation_type",
                "cancellation",
            ] {
                r.insert(key.into(), Value::Null);
            }
            r.insert("hyperbolicity".into(), Value::Null);
            r.insert(
                "verdict".into(),
                json!(format!("no train-track analysis: {}", e.message)),
            );
            let code = if train_track {
                EXIT_OK
            } else {
                EXIT_VALIDATION
            };
            return Ok(Report {
                files: vec![("analyze.json".into(), pretty(&Value::Object(r)))],
                code,
                message: None,
            });
        }
    };
    r.insert("power_used".into(), json!(k));
    let pf_h = solver.solve(&h.transition_matrix(), DEFAULT_TOL)?;
    let lambda = match irr {
        Irreducibility::Primitive { .. } => solver.solve(&m, DEFAULT_TOL)?.lambda,
        _ => pf_h.lambda.powf(1.0 / k as f64),
    };
    r.insert("lambda".into(), json!(lambda));
    r.insert("lambda_power".into(), json!(pf_h.lambda));
    let tt: Map<String, Value> = g
        .positive_edges()
        .map(|e| (g.token(e), json!(pf_h.left[e.index()])))
        .collect();
    r.insert("tt_lengths".into(), Value::Object(tt));
    let illegal: Vec<Value> = h
        .legality()
        .illegal_turns()
        .into_iter()
        .map(|t| turn_json(g, t))
        .collect();
    r.insert("illegal_turns".into(), json!(illegal));
    r.insert("inps".into(), inps_json(g, &inp_search(&h)?));
    let split = orientation_split(&h)?;
    r.insert("orientation_type".into(), json!(kind_str(split.kind)));
    let bcc = bcc_estimate(&h, DEFAULT_SEARCH_DEPTH);
    let c = goodness_constant(bcc.configured_bound, h.min_image_len()).ok();
    r.insert(
        "cancellation".into(),
        json!({
            "empirical_max": bcc.empirical_max,
            "search_depth": bcc.search_depth,
            "configured_bound": bcc.configured_bound,
            "goodness_constant": c,
        }),
    );
    let scan = hyperbolicity_scan(f, scan_len, SCAN_POWERS)?;
    let periodic: Vec<Value> = scan
        .periodic
        .iter()
        .map(|p| json!({ "class": g.format_edges(&p.circuit.word()), "period": p.period, "inverted": p.inverted }))
        .collect();
    r.insert(
        "hyperbolicity".into(),
        json!({
            "max_len": scan.max_len,
            "k_max": scan.k_max,
            "classes_checked": scan.classes_checked,
            "periodic": periodic,
            "closed_inps": scan.closed_inps.len(),
            "verdict": scan.verdict.as_str(),
        }),
    );
    Ok(Report::json("analyze.json", &Value::Object(r)))
}

pub fn frequencies(aut: &Automorphism, cfg: &RunConfig) -> Outcome<Report> {
    let (k, h) = working_map(&aut.f, cfg)?;
    let g = h.graph();
    let fr = stable_frequencies(&h, cfg.depth, DEFAULT_TOL)?;
    let table: Map<String, Value> = fr
        .iter()
        .map(|(v, x)| (g.format_path(v), json!(x)))
        .collect();
    Ok(Report::json(
        "frequencies.json",
        &json!({
            "name": aut.name,
            "power_used": k,
            "depth": cfg.depth,
            "orientation_type": kind_str(fr.kind),
            "lambda_power": fr.lambda,
            "residual": fr.residual,
            "frequencies": table,
        }),
    ))
}

fn circuit(aut: &Automorphism, word: &str) -> Outcome<Circuit> {
    aut.circuit(word)
        .map_err(|e| Failure::validation(format!("word `{word}`: {e}")))
}

pub fn iterate(aut: &Automorphism, cfg: &RunConfig, word: &str) -> Outcome<Report> {
    let (_, h) = working_map(&aut.f, cfg)?;
    let g = h.graph();
    let mut c = circuit(aut, word)?;
    let mut csv = String::from("step,length,word\n");
    for step in 0..=cfg.steps {
        if step > 0 {
            match h.iterate_circuit(&c, 1, cfg.max_word_len) {
                Ok(next) => c = next,
                Err(e) => {
                    return Ok(Report {
                        files: vec![("iterate.csv".into(), csv)],
                        code: exit_code(&e),
                        message: Some(format!("step {step}: {e}")),
                    })
                }
            }
        }
        csv.push_str(&format!(
            "{step},{},{}\n",
            c.len(),
            g.format_edges(&c.word())
        ));
    }
    Ok(Report::one("iterate.csv", csv))
}

/// Goodness and ILT along `[h^m(c)]`, with packed iteration.
fn trajectory(
    aut: &Automorphism,
    cfg: &RunConfig,
    word: &str,
    with_goodness: bool,
) -> Outcome<Report> {
    let (_, h) = working_map(&aut.f, cfg)?;
    let cf = bcc_estimate(&h, DEFAULT_SEARCH_DEPTH).configured_bound;
    let c = goodness_constant(cf, h.min_image_len())?;
    let mut it = PackedIterator::new(&h, PackedConfig::new(1, cf))?;
    let start = circuit(aut, word)?;
    let (name, header) = if with_goodness {
        ("goodness.csv", "step,length,ilt,good_edges,goodness\n")
    } else {
        ("ilt.csv", "step,length,ilt\n")
    };
    let mut csv = String::from(header);
    let mut pc = it.start(&start)?;
    for step in 0..=cfg.steps {
        if step > 0 {
            match it.step(&pc) {
                Ok(next) => pc = next,
                Err(e) => {
                    let message = Some(format!("step {step}: {e}"));
                    return Ok(Report {
                        files: vec![(name.into(), csv)],
                        code: exit_code(&e),
                        message,
                    });
                }
            }
        }
        csv.push_str(&format!("{step},{},{}", num(pc.len()), pc.ilt()));
        if with_goodness {
            csv.push_str(&format!(
                ",{},{}",
                num(pc.good_edges(c)),
                num(pc.goodness(c))
            ));
        }
        csv.push('\n');
    }
    Ok(Report::one(name, csv))
}

pub fn goodness(aut: &Automorphism, cfg: &RunConfig, word: &str) -> Outcome<Report> {
    trajectory(aut, cfg, word, true)
}

pub fn ilt(aut: &Automorphism, cfg: &RunConfig, word: &str) -> Outcome<Report> {
    trajectory(aut, cfg, word, false)
}

pub fn inp(aut: &Automorphism, cfg: &RunConfig) -> Outcome<Report> {
    let (k, h) = working_map(&aut.f, cfg)?;
    let mut v = inps_json(h.graph(), &inp_search(&h)?);
    v.as_object_mut()
        .unwrap()
        .insert("power_used".into(), json!(k));
    Ok(Report::json("inp.json", &v))
}

/// Metric used by the `length` command.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Tree {
    /// All edges of length one.
    Unit,
    /// The train-track metric of the map.
    Tt,
    /// The limit tree of the map: `lim ℓ_tt(f^n w) / λ^n`.
    Plus,
    /// The limit tree of the inverse representative.
    Minus,
}

pub fn length(
    aut: &Automorphism,
    tree: Tree,
    word: &str,
    solver: &dyn PfSolver,
) -> Outcome<Report> {
    let c = circuit(aut, word)?;
    let mut v = Map::new();
    v.insert("name".into(), json!(aut.name));
    v.insert("tree".into(), json!(format!("{tree:?}").to_lowercase()));
    v.insert("word".into(), json!(word));
    match tree {
        Tree::Unit => {
            let t = MetricGraphTree::unit(aut.f.graph().clone());
            v.insert("length".into(), json!(translation_length(&t, &c)));
        }
        Tree::Tt => {
            let (_, h) = aut.f.normalize_power()?;
            let pf = solver.solve(&h.transition_matrix(), DEFAULT_TOL)?;
            let t = MetricGraphTree::new(aut.f.graph().clone(), tt_metric(&pf))?;
            v.insert("length".into(), json!(translation_length(&t, &c)));
        }
        Tree::Plus | Tree::Minus => {
            let (map, class) = if tree == Tree::Plus {
                (&aut.f, c)
            } else {
                let (g, _) = aut
                    .inverse
                    .as_ref()
                    .ok_or_else(|| Failure::validation("document has no inverse_map"))?;
                (
                    g,
                    aut.inverse_circuit(word)
                        .unwrap()
                        .map_err(|e| Failure::validation(format!("word `{word}`: {e}")))?,
                )
            };
            let l = limit_length(map, &class, LIMIT_TOL)?;
            v.insert("length".into(), json!(l.value));
            v.insert("lambda".into(), json!(l.lambda));
            v.insert("steps".into(), json!(l.steps));
        }
    }
    Ok(Report::json("length.json", &Value::Object(v)))
}

/// Basis words of length at most two up to rotation and inversion.
pub fn default_seeds(aut: &Automorphism) -> Vec<String> {
    let basis = aut.marking.basis();
    let mut seen: Vec<Circuit> = Vec::new();
    let mut out = Vec::new();
    for p in basis.reduced_paths_up_to(2) {
        let Ok((c, _)) = ttcur_core::cyclic_reduce(basis, &p) else {
            continue;
        };
        if seen.iter().any(|s| *s == c || *s == c.inverse()) {
            continue;
        }
        seen.push(c);
        out.push(basis.format_path(&p));
    }
    out
}

/// Seeds from a file: one basis word per line, `#` starts a comment.
pub fn read_seeds(text: &str) -> Vec<String> {
    text.lines()
        .map(|l| l.split('#').next().unwrap().trim())
        .filter(|l| !l.is_empty())
        .map(String::from)
        .collect()
}

fn seed_json(run: &SeedRun) -> Value {
    json!({
        "seed": run.seed,
        "fixed": run.fixed,
        "converged": run.converged(),
        "first_plus": run.first_plus,
        "first_minus": run.first_minus,
        "steps_run": run.rows.len().saturating_sub(1),
        "error": run.error.as_ref().map(|e| e.to_string()),
    })
}

pub fn northsouth(aut: &Automorphism, cfg: &RunConfig, seeds: &[String]) -> Outcome<Report> {
    let (g, _) = aut
        .inverse
        .as_ref()
        .ok_or_else(|| Failure::validation("northsouth needs an inverse_map"))?;
    if seeds.is_empty() {
        return Err(Failure::validation("no seeds"));
    }
    let config = NorthSouthConfig {
        depth: cfg.depth,
        steps: cfg.steps,
        eps: cfg.eps,
    };
    let ns = NorthSouth::prepare(&aut.f, g, config)?;
    let mut runs = Vec::with_capacity(seeds.len());
    for s in seeds {
        let cf = circuit(aut, s)?;
        let cg = aut
            .inverse_circuit(s)
            .unwrap()
            .map_err(|e| Failure::validation(format!("word `{s}`: {e}")))?;
        runs.push(ns.run_seed(s, &cf, &cg)?);
    }
    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for run in &runs {
        for r in &run.rows {
            csv.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                run.seed,
                r.step,
                num(r.len_simplicial),
                num(r.len_tt),
                r.ilt,
                num(r.goodness),
                num(r.gen_goodness),
                num(r.dist_plus),
                num(r.dist_minus),
                r.flag.as_str()
            ));
        }
    }
    let complete: Vec<(Vec<f64>, Vec<u64>)> = runs
        .iter()
        .filter(|r| r.error.is_none())
        .map(|r| {
            (
                r.rows.iter().map(|x| x.goodness).collect(),
                r.rows.iter().map(|x| x.ilt).collect(),
            )
        })
        .collect();
    let dicho = dichotomy(&complete).map(|d| {
        json!({ "delta1": d.delta1, "delta2": d.delta2, "m0": d.m0, "goodness_branch": d.goodness_branch })
    });
    let capped = runs.iter().any(|r| r.error.is_some());
    let missed: Vec<&str> = runs
        .iter()
        .filter(|r| !r.fixed && !r.converged())
        .map(|r| r.seed.as_str())
        .collect();
    let (code, status) = if capped {
        (EXIT_RESOURCE_CAP, "resource-cap")
    } else if !missed.is_empty() {
        (EXIT_NOT_CONVERGED, "not-converged")
    } else {
        (EXIT_OK, "converged")
    };
    let summary = json!({
        "name": aut.name,
        "status": status,
        "power_f": ns.power_f,
        "power_g": ns.power_g,
        "lambda": ns.lambda,
        "lambda_plus": ns.lambda_plus,
        "lambda_minus": ns.lambda_minus,
        "cancellation_f": ns.cf,
        "cancellation_g": ns.cg,
        "goodness_constant_f": ns.c,
        "goodness_constant_g": ns.c_prime,
        "depth": cfg.depth,
        "steps": cfg.steps,
        "eps": cfg.eps,
        "seeds": runs.iter().map(seed_json).collect::<Vec<_>>(),
        "dichotomy": dicho,
    });
    let message = match code {
        EXIT_OK => None,
        EXIT_RESOURCE_CAP => Some("a seed hit a resource cap; partial trajectories written".into()),
        _ => Some(format!(
            "not converged within {} steps: {}",
            cfg.steps,
            missed.join(" ")
        )),
    };
    Ok(Report {
        files: vec![
            ("trajectory.csv".into(), csv),
            ("summary.json".into(), pretty(&summary)),
        ],
        code,
        message,
    })
}

pub fn list_examples() -> Report {
    let list: Vec<Value> = examples::EXAMPLES
        .iter()
        .map(|e| json!({ "name": e.name, "status": e.status.as_str(), "summary": e.summary }))
        .collect();
    Report::json("examples.json", &json!(list))
}

pub fn show_example(name: &str) -> Outcome<Report> {
    let e = examples::find(name)
        .ok_or_else(|| Failure::validation(format!("unknown example `{name}`")))?;
    Ok(Report::one(&format!("{name}.json"), e.document.to_string()))
}

/// Recomputes every example's status and compares with the shipped one.
pub fn certify_examples(scan_len: usize) -> Outcome<Report> {
    let mut list = Vec::new();
    let mut mismatch = Vec::new();
    for e in examples::EXAMPLES {
        let (_, aut) = formats::load(e.document)?;
        let status = certify(&aut.f, scan_len)?;
        if status != e.status {
            mismatch.push(e.name);
        }
        list.push(
            json!({ "name": e.name, "shipped": e.status.as_str(), "computed": status.as_str() }),
        );
    }
    let mut r = Report::json("certification.json", &json!(list));
    if !mismatch.is_empty() {
        r.code = EXIT_VALIDATION;
        r.message = Some(format!("status mismatch: {}", mismatch.join(" ")));
    }
    Ok(r)
}
