use std::f64::consts::PI;
use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};

use kanloop::cw::{intersection_form, is_nondegenerate, validate_identity, determinant};
use kanloop::flow::{descend, trace_csv, FlowConfig, Preconditioner};
use kanloop::lie::GroupElement;
use kanloop::realization::{
    boundary_deviation, canonical_path, classify_component, tau, PathStrategy, RealizationFile, Realizer,
};
use kanloop::simplicial::IntMatrix;
use kanloop::{Error, GammaWord, GroupKind, GroupSpec, ReducedCWComplex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::{Command, Fixture, Numeric};

/// Why a run stopped early; each maps to one exit code.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Validation(String),
    Numeric(String),
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Input(format!("{}: {e}", path.display()))
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "invalid input: {m}"),
            CliError::Validation(m) => write!(f, "validation failed: {m}"),
            CliError::Numeric(m) => write!(f, "numeric failure: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let m = e.to_string();
        match e {
            Error::InvalidAttaching { .. }
            | Error::NotMooreMember { .. }
            | Error::EndpointMismatch(_)
            | Error::LoopNotClosed(_) => CliError::Validation(m),
            Error::Renormalization { .. } | Error::StepTooCoarse { .. } => CliError::Numeric(m),
            _ => CliError::Input(m),
        }
    }
}

pub struct Report {
    pub json: Value,
    pub table: String,
    /// The run completed but its subject failed a check (`exit_code` says which).
    pub failed: bool,
    code: u8,
}

impl Report {
    fn ok(json: Value, table: String) -> Self {
        Report {
            json,
            table,
            failed: false,
            code: 0,
        }
    }

    fn failing(mut self, failed: bool, code: u8) -> Self {
        self.failed = failed;
        self.code = code;
        self
    }

    pub fn exit_code(&self) -> u8 {
        self.code
    }
}

type Result<T> = std::result::Result<T, CliError>;

pub fn run(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::BuildKan {
            complex,
            max_degree,
        } => build_kan(complex, *max_degree),
        Command::Homology {
            complex,
            max_degree,
            csv_dir,
        } => homology(complex, *max_degree, csv_dir.as_deref()),
        Command::CheckIdentity { complex } => check_identity(complex),
        Command::EvalWord {
            complex,
            word,
            degree,
            numeric,
        } => eval_word(complex, word, *degree, numeric),
        Command::Classify {
            numeric,
            fixture,
            point,
            complex,
            strategy,
        } => classify(numeric, fixture, point.as_deref(), complex.as_deref(), *strategy),
        Command::SamplePoint {
            complex,
            numeric,
            wiggle,
        } => sample_point(complex, numeric, *wiggle),
        Command::ValidatePoint {
            complex,
            point,
            group,
            tol,
        } => validate_point(complex, point, *group, *tol),
        Command::Tau {
            word,
            rank,
            numeric,
        } => run_tau(word, *rank, numeric),
        Command::Flow {
            numeric,
            fixture,
            steps,
            step_size,
            stop_grad_norm,
            mode,
            plain,
            trace,
            path_out,
        } => {
            let cfg = FlowConfig {
                steps: *steps,
                step_size: *step_size,
                m: numeric.grid as usize,
                mode: *mode,
                stop_grad_norm: *stop_grad_norm,
                preconditioner: if *plain {
                    Preconditioner::None
                } else {
                    Preconditioner::Sobolev
                },
            };
            flow(numeric, fixture, &cfg, trace.as_deref(), path_out.as_deref())
        }
        Command::IntersectionForm {
            complex,
            word,
            rank,
        } => intersection(complex.as_deref(), word.as_deref(), *rank),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn load_complex(path: &Path) -> Result<ReducedCWComplex> {
    Ok(ReducedCWComplex::from_json(&read(path)?)?)
}

fn spec_of(numeric: &Numeric) -> Result<GroupSpec> {
    check_numeric(numeric)?;
    Ok(GroupSpec::new(numeric.group).with_tol(numeric.tol))
}

fn check_numeric(numeric: &Numeric) -> Result<()> {
    if numeric.grid == 0 {
        return Err(CliError::Input("--grid must be positive".into()));
    }
    if !(numeric.tol > 0.0 && numeric.tol.is_finite()) {
        return Err(CliError::Input("--tol must be positive".into()));
    }
    Ok(())
}

fn build_kan(path: &Path, max_degree: Option<usize>) -> Result<Report> {
    let y = load_complex(path)?;
    let k = y.kan_group()?;
    let top = max_degree.unwrap_or(k.top_degree());
    let mut generators = Vec::new();
    let mut table = String::from("generator  degree  attaching element  faces\n");
    for q in 0..=k.top_degree() {
        for c in k.basis(q) {
            let x = kanloop::Word::generator(kanloop::GenRef::base(c.clone()));
            let faces: Vec<String> = if q == 0 {
                Vec::new()
            } else {
                (0..=q)
                    .map(|j| k.face(j, &x).map(|w| w.to_string()))
                    .collect::<std::result::Result<_, _>>()?
            };
            let attaching = k.attaching(c).map(|w| w.to_string());
            let _ = writeln!(
                table,
                "{:<10} {:<7} {:<18} {}",
                c.name(),
                q,
                attaching.as_deref().unwrap_or("-"),
                faces.join(", ")
            );
            generators.push(json!({
                "name": c.name(),
                "degree": q,
                "attaching": attaching,
                "faces": faces,
            }));
        }
    }
    let counts: Vec<Value> = (0..=top)
        .map(|q| json!({"degree": q, "count": k.enumerate_generators(q).len()}))
        .collect();
    let _ = writeln!(table, "\ngenerators of K_q:");
    for c in &counts {
        let _ = writeln!(table, "  q = {}: {}", c["degree"], c["count"]);
    }
    Ok(Report::ok(
        json!({"top_degree": k.top_degree(), "generators": generators, "counts": counts}),
        table,
    ))
}

fn homology(path: &Path, max_degree: Option<usize>, csv_dir: Option<&Path>) -> Result<Report> {
    let y = load_complex(path)?;
    let k = y.kan_group()?;
    let top = max_degree.unwrap_or(k.top_degree());
    let complex = k.normalized_complex(top)?;
    let groups = complex.homology_all();
    if let Some(dir) = csv_dir {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        for n in 1..=top + 1 {
            let d: &IntMatrix = complex.differential(n).expect("differentials through max degree + 1");
            let file: PathBuf = dir.join(format!("d{n}.csv"));
            std::fs::write(&file, d.to_csv()).map_err(|e| CliError::io(&file, e))?;
        }
    }
    let mut table = String::from("degree  homology\n");
    for h in &groups {
        let mut parts = Vec::new();
        if h.betti > 0 {
            parts.push(if h.betti == 1 { "Z".to_string() } else { format!("Z^{}", h.betti) });
        }
        parts.extend(h.torsion.iter().map(|t| format!("Z/{t}")));
        let text = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
        let _ = writeln!(table, "{:<7} {text}", h.degree);
    }
    Ok(Report::ok(serde_json::to_value(&groups).expect("serializable"), table))
}

fn check_identity(path: &Path) -> Result<Report> {
    let y = load_complex(path)?;
    let relators = y.relator_words();
    let mut cells = Vec::new();
    let mut table = String::from("cell       valid  substituted word\n");
    let mut pass = true;
    for (c, i) in y.identities() {
        let valid = validate_identity(&relators, i);
        let residue = i.substituted(&relators)?.to_string();
        pass &= valid;
        let _ = writeln!(table, "{:<10} {:<6} {residue}", c.name(), valid);
        cells.push(json!({"cell": c.name(), "valid": valid, "substituted": residue}));
    }
    let _ = writeln!(table, "{}", if pass { "pass" } else { "FAIL" });
    Ok(Report::ok(json!({"pass": pass, "identities": cells}), table).failing(!pass, 2))
}

fn eval_word(path: &Path, text: &str, degree: usize, numeric: &Numeric) -> Result<Report> {
    let spec = spec_of(numeric)?;
    let y = load_complex(path)?;
    let k = y.kan_group()?;
    let w = k.parse_word(text, degree)?;
    let mut rng = ChaCha8Rng::seed_from_u64(numeric.seed);
    let gens: Vec<_> = {
        let mut g: Vec<_> = w.generators().cloned().collect();
        g.sort();
        g.dedup();
        g
    };
    let values: Vec<GroupElement> = gens.iter().map(|_| spec.random(&mut rng)).collect();
    let value = spec.eval_word(&w, |g| gens.iter().position(|h| h == g).map(|i| values[i]))?;
    let assignments: serde_json::Map<String, Value> = gens
        .iter()
        .zip(&values)
        .map(|(g, v)| (g.to_string(), json!(spec.to_matrix_json(v))))
        .collect();
    let mut table = format!("word: {w}\ngroup: {}\n", spec.kind);
    for (g, v) in gens.iter().zip(&values) {
        let _ = writeln!(table, "  {g} = {}", format_element(&spec, v));
    }
    let _ = writeln!(table, "value: {}", format_element(&spec, &value));
    let _ = writeln!(table, "distance from e: {:.3e}", spec.distance(&GroupElement::identity(), &value));
    Ok(Report::ok(
        json!({
            "word": w.to_string(),
            "group": spec.kind,
            "seed": numeric.seed,
            "assignments": assignments,
            "value": spec.to_matrix_json(&value),
            "distance_from_identity": spec.distance(&GroupElement::identity(), &value),
        }),
        table,
    ))
}

fn format_element(spec: &GroupSpec, g: &GroupElement) -> String {
    match spec.kind {
        GroupKind::U1 => format!("exp(i·{:.6})", g.phase().arg()),
        _ => {
            let q = g.quaternion();
            format!("{:.6} + {:.6}i + {:.6}j + {:.6}k", q[0], q[1], q[2], q[3])
        }
    }
}

/// A loop at `e` making `n` full turns: `e^{2πint}` in U(1), a `2πn`
/// rotation in SO(3) (half of that in the SU(2) lift), and `4πn` in SU(2)
/// so that the lift closes.
fn turns(spec: &GroupSpec, n: i64, m: usize) -> Vec<GroupElement> {
    let angle = match spec.kind {
        GroupKind::U1 | GroupKind::Su2 => 2.0 * PI * n as f64,
        GroupKind::So3 => PI * n as f64,
    };
    (0..=m)
        .map(|k| {
            let a = angle * k as f64 / m as f64;
            if spec.kind == GroupKind::U1 {
                GroupElement::u1(a)
            } else {
                spec.exp([0.0, 0.0, a])
            }
        })
        .collect()
}

/// Built-in surface point: seeded holonomies and the path `turns · canonical`
/// with a small interior wiggle, so its class is the number of turns.
fn fixture_point(
    spec: &GroupSpec,
    fixture: &Fixture,
    m: usize,
    strategy: PathStrategy,
    rng: &mut ChaCha8Rng,
) -> Result<(Vec<GroupElement>, Vec<GroupElement>)> {
    if fixture.genus == 0 {
        return Err(CliError::Input("--genus must be at least 1".into()));
    }
    let w: Vec<GroupElement> = (0..2 * fixture.genus).map(|_| spec.random(rng)).collect();
    let x = spec.random_algebra(rng, 0.3);
    let geo = canonical_path(&w, m, strategy, spec)?;
    let phi: Vec<GroupElement> = turns(spec, fixture.winding, m)
        .iter()
        .zip(&geo)
        .enumerate()
        .map(|(k, (t, g))| {
            let s = (PI * k as f64 / m as f64).sin();
            let p = t.mul(g);
            if k == 0 || k == m {
                p
            } else {
                p.mul(&spec.exp([s * x[0], s * x[1], s * x[2]]))
            }
        })
        .collect();
    spec.check_steps(&phi)?;
    Ok((w, phi))
}

fn classify(
    numeric: &Numeric,
    fixture: &Fixture,
    point: Option<&Path>,
    complex: Option<&Path>,
    strategy: PathStrategy,
) -> Result<Report> {
    let spec = spec_of(numeric)?;
    let (w, phi, source) = match (point, complex) {
        (Some(point), Some(complex)) => {
            let y = load_complex(complex)?;
            let k = y.kan_group()?;
            let file: RealizationFile = parse_json(point)?;
            let r = Realizer::new(&k, spec, file.m)?;
            let p = r.from_file(&file)?;
            if k.top_degree() != 1 {
                return Err(CliError::Input("classify needs a surface complex".into()));
            }
            (p.samples(0)[0].clone(), r.surface_path(&p), "point")
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(numeric.seed);
            let (w, phi) = fixture_point(&spec, fixture, numeric.grid as usize, strategy, &mut rng)?;
            (w, phi, "fixture")
        }
    };
    let class = classify_component(&w, &phi, &spec, strategy)?;
    let table = format!(
        "group: {}\nsource: {source}\ngrid: {}\nclass in π₁: {class}\n",
        spec.kind,
        phi.len() - 1
    );
    Ok(Report::ok(
        json!({
            "group": spec.kind,
            "source": source,
            "genus": w.len() / 2,
            "grid": phi.len() - 1,
            "class": class,
        }),
        table,
    ))
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_str(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn sample_point(path: &Path, numeric: &Numeric, wiggle: f64) -> Result<Report> {
    let spec = spec_of(numeric)?;
    let y = load_complex(path)?;
    let k = y.kan_group()?;
    let r = Realizer::new(&k, spec, numeric.grid)?;
    let mut rng = ChaCha8Rng::seed_from_u64(numeric.seed);
    let p = r.random_point(wiggle, &mut rng)?;
    let report = r.validate(&p)?;
    let file = r.to_file(&p);
    let table = format!(
        "sampled {} point at m = {}: {} degrees, max violation {:.3e}\n",
        spec.kind,
        numeric.grid,
        p.degrees(),
        report.max_violation
    );
    Ok(Report::ok(serde_json::to_value(&file).expect("serializable"), table))
}

fn validate_point(complex: &Path, point: &Path, group: Option<GroupKind>, tol: f64) -> Result<Report> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CliError::Input("--tol must be positive".into()));
    }
    let y = load_complex(complex)?;
    let k = y.kan_group()?;
    let file: RealizationFile = parse_json(point)?;
    let spec = GroupSpec::new(group.unwrap_or(file.group)).with_tol(tol);
    let r = Realizer::new(&k, spec, file.m)?;
    let p = r.from_file(&file).map_err(|e| match e {
        Error::Renormalization { .. } => CliError::Validation(format!("membership: {e}")),
        e => e.into(),
    })?;
    let report = r.validate(&p)?;
    let mut table = String::from("degree  condition       samples  max violation  pass\n");
    for c in &report.conditions {
        let _ = writeln!(
            table,
            "{:<7} {:<15} {:<8} {:<14} {}",
            c.degree, c.condition.to_string(), c.samples, format!("{:.3e}", c.max_violation), c.pass
        );
    }
    let _ = writeln!(table, "{}", if report.pass { "pass" } else { "FAIL" });
    let pass = report.pass;
    Ok(Report::ok(serde_json::to_value(&report).expect("serializable"), table).failing(!pass, 2))
}

fn run_tau(text: &str, rank: Option<usize>, numeric: &Numeric) -> Result<Report> {
    let spec = spec_of(numeric)?;
    let word = GammaWord::parse(text)?;
    let rank = rank.unwrap_or(word.rank_needed().max(1));
    let m = numeric.grid as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(numeric.seed);
    let modes: Vec<Vec<[f64; 3]>> = (0..rank)
        .map(|_| (0..3).map(|_| spec.random_algebra(&mut rng, 1.0)).collect())
        .collect();
    let phi1: Vec<Vec<GroupElement>> = (0..=m)
        .map(|k| {
            let t = k as f64 / m as f64;
            modes
                .iter()
                .map(|vs| {
                    if k == 0 || k == m {
                        return GroupElement::identity();
                    }
                    vs.iter().enumerate().fold(GroupElement::identity(), |acc, (j, v)| {
                        let s = ((j + 1) as f64 * PI * t).sin();
                        acc.mul(&spec.exp([s * v[0], s * v[1], s * v[2]]))
                    })
                })
                .collect()
        })
        .collect();
    let values = tau(&phi1, &word, &spec)?;
    let deviation = boundary_deviation(&values, numeric.grid, &spec)?;
    let grid = kanloop::realization::SimplexGrid::new(2, numeric.grid);
    let samples: Vec<Value> = grid
        .points()
        .zip(&values)
        .map(|(p, v)| json!({"k": [p[1], p[2]], "value": spec.to_matrix_json(v)}))
        .collect();
    let interior_max = values
        .iter()
        .map(|v| spec.distance(&GroupElement::identity(), v))
        .fold(0.0, f64::max);
    let table = format!(
        "word: {word} (rank {rank})\ngroup: {}\ngrid: {m} ({} samples)\nboundary deviation: {deviation:.3e}\nlargest distance from e: {interior_max:.6}\n",
        spec.kind,
        values.len()
    );
    let pass = deviation <= spec.tol;
    Ok(Report::ok(
        json!({
            "word": word.to_string(),
            "rank": rank,
            "group": spec.kind,
            "grid": m,
            "boundary_deviation": deviation,
            "boundary_pass": pass,
            "samples": samples,
        }),
        table,
    )
    .failing(!pass, 2))
}

fn flow(
    numeric: &Numeric,
    fixture: &Fixture,
    cfg: &FlowConfig,
    trace: Option<&Path>,
    path_out: Option<&Path>,
) -> Result<Report> {
    let spec = spec_of(numeric)?;
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(numeric.seed);
    let (w, phi0) = fixture_point(&spec, fixture, cfg.m, PathStrategy::Geodesic, &mut rng)?;
    let res = descend(&w, &phi0, cfg, &spec)?;
    if let Some(path) = trace {
        std::fs::write(path, trace_csv(&res.trace)).map_err(|e| CliError::io(path, e))?;
    }
    if let Some(path) = path_out {
        let k = kanloop::cw::builders::surface(fixture.genus).kan_group()?;
        let r = Realizer::new(&k, spec, cfg.m as u32)?;
        let p = r.surface_point(&res.holonomies, &res.path)?;
        let text = serde_json::to_string_pretty(&r.to_file(&p)).expect("serializable");
        std::fs::write(path, text).map_err(|e| CliError::io(path, e))?;
    }
    let initial = res.trace[0].energy;
    let lower_bound = match spec.kind {
        GroupKind::U1 => 4.0 * PI * PI * (res.class_before * res.class_before) as f64,
        _ => f64::NAN,
    };
    let table = format!(
        "group: {}\nsteps: {}\nenergy: {initial:.9} -> {:.9}\ngradient norm: {:.3e}\nconverged: {}{}\nclass: {} -> {} (conserved: {})\n",
        spec.kind,
        res.trace.len() - 1,
        res.final_energy(),
        res.grad_norm(),
        res.converged,
        if res.stalled { " (line search stalled at rounding level)" } else { "" },
        res.class_before,
        res.class_after,
        res.class_conserved
    );
    let failed = !res.converged || !res.class_conserved;
    let code = if res.class_conserved { 3 } else { 2 };
    Ok(Report::ok(
        json!({
            "group": spec.kind,
            "grid": cfg.m,
            "mode": cfg.mode,
            "steps": res.trace.len() - 1,
            "initial_energy": initial,
            "final_energy": res.final_energy(),
            "closed_form_energy": if lower_bound.is_nan() { Value::Null } else { json!(lower_bound) },
            "grad_norm": res.grad_norm(),
            "converged": res.converged,
            "stalled": res.stalled,
            "class_before": res.class_before,
            "class_after": res.class_after,
            "class_conserved": res.class_conserved,
        }),
        table,
    )
    .failing(failed, code))
}

fn intersection(complex: Option<&Path>, word: Option<&str>, rank: Option<usize>) -> Result<Report> {
    let words: Vec<(String, GammaWord, usize)> = match (complex, word) {
        (_, Some(text)) => {
            let w = GammaWord::parse(text)?;
            let r = rank.unwrap_or(w.rank_needed().max(1));
            vec![("word".into(), w, r)]
        }
        (Some(path), None) => {
            let y = load_complex(path)?;
            let r = y.cells_of_dim(2).len();
            y.gamma_words()
                .iter()
                .map(|(c, w)| (c.name().to_string(), w.clone(), rank.unwrap_or(r)))
                .collect()
        }
        (None, None) => return Err(CliError::Input("give --complex or --word".into())),
    };
    if words.is_empty() {
        return Err(CliError::Input("complex has no 4-cells with Γ-word attaching data".into()));
    }
    let mut out = Vec::new();
    let mut table = String::new();
    for (name, w, r) in words {
        let q = intersection_form(&w, r)?;
        let rows: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| q[(i, j)]).collect()).collect();
        let det = determinant(&q);
        let _ = writeln!(table, "{name}: {w}");
        for row in &rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>3}")).collect();
            let _ = writeln!(table, "  [{}]", cells.join(" "));
        }
        let _ = writeln!(table, "  determinant {det}, nondegenerate {}", is_nondegenerate(&q));
        out.push(json!({
            "cell": name,
            "word": w.to_string(),
            "rank": r,
            "matrix": rows,
            "determinant": det as i64,
            "nondegenerate": is_nondegenerate(&q),
        }));
    }
    Ok(Report::ok(Value::Array(out), table))
}
