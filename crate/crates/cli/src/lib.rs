//! Command-line front end: parse a diagram, build the sl2 and/or gl2 cube,
//! report homology and run consistency checks.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::Path;

use clap::{Parser, ValueEnum};
use covkh::corpus;
use covkh::glcube::{algebrize_gl2, closing_variants, compare_with_retry, GlCube};
use covkh::homology::{jones_oracle, link_homology, mod2_dims_direct, specialize_complex, BigradedHomology};
use covkh::linkdiag::ArcOrientation;
use covkh::polycomplex::random::random_unit;
use covkh::polycomplex::{cochain_ratio_iso, ChainComplexR, Cochain0};
use covkh::slcube::{build_kom_sl2, is_ladybug, psi_sl2, SlCube, TreeChoice, Variant};
use covkh::{parse_pd, PdCode, Specialization};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

/// Exit status for success.
pub const EXIT_OK: i32 = 0;
/// Exit status when a requested check fails.
pub const EXIT_CHECK_FAILED: i32 = 1;
/// Exit status for unusable input or arguments.
pub const EXIT_INPUT: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Pipeline {
    Sl2,
    Gl2,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Even,
    Odd,
    UnifiedReport,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum CheckName {
    Jones,
    Mod2,
    Equivalence,
    SignIndependence,
    CocycleSuite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
}

/// Covering Khovanov homology of link diagrams.
#[derive(Debug, Parser)]
#[command(name = "covkh", version)]
pub struct Cli {
    /// PD code: inline text, a file path, a bundled diagram name, or `-` for stdin
    #[arg(long)]
    pub pd: Option<String>,
    #[arg(long, value_enum, default_value_t = Pipeline::Sl2)]
    pub pipeline: Pipeline,
    #[arg(long, value_enum, default_value_t = VariantArg::Even)]
    pub variant: VariantArg,
    /// Comma-separated checks to run
    #[arg(long, value_enum, value_delimiter = ',')]
    pub checks: Vec<CheckName>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    pub output: OutputFormat,
    /// Seed for randomized rescalings and orientations
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Refuse diagrams with more crossings
    #[arg(long, default_value_t = 12)]
    pub max_crossings: usize,
    /// Include the formal and algebrized cubes in the output
    #[arg(long)]
    pub emit_cube: bool,
}

/// Result of one check.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub summary: String,
    pub data: Value,
}

impl CheckResult {
    fn to_json(&self) -> Value {
        json!({ "name": self.name, "passed": self.passed, "summary": self.summary, "data": self.data })
    }
}

/// Parses `args` (program name first), runs and writes the report.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, stdin) {
        Ok(report) => {
            let code = exit_code(&report);
            let text = match cli.output {
                OutputFormat::Json => {
                    serde_json::to_string_pretty(&report.json).expect("serializable report") + "\n"
                }
                OutputFormat::Table => report.text,
            };
            if out.write_all(text.as_bytes()).is_err() {
                return EXIT_INPUT;
            }
            code
        }
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}

/// `EXIT_CHECK_FAILED` when any check failed, else `EXIT_OK`.
pub fn exit_code(report: &Report) -> i32 {
    if report.failed {
        EXIT_CHECK_FAILED
    } else {
        EXIT_OK
    }
}

/// Rendered report.
pub struct Report {
    pub json: Value,
    pub text: String,
    pub failed: bool,
}

fn specializations(v: VariantArg) -> Vec<Specialization> {
    match v {
        VariantArg::Even => vec![Specialization::EVEN],
        VariantArg::Odd => vec![Specialization::ODD],
        VariantArg::UnifiedReport => vec![Specialization::EVEN, Specialization::ODD],
    }
}

fn pipelines(p: Pipeline) -> Vec<&'static str> {
    match p {
        Pipeline::Sl2 => vec!["sl2"],
        Pipeline::Gl2 => vec!["gl2"],
        Pipeline::Both => vec!["sl2", "gl2"],
    }
}

/// Reads the `--pd` argument: `-` is stdin, then an existing file, then a
/// bundled name, else inline text.
fn load_text(arg: &str, stdin: &mut dyn Read) -> Result<String, String> {
    if arg == "-" {
        let mut s = String::new();
        stdin.read_to_string(&mut s).map_err(|e| format!("reading stdin: {e}"))?;
        return Ok(s);
    }
    let path = Path::new(arg);
    if path.is_file() {
        return std::fs::read_to_string(path).map_err(|e| format!("reading {arg}: {e}"));
    }
    if let Some((_, text)) = corpus::CORPUS.iter().find(|(n, _)| *n == arg) {
        return Ok(text.to_string());
    }
    Ok(arg.to_string())
}

fn load_pd(cli: &Cli, arg: &str, stdin: &mut dyn Read) -> Result<PdCode, String> {
    let pd = parse_pd(&load_text(arg, stdin)?).map_err(|e| e.to_string())?;
    if pd.n_crossings() > cli.max_crossings {
        return Err(format!(
            "{} crossings exceed --max-crossings {}",
            pd.n_crossings(),
            cli.max_crossings
        ));
    }
    if !pd.is_planar() {
        return Err("the PD code does not describe a planar diagram".into());
    }
    Ok(pd)
}

/// Cubes and complexes built once per run.
struct Built {
    pd: PdCode,
    sl: Option<SlCube>,
    gl: Option<GlCube>,
    sl_complex: Option<ChainComplexR>,
    gl_complex: Option<ChainComplexR>,
}

impl Built {
    fn new(pd: PdCode, sl_needed: bool, gl_needed: bool) -> Result<Self, String> {
        let o = ArcOrientation(0);
        let sl = if sl_needed {
            Some(build_kom_sl2(&pd, o, Variant::X, TreeChoice::Min).map_err(|e| e.to_string())?)
        } else {
            None
        };
        let gl = if gl_needed { Some(algebrize_gl2(&pd, o).map_err(|e| e.to_string())?) } else { None };
        let sl_complex = sl.as_ref().map(|s| s.complex()).transpose().map_err(|e| e.to_string())?;
        let gl_complex = gl.as_ref().map(|g| g.complex()).transpose().map_err(|e| e.to_string())?;
        Ok(Self { pd, sl, gl, sl_complex, gl_complex })
    }

    fn complex(&self, pipeline: &str) -> &ChainComplexR {
        match pipeline {
            "sl2" => self.sl_complex.as_ref().expect("sl2 built"),
            _ => self.gl_complex.as_ref().expect("gl2 built"),
        }
    }

    fn homology(&self, pipeline: &str, s: Specialization) -> Result<BigradedHomology, String> {
        link_homology(self.complex(pipeline), s, self.pd.writhe()).map_err(|e| e.to_string())
    }
}

/// Runs everything requested by `cli`; `Err` is an input error.
pub fn execute(cli: &Cli, stdin: &mut dyn Read) -> Result<Report, String> {
    let mut checks = cli.checks.clone();
    checks.sort();
    checks.dedup();
    if checks.contains(&CheckName::Equivalence) && cli.pipeline != Pipeline::Both {
        return Err("--checks equivalence requires --pipeline both".into());
    }
    let input_free = !checks.is_empty() && checks.iter().all(|c| *c == CheckName::CocycleSuite);
    let pd = match &cli.pd {
        Some(arg) => Some(load_pd(cli, arg, stdin)?),
        None if input_free => None,
        None => return Err("no diagram given (use --pd)".into()),
    };

    let mut json_out = serde_json::Map::new();
    let mut text = String::new();
    let mut results: Vec<CheckResult> = Vec::new();

    if let Some(pd) = pd {
        let pipes = pipelines(cli.pipeline);
        let needs_sl = pipes.contains(&"sl2") || checks.contains(&CheckName::SignIndependence);
        let built = Built::new(pd, needs_sl, pipes.contains(&"gl2"))?;
        let pd = &built.pd;
        json_out.insert(
            "input".into(),
            json!({
                "pd": pd.to_text(),
                "crossings": pd.n_crossings(),
                "components": pd.n_components(),
                "writhe": pd.writhe(),
            }),
        );
        let _ = writeln!(
            text,
            "diagram: {} (crossings {}, components {}, writhe {})",
            pd.to_text(),
            pd.n_crossings(),
            pd.n_components(),
            pd.writhe()
        );
        let mut pipe_json = Vec::new();
        for &p in &pipes {
            let mut res = Vec::new();
            for s in specializations(cli.variant) {
                let h = built.homology(p, s)?;
                let _ = writeln!(text, "\n{p} {} homology:\n{}euler: {}", s.name(), h.table(), h.euler());
                res.push(h.to_json(&s.name()));
            }
            pipe_json.push(json!({ "pipeline": p, "results": res }));
        }
        json_out.insert("pipelines".into(), Value::Array(pipe_json));

        let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
        for c in &checks {
            let r = match c {
                CheckName::Jones => check_jones(&built, &pipes)?,
                CheckName::Mod2 => check_mod2(&built, &pipes)?,
                CheckName::Equivalence => check_equivalence(&built, &mut rng)?,
                CheckName::SignIndependence => check_sign_independence(&built, &mut rng)?,
                CheckName::CocycleSuite => cocycle_suite()?,
            };
            results.push(r);
        }
        if cli.emit_cube {
            let mut cube = serde_json::Map::new();
            if let Some(sl) = &built.sl {
                cube.insert("sl2".into(), sl.poly.to_json());
            }
            if let Some(gl) = &built.gl {
                cube.insert("gl2".into(), gl.to_json());
            }
            let cube = Value::Object(cube);
            let _ = writeln!(text, "\ncube:\n{}", serde_json::to_string_pretty(&cube).expect("json"));
            json_out.insert("cube".into(), cube);
        }
    } else {
        json_out.insert("input".into(), Value::Null);
        results.push(cocycle_suite()?);
    }

    let failed = results.iter().any(|r| !r.passed);
    if !results.is_empty() && !text.is_empty() {
        text.push('\n');
    }
    for r in &results {
        let _ = writeln!(text, "check {}: {} ({})", r.name, if r.passed { "PASS" } else { "FAIL" }, r.summary);
    }
    json_out.insert("checks".into(), Value::Array(results.iter().map(CheckResult::to_json).collect()));
    json_out.insert("seed".into(), json!(cli.seed));
    Ok(Report { json: Value::Object(json_out), text, failed })
}

fn check_jones(b: &Built, pipes: &[&str]) -> Result<CheckResult, String> {
    let jones = jones_oracle(&b.pd);
    let mut mismatches = Vec::new();
    for &p in pipes {
        for s in [Specialization::EVEN, Specialization::ODD] {
            let chi = b.homology(p, s)?.euler();
            if chi != jones {
                mismatches.push(format!("{p} {}: {chi}", s.name()));
            }
        }
    }
    Ok(CheckResult {
        name: "jones",
        passed: mismatches.is_empty(),
        summary: if mismatches.is_empty() {
            format!("Euler characteristic equals {jones}")
        } else {
            format!("expected {jones}, got {}", mismatches.join("; "))
        },
        data: json!({ "jones": jones, "mismatches": mismatches }),
    })
}

fn dims_json(d: &BTreeMap<(i64, i64), usize>) -> Value {
    Value::Array(d.iter().map(|(&(t, q), &n)| json!({ "t": t, "q": q, "dim": n })).collect())
}

fn check_mod2(b: &Built, pipes: &[&str]) -> Result<CheckResult, String> {
    let mut problems = Vec::new();
    let mut data = serde_json::Map::new();
    for &p in pipes {
        let mut dims = Vec::new();
        for s in [Specialization::EVEN, Specialization::ODD] {
            let uct = b.homology(p, s)?.mod2_dims();
            let sc = specialize_complex(b.complex(p), s).map_err(|e| e.to_string())?;
            let direct: BTreeMap<(i64, i64), usize> =
                mod2_dims_direct(&sc).into_iter().map(|((t, q), n)| ((t, q + b.pd.writhe()), n)).collect();
            if uct != direct {
                problems.push(format!("{p} {}: universal coefficients disagree with F2 ranks", s.name()));
            }
            dims.push(uct);
        }
        if dims[0] != dims[1] {
            problems.push(format!("{p}: even and odd differ mod 2"));
        }
        data.insert(p.into(), dims_json(&dims[0]));
    }
    Ok(CheckResult {
        name: "mod2",
        passed: problems.is_empty(),
        summary: if problems.is_empty() { "even and odd agree over F2".into() } else { problems.join("; ") },
        data: Value::Object(data),
    })
}

fn random_rescaling(rng: &mut ChaCha8Rng, len: usize) -> Cochain0 {
    Cochain0 { values: (0..len).map(|_| random_unit(rng)).collect() }
}

fn check_equivalence(b: &Built, rng: &mut ChaCha8Rng) -> Result<CheckResult, String> {
    let gl = b.gl.as_ref().expect("gl2 built");
    let gl = gl.rescaled(&random_rescaling(rng, gl.data.shape.len())).map_err(|e| e.to_string())?;
    let (cmp, _) = match compare_with_retry(&gl, TreeChoice::Min) {
        Ok(x) => x,
        Err(e) => {
            return Ok(CheckResult {
                name: "equivalence",
                passed: false,
                summary: format!("comparison failed: {e}"),
                data: Value::Null,
            })
        }
    };
    let mut differing = Vec::new();
    for s in Specialization::all() {
        if b.homology("sl2", s)? != b.homology("gl2", s)? {
            differing.push(s.name());
        }
    }
    Ok(CheckResult {
        name: "equivalence",
        passed: differing.is_empty(),
        summary: if differing.is_empty() {
            format!(
                "gl2 cube isomorphic to sl2 type {:?} ({} ladybug squares); homology equal at all 8 specializations",
                cmp.variant, cmp.ladybugs
            )
        } else {
            format!("homology differs at {}", differing.join(", "))
        },
        data: json!({ "comparison": cmp.to_json(&gl.data.shape), "differing": differing }),
    })
}

fn check_sign_independence(b: &Built, rng: &mut ChaCha8Rng) -> Result<CheckResult, String> {
    let pd = &b.pd;
    let a = b.sl.as_ref().expect("sl2 built");
    let other = build_kom_sl2(pd, ArcOrientation(0), Variant::X, TreeChoice::Max).map_err(|e| e.to_string())?;
    let sh = a.poly.shape();
    let mut problems = Vec::new();
    let phi = match cochain_ratio_iso(sh, &other.eps, &a.eps) {
        Ok(phi) => {
            let ok = sh.edges().all(|(v, i)| {
                let w = sh.step(v, i).expect("edge");
                other.poly.edge(v, i).map(|m| m.scale(phi.values[v])) == a.poly.edge(v, i).map(|m| m.scale(phi.values[w]))
            });
            if !ok {
                problems.push("0-cochain does not intertwine the edges".to_string());
            }
            Some(phi)
        }
        Err(e) => {
            problems.push(format!("ratio of sign assignments is not closed: {e}"));
            None
        }
    };
    let orient = if pd.n_crossings() == 0 { 0 } else { rng.gen_range(0..1u64 << pd.n_crossings()) };
    let flipped = build_kom_sl2(pd, ArcOrientation(orient), Variant::X, TreeChoice::Min).map_err(|e| e.to_string())?;
    let complexes = [other.complex().map_err(|e| e.to_string())?, flipped.complex().map_err(|e| e.to_string())?];
    for s in [Specialization::EVEN, Specialization::ODD] {
        let base = b.homology("sl2", s)?;
        for (label, c) in ["second integration tree", "arc orientation"].iter().zip(&complexes) {
            if link_homology(c, s, pd.writhe()).map_err(|e| e.to_string())? != base {
                problems.push(format!("{label} changes {} homology", s.name()));
            }
        }
    }
    let phi_json = phi.map(|p| {
        Value::Array(
            (0..sh.len()).map(|v| json!({ "r": sh.coords(v), "value": p.values[v].to_string() })).collect(),
        )
    });
    Ok(CheckResult {
        name: "sign-independence",
        passed: problems.is_empty(),
        summary: if problems.is_empty() {
            format!("two integration trees and arc orientation {orient:#b} give isomorphic complexes")
        } else {
            problems.join("; ")
        },
        data: json!({ "phi": phi_json, "orientation": orient }),
    })
}

/// Exhaustive check over every two-crossing diagram and arc orientation:
/// ψ is solvable for both variants and the gl2 ratio cochain closes for
/// exactly one variant on ladybugs and for both elsewhere.
pub fn cocycle_suite() -> Result<CheckResult, String> {
    let diagrams = corpus::two_crossing_diagrams();
    let mut runs = 0;
    let mut ladybug_runs = 0;
    let mut tally: BTreeMap<String, usize> = BTreeMap::new();
    let mut failures = Vec::new();
    for pd in &diagrams {
        let ladybug = is_ladybug(pd, 0, 0, 1);
        for o in 0..4u64 {
            let orient = ArcOrientation(o);
            runs += 1;
            let psi: Result<Vec<_>, _> =
                [Variant::X, Variant::Y].iter().map(|&v| psi_sl2(pd, 0, 0, 1, orient, v)).collect();
            if let Err(e) = psi {
                failures.push(format!("{} orientation {o}: {e}", pd.to_text()));
                continue;
            }
            let gl = algebrize_gl2(pd, orient).map_err(|e| e.to_string())?;
            let vs = closing_variants(&gl, TreeChoice::Min).map_err(|e| e.to_string())?;
            let ok = if ladybug { vs.len() == 1 } else { vs.len() == 2 };
            if ladybug {
                ladybug_runs += 1;
                *tally.entry(format!("{:?}", vs)).or_default() += 1;
            }
            if !ok {
                failures.push(format!("{} orientation {o}: closing variants {vs:?}", pd.to_text()));
            }
        }
    }
    if tally.len() > 1 {
        failures.push(format!("ladybug squares closed under different variants: {tally:?}"));
    }
    let matched = tally.keys().next().cloned().unwrap_or_else(|| "[]".into());
    Ok(CheckResult {
        name: "cocycle-suite",
        passed: failures.is_empty(),
        summary: format!(
            "{} diagrams, {runs} squares, {ladybug_runs} ladybugs closing under {matched}, {} failures",
            diagrams.len(),
            failures.len()
        ),
        data: json!({
            "diagrams": diagrams.len(),
            "squares": runs,
            "ladybug_squares": ladybug_runs,
            "ladybug_variant": matched,
            "failures": failures,
        }),
    })
}

/// Sizes the global worker pool from `COVKH_THREADS` when set.
pub fn configure_threads() {
    if let Some(n) = std::env::var("COVKH_THREADS").ok().and_then(|s| s.trim().parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("covkh").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn defaults() {
        let c = cli(&[]);
        assert_eq!(c.pipeline, Pipeline::Sl2);
        assert_eq!(c.variant, VariantArg::Even);
        assert_eq!(c.output, OutputFormat::Table);
        assert_eq!(c.max_crossings, 12);
        assert!(c.checks.is_empty() && !c.emit_cube && c.pd.is_none());
    }

    #[test]
    fn check_list_is_comma_separated() {
        let c = cli(&["--checks", "jones,mod2,cocycle-suite"]);
        assert_eq!(c.checks, vec![CheckName::Jones, CheckName::Mod2, CheckName::CocycleSuite]);
    }

    #[test]
    fn pd_argument_resolution() {
        let mut empty = std::io::empty();
        assert_eq!(load_text("hopf", &mut empty).unwrap(), "X(1,3,2,4) X(3,1,4,2)");
        assert_eq!(load_text("X(1,2,2,1)", &mut empty).unwrap(), "X(1,2,2,1)");
        let mut input = std::io::Cursor::new(b"UNKNOT 2".to_vec());
        assert_eq!(load_text("-", &mut input).unwrap(), "UNKNOT 2");
    }

    #[test]
    fn unified_report_covers_both_variants() {
        assert_eq!(specializations(VariantArg::UnifiedReport), vec![Specialization::EVEN, Specialization::ODD]);
        assert_eq!(pipelines(Pipeline::Both), vec!["sl2", "gl2"]);
    }

    #[test]
    fn crossing_cap_is_an_input_error() {
        let c = cli(&["--pd", "7_1", "--max-crossings", "6"]);
        assert!(execute(&c, &mut std::io::empty()).is_err());
    }
}
