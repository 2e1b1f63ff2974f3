//! The `congrue` command line: one JSON (or text) document in, one JSON
//! document out.
//!
//! Exit codes: 0 success, 1 the checked property is false, 2 invalid or
//! unsolvable input, 3 an internal consistency check failed.

use std::ffi::OsString;
use std::io::Read;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::cgg::{
    certify_newton, certify_series, decompose, first_window_violation, tower_cover, tower_interval,
    PnSeries,
};
use crate::crt::{extend_to_polynomial, solve, Congruence, CrtError, CrtSystem, PartialMap};
use crate::eqvlat::{
    all_commute, crc_counterexample, is_arithmetical, is_dense, is_distributive, lattice_closure,
    MAX_ENUM_CARRIER,
};
use crate::json::{self, JsonError, PolyDoc};
use crate::newton::NewtonPoly;
use crate::ultra::{
    dv_space, dvee_space, is_residuated, representation, AxiomViolation, FiniteSemilattice,
    UltraError, UltraSpace,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "congrue",
    version,
    about = "Congruence-preserving maps, equivalence lattices and ultrametric spaces"
)]
struct Cli {
    /// Print a human-readable summary to standard error.
    #[arg(long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integer-valued polynomials.
    #[command(subcommand)]
    Poly(PolyCmd),
    /// Finite partial maps on the integers.
    #[command(subcommand)]
    Map(MapCmd),
    /// Systems of congruences, one "a mod r" per line.
    #[command(subcommand)]
    Crt(CrtCmd),
    /// Sublattices of the partition lattice.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Ultrametric spaces over finite semilattices.
    #[command(subcommand)]
    Ultra(UltraCmd),
}

#[derive(Debug, Subcommand)]
enum PolyCmd {
    /// Decide congruence preservation by the lcm certificate.
    Check {
        /// Also test (x - y) | f(x) - f(y) on every pair in this range.
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        window: Option<(i64, i64)>,
        #[command(flatten)]
        input: Input,
    },
    /// Rewrite a polynomial or a table of values in the P_n basis.
    Decompose {
        /// Number of coefficients (the tower A_N used).
        #[arg(long)]
        tower: Option<usize>,
        #[command(flatten)]
        input: Input,
    },
    /// Tabulate a polynomial or series.
    Eval {
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        window: Option<(i64, i64)>,
        #[command(flatten)]
        input: Input,
    },
}

#[derive(Debug, Subcommand)]
enum MapCmd {
    /// Extend a partial map to a congruence-preserving polynomial.
    Extend {
        #[command(flatten)]
        input: Input,
    },
}

#[derive(Debug, Subcommand)]
enum CrtCmd {
    Solve {
        #[command(flatten)]
        input: Input,
    },
}

#[derive(Debug, Subcommand)]
enum LatticeCmd {
    /// Report on the sublattice generated by a list of partitions.
    Analyze {
        #[command(flatten)]
        input: Input,
    },
}

#[derive(Debug, Subcommand)]
enum UltraCmd {
    /// Axioms, convexity and hyperconvexity of a space.
    Analyze {
        #[command(flatten)]
        input: Input,
    },
    /// Whether a distributive lattice is the congruence lattice of its
    /// own metric space.
    Represent {
        #[command(flatten)]
        input: Input,
    },
}

#[derive(Debug, Args)]
struct Input {
    /// Input file; standard input when omitted.
    file: Option<PathBuf>,
}

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected lo..hi, got `{s}`"))?;
    let lo: i64 = lo
        .trim()
        .parse()
        .map_err(|_| format!("bad lower bound `{lo}`"))?;
    let hi: i64 = hi
        .trim()
        .parse()
        .map_err(|_| format!("bad upper bound `{hi}`"))?;
    if lo > hi {
        return Err(format!("empty window {lo}..{hi}"));
    }
    Ok((lo, hi))
}

/// Everything a single invocation produces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Ctx {
    verbose: bool,
    stderr: String,
}

impl Ctx {
    fn note(&mut self, line: impl AsRef<str>) {
        if self.verbose {
            self.stderr.push_str(line.as_ref());
            self.stderr.push('\n');
        }
    }
}

type Reply = (i32, Value);

fn invalid(message: impl ToString) -> Reply {
    (EXIT_INVALID, json!({ "error": message.to_string() }))
}

fn internal(message: impl ToString) -> Reply {
    (EXIT_INTERNAL, json!({ "error": message.to_string() }))
}

fn from_json_error(e: JsonError) -> Reply {
    invalid(e)
}

/// Runs one invocation. `args` includes the program name; `stdin` is read
/// only when no input file is given.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let text = e.render().to_string();
            let (stdout, stderr) = if e.use_stderr() {
                (String::new(), text)
            } else {
                (text, String::new())
            };
            return Outcome {
                code,
                stdout,
                stderr,
            };
        }
    };
    let mut ctx = Ctx {
        verbose: cli.verbose,
        stderr: String::new(),
    };
    let (code, value) = dispatch(cli.command, stdin, &mut ctx);
    if code >= EXIT_INVALID {
        if let Some(msg) = value.get("error").and_then(Value::as_str) {
            ctx.stderr.push_str(&format!("error: {msg}\n"));
        }
    }
    Outcome {
        code,
        stdout: format!("{value}\n"),
        stderr: ctx.stderr,
    }
}

fn read_input(input: &Input, stdin: &mut dyn Read) -> Result<String, Reply> {
    match &input.file {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("cannot read {}: {e}", path.display()))),
        None => {
            let mut s = String::new();
            stdin
                .read_to_string(&mut s)
                .map_err(|e| invalid(format!("cannot read standard input: {e}")))?;
            Ok(s)
        }
    }
}

fn read_json(input: &Input, stdin: &mut dyn Read) -> Result<Value, Reply> {
    let text = read_input(input, stdin)?;
    serde_json::from_str(&text).map_err(|e| invalid(format!("malformed JSON: {e}")))
}

fn dispatch(cmd: Command, stdin: &mut dyn Read, ctx: &mut Ctx) -> Reply {
    let result = match cmd {
        Command::Poly(PolyCmd::Check { window, input }) => {
            read_json(&input, stdin).and_then(|v| poly_check(&v, window, ctx))
        }
        Command::Poly(PolyCmd::Decompose { tower, input }) => {
            read_json(&input, stdin).and_then(|v| poly_decompose(&v, tower, ctx))
        }
        Command::Poly(PolyCmd::Eval { window, input }) => {
            read_json(&input, stdin).and_then(|v| poly_eval(&v, window, ctx))
        }
        Command::Map(MapCmd::Extend { input }) => {
            read_json(&input, stdin).and_then(|v| map_extend(&v, ctx))
        }
        Command::Crt(CrtCmd::Solve { input }) => {
            read_input(&input, stdin).and_then(|t| crt_solve(&t, ctx))
        }
        Command::Lattice(LatticeCmd::Analyze { input }) => {
            read_json(&input, stdin).and_then(|v| lattice_analyze(&v, ctx))
        }
        Command::Ultra(UltraCmd::Analyze { input }) => {
            read_json(&input, stdin).and_then(|v| ultra_analyze(&v, ctx))
        }
        Command::Ultra(UltraCmd::Represent { input }) => {
            read_json(&input, stdin).and_then(|v| ultra_represent(&v, ctx))
        }
    };
    result.unwrap_or_else(|reply| reply)
}

/// A polynomial document as something that can be evaluated, with a
/// natural number of nodes (degree + 1, or the series length).
enum Evaluable {
    Newton(NewtonPoly),
    Series(PnSeries),
}

impl Evaluable {
    fn from_doc(doc: PolyDoc) -> Result<Self, Reply> {
        match doc {
            PolyDoc::Binomial(p) => Ok(Evaluable::Newton(p)),
            PolyDoc::Pn(s) => Ok(Evaluable::Series(s)),
            PolyDoc::Monomial(q) => NewtonPoly::from_monomial(&q)
                .map(Evaluable::Newton)
                .map_err(invalid),
        }
    }

    fn eval(&self, x: i64) -> BigInt {
        match self {
            Evaluable::Newton(p) => p.eval_i64(x),
            Evaluable::Series(s) => s.eval_i64(x),
        }
    }

    fn nodes(&self) -> usize {
        match self {
            Evaluable::Newton(p) => p.degree().map_or(1, |d| d + 1),
            Evaluable::Series(s) => s.len(),
        }
    }
}

fn poly_check(v: &Value, window: Option<(i64, i64)>, ctx: &mut Ctx) -> Result<Reply, Reply> {
    let f = Evaluable::from_doc(json::parse_poly(v).map_err(from_json_error)?)?;
    let certified = match &f {
        Evaluable::Newton(p) => certify_newton(p),
        Evaluable::Series(s) => certify_series(s),
    };
    ctx.note(format!(
        "certificate: {}",
        if certified { "holds" } else { "fails" }
    ));
    let mut out = json!({ "certified": certified });
    let mut ok = certified;
    if let Some((lo, hi)) = window {
        let values: Vec<BigInt> = (lo..=hi).map(|x| f.eval(x)).collect();
        let violation = first_window_violation(&values, lo);
        ok &= violation.is_none();
        ctx.note(match violation {
            None => format!("window {lo}..{hi}: preserving"),
            Some((y, x)) => format!("window {lo}..{hi}: {x} - {y} does not divide f({x}) - f({y})"),
        });
        out["window"] = json!({
            "lo": lo,
            "hi": hi,
            "preserving": violation.is_none(),
            "violation": violation.map(|(y, x)| [y, x]),
        });
    }
    Ok((if ok { EXIT_OK } else { EXIT_FALSE }, out))
}

fn poly_decompose(v: &Value, tower: Option<usize>, ctx: &mut Ctx) -> Result<Reply, Reply> {
    let series = if v.get("points").is_some() {
        let pm = json::parse_points(v).map_err(from_json_error)?;
        let n = tower.unwrap_or_else(|| tower_cover(pm.domain()));
        if let Some(x) = tower_interval(n).find(|&x| !pm.contains(x)) {
            return Err(invalid(format!(
                "field `points.{x}`: missing, needed for the tower A_{n}"
            )));
        }
        decompose(|x| pm.get(x).cloned().expect("checked above"), n)
    } else {
        let f = Evaluable::from_doc(json::parse_poly(v).map_err(from_json_error)?)?;
        let n = tower.unwrap_or_else(|| f.nodes());
        decompose(|x| f.eval(x), n)
    };
    ctx.note(format!(
        "{} coefficients, certificate {}",
        series.len(),
        if series.certified() { "holds" } else { "fails" }
    ));
    Ok((EXIT_OK, json::series_to_json(&series)))
}

fn poly_eval(v: &Value, window: Option<(i64, i64)>, ctx: &mut Ctx) -> Result<Reply, Reply> {
    let f = Evaluable::from_doc(json::parse_poly(v).map_err(from_json_error)?)?;
    let range = match window {
        Some((lo, hi)) => lo..=hi,
        None => tower_interval(f.nodes()),
    };
    let pm: PartialMap = range.map(|x| (x, f.eval(x))).collect();
    ctx.note(format!("{} values", pm.len()));
    Ok((EXIT_OK, json::points_to_json(&pm)))
}

fn map_extend(v: &Value, ctx: &mut Ctx) -> Result<Reply, Reply> {
    let pm = json::parse_points(v).map_err(from_json_error)?;
    match extend_to_polynomial(&pm) {
        Ok(series) => {
            ctx.note(format!(
                "extended {} points to {} coefficients",
                pm.len(),
                series.len()
            ));
            Ok((EXIT_OK, json::series_to_json(&series)))
        }
        Err(CrtError::NotPreserving(x, y)) => {
            ctx.note(format!("{y} - {x} does not divide f({y}) - f({x})"));
            Ok((EXIT_INVALID, json!({ "not_preserving": [x, y] })))
        }
        Err(e) => Err(internal(e)),
    }
}

/// One congruence per line as `a mod r`; blank lines and `#` comments are
/// skipped.
pub fn parse_crt(text: &str) -> Result<CrtSystem, String> {
    let mut constraints = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = || format!("line {}: expected \"a mod r\", got `{line}`", i + 1);
        let (a, r) = line.split_once("mod").ok_or_else(bad)?;
        let a = BigInt::from_str(a.trim()).map_err(|_| bad())?;
        let r = BigInt::from_str(r.trim()).map_err(|_| bad())?;
        constraints.push(Congruence::new(a, r));
    }
    Ok(CrtSystem::new(constraints))
}

fn crt_solve(text: &str, ctx: &mut Ctx) -> Result<Reply, Reply> {
    let system = parse_crt(text).map_err(invalid)?;
    match solve(&system) {
        Ok(c) => {
            ctx.note(format!("solution: {c}"));
            Ok((
                EXIT_OK,
                json!({"residue": c.residue().to_string(), "modulus": c.modulus().to_string()}),
            ))
        }
        Err(CrtError::Unsolvable(i, j)) => {
            ctx.note(format!("constraints {i} and {j} are incompatible"));
            Ok((EXIT_INVALID, json!({ "unsolvable": [i, j] })))
        }
        Err(e) => Err(internal(e)),
    }
}

fn lattice_analyze(v: &Value, ctx: &mut Ctx) -> Result<Reply, Reply> {
    let (n, gens) = json::parse_partitions(v).map_err(from_json_error)?;
    let l = lattice_closure(n, &gens, true).map_err(invalid)?;
    let distributive = is_distributive(&l);
    let commuting = all_commute(&l);
    let arithmetical = is_arithmetical(&l);
    let counterexample = crc_counterexample(&l);
    let dense = if n <= MAX_ENUM_CARRIER {
        Some(is_dense(&l).map_err(invalid)?)
    } else {
        None
    };
    ctx.note(format!(
        "carrier {n}, closure of {} generators has {} members",
        gens.len(),
        l.len()
    ));
    let mut out = json!({
        "carrier": n,
        "generators": gens.len(),
        "closure_size": l.len(),
        "distributive": distributive,
        "commuting": commuting,
        "arithmetical": arithmetical,
        "crc": counterexample.is_none(),
        "dense": dense,
    });
    if let Some(cx) = counterexample {
        out["crc_counterexample"] = cx
            .iter()
            .map(|(p, a)| json!({"relation": json::partition_to_json(p), "point": a}))
            .collect();
    }
    Ok((EXIT_OK, out))
}

fn violation_json(v: &AxiomViolation) -> Value {
    match *v {
        AxiomViolation::Reflexivity(x) => json!({ "reflexivity": [x] }),
        AxiomViolation::Symmetry(x, y) => json!({ "symmetry": [x, y] }),
        AxiomViolation::Triangle(x, y, z) => json!({ "triangle": [x, y, z] }),
    }
}

fn ultra_error(e: UltraError) -> Reply {
    match e {
        UltraError::Inconsistent(..) | UltraError::NotIsometric(..) => internal(e),
        _ => invalid(e),
    }
}

/// The lattice is either the whole document or its `lattice` field.
fn parse_lattice_field(v: &Value) -> Result<FiniteSemilattice, Reply> {
    match v.get("lattice") {
        Some(l) => json::parse_semilattice(l).map_err(|e| {
            invalid(JsonError {
                field: format!("lattice.{}", e.field),
                message: e.message,
            })
        }),
        None => json::parse_semilattice(v).map_err(from_json_error),
    }
}

fn ultra_analyze(v: &Value, ctx: &mut Ctx) -> Result<Reply, Reply> {
    let lattice = parse_lattice_field(v)?;
    let residuated = is_residuated(&lattice);
    let (kind, space) = match v.get("space") {
        Some(s) => (
            "input",
            json::parse_space(s, &lattice).map_err(|e| {
                invalid(JsonError {
                    field: format!("space.{}", e.field),
                    message: e.message,
                })
            })?,
        ),
        None if residuated => ("dv", dv_space(&lattice).map_err(ultra_error)?),
        None => ("dvee", dvee_space(&lattice)),
    };
    let report = space.verify_axioms();
    let valid = report.is_valid();
    let (convex, hyperconvex) = if valid {
        (Some(space.is_convex()), Some(space.is_hyperconvex()))
    } else {
        (None, None)
    };
    ctx.note(format!(
        "{kind} space on {} points: {} axiom violations",
        space.points(),
        report.violations.len()
    ));
    let out = json!({
        "lattice": {
            "size": lattice.size(),
            "distributive": lattice.is_distributive(),
            "residuated": residuated,
        },
        "space": {
            "kind": kind,
            "points": space.points(),
            "d": space.table(),
        },
        "axioms": {
            "valid": valid,
            "separated": report.separated,
            "violations": report.violations.iter().map(violation_json).collect::<Vec<_>>(),
        },
        "balls": space.distinct_balls().len(),
        "convex": convex,
        "hyperconvex": hyperconvex,
        "eq_d": eq_d_json(&space),
    });
    Ok((if valid { EXIT_OK } else { EXIT_FALSE }, out))
}

fn eq_d_json(space: &UltraSpace) -> Value {
    space.eq_d().iter().map(json::partition_to_json).collect()
}

fn ultra_represent(v: &Value, ctx: &mut Ctx) -> Result<Reply, Reply> {
    let lattice = parse_lattice_field(v)?;
    let rep = representation(&lattice).map_err(ultra_error)?;
    let holds = rep.holds();
    ctx.note(format!(
        "{} congruences of the metric space, representation {}",
        rep.congruences.len(),
        if holds { "holds" } else { "fails" }
    ));
    let out = json!({
        "representable": holds,
        "isomorphic": rep.isomorphism.is_some(),
        "arithmetical": rep.arithmetical,
        "isomorphism": rep.isomorphism.as_ref().map(|iso| {
            iso.iter()
                .map(|&i| json::partition_to_json(&rep.congruences.elements()[i]))
                .collect::<Vec<_>>()
        }),
    });
    Ok((if holds { EXIT_OK } else { EXIT_FALSE }, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str], input: &str) -> Outcome {
        let mut argv = vec!["congrue"];
        argv.extend_from_slice(args);
        run(argv, &mut input.as_bytes())
    }

    #[test]
    fn window_flag() {
        assert_eq!(parse_window("-20..20"), Ok((-20, 20)));
        assert!(parse_window("3..1").is_err());
        assert!(parse_window("3").is_err());
    }

    #[test]
    fn crt_lines() {
        let out = run_str(&["crt", "solve"], "2 mod 3\n# comment\n3 mod 5\n");
        assert_eq!(out.code, 0);
        assert_eq!(out.stdout, "{\"residue\":\"8\",\"modulus\":\"15\"}\n");
        let out = run_str(&["crt", "solve"], "0 mod 4\n1 mod 6\n");
        assert_eq!(
            (out.code, out.stdout.as_str()),
            (2, "{\"unsolvable\":[0,1]}\n")
        );
        let out = run_str(&["crt", "solve"], "x mod 4\n");
        assert_eq!(out.code, 2);
        assert!(out.stderr.contains("line 1"));
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_str(&["poly"], "").code, 2);
        assert_eq!(run_str(&["nope"], "").code, 2);
        let help = run_str(&["--help"], "");
        assert_eq!(help.code, 0);
        assert!(help.stdout.contains("poly"));
    }

    #[test]
    fn verbose_goes_to_stderr() {
        let out = run_str(&["--verbose", "crt", "solve"], "1 mod 2\n");
        assert_eq!(out.stderr, "solution: 1 mod 2\n");
        let quiet = run_str(&["crt", "solve"], "1 mod 2\n");
        assert_eq!(quiet.stderr, "");
        assert_eq!(quiet.stdout, out.stdout);
    }
}
