//! Executes a [`RunConfig`] and builds its report.

use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};
use targetkit::characterize::SourceRecipe;
use targetkit::constructors::completion_gap;
use targetkit::verify::{generate_instance, random_spec, verify_property, verify_targeting, InstanceSpec};
use targetkit::{check, solve, ComplexMatrix, PropertyClass, TargetError};

use crate::config::{Command, InstanceShape, ReportFormat, RunConfig};
use crate::{mm, CliError, EXIT_INFEASIBLE, EXIT_INVALID_INPUT, EXIT_NUMERIC_FAILURE, EXIT_OK};

/// Explanation attached to every `gap` report.
pub const GAP_NOTE: &str = "H(B,C) must be positive semidefinite for the block matrix [[B, D], [C, E]] \
to be normal for some D and E, because the leading block of A*A = AA* reads H(B,C) = DD*. \
The test is necessary but not sufficient once B is 3x3 or larger. Normality also requires each row \
of the full matrix to have the same Euclidean norm as the matching column, together with the \
off-diagonal equations of A*A = AA*. With B the 3x3 cyclic shift and C = e1 e1^T, H(B,C) = C is \
semidefinite but no D and E give a normal completion. Choosing DD* = C already equalizes the norms \
of the first row and the first column (both squared norms are 2), so the obstruction sits in the \
remaining equations: the commutator A*A - AA* can be made small only by letting D and E grow \
without bound. A semidefinite H(B,C) is therefore only a screen.";

/// Exit code and report of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub exit_code: i32,
    pub report: Value,
}

impl Outcome {
    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Json => {
                let mut s = serde_json::to_string_pretty(&self.report).expect("report values are finite");
                s.push('\n');
                s
            }
            ReportFormat::Text => {
                let mut out = String::new();
                render_text(&self.report, "", &mut out);
                out
            }
        }
    }

    /// Report for a failure, with the certificate when there is one.
    pub fn from_error(command: Command, err: &CliError) -> Self {
        let (exit_code, status) = classify(err);
        let mut report = header(command, status, exit_code);
        report.insert("error".into(), json!({ "kind": error_kind(err), "message": err.to_string() }));
        match err {
            CliError::Core(TargetError::Infeasible(cert)) => {
                report.insert("certificate".into(), json!(cert));
            }
            CliError::Core(TargetError::RankProviso { unique }) => {
                report.insert("unique_solution".into(), json!({ "scaled_identity": [unique.re, unique.im] }));
            }
            _ => {}
        }
        Outcome {
            exit_code,
            report: Value::Object(report),
        }
    }
}

/// Runs the command; any output matrices are written, the report is not.
pub fn run(config: &RunConfig) -> Outcome {
    let result = config.validate().and_then(|()| match config.command {
        Command::Solve => run_solve(config),
        Command::Check => run_check(config),
        Command::Verify => run_verify(config),
        Command::Generate => run_generate(config),
        Command::GenerateSource => run_generate_source(config),
        Command::Gap => run_gap(config),
    });
    result.unwrap_or_else(|e| Outcome::from_error(config.command, &e))
}

/// Runs, renders, and writes the report to `config.report` if set. Returns
/// the exit code and the rendered report.
pub fn execute(config: &RunConfig) -> (i32, String) {
    let outcome = run(config);
    let text = outcome.render(config.format);
    if let Some(path) = &config.report {
        if let Err(e) = fs::write(path, &text) {
            let failure = Outcome::from_error(config.command, &CliError::Input(format!("{}: {e}", path.display())));
            return (failure.exit_code, failure.render(config.format));
        }
    }
    (outcome.exit_code, text)
}

fn classify(err: &CliError) -> (i32, &'static str) {
    match err {
        CliError::Input(_) => (EXIT_INVALID_INPUT, "invalid-input"),
        CliError::Core(e) => match e {
            TargetError::Infeasible(_) => (EXIT_INFEASIBLE, "infeasible"),
            TargetError::RankProviso { .. } => (EXIT_INFEASIBLE, "rank-proviso"),
            TargetError::LambdaSearchFailed { .. } | TargetError::NumericFailure(_) => {
                (EXIT_NUMERIC_FAILURE, "numeric-failure")
            }
            _ => (EXIT_INVALID_INPUT, "invalid-input"),
        },
    }
}

fn error_kind(err: &CliError) -> &'static str {
    let CliError::Core(e) = err else {
        return "input";
    };
    match e {
        TargetError::ZeroMatrix { .. } => "zero-matrix",
        TargetError::ShapeMismatch(_) => "shape-mismatch",
        TargetError::NonFinite => "non-finite",
        TargetError::NotOrthonormal { .. } => "not-orthonormal",
        TargetError::BadVariantPrecondition(_) => "bad-variant-precondition",
        TargetError::Infeasible(_) => "infeasible",
        TargetError::LambdaSearchFailed { .. } => "lambda-search-failed",
        TargetError::ZeroTarget => "zero-target",
        TargetError::ZeroVector => "zero-vector",
        TargetError::BadFreeParameter(_) => "bad-free-parameter",
        TargetError::RankProviso { .. } => "rank-proviso",
        TargetError::ConditionViolated(_) => "condition-violated",
        TargetError::InvalidProperty(_) => "invalid-property",
        TargetError::BadSpec(_) => "bad-spec",
        TargetError::TooLarge { .. } => "too-large",
        TargetError::BadTolerance(_) => "bad-tolerance",
        TargetError::NumericFailure(_) => "numeric-failure",
    }
}

fn header(command: Command, status: &str, exit_code: i32) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), json!(command.name()));
    m.insert("status".into(), json!(status));
    m.insert("exit_code".into(), json!(exit_code));
    m
}

fn finish(command: Command, exit_code: i32, body: Value) -> Outcome {
    let status = match (exit_code, command) {
        (EXIT_OK, _) => "ok",
        (_, Command::Verify) => "rejected",
        _ => "infeasible",
    };
    let mut report = header(command, status, exit_code);
    if let Value::Object(fields) = body {
        report.extend(fields);
    }
    Outcome {
        exit_code,
        report: Value::Object(report),
    }
}

fn required<'a>(path: &'a Option<std::path::PathBuf>, flag: &str) -> Result<&'a Path, CliError> {
    path.as_deref().ok_or_else(|| CliError::Input(format!("missing {flag}")))
}

fn property(config: &RunConfig) -> Result<PropertyClass, CliError> {
    config.property.ok_or_else(|| CliError::Input("missing --property".into()))
}

fn display(path: Option<&Path>) -> Value {
    path.map_or(Value::Null, |p| json!(p.display().to_string()))
}

fn run_solve(config: &RunConfig) -> Result<Outcome, CliError> {
    let p = property(config)?;
    let x = mm::read(required(&config.x, "--X")?)?;
    let y = mm::read(required(&config.y, "--Y")?)?;
    let tol = &config.tolerances;
    let sol = solve(p, &x, &y, tol)?;
    if let Some(out) = &config.out {
        mm::write(out, &sol.a)?;
    }
    Ok(finish(
        config.command,
        EXIT_OK,
        json!({
            "property": p,
            "verdict": "feasible",
            "residual": sol.residual,
            "property_deviation": sol.property_deviation,
            "free_params": sol.free_params,
            "tolerances": tol,
            "a": sol.a,
            "out": display(config.out.as_deref()),
        }),
    ))
}

fn run_check(config: &RunConfig) -> Result<Outcome, CliError> {
    let p = property(config)?;
    let x = mm::read(required(&config.x, "--X")?)?;
    let y = mm::read(required(&config.y, "--Y")?)?;
    let report = check(p, &x, &y, &config.tolerances)?;
    let code = if report.is_feasible() { EXIT_OK } else { EXIT_INFEASIBLE };
    let mut body = json!(report);
    body["tolerances"] = json!(config.tolerances);
    Ok(finish(config.command, code, body))
}

fn run_verify(config: &RunConfig) -> Result<Outcome, CliError> {
    let p = property(config)?;
    let a = mm::read(required(&config.a, "--A")?)?;
    let x = mm::read(required(&config.x, "--X")?)?;
    let y = mm::read(required(&config.y, "--Y")?)?;
    let tol = &config.tolerances;
    let residual = verify_targeting(&a, &x, &y)?;
    let property_check = verify_property(&a, p, tol);
    let accepted = residual <= tol.residual_tol && property_check.passed;
    Ok(finish(
        config.command,
        if accepted { EXIT_OK } else { EXIT_INFEASIBLE },
        json!({
            "property": p,
            "verdict": if accepted { "accepted" } else { "rejected" },
            "residual": residual,
            "residual_threshold": tol.residual_tol,
            "property_check": property_check,
            "tolerances": tol,
        }),
    ))
}

/// Seeded spec with the explicitly requested fields overridden.
fn instance_spec(p: PropertyClass, seed: u64, shape: &InstanceShape) -> Result<InstanceSpec, CliError> {
    let mut spec = random_spec(p, seed, 8);
    match (shape.m, shape.n) {
        (Some(m), Some(n)) => (spec.m, spec.n) = (m, n),
        (Some(m), None) => (spec.m, spec.n) = (m, spec.n.min(m)),
        (None, Some(n)) => (spec.m, spec.n) = (spec.m.max(n), n),
        (None, None) => {}
    }
    if let Some(field) = shape.field {
        spec.field = field;
    }
    if shape.rank_deficiency.is_some() {
        spec.rank_deficiency = shape.rank_deficiency;
    } else if spec.rank_deficiency.is_some_and(|d| d >= spec.m.min(spec.n)) {
        spec.rank_deficiency = None;
    }
    spec.validate()?;
    Ok(spec)
}

fn run_generate(config: &RunConfig) -> Result<Outcome, CliError> {
    let p = property(config)?;
    let spec = instance_spec(p, config.seed, &config.shape)?;
    let inst = generate_instance(&spec)?;
    for (path, m) in [(&config.x, &inst.x), (&config.y, &inst.y), (&config.a, &inst.witness)] {
        if let Some(path) = path {
            mm::write(path, m)?;
        }
    }
    Ok(finish(
        config.command,
        EXIT_OK,
        json!({
            "property": p,
            "seed": config.seed,
            "spec": spec,
            "x": inst.x,
            "y": inst.y,
            "witness": inst.witness,
        }),
    ))
}

fn run_generate_source(config: &RunConfig) -> Result<Outcome, CliError> {
    let p = property(config)?;
    let y = mm::read(required(&config.y, "--Y")?)?;
    let tol = &config.tolerances;
    let recipe = SourceRecipe::random(p, &y, config.seed, tol)?;
    let x = recipe.build(tol)?;
    let feasibility = check(p, &x, &y, tol)?;
    if let Some(out) = &config.out {
        mm::write(out, &x)?;
    }
    Ok(finish(
        config.command,
        EXIT_OK,
        json!({
            "property": p,
            "seed": config.seed,
            "rank": recipe.rank(),
            "blocks": recipe.blocks,
            "x": x,
            "verdict": feasibility.verdict,
            "out": display(config.out.as_deref()),
        }),
    ))
}

fn run_gap(config: &RunConfig) -> Result<Outcome, CliError> {
    let b = mm::read(required(&config.b, "--B")?)?;
    let c = mm::read(required(&config.c, "--C")?)?;
    let gap = completion_gap(&b, &c, &config.tolerances)?;
    let code = if gap.psd { EXIT_OK } else { EXIT_INFEASIBLE };
    let mut body = json!(gap);
    body["note"] = json!(GAP_NOTE);
    Ok(finish(config.command, code, body))
}

/// Indented `key: value` lines; matrices are drawn as rows.
fn render_text(v: &Value, indent: &str, out: &mut String) {
    let Value::Object(map) = v else {
        out.push_str(&format!("{indent}{v}\n"));
        return;
    };
    for (key, value) in map {
        if let Some(m) = as_matrix(value) {
            out.push_str(&format!("{indent}{key}:\n"));
            for line in m.to_string().lines() {
                out.push_str(&format!("{indent}  {line}\n"));
            }
            continue;
        }
        match value {
            Value::Object(_) => {
                out.push_str(&format!("{indent}{key}:\n"));
                render_text(value, &format!("{indent}  "), out);
            }
            Value::Array(items) if items.iter().any(Value::is_object) => {
                out.push_str(&format!("{indent}{key}:\n"));
                for item in items {
                    out.push_str(&format!("{indent}  -\n"));
                    render_text(item, &format!("{indent}    "), out);
                }
            }
            Value::String(s) => out.push_str(&format!("{indent}{key}: {s}\n")),
            other => out.push_str(&format!("{indent}{key}: {other}\n")),
        }
    }
}

/// Recognizes the serialized `{rows, cols, field, re[, im]}` matrix form.
fn as_matrix(v: &Value) -> Option<ComplexMatrix> {
    let rows = v.get("rows")?.as_u64()? as usize;
    let cols = v.get("cols")?.as_u64()? as usize;
    let nums = |key: &str| -> Option<Vec<f64>> { v.get(key)?.as_array()?.iter().map(Value::as_f64).collect() };
    let re = nums("re")?;
    let im = match v.get("im") {
        Some(_) => nums("im")?,
        None => vec![0.0; re.len()],
    };
    let entries: Vec<_> = re.iter().zip(&im).map(|(&r, &i)| num_complex::Complex64::new(r, i)).collect();
    ComplexMatrix::from_row_slice(rows, cols, &entries).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    fn write_tmp(dir: &Path, name: &str, m: &ComplexMatrix) -> PathBuf {
        let path = dir.join(name);
        mm::write(&path, m).unwrap();
        path
    }

    fn config(command: Command, property: Option<PropertyClass>) -> RunConfig {
        RunConfig {
            property,
            ..RunConfig::new(command)
        }
    }

    #[test]
    fn hermitian_swap_is_solved() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = config(Command::Solve, Some(PropertyClass::Hermitian));
        c.x = Some(write_tmp(dir.path(), "x.mtx", &ComplexMatrix::real(&[&[1.0], &[0.0]])));
        c.y = Some(write_tmp(dir.path(), "y.mtx", &ComplexMatrix::real(&[&[0.0], &[1.0]])));
        c.out = Some(dir.path().join("a.mtx"));
        let o = run(&c);
        assert_eq!(o.exit_code, EXIT_OK);
        let a = mm::read(&dir.path().join("a.mtx")).unwrap();
        assert!(a.distance(&ComplexMatrix::real(&[&[0.0, 1.0], &[1.0, 0.0]])) < 1e-12);
        assert_eq!(o.report["verdict"], "feasible");
    }

    #[test]
    fn null_inclusion_failure_exits_infeasible() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = config(Command::Check, Some(PropertyClass::Unconstrained));
        c.x = Some(write_tmp(dir.path(), "x.mtx", &ComplexMatrix::real(&[&[1.0, 0.0], &[0.0, 0.0]])));
        c.y = Some(write_tmp(dir.path(), "y.mtx", &ComplexMatrix::real(&[&[0.0, 1.0], &[0.0, 0.0]])));
        let o = run(&c);
        assert_eq!(o.exit_code, EXIT_INFEASIBLE);
        assert_eq!(o.report["verdict"], "infeasible");
        let failed: Vec<_> = o.report["conditions"]
            .as_array()
            .unwrap()
            .iter()
            .filter(|c| c["satisfied"] == false)
            .map(|c| c["name"].as_str().unwrap())
            .collect();
        assert_eq!(failed, ["null-inclusion"]);

        c.command = Command::Solve;
        let o = run(&c);
        assert_eq!(o.exit_code, EXIT_INFEASIBLE);
        assert_eq!(o.report["error"]["kind"], "infeasible");
        assert_eq!(o.report["certificate"]["verdict"], "infeasible");
    }

    #[test]
    fn bad_inputs_exit_invalid() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = config(Command::Solve, Some(PropertyClass::Hermitian));
        c.x = Some(dir.path().join("missing.mtx"));
        c.y = Some(dir.path().join("missing.mtx"));
        assert_eq!(run(&c).exit_code, EXIT_INVALID_INPUT);

        c.x = Some(write_tmp(dir.path(), "x.mtx", &ComplexMatrix::real(&[&[1.0], &[0.0]])));
        c.y = Some(write_tmp(dir.path(), "y.mtx", &ComplexMatrix::real(&[&[1.0, 2.0]])));
        let o = run(&c);
        assert_eq!(o.exit_code, EXIT_INVALID_INPUT);
        assert_eq!(o.report["error"]["kind"], "shape-mismatch");
    }

    #[test]
    fn rank_proviso_reports_the_scalar_solution() {
        let dir = tempfile::tempdir().unwrap();
        let two = PropertyClass::two_point(num_complex::Complex64::new(2.0, 0.0), num_complex::Complex64::new(0.0, 0.0));
        let mut c = config(Command::Solve, Some(two.unwrap()));
        c.x = Some(write_tmp(dir.path(), "x.mtx", &ComplexMatrix::identity(2)));
        c.y = Some(write_tmp(dir.path(), "y.mtx", &ComplexMatrix::identity(2).scale(2.0.into())));
        let o = run(&c);
        assert_eq!(o.exit_code, EXIT_INFEASIBLE);
        assert_eq!(o.report["status"], "rank-proviso");
        assert_eq!(o.report["unique_solution"]["scaled_identity"], json!([2.0, 0.0]));
    }

    #[test]
    fn gap_reports_cyclic_example() {
        let dir = tempfile::tempdir().unwrap();
        let b = ComplexMatrix::real(&[&[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]);
        let e11 = ComplexMatrix::real(&[&[1.0, 0.0, 0.0], &[0.0, 0.0, 0.0], &[0.0, 0.0, 0.0]]);
        let mut c = config(Command::Gap, None);
        c.b = Some(write_tmp(dir.path(), "b.mtx", &b));
        c.c = Some(write_tmp(dir.path(), "c.mtx", &e11));
        let o = run(&c);
        assert_eq!(o.exit_code, EXIT_OK);
        assert_eq!(o.report["psd"], true);
        assert_eq!(as_matrix(&o.report["h"]).unwrap(), e11);
        let text = o.render(ReportFormat::Text);
        assert!(text.contains("first row") && text.contains("first column"));
    }

    #[test]
    fn generate_then_solve_recovers_the_instance() {
        let dir = tempfile::tempdir().unwrap();
        let mut g = config(Command::Generate, Some(PropertyClass::Unitary));
        g.seed = 11;
        g.x = Some(dir.path().join("x.mtx"));
        g.y = Some(dir.path().join("y.mtx"));
        g.a = Some(dir.path().join("w.mtx"));
        assert_eq!(run(&g).exit_code, EXIT_OK);

        let mut v = config(Command::Verify, Some(PropertyClass::Unitary));
        v.x = g.x.clone();
        v.y = g.y.clone();
        v.a = g.a.clone();
        assert_eq!(run(&v).exit_code, EXIT_OK);

        let mut s = config(Command::Solve, Some(PropertyClass::Unitary));
        s.x = g.x.clone();
        s.y = g.y.clone();
        assert_eq!(run(&s).exit_code, EXIT_OK);
    }

    #[test]
    fn generated_sources_are_feasible() {
        let dir = tempfile::tempdir().unwrap();
        let y = ComplexMatrix::real(&[&[1.0, 2.0], &[0.0, 1.0], &[3.0, -1.0]]);
        for p in [PropertyClass::Hermitian, PropertyClass::Reflection, PropertyClass::OrthogonalProjection] {
            let mut c = config(Command::GenerateSource, Some(p));
            c.y = Some(write_tmp(dir.path(), "y.mtx", &y));
            c.out = Some(dir.path().join("x.mtx"));
            let o = run(&c);
            assert_eq!(o.exit_code, EXIT_OK, "{p}");
            assert_eq!(o.report["verdict"], "feasible");
        }
    }

    #[test]
    fn explicit_shape_overrides_the_seeded_one() {
        let shape = InstanceShape {
            m: Some(5),
            n: Some(2),
            field: Some(targetkit::scalar::Field::Real),
            rank_deficiency: Some(1),
        };
        let spec = instance_spec(PropertyClass::Hermitian, 3, &shape).unwrap();
        assert_eq!((spec.m, spec.n, spec.rank()), (5, 2, 1));
        let bad = InstanceShape { m: Some(2), n: Some(3), ..shape };
        assert!(instance_spec(PropertyClass::Hermitian, 3, &bad).is_err());
    }

    #[test]
    fn text_format_draws_matrices() {
        let o = finish(Command::Solve, EXIT_OK, json!({ "a": ComplexMatrix::identity(2), "residual": 0.0 }));
        let text = o.render(ReportFormat::Text);
        assert!(text.contains("status: ok"));
        assert!(text.contains("a:\n  "));
    }
}
