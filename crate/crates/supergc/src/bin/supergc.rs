//! Command-line front end: scenario verification, structure tables with
//! golden diffs, closed-form adjoint orbits, curvature reports, subalgebra
//! classification listings, and expression canonicalization.
//!
//! Exit codes: 0 when the requested check passes, 1 when a verification or
//! comparison fails, 2 on input errors.

use clap::{Parser, Subcommand};
use supergc::adjoint::{standard_checks, AlgebraModel, Element};
use supergc::data::{load_scenario, load_subalgebras, load_table};
use supergc::expr::GradedExpr;
use supergc::liesuper::{build_table, StructureTable};
use supergc::parser::{parse, ParseChart, ParserContext, SymbolTable};
use supergc::subalg::validate;
use supergc::symalg::{basis, table_diff, table_name};
use supergc::verify::SystemKind;

#[derive(Parser)]
#[command(name = "supergc", version, about = "Graded symbolic checks for superspace surface systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify a solution record against its compatibility system.
    Verify {
        /// Bundled scenario name or path to a scenario file.
        #[arg(long)]
        scenario: String,
        /// Run only this sign for the `eps` constant (+1 or -1).
        #[arg(long, allow_hyphen_values = true)]
        epsilon: Option<i64>,
        /// Emit the run report as one line of JSON.
        #[arg(long)]
        json: bool,
    },
    /// Recompute a structure table and diff it against the bundled copy.
    Table {
        /// classical-finite, bosonic, fermionic, or fermionic-constf.
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        json: bool,
    },
    /// Closed-form adjoint orbit of Y under the exponential of X.
    Adjoint {
        /// Algebra the elements live in (defaults to bosonic).
        #[arg(long)]
        algebra: Option<String>,
        /// Element to exponentiate; generator names as symbols, odd
        /// constants written with `~`.
        #[arg(long = "X", allow_hyphen_values = true)]
        x: Option<String>,
        /// Element the orbit acts on. Without --X/--Y the bundled orbit
        /// reproductions run instead.
        #[arg(long = "Y", allow_hyphen_values = true)]
        y: Option<String>,
        /// Orientation sign of the exponential (+1 or -1).
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        orientation: i64,
        #[arg(long)]
        json: bool,
    },
    /// Curvature report for a scenario's bound surface data.
    Curvature {
        #[arg(long)]
        scenario: String,
        /// Run only this sign for the `eps` constant (+1 or -1).
        #[arg(long, allow_hyphen_values = true)]
        epsilon: Option<i64>,
        #[arg(long)]
        json: bool,
    },
    /// List and validate a bundled subalgebra classification.
    Subalgebras {
        /// g (bosonic), h (fermionic), or classical.
        #[arg(long)]
        list: String,
        /// Show only the entry with this id.
        #[arg(long)]
        id: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Canonicalize an expression and print its normal form.
    Canon {
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        #[arg(long)]
        json: bool,
    },
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify {
            scenario,
            epsilon,
            json,
        } => cmd_verify(&scenario, epsilon, json),
        Command::Table { algebra, json } => cmd_table(&algebra, json),
        Command::Adjoint {
            algebra,
            x,
            y,
            orientation,
            json,
        } => cmd_adjoint(algebra.as_deref(), x.as_deref(), y.as_deref(), orientation, json),
        Command::Curvature {
            scenario,
            epsilon,
            json,
        } => cmd_curvature(&scenario, epsilon, json),
        Command::Subalgebras { list, id, json } => cmd_subalgebras(&list, id.as_deref(), json),
        Command::Canon { expr, json } => cmd_canon(&expr, json),
    };
    match outcome {
        Ok(true) => std::process::exit(0),
        Ok(false) => std::process::exit(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
    }
}

fn check_sign(s: i64) -> Result<(), String> {
    if s == 1 || s == -1 {
        Ok(())
    } else {
        Err(format!("sign must be +1 or -1, got {s}"))
    }
}

fn algebra_kind(key: &str) -> Result<SystemKind, String> {
    match key {
        "bosonic" | "g" => Ok(SystemKind::Bosonic),
        "fermionic" | "h" => Ok(SystemKind::Fermionic),
        "fermionic-constf" => Ok(SystemKind::FermionicConstantF),
        "classical-finite" | "classical" => Ok(SystemKind::Classical),
        other => Err(format!(
            "unknown algebra `{other}` (expected classical-finite, bosonic, fermionic, or fermionic-constf)"
        )),
    }
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn cmd_verify(name: &str, epsilon: Option<i64>, json: bool) -> Result<bool, String> {
    let scenario = load_scenario(name).map_err(|e| e.to_string())?;
    let run = match epsilon {
        Some(s) => {
            check_sign(s)?;
            scenario.run_signs(&[Some(s)])
        }
        None => scenario.run(),
    }
    .map_err(|e| e.to_string())?;
    if json {
        println!("{}", serde_json::to_string(&run).expect("report serializes"));
        return Ok(run.ok);
    }
    println!("== {} ==", run.scenario);
    for note in &scenario.notes {
        println!("   {note}");
    }
    for case in &run.cases {
        let eps = match case.report.epsilon {
            Some(s) => format!("eps = {s:+}"),
            None => "no eps".to_string(),
        };
        let verdict = if case.report.pass { "PASS" } else { "FAIL" };
        let expected = match case.expected_pass {
            Some(true) => " (expected PASS)",
            Some(false) => " (expected FAIL)",
            None => "",
        };
        println!("[{verdict}] {} | {eps}{expected}", case.report.system);
        for row in &case.report.residuals {
            if !row.zero {
                println!("   residual {} = {}", row.name, row.reduced);
            }
        }
        for check in &case.values {
            let mark = if check.ok { "ok" } else { "MISMATCH" };
            println!("   value {}: {} [{mark}]", check.key, check.actual);
            if !check.ok {
                println!("      expected {}", check.expected);
            }
        }
    }
    println!(
        "result: {}",
        if run.ok {
            "declared expectations met"
        } else {
            "declared expectations NOT met"
        }
    );
    Ok(run.ok)
}

// ---------------------------------------------------------------------------
// table
// ---------------------------------------------------------------------------

#[derive(serde::Serialize)]
struct TableReport {
    algebra: String,
    table: StructureTable,
    diffs: Vec<String>,
    matches_golden: bool,
}

fn cmd_table(algebra: &str, json: bool) -> Result<bool, String> {
    let kind = algebra_kind(algebra)?;
    let computed = build_table(&basis(kind)).map_err(|e| e.to_string())?;
    let golden = load_table(table_name(kind)).map_err(|e| e.to_string())?;
    let diffs = table_diff(&computed, &golden);
    let ok = diffs.is_empty();
    if json {
        let report = TableReport {
            algebra: algebra.to_string(),
            table: computed,
            diffs,
            matches_golden: ok,
        };
        println!("{}", serde_json::to_string(&report).expect("report serializes"));
        return Ok(ok);
    }
    print_table(&computed);
    if ok {
        println!("matches the bundled golden table");
    } else {
        println!("DIFFERS from the bundled golden table:");
        for d in &diffs {
            println!("   {d}");
        }
    }
    Ok(ok)
}

fn print_table(table: &StructureTable) {
    let n = table.names.len();
    let mut widths = vec![0usize; n + 1];
    for (i, name) in table.names.iter().enumerate() {
        widths[0] = widths[0].max(name.len());
        widths[i + 1] = name.len();
    }
    for row in &table.entries {
        for (j, cell) in row.iter().enumerate() {
            widths[j + 1] = widths[j + 1].max(cell.len());
        }
    }
    let pad = |s: &str, w: usize| format!("{s:<w$}");
    let mut header = pad("", widths[0]);
    for (j, name) in table.names.iter().enumerate() {
        header += &format!("  {}", pad(name, widths[j + 1]));
    }
    println!("{header}");
    for (i, row) in table.entries.iter().enumerate() {
        let mut line = pad(&table.names[i], widths[0]);
        for (j, cell) in row.iter().enumerate() {
            line += &format!("  {}", pad(cell, widths[j + 1]));
        }
        println!("{line}");
    }
    if !table.odd.is_empty() {
        println!("odd generators: {}", table.odd.join(", "));
    }
}

// ---------------------------------------------------------------------------
// adjoint
// ---------------------------------------------------------------------------

/// Declares every identifier the expression mentions that the table does
/// not already know: `~name` as an odd constant, others as even constants.
fn declare_free_symbols(table: &mut SymbolTable, text: &str) {
    let chars: Vec<char> = text.chars().collect();
    let mut prev_sig = ' ';
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let name: String = chars[start..i].iter().collect();
            let odd = prev_sig == '~';
            prev_sig = 'a';
            if matches!(name.as_str(), "i" | "exp" | "log") || table.get(&name).is_some() {
                continue;
            }
            if odd {
                table.declare_odd_const(&name);
            } else {
                table.declare_even_const(&name, false, None);
            }
        } else {
            if !c.is_whitespace() {
                prev_sig = c;
            }
            i += 1;
        }
    }
}

fn element_context(model: &AlgebraModel) -> ParserContext {
    let mut table = SymbolTable::new();
    for (name, odd) in model.names.iter().zip(&model.odd) {
        if *odd {
            table.declare_odd_const(name);
        } else {
            table.declare_even_const(name, false, None);
        }
    }
    ParserContext {
        table,
        chart: ParseChart::Classical(supergc::calculus::ClassicalChart::standard()),
    }
}

fn parse_element(model: &AlgebraModel, text: &str) -> Result<Element, String> {
    let mut ctx = element_context(model);
    declare_free_symbols(&mut ctx.table, text);
    let expr = parse(&ctx, text).map_err(|e| e.to_string())?;
    model.element_from_expr(&expr).map_err(|e| e.to_string())
}

#[derive(serde::Serialize)]
struct OrbitReport {
    algebra: String,
    x: String,
    y: String,
    orientation: i64,
    orbit: String,
}

fn cmd_adjoint(
    algebra: Option<&str>,
    x: Option<&str>,
    y: Option<&str>,
    orientation: i64,
    json: bool,
) -> Result<bool, String> {
    check_sign(orientation)?;
    match (x, y) {
        (Some(xs), Some(ys)) => {
            let key = algebra.unwrap_or("bosonic");
            let kind = algebra_kind(key)?;
            let model = AlgebraModel::from_basis(&basis(kind)).map_err(|e| e.to_string())?;
            let xe = parse_element(&model, xs)?;
            let ye = parse_element(&model, ys)?;
            match model.adjoint_orbit(&xe, &ye, orientation) {
                Ok(orbit) => {
                    if json {
                        let report = OrbitReport {
                            algebra: key.to_string(),
                            x: model.display(&xe),
                            y: model.display(&ye),
                            orientation,
                            orbit: model.display(&orbit),
                        };
                        println!("{}", serde_json::to_string(&report).expect("report serializes"));
                    } else {
                        println!("X = {}", model.display(&xe));
                        println!("Y = {}", model.display(&ye));
                        println!("orientation = {orientation:+}");
                        println!("orbit = {}", model.display(&orbit));
                    }
                    Ok(true)
                }
                Err(e) => {
                    eprintln!("no closed form: {e}");
                    Ok(false)
                }
            }
        }
        (None, None) => {
            let checks = standard_checks().map_err(|e| e.to_string())?;
            let checks: Vec<_> = match algebra {
                Some(key) => {
                    let kind = algebra_kind(key)?;
                    let label = match kind {
                        SystemKind::Bosonic => "bosonic",
                        SystemKind::Fermionic => "fermionic",
                        _ => return Err(format!("no bundled orbit checks for `{key}`")),
                    };
                    checks.into_iter().filter(|c| c.algebra == label).collect()
                }
                None => checks,
            };
            let ok = checks.iter().all(|c| c.matched);
            if json {
                println!("{}", serde_json::to_string(&checks).expect("report serializes"));
                return Ok(ok);
            }
            for c in &checks {
                let verdict = if c.matched { "PASS" } else { "FAIL" };
                let orient = match c.orientation {
                    Some(s) => format!("{s:+}"),
                    None => "none".to_string(),
                };
                println!("[{verdict}] {} ({}) at orientation {orient}", c.name, c.algebra);
                println!("   X = {}", c.x);
                println!("   Y = {}", c.y);
                println!("   orbit    = {}", c.orbit);
                if !c.matched {
                    println!("   expected = {}", c.expected);
                }
            }
            Ok(ok)
        }
        _ => Err("--X and --Y must be given together".to_string()),
    }
}

// ---------------------------------------------------------------------------
// curvature
// ---------------------------------------------------------------------------

#[derive(serde::Serialize)]
struct CurvatureCase {
    epsilon: Option<i64>,
    report: supergc::geometry::CurvatureReport,
}

fn cmd_curvature(name: &str, epsilon: Option<i64>, json: bool) -> Result<bool, String> {
    let scenario = load_scenario(name).map_err(|e| e.to_string())?;
    let signs = match epsilon {
        Some(s) => {
            check_sign(s)?;
            vec![Some(s)]
        }
        None => scenario.signs(),
    };
    let mut cases = Vec::new();
    for sign in signs {
        let record = scenario.record(sign).map_err(|e| e.to_string())?;
        let report = record.curvatures().map_err(|e| e.to_string())?;
        cases.push(CurvatureCase {
            epsilon: sign,
            report,
        });
    }
    if json {
        println!("{}", serde_json::to_string(&cases).expect("report serializes"));
        return Ok(true);
    }
    for case in &cases {
        match case.epsilon {
            Some(s) => println!("== {} (eps = {s:+}) ==", scenario.name),
            None => println!("== {} ==", scenario.name),
        }
        let r = &case.report;
        println!("gaussian = {}", r.gaussian.display());
        println!("mean     = {}", r.mean.display());
        println!("umbilic  = {}", r.umbilic.display());
        if let Some(d) = &r.metric_discriminant {
            println!("metric discriminant = {}", d.display());
        }
        if let Some(d) = &r.shape_discriminant {
            println!("shape discriminant  = {}", d.display());
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// subalgebras
// ---------------------------------------------------------------------------

fn subalgebra_source(key: &str) -> Result<(&'static str, SystemKind), String> {
    match key {
        "g" | "bosonic" => Ok(("bosonic", SystemKind::Bosonic)),
        "h" | "fermionic" => Ok(("fermionic", SystemKind::Fermionic)),
        "classical" => Ok(("classical", SystemKind::Classical)),
        other => Err(format!(
            "unknown list `{other}` (expected g, h, or classical)"
        )),
    }
}

#[derive(serde::Serialize)]
struct SubalgebraReport {
    list: String,
    entries: Vec<supergc::subalg::SubalgebraEntry>,
    issues: Vec<supergc::subalg::ValidationIssue>,
    ok: bool,
}

fn cmd_subalgebras(list_key: &str, id: Option<&str>, json: bool) -> Result<bool, String> {
    let (name, kind) = subalgebra_source(list_key)?;
    let list = load_subalgebras(name).map_err(|e| e.to_string())?;
    let model = AlgebraModel::from_basis(&basis(kind)).map_err(|e| e.to_string())?;
    let issues = validate(&list, &model);
    let entries = match id {
        Some(wanted) => {
            let entry = list
                .entry(wanted)
                .ok_or_else(|| format!("no entry `{wanted}` in list `{name}`"))?;
            vec![entry.clone()]
        }
        None => list.entries.clone(),
    };
    let relevant: Vec<_> = issues
        .into_iter()
        .filter(|i| id.is_none_or(|wanted| i.id == wanted))
        .collect();
    let ok = relevant.is_empty();
    if json {
        let report = SubalgebraReport {
            list: name.to_string(),
            entries,
            issues: relevant,
            ok,
        };
        println!("{}", serde_json::to_string(&report).expect("report serializes"));
        return Ok(ok);
    }
    for e in &entries {
        let conds = if e.conditions.is_empty() {
            String::new()
        } else {
            format!("   [{}]", e.conditions.join(", "))
        };
        println!("{:<8} {}{}", e.id, e.display(), conds);
    }
    if ok {
        println!("{} entries; parity and closure validation clean", entries.len());
    } else {
        println!("validation issues:");
        for i in &relevant {
            println!("   {}: {}", i.id, i.detail);
        }
    }
    Ok(ok)
}

// ---------------------------------------------------------------------------
// canon
// ---------------------------------------------------------------------------

#[derive(serde::Serialize)]
struct CanonReport {
    input: String,
    canonical: String,
    parity: String,
    terms: usize,
}

fn cmd_canon(expr: &str, json: bool) -> Result<bool, String> {
    let mut ctx = ParserContext::standard();
    declare_free_symbols(&mut ctx.table, expr);
    let parsed = parse(&ctx, expr).map_err(|e| e.to_string())?;
    let report = CanonReport {
        input: expr.to_string(),
        canonical: parsed.display(),
        parity: format!("{:?}", parsed.parity()),
        terms: parsed.terms().len(),
    };
    if json {
        println!("{}", serde_json::to_string(&report).expect("report serializes"));
    } else {
        println!("{}", report.canonical);
        println!("parity: {} | terms: {}", report.parity, report.terms);
    }
    Ok(true)
}
