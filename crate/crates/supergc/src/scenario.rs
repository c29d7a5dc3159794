//! Scenario files: declarative TOML descriptions of solution records.
//! A scenario declares symbols, coordinate dependencies, field bindings,
//! and oriented rewrite rules as expression strings; loading parses
//! everything in a single symbol context and yields one runnable
//! [`SolutionRecord`] per concrete choice of the sign constant `eps`.

use crate::calculus::{map_atoms, DepTable};
use crate::expr::{Atom, EngineError, GradedExpr};
use crate::gcsys::ClassicalChart;
use crate::parser::{parse, ParseChart, ParseError, ParserContext};
use crate::rules::{Rule, RuleError, RuleSet};
use crate::superfield::Chart;
use crate::verify::{SolutionRecord, SystemKind};
use serde::Deserialize;
use std::collections::BTreeMap;
use thiserror::Error;

/// Scenario loading failure.
#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("scenario file is not valid TOML: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("unknown system `{0}`")]
    UnknownSystem(String),
    #[error("unknown epsilon choice `{0}` (expected \"+1\", \"-1\", or \"both\")")]
    BadEpsilon(String),
    #[error("symbol `{name}`: {msg}")]
    BadSymbol { name: String, msg: String },
    #[error("in {context}: {source}")]
    Parse {
        context: String,
        #[source]
        source: ParseError,
    },
    #[error("rule {index}: {msg}")]
    BadRule { index: usize, msg: String },
    #[error("expected value `{key}` {msg}")]
    BadExpectation { key: String, msg: String },
    #[error("verification failed: {0}")]
    Verify(String),
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

// ---------------------------------------------------------------------------
// raw TOML shape
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    scenario: HeaderSpec,
    #[serde(default)]
    symbols: BTreeMap<String, SymbolSpec>,
    #[serde(default)]
    deps: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default)]
    bindings: BTreeMap<String, String>,
    #[serde(default, rename = "param-subs")]
    param_subs: BTreeMap<String, String>,
    #[serde(default)]
    rules: Vec<RuleSpec>,
    #[serde(default)]
    expect: ExpectSpec,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct HeaderSpec {
    name: String,
    system: String,
    #[serde(default)]
    epsilon: Option<String>,
    #[serde(default)]
    notes: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SymbolSpec {
    kind: String,
    #[serde(default)]
    args: Vec<String>,
    #[serde(default)]
    bodiless: bool,
    #[serde(default)]
    nilpotent: Option<u32>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
enum RuleSpec {
    #[serde(rename = "fn-deriv")]
    FnDeriv {
        name: String,
        deriv: Vec<u32>,
        rhs: String,
    },
    #[serde(rename = "pair")]
    Pair { a: String, b: String, rhs: String },
    #[serde(rename = "exp-unfold")]
    ExpUnfold { target: String, replacement: String },
}

/// Declared expectations: overall verdict plus named canonical values
/// (curvatures, reduced residuals) the run should reproduce.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectSpec {
    pub pass: Option<bool>,
    #[serde(default)]
    pub values: BTreeMap<String, String>,
}

// ---------------------------------------------------------------------------
// loaded form
// ---------------------------------------------------------------------------

/// How the scenario treats the sign constant `eps`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EpsilonChoice {
    /// `eps` does not appear; one record, no substitution.
    Unused,
    /// One record with `eps` replaced by the given sign.
    Fixed(i64),
    /// Two records, one per sign.
    Both,
}

/// A parsed scenario, ready to instantiate into solution records.
#[derive(Debug)]
pub struct Scenario {
    pub name: String,
    pub system: SystemKind,
    pub epsilon: EpsilonChoice,
    pub notes: Vec<String>,
    /// Symbol context everything was parsed in (deps installed).
    pub context: ParserContext,
    pub bindings: BTreeMap<String, GradedExpr>,
    pub rules: Vec<Rule>,
    deps: BTreeMap<String, BTreeMap<String, GradedExpr>>,
    pub expect: ExpectSpec,
}

/// Replaces every even-constant atom named `name` by `value`.
pub fn subst_const(
    e: &GradedExpr,
    name: &str,
    value: &GradedExpr,
) -> Result<GradedExpr, EngineError> {
    map_atoms(e, &|a: &Atom| match a {
        Atom::EvenConst(c) if c.name == name => Some(value.clone()),
        Atom::OddConst(c) if c.name == name => Some(value.clone()),
        _ => None,
    })
}

fn valid_symbol_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '+' | '-' | '\''))
}

const RESERVED: &[&str] = &[
    "exp", "log", "i", "eps", "dp2", "dm2", "d+", "d-", "dx+", "dx-", "dth+", "dth-", "D+", "D-",
    "J+", "J-", "dz", "dzb", "x+", "x-", "th+", "th-", "z", "zb",
];

fn parse_in<'a>(
    ctx: &ParserContext,
    text: &str,
    context: impl Fn() -> String + 'a,
) -> Result<GradedExpr, ScenarioError> {
    parse(ctx, text).map_err(|source| ScenarioError::Parse {
        context: context(),
        source,
    })
}

/// Extracts the single atom of a bare symbol expression (`xi`, `~C0+`).
fn single_atom(e: &GradedExpr, what: &str, index: usize) -> Result<Atom, ScenarioError> {
    let bad = |msg: &str| ScenarioError::BadRule {
        index,
        msg: format!("{what} must be a single symbol, {msg}"),
    };
    let ms = e.terms();
    if ms.len() != 1 {
        return Err(bad("got a sum"));
    }
    let m = &ms[0];
    if !m.coeff.is_one() {
        return Err(bad("got a scaled term"));
    }
    match (m.bos.len(), m.odd.len()) {
        (1, 0) if m.bos[0].1 == 1 => Ok(m.bos[0].0.clone()),
        (0, 1) => Ok(m.odd[0].clone()),
        _ => Err(bad("got a product")),
    }
}

impl Scenario {
    /// Parses a scenario from TOML text.
    pub fn from_toml(text: &str) -> Result<Scenario, ScenarioError> {
        let raw: ScenarioFile = toml::from_str(text)?;
        let system = SystemKind::from_name(&raw.scenario.system)
            .ok_or_else(|| ScenarioError::UnknownSystem(raw.scenario.system.clone()))?;
        let epsilon = match raw.scenario.epsilon.as_deref() {
            None => EpsilonChoice::Unused,
            Some("+1") | Some("1") => EpsilonChoice::Fixed(1),
            Some("-1") => EpsilonChoice::Fixed(-1),
            Some("both") => EpsilonChoice::Both,
            Some(other) => return Err(ScenarioError::BadEpsilon(other.to_string())),
        };

        let mut ctx = match system {
            SystemKind::Classical => ParserContext::classical(),
            _ => ParserContext::standard(),
        };

        for (name, spec) in &raw.symbols {
            if !valid_symbol_name(name) {
                return Err(ScenarioError::BadSymbol {
                    name: name.clone(),
                    msg: "name must start with a letter and use only letters, digits, _, +, -, '"
                        .to_string(),
                });
            }
            if RESERVED.contains(&name.as_str()) {
                return Err(ScenarioError::BadSymbol {
                    name: name.clone(),
                    msg: "name is reserved".to_string(),
                });
            }
            let args: Vec<&str> = spec.args.iter().map(|s| s.as_str()).collect();
            match spec.kind.as_str() {
                "dep-var" => ctx.table.declare_dep_var(name),
                "even-const" => {
                    ctx.table
                        .declare_even_const(name, spec.bodiless, spec.nilpotent)
                }
                "odd-const" => ctx.table.declare_odd_const(name),
                "even-fn" => {
                    ctx.table
                        .declare_even_fn(name, &args, spec.bodiless, spec.nilpotent)
                }
                "odd-fn" => ctx.table.declare_odd_fn(name, &args),
                other => {
                    return Err(ScenarioError::BadSymbol {
                        name: name.clone(),
                        msg: format!("unknown kind `{other}`"),
                    })
                }
            }
        }

        let mut deps: BTreeMap<String, BTreeMap<String, GradedExpr>> = BTreeMap::new();
        for (dep, partials) in &raw.deps {
            let mut row = BTreeMap::new();
            for (coord, src) in partials {
                let value = parse_in(&ctx, src, || format!("dep `{dep}`/`{coord}`"))?;
                row.insert(coord.clone(), value);
            }
            deps.insert(dep.clone(), row);
        }
        install_deps(&mut ctx, &deps);

        let mut param_subs: Vec<(String, GradedExpr)> = Vec::new();
        for (name, src) in &raw.param_subs {
            let value = parse_in(&ctx, src, || format!("param-sub `{name}`"))?;
            param_subs.push((name.clone(), value));
        }
        let pin = |e: &GradedExpr| -> Result<GradedExpr, ScenarioError> {
            let mut out = e.clone();
            for (name, value) in &param_subs {
                out = subst_const(&out, name, value)?;
            }
            Ok(out)
        };

        let mut bindings = BTreeMap::new();
        for (key, src) in &raw.bindings {
            let value = parse_in(&ctx, src, || format!("binding `{key}`"))?;
            bindings.insert(key.clone(), pin(&value)?);
        }

        let mut rules = Vec::new();
        for (index, spec) in raw.rules.iter().enumerate() {
            let rule = match spec {
                RuleSpec::FnDeriv { name, deriv, rhs } => Rule::FnDeriv {
                    name: name.clone(),
                    deriv: deriv.clone(),
                    rhs: pin(&parse_in(&ctx, rhs, || format!("rule {index} rhs"))?)?,
                },
                RuleSpec::Pair { a, b, rhs } => Rule::PairProduct {
                    a: single_atom(
                        &parse_in(&ctx, a, || format!("rule {index} `a`"))?,
                        "`a`",
                        index,
                    )?,
                    b: single_atom(
                        &parse_in(&ctx, b, || format!("rule {index} `b`"))?,
                        "`b`",
                        index,
                    )?,
                    rhs: pin(&parse_in(&ctx, rhs, || format!("rule {index} rhs"))?)?,
                },
                RuleSpec::ExpUnfold {
                    target,
                    replacement,
                } => Rule::ExpUnfold {
                    target: single_atom(
                        &parse_in(&ctx, target, || format!("rule {index} target"))?,
                        "target",
                        index,
                    )?,
                    replacement: pin(&parse_in(&ctx, replacement, || {
                        format!("rule {index} replacement")
                    })?)?,
                },
            };
            rules.push(rule);
        }

        let mut pinned_deps = BTreeMap::new();
        for (dep, row) in &deps {
            let mut out = BTreeMap::new();
            for (coord, value) in row {
                out.insert(coord.clone(), pin(value)?);
            }
            pinned_deps.insert(dep.clone(), out);
        }
        install_deps(&mut ctx, &pinned_deps);

        Ok(Scenario {
            name: raw.scenario.name,
            system,
            epsilon,
            notes: raw.scenario.notes,
            context: ctx,
            bindings,
            rules,
            deps: pinned_deps,
            expect: raw.expect,
        })
    }

    /// The concrete epsilon signs this scenario runs with.
    pub fn signs(&self) -> Vec<Option<i64>> {
        match self.epsilon {
            EpsilonChoice::Unused => vec![None],
            EpsilonChoice::Fixed(s) => vec![Some(s)],
            EpsilonChoice::Both => vec![Some(1), Some(-1)],
        }
    }

    /// One solution record per concrete epsilon.
    pub fn records(&self) -> Result<Vec<SolutionRecord>, ScenarioError> {
        self.signs().into_iter().map(|s| self.record(s)).collect()
    }

    /// A single record with `eps` pinned to `sign` (if given).
    pub fn record(&self, sign: Option<i64>) -> Result<SolutionRecord, ScenarioError> {
        let subst = |e: &GradedExpr| -> Result<GradedExpr, EngineError> {
            match sign {
                Some(v) => subst_const(e, "eps", &GradedExpr::int(v)),
                None => Ok(e.clone()),
            }
        };
        let mut bindings = BTreeMap::new();
        for (k, v) in &self.bindings {
            bindings.insert(k.clone(), subst(v)?);
        }
        let mut rules = Vec::new();
        for rule in &self.rules {
            rules.push(match rule {
                Rule::FnDeriv { name, deriv, rhs } => Rule::FnDeriv {
                    name: name.clone(),
                    deriv: deriv.clone(),
                    rhs: subst(rhs)?,
                },
                Rule::PairProduct { a, b, rhs } => Rule::PairProduct {
                    a: a.clone(),
                    b: b.clone(),
                    rhs: subst(rhs)?,
                },
                Rule::ExpUnfold {
                    target,
                    replacement,
                } => Rule::ExpUnfold {
                    target: target.clone(),
                    replacement: subst(replacement)?,
                },
            });
        }
        let rules = RuleSet::new(rules)?;

        let mut table = DepTable::empty();
        for (dep, row) in &self.deps {
            for (coord, value) in row {
                table.insert(dep, coord, subst(value)?);
            }
        }
        let chart = match self.system {
            SystemKind::Classical => ParseChart::Classical(ClassicalChart::with_deps(table)),
            _ => ParseChart::Graded(Chart::with_deps(table)),
        };

        Ok(SolutionRecord {
            name: self.name.clone(),
            system: self.system,
            chart,
            bindings,
            rules,
            epsilon: sign,
            notes: self.notes.clone(),
        })
    }

    /// Expected values parsed in the scenario context, with `eps` pinned
    /// to `sign` when given.
    pub fn expected_values(
        &self,
        sign: Option<i64>,
    ) -> Result<BTreeMap<String, GradedExpr>, ScenarioError> {
        let mut out = BTreeMap::new();
        for (key, src) in &self.expect.values {
            let e = parse_in(&self.context, src, || format!("expected value `{key}`"))?;
            let e = match sign {
                Some(v) => subst_const(&e, "eps", &GradedExpr::int(v))?,
                None => e,
            };
            out.insert(key.clone(), e);
        }
        Ok(out)
    }
}

/// One compared expectation value.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ValueCheck {
    pub key: String,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

/// Verification plus expectation checks for one record.
#[derive(Clone, Debug, serde::Serialize)]
pub struct CaseRun {
    pub report: crate::verify::CaseReport,
    pub values: Vec<ValueCheck>,
    /// Declared expected verdict, when the scenario states one.
    pub expected_pass: Option<bool>,
    /// True when the verdict and every compared value match the declaration.
    pub ok: bool,
}

/// The full run of a scenario across its epsilon choices.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ScenarioRun {
    pub scenario: String,
    pub cases: Vec<CaseRun>,
    pub ok: bool,
}

const CURVATURE_KEYS: &[&str] = &[
    "gaussian",
    "mean",
    "umbilic",
    "metric-discriminant",
    "shape-discriminant",
];

impl Scenario {
    /// Verifies every record and compares all declared expectations.
    pub fn run(&self) -> Result<ScenarioRun, ScenarioError> {
        self.run_signs(&self.signs())
    }

    /// Like `run`, but over an explicit list of epsilon signs (overriding
    /// the scenario's own choice).
    pub fn run_signs(&self, signs: &[Option<i64>]) -> Result<ScenarioRun, ScenarioError> {
        let mut cases = Vec::new();
        for sign in signs {
            let record = self.record(*sign)?;
            let report = record.verify().map_err(verify_err)?;
            let expected = self.expected_values(record.epsilon)?;
            let mut values = Vec::new();
            if !expected.is_empty() {
                let needs_curvature = expected
                    .keys()
                    .any(|k| CURVATURE_KEYS.contains(&k.as_str()));
                let curvature = if needs_curvature {
                    Some(record.curvatures().map_err(verify_err)?)
                } else {
                    None
                };
                let outcomes = record.reduced_residuals().map_err(verify_err)?;
                for (key, want) in expected {
                    let actual = if CURVATURE_KEYS.contains(&key.as_str()) {
                        let cr = curvature.as_ref().expect("curvature computed");
                        match key.as_str() {
                            "gaussian" => Some(cr.gaussian.clone()),
                            "mean" => Some(cr.mean.clone()),
                            "umbilic" => Some(cr.umbilic.clone()),
                            "metric-discriminant" => cr.metric_discriminant.clone(),
                            _ => cr.shape_discriminant.clone(),
                        }
                    } else {
                        outcomes
                            .iter()
                            .find(|o| o.name == key)
                            .map(|o| o.reduced.clone())
                    };
                    let actual = match actual {
                        Some(e) => e,
                        None => {
                            return Err(ScenarioError::BadExpectation {
                                key,
                                msg: "names neither a residual nor a curvature entry".to_string(),
                            })
                        }
                    };
                    let want_reduced = self.rules_of(&record).reduce(&want)?;
                    let actual_reduced = self.rules_of(&record).reduce(&actual)?;
                    values.push(ValueCheck {
                        key,
                        expected: want_reduced.display(),
                        actual: actual_reduced.display(),
                        ok: want_reduced == actual_reduced,
                    });
                }
            }
            let pass_ok = self.expect.pass.map_or(true, |want| want == report.pass);
            let ok = pass_ok && values.iter().all(|v| v.ok);
            cases.push(CaseRun {
                report,
                values,
                expected_pass: self.expect.pass,
                ok,
            });
        }
        let ok = cases.iter().all(|c| c.ok);
        Ok(ScenarioRun {
            scenario: self.name.clone(),
            cases,
            ok,
        })
    }

    fn rules_of<'a>(&self, record: &'a SolutionRecord) -> &'a RuleSet {
        &record.rules
    }
}

fn verify_err(e: crate::verify::VerifyError) -> ScenarioError {
    match e {
        crate::verify::VerifyError::Engine(err) => ScenarioError::Engine(err),
        crate::verify::VerifyError::Rule(err) => ScenarioError::Rule(err),
        other => ScenarioError::Verify(other.to_string()),
    }
}

fn install_deps(ctx: &mut ParserContext, deps: &BTreeMap<String, BTreeMap<String, GradedExpr>>) {
    let mut table = DepTable::empty();
    for (dep, row) in deps {
        for (coord, value) in row {
            table.insert(dep, coord, value.clone());
        }
    }
    ctx.chart = match &ctx.chart {
        ParseChart::Classical(_) => ParseChart::Classical(ClassicalChart::with_deps(table)),
        ParseChart::Graded(_) => ParseChart::Graded(Chart::with_deps(table)),
    };
}

#[cfg(test)]
mod tests {
    use super::*;

    const FLAT: &str = r#"
[scenario]
name = "flat"
system = "bosonic"

[bindings]
phi = "0"
H = "0"
"Q+" = "0"
"Q-" = "0"
"R+" = "0"
"R-" = "0"
"S+" = "0"
"S-" = "0"
"T+" = "0"
"T-" = "0"
f = "1"

[expect]
pass = true
"#;

    #[test]
    fn flat_scenario_loads_and_passes() {
        let sc = Scenario::from_toml(FLAT).unwrap();
        assert_eq!(sc.system, SystemKind::Bosonic);
        assert_eq!(sc.epsilon, EpsilonChoice::Unused);
        let records = sc.records().unwrap();
        assert_eq!(records.len(), 1);
        let report = records[0].verify().unwrap();
        assert!(report.pass);
        assert_eq!(sc.expect.pass, Some(true));
    }

    #[test]
    fn epsilon_both_yields_two_records() {
        let text = r#"
[scenario]
name = "signs"
system = "classical"
epsilon = "both"

[bindings]
u = "0"
H = "eps"
Q = "0"
Qb = "0"
"#;
        let sc = Scenario::from_toml(text).unwrap();
        let records = sc.records().unwrap();
        assert_eq!(records.len(), 2);
        assert_eq!(records[0].epsilon, Some(1));
        assert_eq!(records[1].epsilon, Some(-1));
        assert_eq!(records[0].bindings["H"].display(), "1");
        assert_eq!(records[1].bindings["H"].display(), "-1");
    }

    #[test]
    fn symbols_deps_and_rules_round_trip() {
        let text = r#"
[scenario]
name = "ode"
system = "classical"

[symbols]
a = { kind = "even-const" }
v = { kind = "even-fn", args = ["xi"] }
xi = { kind = "dep-var" }

[deps]
xi = { z = "1", zb = "1" }

[bindings]
u = "v(xi)"
H = "0"
Q = "a"
Qb = "a"

[[rules]]
kind = "fn-deriv"
name = "v"
deriv = [2]
rhs = "2*a^2*exp(-v(xi))"
"#;
        let sc = Scenario::from_toml(text).unwrap();
        let record = sc.record(None).unwrap();
        let outcomes = record.reduced_residuals().unwrap();
        let gauss = outcomes.iter().find(|o| o.name == "gauss").unwrap();
        assert!(!gauss.raw.is_zero());
        assert!(gauss.reduced.is_zero(), "reduced: {}", gauss.reduced.display());
        assert!(outcomes.iter().all(|o| o.reduced.is_zero()));
    }

    #[test]
    fn param_subs_pin_constants() {
        let text = r#"
[scenario]
name = "pinned"
system = "classical"

[symbols]
k = { kind = "even-const" }

[bindings]
u = "0"
H = "k"
Q = "0"
Qb = "0"

[param-subs]
k = "3"
"#;
        let sc = Scenario::from_toml(text).unwrap();
        let record = sc.record(None).unwrap();
        assert_eq!(record.bindings["H"].display(), "3");
    }

    #[test]
    fn reserved_symbol_rejected() {
        let text = r#"
[scenario]
name = "bad"
system = "bosonic"

[symbols]
"D+" = { kind = "even-const" }
"#;
        assert!(matches!(
            Scenario::from_toml(text),
            Err(ScenarioError::BadSymbol { .. })
        ));
    }

    #[test]
    fn expected_values_parse_with_sign() {
        let text = r#"
[scenario]
name = "exp"
system = "classical"
epsilon = "+1"

[bindings]
u = "0"
H = "0"
Q = "0"
Qb = "0"

[expect]
pass = true

[expect.values]
gaussian = "2*eps"
"#;
        let sc = Scenario::from_toml(text).unwrap();
        let vals = sc.expected_values(Some(1)).unwrap();
        assert_eq!(vals["gaussian"].display(), "2");
    }
}
