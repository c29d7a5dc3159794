//! Constraint-aware verification of solution records: bindings are
//! substituted into the residual templates of the chosen system, the
//! residuals are reduced modulo the record's oriented rewrite rules, and
//! the outcome is reported per equation with canonical forms.

use crate::expr::{EngineError, GradedExpr, ParityClass};
use crate::gcsys::{
    bosonic_df_residuals, bosonic_gc, classical_gc, constant_f_gc, fermionic_df_residuals,
    fermionic_gc, ClassicalChart, ClassicalFields, Residual,
};
use crate::gw::SurfaceFields;
use crate::parser::ParseChart;
use crate::rules::{RuleError, RuleSet};
use crate::superfield::Chart;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

/// Which Gauss-Codazzi system a record solves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SystemKind {
    #[serde(rename = "classical")]
    Classical,
    #[serde(rename = "bosonic")]
    Bosonic,
    #[serde(rename = "fermionic")]
    Fermionic,
    #[serde(rename = "fermionic-constant-f")]
    FermionicConstantF,
}

impl SystemKind {
    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "classical" => Some(SystemKind::Classical),
            "bosonic" => Some(SystemKind::Bosonic),
            "fermionic" => Some(SystemKind::Fermionic),
            "fermionic-constant-f" => Some(SystemKind::FermionicConstantF),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SystemKind::Classical => "classical",
            SystemKind::Bosonic => "bosonic",
            SystemKind::Fermionic => "fermionic",
            SystemKind::FermionicConstantF => "fermionic-constant-f",
        }
    }

    pub fn equation_count(&self) -> usize {
        match self {
            SystemKind::Classical => 3,
            SystemKind::Bosonic => 6,
            SystemKind::Fermionic => 4,
            SystemKind::FermionicConstantF => 3,
        }
    }
}

/// A solution record ready to verify: one concrete epsilon, parsed
/// bindings, and a validated rule set.
#[derive(Clone, Debug)]
pub struct SolutionRecord {
    pub name: String,
    pub system: SystemKind,
    pub chart: ParseChart,
    pub bindings: BTreeMap<String, GradedExpr>,
    pub rules: RuleSet,
    /// Concrete sign this run uses, when the system distinguishes one.
    pub epsilon: Option<i64>,
    pub notes: Vec<String>,
}

/// Verification failure.
#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("record `{record}` is missing a binding for `{field}`")]
    MissingBinding { record: String, field: String },
    #[error("record `{record}` binds `{field}` with parity {got:?}, expected {expected:?}")]
    BindingParity {
        record: String,
        field: String,
        expected: ParityClass,
        got: ParityClass,
    },
    #[error("record `{record}` uses a {got} chart but the {system} system needs {expected}")]
    ChartMismatch {
        record: String,
        system: String,
        expected: &'static str,
        got: &'static str,
    },
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Rule(#[from] RuleError),
}

/// One verified residual.
#[derive(Clone, Debug)]
pub struct ResidualOutcome {
    pub name: String,
    pub raw: GradedExpr,
    pub reduced: GradedExpr,
}

impl ResidualOutcome {
    pub fn zero(&self) -> bool {
        self.reduced.is_zero()
    }
}

/// JSON-facing residual row.
#[derive(Clone, Debug, Serialize)]
pub struct ResidualRow {
    pub name: String,
    pub raw: String,
    pub reduced: String,
    pub zero: bool,
}

/// JSON verification report for one record and one epsilon.
#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub case: String,
    pub system: &'static str,
    pub epsilon: Option<i64>,
    pub residuals: Vec<ResidualRow>,
    pub pass: bool,
}

impl CaseReport {
    fn from_outcomes(record: &SolutionRecord, outcomes: &[ResidualOutcome]) -> CaseReport {
        CaseReport {
            case: record.name.clone(),
            system: record.system.name(),
            epsilon: record.epsilon,
            residuals: outcomes
                .iter()
                .map(|o| ResidualRow {
                    name: o.name.clone(),
                    raw: o.raw.display(),
                    reduced: o.reduced.display(),
                    zero: o.zero(),
                })
                .collect(),
            pass: outcomes.iter().all(|o| o.zero()),
        }
    }
}

impl SolutionRecord {
    fn binding(&self, field: &str) -> Result<GradedExpr, VerifyError> {
        self.bindings
            .get(field)
            .cloned()
            .ok_or_else(|| VerifyError::MissingBinding {
                record: self.name.clone(),
                field: field.to_string(),
            })
    }

    fn binding_or(&self, field: &str, default: GradedExpr) -> GradedExpr {
        self.bindings.get(field).cloned().unwrap_or(default)
    }

    fn graded_chart(&self) -> Result<&Chart, VerifyError> {
        match &self.chart {
            ParseChart::Graded(ch) => Ok(ch),
            ParseChart::Classical(_) => Err(VerifyError::ChartMismatch {
                record: self.name.clone(),
                system: self.system.name().to_string(),
                expected: "graded coordinates",
                got: "classical",
            }),
        }
    }

    fn classical_chart(&self) -> Result<&ClassicalChart, VerifyError> {
        match &self.chart {
            ParseChart::Classical(ch) => Ok(ch),
            ParseChart::Graded(_) => Err(VerifyError::ChartMismatch {
                record: self.name.clone(),
                system: self.system.name().to_string(),
                expected: "classical coordinates",
                got: "graded",
            }),
        }
    }

    fn check_parity(&self, field: &str, e: &GradedExpr, expected: ParityClass) -> Result<(), VerifyError> {
        let got = e.parity();
        let ok = matches!(got, ParityClass::Zero) || got == expected;
        if ok {
            Ok(())
        } else {
            Err(VerifyError::BindingParity {
                record: self.name.clone(),
                field: field.to_string(),
                expected,
                got,
            })
        }
    }

    /// Builds graded surface fields from the bindings. `phi` or `e_phi`
    /// fixes the conformal factor; triangular fields default to zero and
    /// `f` to one.
    pub fn surface_fields(&self) -> Result<SurfaceFields, VerifyError> {
        let chart = self.graded_chart()?;
        let mut fl = SurfaceFields::unit();
        if let Some(phi) = self.bindings.get("phi") {
            fl.set_phi(chart, phi)?;
        } else if let Some(e_phi) = self.bindings.get("e_phi") {
            fl.set_e_phi(chart, e_phi)?;
        } else {
            return Err(VerifyError::MissingBinding {
                record: self.name.clone(),
                field: "phi".to_string(),
            });
        }
        fl.h = self.binding("H")?;
        fl.q_plus = self.binding("Q+")?;
        fl.q_minus = self.binding("Q-")?;
        fl.f = self.binding_or("f", GradedExpr::one());
        let zero = GradedExpr::zero();
        match self.system {
            SystemKind::Bosonic => {
                fl.r_plus = self.binding("R+")?;
                fl.r_minus = self.binding("R-")?;
                fl.s_plus = self.binding("S+")?;
                fl.s_minus = self.binding("S-")?;
                fl.t_plus = self.binding("T+")?;
                fl.t_minus = self.binding("T-")?;
                for (name, e) in [
                    ("phi-parity", &fl.e_phi),
                    ("H", &fl.h),
                    ("Q+", &fl.q_plus),
                    ("Q-", &fl.q_minus),
                    ("f", &fl.f),
                ] {
                    self.check_parity(name, e, ParityClass::Even)?;
                }
                for (name, e) in [
                    ("R+", &fl.r_plus),
                    ("R-", &fl.r_minus),
                    ("S+", &fl.s_plus),
                    ("S-", &fl.s_minus),
                    ("T+", &fl.t_plus),
                    ("T-", &fl.t_minus),
                ] {
                    self.check_parity(name, e, ParityClass::Odd)?;
                }
            }
            SystemKind::Fermionic => {
                fl.r_plus = self.binding("R+")?;
                fl.t_minus = self.binding("T-")?;
                fl.r_minus = zero.clone();
                fl.s_plus = zero.clone();
                fl.s_minus = zero.clone();
                fl.t_plus = zero;
                for (name, e) in [("phi-parity", &fl.e_phi), ("f", &fl.f)] {
                    self.check_parity(name, e, ParityClass::Even)?;
                }
                for (name, e) in [
                    ("H", &fl.h),
                    ("Q+", &fl.q_plus),
                    ("Q-", &fl.q_minus),
                    ("R+", &fl.r_plus),
                    ("T-", &fl.t_minus),
                ] {
                    self.check_parity(name, e, ParityClass::Odd)?;
                }
            }
            SystemKind::FermionicConstantF => {
                fl.r_plus = fl.d_plus_phi.clone();
                fl.t_minus = fl.d_minus_phi.clone();
                self.check_parity("phi-parity", &fl.e_phi, ParityClass::Even)?;
                self.check_parity("f", &fl.f, ParityClass::Even)?;
                for (name, e) in [("H", &fl.h), ("Q+", &fl.q_plus), ("Q-", &fl.q_minus)] {
                    self.check_parity(name, e, ParityClass::Odd)?;
                }
            }
            SystemKind::Classical => {
                return Err(VerifyError::ChartMismatch {
                    record: self.name.clone(),
                    system: "classical".to_string(),
                    expected: "classical fields",
                    got: "graded",
                })
            }
        }
        Ok(fl)
    }

    /// Builds classical fields from the bindings (`u` or `e_u`, `H`, `Q`,
    /// `Qb`).
    pub fn classical_fields(&self) -> Result<ClassicalFields, VerifyError> {
        self.classical_chart()?;
        let mut fl = ClassicalFields::flat();
        if let Some(u) = self.bindings.get("u") {
            fl.set_u(u)?;
        } else {
            return Err(VerifyError::MissingBinding {
                record: self.name.clone(),
                field: "u".to_string(),
            });
        }
        fl.h = self.binding("H")?;
        fl.q = self.binding("Q")?;
        fl.qb = self.binding("Qb")?;
        for (name, e) in [("u", &fl.u), ("H", &fl.h), ("Q", &fl.q), ("Qb", &fl.qb)] {
            self.check_parity(name, e, ParityClass::Even)?;
        }
        Ok(fl)
    }

    /// Raw residuals of the record's system with bindings substituted.
    pub fn residuals(&self) -> Result<Vec<Residual>, VerifyError> {
        match self.system {
            SystemKind::Classical => {
                let fl = self.classical_fields()?;
                Ok(classical_gc(self.classical_chart()?, &fl))
            }
            SystemKind::Bosonic => {
                let fl = self.surface_fields()?;
                Ok(bosonic_gc(self.graded_chart()?, &fl))
            }
            SystemKind::Fermionic => {
                let fl = self.surface_fields()?;
                Ok(fermionic_gc(self.graded_chart()?, &fl))
            }
            SystemKind::FermionicConstantF => {
                let fl = self.surface_fields()?;
                Ok(constant_f_gc(self.graded_chart()?, &fl))
            }
        }
    }

    /// Residuals reduced modulo the record's rules.
    pub fn reduced_residuals(&self) -> Result<Vec<ResidualOutcome>, VerifyError> {
        let mut out = Vec::new();
        for (name, raw) in self.residuals()? {
            let reduced = self.rules.reduce(&raw)?;
            out.push(ResidualOutcome { name, raw, reduced });
        }
        Ok(out)
    }

    /// Full verification: residuals, reduction, report.
    pub fn verify(&self) -> Result<CaseReport, VerifyError> {
        let outcomes = self.reduced_residuals()?;
        Ok(CaseReport::from_outcomes(self, &outcomes))
    }

    /// Fundamental forms of the bound surface data.
    pub fn forms(&self) -> Result<crate::geometry::FundamentalForms, VerifyError> {
        match self.system {
            SystemKind::Classical => Ok(crate::geometry::classical_forms(&self.classical_fields()?)),
            _ => Ok(crate::geometry::graded_forms(&self.surface_fields()?)),
        }
    }

    /// Curvature data of the bound surface data.
    pub fn curvatures(&self) -> Result<crate::geometry::CurvatureReport, VerifyError> {
        match self.system {
            SystemKind::Classical => {
                Ok(crate::geometry::classical_curvatures(&self.classical_fields()?))
            }
            _ => Ok(crate::geometry::graded_curvatures(&self.surface_fields()?)),
        }
    }

    /// The two normalization-derivative residuals and their bracket
    /// compatibility, reduced modulo the record's rules.
    pub fn df_compatibility(&self) -> Result<Vec<ResidualOutcome>, VerifyError> {
        let chart = self.graded_chart()?;
        let fl = self.surface_fields()?;
        let raw = match self.system {
            SystemKind::Bosonic => bosonic_df_residuals(chart, &fl),
            _ => fermionic_df_residuals(chart, &fl),
        };
        let mut out = Vec::new();
        for (name, raw) in raw {
            let reduced = self.rules.reduce(&raw)?;
            out.push(ResidualOutcome { name, raw, reduced });
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse, ParserContext};

    fn zero_record(system: SystemKind) -> SolutionRecord {
        let ctx = ParserContext::standard();
        let mut bindings = BTreeMap::new();
        for f in ["phi", "H", "Q+", "Q-", "R+", "R-", "S+", "S-", "T+", "T-"] {
            bindings.insert(f.to_string(), GradedExpr::zero());
        }
        bindings.insert("phi".to_string(), GradedExpr::zero());
        bindings.insert("f".to_string(), GradedExpr::one());
        SolutionRecord {
            name: "zero".to_string(),
            system,
            chart: ctx.chart,
            bindings,
            rules: RuleSet::empty(),
            epsilon: None,
            notes: vec![],
        }
    }

    #[test]
    fn zero_solutions_pass_all_graded_variants() {
        for system in [
            SystemKind::Bosonic,
            SystemKind::Fermionic,
            SystemKind::FermionicConstantF,
        ] {
            let rec = zero_record(system);
            let report = rec.verify().unwrap();
            assert!(report.pass, "{system:?} zero record failed: {report:?}");
            assert_eq!(report.residuals.len(), system.equation_count());
        }
    }

    #[test]
    fn classical_zero_solution_passes() {
        let ctx = ParserContext::classical();
        let mut bindings = BTreeMap::new();
        bindings.insert("u".to_string(), GradedExpr::zero());
        bindings.insert("H".to_string(), GradedExpr::zero());
        bindings.insert("Q".to_string(), GradedExpr::zero());
        bindings.insert("Qb".to_string(), GradedExpr::zero());
        let rec = SolutionRecord {
            name: "flat".to_string(),
            system: SystemKind::Classical,
            chart: ctx.chart,
            bindings,
            rules: RuleSet::empty(),
            epsilon: None,
            notes: vec![],
        };
        let report = rec.verify().unwrap();
        assert!(report.pass);
        assert_eq!(report.residuals.len(), 3);
    }

    #[test]
    fn missing_binding_is_reported() {
        let mut rec = zero_record(SystemKind::Bosonic);
        rec.bindings.remove("Q+");
        assert!(matches!(
            rec.verify(),
            Err(VerifyError::MissingBinding { field, .. }) if field == "Q+"
        ));
    }

    #[test]
    fn parity_violation_is_reported() {
        let ctx = ParserContext::standard();
        let mut rec = zero_record(SystemKind::Bosonic);
        rec.bindings
            .insert("H".to_string(), parse(&ctx, "th+").unwrap());
        assert!(matches!(
            rec.verify(),
            Err(VerifyError::BindingParity { field, .. }) if field == "H"
        ));
    }

    #[test]
    fn sine_gordon_style_nonzero_curvature_fails_honestly() {
        let ctx = ParserContext::standard();
        let mut rec = zero_record(SystemKind::Bosonic);
        rec.bindings
            .insert("H".to_string(), parse(&ctx, "2").unwrap());
        let report = rec.verify().unwrap();
        assert!(!report.pass);
        let gauss = report.residuals.iter().find(|r| r.name == "ii").unwrap();
        assert_eq!(gauss.reduced, "2");
    }
}
