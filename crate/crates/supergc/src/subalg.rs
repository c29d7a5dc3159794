//! Classifications of one-dimensional subalgebras into conjugacy classes,
//! shipped as reviewed data. Each record names a representative element as
//! a list of parameter-weighted basis terms plus the side conditions on the
//! parameters. The validator rebuilds every element over the algebra's
//! structure constants and checks parity consistency (odd basis directions
//! carry odd parameters) and closure (the element brackets to zero with
//! itself).

use crate::adjoint::{AdjointError, AlgebraModel, Element};
use crate::expr::{Atom, GradedExpr, ParityClass};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Parity of a term's coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TermParity {
    Even,
    Odd,
}

/// One parameter-weighted basis term of a representative element.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubalgebraTerm {
    pub basis: String,
    /// Parameter name, or `None` for a unit coefficient.
    pub parameter: Option<String>,
    pub parity: TermParity,
}

/// One classified subalgebra: a representative element and the conditions
/// its parameters satisfy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubalgebraEntry {
    pub id: String,
    pub terms: Vec<SubalgebraTerm>,
    pub conditions: Vec<String>,
}

/// A full classification list.
#[derive(Clone, Debug, PartialEq)]
pub struct SubalgebraList {
    pub entries: Vec<SubalgebraEntry>,
}

/// Classification-data failure.
#[derive(Debug, Error)]
pub enum SubalgError {
    #[error("line {line}: {source}")]
    Parse {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
}

impl SubalgebraEntry {
    /// Renders the representative, e.g. `K0 + m C0 + eps1 P+`.
    pub fn display(&self) -> String {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| match &t.parameter {
                Some(p) => format!("{p} {}", t.basis),
                None => t.basis.clone(),
            })
            .collect();
        parts.join(" + ")
    }

    /// Rebuilds the representative as a coefficient vector over the model's
    /// basis, with each parameter a fresh named constant of its parity.
    pub fn element(&self, model: &AlgebraModel) -> Result<Element, AdjointError> {
        let mut parts = Vec::new();
        for t in &self.terms {
            let coeff = match (&t.parameter, t.parity) {
                (None, _) => GradedExpr::one(),
                (Some(p), TermParity::Even) => GradedExpr::atom(Atom::even_const(p)),
                (Some(p), TermParity::Odd) => GradedExpr::atom(Atom::odd_const(p)),
            };
            parts.push((t.basis.as_str(), coeff));
        }
        model.element(&parts)
    }
}

impl SubalgebraList {
    /// Parses one JSON record per non-empty line.
    pub fn from_jsonl(text: &str) -> Result<Self, SubalgError> {
        let mut entries = Vec::new();
        for (k, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let entry: SubalgebraEntry =
                serde_json::from_str(line).map_err(|source| SubalgError::Parse {
                    line: k + 1,
                    source,
                })?;
            entries.push(entry);
        }
        Ok(SubalgebraList { entries })
    }

    /// Serializes back to one compact JSON record per line.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&serde_json::to_string(e).expect("entries serialize"));
            out.push('\n');
        }
        out
    }

    pub fn entry(&self, id: &str) -> Option<&SubalgebraEntry> {
        self.entries.iter().find(|e| e.id == id)
    }
}

/// One defect found while validating a classification list.
#[derive(Clone, Debug, Serialize)]
pub struct ValidationIssue {
    pub id: String,
    pub detail: String,
}

/// Validates every entry of a list against an algebra model: unique ids,
/// known basis names, coefficient parity matching basis parity, parameters
/// covered by conditions, and the representative bracketing to zero with
/// itself.
pub fn validate(list: &SubalgebraList, model: &AlgebraModel) -> Vec<ValidationIssue> {
    let mut issues = Vec::new();
    let mut push = |id: &str, detail: String| {
        issues.push(ValidationIssue {
            id: id.to_string(),
            detail,
        })
    };
    let mut seen_ids = std::collections::BTreeSet::new();
    for entry in &list.entries {
        if !seen_ids.insert(entry.id.clone()) {
            push(&entry.id, "duplicate id".to_string());
        }
        if entry.terms.is_empty() {
            push(&entry.id, "no terms".to_string());
            continue;
        }
        let mut seen_bases = std::collections::BTreeSet::new();
        let mut param_parity = std::collections::BTreeMap::new();
        let mut structural_defect = false;
        for t in &entry.terms {
            let idx = match model.index_of(&t.basis) {
                Ok(i) => i,
                Err(_) => {
                    push(&entry.id, format!("unknown basis `{}`", t.basis));
                    structural_defect = true;
                    continue;
                }
            };
            if !seen_bases.insert(t.basis.clone()) {
                push(&entry.id, format!("basis `{}` repeated", t.basis));
            }
            let basis_parity = if model.odd[idx] {
                TermParity::Odd
            } else {
                TermParity::Even
            };
            if t.parity != basis_parity {
                push(
                    &entry.id,
                    format!(
                        "term `{}` has {:?} coefficient on a {:?} direction",
                        t.basis, t.parity, basis_parity
                    ),
                );
                structural_defect = true;
            }
            if t.parameter.is_none() && model.odd[idx] {
                push(
                    &entry.id,
                    format!("odd direction `{}` needs an odd parameter", t.basis),
                );
                structural_defect = true;
            }
            if let Some(p) = &t.parameter {
                if let Some(prev) = param_parity.insert(p.clone(), t.parity) {
                    if prev != t.parity {
                        push(&entry.id, format!("parameter `{p}` changes parity"));
                        structural_defect = true;
                    }
                }
            }
        }
        for p in param_parity.keys() {
            if !entry.conditions.iter().any(|c| mentions(c, p)) {
                push(&entry.id, format!("parameter `{p}` has no condition"));
            }
        }
        for c in &entry.conditions {
            if !param_parity.keys().any(|p| mentions(c, p)) {
                push(&entry.id, format!("condition `{c}` names no parameter"));
            }
        }
        if structural_defect {
            continue;
        }
        match entry.element(model) {
            Ok(x) => {
                let xx = model.bracket(&x, &x);
                if !xx.is_zero() {
                    push(
                        &entry.id,
                        format!("[X, X] = {} is not zero", model.display(&xx)),
                    );
                } else if !element_is_even(model, &x) {
                    push(&entry.id, "representative is not even overall".to_string());
                }
            }
            Err(e) => push(&entry.id, format!("element build failed: {e}")),
        }
    }
    issues
}

fn element_is_even(model: &AlgebraModel, x: &Element) -> bool {
    x.coeffs.iter().enumerate().all(|(j, c)| match c.parity() {
        ParityClass::Zero => true,
        ParityClass::Even => !model.odd[j],
        ParityClass::Odd => model.odd[j],
        ParityClass::Mixed => false,
    })
}

/// True when the condition string mentions the parameter as a whole word.
fn mentions(condition: &str, param: &str) -> bool {
    condition.split(|c: char| !c.is_alphanumeric()).any(|w| w == param)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::load_subalgebras;
    use crate::symalg::basis;
    use crate::verify::SystemKind;

    fn model(kind: SystemKind) -> AlgebraModel {
        AlgebraModel::from_basis(&basis(kind)).unwrap()
    }

    #[test]
    fn bundled_lists_have_the_published_sizes() {
        assert_eq!(load_subalgebras("bosonic").unwrap().entries.len(), 99);
        assert_eq!(load_subalgebras("fermionic").unwrap().entries.len(), 199);
        assert_eq!(load_subalgebras("classical").unwrap().entries.len(), 16);
    }

    #[test]
    fn every_entry_validates_cleanly() {
        for (name, kind) in [
            ("bosonic", SystemKind::Bosonic),
            ("fermionic", SystemKind::Fermionic),
            ("classical", SystemKind::Classical),
        ] {
            let list = load_subalgebras(name).unwrap();
            let issues = validate(&list, &model(kind));
            assert!(
                issues.is_empty(),
                "{name}: {:?}",
                issues
                    .iter()
                    .map(|i| format!("{}: {}", i.id, i.detail))
                    .collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn serialization_round_trips_byte_identical() {
        for name in ["bosonic", "fermionic", "classical"] {
            let file = crate::data::SUBALGEBRAS
                .iter()
                .find(|f| f.name == name)
                .unwrap();
            let list = SubalgebraList::from_jsonl(file.text).unwrap();
            assert_eq!(list.to_jsonl(), file.text, "{name}");
        }
    }

    #[test]
    fn two_sign_entry_transcribed_with_independent_signs() {
        let list = load_subalgebras("bosonic").unwrap();
        let e = list.entry("g39").unwrap();
        let shape: Vec<(Option<&str>, &str)> = e
            .terms
            .iter()
            .map(|t| (t.parameter.as_deref(), t.basis.as_str()))
            .collect();
        assert_eq!(
            shape,
            vec![(None, "K0"), (Some("eps1"), "P+"), (Some("eps2"), "P-")]
        );
        assert!(e.conditions.contains(&"eps1^2 = 1".to_string()));
        assert!(e.conditions.contains(&"eps2^2 = 1".to_string()));
    }

    #[test]
    fn translation_center_shift_entry_has_all_five_terms() {
        let list = load_subalgebras("fermionic").unwrap();
        let e = list.entry("h129").unwrap();
        let bases: Vec<&str> = e.terms.iter().map(|t| t.basis.as_str()).collect();
        assert_eq!(bases, vec!["P+", "P-", "K0", "C0", "W"]);
        assert_eq!(e.terms[4].parameter.as_deref(), Some("zeta"));
    }

    #[test]
    fn four_parameter_dilation_entry_present() {
        let list = load_subalgebras("fermionic").unwrap();
        let e = list.entry("h91").unwrap();
        let params: Vec<&str> = e
            .terms
            .iter()
            .filter_map(|t| t.parameter.as_deref())
            .collect();
        assert_eq!(params, vec!["a", "b", "c"]);
    }

    #[test]
    fn parity_defect_is_reported() {
        let list = load_subalgebras("bosonic").unwrap();
        let mut broken = list.entry("g3").unwrap().clone();
        broken.terms[0].parity = TermParity::Even;
        let issues = validate(
            &SubalgebraList {
                entries: vec![broken],
            },
            &model(SystemKind::Bosonic),
        );
        assert!(issues.iter().any(|i| i.detail.contains("coefficient")));
    }

    #[test]
    fn unknown_basis_is_reported() {
        let entry = SubalgebraEntry {
            id: "x1".to_string(),
            terms: vec![SubalgebraTerm {
                basis: "Q9".to_string(),
                parameter: None,
                parity: TermParity::Even,
            }],
            conditions: vec![],
        };
        let issues = validate(
            &SubalgebraList {
                entries: vec![entry],
            },
            &model(SystemKind::Bosonic),
        );
        assert!(issues.iter().any(|i| i.detail.contains("unknown basis")));
    }

    #[test]
    fn center_extension_of_classical_entries_still_closes() {
        let m = model(SystemKind::Classical);
        let list = load_subalgebras("classical").unwrap();
        let center = m
            .element(&[("e0", GradedExpr::atom(Atom::even_const("b")))])
            .unwrap();
        for entry in &list.entries {
            let x = entry.element(&m).unwrap().add(&center);
            assert!(m.bracket(&x, &x).is_zero(), "{}", entry.id);
        }
    }
}
