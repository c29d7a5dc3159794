//! Super vector fields over a named direction space, their graded bracket,
//! and structure-constant tables computed by exact decomposition over a
//! generator basis. Directions split into coordinates (differentiated with
//! the full chain rule) and dependent fields (differentiated formally), and
//! each direction carries a parity, so generators can mix even and odd
//! directions as long as every term has the same total parity.

use crate::calculus::{d_dir, DepTable};
use crate::expr::{Atom, EngineError, GradedExpr, Monomial, Parity, ParityClass};
use crate::scalar::GaussRat;
use num::{One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

/// One direction a vector field can differentiate along.
#[derive(Clone, Debug, PartialEq)]
pub struct Direction {
    /// Key used in vector-field components.
    pub name: String,
    /// Atom the derivative acts on.
    pub atom: Atom,
}

impl Direction {
    /// Parity of the derivation along this direction.
    pub fn odd(&self) -> bool {
        matches!(self.atom.parity(), Parity::Odd)
    }
}

/// The total space a family of vector fields lives on: coordinates plus
/// dependent fields, with the dependency table used for chain rules.
#[derive(Clone, Debug, Default)]
pub struct DirectionSpace {
    dirs: Vec<Direction>,
    pub deps: DepTable,
}

impl DirectionSpace {
    pub fn new() -> Self {
        DirectionSpace::default()
    }

    fn push(&mut self, name: &str, atom: Atom) -> &mut Self {
        self.dirs.push(Direction {
            name: name.to_string(),
            atom,
        });
        self
    }

    /// Adds a bosonic coordinate direction.
    pub fn coord(&mut self, name: &str) -> &mut Self {
        self.push(name, Atom::coord(name))
    }

    /// Adds a fermionic coordinate direction.
    pub fn odd_coord(&mut self, name: &str) -> &mut Self {
        self.push(name, Atom::odd_coord(name))
    }

    /// Adds an even dependent-field direction.
    pub fn even_field(&mut self, name: &str) -> &mut Self {
        self.push(name, Atom::even_const(name))
    }

    /// Adds an odd dependent-field direction.
    pub fn odd_field(&mut self, name: &str) -> &mut Self {
        self.push(name, Atom::odd_const(name))
    }

    pub fn direction(&self, name: &str) -> Option<&Direction> {
        self.dirs.iter().find(|d| d.name == name)
    }

    pub fn directions(&self) -> &[Direction] {
        &self.dirs
    }
}

/// Vector-field failure.
#[derive(Debug, Error)]
pub enum LieError {
    #[error("unknown direction `{0}`")]
    UnknownDirection(String),
    #[error("component `{dir}` has parity {got:?}; the field is not homogeneous of parity {expected:?}")]
    Inhomogeneous {
        dir: String,
        got: ParityClass,
        expected: ParityClass,
    },
    #[error("bracket [{left}, {right}] does not decompose over the generator basis; remainder {rest}")]
    NotInSpan {
        left: String,
        right: String,
        rest: String,
    },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// A vector field with graded coefficient functions, stored sparsely by
/// direction name. The coefficient multiplies the derivation from the left.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SuperVectorField {
    components: BTreeMap<String, GradedExpr>,
}

impl SuperVectorField {
    pub fn zero() -> Self {
        SuperVectorField::default()
    }

    /// Builder: sets one component, dropping zeros.
    pub fn with(mut self, dir: &str, e: GradedExpr) -> Self {
        self.set(dir, e);
        self
    }

    pub fn set(&mut self, dir: &str, e: GradedExpr) {
        if e.is_zero() {
            self.components.remove(dir);
        } else {
            self.components.insert(dir.to_string(), e);
        }
    }

    pub fn component(&self, dir: &str) -> GradedExpr {
        self.components
            .get(dir)
            .cloned()
            .unwrap_or_else(GradedExpr::zero)
    }

    pub fn components(&self) -> impl Iterator<Item = (&str, &GradedExpr)> {
        self.components.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn add(&self, other: &SuperVectorField) -> SuperVectorField {
        let mut out = self.clone();
        for (dir, e) in &other.components {
            out.set(dir, out.component(dir).add(e));
        }
        out
    }

    pub fn neg(&self) -> SuperVectorField {
        let mut out = SuperVectorField::zero();
        for (dir, e) in &self.components {
            out.set(dir, e.neg());
        }
        out
    }

    pub fn sub(&self, other: &SuperVectorField) -> SuperVectorField {
        self.add(&other.neg())
    }

    /// Left multiplication by a coefficient expression.
    pub fn scale(&self, c: &GradedExpr) -> SuperVectorField {
        let mut out = SuperVectorField::zero();
        for (dir, e) in &self.components {
            out.set(dir, c.mul(e));
        }
        out
    }

    /// Left multiplication by an exact scalar.
    pub fn scale_scalar(&self, c: &GaussRat) -> SuperVectorField {
        self.scale(&GradedExpr::scalar(c.clone()))
    }

    /// Total parity of the field: coefficient parity plus direction parity,
    /// required to agree across components.
    pub fn parity(&self, space: &DirectionSpace) -> Result<ParityClass, LieError> {
        let mut total = ParityClass::Zero;
        for (dir, e) in &self.components {
            let d = space
                .direction(dir)
                .ok_or_else(|| LieError::UnknownDirection(dir.clone()))?;
            let got = match (e.parity(), d.odd()) {
                (ParityClass::Zero, _) => continue,
                (ParityClass::Even, false) | (ParityClass::Odd, true) => ParityClass::Even,
                (ParityClass::Even, true) | (ParityClass::Odd, false) => ParityClass::Odd,
                (ParityClass::Mixed, _) => {
                    return Err(LieError::Inhomogeneous {
                        dir: dir.clone(),
                        got: ParityClass::Mixed,
                        expected: total,
                    })
                }
            };
            if total == ParityClass::Zero {
                total = got;
            } else if total != got {
                return Err(LieError::Inhomogeneous {
                    dir: dir.clone(),
                    got,
                    expected: total,
                });
            }
        }
        Ok(total)
    }

    /// Applies the field as a graded derivation to an expression.
    pub fn apply(&self, space: &DirectionSpace, g: &GradedExpr) -> Result<GradedExpr, LieError> {
        let mut acc = GradedExpr::zero();
        for (dir, coeff) in &self.components {
            let d = space
                .direction(dir)
                .ok_or_else(|| LieError::UnknownDirection(dir.clone()))?;
            let dg = d_dir(g, &d.atom, &space.deps)?;
            if !dg.is_zero() {
                acc = acc.add(&coeff.mul(&dg));
            }
        }
        Ok(acc)
    }

    /// Graded bracket of homogeneous fields: the commutator, except the
    /// anticommutator when both fields are odd.
    pub fn bracket(
        &self,
        other: &SuperVectorField,
        space: &DirectionSpace,
    ) -> Result<SuperVectorField, LieError> {
        let px = self.parity(space)?;
        let py = other.parity(space)?;
        if px == ParityClass::Zero || py == ParityClass::Zero {
            return Ok(SuperVectorField::zero());
        }
        let both_odd = px == ParityClass::Odd && py == ParityClass::Odd;
        let mut out = SuperVectorField::zero();
        let dirs: std::collections::BTreeSet<&String> = self
            .components
            .keys()
            .chain(other.components.keys())
            .collect();
        for dir in dirs {
            let xb = self.apply(space, &other.component(dir))?;
            let ya = other.apply(space, &self.component(dir))?;
            let comp = if both_odd { xb.add(&ya) } else { xb.sub(&ya) };
            out.set(dir, comp);
        }
        Ok(out)
    }

    /// Deterministic leading entry: first direction in name order, first
    /// monomial of its component.
    fn leading(&self) -> Option<(&str, &Monomial)> {
        self.components
            .iter()
            .next()
            .and_then(|(dir, e)| e.terms().first().map(|m| (dir.as_str(), m)))
    }

    /// Renders the field as a sum of `coeff d/d dir` terms.
    pub fn display(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.components
            .iter()
            .map(|(dir, e)| format!("({}) d/d{}", e.display(), dir))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

fn same_shape(a: &Monomial, b: &Monomial) -> bool {
    a.bos == b.bos && a.odd == b.odd
}

/// Writes `x` as an exact scalar combination of the basis fields, when one
/// exists. Pure leading-entry elimination: no approximation, no solving.
pub fn decompose(x: &SuperVectorField, basis: &[SuperVectorField]) -> Option<Vec<GaussRat>> {
    let leads: Vec<Option<(&str, &Monomial)>> = basis.iter().map(|e| e.leading()).collect();
    let mut coeffs = vec![GaussRat::zero(); basis.len()];
    let mut residual = x.clone();
    for _ in 0..64 * basis.len().max(1) {
        let (dir, m) = match residual.leading() {
            None => return Some(coeffs),
            Some(lead) => lead,
        };
        let mut hit = None;
        for (k, lead) in leads.iter().enumerate() {
            if let Some((ld, lm)) = lead {
                if *ld == dir && same_shape(m, lm) {
                    hit = Some((k, m.coeff.mul(&lm.coeff.inv())));
                    break;
                }
            }
        }
        let (k, c) = hit?;
        coeffs[k] = coeffs[k].add(&c);
        residual = residual.sub(&basis[k].scale_scalar(&c));
    }
    None
}

/// A named generator basis together with its direction space.
pub struct GeneratorBasis {
    pub space: DirectionSpace,
    pub names: Vec<String>,
    pub fields: Vec<SuperVectorField>,
}

impl GeneratorBasis {
    pub fn generator(&self, name: &str) -> Option<&SuperVectorField> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|k| &self.fields[k])
    }

    /// Parity flags of the generators, in basis order.
    pub fn parities(&self) -> Result<Vec<ParityClass>, LieError> {
        self.fields.iter().map(|f| f.parity(&self.space)).collect()
    }
}

/// Structure-constant table of a generator basis: one rendered entry per
/// ordered pair, as an exact combination of generator names.
#[derive(Clone, Debug, serde::Serialize)]
pub struct StructureTable {
    pub names: Vec<String>,
    pub odd: Vec<bool>,
    pub entries: Vec<Vec<String>>,
}

impl StructureTable {
    pub fn entry(&self, left: &str, right: &str) -> Option<&str> {
        let i = self.names.iter().position(|n| n == left)?;
        let k = self.names.iter().position(|n| n == right)?;
        Some(self.entries[i][k].as_str())
    }
}

fn render_term(c: &GaussRat, name: &str) -> String {
    if c.is_one() {
        return name.to_string();
    }
    if c.neg().is_one() {
        return format!("-{name}");
    }
    if c.is_real() {
        return format!("{}{name}", c.re);
    }
    if c.re.is_zero() {
        let im = &c.im;
        if im.is_one() {
            return format!("i{name}");
        }
        if (-im.clone()).is_one() {
            return format!("-i{name}");
        }
        return format!("{im}i{name}");
    }
    format!("({}){name}", GradedExpr::scalar(c.clone()).display())
}

fn render_combination(coeffs: &[GaussRat], names: &[String]) -> String {
    let mut out = String::new();
    for (c, name) in coeffs.iter().zip(names) {
        if c.is_zero() {
            continue;
        }
        let term = render_term(c, name);
        if out.is_empty() {
            out = term;
        } else if let Some(rest) = term.strip_prefix('-') {
            out = format!("{out} - {rest}");
        } else {
            out = format!("{out} + {term}");
        }
    }
    if out.is_empty() {
        out = "0".to_string();
    }
    out
}

fn odd_sign(a: ParityClass, b: ParityClass) -> GaussRat {
    if a == ParityClass::Odd && b == ParityClass::Odd {
        GaussRat::one().neg()
    } else {
        GaussRat::one()
    }
}

/// Graded antisymmetry residuals `[X,Y] + (-1)^{|X||Y|}[Y,X]` over every
/// ordered basis pair; empty exactly when the identity holds.
pub fn antisymmetry_failures(basis: &GeneratorBasis) -> Result<Vec<String>, LieError> {
    let parities = basis.parities()?;
    let mut out = Vec::new();
    for (i, x) in basis.fields.iter().enumerate() {
        for (k, y) in basis.fields.iter().enumerate() {
            let xy = x.bracket(y, &basis.space)?;
            let yx = y.bracket(x, &basis.space)?;
            let residual = xy.add(&yx.scale_scalar(&odd_sign(parities[i], parities[k])));
            if !residual.is_zero() {
                out.push(format!(
                    "[{}, {}] breaks graded antisymmetry: {}",
                    basis.names[i],
                    basis.names[k],
                    residual.display()
                ));
            }
        }
    }
    Ok(out)
}

/// Graded Jacobi residuals `[X,[Y,Z]] - [[X,Y],Z] - (-1)^{|X||Y|}[Y,[X,Z]]`
/// over every ordered basis triple; empty exactly when the identity holds.
pub fn jacobi_failures(basis: &GeneratorBasis) -> Result<Vec<String>, LieError> {
    let parities = basis.parities()?;
    let s = &basis.space;
    let n = basis.fields.len();
    let mut out = Vec::new();
    for i in 0..n {
        for k in 0..n {
            for l in 0..n {
                let (x, y, z) = (&basis.fields[i], &basis.fields[k], &basis.fields[l]);
                let lhs = x.bracket(&y.bracket(z, s)?, s)?;
                let t1 = x.bracket(y, s)?.bracket(z, s)?;
                let t2 = y
                    .bracket(&x.bracket(z, s)?, s)?
                    .scale_scalar(&odd_sign(parities[i], parities[k]));
                let residual = lhs.sub(&t1.add(&t2));
                if !residual.is_zero() {
                    out.push(format!(
                        "({}, {}, {}) breaks graded Jacobi: {}",
                        basis.names[i],
                        basis.names[k],
                        basis.names[l],
                        residual.display()
                    ));
                }
            }
        }
    }
    Ok(out)
}

/// Exact structure constants: `constants[i][k]` is the coefficient vector
/// of `[e_i, e_k]` over the basis. Errors when a bracket leaves the span.
pub fn structure_constants(basis: &GeneratorBasis) -> Result<Vec<Vec<Vec<GaussRat>>>, LieError> {
    let n = basis.fields.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for k in 0..n {
            let z = basis.fields[i].bracket(&basis.fields[k], &basis.space)?;
            let coeffs = decompose(&z, &basis.fields).ok_or_else(|| LieError::NotInSpan {
                left: basis.names[i].clone(),
                right: basis.names[k].clone(),
                rest: z.display(),
            })?;
            row.push(coeffs);
        }
        out.push(row);
    }
    Ok(out)
}

/// Computes every pairwise bracket of the basis and decomposes it back
/// over the basis, failing honestly when a bracket leaves the span.
pub fn build_table(basis: &GeneratorBasis) -> Result<StructureTable, LieError> {
    let constants = structure_constants(basis)?;
    let mut odd = Vec::with_capacity(basis.fields.len());
    for f in &basis.fields {
        odd.push(f.parity(&basis.space)? == ParityClass::Odd);
    }
    let entries = constants
        .iter()
        .map(|row| {
            row.iter()
                .map(|coeffs| render_combination(coeffs, &basis.names))
                .collect()
        })
        .collect();
    Ok(StructureTable {
        names: basis.names.clone(),
        odd,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> GradedExpr {
        GradedExpr::atom(Atom::coord("x+"))
    }

    fn th() -> GradedExpr {
        GradedExpr::atom(Atom::odd_coord("th+"))
    }

    fn space() -> DirectionSpace {
        let mut s = DirectionSpace::new();
        s.coord("x+").odd_coord("th+").even_field("H");
        s
    }

    #[test]
    fn supersymmetry_generator_squares_to_translation() {
        let s = space();
        let i = GradedExpr::scalar(GaussRat::i());
        let j = SuperVectorField::zero()
            .with("th+", GradedExpr::one())
            .with("x+", i.mul(&th()));
        assert_eq!(j.parity(&s).unwrap(), ParityClass::Odd);
        let jj = j.bracket(&j, &s).unwrap();
        assert_eq!(jj.component("x+"), i.scale(&GaussRat::from_int(2)));
        assert!(jj.component("th+").is_zero());
    }

    #[test]
    fn dilation_translation_bracket() {
        let s = space();
        let k = SuperVectorField::zero()
            .with("x+", x().scale(&GaussRat::from_int(-2)))
            .with("th+", th().neg());
        let p = SuperVectorField::zero().with("x+", GradedExpr::one());
        let kp = k.bracket(&p, &s).unwrap();
        assert_eq!(kp.component("x+"), GradedExpr::int(2));
        let pk = p.bracket(&k, &s).unwrap();
        assert_eq!(pk.component("x+"), GradedExpr::int(-2));
    }

    #[test]
    fn graded_antisymmetry_and_jacobi() {
        let s = space();
        let i = GradedExpr::scalar(GaussRat::i());
        let gens = [
            SuperVectorField::zero()
                .with("x+", x().scale(&GaussRat::from_int(-2)))
                .with("th+", th().neg()),
            SuperVectorField::zero().with("x+", GradedExpr::one()),
            SuperVectorField::zero()
                .with("th+", GradedExpr::one())
                .with("x+", i.mul(&th())),
            SuperVectorField::zero().with("H", GradedExpr::atom(Atom::even_const("H"))),
        ];
        let parities: Vec<ParityClass> = gens.iter().map(|g| g.parity(&s).unwrap()).collect();
        let sgn = |a: ParityClass, b: ParityClass| {
            if a == ParityClass::Odd && b == ParityClass::Odd {
                GaussRat::one().neg()
            } else {
                GaussRat::one()
            }
        };
        for a in &gens {
            for b in &gens {
                let ab = a.bracket(b, &s).unwrap();
                let ba = b.bracket(a, &s).unwrap();
                let pa = a.parity(&s).unwrap();
                let pb = b.parity(&s).unwrap();
                // graded antisymmetry
                assert_eq!(ab, ba.scale_scalar(&sgn(pa, pb).neg()));
            }
        }
        // graded Jacobi: ad_X is a derivation of the bracket
        for (ia, a) in gens.iter().enumerate() {
            for (ib, b) in gens.iter().enumerate() {
                for c in &gens {
                    let lhs = a.bracket(&b.bracket(c, &s).unwrap(), &s).unwrap();
                    let t1 = a.bracket(b, &s).unwrap().bracket(c, &s).unwrap();
                    let t2 = b.bracket(&a.bracket(c, &s).unwrap(), &s).unwrap();
                    let t2 = t2.scale_scalar(&sgn(parities[ia], parities[ib]));
                    assert_eq!(lhs, t1.add(&t2));
                }
            }
        }
    }

    #[test]
    fn decomposition_recovers_exact_coefficients() {
        let s = space();
        let e1 = SuperVectorField::zero().with("x+", GradedExpr::one());
        let e2 = SuperVectorField::zero().with("x+", x());
        let e3 = SuperVectorField::zero().with("th+", th());
        let combo = e1
            .scale_scalar(&GaussRat::from_ratio(3, 2))
            .add(&e2.scale_scalar(&GaussRat::i().neg()))
            .add(&e3.scale_scalar(&GaussRat::from_int(5)));
        let coeffs = decompose(&combo, &[e1, e2, e3]).unwrap();
        assert_eq!(coeffs[0], GaussRat::from_ratio(3, 2));
        assert_eq!(coeffs[1], GaussRat::i().neg());
        assert_eq!(coeffs[2], GaussRat::from_int(5));
        let _ = s;
    }

    #[test]
    fn decomposition_rejects_outside_span() {
        let e1 = SuperVectorField::zero().with("x+", GradedExpr::one());
        let stray = SuperVectorField::zero().with("th+", GradedExpr::one());
        assert!(decompose(&stray, &[e1]).is_none());
    }
}
