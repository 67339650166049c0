//! The `.bks` line-oriented text format for equation systems.
//!
//! ```text
//! # comment
//! name singlet5
//! dim 4
//! ray u1 1 1 -1 1
//! ray u2 1 -1 0 0
//! eq 6: u1 + u2 + u3 = 1
//! state w 0 1 -1 0
//! ```
//!
//! Components may be integers or rationals (`1/2`); rays are canonicalized
//! on input. A side of an equation is a `+`-separated list of ray names
//! with at most one nonnegative integer term; a bare `0` denotes an empty
//! side. Serialization names rays `u1..uN` in first-appearance order, so
//! `parse(serialize(s))` is structurally equal to `s` and serialization is
//! idempotent on parsed documents.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::equation::{EquationSystem, SystemError, ValueEquation, VarId};
use crate::ray::{Ray, RayError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("missing `dim` header before this line")]
    MissingDim,
    #[error("duplicate `{0}` line")]
    DuplicateDirective(&'static str),
    #[error("unknown directive `{0}`")]
    UnknownDirective(String),
    #[error("expected {expected} components, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid name `{0}`: names start with a letter or `_` and contain only letters, digits, `_` or `-`")]
    BadName(String),
    #[error("`{0}` is not an integer or rational component")]
    BadComponent(String),
    #[error("`{0}` is not a nonnegative integer constant")]
    BadConstant(String),
    #[error("name `{0}` is already defined")]
    DuplicateName(String),
    #[error("ray `{name}` duplicates `{existing}`: same canonical ray {ray}")]
    DuplicateRay {
        name: String,
        existing: String,
        ray: String,
    },
    #[error("unknown ray name `{0}`")]
    UnknownName(String),
    #[error("ray `{0}` appears twice on one side")]
    SameSideDuplicate(String),
    #[error("each side allows at most one constant term")]
    MultipleConstants,
    #[error("expected exactly one `=` in an equation")]
    MalformedEquation,
    #[error("expected `+` between terms")]
    MissingPlus,
    #[error("empty term")]
    EmptyTerm,
    #[error("{0}")]
    Ray(RayError),
    #[error("{0}")]
    System(SystemError),
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

fn valid_name(token: &str) -> bool {
    let mut chars = token.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

fn parse_rational(token: &str) -> Option<BigRational> {
    let (numer, denom) = match token.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (token, None),
    };
    let numer: BigInt = numer.parse().ok()?;
    let denom: BigInt = match denom {
        Some(d) => d.parse().ok()?,
        None => BigInt::from(1),
    };
    if denom.is_zero() {
        return None;
    }
    Some(BigRational::new(numer, denom))
}

fn parse_components(
    tokens: &[&str],
    dim: usize,
    line: usize,
) -> Result<Ray, ParseError> {
    if tokens.len() != dim {
        return Err(err(
            line,
            ParseErrorKind::DimensionMismatch {
                expected: dim,
                found: tokens.len(),
            },
        ));
    }
    let rats = tokens
        .iter()
        .map(|t| {
            parse_rational(t).ok_or_else(|| err(line, ParseErrorKind::BadComponent(t.to_string())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ray::canonicalize(&rats).map_err(|e| err(line, ParseErrorKind::Ray(e)))
}

/// One side of an equation: named rays plus an optional constant term.
fn parse_side(
    tokens: &[&str],
    names: &HashMap<String, VarId>,
    line: usize,
) -> Result<(Vec<VarId>, u32), ParseError> {
    // Terms are separated by standalone `+` tokens.
    let mut terms = Vec::new();
    let mut expect_term = true;
    for &token in tokens {
        if expect_term {
            if token == "+" {
                return Err(err(line, ParseErrorKind::EmptyTerm));
            }
            terms.push(token);
            expect_term = false;
        } else if token == "+" {
            expect_term = true;
        } else {
            return Err(err(line, ParseErrorKind::MissingPlus));
        }
    }
    if expect_term {
        return Err(err(line, ParseErrorKind::EmptyTerm));
    }
    let mut vars = Vec::new();
    let mut constant: Option<u32> = None;
    for term in terms {
        if term.chars().all(|c| c.is_ascii_digit()) {
            let value: u32 = term
                .parse()
                .map_err(|_| err(line, ParseErrorKind::BadConstant(term.to_string())))?;
            if constant.replace(value).is_some() {
                return Err(err(line, ParseErrorKind::MultipleConstants));
            }
        } else if let Some(&var) = names.get(term) {
            if vars.contains(&var) {
                return Err(err(line, ParseErrorKind::SameSideDuplicate(term.to_string())));
            }
            vars.push(var);
        } else if valid_name(term) {
            return Err(err(line, ParseErrorKind::UnknownName(term.to_string())));
        } else {
            return Err(err(line, ParseErrorKind::BadName(term.to_string())));
        }
    }
    Ok((vars, constant.unwrap_or(0)))
}

/// Parses a `.bks` document into an equation system.
pub fn parse_system(text: &str) -> Result<EquationSystem, ParseError> {
    let mut name: Option<String> = None;
    let mut dim: Option<usize> = None;
    let mut system: Option<EquationSystem> = None;
    let mut names: HashMap<String, VarId> = HashMap::new();
    let mut ray_names: Vec<String> = Vec::new();
    let mut state_seen = false;
    let mut eq_count = 0usize;

    for (i, raw_line) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens[0] {
            "name" => {
                if name.is_some() {
                    return Err(err(line, ParseErrorKind::DuplicateDirective("name")));
                }
                let value = tokens.get(1).copied().unwrap_or("");
                if tokens.len() != 2 || !valid_name(value) {
                    return Err(err(line, ParseErrorKind::BadName(tokens[1..].join(" "))));
                }
                name = Some(value.to_string());
                if let Some(sys) = &mut system {
                    sys.set_name(value);
                }
            }
            "dim" => {
                if dim.is_some() {
                    return Err(err(line, ParseErrorKind::DuplicateDirective("dim")));
                }
                let value: usize = tokens
                    .get(1)
                    .and_then(|t| t.parse().ok())
                    .filter(|&d| d > 0 && tokens.len() == 2)
                    .ok_or_else(|| {
                        err(line, ParseErrorKind::BadConstant(tokens[1..].join(" ")))
                    })?;
                dim = Some(value);
                system = Some(EquationSystem::new(
                    name.clone().unwrap_or_default(),
                    value,
                ));
            }
            "ray" => {
                let dim = dim.ok_or_else(|| err(line, ParseErrorKind::MissingDim))?;
                let system = system.as_mut().expect("system exists once dim is set");
                let ray_name = *tokens.get(1).ok_or_else(|| {
                    err(line, ParseErrorKind::BadName(String::new()))
                })?;
                if !valid_name(ray_name) {
                    return Err(err(line, ParseErrorKind::BadName(ray_name.to_string())));
                }
                if names.contains_key(ray_name) {
                    return Err(err(line, ParseErrorKind::DuplicateName(ray_name.to_string())));
                }
                let ray = parse_components(&tokens[2..], dim, line)?;
                if let Some(existing) = system.lookup_ray(&ray) {
                    return Err(err(
                        line,
                        ParseErrorKind::DuplicateRay {
                            name: ray_name.to_string(),
                            existing: ray_names[existing.0].clone(),
                            ray: ray.to_string(),
                        },
                    ));
                }
                let id = system
                    .intern_ray(ray)
                    .map_err(|e| err(line, ParseErrorKind::System(e)))?;
                debug_assert_eq!(id.0, ray_names.len());
                names.insert(ray_name.to_string(), id);
                ray_names.push(ray_name.to_string());
            }
            "eq" => {
                if dim.is_none() {
                    return Err(err(line, ParseErrorKind::MissingDim));
                }
                let system = system.as_mut().expect("system exists once dim is set");
                eq_count += 1;
                let mut rest = &tokens[1..];
                let label = match rest.first() {
                    Some(first) if first.ends_with(':') && first.len() > 1 => {
                        let label = first[..first.len() - 1].to_string();
                        rest = &rest[1..];
                        label
                    }
                    _ => eq_count.to_string(),
                };
                let eq_pos = rest.iter().position(|&t| t == "=");
                let Some(eq_pos) = eq_pos else {
                    return Err(err(line, ParseErrorKind::MalformedEquation));
                };
                if rest[eq_pos + 1..].contains(&"=") {
                    return Err(err(line, ParseErrorKind::MalformedEquation));
                }
                let (mut lhs, lhs_const) = parse_side(&rest[..eq_pos], &names, line)?;
                let (mut rhs, rhs_const) = parse_side(&rest[eq_pos + 1..], &names, line)?;
                // Normalize so the single constant sits on the right.
                let mut constant = rhs_const as i64 - lhs_const as i64;
                if constant < 0 {
                    std::mem::swap(&mut lhs, &mut rhs);
                    constant = -constant;
                }
                let equation = ValueEquation::new(label, lhs, rhs, constant as u32)
                    .map_err(|e| err(line, ParseErrorKind::System(e)))?;
                system
                    .push_equation(equation)
                    .map_err(|e| err(line, ParseErrorKind::System(e)))?;
            }
            "state" => {
                let dim = dim.ok_or_else(|| err(line, ParseErrorKind::MissingDim))?;
                let system = system.as_mut().expect("system exists once dim is set");
                if state_seen {
                    return Err(err(line, ParseErrorKind::DuplicateDirective("state")));
                }
                let state_name = *tokens.get(1).ok_or_else(|| {
                    err(line, ParseErrorKind::BadName(String::new()))
                })?;
                if !valid_name(state_name) {
                    return Err(err(line, ParseErrorKind::BadName(state_name.to_string())));
                }
                let ray = parse_components(&tokens[2..], dim, line)?;
                system
                    .set_state(ray)
                    .map_err(|e| err(line, ParseErrorKind::System(e)))?;
                state_seen = true;
            }
            other => {
                return Err(err(line, ParseErrorKind::UnknownDirective(other.to_string())));
            }
        }
    }
    match system {
        Some(system) => Ok(system),
        None => Err(err(text.lines().count() + 1, ParseErrorKind::MissingDim)),
    }
}

fn write_side(out: &mut String, side: &[VarId], constant: u32) {
    let mut terms: Vec<String> = side.iter().map(|v| format!("u{}", v.0 + 1)).collect();
    if constant > 0 || terms.is_empty() {
        terms.push(constant.to_string());
    }
    out.push_str(&terms.join(" + "));
}

/// Serializes a system to the `.bks` format. Output is deterministic:
/// rays are named `u1..uN` in variable order.
pub fn serialize_system(system: &EquationSystem) -> String {
    let mut out = String::new();
    if !system.name().is_empty() {
        out.push_str(&format!("name {}\n", system.name()));
    }
    out.push_str(&format!("dim {}\n", system.dim()));
    for (i, ray) in system.rays().iter().enumerate() {
        out.push_str(&format!("ray u{}", i + 1));
        for c in ray.components() {
            out.push_str(&format!(" {c}"));
        }
        out.push('\n');
    }
    for eq in system.equations() {
        out.push_str(&format!("eq {}: ", eq.label()));
        write_side(&mut out, eq.lhs(), 0);
        out.push_str(" = ");
        write_side(&mut out, eq.rhs(), eq.constant());
        out.push('\n');
    }
    if let Some(state) = system.state() {
        out.push_str("state w");
        for c in state.components() {
            out.push_str(&format!(" {c}"));
        }
        out.push('\n');
    }
    out
}

impl fmt::Display for EquationSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", serialize_system(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOC: &str = "\
# two-variable example
name pair
dim 2
ray a 1 0
ray b 0 1
eq one: a + b = 1
";

    #[test]
    fn parses_a_simple_document() {
        let system = parse_system(DOC).unwrap();
        assert_eq!(system.name(), "pair");
        assert_eq!(system.dim(), 2);
        assert_eq!(system.var_count(), 2);
        let eq = &system.equations()[0];
        assert_eq!(eq.label(), "one");
        assert_eq!(eq.constant(), 1);
    }

    #[test]
    fn round_trip_is_idempotent() {
        let system = parse_system(DOC).unwrap();
        let once = serialize_system(&system);
        let twice = serialize_system(&parse_system(&once).unwrap());
        assert_eq!(once, twice);
        assert!(parse_system(&once).unwrap().structurally_equal(&system));
    }

    #[test]
    fn rationals_are_canonicalized() {
        let system = parse_system("dim 2\nray h 1/2 -1/2\n").unwrap();
        assert_eq!(system.rays()[0], Ray::from_ints(&[1, -1]).unwrap());
    }

    #[test]
    fn same_side_duplicate_is_rejected() {
        let doc = "dim 2\nray a 1 0\neq a + a = 1\n";
        let e = parse_system(doc).unwrap_err();
        assert_eq!(e.line, 3);
        assert!(matches!(e.kind, ParseErrorKind::SameSideDuplicate(_)));
    }

    #[test]
    fn duplicate_canonical_ray_is_rejected() {
        let doc = "dim 4\nray a 2 2 0 0\nray b 1 1 0 0\n";
        let e = parse_system(doc).unwrap_err();
        assert_eq!(e.line, 3);
        assert!(matches!(e.kind, ParseErrorKind::DuplicateRay { .. }));
    }

    #[test]
    fn unknown_name_is_rejected() {
        let doc = "dim 2\nray a 1 0\neq a + c = 1\n";
        let e = parse_system(doc).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::UnknownName(name) if name == "c"));
    }

    #[test]
    fn wrong_component_count_is_rejected() {
        let doc = "dim 4\nray a 1 0\n";
        let e = parse_system(doc).unwrap_err();
        assert_eq!(
            e.kind,
            ParseErrorKind::DimensionMismatch {
                expected: 4,
                found: 2
            }
        );
    }

    #[test]
    fn missing_dim_is_rejected() {
        let e = parse_system("ray a 1 0\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::MissingDim);
        let e = parse_system("# nothing\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::MissingDim);
    }

    #[test]
    fn empty_sides_and_mixed_constants() {
        let doc = "dim 2\nray a 1 0\nray b 0 1\neq x: 0 = a + b\neq y: a = b + 1\neq z: 1 = a\n";
        let system = parse_system(doc).unwrap();
        let x = &system.equations()[0];
        assert!(x.lhs().is_empty());
        assert_eq!(x.rhs().len(), 2);
        let y = &system.equations()[1];
        assert_eq!((y.lhs().len(), y.rhs().len(), y.constant()), (1, 1, 1));
        // A left-hand constant is normalized onto the right.
        let z = &system.equations()[2];
        assert_eq!((z.lhs().len(), z.rhs().len(), z.constant()), (1, 0, 1));
        let text = serialize_system(&system);
        assert!(parse_system(&text).unwrap().structurally_equal(&system));
    }

    #[test]
    fn unlabeled_equations_get_positional_labels() {
        let doc = "dim 2\nray a 1 0\nray b 0 1\neq a = b\neq b = a\n";
        let system = parse_system(doc).unwrap();
        assert_eq!(system.equations()[0].label(), "1");
        assert_eq!(system.equations()[1].label(), "2");
    }

    #[test]
    fn state_line_round_trips() {
        let doc = "dim 2\nray a 1 0\nstate w 1 1\n";
        let system = parse_system(doc).unwrap();
        assert_eq!(system.state(), Some(&Ray::from_ints(&[1, 1]).unwrap()));
        let text = serialize_system(&system);
        assert!(text.contains("state w 1 1"));
        assert!(parse_system(&text).unwrap().structurally_equal(&system));
    }
}
