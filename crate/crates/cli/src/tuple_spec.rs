//! Tuple input: shorthand type labels such as `B1xD2xSU(3)` or JSON
//! documents with explicit angles.

use orbital_ac_core::{Angle, AngleGroup, ElementType, TorusElement};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// One element: a type label (canonical angles) or explicit data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementSpec {
    Label(String),
    Explicit {
        u: usize,
        v: usize,
        #[serde(default)]
        angle_groups: Vec<AngleGroupSpec>,
    },
}

/// Angle `num/den · π` with multiplicity `mult`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AngleGroupSpec {
    pub num: i64,
    pub den: i64,
    pub mult: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TupleSpec {
    #[serde(default)]
    pub rank: Option<usize>,
    pub elements: Vec<ElementSpec>,
}

fn label_error(label: &str, column: usize, message: impl Into<String>) -> CliError {
    CliError::Parse { line: 1, column, message: format!("{} in {label:?}", message.into()) }
}

/// Parses `Bu`, `Dv` and `SU(s)` factors joined by `x`. Returns the type at
/// its own rank.
pub fn parse_label(label: &str) -> Result<ElementType, CliError> {
    let s = label.trim();
    if s.is_empty() {
        return Err(label_error(label, 1, "empty type label"));
    }
    let offset = label.find(s).unwrap_or(0);
    let (mut u, mut v, mut parts) = (None, None, Vec::new());
    let mut pos = 0;
    for factor in s.split('x') {
        let col = offset + pos + 1;
        pos += factor.len() + 1;
        let f = factor.trim();
        let number = |digits: &str| -> Result<usize, CliError> {
            digits.parse::<usize>().map_err(|_| label_error(label, col, format!("bad number in factor {f:?}")))
        };
        if let Some(inner) = f.strip_prefix("SU(").and_then(|r| r.strip_suffix(')')) {
            let k = number(inner)?;
            if k == 0 {
                return Err(label_error(label, col, "SU(0) is not a factor"));
            }
            parts.push(k);
        } else if let Some(d) = f.strip_prefix('B') {
            if u.replace(number(d)?).is_some() {
                return Err(label_error(label, col, "repeated B factor"));
            }
        } else if let Some(d) = f.strip_prefix('D') {
            if v.replace(number(d)?).is_some() {
                return Err(label_error(label, col, "repeated D factor"));
            }
        } else {
            return Err(label_error(label, col, format!("unknown factor {f:?}")));
        }
    }
    Ok(ElementType::new(u.unwrap_or(0), v.unwrap_or(0), parts))
}

/// Pads a type of lower rank with `SU(1)` factors up to rank `n`.
pub fn pad_to_rank(t: ElementType, n: usize, label: &str) -> Result<ElementType, CliError> {
    let r = t.rank();
    if r > n {
        return Err(CliError::Usage(format!("{label:?} has rank {r}, more than the requested rank {n}")));
    }
    let mut parts = t.parts.clone();
    parts.extend(std::iter::repeat_n(1, n - r));
    Ok(ElementType::new(t.u, t.v, parts))
}

fn explicit_element(u: usize, v: usize, groups: &[AngleGroupSpec]) -> Result<TorusElement, CliError> {
    let groups = groups
        .iter()
        .map(|g| Ok(AngleGroup { angle: Angle::new(g.num, g.den)?, mult: g.mult }))
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(TorusElement::new(u, v, groups)?)
}

/// A parsed tuple with the labels used for reporting.
#[derive(Clone, Debug, PartialEq)]
pub struct ParsedTuple {
    pub rank: usize,
    pub elements: Vec<TorusElement>,
    pub labels: Vec<String>,
}

impl TupleSpec {
    /// Resolves labels and explicit elements. Without an explicit rank, the
    /// largest element rank is used and smaller labels are padded.
    pub fn resolve(&self, rank: Option<usize>, allow_central: bool) -> Result<ParsedTuple, CliError> {
        if self.elements.is_empty() {
            return Err(CliError::Usage("the tuple is empty".into()));
        }
        if let (Some(a), Some(b)) = (rank, self.rank) {
            if a != b {
                return Err(CliError::Usage(format!("--rank {a} conflicts with rank {b} in the tuple")));
            }
        }
        enum Raw {
            Type(ElementType, String),
            Element(TorusElement),
        }
        let raw = self
            .elements
            .iter()
            .map(|e| match e {
                ElementSpec::Label(l) => Ok(Raw::Type(parse_label(l)?, l.trim().to_string())),
                ElementSpec::Explicit { u, v, angle_groups } => {
                    Ok(Raw::Element(explicit_element(*u, *v, angle_groups)?))
                }
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let n = rank.or(self.rank).unwrap_or_else(|| {
            raw.iter()
                .map(|r| match r {
                    Raw::Type(t, _) => t.rank(),
                    Raw::Element(x) => x.rank(),
                })
                .max()
                .unwrap_or(0)
        });
        if n < 2 {
            return Err(CliError::Usage(format!("rank {n} is not supported, need at least 2")));
        }
        let mut elements = Vec::new();
        let mut labels = Vec::new();
        for r in raw {
            match r {
                Raw::Type(t, label) => {
                    let t = pad_to_rank(t, n, &label)?;
                    labels.push(t.to_string());
                    elements.push(t.canonical_element());
                }
                Raw::Element(x) => {
                    if x.rank() != n {
                        return Err(CliError::Usage(format!("element {x} has rank {}, expected {n}", x.rank())));
                    }
                    labels.push(x.element_type().to_string());
                    elements.push(x);
                }
            }
        }
        if !allow_central {
            if let Some(i) = elements.iter().position(|x| x.is_central()) {
                return Err(CliError::Usage(format!(
                    "element {} ({}) is central; pass --allow-central to keep it",
                    i + 1,
                    labels[i]
                )));
            }
        }
        Ok(ParsedTuple { rank: n, elements, labels })
    }
}

/// Parses the `--tuple` argument: a JSON document when it starts with `{`,
/// the contents of a JSON file when it starts with `@`, and otherwise a
/// comma-separated list of labels where `LABEL*k` repeats a label.
pub fn parse_tuple_arg(arg: &str) -> Result<TupleSpec, CliError> {
    let trimmed = arg.trim_start();
    if let Some(path) = trimmed.strip_prefix('@') {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
        return parse_json(&text);
    }
    if trimmed.starts_with('{') {
        return parse_json(arg);
    }
    let mut elements = Vec::new();
    for item in arg.split(',') {
        let item = item.trim();
        let (label, count) = match item.rsplit_once('*') {
            Some((l, k)) => {
                let k: usize = k.trim().parse().map_err(|_| CliError::Parse {
                    line: 1,
                    column: arg.find(item).unwrap_or(0) + 1,
                    message: format!("bad repeat count in {item:?}"),
                })?;
                (l.trim(), k)
            }
            None => (item, 1),
        };
        for _ in 0..count {
            elements.push(ElementSpec::Label(label.to_string()));
        }
    }
    Ok(TupleSpec { rank: None, elements })
}

pub fn parse_json(text: &str) -> Result<TupleSpec, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels() {
        assert_eq!(parse_label("B1xD2xSU(3)").unwrap(), ElementType::new(1, 2, vec![3]));
        assert_eq!(parse_label("SU(1)xSU(2)").unwrap(), ElementType::new(0, 0, vec![2, 1]));
        assert_eq!(parse_label(" D2 ").unwrap(), ElementType::new(0, 2, vec![]));
        assert_eq!(parse_label("B0").unwrap().rank(), 0);
        for bad in ["", "B1xB2", "Q3", "SU(0)", "SU(2", "Bx", "D-1"] {
            assert!(parse_label(bad).is_err(), "{bad}");
        }
        match parse_label("D1xE2") {
            Err(CliError::Parse { column, .. }) => assert_eq!(column, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tuple_arguments() {
        let t = parse_tuple_arg("B1, D2*2").unwrap().resolve(None, false).unwrap();
        assert_eq!(t.rank, 2);
        assert_eq!(t.labels, vec!["B1xSU(1)", "D2", "D2"]);
        let t = parse_tuple_arg("D2").unwrap().resolve(Some(3), false).unwrap();
        assert_eq!(t.labels, vec!["D2xSU(1)"]);
        assert!(parse_tuple_arg("D3").unwrap().resolve(Some(2), false).is_err());
        assert!(parse_tuple_arg("B2,D2").unwrap().resolve(None, false).is_err());
        assert!(parse_tuple_arg("B2,D2").unwrap().resolve(None, true).is_ok());
        assert!(parse_tuple_arg("D2*x").is_err());
    }

    #[test]
    fn json_documents() {
        let doc =
            r#"{"rank": 2, "elements": ["D2", {"u": 1, "v": 0, "angle_groups": [{"num": 1, "den": 3, "mult": 1}]}]}"#;
        let t = parse_tuple_arg(doc).unwrap().resolve(None, false).unwrap();
        assert_eq!(t.elements[1].groups()[0].angle, Angle::new(1, 3).unwrap());
        assert_eq!(t.labels[1], "B1xSU(1)");
        match parse_json("{\n  \"elements\": [\n    \"D2\",,\n  ]\n}") {
            Err(CliError::Parse { line, column, .. }) => assert_eq!((line, column), (3, 10)),
            other => panic!("{other:?}"),
        }
        let bad_angle = r#"{"elements": [{"u": 0, "v": 0, "angle_groups": [{"num": 3, "den": 2, "mult": 2}]}]}"#;
        assert!(parse_json(bad_angle).unwrap().resolve(None, false).is_err());
        let spec = parse_json(doc).unwrap();
        let again: TupleSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(again, spec);
    }
}
