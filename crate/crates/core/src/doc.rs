//! JSON documents exchanged by the command-line tool.
//!
//! Every document is an object with `"kind"` and `"version": 1`. Rationals are always strings
//! `"p/q"` or `"p"`, so documents round-trip exactly.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::dualitylab::ExperimentConfig;
use crate::error::{Error, Result};
use crate::exactla::{format_rational, parse_rational, RMatrix};
use crate::quiver::{DimVec, Rep};
use crate::sheafbridge::{BundleRep, HomogPoly, Pencil};

pub const VERSION: u64 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Rep(Rep),
    Pencil(Pencil),
    Bundle(BundleRep),
    Poly(HomogPoly),
    Report(Value),
    Config {
        experiment: String,
        config: ExperimentConfig,
    },
}

#[derive(Serialize, Deserialize)]
struct RepPayload {
    q: usize,
    dim: [usize; 2],
    mats: Vec<Vec<Vec<String>>>,
}

fn matrix_strings(m: &RMatrix) -> Vec<Vec<String>> {
    m.row_vecs()
        .iter()
        .map(|r| r.iter().map(format_rational).collect())
        .collect()
}

fn rep_payload(rep: &Rep) -> RepPayload {
    RepPayload {
        q: rep.q(),
        dim: [rep.dim().a1, rep.dim().a2],
        mats: rep.mats().iter().map(matrix_strings).collect(),
    }
}

fn rep_from_payload(p: RepPayload) -> Result<Rep> {
    let dim = DimVec::new(p.dim[0], p.dim[1]);
    let mut mats = Vec::with_capacity(p.mats.len());
    for rows in p.mats {
        if rows.len() != dim.a2 {
            return Err(Error::Parse(format!(
                "matrix has {} rows, dimension {dim} needs {}",
                rows.len(),
                dim.a2
            )));
        }
        let mut parsed = Vec::with_capacity(rows.len());
        for row in rows {
            if row.len() != dim.a1 {
                return Err(Error::Parse(format!(
                    "matrix row has {} entries, dimension {dim} needs {}",
                    row.len(),
                    dim.a1
                )));
            }
            parsed.push(row.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?);
        }
        mats.push(RMatrix::from_rows(parsed, dim.a1).map_err(|e| Error::Parse(e.to_string()))?);
    }
    Rep::new(p.q, dim, mats).map_err(|e| Error::Parse(e.to_string()))
}

/// A rep as a JSON value without the document header.
pub fn rep_value(rep: &Rep) -> Value {
    serde_json::to_value(rep_payload(rep)).expect("serializable")
}

fn with_header(kind: &str, payload: Value) -> Value {
    let mut obj = Map::new();
    obj.insert("kind".into(), Value::from(kind));
    obj.insert("version".into(), Value::from(VERSION));
    if let Value::Object(fields) = payload {
        obj.extend(fields);
    }
    Value::Object(obj)
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Rep(_) => "rep",
            Document::Pencil(_) => "pencil",
            Document::Bundle(_) => "bundle",
            Document::Poly(_) => "poly",
            Document::Report(_) => "report",
            Document::Config { .. } => "config",
        }
    }

    pub fn to_value(&self) -> Value {
        let payload = match self {
            Document::Rep(r) => rep_value(r),
            Document::Pencil(p) => rep_value(&p.to_rep()),
            Document::Bundle(b) => rep_value(&b.to_rep()),
            Document::Poly(p) => serde_json::to_value(p).expect("serializable"),
            Document::Report(v) => v.clone(),
            Document::Config { experiment, config } => {
                let mut m = Map::new();
                m.insert("experiment".into(), Value::from(experiment.clone()));
                m.insert("config".into(), serde_json::to_value(config).expect("serializable"));
                Value::Object(m)
            }
        };
        with_header(self.kind(), payload)
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("serializable");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Result<Document> {
        let v: Value = serde_json::from_str(text).map_err(parse_err)?;
        Document::from_value(v)
    }

    pub fn from_value(v: Value) -> Result<Document> {
        let Value::Object(mut obj) = v else {
            return Err(Error::Parse("document must be a JSON object".into()));
        };
        let kind = obj
            .remove("kind")
            .and_then(|k| k.as_str().map(str::to_owned))
            .ok_or_else(|| Error::Parse("document has no \"kind\"".into()))?;
        match obj.remove("version").and_then(|v| v.as_u64()) {
            Some(VERSION) => {}
            other => {
                return Err(Error::Parse(format!(
                    "unsupported document version {other:?}, expected {VERSION}"
                )))
            }
        }
        let payload = Value::Object(obj);
        let rep = |p: Value| -> Result<Rep> {
            rep_from_payload(serde_json::from_value(p).map_err(parse_err)?)
        };
        Ok(match kind.as_str() {
            "rep" => Document::Rep(rep(payload)?),
            "pencil" => Document::Pencil(
                Pencil::from_rep(&rep(payload)?).map_err(|e| Error::Parse(e.to_string()))?,
            ),
            "bundle" => Document::Bundle(
                BundleRep::from_rep(&rep(payload)?).map_err(|e| Error::Parse(e.to_string()))?,
            ),
            "poly" => Document::Poly(serde_json::from_value(payload).map_err(parse_err)?),
            "report" => Document::Report(payload),
            "config" => {
                #[derive(Deserialize)]
                struct ConfigPayload {
                    experiment: String,
                    config: ExperimentConfig,
                }
                let c: ConfigPayload = serde_json::from_value(payload).map_err(parse_err)?;
                c.config.validate().map_err(|e| Error::Parse(e.to_string()))?;
                Document::Config {
                    experiment: c.experiment,
                    config: c.config,
                }
            }
            other => return Err(Error::Parse(format!("unknown document kind {other:?}"))),
        })
    }

    /// The underlying rep of a `rep`, `pencil` or `bundle` document.
    pub fn into_rep(self) -> Result<Rep> {
        match self {
            Document::Rep(r) => Ok(r),
            Document::Pencil(p) => Ok(p.to_rep()),
            Document::Bundle(b) => Ok(b.to_rep()),
            other => Err(Error::contract(format!(
                "expected a rep, pencil or bundle document, got {:?}",
                other.kind()
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::ratio;
    use crate::quiver::random_rep;
    use crate::sheafbridge::{ideal_sheaf, lambda3};

    #[test]
    fn rep_roundtrip() {
        let mut r = random_rep(3, DimVec::new(2, 3), 4, 5).unwrap().into_mats();
        r[0] = r[0].scale(&ratio(-7, 3));
        let rep = Rep::new(3, DimVec::new(2, 3), r).unwrap();
        let doc = Document::Rep(rep);
        let text = doc.to_json();
        assert!(text.contains("\"kind\": \"rep\""));
        assert!(text.contains("/3\""));
        let back = Document::parse(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn zero_width_rep_roundtrip() {
        let doc = Document::Rep(Rep::zero(3, DimVec::new(0, 2)));
        assert_eq!(Document::parse(&doc.to_json()).unwrap(), doc);
        let doc = Document::Rep(Rep::zero(2, DimVec::new(2, 0)));
        assert_eq!(Document::parse(&doc.to_json()).unwrap(), doc);
    }

    #[test]
    fn pencil_bundle_poly_roundtrip() {
        for doc in [
            Document::Pencil(lambda3()),
            Document::Bundle(ideal_sheaf(&[1, 2, 3]).unwrap()),
            Document::Poly(crate::sheafbridge::support_curve(&lambda3())),
        ] {
            assert_eq!(Document::parse(&doc.to_json()).unwrap(), doc);
        }
    }

    #[test]
    fn malformed_documents() {
        for text in [
            "[1,2]",
            r#"{"version":1}"#,
            r#"{"kind":"rep","version":2,"q":1,"dim":[0,0],"mats":[[]]}"#,
            r#"{"kind":"rep","version":1,"q":1,"dim":[1,1],"mats":[[["x"]]]}"#,
            r#"{"kind":"rep","version":1,"q":1,"dim":[1,1],"mats":[[["1","2"]]]}"#,
            r#"{"kind":"pencil","version":1,"q":1,"dim":[1,1],"mats":[[["1"]]]}"#,
            r#"{"kind":"widget","version":1}"#,
            "not json",
        ] {
            assert!(matches!(Document::parse(text), Err(Error::Parse(_))), "{text}");
        }
    }
}
