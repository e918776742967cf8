//! JSON form of an admissible linear system.
//!
//! ```json
//! {
//!   "alphabet": ["x", "y"],
//!   "dim": 2,
//!   "u": ["1", "0"],
//!   "v": ["0", "1"],
//!   "A": { "1": [["1", "0"], ["0", "1"]], "x": [["0", "-1"], ["0", "0"]] },
//!   "cert": { "minimal": "yes", "one_in_L": "unknown", "one_in_R": "unknown" },
//!   "trusted": true
//! }
//! ```
//!
//! Scalars are strings `"p/q"`; plain JSON integers are accepted on input.
//! Missing coefficient matrices are zero. Certification flags are only
//! kept on import when the document is marked `"trusted": true` (or the
//! caller trusts it); otherwise they are reset to unknown.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::als::{Alphabet, Als, CertFlags, Membership, Minimality, Pencil};
use crate::error::{Error, Result};
use crate::linalg::{format_scalar, parse_scalar, KMatrix, Scalar};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    alphabet: Vec<String>,
    dim: usize,
    u: Vec<Value>,
    v: Vec<Value>,
    #[serde(rename = "A")]
    a: IndexMap<String, Vec<Vec<Value>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cert: Option<CertDoc>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    trusted: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertDoc {
    minimal: String,
    #[serde(rename = "one_in_L")]
    one_in_left: String,
    #[serde(rename = "one_in_R")]
    one_in_right: String,
}

fn scalar(v: &Value) -> Result<Scalar> {
    match v {
        Value::String(s) => parse_scalar(s).map_err(|_| Error::Schema(format!("bad scalar {s:?}"))),
        Value::Number(n) if n.is_i64() => Ok(Scalar::from_integer(n.as_i64().unwrap_or_default().into())),
        other => Err(Error::Schema(format!("expected a scalar string or integer, found {other}"))),
    }
}

fn vector(vals: &[Value], n: usize, what: &str) -> Result<Vec<Scalar>> {
    if vals.len() != n {
        return Err(Error::Schema(format!("{what} has {} entries, expected {n}", vals.len())));
    }
    vals.iter().map(scalar).collect()
}

fn membership(s: &str) -> Result<Membership> {
    match s {
        "yes" => Ok(Membership::Yes),
        "no" => Ok(Membership::No),
        "unknown" => Ok(Membership::Unknown),
        _ => Err(Error::Schema(format!("bad membership flag {s:?}"))),
    }
}

fn membership_str(m: Membership) -> &'static str {
    match m {
        Membership::Yes => "yes",
        Membership::No => "no",
        Membership::Unknown => "unknown",
    }
}

/// Reads a system. `trust` keeps certification flags even when the
/// document itself is not marked trusted.
pub fn import_als(text: &str, trust: bool) -> Result<Als> {
    let doc: Document = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    let ab = Alphabet::new(doc.alphabet.clone()).map_err(|e| Error::Schema(e.to_string()))?;
    let n = doc.dim;
    let u = vector(&doc.u, n, "u")?;
    if u.iter().enumerate().any(|(i, x)| *x != Scalar::from_integer(i64::from(i == 0).into())) {
        return Err(Error::Schema("u must be the first unit row e_1".into()));
    }
    let v = KMatrix::col_vector(vector(&doc.v, n, "v")?);
    let mut coeffs = vec![KMatrix::zeros(n, n); ab.len() + 1];
    for (key, rows) in &doc.a {
        let slot = if key == "1" {
            0
        } else {
            ab.index_of(key).ok_or_else(|| Error::Schema(format!("coefficient for unknown letter {key:?}")))? + 1
        };
        if rows.len() != n {
            return Err(Error::Schema(format!("A[{key:?}] has {} rows, expected {n}", rows.len())));
        }
        let rows: Result<Vec<Vec<Scalar>>> =
            rows.iter().map(|r| vector(r, n, &format!("a row of A[{key:?}]"))).collect();
        coeffs[slot] = if n == 0 { KMatrix::zeros(0, 0) } else { KMatrix::from_rows(rows?)? };
    }
    let als = Als::new(Pencil::new(&ab, coeffs)?, v)?;
    let cert = match (&doc.cert, trust || doc.trusted) {
        (Some(c), true) => {
            let minimal = match c.minimal.as_str() {
                "yes" => Minimality::Yes,
                "unknown" | "no" => Minimality::Unknown,
                s => return Err(Error::Schema(format!("bad minimal flag {s:?}"))),
            };
            CertFlags::from_parts(minimal, membership(&c.one_in_left)?, membership(&c.one_in_right)?)?
        }
        _ => CertFlags::UNKNOWN,
    };
    Ok(als.with_cert(cert))
}

/// Writes a system as pretty-printed JSON.
pub fn export_als(f: &Als) -> String {
    serde_json::to_string_pretty(&export_value(f)).expect("documents always serialize")
}

/// The JSON document of a system as a value, for embedding.
pub fn export_value(f: &Als) -> Value {
    let s = |x: &Scalar| Value::String(format_scalar(x));
    let ab = f.alphabet();
    let matrix = |m: &KMatrix| -> Vec<Vec<Value>> { m.to_rows().iter().map(|r| r.iter().map(s).collect()).collect() };
    let mut a = IndexMap::new();
    a.insert("1".to_string(), matrix(f.pencil().coeff(0)));
    for (i, l) in ab.letters().iter().enumerate() {
        a.insert(l.clone(), matrix(f.pencil().coeff(i + 1)));
    }
    let c = f.cert();
    let doc = Document {
        alphabet: ab.letters().to_vec(),
        dim: f.dim(),
        u: f.u().row(0).iter().map(s).collect(),
        v: f.v().col(0).iter().map(s).collect(),
        a,
        cert: Some(CertDoc {
            minimal: if c.is_minimal() { "yes" } else { "unknown" }.into(),
            one_in_left: membership_str(c.one_in_left()).into(),
            one_in_right: membership_str(c.one_in_right()).into(),
        }),
        trusted: false,
    };
    serde_json::to_value(doc).expect("documents always serialize")
}
