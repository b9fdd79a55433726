//! Named inequality checks with margins.
//!
//! Every entry reads `lhs ≥ rhs` (or `lhs > rhs` when strict), so
//! `margin = lhs - rhs` and "satisfied" always means a nonnegative margin.
//! Exact sides serialize as `"p/q"` strings, approximate ones as JSON numbers.

use serde::{Serialize, Serializer};

use crate::rational::{format_q, to_f64, Q};

/// `|margin|` below this is reported as boundary for floating-point sides.
pub const BOUNDARY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Exact(Q),
    Approx(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(x) => to_f64(x),
            Value::Approx(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&Q> {
        match self {
            Value::Exact(x) => Some(x),
            Value::Approx(_) => None,
        }
    }

    /// Exact `p/q`, or 17 significant digits.
    pub fn display(&self) -> String {
        match self {
            Value::Exact(x) => format_q(x),
            Value::Approx(x) => format_sig17(*x),
        }
    }
}

pub fn format_sig17(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.16e}")
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Exact(x) => s.serialize_str(&format_q(x)),
            Value::Approx(x) => s.serialize_f64(*x),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `lhs >= rhs`
    Ge,
    /// `lhs > rhs`
    Gt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryStatus {
    Satisfied,
    Boundary,
    Violated,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundEntry {
    pub id: String,
    pub description: String,
    pub relation: Relation,
    pub lhs: Option<Value>,
    pub rhs: Option<Value>,
    pub margin: Option<Value>,
    pub satisfied: bool,
    pub status: EntryStatus,
}

impl BoundEntry {
    pub fn exact(id: &str, description: &str, lhs: Q, rhs: Q, relation: Relation) -> Self {
        let margin = &lhs - &rhs;
        let zero = num_traits::Zero::is_zero(&margin);
        let positive = num_traits::Signed::is_positive(&margin);
        let satisfied = match relation {
            Relation::Ge => positive || zero,
            Relation::Gt => positive,
        };
        let status = if zero {
            EntryStatus::Boundary
        } else if satisfied {
            EntryStatus::Satisfied
        } else {
            EntryStatus::Violated
        };
        Self {
            id: id.into(),
            description: description.into(),
            relation,
            lhs: Some(Value::Exact(lhs)),
            rhs: Some(Value::Exact(rhs)),
            margin: Some(Value::Exact(margin)),
            satisfied,
            status,
        }
    }

    pub fn approx(id: &str, description: &str, lhs: f64, rhs: f64, relation: Relation) -> Self {
        Self::approx_tol(id, description, lhs, rhs, relation, BOUNDARY_TOL)
    }

    pub fn approx_tol(id: &str, description: &str, lhs: f64, rhs: f64, relation: Relation, tol: f64) -> Self {
        let margin = lhs - rhs;
        let boundary = margin.abs() < tol;
        let satisfied = match relation {
            Relation::Ge => margin >= 0.0 || boundary,
            Relation::Gt => margin > 0.0 && !boundary,
        };
        let status = if boundary {
            EntryStatus::Boundary
        } else if satisfied {
            EntryStatus::Satisfied
        } else {
            EntryStatus::Violated
        };
        Self {
            id: id.into(),
            description: description.into(),
            relation,
            lhs: Some(Value::Approx(lhs)),
            rhs: Some(Value::Approx(rhs)),
            margin: Some(Value::Approx(margin)),
            satisfied,
            status,
        }
    }

    pub fn not_applicable(id: &str, description: &str) -> Self {
        Self {
            id: id.into(),
            description: description.into(),
            relation: Relation::Ge,
            lhs: None,
            rhs: None,
            margin: None,
            satisfied: false,
            status: EntryStatus::NotApplicable,
        }
    }

    pub fn margin_f64(&self) -> Option<f64> {
        self.margin.as_ref().map(Value::to_f64)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct BoundsReport {
    pub entries: Vec<BoundEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl BoundsReport {
    pub fn push(&mut self, e: BoundEntry) {
        self.entries.push(e);
    }

    pub fn get(&self, id: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn violated(&self) -> impl Iterator<Item = &BoundEntry> {
        self.entries.iter().filter(|e| e.status == EntryStatus::Violated)
    }

    /// Plain-text table, one entry per line.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let rel = match e.relation {
                Relation::Ge => ">=",
                Relation::Gt => ">",
            };
            let show = |v: &Option<Value>| v.as_ref().map(Value::display).unwrap_or_else(|| "-".into());
            out.push_str(&format!(
                "{:<14} {:<36} {} {} {}  margin {}\n",
                match e.status {
                    EntryStatus::Satisfied => "satisfied",
                    EntryStatus::Boundary => "boundary",
                    EntryStatus::Violated => "violated",
                    EntryStatus::NotApplicable => "n/a",
                },
                e.id,
                show(&e.lhs),
                rel,
                show(&e.rhs),
                show(&e.margin),
            ));
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        out
    }
}
