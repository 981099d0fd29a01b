use serde::Serialize;
use serde_json::{Map, Value};

use qclone::bounds::{self, Rational};

/// How `actual` is compared with `expected`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `|actual − expected| ≤ tolerance`
    Eq,
    /// `actual ≤ expected + tolerance`
    Le,
    /// `actual ≥ expected − tolerance`
    Ge,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub paper_anchor: &'static str,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub l: Option<usize>,
    pub expected: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_exact: Option<String>,
    pub actual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub actual_exact: Option<String>,
    pub relation: Relation,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        anchor: &'static str,
        expected: f64,
        actual: f64,
        relation: Relation,
        tolerance: f64,
    ) -> Self {
        let pass = match relation {
            Relation::Eq => (actual - expected).abs() <= tolerance,
            Relation::Le => actual <= expected + tolerance,
            Relation::Ge => actual >= expected - tolerance,
        };
        Self {
            name: name.into(),
            paper_anchor: anchor,
            n: None,
            m: None,
            l: None,
            expected,
            expected_exact: None,
            actual,
            actual_exact: None,
            relation,
            tolerance,
            pass,
        }
    }

    /// Simulated value against an exact rational.
    pub fn against_exact(
        name: impl Into<String>,
        anchor: &'static str,
        exact: &Rational,
        actual: f64,
        tolerance: f64,
    ) -> Self {
        let mut c = Self::new(
            name,
            anchor,
            bounds::to_f64(exact),
            actual,
            Relation::Eq,
            tolerance,
        );
        c.expected_exact = Some(bounds::to_string(exact));
        c
    }

    /// An exact identity: `slack` must be zero (or non-negative for `Ge`).
    pub fn exact_identity(
        name: impl Into<String>,
        anchor: &'static str,
        slack: &Rational,
        holds: bool,
        relation: Relation,
    ) -> Self {
        let mut c = Self::new(name, anchor, 0.0, bounds::to_f64(slack), relation, 0.0);
        c.expected_exact = Some("0".into());
        c.actual_exact = Some(bounds::to_string(slack));
        c.pass = holds;
        c
    }

    pub fn at(mut self, n: Option<usize>, m: Option<usize>, l: Option<usize>) -> Self {
        self.n = n;
        self.m = m;
        self.l = l;
        self
    }

    pub fn abs_error(&self) -> f64 {
        (self.actual - self.expected).abs()
    }
}

/// Builder for an ordered JSON object.
#[derive(Debug, Default, Clone)]
pub struct Row(Map<String, Value>);

impl Row {
    pub fn new(kind: &str) -> Self {
        let mut m = Map::new();
        m.insert("kind".into(), Value::from(kind));
        Row(m)
    }

    pub fn set(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.0.insert(key.into(), value.into());
        self
    }

    pub fn exact(self, key: &str, r: &Rational) -> Self {
        self.set(key, bounds::to_string(r))
            .set(&format!("{key}_value"), bounds::to_f64(r))
    }

    pub fn fields(&self) -> &Map<String, Value> {
        &self.0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub config: Value,
    pub results: Vec<Value>,
    pub checks: Vec<Check>,
    pub timing: Value,
}

/// Accumulates the results and checks of one section of a run.
#[derive(Debug, Default)]
pub struct Section {
    pub rows: Vec<Row>,
    pub checks: Vec<Check>,
}

impl Section {
    pub fn row(&mut self, row: Row) {
        self.rows.push(row);
    }

    pub fn check(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: Section) {
        self.rows.extend(other.rows);
        self.checks.extend(other.checks);
    }
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}
