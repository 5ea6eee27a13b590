use crate::prelude::*;
use alloc::collections::BTreeMap;

/// Value attached to a report under a context key.
#[derive(Debug, Clone, PartialEq)]
pub enum ContextValue {
    Num(f64),
    Int(i64),
    Text(String),
    Flag(bool),
}

impl From<f64> for ContextValue {
    fn from(v: f64) -> Self {
        ContextValue::Num(v)
    }
}

impl From<usize> for ContextValue {
    fn from(v: usize) -> Self {
        ContextValue::Int(v as i64)
    }
}

impl From<i64> for ContextValue {
    fn from(v: i64) -> Self {
        ContextValue::Int(v)
    }
}

impl From<i32> for ContextValue {
    fn from(v: i32) -> Self {
        ContextValue::Int(v as i64)
    }
}

impl From<bool> for ContextValue {
    fn from(v: bool) -> Self {
        ContextValue::Flag(v)
    }
}

impl From<&str> for ContextValue {
    fn from(v: &str) -> Self {
        ContextValue::Text(v.into())
    }
}

impl From<String> for ContextValue {
    fn from(v: String) -> Self {
        ContextValue::Text(v)
    }
}

/// Outcome of one inequality check, oriented as `lhs ≤ rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// Normally `rhs − lhs`; two-sided checks store the smaller margin.
    pub slack: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub context: BTreeMap<String, ContextValue>,
}

impl VerificationReport {
    /// Report for `lhs ≤ rhs` with the given tolerance.
    pub fn new(name: &str, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Self::with_slack(name, lhs, rhs, rhs - lhs, tolerance)
    }

    pub fn with_slack(name: &str, lhs: f64, rhs: f64, slack: f64, tolerance: f64) -> Self {
        let scale = lhs.abs().max(rhs.abs()).max(1e-300);
        let tolerance = if tolerance > 0.0 { tolerance } else { 1e-14 * scale };
        // an infinite rhs passes, NaN anywhere fails
        let pass = slack >= -tolerance || (rhs == f64::INFINITY && !lhs.is_nan());
        Self { name: name.into(), lhs, rhs, slack, tolerance, pass, context: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: impl Into<ContextValue>) -> Self {
        self.context.insert(key.into(), value.into());
        self
    }

    pub fn set(&mut self, key: &str, value: impl Into<ContextValue>) {
        self.context.insert(key.into(), value.into());
    }

    /// Marks a check that passes with a margin far beyond its left side.
    pub fn flag_vacuous(mut self, factor: f64) -> Self {
        let vacuous = self.rhs.is_infinite() || (self.lhs > 0.0 && self.rhs > factor * self.lhs);
        self.set("vacuous", vacuous);
        self
    }

    pub fn num(&self, key: &str) -> Option<f64> {
        match self.context.get(key) {
            Some(ContextValue::Num(v)) => Some(*v),
            Some(ContextValue::Int(v)) => Some(*v as f64),
            _ => None,
        }
    }

    pub fn flag(&self, key: &str) -> Option<bool> {
        match self.context.get(key) {
            Some(ContextValue::Flag(v)) => Some(*v),
            _ => None,
        }
    }
}
