//! Witnesses carried by failing checks.

use std::fmt;

use serde::Serialize;

use crate::element::Element;
use crate::ground::GroundSet;

/// Where and why a check failed. Elements and sets are stored in their
/// canonical string forms so that reports serialize stably.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub parts: Vec<String>,
    pub elements: Vec<String>,
    pub detail: String,
}

impl Witness {
    pub fn new(detail: impl Into<String>) -> Self {
        Witness { parts: Vec::new(), elements: Vec::new(), detail: detail.into() }
    }

    pub fn parts<'a>(mut self, parts: impl IntoIterator<Item = &'a GroundSet>) -> Self {
        self.parts = parts.into_iter().map(|p| p.to_string()).collect();
        self
    }

    pub fn elements<'a>(mut self, xs: impl IntoIterator<Item = &'a Element>) -> Self {
        self.elements = xs.into_iter().map(|x| x.to_string()).collect();
        self
    }

    /// Ground-set size of the witness, when parts were recorded.
    pub fn size(&self) -> usize {
        self.parts.iter().map(|p| p.trim_matches(['{', '}']).split(',').filter(|s| !s.is_empty()).count()).sum()
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.detail)?;
        if !self.parts.is_empty() {
            write!(f, " at ({})", self.parts.join(", "))?;
        }
        if !self.elements.is_empty() {
            write!(f, " on [{}]", self.elements.join(", "))?;
        }
        Ok(())
    }
}

/// Outcome of a single exhaustive check.
pub type Verdict = Result<(), Witness>;
