//! Variable contexts.
//!
//! A [`VarContext`] is an ordered list of distinct variable names. Every
//! polynomial, rational function and power series is built over one context,
//! and the variable order is fixed for the lifetime of any value built over
//! it. Exponent vectors are indexed by position in the context.

use std::fmt;
use std::sync::Arc;

/// An ordered list of distinct variable names.
#[derive(Debug, PartialEq, Eq)]
pub struct VarContext {
    names: Vec<String>,
}

impl VarContext {
    /// Build a context from the given names. Panics on duplicates.
    pub fn new<S: Into<String>>(names: Vec<S>) -> Arc<VarContext> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for i in 0..names.len() {
            for j in i + 1..names.len() {
                assert!(names[i] != names[j], "duplicate variable '{}'", names[i]);
            }
        }
        Arc::new(VarContext { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    /// Index of a variable name, if present.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

impl fmt::Display for VarContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.names.join(", "))
    }
}

/// Cheap context identity check: pointer equality first, content second.
pub fn same_context(a: &Arc<VarContext>, b: &Arc<VarContext>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_lookup() {
        let ctx = VarContext::new(vec!["S1", "S2", "T1", "T2", "y"]);
        assert_eq!(ctx.len(), 5);
        assert_eq!(ctx.index_of("T2"), Some(3));
        assert_eq!(ctx.index_of("q"), None);
    }

    #[test]
    #[should_panic]
    fn rejects_duplicates() {
        let _ = VarContext::new(vec!["t", "t"]);
    }
}
