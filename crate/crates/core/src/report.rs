use alloc::vec::Vec;
use core::fmt;

/// Outcome of a validation pass: empty means valid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report<V> {
    pub violations: Vec<V>,
}

impl<V> Report<V> {
    pub fn ok() -> Self {
        Report { violations: Vec::new() }
    }

    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl<V> Default for Report<V> {
    fn default() -> Self {
        Self::ok()
    }
}

impl<V: fmt::Display> fmt::Display for Report<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}
