//! Resource caps for Groebner computations.
//!
//! Size caps travel with the ring context; a wall-clock deadline can be
//! installed for the current thread while a single report row is computed.

use std::cell::Cell;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GbLimits {
    /// Maximum number of polynomials kept while running Buchberger.
    pub max_basis: usize,
    /// Maximum total degree of any basis element.
    pub max_degree: u64,
    /// Wall-clock budget for one report row.
    pub row_timeout: Option<Duration>,
}

impl Default for GbLimits {
    fn default() -> Self {
        Self {
            max_basis: 50_000,
            max_degree: 1_000_000,
            row_timeout: None,
        }
    }
}

thread_local! {
    static DEADLINE: Cell<Option<Instant>> = const { Cell::new(None) };
}

/// Runs `f` with this thread's deadline set to `now + limits.row_timeout`.
pub fn with_row_deadline<T>(limits: &GbLimits, f: impl FnOnce() -> T) -> T {
    let Some(timeout) = limits.row_timeout else {
        return f();
    };
    let previous = DEADLINE.with(|d| d.replace(Some(Instant::now() + timeout)));
    struct Restore(Option<Instant>);
    impl Drop for Restore {
        fn drop(&mut self) {
            DEADLINE.with(|d| d.set(self.0));
        }
    }
    let _restore = Restore(previous);
    f()
}

pub(crate) fn check_deadline() -> Result<()> {
    if let Some(deadline) = DEADLINE.with(|d| d.get()) {
        if Instant::now() > deadline {
            return Err(Error::ResourceLimit(
                "wall-clock budget for this row exhausted".into(),
            ));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deadline_is_scoped() {
        let limits = GbLimits {
            row_timeout: Some(Duration::ZERO),
            ..GbLimits::default()
        };
        with_row_deadline(&limits, || {
            std::thread::sleep(Duration::from_millis(2));
            assert!(check_deadline().is_err());
        });
        assert!(check_deadline().is_ok());
    }
}
