use crate::error::{Error, Result};

/// Default node cap for every exhaustive search.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// A node counter shared by all searches performed for one request.
///
/// Each search step calls [`Budget::tick`]; once the cap is reached the step
/// fails with [`Error::BudgetExceeded`] instead of returning a guess.
#[derive(Debug, Clone)]
pub struct Budget {
    limit: u64,
    spent: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, spent: 0 }
    }

    pub fn unlimited() -> Self {
        Budget::new(u64::MAX)
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn spent(&self) -> u64 {
        self.spent
    }

    #[inline]
    pub fn tick(&mut self, context: &str) -> Result<()> {
        self.spent += 1;
        if self.spent > self.limit {
            return Err(Error::BudgetExceeded {
                limit: self.limit,
                context: context.to_string(),
            });
        }
        Ok(())
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_NODE_BUDGET)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhausts_after_limit() {
        let mut b = Budget::new(2);
        assert!(b.tick("x").is_ok());
        assert!(b.tick("x").is_ok());
        let err = b.tick("search").unwrap_err();
        assert!(err.is_budget());
        assert_eq!(b.spent(), 3);
    }
}
