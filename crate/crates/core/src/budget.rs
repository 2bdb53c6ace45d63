use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// Wall-clock allowance for exhaustive searches.
#[derive(Clone, Copy, Debug, Default)]
pub struct Budget {
    deadline: Option<Instant>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget { deadline: None }
    }

    pub fn from_duration(limit: Duration) -> Self {
        Budget {
            deadline: Some(Instant::now() + limit),
        }
    }

    pub fn from_secs_f64(secs: f64) -> Self {
        Budget::from_duration(Duration::from_secs_f64(secs.max(0.0)))
    }

    pub fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

/// Amortized deadline checks for tight search loops.
pub(crate) struct Ticker<'a> {
    budget: &'a Budget,
    count: u32,
}

impl<'a> Ticker<'a> {
    pub(crate) fn new(budget: &'a Budget) -> Self {
        Ticker { budget, count: 0 }
    }

    #[inline]
    pub(crate) fn tick(&mut self) -> Result<()> {
        self.count = self.count.wrapping_add(1);
        if self.count & 0xfff == 0 && self.budget.expired() {
            return Err(Error::BudgetExceeded);
        }
        Ok(())
    }
}
