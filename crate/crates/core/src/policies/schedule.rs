use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScheduleError {
    #[error("horizon {0} too short for the infrequent schedule (need T > e)")]
    HorizonTooShort(f64),
}

/// Re-solving epochs of the infrequent policies.
///
/// Epoch `u` (for `u = 0..=K`) starts at `t_u = T - τ_u` with
/// `τ_u = T^((5/6)^u)`, so `t_0 = 0`, and runs until `t_{u+1}` (`t_{K+1} = T`).
/// `K = ⌈ln ln T / ln(6/5)⌉` is the first index with `τ_K ≤ e`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolveSchedule {
    horizon: f64,
    starts: Vec<f64>,
    lengths: Vec<f64>,
}

impl ResolveSchedule {
    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// `K`; there are `K + 1` epochs.
    pub fn last_epoch(&self) -> usize {
        self.starts.len() - 1
    }

    pub fn num_epochs(&self) -> usize {
        self.starts.len()
    }

    /// `t*_u`.
    pub fn start(&self, u: usize) -> f64 {
        self.starts[u]
    }

    /// `t*_{u+1}`, or `T` for the last epoch.
    pub fn end(&self, u: usize) -> f64 {
        self.starts.get(u + 1).copied().unwrap_or(self.horizon)
    }

    /// `τ_u`, the time remaining when epoch `u` starts.
    pub fn length(&self, u: usize) -> f64 {
        self.lengths[u]
    }

    /// `τ_u^(-1/4)` for thresholded epochs `u < K`; `None` for the last one.
    pub fn threshold(&self, u: usize) -> Option<f64> {
        (u < self.last_epoch()).then(|| self.lengths[u].powf(-0.25))
    }
}

pub fn compute_schedule(horizon: f64) -> Result<ResolveSchedule, ScheduleError> {
    if !(horizon > std::f64::consts::E) || !horizon.is_finite() {
        return Err(ScheduleError::HorizonTooShort(horizon));
    }
    let k = (horizon.ln().ln() / (6.0_f64 / 5.0).ln()).ceil() as usize;
    let ln_t = horizon.ln();
    let lengths: Vec<f64> = (0..=k)
        .map(|u| {
            if u == 0 {
                horizon
            } else {
                (ln_t * (5.0_f64 / 6.0).powi(u as i32)).exp()
            }
        })
        .collect();
    let starts = lengths
        .iter()
        .enumerate()
        .map(|(u, tau)| if u == 0 { 0.0 } else { horizon - tau })
        .collect();
    Ok(ResolveSchedule {
        horizon,
        starts,
        lengths,
    })
}
