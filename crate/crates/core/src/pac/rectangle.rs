use serde::{Deserialize, Serialize};

use crate::numerics::RngState;
use crate::{Error, Result};

/// Target rectangle inside the unit square, with points drawn uniformly
/// over the square.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RectangleInstance {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
}

impl RectangleInstance {
    pub fn new(x_lo: f64, x_hi: f64, y_lo: f64, y_hi: f64) -> Result<Self> {
        let inside = |v: f64| (0.0..=1.0).contains(&v);
        if !(x_lo < x_hi && y_lo < y_hi)
            || ![x_lo, x_hi, y_lo, y_hi].iter().all(|&v| inside(v))
        {
            return Err(Error::InvalidParameter(
                "rectangle needs lo < hi within the unit square".into(),
            ));
        }
        Ok(Self {
            x_lo,
            x_hi,
            y_lo,
            y_hi,
        })
    }

    pub fn area(&self) -> f64 {
        (self.x_hi - self.x_lo) * (self.y_hi - self.y_lo)
    }

    pub fn contains(&self, p: (f64, f64)) -> bool {
        p.0 >= self.x_lo && p.0 <= self.x_hi && p.1 >= self.y_lo && p.1 <= self.y_hi
    }
}

/// Outcome of the tightest-fit learning experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RectangleReport {
    pub eps: f64,
    pub delta: f64,
    pub m: usize,
    pub trials: usize,
    /// Fraction of trials whose true error exceeded `eps`.
    pub failure_rate: f64,
    /// True error (area of target minus fitted) per trial.
    pub errors: Vec<f64>,
    /// Diagnostic only: fraction of trials whose sample hit all four
    /// weight-`eps/4` boundary strips of the target.
    pub eps_net_hit_rate: f64,
}

/// Runs the tightest-fit rectangle learner: each trial samples `m` uniform
/// points, labels them by the target, fits the smallest axis-aligned
/// rectangle around the positives (empty if none), and scores the exact
/// error as the area difference (the distribution is uniform, so region
/// weight equals area). Failure means error above `eps`.
pub fn rectangle_experiment(
    instance: &RectangleInstance,
    eps: f64,
    delta: f64,
    m: usize,
    trials: usize,
    seed: u64,
) -> Result<RectangleReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    if !(0.0..1.0).contains(&eps) || eps == 0.0 {
        return Err(Error::InvalidParameter("eps must lie in (0,1)".into()));
    }
    let base = RngState::new(seed);
    let mut errors = Vec::with_capacity(trials);
    let mut failures = 0usize;
    let mut net_hits = 0usize;

    // The four inward strips of weight eps/4 used by the epsilon-net
    // diagnostic (clipped at the opposite edge).
    let quarter = eps / 4.0;
    let width = instance.x_hi - instance.x_lo;
    let height = instance.y_hi - instance.y_lo;
    let strip_h = (quarter / width).min(height);
    let strip_w = (quarter / height).min(width);

    for trial in 0..trials {
        let mut rng = base.derive(trial as u64);
        let mut fitted: Option<RectangleInstance> = None;
        let mut hit = [false; 4];
        for _ in 0..m {
            let p = (rng.next_f64(), rng.next_f64());
            if !instance.contains(p) {
                continue;
            }
            fitted = Some(match fitted {
                None => RectangleInstance {
                    x_lo: p.0,
                    x_hi: p.0,
                    y_lo: p.1,
                    y_hi: p.1,
                },
                Some(r) => RectangleInstance {
                    x_lo: r.x_lo.min(p.0),
                    x_hi: r.x_hi.max(p.0),
                    y_lo: r.y_lo.min(p.1),
                    y_hi: r.y_hi.max(p.1),
                },
            });
            hit[0] |= p.1 >= instance.y_hi - strip_h; // top
            hit[1] |= p.1 <= instance.y_lo + strip_h; // bottom
            hit[2] |= p.0 <= instance.x_lo + strip_w; // left
            hit[3] |= p.0 >= instance.x_hi - strip_w; // right
        }
        let fitted_area = fitted.map_or(0.0, |r| {
            debug_assert!(
                r.x_lo >= instance.x_lo
                    && r.x_hi <= instance.x_hi
                    && r.y_lo >= instance.y_lo
                    && r.y_hi <= instance.y_hi,
                "tightest fit must stay inside the target"
            );
            (r.x_hi - r.x_lo) * (r.y_hi - r.y_lo)
        });
        let err = instance.area() - fitted_area;
        if err > eps {
            failures += 1;
        }
        if hit.iter().all(|&h| h) {
            net_hits += 1;
        }
        errors.push(err);
    }
    Ok(RectangleReport {
        eps,
        delta,
        m,
        trials,
        failure_rate: failures as f64 / trials as f64,
        errors,
        eps_net_hit_rate: net_hits as f64 / trials as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn target() -> RectangleInstance {
        RectangleInstance::new(0.1, 0.9, 0.1, 0.9).unwrap()
    }

    #[test]
    fn zero_samples_mean_full_error() {
        let r = rectangle_experiment(&target(), 0.1, 0.1, 0, 50, 3).unwrap();
        assert_eq!(r.failure_rate, 1.0);
        for e in &r.errors {
            assert!((e - target().area()).abs() < 1e-15);
        }
    }

    #[test]
    fn theoretical_sample_size_keeps_failures_under_delta() {
        let r = rectangle_experiment(&target(), 0.1, 0.1, 148, 2000, 7).unwrap();
        assert!(
            r.failure_rate <= 0.1,
            "failure rate {} above delta",
            r.failure_rate
        );
    }

    #[test]
    fn errors_stay_within_the_target_area() {
        let r = rectangle_experiment(&target(), 0.2, 0.1, 30, 300, 11).unwrap();
        for &e in &r.errors {
            assert!(e >= 0.0, "negative error {e}: fit escaped the target");
            assert!(e <= target().area() + 1e-15);
        }
    }

    #[test]
    fn deterministic_across_runs() {
        let a = rectangle_experiment(&target(), 0.1, 0.1, 60, 100, 21).unwrap();
        let b = rectangle_experiment(&target(), 0.1, 0.1, 60, 100, 21).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn degenerate_rectangles_rejected() {
        assert!(RectangleInstance::new(0.5, 0.5, 0.1, 0.9).is_err());
        assert!(RectangleInstance::new(0.1, 1.2, 0.1, 0.9).is_err());
    }
}
