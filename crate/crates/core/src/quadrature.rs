//! Globally adaptive panel-wise Gauss-Legendre integration.
//!
//! The interval is first cut into uniform panels plus any caller-supplied
//! breakpoints. Every panel carries an error estimate (one rule on the whole
//! panel against the same rule on its two halves) and the panel with the
//! largest estimate is bisected until the summed estimate drops below the
//! tolerance. Near-singular integrands therefore get geometrically graded
//! panels towards the bad points while smooth stretches stay coarse.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;

use crate::error::{Error, Result};

/// Controls how the mode integrals are evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Number of uniform starting panels on the integration interval.
    pub panels: usize,
    /// Gauss nodes per panel.
    pub nodes_per_panel: usize,
    /// Insert breakpoints at the points where the mode gap can close.
    pub split_at_singularities: bool,
    /// Absolute tolerance on the summed error estimate.
    pub tolerance: f64,
    /// Refinement budget; exceeding it is reported as non-convergence.
    pub max_panels: usize,
}

impl QuadratureSpec {
    pub const DEFAULT_TOLERANCE: f64 = 1e-10;

    /// Default settings for cluster extension `n`.
    pub fn for_model(n: usize) -> Self {
        Self {
            panels: 2 * (n + 1),
            nodes_per_panel: 16,
            split_at_singularities: true,
            tolerance: Self::DEFAULT_TOLERANCE,
            max_panels: 200_000,
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.panels < n + 2 {
            return Err(Error::InvalidParameter(format!(
                "quadrature needs at least n+2 = {} panels, got {}",
                n + 2,
                self.panels
            )));
        }
        if self.nodes_per_panel < 4 {
            return Err(Error::InvalidParameter(format!(
                "quadrature needs at least 4 nodes per panel, got {}",
                self.nodes_per_panel
            )));
        }
        if self.max_panels < self.panels {
            return Err(Error::InvalidParameter(format!(
                "refinement budget of {} panels is below the {} starting panels",
                self.max_panels, self.panels
            )));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::InvalidParameter(
                "quadrature tolerance must be positive".into(),
            ));
        }
        Ok(())
    }
}

struct Panel {
    a: f64,
    b: f64,
    left: f64,
    right: f64,
    estimate: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.estimate
            .total_cmp(&other.estimate)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

struct Integrator<F> {
    rule: GaussLegendre,
    f: F,
}

impl<F: FnMut(f64) -> f64> Integrator<F> {
    fn rule(&mut self, a: f64, b: f64) -> (f64, f64) {
        let f = &mut self.f;
        let mut abs = 0.0;
        let value = self.rule.integrate(a, b, |x| {
            let y = f(x);
            abs += y.abs();
            y
        });
        (value, abs * (b - a).abs() / self.rule_len())
    }

    fn rule_len(&self) -> f64 {
        self.rule.degree() as f64
    }

    fn panel(&mut self, a: f64, b: f64, whole: f64) -> Panel {
        let mid = 0.5 * (a + b);
        let (left, left_abs) = self.rule(a, mid);
        let (right, right_abs) = self.rule(mid, b);
        let mut estimate = (whole - (left + right)).abs();
        // Differences at the rounding level of the panel carry no information.
        let floor = 64.0 * f64::EPSILON * (left_abs + right_abs);
        if estimate <= floor || (b - a).abs() <= 1e-14 * (a.abs() + b.abs()).max(1.0) {
            estimate = 0.0;
        }
        Panel {
            a,
            b,
            left,
            right,
            estimate,
        }
    }
}

/// Integrate `f` over `[a, b]` with mandatory cuts at `breakpoints`.
///
/// Breakpoints outside the open interval are ignored.
pub fn integrate<F>(spec: &QuadratureSpec, a: f64, b: f64, breakpoints: &[f64], f: F) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let nodes = NonZeroUsize::new(spec.nodes_per_panel.max(1)).expect("nonzero");
    let mut integ = Integrator {
        rule: GaussLegendre::new(nodes),
        f,
    };

    let panels = spec.panels.max(1);
    let mut cuts: Vec<f64> = (0..=panels)
        .map(|i| a + (b - a) * i as f64 / panels as f64)
        .collect();
    let tiny = 1e-12 * (b - a).abs();
    for &p in breakpoints {
        if p > a + tiny && p < b - tiny && cuts.iter().all(|c| (c - p).abs() > tiny) {
            cuts.push(p);
        }
    }
    cuts.sort_by(f64::total_cmp);

    let mut heap = BinaryHeap::with_capacity(cuts.len() * 2);
    for w in cuts.windows(2) {
        let (whole, _) = integ.rule(w[0], w[1]);
        heap.push(integ.panel(w[0], w[1], whole));
    }

    let mut total_estimate: f64 = heap.iter().map(|p| p.estimate).sum();
    while total_estimate > spec.tolerance {
        if heap.len() >= spec.max_panels {
            return Err(Error::QuadratureNonConvergence {
                estimate: total_estimate,
                panels: heap.len(),
            });
        }
        let worst = heap.pop().expect("non-empty panel set");
        if worst.estimate == 0.0 {
            heap.push(worst);
            break;
        }
        let mid = 0.5 * (worst.a + worst.b);
        let lhs = integ.panel(worst.a, mid, worst.left);
        let rhs = integ.panel(mid, worst.b, worst.right);
        total_estimate += lhs.estimate + rhs.estimate - worst.estimate;
        heap.push(lhs);
        heap.push(rhs);
        // Re-sum periodically so the running total does not drift.
        if heap.len() % 512 == 0 {
            total_estimate = heap.iter().map(|p| p.estimate).sum();
        }
    }

    let mut panels: Vec<Panel> = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    Ok(panels.iter().map(|p| p.left + p.right).sum())
}
