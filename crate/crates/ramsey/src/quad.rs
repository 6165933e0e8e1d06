//! Gauss-Legendre quadrature, plain and on equal-width panels.
//!
//! The ensemble averages integrate smooth Gaussian-weighted integrands whose
//! oscillation is mild once the window is split into a handful of panels, so
//! a fixed composite Gauss-Legendre rule converges fast and — unlike adaptive
//! schemes — evaluates bit-identical point sets on every run.

/// Nodes and weights of the n-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Build the n-point rule. Nodes are the roots of the degree-n Legendre
    /// polynomial, found by Newton iteration from the Chebyshev-like initial
    /// guesses; the iteration is monotone and converges to machine precision
    /// in a handful of steps for any practical n.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "quadrature rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let step = p / d;
                x -= step;
                if step.abs() <= 1e-15 {
                    // One polishing step past the tolerance.
                    let (p, d) = legendre_with_derivative(n, x);
                    dp = d;
                    x -= p / d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            // Initial guesses run from the positive end; store symmetrically.
            nodes[n - 1 - i] = x;
            nodes[i] = -x;
            weights[n - 1 - i] = w;
            weights[i] = w;
        }
        if n % 2 == 1 {
            // Force the central node to be exactly zero.
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integrate `f` over `[a, b]` by mapping the reference nodes affinely.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut sum = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(mid + half * x);
        }
        half * sum
    }
}

/// Legendre polynomial `P_n(x)` and its derivative via the three-term
/// recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite rule: `panels` equal-width panels, each carrying the same
/// `nodes_per_panel`-point Gauss-Legendre rule.
#[derive(Clone, Debug)]
pub struct PanelRule {
    rule: GaussLegendre,
    panels: usize,
}

impl PanelRule {
    pub fn new(panels: usize, nodes_per_panel: usize) -> Self {
        assert!(panels >= 1, "need at least one panel");
        Self {
            rule: GaussLegendre::new(nodes_per_panel),
            panels,
        }
    }

    pub fn total_points(&self) -> usize {
        self.panels * self.rule.len()
    }

    /// Integrate `f` over `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let width = (b - a) / self.panels as f64;
        let mut sum = 0.0;
        for p in 0..self.panels {
            let lo = a + p as f64 * width;
            sum += self.rule.integrate(lo, lo + width, &mut f);
        }
        sum
    }

    /// The full `(node, weight)` set of the composite rule on `[a, b]`,
    /// in ascending node order. Useful for tensor-product grids where the
    /// same axis rule is reused across the other axis.
    pub fn points(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        let width = (b - a) / self.panels as f64;
        let half = 0.5 * width;
        let mut out = Vec::with_capacity(self.total_points());
        for p in 0..self.panels {
            let mid = a + (p as f64 + 0.5) * width;
            for (&x, &w) in self.rule.nodes.iter().zip(&self.rule.weights) {
                out.push((mid + half * x, half * w));
            }
        }
        out
    }
}
