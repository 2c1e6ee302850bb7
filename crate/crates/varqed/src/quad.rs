//! Gauss-Legendre quadrature on composite panels.
//!
//! Nodes and weights come from Newton iteration on the Legendre
//! recurrence. Panels let piecewise-smooth integrands (profiles with a
//! derivative kink) be split at the kink and resolved per half-wavelength.

/// Gauss-Legendre rule of given order on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Self {
        assert!(order >= 2, "quadrature order must be at least 2");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for k in 0..n.div_ceil(2) {
            // Chebyshev-like initial guess, then Newton on P_n
            let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[k] = -x;
            nodes[n - 1 - k] = x;
            weights[k] = w;
            weights[n - 1 - k] = w;
        }
        Self { nodes, weights }
    }

    /// Integrate `f` over [a, b] with a single panel.
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: &F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }

    /// Integrate over [a, b] split into `panels` equal sub-intervals.
    pub fn integrate_composite<F: Fn(f64) -> f64>(
        &self,
        a: f64,
        b: f64,
        panels: usize,
        f: &F,
    ) -> f64 {
        let panels = panels.max(1);
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|k| self.integrate(a + k as f64 * h, a + (k + 1) as f64 * h, f))
            .sum()
    }
}

/// P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_point_nodes() {
        // classical 5-point rule: +-sqrt(5 + 2 sqrt(10/7))/3, ...
        let gl = GaussLegendre::new(5);
        let x1 = (5.0 - 2.0 * (10.0f64 / 7.0).sqrt()).sqrt() / 3.0;
        let x2 = (5.0 + 2.0 * (10.0f64 / 7.0).sqrt()).sqrt() / 3.0;
        assert!((gl.nodes[2]).abs() < 1e-15);
        assert!((gl.nodes[3] - x1).abs() < 1e-14);
        assert!((gl.nodes[4] - x2).abs() < 1e-14);
        assert!((gl.weights[2] - 128.0 / 225.0).abs() < 1e-14);
    }

    #[test]
    fn polynomial_exactness() {
        // order-n rule integrates degree 2n-1 exactly
        let gl = GaussLegendre::new(8);
        let exact = 2.0 / 16.0 * (1.0f64 - (-1.0f64).powi(16));
        let _ = exact;
        let int = gl.integrate(-1.0, 1.0, &|x: f64| x.powi(15) + 3.0 * x.powi(14));
        let expected = 0.0 + 3.0 * 2.0 / 15.0;
        assert!((int - expected).abs() < 1e-14);
    }

    #[test]
    fn oscillatory_composite() {
        let gl = GaussLegendre::new(16);
        let int = gl.integrate_composite(0.0, 20.0, 16, &|x: f64| x.sin());
        assert!((int - (1.0 - 20.0f64.cos())).abs() < 1e-12);
    }
}
