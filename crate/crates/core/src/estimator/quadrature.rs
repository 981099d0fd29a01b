//! Gauss–Legendre nodes and a product rule on the Bloch sphere.

use crate::exec::{Exec, NeumaierSum};
use crate::linalg::PureQubitState;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`,
/// exact for polynomials of degree `2n − 1`. Nodes are ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi's initial guess, refined by Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
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
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    (p1, nf * (x * p1 - p0) / (x * x - 1.0))
}

/// A quadrature node: a pure qubit state on the Bloch sphere and its weight.
#[derive(Debug, Clone, Copy)]
pub struct SphereNode {
    pub state: PureQubitState,
    pub weight: f64,
}

/// Product rule for the normalized Haar measure on the Bloch sphere:
/// Gauss–Legendre in `cos θ` times the uniform trapezoid rule in `φ`.
///
/// Exact for integrands whose polar part is a polynomial of degree
/// `≤ 2·polar_nodes − 1` in `cos θ` and whose azimuthal frequencies are
/// below `azimuth_nodes`. Weights sum to 1.
#[derive(Debug, Clone)]
pub struct SphereRule {
    polar_nodes: usize,
    azimuth_nodes: usize,
    nodes: Vec<SphereNode>,
}

impl SphereRule {
    pub fn new(polar_nodes: usize, azimuth_nodes: usize) -> Self {
        assert!(polar_nodes >= 1 && azimuth_nodes >= 1);
        let (xs, ws) = gauss_legendre(polar_nodes);
        let tau = std::f64::consts::TAU;
        let mut nodes = Vec::with_capacity(polar_nodes * azimuth_nodes);
        for (x, w) in xs.iter().zip(&ws) {
            let theta = x.clamp(-1.0, 1.0).acos();
            for j in 0..azimuth_nodes {
                let phi = tau * j as f64 / azimuth_nodes as f64;
                nodes.push(SphereNode {
                    state: PureQubitState::from_angles(theta, phi),
                    weight: 0.5 * w / azimuth_nodes as f64,
                });
            }
        }
        Self {
            polar_nodes,
            azimuth_nodes,
            nodes,
        }
    }

    /// The rule sized for the `M`-copy estimation integrands (polynomials
    /// of degree `M + 1` on the sphere): `⌈(2M+4)/2⌉ + 2` polar nodes and
    /// `2M + 5` azimuthal nodes.
    pub fn for_copies(m: usize) -> Self {
        Self::new((2 * m + 4).div_ceil(2) + 2, 2 * m + 5)
    }

    /// The same rule with both node counts doubled.
    pub fn refined(&self) -> Self {
        Self::new(2 * self.polar_nodes, 2 * self.azimuth_nodes)
    }

    pub fn polar_nodes(&self) -> usize {
        self.polar_nodes
    }

    pub fn azimuth_nodes(&self) -> usize {
        self.azimuth_nodes
    }

    pub fn nodes(&self) -> &[SphereNode] {
        &self.nodes
    }

    /// `∫ f dμ` for a vector-valued integrand with `K` components. Node
    /// values may be computed in parallel; the sum is always taken
    /// sequentially in node order with compensation.
    pub fn integrate<const K: usize, F>(&self, exec: Exec, f: F) -> [f64; K]
    where
        F: Fn(&PureQubitState) -> [f64; K] + Sync + Send,
    {
        let values = exec.map_slice(&self.nodes, |node| {
            let v = f(&node.state);
            v.map(|x| x * node.weight)
        });
        let mut sums = [NeumaierSum::new(); K];
        for v in &values {
            for (s, x) in sums.iter_mut().zip(v) {
                s.add(*x);
            }
        }
        sums.map(|s| s.value())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn two_point_rule() {
        let (x, w) = gauss_legendre(2);
        let r = 1.0 / 3f64.sqrt();
        assert_abs_diff_eq!(x[0], -r, epsilon = 1e-15);
        assert_abs_diff_eq!(x[1], r, epsilon = 1e-15);
        assert_abs_diff_eq!(w[0], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn rules_integrate_monomials_exactly() {
        for n in 1..=30 {
            let (x, w) = gauss_legendre(n);
            assert_abs_diff_eq!(w.iter().sum::<f64>(), 2.0, epsilon = 1e-13);
            for deg in 0..(2 * n) {
                let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 {
                    0.0
                } else {
                    2.0 / (deg as f64 + 1.0)
                };
                assert!(
                    (got - exact).abs() < 1e-13,
                    "n={n} deg={deg}: {got} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn sphere_rule_moments() {
        let rule = SphereRule::for_copies(3);
        let [one, z2, x2y2, x] = rule.integrate(Exec::Sequential, |s| {
            let b = s.bloch();
            [1.0, b.z * b.z, b.x * b.x * b.y * b.y, b.x]
        });
        assert_abs_diff_eq!(one, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(z2, 1.0 / 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(x2y2, 1.0 / 15.0, epsilon = 1e-14);
        assert_abs_diff_eq!(x, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn parallel_and_sequential_sums_agree() {
        let rule = SphereRule::for_copies(8);
        let f = |s: &PureQubitState| {
            let b = s.bloch();
            [(1.0 + b.x).powi(9), b.y * b.z]
        };
        let a = rule.integrate(Exec::Sequential, f);
        let b = rule.integrate(Exec::Parallel, f);
        assert!((a[0] - b[0]).abs() < 1e-13 && (a[1] - b[1]).abs() < 1e-13);
    }
}
