//! Quadrature rules: Gauss–Legendre panels for smooth integrands and
//! double-exponential rules for endpoint singularities and half-lines.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

/// Gauss–Legendre nodes and weights on [−1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// Matrix S with Σ_j S[k][j] f(x_j) = ∫_{−1}^{x_k} f, exact for polynomials
    /// of degree below the node count.
    pub fn cumulative_matrix(&self) -> Vec<Vec<f64>> {
        let n = self.nodes.len();
        let p = |k: usize, x: f64| if k == 0 { 1.0 } else { legendre(k, x).0 };
        self.nodes
            .iter()
            .map(|&xk| {
                self.nodes
                    .iter()
                    .zip(&self.weights)
                    .map(|(&xj, &wj)| {
                        let tail: f64 = (1..n)
                            .map(|l| p(l, xj) * (p(l + 1, xk) - p(l - 1, xk)))
                            .sum();
                        wj * 0.5 * (xk + 1.0 + tail)
                    })
                    .collect()
            })
            .collect()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let h = 0.5 * (b - a);
        let c = 0.5 * (b + a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(c + h * x))
            .sum::<f64>()
            * h
    }
}

pub(crate) fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    (p1, n as f64 * (x * p1 - p0) / (x * x - 1.0))
}

/// Tanh-sinh rule on [a, b]; tolerates integrable endpoint singularities.
/// The integrand receives (x, b − x) so that it can avoid cancellation at b.
pub fn tanh_sinh<F: FnMut(f64, f64) -> C64>(a: f64, b: f64, tol: f64, mut f: F) -> C64 {
    let c = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut h = 1.0;
    let mut prev: Option<C64> = None;
    let mut sum = C64::new(0.0, 0.0);
    let eval = |t: f64, f: &mut F| -> C64 {
        let s = 0.5 * PI * t.sinh();
        let u = 1.0 / (s.exp() * s.cosh()); // 1 − tanh(s), computed without cancellation
        let w = 0.5 * PI * t.cosh() / (s.cosh() * s.cosh());
        if w == 0.0 || u == 0.0 {
            return C64::new(0.0, 0.0);
        }
        let right = f(b - half * u, half * u);
        let left = f(a + half * u, b - a - half * u);
        (right + left) * w
    };
    for level in 0..12 {
        let step = if level == 0 { h } else { 2.0 * h };
        let mut t = if level == 0 { 0.0 } else { h };
        let mut add = C64::new(0.0, 0.0);
        if level == 0 {
            add += f(c, b - c) * (0.5 * PI);
            t = h;
        }
        while t < 6.5 {
            add += eval(t, &mut f);
            t += step;
        }
        sum += add;
        let est = sum * h * half;
        if let Some(p) = prev {
            if (est - p).norm() <= tol * est.norm().max(1e-300) {
                return est;
            }
        }
        prev = Some(est);
        h *= 0.5;
    }
    prev.unwrap()
}

/// Exp-sinh rule on [0, ∞).
pub fn exp_sinh<F: FnMut(f64) -> C64>(tol: f64, mut f: F) -> C64 {
    let mut h = 1.0;
    let mut prev: Option<C64> = None;
    let mut sum = C64::new(0.0, 0.0);
    for level in 0..12 {
        let step = if level == 0 { h } else { 2.0 * h };
        let start = if level == 0 { 0.0 } else { h };
        let mut add = C64::new(0.0, 0.0);
        let mut k = 0;
        loop {
            let t = start + k as f64 * step;
            if t > 7.0 {
                break;
            }
            for tt in if t == 0.0 { vec![0.0] } else { vec![t, -t] } {
                let s = 0.5 * PI * tt.sinh();
                let x = s.exp();
                let w = 0.5 * PI * tt.cosh() * x;
                if x.is_finite() && w.is_finite() && x > 0.0 {
                    let v = f(x);
                    if v.is_finite() {
                        add += v * w;
                    }
                }
            }
            k += 1;
        }
        sum += add;
        let est = sum * h;
        if let Some(p) = prev {
            if (est - p).norm() <= tol * est.norm().max(1e-300) {
                return est;
            }
        }
        prev = Some(est);
        h *= 0.5;
    }
    prev.unwrap()
}
