//! Reference values computed independently of the library: special
//! functions, adaptive quadrature and contour-deformed transforms.
#![allow(dead_code)]

use num_complex::Complex64;
use std::f64::consts::PI;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Lanczos approximation (g = 7) of the complex gamma function, with the
/// reflection formula for `Re z < 1/2`.
pub fn gamma(z: Complex64) -> Complex64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if z.re < 0.5 {
        return PI / ((PI * z).sin() * gamma(1.0 - z));
    }
    let z = z - 1.0;
    let mut x = c(COEF[0], 0.0);
    for (i, &k) in COEF.iter().enumerate().skip(1) {
        x += k / (z + i as f64);
    }
    let t = z + G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn legendre_rule(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

fn gl(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, rule: &[(f64, f64)]) -> Complex64 {
    let (m, h) = (0.5 * (a + b), 0.5 * (b - a));
    rule.iter().map(|&(x, w)| f(m + h * x) * w).sum::<Complex64>() * h
}

/// Adaptive 20-point Gauss–Legendre with interval bisection; `tol` bounds
/// the change on each accepted panel.
pub fn integrate(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, tol: f64) -> Complex64 {
    let rule = legendre_rule(20);
    let whole = gl(f, a, b, &rule);
    adapt(f, a, b, whole, tol, &rule, 0)
}

fn adapt(
    f: &dyn Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    whole: Complex64,
    tol: f64,
    rule: &[(f64, f64)],
    depth: usize,
) -> Complex64 {
    let m = 0.5 * (a + b);
    let left = gl(f, a, m, rule);
    let right = gl(f, m, b, rule);
    if (left + right - whole).norm() <= tol || depth > 40 {
        return left + right;
    }
    adapt(f, a, m, left, tol, rule, depth + 1) + adapt(f, m, b, right, tol, rule, depth + 1)
}

/// Kernel parameters `w^(-i beta) exp(-i g w^alpha)`.
#[derive(Clone, Copy)]
pub struct Kernel {
    pub alpha: f64,
    pub epsilon: f64,
}

impl Kernel {
    pub fn beta(&self) -> f64 {
        2.0 / self.epsilon
    }

    pub fn chirp(&self) -> f64 {
        self.epsilon / self.alpha
    }

    /// Kernel at complex `w` (principal branch).
    pub fn at(&self, w: Complex64) -> Complex64 {
        (-c(0.0, self.beta()) * w.ln() - c(0.0, self.chirp()) * w.powf(self.alpha)).exp()
    }

    /// A point past which the phase of `K(w) e^(i w tau)` increases
    /// monotonically.
    pub fn past_stationary(&self, tau: f64) -> f64 {
        2.0 * (tau / self.epsilon).powf(1.0 / (self.alpha - 1.0)).max(1.0)
    }

    /// `int_start^inf K(w) e^(i s w tau) m(w) dw` along the ray
    /// `w = start + r e^(-i phi)`, where the integrand decays.
    fn ray(&self, start: f64, s: f64, tau: f64, weight: &dyn Fn(Complex64) -> Complex64) -> Complex64 {
        let phi = PI / (2.0 * self.alpha);
        let dir = Complex64::from_polar(1.0, -phi);
        let f = |r: f64| {
            let w = start + r * dir;
            self.at(w) * (c(0.0, s * tau) * w).exp() * weight(w) * dir
        };
        // geometric panels out to where the integrand is negligible
        let mut total = c(0.0, 0.0);
        let (mut a, mut len) = (0.0, 0.25);
        for _ in 0..200 {
            let piece = integrate(&f, a, a + len, 1e-15);
            total += piece;
            if piece.norm() < 1e-17 && a > 1.0 {
                break;
            }
            a += len;
            len *= 1.3;
        }
        total
    }

    /// `(1/pi) int_0^inf K(w) cos(w tau) dw`.
    pub fn slope(&self, tau: f64) -> Complex64 {
        let tau = tau.abs();
        let one = |_: Complex64| c(1.0, 0.0);
        // [0, 1] in the log variable, with the exact head below 1e-12.
        let beta = self.beta();
        let head = Complex64::from_polar(1e-12, -beta * 1e-12f64.ln()) / c(1.0, -beta);
        let log_part = integrate(
            &|s: f64| {
                let w = s.exp();
                self.at(c(w, 0.0)) * (w * tau).cos() * w
            },
            1e-12f64.ln(),
            0.0,
            1e-15,
        );
        // e^(-i w tau): decays along the ray from w = 1.
        let minus = self.ray(1.0, -1.0, tau, &one);
        // e^(+i w tau): real segment past the stationary point, then the ray.
        let r = self.past_stationary(tau);
        let segment = integrate(&|w: f64| self.at(c(w, 0.0)) * c(0.0, w * tau).exp(), 1.0, r, 1e-14);
        let plus = segment + self.ray(r, 1.0, tau, &one);
        (head + log_part + 0.5 * (minus + plus)) / PI
    }

    /// `phi(v) = (1/pi) int_0^inf K(w) sin(w v) / w dw` (amplitude `i`).
    pub fn profile(&self, v: f64) -> Complex64 {
        let sign = v.signum();
        let v = v.abs();
        let inv = |w: Complex64| 1.0 / w;
        let log_part = integrate(
            &|s: f64| {
                let w = s.exp();
                self.at(c(w, 0.0)) * (w * v).sin()
            },
            -40.0,
            0.0,
            1e-15,
        );
        let minus = self.ray(1.0, -1.0, v, &inv);
        let r = self.past_stationary(v);
        let segment = integrate(&|w: f64| self.at(c(w, 0.0)) * c(0.0, w * v).exp() / w, 1.0, r, 1e-14);
        let plus = segment + self.ray(r, 1.0, v, &inv);
        sign * (log_part + (plus - minus) / c(0.0, 2.0)) / PI
    }
}

/// Riesz derivative of `exp(-x^2)`:
/// `-(1/pi) int_0^inf k^alpha sqrt(pi) exp(-k^2/4) cos(k x) dk`.
pub fn riesz_gaussian(alpha: f64, x: f64) -> f64 {
    let f = |k: f64| c(k.powf(alpha) * PI.sqrt() * (-k * k / 4.0).exp() * (k * x).cos(), 0.0);
    -integrate(&f, 0.0, 20.0, 1e-14).re / PI
}
