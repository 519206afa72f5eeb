//! Oscillatory cosine transform behind the profile slope
//!
//! ```text
//! I(tau) = (1/pi) int_0^inf w^(-i beta) exp(-i g w^alpha) cos(w tau) dw,
//! beta = 2/eps, g = eps/alpha.
//! ```
//!
//! The integrand has unit modulus everywhere: it oscillates infinitely often
//! in `ln w` as `w -> 0` and converges only conditionally at infinity, where
//! the chirp `g w^alpha` takes over.
//!
//! * `[0, w_lo]` uses the exact moment `w_lo^(1 - i beta) / (1 - i beta)`.
//! * `[w_lo, cut]` is composite Simpson in a monotone phase variable
//!   `Theta(w) = (beta + 1) ln w + g w^alpha + tau_max w`, so every factor
//!   of the integrand (including `cos(w tau)` for `tau <= tau_max`) is
//!   resolved by `nodes_per_period` nodes per `2 pi` of phase. The nodes do
//!   not depend on `tau`; the products `weight * kernel` are cached and
//!   `cos(w tau)` is advanced along uniform `tau` blocks by complex rotation.
//! * `[cut, inf)` is split per exponential of `cos`. Each piece
//!   `exp(-i psi(w))`, `psi = beta ln w + g w^alpha -/+ w tau`, is integrated
//!   over half-periods of `psi` (Gauss–Legendre per panel), and the resulting
//!   alternating partial sums are Euler-averaged (repeated pairwise means,
//!   i.e. binomial weights).
//!
//! `cut` is at least `omega_max` and at least twice the stationary point of
//! `psi` for `tau_max`, so every tail panel lies on a monotone branch.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::QuadratureControls;

/// Lower end of the resolved region; below it the kernel is replaced by its
/// leading power.
const OMEGA_LO: f64 = 1e-9;
/// Gauss–Legendre nodes per tail half-period.
const TAIL_NODES: usize = 12;
/// Number of `tau` values advanced by rotation from one directly evaluated
/// start.
const BLOCK: usize = 64;

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration on
/// `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
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
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Kernel parameters shared by every evaluation.
#[derive(Debug, Clone, Copy)]
struct Kernel {
    alpha: f64,
    epsilon: f64,
    beta: f64,
    chirp: f64,
}

impl Kernel {
    fn new(alpha: f64, epsilon: f64) -> Self {
        Self { alpha, epsilon, beta: 2.0 / epsilon, chirp: epsilon / alpha }
    }

    /// Phase of `w^(-i beta) exp(-i g w^alpha)`, i.e. the kernel is `exp(-i theta)`.
    fn theta(&self, w: f64) -> f64 {
        self.beta * w.ln() + self.chirp * w.powf(self.alpha)
    }

    fn dtheta(&self, w: f64) -> f64 {
        self.beta / w + self.epsilon * w.powf(self.alpha - 1.0)
    }

    fn value(&self, w: f64) -> Complex64 {
        Complex64::from_polar(1.0, -self.theta(w))
    }

    /// Largest `w` with `theta'(w) = tau`, or 0 when `theta' > tau`
    /// everywhere.
    fn stationary_point(&self, tau: f64) -> f64 {
        let w_min = (self.beta / (self.epsilon * (self.alpha - 1.0))).powf(1.0 / self.alpha);
        if self.dtheta(w_min) >= tau {
            return 0.0;
        }
        let mut lo = w_min;
        let mut hi = (tau / self.epsilon).powf(1.0 / (self.alpha - 1.0)) + 1.0;
        while self.dtheta(hi) < tau {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.dtheta(mid) < tau {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-14 * hi {
                break;
            }
        }
        hi
    }
}

/// Solves `f(w) = target` for increasing `f` with derivative `df`, starting
/// from `w0` where `f(w0) <= target`. Newton steps are kept inside a bracket
/// that is widened until it contains the root.
fn solve_increasing(
    f: impl Fn(f64) -> f64,
    df: impl Fn(f64) -> f64,
    target: f64,
    w0: f64,
) -> f64 {
    let mut lo = w0;
    let mut hi = w0 + (target - f(w0)).max(0.0) / df(w0).max(1e-300) + w0.max(1e-12);
    while f(hi) < target {
        let width = hi - lo;
        lo = hi;
        hi += 2.0 * width;
    }
    let mut w = 0.5 * (lo + hi);
    for _ in 0..100 {
        let r = f(w) - target;
        if r < 0.0 {
            lo = w;
        } else {
            hi = w;
        }
        let d = df(w);
        let mut next = w - r / d;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - w).abs() <= 1e-15 * w.abs() || hi - lo <= 1e-15 * hi {
            return next;
        }
        w = next;
    }
    w
}

/// Cosine transform with cached main-region nodes, valid for
/// `|tau| <= tau_max`.
pub struct SlopeQuadrature {
    kernel: Kernel,
    tau_max: f64,
    cut: f64,
    nodes: Vec<f64>,
    weighted: Vec<Complex64>,
    head: Complex64,
    tail_panels: usize,
    gl: (Vec<f64>, Vec<f64>),
}

impl SlopeQuadrature {
    pub fn new(alpha: f64, epsilon: f64, quad: &QuadratureControls, tau_max: f64) -> Self {
        let kernel = Kernel::new(alpha, epsilon);
        let tau_max = tau_max.abs();
        let cut = quad.omega_max.max(2.0 * kernel.stationary_point(tau_max));

        let density = kernel.beta + 1.0;
        let phase = |w: f64| density * w.ln() + kernel.chirp * w.powf(alpha) + tau_max * w;
        let dphase = |w: f64| density / w + epsilon * w.powf(alpha - 1.0) + tau_max;
        let (p_lo, p_hi) = (phase(OMEGA_LO), phase(cut));
        let per_period = quad.nodes_per_period as f64 / (2.0 * PI);
        let mut panels = ((p_hi - p_lo) * per_period).ceil() as usize;
        panels = panels.max(2);
        panels += panels % 2;
        let dp = (p_hi - p_lo) / panels as f64;

        let mut nodes = Vec::with_capacity(panels + 1);
        let mut weighted = Vec::with_capacity(panels + 1);
        let mut w = OMEGA_LO;
        for k in 0..=panels {
            w = if k == 0 {
                OMEGA_LO
            } else if k == panels {
                cut
            } else {
                solve_increasing(phase, dphase, p_lo + k as f64 * dp, w)
            };
            let simpson = if k == 0 || k == panels {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            nodes.push(w);
            weighted.push(kernel.value(w) * (simpson * dp / 3.0 / dphase(w)));
        }
        let head = Complex64::new(1.0, -kernel.beta);
        let head = Complex64::from_polar(OMEGA_LO, -kernel.beta * OMEGA_LO.ln()) / head;

        Self {
            kernel,
            tau_max,
            cut,
            nodes,
            weighted,
            head,
            tail_panels: 2 * quad.tail_averaging_periods,
            gl: gauss_legendre(TAIL_NODES),
        }
    }

    /// Start of the Euler-averaged tail.
    pub fn cut(&self) -> f64 {
        self.cut
    }

    pub fn main_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// `int_cut^inf exp(-i psi(w)) dw` with `psi = theta - sign w tau`.
    fn tail_piece(&self, tau: f64, sign: f64) -> Complex64 {
        let k = self.kernel;
        let psi = |w: f64| k.theta(w) - sign * w * tau;
        let dpsi = |w: f64| k.dtheta(w) - sign * tau;
        let (gx, gw) = &self.gl;
        let p0 = psi(self.cut);
        let mut partial = Vec::with_capacity(self.tail_panels + 1);
        partial.push(Complex64::new(0.0, 0.0));
        let mut a = self.cut;
        let mut sum = Complex64::new(0.0, 0.0);
        for j in 1..=self.tail_panels {
            let b = solve_increasing(psi, dpsi, p0 + j as f64 * PI, a);
            let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
            let mut panel = Complex64::new(0.0, 0.0);
            for (x, wt) in gx.iter().zip(gw) {
                let w = mid + half * x;
                panel += Complex64::from_polar(*wt, -psi(w));
            }
            sum += panel * half;
            partial.push(sum);
            a = b;
        }
        euler_average(&partial)
    }

    fn tail(&self, tau: f64) -> Complex64 {
        0.5 * (self.tail_piece(tau, 1.0) + self.tail_piece(tau, -1.0))
    }

    /// `I(tau)` for a single value.
    pub fn eval(&self, tau: f64) -> Complex64 {
        let tau = tau.abs();
        let main: Complex64 =
            self.nodes.iter().zip(&self.weighted).map(|(w, a)| a * (w * tau).cos()).sum();
        (main + self.head + self.tail(tau)) / PI
    }

    /// `I` at every entry of `taus` (absolute values are used). Runs of
    /// equally spaced values share one rotation per node.
    pub fn eval_many(&self, taus: &[f64]) -> Vec<Complex64> {
        let abs: Vec<f64> = taus.iter().map(|t| t.abs()).collect();
        debug_assert!(abs.iter().all(|&t| t <= self.tau_max * (1.0 + 1e-12) + 1e-12));
        abs.par_chunks(BLOCK).flat_map_iter(|block| self.eval_block(block)).collect()
    }

    fn eval_block(&self, block: &[f64]) -> Vec<Complex64> {
        let mut out: Vec<Complex64> = block.iter().map(|&t| self.head + self.tail(t)).collect();
        let uniform = block.len() > 2 && {
            let d = block[1] - block[0];
            block.windows(2).all(|w| ((w[1] - w[0]) - d).abs() <= 1e-12 * (d.abs() + block[0].abs()))
        };
        if uniform {
            let t0 = block[0];
            let d = block[1] - block[0];
            for (w, a) in self.nodes.iter().zip(&self.weighted) {
                let step = Complex64::from_polar(1.0, w * d);
                let mut z = Complex64::from_polar(1.0, w * t0);
                for acc in out.iter_mut() {
                    *acc += a * z.re;
                    z *= step;
                }
            }
        } else {
            for (acc, &t) in out.iter_mut().zip(block) {
                *acc += self.nodes.iter().zip(&self.weighted).map(|(w, a)| a * (w * t).cos()).sum::<Complex64>();
            }
        }
        out.into_iter().map(|z| z / PI).collect()
    }
}

/// Repeated pairwise averaging of partial sums down to one value, which is
/// the binomially weighted mean `2^-n sum_j C(n, j) S_j`.
pub fn euler_average(partial: &[Complex64]) -> Complex64 {
    let mut level = partial.to_vec();
    while level.len() > 1 {
        level = level.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    }
    level[0]
}

/// Kernel `exp(-i theta(w))` of the transform, exposed for reference
/// computations.
pub fn slope_kernel(alpha: f64, epsilon: f64, omega: f64) -> Complex64 {
    Kernel::new(alpha, epsilon).value(omega)
}
