//! The sinh-Gordon ODE `u'' + e^{2u} − 4λ²e^{−2u} = 0` and the minimal
//! immersions `Ψ_{a,b}` of the round sphere built from its solutions.
//!
//! The conserved quantity of the ODE is `(u')² + e^{2u} + 4λ²e^{−2u}`. Along
//! an orbit `e^{2u}` oscillates between the roots `b² ≤ a²` of
//! `X² − E X + 4λ² = 0`, so `E = a² + b²` and `λ² = a²b²/4`.
//!
//! `Ψ_{a,b}` is evaluated through the angle `ψ` with `e^{2u} = b² + (a² − b²) sin²ψ`,
//! which satisfies `ψ' = e^u`. Its moduli are `|sin ψ|` and `|cos ψ|`, the
//! square roots `√((e^{2u} − b²)/(a² − b²))` and `√((a² − e^{2u})/(a² − b²))`,
//! but `ψ` keeps the surface smooth where one of the coordinates vanishes.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::geometry::{from_complex, Vec4};
use crate::surface::{Domain, Jet, ParamSurface};

/// Energy-drift tolerance per unit length for the step-halving control.
pub const STEP_TOL_PER_LENGTH: f64 = 1e-10;
/// `P(e^{2u})` below `−P_ALARM` (relative to `max(1, a⁴)`) is an error.
pub const P_ALARM: f64 = 1e-8;
const MAX_HALVINGS: usize = 12;

// fourth-order symmetric composition of the leapfrog step
const CBRT2: f64 = 1.259_921_049_894_873_2;
const W1: f64 = 1.0 / (2.0 - CBRT2);
const W0: f64 = -CBRT2 * W1;
const DRIFT: [f64; 4] = [W1 / 2.0, (W0 + W1) / 2.0, (W0 + W1) / 2.0, W1 / 2.0];
const KICK: [f64; 3] = [W1, W0, W1];

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SinhGordonSolution {
    pub lambda_hopf: f64,
    pub energy: f64,
    pub a: f64,
    pub b: f64,
    pub step: f64,
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    pub du: Vec<f64>,
    /// Angle `ψ` with `ψ' = e^u`.
    pub psi: Vec<f64>,
    pub big_f: Vec<f64>,
    pub big_g: Vec<f64>,
}

/// Full state at one abscissa.
#[derive(Debug, Clone, Copy)]
pub struct SgState {
    pub u: f64,
    pub du: f64,
    pub ddu: f64,
    pub psi: f64,
    pub big_f: f64,
    pub big_g: f64,
    pub df: f64,
    pub dg: f64,
    pub ddf: f64,
    pub ddg: f64,
}

fn force(lambda: f64, u: f64) -> f64 {
    -((2.0 * u).exp() - 4.0 * lambda * lambda * (-2.0 * u).exp())
}

fn yoshida_step(lambda: f64, mut u: f64, mut du: f64, h: f64) -> (f64, f64) {
    for k in 0..3 {
        u += DRIFT[k] * h * du;
        du += KICK[k] * h * force(lambda, u);
    }
    u += DRIFT[3] * h * du;
    (u, du)
}

fn integrate(lambda: f64, u0: f64, du0: f64, h: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut u = Vec::with_capacity(n + 1);
    let mut du = Vec::with_capacity(n + 1);
    let (mut a, mut b) = (u0, du0);
    u.push(a);
    du.push(b);
    for _ in 0..n {
        (a, b) = yoshida_step(lambda, a, b, h);
        u.push(a);
        du.push(b);
    }
    (u, du)
}

/// Cumulative composite Simpson integral on a uniform grid.
pub fn cumulative_simpson(f: &[f64], h: f64) -> Vec<f64> {
    let mut out = vec![0.0; f.len()];
    let mut k = 1;
    while k < f.len() {
        if k + 1 < f.len() {
            // partial interval of a parabola through three nodes
            out[k] = out[k - 1] + h * (5.0 * f[k - 1] + 8.0 * f[k] - f[k + 1]) / 12.0;
            out[k + 1] = out[k - 1] + h * (f[k - 1] + 4.0 * f[k] + f[k + 1]) / 3.0;
        } else {
            out[k] = out[k - 1] + h * (-f[k - 2] + 8.0 * f[k - 1] + 5.0 * f[k]) / 12.0;
        }
        k += 2;
    }
    out
}

/// Turning values `(b², a²)` of `e^{2u}` for energy `E` and Hopf coefficient `λ`.
pub fn turning_values(lambda: f64, energy: f64) -> Result<(f64, f64)> {
    if lambda == 0.0 || !lambda.is_finite() {
        return domain("λ = 0 admits no bounded sinh-Gordon orbit");
    }
    let min = 4.0 * lambda.abs();
    if !(energy >= min * (1.0 - 1e-14)) {
        return domain(format!("energy {energy} is below the potential minimum {min}"));
    }
    let disc = (energy * energy - 16.0 * lambda * lambda).max(0.0).sqrt();
    Ok(((energy - disc) / 2.0, (energy + disc) / 2.0))
}

pub fn solve_sinh_gordon(lambda_hopf: f64, energy: f64, x_span: (f64, f64), step: f64) -> Result<SinhGordonSolution> {
    let (b2, a2) = turning_values(lambda_hopf, energy)?;
    let len = x_span.1 - x_span.0;
    if !(len > 0.0) || !(step > 0.0) {
        return domain("x_span must be increasing and step positive");
    }
    // start at the minimum of e^{2u}, where u' = 0
    let u0 = 0.5 * b2.ln();
    let tol = STEP_TOL_PER_LENGTH * len.max(1.0);
    let mut n = ((len / step).ceil() as usize).max(2);
    n += n % 2;
    let mut h = len / n as f64;
    let (mut u, mut du) = integrate(lambda_hopf, u0, 0.0, h, n);
    let mut accepted = false;
    for _ in 0..MAX_HALVINGS {
        let (uf, duf) = integrate(lambda_hopf, u0, 0.0, h / 2.0, 2 * n);
        let diff = (0..=n).map(|i| (uf[2 * i] - u[i]).abs()).fold(0.0, f64::max);
        u = uf;
        du = duf;
        n *= 2;
        h /= 2.0;
        if diff <= tol {
            accepted = true;
            break;
        }
    }
    if !accepted {
        return domain("step-halving did not reach the requested tolerance");
    }
    let x: Vec<f64> = (0..=n).map(|i| x_span.0 + h * i as f64).collect();
    let a = a2.sqrt();
    let b = b2.sqrt();
    let scale = a2.max(1.0).powi(2);

    let mut df = Vec::with_capacity(n + 1);
    let mut dg = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let (f, g) = phase_rates(a2, b2, u[i], du[i], scale)?;
        df.push(f);
        dg.push(g);
    }
    let eu: Vec<f64> = u.iter().map(|v| v.exp()).collect();
    let psi = cumulative_simpson(&eu, h);
    Ok(SinhGordonSolution {
        lambda_hopf,
        energy,
        a,
        b,
        step: h,
        x,
        u,
        du,
        psi,
        big_f: cumulative_simpson(&df, h),
        big_g: cumulative_simpson(&dg, h),
    })
}

/// `P(e^{2u}) = (a² − e^{2u})(e^{2u} − b²) − e^{2u}u'²`.
pub fn p_polynomial(a2: f64, b2: f64, u: f64, du: f64) -> f64 {
    let x = (2.0 * u).exp();
    (a2 - x) * (x - b2) - x * du * du
}

/// Integrands `√P/(e^{2u} − b²)` and `√P/(a² − e^{2u})`. Values of `P` inside
/// the alarm band are rounding noise and count as zero.
fn phase_rates(a2: f64, b2: f64, u: f64, du: f64, scale: f64) -> Result<(f64, f64)> {
    let p = p_polynomial(a2, b2, u, du);
    if p < -P_ALARM * scale {
        return Err(Error::InconsistentSolution(format!("P(e^{{2u}}) = {p:e} is negative")));
    }
    if p <= P_ALARM * scale {
        return Ok((0.0, 0.0));
    }
    let x = (2.0 * u).exp();
    Ok((p.sqrt() / (x - b2), p.sqrt() / (a2 - x)))
}

impl SinhGordonSolution {
    pub fn first_integral(&self, i: usize) -> f64 {
        let l2 = self.lambda_hopf * self.lambda_hopf;
        self.du[i].powi(2) + (2.0 * self.u[i]).exp() + 4.0 * l2 * (-2.0 * self.u[i]).exp()
    }

    pub fn max_energy_drift(&self) -> f64 {
        (0..self.u.len()).map(|i| (self.first_integral(i) - self.energy).abs()).fold(0.0, f64::max)
    }

    pub fn x_span(&self) -> (f64, f64) {
        (self.x[0], *self.x.last().expect("nonempty grid"))
    }

    /// Mean distance between successive minima of `u`, if at least two are sampled.
    pub fn period(&self) -> Option<f64> {
        let mut minima = Vec::new();
        for i in 1..self.du.len() {
            let (d0, d1) = (self.du[i - 1], self.du[i]);
            if d0 < 0.0 && d1 >= 0.0 {
                let frac = d0 / (d0 - d1);
                minima.push(self.x[i - 1] + frac * self.step);
            }
        }
        // the orbit starts exactly at a minimum
        if self.du[0] == 0.0 && self.du.get(1).is_some_and(|&d| d > 0.0) {
            minima.insert(0, self.x[0]);
        }
        if minima.len() < 2 {
            return None;
        }
        Some((minima[minima.len() - 1] - minima[0]) / (minima.len() - 1) as f64)
    }

    /// State at an arbitrary abscissa, by a partial step from the nearest node below.
    pub fn state_at(&self, x: f64) -> SgState {
        let (x0, x1) = self.x_span();
        let x = x.clamp(x0, x1);
        let k = (((x - x0) / self.step).floor() as usize).min(self.x.len() - 1);
        let dx = x - self.x[k];
        let lam = self.lambda_hopf;
        let (a2, b2) = (self.a * self.a, self.b * self.b);
        let scale = a2.max(1.0).powi(2);
        let (um, dum) = yoshida_step(lam, self.u[k], self.du[k], dx / 2.0);
        let (u, du) = yoshida_step(lam, self.u[k], self.du[k], dx);
        let rates = |u, du| phase_rates(a2, b2, u, du, scale).unwrap_or((0.0, 0.0));
        let (f0, g0) = rates(self.u[k], self.du[k]);
        let (fm, gm) = rates(um, dum);
        let (f1, g1) = rates(u, du);
        let simpson = |a: f64, m: f64, b: f64| dx * (a + 4.0 * m + b) / 6.0;
        let psi = self.psi[k] + simpson(self.u[k].exp(), um.exp(), u.exp());
        let big_f = self.big_f[k] + simpson(f0, fm, f1);
        let big_g = self.big_g[k] + simpson(g0, gm, g1);
        let ddu = force(lam, u);
        let (ddf, ddg) = phase_accelerations(a2, b2, u, du, ddu, scale);
        SgState { u, du, ddu, psi, big_f, big_g, df: f1, dg: g1, ddf, ddg }
    }
}

fn phase_accelerations(a2: f64, b2: f64, u: f64, du: f64, ddu: f64, scale: f64) -> (f64, f64) {
    let p = p_polynomial(a2, b2, u, du);
    if p <= P_ALARM * scale {
        return (0.0, 0.0);
    }
    let x = (2.0 * u).exp();
    let dx = 2.0 * x * du;
    let dp = dx * (a2 + b2 - 2.0 * x) - dx * du * du - 2.0 * x * du * ddu;
    let sp = p.sqrt();
    let ddf = dp / (2.0 * sp * (x - b2)) - sp * dx / (x - b2).powi(2);
    let ddg = dp / (2.0 * sp * (a2 - x)) + sp * dx / (a2 - x).powi(2);
    (ddf, ddg)
}

/// The immersion `Ψ_{a,b}(x, y)` in conformal coordinates.
#[derive(Debug, Clone)]
pub struct PsiSurface {
    a: f64,
    b: f64,
    sol: SinhGordonSolution,
}

/// Relative tolerance for matching `(a, b)` against the solution's `λ` and `E`.
const PARAM_MATCH_TOL: f64 = 1e-9;

pub fn psi_ab(a: f64, b: f64, sol: SinhGordonSolution) -> Result<PsiSurface> {
    if !(a * a > b * b && b * b >= 0.0) {
        return domain(format!("Ψ_(a,b) needs a² > b² ≥ 0, got a = {a}, b = {b}"));
    }
    let l2 = a * a * b * b / 4.0;
    let e = a * a + b * b;
    let scale = e.max(1.0);
    if (sol.lambda_hopf.powi(2) - l2).abs() > PARAM_MATCH_TOL * scale * scale
        || (sol.energy - e).abs() > PARAM_MATCH_TOL * scale
    {
        return domain("solution does not satisfy λ² = a²b²/4 and E = a² + b²");
    }
    let (a2, b2) = (a * a, b * b);
    let pscale = a2.max(1.0).powi(2);
    for i in 0..sol.u.len() {
        let p = p_polynomial(a2, b2, sol.u[i], sol.du[i]);
        if p < -P_ALARM * pscale {
            return Err(Error::InconsistentSolution(format!("P = {p:e} at x = {}", sol.x[i])));
        }
    }
    Ok(PsiSurface { a: a.abs(), b: b.abs(), sol })
}

impl PsiSurface {
    pub fn solution(&self) -> &SinhGordonSolution {
        &self.sol
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }
}

impl ParamSurface for PsiSurface {
    fn eval(&self, x: f64, y: f64) -> Vec4 {
        self.jet(x, y).p
    }

    fn domain(&self) -> Domain {
        let period = 2.0 * std::f64::consts::PI / self.b.max(1e-300);
        Domain { s: self.sol.x_span(), t: (0.0, period), periodic_s: false, periodic_t: false }
    }

    fn jet(&self, x: f64, y: f64) -> Jet {
        let st = self.sol.state_at(x);
        let (a, b) = (self.a, self.b);
        let (sp, cp) = st.psi.sin_cos();
        let dpsi = st.u.exp();
        let ddpsi = st.du * dpsi;
        let (d1, dd1) = (b * st.df, b * st.ddf);
        let (d2, dd2) = (a * st.dg, a * st.ddg);
        let i = Complex64::i();
        let e1 = Complex64::from_polar(1.0, b * st.big_f + a * y);
        let e2 = Complex64::from_polar(1.0, a * st.big_g + b * y);

        let z = e1 * sp;
        let zx = e1 * (dpsi * cp + i * d1 * sp);
        let zxx = e1
            * (ddpsi * cp - dpsi * dpsi * sp + i * dd1 * sp + 2.0 * i * d1 * dpsi * cp - d1 * d1 * sp);
        let w = e2 * cp;
        let wx = e2 * (-dpsi * sp + i * d2 * cp);
        let wxx = e2
            * (-ddpsi * sp - dpsi * dpsi * cp + i * dd2 * cp - 2.0 * i * d2 * dpsi * sp - d2 * d2 * cp);
        Jet {
            p: from_complex(z, w),
            ds: from_complex(zx, wx),
            dt: from_complex(i * a * z, i * b * w),
            dss: from_complex(zxx, wxx),
            dst: from_complex(i * a * zx, i * b * wx),
            dtt: from_complex(-a * a * z, -b * b * w),
        }
    }
}

/// Initial angle for an orbit starting at `e^{2u} = X₀` with the sign of `u'`.
pub fn initial_angle(a2: f64, b2: f64, x0: f64, du0: f64) -> f64 {
    let s = ((x0 - b2) / (a2 - b2)).clamp(0.0, 1.0).sqrt().asin();
    if du0 < 0.0 {
        std::f64::consts::PI - s
    } else {
        s.min(FRAC_PI_2)
    }
}
