//! Parametrized surface patches `(s, t) ↦ S³` with derivative access.

use serde::{Deserialize, Serialize};

use crate::geometry::Vec4;

/// Step for finite-difference derivatives when a surface has no closed form.
pub const SURFACE_FD_STEP: f64 = 1e-4;

/// Position together with first and second partial derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub p: Vec4,
    pub ds: Vec4,
    pub dt: Vec4,
    pub dss: Vec4,
    pub dst: Vec4,
    pub dtt: Vec4,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub s: (f64, f64),
    pub t: (f64, f64),
    pub periodic_s: bool,
    pub periodic_t: bool,
}

impl Domain {
    pub fn rect(s: (f64, f64), t: (f64, f64)) -> Self {
        Self { s, t, periodic_s: false, periodic_t: false }
    }

    /// `n × n` grid of parameters strictly inside the rectangle.
    pub fn interior_grid(&self, n: usize) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            let s = self.s.0 + (self.s.1 - self.s.0) * (i as f64 + 0.5) / n as f64;
            for j in 0..n {
                let t = self.t.0 + (self.t.1 - self.t.0) * (j as f64 + 0.5) / n as f64;
                out.push((s, t));
            }
        }
        out
    }
}

pub trait ParamSurface: Send + Sync {
    fn eval(&self, s: f64, t: f64) -> Vec4;

    fn domain(&self) -> Domain;

    /// Derivatives up to second order. The default uses central differences
    /// with one Richardson extrapolation step.
    fn jet(&self, s: f64, t: f64) -> Jet {
        fd_jet(|s, t| self.eval(s, t), s, t, SURFACE_FD_STEP)
    }
}

impl<S: ParamSurface + ?Sized> ParamSurface for Box<S> {
    fn eval(&self, s: f64, t: f64) -> Vec4 {
        (**self).eval(s, t)
    }
    fn domain(&self) -> Domain {
        (**self).domain()
    }
    fn jet(&self, s: f64, t: f64) -> Jet {
        (**self).jet(s, t)
    }
}

pub fn fd_jet(f: impl Fn(f64, f64) -> Vec4, s: f64, t: f64, h: f64) -> Jet {
    let p = f(s, t);
    let first = |h: f64| {
        (
            (f(s + h, t) - f(s - h, t)) / (2.0 * h),
            (f(s, t + h) - f(s, t - h)) / (2.0 * h),
        )
    };
    let second = |h: f64| {
        let h2 = h * h;
        (
            (f(s + h, t) - p * 2.0 + f(s - h, t)) / h2,
            (f(s + h, t + h) - f(s + h, t - h) - f(s - h, t + h) + f(s - h, t - h)) / (4.0 * h2),
            (f(s, t + h) - p * 2.0 + f(s, t - h)) / h2,
        )
    };
    let rich = |fine: Vec4, coarse: Vec4| (fine * 4.0 - coarse) / 3.0;
    let (ds1, dt1) = first(h);
    let (ds2, dt2) = first(h / 2.0);
    let (ss1, st1, tt1) = second(h);
    let (ss2, st2, tt2) = second(h / 2.0);
    Jet {
        p,
        ds: rich(ds2, ds1),
        dt: rich(dt2, dt1),
        dss: rich(ss2, ss1),
        dst: rich(st2, st1),
        dtt: rich(tt2, tt1),
    }
}

/// A surface given by a closure, differentiated numerically.
pub struct FnSurface<F> {
    f: F,
    domain: Domain,
}

impl<F> FnSurface<F>
where
    F: Fn(f64, f64) -> Vec4 + Send + Sync,
{
    pub fn new(domain: Domain, f: F) -> Self {
        Self { f, domain }
    }
}

impl<F> ParamSurface for FnSurface<F>
where
    F: Fn(f64, f64) -> Vec4 + Send + Sync,
{
    fn eval(&self, s: f64, t: f64) -> Vec4 {
        (self.f)(s, t)
    }
    fn domain(&self) -> Domain {
        self.domain
    }
}

/// A surface moved by an isometry.
pub struct Transformed<S> {
    pub surface: S,
    pub matrix: crate::geometry::Mat4,
}

impl<S: ParamSurface> ParamSurface for Transformed<S> {
    fn eval(&self, s: f64, t: f64) -> Vec4 {
        self.matrix * self.surface.eval(s, t)
    }
    fn domain(&self) -> Domain {
        self.surface.domain()
    }
    fn jet(&self, s: f64, t: f64) -> Jet {
        let j = self.surface.jet(s, t);
        let m = &self.matrix;
        Jet { p: m * j.p, ds: m * j.ds, dt: m * j.dt, dss: m * j.dss, dst: m * j.dst, dtt: m * j.dtt }
    }
}
