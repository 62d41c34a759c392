//! Independent reference computations for the integration tests.
//!
//! Nothing here calls the library's geometry: the Berger sphere is realised
//! as the unit sphere inside `ℝ⁴` with the ambient metric
//! `G(x) = (4/κ)(I + c (Jx)(Jx)ᵀ)`, `c = 4τ²/κ − 1`, whose restriction to
//! `TS³` is the Berger metric. Its Christoffel symbols are closed-form, and
//! for a vector `N` tangent to `S³` the Gauss formula gives
//! `⟨∇^{S³}_X Y, N⟩ = ⟨∇^G_X Y, N⟩`.

#![allow(dead_code)]

use std::collections::HashMap;

use nalgebra::{Matrix4, Vector4};

pub type V4 = Vector4<f64>;

/// Multiplication by `i` on `(z, w)` in the layout `[Re z, Im z, Re w, Im w]`.
pub fn j(x: &V4) -> V4 {
    V4::new(-x[1], x[0], -x[3], x[2])
}

#[derive(Debug, Clone, Copy)]
pub struct Ambient {
    pub kappa: f64,
    pub tau: f64,
}

impl Ambient {
    pub fn new(kappa: f64, tau: f64) -> Self {
        Self { kappa, tau }
    }

    fn scale(&self) -> f64 {
        4.0 / self.kappa
    }

    fn excess(&self) -> f64 {
        4.0 * self.tau * self.tau / self.kappa - 1.0
    }

    pub fn g(&self, x: &V4) -> Matrix4<f64> {
        let y = j(x);
        (Matrix4::identity() + y * y.transpose() * self.excess()) * self.scale()
    }

    pub fn inner(&self, x: &V4, a: &V4, b: &V4) -> f64 {
        a.dot(&(self.g(x) * b))
    }

    pub fn norm(&self, x: &V4, a: &V4) -> f64 {
        self.inner(x, a, a).sqrt()
    }

    /// `Γ(a, b) = G⁻¹ s c [(Ja)(Jx·b) + (Jb)(Jx·a)]`, from `∂_k G_ij = s c (J_ik y_j + y_i J_jk)`.
    pub fn christoffel(&self, x: &V4, a: &V4, b: &V4) -> V4 {
        let y = j(x);
        let rhs = (j(a) * y.dot(b) + j(b) * y.dot(a)) * (self.scale() * self.excess());
        self.g(x).try_inverse().expect("ambient metric is positive definite") * rhs
    }
}

/// A vector orthogonal (Euclidean) to the three given ones: cofactor expansion.
pub fn cross3(a: &V4, b: &V4, c: &V4) -> V4 {
    let m = |r: [usize; 3]| {
        let row = |v: &V4| nalgebra::Vector3::new(v[r[0]], v[r[1]], v[r[2]]);
        nalgebra::Matrix3::from_columns(&[row(a), row(b), row(c)]).determinant()
    };
    V4::new(-m([1, 2, 3]), m([0, 2, 3]), -m([0, 1, 3]), m([0, 1, 2]))
}

/// Position and first and second partial derivatives of a parametrized surface.
#[derive(Debug, Clone, Copy)]
pub struct Jet2 {
    pub p: V4,
    pub ds: V4,
    pub dt: V4,
    pub dss: V4,
    pub dst: V4,
    pub dtt: V4,
}

/// Berger mean curvature (half the trace of the second fundamental form)
/// with respect to the unit normal tangent to `S³`, whose sign is fixed by
/// `(x, Φ_s, Φ_t, N)` being positively oriented in the Euclidean sense.
pub fn mean_curvature(amb: &Ambient, jet: &Jet2) -> f64 {
    let x = jet.p;
    let g = amb.g(&x);
    let mut n = cross3(&x, &(g * jet.ds), &(g * jet.dt));
    n /= amb.norm(&x, &n);
    let h = |f: &V4, a: &V4, b: &V4| (f + amb.christoffel(&x, a, b)).dot(&(g * n));
    let (h11, h12, h22) = (h(&jet.dss, &jet.ds, &jet.ds), h(&jet.dst, &jet.ds, &jet.dt), h(&jet.dtt, &jet.dt, &jet.dt));
    let (e, f, gg) = (amb.inner(&x, &jet.ds, &jet.ds), amb.inner(&x, &jet.ds, &jet.dt), amb.inner(&x, &jet.dt, &jet.dt));
    let det = e * gg - f * f;
    0.5 * (gg * h11 - 2.0 * f * h12 + e * h22) / det
}

/// Analytic jet of `(cos s · e^{ict}, sin s · e^{it})`.
pub fn phi_c_jet(c: f64, s: f64, t: f64) -> Jet2 {
    let (ss, cs) = s.sin_cos();
    let (sct, cct) = (c * t).sin_cos();
    let (st, ct) = t.sin_cos();
    // z = cos s (cos ct + i sin ct), w = sin s (cos t + i sin t)
    Jet2 {
        p: V4::new(cs * cct, cs * sct, ss * ct, ss * st),
        ds: V4::new(-ss * cct, -ss * sct, cs * ct, cs * st),
        dt: V4::new(-c * cs * sct, c * cs * cct, -ss * st, ss * ct),
        dss: V4::new(-cs * cct, -cs * sct, -ss * ct, -ss * st),
        dst: V4::new(c * ss * sct, -c * ss * cct, -cs * st, cs * ct),
        dtt: V4::new(-c * c * cs * cct, -c * c * cs * sct, -ss * ct, -ss * st),
    }
}

/// Analytic jet of the geodesic sphere `cos ρ e₀ + sin ρ (cos s e₁ + sin s cos t e₂ + sin s sin t e₃)`.
pub fn geodesic_sphere_jet(rho: f64, s: f64, t: f64) -> Jet2 {
    let (sr, cr) = rho.sin_cos();
    let (ss, cs) = s.sin_cos();
    let (st, ct) = t.sin_cos();
    Jet2 {
        p: V4::new(cr, sr * cs, sr * ss * ct, sr * ss * st),
        ds: V4::new(0.0, -sr * ss, sr * cs * ct, sr * cs * st),
        dt: V4::new(0.0, 0.0, -sr * ss * st, sr * ss * ct),
        dss: V4::new(0.0, -sr * cs, -sr * ss * ct, -sr * ss * st),
        dst: V4::new(0.0, 0.0, -sr * cs * st, sr * cs * ct),
        dtt: V4::new(0.0, 0.0, -sr * ss * ct, -sr * ss * st),
    }
}

/// Composite Simpson rule on `[a, b]` with `2n` intervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / (2 * n) as f64;
    let mut sum = f(a) + f(b);
    for k in 1..2 * n {
        sum += f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    sum * h / 3.0
}

/// Berger length of a closed curve `γ` on `[0, 2π]` by Simpson quadrature of `|γ'|_G`.
pub fn loop_length(amb: &Ambient, gamma: impl Fn(f64) -> (V4, V4)) -> f64 {
    simpson(
        |t| {
            let (p, v) = gamma(t);
            amb.norm(&p, &v)
        },
        0.0,
        2.0 * std::f64::consts::PI,
        1000,
    )
}

/// Part of `a + Γ(v, v)` tangent to `S³`, measured as the largest pairing
/// with an orthonormal basis of `x^⊥`: zero exactly for geodesics of `S³`.
pub fn geodesic_defect(amb: &Ambient, x: &V4, v: &V4, a: &V4) -> f64 {
    let acc = a + amb.christoffel(x, v, v);
    let g = amb.g(x);
    // Euclidean basis of x^⊥ from the coordinate axes
    let mut basis: Vec<V4> = Vec::new();
    for k in 0..4 {
        let mut e = V4::zeros();
        e[k] = 1.0;
        e -= x * x.dot(&e);
        for b in &basis {
            e -= b * b.dot(&e);
        }
        if e.norm() > 1e-6 {
            basis.push(e.normalize());
        }
        if basis.len() == 3 {
            break;
        }
    }
    basis.iter().map(|e| acc.dot(&(g * e)).abs() / amb.norm(x, e)).fold(0.0, f64::max)
}

/// Right-hand side `u'' = 4λ² e^{−2u} − e^{2u}`.
pub fn sinh_gordon_rhs(lambda: f64, u: f64) -> f64 {
    4.0 * lambda * lambda * (-2.0 * u).exp() - (2.0 * u).exp()
}

/// Classical RK4 for the sinh-Gordon reduction, from `(u0, 0)`.
pub fn rk4_sinh_gordon(lambda: f64, u0: f64, h: f64, steps: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(steps + 1);
    let (mut u, mut du) = (u0, 0.0);
    out.push((u, du));
    for _ in 0..steps {
        let f = |u: f64, du: f64| (du, sinh_gordon_rhs(lambda, u));
        let k1 = f(u, du);
        let k2 = f(u + 0.5 * h * k1.0, du + 0.5 * h * k1.1);
        let k3 = f(u + 0.5 * h * k2.0, du + 0.5 * h * k2.1);
        let k4 = f(u + h * k3.0, du + h * k3.1);
        u += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        du += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        out.push((u, du));
    }
    out
}

/// Euclidean distance from `p` to the patch `{e^{it}(cos s, sin s) : s, t ∈ [0, π/2]}`.
pub fn distance_to_phi1_piece(p: &V4) -> f64 {
    use std::f64::consts::FRAC_PI_2;
    let (zr, zi, wr, wi) = (p[0], p[1], p[2], p[3]);
    // |p − e^{it}q|² = 2 − 2 Re(e^{−it} A), A = cos s · z + sin s · w
    let best_t = |s: f64| -> f64 {
        let (ss, cs) = s.sin_cos();
        let (ar, ai) = (cs * zr + ss * wr, cs * zi + ss * wi);
        let re = |t: f64| t.cos() * ar + t.sin() * ai;
        let arg = ai.atan2(ar);
        let mut best = re(0.0).max(re(FRAC_PI_2));
        if (0.0..=FRAC_PI_2).contains(&arg) {
            best = best.max(ar.hypot(ai));
        }
        best
    };
    let n = 2000;
    let mut k_best = 0;
    let mut v_best = f64::NEG_INFINITY;
    for k in 0..=n {
        let v = best_t(FRAC_PI_2 * k as f64 / n as f64);
        if v > v_best {
            (k_best, v_best) = (k, v);
        }
    }
    // golden-section refinement around the best sample
    let h = FRAC_PI_2 / n as f64;
    let (mut a, mut b) = (((k_best as f64 - 1.0) * h).max(0.0), ((k_best as f64 + 1.0) * h).min(FRAC_PI_2));
    let r = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..80 {
        let (c, d) = (b - r * (b - a), a + r * (b - a));
        if best_t(c) > best_t(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let v = v_best.max(best_t(0.5 * (a + b)));
    (2.0 - 2.0 * v).max(0.0).sqrt()
}

/// `V − E + F` counted from the face list alone.
pub fn euler_characteristic(faces: &[[usize; 3]]) -> i64 {
    let mut verts = std::collections::HashSet::new();
    let mut edges = std::collections::HashSet::new();
    for f in faces {
        for k in 0..3 {
            verts.insert(f[k]);
            let (a, b) = (f[k], f[(k + 1) % 3]);
            edges.insert((a.min(b), a.max(b)));
        }
    }
    verts.len() as i64 - edges.len() as i64 + faces.len() as i64
}

/// Every edge has exactly two faces.
pub fn is_closed(faces: &[[usize; 3]]) -> bool {
    let mut count: HashMap<(usize, usize), usize> = HashMap::new();
    for f in faces {
        for k in 0..3 {
            let (a, b) = (f[k], f[(k + 1) % 3]);
            *count.entry((a.min(b), a.max(b))).or_default() += 1;
        }
    }
    count.values().all(|&c| c == 2)
}

/// Orientability by propagating face orientations across shared edges.
pub fn is_orientable(faces: &[[usize; 3]]) -> bool {
    let mut by_edge: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (i, f) in faces.iter().enumerate() {
        for k in 0..3 {
            let (a, b) = (f[k], f[(k + 1) % 3]);
            by_edge.entry((a.min(b), a.max(b))).or_default().push(i);
        }
    }
    // sign[i] = +1 keeps face i, −1 reverses it
    let mut sign = vec![0i8; faces.len()];
    for start in 0..faces.len() {
        if sign[start] != 0 {
            continue;
        }
        sign[start] = 1;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let f = faces[i];
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                // direction of (a, b) in face i after applying its sign
                let dir_i = sign[i];
                for &jf in &by_edge[&(a.min(b), a.max(b))] {
                    if jf == i {
                        continue;
                    }
                    let g = faces[jf];
                    let same = (0..3).any(|m| g[m] == a && g[(m + 1) % 3] == b);
                    // coherent faces traverse a shared edge in opposite directions
                    let want = if same { -dir_i } else { dir_i };
                    if sign[jf] == 0 {
                        sign[jf] = want;
                        stack.push(jf);
                    } else if sign[jf] != want {
                        return false;
                    }
                }
            }
        }
    }
    true
}
