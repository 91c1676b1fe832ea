//! Implicit shape catalog.
//!
//! Every shape provides a level function psi (negative inside, zero on the
//! boundary), a near-distance normalization used for cut-cell geometry and
//! solver initialization, analytic boundary mean curvature where the closed
//! form exists, and quasi-uniform boundary samples. Mean convexity is checked
//! from the samples, never assumed.
//!
//! Curvature sign convention: outward normal, so a ball of radius R in
//! ambient dimension d has H = (d-1)/R > 0.

use crate::error::{Error, Result};
use crate::grid::Coords;

/// Finite-difference step (relative to shape scale) for custom expressions.
const FD_STEP_REL: f64 = 1e-5;

/// Superellipsoid exponent for the rounded box. Even and >= 4 keeps the level
/// function C^2 and the shape box-like with strictly positive sampled H.
pub const ROUNDED_BOX_POWER: f64 = 4.0;

#[derive(Clone, Debug, PartialEq)]
pub enum ShapeSpec {
    /// Ball of the given radius; `dim` is the ambient dimension (2 or 3).
    Ball { radius: f64, dim: usize },
    /// Axis-aligned ellipsoid; 2 semi-axes on a cartesian grid is an ellipse,
    /// 2 semi-axes on an axisymmetric grid a spheroid (rho, z), 3 a 3-d ellipsoid.
    Ellipsoid { semi_axes: Vec<f64> },
    /// Box with rounded corners: the p = 4 superellipsoid sum |x_i/w_i|^p = 1.
    RoundedBox { half_widths: Vec<f64> },
    /// Solid torus of revolution, described in the (rho, z) half-plane.
    TorusAxisym { major: f64, minor: f64 },
    /// User-supplied level expression, negative inside. Variables are
    /// x, y (, z) on cartesian grids and rho, z on axisymmetric grids.
    CustomImplicit {
        expr: String,
        coords: Coords,
        dim: usize,
        lo: Vec<f64>,
        hi: Vec<f64>,
    },
}

/// A boundary point with its analytic (or finite-difference) mean curvature.
#[derive(Clone, Debug)]
pub struct BoundarySample {
    /// Grid coordinates: (x, y[, z]) or (rho, z).
    pub point: Vec<f64>,
    pub mean_curvature: f64,
}

impl ShapeSpec {
    pub fn validate(&self, coords: Coords, grid_dim: usize) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        match self {
            ShapeSpec::Ball { radius, dim } => {
                if !(*radius > 0.0) {
                    return fail(format!("ball radius {radius} must be positive"));
                }
                match (dim, coords) {
                    (2, Coords::Cartesian) if grid_dim == 2 => Ok(()),
                    (3, Coords::Cartesian) if grid_dim == 3 => Ok(()),
                    (3, Coords::Axisym) => Ok(()),
                    _ => fail(format!(
                        "ball dim {dim} incompatible with {coords:?} grid of dim {grid_dim}"
                    )),
                }
            }
            ShapeSpec::Ellipsoid { semi_axes } => {
                if semi_axes.iter().any(|a| !(*a > 0.0)) {
                    return fail("ellipsoid semi-axes must be positive".into());
                }
                match (semi_axes.len(), coords) {
                    (2, _) if grid_dim == 2 => Ok(()),
                    (3, Coords::Cartesian) if grid_dim == 3 => Ok(()),
                    _ => fail(format!(
                        "{} semi-axes incompatible with {coords:?} grid of dim {grid_dim}",
                        semi_axes.len()
                    )),
                }
            }
            ShapeSpec::RoundedBox { half_widths } => {
                if half_widths.iter().any(|w| !(*w > 0.0)) {
                    return fail("rounded-box half-widths must be positive".into());
                }
                if coords != Coords::Cartesian || half_widths.len() != grid_dim {
                    return fail("rounded-box requires a cartesian grid matching its dim".into());
                }
                Ok(())
            }
            ShapeSpec::TorusAxisym { major, minor } => {
                if !(*minor > 0.0) || !(*major > *minor) {
                    return fail(format!(
                        "torus needs 0 < minor < major, got major {major}, minor {minor}"
                    ));
                }
                if coords != Coords::Axisym {
                    return fail("torus-axisym requires an axisymmetric grid".into());
                }
                Ok(())
            }
            ShapeSpec::CustomImplicit { coords: c, dim, lo, hi, expr } => {
                if *c != coords || *dim != grid_dim {
                    return fail("custom shape coords/dim do not match the grid".into());
                }
                if lo.len() != *dim || hi.len() != *dim || lo.iter().zip(hi).any(|(a, b)| a >= b) {
                    return fail("custom shape bounding box invalid".into());
                }
                compile_expr(expr, *dim, coords).map(|_| ())
            }
        }
    }

    /// Ambient dimension of the body this shape describes on the given grid.
    pub fn ambient_dim(&self, coords: Coords) -> usize {
        match self {
            ShapeSpec::Ball { dim, .. } => *dim,
            ShapeSpec::Ellipsoid { semi_axes } => match coords {
                Coords::Axisym => 3,
                Coords::Cartesian => semi_axes.len(),
            },
            ShapeSpec::RoundedBox { half_widths } => half_widths.len(),
            ShapeSpec::TorusAxisym { .. } => 3,
            ShapeSpec::CustomImplicit { dim, coords: c, .. } => match c {
                Coords::Axisym => 3,
                Coords::Cartesian => *dim,
            },
        }
    }

    /// Raw level function, negative inside.
    pub fn psi(&self, x: &[f64]) -> f64 {
        match self {
            ShapeSpec::Ball { radius, .. } => norm(x) - radius,
            ShapeSpec::Ellipsoid { semi_axes } => {
                let mut q = -1.0;
                for (xi, a) in x.iter().zip(semi_axes) {
                    q += (xi / a) * (xi / a);
                }
                q
            }
            ShapeSpec::RoundedBox { half_widths } => {
                let p = ROUNDED_BOX_POWER;
                let mut q = -1.0;
                for (xi, w) in x.iter().zip(half_widths) {
                    q += (xi.abs() / w).powf(p);
                }
                q
            }
            ShapeSpec::TorusAxisym { major, minor } => {
                let dr = x[0] - major;
                (dr * dr + x[1] * x[1]).sqrt() - minor
            }
            ShapeSpec::CustomImplicit { expr, dim, coords, .. } => {
                let eval = compile_expr(expr, *dim, *coords).expect("validated expression");
                eval(x)
            }
        }
    }

    /// Level function scaled to approximate signed distance near the boundary
    /// (first-order: psi / |grad psi|). Exact for shapes whose psi already is
    /// a signed distance (ball, torus).
    pub fn psi_distance(&self, x: &[f64]) -> f64 {
        match self {
            ShapeSpec::Ball { .. } | ShapeSpec::TorusAxisym { .. } => self.psi(x),
            _ => {
                let q = self.psi(x);
                let g = norm(&self.grad_psi(x));
                // gradient floor keeps deep-interior values finite
                q / g.max(1e-8)
            }
        }
    }

    /// Gradient of the raw level function (finite differences for custom).
    pub fn grad_psi(&self, x: &[f64]) -> Vec<f64> {
        match self {
            ShapeSpec::Ball { .. } => {
                let r = norm(x).max(1e-300);
                x.iter().map(|xi| xi / r).collect()
            }
            ShapeSpec::Ellipsoid { semi_axes } => x
                .iter()
                .zip(semi_axes)
                .map(|(xi, a)| 2.0 * xi / (a * a))
                .collect(),
            ShapeSpec::RoundedBox { half_widths } => {
                let p = ROUNDED_BOX_POWER;
                x.iter()
                    .zip(half_widths)
                    .map(|(xi, w)| p * (xi.abs() / w).powf(p - 1.0) * xi.signum() / w)
                    .collect()
            }
            ShapeSpec::TorusAxisym { major, .. } => {
                let dr = x[0] - major;
                let s = (dr * dr + x[1] * x[1]).sqrt().max(1e-300);
                vec![dr / s, x[1] / s]
            }
            ShapeSpec::CustomImplicit { dim, .. } => {
                let step = FD_STEP_REL * self.scale();
                let mut g = vec![0.0; *dim];
                let mut xp = x.to_vec();
                for a in 0..*dim {
                    xp[a] = x[a] + step;
                    let fp = self.psi(&xp);
                    xp[a] = x[a] - step;
                    let fm = self.psi(&xp);
                    xp[a] = x[a];
                    g[a] = (fp - fm) / (2.0 * step);
                }
                g
            }
        }
    }

    /// Mean curvature of the level set of psi through `x`, computed with the
    /// implicit formula H = (lap(psi) |g|^2 - g^T Hess(psi) g) / |g|^3 plus,
    /// on axisymmetric grids, the out-of-plane term nu_rho / rho.
    pub fn mean_curvature_at(&self, x: &[f64], coords: Coords) -> f64 {
        // closed forms where the shape is a known round object
        if let ShapeSpec::Ball { radius, dim } = self {
            let _ = radius;
            return (*dim as f64 - 1.0) / norm(x).max(1e-300);
        }
        let (g, hess) = self.grad_hess(x);
        let g2 = g.iter().map(|v| v * v).sum::<f64>().max(1e-300);
        let gn = g2.sqrt();
        let d = g.len();
        let mut lap = 0.0;
        let mut ghg = 0.0;
        for i in 0..d {
            lap += hess[i][i];
            for j in 0..d {
                ghg += g[i] * hess[i][j] * g[j];
            }
        }
        let mut h = (lap * g2 - ghg) / (g2 * gn);
        if coords == Coords::Axisym {
            h += (g[0] / gn) / x[0].max(1e-300);
        }
        h
    }

    fn grad_hess(&self, x: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>) {
        let d = x.len();
        match self {
            ShapeSpec::Ellipsoid { semi_axes } => {
                let g = self.grad_psi(x);
                let mut hess = vec![vec![0.0; d]; d];
                for i in 0..d {
                    hess[i][i] = 2.0 / (semi_axes[i] * semi_axes[i]);
                }
                (g, hess)
            }
            ShapeSpec::RoundedBox { half_widths } => {
                let p = ROUNDED_BOX_POWER;
                let g = self.grad_psi(x);
                let mut hess = vec![vec![0.0; d]; d];
                for i in 0..d {
                    let w = half_widths[i];
                    hess[i][i] = p * (p - 1.0) * (x[i].abs() / w).powf(p - 2.0) / (w * w);
                }
                (g, hess)
            }
            ShapeSpec::TorusAxisym { major, .. } => {
                let dr = x[0] - major;
                let s2 = (dr * dr + x[1] * x[1]).max(1e-300);
                let s = s2.sqrt();
                let n = [dr / s, x[1] / s];
                let mut hess = vec![vec![0.0; 2]; 2];
                for i in 0..2 {
                    for j in 0..2 {
                        let id = if i == j { 1.0 } else { 0.0 };
                        hess[i][j] = (id - n[i] * n[j]) / s;
                    }
                }
                (vec![n[0], n[1]], hess)
            }
            _ => {
                // finite differences; used by custom shapes (and as a
                // cross-check for the analytic branches in tests)
                let step = FD_STEP_REL * self.scale();
                let g = self.grad_psi(x);
                let mut hess = vec![vec![0.0; d]; d];
                let mut xp = x.to_vec();
                for a in 0..d {
                    xp[a] = x[a] + step;
                    let gp = self.grad_psi(&xp);
                    xp[a] = x[a] - step;
                    let gm = self.grad_psi(&xp);
                    xp[a] = x[a];
                    for b in 0..d {
                        hess[a][b] = (gp[b] - gm[b]) / (2.0 * step);
                    }
                }
                // symmetrize FD noise
                for a in 0..d {
                    for b in (a + 1)..d {
                        let m = 0.5 * (hess[a][b] + hess[b][a]);
                        hess[a][b] = m;
                        hess[b][a] = m;
                    }
                }
                (g, hess)
            }
        }
    }

    /// Characteristic length used for finite-difference steps.
    pub fn scale(&self) -> f64 {
        match self {
            ShapeSpec::Ball { radius, .. } => *radius,
            ShapeSpec::Ellipsoid { semi_axes } => semi_axes.iter().cloned().fold(0.0, f64::max),
            ShapeSpec::RoundedBox { half_widths } => {
                half_widths.iter().cloned().fold(0.0, f64::max)
            }
            ShapeSpec::TorusAxisym { major, minor } => major + minor,
            ShapeSpec::CustomImplicit { lo, hi, .. } => lo
                .iter()
                .zip(hi)
                .map(|(a, b)| b - a)
                .fold(0.0, f64::max),
        }
    }

    /// Tight bounding box of the body in grid coordinates.
    pub fn bbox(&self, coords: Coords) -> (Vec<f64>, Vec<f64>) {
        match self {
            ShapeSpec::Ball { radius, dim } => match coords {
                Coords::Axisym => (vec![0.0, -radius], vec![*radius, *radius]),
                Coords::Cartesian => (vec![-radius; *dim], vec![*radius; *dim]),
            },
            ShapeSpec::Ellipsoid { semi_axes } => match coords {
                Coords::Axisym => (
                    vec![0.0, -semi_axes[1]],
                    vec![semi_axes[0], semi_axes[1]],
                ),
                Coords::Cartesian => (
                    semi_axes.iter().map(|a| -a).collect(),
                    semi_axes.clone(),
                ),
            },
            ShapeSpec::RoundedBox { half_widths } => (
                half_widths.iter().map(|w| -w).collect(),
                half_widths.clone(),
            ),
            ShapeSpec::TorusAxisym { major, minor } => (
                vec![major - minor, -minor],
                vec![major + minor, *minor],
            ),
            ShapeSpec::CustomImplicit { lo, hi, .. } => (lo.clone(), hi.clone()),
        }
    }

    /// Closed-form boundary area, where one exists.
    pub fn analytic_boundary_area(&self, coords: Coords) -> Option<f64> {
        use std::f64::consts::PI;
        match self {
            ShapeSpec::Ball { radius, dim } => match dim {
                2 => Some(2.0 * PI * radius),
                3 => Some(4.0 * PI * radius * radius),
                _ => None,
            },
            ShapeSpec::TorusAxisym { major, minor } => {
                Some(4.0 * PI * PI * major * minor)
            }
            _ => {
                let _ = coords;
                None
            }
        }
    }

    /// Quasi-uniform boundary points with mean curvature. `count` is a lower
    /// bound; the parametric samplers return exactly `count` points.
    pub fn boundary_samples(&self, count: usize, coords: Coords) -> Result<Vec<BoundarySample>> {
        use std::f64::consts::PI;
        let mut out = Vec::with_capacity(count);
        let push = |out: &mut Vec<BoundarySample>, shape: &ShapeSpec, point: Vec<f64>| {
            let h = shape.mean_curvature_at(&point, coords);
            out.push(BoundarySample { point, mean_curvature: h });
        };
        match self {
            ShapeSpec::Ball { radius, dim: 3 } if coords == Coords::Axisym => {
                // meridian half-circle, midpoint angles avoid the poles
                for k in 0..count {
                    let phi = PI * (k as f64 + 0.5) / count as f64;
                    push(&mut out, self, vec![radius * phi.sin(), radius * phi.cos()]);
                }
            }
            ShapeSpec::Ball { radius, dim: 3 } => {
                for p in fibonacci_sphere(count) {
                    push(&mut out, self, vec![radius * p[0], radius * p[1], radius * p[2]]);
                }
            }
            ShapeSpec::Ball { radius, .. } => {
                for k in 0..count {
                    let th = 2.0 * PI * (k as f64 + 0.5) / count as f64;
                    push(&mut out, self, vec![radius * th.cos(), radius * th.sin()]);
                }
            }
            ShapeSpec::Ellipsoid { semi_axes } if coords == Coords::Axisym => {
                for k in 0..count {
                    let phi = PI * (k as f64 + 0.5) / count as f64;
                    push(
                        &mut out,
                        self,
                        vec![semi_axes[0] * phi.sin(), semi_axes[1] * phi.cos()],
                    );
                }
            }
            ShapeSpec::Ellipsoid { semi_axes } if semi_axes.len() == 3 => {
                for p in fibonacci_sphere(count) {
                    push(
                        &mut out,
                        self,
                        vec![semi_axes[0] * p[0], semi_axes[1] * p[1], semi_axes[2] * p[2]],
                    );
                }
            }
            ShapeSpec::Ellipsoid { semi_axes } => {
                for k in 0..count {
                    let th = 2.0 * PI * (k as f64 + 0.5) / count as f64;
                    push(
                        &mut out,
                        self,
                        vec![semi_axes[0] * th.cos(), semi_axes[1] * th.sin()],
                    );
                }
            }
            ShapeSpec::RoundedBox { half_widths } => {
                let p = ROUNDED_BOX_POWER;
                let dirs: Vec<Vec<f64>> = if half_widths.len() == 2 {
                    (0..count)
                        .map(|k| {
                            let th = 2.0 * PI * (k as f64 + 0.5) / count as f64;
                            vec![th.cos(), th.sin()]
                        })
                        .collect()
                } else {
                    fibonacci_sphere(count).into_iter().map(|d| d.to_vec()).collect()
                };
                for d in dirs {
                    let mut q = 0.0;
                    for (di, w) in d.iter().zip(half_widths) {
                        q += (di.abs() / w).powf(p);
                    }
                    let s = q.powf(-1.0 / p);
                    push(&mut out, self, d.iter().map(|di| s * di).collect());
                }
            }
            ShapeSpec::TorusAxisym { major, minor } => {
                for k in 0..count {
                    let th = 2.0 * PI * (k as f64 + 0.5) / count as f64;
                    push(
                        &mut out,
                        self,
                        vec![major + minor * th.cos(), minor * th.sin()],
                    );
                }
            }
            ShapeSpec::CustomImplicit { dim, lo, hi, .. } => {
                // ray casting from the deepest probe point; requires the body
                // to be star-shaped about that anchor
                let anchor = self.deepest_probe_point(lo, hi);
                let dirs: Vec<Vec<f64>> = if *dim == 2 {
                    (0..count)
                        .map(|k| {
                            let th = 2.0 * PI * (k as f64 + 0.5) / count as f64;
                            vec![th.cos(), th.sin()]
                        })
                        .collect()
                } else {
                    fibonacci_sphere(count).into_iter().map(|d| d.to_vec()).collect()
                };
                let ray_len = self.scale() * 2.0;
                for d in dirs {
                    if let Some(pt) = self.cast_ray(&anchor, &d, ray_len) {
                        push(&mut out, self, pt);
                    }
                }
                if out.len() < count.min(100) {
                    return Err(Error::Config(format!(
                        "custom shape boundary sampling found only {} points; \
                         body must be star-shaped about its deepest point",
                        out.len()
                    )));
                }
            }
        }
        Ok(out)
    }

    fn deepest_probe_point(&self, lo: &[f64], hi: &[f64]) -> Vec<f64> {
        let d = lo.len();
        let n = 24usize;
        let mut best = lo.to_vec();
        let mut best_v = f64::INFINITY;
        let total = n.pow(d as u32);
        for flat in 0..total {
            let mut x = vec![0.0; d];
            let mut rest = flat;
            for a in 0..d {
                let i = rest % n;
                rest /= n;
                x[a] = lo[a] + (i as f64 + 0.5) * (hi[a] - lo[a]) / n as f64;
            }
            let v = self.psi(&x);
            if v < best_v {
                best_v = v;
                best = x;
            }
        }
        best
    }

    fn cast_ray(&self, anchor: &[f64], dir: &[f64], len: f64) -> Option<Vec<f64>> {
        let point_at = |s: f64| -> Vec<f64> {
            anchor.iter().zip(dir).map(|(a, d)| a + s * d).collect()
        };
        let f = |s: f64| self.psi(&point_at(s));
        if f(0.0) >= 0.0 {
            return None;
        }
        // bracket the boundary crossing
        let mut s_hi = len;
        let mut found = false;
        let mut s = 0.0;
        let step = len / 256.0;
        while s < len {
            let s_next = s + step;
            if f(s_next) >= 0.0 {
                s_hi = s_next;
                found = true;
                break;
            }
            s = s_next;
        }
        if !found {
            return None;
        }
        let mut a = s;
        let mut b = s_hi;
        for _ in 0..80 {
            let m = 0.5 * (a + b);
            if f(m) < 0.0 {
                a = m;
            } else {
                b = m;
            }
        }
        Some(point_at(0.5 * (a + b)))
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Quasi-uniform unit-sphere points (golden-angle spiral).
fn fibonacci_sphere(count: usize) -> Vec<[f64; 3]> {
    let golden = std::f64::consts::PI * (3.0 - 5.0f64.sqrt());
    (0..count)
        .map(|k| {
            let z = 1.0 - 2.0 * (k as f64 + 0.5) / count as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let th = golden * k as f64;
            [r * th.cos(), r * th.sin(), z]
        })
        .collect()
}

type ExprEval = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;

fn compile_expr(expr: &str, dim: usize, coords: Coords) -> Result<ExprEval> {
    let parsed: meval::Expr = expr
        .parse()
        .map_err(|e| Error::Expr(format!("{e}")))?;
    let names: Vec<&'static str> = match (coords, dim) {
        (Coords::Axisym, 2) => vec!["rho", "z"],
        (Coords::Cartesian, 2) => vec!["x", "y"],
        (Coords::Cartesian, 3) => vec!["x", "y", "z"],
        _ => return Err(Error::Expr(format!("unsupported coords/dim {coords:?}/{dim}"))),
    };
    // probe once so bad variable names fail at validation time
    {
        let mut ctx = meval::Context::new();
        for n in &names {
            ctx.var(*n, 0.5);
        }
        parsed
            .eval_with_context(&ctx)
            .map_err(|e| Error::Expr(format!("{e}")))?;
    }
    Ok(Box::new(move |x: &[f64]| {
        let mut ctx = meval::Context::new();
        for (n, v) in names.iter().zip(x) {
            ctx.var(*n, *v);
        }
        parsed.eval_with_context(&ctx).unwrap_or(f64::NAN)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ball_distance_and_curvature() {
        let b = ShapeSpec::Ball { radius: 1.0, dim: 2 };
        assert_relative_eq!(b.psi(&[0.6, 0.8]), 0.0, epsilon = 1e-14);
        assert_relative_eq!(b.psi_distance(&[0.3, 0.0]), -0.7, epsilon = 1e-14);
        let s = b.boundary_samples(128, Coords::Cartesian).unwrap();
        assert_eq!(s.len(), 128);
        for bs in &s {
            assert_relative_eq!(bs.mean_curvature, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn sphere_curvature_in_both_grids() {
        let b = ShapeSpec::Ball { radius: 2.0, dim: 3 };
        let cart = b.boundary_samples(200, Coords::Cartesian).unwrap();
        for bs in &cart {
            assert_relative_eq!(bs.mean_curvature, 1.0, epsilon = 1e-12);
        }
        let axi = b.boundary_samples(150, Coords::Axisym).unwrap();
        for bs in &axi {
            assert_relative_eq!(bs.mean_curvature, 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn torus_curvature_matches_angle_formula() {
        // H(theta) = 1/minor + cos(theta) / (major + minor cos(theta))
        let (major, minor) = (1.0, 0.3);
        let t = ShapeSpec::TorusAxisym { major, minor };
        let samples = t.boundary_samples(256, Coords::Axisym).unwrap();
        for bs in &samples {
            let cos_th = (bs.point[0] - major) / minor;
            let expect = 1.0 / minor + cos_th / (major + minor * cos_th);
            assert_relative_eq!(bs.mean_curvature, expect, epsilon = 1e-9);
        }
        // brute-force scan of the closed form: the minimum sits at theta = pi
        let min_sampled = samples
            .iter()
            .map(|b| b.mean_curvature)
            .fold(f64::INFINITY, f64::min);
        let mut min_scan = f64::INFINITY;
        for k in 0..20_000 {
            let th = 2.0 * std::f64::consts::PI * k as f64 / 20_000.0;
            let h = 1.0 / minor + th.cos() / (major + minor * th.cos());
            min_scan = min_scan.min(h);
        }
        let exact = 1.0 / minor - 1.0 / (major - minor);
        assert_relative_eq!(min_scan, exact, epsilon = 1e-6);
        assert!(min_sampled >= min_scan - 1e-9);
        assert!(min_sampled > 0.0, "torus (1, 0.3) is strictly mean convex");
    }

    #[test]
    fn ellipse_curvature_matches_parametric_formula() {
        let (a, b) = (1.2, 0.8);
        let e = ShapeSpec::Ellipsoid { semi_axes: vec![a, b] };
        for k in 0..64 {
            let th = 2.0 * std::f64::consts::PI * (k as f64 + 0.3) / 64.0;
            let p = [a * th.cos(), b * th.sin()];
            let kappa = a * b
                / (a * a * th.sin().powi(2) + b * b * th.cos().powi(2)).powf(1.5);
            assert_relative_eq!(
                e.mean_curvature_at(&p, Coords::Cartesian),
                kappa,
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn rounded_box_samples_strictly_mean_convex() {
        for shape in [
            ShapeSpec::RoundedBox { half_widths: vec![1.0, 0.7] },
            ShapeSpec::RoundedBox { half_widths: vec![0.9, 0.8, 0.6] },
        ] {
            let n = if shape.ambient_dim(Coords::Cartesian) == 2 { 128 } else { 400 };
            let s = shape.boundary_samples(n, Coords::Cartesian).unwrap();
            assert_eq!(s.len(), n);
            let min_h = s.iter().map(|b| b.mean_curvature).fold(f64::INFINITY, f64::min);
            assert!(min_h > 0.0, "min H = {min_h}");
            for bs in &s {
                assert!(shape.psi(&bs.point).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn custom_expression_matches_ball() {
        let c = ShapeSpec::CustomImplicit {
            expr: "sqrt(x^2 + y^2) - 1".into(),
            coords: Coords::Cartesian,
            dim: 2,
            lo: vec![-1.0, -1.0],
            hi: vec![1.0, 1.0],
        };
        c.validate(Coords::Cartesian, 2).unwrap();
        assert_relative_eq!(c.psi(&[0.5, 0.0]), -0.5, epsilon = 1e-12);
        let s = c.boundary_samples(100, Coords::Cartesian).unwrap();
        assert!(s.len() >= 100);
        for bs in &s {
            assert_relative_eq!(bs.mean_curvature, 1.0, epsilon = 1e-4);
        }
    }

    #[test]
    fn custom_expression_rejects_bad_variables() {
        let c = ShapeSpec::CustomImplicit {
            expr: "q - 1".into(),
            coords: Coords::Cartesian,
            dim: 2,
            lo: vec![-1.0, -1.0],
            hi: vec![1.0, 1.0],
        };
        assert!(c.validate(Coords::Cartesian, 2).is_err());
    }

    #[test]
    fn fd_hessian_agrees_with_analytic_on_ellipsoid() {
        let e = ShapeSpec::Ellipsoid { semi_axes: vec![1.1, 0.6, 0.9] };
        let p = fibonacci_sphere(17);
        for d in p {
            let x = vec![1.1 * d[0], 0.6 * d[1], 0.9 * d[2]];
            let h_analytic = e.mean_curvature_at(&x, Coords::Cartesian);
            // rebuild through the generic FD branch via a custom expression
            let c = ShapeSpec::CustomImplicit {
                expr: "(x/1.1)^2 + (y/0.6)^2 + (z/0.9)^2 - 1".into(),
                coords: Coords::Cartesian,
                dim: 3,
                lo: vec![-1.1, -0.6, -0.9],
                hi: vec![1.1, 0.6, 0.9],
            };
            let h_fd = c.mean_curvature_at(&x, Coords::Cartesian);
            assert_relative_eq!(h_analytic, h_fd, epsilon = 1e-4, max_relative = 1e-4);
        }
    }
}
