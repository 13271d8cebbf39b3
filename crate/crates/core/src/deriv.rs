//! Cauchy-contour differentiation of holomorphic functions.
//!
//! Every prepotential here is holomorphic in each flat coordinate, so
//! derivatives up to third order are computed spectrally from trapezoid
//! sums over small circles; no nested finite differences appear anywhere.
//! Mixed partials come from directional derivatives by polarization.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::{C64, EvalConfig};

const PI: f64 = std::f64::consts::PI;

/// k-th derivative of a one-variable holomorphic function at z0,
/// k!/(2 pi i) times the Cauchy integral on a circle of radius rho.
pub fn cauchy_deriv<F>(f: F, z0: C64, k: usize, rho: f64, nodes: usize) -> Result<C64>
where
    F: Fn(C64) -> Result<C64>,
{
    let mut acc = C64::new(0.0, 0.0);
    for j in 0..nodes {
        let th = 2.0 * PI * j as f64 / nodes as f64;
        let e = C64::new(0.0, th).exp();
        let val = f(z0 + rho * e)?;
        acc += val * C64::new(0.0, -(k as f64) * th).exp();
    }
    let kfac = crate::util::factorial(k);
    Ok(acc * kfac / (nodes as f64 * rho.powi(k as i32)))
}

/// Directional derivative d^k/d eps^k F(t + eps v) at eps = 0.
pub fn directional_deriv<F>(
    f: &F,
    t: &[C64],
    v: &[C64],
    k: usize,
    rho: f64,
    nodes: usize,
) -> Result<C64>
where
    F: Fn(&[C64]) -> Result<C64> + ?Sized,
{
    let mut shifted = t.to_vec();
    let mut acc = C64::new(0.0, 0.0);
    for j in 0..nodes {
        let th = 2.0 * PI * j as f64 / nodes as f64;
        let eps = rho * C64::new(0.0, th).exp();
        for (s, (&base, &dir)) in shifted.iter_mut().zip(t.iter().zip(v.iter())) {
            *s = base + eps * dir;
        }
        acc += f(&shifted)? * C64::new(0.0, -(k as f64) * th).exp();
    }
    let kfac = crate::util::factorial(k);
    Ok(acc * kfac / (nodes as f64 * rho.powi(k as i32)))
}

fn unit_dir(n: usize, support: &[(usize, f64)]) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); n];
    for &(idx, w) in support {
        v[idx] += C64::new(w, 0.0);
    }
    v
}

fn radius_for(t: &[C64], support: &[(usize, f64)], cfg: &EvalConfig) -> f64 {
    let scale = support
        .iter()
        .map(|&(idx, _)| t[idx].norm())
        .fold(1.0, f64::max);
    cfg.contour_radius_scale * scale
}

/// First derivatives dF/dt_A for every coordinate.
pub fn gradient<F>(f: &F, t: &[C64], cfg: &EvalConfig) -> Result<Vec<C64>>
where
    F: Fn(&[C64]) -> Result<C64> + ?Sized,
{
    let n = t.len();
    let mut out = Vec::with_capacity(n);
    for a in 0..n {
        let sup = [(a, 1.0)];
        let rho = radius_for(t, &sup, cfg);
        out.push(directional_deriv(
            f,
            t,
            &unit_dir(n, &sup),
            1,
            rho,
            cfg.contour_points,
        )?);
    }
    Ok(out)
}

/// Mixed second derivative d^2 F / dt_A dt_B by polarization of the
/// directional second derivative.
pub fn second_mixed<F>(f: &F, t: &[C64], a: usize, b: usize, cfg: &EvalConfig) -> Result<C64>
where
    F: Fn(&[C64]) -> Result<C64> + ?Sized,
{
    let n = t.len();
    let d2 = |sup: &[(usize, f64)]| -> Result<C64> {
        let rho = radius_for(t, sup, cfg);
        directional_deriv(f, t, &unit_dir(n, sup), 2, rho, cfg.contour_points)
    };
    if a == b {
        return d2(&[(a, 1.0)]);
    }
    let dab = d2(&[(a, 1.0), (b, 1.0)])?;
    let da = d2(&[(a, 1.0)])?;
    let db = d2(&[(b, 1.0)])?;
    Ok((dab - da - db) * 0.5)
}

/// Full Hessian matrix of F.
pub fn hessian<F>(f: &F, t: &[C64], cfg: &EvalConfig) -> Result<Vec<Vec<C64>>>
where
    F: Fn(&[C64]) -> Result<C64> + ?Sized,
{
    let n = t.len();
    let mut h = vec![vec![C64::new(0.0, 0.0); n]; n];
    for a in 0..n {
        for b in a..n {
            let v = second_mixed(f, t, a, b, cfg)?;
            h[a][b] = v;
            h[b][a] = v;
        }
    }
    Ok(h)
}

/// Symmetric third-derivative tensor c_{ABC} = d^3 F / dt_A dt_B dt_C.
#[derive(Debug, Clone)]
pub struct ThirdTensor {
    n: usize,
    data: Vec<C64>,
}

impl ThirdTensor {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> C64 {
        self.data[(a * self.n + b) * self.n + c]
    }

    /// Hessian of dF/dt_g as a matrix.
    pub fn slice(&self, g: usize) -> Vec<Vec<C64>> {
        let n = self.n;
        (0..n)
            .map(|a| (0..n).map(|b| self.get(g, a, b)).collect())
            .collect()
    }

    /// Max-norm distance to another tensor.
    pub fn max_diff(&self, other: &ThirdTensor) -> f64 {
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }
}

/// Computes the full symmetric third-derivative tensor of F at t by
/// trilinear polarization,
/// 6 c(a,b,c) = D3(a+b+c) - D3(a+b) - D3(a+c) - D3(b+c) + D3(a) + D3(b) + D3(c),
/// where D3(v) is the third directional derivative along v. Directional
/// values are cached across index triples.
pub fn third_tensor<F>(f: &F, t: &[C64], cfg: &EvalConfig) -> Result<ThirdTensor>
where
    F: Fn(&[C64]) -> Result<C64> + ?Sized,
{
    let n = t.len();
    let mut cache: BTreeMap<Vec<(usize, u8)>, C64> = BTreeMap::new();
    let mut d3 = |sup: Vec<(usize, u8)>| -> Result<C64> {
        if let Some(v) = cache.get(&sup) {
            return Ok(*v);
        }
        let supf: Vec<(usize, f64)> = sup.iter().map(|&(i, w)| (i, w as f64)).collect();
        let rho = radius_for(t, &supf, cfg);
        let val = directional_deriv(f, t, &unit_dir(n, &supf), 3, rho, cfg.contour_points)?;
        cache.insert(sup, val);
        Ok(val)
    };
    let key = |idxs: &[usize]| -> Vec<(usize, u8)> {
        let mut m: BTreeMap<usize, u8> = BTreeMap::new();
        for &i in idxs {
            *m.entry(i).or_insert(0) += 1;
        }
        m.into_iter().collect()
    };
    let mut data = vec![C64::new(0.0, 0.0); n * n * n];
    for a in 0..n {
        for b in a..n {
            for c in b..n {
                let val = (d3(key(&[a, b, c]))? - d3(key(&[a, b]))? - d3(key(&[a, c]))?
                    - d3(key(&[b, c]))?
                    + d3(key(&[a]))?
                    + d3(key(&[b]))?
                    + d3(key(&[c]))?)
                    / 6.0;
                for (x, y, z) in [
                    (a, b, c),
                    (a, c, b),
                    (b, a, c),
                    (b, c, a),
                    (c, a, b),
                    (c, b, a),
                ] {
                    data[(x * n + y) * n + z] = val;
                }
            }
        }
    }
    Ok(ThirdTensor { n, data })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    fn cfg() -> EvalConfig {
        EvalConfig::default()
    }

    #[test]
    fn single_variable_derivatives() {
        // f(z) = exp(2z): f^(k)(0.3) = 2^k e^0.6
        let f = |z: C64| Ok((2.0 * z).exp());
        for k in 0..=3 {
            let d = cauchy_deriv(f, c64(0.3, 0.0), k, 0.05, 32).unwrap();
            let expect = 2f64.powi(k as i32) * (0.6f64).exp();
            assert!((d - expect).norm() < 1e-11 * expect);
        }
    }

    #[test]
    fn polynomial_third_tensor() {
        // F = t0^2 t1 + 3 t1 t2^2 + t0 t1 t2
        let f = |t: &[C64]| Ok(t[0] * t[0] * t[1] + 3.0 * t[1] * t[2] * t[2] + t[0] * t[1] * t[2]);
        let t = [c64(0.7, 0.1), c64(-0.4, 0.3), c64(1.1, -0.2)];
        let c = cfg();
        let tt = third_tensor(&f, &t, &c).unwrap();
        // c_{001} = 2, c_{122} = 6, c_{012} = 1, c_{000} = 0
        assert!((tt.get(0, 0, 1) - c64(2.0, 0.0)).norm() < 1e-9);
        assert!((tt.get(1, 2, 2) - c64(6.0, 0.0)).norm() < 1e-9);
        assert!((tt.get(0, 1, 2) - c64(1.0, 0.0)).norm() < 1e-9);
        assert!(tt.get(0, 0, 0).norm() < 1e-9);
        // symmetry of storage
        assert_eq!(tt.get(2, 1, 0), tt.get(0, 1, 2));
    }

    #[test]
    fn gradient_and_hessian() {
        let f = |t: &[C64]| Ok((t[0] * t[1]).exp());
        let t = [c64(0.4, 0.2), c64(-0.3, 0.1)];
        let c = cfg();
        let g = gradient(&f, &t, &c).unwrap();
        let e = (t[0] * t[1]).exp();
        assert!((g[0] - t[1] * e).norm() < 1e-11);
        assert!((g[1] - t[0] * e).norm() < 1e-11);
        let h = hessian(&f, &t, &c).unwrap();
        assert!((h[0][1] - (C64::new(1.0, 0.0) + t[0] * t[1]) * e).norm() < 1e-10);
        assert!((h[0][0] - t[1] * t[1] * e).norm() < 1e-10);
    }
}
