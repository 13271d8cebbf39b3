//! Independent numerical routes used to cross-check every closed formula:
//! Richardson-extrapolated lattice sums for the Weierstrass/Eisenstein
//! functions, and contour quadrature for residues, Laurent coefficients
//! and cycle integrals.
//!
//! Nothing here touches the theta-series backbone; agreement between the
//! two routes is what the verification suites certify.

use crate::error::{Error, Result};
use crate::hurwitz::HurwitzPoint;
use crate::util::{cpow, cpow_i, mat_inv};
use crate::{C64, EvalConfig};

const PI: f64 = std::f64::consts::PI;

/// Least-squares fit S(K) = S_inf + a K^-2 + b K^-3 + c K^-4 through the
/// partial sums at four cutoffs; returns S_inf.
fn extrapolate(ks: &[f64; 4], vals: &[C64; 4]) -> Result<C64> {
    let mut a = vec![vec![C64::new(0.0, 0.0); 4]; 4];
    for (r, &k) in ks.iter().enumerate() {
        a[r][0] = C64::new(1.0, 0.0);
        a[r][1] = C64::new(k.powi(-2), 0.0);
        a[r][2] = C64::new(k.powi(-3), 0.0);
        a[r][3] = C64::new(k.powi(-4), 0.0);
    }
    let (inv, _) = mat_inv(&a)?;
    Ok((0..4).map(|c| inv[0][c] * vals[c]).sum())
}

fn cutoffs(cutoff: i64) -> [i64; 4] {
    let k = cutoff.max(40);
    [k / 4, k / 2, 3 * k / 4, k]
}

/// Partial lattice sum of the p-function over the square max(|m|,|n|) <= k.
fn wp_partial(v: C64, tau: C64, k: i64) -> C64 {
    let mut s = (v * v).inv();
    for mm in -k..=k {
        for nn in -k..=k {
            if mm == 0 && nn == 0 {
                continue;
            }
            let w = C64::new(mm as f64, 0.0) + tau * nn as f64;
            let d = v - w;
            s += (d * d).inv() - (w * w).inv();
        }
    }
    s
}

/// Weierstrass p by the defining lattice sum (extrapolated in the cutoff).
pub fn wp_lattice(v: C64, tau: C64, cutoff: i64) -> Result<C64> {
    let ks = cutoffs(cutoff);
    let vals = [
        wp_partial(v, tau, ks[0]),
        wp_partial(v, tau, ks[1]),
        wp_partial(v, tau, ks[2]),
        wp_partial(v, tau, ks[3]),
    ];
    extrapolate(
        &[ks[0] as f64, ks[1] as f64, ks[2] as f64, ks[3] as f64],
        &vals,
    )
}

fn wzeta_partial(v: C64, tau: C64, k: i64) -> C64 {
    let mut s = v.inv();
    for mm in -k..=k {
        for nn in -k..=k {
            if mm == 0 && nn == 0 {
                continue;
            }
            let w = C64::new(mm as f64, 0.0) + tau * nn as f64;
            s += (v - w).inv() + w.inv() + v / (w * w);
        }
    }
    s
}

/// Weierstrass zeta by the defining lattice sum.
pub fn wzeta_lattice(v: C64, tau: C64, cutoff: i64) -> Result<C64> {
    let ks = cutoffs(cutoff);
    let vals = [
        wzeta_partial(v, tau, ks[0]),
        wzeta_partial(v, tau, ks[1]),
        wzeta_partial(v, tau, ks[2]),
        wzeta_partial(v, tau, ks[3]),
    ];
    extrapolate(
        &[ks[0] as f64, ks[1] as f64, ks[2] as f64, ks[3] as f64],
        &vals,
    )
}

fn log_sigma_partial(v: C64, tau: C64, k: i64) -> C64 {
    let mut s = v.ln();
    for mm in -k..=k {
        for nn in -k..=k {
            if mm == 0 && nn == 0 {
                continue;
            }
            let w = C64::new(mm as f64, 0.0) + tau * nn as f64;
            let r = v / w;
            s += (C64::new(1.0, 0.0) - r).ln() + r + 0.5 * r * r;
        }
    }
    s
}

/// Weierstrass sigma by the defining lattice product (via the log sum).
pub fn wsigma_lattice(v: C64, tau: C64, cutoff: i64) -> Result<C64> {
    let ks = cutoffs(cutoff);
    let vals = [
        log_sigma_partial(v, tau, ks[0]),
        log_sigma_partial(v, tau, ks[1]),
        log_sigma_partial(v, tau, ks[2]),
        log_sigma_partial(v, tau, ks[3]),
    ];
    Ok(extrapolate(
        &[ks[0] as f64, ks[1] as f64, ks[2] as f64, ks[3] as f64],
        &vals,
    )?
    .exp())
}

fn eisenstein_partial(weight: u32, tau: C64, k: i64) -> C64 {
    let mut s = C64::new(0.0, 0.0);
    for mm in -k..=k {
        for nn in -k..=k {
            if mm == 0 && nn == 0 {
                continue;
            }
            let w = C64::new(mm as f64, 0.0) + tau * nn as f64;
            s += cpow_i(w, -(weight as i64));
        }
    }
    s
}

/// Eisenstein series of even weight >= 4 by the double lattice sum with
/// extrapolated tail. (Weight 2 is only conditionally convergent and has
/// no absolutely convergent lattice oracle.)
pub fn eisenstein_lattice(weight: u32, tau: C64, cutoff: i64) -> Result<C64> {
    if weight < 4 || weight % 2 != 0 {
        return Err(Error::WeightOutOfRange(weight));
    }
    let ks = cutoffs(cutoff);
    let vals = [
        eisenstein_partial(weight, tau, ks[0]),
        eisenstein_partial(weight, tau, ks[1]),
        eisenstein_partial(weight, tau, ks[2]),
        eisenstein_partial(weight, tau, ks[3]),
    ];
    extrapolate(
        &[ks[0] as f64, ks[1] as f64, ks[2] as f64, ks[3] as f64],
        &vals,
    )
}

/// Laurent coefficient of (z - pole_j)^k, k possibly negative, of a
/// function around pole j, by trapezoid quadrature on a circle.
pub fn laurent_coeff<F>(
    p: &HurwitzPoint,
    j: usize,
    k: i64,
    f: F,
    nodes: usize,
    radius: f64,
) -> Result<C64>
where
    F: Fn(C64) -> Result<C64>,
{
    let pole = p.poles()[j];
    let mut acc = C64::new(0.0, 0.0);
    for t in 0..nodes {
        let th = 2.0 * PI * t as f64 / nodes as f64;
        let e = C64::new(0.0, th).exp();
        let z = pole + radius * e;
        // f(z) (z-pole)^{-k-1} dz/(2 pi i) = f(z) (z-pole)^{-k} dtheta/(2 pi)
        acc += f(z)? * cpow_i(radius * e, -k);
    }
    Ok(acc / nodes as f64)
}

/// Default oracle contour radius: a tenth of the minimal pole gap.
pub fn oracle_radius(p: &HurwitzPoint) -> f64 {
    0.1 * p.min_pole_gap()
}

/// Values of lambda^{num/(n_j+1)} at the contour nodes around pole j:
/// lambda^{num/(n_j+1)} = x_1(j)^num h(z)^{num/(n_j+1)} (z - pole)^{-num}
/// with h = lambda (z-pole)^{n_j+1} / x_1^{n_j+1} close to 1 and its log
/// phase unwrapped along the contour.
fn fractional_power_on_circle(
    p: &HurwitzPoint,
    j: usize,
    num: i64,
    nodes: usize,
    radius: f64,
    cfg: &EvalConfig,
) -> Result<Vec<C64>> {
    let pole = p.poles()[j];
    let nj1 = p.order(j) + 1;
    let x1n = cpow(p.x_base(j, 1), nj1);
    let mut logs = Vec::with_capacity(nodes + 1);
    let mut prev_arg = 0.0f64;
    for t in 0..=nodes {
        let th = 2.0 * PI * (t % nodes) as f64 / nodes as f64;
        let z = pole + radius * C64::new(0.0, th).exp();
        let h = p.lambda(z, cfg)? * cpow(z - pole, nj1) / x1n;
        let ln = h.ln();
        let mut arg = ln.im;
        if t > 0 {
            // unwrap the phase continuously
            while arg - prev_arg > PI {
                arg -= 2.0 * PI;
            }
            while arg - prev_arg < -PI {
                arg += 2.0 * PI;
            }
        }
        prev_arg = arg;
        logs.push(C64::new(ln.re, arg));
    }
    // h must not wind around the origin, otherwise the fractional power is
    // not single-valued on this contour
    if (logs[nodes].im - logs[0].im).abs() > PI {
        return Err(Error::NonConvergent(radius));
    }
    let exponent = num as f64 / nj1 as f64;
    let x1num = cpow_i(p.x_base(j, 1), num);
    Ok((0..nodes)
        .map(|t| {
            let th = 2.0 * PI * t as f64 / nodes as f64;
            let zp = radius * C64::new(0.0, th).exp();
            x1num * (logs[t] * exponent).exp() * cpow_i(zp, -num)
        })
        .collect())
}

/// Residue at pole j of lambda^{num/(n_j+1)} density(z) dz by contour
/// quadrature, with the fractional-power branch fixed by factoring the
/// principal part of lambda.
pub fn residue_fractional<F>(
    p: &HurwitzPoint,
    j: usize,
    num: i64,
    density: F,
    nodes: usize,
    cfg: &EvalConfig,
) -> Result<C64>
where
    F: Fn(C64) -> Result<C64>,
{
    let mut radius = oracle_radius(p);
    let pole = p.poles()[j];
    let mut values = fractional_power_on_circle(p, j, num, nodes, radius, cfg);
    for _ in 0..4 {
        if values.is_ok() {
            break;
        }
        radius *= 0.5;
        values = fractional_power_on_circle(p, j, num, nodes, radius, cfg);
    }
    let values = values?;
    let mut acc = C64::new(0.0, 0.0);
    for (t, val) in values.iter().enumerate() {
        let th = 2.0 * PI * t as f64 / nodes as f64;
        let e = C64::new(0.0, th).exp();
        let z = pole + radius * e;
        acc += val * density(z)? * radius * e;
    }
    Ok(acc / nodes as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::special::{self, Modulus};

    #[test]
    fn lattice_oracles_match_theta_route() {
        let cfg = EvalConfig::default();
        for tau in [c64(0.0, 1.0), c64(0.3, 1.2)] {
            let m = Modulus::new(tau).unwrap();
            let v = c64(0.31, 0.17);
            let p_theta = special::wp(v, &m, 0, &cfg).unwrap();
            let p_lat = wp_lattice(v, tau, 200).unwrap();
            assert!((p_theta - p_lat).norm() < 1e-9 * (1.0 + p_theta.norm()));
            let z_theta = special::wzeta(v, &m, &cfg).unwrap();
            let z_lat = wzeta_lattice(v, tau, 200).unwrap();
            assert!((z_theta - z_lat).norm() < 1e-9 * (1.0 + z_theta.norm()));
            let s_theta = special::wsigma(v, &m, &cfg).unwrap();
            let s_lat = wsigma_lattice(v, tau, 200).unwrap();
            assert!((s_theta - s_lat).norm() < 1e-9 * (1.0 + s_theta.norm()));
            let g4 = m.eisenstein(4, &cfg).unwrap();
            let g4_lat = eisenstein_lattice(4, tau, 200).unwrap();
            assert!((g4 - g4_lat).norm() < 1e-9 * (1.0 + g4.norm()));
            let g6 = m.eisenstein(6, &cfg).unwrap();
            let g6_lat = eisenstein_lattice(6, tau, 200).unwrap();
            assert!((g6 - g6_lat).norm() < 1e-9 * (1.0 + g6.norm()));
        }
    }
}
