//! Flat-coordinate model of the genus-one Hurwitz space: branch profiles,
//! Landau-Ginzburg superpotentials, Laurent data, Abelian differentials of
//! the second and third kind and their expansion coefficients.
//!
//! A point carries the modulus tau, the poles (the first pole is pinned to
//! the origin, which fixes the translation gauge of the torus), the
//! coefficient table x_alpha(j) of the holomorphic differential at each
//! pole, and the a-period u of lambda dz. Coefficients beyond the pole
//! order and the regular Laurent coefficients f_l(j) are derived lazily and
//! cached; caches are populate-once and safe for concurrent readers.

use std::collections::{BTreeMap, HashMap};
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::bell::{bell_partial, r_function, CoefficientVector};
use crate::error::{Error, Result};
use crate::report::ResidualReport;
use crate::special::{self, reduce_to_cell, Modulus, POLE_TOL};
use crate::util::{binomial, binomial_neg, factorial, neg_one_pow};
use crate::{C64, EvalConfig, I};

const PI: f64 = std::f64::consts::PI;

/// Pole orders minus one: the covering has poles of order n_j + 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchProfile {
    orders: Vec<usize>,
}

impl BranchProfile {
    pub fn new(orders: Vec<usize>) -> Result<Self> {
        let degree: usize = orders.iter().map(|n| n + 1).sum();
        if orders.is_empty() || degree < 2 {
            return Err(Error::InvalidPoint(
                "branch profile must have total degree >= 2".into(),
            ));
        }
        Ok(BranchProfile { orders })
    }

    /// Number of poles m + 1.
    pub fn num_poles(&self) -> usize {
        self.orders.len()
    }

    /// m = number of poles - 1.
    pub fn m(&self) -> usize {
        self.orders.len() - 1
    }

    /// n_j.
    pub fn order(&self, j: usize) -> usize {
        self.orders[j]
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    /// Covering degree sum (n_j + 1).
    pub fn degree(&self) -> usize {
        self.orders.iter().map(|n| n + 1).sum()
    }

    /// Dimension N = 2 + 2m + sum n_j of the moduli space, which is also
    /// the number of simple ramification points.
    pub fn dimension(&self) -> usize {
        2 + 2 * self.m() + self.orders.iter().sum::<usize>()
    }
}

/// A covering in flat-coordinate description.
#[derive(Debug)]
pub struct HurwitzPoint {
    profile: BranchProfile,
    modulus: Modulus,
    poles: Vec<C64>,
    x: Vec<Vec<C64>>,
    u: C64,
    ext_cache: RwLock<HashMap<(usize, usize), C64>>,
    f_cache: RwLock<HashMap<(usize, usize), C64>>,
}

impl Clone for HurwitzPoint {
    fn clone(&self) -> Self {
        HurwitzPoint {
            profile: self.profile.clone(),
            modulus: self.modulus.clone(),
            poles: self.poles.clone(),
            x: self.x.clone(),
            u: self.u,
            ext_cache: RwLock::new(self.ext_cache.read().unwrap().clone()),
            f_cache: RwLock::new(self.f_cache.read().unwrap().clone()),
        }
    }
}

impl PartialEq for HurwitzPoint {
    fn eq(&self, other: &Self) -> bool {
        self.profile == other.profile
            && self.modulus.tau() == other.modulus.tau()
            && self.poles == other.poles
            && self.x == other.x
            && self.u == other.u
    }
}

impl HurwitzPoint {
    /// Builds a point. Shape requirements: Im tau > 0, the first pole at
    /// the origin, one coefficient row of length n_j + 1 per pole.
    /// Semantic requirements (residue closure, nonzero leading
    /// coefficients, distinct poles, simple ramification) are reported by
    /// [`HurwitzPoint::validate`], not enforced here.
    pub fn new(
        profile: BranchProfile,
        tau: C64,
        poles: Vec<C64>,
        x: Vec<Vec<C64>>,
        u: C64,
    ) -> Result<Self> {
        let modulus = Modulus::new(tau)?;
        if poles.len() != profile.num_poles() {
            return Err(Error::InvalidPoint(format!(
                "expected {} poles, got {}",
                profile.num_poles(),
                poles.len()
            )));
        }
        if poles[0].norm() != 0.0 {
            return Err(Error::InvalidPoint(
                "first pole must be pinned to the origin".into(),
            ));
        }
        if x.len() != profile.num_poles() {
            return Err(Error::InvalidPoint(format!(
                "expected {} coefficient rows, got {}",
                profile.num_poles(),
                x.len()
            )));
        }
        for (j, row) in x.iter().enumerate() {
            if row.len() != profile.order(j) + 1 {
                return Err(Error::InvalidPoint(format!(
                    "coefficient row {} must have length {}, got {}",
                    j,
                    profile.order(j) + 1,
                    row.len()
                )));
            }
        }
        Ok(HurwitzPoint {
            profile,
            modulus,
            poles,
            x,
            u,
            ext_cache: RwLock::new(HashMap::new()),
            f_cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn profile(&self) -> &BranchProfile {
        &self.profile
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn tau(&self) -> C64 {
        self.modulus.tau()
    }

    pub fn poles(&self) -> &[C64] {
        &self.poles
    }

    pub fn u(&self) -> C64 {
        self.u
    }

    /// s^j = pole_j - pole_0 (= pole_j, the gauge pins pole_0 = 0).
    pub fn s(&self, j: usize) -> C64 {
        self.poles[j] - self.poles[0]
    }

    /// n_j.
    pub fn order(&self, j: usize) -> usize {
        self.profile.order(j)
    }

    /// Stored coefficient x_r(j) for r = 1..=n_j+1.
    pub fn x_base(&self, j: usize, r: usize) -> C64 {
        self.x[j][r - 1]
    }

    /// Coefficient x_r(j) for any r >= 1; values beyond the pole order are
    /// produced by the triangular extension recursion and cached.
    pub fn x_coeff(&self, j: usize, r: usize, cfg: &EvalConfig) -> Result<C64> {
        let nj1 = self.order(j) + 1;
        if r == 0 {
            return Err(Error::IndexOutOfRange(0, nj1));
        }
        if r <= nj1 {
            return Ok(self.x[j][r - 1]);
        }
        if let Some(v) = self.ext_cache.read().unwrap().get(&(j, r)) {
            return Ok(*v);
        }
        // fill in increasing order; the recursion is triangular in alpha
        for a in 1..=(r - nj1) {
            let key = (j, nj1 + a);
            if self.ext_cache.read().unwrap().contains_key(&key) {
                continue;
            }
            let v = self.extended_x(j, a, cfg)?;
            self.ext_cache.write().unwrap().entry(key).or_insert(v);
        }
        Ok(*self.ext_cache.read().unwrap().get(&(j, r)).unwrap())
    }

    /// Coefficient vector (x_1(j), ..., x_upto(j)).
    pub fn xs(&self, j: usize, upto: usize, cfg: &EvalConfig) -> Result<CoefficientVector> {
        let mut v = Vec::with_capacity(upto);
        for r in 1..=upto {
            v.push(self.x_coeff(j, r, cfg)?);
        }
        Ok(CoefficientVector::new(v))
    }

    /// B_{n,k}(x_1(j), ..., x_{n-k+1}(j)).
    pub fn bell(&self, n: usize, k: usize, j: usize, cfg: &EvalConfig) -> Result<C64> {
        if k > n {
            return Err(Error::InvalidOrder { n, k });
        }
        let xs = self.xs(j, (n - k + 1).max(1), cfg)?;
        bell_partial(n, k, &xs)
    }

    /// B_{n,k}(x_2(j), ..., x_{n-k+2}(j)) (shifted variables).
    pub fn bell_shifted(&self, n: usize, k: usize, j: usize, cfg: &EvalConfig) -> Result<C64> {
        if k > n {
            return Err(Error::InvalidOrder { n, k });
        }
        let xs = self.xs(j, (n - k + 2).max(2), cfg)?;
        bell_partial(n, k, &xs.shifted())
    }

    /// R_{mu,k}(x_1(j), ..., x_{mu+1}(j)).
    pub fn r_fn(&self, mu: usize, k: usize, j: usize, cfg: &EvalConfig) -> Result<C64> {
        let xs = self.xs(j, mu + 1, cfg)?;
        r_function(mu, k, &xs)
    }

    /// B_{n_j+1,2}(j) with the empty-sum convention for simple poles.
    pub fn b2(&self, j: usize, cfg: &EvalConfig) -> Result<C64> {
        let nj = self.order(j);
        if nj == 0 {
            return Ok(C64::new(0.0, 0.0));
        }
        self.bell(nj + 1, 2, j, cfg)
    }

    /// (n_j+1) x_{n_j+1}(j), the residue of lambda dz at pole j.
    pub fn residue(&self, j: usize) -> C64 {
        (self.order(j) + 1) as f64 * self.x[j][self.order(j)]
    }

    /// The constant term c of the superpotential, recovered from the
    /// a-period u.
    pub fn c_const(&self, cfg: &EvalConfig) -> Result<C64> {
        let eta = self.modulus.eta1(cfg)?;
        let mut c = self.u;
        for j in 1..self.poles.len() {
            c += 2.0 * eta * self.residue(j) * self.s(j);
        }
        for j in 0..self.poles.len() {
            c += eta * (self.order(j) + 1) as f64 * self.b2(j, cfg)?;
        }
        Ok(c)
    }

    /// Periods (u, u-hat) of lambda dz over the a- and b-cycles, from the
    /// closed formulas.
    pub fn periods(&self, cfg: &EvalConfig) -> Result<(C64, C64)> {
        let c = self.c_const(cfg)?;
        let tau = self.tau();
        let eta = self.modulus.eta1(cfg)?;
        let w = tau * eta - I * PI; // zeta(tau/2) by the Legendre relation
        let mut uhat = c * tau;
        for j in 1..self.poles.len() {
            uhat -= 2.0 * w * self.residue(j) * self.s(j);
        }
        for j in 0..self.poles.len() {
            uhat -= w * (self.order(j) + 1) as f64 * self.b2(j, cfg)?;
        }
        Ok((self.u, uhat))
    }

    /// Derivatives zeta^{(r)}(v) for r = 0..=rmax.
    fn zeta_derivs(&self, v: C64, rmax: usize, cfg: &EvalConfig) -> Result<Vec<C64>> {
        let kd = special::k_derivs(v, &self.modulus, rmax + 1, cfg)?;
        Ok(kd[1..].to_vec())
    }

    /// lambda^{(r)}(z) for r = 0..=rmax.
    pub fn lambda_derivs(&self, z: C64, rmax: usize, cfg: &EvalConfig) -> Result<Vec<C64>> {
        let m = &self.modulus;
        let c = self.c_const(cfg)?;
        let mut out = vec![C64::new(0.0, 0.0); rmax + 1];
        out[0] = c;
        for j in 0..self.poles.len() {
            let nj = self.order(j);
            let d = z - self.poles[j];
            let (d0, _, _) = reduce_to_cell(d, m);
            if d0.norm() < POLE_TOL {
                return Err(Error::PoleArgument);
            }
            // third-kind part: residues pair against the base pole
            if j >= 1 {
                let res = self.residue(j);
                let zj = self.zeta_derivs(d, rmax, cfg)?;
                let z0 = self.zeta_derivs(z - self.poles[0], rmax, cfg)?;
                for r in 0..=rmax {
                    out[r] += res * (zj[r] - z0[r]);
                }
            }
            // second-kind part
            if nj >= 1 {
                let pd = special::wp_derivs(d, m, nj - 1 + rmax, cfg)?;
                for k in 2..=(nj + 1) {
                    let coeff = (nj + 1) as f64 * neg_one_pow(k) / factorial(k)
                        * self.bell(nj + 1, k, j, cfg)?;
                    for r in 0..=rmax {
                        out[r] += coeff * pd[k - 2 + r];
                    }
                }
            }
        }
        Ok(out)
    }

    /// The superpotential lambda(z).
    pub fn lambda(&self, z: C64, cfg: &EvalConfig) -> Result<C64> {
        Ok(self.lambda_derivs(z, 0, cfg)?[0])
    }

    /// Regular Laurent coefficient f_l(j) of lambda at pole j.
    pub fn f_coeff(&self, j: usize, ell: usize, cfg: &EvalConfig) -> Result<C64> {
        if let Some(v) = self.f_cache.read().unwrap().get(&(j, ell)) {
            return Ok(*v);
        }
        let m = &self.modulus;
        let nj1 = self.order(j) + 1;
        // Taylor coefficient of the part of lambda holomorphic at pole j
        let mut lam = if ell == 0 {
            self.c_const(cfg)?
        } else {
            C64::new(0.0, 0.0)
        };
        for i in 0..self.poles.len() {
            if i == j {
                continue;
            }
            let ni1 = self.order(i) + 1;
            let d = self.poles[j] - self.poles[i];
            let zd = self.zeta_derivs(d, ni1 + ell, cfg)?;
            let mut acc = C64::new(0.0, 0.0);
            for k in 1..=ni1 {
                acc += neg_one_pow(k) / factorial(k)
                    * self.bell(ni1, k, i, cfg)?
                    * zd[k + ell - 1];
            }
            lam -= ni1 as f64 / factorial(ell) * acc;
        }
        // Eisenstein part of the principal-part expansion
        let mut eis = C64::new(0.0, 0.0);
        for k in 1..=nj1 {
            if k + ell < 4 {
                continue;
            }
            eis += neg_one_pow(k) / (k + ell) as f64
                * binomial(k + ell, ell)
                * self.bell(nj1, k, j, cfg)?
                * m.g_weight((k + ell) as u32, cfg)?;
        }
        let value = lam + nj1 as f64 * eis;
        self.f_cache
            .write()
            .unwrap()
            .entry((j, ell))
            .or_insert(value);
        Ok(value)
    }

    /// x_{n_j+1+alpha}(j) by the extension recursion (consumed through
    /// [`HurwitzPoint::x_coeff`], which fills the cache in increasing
    /// alpha).
    fn extended_x(&self, j: usize, alpha: usize, cfg: &EvalConfig) -> Result<C64> {
        let nj = self.order(j);
        let nj1 = nj + 1;
        let a = alpha as f64;
        let x1 = self.x_base(j, 1);
        if x1.norm() == 0.0 {
            return Err(Error::ZeroLeadingCoefficient);
        }
        let x1_inv = x1.inv();
        let mut t1 = C64::new(0.0, 0.0);
        for k in 1..=(nj + alpha).saturating_sub(1) {
            t1 += binomial_neg(nj1, k) / (k + 1) as f64
                * crate::util::cpow(x1_inv, k)
                * self.bell_shifted(nj + alpha, k + 1, j, cfg)?;
        }
        let mut t2 = C64::new(0.0, 0.0);
        for k in 1..=nj {
            t2 += self.bell(nj1, k, j, cfg)? / k as f64 * self.r_fn(alpha + k - 1, k, j, cfg)?;
        }
        let mut t3 = C64::new(0.0, 0.0);
        for ell in 0..alpha {
            t3 += self.f_coeff(j, ell, cfg)? / (ell + 1) as f64
                * self.bell(alpha, ell + 1, j, cfg)?;
        }
        Ok(a / nj1 as f64 * t1 + a * t2 + a / nj1 as f64 * t3)
    }

    /// Density (with respect to dz) of the normalized third-kind Abelian
    /// differential with poles at pole_j (+1) and pole_0 (-1).
    pub fn omega_third(&self, j: usize, z: C64, cfg: &EvalConfig) -> Result<C64> {
        let m = &self.modulus;
        let eta = m.eta1(cfg)?;
        Ok(2.0 * eta * self.s(j) + special::wzeta(z - self.poles[j], m, cfg)?
            - special::wzeta(z - self.poles[0], m, cfg)?)
    }

    /// Density of the normalized second-kind Abelian differential with the
    /// single pole of order alpha + 1 at pole_j.
    pub fn psi_second(&self, j: usize, alpha: usize, z: C64, cfg: &EvalConfig) -> Result<C64> {
        let m = &self.modulus;
        let a = alpha as f64;
        let eta = m.eta1(cfg)?;
        let pd = special::wp_derivs(z - self.poles[j], m, alpha - 1, cfg)?;
        let mut acc = C64::new(0.0, 0.0);
        for k in 1..=alpha {
            acc += neg_one_pow(k) / factorial(k) * self.bell(alpha, k, j, cfg)? * pd[k - 1];
        }
        Ok(2.0 * a * self.x_coeff(j, alpha, cfg)? * eta - a * acc)
    }

    /// Bell-operator application
    /// L_{j,alpha}[K^{(base)}](v) = sum_{r=1}^{alpha} (1/r!) B_{alpha,r}(j) K^{(base+r)}(v).
    pub fn l_op(
        &self,
        j: usize,
        alpha: usize,
        base: usize,
        v: C64,
        cfg: &EvalConfig,
    ) -> Result<C64> {
        let kd = special::k_derivs(v, &self.modulus, base + alpha, cfg)?;
        let mut acc = C64::new(0.0, 0.0);
        for r in 1..=alpha {
            acc += self.bell(alpha, r, j, cfg)? / factorial(r) * kd[base + r];
        }
        Ok(acc)
    }

    /// Expansion coefficient I_{i,alpha} of the third-kind differential
    /// attached to pole j, at pole i.
    pub fn i_omega(&self, i: usize, j: usize, alpha: usize, cfg: &EvalConfig) -> Result<C64> {
        assert!(j >= 1, "third-kind differential needs j >= 1");
        let m = &self.modulus;
        let a = alpha as f64;
        let eta = m.eta1(cfg)?;
        let lead = 2.0 * a * self.x_coeff(i, alpha, cfg)? * self.s(j) * eta;
        if i != 0 && i != j {
            let d1 = self.poles[i] - self.poles[j];
            let d0 = self.poles[i] - self.poles[0];
            return Ok(lead + a * self.l_op(i, alpha, 0, d1, cfg)?
                - a * self.l_op(i, alpha, 0, d0, cfg)?);
        }
        // Eisenstein block shared by the diagonal and base-pole cases
        let mut eis = C64::new(0.0, 0.0);
        for l in 4..=alpha {
            eis += self.bell(alpha, l, i, cfg)? / l as f64 * m.g_weight(l as u32, cfg)?;
        }
        let r = self.r_fn(alpha, 1, i, cfg)?;
        if i == j {
            let d0 = self.poles[j] - self.poles[0];
            Ok(lead + a * r - a * eis - a * self.l_op(j, alpha, 0, d0, cfg)?)
        } else {
            // i == 0
            let d = self.poles[0] - self.poles[j];
            Ok(lead - a * r + a * eis + a * self.l_op(0, alpha, 0, d, cfg)?)
        }
    }

    /// Expansion coefficient I_{i,beta} of the second-kind differential
    /// Psi_{j,alpha}, at pole i.
    pub fn i_psi(
        &self,
        i: usize,
        beta: usize,
        j: usize,
        alpha: usize,
        cfg: &EvalConfig,
    ) -> Result<C64> {
        let m = &self.modulus;
        let ab = (alpha * beta) as f64;
        let eta = m.eta1(cfg)?;
        let lead =
            2.0 * ab * self.x_coeff(j, alpha, cfg)? * self.x_coeff(i, beta, cfg)? * eta;
        if i != j {
            let d = self.poles[i] - self.poles[j];
            let pd = special::wp_derivs(d, m, alpha + beta - 2, cfg)?;
            let mut acc = C64::new(0.0, 0.0);
            for k in 1..=alpha {
                let bk = self.bell(alpha, k, j, cfg)? * neg_one_pow(k) / factorial(k);
                for l in 1..=beta {
                    acc += bk * self.bell(beta, l, i, cfg)? / factorial(l) * pd[k + l - 2];
                }
            }
            Ok(lead - ab * acc)
        } else {
            let mut racc = C64::new(0.0, 0.0);
            let mut gacc = C64::new(0.0, 0.0);
            for k in 1..=alpha {
                let bk = self.bell(alpha, k, j, cfg)?;
                racc += bk * self.r_fn(beta + k, k + 1, j, cfg)?;
                let mut inner = C64::new(0.0, 0.0);
                for l in 1..=beta {
                    if k + l < 4 {
                        continue;
                    }
                    inner += binomial(k + l, l) / (k + l) as f64
                        * self.bell(beta, l, j, cfg)?
                        * m.g_weight((k + l) as u32, cfg)?;
                }
                gacc += neg_one_pow(k) * bk * inner;
            }
            Ok(lead + ab * racc - ab * gacc)
        }
    }

    /// The pairing s^i(phi_{s^j}) between third-kind differentials,
    /// i, j >= 1, in closed form (principal branches throughout).
    pub fn s_pairing(&self, i: usize, j: usize, cfg: &EvalConfig) -> Result<C64> {
        let m = &self.modulus;
        let eta = m.eta1(cfg)?;
        let log_neg_x10 = (-self.x_base(0, 1)).ln();
        if i != j {
            let k_ij = special::big_k(self.s(i) - self.s(j), m, 0, cfg)?;
            let k_i = special::big_k(self.s(i), m, 0, cfg)?;
            let k_j = special::big_k(self.s(j), m, 0, cfg)?;
            Ok(k_ij - k_i - k_j + 2.0 * self.s(i) * self.s(j) * eta + log_neg_x10)
        } else {
            let k_j = special::big_k(self.s(j), m, 0, cfg)?;
            Ok(self.x_base(j, 1).ln() + log_neg_x10 - 2.0 * k_j
                + 2.0 * self.s(j) * self.s(j) * eta)
        }
    }

    /// The genus-one bidifferential density w(z_P, z_Q) with respect to
    /// dz_P dz_Q.
    pub fn bidifferential(&self, zp: C64, zq: C64, cfg: &EvalConfig) -> Result<C64> {
        let m = &self.modulus;
        Ok(special::wp(zp - zq, m, 0, cfg)? + 2.0 * m.eta1(cfg)?)
    }

    /// Minimal distance between distinct poles modulo the lattice (and the
    /// shortest lattice vector, which bounds the distance of a pole to its
    /// own translates).
    pub fn min_pole_gap(&self) -> f64 {
        let tau = self.tau();
        let mut gap = f64::INFINITY;
        for &v in &[C64::new(1.0, 0.0), tau, tau + 1.0, tau - 1.0] {
            gap = gap.min(v.norm());
        }
        for i in 0..self.poles.len() {
            for j in (i + 1)..self.poles.len() {
                let (d, _, _) = reduce_to_cell(self.poles[i] - self.poles[j], &self.modulus);
                gap = gap.min(d.norm());
            }
        }
        gap
    }

    /// Simple ramification points of the covering: zeros of lambda' in the
    /// fundamental cell, found by a grid scan refined with Newton steps.
    pub fn ramification_points(&self, cfg: &EvalConfig) -> Result<Vec<C64>> {
        let tau = self.tau();
        let grid = 40;
        let mut roots: Vec<C64> = Vec::new();
        for gi in 0..grid {
            for gj in 0..grid {
                let mut z = C64::new((gi as f64 + 0.5) / grid as f64, 0.0)
                    + tau * ((gj as f64 + 0.5) / grid as f64);
                let mut ok = false;
                for _ in 0..40 {
                    let d = match self.lambda_derivs(z, 2, cfg) {
                        Ok(d) => d,
                        Err(_) => break,
                    };
                    if d[2].norm() < 1e-14 {
                        break;
                    }
                    let step = d[1] / d[2];
                    z -= step;
                    if step.norm() < 1e-12 {
                        ok = true;
                        break;
                    }
                }
                if !ok {
                    continue;
                }
                let d = match self.lambda_derivs(z, 1, cfg) {
                    Ok(d) => d,
                    Err(_) => continue,
                };
                if d[1].norm() > 1e-8 {
                    continue;
                }
                let (z0, _, _) = reduce_to_cell(z, &self.modulus);
                // skip spurious roots glued to a pole
                if self
                    .poles
                    .iter()
                    .any(|&p| reduce_to_cell(z0 - p, &self.modulus).0.norm() < 1e-6)
                {
                    continue;
                }
                let dup = roots
                    .iter()
                    .any(|&r| reduce_to_cell(r - z0, &self.modulus).0.norm() < 1e-8);
                if !dup {
                    roots.push(z0);
                }
            }
        }
        Ok(roots)
    }

    /// Semantic validity checks; never fails, reports each finding.
    pub fn validate(&self, cfg: &EvalConfig) -> Vec<ResidualReport> {
        let mut out = Vec::new();
        let tol = cfg.identity_tol;
        // residue closure sum_j (n_j+1) x_{n_j+1}(j) = 0
        let closure: C64 = (0..self.poles.len()).map(|j| self.residue(j)).sum();
        let scale: f64 = (0..self.poles.len())
            .map(|j| self.residue(j).norm())
            .fold(1.0, f64::max);
        out.push(ResidualReport::check(
            "point.residue-closure",
            closure.norm() / scale,
            tol,
        ));
        let min_lead = (0..self.poles.len())
            .map(|j| self.x_base(j, 1).norm())
            .fold(f64::INFINITY, f64::min);
        out.push(ResidualReport::flag(
            "point.leading-coefficients-nonzero",
            min_lead > 1e-12,
        ));
        out.push(ResidualReport::flag(
            "point.poles-distinct",
            self.min_pole_gap() > 1e-8,
        ));
        match self.ramification_points(cfg) {
            Ok(roots) => {
                let n = self.profile.dimension();
                out.push(ResidualReport::check(
                    "point.ramification-count",
                    (roots.len() as f64 - n as f64).abs(),
                    0.5,
                ));
                let mut simple = true;
                let mut values: Vec<C64> = Vec::new();
                for &r in &roots {
                    match self.lambda_derivs(r, 2, cfg) {
                        Ok(d) => {
                            if d[2].norm() < 1e-8 {
                                simple = false;
                            }
                            values.push(d[0]);
                        }
                        Err(_) => simple = false,
                    }
                }
                out.push(ResidualReport::flag("point.ramification-simple", simple));
                let mut distinct = true;
                for a in 0..values.len() {
                    for b in (a + 1)..values.len() {
                        if (values[a] - values[b]).norm() < 1e-8 {
                            distinct = false;
                        }
                    }
                }
                out.push(ResidualReport::flag("point.branch-values-distinct", distinct));
            }
            Err(_) => out.push(ResidualReport::flag("point.ramification-count", false)),
        }
        out
    }

    /// Trapezoid quadrature of an elliptic density over the a-cycle
    /// [base, base + 1]; spectrally accurate because the integrand is
    /// 1-periodic and analytic along the path.
    pub fn a_cycle_integral<F>(&self, f: F, nodes: usize, _cfg: &EvalConfig) -> Result<C64>
    where
        F: Fn(C64) -> Result<C64>,
    {
        let base = self.cycle_base(C64::new(1.0, 0.0));
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..nodes {
            acc += f(base + k as f64 / nodes as f64)?;
        }
        Ok(acc / nodes as f64)
    }

    /// Trapezoid quadrature over the b-cycle [base, base + tau].
    pub fn b_cycle_integral<F>(&self, f: F, nodes: usize, _cfg: &EvalConfig) -> Result<C64>
    where
        F: Fn(C64) -> Result<C64>,
    {
        let tau = self.tau();
        let base = self.cycle_base(tau);
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..nodes {
            acc += f(base + tau * (k as f64 / nodes as f64))?;
        }
        Ok(acc * tau / nodes as f64)
    }

    /// A base point for cycle quadrature along direction `dir`, re-seeded
    /// until the whole path stays away from the poles.
    pub fn cycle_base(&self, dir: C64) -> C64 {
        let tau = self.tau();
        let mut base = C64::new(0.11, 0.43 * tau.im);
        'seed: for _ in 0..16 {
            let samples = 96;
            for k in 0..samples {
                let z = base + dir * (k as f64 / samples as f64);
                for &p in &self.poles {
                    if reduce_to_cell(z - p, &self.modulus).0.norm() < 0.05 {
                        base += C64::new(0.13, 0.07 * tau.im);
                        continue 'seed;
                    }
                }
            }
            return base;
        }
        base
    }

    /// A base point for a-cycle quadrature, re-seeded away from poles.
    pub fn a_cycle_base(&self) -> C64 {
        self.cycle_base(C64::new(1.0, 0.0))
    }
}

// ---------------------------------------------------------------------------
// JSON serialization: {"profile":[...], "tau":[re,im], "poles":[[re,im],...],
// "x":{"j,alpha":[re,im]}, "u":[re,im]}
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct PointJson {
    profile: Vec<usize>,
    tau: [f64; 2],
    poles: Vec<[f64; 2]>,
    x: BTreeMap<String, [f64; 2]>,
    u: [f64; 2],
}

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

fn unpair(p: [f64; 2]) -> C64 {
    C64::new(p[0], p[1])
}

impl HurwitzPoint {
    pub fn to_json(&self) -> String {
        let mut x = BTreeMap::new();
        for j in 0..self.poles.len() {
            for r in 1..=(self.order(j) + 1) {
                x.insert(format!("{},{}", j, r), pair(self.x[j][r - 1]));
            }
        }
        let pj = PointJson {
            profile: self.profile.orders().to_vec(),
            tau: pair(self.tau()),
            poles: self.poles.iter().map(|&p| pair(p)).collect(),
            x,
            u: pair(self.u),
        };
        serde_json::to_string(&pj).expect("point serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let pj: PointJson =
            serde_json::from_str(s).map_err(|e| Error::InvalidPoint(format!("bad JSON: {e}")))?;
        let profile = BranchProfile::new(pj.profile)?;
        let mut x = Vec::with_capacity(profile.num_poles());
        for j in 0..profile.num_poles() {
            let mut row = Vec::with_capacity(profile.order(j) + 1);
            for r in 1..=(profile.order(j) + 1) {
                let key = format!("{},{}", j, r);
                let v = pj
                    .x
                    .get(&key)
                    .ok_or_else(|| Error::InvalidPoint(format!("missing x[{key}]")))?;
                row.push(unpair(*v));
            }
            x.push(row);
        }
        HurwitzPoint::new(
            profile,
            unpair(pj.tau),
            pj.poles.into_iter().map(unpair).collect(),
            x,
            unpair(pj.u),
        )
    }
}
