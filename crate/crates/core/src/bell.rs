//! Partial ordinary Bell polynomials, complete Bell polynomials, the
//! rational companion functions R_{mu,k}, and the Bell operator.
//!
//! Evaluation is numeric over complex coefficient vectors; the partition
//! enumeration of the defining sum is used only as a test oracle.

use crate::error::{Error, Result};
use crate::util::{binomial_neg, cpow, factorial};
use crate::C64;

/// Ordered coefficients x_1, x_2, ... (indexed from 1).
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    xs: Vec<C64>,
}

impl CoefficientVector {
    pub fn new(xs: Vec<C64>) -> Self {
        CoefficientVector { xs }
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// x_i with 1-based index.
    pub fn get(&self, i: usize) -> Result<C64> {
        if i == 0 || i > self.xs.len() {
            return Err(Error::IndexOutOfRange(i, self.xs.len()));
        }
        Ok(self.xs[i - 1])
    }

    /// The vector (x_2, x_3, ...) appearing in shifted-variable Bell sums.
    pub fn shifted(&self) -> CoefficientVector {
        CoefficientVector::new(self.xs.iter().skip(1).copied().collect())
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.xs
    }
}

impl From<Vec<C64>> for CoefficientVector {
    fn from(xs: Vec<C64>) -> Self {
        CoefficientVector::new(xs)
    }
}

/// Full triangle B_{n,k} for n = 0..=nmax, k = 0..=nmax, by the recurrence
/// B_{n+1,k+1} = sum_{j=k}^{n} x_{n+1-j} B_{j,k}, memoized within the call.
fn bell_table(nmax: usize, xs: &CoefficientVector) -> Result<Vec<Vec<C64>>> {
    let zero = C64::new(0.0, 0.0);
    let mut t = vec![vec![zero; nmax + 1]; nmax + 1];
    t[0][0] = C64::new(1.0, 0.0);
    for n1 in 1..=nmax {
        for k1 in 1..=n1 {
            // B_{n1, k1} with n1 = n+1, k1 = k+1
            let (n, k) = (n1 - 1, k1 - 1);
            let mut acc = zero;
            for j in k..=n {
                acc += xs.get(n + 1 - j)? * t[j][k];
            }
            t[n1][k1] = acc;
        }
    }
    Ok(t)
}

/// Partial ordinary Bell polynomial B_{n,k}(x_1, ..., x_{n-k+1}).
///
/// Column-by-column recurrence B_{j,l} = sum_i x_{j-i} B_{i,l-1}, bounded
/// so that only x_1..x_{n-k+1} are ever touched.
pub fn bell_partial(n: usize, k: usize, xs: &CoefficientVector) -> Result<C64> {
    if k > n {
        return Err(Error::InvalidOrder { n, k });
    }
    if n == 0 {
        return Ok(C64::new(1.0, 0.0)); // B_{0,0} = 1
    }
    if k == 0 {
        return Ok(C64::new(0.0, 0.0)); // B_{n,0} = 0 for n >= 1
    }
    if xs.len() < n - k + 1 {
        return Err(Error::IndexOutOfRange(n - k + 1, xs.len()));
    }
    let zero = C64::new(0.0, 0.0);
    // col[j] = B_{j,l} for the current column l; indices j in l..=n-k+l
    let mut col = vec![zero; n + 1];
    for j in 1..=(n - k + 1) {
        col[j] = xs.get(j)?;
    }
    for l in 2..=k {
        let jmax = n - k + l;
        let mut next = vec![zero; n + 1];
        for j in l..=jmax {
            let mut acc = zero;
            for i in (l - 1)..j {
                acc += xs.get(j - i)? * col[i];
            }
            next[j] = acc;
        }
        col = next;
    }
    Ok(col[n])
}

/// n-th complete exponential Bell polynomial
/// B_n(x_1,...,x_n) = sum_k (n!/k!) B_{n,k}(x_1/1!, ..., x_{n-k+1}/(n-k+1)!),
/// with B_0 = 1.
pub fn bell_complete(n: usize, xs: &CoefficientVector) -> Result<C64> {
    if n == 0 {
        return Ok(C64::new(1.0, 0.0));
    }
    if xs.len() < n {
        return Err(Error::IndexOutOfRange(n, xs.len()));
    }
    let scaled = CoefficientVector::new(
        (1..=n).map(|i| xs.as_slice()[i - 1] / factorial(i)).collect(),
    );
    let table = bell_table(n, &scaled)?;
    let mut acc = C64::new(0.0, 0.0);
    for k in 1..=n {
        acc += factorial(n) / factorial(k) * table[n][k];
    }
    Ok(acc)
}

/// The rational function R_{mu,k}, evaluated through its Bell-polynomial
/// sum form
/// R_{mu,k} = sum_{l=0}^{mu-1} (1/(l+1)) C(-k,l) x_1^{-k-l}
///            B_{mu,l+1}(x_2, ..., x_{mu-l+1}).
pub fn r_function(mu: usize, k: usize, xs: &CoefficientVector) -> Result<C64> {
    if mu + 1 == k {
        return Err(Error::ForbiddenOrder(mu, k));
    }
    if mu == 0 || k == 0 {
        return Err(Error::InvalidOrder { n: mu, k });
    }
    if xs.len() < mu + 1 {
        return Err(Error::IndexOutOfRange(mu + 1, xs.len()));
    }
    let x1 = xs.get(1)?;
    if x1.norm() == 0.0 {
        return Err(Error::ZeroLeadingCoefficient);
    }
    let shifted = xs.shifted();
    let table = bell_table(mu, &shifted)?;
    let x1_inv = x1.inv();
    let mut acc = C64::new(0.0, 0.0);
    for l in 0..mu {
        let b = table[mu][l + 1];
        acc += binomial_neg(k, l) / (l + 1) as f64 * cpow(x1_inv, k + l) * b;
    }
    Ok(acc)
}

/// The (j, alpha)-Bell operator applied to a function f:
/// sum_{k=1}^{alpha} (1/k!) B_{alpha,k}(x_1,...,x_{alpha-k+1}) f^{(k)}(v),
/// where `f_derivs[k]` holds f^{(k)}(v) (index 0 unused).
pub fn bell_operator(alpha: usize, xs: &CoefficientVector, f_derivs: &[C64]) -> Result<C64> {
    if alpha == 0 {
        return Ok(C64::new(0.0, 0.0));
    }
    if f_derivs.len() < alpha + 1 {
        return Err(Error::IndexOutOfRange(alpha, f_derivs.len()));
    }
    if xs.len() < alpha {
        return Err(Error::IndexOutOfRange(alpha, xs.len()));
    }
    let table = bell_table(alpha, xs)?;
    let mut acc = C64::new(0.0, 0.0);
    for k in 1..=alpha {
        acc += table[alpha][k] / factorial(k) * f_derivs[k];
    }
    Ok(acc)
}
