//! Small numeric helpers shared across the crate.

use crate::C64;

/// n! as f64 (exact up to 22!, correctly rounded beyond).
pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Binomial coefficient C(n, k) as f64 for nonnegative integers.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut num = 1.0;
    for j in 0..k {
        num = num * (n - j) as f64 / (j + 1) as f64;
    }
    num
}

/// Generalized binomial C(-k, l) = (-1)^l C(k + l - 1, l), by the explicit
/// sign formula (never through Gamma functions).
pub fn binomial_neg(k: usize, l: usize) -> f64 {
    let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
    if k == 0 {
        // C(0, l) = delta_{l,0}
        return if l == 0 { 1.0 } else { 0.0 };
    }
    sign * binomial(k + l - 1, l)
}

/// (-1)^k as f64.
#[inline]
pub fn neg_one_pow(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Integer power of a complex number with nonnegative exponent.
pub fn cpow(z: C64, n: usize) -> C64 {
    let mut acc = C64::new(1.0, 0.0);
    let mut base = z;
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}

/// Integer power allowing negative exponents.
pub fn cpow_i(z: C64, n: i64) -> C64 {
    if n >= 0 {
        cpow(z, n as usize)
    } else {
        cpow(z, (-n) as usize).inv()
    }
}

/// Dense complex matrix product.
pub fn mat_mul(a: &[Vec<C64>], b: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let mut out = vec![vec![C64::new(0.0, 0.0); m]; n];
    for i in 0..n {
        for l in 0..k {
            let ail = a[i][l];
            for j in 0..m {
                out[i][j] += ail * b[l][j];
            }
        }
    }
    out
}

fn mat_norm1(a: &[Vec<C64>]) -> f64 {
    let n = a.len();
    (0..a[0].len())
        .map(|j| (0..n).map(|i| a[i][j].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Inverse of a dense complex matrix by Gauss-Jordan elimination with
/// partial pivoting, together with the 1-norm condition estimate.
pub fn mat_inv(a: &[Vec<C64>]) -> crate::Result<(Vec<Vec<C64>>, f64)> {
    let n = a.len();
    let mut aug: Vec<Vec<C64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }));
            r
        })
        .collect();
    for col in 0..n {
        let (piv, pnorm) = (col..n)
            .map(|r| (r, aug[r][col].norm()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if pnorm == 0.0 {
            return Err(crate::Error::SingularGram(f64::INFINITY));
        }
        aug.swap(col, piv);
        let inv_p = aug[col][col].inv();
        for j in 0..2 * n {
            aug[col][j] *= inv_p;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = aug[r][col];
            if f.norm() == 0.0 {
                continue;
            }
            for j in 0..2 * n {
                let v = aug[col][j];
                aug[r][j] -= f * v;
            }
        }
    }
    let inv: Vec<Vec<C64>> = aug.into_iter().map(|row| row[n..].to_vec()).collect();
    let cond = mat_norm1(a) * mat_norm1(&inv);
    Ok((inv, cond))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_inverse() {
        let a = vec![
            vec![C64::new(2.0, 1.0), C64::new(0.0, -1.0)],
            vec![C64::new(1.0, 0.0), C64::new(1.0, 1.0)],
        ];
        let (inv, cond) = mat_inv(&a).unwrap();
        let id = mat_mul(&a, &inv);
        assert!((id[0][0] - C64::new(1.0, 0.0)).norm() < 1e-14);
        assert!(id[0][1].norm() < 1e-14);
        assert!(id[1][0].norm() < 1e-14);
        assert!((id[1][1] - C64::new(1.0, 0.0)).norm() < 1e-14);
        assert!(cond.is_finite() && cond >= 1.0);
        let sing = vec![
            vec![C64::new(1.0, 0.0), C64::new(2.0, 0.0)],
            vec![C64::new(2.0, 0.0), C64::new(4.0, 0.0)],
        ];
        assert!(mat_inv(&sing).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(8, 0), 1.0);
        assert_eq!(binomial(3, 5), 0.0);
        // C(-2, 3) = (-1)^3 C(4,3) = -4
        assert_eq!(binomial_neg(2, 3), -4.0);
        assert_eq!(binomial_neg(1, 0), 1.0);
        // C(-1, l) = (-1)^l
        assert_eq!(binomial_neg(1, 4), 1.0);
        assert_eq!(binomial_neg(1, 5), -1.0);
    }

    #[test]
    fn powers() {
        let z = C64::new(1.5, -0.5);
        assert!((cpow(z, 3) - z * z * z).norm() < 1e-15);
        assert!((cpow_i(z, -2) - (z * z).inv()).norm() < 1e-15);
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), 1.0);
        assert_eq!(factorial(5), 120.0);
    }
}
