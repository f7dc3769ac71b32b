//! Small exact linear algebra over the integers and rationals.

use num::integer::Integer;
use num::{BigInt, BigRational, One, ToPrimitive, Zero};

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn gcd_all(xs: &[i64]) -> i64 {
    xs.iter().fold(0, |g, &x| gcd(g, x))
}

/// Divide by the gcd of the entries. The zero vector is returned unchanged.
pub fn primitive(v: &[i64]) -> Vec<i64> {
    let g = gcd_all(v);
    if g == 0 {
        return v.to_vec();
    }
    v.iter().map(|x| x / g).collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn to_rational(rows: &[Vec<i64>], ncols: usize) -> Vec<Vec<BigRational>> {
    rows.iter()
        .map(|r| {
            (0..ncols)
                .map(|j| BigRational::from_integer(BigInt::from(r[j])))
                .collect()
        })
        .collect()
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(m: &mut [Vec<BigRational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..ncols {
                    let t = &f * &m[row][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<i64>], ncols: usize) -> usize {
    let mut m = to_rational(rows, ncols);
    rref(&mut m, ncols).len()
}

/// Basis of the rational kernel `{x : rows * x = 0}`, each vector scaled to a
/// primitive integer vector.
pub fn nullspace(rows: &[Vec<i64>], ncols: usize) -> Vec<Vec<i64>> {
    let mut m = to_rational(rows, ncols);
    let pivots = rref(&mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::new();
    for &f in &free {
        let mut v = vec![BigRational::zero(); ncols];
        v[f] = BigRational::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[r][f].clone();
        }
        let lcm = v
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        basis.push(
            ints.iter()
                .map(|x| (x / &g).to_i64().expect("kernel entry overflow"))
                .collect(),
        );
    }
    basis
}

/// Determinant of a square integer matrix (Bareiss elimination).
pub fn det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    (sign * a[n - 1][n - 1]) as i64
}

/// Inverse of a square integer matrix when it is integral.
pub fn integer_inverse(m: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let n = m.len();
    let mut aug: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<BigRational> =
                r.iter().map(|&x| BigRational::from_integer(x.into())).collect();
            row.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            row
        })
        .collect();
    let pivots = rref(&mut aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    let mut inv = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let x = &aug[i][n + j];
            if !x.is_integer() {
                return None;
            }
            inv[i][j] = x.to_integer().to_i64()?;
        }
    }
    Some(inv)
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|r| (0..m).map(|j| (0..k).map(|t| r[t] * b[t][j]).sum()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_difference_row() {
        let k = nullspace(&[vec![-3, 2]], 2);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        assert_eq!(dot(v, &[-3, 2]), 0);
        assert_eq!(gcd_all(v).abs(), 1);
    }

    #[test]
    fn determinant_and_inverse() {
        let m = vec![vec![2, 1], vec![3, 2]];
        assert_eq!(det(&m), 1);
        let inv = integer_inverse(&m).unwrap();
        assert_eq!(mat_mul(&m, &inv), vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(det(&[vec![0, 2], vec![3, 0]]), -6);
        assert!(integer_inverse(&[vec![2, 0], vec![0, 1]]).is_none());
    }

    #[test]
    fn rank_of_collinear_points() {
        assert_eq!(rank(&[vec![1, 1], vec![2, 2]], 2), 1);
        assert_eq!(rank(&[vec![0, 0]], 2), 0);
    }
}
