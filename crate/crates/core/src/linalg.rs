//! Exact linear algebra over ℚ: rank by fraction-free elimination and
//! feasibility of linear inequality systems.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

// Scales a rational row to a primitive-free integer row with the same span.
fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for x in row {
        l = l.lcm(x.denom());
    }
    row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
}

/// Rank of a rational matrix given by rows.
///
/// Rows are cleared of denominators and reduced with Bareiss' fraction-free
/// elimination, so every intermediate entry stays an integer minor.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| integer_row(r)).collect();
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut r = 0;
    let mut prev = BigInt::one();
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..nrows {
            for j in c + 1..ncols {
                let v = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                // exact by Sylvester's identity
                m[i][j] = v / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

/// Rank by plain rational Gauss-Jordan elimination; used as a cross-check.
pub fn rank_rational(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in 0..nrows {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &pivot;
                for j in c..ncols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        r += 1;
    }
    r
}

/// Finds `x` with `a·x ≥ b` (free variables), or `None` if infeasible.
///
/// Exact phase-one simplex with Bland's rule on the standard form
/// `A x⁺ − A x⁻ − s = b`, all variables non-negative.
pub fn feasible_point(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let m = a.len();
    let nv = a.first().map_or(0, |r| r.len());
    if m == 0 {
        return Some(alloc::vec![Rational::zero(); nv]);
    }
    // columns: x⁺ (nv), x⁻ (nv), slack (m), artificial (m), rhs
    let ncols = 2 * nv + 2 * m;
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        let sign = if b[i].is_negative() { -rat(1) } else { rat(1) };
        let mut row = alloc::vec![Rational::zero(); ncols + 1];
        for j in 0..nv {
            row[j] = &a[i][j] * &sign;
            row[nv + j] = -&a[i][j] * &sign;
        }
        row[2 * nv + i] = -sign.clone();
        row[2 * nv + m + i] = rat(1);
        row[ncols] = &b[i] * &sign;
        t.push(row);
    }
    let mut basis: Vec<usize> = (0..m).map(|i| 2 * nv + m + i).collect();
    // objective row: minimise sum of artificials, stored as reduced costs
    let mut obj = alloc::vec![Rational::zero(); ncols + 1];
    for row in &t {
        for j in 0..=ncols {
            obj[j] -= &row[j];
        }
    }
    for i in 0..m {
        obj[2 * nv + m + i] = Rational::zero();
    }
    loop {
        // Bland: smallest index with negative reduced cost
        let Some(enter) = (0..ncols).find(|&j| obj[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][ncols] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            // unbounded cannot happen in phase one
            break;
        };
        pivot(&mut t, &mut obj, r, enter);
        basis[r] = enter;
    }
    if !obj[ncols].is_zero() {
        return None;
    }
    let mut vals = alloc::vec![Rational::zero(); ncols];
    for (i, &bv) in basis.iter().enumerate() {
        vals[bv] = t[i][ncols].clone();
    }
    Some((0..nv).map(|j| &vals[j] - &vals[nv + j]).collect())
}

fn pivot(t: &mut [Vec<Rational>], obj: &mut [Rational], r: usize, c: usize) {
    let p = t[r][c].clone();
    for x in t[r].iter_mut() {
        *x /= &p;
    }
    let prow = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i != r && !row[c].is_zero() {
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&prow) {
                *x -= &f * y;
            }
        }
    }
    if !obj[c].is_zero() {
        let f = obj[c].clone();
        for (x, y) in obj.iter_mut().zip(&prow) {
            *x -= &f * y;
        }
    }
}

/// Fourier–Motzkin decision of `a·x ≥ b`. Exponential; for small systems
/// and cross-checks only.
pub fn fourier_motzkin_feasible(a: &[Vec<Rational>], b: &[Rational]) -> bool {
    let nv = a.first().map_or(0, |r| r.len());
    let mut rows: Vec<(Vec<Rational>, Rational)> =
        a.iter().cloned().zip(b.iter().cloned()).collect();
    for var in (0..nv).rev() {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut rest = Vec::new();
        for (row, rhs) in rows {
            if row[var].is_positive() {
                pos.push((row, rhs));
            } else if row[var].is_negative() {
                neg.push((row, rhs));
            } else {
                rest.push((row, rhs));
            }
        }
        for (pr, pb) in &pos {
            for (nr, nb) in &neg {
                let cp = pr[var].clone();
                let cn = -nr[var].clone();
                let row: Vec<Rational> =
                    pr.iter().zip(nr).map(|(x, y)| x * &cn + y * &cp).collect();
                let rhs = pb * &cn + nb * &cp;
                rest.push((row, rhs));
            }
        }
        rest.sort();
        rest.dedup();
        rows = rest;
    }
    rows.iter().all(|(_, rhs)| !rhs.is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| rat(x)).collect())
            .collect()
    }

    #[test]
    fn rank_small_matrices() {
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]])), 3);
        assert_eq!(rank(&m(&[&[0, 0], &[0, 0]])), 0);
        let half = vec![vec![frac(1, 2), frac(1, 3)], vec![rat(3), rat(2)]];
        assert_eq!(rank(&half), 1);
        assert_eq!(rank_rational(&half), 1);
    }

    #[test]
    fn simplex_matches_fourier_motzkin() {
        // x ≥ 1, y ≥ 1, x + y ≤ 3  → feasible
        let a = m(&[&[1, 0], &[0, 1], &[-1, -1]]);
        let b = vec![rat(1), rat(1), rat(-3)];
        let x = feasible_point(&a, &b).unwrap();
        for (row, rhs) in a.iter().zip(&b) {
            let lhs: Rational = row.iter().zip(&x).map(|(p, q)| p * q).sum();
            assert!(lhs >= *rhs);
        }
        assert!(fourier_motzkin_feasible(&a, &b));
        // x + y ≤ 1 instead → infeasible
        let b = vec![rat(1), rat(1), rat(-1)];
        assert!(feasible_point(&a, &b).is_none());
        assert!(!fourier_motzkin_feasible(&a, &b));
    }

    #[test]
    fn strict_homogeneous_cone() {
        // x - y > 0 and y - x > 0 scaled to ≥ 1: infeasible
        let a = m(&[&[1, -1], &[-1, 1]]);
        let b = vec![rat(1), rat(1)];
        assert!(feasible_point(&a, &b).is_none());
    }
}
