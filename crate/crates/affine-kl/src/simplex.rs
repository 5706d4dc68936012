//! Exact phase-1 simplex over the rationals: feasibility of `A x = b, x >= 0`.
//!
//! Small and dense; Bland's rule guarantees termination. Used to certify
//! cone-membership facts exactly.

#[cfg(test)]
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Find `x >= 0` with `A x = b`, or None if infeasible.
pub fn nonnegative_solution(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let m = a.len();
    if m == 0 {
        return Some(vec![]);
    }
    let n = a[0].len();

    // normalize rows so b >= 0
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    let mut rhs: Vec<BigRational> = Vec::with_capacity(m);
    for i in 0..m {
        if b[i].is_negative() {
            rows.push(a[i].iter().map(|x| -x.clone()).collect());
            rhs.push(-b[i].clone());
        } else {
            rows.push(a[i].clone());
            rhs.push(b[i].clone());
        }
    }

    // tableau with artificial variables n..n+m; minimize their sum
    let total = n + m;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = rows[i].clone();
        for j in 0..m {
            row.push(if i == j { BigRational::one() } else { BigRational::zero() });
        }
        row.push(rhs[i].clone());
        t.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // objective row: sum of artificial rows (cost = sum of artificials)
    let mut obj = vec![BigRational::zero(); total + 1];
    for row in t.iter() {
        for (j, o) in obj.iter_mut().enumerate() {
            *o += &row[j];
        }
    }

    loop {
        // entering: first non-artificial column with positive reduced cost (Bland)
        let Some(enter) = (0..n).find(|&j| obj[j].is_positive() && !basis.contains(&j)) else {
            break;
        };
        // ratio test, Bland tie-break by basis index
        let mut pivot: Option<usize> = None;
        let mut best: Option<BigRational> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][total] / &t[i][enter];
                let better = match &best {
                    None => true,
                    Some(b) => &ratio < b || (&ratio == b && basis[i] < basis[pivot.unwrap()]),
                };
                if better {
                    best = Some(ratio);
                    pivot = Some(i);
                }
            }
        }
        let Some(p) = pivot else {
            // unbounded in phase 1 cannot happen; treat as infeasible
            return None;
        };
        // pivot on (p, enter)
        let inv = t[p][enter].clone();
        for x in t[p].iter_mut() {
            *x /= &inv;
        }
        for i in 0..m {
            if i != p && !t[i][enter].is_zero() {
                let f = t[i][enter].clone();
                for j in 0..=total {
                    let delta = &f * &t[p][j];
                    t[i][j] -= delta;
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for j in 0..=total {
                let delta = &f * &t[p][j];
                obj[j] -= delta;
            }
        }
        basis[p] = enter;
    }

    if !obj[total].is_zero() {
        return None; // residual artificial value: infeasible
    }
    let mut x = vec![BigRational::zero(); n];
    for i in 0..m {
        if basis[i] < n {
            x[basis[i]] = t[i][total].clone();
        } else if !t[i][total].is_zero() {
            return None; // degenerate artificial stuck at positive value
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(p))
    }

    #[test]
    fn feasible_cone() {
        // (1,1) = x*(1,0) + y*(0,1), x,y >= 0
        let a = vec![vec![r(1), r(0)], vec![r(0), r(1)]];
        let b = vec![r(1), r(1)];
        let x = nonnegative_solution(&a, &b).unwrap();
        assert_eq!(x, vec![r(1), r(1)]);
    }

    #[test]
    fn infeasible_cone() {
        // -1 = x with x >= 0
        let a = vec![vec![r(1)]];
        let b = vec![r(-1)];
        assert!(nonnegative_solution(&a, &b).is_none());
    }

    #[test]
    fn underdetermined() {
        // x - y = 0 has the nonnegative solution 0
        let a = vec![vec![r(1), r(-1)]];
        let b = vec![r(0)];
        assert!(nonnegative_solution(&a, &b).is_some());
    }
}
