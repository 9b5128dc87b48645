use num_traits::{Signed, Zero};

use crate::exact::Rational;

/// Result of an exact linear program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rational, point: Vec<Rational> },
    Unbounded,
}

/// Maximizes `c·x` over `{x ≥ 0 : A x ≤ b}` with exact rationals and Bland's rule.
///
/// Requires `b ≥ 0` so that the origin is a feasible starting vertex;
/// returns `None` otherwise or on inconsistent dimensions.
pub fn maximize(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> Option<LpOutcome> {
    let m = a.len();
    let n = c.len();
    if b.len() != m || a.iter().any(|row| row.len() != n) || b.iter().any(Signed::is_negative) {
        return None;
    }
    // Tableau columns: n originals, m slacks, then the right-hand side.
    let width = n + m + 1;
    let mut t: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let mut row = vec![Rational::zero(); width];
            row[..n].clone_from_slice(&a[i]);
            row[n + i] = Rational::from_integer(1.into());
            row[width - 1] = b[i].clone();
            row
        })
        .collect();
    let mut obj: Vec<Rational> = vec![Rational::zero(); width];
    for j in 0..n {
        obj[j] = -&c[j];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    loop {
        let Some(enter) = (0..n + m).find(|&j| obj[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
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
            return Some(LpOutcome::Unbounded);
        };
        let piv = t[r][enter].clone();
        for v in t[r].iter_mut() {
            *v /= &piv;
        }
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != r && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for (x, p) in obj.iter_mut().zip(&pivot_row) {
                *x -= &f * p;
            }
        }
        basis[r] = enter;
    }
    let mut point = vec![Rational::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            point[bv] = t[i][width - 1].clone();
        }
    }
    Some(LpOutcome::Optimal {
        value: obj[width - 1].clone(),
        point,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    #[test]
    fn textbook_program() {
        // max 3x + 2y, x + y ≤ 4, x + 3y ≤ 6, x ≤ 3
        let a = vec![vec![int(1), int(1)], vec![int(1), int(3)], vec![int(1), int(0)]];
        let out = maximize(&a, &[int(4), int(6), int(3)], &[int(3), int(2)]).unwrap();
        assert_eq!(
            out,
            LpOutcome::Optimal {
                value: int(11),
                point: vec![int(3), int(1)]
            }
        );
    }

    #[test]
    fn fractional_optimum() {
        let a = vec![vec![int(2), int(1)]];
        let out = maximize(&a, &[int(1)], &[int(1), int(0)]).unwrap();
        assert_eq!(
            out,
            LpOutcome::Optimal {
                value: rat(1, 2),
                point: vec![rat(1, 2), int(0)]
            }
        );
    }

    #[test]
    fn unbounded_direction() {
        let a = vec![vec![int(1), int(-1)]];
        assert_eq!(maximize(&a, &[int(1)], &[int(1), int(1)]), Some(LpOutcome::Unbounded));
    }

    #[test]
    fn infeasible_origin_rejected() {
        assert_eq!(maximize(&[vec![int(1)]], &[int(-1)], &[int(1)]), None);
    }
}
