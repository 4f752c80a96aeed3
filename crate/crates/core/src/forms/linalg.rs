//! Linear systems over `Z/p^mZ`.
//!
//! `Z/p^mZ` is a local ring, so every nonzero entry is `p^v * unit`. Elimination
//! pivots on an entry of minimal valuation over the whole remaining submatrix;
//! then every entry to the right of a pivot is divisible by the pivot's
//! p-power, and solvability reduces to divisibility of the transformed
//! right-hand side.

use crate::arith::PrimePowerModulus;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSolution {
    pub values: Vec<u64>,
    /// No other solution exists modulo `p^m`.
    pub unique: bool,
}

/// Solves `sum_i x_i * rows[i] = target` over `Z/p^mZ`.
///
/// Each row must have the same length as `target`. Returns `None` if the
/// system is inconsistent.
pub fn solve_left(rows: &[Vec<u64>], target: &[u64], modulus: &PrimePowerModulus) -> Option<LinearSolution> {
    let d = rows.len();
    let n_eq = target.len();
    let md = modulus;
    for row in rows {
        assert_eq!(row.len(), n_eq, "row length must match target length");
    }
    // One equation per coefficient index; last column is the right-hand side.
    let mut a: Vec<Vec<u64>> = (0..n_eq)
        .map(|e| {
            let mut eq: Vec<u64> = rows.iter().map(|r| r[e] % md.modulus()).collect();
            eq.push(target[e] % md.modulus());
            eq
        })
        .collect();

    let mut free_cols: Vec<usize> = (0..d).collect();
    let mut pivots: Vec<(usize, usize, u32)> = Vec::new();
    let mut r = 0;
    while r < n_eq && !free_cols.is_empty() {
        let mut best: Option<(usize, usize, u32)> = None;
        'search: for (row, eq) in a.iter().enumerate().skip(r) {
            for (ci, &c) in free_cols.iter().enumerate() {
                if eq[c] == 0 {
                    continue;
                }
                let v = md.valuation(eq[c]);
                if best.is_none_or(|(_, _, bv)| v < bv) {
                    best = Some((row, ci, v));
                    if v == 0 {
                        break 'search;
                    }
                }
            }
        }
        let Some((row, ci, v)) = best else { break };
        a.swap(r, row);
        let c = free_cols.remove(ci);
        let unit_inv = md
            .inverse(a[r][c] / md.p_power(v))
            .expect("cofactor of the p-power is a unit");
        let pivot_row = a[r].clone();
        for eq in a.iter_mut().skip(r + 1) {
            if eq[c] == 0 {
                continue;
            }
            let factor = md.mul(eq[c] / md.p_power(v), unit_inv);
            for (x, &y) in eq.iter_mut().zip(&pivot_row) {
                *x = md.sub(*x, md.mul(factor, y));
            }
        }
        pivots.push((r, c, v));
        r += 1;
    }

    if a[r..].iter().any(|eq| eq[d] != 0) {
        return None;
    }

    let mut x = vec![0u64; d];
    for &(row, c, v) in pivots.iter().rev() {
        let mut rhs = a[row][d];
        for (c2, &xv) in x.iter().enumerate() {
            if c2 != c && xv != 0 {
                rhs = md.sub(rhs, md.mul(a[row][c2], xv));
            }
        }
        if rhs != 0 && md.valuation(rhs) < v {
            return None;
        }
        let unit_inv = md.inverse(a[row][c] / md.p_power(v)).expect("unit");
        x[c] = md.mul(rhs / md.p_power(v), unit_inv);
    }
    let unique = pivots.len() == d && pivots.iter().all(|&(_, _, v)| v == 0);
    Some(LinearSolution { values: x, unique })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn apply(rows: &[Vec<u64>], x: &[u64], md: &PrimePowerModulus) -> Vec<u64> {
        let n = rows.first().map_or(0, |r| r.len());
        (0..n)
            .map(|e| {
                rows.iter()
                    .zip(x)
                    .fold(0, |acc, (r, &xi)| md.add(acc, md.mul(r[e], xi)))
            })
            .collect()
    }

    /// Exhaustive search over all coefficient vectors.
    fn brute_force_solvable(rows: &[Vec<u64>], target: &[u64], md: &PrimePowerModulus) -> bool {
        let n = md.modulus();
        let d = rows.len();
        let total = n.pow(d as u32);
        (0..total).any(|mut idx| {
            let x: Vec<u64> = (0..d)
                .map(|_| {
                    let v = idx % n;
                    idx /= n;
                    v
                })
                .collect();
            apply(rows, &x, md) == target
        })
    }

    #[test]
    fn needs_full_pivoting() {
        // Equations: 5*x0 + x1 = b0, 5*x1 = b1 over Z/25.
        let md = PrimePowerModulus::new(5, 2).unwrap();
        let rows = vec![vec![5, 0], vec![1, 5]];
        for b0 in 0..25 {
            for b1 in 0..25 {
                let target = [b0, b1];
                let got = solve_left(&rows, &target, &md);
                assert_eq!(
                    got.is_some(),
                    brute_force_solvable(&rows, &target, &md),
                    "b = {target:?}"
                );
                if let Some(sol) = got {
                    assert_eq!(apply(&rows, &sol.values, &md), target);
                }
            }
        }
    }

    #[test]
    fn zero_divisor_pivot() {
        let md = PrimePowerModulus::new(5, 2).unwrap();
        let rows = vec![vec![5, 10]];
        assert!(solve_left(&rows, &[15, 10], &md).is_none());
        let sol = solve_left(&rows, &[15, 5], &md).unwrap();
        assert!(!sol.unique);
        assert_eq!(apply(&rows, &sol.values, &md), vec![15, 5]);
    }

    #[test]
    fn empty_system() {
        let md = PrimePowerModulus::new(7, 1).unwrap();
        assert!(solve_left(&[], &[0, 0], &md).is_some());
        assert!(solve_left(&[], &[0, 3], &md).is_none());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn agrees_with_brute_force(
            entries in proptest::collection::vec(0u64..25, 6),
            target in proptest::collection::vec(0u64..25, 3),
            scale in prop::sample::select(vec![1u64, 5]),
        ) {
            let md = PrimePowerModulus::new(5, 2).unwrap();
            let rows: Vec<Vec<u64>> = entries.chunks(3).map(|c| c.iter().map(|&v| md.mul(v, scale)).collect()).collect();
            let got = solve_left(&rows, &target, &md);
            prop_assert_eq!(got.is_some(), brute_force_solvable(&rows, &target, &md));
            if let Some(sol) = got {
                prop_assert_eq!(apply(&rows, &sol.values, &md), target);
            }
        }
    }
}
