//! Exact integral LLL reduction.
//!
//! All Gram-Schmidt data is kept as integers (the subdeterminants `d_i` and
//! the scaled coefficients `lambda_{k,j} = d_{j+1} mu_{k,j}`), so no rounding
//! ever enters the reduction itself.

use rug::Integer;

/// Reduces the rows of `basis` in place with parameter `delta = num/den`.
///
/// The rows must be linearly independent. Returns `false` if a dependency
/// is detected, in which case the basis is left partially reduced.
pub fn lll_reduce(basis: &mut [Vec<Integer>], delta: (u32, u32)) -> bool {
    let n = basis.len();
    if n <= 1 {
        return true;
    }
    let dot = |a: &[Integer], b: &[Integer]| -> Integer {
        a.iter().zip(b).map(|(x, y)| Integer::from(x * y)).sum()
    };
    // d[0] = 1 and d[i + 1] belongs to row i.
    let mut d = vec![Integer::from(1); n + 1];
    let mut lam = vec![vec![Integer::new(); n]; n];
    d[1] = dot(&basis[0], &basis[0]);
    if d[1] == 0 {
        return false;
    }
    let mut k = 1;
    let mut k_max = 0;

    let red = |basis: &mut [Vec<Integer>], lam: &mut [Vec<Integer>], d: &[Integer], k: usize, l: usize| {
        let two_lam = Integer::from(&lam[k][l] * 2);
        if two_lam.clone().abs() <= d[l + 1] {
            return;
        }
        // q = round(lam / d)
        let q = {
            let num = Integer::from(&two_lam + &d[l + 1]);
            let den = Integer::from(&d[l + 1] * 2);
            num.div_rem_floor(den).0
        };
        let (head, tail) = basis.split_at_mut(k);
        for (x, y) in tail[0].iter_mut().zip(&head[l]) {
            *x -= Integer::from(&q * y);
        }
        lam[k][l] -= Integer::from(&q * &d[l + 1]);
        for i in 0..l {
            let t = Integer::from(&q * &lam[l][i]);
            lam[k][i] -= t;
        }
    };

    while k < n {
        if k > k_max {
            k_max = k;
            for j in 0..=k {
                let mut u = dot(&basis[k], &basis[j]);
                for i in 0..j {
                    u = (Integer::from(&d[i + 1] * &u) - Integer::from(&lam[k][i] * &lam[j][i])) / &d[i];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    if u == 0 {
                        return false;
                    }
                    d[k + 1] = u;
                }
            }
        }
        red(basis, &mut lam, &d, k, k - 1);
        let lhs = Integer::from(&d[k + 1] * &d[k - 1]) * delta.1;
        let rhs = Integer::from(d[k].square_ref()) * delta.0 - Integer::from(lam[k][k - 1].square_ref()) * delta.1;
        if lhs < rhs {
            swap(basis, &mut lam, &mut d, k, k_max);
            k = (k - 1).max(1);
        } else {
            for l in (0..k - 1).rev() {
                red(basis, &mut lam, &d, k, l);
            }
            k += 1;
        }
    }
    true
}

fn swap(basis: &mut [Vec<Integer>], lam: &mut [Vec<Integer>], d: &mut [Integer], k: usize, k_max: usize) {
    basis.swap(k, k - 1);
    for j in 0..k - 1 {
        let t = std::mem::take(&mut lam[k][j]);
        lam[k][j] = std::mem::replace(&mut lam[k - 1][j], t);
    }
    let l = lam[k][k - 1].clone();
    let b = (Integer::from(&d[k - 1] * &d[k + 1]) + Integer::from(l.square_ref())) / &d[k];
    for i in k + 1..=k_max {
        let t = lam[i][k].clone();
        lam[i][k] = (Integer::from(&d[k + 1] * &lam[i][k - 1]) - Integer::from(&l * &t)) / &d[k];
        lam[i][k - 1] = (Integer::from(&b * &t) + Integer::from(&l * &lam[i][k])) / &d[k + 1];
    }
    d[k] = b;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn norm2(v: &[Integer]) -> Integer {
        v.iter().map(|x| Integer::from(x.square_ref())).sum()
    }

    #[test]
    fn reduces_textbook_basis() {
        // Classic example: the reduced basis has squared norms 3, 2 (in some order)
        // and the lattice determinant is preserved.
        let mut b: Vec<Vec<Integer>> = [[1, 1, 1], [-1, 0, 2], [3, 5, 6]]
            .iter()
            .map(|r| r.iter().map(|&x| Integer::from(x)).collect())
            .collect();
        assert!(lll_reduce(&mut b, (99, 100)));
        let norms: Vec<Integer> = b.iter().map(|v| norm2(v)).collect();
        assert!(norms.iter().all(|x| *x <= 6), "{norms:?}");
        let det = |m: &[Vec<Integer>]| -> Integer {
            let e = |r: usize, c: usize| m[r][c].clone();
            e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
                + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0))
        };
        assert_eq!(det(&b).abs(), 3);
    }

    #[test]
    fn finds_small_integer_relation() {
        // Integer relations among 1.5, 0.75, 0.375 are exactly the solutions of 4a + 2b + c = 0.
        let scale = Integer::from(Integer::u_pow_u(10, 12));
        let vals: [Integer; 3] = [Integer::from(&scale * 3) / 2, Integer::from(&scale * 3) / 4, Integer::from(&scale * 3) / 8];
        let mut b: Vec<Vec<Integer>> = (0..3)
            .map(|i| {
                let mut row = vec![Integer::new(); 4];
                row[i] = Integer::from(1);
                row[3] = vals[i].clone();
                row
            })
            .collect();
        assert!(lll_reduce(&mut b, (3, 4)));
        let first = &b[0];
        assert_eq!(first[3], 0);
        let a = Integer::from(&first[0] * 4) + Integer::from(&first[1] * 2) + &first[2];
        assert_eq!(a, 0, "{first:?}");
    }

    #[test]
    fn dependent_rows_are_reported() {
        let mut b: Vec<Vec<Integer>> =
            vec![vec![Integer::from(1), Integer::from(2)], vec![Integer::from(2), Integer::from(4)]];
        assert!(!lll_reduce(&mut b, (3, 4)));
    }
}
