//! Floating-point LLL reduction and Babai's nearest-plane algorithm, for
//! the small (dimension <= 9) closest-vector problems that accelerate
//! simultaneous-approximation searches.

/// Gram-Schmidt orthogonalisation; returns (b_star, mu).
fn gram_schmidt(basis: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let m = basis.len();
    let mut b_star: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut mu = vec![vec![0.0; m]; m];
    for i in 0..m {
        let mut v = basis[i].clone();
        for j in 0..i {
            let denom = dot(&b_star[j], &b_star[j]);
            mu[i][j] = if denom > 0.0 {
                dot(&basis[i], &b_star[j]) / denom
            } else {
                0.0
            };
            for (vk, bk) in v.iter_mut().zip(&b_star[j]) {
                *vk -= mu[i][j] * bk;
            }
        }
        b_star.push(v);
    }
    (b_star, mu)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// In-place LLL reduction of the row basis with parameter `delta`.
///
/// Recomputes the GSO after every change; fine for tiny dimensions.
pub fn lll_reduce(basis: &mut [Vec<f64>], delta: f64) {
    let m = basis.len();
    if m <= 1 {
        return;
    }
    let mut k = 1usize;
    let mut guard = 0usize;
    while k < m {
        guard += 1;
        if guard > 10_000 {
            break; // numerical stalemate; the basis is still usable
        }
        // Size-reduce row k, refreshing mu after each subtraction.
        for j in (0..k).rev() {
            let (_, mu) = gram_schmidt(basis);
            let r = mu[k][j].round();
            if r != 0.0 {
                let bj = basis[j].clone();
                for (x, y) in basis[k].iter_mut().zip(&bj) {
                    *x -= r * y;
                }
            }
        }
        let (b_star, mu) = gram_schmidt(basis);
        let norm_k = dot(&b_star[k], &b_star[k]);
        let norm_km1 = dot(&b_star[k - 1], &b_star[k - 1]);
        if norm_k >= (delta - mu[k][k - 1] * mu[k][k - 1]) * norm_km1 {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            k = k.max(2) - 1;
        }
    }
}

/// Babai nearest-plane: integer coefficients `c` such that `sum c_i b_i`
/// lies close to `target`.
pub fn babai_nearest_plane(basis: &[Vec<f64>], target: &[f64]) -> Vec<i64> {
    let m = basis.len();
    let (b_star, _) = gram_schmidt(basis);
    let mut residue = target.to_vec();
    let mut coeffs = vec![0i64; m];
    for j in (0..m).rev() {
        let denom = dot(&b_star[j], &b_star[j]);
        let c = if denom > 0.0 {
            (dot(&residue, &b_star[j]) / denom).round()
        } else {
            0.0
        };
        coeffs[j] = c as i64;
        for (r, b) in residue.iter_mut().zip(&basis[j]) {
            *r -= c * b;
        }
    }
    coeffs
}
