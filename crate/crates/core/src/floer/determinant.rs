//! Single-variable Alexander polynomial from the grid winding-number
//! matrix: `det(t^-w(i, j)) = +-t^a (1 - t)^(n-1) Delta(t)`.

use crate::grid::GridDiagram;

const P: u64 = (1 << 61) - 1;

fn mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    r
}

fn inv(a: u64) -> u64 {
    pow(a, P - 2)
}

fn det_mod(mut m: Vec<Vec<u64>>) -> u64 {
    let n = m.len();
    let mut det = 1;
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| m[r][c] != 0) else { return 0 };
        if p != c {
            m.swap(p, c);
            det = (P - det) % P;
        }
        det = mul(det, m[c][c]);
        let iv = inv(m[c][c]);
        for r in c + 1..n {
            if m[r][c] == 0 {
                continue;
            }
            let f = mul(m[r][c], iv);
            for k in c..n {
                m[r][k] = (m[r][k] + P - mul(f, m[c][k])) % P;
            }
        }
    }
    det
}

/// Winding number of the link around each lattice point `(c, r)`.
pub fn winding_numbers(g: &GridDiagram) -> Vec<Vec<i64>> {
    let g = g.normalized();
    let n = g.size();
    let (xr, yr) = (g.x_row(), g.y_row());
    let mut w = vec![vec![0; n]; n];
    for (r, row) in w.iter_mut().enumerate() {
        for (c, v) in row.iter_mut().enumerate() {
            for col in c..n {
                let (lo, hi) = (xr[col].min(yr[col]), xr[col].max(yr[col]));
                if lo < r && r <= hi {
                    *v += if xr[col] > yr[col] { 1 } else { -1 };
                }
            }
        }
    }
    w
}

/// Coefficients of `Delta(t)` from the lowest power, with trailing and
/// leading zeros removed and sign fixed so the leading coefficient is
/// positive.
pub fn grid_alexander_polynomial(g: &GridDiagram) -> Vec<i64> {
    let n = g.size();
    let w = winding_numbers(g);
    let wmax = w.iter().flatten().copied().max().unwrap_or(0);
    let wmin = w.iter().flatten().copied().min().unwrap_or(0);
    let deg = n * (wmax - wmin) as usize;
    let xs: Vec<u64> = (0..=deg as u64).map(|k| k + 2).collect();
    let ys: Vec<u64> = xs
        .iter()
        .map(|&t| det_mod(w.iter().map(|row| row.iter().map(|&v| pow(t, (wmax - v) as u64)).collect()).collect()))
        .collect();
    // Lagrange interpolation mod P.
    let mut coeffs = vec![0u64; deg + 1];
    for (i, &xi) in xs.iter().enumerate() {
        let mut basis = vec![1u64];
        let mut denom = 1u64;
        for (j, &xj) in xs.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![0u64; basis.len() + 1];
            for (k, &b) in basis.iter().enumerate() {
                next[k + 1] = (next[k + 1] + b) % P;
                next[k] = (next[k] + P - mul(b, xj)) % P;
            }
            basis = next;
            denom = mul(denom, (xi + P - xj) % P);
        }
        let scale = mul(ys[i], inv(denom));
        for (k, &b) in basis.iter().enumerate() {
            coeffs[k] = (coeffs[k] + mul(b, scale)) % P;
        }
    }
    let mut poly: Vec<i128> =
        coeffs.iter().map(|&c| if c > P / 2 { c as i128 - P as i128 } else { c as i128 }).collect();
    // Divide by (1 - t)^(n-1): q_k = sum_{j<=k} p_j.
    for _ in 1..n {
        let mut acc = 0;
        for c in poly.iter_mut() {
            acc += *c;
            *c = acc;
        }
        debug_assert_eq!(poly.last().copied().unwrap_or(0), 0);
        poly.pop();
    }
    while poly.last() == Some(&0) {
        poly.pop();
    }
    let start = poly.iter().position(|&c| c != 0).unwrap_or(poly.len());
    let mut out: Vec<i64> = poly[start..].iter().map(|&c| c as i64).collect();
    if out.last().is_some_and(|&c| c < 0) {
        out.iter_mut().for_each(|c| *c = -*c);
    }
    out
}
