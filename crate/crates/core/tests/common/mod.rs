//! Independent oracles: hand-written matrices and naive linear algebra that
//! share no code with the library kernels.
#![allow(dead_code)]

use discernlab_core::Operator;
use num_complex::Complex64;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pauli_x() -> Vec<Vec<Complex64>> {
    vec![vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]]
}

pub fn pauli_y() -> Vec<Vec<Complex64>> {
    vec![vec![c(0.0, 0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), c(0.0, 0.0)]]
}

pub fn pauli_z() -> Vec<Vec<Complex64>> {
    vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(-1.0, 0.0)]]
}

pub fn identity(n: usize) -> Vec<Vec<Complex64>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) }).collect())
        .collect()
}

pub fn naive_kron(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let (n, m) = (a.len(), b.len());
    let mut out = vec![vec![c(0.0, 0.0); n * m]; n * m];
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn naive_mul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

pub fn naive_add(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + q).collect())
        .collect()
}

pub fn naive_scale(a: &[Vec<Complex64>], s: Complex64) -> Vec<Vec<Complex64>> {
    a.iter().map(|row| row.iter().map(|x| x * s).collect()).collect()
}

pub fn max_diff(op: &Operator, m: &[Vec<Complex64>]) -> f64 {
    assert_eq!(op.dim(), m.len());
    let mut worst: f64 = 0.0;
    for (i, row) in m.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            worst = worst.max((op[(i, j)] - x).norm());
        }
    }
    worst
}

/// `(𝐒_1 + 𝐒_2)²` for two spin-1/2 particles, assembled from Pauli matrices.
pub fn pair_spin_half_oracle() -> Vec<Vec<Complex64>> {
    let id = identity(2);
    let mut total = vec![vec![c(0.0, 0.0); 4]; 4];
    for sigma in [pauli_x(), pauli_y(), pauli_z()] {
        let half = naive_scale(&sigma, c(0.5, 0.0));
        let sum = naive_add(&naive_kron(&half, &id), &naive_kron(&id, &half));
        total = naive_add(&total, &naive_mul(&sum, &sum));
    }
    total
}

/// Rank by Gaussian elimination with partial pivoting.
pub fn rank(op: &Operator, tol: f64) -> usize {
    let n = op.dim();
    let mut m: Vec<Vec<Complex64>> = (0..n).map(|i| op.row(i).to_vec()).collect();
    let mut r = 0;
    for col in 0..n {
        let Some(pivot) = (r..n).max_by(|&i, &j| m[i][col].norm().total_cmp(&m[j][col].norm())) else {
            break;
        };
        if m[pivot][col].norm() <= tol {
            continue;
        }
        m.swap(r, pivot);
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r {
                let f = row[col] / pivot_row[col];
                for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= f * p;
                }
            }
        }
        r += 1;
        if r == n {
            break;
        }
    }
    r
}

/// Deterministic pseudo-random complex entries (splitmix64).
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next_f64(&mut self) -> f64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        (z >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    }

    pub fn complex(&mut self) -> Complex64 {
        c(self.next_f64(), self.next_f64())
    }

    pub fn hermitian(&mut self, n: usize) -> Operator {
        let raw = Operator::from_fn(n, |_, _| self.complex());
        (&raw + &raw.adjoint()).scale(c(0.5, 0.0))
    }

    pub fn unit_vector(&mut self, n: usize) -> Vec<Complex64> {
        let v: Vec<Complex64> = (0..n).map(|_| self.complex()).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.into_iter().map(|z| z / norm).collect()
    }
}
