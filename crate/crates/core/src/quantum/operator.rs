use num_complex::Complex64;

use super::{spin_matrix, AngleSettings, Mat2};
use crate::error::{Error, Result};
use crate::inequality::{nu, SignVariant};

/// Dense operators are materialized only up to this many particles.
pub const MAX_OPERATOR_PARTICLES: usize = 12;

/// Dense complex square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl OperatorMatrix {
    pub fn zeros(dim: usize) -> Self {
        OperatorMatrix {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_mat2(m: &Mat2) -> Self {
        OperatorMatrix {
            dim: 2,
            entries: vec![m[0][0], m[0][1], m[1][0], m[1][1]],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// `self ⊗ low`: `self` acts on the more significant index bits.
    pub fn kron(&self, low: &OperatorMatrix) -> OperatorMatrix {
        let dim = self.dim * low.dim;
        let mut out = Self::zeros(dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                let a = self.get(r, c);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for lr in 0..low.dim {
                    let row = (r * low.dim + lr) * dim + c * low.dim;
                    let src = &low.entries[lr * low.dim..(lr + 1) * low.dim];
                    for (dst, b) in out.entries[row..row + low.dim].iter_mut().zip(src) {
                        *dst = a * b;
                    }
                }
            }
        }
        out
    }

    pub fn matmul(&self, other: &OperatorMatrix) -> OperatorMatrix {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for r in 0..d {
            for k in 0..d {
                let a = self.get(r, k);
                for c in 0..d {
                    out.entries[r * d + c] += a * other.get(k, c);
                }
            }
        }
        out
    }

    /// `self += scale · other`.
    pub fn add_scaled(&mut self, other: &OperatorMatrix, scale: f64) {
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += b * scale;
        }
    }

    pub fn max_abs_diff(&self, other: &OperatorMatrix) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (0..self.dim).all(|r| (r..self.dim).all(|c| (self.get(r, c) - self.get(c, r).conj()).norm() <= tol))
    }

    /// `⟨ψ|M|ψ⟩` without the Hermitian projection.
    pub fn expectation_complex(&self, psi: &[Complex64]) -> Complex64 {
        let d = self.dim;
        (0..d)
            .map(|r| {
                let row: Complex64 = (0..d).map(|c| self.entries[r * d + c] * psi[c]).sum();
                psi[r].conj() * row
            })
            .sum()
    }
}

/// How to assemble the alternating operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuildMethod {
    /// Sum of the `2^n` weighted tensor-product terms.
    Direct,
    /// `S_k^± = S_{k-1}^± ⊗ A^(k)_1 ∓ S_{k-1}^∓ ⊗ A^(k)_2`, `S_1^± = A_1 ∓ A_2`.
    Recursive,
}

/// `S_n^± = Σ_I ν^±(t(I)) A^(1)_{i_1} ⊗ ⋯ ⊗ A^(n)_{i_n}` as a dense matrix.
pub fn alternating_operator(
    n: usize,
    variant: SignVariant,
    settings: &AngleSettings,
    method: BuildMethod,
) -> Result<OperatorMatrix> {
    if n == 0 {
        return Err(Error::InvalidParticleCount { n, min: 1 });
    }
    if n > MAX_OPERATOR_PARTICLES {
        return Err(Error::Capacity {
            what: "dense operator",
            required: format!("{0}×{0} matrix", 1u64 << n),
            limit: format!("n ≤ {MAX_OPERATOR_PARTICLES}"),
        });
    }
    settings.check_n(n)?;
    let observables: Vec<[OperatorMatrix; 2]> = settings
        .angles()
        .iter()
        .map(|p| p.map(|a| OperatorMatrix::from_mat2(&spin_matrix(a))))
        .collect();
    Ok(match method {
        BuildMethod::Direct => {
            let mut total = OperatorMatrix::zeros(1 << n);
            for code in 0..1u32 << n {
                let mut term = OperatorMatrix::identity(1);
                for (k, pair) in observables.iter().enumerate() {
                    term = pair[(code >> k & 1) as usize].kron(&term);
                }
                total.add_scaled(&term, nu(variant, code.count_ones() as usize) as f64);
            }
            total
        }
        BuildMethod::Recursive => {
            let [a1, a2] = &observables[0];
            let mut plus = a1.clone();
            plus.add_scaled(a2, -1.0);
            let mut minus = a1.clone();
            minus.add_scaled(a2, 1.0);
            for [a1, a2] in &observables[1..] {
                let mut next_plus = a1.kron(&plus);
                next_plus.add_scaled(&a2.kron(&minus), -1.0);
                let mut next_minus = a1.kron(&minus);
                next_minus.add_scaled(&a2.kron(&plus), 1.0);
                plus = next_plus;
                minus = next_minus;
            }
            match variant {
                SignVariant::Plus => plus,
                SignVariant::Minus => minus,
            }
        }
    })
}
