//! Dense complex matrices on `n` qubits, used only on the oracle side.
//!
//! Qubit `q` is bit `q` of a basis index (qubit 0 is the least significant bit).

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::pauli::{Letter, PauliString};

pub type Mat2 = [[Complex64; 2]; 2];

pub const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

const O: Complex64 = c(0.0, 0.0);
const ONE: Complex64 = c(1.0, 0.0);

pub const IDENTITY2: Mat2 = [[ONE, O], [O, ONE]];
pub const PAULI_X: Mat2 = [[O, ONE], [ONE, O]];
pub const PAULI_Y: Mat2 = [[O, c(0.0, -1.0)], [c(0.0, 1.0), O]];
pub const PAULI_Z: Mat2 = [[ONE, O], [O, c(-1.0, 0.0)]];

pub fn letter_matrix(l: Letter) -> Mat2 {
    match l {
        Letter::I => IDENTITY2,
        Letter::X => PAULI_X,
        Letter::Y => PAULI_Y,
        Letter::Z => PAULI_Z,
    }
}

pub fn mat2_add(a: &Mat2, b: &Mat2, sign: f64) -> Mat2 {
    let mut m = *a;
    for r in 0..2 {
        for col in 0..2 {
            m[r][col] += b[r][col] * sign;
        }
    }
    m
}

pub fn mat2_scale(a: &Mat2, s: f64) -> Mat2 {
    let mut m = *a;
    for row in m.iter_mut() {
        for x in row.iter_mut() {
            *x *= s;
        }
    }
    m
}

pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut m = [[O; 2]; 2];
    for r in 0..2 {
        for col in 0..2 {
            m[r][col] = a[r][0] * b[0][col] + a[r][1] * b[1][col];
        }
    }
    m
}

/// Square matrix of dimension `2^qubits`, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    qubits: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(qubits: usize) -> Self {
        let dim = 1usize << qubits;
        DenseMatrix {
            qubits,
            data: vec![O; dim * dim],
        }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim() + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: Complex64) {
        let d = self.dim();
        self.data[row * d + col] = v;
    }

    /// Adds `scale · ⊗_{(q, m) ∈ factors} m_q`, identity on unlisted qubits.
    /// Sites in `factors` must be distinct.
    pub fn add_product(&mut self, factors: &[(usize, Mat2)], scale: Complex64) {
        let dim = self.dim();
        let k = factors.len();
        let mask: usize = factors.iter().map(|(q, _)| 1 << q).sum();
        for row in 0..dim {
            let base = row & !mask;
            for choice in 0..(1usize << k) {
                let mut col = base;
                let mut v = scale;
                for (t, (q, m)) in factors.iter().enumerate() {
                    let rb = (row >> q) & 1;
                    let cb = (choice >> t) & 1;
                    col |= cb << q;
                    v *= m[rb][cb];
                    if v == O {
                        break;
                    }
                }
                if v != O {
                    self.data[row * dim + col] += v;
                }
            }
        }
    }

    pub fn from_pauli(p: &PauliString) -> Self {
        let mut m = DenseMatrix::zeros(p.len());
        m.add_pauli(p, ONE);
        m
    }

    /// Adds `scale · p`, including the string's phase.
    pub fn add_pauli(&mut self, p: &PauliString, scale: Complex64) {
        let factors: Vec<(usize, Mat2)> = p
            .letters()
            .enumerate()
            .filter(|(_, l)| *l != Letter::I)
            .map(|(q, l)| (q, letter_matrix(l)))
            .collect();
        let phase = Complex64::i().powu(p.phase() as u32);
        self.add_product(&factors, scale * phase);
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!(self.qubits, other.qubits);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let d = self.dim();
        (0..d).all(|r| (0..d).all(|col| (self.get(r, col) - self.get(col, r).conj()).norm() <= tol))
    }

    /// `tr(self · other)`.
    pub fn trace_product(&self, other: &DenseMatrix) -> Complex64 {
        let d = self.dim();
        let mut acc = O;
        for r in 0..d {
            for col in 0..d {
                acc += self.data[r * d + col] * other.data[col * d + r];
            }
        }
        acc
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let d = self.dim();
        (0..d)
            .map(|r| (0..d).map(|col| self.data[r * d + col] * v[col]).sum())
            .collect()
    }

    /// Eigenvalues of a Hermitian matrix, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let d = self.dim();
        let m = DMatrix::from_fn(d, d, |r, col| self.get(r, col));
        let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Largest absolute eigenvalue of a Hermitian matrix.
    pub fn spectral_norm(&self) -> f64 {
        self.hermitian_eigenvalues()
            .into_iter()
            .map(f64::abs)
            .fold(0.0, f64::max)
    }
}

impl std::ops::AddAssign<&DenseMatrix> for DenseMatrix {
    fn add_assign(&mut self, rhs: &DenseMatrix) {
        assert_eq!(self.qubits, rhs.qubits);
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}
