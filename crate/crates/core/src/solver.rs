//! Nonzero signals on `Z_N` that vanish, together with their transform,
//! on the zero window `|x| <= N/10`.
//!
//! The unknowns are the values of `f` off the window; each window frequency
//! `m` contributes one homogeneous equation `f̂(m) = 0`. There are about
//! `4N/5` unknowns against `N/5` equations, so a null vector exists.

use num_complex::Complex64;

use crate::cyclic::{twiddles, zero_window, CyclicSignal, ZeroWindow};
use crate::error::{Error, Result};

/// Spectral residual a solved signal must meet (with `max|f| = 1`).
pub const SPECTRAL_RESIDUAL_BOUND: f64 = 1e-9;

/// Dense complex matrix, column-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    /// Builds from row-major nested rows. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[j * self.rows + i]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[j * self.rows + i] = v;
    }

    pub fn column(&self, j: usize) -> &[Complex64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for (j, &x) in v.iter().enumerate() {
            if x == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.column(j)) {
                *o += a * x;
            }
        }
        out
    }

    /// Largest row 1-norm; the scale against which residuals are judged.
    pub fn operator_scale(&self) -> f64 {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Partial-pivot row echelon form of a wide matrix, `P·A[:, pivots] = L·U`.
///
/// Columns are visited left to right and each is brought up to date only
/// when it is reached, so columns past the last pivot are never touched
/// unless a null vector asks for them.
#[derive(Debug, Clone)]
pub struct Echelon<'a> {
    matrix: &'a ComplexMatrix,
    /// `perm[i]` is the original row now at position `i`.
    perm: Vec<usize>,
    /// `lower[k][t]`, `t > k`: multiplier eliminating row `t` with pivot `k`.
    lower: Vec<Vec<Complex64>>,
    /// `upper[k]` holds rows `0..=k` of the `k`-th pivot column of `U`.
    upper: Vec<Vec<Complex64>>,
    pivot_cols: Vec<usize>,
}

impl<'a> Echelon<'a> {
    pub fn factor(matrix: &'a ComplexMatrix) -> Self {
        let r = matrix.rows();
        // Schur-complement entries at or below this are treated as zero.
        let tol = matrix.max_abs() * f64::EPSILON * r.max(1) as f64;
        let mut e = Self {
            matrix,
            perm: (0..r).collect(),
            lower: Vec::new(),
            upper: Vec::new(),
            pivot_cols: Vec::new(),
        };
        for j in 0..matrix.cols() {
            let rank = e.rank();
            if rank == r {
                break;
            }
            let mut w = e.reduced_column(j);
            let (p, mag) = w[rank..]
                .iter()
                .enumerate()
                .fold((rank, -1.0), |(bi, bm), (i, v)| {
                    let m = v.norm();
                    if m > bm {
                        (rank + i, m)
                    } else {
                        (bi, bm)
                    }
                });
            if mag <= tol {
                continue;
            }
            w.swap(rank, p);
            e.perm.swap(rank, p);
            for l in &mut e.lower {
                l.swap(rank, p);
            }
            let pivot = w[rank];
            let mut l = vec![Complex64::new(0.0, 0.0); r];
            for t in rank + 1..r {
                l[t] = w[t] / pivot;
            }
            e.lower.push(l);
            e.upper.push(w[..=rank].to_vec());
            e.pivot_cols.push(j);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }

    pub fn pivot_columns(&self) -> &[usize] {
        &self.pivot_cols
    }

    /// Non-pivot columns, ascending.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.matrix.cols()];
        for &j in &self.pivot_cols {
            is_pivot[j] = true;
        }
        (0..self.matrix.cols()).filter(|&j| !is_pivot[j]).collect()
    }

    /// `L⁻¹·P·A[:, j]` using the pivots found so far.
    fn reduced_column(&self, j: usize) -> Vec<Complex64> {
        let col = self.matrix.column(j);
        let mut w: Vec<Complex64> = self.perm.iter().map(|&i| col[i]).collect();
        let r = w.len();
        for (k, l) in self.lower.iter().enumerate() {
            let wk = w[k];
            if wk == Complex64::new(0.0, 0.0) {
                continue;
            }
            for t in k + 1..r {
                w[t] -= l[t] * wk;
            }
        }
        w
    }

    /// Null vector with free column `free` set to one and every other free
    /// variable zero, scaled so that `max|v| = 1`.
    pub fn null_vector(&self, free: usize) -> Vec<Complex64> {
        assert!(
            !self.pivot_cols.contains(&free),
            "column {free} is a pivot column"
        );
        let w = self.reduced_column(free);
        let rank = self.rank();
        let mut b: Vec<Complex64> = w[..rank].iter().map(|v| -v).collect();
        let mut x = vec![Complex64::new(0.0, 0.0); rank];
        for k in (0..rank).rev() {
            let u = &self.upper[k];
            x[k] = b[k] / u[k];
            for i in 0..k {
                b[i] -= u[i] * x[k];
            }
        }
        let mut v = vec![Complex64::new(0.0, 0.0); self.matrix.cols()];
        v[free] = Complex64::new(1.0, 0.0);
        for (&j, &xk) in self.pivot_cols.iter().zip(&x) {
            v[j] = xk;
        }
        let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        v.iter_mut().for_each(|z| *z /= scale);
        v
    }
}

/// Max-norm of `A·v`.
pub fn residual(a: &ComplexMatrix, v: &[Complex64]) -> f64 {
    a.mul_vec(v).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// A normalized null vector of a wide matrix: the last free variable is one
/// and the others are zero.
pub fn nullspace_vector(a: &ComplexMatrix) -> Result<Vec<Complex64>> {
    if a.rows() >= a.cols() {
        return Err(Error::NotUnderdetermined {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let e = Echelon::factor(a);
    let free = *e
        .free_columns()
        .last()
        .expect("wide matrix has a free column");
    Ok(e.null_vector(free))
}

/// The homogeneous system `f̂(m) = 0`, `m` in the zero window, in the
/// unknowns `f(k)`, `k` off the window.
#[derive(Debug, Clone)]
pub struct VanishingSystem {
    window: ZeroWindow,
    row_reps: Vec<i64>,
    col_residues: Vec<usize>,
    matrix: ComplexMatrix,
}

impl VanishingSystem {
    pub fn modulus(&self) -> usize {
        self.window.modulus()
    }

    pub fn window(&self) -> &ZeroWindow {
        &self.window
    }

    /// Equation frequencies, as centered representatives `-R..=R`.
    pub fn row_frequencies(&self) -> &[i64] {
        &self.row_reps
    }

    /// Unknown positions, ascending residues.
    pub fn column_residues(&self) -> &[usize] {
        &self.col_residues
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Places a vector of unknowns into a full signal, zero on the window.
    pub fn embed(&self, unknowns: &[Complex64]) -> CyclicSignal {
        let mut f = vec![Complex64::new(0.0, 0.0); self.modulus()];
        for (&k, &v) in self.col_residues.iter().zip(unknowns) {
            f[k] = v;
        }
        CyclicSignal::new(f)
    }
}

pub fn build_system(modulus: usize) -> Result<VanishingSystem> {
    let window = zero_window(modulus)?;
    let row_reps: Vec<i64> = window.representatives().collect();
    let col_residues: Vec<usize> = window.complement().collect();
    let tw = twiddles(modulus);
    let inv_n = 1.0 / modulus as f64;
    let n = modulus as i64;
    let mut matrix = ComplexMatrix::zeros(row_reps.len(), col_residues.len());
    for (j, &k) in col_residues.iter().enumerate() {
        for (i, &m) in row_reps.iter().enumerate() {
            let idx = (m * k as i64).rem_euclid(n) as usize;
            matrix.set(i, j, tw[idx] * inv_n);
        }
    }
    Ok(VanishingSystem {
        window,
        row_reps,
        col_residues,
        matrix,
    })
}

/// A solved signal together with how it was obtained.
#[derive(Debug, Clone)]
pub struct VanishingSolution {
    pub signal: CyclicSignal,
    /// `max_{m in window} |f̂(m)|`, with `max|f| = 1`.
    pub residual: f64,
    /// Residue of the unknown that was fixed to one.
    pub free_residue: usize,
    pub attempts: usize,
}

/// Solves the vanishing system for `N`, trying free variables from the last
/// one downwards until the spectral residual is within bound.
pub fn solve_vanishing_detailed(modulus: usize) -> Result<VanishingSolution> {
    let system = build_system(modulus)?;
    let a = system.matrix();
    let e = Echelon::factor(a);
    let free = e.free_columns();
    let max_attempts = (a.cols() - a.rows()).max(1);
    let mut best: Option<(f64, usize, Vec<Complex64>)> = None;
    for (attempt, &col) in free.iter().rev().take(max_attempts).enumerate() {
        let v = e.null_vector(col);
        let res = residual(a, &v);
        if best.as_ref().is_none_or(|(b, _, _)| res < *b) {
            best = Some((res, col, v));
        }
        if res <= SPECTRAL_RESIDUAL_BOUND {
            let (res, col, v) = best.expect("just set");
            return Ok(VanishingSolution {
                signal: system.embed(&v),
                residual: res,
                free_residue: system.col_residues[col],
                attempts: attempt + 1,
            });
        }
    }
    Err(Error::ConditioningExhausted {
        best: best.map_or(f64::INFINITY, |b| b.0),
        bound: SPECTRAL_RESIDUAL_BOUND,
    })
}

/// A nonzero `f` on `Z_N`, `max|f| = 1`, with `f` exactly zero on the zero
/// window and `f̂` vanishing there to within [`SPECTRAL_RESIDUAL_BOUND`].
pub fn solve_vanishing(modulus: usize) -> Result<CyclicSignal> {
    solve_vanishing_detailed(modulus).map(|s| s.signal)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn system_dimensions() {
        let s = build_system(100).unwrap();
        assert_eq!((s.matrix().rows(), s.matrix().cols()), (21, 79));
        let s = build_system(10).unwrap();
        assert_eq!((s.matrix().rows(), s.matrix().cols()), (3, 7));
        let s = build_system(400).unwrap();
        assert_eq!((s.matrix().rows(), s.matrix().cols()), (81, 319));
        assert_eq!(build_system(9).unwrap_err(), Error::ModulusTooSmall(9));
    }

    #[test]
    fn zero_frequency_row_is_flat() {
        let s = build_system(400).unwrap();
        let row0 = s.row_frequencies().iter().position(|&m| m == 0).unwrap();
        for j in 0..s.matrix().cols() {
            assert!((s.matrix().get(row0, j) - c(1.0 / 400.0, 0.0)).norm() < 1e-18);
        }
    }

    #[test]
    fn entries_match_definition() {
        let s = build_system(100).unwrap();
        for (i, &m) in s.row_frequencies().iter().enumerate() {
            for (j, &k) in s.column_residues().iter().enumerate() {
                let theta = -2.0 * std::f64::consts::PI * (m as f64) * (k as f64) / 100.0;
                let want = Complex64::from_polar(0.01, theta);
                assert!((s.matrix().get(i, j) - want).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn hand_sized_null_vectors() {
        let a = ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(1.0, 0.0)]]);
        let v = nullspace_vector(&a).unwrap();
        assert_eq!(v, vec![c(-1.0, 0.0), c(1.0, 0.0)]);

        let z = ComplexMatrix::zeros(2, 3);
        let v = nullspace_vector(&z).unwrap();
        assert_eq!(v.iter().map(|x| x.norm()).fold(0.0, f64::max), 1.0);
        assert_eq!(residual(&z, &v), 0.0);

        let sq = ComplexMatrix::zeros(2, 2);
        assert!(matches!(
            nullspace_vector(&sq),
            Err(Error::NotUnderdetermined { .. })
        ));
    }

    #[test]
    fn rank_deficient_columns_become_free() {
        // Second column is twice the first.
        let a = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(2.0, 0.0), c(0.0, 1.0)],
            vec![c(3.0, 0.0), c(6.0, 0.0), c(1.0, 0.0)],
        ]);
        let e = Echelon::factor(&a);
        assert_eq!(e.pivot_columns(), &[0, 2]);
        assert_eq!(e.free_columns(), vec![1]);
        let v = e.null_vector(1);
        assert!(residual(&a, &v) < 1e-15);
    }

    #[test]
    fn smallest_instance() {
        let sol = solve_vanishing_detailed(10).unwrap();
        let f = &sol.signal;
        for x in [9, 0, 1] {
            assert_eq!(f.values()[x], c(0.0, 0.0));
        }
        assert_eq!(f.max_abs(), 1.0);
        assert!(sol.residual <= SPECTRAL_RESIDUAL_BOUND);
        assert_eq!(sol.attempts, 1);
    }

    #[test]
    fn deterministic() {
        let a = solve_vanishing(100).unwrap();
        let b = solve_vanishing(100).unwrap();
        assert_eq!(a, b);
    }
}
