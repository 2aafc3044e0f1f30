//! Fourier analysis on the cyclic group `Z_N`.
//!
//! The forward transform carries the `1/N` factor:
//! `f̂(n) = (1/N) Σ_k f(k) e^{-2πi nk/N}`, so the inverse is the plain sum
//! `f(k) = Σ_n f̂(n) e^{+2πi nk/N}`.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest modulus for which the zero window is more than a single point.
pub const MIN_MODULUS: usize = 10;

/// A complex-valued function on `Z_N`, stored as its `N` values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CyclicSignal {
    values: Vec<Complex64>,
}

impl CyclicSignal {
    /// Panics if `values` is empty.
    pub fn new(values: Vec<Complex64>) -> Self {
        assert!(
            !values.is_empty(),
            "a cyclic signal needs at least one value"
        );
        Self { values }
    }

    pub fn zeros(modulus: usize) -> Self {
        Self::new(vec![Complex64::new(0.0, 0.0); modulus])
    }

    /// Unit mass at residue `at`.
    pub fn delta(modulus: usize, at: usize) -> Self {
        let mut s = Self::zeros(modulus);
        s.values[at % modulus] = Complex64::new(1.0, 0.0);
        s
    }

    pub fn constant(modulus: usize, value: Complex64) -> Self {
        Self::new(vec![value; modulus])
    }

    pub fn modulus(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Value at an arbitrary integer, reduced mod `N`.
    pub fn at(&self, n: i64) -> Complex64 {
        let m = self.modulus() as i64;
        self.values[n.rem_euclid(m) as usize]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Representative of `x mod N` in `[-N/2, N/2)`. For even `N` the half
/// point maps to `-N/2`.
pub fn centered_rep(x: usize, modulus: usize) -> i64 {
    assert!(modulus > 0 && x < modulus, "centered_rep needs 0 <= x < N");
    let x = x as i64;
    let n = modulus as i64;
    if 2 * x >= n {
        x - n
    } else {
        x
    }
}

/// Residues whose centered representative has absolute value at most
/// `floor(N/10)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroWindow {
    modulus: usize,
    radius: usize,
}

impl ZeroWindow {
    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        2 * self.radius + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, x: usize) -> bool {
        centered_rep(x % self.modulus, self.modulus).unsigned_abs() as usize <= self.radius
    }

    /// Members as centered representatives, `-R..=R`.
    pub fn representatives(&self) -> impl Iterator<Item = i64> {
        let r = self.radius as i64;
        -r..=r
    }

    /// Members as residues in `0..N`, ordered by centered representative.
    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        let n = self.modulus as i64;
        self.representatives()
            .map(move |c| c.rem_euclid(n) as usize)
    }

    /// Residues outside the window, ascending.
    pub fn complement(&self) -> impl Iterator<Item = usize> + '_ {
        (self.radius + 1)..(self.modulus - self.radius)
    }
}

pub fn zero_window(modulus: usize) -> Result<ZeroWindow> {
    if modulus < MIN_MODULUS {
        return Err(Error::ModulusTooSmall(modulus));
    }
    Ok(ZeroWindow {
        modulus,
        radius: modulus / 10,
    })
}

pub fn dft(f: &CyclicSignal) -> CyclicSignal {
    let n = f.modulus();
    let mut buf = f.values.clone();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|v| *v *= scale);
    CyclicSignal::new(buf)
}

pub fn idft(g: &CyclicSignal) -> CyclicSignal {
    let mut buf = g.values.clone();
    FftPlanner::new()
        .plan_fft_inverse(g.modulus())
        .process(&mut buf);
    CyclicSignal::new(buf)
}

/// `e^{-2πi j/N}` for `j` in `0..N`. Indices are reduced exactly in integer
/// arithmetic before lookup, so large products `m·k` lose no precision.
pub(crate) fn twiddles(modulus: usize) -> Vec<Complex64> {
    let step = -2.0 * std::f64::consts::PI / modulus as f64;
    (0..modulus)
        .map(|j| Complex64::from_polar(1.0, step * j as f64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn centered_rep_examples() {
        assert_eq!(centered_rep(0, 100), 0);
        assert_eq!(centered_rep(95, 100), -5);
        assert_eq!(centered_rep(50, 100), -50);
        assert_eq!(centered_rep(49, 100), 49);
        assert_eq!(centered_rep(3, 7), 3);
        assert_eq!(centered_rep(4, 7), -3);
    }

    #[test]
    fn zero_window_sizes() {
        let w = zero_window(100).unwrap();
        assert_eq!(w.len(), 21);
        assert_eq!(
            w.representatives().collect::<Vec<_>>(),
            (-10..=10).collect::<Vec<_>>()
        );
        assert_eq!(zero_window(400).unwrap().len(), 81);
        let w10 = zero_window(10).unwrap();
        assert_eq!(w10.members().collect::<Vec<_>>(), vec![9, 0, 1]);
        assert_eq!(zero_window(9), Err(Error::ModulusTooSmall(9)));
    }

    #[test]
    fn zero_window_counts_by_enumeration() {
        for n in [10, 37, 100, 101, 400, 999] {
            let w = zero_window(n).unwrap();
            let counted = (0..n)
                .filter(|&x| centered_rep(x, n).abs() <= (n / 10) as i64)
                .count();
            assert_eq!(counted, w.len());
            assert!(w.contains(0));
            for x in w.members() {
                assert!(w.contains((n - x) % n));
            }
            assert_eq!(w.complement().count() + w.len(), n);
            assert!(w.complement().all(|x| !w.contains(x)));
        }
    }

    #[test]
    fn dft_of_delta_and_constant() {
        let d = dft(&CyclicSignal::delta(4, 0));
        for v in d.values() {
            assert!((v - c(0.25, 0.0)).norm() < 1e-15);
        }
        let k = dft(&CyclicSignal::constant(4, c(1.0, 0.0)));
        assert!((k.values()[0] - c(1.0, 0.0)).norm() < 1e-15);
        for v in &k.values()[1..] {
            assert!(v.norm() < 1e-15);
        }
    }

    #[test]
    fn idft_examples() {
        let g = CyclicSignal::constant(4, c(0.25, 0.0));
        let f = idft(&g);
        assert!((f.values()[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(f.values()[1..].iter().all(|v| v.norm() < 1e-15));

        let k = idft(&CyclicSignal::delta(6, 0));
        assert!(k.values().iter().all(|v| (v - c(1.0, 0.0)).norm() < 1e-15));
    }

    #[test]
    fn at_wraps() {
        let s = CyclicSignal::new(vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]);
        assert_eq!(s.at(-1), c(3.0, 0.0));
        assert_eq!(s.at(7), c(2.0, 0.0));
    }
}
