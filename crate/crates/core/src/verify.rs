//! Checks on constructed measures.
//!
//! The Fourier-pair identity `⟨μ̂, φ⟩ = ⟨μ, φ̂⟩` is tested with Gaussians,
//! whose transforms are known in closed form, so both sides are finite sums
//! over atoms plus an analytically bounded tail from atoms outside the
//! windows. The remaining checks (vanishing, gaps, rank over the rationals,
//! arithmetic-progression certificates) are exact.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{PeriodicLatticeMeasure, Term, Window, WindowedMeasure};
use crate::symbolic::{SymbolicPosition, DEFAULT_PRECISION_BITS};

/// Relative slack allowed on top of the certified tail.
pub const PAIRING_REL_TOL: f64 = 1e-9;

/// A tail bound above this fraction of the pairing scale means the windows
/// are too small for a verdict.
pub const MAX_TAIL_FRACTION: f64 = 0.1;

/// `φ(x) = e^{-π((x-r)/t)²} e^{2πi a x}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianTestFn {
    pub center: f64,
    pub frequency: f64,
    pub width: f64,
}

impl GaussianTestFn {
    pub fn new(center: f64, frequency: f64, width: f64) -> Result<Self> {
        if !(width > 0.0 && width.is_finite() && center.is_finite() && frequency.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "Gaussian needs finite parameters and positive width (r={center}, a={frequency}, t={width})"
            )));
        }
        Ok(Self {
            center,
            frequency,
            width,
        })
    }

    /// The self-dual `e^{-πx²}`.
    pub fn standard() -> Self {
        Self {
            center: 0.0,
            frequency: 0.0,
            width: 1.0,
        }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let u = (x - self.center) / self.width;
        Complex64::from_polar((-PI * u * u).exp(), 2.0 * PI * self.frequency * x)
    }

    /// `φ̂(ξ) = t·e^{-π t²(ξ-a)²}·e^{-2πi r(ξ-a)}`, from the substitution
    /// `x = r + t·u` in `∫ φ(x) e^{-2πi ξ x} dx`.
    pub fn eval_hat(&self, xi: f64) -> Complex64 {
        let s = xi - self.frequency;
        let t = self.width;
        Complex64::from_polar(t * (-PI * t * t * s * s).exp(), -2.0 * PI * self.center * s)
    }
}

/// Bound on `Σ |c_x| g(x)` over atoms `x` beyond one window edge, where
/// `g(x) = amp·e^{-π((x-c)/w)²}`, the edge is at distance `d` from the
/// centre `c`, and every half-open unit window carries variation at most
/// `variation`.
///
/// Cutting the far side into unit windows `[edge + j, edge + j + 1)`, `g` is
/// largest at the near end of each, and `(d - 1 + j)² >= (d - 1)² + j(2d - 1)`
/// turns the sum into a geometric series:
/// `variation·amp·e^{-π(d-1)²/w²} / (1 - e^{-π(2d-1)/w²})`.
/// The extra unit of slack in `d - 1` absorbs the window boundary
/// convention. Requires `d >= 1`; returns infinity otherwise.
pub fn gaussian_side_tail(variation: f64, amp: f64, width: f64, d: f64) -> f64 {
    if variation == 0.0 {
        return 0.0;
    }
    if d < 1.0 {
        return f64::INFINITY;
    }
    let w2 = width * width;
    variation * amp * (-PI * (d - 1.0).powi(2) / w2).exp()
        / (1.0 - (-PI * (2.0 * d - 1.0) / w2).exp())
}

fn two_sided_tail(variation: f64, amp: f64, center: f64, width: f64, window: &Window) -> f64 {
    let lo = window.lo().to_f64();
    let hi = window.hi().to_f64();
    gaussian_side_tail(variation, amp, width, hi - center)
        + gaussian_side_tail(variation, amp, width, center - lo)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairingReport {
    /// `Σ d_t φ(t)` over the transform-side atoms.
    pub lhs: Complex64,
    /// `Σ c_s φ̂(s)` over the measure-side atoms.
    pub rhs: Complex64,
    pub tail_bound: f64,
    pub residual: f64,
    pub pass: bool,
}

impl PairingReport {
    pub fn scale(&self) -> f64 {
        self.lhs.norm().max(self.rhs.norm()).max(1.0)
    }

    /// Residual in excess of the certified tail.
    pub fn excess(&self) -> f64 {
        (self.residual - self.tail_bound).max(0.0)
    }
}

/// Atom positions rounded once, for pairing against many test functions.
struct EvaluatedAtoms {
    xs: Vec<f64>,
    cs: Vec<Complex64>,
}

impl EvaluatedAtoms {
    fn new(m: &WindowedMeasure) -> Self {
        let bits = m.precision();
        Self {
            xs: m
                .atoms()
                .iter()
                .map(|a| a.position.to_f64_at(bits))
                .collect(),
            cs: m.atoms().iter().map(|a| a.coefficient).collect(),
        }
    }

    fn pair(&self, f: impl Fn(f64) -> Complex64) -> Complex64 {
        self.xs.iter().zip(&self.cs).map(|(&x, &c)| c * f(x)).sum()
    }
}

/// `⟨μ̂, φ⟩` against `⟨μ, φ̂⟩` for every test function, evaluating atom
/// positions once.
pub fn pairing_batch(
    mu: &WindowedMeasure,
    mu_hat: &WindowedMeasure,
    tests: &[GaussianTestFn],
) -> Vec<Result<PairingReport>> {
    let space = EvaluatedAtoms::new(mu);
    let freq = EvaluatedAtoms::new(mu_hat);
    let v_space = mu.translation_bound();
    let v_freq = mu_hat.translation_bound();
    tests
        .iter()
        .map(|phi| {
            let lhs = freq.pair(|x| phi.eval(x));
            let rhs = space.pair(|x| phi.eval_hat(x));
            let tail_bound = two_sided_tail(v_freq, 1.0, phi.center, phi.width, mu_hat.window())
                + two_sided_tail(
                    v_space,
                    phi.width,
                    phi.frequency,
                    1.0 / phi.width,
                    mu.window(),
                );
            let residual = (lhs - rhs).norm();
            let scale = lhs.norm().max(rhs.norm()).max(1.0);
            // NaN-safe: an undefined tail is also too large.
            if !matches!(
                tail_bound.partial_cmp(&(MAX_TAIL_FRACTION * scale)),
                Some(Ordering::Less | Ordering::Equal)
            ) {
                return Err(Error::WindowTooSmall {
                    tail: tail_bound,
                    scale,
                });
            }
            let pass = residual <= tail_bound + PAIRING_REL_TOL * scale;
            Ok(PairingReport {
                lhs,
                rhs,
                tail_bound,
                residual,
                pass,
            })
        })
        .collect()
}

pub fn pairing_residual(
    mu: &WindowedMeasure,
    mu_hat: &WindowedMeasure,
    phi: &GaussianTestFn,
) -> Result<PairingReport> {
    pairing_batch(mu, mu_hat, std::slice::from_ref(phi))
        .pop()
        .expect("one report")
}

/// True iff no atom lies in the open interval `(-radius, radius)`. The
/// verdict covers only what the window holds.
pub fn vanishing_check(m: &WindowedMeasure, radius: &BigRational) -> bool {
    let lo = SymbolicPosition::rational(-radius.clone());
    let hi = SymbolicPosition::rational(radius.clone());
    !m.atoms().iter().any(|a| lo < a.position && a.position < hi)
}

/// [`vanishing_check`] for a periodic measure, restricted to `[-radius, radius]`.
pub fn vanishing_check_periodic(
    m: &std::sync::Arc<PeriodicLatticeMeasure>,
    radius: &BigRational,
) -> Result<bool> {
    let window = Window::rational(-radius.clone(), radius.clone())?;
    let restricted = WindowedMeasure::restrict(
        Term::lattice(m.clone(), 1.0, Vec::new()),
        &window,
        DEFAULT_PRECISION_BITS,
    )?;
    Ok(vanishing_check(&restricted, radius))
}

/// Smallest distance between consecutive atoms; infinity with fewer than
/// two atoms.
pub fn min_gap(m: &WindowedMeasure) -> f64 {
    let bits = m.precision();
    m.atoms()
        .windows(2)
        .map(|w| w[1].position.difference_f64(&w[0].position, bits))
        .fold(f64::INFINITY, f64::min)
}

/// Coordinates of `q + ε_n` in the basis `(1, ε_1, …, ε_dim-1)`, cleared of
/// denominators (scaling does not change rank or parallelism).
fn integer_coords(p: &SymbolicPosition, dim: usize) -> Vec<BigInt> {
    let q = p.rational_part();
    let mut v = vec![BigInt::zero(); dim];
    v[0] = q.numer().clone();
    if p.class() > 0 {
        v[p.class() as usize] = q.denom().clone();
    }
    v
}

fn rational_coords(p: &SymbolicPosition, dim: usize) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); dim];
    v[0] = p.rational_part().clone();
    if p.class() > 0 {
        v[p.class() as usize] = BigRational::one();
    }
    v
}

fn primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        v.iter_mut().for_each(|x| *x /= &g);
    }
}

/// Dimension over the rationals of the span of `positions`, by
/// fraction-free elimination on integer coordinate vectors.
pub fn q_rank(positions: &[SymbolicPosition]) -> usize {
    let dim = 1 + positions
        .iter()
        .map(|p| p.class() as usize)
        .max()
        .unwrap_or(0);
    let mut basis: Vec<(usize, Vec<BigInt>)> = Vec::new();
    for p in positions {
        if basis.len() == dim {
            break;
        }
        let mut v = integer_coords(p, dim);
        for (pc, b) in &basis {
            if v[*pc].is_zero() {
                continue;
            }
            let (bp, vp) = (b[*pc].clone(), v[*pc].clone());
            for (x, y) in v.iter_mut().zip(b) {
                *x = &bp * &*x - &vp * y;
            }
            primitive(&mut v);
        }
        if let Some(pc) = v.iter().position(|x| !x.is_zero()) {
            basis.push((pc, v));
        }
    }
    basis.len()
}

/// True iff the three positions are not rationally collinear, i.e. no
/// progression `a + bZ` with `b` in the span of `(1, ε_1, …)` holds them all.
pub fn ap_triple_certificate(
    p1: &SymbolicPosition,
    p2: &SymbolicPosition,
    p3: &SymbolicPosition,
) -> Result<bool> {
    if p1 == p2 || p1 == p3 || p2 == p3 {
        return Err(Error::NotDistinct);
    }
    let dim = 1 + [p1, p2, p3]
        .iter()
        .map(|p| p.class() as usize)
        .max()
        .expect("three");
    let (v1, v2, v3) = (
        rational_coords(p1, dim),
        rational_coords(p2, dim),
        rational_coords(p3, dim),
    );
    let d1: Vec<BigRational> = v1.iter().zip(&v2).map(|(a, b)| a - b).collect();
    let d2: Vec<BigRational> = v1.iter().zip(&v3).map(|(a, b)| a - b).collect();
    for i in 0..dim {
        for j in i + 1..dim {
            let minor = &d1[i] * &d2[j] - &d1[j] * &d2[i];
            if !minor.is_zero() {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Largest unit-window variation seen in a truncation; a check on its
/// translation bound.
pub fn max_unit_mass(m: &WindowedMeasure) -> f64 {
    m.max_unit_mass()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{int, ratio, restrict_window};
    use crate::symbolic::{epsilon, Frequency};
    use std::sync::Arc;

    fn comb_on(lo: i64, hi: i64) -> WindowedMeasure {
        restrict_window(
            Arc::new(PeriodicLatticeMeasure::unit_comb()),
            &Window::integers(lo, hi).unwrap(),
            &SymbolicPosition::integer(0),
            &Frequency::zero(),
            1.0,
            true,
        )
        .unwrap()
    }

    #[test]
    fn gaussian_transform_matches_quadrature() {
        // Trapezoid rule on a fine grid is spectrally accurate for Gaussians.
        let phi = GaussianTestFn::new(0.3, 0.7, 1.5).unwrap();
        let h = 1e-3;
        for xi in [-1.0, 0.0, 0.4, 0.7, 2.0] {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut x = -20.0;
            while x <= 20.0 {
                acc += phi.eval(x) * Complex64::from_polar(1.0, -2.0 * PI * xi * x);
                x += h;
            }
            assert!((acc * h - phi.eval_hat(xi)).norm() < 1e-10, "xi={xi}");
        }
        let std = GaussianTestFn::standard();
        for x in [-1.0, 0.0, 0.5] {
            assert!((std.eval(x) - std.eval_hat(x)).norm() < 1e-15);
        }
    }

    #[test]
    fn psf_with_standard_gaussian() {
        let comb = comb_on(-8, 8);
        let r = pairing_residual(&comb, &comb, &GaussianTestFn::standard()).unwrap();
        assert!(r.residual <= 1e-10);
        assert!(r.pass);
    }

    #[test]
    fn shifted_psf_within_tail() {
        let comb = comb_on(-12, 12);
        let phi = GaussianTestFn::new(0.3, 0.7, 1.5).unwrap();
        let r = pairing_residual(&comb, &comb, &phi).unwrap();
        assert!(r.pass);
        assert!(r.residual <= r.tail_bound + 1e-12);
    }

    #[test]
    fn small_window_is_diagnosed() {
        let comb = comb_on(-1, 1);
        let phi = GaussianTestFn::new(0.0, 0.0, 2.0).unwrap();
        assert!(matches!(
            pairing_residual(&comb, &comb, &phi),
            Err(Error::WindowTooSmall { .. })
        ));
    }

    #[test]
    fn tail_formula_edges() {
        assert_eq!(gaussian_side_tail(1.0, 1.0, 1.0, 0.5), f64::INFINITY);
        assert_eq!(gaussian_side_tail(0.0, 1.0, 1.0, 0.5), 0.0);
        let t = gaussian_side_tail(1.0, 1.0, 1.0, 10.0);
        assert!(t > 0.0 && t < 1e-100);
    }

    #[test]
    fn tail_bound_dominates_brute_force() {
        // Unit comb, right side only: Σ_{x > edge} e^{-π(x-c)²}.
        for (c, edge) in [(0.0f64, 3.0f64), (0.2, 2.5), (-1.0, 1.0)] {
            let brute: f64 = (1..200)
                .map(|k| edge.floor() + k as f64)
                .filter(|&x| x > edge)
                .map(|x: f64| (-PI * (x - c) * (x - c)).exp())
                .sum();
            assert!(brute <= gaussian_side_tail(1.0, 1.0, 1.0, edge - c));
        }
    }

    #[test]
    fn vanishing_examples() {
        assert!(!vanishing_check(&comb_on(-3, 3), &int(1)));
        let shifted = comb_on(-3, 3)
            .translate(&SymbolicPosition::rational(ratio(1, 2)))
            .unwrap();
        assert!(!vanishing_check(&shifted, &int(1)));
        assert!(vanishing_check(&shifted, &ratio(1, 2)));
    }

    #[test]
    fn gaps() {
        assert_eq!(min_gap(&comb_on(0, 5)), 1.0);
        let single = comb_on(0, 5);
        let w = Window::rational(ratio(1, 2), ratio(3, 2)).unwrap();
        let one = restrict_window(
            Arc::new(PeriodicLatticeMeasure::unit_comb()),
            &w,
            &SymbolicPosition::integer(0),
            &Frequency::zero(),
            1.0,
            true,
        )
        .unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(min_gap(&one), f64::INFINITY);
        assert_eq!(single.len(), 6);
    }

    #[test]
    fn rank_examples() {
        let ps = vec![
            SymbolicPosition::new(ratio(1, 20), 1),
            SymbolicPosition::new(ratio(3, 20), 1),
            SymbolicPosition::new(ratio(1, 10), 2),
        ];
        assert_eq!(q_rank(&ps), 3);
        let ints: Vec<_> = (0..3).map(SymbolicPosition::integer).collect();
        assert_eq!(q_rank(&ints), 1);
        assert_eq!(q_rank(&[]), 0);
        assert_eq!(q_rank(&[SymbolicPosition::integer(0)]), 0);
        // q + ε_1 and 2q + ε_1 and ε_1 span a 2-dimensional space.
        let ps = vec![
            SymbolicPosition::new(ratio(1, 3), 1),
            SymbolicPosition::new(ratio(2, 3), 1),
            epsilon(1),
        ];
        assert_eq!(q_rank(&ps), 2);
    }

    #[test]
    fn triple_examples() {
        let z: Vec<_> = (0..3).map(SymbolicPosition::integer).collect();
        assert!(!ap_triple_certificate(&z[0], &z[1], &z[2]).unwrap());
        let e1 = epsilon(1);
        let e1p = SymbolicPosition::new(int(1), 1);
        assert!(ap_triple_certificate(&e1, &e1p, &epsilon(2)).unwrap());
        let same: Vec<_> = [ratio(1, 20), ratio(7, 20), ratio(-3, 5)]
            .into_iter()
            .map(|q| SymbolicPosition::new(q, 1))
            .collect();
        assert!(!ap_triple_certificate(&same[0], &same[1], &same[2]).unwrap());
        assert_eq!(
            ap_triple_certificate(&e1, &e1, &epsilon(2)),
            Err(Error::NotDistinct)
        );
    }
}
