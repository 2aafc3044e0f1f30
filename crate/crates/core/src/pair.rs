//! Fourier pairs that vanish near the origin, and finite-window truncations
//! of their overlay.
//!
//! [`build_pair`] turns a vanishing signal on `Z_N`, `N = 100·M²`, into a
//! periodic measure `μ` with spacing `1/(10M)` such that `μ` and `μ̂` have no
//! atoms in `(-M, M)`. [`build_nu`] overlays such pairs for `M_n = 2^n`,
//! shifted and modulated by `ε_n` and weighted by `1/(V_n·n²)`:
//!
//! ```text
//! ν = Σ_n (1/D_n) M_{ε_n} T_{ε_n} μ_n      ν̂ = Σ_n (1/D_n) T_{ε_n} M_{-ε_n} μ̂_n
//! ```

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use num_rational::BigRational;

use crate::cyclic::{centered_rep, CyclicSignal};
use crate::error::{Error, Result};
use crate::measure::{
    int, lift_periodic, overlay, Op, PeriodicLatticeMeasure, Term, Window, WindowedMeasure,
};
use crate::solver::solve_vanishing_detailed;
use crate::symbolic::{Frequency, SymbolicPosition, DEFAULT_PRECISION_BITS};

pub use crate::symbolic::epsilon;

/// Largest `M` built directly (`N = 100·M² <= 10 000`).
pub const MAX_PAIR_M: u32 = 10;

/// Resource guard on the number of atoms a truncation may materialize.
pub const MAX_TRUNCATION_ATOMS: u64 = 10_000_000;

/// A Lemma-style pair `(μ, μ̂)` vanishing on `(-M, M)`.
#[derive(Debug, Clone)]
pub struct LemmaPair {
    pub m: u32,
    pub modulus: usize,
    pub signal: CyclicSignal,
    pub solver_residual: f64,
    pub mu: Arc<PeriodicLatticeMeasure>,
    pub mu_hat: Arc<PeriodicLatticeMeasure>,
}

impl LemmaPair {
    /// `M`, the radius of the open vanishing interval `(-M, M)`.
    pub fn vanishing_radius(&self) -> BigRational {
        int(self.m as i64)
    }
}

pub fn build_pair(m: u32) -> Result<LemmaPair> {
    if m == 0 || m > MAX_PAIR_M {
        return Err(Error::InvalidParameter(format!(
            "M must lie in 1..={MAX_PAIR_M}, got {m}"
        )));
    }
    let modulus = 100 * (m as usize) * (m as usize);
    let sol = solve_vanishing_detailed(modulus)?;
    let mu =
        lift_periodic(&sol.signal).dilate(&BigRational::new(1.into(), (10 * m as i64).into()))?;
    let mu_hat = mu.fourier();

    // The window |n| <= N/10 is exactly |n/(10M)| <= M. The signal side is
    // zero by construction; the transform side must sit under the drop
    // threshold so that no atoms survive there.
    let radius = (modulus / 10) as i64;
    let threshold = mu_hat.drop_threshold();
    let worst = (0..modulus)
        .filter(|&x| centered_rep(x, modulus).abs() <= radius)
        .map(|x| mu_hat.coeffs()[x].norm())
        .fold(0.0, f64::max);
    if worst >= threshold {
        return Err(Error::ConditioningExhausted {
            best: worst,
            bound: threshold,
        });
    }
    debug_assert!((0..modulus)
        .filter(|&x| centered_rep(x, modulus).abs() <= radius)
        .all(|x| mu.coeffs()[x] == Complex64::new(0.0, 0.0)));

    Ok(LemmaPair {
        m,
        modulus,
        signal: sol.signal,
        solver_residual: sol.residual,
        mu: Arc::new(mu),
        mu_hat: Arc::new(mu_hat),
    })
}

/// Process-wide memo of built pairs; construction is deterministic.
pub fn cached_pair(m: u32) -> Result<Arc<LemmaPair>> {
    static CACHE: OnceLock<Mutex<BTreeMap<u32, Arc<LemmaPair>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(p) = cache.lock().expect("pair cache poisoned").get(&m) {
        return Ok(p.clone());
    }
    let pair = Arc::new(build_pair(m)?);
    cache
        .lock()
        .expect("pair cache poisoned")
        .entry(m)
        .or_insert(pair.clone());
    Ok(pair)
}

/// `M_n = 2^n`.
pub fn schedule(n: u32) -> u32 {
    1 << n
}

/// Weight data for a class whose pair was materialized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassWeights {
    pub v_mu: f64,
    pub v_mu_hat: f64,
    /// `V_n = max(v_mu, v_mu_hat)`.
    pub v_n: f64,
    /// `D_n = V_n·n²`.
    pub d_n: f64,
}

#[derive(Debug, Clone)]
pub struct ClassEntry {
    pub n: u32,
    pub m: u32,
    pub epsilon: SymbolicPosition,
    /// `None` when the window lies inside `(-M_n + ε_n, M_n + ε_n)`, where
    /// the class has no atoms; such pairs are never built.
    pub weights: Option<ClassWeights>,
}

impl ClassEntry {
    pub fn is_dormant(&self) -> bool {
        self.weights.is_none()
    }
}

#[derive(Debug, Clone)]
pub struct NuTruncation {
    pub n_max: u32,
    pub window: Window,
    pub classes: Vec<ClassEntry>,
    pub nu: WindowedMeasure,
    pub nu_hat: WindowedMeasure,
}

/// Whether class `n` can place atoms in `window`.
pub fn class_is_dormant(window: &Window, n: u32) -> bool {
    let m = schedule(n) as i64;
    let lo = SymbolicPosition::new(int(-m), n);
    let hi = SymbolicPosition::new(int(m), n);
    window.inside_open(&lo, &hi)
}

fn estimate_atoms(window: &Window, n_max: u32) -> u64 {
    let len = window.length_f64();
    (1..=n_max)
        .filter(|&n| !class_is_dormant(window, n))
        .map(|n| {
            let per_unit = 10.0 * schedule(n) as f64;
            2 * ((len * per_unit).ceil() as u64 + 1)
        })
        .sum()
}

/// `ν` and `ν̂` restricted to `window`, summing classes `1..=n_max`.
pub fn build_nu(n_max: u32, window: &Window) -> Result<NuTruncation> {
    build_nu_at(n_max, window, DEFAULT_PRECISION_BITS)
}

/// [`build_nu`] with modulation phases evaluated at `bits` fractional bits.
pub fn build_nu_at(n_max: u32, window: &Window, bits: u32) -> Result<NuTruncation> {
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    if n_max >= 31 {
        return Err(Error::InvalidParameter(format!(
            "n_max {n_max} overflows the schedule"
        )));
    }
    let estimate = estimate_atoms(window, n_max);
    if estimate > MAX_TRUNCATION_ATOMS {
        return Err(Error::TooManyAtoms {
            estimate,
            limit: MAX_TRUNCATION_ATOMS,
        });
    }

    let mut classes = Vec::new();
    let mut nu_parts = Vec::new();
    let mut nu_hat_parts = Vec::new();
    for n in 1..=n_max {
        let eps = epsilon(n);
        let up = Frequency::epsilon(n, false);
        let down = Frequency::epsilon(n, true);
        let nu_ops = vec![Op::Translate(eps.clone()), Op::Modulate(up)];
        let nu_hat_ops = vec![Op::Modulate(down), Op::Translate(eps.clone())];
        let m = schedule(n);

        if class_is_dormant(window, n) {
            // weight·V(μ_n) <= 1/n² whatever the pair turns out to be.
            let bound = 1.0 / (n as f64 * n as f64);
            nu_parts.push(WindowedMeasure::restrict(
                Term::dormant(n, nu_ops, bound),
                window,
                bits,
            )?);
            nu_hat_parts.push(WindowedMeasure::restrict(
                Term::dormant(n, nu_hat_ops, bound),
                window,
                bits,
            )?);
            classes.push(ClassEntry {
                n,
                m,
                epsilon: eps,
                weights: None,
            });
            continue;
        }

        let pair = cached_pair(m)?;
        let v_mu = pair.mu.unit_variation();
        let v_mu_hat = pair.mu_hat.unit_variation();
        let v_n = v_mu.max(v_mu_hat);
        let d_n = v_n * (n as f64) * (n as f64);
        let weight = 1.0 / d_n;
        nu_parts.push(WindowedMeasure::restrict(
            Term::lattice(pair.mu.clone(), weight, nu_ops),
            window,
            bits,
        )?);
        nu_hat_parts.push(WindowedMeasure::restrict(
            Term::lattice(pair.mu_hat.clone(), weight, nu_hat_ops),
            window,
            bits,
        )?);
        classes.push(ClassEntry {
            n,
            m,
            epsilon: eps,
            weights: Some(ClassWeights {
                v_mu,
                v_mu_hat,
                v_n,
                d_n,
            }),
        });
    }

    Ok(NuTruncation {
        n_max,
        window: window.clone(),
        classes,
        nu: overlay(&nu_parts)?,
        nu_hat: overlay(&nu_hat_parts)?,
    })
}

/// `Σ_{n=1}^{n_max} 1/n²`, the translation bound of any truncation.
pub fn weight_sum(n_max: u32) -> f64 {
    (1..=n_max).map(|n| 1.0 / (n as f64).powi(2)).sum()
}

/// Rational `1/(10M)`, the common spacing of `μ` and `μ̂`.
pub fn pair_spacing(m: u32) -> BigRational {
    BigRational::new(1.into(), (10 * m as i64).into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_m1_shape() {
        let p = build_pair(1).unwrap();
        assert_eq!(p.modulus, 100);
        assert_eq!(p.mu.spacing(), &pair_spacing(1));
        assert_eq!(p.mu_hat.spacing(), &pair_spacing(1));
        assert_eq!(p.mu.period(), 100);
        assert_eq!(p.mu_hat.period(), 100);
        assert!(p.mu.max_abs() == 1.0);
    }

    #[test]
    fn pair_rejects_out_of_range() {
        assert!(build_pair(0).is_err());
        assert!(build_pair(MAX_PAIR_M + 1).is_err());
    }

    #[test]
    fn schedule_and_weights() {
        assert_eq!(schedule(1), 2);
        assert_eq!(schedule(4), 16);
        assert!(weight_sum(50) < std::f64::consts::PI.powi(2) / 6.0);
        assert!((weight_sum(2) - 1.25).abs() < 1e-15);
    }

    #[test]
    fn dormancy() {
        let w = Window::integers(-5, 5).unwrap();
        assert!(!class_is_dormant(&w, 1));
        assert!(!class_is_dormant(&w, 2));
        assert!(class_is_dormant(&w, 3));
        assert!(class_is_dormant(&w, 4));
        let w = Window::integers(-3, 3).unwrap();
        assert!(class_is_dormant(&w, 2));
    }

    #[test]
    fn nu_first_class_vanishes_near_origin() {
        let t = build_nu(1, &Window::integers(-1, 1).unwrap()).unwrap();
        assert!(t.nu.is_empty());
        assert!(t.nu_hat.is_empty());
        assert!(t.classes[0].is_dormant());
    }

    #[test]
    fn guard_trips() {
        let w = Window::integers(-2_000_000, 2_000_000).unwrap();
        assert!(matches!(build_nu(3, &w), Err(Error::TooManyAtoms { .. })));
    }
}
