//! Discrete atomic measures on the line.
//!
//! A [`PeriodicLatticeMeasure`] is `Σ_{n∈Z} c[n mod P] δ_{A·n}` with rational
//! spacing `A`; its Fourier transform is again of that form. A
//! [`WindowedMeasure`] is the finite restriction of a sum of translated and
//! modulated lattice measures to a closed window, and remembers how it was
//! built so that every atom can be recomputed from its provenance.

use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::cyclic::{dft, CyclicSignal};
use crate::error::{Error, Result};
use crate::symbolic::{parse_rational, Frequency, SymbolicPosition, DEFAULT_PRECISION_BITS};

/// Atoms below this fraction of their term's largest coefficient are dropped.
pub const ATOM_DROP_RATIO: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicLatticeMeasure {
    spacing: BigRational,
    coeffs: Vec<Complex64>,
}

impl PeriodicLatticeMeasure {
    pub fn new(spacing: BigRational, coeffs: Vec<Complex64>) -> Result<Self> {
        if !spacing.is_positive() {
            return Err(Error::InvalidParameter(format!(
                "spacing must be positive, got {spacing}"
            )));
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter("period must be at least 1".into()));
        }
        Ok(Self { spacing, coeffs })
    }

    /// `Σ δ_n`.
    pub fn unit_comb() -> Self {
        Self {
            spacing: BigRational::one(),
            coeffs: vec![Complex64::new(1.0, 0.0)],
        }
    }

    pub fn spacing(&self) -> &BigRational {
        &self.spacing
    }

    pub fn period(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of the atom at `A·n`.
    pub fn coeff(&self, n: i64) -> Complex64 {
        self.coeffs[n.rem_euclid(self.period() as i64) as usize]
    }

    /// `A·P`.
    pub fn real_period(&self) -> BigRational {
        &self.spacing * BigRational::from_integer(BigInt::from(self.period()))
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Moves the atom at `A·n` to `α·A·n`; masses are unchanged.
    pub fn dilate(&self, alpha: &BigRational) -> Result<Self> {
        if !alpha.is_positive() {
            return Err(Error::InvalidParameter(format!(
                "dilation factor must be positive, got {alpha}"
            )));
        }
        Ok(Self {
            spacing: &self.spacing * alpha,
            coeffs: self.coeffs.clone(),
        })
    }

    /// Fourier transform. For `Σ g(n mod P) δ_{An}` this is the lattice
    /// measure with spacing `1/(A·P)` and coefficients `(1/A)·ĝ`.
    pub fn fourier(&self) -> Self {
        let ghat = dft(&CyclicSignal::new(self.coeffs.clone()));
        let inv_a = self.spacing.recip();
        let factor = inv_a.to_f64().expect("finite spacing");
        Self {
            spacing: self.real_period().recip(),
            coeffs: ghat.into_values().into_iter().map(|c| c * factor).collect(),
        }
    }

    /// Number of lattice points in any half-open unit window that starts on
    /// a lattice point: `ceil(1/A)`.
    pub fn points_per_unit(&self) -> usize {
        let inv = self.spacing.recip();
        inv.ceil()
            .to_integer()
            .to_usize()
            .expect("spacing is not absurdly small")
    }

    /// Supremum over `t` of the total variation on `[t, t+1)`.
    ///
    /// The supremum is attained with `t` on a lattice point, where the window
    /// holds exactly `ceil(1/A)` consecutive atoms, so it suffices to slide a
    /// run of that length over one period.
    pub fn unit_variation(&self) -> f64 {
        let abs: Vec<f64> = self.coeffs.iter().map(|c| c.norm()).collect();
        let p = abs.len();
        let len = self.points_per_unit();
        let full = (len / p) as f64 * abs.iter().sum::<f64>();
        let rem = len % p;
        let best_run = (0..p)
            .map(|s| (0..rem).map(|j| abs[(s + j) % p]).sum::<f64>())
            .fold(0.0, f64::max);
        full + best_run
    }

    pub fn drop_threshold(&self) -> f64 {
        ATOM_DROP_RATIO * self.max_abs()
    }
}

/// `τ = Σ f(n mod N) δ_n`.
pub fn lift_periodic(f: &CyclicSignal) -> PeriodicLatticeMeasure {
    PeriodicLatticeMeasure {
        spacing: BigRational::one(),
        coeffs: f.values().to_vec(),
    }
}

pub fn dilate(m: &PeriodicLatticeMeasure, alpha: &BigRational) -> Result<PeriodicLatticeMeasure> {
    m.dilate(alpha)
}

pub fn fourier_periodic(m: &PeriodicLatticeMeasure) -> PeriodicLatticeMeasure {
    m.fourier()
}

pub fn unit_variation(m: &PeriodicLatticeMeasure) -> f64 {
    m.unit_variation()
}

/// Closed interval `[lo, hi]` with symbolic endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    lo: SymbolicPosition,
    hi: SymbolicPosition,
}

impl Window {
    pub fn new(lo: SymbolicPosition, hi: SymbolicPosition) -> Result<Self> {
        if lo >= hi {
            return Err(Error::InvalidWindow {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        Ok(Self { lo, hi })
    }

    pub fn rational(lo: BigRational, hi: BigRational) -> Result<Self> {
        Self::new(
            SymbolicPosition::rational(lo),
            SymbolicPosition::rational(hi),
        )
    }

    pub fn integers(lo: i64, hi: i64) -> Result<Self> {
        Self::new(SymbolicPosition::integer(lo), SymbolicPosition::integer(hi))
    }

    /// Parses `"a:b"` with exact decimal or `p/q` endpoints.
    pub fn parse(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("window must look like a:b, got {s:?}")))?;
        Self::rational(parse_rational(a)?, parse_rational(b)?)
    }

    pub fn lo(&self) -> &SymbolicPosition {
        &self.lo
    }

    pub fn hi(&self) -> &SymbolicPosition {
        &self.hi
    }

    pub fn contains(&self, x: &SymbolicPosition) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// True when `[lo, hi]` sits strictly inside `(a, b)`.
    pub fn inside_open(&self, a: &SymbolicPosition, b: &SymbolicPosition) -> bool {
        a < &self.lo && &self.hi < b
    }

    pub fn translate(&self, r: &SymbolicPosition) -> Result<Self> {
        Ok(Self {
            lo: self.lo.checked_add(r)?,
            hi: self.hi.checked_add(r)?,
        })
    }

    pub fn length_f64(&self) -> f64 {
        self.hi.difference_f64(&self.lo, DEFAULT_PRECISION_BITS)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub position: SymbolicPosition,
    pub coefficient: Complex64,
}

/// One step applied to a lattice measure, in order.
#[derive(Debug, Clone, PartialEq)]
pub enum Op {
    /// `T_r`: support point `x` moves to `x + r`.
    Translate(SymbolicPosition),
    /// `M_a`: coefficient at `x` is multiplied by `e^{2πi a x}`.
    Modulate(Frequency),
}

#[derive(Debug, Clone, PartialEq)]
pub enum TermKind {
    /// A weighted lattice measure whose restriction is materialized.
    Lattice {
        measure: Arc<PeriodicLatticeMeasure>,
        weight: f64,
    },
    /// A term known to place no atoms in the window. Only its unit-window
    /// variation bound is kept, for tail estimates outside the window.
    Dormant { variation_bound: f64 },
}

/// Provenance of one summand of a windowed measure.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub class: u32,
    pub ops: Vec<Op>,
    pub kind: TermKind,
}

impl Term {
    pub fn lattice(measure: Arc<PeriodicLatticeMeasure>, weight: f64, ops: Vec<Op>) -> Self {
        let class = ops
            .iter()
            .filter_map(|op| match op {
                Op::Translate(r) => Some(r.class()),
                Op::Modulate(_) => None,
            })
            .max()
            .unwrap_or(0);
        Self {
            class,
            ops,
            kind: TermKind::Lattice { measure, weight },
        }
    }

    pub fn dormant(class: u32, ops: Vec<Op>, variation_bound: f64) -> Self {
        Self {
            class,
            ops,
            kind: TermKind::Dormant { variation_bound },
        }
    }

    /// Sum of all translations.
    pub fn total_shift(&self) -> Result<SymbolicPosition> {
        self.ops
            .iter()
            .try_fold(SymbolicPosition::integer(0), |acc, op| match op {
                Op::Translate(r) => acc.checked_add(r),
                Op::Modulate(_) => Ok(acc),
            })
    }

    /// Bound on the variation of the full (unrestricted) term over any unit
    /// window.
    pub fn variation_bound(&self) -> f64 {
        match &self.kind {
            TermKind::Lattice { measure, weight } => weight.abs() * measure.unit_variation(),
            TermKind::Dormant { variation_bound } => *variation_bound,
        }
    }

    /// Position and coefficient of the image of the lattice atom `A·k`.
    pub fn atom_for(&self, k: i64, bits: u32) -> Result<Option<Atom>> {
        let TermKind::Lattice { measure, weight } = &self.kind else {
            return Ok(None);
        };
        let mut pos =
            SymbolicPosition::rational(measure.spacing() * BigRational::from_integer(k.into()));
        let mut coef = measure.coeff(k) * *weight;
        for op in &self.ops {
            match op {
                Op::Translate(r) => pos = pos.checked_add(r)?,
                Op::Modulate(a) => coef *= cis(a.phase_turns(&pos, bits)),
            }
        }
        Ok(Some(Atom {
            position: pos,
            coefficient: coef,
        }))
    }

    fn drop_threshold(&self) -> f64 {
        match &self.kind {
            TermKind::Lattice { measure, weight } => measure.drop_threshold() * weight.abs(),
            TermKind::Dormant { .. } => 0.0,
        }
    }
}

fn cis(turns: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * turns)
}

/// Finite list of atoms on a closed window, sorted by position.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowedMeasure {
    window: Window,
    atoms: Vec<Atom>,
    provenance: Vec<Term>,
    precision: u32,
}

impl WindowedMeasure {
    /// Restricts one term to `window`, evaluating phases at `bits` bits.
    pub fn restrict(term: Term, window: &Window, bits: u32) -> Result<Self> {
        let mut atoms = Vec::new();
        if let TermKind::Lattice { measure, .. } = &term.kind {
            let shift = term.total_shift()?;
            let a = measure.spacing();
            // Candidate indices from a floating bracket widened by two on
            // each side; membership is then decided exactly.
            let a_f = a.to_f64().expect("finite spacing");
            let shift_f = shift.to_f64();
            let k_lo = ((window.lo().to_f64() - shift_f) / a_f).floor() - 2.0;
            let k_hi = ((window.hi().to_f64() - shift_f) / a_f).ceil() + 2.0;
            if !(k_lo.abs() < 1e15 && k_hi.abs() < 1e15) {
                return Err(Error::InvalidParameter(
                    "window too far out for the lattice".into(),
                ));
            }
            let (k_lo, k_hi) = (k_lo as i64, k_hi as i64);
            let threshold = term.drop_threshold();
            for k in k_lo..=k_hi {
                let x = SymbolicPosition::new(
                    a * BigRational::from_integer(k.into()) + shift.rational_part(),
                    shift.class(),
                );
                if !window.contains(&x) {
                    continue;
                }
                let atom = term.atom_for(k, bits)?.expect("lattice term");
                debug_assert_eq!(atom.position, x);
                if atom.coefficient.norm() >= threshold && atom.coefficient.norm() > 0.0 {
                    atoms.push(atom);
                }
            }
        }
        Ok(Self {
            window: window.clone(),
            atoms,
            provenance: vec![term],
            precision: bits,
        })
    }

    /// Measure with no atoms and no provenance.
    pub fn empty(window: Window) -> Self {
        Self {
            window,
            atoms: Vec::new(),
            provenance: Vec::new(),
            precision: DEFAULT_PRECISION_BITS,
        }
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn provenance(&self) -> &[Term] {
        &self.provenance
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn positions(&self) -> impl Iterator<Item = &SymbolicPosition> {
        self.atoms.iter().map(|a| &a.position)
    }

    /// `T_r`: shifts atoms and window.
    pub fn translate(&self, r: &SymbolicPosition) -> Result<Self> {
        let atoms = self
            .atoms
            .iter()
            .map(|a| {
                Ok(Atom {
                    position: a.position.checked_add(r)?,
                    coefficient: a.coefficient,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let provenance = self
            .provenance
            .iter()
            .cloned()
            .map(|mut t| {
                t.ops.push(Op::Translate(r.clone()));
                t.class = t.class.max(r.class());
                t
            })
            .collect();
        Ok(Self {
            window: self.window.translate(r)?,
            atoms,
            provenance,
            precision: self.precision,
        })
    }

    /// `M_a`: multiplies each coefficient by `e^{2πi a x}`.
    pub fn modulate(&self, a: &Frequency) -> Self {
        let atoms = self
            .atoms
            .iter()
            .map(|at| Atom {
                position: at.position.clone(),
                coefficient: at.coefficient * cis(a.phase_turns(&at.position, self.precision)),
            })
            .collect();
        let provenance = self
            .provenance
            .iter()
            .cloned()
            .map(|mut t| {
                t.ops.push(Op::Modulate(a.clone()));
                t
            })
            .collect();
        Self {
            window: self.window.clone(),
            atoms,
            provenance,
            precision: self.precision,
        }
    }

    /// `M_a T_r`: translate first, then modulate at the new positions.
    pub fn translate_modulate(&self, r: &SymbolicPosition, a: &Frequency) -> Result<Self> {
        Ok(self.translate(r)?.modulate(a))
    }

    /// Bound on the unit-window variation of the full overlay this window
    /// was cut from.
    pub fn translation_bound(&self) -> f64 {
        self.provenance.iter().map(Term::variation_bound).sum()
    }

    /// Largest `Σ|c|` over half-open unit windows `[t, t+1)` that fit the
    /// atoms present. The maximum is attained with `t` on an atom.
    pub fn max_unit_mass(&self) -> f64 {
        let one = BigRational::one();
        let mut best = 0.0f64;
        let mut end = 0;
        let mut mass = 0.0;
        for (i, a) in self.atoms.iter().enumerate() {
            let limit = a.position.add_rational(&one);
            if end < i {
                end = i;
                mass = 0.0;
            }
            while end < self.atoms.len() && self.atoms[end].position < limit {
                mass += self.atoms[end].coefficient.norm();
                end += 1;
            }
            best = best.max(mass);
            mass -= a.coefficient.norm();
        }
        best
    }
}

/// One summand of an overlay: `weight · (ops applied to m)` cut to `window`.
/// `translate_first` selects `M_a T_r` (true) or `T_r M_a` (false).
pub fn restrict_window(
    m: Arc<PeriodicLatticeMeasure>,
    window: &Window,
    shift: &SymbolicPosition,
    freq: &Frequency,
    weight: f64,
    translate_first: bool,
) -> Result<WindowedMeasure> {
    let t = Op::Translate(shift.clone());
    let f = Op::Modulate(freq.clone());
    let ops = if translate_first {
        vec![t, f]
    } else {
        vec![f, t]
    };
    WindowedMeasure::restrict(
        Term::lattice(m, weight, ops),
        window,
        DEFAULT_PRECISION_BITS,
    )
}

/// `M_a T_r` applied to a windowed measure.
pub fn translate_modulate(
    m: &WindowedMeasure,
    r: &SymbolicPosition,
    a: &Frequency,
) -> Result<WindowedMeasure> {
    m.translate_modulate(r, a)
}

/// Sum of windowed measures on a common window. Equal positions merge by
/// adding coefficients.
pub fn overlay(parts: &[WindowedMeasure]) -> Result<WindowedMeasure> {
    let first = parts
        .first()
        .ok_or_else(|| Error::InvalidParameter("overlay of no measures".into()))?;
    if parts.iter().any(|p| p.window != first.window) {
        return Err(Error::WindowMismatch);
    }
    let mut all: Vec<(Atom, f64)> = parts
        .iter()
        .flat_map(|p| p.atoms.iter().map(|a| (a.clone(), a.coefficient.norm())))
        .collect();
    all.sort_by(|a, b| a.0.position.cmp(&b.0.position));
    let mut atoms: Vec<Atom> = Vec::with_capacity(all.len());
    let mut scales: Vec<f64> = Vec::with_capacity(all.len());
    for (atom, mag) in all {
        match atoms.last_mut() {
            Some(last) if last.position == atom.position => {
                last.coefficient += atom.coefficient;
                let s = scales.last_mut().expect("parallel");
                *s = s.max(mag);
            }
            _ => {
                atoms.push(atom);
                scales.push(mag);
            }
        }
    }
    let atoms = atoms
        .into_iter()
        .zip(scales)
        .filter(|(a, s)| a.coefficient.norm() >= ATOM_DROP_RATIO * s && a.coefficient.norm() > 0.0)
        .map(|(a, _)| a)
        .collect();
    Ok(WindowedMeasure {
        window: first.window.clone(),
        atoms,
        provenance: parts
            .iter()
            .flat_map(|p| p.provenance.iter().cloned())
            .collect(),
        precision: parts
            .iter()
            .map(|p| p.precision)
            .max()
            .unwrap_or(DEFAULT_PRECISION_BITS),
    })
}

/// Rational `n/d` helper for callers building spacings and windows.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `BigRational` for a small integer.
pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::epsilon;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn comb_transforms_to_itself() {
        let comb = PeriodicLatticeMeasure::unit_comb();
        let hat = comb.fourier();
        assert_eq!(hat.spacing(), &int(1));
        assert_eq!(hat.period(), 1);
        assert!((hat.coeffs()[0] - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn lift_and_dilate() {
        let f = CyclicSignal::delta(2, 0);
        let tau = lift_periodic(&f);
        assert_eq!(tau.spacing(), &int(1));
        assert_eq!(tau.coeff(4), c(1.0));
        assert_eq!(tau.coeff(-3), c(0.0));
        let comb = PeriodicLatticeMeasure::unit_comb();
        assert_eq!(comb.dilate(&int(1)).unwrap(), comb);
        assert_eq!(comb.dilate(&ratio(1, 10)).unwrap().spacing(), &ratio(1, 10));
        assert!(comb.dilate(&int(0)).is_err());
        assert!(comb.dilate(&int(-2)).is_err());
    }

    #[test]
    fn unit_variation_examples() {
        assert_eq!(PeriodicLatticeMeasure::unit_comb().unit_variation(), 1.0);
        let tenth = PeriodicLatticeMeasure::unit_comb()
            .dilate(&ratio(1, 10))
            .unwrap();
        assert_eq!(tenth.points_per_unit(), 10);
        assert!((tenth.unit_variation() - 10.0).abs() < 1e-12);
        // Spacing 3/10: [t, t+1) holds 4 points at most.
        let m = PeriodicLatticeMeasure::new(ratio(3, 10), vec![c(1.0), c(2.0), c(0.5)]).unwrap();
        assert_eq!(m.points_per_unit(), 4);
        assert!((m.unit_variation() - 5.5).abs() < 1e-12);
    }

    #[test]
    fn restrict_examples() {
        let comb = Arc::new(PeriodicLatticeMeasure::unit_comb());
        let w = Window::rational(ratio(-5, 2), ratio(5, 2)).unwrap();
        let m = restrict_window(
            comb.clone(),
            &w,
            &SymbolicPosition::integer(0),
            &Frequency::zero(),
            1.0,
            true,
        )
        .unwrap();
        let xs: Vec<_> = m.positions().cloned().collect();
        assert_eq!(
            xs,
            (-2..=2).map(SymbolicPosition::integer).collect::<Vec<_>>()
        );

        let tenth = Arc::new(comb.dilate(&ratio(1, 10)).unwrap());
        let w = Window::rational(int(0), ratio(35, 100)).unwrap();
        let m = restrict_window(
            tenth,
            &w,
            &SymbolicPosition::integer(0),
            &Frequency::zero(),
            1.0,
            true,
        )
        .unwrap();
        let xs: Vec<_> = m.positions().cloned().collect();
        assert_eq!(
            xs,
            (0..4)
                .map(|k| SymbolicPosition::rational(ratio(k, 10)))
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn translate_by_epsilon_tags_class() {
        let comb = Arc::new(PeriodicLatticeMeasure::unit_comb());
        let w = Window::integers(-3, 3).unwrap();
        let m = restrict_window(
            comb,
            &w,
            &SymbolicPosition::integer(0),
            &Frequency::zero(),
            1.0,
            true,
        )
        .unwrap();
        let t = m.translate(&epsilon(1)).unwrap();
        assert_eq!(t.len(), 7);
        assert_eq!(t.atoms()[0].position, SymbolicPosition::new(int(-3), 1));
        assert!(t.atoms().iter().all(|a| a.position.class() == 1));
        assert_eq!(t.window().lo(), &SymbolicPosition::new(int(-3), 1));
        // A second, different ε cannot be added.
        assert!(t.translate(&epsilon(2)).is_err());
        let same = m
            .translate_modulate(&SymbolicPosition::integer(0), &Frequency::zero())
            .unwrap();
        assert_eq!(same.atoms(), m.atoms());
    }

    #[test]
    fn overlay_merges() {
        let comb = Arc::new(PeriodicLatticeMeasure::unit_comb());
        let w = Window::integers(-3, 3).unwrap();
        let m = restrict_window(
            comb.clone(),
            &w,
            &SymbolicPosition::integer(0),
            &Frequency::zero(),
            1.0,
            true,
        )
        .unwrap();
        let doubled = overlay(&[m.clone(), m.clone()]).unwrap();
        assert_eq!(doubled.len(), m.len());
        assert!(doubled.atoms().iter().all(|a| a.coefficient == c(2.0)));

        let a =
            restrict_window(comb.clone(), &w, &epsilon(1), &Frequency::zero(), 1.0, true).unwrap();
        let b =
            restrict_window(comb.clone(), &w, &epsilon(2), &Frequency::zero(), 1.0, true).unwrap();
        let ab = overlay(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(ab.len(), a.len() + b.len());
        assert!(ab.atoms().windows(2).all(|p| p[0].position < p[1].position));

        let cancel = restrict_window(
            comb.clone(),
            &w,
            &SymbolicPosition::integer(0),
            &Frequency::zero(),
            -1.0,
            true,
        )
        .unwrap();
        assert!(overlay(&[m.clone(), cancel]).unwrap().is_empty());

        let other = restrict_window(
            comb,
            &Window::integers(-2, 2).unwrap(),
            &SymbolicPosition::integer(0),
            &Frequency::zero(),
            1.0,
            true,
        )
        .unwrap();
        assert_eq!(overlay(&[m, other]).unwrap_err(), Error::WindowMismatch);
    }

    #[test]
    fn max_unit_mass_uses_half_open_windows() {
        let comb = Arc::new(PeriodicLatticeMeasure::unit_comb());
        let w = Window::integers(0, 5).unwrap();
        let m = restrict_window(
            comb.clone(),
            &w,
            &SymbolicPosition::integer(0),
            &Frequency::zero(),
            1.0,
            true,
        )
        .unwrap();
        assert_eq!(m.max_unit_mass(), 1.0);
        let half = Arc::new(comb.dilate(&ratio(1, 2)).unwrap());
        let m = restrict_window(
            half,
            &w,
            &SymbolicPosition::integer(0),
            &Frequency::zero(),
            0.5,
            true,
        )
        .unwrap();
        assert_eq!(m.max_unit_mass(), 1.0);
    }

    #[test]
    fn window_parsing() {
        let w = Window::parse("-12:12").unwrap();
        assert_eq!(w.lo(), &SymbolicPosition::integer(-12));
        assert!(Window::parse("1:1").is_err());
        assert!(Window::parse("3").is_err());
        assert!(Window::parse("-0.5:0.25").is_ok());
    }
}
