//! Flat, serializable views of measures and pairing reports.
//!
//! Positions are stored exactly (`"p/q"` plus class) alongside a 40-digit
//! decimal rendering for readers that only want numbers.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{Atom, Window, WindowedMeasure};
use crate::symbolic::{parse_position, SymbolicPosition, DECIMAL_DIGITS};
use crate::verify::PairingReport;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositionRecord {
    pub rational: String,
    pub class: u32,
}

impl PositionRecord {
    pub fn from_position(p: &SymbolicPosition) -> Self {
        Self {
            rational: p.rational_string(),
            class: p.class(),
        }
    }

    pub fn to_position(&self) -> Result<SymbolicPosition> {
        parse_position(&self.rational, self.class)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomRecord {
    pub position_rational: String,
    pub class: u32,
    pub position_float: String,
    pub coeff_re: f64,
    pub coeff_im: f64,
}

impl AtomRecord {
    pub fn from_atom(a: &Atom) -> Self {
        Self {
            position_rational: a.position.rational_string(),
            class: a.position.class(),
            position_float: a.position.decimal_string(DECIMAL_DIGITS),
            coeff_re: a.coefficient.re,
            coeff_im: a.coefficient.im,
        }
    }

    pub fn position(&self) -> Result<SymbolicPosition> {
        parse_position(&self.position_rational, self.class)
    }

    pub fn coefficient(&self) -> Complex64 {
        Complex64::new(self.coeff_re, self.coeff_im)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureDump {
    pub window: [PositionRecord; 2],
    pub atoms: Vec<AtomRecord>,
}

impl MeasureDump {
    pub fn from_measure(m: &WindowedMeasure) -> Self {
        Self {
            window: [
                PositionRecord::from_position(m.window().lo()),
                PositionRecord::from_position(m.window().hi()),
            ],
            atoms: m.atoms().iter().map(AtomRecord::from_atom).collect(),
        }
    }

    /// Checks that every position parses, lies in the window, agrees with
    /// its decimal rendering, and that the atoms are strictly increasing.
    pub fn validate(&self) -> Result<()> {
        let window = Window::new(self.window[0].to_position()?, self.window[1].to_position()?)?;
        let mut prev: Option<SymbolicPosition> = None;
        for (i, rec) in self.atoms.iter().enumerate() {
            let p = rec.position()?;
            if !window.contains(&p) {
                return Err(Error::Parse(format!(
                    "atom {i} at {p} lies outside the window"
                )));
            }
            if p.decimal_string(DECIMAL_DIGITS) != rec.position_float {
                return Err(Error::Parse(format!(
                    "atom {i}: position_float disagrees with {p}"
                )));
            }
            if !(rec.coeff_re.is_finite() && rec.coeff_im.is_finite()) {
                return Err(Error::Parse(format!("atom {i}: non-finite coefficient")));
            }
            if prev.as_ref().is_some_and(|q| q >= &p) {
                return Err(Error::Parse(format!(
                    "atom {i}: positions not strictly increasing"
                )));
            }
            prev = Some(p);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairingRecord {
    pub lhs_re: f64,
    pub lhs_im: f64,
    pub rhs_re: f64,
    pub rhs_im: f64,
    pub tail_bound: f64,
    pub residual: f64,
    pub pass: bool,
}

impl From<&PairingReport> for PairingRecord {
    fn from(r: &PairingReport) -> Self {
        Self {
            lhs_re: r.lhs.re,
            lhs_im: r.lhs.im,
            rhs_re: r.rhs.re,
            rhs_im: r.rhs.im,
            tail_bound: r.tail_bound,
            residual: r.residual,
            pass: r.pass,
        }
    }
}
