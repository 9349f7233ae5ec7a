//! Plain JSON instance files: poles and ascending numerator coefficients as
//! `[re, im]` pairs.
//!
//! ```json
//! {"poles": [[2, 0]], "numerator_coeffs": [[1, 0], [1, 0]], "k": 1, "side": "outside"}
//! ```

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blaschke::{BlaschkeError, PoleSet};
use crate::bounds::Side;
use crate::poly::Polynomial;
use crate::rational::{RationalError, RationalFn};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub poles: Vec<[f64; 2]>,
    pub numerator_coeffs: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<Side>,
}

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("malformed instance: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("pole {index} is not finite")]
    NonFinitePole { index: usize },
    #[error("numerator coefficient {index} is not finite")]
    NonFiniteCoeff { index: usize },
    #[error("pole {index} has modulus {modulus}, must exceed 1")]
    PoleInsideDisk { index: usize, modulus: f64 },
    #[error("no poles given")]
    NoPoles,
    #[error("numerator degree {m} exceeds pole count {n}")]
    DegreeExceedsPoles { m: usize, n: usize },
    #[error("numerator is identically zero")]
    ZeroNumerator,
    #[error("numerator vanishes at pole {index}")]
    CommonFactor { index: usize },
    #[error(transparent)]
    Rational(RationalError),
}

fn pair(c: Complex<f64>) -> [f64; 2] {
    [c.re, c.im]
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_rational(r: &RationalFn<f64>) -> Self {
        Self {
            poles: r.poles().poles().iter().copied().map(pair).collect(),
            numerator_coeffs: r.numerator().coeffs().iter().copied().map(pair).collect(),
            k: None,
            side: None,
        }
    }

    pub fn with_hypothesis(mut self, k: f64, side: Side) -> Self {
        self.k = Some(k);
        self.side = Some(side);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instance serializes")
    }

    pub fn to_rational(&self) -> Result<RationalFn<f64>, InstanceError> {
        let mut poles = Vec::with_capacity(self.poles.len());
        for (index, &[re, im]) in self.poles.iter().enumerate() {
            if !(re.is_finite() && im.is_finite()) {
                return Err(InstanceError::NonFinitePole { index });
            }
            poles.push(Complex::new(re, im));
        }
        let mut coeffs = Vec::with_capacity(self.numerator_coeffs.len());
        for (index, &[re, im]) in self.numerator_coeffs.iter().enumerate() {
            if !(re.is_finite() && im.is_finite()) {
                return Err(InstanceError::NonFiniteCoeff { index });
            }
            coeffs.push(Complex::new(re, im));
        }
        let ps = PoleSet::new(poles).map_err(|e| match e {
            BlaschkeError::Empty => InstanceError::NoPoles,
            BlaschkeError::PoleNotOutside { index, modulus } => InstanceError::PoleInsideDisk { index, modulus },
            other => InstanceError::Rational(other.into()),
        })?;
        RationalFn::new(Polynomial::from_coeffs(coeffs), ps).map_err(|e| match e {
            RationalError::ZeroNumerator => InstanceError::ZeroNumerator,
            RationalError::DegreeExceedsPoles { m, n } => InstanceError::DegreeExceedsPoles { m, n },
            RationalError::CommonFactor { index } => InstanceError::CommonFactor { index },
            other => InstanceError::Rational(other),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_worked_instance() {
        let f = InstanceFile::parse(r#"{"poles":[[2,0]],"numerator_coeffs":[[1,0],[1,0]]}"#).unwrap();
        let r = f.to_rational().unwrap();
        assert_eq!((r.m(), r.n()), (1, 1));
        assert_eq!(f.k, None);
    }

    #[test]
    fn round_trips_bit_for_bit() {
        let f = InstanceFile {
            poles: vec![[1.0 + f64::EPSILON * 7.0, -0.1], [std::f64::consts::PI, std::f64::consts::E]],
            numerator_coeffs: vec![[0.1, 0.2], [1e-300, -5e17]],
            k: Some(1.5),
            side: Some(Side::Outside),
        };
        let back = InstanceFile::parse(&f.to_json()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn reports_offending_index() {
        let f = InstanceFile::parse(r#"{"poles":[[2,0],[0.5,0]],"numerator_coeffs":[[1,0]]}"#).unwrap();
        assert!(matches!(f.to_rational(), Err(InstanceError::PoleInsideDisk { index: 1, .. })));
        let f = InstanceFile::parse(r#"{"poles":[[2,0]],"numerator_coeffs":[[1,0],[1,0],[1,0]]}"#).unwrap();
        assert!(matches!(f.to_rational(), Err(InstanceError::DegreeExceedsPoles { m: 2, n: 1 })));
        let f = InstanceFile::parse(r#"{"poles":[[2,0]],"numerator_coeffs":[[-2,0],[1,0]]}"#).unwrap();
        assert!(matches!(f.to_rational(), Err(InstanceError::CommonFactor { index: 0 })));
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = InstanceFile::parse(r#"{"poles": [[2, 0]"#).unwrap_err();
        assert!(err.to_string().contains("line 1"), "{err}");
    }
}
