//! Model parameters, derived constants and regime classification.

use core::fmt;

use alloc::format;

use crate::error::{Error, Result};

/// Starting gap and skewness pair.
///
/// `beta1` belongs to the process started at 0, `beta2` to the process
/// started at `x > 0`. Both skewness parameters lie in `(-1, 1)` and are
/// nonzero; a zero skewness is plain Brownian motion and every formula
/// downstream divides by it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkewConfig {
    x: f64,
    beta1: f64,
    beta2: f64,
}

impl SkewConfig {
    pub fn new(x: f64, beta1: f64, beta2: f64) -> Result<Self> {
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "starting gap x must be finite and > 0, got {x}"
            )));
        }
        for (name, b) in [("beta1", beta1), ("beta2", beta2)] {
            if !(b.is_finite() && b.abs() < 1.0) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must lie in (-1, 1), got {b}"
                )));
            }
            if b == 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "{name} = 0 is plain Brownian motion and is not supported"
                )));
            }
        }
        Ok(SkewConfig { x, beta1, beta2 })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn beta1(&self) -> f64 {
        self.beta1
    }

    pub fn beta2(&self) -> f64 {
        self.beta2
    }

    /// Same skewness pair, gap multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        SkewConfig::new(self.x * c, self.beta1, self.beta2)
    }

    pub fn with_x(&self, x: f64) -> Result<Self> {
        SkewConfig::new(x, self.beta1, self.beta2)
    }

    /// Left endpoint (PosPos) or right endpoint (PosNeg) of the support of
    /// the hitting local time: the value reached by pure drift.
    pub fn drift_horizon(&self) -> f64 {
        self.x / self.beta1
    }

    pub fn constants(&self) -> DerivedConstants {
        derive_constants(self)
    }

    pub fn regime(&self) -> Regime {
        classify_regime(self)
    }
}

/// Constants that appear in the jump compensator, the Kummer equation and
/// the logarithmic drift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedConstants {
    /// `1/(2 beta1) - 1/(2 beta2)`.
    pub xi_star: f64,
    /// `(1 + 3 beta2) / (2 beta2)`, the decay exponent of the jump density.
    pub gamma: f64,
    /// `(1 - beta1)(1 + beta2) / (4 beta2)`, the compensator prefactor.
    pub kappa: f64,
    /// Drift of `ln Z` per unit of the clock `∫ du / Z_u`.
    pub theta: f64,
}

pub fn derive_constants(cfg: &SkewConfig) -> DerivedConstants {
    let (b1, b2) = (cfg.beta1, cfg.beta2);
    DerivedConstants {
        xi_star: 1.0 / (2.0 * b1) - 1.0 / (2.0 * b2),
        gamma: (1.0 + 3.0 * b2) / (2.0 * b2),
        kappa: (1.0 - b1) * (1.0 + b2) / (4.0 * b2),
        theta: (b2 - b1 * (1.0 + 2.0 * b2)) / (1.0 + b2),
    }
}

/// Sign pattern of `(beta1, beta2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegimeTag {
    PosPos,
    PosNeg,
    NegPos,
    NegNeg,
}

impl fmt::Display for RegimeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RegimeTag::PosPos => "PosPos",
            RegimeTag::PosNeg => "PosNeg",
            RegimeTag::NegPos => "NegPos",
            RegimeTag::NegNeg => "NegNeg",
        };
        f.write_str(s)
    }
}

/// What is known about finiteness of the meeting time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Finiteness {
    /// Almost surely finite.
    Finite,
    /// Almost surely infinite: the two processes never meet.
    Infinite,
    /// The coalescence condition is violated; no claim either way.
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Regime {
    pub tag: RegimeTag,
    pub coalescence_guaranteed: bool,
    /// `beta1 > beta2 / (1 + 2 beta2)` for PosPos, and the reflected version
    /// `|beta2| > |beta1| / (1 + 2 |beta1|)` for NegNeg. Always true in PosNeg
    /// and false in NegPos.
    pub coalescence_condition: bool,
}

impl Regime {
    pub fn finiteness(&self) -> Finiteness {
        match (self.tag, self.coalescence_guaranteed) {
            (_, true) => Finiteness::Finite,
            (RegimeTag::NegPos, _) => Finiteness::Infinite,
            _ => Finiteness::Unknown,
        }
    }

    pub fn note(&self) -> &'static str {
        match (self.tag, self.finiteness()) {
            (RegimeTag::NegPos, _) => "the processes never meet: T* is infinite almost surely",
            (_, Finiteness::Finite) => "meeting time is finite almost surely",
            _ => "coalescence condition violated, finiteness unknown",
        }
    }
}

pub fn classify_regime(cfg: &SkewConfig) -> Regime {
    let (b1, b2) = (cfg.beta1, cfg.beta2);
    let tag = match (b1 > 0.0, b2 > 0.0) {
        (true, true) => RegimeTag::PosPos,
        (true, false) => RegimeTag::PosNeg,
        (false, true) => RegimeTag::NegPos,
        (false, false) => RegimeTag::NegNeg,
    };
    let condition = match tag {
        RegimeTag::PosPos => b1 > b2 / (1.0 + 2.0 * b2),
        RegimeTag::PosNeg => true,
        RegimeTag::NegPos => false,
        RegimeTag::NegNeg => b2.abs() > b1.abs() / (1.0 + 2.0 * b1.abs()),
    };
    Regime {
        tag,
        coalescence_guaranteed: condition,
        coalescence_condition: condition,
    }
}
