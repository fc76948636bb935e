//! Complex numbers stored as `exp(logmag + i*phase)`.
//!
//! Airy values along the contours reach `e^{±1500}`; everything that may
//! overflow is carried in this form and only converted at the end.

use std::f64::consts::TAU;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

/// A complex number `exp(logmag) * exp(i*phase)` with `phase` in `[0, 2pi)`.
///
/// Zero is `logmag == -inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogComplex {
    pub logmag: f64,
    pub phase: f64,
}

fn wrap(phase: f64) -> f64 {
    let p = phase.rem_euclid(TAU);
    // rem_euclid can round up to TAU itself
    if p >= TAU {
        0.0
    } else {
        p
    }
}

impl LogComplex {
    pub const ZERO: LogComplex = LogComplex {
        logmag: f64::NEG_INFINITY,
        phase: 0.0,
    };
    pub const ONE: LogComplex = LogComplex {
        logmag: 0.0,
        phase: 0.0,
    };

    pub fn new(logmag: f64, phase: f64) -> Self {
        if logmag == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        LogComplex {
            logmag,
            phase: wrap(phase),
        }
    }

    /// `exp(w)`.
    pub fn exp(w: Complex64) -> Self {
        Self::new(w.re, w.im)
    }

    pub fn from_complex(z: Complex64) -> Self {
        if z.re == 0.0 && z.im == 0.0 {
            return Self::ZERO;
        }
        Self::new(z.norm().ln(), z.arg())
    }

    pub fn is_zero(&self) -> bool {
        self.logmag == f64::NEG_INFINITY
    }

    pub fn to_complex(&self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(self.logmag.exp(), self.phase)
    }

    /// Principal-ish logarithm `logmag + i*phase` (phase in `[0, 2pi)`).
    pub fn ln(&self) -> Complex64 {
        Complex64::new(self.logmag, self.phase)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.logmag, -self.phase)
    }

    /// Multiply by `exp(w)`.
    pub fn scale_exp(&self, w: Complex64) -> Self {
        if self.is_zero() {
            return *self;
        }
        Self::new(self.logmag + w.re, self.phase + w.im)
    }

    pub fn mul_c(&self, z: Complex64) -> Self {
        *self * Self::from_complex(z)
    }

    /// Sum of many terms with a single rescaling by the largest magnitude.
    pub fn sum<I: IntoIterator<Item = LogComplex>>(terms: I) -> Self {
        let terms: Vec<LogComplex> = terms.into_iter().filter(|t| !t.is_zero()).collect();
        let m = terms
            .iter()
            .map(|t| t.logmag)
            .fold(f64::NEG_INFINITY, f64::max);
        if m == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        let s: Complex64 = terms
            .iter()
            .map(|t| Complex64::from_polar((t.logmag - m).exp(), t.phase))
            .sum();
        Self::from_complex(s).scale_exp(Complex64::new(m, 0.0))
    }
}

impl Mul for LogComplex {
    type Output = LogComplex;
    fn mul(self, o: LogComplex) -> LogComplex {
        if self.is_zero() || o.is_zero() {
            return LogComplex::ZERO;
        }
        LogComplex::new(self.logmag + o.logmag, self.phase + o.phase)
    }
}

impl Div for LogComplex {
    type Output = LogComplex;
    fn div(self, o: LogComplex) -> LogComplex {
        if self.is_zero() {
            return LogComplex::ZERO;
        }
        LogComplex::new(self.logmag - o.logmag, self.phase - o.phase)
    }
}

impl Neg for LogComplex {
    type Output = LogComplex;
    fn neg(self) -> LogComplex {
        if self.is_zero() {
            return self;
        }
        LogComplex::new(self.logmag, self.phase + std::f64::consts::PI)
    }
}

impl Add for LogComplex {
    type Output = LogComplex;
    fn add(self, o: LogComplex) -> LogComplex {
        LogComplex::sum([self, o])
    }
}

impl Sub for LogComplex {
    type Output = LogComplex;
    fn sub(self, o: LogComplex) -> LogComplex {
        self + (-o)
    }
}

impl Mul<Complex64> for LogComplex {
    type Output = LogComplex;
    fn mul(self, z: Complex64) -> LogComplex {
        self.mul_c(z)
    }
}

impl From<Complex64> for LogComplex {
    fn from(z: Complex64) -> Self {
        LogComplex::from_complex(z)
    }
}
