use std::f64::consts::FRAC_PI_2;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// A phase restricted to the QPSK alphabet `{0, π/2, π, 3π/2}`, stored as
/// the multiple of `π/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Quadrant(u8);

impl Quadrant {
    pub const ZERO: Quadrant = Quadrant(0);
    pub const HALF_PI: Quadrant = Quadrant(1);
    pub const PI: Quadrant = Quadrant(2);
    pub const THREE_HALF_PI: Quadrant = Quadrant(3);

    pub const ALL: [Quadrant; 4] = [Self::ZERO, Self::HALF_PI, Self::PI, Self::THREE_HALF_PI];

    pub fn new(k: u8) -> Result<Self> {
        if k < 4 {
            Ok(Quadrant(k))
        } else {
            Err(Error::Domain(format!("quadrant index {k} not in 0..4")))
        }
    }

    pub(crate) const fn wrap(k: u8) -> Self {
        Quadrant(k & 3)
    }

    /// Accepts any angle within 1e-9 rad of a multiple of `π/2`.
    pub fn from_radians(phase: f64) -> Result<Self> {
        let k = phase / FRAC_PI_2;
        let nearest = k.round();
        if !phase.is_finite() || (k - nearest).abs() * FRAC_PI_2 > 1e-9 {
            return Err(Error::Domain(format!("phase {phase} is not a multiple of π/2")));
        }
        Ok(Quadrant::wrap(nearest.rem_euclid(4.0) as u8))
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn radians(self) -> f64 {
        f64::from(self.0) * FRAC_PI_2
    }

    /// `e^{j·phase}`, exact.
    pub fn phasor<T: Real>(self) -> Complex<T> {
        let (o, z) = (T::one(), T::zero());
        match self.0 {
            0 => Complex::new(o, z),
            1 => Complex::new(z, o),
            2 => Complex::new(-o, z),
            _ => Complex::new(z, -o),
        }
    }

    /// `x · e^{-j·phase}`, computed without multiplications.
    pub(crate) fn derotate<T: Real>(self, x: Complex<T>) -> Complex<T> {
        match self.0 {
            0 => x,
            1 => Complex::new(x.im, -x.re),
            2 => Complex::new(-x.re, -x.im),
            _ => Complex::new(-x.im, x.re),
        }
    }
}

impl Add for Quadrant {
    type Output = Quadrant;
    fn add(self, rhs: Quadrant) -> Quadrant {
        Quadrant::wrap(self.0 + rhs.0)
    }
}

impl Sub for Quadrant {
    type Output = Quadrant;
    fn sub(self, rhs: Quadrant) -> Quadrant {
        Quadrant::wrap(self.0 + 4 - rhs.0)
    }
}

impl Neg for Quadrant {
    type Output = Quadrant;
    fn neg(self) -> Quadrant {
        Quadrant::wrap(4 - self.0)
    }
}

impl TryFrom<u8> for Quadrant {
    type Error = Error;
    fn try_from(k: u8) -> Result<Self> {
        Quadrant::new(k)
    }
}

impl From<Quadrant> for u8 {
    fn from(q: Quadrant) -> u8 {
        q.0
    }
}

/// The CCK phase tuple `(φ1, φ2, φ3, φ4)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct CckPhases(pub [Quadrant; 4]);

impl CckPhases {
    pub fn new(p1: Quadrant, p2: Quadrant, p3: Quadrant, p4: Quadrant) -> Self {
        CckPhases([p1, p2, p3, p4])
    }

    pub fn from_radians(phases: [f64; 4]) -> Result<Self> {
        let mut q = [Quadrant::ZERO; 4];
        for (slot, &p) in q.iter_mut().zip(&phases) {
            *slot = Quadrant::from_radians(p)?;
        }
        Ok(CckPhases(q))
    }

    pub fn phi1(&self) -> Quadrant {
        self.0[0]
    }

    /// Position in the lexicographic ordering of all 256 tuples.
    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, q| acc * 4 + usize::from(q.index()))
    }

    pub fn from_index(index: usize) -> Self {
        debug_assert!(index < 256);
        let q = |shift: usize| Quadrant::wrap((index >> shift) as u8);
        CckPhases([q(6), q(4), q(2), q(0)])
    }
}
