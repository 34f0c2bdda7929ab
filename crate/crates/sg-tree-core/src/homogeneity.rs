use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::Rational;

/// An affine expression `constant + beta_bar·β̄`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Homogeneity {
    pub constant: Rational,
    pub beta_bar: Rational,
}

impl Homogeneity {
    pub fn new(constant: Rational, beta_bar: Rational) -> Self {
        Self { constant, beta_bar }
    }

    pub fn int(constant: i64, beta_bar: i64) -> Self {
        Self::new(Rational::from_integer(constant), Rational::from_integer(beta_bar))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// The homogeneity of a single noise, `-β̄`.
    pub fn noise() -> Self {
        Self::new(Rational::zero(), -Rational::one())
    }

    pub fn eval(&self, beta_bar: Rational) -> Rational {
        self.constant + self.beta_bar * beta_bar
    }

    pub fn eval_f64(&self, beta_bar: f64) -> f64 {
        to_f64(self.constant) + to_f64(self.beta_bar) * beta_bar
    }

    pub fn is_negative(&self, beta_bar: Rational) -> bool {
        self.eval(beta_bar) < Rational::zero()
    }

    /// Values of `β̄` at which the expression vanishes, if any.
    pub fn root(&self) -> Option<Rational> {
        if self.beta_bar.is_zero() {
            None
        } else {
            Some(-self.constant / self.beta_bar)
        }
    }

    pub fn scale(&self, k: Rational) -> Self {
        Self::new(self.constant * k, self.beta_bar * k)
    }
}

pub(crate) fn to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

impl Add for Homogeneity {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.constant + o.constant, self.beta_bar + o.beta_bar)
    }
}

impl Sub for Homogeneity {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.constant - o.constant, self.beta_bar - o.beta_bar)
    }
}

impl Neg for Homogeneity {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.constant, -self.beta_bar)
    }
}

impl std::iter::Sum for Homogeneity {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), Add::add)
    }
}

impl fmt::Display for Homogeneity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.constant.is_zero(), self.beta_bar.is_zero()) {
            (_, true) => write!(f, "{}", self.constant),
            (true, false) => write!(f, "{}·β̄", self.beta_bar),
            (false, false) if self.beta_bar < Rational::zero() => {
                write!(f, "{} - {}·β̄", self.constant, -self.beta_bar)
            }
            (false, false) => write!(f, "{} + {}·β̄", self.constant, self.beta_bar),
        }
    }
}

impl Serialize for Homogeneity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Homogeneity", 2)?;
        st.serialize_field("a", &self.constant.to_string())?;
        st.serialize_field("b", &self.beta_bar.to_string())?;
        st.end()
    }
}
