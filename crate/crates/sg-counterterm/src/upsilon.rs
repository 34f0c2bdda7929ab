use std::fmt;
use std::ops::{Mul, Neg};

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use sg_tree_core::{DecoratedTree, Rational};

use crate::CountertermError;

/// An exact value `c·β^k·i^m` with `m ∈ {0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UpsilonValue {
    c: Rational,
    k: i32,
    m: u8,
}

impl UpsilonValue {
    /// Normalizes `i^m` into `m ∈ {0, 1}` and the sign of `c`.
    pub fn new(c: Rational, k: i32, m: i32) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let m = m.rem_euclid(4);
        let c = if m >= 2 { -c } else { c };
        Self { c, k, m: (m % 2) as u8 }
    }

    pub fn zero() -> Self {
        Self { c: Rational::zero(), k: 0, m: 0 }
    }

    pub fn coefficient(&self) -> Rational {
        self.c
    }

    pub fn beta_power(&self) -> i32 {
        self.k
    }

    pub fn i_power(&self) -> u8 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_zero()
    }

    /// Exact sum when both terms are monomials of the same shape (or zero).
    pub fn checked_add(self, o: Self) -> Option<Self> {
        if self.is_zero() {
            return Some(o);
        }
        if o.is_zero() {
            return Some(self);
        }
        (self.k == o.k && self.m == o.m).then(|| Self::new(self.c + o.c, self.k, self.m.into()))
    }

    /// Numerical value `(re, im)` at a given `β`.
    pub fn eval(&self, beta: f64) -> (f64, f64) {
        let r = *self.c.numer() as f64 / *self.c.denom() as f64 * beta.powi(self.k);
        if self.m == 0 {
            (r, 0.0)
        } else {
            (0.0, r)
        }
    }
}

impl Mul for UpsilonValue {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(self.c * o.c, self.k + o.k, i32::from(self.m) + i32::from(o.m))
    }
}

impl Neg for UpsilonValue {
    type Output = Self;
    fn neg(self) -> Self {
        Self { c: -self.c, ..self }
    }
}

impl fmt::Display for UpsilonValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        write!(f, "{}", self.c)?;
        if self.k != 0 {
            write!(f, "·β^{}", self.k)?;
        }
        if self.m == 1 {
            f.write_str("·i")?;
        }
        Ok(())
    }
}

impl Serialize for UpsilonValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("UpsilonValue", 3)?;
        st.serialize_field("c", &self.c.to_string())?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("m", &self.m)?;
        st.end()
    }
}

/// `Υ[τ] = (iβ)⁻¹ Π_u β q(u)^{d(u)} / 2` with `d(u)` the number of kernel
/// edges leaving `u` upwards.
pub fn upsilon(tree: &DecoratedTree) -> Result<UpsilonValue, CountertermError> {
    let key = || tree.key().to_string();
    if tree.deco_degree() != 0 {
        return Err(CountertermError::Decorated(key()));
    }
    if !tree.is_neutral() {
        return Err(CountertermError::NotNeutral(key()));
    }
    if tree.has_zero_labeled_node() {
        return Err(CountertermError::NoiseFreeNode(key()));
    }
    let mut c = Rational::one();
    for node in tree.preorder() {
        let q = node.label().charge();
        let d = node.children().len() as u32;
        c *= Rational::from_integer(q.pow(d)) / Rational::from_integer(2);
    }
    let n = tree.node_count() as i32;
    // β^n from the product, (iβ)^{-1} = -i·β^{-1}
    Ok(UpsilonValue::new(-c, n - 1, 1))
}
