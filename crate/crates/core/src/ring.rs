//! Coefficient-ring abstraction shared by numeric and symbolic code paths.
//!
//! Elements carry their own context (modulus, extension field, variable
//! list), so `zero()`/`one()` are methods on an existing element rather than
//! associated constructors.

use std::fmt::{Debug, Display};

use crate::error::Result;

pub trait Ring: Clone + PartialEq + Debug + Display {
    /// Zero of the ring `self` lives in.
    fn zero(&self) -> Self;
    fn one(&self) -> Self;
    /// Image of an integer under the canonical map Z -> R.
    fn from_int(&self, n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn characteristic(&self) -> u64;

    fn is_one(&self) -> bool {
        *self == self.one()
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `self * n` for an integer scalar.
    fn scale_int(&self, n: i64) -> Self {
        self.mul(&self.from_int(n))
    }

    /// `1/2` in the ring; only meaningful in odd characteristic.
    fn half(&self) -> Self {
        let p = self.characteristic() as i64;
        self.from_int((p + 1) / 2)
    }
}

/// Finite fields of odd characteristic.
pub trait Field: Ring {
    fn inv(&self) -> Result<Self>;

    /// Degree of the field over its prime subfield.
    fn degree(&self) -> u32;

    /// `self^p`.
    fn frobenius(&self) -> Self {
        self.pow(self.characteristic())
    }

    /// The unique `p`-th root: `self^(p^(k-1))`.
    fn pth_root(&self) -> Self {
        let mut r = self.clone();
        for _ in 1..self.degree() {
            r = r.frobenius();
        }
        r
    }

    /// A uniformly random element of the field `self` lives in.
    fn random<G: rand::Rng + ?Sized>(&self, rng: &mut G) -> Self;

    fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.inv()?))
    }
}
