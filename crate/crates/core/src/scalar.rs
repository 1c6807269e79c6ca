//! Field abstraction shared by the exact (rational) and floating evaluators.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::{One, Zero};

use crate::rational::{to_f64, Rational};

pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn from_rational(r: &Rational) -> Self;
    fn to_float(&self) -> f64;

    fn from_usize(n: usize) -> Self {
        Self::from_rational(&Rational::from_integer(n.into()))
    }

    fn powi(&self, exp: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_float(&self) -> f64 {
        to_f64(self)
    }

    fn powi(&self, exp: usize) -> Self {
        num::pow(self.clone(), exp)
    }
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        to_f64(r)
    }

    fn to_float(&self) -> f64 {
        *self
    }

    fn powi(&self, exp: usize) -> Self {
        f64::powi(*self, exp as i32)
    }
}
