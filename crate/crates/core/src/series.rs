//! Truncated power series in one variable, used for Chern-class arithmetic.

use crate::error::{Error, Result};
use crate::scalar::{FieldTag, Scalar};

/// A power series truncated after `order` coefficients (c0 .. c_{order-1}).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    order: usize,
    coeffs: Vec<Scalar>,
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<Scalar>, order: usize) -> TruncatedSeries {
        let field = coeffs.first().map_or(FieldTag::Rational, |c| c.field());
        let mut c = coeffs;
        c.resize(order, Scalar::zero(field));
        c.truncate(order);
        TruncatedSeries { order, coeffs: c }
    }

    pub fn one(order: usize, field: FieldTag) -> TruncatedSeries {
        let mut c = vec![Scalar::zero(field); order];
        c[0] = Scalar::one(field);
        TruncatedSeries { order, coeffs: c }
    }

    pub fn from_ints(coeffs: &[i64], order: usize) -> TruncatedSeries {
        TruncatedSeries::new(
            coeffs
                .iter()
                .map(|&n| Scalar::from_int(n, FieldTag::Rational))
                .collect(),
            order,
        )
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    fn field(&self) -> FieldTag {
        self.coeffs[0].field()
    }

    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!(self.order, other.order, "order mismatch");
        let field = self.field();
        let mut c = vec![Scalar::zero(field); self.order];
        for i in 0..self.order {
            for j in 0..self.order - i {
                c[i + j] = c[i + j].add(&self.coeffs[i].mul(&other.coeffs[j]));
            }
        }
        TruncatedSeries {
            order: self.order,
            coeffs: c,
        }
    }

    pub fn pow(&self, e: u32) -> TruncatedSeries {
        let mut acc = TruncatedSeries::one(self.order, self.field());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse modulo t^order; requires c0 != 0.
    pub fn invert(&self) -> Result<TruncatedSeries> {
        if self.coeffs[0].is_zero() {
            return Err(Error::NonInvertibleSeries);
        }
        let field = self.field();
        let c0_inv = self.coeffs[0].inv();
        let mut b = vec![Scalar::zero(field); self.order];
        b[0] = c0_inv.clone();
        for n in 1..self.order {
            let mut acc = Scalar::zero(field);
            for k in 1..=n {
                acc = acc.add(&self.coeffs[k].mul(&b[n - k]));
            }
            b[n] = acc.neg().mul(&c0_inv);
        }
        Ok(TruncatedSeries {
            order: self.order,
            coeffs: b,
        })
    }
}
