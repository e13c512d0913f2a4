//! Truncated Taylor series `Σ a_j t^j`, used to evaluate α next to the
//! blow-down endpoints where the closed form degenerates to 0/0.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::powf;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Series {
    pub(crate) c: Vec<f64>,
}

impl Series {
    pub(crate) fn zeros(order: usize) -> Self {
        Series {
            c: vec![0.0; order],
        }
    }

    pub(crate) fn from_coeffs(mut c: Vec<f64>, order: usize) -> Self {
        c.resize(order, 0.0);
        Series { c }
    }

    pub(crate) fn order(&self) -> usize {
        self.c.len()
    }

    /// `(base + t)^exponent`, `base > 0`.
    pub(crate) fn binomial(base: f64, exponent: f64, order: usize) -> Self {
        let mut c = vec![0.0; order];
        if order == 0 {
            return Series { c };
        }
        c[0] = powf(base, exponent);
        for j in 1..order {
            c[j] = c[j - 1] * (exponent - (j - 1) as f64) / (j as f64 * base);
        }
        Series { c }
    }

    pub(crate) fn mul(&self, other: &Series) -> Series {
        let n = self.order().min(other.order());
        let mut c = vec![0.0; n];
        for (i, &a) in self.c.iter().enumerate().take(n) {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate().take(n - i) {
                c[i + j] += a * b;
            }
        }
        Series { c }
    }

    pub(crate) fn pow(&self, n: u32) -> Series {
        let mut acc = Series::zeros(self.order());
        acc.c[0] = 1.0;
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// `∫_0^t`.
    pub(crate) fn integrate(&self) -> Series {
        let n = self.order();
        let mut c = vec![0.0; n];
        for (j, dst) in c.iter_mut().enumerate().skip(1) {
            *dst = self.c[j - 1] / j as f64;
        }
        Series { c }
    }

    /// Index of the first coefficient that is not exactly zero.
    pub(crate) fn valuation(&self) -> Option<usize> {
        self.c.iter().position(|&a| a != 0.0)
    }

    /// Drops the first `k` coefficients (division by `t^k`), shrinking the
    /// order accordingly.
    pub(crate) fn shift_down(&self, k: usize) -> Series {
        Series {
            c: self.c[k.min(self.order())..].to_vec(),
        }
    }

    /// `self / other` where `other(0) ≠ 0`.
    pub(crate) fn div(&self, other: &Series) -> Series {
        let n = self.order().min(other.order());
        let b0 = other.c[0];
        let mut c = vec![0.0; n];
        for j in 0..n {
            let mut acc = self.c[j];
            for k in 1..=j {
                acc -= other.c[k] * c[j - k];
            }
            c[j] = acc / b0;
        }
        Series { c }
    }

    /// Value and first two derivatives at `t`.
    pub(crate) fn jet(&self, t: f64) -> [f64; 3] {
        let mut v = 0.0;
        let mut d1 = 0.0;
        let mut d2 = 0.0;
        for &a in self.c.iter().rev() {
            d2 = d2 * t + 2.0 * d1;
            d1 = d1 * t + v;
            v = v * t + a;
        }
        [v, d1, d2]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_matches_power() {
        let s = Series::binomial(2.0, 0.5, 40);
        for t in [0.0, 0.1, -0.3, 0.5] {
            let [v, d1, d2] = s.jet(t);
            let b: f64 = 2.0 + t;
            assert!((v - b.sqrt()).abs() < 1e-14);
            assert!((d1 - 0.5 / b.sqrt()).abs() < 1e-13);
            assert!((d2 + 0.25 * b.powf(-1.5)).abs() < 1e-12);
        }
    }

    #[test]
    fn division_inverts_product() {
        let a = Series::from_coeffs(vec![1.0, 2.0, -1.0], 12);
        let b = Series::binomial(3.0, -1.3, 12);
        let q = a.mul(&b).div(&b);
        for (x, y) in q.c.iter().zip(&a.c) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn valuation_and_shift() {
        let a = Series::from_coeffs(vec![0.0, 0.0, 3.0, 1.0], 6);
        assert_eq!(a.valuation(), Some(2));
        assert_eq!(a.shift_down(2).c, vec![3.0, 1.0, 0.0, 0.0]);
        let i = a.integrate();
        assert_eq!(i.valuation(), Some(3));
        assert_eq!(i.c[3], 1.0);
    }
}
