//! Sign-change bracketing and bisection for scalar functions.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::powi;

/// Sign of a float with exact zero kept.
pub fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

/// `(x, f(x))` pairs in evaluation order.
pub type Samples = Vec<(f64, f64)>;

/// Evaluates `f` on the decades `start·10^k`, `k = 0..decades`, and returns
/// the first adjacent pair whose values change sign, together with every
/// sampled point. Scanning stops early at the first non-finite value.
pub fn decade_scan<F>(mut f: F, start: f64, decades: usize) -> Result<(Option<Bracket>, Samples)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut samples = Vec::with_capacity(decades + 1);
    let mut prev: Option<(f64, f64)> = None;
    for k in 0..=decades {
        let x = start * powi(10.0, k as i32);
        if !x.is_finite() {
            break;
        }
        let fx = f(x)?;
        if !fx.is_finite() {
            break;
        }
        samples.push((x, fx));
        if let Some((px, pf)) = prev {
            if sign(pf) * sign(fx) <= 0 {
                return Ok((
                    Some(Bracket {
                        lo: px,
                        hi: x,
                        f_lo: pf,
                        f_hi: fx,
                    }),
                    samples,
                ));
            }
        }
        prev = Some((x, fx));
    }
    Ok((None, samples))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub f: f64,
    pub bracket: Bracket,
    pub iterations: usize,
}

/// Bisection until `hi − lo ≤ rel_width·|hi|` or an exact zero is hit.
pub fn bisect<F>(mut f: F, bracket: Bracket, rel_width: f64, max_iter: usize) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
{
    let Bracket {
        mut lo,
        mut hi,
        mut f_lo,
        mut f_hi,
    } = bracket;
    let s_lo = sign(f_lo);
    if s_lo == 0 {
        return Ok(Root {
            x: lo,
            f: f_lo,
            bracket,
            iterations: 0,
        });
    }
    if sign(f_hi) == 0 {
        return Ok(Root {
            x: hi,
            f: f_hi,
            bracket,
            iterations: 0,
        });
    }
    if s_lo == sign(f_hi) {
        return Err(Error::NoSignChange {
            lo,
            hi,
            sign_lo: s_lo,
            sign_hi: sign(f_hi),
        });
    }
    let mut iterations = 0;
    while iterations < max_iter && (hi - lo) > rel_width * hi.abs().max(lo.abs()) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid)?;
        iterations += 1;
        match sign(fm) {
            0 => {
                return Ok(Root {
                    x: mid,
                    f: fm,
                    bracket: Bracket { lo, hi, f_lo, f_hi },
                    iterations,
                });
            }
            s if s == s_lo => {
                lo = mid;
                f_lo = fm;
            }
            _ => {
                hi = mid;
                f_hi = fm;
            }
        }
    }
    let (x, fx) = if f_lo.abs() <= f_hi.abs() {
        (lo, f_lo)
    } else {
        (hi, f_hi)
    };
    Ok(Root {
        x,
        f: fx,
        bracket: Bracket { lo, hi, f_lo, f_hi },
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt2() {
        let b = Bracket {
            lo: 1.0,
            hi: 2.0,
            f_lo: -1.0,
            f_hi: 2.0,
        };
        let r = bisect(|x| Ok(x * x - 2.0), b, 1e-15, 200).unwrap();
        assert!((r.x - core::f64::consts::SQRT_2).abs() < 4e-15);
    }

    #[test]
    fn scan_finds_first_decade() {
        let (b, samples) = decade_scan(|x| Ok(x - 350.0), 1e-3, 20).unwrap();
        let b = b.unwrap();
        assert!((b.lo - 100.0).abs() < 1e-12 && (b.hi - 1000.0).abs() < 1e-11);
        assert_eq!(samples.len(), 7);
        let (none, _) = decade_scan(|_| Ok(1.0), 1.0, 5).unwrap();
        assert!(none.is_none());
    }

    #[test]
    fn rejects_same_sign() {
        let b = Bracket {
            lo: 1.0,
            hi: 2.0,
            f_lo: 1.0,
            f_hi: 2.0,
        };
        assert!(matches!(
            bisect(Ok, b, 1e-12, 10),
            Err(Error::NoSignChange { .. })
        ));
    }
}
