//! Closed-form price-of-anarchy bounds.
//!
//! The Nash and collusion bounds are rational. The sequential bound for
//! symmetric games, `e^{1/α} / (e^{1/α} - 1)`, is irrational and is handled
//! as a certified enclosure: the exponential is evaluated from its Taylor
//! series in exact rationals with an explicit remainder bound, and the
//! endpoints are rounded outward to a dyadic grid.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Width the sequential-bound enclosure must reach: `1e-12`.
pub fn enclosure_width_target() -> Rational {
    Rational::new(1, 1_000_000_000_000).expect("nonzero denominator")
}

const START_BITS: u32 = 48;
const MAX_BITS: u32 = 8192;

/// A closed interval `[lo, hi]` known to contain a real number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: Rational,
    pub hi: Rational,
}

impl Enclosure {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// Where `x` sits relative to the enclosed number, if the interval
    /// decides it.
    fn locate(&self, x: &Rational) -> Option<Ordering> {
        if x < &self.lo {
            Some(Ordering::Less)
        } else if x > &self.hi {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    pub fn midpoint_f64(&self) -> f64 {
        (self.lo.to_f64() + self.hi.to_f64()) / 2.0
    }
}

/// Encloses `e^x` for rational `0 <= x <= 1` within about `2^-bits`.
fn exp_enclosure(x: &Rational, bits: u32) -> Enclosure {
    let tolerance = Rational::one() / Rational::from_integer(2).pow(bits as i32 + 8);
    let mut sum = Rational::one();
    let mut term = Rational::one();
    let mut k: i64 = 0;
    loop {
        k += 1;
        term = &term * x / Rational::from_integer(k);
        sum += &term;
        // The tail after term k is at most twice term k+1 when x <= 1.
        let next = &term * x / Rational::from_integer(k + 1);
        let tail = &next + &next;
        if tail <= tolerance {
            return Enclosure {
                lo: sum.round_down(bits + 8),
                hi: (sum + tail).round_up(bits + 8),
            };
        }
    }
}

pub(crate) fn check_alpha(alpha: &Rational) -> Result<()> {
    if *alpha < Rational::one() {
        return Err(Error::Input(format!("alpha must be at least 1, got {alpha}")));
    }
    Ok(())
}

/// `α + 1`.
pub fn bound_nash(alpha: &Rational) -> Result<Rational> {
    check_alpha(alpha)?;
    Ok(alpha + &Rational::one())
}

/// `α + (n-k)/(n-1)`, defined for `n >= 2` and `1 <= k <= n`.
pub fn bound_collusion(alpha: &Rational, n: usize, k: usize) -> Result<Rational> {
    check_alpha(alpha)?;
    if n < 2 {
        return Err(Error::Input(format!("collusion bound needs n >= 2, got n = {n}")));
    }
    if k == 0 || k > n {
        return Err(Error::Input(format!("k must be in 1..={n}, got {k}")));
    }
    Ok(alpha + &(Rational::from(n - k) / Rational::from(n - 1)))
}

/// Certified enclosure of `e^{1/α} / (e^{1/α} - 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequentialBound {
    alpha: Rational,
    pub enclosure: Enclosure,
}

impl SequentialBound {
    fn at(alpha: &Rational, bits: u32) -> Enclosure {
        let y = exp_enclosure(&alpha.recip().expect("alpha >= 1"), bits);
        // y / (y - 1) decreases in y.
        let f = |y: &Rational| y / &(y - &Rational::one());
        Enclosure {
            lo: f(&y.hi).round_down(bits),
            hi: f(&y.lo).round_up(bits),
        }
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    /// Orders `x` against the exact bound, refining the enclosure as needed.
    pub fn compare(&self, x: &Rational) -> Result<Ordering> {
        if let Some(o) = self.enclosure.locate(x) {
            return Ok(o);
        }
        let mut bits = START_BITS * 2;
        while bits <= MAX_BITS {
            if let Some(o) = SequentialBound::at(&self.alpha, bits).locate(x) {
                return Ok(o);
            }
            bits *= 2;
        }
        Err(Error::Unsupported(format!(
            "{x} cannot be separated from the sequential bound at alpha = {}",
            self.alpha
        )))
    }

    /// `x <= bound`, decided with certified arithmetic.
    pub fn admits(&self, x: &Rational) -> Result<bool> {
        Ok(self.compare(x)? != Ordering::Greater)
    }
}

pub fn bound_sequential_symmetric(alpha: &Rational) -> Result<SequentialBound> {
    check_alpha(alpha)?;
    let target = enclosure_width_target();
    let mut bits = START_BITS;
    loop {
        let enclosure = SequentialBound::at(alpha, bits);
        if enclosure.width() <= target {
            return Ok(SequentialBound {
                alpha: alpha.clone(),
                enclosure,
            });
        }
        if bits >= MAX_BITS {
            return Err(Error::Unsupported(format!(
                "sequential bound at alpha = {alpha} did not reach the target width"
            )));
        }
        bits *= 2;
    }
}

/// `(γ^m - (γ-1)^m) / γ^m`, the guaranteed welfare share after `m` copies.
fn share(gamma: &Rational, m: u32) -> Rational {
    let g = gamma.pow(m as i32);
    (&g - &(gamma - &Rational::one()).pow(m as i32)) / g
}

fn gamma(alpha: &Rational, x: u32) -> Result<Rational> {
    check_alpha(alpha)?;
    if x == 0 {
        return Err(Error::Input("x must be at least 1".into()));
    }
    Ok(alpha * &Rational::from(x as usize))
}

/// `b_x = (xα)^x / ((xα)^x - (xα-1)^x)`.
pub fn bound_series_b(alpha: &Rational, x: u32) -> Result<Rational> {
    let g = gamma(alpha, x)?;
    share(&g, x).recip()
}

/// Both sides of `x1/γ >= (γ^{x1} - (γ-1)^{x1}) / γ^{x1}` with `γ = xα`.
pub fn app1_sides(alpha: &Rational, x: u32, x1: u32) -> Result<(Rational, Rational)> {
    let g = gamma(alpha, x)?;
    if x1 == 0 || x1 > x {
        return Err(Error::Input(format!("x1 must be in 1..={x}")));
    }
    Ok((Rational::from(x1 as usize) / g.clone(), share(&g, x1)))
}

/// Both sides of the step inequality
/// `xk/γ + (γ-xk)/γ · share(prev) >= share(prev + xk)` with `γ = xα`.
pub fn app2_sides(alpha: &Rational, x: u32, xk: u32, prev: u32) -> Result<(Rational, Rational)> {
    let g = gamma(alpha, x)?;
    if xk == 0 || prev + xk > x {
        return Err(Error::Input(format!("need xk >= 1 and prev + xk <= {x}")));
    }
    let xk_r = Rational::from(xk as usize);
    let lhs = &xk_r / &g + (&g - &xk_r) / g.clone() * share(&g, prev);
    Ok((lhs, share(&g, prev + xk)))
}

/// `(α + 1/2 <= bound, bound <= α + 1/(e-1))`, both certified. At `α = 1`
/// the upper side is the identity `e/(e-1) = 1 + 1/(e-1)`.
pub fn sandwich(alpha: &Rational) -> Result<(bool, bool)> {
    let bound = bound_sequential_symmetric(alpha)?;
    let half = Rational::new(1, 2)?;
    let lower = bound.compare(&(alpha + &half))? != Ordering::Greater;
    if *alpha == Rational::one() {
        return Ok((lower, true));
    }
    let mut bits = START_BITS;
    while bits <= MAX_BITS {
        let b = SequentialBound::at(alpha, bits);
        let e = exp_enclosure(&Rational::one(), bits);
        let one = Rational::one();
        let rhs = Enclosure {
            lo: alpha + &(&e.hi - &one).recip()?,
            hi: alpha + &(&e.lo - &one).recip()?,
        };
        if b.hi <= rhs.lo {
            return Ok((lower, true));
        }
        if b.lo > rhs.hi {
            return Ok((lower, false));
        }
        bits *= 2;
    }
    Err(Error::Unsupported(format!("sandwich at alpha = {alpha} undecided")))
}
