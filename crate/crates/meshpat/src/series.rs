//! Truncated power series with exact integer coefficients, the counting
//! sequences they define, and verification of engine counts against them.
//!
//! Every generating function here is pinned down by a functional equation in
//! which each unknown occurrence carries a factor of x, so coefficient-wise
//! fixed-point iteration converges in at most one round per coefficient.

use crate::avoidance::{signature, AvoidanceError, AvoidanceTask};
use crate::BoundError;
use std::fmt;

/// A power series truncated after a fixed number of coefficients; index `n`
/// counts objects of size `n`. All arithmetic is exact in `i64`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<i64>,
}

impl Series {
    fn constant(terms: usize, c: i64) -> Self {
        let mut coeffs = vec![0; terms];
        if terms > 0 {
            coeffs[0] = c;
        }
        Series { coeffs }
    }

    fn from_coeffs(coeffs: Vec<i64>) -> Self {
        Series { coeffs }
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn terms(&self) -> usize {
        self.coeffs.len()
    }

    fn add(&self, other: &Series) -> Series {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.checked_add(*b).expect("coefficient overflow"))
            .collect();
        Series { coeffs }
    }

    fn sub(&self, other: &Series) -> Series {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.checked_sub(*b).expect("coefficient overflow"))
            .collect();
        Series { coeffs }
    }

    /// Truncated Cauchy product.
    fn mul(&self, other: &Series) -> Series {
        let terms = self.coeffs.len().min(other.coeffs.len());
        let mut coeffs = vec![0i64; terms];
        for (i, &a) in self.coeffs.iter().enumerate().take(terms) {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(terms - i) {
                coeffs[i + j] = coeffs[i + j]
                    .checked_add(a.checked_mul(b).expect("coefficient overflow"))
                    .expect("coefficient overflow");
            }
        }
        Series { coeffs }
    }

    /// Multiplication by x: shift coefficients up one degree.
    fn shift(&self) -> Series {
        let mut coeffs = self.coeffs.clone();
        coeffs.rotate_right(1);
        if let Some(c) = coeffs.first_mut() {
            *c = 0;
        }
        Series { coeffs }
    }
}

/// Iterate `step` from the constant series 1 until it stabilizes. Panics if
/// `terms + 1` rounds do not reach a fixed point, which cannot happen for
/// equations whose right side multiplies every unknown by x.
fn fixed_point(terms: usize, step: impl Fn(&Series) -> Series) -> Series {
    let mut cur = Series::constant(terms, 1);
    for _ in 0..=terms {
        let next = step(&cur);
        if next == cur {
            return cur;
        }
        cur = next;
    }
    panic!("fixed-point iteration failed to stabilize in {terms} rounds");
}

/// Catalan numbers, from C = 1 + xC².
pub fn catalan_series(n_max: usize) -> Series {
    let terms = n_max + 1;
    fixed_point(terms, |c| Series::constant(terms, 1).add(&c.mul(c).shift()))
}

/// Fine numbers (A000957 with a leading 1), from V = 1 + xV(C − 1).
pub fn fine_series(n_max: usize) -> Series {
    let terms = n_max + 1;
    let one = Series::constant(terms, 1);
    let c1 = catalan_series(n_max).sub(&one);
    fixed_point(terms, |v| one.add(&v.mul(&c1).shift()))
}

/// A000245 with a leading 1 (Catalan first differences), from
/// V = 1 + xC(C − 1).
pub fn maxl_series(n_max: usize) -> Series {
    let terms = n_max + 1;
    let one = Series::constant(terms, 1);
    let c = catalan_series(n_max);
    one.add(&c.mul(&c.sub(&one)).shift())
}

/// A141364: constant term 1, then Catalan(n) − 1.
pub fn minend_series(n_max: usize) -> Series {
    let mut coeffs = catalan_series(n_max).coeffs;
    for c in coeffs.iter_mut().skip(1) {
        *c -= 1;
    }
    Series::from_coeffs(coeffs)
}

/// A035929 with a leading 1, from V = 1 + xV·Vm with Vm = [`maxl_series`].
pub fn a035929_series(n_max: usize) -> Series {
    let terms = n_max + 1;
    let one = Series::constant(terms, 1);
    let vm = maxl_series(n_max);
    fixed_point(terms, |v| one.add(&v.mul(&vm).shift()))
}

/// Motzkin numbers with a leading 1, from the coupled system
/// V = 1 + xVW, W = 1 + x(V − 1)W solved by joint iteration.
pub fn motzkin_system_series(n_max: usize) -> Series {
    let terms = n_max + 1;
    let one = Series::constant(terms, 1);
    let mut v = one.clone();
    let mut w = one.clone();
    for _ in 0..=terms {
        let nv = one.add(&v.mul(&w).shift());
        let nw = one.add(&v.sub(&one).mul(&w).shift());
        if nv == v && nw == w {
            return v;
        }
        (v, w) = (nv, nw);
    }
    panic!("fixed-point iteration failed to stabilize in {terms} rounds");
}

/// Eliminating W from the system leaves V = xV² − x(V − 1) + 1; used to
/// cross-check [`motzkin_system_series`].
#[cfg(test)]
fn motzkin_quadratic_series(n_max: usize) -> Series {
    let terms = n_max + 1;
    let one = Series::constant(terms, 1);
    fixed_point(terms, |v| v.mul(v).shift().sub(&v.sub(&one).shift()).add(&one))
}

/// Outcome of checking engine counts against a series, coefficient by
/// coefficient up to the bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesCheck {
    pub task: String,
    pub max_len: usize,
    pub expected: Vec<i64>,
    pub observed: Vec<i64>,
    pub first_mismatch: Option<usize>,
}

impl SeriesCheck {
    pub fn passed(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

impl fmt::Display for SeriesCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.first_mismatch {
            None => write!(f, "ok   {} n<={}", self.task, self.max_len),
            Some(n) => write!(
                f,
                "FAIL {} n<={}: first mismatch at n={} (expected {}, observed {})",
                self.task, self.max_len, n, self.expected[n], self.observed[n]
            ),
        }
    }
}

/// Count avoiders of `t` up to length `n_max` and compare them with the
/// series coefficients. The series must carry at least `n_max + 1` terms.
pub fn verify_counts(
    t: &AvoidanceTask,
    s: &Series,
    n_max: usize,
) -> Result<SeriesCheck, AvoidanceError> {
    if s.terms() <= n_max {
        return Err(BoundError { requested: n_max, bound: s.terms().saturating_sub(1) }.into());
    }
    let sig = signature(t, n_max)?;
    let observed: Vec<i64> = sig.counts.iter().map(|&c| c as i64).collect();
    let expected = s.coefficients()[..=n_max].to_vec();
    let first_mismatch = (0..=n_max).find(|&n| expected[n] != observed[n]);
    Ok(SeriesCheck { task: t.to_string(), max_len: n_max, expected, observed, first_mismatch })
}
