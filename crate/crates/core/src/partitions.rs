//! Partition numbers, counts of tuples of partitions, and analytic bounds on `p(n)`.

use std::sync::{OnceLock, RwLock};

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Memoized `p(0), p(1), …` grown by Euler's pentagonal recurrence.
///
/// Extension takes the write lock; lookups below the high-water mark only
/// take the read lock.
pub struct PartitionTable {
    values: RwLock<Vec<BigUint>>,
}

impl Default for PartitionTable {
    fn default() -> Self {
        Self::new()
    }
}

impl PartitionTable {
    pub fn new() -> Self {
        Self {
            values: RwLock::new(vec![BigUint::one()]),
        }
    }

    /// The process-wide shared table.
    pub fn global() -> &'static PartitionTable {
        static TABLE: OnceLock<PartitionTable> = OnceLock::new();
        TABLE.get_or_init(PartitionTable::new)
    }

    pub fn len(&self) -> usize {
        self.values.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, n: usize) -> BigUint {
        {
            let values = self.values.read().unwrap();
            if let Some(v) = values.get(n) {
                return v.clone();
            }
        }
        self.extend_to(n);
        self.values.read().unwrap()[n].clone()
    }

    /// `p(0..=n)`.
    pub fn prefix(&self, n: usize) -> Vec<BigUint> {
        self.get(n);
        self.values.read().unwrap()[..=n].to_vec()
    }

    fn extend_to(&self, n: usize) {
        let mut values = self.values.write().unwrap();
        let target = n.max(values.len() * 2);
        while values.len() <= target {
            let m = values.len();
            let next = pentagonal_step(&values, m);
            values.push(next);
        }
    }
}

/// `p(m) = Σ_{k≥1} (−1)^{k+1} [p(m − k(3k−1)/2) + p(m − k(3k+1)/2)]`.
fn pentagonal_step(values: &[BigUint], m: usize) -> BigUint {
    let mut sum = BigInt::zero();
    for k in 1.. {
        let g1 = k * (3 * k - 1) / 2;
        if g1 > m {
            break;
        }
        let mut term = BigInt::from(values[m - g1].clone());
        let g2 = k * (3 * k + 1) / 2;
        if g2 <= m {
            term += BigInt::from(values[m - g2].clone());
        }
        if k % 2 == 1 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum.to_biguint().expect("partition numbers are positive")
}

/// Exact `p(n)`.
pub fn partition_number(n: usize) -> BigUint {
    PartitionTable::global().get(n)
}

/// Truncated power-series product, coefficients `0..=n`.
fn series_mul(a: &[BigUint], b: &[BigUint], n: usize) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); n + 1];
    for (i, x) in a.iter().enumerate().take(n + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Number of `k`-tuples of partitions with total size `n`: the coefficient
/// of `q^n` in `(Σ p(m) q^m)^k`, by repeated squaring over the bits of `k`.
pub fn tuple_partition_count(k: impl Into<BigUint>, n: usize) -> BigUint {
    let k: BigUint = k.into();
    let base = PartitionTable::global().prefix(n);
    let mut acc: Vec<BigUint> = {
        let mut one = vec![BigUint::zero(); n + 1];
        one[0] = BigUint::one();
        one
    };
    let bits = k.bits();
    for bit in (0..bits).rev() {
        acc = series_mul(&acc, &acc, n);
        if k.bit(bit) {
            acc = series_mul(&acc, &base, n);
        }
    }
    acc.swap_remove(n)
}

/// Outcome of comparing `ln p(n)` with both sides of
/// `2.5√n − ln(13n) < ln p(n) < π√(2n/3)`.
#[derive(Clone, Debug, Serialize)]
pub struct BoundSandwichReport {
    pub n: usize,
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub p_n: BigUint,
    pub lower_ok: bool,
    pub upper_ok: bool,
    /// `ln p(n) − (2.5√n − ln 13n)`, decimal.
    pub lower_margin: String,
    /// `π√(2n/3) − ln p(n)`, decimal.
    pub upper_margin: String,
    /// Working precision the verdict was reached at.
    pub precision_bits: usize,
}

impl BoundSandwichReport {
    pub fn holds(&self) -> bool {
        self.lower_ok && self.upper_ok
    }

    pub fn lower_margin_f64(&self) -> f64 {
        self.lower_margin.parse().unwrap_or(f64::NAN)
    }

    pub fn upper_margin_f64(&self) -> f64 {
        self.upper_margin.parse().unwrap_or(f64::NAN)
    }
}

const RM: RoundingMode = RoundingMode::ToEven;
const MIN_MARGIN: f64 = 1e-9;
const START_PRECISION: usize = 128;
const MAX_PRECISION: usize = 4096;

fn consts() -> Consts {
    Consts::new().expect("astro-float constants cache")
}

fn big_to_float(x: &BigUint, p: usize, cc: &mut Consts) -> BigFloat {
    BigFloat::parse(&x.to_str_radix(10), Radix::Dec, p, RM, cc)
}

fn float_to_f64(x: &BigFloat, cc: &mut Consts) -> f64 {
    x.format(Radix::Dec, RM, cc)
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(f64::NAN)
}

fn float_to_decimal(x: &BigFloat, cc: &mut Consts) -> String {
    // shortest round-trip f64 text: enough digits to re-check by hand
    format!("{:e}", float_to_f64(x, cc))
}

/// Checks both analytic bounds on `p(n)` for `n ≥ 1`.
///
/// Each verdict is only emitted once the margin exceeds `1e-9` plus a
/// generous bound on accumulated rounding error; otherwise the working
/// precision doubles, up to 4096 bits.
pub fn bound_sandwich(n: usize) -> Result<BoundSandwichReport> {
    if n == 0 {
        return Err(Error::ParamOutOfRange("bound_sandwich needs n ≥ 1".into()));
    }
    let p_n = partition_number(n);
    let mut cc = consts();
    let mut p = START_PRECISION;
    loop {
        let ln_p = big_to_float(&p_n, p, &mut cc).ln(p, RM, &mut cc);
        let nf = BigFloat::from_u64(n as u64, p);
        let sqrt_n = nf.sqrt(p, RM);
        let lower = BigFloat::from_f64(2.5, p).mul(&sqrt_n, p, RM).sub(
            &BigFloat::from_u64(13 * n as u64, p).ln(p, RM, &mut cc),
            p,
            RM,
        );
        let upper = cc.pi(p, RM).mul(
            &BigFloat::from_u64(2 * n as u64, p)
                .div(&BigFloat::from_u64(3, p), p, RM)
                .sqrt(p, RM),
            p,
            RM,
        );
        let lower_margin = ln_p.sub(&lower, p, RM);
        let upper_margin = upper.sub(&ln_p, p, RM);
        let lo = float_to_f64(&lower_margin, &mut cc);
        let hi = float_to_f64(&upper_margin, &mut cc);
        let scale = 1.0
            + float_to_f64(&ln_p, &mut cc).abs()
            + float_to_f64(&lower, &mut cc).abs()
            + float_to_f64(&upper, &mut cc).abs();
        let rounding = scale * 2f64.powi(-(p as i32 - 16));
        let decided = |m: f64| m.is_finite() && m.abs() > MIN_MARGIN + rounding;
        if decided(lo) && decided(hi) {
            return Ok(BoundSandwichReport {
                n,
                p_n,
                lower_ok: lo > 0.0,
                upper_ok: hi > 0.0,
                lower_margin: float_to_decimal(&lower_margin, &mut cc),
                upper_margin: float_to_decimal(&upper_margin, &mut cc),
                precision_bits: p,
            });
        }
        if p >= MAX_PRECISION {
            return Err(Error::Precision(format!(
                "n={n}: margins {lo:e} / {hi:e} undecided at {p} bits"
            )));
        }
        p *= 2;
    }
}

/// Main term `e^{π√(2n/3)} / (4n√3)` of the partition asymptotic, at 128 bits.
pub fn hr_asymptotic(n: usize) -> BigFloat {
    let p = START_PRECISION;
    let mut cc = consts();
    let exponent = cc.pi(p, RM).mul(
        &BigFloat::from_u64(2 * n as u64, p)
            .div(&BigFloat::from_u64(3, p), p, RM)
            .sqrt(p, RM),
        p,
        RM,
    );
    let denominator =
        BigFloat::from_u64(4 * n as u64, p).mul(&BigFloat::from_u64(3, p).sqrt(p, RM), p, RM);
    exponent.exp(p, RM, &mut cc).div(&denominator, p, RM)
}

/// `p(n) / HR(n)` as a float, for reporting only.
pub fn hr_ratio(n: usize) -> f64 {
    let p = START_PRECISION;
    let mut cc = consts();
    let exact = big_to_float(&partition_number(n), p, &mut cc);
    float_to_f64(&exact.div(&hr_asymptotic(n), p, RM), &mut cc)
}
