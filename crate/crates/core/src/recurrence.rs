//! The three-term recurrence lower-bounding the tree algorithm's expected
//! approximation ratio.
//!
//! ```text
//! R(k, 0) = 0
//! R(k, h) = min( t/k + (1 - t/k)·R(k, h-1),
//!                1/k + (1 - (1+t)/k)·R(k-1, h-1),
//!                1/(1+t) )                          for 1 ≤ h ≤ k
//! ```
//!
//! Rows depend only on the previous row, so large ranges are processed as a
//! row sweep that keeps two rows in memory. Two arithmetic modes exist:
//! `f64` for exploration up to `k ≈ 10^5`, and exact rationals (unreduced
//! big-integer fractions) for certifying `min_k R(k,k)` against a bound.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_traits::ToPrimitive;

use crate::{Error, Result};

/// Default threshold parameter.
pub const DEFAULT_T: f64 = 0.8;

/// Which term of the minimum attains a cell. Ties go to the lowest term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Term {
    First,
    Second,
    Third,
}

impl Term {
    pub fn as_str(self) -> &'static str {
        match self {
            Term::First => "first",
            Term::Second => "second",
            Term::Third => "third",
        }
    }
}

impl std::fmt::Display for Term {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t <= 1.0 {
        Ok(())
    } else {
        Err(Error::Precondition(format!("t must lie in (0,1], got {t}")))
    }
}

/// Returns the min and its tag; ties go to the lowest-numbered term.
fn min3(a: f64, b: f64, c: f64) -> (f64, Term) {
    if a <= b && a <= c {
        (a, Term::First)
    } else if b <= c {
        (b, Term::Second)
    } else {
        (c, Term::Third)
    }
}

/// The three candidate values of cell `(k, h)`, given `R(k, h-1)` and
/// `R(k-1, h-1)`.
pub fn terms(t: f64, k: usize, same_row_prev: f64, prev_row_prev: f64) -> [f64; 3] {
    let kf = k as f64;
    [
        t / kf + (1.0 - t / kf) * same_row_prev,
        1.0 / kf + (1.0 - (1.0 + t) / kf) * prev_row_prev,
        1.0 / (1.0 + t),
    ]
}

/// Row-by-row `f64` evaluation. `visit(k, row, tags)` sees row `k` with
/// `row[h] = R(k, h)` for `0 ≤ h ≤ k` and `tags[h-1]` the tag of `(k, h)`.
pub fn sweep_f64(t: f64, k_max: usize, mut visit: impl FnMut(usize, &[f64], &[Term])) -> Result<()> {
    check_t(t)?;
    let mut prev: Vec<f64> = vec![0.0];
    let mut row: Vec<f64> = Vec::with_capacity(k_max + 1);
    let mut tags: Vec<Term> = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        row.clear();
        tags.clear();
        row.push(0.0);
        for h in 1..=k {
            let [a, b, c] = terms(t, k, row[h - 1], prev[h - 1]);
            let (v, tag) = min3(a, b, c);
            row.push(v);
            tags.push(tag);
        }
        visit(k, &row, &tags);
        std::mem::swap(&mut prev, &mut row);
    }
    Ok(())
}

/// Dense triangular table of `R(k, h)` for `0 ≤ h ≤ k ≤ k_max`.
#[derive(Debug, Clone)]
pub struct RecurrenceTable {
    t: f64,
    k_max: usize,
    values: Vec<f64>,
    tags: Vec<Option<Term>>,
}

fn offset(k: usize) -> usize {
    k * (k + 1) / 2
}

impl RecurrenceTable {
    pub fn compute(t: f64, k_max: usize) -> Result<Self> {
        if k_max == 0 {
            return Err(Error::Precondition("k_max must be at least 1".into()));
        }
        let cells = offset(k_max + 1);
        let mut values = Vec::with_capacity(cells);
        let mut tags = Vec::with_capacity(cells);
        values.push(0.0);
        tags.push(None);
        sweep_f64(t, k_max, |_, row, row_tags| {
            values.extend_from_slice(row);
            tags.push(None);
            tags.extend(row_tags.iter().map(|&g| Some(g)));
        })?;
        Ok(Self { t, k_max, values, tags })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn get(&self, k: usize, h: usize) -> Option<f64> {
        (h <= k && k <= self.k_max).then(|| self.values[offset(k) + h])
    }

    /// Tag of cell `(k, h)`; `None` for `h = 0` or out of range.
    pub fn tag(&self, k: usize, h: usize) -> Option<Term> {
        if h <= k && k <= self.k_max {
            self.tags[offset(k) + h]
        } else {
            None
        }
    }

    pub fn diagonal(&self, k: usize) -> Option<f64> {
        self.get(k, k)
    }
}

/// `min_{k ∈ [k_lo, k_hi]} R(k, k)` and the `k` attaining it.
pub fn min_diagonal(table: &RecurrenceTable, k_lo: usize, k_hi: usize) -> Result<(f64, usize)> {
    if k_lo == 0 || k_lo > k_hi || k_hi > table.k_max {
        return Err(Error::OutOfRange(format!(
            "diagonal range [{k_lo}, {k_hi}] outside [1, {}]",
            table.k_max
        )));
    }
    Ok((k_lo..=k_hi)
        .map(|k| (table.values[offset(k) + k], k))
        .fold((f64::INFINITY, 0), |acc, x| if x.0 < acc.0 { x } else { acc }))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagonalEntry {
    pub k: usize,
    pub value: f64,
    pub tag: Term,
}

/// `R(k, k)` for `k = 1..=k_max` without storing the table.
pub fn diagonal_f64(t: f64, k_max: usize) -> Result<Vec<DiagonalEntry>> {
    let mut out = Vec::with_capacity(k_max);
    sweep_f64(t, k_max, |k, row, tags| {
        out.push(DiagonalEntry {
            k,
            value: row[k],
            tag: tags[k - 1],
        })
    })?;
    Ok(out)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DominanceReport {
    /// Cells `(k, h)` with `k ≥ threshold`, `h ≥ 1` not attained by the
    /// first term.
    pub violations: Vec<(usize, usize, Term)>,
    pub cells_checked: u64,
    /// Cells compared against `1 - (1 - t/k)^h`: those whose row is
    /// first-term from `h' = 1` up to `h`.
    pub closed_form_cells: u64,
    pub closed_form_max_error: f64,
}

impl DominanceReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

fn record_dominance(report: &mut DominanceReport, t: f64, k: usize, row: &[f64], tags: &[Term]) {
    let mut prefix_first = true;
    for h in 1..=k {
        report.cells_checked += 1;
        let tag = tags[h - 1];
        if tag != Term::First {
            report.violations.push((k, h, tag));
            prefix_first = false;
        }
        if prefix_first {
            let closed = 1.0 - (1.0 - t / k as f64).powi(h as i32);
            report.closed_form_cells += 1;
            report.closed_form_max_error = report.closed_form_max_error.max((row[h] - closed).abs());
        }
    }
}

/// Checks the first-term dominance on every row `k ≥ k_threshold` of a
/// stored table.
pub fn first_term_dominance(table: &RecurrenceTable, k_threshold: usize) -> Result<DominanceReport> {
    if k_threshold > table.k_max {
        return Err(Error::OutOfRange(format!(
            "threshold {k_threshold} beyond table size {}",
            table.k_max
        )));
    }
    let mut report = DominanceReport::default();
    let mut tags = Vec::new();
    for k in k_threshold.max(1)..=table.k_max {
        let row = &table.values[offset(k)..offset(k) + k + 1];
        tags.clear();
        tags.extend((1..=k).map(|h| table.tags[offset(k) + h].expect("h >= 1 has a tag")));
        record_dominance(&mut report, table.t, k, row, &tags);
    }
    Ok(report)
}

/// [`first_term_dominance`] over rows `k_threshold..=k_max` computed on the
/// fly.
pub fn first_term_dominance_sweep(t: f64, k_threshold: usize, k_max: usize) -> Result<DominanceReport> {
    let mut report = DominanceReport::default();
    sweep_f64(t, k_max, |k, row, tags| {
        if k >= k_threshold {
            record_dominance(&mut report, t, k, row, tags);
        }
    })?;
    Ok(report)
}

/// `1 - e^{-t}`, the limit of `1 - (1 - t/k)^k`.
pub fn asymptote(t: f64) -> Result<f64> {
    check_t(t)?;
    Ok(-(-t).exp_m1())
}

/// Non-negative rational with small numerator and denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio64 {
    pub num: u64,
    pub den: u64,
}

impl Ratio64 {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        let g = gcd(num, den);
        Ok(Self {
            num: num / g,
            den: den / g,
        })
    }

    /// Exact value of a decimal literal such as `0.8` or `0.5506` (at most
    /// 9 fractional digits).
    pub fn from_decimal(x: f64) -> Result<Self> {
        if !(x >= 0.0 && x.is_finite()) {
            return Err(Error::InvalidInput(format!("not a non-negative decimal: {x}")));
        }
        let mut den: u64 = 1;
        for _ in 0..=9 {
            let scaled = x * den as f64;
            if (scaled - scaled.round()).abs() <= 1e-6 {
                return Self::new(scaled.round() as u64, den);
            }
            den *= 10;
        }
        Err(Error::InvalidInput(format!("{x} has more than 9 decimal digits")))
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

/// Unreduced fraction `num/den` with `den > 0`. Multiplying by the small
/// per-row coefficients is linear in the operand size; reduction is never
/// needed for correctness.
#[derive(Debug, Clone, PartialEq)]
pub struct BigFrac {
    num: BigInt,
    den: BigInt,
}

impl BigFrac {
    fn small(num: i64, den: i64) -> Self {
        Self {
            num: BigInt::from(num),
            den: BigInt::from(den),
        }
    }

    fn zero() -> Self {
        Self::small(0, 1)
    }

    /// `f64` image with relative error about 2^-60. Values handled here
    /// never exceed 1, so scaling by the denominator's size is enough.
    pub fn to_f64(&self) -> f64 {
        let shift = self.den.bits().max(self.num.bits()).saturating_sub(62);
        let n = (&self.num >> shift).to_f64().expect("fits after shift");
        let d = (&self.den >> shift).to_f64().expect("fits after shift");
        n / d
    }

    /// Exact comparison; `f64` approximations settle clearly separated
    /// values.
    pub fn cmp_exact(&self, other: &BigFrac) -> Ordering {
        let (a, b) = (self.to_f64(), other.to_f64());
        if (a - b).abs() > 1e-12 * a.abs().max(b.abs()).max(1e-300) {
            return a.partial_cmp(&b).expect("finite");
        }
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }

    /// Whether `self ≥ r` exactly.
    pub fn at_least(&self, r: Ratio64) -> bool {
        &self.num * BigInt::from(r.den) >= BigInt::from(r.num) * &self.den
    }

    pub fn numerator_bits(&self) -> u64 {
        self.num.bits()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.num.sign() != Sign::Minus
    }
}

/// Exact row sweep with `t = p/q`. Same contract as [`sweep_f64`].
pub fn sweep_exact(t: Ratio64, k_max: usize, mut visit: impl FnMut(usize, &[BigFrac], &[Term])) -> Result<()> {
    if t.num == 0 || t.num > t.den {
        return Err(Error::Precondition(format!(
            "t must lie in (0,1], got {}/{}",
            t.num, t.den
        )));
    }
    let (p, q) = (t.num as i64, t.den as i64);
    let third = BigFrac::small(q, q + p);
    let mut prev: Vec<BigFrac> = vec![BigFrac::zero()];
    let mut row: Vec<BigFrac> = Vec::with_capacity(k_max + 1);
    let mut tags: Vec<Term> = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let qk = q * k as i64;
        let c1 = BigInt::from(qk - p);
        let c2 = BigInt::from(qk - q - p);
        row.clear();
        tags.clear();
        row.push(BigFrac::zero());
        for h in 1..=k {
            // t/k + (1 - t/k) N/D = (p D + (qk - p) N) / (qk D)
            let same = &row[h - 1];
            let first = BigFrac {
                num: &same.den * p + &c1 * &same.num,
                den: &same.den * qk,
            };
            // 1/k + (1 - (1+t)/k) N/D = (q D + (qk - q - p) N) / (qk D)
            let up = &prev[h - 1];
            let second = BigFrac {
                num: &up.den * q + &c2 * &up.num,
                den: &up.den * qk,
            };
            let (v, tag) = if first.cmp_exact(&second) != Ordering::Greater {
                if first.cmp_exact(&third) != Ordering::Greater {
                    (first, Term::First)
                } else {
                    (third.clone(), Term::Third)
                }
            } else if second.cmp_exact(&third) != Ordering::Greater {
                (second, Term::Second)
            } else {
                (third.clone(), Term::Third)
            };
            row.push(v);
            tags.push(tag);
        }
        visit(k, &row, &tags);
        std::mem::swap(&mut prev, &mut row);
    }
    Ok(())
}

/// Outcome of an exact diagonal certification.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub t: Ratio64,
    pub k_max: usize,
    pub bound: Ratio64,
    /// `k` with `R(k, k) < bound`, exactly.
    pub violations: Vec<usize>,
    /// `f64` image of the exact minimum and where it occurs.
    pub min_value: f64,
    pub argmin_k: usize,
    /// `f64` images of the exact diagonal, `diagonal[k-1] = R(k, k)`.
    pub diagonal: Vec<f64>,
    /// Largest `|exact - f64|` over all cells of the swept range.
    pub max_float_deviation: f64,
}

impl Certificate {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Certifies `R(k, k) ≥ bound` for all `1 ≤ k ≤ k_max` in exact
/// arithmetic, and measures how far the `f64` sweep strays from the exact
/// values on the same range.
pub fn certify_exact(t: Ratio64, k_max: usize, bound: Ratio64) -> Result<Certificate> {
    if k_max == 0 {
        return Err(Error::Precondition("k_max must be at least 1".into()));
    }
    let mut float_rows: Vec<Vec<f64>> = Vec::with_capacity(k_max);
    sweep_f64(t.to_f64(), k_max, |_, row, _| float_rows.push(row.to_vec()))?;
    let mut cert = Certificate {
        t,
        k_max,
        bound,
        violations: Vec::new(),
        min_value: f64::INFINITY,
        argmin_k: 0,
        diagonal: Vec::with_capacity(k_max),
        max_float_deviation: 0.0,
    };
    let mut min_exact: Option<BigFrac> = None;
    sweep_exact(t, k_max, |k, row, _| {
        let fr = &float_rows[k - 1];
        for (h, cell) in row.iter().enumerate() {
            cert.max_float_deviation = cert.max_float_deviation.max((cell.to_f64() - fr[h]).abs());
        }
        let d = &row[k];
        if !d.at_least(bound) {
            cert.violations.push(k);
        }
        cert.diagonal.push(d.to_f64());
        if min_exact.as_ref().is_none_or(|m| d.cmp_exact(m) == Ordering::Less) {
            min_exact = Some(d.clone());
            cert.argmin_k = k;
        }
    })?;
    cert.min_value = min_exact.map_or(f64::NAN, |m| m.to_f64());
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_column_is_zero() {
        let table = RecurrenceTable::compute(0.8, 50).unwrap();
        for k in 1..=50 {
            assert_eq!(table.get(k, 0), Some(0.0));
            assert_eq!(table.tag(k, 0), None);
        }
    }

    #[test]
    fn single_cell() {
        let table = RecurrenceTable::compute(0.8, 3).unwrap();
        assert!((table.get(1, 1).unwrap() - 1.0 / 1.8).abs() < 1e-15);
        assert_eq!(table.tag(1, 1), Some(Term::Third));
        let (m, k) = min_diagonal(&table, 1, 1).unwrap();
        assert!((m - 1.0 / 1.8).abs() < 1e-15);
        assert_eq!(k, 1);
    }

    #[test]
    fn first_step_on_large_rows() {
        let mut seen = false;
        sweep_f64(0.8, 1000, |k, row, tags| {
            if k == 1000 {
                assert!((row[1] - 0.0008).abs() < 1e-18);
                assert_eq!(tags[0], Term::First);
                seen = true;
            }
        })
        .unwrap();
        assert!(seen);
    }

    #[test]
    fn values_stay_in_range_and_grow_in_h() {
        let table = RecurrenceTable::compute(0.8, 200).unwrap();
        let cap = 1.0 / 1.8;
        for k in 1..=200 {
            for h in 1..=k {
                let v = table.get(k, h).unwrap();
                assert!((0.0..=cap + 1e-15).contains(&v));
                assert!(v >= table.get(k, h - 1).unwrap());
            }
        }
    }

    #[test]
    fn range_errors() {
        let table = RecurrenceTable::compute(0.8, 10).unwrap();
        assert!(matches!(min_diagonal(&table, 1, 11), Err(Error::OutOfRange(_))));
        assert!(matches!(min_diagonal(&table, 0, 5), Err(Error::OutOfRange(_))));
        assert!(first_term_dominance(&table, 11).is_err());
        assert!(RecurrenceTable::compute(1.5, 10).is_err());
        assert!(RecurrenceTable::compute(0.8, 0).is_err());
    }

    #[test]
    fn small_rows_are_not_first_term() {
        let table = RecurrenceTable::compute(0.8, 5).unwrap();
        let report = first_term_dominance(&table, 1).unwrap();
        assert!(report.violations.contains(&(1, 1, Term::Third)));
    }

    #[test]
    fn asymptote_values() {
        assert!((asymptote(0.8).unwrap() - 0.550_671_035_882_778_4).abs() < 1e-15);
        assert!((asymptote(1.0).unwrap() - (1.0 - (-1f64).exp())).abs() < 1e-15);
        assert!(asymptote(0.0).is_err());
    }

    #[test]
    fn decimal_rationals() {
        assert_eq!(Ratio64::from_decimal(0.8).unwrap(), Ratio64 { num: 4, den: 5 });
        assert_eq!(Ratio64::from_decimal(0.5506).unwrap(), Ratio64 { num: 2753, den: 5000 });
        assert_eq!(Ratio64::from_decimal(1.0).unwrap(), Ratio64 { num: 1, den: 1 });
        assert!(Ratio64::from_decimal(std::f64::consts::PI).is_err());
    }

    #[test]
    fn exact_matches_float_on_small_tables() {
        let t = Ratio64::new(4, 5).unwrap();
        let table = RecurrenceTable::compute(0.8, 60).unwrap();
        sweep_exact(t, 60, |k, row, tags| {
            for h in 1..=k {
                assert!((row[h].to_f64() - table.get(k, h).unwrap()).abs() < 1e-13);
                if Some(tags[h - 1]) != table.tag(k, h) {
                    // Only exact ties may be resolved differently in floating point.
                    let same = if h == 1 { 0.0 } else { table.get(k, h - 1).unwrap() };
                    let prev = if h == 1 {
                        0.0
                    } else {
                        table.get(k - 1, h - 1).unwrap_or(0.0)
                    };
                    let v = terms(0.8, k, same, prev);
                    let spread = v.iter().cloned().fold(f64::MIN, f64::max) - row[h].to_f64();
                    let near = v.iter().filter(|x| (*x - row[h].to_f64()).abs() < 1e-12).count();
                    assert!(near >= 2, "k={k} h={h} spread={spread}");
                }
                assert!(row[h].is_nonnegative());
            }
        })
        .unwrap();
    }

    #[test]
    fn exact_third_term_is_exact() {
        let t = Ratio64::new(4, 5).unwrap();
        sweep_exact(t, 1, |_, row, tags| {
            assert_eq!(tags[0], Term::Third);
            assert!(row[1].at_least(Ratio64::new(5, 9).unwrap()));
            assert!(!row[1].at_least(Ratio64::new(5556, 10000).unwrap()));
        })
        .unwrap();
    }

    #[test]
    fn big_fraction_to_f64_handles_wide_operands() {
        let f = BigFrac {
            num: BigInt::from(3) << 5000usize,
            den: BigInt::from(4) << 5000usize,
        };
        assert!((f.to_f64() - 0.75).abs() < 1e-15);
    }
}
