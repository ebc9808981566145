//! Exact ratio traces shared by the group, abelian and Lie-algebra engines,
//! plus their CSV / JSON-lines encodings.

use std::fmt::Write as _;

use num_rational::Ratio;

pub type Rational = Ratio<i64>;

/// One level of a trace: `num_exp / den_exp` as an exact rational.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceRow {
    pub level: usize,
    pub num_exp: u64,
    pub den_exp: u64,
    pub ratio: Rational,
}

impl TraceRow {
    pub fn new(level: usize, num_exp: u64, den_exp: u64) -> Self {
        let ratio = if den_exp == 0 {
            Rational::from_integer(0)
        } else {
            Rational::new(num_exp as i64, den_exp as i64)
        };
        TraceRow {
            level,
            num_exp,
            den_exp,
            ratio,
        }
    }
}

/// A finite prefix of a liminf: per-level ratios and the minimum over the
/// tail window of the last `ceil(last_level / 2)` levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub rows: Vec<TraceRow>,
    pub tail_min: Option<Rational>,
}

impl Trace {
    pub fn from_rows(rows: Vec<TraceRow>, max_level: usize) -> Self {
        let window = max_level.div_ceil(2).min(rows.len());
        let tail_min = rows[rows.len() - window..].iter().map(|r| r.ratio).min();
        Trace { rows, tail_min }
    }

    pub fn ratios(&self) -> Vec<Rational> {
        self.rows.iter().map(|r| r.ratio).collect()
    }

    pub fn last(&self) -> Option<&TraceRow> {
        self.rows.last()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("level,num_exp,den_exp,ratio_num,ratio_den\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.level,
                r.num_exp,
                r.den_exp,
                r.ratio.numer(),
                r.ratio.denom()
            );
        }
        out
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{{\"level\":{},\"num_exp\":{},\"den_exp\":{},\"ratio_num\":{},\"ratio_den\":{}}}",
                r.level,
                r.num_exp,
                r.den_exp,
                r.ratio.numer(),
                r.ratio.denom()
            );
        }
        out
    }
}

/// `num/den` followed by a six-place decimal, e.g. `3/5 (0.600000)`.
pub fn display_ratio(r: &Rational) -> String {
    format!("{}/{} ({})", r.numer(), r.denom(), decimal6(r))
}

/// Six-place decimal of a nonnegative rational, computed with integer
/// arithmetic so the text is reproducible.
pub fn decimal6(r: &Rational) -> String {
    let num = *r.numer() as i128;
    let den = *r.denom() as i128;
    let scaled = (num * 2_000_000 + den) / (2 * den); // round half up
    let sign = if scaled < 0 { "-" } else { "" };
    let a = scaled.abs();
    format!("{sign}{}.{:06}", a / 1_000_000, a % 1_000_000)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_schema_and_reduced_ratios() {
        let t = Trace::from_rows(vec![TraceRow::new(2, 1, 3), TraceRow::new(3, 2, 6)], 3);
        assert_eq!(
            t.to_csv(),
            "level,num_exp,den_exp,ratio_num,ratio_den\n2,1,3,1,3\n3,2,6,1,3\n"
        );
        assert_eq!(t.tail_min, Some(Rational::new(1, 3)));
    }

    #[test]
    fn tail_window_is_last_half() {
        let rows = (1..=6).map(|n| TraceRow::new(n, 1, n as u64)).collect();
        let t = Trace::from_rows(rows, 6);
        assert_eq!(t.tail_min, Some(Rational::new(1, 6)));
    }

    #[test]
    fn decimals() {
        assert_eq!(decimal6(&Rational::new(3, 5)), "0.600000");
        assert_eq!(decimal6(&Rational::new(2, 3)), "0.666667");
        assert_eq!(decimal6(&Rational::new(1, 1)), "1.000000");
        assert_eq!(display_ratio(&Rational::new(4, 7)), "4/7 (0.571429)");
    }
}
