//! Integer partitions, used as Young diagram shapes and as cycle types.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A partition `λ ⊢ n`: a non-empty, weakly decreasing list of positive parts.
///
/// The derived ordering compares parts lexicographically, so
/// `(1,1,1,1) < (2,1,1) < (2,2) < (3,1) < (4)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::invalid("a partition needs at least one part"));
        }
        if parts.contains(&0) {
            return Err(Error::invalid("partition parts must be positive"));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::invalid(format!(
                "partition parts must be weakly decreasing, got {parts:?}"
            )));
        }
        Ok(Partition { parts })
    }

    /// Sorts arbitrary positive parts into a partition (used for cycle types).
    pub(crate) fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        debug_assert!(!parts.is_empty() && parts.iter().all(|&p| p > 0));
        Partition { parts }
    }

    /// The one-row shape `(n)`.
    pub fn single_row(n: usize) -> Result<Self> {
        Partition::new(vec![n])
    }

    /// The one-column shape `(1^n)`.
    pub fn single_column(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n must be positive"));
        }
        Ok(Partition { parts: vec![1; n] })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn rows(&self) -> usize {
        self.parts.len()
    }

    /// Half-open index ranges of each row in row-major order.
    pub fn row_ranges(&self) -> impl Iterator<Item = std::ops::Range<usize>> + '_ {
        self.parts.iter().scan(0usize, |start, &len| {
            let r = *start..*start + len;
            *start += len;
            Some(r)
        })
    }

    /// Index of the row containing the cell at row-major position `pos`.
    pub fn row_of_position(&self, pos: usize) -> Option<usize> {
        self.row_ranges().position(|r| r.contains(&pos))
    }

    /// Order of the Young subgroup, `λ_1! λ_2! ⋯`. Saturates at `u64::MAX`.
    pub fn young_subgroup_order(&self) -> u64 {
        self.parts
            .iter()
            .try_fold(1u64, |acc, &p| {
                factorial(p).and_then(|f| acc.checked_mul(f))
            })
            .unwrap_or(u64::MAX)
    }

    /// Number of tabloids of this shape, `n! / (λ_1! λ_2! ⋯)`, computed as a
    /// product of binomials. Saturates at `u64::MAX`.
    pub fn tabloid_count(&self) -> u64 {
        let mut acc: u128 = 1;
        let mut remaining = self.n() as u128;
        for &p in &self.parts {
            // C(remaining, p) built incrementally; each step stays integral.
            let mut c: u128 = 1;
            for i in 0..p as u128 {
                c = match c.checked_mul(remaining - i) {
                    Some(v) => v / (i + 1),
                    None => return u64::MAX,
                };
            }
            acc = match acc.checked_mul(c) {
                Some(v) => v,
                None => return u64::MAX,
            };
            remaining -= p as u128;
        }
        u64::try_from(acc).unwrap_or(u64::MAX)
    }

    /// Comma-separated parts, the form accepted by [`FromStr`].
    pub fn to_csv(&self) -> String {
        join(&self.parts, ",")
    }
}

pub(crate) fn factorial(n: usize) -> Option<u64> {
    (1..=n as u64).try_fold(1u64, |acc, k| acc.checked_mul(k))
}

fn join(xs: &[usize], sep: &str) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", join(&self.parts, ","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses `"a,b,c"`; surrounding parentheses and whitespace are tolerated.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim();
        let body = body
            .strip_prefix('(')
            .and_then(|b| b.strip_suffix(')'))
            .unwrap_or(body);
        let parts = body
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::parse(format!("bad partition part {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts).map_err(|e| Error::parse(e.to_string()))
    }
}

/// All partitions of `n`, largest first: `(n), (n-1,1), …, (1^n)`.
pub fn partitions_of(n: usize) -> Result<Vec<Partition>> {
    if n == 0 {
        return Err(Error::invalid("partitions_of needs n >= 1"));
    }
    fn go(remaining: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition {
                parts: prefix.clone(),
            });
            return;
        }
        for part in (1..=remaining.min(max)).rev() {
            prefix.push(part);
            go(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    /// Brute force: every weakly decreasing positive tuple summing to `n`,
    /// found by filtering all compositions of `n`.
    fn brute_force_count(n: usize) -> usize {
        let mut count = 0;
        // compositions of n correspond to subsets of the n-1 gaps
        for mask in 0u32..(1 << (n - 1)) {
            let mut parts = Vec::new();
            let mut run = 1;
            for gap in 0..n - 1 {
                if mask & (1 << gap) != 0 {
                    parts.push(run);
                    run = 1;
                } else {
                    run += 1;
                }
            }
            parts.push(run);
            if parts.windows(2).all(|w| w[0] >= w[1]) {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn partitions_of_small() {
        assert_eq!(partitions_of(1).unwrap(), vec![p(&[1])]);
        assert_eq!(
            partitions_of(4).unwrap(),
            vec![
                p(&[4]),
                p(&[3, 1]),
                p(&[2, 2]),
                p(&[2, 1, 1]),
                p(&[1, 1, 1, 1])
            ]
        );
        assert_eq!(
            partitions_of(0),
            Err(Error::invalid("partitions_of needs n >= 1"))
        );
    }

    #[test]
    fn partitions_of_matches_brute_force() {
        assert_eq!(brute_force_count(7), 15);
        for n in 1..=12 {
            let ps = partitions_of(n).unwrap();
            assert_eq!(ps.len(), brute_force_count(n), "n = {n}");
            assert!(
                ps.windows(2).all(|w| w[0] > w[1]),
                "strictly reverse-lex, n = {n}"
            );
            assert!(ps.iter().all(|q| q.n() == n));
        }
    }

    #[test]
    fn rejects_bad_parts() {
        assert!(Partition::new(vec![]).is_err());
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
        assert!("2,x".parse::<Partition>().is_err());
        assert!(matches!("1,3".parse::<Partition>(), Err(Error::Parse(_))));
    }

    #[test]
    fn parse_and_display() {
        let q: Partition = "3, 1".parse().unwrap();
        assert_eq!(q, p(&[3, 1]));
        assert_eq!(q.to_string(), "(3,1)");
        assert_eq!(q.to_csv(), "3,1");
        assert_eq!("(2,2)".parse::<Partition>().unwrap(), p(&[2, 2]));
    }

    #[test]
    fn young_subgroup_orders() {
        assert_eq!(p(&[1, 1, 1, 1]).young_subgroup_order(), 1);
        assert_eq!(p(&[3, 1]).young_subgroup_order(), 6);
        assert_eq!(p(&[2, 2]).young_subgroup_order(), 4);
        assert_eq!(p(&[30]).young_subgroup_order(), u64::MAX);
    }

    #[test]
    fn tabloid_counts() {
        assert_eq!(p(&[2, 2]).tabloid_count(), 6);
        assert_eq!(p(&[4]).tabloid_count(), 1);
        assert_eq!(p(&[2, 1, 1]).tabloid_count(), 12);
        assert_eq!(p(&[1; 10]).tabloid_count(), 3_628_800);
        for n in 1..=12 {
            let nf = factorial(n).unwrap();
            for q in partitions_of(n).unwrap() {
                assert_eq!(q.tabloid_count(), nf / q.young_subgroup_order());
            }
        }
    }

    #[test]
    fn row_ranges_and_positions() {
        let q = p(&[3, 2, 1]);
        let r: Vec<_> = q.row_ranges().collect();
        assert_eq!(r, vec![0..3, 3..5, 5..6]);
        assert_eq!(q.row_of_position(4), Some(1));
        assert_eq!(q.row_of_position(6), None);
    }
}
