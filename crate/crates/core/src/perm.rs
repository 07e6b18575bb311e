//! Permutations of `{1..n}` with right-to-left composition.

use std::fmt;

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::DEFAULT_ENUMERATION_BOUND;

/// An element of the symmetric group on `{1..n}`, stored as its image list:
/// `images[i - 1]` is the image of `i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    /// # Panics
    /// If `n == 0`.
    pub fn identity(n: usize) -> Self {
        assert!(n > 0, "permutations act on a non-empty set");
        Permutation {
            images: (1..=n as u32).collect(),
        }
    }

    /// Builds a permutation from its image list (one-based values).
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::invalid("empty image list"));
        }
        let mut seen = vec![false; n];
        for &x in &images {
            let i = (x as usize).wrapping_sub(1);
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::invalid(format!(
                    "{images:?} is not a bijection of 1..={n}"
                )));
            }
        }
        Ok(Permutation { images })
    }

    /// Parses cycle notation such as `"(1 3 4 2)"` or `"(1 2)(3 4)"`.
    /// `"e"` and `"()"` denote the identity. Entries may be separated by
    /// whitespace or commas; points not listed are fixed.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::parse("permutation size must be positive"));
        }
        let mut images: Vec<u32> = (1..=n as u32).collect();
        let mut used = vec![false; n];
        let trimmed = text.trim();
        if trimmed == "e" {
            return Ok(Permutation { images });
        }
        if trimmed.is_empty() {
            return Err(Error::parse("empty permutation text"));
        }
        let mut rest = trimmed;
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::parse(format!("expected '(' in {text:?}")))?;
            let close = open
                .find(')')
                .ok_or_else(|| Error::parse(format!("unclosed cycle in {text:?}")))?;
            let body = &open[..close];
            let cycle = body
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    let x: u32 = t
                        .parse()
                        .map_err(|_| Error::parse(format!("bad cycle entry {t:?} in {text:?}")))?;
                    if x == 0 || x as usize > n {
                        return Err(Error::parse(format!("entry {x} is outside 1..={n}")));
                    }
                    if std::mem::replace(&mut used[x as usize - 1], true) {
                        return Err(Error::parse(format!("entry {x} repeated in {text:?}")));
                    }
                    Ok(x)
                })
                .collect::<Result<Vec<u32>>>()?;
            for (k, &x) in cycle.iter().enumerate() {
                images[x as usize - 1] = cycle[(k + 1) % cycle.len()];
            }
            rest = open[close + 1..].trim_start();
        }
        Ok(Permutation { images })
    }

    /// A permutation with the given cycle type, cycles laid out on
    /// consecutive points: `(4,2)` gives `(1 2 3 4)(5 6)`.
    pub fn with_cycle_type(cycle_type: &Partition) -> Self {
        let mut images = Vec::with_capacity(cycle_type.n());
        for r in cycle_type.row_ranges() {
            let (start, end) = (r.start as u32 + 1, r.end as u32);
            images.extend(start + 1..=end);
            images.push(start);
        }
        Permutation { images }
    }

    /// Every permutation of `{1..n}` in lexicographic image order.
    pub fn all(n: usize) -> Result<Vec<Self>> {
        if n == 0 {
            return Err(Error::invalid("n must be positive"));
        }
        if n > DEFAULT_ENUMERATION_BOUND {
            return Err(Error::Capacity {
                n,
                bound: DEFAULT_ENUMERATION_BOUND,
            });
        }
        let mut cur: Vec<u32> = (1..=n as u32).collect();
        let mut out = vec![Permutation {
            images: cur.clone(),
        }];
        while next_permutation(&mut cur) {
            out.push(Permutation {
                images: cur.clone(),
            });
        }
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// Image of the one-based point `x`.
    ///
    /// # Panics
    /// If `x` is not in `1..=n`.
    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.images[x as usize - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &x)| x as usize == i + 1)
    }

    /// `self ∘ other`, i.e. `x ↦ self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.n() != other.n() {
            return Err(Error::invalid(format!(
                "cannot compose permutations of {} and {} points",
                self.n(),
                other.n()
            )));
        }
        Ok(Permutation {
            images: other.images.iter().map(|&x| self.apply(x)).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.n()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize - 1] = i as u32 + 1;
        }
        Permutation { images }
    }

    /// Disjoint cycles including fixed points, each starting at its smallest
    /// element, ordered by that element.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for start in 1..=self.n() as u32 {
            if seen[start as usize - 1] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x as usize - 1] {
                seen[x as usize - 1] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_type(&self) -> Partition {
        Partition::from_unsorted(self.cycles().iter().map(Vec::len).collect())
    }

    /// `+1` for even permutations, `-1` for odd ones.
    pub fn sign(&self) -> i32 {
        // a k-cycle is a product of k - 1 transpositions
        let transpositions: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        if transpositions.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

/// Advances `xs` to the next permutation in lexicographic order; returns
/// `false` (wrapping `xs` back to ascending order) once the last one is
/// reached.
pub(crate) fn next_permutation<T: Ord>(xs: &mut [T]) -> bool {
    let Some(i) = xs.windows(2).rposition(|w| w[0] < w[1]) else {
        xs.reverse();
        return false;
    };
    let j = xs
        .iter()
        .rposition(|x| *x > xs[i])
        .expect("a larger element exists");
    xs.swap(i, j);
    xs[i + 1..].reverse();
    true
}

impl fmt::Display for Permutation {
    /// Cycle notation with fixed points omitted; the identity prints as `e`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for cycle in self.cycles().into_iter().filter(|c| c.len() > 1) {
            any = true;
            let body: Vec<String> = cycle.iter().map(u32::to_string).collect();
            write!(f, "({})", body.join(" "))?;
        }
        if !any {
            f.write_str("e")?;
        }
        Ok(())
    }
}
