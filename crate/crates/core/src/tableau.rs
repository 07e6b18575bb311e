//! Young tableaux and tabloids of a given shape, and the action of the
//! symmetric group on both.
//!
//! Both types store their cells row-major in a flat vector. A [`Tabloid`]
//! is kept in canonical form, every row sorted ascending, so two tableaux
//! are row-equivalent exactly when they canonicalize to equal tabloids.

use std::fmt;

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::perm::Permutation;
use crate::DEFAULT_ENUMERATION_BOUND;

/// A bijective filling of the Young diagram of `shape` with `{1..n}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tableau {
    shape: Partition,
    entries: Vec<u32>,
}

/// Row-equivalence class of tableaux, represented by its row-sorted member.
///
/// The derived ordering (shape, then row-major entries) is the canonical key
/// order used for every basis in the crate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tabloid {
    shape: Partition,
    entries: Vec<u32>,
}

pub(crate) fn check_bijective(entries: &[u32]) -> Result<()> {
    let n = entries.len();
    let mut seen = vec![false; n];
    for &x in entries {
        let i = (x as usize).wrapping_sub(1);
        if i >= n {
            return Err(Error::InvalidFilling(format!(
                "entry {x} is outside 1..={n}"
            )));
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidFilling(format!(
                "entry {x} appears more than once"
            )));
        }
    }
    Ok(())
}

pub(crate) fn shape_of_rows<T>(rows: &[Vec<T>]) -> Result<Partition> {
    Partition::new(rows.iter().map(Vec::len).collect())
        .map_err(|e| Error::Shape(format!("row lengths do not form a partition: {e}")))
}

fn rows_of<'a>(shape: &'a Partition, entries: &'a [u32]) -> impl Iterator<Item = &'a [u32]> + 'a {
    shape.row_ranges().map(move |r| &entries[r])
}

fn sort_rows(shape: &Partition, entries: &mut [u32]) {
    for r in shape.row_ranges() {
        entries[r].sort_unstable();
    }
}

fn write_rows(f: &mut fmt::Formatter<'_>, shape: &Partition, entries: &[u32]) -> fmt::Result {
    for (i, row) in rows_of(shape, entries).enumerate() {
        if i > 0 {
            f.write_str(" / ")?;
        }
        let cells: Vec<String> = row.iter().map(u32::to_string).collect();
        f.write_str(&cells.join(" "))?;
    }
    Ok(())
}

impl Tableau {
    /// Validates a row-major filling against `shape`.
    pub fn new(shape: Partition, entries: Vec<u32>) -> Result<Self> {
        if entries.len() != shape.n() {
            return Err(Error::Shape(format!(
                "shape {shape} has {} cells but {} entries were given",
                shape.n(),
                entries.len()
            )));
        }
        check_bijective(&entries)?;
        Ok(Tableau { shape, entries })
    }

    pub fn from_rows(rows: Vec<Vec<u32>>) -> Result<Self> {
        let shape = shape_of_rows(&rows)?;
        Tableau::new(shape, rows.into_iter().flatten().collect())
    }

    /// The sequential filling `1, 2, …, n` from top left to bottom right.
    pub fn standard(shape: &Partition) -> Self {
        Tableau {
            shape: shape.clone(),
            entries: (1..=shape.n() as u32).collect(),
        }
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    /// Cells in row-major order.
    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> + '_ {
        rows_of(&self.shape, &self.entries)
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        self.rows().map(<[u32]>::to_vec).collect()
    }

    pub fn is_standard(&self) -> bool {
        self.entries
            .iter()
            .enumerate()
            .all(|(i, &x)| x as usize == i + 1)
    }

    /// `π t`: every entry `x` is replaced by `π(x)`.
    pub fn act(&self, p: &Permutation) -> Result<Tableau> {
        if p.n() != self.shape.n() {
            return Err(Error::invalid(format!(
                "permutation on {} points cannot act on a tableau with {} cells",
                p.n(),
                self.shape.n()
            )));
        }
        Ok(Tableau {
            shape: self.shape.clone(),
            entries: self.entries.iter().map(|&x| p.apply(x)).collect(),
        })
    }

    /// The tabloid `{t}`.
    pub fn canonicalize(&self) -> Tabloid {
        let mut entries = self.entries.clone();
        sort_rows(&self.shape, &mut entries);
        Tabloid {
            shape: self.shape.clone(),
            entries,
        }
    }

    /// True when corresponding rows hold the same sets of entries.
    pub fn row_equivalent(&self, other: &Tableau) -> Result<bool> {
        if self.shape != other.shape {
            return Err(Error::invalid(format!(
                "cannot compare tableaux of shapes {} and {}",
                self.shape, other.shape
            )));
        }
        Ok(self.canonicalize() == other.canonicalize())
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_rows(f, &self.shape, &self.entries)
    }
}

impl Tabloid {
    /// Builds the tabloid containing the given row-major filling; rows are
    /// sorted, so any member of the class may be passed.
    pub fn new(shape: Partition, entries: Vec<u32>) -> Result<Self> {
        Ok(Tableau::new(shape, entries)?.canonicalize())
    }

    pub fn from_rows(rows: Vec<Vec<u32>>) -> Result<Self> {
        Ok(Tableau::from_rows(rows)?.canonicalize())
    }

    /// `{t}` for the standard tableau `t`.
    pub fn standard(shape: &Partition) -> Self {
        Tableau::standard(shape).canonicalize()
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    /// Cells of the canonical representative in row-major order.
    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> + '_ {
        rows_of(&self.shape, &self.entries)
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        self.rows().map(<[u32]>::to_vec).collect()
    }

    /// The canonical (row-sorted) member of the class.
    pub fn representative(&self) -> Tableau {
        Tableau {
            shape: self.shape.clone(),
            entries: self.entries.clone(),
        }
    }

    /// Index of the row holding `x`, if `x` is in `1..=n`.
    pub fn row_of(&self, x: u32) -> Option<usize> {
        let pos = self.entries.iter().position(|&e| e == x)?;
        self.shape.row_of_position(pos)
    }

    /// `π {t} = {π t}`.
    pub fn act(&self, p: &Permutation) -> Result<Tabloid> {
        Ok(self.representative().act(p)?.canonicalize())
    }

    /// Whether `π {t} = {t}`, without building the image.
    pub fn is_fixed_by(&self, p: &Permutation) -> bool {
        p.n() == self.shape.n()
            && self
                .rows()
                .all(|row| row.iter().all(|&x| row.binary_search(&p.apply(x)).is_ok()))
    }
}

impl fmt::Display for Tabloid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_rows(f, &self.shape, &self.entries)
    }
}

/// Every tabloid of `shape`, in canonical key order, with the default bound.
pub fn enumerate_tabloids(shape: &Partition) -> Result<Vec<Tabloid>> {
    enumerate_tabloids_within(shape, DEFAULT_ENUMERATION_BOUND)
}

/// Every tabloid of `shape` in canonical key order (row-major entries
/// compared lexicographically), refusing shapes with more than `bound` cells.
pub fn enumerate_tabloids_within(shape: &Partition, bound: usize) -> Result<Vec<Tabloid>> {
    let n = shape.n();
    if n > bound {
        return Err(Error::Capacity { n, bound });
    }
    // Choosing each row's entries as the lexicographically next combination
    // of what is left yields the keys in sorted order.
    fn fill(
        parts: &[usize],
        remaining: &[u32],
        prefix: &mut Vec<u32>,
        shape: &Partition,
        out: &mut Vec<Tabloid>,
    ) {
        let Some((&len, rest_parts)) = parts.split_first() else {
            out.push(Tabloid {
                shape: shape.clone(),
                entries: prefix.clone(),
            });
            return;
        };
        let mut chosen: Vec<usize> = (0..len).collect();
        loop {
            let mark = prefix.len();
            prefix.extend(chosen.iter().map(|&i| remaining[i]));
            let rest: Vec<u32> = remaining
                .iter()
                .enumerate()
                .filter(|(i, _)| chosen.binary_search(i).is_err())
                .map(|(_, &x)| x)
                .collect();
            fill(rest_parts, &rest, prefix, shape, out);
            prefix.truncate(mark);
            if !next_combination(&mut chosen, remaining.len()) {
                break;
            }
        }
    }
    let mut out = Vec::with_capacity(shape.tabloid_count() as usize);
    let all: Vec<u32> = (1..=n as u32).collect();
    fill(
        shape.parts(),
        &all,
        &mut Vec::with_capacity(n),
        shape,
        &mut out,
    );
    Ok(out)
}

/// Next k-subset of `0..n` in lexicographic order.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
        return false;
    };
    idx[i] += 1;
    for j in i + 1..k {
        idx[j] = idx[j - 1] + 1;
    }
    true
}
