//! The k-assignments vector space `V^λ`: formal real combinations of the
//! standard assignment tabloids of one shape, the permutation action on it,
//! characters, the dual space and contragredient transforms.
//!
//! Coordinates are always taken in canonical key order, the order returned by
//! [`enumerate_standard_tabloids`].

use std::collections::BTreeMap;
use std::fmt;

use crate::assignment::{enumerate_standard_tabloids, StandardAssignmentTabloid};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::partition::{partitions_of, Partition};
use crate::perm::Permutation;
use crate::schedule::{check_row_rates, evaluate, ProcessorSystem, TaskGraph};
use crate::tableau::{enumerate_tabloids, Tabloid};
use crate::DEFAULT_ENUMERATION_BOUND;

/// Shared storage of [`KVector`] and [`Functional`]. Zero coefficients are
/// never stored.
#[derive(Debug, Clone, PartialEq)]
struct Combination {
    shape: Partition,
    coeffs: BTreeMap<StandardAssignmentTabloid, f64>,
}

impl Combination {
    fn zero(shape: &Partition) -> Self {
        Combination {
            shape: shape.clone(),
            coeffs: BTreeMap::new(),
        }
    }

    fn add_term(&mut self, t: StandardAssignmentTabloid, c: f64) -> Result<()> {
        if t.shape() != &self.shape {
            return Err(Error::Shape(format!(
                "{t} does not have shape {}",
                self.shape
            )));
        }
        let slot = self.coeffs.entry(t.clone()).or_insert(0.0);
        *slot += c;
        if *slot == 0.0 {
            self.coeffs.remove(&t);
        }
        Ok(())
    }

    fn from_terms(
        shape: &Partition,
        terms: impl IntoIterator<Item = (StandardAssignmentTabloid, f64)>,
    ) -> Result<Self> {
        let mut out = Combination::zero(shape);
        for (t, c) in terms {
            if !c.is_finite() {
                return Err(Error::invalid(format!(
                    "coefficient {c} of {t} is not finite"
                )));
            }
            out.add_term(t, c)?;
        }
        Ok(out)
    }

    /// `c*term + c*term …`; the coefficient defaults to 1, `0` alone is the
    /// zero vector.
    fn parse(text: &str, shape: &Partition) -> Result<Self> {
        let text = text.trim();
        if text == "0" {
            return Ok(Combination::zero(shape));
        }
        let mut terms = Vec::new();
        for piece in text.split('+') {
            let piece = piece.trim();
            let (coeff, term) = match piece.split_once('*') {
                Some((c, t)) => {
                    let c = c.trim();
                    let value = c
                        .parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite())
                        .ok_or_else(|| Error::parse(format!("bad coefficient {c:?}")))?;
                    (value, t.trim())
                }
                None => (1.0, piece),
            };
            terms.push((StandardAssignmentTabloid::parse(term, shape)?, coeff));
        }
        Combination::from_terms(shape, terms)
    }

    fn get(&self, t: &StandardAssignmentTabloid) -> f64 {
        self.coeffs.get(t).copied().unwrap_or(0.0)
    }

    fn coordinates(&self) -> Result<Vec<f64>> {
        Ok(enumerate_standard_tabloids(&self.shape)?
            .iter()
            .map(|t| self.get(t))
            .collect())
    }

    fn from_coordinates(shape: &Partition, coords: &[f64]) -> Result<Self> {
        let basis = enumerate_standard_tabloids(shape)?;
        if coords.len() != basis.len() {
            return Err(Error::invalid(format!(
                "{} coordinates for a space of dimension {}",
                coords.len(),
                basis.len()
            )));
        }
        Combination::from_terms(shape, basis.into_iter().zip(coords.iter().copied()))
    }

    fn dot(&self, other: &Combination) -> Result<f64> {
        if self.shape != other.shape {
            return Err(Error::invalid(format!(
                "shapes differ: {} and {}",
                self.shape, other.shape
            )));
        }
        // folded from +0.0: an empty `sum` would be -0.0
        Ok(self
            .coeffs
            .iter()
            .map(|(t, c)| c * other.get(t))
            .fold(0.0, |acc, x| acc + x))
    }
}

impl fmt::Display for Combination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (i, (t, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*{t}")?;
        }
        Ok(())
    }
}

macro_rules! combination_api {
    ($name:ident) => {
        impl $name {
            pub fn zero(shape: &Partition) -> Self {
                $name(Combination::zero(shape))
            }

            pub fn from_terms(
                shape: &Partition,
                terms: impl IntoIterator<Item = (StandardAssignmentTabloid, f64)>,
            ) -> Result<Self> {
                Combination::from_terms(shape, terms).map($name)
            }

            /// Parses `"c*term + c*term …"` with `Y…` terms of `shape`.
            pub fn parse(text: &str, shape: &Partition) -> Result<Self> {
                Combination::parse(text, shape).map($name)
            }

            /// Coordinate vector in canonical basis order.
            pub fn from_coordinates(shape: &Partition, coords: &[f64]) -> Result<Self> {
                Combination::from_coordinates(shape, coords).map($name)
            }

            pub fn coordinates(&self) -> Result<Vec<f64>> {
                self.0.coordinates()
            }

            pub fn shape(&self) -> &Partition {
                &self.0.shape
            }

            pub fn get(&self, t: &StandardAssignmentTabloid) -> f64 {
                self.0.get(t)
            }

            /// Non-zero coefficients in canonical key order.
            pub fn iter(&self) -> impl Iterator<Item = (&StandardAssignmentTabloid, f64)> + '_ {
                self.0.coeffs.iter().map(|(t, &c)| (t, c))
            }

            pub fn is_zero(&self) -> bool {
                self.0.coeffs.is_empty()
            }

            pub fn scale(&self, a: f64) -> Self {
                let terms = self.0.coeffs.iter().map(|(t, &c)| (t.clone(), a * c));
                $name(Combination::from_terms(&self.0.shape, terms).expect("same shape"))
            }

            pub fn add(&self, other: &Self) -> Result<Self> {
                if self.shape() != other.shape() {
                    return Err(Error::invalid(format!(
                        "shapes differ: {} and {}",
                        self.shape(),
                        other.shape()
                    )));
                }
                let mut out = self.0.clone();
                for (t, &c) in &other.0.coeffs {
                    out.add_term(t.clone(), c)?;
                }
                Ok($name(out))
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.fmt(f)
            }
        }
    };
}

/// An element `Σ k_T T` of `V^λ`. With non-negative integer coefficients it
/// describes a multiset of assignments (k consecutive copies of a task
/// graph).
#[derive(Debug, Clone, PartialEq)]
pub struct KVector(Combination);

/// An element of the dual space, `Σ f_T T̂` with `T̂(T') = δ_{TT'}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Functional(Combination);

combination_api!(KVector);
combination_api!(Functional);

impl KVector {
    /// The basis vector `T`.
    pub fn basis(t: &StandardAssignmentTabloid) -> Self {
        let mut c = Combination::zero(t.shape());
        c.coeffs.insert(t.clone(), 1.0);
        KVector(c)
    }

    /// `Σ_T T`, spanning the trivial subrepresentation.
    pub fn ones(shape: &Partition) -> Result<Self> {
        let basis = enumerate_standard_tabloids(shape)?;
        KVector::from_terms(shape, basis.into_iter().map(|t| (t, 1.0)))
    }
}

impl Functional {
    /// The dual basis element `T̂`.
    pub fn dual_basis(t: &StandardAssignmentTabloid) -> Self {
        let mut c = Combination::zero(t.shape());
        c.coeffs.insert(t.clone(), 1.0);
        Functional(c)
    }
}

/// `n! / (λ_1! ⋯ λ_r!)`.
pub fn dimension(shape: &Partition) -> u64 {
    shape.tabloid_count()
}

/// `g · Σ k_T T = Σ k_T (gT)`.
pub fn act(p: &Permutation, v: &KVector) -> Result<KVector> {
    if p.n() != v.shape().n() {
        return Err(Error::invalid(format!(
            "permutation on {} points acting on shape {}",
            p.n(),
            v.shape()
        )));
    }
    let terms = v
        .iter()
        .map(|(t, c)| Ok((StandardAssignmentTabloid::new(t.tabloid().act(p)?), c)))
        .collect::<Result<Vec<_>>>()?;
    KVector::from_terms(v.shape(), terms)
}

/// Standard inner product in tabloid coordinates.
pub fn inner_product(u: &KVector, v: &KVector) -> Result<f64> {
    u.0.dot(&v.0)
}

/// `⟨f, v⟩ = f(v)`.
pub fn pair(f: &Functional, v: &KVector) -> Result<f64> {
    f.0.dot(&v.0)
}

/// Number of tabloids of `shape` fixed by `p`, the character of `V^λ` at
/// `p`.
pub fn character(shape: &Partition, p: &Permutation) -> Result<u64> {
    if p.n() != shape.n() {
        return Err(Error::invalid(format!(
            "permutation on {} points, shape {shape}",
            p.n()
        )));
    }
    Ok(count_fixed(&enumerate_tabloids(shape)?, p))
}

fn count_fixed(tabloids: &[Tabloid], p: &Permutation) -> u64 {
    tabloids.iter().filter(|t| t.is_fixed_by(p)).count() as u64
}

/// Characters of every `V^λ`, `λ ⊢ n`, on every conjugacy class of `S_n`.
/// Rows (shapes) and columns (cycle types) run in ascending lexicographic
/// order, `(1^n)` first and `(n)` last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterTable {
    pub shapes: Vec<Partition>,
    pub classes: Vec<Partition>,
    pub entries: Vec<Vec<u64>>,
}

impl CharacterTable {
    pub fn compute(n: usize) -> Result<Self> {
        Self::compute_with(Execution::default(), n)
    }

    pub fn compute_with(exec: Execution, n: usize) -> Result<Self> {
        if n > DEFAULT_ENUMERATION_BOUND {
            return Err(Error::Capacity {
                n,
                bound: DEFAULT_ENUMERATION_BOUND,
            });
        }
        let mut shapes = partitions_of(n)?;
        shapes.reverse();
        let classes = shapes.clone();
        let reps: Vec<Permutation> = classes.iter().map(Permutation::with_cycle_type).collect();
        let bases = exec.try_map(&shapes, enumerate_tabloids)?;
        let cells: Vec<(usize, usize)> = (0..shapes.len())
            .flat_map(|i| (0..classes.len()).map(move |j| (i, j)))
            .collect();
        let flat = exec.map(&cells, |&(i, j)| count_fixed(&bases[i], &reps[j]));
        let entries = flat.chunks(classes.len()).map(<[u64]>::to_vec).collect();
        Ok(CharacterTable {
            shapes,
            classes,
            entries,
        })
    }

    pub fn get(&self, shape: &Partition, class: &Partition) -> Option<u64> {
        let i = self.shapes.iter().position(|s| s == shape)?;
        let j = self.classes.iter().position(|c| c == class)?;
        Some(self.entries[i][j])
    }
}

/// The functional `φ = Σ t(T) T̂` assigning each basis tabloid its
/// turnaround time.
pub fn turnaround_functional(
    shape: &Partition,
    g: &TaskGraph,
    s: &ProcessorSystem,
) -> Result<Functional> {
    turnaround_functional_with(Execution::default(), shape, g, s)
}

pub fn turnaround_functional_with(
    exec: Execution,
    shape: &Partition,
    g: &TaskGraph,
    s: &ProcessorSystem,
) -> Result<Functional> {
    let basis = enumerate_standard_tabloids(shape)?;
    check_row_rates(shape, s)?;
    let times = exec.try_map(&basis, |t| {
        evaluate(&t.assignment_set(), g, s).map(|sch| sch.turnaround())
    })?;
    Functional::from_terms(shape, basis.into_iter().zip(times))
}

/// A dense real matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    order: usize,
    entries: Vec<f64>,
}

impl SquareMatrix {
    pub fn new(order: usize, entries: Vec<f64>) -> Result<Self> {
        if order == 0 {
            return Err(Error::invalid("matrix order must be positive"));
        }
        if entries.len() != order * order {
            return Err(Error::invalid(format!(
                "{} entries for a {order}x{order} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("matrix entries must be finite"));
        }
        Ok(SquareMatrix { order, entries })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let order = rows.len();
        if rows.iter().any(|r| r.len() != order) {
            return Err(Error::invalid(
                "matrix rows must all have length equal to the row count",
            ));
        }
        SquareMatrix::new(order, rows.concat())
    }

    pub fn identity(order: usize) -> Self {
        SquareMatrix::diagonal(&vec![1.0; order])
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let n = d.len();
        let mut entries = vec![0.0; n * n];
        for (i, &x) in d.iter().enumerate() {
            entries[i * n + i] = x;
        }
        SquareMatrix { order: n, entries }
    }

    /// Matrix of `v ↦ act(p, v)` in canonical coordinates: column `j` is
    /// the coordinate vector of `p · e_j`.
    pub fn of_action(p: &Permutation, shape: &Partition) -> Result<Self> {
        let basis = enumerate_standard_tabloids(shape)?;
        let n = basis.len();
        let mut entries = vec![0.0; n * n];
        for (j, t) in basis.iter().enumerate() {
            let image = StandardAssignmentTabloid::new(t.tabloid().act(p)?);
            let i = basis
                .binary_search(&image)
                .expect("action is closed on the basis");
            entries[i * n + j] = 1.0;
        }
        Ok(SquareMatrix { order: n, entries })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.order + j]
    }

    pub fn transpose(&self) -> Self {
        let n = self.order;
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.entries[i * n + j];
            }
        }
        SquareMatrix { order: n, entries }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.order);
        self.entries
            .chunks(self.order)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Gauss-Jordan elimination with partial pivoting.
    ///
    /// The matrix counts as singular when `|det| < 1e-12 · Π ‖row_i‖`; the
    /// right-hand side is Hadamard's bound, so the test is scale invariant.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.order;
        let hadamard: f64 = self
            .entries
            .chunks(n)
            .map(|r| r.iter().map(|x| x * x).sum::<f64>().sqrt())
            .product();
        if hadamard == 0.0 {
            return Err(Error::SingularMatrix);
        }
        let mut a = self.entries.clone();
        let mut inv = SquareMatrix::identity(n).entries;
        let mut det = 1.0;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[x * n + col].abs().total_cmp(&a[y * n + col].abs()))
                .expect("non-empty range");
            if a[pivot * n + col] == 0.0 {
                return Err(Error::SingularMatrix);
            }
            if pivot != col {
                for k in 0..n {
                    a.swap(pivot * n + k, col * n + k);
                    inv.swap(pivot * n + k, col * n + k);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for k in 0..n {
                a[col * n + k] /= p;
                inv[col * n + k] /= p;
            }
            for r in (0..n).filter(|&r| r != col) {
                let factor = a[r * n + col];
                if factor != 0.0 {
                    for k in 0..n {
                        a[r * n + k] -= factor * a[col * n + k];
                        inv[r * n + k] -= factor * inv[col * n + k];
                    }
                }
            }
        }
        if det.abs() < 1e-12 * hadamard {
            return Err(Error::SingularMatrix);
        }
        Ok(SquareMatrix {
            order: n,
            entries: inv,
        })
    }
}

fn check_order(m: &SquareMatrix, shape: &Partition) -> Result<()> {
    let dim = dimension(shape);
    if m.order as u64 != dim {
        return Err(Error::invalid(format!(
            "matrix of order {} on a space of dimension {dim}",
            m.order
        )));
    }
    Ok(())
}

/// `v' = M v` in canonical coordinates.
pub fn apply_matrix(m: &SquareMatrix, v: &KVector) -> Result<KVector> {
    check_order(m, v.shape())?;
    KVector::from_coordinates(v.shape(), &m.mul_vec(&v.coordinates()?))
}

/// The contragredient action `f' = (M⁻¹)ᵀ f`, so that
/// `⟨f', M v⟩ = ⟨f, v⟩`.
pub fn dual_transform(m: &SquareMatrix, f: &Functional) -> Result<Functional> {
    check_order(m, f.shape())?;
    let dual = m.inverse()?.transpose();
    Functional::from_coordinates(f.shape(), &dual.mul_vec(&f.coordinates()?))
}
