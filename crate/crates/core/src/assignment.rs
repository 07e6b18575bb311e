//! Task, processor and assignment tableaux; standard assignment tabloids;
//! generalized (n-task-m-processor) assignment tableaux; and the text
//! encoding of tabloids and tableaux as `Y…`/`y…` terms.
//!
//! An assignment tableau pairs a task tableau with a processor tableau of
//! the same shape: the task in cell `(i, j)` runs on the processor in cell
//! `(i, j)`. In *standard* form the processor tableau is the sequential
//! filling `1..n`, so the task tableau alone determines the assignment, and
//! the task at row-major position `k` runs on processor `k + 1`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::perm::next_permutation;
use crate::tableau::{check_bijective, shape_of_rows, Tableau, Tabloid};
use crate::DEFAULT_ENUMERATION_BOUND;

/// A tableau whose entries are task IDs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TaskTableau(Tableau);

/// A tableau whose entries are processor IDs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProcessorTableau(Tableau);

macro_rules! tableau_newtype {
    ($ty:ident) => {
        impl $ty {
            pub fn new(tableau: Tableau) -> Self {
                $ty(tableau)
            }

            pub fn from_rows(rows: Vec<Vec<u32>>) -> Result<Self> {
                Tableau::from_rows(rows).map($ty)
            }

            pub fn standard(shape: &Partition) -> Self {
                $ty(Tableau::standard(shape))
            }

            pub fn tableau(&self) -> &Tableau {
                &self.0
            }

            pub fn shape(&self) -> &Partition {
                self.0.shape()
            }

            pub fn is_standard(&self) -> bool {
                self.0.is_standard()
            }
        }

        impl From<Tableau> for $ty {
            fn from(t: Tableau) -> Self {
                $ty(t)
            }
        }
    };
}

tableau_newtype!(TaskTableau);
tableau_newtype!(ProcessorTableau);

/// A bijective task → processor map on `{1..n}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AssignmentSet {
    proc_of: BTreeMap<u32, u32>,
}

impl AssignmentSet {
    /// Collects `(task, processor)` pairs; both coordinates must run over
    /// `{1..n}` exactly once.
    pub fn new(pairs: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut proc_of = BTreeMap::new();
        for (task, proc) in pairs {
            if proc_of.insert(task, proc).is_some() {
                return Err(Error::invalid(format!("task {task} is assigned twice")));
            }
        }
        let n = proc_of.len() as u32;
        if n == 0 {
            return Err(Error::invalid("empty assignment"));
        }
        if proc_of.keys().next() != Some(&1) || proc_of.keys().next_back() != Some(&n) {
            return Err(Error::invalid(format!("tasks are not exactly 1..={n}")));
        }
        let procs: Vec<u32> = proc_of.values().copied().collect();
        check_bijective(&procs)
            .map_err(|_| Error::invalid("assignment is not bijective on processors"))?;
        Ok(AssignmentSet { proc_of })
    }

    /// The assignment of a standard tableau: the task at row-major position
    /// `k` goes to processor `k + 1`.
    fn of_standard_entries(entries: &[u32]) -> Self {
        AssignmentSet {
            proc_of: entries
                .iter()
                .enumerate()
                .map(|(k, &task)| (task, k as u32 + 1))
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.proc_of.len()
    }

    pub fn processor_of(&self, task: u32) -> Option<u32> {
        self.proc_of.get(&task).copied()
    }

    /// `(task, processor)` pairs in ascending task order.
    pub fn pairs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.proc_of.iter().map(|(&t, &p)| (t, p))
    }
}

impl fmt::Display for AssignmentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.pairs().map(|(t, p)| format!("({t}↦{p})")).collect();
        write!(f, "{{{}}}", body.join(", "))
    }
}

/// A validated (task tableau, processor tableau) pair of equal shape.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AssignmentTableau {
    task: TaskTableau,
    proc: ProcessorTableau,
}

impl AssignmentTableau {
    pub fn new(task: TaskTableau, proc: ProcessorTableau) -> Result<Self> {
        if task.shape() != proc.shape() {
            return Err(Error::Shape(format!(
                "task tableau has shape {} but processor tableau has shape {}",
                task.shape(),
                proc.shape()
            )));
        }
        Ok(AssignmentTableau { task, proc })
    }

    /// Validates both fillings from raw rows.
    pub fn from_rows(task_rows: Vec<Vec<u32>>, proc_rows: Vec<Vec<u32>>) -> Result<Self> {
        AssignmentTableau::new(
            TaskTableau::from_rows(task_rows)?,
            ProcessorTableau::from_rows(proc_rows)?,
        )
    }

    /// The standard assignment tableau with the given task tableau.
    pub fn standard(task: TaskTableau) -> Self {
        let proc = ProcessorTableau::standard(task.shape());
        AssignmentTableau { task, proc }
    }

    pub fn task(&self) -> &TaskTableau {
        &self.task
    }

    pub fn processor(&self) -> &ProcessorTableau {
        &self.proc
    }

    pub fn shape(&self) -> &Partition {
        self.task.shape()
    }

    pub fn is_standard(&self) -> bool {
        self.proc.is_standard()
    }

    pub fn assignment_set(&self) -> AssignmentSet {
        AssignmentSet {
            proc_of: self
                .task
                .tableau()
                .entries()
                .iter()
                .zip(self.proc.tableau().entries())
                .map(|(&t, &p)| (t, p))
                .collect(),
        }
    }

    /// The equivalent tableau whose processor tableau is the standard
    /// filling: each task moves to the cell its processor occupies in the
    /// standard tableau.
    pub fn to_standard(&self) -> AssignmentTableau {
        let mut tasks = vec![0u32; self.shape().n()];
        for (&t, &p) in self
            .task
            .tableau()
            .entries()
            .iter()
            .zip(self.proc.tableau().entries())
        {
            tasks[p as usize - 1] = t;
        }
        let task = Tableau::new(self.shape().clone(), tasks).expect("a relabelled bijection");
        AssignmentTableau::standard(TaskTableau(task))
    }

    /// The standard assignment tabloid containing this assignment, treating
    /// the rows of the *standard* processor tableau as equal-rate groups.
    pub fn standard_tabloid(&self) -> StandardAssignmentTabloid {
        StandardAssignmentTabloid(self.to_standard().task.tableau().canonicalize())
    }
}

/// A standard assignment tabloid `{t}`: the processor tableau is the
/// sequential filling and the order of tasks within a row is irrelevant.
///
/// Ordering follows the canonical key (row-major entries, numerically).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StandardAssignmentTabloid(Tabloid);

impl StandardAssignmentTabloid {
    pub fn new(task_rows: Tabloid) -> Self {
        StandardAssignmentTabloid(task_rows)
    }

    pub fn from_rows(rows: Vec<Vec<u32>>) -> Result<Self> {
        Tabloid::from_rows(rows).map(StandardAssignmentTabloid)
    }

    /// Decodes a `Y…` term.
    pub fn parse(term: &str, shape: &Partition) -> Result<Self> {
        match decode(term, shape)? {
            Term::Tabloid(t) => Ok(t),
            Term::Tableau(_) => Err(Error::parse(format!(
                "{term:?} is a tableau term, expected Y…"
            ))),
        }
    }

    pub fn tabloid(&self) -> &Tabloid {
        &self.0
    }

    pub fn shape(&self) -> &Partition {
        self.0.shape()
    }

    /// The canonical member: sorted task rows over the standard processor
    /// tableau.
    pub fn representative(&self) -> AssignmentTableau {
        AssignmentTableau::standard(TaskTableau(self.0.representative()))
    }

    /// Assignment of the canonical member.
    pub fn assignment_set(&self) -> AssignmentSet {
        AssignmentSet::of_standard_entries(self.0.entries())
    }

    /// Every concrete assignment in the class (all within-row rearrangements
    /// of the task rows), with their count `λ_1! λ_2! ⋯`.
    pub fn assignments(&self) -> Result<(u64, Vec<AssignmentSet>)> {
        let n = self.shape().n();
        if n > DEFAULT_ENUMERATION_BOUND {
            return Err(Error::Capacity {
                n,
                bound: DEFAULT_ENUMERATION_BOUND,
            });
        }
        let count = self.shape().young_subgroup_order();
        let mut out = Vec::with_capacity(count as usize);
        let mut rows = self.0.to_rows();
        fn go(rows: &mut [Vec<u32>], depth: usize, out: &mut Vec<AssignmentSet>) {
            if depth == rows.len() {
                let flat: Vec<u32> = rows.iter().flatten().copied().collect();
                out.push(AssignmentSet::of_standard_entries(&flat));
                return;
            }
            // rows start sorted, and next_permutation leaves them sorted again
            loop {
                go(rows, depth + 1, out);
                if !next_permutation(&mut rows[depth]) {
                    break;
                }
            }
        }
        go(&mut rows, 0, &mut out);
        debug_assert_eq!(out.len() as u64, count);
        Ok((count, out))
    }

    /// The `Y…` term for this tabloid.
    pub fn encode(&self) -> String {
        encode_entries('Y', self.0.entries())
    }
}

impl fmt::Display for StandardAssignmentTabloid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

/// The standard assignment tabloid of a task tableau paired with a processor
/// tabloid whose rows are equal-rate groups.
///
/// Since the rows of a processor tabloid can be reordered freely, the class
/// `(t, {p})` equals `({t}, p)`; it is standard exactly when `{p}` contains
/// the standard processor tableau, i.e. its rows are `{1..λ_1}`,
/// `{λ_1+1..λ_1+λ_2}`, ….
pub fn canonical_assignment_tabloid(
    task: &TaskTableau,
    proc_rows: &Tabloid,
) -> Result<StandardAssignmentTabloid> {
    if task.shape() != proc_rows.shape() {
        return Err(Error::Shape(format!(
            "task tableau has shape {} but processor tabloid has shape {}",
            task.shape(),
            proc_rows.shape()
        )));
    }
    if *proc_rows != Tabloid::standard(proc_rows.shape()) {
        return Err(Error::invalid(format!(
            "processor tabloid {proc_rows} does not contain the standard processor tableau"
        )));
    }
    Ok(StandardAssignmentTabloid(task.tableau().canonicalize()))
}

/// Every standard assignment tabloid of `shape` in canonical key order.
pub fn enumerate_standard_tabloids(shape: &Partition) -> Result<Vec<StandardAssignmentTabloid>> {
    enumerate_standard_tabloids_within(shape, DEFAULT_ENUMERATION_BOUND)
}

pub fn enumerate_standard_tabloids_within(
    shape: &Partition,
    bound: usize,
) -> Result<Vec<StandardAssignmentTabloid>> {
    Ok(crate::tableau::enumerate_tabloids_within(shape, bound)?
        .into_iter()
        .map(StandardAssignmentTabloid)
        .collect())
}

/// A task tableau paired with a processor filling that may repeat
/// processors (n tasks on m ≤ n processors).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneralizedAssignmentTableau {
    task: TaskTableau,
    procs: Vec<u32>,
    processors: u32,
}

impl GeneralizedAssignmentTableau {
    /// `proc_rows` must have the task tableau's shape and entries in
    /// `1..=processors`.
    pub fn new(task: TaskTableau, proc_rows: Vec<Vec<u32>>, processors: u32) -> Result<Self> {
        let shape = shape_of_rows(&proc_rows)?;
        if &shape != task.shape() {
            return Err(Error::Shape(format!(
                "task tableau has shape {} but processor filling has shape {shape}",
                task.shape()
            )));
        }
        let procs: Vec<u32> = proc_rows.into_iter().flatten().collect();
        if let Some(bad) = procs.iter().find(|&&p| p == 0 || p > processors) {
            return Err(Error::InvalidFilling(format!(
                "processor {bad} is outside 1..={processors}"
            )));
        }
        Ok(GeneralizedAssignmentTableau {
            task,
            procs,
            processors,
        })
    }

    pub fn task(&self) -> &TaskTableau {
        &self.task
    }

    pub fn processors(&self) -> u32 {
        self.processors
    }

    pub fn processor_rows(&self) -> Vec<Vec<u32>> {
        self.task
            .shape()
            .row_ranges()
            .map(|r| self.procs[r].to_vec())
            .collect()
    }

    /// Standard when the task tableau is the sequential filling.
    pub fn is_standard(&self) -> bool {
        self.task.is_standard()
    }

    /// Task → processor map (not injective in general).
    pub fn assignment(&self) -> BTreeMap<u32, u32> {
        self.task
            .tableau()
            .entries()
            .iter()
            .copied()
            .zip(self.procs.iter().copied())
            .collect()
    }
}

/// Whether a term denotes a tabloid (`Y`) or a tableau (`y`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TermKind {
    Tabloid,
    Tableau,
}

impl TermKind {
    pub fn prefix(self) -> char {
        match self {
            TermKind::Tabloid => 'Y',
            TermKind::Tableau => 'y',
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TermKind::Tabloid => "tabloid",
            TermKind::Tableau => "tableau",
        }
    }
}

impl std::str::FromStr for TermKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tabloid" => Ok(TermKind::Tabloid),
            "tableau" => Ok(TermKind::Tableau),
            other => Err(Error::parse(format!("unknown kind {other:?}"))),
        }
    }
}

/// A decoded term: a standard assignment tabloid or a (standard assignment)
/// tableau. Displays as its encoding.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Tabloid(StandardAssignmentTabloid),
    Tableau(Tableau),
}

impl Term {
    pub fn kind(&self) -> TermKind {
        match self {
            Term::Tabloid(_) => TermKind::Tabloid,
            Term::Tableau(_) => TermKind::Tableau,
        }
    }

    pub fn shape(&self) -> &Partition {
        match self {
            Term::Tabloid(t) => t.shape(),
            Term::Tableau(t) => t.shape(),
        }
    }

    pub fn encode(&self) -> String {
        match self {
            Term::Tabloid(t) => t.encode(),
            Term::Tableau(t) => encode_tableau(t),
        }
    }

    /// Relabels tasks: `π` applied to every entry (re-sorting tabloid rows).
    pub fn act(&self, p: &crate::perm::Permutation) -> Result<Term> {
        Ok(match self {
            Term::Tabloid(t) => Term::Tabloid(StandardAssignmentTabloid(t.tabloid().act(p)?)),
            Term::Tableau(t) => Term::Tableau(t.act(p)?),
        })
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

fn encode_entries(prefix: char, entries: &[u32]) -> String {
    let mut s = String::with_capacity(1 + entries.len() * 3);
    s.push(prefix);
    for (i, x) in entries.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str(&x.to_string());
    }
    s
}

/// The `y…` term for a tableau (row-major entries).
pub fn encode_tableau(t: &Tableau) -> String {
    encode_entries('y', t.entries())
}

/// Decodes `Y…` or `y…` under an out-of-band `shape`.
///
/// Grammar: `("Y"|"y") int ("," int)*` with `int = [1-9][0-9]*`; no
/// whitespace. `Y` terms are canonicalized, so `Y2,1,3,4` and `Y1,2,3,4`
/// decode to the same tabloid.
pub fn decode(term: &str, shape: &Partition) -> Result<Term> {
    let bad = |why: &str| Error::parse(format!("bad term {term:?}: {why}"));
    let mut chars = term.chars();
    let kind = match chars.next() {
        Some('Y') => TermKind::Tabloid,
        Some('y') => TermKind::Tableau,
        _ => return Err(bad("expected prefix Y or y")),
    };
    let entries = chars
        .as_str()
        .split(',')
        .map(|t| {
            let digits_ok =
                !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit()) && !t.starts_with('0');
            if !digits_ok {
                return Err(bad(
                    "entries must be positive integers without leading zeros",
                ));
            }
            t.parse::<u32>().map_err(|_| bad("entry out of range"))
        })
        .collect::<Result<Vec<u32>>>()?;
    if entries.len() != shape.n() {
        return Err(bad(&format!("{} entries for shape {shape}", entries.len())));
    }
    let tableau = Tableau::new(shape.clone(), entries).map_err(|e| bad(&e.to_string()))?;
    Ok(match kind {
        TermKind::Tabloid => Term::Tabloid(StandardAssignmentTabloid(tableau.canonicalize())),
        TermKind::Tableau => Term::Tableau(tableau),
    })
}
