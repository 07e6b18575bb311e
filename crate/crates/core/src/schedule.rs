//! Task graphs, heterogeneous processor systems and deterministic evaluation
//! of n-task-n-processor schedules.
//!
//! With one task per processor there is no queueing decision to make: every
//! task starts at its data ready time, the latest predecessor finish time
//! plus the communication cost from that predecessor. Evaluation therefore
//! walks the graph once in topological order.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};
use std::fmt;
use std::str::FromStr;

use crate::assignment::{enumerate_standard_tabloids, AssignmentSet, StandardAssignmentTabloid};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::partition::Partition;
use crate::space::KVector;

/// A weighted DAG on tasks `1..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskGraph {
    requirements: Vec<f64>,
    edges: BTreeMap<(u32, u32), f64>,
    preds: Vec<Vec<(u32, f64)>>,
    order: Vec<u32>,
}

impl TaskGraph {
    /// `requirements[i]` is the computation requirement of task `i + 1`;
    /// edges are `(src, dst, data)`.
    pub fn new(
        requirements: Vec<f64>,
        edges: impl IntoIterator<Item = (u32, u32, f64)>,
    ) -> Result<Self> {
        let n = requirements.len();
        if n == 0 {
            return Err(Error::invalid("a task graph needs at least one task"));
        }
        if let Some(i) = requirements
            .iter()
            .position(|r| !(r.is_finite() && *r > 0.0))
        {
            return Err(Error::invalid(format!(
                "task {} has non-positive requirement {}",
                i + 1,
                requirements[i]
            )));
        }
        let mut edge_map = BTreeMap::new();
        let mut preds = vec![Vec::new(); n];
        let mut succs = vec![Vec::new(); n];
        for (src, dst, data) in edges {
            for id in [src, dst] {
                if id == 0 || id as usize > n {
                    return Err(Error::invalid(format!(
                        "edge {src}->{dst} names unknown task {id}"
                    )));
                }
            }
            if !(data.is_finite() && data >= 0.0) {
                return Err(Error::invalid(format!(
                    "edge {src}->{dst} has invalid data {data}"
                )));
            }
            if src == dst {
                return Err(Error::Cycle(src));
            }
            if edge_map.insert((src, dst), data).is_some() {
                return Err(Error::invalid(format!("duplicate edge {src}->{dst}")));
            }
            preds[dst as usize - 1].push((src, data));
            succs[src as usize - 1].push(dst);
        }

        // Kahn's algorithm, smallest ready task first.
        let mut indegree: Vec<usize> = preds.iter().map(Vec::len).collect();
        let mut ready: BinaryHeap<Reverse<u32>> = (1..=n as u32)
            .filter(|&v| indegree[v as usize - 1] == 0)
            .map(Reverse)
            .collect();
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse(v)) = ready.pop() {
            order.push(v);
            for &w in &succs[v as usize - 1] {
                let d = &mut indegree[w as usize - 1];
                *d -= 1;
                if *d == 0 {
                    ready.push(Reverse(w));
                }
            }
        }
        if order.len() < n {
            let stuck = (1..=n as u32)
                .find(|&v| indegree[v as usize - 1] > 0)
                .unwrap_or(1);
            return Err(Error::Cycle(stuck));
        }
        Ok(TaskGraph {
            requirements,
            edges: edge_map,
            preds,
            order,
        })
    }

    /// Parses the line format
    ///
    /// ```text
    /// # comment
    /// task <id> <requirement>
    /// edge <src> <dst> <data>
    /// ```
    ///
    /// Task IDs must be exactly `1..=n` (in any order).
    pub fn parse(text: &str) -> Result<Self> {
        let mut reqs: BTreeMap<u32, f64> = BTreeMap::new();
        let mut edges = Vec::new();
        for (lineno, line) in content_lines(text) {
            let fields: Vec<&str> = line.split_whitespace().collect();
            let err = |why: &str| Error::parse(format!("line {lineno}: {why}: {line:?}"));
            match fields.as_slice() {
                ["task", id, req] => {
                    let id = parse_id(id).ok_or_else(|| err("bad task id"))?;
                    let req = parse_real(req).ok_or_else(|| err("bad requirement"))?;
                    if req <= 0.0 {
                        return Err(err("requirement must be positive"));
                    }
                    if reqs.insert(id, req).is_some() {
                        return Err(err("duplicate task"));
                    }
                }
                ["edge", src, dst, data] => {
                    let src = parse_id(src).ok_or_else(|| err("bad source id"))?;
                    let dst = parse_id(dst).ok_or_else(|| err("bad target id"))?;
                    let data = parse_real(data).ok_or_else(|| err("bad data size"))?;
                    if data < 0.0 {
                        return Err(err("data size must be non-negative"));
                    }
                    edges.push((lineno, src, dst, data));
                }
                _ => return Err(err("expected `task <id> <r>` or `edge <src> <dst> <d>`")),
            }
        }
        let n = reqs.len() as u32;
        if n == 0 {
            return Err(Error::parse("task graph has no tasks"));
        }
        if reqs.keys().next_back() != Some(&n) {
            return Err(Error::parse(format!("task IDs must be exactly 1..={n}")));
        }
        let mut seen = std::collections::BTreeSet::new();
        for &(lineno, src, dst, _) in &edges {
            if src > n || dst > n {
                return Err(Error::parse(format!(
                    "line {lineno}: edge {src}->{dst} names an unknown task"
                )));
            }
            if !seen.insert((src, dst)) {
                return Err(Error::parse(format!(
                    "line {lineno}: duplicate edge {src}->{dst}"
                )));
            }
        }
        TaskGraph::new(
            reqs.into_values().collect(),
            edges.into_iter().map(|(_, s, d, w)| (s, d, w)),
        )
        .map_err(|e| match e {
            Error::InvalidArgument(msg) => Error::Parse(msg),
            other => other,
        })
    }

    pub fn n(&self) -> usize {
        self.requirements.len()
    }

    pub fn requirement(&self, task: u32) -> Option<f64> {
        self.requirements
            .get((task as usize).wrapping_sub(1))
            .copied()
    }

    /// Communication requirement of the edge `src -> dst`, if present.
    pub fn data(&self, src: u32, dst: u32) -> Option<f64> {
        self.edges.get(&(src, dst)).copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32, f64)> + '_ {
        self.edges.iter().map(|(&(s, d), &w)| (s, d, w))
    }

    pub fn predecessors(&self, task: u32) -> &[(u32, f64)] {
        &self.preds[task as usize - 1]
    }

    /// Topological order, smallest available task first.
    pub fn topological_order(&self) -> &[u32] {
        &self.order
    }

    pub fn entry_tasks(&self) -> Vec<u32> {
        (1..=self.n() as u32)
            .filter(|&v| self.preds[v as usize - 1].is_empty())
            .collect()
    }

    pub fn exit_tasks(&self) -> Vec<u32> {
        (1..=self.n() as u32)
            .filter(|&v| !self.edges.keys().any(|&(s, _)| s == v))
            .collect()
    }
}

/// How computation costs are obtained.
#[derive(Debug, Clone, PartialEq)]
pub enum CostModel {
    /// `ω(v, p) = r(v) / e(p)`; `rates[p - 1]` is `e(p)`.
    Consistent { rates: Vec<f64> },
    /// `ω(v, p) = costs[v - 1][p - 1]`.
    Inconsistent { costs: Vec<Vec<f64>> },
}

/// A fully connected heterogeneous system with a uniform link rate.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessorSystem {
    model: CostModel,
    link_rate: f64,
}

impl ProcessorSystem {
    pub fn consistent(rates: Vec<f64>, link_rate: f64) -> Result<Self> {
        if rates.is_empty() {
            return Err(Error::invalid(
                "a processor system needs at least one processor",
            ));
        }
        if let Some(i) = rates.iter().position(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(Error::invalid(format!(
                "processor {} has non-positive rate",
                i + 1
            )));
        }
        check_link(link_rate)?;
        Ok(ProcessorSystem {
            model: CostModel::Consistent { rates },
            link_rate,
        })
    }

    /// `costs[v - 1][p - 1]` is the cost of task `v` on processor `p`.
    pub fn inconsistent(costs: Vec<Vec<f64>>, link_rate: f64) -> Result<Self> {
        let m = costs.first().map(Vec::len).unwrap_or(0);
        if m == 0 {
            return Err(Error::invalid("cost matrix is empty"));
        }
        for (i, row) in costs.iter().enumerate() {
            if row.len() != m {
                return Err(Error::invalid(format!(
                    "cost matrix row {} has {} columns, expected {m}",
                    i + 1,
                    row.len()
                )));
            }
            if row.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
                return Err(Error::invalid(format!(
                    "cost matrix row {} has a non-positive cost",
                    i + 1
                )));
            }
        }
        check_link(link_rate)?;
        Ok(ProcessorSystem {
            model: CostModel::Inconsistent { costs },
            link_rate,
        })
    }

    /// Parses either
    ///
    /// ```text
    /// proc <id> <rate>
    /// link <rate>          # optional, defaults to 1
    /// ```
    ///
    /// or, when the first content line is `costmatrix`,
    ///
    /// ```text
    /// costmatrix
    /// row <task> <w1> <w2> … <wm>
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = content_lines(text).peekable();
        let matrix_mode = matches!(lines.peek(), Some((_, l)) if l.trim() == "costmatrix");
        if matrix_mode {
            lines.next();
        }
        let mut link = None;
        let mut rates: BTreeMap<u32, f64> = BTreeMap::new();
        let mut rows: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
        for (lineno, line) in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            let err = |why: &str| Error::parse(format!("line {lineno}: {why}: {line:?}"));
            match (matrix_mode, fields.as_slice()) {
                (_, ["link", rate]) => {
                    let rate = parse_real(rate).ok_or_else(|| err("bad link rate"))?;
                    if link.replace(rate).is_some() {
                        return Err(err("link rate given twice"));
                    }
                }
                (false, ["proc", id, rate]) => {
                    let id = parse_id(id).ok_or_else(|| err("bad processor id"))?;
                    let rate = parse_real(rate).ok_or_else(|| err("bad rate"))?;
                    if rates.insert(id, rate).is_some() {
                        return Err(err("duplicate processor"));
                    }
                }
                (true, ["row", task, costs @ ..]) if !costs.is_empty() => {
                    let task = parse_id(task).ok_or_else(|| err("bad task id"))?;
                    let costs = costs
                        .iter()
                        .map(|w| parse_real(w).ok_or_else(|| err("bad cost")))
                        .collect::<Result<Vec<f64>>>()?;
                    if rows.insert(task, costs).is_some() {
                        return Err(err("duplicate row"));
                    }
                }
                (false, _) => return Err(err("expected `proc <id> <rate>` or `link <rate>`")),
                (true, _) => return Err(err("expected `row <task> <w1> … <wm>` or `link <rate>`")),
            }
        }
        let link = link.unwrap_or(1.0);
        let to_parse = |e: Error| match e {
            Error::InvalidArgument(msg) => Error::Parse(msg),
            other => other,
        };
        if matrix_mode {
            let n = rows.len() as u32;
            if n == 0 || rows.keys().next_back() != Some(&n) {
                return Err(Error::parse(format!(
                    "cost matrix rows must be exactly 1..={n}"
                )));
            }
            ProcessorSystem::inconsistent(rows.into_values().collect(), link).map_err(to_parse)
        } else {
            let m = rates.len() as u32;
            if m == 0 || rates.keys().next_back() != Some(&m) {
                return Err(Error::parse(format!(
                    "processor IDs must be exactly 1..={m}"
                )));
            }
            ProcessorSystem::consistent(rates.into_values().collect(), link).map_err(to_parse)
        }
    }

    pub fn model(&self) -> &CostModel {
        &self.model
    }

    pub fn link_rate(&self) -> f64 {
        self.link_rate
    }

    pub fn processors(&self) -> usize {
        match &self.model {
            CostModel::Consistent { rates } => rates.len(),
            CostModel::Inconsistent { costs } => costs[0].len(),
        }
    }

    pub fn is_consistent(&self) -> bool {
        matches!(self.model, CostModel::Consistent { .. })
    }

    /// Execution rate of `proc` in consistent mode.
    pub fn rate(&self, proc: u32) -> Option<f64> {
        match &self.model {
            CostModel::Consistent { rates } => rates.get((proc as usize).wrapping_sub(1)).copied(),
            CostModel::Inconsistent { .. } => None,
        }
    }

    /// The same system with every execution rate multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        match &self.model {
            CostModel::Consistent { rates } => ProcessorSystem::consistent(
                rates.iter().map(|r| r * factor).collect(),
                self.link_rate,
            ),
            CostModel::Inconsistent { costs } => ProcessorSystem::inconsistent(
                costs
                    .iter()
                    .map(|row| row.iter().map(|w| w / factor).collect())
                    .collect(),
                self.link_rate,
            ),
        }
    }
}

fn check_link(rate: f64) -> Result<()> {
    if rate.is_finite() && rate > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "link rate must be positive, got {rate}"
        )))
    }
}

fn parse_id(s: &str) -> Option<u32> {
    s.parse::<u32>().ok().filter(|&x| x > 0)
}

fn parse_real(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|x| x.is_finite())
}

/// Non-blank, non-comment lines with their 1-based line numbers; accepts LF
/// and CRLF.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// `ω(v, p)`: `r(v)/e(p)` in consistent mode, `w_vp` otherwise.
pub fn computation_cost(g: &TaskGraph, s: &ProcessorSystem, task: u32, proc: u32) -> Result<f64> {
    let unknown = || Error::invalid(format!("unknown task {task} or processor {proc}"));
    match &s.model {
        CostModel::Consistent { rates } => {
            let r = g.requirement(task).ok_or_else(unknown)?;
            let e = rates
                .get((proc as usize).wrapping_sub(1))
                .ok_or_else(unknown)?;
            Ok(r / e)
        }
        CostModel::Inconsistent { costs } => {
            if task as usize > g.n() {
                return Err(unknown());
            }
            costs
                .get((task as usize).wrapping_sub(1))
                .and_then(|row| row.get((proc as usize).wrapping_sub(1)))
                .copied()
                .ok_or_else(unknown)
        }
    }
}

/// `c(v_i, v_j)`: `d(v_i, v_j) / t` across processors, `0` on the same one.
pub fn communication_cost(
    g: &TaskGraph,
    s: &ProcessorSystem,
    src: u32,
    dst: u32,
    src_proc: u32,
    dst_proc: u32,
) -> Result<f64> {
    let data = g
        .data(src, dst)
        .ok_or_else(|| Error::invalid(format!("{src}->{dst} is not an edge")))?;
    Ok(if src_proc == dst_proc {
        0.0
    } else {
        data / s.link_rate
    })
}

/// The evaluated schedule of one n-task-n-processor assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    proc_of: Vec<u32>,
    start: Vec<f64>,
    finish: Vec<f64>,
    exec: Vec<f64>,
    idle: Vec<f64>,
    turnaround: f64,
    utilization: Vec<f64>,
    average_utilization: f64,
}

impl Schedule {
    pub fn n(&self) -> usize {
        self.proc_of.len()
    }

    pub fn processor_of(&self, task: u32) -> u32 {
        self.proc_of[task as usize - 1]
    }

    pub fn start(&self, task: u32) -> f64 {
        self.start[task as usize - 1]
    }

    pub fn finish(&self, task: u32) -> f64 {
        self.finish[task as usize - 1]
    }

    /// `t_p^e`: busy time of `proc`.
    pub fn exec_time(&self, proc: u32) -> f64 {
        self.exec[proc as usize - 1]
    }

    /// `t_p^i`: idle time of `proc` before its task starts.
    pub fn idle_time(&self, proc: u32) -> f64 {
        self.idle[proc as usize - 1]
    }

    pub fn utilization(&self, proc: u32) -> f64 {
        self.utilization[proc as usize - 1]
    }

    /// `t(A) = max_p (t_p^e + t_p^i)`, the makespan.
    pub fn turnaround(&self) -> f64 {
        self.turnaround
    }

    /// `u(A) = (Σ_p u_p) / m`.
    pub fn average_utilization(&self) -> f64 {
        self.average_utilization
    }
}

/// Evaluates a concrete bijective assignment.
pub fn evaluate(
    assignment: &AssignmentSet,
    g: &TaskGraph,
    s: &ProcessorSystem,
) -> Result<Schedule> {
    let n = g.n();
    if s.processors() != n || assignment.n() != n {
        return Err(Error::invalid(format!(
            "need as many tasks as processors: graph has {n} tasks, system has {} processors, assignment covers {} tasks",
            s.processors(),
            assignment.n()
        )));
    }
    if let CostModel::Inconsistent { costs } = &s.model {
        if costs.len() != n {
            return Err(Error::invalid(format!(
                "cost matrix has {} rows for {n} tasks",
                costs.len()
            )));
        }
    }
    let proc_of: Vec<u32> = (1..=n as u32)
        .map(|v| assignment.processor_of(v).expect("assignment covers 1..=n"))
        .collect();
    let cost: Vec<f64> = (1..=n as u32)
        .map(|v| computation_cost(g, s, v, proc_of[v as usize - 1]))
        .collect::<Result<_>>()?;

    let mut start = vec![0.0; n];
    let mut finish = vec![0.0; n];
    for &v in g.topological_order() {
        let vi = v as usize - 1;
        let ready = g
            .predecessors(v)
            .iter()
            .map(|&(u, data)| {
                let ui = u as usize - 1;
                let comm = if proc_of[ui] == proc_of[vi] {
                    0.0
                } else {
                    data / s.link_rate
                };
                finish[ui] + comm
            })
            .fold(0.0, f64::max);
        start[vi] = ready;
        finish[vi] = ready + cost[vi];
    }

    let mut exec = vec![0.0; n];
    let mut idle = vec![0.0; n];
    for v in 0..n {
        let p = proc_of[v] as usize - 1;
        exec[p] = cost[v];
        idle[p] = start[v];
    }
    let turnaround = (0..n).map(|p| exec[p] + idle[p]).fold(0.0, f64::max);
    let utilization: Vec<f64> = exec.iter().map(|e| e / turnaround).collect();
    // summed in task order, so that assignments differing only by swaps of
    // equal-rate processors produce bit-identical averages
    let average_utilization = cost.iter().map(|c| c / turnaround).sum::<f64>() / n as f64;

    Ok(Schedule {
        proc_of,
        start,
        finish,
        exec,
        idle,
        turnaround,
        utilization,
        average_utilization,
    })
}

/// Evaluates a standard assignment tabloid: every processor in a row of the
/// standard processor tableau must have the same rate, and the system must
/// be consistent, so that all members of the class share one schedule
/// profile.
pub fn evaluate_tabloid(
    tabloid: &StandardAssignmentTabloid,
    g: &TaskGraph,
    s: &ProcessorSystem,
) -> Result<Schedule> {
    check_row_rates(tabloid.shape(), s)?;
    evaluate(&tabloid.assignment_set(), g, s)
}

/// Rejects systems whose processors within one row of `shape` differ in rate.
pub fn check_row_rates(shape: &Partition, s: &ProcessorSystem) -> Result<()> {
    let CostModel::Consistent { rates } = &s.model else {
        return Err(Error::invalid(
            "tabloid-level evaluation needs a consistent (rate-based) system",
        ));
    };
    if rates.len() != shape.n() {
        return Err(Error::invalid(format!(
            "shape {shape} has {} cells but the system has {} processors",
            shape.n(),
            rates.len()
        )));
    }
    for r in shape.row_ranges() {
        let first = r.start;
        if let Some(k) = r.clone().find(|&k| rates[k] != rates[first]) {
            return Err(Error::RowRate {
                first: first as u32 + 1,
                second: k as u32 + 1,
            });
        }
    }
    Ok(())
}

/// Objective for [`optimize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    /// Minimise `t(A)`.
    Turnaround,
    /// Maximise `u(A)`.
    Utilization,
}

impl Metric {
    pub fn value(self, s: &Schedule) -> f64 {
        match self {
            Metric::Turnaround => s.turnaround(),
            Metric::Utilization => s.average_utilization(),
        }
    }

    fn improves(self, candidate: f64, best: f64) -> bool {
        match self {
            Metric::Turnaround => candidate < best,
            Metric::Utilization => candidate > best,
        }
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "turnaround" => Ok(Metric::Turnaround),
            "utilization" => Ok(Metric::Utilization),
            other => Err(Error::parse(format!("unknown metric {other:?}"))),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Turnaround => "turnaround",
            Metric::Utilization => "utilization",
        })
    }
}

/// Best tabloid found by [`optimize`].
#[derive(Debug, Clone, PartialEq)]
pub struct Optimum {
    pub tabloid: StandardAssignmentTabloid,
    pub value: f64,
}

/// Exhaustive search over the standard assignment tabloids of `shape`.
/// Ties go to the first tabloid in canonical key order.
pub fn optimize(
    g: &TaskGraph,
    s: &ProcessorSystem,
    shape: &Partition,
    metric: Metric,
) -> Result<Optimum> {
    optimize_with(Execution::default(), g, s, shape, metric)
}

pub fn optimize_with(
    exec: Execution,
    g: &TaskGraph,
    s: &ProcessorSystem,
    shape: &Partition,
    metric: Metric,
) -> Result<Optimum> {
    let tabloids = enumerate_standard_tabloids(shape)?;
    check_row_rates(shape, s)?;
    let values = exec.try_map(&tabloids, |t| {
        evaluate(&t.assignment_set(), g, s).map(|sch| metric.value(&sch))
    })?;
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if metric.improves(v, values[best]) {
            best = i;
        }
    }
    Ok(Optimum {
        tabloid: tabloids[best].clone(),
        value: values[best],
    })
}

/// Total and average turnaround of k consecutive copies described by a
/// k-assignments vector with non-negative integer coefficients.
pub fn k_copies_totals(
    v: &KVector,
    turnarounds: &BTreeMap<StandardAssignmentTabloid, f64>,
) -> Result<(f64, f64)> {
    let mut total = 0.0;
    let mut k = 0.0;
    for (t, c) in v.iter() {
        if c < 0.0 || c.fract() != 0.0 {
            return Err(Error::invalid(format!(
                "coefficient {c} of {t} is not a non-negative integer"
            )));
        }
        let time = turnarounds
            .get(t)
            .ok_or_else(|| Error::invalid(format!("no turnaround given for {t}")))?;
        total += c * time;
        k += c;
    }
    if k == 0.0 {
        return Err(Error::invalid("k-assignments vector has no copies (k = 0)"));
    }
    Ok((total, total / k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::partitions_of;
    use crate::perm::Permutation;
    use rand::{seq::SliceRandom, Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const CHAIN: &str =
        "task 1 1\ntask 2 2\ntask 3 3\ntask 4 4\nedge 1 2 0\nedge 2 3 0\nedge 3 4 0\n";

    fn chain_setup() -> (TaskGraph, ProcessorSystem) {
        (
            TaskGraph::parse(CHAIN).unwrap(),
            ProcessorSystem::consistent(vec![1.0, 1.0, 2.0, 2.0], 1.0).unwrap(),
        )
    }

    fn shape(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn tabloid(term: &str, sh: &Partition) -> StandardAssignmentTabloid {
        StandardAssignmentTabloid::parse(term, sh).unwrap()
    }

    /// Independent evaluator: finish times by memoised recursion over
    /// predecessors, no topological sort.
    fn oracle_turnaround(g: &TaskGraph, rates: &[f64], link: f64, proc_of: &[u32]) -> f64 {
        fn finish(
            v: u32,
            g: &TaskGraph,
            rates: &[f64],
            link: f64,
            proc_of: &[u32],
            memo: &mut Vec<Option<f64>>,
        ) -> f64 {
            if let Some(f) = memo[v as usize - 1] {
                return f;
            }
            let mut start: f64 = 0.0;
            for (u, d) in g
                .edges()
                .filter(|&(_, dst, _)| dst == v)
                .map(|(s, _, d)| (s, d))
            {
                let comm = if proc_of[u as usize - 1] == proc_of[v as usize - 1] {
                    0.0
                } else {
                    d / link
                };
                start = start.max(finish(u, g, rates, link, proc_of, memo) + comm);
            }
            let f = start + g.requirement(v).unwrap() / rates[proc_of[v as usize - 1] as usize - 1];
            memo[v as usize - 1] = Some(f);
            f
        }
        let mut memo = vec![None; g.n()];
        (1..=g.n() as u32)
            .map(|v| finish(v, g, rates, link, proc_of, &mut memo))
            .fold(0.0, f64::max)
    }

    pub(crate) fn random_dag(rng: &mut ChaCha8Rng, n: usize, zero_comm: bool) -> TaskGraph {
        let mut labels: Vec<u32> = (1..=n as u32).collect();
        labels.shuffle(rng);
        let reqs: Vec<f64> = (0..n).map(|_| rng.gen_range(1..=20) as f64).collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(0.35) {
                    let d = if zero_comm {
                        0.0
                    } else {
                        rng.gen_range(0..=10) as f64
                    };
                    edges.push((labels[i], labels[j], d));
                }
            }
        }
        TaskGraph::new(reqs, edges).unwrap()
    }

    #[test]
    fn parse_chain() {
        let g = TaskGraph::parse(CHAIN).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.topological_order(), &[1, 2, 3, 4]);
        assert_eq!(g.entry_tasks(), vec![1]);
        assert_eq!(g.exit_tasks(), vec![4]);
    }

    #[test]
    fn parse_errors() {
        let cyclic = format!("{CHAIN}edge 2 1 0\n");
        assert!(matches!(TaskGraph::parse(&cyclic), Err(Error::Cycle(_))));
        assert!(matches!(
            TaskGraph::parse("task 1 1\nedge 1 1 0"),
            Err(Error::Cycle(1))
        ));
        for bad in [
            "task 1 1\nedge 1 2 0",
            "task 1 1\ntask 1 2",
            "task 1 0",
            "task 1 -3",
            "task 2 1",
            "task 1 1\ntask 2 1\nedge 1 2 1\nedge 1 2 1",
            "task 1 1\ntask 2 1\nedge 1 2 -1",
            "job 1 1",
            "# only a comment",
        ] {
            assert!(
                matches!(TaskGraph::parse(bad), Err(Error::Parse(_))),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn single_node_graph() {
        let g = TaskGraph::parse("# lonely\r\ntask 1 4\r\n").unwrap();
        assert_eq!(g.entry_tasks(), vec![1]);
        assert_eq!(g.exit_tasks(), vec![1]);
        let s = ProcessorSystem::parse("proc 1 2").unwrap();
        let sch = evaluate(&AssignmentSet::new([(1, 1)]).unwrap(), &g, &s).unwrap();
        assert_eq!(sch.turnaround(), 2.0);
        assert_eq!(sch.utilization(1), 1.0);
        assert_eq!(sch.average_utilization(), 1.0);
    }

    #[test]
    fn parse_processor_files() {
        let s = ProcessorSystem::parse("proc 2 1\nproc 1 10\nlink 2.5\n").unwrap();
        assert_eq!(s.rate(1), Some(10.0));
        assert_eq!(s.link_rate(), 2.5);
        assert_eq!(ProcessorSystem::parse("proc 1 1").unwrap().link_rate(), 1.0);
        let m = ProcessorSystem::parse("# matrix\ncostmatrix\nrow 2 3 4\nrow 1 1 2\n").unwrap();
        assert!(!m.is_consistent());
        assert_eq!(m.processors(), 2);
        for bad in [
            "proc 1 0",
            "proc 2 1",
            "proc 1 1\nproc 1 2",
            "proc 1 1\nlink 0",
            "costmatrix\nrow 1 1\nrow 2 1 2",
            "costmatrix",
            "row 1 1 1",
            "proc 1 x",
        ] {
            assert!(
                matches!(ProcessorSystem::parse(bad), Err(Error::Parse(_))),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn cost_functions() {
        let g = TaskGraph::new(vec![10.0, 3.0], [(1, 2, 5.0)]).unwrap();
        let s = ProcessorSystem::consistent(vec![10.0, 2.0], 1.0).unwrap();
        assert_eq!(computation_cost(&g, &s, 1, 1).unwrap(), 1.0);
        assert_eq!(computation_cost(&g, &s, 2, 2).unwrap(), 1.5);
        assert!(computation_cost(&g, &s, 3, 1).is_err());
        assert!(computation_cost(&g, &s, 1, 3).is_err());
        assert_eq!(communication_cost(&g, &s, 1, 2, 1, 2).unwrap(), 5.0);
        assert_eq!(communication_cost(&g, &s, 1, 2, 2, 2).unwrap(), 0.0);
        assert!(communication_cost(&g, &s, 2, 1, 1, 2).is_err());
        let z = TaskGraph::new(vec![1.0, 1.0], [(1, 2, 0.0)]).unwrap();
        assert_eq!(communication_cost(&z, &s, 1, 2, 1, 2).unwrap(), 0.0);
        let m = ProcessorSystem::inconsistent(vec![vec![7.0, 8.0], vec![9.0, 0.5]], 1.0).unwrap();
        assert_eq!(computation_cost(&g, &m, 2, 2).unwrap(), 0.5);
    }

    #[test]
    fn chain_turnarounds() {
        let (g, s) = chain_setup();
        let sh = shape(&[2, 2]);
        let expected = [
            ("Y1,2,3,4", 6.5),
            ("Y1,3,2,4", 7.0),
            ("Y1,4,2,3", 7.5),
            ("Y2,3,1,4", 7.5),
            ("Y2,4,1,3", 8.0),
            ("Y3,4,1,2", 8.5),
        ];
        for (term, t) in expected {
            let sch = evaluate_tabloid(&tabloid(term, &sh), &g, &s).unwrap();
            assert!((sch.turnaround() - t).abs() < 1e-12, "{term}");
        }
        let best = optimize(&g, &s, &sh, Metric::Turnaround).unwrap();
        assert_eq!(best.tabloid.encode(), "Y1,2,3,4");
        assert_eq!(best.value, 6.5);
    }

    #[test]
    fn schedule_details_on_the_chain() {
        let (g, s) = chain_setup();
        let sch = evaluate_tabloid(&tabloid("Y1,2,3,4", &shape(&[2, 2])), &g, &s).unwrap();
        assert_eq!(sch.start(3), 3.0);
        assert_eq!(sch.finish(3), 4.5);
        assert_eq!(sch.idle_time(3), 3.0);
        assert_eq!(sch.exec_time(4), 2.0);
        let total_exec: f64 = (1..=4).map(|p| sch.exec_time(p)).sum();
        assert!((sch.average_utilization() - total_exec / 6.5 / 4.0).abs() < 1e-15);
    }

    #[test]
    fn evaluate_errors() {
        let (g, s) = chain_setup();
        let sh = shape(&[2, 2]);
        let mixed = ProcessorSystem::consistent(vec![1.0, 2.0, 2.0, 2.0], 1.0).unwrap();
        assert_eq!(
            evaluate_tabloid(&tabloid("Y1,2,3,4", &sh), &g, &mixed),
            Err(Error::RowRate {
                first: 1,
                second: 2
            })
        );
        let three = AssignmentSet::new([(1, 1), (2, 2), (3, 3)]).unwrap();
        assert!(matches!(
            evaluate(&three, &g, &s),
            Err(Error::InvalidArgument(_))
        ));
        let matrix = ProcessorSystem::inconsistent(vec![vec![1.0; 4]; 4], 1.0).unwrap();
        assert!(matches!(
            evaluate_tabloid(&tabloid("Y1,2,3,4", &sh), &g, &matrix),
            Err(Error::InvalidArgument(_))
        ));
        // explicit assignments are fine in cost-matrix mode
        let id = AssignmentSet::new((1..=4).map(|v| (v, v))).unwrap();
        assert_eq!(evaluate(&id, &g, &matrix).unwrap().turnaround(), 4.0);
    }

    #[test]
    fn communication_delays_start() {
        let g = TaskGraph::new(vec![10.0, 4.0], [(1, 2, 5.0)]).unwrap();
        let s = ProcessorSystem::consistent(vec![10.0, 2.0], 1.0).unwrap();
        let sch = evaluate(&AssignmentSet::new([(1, 1), (2, 2)]).unwrap(), &g, &s).unwrap();
        assert_eq!(sch.start(2), 6.0);
        assert_eq!(sch.turnaround(), 8.0);
        assert_eq!(sch.idle_time(2), 6.0);
    }

    #[test]
    fn optimize_single_row_and_capacity() {
        let (g, _) = chain_setup();
        let s = ProcessorSystem::consistent(vec![3.0; 4], 1.0).unwrap();
        let best = optimize(&g, &s, &shape(&[4]), Metric::Utilization).unwrap();
        assert_eq!(best.tabloid.encode(), "Y1,2,3,4");
        let big = TaskGraph::new(vec![1.0; 11], []).unwrap();
        let bs = ProcessorSystem::consistent(vec![1.0; 11], 1.0).unwrap();
        assert!(matches!(
            optimize(&big, &bs, &shape(&[11]), Metric::Turnaround),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn optimize_matches_brute_force_on_singleton_rows() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=5 {
            for _ in 0..20 {
                let g = random_dag(&mut rng, n, false);
                let rates: Vec<f64> = (0..n).map(|_| rng.gen_range(1..=5) as f64).collect();
                let s = ProcessorSystem::consistent(rates.clone(), 2.0).unwrap();
                let brute = Permutation::all(n)
                    .unwrap()
                    .iter()
                    .map(|p| oracle_turnaround(&g, &rates, 2.0, p.images()))
                    .fold(f64::INFINITY, f64::min);
                let best = optimize(
                    &g,
                    &s,
                    &Partition::single_column(n).unwrap(),
                    Metric::Turnaround,
                )
                .unwrap();
                assert!((best.value - brute).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g = random_dag(&mut rng, 6, false);
        let s = ProcessorSystem::consistent(vec![1.0, 1.0, 2.0, 2.0, 3.0, 4.0], 1.0).unwrap();
        let sh = shape(&[2, 2, 1, 1]);
        for metric in [Metric::Turnaround, Metric::Utilization] {
            assert_eq!(
                optimize_with(Execution::Sequential, &g, &s, &sh, metric).unwrap(),
                optimize_with(Execution::default(), &g, &s, &sh, metric).unwrap()
            );
        }
    }

    #[test]
    fn evaluation_matches_oracle_and_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.gen_range(1..=8);
            let g = random_dag(&mut rng, n, false);
            let rates: Vec<f64> = (0..n).map(|_| rng.gen_range(1..=9) as f64 / 2.0).collect();
            let s = ProcessorSystem::consistent(rates.clone(), 1.5).unwrap();
            let mut procs: Vec<u32> = (1..=n as u32).collect();
            procs.shuffle(&mut rng);
            let a = AssignmentSet::new((1..=n as u32).zip(procs.iter().copied())).unwrap();
            let sch = evaluate(&a, &g, &s).unwrap();
            assert_eq!(sch, evaluate(&a, &g, &s).unwrap());
            assert!((sch.turnaround() - oracle_turnaround(&g, &rates, 1.5, &procs)).abs() < 1e-9);
            for v in 1..=n as u32 {
                let p = sch.processor_of(v);
                let cost = computation_cost(&g, &s, v, p).unwrap();
                assert_eq!(sch.finish(v), sch.start(v) + cost);
                assert_eq!(sch.exec_time(p), cost);
                assert_eq!(sch.idle_time(p), sch.start(v));
                let drt = g
                    .predecessors(v)
                    .iter()
                    .map(|&(u, _)| {
                        sch.finish(u)
                            + communication_cost(&g, &s, u, v, sch.processor_of(u), p).unwrap()
                    })
                    .fold(0.0, f64::max);
                assert_eq!(sch.start(v), drt);
                assert!((0.0..=1.0).contains(&sch.utilization(p)));
            }
        }
    }

    #[test]
    fn class_members_share_turnaround_and_utilization() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let n = rng.gen_range(2..=6);
            let shapes = partitions_of(n).unwrap();
            let sh = shapes.choose(&mut rng).unwrap().clone();
            let mut rates = Vec::new();
            for &len in sh.parts() {
                let r = rng.gen_range(1..=7) as f64 / 3.0;
                rates.extend(std::iter::repeat_n(r, len));
            }
            let s = ProcessorSystem::consistent(rates, rng.gen_range(1..=3) as f64).unwrap();
            let g = random_dag(&mut rng, n, false);
            for t in enumerate_standard_tabloids(&sh).unwrap() {
                let reference = evaluate_tabloid(&t, &g, &s).unwrap();
                for member in t.assignments().unwrap().1 {
                    let sch = evaluate(&member, &g, &s).unwrap();
                    assert_eq!(sch.turnaround(), reference.turnaround());
                    assert_eq!(sch.average_utilization(), reference.average_utilization());
                }
            }
        }
    }

    #[test]
    fn scaling_rates_scales_turnaround() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let n = rng.gen_range(1..=7);
            let g = random_dag(&mut rng, n, true);
            let s = ProcessorSystem::consistent(
                (0..n).map(|_| rng.gen_range(1..=5) as f64).collect(),
                1.0,
            )
            .unwrap();
            let c = rng.gen_range(0.25..4.0);
            let a = AssignmentSet::new((1..=n as u32).map(|v| (v, v))).unwrap();
            let base = evaluate(&a, &g, &s).unwrap().turnaround();
            let scaled = evaluate(&a, &g, &s.scaled(c).unwrap())
                .unwrap()
                .turnaround();
            assert!(((scaled - base / c) / (base / c)).abs() < 1e-12);
        }
    }

    #[test]
    fn k_copies() {
        let sh = shape(&[2, 2]);
        let map: BTreeMap<_, _> = [
            ("Y1,2,3,4", 15.0),
            ("Y1,3,2,4", 23.0),
            ("Y1,4,2,3", 20.0),
            ("Y2,3,1,4", 23.0),
            ("Y2,4,1,3", 20.0),
            ("Y3,4,1,2", 28.0),
        ]
        .into_iter()
        .map(|(k, v)| (tabloid(k, &sh), v))
        .collect();
        let d1 = KVector::parse("Y1,3,2,4 + 2*Y1,4,2,3 + Y2,3,1,4 + Y3,4,1,2", &sh).unwrap();
        let (total, avg) = k_copies_totals(&d1, &map).unwrap();
        assert_eq!(total, 114.0);
        assert!((avg - 22.8).abs() < 1e-12);
        let q = KVector::parse("Y1,3,2,4 + Y1,2,3,4", &sh).unwrap();
        assert_eq!(k_copies_totals(&q, &map).unwrap(), (38.0, 19.0));
        let one = KVector::parse("Y2,4,1,3", &sh).unwrap();
        assert_eq!(k_copies_totals(&one, &map).unwrap(), (20.0, 20.0));

        assert!(k_copies_totals(&KVector::zero(&sh), &map).is_err());
        assert!(k_copies_totals(&KVector::parse("0.5*Y2,4,1,3", &sh).unwrap(), &map).is_err());
        let mut partial = map.clone();
        partial.remove(&tabloid("Y2,4,1,3", &sh));
        assert!(k_copies_totals(&one, &partial).is_err());
    }
}
