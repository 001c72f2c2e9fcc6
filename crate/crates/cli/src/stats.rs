use serde::Serialize;

use oscm::reduction::ReductionCounts;
use oscm::{Instance, SolveReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Heuristic,
}

/// One solver run, serialized as a flat JSON object.
#[derive(Debug, Clone, Serialize)]
pub struct RunStats {
    pub mode: Mode,
    pub instance: String,
    pub n0: usize,
    pub n1: usize,
    pub m: usize,
    pub heuristic_cost: u64,
    pub lower_bound: u64,
    pub final_cost: u64,
    pub proven_optimal: bool,
    pub nodes: u64,
    pub cuts: u64,
    pub lp_solves: u64,
    pub reduced_isolated: usize,
    pub reduced_parts: usize,
    pub reduced_split_fixes: usize,
    pub reduced_zero_pairs: usize,
    pub reduced_dominance: usize,
    pub reduced_bound: usize,
    pub reduced_closure: usize,
    pub wall_time_ms: f64,
}

impl RunStats {
    pub fn from_report(mode: Mode, name: &str, instance: &Instance, report: &SolveReport) -> Self {
        let ReductionCounts {
            isolated,
            parts,
            split_fixes,
            zero_pairs,
            dominance,
            bound,
            closure,
        } = report.reductions;
        Self {
            mode,
            instance: name.to_string(),
            n0: instance.n0(),
            n1: instance.n1(),
            m: instance.m(),
            heuristic_cost: report.heuristic_cost,
            lower_bound: report.lower_bound,
            final_cost: report.best.crossings,
            proven_optimal: report.proven_optimal,
            nodes: report.nodes_explored,
            cuts: report.cuts_added,
            lp_solves: report.lp_solves,
            reduced_isolated: isolated,
            reduced_parts: parts,
            reduced_split_fixes: split_fixes,
            reduced_zero_pairs: zero_pairs,
            reduced_dominance: dominance,
            reduced_bound: bound,
            reduced_closure: closure,
            wall_time_ms: report.wall_time.as_secs_f64() * 1e3,
        }
    }
}

/// A bench entry that could not be solved.
#[derive(Debug, Clone, Serialize)]
pub struct ErrorRow {
    pub instance: String,
    pub error: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Summary {
    pub summary: bool,
    pub instances: usize,
    pub solved: usize,
    pub errors: usize,
    pub proven_optimal: usize,
    pub total_final_cost: u64,
    pub wall_time_ms: f64,
}
