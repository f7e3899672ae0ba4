use std::collections::BTreeMap;

use kecs::meta::RunLog;
use kecs::psi::MoveKind;
use kecs::MultiGraph;
use num_rational::Ratio;
use serde::Serialize;

/// Bumped whenever a field is added, removed or renamed.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct Instance {
    pub n: usize,
    pub m: usize,
    pub max_degree: usize,
    pub simple: bool,
}

impl Instance {
    pub fn of(g: &MultiGraph) -> Self {
        Instance { n: g.vertex_count(), m: g.edge_count(), max_degree: g.max_degree(), simple: g.is_simple() }
    }
}

#[derive(Debug, Serialize)]
pub struct TraceSummary {
    pub iterations: u64,
    pub moves: BTreeMap<String, u64>,
}

impl TraceSummary {
    pub fn new(iterations: u64, counts: &[u64; 8]) -> Self {
        let moves = MoveKind::ALL.iter().zip(counts).map(|(k, &c)| (format!("{k:?}"), c)).collect();
        TraceSummary { iterations, moves }
    }
}

/// What the guarantee is measured against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// A fraction of all edges.
    Edges,
    /// A fraction of the optimum.
    Optimum,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub instance: Instance,
    pub strategy: String,
    pub k: usize,
    pub colored: usize,
    /// `colored / m` as `p/q`.
    pub fraction: String,
    pub guarantee: Option<String>,
    pub guarantee_basis: Option<Basis>,
    /// Colored edges the guarantee demands, when it can be evaluated.
    pub required: Option<usize>,
    pub guarantee_met: Option<bool>,
    pub oracle_optimum: Option<usize>,
    pub wall_time_ms: Option<u64>,
    pub trace: Option<TraceSummary>,
    pub meta: Option<RunLog>,
}

pub fn ratio(r: Ratio<i64>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// `colored / m`, with 1/1 for an edgeless graph.
pub fn fraction(colored: usize, m: usize) -> String {
    if m == 0 {
        return "1/1".into();
    }
    ratio(Ratio::new(colored as i64, m as i64))
}

pub fn ceil_times(r: Ratio<i64>, n: usize) -> usize {
    (r * Ratio::from_integer(n as i64)).ceil().to_integer() as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_print_as_p_over_q() {
        assert_eq!(ratio(Ratio::new(26, 30)), "13/15");
        assert_eq!(ratio(Ratio::from_integer(1)), "1/1");
        assert_eq!(fraction(0, 0), "1/1");
        assert_eq!(fraction(8, 10), "4/5");
        assert_eq!(ceil_times(Ratio::new(7, 9), 4), 4);
    }
}
