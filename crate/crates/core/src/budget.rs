use serde::{Deserialize, Serialize};

/// Resource caps shared by every enumeration and search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Largest `q^n` that may be scanned word by word.
    pub enumeration: u64,
    /// Largest graph handed to the branching counter or the exact search.
    pub branching_vertices: usize,
    /// Largest graph handed to the naive subset scan.
    pub naive_vertices: usize,
    /// Cap on recursion nodes for one count or search.
    pub max_nodes: u64,
    /// Cap on the number of independent sets a stream may produce.
    pub streaming: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            enumeration: 1 << 20,
            branching_vertices: 512,
            naive_vertices: 22,
            max_nodes: 1 << 32,
            streaming: 1 << 24,
        }
    }
}
