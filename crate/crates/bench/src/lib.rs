//! Shared inputs for the benchmarks.

use cellforge::{construct_cells, CellSystem, GraphSpec, Variant};

/// Catalog entries exercised by every benchmark group.
pub const GRAPHS: [&str; 5] = ["A:12", "D:12", "Astar:12", "E5", "E24"];

/// The default cell system of a selector.
pub fn system(selector: &str) -> CellSystem {
    let spec: GraphSpec = selector.parse().expect("benchmark selectors are valid");
    construct_cells(spec, Variant::admissible(spec)[0]).expect("catalog systems construct")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inputs_build() {
        for g in GRAPHS {
            assert!(!system(g).values().is_empty());
        }
    }
}
