use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{CarpetError, Result};
use crate::geometry::{cell_adjacency, CellLattice, ContactKind, UscSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ConductanceMode {
    /// Every segment contact has conductance 1.
    Uniform,
    /// Segment contacts get their overlap as a fraction of the cell side.
    #[default]
    OverlapWeighted,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConductanceScheme {
    pub mode: ConductanceMode,
    /// Conductance of a point contact; 0 drops point contacts.
    pub point_contact: f64,
}

impl Default for ConductanceScheme {
    fn default() -> Self {
        ConductanceScheme { mode: ConductanceMode::OverlapWeighted, point_contact: 0.0 }
    }
}

impl ConductanceScheme {
    pub fn uniform() -> Self {
        ConductanceScheme { mode: ConductanceMode::Uniform, point_contact: 0.0 }
    }

    /// Scheme used when comparing members of a family with their limit:
    /// point contacts conduct, so a limit that pinches two squares together
    /// is seen by the network.
    pub fn family_default() -> Self {
        ConductanceScheme { mode: ConductanceMode::OverlapWeighted, point_contact: 1.0 }
    }

    fn conductance(&self, kind: ContactKind, overlap: i64, side: i64) -> f64 {
        match kind {
            ContactKind::Point => self.point_contact,
            ContactKind::Segment => match self.mode {
                ConductanceMode::Uniform => 1.0,
                ConductanceMode::OverlapWeighted => overlap as f64 / side as f64,
            },
        }
    }
}

/// Level-`n` cell network: vertices are cells, edges are contacts.
#[derive(Clone, Debug)]
pub struct CellNetwork {
    lattice: CellLattice,
    graph: Graph,
    scheme: ConductanceScheme,
    normalization: f64,
}

impl CellNetwork {
    pub fn lattice(&self) -> &CellLattice {
        &self.lattice
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn scheme(&self) -> ConductanceScheme {
        self.scheme
    }

    pub fn level(&self) -> u32 {
        self.lattice.level()
    }

    pub fn n_vertices(&self) -> usize {
        self.graph.n_vertices()
    }

    /// Raw `R(L_2, L_4)` once computed; reported resistances are divided by it.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn set_normalization(&mut self, r: f64) {
        self.normalization = r;
    }
}

pub fn build_cell_network(spec: &UscSpec, n: u32, scheme: ConductanceScheme) -> Result<CellNetwork> {
    let lattice = CellLattice::new(spec, n)?;
    let side = lattice.side();
    let edges: Vec<(usize, usize, f64)> = cell_adjacency(&lattice)
        .into_iter()
        .map(|c| (c.a, c.b, scheme.conductance(c.kind, c.overlap, side)))
        .filter(|e| e.2 > 0.0)
        .collect();
    let graph = Graph::new(lattice.len(), edges)?;
    let components = graph.components();
    if components != 1 {
        return Err(CarpetError::Disconnected { components });
    }
    Ok(CellNetwork { lattice, graph, scheme, normalization: 1.0 })
}
