//! Orthogonality graphs over labeled vector sets, with DOT and JSON export.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::UnitVector3;

/// Default edge-detection tolerance: looser than validation so that pairs
/// assembled in floating point classify stably.
pub const DEFAULT_EDGE_TOL: f64 = 1e-8;

/// Inner products in [tolerance, BORDERLINE_TOL] are not edges but are
/// close enough to suggest an intended orthogonality; they get a warning.
pub const BORDERLINE_TOL: f64 = 1e-6;

/// Vertices in input order; an edge joins two distinct vertices whose
/// vectors have |inner product| below the tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrthogonalityGraph {
    vertices: Vec<(String, UnitVector3)>,
    /// Vertex-index pairs with i < j, in scan order.
    edges: Vec<(usize, usize)>,
    tolerance: f64,
    warnings: Vec<String>,
}

impl OrthogonalityGraph {
    pub fn vertices(&self) -> &[(String, UnitVector3)] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Edges as label pairs, each pair and the list sorted lexicographically.
    pub fn labeled_edges(&self) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = self
            .edges
            .iter()
            .map(|&(i, j)| {
                let a = self.vertices[i].0.clone();
                let b = self.vertices[j].0.clone();
                if a <= b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        out.sort();
        out
    }

    pub fn has_edge(&self, a: &str, b: &str) -> bool {
        let find = |l: &str| self.vertices.iter().position(|(label, _)| label == l);
        match (find(a), find(b)) {
            (Some(i), Some(j)) => {
                let key = (i.min(j), i.max(j));
                self.edges.contains(&key)
            }
            _ => false,
        }
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }
}

/// Scans all vertex pairs and keeps those with |inner| < tolerance.
/// Tolerance must lie in (0, 0.1): anything looser stops being an
/// orthogonality test on unit vectors.
pub fn build_graph(vectors: &[(String, UnitVector3)], tolerance: f64) -> OrthogonalityGraph {
    assert!(
        tolerance > 0.0 && tolerance < 0.1,
        "edge tolerance {tolerance} outside (0, 0.1)"
    );
    let mut edges = Vec::new();
    let mut warnings = Vec::new();
    for i in 0..vectors.len() {
        for j in i + 1..vectors.len() {
            let ip = vectors[i].1.inner(&vectors[j].1).abs();
            if ip < tolerance {
                edges.push((i, j));
            } else if ip <= BORDERLINE_TOL {
                warnings.push(format!(
                    "pair ({}, {}) is borderline: |inner| = {ip:.3e} in [{tolerance:.1e}, {BORDERLINE_TOL:.1e}]",
                    vectors[i].0, vectors[j].0
                ));
            }
        }
    }
    OrthogonalityGraph {
        vertices: vectors.to_vec(),
        edges,
        tolerance,
        warnings,
    }
}

/// True iff the graph is exactly the cycle C_n on its vertices taken in
/// label (input) order: n vertices, n edges, and every edge joins
/// consecutive indices modulo n.
pub fn is_cycle(g: &OrthogonalityGraph, n: usize) -> bool {
    if n < 3 || g.vertices.len() != n || g.edges.len() != n {
        return false;
    }
    (0..n).all(|i| {
        let j = (i + 1) % n;
        g.edges.contains(&(i.min(j), i.max(j)))
    })
}

/// Renders the graph as DOT (`dot`) or a structured JSON document (`json`).
/// Node statements follow input order; edge statements are sorted
/// lexicographically, so output is byte-identical across runs.
pub fn export_graph(g: &OrthogonalityGraph, format: &str) -> Result<String> {
    match format {
        "dot" => {
            let mut out = String::from("graph orthogonality {\n");
            for (label, _) in &g.vertices {
                out.push_str(&format!("  \"{label}\";\n"));
            }
            for (a, b) in g.labeled_edges() {
                out.push_str(&format!("  \"{a}\" -- \"{b}\";\n"));
            }
            out.push_str("}\n");
            Ok(out)
        }
        "json" => {
            #[derive(Serialize)]
            struct Doc<'a> {
                vertices: Vec<Vertex<'a>>,
                edges: Vec<(String, String)>,
                tolerance: f64,
                warnings: &'a [String],
            }
            #[derive(Serialize)]
            struct Vertex<'a> {
                label: &'a str,
                vector: [f64; 3],
            }
            let doc = Doc {
                vertices: g
                    .vertices
                    .iter()
                    .map(|(label, v)| Vertex {
                        label,
                        vector: v.components(),
                    })
                    .collect(),
                edges: g.labeled_edges(),
                tolerance: g.tolerance,
                warnings: &g.warnings,
            };
            let mut text = serde_json::to_string_pretty(&doc)?;
            text.push('\n');
            Ok(text)
        }
        other => Err(Error::UnsupportedFormat {
            format: other.to_string(),
            supported: "dot, json",
        }),
    }
}

/// `vectors()` of a scenario labeled v1..vn, ready for [`build_graph`].
pub fn label_cycle_vectors(vectors: &[UnitVector3]) -> Vec<(String, UnitVector3)> {
    vectors
        .iter()
        .enumerate()
        .map(|(i, v)| (format!("v{}", i + 1), *v))
        .collect()
}
