use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{NavError, NavGraph};

/// Triangulated walkable surface. Triangles are adjacent when they share an edge.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TriangleMesh {
    pub vertices: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
}

const AREA_EPSILON: f64 = 1e-12;

impl TriangleMesh {
    /// Parses the plain-text mesh format: `v x y` per vertex and `t i j k`
    /// per triangle (0-based vertex indices). Blank lines and lines starting
    /// with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self, NavError> {
        let mut mesh = TriangleMesh::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: &str| NavError::MeshParse { line: n + 1, message: message.to_string() };
            let mut parts = line.split_whitespace();
            match parts.next() {
                Some("v") => {
                    let xy: Vec<f64> = parts
                        .map(|p| p.parse::<f64>().map_err(|_| err("bad coordinate")))
                        .collect::<Result<_, _>>()?;
                    if xy.len() != 2 || xy.iter().any(|c| !c.is_finite()) {
                        return Err(err("vertex needs two finite coordinates"));
                    }
                    mesh.vertices.push([xy[0], xy[1]]);
                }
                Some("t") => {
                    let ijk: Vec<usize> = parts
                        .map(|p| p.parse::<usize>().map_err(|_| err("bad vertex index")))
                        .collect::<Result<_, _>>()?;
                    if ijk.len() != 3 {
                        return Err(err("triangle needs three vertex indices"));
                    }
                    mesh.triangles.push([ijk[0], ijk[1], ijk[2]]);
                }
                Some(other) => return Err(err(&format!("unknown record {other:?}"))),
                None => unreachable!(),
            }
        }
        mesh.validate()?;
        Ok(mesh)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for [x, y] in &self.vertices {
            let _ = writeln!(out, "v {x} {y}");
        }
        for [i, j, k] in &self.triangles {
            let _ = writeln!(out, "t {i} {j} {k}");
        }
        out
    }

    /// Checks vertex indices and that every triangle has positive area.
    pub fn validate(&self) -> Result<(), NavError> {
        for (t, tri) in self.triangles.iter().enumerate() {
            if let Some(&vertex) = tri.iter().find(|&&v| v >= self.vertices.len()) {
                return Err(NavError::BadVertexIndex { triangle: t, vertex });
            }
            if self.area(t).abs() <= AREA_EPSILON {
                return Err(NavError::DegenerateTriangle(t));
            }
        }
        Ok(())
    }

    /// Signed area of triangle `t`.
    pub fn area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t].map(|v| self.vertices[v]);
        ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1])) / 2.0
    }

    pub fn centroid(&self, t: usize) -> [f64; 2] {
        let [a, b, c] = self.triangles[t].map(|v| self.vertices[v]);
        [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0]
    }
}

impl NavGraph {
    /// One node per triangle at its centroid; triangles sharing an edge are
    /// linked with the distance between their centroids.
    pub fn from_mesh(mesh: &TriangleMesh) -> Result<Self, NavError> {
        mesh.validate()?;
        let mut g = NavGraph::euclidean();
        for t in 0..mesh.triangles.len() {
            g.add_node(mesh.centroid(t));
        }
        let mut by_edge: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (t, &[i, j, k]) in mesh.triangles.iter().enumerate() {
            for (a, b) in [(i, j), (j, k), (k, i)] {
                by_edge.entry((a.min(b), a.max(b))).or_default().push(t);
            }
        }
        for sharing in by_edge.values() {
            for (n, &a) in sharing.iter().enumerate() {
                for &b in &sharing[n + 1..] {
                    let (pa, pb) = (mesh.centroid(a), mesh.centroid(b));
                    g.add_edge(a, b, (pa[0] - pb[0]).hypot(pa[1] - pb[1]));
                }
            }
        }
        Ok(g)
    }
}
