//! Conforming triangulations with P1 element geometry.

mod io;
mod locate;
pub mod quadrature;

use std::collections::HashMap;

pub use io::{load_mesh, parse_mesh, write_mesh};
pub use locate::Location;
pub use quadrature::{triangle_quadrature, QuadratureRule};

use crate::error::{Error, Result};

/// Area and the constant shape-function gradients of one triangle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ElementGeometry {
    pub area: f64,
    /// `grads[a] = grad psi_a` for the element's local vertex `a`.
    pub grads: [[f64; 2]; 3],
}

/// Uniform-grid metadata for meshes built by [`structured_rect_mesh`].
#[derive(Clone, Copy, Debug)]
pub(crate) struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub width: f64,
    pub height: f64,
}

#[derive(Clone, Debug)]
pub struct Mesh {
    nodes: Vec<[f64; 2]>,
    elements: Vec<[usize; 3]>,
    on_boundary: Vec<bool>,
    interior_ids: Vec<usize>,
    boundary_ids: Vec<usize>,
    dof: Vec<Option<usize>>,
    geometry: Vec<ElementGeometry>,
    /// `neighbors[e][a]`: element across the edge opposite local vertex `a`.
    neighbors: Vec<[Option<usize>; 3]>,
    grid: Option<Grid>,
    h_max: f64,
}

impl Mesh {
    /// Builds a mesh from raw parts. Elements must be counterclockwise with
    /// positive area, and `boundary_ids` must be exactly the nodes lying on
    /// edges that belong to a single element.
    pub fn from_parts(
        nodes: Vec<[f64; 2]>,
        elements: Vec<[usize; 3]>,
        boundary_ids: &[usize],
    ) -> Result<Self> {
        let v = nodes.len();
        let mut geometry = Vec::with_capacity(elements.len());
        for (e, tri) in elements.iter().enumerate() {
            if let Some(bad) = tri.iter().find(|&&i| i >= v) {
                return Err(Error::MeshTopology(format!(
                    "element {e} references node {bad}, but the mesh has {v} nodes"
                )));
            }
            let g = element_geometry(&[nodes[tri[0]], nodes[tri[1]], nodes[tri[2]]]);
            if !(g.area > 0.0) {
                return Err(Error::MeshTopology(format!(
                    "element {e} {tri:?} has non-positive signed area {:e}",
                    g.area
                )));
            }
            geometry.push(g);
        }

        let mut on_boundary = vec![false; v];
        for &b in boundary_ids {
            if b >= v {
                return Err(Error::MeshTopology(format!("boundary node {b} out of range ({v} nodes)")));
            }
            on_boundary[b] = true;
        }

        let mut edge_owner: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
        let mut neighbors = vec![[None; 3]; elements.len()];
        for (e, tri) in elements.iter().enumerate() {
            for a in 0..3 {
                let (p, q) = (tri[(a + 1) % 3], tri[(a + 2) % 3]);
                let key = (p.min(q), p.max(q));
                match edge_owner.remove(&key) {
                    Some((f, b)) => {
                        neighbors[e][a] = Some(f);
                        neighbors[f][b] = Some(e);
                    }
                    None => {
                        edge_owner.insert(key, (e, a));
                    }
                }
            }
        }
        // Edges left unpaired are boundary edges (a third use of an edge would
        // re-insert it and also show up here).
        let mut topo_boundary = vec![false; v];
        for (p, q) in edge_owner.keys() {
            topo_boundary[*p] = true;
            topo_boundary[*q] = true;
        }
        let mut used = vec![false; v];
        for tri in &elements {
            for &i in tri {
                used[i] = true;
            }
        }
        if let Some(i) = (0..v).find(|&i| !used[i]) {
            return Err(Error::MeshTopology(format!("node {i} belongs to no element")));
        }
        if let Some(i) = (0..v).find(|&i| topo_boundary[i] != on_boundary[i]) {
            return Err(Error::MeshTopology(if on_boundary[i] {
                format!("node {i} is flagged as boundary but lies on no boundary edge")
            } else {
                format!("node {i} lies on a boundary edge but is not flagged as boundary")
            }));
        }

        let mut mesh = Self::assemble(nodes, elements, on_boundary, geometry, neighbors);
        mesh.grid = None;
        Ok(mesh)
    }

    fn assemble(
        nodes: Vec<[f64; 2]>,
        elements: Vec<[usize; 3]>,
        on_boundary: Vec<bool>,
        geometry: Vec<ElementGeometry>,
        neighbors: Vec<[Option<usize>; 3]>,
    ) -> Self {
        let mut interior_ids = Vec::new();
        let mut boundary_ids = Vec::new();
        let mut dof = vec![None; nodes.len()];
        for (i, &b) in on_boundary.iter().enumerate() {
            if b {
                boundary_ids.push(i);
            } else {
                dof[i] = Some(interior_ids.len());
                interior_ids.push(i);
            }
        }
        let mut h_max: f64 = 0.0;
        for tri in &elements {
            for a in 0..3 {
                let (p, q) = (nodes[tri[a]], nodes[tri[(a + 1) % 3]]);
                h_max = h_max.max((p[0] - q[0]).hypot(p[1] - q[1]));
            }
        }
        Self {
            nodes,
            elements,
            on_boundary,
            interior_ids,
            boundary_ids,
            dof,
            geometry,
            neighbors,
            grid: None,
            h_max,
        }
    }

    pub fn nodes(&self) -> &[[f64; 2]] {
        &self.nodes
    }

    pub fn elements(&self) -> &[[usize; 3]] {
        &self.elements
    }

    pub fn geometry(&self) -> &[ElementGeometry] {
        &self.geometry
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_elements(&self) -> usize {
        self.elements.len()
    }

    pub fn interior_ids(&self) -> &[usize] {
        &self.interior_ids
    }

    pub fn boundary_ids(&self) -> &[usize] {
        &self.boundary_ids
    }

    pub fn is_boundary(&self, node: usize) -> bool {
        self.on_boundary[node]
    }

    /// Position of `node` among the interior degrees of freedom.
    pub fn dof(&self, node: usize) -> Option<usize> {
        self.dof[node]
    }

    pub fn neighbors(&self, element: usize) -> &[Option<usize>; 3] {
        &self.neighbors[element]
    }

    /// Longest edge length.
    pub fn h_max(&self) -> f64 {
        self.h_max
    }

    pub fn total_area(&self) -> f64 {
        self.geometry.iter().map(|g| g.area).sum()
    }

    pub fn vertices(&self, element: usize) -> [[f64; 2]; 3] {
        self.elements[element].map(|i| self.nodes[i])
    }

    pub fn is_structured(&self) -> bool {
        self.grid.is_some()
    }

    /// Node-to-node adjacency through shared elements, sorted.
    pub fn node_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for tri in &self.elements {
            for a in 0..3 {
                for b in 0..3 {
                    if a != b {
                        adj[tri[a]].push(tri[b]);
                    }
                }
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }
}

pub fn element_geometry(v: &[[f64; 2]; 3]) -> ElementGeometry {
    let det = (v[1][0] - v[0][0]) * (v[2][1] - v[0][1]) - (v[2][0] - v[0][0]) * (v[1][1] - v[0][1]);
    let inv = 1.0 / det;
    let grads = std::array::from_fn(|a| {
        let (p, q) = (v[(a + 1) % 3], v[(a + 2) % 3]);
        [(p[1] - q[1]) * inv, (q[0] - p[0]) * inv]
    });
    ElementGeometry { area: 0.5 * det, grads }
}

/// Uniform grid on `[0, width] x [0, height]` with squares of side `h`, each
/// split along its lower-left to upper-right diagonal.
pub fn structured_rect_mesh(width: f64, height: f64, h: f64) -> Result<Mesh> {
    let cells = |len: f64, name: &str| -> Result<usize> {
        let n = len / h;
        let r = n.round();
        if !(h > 0.0) || r < 1.0 || (n - r).abs() > 1e-9 * r {
            return Err(Error::Domain(format!("{name} {len} is not an integer multiple of h = {h}")));
        }
        Ok(r as usize)
    };
    let nx = cells(width, "width")?;
    let ny = cells(height, "height")?;
    let id = |i: usize, j: usize| j * (nx + 1) + i;

    let mut nodes = Vec::with_capacity((nx + 1) * (ny + 1));
    let mut on_boundary = Vec::with_capacity(nodes.capacity());
    for j in 0..=ny {
        for i in 0..=nx {
            nodes.push([width * i as f64 / nx as f64, height * j as f64 / ny as f64]);
            on_boundary.push(i == 0 || j == 0 || i == nx || j == ny);
        }
    }
    let mut elements = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let (p00, p10, p11, p01) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            elements.push([p00, p10, p11]);
            elements.push([p00, p11, p01]);
        }
    }
    let geometry: Vec<_> =
        elements.iter().map(|t| element_geometry(&[nodes[t[0]], nodes[t[1]], nodes[t[2]]])).collect();

    // Lower triangle 2c = (p00, p10, p11): across p10-p11 lies the upper
    // triangle of cell (i+1, j); across p11-p00 its own upper triangle;
    // across p00-p10 the upper triangle of cell (i, j-1).
    let cell = |i: usize, j: usize| j * nx + i;
    let mut neighbors = vec![[None; 3]; elements.len()];
    for j in 0..ny {
        for i in 0..nx {
            let c = cell(i, j);
            let (lower, upper) = (2 * c, 2 * c + 1);
            neighbors[lower] = [
                (i + 1 < nx).then(|| 2 * cell(i + 1, j) + 1),
                Some(upper),
                (j > 0).then(|| 2 * cell(i, j - 1) + 1),
            ];
            // Upper triangle (p00, p11, p01): across p11-p01 the lower
            // triangle of (i, j+1); across p01-p00 the lower triangle of
            // (i-1, j); across p00-p11 its own lower triangle.
            neighbors[upper] =
                [(j + 1 < ny).then(|| 2 * cell(i, j + 1)), (i > 0).then(|| 2 * cell(i - 1, j)), Some(lower)];
        }
    }
    let mut mesh = Mesh::assemble(nodes, elements, on_boundary, geometry, neighbors);
    mesh.grid = Some(Grid { nx, ny, width, height });
    Ok(mesh)
}
