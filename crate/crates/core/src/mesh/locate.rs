use super::Mesh;
use crate::error::{Error, Result};

/// Containing element and barycentric coordinates of a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Location {
    pub element: usize,
    pub bary: [f64; 3],
}

const TOL: f64 = 1e-10;

impl Mesh {
    /// Barycentric coordinates of `x` with respect to `element`.
    pub fn barycentric(&self, element: usize, x: [f64; 2]) -> [f64; 3] {
        let tri = self.elements[element];
        let g = &self.geometry[element];
        std::array::from_fn(|a| {
            let p = self.nodes[tri[a]];
            1.0 + g.grads[a][0] * (x[0] - p[0]) + g.grads[a][1] * (x[1] - p[1])
        })
    }

    /// Finds the element containing `x`. Structured meshes use the grid
    /// formula; others walk from `hint` (or element 0) towards the point and
    /// fall back to a linear scan.
    pub fn locate_point(&self, x: [f64; 2], hint: Option<usize>) -> Result<Location> {
        if let Some(g) = self.grid {
            let (sx, sy) = (x[0] / g.width * g.nx as f64, x[1] / g.height * g.ny as f64);
            let pad = TOL * g.nx.max(g.ny) as f64;
            if sx < -pad || sy < -pad || sx > g.nx as f64 + pad || sy > g.ny as f64 + pad {
                return Err(Error::PointOutside { x: x[0], y: x[1] });
            }
            let i = (sx.floor().max(0.0) as usize).min(g.nx - 1);
            let j = (sy.floor().max(0.0) as usize).min(g.ny - 1);
            let (s, t) = (sx - i as f64, sy - j as f64);
            let cell = j * g.nx + i;
            let element = if s >= t { 2 * cell } else { 2 * cell + 1 };
            return Ok(Location { element, bary: self.barycentric(element, x) });
        }

        let inside = |b: &[f64; 3]| b.iter().all(|&l| l >= -TOL);
        let mut e = hint.filter(|&h| h < self.num_elements()).unwrap_or(0);
        for _ in 0..self.num_elements() {
            let b = self.barycentric(e, x);
            if inside(&b) {
                return Ok(Location { element: e, bary: b });
            }
            let worst = (0..3).min_by(|&p, &q| b[p].total_cmp(&b[q])).unwrap_or(0);
            match self.neighbors[e][worst] {
                Some(n) => e = n,
                None => break,
            }
        }
        (0..self.num_elements())
            .map(|e| (e, self.barycentric(e, x)))
            .find(|(_, b)| inside(b))
            .map(|(element, bary)| Location { element, bary })
            .ok_or(Error::PointOutside { x: x[0], y: x[1] })
    }
}
