//! Plain-text mesh format.
//!
//! ```text
//! # comment
//! V L B
//! x y          (V lines)
//! i j k        (L lines, 0-based, counterclockwise)
//! i            (B lines, boundary node indices)
//! ```

use std::fmt::Write as _;
use std::path::Path;

use super::Mesh;
use crate::error::{Error, Result};

pub fn load_mesh(path: impl AsRef<Path>) -> Result<Mesh> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_mesh(&text, path)
}

/// Parses mesh text; `origin` is only used in error messages.
pub fn parse_mesh(text: &str, origin: &Path) -> Result<Mesh> {
    let err = |line: usize, msg: String| Error::MeshParse { path: origin.to_path_buf(), line, msg };

    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let mut next_fields = |what: &str, n: usize| -> Result<(usize, Vec<&str>)> {
        let (no, l) =
            lines.next().ok_or_else(|| err(0, format!("unexpected end of file, expected {what}")))?;
        let fields: Vec<&str> = l.split_whitespace().collect();
        if fields.len() != n {
            return Err(err(no, format!("expected {n} fields for {what}, found {}", fields.len())));
        }
        Ok((no, fields))
    };

    let (no, header) = next_fields("header `V L B`", 3)?;
    let counts: Vec<usize> = header
        .iter()
        .map(|s| s.parse::<usize>().map_err(|e| err(no, format!("bad count `{s}`: {e}"))))
        .collect::<Result<_>>()?;
    let (v, l, b) = (counts[0], counts[1], counts[2]);

    let mut nodes = Vec::with_capacity(v);
    for _ in 0..v {
        let (no, f) = next_fields("node `x y`", 2)?;
        let x = f[0].parse::<f64>().map_err(|e| err(no, format!("bad coordinate `{}`: {e}", f[0])))?;
        let y = f[1].parse::<f64>().map_err(|e| err(no, format!("bad coordinate `{}`: {e}", f[1])))?;
        nodes.push([x, y]);
    }

    let mut elements = Vec::with_capacity(l);
    for e in 0..l {
        let (no, f) = next_fields("element `i j k`", 3)?;
        let mut tri = [0usize; 3];
        for (t, s) in tri.iter_mut().zip(&f) {
            *t = s.parse().map_err(|er| err(no, format!("bad node index `{s}`: {er}")))?;
            if *t >= v {
                return Err(err(no, format!("element {e} references node {t}, but V = {v}")));
            }
        }
        let p = tri.map(|i| nodes[i]);
        let det = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]);
        if !(det > 0.0) {
            return Err(err(no, format!("element {e} {tri:?} has non-positive signed area {:e}", det / 2.0)));
        }
        elements.push(tri);
    }

    let mut boundary = Vec::with_capacity(b);
    for _ in 0..b {
        let (no, f) = next_fields("boundary node index", 1)?;
        let i: usize = f[0].parse().map_err(|e| err(no, format!("bad boundary index `{}`: {e}", f[0])))?;
        if i >= v {
            return Err(err(no, format!("boundary node {i} out of range, V = {v}")));
        }
        boundary.push(i);
    }
    if let Some((no, _)) = lines.next() {
        return Err(err(no, "trailing data after boundary list".into()));
    }

    Mesh::from_parts(nodes, elements, &boundary)
}

pub fn write_mesh(mesh: &Mesh) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} {} {}", mesh.num_nodes(), mesh.num_elements(), mesh.boundary_ids().len());
    for p in mesh.nodes() {
        let _ = writeln!(s, "{:.17e} {:.17e}", p[0], p[1]);
    }
    for t in mesh.elements() {
        let _ = writeln!(s, "{} {} {}", t[0], t[1], t[2]);
    }
    for b in mesh.boundary_ids() {
        let _ = writeln!(s, "{b}");
    }
    s
}
