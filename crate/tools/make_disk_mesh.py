#!/usr/bin/env python3
"""Generate a quasi-uniform Delaunay mesh of the unit disk in qflow's text format.

Usage: make_disk_mesh.py --h 0.0255 --boundary 250 -o unit_disk.mesh

Interior nodes start on a hexagonal lattice and are relaxed with DistMesh-style
bar forces; boundary nodes are fixed and equally spaced. Nodes are renumbered
with reverse Cuthill-McKee to keep the mass-matrix envelope small.
"""

import argparse

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import reverse_cuthill_mckee
from scipy.spatial import Delaunay


def hex_lattice(h, r_max):
    dy = h * np.sqrt(3) / 2
    ys = np.arange(-1.0, 1.0 + dy, dy)
    pts = []
    for j, y in enumerate(ys):
        xs = np.arange(-1.0, 1.0 + h, h) + (h / 2 if j % 2 else 0.0)
        pts.extend((x, y) for x in xs)
    pts = np.array(pts)
    return pts[np.hypot(pts[:, 0], pts[:, 1]) < r_max]


def edges_of(tris):
    e = np.vstack([tris[:, [0, 1]], tris[:, [1, 2]], tris[:, [2, 0]]])
    return np.unique(np.sort(e, axis=1), axis=0)


def relax(bnd, interior, h, iters):
    nb = len(bnd)
    r_max = 1.0 - 0.4 * h
    for _ in range(iters):
        p = np.vstack([bnd, interior])
        bars = edges_of(Delaunay(p).simplices)
        vec = p[bars[:, 0]] - p[bars[:, 1]]
        length = np.hypot(vec[:, 0], vec[:, 1])
        l0 = 1.2 * np.sqrt(np.sum(length**2) / len(length))
        f = np.maximum(l0 - length, 0.0)
        fvec = (f / length)[:, None] * vec
        force = np.zeros_like(p)
        np.add.at(force, bars[:, 0], fvec)
        np.add.at(force, bars[:, 1], -fvec)
        interior = interior + 0.2 * force[nb:]
        r = np.hypot(interior[:, 0], interior[:, 1])
        out = r > r_max
        interior[out] *= (r_max / r[out])[:, None]
    return interior


def build(h, nb, iters):
    theta = 2 * np.pi * np.arange(nb) / nb
    bnd = np.column_stack([np.cos(theta), np.sin(theta)])
    interior = relax(bnd, hex_lattice(h, 1.0 - 0.6 * h), h, iters)
    p = np.vstack([bnd, interior])
    tris = Delaunay(p).simplices
    a, b, c = p[tris[:, 0]], p[tris[:, 1]], p[tris[:, 2]]
    det = (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (c[:, 0] - a[:, 0]) * (b[:, 1] - a[:, 1])
    tris = tris[np.abs(det) > 1e-14]
    det = det[np.abs(det) > 1e-14]
    tris[det < 0] = tris[det < 0][:, [0, 2, 1]]

    n = len(p)
    e = edges_of(tris)
    adj = coo_matrix((np.ones(len(e)), (e[:, 0], e[:, 1])), shape=(n, n))
    perm = reverse_cuthill_mckee((adj + adj.T).tocsr(), symmetric_mode=True)
    inv = np.empty(n, dtype=int)
    inv[perm] = np.arange(n)
    return p[perm], inv[tris], np.sort(inv[:nb])


def min_angle_deg(p, tris):
    worst = 180.0
    for k in range(3):
        u = p[tris[:, (k + 1) % 3]] - p[tris[:, k]]
        v = p[tris[:, (k + 2) % 3]] - p[tris[:, k]]
        cos = np.sum(u * v, axis=1) / (np.hypot(u[:, 0], u[:, 1]) * np.hypot(v[:, 0], v[:, 1]))
        worst = min(worst, np.degrees(np.arccos(np.clip(cos, -1, 1))).min())
    return worst


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--h", type=float, default=0.02515, help="target interior edge length")
    ap.add_argument("--boundary", type=int, default=250, help="number of boundary nodes")
    ap.add_argument("--iters", type=int, default=60, help="relaxation sweeps")
    ap.add_argument("-o", "--output", required=True)
    args = ap.parse_args()

    p, tris, bnd = build(args.h, args.boundary, args.iters)
    with open(args.output, "w") as f:
        f.write(f"# unit disk, h ~ {args.h}, {args.boundary} boundary nodes, min angle "
                f"{min_angle_deg(p, tris):.1f} deg\n")
        f.write(f"{len(p)} {len(tris)} {len(bnd)}\n")
        for x, y in p:
            f.write(f"{x:.17g} {y:.17g}\n")
        for t in tris:
            f.write(f"{t[0]} {t[1]} {t[2]}\n")
        for b in bnd:
            f.write(f"{b}\n")
    print(f"V={len(p)} L={len(tris)} B={len(bnd)} min angle={min_angle_deg(p, tris):.1f}")


if __name__ == "__main__":
    main()
