//! Marching squares on a boolean sample indicator.
//!
//! The indicator is padded with a ring of `false` samples so every contour
//! closes. Crossings sit at edge midpoints (the 0.5 level of a 0/1
//! indicator). Saddle cells keep diagonal inside samples apart.

use std::collections::HashMap;

use super::grid::Grid2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum EdgeId {
    /// Edge between samples (i, j) and (i + 1, j); indices offset by the pad.
    H(isize, isize),
    /// Edge between samples (i, j) and (i, j + 1).
    V(isize, isize),
}

/// Traces every closed iso-contour of `inside` at the 0.5 level.
///
/// Returns one vertex list per loop in world coordinates; loops are oriented
/// counter-clockwise around inside regions and clockwise around holes.
pub fn trace_loops(grid: &Grid2, inside: &[bool]) -> Vec<Vec<[f64; 2]>> {
    let nx = grid.nx as isize;
    let ny = grid.ny as isize;
    let at = |i: isize, j: isize| -> bool {
        i >= 0 && j >= 0 && i < nx && j < ny && inside[(j * nx + i) as usize]
    };

    let mut adjacency: HashMap<EdgeId, [Option<EdgeId>; 2]> = HashMap::new();
    let mut link = |a: EdgeId, b: EdgeId| {
        for (p, q) in [(a, b), (b, a)] {
            let slot = adjacency.entry(p).or_insert([None, None]);
            if slot[0].is_none() {
                slot[0] = Some(q);
            } else {
                slot[1] = Some(q);
            }
        }
    };

    for cj in -1..ny {
        for ci in -1..nx {
            let bl = at(ci, cj);
            let br = at(ci + 1, cj);
            let tr = at(ci + 1, cj + 1);
            let tl = at(ci, cj + 1);
            let bottom = EdgeId::H(ci, cj);
            let right = EdgeId::V(ci + 1, cj);
            let top = EdgeId::H(ci, cj + 1);
            let left = EdgeId::V(ci, cj);
            let mut crossed = Vec::with_capacity(4);
            if bl != br {
                crossed.push(bottom);
            }
            if br != tr {
                crossed.push(right);
            }
            if tr != tl {
                crossed.push(top);
            }
            if tl != bl {
                crossed.push(left);
            }
            match crossed.len() {
                0 => {}
                2 => link(crossed[0], crossed[1]),
                4 => {
                    if bl {
                        // bl and tr inside, kept separate
                        link(left, bottom);
                        link(right, top);
                    } else {
                        link(bottom, right);
                        link(top, left);
                    }
                }
                _ => unreachable!("a square cell crosses an even number of edges"),
            }
        }
    }

    let point = |e: EdgeId| -> [f64; 2] {
        match e {
            EdgeId::H(i, j) => [
                grid.ox + (i as f64 + 0.5) * grid.dx,
                grid.oy + j as f64 * grid.dy,
            ],
            EdgeId::V(i, j) => [
                grid.ox + i as f64 * grid.dx,
                grid.oy + (j as f64 + 0.5) * grid.dy,
            ],
        }
    };

    // Deterministic traversal order regardless of hash iteration order.
    let mut starts: Vec<EdgeId> = adjacency.keys().copied().collect();
    starts.sort_by_key(|e| match *e {
        EdgeId::H(i, j) => (j, i, 0u8),
        EdgeId::V(i, j) => (j, i, 1u8),
    });

    let mut visited: HashMap<EdgeId, bool> = HashMap::with_capacity(adjacency.len());
    let mut loops = Vec::new();
    for start in starts {
        if visited.contains_key(&start) {
            continue;
        }
        let mut ring = Vec::new();
        let mut prev: Option<EdgeId> = None;
        let mut cur = start;
        loop {
            visited.insert(cur, true);
            ring.push(point(cur));
            let [a, b] = adjacency[&cur];
            let next = match (a, b, prev) {
                (Some(a), Some(b), Some(p)) => {
                    if a == p {
                        b
                    } else {
                        a
                    }
                }
                (Some(a), _, None) => a,
                _ => break,
            };
            prev = Some(cur);
            if next == start {
                break;
            }
            cur = next;
        }
        if ring.len() >= 3 {
            orient(&mut ring, grid, inside);
            loops.push(ring);
        }
    }
    loops
}

pub(crate) fn signed_area(ring: &[[f64; 2]]) -> f64 {
    let n = ring.len();
    (0..n)
        .map(|k| {
            let [x0, y0] = ring[k];
            let [x1, y1] = ring[(k + 1) % n];
            x0 * y1 - x1 * y0
        })
        .sum::<f64>()
        * 0.5
}

/// Orients a loop counter-clockwise if the samples just to its left are inside.
fn orient(ring: &mut [[f64; 2]], grid: &Grid2, inside: &[bool]) {
    // Probe the sample nearest to the midpoint of the first segment, offset
    // to the left of the direction of travel by a quarter cell.
    let [x0, y0] = ring[0];
    let [x1, y1] = ring[1];
    let (tx, ty) = (x1 - x0, y1 - y0);
    let len = tx.hypot(ty).max(f64::MIN_POSITIVE);
    let (lx, ly) = (-ty / len, tx / len);
    let px = 0.5 * (x0 + x1) + lx * 0.5 * grid.dx;
    let py = 0.5 * (y0 + y1) + ly * 0.5 * grid.dy;
    let i = ((px - grid.ox) / grid.dx).round();
    let j = ((py - grid.oy) / grid.dy).round();
    let left_inside = i >= 0.0
        && j >= 0.0
        && (i as usize) < grid.nx
        && (j as usize) < grid.ny
        && inside[grid.index(i as usize, j as usize)];
    // Inside on the left: CCW around regions, CW around holes.
    if !left_inside {
        ring.reverse();
    }
}
