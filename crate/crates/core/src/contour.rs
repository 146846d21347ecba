//! Iso-lines of sampled fields by marching squares.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::field::Field;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    /// Vertices in walk order. A closed polyline does not repeat its first
    /// vertex.
    pub points: Vec<(f64, f64)>,
    pub closed: bool,
}

impl Polyline {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn centroid(&self) -> (f64, f64) {
        let n = self.points.len().max(1) as f64;
        let (sx, sy) = self
            .points
            .iter()
            .fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
        (sx / n, sy / n)
    }

    /// Even-odd test; always false for open polylines.
    pub fn encloses(&self, x: f64, y: f64) -> bool {
        if !self.closed {
            return false;
        }
        let mut inside = false;
        let n = self.points.len();
        for k in 0..n {
            let (x1, y1) = self.points[k];
            let (x2, y2) = self.points[(k + 1) % n];
            if (y1 > y) != (y2 > y) && x < x1 + (y - y1) * (x2 - x1) / (y2 - y1) {
                inside = !inside;
            }
        }
        inside
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContourSet {
    pub level: f64,
    pub polylines: Vec<Polyline>,
}

/// Grid edge carrying a crossing: horizontal edges join `(i, j)–(i+1, j)`,
/// vertical edges join `(i, j)–(i, j+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum EdgeKey {
    H(usize, usize),
    V(usize, usize),
}

/// One [`ContourSet`] per level. Cells with a masked corner are skipped and
/// saddle cells are split according to the cell-centre average. An
/// all-masked field yields no sets at all.
pub fn extract_contours(field: &Field, levels: &[f64]) -> Vec<ContourSet> {
    if field.values.iter().all(|v| v.is_none()) {
        return Vec::new();
    }
    levels
        .iter()
        .map(|&level| ContourSet {
            level,
            polylines: contour_level(field, level),
        })
        .collect()
}

fn contour_level(field: &Field, level: f64) -> Vec<Polyline> {
    let g = &field.grid;
    let val = |i: usize, j: usize| field.get(i, j).filter(|v| v.is_finite());
    let point = |e: EdgeKey| -> (f64, f64) {
        let (a, b, (x0, y0), (x1, y1)) = match e {
            EdgeKey::H(i, j) => (val(i, j), val(i + 1, j), (g.x(i), g.y(j)), (g.x(i + 1), g.y(j))),
            EdgeKey::V(i, j) => (val(i, j), val(i, j + 1), (g.x(i), g.y(j)), (g.x(i), g.y(j + 1))),
        };
        let (a, b) = (a.expect("crossing edge is unmasked"), b.expect("crossing edge is unmasked"));
        let s = ((level - a) / (b - a)).clamp(0.0, 1.0);
        (x0 + s * (x1 - x0), y0 + s * (y1 - y0))
    };

    let mut adj: BTreeMap<EdgeKey, Vec<EdgeKey>> = BTreeMap::new();
    let mut link = |a: EdgeKey, b: EdgeKey| {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    };
    for j in 0..g.ny - 1 {
        for i in 0..g.nx - 1 {
            let (Some(v00), Some(v10), Some(v11), Some(v01)) =
                (val(i, j), val(i + 1, j), val(i + 1, j + 1), val(i, j + 1))
            else {
                continue;
            };
            let above = [v00 >= level, v10 >= level, v11 >= level, v01 >= level];
            let bottom = EdgeKey::H(i, j);
            let right = EdgeKey::V(i + 1, j);
            let top = EdgeKey::H(i, j + 1);
            let left = EdgeKey::V(i, j);
            // Edges around each corner, counter-clockwise from (i, j).
            let corner_edges = [(bottom, left), (bottom, right), (right, top), (top, left)];
            let case = above
                .iter()
                .enumerate()
                .fold(0u8, |c, (k, &a)| c | ((a as u8) << k));
            match case {
                0 | 15 => {}
                // one corner differs from the other three
                1 | 14 => link(corner_edges[0].0, corner_edges[0].1),
                2 | 13 => link(corner_edges[1].0, corner_edges[1].1),
                4 | 11 => link(corner_edges[2].0, corner_edges[2].1),
                8 | 7 => link(corner_edges[3].0, corner_edges[3].1),
                // two adjacent corners on each side
                3 | 12 => link(left, right),
                6 | 9 => link(bottom, top),
                5 | 10 => {
                    let centre_above = 0.25 * (v00 + v10 + v11 + v01) >= level;
                    // Isolate the corners whose class differs from the centre.
                    for (k, &(e1, e2)) in corner_edges.iter().enumerate() {
                        if above[k] != centre_above {
                            link(e1, e2);
                        }
                    }
                }
                _ => unreachable!(),
            }
        }
    }

    let mut used: BTreeMap<EdgeKey, bool> = adj.keys().map(|&k| (k, false)).collect();
    let mut out = Vec::new();
    let walk = |start: EdgeKey, used: &mut BTreeMap<EdgeKey, bool>| -> (Vec<EdgeKey>, bool) {
        let mut path = vec![start];
        used.insert(start, true);
        let mut cur = start;
        loop {
            let next = adj[&cur].iter().copied().find(|n| !used[n]);
            match next {
                Some(n) => {
                    used.insert(n, true);
                    path.push(n);
                    cur = n;
                }
                None => {
                    let closed = path.len() > 2 && adj[&cur].contains(&start);
                    return (path, closed);
                }
            }
        }
    };
    let starts: Vec<EdgeKey> = adj.iter().filter(|(_, n)| n.len() == 1).map(|(k, _)| *k).collect();
    for s in starts {
        if !used[&s] {
            let (path, _) = walk(s, &mut used);
            out.push(Polyline {
                points: path.into_iter().map(point).collect(),
                closed: false,
            });
        }
    }
    let rest: Vec<EdgeKey> = adj.keys().copied().collect();
    for s in rest {
        if !used[&s] {
            let (path, closed) = walk(s, &mut used);
            out.push(Polyline {
                points: path.into_iter().map(point).collect(),
                closed,
            });
        }
    }
    out
}

/// `count` levels equally spaced from the 5th to the 95th percentile of the
/// unmasked samples, both ends included. Empty when nothing is unmasked.
pub fn default_levels(field: &Field, count: usize) -> Vec<f64> {
    let mut v: Vec<f64> = field.unmasked().filter(|x| x.is_finite()).collect();
    if v.is_empty() || count == 0 {
        return Vec::new();
    }
    v.sort_by(f64::total_cmp);
    let lo = percentile(&v, 0.05);
    let hi = percentile(&v, 0.95);
    if count == 1 {
        return vec![0.5 * (lo + hi)];
    }
    (0..count)
        .map(|k| lo + (hi - lo) * k as f64 / (count - 1) as f64)
        .collect()
}

fn percentile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let i = pos.floor() as usize;
    let frac = pos - i as f64;
    match sorted.get(i + 1) {
        Some(&next) => sorted[i] + frac * (next - sorted[i]),
        None => sorted[i],
    }
}
