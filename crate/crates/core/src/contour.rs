//! Level-set extraction on a rectilinear grid (marching squares).

use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum EdgeKey {
    /// Between `(i, j)` and `(i + 1, j)`.
    AlongX(usize, usize),
    /// Between `(i, j)` and `(i, j + 1)`.
    AlongY(usize, usize),
}

/// Polylines of the `level` set of a grid function.
///
/// `values[i * ys.len() + j]` is the value at `(xs[i], ys[j])`. Crossings are
/// placed on cell edges by linear interpolation; saddle cells are split
/// according to the mean of the four corners. Closed loops repeat their first
/// point at the end.
pub fn contour_lines(xs: &[f64], ys: &[f64], values: &[f64], level: f64) -> Vec<Vec<(f64, f64)>> {
    let (nx, ny) = (xs.len(), ys.len());
    assert_eq!(values.len(), nx * ny, "grid shape mismatch");
    if nx < 2 || ny < 2 {
        return Vec::new();
    }
    let v = |i: usize, j: usize| values[i * ny + j];
    let above = |i: usize, j: usize| v(i, j) >= level;

    let point = |key: EdgeKey| -> (f64, f64) {
        let ((ia, ja), (ib, jb)) = match key {
            EdgeKey::AlongX(i, j) => ((i, j), (i + 1, j)),
            EdgeKey::AlongY(i, j) => ((i, j), (i, j + 1)),
        };
        let (va, vb) = (v(ia, ja), v(ib, jb));
        let w = if vb == va { 0.5 } else { (level - va) / (vb - va) };
        (
            xs[ia] + w * (xs[ib] - xs[ia]),
            ys[ja] + w * (ys[jb] - ys[ja]),
        )
    };

    let mut segments: Vec<(EdgeKey, EdgeKey)> = Vec::new();
    for i in 0..nx - 1 {
        for j in 0..ny - 1 {
            // corners counter-clockwise from (i, j)
            let case = (above(i, j) as u8)
                | (above(i + 1, j) as u8) << 1
                | (above(i + 1, j + 1) as u8) << 2
                | (above(i, j + 1) as u8) << 3;
            let bottom = EdgeKey::AlongX(i, j);
            let right = EdgeKey::AlongY(i + 1, j);
            let top = EdgeKey::AlongX(i, j + 1);
            let left = EdgeKey::AlongY(i, j);
            match case {
                0 | 15 => {}
                1 | 14 => segments.push((left, bottom)),
                2 | 13 => segments.push((bottom, right)),
                3 | 12 => segments.push((left, right)),
                4 | 11 => segments.push((right, top)),
                6 | 9 => segments.push((bottom, top)),
                7 | 8 => segments.push((left, top)),
                5 | 10 => {
                    let centre = 0.25 * (v(i, j) + v(i + 1, j) + v(i + 1, j + 1) + v(i, j + 1));
                    let centre_above = centre >= level;
                    // case 5: (i,j) and (i+1,j+1) above
                    if (case == 5) == centre_above {
                        segments.push((left, top));
                        segments.push((bottom, right));
                    } else {
                        segments.push((left, bottom));
                        segments.push((right, top));
                    }
                }
                _ => unreachable!(),
            }
        }
    }

    let mut by_edge: HashMap<EdgeKey, Vec<usize>> = HashMap::new();
    for (s, (a, b)) in segments.iter().enumerate() {
        by_edge.entry(*a).or_default().push(s);
        by_edge.entry(*b).or_default().push(s);
    }

    let mut used = vec![false; segments.len()];
    let mut lines = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let (a, b) = segments[start];
        let mut chain = std::collections::VecDeque::from([a, b]);
        // extend forward from the back, then backward from the front
        for forward in [true, false] {
            loop {
                let end = if forward { *chain.back().unwrap() } else { *chain.front().unwrap() };
                let next = by_edge[&end].iter().copied().find(|&s| !used[s]);
                let Some(s) = next else { break };
                used[s] = true;
                let (p, q) = segments[s];
                let other = if p == end { q } else { p };
                if forward {
                    chain.push_back(other);
                } else {
                    chain.push_front(other);
                }
            }
        }
        lines.push(chain.into_iter().map(point).collect());
    }
    lines
}
