//! Waypoint sequencing: nearest-neighbour construction refined by
//! best-improvement 2-opt.

use crate::Real;
use crate::Vec3;

/// Minimum length decrease for a 2-opt move to count as an improvement, m.
pub const IMPROVEMENT_EPS: f64 = 1e-12;

/// Length of the path visiting `points` in `order`; `closed` adds the
/// return leg to the start.
pub fn tour_length<T: Real>(points: &[Vec3<T>], order: &[usize], closed: bool) -> T {
    let mut total: T = order
        .windows(2)
        .map(|w| points[w[0]].distance(points[w[1]]))
        .sum();
    if closed && order.len() > 2 {
        total += points[order[order.len() - 1]].distance(points[order[0]]);
    }
    total
}

/// Greedy tour from `start`, always moving to the closest unvisited point
/// (lowest index on ties).
pub fn nearest_neighbour_tour<T: Real>(points: &[Vec3<T>], start: usize) -> Vec<usize> {
    let n = points.len();
    if n == 0 {
        return Vec::new();
    }
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut current = start;
    visited[current] = true;
    order.push(current);
    for _ in 1..n {
        let mut next = usize::MAX;
        let mut best = T::infinity();
        for (i, &seen) in visited.iter().enumerate() {
            if !seen {
                let d = points[current].distance(points[i]);
                if d < best {
                    best = d;
                    next = i;
                }
            }
        }
        visited[next] = true;
        order.push(next);
        current = next;
    }
    order
}

/// Change in length from reversing `order[i..=j]`.
fn reversal_delta<T: Real>(
    points: &[Vec3<T>],
    order: &[usize],
    i: usize,
    j: usize,
    closed: bool,
) -> T {
    let n = order.len();
    let d = |a: usize, b: usize| points[order[a]].distance(points[order[b]]);
    let mut delta = T::zero();
    if closed {
        if i == 0 && j == n - 1 {
            return T::zero();
        }
        let prev = (i + n - 1) % n;
        let next = (j + 1) % n;
        delta += d(prev, j) + d(i, next) - d(prev, i) - d(j, next);
    } else {
        if i > 0 {
            delta += d(i - 1, j) - d(i - 1, i);
        }
        if j + 1 < n {
            delta += d(i, j + 1) - d(j, j + 1);
        }
    }
    delta
}

/// Applies the best improving segment reversal until none improves by more
/// than [`IMPROVEMENT_EPS`]. Returns the refined order and the number of
/// moves applied.
pub fn two_opt<T: Real>(
    points: &[Vec3<T>],
    mut order: Vec<usize>,
    closed: bool,
) -> (Vec<usize>, usize) {
    let n = order.len();
    if n < 3 {
        return (order, 0);
    }
    let eps = T::lit(IMPROVEMENT_EPS);
    let mut moves = 0;
    loop {
        let mut best = -eps;
        let mut best_move = None;
        for i in 0..n - 1 {
            for j in i + 1..n {
                let delta = reversal_delta(points, &order, i, j, closed);
                if delta < best {
                    best = delta;
                    best_move = Some((i, j));
                }
            }
        }
        match best_move {
            Some((i, j)) => {
                order[i..=j].reverse();
                moves += 1;
            }
            None => return (order, moves),
        }
    }
}
