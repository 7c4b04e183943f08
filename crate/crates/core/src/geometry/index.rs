//! Static kd-tree over the points of a cloud.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::{Real, Vec3};

const LEAF_SIZE: usize = 8;
const NO_CHILD: u32 = u32::MAX;

#[derive(Clone, Debug)]
struct Node<T> {
    lo: u32,
    hi: u32,
    axis: u8,
    split: T,
    left: u32,
    right: u32,
}

/// Acceleration structure for k-nearest-neighbour and radius queries.
///
/// Distances are compared as squared Euclidean distances. Query results are
/// deterministic: radius queries return ascending indices, k-NN queries
/// return indices by ascending distance with ties broken by ascending index.
#[derive(Clone, Debug)]
pub struct SpatialIndex<T> {
    points: Vec<Vec3<T>>,
    order: Vec<u32>,
    nodes: Vec<Node<T>>,
}

#[derive(Clone, Copy, Debug)]
struct Candidate<T> {
    dist2: T,
    index: usize,
}

impl<T: Real> PartialEq for Candidate<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T: Real> Eq for Candidate<T> {}
impl<T: Real> PartialOrd for Candidate<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Real> Ord for Candidate<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dist2
            .partial_cmp(&other.dist2)
            .unwrap_or(Ordering::Equal)
            .then(self.index.cmp(&other.index))
    }
}

impl<T: Real> SpatialIndex<T> {
    pub fn build(points: &[Vec3<T>]) -> Self {
        assert!(
            points.len() < NO_CHILD as usize,
            "too many points for the spatial index"
        );
        let mut index = Self {
            points: points.to_vec(),
            order: (0..points.len() as u32).collect(),
            nodes: Vec::with_capacity(2 * points.len() / LEAF_SIZE + 1),
        };
        if !points.is_empty() {
            index.build_node(0, points.len());
        }
        index
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn build_node(&mut self, lo: usize, hi: usize) -> u32 {
        let id = self.nodes.len() as u32;
        self.nodes.push(Node {
            lo: lo as u32,
            hi: hi as u32,
            axis: 0,
            split: T::zero(),
            left: NO_CHILD,
            right: NO_CHILD,
        });
        if hi - lo <= LEAF_SIZE {
            return id;
        }

        let mut min = [T::infinity(); 3];
        let mut max = [T::neg_infinity(); 3];
        for &i in &self.order[lo..hi] {
            let p = self.points[i as usize];
            for a in 0..3 {
                min[a] = min[a].min(p.coord(a));
                max[a] = max[a].max(p.coord(a));
            }
        }
        let axis = (0..3)
            .max_by(|&a, &b| {
                (max[a] - min[a])
                    .partial_cmp(&(max[b] - min[b]))
                    .unwrap_or(Ordering::Equal)
                    .then(b.cmp(&a))
            })
            .unwrap_or(0);

        let mid = (lo + hi) / 2;
        let points = &self.points;
        self.order[lo..hi].select_nth_unstable_by(mid - lo, |&a, &b| {
            points[a as usize]
                .coord(axis)
                .partial_cmp(&points[b as usize].coord(axis))
                .unwrap_or(Ordering::Equal)
                .then(a.cmp(&b))
        });
        let split = self.points[self.order[mid] as usize].coord(axis);

        let left = self.build_node(lo, mid);
        let right = self.build_node(mid, hi);
        let node = &mut self.nodes[id as usize];
        node.axis = axis as u8;
        node.split = split;
        node.left = left;
        node.right = right;
        id
    }

    /// All indices `i` with `|points[i] - query|^2 <= radius^2`, ascending.
    pub fn radius_query(&self, query: Vec3<T>, radius: T) -> Vec<usize> {
        let mut out = Vec::new();
        self.radius_query_into(query, radius, &mut out);
        out
    }

    /// Like [`radius_query`](Self::radius_query) but reuses `out`.
    pub fn radius_query_into(&self, query: Vec3<T>, radius: T, out: &mut Vec<usize>) {
        out.clear();
        if self.nodes.is_empty() || radius < T::zero() {
            return;
        }
        let r2 = radius * radius;
        let mut stack = vec![0u32];
        while let Some(id) = stack.pop() {
            let node = &self.nodes[id as usize];
            if node.left == NO_CHILD {
                for &i in &self.order[node.lo as usize..node.hi as usize] {
                    if self.points[i as usize].distance_squared(query) <= r2 {
                        out.push(i as usize);
                    }
                }
                continue;
            }
            let diff = query.coord(node.axis as usize) - node.split;
            let (near, far) = if diff <= T::zero() {
                (node.left, node.right)
            } else {
                (node.right, node.left)
            };
            if diff * diff <= r2 {
                stack.push(far);
            }
            stack.push(near);
        }
        out.sort_unstable();
    }

    /// The `k` nearest indices (fewer if the index holds fewer points),
    /// ordered by ascending distance, ties by ascending index.
    pub fn knn(&self, query: Vec3<T>, k: usize) -> Vec<usize> {
        self.knn_with_distances(query, k)
            .into_iter()
            .map(|(i, _)| i)
            .collect()
    }

    /// k-NN returning `(index, squared distance)` pairs.
    pub fn knn_with_distances(&self, query: Vec3<T>, k: usize) -> Vec<(usize, T)> {
        if k == 0 || self.nodes.is_empty() {
            return Vec::new();
        }
        let mut heap: BinaryHeap<Candidate<T>> = BinaryHeap::with_capacity(k + 1);
        self.knn_node(0, query, k, &mut heap);
        let mut found = heap.into_vec();
        found.sort();
        found.into_iter().map(|c| (c.index, c.dist2)).collect()
    }

    fn knn_node(&self, id: u32, query: Vec3<T>, k: usize, heap: &mut BinaryHeap<Candidate<T>>) {
        let node = &self.nodes[id as usize];
        if node.left == NO_CHILD {
            for &i in &self.order[node.lo as usize..node.hi as usize] {
                let cand = Candidate {
                    dist2: self.points[i as usize].distance_squared(query),
                    index: i as usize,
                };
                if heap.len() < k {
                    heap.push(cand);
                } else if let Some(worst) = heap.peek() {
                    if cand < *worst {
                        heap.pop();
                        heap.push(cand);
                    }
                }
            }
            return;
        }
        let diff = query.coord(node.axis as usize) - node.split;
        let (near, far) = if diff <= T::zero() {
            (node.left, node.right)
        } else {
            (node.right, node.left)
        };
        self.knn_node(near, query, k, heap);
        let visit_far = heap.len() < k || heap.peek().is_some_and(|w| diff * diff <= w.dist2);
        if visit_far {
            self.knn_node(far, query, k, heap);
        }
    }

    /// Nearest index to `query`, lowest index on ties.
    pub fn nearest(&self, query: Vec3<T>) -> Option<usize> {
        self.knn(query, 1).first().copied()
    }
}
