//! Bounding-box tree for nearest-neighbour queries under quotient metrics.
//!
//! The tree only needs a metric that can bound from below the distance from
//! a query to any point of an axis-aligned box, so it serves both the flat
//! torus metrics and the Heisenberg quotient distance.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

/// A distance on fractional coordinates plus a box lower bound.
pub trait Metric: Sync {
    fn dist(&self, query: &[f64], point: &[f64]) -> f64;
    /// Lower bound of `dist(query, y)` over `lo ≤ y ≤ hi`.
    fn lower_bound(&self, query: &[f64], lo: &[f64], hi: &[f64]) -> f64;
}

/// Flattened point cloud of fixed dimension.
#[derive(Clone, Debug, Default)]
pub struct Cloud {
    dim: usize,
    data: Vec<f64>,
}

impl Cloud {
    pub fn new(dim: usize) -> Cloud {
        Cloud { dim, data: Vec::new() }
    }

    pub fn from_flat(dim: usize, data: Vec<f64>) -> Cloud {
        assert!(dim > 0 && data.len() % dim == 0, "flat data must hold whole points");
        Cloud { dim, data }
    }

    pub fn from_points(dim: usize, points: &[Vec<f64>]) -> Cloud {
        let mut c = Cloud::new(dim);
        for p in points {
            c.push(p);
        }
        c
    }

    pub fn push(&mut self, p: &[f64]) {
        assert_eq!(p.len(), self.dim);
        self.data.extend_from_slice(p);
    }

    pub fn extend(&mut self, other: &Cloud) {
        assert_eq!(self.dim, other.dim);
        self.data.extend_from_slice(&other.data);
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        if self.dim == 0 {
            0
        } else {
            self.data.len() / self.dim
        }
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim.max(1))
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }
}

const LEAF: usize = 12;

struct Node {
    start: usize,
    end: usize,
    // children indices; zero marks a leaf since the root is never a child
    left: usize,
    right: usize,
}

pub struct KdTree {
    dim: usize,
    points: Vec<f64>,
    nodes: Vec<Node>,
    // per-node bounding boxes, `dim` entries each
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl KdTree {
    pub fn build(cloud: &Cloud) -> KdTree {
        let dim = cloud.dim();
        let mut order: Vec<usize> = (0..cloud.len()).collect();
        let mut tree = KdTree {
            dim,
            points: Vec::with_capacity(cloud.as_flat().len()),
            nodes: Vec::new(),
            lo: Vec::new(),
            hi: Vec::new(),
        };
        if !order.is_empty() {
            tree.build_node(cloud, &mut order, 0);
            for &i in &order {
                tree.points.extend_from_slice(cloud.point(i));
            }
        }
        tree
    }

    fn build_node(&mut self, cloud: &Cloud, order: &mut [usize], offset: usize) -> usize {
        let dim = self.dim;
        let mut lo = vec![f64::INFINITY; dim];
        let mut hi = vec![f64::NEG_INFINITY; dim];
        for &i in order.iter() {
            for (d, &x) in cloud.point(i).iter().enumerate() {
                lo[d] = lo[d].min(x);
                hi[d] = hi[d].max(x);
            }
        }
        let id = self.nodes.len();
        self.nodes.push(Node { start: offset, end: offset + order.len(), left: 0, right: 0 });
        self.lo.extend_from_slice(&lo);
        self.hi.extend_from_slice(&hi);
        if order.len() > LEAF {
            let axis = (0..dim)
                .max_by(|&a, &b| (hi[a] - lo[a]).total_cmp(&(hi[b] - lo[b])))
                .unwrap_or(0);
            let mid = order.len() / 2;
            order.select_nth_unstable_by(mid, |&a, &b| cloud.point(a)[axis].total_cmp(&cloud.point(b)[axis]));
            let (left, right) = order.split_at_mut(mid);
            let l = self.build_node(cloud, left, offset);
            let r = self.build_node(cloud, right, offset + mid);
            self.nodes[id].left = l;
            self.nodes[id].right = r;
        }
        id
    }

    pub fn len(&self) -> usize {
        self.points.len() / self.dim.max(1)
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn bbox(&self, node: usize) -> (&[f64], &[f64]) {
        let r = node * self.dim..(node + 1) * self.dim;
        (&self.lo[r.clone()], &self.hi[r])
    }

    /// Distance from `q` to the nearest point; returns early with some value
    /// `≤ good_enough` as soon as one is found.
    pub fn nearest<M: Metric + ?Sized>(&self, metric: &M, q: &[f64], good_enough: f64) -> f64 {
        let mut best = f64::INFINITY;
        if self.nodes.is_empty() {
            return best;
        }
        let mut stack: Vec<(usize, f64)> = vec![(0, 0.0)];
        while let Some((node, bound)) = stack.pop() {
            if bound >= best {
                continue;
            }
            let n = &self.nodes[node];
            if n.left == 0 {
                for i in n.start..n.end {
                    let d = metric.dist(q, &self.points[i * self.dim..(i + 1) * self.dim]);
                    if d < best {
                        best = d;
                        if best <= good_enough {
                            return best;
                        }
                    }
                }
                continue;
            }
            let (ll, lh) = self.bbox(n.left);
            let (rl, rh) = self.bbox(n.right);
            let bl = metric.lower_bound(q, ll, lh);
            let br = metric.lower_bound(q, rl, rh);
            // Push the farther child first so the nearer one is explored first.
            if bl <= br {
                stack.push((n.right, br));
                stack.push((n.left, bl));
            } else {
                stack.push((n.left, bl));
                stack.push((n.right, br));
            }
        }
        best
    }
}

/// `sup_{x ∈ from} dist(x, to)`, starting from a known lower bound `floor`
/// for the final answer (queries that cannot beat it stop early).
pub fn directed_hausdorff<M: Metric + ?Sized>(metric: &M, from: &Cloud, to: &KdTree, floor: f64) -> f64 {
    let running = AtomicU64::new(floor.max(0.0).to_bits());
    from.as_flat().par_chunks(from.dim() * 256).for_each(|chunk| {
        for q in chunk.chunks_exact(from.dim()) {
            let current = f64::from_bits(running.load(Ordering::Relaxed));
            let d = to.nearest(metric, q, current);
            if d > current {
                // Non-negative floats order like their bit patterns.
                running.fetch_max(d.to_bits(), Ordering::Relaxed);
            }
        }
    });
    f64::from_bits(running.load(Ordering::Relaxed))
}

/// Symmetric Hausdorff distance of two finite clouds; `None` if either is empty.
pub fn hausdorff<M: Metric + ?Sized>(metric: &M, a: &Cloud, b: &Cloud) -> Option<f64> {
    if a.is_empty() || b.is_empty() {
        return None;
    }
    let tb = KdTree::build(b);
    let ab = directed_hausdorff(metric, a, &tb, 0.0);
    let ta = KdTree::build(a);
    Some(directed_hausdorff(metric, b, &ta, ab))
}

/// Nearest distance from every query to the cloud.
pub fn nearest_all<M: Metric + ?Sized>(metric: &M, queries: &[Vec<f64>], tree: &KdTree) -> Vec<f64> {
    queries.par_iter().map(|q| tree.nearest(metric, q, -1.0)).collect()
}
