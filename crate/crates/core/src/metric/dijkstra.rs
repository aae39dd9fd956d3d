//! Deterministic single/multi-source shortest paths on the 8-neighbor grid.
//!
//! Ties are broken lexicographically: among equal-cost heap entries the
//! smallest vertex index pops first, and among equal-cost predecessors the
//! smallest index wins. The settled predecessor array is therefore a pure
//! function of the weights, independent of traversal order, which makes
//! extracted geodesics reproducible and invariant under uniform positive
//! scaling of all edge weights.

use super::LatticeNetwork;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[derive(Copy, Clone, PartialEq)]
struct HeapEntry {
    cost: f64,
    vertex: u32,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // reversed: BinaryHeap is a max-heap, we want the min cost first
        other
            .cost
            .partial_cmp(&self.cost)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) const NO_PRED: u32 = u32::MAX;

pub(crate) struct ShortestPaths {
    pub dist: Vec<f64>,
    pub pred: Vec<u32>,
}

/// Runs Dijkstra from `sources` (distance 0 each) over the vertices allowed
/// by `admissible`. Stops early once `stop_at` (if given) is settled.
pub(crate) fn run(
    net: &LatticeNetwork,
    sources: &[usize],
    admissible: Option<&[bool]>,
    stop_at: Option<&[bool]>,
) -> ShortestPaths {
    let n = net.n();
    let total = n * n;
    let mut dist = vec![f64::INFINITY; total];
    let mut pred = vec![NO_PRED; total];
    let mut settled = vec![false; total];
    let mut heap = BinaryHeap::new();

    let allowed = |v: usize| -> bool {
        net.unmasked(v) && admissible.map_or(true, |adm| adm[v])
    };

    for &s in sources {
        if allowed(s) && dist[s] > 0.0 {
            dist[s] = 0.0;
            heap.push(HeapEntry {
                cost: 0.0,
                vertex: s as u32,
            });
        }
    }

    while let Some(HeapEntry { cost, vertex }) = heap.pop() {
        let v = vertex as usize;
        if settled[v] {
            continue;
        }
        settled[v] = true;
        if let Some(stop) = stop_at {
            if stop[v] {
                break;
            }
        }
        let (vx, vy) = (v % n, v / n);
        net.for_each_neighbor(vx, vy, |u, edge_w| {
            if !allowed(u) || settled[u] {
                return;
            }
            let next = cost + edge_w;
            if next < dist[u] {
                dist[u] = next;
                pred[u] = v as u32;
                heap.push(HeapEntry {
                    cost: next,
                    vertex: u as u32,
                });
            } else if next == dist[u] && (v as u32) < pred[u] {
                pred[u] = v as u32;
            }
        });
    }

    ShortestPaths { dist, pred }
}

/// Walks the predecessor chain from `target` back to a source.
pub(crate) fn extract_path(paths: &ShortestPaths, target: usize) -> Vec<usize> {
    let mut out = vec![target];
    let mut v = target;
    while paths.pred[v] != NO_PRED {
        v = paths.pred[v] as usize;
        out.push(v);
    }
    out.reverse();
    out
}
