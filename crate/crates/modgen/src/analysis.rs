//! Structural property computation: clustering, degree assortativity,
//! shortest paths, realized mixing, and per-community degree histograms.

use std::collections::{BTreeMap, VecDeque};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use rand::seq::index::sample;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{CommunityAssignment, Graph, Seed};

/// Per-node local clustering coefficients and their average over all nodes.
/// Nodes of degree < 2 contribute 0.
pub fn clustering(g: &Graph) -> (Vec<f64>, f64) {
    let n = g.node_count();
    let per_node: Vec<f64> = (0..n)
        .map(|v| {
            let d = g.degree(v);
            if d < 2 {
                return 0.0;
            }
            let closed: usize = g
                .neighbors(v)
                .iter()
                .map(|&u| g.common_neighbor_count(v, u))
                .sum();
            // each triangle through v is counted twice in the sum
            closed as f64 / (d * (d - 1)) as f64
        })
        .collect();
    let avg = if n == 0 {
        0.0
    } else {
        per_node.iter().sum::<f64>() / n as f64
    };
    (per_node, avg)
}

/// Degree assortativity with a degeneracy marker for regular graphs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Assortativity {
    pub value: f64,
    /// True when endpoint degrees have zero variance; `value` is then 0.
    pub degenerate: bool,
}

/// Pearson correlation of degrees over the 2E ordered edge-endpoint pairs.
pub fn degree_assortativity(g: &Graph) -> Result<Assortativity> {
    if g.edge_count() == 0 {
        return Err(Error::InvalidParameter {
            name: "graph",
            reason: "assortativity needs at least one edge".into(),
        });
    }
    let mut sum_x = 0.0;
    let mut sum_xx = 0.0;
    let mut sum_xy = 0.0;
    let mut pairs = 0.0;
    for (i, j) in g.edges() {
        let (di, dj) = (g.degree(i) as f64, g.degree(j) as f64);
        // both orientations; x and y marginals coincide by symmetry
        sum_x += di + dj;
        sum_xx += di * di + dj * dj;
        sum_xy += 2.0 * di * dj;
        pairs += 2.0;
    }
    let mean = sum_x / pairs;
    let var = sum_xx / pairs - mean * mean;
    let cov = sum_xy / pairs - mean * mean;
    if var <= 1e-12 {
        return Ok(Assortativity {
            value: 0.0,
            degenerate: true,
        });
    }
    Ok(Assortativity {
        value: cov / var,
        degenerate: false,
    })
}

fn bfs_distance_sum(g: &Graph, source: usize) -> (u64, u64) {
    let mut dist = vec![u32::MAX; g.node_count()];
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    let mut sum = 0u64;
    let mut reached = 0u64;
    while let Some(v) = queue.pop_front() {
        for &u in g.neighbors(v) {
            if dist[u] == u32::MAX {
                dist[u] = dist[v] + 1;
                sum += dist[u] as u64;
                reached += 1;
                queue.push_back(u);
            }
        }
    }
    (sum, reached)
}

fn path_length_from_sources(g: &Graph, sources: &[usize]) -> Result<f64> {
    let fold = |acc: (u64, u64), x: (u64, u64)| (acc.0 + x.0, acc.1 + x.1);
    #[cfg(feature = "parallel")]
    let (sum, pairs) = sources
        .par_iter()
        .map(|&s| bfs_distance_sum(g, s))
        .reduce(|| (0, 0), fold);
    #[cfg(not(feature = "parallel"))]
    let (sum, pairs) = sources
        .iter()
        .map(|&s| bfs_distance_sum(g, s))
        .fold((0, 0), fold);
    if pairs == 0 {
        return Err(Error::PathLengthUndefined { size: 1 });
    }
    Ok(sum as f64 / pairs as f64)
}

/// Mean BFS distance over ordered reachable pairs in the largest connected
/// component. `sample_size` below the component size switches to seeded
/// source sampling.
pub fn avg_shortest_path(g: &Graph, sample_size: Option<usize>, seed: Seed) -> Result<f64> {
    let components = g.connected_components();
    let largest = components
        .first()
        .ok_or(Error::PathLengthUndefined { size: 0 })?;
    if largest.len() < 2 {
        return Err(Error::PathLengthUndefined {
            size: largest.len(),
        });
    }
    let sources: Vec<usize> = match sample_size {
        Some(k) if k < largest.len() => {
            let mut rng = seed.rng();
            sample(&mut rng, largest.len(), k)
                .into_iter()
                .map(|idx| largest[idx])
                .collect()
        }
        _ => largest.clone(),
    };
    path_length_from_sources(g, &sources)
}

/// Sequential baseline for the sampled-source path length; same contract as
/// [`avg_shortest_path`].
pub fn avg_shortest_path_sequential(
    g: &Graph,
    sample_size: Option<usize>,
    seed: Seed,
) -> Result<f64> {
    let components = g.connected_components();
    let largest = components
        .first()
        .ok_or(Error::PathLengthUndefined { size: 0 })?;
    if largest.len() < 2 {
        return Err(Error::PathLengthUndefined {
            size: largest.len(),
        });
    }
    let sources: Vec<usize> = match sample_size {
        Some(k) if k < largest.len() => {
            let mut rng = seed.rng();
            sample(&mut rng, largest.len(), k)
                .into_iter()
                .map(|idx| largest[idx])
                .collect()
        }
        _ => largest.clone(),
    };
    let (mut sum, mut pairs) = (0u64, 0u64);
    for &s in &sources {
        let (d, r) = bfs_distance_sum(g, s);
        sum += d;
        pairs += r;
    }
    if pairs == 0 {
        return Err(Error::PathLengthUndefined { size: 1 });
    }
    Ok(sum as f64 / pairs as f64)
}

/// Per-node within-to-total edge ratio (1 - mu_v). An edge counts as within
/// when its endpoints share at least one community. Degree-0 nodes report 0.
pub fn realized_mixing(g: &Graph, asg: &CommunityAssignment) -> Vec<f64> {
    (0..g.node_count())
        .map(|v| {
            let d = g.degree(v);
            if d == 0 {
                return 0.0;
            }
            let within = g
                .neighbors(v)
                .iter()
                .filter(|&&u| asg.shares_community(v, u))
                .count();
            within as f64 / d as f64
        })
        .collect()
}

/// Histogram of full-graph degrees of each community's members.
pub fn per_community_degree_histograms(
    g: &Graph,
    asg: &CommunityAssignment,
) -> Vec<BTreeMap<usize, usize>> {
    let mut histograms = vec![BTreeMap::new(); asg.community_count()];
    for v in 0..g.node_count() {
        for &c in asg.memberships(v) {
            *histograms[c].entry(g.degree(v)).or_insert(0) += 1;
        }
    }
    histograms
}

/// Default source-sampling rule: exact up to 2000 nodes, 256 sources beyond.
pub fn default_path_sample(n: usize) -> Option<usize> {
    if n > 2000 {
        Some(256)
    } else {
        None
    }
}

/// Structural summary of one graph, optionally against a ground-truth
/// assignment.
#[derive(Debug, Clone, Serialize)]
pub struct PropertyReport {
    pub node_count: usize,
    pub edge_count: usize,
    pub avg_degree: f64,
    pub avg_clustering: f64,
    pub degree_assortativity: f64,
    pub assortativity_degenerate: bool,
    /// None when the largest component has fewer than two nodes.
    pub avg_shortest_path: Option<f64>,
    pub degree_histogram: BTreeMap<usize, usize>,
    pub per_node_clustering: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub realized_mixing_per_node: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_mixing: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_community_degree_histograms: Option<Vec<BTreeMap<usize, usize>>>,
}

impl PropertyReport {
    pub fn compute(
        g: &Graph,
        asg: Option<&CommunityAssignment>,
        path_sample: Option<usize>,
        seed: Seed,
    ) -> Result<Self> {
        let n = g.node_count();
        let (per_node_clustering, avg_clustering) = clustering(g);
        let assort = if g.edge_count() > 0 {
            degree_assortativity(g)?
        } else {
            Assortativity {
                value: 0.0,
                degenerate: true,
            }
        };
        let avg_shortest_path = match avg_shortest_path(g, path_sample, seed) {
            Ok(v) => Some(v),
            Err(Error::PathLengthUndefined { .. }) => None,
            Err(e) => return Err(e),
        };
        let mut degree_histogram = BTreeMap::new();
        for v in 0..n {
            *degree_histogram.entry(g.degree(v)).or_insert(0) += 1;
        }
        let mixing = asg.map(|a| realized_mixing(g, a));
        let mean_mixing = mixing.as_ref().map(|m| {
            if m.is_empty() {
                0.0
            } else {
                m.iter().sum::<f64>() / m.len() as f64
            }
        });
        Ok(PropertyReport {
            node_count: n,
            edge_count: g.edge_count(),
            avg_degree: if n == 0 {
                0.0
            } else {
                2.0 * g.edge_count() as f64 / n as f64
            },
            avg_clustering,
            degree_assortativity: assort.value,
            assortativity_degenerate: assort.degenerate,
            avg_shortest_path,
            degree_histogram,
            per_node_clustering,
            realized_mixing_per_node: mixing,
            mean_mixing,
            per_community_degree_histograms: asg.map(|a| per_community_degree_histograms(g, a)),
        })
    }
}
