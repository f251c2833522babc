//! Undirected simple graph and community membership containers.
//!
//! Node ids are dense 0-based integers. Adjacency is kept as per-node sorted
//! vectors so neighbor intersection runs in O(min degree) and iteration order
//! is deterministic.

use std::collections::VecDeque;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Seed for a reproducible generation run. Identical seed and parameters
/// replay bit-identically; the underlying stream cipher RNG (ChaCha8) is
/// platform-independent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seed(pub u64);

impl Seed {
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }

    /// Derived seed for replicate `index` of a sweep (base + index).
    pub fn replicate(self, index: u64) -> Seed {
        Seed(self.0.wrapping_add(index))
    }

    /// Decorrelated sub-seed for a pipeline stage.
    pub(crate) fn derive(self, tag: u64) -> Seed {
        Seed(
            self.0
                .wrapping_mul(0x9E37_79B9_7F4A_7C15)
                .wrapping_add(tag)
                .rotate_left(17)
                ^ tag.wrapping_mul(0xBF58_476D_1CE4_E5B9),
        )
    }
}

/// Undirected simple graph with dense 0-based node ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    pub fn new(node_count: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); node_count],
            edge_count: 0,
        }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i != j && self.adjacency[i].binary_search(&j).is_ok()
    }

    fn check_id(&self, id: usize) -> Result<()> {
        if id >= self.node_count() {
            return Err(Error::NodeOutOfRange {
                id,
                node_count: self.node_count(),
            });
        }
        Ok(())
    }

    /// Inserts the undirected edge (i, j). Returns false without mutating on
    /// self-loops and duplicates.
    pub fn add_edge(&mut self, i: usize, j: usize) -> Result<bool> {
        self.check_id(i)?;
        self.check_id(j)?;
        if i == j {
            return Ok(false);
        }
        match self.adjacency[i].binary_search(&j) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.adjacency[i].insert(pos, j);
                let pos = self.adjacency[j].binary_search(&i).unwrap_err();
                self.adjacency[j].insert(pos, i);
                self.edge_count += 1;
                Ok(true)
            }
        }
    }

    /// Removes the undirected edge (i, j). Returns false if absent.
    pub fn remove_edge(&mut self, i: usize, j: usize) -> Result<bool> {
        self.check_id(i)?;
        self.check_id(j)?;
        if i == j {
            return Ok(false);
        }
        match self.adjacency[i].binary_search(&j) {
            Err(_) => Ok(false),
            Ok(pos) => {
                self.adjacency[i].remove(pos);
                let pos = self.adjacency[j].binary_search(&i).unwrap();
                self.adjacency[j].remove(pos);
                self.edge_count -= 1;
                Ok(true)
            }
        }
    }

    /// |N(i) ∩ N(j)| via merge over the sorted adjacency lists.
    pub fn common_neighbor_count(&self, i: usize, j: usize) -> usize {
        let (a, b) = (&self.adjacency[i], &self.adjacency[j]);
        let (mut x, mut y, mut count) = (0, 0, 0);
        while x < a.len() && y < b.len() {
            match a[x].cmp(&b[y]) {
                std::cmp::Ordering::Less => x += 1,
                std::cmp::Ordering::Greater => y += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    x += 1;
                    y += 1;
                }
            }
        }
        count
    }

    /// Undirected edges as (i, j) with i < j, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, nbrs)| nbrs.iter().filter(move |&&j| i < j).map(move |&j| (i, j)))
    }

    /// Maximal connected node sets, ordered by descending size then smallest
    /// member id. Members within each component are sorted ascending.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut components = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut component = Vec::new();
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(v) = queue.pop_front() {
                component.push(v);
                for &u in self.neighbors(v) {
                    if !seen[u] {
                        seen[u] = true;
                        queue.push_back(u);
                    }
                }
            }
            component.sort_unstable();
            components.push(component);
        }
        components.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
        components
    }
}

/// Node-to-community memberships; supports overlap. Ids are dense 0-based on
/// both axes. `primary` records each node's first-assigned community so an
/// overlapping assignment has a deterministic hard reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommunityAssignment {
    memberships: Vec<Vec<usize>>,
    primary: Vec<Option<usize>>,
    community_count: usize,
}

impl CommunityAssignment {
    pub fn new(node_count: usize, community_count: usize) -> Self {
        CommunityAssignment {
            memberships: vec![Vec::new(); node_count],
            primary: vec![None; node_count],
            community_count,
        }
    }

    /// Builds a hard partition from a per-node label vector.
    pub fn from_labels(labels: &[usize], community_count: usize) -> Self {
        let mut asg = CommunityAssignment::new(labels.len(), community_count);
        for (node, &label) in labels.iter().enumerate() {
            asg.add_membership(node, label);
        }
        asg
    }

    pub fn node_count(&self) -> usize {
        self.memberships.len()
    }

    pub fn community_count(&self) -> usize {
        self.community_count
    }

    pub fn memberships(&self, node: usize) -> &[usize] {
        &self.memberships[node]
    }

    pub fn is_member(&self, node: usize, community: usize) -> bool {
        self.memberships[node].binary_search(&community).is_ok()
    }

    /// Adds a membership; returns false if already present.
    pub fn add_membership(&mut self, node: usize, community: usize) -> bool {
        assert!(
            community < self.community_count,
            "community id out of range"
        );
        match self.memberships[node].binary_search(&community) {
            Ok(_) => false,
            Err(pos) => {
                self.memberships[node].insert(pos, community);
                if self.primary[node].is_none() {
                    self.primary[node] = Some(community);
                }
                true
            }
        }
    }

    pub fn remove_membership(&mut self, node: usize, community: usize) -> bool {
        match self.memberships[node].binary_search(&community) {
            Err(_) => false,
            Ok(pos) => {
                self.memberships[node].remove(pos);
                if self.primary[node] == Some(community) {
                    self.primary[node] = self.memberships[node].first().copied();
                }
                true
            }
        }
    }

    /// True when endpoints share at least one community.
    pub fn shares_community(&self, u: usize, v: usize) -> bool {
        let (a, b) = (&self.memberships[u], &self.memberships[v]);
        let (mut x, mut y) = (0, 0);
        while x < a.len() && y < b.len() {
            match a[x].cmp(&b[y]) {
                std::cmp::Ordering::Less => x += 1,
                std::cmp::Ordering::Greater => y += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    /// Member lists per community, sorted.
    pub fn community_members(&self) -> Vec<Vec<usize>> {
        let mut members = vec![Vec::new(); self.community_count];
        for (node, comms) in self.memberships.iter().enumerate() {
            for &c in comms {
                members[c].push(node);
            }
        }
        members
    }

    pub fn community_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.community_count];
        for comms in &self.memberships {
            for &c in comms {
                sizes[c] += 1;
            }
        }
        sizes
    }

    pub fn is_overlapping(&self) -> bool {
        self.memberships.iter().any(|m| m.len() > 1)
    }

    /// Per-node label vector; errors on overlap or unassigned nodes.
    pub fn labels(&self) -> Result<Vec<usize>> {
        self.memberships
            .iter()
            .enumerate()
            .map(|(node, comms)| match comms.as_slice() {
                [single] => Ok(*single),
                [] | [_, ..] => Err(Error::OverlappingPartition { node }),
            })
            .collect()
    }

    /// Hard reduction of an overlapping assignment: each node keeps its
    /// first-assigned community.
    pub fn primary_labels(&self) -> Vec<usize> {
        self.primary
            .iter()
            .map(|p| p.expect("node with no membership"))
            .collect()
    }
}
