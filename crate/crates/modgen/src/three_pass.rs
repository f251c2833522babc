//! Generalized 3-pass benchmark: sample community capacities, assign nodes
//! (LFR / CN / NE variants), then overlay-rewire the start graph until each
//! node's between-community edge fraction approaches the mixing target mu.

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classic::{DiscretePowerlaw, ThetaG};
use crate::error::{Error, Result};
use crate::graph::{CommunityAssignment, Graph, Seed};

/// Community-side parameters of the 3-pass pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaC {
    /// Target mixing: fraction of each node's edges leading outside its
    /// community.
    pub mu: f64,
    /// Power-law exponent of the community-size distribution.
    pub beta_exp: f64,
    pub c_min: usize,
    pub c_max: usize,
}

impl ThetaC {
    /// The paper-style preset: size exponent 2 on [20, 50].
    pub fn preset(mu: f64) -> Self {
        ThetaC {
            mu,
            beta_exp: 2.0,
            c_min: 20,
            c_max: 50,
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        if !(0.0..=1.0).contains(&self.mu) {
            return Err(Error::InvalidParameter {
                name: "mu",
                reason: format!("need 0 <= mu <= 1, got {}", self.mu),
            });
        }
        if self.c_min < 2 || self.c_min > self.c_max || self.c_max > n {
            return Err(Error::InvalidParameter {
                name: "c_min",
                reason: format!(
                    "need 2 <= c_min <= c_max <= n, got c_min={}, c_max={}, n={n}",
                    self.c_min, self.c_max
                ),
            });
        }
        Ok(())
    }
}

/// Node-to-community assignment strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AssignStrategy {
    /// Uniform random placement (original LFR).
    Lfr,
    /// Placement weighted by already-placed common neighbors.
    Cn,
    /// Neighbor expansion: BFS growth from random seeds.
    Ne,
}

impl std::str::FromStr for AssignStrategy {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "lfr" => Ok(AssignStrategy::Lfr),
            "cn" => Ok(AssignStrategy::Cn),
            "ne" => Ok(AssignStrategy::Ne),
            other => Err(format!("unknown assignment strategy `{other}`")),
        }
    }
}

/// Edge edits performed by the overlay pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewireStats {
    pub edges_added: usize,
    pub edges_removed: usize,
    pub rewired_total: usize,
}

impl RewireStats {
    fn new(edges_added: usize, edges_removed: usize) -> Self {
        RewireStats {
            edges_added,
            edges_removed,
            rewired_total: edges_added + edges_removed,
        }
    }
}

/// Samples community capacities from the size power law until they cover all
/// n nodes. The final draw is clamped so the sum is exactly n; a clamped
/// remainder below c_min is merged into the previous community.
pub fn sample_community_sizes(n: usize, theta: &ThetaC, seed: Seed) -> Result<Vec<usize>> {
    theta.validate(n)?;
    let dist = DiscretePowerlaw::new(theta.beta_exp, theta.c_min, theta.c_max);
    let mut rng = seed.rng();
    let mut sizes: Vec<usize> = Vec::new();
    let mut total = 0usize;
    while total < n {
        let s = dist.sample(&mut rng);
        sizes.push(s);
        total += s;
    }
    let excess = total - n;
    let last = sizes.len() - 1;
    sizes[last] -= excess;
    if sizes[last] < theta.c_min {
        let remainder = sizes.pop().unwrap();
        if let Some(prev) = sizes.last_mut() {
            *prev += remainder;
        } else {
            // a single community absorbing everything; n >= c_min was checked
            sizes.push(n);
        }
    }
    debug_assert_eq!(sizes.iter().sum::<usize>(), n);
    Ok(sizes)
}

fn feasible(capacity: usize, mu: f64, degree: usize) -> bool {
    capacity as f64 >= (1.0 - mu) * degree as f64
}

/// Errors when some node cannot fit any sampled community under mu.
fn check_feasibility(g: &Graph, sizes: &[usize], mu: f64) -> Result<()> {
    let max_capacity = *sizes.iter().max().expect("at least one community");
    for v in 0..g.node_count() {
        if !feasible(max_capacity, mu, g.degree(v)) {
            return Err(Error::InfeasibleNode {
                node: v,
                degree: g.degree(v),
                required: (1.0 - mu) * g.degree(v) as f64,
                c_max: max_capacity,
            });
        }
    }
    Ok(())
}

/// Mutable assignment state shared by the three variants.
struct AssignState<'a> {
    g: &'a Graph,
    sizes: &'a [usize],
    mu: f64,
    assigned: Vec<Option<usize>>,
    members: Vec<Vec<usize>>,
}

impl<'a> AssignState<'a> {
    fn new(g: &'a Graph, sizes: &'a [usize], mu: f64) -> Self {
        AssignState {
            g,
            sizes,
            mu,
            assigned: vec![None; g.node_count()],
            members: vec![Vec::new(); sizes.len()],
        }
    }

    fn place(&mut self, v: usize, c: usize) {
        debug_assert!(self.assigned[v].is_none());
        self.assigned[v] = Some(c);
        self.members[c].push(v);
    }

    fn evict(&mut self, c: usize, member_index: usize) -> usize {
        let u = self.members[c].swap_remove(member_index);
        self.assigned[u] = None;
        u
    }

    fn is_full(&self, c: usize) -> bool {
        self.members[c].len() >= self.sizes[c]
    }

    /// Resolves the homeless queue: random node retries random communities,
    /// ejecting a member when the target is full. Prefers ejecting a member
    /// of strictly smaller degree, falling back to any member.
    fn resolve_homeless(&mut self, mut homeless: Vec<usize>, rng: &mut ChaCha8Rng) -> Result<()> {
        let cap = 50 * self.g.node_count().max(1);
        let mut iterations = 0usize;
        while let Some(&v) = homeless.choose(rng) {
            iterations += 1;
            if iterations > cap {
                return Err(Error::AssignmentStalled {
                    node: v,
                    iterations: cap,
                });
            }
            let c = rng.random_range(0..self.sizes.len());
            if !feasible(self.sizes[c], self.mu, self.g.degree(v)) {
                continue;
            }
            let pos = homeless.iter().position(|&x| x == v).unwrap();
            homeless.swap_remove(pos);
            self.place(v, c);
            if self.members[c].len() > self.sizes[c] {
                let smaller: Vec<usize> = (0..self.members[c].len())
                    .filter(|&idx| {
                        let u = self.members[c][idx];
                        u != v && self.g.degree(u) < self.g.degree(v)
                    })
                    .collect();
                let idx = match smaller.choose(rng) {
                    Some(&idx) => idx,
                    None => {
                        // any member other than the one just placed
                        let candidates: Vec<usize> = (0..self.members[c].len())
                            .filter(|&idx| self.members[c][idx] != v)
                            .collect();
                        *candidates.choose(rng).expect("community holds > 1 node")
                    }
                };
                let evicted = self.evict(c, idx);
                homeless.push(evicted);
            }
        }
        Ok(())
    }

    fn finish(self) -> CommunityAssignment {
        let mut asg = CommunityAssignment::new(self.g.node_count(), self.sizes.len());
        for (v, c) in self.assigned.iter().enumerate() {
            asg.add_membership(v, c.expect("assignment left a node unplaced"));
        }
        asg
    }
}

/// Original LFR assignment: each node tries one uniformly random non-full
/// community; infeasible nodes queue as homeless.
pub fn assign_lfr(g: &Graph, sizes: &[usize], mu: f64, seed: Seed) -> Result<CommunityAssignment> {
    check_feasibility(g, sizes, mu)?;
    let mut rng = seed.rng();
    let mut state = AssignState::new(g, sizes, mu);
    let mut homeless = Vec::new();
    let mut nonfull: Vec<usize> = (0..sizes.len()).filter(|&c| sizes[c] > 0).collect();
    for v in 0..g.node_count() {
        let slot = rng.random_range(0..nonfull.len());
        let c = nonfull[slot];
        if feasible(sizes[c], mu, g.degree(v)) {
            state.place(v, c);
            if state.is_full(c) {
                nonfull.swap_remove(slot);
            }
        } else {
            homeless.push(v);
        }
    }
    state.resolve_homeless(homeless, &mut rng)?;
    Ok(state.finish())
}

/// Placement weights for the CN variant: 1 plus the count of v's already
/// placed neighbors per community.
fn cn_weights(state: &AssignState<'_>, v: usize) -> Vec<f64> {
    let mut weights = vec![1.0; state.sizes.len()];
    for &u in state.g.neighbors(v) {
        if let Some(c) = state.assigned[u] {
            weights[c] += 1.0;
        }
    }
    weights
}

/// Common-neighbor assignment: like LFR but the community is drawn with
/// probability proportional to 1 + placed neighbors of v in it, restricted to
/// non-full feasible communities.
pub fn assign_cn(g: &Graph, sizes: &[usize], mu: f64, seed: Seed) -> Result<CommunityAssignment> {
    check_feasibility(g, sizes, mu)?;
    let mut rng = seed.rng();
    let mut state = AssignState::new(g, sizes, mu);
    let mut homeless = Vec::new();
    for v in 0..g.node_count() {
        let weights = cn_weights(&state, v);
        let eligible: Vec<usize> = (0..sizes.len())
            .filter(|&c| !state.is_full(c) && feasible(sizes[c], mu, g.degree(v)))
            .collect();
        if eligible.is_empty() {
            homeless.push(v);
            continue;
        }
        let total: f64 = eligible.iter().map(|&c| weights[c]).sum();
        let mut u = rng.random::<f64>() * total;
        let mut chosen = *eligible.last().unwrap();
        for &c in &eligible {
            if u < weights[c] {
                chosen = c;
                break;
            }
            u -= weights[c];
        }
        state.place(v, chosen);
    }
    state.resolve_homeless(homeless, &mut rng)?;
    Ok(state.finish())
}

/// Neighbor-expansion assignment: fill each community by BFS from uniformly
/// drawn unassigned seeds; nodes are added only while feasible, and leftovers
/// queue as homeless.
pub fn assign_ne(g: &Graph, sizes: &[usize], mu: f64, seed: Seed) -> Result<CommunityAssignment> {
    check_feasibility(g, sizes, mu)?;
    let mut rng = seed.rng();
    let mut state = AssignState::new(g, sizes, mu);
    let n = g.node_count();
    let mut tried = vec![usize::MAX; n]; // community that last tried this node as seed
    for (c, &capacity) in sizes.iter().enumerate() {
        while !state.is_full(c) {
            let candidates: Vec<usize> = (0..n)
                .filter(|&v| state.assigned[v].is_none() && tried[v] != c)
                .collect();
            let Some(&start) = candidates.choose(&mut rng) else {
                break;
            };
            tried[start] = c;
            let mut visited = vec![false; n];
            let mut queue = std::collections::VecDeque::from([start]);
            visited[start] = true;
            while let Some(v) = queue.pop_front() {
                if state.is_full(c) {
                    break;
                }
                if state.assigned[v].is_some() {
                    continue;
                }
                if !feasible(capacity, mu, g.degree(v)) {
                    continue;
                }
                state.place(v, c);
                for &u in g.neighbors(v) {
                    if !visited[u] {
                        visited[u] = true;
                        queue.push_back(u);
                    }
                }
            }
        }
    }
    let homeless: Vec<usize> = (0..n).filter(|&v| state.assigned[v].is_none()).collect();
    state.resolve_homeless(homeless, &mut rng)?;
    Ok(state.finish())
}

pub fn assign(
    strategy: AssignStrategy,
    g: &Graph,
    sizes: &[usize],
    mu: f64,
    seed: Seed,
) -> Result<CommunityAssignment> {
    match strategy {
        AssignStrategy::Lfr => assign_lfr(g, sizes, mu, seed),
        AssignStrategy::Cn => assign_cn(g, sizes, mu, seed),
        AssignStrategy::Ne => assign_ne(g, sizes, mu, seed),
    }
}

/// Overlay pass: drives each node's between-community degree toward
/// mu * deg(v) through four edit phases (add/remove internal, add/remove
/// external). Pairs whose edge already exists (add) or is absent (remove) are
/// skipped; residuals of a few edges per node may remain.
pub fn overlay_rewire(
    mut g: Graph,
    asg: &CommunityAssignment,
    mu: f64,
    seed: Seed,
) -> Result<(Graph, RewireStats)> {
    let labels = asg.labels()?;
    let n = g.node_count();
    let mut delta_between: Vec<i64> = (0..n)
        .map(|v| {
            let between = g
                .neighbors(v)
                .iter()
                .filter(|&&u| labels[u] != labels[v])
                .count();
            (mu * g.degree(v) as f64 - between as f64).floor() as i64
        })
        .collect();
    let mut delta_within: Vec<i64> = delta_between.iter().map(|&d| -d).collect();

    let members = {
        let mut m = vec![Vec::new(); asg.community_count()];
        for (v, &c) in labels.iter().enumerate() {
            m[c].push(v);
        }
        m
    };

    let mut rng = seed.rng();
    let mut added = 0usize;
    let mut removed = 0usize;

    for community in &members {
        // add internal edges between nodes that both want more within-links
        let mut pool: Vec<usize> = community
            .iter()
            .copied()
            .filter(|&v| delta_within[v] > 0)
            .collect();
        while pool.len() >= 2 {
            let vi = rng.random_range(0..pool.len());
            let v = pool[vi];
            let partners: Vec<usize> = (0..pool.len())
                .filter(|&ui| ui != vi && !g.has_edge(v, pool[ui]))
                .collect();
            let Some(&ui) = partners.choose(&mut rng) else {
                pool.swap_remove(vi);
                continue;
            };
            let u = pool[ui];
            g.add_edge(v, u)?;
            added += 1;
            delta_within[v] -= 1;
            delta_within[u] -= 1;
            // remove the higher index first so the lower stays valid
            for idx in [vi.max(ui), vi.min(ui)] {
                if delta_within[pool[idx]] == 0 {
                    pool.swap_remove(idx);
                }
            }
        }
        // remove excess internal edges
        for &v in community {
            if delta_within[v] >= 0 {
                continue;
            }
            let mut pool: Vec<usize> = g
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&u| labels[u] == labels[v] && delta_within[u] < 0)
                .collect();
            while !pool.is_empty() && delta_within[v] < 0 {
                let ui = rng.random_range(0..pool.len());
                let u = pool.swap_remove(ui);
                g.remove_edge(v, u)?;
                removed += 1;
                delta_within[v] += 1;
                delta_within[u] += 1;
            }
        }
    }

    for (c, community) in members.iter().enumerate() {
        // add external edges pairing deficit nodes across the boundary
        let mut inside: Vec<usize> = community
            .iter()
            .copied()
            .filter(|&v| delta_between[v] > 0)
            .collect();
        let mut outside: Vec<usize> = (0..n)
            .filter(|&v| labels[v] != c && delta_between[v] > 0)
            .collect();
        while !inside.is_empty() && !outside.is_empty() {
            let vi = rng.random_range(0..inside.len());
            let v = inside[vi];
            let partners: Vec<usize> = (0..outside.len())
                .filter(|&ui| !g.has_edge(v, outside[ui]))
                .collect();
            let Some(&ui) = partners.choose(&mut rng) else {
                inside.swap_remove(vi);
                continue;
            };
            let u = outside[ui];
            g.add_edge(v, u)?;
            added += 1;
            delta_between[v] -= 1;
            delta_between[u] -= 1;
            if delta_between[v] == 0 {
                inside.swap_remove(vi);
            }
            if delta_between[u] == 0 {
                outside.swap_remove(ui);
            }
        }
        // remove excess external edges
        for &v in community {
            if delta_between[v] >= 0 {
                continue;
            }
            let mut pool: Vec<usize> = g
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&u| labels[u] != c && delta_between[u] < 0)
                .collect();
            while !pool.is_empty() && delta_between[v] < 0 {
                let ui = rng.random_range(0..pool.len());
                let u = pool.swap_remove(ui);
                g.remove_edge(v, u)?;
                removed += 1;
                delta_between[v] += 1;
                delta_between[u] += 1;
            }
        }
    }

    Ok((g, RewireStats::new(added, removed)))
}

/// Full pipeline output.
#[derive(Debug, Clone)]
pub struct ThreePassOutput {
    pub graph: Graph,
    pub assignment: CommunityAssignment,
    pub stats: RewireStats,
}

/// Composes start-model generation, capacity sampling, assignment, and
/// overlay. Deterministic per seed.
pub fn generate_3pass(
    theta_g: &ThetaG,
    theta_c: &ThetaC,
    strategy: AssignStrategy,
    seed: Seed,
) -> Result<ThreePassOutput> {
    let (start, _) = theta_g.generate(seed.derive(1))?;
    let sizes = sample_community_sizes(start.node_count(), theta_c, seed.derive(2))?;
    let assignment = assign(strategy, &start, &sizes, theta_c.mu, seed.derive(3))?;
    let (graph, stats) = overlay_rewire(start, &assignment, theta_c.mu, seed.derive(4))?;
    Ok(ThreePassOutput {
        graph,
        assignment,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(leaves: usize) -> Graph {
        let mut g = Graph::new(leaves + 1);
        for leaf in 1..=leaves {
            g.add_edge(0, leaf).unwrap();
        }
        g
    }

    fn two_triangles() -> Graph {
        let mut g = Graph::new(6);
        for (i, j) in [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)] {
            g.add_edge(i, j).unwrap();
        }
        g
    }

    #[test]
    fn sizes_exact_fit() {
        let theta = ThetaC {
            mu: 0.3,
            beta_exp: 2.0,
            c_min: 20,
            c_max: 20,
        };
        let sizes = sample_community_sizes(40, &theta, Seed(1)).unwrap();
        assert_eq!(sizes, vec![20, 20]);
    }

    #[test]
    fn sizes_clamp_merge() {
        let theta = ThetaC {
            mu: 0.3,
            beta_exp: 2.0,
            c_min: 20,
            c_max: 20,
        };
        let sizes = sample_community_sizes(50, &theta, Seed(1)).unwrap();
        assert_eq!(sizes, vec![20, 30]);
    }

    #[test]
    fn sizes_preset_bounds() {
        let theta = ThetaC::preset(0.3);
        let sizes = sample_community_sizes(1000, &theta, Seed(5)).unwrap();
        assert_eq!(sizes.iter().sum::<usize>(), 1000);
        for &s in &sizes {
            assert!((20..70).contains(&s), "size {s} out of [20, 70)");
        }
    }

    #[test]
    fn sizes_reject_small_n() {
        let theta = ThetaC::preset(0.3);
        assert!(matches!(
            sample_community_sizes(10, &theta, Seed(1)),
            Err(Error::InvalidParameter { name: "c_min", .. })
        ));
    }

    #[test]
    fn lfr_star_feasibility() {
        let g = star(5);
        let asg = assign_lfr(&g, &[3, 3], 0.5, Seed(7)).unwrap();
        assert!(!asg.is_overlapping());
        assert_eq!(asg.community_sizes(), vec![3, 3]);
        // hub (degree 5) fits: 3 >= 0.5 * 5
        assert_eq!(asg.memberships(0).len(), 1);
    }

    #[test]
    fn lfr_mu_one_always_feasible() {
        let g = star(9);
        let asg = assign_lfr(&g, &[5, 5], 1.0, Seed(3)).unwrap();
        assert_eq!(asg.community_sizes(), vec![5, 5]);
    }

    #[test]
    fn lfr_infeasible_node_reported() {
        let g = star(9); // hub degree 9
        let err = assign_lfr(&g, &[5, 5], 0.0, Seed(3));
        assert!(matches!(err, Err(Error::InfeasibleNode { node: 0, .. })));
    }

    #[test]
    fn cn_weights_follow_placed_neighbors() {
        // v = 3 adjacent to 0, 1, 2; those three already sit in community 0
        let mut g = Graph::new(4);
        for u in 0..3 {
            g.add_edge(3, u).unwrap();
        }
        let sizes = [4usize, 4usize];
        let mut state = AssignState::new(&g, &sizes, 1.0);
        for u in 0..3 {
            state.place(u, 0);
        }
        let w = cn_weights(&state, 3);
        assert_eq!(w, vec![4.0, 1.0]);
        // no neighbors placed: uniform weights
        let fresh = AssignState::new(&g, &sizes, 1.0);
        assert_eq!(cn_weights(&fresh, 3), vec![1.0, 1.0]);
    }

    #[test]
    fn ne_single_triangle_one_bfs() {
        let mut g = Graph::new(3);
        for (i, j) in [(0, 1), (1, 2), (0, 2)] {
            g.add_edge(i, j).unwrap();
        }
        let asg = assign_ne(&g, &[3], 1.0, Seed(2)).unwrap();
        assert_eq!(asg.community_sizes(), vec![3]);
    }

    #[test]
    fn ne_respects_components() {
        let g = two_triangles();
        for s in 0..20 {
            let asg = assign_ne(&g, &[3, 3], 1.0, Seed(s)).unwrap();
            let members = asg.community_members();
            for m in &members {
                assert!(
                    m == &vec![0, 1, 2] || m == &vec![3, 4, 5],
                    "community crossed components: {m:?}"
                );
            }
        }
    }

    #[test]
    fn assignment_fills_capacities_exactly() {
        let (g, _) = ThetaG::cf_preset().generate(Seed(8)).unwrap();
        let theta = ThetaC::preset(0.3);
        let sizes = sample_community_sizes(1000, &theta, Seed(8)).unwrap();
        for strategy in [AssignStrategy::Lfr, AssignStrategy::Cn, AssignStrategy::Ne] {
            let asg = assign(strategy, &g, &sizes, 0.3, Seed(8)).unwrap();
            assert_eq!(asg.community_sizes(), sizes, "{strategy:?}");
            assert!(!asg.is_overlapping());
        }
    }

    #[test]
    fn overlay_noop_when_constraint_met() {
        // two triangle communities, mu = 0: every node already all-within
        let g = two_triangles();
        let asg = CommunityAssignment::from_labels(&[0, 0, 0, 1, 1, 1], 2);
        let (out, stats) = overlay_rewire(g.clone(), &asg, 0.0, Seed(4)).unwrap();
        assert_eq!(stats.rewired_total, 0);
        assert_eq!(out, g);
    }

    #[test]
    fn overlay_removes_stray_between_edge() {
        let mut g = two_triangles();
        g.add_edge(0, 3).unwrap();
        let asg = CommunityAssignment::from_labels(&[0, 0, 0, 1, 1, 1], 2);
        let (out, stats) = overlay_rewire(g, &asg, 0.0, Seed(4)).unwrap();
        assert!(!out.has_edge(0, 3));
        assert_eq!(stats.edges_removed, 1);
        assert_eq!(stats.edges_added, 0);
    }

    #[test]
    fn overlay_output_is_simple_and_deterministic() {
        let out1 = generate_3pass(
            &ThetaG::cf_preset(),
            &ThetaC::preset(0.5),
            AssignStrategy::Lfr,
            Seed(21),
        )
        .unwrap();
        let out2 = generate_3pass(
            &ThetaG::cf_preset(),
            &ThetaC::preset(0.5),
            AssignStrategy::Lfr,
            Seed(21),
        )
        .unwrap();
        assert_eq!(out1.graph, out2.graph);
        assert_eq!(out1.stats, out2.stats);
        // handshake identity
        let degree_sum: usize = (0..out1.graph.node_count())
            .map(|v| out1.graph.degree(v))
            .sum();
        assert_eq!(degree_sum, 2 * out1.graph.edge_count());
    }
}
