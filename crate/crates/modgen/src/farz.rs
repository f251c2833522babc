//! FARZ growth generator: communities form intrinsically while the network
//! grows. Each new node joins communities by size-preferential attachment and
//! edges form within (probability beta) or across communities, weighted by
//! common neighbors and degree similarity.

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CommunityAssignment, Graph, Seed};

/// Full FARZ parameter vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FarzParams {
    /// Node count.
    pub n: usize,
    /// Edges added per growth step.
    pub m: usize,
    /// Community count.
    pub k: usize,
    /// Common-neighbor exponent (>= 0).
    pub alpha: f64,
    /// Probability an edge stays inside one of the source's communities.
    pub beta: f64,
    /// Degree-similarity exponent; sign sets assortativity direction.
    pub gamma: f64,
    /// Size-balancing constant (> 0); large phi evens out community sizes.
    pub phi: f64,
    /// Memberships per overlapping node (>= 1).
    pub r: usize,
    /// Fraction of nodes designated overlapping.
    pub q: f64,
    /// Baseline edge probability (> 0).
    pub epsilon: f64,
}

impl Default for FarzParams {
    fn default() -> Self {
        FarzParams {
            n: 1000,
            m: 5,
            k: 4,
            alpha: 0.5,
            beta: 0.8,
            gamma: 0.5,
            phi: 1.0,
            r: 1,
            q: 0.0,
            epsilon: 1e-7,
        }
    }
}

impl FarzParams {
    pub fn validate(&self) -> Result<()> {
        let param = |name, reason: String| Err(Error::InvalidParameter { name, reason });
        if self.n < 1 {
            return param("n", "need n >= 1".into());
        }
        if self.m < 1 {
            return param("m", "need m >= 1".into());
        }
        if self.k < 1 {
            return param("k", "need k >= 1".into());
        }
        if self.r < 1 {
            return param("r", "need r >= 1".into());
        }
        if self.alpha < 0.0 {
            return param("alpha", format!("need alpha >= 0, got {}", self.alpha));
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return param("beta", format!("need beta in [0,1], got {}", self.beta));
        }
        if !(0.0..=1.0).contains(&self.q) {
            return param("q", format!("need q in [0,1], got {}", self.q));
        }
        if self.phi <= 0.0 {
            return param("phi", format!("need phi > 0, got {}", self.phi));
        }
        if self.epsilon <= 0.0 {
            return param("epsilon", format!("need epsilon > 0, got {}", self.epsilon));
        }
        Ok(())
    }
}

/// Size-preferential join probabilities: p(u) = (|u| + phi) / sum(|v| + phi).
pub fn join_probability(sizes: &[usize], phi: f64) -> Vec<f64> {
    assert!(!sizes.is_empty(), "need at least one community");
    assert!(phi > 0.0, "phi must be positive");
    let total: f64 = sizes.iter().map(|&s| s as f64 + phi).sum();
    sizes.iter().map(|&s| (s as f64 + phi) / total).collect()
}

/// Draws `r_i` communities by size-preferential attachment and adds node `i`
/// to each new one; duplicate draws leave the membership count below `r_i`.
pub fn farz_assign(
    node: usize,
    asg: &mut CommunityAssignment,
    r_i: usize,
    phi: f64,
    rng: &mut impl Rng,
) {
    for _ in 0..r_i {
        let probs = join_probability(&asg.community_sizes(), phi);
        let mut u = rng.random::<f64>();
        let mut chosen = probs.len() - 1;
        for (c, &p) in probs.iter().enumerate() {
            if u < p {
                chosen = c;
                break;
            }
            u -= p;
        }
        asg.add_membership(node, chosen);
    }
}

/// Edge-formation weight: cn^alpha * ((d_i - d_j)^2 + 1)^(-gamma) + epsilon,
/// with 0^0 = 1 so alpha = 0 ignores common neighbors entirely.
pub fn edge_weight(g: &Graph, i: usize, j: usize, alpha: f64, gamma: f64, epsilon: f64) -> f64 {
    debug_assert_ne!(i, j);
    let cn = g.common_neighbor_count(i, j) as f64;
    let gap = g.degree(i) as f64 - g.degree(j) as f64;
    cn.powf(alpha) * (gap * gap + 1.0).powf(-gamma) + epsilon
}

/// Weighted draw of a connection target inside community `c`.
fn pick_target(
    g: &Graph,
    i: usize,
    members: &[usize],
    params: &FarzParams,
    rng: &mut impl Rng,
) -> Option<usize> {
    let candidates: Vec<usize> = members
        .iter()
        .copied()
        .filter(|&j| j != i && !g.has_edge(i, j))
        .collect();
    if candidates.is_empty() {
        return None;
    }
    let weights: Vec<f64> = candidates
        .iter()
        .map(|&j| edge_weight(g, i, j, params.alpha, params.gamma, params.epsilon))
        .collect();
    let total: f64 = weights.iter().sum();
    let mut u = rng.random::<f64>() * total;
    let mut chosen = candidates.len() - 1;
    for (idx, &w) in weights.iter().enumerate() {
        if u < w {
            chosen = idx;
            break;
        }
        u -= w;
    }
    Some(candidates[chosen])
}

/// Community-branch edge formation shared by the public op and the generator.
/// Retries up to 3 alternative communities within the chosen beta branch,
/// then falls back to the other branch before recording a skip. Crossing
/// from the membership branch outward is disabled at beta = 1 so that every
/// edge stays within-community there.
fn connect_with_members(
    i: usize,
    g: &mut Graph,
    asg: &CommunityAssignment,
    members: &[Vec<usize>],
    params: &FarzParams,
    rng: &mut impl Rng,
) -> Result<Option<(usize, usize)>> {
    let own = asg.memberships(i);
    let complement: Vec<usize> = (0..asg.community_count())
        .filter(|&c| !asg.is_member(i, c))
        .collect();
    let use_own = complement.is_empty() || rng.random::<f64>() < params.beta;
    let branch: &[usize] = if use_own { own } else { &complement };
    for _ in 0..4 {
        let &c = branch
            .choose(rng)
            .expect("branch has at least one community");
        if let Some(j) = pick_target(g, i, &members[c], params, rng) {
            g.add_edge(i, j)?;
            return Ok(Some((i, j)));
        }
    }
    let fallback: &[usize] = if use_own { &complement } else { own };
    if !fallback.is_empty() && !(use_own && params.beta >= 1.0) {
        for _ in 0..4 {
            let &c = fallback.choose(rng).expect("fallback branch is non-empty");
            if let Some(j) = pick_target(g, i, &members[c], params, rng) {
                g.add_edge(i, j)?;
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

/// Adds one edge from node `i`: with probability beta inside one of its
/// communities, otherwise into the complement. Returns the edge, or None when
/// the retry budget exhausts without an eligible target.
pub fn farz_connect(
    i: usize,
    g: &mut Graph,
    asg: &CommunityAssignment,
    params: &FarzParams,
    rng: &mut impl Rng,
) -> Result<Option<(usize, usize)>> {
    let members = asg.community_members();
    connect_with_members(i, g, asg, &members, params, rng)
}

/// FARZ output: graph, planted communities, and the count of edge-formation
/// attempts that found no eligible target.
#[derive(Debug, Clone)]
pub struct FarzOutput {
    pub graph: Graph,
    pub assignment: CommunityAssignment,
    pub skipped: usize,
}

/// Grows the network one node at a time: assign the newcomer to communities,
/// connect it, then give m-1 uniformly chosen existing nodes a connection
/// chance each.
pub fn farz_generate(params: &FarzParams, seed: Seed) -> Result<FarzOutput> {
    params.validate()?;
    let mut rng = seed.rng();
    let n = params.n;

    // overlap-designated nodes receive r memberships instead of 1
    let overlap_count = (params.q * n as f64).ceil() as usize;
    let mut overlapping = vec![false; n];
    for idx in rand::seq::index::sample(&mut rng, n, overlap_count.min(n)) {
        overlapping[idx] = true;
    }

    let mut g = Graph::new(n);
    let mut asg = CommunityAssignment::new(n, params.k);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); params.k];
    let mut skipped = 0usize;

    for (i, &overlaps) in overlapping.iter().enumerate() {
        let r_i = if overlaps { params.r } else { 1 };
        farz_assign(i, &mut asg, r_i, params.phi, &mut rng);
        for &c in asg.memberships(i) {
            members[c].push(i);
        }
        if i == 0 {
            // no connect target exists yet; the first edge appears at node 1
            skipped += 1;
        } else if connect_with_members(i, &mut g, &asg, &members, params, &mut rng)?.is_none() {
            skipped += 1;
        }
        for _ in 1..params.m {
            let j = rng.random_range(0..=i);
            if i == 0
                || connect_with_members(j, &mut g, &asg, &members, params, &mut rng)?.is_none()
            {
                skipped += 1;
            }
        }
    }
    Ok(FarzOutput {
        graph: g,
        assignment: asg,
        skipped,
    })
}
