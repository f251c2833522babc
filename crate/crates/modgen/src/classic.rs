//! Start-network generators: configuration model from a power-law degree
//! sequence (CF), Barabási–Albert (BA), Forest Fire (FF), Erdős–Rényi (ER),
//! and the planted-partition GN model.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CommunityAssignment, Graph, Seed};

/// Start-model parameter sets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum ThetaG {
    /// Configuration model over a truncated power-law degree sequence.
    Cf {
        n: usize,
        k_avg: f64,
        k_max: usize,
        gamma_exp: f64,
    },
    /// Barabási–Albert preferential attachment, `m_ba` edges per new node.
    Ba { n: usize, m_ba: usize },
    /// Undirected Forest Fire with forward/backward burning probabilities.
    Ff { n: usize, p_fwd: f64, rp: f64 },
    /// Erdős–Rényi G(n, p).
    Er { n: usize, p_edge: f64 },
    /// Planted partition: equal groups, within-probability `p_in`,
    /// between-probability `p_out`.
    Gn {
        n: usize,
        groups: usize,
        p_in: f64,
        p_out: f64,
    },
}

impl ThetaG {
    /// The paper-style CF preset: n=1000, k_avg=15, k_max=50, exponent 3.
    pub fn cf_preset() -> Self {
        ThetaG::Cf {
            n: 1000,
            k_avg: 15.0,
            k_max: 50,
            gamma_exp: 3.0,
        }
    }

    pub fn node_count(&self) -> usize {
        match *self {
            ThetaG::Cf { n, .. }
            | ThetaG::Ba { n, .. }
            | ThetaG::Ff { n, .. }
            | ThetaG::Er { n, .. }
            | ThetaG::Gn { n, .. } => n,
        }
    }

    fn validate(&self) -> Result<()> {
        let param = |name, reason: String| Err(Error::InvalidParameter { name, reason });
        match *self {
            ThetaG::Cf {
                n,
                k_avg,
                k_max,
                gamma_exp,
            } => {
                if !(1.0 <= k_avg && k_avg <= k_max as f64) {
                    return param("k_avg", format!("need 1 <= k_avg <= k_max, got {k_avg}"));
                }
                if k_max >= n {
                    return param("k_max", format!("need k_max < n, got {k_max} >= {n}"));
                }
                if gamma_exp <= 1.0 {
                    return param("gamma_exp", format!("need exponent > 1, got {gamma_exp}"));
                }
            }
            ThetaG::Ba { n, m_ba } => {
                if m_ba < 1 || m_ba >= n {
                    return param("m_ba", format!("need 1 <= m_ba < n, got {m_ba}"));
                }
            }
            ThetaG::Ff { p_fwd, rp, .. } => {
                if !(0.0..1.0).contains(&p_fwd) {
                    return param("p_fwd", format!("need 0 <= p_fwd < 1, got {p_fwd}"));
                }
                if !(0.0..1.0).contains(&rp) {
                    return param("rp", format!("need 0 <= rp < 1, got {rp}"));
                }
            }
            ThetaG::Er { p_edge, .. } => {
                if !(0.0..=1.0).contains(&p_edge) {
                    return param("p_edge", format!("need 0 <= p_edge <= 1, got {p_edge}"));
                }
            }
            ThetaG::Gn {
                n,
                groups,
                p_in,
                p_out,
            } => {
                if groups == 0 || n % groups != 0 {
                    return param(
                        "groups",
                        format!("n = {n} must be divisible by groups = {groups}"),
                    );
                }
                for (name, p) in [("p_in", p_in), ("p_out", p_out)] {
                    if !(0.0..=1.0).contains(&p) {
                        return param(name, format!("need probability in [0,1], got {p}"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Runs the generator. GN also returns its planted partition.
    pub fn generate(&self, seed: Seed) -> Result<(Graph, Option<CommunityAssignment>)> {
        self.validate()?;
        match *self {
            ThetaG::Cf {
                n,
                k_avg,
                k_max,
                gamma_exp,
            } => {
                let mut degrees =
                    sample_powerlaw_sequence(n, gamma_exp, 1, k_max, Some(k_avg), seed)?;
                force_even_sum(&mut degrees, k_max);
                Ok((gen_cf(&degrees, seed)?, None))
            }
            ThetaG::Ba { n, m_ba } => Ok((gen_ba(n, m_ba, seed)?, None)),
            ThetaG::Ff { n, p_fwd, rp } => Ok((gen_ff(n, p_fwd, rp, seed)?, None)),
            ThetaG::Er { n, p_edge } => Ok((gen_er(n, p_edge, seed)?, None)),
            ThetaG::Gn {
                n,
                groups,
                p_in,
                p_out,
            } => {
                let (g, asg) = gen_gn(n, groups, p_in, p_out, seed)?;
                Ok((g, Some(asg)))
            }
        }
    }
}

/// Mean of the discrete truncated power law P(x) ∝ x^(-exponent) on [lo, hi].
fn truncated_powerlaw_mean(exponent: f64, lo: usize, hi: usize) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for x in lo..=hi {
        let w = (x as f64).powf(-exponent);
        num += x as f64 * w;
        den += w;
    }
    num / den
}

/// Draws `n` values from P(x) ∝ x^(-exponent) on [lo, hi]. When `target_mean`
/// is given, `lo` is adjusted by binary search so the distribution mean lands
/// within 5% of the target.
pub fn sample_powerlaw_sequence(
    n: usize,
    exponent: f64,
    lo: usize,
    hi: usize,
    target_mean: Option<f64>,
    seed: Seed,
) -> Result<Vec<usize>> {
    if lo < 1 || lo > hi {
        return Err(Error::InvalidParameter {
            name: "lo",
            reason: format!("need 1 <= lo <= hi, got lo={lo}, hi={hi}"),
        });
    }
    let lo = match target_mean {
        None => lo,
        Some(target) => {
            // mean is strictly increasing in lo, so binary-search the largest
            // lo whose mean stays at or below the target, then take whichever
            // side is closer.
            let (mut left, mut right) = (1usize, hi);
            while left < right {
                let mid = left + (right - left).div_ceil(2);
                if truncated_powerlaw_mean(exponent, mid, hi) <= target {
                    left = mid;
                } else {
                    right = mid - 1;
                }
            }
            let candidates = [left, (left + 1).min(hi)];
            let best = candidates
                .iter()
                .copied()
                .min_by(|&a, &b| {
                    let da = (truncated_powerlaw_mean(exponent, a, hi) - target).abs();
                    let db = (truncated_powerlaw_mean(exponent, b, hi) - target).abs();
                    da.partial_cmp(&db).unwrap()
                })
                .unwrap();
            let achieved = truncated_powerlaw_mean(exponent, best, hi);
            if (achieved - target).abs() > 0.05 * target {
                return Err(Error::InvalidParameter {
                    name: "target_mean",
                    reason: format!(
                        "no lower bound reaches mean {target} within 5% (closest {achieved:.3} at lo={best})"
                    ),
                });
            }
            best
        }
    };

    let dist = DiscretePowerlaw::new(exponent, lo, hi);
    let mut rng = seed.rng();
    Ok((0..n).map(|_| dist.sample(&mut rng)).collect())
}

/// Discrete truncated power law P(x) ∝ x^(-exponent) on [lo, hi], sampled by
/// inverse transform over the cumulative weights.
pub(crate) struct DiscretePowerlaw {
    lo: usize,
    cumulative: Vec<f64>,
}

impl DiscretePowerlaw {
    pub(crate) fn new(exponent: f64, lo: usize, hi: usize) -> Self {
        let mut cumulative = Vec::with_capacity(hi - lo + 1);
        let mut acc = 0.0;
        for x in lo..=hi {
            acc += (x as f64).powf(-exponent);
            cumulative.push(acc);
        }
        DiscretePowerlaw { lo, cumulative }
    }

    pub(crate) fn sample(&self, rng: &mut impl Rng) -> usize {
        let total = *self.cumulative.last().unwrap();
        let u = rng.random::<f64>() * total;
        let idx = self
            .cumulative
            .partition_point(|&c| c < u)
            .min(self.cumulative.len() - 1);
        self.lo + idx
    }
}

/// Forces an even sum by incrementing one entry strictly below `hi`.
pub fn force_even_sum(seq: &mut [usize], hi: usize) {
    if seq.iter().sum::<usize>() % 2 == 1 {
        if let Some(x) = seq.iter_mut().find(|x| **x < hi) {
            *x += 1;
        }
    }
}

/// Configuration model: pairs edge stubs uniformly at random; self-loops and
/// duplicate pairs are discarded, not retried.
pub fn gen_cf(degrees: &[usize], seed: Seed) -> Result<Graph> {
    let n = degrees.len();
    if degrees.iter().sum::<usize>() % 2 != 0 {
        return Err(Error::InvalidParameter {
            name: "degrees",
            reason: "degree sum must be even".into(),
        });
    }
    if let Some((v, &d)) = degrees.iter().enumerate().find(|&(_, &d)| d >= n) {
        return Err(Error::InvalidParameter {
            name: "degrees",
            reason: format!("degree {d} of node {v} must be below n = {n}"),
        });
    }
    let mut stubs: Vec<usize> = degrees
        .iter()
        .enumerate()
        .flat_map(|(v, &d)| std::iter::repeat_n(v, d))
        .collect();
    let mut rng = seed.rng();
    stubs.shuffle(&mut rng);
    let mut g = Graph::new(n);
    for pair in stubs.chunks_exact(2) {
        g.add_edge(pair[0], pair[1])?;
    }
    Ok(g)
}

/// Barabási–Albert: seed clique on m_ba + 1 nodes, then degree-proportional
/// attachment of m_ba distinct edges per new node.
pub fn gen_ba(n: usize, m_ba: usize, seed: Seed) -> Result<Graph> {
    if m_ba < 1 || m_ba >= n {
        return Err(Error::InvalidParameter {
            name: "m_ba",
            reason: format!("need 1 <= m_ba < n, got m_ba={m_ba}, n={n}"),
        });
    }
    let mut g = Graph::new(n);
    // every edge endpoint appears once per incidence, so uniform draws from
    // this list are degree-proportional
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * n * m_ba);
    for i in 0..=m_ba {
        for j in (i + 1)..=m_ba {
            g.add_edge(i, j)?;
            endpoints.push(i);
            endpoints.push(j);
        }
    }
    let mut rng = seed.rng();
    let mut targets = Vec::with_capacity(m_ba);
    for v in (m_ba + 1)..n {
        targets.clear();
        while targets.len() < m_ba {
            let t = endpoints[rng.random_range(0..endpoints.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            g.add_edge(v, t)?;
            endpoints.push(v);
            endpoints.push(t);
        }
    }
    Ok(g)
}

/// Geometric draw with mean p / (1 - p): consecutive successes at rate p.
fn geometric(rng: &mut impl Rng, p: f64) -> usize {
    let mut k = 0;
    while p > 0.0 && rng.random::<f64>() < p {
        k += 1;
    }
    k
}

/// Undirected Forest Fire: each new node links to a uniform ambassador and
/// recursively burns outward, linking to geometric batches of unburned
/// neighbors. `rp` contributes a second geometric draw over the same pool.
pub fn gen_ff(n: usize, p_fwd: f64, rp: f64, seed: Seed) -> Result<Graph> {
    for (name, p) in [("p_fwd", p_fwd), ("rp", rp)] {
        if !(0.0..1.0).contains(&p) {
            return Err(Error::InvalidParameter {
                name,
                reason: format!("need probability in [0,1), got {p}"),
            });
        }
    }
    let mut g = Graph::new(n);
    let mut rng = seed.rng();
    let mut burned = vec![false; n];
    let mut touched: Vec<usize> = Vec::new();
    for v in 1..n {
        let ambassador = rng.random_range(0..v);
        g.add_edge(v, ambassador)?;
        let mut queue = std::collections::VecDeque::from([ambassador]);
        burned[ambassador] = true;
        touched.clear();
        touched.push(ambassador);
        while let Some(u) = queue.pop_front() {
            let burn = geometric(&mut rng, p_fwd) + geometric(&mut rng, rp);
            if burn == 0 {
                continue;
            }
            let unburned: Vec<usize> = g
                .neighbors(u)
                .iter()
                .copied()
                .filter(|&t| !burned[t] && t != v)
                .collect();
            for &t in unburned.choose_multiple(&mut rng, burn) {
                g.add_edge(v, t)?;
                burned[t] = true;
                touched.push(t);
                queue.push_back(t);
            }
        }
        for &t in &touched {
            burned[t] = false;
        }
    }
    Ok(g)
}

/// Erdős–Rényi G(n, p): each unordered pair independently.
pub fn gen_er(n: usize, p_edge: f64, seed: Seed) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p_edge) {
        return Err(Error::InvalidParameter {
            name: "p_edge",
            reason: format!("need probability in [0,1], got {p_edge}"),
        });
    }
    let mut g = Graph::new(n);
    let mut rng = seed.rng();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random_bool(p_edge) {
                g.add_edge(i, j)?;
            }
        }
    }
    Ok(g)
}

/// Planted partition: equal-size groups, within-probability p_in and
/// between-probability p_out. Returns the planted assignment.
pub fn gen_gn(
    n: usize,
    groups: usize,
    p_in: f64,
    p_out: f64,
    seed: Seed,
) -> Result<(Graph, CommunityAssignment)> {
    if groups == 0 || !n.is_multiple_of(groups) {
        return Err(Error::InvalidParameter {
            name: "groups",
            reason: format!("n = {n} must be divisible by groups = {groups}"),
        });
    }
    for (name, p) in [("p_in", p_in), ("p_out", p_out)] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter {
                name,
                reason: format!("need probability in [0,1], got {p}"),
            });
        }
    }
    let group_size = n / groups;
    let mut g = Graph::new(n);
    let mut rng = seed.rng();
    let mut asg = CommunityAssignment::new(n, groups);
    for v in 0..n {
        asg.add_membership(v, v / group_size);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let p = if i / group_size == j / group_size {
                p_in
            } else {
                p_out
            };
            if rng.random_bool(p) {
                g.add_edge(i, j)?;
            }
        }
    }
    Ok((g, asg))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powerlaw_degenerate_support() {
        let seq = sample_powerlaw_sequence(5, 2.0, 7, 7, None, Seed(1)).unwrap();
        assert_eq!(seq, vec![7; 5]);
    }

    #[test]
    fn powerlaw_empirical_mean_matches_analytic() {
        let seq = sample_powerlaw_sequence(10_000, 3.0, 1, 50, None, Seed(7)).unwrap();
        // independent analytic oracle: sum x * x^-3 / sum x^-3 over 1..=50
        let num: f64 = (1..=50).map(|x| (x as f64).powf(-2.0)).sum();
        let den: f64 = (1..=50).map(|x| (x as f64).powf(-3.0)).sum();
        let analytic = num / den;
        let empirical = seq.iter().sum::<usize>() as f64 / seq.len() as f64;
        assert!(
            (empirical - analytic).abs() < 0.05 * analytic,
            "empirical {empirical} vs analytic {analytic}"
        );
    }

    #[test]
    fn powerlaw_target_mean_cf_preset() {
        let seq = sample_powerlaw_sequence(20_000, 3.0, 1, 50, Some(15.0), Seed(3)).unwrap();
        let mean = seq.iter().sum::<usize>() as f64 / seq.len() as f64;
        assert!(
            (14.25..=15.75).contains(&mean),
            "mean {mean} outside 5% band around 15"
        );
        assert!(seq.iter().all(|&d| (1..=50).contains(&d)));
    }

    #[test]
    fn powerlaw_infeasible_target_mean() {
        // no lo in [1, 10] reaches a mean of 100
        let err = sample_powerlaw_sequence(10, 2.0, 1, 10, Some(100.0), Seed(1));
        assert!(matches!(
            err,
            Err(Error::InvalidParameter {
                name: "target_mean",
                ..
            })
        ));
    }

    #[test]
    fn force_even_sum_increments_below_hi() {
        let mut seq = vec![3, 2];
        force_even_sum(&mut seq, 5);
        assert_eq!(seq.iter().sum::<usize>() % 2, 0);
        let mut even = vec![2, 2];
        force_even_sum(&mut even, 5);
        assert_eq!(even, vec![2, 2]);
    }

    #[test]
    fn cf_two_stubs_form_single_edge() {
        let g = gen_cf(&[1, 1], Seed(5)).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert!(g.has_edge(0, 1));
    }

    #[test]
    fn cf_realized_degrees_never_exceed_requested() {
        let degrees = vec![2, 2, 2];
        for s in 0..50 {
            let g = gen_cf(&degrees, Seed(s)).unwrap();
            for (v, &d) in degrees.iter().enumerate() {
                assert!(g.degree(v) <= d);
            }
            assert!(!g.has_edge(0, 0));
        }
    }

    #[test]
    fn ba_forced_triangle() {
        let g = gen_ba(3, 2, Seed(9)).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2) && g.has_edge(0, 2));
    }

    #[test]
    fn ba_average_degree_and_connectivity() {
        let g = gen_ba(1000, 2, Seed(11)).unwrap();
        let avg = 2.0 * g.edge_count() as f64 / 1000.0;
        assert!((3.9..=4.0).contains(&avg), "avg degree {avg}");
        assert_eq!(g.connected_components().len(), 1);
    }

    #[test]
    fn ba_heavy_tail_over_seeds() {
        let mut ratio_sum = 0.0;
        for s in 0..10 {
            let g = gen_ba(1000, 2, Seed(s)).unwrap();
            let avg = 2.0 * g.edge_count() as f64 / 1000.0;
            let max = (0..1000).map(|v| g.degree(v)).max().unwrap() as f64;
            ratio_sum += max / avg;
        }
        assert!(
            ratio_sum / 10.0 >= 5.0,
            "max/avg ratio {}",
            ratio_sum / 10.0
        );
    }

    #[test]
    fn ff_zero_probabilities_yield_tree() {
        let g = gen_ff(100, 0.0, 0.0, Seed(2)).unwrap();
        assert_eq!(g.edge_count(), 99);
        assert_eq!(g.connected_components().len(), 1);
    }

    #[test]
    fn ff_paper_params_connected() {
        let g = gen_ff(1000, 0.1, 0.0, Seed(4)).unwrap();
        assert!(g.edge_count() >= 999);
        assert_eq!(g.connected_components().len(), 1);
    }

    #[test]
    fn er_extremes() {
        let g = gen_er(10, 0.0, Seed(1)).unwrap();
        assert_eq!(g.edge_count(), 0);
        let g = gen_er(10, 1.0, Seed(1)).unwrap();
        assert_eq!(g.edge_count(), 45);
    }

    #[test]
    fn er_edge_count_within_3_sigma() {
        let n = 1000usize;
        let pairs = n * (n - 1) / 2;
        let p = 0.01;
        let mean = pairs as f64 * p;
        let sigma = (pairs as f64 * p * (1.0 - p)).sqrt();
        let g = gen_er(n, p, Seed(13)).unwrap();
        let e = g.edge_count() as f64;
        assert!((e - mean).abs() <= 3.0 * sigma, "edges {e}, mean {mean}");
    }

    #[test]
    fn gn_four_equal_groups() {
        let (g, asg) = gen_gn(128, 4, 0.3, 0.05, Seed(6)).unwrap();
        assert_eq!(g.node_count(), 128);
        assert_eq!(asg.community_sizes(), vec![32; 4]);
    }

    #[test]
    fn generators_are_deterministic() {
        for theta in [
            ThetaG::cf_preset(),
            ThetaG::Ba { n: 200, m_ba: 3 },
            ThetaG::Ff {
                n: 200,
                p_fwd: 0.3,
                rp: 0.1,
            },
            ThetaG::Er {
                n: 100,
                p_edge: 0.05,
            },
            ThetaG::Gn {
                n: 64,
                groups: 4,
                p_in: 0.4,
                p_out: 0.05,
            },
        ] {
            let a = theta.generate(Seed(42)).unwrap();
            let b = theta.generate(Seed(42)).unwrap();
            assert_eq!(a.0, b.0);
            assert_eq!(a.1, b.1);
        }
    }
}
