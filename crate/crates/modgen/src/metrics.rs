//! Partition agreement scoring (ARI, NMI) and a minimal label-propagation
//! reference detector for end-to-end harness runs.

use std::collections::HashMap;

use rand::seq::SliceRandom;

use crate::error::Result;
use crate::graph::{CommunityAssignment, Graph, Seed};

/// Contingency counts between two hard partitions of the same node set.
#[derive(Debug, Clone)]
pub struct ContingencyTable {
    pub counts: HashMap<(usize, usize), usize>,
    pub row_marginals: HashMap<usize, usize>,
    pub col_marginals: HashMap<usize, usize>,
    pub total: usize,
}

impl ContingencyTable {
    pub fn from_labels(a: &[usize], b: &[usize]) -> Self {
        assert_eq!(a.len(), b.len(), "partitions must cover the same node set");
        let mut counts = HashMap::new();
        let mut row_marginals = HashMap::new();
        let mut col_marginals = HashMap::new();
        for (&x, &y) in a.iter().zip(b) {
            *counts.entry((x, y)).or_insert(0) += 1;
            *row_marginals.entry(x).or_insert(0) += 1;
            *col_marginals.entry(y).or_insert(0) += 1;
        }
        ContingencyTable {
            counts,
            row_marginals,
            col_marginals,
            total: a.len(),
        }
    }
}

fn choose2(x: usize) -> f64 {
    (x as f64) * (x as f64 - 1.0) / 2.0
}

/// Adjusted Rand Index in [-1, 1]. Errors on overlapping input.
pub fn ari(a: &CommunityAssignment, b: &CommunityAssignment) -> Result<f64> {
    Ok(ari_labels(&a.labels()?, &b.labels()?))
}

/// ARI over label vectors; identical partitions score 1, including the
/// degenerate case where both partitions are trivial.
pub fn ari_labels(a: &[usize], b: &[usize]) -> f64 {
    let table = ContingencyTable::from_labels(a, b);
    let sum_ij: f64 = table.counts.values().map(|&c| choose2(c)).sum();
    let sum_a: f64 = table.row_marginals.values().map(|&c| choose2(c)).sum();
    let sum_b: f64 = table.col_marginals.values().map(|&c| choose2(c)).sum();
    let pairs = choose2(table.total);
    if pairs == 0.0 {
        return 1.0;
    }
    let expected = sum_a * sum_b / pairs;
    let denominator = 0.5 * (sum_a + sum_b) - expected;
    if denominator.abs() < 1e-12 {
        // zero denominator means both partitions are trivial (all-one-cluster
        // or all-singletons); identical pair structure scores 1, mixed 0
        return if sum_a == sum_b && sum_ij == sum_a {
            1.0
        } else {
            0.0
        };
    }
    (sum_ij - expected) / denominator
}

/// Normalized Mutual Information in [0, 1] with arithmetic-mean entropy
/// normalization. Errors on overlapping input.
pub fn nmi(a: &CommunityAssignment, b: &CommunityAssignment) -> Result<f64> {
    Ok(nmi_labels(&a.labels()?, &b.labels()?))
}

/// NMI over label vectors: I(A;B) / ((H(A) + H(B)) / 2), natural logs. Two
/// trivial partitions score 1 by convention.
pub fn nmi_labels(a: &[usize], b: &[usize]) -> f64 {
    let table = ContingencyTable::from_labels(a, b);
    let n = table.total as f64;
    let entropy = |marginals: &HashMap<usize, usize>| -> f64 {
        marginals
            .values()
            .map(|&c| {
                let p = c as f64 / n;
                -p * p.ln()
            })
            .sum()
    };
    let h_a = entropy(&table.row_marginals);
    let h_b = entropy(&table.col_marginals);
    if h_a <= 0.0 && h_b <= 0.0 {
        return 1.0;
    }
    // structurally identical partitions (contingency is a permutation of the
    // marginals) score exactly 1, avoiding float drift in the ratio below
    if table
        .counts
        .iter()
        .all(|(&(x, y), &c)| table.row_marginals[&x] == c && table.col_marginals[&y] == c)
    {
        return 1.0;
    }
    let mut mi = 0.0;
    for (&(x, y), &c) in &table.counts {
        let p_xy = c as f64 / n;
        let p_x = table.row_marginals[&x] as f64 / n;
        let p_y = table.col_marginals[&y] as f64 / n;
        mi += p_xy * (p_xy / (p_x * p_y)).ln();
    }
    (mi / ((h_a + h_b) / 2.0)).clamp(0.0, 1.0)
}

/// Label propagation: nodes repeatedly adopt the plurality label among their
/// neighbors (ties to the smallest label), visiting nodes in a reshuffled
/// order each round until a fixpoint or `max_iters`.
pub fn label_propagation(g: &Graph, seed: Seed, max_iters: usize) -> CommunityAssignment {
    let n = g.node_count();
    let mut labels: Vec<usize> = (0..n).collect();
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = seed.rng();
    let mut tally: HashMap<usize, usize> = HashMap::new();
    for _ in 0..max_iters {
        order.shuffle(&mut rng);
        let mut changed = false;
        for &v in &order {
            if g.degree(v) == 0 {
                continue;
            }
            tally.clear();
            for &u in g.neighbors(v) {
                *tally.entry(labels[u]).or_insert(0) += 1;
            }
            let best = tally
                .iter()
                .map(|(&label, &count)| (count, std::cmp::Reverse(label)))
                .max()
                .map(|(_, std::cmp::Reverse(label))| label)
                .unwrap();
            if best != labels[v] {
                labels[v] = best;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    // compact labels to dense community ids
    let mut remap: HashMap<usize, usize> = HashMap::new();
    let compact: Vec<usize> = labels
        .iter()
        .map(|&l| {
            let next = remap.len();
            *remap.entry(l).or_insert(next)
        })
        .collect();
    CommunityAssignment::from_labels(&compact, remap.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    /// Brute-force pair-counting ARI: agreement over all node pairs.
    fn ari_brute(a: &[usize], b: &[usize]) -> f64 {
        let n = a.len();
        let (mut n11, mut n00, mut n10, mut n01) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for i in 0..n {
            for j in (i + 1)..n {
                let same_a = a[i] == a[j];
                let same_b = b[i] == b[j];
                match (same_a, same_b) {
                    (true, true) => n11 += 1.0,
                    (false, false) => n00 += 1.0,
                    (true, false) => n10 += 1.0,
                    (false, true) => n01 += 1.0,
                }
            }
        }
        let total = n11 + n00 + n10 + n01;
        let expected = (n11 + n10) * (n11 + n01) / total;
        let max = 0.5 * ((n11 + n10) + (n11 + n01));
        if (max - expected).abs() < 1e-12 {
            return if n10 == 0.0 && n01 == 0.0 { 1.0 } else { 0.0 };
        }
        (n11 - expected) / (max - expected)
    }

    #[test]
    fn ari_identical_partitions() {
        let labels = vec![0, 0, 1, 1, 2, 2, 0, 1, 2, 0];
        assert_eq!(ari_labels(&labels, &labels), 1.0);
    }

    #[test]
    fn ari_vs_singletons_is_zero() {
        let a = vec![0, 0, 1, 1];
        let b = vec![0, 1, 2, 3];
        let value = ari_labels(&a, &b);
        assert!((value - ari_brute(&a, &b)).abs() < 1e-12);
        assert!(value.abs() < 1e-12, "got {value}");
    }

    #[test]
    fn ari_cross_partition_matches_brute_force() {
        let a = vec![0, 0, 1, 1];
        let b = vec![0, 1, 0, 1];
        assert!((ari_labels(&a, &b) - ari_brute(&a, &b)).abs() < 1e-12);
    }

    #[test]
    fn ari_rejects_overlap() {
        let mut a = CommunityAssignment::new(2, 2);
        a.add_membership(0, 0);
        a.add_membership(0, 1);
        a.add_membership(1, 0);
        let b = CommunityAssignment::from_labels(&[0, 0], 1);
        assert!(matches!(
            ari(&a, &b),
            Err(Error::OverlappingPartition { node: 0 })
        ));
    }

    #[test]
    fn nmi_identical_nontrivial() {
        let labels = vec![0, 0, 1, 1, 2];
        assert!((nmi_labels(&labels, &labels) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nmi_independent_partitions() {
        // product structure: uniform contingency table, zero information
        let a = vec![0, 0, 1, 1];
        let b = vec![0, 1, 0, 1];
        assert!(nmi_labels(&a, &b).abs() < 1e-12);
    }

    #[test]
    fn nmi_both_trivial_convention() {
        assert_eq!(nmi_labels(&[0, 0, 0], &[1, 1, 1]), 1.0);
    }

    #[test]
    fn metrics_symmetric_and_relabel_invariant() {
        let a = vec![0, 0, 1, 1, 2, 2, 1, 0];
        let b = vec![1, 1, 0, 2, 2, 0, 0, 1];
        assert!((ari_labels(&a, &b) - ari_labels(&b, &a)).abs() < 1e-12);
        assert!((nmi_labels(&a, &b) - nmi_labels(&b, &a)).abs() < 1e-12);
        // relabel a: 0->5, 1->9, 2->7
        let relabeled: Vec<usize> = a.iter().map(|&x| [5, 9, 7][x]).collect();
        assert!((ari_labels(&relabeled, &b) - ari_labels(&a, &b)).abs() < 1e-12);
        assert!((nmi_labels(&relabeled, &b) - nmi_labels(&a, &b)).abs() < 1e-12);
    }

    #[test]
    fn label_propagation_separates_components() {
        let mut g = Graph::new(6);
        for (i, j) in [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)] {
            g.add_edge(i, j).unwrap();
        }
        let asg = label_propagation(&g, Seed(3), 100);
        assert_eq!(asg.community_count(), 2);
        let labels = asg.labels().unwrap();
        assert_eq!(labels[0], labels[1]);
        assert_eq!(labels[1], labels[2]);
        assert_eq!(labels[3], labels[4]);
        assert_ne!(labels[0], labels[3]);
    }

    #[test]
    fn label_propagation_single_clique() {
        let mut g = Graph::new(5);
        for i in 0..5 {
            for j in (i + 1)..5 {
                g.add_edge(i, j).unwrap();
            }
        }
        let asg = label_propagation(&g, Seed(1), 100);
        assert_eq!(asg.community_count(), 1);
    }
}
