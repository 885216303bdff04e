//! Simple-cycle counts checked against exhaustive enumeration.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tss_core::metrics::{count_simple_cycles, CycleBudget};
use tss_core::tss::TssGraph;

/// Counts simple cycles by trying every vertex subset and every cyclic order
/// of it (smallest vertex first).
fn brute_force_cycles(n: usize, edge: impl Fn(usize, usize) -> bool, max_len: usize) -> u64 {
    let mut total = 0;
    for mask in 1u32..(1 << n) {
        let members: Vec<usize> = (0..n).filter(|v| mask & (1 << v) != 0).collect();
        if members.len() > max_len {
            continue;
        }
        let (first, rest) = members.split_first().unwrap();
        for order in rest.iter().copied().permutations(rest.len()) {
            let cycle: Vec<usize> = std::iter::once(*first).chain(order).collect();
            let closed = (0..cycle.len()).all(|k| edge(cycle[k], cycle[(k + 1) % cycle.len()]));
            if closed {
                total += 1;
            }
        }
    }
    total
}

fn random_graph(rng: &mut ChaCha8Rng) -> (usize, Vec<(usize, usize)>) {
    let n = rng.gen_range(1..=6);
    let density: f64 = rng.gen_range(0.05..0.95);
    let edges = (0..n)
        .flat_map(|j| (0..n).map(move |i| (j, i)))
        .filter(|_| rng.gen_bool(density))
        .collect::<Vec<_>>();
    (n, edges)
}

#[test]
fn matches_brute_force_on_random_digraphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7551);
    for trial in 0..400 {
        let (n, edges) = random_graph(&mut rng);
        let g = TssGraph::from_edges(n, edges.iter().copied(), 0.0).unwrap();
        let expected = brute_force_cycles(n, |a, b| g.has_edge(a, b), n);
        let got = count_simple_cycles(&g, &CycleBudget::default());
        assert!(!got.capped);
        assert_eq!(got.count, expected, "trial {trial}: n = {n}, edges = {edges:?}");
    }
}

#[test]
fn length_limited_counts_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..150 {
        let (n, edges) = random_graph(&mut rng);
        let g = TssGraph::from_edges(n, edges.iter().copied(), 0.0).unwrap();
        for len in 1..=n {
            let expected = brute_force_cycles(n, |a, b| g.has_edge(a, b), len);
            let got = count_simple_cycles(&g, &CycleBudget::default().with_max_length(len));
            assert_eq!(got.count, expected, "len {len}, edges {edges:?}");
        }
    }
}

#[test]
fn complete_digraphs_with_loops() {
    // sum_{k=1}^{n} C(n, k) (k - 1)!
    for n in 1..=6usize {
        let g = TssGraph::from_edges(n, (0..n).flat_map(|j| (0..n).map(move |i| (j, i))), 0.0)
            .unwrap();
        let analytic: u64 = (1..=n as u64)
            .map(|k| binomial(n as u64, k) * (1..k).product::<u64>())
            .sum();
        assert_eq!(count_simple_cycles(&g, &CycleBudget::default()).count, analytic);
        assert_eq!(brute_force_cycles(n, |_, _| true, n), analytic);
    }
}

#[test]
fn count_does_not_depend_on_vertex_labels() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let (n, edges) = random_graph(&mut rng);
        let mut perm: Vec<usize> = (0..n).collect();
        for k in (1..n).rev() {
            perm.swap(k, rng.gen_range(0..=k));
        }
        let g = TssGraph::from_edges(n, edges.iter().copied(), 0.0).unwrap();
        let h = TssGraph::from_edges(n, edges.iter().map(|&(a, b)| (perm[a], perm[b])), 0.0)
            .unwrap();
        let budget = CycleBudget::default();
        assert_eq!(count_simple_cycles(&g, &budget), count_simple_cycles(&h, &budget));
    }
}

#[test]
fn capped_count_is_reproducible() {
    let n = 9;
    let g = TssGraph::from_edges(n, (0..n).flat_map(|j| (0..n).map(move |i| (j, i))), 0.0)
        .unwrap();
    let budget = CycleBudget::new(5000);
    let first = count_simple_cycles(&g, &budget);
    assert!(first.capped);
    assert_eq!(first.count, 5000);
    for _ in 0..3 {
        assert_eq!(count_simple_cycles(&g, &budget), first);
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
