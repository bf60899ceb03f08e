//! Helpers shared by the integration tests. Everything here is written
//! against plain adjacency data so it can serve as an oracle.

#![allow(dead_code)]

use assoc_core::Diagram;

/// Adjacency as bitmasks over `0..n`.
pub fn adjacency(d: &Diagram) -> Vec<u64> {
    let mut adj = vec![0u64; d.len()];
    for (a, b, _) in d.edges() {
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    }
    adj
}

/// Depth-first connectivity of the vertex set `s`.
pub fn connected(adj: &[u64], s: u64) -> bool {
    if s == 0 {
        return false;
    }
    let mut seen = s & s.wrapping_neg();
    let mut stack = vec![seen.trailing_zeros() as usize];
    while let Some(v) = stack.pop() {
        let mut fresh = adj[v] & s & !seen;
        seen |= fresh;
        while fresh != 0 {
            stack.push(fresh.trailing_zeros() as usize);
            fresh &= fresh - 1;
        }
    }
    seen == s
}

/// Disjoint with no edge between.
pub fn orthogonal(adj: &[u64], a: u64, b: u64) -> bool {
    a & b == 0 && (0..adj.len()).all(|v| a >> v & 1 == 0 || adj[v] & b == 0)
}

pub fn compatible(adj: &[u64], a: u64, b: u64) -> bool {
    a & b == a || a & b == b || orthogonal(adj, a, b)
}

/// Connected subsets of `0..n` as bitmasks, ascending.
pub fn connected_masks(adj: &[u64]) -> Vec<u64> {
    (1..1u64 << adj.len()).filter(|&s| connected(adj, s)).collect()
}

fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

fn permute_mask(n: usize, mask: u64, perm: &[usize]) -> u64 {
    // Bit of the pair (i, j), i < j, in row-by-row order.
    let bit_of = |i: usize, j: usize| {
        let (i, j) = (i.min(j), i.max(j));
        i * (2 * n - i - 1) / 2 + (j - i - 1)
    };
    let mut out = 0;
    for i in 0..n {
        for j in i + 1..n {
            if mask >> bit_of(i, j) & 1 == 1 {
                out |= 1 << bit_of(perm[i], perm[j]);
            }
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// One representative per isomorphism class of connected simple graphs on
/// `n` vertices (unlabelled edges).
pub fn connected_classes(n: usize) -> Vec<Diagram> {
    let perms = permutations(n);
    let mut reps = std::collections::BTreeSet::new();
    for mask in 0..1u64 << pair_count(n) {
        let d = Diagram::from_edge_mask(n, mask).unwrap();
        if !connected(&adjacency(&d), (1u64 << n) - 1) {
            continue;
        }
        let canon = perms.iter().map(|p| permute_mask(n, mask, p)).min().unwrap();
        reps.insert(canon);
    }
    reps.into_iter()
        .map(|m| Diagram::from_edge_mask(n, m).unwrap())
        .collect()
}

/// Connected classes with at most `max` vertices.
pub fn classes_up_to(max: usize) -> Vec<Diagram> {
    (1..=max).flat_map(connected_classes).collect()
}

/// The number of maximal pairwise-compatible families of proper connected
/// subsets, by exhaustive search over families of size `n − 1`.
pub fn brute_force_maximal_count(d: &Diagram) -> usize {
    let adj = adjacency(d);
    let n = adj.len();
    let full = (1u64 << n) - 1;
    let proper: Vec<u64> = connected_masks(&adj).into_iter().filter(|&s| s != full).collect();
    fn go(adj: &[u64], pool: &[u64], start: usize, chosen: &mut Vec<u64>, need: usize) -> usize {
        if chosen.len() == need {
            return 1;
        }
        let mut total = 0;
        for i in start..pool.len() {
            if chosen.iter().all(|&c| compatible(adj, c, pool[i])) {
                chosen.push(pool[i]);
                total += go(adj, pool, i + 1, chosen, need);
                chosen.pop();
            }
        }
        total
    }
    go(&adj, &proper, 0, &mut Vec::new(), n - 1)
}

/// Distinct complete bracketings of `letters` symbols, generated as strings.
pub fn bracketings(letters: usize) -> std::collections::BTreeSet<String> {
    fn go(lo: usize, hi: usize) -> Vec<String> {
        if hi - lo == 1 {
            return vec![((b'a' + lo as u8) as char).to_string()];
        }
        let mut out = Vec::new();
        for mid in lo + 1..hi {
            for l in go(lo, mid) {
                for r in go(mid, hi) {
                    out.push(format!("({l}{r})"));
                }
            }
        }
        out
    }
    go(0, letters).into_iter().collect()
}
