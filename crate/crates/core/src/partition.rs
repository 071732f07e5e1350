//! Partition refinement shared by Mealy and Moore minimization.

use std::collections::HashMap;

/// Coarsest partition of `0..initial.len()` that refines `initial` and is
/// stable under the transition table (`width` successors per state, flat).
/// Block ids are numbered by first appearance in state order.
pub(crate) fn refine(initial: &[usize], transition: &[usize], width: usize) -> Vec<usize> {
    let n = initial.len();
    let mut block = initial.to_vec();
    let mut count = renumber(&mut block);
    loop {
        let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
        let next: Vec<usize> = (0..n)
            .map(|q| {
                let mut signature = Vec::with_capacity(width + 1);
                signature.push(block[q]);
                signature.extend(transition[q * width..(q + 1) * width].iter().map(|&t| block[t]));
                let fresh = ids.len();
                *ids.entry(signature).or_insert(fresh)
            })
            .collect();
        block = next;
        if ids.len() == count {
            return block;
        }
        count = ids.len();
    }
}

fn renumber(block: &mut [usize]) -> usize {
    let mut ids = HashMap::new();
    for b in block.iter_mut() {
        let fresh = ids.len();
        *b = *ids.entry(*b).or_insert(fresh);
    }
    ids.len()
}

/// Breadth-first order of states reachable from `start`, digits ascending.
pub(crate) fn bfs_order(start: usize, transition: &[usize], width: usize, n: usize) -> Vec<usize> {
    let mut seen = vec![false; n];
    let mut order = vec![start];
    seen[start] = true;
    let mut head = 0;
    while head < order.len() {
        let q = order[head];
        head += 1;
        for &t in &transition[q * width..(q + 1) * width] {
            if !seen[t] {
                seen[t] = true;
                order.push(t);
            }
        }
    }
    order
}

/// Parallel BFS from both initial states; succeeds iff the induced state
/// correspondence is a bijection that respects transitions and `same_output`.
pub(crate) fn isomorphic(
    (init_a, trans_a, n_a): (usize, &[usize], usize),
    (init_b, trans_b, n_b): (usize, &[usize], usize),
    width: usize,
    same_output: impl Fn(usize, usize) -> bool,
) -> bool {
    if n_a != n_b {
        return false;
    }
    let mut forward = vec![usize::MAX; n_a];
    let mut backward = vec![usize::MAX; n_b];
    let mut queue = vec![(init_a, init_b)];
    forward[init_a] = init_b;
    backward[init_b] = init_a;
    while let Some((a, b)) = queue.pop() {
        if !same_output(a, b) {
            return false;
        }
        for x in 0..width {
            let (ta, tb) = (trans_a[a * width + x], trans_b[b * width + x]);
            match (forward[ta], backward[tb]) {
                (usize::MAX, usize::MAX) => {
                    forward[ta] = tb;
                    backward[tb] = ta;
                    queue.push((ta, tb));
                }
                (fa, bb) if fa == tb && bb == ta => {}
                _ => return false,
            }
        }
    }
    forward.iter().all(|&f| f != usize::MAX)
}
