use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::{disjoint_packing, CoverSolution, SetCoverInstance, SolveStatus};

/// Greedy cover: repeatedly the guard seeing most uncovered witnesses, lowest
/// index on ties. `None` if some witness has no guard.
pub(crate) fn greedy_cover(instance: &SetCoverInstance, g2w: &[Vec<u32>]) -> Option<Vec<usize>> {
    if instance.witnesses.iter().any(|w| w.is_empty()) {
        return None;
    }
    let mut gain: Vec<usize> = g2w.iter().map(Vec::len).collect();
    let mut heap: BinaryHeap<(usize, Reverse<usize>)> = gain
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(g, &k)| (k, Reverse(g)))
        .collect();
    let mut covered = vec![false; instance.witnesses.len()];
    let mut left = instance.witnesses.len();
    let mut chosen = Vec::new();
    while left > 0 {
        let (k, Reverse(g)) = heap.pop()?;
        if k != gain[g] {
            if gain[g] > 0 {
                heap.push((gain[g], Reverse(g)));
            }
            continue;
        }
        chosen.push(g);
        for &w in &g2w[g] {
            let w = w as usize;
            if !covered[w] {
                covered[w] = true;
                left -= 1;
                for &h in &instance.witnesses[w] {
                    gain[h as usize] -= 1;
                }
            }
        }
    }
    chosen.sort_unstable();
    Some(chosen)
}

/// Witness indices by increasing set size, then index.
pub(crate) fn packing_order(witnesses: &[Vec<u32>]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..witnesses.len()).collect();
    order.sort_by_key(|&w| (witnesses[w].len(), w));
    order
}

pub fn solve_greedy(instance: &SetCoverInstance) -> CoverSolution {
    let g2w = instance.incidence();
    let Some(chosen) = greedy_cover(instance, &g2w) else {
        return CoverSolution::infeasible();
    };
    let lower = disjoint_packing(
        &instance.witnesses,
        &packing_order(&instance.witnesses),
        instance.guard_count,
    );
    CoverSolution {
        objective: chosen.len(),
        chosen_guards: chosen,
        status: SolveStatus::FeasibleBound { lower },
    }
}
