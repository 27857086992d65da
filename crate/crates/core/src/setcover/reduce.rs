use super::SetCoverInstance;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionStep {
    /// The guard was the only one left for `witness`.
    Forced { guard: usize, witness: usize },
    /// `witness`'s set contained the set of `by`.
    DominatedWitness { witness: usize, by: usize },
    /// Every witness of `guard` is also seen by `by`.
    DominatedGuard { guard: usize, by: usize },
    /// The guard sees no remaining witness.
    UselessGuard { guard: usize },
}

/// Result of [`reduce`]. Indices in `forced`, `guard_map` and the log refer to
/// the input instance.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub instance: SetCoverInstance,
    /// Residual guard index -> input guard index.
    pub guard_map: Vec<usize>,
    pub forced: Vec<usize>,
    pub log: Vec<ReductionStep>,
    /// Some witness lost all its guards; only possible for invalid input.
    pub infeasible: bool,
}

fn is_subset(a: &[u32], b: &[u32]) -> bool {
    if a.len() > b.len() {
        return false;
    }
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

/// Applies unit-witness, dominated-witness and dominated-guard rules until
/// none fires. The optimum of the residual plus `forced.len()` equals the
/// optimum of the input.
pub fn reduce(instance: &SetCoverInstance) -> Reduction {
    let nw = instance.witnesses.len();
    let ng = instance.guard_count;
    let mut w_alive = vec![true; nw];
    let mut g_alive = vec![true; ng];
    let mut forced = Vec::new();
    let mut log = Vec::new();

    let mut wg: Vec<Vec<u32>> = instance.witnesses.clone();
    let mut gw: Vec<Vec<u32>> = vec![Vec::new(); ng];
    loop {
        for (w, set) in wg.iter_mut().enumerate() {
            if w_alive[w] {
                set.retain(|&g| g_alive[g as usize]);
            } else {
                set.clear();
            }
        }
        if (0..nw).any(|w| w_alive[w] && wg[w].is_empty()) {
            return Reduction {
                instance: SetCoverInstance::with_meta(Vec::new(), Vec::new()),
                guard_map: Vec::new(),
                forced,
                log,
                infeasible: true,
            };
        }

        // unit witnesses
        let mut hit = vec![false; ng];
        for w in 0..nw {
            if w_alive[w] && wg[w].len() == 1 {
                let g = wg[w][0] as usize;
                if g_alive[g] {
                    g_alive[g] = false;
                    hit[g] = true;
                    forced.push(g);
                    log.push(ReductionStep::Forced {
                        guard: g,
                        witness: w,
                    });
                }
            }
        }
        if hit.iter().any(|&h| h) {
            for w in 0..nw {
                if w_alive[w] && wg[w].iter().any(|&g| hit[g as usize]) {
                    w_alive[w] = false;
                }
            }
            continue;
        }

        for list in gw.iter_mut() {
            list.clear();
        }
        for w in 0..nw {
            if w_alive[w] {
                for &g in &wg[w] {
                    gw[g as usize].push(w as u32);
                }
            }
        }

        // dominated witnesses: a superset of another witness is covered for free
        let mut changed = false;
        for w in 0..nw {
            if !w_alive[w] {
                continue;
            }
            let pivot = *wg[w]
                .iter()
                .min_by_key(|&&g| (gw[g as usize].len(), g))
                .expect("non-empty");
            for &w2 in &gw[pivot as usize] {
                let w2 = w2 as usize;
                if w2 == w || !w_alive[w2] {
                    continue;
                }
                let (a, b) = (wg[w].len(), wg[w2].len());
                if (b > a || (b == a && w2 > w)) && is_subset(&wg[w], &wg[w2]) {
                    w_alive[w2] = false;
                    changed = true;
                    log.push(ReductionStep::DominatedWitness { witness: w2, by: w });
                }
            }
        }
        if changed {
            continue;
        }

        // dominated guards
        for g in 0..ng {
            if !g_alive[g] {
                continue;
            }
            if gw[g].is_empty() {
                g_alive[g] = false;
                changed = true;
                log.push(ReductionStep::UselessGuard { guard: g });
                continue;
            }
            let pivot = *gw[g]
                .iter()
                .min_by_key(|&&w| (wg[w as usize].len(), w))
                .expect("non-empty");
            for &g2 in &wg[pivot as usize] {
                let g2 = g2 as usize;
                if g2 == g || !g_alive[g2] {
                    continue;
                }
                let (a, b) = (gw[g].len(), gw[g2].len());
                if (b > a || (b == a && g2 < g)) && is_subset(&gw[g], &gw[g2]) {
                    g_alive[g] = false;
                    changed = true;
                    log.push(ReductionStep::DominatedGuard { guard: g, by: g2 });
                    break;
                }
            }
        }
        if !changed {
            break;
        }
    }

    let guard_map: Vec<usize> = (0..ng).filter(|&g| g_alive[g]).collect();
    let mut new_id = vec![u32::MAX; ng];
    for (i, &g) in guard_map.iter().enumerate() {
        new_id[g] = i as u32;
    }
    let witnesses: Vec<Vec<u32>> = (0..nw)
        .filter(|&w| w_alive[w])
        .map(|w| wg[w].iter().map(|&g| new_id[g as usize]).collect())
        .collect();
    let meta = guard_map.iter().map(|&g| instance.guard_meta[g]).collect();
    Reduction {
        instance: SetCoverInstance::with_meta(witnesses, meta),
        guard_map,
        forced,
        log,
        infeasible: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_witness_forces_its_guard() {
        let inst = SetCoverInstance::new(4, vec![vec![3], vec![0, 1]]);
        let red = reduce(&inst);
        assert!(red.forced.contains(&3));
        assert!(red.log.contains(&ReductionStep::Forced {
            guard: 3,
            witness: 0
        }));
    }

    #[test]
    fn superset_witness_is_deleted() {
        let inst = SetCoverInstance::new(4, vec![vec![1, 2], vec![1, 2, 3]]);
        let red = reduce(&inst);
        assert!(red
            .log
            .contains(&ReductionStep::DominatedWitness { witness: 1, by: 0 }));
    }

    #[test]
    fn equal_guards_keep_the_lower_id() {
        let inst = SetCoverInstance::new(2, vec![vec![0, 1], vec![0, 1], vec![0, 1]]);
        let red = reduce(&inst);
        assert_eq!(red.forced, vec![0]);
        assert!(red.instance.witnesses.is_empty());
    }

    #[test]
    fn empty_witness_is_infeasible() {
        let inst = SetCoverInstance::new(2, vec![vec![0], vec![]]);
        assert!(reduce(&inst).infeasible);
    }

    #[test]
    fn subset_test() {
        assert!(is_subset(&[1, 3], &[0, 1, 2, 3]));
        assert!(!is_subset(&[1, 4], &[0, 1, 2, 3]));
        assert!(is_subset(&[], &[0]));
    }
}
