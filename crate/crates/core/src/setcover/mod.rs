//! Unit-cost set cover over guards and witnesses.
//!
//! A witness is the set of guards that see it; a solution is a set of guards
//! hitting every witness.

mod exact;
mod greedy;
mod reduce;

use std::fmt::Write as _;
use std::io;

pub use exact::solve_exact;
pub use greedy::solve_greedy;
pub use reduce::{reduce, Reduction, ReductionStep};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetCoverInstance {
    pub guard_count: usize,
    /// Sorted, non-empty guard-index lists.
    pub witnesses: Vec<Vec<u32>>,
    /// Candidate id of each guard index.
    pub guard_meta: Vec<usize>,
}

impl SetCoverInstance {
    /// Guard `i` gets candidate id `i`. Witness lists are sorted and deduplicated.
    pub fn new(guard_count: usize, witnesses: Vec<Vec<u32>>) -> Self {
        let meta = (0..guard_count).collect();
        Self::with_meta(witnesses, meta)
    }

    pub fn with_meta(mut witnesses: Vec<Vec<u32>>, guard_meta: Vec<usize>) -> Self {
        for w in &mut witnesses {
            w.sort_unstable();
            w.dedup();
        }
        SetCoverInstance {
            guard_count: guard_meta.len(),
            witnesses,
            guard_meta,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.guard_meta.len() != self.guard_count {
            return Err("guard_meta length differs from guard_count".into());
        }
        for (i, w) in self.witnesses.iter().enumerate() {
            if w.is_empty() {
                return Err(format!("witness {i} has no guard"));
            }
            if let Some(&g) = w.iter().find(|&&g| g as usize >= self.guard_count) {
                return Err(format!("witness {i} names guard {g} out of range"));
            }
        }
        Ok(())
    }

    pub fn is_cover(&self, guards: &[usize]) -> bool {
        let mut chosen = vec![false; self.guard_count];
        for &g in guards {
            chosen[g] = true;
        }
        self.witnesses
            .iter()
            .all(|w| w.iter().any(|&g| chosen[g as usize]))
    }

    /// Guard -> witness incidence lists.
    pub(crate) fn incidence(&self) -> Vec<Vec<u32>> {
        let mut g2w = vec![Vec::new(); self.guard_count];
        for (i, w) in self.witnesses.iter().enumerate() {
            for &g in w {
                g2w[g as usize].push(i as u32);
            }
        }
        g2w
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    FeasibleBound { lower: usize },
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverSolution {
    /// Sorted guard indices of the instance.
    pub chosen_guards: Vec<usize>,
    pub objective: usize,
    pub status: SolveStatus,
}

impl CoverSolution {
    pub(crate) fn infeasible() -> Self {
        CoverSolution {
            chosen_guards: Vec::new(),
            objective: 0,
            status: SolveStatus::Infeasible,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }

    /// Proven lower bound on the optimum.
    pub fn lower_bound(&self) -> Option<usize> {
        match self.status {
            SolveStatus::Optimal => Some(self.objective),
            SolveStatus::FeasibleBound { lower } => Some(lower),
            SolveStatus::Infeasible => None,
        }
    }
}

/// Lower bound from a greedily packed set of pairwise guard-disjoint witnesses,
/// taken in the given order.
pub(crate) fn disjoint_packing(
    witnesses: &[Vec<u32>],
    order: &[usize],
    guard_count: usize,
) -> usize {
    let mut used = vec![false; guard_count];
    let mut count = 0;
    for &w in order {
        let set = &witnesses[w];
        if set.iter().all(|&g| !used[g as usize]) {
            for &g in set {
                used[g as usize] = true;
            }
            count += 1;
        }
    }
    count
}

/// Writes the 0/1 program `min Σ x_g` s.t. one covering row per witness.
pub fn export_lp(instance: &SetCoverInstance, mut out: impl io::Write) -> io::Result<()> {
    out.write_all(lp_text(instance).as_bytes())
}

pub fn lp_text(instance: &SetCoverInstance) -> String {
    const WIDTH: usize = 78;
    let mut s = String::new();
    let push_terms =
        |s: &mut String, head: &str, terms: &mut dyn Iterator<Item = usize>, tail: &str| {
            let mut line = String::from(head);
            let mut first = true;
            for g in terms {
                let term = if first {
                    format!("xg{g}")
                } else {
                    format!(" + xg{g}")
                };
                first = false;
                if line.len() + term.len() > WIDTH {
                    s.push_str(line.trim_end());
                    s.push('\n');
                    line = String::from("   ");
                }
                line.push_str(&term);
            }
            if first {
                line.push('0');
            }
            line.push_str(tail);
            s.push_str(&line);
            s.push('\n');
        };

    s.push_str("\\ unit-cost guard cover\nMinimize\n");
    push_terms(&mut s, " obj: ", &mut (0..instance.guard_count), "");
    if !instance.witnesses.is_empty() {
        s.push_str("Subject To\n");
        for (i, w) in instance.witnesses.iter().enumerate() {
            push_terms(
                &mut s,
                &format!(" w{i}: "),
                &mut w.iter().map(|&g| g as usize),
                " >= 1",
            );
        }
    }
    if instance.guard_count > 0 {
        s.push_str("Binary\n");
        let mut line = String::new();
        for g in 0..instance.guard_count {
            let term = format!(" xg{g}");
            if line.len() + term.len() > WIDTH {
                let _ = writeln!(s, "{line}");
                line.clear();
            }
            line.push_str(&term);
        }
        let _ = writeln!(s, "{line}");
    }
    s.push_str("End\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lp_contains_covering_row() {
        let inst = SetCoverInstance::new(2, vec![vec![0, 1]]);
        let text = lp_text(&inst);
        assert!(text.contains("xg0 + xg1 >= 1"), "{text}");
        assert!(text.contains("Binary\n xg0 xg1\n"));
        assert!(text.ends_with("End\n"));
    }

    #[test]
    fn lp_without_witnesses_is_objective_only() {
        let inst = SetCoverInstance::new(3, vec![]);
        let text = lp_text(&inst);
        assert!(!text.contains("Subject To"));
        assert!(text.contains("obj: xg0 + xg1 + xg2"));
    }

    #[test]
    fn long_rows_are_wrapped() {
        let inst = SetCoverInstance::new(100, vec![(0..100).collect()]);
        let text = lp_text(&inst);
        assert!(text.lines().all(|l| l.len() <= 80));
        assert!(text.contains("xg99 >= 1"));
    }

    #[test]
    fn validation() {
        assert!(SetCoverInstance::new(2, vec![vec![0], vec![1]])
            .validate()
            .is_ok());
        assert!(SetCoverInstance::new(2, vec![vec![]]).validate().is_err());
        assert!(SetCoverInstance::new(2, vec![vec![2]]).validate().is_err());
    }
}
