use std::time::{Duration, Instant};

use super::greedy::{greedy_cover, packing_order};
use super::{reduce, CoverSolution, SetCoverInstance, SolveStatus};

const UNDECIDED: u8 = 0;
const IN: u8 = 1;
const OUT: u8 = 2;

/// Exact minimum cover by reduction, splitting into independent components and
/// branch and bound on each.
///
/// When `budget` runs out the best cover found so far is returned together
/// with a proven lower bound.
pub fn solve_exact(instance: &SetCoverInstance, budget: Option<Duration>) -> CoverSolution {
    let deadline = budget.map(|b| Instant::now() + b);
    if instance.witnesses.iter().any(|w| w.is_empty()) {
        return CoverSolution::infeasible();
    }
    let red = reduce(instance);
    if red.infeasible {
        return CoverSolution::infeasible();
    }
    let mut chosen = red.forced.clone();
    let mut lower = chosen.len();
    let mut optimal = true;
    for (guards, witnesses) in components(&red.instance) {
        let sub = SetCoverInstance::new(guards.len(), witnesses);
        let result = Search::new(&sub).run(deadline);
        chosen.extend(result.chosen.iter().map(|&g| red.guard_map[guards[g]]));
        lower += result.lower;
        optimal &= result.optimal;
    }
    chosen.sort_unstable();
    let objective = chosen.len();
    let status = if optimal {
        SolveStatus::Optimal
    } else {
        SolveStatus::FeasibleBound { lower }
    };
    CoverSolution {
        chosen_guards: chosen,
        objective,
        status,
    }
}

/// Connected components of the guard/witness incidence graph, each with
/// guards renumbered from zero. Ordered by smallest guard index.
fn components(instance: &SetCoverInstance) -> Vec<(Vec<usize>, Vec<Vec<u32>>)> {
    let n = instance.guard_count;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for w in &instance.witnesses {
        for &g in &w[1..] {
            let a = find(&mut parent, w[0] as usize);
            let b = find(&mut parent, g as usize);
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }

    let mut slot = vec![usize::MAX; n];
    let mut local = vec![0u32; n];
    let mut out: Vec<(Vec<usize>, Vec<Vec<u32>>)> = Vec::new();
    for (g, loc) in local.iter_mut().enumerate() {
        let r = find(&mut parent, g);
        if slot[r] == usize::MAX {
            slot[r] = out.len();
            out.push((Vec::new(), Vec::new()));
        }
        let comp = &mut out[slot[r]];
        *loc = comp.0.len() as u32;
        comp.0.push(g);
    }
    for w in &instance.witnesses {
        let r = find(&mut parent, w[0] as usize);
        out[slot[r]]
            .1
            .push(w.iter().map(|&g| local[g as usize]).collect());
    }
    out.retain(|(_, ws)| !ws.is_empty());
    out
}

struct SearchResult {
    chosen: Vec<usize>,
    lower: usize,
    optimal: bool,
}

struct Frame {
    mark: usize,
    guard: usize,
    excluded: bool,
}

struct Search<'a> {
    w2g: &'a [Vec<u32>],
    g2w: Vec<Vec<u32>>,
    state: Vec<u8>,
    covered: Vec<u32>,
    avail: Vec<u32>,
    gain: Vec<u32>,
    uncovered: usize,
    chosen: usize,
    trail: Vec<usize>,
    order: Vec<usize>,
    queue: Vec<u32>,
    used: Vec<bool>,
}

impl<'a> Search<'a> {
    fn new(instance: &'a SetCoverInstance) -> Self {
        let g2w = instance.incidence();
        let gain = g2w.iter().map(|l| l.len() as u32).collect();
        Search {
            w2g: &instance.witnesses,
            state: vec![UNDECIDED; instance.guard_count],
            covered: vec![0; instance.witnesses.len()],
            avail: instance.witnesses.iter().map(|w| w.len() as u32).collect(),
            gain,
            uncovered: instance.witnesses.len(),
            chosen: 0,
            trail: Vec::new(),
            order: packing_order(&instance.witnesses),
            queue: Vec::new(),
            used: vec![false; instance.guard_count],
            g2w,
        }
    }

    fn include(&mut self, g: usize) {
        self.state[g] = IN;
        self.chosen += 1;
        self.trail.push(g);
        for &w in &self.g2w[g] {
            let w = w as usize;
            self.avail[w] -= 1;
            if self.covered[w] == 0 {
                self.uncovered -= 1;
                for &h in &self.w2g[w] {
                    self.gain[h as usize] -= 1;
                }
            }
            self.covered[w] += 1;
        }
    }

    fn exclude(&mut self, g: usize) {
        self.state[g] = OUT;
        self.trail.push(g);
        for &w in &self.g2w[g] {
            self.avail[w as usize] -= 1;
            if self.covered[w as usize] == 0 {
                self.queue.push(w);
            }
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let g = self.trail.pop().expect("non-empty trail");
            if self.state[g] == IN {
                self.chosen -= 1;
                for &w in &self.g2w[g] {
                    let w = w as usize;
                    self.covered[w] -= 1;
                    if self.covered[w] == 0 {
                        self.uncovered += 1;
                        for &h in &self.w2g[w] {
                            self.gain[h as usize] += 1;
                        }
                    }
                    self.avail[w] += 1;
                }
            } else {
                for &w in &self.g2w[g] {
                    self.avail[w as usize] += 1;
                }
            }
            self.state[g] = UNDECIDED;
        }
        self.queue.clear();
    }

    /// Forces the last guard of every uncovered witness; false on a dead end.
    fn propagate(&mut self) -> bool {
        while let Some(w) = self.queue.pop() {
            let w = w as usize;
            if self.covered[w] > 0 {
                continue;
            }
            match self.avail[w] {
                0 => {
                    self.queue.clear();
                    return false;
                }
                1 => {
                    let g = self.w2g[w]
                        .iter()
                        .map(|&g| g as usize)
                        .find(|&g| self.state[g] == UNDECIDED)
                        .expect("one guard available");
                    self.include(g);
                }
                _ => {}
            }
        }
        true
    }

    fn lower_bound(&mut self) -> usize {
        if self.uncovered == 0 {
            return self.chosen;
        }
        self.used.iter_mut().for_each(|u| *u = false);
        let mut packed = 0;
        for &w in &self.order {
            if self.covered[w] > 0 {
                continue;
            }
            let free = self.w2g[w]
                .iter()
                .all(|&g| self.state[g as usize] != UNDECIDED || !self.used[g as usize]);
            if free {
                for &g in &self.w2g[w] {
                    if self.state[g as usize] == UNDECIDED {
                        self.used[g as usize] = true;
                    }
                }
                packed += 1;
            }
        }
        let best_gain = (0..self.state.len())
            .filter(|&g| self.state[g] == UNDECIDED)
            .map(|g| self.gain[g] as usize)
            .max()
            .unwrap_or(0);
        let by_gain = if best_gain == 0 {
            usize::MAX / 2
        } else {
            self.uncovered.div_ceil(best_gain)
        };
        self.chosen + packed.max(by_gain)
    }

    fn branch_guard(&self) -> usize {
        let mut best = usize::MAX;
        let mut best_gain = 0;
        for g in 0..self.state.len() {
            if self.state[g] == UNDECIDED && self.gain[g] > best_gain {
                best_gain = self.gain[g];
                best = g;
            }
        }
        best
    }

    fn current_cover(&self) -> Vec<usize> {
        (0..self.state.len())
            .filter(|&g| self.state[g] == IN)
            .collect()
    }

    fn run(mut self, deadline: Option<Instant>) -> SearchResult {
        let instance = SetCoverInstance::new(self.state.len(), self.w2g.to_vec());
        let mut best = greedy_cover(&instance, &self.g2w).expect("valid component");
        let root_lower = self.lower_bound();
        if root_lower >= best.len() {
            return SearchResult {
                lower: best.len(),
                chosen: best,
                optimal: true,
            };
        }

        let mut stack: Vec<Frame> = Vec::new();
        let mut nodes: u64 = 0;
        let mut alive = true;
        loop {
            nodes += 1;
            if nodes.is_multiple_of(1024) && deadline.is_some_and(|d| Instant::now() >= d) {
                return SearchResult {
                    chosen: best,
                    lower: root_lower,
                    optimal: false,
                };
            }
            let mut descend = false;
            if alive {
                if self.uncovered == 0 {
                    if self.chosen < best.len() {
                        best = self.current_cover();
                    }
                } else if self.lower_bound() < best.len() {
                    descend = true;
                }
            }
            if descend {
                let g = self.branch_guard();
                stack.push(Frame {
                    mark: self.trail.len(),
                    guard: g,
                    excluded: false,
                });
                self.include(g);
                alive = self.propagate();
                continue;
            }
            // backtrack to the deepest frame with an untried branch
            loop {
                let Some(frame) = stack.last_mut() else {
                    return SearchResult {
                        lower: best.len(),
                        chosen: best,
                        optimal: true,
                    };
                };
                let (mark, g) = (frame.mark, frame.guard);
                if frame.excluded {
                    stack.pop();
                    self.undo_to(mark);
                    continue;
                }
                frame.excluded = true;
                self.undo_to(mark);
                self.exclude(g);
                alive = self.propagate();
                break;
            }
        }
    }
}
