//! Breadth-first search over `(current vertex, visited set)` states.
//!
//! Every walk the lemma and proof code cares about is a shortest path in
//! this state graph under some restriction on which steps are allowed, so
//! one search serves all of them. Among shortest paths the
//! lexicographically smallest vertex sequence is extracted greedily from the
//! layer of states that lie on some shortest path to the goal.

use crate::digraph::{Digraph, VertexSet};
use crate::error::{Error, Result};

/// States are stored densely, so the search is capped well below
/// [`crate::digraph::MAX_VERTICES`].
pub const MAX_SEARCH_VERTICES: usize = 16;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Rules {
    pub start: usize,
    pub end: usize,
    /// Never step back into `start`.
    pub avoid_start: bool,
    /// `end` may only be entered as the last new vertex, which ends the walk.
    pub end_last: bool,
}

const UNSEEN: u32 = u32::MAX;

pub(crate) struct Layers<'g> {
    g: &'g Digraph,
    rules: Rules,
    dist: Vec<u32>,
    // States on at least one shortest path from the start to the goal.
    useful: Vec<bool>,
    goal: Option<usize>,
}

impl<'g> Layers<'g> {
    pub fn search(g: &'g Digraph, rules: Rules) -> Result<Self> {
        let n = g.n();
        if n > MAX_SEARCH_VERTICES {
            return Err(Error::TooLarge { n, max: MAX_SEARCH_VERTICES });
        }
        g.check_vertex(rules.start)?;
        g.check_vertex(rules.end)?;
        if rules.start == rules.end {
            return Err(Error::arg("start and end must differ"));
        }
        let full = g.full_set();
        let goal_state = state(n, rules.end, full);
        let mut dist = vec![UNSEEN; n << n];
        let s0 = state(n, rules.start, 1 << rules.start);
        dist[s0] = 0;
        let mut queue = vec![s0];
        let mut head = 0;
        let mut goal = None;
        while head < queue.len() {
            let s = queue[head];
            head += 1;
            if s == goal_state {
                goal = Some(s);
                break;
            }
            for t in successors(g, &rules, s) {
                if dist[t] == UNSEEN {
                    dist[t] = dist[s] + 1;
                    queue.push(t);
                }
            }
        }

        let mut useful = vec![false; n << n];
        if let Some(goal) = goal {
            useful[goal] = true;
            for &s in queue.iter().rev() {
                if !useful[s] {
                    useful[s] = successors(g, &rules, s)
                        .any(|t| dist[t] == dist[s] + 1 && useful[t]);
                }
            }
        }
        Ok(Layers { g, rules, dist, useful, goal })
    }

    /// The lexicographically smallest shortest walk.
    pub fn smallest(&self) -> Option<Vec<usize>> {
        let goal = self.goal?;
        let n = self.g.n();
        let mut s = state(n, self.rules.start, 1 << self.rules.start);
        let mut walk = vec![self.rules.start];
        while s != goal {
            s = self
                .next_steps(s)
                .next()
                .expect("a useful state has a useful successor");
            walk.push(s % n);
        }
        Some(walk)
    }

    /// Every shortest walk, in lexicographic order.
    pub fn all_shortest(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        if let Some(goal) = self.goal {
            let n = self.g.n();
            let s0 = state(n, self.rules.start, 1 << self.rules.start);
            let mut walk = vec![self.rules.start];
            self.collect(s0, goal, &mut walk, &mut out);
        }
        out
    }

    fn collect(&self, s: usize, goal: usize, walk: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if s == goal {
            out.push(walk.clone());
            return;
        }
        let next: Vec<usize> = self.next_steps(s).collect();
        for t in next {
            walk.push(t % self.g.n());
            self.collect(t, goal, walk, out);
            walk.pop();
        }
    }

    // Successors of `s` that continue some shortest path, by increasing vertex.
    fn next_steps(&self, s: usize) -> impl Iterator<Item = usize> + '_ {
        successors(self.g, &self.rules, s)
            .filter(move |&t| self.dist[t] == self.dist[s] + 1 && self.useful[t])
    }
}

fn state(n: usize, c: usize, seen: VertexSet) -> usize {
    seen as usize * n + c
}

// Out-neighbours are sorted, so successors come out by increasing vertex.
fn successors<'a>(g: &'a Digraph, rules: &'a Rules, s: usize) -> impl Iterator<Item = usize> + 'a {
    let n = g.n();
    let (c, seen) = (s % n, (s / n) as VertexSet);
    let full = g.full_set();
    let done = rules.end_last && seen == full;
    g.out_neighbors(c).iter().filter_map(move |&t| {
        if done || (rules.avoid_start && t == rules.start) {
            return None;
        }
        let next = seen | 1 << t;
        if rules.end_last && t == rules.end && next != full {
            return None;
        }
        Some(state(n, t, next))
    })
}
