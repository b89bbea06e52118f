//! Distance-reducing local search on open paths with fixed endpoints.
//!
//! All moves are first-improvement and keep the first and last city in
//! place. 2.5-opt adds single-node reinsertion to 2-opt; 3-opt adds segment
//! exchanges (with optional segment reversal), scanned through neighbour
//! lists.

use crate::aco::{LocalSearch, NeighborLists};
use crate::eval::Route;
use crate::instance::Instance;

/// Neighbour-list length used by [`local_search`].
const DEFAULT_NEIGHBORS: usize = 20;

/// Improves `route` with the chosen neighbourhood. `LocalSearch::None`
/// returns the input unchanged.
pub fn local_search(inst: &Instance, route: &Route, kind: LocalSearch) -> Route {
    if kind == LocalSearch::ThreeOpt {
        let nn = NeighborLists::new(inst, DEFAULT_NEIGHBORS);
        LocalSearcher::new(inst, &nn).run(route, kind)
    } else {
        let nn = NeighborLists::new(inst, 0);
        LocalSearcher::new(inst, &nn).run(route, kind)
    }
}

/// Reusable local search bound to one instance.
pub struct LocalSearcher<'a> {
    inst: &'a Instance,
    neighbors: &'a NeighborLists,
}

impl<'a> LocalSearcher<'a> {
    pub fn new(inst: &'a Instance, neighbors: &'a NeighborLists) -> Self {
        LocalSearcher { inst, neighbors }
    }

    pub fn run(&self, route: &Route, kind: LocalSearch) -> Route {
        let mut path = route.cities().to_vec();
        match kind {
            LocalSearch::None => return route.clone(),
            LocalSearch::TwoOpt => {
                self.two_opt(&mut path);
            }
            LocalSearch::TwoHalfOpt => loop {
                let a = self.two_opt(&mut path);
                let b = self.node_insertion(&mut path);
                if !(a || b) {
                    break;
                }
            },
            LocalSearch::ThreeOpt => loop {
                let a = self.two_opt(&mut path);
                let b = self.segment_exchange(&mut path);
                if !(a || b) {
                    break;
                }
            },
        }
        Route::from_raw(path)
    }

    #[inline]
    fn d(&self, a: usize, b: usize) -> i64 {
        self.inst.d(a, b) as i64
    }

    /// Reverses segments until no reversal shortens the path.
    fn two_opt(&self, p: &mut [usize]) -> bool {
        let len = p.len();
        let mut any = false;
        let mut improved = true;
        while improved {
            improved = false;
            for i in 1..len.saturating_sub(2) {
                for j in (i + 1)..(len - 1) {
                    let (a, b, c, e) = (p[i - 1], p[i], p[j], p[j + 1]);
                    let delta = self.d(a, c) + self.d(b, e) - self.d(a, b) - self.d(c, e);
                    if delta < 0 {
                        p[i..=j].reverse();
                        improved = true;
                        any = true;
                    }
                }
            }
        }
        any
    }

    /// Moves single interior cities to a cheaper position.
    fn node_insertion(&self, p: &mut Vec<usize>) -> bool {
        let mut any = false;
        let mut improved = true;
        while improved {
            improved = false;
            let len = p.len();
            'outer: for i in 1..len - 1 {
                let (prev, x, next) = (p[i - 1], p[i], p[i + 1]);
                let gain = self.d(prev, x) + self.d(x, next) - self.d(prev, next);
                for j in 0..len - 1 {
                    if j == i - 1 || j == i {
                        continue;
                    }
                    let (a, b) = (p[j], p[j + 1]);
                    let cost = self.d(a, x) + self.d(x, b) - self.d(a, b);
                    if cost < gain {
                        p.remove(i);
                        let at = if j < i { j + 1 } else { j };
                        p.insert(at, x);
                        improved = true;
                        any = true;
                        break 'outer;
                    }
                }
            }
        }
        any
    }

    /// Swaps adjacent segments `B = p[a+1..=b]` and `C = p[b+1..=c]`, possibly
    /// reversing one of them. Only moves whose first new edge leaves `p[a]`
    /// towards one of its neighbours are scanned.
    fn segment_exchange(&self, p: &mut Vec<usize>) -> bool {
        let mut any = false;
        let mut improved = true;
        let mut pos = vec![usize::MAX; self.inst.n()];
        while improved {
            improved = false;
            let len = p.len();
            for (i, &c) in p.iter().enumerate() {
                pos[c] = i;
            }
            'outer: for a in 0..len.saturating_sub(3) {
                let xa = p[a];
                for &nb in self.neighbors.of(xa) {
                    let s = pos[nb];
                    if s == usize::MAX || s >= len || p[s] != nb || s < a + 2 || s > len - 2 {
                        continue;
                    }
                    // New edge (xa, p[s]) with p[s] the head of C.
                    let b = s - 1;
                    for c in s..(len - 1) {
                        if let Some(mv) = self.best_exchange(p, a, b, c, false) {
                            apply_exchange(p, a, b, c, mv);
                            improved = true;
                            any = true;
                            break 'outer;
                        }
                    }
                    // New edge (xa, p[s]) with p[s] the tail of C, reversed.
                    let c = s;
                    for b in (a + 1)..c {
                        if let Some(mv) = self.best_exchange(p, a, b, c, true) {
                            apply_exchange(p, a, b, c, mv);
                            improved = true;
                            any = true;
                            break 'outer;
                        }
                    }
                }
            }
            for &c in p.iter() {
                pos[c] = usize::MAX;
            }
        }
        any
    }

    fn best_exchange(&self, p: &[usize], a: usize, b: usize, c: usize, c_reversed: bool) -> Option<Exchange> {
        let (xa, xa1, xb, xb1, xc, xc1) = (p[a], p[a + 1], p[b], p[b + 1], p[c], p[c + 1]);
        let removed = self.d(xa, xa1) + self.d(xb, xb1) + self.d(xc, xc1);
        if c_reversed {
            // A C' B D
            let added = self.d(xa, xc) + self.d(xb1, xa1) + self.d(xb, xc1);
            (added < removed).then_some(Exchange::ReverseC)
        } else {
            // A C B D or A C B' D
            let plain = self.d(xa, xb1) + self.d(xc, xa1) + self.d(xb, xc1);
            let rev_b = self.d(xa, xb1) + self.d(xc, xb) + self.d(xa1, xc1);
            if plain < removed && plain <= rev_b {
                Some(Exchange::Plain)
            } else if rev_b < removed {
                Some(Exchange::ReverseB)
            } else {
                None
            }
        }
    }
}

#[derive(Clone, Copy)]
enum Exchange {
    Plain,
    ReverseB,
    ReverseC,
}

fn apply_exchange(p: &mut [usize], a: usize, b: usize, c: usize, mv: Exchange) {
    let seg_b: Vec<usize> = p[a + 1..=b].to_vec();
    let seg_c: Vec<usize> = p[b + 1..=c].to_vec();
    let mut at = a + 1;
    let mut put = |v: usize| {
        p[at] = v;
        at += 1;
    };
    match mv {
        Exchange::Plain => {
            seg_c.iter().for_each(|&v| put(v));
            seg_b.iter().for_each(|&v| put(v));
        }
        Exchange::ReverseB => {
            seg_c.iter().for_each(|&v| put(v));
            seg_b.iter().rev().for_each(|&v| put(v));
        }
        Exchange::ReverseC => {
            seg_c.iter().rev().for_each(|&v| put(v));
            seg_b.iter().for_each(|&v| put(v));
        }
    }
}
