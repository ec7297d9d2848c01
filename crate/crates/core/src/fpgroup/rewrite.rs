//! Relator rewriting on linear and cyclic words.

use std::collections::HashMap;

use crate::fpgroup::{Budget, Presentation};
use crate::words::{invert_letters, push_reduced, Letter, Word};

/// Symmetrized relators indexed by first letter.
#[derive(Clone, Debug)]
pub struct RewriteSystem {
    relators: Vec<Vec<Letter>>,
    by_first: Vec<Vec<usize>>,
    insertions: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    /// Canonical cyclic words from the start down to the empty word.
    Found(Vec<Word>),
    /// The whole move graph inside the length bound was explored.
    Exhausted {
        states: usize,
    },
    BudgetSpent {
        states: usize,
    },
}

impl RewriteSystem {
    pub fn new(p: &Presentation) -> RewriteSystem {
        let relators: Vec<Vec<Letter>> = p.symmetrized().iter().map(|r| r.letters().to_vec()).collect();
        let mut by_first = vec![Vec::new(); 2 * p.rank()];
        for (i, r) in relators.iter().enumerate() {
            by_first[r[0].code()].push(i);
        }
        RewriteSystem {
            relators,
            by_first,
            insertions: !p.satisfies_c6(),
        }
    }

    pub fn uses_insertions(&self) -> bool {
        self.insertions
    }

    fn candidates(&self, l: Letter) -> &[usize] {
        self.by_first.get(l.code()).map_or(&[], Vec::as_slice)
    }

    /// Leftmost-first greedy replacement of more than half a relator.
    pub fn dehn_reduce(&self, w: &Word) -> Word {
        let mut cur = w.letters().to_vec();
        'outer: loop {
            for i in 0..cur.len() {
                for &ri in self.candidates(cur[i]) {
                    let r = &self.relators[ri];
                    let m = cur[i..].iter().zip(r).take_while(|(a, b)| a == b).count();
                    if 2 * m > r.len() {
                        let mut next = cur[..i].to_vec();
                        push_reduced(&mut next, &invert_letters(&r[m..]));
                        push_reduced(&mut next, &cur[i + m..]);
                        cur = next;
                        continue 'outer;
                    }
                }
            }
            return Word::from_reduced(cur);
        }
    }

    /// One-step successors of a canonical cyclic word.
    fn successors(&self, w: &[Letter], max_len: usize, out: &mut Vec<Vec<Letter>>) {
        let n = w.len();
        for i in 0..n {
            for &ri in self.candidates(w[i]) {
                let r = &self.relators[ri];
                let limit = n.min(r.len());
                let m = (0..limit).take_while(|&j| w[(i + j) % n] == r[j]).count();
                for k in r.len().div_ceil(2)..=m {
                    let mut raw = invert_letters(&r[k..]);
                    raw.extend((k..n).map(|j| w[(i + j) % n]));
                    out.push(canonical_cyclic(&raw));
                }
            }
        }
        if self.insertions {
            for i in 0..n.max(1) {
                for r in &self.relators {
                    if n + r.len() > max_len {
                        continue;
                    }
                    let mut raw = w[..i].to_vec();
                    raw.extend_from_slice(r);
                    raw.extend_from_slice(&w[i..]);
                    let c = canonical_cyclic(&raw);
                    if c.len() <= max_len {
                        out.push(c);
                    }
                }
            }
        }
    }

    /// Breadth-first search for a rewrite of `w` to the empty cyclic word.
    pub fn triviality_search(&self, w: &Word, budget: &Budget) -> SearchOutcome {
        let start = canonical_cyclic(w.letters());
        if start.is_empty() {
            return SearchOutcome::Found(vec![Word::identity()]);
        }
        if start.len() > budget.max_len {
            return SearchOutcome::BudgetSpent { states: 0 };
        }
        let mut states: Vec<(Vec<Letter>, usize)> = vec![(start.clone(), usize::MAX)];
        let mut index: HashMap<Vec<Letter>, usize> = HashMap::new();
        index.insert(start, 0);
        let mut layer = vec![0usize];
        let mut truncated = false;
        let mut buf = Vec::new();
        for depth in 0..=budget.max_depth {
            if layer.is_empty() {
                break;
            }
            if depth == budget.max_depth {
                truncated = true;
                break;
            }
            let mut next = Vec::new();
            for &s in &layer {
                buf.clear();
                let cur = states[s].0.clone();
                self.successors(&cur, budget.max_len, &mut buf);
                for c in buf.drain(..) {
                    if index.contains_key(&c) {
                        continue;
                    }
                    if states.len() >= budget.max_states {
                        return SearchOutcome::BudgetSpent { states: states.len() };
                    }
                    let id = states.len();
                    let empty = c.is_empty();
                    index.insert(c.clone(), id);
                    states.push((c, s));
                    if empty {
                        return SearchOutcome::Found(trace(&states, id));
                    }
                    next.push(id);
                }
            }
            layer = next;
        }
        if truncated || self.insertions {
            SearchOutcome::BudgetSpent { states: states.len() }
        } else {
            SearchOutcome::Exhausted { states: states.len() }
        }
    }
}

fn trace(states: &[(Vec<Letter>, usize)], mut id: usize) -> Vec<Word> {
    let mut out = Vec::new();
    loop {
        out.push(Word::from_reduced(states[id].0.clone()));
        if states[id].1 == usize::MAX {
            break;
        }
        id = states[id].1;
    }
    out.reverse();
    out
}

/// Free and cyclic reduction followed by the least rotation.
pub fn canonical_cyclic(raw: &[Letter]) -> Vec<Letter> {
    let mut red = Vec::with_capacity(raw.len());
    push_reduced(&mut red, raw);
    let (mut a, mut b) = (0, red.len());
    while b - a >= 2 && red[a] == red[b - 1].inverse() {
        a += 1;
        b -= 1;
    }
    let core = &red[a..b];
    let n = core.len();
    if n == 0 {
        return Vec::new();
    }
    let mut best = 0;
    for k in 1..n {
        let better = (0..n)
            .map(|j| core[(k + j) % n].cmp(&core[(best + j) % n]))
            .find(|o| o.is_ne())
            .is_some_and(|o| o.is_lt());
        if better {
            best = k;
        }
    }
    (0..n).map(|j| core[(best + j) % n]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn letters(s: &str) -> Vec<Letter> {
        w(s).letters().to_vec()
    }

    #[test]
    fn canonical_rotation() {
        assert_eq!(canonical_cyclic(&letters("cab")), letters("abc"));
        assert_eq!(canonical_cyclic(&letters("baB")), letters("a"));
        assert!(canonical_cyclic(&letters("abAB")) == letters("abAB"));
        assert!(canonical_cyclic(&[]).is_empty());
    }

    #[test]
    fn finds_relator_conjugates() {
        let n3 = Presentation::surface(3, false).unwrap();
        let rs = n3.rewrite_system();
        assert!(!rs.uses_insertions());
        let b = Budget::default();
        let conj = w("ba").concat(&w("abABcc")).concat(&w("AB"));
        match rs.triviality_search(&conj, &b) {
            SearchOutcome::Found(t) => assert!(t.last().unwrap().is_identity()),
            o => panic!("{o:?}"),
        }
        let prod = w("abABcc").concat(&w("CCbaBA")).concat(&w("ccabAB"));
        assert!(matches!(rs.triviality_search(&prod, &b), SearchOutcome::Found(_)));
    }

    #[test]
    fn exhausts_nontrivial_words() {
        let n3 = Presentation::surface(3, false).unwrap();
        let rs = n3.rewrite_system();
        let out = rs.triviality_search(&w("abAB"), &Budget::default());
        assert!(matches!(out, SearchOutcome::Exhausted { .. }));
    }

    #[test]
    fn insertions_for_short_relators() {
        let p = Presentation::new(2, vec![w("aa"), w("bb"), w("abab")]).unwrap();
        let rs = p.rewrite_system();
        assert!(rs.uses_insertions());
        let out = rs.triviality_search(&w("baba"), &Budget::default());
        assert!(matches!(out, SearchOutcome::Found(_)));
    }
}
