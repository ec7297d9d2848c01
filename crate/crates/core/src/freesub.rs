//! Stallings graphs of finitely generated subgroups of free groups.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::{Letter, Word};

const NONE: u32 = u32::MAX;

/// Folded core graph of a subgroup, basepoint `0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupAutomaton {
    rank: usize,
    generators: Vec<Word>,
    trans: Vec<u32>,
    truncation: Option<usize>,
}

impl SubgroupAutomaton {
    /// Folds the petal graph of `generators` and prunes it to its core,
    /// keeping the basepoint. States are numbered breadth-first from the
    /// basepoint in letter order.
    pub fn fold(generators: &[Word], ambient_rank: usize) -> Result<SubgroupAutomaton> {
        for g in generators {
            if g.min_rank() > ambient_rank {
                return Err(Error::LetterOutOfRank {
                    word: g.clone(),
                    rank: ambient_rank,
                });
            }
        }
        let mut edges: Vec<(usize, Letter, usize)> = Vec::new();
        let mut n = 1;
        for g in generators {
            let l = g.letters();
            if l.is_empty() {
                continue;
            }
            let mut prev = 0;
            for (i, &x) in l.iter().enumerate() {
                let next = if i + 1 == l.len() {
                    0
                } else {
                    n += 1;
                    n - 1
                };
                edges.push((prev, x, next));
                prev = next;
            }
        }
        let mut uf: Vec<usize> = (0..n).collect();
        fn find(uf: &mut [usize], mut x: usize) -> usize {
            while uf[x] != x {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            x
        }
        let deg = 2 * ambient_rank;
        loop {
            let mut table = vec![NONE; n * deg];
            let mut merged = false;
            for &(s, l, t) in &edges {
                for (a, x, b) in [(s, l, t), (t, l.inverse(), s)] {
                    let (a, b) = (find(&mut uf, a), find(&mut uf, b));
                    let slot = &mut table[a * deg + x.code()];
                    if *slot == NONE {
                        *slot = b as u32;
                    } else {
                        let c = find(&mut uf, *slot as usize);
                        if c != b {
                            let (lo, hi) = (c.min(b), c.max(b));
                            uf[hi] = lo;
                            merged = true;
                        }
                    }
                }
            }
            if !merged {
                break;
            }
        }
        let mut trans = vec![NONE; n * deg];
        for &(s, l, t) in &edges {
            let (s, t) = (find(&mut uf, s), find(&mut uf, t));
            trans[s * deg + l.code()] = t as u32;
            trans[t * deg + l.inverse().code()] = s as u32;
        }
        prune(&mut trans, n, deg);
        let trans = renumber(&trans, n, deg);
        Ok(SubgroupAutomaton {
            rank: ambient_rank,
            generators: generators.to_vec(),
            trans,
            truncation: None,
        })
    }

    /// `<a^n b a^-n : |n| <= n_max>` inside `F(a, b)`, the finite truncation
    /// of an infinitely generated subgroup.
    pub fn truncated_f_infinity(n_max: usize) -> SubgroupAutomaton {
        let (a, b) = (Word::letter(Letter::gen(0)), Word::letter(Letter::gen(1)));
        let gens: Vec<Word> = (-(n_max as i64)..=n_max as i64)
            .map(|n| a.pow(n).concat(&b).concat(&a.pow(-n)))
            .collect();
        let mut aut = SubgroupAutomaton::fold(&gens, 2).expect("rank 2 words");
        aut.truncation = Some(n_max);
        aut
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[Word] {
        &self.generators
    }

    pub fn truncation(&self) -> Option<usize> {
        self.truncation
    }

    pub fn state_count(&self) -> usize {
        self.trans.len() / (2 * self.rank).max(1)
    }

    pub fn step(&self, state: usize, l: Letter) -> Option<usize> {
        if l.generator() >= self.rank {
            return None;
        }
        let t = self.trans[state * 2 * self.rank + l.code()];
        (t != NONE).then_some(t as usize)
    }

    pub fn edge_count(&self) -> usize {
        self.trans.iter().filter(|&&t| t != NONE).count() / 2
    }

    /// Rank of the subgroup: edges minus states plus one.
    pub fn subgroup_rank(&self) -> usize {
        self.edge_count() + 1 - self.state_count()
    }

    pub fn contains(&self, w: &Word) -> bool {
        let mut s = 0;
        for &l in w.letters() {
            match self.step(s, l) {
                Some(t) => s = t,
                None => return false,
            }
        }
        s == 0
    }

    /// Right coset `H w` as the state reached by the longest readable prefix
    /// of `w` and the unread suffix; equal keys iff equal cosets.
    pub fn right_coset_key(&self, w: &Word) -> (usize, Word) {
        let mut s = 0;
        for (i, &l) in w.letters().iter().enumerate() {
            match self.step(s, l) {
                Some(t) => s = t,
                None => return (s, Word::from_reduced(w.letters()[i..].to_vec())),
            }
        }
        (s, Word::identity())
    }

    /// Every nontrivial element of the subgroup of length at most `max_len`,
    /// in shortlex order.
    pub fn elements_up_to(&self, max_len: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut buf = Vec::new();
        self.elements_rec(0, max_len, &mut buf, &mut out);
        out.sort();
        out
    }

    fn elements_rec(&self, s: usize, budget: usize, buf: &mut Vec<Letter>, out: &mut Vec<Word>) {
        if s == 0 && !buf.is_empty() {
            out.push(Word::from_reduced(buf.clone()));
        }
        if budget == 0 {
            return;
        }
        for l in Letter::alphabet(self.rank) {
            if buf.last() == Some(&l.inverse()) {
                continue;
            }
            if let Some(t) = self.step(s, l) {
                buf.push(l);
                self.elements_rec(t, budget - 1, buf, out);
                buf.pop();
            }
        }
    }

    /// Nontrivial `w` with `|w| <= length_cap` in `H` and in `x H x^-1`.
    pub fn conjugate_intersection(&self, x: &Word, length_cap: usize) -> Vec<Word> {
        let xi = x.invert();
        self.elements_up_to(length_cap)
            .into_iter()
            .filter(|w| self.contains(&xi.concat(w).concat(x)))
            .collect()
    }

    /// Checks every reduced `x` outside `H` with `1 <= |x| <= radius`, in
    /// shortlex order.
    pub fn malnormality_scan(&self, radius: usize, cap: usize) -> MalnormalityReport {
        let elements = self.elements_up_to(cap);
        let mut violations = Vec::new();
        let mut scanned = 0;
        for x in crate::words::reduced_words_up_to(self.rank, radius) {
            if x.is_identity() || self.contains(&x) {
                continue;
            }
            scanned += 1;
            let xi = x.invert();
            let hits: Vec<&Word> = elements
                .iter()
                .filter(|w| self.contains(&xi.concat(w).concat(&x)))
                .collect();
            if let Some(first) = hits.first() {
                violations.push(Violation {
                    x: x.clone(),
                    witness: (*first).clone(),
                    witnesses: hits.len(),
                });
            }
        }
        MalnormalityReport {
            radius,
            cap,
            scanned,
            truncation: self.truncation,
            violations,
        }
    }
}

fn prune(trans: &mut [u32], n: usize, deg: usize) {
    loop {
        let mut changed = false;
        for v in 1..n {
            let live: Vec<usize> = (0..deg).filter(|&c| trans[v * deg + c] != NONE).collect();
            if live.len() == 1 {
                let c = live[0];
                let u = trans[v * deg + c] as usize;
                trans[v * deg + c] = NONE;
                trans[u * deg + (c ^ 1)] = NONE;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
}

fn renumber(trans: &[u32], n: usize, deg: usize) -> Vec<u32> {
    let mut id = vec![NONE; n];
    let mut order = vec![0usize];
    id[0] = 0;
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        for c in 0..deg {
            let t = trans[v * deg + c];
            if t != NONE && id[t as usize] == NONE {
                id[t as usize] = order.len() as u32;
                order.push(t as usize);
            }
        }
        i += 1;
    }
    let mut out = vec![NONE; order.len() * deg];
    for (new, &old) in order.iter().enumerate() {
        for c in 0..deg {
            let t = trans[old * deg + c];
            if t != NONE {
                out[new * deg + c] = id[t as usize];
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub x: Word,
    /// Shortlex-least nontrivial element of `H ∩ x H x^-1`.
    pub witness: Word,
    pub witnesses: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MalnormalityReport {
    pub radius: usize,
    pub cap: usize,
    pub scanned: usize,
    pub truncation: Option<usize>,
    pub violations: Vec<Violation>,
}

impl MalnormalityReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violation_at(&self, x: &Word) -> Option<&Violation> {
        self.violations.iter().find(|v| &v.x == x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::reduced_words_up_to;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn gens(s: &[&str]) -> Vec<Word> {
        s.iter().map(|x| w(x)).collect()
    }

    #[test]
    fn even_length_subgroup() {
        let aut = SubgroupAutomaton::fold(&gens(&["aa", "ab", "aB"]), 2).unwrap();
        assert_eq!(aut.state_count(), 2);
        assert!(aut.contains(&w("baaB")));
        assert!(!aut.contains(&w("a")));
        for u in reduced_words_up_to(2, 8) {
            assert_eq!(aut.contains(&u), u.len() % 2 == 0, "{u}");
        }
    }

    #[test]
    fn cyclic_subgroup() {
        let aut = SubgroupAutomaton::fold(&gens(&["a"]), 2).unwrap();
        assert_eq!(aut.state_count(), 1);
        assert!(aut.contains(&w("aaaa")));
        assert!(aut.contains(&w("AA")));
        assert!(!aut.contains(&w("ab")));
        assert!(aut.conjugate_intersection(&w("b"), 6).is_empty());
        assert!(aut.malnormality_scan(1, 3).is_clean());
    }

    #[test]
    fn truncated_family() {
        let aut = SubgroupAutomaton::truncated_f_infinity(5);
        assert_eq!(aut.state_count(), 11);
        assert_eq!(aut.subgroup_rank(), 11);
        assert!(aut.contains(&w("aaabAAA")));
        let hits = aut.conjugate_intersection(&w("a"), 9);
        assert!(hits.contains(&w("aabAA")));
    }

    #[test]
    fn empty_generators() {
        let aut = SubgroupAutomaton::fold(&[], 2).unwrap();
        assert_eq!(aut.state_count(), 1);
        assert!(aut.contains(&Word::identity()));
        assert!(!aut.contains(&w("a")));
    }

    #[test]
    fn index_two_violation() {
        let aut = SubgroupAutomaton::fold(&gens(&["aa", "ab", "aB"]), 2).unwrap();
        let hits = aut.conjugate_intersection(&w("b"), 4);
        assert!(hits.contains(&w("aa")));
        let rep = aut.malnormality_scan(2, 4);
        assert!(rep.violation_at(&w("b")).is_some());
        assert_eq!(rep.violation_at(&w("b")).unwrap().witness, w("aa"));
    }

    #[test]
    fn free_factor_is_malnormal() {
        let aut = SubgroupAutomaton::fold(&gens(&["a", "b"]), 4).unwrap();
        assert!(aut.malnormality_scan(3, 6).is_clean());
    }

    #[test]
    fn coset_keys() {
        let aut = SubgroupAutomaton::fold(&gens(&["aa", "bb"]), 2).unwrap();
        assert_eq!(aut.right_coset_key(&w("aab")), aut.right_coset_key(&w("b")));
        assert_ne!(aut.right_coset_key(&w("a")), aut.right_coset_key(&w("b")));
        assert_eq!(aut.right_coset_key(&w("aa")), (0, Word::identity()));
    }

    #[test]
    fn rejects_out_of_rank() {
        assert!(SubgroupAutomaton::fold(&gens(&["c"]), 2).is_err());
    }
}
