//! Exact normal forms for one-relator groups whose relator splits as `U V`
//! with `U` and `V` over disjoint generator sets.
//!
//! Such a group is the amalgamated product `F(L) *_{U = V^-1} F(R)` and every
//! element has a unique left-transversal normal form
//! `t_1 t_2 ... t_k z^n`, where consecutive `t_i` come from alternate factors
//! and each `t_i` is the shortlex-least word of its coset `t_i <z>`. With no
//! relator the amalgamated subgroup is trivial and this is the free product
//! normal form.

use rustc_hash::FxHashMap;
use serde::Serialize;
use smallvec::SmallVec;

use crate::fpgroup::Presentation;
use crate::words::{push_reduced, Letter, Word, WordKey};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Factor {
    Left,
    Right,
}

impl Factor {
    pub fn other(self) -> Factor {
        match self {
            Factor::Left => Factor::Right,
            Factor::Right => Factor::Left,
        }
    }
}

/// The amalgamated generator inside one factor, written `p u p^-1` with `u`
/// cyclically reduced.
#[derive(Clone, Debug)]
struct Edge {
    z: Word,
    z_inv: Word,
    core_len: usize,
    conj_len: usize,
}

type Buf = SmallVec<[Letter; 32]>;

fn push_buf(out: &mut Buf, raw: &[Letter]) {
    for &l in raw {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
}

impl Edge {
    fn new(z: Word) -> Edge {
        let (core, conj) = z.cyclic_reduce();
        Edge {
            z_inv: z.invert(),
            core_len: core.len(),
            conj_len: conj.len(),
            z,
        }
    }

    fn push_power(&self, out: &mut Buf, n: i64) {
        let unit = if n >= 0 { &self.z } else { &self.z_inv };
        for _ in 0..n.unsigned_abs() {
            push_buf(out, unit.letters());
        }
    }

    fn power(&self, n: i64) -> Vec<Letter> {
        let mut out = Buf::new();
        self.push_power(&mut out, n);
        out.to_vec()
    }

    /// `g = t z^n` with `t` shortlex-least in `g <z>`.
    fn split_buf(&self, g: &[Letter]) -> (Buf, i64) {
        let mut best = Buf::from_slice(g);
        if self.core_len == 0 {
            return (best, 0);
        }
        let bound = ((g.len() + 2 * self.conj_len) / self.core_len + 2) as i64;
        let mut best_j = 0;
        for dir in [1i64, -1] {
            let unit = if dir > 0 { &self.z } else { &self.z_inv };
            let mut cur = Buf::from_slice(g);
            for j in 1..=bound {
                push_buf(&mut cur, unit.letters());
                if crate::words::shortlex_cmp(&cur, &best).is_lt() {
                    best.clone_from(&cur);
                    best_j = dir * j;
                }
            }
        }
        (best, -best_j)
    }

    fn split(&self, g: &[Letter]) -> (Vec<Letter>, i64) {
        let (t, n) = self.split_buf(g);
        (t.to_vec(), n)
    }
}

#[derive(Clone, Debug)]
pub struct AmalgamSplitting {
    rank: usize,
    side: Vec<Factor>,
    left: Edge,
    right: Edge,
}

/// `t_1 ... t_k z^power`; `z` is `U` in the left factor and `V^-1` in the
/// right one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AmalgamNormalForm {
    pub syllables: Vec<(Factor, Word)>,
    pub power: i64,
}

impl AmalgamSplitting {
    /// Splits with `left` the generators of the first factor. Requires a free
    /// presentation or a single relator whose cyclic word consists of exactly
    /// one block over `left` and one block over the remaining generators.
    pub fn detect(p: &Presentation, left: &[usize]) -> Option<AmalgamSplitting> {
        let rank = p.rank();
        let mut side = vec![Factor::Right; rank];
        for &g in left {
            if g >= rank {
                return None;
            }
            side[g] = Factor::Left;
        }
        match p.relators() {
            [] => Some(AmalgamSplitting {
                rank,
                side,
                left: Edge::new(Word::identity()),
                right: Edge::new(Word::identity()),
            }),
            [r] => {
                let (u, v) = split_relator(r, &side)?;
                Some(AmalgamSplitting {
                    rank,
                    side,
                    left: Edge::new(u),
                    right: Edge::new(v.invert()),
                })
            }
            _ => None,
        }
    }

    /// Some splitting of `p`, when one exists.
    pub fn find(p: &Presentation) -> Option<AmalgamSplitting> {
        match p.relators() {
            [] => AmalgamSplitting::detect(p, &[]),
            [r] => {
                let n = r.len();
                for i in 0..n {
                    let rot = r.rotate(i);
                    for k in 1..n {
                        let gens: Vec<usize> = rot.letters()[..k].iter().map(|l| l.generator()).collect();
                        if let Some(s) = AmalgamSplitting::detect(p, &gens) {
                            return Some(s);
                        }
                    }
                }
                None
            }
            _ => None,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn factor_of(&self, l: Letter) -> Factor {
        self.side[l.generator()]
    }

    pub fn left_generators(&self) -> Vec<usize> {
        (0..self.rank).filter(|&g| self.side[g] == Factor::Left).collect()
    }

    fn edge(&self, f: Factor) -> &Edge {
        match f {
            Factor::Left => &self.left,
            Factor::Right => &self.right,
        }
    }

    pub fn normal_form(&self, w: &Word) -> AmalgamNormalForm {
        let mut nf = AmalgamNormalForm {
            syllables: Vec::new(),
            power: 0,
        };
        for &l in w.letters() {
            self.push_letter(&mut nf, l);
        }
        nf
    }

    pub fn push_letter(&self, nf: &mut AmalgamNormalForm, l: Letter) {
        let f = self.factor_of(l);
        let edge = self.edge(f);
        let mut x = match nf.syllables.last() {
            Some((g, _)) if *g == f => nf.syllables.pop().unwrap().1.into_letters(),
            _ => Vec::new(),
        };
        push_reduced(&mut x, &edge.power(nf.power));
        push_reduced(&mut x, &[l]);
        let (t, n) = edge.split(&x);
        nf.power = n;
        if !t.is_empty() {
            nf.syllables.push((f, Word::from_reduced(t)));
        }
    }

    /// Reduced word spelling the normal form; equal elements give equal
    /// words and conversely.
    pub fn canonical_word(&self, w: &Word) -> Word {
        self.spell(&self.normal_form(w))
    }

    pub fn spell(&self, nf: &AmalgamNormalForm) -> Word {
        let mut out = Vec::new();
        for (_, t) in &nf.syllables {
            push_reduced(&mut out, t.letters());
        }
        push_reduced(&mut out, &self.left.power(nf.power));
        Word::from_reduced(out)
    }

    pub fn equal(&self, u: &Word, v: &Word) -> bool {
        self.normal_form(u) == self.normal_form(v)
    }

    /// If `w` lies in factor `f`, the reduced word over that factor's
    /// generators representing it.
    pub fn in_factor(&self, w: &Word, f: Factor) -> Option<Word> {
        let nf = self.normal_form(w);
        let tail = self.edge(f).power(nf.power);
        match nf.syllables.as_slice() {
            [] => Some(Word::reduce(&tail)),
            [(g, t)] if *g == f => Some(t.concat(&Word::reduce(&tail))),
            _ => None,
        }
    }

    /// Writes `w = P y` where `y` lies in factor `f` and `P` is empty or ends
    /// in a syllable of the other factor. `P` depends only on the coset
    /// `w F(f)`, so left cosets of a subgroup `K` of the factor are keyed by
    /// `P` together with the coset `y K`.
    pub fn factor_coset(&self, w: &Word, f: Factor) -> (Word, Word) {
        let mut nf = self.normal_form(w);
        let mut y = Vec::new();
        if let Some((g, _)) = nf.syllables.last() {
            if *g == f {
                y = nf.syllables.pop().unwrap().1.into_letters();
            }
        }
        push_reduced(&mut y, &self.edge(f).power(nf.power));
        nf.power = 0;
        (self.spell(&nf), Word::from_reduced(y))
    }
}

/// A vertex of a [`NormalFormTrie`] together with the trailing power of the
/// amalgamated generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NfState {
    pub node: u32,
    pub power: i64,
}

#[derive(Clone, Debug)]
struct TrieNode {
    parent: u32,
    factor: Factor,
    syllable: Box<[Letter]>,
}

/// Interned syllable sequences. A normal form `t_1 ... t_k z^n` is stored as
/// the node for `t_1 ... t_k` plus `n`, so multiplying by a letter only
/// touches the last syllable.
#[derive(Clone, Debug)]
pub struct NormalFormTrie {
    splitting: AmalgamSplitting,
    nodes: Vec<TrieNode>,
    index: FxHashMap<(u32, WordKey), u32>,
}

impl NormalFormTrie {
    pub const ROOT: u32 = 0;

    pub fn new(splitting: AmalgamSplitting) -> NormalFormTrie {
        NormalFormTrie {
            splitting,
            nodes: vec![TrieNode {
                parent: u32::MAX,
                factor: Factor::Left,
                syllable: Box::new([]),
            }],
            index: FxHashMap::default(),
        }
    }

    pub fn splitting(&self) -> &AmalgamSplitting {
        &self.splitting
    }

    pub fn identity(&self) -> NfState {
        NfState {
            node: Self::ROOT,
            power: 0,
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn parent(&self, node: u32) -> Option<u32> {
        (node != Self::ROOT).then(|| self.nodes[node as usize].parent)
    }

    /// Factor and letters of the last syllable of `node`.
    pub fn syllable(&self, node: u32) -> Option<(Factor, &[Letter])> {
        (node != Self::ROOT).then(|| {
            let n = &self.nodes[node as usize];
            (n.factor, &n.syllable[..])
        })
    }

    fn advance(&self, s: NfState, l: Letter) -> (u32, Factor, Buf, i64) {
        let f = self.splitting.factor_of(l);
        let edge = self.splitting.edge(f);
        let mut x = Buf::new();
        let base = match self.syllable(s.node) {
            Some((g, t)) if g == f => {
                x.extend_from_slice(t);
                self.nodes[s.node as usize].parent
            }
            _ => s.node,
        };
        edge.push_power(&mut x, s.power);
        push_buf(&mut x, &[l]);
        let (t, n) = edge.split_buf(&x);
        (base, f, t, n)
    }

    /// Normal form of `s * l`, interning new syllable prefixes.
    pub fn step(&mut self, s: NfState, l: Letter) -> NfState {
        let (base, factor, t, power) = self.advance(s, l);
        if t.is_empty() {
            return NfState { node: base, power };
        }
        let key = (base, WordKey::new(&t));
        let node = match self.index.get(&key) {
            Some(&c) => c,
            None => {
                let id = self.nodes.len() as u32;
                self.nodes.push(TrieNode {
                    parent: base,
                    factor,
                    syllable: t.to_vec().into_boxed_slice(),
                });
                self.index.insert(key, id);
                id
            }
        };
        NfState { node, power }
    }

    /// Normal form of `s * l` when it only uses known prefixes.
    pub fn peek(&self, s: NfState, l: Letter) -> Option<NfState> {
        let (base, _, t, power) = self.advance(s, l);
        let node = if t.is_empty() {
            base
        } else {
            *self.index.get(&(base, WordKey::new(&t)))?
        };
        Some(NfState { node, power })
    }

    pub fn peek_word(&self, w: &Word) -> Option<NfState> {
        let mut s = self.identity();
        for &l in w.letters() {
            s = self.peek(s, l)?;
        }
        Some(s)
    }

    /// State of an already interned normal form.
    pub fn locate(&self, nf: &AmalgamNormalForm) -> Option<NfState> {
        let mut node = Self::ROOT;
        for (_, t) in &nf.syllables {
            node = *self.index.get(&(node, WordKey::new(t.letters())))?;
        }
        Some(NfState { node, power: nf.power })
    }

    /// `s = P y` with `y` in factor `f` and `P` ending outside `f`.
    pub fn factor_coset(&self, s: NfState, f: Factor) -> (u32, Word) {
        let mut y = Vec::new();
        let mut p = s.node;
        if let Some((g, t)) = self.syllable(s.node) {
            if g == f {
                y = t.to_vec();
                p = self.nodes[s.node as usize].parent;
            }
        }
        push_reduced(&mut y, &self.splitting.edge(f).power(s.power));
        (p, Word::from_reduced(y))
    }
}

/// Rotates `r` into `U V` with `U` over left generators, `V` over the rest.
fn split_relator(r: &Word, side: &[Factor]) -> Option<(Word, Word)> {
    let l = r.letters();
    let n = l.len();
    let f = |i: usize| side[l[i % n].generator()];
    let changes: Vec<usize> = (0..n).filter(|&i| f(i) != f(i + n - 1)).collect();
    if changes.len() != 2 {
        return None;
    }
    let start = if f(changes[0]) == Factor::Left {
        changes[0]
    } else {
        changes[1]
    };
    let rot = r.rotate(start);
    let k = rot
        .letters()
        .iter()
        .take_while(|x| side[x.generator()] == Factor::Left)
        .count();
    Some((
        Word::from_reduced(rot.letters()[..k].to_vec()),
        Word::from_reduced(rot.letters()[k..].to_vec()),
    ))
}
