//! Bounded Cayley balls.
//!
//! A ball is grown breadth-first from the identity, processing each sphere in
//! shortlex order of representatives and each vertex's letters in letter
//! order, so the first word to reach a vertex is its shortlex-least geodesic.
//! New words are identified with existing vertices either by an exact
//! amalgam normal form or, for presentations without one, by the rewriting
//! oracle.

mod export;

use std::collections::VecDeque;

use rustc_hash::FxHashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fpgroup::{AbelianClass, AmalgamSplitting, Budget, NfState, NormalFormTrie, Presentation};
use crate::words::{Letter, Word};

pub use export::BallExport;

/// Largest radius accepted unless a caller raises it.
pub const DEFAULT_RADIUS_CAP: usize = 8;

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Identification by amalgam normal form.
    NormalForm,
    /// Identification by the budgeted equality oracle.
    Oracle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certification {
    pub certified: bool,
    pub strategy: Strategy,
    /// Identifications confirmed by the other strategy.
    pub cross_checked: usize,
    pub disagreements: usize,
    pub unknown: usize,
}

#[derive(Clone, Debug)]
pub struct BallOptions {
    pub radius_cap: usize,
    pub budget: Budget,
    /// Confirm every nontrivial identification with the rewriting oracle.
    pub cross_check: bool,
    /// Use the oracle even when a normal form is available.
    pub force_oracle: bool,
    /// Generators of the first factor when several splittings exist.
    pub split_left: Option<Vec<usize>>,
}

impl Default for BallOptions {
    fn default() -> Self {
        BallOptions {
            radius_cap: DEFAULT_RADIUS_CAP,
            budget: Budget::default(),
            cross_check: false,
            force_oracle: false,
            split_left: None,
        }
    }
}

#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
enum Identifier {
    Exact {
        trie: NormalFormTrie,
        states: Vec<NfState>,
        keys: FxHashMap<NfState, u32>,
    },
    Oracle {
        keys: FxHashMap<Word, u32>,
    },
}

#[derive(Clone, Debug)]
pub struct CayleyBall {
    presentation: Presentation,
    radius: usize,
    parent: Vec<u32>,
    via: Vec<Letter>,
    dist: Vec<u32>,
    adj: Vec<u32>,
    identifier: Identifier,
    certification: Certification,
}

impl CayleyBall {
    pub fn build(p: &Presentation, radius: usize, budget: &Budget) -> Result<CayleyBall> {
        CayleyBall::build_with(
            p,
            radius,
            &BallOptions {
                budget: *budget,
                ..BallOptions::default()
            },
        )
    }

    pub fn build_with(p: &Presentation, radius: usize, opts: &BallOptions) -> Result<CayleyBall> {
        if radius > opts.radius_cap {
            return Err(Error::RadiusAboveCap {
                radius,
                cap: opts.radius_cap,
            });
        }
        opts.budget.validate()?;
        let splitting = match &opts.split_left {
            Some(left) => AmalgamSplitting::detect(p, left).or_else(|| AmalgamSplitting::find(p)),
            None => AmalgamSplitting::find(p),
        };
        let (identifier, strategy) = match splitting {
            Some(s) if !opts.force_oracle => {
                let trie = NormalFormTrie::new(s);
                let e = trie.identity();
                (
                    Identifier::Exact {
                        trie,
                        states: vec![e],
                        keys: FxHashMap::from_iter([(e, 0)]),
                    },
                    Strategy::NormalForm,
                )
            }
            _ => (
                Identifier::Oracle {
                    keys: FxHashMap::from_iter([(Word::identity(), 0)]),
                },
                Strategy::Oracle,
            ),
        };
        let mut ball = CayleyBall {
            presentation: p.clone(),
            radius,
            parent: vec![NONE],
            via: vec![Letter::gen(0)],
            dist: vec![0],
            adj: vec![NONE; 2 * p.rank()],
            identifier,
            certification: Certification {
                certified: true,
                strategy,
                cross_checked: 0,
                disagreements: 0,
                unknown: 0,
            },
        };
        match ball.identifier {
            Identifier::Exact { .. } => ball.grow_exact(opts),
            Identifier::Oracle { .. } => ball.grow_oracle(opts),
        }
        ball.certification.certified = ball.certification.unknown == 0 && ball.certification.disagreements == 0;
        Ok(ball)
    }

    fn degree(&self) -> usize {
        2 * self.presentation.rank()
    }

    fn link(&mut self, v: usize, l: Letter, u: usize) {
        let d = self.degree();
        self.adj[v * d + l.code()] = u as u32;
        self.adj[u * d + l.inverse().code()] = v as u32;
    }

    fn push_vertex(&mut self, parent: usize, l: Letter) -> usize {
        let id = self.parent.len();
        self.parent.push(parent as u32);
        self.via.push(l);
        self.dist.push(self.dist[parent] + 1);
        self.adj.extend(std::iter::repeat_n(NONE, self.degree()));
        id
    }

    fn confirm(&mut self, v: usize, l: Letter, u: usize, budget: &Budget) {
        let w = self.rep(v).mul_letter(l);
        let rep = self.rep(u);
        if w == rep {
            return;
        }
        match self.presentation.equality_oracle(&w, &rep, budget) {
            Ok(x) if x.is_equal() => self.certification.cross_checked += 1,
            Ok(x) if x.is_distinct() => self.certification.disagreements += 1,
            _ => self.certification.unknown += 1,
        }
    }

    fn grow_exact(&mut self, opts: &BallOptions) {
        let rank = self.presentation.rank();
        let deg = self.degree();
        let Identifier::Exact {
            mut trie,
            mut states,
            mut keys,
        } = std::mem::replace(
            &mut self.identifier,
            Identifier::Oracle {
                keys: FxHashMap::default(),
            },
        )
        else {
            unreachable!()
        };
        let mut v = 0;
        while v < self.parent.len() {
            let outer = self.dist[v] as usize >= self.radius;
            for l in Letter::alphabet(rank) {
                if self.adj[v * deg + l.code()] != NONE {
                    continue;
                }
                let next = if outer {
                    match trie.peek(states[v], l) {
                        Some(s) => s,
                        None => continue,
                    }
                } else {
                    trie.step(states[v], l)
                };
                let u = match keys.get(&next) {
                    Some(&u) => {
                        let u = u as usize;
                        if opts.cross_check {
                            self.confirm(v, l, u, &opts.budget);
                        }
                        u
                    }
                    None if outer => continue,
                    None => {
                        let u = self.push_vertex(v, l);
                        keys.insert(next, u as u32);
                        states.push(next);
                        u
                    }
                };
                self.link(v, l, u);
            }
            v += 1;
        }
        self.identifier = Identifier::Exact { trie, states, keys };
    }

    fn grow_oracle(&mut self, opts: &BallOptions) {
        let p = self.presentation.clone();
        let rank = p.rank();
        let mut reps = vec![Word::identity()];
        let mut classes: Vec<AbelianClass> = vec![p.abelianized_invariant(&Word::identity())];
        let mut v = 0;
        while v < reps.len() {
            let dv = self.dist[v];
            let outer = dv as usize >= self.radius;
            for l in Letter::alphabet(rank) {
                if self.adj[v * self.degree() + l.code()] != NONE {
                    continue;
                }
                let w = reps[v].mul_letter(l);
                let class = p.abelianized_invariant(&w);
                let mut found = None;
                for u in 0..reps.len() {
                    if self.dist[u] + 1 < dv || classes[u] != class {
                        continue;
                    }
                    match p.equality_oracle(&w, &reps[u], &opts.budget) {
                        Ok(x) if x.is_equal() => {
                            found = Some(u);
                            break;
                        }
                        Ok(x) if x.is_distinct() => {}
                        _ => self.certification.unknown += 1,
                    }
                }
                let u = match found {
                    Some(u) => u,
                    None if outer => continue,
                    None => {
                        classes.push(class);
                        reps.push(w);
                        self.push_vertex(v, l)
                    }
                };
                self.link(v, l, u);
            }
            v += 1;
        }
        let keys = reps.into_iter().enumerate().map(|(i, r)| (r, i as u32)).collect();
        self.identifier = Identifier::Oracle { keys };
    }

    /// The normal-form trie and per-vertex states, when identification was
    /// exact.
    pub fn normal_forms(&self) -> Option<(&NormalFormTrie, &[NfState])> {
        match &self.identifier {
            Identifier::Exact { trie, states, .. } => Some((trie, states)),
            Identifier::Oracle { .. } => None,
        }
    }

    /// Vertex with the given normal form.
    pub fn vertex_of_state(&self, s: NfState) -> Option<usize> {
        match &self.identifier {
            Identifier::Exact { keys, .. } => keys.get(&s).map(|&u| u as usize),
            Identifier::Oracle { .. } => None,
        }
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn certification(&self) -> &Certification {
        &self.certification
    }

    pub fn is_certified(&self) -> bool {
        self.certification.certified
    }

    /// Shortlex-least geodesic word for vertex `v`.
    pub fn rep(&self, v: usize) -> Word {
        let mut letters = Vec::with_capacity(self.depth(v));
        let mut x = v;
        while x != 0 {
            letters.push(self.via[x]);
            x = self.parent[x] as usize;
        }
        letters.reverse();
        Word::from_reduced(letters)
    }

    pub fn reps(&self) -> Vec<Word> {
        (0..self.len()).map(|v| self.rep(v)).collect()
    }

    /// Breadth-first tree parent of `v`.
    pub fn parent(&self, v: usize) -> Option<usize> {
        (v != 0).then(|| self.parent[v] as usize)
    }

    /// Last letter of the representative of `v`.
    pub fn via(&self, v: usize) -> Option<Letter> {
        (v != 0).then(|| self.via[v])
    }

    /// Word length of vertex `v`.
    pub fn depth(&self, v: usize) -> usize {
        self.dist[v] as usize
    }

    pub fn neighbor(&self, v: usize, l: Letter) -> Option<usize> {
        let u = self.adj[v * self.degree() + l.code()];
        (u != NONE).then_some(u as usize)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (Letter, usize)> + '_ {
        Letter::alphabet(self.presentation.rank()).filter_map(move |l| self.neighbor(v, l).map(|u| (l, u)))
    }

    /// Vertex ids in order of discovery within each sphere.
    pub fn sphere(&self, r: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&v| self.dist[v] as usize == r)
    }

    /// Follows `w` letter by letter from `from`.
    pub fn walk(&self, from: usize, w: &Word) -> Option<usize> {
        let mut v = from;
        for &l in w.letters() {
            v = self.neighbor(v, l)?;
        }
        Some(v)
    }

    /// The vertex representing `w`, if it lies in the ball.
    pub fn lookup(&self, w: &Word) -> Option<usize> {
        if let Some(v) = self.walk(0, w) {
            return Some(v);
        }
        match &self.identifier {
            Identifier::Exact { trie, keys, .. } => {
                let s = trie.locate(&trie.splitting().normal_form(w))?;
                keys.get(&s).map(|&u| u as usize)
            }
            Identifier::Oracle { keys } => keys.get(w).map(|&u| u as usize),
        }
    }

    pub fn resolve(&self, w: &Word) -> Result<usize> {
        self.lookup(w).ok_or_else(|| Error::NotInBall(w.clone()))
    }

    /// Exact equality for words inside the ball.
    pub fn same_element(&self, u: &Word, v: &Word) -> Result<bool> {
        Ok(self.resolve(u)? == self.resolve(v)?)
    }

    /// Breadth-first distances inside the ball graph.
    pub fn distances_from(&self, src: usize) -> Vec<u32> {
        let mut d = vec![NONE; self.len()];
        d[src] = 0;
        let mut q = VecDeque::from([src]);
        while let Some(v) = q.pop_front() {
            for (_, u) in self.neighbors(v) {
                if d[u] == NONE {
                    d[u] = d[v] + 1;
                    q.push_back(u);
                }
            }
        }
        d
    }

    /// Distance in the ball graph. Exact whenever `|u| + |v|` is at most the
    /// radius; otherwise an upper bound.
    pub fn distance(&self, u: &Word, v: &Word) -> Result<usize> {
        let (a, b) = (self.resolve(u)?, self.resolve(v)?);
        if a == 0 {
            return Ok(self.depth(b));
        }
        if b == 0 {
            return Ok(self.depth(a));
        }
        let d = self.distances_from(a)[b];
        if d == NONE {
            Err(Error::NotInBall(v.clone()))
        } else {
            Ok(d as usize)
        }
    }

    /// Every shortest vertex path from `u` to `v`, in letter order.
    pub fn all_geodesics(&self, u: &Word, v: &Word) -> Result<Vec<Vec<usize>>> {
        let (a, b) = (self.resolve(u)?, self.resolve(v)?);
        let from_b = self.distances_from(b);
        if from_b[a] == NONE {
            return Err(Error::NotInBall(v.clone()));
        }
        let mut out = Vec::new();
        let mut path = vec![a];
        self.geodesic_rec(&from_b, &mut path, &mut out);
        Ok(out)
    }

    fn geodesic_rec(&self, to_target: &[u32], path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let v = *path.last().unwrap();
        if to_target[v] == 0 {
            out.push(path.clone());
            return;
        }
        for (_, u) in self.neighbors(v) {
            if to_target[u] + 1 == to_target[v] {
                path.push(u);
                self.geodesic_rec(to_target, path, out);
                path.pop();
            }
        }
    }

    /// Letters labelling a vertex path.
    pub fn path_word(&self, path: &[usize]) -> Word {
        let mut letters = Vec::new();
        for pair in path.windows(2) {
            let l = self
                .neighbors(pair[0])
                .find(|&(_, u)| u == pair[1])
                .map(|(l, _)| l)
                .expect("consecutive path vertices are adjacent");
            letters.push(l);
        }
        Word::reduce(&letters)
    }
}

/// Anything with a breadth-first distance function on vertex ids.
pub trait Metric {
    fn vertex_count(&self) -> usize;
    /// Distances from `src`; `None` for unreachable vertices.
    fn distances(&self, src: usize) -> Vec<Option<usize>>;
}

impl Metric for CayleyBall {
    fn vertex_count(&self) -> usize {
        self.len()
    }

    fn distances(&self, src: usize) -> Vec<Option<usize>> {
        self.distances_from(src)
            .into_iter()
            .map(|d| (d != NONE).then_some(d as usize))
            .collect()
    }
}

/// Largest pairwise distance of `set` measured in `graph`.
pub fn set_diameter_in<M: Metric + ?Sized>(graph: &M, set: &[usize]) -> Result<usize> {
    let n = graph.vertex_count();
    if let Some(&v) = set.iter().find(|&&v| v >= n) {
        return Err(Error::Config(format!("vertex {v} missing from graph")));
    }
    let mut best = 0;
    for (i, &s) in set.iter().enumerate() {
        let d = graph.distances(s);
        for &t in &set[i + 1..] {
            match d[t] {
                Some(x) => best = best.max(x),
                None => return Err(Error::Config(format!("vertex {t} unreachable from {s}"))),
            }
        }
    }
    Ok(best)
}
