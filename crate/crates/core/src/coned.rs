//! The coned-off graph `Γ(G, X ⊔ H)` over a Cayley ball and the relative
//! metric `d̂` on `H`.
//!
//! Vertices are the ball's vertices. Two vertices are joined by a cone edge
//! when they lie in the same left coset of `H`; cone edges between two
//! elements of `H` itself form `Γ_H` and are excluded from admissible paths.
//! Cosets are computed once as vertex classes, so a breadth-first search
//! expands a whole class the first time one of its members is reached.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write;

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::cayley::{CayleyBall, Metric};
use crate::error::{Error, Result};
use crate::fpgroup::{AmalgamSplitting, Budget, Factor, NfState, NormalFormTrie, Presentation};
use crate::freesub::SubgroupAutomaton;
use crate::words::{Letter, Word, WordKey};

const NONE: u32 = u32::MAX;

/// `H` given by generating words, and the extra letters `X`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubgroupSpec {
    pub generators: Vec<Word>,
    pub extra: Vec<usize>,
}

impl SubgroupSpec {
    pub fn new(generators: Vec<Word>, extra: Vec<usize>) -> SubgroupSpec {
        SubgroupSpec { generators, extra }
    }

    /// `H` generated by the listed generators themselves.
    pub fn free_factor(gens: &[usize], extra: &[usize]) -> SubgroupSpec {
        SubgroupSpec {
            generators: gens.iter().map(|&g| Word::letter(Letter::gen(g))).collect(),
            extra: extra.to_vec(),
        }
    }

    /// `H = <a_1, a_2>` and `X = {a_3, ..., a_g}`.
    pub fn surface(genus: usize) -> SubgroupSpec {
        SubgroupSpec::free_factor(&[0, 1], &(2..genus).collect::<Vec<_>>())
    }

    /// Generator indices occurring in `H`'s generators.
    pub fn letters(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self
            .generators
            .iter()
            .flat_map(|w| w.letters().iter().map(|l| l.generator()))
            .collect();
        set.into_iter().collect()
    }

    /// `X` and inverses, in letter order.
    pub fn x_letters(&self) -> Vec<Letter> {
        let mut out: Vec<Letter> = self
            .extra
            .iter()
            .flat_map(|&g| [Letter::gen(g), Letter::gen(g).inverse()])
            .collect();
        out.sort();
        out.dedup();
        out
    }

    fn is_letter_basis(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.generators
            .iter()
            .all(|w| w.len() == 1 && !w.letters()[0].is_inverse() && seen.insert(w.letters()[0].generator()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    /// `H` is the whole group.
    Whole,
    /// `H` is a free factor of the amalgam.
    Factor,
    /// `H` is a finitely generated subgroup of a factor, via its Stallings
    /// graph.
    Automaton,
    /// Positive-only identification by multiplying generators inside the
    /// ball; uncertified.
    Search,
}

/// Left coset key of a word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CosetKey {
    Whole,
    Factor(Word),
    Automaton(Word, usize, Word),
}

/// Exact membership and coset identification for arbitrary words, when `H`
/// sits inside a factor of an amalgam splitting.
#[derive(Clone, Debug)]
pub struct CosetOracle {
    backend: Backend,
    splitting: Option<AmalgamSplitting>,
    automaton: Option<SubgroupAutomaton>,
    presentation: Presentation,
    spec: SubgroupSpec,
}

impl CosetOracle {
    pub fn new(p: &Presentation, spec: &SubgroupSpec) -> Result<CosetOracle> {
        for g in &spec.generators {
            p.check_word(g)?;
        }
        if let Some(&x) = spec.extra.iter().find(|&&x| x >= p.rank()) {
            return Err(Error::Config(format!("extra generator {x} outside rank {}", p.rank())));
        }
        let letters = spec.letters();
        let mut backend = Backend::Search;
        let mut splitting = None;
        let mut automaton = None;
        if spec.is_letter_basis() && letters.len() == p.rank() {
            backend = Backend::Whole;
        } else if let Some(s) = AmalgamSplitting::detect(p, &letters) {
            if spec.is_letter_basis() {
                backend = Backend::Factor;
            } else {
                automaton = Some(SubgroupAutomaton::fold(&spec.generators, p.rank())?);
                backend = Backend::Automaton;
            }
            splitting = Some(s);
        }
        Ok(CosetOracle {
            backend,
            splitting,
            automaton,
            presentation: p.clone(),
            spec: spec.clone(),
        })
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn is_exact(&self) -> bool {
        self.backend != Backend::Search
    }

    pub fn splitting(&self) -> Option<&AmalgamSplitting> {
        self.splitting.as_ref()
    }

    pub fn automaton(&self) -> Option<&SubgroupAutomaton> {
        self.automaton.as_ref()
    }

    pub fn coset_key(&self, w: &Word) -> Option<CosetKey> {
        match self.backend {
            Backend::Whole => Some(CosetKey::Whole),
            Backend::Factor => {
                let (p, _) = self.splitting.as_ref()?.factor_coset(w, Factor::Left);
                Some(CosetKey::Factor(p))
            }
            Backend::Automaton => {
                let (p, y) = self.splitting.as_ref()?.factor_coset(w, Factor::Left);
                let (q, rest) = self.automaton.as_ref()?.right_coset_key(&y.invert());
                Some(CosetKey::Automaton(p, q, rest))
            }
            Backend::Search => None,
        }
    }

    /// `Some(true)` iff `w ∈ H`; the search backend only answers when it
    /// finds `w` among short products of generators.
    pub fn contains(&self, w: &Word) -> Option<bool> {
        if self.is_exact() {
            return Some(self.coset_key(w)? == self.coset_key(&Word::identity())?);
        }
        let budget = Budget::default();
        let mut frontier = vec![Word::identity()];
        let gens: Vec<Word> = self
            .spec
            .generators
            .iter()
            .flat_map(|g| [g.clone(), g.invert()])
            .collect();
        for _ in 0..4 {
            for f in &frontier {
                if self.presentation.equality_oracle(f, w, &budget).ok()?.is_equal() {
                    return Some(true);
                }
            }
            frontier = frontier
                .iter()
                .flat_map(|f| gens.iter().map(move |g| f.concat(g)))
                .collect();
        }
        None
    }

    pub fn same_coset(&self, u: &Word, v: &Word) -> Option<bool> {
        if self.is_exact() {
            Some(self.coset_key(u)? == self.coset_key(v)?)
        } else {
            self.contains(&u.invert().concat(v))
        }
    }

    /// Checks that consecutive words differ by a letter of `X` or by a
    /// nontrivial element of `H`, never joining two elements of `H` through
    /// `H`. Returns the path length.
    pub fn admissible_path_length(&self, path: &[Word]) -> Result<Option<usize>> {
        let x = self.spec.x_letters();
        for pair in path.windows(2) {
            let step = pair[0].invert().concat(&pair[1]);
            if step.len() == 1 && x.contains(&step.letters()[0]) {
                continue;
            }
            if step.is_identity() {
                return Ok(None);
            }
            let inside = |w: &Word| {
                self.contains(w)
                    .ok_or_else(|| Error::Config(format!("membership of {w} undecided")))
            };
            if !inside(&step)? || (inside(&pair[0])? && inside(&pair[1])?) {
                return Ok(None);
            }
        }
        Ok(Some(path.len().saturating_sub(1)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    X,
    Cone,
    GammaH,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum DhatValue {
    Finite(usize),
    /// No admissible path inside the examined ball.
    InfiniteWithinBall,
    Unknown,
}

impl DhatValue {
    pub fn finite(self) -> Option<usize> {
        match self {
            DhatValue::Finite(d) => Some(d),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DhatBall {
    pub radius: usize,
    pub horizon: usize,
    /// Elements with their relative distance, shortlex by element.
    pub elements: Vec<(Word, usize)>,
    /// The answer changed, or gained elements beyond the horizon, when the
    /// ball was enlarged to its full radius.
    pub truncated: bool,
    pub certified: bool,
}

impl DhatBall {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.elements.iter().any(|(e, _)| e == w)
    }
}

pub struct ConedGraph<'a> {
    ball: &'a CayleyBall,
    spec: SubgroupSpec,
    oracle: CosetOracle,
    x_letters: Vec<Letter>,
    class: Vec<u32>,
    offsets: Vec<u32>,
    members: Vec<u32>,
    h_class: u32,
    horizon: usize,
    certified: bool,
}

impl<'a> ConedGraph<'a> {
    pub fn build(ball: &'a CayleyBall, spec: &SubgroupSpec) -> Result<ConedGraph<'a>> {
        let oracle = CosetOracle::new(ball.presentation(), spec)?;
        let class = match oracle.backend() {
            Backend::Whole => vec![0; ball.len()],
            Backend::Factor | Backend::Automaton => exact_classes(ball, &oracle),
            Backend::Search => search_classes(ball, spec),
        };
        let n_classes = class.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
        let mut offsets = vec![0u32; n_classes + 1];
        for &c in &class {
            offsets[c as usize + 1] += 1;
        }
        for i in 0..n_classes {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut members = vec![0u32; class.len()];
        for (v, &c) in class.iter().enumerate() {
            members[fill[c as usize] as usize] = v as u32;
            fill[c as usize] += 1;
        }
        let certified = ball.is_certified() && oracle.is_exact();
        Ok(ConedGraph {
            ball,
            spec: spec.clone(),
            x_letters: spec.x_letters(),
            h_class: class[0],
            class,
            offsets,
            members,
            horizon: ball.radius(),
            oracle,
            certified,
        })
    }

    /// Restricts every search to vertices of word length at most `horizon`.
    pub fn with_horizon(mut self, horizon: usize) -> ConedGraph<'a> {
        self.horizon = horizon.min(self.ball.radius());
        self
    }

    pub fn set_horizon(&mut self, horizon: usize) {
        self.horizon = horizon.min(self.ball.radius());
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn ball(&self) -> &CayleyBall {
        self.ball
    }

    pub fn spec(&self) -> &SubgroupSpec {
        &self.spec
    }

    pub fn oracle(&self) -> &CosetOracle {
        &self.oracle
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }

    pub fn class_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn class_of(&self, v: usize) -> usize {
        self.class[v] as usize
    }

    pub fn in_h(&self, v: usize) -> bool {
        self.class[v] == self.h_class
    }

    /// Members of class `c` within the horizon, by vertex id.
    pub fn class_members(&self, c: usize) -> impl Iterator<Item = usize> + '_ {
        self.members_within(c, self.horizon)
    }

    fn members_within(&self, c: usize, horizon: usize) -> impl Iterator<Item = usize> + '_ {
        let (a, b) = (self.offsets[c] as usize, self.offsets[c + 1] as usize);
        self.members[a..b]
            .iter()
            .map(|&u| u as usize)
            .take_while(move |&u| self.ball.depth(u) <= horizon)
    }

    /// Elements of `H` inside the horizon.
    pub fn h_vertices(&self) -> Vec<usize> {
        self.class_members(self.h_class as usize).collect()
    }

    fn visible(&self, v: usize) -> bool {
        self.ball.depth(v) <= self.horizon
    }

    pub fn edge_kind(&self, u: usize, v: usize) -> Option<EdgeKind> {
        if u == v {
            return None;
        }
        if self.x_letters.iter().any(|&x| self.ball.neighbor(u, x) == Some(v)) {
            return Some(EdgeKind::X);
        }
        if self.class[u] != self.class[v] {
            return None;
        }
        Some(if self.in_h(u) { EdgeKind::GammaH } else { EdgeKind::Cone })
    }

    fn bfs(&self, src: usize, admissible: bool) -> Vec<u32> {
        self.bfs_within(src, admissible, self.horizon)
    }

    fn bfs_within(&self, src: usize, admissible: bool, horizon: usize) -> Vec<u32> {
        let visible = |v: usize| self.ball.depth(v) <= horizon;
        let mut dist = vec![NONE; self.ball.len()];
        let mut expanded = vec![false; self.class_count()];
        if !visible(src) {
            return dist;
        }
        dist[src] = 0;
        let mut q = VecDeque::from([src]);
        while let Some(v) = q.pop_front() {
            let d = dist[v] + 1;
            for &x in &self.x_letters {
                if let Some(u) = self.ball.neighbor(v, x) {
                    if dist[u] == NONE && visible(u) {
                        dist[u] = d;
                        q.push_back(u);
                    }
                }
            }
            let c = self.class[v] as usize;
            if expanded[c] || (admissible && self.class[v] == self.h_class) {
                continue;
            }
            expanded[c] = true;
            for u in self.members_within(c, horizon) {
                if dist[u] == NONE {
                    dist[u] = d;
                    q.push_back(u);
                }
            }
        }
        dist
    }

    /// Lengths of shortest admissible paths from `src`.
    pub fn admissible_distances(&self, src: usize) -> Vec<Option<usize>> {
        to_options(self.bfs(src, true))
    }

    /// Distances in the coned graph itself, `Γ_H` edges included.
    pub fn sigma_distances(&self, src: usize) -> Vec<Option<usize>> {
        to_options(self.bfs(src, false))
    }

    fn resolve_in_h(&self, h: &Word) -> Result<usize> {
        let v = self.ball.resolve(h)?;
        if !self.visible(v) {
            return Err(Error::NotInBall(h.clone()));
        }
        if !self.in_h(v) {
            return Err(Error::NotInSubgroup(h.clone()));
        }
        Ok(v)
    }

    pub fn dhat(&self, h: &Word) -> Result<DhatValue> {
        let v = self.resolve_in_h(h)?;
        Ok(match self.bfs(0, true)[v] {
            NONE if self.certified => DhatValue::InfiniteWithinBall,
            NONE => DhatValue::Unknown,
            d => DhatValue::Finite(d as usize),
        })
    }

    fn dhat_ball_at(&self, r: usize, horizon: usize) -> Vec<(usize, usize)> {
        let d = self.bfs_within(0, true, horizon);
        self.members_within(self.h_class as usize, horizon)
            .filter(|&v| d[v] != NONE && d[v] as usize <= r)
            .map(|v| (v, d[v] as usize))
            .collect()
    }

    /// `B_d̂(e, r)` inside the horizon.
    pub fn dhat_ball(&self, r: usize) -> DhatBall {
        self.dhat_ball_within(r, self.horizon)
    }

    /// `B_d̂(e, r)` counting only vertices of length at most `horizon`. The
    /// answer is compared with the one over the whole ball; with no room to
    /// compare it is marked truncated.
    pub fn dhat_ball_within(&self, r: usize, horizon: usize) -> DhatBall {
        let horizon = horizon.min(self.ball.radius());
        let inner = self.dhat_ball_at(r, horizon);
        let truncated = horizon == self.ball.radius() || self.dhat_ball_at(r, self.ball.radius()) != inner;
        let mut elements: Vec<(Word, usize)> = inner.into_iter().map(|(v, d)| (self.ball.rep(v), d)).collect();
        elements.sort();
        DhatBall {
            radius: r,
            horizon,
            elements,
            truncated,
            certified: self.certified,
        }
    }

    /// Every shortest admissible path from `e` to `h`, deterministic order,
    /// at most `limit` of them.
    pub fn admissible_geodesics(&self, h: &Word, limit: usize) -> Result<Vec<Vec<usize>>> {
        let target = self.resolve_in_h(h)?;
        let from_e = self.bfs(0, true);
        let to_h = self.bfs(target, true);
        if from_e[target] == NONE {
            return Ok(Vec::new());
        }
        let total = from_e[target];
        let mut out = Vec::new();
        let mut path = vec![0usize];
        self.geodesics_rec(&from_e, &to_h, total, &mut path, &mut out, limit);
        Ok(out)
    }

    fn admissible_steps(&self, v: usize) -> BTreeSet<usize> {
        let mut next = BTreeSet::new();
        for &x in &self.x_letters {
            if let Some(u) = self.ball.neighbor(v, x) {
                if self.visible(u) {
                    next.insert(u);
                }
            }
        }
        if !self.in_h(v) {
            next.extend(self.class_members(self.class_of(v)).filter(|&u| u != v));
        }
        next
    }

    fn geodesics_rec(
        &self,
        from_e: &[u32],
        to_h: &[u32],
        total: u32,
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        let v = *path.last().unwrap();
        if to_h[v] == 0 {
            out.push(path.clone());
            return;
        }
        for u in self.admissible_steps(v) {
            if from_e[u] == from_e[v] + 1 && to_h[u] != NONE && from_e[u] + to_h[u] == total {
                path.push(u);
                self.geodesics_rec(from_e, to_h, total, path, out, limit);
                path.pop();
            }
        }
    }

    /// Admissible length of a vertex path, `None` if some step is not an
    /// admissible edge.
    pub fn admissible_path_length(&self, path: &[usize]) -> Option<usize> {
        for pair in path.windows(2) {
            match self.edge_kind(pair[0], pair[1]) {
                Some(EdgeKind::X) | Some(EdgeKind::Cone) => {}
                _ => return None,
            }
        }
        Some(path.len().saturating_sub(1))
    }

    /// Whether every visible vertex is reachable from `e` using `X` and cone
    /// edges.
    pub fn generates(&self) -> bool {
        self.bfs(0, false)
            .iter()
            .enumerate()
            .all(|(v, &d)| d != NONE || !self.visible(v))
    }

    /// DOT rendering: `X` edges solid, admissible cone edges dashed, `Γ_H`
    /// edges dotted.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph coned {\n");
        let n = self.ball.len();
        for v in (0..n).filter(|&v| self.visible(v)) {
            let rep = self.ball.rep(v);
            let label = if rep.is_identity() {
                "e".to_string()
            } else {
                rep.to_string()
            };
            let shape = if self.in_h(v) { "box" } else { "ellipse" };
            let _ = writeln!(s, "  {v} [label=\"{label}\", shape={shape}];");
        }
        for v in (0..n).filter(|&v| self.visible(v)) {
            for &x in self.x_letters.iter().filter(|x| !x.is_inverse()) {
                if let Some(u) = self.ball.neighbor(v, x).filter(|&u| self.visible(u)) {
                    let _ = writeln!(s, "  {v} -- {u} [label=\"{x}\"];");
                }
            }
            for u in self.class_members(self.class_of(v)).filter(|&u| u > v) {
                let style = if self.in_h(v) { "dotted, color=red" } else { "dashed" };
                let _ = writeln!(s, "  {v} -- {u} [style={style}];");
            }
        }
        s.push_str("}\n");
        s
    }
}

impl Metric for ConedGraph<'_> {
    fn vertex_count(&self) -> usize {
        self.ball.len()
    }

    fn distances(&self, src: usize) -> Vec<Option<usize>> {
        self.sigma_distances(src)
    }
}

fn to_options(d: Vec<u32>) -> Vec<Option<usize>> {
    d.into_iter().map(|x| (x != NONE).then_some(x as usize)).collect()
}

/// Normal-form states of every ball vertex under `oracle`'s splitting,
/// reusing the ball's own when the splittings agree.
fn states_for<'b>(
    ball: &'b CayleyBall,
    s: &AmalgamSplitting,
) -> (
    std::borrow::Cow<'b, [NfState]>,
    Option<NormalFormTrie>,
    Option<&'b NormalFormTrie>,
) {
    if let Some((trie, states)) = ball.normal_forms() {
        if trie.splitting().left_generators() == s.left_generators() {
            return (std::borrow::Cow::Borrowed(states), None, Some(trie));
        }
    }
    let mut trie = NormalFormTrie::new(s.clone());
    let mut states = Vec::with_capacity(ball.len());
    states.push(trie.identity());
    for v in 1..ball.len() {
        let p = ball.parent(v).expect("non-root vertex");
        let next = trie.step(states[p], ball.via(v).expect("non-root vertex"));
        states.push(next);
    }
    (std::borrow::Cow::Owned(states), Some(trie), None)
}

fn exact_classes(ball: &CayleyBall, oracle: &CosetOracle) -> Vec<u32> {
    let s = oracle.splitting().expect("exact backends carry a splitting");
    let (states, owned, borrowed) = states_for(ball, s);
    let trie = owned.as_ref().or(borrowed).expect("one trie is present");
    let mut ids: FxHashMap<(u32, u32, WordKey), u32> = FxHashMap::default();
    let mut class = Vec::with_capacity(ball.len());
    for st in states.iter() {
        let (p, y) = trie.factor_coset(*st, Factor::Left);
        let key = match oracle.automaton() {
            Some(aut) => {
                let (q, rest) = aut.right_coset_key(&y.invert());
                (p, q as u32, WordKey::new(rest.letters()))
            }
            None => (p, 0, WordKey::Packed(0)),
        };
        let next = ids.len() as u32;
        class.push(*ids.entry(key).or_insert(next));
    }
    class
}

/// Joins `v` and `v g` for every generator `g` of `H` whose path stays in
/// the ball. Classes are subsets of true cosets.
fn search_classes(ball: &CayleyBall, spec: &SubgroupSpec) -> Vec<u32> {
    let n = ball.len();
    let mut uf: Vec<u32> = (0..n as u32).collect();
    fn find(uf: &mut [u32], mut x: u32) -> u32 {
        while uf[x as usize] != x {
            uf[x as usize] = uf[uf[x as usize] as usize];
            x = uf[x as usize];
        }
        x
    }
    for v in 0..n {
        for g in &spec.generators {
            if let Some(u) = ball.walk(v, g) {
                let (a, b) = (find(&mut uf, v as u32), find(&mut uf, u as u32));
                if a != b {
                    uf[a.max(b) as usize] = a.min(b);
                }
            }
        }
    }
    let mut ids: FxHashMap<u32, u32> = FxHashMap::default();
    (0..n as u32)
        .map(|v| {
            let r = find(&mut uf, v);
            let next = ids.len() as u32;
            *ids.entry(r).or_insert(next)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::{set_diameter_in, BallOptions};

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn surface_ball(genus: usize, radius: usize) -> CayleyBall {
        let p = Presentation::surface(genus, false).unwrap();
        CayleyBall::build(&p, radius, &Budget::default()).unwrap()
    }

    #[test]
    fn genus_three_commutator() {
        let ball = surface_ball(3, 4);
        let coned = ConedGraph::build(&ball, &SubgroupSpec::surface(3)).unwrap();
        let e = 0;
        let comm = ball.resolve(&w("abAB")).unwrap();
        assert!(coned.in_h(comm));
        assert_eq!(coned.edge_kind(e, comm), Some(EdgeKind::GammaH));
        assert_eq!(coned.dhat(&w("abAB")).unwrap(), DhatValue::Finite(2));
        let paths = coned.admissible_geodesics(&w("abAB"), 100).unwrap();
        let (c, cc) = (ball.resolve(&w("C")).unwrap(), ball.resolve(&w("CC")).unwrap());
        assert!(paths.contains(&vec![e, c, cc]));
        assert_eq!(
            coned.admissible_geodesics(&Word::identity(), 10).unwrap(),
            vec![vec![e]]
        );
        assert!(matches!(coned.dhat(&w("c")), Err(Error::NotInSubgroup(_))));
        assert!(coned.generates());
    }

    #[test]
    fn genus_three_diameter_example() {
        let ball = surface_ball(3, 3);
        let coned = ConedGraph::build(&ball, &SubgroupSpec::surface(3)).unwrap();
        let set: Vec<usize> = ["", "C", "CC"].iter().map(|s| ball.resolve(&w(s)).unwrap()).collect();
        assert_eq!(set_diameter_in(&coned, &set).unwrap(), 1);
    }

    #[test]
    fn genus_four_commutator() {
        let ball = surface_ball(4, 4);
        let coned = ConedGraph::build(&ball, &SubgroupSpec::surface(4)).unwrap();
        assert_eq!(coned.dhat(&w("abAB")).unwrap(), DhatValue::Finite(4));
        let path: Vec<usize> = ["", "D", "DD", "DDC", "DDCC"]
            .iter()
            .map(|s| ball.resolve(&w(s)).unwrap())
            .collect();
        assert_eq!(coned.admissible_path_length(&path), Some(4));
        assert_eq!(
            ball.rep(*path.last().unwrap()),
            ball.rep(ball.resolve(&w("abAB")).unwrap())
        );
    }

    #[test]
    fn free_factor_in_free_group() {
        let p = Presentation::free(4);
        let ball = CayleyBall::build(&p, 3, &Budget::default()).unwrap();
        let coned = ConedGraph::build(&ball, &SubgroupSpec::free_factor(&[0, 1], &[2, 3])).unwrap();
        assert_eq!(coned.oracle().backend(), Backend::Factor);
        let path: Vec<usize> = ["", "a", "ab", "abA"]
            .iter()
            .map(|s| ball.resolve(&w(s)).unwrap())
            .collect();
        assert_eq!(set_diameter_in(&coned, &path).unwrap(), 1);
        assert!(coned.is_certified());
    }

    #[test]
    fn whole_group_is_one_class() {
        let ball = surface_ball(3, 2);
        let coned = ConedGraph::build(&ball, &SubgroupSpec::free_factor(&[0, 1, 2], &[])).unwrap();
        assert_eq!(coned.oracle().backend(), Backend::Whole);
        assert_eq!(coned.class_count(), 1);
    }

    #[test]
    fn counterexample_path() {
        let p = Presentation::new(3, vec![w("aabbcc")]).unwrap();
        let opts = BallOptions {
            split_left: Some(vec![0, 1]),
            ..BallOptions::default()
        };
        let ball = CayleyBall::build_with(&p, 5, &opts).unwrap();
        let spec = SubgroupSpec::new(vec![w("aa"), w("bb")], vec![0, 1, 2]);
        let coned = ConedGraph::build(&ball, &spec).unwrap();
        assert_eq!(coned.oracle().backend(), Backend::Automaton);
        assert_eq!(coned.dhat(&w("aaaa")).unwrap(), DhatValue::Finite(3));
        let paths = coned.admissible_geodesics(&w("aaaa"), 1000).unwrap();
        let shape: Vec<usize> = ["", "a", "aaa", "aaaa"]
            .iter()
            .map(|s| ball.resolve(&w(s)).unwrap())
            .collect();
        assert!(paths.contains(&shape));
        let words: Vec<Word> = ["", "a", "aaa", "aaaa"].iter().map(|s| w(s)).collect();
        assert_eq!(coned.oracle().admissible_path_length(&words).unwrap(), Some(3));
    }

    #[test]
    fn mismatched_ball_splitting_is_recomputed() {
        let p = Presentation::new(3, vec![w("aabbcc")]).unwrap();
        let ball = CayleyBall::build(&p, 4, &Budget::default()).unwrap();
        let spec = SubgroupSpec::new(vec![w("aa"), w("bb")], vec![0, 1, 2]);
        let coned = ConedGraph::build(&ball, &spec).unwrap();
        assert_eq!(coned.dhat(&w("aaaa")).unwrap(), DhatValue::Finite(3));
        assert!(coned.in_h(ball.resolve(&w("CC")).unwrap()));
    }

    #[test]
    fn search_backend_is_uncertified() {
        let p = Presentation::surface(3, false).unwrap();
        let ball = CayleyBall::build(&p, 3, &Budget::default()).unwrap();
        let spec = SubgroupSpec::free_factor(&[0], &[1, 2]);
        let coned = ConedGraph::build(&ball, &spec).unwrap();
        assert_eq!(coned.oracle().backend(), Backend::Search);
        assert!(!coned.is_certified());
        assert!(coned.in_h(ball.resolve(&w("aa")).unwrap()));
    }

    #[test]
    fn dot_styles() {
        let ball = surface_ball(3, 1);
        let coned = ConedGraph::build(&ball, &SubgroupSpec::surface(3)).unwrap();
        let dot = coned.to_dot();
        assert!(dot.contains("dotted"));
        assert!(dot.contains("label=\"c\""));
    }
}
