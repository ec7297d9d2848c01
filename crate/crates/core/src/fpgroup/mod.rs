//! Finitely presented groups and a budgeted word-equality oracle.
//!
//! The oracle has three routes to a verdict:
//!
//! * abelianization: exponent sums modulo the relator lattice differ, so the
//!   words are distinct;
//! * rewriting: a breadth-first search over cyclic words using relator
//!   half-swaps (and, for presentations without a completeness guarantee,
//!   relator insertions) reaches the empty word, so the words are equal;
//! * exhaustion: for presentations whose pieces are at most a sixth of the
//!   shortest relator, every null-homotopic word can be emptied by moves
//!   that never lengthen it. A fully explored, length-bounded search space
//!   without the empty word therefore certifies distinctness.
//!
//! Anything else is [`EqualityVerdict::Unknown`].

pub mod amalgam;
pub mod lattice;
pub mod rewrite;

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::{Letter, Word, MAX_RANK};

pub use amalgam::{AmalgamNormalForm, AmalgamSplitting, Factor, NfState, NormalFormTrie};
pub use lattice::HermiteLattice;
pub use rewrite::{RewriteSystem, SearchOutcome};

/// Largest genus accepted by [`Presentation::surface`].
pub const MAX_GENUS: usize = 16;

#[derive(Clone, Debug, Serialize)]
pub struct Presentation {
    rank: usize,
    relators: Vec<Word>,
    #[serde(skip)]
    symmetrized: Vec<Word>,
    #[serde(skip)]
    abelian: HermiteLattice,
    max_piece: usize,
}

impl PartialEq for Presentation {
    fn eq(&self, other: &Presentation) -> bool {
        self.rank == other.rank && self.relators == other.relators
    }
}

impl Eq for Presentation {}

impl Presentation {
    pub fn free(rank: usize) -> Presentation {
        Presentation::new(rank, Vec::new()).expect("free presentations are always valid")
    }

    /// Builds a presentation, cyclically reducing every relator.
    pub fn new(rank: usize, relators: Vec<Word>) -> Result<Presentation> {
        if rank > MAX_RANK {
            return Err(Error::Config(format!("rank {rank} exceeds {MAX_RANK}")));
        }
        let mut cyc = Vec::with_capacity(relators.len());
        for r in relators {
            if r.min_rank() > rank {
                return Err(Error::LetterOutOfRank { word: r, rank });
            }
            let (core, _) = r.cyclic_reduce();
            if core.is_identity() {
                return Err(Error::EmptyRelator);
            }
            cyc.push(core);
        }
        let symmetrized = symmetrize(&cyc);
        let exps: Vec<Vec<i64>> = cyc.iter().map(|r| r.exponent_vector(rank)).collect();
        let abelian = HermiteLattice::from_generators(rank, &exps);
        let max_piece = max_piece_length(&symmetrized);
        Ok(Presentation {
            rank,
            relators: cyc,
            symmetrized,
            abelian,
            max_piece,
        })
    }

    /// Standard one-relator presentation of the closed surface of the given
    /// genus: `a1 a2 A1 A2 a3^2 ... ag^2` when non-orientable, the product of
    /// `genus` commutators when orientable.
    pub fn surface(genus: usize, orientable: bool) -> Result<Presentation> {
        if genus == 0 || genus > MAX_GENUS {
            return Err(Error::GenusOutOfBounds(genus));
        }
        if orientable {
            if 2 * genus > MAX_RANK {
                return Err(Error::GenusOutOfBounds(genus));
            }
            let mut r = Vec::new();
            for i in 0..genus {
                let (x, y) = (Letter::gen(2 * i), Letter::gen(2 * i + 1));
                r.extend([x, y, x.inverse(), y.inverse()]);
            }
            Presentation::new(2 * genus, vec![Word::reduce(&r)])
        } else {
            let mut r = Vec::new();
            if genus == 1 {
                r.extend([Letter::gen(0), Letter::gen(0)]);
            } else {
                let (x, y) = (Letter::gen(0), Letter::gen(1));
                if genus == 2 {
                    // Klein bottle: a b A b
                    r.extend([x, y, x.inverse(), y]);
                } else {
                    r.extend([x, y, x.inverse(), y.inverse()]);
                    for i in 2..genus {
                        r.extend([Letter::gen(i), Letter::gen(i)]);
                    }
                }
            }
            Presentation::new(genus, vec![Word::reduce(&r)])
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn is_free(&self) -> bool {
        self.relators.is_empty()
    }

    /// All cyclic permutations of every relator and its inverse, deduplicated.
    pub fn symmetrized(&self) -> &[Word] {
        &self.symmetrized
    }

    pub fn abelian_lattice(&self) -> &HermiteLattice {
        &self.abelian
    }

    /// Longest common prefix of two distinct symmetrized relators.
    pub fn max_piece(&self) -> usize {
        self.max_piece
    }

    pub fn min_relator_len(&self) -> usize {
        self.relators.iter().map(Word::len).min().unwrap_or(0)
    }

    pub fn max_relator_len(&self) -> usize {
        self.relators.iter().map(Word::len).max().unwrap_or(0)
    }

    /// Small cancellation C'(1/6): greedy Dehn reduction decides the word
    /// problem.
    pub fn satisfies_c_prime_sixth(&self) -> bool {
        self.is_free() || 6 * self.max_piece < self.min_relator_len()
    }

    /// No relator is a product of fewer than six pieces. Implies that
    /// length-nonincreasing half-swaps empty every null-homotopic word.
    pub fn satisfies_c6(&self) -> bool {
        self.is_free() || 6 * self.max_piece <= self.min_relator_len()
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        if w.min_rank() > self.rank {
            Err(Error::LetterOutOfRank {
                word: w.clone(),
                rank: self.rank,
            })
        } else {
            Ok(())
        }
    }

    pub fn rewrite_system(&self) -> RewriteSystem {
        RewriteSystem::new(self)
    }

    /// Greedy length reduction: replace the leftmost subword that is more
    /// than half of a symmetrized relator by the inverse of the remainder.
    pub fn dehn_reduce(&self, w: &Word) -> Word {
        self.rewrite_system().dehn_reduce(w)
    }

    pub fn abelianized_invariant(&self, w: &Word) -> AbelianClass {
        AbelianClass(self.abelian.reduce(&w.exponent_vector(self.rank)))
    }

    /// Decides `u = v` within `budget`. Equal and Distinct verdicts are
    /// always correct.
    pub fn equality_oracle(&self, u: &Word, v: &Word, budget: &Budget) -> Result<EqualityVerdict> {
        budget.validate()?;
        self.check_word(u)?;
        self.check_word(v)?;
        let w = u.concat(&v.invert());
        if w.is_identity() {
            return Ok(EqualityVerdict::Equal(RewriteTrace {
                steps: vec![Word::identity()],
            }));
        }
        let (iu, iv) = (self.abelianized_invariant(u), self.abelianized_invariant(v));
        if iu != iv {
            return Ok(EqualityVerdict::Distinct(DistinctWitness::Abelianization {
                left: iu,
                right: iv,
            }));
        }
        if self.is_free() {
            return Ok(EqualityVerdict::Distinct(DistinctWitness::FreelyDistinct));
        }
        let rs = self.rewrite_system();
        Ok(match rs.triviality_search(&w, budget) {
            SearchOutcome::Found(steps) => EqualityVerdict::Equal(RewriteTrace { steps }),
            SearchOutcome::Exhausted { states } if self.satisfies_c6() => {
                EqualityVerdict::Distinct(DistinctWitness::ExhaustedHalfSwaps { word: w, states })
            }
            SearchOutcome::Exhausted { states } | SearchOutcome::BudgetSpent { states } => {
                EqualityVerdict::Unknown(BudgetSpent { states })
            }
        })
    }

    /// `true` iff the oracle proves `w = e`.
    pub fn is_trivial(&self, w: &Word, budget: &Budget) -> Result<Option<bool>> {
        Ok(self.equality_oracle(w, &Word::identity(), budget)?.as_bool())
    }

    /// Tries to split the single relator into one block over `left` letters
    /// and one over the rest, giving an amalgamated product of two free
    /// groups (or a free product when there is no relator).
    pub fn amalgam_splitting(&self, left: &[usize]) -> Option<AmalgamSplitting> {
        AmalgamSplitting::detect(self, left)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<rank {} | ", self.rank)?;
        for (i, r) in self.relators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ">")
    }
}

fn symmetrize(relators: &[Word]) -> Vec<Word> {
    let mut out: Vec<Word> = Vec::new();
    for r in relators {
        for base in [r.clone(), r.invert()] {
            for k in 0..base.len() {
                let rot = base.rotate(k);
                if !out.contains(&rot) {
                    out.push(rot);
                }
            }
        }
    }
    out.sort();
    out
}

fn max_piece_length(sym: &[Word]) -> usize {
    let mut best = 0;
    for (i, a) in sym.iter().enumerate() {
        for b in &sym[i + 1..] {
            let lcp = a.letters().iter().zip(b.letters()).take_while(|(x, y)| x == y).count();
            best = best.max(lcp);
        }
    }
    best
}

/// Exponent-sum vector reduced modulo the relator lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AbelianClass(pub Vec<i64>);

impl AbelianClass {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

/// Search limits for the rewriting oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub max_depth: usize,
    pub max_len: usize,
    pub max_states: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_depth: 12,
            max_len: 24,
            max_states: 1_000_000,
        }
    }
}

impl Budget {
    pub fn validate(&self) -> Result<()> {
        if self.max_depth == 0 || self.max_len == 0 || self.max_states == 0 {
            Err(Error::MalformedBudget)
        } else {
            Ok(())
        }
    }

    /// Every limit multiplied by `factor` (rounded, at least 1).
    pub fn scaled(&self, factor: f64) -> Budget {
        let s = |x: usize| ((x as f64 * factor).round() as usize).max(1);
        Budget {
            max_depth: s(self.max_depth),
            max_len: s(self.max_len),
            max_states: s(self.max_states),
        }
    }

    /// The default budget scaled by `GGT_BUDGET_SCALE` when it is set.
    pub fn from_env() -> Result<Budget> {
        match std::env::var("GGT_BUDGET_SCALE") {
            Ok(s) => {
                let f = parse_scale(&s)?;
                Ok(Budget::default().scaled(f))
            }
            Err(_) => Ok(Budget::default()),
        }
    }
}

/// Parses a positive rational `"p/q"` or decimal.
pub fn parse_scale(s: &str) -> Result<f64> {
    let s = s.trim();
    let v = if let Some((p, q)) = s.split_once('/') {
        let p: f64 = p
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad scale {s:?}")))?;
        let q: f64 = q
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad scale {s:?}")))?;
        p / q
    } else {
        s.parse().map_err(|_| Error::Config(format!("bad scale {s:?}")))?
    };
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::Config(format!("scale must be positive, got {s:?}")))
    }
}

/// Sequence of cyclic words from `u v^-1` down to the empty word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RewriteTrace {
    pub steps: Vec<Word>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistinctWitness {
    Abelianization {
        left: AbelianClass,
        right: AbelianClass,
    },
    /// Distinct reduced words in a free group.
    FreelyDistinct,
    /// Every cyclic word reachable from `word` by length-nonincreasing
    /// half-swaps was visited and none was empty.
    ExhaustedHalfSwaps {
        word: Word,
        states: usize,
    },
    /// Both words resolved to different vertices of a certified ball.
    BallSeparation {
        left: usize,
        right: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BudgetSpent {
    pub states: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum EqualityVerdict {
    Equal(RewriteTrace),
    Distinct(DistinctWitness),
    Unknown(BudgetSpent),
}

impl EqualityVerdict {
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            EqualityVerdict::Equal(_) => Some(true),
            EqualityVerdict::Distinct(_) => Some(false),
            EqualityVerdict::Unknown(_) => None,
        }
    }

    pub fn is_equal(&self) -> bool {
        matches!(self, EqualityVerdict::Equal(_))
    }

    pub fn is_distinct(&self) -> bool {
        matches!(self, EqualityVerdict::Distinct(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, EqualityVerdict::Unknown(_))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn surface_presentations() {
        let n3 = Presentation::surface(3, false).unwrap();
        assert_eq!(n3.rank(), 3);
        assert_eq!(n3.relators()[0].to_string(), "abABcc");
        let n4 = Presentation::surface(4, false).unwrap();
        assert_eq!(n4.relators()[0].to_string(), "abABccdd");
        let s2 = Presentation::surface(2, true).unwrap();
        assert_eq!(s2.relators()[0].to_string(), "abABcdCD");
        assert!(Presentation::surface(17, false).is_err());
        assert!(Presentation::surface(0, true).is_err());
        let f2 = Presentation::free(2);
        assert_eq!(f2.rank(), 2);
        assert!(f2.is_free());
    }

    #[test]
    fn symmetrized_closure() {
        let n3 = Presentation::surface(3, false).unwrap();
        let sym = n3.symmetrized();
        assert_eq!(sym.len(), 12);
        for r in sym {
            assert!(sym.contains(&r.invert()));
            assert!(sym.contains(&r.rotate(1)));
        }
        assert_eq!(n3.max_piece(), 1);
        assert!(n3.satisfies_c6());
        assert!(!n3.satisfies_c_prime_sixth());
        let n4 = Presentation::surface(4, false).unwrap();
        assert!(n4.satisfies_c_prime_sixth());
    }

    #[test]
    fn relators_are_validated() {
        assert!(Presentation::new(2, vec![w("aA")]).is_err());
        assert!(Presentation::new(2, vec![w("abc")]).is_err());
        let p = Presentation::new(2, vec![w("baB")]).unwrap();
        assert_eq!(p.relators()[0], w("a"));
    }

    #[test]
    fn dehn_reduce_examples() {
        let n3 = Presentation::surface(3, false).unwrap();
        let r = n3.dehn_reduce(&w("abAB"));
        assert!(r.len() <= 2);
        assert!(n3.equality_oracle(&r, &w("CC"), &Budget::default()).unwrap().is_equal());
        assert!(n3.dehn_reduce(&Word::identity()).is_identity());
        assert!(n3.dehn_reduce(&w("abABcc")).is_identity());
    }

    #[test]
    fn abelian_invariant_examples() {
        let n3 = Presentation::surface(3, false).unwrap();
        assert!(n3.abelianized_invariant(&w("abAB")).is_zero());
        assert!(n3.abelianized_invariant(&w("cc")).is_zero());
        assert_eq!(n3.abelianized_invariant(&w("c")).0, vec![0, 0, 1]);
    }

    #[test]
    fn oracle_examples() {
        let n3 = Presentation::surface(3, false).unwrap();
        let b = Budget::default();
        assert!(n3.equality_oracle(&w("abAB"), &w("CC"), &b).unwrap().is_equal());
        assert!(matches!(
            n3.equality_oracle(&w("c"), &Word::identity(), &b).unwrap(),
            EqualityVerdict::Distinct(DistinctWitness::Abelianization { .. })
        ));
        let f2 = Presentation::free(2);
        assert!(f2.equality_oracle(&w("ab"), &w("ba"), &b).unwrap().is_distinct());
        // Same abelianization, separated by exhaustion.
        assert!(matches!(
            n3.equality_oracle(&w("ab"), &w("ba"), &b).unwrap(),
            EqualityVerdict::Distinct(DistinctWitness::ExhaustedHalfSwaps { .. })
        ));
    }

    #[test]
    fn malformed_budget_is_rejected() {
        let n3 = Presentation::surface(3, false).unwrap();
        let bad = Budget {
            max_depth: 0,
            ..Budget::default()
        };
        assert!(matches!(
            n3.equality_oracle(&w("a"), &w("a"), &bad),
            Err(Error::MalformedBudget)
        ));
    }

    #[test]
    fn budget_scale_parsing() {
        assert_eq!(parse_scale("3/2").unwrap(), 1.5);
        assert_eq!(parse_scale("2").unwrap(), 2.0);
        assert!(parse_scale("-1").is_err());
        assert!(parse_scale("0").is_err());
        assert_eq!(Budget::default().scaled(0.5).max_depth, 6);
    }
}
