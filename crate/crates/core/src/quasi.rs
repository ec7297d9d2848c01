//! Brooks quasimorphisms, defect estimates and homogenization, and bounded
//! cochains in the homogeneous and non-homogeneous complexes.
//!
//! All values are exact rationals, so coboundary identities are checked with
//! equality rather than a tolerance.

use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::words::{random_word_up_to, reduced_words_up_to, Letter, Word};

pub type Value = Ratio<i64>;

pub fn int(n: i64) -> Value {
    Value::from_integer(n)
}

pub fn abs(v: Value) -> Value {
    if v < int(0) {
        -v
    } else {
        v
    }
}

pub fn serialize_value<S: Serializer>(v: &Value, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// `count(g, pattern) - count(g, pattern^-1)`, overlapping occurrences.
pub fn brooks_eval(pattern: &Word, g: &Word) -> Result<i64> {
    if pattern.is_identity() {
        return Err(Error::EmptyPattern);
    }
    Ok(g.count_occurrences(pattern) as i64 - g.count_occurrences(&pattern.invert()) as i64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Quasimorphism {
    Brooks {
        pattern: Word,
    },
    /// `g -> f(g^N) / N`.
    Homogenized {
        inner: Box<Quasimorphism>,
        depth: usize,
    },
    Combination {
        terms: Vec<(i64, Quasimorphism)>,
    },
}

impl Quasimorphism {
    pub fn brooks(pattern: Word) -> Result<Quasimorphism> {
        if pattern.is_identity() {
            return Err(Error::EmptyPattern);
        }
        Ok(Quasimorphism::Brooks { pattern })
    }

    pub fn homogenized(self, depth: usize) -> Result<Quasimorphism> {
        if depth == 0 {
            return Err(Error::InvalidArgument("homogenization depth must be positive".into()));
        }
        Ok(Quasimorphism::Homogenized {
            inner: Box::new(self),
            depth,
        })
    }

    pub fn combination(terms: Vec<(i64, Quasimorphism)>) -> Quasimorphism {
        Quasimorphism::Combination { terms }
    }

    pub fn eval(&self, g: &Word) -> Value {
        match self {
            Quasimorphism::Brooks { pattern } => int(brooks_eval(pattern, g).expect("nonempty by construction")),
            Quasimorphism::Homogenized { inner, depth } => inner.eval(&g.pow(*depth as i64)) / int(*depth as i64),
            Quasimorphism::Combination { terms } => terms.iter().map(|(c, f)| int(*c) * f.eval(g)).sum(),
        }
    }

    /// `(coefficient, pattern)` pairs when `self` is an integral combination
    /// of Brooks counts.
    fn brooks_terms(&self) -> Option<Vec<(i64, Vec<Letter>)>> {
        match self {
            Quasimorphism::Brooks { pattern } => Some(vec![(1, pattern.letters().to_vec())]),
            Quasimorphism::Homogenized { .. } => None,
            Quasimorphism::Combination { terms } => {
                let mut out = Vec::new();
                for (c, f) in terms {
                    for (d, p) in f.brooks_terms()? {
                        out.push((c * d, p));
                    }
                }
                Some(out)
            }
        }
    }

    /// `f(g1) + f(g2) - f(g1 g2)`.
    pub fn defect_at(&self, g1: &Word, g2: &Word) -> Value {
        self.eval(g1) + self.eval(g2) - self.eval(&g1.concat(g2))
    }
}

impl fmt::Display for Quasimorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quasimorphism::Brooks { pattern } => write!(f, "brooks({pattern})"),
            Quasimorphism::Homogenized { inner, depth } => write!(f, "hom({inner}, {depth})"),
            Quasimorphism::Combination { terms } => {
                for (i, (c, q)) in terms.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{c}*{q}")?;
                }
                Ok(())
            }
        }
    }
}

/// Which pairs `(g1, g2)` a defect estimate examines.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PairSamples {
    /// Every pair of reduced words of length at most `max_len`.
    Exhaustive { rank: usize, max_len: usize },
    /// `count` pairs with lengths uniform in `0..=max_len`, from `seed`.
    Random {
        rank: usize,
        max_len: usize,
        count: usize,
        seed: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DefectEstimate {
    /// Largest observed `|f(g1) + f(g2) - f(g1 g2)|`, a lower bound for the
    /// defect.
    #[serde(serialize_with = "serialize_value")]
    pub value: Value,
    pub pair: (Word, Word),
    pub pairs: usize,
}

/// Per-word prefix and suffix values of a Brooks combination.
struct Profile {
    letters: Vec<Letter>,
    prefix: Vec<i64>,
    suffix: Vec<i64>,
}

fn occurrences_ending(w: &[Letter], end: usize, terms: &[(i64, Vec<Letter>, Vec<Letter>)]) -> i64 {
    let mut total = 0;
    for (c, p, q) in terms {
        let k = p.len();
        if end >= k {
            let win = &w[end - k..end];
            if win == &p[..] {
                total += c;
            }
            if win == &q[..] {
                total -= c;
            }
        }
    }
    total
}

impl Profile {
    fn new(w: &Word, terms: &[(i64, Vec<Letter>, Vec<Letter>)]) -> Profile {
        let l = w.letters();
        let n = l.len();
        let mut prefix = vec![0; n + 1];
        for end in 1..=n {
            prefix[end] = prefix[end - 1] + occurrences_ending(l, end, terms);
        }
        let mut suffix = vec![0; n + 1];
        for start in (0..n).rev() {
            let sub = &l[start..];
            let mut add = 0;
            for (c, p, q) in terms {
                if sub.len() >= p.len() {
                    if sub[..p.len()] == p[..] {
                        add += c;
                    }
                    if sub[..q.len()] == q[..] {
                        add -= c;
                    }
                }
            }
            suffix[start] = suffix[start + 1] + add;
        }
        Profile {
            letters: l.to_vec(),
            prefix,
            suffix,
        }
    }
}

fn fast_defect(a: &Profile, b: &Profile, terms: &[(i64, Vec<Letter>, Vec<Letter>)], width: usize) -> i64 {
    let (n1, n2) = (a.letters.len(), b.letters.len());
    let mut c = 0;
    while c < n1 && c < n2 && a.letters[n1 - 1 - c] == b.letters[c].inverse() {
        c += 1;
    }
    let u = &a.letters[..n1 - c];
    let v = &b.letters[c..];
    let left = &u[u.len().saturating_sub(width)..];
    let right = &v[..v.len().min(width)];
    let mut joint: smallvec::SmallVec<[Letter; 32]> = smallvec::SmallVec::new();
    joint.extend_from_slice(left);
    joint.extend_from_slice(right);
    let mut cross = 0;
    for end in left.len() + 1..=joint.len() {
        for (c, p, q) in terms {
            let k = p.len();
            if end >= k && end - k < left.len() {
                let win = &joint[end - k..end];
                if win == &p[..] {
                    cross += c;
                }
                if win == &q[..] {
                    cross -= c;
                }
            }
        }
    }
    let whole = a.prefix[n1 - c] + b.suffix[c] + cross;
    a.prefix[n1] + b.prefix[n2] - whole
}

fn better(best: &mut Option<(Value, Word, Word)>, d: Value, g1: &Word, g2: &Word) {
    let d = abs(d);
    if best.as_ref().is_none_or(|(b, _, _)| d > *b) {
        *best = Some((d, g1.clone(), g2.clone()));
    }
}

/// Observed lower bound for the defect and the first pair attaining it.
pub fn defect_estimate(f: &Quasimorphism, samples: &PairSamples) -> DefectEstimate {
    let mut best: Option<(Value, Word, Word)> = None;
    let mut pairs = 0;
    match samples {
        PairSamples::Exhaustive { rank, max_len } => {
            let words = reduced_words_up_to(*rank, *max_len);
            if let Some(terms) = f.brooks_terms() {
                let terms: Vec<(i64, Vec<Letter>, Vec<Letter>)> = terms
                    .into_iter()
                    .map(|(c, p)| {
                        let q = crate::words::invert_letters(&p);
                        (c, p, q)
                    })
                    .collect();
                let width = terms.iter().map(|t| t.1.len()).max().unwrap_or(1) - 1;
                let profiles: Vec<Profile> = words.iter().map(|w| Profile::new(w, &terms)).collect();
                let mut top = (-1i64, 0, 0);
                for (i, a) in profiles.iter().enumerate() {
                    for (j, b) in profiles.iter().enumerate() {
                        let d = fast_defect(a, b, &terms, width).abs();
                        if d > top.0 {
                            top = (d, i, j);
                        }
                    }
                }
                pairs = words.len() * words.len();
                best = Some((int(top.0), words[top.1].clone(), words[top.2].clone()));
            } else {
                let values: Vec<Value> = words.iter().map(|w| f.eval(w)).collect();
                for (i, g1) in words.iter().enumerate() {
                    for (j, g2) in words.iter().enumerate() {
                        pairs += 1;
                        better(&mut best, values[i] + values[j] - f.eval(&g1.concat(g2)), g1, g2);
                    }
                }
            }
        }
        PairSamples::Random {
            rank,
            max_len,
            count,
            seed,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            for _ in 0..*count {
                let g1 = random_word_up_to(&mut rng, *rank, *max_len);
                let g2 = random_word_up_to(&mut rng, *rank, *max_len);
                pairs += 1;
                better(&mut best, f.defect_at(&g1, &g2), &g1, &g2);
            }
        }
    }
    let (value, g1, g2) = best.unwrap_or((int(0), Word::identity(), Word::identity()));
    DefectEstimate {
        value,
        pair: (g1, g2),
        pairs,
    }
}

/// `f(g^N) / N`.
pub fn homogenize(f: &Quasimorphism, g: &Word, depth: usize) -> Result<Value> {
    if depth == 0 {
        return Err(Error::InvalidArgument("homogenization depth must be positive".into()));
    }
    Ok(f.eval(&g.pow(depth as i64)) / int(depth as i64))
}

/// `|est(2N) - est(N)|` next to the bound `D / N`.
pub fn cauchy_gap(f: &Quasimorphism, g: &Word, depth: usize, defect: Value) -> Result<(Value, Value)> {
    let gap = homogenize(f, g, 2 * depth)? - homogenize(f, g, depth)?;
    Ok((abs(gap), defect / int(depth as i64)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Complex {
    /// Functions of `n + 1` arguments.
    Homogeneous,
    /// Functions of `n` arguments.
    Inhomogeneous,
}

type Evaluator = Arc<dyn Fn(&[Word]) -> Value + Send + Sync>;

#[derive(Clone)]
enum Kind {
    Constant(Value),
    Difference(Quasimorphism),
    Evaluation(Quasimorphism),
    Coboundary(Arc<Cochain>),
    Phi(Arc<Cochain>),
    PhiInverse(Arc<Cochain>),
    Linear(Vec<(Value, Cochain)>),
    Function(String, Evaluator),
}

/// A real cochain on the free group, evaluated exactly.
#[derive(Clone)]
pub struct Cochain {
    complex: Complex,
    arity: usize,
    bound: Option<Value>,
    kind: Kind,
}

impl fmt::Debug for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Cochain({:?}, arity {}, {})",
            self.complex,
            self.arity,
            self.describe()
        )
    }
}

impl Cochain {
    pub fn constant(complex: Complex, arity: usize, value: Value) -> Cochain {
        Cochain {
            complex,
            arity,
            bound: Some(abs(value)),
            kind: Kind::Constant(value),
        }
    }

    /// Homogeneous 1-cochain `(g0, g1) -> f(g0^-1 g1)`.
    pub fn quasimorphism_difference(f: Quasimorphism) -> Cochain {
        Cochain {
            complex: Complex::Homogeneous,
            arity: 1,
            bound: None,
            kind: Kind::Difference(f),
        }
    }

    /// Non-homogeneous 1-cochain `g -> f(g)`.
    pub fn quasimorphism(f: Quasimorphism) -> Cochain {
        Cochain {
            complex: Complex::Inhomogeneous,
            arity: 1,
            bound: None,
            kind: Kind::Evaluation(f),
        }
    }

    pub fn function<F>(complex: Complex, arity: usize, name: &str, bound: Option<Value>, f: F) -> Cochain
    where
        F: Fn(&[Word]) -> Value + Send + Sync + 'static,
    {
        Cochain {
            complex,
            arity,
            bound,
            kind: Kind::Function(name.to_string(), Arc::new(f)),
        }
    }

    pub fn linear(terms: Vec<(Value, Cochain)>) -> Result<Cochain> {
        let first = terms
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty linear combination".into()))?;
        let (complex, arity) = (first.1.complex, first.1.arity);
        for (_, c) in &terms {
            if c.complex != complex {
                return Err(Error::ComplexMismatch("mixed complexes in a combination".into()));
            }
            if c.arity != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    got: c.arity,
                });
            }
        }
        let bound = terms
            .iter()
            .map(|(a, c)| c.bound.map(|b| abs(*a) * b))
            .sum::<Option<Value>>();
        Ok(Cochain {
            complex,
            arity,
            bound,
            kind: Kind::Linear(terms),
        })
    }

    pub fn with_bound(mut self, bound: Value) -> Cochain {
        self.bound = Some(bound);
        self
    }

    pub fn complex(&self) -> Complex {
        self.complex
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Declared sup-norm bound, if any.
    pub fn bound(&self) -> Option<Value> {
        self.bound
    }

    /// Number of arguments the cochain takes.
    pub fn tuple_len(&self) -> usize {
        match self.complex {
            Complex::Homogeneous => self.arity + 1,
            Complex::Inhomogeneous => self.arity,
        }
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            Kind::Constant(v) => format!("const {v}"),
            Kind::Difference(f) => format!("diff {f}"),
            Kind::Evaluation(f) => f.to_string(),
            Kind::Coboundary(c) => format!("d({})", c.describe()),
            Kind::Phi(c) => format!("phi({})", c.describe()),
            Kind::PhiInverse(c) => format!("phi^-1({})", c.describe()),
            Kind::Linear(t) => t
                .iter()
                .map(|(a, c)| format!("{a}*{}", c.describe()))
                .collect::<Vec<_>>()
                .join(" + "),
            Kind::Function(name, _) => name.clone(),
        }
    }

    /// Coboundary in the cochain's own complex.
    pub fn coboundary(&self) -> Cochain {
        Cochain {
            complex: self.complex,
            arity: self.arity + 1,
            bound: self.bound.map(|b| b * int(self.arity as i64 + 2)),
            kind: Kind::Coboundary(Arc::new(self.clone())),
        }
    }

    /// `phi(f)(g_1, ..., g_n) = f(1, g_1, g_1 g_2, ..., g_1 ... g_n)`.
    pub fn phi(&self) -> Result<Cochain> {
        if self.complex != Complex::Homogeneous {
            return Err(Error::ComplexMismatch("phi takes a homogeneous cochain".into()));
        }
        Ok(Cochain {
            complex: Complex::Inhomogeneous,
            arity: self.arity,
            bound: self.bound,
            kind: Kind::Phi(Arc::new(self.clone())),
        })
    }

    /// `phi^-1(c)(g_0, ..., g_n) = c(g_0^-1 g_1, ..., g_{n-1}^-1 g_n)`.
    pub fn phi_inverse(&self) -> Result<Cochain> {
        if self.complex != Complex::Inhomogeneous {
            return Err(Error::ComplexMismatch(
                "phi inverse takes a non-homogeneous cochain".into(),
            ));
        }
        Ok(Cochain {
            complex: Complex::Homogeneous,
            arity: self.arity,
            bound: self.bound,
            kind: Kind::PhiInverse(Arc::new(self.clone())),
        })
    }

    pub fn eval(&self, tuple: &[Word]) -> Result<Value> {
        if tuple.len() != self.tuple_len() {
            return Err(Error::ArityMismatch {
                expected: self.tuple_len(),
                got: tuple.len(),
            });
        }
        Ok(self.eval_unchecked(tuple))
    }

    fn eval_unchecked(&self, t: &[Word]) -> Value {
        match &self.kind {
            Kind::Constant(v) => *v,
            Kind::Difference(f) => f.eval(&t[0].invert().concat(&t[1])),
            Kind::Evaluation(f) => f.eval(&t[0]),
            Kind::Function(_, f) => f(t),
            Kind::Linear(terms) => terms.iter().map(|(a, c)| *a * c.eval_unchecked(t)).sum(),
            Kind::Coboundary(c) => match self.complex {
                Complex::Homogeneous => (0..t.len())
                    .map(|i| {
                        let face: Vec<Word> = t
                            .iter()
                            .enumerate()
                            .filter(|&(j, _)| j != i)
                            .map(|(_, w)| w.clone())
                            .collect();
                        sign(i) * c.eval_unchecked(&face)
                    })
                    .sum(),
                Complex::Inhomogeneous => {
                    let m = t.len();
                    let mut total = c.eval_unchecked(&t[1..]);
                    for i in 1..m {
                        let mut face: Vec<Word> = t[..i - 1].to_vec();
                        face.push(t[i - 1].concat(&t[i]));
                        face.extend_from_slice(&t[i + 1..]);
                        total += sign(i) * c.eval_unchecked(&face);
                    }
                    total + sign(m) * c.eval_unchecked(&t[..m - 1])
                }
            },
            Kind::Phi(c) => {
                let mut args = vec![Word::identity()];
                for g in t {
                    let next = args.last().expect("nonempty").concat(g);
                    args.push(next);
                }
                c.eval_unchecked(&args)
            }
            Kind::PhiInverse(c) => {
                let args: Vec<Word> = t.windows(2).map(|p| p[0].invert().concat(&p[1])).collect();
                c.eval_unchecked(&args)
            }
        }
    }

    /// `c(h g_0, ..., h g_n) == c(g_0, ..., g_n)`.
    pub fn invariant_at(&self, tuple: &[Word], h: &Word) -> Result<bool> {
        let moved: Vec<Word> = tuple.iter().map(|g| h.concat(g)).collect();
        Ok(self.eval(&moved)? == self.eval(tuple)?)
    }

    /// `c(h g_0 h^-1, ...) == c(g_0, ...)`.
    pub fn conjugation_invariant_at(&self, tuple: &[Word], h: &Word) -> Result<bool> {
        let moved: Vec<Word> = tuple.iter().map(|g| h.conjugate(g)).collect();
        Ok(self.eval(&moved)? == self.eval(tuple)?)
    }
}

fn sign(i: usize) -> Value {
    if i.is_multiple_of(2) {
        int(1)
    } else {
        int(-1)
    }
}

/// Random tuple of `len` words with lengths uniform in `0..=max_len`.
pub fn random_tuple(rng: &mut ChaCha8Rng, rank: usize, len: usize, max_len: usize) -> Vec<Word> {
    (0..len).map(|_| random_word_up_to(rng, rank, max_len)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn brooks(s: &str) -> Quasimorphism {
        Quasimorphism::brooks(w(s)).unwrap()
    }

    #[test]
    fn brooks_examples() {
        assert_eq!(brooks_eval(&w("ab"), &w("abab")).unwrap(), 2);
        assert_eq!(brooks_eval(&w("ab"), &w("BA")).unwrap(), -1);
        assert_eq!(brooks_eval(&w("ab"), &Word::identity()).unwrap(), 0);
        assert!(matches!(
            brooks_eval(&Word::identity(), &w("a")),
            Err(Error::EmptyPattern)
        ));
        assert!(Quasimorphism::brooks(Word::identity()).is_err());
    }

    // Independent exhaustive defect by direct evaluation of every product.
    fn naive_defect(f: &Quasimorphism, max_len: usize) -> (i64, Word, Word) {
        let words = reduced_words_up_to(2, max_len);
        let mut best = (-1, Word::identity(), Word::identity());
        for g1 in &words {
            for g2 in &words {
                let d = f.defect_at(g1, g2).to_integer().abs();
                if d > best.0 {
                    best = (d, g1.clone(), g2.clone());
                }
            }
        }
        best
    }

    #[test]
    fn fast_defect_matches_direct_products() {
        for (f, n) in [
            (brooks("a"), 4),
            (brooks("ab"), 5),
            (brooks("aab"), 5),
            (brooks("abAB"), 5),
        ] {
            let oracle = naive_defect(&f, n);
            let est = defect_estimate(&f, &PairSamples::Exhaustive { rank: 2, max_len: n });
            assert_eq!(est.value, int(oracle.0), "{f}");
            assert_eq!(est.pair, (oracle.1, oracle.2), "{f}");
        }
        let combo = Quasimorphism::combination(vec![(2, brooks("ab")), (-1, brooks("aB"))]);
        let oracle = naive_defect(&combo, 4);
        let est = defect_estimate(&combo, &PairSamples::Exhaustive { rank: 2, max_len: 4 });
        assert_eq!(est.value, int(oracle.0));
    }

    #[test]
    fn defect_regressions() {
        let exhaustive = |f: &Quasimorphism| defect_estimate(f, &PairSamples::Exhaustive { rank: 2, max_len: 6 }).value;
        assert_eq!(exhaustive(&brooks("a")), int(0));
        assert_eq!(exhaustive(&brooks("ab")), int(1));
        assert_eq!(brooks("ab").defect_at(&w("ab"), &w("BA")), int(0));
        assert_eq!(brooks("ab").defect_at(&w("abab"), &Word::identity()), int(0));
    }

    #[test]
    fn random_defect_is_deterministic() {
        let s = PairSamples::Random {
            rank: 2,
            max_len: 8,
            count: 500,
            seed: 7,
        };
        let a = defect_estimate(&brooks("ab"), &s);
        assert_eq!(a, defect_estimate(&brooks("ab"), &s));
        assert!(a.value <= int(1));
    }

    #[test]
    fn homogenization_examples() {
        assert_eq!(homogenize(&brooks("a"), &w("a"), 7).unwrap(), int(1));
        assert_eq!(homogenize(&brooks("ab"), &w("ab"), 10).unwrap(), int(1));
        assert_eq!(homogenize(&brooks("ab"), &Word::identity(), 3).unwrap(), int(0));
        assert!(homogenize(&brooks("ab"), &w("a"), 0).is_err());
        let h = brooks("ab").homogenized(4).unwrap();
        assert_eq!(h.eval(&w("abAB")), Value::new(1, 1));
        let (gap, bound) = cauchy_gap(&brooks("ab"), &w("aB"), 5, int(1)).unwrap();
        assert!(gap <= bound);
    }

    #[test]
    fn coboundary_examples() {
        let c = Cochain::constant(Complex::Homogeneous, 1, int(5));
        let tuple = [w("a"), w("b"), w("ab")];
        assert_eq!(c.coboundary().eval(&tuple).unwrap(), int(5));
        let f = Cochain::quasimorphism(brooks("ab"));
        assert_eq!(f.coboundary().eval(&[w("ab"), w("BA")]).unwrap(), int(0));
        assert!(matches!(
            c.eval(&[w("a")]),
            Err(Error::ArityMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn phi_examples() {
        let f = brooks("ab");
        let c = Cochain::quasimorphism_difference(f.clone());
        for g in [w("abab"), w("BA"), w("aabAB")] {
            assert_eq!(c.phi().unwrap().eval(std::slice::from_ref(&g)).unwrap(), f.eval(&g));
        }
        let k = Cochain::constant(Complex::Homogeneous, 2, int(3)).phi().unwrap();
        assert_eq!(k.eval(&[w("a"), w("b")]).unwrap(), int(3));
        assert!(Cochain::quasimorphism(f).phi().is_err());
    }

    #[test]
    fn difference_cochain_is_invariant() {
        let c = Cochain::quasimorphism_difference(brooks("ab"));
        assert!(c.invariant_at(&[w("aB"), w("bba")], &w("Ab")).unwrap());
        let bad = Cochain::function(Complex::Homogeneous, 1, "first", None, |t| int(t[0].len() as i64));
        assert!(!bad.invariant_at(&[w("a"), w("b")], &w("b")).unwrap());
    }

    #[test]
    fn linear_rejects_mismatch() {
        let a = Cochain::constant(Complex::Homogeneous, 1, int(1));
        let b = Cochain::constant(Complex::Homogeneous, 2, int(1));
        assert!(Cochain::linear(vec![(int(1), a.clone()), (int(1), b)]).is_err());
        let c = Cochain::constant(Complex::Inhomogeneous, 1, int(1));
        assert!(matches!(
            Cochain::linear(vec![(int(1), a), (int(2), c)]),
            Err(Error::ComplexMismatch(_))
        ));
    }
}
