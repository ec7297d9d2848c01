//! Symbolic transfer of cochains on `F_2` through a measured region model of
//! the surface: per-region word rules for the trajectory cocycle `γ`, the
//! integral `I_b^n` as a finite weighted sum, and the residual bound for the
//! rotation family `ρ_ε`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quasi::{Cochain, Complex, Value};
use crate::words::{random_word_up_to, Letter, Word};

pub const TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RegionId {
    #[serde(rename = "complement")]
    Complement,
    #[serde(rename = "A_eps")]
    A,
    #[serde(rename = "A_eps^a")]
    Aa,
    #[serde(rename = "A_eps^b")]
    Ab,
    #[serde(rename = "B_eps")]
    B,
}

impl RegionId {
    pub const ALL: [RegionId; 5] = [
        RegionId::Complement,
        RegionId::A,
        RegionId::Aa,
        RegionId::Ab,
        RegionId::B,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RegionId::Complement => "complement",
            RegionId::A => "A_eps",
            RegionId::Aa => "A_eps^a",
            RegionId::Ab => "A_eps^b",
            RegionId::B => "B_eps",
        }
    }
}

impl fmt::Display for RegionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RegionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<RegionId> {
        match s {
            "complement" => Ok(RegionId::Complement),
            "A_eps" | "A" => Ok(RegionId::A),
            "A_eps^a" | "Aa" => Ok(RegionId::Aa),
            "A_eps^b" | "Ab" => Ok(RegionId::Ab),
            "B_eps" | "B" => Ok(RegionId::B),
            _ => Err(Error::UnknownRegion(s.to_string())),
        }
    }
}

/// Word transform applied before conjugation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Transform {
    Identity,
    /// `a -> a`, `b -> e`.
    Ha,
    /// `a -> e`, `b -> b`.
    Hb,
    Trivial,
    /// Images of `a` and `b`.
    Hom {
        a: Word,
        b: Word,
    },
}

impl Transform {
    pub fn apply(&self, w: &Word) -> Word {
        let (a, b) = (Word::letter(Letter::gen(0)), Word::letter(Letter::gen(1)));
        match self {
            Transform::Identity => w.clone(),
            Transform::Ha => w.substitute(&[a, Word::identity()]),
            Transform::Hb => w.substitute(&[Word::identity(), b]),
            Transform::Trivial => Word::identity(),
            Transform::Hom { a, b } => w.substitute(&[a.clone(), b.clone()]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rule {
    pub transform: Transform,
    #[serde(default)]
    pub conjugator: Word,
}

impl Rule {
    pub fn new(transform: Transform) -> Rule {
        Rule {
            transform,
            conjugator: Word::identity(),
        }
    }

    /// `u t(ω) u^-1`.
    pub fn apply(&self, w: &Word) -> Word {
        self.conjugator.conjugate(&self.transform.apply(w))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub id: RegionId,
    pub measure: f64,
    pub rule: Rule,
}

/// Measured partition of the surface with a word rule per region.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegionModel {
    regions: Vec<Region>,
    lambda: f64,
}

impl RegionModel {
    /// Regions in any order; each id exactly once, measures summing to 1,
    /// `μ(A_ε) <= Λ`.
    pub fn new(mut regions: Vec<Region>, lambda: f64) -> Result<RegionModel> {
        regions.sort_by_key(|r| r.id);
        let ids: Vec<RegionId> = regions.iter().map(|r| r.id).collect();
        if ids != RegionId::ALL {
            return Err(Error::InvalidModel(format!(
                "regions must be exactly {:?}",
                RegionId::ALL
            )));
        }
        if let Some(r) = regions.iter().find(|r| !r.measure.is_finite() || r.measure < 0.0) {
            return Err(Error::InvalidModel(format!(
                "negative or non-finite measure on {}",
                r.id
            )));
        }
        for r in &regions {
            let mut words = vec![&r.rule.conjugator];
            if let Transform::Hom { a, b } = &r.rule.transform {
                words.extend([a, b]);
            }
            if words.iter().any(|w| w.min_rank() > 2) {
                return Err(Error::InvalidModel(format!(
                    "rule on {} uses letters outside F_2",
                    r.id
                )));
            }
        }
        let total: f64 = regions.iter().map(|r| r.measure).sum();
        if (total - 1.0).abs() > TOLERANCE {
            return Err(Error::InvalidModel(format!("measures sum to {total}, not 1")));
        }
        if !lambda.is_finite() || lambda <= 0.0 {
            return Err(Error::InvalidModel("lambda must be positive".into()));
        }
        let model = RegionModel { regions, lambda };
        if model.measure(RegionId::A) > lambda + TOLERANCE {
            return Err(Error::InvalidModel("measure of A_eps exceeds lambda".into()));
        }
        Ok(model)
    }

    /// Measures in region order complement, A, A^a, A^b, B, with the
    /// standard rules and trivial conjugators.
    pub fn standard(measures: [f64; 5], lambda: f64) -> Result<RegionModel> {
        let rules = [
            Transform::Trivial,
            Transform::Identity,
            Transform::Ha,
            Transform::Hb,
            Transform::Trivial,
        ];
        let regions = RegionId::ALL
            .iter()
            .zip(measures)
            .zip(rules)
            .map(|((&id, measure), t)| Region {
                id,
                measure,
                rule: Rule::new(t),
            })
            .collect();
        RegionModel::new(regions, lambda)
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn region(&self, id: RegionId) -> &Region {
        &self.regions[RegionId::ALL.iter().position(|&r| r == id).expect("all ids present")]
    }

    pub fn measure(&self, id: RegionId) -> f64 {
        self.region(id).measure
    }

    pub fn with_rule(mut self, id: RegionId, rule: Rule) -> RegionModel {
        let i = RegionId::ALL.iter().position(|&r| r == id).expect("all ids present");
        self.regions[i].rule = rule;
        self
    }
}

/// A model with random positive measures, `Λ` between `μ(A_ε)` and
/// `μ(A_ε) + 1/2`, and random rules with conjugators of length at most
/// `max_conjugator`.
pub fn random_model<R: Rng + ?Sized>(rng: &mut R, max_conjugator: usize) -> RegionModel {
    let raw: Vec<f64> = (0..5).map(|_| rng.gen_range(0.01..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let regions: Vec<Region> = RegionId::ALL
        .iter()
        .zip(&raw)
        .map(|(&id, &m)| {
            let transform = match rng.gen_range(0..5) {
                0 => Transform::Identity,
                1 => Transform::Ha,
                2 => Transform::Hb,
                3 => Transform::Trivial,
                _ => Transform::Hom {
                    a: random_word_up_to(rng, 2, 3),
                    b: random_word_up_to(rng, 2, 3),
                },
            };
            Region {
                id,
                measure: m / total,
                rule: Rule {
                    transform,
                    conjugator: random_word_up_to(rng, 2, max_conjugator),
                },
            }
        })
        .collect();
    let lambda = regions[1].measure + rng.gen_range(0.0..0.5);
    RegionModel::new(regions, lambda).expect("random models are valid")
}

fn check_f2(w: &Word) -> Result<()> {
    if w.min_rank() > 2 {
        return Err(Error::LetterOutOfRank {
            word: w.clone(),
            rank: 2,
        });
    }
    Ok(())
}

/// `γ(ρ_ε(ω), x)` for `x` in `region`.
pub fn gamma_symbolic(model: &RegionModel, w: &Word, region: RegionId) -> Result<Word> {
    check_f2(w)?;
    Ok(model.region(region).rule.apply(w))
}

pub fn gamma_named(model: &RegionModel, w: &Word, region: &str) -> Result<Word> {
    gamma_symbolic(model, w, region.parse()?)
}

/// `γ(ω_1 ω_2) == γ(ω_1) γ(ω_2)` in the region.
pub fn cocycle_check(model: &RegionModel, w1: &Word, w2: &Word, region: RegionId) -> Result<bool> {
    Ok(gamma_symbolic(model, &w1.concat(w2), region)?
        == gamma_symbolic(model, w1, region)?.concat(&gamma_symbolic(model, w2, region)?))
}

fn value_f64(v: Value) -> f64 {
    *v.numer() as f64 / *v.denom() as f64
}

/// `Σ_R μ(R) c(γ_R(ω_0), ..., γ_R(ω_n))`.
pub fn ib_eval(model: &RegionModel, c: &Cochain, tuple: &[Word]) -> Result<f64> {
    if tuple.len() != c.tuple_len() {
        return Err(Error::ArityMismatch {
            expected: c.tuple_len(),
            got: tuple.len(),
        });
    }
    for w in tuple {
        check_f2(w)?;
    }
    let mut total = 0.0;
    for r in model.regions() {
        let image: Vec<Word> = tuple.iter().map(|w| r.rule.apply(w)).collect();
        total += r.measure * value_f64(c.eval(&image)?);
    }
    Ok(total)
}

/// Coboundary of a real function on tuples, in the given complex.
pub fn coboundary_of<F>(complex: Complex, f: F, t: &[Word]) -> Result<f64>
where
    F: Fn(&[Word]) -> Result<f64>,
{
    let sign = |i: usize| if i.is_multiple_of(2) { 1.0 } else { -1.0 };
    match complex {
        Complex::Homogeneous => {
            let mut total = 0.0;
            for i in 0..t.len() {
                let face: Vec<Word> = t
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, w)| w.clone())
                    .collect();
                total += sign(i) * f(&face)?;
            }
            Ok(total)
        }
        Complex::Inhomogeneous => {
            let m = t.len();
            let mut total = f(&t[1..])?;
            for i in 1..m {
                let mut face: Vec<Word> = t[..i - 1].to_vec();
                face.push(t[i - 1].concat(&t[i]));
                face.extend_from_slice(&t[i + 1..]);
                total += sign(i) * f(&face)?;
            }
            Ok(total + sign(m) * f(&t[..m - 1])?)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl Comparison {
    fn new(lhs: f64, rhs: f64) -> Comparison {
        Comparison {
            lhs,
            rhs,
            holds: (lhs - rhs).abs() <= TOLERANCE,
        }
    }
}

/// `I(δc)` against `δ(I(c))` on a tuple for the coboundary of `c`.
pub fn delta_commute_check(model: &RegionModel, c: &Cochain, tuple: &[Word]) -> Result<Comparison> {
    let lhs = ib_eval(model, &c.coboundary(), tuple)?;
    let rhs = coboundary_of(c.complex(), |t| ib_eval(model, c, t), tuple)?;
    Ok(Comparison::new(lhs, rhs))
}

/// `I(c)(h ω_0, ..., h ω_n)` against `I(c)(ω_0, ..., ω_n)`.
pub fn invariance_check(model: &RegionModel, c: &Cochain, tuple: &[Word], h: &Word) -> Result<Comparison> {
    let moved: Vec<Word> = tuple.iter().map(|w| h.concat(w)).collect();
    Ok(Comparison::new(ib_eval(model, c, &moved)?, ib_eval(model, c, tuple)?))
}

/// `I(α c_1 + β c_2)` against `α I(c_1) + β I(c_2)`.
pub fn linearity_check(
    model: &RegionModel,
    (alpha, c1): (Value, &Cochain),
    (beta, c2): (Value, &Cochain),
    tuple: &[Word],
) -> Result<Comparison> {
    let combo = Cochain::linear(vec![(alpha, c1.clone()), (beta, c2.clone())])?;
    let lhs = ib_eval(model, &combo, tuple)?;
    let rhs = value_f64(alpha) * ib_eval(model, c1, tuple)? + value_f64(beta) * ib_eval(model, c2, tuple)?;
    Ok(Comparison::new(lhs, rhs))
}

/// A sequence of region models along `ε -> 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Schedule {
    pub steps: Vec<RegionModel>,
}

impl Schedule {
    /// Nonempty, a common `Λ`, and `μ(B_ε)` strictly decreasing.
    pub fn new(steps: Vec<RegionModel>) -> Result<Schedule> {
        let first = steps
            .first()
            .ok_or_else(|| Error::InvalidModel("empty schedule".into()))?;
        let lambda = first.lambda();
        if steps.iter().any(|m| (m.lambda() - lambda).abs() > TOLERANCE) {
            return Err(Error::InvalidModel("lambda changes along the schedule".into()));
        }
        if steps
            .windows(2)
            .any(|p| p[1].measure(RegionId::B) >= p[0].measure(RegionId::B))
        {
            return Err(Error::InvalidModel("measure of B_eps must strictly decrease".into()));
        }
        Ok(Schedule { steps })
    }

    /// `Λ = 1/2`, `μ(A_ε) = Λ(1 - 2^-k)`, `μ(B_ε) = 0.1 * 2^-k`,
    /// `μ(A_ε^a) = μ(A_ε^b) = 0.1`, for `k = 1..=steps`.
    pub fn standard(steps: usize) -> Result<Schedule> {
        let lambda = 0.5;
        let models = (1..=steps)
            .map(|k| {
                let t = 0.5f64.powi(k as i32);
                let (a, b, side) = (lambda * (1.0 - t), 0.1 * t, 0.1);
                RegionModel::standard([1.0 - a - b - 2.0 * side, a, side, side, b], lambda)
            })
            .collect::<Result<Vec<_>>>()?;
        Schedule::new(models)
    }

    pub fn with_rule(self, id: RegionId, rule: Rule) -> Schedule {
        Schedule {
            steps: self.steps.into_iter().map(|m| m.with_rule(id, rule.clone())).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaStep {
    pub index: usize,
    pub measure_a: f64,
    pub measure_b: f64,
    pub integral: f64,
    pub lambda_term: f64,
    /// Contributions of `A_ε^a`, `A_ε^b` and the complement.
    pub side_terms: f64,
    pub residual: f64,
    pub bound: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaReport {
    pub tuple: Vec<Word>,
    pub norm: f64,
    pub norm_declared: bool,
    pub conjugation_invariant_on_samples: bool,
    pub steps: Vec<LemmaStep>,
    pub all_hold: bool,
    /// Final residual over the first, when the first is nonzero.
    pub decay: Option<f64>,
}

fn region_image(model: &RegionModel, id: RegionId, tuple: &[Word]) -> Vec<Word> {
    tuple.iter().map(|w| model.region(id).rule.apply(w)).collect()
}

/// Residual `|I(c) - Λ c - side terms|` against
/// `(Λ - μ(A_ε)) |c| + μ(B_ε) ||c||` along the schedule. Without a declared
/// bound, `||c||` is the largest `|c|` over the evaluated region images.
pub fn lemma_residual(schedule: &Schedule, c: &Cochain, tuple: &[Word]) -> Result<LemmaReport> {
    if tuple.len() != c.tuple_len() {
        return Err(Error::ArityMismatch {
            expected: c.tuple_len(),
            got: tuple.len(),
        });
    }
    for w in tuple {
        check_f2(w)?;
    }
    let value = |t: &[Word]| -> Result<f64> { Ok(value_f64(c.eval(t)?)) };
    let norm_declared = c.bound().is_some();
    let norm = match c.bound() {
        Some(b) => value_f64(b),
        None => {
            let mut m = value(tuple)?.abs();
            for model in &schedule.steps {
                for id in RegionId::ALL {
                    m = m.max(value(&region_image(model, id, tuple))?.abs());
                }
            }
            m
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut conjugation_invariant_on_samples = true;
    for _ in 0..20 {
        let h = random_word_up_to(&mut rng, 2, 4);
        conjugation_invariant_on_samples &= c.conjugation_invariant_at(tuple, &h)?;
    }
    let base = value(tuple)?;
    let mut steps = Vec::new();
    for (index, model) in schedule.steps.iter().enumerate() {
        let lambda = model.lambda();
        let integral = ib_eval(model, c, tuple)?;
        let mut side_terms = 0.0;
        for id in [RegionId::Aa, RegionId::Ab, RegionId::Complement] {
            side_terms += model.measure(id) * value(&region_image(model, id, tuple))?;
        }
        let lambda_term = lambda * base;
        let residual = (integral - lambda_term - side_terms).abs();
        let bound = (lambda - model.measure(RegionId::A)) * base.abs() + model.measure(RegionId::B) * norm;
        steps.push(LemmaStep {
            index,
            measure_a: model.measure(RegionId::A),
            measure_b: model.measure(RegionId::B),
            integral,
            lambda_term,
            side_terms,
            residual,
            bound,
            holds: residual <= bound + TOLERANCE,
        });
    }
    let all_hold = steps.iter().all(|s| s.holds);
    let first = steps.first().map_or(0.0, |s| s.residual);
    let decay = (first > 0.0).then(|| steps.last().map_or(0.0, |s| s.residual) / first);
    Ok(LemmaReport {
        tuple: tuple.to_vec(),
        norm,
        norm_declared,
        conjugation_invariant_on_samples,
        steps,
        all_hold,
        decay,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quasi::{int, Quasimorphism};

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn example_model() -> RegionModel {
        RegionModel::standard([0.25, 0.5, 0.1, 0.1, 0.05], 0.5).unwrap()
    }

    fn brooks_ab() -> Cochain {
        Cochain::quasimorphism(Quasimorphism::brooks(w("ab")).unwrap())
    }

    #[test]
    fn gamma_examples() {
        let m = example_model();
        assert_eq!(gamma_symbolic(&m, &w("abAB"), RegionId::A).unwrap(), w("abAB"));
        assert_eq!(gamma_symbolic(&m, &w("abAB"), RegionId::Aa).unwrap(), Word::identity());
        assert_eq!(gamma_symbolic(&m, &w("aabb"), RegionId::Ab).unwrap(), w("bb"));
        assert_eq!(
            gamma_symbolic(&m, &w("aabb"), RegionId::Complement).unwrap(),
            Word::identity()
        );
        assert!(gamma_symbolic(&m, &w("c"), RegionId::A).is_err());
        assert!(matches!(
            gamma_named(&m, &w("a"), "nowhere"),
            Err(Error::UnknownRegion(_))
        ));
        let m = m.with_rule(
            RegionId::A,
            Rule {
                transform: Transform::Identity,
                conjugator: w("b"),
            },
        );
        assert_eq!(gamma_symbolic(&m, &w("a"), RegionId::A).unwrap(), w("baB"));
    }

    #[test]
    fn cocycle_examples() {
        let m = example_model();
        assert!(cocycle_check(&m, &w("ab"), &w("B"), RegionId::A).unwrap());
        assert!(cocycle_check(&m, &w("ab"), &w("ba"), RegionId::Aa).unwrap());
        assert!(cocycle_check(&m, &w("abAB"), &w("bab"), RegionId::Complement).unwrap());
    }

    #[test]
    fn integral_examples() {
        let m = example_model();
        let c = brooks_ab();
        let v = ib_eval(&m, &c, &[w("abAB")]).unwrap();
        assert!((v - 0.5 * 1.0).abs() < TOLERANCE);
        let k = Cochain::constant(Complex::Inhomogeneous, 1, int(7));
        assert!((ib_eval(&m, &k, &[w("ab")]).unwrap() - 7.0).abs() < TOLERANCE);
        assert!(matches!(
            ib_eval(&m, &c, &[w("a"), w("b")]),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn model_validation() {
        assert!(RegionModel::standard([0.3, 0.5, 0.1, 0.1, 0.05], 0.5).is_err());
        assert!(RegionModel::standard([0.25, 0.5, 0.1, 0.1, 0.05], 0.4).is_err());
        assert!(RegionModel::standard([-0.25, 1.0, 0.1, 0.1, 0.05], 1.0).is_err());
        let m = example_model();
        assert!(Schedule::new(vec![m.clone(), m]).is_err());
        assert!(Schedule::new(vec![]).is_err());
    }

    #[test]
    fn delta_commutes_on_examples() {
        let m = example_model();
        let c = Cochain::quasimorphism_difference(Quasimorphism::brooks(w("ab")).unwrap());
        let r = delta_commute_check(&m, &c, &[w("a"), w("bA"), w("abb")]).unwrap();
        assert!(r.holds, "{r:?}");
        let r = delta_commute_check(&m, &brooks_ab(), &[w("ab"), w("BA")]).unwrap();
        assert!(r.holds, "{r:?}");
    }

    #[test]
    fn invariance_and_negative_control() {
        let m = example_model();
        let c = Cochain::quasimorphism_difference(Quasimorphism::brooks(w("ab")).unwrap());
        assert!(invariance_check(&m, &c, &[w("ab"), w("Ba")], &w("bab")).unwrap().holds);
        let bad = Cochain::function(Complex::Homogeneous, 1, "first", None, |t| int(t[0].len() as i64));
        assert!(!invariance_check(&m, &bad, &[w("a"), w("b")], &w("a")).unwrap().holds);
    }

    #[test]
    fn lemma_default_schedule() {
        let s = Schedule::standard(10).unwrap();
        let r = lemma_residual(&s, &brooks_ab(), &[w("abAB")]).unwrap();
        assert!(r.all_hold);
        for p in r.steps.windows(2) {
            assert!((p[1].residual - p[0].residual / 2.0).abs() < 1e-12);
        }
        for step in &r.steps {
            assert!((step.residual - (0.5 - step.measure_a)).abs() < 1e-12);
        }
        assert!(r.decay.unwrap() < 1e-2);
        let zero = Cochain::constant(Complex::Inhomogeneous, 1, int(0));
        let r = lemma_residual(&s, &zero, &[w("abAB")]).unwrap();
        assert!(r.steps.iter().all(|st| st.residual == 0.0));
    }

    #[test]
    fn lemma_with_nontrivial_b_rule() {
        let s = Schedule::standard(10)
            .unwrap()
            .with_rule(RegionId::B, Rule::new(Transform::Hom { a: w("ab"), b: w("b") }));
        let r = lemma_residual(&s, &brooks_ab(), &[w("abAB")]).unwrap();
        assert!(r.all_hold);
    }
}
