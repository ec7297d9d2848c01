//! Canned reproduction suites and their versioned JSON reports.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::cayley::{BallOptions, CayleyBall, DEFAULT_RADIUS_CAP};
use crate::coned::{ConedGraph, SubgroupSpec};
use crate::error::{Error, Result};
use crate::fpgroup::{AmalgamSplitting, Budget, Presentation};
use crate::freesub::{MalnormalityReport, SubgroupAutomaton};
use crate::ggh::{
    cocycle_check, delta_commute_check, invariance_check, lemma_residual, linearity_check, random_model, Comparison,
    LemmaReport, RegionId, Schedule,
};
use crate::hypcheck::{
    ambient_malnormality_scan, embedding_evidence, local_finiteness_scan, long_geodesic_scan,
    AmbientMalnormalityReport, EmbeddingEvidence, EvidenceRequest, FinitenessTable, LongGeodesicScan,
};
use crate::quasi::{
    brooks_eval, cauchy_gap, defect_estimate, homogenize, int, serialize_value, Cochain, Complex, DefectEstimate,
    PairSamples, Quasimorphism, Value,
};
use crate::words::{random_reduced_word, random_word_up_to, Word};

pub const SCHEMA_VERSION: u32 = 1;

/// Radius cap of the counterexample ball.
pub const COUNTEREXAMPLE_RADIUS_CAP: usize = 10;

/// The element of `⟨a, b⟩` whose geodesic the genus three report follows.
pub const LONG_ELEMENT: &str = "aaBabABabABabbaBAAba";

pub const BROOKS_PATTERNS: [&str; 10] = ["a", "ab", "aB", "aab", "abb", "aaB", "abAB", "aabb", "abab", "abaB"];

pub const HOMOGENIZATION_DEPTHS: [usize; 3] = [5, 10, 20];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseId {
    G3,
    G4,
    /// Non-orientable genus at least 5.
    G5Plus(usize),
    /// `F_2 = ⟨a_1, a_2⟩` in `F_n`.
    F2InFn(usize),
    Counterexample,
    BrooksSuite,
    GghSuite,
}

impl CaseId {
    pub fn needs_seed(self) -> bool {
        matches!(self, CaseId::BrooksSuite | CaseId::GghSuite)
    }

    fn uses_ball(self) -> bool {
        !self.needs_seed()
    }

    pub fn default_radius(self) -> Option<usize> {
        match self {
            CaseId::G3 => Some(7),
            CaseId::G4 => Some(8),
            CaseId::G5Plus(5) => Some(7),
            CaseId::G5Plus(_) => Some(5),
            CaseId::F2InFn(n) if n <= 4 => Some(7),
            CaseId::F2InFn(_) => Some(5),
            CaseId::Counterexample => Some(COUNTEREXAMPLE_RADIUS_CAP),
            CaseId::BrooksSuite | CaseId::GghSuite => None,
        }
    }

    fn radius_range(self) -> (usize, usize) {
        match self {
            CaseId::Counterexample => (6, COUNTEREXAMPLE_RADIUS_CAP),
            _ => (2, DEFAULT_RADIUS_CAP),
        }
    }

    fn cap_limit(self) -> usize {
        match self {
            CaseId::BrooksSuite => 8,
            CaseId::GghSuite => 12,
            _ => DEFAULT_RADIUS_CAP,
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseId::G3 => f.write_str("g3"),
            CaseId::G4 => f.write_str("g4"),
            CaseId::G5Plus(g) => write!(f, "g5plus({g})"),
            CaseId::F2InFn(n) => write!(f, "f2-in-fn({n})"),
            CaseId::Counterexample => f.write_str("counterexample"),
            CaseId::BrooksSuite => f.write_str("brooks-suite"),
            CaseId::GghSuite => f.write_str("ggh-suite"),
        }
    }
}

impl Serialize for CaseId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn parse_arg(s: &str, prefix: &str) -> Option<usize> {
    let rest = s.strip_prefix(prefix)?;
    let inner = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(rest);
    inner.parse().ok()
}

impl FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<CaseId> {
        let bad = || Error::InvalidCase(format!("unknown case {s:?}"));
        let id = match s {
            "g3" => CaseId::G3,
            "g4" => CaseId::G4,
            "g5plus" => CaseId::G5Plus(5),
            "counterexample" => CaseId::Counterexample,
            "brooks-suite" => CaseId::BrooksSuite,
            "ggh-suite" => CaseId::GghSuite,
            _ => {
                if let Some(g) = parse_arg(s, "g5plus").or_else(|| parse_arg(s, "g")) {
                    CaseId::G5Plus(g)
                } else if let Some(n) = parse_arg(s, "f2-in-fn").or_else(|| parse_arg(s, "f2-in-f")) {
                    CaseId::F2InFn(n)
                } else {
                    return Err(bad());
                }
            }
        };
        match id {
            CaseId::G5Plus(g) if !(5..=crate::fpgroup::MAX_GENUS).contains(&g) => Err(Error::InvalidCase(format!(
                "genus {g} outside 5..={}",
                crate::fpgroup::MAX_GENUS
            ))),
            CaseId::F2InFn(n) if !(2..=crate::words::MAX_RANK).contains(&n) => Err(Error::InvalidCase(format!(
                "rank {n} outside 2..={}",
                crate::words::MAX_RANK
            ))),
            _ => Ok(id),
        }
    }
}

/// A case and its parameters. `radius` is the letter radius of the ball;
/// `cap` bounds scanned word lengths (the diameter scan for group cases, the
/// conjugated words of the counterexample scan, the exhaustive defect pairs
/// for the Brooks suite, random words for the transfer suite).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseSpec {
    pub id: CaseId,
    pub radius: Option<usize>,
    pub cap: Option<usize>,
    pub budget: Budget,
    pub seed: Option<u64>,
}

impl CaseSpec {
    pub fn new(id: CaseId) -> CaseSpec {
        CaseSpec {
            id,
            radius: None,
            cap: None,
            budget: Budget::default(),
            seed: None,
        }
    }

    pub fn with_radius(mut self, radius: usize) -> CaseSpec {
        self.radius = Some(radius);
        self
    }

    pub fn with_cap(mut self, cap: usize) -> CaseSpec {
        self.cap = Some(cap);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> CaseSpec {
        self.seed = Some(seed);
        self
    }

    pub fn with_budget(mut self, budget: Budget) -> CaseSpec {
        self.budget = budget;
        self
    }

    /// Fills defaults and checks every parameter against its cap.
    pub fn resolve(&self) -> Result<Parameters> {
        self.budget.validate()?;
        let id = self.id;
        if id.needs_seed() && self.seed.is_none() {
            return Err(Error::InvalidCase(format!("{id} needs a seed")));
        }
        if !id.uses_ball() && self.radius.is_some() {
            return Err(Error::InvalidCase(format!("{id} takes no radius")));
        }
        let radius = match (self.radius, id.default_radius()) {
            (Some(r), _) | (None, Some(r)) => {
                let (lo, hi) = id.radius_range();
                if r > hi {
                    return Err(Error::RadiusAboveCap { radius: r, cap: hi });
                }
                if r < lo {
                    return Err(Error::InvalidCase(format!("{id} needs radius at least {lo}")));
                }
                Some(r)
            }
            (None, None) => None,
        };
        let horizon = radius.map(|r| if id == CaseId::Counterexample { r } else { r - 1 });
        let cap = match (self.cap, id) {
            (Some(c), _) if c > id.cap_limit() || c == 0 => {
                return Err(Error::InvalidCase(format!("cap {c} outside 1..={}", id.cap_limit())))
            }
            (Some(c), _) => c,
            (None, CaseId::BrooksSuite) => 6,
            (None, CaseId::GghSuite) => 5,
            (None, CaseId::Counterexample) => 4,
            (None, _) => 6usize.min(horizon.unwrap_or(6)),
        };
        if let (Some(h), false) = (horizon, id.needs_seed()) {
            if cap > h && id != CaseId::Counterexample {
                return Err(Error::InvalidCase(format!("cap {cap} exceeds the horizon {h}")));
            }
        }
        Ok(Parameters {
            radius,
            horizon,
            cap,
            seed: self.seed,
            budget: self.budget,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Parameters {
    pub radius: Option<usize>,
    pub horizon: Option<usize>,
    pub cap: usize,
    pub seed: Option<u64>,
    pub budget: Budget,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: String) -> Check {
        Check {
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseReport {
    pub schema_version: u32,
    pub case: CaseId,
    pub parameters: Parameters,
    pub checks: Vec<Check>,
    pub passed: bool,
    pub details: Details,
}

impl CaseReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Details {
    Surface(Box<SurfaceReport>),
    FreeFactor(Box<FreeFactorReport>),
    Counterexample(Box<CounterexampleReport>),
    Brooks(BrooksSuite),
    Ggh(Box<GghSuite>),
}

pub fn run_case(spec: &CaseSpec) -> Result<CaseReport> {
    let params = spec.resolve()?;
    let (checks, details) = match spec.id {
        CaseId::G3 => surface_case(3, &params)?,
        CaseId::G4 => surface_case(4, &params)?,
        CaseId::G5Plus(g) => surface_case(g, &params)?,
        CaseId::F2InFn(n) => free_factor_case(n, &params)?,
        CaseId::Counterexample => counterexample_case(&params)?,
        CaseId::BrooksSuite => {
            let suite = brooks_suite(params.seed.expect("resolved"), params.cap, 5, 1000)?;
            (suite.checks(), Details::Brooks(suite))
        }
        CaseId::GghSuite => {
            let suite = ggh_suite(params.seed.expect("resolved"), 100, params.cap)?;
            (suite.checks(), Details::Ggh(Box::new(suite)))
        }
    };
    Ok(CaseReport {
        schema_version: SCHEMA_VERSION,
        case: spec.id,
        passed: checks.iter().all(|c| c.passed),
        parameters: params,
        checks,
        details,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BallSummary {
    pub radius: usize,
    pub vertices: usize,
    pub certified: bool,
}

impl BallSummary {
    fn of(ball: &CayleyBall) -> BallSummary {
        BallSummary {
            radius: ball.radius(),
            vertices: ball.len(),
            certified: ball.is_certified(),
        }
    }
}

/// `|{l : |l| < r / k}|`, the size of the commutator-power ball.
pub fn commutator_ball_size(k: usize, r: i64) -> usize {
    if r <= 0 {
        0
    } else {
        2 * ((r as usize - 1) / k) + 1
    }
}

/// The offset `δ` in `0, 1, -1` (in that order) with
/// `counts[r] = commutator_ball_size(k, r + δ)` for every `r`.
pub fn matching_offset(counts: &[usize], k: usize) -> Option<i64> {
    [0, 1, -1].into_iter().find(|&d| {
        counts
            .iter()
            .enumerate()
            .all(|(r, &c)| c == commutator_ball_size(k, r as i64 + d))
    })
}

pub fn commutator() -> Word {
    "abAB".parse().expect("literal word")
}

/// The exponent `l` with `w = (abAB)^l`, located with the normal form and
/// confirmed by the equality oracle (`true` when confirmed).
pub fn commutator_power(p: &Presentation, w: &Word, budget: &Budget) -> Result<(Option<i64>, bool)> {
    let split = AmalgamSplitting::find(p);
    let comm = commutator();
    let max = w.len() as i64 + 1;
    for l in std::iter::once(0).chain((1..=max).flat_map(|l| [l, -l])) {
        let c = comm.pow(l);
        let hit = match &split {
            Some(s) => s.equal(w, &c),
            None => p.equality_oracle(w, &c, budget)?.is_equal(),
        };
        if hit {
            return Ok((Some(l), p.equality_oracle(w, &c, budget)?.is_equal()));
        }
    }
    Ok((None, false))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerEntry {
    pub word: Word,
    pub dhat: usize,
    pub power: Option<i64>,
    pub oracle_verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DhatRow {
    pub r: usize,
    pub count: usize,
    pub truncated: bool,
    pub elements: Vec<PowerEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurfaceReport {
    pub genus: usize,
    pub ball: BallSummary,
    pub horizon: usize,
    pub dhat_balls: Vec<DhatRow>,
    /// `k` in `|l| < r / k`.
    pub threshold_divisor: usize,
    pub expected_counts: Vec<usize>,
    pub offset: Option<i64>,
    pub evidence: EmbeddingEvidence,
    pub long_geodesic: Option<LongGeodesicScan>,
}

fn surface_case(genus: usize, params: &Parameters) -> Result<(Vec<Check>, Details)> {
    let radius = params.radius.expect("resolved");
    let horizon = params.horizon.expect("resolved");
    let p = Presentation::surface(genus, false)?;
    let opts = BallOptions {
        budget: params.budget,
        ..BallOptions::default()
    };
    let ball = CayleyBall::build_with(&p, radius, &opts)?;
    let spec = SubgroupSpec::surface(genus);
    let mut coned = ConedGraph::build(&ball, &spec)?;
    let long: Word = LONG_ELEMENT.parse()?;
    let long_geodesic = if genus == 3 && radius >= 7 {
        Some(long_geodesic_scan(&coned, &long)?)
    } else {
        None
    };
    coned.set_horizon(horizon);
    let k = if genus == 3 { 2 } else { 2 * genus - 4 };
    let mut dhat_balls = Vec::new();
    for r in 0..=horizon {
        let b = coned.dhat_ball(r);
        let mut elements = Vec::new();
        for (w, d) in &b.elements {
            let (power, oracle_verified) = commutator_power(&p, w, &params.budget)?;
            elements.push(PowerEntry {
                word: w.clone(),
                dhat: *d,
                power,
                oracle_verified,
            });
        }
        dhat_balls.push(DhatRow {
            r,
            count: b.len(),
            truncated: b.truncated,
            elements,
        });
    }
    let counts: Vec<usize> = dhat_balls.iter().map(|row| row.count).collect();
    let offset = matching_offset(&counts, k);
    let expected_counts: Vec<usize> = (0..=horizon)
        .map(|r| commutator_ball_size(k, r as i64 + offset.unwrap_or(0)))
        .collect();
    let diameter_bound = match genus {
        3 => Some(3),
        4 => Some(5),
        _ => None,
    };
    let r_max = horizon.saturating_sub(1);
    let req = EvidenceRequest {
        case: &format!("g{genus}"),
        diameter_cap: params.cap,
        diameter_bound,
        r_max,
        horizons: vec![horizon - 1, horizon],
        malnormal_radius: 2,
        malnormal_cap: 3,
    };
    let evidence = embedding_evidence(&coned, &req)?;

    let mut checks = vec![Check::new(
        "generation",
        evidence.condition_a,
        "every ball vertex is reachable through X and H".into(),
    )];
    if let Some(m) = diameter_bound {
        checks.push(Check::new(
            "diameter_bound",
            evidence.condition_b.max_diameter <= m,
            format!(
                "max diameter {} over {} geodesics with |h| <= {}, bound {m}",
                evidence.condition_b.max_diameter, evidence.condition_b.geodesics, params.cap
            ),
        ));
    }
    let all_powers = dhat_balls
        .iter()
        .flat_map(|row| &row.elements)
        .all(|e| e.power.is_some() && e.oracle_verified);
    checks.push(Check::new(
        "dhat_ball_commutator_powers",
        all_powers,
        "every element of the relative balls is an oracle-verified power of abAB".into(),
    ));
    checks.push(Check::new(
        "dhat_ball_growth",
        offset.is_some(),
        format!("counts {counts:?} against |l| < r/{k} up to an offset of 1"),
    ));
    if genus >= 5 {
        let top = (2 * genus - 5).min(horizon);
        let trivial = counts[..=top].iter().all(|&c| c == 1);
        checks.push(Check::new(
            "dhat_ball_trivial_below_threshold",
            trivial,
            format!("B(e, r) = {{e}} for r <= {top}"),
        ));
    }
    if let Some(f) = &long_geodesic {
        checks.push(Check::new(
            "long_geodesic_diameter",
            f.max_diameter <= 3,
            format!(
                "{} geodesics of length {}, max diameter {}",
                f.geodesics, f.length, f.max_diameter
            ),
        ));
    }
    checks.push(Check::new(
        "certified",
        coned.is_certified(),
        format!("ball strategy {:?}", ball.certification().strategy),
    ));
    let report = SurfaceReport {
        genus,
        ball: BallSummary::of(&ball),
        horizon,
        dhat_balls,
        threshold_divisor: k,
        expected_counts,
        offset,
        evidence,
        long_geodesic,
    };
    Ok((checks, Details::Surface(Box::new(report))))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FreeFactorReport {
    pub rank: usize,
    pub ball: BallSummary,
    pub horizon: usize,
    pub evidence: EmbeddingEvidence,
    pub stallings: MalnormalityReport,
}

fn free_factor_case(n: usize, params: &Parameters) -> Result<(Vec<Check>, Details)> {
    let radius = params.radius.expect("resolved");
    let horizon = params.horizon.expect("resolved");
    let p = Presentation::free(n);
    let opts = BallOptions {
        budget: params.budget,
        ..BallOptions::default()
    };
    let ball = CayleyBall::build_with(&p, radius, &opts)?;
    let extra: Vec<usize> = (2..n).collect();
    let spec = SubgroupSpec::free_factor(&[0, 1], &extra);
    let coned = ConedGraph::build(&ball, &spec)?.with_horizon(horizon);
    let req = EvidenceRequest {
        case: &format!("f2-in-f{n}"),
        diameter_cap: params.cap,
        diameter_bound: Some(1),
        r_max: horizon,
        horizons: vec![horizon - 1, horizon],
        malnormal_radius: 2,
        malnormal_cap: 3,
    };
    let evidence = embedding_evidence(&coned, &req)?;
    let aut = SubgroupAutomaton::fold(&["a".parse()?, "b".parse()?], n)?;
    let stallings = aut.malnormality_scan(4, 6);
    let scan = &evidence.condition_b;
    let trivial_balls = evidence
        .condition_c
        .rows
        .iter()
        .all(|row| row.counts.iter().all(|&c| c == 1));
    let checks = vec![
        Check::new("generation", evidence.condition_a, "X and H generate".into()),
        Check::new(
            "unique_geodesic_diameter",
            scan.max_diameter == 1 && scan.geodesics == scan.elements,
            format!(
                "{} elements, {} geodesics, max diameter {}",
                scan.elements, scan.geodesics, scan.max_diameter
            ),
        ),
        Check::new(
            "dhat_ball_trivial",
            trivial_balls,
            "B(e, r) = {e} at every scanned radius".into(),
        ),
        Check::new(
            "malnormal",
            stallings.is_clean() && evidence.malnormality.is_clean(),
            "no conjugation violation with |x| <= 4, |w| <= 6".into(),
        ),
        Check::new("certified", evidence.certified, "free reduction".into()),
    ];
    let report = FreeFactorReport {
        rank: n,
        ball: BallSummary::of(&ball),
        horizon,
        evidence,
        stallings,
    };
    Ok((checks, Details::FreeFactor(Box::new(report))))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathEntry {
    pub n: usize,
    pub path: Vec<Word>,
    pub length: Option<usize>,
    /// `d̂(e, a^{2n})` in the ball, when `a^{2n}` lies inside it.
    pub dhat_in_ball: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CounterexampleReport {
    pub presentation: Presentation,
    pub ball: BallSummary,
    pub admissible_paths: Vec<PathEntry>,
    pub finiteness: FinitenessTable,
    pub finiteness_radius: usize,
    pub malnormality: AmbientMalnormalityReport,
    /// Whether `a H a^-1 = H`, decided on generators.
    pub conjugate_equals_h: bool,
}

pub fn counterexample_presentation() -> Presentation {
    Presentation::new(3, vec!["aabbcc".parse().expect("literal word")]).expect("valid presentation")
}

pub fn counterexample_subgroup() -> SubgroupSpec {
    SubgroupSpec::new(
        vec!["aa".parse().expect("literal"), "bb".parse().expect("literal")],
        vec![0, 1, 2],
    )
}

/// `e, a, a^{2n-1}, a^{2n}`.
pub fn counterexample_path(n: usize) -> Vec<Word> {
    let a: Word = "a".parse().expect("literal");
    vec![
        Word::identity(),
        a.clone(),
        a.pow(2 * n as i64 - 1),
        a.pow(2 * n as i64),
    ]
}

fn counterexample_case(params: &Parameters) -> Result<(Vec<Check>, Details)> {
    let radius = params.radius.expect("resolved");
    let p = counterexample_presentation();
    let spec = counterexample_subgroup();
    let opts = BallOptions {
        radius_cap: COUNTEREXAMPLE_RADIUS_CAP,
        budget: params.budget,
        split_left: Some(vec![0, 1]),
        ..BallOptions::default()
    };
    let ball = CayleyBall::build_with(&p, radius, &opts)?;
    let coned = ConedGraph::build(&ball, &spec)?;
    let mut admissible_paths = Vec::new();
    for n in 2..=6 {
        let path = counterexample_path(n);
        let length = coned.oracle().admissible_path_length(&path)?;
        let dhat_in_ball = if 2 * n <= radius {
            coned.dhat(&path[3])?.finite()
        } else {
            None
        };
        admissible_paths.push(PathEntry {
            n,
            path,
            length,
            dhat_in_ball,
        });
    }
    let finiteness_radius = 4;
    let horizons = vec![radius - 4, radius - 2, radius];
    let finiteness = local_finiteness_scan(&coned, finiteness_radius, &horizons)?;
    let malnormality = ambient_malnormality_scan(&p, &spec, 1, params.cap)?;
    let a: Word = "a".parse()?;
    let mut conjugate_equals_h = true;
    for g in &spec.generators {
        for x in [a.conjugate(g), a.invert().conjugate(g)] {
            let inside = coned
                .oracle()
                .contains(&x)
                .ok_or_else(|| Error::Config(format!("membership of {x} undecided")))?;
            conjugate_equals_h &= inside;
        }
    }
    let witnesses = malnormality.violation_at(&a).map_or(0, |v| v.witnesses.len());
    let checks = vec![
        Check::new(
            "admissible_paths_within_3",
            admissible_paths.iter().all(|e| e.length.is_some_and(|l| l <= 3)),
            "e, a, a^(2n-1), a^(2n) is admissible of length 3 for n = 2..6".into(),
        ),
        Check::new(
            "local_finiteness_failure",
            finiteness.grows_with_horizon(finiteness_radius),
            format!(
                "|B(e, {finiteness_radius})| = {:?} at horizons {horizons:?}",
                finiteness.counts_at(finiteness_radius)
            ),
        ),
        Check::new(
            "conjugation_witnesses",
            witnesses > 0,
            format!("{witnesses} nontrivial w in H with a^-1 w a in H"),
        ),
        Check::new(
            "certified",
            coned.is_certified() && malnormality.certified,
            "amalgam normal form".into(),
        ),
    ];
    let report = CounterexampleReport {
        presentation: p,
        ball: BallSummary::of(&ball),
        admissible_paths,
        finiteness,
        finiteness_radius,
        malnormality,
        conjugate_equals_h,
    };
    Ok((checks, Details::Counterexample(Box::new(report))))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CauchyRow {
    pub word: Word,
    pub depth: usize,
    #[serde(serialize_with = "serialize_value")]
    pub estimate: Value,
    #[serde(serialize_with = "serialize_value")]
    pub gap: Value,
    #[serde(serialize_with = "serialize_value")]
    pub bound: Value,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BrooksRow {
    pub pattern: Word,
    pub exhaustive: DefectEstimate,
    pub sampled: DefectEstimate,
    pub antisymmetry_samples: usize,
    pub antisymmetric: bool,
    pub homogenization: Vec<CauchyRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BrooksSuite {
    pub seed: u64,
    pub max_len: usize,
    pub rows: Vec<BrooksRow>,
}

impl BrooksSuite {
    pub fn checks(&self) -> Vec<Check> {
        let cauchy = self.rows.iter().flat_map(|r| &r.homogenization).all(|c| c.holds);
        let anti = self.rows.iter().all(|r| r.antisymmetric);
        let sampled = self.rows.iter().all(|r| r.sampled.value <= r.exhaustive.value);
        vec![
            Check::new(
                "homogenization_cauchy_bound",
                cauchy,
                format!("|est(2N) - est(N)| <= D/N for N in {HOMOGENIZATION_DEPTHS:?}"),
            ),
            Check::new("brooks_antisymmetry", anti, "brooks(w^-1) = -brooks(w)".into()),
            Check::new(
                "sampled_defect_below_exhaustive",
                sampled,
                format!(
                    "random pairs of length <= {} never exceed the exhaustive maximum",
                    self.max_len
                ),
            ),
        ]
    }
}

/// Defect tables, homogenization gaps on `words` random words per pattern,
/// and antisymmetry on `antisymmetry` random words, all from `seed`.
pub fn brooks_suite(seed: u64, max_len: usize, words: usize, antisymmetry: usize) -> Result<BrooksSuite> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for (i, p) in BROOKS_PATTERNS.iter().enumerate() {
        let pattern: Word = p.parse()?;
        let f = Quasimorphism::brooks(pattern.clone())?;
        let exhaustive = defect_estimate(&f, &PairSamples::Exhaustive { rank: 2, max_len });
        let sampled = defect_estimate(
            &f,
            &PairSamples::Random {
                rank: 2,
                max_len,
                count: 10_000,
                seed: seed.wrapping_add(i as u64),
            },
        );
        let mut antisymmetric = true;
        for _ in 0..antisymmetry {
            let w = random_word_up_to(&mut rng, 2, 12);
            antisymmetric &= brooks_eval(&pattern, &w.invert())? == -brooks_eval(&pattern, &w)?;
        }
        let mut homogenization = Vec::new();
        for _ in 0..words {
            let len = rng.gen_range(1..=8);
            let w = random_reduced_word(&mut rng, 2, len);
            for depth in HOMOGENIZATION_DEPTHS {
                let (gap, bound) = cauchy_gap(&f, &w, depth, exhaustive.value)?;
                homogenization.push(CauchyRow {
                    word: w.clone(),
                    depth,
                    estimate: homogenize(&f, &w, depth)?,
                    gap,
                    bound,
                    holds: gap <= bound,
                });
            }
        }
        rows.push(BrooksRow {
            pattern,
            exhaustive,
            sampled,
            antisymmetry_samples: antisymmetry,
            antisymmetric,
            homogenization,
        });
    }
    Ok(BrooksSuite { seed, max_len, rows })
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Tally {
    pub checked: usize,
    pub passed: usize,
    pub max_error: f64,
    pub first_failure: Option<String>,
}

impl Tally {
    fn record(&mut self, holds: bool, error: f64, what: impl FnOnce() -> String) {
        self.checked += 1;
        self.max_error = self.max_error.max(error);
        if holds {
            self.passed += 1;
        } else if self.first_failure.is_none() {
            self.first_failure = Some(what());
        }
    }

    fn compare(&mut self, c: Comparison, what: impl FnOnce() -> String) {
        self.record(c.holds, (c.lhs - c.rhs).abs(), what);
    }

    pub fn all_pass(&self) -> bool {
        self.checked > 0 && self.passed == self.checked
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GghSuite {
    pub seed: u64,
    pub instances: usize,
    pub cocycle: Tally,
    pub delta_degree_1: Tally,
    pub delta_degree_2: Tally,
    pub invariance: Tally,
    pub linearity: Tally,
    pub lemma: LemmaReport,
}

impl GghSuite {
    pub fn checks(&self) -> Vec<Check> {
        let tally = |name: &str, t: &Tally| {
            Check::new(
                name,
                t.all_pass(),
                format!("{}/{} within 1e-12, max error {:e}", t.passed, t.checked, t.max_error),
            )
        };
        vec![
            tally("cocycle", &self.cocycle),
            tally("delta_commutes_degree_1", &self.delta_degree_1),
            tally("delta_commutes_degree_2", &self.delta_degree_2),
            tally("invariance", &self.invariance),
            tally("linearity", &self.linearity),
            Check::new(
                "lemma_residual_bound",
                self.lemma.all_hold,
                format!("{} steps of the default schedule", self.lemma.steps.len()),
            ),
            Check::new(
                "lemma_residual_decay",
                self.lemma.decay.is_some_and(|d| d < 1e-2),
                format!("final over initial residual {:?}", self.lemma.decay),
            ),
        ]
    }
}

fn random_pattern<R: Rng>(rng: &mut R) -> Word {
    let len = rng.gen_range(1..=3);
    random_reduced_word(rng, 2, len)
}

fn brooks_cochain<R: Rng>(rng: &mut R, complex: Complex) -> Cochain {
    let f = Quasimorphism::brooks(random_pattern(rng)).expect("nonempty pattern");
    match complex {
        Complex::Homogeneous => Cochain::quasimorphism_difference(f),
        Complex::Inhomogeneous => Cochain::quasimorphism(f),
    }
}

/// A degree two cochain built from two Brooks counts.
fn product_cochain<R: Rng>(rng: &mut R, complex: Complex) -> Cochain {
    let (p, q) = (random_pattern(rng), random_pattern(rng));
    let name = format!("brooks({p}) x brooks({q})");
    let f =
        move |x: &Word, y: &Word| int(brooks_eval(&p, x).expect("nonempty") * brooks_eval(&q, y).expect("nonempty"));
    match complex {
        Complex::Homogeneous => Cochain::function(complex, 2, &name, None, move |t| {
            f(&t[0].invert().concat(&t[1]), &t[1].invert().concat(&t[2]))
        }),
        Complex::Inhomogeneous => Cochain::function(complex, 2, &name, None, move |t| f(&t[0], &t[1])),
    }
}

fn tuple<R: Rng>(rng: &mut R, len: usize, max_len: usize) -> Vec<Word> {
    (0..len).map(|_| random_word_up_to(rng, 2, max_len)).collect()
}

fn show(t: &[Word]) -> String {
    t.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(",")
}

/// Randomized checks of the transfer map on `instances` models each, and the
/// residual bound along the default ten-step schedule.
pub fn ggh_suite(seed: u64, instances: usize, max_len: usize) -> Result<GghSuite> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut suite = GghSuite {
        seed,
        instances,
        cocycle: Tally::default(),
        delta_degree_1: Tally::default(),
        delta_degree_2: Tally::default(),
        invariance: Tally::default(),
        linearity: Tally::default(),
        lemma: lemma_residual(
            &Schedule::standard(10)?,
            &Cochain::quasimorphism(Quasimorphism::brooks(commutator_pattern())?),
            &[commutator()],
        )?,
    };
    let complexes = [Complex::Homogeneous, Complex::Inhomogeneous];
    for i in 0..instances {
        let complex = complexes[i % 2];
        let model = random_model(&mut rng, 3);

        let (w1, w2) = (
            random_word_up_to(&mut rng, 2, max_len),
            random_word_up_to(&mut rng, 2, max_len),
        );
        let region = RegionId::ALL[rng.gen_range(0..5)];
        let ok = cocycle_check(&model, &w1, &w2, region)?;
        suite
            .cocycle
            .record(ok, if ok { 0.0 } else { 1.0 }, || format!("{w1}, {w2} on {region}"));

        let c = brooks_cochain(&mut rng, complex);
        let t = tuple(&mut rng, c.tuple_len() + 1, max_len);
        suite.delta_degree_1.compare(delta_commute_check(&model, &c, &t)?, || {
            format!("{} at {}", c.describe(), show(&t))
        });

        let c = product_cochain(&mut rng, complex);
        let t = tuple(&mut rng, c.tuple_len() + 1, max_len);
        suite.delta_degree_2.compare(delta_commute_check(&model, &c, &t)?, || {
            format!("{} at {}", c.describe(), show(&t))
        });

        let c = brooks_cochain(&mut rng, Complex::Homogeneous);
        let t = tuple(&mut rng, c.tuple_len(), max_len);
        let h = random_word_up_to(&mut rng, 2, max_len);
        suite.invariance.compare(invariance_check(&model, &c, &t, &h)?, || {
            format!("{} at {} moved by {h}", c.describe(), show(&t))
        });

        let (c1, c2) = (brooks_cochain(&mut rng, complex), brooks_cochain(&mut rng, complex));
        let alpha = Value::new(rng.gen_range(-5..=5), rng.gen_range(1..=4));
        let beta = Value::new(rng.gen_range(-5..=5), rng.gen_range(1..=4));
        let t = tuple(&mut rng, c1.tuple_len(), max_len);
        suite
            .linearity
            .compare(linearity_check(&model, (alpha, &c1), (beta, &c2), &t)?, || {
                format!("{alpha}*{} + {beta}*{} at {}", c1.describe(), c2.describe(), show(&t))
            });
    }
    Ok(suite)
}

fn commutator_pattern() -> Word {
    "ab".parse().expect("literal word")
}
