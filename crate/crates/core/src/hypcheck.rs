//! Finite-radius evidence for the conditions of hyperbolic embedding:
//! generation, the bounded-diameter criterion for geodesics, local finiteness
//! of relative balls, and almost-malnormality in the ambient group.
//!
//! Coned-graph distances are measured inside the ball, so every reported
//! diameter is an upper bound for the true one.

use std::collections::{BTreeMap, BTreeSet};

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::cayley::CayleyBall;
use crate::coned::{ConedGraph, CosetKey, CosetOracle, SubgroupSpec};
use crate::error::{Error, Result};
use crate::fpgroup::Presentation;
use crate::words::{reduced_words_over, reduced_words_up_to, Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeodesicWitness {
    pub h: Word,
    /// Prefixes of the geodesic word, from `e` to `h`.
    pub path: Vec<Word>,
    pub diameter: usize,
    /// Indices of a pair realising the diameter.
    pub pair: (usize, usize),
}

/// Largest coned-graph distance between two vertices of one geodesic, split
/// by how many of the two lie in `H`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CaseTable {
    pub both_in_h: usize,
    pub one_in_h: usize,
    pub neither: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiameterScan {
    pub cap: usize,
    pub elements: usize,
    pub geodesics: usize,
    pub max_diameter: usize,
    /// Running maximum over `|h| <= k`, indexed by `k`.
    pub max_by_length: Vec<usize>,
    pub witness: Option<GeodesicWitness>,
    pub case_table: CaseTable,
    pub certified: bool,
}

/// Upper bounds for coned-graph distances from `e`, extended beyond the ball
/// by splitting words and by cone edges into known cosets.
pub struct SigmaBounds<'c, 'a> {
    coned: &'c ConedGraph<'a>,
    sigma: Vec<Option<usize>>,
    by_coset: Option<FxHashMap<CosetKey, usize>>,
    memo: FxHashMap<Word, usize>,
}

impl<'c, 'a> SigmaBounds<'c, 'a> {
    pub fn new(coned: &'c ConedGraph<'a>) -> SigmaBounds<'c, 'a> {
        SigmaBounds {
            coned,
            sigma: coned.sigma_distances(0),
            by_coset: None,
            memo: FxHashMap::default(),
        }
    }

    pub fn at_vertex(&self, v: usize) -> Option<usize> {
        self.sigma[v]
    }

    fn coset_table(&mut self) -> &FxHashMap<CosetKey, usize> {
        if self.by_coset.is_none() {
            let coned = self.coned;
            let mut best: FxHashMap<usize, usize> = FxHashMap::default();
            for v in 0..coned.ball().len() {
                if coned.ball().depth(v) > coned.horizon() {
                    continue;
                }
                if let Some(d) = self.sigma[v] {
                    let e = best.entry(coned.class_of(v)).or_insert(d);
                    *e = (*e).min(d);
                }
            }
            let mut table = FxHashMap::default();
            for (c, d) in best {
                let rep = coned.class_members(c).next().expect("class with a visible member");
                if let Some(key) = coned.oracle().coset_key(&coned.ball().rep(rep)) {
                    table.insert(key, d);
                }
            }
            self.by_coset = Some(table);
        }
        self.by_coset.as_ref().expect("just filled")
    }

    /// Upper bound for the coned-graph distance from `e` to `w`.
    pub fn bound(&mut self, w: &Word) -> Option<usize> {
        if let Some(v) = self.coned.ball().lookup(w) {
            if self.coned.ball().depth(v) <= self.coned.horizon() {
                return self.sigma[v];
            }
        }
        if let Some(&d) = self.memo.get(w) {
            return Some(d);
        }
        let mut best = self
            .coned
            .oracle()
            .coset_key(w)
            .and_then(|k| self.coset_table().get(&k).copied())
            .map(|d| d + 1);
        let l = w.letters();
        for k in 1..l.len() {
            let (a, b) = (Word::from_reduced(l[..k].to_vec()), Word::from_reduced(l[k..].to_vec()));
            if let (Some(x), Some(y)) = (self.bound(&a), self.bound(&b)) {
                best = Some(best.map_or(x + y, |d| d.min(x + y)));
            }
        }
        if let Some(d) = best {
            self.memo.insert(w.clone(), d);
        }
        best
    }

    /// Upper bound for the diameter of the vertex set of a path given by its
    /// letters, with a pair attaining it.
    pub fn path_diameter(&mut self, letters: &[Letter]) -> Option<(usize, (usize, usize))> {
        let mut best = (0, (0, 0));
        for i in 0..letters.len() {
            for j in i + 1..=letters.len() {
                let d = self.bound(&Word::from_reduced(letters[i..j].to_vec()))?;
                if d > best.0 {
                    best = (d, (i, j));
                }
            }
        }
        Some(best)
    }
}

/// Letters of every geodesic from `e` to `v`, in shortlex order.
pub fn geodesics_to(ball: &CayleyBall, v: usize) -> Vec<Vec<Letter>> {
    fn rec(ball: &CayleyBall, v: usize, suffix: &mut Vec<Letter>, out: &mut Vec<Vec<Letter>>) {
        if v == 0 {
            out.push(suffix.iter().rev().copied().collect());
            return;
        }
        for (l, u) in ball.neighbors(v) {
            if ball.depth(u) + 1 == ball.depth(v) {
                suffix.push(l.inverse());
                rec(ball, u, suffix, out);
                suffix.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(ball, v, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| crate::words::shortlex_cmp(a, b));
    out
}

fn prefixes(letters: &[Letter]) -> Vec<Word> {
    (0..=letters.len())
        .map(|k| Word::from_reduced(letters[..k].to_vec()))
        .collect()
}

/// Elements of `H` spelled by reduced words of length at most `cap` over the
/// letters of `H`'s generators, one per element, shortlex by first spelling.
fn h_elements(coned: &ConedGraph<'_>, cap: usize) -> Result<Vec<(Word, usize)>> {
    let letters: Vec<Letter> = coned
        .spec()
        .letters()
        .into_iter()
        .flat_map(|g| [Letter::gen(g), Letter::gen(g).inverse()])
        .collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for w in reduced_words_over(&letters, cap) {
        let v = coned.ball().resolve(&w)?;
        if coned.in_h(v) && seen.insert(v) {
            out.push((w, v));
        }
    }
    Ok(out)
}

/// For every `h` in `H` with `|h| <= cap`, bounds the coned-graph diameter of
/// every geodesic from `e` to `h`.
pub fn diam_criterion_scan(coned: &ConedGraph<'_>, cap: usize) -> Result<DiameterScan> {
    if cap > coned.horizon() {
        return Err(Error::RadiusAboveCap {
            radius: cap,
            cap: coned.horizon(),
        });
    }
    let ball = coned.ball();
    let mut bounds = SigmaBounds::new(coned);
    let mut scan = DiameterScan {
        cap,
        elements: 0,
        geodesics: 0,
        max_diameter: 0,
        max_by_length: vec![0; cap + 1],
        witness: None,
        case_table: CaseTable::default(),
        certified: coned.is_certified(),
    };
    for (h, v) in h_elements(coned, cap)? {
        scan.elements += 1;
        for letters in geodesics_to(ball, v) {
            scan.geodesics += 1;
            let path: Vec<usize> = (0..=letters.len())
                .map(|k| {
                    ball.walk(0, &Word::from_reduced(letters[..k].to_vec()))
                        .expect("geodesic prefix")
                })
                .collect();
            for i in 0..path.len() {
                for j in i + 1..path.len() {
                    let seg = Word::from_reduced(letters[i..j].to_vec());
                    let d = bounds.bound(&seg).ok_or(Error::NotInBall(seg))?;
                    let slot = match (coned.in_h(path[i]), coned.in_h(path[j])) {
                        (true, true) => &mut scan.case_table.both_in_h,
                        (false, false) => &mut scan.case_table.neither,
                        _ => &mut scan.case_table.one_in_h,
                    };
                    *slot = (*slot).max(d);
                }
            }
            let (d, pair) = bounds.path_diameter(&letters).expect("segments bounded above");
            let k = h.len();
            scan.max_by_length[k] = scan.max_by_length[k].max(d);
            if d > scan.max_diameter || scan.witness.is_none() {
                scan.max_diameter = d;
                scan.witness = Some(GeodesicWitness {
                    h: h.clone(),
                    path: prefixes(&letters),
                    diameter: d,
                    pair,
                });
            }
        }
    }
    for k in 1..scan.max_by_length.len() {
        scan.max_by_length[k] = scan.max_by_length[k].max(scan.max_by_length[k - 1]);
    }
    Ok(scan)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LongGeodesicScan {
    pub h: Word,
    pub length: usize,
    pub geodesics: usize,
    pub max_diameter: usize,
    pub witness: GeodesicWitness,
    pub certified: bool,
}

/// Geodesics from `e` to an `h` up to twice the horizon long, enumerated
/// through their vertex on the outermost sphere.
pub fn long_geodesic_scan(coned: &ConedGraph<'_>, h: &Word) -> Result<LongGeodesicScan> {
    let ball = coned.ball();
    let r = coned.horizon();
    let halves: Vec<(usize, usize)> = match ball.lookup(h).filter(|&v| ball.depth(v) <= r) {
        Some(v) => vec![(v, 0)],
        None => {
            let mut found: Vec<(usize, usize)> = Vec::new();
            for m in ball.sphere(r) {
                if let Some(y) = ball.lookup(&ball.rep(m).invert().concat(h)) {
                    if ball.depth(y) <= r {
                        found.push((m, y));
                    }
                }
            }
            let best = found
                .iter()
                .map(|&(_, y)| ball.depth(y))
                .min()
                .ok_or_else(|| Error::NotInBall(h.clone()))?;
            found.retain(|&(_, y)| ball.depth(y) == best);
            found
        }
    };
    let mut paths: Vec<Vec<Letter>> = Vec::new();
    for (m, y) in halves {
        let second = geodesics_to(ball, y);
        for first in geodesics_to(ball, m) {
            for tail in &second {
                let mut p = first.clone();
                p.extend_from_slice(tail);
                paths.push(p);
            }
        }
    }
    paths.sort_by(|a, b| crate::words::shortlex_cmp(a, b));
    paths.dedup();
    let mut bounds = SigmaBounds::new(coned);
    let mut best: Option<GeodesicWitness> = None;
    for p in &paths {
        let (d, pair) = bounds
            .path_diameter(p)
            .ok_or_else(|| Error::NotInBall(Word::from_reduced(p.clone())))?;
        if best.as_ref().is_none_or(|b| d > b.diameter) {
            best = Some(GeodesicWitness {
                h: h.clone(),
                path: prefixes(p),
                diameter: d,
                pair,
            });
        }
    }
    let witness = best.ok_or_else(|| Error::NotInBall(h.clone()))?;
    Ok(LongGeodesicScan {
        h: h.clone(),
        length: paths[0].len(),
        geodesics: paths.len(),
        max_diameter: witness.diameter,
        witness,
        certified: coned.is_certified(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FinitenessRow {
    pub horizon: usize,
    /// `|B_d̂(e, r)|` for `r = 0..=r_max`.
    pub counts: Vec<usize>,
    pub truncated: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FinitenessTable {
    pub r_max: usize,
    pub rows: Vec<FinitenessRow>,
    pub certified: bool,
}

impl FinitenessTable {
    /// Counts at radius `r` across horizons, in horizon order.
    pub fn counts_at(&self, r: usize) -> Vec<usize> {
        self.rows.iter().map(|row| row.counts[r]).collect()
    }

    /// Whether the count at radius `r` strictly increases with the horizon.
    pub fn grows_with_horizon(&self, r: usize) -> bool {
        let c = self.counts_at(r);
        c.len() >= 2 && c.windows(2).all(|w| w[0] < w[1])
    }

    /// Smallest radius whose count strictly increases with the horizon.
    pub fn first_growing_radius(&self) -> Option<usize> {
        (0..=self.r_max).find(|&r| self.grows_with_horizon(r))
    }
}

/// `|B_d̂(e, r)|` for `r <= r_max` at each horizon.
pub fn local_finiteness_scan(coned: &ConedGraph<'_>, r_max: usize, horizons: &[usize]) -> Result<FinitenessTable> {
    let mut rows = Vec::new();
    for &h in horizons {
        if h > coned.ball().radius() {
            return Err(Error::RadiusAboveCap {
                radius: h,
                cap: coned.ball().radius(),
            });
        }
        let balls: Vec<_> = (0..=r_max).map(|r| coned.dhat_ball_within(r, h)).collect();
        rows.push(FinitenessRow {
            horizon: h,
            counts: balls.iter().map(|b| b.len()).collect(),
            truncated: balls.iter().map(|b| b.truncated).collect(),
        });
    }
    Ok(FinitenessTable {
        r_max,
        rows,
        certified: coned.is_certified(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AmbientViolation {
    pub x: Word,
    /// Nontrivial `w` in `H` with `x^-1 w x` in `H`, one word per element.
    pub witnesses: Vec<Word>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AmbientMalnormalityReport {
    pub radius: usize,
    pub cap: usize,
    pub scanned: usize,
    pub skipped_in_h: usize,
    pub violations: Vec<AmbientViolation>,
    pub certified: bool,
}

impl AmbientMalnormalityReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violation_at(&self, x: &Word) -> Option<&AmbientViolation> {
        self.violations.iter().find(|v| &v.x == x)
    }
}

/// Canonical spelling of `w` for deduplication, if the oracle has one.
fn canonical(oracle: &CosetOracle, w: &Word) -> Word {
    match oracle.splitting() {
        Some(s) => s.canonical_word(w),
        None => w.clone(),
    }
}

/// Scans `x` with `|x| <= radius`, `x` outside `H`, for nontrivial
/// `w` with `|w| <= cap`, `w` in `H` and `x^-1 w x` in `H`.
pub fn ambient_malnormality_scan(
    p: &Presentation,
    spec: &SubgroupSpec,
    radius: usize,
    cap: usize,
) -> Result<AmbientMalnormalityReport> {
    let oracle = CosetOracle::new(p, spec)?;
    let mut certified = oracle.is_exact();
    let mut member = |w: &Word| match oracle.contains(w) {
        Some(b) => b,
        None => {
            certified = false;
            false
        }
    };
    let mut h_words: BTreeMap<Word, Word> = BTreeMap::new();
    for w in reduced_words_up_to(p.rank(), cap) {
        if !w.is_identity() && member(&w) {
            h_words.entry(canonical(&oracle, &w)).or_insert(w);
        }
    }
    let mut h_words: Vec<Word> = h_words.into_values().collect();
    h_words.sort();
    let identity = canonical(&oracle, &Word::identity());
    h_words.retain(|w| canonical(&oracle, w) != identity);
    let mut seen = BTreeSet::new();
    let mut report = AmbientMalnormalityReport {
        radius,
        cap,
        scanned: 0,
        skipped_in_h: 0,
        violations: Vec::new(),
        certified: true,
    };
    for x in reduced_words_up_to(p.rank(), radius) {
        if !seen.insert(canonical(&oracle, &x)) {
            continue;
        }
        if member(&x) {
            report.skipped_in_h += 1;
            continue;
        }
        report.scanned += 1;
        let witnesses: Vec<Word> = h_words
            .iter()
            .filter(|w| member(&x.invert().concat(w).concat(&x)))
            .cloned()
            .collect();
        if !witnesses.is_empty() {
            report.violations.push(AmbientViolation { x, witnesses });
        }
    }
    report.certified = certified;
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    ConsistentWithEmbedding,
    Violated { condition: String, witness: String },
    Inconclusive { reason: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmbeddingEvidence {
    pub case: String,
    pub radius: usize,
    pub condition_a: bool,
    pub condition_b: DiameterScan,
    pub diameter_bound: Option<usize>,
    pub condition_c: FinitenessTable,
    pub malnormality: AmbientMalnormalityReport,
    pub certified: bool,
    pub verdict: Verdict,
}

/// Runs all three scans and combines them. Local finiteness is judged on
/// counts at fixed radius across `horizons`.
pub struct EvidenceRequest<'s> {
    pub case: &'s str,
    pub diameter_cap: usize,
    pub diameter_bound: Option<usize>,
    pub r_max: usize,
    pub horizons: Vec<usize>,
    pub malnormal_radius: usize,
    pub malnormal_cap: usize,
}

pub fn embedding_evidence(coned: &ConedGraph<'_>, req: &EvidenceRequest<'_>) -> Result<EmbeddingEvidence> {
    let condition_a = coned.generates();
    let condition_b = diam_criterion_scan(coned, req.diameter_cap)?;
    let condition_c = local_finiteness_scan(coned, req.r_max, &req.horizons)?;
    let malnormality = ambient_malnormality_scan(
        coned.ball().presentation(),
        coned.spec(),
        req.malnormal_radius,
        req.malnormal_cap,
    )?;
    let certified = coned.is_certified() && malnormality.certified;
    let verdict = if !condition_a {
        Verdict::Violated {
            condition: "generation".into(),
            witness: "vertex unreachable from e".into(),
        }
    } else if let Some(r) = condition_c.first_growing_radius() {
        Verdict::Violated {
            condition: "local_finiteness".into(),
            witness: format!(
                "r = {r}, counts {:?} at horizons {:?}",
                condition_c.counts_at(r),
                req.horizons
            ),
        }
    } else if let Some(v) = malnormality.violations.first() {
        Verdict::Violated {
            condition: "almost_malnormal".into(),
            witness: format!("x = {}, w = {}", v.x, v.witnesses[0]),
        }
    } else if req.diameter_bound.is_some_and(|m| condition_b.max_diameter > m) {
        Verdict::Inconclusive {
            reason: format!(
                "diameter bound {} exceeds {}",
                condition_b.max_diameter,
                req.diameter_bound.unwrap_or(0)
            ),
        }
    } else if !certified {
        Verdict::Inconclusive {
            reason: "uncertified identifications".into(),
        }
    } else {
        Verdict::ConsistentWithEmbedding
    };
    Ok(EmbeddingEvidence {
        case: req.case.to_string(),
        radius: coned.horizon(),
        condition_a,
        condition_b,
        diameter_bound: req.diameter_bound,
        condition_c,
        malnormality,
        certified,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::BallOptions;
    use crate::fpgroup::Budget;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn surface(genus: usize, radius: usize) -> CayleyBall {
        let p = Presentation::surface(genus, false).unwrap();
        let opts = BallOptions {
            split_left: Some(vec![0, 1]),
            ..BallOptions::default()
        };
        CayleyBall::build_with(&p, radius, &opts).unwrap()
    }

    #[test]
    fn free_factor_diameter_is_one() {
        let p = Presentation::free(4);
        let ball = CayleyBall::build(&p, 4, &Budget::default()).unwrap();
        let coned = ConedGraph::build(&ball, &SubgroupSpec::free_factor(&[0, 1], &[2, 3])).unwrap();
        let scan = diam_criterion_scan(&coned, 4).unwrap();
        assert_eq!(scan.max_diameter, 1);
        assert_eq!(scan.geodesics, scan.elements - 1 + 1);
        assert!(scan.certified);
    }

    #[test]
    fn genus_three_diameter() {
        let ball = surface(3, 4);
        let coned = ConedGraph::build(&ball, &SubgroupSpec::surface(3)).unwrap();
        let scan = diam_criterion_scan(&coned, 4).unwrap();
        assert!(scan.max_diameter <= 3, "{scan:?}");
        assert!(scan.max_by_length.windows(2).all(|p| p[0] <= p[1]));
        assert!(scan.case_table.both_in_h <= 1);
    }

    #[test]
    fn cap_above_horizon_is_rejected() {
        let ball = surface(3, 2);
        let coned = ConedGraph::build(&ball, &SubgroupSpec::surface(3)).unwrap();
        assert!(diam_criterion_scan(&coned, 3).is_err());
    }

    #[test]
    fn long_geodesic_through_midpoints() {
        let ball = surface(3, 4);
        let coned = ConedGraph::build(&ball, &SubgroupSpec::surface(3)).unwrap();
        let h = w("abABab");
        let scan = long_geodesic_scan(&coned, &h).unwrap();
        let direct = surface(3, 6);
        let v = direct.resolve(&h).unwrap();
        assert_eq!(scan.length, direct.depth(v));
        assert_eq!(scan.geodesics, geodesics_to(&direct, v).len());
        assert!(scan.max_diameter <= 3);
    }

    #[test]
    fn genus_three_balls_grow_with_horizon() {
        let ball = surface(3, 6);
        let coned = ConedGraph::build(&ball, &SubgroupSpec::surface(3)).unwrap();
        let t = local_finiteness_scan(&coned, 3, &[4, 6]).unwrap();
        assert_eq!(t.counts_at(2), vec![3, 3]);
        assert_eq!(t.counts_at(3), vec![5, 7]);
        assert_eq!(t.first_growing_radius(), Some(3));
    }

    #[test]
    fn counterexample_conjugation_by_a() {
        let p = Presentation::new(3, vec![w("aabbcc")]).unwrap();
        let spec = SubgroupSpec::new(vec![w("aa"), w("bb")], vec![0, 1, 2]);
        let r = ambient_malnormality_scan(&p, &spec, 1, 4).unwrap();
        let v = r.violation_at(&w("a")).unwrap();
        assert!(v.witnesses.contains(&w("aa")));
        assert!(v.witnesses.contains(&w("aaaa")));
        assert!(!v.witnesses.contains(&w("bb")));
        assert!(r.certified);
    }

    #[test]
    fn genus_three_commutator_subgroup_not_malnormal() {
        let p = Presentation::surface(3, false).unwrap();
        let r = ambient_malnormality_scan(&p, &SubgroupSpec::surface(3), 2, 3).unwrap();
        let v = r.violation_at(&w("c")).unwrap();
        assert!(v.witnesses.contains(&w("cc")));
        assert!(r.violation_at(&w("a")).is_none());
        assert_eq!(r.skipped_in_h, 5 + 12 + 2);
    }

    #[test]
    fn free_factor_in_free_group_is_malnormal() {
        let p = Presentation::free(4);
        let r = ambient_malnormality_scan(&p, &SubgroupSpec::free_factor(&[0, 1], &[2, 3]), 2, 4).unwrap();
        assert!(r.is_clean());
    }

    #[test]
    fn free_factor_evidence_is_consistent() {
        let p = Presentation::free(4);
        let ball = CayleyBall::build(&p, 4, &Budget::default()).unwrap();
        let coned = ConedGraph::build(&ball, &SubgroupSpec::free_factor(&[0, 1], &[2, 3])).unwrap();
        let req = EvidenceRequest {
            case: "f2-in-f4",
            diameter_cap: 3,
            diameter_bound: Some(1),
            r_max: 3,
            horizons: vec![3, 4],
            malnormal_radius: 2,
            malnormal_cap: 3,
        };
        let ev = embedding_evidence(&coned, &req).unwrap();
        assert_eq!(ev.verdict, Verdict::ConsistentWithEmbedding);
    }
}
