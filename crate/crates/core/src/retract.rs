//! Verification of homomorphisms and retractions between presented groups.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fpgroup::{AmalgamSplitting, Budget, EqualityVerdict, Presentation};
use crate::words::{reduced_words_up_to, Letter, Word};

/// A map on generators, `source.rank()` images over the target alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomSpec {
    pub source: Presentation,
    pub target: Presentation,
    pub images: Vec<Word>,
}

impl HomSpec {
    pub fn new(source: Presentation, target: Presentation, images: Vec<Word>) -> Result<HomSpec> {
        if images.len() != source.rank() {
            return Err(Error::InvalidHom(format!(
                "{} images for {} source generators",
                images.len(),
                source.rank()
            )));
        }
        for w in &images {
            target.check_word(w)?;
        }
        let images = images.iter().map(|w| Word::reduce(w.letters())).collect();
        Ok(HomSpec { source, target, images })
    }

    pub fn apply(&self, w: &Word) -> Word {
        w.substitute(&self.images)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &HomSpec) -> Result<HomSpec> {
        if self.target != other.source {
            return Err(Error::InvalidHom("maps are not composable".into()));
        }
        let images = self.images.iter().map(|w| other.apply(w)).collect();
        HomSpec::new(self.source.clone(), other.target.clone(), images)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum HomVerdict {
    Verified,
    Refuted { relator: Word, image: Word },
    Unknown { relator: Word, image: Word },
}

impl HomVerdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, HomVerdict::Verified)
    }
}

/// `Some(true)` iff `w = e` in `p`; the normal form of an amalgam splitting
/// settles what the rewriting oracle leaves open.
fn trivial_in(p: &Presentation, w: &Word, budget: &Budget) -> Result<Option<bool>> {
    match p.equality_oracle(w, &Word::identity(), budget)? {
        EqualityVerdict::Equal(_) => Ok(Some(true)),
        EqualityVerdict::Distinct(_) => Ok(Some(false)),
        EqualityVerdict::Unknown(_) => Ok(AmalgamSplitting::find(p).map(|s| s.equal(w, &Word::identity()))),
    }
}

/// Maps each source relator and asks whether its image is trivial.
pub fn verify_homomorphism(h: &HomSpec, budget: &Budget) -> Result<HomVerdict> {
    let mut unknown = None;
    for r in h.source.relators() {
        let image = h.apply(r);
        match trivial_in(&h.target, &image, budget)? {
            Some(true) => {}
            Some(false) => {
                return Ok(HomVerdict::Refuted {
                    relator: r.clone(),
                    image,
                })
            }
            None => {
                unknown.get_or_insert(HomVerdict::Unknown {
                    relator: r.clone(),
                    image,
                });
            }
        }
    }
    Ok(unknown.unwrap_or(HomVerdict::Verified))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Inclusion,
    Retraction,
    Composite,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum RetractionVerdict {
    Verified,
    Refuted { stage: Stage, witness: Word, image: Word },
    Unknown { stage: Stage, witness: Word },
}

impl RetractionVerdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, RetractionVerdict::Verified)
    }
}

fn stage_verdict(stage: Stage, v: HomVerdict) -> Option<RetractionVerdict> {
    match v {
        HomVerdict::Verified => None,
        HomVerdict::Refuted { relator, image } => Some(RetractionVerdict::Refuted {
            stage,
            witness: relator,
            image,
        }),
        HomVerdict::Unknown { relator, .. } => Some(RetractionVerdict::Unknown {
            stage,
            witness: relator,
        }),
    }
}

/// Checks that `i: K -> G` and `r: G -> K` are homomorphisms with
/// `r ∘ i = Id` on the generators of `K`.
pub fn verify_retraction(r: &HomSpec, i: &HomSpec, budget: &Budget) -> Result<RetractionVerdict> {
    if i.target != r.source || i.source != r.target {
        return Err(Error::InvalidHom("retraction and inclusion are not composable".into()));
    }
    if let Some(v) = stage_verdict(Stage::Inclusion, verify_homomorphism(i, budget)?) {
        return Ok(v);
    }
    if let Some(v) = stage_verdict(Stage::Retraction, verify_homomorphism(r, budget)?) {
        return Ok(v);
    }
    for g in 0..i.source.rank() {
        let x = Word::letter(Letter::gen(g));
        let back = r.apply(&i.apply(&x));
        match trivial_in(&i.source, &back.concat(&x.invert()), budget)? {
            Some(true) => {}
            Some(false) => {
                return Ok(RetractionVerdict::Refuted {
                    stage: Stage::Composite,
                    witness: x,
                    image: back,
                })
            }
            None => {
                return Ok(RetractionVerdict::Unknown {
                    stage: Stage::Composite,
                    witness: x,
                })
            }
        }
    }
    Ok(RetractionVerdict::Verified)
}

/// `F_2 -> π_1(N_g)`, `a -> a_1`, `b -> a_2`.
pub fn surface_inclusion(genus: usize) -> Result<HomSpec> {
    let (a, b) = (Word::letter(Letter::gen(0)), Word::letter(Letter::gen(1)));
    HomSpec::new(Presentation::free(2), Presentation::surface(genus, false)?, vec![a, b])
}

/// Searches for `π: π_1(N_g) -> F_2` with `a_1 -> a`, `a_2 -> b`, images of
/// `a_3, a_4, a_5` of length at most `max_len` in shortlex order, and the
/// remaining generators sent to `e`. Requires `g >= 5`.
pub fn search_retraction(genus: usize, max_len: usize) -> Result<Option<HomSpec>> {
    if genus < 5 {
        return Err(Error::InvalidArgument("the search needs genus at least 5".into()));
    }
    let source = Presentation::surface(genus, false)?;
    let target = Presentation::free(2);
    let words = reduced_words_up_to(2, max_len);
    let (a, b) = (Word::letter(Letter::gen(0)), Word::letter(Letter::gen(1)));
    let goal = a.concat(&b).concat(&a.invert()).concat(&b.invert()).invert();
    let squares: Vec<Word> = words.iter().map(|w| w.pow(2)).collect();
    for (i, x) in squares.iter().enumerate() {
        for (j, y) in squares.iter().enumerate() {
            let xy = x.concat(y);
            for (k, z) in squares.iter().enumerate() {
                if xy.concat(z) == goal {
                    let mut images = vec![
                        a.clone(),
                        b.clone(),
                        words[i].clone(),
                        words[j].clone(),
                        words[k].clone(),
                    ];
                    images.resize(genus, Word::identity());
                    return HomSpec::new(source, target, images).map(Some);
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn free_source_is_verified() {
        let i = surface_inclusion(3).unwrap();
        assert_eq!(
            verify_homomorphism(&i, &Budget::default()).unwrap(),
            HomVerdict::Verified
        );
    }

    #[test]
    fn killing_extra_generators_is_refuted() {
        let n5 = Presentation::surface(5, false).unwrap();
        let images = vec![w("a"), w("b"), w(""), w(""), w("")];
        let pi = HomSpec::new(n5, Presentation::free(2), images).unwrap();
        match verify_homomorphism(&pi, &Budget::default()).unwrap() {
            HomVerdict::Refuted { image, .. } => assert_eq!(image, w("abAB")),
            v => panic!("{v:?}"),
        }
        let i = surface_inclusion(5).unwrap();
        assert!(matches!(
            verify_retraction(&pi, &i, &Budget::default()).unwrap(),
            RetractionVerdict::Refuted {
                stage: Stage::Retraction,
                ..
            }
        ));
    }

    #[test]
    fn trivial_map_is_verified() {
        let n4 = Presentation::surface(4, false).unwrap();
        let h = HomSpec::new(n4, Presentation::free(2), vec![Word::identity(); 4]).unwrap();
        assert!(verify_homomorphism(&h, &Budget::default()).unwrap().is_verified());
    }

    #[test]
    fn identity_retraction() {
        let f2 = Presentation::free(2);
        let id = HomSpec::new(f2.clone(), f2, vec![w("a"), w("b")]).unwrap();
        assert!(verify_retraction(&id, &id, &Budget::default()).unwrap().is_verified());
    }

    #[test]
    fn genus_five_retraction_is_found() {
        let pi = search_retraction(5, 2).unwrap().expect("a retraction exists");
        let i = surface_inclusion(5).unwrap();
        assert!(verify_retraction(&pi, &i, &Budget::default()).unwrap().is_verified());
        let composite = i.then(&pi).unwrap();
        assert_eq!(composite.images, vec![w("a"), w("b")]);
        assert!(search_retraction(4, 2).is_err());
    }

    #[test]
    fn composition_of_verified_maps() {
        let n5 = Presentation::surface(5, false).unwrap();
        let pi = search_retraction(5, 2).unwrap().unwrap();
        let endo = HomSpec::new(Presentation::free(2), Presentation::free(2), vec![w("ab"), w("b")]).unwrap();
        let c = pi.then(&endo).unwrap();
        assert_eq!(c.source, n5);
        assert!(verify_homomorphism(&c, &Budget::default()).unwrap().is_verified());
    }

    #[test]
    fn rejects_bad_specs() {
        let f2 = Presentation::free(2);
        assert!(HomSpec::new(f2.clone(), f2.clone(), vec![w("a")]).is_err());
        assert!(HomSpec::new(f2.clone(), f2, vec![w("a"), w("c")]).is_err());
    }
}
