//! Textual configuration documents (TOML) for presentations, region models and
//! homomorphism specs.
//!
//! Presentation:
//!
//! ```toml
//! rank = 3
//! relators = ["abABcc"]
//! ```
//!
//! or `surface = 3` with optional `orientable = true`.
//!
//! Region model:
//!
//! ```toml
//! lambda = 0.5
//! [[region]]
//! id = "A_eps"
//! measure = 0.5
//! transform = "identity"   # identity | h_a | h_b | trivial | hom
//! conjugator = "ab"        # optional
//! images = ["ab", "b"]     # images of a and b, only for hom
//! ```
//!
//! Homomorphism: `[source]` and `[target]` presentation tables and a list
//! `images` with one word per source generator.

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::fpgroup::Presentation;
use crate::ggh::{Region, RegionId, RegionModel, Rule, Transform};
use crate::retract::HomSpec;
use crate::words::Word;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PresentationDoc {
    rank: Option<usize>,
    #[serde(default)]
    relators: Vec<Word>,
    surface: Option<usize>,
    #[serde(default)]
    orientable: bool,
}

impl PresentationDoc {
    fn build(self) -> Result<Presentation> {
        match (self.rank, self.surface) {
            (Some(rank), None) => Presentation::new(rank, self.relators),
            (None, Some(g)) if self.relators.is_empty() => Presentation::surface(g, self.orientable),
            (None, Some(_)) => Err(Error::Config("surface presentations take no relators".into())),
            (Some(_), Some(_)) => Err(Error::Config("give either rank or surface, not both".into())),
            (None, None) => Err(Error::Config("missing rank".into())),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RegionDoc {
    id: String,
    measure: f64,
    #[serde(default = "default_transform")]
    transform: String,
    #[serde(default)]
    conjugator: Word,
    images: Option<Vec<Word>>,
}

fn default_transform() -> String {
    "identity".into()
}

impl RegionDoc {
    fn build(self) -> Result<Region> {
        let id: RegionId = self.id.parse()?;
        let transform = match (self.transform.as_str(), self.images) {
            ("identity", None) => Transform::Identity,
            ("h_a", None) => Transform::Ha,
            ("h_b", None) => Transform::Hb,
            ("trivial", None) => Transform::Trivial,
            ("hom", Some(im)) => match <[Word; 2]>::try_from(im) {
                Ok([a, b]) => Transform::Hom { a, b },
                Err(_) => return Err(Error::Config(format!("region {id}: hom needs two images"))),
            },
            ("hom", None) => return Err(Error::Config(format!("region {id}: hom needs images"))),
            (t, Some(_)) if ["identity", "h_a", "h_b", "trivial"].contains(&t) => {
                return Err(Error::Config(format!("region {id}: images only apply to hom")))
            }
            (t, _) => return Err(Error::Config(format!("region {id}: unknown transform {t:?}"))),
        };
        Ok(Region {
            id,
            measure: self.measure,
            rule: Rule {
                transform,
                conjugator: self.conjugator,
            },
        })
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    lambda: f64,
    region: Vec<RegionDoc>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct HomDoc {
    source: PresentationDoc,
    target: PresentationDoc,
    images: Vec<Word>,
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
}

pub fn parse_presentation(text: &str) -> Result<Presentation> {
    parse::<PresentationDoc>(text)?.build()
}

pub fn parse_model(text: &str) -> Result<RegionModel> {
    let doc: ModelDoc = parse(text)?;
    let regions = doc
        .region
        .into_iter()
        .map(RegionDoc::build)
        .collect::<Result<Vec<_>>>()?;
    RegionModel::new(regions, doc.lambda)
}

pub fn parse_hom(text: &str) -> Result<HomSpec> {
    let doc: HomDoc = parse(text)?;
    HomSpec::new(doc.source.build()?, doc.target.build()?, doc.images)
}

pub fn load_presentation(path: &Path) -> Result<Presentation> {
    parse_presentation(&std::fs::read_to_string(path)?)
}

pub fn load_model(path: &Path) -> Result<RegionModel> {
    parse_model(&std::fs::read_to_string(path)?)
}

pub fn load_hom(path: &Path) -> Result<HomSpec> {
    parse_hom(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presentations() {
        let p = parse_presentation("rank = 3\nrelators = [\"abABcc\"]\n").unwrap();
        assert_eq!(p, Presentation::surface(3, false).unwrap());
        let q = parse_presentation("surface = 4").unwrap();
        assert_eq!(q.relators()[0].to_string(), "abABccdd");
        let f = parse_presentation("rank = 2").unwrap();
        assert!(f.is_free());
        assert!(parse_presentation("rank = 2\nrelators = [\"abc\"]").is_err());
        assert!(parse_presentation("rank = 2\nrelators = [\"a1\"]").is_err());
        assert!(parse_presentation("relators = []").is_err());
        assert!(parse_presentation("rank = 2\nsurface = 3").is_err());
    }

    #[test]
    fn region_model() {
        let text = r#"
lambda = 0.5
[[region]]
id = "complement"
measure = 0.25
[[region]]
id = "A_eps"
measure = 0.5
conjugator = "ab"
[[region]]
id = "A_eps^a"
measure = 0.1
transform = "h_a"
[[region]]
id = "A_eps^b"
measure = 0.1
transform = "hom"
images = ["", "bb"]
[[region]]
id = "B_eps"
measure = 0.05
transform = "trivial"
"#;
        let m = parse_model(text).unwrap();
        assert_eq!(m.region(RegionId::A).rule.conjugator, "ab".parse().unwrap());
        assert_eq!(
            m.region(RegionId::Ab).rule.apply(&"ab".parse().unwrap()).to_string(),
            "bb"
        );
        assert!(parse_model(&text.replace("0.05", "0.5")).is_err());
        assert!(parse_model(&text.replace("\"trivial\"", "\"rotate\"")).is_err());
        assert!(parse_model(&text.replace("B_eps", "C_eps")).is_err());
    }

    #[test]
    fn hom_spec() {
        let text = r#"
images = ["a", "b", "ba", "ABa", "A"]
[source]
surface = 5
[target]
rank = 2
"#;
        let h = parse_hom(text).unwrap();
        assert_eq!(h.images.len(), 5);
        assert!(parse_hom(&text.replace("\"A\"]", "\"A\", \"a\"]")).is_err());
    }
}
