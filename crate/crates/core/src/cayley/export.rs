use std::fmt::Write;

use serde::Serialize;

use super::{CayleyBall, Certification};
use crate::words::{Letter, Word};

#[derive(Clone, Debug, Serialize)]
pub struct BallExport {
    pub radius: usize,
    pub vertices: Vec<Word>,
    /// `(from, to, letter)` for positive letters only.
    pub edges: Vec<(usize, usize, Letter)>,
    pub certified: bool,
    pub certification: Certification,
}

impl CayleyBall {
    fn positive_edges(&self) -> Vec<(usize, usize, Letter)> {
        let mut out = Vec::new();
        for v in 0..self.len() {
            for (l, u) in self.neighbors(v) {
                if !l.is_inverse() {
                    out.push((v, u, l));
                }
            }
        }
        out
    }

    pub fn export(&self) -> BallExport {
        BallExport {
            radius: self.radius,
            vertices: self.reps(),
            edges: self.positive_edges(),
            certified: self.is_certified(),
            certification: self.certification.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.export()).expect("ball export serializes")
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph ball {\n");
        for (v, rep) in self.reps().iter().enumerate() {
            let label = if rep.is_identity() {
                "e".to_string()
            } else {
                rep.to_string()
            };
            let _ = writeln!(s, "  {v} [label=\"{label}\"];");
        }
        for (v, u, l) in self.positive_edges() {
            let _ = writeln!(s, "  {v} -> {u} [label=\"{l}\"];");
        }
        s.push_str("}\n");
        s
    }
}
