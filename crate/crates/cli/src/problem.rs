//! Problem-file schema: factors with rational entries serialized as strings,
//! so no floating point ever enters the exact pipeline.

use std::str::FromStr;

use serde::Deserialize;

use typeb::algebra::Rational;
use typeb::fock::FactorSpec;
use typeb::moments::MomentProblem;

#[derive(Debug, Deserialize)]
pub struct ProblemFile {
    pub dimension: usize,
    pub factors: Vec<FactorEntry>,
}

#[derive(Debug, Deserialize)]
pub struct FactorEntry {
    pub x_left: Vec<String>,
    pub x_right: Vec<String>,
    #[serde(rename = "T_left")]
    pub t_left: Vec<Vec<String>>,
    #[serde(rename = "T_right")]
    pub t_right: Vec<Vec<String>>,
    pub lam_left: String,
    pub lam_right: String,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    Rational::from_str(s.trim()).map_err(|e| format!("bad rational `{s}`: {e}"))
}

fn parse_vector(v: &[String]) -> Result<Vec<Rational>, String> {
    v.iter().map(|s| parse_rational(s)).collect()
}

fn parse_matrix(m: &[Vec<String>]) -> Result<Vec<Vec<Rational>>, String> {
    m.iter().map(|row| parse_vector(row)).collect()
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("malformed problem file: {e}"))
    }

    pub fn into_problem(self) -> Result<MomentProblem, String> {
        let mut factors = Vec::with_capacity(self.factors.len());
        for entry in &self.factors {
            factors.push(FactorSpec {
                x_left: parse_vector(&entry.x_left)?,
                x_right: parse_vector(&entry.x_right)?,
                t_left: parse_matrix(&entry.t_left)?,
                t_right: parse_matrix(&entry.t_right)?,
                lam_left: parse_rational(&entry.lam_left)?,
                lam_right: parse_rational(&entry.lam_right)?,
            });
        }
        MomentProblem::new(self.dimension, factors).map_err(|e| e.to_string())
    }
}
