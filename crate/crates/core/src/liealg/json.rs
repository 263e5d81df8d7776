//! JSON description of an algebra:
//! `{"dim": n, "basis": [...], "params": [...], "brackets": [{"i", "j", "result": {"k": "coeff"}}]}`
//! with an optional `"invariants"` list of polynomials.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::exact::{parse_poly, parse_ratfunc, Poly, RatFunc};

use super::{LieAlgebra, LieError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub dim: usize,
    pub basis: Vec<String>,
    #[serde(default)]
    pub params: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariants: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub result: BTreeMap<usize, String>,
}

pub fn from_json_str(src: &str) -> Result<(LieAlgebra, Option<Vec<Poly>>), LieError> {
    let file: AlgebraFile =
        serde_json::from_str(src).map_err(|e| LieError::Malformed(e.to_string()))?;
    from_json(&file)
}

pub fn from_json(file: &AlgebraFile) -> Result<(LieAlgebra, Option<Vec<Poly>>), LieError> {
    let n = file.dim;
    if file.basis.len() != n {
        return Err(LieError::Malformed(format!(
            "dim is {n} but {} basis labels were given",
            file.basis.len()
        )));
    }
    let unique: BTreeSet<&String> = file.basis.iter().collect();
    if unique.len() != n {
        return Err(LieError::Malformed("duplicate basis label".into()));
    }
    for l in &file.basis {
        let valid = l
            .chars()
            .next()
            .is_some_and(|c| c.is_alphabetic() || c == '_')
            && l.chars().all(|c| c.is_alphanumeric() || c == '_');
        if !valid {
            return Err(LieError::Malformed(format!("invalid basis label `{l}`")));
        }
    }
    let params = file
        .params
        .iter()
        .map(|p| {
            p.strip_prefix('t')
                .and_then(|k| k.parse::<u32>().ok())
                .ok_or_else(|| LieError::Malformed(format!("invalid parameter name `{p}`")))
        })
        .collect::<Result<Vec<u32>, _>>()?;

    let mut seen = BTreeSet::new();
    let mut brackets = Vec::new();
    for e in &file.brackets {
        if e.i >= n || e.j >= n {
            return Err(LieError::Malformed(format!(
                "bracket index out of range: ({}, {})",
                e.i, e.j
            )));
        }
        if !seen.insert((e.i.min(e.j), e.i.max(e.j))) {
            return Err(LieError::Malformed(format!(
                "bracket ({}, {}) given twice",
                e.i, e.j
            )));
        }
        let mut v = vec![RatFunc::zero(); n];
        for (&k, c) in &e.result {
            if k >= n {
                return Err(LieError::Malformed(format!(
                    "result index {k} out of range"
                )));
            }
            let c = parse_ratfunc(c, &[])?;
            if !c.only_parameters() {
                return Err(LieError::Malformed(
                    "structure constants may only use parameters".into(),
                ));
            }
            v[k] = c;
        }
        brackets.push((e.i, e.j, v));
    }
    let g = LieAlgebra::new(file.basis.clone(), params, brackets)?;
    let invariants = file
        .invariants
        .as_ref()
        .map(|list| {
            list.iter()
                .map(|s| parse_poly(s, &file.basis))
                .collect::<Result<Vec<Poly>, _>>()
        })
        .transpose()?;
    Ok((g, invariants))
}

pub fn to_json(g: &LieAlgebra, invariants: Option<&[Poly]>) -> AlgebraFile {
    let n = g.dim();
    let mut brackets = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let result: BTreeMap<usize, String> = g
                .basis_bracket(i, j)
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k, c.to_string()))
                .collect();
            if !result.is_empty() {
                brackets.push(BracketEntry { i, j, result });
            }
        }
    }
    AlgebraFile {
        dim: n,
        basis: g.labels().to_vec(),
        params: g.params().iter().map(|k| format!("t{k}")).collect(),
        brackets,
        invariants: invariants
            .map(|inv| inv.iter().map(|p| p.to_string_with(g.labels())).collect()),
    }
}

pub fn to_json_string(g: &LieAlgebra, invariants: Option<&[Poly]>) -> String {
    serde_json::to_string_pretty(&to_json(g, invariants)).expect("serializable")
}
