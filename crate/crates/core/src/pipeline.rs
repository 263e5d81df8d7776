//! Top-level construction of complete commutative families, and their
//! certification.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::argshift::{complete_on_dual, ArgshiftError, InvariantSet};
use crate::config::RunConfig;
use crate::exact::{substitute, Poly, RatFunc, VarId};
use crate::liealg::{heisenberg_in, to_json, LieAlgebra, LieError, Subspace};
use crate::poisson::{
    commutativity_check, independence_rank, index, l_value, CommutativityReport, PoissonError,
    PolyFamily, Provenance,
};
use crate::reduction::{
    com_pullback, com_reduce, heis_assemble, heis_reduce, normalize, ComReduction, HeisReduction,
    ReductionError, ReductionState, StepDescriptor,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PipelineError {
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("recursion did not reduce the dimension ({before} -> {after})")]
    NoProgress { before: usize, after: usize },
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Argshift(#[from] ArgshiftError),
    #[error(transparent)]
    Poisson(#[from] PoissonError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Complete,
    Incomplete,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyEntry {
    pub polynomial: String,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Independence {
    pub rank: usize,
    pub rank_samples: Vec<usize>,
    pub points: Vec<Vec<String>>,
    pub trials: usize,
    pub range: i64,
    pub rounds: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: u32,
    pub fingerprint: String,
    pub dim: usize,
    pub seed: u64,
    pub index: usize,
    pub target_l: usize,
    pub family: Vec<FamilyEntry>,
    pub commutativity: CommutativityReport,
    pub independence: Independence,
    pub trace: Vec<StepDescriptor>,
    pub verdict: Verdict,
    #[serde(skip)]
    pub members: PolyFamily,
}

impl Certificate {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

/// SHA-256 of the canonical JSON form of the algebra.
pub fn fingerprint(g: &LieAlgebra) -> String {
    let text = serde_json::to_string(&to_json(g, None)).expect("algebra serializes");
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// One executed reduction step, handed to observers of [`construct_observed`].
pub enum StepEvent<'a> {
    Heis(&'a HeisReduction),
    Com(&'a ComReduction),
}

/// Builds a family on `g*` and certifies it.
pub fn construct(
    g: &LieAlgebra,
    invariants: Option<&InvariantSet>,
    cfg: &RunConfig,
) -> Result<Certificate, PipelineError> {
    construct_observed(g, invariants, cfg, &mut |_| {})
}

pub fn construct_observed(
    g: &LieAlgebra,
    invariants: Option<&InvariantSet>,
    cfg: &RunConfig,
    observer: &mut dyn FnMut(StepEvent<'_>),
) -> Result<Certificate, PipelineError> {
    let mut run = Run {
        cfg,
        invariants,
        trace: Vec::new(),
        observer,
    };
    let family = run.solve(&ReductionState::new(g.clone()), 0)?;
    let trace = std::mem::take(&mut run.trace);
    certify(g, family, trace, cfg)
}

/// Certification only.
pub fn verify(
    g: &LieAlgebra,
    family: PolyFamily,
    cfg: &RunConfig,
) -> Result<Certificate, PipelineError> {
    certify(g, family, Vec::new(), cfg)
}

struct Run<'a, 'o> {
    cfg: &'a RunConfig,
    invariants: Option<&'a InvariantSet>,
    trace: Vec<StepDescriptor>,
    observer: &'o mut dyn FnMut(StepEvent<'_>),
}

impl Run<'_, '_> {
    fn record(&mut self, step: StepDescriptor) -> Result<(), PipelineError> {
        if step.dim_after >= step.dim_before {
            return Err(PipelineError::NoProgress {
                before: step.dim_before,
                after: step.dim_after,
            });
        }
        self.trace.push(step);
        Ok(())
    }

    fn solve(&mut self, state: &ReductionState, depth: usize) -> Result<PolyFamily, PipelineError> {
        let family = self.dispatch(state, depth)?;
        Ok(restrict_family(state, family))
    }

    fn dispatch(
        &mut self,
        state: &ReductionState,
        depth: usize,
    ) -> Result<PolyFamily, PipelineError> {
        let g = &state.algebra;
        if g.is_abelian() {
            let coords = state.unpinned().into_iter().map(Poly::coord).collect();
            return Ok(PolyFamily::from_members(coords, Provenance::Coordinate));
        }
        if depth == 0 {
            if let Some(inv) = self.invariants {
                if g.solvable_radical()? == g.center() {
                    let done = complete_on_dual(g, inv, self.cfg)?;
                    return Ok(done.shift.family);
                }
            }
        }
        if let Some(pos) = state.pins.iter().position(|(_, v)| v.is_zero()) {
            return self.quotient_step(state, pos, depth);
        }
        if !g.is_solvable() {
            return Err(PipelineError::Unsupported(format!(
                "non-solvable algebra of dimension {} ({}) with no invariants available",
                g.dim(),
                g.labels().join(", ")
            )));
        }
        let n = g.nilradical()?;
        if let Some(hb) = heisenberg_in(g, &n) {
            let central = (0..g.dim()).all(|j| g.br(&hb.z, &g.unit(j)).iter().all(|c| c.is_zero()));
            if central {
                let red = heis_reduce(state, &hb)?;
                let check = red.verify();
                if !check.n_invariance || !check.homomorphism {
                    return Err(ReductionError::Verification(format!(
                        "Heisenberg lift: {check:?}"
                    ))
                    .into());
                }
                (self.observer)(StepEvent::Heis(&red));
                self.record(red.descriptor())?;
                let sub = self.solve(&red.quotient, depth + 1)?;
                return Ok(heis_assemble(&red, &sub));
            }
        }
        let h = g.commutative_characteristic_ideal(&n)?.ok_or_else(|| {
            ReductionError::PreconditionFailed("no commutative characteristic ideal found".into())
        })?;
        let red = com_reduce(state, &h)?;
        let check = red.verify();
        if !(check.jacobi && check.w_central && check.dimension_drop && check.kernel_membership) {
            return Err(
                ReductionError::Verification(format!("commutative reduction: {check:?}")).into(),
            );
        }
        (self.observer)(StepEvent::Com(&red));
        self.record(red.descriptor())?;
        let sub = self.solve(&red.tilde, depth + 1)?;
        Ok(com_pullback(&red, &sub))
    }

    fn quotient_step(
        &mut self,
        state: &ReductionState,
        pos: usize,
        depth: usize,
    ) -> Result<PolyFamily, PipelineError> {
        let g = &state.algebra;
        let p = state.pins[pos].0;
        let (q, proj) = g.quotient(&Subspace::span(g.dim(), &[g.unit(p)]))?;
        let kept = proj.kept().to_vec();
        let pins = state
            .pins
            .iter()
            .filter(|(i, _)| *i != p)
            .map(|(i, v)| {
                (
                    kept.iter().position(|k| k == i).expect("pins are distinct"),
                    v.clone(),
                )
            })
            .collect();
        let sub_state = ReductionState::with_pins(q, pins)?;
        self.record(StepDescriptor {
            step: "quotient".into(),
            dim_before: g.dim(),
            dim_after: sub_state.dim(),
            params_added: 0,
            pinned: sub_state.pinned_labels(),
        })?;
        let sub = self.solve(&sub_state, depth + 1)?;
        let mut out = PolyFamily::new();
        for (f, tag) in sub.iter() {
            out.push(
                f.map_vars(|v| match v {
                    VarId::Coordinate(j) => VarId::coord(kept[j as usize]),
                    other => other,
                }),
                tag,
            );
        }
        Ok(out)
    }
}

/// Replaces pinned coordinates by their values; members that become
/// constant carry no information on the slice and are dropped.
fn restrict_family(state: &ReductionState, family: PolyFamily) -> PolyFamily {
    if state.pins.is_empty() {
        return family;
    }
    let map: BTreeMap<VarId, RatFunc> = state
        .pins
        .iter()
        .map(|(p, v)| (VarId::coord(*p), v.clone()))
        .collect();
    let mut out = PolyFamily::new();
    for (f, tag) in family.iter() {
        let (num, _) = substitute(f, &map);
        if num.vars().iter().any(|v| v.is_coordinate()) {
            out.push(normalize(&num), tag);
        }
    }
    out
}

fn certify(
    g: &LieAlgebra,
    family: PolyFamily,
    trace: Vec<StepDescriptor>,
    cfg: &RunConfig,
) -> Result<Certificate, PipelineError> {
    let mut rng = cfg.rng_for(2);
    let ind = index(g, cfg, &mut rng)?.index;
    let target = l_value(g.dim(), ind, 0)?.l;
    let commutativity = commutativity_check(&family, g);
    let mut independence = Independence {
        rank: 0,
        rank_samples: Vec::new(),
        points: Vec::new(),
        trials: cfg.trials,
        range: cfg.coeff_range,
        rounds: 0,
    };
    if !family.is_empty() {
        let mut rng = cfg.rng_for(3);
        for round in 0..=cfg.resample_rounds {
            let report = independence_rank(&family, g, cfg.trials, cfg.coeff_range, &mut rng)?;
            independence.rounds = round + 1;
            independence.rank_samples.extend(report.samples);
            independence.points.extend(report.points);
            independence.rank = independence.rank.max(report.rank);
            if independence.rank >= target {
                break;
            }
        }
    }
    let verdict = if !commutativity.passed || independence.rank > target {
        Verdict::Failed
    } else if independence.rank == target && family.len() == target {
        Verdict::Complete
    } else {
        Verdict::Incomplete
    };
    let entries = family
        .iter()
        .map(|(f, tag)| FamilyEntry {
            polynomial: f.to_string_with(g.labels()),
            provenance: tag,
        })
        .collect();
    Ok(Certificate {
        schema: SCHEMA_VERSION,
        fingerprint: fingerprint(g),
        dim: g.dim(),
        seed: cfg.seed,
        index: ind,
        target_l: target,
        family: entries,
        commutativity,
        independence,
        trace,
        verdict,
        members: family,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::argshift::classical_invariants;
    use crate::exact::parse_poly;
    use crate::liealg::catalog;

    fn fam(g: &LieAlgebra, srcs: &[&str]) -> PolyFamily {
        PolyFamily::from_members(
            srcs.iter()
                .map(|s| parse_poly(s, g.labels()).unwrap())
                .collect(),
            Provenance::User,
        )
    }

    #[test]
    fn abelian_is_coordinates() {
        let g = catalog("abelian", 3).unwrap();
        let c = construct(&g, None, &RunConfig::default()).unwrap();
        assert_eq!(c.verdict, Verdict::Complete);
        assert_eq!(c.target_l, 3);
        assert!(c.trace.is_empty());
    }

    #[test]
    fn heis3_family() {
        let g = catalog("heis", 3).unwrap();
        let c = construct(&g, None, &RunConfig::default()).unwrap();
        assert_eq!(c.verdict, Verdict::Complete);
        assert_eq!(c.members.members(), &[Poly::coord(0), Poly::coord(2)]);
        assert_eq!(c.trace[0].step, "heis");
    }

    #[test]
    fn borel_family() {
        let g = catalog("borel_sl2", 2).unwrap();
        let c = construct(&g, None, &RunConfig::default()).unwrap();
        assert_eq!(c.verdict, Verdict::Complete);
        assert_eq!(c.members.members(), &[Poly::coord(1)]);
        assert_eq!(c.trace[0].step, "com");
        assert_eq!(c.trace[0].params_added, 1);
    }

    #[test]
    fn strictly_upper_4() {
        let g = catalog("strictly_upper", 4).unwrap();
        let c = construct(&g, None, &RunConfig::default()).unwrap();
        assert_eq!(c.target_l, 4);
        assert_eq!(c.verdict, Verdict::Complete, "{}", c.to_json_string());
    }

    #[test]
    fn sl2_needs_invariants() {
        let g = catalog("sl", 2).unwrap();
        assert!(matches!(
            construct(&g, None, &RunConfig::default()),
            Err(PipelineError::Unsupported(_))
        ));
        let inv = classical_invariants("sl", 2).unwrap();
        let c = construct(&g, Some(&inv), &RunConfig::default()).unwrap();
        assert_eq!(c.verdict, Verdict::Complete);
    }

    #[test]
    fn verify_examples() {
        let cfg = RunConfig::default();
        let g = catalog("heis", 3).unwrap();
        assert_eq!(
            verify(&g, fam(&g, &["x", "z"]), &cfg).unwrap().verdict,
            Verdict::Complete
        );
        let bad = verify(&g, fam(&g, &["x", "y"]), &cfg).unwrap();
        assert_eq!(bad.verdict, Verdict::Failed);
        assert_eq!(bad.commutativity.failures[0].bracket, "z");
        let a = catalog("abelian", 2).unwrap();
        let c = verify(&a, fam(&a, &["x1", "x1^2"]), &cfg).unwrap();
        assert_eq!((c.independence.rank, c.verdict), (1, Verdict::Incomplete));
    }

    #[test]
    fn twisted_heisenberg_pipeline() {
        let labels = ["h1", "h2", "x1", "x2", "y1", "y2", "z"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let e = |k: usize, c: i64| {
            let mut w = vec![RatFunc::zero(); 7];
            w[k] = RatFunc::int(c);
            w
        };
        let g = LieAlgebra::new(
            labels,
            vec![],
            [
                (0, 2, e(4, 1)),
                (0, 4, e(2, -1)),
                (1, 3, e(5, 1)),
                (1, 5, e(3, -1)),
                (2, 4, e(6, 1)),
                (3, 5, e(6, 1)),
                (0, 1, e(6, 1)),
            ],
        )
        .unwrap();
        let c = construct(&g, None, &RunConfig::default()).unwrap();
        assert_eq!(c.verdict, Verdict::Complete, "{}", c.to_json_string());
        assert_eq!(c.trace[0].step, "heis");
        assert_eq!(c.trace[0].dim_after, 3);
    }

    #[test]
    fn deterministic_certificates() {
        let g = catalog("oscillator", 4).unwrap();
        let cfg = RunConfig {
            seed: 7,
            ..RunConfig::default()
        };
        let a = construct(&g, None, &cfg).unwrap().to_json_string();
        let b = construct(&g, None, &cfg).unwrap().to_json_string();
        assert_eq!(a, b);
    }
}
