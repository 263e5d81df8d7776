//! The Lie-Poisson bracket on polynomial functions on `g*`, index and
//! independence ranks, and the count `l(X)`.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{random_int, Rng, RunConfig};
use crate::exact::{rank_q, MatK, Poly, RatFunc, Rational, VarId};
use crate::liealg::LieAlgebra;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PoissonError {
    #[error("dim X + invariant degree = {dim_x} + {invariants} is odd")]
    ParityViolation { dim_x: usize, invariants: usize },
    #[error("every sampled point hit a vanishing denominator")]
    AllPointsSingular,
    #[error("the family is empty")]
    EmptyFamily,
}

/// Where a family member came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Argshift,
    HeisLift,
    ComPullback,
    HBasis,
    VplusBasis,
    Invariant,
    Coordinate,
    User,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PolyFamily {
    members: Vec<Poly>,
    provenance: Vec<Provenance>,
}

impl PolyFamily {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_members(members: Vec<Poly>, tag: Provenance) -> Self {
        let provenance = vec![tag; members.len()];
        PolyFamily {
            members,
            provenance,
        }
    }

    /// Appends a member; zero polynomials are skipped.
    pub fn push(&mut self, p: Poly, tag: Provenance) {
        if !p.is_zero() {
            self.members.push(p);
            self.provenance.push(tag);
        }
    }

    pub fn extend(&mut self, other: PolyFamily) {
        self.members.extend(other.members);
        self.provenance.extend(other.provenance);
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Poly] {
        &self.members
    }

    pub fn provenance(&self) -> &[Provenance] {
        &self.provenance
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Poly, Provenance)> {
        self.members.iter().zip(self.provenance.iter().copied())
    }
}

/// Central coordinates fixed to values, describing the slice of `g*` a
/// family lives on.
pub type Pins = [(usize, RatFunc)];

/// Entry `(i, j)` is the linear function `sum_k c_ij^k x_k`.
pub fn kirillov_matrix(g: &LieAlgebra) -> MatK {
    let n = g.dim();
    let table = kirillov_entries(g, &[]);
    let mut m = MatK::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, table[i * n + j].clone());
        }
    }
    m
}

/// Kirillov entries with pinned coordinates replaced by their values.
pub fn kirillov_entries(g: &LieAlgebra, pins: &Pins) -> Vec<RatFunc> {
    let n = g.dim();
    let pinned: BTreeMap<usize, &RatFunc> = pins.iter().map(|(i, v)| (*i, v)).collect();
    let mut out = vec![RatFunc::zero(); n * n];
    for i in 0..n {
        for j in i + 1..n {
            let mut e = RatFunc::zero();
            for (k, c) in g.basis_bracket(i, j).iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let x = match pinned.get(&k) {
                    Some(v) => (*v).clone(),
                    None => RatFunc::from_poly(Poly::coord(k)),
                };
                e = &e + &(c * &x);
            }
            out[j * n + i] = -&e;
            out[i * n + j] = e;
        }
    }
    out
}

/// Bracket evaluator with the Kirillov entries computed once.
pub struct Bracket<'a> {
    n: usize,
    entries: Vec<RatFunc>,
    _g: &'a LieAlgebra,
}

impl<'a> Bracket<'a> {
    pub fn new(g: &'a LieAlgebra, pins: &Pins) -> Self {
        Bracket {
            n: g.dim(),
            entries: kirillov_entries(g, pins),
            _g: g,
        }
    }

    pub fn gradient(&self, p: &Poly) -> Vec<Poly> {
        (0..self.n).map(|i| p.diff(VarId::coord(i))).collect()
    }

    /// `{p, q} = sum_{i,j} d_i p d_j q K_ij`.
    pub fn apply(&self, p: &Poly, q: &Poly) -> RatFunc {
        self.apply_gradients(&self.gradient(p), &self.gradient(q))
    }

    pub fn apply_gradients(&self, dp: &[Poly], dq: &[Poly]) -> RatFunc {
        let n = self.n;
        // numerators grouped by denominator of the structure constants
        let mut groups: HashMap<Poly, Poly> = HashMap::new();
        for i in 0..n {
            if dp[i].is_zero() {
                continue;
            }
            for j in 0..n {
                let k = &self.entries[i * n + j];
                if k.is_zero() || dq[j].is_zero() {
                    continue;
                }
                let t = &(&dp[i] * &dq[j]) * k.numer();
                let slot = groups.entry(k.denom().clone()).or_insert_with(Poly::zero);
                *slot = &*slot + &t;
            }
        }
        let mut keys: Vec<&Poly> = groups.keys().collect();
        keys.sort_by_key(|d| d.to_string());
        keys.into_iter().fold(RatFunc::zero(), |acc, d| {
            let num = &groups[d];
            if num.is_zero() {
                acc
            } else {
                &acc + &RatFunc::new(num.clone(), d.clone()).expect("nonzero denominator")
            }
        })
    }
}

pub fn poisson_bracket(g: &LieAlgebra, p: &Poly, q: &Poly) -> RatFunc {
    Bracket::new(g, &[]).apply(p, q)
}

pub fn poisson_bracket_on(g: &LieAlgebra, pins: &Pins, p: &Poly, q: &Poly) -> RatFunc {
    Bracket::new(g, pins).apply(p, q)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexReport {
    pub index: usize,
    pub sampled_rank: usize,
    pub symbolic_rank: Option<usize>,
}

/// `ind g = dim g - generic rank of the Kirillov matrix`.
pub fn index(g: &LieAlgebra, cfg: &RunConfig, rng: &mut Rng) -> Result<IndexReport, PoissonError> {
    index_on(g, &[], cfg, rng)
}

/// Index of the Poisson structure restricted to a central slice.
pub fn index_on(
    g: &LieAlgebra,
    pins: &Pins,
    cfg: &RunConfig,
    rng: &mut Rng,
) -> Result<IndexReport, PoissonError> {
    let n = g.dim();
    let entries = kirillov_entries(g, pins);
    let mut best: Option<usize> = None;
    let mut attempts = 0;
    let mut done = 0;
    while done < cfg.trials && attempts < cfg.trials * 4 {
        attempts += 1;
        let point = sample_assignment(g, rng, cfg.coeff_range);
        let mut rows = Vec::with_capacity(n);
        let mut singular = false;
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                match entries[i * n + j]
                    .eval(&point)
                    .expect("complete assignment")
                {
                    Some(v) => row.push(v),
                    None => singular = true,
                }
            }
            rows.push(row);
        }
        if singular {
            continue;
        }
        done += 1;
        let r = rank_q(&rows);
        best = Some(best.map_or(r, |b| b.max(r)));
    }
    let sampled = best.ok_or(PoissonError::AllPointsSingular)?;
    let symbolic = (n <= cfg.symbolic_rank_cutoff).then(|| {
        let mut m = MatK::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, entries[i * n + j].clone());
            }
        }
        m.rank()
    });
    let rank = symbolic.unwrap_or(sampled);
    Ok(IndexReport {
        index: n - rank,
        sampled_rank: sampled,
        symbolic_rank: symbolic,
    })
}

/// Random integer values for all coordinates and parameters of `g`.
pub fn sample_assignment(g: &LieAlgebra, rng: &mut Rng, range: i64) -> BTreeMap<VarId, Rational> {
    let mut point = BTreeMap::new();
    for i in 0..g.dim() {
        point.insert(VarId::coord(i), random_int(rng, range));
    }
    for &k in g.params() {
        point.insert(VarId::param(k), random_int(rng, range));
    }
    point
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LValue {
    pub dim_x: usize,
    pub invariant_degrees: usize,
    pub l: usize,
}

/// `l(X) = (dim X + tr.deg of invariants) / 2` for `X` the slice of `g*`
/// cut out by `pinned` central coordinates.
pub fn l_value(dim: usize, index: usize, pinned: usize) -> Result<LValue, PoissonError> {
    let dim_x = dim - pinned;
    let invariants = index - pinned;
    if !(dim_x + invariants).is_multiple_of(2) {
        return Err(PoissonError::ParityViolation { dim_x, invariants });
    }
    Ok(LValue {
        dim_x,
        invariant_degrees: invariants,
        l: (dim_x + invariants) / 2,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankReport {
    pub rank: usize,
    pub samples: Vec<usize>,
    pub points: Vec<Vec<String>>,
}

/// Largest Jacobian rank of the family over random points.
pub fn independence_rank(
    family: &PolyFamily,
    g: &LieAlgebra,
    trials: usize,
    range: i64,
    rng: &mut Rng,
) -> Result<RankReport, PoissonError> {
    if family.is_empty() {
        return Err(PoissonError::EmptyFamily);
    }
    let n = g.dim();
    let grads: Vec<Vec<Poly>> = family
        .members()
        .iter()
        .map(|f| (0..n).map(|i| f.diff(VarId::coord(i))).collect())
        .collect();
    let mut params: Vec<u32> = g.params().to_vec();
    for f in family.members() {
        for v in f.vars() {
            if let VarId::Parameter(k) = v {
                if !params.contains(&k) {
                    params.push(k);
                }
            }
        }
    }
    let mut samples = Vec::new();
    let mut points = Vec::new();
    for _ in 0..trials.max(1) {
        let mut point = BTreeMap::new();
        for i in 0..n {
            point.insert(VarId::coord(i), random_int(rng, range));
        }
        for &k in &params {
            point.insert(VarId::param(k), random_int(rng, range));
        }
        let rows: Vec<Vec<Rational>> = grads
            .iter()
            .map(|row| {
                row.iter()
                    .map(|d| d.eval(&point).expect("complete assignment"))
                    .collect()
            })
            .collect();
        samples.push(rank_q(&rows));
        points.push(point.values().map(|v| v.to_string()).collect());
    }
    Ok(RankReport {
        rank: samples.iter().copied().max().unwrap_or(0),
        samples,
        points,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub i: usize,
    pub j: usize,
    pub bracket: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutativityReport {
    pub pairs_checked: usize,
    pub failures: Vec<Witness>,
    pub passed: bool,
}

/// All pairwise brackets, computed symbolically; pairs in lexicographic order.
pub fn commutativity_check(family: &PolyFamily, g: &LieAlgebra) -> CommutativityReport {
    commutativity_check_on(family, g, &[])
}

pub fn commutativity_check_on(
    family: &PolyFamily,
    g: &LieAlgebra,
    pins: &Pins,
) -> CommutativityReport {
    let br = Bracket::new(g, pins);
    let grads: Vec<Vec<Poly>> = family.members().iter().map(|f| br.gradient(f)).collect();
    let pairs: Vec<(usize, usize)> = (0..grads.len())
        .flat_map(|i| (i + 1..grads.len()).map(move |j| (i, j)))
        .collect();
    let results: Vec<Option<Witness>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let b = br.apply_gradients(&grads[i], &grads[j]);
            (!b.is_zero()).then(|| Witness {
                i,
                j,
                bracket: b.to_string_with(g.labels()),
            })
        })
        .collect();
    let failures: Vec<Witness> = results.into_iter().flatten().collect();
    CommutativityReport {
        pairs_checked: pairs.len(),
        passed: failures.is_empty(),
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_poly;
    use crate::liealg::catalog;

    fn p(g: &LieAlgebra, s: &str) -> Poly {
        parse_poly(s, g.labels()).unwrap()
    }

    #[test]
    fn heis3_kirillov_matrix() {
        let g = catalog("heis", 3).unwrap();
        let k = kirillov_matrix(&g);
        let z = RatFunc::from_poly(Poly::coord(2));
        assert_eq!(k.get(0, 1), &z);
        assert_eq!(k.get(1, 0), &-&z);
        assert!(k.get(0, 2).is_zero() && k.get(1, 2).is_zero());
        assert!(kirillov_matrix(&catalog("abelian", 3).unwrap()).is_zero());
    }

    #[test]
    fn sl2_kirillov_entries() {
        let g = catalog("sl", 2).unwrap();
        let k = kirillov_matrix(&g);
        assert_eq!(k.get(0, 1), &RatFunc::from_poly(p(&g, "h")));
        assert_eq!(k.get(0, 2), &RatFunc::from_poly(p(&g, "-2*e")));
        assert_eq!(k.get(1, 2), &RatFunc::from_poly(p(&g, "2*f")));
    }

    #[test]
    fn bracket_examples() {
        let g = catalog("heis", 3).unwrap();
        let b = poisson_bracket(&g, &p(&g, "x*y"), &p(&g, "x"));
        assert_eq!(b, RatFunc::from_poly(p(&g, "-x*z")));
        let q = p(&g, "x^2*y + z");
        assert!(poisson_bracket(&g, &q, &q).is_zero());

        let sl2 = catalog("sl", 2).unwrap();
        let casimir = p(&sl2, "h^2 + 4*e*f");
        for c in ["e", "f", "h"] {
            assert!(poisson_bracket(&sl2, &casimir, &p(&sl2, c)).is_zero());
        }
    }

    #[test]
    fn coordinate_brackets_match_kirillov() {
        let g = catalog("strictly_upper", 4).unwrap();
        let k = kirillov_matrix(&g);
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(
                    &poisson_bracket(&g, &Poly::coord(i), &Poly::coord(j)),
                    k.get(i, j)
                );
            }
        }
    }

    #[test]
    fn indices() {
        let cfg = RunConfig::default();
        let mut rng = cfg.rng();
        let cases = [
            ("heis", 3, 1),
            ("abelian", 3, 3),
            ("sl", 2, 1),
            ("strictly_upper", 4, 2),
            ("gl", 3, 3),
        ];
        for (name, size, ind) in cases {
            let r = index(&catalog(name, size).unwrap(), &cfg, &mut rng).unwrap();
            assert_eq!(r.index, ind, "{name}{size}");
            assert_eq!(Some(r.sampled_rank), r.symbolic_rank);
        }
    }

    #[test]
    fn l_values() {
        assert_eq!(l_value(9, 3, 0).unwrap().l, 6);
        assert_eq!(l_value(3, 1, 0).unwrap().l, 2);
        assert_eq!(l_value(4, 4, 0).unwrap().l, 4);
        assert_eq!(
            l_value(3, 3, 1).unwrap(),
            LValue {
                dim_x: 2,
                invariant_degrees: 2,
                l: 2
            }
        );
        assert!(matches!(
            l_value(3, 2, 0),
            Err(PoissonError::ParityViolation { .. })
        ));
    }

    #[test]
    fn independence_examples() {
        let cfg = RunConfig::default();
        let mut rng = cfg.rng();
        let a3 = catalog("abelian", 3).unwrap();
        let coords =
            PolyFamily::from_members((0..3).map(Poly::coord).collect(), Provenance::Coordinate);
        assert_eq!(
            independence_rank(&coords, &a3, 4, 100, &mut rng)
                .unwrap()
                .rank,
            3
        );
        let dep = PolyFamily::from_members(vec![p(&a3, "x1"), p(&a3, "x1^2")], Provenance::User);
        assert_eq!(
            independence_rank(&dep, &a3, 4, 100, &mut rng).unwrap().rank,
            1
        );
        let sl2 = catalog("sl", 2).unwrap();
        let fam =
            PolyFamily::from_members(vec![p(&sl2, "h^2 + 4*e*f"), p(&sl2, "f")], Provenance::User);
        assert_eq!(
            independence_rank(&fam, &sl2, 4, 100, &mut rng)
                .unwrap()
                .rank,
            2
        );
        assert!(matches!(
            independence_rank(&PolyFamily::new(), &sl2, 4, 100, &mut rng),
            Err(PoissonError::EmptyFamily)
        ));
    }

    #[test]
    fn commutativity_examples() {
        let g = catalog("heis", 3).unwrap();
        let good = PolyFamily::from_members(vec![p(&g, "z"), p(&g, "x")], Provenance::User);
        let r = commutativity_check(&good, &g);
        assert!(r.passed);
        assert_eq!(r.pairs_checked, 1);
        let bad = PolyFamily::from_members(vec![p(&g, "x"), p(&g, "y")], Provenance::User);
        let r = commutativity_check(&bad, &g);
        assert!(!r.passed);
        assert_eq!(r.failures[0].bracket, "z");
        let sl2 = catalog("sl", 2).unwrap();
        let fam =
            PolyFamily::from_members(vec![p(&sl2, "h^2 + 4*e*f"), p(&sl2, "f")], Provenance::User);
        assert!(commutativity_check(&fam, &sl2).passed);
    }

    #[test]
    fn slice_bracket_uses_pinned_values() {
        // heis3 on the slice z = 2: {x, y} = 2
        let g = catalog("heis", 3).unwrap();
        let b = poisson_bracket_on(
            &g,
            &[(2, RatFunc::int(2))],
            &Poly::coord(0),
            &Poly::coord(1),
        );
        assert_eq!(b, RatFunc::int(2));
    }
}
