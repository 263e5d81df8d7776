//! Invariants of classical matrix algebras and the argument shift method.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{random_point, RunConfig};
use crate::exact::{rank_q, rat, substitute, BasisSolver, Poly, RatFunc, Rational, VarId};
use crate::liealg::{catalog, realization, LieAlgebra, LieError};
use crate::poisson::{
    commutativity_check, independence_rank, index, poisson_bracket, CommutativityReport,
    PoissonError, PolyFamily, Provenance, RankReport,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ArgshiftError {
    #[error("invariant #{0} does not Poisson-commute with every coordinate")]
    NotVerifiedInvariant(usize),
    #[error("no shift vector reached rank {target} (best {achieved}) within the retry budget")]
    RetryBudgetExhausted { achieved: usize, target: usize },
    #[error("no built-in invariants for `{0}`")]
    NotClassical(String),
    #[error("expected a vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Poisson(#[from] PoissonError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InvariantSource {
    BuiltinClassical,
    UserSupplied,
    AbelianTrivial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantSet {
    pub generators: Vec<Poly>,
    pub source: InvariantSource,
}

impl InvariantSet {
    /// Accepts user polynomials after checking `{F, x_i} = 0` for all `i`.
    pub fn verified(
        g: &LieAlgebra,
        generators: Vec<Poly>,
        source: InvariantSource,
    ) -> Result<Self, ArgshiftError> {
        for (k, f) in generators.iter().enumerate() {
            for i in 0..g.dim() {
                if !poisson_bracket(g, f, &Poly::coord(i)).is_zero() {
                    return Err(ArgshiftError::NotVerifiedInvariant(k));
                }
            }
        }
        Ok(InvariantSet { generators, source })
    }

    pub fn abelian(g: &LieAlgebra) -> Result<Self, ArgshiftError> {
        Self::verified(
            g,
            (0..g.dim()).map(Poly::coord).collect(),
            InvariantSource::AbelianTrivial,
        )
    }
}

/// Free generators of the invariant polynomials of `gl`, `sl`, `so`, `sp`
/// in the coordinates of `catalog(name, n)`.
///
/// A covector is identified with the matrix `X` satisfying
/// `x_a = tr(X Y_a)` for the basis matrices `Y_a`; generators are
/// coefficients of the characteristic polynomial of `X` (and the Pfaffian
/// for even orthogonal algebras), scaled to primitive integer form.
pub fn classical_invariants(name: &str, n: usize) -> Result<InvariantSet, ArgshiftError> {
    let real =
        realization(name, n).ok_or_else(|| ArgshiftError::NotClassical(format!("{name}{n}")))?;
    let g = catalog(name, n)?;
    let dim = real.basis.len();
    let size = real.size;

    let gram: Vec<Vec<RatFunc>> = (0..dim)
        .map(|a| {
            (0..dim)
                .map(|b| RatFunc::constant(trace_product(&real.basis[a], &real.basis[b], size)))
                .collect()
        })
        .collect();
    // X = sum_a c_a Y_a with G c = x
    let solver = BasisSolver::new(dim, &gram).expect("trace form is nondegenerate");
    let mut coeffs = vec![Poly::zero(); dim];
    for b in 0..dim {
        let mut e = vec![RatFunc::zero(); dim];
        e[b] = RatFunc::one();
        // row b of G^{-1} (G is symmetric)
        let col = solver.coords(&e).expect("invertible");
        for a in 0..dim {
            if let Some(c) = col[a].constant_value() {
                coeffs[a] = &coeffs[a] + &Poly::coord(b).scale(&c);
            }
        }
    }
    let mut x = vec![vec![Poly::zero(); size]; size];
    for a in 0..dim {
        for i in 0..size {
            for j in 0..size {
                let y = &real.basis[a][i * size + j];
                if *y != rat(0) {
                    x[i][j] = &x[i][j] + &coeffs[a].scale(y);
                }
            }
        }
    }

    let e = char_coefficients(&x);
    let degrees: Vec<usize> = match name {
        "gl" => (1..=size).collect(),
        "sl" => (2..=size).collect(),
        "so" | "sp" => (2..=size).step_by(2).collect(),
        _ => unreachable!(),
    };
    let mut generators: Vec<Poly> = degrees
        .iter()
        .map(|&k| {
            if name == "so" && k == size {
                pfaffian(&x, &(0..size).collect::<Vec<_>>())
            } else {
                e[k].clone()
            }
        })
        .collect();
    for p in generators.iter_mut() {
        *p = normalize(p);
    }
    InvariantSet::verified(&g, generators, InvariantSource::BuiltinClassical)
}

fn normalize(p: &Poly) -> Poly {
    let q = p.primitive();
    if q.leading_coefficient() < rat(0) {
        -q
    } else {
        q
    }
}

fn trace_product(a: &[Rational], b: &[Rational], n: usize) -> Rational {
    let mut s = rat(0);
    for i in 0..n {
        for k in 0..n {
            s += &a[i * n + k] * &b[k * n + i];
        }
    }
    s
}

/// `e[k]` with `det(lambda - X) = sum_k (-1)^k e[k] lambda^(n-k)`, by
/// Faddeev-LeVerrier.
fn char_coefficients(x: &[Vec<Poly>]) -> Vec<Poly> {
    let n = x.len();
    let identity = |c: &Poly| -> Vec<Vec<Poly>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { c.clone() } else { Poly::zero() })
                    .collect()
            })
            .collect()
    };
    let mut c = vec![Poly::zero(); n + 1];
    c[n] = Poly::one();
    let mut m = identity(&Poly::zero());
    for k in 1..=n {
        let am = mat_mul(x, &m);
        m = am;
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = &row[i] + &c[n - k + 1];
        }
        let t = mat_mul(x, &m);
        let tr = (0..n).fold(Poly::zero(), |acc, i| &acc + &t[i][i]);
        c[n - k] = tr.scale(&Rational::new((-1).into(), (k as i64).into()));
    }
    (0..=n)
        .map(|k| {
            if k % 2 == 0 {
                c[n - k].clone()
            } else {
                -&c[n - k]
            }
        })
        .collect()
}

fn mat_mul(a: &[Vec<Poly>], b: &[Vec<Poly>]) -> Vec<Vec<Poly>> {
    let n = a.len();
    let mut out = vec![vec![Poly::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] = &out[i][j] + &(&a[i][k] * &b[k][j]);
                }
            }
        }
    }
    out
}

fn pfaffian(x: &[Vec<Poly>], idx: &[usize]) -> Poly {
    if idx.is_empty() {
        return Poly::one();
    }
    let first = idx[0];
    let mut total = Poly::zero();
    for pos in 1..idx.len() {
        let j = idx[pos];
        if x[first][j].is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx[1..].iter().copied().filter(|&k| k != j).collect();
        let term = &x[first][j] * &pfaffian(x, &rest);
        total = if pos % 2 == 1 {
            &total + &term
        } else {
            &total - &term
        };
    }
    total
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftFamily {
    pub a: Vec<Rational>,
    pub family: PolyFamily,
    pub commutativity: CommutativityReport,
}

/// Taylor coefficients of `F(xi + t a)` in `t`, constants dropped.
pub fn shift_members(inv: &InvariantSet, a: &[Rational]) -> PolyFamily {
    let t = VarId::param(u32::MAX);
    let subst: BTreeMap<VarId, RatFunc> = a
        .iter()
        .enumerate()
        .map(|(i, ai)| {
            (
                VarId::coord(i),
                RatFunc::from_poly(&Poly::coord(i) + &Poly::var(t).scale(ai)),
            )
        })
        .collect();
    let mut fam = PolyFamily::new();
    for f in &inv.generators {
        let (expanded, _) = substitute(f, &subst);
        for c in expanded.coefficients_in(t) {
            if !c.is_constant() {
                fam.push(c, Provenance::Argshift);
            }
        }
    }
    fam
}

pub fn shift_family(
    g: &LieAlgebra,
    inv: &InvariantSet,
    a: &[Rational],
) -> Result<ShiftFamily, ArgshiftError> {
    if a.len() != g.dim() {
        return Err(ArgshiftError::DimensionMismatch {
            expected: g.dim(),
            got: a.len(),
        });
    }
    let family = shift_members(inv, a);
    let commutativity = commutativity_check(&family, g);
    Ok(ShiftFamily {
        a: a.to_vec(),
        family,
        commutativity,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompleteShift {
    pub shift: ShiftFamily,
    pub target_l: usize,
    pub index: usize,
    pub rank: RankReport,
    pub attempts: usize,
}

/// Draws shift vectors until the family reaches `(dim g + ind g) / 2`
/// independent members.
pub fn complete_on_dual(
    g: &LieAlgebra,
    inv: &InvariantSet,
    cfg: &RunConfig,
) -> Result<CompleteShift, ArgshiftError> {
    let mut rng = cfg.rng_for(1);
    let ind = index(g, cfg, &mut rng)?.index;
    let target = (g.dim() + ind) / 2;
    let mut best = 0;
    let mut range = cfg.shift_range;
    for attempt in 1..=cfg.retry_budget.max(1) {
        let a = random_point(&mut rng, g.dim(), range);
        let shift = shift_family(g, inv, &a)?;
        if !shift.family.is_empty() && shift.commutativity.passed {
            let rank = independence_rank(&shift.family, g, cfg.trials, cfg.coeff_range, &mut rng)?;
            best = best.max(rank.rank);
            if rank.rank == target {
                return Ok(CompleteShift {
                    shift,
                    target_l: target,
                    index: ind,
                    rank,
                    attempts: attempt,
                });
            }
        }
        range = range.saturating_mul(2);
    }
    Err(ArgshiftError::RetryBudgetExhausted {
        achieved: best,
        target,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub orbit_dim: usize,
    pub index_g: usize,
    pub index_stabilizer: usize,
    pub stabilizer_dim: usize,
    pub index_equality: bool,
    /// Shift vector and `dim V` of the successful draw, if any.
    pub shift: Option<Vec<String>>,
    pub dim_v: usize,
    pub attempts: usize,
    pub complete: bool,
}

/// Checks whether shifted invariants restrict to a complete family on the
/// coadjoint orbit through `xi`.
pub fn orbit_criterion(
    g: &LieAlgebra,
    inv: &InvariantSet,
    xi: &[Rational],
    cfg: &RunConfig,
) -> Result<OrbitReport, ArgshiftError> {
    let n = g.dim();
    if xi.len() != n {
        return Err(ArgshiftError::DimensionMismatch {
            expected: n,
            got: xi.len(),
        });
    }
    let mut rng = cfg.rng_for(2);
    let xi_k: Vec<RatFunc> = xi.iter().cloned().map(RatFunc::constant).collect();
    let kir = g.kirillov_at(&xi_k);
    let kir_q: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| kir.get(i, j).constant_value().expect("rational point"))
                .collect()
        })
        .collect();
    let orbit_dim = rank_q(&kir_q);
    let stab = g.stabilizer(&xi_k);
    let index_g = index(g, cfg, &mut rng)?.index;
    let index_stabilizer = index(&g.subalgebra(&stab)?, cfg, &mut rng)?.index;
    let index_equality = index_g == index_stabilizer;

    let mut report = OrbitReport {
        orbit_dim,
        index_g,
        index_stabilizer,
        stabilizer_dim: stab.dim(),
        index_equality,
        shift: None,
        dim_v: 0,
        attempts: 0,
        complete: false,
    };
    if orbit_dim == 0 {
        report.complete = index_equality;
        return Ok(report);
    }
    let point: BTreeMap<VarId, Rational> = xi
        .iter()
        .enumerate()
        .map(|(i, v)| (VarId::coord(i), v.clone()))
        .collect();
    let mut range = cfg.shift_range;
    for attempt in 1..=cfg.retry_budget.max(1) {
        report.attempts = attempt;
        let a = random_point(&mut rng, n, range);
        range = range.saturating_mul(2);
        let fam = shift_members(inv, &a);
        // pair d_xi F with the tangent vectors xi([e_i, .]) spanning g.xi
        let rows: Vec<Vec<Rational>> = fam
            .members()
            .iter()
            .map(|f| {
                let d: Vec<Rational> = (0..n)
                    .map(|j| {
                        f.diff(VarId::coord(j))
                            .eval(&point)
                            .expect("rational point")
                    })
                    .collect();
                (0..n)
                    .map(|i| (0..n).fold(rat(0), |acc, j| acc + &d[j] * &kir_q[i][j]))
                    .collect()
            })
            .collect();
        let dim_v = if rows.is_empty() { 0 } else { rank_q(&rows) };
        report.dim_v = report.dim_v.max(dim_v);
        if 2 * dim_v == orbit_dim {
            report.shift = Some(a.iter().map(|v| v.to_string()).collect());
            report.dim_v = dim_v;
            report.complete = index_equality;
            return Ok(report);
        }
    }
    Ok(report)
}
