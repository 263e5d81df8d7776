//! The two reduction steps: through a Heisenberg nilradical, and through a
//! commutative ideal (passing to a smaller algebra over a larger field).

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{
    clear_denominators, is_zero_vector, substitute, BasisSolver, MatK, Poly, RatFunc, VarId, Vector,
};
use crate::liealg::{HeisenbergBasis, LieAlgebra, LieError, Subspace};
use crate::poisson::{kirillov_entries, PolyFamily, Provenance};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReductionError {
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("subspace is not a commutative ideal with dim > 1 or non-central")]
    NotCommutativeIdeal,
    #[error("reduced algebra has dimension {after}, not below {before}")]
    NoDimensionDrop { before: usize, after: usize },
    #[error("internal check failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// One recursion step, as recorded in certificates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepDescriptor {
    pub step: String,
    pub dim_before: usize,
    pub dim_after: usize,
    pub params_added: usize,
    pub pinned: Vec<String>,
}

/// An algebra together with central coordinates fixed to values; the
/// Poisson variety is the corresponding slice of `g*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionState {
    pub algebra: LieAlgebra,
    pub pins: Vec<(usize, RatFunc)>,
    pub trace: Vec<StepDescriptor>,
}

impl ReductionState {
    pub fn new(algebra: LieAlgebra) -> Self {
        ReductionState {
            algebra,
            pins: Vec::new(),
            trace: Vec::new(),
        }
    }

    pub fn with_pins(
        algebra: LieAlgebra,
        pins: Vec<(usize, RatFunc)>,
    ) -> Result<Self, ReductionError> {
        let state = ReductionState {
            algebra,
            pins,
            trace: Vec::new(),
        };
        for (p, _) in &state.pins {
            if *p >= state.algebra.dim() || !is_central(&state.algebra, &state.algebra.unit(*p)) {
                return Err(ReductionError::PreconditionFailed(format!(
                    "pinned coordinate {p} is not central"
                )));
            }
        }
        let set: BTreeSet<usize> = state.pins.iter().map(|(p, _)| *p).collect();
        if set.len() != state.pins.len() {
            return Err(ReductionError::PreconditionFailed(
                "coordinate pinned twice".into(),
            ));
        }
        Ok(state)
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn pin_of(&self, i: usize) -> Option<&RatFunc> {
        self.pins.iter().find(|(p, _)| *p == i).map(|(_, v)| v)
    }

    pub fn unpinned(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| self.pin_of(i).is_none())
            .collect()
    }

    pub fn pinned_labels(&self) -> Vec<String> {
        self.pins
            .iter()
            .map(|(p, v)| format!("{}={}", self.algebra.labels()[*p], v))
            .collect()
    }

    /// Replaces pinned coordinates by their values.
    pub fn restrict(&self, f: &RatFunc) -> RatFunc {
        if self.pins.is_empty() {
            return f.clone();
        }
        let map: BTreeMap<VarId, RatFunc> = self
            .pins
            .iter()
            .map(|(p, v)| (VarId::coord(*p), v.clone()))
            .collect();
        let (n1, d1) = substitute(f.numer(), &map);
        let (n2, d2) = substitute(f.denom(), &map);
        RatFunc::new(&n1 * &d2, &d1 * &n2).expect("pinned values keep the denominator nonzero")
    }

    /// Poisson bracket of rational functions on the slice.
    pub fn bracket(&self, f: &RatFunc, h: &RatFunc) -> RatFunc {
        let n = self.dim();
        let k = kirillov_entries(&self.algebra, &self.pins);
        let df: Vec<RatFunc> = (0..n).map(|i| f.diff(VarId::coord(i))).collect();
        let dh: Vec<RatFunc> = (0..n).map(|i| h.diff(VarId::coord(i))).collect();
        let mut s = RatFunc::zero();
        for i in 0..n {
            if df[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if !dh[j].is_zero() && !k[i * n + j].is_zero() {
                    s = &s + &(&(&df[i] * &dh[j]) * &k[i * n + j]);
                }
            }
        }
        self.restrict(&s)
    }

    /// All parameters used by the algebra or by pinned values.
    pub fn all_params(&self) -> BTreeSet<u32> {
        let mut s: BTreeSet<u32> = self.algebra.params().iter().copied().collect();
        for (_, v) in &self.pins {
            for var in v.vars() {
                if let VarId::Parameter(k) = var {
                    s.insert(k);
                }
            }
        }
        s
    }

    pub fn fresh_param(&self) -> u32 {
        self.all_params().iter().max().map_or(1, |m| m + 1)
    }
}

fn is_central(g: &LieAlgebra, v: &[RatFunc]) -> bool {
    (0..g.dim()).all(|j| is_zero_vector(&g.br(v, &g.unit(j))))
}

/// The linear function `gamma -> gamma(v)`.
pub fn gamma(v: &[RatFunc]) -> RatFunc {
    v.iter().enumerate().fold(RatFunc::zero(), |acc, (k, c)| {
        if c.is_zero() {
            acc
        } else {
            &acc + &(c * &RatFunc::from_poly(Poly::coord(k)))
        }
    })
}

/// `gamma(v)` scaled to a primitive polynomial.
pub fn linear_form(v: &[RatFunc]) -> Poly {
    let coeffs = clear_denominators(v);
    let p = coeffs
        .iter()
        .enumerate()
        .fold(Poly::zero(), |acc, (k, c)| &acc + &(c * &Poly::coord(k)));
    normalize(&p)
}

/// Primitive integer form with positive leading coefficient.
pub fn normalize(p: &Poly) -> Poly {
    if p.is_zero() {
        return p.clone();
    }
    let q = p.primitive();
    if q.leading_coefficient() < crate::exact::rat(0) {
        -q
    } else {
        q
    }
}

fn unique_label(base: &str, taken: &mut BTreeSet<String>) -> String {
    let mut label = base.to_string();
    let mut k = 1;
    while taken.contains(&label) {
        k += 1;
        label = format!("{base}_{k}");
    }
    taken.insert(label.clone());
    label
}

fn unit_index(v: &[RatFunc]) -> Option<usize> {
    let nz: Vec<usize> = (0..v.len()).filter(|&i| !v[i].is_zero()).collect();
    (nz.len() == 1 && v[nz[0]].is_one()).then(|| nz[0])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeisReduction {
    pub parent: ReductionState,
    pub quotient: ReductionState,
    /// Image of each quotient coordinate, a rational function on `g*`
    /// (restricted to the parent slice) with a power of `z` as denominator.
    pub lifts: Vec<RatFunc>,
    pub vplus: Vec<Vector>,
    pub z: Vector,
    /// `gamma(z)` on the parent slice.
    pub zeta: RatFunc,
    pub z_pinned: bool,
    /// Whether the quotient had to keep `z` (a central extension of `g/n`).
    pub z_in_quotient: bool,
    heis: HeisenbergBasis,
    kept: Vec<usize>,
}

/// Reduces through the Heisenberg nilradical `n = <x_i, y_i, z>` with `z`
/// central in `g`.
///
/// For `u` in the complement `l` of `n`, the lift is `gamma(exp(-ad eta) u)`
/// with `eta = sum (gamma(y_i) x_i - gamma(x_i) y_i) / gamma(z)`; it is
/// constant on `N`-orbits. The lifts satisfy
/// `{L(u_a), L(u_b)} = L([u_a, u_b]_l) + kappa_ab gamma(z)`; when some
/// `kappa_ab` is nonzero the quotient keeps `z` as a central extension.
pub fn heis_reduce(
    state: &ReductionState,
    hb: &HeisenbergBasis,
) -> Result<HeisReduction, ReductionError> {
    let g = &state.algebra;
    let dim = g.dim();
    if !hb.verify(g) {
        return Err(ReductionError::PreconditionFailed(
            "not a Heisenberg basis".into(),
        ));
    }
    if !is_central(g, &hb.z) {
        return Err(ReductionError::PreconditionFailed(
            "z is not central in g".into(),
        ));
    }
    let zspan = Subspace::span(dim, std::slice::from_ref(&hb.z));
    let mut z_pinned = false;
    for (p, v) in &state.pins {
        if !zspan.contains(&g.unit(*p)) {
            return Err(ReductionError::PreconditionFailed(
                "a pinned central coordinate lies outside <z>".into(),
            ));
        }
        if v.is_zero() {
            return Err(ReductionError::PreconditionFailed(
                "z is pinned to 0".into(),
            ));
        }
        z_pinned = true;
    }

    let k = hb.k();
    let mut nvecs: Vec<Vector> = hb.x.clone();
    nvecs.extend(hb.y.iter().cloned());
    nvecs.push(hb.z.clone());
    let n_sub = Subspace::span(dim, &nvecs);
    let kept = n_sub.complement_indices();
    let m = kept.len();
    let mut adapted: Vec<Vector> = kept.iter().map(|&i| g.unit(i)).collect();
    adapted.extend(nvecs.iter().cloned());
    let solver = BasisSolver::new(dim, &adapted).expect("complement is a basis");
    let zidx = adapted.len() - 1;
    let cz = |v: &Vector| -> RatFunc { solver.coords(v).expect("basis")[zidx].clone() };

    let zeta_full = gamma(&hb.z);
    let mut eta = vec![RatFunc::zero(); dim];
    for i in 0..k {
        let gy = gamma(&hb.y[i]);
        let gx = gamma(&hb.x[i]);
        for c in 0..dim {
            eta[c] = &eta[c] + &(&(&gy * &hb.x[i][c]) - &(&gx * &hb.y[i][c]));
        }
    }
    let two_zeta_sq = &(&zeta_full * &zeta_full) * &RatFunc::int(2);
    let mut lifts = Vec::with_capacity(m + 1);
    let mut nparts = Vec::with_capacity(m);
    for &a in &kept {
        let u = g.unit(a);
        let e1 = g.br(&eta, &u);
        let e2 = g.br(&eta, &e1);
        let l = &(&gamma(&u) - &(&gamma(&e1) / &zeta_full)) + &(&gamma(&e2) / &two_zeta_sq);
        lifts.push(state.restrict(&l));
        let mut nu = vec![RatFunc::zero(); dim];
        for i in 0..k {
            let cx = cz(&g.br(&hb.x[i], &u));
            let cy = cz(&g.br(&hb.y[i], &u));
            for c in 0..dim {
                nu[c] = &nu[c] - &(&(&cx * &hb.y[i][c]) - &(&cy * &hb.x[i][c]));
            }
        }
        nparts.push(nu);
    }

    let mut lpart = vec![vec![vec![RatFunc::zero(); m]; m]; m];
    let mut kappa = vec![vec![RatFunc::zero(); m]; m];
    for a in 0..m {
        for b in a + 1..m {
            let w = g.br(&g.unit(kept[a]), &g.unit(kept[b]));
            let c = solver.coords(&w).expect("basis");
            let kab = &c[zidx] + &cz(&g.br(&nparts[b], &nparts[a]));
            lpart[a][b] = c[..m].to_vec();
            lpart[b][a] = c[..m].iter().map(|x| -x).collect();
            kappa[b][a] = -&kab;
            kappa[a][b] = kab;
        }
    }
    let twisted = kappa.iter().flatten().any(|x| !x.is_zero());
    let zeta = state.restrict(&zeta_full);

    let mut taken = BTreeSet::new();
    let mut labels: Vec<String> = kept
        .iter()
        .map(|&i| unique_label(&g.labels()[i], &mut taken))
        .collect();
    let q_dim = if twisted { m + 1 } else { m };
    let mut table = vec![vec![RatFunc::zero(); q_dim]; q_dim * q_dim];
    for a in 0..m {
        for b in 0..m {
            let mut v = lpart[a][b].clone();
            if twisted {
                v.push(kappa[a][b].clone());
            }
            table[a * q_dim + b] = v;
        }
    }
    let mut q_pins = Vec::new();
    if twisted {
        let zl = match unit_index(&hb.z) {
            Some(i) => g.labels()[i].clone(),
            None => "z".to_string(),
        };
        labels.push(unique_label(&zl, &mut taken));
        lifts.push(zeta.clone());
        if z_pinned {
            q_pins.push((m, zeta.clone()));
        }
    }
    let q = LieAlgebra::from_table(labels, g.params().to_vec(), table)
        .map_err(|e| ReductionError::Verification(format!("quotient bracket: {e}")))?;
    let quotient = ReductionState::with_pins(q, q_pins)?;
    Ok(HeisReduction {
        parent: state.clone(),
        quotient,
        lifts,
        vplus: hb.x.clone(),
        z: hb.z.clone(),
        zeta,
        z_pinned,
        z_in_quotient: twisted,
        heis: hb.clone(),
        kept,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeisCheck {
    pub n_invariance: bool,
    pub homomorphism: bool,
}

impl HeisReduction {
    pub fn descriptor(&self) -> StepDescriptor {
        StepDescriptor {
            step: "heis".into(),
            dim_before: self.parent.dim(),
            dim_after: self.quotient.dim(),
            params_added: 0,
            pinned: self.quotient.pinned_labels(),
        }
    }

    /// Symbolic checks: every lift (and its cleared numerator) commutes with
    /// `n`, and lifts respect the quotient bracket.
    pub fn verify(&self) -> HeisCheck {
        let p = &self.parent;
        let mut nvecs: Vec<&Vector> = self.heis.x.iter().chain(self.heis.y.iter()).collect();
        nvecs.push(&self.z);
        let n_funcs: Vec<RatFunc> = nvecs.iter().map(|v| p.restrict(&gamma(v))).collect();
        let n_invariance = self.lifts.iter().all(|l| {
            let cleared = RatFunc::from_poly(l.numer().clone());
            n_funcs
                .iter()
                .all(|v| p.bracket(l, v).is_zero() && p.bracket(&cleared, v).is_zero())
        });
        let q = &self.quotient.algebra;
        let qd = q.dim();
        let mut homomorphism = true;
        'outer: for a in 0..qd {
            for b in a + 1..qd {
                let lhs = p.bracket(&self.lifts[a], &self.lifts[b]);
                let rhs = q
                    .basis_bracket(a, b)
                    .iter()
                    .zip(&self.lifts)
                    .fold(RatFunc::zero(), |acc, (c, l)| &acc + &(c * l));
                if lhs != rhs {
                    homomorphism = false;
                    break 'outer;
                }
            }
        }
        HeisCheck {
            n_invariance,
            homomorphism,
        }
    }
}

/// Lifts a family from the quotient and adds `V+` (and `z` unless it is
/// pinned or already carried by the quotient).
pub fn heis_assemble(red: &HeisReduction, sub_family: &PolyFamily) -> PolyFamily {
    let map: BTreeMap<VarId, RatFunc> = red
        .lifts
        .iter()
        .enumerate()
        .map(|(j, l)| (VarId::coord(j), l.clone()))
        .collect();
    let mut out = PolyFamily::new();
    for f in sub_family.members() {
        let (num, _) = substitute(f, &map);
        out.push(normalize(&num), Provenance::HeisLift);
    }
    for x in &red.vplus {
        out.push(linear_form(x), Provenance::VplusBasis);
    }
    if !red.z_pinned && !red.z_in_quotient {
        out.push(linear_form(&red.z), Provenance::VplusBasis);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComReduction {
    pub parent: ReductionState,
    pub h: Subspace,
    /// Basis of `h`: the part spanned by pinned coordinates first.
    pub h_basis: Vec<Vector>,
    /// `alpha(h_l)`: pinned values or fresh parameters.
    pub alphas: Vec<RatFunc>,
    /// Fresh parameters and the index of the `h` basis vector each is dual to.
    pub new_params: Vec<(u32, usize)>,
    pub ghat: Subspace,
    pub tilde: ReductionState,
    /// Representatives in `g (x) K(alpha)` of the reduced basis, in order.
    pub reps: Vec<Vector>,
    pub w_index: usize,
    pinned_in_h: usize,
    system: MatK,
}

/// Reduces through a commutative ideal `h`: with `alpha` a generic point of
/// `h*`, `g~ = {xi : alpha([xi, h]) = 0} / {theta in h : alpha(theta) = 0}`,
/// where the class `w` of `theta` with `alpha(theta) = 1` is central and is
/// pinned to 1.
pub fn com_reduce(state: &ReductionState, h: &Subspace) -> Result<ComReduction, ReductionError> {
    let g = &state.algebra;
    let dim = g.dim();
    if h.is_zero() || !g.is_ideal(h) || !g.is_commutative(h) {
        return Err(ReductionError::NotCommutativeIdeal);
    }
    let full = Subspace::full(dim);
    if h.dim() == 1 && g.bracket_span(&full, h).is_zero() {
        return Err(ReductionError::NotCommutativeIdeal);
    }

    let pin_units: Vec<Vector> = state.pins.iter().map(|(p, _)| g.unit(*p)).collect();
    let pinned_span = Subspace::span(dim, &pin_units);
    let pinned_h = h.intersect(&pinned_span);
    let mut h_basis: Vec<Vector> = pinned_h.basis().to_vec();
    let mut span = pinned_h.clone();
    for v in h.basis() {
        if span.insert(v) {
            h_basis.push(v.clone());
        }
    }
    let m = h_basis.len();
    let pinned_in_h = pinned_h.dim();
    let mut fresh = state.fresh_param();
    let mut alphas = Vec::with_capacity(m);
    let mut new_params = Vec::new();
    for (l, v) in h_basis.iter().enumerate() {
        if l < pinned_in_h {
            let val = state
                .pins
                .iter()
                .fold(RatFunc::zero(), |acc, (p, x)| &acc + &(&v[*p] * x));
            alphas.push(val);
        } else {
            alphas.push(RatFunc::param(fresh));
            new_params.push((fresh, l));
            fresh += 1;
        }
    }

    // M[l][i] = alpha([e_i, h_l])
    let hsolve = BasisSolver::new(dim, &h_basis).expect("independent");
    let mut system = MatK::zeros(m, dim);
    for i in 0..dim {
        for (l, hl) in h_basis.iter().enumerate() {
            let c = hsolve.coords(&g.br(&g.unit(i), hl)).expect("h is an ideal");
            system.set(l, i, crate::exact::dot(&c, &alphas));
        }
    }
    let ghat = Subspace::span(dim, &system.kernel());
    if !ghat.contains_subspace(h) || !ghat.contains_subspace(&pinned_span) {
        return Err(ReductionError::Verification(
            "h or pinned directions outside g^".into(),
        ));
    }

    let l0 = alphas
        .iter()
        .position(|a| !a.is_zero())
        .ok_or_else(|| ReductionError::PreconditionFailed("alpha vanishes on h".into()))?;
    let theta_w: Vector = h_basis[l0].iter().map(|x| x / &alphas[l0]).collect();
    let hhat: Vec<Vector> = (0..m)
        .filter(|&l| l != l0)
        .map(|l| {
            let r = &alphas[l] / &alphas[l0];
            h_basis[l]
                .iter()
                .zip(&h_basis[l0])
                .map(|(a, b)| a - &(&r * b))
                .collect()
        })
        .collect();

    let mut span = h.clone();
    let mut carried: Vec<(usize, RatFunc)> = Vec::new();
    for (p, v) in &state.pins {
        if span.insert(&g.unit(*p)) {
            carried.push((*p, v.clone()));
        }
    }
    let mut reps: Vec<Vector> = Vec::new();
    for v in ghat.basis() {
        if span.insert(v) {
            reps.push(v.clone());
        }
    }

    let r = reps.len();
    let mut order: Vec<Vector> = reps.clone();
    order.push(theta_w.clone());
    order.extend(carried.iter().map(|(p, _)| g.unit(*p)));
    let mut adapted = hhat.clone();
    adapted.extend(order.iter().cloned());
    if adapted.len() != ghat.dim() {
        return Err(ReductionError::Verification(
            "adapted basis of g^ has wrong size".into(),
        ));
    }
    let solver = BasisSolver::new(dim, &adapted).expect("adapted basis");
    let skip = hhat.len();
    let td = order.len();
    let mut table = vec![vec![RatFunc::zero(); td]; td * td];
    for a in 0..td {
        for b in a + 1..td {
            let c = solver.coords(&g.br(&order[a], &order[b])).ok_or_else(|| {
                ReductionError::Verification("g^ is not closed under the bracket".into())
            })?;
            let v: Vector = c[skip..].to_vec();
            table[b * td + a] = v.iter().map(|x| -x).collect();
            table[a * td + b] = v;
        }
    }

    let mut taken = BTreeSet::new();
    let mut labels: Vec<String> = reps
        .iter()
        .enumerate()
        .map(|(j, v)| match unit_index(v) {
            Some(i) => unique_label(&g.labels()[i], &mut taken),
            None => unique_label(&format!("u{}", j + 1), &mut taken),
        })
        .collect();
    labels.push(unique_label("w", &mut taken));
    for (p, _) in &carried {
        labels.push(unique_label(&g.labels()[*p], &mut taken));
    }
    let mut params: Vec<u32> = state.all_params().into_iter().collect();
    params.extend(new_params.iter().map(|(k, _)| *k));
    let tilde_alg = LieAlgebra::from_table(labels, params, table)
        .map_err(|e| ReductionError::Verification(format!("reduced bracket: {e}")))?;
    if tilde_alg.dim() >= dim {
        return Err(ReductionError::NoDimensionDrop {
            before: dim,
            after: tilde_alg.dim(),
        });
    }
    let mut pins = vec![(r, RatFunc::one())];
    for (c, (_, v)) in carried.iter().enumerate() {
        pins.push((r + 1 + c, v.clone()));
    }
    let tilde = ReductionState::with_pins(tilde_alg, pins)?;
    Ok(ComReduction {
        parent: state.clone(),
        h: h.clone(),
        h_basis,
        alphas,
        new_params,
        ghat,
        tilde,
        reps: order,
        w_index: r,
        pinned_in_h,
        system,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComCheck {
    pub jacobi: bool,
    pub w_central: bool,
    pub dimension_drop: bool,
    pub kernel_membership: bool,
    pub h_invariance: bool,
}

impl ComReduction {
    pub fn descriptor(&self) -> StepDescriptor {
        StepDescriptor {
            step: "com".into(),
            dim_before: self.parent.dim(),
            dim_after: self.tilde.dim(),
            params_added: self.new_params.len(),
            pinned: self.tilde.pinned_labels(),
        }
    }

    /// The `alpha -> h`-coordinate substitution.
    fn alpha_map(&self) -> BTreeMap<VarId, RatFunc> {
        self.new_params
            .iter()
            .map(|(k, l)| (VarId::param(*k), gamma(&self.h_basis[*l])))
            .collect()
    }

    /// Polynomial on `g*` pulled back from the reduced coordinate `j`.
    pub fn pulled_coordinate(&self, j: usize) -> Poly {
        let (num, _) = substitute(&clear_linear(&self.reps[j]), &self.alpha_map());
        normalize(&num)
    }

    pub fn verify(&self) -> ComCheck {
        let t = &self.tilde.algebra;
        let jacobi = LieAlgebra::from_table(
            t.labels().to_vec(),
            t.params().to_vec(),
            (0..t.dim())
                .flat_map(|i| (0..t.dim()).map(move |j| (i, j)))
                .map(|(i, j)| t.basis_bracket(i, j).clone())
                .collect(),
        )
        .is_ok();
        let w = t.unit(self.w_index);
        let w_central = (0..t.dim()).all(|j| is_zero_vector(&t.br(&w, &t.unit(j))));
        let dimension_drop = t.dim() < self.parent.dim();
        let kernel_membership = self
            .reps
            .iter()
            .all(|v| is_zero_vector(&self.system.mul_vec(v)));
        let hfuncs: Vec<RatFunc> = self
            .h_basis
            .iter()
            .map(|v| self.parent.restrict(&gamma(v)))
            .collect();
        let h_invariance = (0..self.w_index).all(|j| {
            let f = RatFunc::from_poly(self.pulled_coordinate(j));
            hfuncs
                .iter()
                .all(|hf| self.parent.bracket(&f, hf).is_zero())
        });
        ComCheck {
            jacobi,
            w_central,
            dimension_drop,
            kernel_membership,
            h_invariance,
        }
    }
}

/// `gamma(v)` with coefficient denominators (in the parameters) cleared.
fn clear_linear(v: &[RatFunc]) -> Poly {
    clear_denominators(v)
        .iter()
        .enumerate()
        .fold(Poly::zero(), |acc, (k, c)| &acc + &(c * &Poly::coord(k)))
}

/// Pulls a family on the reduced slice back to `g*` and appends the
/// unpinned part of a basis of `h`.
pub fn com_pullback(red: &ComReduction, sub_family: &PolyFamily) -> PolyFamily {
    let mut coord_map: BTreeMap<VarId, RatFunc> = BTreeMap::new();
    for (j, v) in red.reps.iter().enumerate().take(red.w_index) {
        coord_map.insert(VarId::coord(j), gamma(v));
    }
    for (p, v) in &red.tilde.pins {
        coord_map.insert(VarId::coord(*p), v.clone());
    }
    let alpha = red.alpha_map();
    let mut out = PolyFamily::new();
    for f in sub_family.members() {
        let (num, _) = substitute(f, &coord_map);
        let (num, _) = substitute(&num, &alpha);
        out.push(normalize(&num), Provenance::ComPullback);
    }
    for v in red.h_basis.iter().skip(red.pinned_in_h) {
        out.push(linear_form(v), Provenance::HBasis);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_poly;
    use crate::liealg::{catalog, heisenberg_in, heisenberg_recognize};
    use crate::poisson::commutativity_check;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| RatFunc::int(x)).collect()
    }

    #[test]
    fn heis3_whole_algebra() {
        let g = catalog("heis", 3).unwrap();
        let hb = heisenberg_recognize(&g).unwrap();
        let red = heis_reduce(&ReductionState::new(g.clone()), &hb).unwrap();
        assert_eq!(red.quotient.dim(), 0);
        assert!(red.lifts.is_empty());
        let fam = heis_assemble(&red, &PolyFamily::new());
        assert_eq!(fam.members(), &[Poly::coord(0), Poly::coord(2)]);
        assert!(commutativity_check(&fam, &g).passed);
    }

    #[test]
    fn heis3_with_pinned_z() {
        let g = catalog("heis", 3).unwrap();
        let hb = heisenberg_recognize(&g).unwrap();
        let state = ReductionState::with_pins(g, vec![(2, RatFunc::one())]).unwrap();
        let red = heis_reduce(&state, &hb).unwrap();
        let fam = heis_assemble(&red, &PolyFamily::new());
        assert_eq!(fam.members(), &[Poly::coord(0)]);
    }

    #[test]
    fn z_pinned_to_zero_is_rejected() {
        let g = catalog("heis", 3).unwrap();
        let hb = heisenberg_recognize(&g).unwrap();
        let state = ReductionState::with_pins(g, vec![(2, RatFunc::zero())]).unwrap();
        assert!(matches!(
            heis_reduce(&state, &hb),
            Err(ReductionError::PreconditionFailed(_))
        ));
    }

    #[test]
    fn heis3_plus_central_line() {
        let labels = ["x", "y", "z", "c"].iter().map(|s| s.to_string()).collect();
        let g = LieAlgebra::new(labels, vec![], [(0, 1, v(&[0, 0, 1, 0]))]).unwrap();
        let n = Subspace::span(4, &[v(&[1, 0, 0, 0]), v(&[0, 1, 0, 0]), v(&[0, 0, 1, 0])]);
        let hb = heisenberg_in(&g, &n).unwrap();
        let red = heis_reduce(&ReductionState::new(g), &hb).unwrap();
        assert_eq!(red.quotient.dim(), 1);
        assert!(red.quotient.algebra.is_abelian());
        assert_eq!(red.lifts, vec![RatFunc::from_poly(Poly::coord(3))]);
    }

    #[test]
    fn oscillator_lift() {
        let g = catalog("oscillator", 4).unwrap();
        let n = g.nilradical().unwrap();
        let hb = heisenberg_in(&g, &n).unwrap();
        let red = heis_reduce(&ReductionState::new(g.clone()), &hb).unwrap();
        assert_eq!(red.quotient.dim(), 1);
        let check = red.verify();
        assert!(check.n_invariance && check.homomorphism);
        let sub = PolyFamily::from_members(vec![Poly::coord(0)], Provenance::Coordinate);
        let fam = heis_assemble(&red, &sub);
        assert_eq!(fam.len(), 3);
        let cleared = parse_poly("2*h*z + x^2 + y^2", g.labels()).unwrap();
        assert_eq!(fam.members()[0], cleared);
        assert!(commutativity_check(&fam, &g).passed);
    }

    fn double_rotation() -> LieAlgebra {
        // h1, h2, x1, x2, y1, y2, z
        let labels = ["h1", "h2", "x1", "x2", "y1", "y2", "z"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let e = |k: usize, c: i64| {
            let mut w = vec![RatFunc::zero(); 7];
            w[k] = RatFunc::int(c);
            w
        };
        LieAlgebra::new(
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
        .unwrap()
    }

    #[test]
    fn twisted_heisenberg_quotient() {
        let g = double_rotation();
        let n = g.nilradical().unwrap();
        assert_eq!(n.dim(), 5);
        let hb = heisenberg_in(&g, &n).unwrap();
        let red = heis_reduce(&ReductionState::new(g.clone()), &hb).unwrap();
        assert!(red.z_in_quotient);
        assert_eq!(red.quotient.dim(), 3);
        assert!(!red.quotient.algebra.is_abelian());
        let check = red.verify();
        assert!(check.n_invariance && check.homomorphism);
    }

    #[test]
    fn borel_com_reduction() {
        let g = catalog("borel_sl2", 2).unwrap();
        let h = Subspace::span(2, &[v(&[0, 1])]);
        let red = com_reduce(&ReductionState::new(g), &h).unwrap();
        assert_eq!(red.tilde.dim(), 1);
        assert_eq!(red.tilde.pins, vec![(0, RatFunc::one())]);
        let check = red.verify();
        assert!(check.w_central && check.dimension_drop && check.jacobi && check.kernel_membership);
        let fam = com_pullback(&red, &PolyFamily::new());
        assert_eq!(fam.members(), &[Poly::coord(1)]);
    }

    #[test]
    fn heis3_com_reduction_on_y_z() {
        let g = catalog("heis", 3).unwrap();
        let h = Subspace::span(3, &[v(&[0, 1, 0]), v(&[0, 0, 1])]);
        let red = com_reduce(&ReductionState::new(g.clone()), &h).unwrap();
        assert_eq!(red.tilde.dim(), 1);
        let check = red.verify();
        assert!(check.w_central && check.dimension_drop && check.h_invariance);
        let fam = com_pullback(&red, &PolyFamily::new());
        assert_eq!(fam.members(), &[Poly::coord(1), Poly::coord(2)]);
        assert!(commutativity_check(&fam, &g).passed);
    }

    #[test]
    fn central_line_is_rejected() {
        let g = catalog("heis", 3).unwrap();
        let h = Subspace::span(3, &[v(&[0, 0, 1])]);
        assert!(matches!(
            com_reduce(&ReductionState::new(g), &h),
            Err(ReductionError::NotCommutativeIdeal)
        ));
    }
}
