//! Structural algorithms: central series, radicals, quotients, stabilizers.

use crate::exact::{is_zero_vector, MatK, RatFunc, Vector};

use super::heisenberg::heisenberg_in;
use super::{combine, LieAlgebra, LieError, Subspace};

/// Projection `g -> g / ideal` onto the coordinates not used as ideal pivots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection {
    ideal: Subspace,
    kept: Vec<usize>,
}

impl Projection {
    /// Indices of the parent basis vectors whose images form the quotient basis.
    pub fn kept(&self) -> &[usize] {
        &self.kept
    }

    pub fn ideal(&self) -> &Subspace {
        &self.ideal
    }

    pub fn apply(&self, v: &[RatFunc]) -> Vector {
        let r = self.ideal.residue(v);
        self.kept.iter().map(|&i| r[i].clone()).collect()
    }

    /// The parent vector representing a quotient vector.
    pub fn lift(&self, v: &[RatFunc]) -> Vector {
        let mut out = vec![RatFunc::zero(); self.ideal.ambient()];
        for (&i, x) in self.kept.iter().zip(v) {
            out[i] = x.clone();
        }
        out
    }
}

impl LieAlgebra {
    pub fn bracket_span(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let mut s = Subspace::zero(self.dim());
        for u in a.basis() {
            for v in b.basis() {
                s.insert(&self.br(u, v));
            }
        }
        s
    }

    pub fn derived_algebra(&self) -> Subspace {
        let full = Subspace::full(self.dim());
        self.bracket_span(&full, &full)
    }

    /// `{x in within : [x, over] is contained in target}`.
    pub fn bracket_preimage(
        &self,
        within: &Subspace,
        over: &Subspace,
        target: &Subspace,
    ) -> Subspace {
        let n = self.dim();
        if within.is_zero() {
            return Subspace::zero(n);
        }
        let cols = within.dim();
        let free = target.complement_indices();
        let mut rows: Vec<Vector> = Vec::new();
        for o in over.basis() {
            let images: Vec<Vector> = within
                .basis()
                .iter()
                .map(|w| target.residue(&self.br(w, o)))
                .collect();
            for &k in &free {
                let row: Vector = images.iter().map(|im| im[k].clone()).collect();
                if !is_zero_vector(&row) {
                    rows.push(row);
                }
            }
        }
        if rows.is_empty() {
            return within.clone();
        }
        let kernel = MatK::from_rows(cols, &rows).kernel();
        let vecs: Vec<Vector> = kernel.iter().map(|c| combine(within.basis(), c)).collect();
        Subspace::span(n, &vecs)
    }

    pub fn center(&self) -> Subspace {
        self.center_of(&Subspace::full(self.dim()))
    }

    /// Center of the subalgebra `s`.
    pub fn center_of(&self, s: &Subspace) -> Subspace {
        self.bracket_preimage(s, s, &Subspace::zero(self.dim()))
    }

    /// Centralizer of `s` inside `within`.
    pub fn centralizer_in(&self, within: &Subspace, s: &Subspace) -> Subspace {
        self.bracket_preimage(within, s, &Subspace::zero(self.dim()))
    }

    pub fn derived_series(&self) -> Vec<Subspace> {
        self.derived_series_of(&Subspace::full(self.dim()))
    }

    /// `s, [s,s], [[s,s],[s,s]], ...` up to stabilization.
    pub fn derived_series_of(&self, s: &Subspace) -> Vec<Subspace> {
        let mut out = vec![s.clone()];
        loop {
            let last = out.last().unwrap();
            let next = self.bracket_span(last, last);
            if &next == last {
                return out;
            }
            out.push(next);
        }
    }

    pub fn lower_central_series(&self) -> Vec<Subspace> {
        self.lower_central_series_of(&Subspace::full(self.dim()))
    }

    /// `s, [s,s], [s,[s,s]], ...` up to stabilization.
    pub fn lower_central_series_of(&self, s: &Subspace) -> Vec<Subspace> {
        let mut out = vec![s.clone()];
        loop {
            let last = out.last().unwrap();
            let next = self.bracket_span(s, last);
            if &next == last {
                return out;
            }
            out.push(next);
        }
    }

    /// `Z_1 = center, Z_2, ...` up to stabilization.
    pub fn upper_central_series(&self) -> Vec<Subspace> {
        self.upper_central_series_of(&Subspace::full(self.dim()))
    }

    pub fn upper_central_series_of(&self, s: &Subspace) -> Vec<Subspace> {
        let mut out = Vec::new();
        let mut current = Subspace::zero(self.dim());
        loop {
            let next = self.bracket_preimage(s, s, &current);
            if next == current {
                return out;
            }
            out.push(next.clone());
            current = next;
        }
    }

    pub fn is_subalgebra(&self, s: &Subspace) -> bool {
        s.contains_subspace(&self.bracket_span(s, s))
    }

    pub fn is_ideal(&self, s: &Subspace) -> bool {
        s.contains_subspace(&self.bracket_span(&Subspace::full(self.dim()), s))
    }

    pub fn is_commutative(&self, s: &Subspace) -> bool {
        self.bracket_span(s, s).is_zero()
    }

    pub fn is_solvable_sub(&self, s: &Subspace) -> bool {
        self.derived_series_of(s).last().unwrap().is_zero()
    }

    pub fn is_nilpotent_sub(&self, s: &Subspace) -> bool {
        self.lower_central_series_of(s).last().unwrap().is_zero()
    }

    pub fn is_solvable(&self) -> bool {
        self.is_solvable_sub(&Subspace::full(self.dim()))
    }

    pub fn is_nilpotent(&self) -> bool {
        self.is_nilpotent_sub(&Subspace::full(self.dim()))
    }

    /// Gram matrix of the Killing form `tr(ad e_i ad e_j)`.
    pub fn killing_form(&self) -> MatK {
        let n = self.dim();
        let ads: Vec<MatK> = (0..n).map(|i| self.ad(&self.unit(i))).collect();
        let mut b = MatK::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let t = ads[i].mul(&ads[j]).trace();
                b.set(i, j, t.clone());
                b.set(j, i, t);
            }
        }
        b
    }

    /// Maximal solvable ideal: the Killing-orthogonal complement of `[g,g]`.
    pub fn solvable_radical(&self) -> Result<Subspace, LieError> {
        let n = self.dim();
        let d = self.derived_algebra();
        if d.is_zero() {
            return Ok(Subspace::full(n));
        }
        let b = self.killing_form();
        let rows: Vec<Vector> = d.basis().iter().map(|v| b.mul_vec(v)).collect();
        let r = Subspace::span(n, &MatK::from_rows(n, &rows).kernel());
        if !self.is_ideal(&r) || !self.is_solvable_sub(&r) {
            return Err(LieError::InconsistentStructure(
                "Killing-orthogonal of [g,g] is not a solvable ideal".into(),
            ));
        }
        Ok(r)
    }

    /// Maximal nilpotent ideal.
    ///
    /// Inside the radical `r`, `x` lies in the nilradical iff `ad x` is
    /// nilpotent, and since the associative algebra `A` generated by `ad r`
    /// is triangularizable this holds iff `tr(ad x) = 0` and
    /// `tr(ad x * B) = 0` for every `B` in `A`.
    pub fn nilradical(&self) -> Result<Subspace, LieError> {
        let n = self.dim();
        if self.is_nilpotent() {
            return Ok(Subspace::full(n));
        }
        let r = self.solvable_radical()?;
        if r.is_zero() {
            return Ok(r);
        }
        let gens: Vec<Vector> = r.basis().iter().map(|v| flatten(&self.ad(v))).collect();
        let mut assoc = Subspace::zero(n * n);
        let mut queue = gens.clone();
        while let Some(m) = queue.pop() {
            if assoc.insert(&m) {
                for g in &gens {
                    queue.push(mat_mul_flat(&m, g, n));
                }
            }
        }
        let mut rows: Vec<Vector> = vec![gens.iter().map(|a| trace_flat(a, n)).collect()];
        for b in assoc.basis() {
            rows.push(gens.iter().map(|a| trace_product_flat(a, b, n)).collect());
        }
        let kernel = MatK::from_rows(r.dim(), &rows).kernel();
        let vecs: Vec<Vector> = kernel.iter().map(|c| combine(r.basis(), c)).collect();
        let nil = Subspace::span(n, &vecs);

        if !self.is_ideal(&nil) {
            return Err(LieError::NilradicalUnverified("not an ideal".into()));
        }
        if !self.is_nilpotent_sub(&nil) {
            return Err(LieError::NilradicalUnverified("not nilpotent".into()));
        }
        let gr = self.bracket_span(&Subspace::full(n), &r);
        if !nil.contains_subspace(&gr) {
            return Err(LieError::NilradicalUnverified(
                "does not contain [g, r]".into(),
            ));
        }
        Ok(nil)
    }

    pub fn quotient(&self, ideal: &Subspace) -> Result<(LieAlgebra, Projection), LieError> {
        if ideal.ambient() != self.dim() {
            return Err(LieError::DimensionMismatch {
                expected: self.dim(),
                got: ideal.ambient(),
            });
        }
        if !self.is_ideal(ideal) {
            return Err(LieError::NotAnIdeal);
        }
        let proj = Projection {
            ideal: ideal.clone(),
            kept: ideal.complement_indices(),
        };
        let m = proj.kept.len();
        let mut table = vec![vec![RatFunc::zero(); m]; m * m];
        for a in 0..m {
            for b in 0..m {
                if a != b {
                    table[a * m + b] = proj.apply(self.basis_bracket(proj.kept[a], proj.kept[b]));
                }
            }
        }
        let labels = proj
            .kept
            .iter()
            .map(|&i| self.labels()[i].clone())
            .collect();
        let q = LieAlgebra::from_table(labels, self.params().to_vec(), table)?;
        Ok((q, proj))
    }

    /// The subalgebra `s` in its echelon basis.
    pub fn subalgebra(&self, s: &Subspace) -> Result<LieAlgebra, LieError> {
        let labels = s
            .basis()
            .iter()
            .enumerate()
            .map(|(k, v)| match unit_index(v) {
                Some(i) => self.labels()[i].clone(),
                None => format!("u{}", k + 1),
            })
            .collect();
        self.subalgebra_in_basis(s.basis(), labels)
    }

    /// Kirillov form at `xi`: entry `(i, j)` is `xi([e_i, e_j])`.
    pub fn kirillov_at(&self, xi: &[RatFunc]) -> MatK {
        let n = self.dim();
        let mut m = MatK::zeros(n, n);
        for i in 0..n {
            for j in i + 1..n {
                let v = crate::exact::dot(self.basis_bracket(i, j), xi);
                m.set(j, i, -&v);
                m.set(i, j, v);
            }
        }
        m
    }

    /// Stabilizer `g_xi = {u : xi([u, .]) = 0}`.
    pub fn stabilizer(&self, xi: &[RatFunc]) -> Subspace {
        Subspace::span(self.dim(), &self.kirillov_at(xi).kernel())
    }

    /// A commutative ideal of `g` inside the nilradical `n`, with `dim > 1` or
    /// not central in `g`, found among canonical characteristic candidates.
    ///
    /// `None` means every candidate is a central line, in which case `n` is
    /// Heisenberg with central `z`; anything else is reported as an error.
    pub fn commutative_characteristic_ideal(
        &self,
        n: &Subspace,
    ) -> Result<Option<Subspace>, LieError> {
        let full = Subspace::full(self.dim());
        let mut candidates = vec![self.center_of(n)];
        for z in self.upper_central_series_of(n).iter().skip(1) {
            candidates.push(self.center_of(z));
        }
        let nn = self.bracket_span(n, n);
        candidates.push(self.center_of(&self.centralizer_in(n, &nn)));
        for d in self.derived_series_of(n).iter().skip(1) {
            candidates.push(self.center_of(d));
        }
        for h in candidates {
            if h.is_zero() || !self.is_ideal(&h) || !self.is_commutative(&h) {
                continue;
            }
            if h.dim() > 1 || !self.bracket_span(&full, &h).is_zero() {
                return Ok(Some(h));
            }
        }
        match heisenberg_in(self, n) {
            Some(hb) if is_zero_vector(&self.ad(&hb.z).row_vectors().concat()) => Ok(None),
            _ => Err(LieError::InconsistentStructure(
                "no commutative characteristic ideal found and the nilradical is not Heisenberg"
                    .into(),
            )),
        }
    }
}

impl Subspace {
    /// Adds `v` to the span, keeping reduced echelon form. Returns whether
    /// the dimension grew.
    pub fn insert(&mut self, v: &[RatFunc]) -> bool {
        let r = self.residue(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].recip().expect("nonzero pivot");
        let r: Vector = r.iter().map(|x| x * &inv).collect();
        for row in self.basis.iter_mut() {
            let c = row[p].clone();
            if c.is_zero() {
                continue;
            }
            for (k, x) in r.iter().enumerate() {
                if !x.is_zero() {
                    row[k] = &row[k] - &(&c * x);
                }
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(pos, p);
        self.basis.insert(pos, r);
        true
    }
}

fn unit_index(v: &[RatFunc]) -> Option<usize> {
    let nz: Vec<usize> = (0..v.len()).filter(|&i| !v[i].is_zero()).collect();
    (nz.len() == 1 && v[nz[0]].is_one()).then(|| nz[0])
}

fn flatten(m: &MatK) -> Vector {
    (0..m.rows()).flat_map(|i| m.row(i).to_vec()).collect()
}

fn mat_mul_flat(a: &[RatFunc], b: &[RatFunc], n: usize) -> Vector {
    let mut out = vec![RatFunc::zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            let x = &a[i * n + k];
            if x.is_zero() {
                continue;
            }
            for j in 0..n {
                let y = &b[k * n + j];
                if !y.is_zero() {
                    out[i * n + j] = &out[i * n + j] + &(x * y);
                }
            }
        }
    }
    out
}

fn trace_flat(a: &[RatFunc], n: usize) -> RatFunc {
    (0..n).fold(RatFunc::zero(), |acc, i| &acc + &a[i * n + i])
}

fn trace_product_flat(a: &[RatFunc], b: &[RatFunc], n: usize) -> RatFunc {
    let mut s = RatFunc::zero();
    for k in 0..n {
        for l in 0..n {
            let (x, y) = (&a[k * n + l], &b[l * n + k]);
            if !x.is_zero() && !y.is_zero() {
                s = &s + &(x * y);
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::catalog;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| RatFunc::int(x)).collect()
    }

    #[test]
    fn centers() {
        let h = catalog("heis", 3).unwrap();
        assert_eq!(h.center(), Subspace::span(3, &[v(&[0, 0, 1])]));
        let a = catalog("abelian", 3).unwrap();
        assert!(a.center().is_full());
    }

    #[test]
    fn heis3_upper_central_series() {
        let h = catalog("heis", 3).unwrap();
        let s = h.upper_central_series();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0], Subspace::span(3, &[v(&[0, 0, 1])]));
        assert!(s[1].is_full());
    }

    #[test]
    fn radicals_of_small_algebras() {
        let sl2 = catalog("sl", 2).unwrap();
        assert!(sl2.solvable_radical().unwrap().is_zero());
        assert!(sl2.nilradical().unwrap().is_zero());
        assert!(catalog("abelian", 2)
            .unwrap()
            .solvable_radical()
            .unwrap()
            .is_full());

        // gl2 basis x11, x12, x21, x22: the radical is the identity line
        let gl2 = catalog("gl", 2).unwrap();
        assert_eq!(
            gl2.solvable_radical().unwrap(),
            Subspace::span(4, &[v(&[1, 0, 0, 1])])
        );

        let b2 = catalog("borel_sl2", 2).unwrap();
        assert_eq!(b2.nilradical().unwrap(), Subspace::span(2, &[v(&[0, 1])]));
        assert!(catalog("heis", 3).unwrap().nilradical().unwrap().is_full());
    }

    #[test]
    fn oscillator_nilradical_is_heisenberg_part() {
        let g = catalog("oscillator", 4).unwrap();
        let n = g.nilradical().unwrap();
        assert_eq!(
            n,
            Subspace::span(4, &[v(&[0, 1, 0, 0]), v(&[0, 0, 1, 0]), v(&[0, 0, 0, 1])])
        );
    }

    #[test]
    fn quotients() {
        let h = catalog("heis", 3).unwrap();
        let (q, p) = h.quotient(&h.center()).unwrap();
        assert!(q.is_abelian());
        assert_eq!(q.dim(), 2);
        assert_eq!(p.apply(&v(&[1, 2, 3])), v(&[1, 2]));
        let (same, _) = h.quotient(&Subspace::zero(3)).unwrap();
        assert_eq!(same, h);
        let b2 = catalog("borel_sl2", 2).unwrap();
        let (q, _) = b2.quotient(&Subspace::span(2, &[v(&[0, 1])])).unwrap();
        assert_eq!(q.dim(), 1);
        assert!(matches!(
            h.quotient(&Subspace::span(3, &[v(&[1, 0, 0])])),
            Err(LieError::NotAnIdeal)
        ));
    }

    #[test]
    fn stabilizers() {
        let sl2 = catalog("sl", 2).unwrap();
        assert_eq!(
            sl2.stabilizer(&v(&[0, 0, 1])),
            Subspace::span(3, &[v(&[0, 0, 1])])
        );
        assert!(sl2.stabilizer(&v(&[0, 0, 0])).is_full());
        let h = catalog("heis", 3).unwrap();
        assert_eq!(
            h.stabilizer(&v(&[3, -2, 5])),
            Subspace::span(3, &[v(&[0, 0, 1])])
        );
    }

    #[test]
    fn characteristic_ideals() {
        let b2 = catalog("borel_sl2", 2).unwrap();
        let n = b2.nilradical().unwrap();
        assert_eq!(
            b2.commutative_characteristic_ideal(&n).unwrap(),
            Some(Subspace::span(2, &[v(&[0, 1])]))
        );

        let n4 = catalog("strictly_upper", 4).unwrap();
        let h = n4
            .commutative_characteristic_ideal(&Subspace::full(6))
            .unwrap()
            .unwrap();
        assert!(h.dim() > 1 && n4.is_ideal(&h) && n4.is_commutative(&h));

        // heis3 + a central line: the nilradical is everything, not Heisenberg
        // itself, so some candidate must work
        let labels = ["x", "y", "z", "c"].iter().map(|s| s.to_string()).collect();
        let g = LieAlgebra::new(labels, vec![], [(0, 1, v(&[0, 0, 1, 0]))]).unwrap();
        let h = g
            .commutative_characteristic_ideal(&Subspace::full(4))
            .unwrap()
            .unwrap();
        assert!(h.dim() > 1);

        let heis = catalog("heis", 3).unwrap();
        assert_eq!(
            heis.commutative_characteristic_ideal(&Subspace::full(3))
                .unwrap(),
            None
        );
    }
}
