//! Lie algebras given by structure constants over the coefficient field.

mod catalog;
mod heisenberg;
mod json;
mod structure;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::exact::{is_zero_vector, BasisSolver, ExactError, MatK, RatFunc, Vector};

pub use catalog::{catalog, catalog_names, realization, MatrixRealization};
pub use heisenberg::{heisenberg_in, heisenberg_recognize, HeisenbergBasis};
pub use json::{from_json, from_json_str, to_json, to_json_string, AlgebraFile};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LieError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("bracket [{0},{0}] must vanish")]
    NonzeroSelfBracket(usize),
    #[error("Jacobi identity fails on basis triple ({0}, {1}, {2})")]
    JacobiFailure(usize, usize, usize),
    #[error("subspace is not an ideal")]
    NotAnIdeal,
    #[error("nilradical candidate failed verification: {0}")]
    NilradicalUnverified(String),
    #[error("inconsistent structure: {0}")]
    InconsistentStructure(String),
    #[error("unknown catalog entry `{0}`")]
    UnknownName(String),
    #[error("invalid catalog size {size} for `{name}`")]
    InvalidSize { name: String, size: usize },
    #[error("malformed algebra description: {0}")]
    Malformed(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// A finite-dimensional Lie algebra over `K = Q(t...)`.
///
/// The full bracket table is stored densely; entry `(i, j)` holds the
/// coordinates of `[e_i, e_j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    labels: Vec<String>,
    params: Vec<u32>,
    table: Vec<Vector>,
}

impl LieAlgebra {
    /// Builds an algebra from the brackets of basis pairs. Pairs may be given
    /// in either order; missing pairs are zero. Jacobi is checked.
    pub fn new(
        labels: Vec<String>,
        params: Vec<u32>,
        brackets: impl IntoIterator<Item = (usize, usize, Vector)>,
    ) -> Result<Self, LieError> {
        let n = labels.len();
        let mut table = vec![vec![RatFunc::zero(); n]; n * n];
        for (i, j, v) in brackets {
            if i >= n || j >= n {
                return Err(LieError::DimensionMismatch {
                    expected: n,
                    got: i.max(j) + 1,
                });
            }
            if v.len() != n {
                return Err(LieError::DimensionMismatch {
                    expected: n,
                    got: v.len(),
                });
            }
            if i == j {
                if !is_zero_vector(&v) {
                    return Err(LieError::NonzeroSelfBracket(i));
                }
                continue;
            }
            let neg: Vector = v.iter().map(|c| -c).collect();
            table[i * n + j] = v;
            table[j * n + i] = neg;
        }
        let g = Self::assemble(labels, params, table);
        g.check_jacobi()?;
        Ok(g)
    }

    /// Structure constants `c[i][j][k]` for all ordered pairs; must already be
    /// antisymmetric.
    pub(crate) fn from_table(
        labels: Vec<String>,
        params: Vec<u32>,
        table: Vec<Vector>,
    ) -> Result<Self, LieError> {
        let g = Self::assemble(labels, params, table);
        g.check_jacobi()?;
        Ok(g)
    }

    fn assemble(labels: Vec<String>, params: Vec<u32>, table: Vec<Vector>) -> Self {
        let mut all: BTreeSet<u32> = params.into_iter().collect();
        for v in &table {
            for c in v {
                for var in c.vars() {
                    if let crate::exact::VarId::Parameter(k) = var {
                        all.insert(k);
                    }
                }
            }
        }
        LieAlgebra {
            labels,
            params: all.into_iter().collect(),
            table,
        }
    }

    pub fn abelian(labels: Vec<String>) -> Self {
        let n = labels.len();
        LieAlgebra {
            labels,
            params: Vec::new(),
            table: vec![vec![RatFunc::zero(); n]; n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn params(&self) -> &[u32] {
        &self.params
    }

    /// Smallest parameter index not used by this algebra.
    pub fn fresh_param(&self) -> u32 {
        self.params.iter().max().map_or(1, |m| m + 1)
    }

    /// Coordinates of `[e_i, e_j]`.
    pub fn basis_bracket(&self, i: usize, j: usize) -> &Vector {
        &self.table[i * self.dim() + j]
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &RatFunc {
        &self.table[i * self.dim() + j][k]
    }

    pub fn unit(&self, i: usize) -> Vector {
        unit(self.dim(), i)
    }

    pub fn zero_vector(&self) -> Vector {
        vec![RatFunc::zero(); self.dim()]
    }

    pub fn bracket(&self, u: &[RatFunc], v: &[RatFunc]) -> Result<Vector, LieError> {
        for w in [u, v] {
            if w.len() != self.dim() {
                return Err(LieError::DimensionMismatch {
                    expected: self.dim(),
                    got: w.len(),
                });
            }
        }
        Ok(self.br(u, v))
    }

    /// Bracket of coordinate vectors; panics on a length mismatch.
    pub fn br(&self, u: &[RatFunc], v: &[RatFunc]) -> Vector {
        let n = self.dim();
        assert!(u.len() == n && v.len() == n, "vector length mismatch");
        let mut out = vec![RatFunc::zero(); n];
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if i == j || vj.is_zero() {
                    continue;
                }
                let c = &self.table[i * n + j];
                if is_zero_vector(c) {
                    continue;
                }
                let f = ui * vj;
                for (k, ck) in c.iter().enumerate() {
                    if !ck.is_zero() {
                        out[k] = &out[k] + &(&f * ck);
                    }
                }
            }
        }
        out
    }

    /// Matrix of `ad u`: column `j` holds `[u, e_j]`.
    pub fn ad(&self, u: &[RatFunc]) -> MatK {
        let n = self.dim();
        let mut m = MatK::zeros(n, n);
        for j in 0..n {
            let col = self.br(u, &self.unit(j));
            for (k, c) in col.into_iter().enumerate() {
                m.set(k, j, c);
            }
        }
        m
    }

    pub fn is_abelian(&self) -> bool {
        self.table.iter().all(|v| is_zero_vector(v))
    }

    fn check_jacobi(&self) -> Result<(), LieError> {
        let n = self.dim();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (ei, ej, ek) = (self.unit(i), self.unit(j), self.unit(k));
                    let a = self.br(self.basis_bracket(i, j), &ek);
                    let b = self.br(self.basis_bracket(j, k), &ei);
                    let c = self.br(self.basis_bracket(k, i), &ej);
                    let ok = (0..n).all(|m| (&(&a[m] + &b[m]) + &c[m]).is_zero());
                    if !ok {
                        return Err(LieError::JacobiFailure(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    /// Structure constants in a new basis of the whole algebra.
    pub fn change_basis(&self, basis: &[Vector], labels: Vec<String>) -> Result<Self, LieError> {
        let sub = Subspace::from_ordered(self.dim(), basis.to_vec())
            .ok_or_else(|| LieError::Malformed("dependent basis".into()))?;
        if sub.dim() != self.dim() {
            return Err(LieError::Malformed("not a basis".into()));
        }
        self.subalgebra_in_basis(basis, labels)
    }

    /// Structure constants of the subalgebra spanned by `basis`, in that basis.
    pub fn subalgebra_in_basis(
        &self,
        basis: &[Vector],
        labels: Vec<String>,
    ) -> Result<Self, LieError> {
        let m = basis.len();
        let solver = BasisSolver::new(self.dim(), basis)
            .ok_or_else(|| LieError::Malformed("dependent basis".into()))?;
        let mut table = vec![vec![RatFunc::zero(); m]; m * m];
        for a in 0..m {
            for b in a + 1..m {
                let c = solver
                    .coords(&self.br(&basis[a], &basis[b]))
                    .ok_or_else(|| LieError::Malformed("not closed under the bracket".into()))?;
                table[b * m + a] = c.iter().map(|x| -x).collect();
                table[a * m + b] = c;
            }
        }
        LieAlgebra::from_table(labels, self.params.clone(), table)
    }
}

pub(crate) fn unit(n: usize, i: usize) -> Vector {
    let mut v = vec![RatFunc::zero(); n];
    v[i] = RatFunc::one();
    v
}

/// A subspace of `K^n` in reduced row echelon form, so equal subspaces have
/// equal representations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn span(ambient: usize, vectors: &[Vector]) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        let (m, pivots) = MatK::from_rows(ambient, vectors).rref();
        let basis = (0..pivots.len()).map(|i| m.row(i).to_vec()).collect();
        Subspace {
            ambient,
            basis,
            pivots,
        }
    }

    /// Span of independent vectors, or `None` if they are dependent.
    pub fn from_ordered(ambient: usize, vectors: Vec<Vector>) -> Option<Self> {
        let s = Self::span(ambient, &vectors);
        (s.dim() == vectors.len()).then_some(s)
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: (0..ambient).map(|i| unit(ambient, i)).collect(),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn as_matrix(&self) -> MatK {
        MatK::from_rows(self.ambient, &self.basis)
    }

    /// `v` minus its component along the subspace, reading off pivot entries.
    pub fn residue(&self, v: &[RatFunc]) -> Vector {
        let mut r = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let c = r[p].clone();
            if c.is_zero() {
                continue;
            }
            for (k, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    r[k] = &r[k] - &(&c * x);
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[RatFunc]) -> bool {
        is_zero_vector(&self.residue(v))
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient, &all)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(self.ambient);
        }
        // a . A = b . B  <=>  (a, b) in ker [A; -B]^T
        let (p, q) = (self.dim(), other.dim());
        let mut m = MatK::zeros(self.ambient, p + q);
        for (a, row) in self.basis.iter().enumerate() {
            for (k, x) in row.iter().enumerate() {
                m.set(k, a, x.clone());
            }
        }
        for (b, row) in other.basis.iter().enumerate() {
            for (k, x) in row.iter().enumerate() {
                m.set(k, p + b, -x);
            }
        }
        let vecs: Vec<Vector> = m
            .kernel()
            .iter()
            .map(|c| combine(&self.basis, &c[..p]))
            .collect();
        Subspace::span(self.ambient, &vecs)
    }

    /// Coordinate indices not used as pivots; the unit vectors at these
    /// indices span a complement.
    pub fn complement_indices(&self) -> Vec<usize> {
        (0..self.ambient)
            .filter(|i| !self.pivots.contains(i))
            .collect()
    }
}

/// `sum c_a v_a`.
pub fn combine(vectors: &[Vector], coeffs: &[RatFunc]) -> Vector {
    let n = vectors.first().map_or(0, Vec::len);
    let mut out = vec![RatFunc::zero(); n];
    for (v, c) in vectors.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (k, x) in v.iter().enumerate() {
            if !x.is_zero() {
                out[k] = &out[k] + &(c * x);
            }
        }
    }
    out
}

pub fn scale_vector(v: &[RatFunc], c: &RatFunc) -> Vector {
    v.iter().map(|x| x * c).collect()
}

pub fn add_vectors(a: &[RatFunc], b: &[RatFunc]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vectors(a: &[RatFunc], b: &[RatFunc]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heis3() -> LieAlgebra {
        catalog("heis", 3).unwrap()
    }

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| RatFunc::int(x)).collect()
    }

    #[test]
    fn heisenberg_defining_relation() {
        let g = heis3();
        assert_eq!(
            g.bracket(&v(&[1, 0, 0]), &v(&[0, 1, 0])).unwrap(),
            v(&[0, 0, 1])
        );
        let u = v(&[2, -1, 5]);
        assert!(is_zero_vector(&g.br(&u, &u)));
    }

    #[test]
    fn sl2_relation() {
        let g = catalog("sl", 2).unwrap();
        assert_eq!(g.br(&g.unit(0), &g.unit(1)), g.unit(2));
        assert_eq!(g.br(&g.unit(2), &g.unit(0)), v(&[2, 0, 0]));
    }

    #[test]
    fn bracket_rejects_wrong_length() {
        assert!(matches!(
            heis3().bracket(&v(&[1, 0]), &v(&[0, 1, 0])),
            Err(LieError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn jacobi_violation_is_rejected() {
        // [x,y]=y, [x,z]=z, [y,z]=x is not a Lie algebra
        let labels = vec!["x".into(), "y".into(), "z".into()];
        let r = LieAlgebra::new(
            labels,
            vec![],
            [
                (0, 1, v(&[0, 1, 0])),
                (0, 2, v(&[0, 0, 1])),
                (1, 2, v(&[1, 0, 0])),
            ],
        );
        assert!(matches!(r, Err(LieError::JacobiFailure(..))));
    }

    #[test]
    fn subspace_operations() {
        let a = Subspace::span(3, &[v(&[1, 1, 0]), v(&[0, 0, 1])]);
        let b = Subspace::span(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let i = a.intersect(&b);
        assert_eq!(i, Subspace::span(3, &[v(&[1, 1, 0])]));
        assert!(a.sum(&b).is_full());
        assert!(a.contains(&v(&[2, 2, 7])));
        assert!(!a.contains(&v(&[1, 0, 0])));
        assert_eq!(a.complement_indices(), vec![1]);
    }
}
