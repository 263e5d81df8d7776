use crate::exact::{is_zero_vector, RatFunc, Vector};

use super::{add_vectors, scale_vector, sub_vectors, LieAlgebra, Subspace};

/// Darboux basis `[x_i, y_j] = delta_ij z` of a Heisenberg algebra, in the
/// coordinates of the ambient algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeisenbergBasis {
    pub x: Vec<Vector>,
    pub y: Vec<Vector>,
    pub z: Vector,
}

impl HeisenbergBasis {
    pub fn k(&self) -> usize {
        self.x.len()
    }

    /// Re-checks all defining relations.
    pub fn verify(&self, g: &LieAlgebra) -> bool {
        let zero = |v: &Vector| is_zero_vector(v);
        let k = self.k();
        for i in 0..k {
            for j in 0..k {
                if !zero(&g.br(&self.x[i], &self.x[j])) || !zero(&g.br(&self.y[i], &self.y[j])) {
                    return false;
                }
                let xy = g.br(&self.x[i], &self.y[j]);
                let expected = if i == j {
                    self.z.clone()
                } else {
                    g.zero_vector()
                };
                if xy != expected {
                    return false;
                }
            }
            if !zero(&g.br(&self.x[i], &self.z)) || !zero(&g.br(&self.y[i], &self.z)) {
                return false;
            }
        }
        !zero(&self.z)
    }
}

pub fn heisenberg_recognize(n: &LieAlgebra) -> Option<HeisenbergBasis> {
    heisenberg_in(n, &Subspace::full(n.dim()))
}

/// Recognizes the subalgebra `n` of `g` as Heisenberg and builds a Darboux
/// basis by symplectic Gram-Schmidt.
pub fn heisenberg_in(g: &LieAlgebra, n: &Subspace) -> Option<HeisenbergBasis> {
    if n.is_zero() || n.dim().is_multiple_of(2) {
        return None;
    }
    if n.dim() == 1 {
        return Some(HeisenbergBasis {
            x: vec![],
            y: vec![],
            z: n.basis()[0].clone(),
        });
    }
    let center = g.center_of(n);
    if center.dim() != 1 || g.bracket_span(n, n) != center {
        return None;
    }
    let z = center.basis()[0].clone();
    let zp = center.pivots()[0];
    let form = |u: &Vector, v: &Vector| -> RatFunc { g.br(u, v)[zp].clone() };

    // drop one echelon row so that the rest together with z is a basis of n
    let drop = n
        .pivots()
        .iter()
        .position(|&p| !z[p].is_zero())
        .expect("z lies in n");
    let mut rest: Vec<Vector> = n
        .basis()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != drop)
        .map(|(_, v)| v.clone())
        .collect();

    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    while !rest.is_empty() {
        let u = rest.remove(0);
        let j = rest.iter().position(|w| !form(&u, w).is_zero())?;
        let w = rest.remove(j);
        let v = scale_vector(&w, &form(&u, &w).recip().expect("nonzero pairing"));
        rest = rest
            .into_iter()
            .map(|w| {
                let a = form(&w, &v);
                let b = form(&w, &u);
                add_vectors(
                    &sub_vectors(&w, &scale_vector(&u, &a)),
                    &scale_vector(&v, &b),
                )
            })
            .collect();
        xs.push(u);
        ys.push(v);
    }
    let hb = HeisenbergBasis { x: xs, y: ys, z };
    hb.verify(g).then_some(hb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::catalog;

    #[test]
    fn heis5_scrambled_basis() {
        let h = catalog("heis", 5).unwrap();
        // basis x1, x2, y1, y2, z mixed by an invertible integer matrix
        let rows = [
            [1, 0, -1, 1, 0],
            [1, 0, 0, 0, 0],
            [0, 1, 0, 2, 1],
            [2, 1, 0, 0, 0],
            [0, 3, 1, 0, 0],
        ];
        let basis: Vec<Vector> = rows
            .iter()
            .map(|r| r.iter().map(|&x| RatFunc::int(x)).collect())
            .collect();
        let labels = (1..=5).map(|i| format!("b{i}")).collect();
        let g = h.change_basis(&basis, labels).unwrap();
        let hb = heisenberg_recognize(&g).unwrap();
        assert_eq!(hb.k(), 2);
        assert!(hb.verify(&g));
    }

    #[test]
    fn degenerate_and_negative_cases() {
        let a1 = catalog("abelian", 1).unwrap();
        let hb = heisenberg_recognize(&a1).unwrap();
        assert_eq!(hb.k(), 0);
        assert_eq!(hb.z, vec![RatFunc::one()]);
        assert!(heisenberg_recognize(&catalog("abelian", 3).unwrap()).is_none());
        assert!(heisenberg_recognize(&catalog("strictly_upper", 4).unwrap()).is_none());
    }
}
