//! Dense matrices over the coefficient field and exact linear algebra.
//!
//! Rank and kernel run fraction-free: every row is first scaled to polynomial
//! entries, then Bareiss elimination keeps all intermediate entries polynomial
//! (each division is exact). Only the final back substitution leaves the
//! polynomial ring, and kernel vectors are cleared back to primitive
//! polynomial form.

use num_traits::Zero;

use super::gcd::{gcd, lcm};
use super::poly::{Poly, Rational};
use super::ratfunc::RatFunc;

pub type Vector = Vec<RatFunc>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatK {
    rows: usize,
    cols: usize,
    data: Vec<RatFunc>,
}

impl MatK {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatK {
            rows,
            cols,
            data: vec![RatFunc::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, RatFunc::one());
        }
        m
    }

    /// Builds from row vectors, all of length `cols`.
    pub fn from_rows(cols: usize, rows: &[Vector]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r.iter().cloned());
        }
        MatK {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RatFunc {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RatFunc) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[RatFunc] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> MatK {
        let mut t = MatK::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(RatFunc::is_zero)
    }

    /// Rank over the coefficient field.
    pub fn rank(&self) -> usize {
        bareiss(self.polynomial_rows()).1.len()
    }

    /// Basis of the right kernel `{v : M v = 0}`; vectors have primitive
    /// polynomial entries.
    pub fn kernel(&self) -> Vec<Vector> {
        let (echelon, pivots) = bareiss(self.polynomial_rows());
        kernel_from_echelon(&echelon, &pivots, self.cols)
    }

    fn polynomial_rows(&self) -> Vec<Vec<Poly>> {
        (0..self.rows)
            .map(|i| clear_denominators(self.row(i)))
            .collect()
    }

    /// Reduced row echelon form with unit pivots, and the pivot columns.
    pub fn rref(&self) -> (MatK, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).recip().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    if m.get(r, j).is_zero() {
                        continue;
                    }
                    let v = m.get(i, j) - &(&f * m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn mul_vec(&self, v: &[RatFunc]) -> Vector {
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn mul(&self, other: &MatK) -> MatK {
        assert_eq!(self.cols, other.rows);
        let mut out = MatK::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j) + &(a * b);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn trace(&self) -> RatFunc {
        (0..self.rows.min(self.cols)).fold(RatFunc::zero(), |acc, i| &acc + self.get(i, i))
    }
}

pub fn dot(a: &[RatFunc], b: &[RatFunc]) -> RatFunc {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(RatFunc::zero(), |acc, (x, y)| &acc + &(x * y))
}

pub fn is_zero_vector(v: &[RatFunc]) -> bool {
    v.iter().all(RatFunc::is_zero)
}

/// Multiplies a vector by the lcm of its denominators.
pub fn clear_denominators(row: &[RatFunc]) -> Vec<Poly> {
    let mut l = Poly::one();
    for x in row {
        if !x.denom().is_one() {
            l = lcm(&l, x.denom());
        }
    }
    row.iter()
        .map(|x| {
            if x.is_zero() {
                Poly::zero()
            } else {
                x.numer() * &l.div_exact(x.denom()).expect("lcm divisible")
            }
        })
        .collect()
}

/// Scales a vector to primitive polynomial entries whose first nonzero entry
/// has positive leading coefficient.
pub fn normalize_vector(v: &[RatFunc]) -> Vector {
    let polys = clear_denominators(v);
    let mut g = Poly::zero();
    for p in &polys {
        if !p.is_zero() {
            g = gcd(&g, p);
        }
    }
    if g.is_zero() {
        return v.to_vec();
    }
    let mut out: Vec<Poly> = polys
        .iter()
        .map(|p| p.div_exact(&g).expect("gcd divides"))
        .collect();
    // remove the remaining rational content
    let mut num = num_bigint::BigInt::zero();
    let mut den = num_bigint::BigInt::from(1);
    for p in &out {
        if p.is_zero() {
            continue;
        }
        let c = p.content();
        num = num_integer::Integer::gcd(&num, c.numer());
        den = num_integer::Integer::lcm(&den, c.denom());
    }
    let mut scale = Rational::new(den, num);
    if let Some(first) = out.iter().find(|p| !p.is_zero()) {
        if first.leading_coefficient() < Rational::zero() {
            scale = -scale;
        }
    }
    out = out.iter().map(|p| p.scale(&scale)).collect();
    out.into_iter().map(RatFunc::from_poly).collect()
}

/// Fraction-free row echelon form. Returns the echelon rows (only the first
/// `rank` rows are meaningful) and the pivot column of each.
pub fn bareiss(mut a: Vec<Vec<Poly>>) -> (Vec<Vec<Poly>>, Vec<usize>) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = Poly::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // sparsest available pivot limits growth
        let Some(p) = (r..rows)
            .filter(|&i| !a[i][c].is_zero())
            .min_by_key(|&i| (a[i][c].num_terms(), i))
        else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            if a[i][c].is_zero() {
                // entries still need the determinant scaling
                for j in c + 1..cols {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    let t = &a[r][c] * &a[i][j];
                    a[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
                }
                continue;
            }
            for j in c + 1..cols {
                let t = &(&a[r][c] * &a[i][j]) - &(&a[i][c] * &a[r][j]);
                a[i][j] = if t.is_zero() {
                    t
                } else {
                    t.div_exact(&prev).expect("Bareiss division is exact")
                };
            }
            a[i][c] = Poly::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

fn kernel_from_echelon(u: &[Vec<Poly>], pivots: &[usize], cols: usize) -> Vec<Vector> {
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut x = vec![RatFunc::zero(); cols];
        x[f] = RatFunc::one();
        for (k, &p) in pivots.iter().enumerate().rev() {
            let mut s = RatFunc::zero();
            for j in p + 1..cols {
                if u[k][j].is_zero() || x[j].is_zero() {
                    continue;
                }
                s = &s + &(&RatFunc::from_poly(u[k][j].clone()) * &x[j]);
            }
            if !s.is_zero() {
                x[p] = -&(&s / &RatFunc::from_poly(u[k][p].clone()));
            }
        }
        basis.push(normalize_vector(&x));
    }
    basis
}

/// Rank of a rational matrix.
pub fn rank_q(m: &[Vec<Rational>]) -> usize {
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for i in r + 1..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..cols {
                let t = &f * &a[r][j];
                a[i][j] -= t;
            }
        }
        r += 1;
    }
    r
}

/// Coordinates with respect to a fixed list of independent vectors.
#[derive(Clone, Debug)]
pub struct BasisSolver {
    n: usize,
    rref: Vec<Vector>,
    pivots: Vec<usize>,
    // rref rows = transform * original basis
    transform: Vec<Vector>,
}

impl BasisSolver {
    /// Fails (returns `None`) if the vectors are dependent.
    pub fn new(n: usize, basis: &[Vector]) -> Option<Self> {
        let k = basis.len();
        let rows: Vec<Vector> = basis
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let mut r = b.clone();
                r.extend((0..k).map(|j| {
                    if i == j {
                        RatFunc::one()
                    } else {
                        RatFunc::zero()
                    }
                }));
                r
            })
            .collect();
        let (m, pivots) = MatK::from_rows(n + k, &rows).rref();
        if pivots.len() < k || pivots.iter().any(|&p| p >= n) {
            return None;
        }
        let rref = (0..k).map(|i| m.row(i)[..n].to_vec()).collect();
        let transform = (0..k).map(|i| m.row(i)[n..].to_vec()).collect();
        Some(BasisSolver {
            n,
            rref,
            pivots,
            transform,
        })
    }

    pub fn dim(&self) -> usize {
        self.rref.len()
    }

    /// `c` with `sum c_i basis_i = v`, or `None` when `v` is outside the span.
    pub fn coords(&self, v: &[RatFunc]) -> Option<Vector> {
        assert_eq!(v.len(), self.n);
        let d: Vec<&RatFunc> = self.pivots.iter().map(|&p| &v[p]).collect();
        for j in 0..self.n {
            let mut s = v[j].clone();
            for (i, di) in d.iter().enumerate() {
                if !di.is_zero() && !self.rref[i][j].is_zero() {
                    s = &s - &(*di * &self.rref[i][j]);
                }
            }
            if !s.is_zero() {
                return None;
            }
        }
        let k = self.rref.len();
        Some(
            (0..k)
                .map(|col| {
                    d.iter()
                        .enumerate()
                        .filter(|(i, di)| !di.is_zero() && !self.transform[*i][col].is_zero())
                        .fold(RatFunc::zero(), |acc, (i, di)| {
                            &acc + &(*di * &self.transform[i][col])
                        })
                })
                .collect(),
        )
    }
}
