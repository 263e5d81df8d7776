//! Built-in algebras.

use crate::exact::{rat, BasisSolver, RatFunc, Rational, Vector};

use super::{LieAlgebra, LieError};

/// A faithful matrix representation by `size x size` matrices (row-major).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixRealization {
    pub size: usize,
    pub basis: Vec<Vec<Rational>>,
}

impl MatrixRealization {
    fn unit(&self, i: usize, j: usize) -> Vec<Rational> {
        let mut m = vec![rat(0); self.size * self.size];
        m[i * self.size + j] = rat(1);
        m
    }
}

pub fn catalog_names() -> &'static [&'static str] {
    &[
        "gl",
        "sl",
        "so",
        "sp",
        "heis",
        "strictly_upper",
        "borel_sl2",
        "abelian",
        "filiform",
        "oscillator",
    ]
}

pub fn catalog(name: &str, size: usize) -> Result<LieAlgebra, LieError> {
    let bad = || LieError::InvalidSize {
        name: name.to_string(),
        size,
    };
    match name {
        "gl" | "sl" | "so" | "sp" => {
            let (labels, real) = classical(name, size).ok_or_else(bad)?;
            from_realization(labels, &real)
        }
        "heis" => {
            if size.is_multiple_of(2) {
                return Err(bad());
            }
            let k = size / 2;
            let labels: Vec<String> = if k == 1 {
                vec!["x".into(), "y".into(), "z".into()]
            } else {
                (1..=k)
                    .map(|i| format!("x{i}"))
                    .chain((1..=k).map(|i| format!("y{i}")))
                    .chain(["z".to_string()])
                    .collect()
            };
            let z = size - 1;
            sparse(labels, (0..k).map(|i| (i, k + i, vec![(z, 1)])))
        }
        "strictly_upper" => {
            if size < 2 {
                return Err(bad());
            }
            let units: Vec<(usize, usize)> = (0..size)
                .flat_map(|i| (i + 1..size).map(move |j| (i, j)))
                .collect();
            let labels = units
                .iter()
                .map(|(i, j)| format!("e{}{}", i + 1, j + 1))
                .collect();
            let idx = |i: usize, j: usize| units.iter().position(|&u| u == (i, j)).unwrap();
            let mut brackets = Vec::new();
            for (a, &(i, j)) in units.iter().enumerate() {
                for (b, &(k, l)) in units.iter().enumerate() {
                    if a < b && j == k {
                        brackets.push((a, b, vec![(idx(i, l), 1)]));
                    } else if a < b && l == i {
                        brackets.push((a, b, vec![(idx(k, j), -1)]));
                    }
                }
            }
            sparse(labels, brackets)
        }
        "borel_sl2" => {
            if size != 2 {
                return Err(bad());
            }
            sparse(vec!["h".into(), "e".into()], [(0, 1, vec![(1, 1)])])
        }
        "abelian" => {
            if size == 0 {
                return Err(bad());
            }
            Ok(LieAlgebra::abelian(
                (1..=size).map(|i| format!("x{i}")).collect(),
            ))
        }
        "filiform" => {
            if size < 2 {
                return Err(bad());
            }
            let labels = (1..=size).map(|i| format!("e{i}")).collect();
            sparse(labels, (1..size - 1).map(|i| (0, i, vec![(i + 1, 1)])))
        }
        "oscillator" => {
            if size != 4 {
                return Err(bad());
            }
            let labels = ["h", "x", "y", "z"].iter().map(|s| s.to_string()).collect();
            sparse(
                labels,
                [
                    (0, 1, vec![(2, 1)]),
                    (0, 2, vec![(1, -1)]),
                    (1, 2, vec![(3, 1)]),
                ],
            )
        }
        _ => Err(LieError::UnknownName(name.to_string())),
    }
}

/// Matrix realization used for the classical families.
pub fn realization(name: &str, size: usize) -> Option<MatrixRealization> {
    classical(name, size).map(|(_, r)| r)
}

fn classical(name: &str, n: usize) -> Option<(Vec<String>, MatrixRealization)> {
    let mut real = MatrixRealization {
        size: n,
        basis: Vec::new(),
    };
    let mut labels = Vec::new();
    let sub = |a: Vec<Rational>, b: Vec<Rational>| -> Vec<Rational> {
        a.iter().zip(&b).map(|(x, y)| x - y).collect()
    };
    let add = |a: Vec<Rational>, b: Vec<Rational>| -> Vec<Rational> {
        a.iter().zip(&b).map(|(x, y)| x + y).collect()
    };
    match name {
        "gl" if n >= 1 => {
            for i in 0..n {
                for j in 0..n {
                    labels.push(format!("x{}{}", i + 1, j + 1));
                    real.basis.push(real.unit(i, j));
                }
            }
        }
        "sl" if n == 2 => {
            labels = vec!["e".into(), "f".into(), "h".into()];
            real.basis = vec![
                real.unit(0, 1),
                real.unit(1, 0),
                sub(real.unit(0, 0), real.unit(1, 1)),
            ];
        }
        "sl" if n >= 3 => {
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        labels.push(format!("x{}{}", i + 1, j + 1));
                        real.basis.push(real.unit(i, j));
                    }
                }
            }
            for i in 0..n - 1 {
                labels.push(format!("h{}", i + 1));
                real.basis
                    .push(sub(real.unit(i, i), real.unit(i + 1, i + 1)));
            }
        }
        "so" if n >= 2 => {
            for i in 0..n {
                for j in i + 1..n {
                    labels.push(format!("a{}{}", i + 1, j + 1));
                    real.basis.push(sub(real.unit(i, j), real.unit(j, i)));
                }
            }
        }
        "sp" if n >= 2 && n.is_multiple_of(2) => {
            let m = n / 2;
            for i in 0..m {
                for j in 0..m {
                    labels.push(format!("a{}{}", i + 1, j + 1));
                    real.basis
                        .push(sub(real.unit(i, j), real.unit(m + j, m + i)));
                }
            }
            for i in 0..m {
                for j in i..m {
                    labels.push(format!("b{}{}", i + 1, j + 1));
                    real.basis.push(if i == j {
                        real.unit(i, m + i)
                    } else {
                        add(real.unit(i, m + j), real.unit(j, m + i))
                    });
                }
            }
            for i in 0..m {
                for j in i..m {
                    labels.push(format!("c{}{}", i + 1, j + 1));
                    real.basis.push(if i == j {
                        real.unit(m + i, i)
                    } else {
                        add(real.unit(m + i, j), real.unit(m + j, i))
                    });
                }
            }
        }
        _ => return None,
    }
    Some((labels, real))
}

fn from_realization(labels: Vec<String>, real: &MatrixRealization) -> Result<LieAlgebra, LieError> {
    let n = real.size;
    let to_vec = |m: &[Rational]| -> Vector { m.iter().cloned().map(RatFunc::constant).collect() };
    let basis: Vec<Vector> = real.basis.iter().map(|m| to_vec(m)).collect();
    let solver = BasisSolver::new(n * n, &basis).expect("independent matrices");
    let mut brackets = Vec::new();
    for a in 0..basis.len() {
        for b in a + 1..basis.len() {
            let ab = mat_mul(&real.basis[a], &real.basis[b], n);
            let ba = mat_mul(&real.basis[b], &real.basis[a], n);
            let c: Vec<Rational> = ab.iter().zip(&ba).map(|(x, y)| x - y).collect();
            let coords = solver.coords(&to_vec(&c)).expect("closed under commutator");
            brackets.push((a, b, coords));
        }
    }
    LieAlgebra::new(labels, vec![], brackets)
}

pub(crate) fn mat_mul(a: &[Rational], b: &[Rational], n: usize) -> Vec<Rational> {
    let mut out = vec![rat(0); n * n];
    for i in 0..n {
        for k in 0..n {
            let x = &a[i * n + k];
            if *x == rat(0) {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += x * &b[k * n + j];
            }
        }
    }
    out
}

fn sparse(
    labels: Vec<String>,
    brackets: impl IntoIterator<Item = (usize, usize, Vec<(usize, i64)>)>,
) -> Result<LieAlgebra, LieError> {
    let n = labels.len();
    let full = brackets.into_iter().map(|(i, j, terms)| {
        let mut v = vec![RatFunc::zero(); n];
        for (k, c) in terms {
            v[k] = RatFunc::int(c);
        }
        (i, j, v)
    });
    LieAlgebra::new(labels, vec![], full)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        let cases = [
            ("gl", 3, 9),
            ("sl", 2, 3),
            ("sl", 3, 8),
            ("so", 3, 3),
            ("so", 4, 6),
            ("so", 5, 10),
            ("sp", 4, 10),
            ("heis", 3, 3),
            ("heis", 5, 5),
            ("strictly_upper", 4, 6),
            ("borel_sl2", 2, 2),
            ("abelian", 3, 3),
            ("filiform", 4, 4),
            ("oscillator", 4, 4),
        ];
        for (name, size, dim) in cases {
            assert_eq!(catalog(name, size).unwrap().dim(), dim, "{name} {size}");
        }
    }

    #[test]
    fn strictly_upper_relations() {
        let g = catalog("strictly_upper", 4).unwrap();
        assert_eq!(g.labels()[0], "e12");
        // [e12, e23] = e13
        let e23 = g.labels().iter().position(|l| l == "e23").unwrap();
        let e13 = g.labels().iter().position(|l| l == "e13").unwrap();
        assert_eq!(g.br(&g.unit(0), &g.unit(e23)), g.unit(e13));
    }

    #[test]
    fn sl2_standard_presentation() {
        let g = catalog("sl", 2).unwrap();
        assert_eq!(g.labels(), ["e", "f", "h"]);
        let two_f: Vector = vec![RatFunc::zero(), RatFunc::int(-2), RatFunc::zero()];
        assert_eq!(g.br(&g.unit(2), &g.unit(1)), two_f);
    }

    #[test]
    fn unknown_and_invalid() {
        assert!(matches!(catalog("e8", 248), Err(LieError::UnknownName(_))));
        assert!(matches!(
            catalog("heis", 4),
            Err(LieError::InvalidSize { .. })
        ));
        assert!(matches!(
            catalog("sp", 3),
            Err(LieError::InvalidSize { .. })
        ));
    }
}
