use std::collections::BTreeMap;

use super::gcd::gcd;
use super::poly::{Monomial, Poly, VarId};
use super::ratfunc::RatFunc;

/// Substitutes rational functions for variables of `p`.
///
/// Variables without an image are left alone. The result is returned as a
/// reduced `(numerator, denominator)` pair; callers decide how to clear the
/// denominator.
pub fn substitute(p: &Poly, subst: &BTreeMap<VarId, RatFunc>) -> (Poly, Poly) {
    // largest exponent of each substituted variable fixes the common denominator
    let mut max_exp: BTreeMap<VarId, u32> = BTreeMap::new();
    for (m, _) in p.terms() {
        for (v, e) in m.pairs() {
            if subst.contains_key(&v) {
                let slot = max_exp.entry(v).or_default();
                *slot = (*slot).max(e);
            }
        }
    }
    let mut num_pows: BTreeMap<VarId, Vec<Poly>> = BTreeMap::new();
    let mut den_pows: BTreeMap<VarId, Vec<Poly>> = BTreeMap::new();
    for (&v, &e) in &max_exp {
        let img = &subst[&v];
        num_pows.insert(v, powers(img.numer(), e));
        den_pows.insert(v, powers(img.denom(), e));
    }

    let mut num = Poly::zero();
    for (m, c) in p.terms() {
        let mut kept = Vec::new();
        let mut t = Poly::one();
        for (v, e) in m.pairs() {
            if let Some(np) = num_pows.get(&v) {
                t = &t * &np[e as usize];
            } else {
                kept.push((v, e));
            }
        }
        for (v, &emax) in &max_exp {
            let e = m.exponent(*v);
            if e < emax {
                t = &t * &den_pows[v][(emax - e) as usize];
            }
        }
        num = &num + &t.mul_monomial(&Monomial::from_pairs(kept), c);
    }
    let mut den = Poly::one();
    for (v, &e) in &max_exp {
        den = &den * &den_pows[v][e as usize];
    }
    if num.is_zero() {
        return (Poly::zero(), Poly::one());
    }
    let g = gcd(&num, &den);
    let (num, den) = (
        num.div_exact(&g).expect("gcd divides"),
        den.div_exact(&g).expect("gcd divides"),
    );
    let f = RatFunc::new(num, den).expect("nonzero denominator");
    f.into_parts()
}

fn powers(p: &Poly, e: u32) -> Vec<Poly> {
    let mut out = Vec::with_capacity(e as usize + 1);
    out.push(Poly::one());
    for k in 1..=e as usize {
        let next = &out[k - 1] * p;
        out.push(next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Poly {
        Poly::coord(i)
    }

    fn frac(a: Poly, b: Poly) -> RatFunc {
        RatFunc::new(a, b).unwrap()
    }

    #[test]
    fn single_substitution() {
        let s = BTreeMap::from([(VarId::coord(0), frac(x(1), x(2)))]);
        assert_eq!(substitute(&x(0), &s), (x(1), x(2)));
        assert_eq!(substitute(&x(0).pow(2), &s), (x(1).pow(2), x(2).pow(2)));
    }

    #[test]
    fn collapsing_sum() {
        let s = BTreeMap::from([(VarId::coord(0), RatFunc::from_poly(x(1)))]);
        let (n, d) = substitute(&(&x(0) + &x(1)), &s);
        assert_eq!(n, x(1).scale(&crate::exact::poly::rat(2)));
        assert!(d.is_one());
    }

    #[test]
    fn mixed_exponents_share_denominator() {
        // x1^2 + x1 with x1 -> 1/x2 gives (1 + x2)/x2^2
        let s = BTreeMap::from([(VarId::coord(0), frac(Poly::one(), x(1)))]);
        let (n, d) = substitute(&(&x(0).pow(2) + &x(0)), &s);
        assert_eq!(n, &x(1) + &Poly::one());
        assert_eq!(d, x(1).pow(2));
    }
}
