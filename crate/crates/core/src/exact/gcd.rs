//! Multivariate gcd over the rationals by recursive primitive remainder
//! sequences.

use super::poly::{Poly, VarId};

/// Greatest common divisor, normalized to an integer-primitive polynomial with
/// positive leading coefficient. `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return a.primitive();
    }
    let v = match a.vars().into_iter().chain(b.vars()).min() {
        Some(v) => v,
        None => return Poly::one(),
    };
    let cont_a = content_in(a, v);
    let cont_b = content_in(b, v);
    let c = gcd(&cont_a, &cont_b);
    let pa = a.div_exact(&cont_a).expect("content divides");
    let pb = b.div_exact(&cont_b).expect("content divides");
    let g = if pa.degree_in(v) == 0 || pb.degree_in(v) == 0 {
        Poly::one()
    } else {
        primitive_prs(pa, pb, v)
    };
    (&c * &g).primitive()
}

pub fn lcm(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let g = gcd(a, b);
    (a * &b.div_exact(&g).expect("gcd divides")).primitive()
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `v`.
pub fn content_in(p: &Poly, v: VarId) -> Poly {
    let mut g = Poly::zero();
    for c in p.coefficients_in(v) {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive_part_in(p: &Poly, v: VarId) -> Poly {
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides").primitive()
}

fn pseudo_remainder(f: &Poly, g: &Poly, v: VarId) -> Poly {
    let dg = g.degree_in(v);
    let g_coeffs = g.coefficients_in(v);
    let lc = g_coeffs[dg as usize].clone();
    let mut r = f.clone();
    while !r.is_zero() && r.degree_in(v) >= dg {
        let dr = r.degree_in(v);
        let lc_r = r.coefficients_in(v).pop().unwrap();
        let shift = Poly::var(v).pow(dr - dg);
        r = &(&r * &lc) - &(&(&lc_r * &shift) * g);
    }
    r
}

fn primitive_prs(a: Poly, b: Poly, v: VarId) -> Poly {
    let (mut f, mut g) = if a.degree_in(v) >= b.degree_in(v) {
        (a, b)
    } else {
        (b, a)
    };
    loop {
        let r = pseudo_remainder(&f, &g, v);
        if r.is_zero() {
            return primitive_part_in(&g, v);
        }
        if r.degree_in(v) == 0 {
            return Poly::one();
        }
        f = g;
        g = primitive_part_in(&r, v);
    }
}
