use super::basis::radical;
use super::gcd::gcd;
use super::resultant::resultant;
use super::Poly;

/// Eliminates the variables in `vars` from a polynomial system by iterated
/// resultants. Every returned polynomial is free of `vars`, nonzero, and
/// vanishes on the projection of the common complex zeros of the input.
///
/// A variable occurring in only one polynomial is dropped together with that
/// polynomial, so the result describes a superset of the projection.
pub fn eliminate(system: &[Poly], vars: &[usize]) -> Vec<Poly> {
    let mut set: Vec<Poly> = system
        .iter()
        .filter(|p| !p.is_zero())
        .map(radical_or_const)
        .collect();
    for &v in vars {
        let (with, without): (Vec<Poly>, Vec<Poly>) = set.into_iter().partition(|p| p.involves(v));
        set = without;
        for i in 0..with.len() {
            for j in i + 1..with.len() {
                let r = resultant(&with[i], &with[j], v).expect("both involve the variable");
                if !r.is_zero() {
                    set.push(radical_or_const(&r));
                }
            }
        }
        set.sort_by(Poly::canonical_cmp);
        set.dedup();
    }
    set
}

fn radical_or_const(p: &Poly) -> Poly {
    if p.is_constant() {
        p.clone()
    } else {
        radical(p)
    }
}

/// Nonzero polynomial in `keep` alone vanishing at every common zero of the
/// system, or `None` if elimination does not produce one.
pub fn univariate_eliminant(system: &[Poly], keep: usize) -> Option<Poly> {
    let n = system.first()?.nvars();
    let others: Vec<usize> = (1..=n).filter(|&v| v != keep).collect();
    let out = eliminate(system, &others);
    let mut acc: Option<Poly> = None;
    for p in out {
        acc = Some(match acc {
            None => p,
            Some(a) => gcd(&a, &p),
        });
    }
    acc
}
