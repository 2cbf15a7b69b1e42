use super::gcd::{content_primitive, gcd, yun_layers};
use super::{exact_divide, Poly};

/// A basis element: primitive in its level variable, squarefree, positive
/// leading coefficient, non-constant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NormalizedFactor {
    pub poly: Poly,
    pub squarefree: bool,
}

impl NormalizedFactor {
    pub fn level(&self) -> usize {
        self.poly.level()
    }
}

/// Splits off variables dividing every term: returns the variables `x_i`
/// with positive minimal exponent and the cofactor.
pub fn split_monomial_factors(p: &Poly) -> (Vec<usize>, Poly) {
    let n = p.nvars();
    if p.is_zero() {
        return (vec![], p.clone());
    }
    let mut mins = vec![u32::MAX; n];
    for (m, _) in p.terms() {
        for (i, &e) in m.0.iter().enumerate() {
            mins[i] = mins[i].min(e);
        }
    }
    let vars: Vec<usize> = (0..n).filter(|&i| mins[i] > 0).map(|i| i + 1).collect();
    if vars.is_empty() {
        return (vars, p.clone());
    }
    let rest = Poly::from_terms(
        n,
        p.terms().map(|(m, c)| {
            let e = m.0.iter().zip(&mins).map(|(a, b)| a - b).collect();
            (super::Monomial(e), c.clone())
        }),
    );
    (vars, rest)
}

/// Squarefree, primitive pieces of `p` (not yet mutually coprime).
fn squarefree_pieces(p: &Poly, out: &mut Vec<Poly>) {
    if p.is_constant() {
        return;
    }
    let (vars, rest) = split_monomial_factors(p);
    for v in vars {
        out.push(Poly::var(p.nvars(), v));
    }
    if rest.is_constant() {
        return;
    }
    let v = rest.level();
    let (content, prim) = content_primitive(&rest, v).expect("nonzero");
    squarefree_pieces(&content, out);
    for layer in yun_layers(&prim, v).expect("nonzero") {
        if !layer.is_constant() {
            out.push(layer.normalize_integer());
        }
    }
}

/// Inserts a squarefree primitive `q` into a pairwise coprime list, splitting
/// existing elements on common factors.
fn insert_coprime(list: &mut Vec<Poly>, mut q: Poly) {
    let mut i = 0;
    while i < list.len() && !q.is_constant() {
        let g = gcd(&q, &list[i]);
        if g.is_constant() {
            i += 1;
            continue;
        }
        let b = list.swap_remove(i);
        let rest = exact_divide(&b, &g).expect("gcd divides");
        q = exact_divide(&q, &g).expect("gcd divides");
        list.push(g.normalize_integer());
        if !rest.is_constant() {
            list.push(rest.normalize_integer());
        }
        // New elements sit at the end; they are coprime with q's remainder,
        // so restarting from `i` is enough.
    }
    if !q.is_constant() {
        list.push(q.normalize_integer());
    }
}

/// Finest squarefree basis of a set of polynomials: pairwise coprime,
/// squarefree, normalized factors such that every nonzero input is a constant
/// times a product of powers of basis elements. Sorted canonically.
pub fn finest_squarefree_basis<'a>(polys: impl IntoIterator<Item = &'a Poly>) -> Vec<NormalizedFactor> {
    let mut pieces = Vec::new();
    for p in polys {
        if !p.is_zero() {
            squarefree_pieces(p, &mut pieces);
        }
    }
    pieces.sort_by(Poly::canonical_cmp);
    pieces.dedup();
    let mut list: Vec<Poly> = Vec::new();
    for q in pieces {
        insert_coprime(&mut list, q);
    }
    list.sort_by(Poly::canonical_cmp);
    list.dedup();
    list.into_iter()
        .map(|poly| NormalizedFactor {
            poly,
            squarefree: true,
        })
        .collect()
}

/// Product of the basis of a single polynomial: its radical up to a constant.
pub(crate) fn radical(p: &Poly) -> Poly {
    finest_squarefree_basis([p])
        .into_iter()
        .fold(Poly::one(p.nvars()), |acc, f| &acc * &f.poly)
}
