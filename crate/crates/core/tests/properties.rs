use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use ecqe::algnum::{sign_at, Coord, SamplePoint};
use ecqe::formula::{evaluate_qf, parse, parse_qf, ParseMode, Qf, Relation};
use ecqe::poly::{
    content_primitive, exact_divide, finest_squarefree_basis, is_coprime, resultant, Monomial, Poly,
};
use ecqe::projection::{brown_mccallum_p, reduced_p_e, semireduced_p_e_star};
use ecqe::realroot::{isolate, sturm::count_real_roots};

fn poly_strategy(nvars: usize, max_exp: u32, max_terms: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(
        (prop::collection::vec(0..=max_exp, nvars), -6i64..=6),
        1..=max_terms,
    )
    .prop_map(move |terms| {
        Poly::from_terms(
            nvars,
            terms.into_iter().map(|(e, c)| (Monomial(e), BigInt::from(c))),
        )
    })
}

fn univariate_strategy() -> impl Strategy<Value = Vec<BigInt>> {
    prop::collection::vec(-9i64..=9, 1..=7)
        .prop_map(|v| v.into_iter().map(BigInt::from).collect::<Vec<_>>())
        .prop_filter("nonzero", |v| v.iter().any(|c| c != &BigInt::from(0)))
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn names(n: usize) -> Vec<String> {
    ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
}

/// `p` is a constant times a product of powers of the elements of `basis`.
fn is_product(p: &Poly, basis: &[Poly]) -> bool {
    let mut rest = p.clone();
    loop {
        if rest.is_constant() {
            return !rest.is_zero();
        }
        let before = rest.clone();
        for b in basis {
            while let Some(q) = exact_divide(&rest, b) {
                rest = q;
            }
        }
        if rest == before {
            return false;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn resultant_swaps_with_sign(f in poly_strategy(2, 3, 4), g in poly_strategy(2, 3, 4)) {
        prop_assume!(f.involves(2) && g.involves(2));
        let fg = resultant(&f, &g, 2).unwrap();
        let gf = resultant(&g, &f, 2).unwrap();
        let odd = (f.degree(2) * g.degree(2)) % 2 == 1;
        prop_assert_eq!(fg, if odd { -gf } else { gf });
    }

    #[test]
    fn resultant_is_multiplicative(f in poly_strategy(2, 2, 3), g in poly_strategy(2, 2, 3), h in poly_strategy(2, 2, 3)) {
        prop_assume!(f.involves(2) && g.involves(2) && h.involves(2));
        let lhs = resultant(&(&f * &g), &h, 2).unwrap();
        let rhs = &resultant(&f, &h, 2).unwrap() * &resultant(&g, &h, 2).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn squarefree_basis_is_coprime_and_spans(ps in prop::collection::vec(poly_strategy(2, 2, 3), 1..=3)) {
        prop_assume!(ps.iter().all(|p| !p.is_constant()));
        let squares: Vec<Poly> = ps.iter().map(|p| &(p * p) * p).collect();
        let basis: Vec<Poly> = finest_squarefree_basis(&squares).into_iter().map(|f| f.poly).collect();
        for (i, a) in basis.iter().enumerate() {
            prop_assert!(!a.is_constant());
            for b in &basis[i + 1..] {
                prop_assert!(is_coprime(a, b), "{} and {} share a factor", a, b);
            }
        }
        for p in &squares {
            prop_assert!(is_product(p, &basis), "{} not spanned", p);
        }
    }

    #[test]
    fn content_times_primitive_part(p in poly_strategy(3, 2, 4)) {
        prop_assume!(!p.is_zero());
        let (c, q) = content_primitive(&p, 3).unwrap();
        prop_assert!(!c.involves(3));
        prop_assert_eq!(&c * &q, p);
    }

    #[test]
    fn sign_is_multiplicative(
        u in univariate_strategy(),
        pick in 0usize..8,
        y in rational(),
        f in poly_strategy(2, 2, 3),
        g in poly_strategy(2, 2, 3),
    ) {
        let roots = isolate(&u).unwrap();
        let x = if roots.is_empty() {
            Coord::Rational(BigRational::from_integer(1.into()))
        } else {
            Coord::from_isolated(&u, &roots[pick % roots.len()])
        };
        let pt = SamplePoint::new(vec![x, Coord::Rational(y)]);
        prop_assert_eq!(sign_at(&(&f * &g), &pt), sign_at(&f, &pt) * sign_at(&g, &pt));
    }

    #[test]
    fn sturm_count_matches_isolation(u in univariate_strategy()) {
        prop_assert_eq!(count_real_roots(&u), isolate(&u).unwrap().len());
    }

    #[test]
    fn formula_text_round_trips(
        ec in poly_strategy(3, 2, 3),
        atom in poly_strategy(3, 2, 3),
        rel in 0usize..6,
        assume in poly_strategy(3, 1, 2),
    ) {
        prop_assume!(ec.involves(3) && !assume.involves(3) && !assume.involves(2) && !assume.is_constant());
        let n = names(3);
        let rels = ["<", "<=", "=", "/=", ">=", ">"];
        let src = format!(
            "vars: x, y, z;\nassume [{} /= 0]\n(E y)(E z)[{} = 0 /\\ [{} {} 0 \\/ y > 0]]",
            assume.to_text(&n), ec.to_text(&n), atom.to_text(&n), rels[rel]
        );
        let f = parse(&src, ParseMode::Gsps).unwrap();
        let again = parse(&f.to_text(), ParseMode::Gsps).unwrap();
        prop_assert_eq!(again, f);
    }

    #[test]
    fn negation_follows_de_morgan(
        a in poly_strategy(2, 2, 3),
        b in poly_strategy(2, 2, 3),
        x in rational(),
        y in rational(),
    ) {
        let pa = Qf::atom(a, Relation::Gt);
        let pb = Qf::atom(b, Relation::Le);
        let pt = SamplePoint::rational(&[x, y]);
        let lhs = Qf::and(vec![pa.clone(), pb.clone()]).negate();
        let rhs = Qf::or(vec![pa.negate(), pb.negate()]);
        prop_assert_eq!(evaluate_qf(&lhs, &pt), evaluate_qf(&rhs, &pt));
        prop_assert_eq!(evaluate_qf(&lhs, &pt), !evaluate_qf(&Qf::and(vec![pa, pb]), &pt));
    }

    #[test]
    fn reduced_operators_are_nested(ps in prop::collection::vec(poly_strategy(3, 2, 3), 2..=3)) {
        prop_assume!(ps[0].involves(3));
        let set = |v: Vec<ecqe::poly::NormalizedFactor>| v.into_iter().map(|f| f.poly.to_text(&names(3))).collect::<BTreeSet<_>>();
        let pe = set(reduced_p_e(&ps, &ps[..1], 3).unwrap());
        let pes = set(semireduced_p_e_star(&ps, &ps[..1], 3).unwrap());
        let p = set(brown_mccallum_p(&ps, 3).unwrap());
        prop_assert!(pe.is_subset(&pes), "P_E {:?} not in P_E* {:?}", pe, pes);
        prop_assert!(pes.is_subset(&p), "P_E* {:?} not in P {:?}", pes, p);
    }
}

#[test]
fn assumption_text_parses_as_matrix() {
    let n = names(2);
    let q = parse_qf("x (y - 1) /= 0 /\\ x > -1", &n).unwrap();
    assert_eq!(parse_qf(&q.to_text(&n), &n).unwrap(), q);
}
