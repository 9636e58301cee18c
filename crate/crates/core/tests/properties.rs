use kernelbench::kernels::kernel_eval;
use kernelbench::{
    format_poly, parse_poly, Dim, EvalPoint, KernelId, MonomialTerm, MultiIndex, PolyObservable,
    RationalComplex, Wirtinger,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = RationalComplex> {
    (-20i64..=20, 1i64..=12, -20i64..=20, 1i64..=12).prop_map(|(a, b, c, d)| {
        RationalComplex::ratio(a, b) + RationalComplex::ratio(c, d) * RationalComplex::i()
    })
}

fn poly(dim: Dim, max_deg: u32) -> impl Strategy<Value = PolyObservable> {
    let n = dim.n();
    prop::collection::vec(
        (
            coeff(),
            prop::collection::vec(0..=max_deg, n),
            prop::collection::vec(0..=max_deg, n),
        ),
        0..6,
    )
    .prop_map(move |terms| {
        PolyObservable::from_terms(
            dim,
            terms.into_iter().map(|(c, h, a)| {
                MonomialTerm::new(c, MultiIndex::new(&h).unwrap(), MultiIndex::new(&a).unwrap())
            }),
        )
        .unwrap()
    })
}

fn dim() -> impl Strategy<Value = Dim> {
    prop_oneof![Just(Dim::One), Just(Dim::Two)]
}

fn dim_and_poly() -> impl Strategy<Value = (Dim, PolyObservable)> {
    dim().prop_flat_map(|d| (Just(d), poly(d, 4)))
}

fn interior_point(dim: Dim) -> impl Strategy<Value = EvalPoint> {
    let n = dim.n();
    (
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n),
        0.0f64..0.95,
    )
        .prop_map(|(raw, radius)| {
            let v: Vec<Complex64> = raw.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
            let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            let scale = if norm > 0.0 { radius / norm } else { 0.0 };
            let coords: Vec<Complex64> = v.iter().map(|c| c * scale).collect();
            EvalPoint::interior(&coords).unwrap()
        })
}

proptest! {
    #[test]
    fn format_then_parse_round_trips((d, f) in dim_and_poly()) {
        let text = format_poly(&f);
        let back = parse_poly(&text, d).unwrap();
        prop_assert_eq!(back, f, "text was {}", text);
    }

    #[test]
    fn wirtinger_derivatives_commute(f in poly(Dim::Two, 4), i in 1usize..=2, j in 1usize..=2) {
        for (a, b) in [
            (Wirtinger::Holo, Wirtinger::Anti),
            (Wirtinger::Holo, Wirtinger::Holo),
            (Wirtinger::Anti, Wirtinger::Anti),
        ] {
            let ab = f.differentiate(a, i).unwrap().differentiate(b, j).unwrap();
            let ba = f.differentiate(b, j).unwrap().differentiate(a, i).unwrap();
            prop_assert_eq!(ab, ba);
        }
    }

    #[test]
    fn rational_addition_is_exact(a in coeff(), b in coeff()) {
        prop_assert_eq!((a.clone() + b.clone()) - b, a);
    }

    #[test]
    fn polynomial_addition_is_exact((f, g) in dim().prop_flat_map(|d| (poly(d, 3), poly(d, 3)))) {
        prop_assert_eq!(f.add(&g).unwrap().sub(&g).unwrap(), f);
    }

    #[test]
    fn evaluation_is_additive(
        (f, g, z) in dim().prop_flat_map(|d| (poly(d, 4), poly(d, 4), interior_point(d)))
    ) {
        let merged = f.add(&g).unwrap().eval(&z).unwrap();
        let separate = f.eval(&z).unwrap() + g.eval(&z).unwrap();
        prop_assert!((merged - separate).norm() <= 1e-12 * (1.0 + separate.norm()));
    }

    #[test]
    fn kernels_are_hermitian(
        (z, w) in (interior_point(Dim::One), interior_point(Dim::One)),
        (u, v) in (interior_point(Dim::Two), interior_point(Dim::Two)),
    ) {
        for id in KernelId::ALL {
            let (a, b) = if id.dim() == Dim::One { (&z, &w) } else { (&u, &v) };
            let k_ab = kernel_eval(id, a, b).unwrap();
            let k_ba = kernel_eval(id, b, a).unwrap();
            prop_assert!((k_ab - k_ba.conj()).norm() <= 1e-14 * k_ab.norm());
        }
    }

    #[test]
    fn kernel_diagonal_is_positive(z in interior_point(Dim::One), u in interior_point(Dim::Two)) {
        for id in KernelId::ALL {
            let a = if id.dim() == Dim::One { &z } else { &u };
            let k = kernel_eval(id, a, a).unwrap();
            prop_assert!(k.re > 0.0 && k.im.abs() <= 1e-15 * k.re);
        }
    }
}
