use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use ku_lattice::functor::{phi_matrix, phi_star, PhiMap, SourceClass};
use ku_lattice::grr::{adjoint_euler, divisor_pushforward, euler_pairing, CoverSetup};
use ku_lattice::knum::{ch_of_mukai, mukai_pairing, mukai_vector, MukaiVector};
use ku_lattice::linalg::{q, Q};
use ku_lattice::{make_variety_model, GradedClass, ModelClasses, VarietyKind, VarietyModel, VarietySpec};

struct Fixture {
    setups: Vec<(CoverSetup, PhiMap)>,
    k3s: Vec<Arc<VarietyModel>>,
    models: Vec<Arc<VarietyModel>>,
}

fn fixture() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let setups = [
            CoverSetup::quartic_double_solid(vec![vec![4]]),
            CoverSetup::quartic_double_solid(vec![vec![4, 1], vec![1, -2]]),
            CoverSetup::gm_threefold(vec![vec![10, 6], vec![6, 2]]),
            CoverSetup::gm_threefold(vec![vec![10, 5], vec![5, 0]]),
            CoverSetup::gm_fourfold(),
        ]
        .into_iter()
        .map(|s| {
            let s = s.unwrap();
            let m = phi_matrix(&s).unwrap();
            (s, m)
        })
        .collect();
        let k3s = [
            (VarietyKind::QuarticK3, vec![vec![4, 1], vec![1, -2]]),
            (VarietyKind::Degree10K3, vec![vec![10, 7], vec![7, 4]]),
            (VarietyKind::Degree10K3, vec![vec![10]]),
        ]
        .into_iter()
        .map(|(k, g)| make_variety_model(&VarietySpec::with_gram(k, g)).unwrap())
        .collect();
        let models = VarietyKind::ALL
            .iter()
            .map(|&k| make_variety_model(&VarietySpec::new(k)).unwrap())
            .collect();
        Fixture { setups, k3s, models }
    })
}

fn class(m: &Arc<VarietyModel>, raw: &[(i64, i64)]) -> GradedClass {
    m.from_coeffs(raw.iter().take(m.len()).map(|&(n, d)| q(n, d)).collect())
}

fn rationals() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-20i64..=20, 1i64..=6), 6)
}

fn ints(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-40i64..=40, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn phi_is_linear(which in 0usize..5, u in ints(4), v in ints(4), a in -5i64..=5, b in -5i64..=5) {
        let (setup, map) = &fixture().setups[which];
        let n = map.source_rank();
        let combo: Vec<i64> = (0..n).map(|i| a * u[i] + b * v[i]).collect();
        let lhs = phi_star(setup, &map.source_class(&combo).unwrap()).unwrap();
        let pu = phi_star(setup, &map.source_class(&u[..n]).unwrap()).unwrap();
        let pv = phi_star(setup, &map.source_class(&v[..n]).unwrap()).unwrap();
        let expected = [0, 1].map(|i| a * pu.coords[i] + b * pv.coords[i]);
        prop_assert_eq!(lhs.coords, expected);
        prop_assert_eq!(lhs, map.apply(&combo).unwrap());
    }

    #[test]
    fn adjunction_holds(which in 0usize..5, e in rationals(), f in rationals()) {
        let (setup, _) = &fixture().setups[which];
        let e = class(&setup.target, &e);
        let f = class(&setup.source, &f);
        let lhs = euler_pairing(&e, &divisor_pushforward(setup, &f).unwrap()).unwrap();
        prop_assert_eq!(lhs, adjoint_euler(setup, &e, &f).unwrap());
    }

    #[test]
    fn euler_pairing_is_symmetric_on_k3(which in 0usize..3, e in rationals(), f in rationals()) {
        let k3 = &fixture().k3s[which];
        let (e, f) = (class(k3, &e), class(k3, &f));
        prop_assert_eq!(euler_pairing(&e, &f).unwrap(), euler_pairing(&f, &e).unwrap());
    }

    #[test]
    fn mukai_pairing_is_minus_chi(which in 0usize..3, v in ints(4), w in ints(4)) {
        let k3 = &fixture().k3s[which];
        let gram: Vec<Vec<i64>> = k3
            .picard_gram()
            .unwrap()
            .iter()
            .map(|r| r.iter().map(|x| i64::try_from(x).unwrap()).collect())
            .collect();
        let n = gram.len() + 2;
        let v = MukaiVector::from_coords(&gram, &v[..n]).unwrap();
        let w = MukaiVector::from_coords(&gram, &w[..n]).unwrap();
        let (cv, cw) = (ch_of_mukai(k3, &v).unwrap(), ch_of_mukai(k3, &w).unwrap());
        prop_assert_eq!(mukai_vector(k3, &cv).unwrap(), v.clone());
        let chi = euler_pairing(&cv, &cw).unwrap();
        prop_assert_eq!(Q::from_integer(mukai_pairing(&v, &w).unwrap().into()), -chi);
    }

    #[test]
    fn products_are_associative(which in 0usize..7, a in rationals(), b in rationals(), c in rationals()) {
        let m = &fixture().models[which];
        let (a, b, c) = (class(m, &a), class(m, &b), class(m, &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
    }
}

#[test]
fn gm4_sources_are_kappa_classes() {
    let (setup, map) = &fixture().setups[4];
    assert!(matches!(map.source_class(&[1, 0]).unwrap(), SourceClass::Knum(_)));
    assert_eq!(setup.source.kind(), VarietyKind::Gm3fold);
}
