//! Intersection numbers on Gr(2,5) by the Pieri rule, compared with the
//! multiplication tables of the GM threefold and fourfold models.
//!
//! A GM fourfold is `Gr(2,5) ∩ H ∩ Q`, so `∫_W α = 2 ∫_Gr α σ₁²`; the
//! threefold cuts one more hyperplane.

use std::collections::BTreeMap;

use ku_lattice::grr::ch_dual_tautological;
use ku_lattice::linalg::{qi, Q};
use ku_lattice::{make_variety_model, GradedClass, ModelClasses, VarietyKind, VarietySpec};

/// Schubert classes of Gr(2,5): partitions `(a, b)` with `3 ≥ a ≥ b ≥ 0`.
type Schubert = BTreeMap<(u8, u8), i64>;

fn sigma(a: u8, b: u8) -> Schubert {
    BTreeMap::from([((a, b), 1)])
}

/// `σ_k · σ_λ` summed over horizontal strips of size `k`.
fn pieri(k: u8, x: &Schubert) -> Schubert {
    let mut out = Schubert::new();
    for (&(a, b), &c) in x {
        for m1 in a..=3 {
            for m2 in b..=a {
                if m1 + m2 == a + b + k {
                    *out.entry((m1, m2)).or_default() += c;
                }
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn add(x: &Schubert, y: &Schubert, sign: i64) -> Schubert {
    let mut out = x.clone();
    for (&k, &c) in y {
        *out.entry(k).or_default() += sign * c;
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Product with a monomial `σ₁^i σ₂^j`.
fn times(x: &Schubert, sigma1: usize, sigma2: usize) -> Schubert {
    let mut out = x.clone();
    for _ in 0..sigma1 {
        out = pieri(1, &out);
    }
    for _ in 0..sigma2 {
        out = pieri(2, &out);
    }
    out
}

fn degree(x: &Schubert) -> i64 {
    x.get(&(3, 3)).copied().unwrap_or(0)
}

#[test]
fn pieri_sanity() {
    assert_eq!(degree(&times(&sigma(0, 0), 6, 0)), 5);
    let s11 = add(&pieri(1, &sigma(1, 0)), &sigma(2, 0), -1);
    assert_eq!(s11, sigma(1, 1));
    assert_eq!(pieri(2, &sigma(2, 0)), BTreeMap::from([((3, 1), 1), ((2, 2), 1)]));
}

#[test]
fn fourfold_table_matches_pieri() {
    let w = make_variety_model(&VarietySpec::new(VarietyKind::Gm4fold)).unwrap();
    let on_w = |s1: usize, s2: usize| 2 * degree(&times(&sigma(0, 0), s1 + 2, s2));
    let h = w.hyperplane();
    let s2 = w.basis_class("sigma2").unwrap();
    let integral = |c: &GradedClass| w.integrate(c).unwrap();

    assert_eq!(integral(&h.pow(4)), qi(on_w(4, 0)));
    assert_eq!(integral(&(&h.pow(2) * &s2)), qi(on_w(2, 1)));
    assert_eq!(integral(&(&s2 * &s2)), qi(on_w(0, 2)));

    // σ₁,₁ = σ₁² − σ₂
    let s11 = w.alias("sigma11").unwrap();
    let times_s11 = |x: &Schubert| add(&times(x, 2, 0), &times(x, 0, 1), -1);
    let s11_gr = times_s11(&sigma(0, 0));
    assert_eq!(s11_gr, sigma(1, 1));
    let on_w_class = |c: &Schubert| 2 * degree(&times(c, 2, 0));
    assert_eq!(integral(&(&s11 * &h.pow(2))), qi(on_w_class(&times(&s11_gr, 2, 0))));
    assert_eq!(integral(&(&s11 * &s2)), qi(on_w_class(&times(&s11_gr, 0, 1))));
    assert_eq!(integral(&(&s11 * &s11)), qi(on_w_class(&times_s11(&s11_gr))));
    assert_eq!(integral(&(&s11 * &s11)), qi(2));
}

#[test]
fn threefold_classes_match_pieri() {
    let x = make_variety_model(&VarietySpec::new(VarietyKind::Gm3fold)).unwrap();
    let on_x = |c: &Schubert, s1: usize| 2 * degree(&times(c, s1 + 3, 0));
    let h = x.hyperplane();
    assert_eq!(x.integrate(&h.pow(3)).unwrap(), qi(on_x(&sigma(0, 0), 3)));

    // c₂(U^∨) = σ₁,₁ restricts to a curve class of H-degree `on_x(σ₁,₁, 1)`.
    let u = ch_dual_tautological(&x).unwrap();
    let c1 = u.part(1);
    let ch2 = u.part(2);
    let c2 = &c1.pow(2).scale(&Q::new(1.into(), 2.into())) - &ch2;
    assert_eq!(c1, h);
    let s11_degree = on_x(&sigma(1, 1), 1);
    assert_eq!(x.integrate(&(&c2 * &h)).unwrap(), qi(s11_degree));
    assert_eq!(s11_degree, 4);
}
