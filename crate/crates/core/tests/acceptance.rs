//! Acceptance criteria, one line each. Every value is recomputed from the
//! public API and compared exactly with a literal.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;

use ku_lattice::functor::{image_lattice, mutate_class, phi_matrix, phi_star, phi_star_ch, SourceClass};
use ku_lattice::grr::{
    adjoint_euler, ch_line_bundle, divisor_pushforward, euler_pairing, todd_inverse_line_bundle,
    CoverSetup,
};
use ku_lattice::k3picard::{validate_lattice, Family};
use ku_lattice::knum::{
    ch_of_mukai, express_in_basis, mukai_pairing, KnumClass, KuBasis, KuBasisName, MukaiVector,
};
use ku_lattice::lift::{
    brute_force_lift, closed_form_lift_gm3, closed_form_lift_qds, expected_dimension, ModuliKind,
};
use ku_lattice::linalg::{q, qi, Q};
use ku_lattice::{make_variety_model, Error, ModelClasses, VarietyKind, VarietyModel, VarietySpec};

type Outcome = Result<(), String>;

macro_rules! ensure_eq {
    ($left:expr, $right:expr, $($ctx:tt)+) => {{
        let (l, r) = (&$left, &$right);
        if l != r {
            return Err(format!("{}: got {:?}, expected {:?}", format!($($ctx)+), l, r));
        }
    }};
}

fn model(kind: VarietyKind) -> Arc<VarietyModel> {
    make_variety_model(&VarietySpec::new(kind)).unwrap()
}

fn g2(g: [[i64; 2]; 2]) -> Vec<Vec<i64>> {
    g.iter().map(|r| r.to_vec()).collect()
}

fn mukai(g: &[Vec<i64>], c: &[i64]) -> SourceClass {
    SourceClass::Mukai(MukaiVector::from_coords(g, c).unwrap())
}

fn gram(b: &KuBasis) -> [[BigInt; 2]; 2] {
    b.recomputed_gram().unwrap()
}

fn big(m: [[i64; 2]; 2]) -> [[BigInt; 2]; 2] {
    m.map(|r| r.map(BigInt::from))
}

fn coprime() -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for a in -12i64..=12 {
        for b in -12i64..=12 {
            if a.gcd(&b) == 1 {
                out.push((a, b));
            }
        }
    }
    out
}

fn euler_matrices() -> Outcome {
    let mu = KuBasis::mu(&model(VarietyKind::QuarticDoubleSolid)).unwrap();
    ensure_eq!(gram(&mu), big([[-1, -1], [-1, -2]]), "mu Gram");
    let kappa = KuBasis::kappa(&model(VarietyKind::Gm3fold)).unwrap();
    ensure_eq!(gram(&kappa), big([[-1, 0], [0, -1]]), "kappa Gram");
    Ok(())
}

fn qds_pipeline() -> Outcome {
    let y = model(VarietyKind::QuarticDoubleSolid);
    let oh = ch_line_bundle(&y.hyperplane()).unwrap();
    ensure_eq!(euler_pairing(&y.unit(), &oh).unwrap(), qi(4), "chi(O, O(H))");

    let s = CoverSetup::quartic_double_solid(vec![vec![4]]).unwrap();
    let pushed = divisor_pushforward(&s, &ch_line_bundle(&s.source.hyperplane()).unwrap()).unwrap();
    ensure_eq!(euler_pairing(&ch_line_bundle(&s.target.hyperplane()).unwrap(), &pushed).unwrap(), qi(2),
        "chi(O(H), j_* O_X(H))");
    ensure_eq!(euler_pairing(&s.target.unit(), &pushed).unwrap(), qi(4), "chi(O, j_* O_X(H))");

    let g = g2([[4, 1], [1, -2]]);
    let s = CoverSetup::quartic_double_solid(g.clone()).unwrap();
    let cases = [
        ("O_x", [0, 0, 0, 1], [2, -1]),
        ("O_X(-H)", [1, -1, 0, 3], [2, 0]),
        ("O_X", [1, 0, 0, 1], [2, -2]),
        ("O_H", [0, 1, 0, -2], [0, -2]),
        ("O_L", [0, 0, 1, 1], [3, -2]),
    ];
    for (name, w, v) in cases {
        ensure_eq!(phi_star(&s, &mukai(&g, &w)).unwrap().coords, v, "Phi_*[{name}]");
    }

    let k_x = &y.unit().scale_int(3) - &(&oh - &y.point());
    let mu = KuBasis::mu(&y).unwrap();
    ensure_eq!(express_in_basis(&mu, &k_x).unwrap(), mu.class(2, -1), "[K_x]");
    ensure_eq!(euler_pairing(&k_x, &k_x).unwrap(), qi(-2), "chi(K_x, K_x)");
    Ok(())
}

fn gm3_pipeline() -> Outcome {
    let g = g2([[10, 6], [6, 2]]);
    let s = CoverSetup::gm_threefold(g.clone()).unwrap();
    let y = &s.target;
    let pushed = divisor_pushforward(&s, &s.source.unit()).unwrap();
    ensure_eq!(euler_pairing(&y.unit(), &pushed).unwrap(), qi(2), "chi(O_Y, O_X)");
    let mutated = mutate_class(&pushed, &s.collection[1].ch).unwrap();
    ensure_eq!(euler_pairing(&y.unit(), &mutated).unwrap(), qi(-23), "chi(O_Y, L_U j_* O_X)");

    let o_minus_h = ch_line_bundle(&-&s.source.hyperplane()).unwrap();
    let expected = y.class(&[("1", qi(13)), ("H", qi(-4)), ("l", qi(-10)), ("pt", q(10, 3))]).unwrap();
    ensure_eq!(phi_star_ch(&s, &o_minus_h).unwrap(), expected, "ch Phi(O_X(-H))");
    ensure_eq!(phi_star(&s, &mukai(&g, &[1, -1, 0, 6])).unwrap().coords, [5, 4], "Phi_*[O_X(-H)]");
    ensure_eq!(phi_star(&s, &mukai(&g, &[1, 0, 0, 1])).unwrap().coords, [0, 4], "Phi_*[O_X]");
    ensure_eq!(phi_star(&s, &mukai(&g, &[0, 0, 0, 1])).unwrap().coords, [1, 2], "Phi_*[O_x]");

    let mut lattices: Vec<([[i64; 2]; 2], i64, [i64; 2])> =
        (6..=26).map(|x| ([[10, x], [x, 2]], 2, [1, 6 + x])).collect();
    lattices.push(([[10, 5], [5, 0]], 1, [0, 9]));
    lattices.push(([[10, 9], [9, 4]], 3, [2, 17]));
    lattices.push(([[10, 7], [7, 4]], 3, [2, 15]));
    for (gram, s_coord, v) in lattices {
        let g = g2(gram);
        let setup = CoverSetup::gm_threefold(g.clone()).unwrap();
        ensure_eq!(phi_star(&setup, &mukai(&g, &[1, 0, 1, s_coord])).unwrap().coords, v,
            "Phi_*[O_S(L)] on {gram:?}");
    }
    Ok(())
}

fn gm4_pipeline() -> Outcome {
    let s = CoverSetup::gm_fourfold().unwrap();
    let (x, w) = (&s.source, &s.target);
    let td_x = x.class(&[("1", qi(1)), ("H", q(1, 2)), ("l", q(17, 6)), ("pt", qi(1))]).unwrap();
    ensure_eq!(x.todd(), td_x, "td(X)");
    let td_w = w
        .class(&[("1", qi(1)), ("H", qi(1)), ("H^2", q(2, 3)), ("sigma2", q(-1, 12)), ("l", q(17, 6)), ("pt", qi(1))])
        .unwrap();
    ensure_eq!(w.todd(), td_w, "td(W)");
    let chi_w: Vec<Q> = (-2..=2)
        .map(|t| euler_pairing(&w.unit(), &ch_line_bundle(&w.hyperplane().scale_int(t)).unwrap()).unwrap())
        .collect();
    ensure_eq!(chi_w, [1, 0, 1, 9, 39].map(qi).to_vec(), "chi(O_W(tH))");
    let td_tj = x.class(&[("1", qi(1)), ("H", q(-1, 2)), ("l", q(5, 3)), ("pt", q(-5, 12))]).unwrap();
    ensure_eq!(s.td_tj, td_tj, "td(T_j)");
    ensure_eq!(todd_inverse_line_bundle(&s.pull_back(&s.divisor).unwrap()).unwrap(), td_tj, "td(T_j) from N");

    let kappa = KuBasis::kappa(x).unwrap();
    let h = w.hyperplane();
    let image1 = &(&w.unit().scale_int(-2) + &w.alias("sigma11").unwrap()) - &w.point().scale(&q(1, 2));
    let image2 = &(&w.unit().scale_int(-4) + &h.scale_int(2)) - &h.pow(3).scale(&q(1, 6));
    ensure_eq!(phi_star_ch(&s, &kappa.basis_ch[0]).unwrap(), image1, "ch image of kappa1");
    ensure_eq!(phi_star_ch(&s, &kappa.basis_ch[1]).unwrap(), image2, "ch image of kappa2");
    for v in [[1, 0], [0, 1]] {
        let k = SourceClass::Knum(KnumClass::new(KuBasisName::Kappa, v[0], v[1]));
        ensure_eq!(phi_star(&s, &k).unwrap().coords, v, "lambda coords of {v:?}");
    }
    ensure_eq!(gram(&KuBasis::lambda(w).unwrap()), big([[-2, 0], [0, -2]]), "lambda Gram");
    Ok(())
}

fn wall(v: [i64; 2], basis: KuBasisName, w_square: i64) -> bool {
    let [a, b] = v;
    let chi = match basis {
        KuBasisName::Mu => -(a * a + 2 * a * b + 2 * b * b),
        KuBasisName::Kappa => -(a * a + b * b),
        KuBasisName::Lambda => -2 * (a * a + b * b),
    };
    w_square + 2 < -chi + 1
}

fn qds_lifts() -> Outcome {
    let g = g2([[4, 1], [1, -2]]);
    let s = CoverSetup::quartic_double_solid(g.clone()).unwrap();
    for (a, b) in coprime() {
        let c = closed_form_lift_qds(a, b).map_err(|e| format!("({a},{b}): {e}"))?;
        ensure_eq!(phi_star(&s, &SourceClass::Mukai(c.w.clone())).unwrap().coords, [a, b], "Phi_*(w) for ({a},{b})");
        let sq = mukai_pairing(&c.w, &c.w).unwrap();
        ensure_eq!(c.formula_square, sq, "branch formula for ({a},{b})");
        if sq < -2 || !wall([a, b], KuBasisName::Mu, sq) {
            return Err(format!("({a},{b}): w^2 = {sq}"));
        }
        if sq + 2 >= a * a + 2 * a * b + 2 * b * b + 1 {
            return Err(format!("({a},{b}): wall inequality fails for w^2 = {sq}"));
        }
    }
    Ok(())
}

fn gm3_lifts() -> Outcome {
    let mut covered = 0;
    for (p, qq) in coprime() {
        let c = match closed_form_lift_gm3(p, qq) {
            Ok(c) => c,
            Err(Error::OutsideCoverage(..)) => continue,
            Err(e) => return Err(format!("({p},{qq}): {e}")),
        };
        covered += 1;
        let s = CoverSetup::gm_threefold(c.gram.clone()).unwrap();
        ensure_eq!(phi_star(&s, &SourceClass::Mukai(c.w.clone())).unwrap().coords, [p, qq], "Phi_*(w) for ({p},{qq})");
        let sq = mukai_pairing(&c.w, &c.w).unwrap();
        if sq < -2 || !wall([p, qq], KuBasisName::Kappa, sq) {
            return Err(format!("({p},{qq}): w^2 = {sq}"));
        }
    }
    ensure_eq!(covered, 367, "covered coprime classes");
    for (p, qq, gram) in [(0, 1, [[10, 5], [5, 0]]), (2, 1, [[10, 9], [9, 4]]), (-2, 1, [[10, 7], [7, 4]])] {
        let c = closed_form_lift_gm3(p, qq).unwrap();
        ensure_eq!(c.gram, g2(gram), "lattice for ({p},{qq})");
        ensure_eq!(c.w_square, -2, "w^2 for ({p},{qq})");
    }
    Ok(())
}

fn oracle() -> Outcome {
    let qds = phi_matrix(&CoverSetup::quartic_double_solid(g2([[4, 1], [1, -2]])).unwrap()).unwrap();
    for (a, b) in coprime() {
        let c = closed_form_lift_qds(a, b).unwrap();
        let found = brute_force_lift(&qds, &c.v, 12).unwrap();
        if !found.iter().any(|f| f.w == c.w.coords()) {
            return Err(format!("qds ({a},{b}): closed-form w not found"));
        }
        if let Some(f) = found.iter().find(|f| qds.apply(&f.w).unwrap().coords != [a, b]) {
            return Err(format!("qds ({a},{b}): search returned {:?}", f.w));
        }
    }
    for (p, qq) in coprime() {
        let Ok(c) = closed_form_lift_gm3(p, qq) else { continue };
        let map = phi_matrix(&CoverSetup::gm_threefold(c.gram.clone()).unwrap()).unwrap();
        let found = brute_force_lift(&map, &c.v, 12).unwrap();
        if !found.iter().any(|f| f.w == c.w.coords()) {
            return Err(format!("gm3 ({p},{qq}): closed-form w not found"));
        }
        if let Some(f) = found.iter().find(|f| map.apply(&f.w).unwrap().coords != [p, qq]) {
            return Err(format!("gm3 ({p},{qq}): search returned {:?}", f.w));
        }
    }
    let rank_one = phi_matrix(&CoverSetup::quartic_double_solid(vec![vec![4]]).unwrap()).unwrap();
    let img = image_lattice(&rank_one);
    for a in (-12i64..=12).filter(|a| a % 2 != 0) {
        for b in -12..=12 {
            let v = KnumClass::new(KuBasisName::Mu, a, b);
            if img.contains(&v) || !brute_force_lift(&rank_one, &v, 12).unwrap().is_empty() {
                return Err(format!("({a},{b}) lifts on a Picard rank one quartic"));
            }
        }
    }
    Ok(())
}

fn lattices() -> Outcome {
    let mut cases: Vec<([[i64; 2]; 2], Family, bool)> =
        (6..=26).map(|x| ([[10, x], [x, 2]], Family::X2, true)).collect();
    cases.extend([
        ([[10, 5], [5, 0]], Family::FiveZero, true),
        ([[10, 7], [7, 4]], Family::X4, true),
        ([[10, 9], [9, 4]], Family::X4, true),
        ([[4, 1], [1, -2]], Family::QuarticWithLine, true),
        ([[10, 5], [5, 2]], Family::X2, false),
    ]);
    for (g, family, expected) in cases {
        ensure_eq!(validate_lattice(&g, family).unwrap().verdict, expected, "verdict for {g:?}");
    }
    Ok(())
}

fn properties() -> Outcome {
    let setups = [
        CoverSetup::quartic_double_solid(vec![vec![4]]).unwrap(),
        CoverSetup::quartic_double_solid(g2([[4, 1], [1, -2]])).unwrap(),
        CoverSetup::gm_threefold(g2([[10, 6], [6, 2]])).unwrap(),
        CoverSetup::gm_fourfold().unwrap(),
    ];
    let unit = |m: &Arc<VarietyModel>, i: usize| m.from_coeffs((0..m.len()).map(|k| qi((k == i) as i64)).collect());
    for s in &setups {
        let map = phi_matrix(s).unwrap();
        // Deterministic spread of 500 vectors.
        for n in 0..500i64 {
            let coords: Vec<i64> = (0..map.source_rank() as i64).map(|k| (n * (7 + 3 * k)) % 41 - 20).collect();
            ensure_eq!(phi_star(s, &map.source_class(&coords).unwrap()).unwrap(), map.apply(&coords).unwrap(),
                "linearity of {} at {coords:?}", s.label());
        }
        for i in 0..s.target.len() {
            for j in 0..s.source.len() {
                let (e, f) = (unit(&s.target, i), unit(&s.source, j));
                ensure_eq!(euler_pairing(&e, &divisor_pushforward(s, &f).unwrap()).unwrap(),
                    adjoint_euler(s, &e, &f).unwrap(), "adjunction on {} ({i},{j})", s.label());
            }
        }
    }
    for basis in [
        KuBasis::mu(&model(VarietyKind::QuarticDoubleSolid)).unwrap(),
        KuBasis::kappa(&model(VarietyKind::Gm3fold)).unwrap(),
        KuBasis::lambda(&model(VarietyKind::Gm4fold)).unwrap(),
    ] {
        let g = gram(&basis);
        ensure_eq!(g[0][1], g[1][0], "symmetry of the {} Gram", basis.name);
    }
    let g = g2([[4, 1], [1, -2]]);
    let k3 = make_variety_model(&VarietySpec::with_gram(VarietyKind::QuarticK3, g.clone())).unwrap();
    for n in 0..100i64 {
        let v = MukaiVector::from_coords(&g, &[n % 5 - 2, n % 7 - 3, n % 3 - 1, n % 11 - 5]).unwrap();
        let w = MukaiVector::from_coords(&g, &[n % 4 - 1, n % 9 - 4, n % 5 - 2, n % 13 - 6]).unwrap();
        let chi = euler_pairing(&ch_of_mukai(&k3, &v).unwrap(), &ch_of_mukai(&k3, &w).unwrap()).unwrap();
        ensure_eq!(Q::from_integer(mukai_pairing(&v, &w).unwrap().into()), -chi, "Mukai vs chi at {n}");
    }
    for kind in VarietyKind::ALL {
        let m = model(kind);
        ensure_eq!(m.associativity_violations(), vec![], "associativity of {}", m.id());
    }
    Ok(())
}

fn dimensions() -> Outcome {
    ensure_eq!(expected_dimension(&KnumClass::new(KuBasisName::Mu, 0, 1), ModuliKind::Enriques), 3, "mu (0,1)");
    ensure_eq!(expected_dimension(&KnumClass::new(KuBasisName::Lambda, 1, 0), ModuliKind::Cy2), 4, "lambda (1,0)");
    ensure_eq!(expected_dimension(&KnumClass::new(KuBasisName::Kappa, 1, 1), ModuliKind::Enriques), 3, "kappa (1,1)");
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("Euler matrices of the mu and kappa bases", euler_matrices),
        ("quartic double solid pipeline", qds_pipeline),
        ("GM threefold pipeline", gm3_pipeline),
        ("GM fourfold pipeline", gm4_pipeline),
        ("closed-form lifts, quartic double solid", qds_lifts),
        ("closed-form lifts, GM threefold", gm3_lifts),
        ("brute-force oracle agreement", oracle),
        ("Picard lattice checks", lattices),
        ("property suites", properties),
        ("moduli dimension spot checks", dimensions),
    ];
    let mut failures = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(()) => println!("criterion {:>2} PASS  {name}", i + 1),
            Err(e) => {
                println!("criterion {:>2} FAIL  {name}: {e}", i + 1);
                failures.push(i + 1);
            }
        }
    }
    if !failures.is_empty() {
        eprintln!("failed criteria: {failures:?}");
        std::process::exit(1);
    }
}
