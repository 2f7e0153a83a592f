//! Lifting classes of the Ku lattice to Mukai vectors on a specialized
//! branch K3 surface, and the numerical inequality those lifts must meet.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::functor::{image_lattice, kernel_lattice, phi_matrix, phi_star, PhiMap, SourceClass};
use crate::grr::CoverSetup;
use crate::knum::{knum_pairing, KnumClass, KuBasisName, MukaiVector};
use crate::linalg::{ceil_sqrt, inverse, round_half_up, Q};

pub const DEFAULT_BOX: i64 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FanoType {
    Qds,
    Gm3,
}

impl FanoType {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "qds" => Ok(FanoType::Qds),
            "gm3" => Ok(FanoType::Gm3),
            _ => Err(Error::UnsupportedVariety(s.to_string())),
        }
    }

    pub fn basis(self) -> KuBasisName {
        match self {
            FanoType::Qds => KuBasisName::Mu,
            FanoType::Gm3 => KuBasisName::Kappa,
        }
    }
}

fn mukai_coords<S: Serializer>(w: &MukaiVector, s: S) -> std::result::Result<S::Ok, S::Error> {
    w.coords().serialize(s)
}

/// One way the closed-form branches produce `w` for a class.
#[derive(Debug, Clone, Serialize)]
pub struct BranchOption {
    pub branch: String,
    /// Produced for `−v` and negated.
    pub negated: bool,
    pub gram: Vec<Vec<i64>>,
    pub x: Option<i64>,
    #[serde(serialize_with = "mukai_coords")]
    pub w: MukaiVector,
    /// `w²` as predicted by the branch's closed formula.
    pub formula_square: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LiftCertificate {
    pub fano_type: FanoType,
    pub v: KnumClass,
    /// `v = multiplicity · primitive`.
    pub multiplicity: i64,
    pub primitive: KnumClass,
    /// The class `w` lifts: `v` itself when a branch covers it, otherwise
    /// `primitive`.
    pub lifted: KnumClass,
    pub gram: Vec<Vec<i64>>,
    pub x: Option<i64>,
    #[serde(serialize_with = "mukai_coords")]
    pub w: MukaiVector,
    pub w_square: i64,
    pub formula_square: i64,
    pub branch: String,
    pub negated: bool,
    pub nonneg_ok: bool,
    pub wall_ok: bool,
    /// Whether the maximum of `w²` over every lift was computed exactly.
    pub complete: bool,
    /// Whether every lift of `lifted` (within the search when not
    /// complete) satisfies the strict inequality.
    pub all_lifts_ok: bool,
    pub diagnostics: Vec<BranchOption>,
}

/// `w² + 2 < −χ(v, v) + 1`.
pub fn check_wall_inequality(v: &KnumClass, w_square: i64) -> bool {
    w_square + 2 < -knum_pairing(v.basis, v.coords, v.coords) + 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModuliKind {
    Enriques,
    Cy2,
}

/// `−χ(v, v) + 1` for Enriques categories, `−χ(v, v) + 2` for CY2 ones.
pub fn expected_dimension(v: &KnumClass, kind: ModuliKind) -> i64 {
    let base = -knum_pairing(v.basis, v.coords, v.coords);
    match kind {
        ModuliKind::Enriques => base + 1,
        ModuliKind::Cy2 => base + 2,
    }
}

const QUARTIC_WITH_LINE: [[i64; 2]; 2] = [[4, 1], [1, -2]];

fn gram_vec(g: [[i64; 2]; 2]) -> Vec<Vec<i64>> {
    g.iter().map(|r| r.to_vec()).collect()
}

/// Branches for `a ≥ 0` on the quartic K3 with a line.
fn qds_direct(a: i64, b: i64) -> Option<BranchOption> {
    if a < 0 {
        return None;
    }
    let g = gram_vec(QUARTIC_WITH_LINE);
    let m = |r, h, l, s| MukaiVector::new(&g, r, vec![h, l], s);
    let (o_x, i_x, o_big_x, o_h, o_l) =
        (m(0, 0, 0, 1), m(1, 0, 0, 0), m(1, 0, 0, 1), m(0, 1, 0, -2), m(0, 0, 1, 1));
    let comb = |terms: &[(i64, &MukaiVector)]| MukaiVector::combination(&g, terms).unwrap();
    let (branch, w, formula) = if a % 2 == 0 {
        let ap = a / 2;
        if ap + b >= 0 {
            ("even/a'+b>=0", comb(&[(ap, &o_x), (-(ap + b), &i_x)]), 2 * ap * (ap + b))
        } else {
            let k = -ap - b;
            if k % 2 == 0 {
                let h = k / 2;
                ("even/k=2h", comb(&[(ap, &o_x), (h, &o_h)]), 4 * h * h)
            } else {
                let h = (k + 1) / 2;
                let w = comb(&[(ap, &o_x), (-1, &i_x), (h, &o_h)]);
                ("even/k=2h-1", w, 4 * h * h + 2 * ap - 4 * h)
            }
        }
    } else {
        let ap = (a - 1) / 2;
        if ap + b + 1 >= 0 {
            let w = comb(&[(ap, &o_x), (-(ap + b), &i_x), (1, &o_l), (-1, &o_big_x)]);
            ("odd/a'+b+1>=0", w, -2 + 2 * ap * (ap + b + 1))
        } else {
            let k = -1 - ap - b;
            if k % 2 == 1 {
                let h = (k + 1) / 2;
                let w = comb(&[(ap, &o_x), (h, &o_h), (1, &o_l), (-1, &o_big_x)]);
                ("odd/k=2h-1", w, 4 * h * h - 2 * h - 2 + 2 * ap)
            } else {
                let h = k / 2;
                let w = comb(&[(ap, &o_x), (1, &o_l), (-1, &o_x), (h, &o_h)]);
                ("odd/k=2h", w, -2 + 4 * h * h + 2 * h)
            }
        }
    };
    Some(BranchOption { branch: branch.into(), negated: false, gram: g, x: None, w, formula_square: formula })
}

fn negated(mut opt: BranchOption) -> BranchOption {
    opt.negated = true;
    opt.w = opt.w.neg();
    opt
}

/// Branches for `q > 0`, or `(p, q) = (1, 0)`, of a primitive class.
fn gm3_direct(p: i64, q: i64) -> Option<BranchOption> {
    if !(q > 0 || (p, q) == (1, 0)) {
        return None;
    }
    let o_s = |g: &[Vec<i64>]| MukaiVector::new(g, 1, vec![0, 0], 1);
    let o_s_l = |g: &[Vec<i64>]| MukaiVector::new(g, 1, vec![0, 1], 1 + g[1][1] / 2);
    let o_s_minus_h = |g: &[Vec<i64>]| MukaiVector::new(g, 1, vec![-1, 0], 6);
    let o_x = |g: &[Vec<i64>]| MukaiVector::new(g, 0, vec![0, 0], 1);
    let general = |g: &[Vec<i64>], b: i64| {
        MukaiVector::combination(
            g,
            &[(-1, &o_s_l(g)), (b, &o_s(g)), (-q, &o_s_minus_h(g)), (p + 5 * q + 1, &o_x(g))],
        )
        .unwrap()
    };
    let opt = |branch: &str, gram: Vec<Vec<i64>>, x: Option<i64>, w, formula_square| BranchOption {
        branch: branch.into(),
        negated: false,
        gram,
        x,
        w,
        formula_square,
    };
    let family = |x: i64, l2: i64| vec![vec![10, x], vec![x, l2]];
    if p.rem_euclid(2) == 1 {
        let x = q + 6;
        let g = family(x, 2);
        let w = general(&g, -q + (5 - p) / 2);
        return Some(opt("podd", g, Some(x), w, (p * p - 1) / 2 - 2));
    }
    if q != 1 {
        let x = q + 4;
        let g = family(x, 2);
        let w = general(&g, -q + 2 - p / 2);
        return Some(opt("peven/x=q+4", g, Some(x), w, p * p / 2));
    }
    let special = |g: Vec<Vec<i64>>, x, sign: i64, b: i64, name: &str| {
        let w = MukaiVector::combination(&g, &[(sign, &o_s_l(&g)), (b, &o_s(&g))]).unwrap();
        Some(opt(name, g, x, w, -2))
    };
    match p {
        0 => special(family(5, 0), Some(5), 1, -2, "peven/q=1,p=0"),
        2 => special(family(9, 4), Some(9), 1, -4, "peven/q=1,p=2"),
        -2 => special(family(7, 4), Some(7), -1, 4, "peven/q=1,p=-2"),
        _ => {
            let g = family(9, 2);
            let w = MukaiVector::combination(
                &g,
                &[(-1, &o_s_l(&g)), (-p / 2 + 2, &o_s(&g)), (-1, &o_s_minus_h(&g)), (p + 6, &o_x(&g))],
            )
            .unwrap();
            Some(opt("peven/q=1,x=9", g, Some(9), w, p * p / 2 - 6))
        }
    }
}

/// Every closed-form branch that applies to the primitive class `(a, b)`,
/// in the order the certificate prefers them.
pub fn applicable_branches(fano: FanoType, a: i64, b: i64) -> Vec<BranchOption> {
    let mut out = Vec::new();
    match fano {
        FanoType::Qds => {
            // Prefer the negated form when a < 0, or a = 0 and b < 0, so
            // that the certificate of −v is always the negative of that of v.
            let canonical_neg = a < 0 || (a == 0 && b < 0);
            let direct = qds_direct(a, b);
            let flipped = qds_direct(-a, -b).map(negated);
            if canonical_neg {
                out.extend(flipped);
                out.extend(direct);
            } else {
                out.extend(direct);
                out.extend(flipped);
            }
        }
        FanoType::Gm3 => {
            out.extend(gm3_direct(a, b));
            if b < 0 {
                out.extend(gm3_direct(-a, -b).map(|mut o| {
                    o.branch = format!("qnegative/{}", o.branch);
                    negated(o)
                }));
            }
        }
    }
    out
}

fn setup_for(fano: FanoType, gram: &[Vec<i64>]) -> Result<CoverSetup> {
    match fano {
        FanoType::Qds => CoverSetup::quartic_double_solid(gram.to_vec()),
        FanoType::Gm3 => CoverSetup::gm_threefold(gram.to_vec()),
    }
}

fn closed_form_lift(fano: FanoType, a: i64, b: i64) -> Result<LiftCertificate> {
    let v = KnumClass::new(fano.basis(), a, b);
    let (k, primitive) = v.primitive_part().ok_or(Error::ZeroVector)?;
    // The quartic double solid branches cover every class; the GM threefold
    // branches need coprime coordinates, so there the primitive part is lifted.
    let v0 = match fano {
        FanoType::Qds => v,
        FanoType::Gm3 => primitive,
    };
    let [p, q] = v0.coords;
    let options = applicable_branches(fano, p, q);
    let Some(chosen) = options.first().cloned() else {
        return Err(Error::OutsideCoverage(p, q));
    };
    let setup = setup_for(fano, &chosen.gram)?;
    let image = phi_star(&setup, &SourceClass::Mukai(chosen.w.clone()))?;
    if image != v0 {
        return Err(Error::CertificateFailed(format!(
            "branch {} gives Φ_*(w) = {image}, expected {v0}",
            chosen.branch
        )));
    }
    let w_square = chosen.w.square();
    let map = phi_matrix(&setup)?;
    let all = all_lifts_inequality(&map, &v0, DEFAULT_BOX)?;
    Ok(LiftCertificate {
        fano_type: fano,
        v,
        multiplicity: k,
        primitive,
        lifted: v0,
        gram: chosen.gram.clone(),
        x: chosen.x,
        w_square,
        formula_square: chosen.formula_square,
        branch: chosen.branch.clone(),
        negated: chosen.negated,
        nonneg_ok: w_square >= -2,
        wall_ok: check_wall_inequality(&v0, w_square),
        complete: all.complete,
        all_lifts_ok: all.holds,
        w: chosen.w,
        diagnostics: options,
    })
}

/// Lift `aμ₁ + bμ₂` to the quartic K3 surface containing a line.
pub fn closed_form_lift_qds(a: i64, b: i64) -> Result<LiftCertificate> {
    closed_form_lift(FanoType::Qds, a, b)
}

/// Lift `pκ₁ + qκ₂` to a degree 10 K3 surface with a suitable rank-two
/// Picard lattice.
pub fn closed_form_lift_gm3(p: i64, q: i64) -> Result<LiftCertificate> {
    closed_form_lift(FanoType::Gm3, p, q)
}

/// A lift found by search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FoundLift {
    pub w: Vec<i64>,
    pub w_square: i64,
}

fn to_i64(x: &BigInt, what: &'static str) -> Result<i64> {
    x.to_i64().ok_or(Error::Overflow(what))
}

/// The coset `w₀ + ker Φ_*` of lifts of `v`, with the quadratic function
/// `t ↦ (w₀ + K t)²` on kernel coordinates.
struct Coset {
    w0: Vec<BigInt>,
    kernel: Vec<Vec<BigInt>>,
    definite: bool,
    /// Maximizer of the square over real kernel coordinates, when definite.
    center: Option<Vec<Q>>,
}

impl Coset {
    fn new(map: &PhiMap, v: &KnumClass) -> Option<Self> {
        if v.basis != map.target {
            return None;
        }
        let w0 = image_lattice(map).preimage(v)?;
        let ker = kernel_lattice(map);
        let kernel: Vec<Vec<BigInt>> =
            ker.basis.iter().map(|c| c.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let center = if ker.negative_definite && !kernel.is_empty() {
            let a: Vec<Vec<Q>> =
                ker.gram.iter().map(|r| r.iter().map(|&x| Q::from_integer(x.into())).collect()).collect();
            let inv = inverse(&a).expect("definite kernel form is invertible");
            let b: Vec<Q> = kernel
                .iter()
                .map(|k| Q::from_integer(crate::linalg::bilinear(&map.source_form, k, &w0)))
                .collect();
            Some((0..kernel.len()).map(|i| -(0..kernel.len()).map(|j| &inv[i][j] * &b[j]).sum::<Q>()).collect())
        } else {
            None
        };
        Some(Coset { w0, kernel, definite: ker.negative_definite, center })
    }

    fn point(&self, t: &[BigInt]) -> Vec<BigInt> {
        let mut w = self.w0.clone();
        for (ti, k) in t.iter().zip(&self.kernel) {
            for (wi, ki) in w.iter_mut().zip(k) {
                *wi += ti * ki;
            }
        }
        w
    }

    fn rounded_center(&self) -> Vec<BigInt> {
        match &self.center {
            Some(c) => c.iter().map(round_half_up).collect(),
            None => vec![BigInt::zero(); self.kernel.len()],
        }
    }
}

/// All integer points of `Π [lo_i, hi_i]`, split on the first coordinate
/// for the parallel search.
fn grid(lo: &[BigInt], hi: &[BigInt]) -> Vec<Vec<BigInt>> {
    let mut out: Vec<Vec<BigInt>> = vec![Vec::new()];
    for (l, h) in lo.iter().zip(hi) {
        let mut next = Vec::new();
        for prefix in &out {
            let mut x = l.clone();
            while &x <= h {
                let mut p = prefix.clone();
                p.push(x.clone());
                next.push(p);
                x += 1;
            }
        }
        out = next;
    }
    out
}

/// Every lift `w` of `v` with `w² ≥ −2` whose kernel coordinates lie within
/// `box_` of the rounded maximizer of `w²` on the coset (or of the
/// particular solution when the kernel form is not definite), sorted by `w²`.
pub fn brute_force_lift(map: &PhiMap, v: &KnumClass, box_: i64) -> Result<Vec<FoundLift>> {
    let Some(coset) = Coset::new(map, v) else {
        return Ok(Vec::new());
    };
    let center = coset.rounded_center();
    let lo: Vec<BigInt> = center.iter().map(|c| c - box_).collect();
    let hi: Vec<BigInt> = center.iter().map(|c| c + box_).collect();
    let points = grid(&lo, &hi);
    let mut found: Vec<FoundLift> = points
        .par_iter()
        .filter_map(|t| {
            let w = coset.point(t);
            let sq = map.square(&w);
            (sq >= BigInt::from(-2)).then_some((w, sq))
        })
        .map(|(w, sq)| {
            Ok(FoundLift {
                w: w.iter().map(|x| to_i64(x, "brute_force_lift")).collect::<Result<_>>()?,
                w_square: to_i64(&sq, "brute_force_lift")?,
            })
        })
        .collect::<Result<_>>()?;
    found.sort_by(|x, y| (x.w_square, &x.w).cmp(&(y.w_square, &y.w)));
    Ok(found)
}

#[derive(Debug, Clone, Serialize)]
pub struct AllLiftsReport {
    pub v: KnumClass,
    /// `−χ(v, v) + 1`; every lift should have `w² + 2` below it.
    pub bound: i64,
    /// Exact maximum over the whole coset when true; otherwise the maximum
    /// over the searched box.
    pub complete: bool,
    pub max_w_square: i64,
    pub maximizer: Vec<i64>,
    pub holds: bool,
    pub kernel_rank: usize,
    pub searched: usize,
}

/// Checks `w² + 2 < −χ(v, v) + 1` for every lift `w` of `v`.
pub fn all_lifts_inequality(map: &PhiMap, v: &KnumClass, box_: i64) -> Result<AllLiftsReport> {
    let coset = Coset::new(map, v).ok_or(Error::NotInImage(v.coords[0], v.coords[1]))?;
    let n = coset.kernel.len();
    let (lo, hi, complete) = match &coset.center {
        Some(center) => {
            // f(t) = f(t*) + (t − t*)ᵀ A (t − t*) with A negative definite, so
            // any t beating round(t*) lies in the ellipsoid of radius
            // R = f(t*) − f(round t*), hence |t_i − t*_i|² ≤ R · (−A)⁻¹_ii.
            let t0 = coset.rounded_center();
            let f_t0 = Q::from_integer(map.square(&coset.point(&t0)));
            let ker = kernel_lattice(map);
            let minus_a: Vec<Vec<Q>> = ker
                .gram
                .iter()
                .map(|r| r.iter().map(|&x| Q::from_integer((-x).into())).collect())
                .collect();
            let a_inv = inverse(&minus_a).expect("definite");
            // f(t*) = f(t0) + (t0 − t*)ᵀ(−A)(t0 − t*)
            let d: Vec<Q> = t0.iter().zip(center).map(|(a, b)| Q::from_integer(a.clone()) - b).collect();
            let quad: Q = (0..n)
                .map(|i| (0..n).map(|j| &d[i] * &minus_a[i][j] * &d[j]).sum::<Q>())
                .sum();
            let f_star = &f_t0 + &quad;
            let r = &f_star - &f_t0;
            let mut lo = Vec::new();
            let mut hi = Vec::new();
            for i in 0..n {
                let rad = ceil_sqrt(&(&r * &a_inv[i][i]));
                lo.push(center[i].floor().to_integer() - &rad);
                hi.push(center[i].ceil().to_integer() + &rad);
            }
            (lo, hi, true)
        }
        None if n == 0 => (Vec::new(), Vec::new(), true),
        None => {
            let lo = vec![BigInt::from(-box_); n];
            let hi = vec![BigInt::from(box_); n];
            (lo, hi, false)
        }
    };
    debug_assert!(complete || !coset.definite);
    let points = grid(&lo, &hi);
    let best = points
        .par_iter()
        .map(|t| {
            let w = coset.point(t);
            (map.square(&w), w)
        })
        .max_by(|x, y| x.0.cmp(&y.0).then_with(|| y.1.cmp(&x.1)))
        .expect("non-empty search");
    let max_w_square = to_i64(&best.0, "all_lifts_inequality")?;
    let bound = -knum_pairing(v.basis, v.coords, v.coords) + 1;
    Ok(AllLiftsReport {
        v: *v,
        bound,
        complete,
        max_w_square,
        maximizer: best.1.iter().map(|x| to_i64(x, "all_lifts_inequality")).collect::<Result<_>>()?,
        holds: max_w_square + 2 < bound,
        kernel_rank: n,
        searched: points.len(),
    })
}
