//! Chern characters, Euler pairings by Hirzebruch-Riemann-Roch, and the
//! divisorial pushforward by Grothendieck-Riemann-Roch.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::chow::{
    make_variety_model, GradedClass, ModelClasses, ProductOverride, VarietyKind, VarietyModel,
    VarietySpec,
};
use crate::error::{Error, Result};
use crate::knum::KuBasis;
use crate::linalg::{as_integer, q, qi, Q};

/// `exp(D)` truncated at the dimension.
pub fn ch_line_bundle(d: &GradedClass) -> Result<GradedClass> {
    if !d.is_pure_codim(1) {
        return Err(Error::NotCodimOne(d.to_string()));
    }
    let model = d.model();
    let mut acc = model.unit();
    let mut term = model.unit();
    for k in 1..=model.dim() {
        term = (&term * d).scale(&q(1, k as i64));
        acc = &acc + &term;
    }
    Ok(acc)
}

/// `(1 − e^{−D}) / D = Σ (−1)^k D^k / (k+1)!`, the inverse Todd class of
/// the line bundle `O(D)`.
pub fn todd_inverse_line_bundle(d: &GradedClass) -> Result<GradedClass> {
    if !d.is_pure_codim(1) {
        return Err(Error::NotCodimOne(d.to_string()));
    }
    let model = d.model();
    let mut acc = model.unit();
    let mut term = model.unit();
    for k in 1..=model.dim() {
        term = (&term * d).scale(&q(-1, k as i64 + 1));
        acc = &acc + &term;
    }
    Ok(acc)
}

/// Chern character of a class with the given rank and Chern classes
/// `c_1, c_2, …` (missing ones are zero), through Newton's identities.
pub fn ch_from_chern(model: &Arc<VarietyModel>, rank: i64, chern: &[GradedClass]) -> GradedClass {
    let dim = model.dim();
    let c = |i: usize| -> GradedClass {
        if i >= 1 && i <= chern.len() {
            chern[i - 1].clone()
        } else {
            model.zero()
        }
    };
    // p_k = (−1)^{k−1} k c_k + Σ_{i=1}^{k−1} (−1)^{i−1} c_i p_{k−i}
    let mut p: Vec<GradedClass> = vec![model.zero()];
    for k in 1..=dim {
        let sign = if k % 2 == 1 { 1 } else { -1 };
        let mut pk = c(k).scale_int(sign * k as i64);
        for i in 1..k {
            let s = if i % 2 == 1 { 1 } else { -1 };
            pk = &pk + &(&c(i) * &p[k - i]).scale_int(s);
        }
        p.push(pk);
    }
    let mut ch = model.unit().scale_int(rank);
    let mut fact = BigInt::one();
    for (k, pk) in p.iter().enumerate().skip(1) {
        fact *= k;
        ch = &ch + &pk.scale(&Q::new(BigInt::one(), fact.clone()));
    }
    ch
}

/// `χ(E, F) = ∫ ch(E)^∨ · ch(F) · td`.
pub fn euler_pairing(ch_e: &GradedClass, ch_f: &GradedClass) -> Result<Q> {
    ch_e.same_model(ch_f)?;
    let model = ch_e.model();
    Ok((&(&ch_e.dual() * ch_f) * &model.todd()).integral())
}

/// As [`euler_pairing`], for classes of genuine objects: the result must be
/// an integer.
pub fn euler_pairing_integral(ch_e: &GradedClass, ch_f: &GradedClass) -> Result<BigInt> {
    let chi = euler_pairing(ch_e, ch_f)?;
    as_integer(&chi).ok_or_else(|| Error::NonIntegral {
        context: format!("χ({ch_e}, {ch_f}) on {}", ch_e.model().id()),
        value: chi.to_string(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SetupKind {
    /// Quartic K3 surface inside a quartic double solid.
    QuarticDoubleSolid,
    /// Degree 10 K3 surface inside a special GM threefold.
    GmThreefold,
    /// GM threefold inside a special GM fourfold.
    GmFourfold,
}

impl SetupKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "qds" | "quartic-double-solid" => Ok(SetupKind::QuarticDoubleSolid),
            "gm3" | "gm-threefold" => Ok(SetupKind::GmThreefold),
            "gm4" | "gm-fourfold" => Ok(SetupKind::GmFourfold),
            _ => Err(Error::Config(format!("unknown setup `{s}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExceptionalObject {
    pub name: String,
    pub ch: GradedClass,
}

/// Declarative form of a [`CoverSetup`], loadable from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetupSpec {
    pub kind: SetupKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub source_products: Vec<ProductOverride>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub target_products: Vec<ProductOverride>,
}

impl SetupSpec {
    pub fn new(kind: SetupKind, gram: Option<Vec<Vec<i64>>>) -> Self {
        SetupSpec { kind, gram, source_products: Vec::new(), target_products: Vec::new() }
    }
}

/// A branched double cover `Y → M` with branch divisor `X ⊂ Y`, together
/// with the data needed to push classes from `X` into `Ku(Y)`.
#[derive(Debug, Clone)]
pub struct CoverSetup {
    pub kind: SetupKind,
    pub source: Arc<VarietyModel>,
    pub target: Arc<VarietyModel>,
    /// `[X]` on `Y`.
    pub divisor: GradedClass,
    pub twist_d: i64,
    /// Row `i` holds the source coordinates of `j^*` of target basis class `i`.
    pub pullback: Vec<Vec<Q>>,
    /// Row `i` holds the target coordinates of `j_*` of source basis class `i`.
    pub pushforward: Vec<Vec<Q>>,
    pub td_tj: GradedClass,
    /// In the order `⟨E_1, …, E_n⟩`; mutations run from `E_n` down to `E_1`.
    pub collection: Vec<ExceptionalObject>,
    pub target_basis: KuBasis,
}

impl CoverSetup {
    pub fn from_spec(spec: &SetupSpec) -> Result<Self> {
        let (source_kind, target_kind) = match spec.kind {
            SetupKind::QuarticDoubleSolid => {
                (VarietyKind::QuarticK3, VarietyKind::QuarticDoubleSolid)
            }
            SetupKind::GmThreefold => (VarietyKind::Degree10K3, VarietyKind::Gm3fold),
            SetupKind::GmFourfold => (VarietyKind::Gm3fold, VarietyKind::Gm4fold),
        };
        let source = make_variety_model(&VarietySpec {
            kind: source_kind,
            gram: spec.gram.clone(),
            products: spec.source_products.clone(),
        })?;
        let target = make_variety_model(&VarietySpec {
            kind: target_kind,
            gram: None,
            products: spec.target_products.clone(),
        })?;
        match spec.kind {
            SetupKind::GmFourfold => Self::gm_fourfold_on(source, target),
            _ => Self::k3_cover_on(spec.kind, source, target),
        }
    }

    /// Quartic K3 `X` in a quartic double solid `Y`, `[X] = 2H`, `d = 2`.
    pub fn quartic_double_solid(gram: Vec<Vec<i64>>) -> Result<Self> {
        Self::from_spec(&SetupSpec::new(SetupKind::QuarticDoubleSolid, Some(gram)))
    }

    /// Degree 10 K3 `S` in a special GM threefold, `[S] = H`, `d = 1`.
    pub fn gm_threefold(gram: Vec<Vec<i64>>) -> Result<Self> {
        Self::from_spec(&SetupSpec::new(SetupKind::GmThreefold, Some(gram)))
    }

    /// GM threefold `X` in a special GM fourfold `W`, `[X] = H`, `d = 1`.
    pub fn gm_fourfold() -> Result<Self> {
        Self::from_spec(&SetupSpec::new(SetupKind::GmFourfold, None))
    }

    /// Short human-readable label, e.g. `qds[4,1;1,-2]`.
    pub fn label(&self) -> String {
        match self.kind {
            SetupKind::QuarticDoubleSolid => format!("qds/{}", self.source.id()),
            SetupKind::GmThreefold => format!("gm3/{}", self.source.id()),
            SetupKind::GmFourfold => "gm4".to_string(),
        }
    }

    fn k3_cover_on(
        kind: SetupKind,
        source: Arc<VarietyModel>,
        target: Arc<VarietyModel>,
    ) -> Result<Self> {
        let gram = source.picard_gram().ok_or_else(|| Error::NotK3(source.id().into()))?.clone();
        let deg_y = target.kind().degree();
        let (mult, twist_d) = match kind {
            SetupKind::QuarticDoubleSolid => (2, 2),
            _ => (1, 1),
        };
        let rho = gram.len();
        let ns = source.len();
        let pt_x = source.point_index();
        let (h, l, pt) = (target.index_of("H")?, target.index_of("l")?, target.point_index());

        let mut pushforward = vec![vec![Q::zero(); target.len()]; ns];
        pushforward[0][h] = qi(mult);
        for i in 0..rho {
            pushforward[1 + i][l] = Q::from_integer(gram[0][i].clone());
        }
        pushforward[pt_x][pt] = Q::one();

        let mut pullback = vec![vec![Q::zero(); ns]; target.len()];
        pullback[0][0] = Q::one();
        pullback[h][1] = Q::one();
        // H|_X squared is H_X² · pt, and H² = deg_Y · l on Y.
        pullback[l][pt_x] = Q::from_integer(gram[0][0].clone()) / qi(deg_y);

        let divisor = target.hyperplane().scale_int(mult);
        let collection = match kind {
            SetupKind::QuarticDoubleSolid => vec![
                ExceptionalObject { name: "O".into(), ch: target.unit() },
                ExceptionalObject { name: "O(H)".into(), ch: ch_line_bundle(&target.hyperplane())? },
            ],
            _ => vec![
                ExceptionalObject { name: "O".into(), ch: target.unit() },
                ExceptionalObject { name: "U^v".into(), ch: ch_dual_tautological(&target)? },
            ],
        };
        let target_basis = match kind {
            SetupKind::QuarticDoubleSolid => KuBasis::mu(&target)?,
            _ => KuBasis::kappa(&target)?,
        };
        let mut setup = CoverSetup {
            kind,
            source: Arc::clone(&source),
            target,
            divisor,
            twist_d,
            pullback,
            pushforward,
            td_tj: source.unit(),
            collection,
            target_basis,
        };
        setup.td_tj = todd_inverse_line_bundle(&setup.pull_back(&setup.divisor)?)?;
        Ok(setup)
    }

    fn gm_fourfold_on(source: Arc<VarietyModel>, target: Arc<VarietyModel>) -> Result<Self> {
        let idx = |m: &VarietyModel, n: &str| m.index_of(n);
        let mut pushforward = vec![vec![Q::zero(); target.len()]; source.len()];
        pushforward[0][idx(&target, "H")?] = Q::one();
        pushforward[idx(&source, "H")?][idx(&target, "H^2")?] = Q::one();
        pushforward[idx(&source, "l")?][idx(&target, "l")?] = Q::one();
        pushforward[source.point_index()][target.point_index()] = Q::one();

        let mut pullback = vec![vec![Q::zero(); source.len()]; target.len()];
        pullback[0][0] = Q::one();
        pullback[idx(&target, "H")?][idx(&source, "H")?] = Q::one();
        pullback[idx(&target, "H^2")?][idx(&source, "l")?] = qi(10);
        pullback[idx(&target, "sigma2")?][idx(&source, "l")?] = qi(6);
        pullback[idx(&target, "l")?][source.point_index()] = Q::one();

        // Taken as given: 1 − ½H + ⅙H² − 5/12 pt, with H² = 10 l.
        let td_tj = source.from_coeffs(vec![qi(1), q(-1, 2), q(5, 3), q(-5, 12)]);
        Ok(CoverSetup {
            kind: SetupKind::GmFourfold,
            divisor: target.hyperplane(),
            twist_d: 1,
            pullback,
            pushforward,
            td_tj,
            collection: vec![
                ExceptionalObject { name: "O".into(), ch: target.unit() },
                ExceptionalObject { name: "U^v".into(), ch: ch_dual_tautological(&target)? },
            ],
            target_basis: KuBasis::lambda(&target)?,
            source,
            target,
        })
    }

    /// `j^*` on classes (a ring homomorphism).
    pub fn pull_back(&self, a: &GradedClass) -> Result<GradedClass> {
        self.target.owns(a)?;
        Ok(self.source.from_coeffs(apply_linear(&self.pullback, a.coeffs(), self.source.len())))
    }

    /// `j_*` on classes, without any Todd correction.
    pub fn push_forward(&self, a: &GradedClass) -> Result<GradedClass> {
        self.source.owns(a)?;
        Ok(self.target.from_coeffs(apply_linear(&self.pushforward, a.coeffs(), self.target.len())))
    }

    /// The twist `− ⊗ O_X(d·H)` on source classes.
    pub fn twist(&self, a: &GradedClass) -> Result<GradedClass> {
        self.source.owns(a)?;
        Ok(a * &ch_line_bundle(&self.source.hyperplane().scale_int(self.twist_d))?)
    }
}

fn apply_linear(rows: &[Vec<Q>], coeffs: &[Q], out_len: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); out_len];
    for (c, row) in coeffs.iter().zip(rows) {
        if c.is_zero() {
            continue;
        }
        for (o, r) in out.iter_mut().zip(row) {
            *o += c * r;
        }
    }
    out
}

/// `ch(U^∨)` for the restricted tautological quotient: rank 2, `c_1 = H`,
/// `c_2 = σ₁,₁`.
pub fn ch_dual_tautological(model: &Arc<VarietyModel>) -> Result<GradedClass> {
    let sigma11 = model.alias("sigma11")?;
    Ok(ch_from_chern(model, 2, &[model.hyperplane(), sigma11]))
}

/// `ch(j_* F) = j_*(ch(F) · td(T_j))`.
pub fn divisor_pushforward(setup: &CoverSetup, ch_f: &GradedClass) -> Result<GradedClass> {
    setup.source.owns(ch_f)?;
    setup.push_forward(&(ch_f * &setup.td_tj))
}

/// `χ_Y(E, j_* F)` computed on `X` as `χ_X(j^* E, F)`.
pub fn adjoint_euler(setup: &CoverSetup, ch_e: &GradedClass, ch_f: &GradedClass) -> Result<Q> {
    euler_pairing(&setup.pull_back(ch_e)?, ch_f)
}
