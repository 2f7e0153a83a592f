//! Numerical cohomology rings of the varieties that show up in the double
//! cover constructions: a graded basis, structure constants, a degree map
//! normalized on the point class, and the Todd class.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{q, qi, IntMatrix, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VarietyKind {
    P3,
    QuarticDoubleSolid,
    QuarticK3,
    QuinticDelPezzo3fold,
    Gm3fold,
    Gm4fold,
    Degree10K3,
}

impl VarietyKind {
    pub const ALL: [VarietyKind; 7] = [
        VarietyKind::P3,
        VarietyKind::QuarticDoubleSolid,
        VarietyKind::QuarticK3,
        VarietyKind::QuinticDelPezzo3fold,
        VarietyKind::Gm3fold,
        VarietyKind::Gm4fold,
        VarietyKind::Degree10K3,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            VarietyKind::P3 => "p3",
            VarietyKind::QuarticDoubleSolid => "qds",
            VarietyKind::QuarticK3 => "quartic-k3",
            VarietyKind::QuinticDelPezzo3fold => "v5",
            VarietyKind::Gm3fold => "gm3",
            VarietyKind::Gm4fold => "gm4",
            VarietyKind::Degree10K3 => "k3-10",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let kind = match s.to_ascii_lowercase().as_str() {
            "p3" => VarietyKind::P3,
            "qds" | "quartic-double-solid" => VarietyKind::QuarticDoubleSolid,
            "quartic-k3" | "k3-4" => VarietyKind::QuarticK3,
            "v5" | "quintic-del-pezzo-3fold" => VarietyKind::QuinticDelPezzo3fold,
            "gm3" | "gm3fold" => VarietyKind::Gm3fold,
            "gm4" | "gm4fold" => VarietyKind::Gm4fold,
            "k3-10" | "degree10-k3" | "degree-10-k3" => VarietyKind::Degree10K3,
            _ => return Err(Error::UnsupportedVariety(s.to_string())),
        };
        Ok(kind)
    }

    pub fn is_k3(self) -> bool {
        matches!(self, VarietyKind::QuarticK3 | VarietyKind::Degree10K3)
    }

    /// Degree of the polarization: `H^dim`.
    pub fn degree(self) -> i64 {
        match self {
            VarietyKind::P3 => 1,
            VarietyKind::QuarticDoubleSolid => 2,
            VarietyKind::QuarticK3 => 4,
            VarietyKind::QuinticDelPezzo3fold => 5,
            VarietyKind::Gm3fold | VarietyKind::Gm4fold | VarietyKind::Degree10K3 => 10,
        }
    }

    pub fn dim(self) -> usize {
        match self {
            VarietyKind::QuarticK3 | VarietyKind::Degree10K3 => 2,
            VarietyKind::Gm4fold => 4,
            _ => 3,
        }
    }
}

/// One override of the multiplication table, used for testing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductOverride {
    pub left: String,
    pub right: String,
    /// basis-class name → rational, e.g. `{"l": "3"}`
    pub result: std::collections::BTreeMap<String, String>,
}

/// Declarative description of a variety, loadable from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarietySpec {
    pub kind: VarietyKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub products: Vec<ProductOverride>,
}

impl VarietySpec {
    pub fn new(kind: VarietyKind) -> Self {
        VarietySpec { kind, gram: None, products: Vec::new() }
    }

    pub fn with_gram(kind: VarietyKind, gram: Vec<Vec<i64>>) -> Self {
        VarietySpec { kind, gram: Some(gram), products: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisClass {
    pub name: String,
    pub codim: usize,
}

#[derive(Debug)]
pub struct VarietyModel {
    id: String,
    kind: VarietyKind,
    dim: usize,
    basis: Vec<BasisClass>,
    /// `mult[i][j][k]`: coefficient of basis class `k` in `e_i · e_j`.
    mult: Vec<Vec<Vec<Q>>>,
    degree: Vec<Q>,
    todd: Vec<Q>,
    picard: Option<IntMatrix>,
    aliases: Vec<(String, Vec<Q>)>,
}

/// Builds the model for a supported variety.
pub fn make_variety_model(spec: &VarietySpec) -> Result<Arc<VarietyModel>> {
    let kind = spec.kind;
    let mut model = match kind {
        VarietyKind::QuarticK3 | VarietyKind::Degree10K3 => {
            let gram = spec.gram.clone().unwrap_or_else(|| vec![vec![kind.degree()]]);
            k3_model(kind, gram)?
        }
        _ => {
            if spec.gram.is_some() {
                return Err(Error::BadGram(format!(
                    "{} takes no Picard lattice",
                    kind.slug()
                )));
            }
            match kind {
                VarietyKind::Gm4fold => gm4_model(),
                _ => threefold_model(kind),
            }
        }
    };
    if !spec.products.is_empty() {
        model.apply_overrides(&spec.products)?;
    }
    Ok(Arc::new(model))
}

fn empty_table(n: usize) -> Vec<Vec<Vec<Q>>> {
    vec![vec![vec![Q::zero(); n]; n]; n]
}

fn unit_products(mult: &mut [Vec<Vec<Q>>]) {
    let n = mult.len();
    for i in 0..n {
        mult[0][i][i] = Q::one();
        mult[i][0][i] = Q::one();
    }
}

fn set_sym(mult: &mut [Vec<Vec<Q>>], i: usize, j: usize, k: usize, c: Q) {
    mult[i][j][k] = c.clone();
    mult[j][i][k] = c;
}

/// Picard-rank-one threefolds: basis `1, H, l, pt` with `H² = deg·l` and
/// `H·l = pt`, so `l` is the numerical class of a curve of degree one.
fn threefold_model(kind: VarietyKind) -> VarietyModel {
    let deg = kind.degree();
    let basis = vec![
        BasisClass { name: "1".into(), codim: 0 },
        BasisClass { name: "H".into(), codim: 1 },
        BasisClass { name: "l".into(), codim: 2 },
        BasisClass { name: "pt".into(), codim: 3 },
    ];
    let mut mult = empty_table(4);
    unit_products(&mut mult);
    set_sym(&mut mult, 1, 1, 2, qi(deg));
    set_sym(&mut mult, 1, 2, 3, Q::one());
    let mut degree = vec![Q::zero(); 4];
    degree[3] = Q::one();

    let mut model = VarietyModel {
        id: kind.slug().to_string(),
        kind,
        dim: 3,
        basis,
        mult,
        degree,
        todd: vec![Q::zero(); 4],
        picard: None,
        aliases: Vec::new(),
    };

    model.todd = match kind {
        // Taken as given: 1 + H/2 + 17/60 H² + pt.
        VarietyKind::Gm3fold => vec![qi(1), q(1, 2), q(17, 6), qi(1)],
        // c1, c2 from the tangent bundle; c2 is recorded as a multiple of l.
        VarietyKind::P3 => model.todd_from_chern(4, &[(2, qi(6))]),
        VarietyKind::QuarticDoubleSolid => model.todd_from_chern(2, &[(2, qi(12))]),
        VarietyKind::QuinticDelPezzo3fold => model.todd_from_chern(2, &[(2, qi(12))]),
        _ => unreachable!("not a Picard-rank-one threefold"),
    };

    if kind == VarietyKind::Gm3fold {
        // Restrictions of Schubert cycles from Gr(2,5): H·σ₁,₁ = 4, H·σ₂ = 6.
        model.aliases.push(("sigma11".into(), vec![qi(0), qi(0), qi(4), qi(0)]));
        model.aliases.push(("sigma2".into(), vec![qi(0), qi(0), qi(6), qi(0)]));
    }
    model
}

/// Special GM fourfold. Codimension two is rank two, spanned by `H²` and
/// `σ₂`; `σ₁,₁ = H² − σ₂`. Curves are collapsed onto `l` with `H·l = pt`.
fn gm4_model() -> VarietyModel {
    let basis = vec![
        BasisClass { name: "1".into(), codim: 0 },
        BasisClass { name: "H".into(), codim: 1 },
        BasisClass { name: "H^2".into(), codim: 2 },
        BasisClass { name: "sigma2".into(), codim: 2 },
        BasisClass { name: "l".into(), codim: 3 },
        BasisClass { name: "pt".into(), codim: 4 },
    ];
    let mut mult = empty_table(6);
    unit_products(&mut mult);
    set_sym(&mut mult, 1, 1, 2, Q::one());
    set_sym(&mut mult, 1, 2, 4, qi(10));
    set_sym(&mut mult, 1, 3, 4, qi(6));
    set_sym(&mut mult, 1, 4, 5, Q::one());
    set_sym(&mut mult, 2, 2, 5, qi(10));
    set_sym(&mut mult, 2, 3, 5, qi(6));
    set_sym(&mut mult, 3, 3, 5, qi(4));
    let mut degree = vec![Q::zero(); 6];
    degree[5] = Q::one();
    // 1 + H + (2/3 H² − 1/12 σ₂) + 17/60 H³ + pt, with H³ = 10 l.
    let todd = vec![qi(1), qi(1), q(2, 3), q(-1, 12), q(17, 6), qi(1)];
    VarietyModel {
        id: "gm4".into(),
        kind: VarietyKind::Gm4fold,
        dim: 4,
        basis,
        mult,
        degree,
        todd,
        picard: None,
        aliases: vec![
            ("sigma11".into(), vec![qi(0), qi(0), qi(1), qi(-1), qi(0), qi(0)]),
            ("sigma2".into(), vec![qi(0), qi(0), qi(0), qi(1), qi(0), qi(0)]),
        ],
    }
}

fn validate_k3_gram(kind: VarietyKind, gram: &[Vec<i64>]) -> Result<()> {
    let n = gram.len();
    if n == 0 || n > 2 || gram.iter().any(|r| r.len() != n) {
        return Err(Error::BadGram(format!("expected a 1x1 or 2x2 matrix, got {gram:?}")));
    }
    for i in 0..n {
        for j in 0..n {
            if gram[i][j] != gram[j][i] {
                return Err(Error::BadGram(format!("not symmetric: {gram:?}")));
            }
        }
        if gram[i][i] % 2 != 0 {
            return Err(Error::BadGram(format!("K3 lattices are even: {gram:?}")));
        }
    }
    if gram[0][0] != kind.degree() {
        return Err(Error::BadGram(format!(
            "H² = {} but {} has degree {}",
            gram[0][0],
            kind.slug(),
            kind.degree()
        )));
    }
    let det = if n == 1 { gram[0][0] } else { gram[0][0] * gram[1][1] - gram[0][1] * gram[1][0] };
    if det == 0 {
        return Err(Error::BadGram(format!("degenerate: {gram:?}")));
    }
    Ok(())
}

fn gram_label(gram: &[Vec<i64>]) -> String {
    gram.iter()
        .map(|r| r.iter().map(i64::to_string).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(";")
}

/// K3 surface with Picard lattice `gram` on the basis `H, L, …`.
fn k3_model(kind: VarietyKind, gram: Vec<Vec<i64>>) -> Result<VarietyModel> {
    validate_k3_gram(kind, &gram)?;
    let rho = gram.len();
    let mut basis = vec![BasisClass { name: "1".into(), codim: 0 }];
    let names = ["H", "L"];
    for name in names.iter().take(rho) {
        basis.push(BasisClass { name: (*name).into(), codim: 1 });
    }
    basis.push(BasisClass { name: "pt".into(), codim: 2 });
    let n = basis.len();
    let pt = n - 1;
    let mut mult = empty_table(n);
    unit_products(&mut mult);
    for i in 0..rho {
        for j in 0..rho {
            mult[1 + i][1 + j][pt] = qi(gram[i][j]);
        }
    }
    let mut degree = vec![Q::zero(); n];
    degree[pt] = Q::one();
    let mut model = VarietyModel {
        id: format!("{}[{}]", kind.slug(), gram_label(&gram)),
        kind,
        dim: 2,
        basis,
        mult,
        degree,
        todd: vec![Q::zero(); n],
        picard: Some(gram.iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect()),
        aliases: Vec::new(),
    };
    // c1 = 0, c2 = 24 pt.
    model.todd = model.todd_from_chern(0, &[(pt, qi(24))]);
    Ok(model)
}

impl VarietyModel {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn kind(&self) -> VarietyKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[BasisClass] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_k3(&self) -> bool {
        self.kind.is_k3()
    }

    pub fn picard_gram(&self) -> Option<&IntMatrix> {
        self.picard.as_ref()
    }

    pub fn codim(&self, index: usize) -> usize {
        self.basis[index].codim
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.basis.iter().position(|b| b.name == name).ok_or_else(|| Error::UnknownBasisClass {
            variety: self.id.clone(),
            name: name.to_string(),
        })
    }

    pub fn point_index(&self) -> usize {
        self.basis.len() - 1
    }

    /// Structure constants of `e_i · e_j`.
    pub fn product_of_basis(&self, i: usize, j: usize) -> &[Q] {
        &self.mult[i][j]
    }

    pub fn degree_map(&self) -> &[Q] {
        &self.degree
    }

    fn todd_from_chern(&self, c1_h: i64, c2: &[(usize, Q)]) -> Vec<Q> {
        let n = self.basis.len();
        let mut c1 = vec![Q::zero(); n];
        if c1_h != 0 {
            c1[1] = qi(c1_h);
        }
        let mut c2v = vec![Q::zero(); n];
        for (idx, c) in c2 {
            c2v[*idx] = c.clone();
        }
        todd_from_chern_classes(self, &c1, &c2v)
    }

    fn apply_overrides(&mut self, overrides: &[ProductOverride]) -> Result<()> {
        for o in overrides {
            let i = self.index_of(&o.left)?;
            let j = self.index_of(&o.right)?;
            let mut row = vec![Q::zero(); self.basis.len()];
            for (name, value) in &o.result {
                let k = self.index_of(name)?;
                if self.basis[k].codim != self.basis[i].codim + self.basis[j].codim {
                    return Err(Error::Config(format!(
                        "{}·{} cannot have a component on {}",
                        o.left, o.right, name
                    )));
                }
                row[k] = value
                    .parse::<Q>()
                    .map_err(|e| Error::Config(format!("bad rational `{value}`: {e}")))?;
            }
            self.mult[i][j] = row.clone();
            self.mult[j][i] = row;
        }
        self.id = format!("{}+override", self.id);
        if let Some((i, j, k)) = self.associativity_violations().first() {
            return Err(Error::Config(format!(
                "override breaks associativity at ({}, {}, {})",
                self.basis[*i].name, self.basis[*j].name, self.basis[*k].name
            )));
        }
        Ok(())
    }

    fn product_vec(&self, a: &[Q], b: &[Q]) -> Vec<Q> {
        let n = self.basis.len();
        let mut out = vec![Q::zero(); n];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let ab = ai * bj;
                for (k, c) in self.mult[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += &ab * c;
                    }
                }
            }
        }
        out
    }

    /// Every basis triple `(i, j, k)` where `(e_i e_j) e_k ≠ e_i (e_j e_k)`.
    pub fn associativity_violations(&self) -> Vec<(usize, usize, usize)> {
        let n = self.basis.len();
        let e = |i: usize| {
            let mut v = vec![Q::zero(); n];
            v[i] = Q::one();
            v
        };
        let mut bad = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let left = self.product_vec(&self.product_vec(&e(i), &e(j)), &e(k));
                    let right = self.product_vec(&e(i), &self.product_vec(&e(j), &e(k)));
                    if left != right {
                        bad.push((i, j, k));
                    }
                }
            }
        }
        bad
    }

    /// Every basis pair where `e_i e_j ≠ e_j e_i`, or where the product has
    /// a component outside codimension `codim i + codim j`.
    pub fn grading_violations(&self) -> Vec<(usize, usize)> {
        let n = self.basis.len();
        let mut bad = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let wrong_codim = self.mult[i][j].iter().enumerate().any(|(k, c)| {
                    !c.is_zero() && self.basis[k].codim != self.basis[i].codim + self.basis[j].codim
                });
                if wrong_codim || self.mult[i][j] != self.mult[j][i] {
                    bad.push((i, j));
                }
            }
        }
        bad
    }
}

/// `1 + c1/2 + (c1² + c2)/12 + c1·c2/24`, truncated at the dimension.
/// Only valid for surfaces and threefolds.
pub fn todd_from_chern_classes(model: &VarietyModel, c1: &[Q], c2: &[Q]) -> Vec<Q> {
    debug_assert!(model.dim <= 3);
    let n = model.basis.len();
    let mut one = vec![Q::zero(); n];
    one[0] = Q::one();
    let c1sq = model.product_vec(c1, c1);
    let c1c2 = model.product_vec(c1, c2);
    (0..n)
        .map(|k| {
            &one[k] + &c1[k] * q(1, 2) + (&c1sq[k] + &c2[k]) * q(1, 12) + &c1c2[k] * q(1, 24)
        })
        .collect()
}

/// A rational combination of the basis classes of one [`VarietyModel`].
///
/// Arithmetic operators panic when the operands live on different models;
/// the checked entry points are [`VarietyModel::multiply`] and friends.
#[derive(Clone)]
pub struct GradedClass {
    model: Arc<VarietyModel>,
    coeffs: Vec<Q>,
}

impl fmt::Debug for GradedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedClass({} on {})", self, self.model.id)
    }
}

impl PartialEq for GradedClass {
    fn eq(&self, other: &Self) -> bool {
        self.model.id == other.model.id && self.coeffs == other.coeffs
    }
}

impl Eq for GradedClass {}

/// Constructors. These take `&Arc<Self>` because classes keep their model alive.
pub trait ModelClasses {
    fn zero(&self) -> GradedClass;
    fn unit(&self) -> GradedClass;
    fn point(&self) -> GradedClass;
    fn hyperplane(&self) -> GradedClass;
    fn basis_class(&self, name: &str) -> Result<GradedClass>;
    fn class(&self, terms: &[(&str, Q)]) -> Result<GradedClass>;
    fn from_coeffs(&self, coeffs: Vec<Q>) -> GradedClass;
    fn todd(&self) -> GradedClass;
    fn alias(&self, name: &str) -> Result<GradedClass>;
    /// `Σ coords_i · D_i` on a K3 model, in the Picard basis.
    fn divisor(&self, coords: &[i64]) -> Result<GradedClass>;
}

impl ModelClasses for Arc<VarietyModel> {
    fn zero(&self) -> GradedClass {
        self.from_coeffs(vec![Q::zero(); self.basis.len()])
    }

    fn unit(&self) -> GradedClass {
        let mut c = vec![Q::zero(); self.basis.len()];
        c[0] = Q::one();
        self.from_coeffs(c)
    }

    fn point(&self) -> GradedClass {
        let mut c = vec![Q::zero(); self.basis.len()];
        c[self.point_index()] = Q::one();
        self.from_coeffs(c)
    }

    fn hyperplane(&self) -> GradedClass {
        let mut c = vec![Q::zero(); self.basis.len()];
        c[1] = Q::one();
        self.from_coeffs(c)
    }

    fn basis_class(&self, name: &str) -> Result<GradedClass> {
        let i = self.index_of(name)?;
        let mut c = vec![Q::zero(); self.basis.len()];
        c[i] = Q::one();
        Ok(self.from_coeffs(c))
    }

    fn class(&self, terms: &[(&str, Q)]) -> Result<GradedClass> {
        let mut c = vec![Q::zero(); self.basis.len()];
        for (name, value) in terms {
            c[self.index_of(name)?] += value;
        }
        Ok(self.from_coeffs(c))
    }

    fn from_coeffs(&self, coeffs: Vec<Q>) -> GradedClass {
        assert_eq!(coeffs.len(), self.basis.len());
        GradedClass { model: Arc::clone(self), coeffs }
    }

    fn todd(&self) -> GradedClass {
        self.from_coeffs(self.todd.clone())
    }

    fn alias(&self, name: &str) -> Result<GradedClass> {
        self.aliases
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, c)| self.from_coeffs(c.clone()))
            .ok_or_else(|| Error::UnknownBasisClass { variety: self.id.clone(), name: name.into() })
    }

    fn divisor(&self, coords: &[i64]) -> Result<GradedClass> {
        let rho = self.picard.as_ref().map(Vec::len).ok_or_else(|| Error::NotK3(self.id.clone()))?;
        if coords.len() != rho {
            return Err(Error::LatticeMismatch);
        }
        let mut c = vec![Q::zero(); self.basis.len()];
        for (i, &x) in coords.iter().enumerate() {
            c[1 + i] = qi(x);
        }
        Ok(self.from_coeffs(c))
    }
}

fn ensure_same(a: &GradedClass, b: &GradedClass) -> Result<()> {
    if a.model.id != b.model.id {
        return Err(Error::ModelMismatch { left: a.model.id.clone(), right: b.model.id.clone() });
    }
    Ok(())
}

impl VarietyModel {
    pub fn multiply(&self, a: &GradedClass, b: &GradedClass) -> Result<GradedClass> {
        self.owns(a)?;
        self.owns(b)?;
        Ok(a * b)
    }

    /// Degree map applied to the top-codimension part.
    pub fn integrate(&self, a: &GradedClass) -> Result<Q> {
        self.owns(a)?;
        Ok(a.integral())
    }

    /// `ch(E)^∨`: the codimension-k part is multiplied by `(−1)^k`.
    pub fn dual_ch(&self, a: &GradedClass) -> Result<GradedClass> {
        self.owns(a)?;
        Ok(a.dual())
    }

    pub fn owns(&self, a: &GradedClass) -> Result<()> {
        if a.model.id != self.id {
            return Err(Error::ModelMismatch { left: self.id.clone(), right: a.model.id.clone() });
        }
        Ok(())
    }
}

impl GradedClass {
    pub fn model(&self) -> &Arc<VarietyModel> {
        &self.model
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, name: &str) -> Result<&Q> {
        Ok(&self.coeffs[self.model.index_of(name)?])
    }

    pub fn rank(&self) -> &Q {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn same_model(&self, other: &GradedClass) -> Result<()> {
        ensure_same(self, other)
    }

    /// The graded piece of codimension `k`.
    pub fn part(&self, k: usize) -> GradedClass {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if self.model.basis[i].codim == k { c.clone() } else { Q::zero() })
            .collect();
        GradedClass { model: Arc::clone(&self.model), coeffs }
    }

    pub fn is_pure_codim(&self, k: usize) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| c.is_zero() || self.model.basis[i].codim == k)
    }

    pub fn scale(&self, s: &Q) -> GradedClass {
        GradedClass {
            model: Arc::clone(&self.model),
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn scale_int(&self, s: i64) -> GradedClass {
        self.scale(&qi(s))
    }

    pub fn integral(&self) -> Q {
        self.coeffs.iter().zip(&self.model.degree).map(|(c, d)| c * d).sum()
    }

    pub fn dual(&self) -> GradedClass {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if self.model.basis[i].codim % 2 == 1 { -c } else { c.clone() })
            .collect();
        GradedClass { model: Arc::clone(&self.model), coeffs }
    }

    /// `self^k`, with `self^0 = 1`.
    pub fn pow(&self, k: usize) -> GradedClass {
        let mut acc = self.model.unit();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// JSON-friendly map from basis name to rational string; zero terms omitted.
    pub fn to_terms(&self) -> Vec<(String, String)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.model.basis[i].name.clone(), c.to_string()))
            .collect()
    }
}

impl fmt::Display for GradedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let name = &self.model.basis[i].name;
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            if i == 0 {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{name}")?;
            } else {
                write!(f, "{abs} {name}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &GradedClass {
    type Output = GradedClass;
    fn add(self, rhs: &GradedClass) -> GradedClass {
        ensure_same(self, rhs).expect("adding classes on different varieties");
        GradedClass {
            model: Arc::clone(&self.model),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &GradedClass {
    type Output = GradedClass;
    fn sub(self, rhs: &GradedClass) -> GradedClass {
        ensure_same(self, rhs).expect("subtracting classes on different varieties");
        GradedClass {
            model: Arc::clone(&self.model),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &GradedClass {
    type Output = GradedClass;
    fn neg(self) -> GradedClass {
        GradedClass {
            model: Arc::clone(&self.model),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &GradedClass {
    type Output = GradedClass;
    fn mul(self, rhs: &GradedClass) -> GradedClass {
        ensure_same(self, rhs).expect("multiplying classes on different varieties");
        GradedClass {
            model: Arc::clone(&self.model),
            coeffs: self.model.product_vec(&self.coeffs, &rhs.coeffs),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for GradedClass {
            type Output = GradedClass;
            fn $m(self, rhs: GradedClass) -> GradedClass {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&GradedClass> for GradedClass {
            type Output = GradedClass;
            fn $m(self, rhs: &GradedClass) -> GradedClass {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for GradedClass {
    type Output = GradedClass;
    fn neg(self) -> GradedClass {
        -&self
    }
}
