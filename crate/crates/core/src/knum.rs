//! Integer lattices with Euler forms: rank-two lattices of Kuznetsov
//! components and algebraic Mukai lattices of K3 surfaces.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::chow::{GradedClass, ModelClasses, VarietyKind, VarietyModel};
use crate::error::{Error, Result};
use crate::grr::euler_pairing_integral;
use crate::linalg::{as_integer, q, qi, solve_unique, IntMatrix, SolveError, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KuBasisName {
    Mu,
    Kappa,
    Lambda,
}

impl KuBasisName {
    pub fn as_str(self) -> &'static str {
        match self {
            KuBasisName::Mu => "mu",
            KuBasisName::Kappa => "kappa",
            KuBasisName::Lambda => "lambda",
        }
    }

    /// The Euler form on the basis.
    pub fn gram(self) -> [[i64; 2]; 2] {
        match self {
            KuBasisName::Mu => [[-1, -1], [-1, -2]],
            KuBasisName::Kappa => [[-1, 0], [0, -1]],
            KuBasisName::Lambda => [[-2, 0], [0, -2]],
        }
    }
}

impl fmt::Display for KuBasisName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A basis of a rank-two Ku lattice together with the Chern characters of
/// its members on the ambient variety.
#[derive(Debug, Clone)]
pub struct KuBasis {
    pub name: KuBasisName,
    pub gram: [[i64; 2]; 2],
    pub basis_ch: [GradedClass; 2],
}

impl KuBasis {
    /// `μ₁ = 1 − ½H²`, `μ₂ = H − ½H² − ⅔ pt` on a quartic double solid.
    pub fn mu(model: &Arc<VarietyModel>) -> Result<Self> {
        expect_kind(model, VarietyKind::QuarticDoubleSolid)?;
        let mu1 = model.class(&[("1", qi(1)), ("l", qi(-1))])?;
        let mu2 = model.class(&[("H", qi(1)), ("l", qi(-1)), ("pt", q(-2, 3))])?;
        Ok(Self::new(KuBasisName::Mu, [mu1, mu2]))
    }

    /// `κ₁ = 1 − ⅕H²`, `κ₂ = 2 − H + ⅚ pt` on a GM threefold.
    pub fn kappa(model: &Arc<VarietyModel>) -> Result<Self> {
        expect_kind(model, VarietyKind::Gm3fold)?;
        let k1 = model.class(&[("1", qi(1)), ("l", qi(-2))])?;
        let k2 = model.class(&[("1", qi(2)), ("H", qi(-1)), ("pt", q(5, 6))])?;
        Ok(Self::new(KuBasisName::Kappa, [k1, k2]))
    }

    /// `λ₁ = −2 + σ₁,₁ − ½ pt`, `λ₂ = −4 + 2H − ⅙H³` on a GM fourfold.
    pub fn lambda(model: &Arc<VarietyModel>) -> Result<Self> {
        expect_kind(model, VarietyKind::Gm4fold)?;
        let l1 = &(&model.unit().scale_int(-2) + &model.alias("sigma11")?)
            - &model.point().scale(&q(1, 2));
        let l2 = model.class(&[("1", qi(-4)), ("H", qi(2)), ("l", q(-5, 3))])?;
        Ok(Self::new(KuBasisName::Lambda, [l1, l2]))
    }

    fn new(name: KuBasisName, basis_ch: [GradedClass; 2]) -> Self {
        KuBasis { name, gram: name.gram(), basis_ch }
    }

    pub fn model(&self) -> &Arc<VarietyModel> {
        self.basis_ch[0].model()
    }

    pub fn ch_of(&self, v: &KnumClass) -> Result<GradedClass> {
        self.check(v)?;
        Ok(&self.basis_ch[0].scale_int(v.coords[0]) + &self.basis_ch[1].scale_int(v.coords[1]))
    }

    /// The Euler form recomputed from the Chern characters.
    pub fn recomputed_gram(&self) -> Result<[[BigInt; 2]; 2]> {
        let e = |i: usize, j: usize| euler_pairing_integral(&self.basis_ch[i], &self.basis_ch[j]);
        Ok([[e(0, 0)?, e(0, 1)?], [e(1, 0)?, e(1, 1)?]])
    }

    pub fn class(&self, a: i64, b: i64) -> KnumClass {
        KnumClass::new(self.name, a, b)
    }

    fn check(&self, v: &KnumClass) -> Result<()> {
        if v.basis != self.name {
            return Err(Error::BasisMismatch {
                left: self.name.to_string(),
                right: v.basis.to_string(),
            });
        }
        Ok(())
    }
}

fn expect_kind(model: &VarietyModel, kind: VarietyKind) -> Result<()> {
    if model.kind() != kind {
        return Err(Error::UnsupportedVariety(format!(
            "{} (expected {})",
            model.id(),
            kind.slug()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KnumClass {
    pub basis: KuBasisName,
    pub coords: [i64; 2],
}

impl KnumClass {
    pub fn new(basis: KuBasisName, a: i64, b: i64) -> Self {
        KnumClass { basis, coords: [a, b] }
    }

    pub fn is_zero(&self) -> bool {
        self.coords == [0, 0]
    }

    pub fn neg(&self) -> Self {
        KnumClass::new(self.basis, -self.coords[0], -self.coords[1])
    }

    pub fn scale(&self, k: i64) -> Self {
        KnumClass::new(self.basis, k * self.coords[0], k * self.coords[1])
    }

    /// `(k, v₀)` with `v = k·v₀`, `k > 0` and `v₀` primitive. `None` for zero.
    pub fn primitive_part(&self) -> Option<(i64, KnumClass)> {
        let [a, b] = self.coords;
        let k = num_integer::gcd(a, b);
        (k != 0).then(|| (k, KnumClass::new(self.basis, a / k, b / k)))
    }
}

impl fmt::Display for KnumClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}, {})", self.basis, self.coords[0], self.coords[1])
    }
}

/// `vᵀ · gram · w`.
pub fn euler_form(basis: &KuBasis, v: &KnumClass, w: &KnumClass) -> Result<i64> {
    basis.check(v)?;
    basis.check(w)?;
    Ok(knum_pairing(basis.name, v.coords, w.coords))
}

/// Euler form on raw coordinates of the named basis.
pub fn knum_pairing(name: KuBasisName, v: [i64; 2], w: [i64; 2]) -> i64 {
    let g = name.gram();
    (0..2).map(|i| (0..2).map(|j| v[i] * g[i][j] * w[j]).sum::<i64>()).sum()
}

/// `(r, c, s)` with `c` in the Picard lattice given by `gram`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MukaiVector {
    pub r: i64,
    pub c: Vec<i64>,
    pub s: i64,
    pub gram: Vec<Vec<i64>>,
}

impl MukaiVector {
    pub fn new(gram: &[Vec<i64>], r: i64, c: Vec<i64>, s: i64) -> Self {
        assert_eq!(c.len(), gram.len());
        MukaiVector { r, c, s, gram: gram.to_vec() }
    }

    pub fn zero(gram: &[Vec<i64>]) -> Self {
        Self::new(gram, 0, vec![0; gram.len()], 0)
    }

    /// From flat coordinates `(r, c_1, …, c_ρ, s)`.
    pub fn from_coords(gram: &[Vec<i64>], coords: &[i64]) -> Result<Self> {
        if coords.len() != gram.len() + 2 {
            return Err(Error::LatticeMismatch);
        }
        let n = coords.len();
        Ok(Self::new(gram, coords[0], coords[1..n - 1].to_vec(), coords[n - 1]))
    }

    pub fn coords(&self) -> Vec<i64> {
        let mut v = vec![self.r];
        v.extend_from_slice(&self.c);
        v.push(self.s);
        v
    }

    pub fn square(&self) -> i64 {
        mukai_pairing(self, self).expect("same lattice")
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.gram, -self.r, self.c.iter().map(|x| -x).collect(), -self.s)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.gram != other.gram {
            return Err(Error::LatticeMismatch);
        }
        Ok(Self::new(
            &self.gram,
            self.r + other.r,
            self.c.iter().zip(&other.c).map(|(a, b)| a + b).collect(),
            self.s + other.s,
        ))
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::new(&self.gram, k * self.r, self.c.iter().map(|x| k * x).collect(), k * self.s)
    }

    /// `Σ k_i · v_i` over vectors on one lattice.
    pub fn combination(gram: &[Vec<i64>], terms: &[(i64, &MukaiVector)]) -> Result<Self> {
        terms.iter().try_fold(Self::zero(gram), |acc, (k, v)| acc.add(&v.scale(*k)))
    }
}

impl fmt::Display for MukaiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.c.iter().map(i64::to_string).collect();
        write!(f, "({}, [{}], {})", self.r, c.join(", "), self.s)
    }
}

/// Gram matrix of the Mukai pairing on flat coordinates `(r, c, s)`.
pub fn mukai_form(gram: &[Vec<i64>]) -> IntMatrix {
    let rho = gram.len();
    let n = rho + 2;
    let mut m = vec![vec![BigInt::zero(); n]; n];
    m[0][n - 1] = BigInt::from(-1);
    m[n - 1][0] = BigInt::from(-1);
    for i in 0..rho {
        for j in 0..rho {
            m[1 + i][1 + j] = BigInt::from(gram[i][j]);
        }
    }
    m
}

/// `c·c' − r s' − r' s`.
pub fn mukai_pairing(a: &MukaiVector, b: &MukaiVector) -> Result<i64> {
    if a.gram != b.gram {
        return Err(Error::LatticeMismatch);
    }
    let mut acc: i128 = -(a.r as i128) * (b.s as i128) - (b.r as i128) * (a.s as i128);
    for i in 0..a.c.len() {
        for j in 0..b.c.len() {
            acc += (a.c[i] as i128) * (a.gram[i][j] as i128) * (b.c[j] as i128);
        }
    }
    i64::try_from(acc).map_err(|_| Error::Overflow("mukai_pairing"))
}

fn picard_of(k3: &VarietyModel) -> Result<Vec<Vec<i64>>> {
    let gram = k3.picard_gram().ok_or_else(|| Error::NotK3(k3.id().into()))?;
    gram.iter()
        .map(|row| row.iter().map(|x| x.to_i64().ok_or(Error::Overflow("picard gram"))).collect())
        .collect()
}

/// `ch · √td` on a K3: `(r, c, ch₂ + r)`.
pub fn mukai_vector(k3: &VarietyModel, ch: &GradedClass) -> Result<MukaiVector> {
    k3.owns(ch)?;
    let gram = picard_of(k3)?;
    let int = |x: &Q, what: &str| -> Result<i64> {
        as_integer(x).and_then(|n| n.to_i64()).ok_or_else(|| Error::NonIntegral {
            context: format!("{what} of the Mukai vector of {ch}"),
            value: x.to_string(),
        })
    };
    let coeffs = ch.coeffs();
    let r = int(&coeffs[0], "rank")?;
    let c = (0..gram.len()).map(|i| int(&coeffs[1 + i], "c")).collect::<Result<Vec<_>>>()?;
    let s = int(&(&coeffs[k3.point_index()] + qi(r)), "s")?;
    Ok(MukaiVector::new(&gram, r, c, s))
}

/// Inverse of [`mukai_vector`].
pub fn ch_of_mukai(k3: &Arc<VarietyModel>, v: &MukaiVector) -> Result<GradedClass> {
    if picard_of(k3)? != v.gram {
        return Err(Error::LatticeMismatch);
    }
    let mut coeffs = vec![qi(v.r)];
    coeffs.extend(v.c.iter().map(|&x| qi(x)));
    coeffs.push(qi(v.s - v.r));
    Ok(k3.from_coeffs(coeffs))
}

/// Solves `ch = a·ch(b₁) + b·ch(b₂)` over the full graded basis.
pub fn express_in_basis(basis: &KuBasis, ch: &GradedClass) -> Result<KnumClass> {
    basis.basis_ch[0].same_model(ch)?;
    let n = ch.coeffs().len();
    let a: Vec<Vec<Q>> = (0..n)
        .map(|k| vec![basis.basis_ch[0].coeffs()[k].clone(), basis.basis_ch[1].coeffs()[k].clone()])
        .collect();
    let not_in_span = || Error::NotInSpan { basis: basis.name.to_string() };
    let x = solve_unique(&a, ch.coeffs()).map_err(|e| match e {
        SolveError::Inconsistent | SolveError::Underdetermined => not_in_span(),
    })?;
    let int = |v: &Q| -> Result<i64> {
        as_integer(v).and_then(|n| n.to_i64()).ok_or_else(|| Error::NonIntegral {
            context: format!("{} coordinates of {ch}", basis.name),
            value: v.to_string(),
        })
    };
    Ok(KnumClass::new(basis.name, int(&x[0])?, int(&x[1])?))
}
