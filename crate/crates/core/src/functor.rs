//! Class-level transport from the branch divisor into the Kuznetsov
//! component: twist, pushforward, then left mutations through the
//! exceptional collection.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::chow::GradedClass;
use crate::error::{Error, Result};
use crate::grr::{divisor_pushforward, euler_pairing_integral, CoverSetup, SetupKind};
use crate::knum::{
    ch_of_mukai, express_in_basis, mukai_form, mukai_vector, KnumClass, KuBasis, KuBasisName,
    MukaiVector,
};
use crate::linalg::{bilinear, is_positive_definite, lll_reduce, ColumnHermite, IntMatrix};

/// `[L_E F] = [F] − χ(E, F)·[E]`.
pub fn mutate_class(ch_f: &GradedClass, ch_e: &GradedClass) -> Result<GradedClass> {
    let chi = euler_pairing_integral(ch_e, ch_f)?;
    Ok(ch_f - &ch_e.scale(&chi.into()))
}

/// A class on the source of a [`CoverSetup`].
#[derive(Debug, Clone)]
pub enum SourceClass {
    Mukai(MukaiVector),
    Knum(KnumClass),
    Ch(GradedClass),
}

impl SourceClass {
    /// Chern character on `setup.source`.
    pub fn ch(&self, setup: &CoverSetup) -> Result<GradedClass> {
        match self {
            SourceClass::Ch(c) => {
                setup.source.owns(c)?;
                Ok(c.clone())
            }
            SourceClass::Mukai(v) => {
                if !setup.source.is_k3() {
                    return Err(Error::WrongSource(format!(
                        "{} has no Mukai lattice",
                        setup.source.id()
                    )));
                }
                ch_of_mukai(&setup.source, v).map_err(|e| match e {
                    Error::LatticeMismatch => Error::WrongSource(format!(
                        "Mukai vector on {:?}, source is {}",
                        v.gram,
                        setup.source.id()
                    )),
                    e => e,
                })
            }
            SourceClass::Knum(k) => {
                if setup.kind != SetupKind::GmFourfold || k.basis != KuBasisName::Kappa {
                    return Err(Error::WrongSource(format!("{k} on {}", setup.label())));
                }
                KuBasis::kappa(&setup.source)?.ch_of(k)
            }
        }
    }
}

/// Chern character of `Φ(F)` on the target, before expressing it in the Ku basis.
pub fn phi_star_ch(setup: &CoverSetup, ch_f: &GradedClass) -> Result<GradedClass> {
    let twisted = setup.twist(ch_f)?;
    let mut out = divisor_pushforward(setup, &twisted)?;
    for e in setup.collection.iter().rev() {
        out = mutate_class(&out, &e.ch)?;
    }
    Ok(out)
}

/// `Φ_*` of a source class, in the target Ku basis.
pub fn phi_star(setup: &CoverSetup, source: &SourceClass) -> Result<KnumClass> {
    let ch = source.ch(setup)?;
    express_in_basis(&setup.target_basis, &phi_star_ch(setup, &ch)?)
}

/// `Φ_*` as an integer matrix on a fixed basis of the source lattice.
#[derive(Debug, Clone, Serialize)]
pub struct PhiMap {
    pub setup: String,
    pub target: KuBasisName,
    pub source_labels: Vec<String>,
    /// `matrix[row][col]`, two rows.
    pub matrix: Vec<Vec<i64>>,
    /// The form `w ↦ w²` on source coordinates (Mukai pairing, or `−χ`).
    #[serde(skip)]
    pub source_form: IntMatrix,
    #[serde(skip)]
    pub source_gram: Option<Vec<Vec<i64>>>,
}

impl PhiMap {
    pub fn source_rank(&self) -> usize {
        self.source_labels.len()
    }

    pub fn apply(&self, coords: &[i64]) -> Result<KnumClass> {
        if coords.len() != self.source_rank() {
            return Err(Error::LatticeMismatch);
        }
        let row = |r: usize| -> Result<i64> {
            let acc: i128 = self.matrix[r]
                .iter()
                .zip(coords)
                .map(|(&m, &c)| m as i128 * c as i128)
                .sum();
            i64::try_from(acc).map_err(|_| Error::Overflow("PhiMap::apply"))
        };
        Ok(KnumClass::new(self.target, row(0)?, row(1)?))
    }

    pub fn square(&self, coords: &[BigInt]) -> BigInt {
        bilinear(&self.source_form, coords, coords)
    }

    /// Source vector with the given coordinates, as a [`SourceClass`].
    pub fn source_class(&self, coords: &[i64]) -> Result<SourceClass> {
        match &self.source_gram {
            Some(g) => Ok(SourceClass::Mukai(MukaiVector::from_coords(g, coords)?)),
            None => {
                if coords.len() != 2 {
                    return Err(Error::LatticeMismatch);
                }
                Ok(SourceClass::Knum(KnumClass::new(KuBasisName::Kappa, coords[0], coords[1])))
            }
        }
    }
}

/// Columns are `Φ_*` of the coordinate basis of the source lattice:
/// `(r, c_1, …, c_ρ, s)` for a K3 source, `(κ₁, κ₂)` for the GM fourfold.
pub fn phi_matrix(setup: &CoverSetup) -> Result<PhiMap> {
    let (labels, gram, form) = if setup.kind == SetupKind::GmFourfold {
        let g = KuBasisName::Kappa.gram();
        let form = (0..2)
            .map(|i| (0..2).map(|j| BigInt::from(-g[i][j])).collect())
            .collect();
        (vec!["kappa1".to_string(), "kappa2".to_string()], None, form)
    } else {
        let gram: Vec<Vec<i64>> = setup
            .source
            .picard_gram()
            .ok_or_else(|| Error::NotK3(setup.source.id().into()))?
            .iter()
            .map(|r| r.iter().map(|x| x.to_i64().unwrap_or(i64::MAX)).collect())
            .collect();
        let mut labels = vec!["r".to_string()];
        labels.extend(["H", "L"].iter().take(gram.len()).map(|s| s.to_string()));
        labels.push("s".to_string());
        let form = mukai_form(&gram);
        (labels, Some(gram), form)
    };
    let n = labels.len();
    let mut map = PhiMap {
        setup: setup.label(),
        target: setup.target_basis.name,
        source_labels: labels,
        matrix: vec![vec![0; n]; 2],
        source_form: form,
        source_gram: gram,
    };
    for j in 0..n {
        let e: Vec<i64> = (0..n).map(|k| (k == j) as i64).collect();
        let v = phi_star(setup, &map.source_class(&e)?)?;
        map.matrix[0][j] = v.coords[0];
        map.matrix[1][j] = v.coords[1];
    }
    Ok(map)
}

/// `Φ_*` evaluated on named source classes, e.g. `O_X, O_X(−H), O_x`.
pub fn phi_columns(setup: &CoverSetup, named: &[(&str, SourceClass)]) -> Result<Vec<(String, KnumClass)>> {
    named
        .iter()
        .map(|(name, c)| Ok((name.to_string(), phi_star(setup, c)?)))
        .collect()
}

fn hermite_of(map: &PhiMap) -> ColumnHermite {
    let m: IntMatrix =
        map.matrix.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    ColumnHermite::new(m, map.source_rank())
}

#[derive(Debug, Clone, Serialize)]
pub struct ImageLattice {
    /// Hermite basis of the image, as columns.
    pub basis: Vec<[i64; 2]>,
    pub rank: usize,
    /// `[ℤ² : image]` when the image has full rank.
    pub index: Option<i64>,
    #[serde(skip)]
    hermite: ColumnHermite,
}

impl ImageLattice {
    pub fn contains(&self, v: &KnumClass) -> bool {
        let t = [BigInt::from(v.coords[0]), BigInt::from(v.coords[1])];
        self.hermite.preimage(&t).is_some()
    }

    /// Some integral source vector mapping to `v`.
    pub fn preimage(&self, v: &KnumClass) -> Option<Vec<BigInt>> {
        let t = [BigInt::from(v.coords[0]), BigInt::from(v.coords[1])];
        self.hermite.preimage(&t)
    }
}

pub fn image_lattice(map: &PhiMap) -> ImageLattice {
    let hermite = hermite_of(map);
    let to = |x: &BigInt| x.to_i64().expect("small image basis");
    let basis: Vec<[i64; 2]> =
        hermite.image_basis().iter().map(|c| [to(&c[0]), to(&c[1])]).collect();
    let index = (hermite.rank == 2).then(|| (basis[0][0] * basis[1][1] - basis[0][1] * basis[1][0]).abs());
    ImageLattice { rank: hermite.rank, basis, index, hermite }
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelLattice {
    /// Saturated basis, LLL-reduced when the form is definite on it.
    pub basis: Vec<Vec<i64>>,
    /// The source form `w ↦ w²` restricted to the kernel.
    pub gram: Vec<Vec<i64>>,
    pub negative_definite: bool,
}

pub fn kernel_lattice(map: &PhiMap) -> KernelLattice {
    let hermite = hermite_of(map);
    let raw = hermite.kernel_basis();
    let restricted = |b: &[Vec<BigInt>]| -> IntMatrix {
        b.iter().map(|x| b.iter().map(|y| bilinear(&map.source_form, x, y)).collect()).collect()
    };
    let neg = |g: &IntMatrix| -> IntMatrix { g.iter().map(|r| r.iter().map(|x| -x).collect()).collect() };
    let negative_definite = raw.is_empty() || is_positive_definite(&neg(&restricted(&raw)));
    let basis = if negative_definite && raw.len() > 1 {
        lll_reduce(raw, &neg(&map.source_form))
    } else {
        raw
    };
    let gram = restricted(&basis);
    let to = |x: &BigInt| x.to_i64().expect("small kernel basis");
    KernelLattice {
        basis: basis.iter().map(|c| c.iter().map(to).collect()).collect(),
        gram: gram.iter().map(|r| r.iter().map(to).collect()).collect(),
        negative_definite,
    }
}

/// Flat source coordinates of a Mukai vector or κ-class, for matrix use.
pub fn source_coords(source: &SourceClass, setup: &CoverSetup) -> Result<Vec<i64>> {
    match source {
        SourceClass::Mukai(v) => Ok(v.coords()),
        SourceClass::Knum(k) => Ok(k.coords.to_vec()),
        SourceClass::Ch(c) => Ok(mukai_vector(&setup.source, c)?.coords()),
    }
}
