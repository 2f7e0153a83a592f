//! Checks on rank-two Picard lattices of polarized K3 surfaces.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// `(10, x; x, 2)`
    #[serde(rename = "10-x-2")]
    X2,
    /// `(10, 5; 5, 0)`
    #[serde(rename = "10-5-0")]
    FiveZero,
    /// `(10, x; x, 4)`
    #[serde(rename = "10-x-4")]
    X4,
    /// `(4, 1; 1, −2)`
    #[serde(rename = "quartic-line")]
    QuarticWithLine,
}

impl Family {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "10-x-2" | "x2" => Ok(Family::X2),
            "10-5-0" | "50" => Ok(Family::FiveZero),
            "10-x-4" | "x4" => Ok(Family::X4),
            "quartic-line" | "quartic" => Ok(Family::QuarticWithLine),
            _ => Err(Error::BadGram(format!("unknown lattice family `{s}`"))),
        }
    }

    /// The family whose shape matches `gram`, if any.
    pub fn infer(gram: &[[i64; 2]; 2]) -> Option<Self> {
        match (gram[0][0], gram[1][1]) {
            (10, 2) => Some(Family::X2),
            (10, 0) if gram[0][1] == 5 => Some(Family::FiveZero),
            (10, 4) => Some(Family::X4),
            (4, -2) if gram[0][1] == 1 => Some(Family::QuarticWithLine),
            _ => None,
        }
    }

    fn check_shape(self, g: &[[i64; 2]; 2]) -> Result<()> {
        let ok = match self {
            Family::X2 => g[0][0] == 10 && g[1][1] == 2,
            Family::FiveZero => *g == [[10, 5], [5, 0]],
            Family::X4 => g[0][0] == 10 && g[1][1] == 4,
            Family::QuarticWithLine => *g == [[4, 1], [1, -2]],
        };
        if ok {
            Ok(())
        } else {
            Err(Error::BadGram(format!("{g:?} is not in the {self:?} family")))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PicardLatticeReport {
    pub gram: [[i64; 2]; 2],
    pub family: Family,
    pub det: i64,
    pub hyperbolic_ok: bool,
    /// Primitive generator of `H^⊥`.
    pub orthogonal_generator: [i64; 2],
    pub generator_square: i64,
    pub minus_two_orthogonal: bool,
    pub family_condition_ok: bool,
    pub family_condition: &'static str,
    pub verdict: bool,
}

fn check_symmetric(gram: &[[i64; 2]; 2]) -> Result<()> {
    if gram[0][1] != gram[1][0] {
        return Err(Error::BadGram(format!("not symmetric: {gram:?}")));
    }
    Ok(())
}

/// Primitive integral generator of the orthogonal complement of basis
/// vector `h_index`, with first nonzero coordinate positive.
pub fn orthogonal_primitive(gram: &[[i64; 2]; 2], h_index: usize) -> Result<[i64; 2]> {
    check_symmetric(gram)?;
    if h_index > 1 {
        return Err(Error::BadGram(format!("no basis vector {h_index} in rank 2")));
    }
    let [x, y] = gram[h_index];
    if x == 0 && y == 0 {
        return Err(Error::Degenerate(format!("basis vector {h_index} is in the radical")));
    }
    // a·x + b·y = 0
    let g = x.gcd(&y);
    let mut v = [y / g, -x / g];
    if v[0] < 0 || (v[0] == 0 && v[1] < 0) {
        v = [-v[0], -v[1]];
    }
    Ok(v)
}

fn square(gram: &[[i64; 2]; 2], v: [i64; 2]) -> i64 {
    (0..2).map(|i| (0..2).map(|j| v[i] * gram[i][j] * v[j]).sum::<i64>()).sum()
}

/// In rank two a (−2)-class orthogonal to `H` is `±v₀` itself, so it
/// suffices to test the square of the primitive generator.
pub fn validate_lattice(gram: &[[i64; 2]; 2], family: Family) -> Result<PicardLatticeReport> {
    check_symmetric(gram)?;
    family.check_shape(gram)?;
    let det = gram[0][0] * gram[1][1] - gram[0][1] * gram[1][0];
    let gen = orthogonal_primitive(gram, 0)?;
    let generator_square = square(gram, gen);
    let minus_two_orthogonal = generator_square == -2;
    let (family_condition_ok, family_condition) = match family {
        Family::X2 => (gram[0][1] != 5, "x != 5 (per cited criterion)"),
        _ => (true, "none stated (per cited criterion)"),
    };
    let hyperbolic_ok = det < 0;
    Ok(PicardLatticeReport {
        gram: *gram,
        family,
        det,
        hyperbolic_ok,
        orthogonal_generator: gen,
        generator_square,
        minus_two_orthogonal,
        family_condition_ok,
        family_condition,
        verdict: hyperbolic_ok && !minus_two_orthogonal && family_condition_ok,
    })
}
