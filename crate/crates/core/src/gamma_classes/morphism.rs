use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{check_dim, Result};
use crate::exactcore::{IntMatrix, Rational};
use crate::semilinear::{Cell, SemilinearSet};

/// `x ↦ matrix·x + shift` on `domain`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffinePiece {
    pub domain: Cell,
    pub matrix: IntMatrix,
    pub shift: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseAffineMap {
    pub pieces: Vec<AffinePiece>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MorphismMode {
    Plain,
    /// Additionally require the coordinate sum to be preserved.
    SumPreserving,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MorphismFailure {
    NotUnimodular { piece: usize },
    ShiftNotIntegral { piece: usize },
    SumNotPreserved { piece: usize },
    /// A point of `X` covered by two domains.
    OverlappingDomains { pieces: (usize, usize), point: Vec<Rational> },
    /// A point of `X` outside every domain.
    Uncovered { point: Vec<Rational> },
    /// A point of `Y` hit from two pieces.
    OverlappingImages { pieces: (usize, usize), point: Vec<Rational> },
    /// A point of `Y` not in the image.
    NotSurjective { point: Vec<Rational> },
    /// An image point outside `Y`.
    ImageOutside { piece: usize, point: Vec<Rational> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MorphismReport {
    pub valid: bool,
    pub failure: Option<MorphismFailure>,
    /// On success: the image of each piece (restricted to `X`).
    pub images: Vec<SemilinearSet>,
}

impl MorphismReport {
    fn fail(f: MorphismFailure) -> Self {
        MorphismReport {
            valid: false,
            failure: Some(f),
            images: Vec::new(),
        }
    }
}

/// Checks that `f` restricts to a bijection `X → Y` that is piecewise of the
/// form `x ↦ Mx + a` with `M ∈ GL_n(Z)` and `a ∈ Z^n`. Each piece acts on
/// `domain ∩ X`.
pub fn verify_morphism(
    f: &PiecewiseAffineMap,
    x: &SemilinearSet,
    y: &SemilinearSet,
    mode: MorphismMode,
) -> Result<MorphismReport> {
    let n = x.dim_ambient();
    check_dim(n, y.dim_ambient())?;
    for (i, p) in f.pieces.iter().enumerate() {
        check_dim(n, p.domain.dim_ambient())?;
        check_dim(n, p.matrix.rows())?;
        check_dim(n, p.matrix.cols())?;
        check_dim(n, p.shift.len())?;
        if !p.matrix.is_unimodular()? {
            return Ok(MorphismReport::fail(MorphismFailure::NotUnimodular { piece: i }));
        }
        if !p.shift.iter().all(|a| a.is_integer()) {
            return Ok(MorphismReport::fail(MorphismFailure::ShiftNotIntegral { piece: i }));
        }
        if mode == MorphismMode::SumPreserving {
            let cols_ok = (0..n).all(|j| (0..n).map(|r| p.matrix.get(r, j)).sum::<BigInt>().is_one());
            let shift_ok = p.shift.iter().sum::<Rational>().is_zero();
            if !cols_ok || !shift_ok {
                return Ok(MorphismReport::fail(MorphismFailure::SumNotPreserved { piece: i }));
            }
        }
    }
    let domains: Vec<SemilinearSet> = f
        .pieces
        .iter()
        .map(|p| p.domain.to_set().intersect(x))
        .collect::<Result<_>>()?;
    for i in 0..domains.len() {
        for j in i + 1..domains.len() {
            let both = domains[i].intersect(&domains[j])?;
            if let Some(point) = both.sample_point() {
                return Ok(MorphismReport::fail(MorphismFailure::OverlappingDomains {
                    pieces: (i, j),
                    point,
                }));
            }
        }
    }
    let mut covered = SemilinearSet::empty(n);
    for d in &domains {
        covered = covered.union_raw(d)?;
    }
    if let Some(point) = x.difference(&covered)?.sample_point() {
        return Ok(MorphismReport::fail(MorphismFailure::Uncovered { point }));
    }
    let images: Vec<SemilinearSet> = f
        .pieces
        .iter()
        .zip(&domains)
        .map(|(p, d)| d.int_affine_image(&p.matrix, &p.shift))
        .collect::<Result<_>>()?;
    for (i, img) in images.iter().enumerate() {
        if let Some(point) = img.difference(y)?.sample_point() {
            return Ok(MorphismReport::fail(MorphismFailure::ImageOutside { piece: i, point }));
        }
    }
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            if let Some(point) = images[i].intersect(&images[j])?.sample_point() {
                return Ok(MorphismReport::fail(MorphismFailure::OverlappingImages {
                    pieces: (i, j),
                    point,
                }));
            }
        }
    }
    let mut hit = SemilinearSet::empty(n);
    for img in &images {
        hit = hit.union_raw(img)?;
    }
    if let Some(point) = y.difference(&hit)?.sample_point() {
        return Ok(MorphismReport::fail(MorphismFailure::NotSurjective { point }));
    }
    Ok(MorphismReport {
        valid: true,
        failure: None,
        images,
    })
}
