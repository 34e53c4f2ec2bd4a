//! The twisted differential `∇_ω = d + ω∧` and the Euler contraction on
//! graded pieces of logarithmic forms, and the cohomology of the
//! homogeneous subcomplexes.
//!
//! With `ω = Σ λ_k dℓ_k/ℓ_k` and `η = A/f`,
//! `f·∇_ω(η) = dA + Σ_k (λ_k - 1)·(dℓ_k ∧ A)/ℓ_k`, where each division is
//! exact because `η` is logarithmic. `ι_E` is `O`-linear, so
//! `f·ι_E(η) = ι_E(A)`. Both maps preserve the grade.

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::algebra::{LinearReducer, PolyForm, Rational};
use crate::arrangement::{Arrangement, Lattice};
use crate::error::{Error, Result};
use crate::linalg::{RatMatrix, SparseEchelon};
use crate::logforms::{graded_bases, GradedBasis};
use crate::weights::{check_conditions, critical_grade, ConditionReport, WeightVector};

/// Applies `f·∇_ω(·/f)` to numerators.
pub struct Twist<'a> {
    arr: &'a Arrangement,
    parts: Vec<(PolyForm, LinearReducer, Rational)>,
}

impl<'a> Twist<'a> {
    pub fn new(arr: &'a Arrangement, weights: &WeightVector) -> Self {
        assert_eq!(weights.len(), arr.len(), "one weight per hyperplane");
        let parts = arr
            .forms()
            .iter()
            .zip(weights.entries())
            .map(|(l, w)| {
                (
                    PolyForm::differential_of(l),
                    LinearReducer::new(l),
                    w - Rational::one(),
                )
            })
            .collect();
        Twist { arr, parts }
    }

    /// Numerator of `∇_ω(A/f)`.
    pub fn apply(&self, a: &PolyForm) -> Result<PolyForm> {
        let mut out = a.d();
        for (dl, reducer, c) in &self.parts {
            if c.is_zero() {
                continue;
            }
            let w = dl.wedge(a).try_map_coeffs(|p| reducer.divide(p))?;
            out = out.add(&w.scale(c));
        }
        Ok(out)
    }

    pub fn arrangement(&self) -> &Arrangement {
        self.arr
    }
}

/// Matrix of `∇_ω` from the `(j, q)` basis to the `(j + 1, q)` basis.
pub fn nabla_matrix(
    arr: &Arrangement,
    weights: &WeightVector,
    source: &GradedBasis,
    target: &GradedBasis,
) -> Result<RatMatrix> {
    check_shapes(source, target, 1)?;
    let twist = Twist::new(arr, weights);
    let columns = source
        .elements()
        .par_iter()
        .map(|a| target.coordinates(arr, &twist.apply(a)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(RatMatrix::from_columns(target.dim(), columns))
}

/// Matrix of `ι_E` from the `(j, q)` basis to the `(j - 1, q)` basis.
pub fn contraction_matrix(
    arr: &Arrangement,
    source: &GradedBasis,
    target: &GradedBasis,
) -> Result<RatMatrix> {
    if source.form_degree() == 0 || source.form_degree() != target.form_degree() + 1 {
        return Err(Error::Invariant(format!(
            "contraction maps degree j to j - 1, got {} -> {}",
            source.form_degree(),
            target.form_degree()
        )));
    }
    if source.grade() != target.grade() {
        return Err(Error::Invariant("contraction preserves the grade".into()));
    }
    let columns = source
        .elements()
        .par_iter()
        .map(|a| target.coordinates(arr, &a.contract_euler()))
        .collect::<Result<Vec<_>>>()?;
    Ok(RatMatrix::from_columns(target.dim(), columns))
}

fn check_shapes(source: &GradedBasis, target: &GradedBasis, step: usize) -> Result<()> {
    if target.form_degree() != source.form_degree() + step || source.grade() != target.grade() {
        return Err(Error::Invariant(format!(
            "bad source/target pair ({}, {}) -> ({}, {})",
            source.form_degree(),
            source.grade(),
            target.form_degree(),
            target.grade()
        )));
    }
    Ok(())
}

pub fn matrix_rank(m: &RatMatrix) -> usize {
    SparseEchelon::from_matrix(m).rank()
}

/// All graded pieces of one grade, with the `∇_ω` and `ι_E` matrices
/// between them built on demand.
pub struct GradedComplex<'a> {
    arr: &'a Arrangement,
    q: i64,
    bases: Vec<GradedBasis>,
}

impl<'a> GradedComplex<'a> {
    pub fn new(arr: &'a Arrangement, q: i64) -> Result<Self> {
        Ok(GradedComplex {
            arr,
            q,
            bases: graded_bases(arr, q)?,
        })
    }

    pub fn grade(&self) -> i64 {
        self.q
    }

    pub fn bases(&self) -> &[GradedBasis] {
        &self.bases
    }

    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(GradedBasis::dim).collect()
    }

    /// `∇_ω` matrices `M_j : j → j + 1` for `j = 0..n`.
    pub fn nabla_matrices(&self, weights: &WeightVector) -> Result<Vec<RatMatrix>> {
        self.bases
            .windows(2)
            .map(|w| nabla_matrix(self.arr, weights, &w[0], &w[1]))
            .collect()
    }

    /// `ι_E` matrices `C_j : j → j - 1` for `j = 1..=n`.
    pub fn contraction_matrices(&self) -> Result<Vec<RatMatrix>> {
        self.bases
            .windows(2)
            .map(|w| contraction_matrix(self.arr, &w[1], &w[0]))
            .collect()
    }
}

/// Dimensions, ranks and Betti numbers of one homogeneous subcomplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexReport {
    pub q: i64,
    pub lambda: WeightVector,
    /// `dim Ω^j(log)_q`, `j = 0..=n`
    pub dims: Vec<usize>,
    /// rank of `∇_ω : j → j + 1`, `j = 0..n`; these are the image dimensions
    pub ranks: Vec<usize>,
    pub betti: Vec<usize>,
    /// the weight conditions hold
    pub certified: bool,
}

impl ComplexReport {
    pub fn euler_characteristic(&self) -> i64 {
        alternating_sum(&self.betti)
    }
}

pub(crate) fn alternating_sum(v: &[usize]) -> i64 {
    v.iter()
        .enumerate()
        .map(|(j, &x)| if j % 2 == 0 { x as i64 } else { -(x as i64) })
        .sum()
}

/// Assembles the report from precomputed bases and checks `∇² = 0`.
pub fn complex_report(
    complex: &GradedComplex<'_>,
    weights: &WeightVector,
    certified: bool,
) -> Result<ComplexReport> {
    let mats = complex.nabla_matrices(weights)?;
    for (j, pair) in mats.windows(2).enumerate() {
        if !pair[1].mul(&pair[0]).is_zero() {
            return Err(Error::Invariant(format!(
                "∇∘∇ is nonzero from degree {j} at grade {}",
                complex.q
            )));
        }
    }
    let dims = complex.dims();
    let ranks: Vec<usize> = mats.par_iter().map(matrix_rank).collect();
    let betti = (0..dims.len())
        .map(|j| {
            let out = ranks.get(j).copied().unwrap_or(0);
            let inc = if j == 0 { 0 } else { ranks[j - 1] };
            dims[j]
                .checked_sub(out + inc)
                .ok_or_else(|| Error::Invariant(format!("negative cohomology in degree {j}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ComplexReport {
        q: complex.q,
        lambda: weights.clone(),
        dims,
        ranks,
        betti,
        certified,
    })
}

/// Cohomology of `(Ω^•(log A)_q, ∇_ω)`.
pub fn subcomplex_cohomology(
    arr: &Arrangement,
    lattice: &Lattice,
    weights: &WeightVector,
    q: i64,
) -> Result<ComplexReport> {
    let certified = check_conditions(lattice, weights).ok;
    complex_report(&GradedComplex::new(arr, q)?, weights, certified)
}

/// Betti numbers of the rank-one local system attached to the weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedBetti {
    pub betti: Vec<usize>,
    pub conditions: ConditionReport,
    /// `None` when `Σλ` is not an integer and no matrices were built.
    pub report: Option<ComplexReport>,
    /// The weight conditions hold, so the numbers are local-system Betti
    /// numbers and not just subcomplex cohomology.
    pub certified: bool,
}

/// Cohomology at the critical grade `-Σλ`; all zero when `Σλ ∉ Z`.
pub fn twisted_betti(
    arr: &Arrangement,
    lattice: &Lattice,
    weights: &WeightVector,
) -> Result<TwistedBetti> {
    let conditions = check_conditions(lattice, weights);
    let certified = conditions.ok;
    let Some(q) = critical_grade(weights) else {
        return Ok(TwistedBetti {
            betti: vec![0; arr.nvars() + 1],
            conditions,
            report: None,
            certified,
        });
    };
    let report = complex_report(&GradedComplex::new(arr, q)?, weights, certified)?;
    Ok(TwistedBetti {
        betti: report.betti.clone(),
        conditions,
        report: Some(report),
        certified,
    })
}

/// Outcome of checking `∇ι + ι∇ = (q + Σλ)·Id` on one graded piece.
#[derive(Clone, Debug)]
pub struct LieCheck {
    pub j: usize,
    pub q: i64,
    pub ok: bool,
    /// `∇ι + ι∇ - (q + Σλ)·Id`; zero when `ok`.
    pub residual: RatMatrix,
}

/// Checks the homotopy identity on the `(j, q)` basis, exactly.
pub fn lie_identity_check(
    complex: &GradedComplex<'_>,
    weights: &WeightVector,
    j: usize,
) -> Result<LieCheck> {
    let arr = complex.arr;
    let bases = &complex.bases;
    let n = bases.len() - 1;
    let dim = bases[j].dim();
    let mut total = RatMatrix::zeros(dim, dim);
    if j >= 1 {
        let c = contraction_matrix(arr, &bases[j], &bases[j - 1])?;
        let nab = nabla_matrix(arr, weights, &bases[j - 1], &bases[j])?;
        total = total.add(&nab.mul(&c));
    }
    if j < n {
        let nab = nabla_matrix(arr, weights, &bases[j], &bases[j + 1])?;
        let c = contraction_matrix(arr, &bases[j + 1], &bases[j])?;
        total = total.add(&c.mul(&nab));
    }
    let factor = Rational::from_integer(complex.q.into()) + weights.total();
    let residual = total.add(&RatMatrix::identity(dim).scale(&-factor));
    Ok(LieCheck {
        j,
        q: complex.q,
        ok: residual.is_zero(),
        residual,
    })
}
