//! Candidate codimension-one components of Bernstein–Sato ideals attached
//! to a factorization of the arrangement.
//!
//! For a dense edge `E`, with `d_E` hyperplanes through it of which
//! `d_{E,k}` lie in the factor `f_k`, the candidates are the affine
//! hyperplanes `Σ_k d_{E,k} s_k + rank(E) + v = 0` for `0 ≤ v ≤ Q_E`.
//! These are candidates only: the list is a superset of the actual
//! components.

use std::collections::BTreeMap;

use crate::algebra::Rational;
use crate::arrangement::{Arrangement, Lattice};
use crate::error::{Error, Result};

/// A partition of the hyperplane indices `0..d` into non-empty blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl Factorization {
    /// Validates zero-based blocks against `d` hyperplanes.
    pub fn new(d: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::BadFactorization("no blocks".into()));
        }
        let mut block_of = vec![usize::MAX; d];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::BadFactorization(format!("block {} is empty", b + 1)));
            }
            for &k in block {
                if k >= d {
                    return Err(Error::BadFactorization(format!(
                        "hyperplane {} does not exist",
                        k + 1
                    )));
                }
                if block_of[k] != usize::MAX {
                    return Err(Error::BadFactorization(format!(
                        "hyperplane {} appears twice",
                        k + 1
                    )));
                }
                block_of[k] = b;
            }
        }
        if let Some(k) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(Error::BadFactorization(format!(
                "hyperplane {} is in no block",
                k + 1
            )));
        }
        let blocks = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        Ok(Factorization { blocks, block_of })
    }

    /// Same, from one-based indices as written in input files.
    pub fn from_one_based(d: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let zero_based = blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|&k| {
                        k.checked_sub(1).ok_or_else(|| {
                            Error::BadFactorization("hyperplane indices start at 1".into())
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(d, zero_based)
    }

    /// `F = (f)`.
    pub fn trivial(d: usize) -> Self {
        Self::new(d, vec![(0..d).collect()]).expect("trivial factorization is valid")
    }

    /// `F = (ℓ_1, …, ℓ_d)`.
    pub fn linears(d: usize) -> Self {
        Self::new(d, (0..d).map(|k| vec![k]).collect()).expect("linear factorization is valid")
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn is_linears(&self) -> bool {
        self.blocks.len() == self.block_of.len()
    }
}

/// Which bound on `v` applied to an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundCase {
    /// factorization into linear forms: `2d_E - rank(E) - min{2, rank(E)}`
    Linears,
    /// any factorization, `E` the origin of an essential arrangement: same bound
    Origin,
    /// otherwise: `2d_E - rank(E) - 1`
    General,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateComponent {
    pub flat: usize,
    /// block index → `d_{E,k}`, nonzero entries only
    pub coeffs: BTreeMap<usize, usize>,
    pub rank: usize,
    pub v: usize,
    pub q_bound: usize,
    pub case: BoundCase,
}

impl CandidateComponent {
    /// `rank(E) + v`
    pub fn constant(&self) -> usize {
        self.rank + self.v
    }

    pub fn d_e(&self) -> usize {
        self.coeffs.values().sum()
    }

    /// Root `-(rank(E) + v)/d_E` after setting every `s_k = s`.
    pub fn specialized_root(&self) -> Rational {
        Rational::new(
            -num_bigint::BigInt::from(self.constant()),
            num_bigint::BigInt::from(self.d_e()),
        )
    }

    /// Human form such as `2*s1 + s3 + 3`, with one-based block names.
    pub fn equation(&self) -> String {
        let mut parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(k, c)| {
                if *c == 1 {
                    format!("s{}", k + 1)
                } else {
                    format!("{c}*s{}", k + 1)
                }
            })
            .collect();
        parts.push(self.constant().to_string());
        parts.join(" + ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CandidateWarning {
    /// The arrangement is not essential, so the maximal flat is not the
    /// origin and the origin-specific bound was not used.
    NotEssentialCenter,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidates {
    pub components: Vec<CandidateComponent>,
    pub warnings: Vec<CandidateWarning>,
}

/// Candidate components for every dense edge. Requires a lattice with
/// dense flags filled in.
pub fn candidates(
    arr: &Arrangement,
    lattice: &Lattice,
    factorization: &Factorization,
) -> Candidates {
    assert_eq!(
        factorization.block_of.len(),
        arr.len(),
        "factorization size"
    );
    let linears = factorization.is_linears();
    let essential = arr.is_essential();
    let top = lattice.top().id;
    let mut warnings = Vec::new();
    if !linears && !essential {
        warnings.push(CandidateWarning::NotEssentialCenter);
    }
    let mut components = Vec::new();
    for flat in lattice.flats().iter().filter(|f| f.dense) {
        let d_e = flat.hset.len();
        let mut coeffs = BTreeMap::new();
        for &k in &flat.hset {
            *coeffs.entry(factorization.block_of[k]).or_insert(0) += 1;
        }
        let case = if linears {
            BoundCase::Linears
        } else if essential && flat.id == top {
            BoundCase::Origin
        } else {
            BoundCase::General
        };
        let q_bound = match case {
            BoundCase::Linears | BoundCase::Origin => 2 * d_e - flat.rank - flat.rank.min(2),
            BoundCase::General => 2 * d_e - flat.rank - 1,
        };
        for v in 0..=q_bound {
            components.push(CandidateComponent {
                flat: flat.id,
                coeffs: coeffs.clone(),
                rank: flat.rank,
                v,
                q_bound,
                case,
            });
        }
    }
    Candidates {
        components,
        warnings,
    }
}

/// Candidate roots of the Bernstein–Sato polynomial of `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnivariateRoots {
    /// distinct, in decreasing order
    pub roots: Vec<Rational>,
    /// `-2 + 1/d`
    pub lower: Rational,
    /// `Some(all roots in (-2 + 1/d, 0))` when `d ≥ 2`, `None` for a smooth
    /// hypersurface
    pub inside_interval: Option<bool>,
}

pub fn univariate_roots(arr: &Arrangement, lattice: &Lattice) -> UnivariateRoots {
    let d = arr.len();
    let cands = candidates(arr, lattice, &Factorization::trivial(d));
    let mut roots: Vec<Rational> = cands
        .components
        .iter()
        .map(|c| c.specialized_root())
        .collect();
    roots.sort_by(|a, b| b.cmp(a));
    roots.dedup();
    let lower =
        Rational::from_integer((-2).into()) + Rational::new(1.into(), num_bigint::BigInt::from(d));
    let zero = Rational::from_integer(0.into());
    let inside_interval = (d >= 2).then(|| roots.iter().all(|r| r > &lower && r < &zero));
    UnivariateRoots {
        roots,
        lower,
        inside_interval,
    }
}
