//! Weight vectors, edge residues and the combinatorial weight conditions.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::algebra::{is_integer, parse_rational, Rational};
use crate::arrangement::{Arrangement, Flat, Lattice};
use crate::error::{Error, Result};

/// Rational weights `λ_1..λ_d`, one per hyperplane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector {
    entries: Vec<Rational>,
    total: Rational,
}

impl WeightVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        let total = entries.iter().fold(Rational::zero(), |acc, v| acc + v);
        WeightVector { entries, total }
    }

    pub fn zero(d: usize) -> Self {
        Self::new(vec![Rational::zero(); d])
    }

    /// Parses rational strings such as `"1/2"` or `"-3"`.
    pub fn parse<S: AsRef<str>>(items: &[S]) -> Result<Self> {
        Ok(Self::new(
            items
                .iter()
                .map(|s| parse_rational(s.as_ref()))
                .collect::<Result<_>>()?,
        ))
    }

    /// Fails unless there is exactly one weight per hyperplane.
    pub fn for_arrangement(self, arr: &Arrangement) -> Result<Self> {
        if self.entries.len() != arr.len() {
            return Err(Error::WeightCount {
                expected: arr.len(),
                found: self.entries.len(),
            });
        }
        Ok(self)
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `ι_E(ω) = Σ λ_k`.
    pub fn total(&self) -> &Rational {
        &self.total
    }

    /// `λ - z·(1, …, 1)`.
    pub fn shifted(&self, z: &BigInt) -> WeightVector {
        let z = Rational::from_integer(z.clone());
        Self::new(self.entries.iter().map(|v| v - &z).collect())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.entries.iter().map(ToString::to_string).collect()
    }
}

/// `Σ λ_k` over the hyperplanes containing the edge.
pub fn edge_residue(weights: &WeightVector, flat: &Flat) -> Rational {
    flat.hset
        .iter()
        .fold(Rational::zero(), |acc, &k| acc + &weights.entries[k])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatCondition {
    pub flat: usize,
    pub residue: Rational,
    /// `min{2, rank E}`
    pub threshold: u32,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionReport {
    pub records: Vec<FlatCondition>,
    pub ok: bool,
}

impl ConditionReport {
    pub fn failures(&self) -> impl Iterator<Item = &FlatCondition> {
        self.records.iter().filter(|r| !r.ok)
    }
}

fn passes(residue: &Rational, threshold: u32) -> bool {
    !is_integer(residue) || residue < &Rational::from_integer(threshold.into())
}

/// At every edge of positive rank, the residue must avoid the integers
/// `≥ min{2, rank E}`.
pub fn check_conditions(lattice: &Lattice, weights: &WeightVector) -> ConditionReport {
    let records: Vec<FlatCondition> = lattice
        .flats()
        .iter()
        .filter(|f| f.rank >= 1)
        .map(|f| {
            let residue = edge_residue(weights, f);
            let threshold = f.rank.min(2) as u32;
            FlatCondition {
                flat: f.id,
                ok: passes(&residue, threshold),
                residue,
                threshold,
            }
        })
        .collect();
    let ok = records.iter().all(|r| r.ok);
    ConditionReport { records, ok }
}

/// Result of [`normalize`]: `weights = λ - shift·(1, …, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    pub weights: WeightVector,
    pub shift: BigInt,
}

/// Smallest integer `z ≥ 0` such that `λ - z·(1, …, 1)` satisfies the weight
/// conditions. Both weight vectors give the same rank-one local system.
pub fn normalize(lattice: &Lattice, weights: &WeightVector) -> Normalized {
    // Shifting by z lowers the residue at E by z·d_E. Any z whose shifted
    // residues all fall below 1 passes; z = max(0, ceil(max residue)) does.
    let flats: Vec<(&Flat, Rational)> = lattice
        .flats()
        .iter()
        .filter(|f| f.rank >= 1)
        .map(|f| (f, edge_residue(weights, f)))
        .collect();
    let bound = flats
        .iter()
        .map(|(_, r)| r.ceil().to_integer())
        .fold(BigInt::zero(), |acc, v| acc.max(v));
    let mut z = BigInt::zero();
    loop {
        let ok = flats.iter().all(|(f, r)| {
            let shifted = r - Rational::from_integer(&z * BigInt::from(f.hset.len()));
            passes(&shifted, f.rank.min(2) as u32)
        });
        if ok || z > bound {
            debug_assert!(ok, "shift bound was too small");
            return Normalized {
                weights: weights.shifted(&z),
                shift: z,
            };
        }
        z += 1;
    }
}

/// True when `Σλ` is an integer, so the critical grade `-Σλ` exists.
pub fn has_integral_total(weights: &WeightVector) -> bool {
    is_integer(weights.total())
}

/// `-Σλ` when it is an integer.
pub fn critical_grade(weights: &WeightVector) -> Option<i64> {
    if !has_integral_total(weights) {
        return None;
    }
    let t = weights.total().to_integer();
    let neg: BigInt = -t;
    i64::try_from(neg).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::arrangement::flats;

    fn xy() -> (Arrangement, Lattice) {
        let a = Arrangement::from_integers(&[&[1, 0], &[0, 1]]).unwrap();
        let l = flats(&a);
        (a, l)
    }

    #[test]
    fn xy_unit_weights_fail_on_hyperplane() {
        let (_, l) = xy();
        let w = WeightVector::new(vec![rat(1), rat(1)]);
        let rep = check_conditions(&l, &w);
        assert!(!rep.ok);
        let failed: Vec<usize> = rep.failures().map(|r| r.flat).collect();
        // {x}, {y} fail at threshold 1; the center has residue 2 ≥ 2
        assert_eq!(failed, vec![1, 2, 3]);
    }

    #[test]
    fn zero_weights_pass() {
        let (_, l) = xy();
        let rep = check_conditions(&l, &WeightVector::zero(2));
        assert!(rep.ok);
        assert!(rep.records.iter().all(|r| r.residue.is_zero()));
    }

    #[test]
    fn normalize_xy() {
        let (_, l) = xy();
        let n = normalize(&l, &WeightVector::new(vec![rat(1), rat(1)]));
        assert_eq!(n.shift, BigInt::from(1));
        assert_eq!(n.weights, WeightVector::zero(2));
        let again = normalize(&l, &n.weights);
        assert_eq!(again.shift, BigInt::zero());
    }

    #[test]
    fn parse_and_total() {
        let w = WeightVector::parse(&["1/2", "1/2", "-1/2", "-1/2", "1/4", "1/4", "1/4", "1/4"])
            .unwrap();
        assert_eq!(w.total(), &rat(1));
        assert_eq!(critical_grade(&w), Some(-1));
        let w = WeightVector::parse(&["1/3"]).unwrap();
        assert_eq!(critical_grade(&w), None);
    }

    #[test]
    fn weight_count_checked() {
        let (a, _) = xy();
        assert!(matches!(
            WeightVector::zero(3).for_arrangement(&a),
            Err(Error::WeightCount {
                expected: 2,
                found: 3
            })
        ));
    }
}
