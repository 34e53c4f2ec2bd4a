//! The built-in invariant suite run by `logderham verify`.
//!
//! Every check is exact. Randomized checks draw integer-coefficient forms
//! from a seeded generator; the seed never influences reported dimensions.

use std::ops::RangeInclusive;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::algebra::{monomials_of_degree, subsets, PolyForm, Polynomial, Rational};
use crate::arrangement::{mobius_poincare, Arrangement, Lattice};
use crate::derham::{alternating_sum, lie_identity_check, twisted_betti, GradedComplex};
use crate::error::Result;
use crate::logforms::check_degree_bound;
use crate::weights::{critical_grade, WeightVector};

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub weights: Option<WeightVector>,
    pub q_window: RangeInclusive<i64>,
    pub seed: u64,
    /// random forms per randomized check
    pub samples: usize,
    pub max_degree: Option<i64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            weights: None,
            q_window: -2..=2,
            seed: 0,
            samples: 16,
            max_degree: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &str, failures: Vec<String>, passed: usize) -> Self {
        CheckOutcome {
            name: name.to_string(),
            ok: failures.is_empty(),
            detail: if failures.is_empty() {
                format!("{passed} case{}", if passed == 1 { "" } else { "s" })
            } else {
                failures.join("; ")
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

/// Random form of degree `j` with homogeneous coefficients of degree `m`.
pub fn random_form(rng: &mut StdRng, n: usize, j: usize, m: u32) -> PolyForm {
    let monos = monomials_of_degree(n, m);
    let mut out = PolyForm::zero(n, j);
    for index in subsets(n, j) {
        let terms = monos.iter().filter_map(|mono| {
            let c: i64 = rng.gen_range(-3..=3);
            (c != 0 && rng.gen_bool(0.6)).then(|| (mono.clone(), Rational::from_integer(c.into())))
        });
        let p = Polynomial::from_terms(n, terms);
        out = out.add(&PolyForm::term(index, p));
    }
    out
}

fn form_identities(n: usize, seed: u64, samples: usize) -> Vec<CheckOutcome> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut d2 = Vec::new();
    let mut i2 = Vec::new();
    let mut leibniz = Vec::new();
    for s in 0..samples {
        let p = rng.gen_range(0..=n);
        let r = rng.gen_range(0..=n - p);
        let (ma, mb) = (rng.gen_range(0..=3), rng.gen_range(0..=3));
        let a = random_form(&mut rng, n, p, ma);
        let b = random_form(&mut rng, n, r, mb);
        if !a.d().d().is_zero() {
            d2.push(format!("sample {s}"));
        }
        if !a.contract_euler().contract_euler().is_zero() {
            i2.push(format!("sample {s}"));
        }
        let lhs = a.wedge(&b).d();
        let mut rhs2 = a.wedge(&b.d());
        if p % 2 == 1 {
            rhs2 = rhs2.scale(&Rational::from_integer((-1).into()));
        }
        if lhs != a.d().wedge(&b).add(&rhs2) {
            leibniz.push(format!("sample {s}"));
        }
    }
    vec![
        CheckOutcome::new("d∘d = 0 on random forms", d2, samples),
        CheckOutcome::new("ι∘ι = 0 on random forms", i2, samples),
        CheckOutcome::new("Leibniz rule for d", leibniz, samples),
    ]
}

/// Runs the full suite. Returns `Err` only on input errors or when an
/// internal computation breaks; failed checks are reported, not raised.
pub fn run(arr: &Arrangement, lattice: &Lattice, opts: &VerifyOptions) -> Result<VerifyReport> {
    let n = arr.nvars();
    let zero = WeightVector::zero(arr.len());
    let weights = match &opts.weights {
        Some(w) => w.clone().for_arrangement(arr)?,
        None => zero.clone(),
    };
    let critical = critical_grade(&weights);
    let mut grades: Vec<i64> = opts.q_window.clone().collect();
    if let Some(c) = critical {
        if !grades.contains(&c) {
            grades.push(c);
            grades.sort_unstable();
        }
    }
    for &q in &grades {
        check_degree_bound(arr, q, opts.max_degree)?;
    }

    let mut checks = form_identities(n, opts.seed, opts.samples);

    let mut nabla_sq = Vec::new();
    let mut iota_sq = Vec::new();
    let mut lie = Vec::new();
    let mut acyclic = Vec::new();
    let mut euler = Vec::new();
    let mut cases = 0;
    for &q in &grades {
        let complex = GradedComplex::new(arr, q)?;
        cases += 1;
        let dims = complex.dims();
        if alternating_sum(&dims) != 0 {
            euler.push(format!("q={q}: dims {dims:?}"));
        }
        for w in [&zero, &weights] {
            let mats = complex.nabla_matrices(w)?;
            if mats.windows(2).any(|p| !p[1].mul(&p[0]).is_zero()) {
                nabla_sq.push(format!("q={q}, λ={:?}", w.to_strings()));
            }
            for j in 0..=n {
                if !lie_identity_check(&complex, w, j)?.ok {
                    lie.push(format!("q={q}, j={j}, λ={:?}", w.to_strings()));
                }
            }
        }
        let cmats = complex.contraction_matrices()?;
        if cmats.windows(2).any(|p| !p[0].mul(&p[1]).is_zero()) {
            iota_sq.push(format!("q={q}"));
        }
        if Some(q) != critical {
            let report = crate::derham::complex_report(&complex, &weights, true)?;
            if report.betti.iter().any(|&b| b != 0) {
                acyclic.push(format!("q={q}: betti {:?}", report.betti));
            }
        }
    }
    checks.push(CheckOutcome::new(
        "∇∘∇ = 0 as matrices",
        nabla_sq,
        2 * cases,
    ));
    checks.push(CheckOutcome::new("ι∘ι = 0 as matrices", iota_sq, cases));
    checks.push(CheckOutcome::new(
        "∇ι + ι∇ = (q + Σλ)·Id",
        lie,
        2 * cases * (n + 1),
    ));
    checks.push(CheckOutcome::new(
        "acyclic off the critical grade",
        acyclic,
        cases,
    ));
    checks.push(CheckOutcome::new(
        "Euler alternating sum of dims",
        euler,
        cases,
    ));

    let os = mobius_poincare(arr, lattice);
    let untwisted = twisted_betti(arr, lattice, &zero)?;
    let expected: Vec<usize> = os.betti.iter().map(|&b| b as usize).collect();
    let oracle = if untwisted.betti == expected {
        Vec::new()
    } else {
        vec![format!(
            "log complex {:?}, Möbius {:?}",
            untwisted.betti, expected
        )]
    };
    checks.push(CheckOutcome::new(
        "λ = 0 matches Orlik–Solomon Betti",
        oracle,
        1,
    ));

    if opts.weights.is_some() {
        let t = twisted_betti(arr, lattice, &weights)?;
        let chi = alternating_sum(&t.betti);
        let fails = if chi == 0 {
            Vec::new()
        } else {
            vec![format!("χ = {chi}")]
        };
        checks.push(CheckOutcome::new(
            "Euler characteristic of twisted Betti",
            fails,
            1,
        ));
    }
    Ok(VerifyReport { checks })
}
