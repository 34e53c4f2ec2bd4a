//! Graded pieces of the module of logarithmic forms.
//!
//! A logarithmic `j`-form of grade `q` is written `η = A/f` where `A` is a
//! `j`-form whose coefficients are homogeneous of degree
//! `m = q + d - j` (`x_i` and `dx_i` have weight one, `1/f` weight `-d`).
//! Since the hyperplanes are pairwise coprime, `η` is logarithmic exactly
//! when `dℓ_k ∧ A ≡ 0 mod ℓ_k` for every hyperplane `ℓ_k`. For fixed
//! `(j, q)` these congruences are linear in the coefficients of `A`, so the
//! graded piece is the kernel of a finite rational matrix.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::algebra::{
    merge_sign, monomials_of_degree, subsets, LinearReducer, Monomial, PolyForm, Polynomial,
    Rational,
};
use crate::arrangement::Arrangement;
use crate::error::{Error, Result};
use crate::linalg::{KernelVector, SparseEchelon};

/// An explicit basis of `Ω^j(log A)_q`, stored through the numerators `A`.
#[derive(Clone, Debug)]
pub struct GradedBasis {
    nvars: usize,
    j: usize,
    q: i64,
    numerator_degree: Option<u32>,
    index: Vec<(Vec<usize>, Monomial)>,
    lookup: HashMap<(Vec<usize>, Monomial), usize>,
    vectors: Vec<KernelVector>,
    elements: Vec<PolyForm>,
}

impl GradedBasis {
    fn empty(nvars: usize, j: usize, q: i64) -> Self {
        GradedBasis {
            nvars,
            j,
            q,
            numerator_degree: None,
            index: Vec::new(),
            lookup: HashMap::new(),
            vectors: Vec::new(),
            elements: Vec::new(),
        }
    }

    pub fn form_degree(&self) -> usize {
        self.j
    }

    pub fn grade(&self) -> i64 {
        self.q
    }

    /// `m = q + d - j`, or `None` when it is negative and the piece is zero.
    pub fn numerator_degree(&self) -> Option<u32> {
        self.numerator_degree
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    /// Coordinates of the ambient space: pairs `(I, monomial)` standing for
    /// `x^monomial dx_I`, subsets in lexicographic order, monomials in
    /// descending graded-lex order.
    pub fn monomial_index(&self) -> &[(Vec<usize>, Monomial)] {
        &self.index
    }

    /// Basis vectors over [`Self::monomial_index`], integral with gcd 1.
    pub fn basis_vectors(&self) -> Vec<Vec<BigInt>> {
        self.vectors
            .iter()
            .map(|v| v.to_dense(self.index.len()))
            .collect()
    }

    /// Numerators `A` of the basis elements `A/f`.
    pub fn elements(&self) -> &[PolyForm] {
        &self.elements
    }

    /// Expands a numerator in the monomial index.
    pub fn to_vector(&self, form: &PolyForm) -> Result<Vec<Rational>> {
        let mut v = vec![Rational::zero(); self.index.len()];
        if form.is_zero() {
            return Ok(v);
        }
        if form.degree() != self.j || form.nvars() != self.nvars {
            return Err(Error::Inconsistent(format!(
                "a {}-form cannot lie in Ω^{}(log)",
                form.degree(),
                self.j
            )));
        }
        for (idx, p) in form.coeffs() {
            for (m, c) in p.terms() {
                let key = (idx.clone(), m.clone());
                let &pos = self.lookup.get(&key).ok_or_else(|| {
                    Error::Inconsistent(format!(
                        "term {m} of degree {} does not have grade {}",
                        m.degree(),
                        self.q
                    ))
                })?;
                v[pos] = c.clone();
            }
        }
        Ok(v)
    }

    /// Coordinates of the logarithmic form `form/f` in this basis.
    ///
    /// Fails with [`Error::Inconsistent`] when `form/f` is not a
    /// logarithmic form of this grade. Each basis vector owns a coordinate
    /// where every other basis vector vanishes, so membership plus those
    /// coordinates determine the expansion.
    pub fn coordinates(&self, arr: &Arrangement, form: &PolyForm) -> Result<Vec<Rational>> {
        let v = self.to_vector(form)?;
        if !is_log_numerator(arr, form) {
            return Err(Error::Inconsistent(format!(
                "form is not logarithmic at grade {}: {form}",
                self.q
            )));
        }
        Ok(self
            .vectors
            .iter()
            .map(|b| &v[b.free_column] / Rational::from_integer(b.free_value.clone()))
            .collect())
    }

    /// `Σ c_i A_i`.
    pub fn combine(&self, coords: &[Rational]) -> PolyForm {
        assert_eq!(coords.len(), self.dim(), "coordinate count");
        let mut out = PolyForm::zero(self.nvars, self.j);
        for (c, e) in coords.iter().zip(&self.elements) {
            if !c.is_zero() {
                out = out.add(&e.scale(c));
            }
        }
        out
    }
}

/// Whether `form/f` is logarithmic: `dℓ_k ∧ form ≡ 0 mod ℓ_k` for all `k`.
pub fn is_log_numerator(arr: &Arrangement, form: &PolyForm) -> bool {
    arr.forms().iter().all(|l| {
        let reducer = LinearReducer::with_max_degree(l, form_max_degree(form));
        PolyForm::differential_of(l)
            .wedge(form)
            .coeffs()
            .all(|(_, p)| reducer.reduce(p).is_zero())
    })
}

fn form_max_degree(form: &PolyForm) -> u32 {
    form.coeffs()
        .filter_map(|(_, p)| p.degree())
        .max()
        .unwrap_or(0)
}

/// Basis of `Ω^j(log A)_q`.
pub fn graded_basis(arr: &Arrangement, j: usize, q: i64) -> Result<GradedBasis> {
    let n = arr.nvars();
    if j > n {
        return Err(Error::FormDegree { j, n });
    }
    let m = q + arr.len() as i64 - j as i64;
    if m < 0 {
        return Ok(GradedBasis::empty(n, j, q));
    }
    let m = u32::try_from(m).map_err(|_| Error::DegreeBound {
        degree: m,
        bound: u32::MAX as i64,
    })?;
    let index_sets = subsets(n, j);
    let monos = monomials_of_degree(n, m);
    let index: Vec<(Vec<usize>, Monomial)> = index_sets
        .iter()
        .flat_map(|i| monos.iter().map(move |a| (i.clone(), a.clone())))
        .collect();
    let cols = index.len();

    let mut echelon = SparseEchelon::new(cols);
    if j < n {
        for l in arr.forms() {
            for row in constraint_rows(l, &index_sets, &monos) {
                echelon.insert(row);
            }
        }
    }
    let vectors = echelon.kernel();
    let elements = vectors
        .iter()
        .map(|v| {
            let mut form = PolyForm::zero(n, j);
            for (c, x) in &v.entries {
                let (idx, mono) = &index[*c];
                form.add_coeff(
                    idx.clone(),
                    Polynomial::monomial(mono.clone(), Rational::from_integer(x.clone())),
                );
            }
            form
        })
        .collect();
    let lookup = index
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, k)| (k, i))
        .collect();
    Ok(GradedBasis {
        nvars: n,
        j,
        q,
        numerator_degree: Some(m),
        index,
        lookup,
        vectors,
        elements,
    })
}

/// Rows expressing `dℓ ∧ A ≡ 0 mod ℓ` in the coefficients of `A`: one row
/// per `(J, β)`, the coefficient of `x^β dx_J` after reducing mod `ℓ`.
fn constraint_rows(
    l: &crate::algebra::LinearForm,
    index_sets: &[Vec<usize>],
    monos: &[Monomial],
) -> Vec<Vec<(usize, Rational)>> {
    let max_deg = monos.first().map_or(0, Monomial::degree);
    let reducer = LinearReducer::with_max_degree(l, max_deg);
    let one = Rational::from_integer(1.into());
    let reduced: Vec<Polynomial> = monos
        .iter()
        .map(|a| reducer.reduce_monomial(a, &one))
        .collect();
    let mut row_of: HashMap<(Vec<usize>, Monomial), usize> = HashMap::new();
    let mut rows: Vec<Vec<(usize, Rational)>> = Vec::new();
    for (si, idx) in index_sets.iter().enumerate() {
        for (var, c) in l.coeffs().iter().enumerate() {
            if c.is_zero() || idx.binary_search(&var).is_ok() {
                continue;
            }
            let (target, neg) = merge_sign(&[var], idx).expect("var is not in the index set");
            let c = if neg { -c } else { c.clone() };
            for (ai, red) in reduced.iter().enumerate() {
                let col = si * monos.len() + ai;
                for (beta, coef) in red.terms() {
                    let key = (target.clone(), beta.clone());
                    let r = *row_of.entry(key).or_insert_with(|| {
                        rows.push(Vec::new());
                        rows.len() - 1
                    });
                    rows[r].push((col, &c * coef));
                }
            }
        }
    }
    rows
}

/// Fails when some piece of grade `q` would need numerators above `bound`.
/// The largest numerator degree at grade `q` is `q + d`, reached at `j = 0`.
pub fn check_degree_bound(arr: &Arrangement, q: i64, bound: Option<i64>) -> Result<()> {
    let degree = q + arr.len() as i64;
    match bound {
        Some(bound) if degree > bound => Err(Error::DegreeBound { degree, bound }),
        _ => Ok(()),
    }
}

/// Bases of every `Ω^j(log A)_q`, `j = 0..=n`, computed in parallel.
pub fn graded_bases(arr: &Arrangement, q: i64) -> Result<Vec<GradedBasis>> {
    (0..=arr.nvars())
        .into_par_iter()
        .map(|j| graded_basis(arr, j, q))
        .collect()
}

/// `dim Ω^j(log A)_q` for each `q` in the range.
pub fn hilbert_dims(
    arr: &Arrangement,
    j: usize,
    q_range: std::ops::RangeInclusive<i64>,
) -> Result<Vec<(i64, usize)>> {
    q_range
        .into_par_iter()
        .map(|q| graded_basis(arr, j, q).map(|b| (q, b.dim())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: i64, k: i64) -> usize {
        if k < 0 || n < k {
            return 0;
        }
        (0..k).fold(1i64, |acc, i| acc * (n - i) / (i + 1)) as usize
    }

    /// dim of degree-`m` polynomials in `n` variables
    fn dim_r(n: i64, m: i64) -> usize {
        if m < 0 {
            0
        } else {
            binom(m + n - 1, n - 1)
        }
    }

    #[test]
    fn snc_one_forms() {
        let a = Arrangement::from_integers(&[&[1, 0], &[0, 1]]).unwrap();
        let b = graded_basis(&a, 1, 0).unwrap();
        assert_eq!(b.dim(), 2);
        // numerators of dx/x and dy/y
        let y_dx = PolyForm::term(vec![0], Polynomial::var(2, 1));
        let x_dy = PolyForm::term(vec![1], Polynomial::var(2, 0));
        assert!(b.elements().contains(&y_dx));
        assert!(b.elements().contains(&x_dy));
    }

    #[test]
    fn three_lines_one_forms() {
        let a = Arrangement::from_integers(&[&[1, 0], &[0, 1], &[1, 1]]).unwrap();
        assert_eq!(graded_basis(&a, 1, 0).unwrap().dim(), 3);
    }

    #[test]
    fn zero_forms_are_multiples_of_f() {
        let a = Arrangement::from_integers(&[&[1, 0], &[0, 1], &[1, -1]]).unwrap();
        for q in 0..3 {
            let b = graded_basis(&a, 0, q).unwrap();
            assert_eq!(b.dim(), dim_r(2, q));
            for e in b.elements() {
                let p = e.coeff(&[]).unwrap();
                for l in a.forms() {
                    assert!(crate::algebra::exact_div_linear(p, l).is_ok());
                }
            }
        }
    }

    #[test]
    fn top_forms_are_free() {
        let a =
            Arrangement::from_integers(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]]).unwrap();
        for q in -3..3 {
            let b = graded_basis(&a, 3, q).unwrap();
            assert_eq!(b.dim(), dim_r(3, q + 4 - 3), "q = {q}");
        }
    }

    #[test]
    fn coordinates_reconstruct() {
        let a = Arrangement::from_integers(&[&[1, 0], &[0, 1], &[1, 1]]).unwrap();
        let b = graded_basis(&a, 1, 1).unwrap();
        for (i, e) in b.elements().iter().enumerate() {
            let c = b.coordinates(&a, e).unwrap();
            for (k, ck) in c.iter().enumerate() {
                assert_eq!(ck.is_zero(), k != i);
            }
            assert_eq!(&b.combine(&c), e);
        }
    }

    #[test]
    fn non_log_form_is_rejected() {
        let a = Arrangement::from_integers(&[&[1, 0], &[0, 1]]).unwrap();
        let b = graded_basis(&a, 1, 0).unwrap();
        // dx/(xy): numerator dx, degree 0, but here m = 1, so use x dx
        let bad = PolyForm::term(vec![0], Polynomial::var(2, 0));
        assert!(matches!(
            b.coordinates(&a, &bad),
            Err(Error::Inconsistent(_))
        ));
    }

    #[test]
    fn form_degree_out_of_range() {
        let a = Arrangement::from_integers(&[&[1, 0]]).unwrap();
        assert!(matches!(
            graded_basis(&a, 3, 0),
            Err(Error::FormDegree { j: 3, n: 2 })
        ));
    }
}
