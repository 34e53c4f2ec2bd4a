use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::{LinearForm, Polynomial, Rational};

/// All strictly increasing `k`-subsets of `0..n`, in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// `dx_I ∧ dx_J = sign * dx_{I ∪ J}`; `None` when `I` and `J` overlap.
pub fn merge_sign(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut merged = Vec::with_capacity(a.len() + b.len());
    let mut inversions = 0usize;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Equal => return None,
            std::cmp::Ordering::Less => {
                merged.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                // b[j] jumps over the remaining elements of a
                inversions += a.len() - i;
                merged.push(b[j]);
                j += 1;
            }
        }
    }
    merged.extend_from_slice(&a[i..]);
    merged.extend_from_slice(&b[j..]);
    Some((merged, inversions % 2 == 1))
}

/// A differential `j`-form `Σ_I a_I dx_I` with polynomial coefficients.
///
/// Index sets are strictly increasing, zero-based, and zero coefficients
/// are never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyForm {
    nvars: usize,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, Polynomial>,
}

impl PolyForm {
    pub fn zero(nvars: usize, degree: usize) -> Self {
        PolyForm {
            nvars,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_poly(p: Polynomial) -> Self {
        let mut f = PolyForm::zero(p.nvars(), 0);
        f.add_coeff(Vec::new(), p);
        f
    }

    /// `p dx_I`. `index` must be strictly increasing.
    pub fn term(index: Vec<usize>, p: Polynomial) -> Self {
        assert!(
            index.windows(2).all(|w| w[0] < w[1]),
            "index set must be increasing"
        );
        assert!(index.iter().all(|&i| i < p.nvars()), "index out of range");
        let mut f = PolyForm::zero(p.nvars(), index.len());
        f.add_coeff(index, p);
        f
    }

    pub fn dx(nvars: usize, i: usize) -> Self {
        Self::term(vec![i], Polynomial::one(nvars))
    }

    /// `dℓ = Σ c_i dx_i`.
    pub fn differential_of(l: &LinearForm) -> Self {
        let n = l.nvars();
        let mut f = PolyForm::zero(n, 1);
        for (i, c) in l.coeffs().iter().enumerate() {
            f.add_coeff(vec![i], Polynomial::constant(n, c.clone()));
        }
        f
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&Vec<usize>, &Polynomial)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, index: &[usize]) -> Option<&Polynomial> {
        self.coeffs.get(index)
    }

    pub(crate) fn add_coeff(&mut self, index: Vec<usize>, p: Polynomial) {
        debug_assert_eq!(index.len(), self.degree);
        if p.is_zero() {
            return;
        }
        match self.coeffs.entry(index) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(p);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = &*o.get() + &p;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_compatible(&self, other: &PolyForm) {
        assert_eq!(self.nvars, other.nvars, "form arity");
        assert_eq!(self.degree, other.degree, "form degree");
    }

    pub fn add(&self, other: &PolyForm) -> PolyForm {
        self.check_compatible(other);
        let mut out = self.clone();
        for (i, p) in &other.coeffs {
            out.add_coeff(i.clone(), p.clone());
        }
        out
    }

    pub fn sub(&self, other: &PolyForm) -> PolyForm {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> PolyForm {
        if c.is_zero() {
            return PolyForm::zero(self.nvars, self.degree);
        }
        PolyForm {
            nvars: self.nvars,
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .map(|(i, p)| (i.clone(), p.scale(c)))
                .collect(),
        }
    }

    pub fn mul_poly(&self, p: &Polynomial) -> PolyForm {
        let mut out = PolyForm::zero(self.nvars, self.degree);
        for (i, a) in &self.coeffs {
            out.add_coeff(i.clone(), a * p);
        }
        out
    }

    /// Applies `f` to every coefficient, keeping the index sets.
    pub fn try_map_coeffs<E>(
        &self,
        mut f: impl FnMut(&Polynomial) -> Result<Polynomial, E>,
    ) -> Result<PolyForm, E> {
        let mut out = PolyForm::zero(self.nvars, self.degree);
        for (i, a) in &self.coeffs {
            out.add_coeff(i.clone(), f(a)?);
        }
        Ok(out)
    }

    /// Exterior product. Returns the zero form of degree `j + k` when that
    /// exceeds the number of variables.
    pub fn wedge(&self, other: &PolyForm) -> PolyForm {
        assert_eq!(self.nvars, other.nvars, "form arity");
        let mut out = PolyForm::zero(self.nvars, self.degree + other.degree);
        if self.degree + other.degree > self.nvars {
            return out;
        }
        for (i, a) in &self.coeffs {
            for (j, b) in &other.coeffs {
                if let Some((idx, neg)) = merge_sign(i, j) {
                    let p = a * b;
                    out.add_coeff(idx, if neg { -&p } else { p });
                }
            }
        }
        out
    }

    /// Exterior derivative `d(Σ a_I dx_I) = Σ_I Σ_l ∂_l a_I dx_l ∧ dx_I`.
    pub fn d(&self) -> PolyForm {
        let mut out = PolyForm::zero(self.nvars, self.degree + 1);
        if self.degree >= self.nvars {
            return out;
        }
        for (idx, a) in &self.coeffs {
            for l in 0..self.nvars {
                if idx.binary_search(&l).is_ok() {
                    continue;
                }
                let da = a.derivative(l);
                if da.is_zero() {
                    continue;
                }
                let (merged, neg) = merge_sign(&[l], idx).expect("l is not in the index set");
                out.add_coeff(merged, if neg { -&da } else { da });
            }
        }
        out
    }

    /// Contraction along the Euler field `E = Σ x_i ∂_i`.
    ///
    /// `dx_{i_1} ∧ … ∧ dx_{i_j} ↦ Σ_t (-1)^(t-1) x_{i_t} dx_{I \ i_t}`;
    /// a 0-form contracts to the zero 0-form.
    pub fn contract_euler(&self) -> PolyForm {
        if self.degree == 0 {
            return PolyForm::zero(self.nvars, 0);
        }
        let mut out = PolyForm::zero(self.nvars, self.degree - 1);
        for (idx, a) in &self.coeffs {
            for (t, &i) in idx.iter().enumerate() {
                let mut rest = idx.clone();
                rest.remove(t);
                let p = a * &Polynomial::var(self.nvars, i);
                out.add_coeff(rest, if t % 2 == 1 { -&p } else { p });
            }
        }
        out
    }
}

impl fmt::Display for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (k, (idx, p)) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({p})")?;
            for (t, i) in idx.iter().enumerate() {
                write!(f, "{}dx{}", if t == 0 { " " } else { "^" }, i + 1)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn x(i: usize) -> Polynomial {
        Polynomial::var(2, i)
    }

    #[test]
    fn subsets_are_lex() {
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
        assert!(subsets(2, 3).is_empty());
    }

    #[test]
    fn d_of_x2y_dx() {
        let a = PolyForm::term(vec![0], &(&x(0) * &x(0)) * &x(1));
        let expected = PolyForm::term(vec![0, 1], -&(&x(0) * &x(0)));
        assert_eq!(a.d(), expected);
    }

    #[test]
    fn closed_form() {
        let a = PolyForm::term(vec![0], x(0)).add(&PolyForm::term(vec![1], x(1)));
        assert!(a.d().is_zero());
    }

    #[test]
    fn wedge_signs() {
        let dx = PolyForm::dx(2, 0);
        let dy = PolyForm::dx(2, 1);
        assert_eq!(
            dx.wedge(&dy),
            PolyForm::term(vec![0, 1], Polynomial::one(2))
        );
        assert!(dx.wedge(&dx).is_zero());
        let a = PolyForm::term(vec![1], x(0));
        let b = PolyForm::term(vec![0], x(1));
        assert_eq!(a.wedge(&b), PolyForm::term(vec![0, 1], -&(&x(0) * &x(1))));
    }

    #[test]
    fn wedge_past_top_degree_is_zero() {
        let top = PolyForm::term(vec![0, 1], Polynomial::one(2));
        let w = top.wedge(&PolyForm::dx(2, 0));
        assert!(w.is_zero());
        assert_eq!(w.degree(), 3);
    }

    #[test]
    fn euler_contractions() {
        let top = PolyForm::term(vec![0, 1], Polynomial::one(2));
        let expected = PolyForm::term(vec![1], x(0)).sub(&PolyForm::term(vec![0], x(1)));
        assert_eq!(top.contract_euler(), expected);
        assert_eq!(
            PolyForm::dx(2, 0).contract_euler(),
            PolyForm::from_poly(x(0))
        );
        assert!(PolyForm::from_poly(x(0)).contract_euler().is_zero());
    }

    #[test]
    fn differential_of_linear_form() {
        let l = LinearForm::new(vec![rat(2), rat(-1)]).unwrap();
        let dl = PolyForm::differential_of(&l);
        assert_eq!(dl, PolyForm::from_poly(l.to_polynomial()).d());
    }
}
