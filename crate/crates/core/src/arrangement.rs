//! Central arrangements, their intersection lattice, Möbius function and
//! dense edges.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::{LinearForm, Rational};
use crate::error::{Error, Result};
use crate::linalg::{solve, RatMatrix, SparseEchelon};

/// A central, reduced hyperplane arrangement.
///
/// Forms are canonical: integer coefficients with gcd 1 and a positive
/// first nonzero coefficient. No two forms are proportional.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    variables: Vec<String>,
    forms: Vec<LinearForm>,
    labels: Vec<String>,
}

fn canonicalize(coeffs: &[Rational]) -> Option<Vec<Rational>> {
    if coeffs.iter().all(Zero::is_zero) {
        return None;
    }
    let lcm = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    let sign = ints
        .iter()
        .find(|v| !v.is_zero())
        .map_or(false, |v| v.is_negative());
    Some(
        ints.into_iter()
            .map(|v| {
                let v = v / &g;
                Rational::from_integer(if sign { -v } else { v })
            })
            .collect(),
    )
}

/// Renders `c_1 x_1 + ...` with the given variable names, e.g. `x - y`.
pub fn format_linear(coeffs: &[Rational], variables: &[String]) -> String {
    let mut s = String::new();
    for (c, name) in coeffs.iter().zip(variables) {
        if c.is_zero() {
            continue;
        }
        let abs = c.abs();
        if s.is_empty() {
            if c.is_negative() {
                s.push('-');
            }
        } else {
            s.push_str(if c.is_negative() { " - " } else { " + " });
        }
        if !abs.is_one() {
            let _ = write!(s, "{abs}*");
        }
        s.push_str(name);
    }
    s
}

impl Arrangement {
    /// Validates and canonicalizes raw hyperplane coefficient vectors.
    ///
    /// With no explicit variable names, `x1..xn` are used; with no labels,
    /// each hyperplane is labelled by its canonical equation.
    pub fn new(
        variables: Option<Vec<String>>,
        hyperplanes: Vec<Vec<Rational>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let nvars = match (&variables, hyperplanes.first()) {
            (Some(v), _) => v.len(),
            (None, Some(h)) => h.len(),
            (None, None) => return Err(Error::EmptyArrangement),
        };
        if hyperplanes.is_empty() {
            return Err(Error::EmptyArrangement);
        }
        if nvars == 0 {
            return Err(Error::Input(
                "arrangement needs at least one variable".into(),
            ));
        }
        let variables = variables.unwrap_or_else(|| (1..=nvars).map(|i| format!("x{i}")).collect());
        let mut seen: HashMap<Vec<Rational>, usize> = HashMap::new();
        let mut forms = Vec::with_capacity(hyperplanes.len());
        for (i, h) in hyperplanes.iter().enumerate() {
            if h.len() != nvars {
                return Err(Error::WrongLength {
                    index: i + 1,
                    found: h.len(),
                    expected: nvars,
                });
            }
            let c = canonicalize(h).ok_or(Error::ZeroForm(i + 1))?;
            if let Some(&j) = seen.get(&c) {
                return Err(Error::NotReduced(j + 1, i + 1));
            }
            seen.insert(c.clone(), i);
            forms.push(LinearForm::new(c).expect("canonical form is nonzero"));
        }
        let labels = match labels {
            Some(l) if l.len() == forms.len() => l,
            Some(l) => {
                return Err(Error::Input(format!(
                    "{} labels for {} hyperplanes",
                    l.len(),
                    forms.len()
                )))
            }
            None => forms
                .iter()
                .map(|f| format_linear(f.coeffs(), &variables))
                .collect(),
        };
        Ok(Arrangement {
            variables,
            forms,
            labels,
        })
    }

    /// Shorthand for integer coefficient rows with default names.
    pub fn from_integers(rows: &[&[i64]]) -> Result<Self> {
        Self::new(
            None,
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&v| Rational::from_integer(v.into()))
                        .collect()
                })
                .collect(),
            None,
        )
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    /// Number of hyperplanes, which is also `deg f`.
    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn forms(&self) -> &[LinearForm] {
        &self.forms
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Rank of the normals of the given hyperplanes.
    pub fn rank_of(&self, hset: &[usize]) -> usize {
        self.echelon_of(hset).rank()
    }

    pub fn rank(&self) -> usize {
        self.rank_of(&(0..self.len()).collect::<Vec<_>>())
    }

    pub fn is_essential(&self) -> bool {
        self.rank() == self.nvars()
    }

    fn echelon_of(&self, hset: &[usize]) -> SparseEchelon {
        let mut e = SparseEchelon::new(self.nvars());
        for &k in hset {
            e.insert(self.normal_row(k));
        }
        e
    }

    fn normal_row(&self, k: usize) -> Vec<(usize, Rational)> {
        self.forms[k].coeffs().iter().cloned().enumerate().collect()
    }

    /// All hyperplanes whose normals lie in the span of those in `hset`.
    pub fn closure(&self, hset: &[usize]) -> Vec<usize> {
        let base = self.echelon_of(hset);
        (0..self.len())
            .filter(|&k| hset.contains(&k) || !base.clone().insert(self.normal_row(k)))
            .collect()
    }

    /// Same arrangement with hyperplanes reordered: hyperplane `i` of the
    /// result is hyperplane `order[i]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Arrangement {
        assert_eq!(order.len(), self.len());
        Arrangement {
            variables: self.variables.clone(),
            forms: order.iter().map(|&i| self.forms[i].clone()).collect(),
            labels: order.iter().map(|&i| self.labels[i].clone()).collect(),
        }
    }
}

/// An edge of the arrangement, keyed by the set of hyperplanes containing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flat {
    pub id: usize,
    /// Zero-based, sorted hyperplane indices.
    pub hset: Vec<usize>,
    pub rank: usize,
    pub mobius: i64,
    pub dense: bool,
}

/// The intersection lattice, flats sorted by `(rank, hset)`.
#[derive(Clone, Debug)]
pub struct Lattice {
    flats: Vec<Flat>,
    index: HashMap<Vec<usize>, usize>,
}

impl Lattice {
    pub fn flats(&self) -> &[Flat] {
        &self.flats
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn get(&self, id: usize) -> &Flat {
        &self.flats[id]
    }

    pub fn find(&self, hset: &[usize]) -> Option<&Flat> {
        self.index.get(hset).map(|&i| &self.flats[i])
    }

    /// The maximal flat (all hyperplanes); the origin when the arrangement
    /// is essential.
    pub fn top(&self) -> &Flat {
        self.flats.last().expect("lattice is never empty")
    }

    /// `G ≤ F` in the lattice order (containment of hyperplane sets).
    pub fn le(&self, g: usize, f: usize) -> bool {
        is_subset(&self.flats[g].hset, &self.flats[f].hset)
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let mut it = b.iter();
    a.iter().all(|x| it.any(|y| y == x))
}

/// Enumerates the intersection lattice by breadth-first closure and fills
/// in Möbius values and dense flags.
pub fn flats(arr: &Arrangement) -> Lattice {
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut queue = VecDeque::new();
    let bottom = arr.closure(&[]);
    seen.insert(bottom.clone());
    queue.push_back(bottom);
    while let Some(f) = queue.pop_front() {
        for h in 0..arr.len() {
            if f.binary_search(&h).is_ok() {
                continue;
            }
            let mut s = f.clone();
            s.push(h);
            s.sort_unstable();
            let g = arr.closure(&s);
            if seen.insert(g.clone()) {
                queue.push_back(g);
            }
        }
    }
    let mut flats: Vec<Flat> = seen
        .into_iter()
        .map(|hset| Flat {
            id: 0,
            rank: arr.rank_of(&hset),
            hset,
            mobius: 0,
            dense: false,
        })
        .collect();
    flats.sort_by(|a, b| (a.rank, &a.hset).cmp(&(b.rank, &b.hset)));
    let mut index = HashMap::new();
    for (i, f) in flats.iter_mut().enumerate() {
        f.id = i;
        index.insert(f.hset.clone(), i);
    }
    let mut lattice = Lattice { flats, index };
    let mobius = mobius_values(&lattice);
    for (f, mu) in lattice.flats.iter_mut().zip(mobius) {
        f.mobius = mu;
    }
    dense_flags(arr, &mut lattice);
    lattice
}

fn mobius_values(lattice: &Lattice) -> Vec<i64> {
    let mut mu = vec![0i64; lattice.len()];
    for f in 0..lattice.len() {
        if f == 0 {
            mu[f] = 1;
            continue;
        }
        let s: i64 = (0..f)
            .filter(|&g| lattice.flats[g].rank < lattice.flats[f].rank && lattice.le(g, f))
            .map(|g| mu[g])
            .sum();
        mu[f] = -s;
    }
    mu
}

/// Möbius values, Poincaré polynomial and the Betti numbers of the
/// complement read off from it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MobiusData {
    pub mobius: Vec<i64>,
    /// Coefficients of `π(A, t)`, lowest degree first, length `n + 1`.
    pub poincare: Vec<i64>,
    pub betti: Vec<u64>,
}

impl MobiusData {
    pub fn poincare_at(&self, t: i64) -> i64 {
        self.poincare.iter().rev().fold(0, |acc, c| acc * t + c)
    }
}

/// `π(A, t) = Σ_F μ(F) (-t)^rank(F)`.
pub fn mobius_poincare(arr: &Arrangement, lattice: &Lattice) -> MobiusData {
    let mobius = mobius_values(lattice);
    let mut poincare = vec![0i64; arr.nvars() + 1];
    for (f, mu) in lattice.flats.iter().zip(&mobius) {
        let sign = if f.rank % 2 == 0 { 1 } else { -1 };
        poincare[f.rank] += sign * mu;
    }
    let betti = poincare
        .iter()
        .map(|&c| u64::try_from(c).expect("Poincaré coefficients are non-negative"))
        .collect();
    MobiusData {
        mobius,
        poincare,
        betti,
    }
}

/// Connectivity of the vector matroid on the given forms, via fundamental
/// circuits with respect to a greedy basis.
pub fn matroid_connected(forms: &[&LinearForm]) -> bool {
    if forms.len() <= 1 {
        return true;
    }
    let n = forms[0].nvars();
    let mut echelon = SparseEchelon::new(n);
    let mut basis = Vec::new();
    let mut others = Vec::new();
    for (i, f) in forms.iter().enumerate() {
        if echelon.insert(f.coeffs().iter().cloned().enumerate()) {
            basis.push(i);
        } else {
            others.push(i);
        }
    }
    let mut parent: Vec<usize> = (0..forms.len()).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let columns: Vec<Vec<Rational>> = basis.iter().map(|&b| forms[b].coeffs().to_vec()).collect();
    let bmat = RatMatrix::from_columns(n, columns);
    for &e in &others {
        let coeffs =
            solve(&bmat, forms[e].coeffs()).expect("element lies in the span of the basis");
        for (pos, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let (a, b) = (root(&mut parent, e), root(&mut parent, basis[pos]));
                parent[a] = b;
            }
        }
    }
    let r0 = root(&mut parent, 0);
    (1..forms.len()).all(|i| root(&mut parent, i) == r0)
}

/// Marks each flat of positive rank whose localization is indecomposable.
pub fn dense_flags(arr: &Arrangement, lattice: &mut Lattice) {
    for f in &mut lattice.flats {
        f.dense = f.rank >= 1 && {
            let forms: Vec<&LinearForm> = f.hset.iter().map(|&k| &arr.forms[k]).collect();
            matroid_connected(&forms)
        };
    }
}
