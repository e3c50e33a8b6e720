//! The arithmetic matroid of a list of characters.
//!
//! The ground set is the column index set of the character matrix, ordered
//! by column position. Rank and multiplicity are computed on demand and
//! memoized per subset.

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exact_linalg::{content, kernel_lattice, multiplicity, IntMatrix};
use crate::layers::ToricArrangement;
use crate::subset::{Subset, MAX_GROUND};
use crate::Error;

/// The `d x n` integer matrix whose columns are the characters `χ_0..χ_{n-1}`.
///
/// Columns are nonzero and primitive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterMatrix(IntMatrix);

impl CharacterMatrix {
    pub fn new(m: IntMatrix) -> Result<Self, Error> {
        if m.cols() > MAX_GROUND {
            return Err(Error::TooManyCharacters(m.cols()));
        }
        for j in 0..m.cols() {
            let g = content(&m.column(j));
            if g.is_zero() {
                return Err(Error::ZeroCharacter(j));
            }
            if !g.is_one() {
                return Err(Error::NotPrimitive(j));
            }
        }
        Ok(CharacterMatrix(m))
    }

    /// Convenience constructor from the list of characters.
    pub fn from_characters(dim: usize, chars: &[&[i64]]) -> Result<Self, Error> {
        let cols: Vec<Vec<BigInt>> = chars
            .iter()
            .map(|c| {
                if c.len() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, got: c.len() });
                }
                Ok(c.iter().map(|&x| BigInt::from(x)).collect())
            })
            .collect::<Result<_, _>>()?;
        Self::new(IntMatrix::from_columns(dim, &cols))
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn len(&self) -> usize {
        self.0.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.0.cols() == 0
    }

    pub fn character(&self, i: usize) -> Vec<BigInt> {
        self.0.column(i)
    }

    /// Column submatrix `[A]` in the order of the ground set.
    pub fn submatrix(&self, a: Subset) -> IntMatrix {
        self.0.select_columns(&a.elements())
    }
}

/// A circuit together with its primitive integer dependency `Σ n_i χ_i = 0`.
///
/// The sign is normalized so that the coefficient of `min(C)` is positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircuitDependency {
    pub circuit: Subset,
    /// Coefficient `n_i` for every ground-set element; zero outside the circuit.
    pub coefficients: Vec<BigInt>,
}

impl CircuitDependency {
    pub fn coefficient(&self, i: usize) -> &BigInt {
        &self.coefficients[i]
    }

    /// `c_i = sgn(n_i)` for `i` in the circuit.
    pub fn sign(&self, i: usize) -> i32 {
        match self.coefficients[i].sign() {
            num_bigint::Sign::Plus => 1,
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
        }
    }

    /// `c_B = ∏_{i∈B} c_i`.
    pub fn sign_product(&self, b: Subset) -> i32 {
        b.iter().map(|i| self.sign(i)).product()
    }
}

/// Matroid of the characters, enriched with the multiplicity function.
pub struct ArithmeticMatroid {
    chars: CharacterMatrix,
    rank_cache: RwLock<HashMap<Subset, usize>>,
    mult_cache: RwLock<HashMap<Subset, BigInt>>,
}

impl Clone for ArithmeticMatroid {
    fn clone(&self) -> Self {
        ArithmeticMatroid::new(self.chars.clone())
    }
}

impl std::fmt::Debug for ArithmeticMatroid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ArithmeticMatroid").field("chars", &self.chars).finish()
    }
}

impl ArithmeticMatroid {
    pub fn new(chars: CharacterMatrix) -> Self {
        ArithmeticMatroid {
            chars,
            rank_cache: RwLock::new(HashMap::new()),
            mult_cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn characters(&self) -> &CharacterMatrix {
        &self.chars
    }

    pub fn ground_size(&self) -> usize {
        self.chars.len()
    }

    pub fn ground(&self) -> Subset {
        Subset::full(self.ground_size())
    }

    pub fn dim(&self) -> usize {
        self.chars.dim()
    }

    fn check(&self, a: Subset) -> Result<(), Error> {
        if a.is_subset_of(self.ground()) {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange(a, self.ground_size()))
        }
    }

    /// Rational rank of the columns indexed by `a`.
    pub fn rank(&self, a: Subset) -> Result<usize, Error> {
        self.check(a)?;
        Ok(self.rank_unchecked(a))
    }

    pub(crate) fn rank_unchecked(&self, a: Subset) -> usize {
        if let Some(&r) = self.rank_cache.read().unwrap().get(&a) {
            return r;
        }
        let r = self.chars.submatrix(a).rank();
        self.rank_cache.write().unwrap().insert(a, r);
        r
    }

    pub fn is_independent(&self, a: Subset) -> bool {
        self.rank_unchecked(a) == a.len()
    }

    /// `m(A)`: product of the elementary divisors of `[A]`.
    pub fn multiplicity(&self, a: Subset) -> Result<BigInt, Error> {
        self.check(a)?;
        Ok(self.multiplicity_unchecked(a))
    }

    pub(crate) fn multiplicity_unchecked(&self, a: Subset) -> BigInt {
        if let Some(m) = self.mult_cache.read().unwrap().get(&a) {
            return m.clone();
        }
        let m = multiplicity(&self.chars.submatrix(a));
        self.mult_cache.write().unwrap().insert(a, m.clone());
        m
    }

    /// Whether `m ≡ 1`.
    pub fn is_unimodular(&self) -> bool {
        self.ground().subsets().all(|a| self.multiplicity_unchecked(a).is_one())
    }

    /// All circuits of the matroid restricted to `within`, each inclusion
    /// minimal dependent, listed lexicographically.
    pub fn circuits_within(&self, within: Subset) -> Vec<Subset> {
        let mut found: Vec<Subset> = Vec::new();
        for k in 1..=within.len() {
            for s in within.subsets_of_size(k) {
                if found.iter().any(|c| c.is_subset_of(s)) {
                    continue;
                }
                if !self.is_independent(s) {
                    found.push(s);
                }
            }
        }
        found.sort();
        found
    }

    pub fn circuits(&self) -> Vec<Subset> {
        self.circuits_within(self.ground())
    }

    pub fn is_circuit(&self, c: Subset) -> bool {
        !c.is_empty() && !self.is_independent(c) && c.iter().all(|i| self.is_independent(c.remove(i)))
    }

    /// The primitive integer dependency supported on the circuit `c`.
    pub fn circuit_dependency(&self, c: Subset) -> Result<CircuitDependency, Error> {
        self.check(c)?;
        if !self.is_circuit(c) {
            return Err(Error::NotACircuit(c));
        }
        let elems = c.elements();
        let kernel = kernel_lattice(&self.chars.submatrix(c));
        debug_assert_eq!(kernel.cols(), 1);
        let mut v = kernel.column(0);
        if v[0].is_negative() {
            v.iter_mut().for_each(|x| *x = -&*x);
        }
        let mut coefficients = vec![BigInt::zero(); self.ground_size()];
        for (k, &i) in elems.iter().enumerate() {
            coefficients[i] = v[k].clone();
        }
        Ok(CircuitDependency { circuit: c, coefficients })
    }

    /// Broken circuits `C \ min(C)` of the restriction to `within`.
    pub fn broken_circuits_within(&self, within: Subset) -> Vec<Subset> {
        self.circuits_within(within)
            .into_iter()
            .map(|c| c.remove(c.min().expect("circuits are nonempty")))
            .collect()
    }

    /// `k`-subsets of `within` containing no broken circuit of the restriction.
    pub fn nbc_sets_within(&self, within: Subset, k: usize) -> Vec<Subset> {
        let broken = self.broken_circuits_within(within);
        within
            .subsets_of_size(k)
            .into_iter()
            .filter(|s| !broken.iter().any(|b| b.is_subset_of(*s)))
            .collect()
    }

    pub fn nbc_sets(&self, k: usize) -> Vec<Subset> {
        self.nbc_sets_within(self.ground(), k)
    }

    /// Flats of the restriction to `within`, as closed subsets.
    pub fn closure_within(&self, within: Subset, a: Subset) -> Subset {
        let r = self.rank_unchecked(a);
        within.iter().filter(|&i| a.contains(i) || self.rank_unchecked(a.insert(i)) == r).collect()
    }
}

/// Coefficients `[c_0, ..., c_d]` of the Poincaré polynomial of the complement,
/// from the nbc counts of the local arrangements of all layers.
pub fn poincare_polynomial(arr: &ToricArrangement) -> Vec<u64> {
    let d = arr.dim();
    let n = nbc_layer_counts(arr);
    let mut coeffs = vec![0u64; d + 1];
    for (j, &nj) in n.iter().enumerate() {
        // N_j (1+t)^{d-j} t^j
        for (i, b) in binomial_row(d - j).into_iter().enumerate() {
            coeffs[i + j] += nj * b;
        }
    }
    coeffs
}

/// `N_j = Σ_{codim L = j} |nbc_j(A[L])|` for `j = 0..=d`.
pub fn nbc_layer_counts(arr: &ToricArrangement) -> Vec<u64> {
    let d = arr.dim();
    let matroid = arr.matroid();
    let mut n = vec![0u64; d + 1];
    for layer in arr.poset().layers() {
        let j = layer.codim();
        n[j] += matroid.nbc_sets_within(layer.support(), j).len() as u64;
    }
    n
}

/// Evaluates an integer polynomial at `t = -1`.
pub fn eval_at_minus_one(coeffs: &[u64]) -> i128 {
    coeffs
        .iter()
        .enumerate()
        .map(|(i, &c)| if i % 2 == 0 { c as i128 } else { -(c as i128) })
        .sum()
}

pub(crate) fn binomial_row(n: usize) -> Vec<u64> {
    let mut row = vec![1u64];
    for k in 0..n {
        let next = row[k] * (n - k) as u64 / (k as u64 + 1);
        row.push(next);
    }
    row
}

pub(crate) fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        0
    } else {
        binomial_row(n)[k]
    }
}
