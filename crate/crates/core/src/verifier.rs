//! Cross-checks between the presentation and the combinatorics.
//!
//! Three routes to the Betti numbers of the complement are compared:
//! the nbc-based Poincaré polynomial, the graded decomposition over layers
//! (computed here from Möbius functions of the local arrangements), and the
//! graded dimensions of the presented ring itself.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::arithmetic_matroid::{binomial, eval_at_minus_one, nbc_layer_counts, poincare_polynomial, CharacterMatrix};
use crate::exact_linalg::RowEchelon;
use crate::layers::{essentialize, ToricArrangement};
use crate::presentation::{
    corank_one_subsets, presentation_of, rescale_integral, to_integral_basis, GeneratorSymbol, Presentation,
};
use crate::subset::Subset;

/// Graded dimensions indexed by cohomological degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedDims(pub Vec<u64>);

impl GradedDims {
    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    /// Product with the Poincaré polynomial `(1+t)^k` of a `k`-torus.
    pub fn times_torus(&self, k: usize) -> GradedDims {
        let mut v = self.0.clone();
        for _ in 0..k {
            let mut next = vec![0u64; v.len() + 1];
            for (i, &x) in v.iter().enumerate() {
                next[i] += x;
                next[i + 1] += x;
            }
            v = next;
        }
        GradedDims(v)
    }
}

impl fmt::Display for GradedDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Dimensions of the presented ring in each degree, tensored with the torus
/// factor removed by essentialization.
///
/// In degree `k` the ideal is spanned by the products `r · s` of a relation
/// `r` with a generator `s` of complementary degree; the quotient dimension
/// is the number of degree-`k` generators minus the rank of those products.
pub fn quotient_dimensions(p: &Presentation) -> GradedDims {
    let mut dims = Vec::with_capacity(p.dim + 1);
    let relations: Vec<(usize, &crate::presentation::LinComb)> = p
        .relations()
        .filter_map(|r| r.degree().map(|d| (d, r)))
        .collect();
    for k in 0..=p.dim {
        let cols: HashMap<GeneratorSymbol, usize> = p
            .generators_of_degree(k)
            .enumerate()
            .map(|(i, g)| (*g, i))
            .collect();
        let mut echelon = RowEchelon::new();
        for &(e, r) in &relations {
            if e > k {
                continue;
            }
            for s in p.generators_of_degree(k - e) {
                let prod = p.multiply(r, s);
                let row: Vec<(usize, BigRational)> = prod.iter().map(|(g, c)| (cols[g], c.clone())).collect();
                echelon.insert(&row);
            }
        }
        dims.push((cols.len() - echelon.rank()) as u64);
    }
    GradedDims(dims).times_torus(p.deficit)
}

/// Betti numbers from the graded decomposition over layers:
/// `β_j = Σ_{k≤j} Σ_{codim W = k} |μ_{A[W]}(∅, S(W))| · C(d-k, j-k)`.
pub fn graded_decomposition_dims(arr: &ToricArrangement) -> GradedDims {
    let d = arr.dim();
    let mut top_degree = vec![0u64; d + 1];
    for (id, layer) in arr.poset().layers().iter().enumerate() {
        let local = arr.local_arrangement(id);
        let mu = local.mobius_from_bottom();
        top_degree[layer.codim()] += mu[&local.ground()].unsigned_abs();
    }
    let dims = (0..=d)
        .map(|j| (0..=j).map(|k| top_degree[k] * binomial(d - k, j - k)).sum())
        .collect();
    GradedDims(dims)
}

/// Outcome of a single consistency check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub poincare: Vec<u64>,
    pub quotient: GradedDims,
    pub decomposition: GradedDims,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn dims_agree(&self) -> bool {
        self.quotient.0 == self.poincare && self.decomposition.0 == self.poincare
    }

    pub fn passed(&self) -> bool {
        self.dims_agree() && self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "poincare       {}", GradedDims(self.poincare.clone()))?;
        writeln!(f, "quotient       {}", self.quotient)?;
        writeln!(f, "decomposition  {}", self.decomposition)?;
        let status = |ok: bool| if ok { "PASS" } else { "FAIL" };
        writeln!(f, "{}  graded dimensions agree", status(self.dims_agree()))?;
        for c in &self.checks {
            write!(f, "{}  {}", status(c.passed), c.name)?;
            if !c.detail.is_empty() {
                write!(f, ": {}", c.detail)?;
            }
            writeln!(f)?;
        }
        write!(f, "{}", status(self.passed()))
    }
}

/// Runs the three dimension computations and the structural checks.
pub fn verify(chars: &CharacterMatrix) -> VerifyReport {
    let original = ToricArrangement::new(chars.clone());
    let (ess_chars, deficit) = essentialize(chars);
    let arr = ToricArrangement::new(ess_chars);
    let presentation = presentation_of(&arr, deficit);

    let poincare = poincare_polynomial(&original);
    let quotient = quotient_dimensions(&presentation);
    let decomposition = graded_decomposition_dims(&original);

    let checks = vec![
        check_layer_counts(&original),
        check_upper_bounds(&original),
        check_circuit_magnitudes(&original),
        check_covering_degrees(&arr),
        check_preimage_counts(&arr),
        check_euler_characteristic(&original, &poincare),
        check_spanning_set(&arr, deficit, &poincare),
        check_integral_relations(&arr, &presentation),
    ];
    VerifyReport {
        poincare,
        quotient,
        decomposition,
        checks,
    }
}

fn independent_subsets(arr: &ToricArrangement) -> Vec<Subset> {
    let m = arr.matroid();
    m.ground().subsets().filter(|s| s.len() <= m.dim() && m.is_independent(*s)).collect()
}

fn collect_failures(name: &'static str, failures: Vec<String>) -> Check {
    Check {
        name,
        passed: failures.is_empty(),
        detail: failures.into_iter().take(3).collect::<Vec<_>>().join("; "),
    }
}

/// `|layers_of(A)| = m(A)` for every independent `A`.
pub fn check_layer_counts(arr: &ToricArrangement) -> Check {
    let m = arr.matroid();
    let failures = independent_subsets(arr)
        .into_iter()
        .filter_map(|a| {
            let got = arr.layers_of(a).map(<[_]>::len).unwrap_or(0);
            let want = m.multiplicity_unchecked(a);
            (BigInt::from(got) != want).then(|| format!("{a}: {got} layers, m = {want}"))
        })
        .collect();
    collect_failures("layer counts equal multiplicities", failures)
}

/// The minimal upper bounds of the atoms of `A` are exactly the layers of `A`.
pub fn check_upper_bounds(arr: &ToricArrangement) -> Check {
    let failures = independent_subsets(arr)
        .into_iter()
        .filter_map(|a| {
            let mut mub = arr.poset().minimal_upper_bounds(a);
            mub.sort();
            let want = arr.layers_of(a).ok()?;
            (mub != want).then(|| format!("{a}"))
        })
        .collect();
    collect_failures("minimal upper bounds of atoms", failures)
}

/// `n_i · m(C\{j}) = ± n_j · m(C\{i})` on every circuit.
pub fn check_circuit_magnitudes(arr: &ToricArrangement) -> Check {
    let m = arr.matroid();
    let mut failures = Vec::new();
    for c in m.circuits() {
        let Ok(dep) = m.circuit_dependency(c) else {
            failures.push(format!("{c}: no dependency"));
            continue;
        };
        for i in c.iter() {
            for j in c.iter() {
                let lhs = dep.coefficient(i) * m.multiplicity_unchecked(c.remove(j));
                let rhs = dep.coefficient(j) * m.multiplicity_unchecked(c.remove(i));
                if lhs.abs() != rhs.abs() {
                    failures.push(format!("{c}: ({i},{j})"));
                }
            }
        }
    }
    collect_failures("circuit coefficients proportional to multiplicities", failures)
}

/// The covering degree of every corank-one subset does not depend on the
/// circuit element used to compute it.
pub fn check_covering_degrees(arr: &ToricArrangement) -> Check {
    let failures = corank_one_subsets(arr)
        .into_iter()
        .filter_map(|x| arr.covering_data(x).err().map(|e| e.to_string()))
        .collect();
    collect_failures("covering degree independent of circuit element", failures)
}

/// Preimage counts of points on lifted layers are positive integers.
pub fn check_preimage_counts(arr: &ToricArrangement) -> Check {
    let m = arr.matroid();
    let mut failures = Vec::new();
    for x in corank_one_subsets(arr) {
        let Ok(cov) = arr.covering_data(x) else { continue };
        for a in x.subsets().filter(|&a| a != x && m.is_independent(a)) {
            for j in cov.circuit.difference(a).iter() {
                match cov.preimage_count(m, a, j) {
                    Ok(n) if n.is_integer() && n.is_positive() => {}
                    Ok(n) => failures.push(format!("X={x} A={a} j={j}: {n}")),
                    Err(e) => failures.push(e.to_string()),
                }
            }
        }
    }
    collect_failures("preimage counts are positive integers", failures)
}

/// `Poin(-1) = (-1)^d N_d`: only the top nbc count survives at `t = -1`.
pub fn check_euler_characteristic(arr: &ToricArrangement, poincare: &[u64]) -> Check {
    let d = arr.dim();
    let n_top = nbc_layer_counts(arr)[d] as i128;
    let want = if d.is_multiple_of(2) { n_top } else { -n_top };
    let got = eval_at_minus_one(poincare);
    Check {
        name: "Poincaré polynomial at -1 equals signed top nbc count",
        passed: got == want,
        detail: if got == want { String::new() } else { format!("{got} != {want}") },
    }
}

/// Counting the spanning set `e_{W,A;B}` with `A` nbc in `A[W]` and `B`
/// inside a fixed basis complement gives the Betti numbers.
pub fn check_spanning_set(arr: &ToricArrangement, deficit: usize, poincare: &[u64]) -> Check {
    let d = arr.dim();
    let m = arr.matroid();
    let mut counts = vec![0u64; d + 1];
    for (id, layer) in arr.poset().layers().iter().enumerate() {
        let k = layer.codim();
        for a in m.nbc_sets_within(layer.support(), k) {
            if !arr.layers_of(a).map(|ls| ls.contains(&id)).unwrap_or(false) {
                continue;
            }
            let complement = basis_complement(arr, a);
            for b in complement.subsets() {
                counts[k + b.len()] += 1;
            }
        }
    }
    let got = GradedDims(counts).times_torus(deficit);
    Check {
        name: "nbc spanning set has Betti-number size",
        passed: got.0 == poincare,
        detail: if got.0 == poincare { String::new() } else { format!("{got}") },
    }
}

/// Greedy `D(A)` with `A ⊔ D(A)` a basis.
fn basis_complement(arr: &ToricArrangement, a: Subset) -> Subset {
    let m = arr.matroid();
    let mut cur = a;
    for i in m.ground().iter() {
        if !cur.contains(i) && m.is_independent(cur.insert(i)) {
            cur = cur.insert(i);
        }
    }
    cur.difference(a)
}

/// Circuit relations become integral once written in the rescaled integral
/// generators `m(A)/m(A∪B) · η_{W,A,B}`.
pub fn check_integral_relations(arr: &ToricArrangement, p: &Presentation) -> Check {
    let mut failures = Vec::new();
    for rel in &p.circuit_relations {
        match to_integral_basis(arr, &rel.relation) {
            Ok(eta) => {
                let theta = rescale_integral(arr, &eta);
                if !theta.iter().all(|(_, c)| c.is_integer()) {
                    failures.push(format!("X={} L={}", rel.subset, rel.layer));
                }
            }
            Err(e) => failures.push(e.to_string()),
        }
    }
    collect_failures("circuit relations integral in rescaled basis", failures)
}
