//! Generators and relations for the rational cohomology ring of the
//! complement.
//!
//! The ring is generated by symbols `e_{W,A;B}` where `A` is an independent
//! set, `W` one of the components of `∩_{i∈A} H_i`, and `B` is disjoint from
//! `A` with `A ⊔ B` independent. Products of symbols expand back into sums of
//! symbols, so the whole ring is a quotient of the span of the symbols by the
//! ideal generated by the torus relations (one per integer dependency among
//! the characters) and the circuit relations (one per corank-one subset `X`
//! and component `L` of `∩_{i∈X} H_i`).

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arithmetic_matroid::CharacterMatrix;
use crate::exact_linalg::kernel_lattice;
use crate::layers::{essentialize, LayerId, ToricArrangement};
use crate::subset::{inversions_unchecked, Subset};
use crate::Error;

/// The symbol `e_{W,A;B}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorSymbol {
    pub layer: LayerId,
    pub a: Subset,
    pub b: Subset,
}

impl GeneratorSymbol {
    pub fn new(layer: LayerId, a: Subset, b: Subset) -> Self {
        GeneratorSymbol { layer, a, b }
    }

    pub fn degree(&self) -> usize {
        self.a.len() + self.b.len()
    }

    /// `A ∪ B`.
    pub fn indices(&self) -> Subset {
        self.a.union(self.b)
    }

    /// Checks that the symbol is a generator of `arr`.
    pub fn validate(&self, arr: &ToricArrangement) -> Result<(), Error> {
        let invalid = |why: &str| Error::InvalidGenerator(format!("{self:?}: {why}"));
        if !self.a.is_disjoint(self.b) {
            return Err(invalid("A and B overlap"));
        }
        if !self.indices().is_subset_of(arr.matroid().ground()) || !arr.matroid().is_independent(self.indices()) {
            return Err(invalid("A ∪ B is not independent"));
        }
        if !arr.layers_of(self.a)?.contains(&self.layer) {
            return Err(invalid("W is not a component of the intersection over A"));
        }
        Ok(())
    }

    fn key(&self) -> (usize, Subset, Subset, LayerId) {
        (self.degree(), self.indices(), self.a, self.layer)
    }
}

impl Ord for GeneratorSymbol {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for GeneratorSymbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Finite linear combination of symbols with exact rational coefficients.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinComb(BTreeMap<GeneratorSymbol, BigRational>);

impl LinComb {
    pub fn zero() -> Self {
        LinComb(BTreeMap::new())
    }

    pub fn single(sym: GeneratorSymbol) -> Self {
        let mut lc = Self::zero();
        lc.add_term(sym, BigRational::one());
        lc
    }

    pub fn add_term(&mut self, sym: GeneratorSymbol, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.0.entry(sym).or_insert_with(BigRational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.0.remove(&sym);
        }
    }

    pub fn add_scaled(&mut self, other: &LinComb, factor: &BigRational) {
        for (s, c) in &other.0 {
            self.add_term(*s, c * factor);
        }
    }

    pub fn scaled(&self, factor: &BigRational) -> LinComb {
        let mut out = LinComb::zero();
        out.add_scaled(self, factor);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coefficient(&self, sym: &GeneratorSymbol) -> BigRational {
        self.0.get(sym).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GeneratorSymbol, &BigRational)> {
        self.0.iter()
    }

    /// Degree of the (homogeneous) combination; `None` when zero.
    pub fn degree(&self) -> Option<usize> {
        self.0.keys().next().map(GeneratorSymbol::degree)
    }

    /// Renders as `a s1 + b s2 - ...` with the given symbol names.
    pub fn render(&self, mut name: impl FnMut(&GeneratorSymbol) -> String) -> String {
        if self.0.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (s, c)) in self.0.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            if !abs.is_one() {
                let _ = write!(out, "{abs} ");
            }
            out.push_str(&name(s));
        }
        out
    }
}

impl FromIterator<(GeneratorSymbol, BigRational)> for LinComb {
    fn from_iter<I: IntoIterator<Item = (GeneratorSymbol, BigRational)>>(iter: I) -> Self {
        let mut lc = LinComb::zero();
        for (s, c) in iter {
            lc.add_term(s, c);
        }
        lc
    }
}

fn sign(odd: bool) -> BigRational {
    if odd {
        -BigRational::one()
    } else {
        BigRational::one()
    }
}

fn ratio(p: BigInt, q: BigInt) -> BigRational {
    BigRational::new(p, q)
}

/// Product of two symbols via the product rule.
///
/// Zero when the index sets overlap or their union is dependent; otherwise
/// `(-1)^{ℓ(A∪B, A'∪B')}` times the sum over the components `L` of `W ∩ W'`
/// of `e_{L, A∪A'; B∪B'}`.
pub fn product(arr: &ToricArrangement, g: &GeneratorSymbol, h: &GeneratorSymbol) -> LinComb {
    let (i, j) = (g.indices(), h.indices());
    if !i.is_disjoint(j) || !arr.matroid().is_independent(i.union(j)) {
        return LinComb::zero();
    }
    let s = sign(inversions_unchecked(i, j) % 2 == 1);
    let (a, b) = (g.a.union(h.a), g.b.union(h.b));
    arr.intersect_layers(g.layer, h.layer)
        .into_iter()
        .map(|l| (GeneratorSymbol::new(l, a, b), s.clone()))
        .collect()
}

/// The symbol `e_{T,∅;{i}}`.
pub fn psi(arr: &ToricArrangement, i: usize) -> GeneratorSymbol {
    GeneratorSymbol::new(arr.poset().top(), Subset::EMPTY, Subset::singleton(i))
}

/// `Σ n_i e_{T,∅;{i}}` for an integer dependency `Σ n_i χ_i = 0`.
pub fn toro_relation(arr: &ToricArrangement, dep: &[BigInt]) -> Result<LinComb, Error> {
    let chars = arr.characters();
    if dep.len() != chars.len() || !chars.matrix().mul_vec(dep).iter().all(Zero::is_zero) {
        return Err(Error::NotADependency);
    }
    Ok(dep
        .iter()
        .enumerate()
        .map(|(i, n)| (psi(arr, i), BigRational::from_integer(n.clone())))
        .collect())
}

/// A circuit relation together with the data it was built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircuitRelation {
    /// `X = C ⊔ F`.
    pub subset: Subset,
    pub circuit: Subset,
    /// The component `L` of `∩_{i∈X} H_i`.
    pub layer: LayerId,
    pub degree: usize,
    pub relation: LinComb,
}

/// The relation attached to a corank-one subset `X = C ⊔ F` and a component
/// `L` of `∩_{i∈X} H_i`:
///
/// `Σ_{j∈C} Σ (-1)^{|A_{≤j}|} c_B m(A)/m(A∪B) e_{W,A;B}`
///
/// over splittings `X = A ⊔ B ⊔ {j}` with `F ⊆ A`, `|B|` even, and layers
/// `W ⊇ L` generated by `A`.
pub fn circuit_relation(arr: &ToricArrangement, x: Subset, l: LayerId) -> Result<LinComb, Error> {
    let m = arr.matroid();
    if !x.is_subset_of(m.ground()) {
        return Err(Error::IndexOutOfRange(x, m.ground_size()));
    }
    if x.is_empty() || m.rank_unchecked(x) + 1 != x.len() {
        return Err(Error::NotCorankOne(x));
    }
    let c = m.circuits_within(x)[0];
    if !arr.components_of(x).contains(&l) {
        return Err(Error::NotAComponent { layer: l, subset: x });
    }
    let dep = m.circuit_dependency(c)?;
    let mut rel = LinComb::zero();
    for j in c.iter() {
        for b in c.remove(j).subsets().filter(|b| b.len() % 2 == 0) {
            let a = x.difference(b).remove(j);
            let coeff = sign(a.at_most(j).len() % 2 == 1)
                * BigRational::from_integer(dep.sign_product(b).into())
                * ratio(m.multiplicity_unchecked(a), m.multiplicity_unchecked(a.union(b)));
            for &w in arr.layers_of(a)? {
                if arr.containment(w, l) {
                    rel.add_term(GeneratorSymbol::new(w, a, b), coeff.clone());
                }
            }
        }
    }
    Ok(rel)
}

/// All subsets `X` with `rk(X) = |X| - 1`, in lexicographic order.
pub fn corank_one_subsets(arr: &ToricArrangement) -> Vec<Subset> {
    let m = arr.matroid();
    let mut out: Vec<Subset> = m
        .ground()
        .subsets()
        .filter(|x| !x.is_empty() && x.len() <= m.dim() + 1 && m.rank_unchecked(*x) + 1 == x.len())
        .collect();
    out.sort();
    out
}

/// Circuit relation of a unimodular arrangement: every multiplicity ratio is
/// one and every `A` generates a single layer.
pub fn unimodular_circuit_relation(arr: &ToricArrangement, c: Subset) -> Result<LinComb, Error> {
    let m = arr.matroid();
    if !m.is_unimodular() {
        return Err(Error::NotUnimodular);
    }
    let dep = m.circuit_dependency(c)?;
    let mut rel = LinComb::zero();
    for j in c.iter() {
        for b in c.remove(j).subsets().filter(|b| b.len() % 2 == 0) {
            let a = c.difference(b).remove(j);
            let w = arr.layers_of(a)?[0];
            let coeff = sign(a.at_most(j).len() % 2 == 1) * BigRational::from_integer(dep.sign_product(b).into());
            rel.add_term(GeneratorSymbol::new(w, a, b), coeff);
        }
    }
    Ok(rel)
}

/// Rewrites `e_{W,A;B}` in the integral generators `η_{L,A',B'}`:
///
/// `Σ_{C⊆A} (-1)^{|C|} 2^{|A\C|} m(A\C)/m(A) η_{L, A\C, B∪C}`
///
/// with `L` the component of `∩_{i∈A\C} H_i` containing `W`. The returned
/// combination is keyed by the same `(layer, A, B)` triples, read in the
/// `η` basis.
pub fn integral_basis_change(arr: &ToricArrangement, sym: &GeneratorSymbol) -> Result<LinComb, Error> {
    sym.validate(arr)?;
    let m = arr.matroid();
    let ma = m.multiplicity_unchecked(sym.a);
    let mut out = LinComb::zero();
    for c in sym.a.subsets() {
        let rest = sym.a.difference(c);
        let l = arr.component_containing(rest, sym.layer)?;
        let coeff = sign(c.len() % 2 == 1)
            * BigRational::from_integer(BigInt::one() << rest.len())
            * ratio(m.multiplicity_unchecked(rest), ma.clone());
        out.add_term(GeneratorSymbol::new(l, rest, sym.b.union(c)), coeff);
    }
    Ok(out)
}

/// Rewrites a combination of `e`-symbols in the `η` basis.
pub fn to_integral_basis(arr: &ToricArrangement, lc: &LinComb) -> Result<LinComb, Error> {
    let mut out = LinComb::zero();
    for (s, c) in lc.iter() {
        out.add_scaled(&integral_basis_change(arr, s)?, c);
    }
    Ok(out)
}

/// Re-expresses an `η`-combination in the rescaled generators
/// `m(A)/m(A∪B) · η_{W,A,B}`, which are integral classes.
pub fn rescale_integral(arr: &ToricArrangement, lc: &LinComb) -> LinComb {
    let m = arr.matroid();
    lc.iter()
        .map(|(s, c)| {
            let f = ratio(m.multiplicity_unchecked(s.indices()), m.multiplicity_unchecked(s.a));
            (*s, c * f)
        })
        .collect()
}

/// Generators and relations of the cohomology ring of an essential arrangement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    /// Dimension of the (essential) torus the presentation lives on.
    pub dim: usize,
    /// Rank deficit removed by essentialization; the full cohomology is the
    /// presented ring tensored with the cohomology of a `deficit`-torus.
    pub deficit: usize,
    pub generators: Vec<GeneratorSymbol>,
    /// Nonzero products `g·h` for `g < h` or `g = h`, both of positive degree
    /// and total degree at most `dim`. Absent pairs multiply to zero.
    pub product_rules: BTreeMap<(GeneratorSymbol, GeneratorSymbol), LinComb>,
    pub toro_relations: Vec<LinComb>,
    pub circuit_relations: Vec<CircuitRelation>,
    index: HashMap<GeneratorSymbol, usize>,
}

impl Presentation {
    pub fn from_parts(
        dim: usize,
        deficit: usize,
        mut generators: Vec<GeneratorSymbol>,
        product_rules: BTreeMap<(GeneratorSymbol, GeneratorSymbol), LinComb>,
        toro_relations: Vec<LinComb>,
        circuit_relations: Vec<CircuitRelation>,
    ) -> Self {
        generators.sort();
        let index = generators.iter().enumerate().map(|(k, g)| (*g, k)).collect();
        Presentation {
            dim,
            deficit,
            generators,
            product_rules,
            toro_relations,
            circuit_relations,
            index,
        }
    }

    pub fn index_of(&self, g: &GeneratorSymbol) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn generators_of_degree(&self, k: usize) -> impl Iterator<Item = &GeneratorSymbol> {
        self.generators.iter().filter(move |g| g.degree() == k)
    }

    /// Product of two generators according to the stored rules.
    pub fn product(&self, g: &GeneratorSymbol, h: &GeneratorSymbol) -> LinComb {
        if g.degree() == 0 {
            return LinComb::single(*h);
        }
        if h.degree() == 0 {
            return LinComb::single(*g);
        }
        if g <= h {
            self.product_rules.get(&(*g, *h)).cloned().unwrap_or_default()
        } else {
            match self.product_rules.get(&(*h, *g)) {
                Some(lc) => lc.scaled(&sign(g.degree() * h.degree() % 2 == 1)),
                None => LinComb::zero(),
            }
        }
    }

    /// `r · s` expanded termwise.
    pub fn multiply(&self, r: &LinComb, s: &GeneratorSymbol) -> LinComb {
        let mut out = LinComb::zero();
        for (g, c) in r.iter() {
            out.add_scaled(&self.product(g, s), c);
        }
        out
    }

    /// Every relation, torus relations first.
    pub fn relations(&self) -> impl Iterator<Item = &LinComb> {
        self.toro_relations
            .iter()
            .chain(self.circuit_relations.iter().map(|c| &c.relation))
    }
}

/// Builds the presentation of an arrangement, essentializing it first.
/// Returns the essential arrangement the symbols refer to.
pub fn build_presentation(chars: &CharacterMatrix) -> (ToricArrangement, Presentation) {
    let (ess, deficit) = essentialize(chars);
    let arr = ToricArrangement::new(ess);
    let p = presentation_of(&arr, deficit);
    (arr, p)
}

/// Presentation of an already essential arrangement.
pub fn presentation_of(arr: &ToricArrangement, deficit: usize) -> Presentation {
    let m = arr.matroid();
    let d = arr.dim();

    let mut generators = Vec::new();
    for indep in m.ground().subsets().filter(|s| s.len() <= d && m.is_independent(*s)) {
        for a in indep.subsets() {
            let b = indep.difference(a);
            for &w in arr.layers_of(a).expect("subset of independent set is independent") {
                generators.push(GeneratorSymbol::new(w, a, b));
            }
        }
    }
    generators.sort();

    let mut product_rules = BTreeMap::new();
    for (k, g) in generators.iter().enumerate() {
        if g.degree() == 0 {
            continue;
        }
        for h in &generators[k..] {
            if h.degree() == 0 || g.degree() + h.degree() > d {
                continue;
            }
            let p = product(arr, g, h);
            if !p.is_zero() {
                product_rules.insert((*g, *h), p);
            }
        }
    }

    let kernel = kernel_lattice(arr.characters().matrix());
    let toro_relations = kernel
        .columns()
        .iter()
        .map(|dep| toro_relation(arr, dep).expect("kernel vectors are dependencies"))
        .collect();

    let mut circuit_relations = Vec::new();
    for x in corank_one_subsets(arr) {
        let c = m.circuits_within(x)[0];
        for l in arr.components_of(x) {
            let relation = circuit_relation(arr, x, l).expect("corank-one subset with a component");
            circuit_relations.push(CircuitRelation {
                subset: x,
                circuit: c,
                layer: l,
                degree: x.len() - 1,
                relation,
            });
        }
    }

    Presentation::from_parts(d, deficit, generators, product_rules, toro_relations, circuit_relations)
}

/// Display name `e[W;A;B]` using the poset's layer names.
pub fn symbol_name(arr: &ToricArrangement, s: &GeneratorSymbol) -> String {
    format!("e[{};{};{}]", arr.poset().name(s.layer), s.a, s.b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b_arr() -> ToricArrangement {
        ToricArrangement::from_characters(2, &[&[3, 1], &[0, 1], &[1, 0]]).unwrap()
    }

    fn b_prime() -> ToricArrangement {
        ToricArrangement::from_characters(2, &[&[1, 1], &[0, 1], &[1, 0]]).unwrap()
    }

    fn q(p: i64, r: i64) -> BigRational {
        BigRational::new(p.into(), r.into())
    }

    fn omega(arr: &ToricArrangement, i: usize) -> GeneratorSymbol {
        GeneratorSymbol::new(arr.atom(i), Subset::singleton(i), Subset::EMPTY)
    }

    fn points(arr: &ToricArrangement) -> Vec<LayerId> {
        arr.layers_of(Subset::from([0, 1])).unwrap().to_vec()
    }

    #[test]
    fn product_examples() {
        let arr = b_arr();
        let pts = points(&arr);
        let a01 = Subset::from([0, 1]);
        let got = product(&arr, &omega(&arr, 0), &omega(&arr, 1));
        let want: LinComb = pts.iter().map(|&l| (GeneratorSymbol::new(l, a01, Subset::EMPTY), q(1, 1))).collect();
        assert_eq!(got, want);

        assert!(product(&arr, &psi(&arr, 1), &psi(&arr, 1)).is_zero());

        let got = product(&arr, &omega(&arr, 1), &omega(&arr, 2));
        assert_eq!(got, LinComb::single(GeneratorSymbol::new(pts[0], Subset::from([1, 2]), Subset::EMPTY)));
    }

    #[test]
    fn product_sign_follows_shuffle() {
        let arr = b_arr();
        // ψ_1 ψ_0 = -ψ_0 ψ_1
        let t = arr.poset().top();
        let got = product(&arr, &psi(&arr, 1), &psi(&arr, 0));
        assert_eq!(got, LinComb::single(GeneratorSymbol::new(t, Subset::EMPTY, Subset::from([0, 1]))).scaled(&q(-1, 1)));
    }

    #[test]
    fn toro_examples() {
        let arr = b_arr();
        let dep: Vec<BigInt> = [-1, 1, 3].iter().map(|&x| BigInt::from(x)).collect();
        let want: LinComb = [(0, -1), (1, 1), (2, 3)].iter().map(|&(i, c)| (psi(&arr, i), q(c, 1))).collect();
        assert_eq!(toro_relation(&arr, &dep).unwrap(), want);
        assert!(toro_relation(&arr, &[BigInt::zero(), BigInt::zero(), BigInt::zero()]).unwrap().is_zero());
        let bad: Vec<BigInt> = [1, 1, 1].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(toro_relation(&arr, &bad), Err(Error::NotADependency));

        let arr = b_prime();
        let dep: Vec<BigInt> = [-1, 1, 1].iter().map(|&x| BigInt::from(x)).collect();
        let want: LinComb = [(0, -1), (1, 1), (2, 1)].iter().map(|&(i, c)| (psi(&arr, i), q(c, 1))).collect();
        assert_eq!(toro_relation(&arr, &dep).unwrap(), want);
    }

    #[test]
    fn circuit_relation_of_b() {
        let arr = b_arr();
        let p = points(&arr)[0];
        let t = arr.poset().top();
        let e = |l, a: &[usize], b: &[usize]| GeneratorSymbol::new(l, Subset::from(a), Subset::from(b));
        let rel = circuit_relation(&arr, Subset::from([0, 1, 2]), p).unwrap();
        let want: LinComb = [
            (e(p, &[0, 1], &[]), q(1, 1)),
            (e(p, &[0, 2], &[]), q(-1, 1)),
            (e(p, &[1, 2], &[]), q(1, 1)),
            (e(t, &[], &[1, 2]), q(1, 1)),
            (e(t, &[], &[0, 2]), q(-1, 1)),
            (e(t, &[], &[0, 1]), q(-1, 3)),
        ]
        .into_iter()
        .collect();
        assert_eq!(rel, want);
    }

    #[test]
    fn circuit_relation_errors() {
        let arr = b_arr();
        let q_layer = points(&arr)[1];
        assert!(matches!(
            circuit_relation(&arr, Subset::from([0, 1, 2]), q_layer),
            Err(Error::NotAComponent { .. })
        ));
        assert!(matches!(circuit_relation(&arr, Subset::from([0, 1]), q_layer), Err(Error::NotCorankOne(_))));
    }

    #[test]
    fn unimodular_relation_of_b_prime() {
        let arr = b_prime();
        let c = Subset::from([0, 1, 2]);
        let rel = unimodular_circuit_relation(&arr, c).unwrap();
        let p = arr.components_of(c)[0];
        let t = arr.poset().top();
        let e = |l, a: &[usize], b: &[usize]| GeneratorSymbol::new(l, Subset::from(a), Subset::from(b));
        let want: LinComb = [
            (e(p, &[0, 1], &[]), q(1, 1)),
            (e(p, &[0, 2], &[]), q(-1, 1)),
            (e(p, &[1, 2], &[]), q(1, 1)),
            (e(t, &[], &[0, 1]), q(-1, 1)),
            (e(t, &[], &[0, 2]), q(-1, 1)),
            (e(t, &[], &[1, 2]), q(1, 1)),
        ]
        .into_iter()
        .collect();
        assert_eq!(rel, want);
        assert_eq!(rel, circuit_relation(&arr, c, p).unwrap());
        assert_eq!(unimodular_circuit_relation(&b_arr(), c), Err(Error::NotUnimodular));
    }

    #[test]
    fn unimodular_parallel_pair() {
        let arr = ToricArrangement::from_characters(2, &[&[1, 0], &[1, 0], &[0, 1]]).unwrap();
        let c = Subset::from([0, 1]);
        let rel = unimodular_circuit_relation(&arr, c).unwrap();
        let h = arr.atom(0);
        assert_eq!(arr.atom(1), h);
        let want: LinComb = [
            (GeneratorSymbol::new(h, Subset::from([1]), Subset::EMPTY), q(1, 1)),
            (GeneratorSymbol::new(h, Subset::from([0]), Subset::EMPTY), q(-1, 1)),
        ]
        .into_iter()
        .collect();
        assert_eq!(rel, want);
    }

    #[test]
    fn basis_change_of_point_generator() {
        let arr = b_arr();
        let p = points(&arr)[0];
        let t = arr.poset().top();
        let sym = GeneratorSymbol::new(p, Subset::from([0, 1]), Subset::EMPTY);
        let got = integral_basis_change(&arr, &sym).unwrap();
        let want: LinComb = [
            (sym, q(4, 1)),
            (GeneratorSymbol::new(arr.atom(1), Subset::from([1]), Subset::from([0])), q(-2, 3)),
            (GeneratorSymbol::new(arr.atom(0), Subset::from([0]), Subset::from([1])), q(-2, 3)),
            (GeneratorSymbol::new(t, Subset::EMPTY, Subset::from([0, 1])), q(1, 3)),
        ]
        .into_iter()
        .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn basis_change_degenerate_cases() {
        let arr = b_prime();
        let t = arr.poset().top();
        let s = GeneratorSymbol::new(t, Subset::EMPTY, Subset::from([1]));
        assert_eq!(integral_basis_change(&arr, &s).unwrap(), LinComb::single(s));

        let w = omega(&arr, 2);
        let want: LinComb = [(w, q(2, 1)), (psi(&arr, 2), q(-1, 1))].into_iter().collect();
        assert_eq!(integral_basis_change(&arr, &w).unwrap(), want);

        let bad = GeneratorSymbol::new(t, Subset::from([0]), Subset::EMPTY);
        assert!(matches!(integral_basis_change(&arr, &bad), Err(Error::InvalidGenerator(_))));
    }

    #[test]
    fn presentation_counts() {
        let (arr, p) = build_presentation(b_arr().characters());
        let per_degree: Vec<usize> = (0..=2).map(|k| p.generators_of_degree(k).count()).collect();
        // degree 2: {0,1} gives 3 + 1 + 1 + 1, {0,2} and {1,2} give 4 each
        assert_eq!(per_degree, vec![1, 6, 14]);
        assert_eq!(p.toro_relations.len(), 1);
        assert_eq!(p.circuit_relations.len(), 1);
        assert_eq!(arr.dim(), 2);

        let (_, p) = build_presentation(b_prime().characters());
        assert_eq!(p.circuit_relations.len(), 1);

        let empty = CharacterMatrix::from_characters(0, &[]).unwrap();
        let (_, p) = build_presentation(&empty);
        assert_eq!(p.generators.len(), 1);
        assert_eq!(p.generators[0].degree(), 0);
    }

    #[test]
    fn stored_products_agree_with_direct_products() {
        let arr = b_arr();
        let p = presentation_of(&arr, 0);
        for g in &p.generators {
            for h in &p.generators {
                if g.degree() + h.degree() <= 2 {
                    assert_eq!(p.product(g, h), product(&arr, g, h), "{g:?} {h:?}");
                }
            }
        }
    }

    #[test]
    fn render_format() {
        let arr = b_arr();
        let p = points(&arr)[0];
        let rel = circuit_relation(&arr, Subset::from([0, 1, 2]), p).unwrap();
        let text = rel.render(|s| symbol_name(&arr, s));
        assert_eq!(
            text,
            "-1/3 e[T;{};{0,1}] + e[L2_0;{0,1};{}] - e[T;{};{0,2}] - e[L2_0;{0,2};{}] + e[T;{};{1,2}] + e[L2_0;{1,2};{}]"
        );
    }
}
