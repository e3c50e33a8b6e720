//! Layers of a central toric arrangement and the poset they form.
//!
//! A layer is stored as the saturated lattice of characters that are constant
//! on it (its direction, in Hermite normal form) together with a canonical
//! torsion translation in `[0,1)^d`. Two layers are equal iff both parts
//! agree, which makes layers produced from different generating sets
//! directly comparable.

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arithmetic_matroid::{ArithmeticMatroid, CharacterMatrix};
use crate::exact_linalg::{canonical_translation, saturation, smith_normal_form, solve_congruences, IntMatrix, RatVector};
use crate::subset::Subset;
use crate::Error;

/// Index of a layer in its [`LayerPoset`].
pub type LayerId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Layer {
    direction: IntMatrix,
    translation: RatVector,
    support: Subset,
}

impl Layer {
    /// Canonical layer through the torsion point `x` whose constant
    /// characters span (rationally) the columns of `generators`.
    fn from_point(chars: &CharacterMatrix, generators: &IntMatrix, x: &RatVector) -> Layer {
        let direction = saturation(generators);
        let translation = canonical_translation(&direction, x);
        let support = (0..chars.len())
            .filter(|&i| lies_on(&direction, &translation, &chars.character(i)))
            .collect();
        Layer { direction, translation, support }
    }

    /// Saturated lattice of characters constant on the layer, one basis vector per column.
    pub fn direction(&self) -> &IntMatrix {
        &self.direction
    }

    pub fn translation(&self) -> &RatVector {
        &self.translation
    }

    /// `S(W) = {i : W ⊆ H_i}`.
    pub fn support(&self) -> Subset {
        self.support
    }

    pub fn codim(&self) -> usize {
        self.direction.cols()
    }

    fn sort_key(&self) -> (usize, &RatVector, Subset, &IntMatrix) {
        (self.codim(), &self.translation, self.support, &self.direction)
    }
}

/// Whether the layer `(dir, x)` lies in `ker χ`.
fn lies_on(dir: &IntMatrix, x: &RatVector, chi: &[BigInt]) -> bool {
    if !x.dot_int(chi).is_integer() {
        return false;
    }
    let mut cols = dir.columns();
    cols.push(chi.to_vec());
    IntMatrix::from_columns(dir.rows(), &cols).rank() == dir.cols()
}

/// Connected components of `∩_{i∈a} H_i`, canonical, sorted by translation.
fn components(chars: &CharacterMatrix, a: Subset) -> Vec<Layer> {
    let m = chars.submatrix(a);
    let zero = vec![BigRational::zero(); a.len()];
    let mut out: Vec<Layer> = solve_congruences(&m, &zero)
        .iter()
        .map(|x| Layer::from_point(chars, &m, x))
        .collect();
    out.sort_by(|p, q| p.sort_key().cmp(&q.sort_key()));
    out.dedup();
    out
}

/// All layers ordered by reverse inclusion.
#[derive(Clone, Debug)]
pub struct LayerPoset {
    layers: Vec<Layer>,
    index: HashMap<Layer, LayerId>,
    by_codim: Vec<Vec<LayerId>>,
    /// `strictly_inside[w]`: every layer properly contained in `w`.
    strictly_inside: Vec<Vec<LayerId>>,
    covers: Vec<(LayerId, LayerId)>,
}

impl LayerPoset {
    /// Builds the poset and, for every independent subset, the ids of the
    /// components of its intersection.
    fn build(matroid: &ArithmeticMatroid) -> (Self, HashMap<Subset, Vec<LayerId>>) {
        let chars = matroid.characters();
        let d = chars.dim();
        let mut per_subset: Vec<(Subset, Vec<Layer>)> = Vec::new();
        for a in matroid.ground().subsets() {
            if a.len() <= d && matroid.is_independent(a) {
                per_subset.push((a, components(chars, a)));
            }
        }
        let mut all: Vec<Layer> = per_subset.iter().flat_map(|(_, ls)| ls.iter().cloned()).collect();
        all.sort_by(|p, q| p.sort_key().cmp(&q.sort_key()));
        all.dedup();

        let index: HashMap<Layer, LayerId> = all.iter().cloned().enumerate().map(|(k, l)| (l, k)).collect();
        let max_codim = all.iter().map(Layer::codim).max().unwrap_or(0);
        let mut by_codim = vec![Vec::new(); max_codim + 1];
        for (k, l) in all.iter().enumerate() {
            by_codim[l.codim()].push(k);
        }

        let mut strictly_inside = vec![Vec::new(); all.len()];
        for w in 0..all.len() {
            for l in 0..all.len() {
                if all[l].codim() > all[w].codim() && contains(&all[w], &all[l]) {
                    strictly_inside[w].push(l);
                }
            }
        }
        // The poset is ranked by codimension.
        let covers = (0..all.len())
            .flat_map(|w| strictly_inside[w].iter().map(move |&l| (w, l)))
            .filter(|&(w, l)| all[l].codim() == all[w].codim() + 1)
            .collect();
        let generated = per_subset
            .into_iter()
            .map(|(a, ls)| (a, ls.iter().map(|l| index[l]).collect()))
            .collect();
        let poset = LayerPoset {
            layers: all,
            index,
            by_codim,
            strictly_inside,
            covers,
        };
        (poset, generated)
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn layer(&self, id: LayerId) -> &Layer {
        &self.layers[id]
    }

    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    pub fn id_of(&self, layer: &Layer) -> Option<LayerId> {
        self.index.get(layer).copied()
    }

    /// The whole torus, the unique minimum.
    pub fn top(&self) -> LayerId {
        self.by_codim[0][0]
    }

    /// Layer ids grouped by codimension.
    pub fn by_codim(&self) -> &[Vec<LayerId>] {
        &self.by_codim
    }

    /// Cover relations `(W, L)` with `L ⊊ W` and nothing in between.
    pub fn covers(&self) -> &[(LayerId, LayerId)] {
        &self.covers
    }

    /// `W ≤ L` in the poset, i.e. `L ⊆ W`.
    pub fn leq(&self, w: LayerId, l: LayerId) -> bool {
        w == l || self.strictly_inside[w].binary_search(&l).is_ok()
    }

    /// Minimal layers lying in every `H_i`, `i ∈ atoms`.
    pub fn minimal_upper_bounds(&self, atoms: Subset) -> Vec<LayerId> {
        let ub: Vec<LayerId> = (0..self.layers.len())
            .filter(|&l| atoms.is_subset_of(self.layers[l].support()))
            .collect();
        ub.iter()
            .copied()
            .filter(|&l| !ub.iter().any(|&v| v != l && self.leq(v, l)))
            .collect()
    }

    /// Canonical display name `L{codim}_{index within codim}`, `T` for the torus.
    pub fn name(&self, id: LayerId) -> String {
        let c = self.layers[id].codim();
        if c == 0 {
            return "T".to_string();
        }
        let k = self.by_codim[c].iter().position(|&x| x == id).expect("layer indexed");
        format!("L{c}_{k}")
    }
}

/// `L ⊆ W`.
///
/// Supports must be nested; the direction of a layer is the saturation of the
/// span of its support, so nested supports already give nested directions and
/// only the translations remain to be compared.
pub fn contains(w: &Layer, l: &Layer) -> bool {
    if !w.support().is_subset_of(l.support()) {
        return false;
    }
    debug_assert!((0..w.direction.cols()).all(|j| lies_on_direction(&l.direction, &w.direction.column(j))));
    let diff = l.translation.sub(&w.translation);
    (0..w.direction.cols()).all(|j| diff.dot_int(&w.direction.column(j)).is_integer())
}

fn lies_on_direction(dir: &IntMatrix, chi: &[BigInt]) -> bool {
    let mut cols = dir.columns();
    cols.push(chi.to_vec());
    IntMatrix::from_columns(dir.rows(), &cols).rank() == dir.cols()
}

/// A central toric arrangement with its arithmetic matroid and layer poset.
pub struct ToricArrangement {
    matroid: ArithmeticMatroid,
    poset: LayerPoset,
    generated: HashMap<Subset, Vec<LayerId>>,
    atoms: Vec<LayerId>,
    meet_cache: RwLock<HashMap<(LayerId, LayerId), Vec<LayerId>>>,
}

impl std::fmt::Debug for ToricArrangement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ToricArrangement")
            .field("characters", self.matroid.characters())
            .field("layers", &self.poset.len())
            .finish()
    }
}

impl ToricArrangement {
    pub fn new(chars: CharacterMatrix) -> Self {
        let matroid = ArithmeticMatroid::new(chars);
        let (poset, generated) = LayerPoset::build(&matroid);
        let atoms = (0..matroid.ground_size()).map(|i| generated[&Subset::singleton(i)][0]).collect();
        ToricArrangement {
            matroid,
            poset,
            generated,
            atoms,
            meet_cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn from_characters(dim: usize, chars: &[&[i64]]) -> Result<Self, Error> {
        Ok(Self::new(CharacterMatrix::from_characters(dim, chars)?))
    }

    pub fn matroid(&self) -> &ArithmeticMatroid {
        &self.matroid
    }

    pub fn characters(&self) -> &CharacterMatrix {
        self.matroid.characters()
    }

    pub fn poset(&self) -> &LayerPoset {
        &self.poset
    }

    pub fn dim(&self) -> usize {
        self.matroid.dim()
    }

    pub fn is_essential(&self) -> bool {
        self.matroid.rank_unchecked(self.matroid.ground()) == self.dim()
    }

    /// The hypertorus `H_i` as a layer.
    pub fn atom(&self, i: usize) -> LayerId {
        self.atoms[i]
    }

    pub fn layer(&self, id: LayerId) -> &Layer {
        self.poset.layer(id)
    }

    /// The `m(A)` components of `∩_{i∈A} H_i`, sorted by translation label.
    pub fn layers_of(&self, a: Subset) -> Result<&[LayerId], Error> {
        if !a.is_subset_of(self.matroid.ground()) {
            return Err(Error::IndexOutOfRange(a, self.matroid.ground_size()));
        }
        self.generated.get(&a).map(Vec::as_slice).ok_or(Error::Dependent(a))
    }

    /// `L ⊆ W`.
    pub fn containment(&self, w: LayerId, l: LayerId) -> bool {
        self.poset.leq(w, l)
    }

    /// Connected components of `W ∩ W'`; empty iff the intersection is empty.
    pub fn intersect_layers(&self, w: LayerId, w2: LayerId) -> Vec<LayerId> {
        let key = (w.min(w2), w.max(w2));
        if let Some(v) = self.meet_cache.read().unwrap().get(&key) {
            return v.clone();
        }
        let (lw, lw2) = (self.layer(w), self.layer(w2));
        let mut cols = lw.direction.columns();
        cols.extend(lw2.direction.columns());
        let m = IntMatrix::from_columns(self.dim(), &cols);
        let b: Vec<BigRational> = lw
            .direction
            .columns()
            .iter()
            .map(|s| lw.translation.dot_int(s))
            .chain(lw2.direction.columns().iter().map(|s| lw2.translation.dot_int(s)))
            .collect();
        let mut out: Vec<LayerId> = solve_congruences(&m, &b)
            .iter()
            .map(|x| {
                let layer = Layer::from_point(self.characters(), &m, x);
                self.poset.id_of(&layer).expect("component of an intersection of layers is a layer")
            })
            .collect();
        out.sort();
        out.dedup();
        self.meet_cache.write().unwrap().insert(key, out.clone());
        out
    }

    /// Matroid of the hyperplane arrangement `A[W]` in the tangent space of `W`.
    pub fn local_arrangement(&self, w: LayerId) -> LocalArrangement<'_> {
        LocalArrangement {
            matroid: &self.matroid,
            support: self.layer(w).support(),
        }
    }

    /// Unique component of `∩_{i∈a} H_i` containing the layer `w`.
    pub fn component_containing(&self, a: Subset, w: LayerId) -> Result<LayerId, Error> {
        self.layers_of(a)?
            .iter()
            .copied()
            .find(|&l| self.containment(l, w))
            .ok_or(Error::NotContained(w))
    }

    /// Connected components of `∩_{i∈x} H_i` for an arbitrary (possibly
    /// dependent) subset `x`.
    pub fn components_of(&self, x: Subset) -> Vec<LayerId> {
        let mut out: Vec<LayerId> = components(self.characters(), x)
            .iter()
            .map(|l| self.poset.id_of(l).expect("component is a layer"))
            .collect();
        out.sort();
        out
    }

    /// Covering arithmetic of a subset containing exactly one circuit.
    pub fn covering_data(&self, x: Subset) -> Result<CoveringData, Error> {
        let m = &self.matroid;
        let circuits = m.circuits_within(x);
        if circuits.len() != 1 {
            return Err(Error::NotCorankOne(x));
        }
        let c = circuits[0];
        let mx = m.multiplicity_unchecked(x);
        let mut a = vec![BigInt::zero(); m.ground_size()];
        for i in x.iter() {
            a[i] = if c.contains(i) {
                c.remove(i)
                    .iter()
                    .fold(mx.clone(), |acc, j| acc * m.multiplicity_unchecked(c.remove(j)))
            } else {
                mx.clone()
            };
        }
        let mut degrees = Vec::new();
        for i in c.iter() {
            let num = x.remove(i).iter().fold(BigInt::one(), |acc, j| acc * &a[j]);
            let den = m.multiplicity_unchecked(x.remove(i));
            degrees.push(BigRational::new(num, den));
        }
        if degrees.iter().any(|q| q != &degrees[0] || !q.is_integer()) {
            return Err(Error::CoveringDegreeMismatch(x));
        }
        Ok(CoveringData {
            subset: x,
            circuit: c,
            a,
            degree: degrees[0].to_integer(),
        })
    }
}

/// Restriction of the matroid to the support of a layer.
#[derive(Clone, Copy, Debug)]
pub struct LocalArrangement<'a> {
    matroid: &'a ArithmeticMatroid,
    support: Subset,
}

impl LocalArrangement<'_> {
    pub fn ground(&self) -> Subset {
        self.support
    }

    pub fn rank(&self) -> usize {
        self.matroid.rank_unchecked(self.support)
    }

    pub fn circuits(&self) -> Vec<Subset> {
        self.matroid.circuits_within(self.support)
    }

    pub fn nbc_sets(&self, k: usize) -> Vec<Subset> {
        self.matroid.nbc_sets_within(self.support, k)
    }

    /// Flats of the restriction, keyed by rank.
    pub fn flats(&self) -> Vec<Vec<Subset>> {
        let mut by_rank: Vec<Vec<Subset>> = vec![Vec::new(); self.rank() + 1];
        for s in self.support.subsets() {
            let cl = self.matroid.closure_within(self.support, s);
            if cl == s {
                by_rank[self.matroid.rank_unchecked(s)].push(s);
            }
        }
        by_rank
    }

    /// `μ(∅-closure, F)` for every flat, by the defining recursion.
    pub fn mobius_from_bottom(&self) -> HashMap<Subset, i64> {
        let flats = self.flats();
        let mut mu: HashMap<Subset, i64> = HashMap::new();
        for level in &flats {
            for &f in level {
                let below: i64 = mu.iter().filter(|(g, _)| **g != f && g.is_subset_of(f)).map(|(_, v)| *v).sum();
                mu.insert(f, if mu.is_empty() { 1 } else { -below });
            }
        }
        mu
    }
}

/// Arithmetic of the unimodular covering attached to `X = C ⊔ F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringData {
    pub subset: Subset,
    pub circuit: Subset,
    /// `a_i` for every `i ∈ X`, zero outside `X`.
    pub a: Vec<BigInt>,
    pub degree: BigInt,
}

impl CoveringData {
    /// Number of preimages of a point of a layer of `A` lying on one of its
    /// lifts: `m(A)/m(X\{j}) · ∏_{i∈X\(A∪{j})} a_i`, for independent `A ⊊ X`
    /// and `j ∈ C \ A`.
    pub fn preimage_count(&self, m: &ArithmeticMatroid, a: Subset, j: usize) -> Result<BigRational, Error> {
        if !a.is_subset_of(self.subset) || a == self.subset || !m.is_independent(a) {
            return Err(Error::Dependent(a));
        }
        if !self.circuit.contains(j) || a.contains(j) {
            return Err(Error::NotContained(j));
        }
        let prod = self
            .subset
            .difference(a.insert(j))
            .iter()
            .fold(BigInt::one(), |acc, i| acc * &self.a[i]);
        Ok(BigRational::new(
            m.multiplicity_unchecked(a) * prod,
            m.multiplicity_unchecked(self.subset.remove(j)),
        ))
    }
}

/// Projects the characters onto a basis of their saturated span, giving an
/// essential arrangement in a torus of dimension `rank(E)`. Returns it with
/// the rank deficit `d - rank(E)`.
pub fn essentialize(chars: &CharacterMatrix) -> (CharacterMatrix, usize) {
    let d = chars.dim();
    let s = saturation(chars.matrix());
    let r = s.cols();
    if r == d {
        return (chars.clone(), 0);
    }
    // U S V = [I; 0]: coordinates of χ in the basis S are V · (U χ)[..r].
    let snf = smith_normal_form(&s);
    let cols: Vec<Vec<BigInt>> = (0..chars.len())
        .map(|i| {
            let uchi = snf.u.mul_vec(&chars.character(i));
            (0..r)
                .map(|k| (0..r).fold(BigInt::zero(), |acc, t| acc + &snf.v[(k, t)] * &uchi[t]))
                .collect()
        })
        .collect();
    let m = IntMatrix::from_columns(r, &cols);
    (CharacterMatrix::new(m).expect("coordinates of primitive characters stay primitive"), d - r)
}
