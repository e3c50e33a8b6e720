use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toric_core::arithmetic_matroid::eval_at_minus_one;
use toric_core::presentation::{
    circuit_relation, integral_basis_change, presentation_of, product, psi, unimodular_circuit_relation,
};
use toric_core::verifier::{check_covering_degrees, check_layer_counts};
use toric_core::{
    build_presentation, graded_decomposition_dims, poincare_polynomial, quotient_dimensions, verify, CharacterMatrix,
    GeneratorSymbol, LayerId, LinComb, Presentation, Subset, ToricArrangement,
};

const SEED: u64 = 0x0074_6f72_6963;
const RANDOM_INSTANCES: usize = 200;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
    // sub-claims that fail on every input, reported but not counted against the run
    unattainable: Vec<String>,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome {
            passed,
            detail: detail.into(),
            unattainable: Vec::new(),
        }
    }
}

fn q(p: i64, r: i64) -> BigRational {
    BigRational::new(p.into(), r.into())
}

fn set(xs: &[usize]) -> Subset {
    Subset::from(xs)
}

fn sym(l: LayerId, a: &[usize], b: &[usize]) -> GeneratorSymbol {
    GeneratorSymbol::new(l, set(a), set(b))
}

fn chars(d: usize, cs: &[&[i64]]) -> CharacterMatrix {
    CharacterMatrix::from_characters(d, cs).unwrap()
}

fn lincomb(terms: Vec<(GeneratorSymbol, BigRational)>) -> LinComb {
    terms.into_iter().collect()
}

fn equal_up_to_sign(a: &LinComb, b: &LinComb) -> bool {
    a == b || *a == b.scaled(&-BigRational::one())
}

fn three_way(c: &CharacterMatrix) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
    let arr = ToricArrangement::new(c.clone());
    let (_, p) = build_presentation(c);
    (
        poincare_polynomial(&arr),
        quotient_dimensions(&p).0,
        graded_decomposition_dims(&arr).0,
    )
}

fn dims_criterion(c: &CharacterMatrix, want: &[u64], limit: Duration) -> Outcome {
    let start = Instant::now();
    let (poin, quot, dec) = three_way(c);
    let elapsed = start.elapsed();
    let ok = poin == want && quot == want && dec == want && elapsed < limit;
    Outcome::new(
        ok,
        format!("poincare {poin:?}, quotient {quot:?}, decomposition {dec:?}, expected {want:?}, {elapsed:.2?}"),
    )
}

/// Layers of `a` ordered so that the one through the identity comes first.
fn points_through_identity_first(arr: &ToricArrangement, a: Subset) -> Vec<LayerId> {
    let mut pts = arr.layers_of(a).unwrap().to_vec();
    pts.sort_by_key(|&l| !arr.layer(l).translation().coords().iter().all(Zero::is_zero));
    pts
}

fn criterion_1() -> Outcome {
    dims_criterion(&chars(2, &[&[3, 1], &[0, 1], &[1, 0]]), &[1, 5, 8], Duration::from_secs(5))
}

fn criterion_2() -> Outcome {
    dims_criterion(&chars(2, &[&[1, 1], &[0, 1], &[1, 0]]), &[1, 5, 6], Duration::from_secs(5))
}

fn criterion_3() -> Outcome {
    let (arr, p) = build_presentation(&chars(2, &[&[3, 1], &[0, 1], &[1, 0]]));
    let t = arr.poset().top();
    let omega = |i: usize| sym(arr.atom(i), &[i], &[]);
    let mut failures = Vec::new();

    for i in 0..3 {
        if !p.product(&omega(i), &psi(&arr, i)).is_zero() {
            failures.push(format!("omega_{i} psi_{i} is not zero"));
        }
    }

    let pts = points_through_identity_first(&arr, set(&[0, 1]));
    let sum = lincomb(pts.iter().map(|&l| (sym(l, &[0, 1], &[]), q(1, 1))).collect());
    if pts.len() != 3 || p.product(&omega(0), &omega(1)) != sum {
        failures.push("omega_0 omega_1 is not the sum over p, q, r".into());
    }

    let toro = lincomb(vec![
        (psi(&arr, 0), q(-1, 1)),
        (psi(&arr, 1), q(1, 1)),
        (psi(&arr, 2), q(3, 1)),
    ]);
    if p.toro_relations.len() != 1 || !equal_up_to_sign(&p.toro_relations[0], &toro) {
        failures.push("torus relation -psi_0 + psi_1 + 3 psi_2 missing".into());
    }

    let point = pts[0];
    let circuit = lincomb(vec![
        (sym(point, &[0, 1], &[]), q(1, 1)),
        (sym(point, &[0, 2], &[]), q(-1, 1)),
        (sym(point, &[1, 2], &[]), q(1, 1)),
        (sym(t, &[], &[1, 2]), q(1, 1)),
        (sym(t, &[], &[0, 2]), q(-1, 1)),
        (sym(t, &[], &[0, 1]), q(-1, 3)),
    ]);
    let found = p
        .circuit_relations
        .iter()
        .any(|r| r.layer == point && equal_up_to_sign(&r.relation, &circuit));
    if !found {
        failures.push("circuit relation at p with coefficient 1/3 missing".into());
    }
    Outcome::new(failures.is_empty(), if failures.is_empty() { "four relations found".into() } else { failures.join("; ") })
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let c = chars(3, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0], &[1, -1, 3]]);
    let (arr, p) = build_presentation(&c);
    let t = arr.poset().top();
    let mut failures = Vec::new();

    let points = &arr.poset().by_codim()[3];
    if points.len() != 3 {
        failures.push(format!("{} zero-dimensional layers", points.len()));
    }

    let line = arr.components_of(set(&[0, 1, 2]));
    let deg2 = |w: LayerId| {
        lincomb(vec![
            (sym(w, &[0, 1], &[]), q(1, 1)),
            (sym(w, &[0, 2], &[]), q(-1, 1)),
            (sym(w, &[1, 2], &[]), q(1, 1)),
            (sym(t, &[], &[0, 1]), q(1, 1)),
            (sym(t, &[], &[0, 2]), q(-1, 1)),
            (sym(t, &[], &[1, 2]), q(-1, 1)),
        ])
    };
    let h3 = arr.atom(3);
    let deg3 = |s: LayerId| {
        lincomb(vec![
            (sym(s, &[0, 1, 3], &[]), q(1, 1)),
            (sym(s, &[0, 2, 3], &[]), q(-1, 1)),
            (sym(s, &[1, 2, 3], &[]), q(1, 1)),
            (sym(h3, &[3], &[0, 1]), q(1, 3)),
            (sym(h3, &[3], &[0, 2]), q(-1, 3)),
            (sym(h3, &[3], &[1, 2]), q(-1, 3)),
        ])
    };

    let rels = &p.circuit_relations;
    let of_degree = |k: usize| rels.iter().filter(|r| r.degree == k).count();
    if rels.len() != 4 || of_degree(2) != 1 || of_degree(3) != 3 {
        failures.push(format!("{} circuit relations", rels.len()));
    }
    if line.len() != 1 || !rels.iter().any(|r| r.degree == 2 && equal_up_to_sign(&r.relation, &deg2(line[0]))) {
        failures.push("degree-2 relation differs".into());
    }
    for &s in points {
        if !rels.iter().any(|r| r.layer == s && equal_up_to_sign(&r.relation, &deg3(s))) {
            failures.push(format!("degree-3 relation at {} differs", arr.poset().name(s)));
        }
    }

    let report = verify(&c);
    if !report.passed() {
        failures.push(format!("verify failed:\n{report}"));
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(30) {
        failures.push(format!("took {elapsed:.2?}"));
    }
    let detail = if failures.is_empty() {
        format!("3 points, 4 relations, dims {}, {elapsed:.2?}", report.quotient)
    } else {
        failures.join("; ")
    };
    Outcome::new(failures.is_empty(), detail)
}

fn criterion_5() -> Outcome {
    let arr = ToricArrangement::new(chars(2, &[&[3, 1], &[0, 1], &[1, 0]]));
    let p = points_through_identity_first(&arr, set(&[0, 1]))[0];
    let got = integral_basis_change(&arr, &sym(p, &[0, 1], &[])).unwrap();
    let want = lincomb(vec![
        (sym(p, &[0, 1], &[]), q(4, 1)),
        (sym(arr.atom(1), &[1], &[0]), q(-2, 3)),
        (sym(arr.atom(0), &[0], &[1]), q(-2, 3)),
        (sym(arr.poset().top(), &[], &[0, 1]), q(1, 3)),
    ]);
    Outcome::new(got == want, format!("{} terms", got.len()))
}

fn primitive(v: &[i64]) -> bool {
    v.iter().fold(0i64, |g, &x| num_integer::gcd(g, x)) == 1
}

fn random_arrangement(rng: &mut ChaCha8Rng, range: i64) -> CharacterMatrix {
    loop {
        let d = rng.gen_range(1..=3);
        let n = rng.gen_range(d..=5);
        let cols: Vec<Vec<i64>> = (0..n)
            .map(|_| loop {
                let v: Vec<i64> = (0..d).map(|_| rng.gen_range(-range..=range)).collect();
                if primitive(&v) {
                    break v;
                }
            })
            .collect();
        let refs: Vec<&[i64]> = cols.iter().map(Vec::as_slice).collect();
        let c = chars(d, &refs);
        if c.matrix().rank() == d {
            return c;
        }
    }
}

/// Direct products of two symbols, computed from the poset.
fn mul(arr: &ToricArrangement, x: &LinComb, y: &LinComb) -> LinComb {
    let mut out = LinComb::zero();
    for (g, a) in x.iter() {
        for (h, b) in y.iter() {
            out.add_scaled(&product(arr, g, h), &(a * b));
        }
    }
    out
}

fn algebra_failures(arr: &ToricArrangement, p: &Presentation) -> Vec<String> {
    let mut failures = Vec::new();
    let gens: Vec<GeneratorSymbol> = p.generators.iter().copied().filter(|g| g.degree() > 0).collect();
    for g in &gens {
        for h in &gens {
            if g.degree() + h.degree() > p.dim {
                continue;
            }
            let gh = product(arr, g, h);
            let sign = if g.degree() * h.degree() % 2 == 1 { -BigRational::one() } else { BigRational::one() };
            if gh != product(arr, h, g).scaled(&sign) {
                failures.push(format!("commutativity {g:?} {h:?}"));
            }
            if gh != p.product(g, h) {
                failures.push(format!("stored product {g:?} {h:?}"));
            }
        }
    }
    let small: Vec<&GeneratorSymbol> = gens.iter().filter(|g| g.degree() == 1).take(12).collect();
    for g in &small {
        for h in &small {
            for k in &small {
                let (g, h, k) = (LinComb::single(**g), LinComb::single(**h), LinComb::single(**k));
                if mul(arr, &mul(arr, &g, &h), &k) != mul(arr, &g, &mul(arr, &h, &k)) {
                    failures.push("associativity".into());
                }
            }
        }
    }
    failures
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut failures = Vec::new();
    let mut vanishing = 0;
    for n in 0..RANDOM_INSTANCES {
        let c = random_arrangement(&mut rng, 3);
        let arr = ToricArrangement::new(c.clone());
        let p = presentation_of(&arr, 0);
        let poin = poincare_polynomial(&arr);
        let quot = quotient_dimensions(&p).0;
        let dec = graded_decomposition_dims(&arr).0;
        if poin != quot || poin != dec {
            failures.push(format!("#{n}: dims {poin:?} {quot:?} {dec:?}"));
        }
        for check in [check_layer_counts(&arr), check_covering_degrees(&arr)] {
            if !check.passed {
                failures.push(format!("#{n}: {}: {}", check.name, check.detail));
            }
        }
        failures.extend(algebra_failures(&arr, &p).into_iter().map(|f| format!("#{n}: {f}")));
        if eval_at_minus_one(&poin) == 0 {
            vanishing += 1;
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(600) {
        failures.push(format!("took {elapsed:.2?}"));
    }
    let mut out = Outcome::new(
        failures.is_empty(),
        if failures.is_empty() {
            format!("{RANDOM_INSTANCES} arrangements: dimensions, layer counts, covering degrees, products ok, {elapsed:.2?}")
        } else {
            failures.into_iter().take(5).collect::<Vec<_>>().join("; ")
        },
    );
    if vanishing != RANDOM_INSTANCES {
        out.unattainable.push(format!(
            "Poin(-1) = 0 held on {vanishing}/{RANDOM_INSTANCES}; for an essential arrangement Poin(-1) = (-1)^d N_d != 0 (arrangement B gives 1 - 5 + 8 = 4)"
        ));
    }
    out
}

fn unimodular_failures(arr: &ToricArrangement) -> Vec<String> {
    let m = arr.matroid();
    let mut failures = Vec::new();
    for c in m.circuits() {
        let general = arr.components_of(c).iter().map(|&l| circuit_relation(arr, c, l)).collect::<Vec<_>>();
        let special = unimodular_circuit_relation(arr, c);
        match (general.as_slice(), special) {
            ([Ok(g)], Ok(s)) if *g == s => {}
            _ => failures.push(format!("circuit {c}")),
        }
    }
    failures
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut instances = 0;
    let mut failures = Vec::new();
    for n in 0..2 * RANDOM_INSTANCES {
        // the second half draws from {-1, 0, 1}, where unimodular instances are common
        let range = if n < RANDOM_INSTANCES { 3 } else { 1 };
        let c = random_arrangement(&mut rng, range);
        let arr = ToricArrangement::new(c);
        if !arr.matroid().is_unimodular() {
            continue;
        }
        instances += 1;
        failures.extend(unimodular_failures(&arr).into_iter().map(|f| format!("#{n}: {f}")));
    }
    let ok = failures.is_empty() && instances > 0;
    Outcome::new(
        ok,
        if ok {
            format!("{instances} unimodular instances agree")
        } else {
            format!("{instances} instances; {}", failures.into_iter().take(5).collect::<Vec<_>>().join("; "))
        },
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("arrangement B dimensions", criterion_1),
        ("arrangement B' dimensions", criterion_2),
        ("golden relations of B", criterion_3),
        ("arrangement C relations and verify", criterion_4),
        ("integral basis change", criterion_5),
        ("random arrangement properties", criterion_6),
        ("unimodular agreement", criterion_7),
    ];
    let mut hard_failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let out = run();
        let status = if out.passed && out.unattainable.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {} {status}  {name}: {}", k + 1, out.detail);
        for note in &out.unattainable {
            println!("    unattainable: {note}");
        }
        if !out.passed {
            hard_failures += 1;
        }
    }
    if hard_failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
