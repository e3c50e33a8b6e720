//! Command-line front end for `toric-core`.
//!
//! Every command reads an [`ArrangementSpec`] and renders its result either as
//! text or as a JSON document tagged with [`SCHEMA`].

pub mod presentation_json;
pub mod spec;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use toric_core::{build_presentation, poincare_polynomial, verify, GradedDims, Subset, ToricArrangement};

pub use presentation_json::{from_json as presentation_from_json, Namer};
pub use spec::{prepare, ArrangementSpec, Prepared};

pub const SCHEMA: &str = "toric-os/1";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {0}: {1}")]
    Io(String, std::io::Error),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("non-central arrangements are not supported")]
    NonCentral,
    #[error("{0}")]
    Arrangement(#[from] toric_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Matroid,
    Layers,
    Poincare,
    Presentation,
    Verify,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Rendered result and the exit status it should produce.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub body: String,
    pub status: u8,
}

impl Output {
    fn ok(body: String) -> Self {
        Output { body, status: 0 }
    }
}

pub fn run(command: Command, prepared: &Prepared, format: Format) -> Output {
    match command {
        Command::Matroid => matroid(prepared, format),
        Command::Layers => layers(prepared, format),
        Command::Poincare => poincare(prepared, format),
        Command::Presentation => presentation(prepared, format),
        Command::Verify => verify_command(prepared, format),
    }
}

fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn matroid(p: &Prepared, format: Format) -> Output {
    let arr = ToricArrangement::new(p.characters.clone());
    let m = arr.matroid();
    let circuits: Vec<(Subset, Vec<BigInt>)> = m
        .circuits()
        .into_iter()
        .map(|c| {
            let dep = m.circuit_dependency(c).expect("circuit");
            (c, c.iter().map(|i| dep.coefficient(i).clone()).collect())
        })
        .collect();
    let table: Vec<(Subset, usize, BigInt)> = m
        .ground()
        .subsets()
        .map(|s| (s, m.rank(s).expect("in ground set"), m.multiplicity(s).expect("in ground set")))
        .collect();
    let rank = m.rank(m.ground()).expect("ground set");
    match format {
        Format::Json => Output::ok(pretty(&json!({
            "schema": SCHEMA,
            "command": "matroid",
            "d": p.characters.dim(),
            "names": p.names,
            "rank": rank,
            "unimodular": m.is_unimodular(),
            "circuits": circuits.iter().map(|(c, n)| json!({
                "elements": c.elements(),
                "dependency": n.iter().map(int).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "multiplicities": table.iter().map(|(s, r, x)| json!({
                "subset": s.elements(),
                "rank": r,
                "multiplicity": int(x),
            })).collect::<Vec<_>>(),
        }))),
        Format::Text => {
            let mut out = format!("rank {rank}\nunimodular {}\ncircuits\n", m.is_unimodular());
            for (c, n) in &circuits {
                let names: Vec<&str> = c.iter().map(|i| p.names[i].as_str()).collect();
                let coeffs: Vec<String> = n.iter().map(BigInt::to_string).collect();
                out += &format!("  {c} [{}]: {}\n", names.join(", "), coeffs.join(" "));
            }
            out += "multiplicities\n";
            for (s, r, x) in &table {
                out += &format!("  {s} rank {r} m {x}\n");
            }
            Output::ok(out)
        }
    }
}

fn layers(p: &Prepared, format: Format) -> Output {
    let arr = ToricArrangement::new(p.characters.clone());
    let namer = Namer {
        arr: &arr,
        overrides: &p.layer_names,
    };
    let poset = arr.poset();
    match format {
        Format::Json => {
            let nodes: Vec<Value> = poset
                .layers()
                .iter()
                .enumerate()
                .map(|(id, l)| {
                    json!({
                        "name": namer.layer(id),
                        "codim": l.codim(),
                        "support": l.support().elements(),
                        "translation": l.translation().coords().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                        "direction": l.direction().columns().iter()
                            .map(|c| c.iter().map(int).collect::<Vec<_>>())
                            .collect::<Vec<_>>(),
                    })
                })
                .collect();
            let covers: Vec<Value> = poset
                .covers()
                .iter()
                .map(|&(w, l)| json!([namer.layer(w), namer.layer(l)]))
                .collect();
            Output::ok(pretty(&json!({
                "schema": SCHEMA,
                "command": "layers",
                "layers": nodes,
                "covers": covers,
            })))
        }
        Format::Text => {
            let mut out = String::new();
            for (id, l) in poset.layers().iter().enumerate() {
                out += &format!(
                    "{}  codim {}  support {}  translation {}\n",
                    namer.layer(id),
                    l.codim(),
                    l.support(),
                    l.translation()
                );
            }
            for &(w, l) in poset.covers() {
                out += &format!("{} < {}\n", namer.layer(w), namer.layer(l));
            }
            Output::ok(out)
        }
    }
}

fn poincare(p: &Prepared, format: Format) -> Output {
    let arr = ToricArrangement::new(p.characters.clone());
    let coeffs = poincare_polynomial(&arr);
    match format {
        Format::Json => Output::ok(pretty(&json!({
            "schema": SCHEMA,
            "command": "poincare",
            "coefficients": coeffs,
        }))),
        Format::Text => Output::ok(format!("{coeffs:?}\n")),
    }
}

fn presentation(p: &Prepared, format: Format) -> Output {
    let (arr, pres) = build_presentation(&p.characters);
    let namer = Namer {
        arr: &arr,
        overrides: &p.layer_names,
    };
    match format {
        Format::Json => Output::ok(pretty(&presentation_json::to_json(&namer, &pres))),
        Format::Text => {
            let mut out = String::new();
            if pres.deficit > 0 {
                out += &format!("tensor factor: cohomology of a {}-dimensional torus\n", pres.deficit);
            }
            out += "generators\n";
            for k in 0..=pres.dim {
                let names: Vec<String> = pres.generators_of_degree(k).map(|g| namer.symbol(g)).collect();
                out += &format!("  degree {k} ({}): {}\n", names.len(), names.join(" "));
            }
            out += &format!("products: {} nonzero rules\n", pres.product_rules.len());
            out += "torus relations\n";
            for r in &pres.toro_relations {
                out += &format!("  {} = 0\n", namer.render(r));
            }
            out += "circuit relations\n";
            for r in &pres.circuit_relations {
                out += &format!(
                    "  X = {} at {}: {} = 0\n",
                    r.subset,
                    namer.layer(r.layer),
                    namer.render(&r.relation)
                );
            }
            Output::ok(out)
        }
    }
}

fn dims(d: &GradedDims) -> Value {
    json!(d.as_slice())
}

fn verify_command(p: &Prepared, format: Format) -> Output {
    let report = verify(&p.characters);
    let status = if report.passed() { 0 } else { 1 };
    let body = match format {
        Format::Json => pretty(&json!({
            "schema": SCHEMA,
            "command": "verify",
            "poincare": report.poincare,
            "quotient": dims(&report.quotient),
            "decomposition": dims(&report.decomposition),
            "dims_agree": report.dims_agree(),
            "checks": report.checks.iter().map(|c| json!({
                "name": c.name,
                "passed": c.passed,
                "detail": c.detail,
            })).collect::<Vec<_>>(),
            "passed": report.passed(),
        })),
        Format::Text => format!("{report}\n"),
    };
    Output { body, status }
}
