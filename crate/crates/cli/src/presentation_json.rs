//! Presentation documents and their parser.

use std::collections::{BTreeMap, HashMap};
use std::str::FromStr;

use num_rational::BigRational;
use serde_json::{json, Value};
use toric_core::presentation::CircuitRelation;
use toric_core::{GeneratorSymbol, LinComb, Presentation, Subset, ToricArrangement};

use crate::{CliError, SCHEMA};

/// Maps layer ids to display names.
pub struct Namer<'a> {
    pub arr: &'a ToricArrangement,
    pub overrides: &'a BTreeMap<String, String>,
}

impl Namer<'_> {
    pub fn layer(&self, id: usize) -> String {
        let canonical = self.arr.poset().name(id);
        self.overrides.get(&canonical).cloned().unwrap_or(canonical)
    }

    pub fn symbol(&self, g: &GeneratorSymbol) -> String {
        format!("e[{};{};{}]", self.layer(g.layer), g.a, g.b)
    }

    pub fn render(&self, lc: &LinComb) -> String {
        lc.render(|g| self.symbol(g))
    }
}

fn elements(s: Subset) -> Value {
    json!(s.elements())
}

fn generator(namer: &Namer, g: &GeneratorSymbol) -> Value {
    json!({"layer": namer.layer(g.layer), "a": elements(g.a), "b": elements(g.b)})
}

fn terms(namer: &Namer, lc: &LinComb) -> Value {
    Value::Array(
        lc.iter()
            .map(|(g, c)| json!({"coefficient": c.to_string(), "generator": generator(namer, g)}))
            .collect(),
    )
}

pub fn to_json(namer: &Namer, p: &Presentation) -> Value {
    let layers: Vec<Value> = (0..namer.arr.poset().len())
        .map(|id| json!({"id": id, "name": namer.layer(id), "codim": namer.arr.layer(id).codim()}))
        .collect();
    let generators: Vec<Value> = p.generators.iter().map(|g| generator(namer, g)).collect();
    let products: Vec<Value> = p
        .product_rules
        .iter()
        .map(|((g, h), lc)| json!({"left": generator(namer, g), "right": generator(namer, h), "result": terms(namer, lc)}))
        .collect();
    let toro: Vec<Value> = p.toro_relations.iter().map(|r| terms(namer, r)).collect();
    let circuit: Vec<Value> = p
        .circuit_relations
        .iter()
        .map(|r| {
            json!({
                "subset": elements(r.subset),
                "circuit": elements(r.circuit),
                "layer": namer.layer(r.layer),
                "degree": r.degree,
                "terms": terms(namer, &r.relation),
            })
        })
        .collect();
    json!({
        "schema": SCHEMA,
        "command": "presentation",
        "dim": p.dim,
        "deficit": p.deficit,
        "layers": layers,
        "generators": generators,
        "products": products,
        "toro_relations": toro,
        "circuit_relations": circuit,
    })
}

fn malformed(msg: impl Into<String>) -> CliError {
    CliError::Malformed(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, CliError> {
    v.get(key).ok_or_else(|| malformed(format!("missing field {key:?}")))
}

fn usize_field(v: &Value, key: &str) -> Result<usize, CliError> {
    field(v, key)?
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| malformed(format!("{key:?} is not a nonnegative integer")))
}

fn array<'a>(v: &'a Value, key: &str) -> Result<&'a Vec<Value>, CliError> {
    field(v, key)?.as_array().ok_or_else(|| malformed(format!("{key:?} is not an array")))
}

fn subset(v: &Value, key: &str) -> Result<Subset, CliError> {
    let mut s = Subset::EMPTY;
    for x in array(v, key)? {
        match x.as_u64() {
            Some(i) if i < 64 => s = s.insert(i as usize),
            _ => return Err(malformed(format!("bad element {x} in {key:?}"))),
        }
    }
    Ok(s)
}

struct Parser {
    layers: HashMap<String, usize>,
}

impl Parser {
    fn layer(&self, v: &Value, key: &str) -> Result<usize, CliError> {
        let name = field(v, key)?.as_str().ok_or_else(|| malformed("layer name is not a string"))?;
        self.layers.get(name).copied().ok_or_else(|| malformed(format!("unknown layer {name:?}")))
    }

    fn generator(&self, v: &Value) -> Result<GeneratorSymbol, CliError> {
        Ok(GeneratorSymbol::new(self.layer(v, "layer")?, subset(v, "a")?, subset(v, "b")?))
    }

    fn terms(&self, v: &Value) -> Result<LinComb, CliError> {
        let items = v.as_array().ok_or_else(|| malformed("terms are not an array"))?;
        let mut lc = LinComb::zero();
        for t in items {
            let text = field(t, "coefficient")?.as_str().ok_or_else(|| malformed("coefficient is not a string"))?;
            let c = BigRational::from_str(text).map_err(|_| malformed(format!("bad coefficient {text:?}")))?;
            lc.add_term(self.generator(field(t, "generator")?)?, c);
        }
        Ok(lc)
    }
}

/// Rebuilds a presentation from a document produced by [`to_json`].
pub fn from_json(v: &Value) -> Result<Presentation, CliError> {
    if v.get("schema").and_then(Value::as_str) != Some(SCHEMA) {
        return Err(malformed(format!("expected schema {SCHEMA:?}")));
    }
    let mut layers = HashMap::new();
    for l in array(v, "layers")? {
        let name = field(l, "name")?.as_str().ok_or_else(|| malformed("layer name is not a string"))?;
        layers.insert(name.to_string(), usize_field(l, "id")?);
    }
    let parser = Parser { layers };
    let generators = array(v, "generators")?
        .iter()
        .map(|g| parser.generator(g))
        .collect::<Result<Vec<_>, _>>()?;
    let mut products = BTreeMap::new();
    for p in array(v, "products")? {
        let key = (parser.generator(field(p, "left")?)?, parser.generator(field(p, "right")?)?);
        products.insert(key, parser.terms(field(p, "result")?)?);
    }
    let toro = array(v, "toro_relations")?
        .iter()
        .map(|r| parser.terms(r))
        .collect::<Result<Vec<_>, _>>()?;
    let circuit = array(v, "circuit_relations")?
        .iter()
        .map(|r| {
            Ok(CircuitRelation {
                subset: subset(r, "subset")?,
                circuit: subset(r, "circuit")?,
                layer: parser.layer(r, "layer")?,
                degree: usize_field(r, "degree")?,
                relation: parser.terms(field(r, "terms")?)?,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(Presentation::from_parts(
        usize_field(v, "dim")?,
        usize_field(v, "deficit")?,
        generators,
        products,
        toro,
        circuit,
    ))
}
