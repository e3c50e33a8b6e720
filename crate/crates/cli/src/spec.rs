use std::collections::BTreeMap;
use std::path::Path;

use num_integer::Integer;
use serde::Deserialize;
use toric_core::CharacterMatrix;

use crate::CliError;

/// Input document: `{"d": 2, "characters": [[3, 1], [0, 1], [1, 0]]}`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrangementSpec {
    pub d: usize,
    pub characters: Vec<Vec<i64>>,
    #[serde(default)]
    pub names: Option<Vec<String>>,
    #[serde(default)]
    pub order: Option<Vec<usize>>,
    #[serde(default = "central_default")]
    pub central: bool,
    /// Display names for layers, keyed by canonical name (`T`, `L2_0`, ...).
    #[serde(default)]
    pub layer_names: BTreeMap<String, String>,
}

fn central_default() -> bool {
    true
}

impl ArrangementSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Malformed(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
        Self::parse(&text)
    }
}

/// A validated arrangement, reordered and normalized as requested.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub characters: CharacterMatrix,
    pub names: Vec<String>,
    pub layer_names: BTreeMap<String, String>,
}

pub fn prepare(spec: &ArrangementSpec, normalize: bool, order: Option<&[usize]>) -> Result<Prepared, CliError> {
    if !spec.central {
        return Err(CliError::NonCentral);
    }
    let n = spec.characters.len();
    let names = match &spec.names {
        Some(names) if names.len() != n => {
            return Err(CliError::Malformed(format!("{} names for {n} characters", names.len())));
        }
        Some(names) => names.clone(),
        None => (0..n).map(|i| i.to_string()).collect(),
    };
    let order: Vec<usize> = match order.or(spec.order.as_deref()) {
        Some(o) => {
            let mut sorted = o.to_vec();
            sorted.sort_unstable();
            if sorted != (0..n).collect::<Vec<_>>() {
                return Err(CliError::Malformed(format!("order {o:?} is not a permutation of 0..{n}")));
            }
            o.to_vec()
        }
        None => (0..n).collect(),
    };
    let mut cols: Vec<Vec<i64>> = order.iter().map(|&i| spec.characters[i].clone()).collect();
    if normalize {
        for c in &mut cols {
            let g = c.iter().fold(0i64, |g, &x| g.gcd(&x));
            if g > 1 {
                c.iter_mut().for_each(|x| *x /= g);
            }
        }
    }
    let refs: Vec<&[i64]> = cols.iter().map(Vec::as_slice).collect();
    let characters = CharacterMatrix::from_characters(spec.d, &refs)?;
    Ok(Prepared {
        characters,
        names: order.iter().map(|&i| names[i].clone()).collect(),
        layer_names: spec.layer_names.clone(),
    })
}
