use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::EngineError;
use crate::lambda_ring::{LambdaElement, Q};
use crate::stability_core::KClass;

/// What a table's values mean.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Flavor {
    #[serde(rename = "ISS")]
    Iss,
    #[serde(rename = "J")]
    J,
    #[serde(rename = "J_OMEGA")]
    JOmega,
}

/// Finite map from classes to invariants. Lookups of absent classes are errors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantTable {
    flavor: Flavor,
    entries: BTreeMap<KClass, LambdaElement>,
}

impl InvariantTable {
    pub fn new(flavor: Flavor) -> Self {
        InvariantTable { flavor, entries: BTreeMap::new() }
    }

    pub fn from_entries<I: IntoIterator<Item = (KClass, LambdaElement)>>(flavor: Flavor, it: I) -> Self {
        InvariantTable { flavor, entries: it.into_iter().collect() }
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn insert(&mut self, class: KClass, value: LambdaElement) {
        self.entries.insert(class, value);
    }

    pub fn get(&self, class: &KClass) -> Result<&LambdaElement, EngineError> {
        self.entries.get(class).ok_or_else(|| EngineError::MissingEntry(class.clone()))
    }

    pub fn entries(&self) -> &BTreeMap<KClass, LambdaElement> {
        &self.entries
    }

    pub fn classes(&self) -> impl Iterator<Item = &KClass> {
        self.entries.keys()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Every J-flavoured value must avoid poles at `ℓ = 1`.
    pub fn check_lambda0(&self) -> Result<(), EngineError> {
        if self.flavor == Flavor::J {
            if let Some((k, _)) = self.entries.iter().find(|(_, v)| !v.in_lambda0()) {
                return Err(EngineError::NotInLambdaZero(k.clone()));
            }
        }
        Ok(())
    }

    /// Apply the projection `ℓ -> 1`, yielding a `J_OMEGA` table.
    pub fn project_omega(&self) -> Result<InvariantTable, EngineError> {
        let mut out = InvariantTable::new(Flavor::JOmega);
        for (k, v) in &self.entries {
            let w = v.project_omega().map_err(|_| EngineError::NotInLambdaZero(k.clone()))?;
            out.insert(k.clone(), LambdaElement::rational(w.0));
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ValueJson {
    Rational(String),
    Lambda(LambdaElement),
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    class: KClass,
    value: ValueJson,
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    flavor: Flavor,
    entries: Vec<EntryJson>,
}

impl Serialize for InvariantTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let entries = self
            .entries
            .iter()
            .map(|(k, v)| {
                let value = match (self.flavor, v.is_laurent() && v.numerator().degree().unwrap_or(0) == 0 && v.ell_shift() == 0) {
                    (Flavor::JOmega, true) => ValueJson::Rational(v.numerator().coeff(0).to_string()),
                    _ => ValueJson::Lambda(v.clone()),
                };
                EntryJson { class: k.clone(), value }
            })
            .collect();
        TableJson { flavor: self.flavor, entries }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for InvariantTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let t = TableJson::deserialize(d)?;
        let mut out = InvariantTable::new(t.flavor);
        for e in t.entries {
            let v = match e.value {
                ValueJson::Rational(s) => LambdaElement::rational(s.parse::<Q>().map_err(|_| serde::de::Error::custom(format!("bad rational {s:?}")))?),
                ValueJson::Lambda(x) => x,
            };
            out.insert(e.class, v);
        }
        Ok(out)
    }
}
