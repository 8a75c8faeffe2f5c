//! Exact bag (multiset) relational algebra.
//!
//! A [`Bag`] maps tuples over a [`Schema`] to strictly positive
//! arbitrary-precision multiplicities. Zero-multiplicity tuples are never
//! stored, so the key set of a bag is its support.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json;

/// Multiplicity of a tuple in a bag.
pub type Multiplicity = BigUint;

/// A named attribute. Names are non-empty.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Attribute(String);

impl Attribute {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if name.is_empty() {
            return Err(Error::InvalidAttribute(name));
        }
        Ok(Attribute(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Attribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// An ordered set of attributes, kept sorted by name.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Schema(Vec<Attribute>);

impl Schema {
    pub fn empty() -> Self {
        Schema(Vec::new())
    }

    /// Builds a schema, rejecting duplicate attribute names.
    pub fn new(attrs: impl IntoIterator<Item = Attribute>) -> Result<Self> {
        let mut attrs: Vec<Attribute> = attrs.into_iter().collect();
        attrs.sort();
        if let Some(w) = attrs.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateAttribute(w[0].0.clone()));
        }
        Ok(Schema(attrs))
    }

    pub fn from_names<S: AsRef<str>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let attrs = names
            .into_iter()
            .map(|n| Attribute::new(n.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Schema::new(attrs)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Attribute> + '_ {
        self.0.iter()
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.0
    }

    pub fn contains(&self, a: &Attribute) -> bool {
        self.0.binary_search(a).is_ok()
    }

    pub fn is_subset(&self, other: &Schema) -> bool {
        self.0.iter().all(|a| other.contains(a))
    }

    pub fn union(&self, other: &Schema) -> Schema {
        let mut v: Vec<Attribute> = self.0.iter().chain(other.0.iter()).cloned().collect();
        v.sort();
        v.dedup();
        Schema(v)
    }

    pub fn intersection(&self, other: &Schema) -> Schema {
        Schema(self.0.iter().filter(|a| other.contains(a)).cloned().collect())
    }

    pub fn difference(&self, other: &Schema) -> Schema {
        Schema(self.0.iter().filter(|a| !other.contains(a)).cloned().collect())
    }

    pub fn with(&self, a: Attribute) -> Schema {
        let mut v = self.0.clone();
        if let Err(pos) = v.binary_search(&a) {
            v.insert(pos, a);
        }
        Schema(v)
    }

    pub fn without(&self, a: &Attribute) -> Schema {
        Schema(self.0.iter().filter(|b| *b != a).cloned().collect())
    }

    pub fn names(&self) -> Vec<&str> {
        self.0.iter().map(|a| a.name()).collect()
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.names().join(","))
    }
}

/// An assignment of string values to the attributes of a schema.
///
/// The derived ordering compares tuples lexicographically by attribute name,
/// then by value, which is the canonical order used for serialization.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tuple(BTreeMap<Attribute, String>);

impl Tuple {
    pub fn empty() -> Self {
        Tuple(BTreeMap::new())
    }

    pub fn new(assignments: impl IntoIterator<Item = (Attribute, String)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (a, v) in assignments {
            if map.insert(a.clone(), v).is_some() {
                return Err(Error::DuplicateAttribute(a.0));
            }
        }
        Ok(Tuple(map))
    }

    /// Convenience constructor from `(name, value)` pairs.
    pub fn from_pairs<K: AsRef<str>, V: Into<String>>(
        pairs: impl IntoIterator<Item = (K, V)>,
    ) -> Result<Self> {
        let assignments = pairs
            .into_iter()
            .map(|(k, v)| Ok((Attribute::new(k.as_ref())?, v.into())))
            .collect::<Result<Vec<_>>>()?;
        Tuple::new(assignments)
    }

    pub fn schema(&self) -> Schema {
        Schema(self.0.keys().cloned().collect())
    }

    pub fn conforms_to(&self, schema: &Schema) -> bool {
        self.0.len() == schema.len() && self.0.keys().zip(schema.iter()).all(|(a, b)| a == b)
    }

    pub fn get(&self, a: &Attribute) -> Option<&str> {
        self.0.get(a).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Attribute, &str)> + '_ {
        self.0.iter().map(|(a, v)| (a, v.as_str()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The unique `z`-tuple agreeing with `self` on `z`.
    pub fn project(&self, z: &Schema) -> Result<Tuple> {
        let mut out = BTreeMap::new();
        for a in z.iter() {
            match self.0.get(a) {
                Some(v) => {
                    out.insert(a.clone(), v.clone());
                }
                None => {
                    return Err(Error::SchemaMismatch(format!(
                        "cannot project tuple over {} onto {}",
                        self.schema(),
                        z
                    )))
                }
            }
        }
        Ok(Tuple(out))
    }

    pub(crate) fn project_unchecked(&self, z: &Schema) -> Tuple {
        Tuple(
            z.iter()
                .map(|a| (a.clone(), self.0[a].clone()))
                .collect(),
        )
    }

    /// Merges two tuples that agree on their common attributes.
    pub fn join(&self, other: &Tuple) -> Option<Tuple> {
        let mut out = self.0.clone();
        for (a, v) in &other.0 {
            match out.get(a) {
                Some(w) if w != v => return None,
                Some(_) => {}
                None => {
                    out.insert(a.clone(), v.clone());
                }
            }
        }
        Some(Tuple(out))
    }

    pub(crate) fn with_value(&self, a: Attribute, v: impl Into<String>) -> Tuple {
        let mut out = self.0.clone();
        out.insert(a, v.into());
        Tuple(out)
    }
}

impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(a, v)| format!("{a}={v}")).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// The five size measures of a bag.
#[derive(Clone, Debug, PartialEq)]
pub struct SizeNorms {
    /// Number of tuples with non-zero multiplicity.
    pub support_size: usize,
    /// Largest multiplicity (0 for the empty bag).
    pub multiplicity_bound: BigUint,
    /// Largest `log2(m + 1)` over the support.
    pub multiplicity_size: f64,
    /// Sum of all multiplicities.
    pub unary_size: BigUint,
    /// Sum of `log2(m + 1)` over the support.
    pub binary_size: f64,
}

/// `log2(m + 1)` as a double.
pub fn log2_plus_one(m: &BigUint) -> f64 {
    let n = m + 1u32;
    let bits = n.bits();
    if bits <= 64 {
        let v = n.iter_u64_digits().next().unwrap_or(0);
        return (v as f64).log2();
    }
    let shift = bits - 64;
    let top: BigUint = &n >> shift;
    let v = top.iter_u64_digits().next().unwrap_or(0);
    (v as f64).log2() + shift as f64
}

/// A finite bag over a schema.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bag {
    schema: Schema,
    entries: BTreeMap<Tuple, BigUint>,
}

impl Bag {
    pub fn empty(schema: Schema) -> Self {
        Bag {
            schema,
            entries: BTreeMap::new(),
        }
    }

    /// Builds a bag from explicit entries. Duplicate tuples, zero
    /// multiplicities and non-conforming tuples are rejected.
    pub fn from_entries(
        schema: Schema,
        entries: impl IntoIterator<Item = (Tuple, BigUint)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (t, m) in entries {
            if !t.conforms_to(&schema) {
                return Err(Error::InvalidBag(format!(
                    "tuple {t} does not conform to schema {schema}"
                )));
            }
            if m.is_zero() {
                return Err(Error::InvalidBag(format!("tuple {t} has zero multiplicity")));
            }
            if map.contains_key(&t) {
                return Err(Error::InvalidBag(format!("duplicate tuple {t}")));
            }
            map.insert(t, m);
        }
        Ok(Bag {
            schema,
            entries: map,
        })
    }

    /// Builds a bag by summing multiplicities of repeated tuples and
    /// dropping zeros.
    pub fn accumulate(
        schema: Schema,
        entries: impl IntoIterator<Item = (Tuple, BigUint)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<Tuple, BigUint> = BTreeMap::new();
        for (t, m) in entries {
            if !t.conforms_to(&schema) {
                return Err(Error::InvalidBag(format!(
                    "tuple {t} does not conform to schema {schema}"
                )));
            }
            if m.is_zero() {
                continue;
            }
            *map.entry(t).or_default() += m;
        }
        Ok(Bag {
            schema,
            entries: map,
        })
    }

    /// Shorthand for small literal bags: values are listed in the order of
    /// `names`, which need not be sorted.
    ///
    /// ```
    /// use bagcons::Bag;
    /// let r = Bag::from_rows(&["A", "B"], &[(&["1", "2"], 1), (&["2", "2"], 1)]).unwrap();
    /// assert_eq!(r.support_size(), 2);
    /// ```
    pub fn from_rows(names: &[&str], rows: &[(&[&str], u64)]) -> Result<Self> {
        let attrs = names
            .iter()
            .map(|n| Attribute::new(*n))
            .collect::<Result<Vec<_>>>()?;
        let schema = Schema::new(attrs.clone())?;
        let entries = rows
            .iter()
            .map(|(vals, m)| {
                if vals.len() != attrs.len() {
                    return Err(Error::InvalidBag(format!(
                        "row {vals:?} has {} values for {} attributes",
                        vals.len(),
                        attrs.len()
                    )));
                }
                let t = Tuple::new(
                    attrs
                        .iter()
                        .cloned()
                        .zip(vals.iter().map(|v| v.to_string())),
                )?;
                Ok((t, BigUint::from(*m)))
            })
            .collect::<Result<Vec<_>>>()?;
        Bag::from_entries(schema, entries)
    }

    pub(crate) fn from_map_unchecked(schema: Schema, entries: BTreeMap<Tuple, BigUint>) -> Self {
        debug_assert!(entries
            .iter()
            .all(|(t, m)| !m.is_zero() && t.conforms_to(&schema)));
        Bag { schema, entries }
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn multiplicity(&self, t: &Tuple) -> BigUint {
        self.entries.get(t).cloned().unwrap_or_default()
    }

    pub fn contains(&self, t: &Tuple) -> bool {
        self.entries.contains_key(t)
    }

    /// Entries in canonical tuple order.
    pub fn iter(&self) -> impl Iterator<Item = (&Tuple, &BigUint)> + '_ {
        self.entries.iter()
    }

    pub fn tuples(&self) -> impl Iterator<Item = &Tuple> + '_ {
        self.entries.keys()
    }

    /// Total mass (sum of multiplicities).
    pub fn total(&self) -> BigUint {
        self.entries.values().sum()
    }

    pub fn is_relation(&self) -> bool {
        self.entries.values().all(|m| m.is_one())
    }

    pub fn max_multiplicity(&self) -> BigUint {
        self.entries.values().max().cloned().unwrap_or_default()
    }

    /// Marginal of the bag on `z`: multiplicities of tuples agreeing on `z`
    /// are summed.
    pub fn marginal(&self, z: &Schema) -> Result<Bag> {
        if !z.is_subset(&self.schema) {
            return Err(Error::SchemaMismatch(format!(
                "marginal on {} of a bag over {}",
                z, self.schema
            )));
        }
        let mut out: BTreeMap<Tuple, BigUint> = BTreeMap::new();
        for (t, m) in &self.entries {
            *out.entry(t.project_unchecked(z)).or_default() += m;
        }
        Ok(Bag::from_map_unchecked(z.clone(), out))
    }

    /// Bag join: support is the join of the supports, and the multiplicity
    /// of `t` is `R(t[X]) * S(t[Y])`.
    pub fn join(&self, other: &Bag) -> Bag {
        let common = self.schema.intersection(&other.schema);
        let mut index: BTreeMap<Tuple, Vec<(&Tuple, &BigUint)>> = BTreeMap::new();
        for (s, m) in &other.entries {
            index.entry(s.project_unchecked(&common)).or_default().push((s, m));
        }
        let mut out = BTreeMap::new();
        for (r, rm) in &self.entries {
            if let Some(matches) = index.get(&r.project_unchecked(&common)) {
                for (s, sm) in matches {
                    let t = r.join(s).expect("tuples agree on the common attributes");
                    out.insert(t, rm * *sm);
                }
            }
        }
        Bag::from_map_unchecked(self.schema.union(&other.schema), out)
    }

    /// The support as a relation (every multiplicity set to 1).
    pub fn support(&self) -> Bag {
        Bag::from_map_unchecked(
            self.schema.clone(),
            self.entries.keys().map(|t| (t.clone(), BigUint::one())).collect(),
        )
    }

    /// Bag containment: `self(t) <= other(t)` for every tuple.
    pub fn is_contained_in(&self, other: &Bag) -> Result<bool> {
        if self.schema != other.schema {
            return Err(Error::SchemaMismatch(format!(
                "bag containment between {} and {}",
                self.schema, other.schema
            )));
        }
        Ok(self
            .entries
            .iter()
            .all(|(t, m)| other.entries.get(t).is_some_and(|n| m <= n)))
    }

    pub fn size_norms(&self) -> SizeNorms {
        let mut norms = SizeNorms {
            support_size: self.entries.len(),
            multiplicity_bound: BigUint::zero(),
            multiplicity_size: 0.0,
            unary_size: BigUint::zero(),
            binary_size: 0.0,
        };
        for m in self.entries.values() {
            let lg = log2_plus_one(m);
            if *m > norms.multiplicity_bound {
                norms.multiplicity_bound = m.clone();
            }
            norms.multiplicity_size = norms.multiplicity_size.max(lg);
            norms.unary_size += m;
            norms.binary_size += lg;
        }
        norms
    }

    /// Active domain of an attribute: values it takes in the support.
    pub fn active_domain(&self, a: &Attribute) -> Vec<String> {
        let mut vals: Vec<String> = self
            .entries
            .keys()
            .filter_map(|t| t.get(a).map(str::to_string))
            .collect();
        vals.sort();
        vals.dedup();
        vals
    }

    /// Canonical JSON form.
    pub fn to_json(&self) -> Value {
        let tuples: Vec<Value> = self
            .entries
            .iter()
            .map(|(t, m)| {
                let values: serde_json::Map<String, Value> = t
                    .iter()
                    .map(|(a, v)| (a.name().to_string(), Value::String(v.to_string())))
                    .collect();
                json!({ "values": values, "mult": m.to_string() })
            })
            .collect();
        json!({ "schema": self.schema.names(), "tuples": tuples })
    }

    pub fn from_json(value: &Value) -> Result<Bag> {
        Bag::from_json_at(value, "$")
    }

    pub(crate) fn from_json_at(value: &Value, path: &str) -> Result<Bag> {
        let obj = json::object(value, path)?;
        let schema_path = format!("{path}.schema");
        let names = json::string_array(json::field(obj, "schema", path)?, &schema_path)?;
        let schema = Schema::from_names(&names).map_err(|e| json::err(&schema_path, e))?;
        let tuples_path = format!("{path}.tuples");
        let tuples = json::array(json::field(obj, "tuples", path)?, &tuples_path)?;
        let mut entries = BTreeMap::new();
        for (i, tv) in tuples.iter().enumerate() {
            let tp = format!("{tuples_path}[{i}]");
            let tobj = json::object(tv, &tp)?;
            let vp = format!("{tp}.values");
            let vals = json::object(json::field(tobj, "values", &tp)?, &vp)?;
            let mut assignments = Vec::with_capacity(vals.len());
            for (k, v) in vals {
                let a = Attribute::new(k.as_str()).map_err(|e| json::err(&vp, e))?;
                let s = json::string(v, &format!("{vp}.{k}"))?;
                assignments.push((a, s.to_string()));
            }
            let t = Tuple::new(assignments).map_err(|e| json::err(&vp, e))?;
            if !t.conforms_to(&schema) {
                return Err(json::err(
                    &vp,
                    format!("tuple attributes {} do not match schema {}", t.schema(), schema),
                ));
            }
            let mp = format!("{tp}.mult");
            let m = json::multiplicity(json::field(tobj, "mult", &tp)?, &mp)?;
            if m.is_zero() {
                return Err(json::err(&mp, "multiplicity must be positive"));
            }
            if entries.insert(t, m).is_some() {
                return Err(json::err(&tp, "duplicate tuple"));
            }
        }
        Ok(Bag::from_map_unchecked(schema, entries))
    }
}

impl fmt::Display for Bag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(t, m)| format!("{t}:{m}"))
            .collect();
        write!(f, "{}{{{}}}", self.schema, parts.join(", "))
    }
}
