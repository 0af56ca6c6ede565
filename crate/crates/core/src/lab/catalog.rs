use std::collections::{BTreeSet, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::autgroup::decompose_automorphism;
use crate::polycore::json::MapJson;
use crate::polycore::PlanarPolyMap;

/// The catalog shipped with the crate.
pub const BUNDLED_CATALOG: &str = include_str!("../../data/catalog.json");

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tag {
    Keller,
    Automorphism,
    Power,
    Exploratory,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub description: Option<String>,
    pub map: PlanarPolyMap,
    pub tags: BTreeSet<Tag>,
    pub expected_degree: Option<u32>,
}

impl CatalogEntry {
    pub fn has(&self, tag: Tag) -> bool {
        self.tags.contains(&tag)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct MapCatalog {
    pub entries: Vec<CatalogEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("cannot read catalog: {0}")]
    Io(String),
    #[error("schema error at line {line}, field `{field}`: {message}")]
    Schema { line: usize, field: String, message: String },
    #[error("tag mismatch for `{name}`: {reason}")]
    TagMismatch { name: String, reason: String },
    #[error("duplicate map name `{0}`")]
    DuplicateName(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCatalog<'a> {
    #[serde(borrow)]
    maps: Vec<RawEntry<'a>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry<'a> {
    name: String,
    #[serde(default)]
    description: Option<String>,
    tags: Vec<Tag>,
    #[serde(default)]
    expected_degree: Option<u32>,
    #[serde(borrow)]
    map: &'a RawValue,
}

#[derive(Serialize)]
struct EntryOut<'a> {
    name: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    description: Option<&'a str>,
    tags: &'a BTreeSet<Tag>,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected_degree: Option<u32>,
    map: MapJson,
}

fn line_of(text: &str, offset: usize) -> usize {
    text.as_bytes()[..offset.min(text.len())].iter().filter(|&&b| b == b'\n').count() + 1
}

pub fn parse_catalog(path: impl AsRef<Path>) -> Result<MapCatalog, CatalogError> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| CatalogError::Io(format!("{}: {e}", path.as_ref().display())))?;
    parse_catalog_str(&text)
}

pub fn parse_catalog_str(text: &str) -> Result<MapCatalog, CatalogError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawCatalog = serde_path_to_error::deserialize(de).map_err(|e| CatalogError::Schema {
        line: e.inner().line(),
        field: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    let mut seen = HashSet::new();
    let mut entries = Vec::with_capacity(raw.maps.len());
    for (k, r) in raw.maps.into_iter().enumerate() {
        let offset = r.map.get().as_ptr() as usize - text.as_ptr() as usize;
        let field = format!("maps[{k}].map");
        let schema = |message: String| CatalogError::Schema { line: line_of(text, offset), field: field.clone(), message };
        let mj: MapJson = serde_json::from_str(r.map.get()).map_err(|e| schema(e.to_string()))?;
        let map = PlanarPolyMap::try_from(&mj).map_err(|e| schema(e.to_string()))?;
        if !seen.insert(r.name.clone()) {
            return Err(CatalogError::DuplicateName(r.name));
        }
        let entry = CatalogEntry {
            name: r.name,
            description: r.description,
            map,
            tags: r.tags.into_iter().collect(),
            expected_degree: r.expected_degree,
        };
        check_tags(&entry)?;
        entries.push(entry);
    }
    Ok(MapCatalog { entries })
}

/// Tags are claims about the map; each one is re-derived.
fn check_tags(e: &CatalogEntry) -> Result<(), CatalogError> {
    let fail = |reason: String| Err(CatalogError::TagMismatch { name: e.name.clone(), reason });
    let keller = e.map.is_keller();
    if e.has(Tag::Keller) != keller {
        return fail(format!(
            "tagged keller = {}, but det J = {}",
            e.has(Tag::Keller),
            e.map.jacobian_determinant()
        ));
    }
    if e.has(Tag::Automorphism) {
        if !e.has(Tag::Keller) {
            return fail("automorphism without the keller tag".into());
        }
        if let Err(err) = decompose_automorphism(&e.map) {
            return fail(format!("tagged automorphism but {err}"));
        }
        if e.expected_degree.is_some_and(|d| d != 1) {
            return fail("automorphisms have geometric degree 1".into());
        }
    }
    if e.has(Tag::Power) {
        let Some((a, b)) = power_exponents(&e.map) else {
            return fail("tagged power but not of the form (X^a, Y^b)".into());
        };
        if e.expected_degree.is_some_and(|d| d != a * b) {
            return fail(format!("(X^{a}, Y^{b}) has geometric degree {}", a * b));
        }
    }
    Ok(())
}

/// `(a, b)` when the map is exactly `(X^a, Y^b)`.
pub fn power_exponents(f: &PlanarPolyMap) -> Option<(u32, u32)> {
    let single = |p: &crate::polycore::BivariatePolynomial| {
        let mut it = p.terms();
        let (m, c) = it.next()?;
        (it.next().is_none() && num_traits::One::is_one(c)).then_some((m.i, m.j))
    };
    match (single(f.first())?, single(f.second())?) {
        ((a, 0), (0, b)) if a > 0 && b > 0 => Some((a, b)),
        _ => None,
    }
}

impl MapCatalog {
    pub fn bundled() -> Self {
        parse_catalog_str(BUNDLED_CATALOG).expect("bundled catalog is valid")
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.name.as_str()).collect()
    }

    /// Entries carrying `tag`, in catalog order.
    pub fn tagged(&self, tag: Tag) -> Vec<&CatalogEntry> {
        self.entries.iter().filter(|e| e.has(tag)).collect()
    }

    pub fn to_json(&self) -> String {
        let maps: Vec<EntryOut> = self
            .entries
            .iter()
            .map(|e| EntryOut {
                name: &e.name,
                description: e.description.as_deref(),
                tags: &e.tags,
                expected_degree: e.expected_degree,
                map: MapJson::from(&e.map),
            })
            .collect();
        serde_json::to_string_pretty(&serde_json::json!({ "maps": maps })).expect("serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE: &str = r#"["1","1"]"#;
    const ZERO: &str = r#"["0","1"]"#;

    fn entry(name: &str, tags: &str, first: &str, second: &str) -> String {
        format!(
            r#"{{"name":"{name}","tags":{tags},"map":{{"first":{{"terms":[{first}]}},"second":{{"terms":[{second}]}}}}}}"#
        )
    }

    fn term(i: u32, j: u32) -> String {
        format!(r#"{{"i":{i},"j":{j},"re":{ONE},"im":{ZERO}}}"#)
    }

    #[test]
    fn bundled_catalog_roundtrips() {
        let c = MapCatalog::bundled();
        assert_eq!(c.len(), 12);
        assert_eq!(c.tagged(Tag::Automorphism).len(), 6);
        assert_eq!(parse_catalog_str(&c.to_json()).unwrap(), c);
        let t = c.get("translate").unwrap();
        assert_eq!(t.map.second().constant_term(), crate::polycore::GaussianRational::from_fraction_parts(0, 1, 1, 2));
    }

    #[test]
    fn keller_tag_is_checked() {
        let text = format!(r#"{{"maps":[{}]}}"#, entry("sq", r#"["keller"]"#, &term(2, 0), &term(0, 1)));
        assert!(matches!(parse_catalog_str(&text), Err(CatalogError::TagMismatch { name, .. }) if name == "sq"));
        // and the converse: an untagged Keller map
        let text = format!(r#"{{"maps":[{}]}}"#, entry("id", "[]", &term(1, 0), &term(0, 1)));
        assert!(matches!(parse_catalog_str(&text), Err(CatalogError::TagMismatch { .. })));
    }

    #[test]
    fn duplicate_names_rejected() {
        let e = entry("shear", r#"["keller","automorphism"]"#, &term(1, 0), &term(0, 1));
        let text = format!(r#"{{"maps":[{e},{e}]}}"#);
        assert_eq!(parse_catalog_str(&text), Err(CatalogError::DuplicateName("shear".into())));
    }

    #[test]
    fn schema_errors_carry_line_and_field() {
        let text = "{\"maps\":[\n{\"name\":\"a\",\"tags\":[\"bogus\"],\"map\":{}}]}";
        match parse_catalog_str(text) {
            Err(CatalogError::Schema { line, field, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(field, "maps[0].tags[0]");
            }
            other => panic!("{other:?}"),
        }
        let zero = r#"{"i":1,"j":0,"re":["0","1"],"im":["0","1"]}"#;
        let text = format!("{{\"maps\":[\n\n{}]}}", entry("z", "[]", zero, &term(0, 1)));
        match parse_catalog_str(&text) {
            Err(CatalogError::Schema { line, field, message }) => {
                assert_eq!((line, field.as_str()), (3, "maps[0].map"));
                assert!(message.contains("zero coefficient"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn power_tag_requires_power_shape() {
        assert_eq!(power_exponents(&PlanarPolyMap::power(2, 3)), Some((2, 3)));
        assert_eq!(power_exponents(&PlanarPolyMap::identity()), Some((1, 1)));
        let text = format!(r#"{{"maps":[{}]}}"#, entry("p", r#"["power"]"#, &term(1, 1), &term(0, 1)));
        assert!(matches!(parse_catalog_str(&text), Err(CatalogError::TagMismatch { .. })));
    }
}
