//! Values transcribed from Tables 2-5, used only for comparison.

use std::sync::OnceLock;

use serde::Deserialize;

use crate::duval::{FamilyId, FamilySpec};
use crate::fibration::Signature2D;
use crate::isometry::{IdentityComponent, LieDescriptor};
use crate::recognize::FiniteGroupId;

const DATA: &str = include_str!("../data/expected.json");

/// Parameter conditions; absent fields are unconstrained.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct When {
    pub m: Option<u32>,
    pub n: Option<u32>,
    pub r: Option<u32>,
    pub m_min: Option<u32>,
    pub n_min: Option<u32>,
    pub r_min: Option<u32>,
    pub m_parity: Option<String>,
    pub n_parity: Option<String>,
}

impl When {
    pub fn matches(&self, spec: &FamilySpec) -> bool {
        let eq = |want: Option<u32>, got: u32| want.is_none_or(|w| w == got);
        let ge = |want: Option<u32>, got: u32| want.is_none_or(|w| got >= w);
        let parity = |want: &Option<String>, got: u32| match want.as_deref() {
            Some("even") => got % 2 == 0,
            Some("odd") => got % 2 == 1,
            _ => true,
        };
        eq(self.m, spec.m)
            && eq(self.n, spec.n)
            && eq(self.r, spec.r)
            && ge(self.m_min, spec.m)
            && ge(self.n_min, spec.n)
            && ge(self.r_min, spec.r)
            && parity(&self.m_parity, spec.m)
            && parity(&self.n_parity, spec.n)
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sample {
    #[serde(default = "one")]
    pub m: u32,
    #[serde(default = "one")]
    pub n: u32,
    #[serde(default = "one")]
    pub r: u32,
    #[serde(default)]
    pub s: i64,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsomRow {
    pub row: FamilyId,
    #[serde(default)]
    pub group: Option<String>,
    pub isom0: String,
    pub pi0: String,
    pub when: When,
    pub sample: Sample,
}

impl IsomRow {
    pub fn descriptor(&self) -> LieDescriptor {
        let c: IdentityComponent = self.isom0.parse().expect("identity component in table data");
        let p: FiniteGroupId = self.pi0.parse().expect("group name in table data");
        LieDescriptor::new(c, p)
    }

    pub fn sample_spec(&self) -> FamilySpec {
        sample_spec(self.row, &self.sample)
    }
}

pub fn sample_spec(family: FamilyId, s: &Sample) -> FamilySpec {
    let r = if family.uses_rs() { s.r } else { 1 };
    let s_val = if family.uses_rs() { if s.s == 0 && r > 1 { 1 } else { s.s } } else { 0 };
    let spec = FamilySpec { family, m: s.m, n: s.n, r, s: s_val };
    spec.normalized().expect("table sample is a valid spec")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrRule {
    Always,
    MEqN,
    MEqNSmallROrS2Pm1,
    MEqNSmallROrSPm1,
    MEqNS2Pm1,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrRow {
    pub row: FamilyId,
    pub rule: OrRule,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outside {
    pub row: FamilyId,
    pub when: When,
    pub reason: String,
    pub tables: Vec<u8>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseRow {
    pub row: FamilyId,
    #[serde(default)]
    pub group: Option<String>,
    pub when: When,
    pub base: String,
    pub isom_p: LieEntry,
    pub isom_f: LieEntry,
    pub action: LieEntry,
    #[serde(default)]
    pub annotation: Option<String>,
    pub sample: Sample,
}

impl BaseRow {
    pub fn sample_spec(&self) -> FamilySpec {
        sample_spec(self.row, &self.sample)
    }

    /// The tabulated base orbifold at the given parameters.
    pub fn signature(&self, spec: &FamilySpec) -> Signature2D {
        instantiate(&self.base, spec).parse().expect("signature in table data")
    }
}

/// Replaces each {expr} by its value; expr is a product of m, n, r and integers, optionally "/2".
fn instantiate(template: &str, spec: &FamilySpec) -> String {
    let mut out = String::new();
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        let close = open + rest[open..].find('}').expect("closed placeholder");
        out.push_str(&rest[..open]);
        let expr = &rest[open + 1..close];
        let (product, halve) = match expr.strip_suffix("/2") {
            Some(p) => (p, true),
            None => (expr, false),
        };
        let value: u32 = product
            .split('*')
            .map(|f| match f {
                "m" => spec.m,
                "n" => spec.n,
                "r" => spec.r,
                k => k.parse().expect("integer factor"),
            })
            .product();
        out.push_str(&(if halve { value / 2 } else { value }).to_string());
        rest = &rest[close + 1..];
    }
    out.push_str(rest);
    out
}

/// A Lie group as printed in the table, with its (Isom_0, pi_0) reading.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieEntry {
    pub name: String,
    pub isom0: String,
    pub pi0: String,
}

impl LieEntry {
    pub fn descriptor(&self) -> LieDescriptor {
        let c: IdentityComponent = self.isom0.parse().expect("identity component in table data");
        let p: FiniteGroupId = self.pi0.parse().expect("group name in table data");
        LieDescriptor::new(c, p)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tables {
    pub table2: Vec<IsomRow>,
    pub table3: Vec<IsomRow>,
    pub table4: Vec<BaseRow>,
    pub table5: Vec<OrRow>,
    pub outside: Vec<Outside>,
}

pub fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(|| serde_json::from_str(DATA).expect("expected.json parses"))
}

fn key(spec: &FamilySpec) -> FamilyId {
    spec.family.base()
}

/// Whether the spec lies outside what the given table covers.
pub fn outside(spec: &FamilySpec, table: u8) -> Option<&'static str> {
    let spec = &spec.unswapped();
    tables()
        .outside
        .iter()
        .find(|o| o.row == key(spec) && o.tables.contains(&table) && o.when.matches(spec))
        .map(|o| o.reason.as_str())
}

/// The expected (Isom_0, pi_0) from Table 3, falling back to Table 2, with the row used.
pub fn isom_plus(spec: &FamilySpec) -> Option<(LieDescriptor, &'static IsomRow, u8)> {
    let spec = &spec.unswapped();
    let t = tables();
    let k = key(spec);
    for (rows, table) in [(&t.table3, 3u8), (&t.table2, 2u8)] {
        if outside(spec, table).is_some() {
            continue;
        }
        if let Some(row) = rows.iter().find(|row| row.row == k && row.when.matches(spec)) {
            return Some((row.descriptor(), row, table));
        }
    }
    None
}

fn pm1(x: i64, r: i64) -> bool {
    let v = x.rem_euclid(r);
    v == 1 % r || v == (r - 1) % r
}

/// Expected presence of an orientation-reversing isometry according to Table 5.
pub fn or_exists(spec: &FamilySpec) -> Option<bool> {
    let spec = &spec.unswapped();
    if outside(spec, 5).is_some() {
        return None;
    }
    let (m, n, r, s) = (spec.m, spec.n, spec.r as i64, spec.s);
    let row = match tables().table5.iter().find(|row| row.row == key(spec)) {
        Some(row) => row,
        None => return Some(false),
    };
    Some(match row.rule {
        OrRule::Always => true,
        OrRule::MEqN => m == n,
        OrRule::MEqNSmallROrS2Pm1 => m == n && (r <= 2 || pm1(s * s, r)),
        OrRule::MEqNSmallROrSPm1 => m == n && (r <= 2 || pm1(s, r)),
        OrRule::MEqNS2Pm1 => m == n && pm1(s * s, r),
    })
}

/// Table 4 rows matching the spec.
pub fn base_rows(spec: &FamilySpec) -> Vec<&'static BaseRow> {
    if outside(spec, 4).is_some() {
        return Vec::new();
    }
    tables().table4.iter().filter(|row| row.row == spec.family && row.when.matches(spec)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn data_parses_and_samples_are_valid() {
        let t = tables();
        assert!(t.table2.len() >= 40);
        for row in t.table2.iter().chain(&t.table3) {
            let spec = row.sample_spec();
            assert!(row.when.matches(&spec), "{} sample outside its condition", row.row);
            row.descriptor();
        }
        assert!(t.table4.len() >= 40);
        for row in &t.table4 {
            let spec = row.sample_spec();
            assert!(row.when.matches(&spec), "{} sample outside its condition", row.row);
            assert_eq!(base_rows(&spec).first().map(|r| &r.group), Some(&row.group), "{} sample matches an earlier row", row.row);
            row.signature(&spec);
            for e in [&row.isom_p, &row.isom_f, &row.action] {
                e.descriptor();
            }
        }
    }

    #[test]
    fn templates() {
        let spec = FamilySpec::new("11p", 1, 3, 4, 1).unwrap();
        assert_eq!(instantiate("D2(;{n*r/2},{n*r/2})", &spec), "D2(;6,6)");
        let row = base_rows(&FamilySpec::new("1", 1, 1, 1, 0).unwrap())[0];
        assert_eq!(row.signature(&FamilySpec::new("1", 1, 1, 1, 0).unwrap()).to_string(), "S2");
    }

    #[test]
    fn lookups() {
        let (d, _, table) = isom_plus(&FamilySpec::simple("22")).unwrap();
        assert_eq!(table, 2);
        assert_eq!(d.pi0, FiniteGroupId::Dihedral(6));
        let (d, _, table) = isom_plus(&FamilySpec::new("1", 1, 1, 1, 0).unwrap()).unwrap();
        assert_eq!(table, 3);
        assert_eq!(d.identity_component, IdentityComponent::PSO4);
        assert_eq!(or_exists(&FamilySpec::new("1", 1, 1, 5, 2).unwrap()), Some(true));
        assert_eq!(or_exists(&FamilySpec::new("1", 1, 1, 5, 1).unwrap()), Some(true));
        assert_eq!(or_exists(&FamilySpec::new("1", 1, 2, 5, 2).unwrap()), Some(false));
        assert_eq!(or_exists(&FamilySpec::simple("3")), None);
        assert_eq!(or_exists(&FamilySpec::new("3", 1, 2, 1, 0).unwrap()), Some(false));
    }
}
