//! Standard Seifert fibrations of S^3, the induced action on the base of the Hopf
//! fibration, base 2-orbifolds and fibration-preserving isometries.
//!
//! The base S^2 is the set of unit imaginary quaternions and the Hopf map is
//! h -> h^-1 i h. With this model (p, q) with p in S^1 acts on the base by the
//! rotation x -> q x q^-1, and p in S^1 j composes that rotation with the antipodal map.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use serde_json::json;
use thiserror::Error;

use crate::cyclo::{CycloNumber, Field};
use crate::duval::{build, DuvalError, FamilyId, FamilySpec, ProductGroup};
use crate::isometry::{coset_quotient, pair_generators, IdentityComponent, IsometryError, LieDescriptor, NormalizerQuotient, SideNorm};
use crate::quat::{qconj, qmul, Quaternion, UnitQuaternion};
use crate::recognize::{recognize, CayleyTable, FiniteGroupId};

#[derive(Debug, Error)]
pub enum FibrationError {
    #[error(transparent)]
    Duval(#[from] DuvalError),
    #[error(transparent)]
    Isometry(#[from] IsometryError),
    #[error("{group} does not preserve the Hopf fibration (preserved: {})", if .preserved.is_empty() { "none".to_string() } else { .preserved.join(", ") })]
    NotHopf { group: String, preserved: Vec<String> },
    #[error("set of O(3) elements is not closed under multiplication")]
    NotClosed,
    #[error("invalid fibration z1^{u}/z2^{v}: exponents must be positive and coprime")]
    BadExponents { u: u32, v: u32 },
    #[error("cannot parse signature {0:?}")]
    Parse(String),
}

/// The fibration of S^3 with projection z1^u / z2^v, or conj(z1)^u / z2^v when `conjugated`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StandardFibration {
    u: u32,
    v: u32,
    conjugated: bool,
}

impl StandardFibration {
    pub const HOPF: StandardFibration = StandardFibration { u: 1, v: 1, conjugated: false };
    pub const ANTI_HOPF: StandardFibration = StandardFibration { u: 1, v: 1, conjugated: true };

    pub fn new(u: u32, v: u32, conjugated: bool) -> Result<StandardFibration, FibrationError> {
        if u == 0 || v == 0 || u.gcd(&v) != 1 {
            return Err(FibrationError::BadExponents { u, v });
        }
        Ok(StandardFibration { u, v, conjugated })
    }

    pub fn u(&self) -> u32 {
        self.u
    }

    pub fn v(&self) -> u32 {
        self.v
    }

    pub fn conjugated(&self) -> bool {
        self.conjugated
    }

    pub fn is_hopf_type(&self) -> bool {
        self.u == 1 && self.v == 1
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({"u": self.u, "v": self.v, "conjugated": self.conjugated, "name": self.to_string()})
    }
}

impl fmt::Display for StandardFibration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z1 = if self.conjugated { "conj(z1)" } else { "z1" };
        let pow = |x: u32| if x == 1 { String::new() } else { format!("^{}", x) };
        write!(f, "{}{}/z2{}", z1, pow(self.u), pow(self.v))
    }
}

/// Whether every element of `g` maps fibers of `fib` to fibers.
pub fn preserves_fibration(g: &ProductGroup, fib: StandardFibration) -> bool {
    // conjugating by h -> conj(h) exchanges the two factors
    let side = |p: &UnitQuaternion| p.in_circle() || p.in_circle_j();
    g.quat_pairs().all(|(a, b)| {
        let (p, q) = if fib.conjugated { (b, a) } else { (a, b) };
        if fib.is_hopf_type() {
            side(p)
        } else {
            (p.in_circle() && q.in_circle()) || (p.in_circle_j() && q.in_circle_j())
        }
    })
}

pub type Vec3 = [CycloNumber; 3];

fn imaginary(q: &Quaternion) -> Vec3 {
    let [_, b, c, d] = q.real_parts();
    [b, c, d]
}

fn pure(field: &Field, v: &Vec3) -> Quaternion {
    Quaternion::from_real_parts(&field.zero(), &v[0], &v[1], &v[2])
}

/// conj(h) i h, the Hopf image of h scaled by |h|^2.
pub fn hopf_point(h: &Quaternion) -> Vec3 {
    let f = h.field().clone();
    imaginary(&qmul(&qmul(&qconj(h), &Quaternion::i(&f)), h))
}

fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [&(&a[1] * &b[2]) - &(&a[2] * &b[1]), &(&a[2] * &b[0]) - &(&a[0] * &b[2]), &(&a[0] * &b[1]) - &(&a[1] * &b[0])]
}

fn dot(a: &Vec3, b: &Vec3) -> CycloNumber {
    &(&(&a[0] * &b[0]) + &(&a[1] * &b[1])) + &(&a[2] * &b[2])
}

/// Whether two nonzero vectors point the same way.
pub fn same_direction(a: &Vec3, b: &Vec3) -> bool {
    cross(a, b).iter().all(|x| x.is_zero()) && dot(a, b).real_sign() == std::cmp::Ordering::Greater
}

/// x -> sign * (q x q^-1) on the unit imaginary quaternions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct O3Element {
    sign: i8,
    rotation: UnitQuaternion,
}

impl fmt::Debug for O3Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O3[{}, {:?}]", self.sign, self.rotation)
    }
}

impl O3Element {
    pub fn new(sign: i8, rotation: UnitQuaternion) -> O3Element {
        let rotation = if rotation.quat().leading_sign() == std::cmp::Ordering::Less { rotation.neg() } else { rotation };
        O3Element { sign: if sign < 0 { -1 } else { 1 }, rotation }
    }

    pub fn identity(field: &Field) -> O3Element {
        O3Element::new(1, UnitQuaternion::one(field))
    }

    pub fn antipodal(field: &Field) -> O3Element {
        O3Element::new(-1, UnitQuaternion::one(field))
    }

    /// The action on the base of (p, q) when p lies in S^1 or S^1 j.
    pub fn induced(p: &UnitQuaternion, q: &UnitQuaternion) -> Option<O3Element> {
        if p.in_circle() {
            Some(O3Element::new(1, q.clone()))
        } else if p.in_circle_j() {
            Some(O3Element::new(-1, q.clone()))
        } else {
            None
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn rotation(&self) -> &UnitQuaternion {
        &self.rotation
    }

    pub fn field(&self) -> &Field {
        self.rotation.field()
    }

    pub fn mul(&self, o: &O3Element) -> O3Element {
        O3Element::new(self.sign * o.sign, self.rotation.mul(&o.rotation))
    }

    pub fn inv(&self) -> O3Element {
        O3Element::new(self.sign, self.rotation.inv())
    }

    pub fn is_identity(&self) -> bool {
        self.sign == 1 && self.is_central_rotation()
    }

    fn is_central_rotation(&self) -> bool {
        self.rotation.is_one() || self.rotation.is_minus_one()
    }

    pub fn apply(&self, v: &Vec3) -> Vec3 {
        let f = self.field().clone();
        let q = self.rotation.quat();
        let w = imaginary(&qmul(&qmul(q, &pure(&f, v)), &qconj(q)));
        if self.sign < 0 {
            w.map(|x| -x)
        } else {
            w
        }
    }

    /// Columns are the images of i, j, k.
    pub fn matrix(&self) -> [[CycloNumber; 3]; 3] {
        let f = self.field().clone();
        let (o, z) = (f.one(), f.zero());
        let cols = [[o.clone(), z.clone(), z.clone()], [z.clone(), o.clone(), z.clone()], [z.clone(), z, o]].map(|e| self.apply(&e));
        std::array::from_fn(|r| std::array::from_fn(|c| cols[c][r].clone()))
    }

    /// The rotation axis (not normalized), or None for +-identity.
    pub fn axis(&self) -> Option<Vec3> {
        (!self.is_central_rotation()).then(|| imaginary(self.rotation.quat()))
    }

    /// Dimension of the +1 eigenspace on R^3.
    pub fn fixed_dimension(&self) -> usize {
        match (self.sign, self.is_central_rotation()) {
            (1, true) => 3,
            (1, false) => 1,
            (_, true) => 0,
            // -R fixes a plane exactly when R is a half turn
            (_, false) => {
                if self.rotation.quat().real_parts()[0].is_zero() {
                    2
                } else {
                    0
                }
            }
        }
    }

    pub fn is_reflection(&self) -> bool {
        self.fixed_dimension() == 2
    }

    pub fn is_fixed_point_free(&self) -> bool {
        self.fixed_dimension() == 0
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({"sign": self.sign, "rotation": self.rotation.quat().to_json()})
    }
}

/// A finite subgroup of O(3), closed under multiplication.
#[derive(Debug, Clone)]
pub struct O3Group {
    elements: Vec<O3Element>,
    index: HashMap<O3Element, u32>,
}

impl O3Group {
    pub fn new(elements: impl IntoIterator<Item = O3Element>) -> Result<O3Group, FibrationError> {
        let mut list = Vec::new();
        let mut index = HashMap::new();
        for e in elements {
            if !index.contains_key(&e) {
                index.insert(e.clone(), list.len() as u32);
                list.push(e);
            }
        }
        if list.is_empty() {
            return Err(FibrationError::NotClosed);
        }
        for a in &list {
            for b in &list {
                if !index.contains_key(&a.mul(b)) {
                    return Err(FibrationError::NotClosed);
                }
            }
        }
        Ok(O3Group { elements: list, index })
    }

    pub fn elements(&self) -> &[O3Element] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, e: &O3Element) -> bool {
        self.index.contains_key(e)
    }

    pub fn is_orientation_preserving(&self) -> bool {
        self.elements.iter().all(|e| e.sign == 1)
    }
}

/// The finite group acting on the base of the Hopf fibration.
pub fn induced_o3_action(g: &ProductGroup) -> Result<O3Group, FibrationError> {
    let mut out = Vec::new();
    for (p, q) in g.quat_pairs() {
        match O3Element::induced(p, q) {
            Some(e) => out.push(e),
            None => return Err(not_hopf(g, "group".to_string())),
        }
    }
    O3Group::new(out)
}

fn not_hopf(g: &ProductGroup, group: String) -> FibrationError {
    let mut preserved = Vec::new();
    if preserves_fibration(g, StandardFibration::ANTI_HOPF) {
        preserved.push(StandardFibration::ANTI_HOPF.to_string());
    }
    for (u, v) in [(1, 2), (2, 1)] {
        for c in [false, true] {
            let fib = StandardFibration { u, v, conjugated: c };
            if preserves_fibration(g, fib) {
                preserved.push(fib.to_string());
            }
        }
    }
    FibrationError::NotHopf { group, preserved }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaseSurface {
    S2,
    RP2,
    D2,
}

impl BaseSurface {
    pub fn name(&self) -> &'static str {
        match self {
            BaseSurface::S2 => "S2",
            BaseSurface::RP2 => "RP2",
            BaseSurface::D2 => "D2",
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        match self {
            BaseSurface::S2 => 2,
            BaseSurface::RP2 | BaseSurface::D2 => 1,
        }
    }
}

/// A closed 2-orbifold: underlying surface, cone points and corner reflectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature2D {
    pub base: BaseSurface,
    pub cone: Vec<u32>,
    pub corner: Vec<u32>,
}

impl Signature2D {
    pub fn new(base: BaseSurface, mut cone: Vec<u32>, mut corner: Vec<u32>) -> Result<Signature2D, FibrationError> {
        cone.sort_unstable();
        corner.sort_unstable();
        if cone.iter().chain(&corner).any(|&k| k < 2) || (base != BaseSurface::D2 && !corner.is_empty()) {
            return Err(FibrationError::Parse(format!("{:?} {:?} {:?}", base, cone, corner)));
        }
        Ok(Signature2D { base, cone, corner })
    }

    pub fn orbifold_euler_characteristic(&self) -> Ratio<i64> {
        let one = Ratio::from_integer(1);
        let mut chi = Ratio::from_integer(self.base.euler_characteristic());
        for &n in &self.cone {
            chi -= one - Ratio::new(1, n as i64);
        }
        for &m in &self.corner {
            chi -= (one - Ratio::new(1, m as i64)) / 2;
        }
        chi
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({"base": self.base.name(), "cone": self.cone, "corner": self.corner})
    }
}

impl fmt::Display for Signature2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[u32]| v.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",");
        f.write_str(self.base.name())?;
        match self.base {
            BaseSurface::D2 if !(self.cone.is_empty() && self.corner.is_empty()) => {
                write!(f, "({};{})", list(&self.cone), list(&self.corner))
            }
            _ if !self.cone.is_empty() => write!(f, "({})", list(&self.cone)),
            _ => Ok(()),
        }
    }
}

impl FromStr for Signature2D {
    type Err = FibrationError;

    fn from_str(s: &str) -> Result<Signature2D, FibrationError> {
        let err = || FibrationError::Parse(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let t = t.replace('²', "2").replace("ℝP", "RP");
        let (head, body) = match t.find('(') {
            Some(k) => (&t[..k], t[k + 1..].strip_suffix(')').ok_or_else(err)?),
            None => (t.as_str(), ""),
        };
        let base = match head {
            "S2" => BaseSurface::S2,
            "RP2" => BaseSurface::RP2,
            "D2" => BaseSurface::D2,
            _ => return Err(err()),
        };
        let nums = |x: &str| -> Result<Vec<u32>, FibrationError> {
            x.split(',').filter(|p| !p.is_empty() && *p != "1").map(|p| p.parse().map_err(|_| err())).collect()
        };
        let (cone, corner) = match body.split_once(';') {
            Some((a, b)) => (nums(a)?, nums(b)?),
            None => (nums(body)?, Vec::new()),
        };
        Signature2D::new(base, cone, corner)
    }
}

/// The signature of S^2 / gamma, read off from the stabilizers of rotation poles.
pub fn quotient_signature(gamma: &O3Group) -> Result<Signature2D, FibrationError> {
    let mut poles: Vec<Vec3> = Vec::new();
    for e in gamma.elements() {
        if e.sign != 1 {
            continue;
        }
        if let Some(a) = e.axis() {
            for p in [a.clone(), a.map(|x| -x)] {
                if !poles.iter().any(|q| same_direction(q, &p)) {
                    poles.push(p);
                }
            }
        }
    }
    let mut seen = vec![false; poles.len()];
    let (mut cone, mut corner) = (Vec::new(), Vec::new());
    for k in 0..poles.len() {
        if seen[k] {
            continue;
        }
        let p = &poles[k];
        for e in gamma.elements() {
            let image = e.apply(p);
            if let Some(j) = poles.iter().position(|q| same_direction(q, &image)) {
                seen[j] = true;
            }
        }
        let stab: Vec<&O3Element> = gamma.elements().iter().filter(|e| same_direction(&e.apply(p), p)).collect();
        let rotations = stab.iter().filter(|e| e.sign == 1).count() as u32;
        if stab.iter().any(|e| e.sign == -1) {
            corner.push(rotations);
        } else {
            cone.push(rotations);
        }
    }
    let base = if gamma.elements().iter().any(|e| e.is_reflection()) {
        BaseSurface::D2
    } else if !gamma.is_orientation_preserving() {
        BaseSurface::RP2
    } else {
        BaseSurface::S2
    };
    Signature2D::new(base, cone, corner)
}

fn hopf_group(spec: &FamilySpec) -> Result<ProductGroup, FibrationError> {
    let g = build(spec)?;
    if !preserves_fibration(&g, StandardFibration::HOPF) {
        return Err(not_hopf(&g, spec.label()));
    }
    Ok(g)
}

pub fn base_orbifold(spec: &FamilySpec) -> Result<Signature2D, FibrationError> {
    quotient_signature(&induced_o3_action(&hopf_group(spec)?)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Annotation {
    Reflection,
    Rotation,
}

impl Annotation {
    pub fn name(&self) -> &'static str {
        match self {
            Annotation::Reflection => "reflection",
            Annotation::Rotation => "rotation",
        }
    }
}

/// Isom_p, Isom_f and the action of Isom_p / Isom_f on the base orbifold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibrationIsometries {
    pub isom_p: LieDescriptor,
    pub isom_f: LieDescriptor,
    pub action: LieDescriptor,
    /// for an action of order two on an orientable base: whether it reverses orientation
    pub annotation: Option<Annotation>,
}

impl FibrationIsometries {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "isom_p": self.isom_p.to_json(),
            "isom_f": self.isom_f.to_json(),
            "action": self.action.to_json(),
            "annotation": self.annotation.map(|a| a.name()),
        })
    }
}

fn side_sign(side: &SideNorm, a: u32) -> i8 {
    match side {
        SideNorm::Sphere => 1,
        SideNorm::Circle { .. } => {
            if a == 0 {
                1
            } else {
                -1
            }
        }
        SideNorm::Discrete(h) => {
            if h.element(a).in_circle() {
                1
            } else {
                -1
            }
        }
    }
}

pub fn fibration_isometries(spec: &FamilySpec) -> Result<FibrationIsometries, FibrationError> {
    let g = hopf_group(spec)?;
    let nq = NormalizerQuotient::new(&g, true)?;
    let isom_p = nq.descriptor();
    let trivial = FiniteGroupId::trivial();

    // components of the image in O(3): orientation sign and right component modulo -1
    let right_class = |b: u32| -> u32 {
        match &nq.right {
            SideNorm::Discrete(h) => h.index_of(&h.element(b).neg()).map_or(b, |c| b.min(c)),
            _ => b,
        }
    };
    // fiber rotations (a, +-1) with a in S^1, modulo those already in the group
    let isom_f = match &nq.left {
        SideNorm::Discrete(h) => {
            let gens: Vec<(UnitQuaternion, UnitQuaternion)> = pair_generators(&nq.group)
                .into_iter()
                .map(|(x, y)| (nq.group.left().element(x).clone(), nq.group.right().element(y).clone()))
                .collect();
            let normalizing = h
                .elements()
                .iter()
                .filter(|a| a.in_circle() && gens.iter().all(|(x, y)| nq.group.contains_quat(&a.conj_by(x), y)))
                .count();
            let inside = nq.group.quat_pairs().filter(|(x, y)| x.in_circle() && (y.is_one() || y.is_minus_one())).count();
            LieDescriptor::new(IdentityComponent::Trivial, recognize(&CayleyTable::cyclic(2 * normalizing / inside)))
        }
        _ => LieDescriptor::new(IdentityComponent::S1, trivial.clone()),
    };

    let members: Vec<(i8, u32)> = {
        let mut seen = HashSet::new();
        nq.members
            .iter()
            .map(|&(a, b)| (side_sign(&nq.left, a), right_class(b)))
            .filter(|k| seen.insert(*k))
            .collect()
    };
    let mut image = Vec::new();
    for (x, y) in nq.group.quat_pairs() {
        let sign = if x.in_circle() { 1 } else { -1 };
        let c = nq.right.component(y).ok_or_else(|| IsometryError::Unsupported("right factor outside its normalizer".into()))?;
        let key = (sign, right_class(c));
        if !image.contains(&key) {
            image.push(key);
        }
    }
    let mul = |a: (i8, u32), b: (i8, u32)| (a.0 * b.0, right_class(nq.right.mul(a.1, b.1)));
    let (quotient, label) = coset_quotient(&members, &image, mul)?;
    let action_identity = match nq.right {
        SideNorm::Sphere => IdentityComponent::SO3,
        SideNorm::Circle { .. } => IdentityComponent::S1,
        SideNorm::Discrete(_) => IdentityComponent::Trivial,
    };
    let action = LieDescriptor::new(action_identity, recognize(&quotient));
    let orientable_base = image.iter().all(|k| k.0 == 1);
    let annotation = (action_identity == IdentityComponent::Trivial && quotient.order() == 2 && orientable_base)
        .then(|| members.iter().find(|k| label[k] != 0).map(|k| if k.0 < 0 { Annotation::Reflection } else { Annotation::Rotation }))
        .flatten();
    Ok(FibrationIsometries { isom_p, isom_f, action, annotation })
}

pub fn isom_p(spec: &FamilySpec) -> Result<LieDescriptor, FibrationError> {
    Ok(fibration_isometries(spec)?.isom_p)
}

pub fn isom_f(spec: &FamilySpec) -> Result<LieDescriptor, FibrationError> {
    Ok(fibration_isometries(spec)?.isom_f)
}

pub fn base_action(spec: &FamilySpec) -> Result<(FiniteGroupId, Option<Annotation>), FibrationError> {
    let f = fibration_isometries(spec)?;
    Ok((f.action.pi0, f.annotation))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FibrationKind {
    Standard(StandardFibration),
    /// every z1^u/z2^v and conj(z1)^u/z2^v
    AllStandard,
    /// an isometric copy of the Hopf fibration not among the standard ones
    HopfCopy,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibrationEntry {
    pub kind: FibrationKind,
    /// the group, in fibration-preserving form, inducing this fibration
    pub equivalent_to: Option<String>,
    pub note: Option<String>,
}

impl FibrationEntry {
    fn standard(fib: StandardFibration) -> FibrationEntry {
        FibrationEntry { kind: FibrationKind::Standard(fib), equivalent_to: None, note: None }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let (kind, fib) = match &self.kind {
            FibrationKind::Standard(f) => ("standard", Some(f.to_json())),
            FibrationKind::AllStandard => ("all_standard", None),
            FibrationKind::HopfCopy => ("hopf_copy", None),
        };
        json!({"kind": kind, "fibration": fib, "equivalent_to": self.equivalent_to, "note": self.note})
    }
}

fn label_of(family: &str, m: u32, n: u32, r: u32, s: i64) -> String {
    let family: FamilyId = family.parse().expect("known family");
    FamilySpec { family, m, n, r, s }.label()
}

fn inverse_mod(s: i64, r: u32) -> i64 {
    let r = r as i64;
    (1..=r).find(|t| (s * t).rem_euclid(r) == 1 % r).unwrap_or(0)
}

/// The group with the two factors exchanged, named within the fibration-preserving list.
fn swapped_label(spec: &FamilySpec) -> Option<String> {
    let f = spec.family;
    let (m, n, r, s) = (spec.m, spec.n, spec.r, spec.s);
    match f.num {
        2 | 3 | 4 | 13 | 34 => Some(FamilySpec { family: FamilyId { bis: !f.bis, ..f }, m: n, n: m, ..*spec }.label()),
        1 | 11 => Some(FamilySpec { family: f, m: n, n: m, r, s: inverse_mod(s, r) }.label()),
        10 | 12 | 33 => Some(FamilySpec { family: f, m: n, n: m, r, s }.label()),
        _ => None,
    }
}

/// Additional fibrations from groups that coincide up to conjugation with one of a different form.
fn coincidences(spec: &FamilySpec) -> Vec<(String, &'static str)> {
    let f = spec.family;
    let (m, n, r, s) = (spec.m, spec.n, spec.r, spec.s);
    let copy = "isometric copy of the Hopf fibration";
    let mut out = Vec::new();
    match (f.num, f.primes, f.bis) {
        (1, 0, false) if r == 1 && m == 2 => out.push((label_of("2bis", 1, n, 1, 0), copy)),
        (1, 0, false) if r == 2 && m == 1 => {
            out.push((label_of("3", n, 1, 1, 0), copy));
            out.push((label_of("3bis", 1, n, 1, 0), copy));
        }
        (1, 1, false) if r == 4 && m == 1 => out.push((label_of("34bis", 1, n, 1, 0), copy)),
        (3, 0, false) if m == 1 => out.push((label_of("11", 1, n, 1, 0), copy)),
        (11, 0, false) if m == 2 && r == 1 => out.push((label_of("13", 1, n, 1, 0), copy)),
        (11, 0, false) if m == 1 && r == 2 && s == 1 => out.push((label_of("33", 1, n, 1, 0), copy)),
        (11, 1, false) if m == 1 && r == 4 => out.push((label_of("33p", 1, n, 1, 0), copy)),
        (34, 0, false) if m == 1 => out.push((label_of("11p", 1, n, 2, 1), copy)),
        (3, 0, true) if m == 2 => {
            out.push((label_of("4bis", 1, n, 1, 0), "same group"));
            out.push((label_of("3", n, 2, 1, 0), "anti-Hopf fibration"));
        }
        (4, 0, true) if m == 1 => {
            out.push((label_of("3bis", 2, n, 1, 0), "same group"));
            out.push((label_of("3", n, 2, 1, 0), "anti-Hopf fibration"));
        }
        (2, 0, false) if m == 2 => out.push((label_of("10", 1, n, 1, 0), copy)),
        (10, 0, false) if m == 1 => out.push((label_of("2", 2, n, 1, 0), copy)),
        (4, 0, false) if m == 1 => out.push((label_of("13bis", 1, n, 1, 0), copy)),
        (12, 0, false) if m == 1 => {
            out.push((label_of("13", 1, n, 1, 0), copy));
            out.push((label_of("13bis", 2, n, 1, 0), copy));
        }
        _ => {}
    }
    let pairs: [(&str, u32, &str, u32); 5] = [("5", 2, "14", 1), ("7", 2, "15", 1), ("8", 1, "16", 1), ("9", 2, "19", 1), ("16", 2, "17", 1)];
    for (a, ma, b, mb) in pairs {
        let fa: FamilyId = a.parse().expect("known family");
        let fb: FamilyId = b.parse().expect("known family");
        if f == fa && m == ma {
            out.push((label_of(b, mb, 1, 1, 0), copy));
        } else if f == fb && m == mb {
            out.push((label_of(a, ma, 1, 1, 0), copy));
        }
    }
    out
}

/// Standard fibrations preserved by the built group together with known coincidences.
pub fn list_fibrations(spec: &FamilySpec) -> Result<Vec<FibrationEntry>, FibrationError> {
    let g = build(spec)?;
    let mut out = Vec::new();
    if preserves_fibration(&g, StandardFibration::HOPF) {
        out.push(FibrationEntry::standard(StandardFibration::HOPF));
    }
    if preserves_fibration(&g, StandardFibration::ANTI_HOPF) {
        let mut e = FibrationEntry::standard(StandardFibration::ANTI_HOPF);
        e.equivalent_to = swapped_label(spec);
        if matches!(spec.family.num, 10 | 12) && !spec.family.bis {
            e.note = Some(if spec.m == spec.n { "equivalent to the Hopf fibration" } else { "not equivalent to the Hopf fibration" }.into());
        }
        out.push(e);
    }
    if matches!((spec.family.num, spec.family.primes), (1, _) | (11, _)) {
        out.push(FibrationEntry { kind: FibrationKind::AllStandard, equivalent_to: None, note: None });
        for u in 1..=5 {
            for v in 1..=5 {
                for c in [false, true] {
                    let Ok(fib) = StandardFibration::new(u, v, c) else { continue };
                    if !fib.is_hopf_type() && preserves_fibration(&g, fib) {
                        out.push(FibrationEntry::standard(fib));
                    }
                }
            }
        }
    }
    for (label, note) in coincidences(spec) {
        out.push(FibrationEntry { kind: FibrationKind::HopfCopy, equivalent_to: Some(label), note: Some(note.to_string()) });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::make_field;

    fn spec(family: &str, m: u32, n: u32, r: u32, s: i64) -> FamilySpec {
        FamilySpec::new(family, m, n, r, s).unwrap()
    }

    fn det(m: &[[CycloNumber; 3]; 3]) -> CycloNumber {
        let minor = |a: usize, b: usize, c: usize, d: usize| &(&m[1][a] * &m[2][b]) - &(&m[1][c] * &m[2][d]);
        let t0 = &m[0][0] * &minor(1, 2, 2, 1);
        let t1 = &m[0][1] * &minor(0, 2, 2, 0);
        let t2 = &m[0][2] * &minor(0, 1, 1, 0);
        &(&t0 - &t1) + &t2
    }

    #[test]
    fn fibration_membership() {
        assert!(preserves_fibration(&build(&spec("3", 1, 2, 1, 0)).unwrap(), StandardFibration::HOPF));
        assert!(!preserves_fibration(&build(&FamilySpec::simple("20")).unwrap(), StandardFibration::HOPF));
        let one = build(&spec("1", 1, 2, 3, 1)).unwrap();
        assert!(preserves_fibration(&one, StandardFibration::new(2, 1, false).unwrap()));
        assert!(StandardFibration::new(2, 4, false).is_err());
    }

    #[test]
    fn induced_examples() {
        let f = make_field(8);
        let one = UnitQuaternion::one(&f);
        let i_vec: Vec3 = [f.one(), f.zero(), f.zero()];
        let rot = O3Element::induced(&one, &UnitQuaternion::root(&f, 1, 8).unwrap()).unwrap();
        assert_eq!(rot.apply(&i_vec), i_vec);
        assert_eq!(rot.fixed_dimension(), 1);
        let flip = O3Element::induced(&one, &UnitQuaternion::j(&f)).unwrap();
        assert_eq!(flip.apply(&i_vec), i_vec.clone().map(|x| -x));
        let anti = O3Element::induced(&UnitQuaternion::j(&f), &one).unwrap();
        assert_eq!(anti, O3Element::antipodal(&f));
        assert!(anti.is_fixed_point_free());
        let refl = O3Element::new(-1, UnitQuaternion::k(&f));
        assert!(refl.is_reflection());
        for e in [&rot, &flip, &anti, &refl] {
            assert_eq!(det(&e.matrix()), f.int(e.sign() as i64));
        }
    }

    #[test]
    fn signature_text() {
        for s in ["S2", "S2(2,2,3)", "RP2(3)", "RP2", "D2(2;3)", "D2(;2,2,4)", "D2(3;)", "D2"] {
            assert_eq!(s.parse::<Signature2D>().unwrap().to_string(), s);
        }
        let d: Signature2D = "D2(2;3)".parse().unwrap();
        assert_eq!(d.to_json(), json!({"base": "D2", "cone": [2], "corner": [3]}));
        assert!("S2(;2)".parse::<Signature2D>().is_err());
        assert_eq!("S2(1,1)".parse::<Signature2D>().unwrap().to_string(), "S2");
        assert!("S2(0)".parse::<Signature2D>().is_err());
    }

    #[test]
    fn base_examples() {
        assert_eq!(base_orbifold(&spec("4", 1, 2, 1, 0)).unwrap().to_string(), "S2(2,2,4)");
        assert_eq!(base_orbifold(&spec("10", 1, 3, 1, 0)).unwrap().to_string(), "D2(2;3)");
        assert_eq!(base_orbifold(&spec("11", 1, 1, 3, 1)).unwrap().to_string(), "D2(;3,3)");
        assert_eq!(base_orbifold(&spec("2", 1, 3, 1, 0)).unwrap().to_string(), "S2(2,2,3)");
        assert_eq!(base_orbifold(&spec("2bis", 1, 3, 1, 0)).unwrap().to_string(), "RP2(3)");
        let trivial = O3Group::new([O3Element::identity(&make_field(4))]).unwrap();
        assert_eq!(quotient_signature(&trivial).unwrap().to_string(), "S2");
    }

    #[test]
    fn non_hopf_is_an_error() {
        match base_orbifold(&FamilySpec::simple("20")) {
            Err(FibrationError::NotHopf { preserved, .. }) => assert!(preserved.is_empty()),
            other => panic!("unexpected {:?}", other),
        }
    }

    #[test]
    fn open_set_is_rejected() {
        let f = make_field(8);
        let r = O3Element::new(1, UnitQuaternion::root(&f, 1, 8).unwrap());
        assert!(matches!(O3Group::new([O3Element::identity(&f), r]), Err(FibrationError::NotClosed)));
    }

    #[test]
    fn isometry_examples() {
        let three = fibration_isometries(&spec("3", 1, 3, 1, 0)).unwrap();
        assert_eq!(three.isom_p.to_string(), "(S1, Z2^2)");
        assert_eq!(three.isom_f.to_string(), "(S1, 1)");
        let twelve = fibration_isometries(&spec("12", 2, 2, 1, 0)).unwrap();
        assert_eq!(twelve.isom_p.to_string(), "(Trivial, Z2)");
        assert_eq!(twelve.isom_f.to_string(), "(Trivial, Z2)");
        assert_eq!(twelve.action.to_string(), "(Trivial, 1)");
        let (act, ann) = base_action(&spec("4", 1, 2, 1, 0)).unwrap();
        assert_eq!((act.to_string(), ann), ("Z2".to_string(), Some(Annotation::Reflection)));
        let (act, ann) = base_action(&spec("34", 1, 3, 1, 0)).unwrap();
        assert_eq!((act.to_string(), ann), ("Z2".to_string(), Some(Annotation::Reflection)));
    }

    #[test]
    fn fibration_lists() {
        assert!(list_fibrations(&FamilySpec::simple("20")).unwrap().is_empty());
        let thirteen = list_fibrations(&spec("13", 2, 3, 1, 0)).unwrap();
        let kinds: Vec<_> = thirteen.iter().map(|e| (&e.kind, e.equivalent_to.as_deref())).collect();
        assert_eq!(
            kinds,
            vec![
                (&FibrationKind::Standard(StandardFibration::HOPF), None),
                (&FibrationKind::Standard(StandardFibration::ANTI_HOPF), Some("13bis(m=3,n=2)")),
            ]
        );
        let twelve = list_fibrations(&spec("12", 2, 2, 1, 0)).unwrap();
        assert_eq!(twelve.len(), 2);
        assert_eq!(twelve[1].note.as_deref(), Some("equivalent to the Hopf fibration"));
        let one = list_fibrations(&spec("1", 1, 2, 3, 1)).unwrap();
        assert!(one.iter().any(|e| e.kind == FibrationKind::AllStandard));
        assert!(one.iter().any(|e| e.kind == FibrationKind::Standard(StandardFibration::new(2, 5, true).unwrap())));
    }
}
