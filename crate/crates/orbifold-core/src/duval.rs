//! Finite subgroups of SO(4) as subgroups of S^3 x S^3, family by family.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclo::{make_field, Field};
use crate::groups3::{pm_j_group, standard_group, FinSubgroupS3, GroupError, GroupTag};
use crate::quat::{IsometryS3, Quaternion, UnitQuaternion};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DuvalError {
    #[error("unknown family '{0}'")]
    UnknownFamily(String),
    #[error("family {family}: {condition}")]
    Constraint { family: FamilyId, condition: String },
    #[error("group does not contain the kernel (-1,-1)")]
    KernelMissing,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("internal construction failure: {0}")]
    Internal(String),
}

/// Family label: number, number of primes, and the swapped "bis" variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilyId {
    pub num: u8,
    pub primes: u8,
    pub bis: bool,
}

impl FamilyId {
    pub const fn new(num: u8, primes: u8) -> FamilyId {
        FamilyId { num, primes, bis: false }
    }

    pub const fn bis(num: u8) -> FamilyId {
        FamilyId { num, primes: 0, bis: true }
    }

    /// All families of the classification plus the swapped variants.
    pub fn all() -> Vec<FamilyId> {
        let mut out = Vec::new();
        for num in 1..=34u8 {
            out.push(FamilyId::new(num, 0));
            if matches!(num, 1 | 11 | 21 | 26 | 31 | 32 | 33) {
                out.push(FamilyId::new(num, 1));
            }
            if num == 26 {
                out.push(FamilyId::new(num, 2));
            }
        }
        out.extend([2, 3, 4, 13, 34].map(FamilyId::bis));
        out
    }

    pub fn base(&self) -> FamilyId {
        FamilyId { bis: false, ..*self }
    }

    pub fn uses_mn(&self) -> bool {
        matches!(self.num, 1 | 2 | 3 | 4 | 10 | 11 | 12 | 13 | 33 | 34)
    }

    pub fn uses_m(&self) -> bool {
        self.num <= 19 || self.num >= 33
    }

    pub fn uses_rs(&self) -> bool {
        matches!(self.num, 1 | 11) && self.primes <= 1
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.num)?;
        for _ in 0..self.primes {
            write!(f, "p")?;
        }
        if self.bis {
            write!(f, "bis")?;
        }
        Ok(())
    }
}

impl FromStr for FamilyId {
    type Err = DuvalError;

    fn from_str(s: &str) -> Result<FamilyId, DuvalError> {
        let t = s.trim().replace('′', "p").replace('\'', "p").replace(".bis", "bis").replace(' ', "");
        let (body, bis) = match t.strip_suffix("bis") {
            Some(b) => (b.to_string(), true),
            None => (t.clone(), false),
        };
        let digits: String = body.chars().take_while(|c| c.is_ascii_digit()).collect();
        let rest = &body[digits.len()..];
        let primes = rest.len() as u8;
        if digits.is_empty() || rest.chars().any(|c| c != 'p') {
            return Err(DuvalError::UnknownFamily(s.to_string()));
        }
        let num: u8 = digits.parse().map_err(|_| DuvalError::UnknownFamily(s.to_string()))?;
        let id = FamilyId { num, primes, bis };
        if FamilyId::all().contains(&id) {
            Ok(id)
        } else {
            Err(DuvalError::UnknownFamily(s.to_string()))
        }
    }
}

impl Serialize for FamilyId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FamilyId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<FamilyId, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: FamilyId,
    #[serde(default = "one")]
    pub m: u32,
    #[serde(default = "one")]
    pub n: u32,
    #[serde(default = "one")]
    pub r: u32,
    #[serde(default = "one_i")]
    pub s: i64,
}

fn one() -> u32 {
    1
}

fn one_i() -> i64 {
    1
}

impl FamilySpec {
    pub fn new(family: &str, m: u32, n: u32, r: u32, s: i64) -> Result<FamilySpec, DuvalError> {
        let spec = FamilySpec { family: family.parse()?, m, n, r, s };
        spec.normalized()
    }

    pub fn simple(family: &str) -> FamilySpec {
        FamilySpec::new(family, 1, 1, 1, 1).expect("valid family")
    }

    /// Reduces s modulo r and resets unused parameters to 1; then validates.
    pub fn normalized(mut self) -> Result<FamilySpec, DuvalError> {
        let f = self.family;
        if !f.uses_m() {
            self.m = 1;
        }
        if !f.uses_mn() {
            self.n = 1;
        }
        if f.uses_rs() {
            if self.r == 0 {
                return Err(self.violation("r must be positive"));
            }
            self.s = self.s.rem_euclid(self.r as i64);
        } else {
            self.r = 1;
            self.s = 1;
        }
        validate(&self)?;
        Ok(self)
    }

    fn violation(&self, condition: &str) -> DuvalError {
        DuvalError::Constraint { family: self.family, condition: condition.to_string() }
    }

    pub fn label(&self) -> String {
        let f = self.family;
        let mut parts = Vec::new();
        if f.uses_m() {
            parts.push(format!("m={}", self.m));
        }
        if f.uses_mn() {
            parts.push(format!("n={}", self.n));
        }
        if f.uses_rs() {
            parts.push(format!("r={}", self.r));
            parts.push(format!("s={}", self.s));
        }
        if parts.is_empty() {
            f.to_string()
        } else {
            format!("{}({})", f, parts.join(","))
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("spec serializes")
    }

    /// For a bis family, Xbis(m, n) is X(n, m) with the two factors exchanged, so that m
    /// indexes the left factor as in the fibration tables.
    pub fn unswapped(&self) -> FamilySpec {
        if self.family.bis {
            FamilySpec { family: self.family.base(), m: self.n, n: self.m, ..*self }
        } else {
            *self
        }
    }

    fn base_params(&self) -> (u32, u32, u32, i64) {
        let b = self.unswapped();
        (b.m, b.n, b.r, b.s)
    }
}

fn validate(spec: &FamilySpec) -> Result<(), DuvalError> {
    let (m, n, r, s) = spec.base_params();
    let f = spec.family;
    if m == 0 || n == 0 {
        return Err(spec.violation("m and n must be positive"));
    }
    if f.uses_rs() && (s as u32).gcd(&r) != 1 {
        return Err(spec.violation("gcd(s,r)=1"));
    }
    let odd = |x: u32| x % 2 == 1;
    match (f.num, f.primes) {
        (1, 1) | (11, 1) => {
            if !(odd(m) && odd(n) && r % 2 == 0) {
                return Err(spec.violation("gcd(2,m)=1, gcd(2,n)=1 and gcd(2,r)=2"));
            }
        }
        (33, 0) if m < 2 || n < 2 => return Err(spec.violation("m≠1 and n≠1")),
        (33, 1) => {
            if !(odd(m) && odd(n)) || m < 3 || n < 3 {
                return Err(spec.violation("gcd(2,m)=1, gcd(2,n)=1, m≠1 and n≠1"));
            }
        }
        (34, 0) if !(odd(m) && odd(n)) => return Err(spec.violation("gcd(2,m)=1 and gcd(2,n)=1")),
        _ => {}
    }
    Ok(())
}

/// Descriptor of one side of a 5-tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Side {
    C(u32),
    /// binary dihedral group of the given order; order 4 means {1,-1,j,-j}
    D(u32),
    T,
    O,
    I,
}

impl Side {
    fn conductor(&self) -> u32 {
        match *self {
            Side::C(k) => k,
            Side::D(k) => k,
            Side::T => 8,
            Side::O => 8,
            Side::I => 20,
        }
    }

    fn group(&self, field: &Field) -> Result<Arc<FinSubgroupS3>, GroupError> {
        match *self {
            Side::C(k) => standard_group(GroupTag::Cyclic(k), field),
            Side::D(4) => Ok(pm_j_group(field)),
            Side::D(k) => standard_group(GroupTag::BinDihedral(k), field),
            Side::T => standard_group(GroupTag::BinTetra, field),
            Side::O => standard_group(GroupTag::BinOcta, field),
            Side::I => standard_group(GroupTag::BinIcosa, field),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Gen {
    J,
    /// exp(2 pi i a / b)
    Root(i64, u32),
    /// (1+i+j+k)/2
    Omega,
    /// (1+j)/sqrt(2)
    OctaCoset,
    /// searched element of O* \ T* completing a homomorphism
    OctaSearch,
}

fn gen_value(g: Gen, field: &Field) -> Result<UnitQuaternion, DuvalError> {
    Ok(match g {
        Gen::J => UnitQuaternion::j(field),
        Gen::Root(a, b) => UnitQuaternion::root(field, a, b as u64).map_err(GroupError::from)?,
        Gen::Omega => {
            let h = field.rational(1, 2);
            UnitQuaternion::new(Quaternion::from_real_parts(&h, &h, &h, &h)).map_err(|e| DuvalError::Internal(e.to_string()))?
        }
        Gen::OctaCoset => {
            let h = &field.sqrt2().map_err(GroupError::from)? * &field.rational(1, 2);
            let z = field.zero();
            UnitQuaternion::new(Quaternion::from_real_parts(&h, &z, &h, &z)).map_err(|e| DuvalError::Internal(e.to_string()))?
        }
        Gen::OctaSearch => return Err(DuvalError::Internal("search generator has no fixed value".into())),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Iso {
    /// generator pairs given explicitly
    Gens,
    Identity,
    /// identity on T*, negation on O* \ T*
    OctaTwist,
    /// an outer automorphism of I* of order two
    IcosaOuter,
}

struct Recipe {
    l: Side,
    lk: Side,
    r: Side,
    rk: Side,
    gens: Vec<(Gen, Gen)>,
    iso: Iso,
}

fn recipe(spec: &FamilySpec) -> Recipe {
    let (m, n, r, s) = spec.base_params();
    use Gen::*;
    use Side::*;
    let prod = |l: Side, rr: Side| Recipe { l, lk: l, r: rr, rk: rr, gens: vec![], iso: Iso::Gens };
    let quo = |l, lk, rr, rk, gens: Vec<(Gen, Gen)>| Recipe { l, lk, r: rr, rk, gens, iso: Iso::Gens };
    let map = |l, k, iso| Recipe { l, lk: k, r: l, rk: k, gens: vec![], iso };
    // D*_8 / D*_4 is realized as Q8 / {1,-1,i,-i} with coset representative j
    let d8_over_d4 = |k: u32| if k == 1 { (D(8), C(4), J) } else { (D(8 * k), D(4 * k), Root(1, 4 * k)) };
    let fam = spec.family.base();
    let rec = match (fam.num, fam.primes) {
        (1, 0) => quo(C(2 * m * r), C(2 * m), C(2 * n * r), C(2 * n), vec![(Root(1, 2 * m * r), Root(s, 2 * n * r))]),
        (1, 1) => quo(C(m * r), C(m), C(n * r), C(n), vec![(Root(1, m * r), Root(s, n * r))]),
        (2, _) => prod(C(2 * m), D(4 * n)),
        (3, _) => quo(C(4 * m), C(2 * m), D(4 * n), C(2 * n), vec![(Root(1, 4 * m), J)]),
        (4, _) => {
            let (rr, rk, g) = d8_over_d4(n);
            quo(C(4 * m), C(2 * m), rr, rk, vec![(Root(1, 4 * m), g)])
        }
        (5, _) => prod(C(2 * m), T),
        (6, _) => quo(C(6 * m), C(2 * m), T, D(8), vec![(Root(1, 6 * m), Omega)]),
        (7, _) => prod(C(2 * m), O),
        (8, _) => quo(C(4 * m), C(2 * m), O, T, vec![(Root(1, 4 * m), OctaCoset)]),
        (9, _) => prod(C(2 * m), I),
        (10, _) => prod(D(4 * m), D(4 * n)),
        (11, 0) => quo(
            D(4 * m * r),
            C(2 * m),
            D(4 * n * r),
            C(2 * n),
            vec![(Root(1, 2 * m * r), Root(s, 2 * n * r)), (J, J)],
        ),
        (11, 1) => quo(D(2 * m * r), C(m), D(2 * n * r), C(n), vec![(Root(1, m * r), Root(s, n * r)), (J, J)]),
        (12, _) => {
            let (l, lk, gl) = d8_over_d4(m);
            let (rr, rk, gr) = d8_over_d4(n);
            quo(l, lk, rr, rk, vec![(gl, gr)])
        }
        (13, _) => {
            let (l, lk, gl) = d8_over_d4(m);
            quo(l, lk, D(4 * n), C(2 * n), vec![(gl, J)])
        }
        (14, _) => prod(D(4 * m), T),
        (15, _) => prod(D(4 * m), O),
        (16, _) => quo(D(4 * m), C(2 * m), O, T, vec![(J, OctaCoset)]),
        (17, _) => {
            let (l, lk, gl) = d8_over_d4(m);
            quo(l, lk, O, T, vec![(gl, OctaCoset)])
        }
        (18, _) => quo(D(12 * m), C(2 * m), O, D(8), vec![(Root(1, 6 * m), Omega), (J, OctaSearch)]),
        (19, _) => prod(D(4 * m), I),
        (20, _) => prod(T, T),
        (21, 0) => map(T, C(2), Iso::Identity),
        (21, 1) => map(T, C(1), Iso::Identity),
        (22, _) => quo(T, D(8), T, D(8), vec![(Omega, Omega)]),
        (23, _) => prod(T, O),
        (24, _) => prod(T, I),
        (25, _) => prod(O, O),
        (26, 0) => map(O, C(2), Iso::Identity),
        (26, 1) => map(O, C(1), Iso::Identity),
        (26, _) => map(O, C(1), Iso::OctaTwist),
        (27, _) => map(O, D(8), Iso::Identity),
        (28, _) => map(O, T, Iso::Identity),
        (29, _) => prod(O, I),
        (30, _) => prod(I, I),
        (31, 0) => map(I, C(2), Iso::Identity),
        (31, _) => map(I, C(1), Iso::Identity),
        (32, 0) => map(I, C(2), Iso::IcosaOuter),
        (32, _) => map(I, C(1), Iso::IcosaOuter),
        (33, 0) => quo(D(8 * m), C(2 * m), D(8 * n), C(2 * n), vec![(Root(1, 4 * m), J), (J, Root(1, 4 * n))]),
        (33, _) => quo(D(8 * m), C(m), D(8 * n), C(n), vec![(Root(1, 4 * m), J), (J, Root(1, 4 * n))]),
        (34, _) => quo(C(4 * m), C(m), D(4 * n), C(n), vec![(Root(1, 4 * m), J)]),
        _ => unreachable!("family list is closed"),
    };
    if spec.family.bis {
        Recipe {
            l: rec.r,
            lk: rec.rk,
            r: rec.l,
            rk: rec.lk,
            gens: rec.gens.into_iter().map(|(a, b)| (b, a)).collect(),
            iso: rec.iso,
        }
    } else {
        rec
    }
}

pub fn required_conductor(spec: &FamilySpec) -> u32 {
    let rec = recipe(spec);
    let mut c = 4u32;
    for side in [rec.l, rec.lk, rec.r, rec.rk] {
        c = c.lcm(&side.conductor());
    }
    if [rec.l, rec.r].iter().any(|s| matches!(s, Side::D(4) | Side::D(8))) {
        c = c.lcm(&8);
    }
    c
}

/// A subgroup of S^3 x S^3 stored as index pairs into two finite groups.
#[derive(Clone)]
pub struct ProductGroup {
    left: Arc<FinSubgroupS3>,
    right: Arc<FinSubgroupS3>,
    pairs: Vec<(u32, u32)>,
    members: HashSet<(u32, u32)>,
}

impl fmt::Debug for ProductGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ProductGroup(order {}, |L|={}, |R|={})", self.order(), self.left.order(), self.right.order())
    }
}

impl ProductGroup {
    pub fn from_pairs(left: Arc<FinSubgroupS3>, right: Arc<FinSubgroupS3>, mut pairs: Vec<(u32, u32)>) -> ProductGroup {
        pairs.sort_unstable();
        pairs.dedup();
        let members = pairs.iter().copied().collect();
        ProductGroup { left, right, pairs, members }
    }

    pub fn left(&self) -> &Arc<FinSubgroupS3> {
        &self.left
    }

    pub fn right(&self) -> &Arc<FinSubgroupS3> {
        &self.right
    }

    pub fn field(&self) -> &Field {
        self.left.field()
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    /// Number of pairs, i.e. twice the order of the image in SO(4).
    pub fn order(&self) -> usize {
        self.pairs.len()
    }

    pub fn contains(&self, a: u32, b: u32) -> bool {
        self.members.contains(&(a, b))
    }

    pub fn contains_quat(&self, a: &UnitQuaternion, b: &UnitQuaternion) -> bool {
        match (self.left.index_of(a), self.right.index_of(b)) {
            (Some(x), Some(y)) => self.contains(x, y),
            _ => false,
        }
    }

    pub fn quat_pairs(&self) -> impl Iterator<Item = (&UnitQuaternion, &UnitQuaternion)> {
        self.pairs.iter().map(|&(a, b)| (self.left.element(a), self.right.element(b)))
    }

    pub fn contains_kernel(&self) -> bool {
        match (self.left.minus_one(), self.right.minus_one()) {
            (Some(a), Some(b)) => self.contains(a, b),
            _ => false,
        }
    }

    /// Whether (-1, 1) belongs to the group.
    pub fn contains_minus_one_left(&self) -> bool {
        self.left.minus_one().map(|a| self.contains(a, 0)).unwrap_or(false)
    }

    pub fn is_closed(&self) -> bool {
        self.pairs.iter().all(|&(a, b)| {
            self.pairs.iter().all(|&(c, d)| self.contains(self.left.mul(a, c), self.right.mul(b, d)))
        })
    }

    /// Pairs as a set of quaternion pairs, for comparison across representations.
    pub fn quat_set(&self) -> HashSet<(UnitQuaternion, UnitQuaternion)> {
        self.quat_pairs().map(|(a, b)| (a.clone(), b.clone())).collect()
    }

    pub fn same_set(&self, other: &ProductGroup) -> bool {
        self.order() == other.order() && other.quat_pairs().all(|(a, b)| self.contains_quat(a, b))
    }

    /// The group {(a l a^-1, b r b^-1)}.
    pub fn conjugate(&self, a: &UnitQuaternion, b: &UnitQuaternion) -> ProductGroup {
        let left = Arc::new(crate::groups3::conjugate_group(&self.left, a));
        let right = Arc::new(crate::groups3::conjugate_group(&self.right, b));
        ProductGroup::from_pairs(left, right, self.pairs.clone())
    }

    /// The group {(r, l)} obtained by exchanging the factors.
    pub fn swapped(&self) -> ProductGroup {
        ProductGroup::from_pairs(self.right.clone(), self.left.clone(), self.pairs.iter().map(|&(a, b)| (b, a)).collect())
    }
}

pub fn group_order(g: &ProductGroup) -> Result<usize, DuvalError> {
    if !g.contains_kernel() {
        return Err(DuvalError::KernelMissing);
    }
    Ok(g.order() / 2)
}

pub fn so4_image(g: &ProductGroup) -> Vec<IsometryS3> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (a, b) in g.quat_pairs() {
        let iso = IsometryS3::phi(a.clone(), b.clone());
        if seen.insert(iso.clone()) {
            out.push(iso);
        }
    }
    out
}

fn closure_pairs(
    left: &FinSubgroupS3,
    right: &FinSubgroupS3,
    gens: &[(u32, u32)],
) -> Vec<(u32, u32)> {
    let mut seen: HashSet<(u32, u32)> = HashSet::from([(0, 0)]);
    let mut out = vec![(0u32, 0u32)];
    let mut k = 0;
    while k < out.len() {
        let (a, b) = out[k];
        for &(x, y) in gens {
            let p = (left.mul(a, x), right.mul(b, y));
            if seen.insert(p) {
                out.push(p);
            }
        }
        k += 1;
    }
    out
}

/// A small generating set of a finite group, as indices.
pub fn generators(g: &FinSubgroupS3) -> Vec<u32> {
    let mut order: Vec<u32> = (0..g.order() as u32).collect();
    order.sort_by_key(|&a| std::cmp::Reverse(g.element_order(a)));
    let mut gens = Vec::new();
    let mut span: HashSet<u32> = HashSet::from([0]);
    for a in order {
        if span.len() == g.order() {
            break;
        }
        if !span.contains(&a) {
            gens.push(a);
            span = g.generated(&gens).into_iter().collect();
        }
    }
    gens
}

fn indices_of(ambient: &FinSubgroupS3, sub: &FinSubgroupS3) -> Result<Vec<u32>, DuvalError> {
    sub.elements()
        .iter()
        .map(|q| ambient.index_of(q).ok_or_else(|| DuvalError::Internal("subgroup not contained in ambient group".into())))
        .collect()
}

/// Extends an assignment on generators to a homomorphism g -> h, if it exists.
pub fn extend_hom(g: &FinSubgroupS3, h: &FinSubgroupS3, gens: &[u32], images: &[u32]) -> Option<Vec<u32>> {
    let mut map = vec![u32::MAX; g.order()];
    map[0] = 0;
    let mut queue = vec![0u32];
    let mut k = 0;
    while k < queue.len() {
        let x = queue[k];
        for (&a, &b) in gens.iter().zip(images) {
            let y = g.mul(x, a);
            let v = h.mul(map[x as usize], b);
            if map[y as usize] == u32::MAX {
                map[y as usize] = v;
                queue.push(y);
            } else if map[y as usize] != v {
                return None;
            }
        }
        k += 1;
    }
    if queue.len() != g.order() {
        return None;
    }
    // a consistent word map on a generated group is a homomorphism iff it respects all products
    let n = g.order() as u32;
    for a in 0..n {
        for b in 0..n {
            if map[g.mul(a, b) as usize] != h.mul(map[a as usize], map[b as usize]) {
                return None;
            }
        }
    }
    Some(map)
}

fn octa_twist(o: &FinSubgroupS3) -> Result<Vec<u32>, DuvalError> {
    let t = standard_group(GroupTag::BinTetra, o.field())?;
    let minus = o.minus_one().ok_or_else(|| DuvalError::Internal("O* lacks -1".into()))?;
    Ok((0..o.order() as u32)
        .map(|x| if t.contains(o.element(x)) { x } else { o.mul(x, minus) })
        .collect())
}

/// An automorphism of I* of order two that is not conjugation by an element of I*.
pub fn icosa_outer(g: &FinSubgroupS3) -> Result<Vec<u32>, DuvalError> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<u32>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().expect("automorphism cache poisoned").get(&g.field().conductor()) {
        return Ok(v.clone());
    }
    let gens = generators(g);
    let n = g.order() as u32;
    let candidates: Vec<Vec<u32>> = gens
        .iter()
        .map(|&a| (0..n).filter(|&x| g.element_order(x) == g.element_order(a)).collect())
        .collect();
    let inner: HashSet<Vec<u32>> = (0..n)
        .map(|c| gens.iter().map(|&a| g.mul(g.mul(c, a), g.inv(c))).collect())
        .collect();
    let mut result = None;
    let mut stack = vec![Vec::new()];
    'search: while let Some(prefix) = stack.pop() {
        if prefix.len() == gens.len() {
            if inner.contains(&prefix) {
                continue;
            }
            if let Some(map) = extend_hom(g, g, &gens, &prefix) {
                let bijective = map.iter().collect::<HashSet<_>>().len() == g.order();
                let involution = (0..n).all(|x| map[map[x as usize] as usize] == x);
                if bijective && involution {
                    result = Some(map);
                    break 'search;
                }
            }
            continue;
        }
        for &c in candidates[prefix.len()].iter().rev() {
            let mut p = prefix.clone();
            p.push(c);
            stack.push(p);
        }
    }
    let map = result.ok_or_else(|| DuvalError::Internal("no outer involution of I* found".into()))?;
    cache.lock().expect("automorphism cache poisoned").insert(g.field().conductor(), map.clone());
    Ok(map)
}

pub fn build(spec: &FamilySpec) -> Result<ProductGroup, DuvalError> {
    let spec = spec.normalized()?;
    let field = make_field(required_conductor(&spec));
    build_in(&spec, &field)
}

/// Builds the group inside a given field (whose conductor must be a multiple of the required one).
pub fn build_in(spec: &FamilySpec, field: &Field) -> Result<ProductGroup, DuvalError> {
    let spec = spec.normalized()?;
    let rec = recipe(&spec);
    let left = rec.l.group(field)?;
    let right = rec.r.group(field)?;
    let lk = indices_of(&left, &*rec.lk.group(field)?)?;
    let rk = indices_of(&right, &*rec.rk.group(field)?)?;
    let lk_group = left.subgroup(&lk);
    let rk_group = right.subgroup(&rk);
    let mut gens: Vec<(u32, u32)> = Vec::new();
    for a in generators(&lk_group) {
        gens.push((left.index_of(lk_group.element(a)).unwrap_or(0), 0));
    }
    for b in generators(&rk_group) {
        gens.push((0, right.index_of(rk_group.element(b)).unwrap_or(0)));
    }
    let idx = |g: &FinSubgroupS3, q: &UnitQuaternion| {
        g.index_of(q).ok_or_else(|| DuvalError::Internal(format!("generator {:?} outside its group", q)))
    };
    let expected = left.order() * rk.len();
    match rec.iso {
        Iso::Gens => {
            let mut search = None;
            for &(a, b) in &rec.gens {
                let x = idx(&left, &gen_value(a, field)?)?;
                if b == Gen::OctaSearch {
                    search = Some(x);
                    continue;
                }
                let y = idx(&right, &gen_value(b, field)?)?;
                gens.push((x, y));
            }
            if let Some(x) = search {
                let t = standard_group(GroupTag::BinTetra, field)?;
                for y in 0..right.order() as u32 {
                    if t.contains(right.element(y)) {
                        continue;
                    }
                    let mut trial = gens.clone();
                    trial.push((x, y));
                    let pairs = closure_pairs(&left, &right, &trial);
                    if pairs.len() == expected {
                        gens = trial;
                        break;
                    }
                }
            }
        }
        Iso::Identity | Iso::OctaTwist | Iso::IcosaOuter => {
            let map = match rec.iso {
                Iso::Identity => (0..left.order() as u32).collect(),
                Iso::OctaTwist => octa_twist(&left)?,
                _ => icosa_outer(&left)?,
            };
            for a in generators(&left) {
                gens.push((a, map[a as usize]));
            }
        }
    }
    let pairs = closure_pairs(&left, &right, &gens);
    if pairs.len() != expected || pairs.len() != lk.len() * right.order() {
        return Err(DuvalError::Internal(format!(
            "{}: generated {} pairs, expected {}",
            spec.label(),
            pairs.len(),
            expected
        )));
    }
    let g = ProductGroup::from_pairs(left, right, pairs);
    if !g.contains_kernel() {
        return Err(DuvalError::KernelMissing);
    }
    Ok(g)
}

/// The data (L, L_K, R, R_K, phi) of a subgroup of S^3 x S^3.
#[derive(Clone)]
pub struct FiveTuple {
    pub l: Arc<FinSubgroupS3>,
    pub r: Arc<FinSubgroupS3>,
    /// indices into `l` of the kernel subgroup L_K
    pub l_k: Vec<u32>,
    pub r_k: Vec<u32>,
    /// coset id of every element of L (resp. R)
    pub l_coset: Vec<u32>,
    pub r_coset: Vec<u32>,
    /// smallest element of each coset in canonical order
    pub l_reps: Vec<u32>,
    pub r_reps: Vec<u32>,
    /// phi on coset ids
    pub phi: Vec<u32>,
}

impl fmt::Debug for FiveTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FiveTuple(|L|={}, |L_K|={}, |R|={}, |R_K|={})",
            self.l.order(),
            self.l_k.len(),
            self.r.order(),
            self.r_k.len()
        )
    }
}

fn cosets(g: &FinSubgroupS3, k: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let n = g.order();
    let mut coset = vec![u32::MAX; n];
    let mut groups: Vec<Vec<u32>> = Vec::new();
    for x in 0..n as u32 {
        if coset[x as usize] != u32::MAX {
            continue;
        }
        let members: Vec<u32> = k.iter().map(|&y| g.mul(x, y)).collect();
        for &y in &members {
            coset[y as usize] = groups.len() as u32;
        }
        groups.push(members);
    }
    let mut reps: Vec<u32> = groups
        .iter()
        .map(|c| {
            *c.iter()
                .min_by(|&&a, &&b| g.element(a).quat().canonical_cmp(g.element(b).quat()))
                .expect("nonempty coset")
        })
        .collect();
    reps.sort_by(|&a, &b| g.element(a).quat().canonical_cmp(g.element(b).quat()));
    let renum: HashMap<u32, u32> = reps.iter().enumerate().map(|(i, &r)| (coset[r as usize], i as u32)).collect();
    let coset = coset.iter().map(|c| renum[c]).collect();
    (coset, reps)
}

pub fn tuple_of(g: &ProductGroup) -> FiveTuple {
    let left_proj: HashSet<u32> = g.pairs.iter().map(|p| p.0).collect();
    let right_proj: HashSet<u32> = g.pairs.iter().map(|p| p.1).collect();
    let l = if left_proj.len() == g.left.order() {
        g.left.clone()
    } else {
        Arc::new(g.left.subgroup(&left_proj.into_iter().collect::<Vec<_>>()))
    };
    let r = if right_proj.len() == g.right.order() {
        g.right.clone()
    } else {
        Arc::new(g.right.subgroup(&right_proj.into_iter().collect::<Vec<_>>()))
    };
    let pairs: Vec<(u32, u32)> = g
        .quat_pairs()
        .map(|(a, b)| (l.index_of(a).expect("projection"), r.index_of(b).expect("projection")))
        .collect();
    let mut l_k: Vec<u32> = pairs.iter().filter(|p| p.1 == 0).map(|p| p.0).collect();
    let mut r_k: Vec<u32> = pairs.iter().filter(|p| p.0 == 0).map(|p| p.1).collect();
    l_k.sort_unstable();
    r_k.sort_unstable();
    let (l_coset, l_reps) = cosets(&l, &l_k);
    let (r_coset, r_reps) = cosets(&r, &r_k);
    let mut phi = vec![u32::MAX; l_reps.len()];
    for &(a, b) in &pairs {
        phi[l_coset[a as usize] as usize] = r_coset[b as usize];
    }
    FiveTuple { l, r, l_k, r_k, l_coset, r_coset, l_reps, r_reps, phi }
}

impl FiveTuple {
    pub fn quotient_order(&self) -> usize {
        self.l_reps.len()
    }

    pub fn l_k_group(&self) -> FinSubgroupS3 {
        self.l.subgroup(&self.l_k)
    }

    pub fn r_k_group(&self) -> FinSubgroupS3 {
        self.r.subgroup(&self.r_k)
    }

    /// Checks that phi is a bijective homomorphism of the quotients.
    pub fn phi_is_isomorphism(&self) -> bool {
        let q = self.quotient_order();
        if self.r_reps.len() != q || self.phi.iter().collect::<HashSet<_>>().len() != q {
            return false;
        }
        (0..q).all(|a| {
            (0..q).all(|b| {
                let la = self.l_reps[a];
                let lb = self.l_reps[b];
                let prod = self.l_coset[self.l.mul(la, lb) as usize];
                let ra = self.r_reps[self.phi[a] as usize];
                let rb = self.r_reps[self.phi[b] as usize];
                self.phi[prod as usize] == self.r_coset[self.r.mul(ra, rb) as usize]
            })
        })
    }

    /// Coset representative pairs (x, phi(x)) as quaternions.
    pub fn phi_pairs(&self) -> Vec<(UnitQuaternion, UnitQuaternion)> {
        self.l_reps
            .iter()
            .enumerate()
            .map(|(c, &x)| (self.l.element(x).clone(), self.r.element(self.r_reps[self.phi[c] as usize]).clone()))
            .collect()
    }

    /// The group {(l, r) : phi(l L_K) = r R_K}.
    pub fn rebuild(&self) -> ProductGroup {
        let mut pairs = Vec::new();
        for a in 0..self.l.order() as u32 {
            let target = self.phi[self.l_coset[a as usize] as usize];
            for b in 0..self.r.order() as u32 {
                if self.r_coset[b as usize] == target {
                    pairs.push((a, b));
                }
            }
        }
        ProductGroup::from_pairs(self.l.clone(), self.r.clone(), pairs)
    }
}

/// All valid specs of a family with m, n <= max_mn and r <= max_r, in parameter order.
pub fn specs_up_to(family: FamilyId, max_mn: u32, max_r: u32) -> Vec<FamilySpec> {
    let mut out = Vec::new();
    let ms = if family.uses_m() { 1..=max_mn } else { 1..=1 };
    for m in ms {
        let ns = if family.uses_mn() { 1..=max_mn } else { 1..=1 };
        for n in ns {
            let rs = if family.uses_rs() { 1..=max_r } else { 1..=1 };
            for r in rs {
                for s in 0..r as i64 {
                    if let Ok(spec) = (FamilySpec { family, m, n, r, s }).normalized() {
                        if !out.contains(&spec) {
                            out.push(spec);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Order of the image in SO(4) predicted by the closed formulas of the classification.
pub fn formula_order(spec: &FamilySpec) -> usize {
    let (m, n, r) = (spec.m as usize, spec.n as usize, spec.r as usize);
    match (spec.family.num, spec.family.primes) {
        (1, 0) => 2 * m * n * r,
        (1, 1) => m * n * r / 2,
        (2, _) | (3, _) => 4 * m * n,
        (4, _) => 8 * m * n,
        (5, _) | (6, _) => 24 * m,
        (7, _) | (8, _) => 48 * m,
        (9, _) => 120 * m,
        (10, _) => 8 * m * n,
        (11, 0) => 4 * m * n * r,
        (11, 1) => m * n * r,
        (12, _) => 16 * m * n,
        (13, _) => 8 * m * n,
        (14, _) => 48 * m,
        (15, _) => 96 * m,
        (16, _) => 48 * m,
        (17, _) => 96 * m,
        (18, _) => 48 * m,
        (19, _) => 240 * m,
        (20, _) => 288,
        (21, 0) => 24,
        (21, _) => 12,
        (22, _) => 96,
        (23, _) => 576,
        (24, _) => 1440,
        (25, _) => 1152,
        (26, 0) => 48,
        (26, _) => 24,
        (27, _) => 192,
        (28, _) => 576,
        (29, _) => 2880,
        (30, _) => 7200,
        (31, 0) | (32, 0) => 120,
        (31, _) | (32, _) => 60,
        (33, 0) => 8 * m * n,
        (33, _) => 4 * m * n,
        (34, _) => 2 * m * n,
        _ => 0,
    }
}
