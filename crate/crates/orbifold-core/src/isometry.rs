//! Orientation-preserving isometry groups of S^3/G and orientation-reversing isometries.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;
use std::sync::Arc;

use serde_json::json;
use thiserror::Error;

use crate::duval::{build, tuple_of, DuvalError, FamilySpec, FiveTuple, ProductGroup};
use crate::groups3::{classify, normalizer_of, standard_group, FinSubgroupS3, GroupError, GroupTag, SymbolicSubgroup};
use crate::quat::{compose, inverse, IsometryS3, UnitQuaternion};
use crate::recognize::{recognize, CayleyTable, FiniteGroupId};

#[derive(Debug, Error)]
pub enum IsometryError {
    #[error(transparent)]
    Duval(#[from] DuvalError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("witness must be orientation-reversing")]
    NotReversing,
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityComponent {
    Trivial,
    S1,
    S1xS1,
    SO3,
    S3,
    SO3xS1,
    S3centralS1,
    PSO4,
    SO4,
}

impl IdentityComponent {
    pub fn name(&self) -> &'static str {
        match self {
            IdentityComponent::Trivial => "Trivial",
            IdentityComponent::S1 => "S1",
            IdentityComponent::S1xS1 => "S1xS1",
            IdentityComponent::SO3 => "SO3",
            IdentityComponent::S3 => "S3",
            IdentityComponent::SO3xS1 => "SO3xS1",
            IdentityComponent::S3centralS1 => "S3centralS1",
            IdentityComponent::PSO4 => "PSO4",
            IdentityComponent::SO4 => "SO4",
        }
    }
}

impl fmt::Display for IdentityComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityComponent {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        use IdentityComponent::*;
        [Trivial, S1, S1xS1, SO3, S3, SO3xS1, S3centralS1, PSO4, SO4]
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown identity component {:?}", s))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieDescriptor {
    pub identity_component: IdentityComponent,
    pub pi0: FiniteGroupId,
}

impl LieDescriptor {
    pub fn new(identity_component: IdentityComponent, pi0: FiniteGroupId) -> LieDescriptor {
        LieDescriptor { identity_component, pi0 }
    }

    pub fn is_recognized(&self) -> bool {
        !self.pi0.is_raw()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({"isom0": self.identity_component.name(), "pi0": self.pi0.to_json(), "pi0_name": self.pi0.to_string()})
    }
}

impl fmt::Display for LieDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.identity_component, self.pi0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    PhiBar11,
    PhiBarJ1,
    Search,
}

impl WitnessKind {
    pub fn name(&self) -> &'static str {
        match self {
            WitnessKind::PhiBar11 => "phibar_1_1",
            WitnessKind::PhiBarJ1 => "phibar_j_1",
            WitnessKind::Search => "phibar_search",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ORWitness {
    pub exists: bool,
    pub witness: Option<IsometryS3>,
    pub kind: Option<WitnessKind>,
}

impl ORWitness {
    fn none() -> ORWitness {
        ORWitness { exists: false, witness: None, kind: None }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "or_isometry": self.exists,
            "witness": self.kind.map(|k| k.name()),
            "witness_isometry": self.witness.as_ref().map(|w| w.to_json()),
        })
    }
}

/// The normalizer of one side, modulo its identity component.
#[derive(Clone)]
pub(crate) enum SideNorm {
    /// all of S^3; one component
    Sphere,
    /// the circle through `axis` together with its coset by `flip`
    Circle { axis: UnitQuaternion, flip: UnitQuaternion },
    Discrete(Arc<FinSubgroupS3>),
}

impl SideNorm {
    pub(crate) fn size(&self) -> usize {
        match self {
            SideNorm::Sphere => 1,
            SideNorm::Circle { .. } => 2,
            SideNorm::Discrete(g) => g.order(),
        }
    }

    pub(crate) fn rep_in(&self, a: u32, like: &UnitQuaternion) -> UnitQuaternion {
        match self {
            SideNorm::Sphere => UnitQuaternion::one(like.field()),
            SideNorm::Circle { flip, .. } => {
                if a == 0 {
                    UnitQuaternion::one(like.field())
                } else {
                    flip.clone()
                }
            }
            SideNorm::Discrete(g) => g.element(a).clone(),
        }
    }

    pub(crate) fn mul(&self, a: u32, b: u32) -> u32 {
        match self {
            SideNorm::Sphere => 0,
            SideNorm::Circle { .. } => (a + b) % 2,
            SideNorm::Discrete(g) => g.mul(a, b),
        }
    }

    /// Component index of an element of the normalizer.
    pub(crate) fn component(&self, x: &UnitQuaternion) -> Option<u32> {
        match self {
            SideNorm::Sphere => Some(0),
            SideNorm::Circle { axis, flip } => {
                if x.mul(axis) == axis.mul(x) {
                    Some(0)
                } else {
                    let y = x.mul(&flip.inv());
                    (y.mul(axis) == axis.mul(&y)).then_some(1)
                }
            }
            SideNorm::Discrete(g) => g.index_of(x),
        }
    }

    pub(crate) fn continuous(&self) -> u8 {
        match self {
            SideNorm::Sphere => 3,
            SideNorm::Circle { .. } => 1,
            SideNorm::Discrete(_) => 0,
        }
    }

    pub(crate) fn symbolic(&self) -> SymbolicSubgroup {
        match self {
            SideNorm::Sphere => SymbolicSubgroup::S3full,
            SideNorm::Circle { .. } => SymbolicSubgroup::O2star,
            SideNorm::Discrete(g) => SymbolicSubgroup::Finite(g.clone()),
        }
    }
}

fn commutes(a: &UnitQuaternion, b: &UnitQuaternion) -> bool {
    a.mul(b) == b.mul(a)
}

/// Norm(L) ∩ Norm(L_K), optionally intersected with S^1 ∪ S^1 j.
pub(crate) fn side_normalizer(l: &FinSubgroupS3, lk: &FinSubgroupS3, restrict_o2: bool) -> Result<SideNorm, IsometryError> {
    let field = l.field();
    let i = UnitQuaternion::i(field);
    let j = UnitQuaternion::j(field);
    if l.order() <= 2 {
        return Ok(if restrict_o2 { SideNorm::Circle { axis: i, flip: j } } else { SideNorm::Sphere });
    }
    let tag = classify(l)?;
    if let GroupTag::Cyclic(k) = tag {
        let g = (0..k).find(|&a| l.element_order(a) == k).map(|a| l.element(a).clone());
        let g = g.ok_or_else(|| IsometryError::Unsupported("cyclic group without generator".into()))?;
        let candidates = [j.clone(), i.clone(), UnitQuaternion::k(field)];
        let flip = candidates
            .iter()
            .find(|w| w.conj_by(&g) == g.inv())
            .cloned()
            .ok_or_else(|| IsometryError::Unsupported("cyclic group off the coordinate axes".into()))?;
        if !restrict_o2 || commutes(&g, &i) {
            return Ok(SideNorm::Circle { axis: g, flip });
        }
        if commutes(&g, &j) {
            // the circle through j meets S^1 ∪ S^1 j in the quaternion group
            return Ok(SideNorm::Discrete(standard_group(GroupTag::BinDihedral(8), field)?));
        }
        return Err(IsometryError::Unsupported("cyclic group off the coordinate axes".into()));
    }
    let ambient = match normalizer_of(tag, field)? {
        SymbolicSubgroup::Finite(g) => g,
        _ => return Err(IsometryError::Unsupported(format!("{} has a continuous normalizer", tag))),
    };
    if !l.elements().iter().all(|x| ambient.contains(x)) {
        return Err(IsometryError::Unsupported(format!("{} is not in standard position", tag)));
    }
    let members: Vec<u32> = (0..ambient.order() as u32)
        .filter(|&a| {
            let x = ambient.element(a);
            (!restrict_o2 || x.in_circle() || x.in_circle_j()) && l.normalized_by(x) && lk.normalized_by(x)
        })
        .collect();
    Ok(SideNorm::Discrete(Arc::new(ambient.subgroup(&members))))
}

/// Greedy generating set of a product group, as index pairs.
pub(crate) fn pair_generators(g: &ProductGroup) -> Vec<(u32, u32)> {
    let (l, r) = (g.left(), g.right());
    let mut order: Vec<(u32, u32)> = g.pairs().to_vec();
    order.sort_by_key(|&(a, b)| std::cmp::Reverse((l.element_order(a), r.element_order(b))));
    let mut gens: Vec<(u32, u32)> = Vec::new();
    let mut span: HashSet<(u32, u32)> = HashSet::from([(0, 0)]);
    for p in order {
        if span.len() == g.order() {
            break;
        }
        if span.contains(&p) {
            continue;
        }
        gens.push(p);
        let mut out: Vec<(u32, u32)> = span.iter().copied().collect();
        let mut k = 0;
        while k < out.len() {
            let (a, b) = out[k];
            for &(x, y) in &gens {
                let q = (l.mul(a, x), r.mul(b, y));
                if span.insert(q) {
                    out.push(q);
                }
            }
            k += 1;
        }
    }
    gens
}

/// Conjugation action of every component representative on a finite group, as index maps.
fn conj_tables(side: &SideNorm, g: &FinSubgroupS3) -> Vec<Vec<Option<u32>>> {
    (0..side.size() as u32)
        .map(|a| {
            let p = side.rep_in(a, g.element(0));
            g.elements().iter().map(|x| g.index_of(&p.conj_by(x))).collect()
        })
        .collect()
}

/// The quotient of a finite group given by `members` by the normal subgroup `image`, with the coset label of each member.
pub(crate) fn coset_quotient<K: Copy + Eq + Hash>(
    members: &[K],
    image: &[K],
    mul: impl Fn(K, K) -> K,
) -> Result<(CayleyTable, HashMap<K, u32>), IsometryError> {
    let mut label: HashMap<K, u32> = HashMap::new();
    let mut reps = Vec::new();
    for &h in members {
        if label.contains_key(&h) {
            continue;
        }
        let c = reps.len() as u32;
        for &k in image {
            label.insert(mul(h, k), c);
        }
        reps.push(h);
    }
    if label.len() != members.len() {
        return Err(IsometryError::Unsupported("component group is not closed".into()));
    }
    let q = reps.len();
    let mut table = Vec::with_capacity(q * q);
    for &a in &reps {
        for &b in &reps {
            table.push(*label.get(&mul(a, b)).ok_or_else(|| IsometryError::Unsupported("component group is not closed".into()))?);
        }
    }
    let quotient = CayleyTable::from_fn(q, |a, b| table[a as usize * q + b as usize])
        .ok_or_else(|| IsometryError::Unsupported("component quotient is not a group".into()))?;
    Ok((quotient, label))
}

/// Norm(G)/G computed through component representatives of the two side normalizers.
pub(crate) struct NormalizerQuotient {
    pub(crate) group: ProductGroup,
    pub(crate) left: SideNorm,
    pub(crate) right: SideNorm,
    /// component pairs normalizing the group
    pub(crate) members: Vec<(u32, u32)>,
    pub(crate) quotient: CayleyTable,
}

impl NormalizerQuotient {
    pub(crate) fn new(g: &ProductGroup, restrict_left_o2: bool) -> Result<NormalizerQuotient, IsometryError> {
        let t = tuple_of(g);
        let group = t.rebuild();
        let left = side_normalizer(&t.l, &t.l_k_group(), restrict_left_o2)?;
        let right = side_normalizer(&t.r, &t.r_k_group(), false)?;
        let gens = pair_generators(&group);
        let cl = conj_tables(&left, &t.l);
        let cr = conj_tables(&right, &t.r);
        let passes = |a: u32, b: u32| {
            gens.iter().all(|&(x, y)| match (cl[a as usize][x as usize], cr[b as usize][y as usize]) {
                (Some(u), Some(v)) => group.contains(u, v),
                _ => false,
            })
        };
        let mut members = Vec::new();
        for a in 0..left.size() as u32 {
            for b in 0..right.size() as u32 {
                if passes(a, b) {
                    members.push((a, b));
                }
            }
        }
        let mut image: Vec<(u32, u32)> = Vec::new();
        let mut seen = HashSet::new();
        for (x, y) in group.quat_pairs() {
            let c = (
                left.component(x).ok_or_else(|| IsometryError::Unsupported("left factor outside its normalizer".into()))?,
                right.component(y).ok_or_else(|| IsometryError::Unsupported("right factor outside its normalizer".into()))?,
            );
            if seen.insert(c) {
                image.push(c);
            }
        }
        let (quotient, _) = coset_quotient(&members, &image, |a, b| (left.mul(a.0, b.0), right.mul(a.1, b.1)))?;
        Ok(NormalizerQuotient { group, left, right, members, quotient })
    }

    pub(crate) fn identity_component(&self) -> IdentityComponent {
        use IdentityComponent::*;
        let g = &self.group;
        let minus_left = g.contains_minus_one_left();
        let minus_right = g.right().minus_one().map(|b| g.contains(0, b)).unwrap_or(false);
        match (self.left.continuous(), self.right.continuous()) {
            (3, 3) => {
                if minus_left {
                    PSO4
                } else {
                    SO4
                }
            }
            (3, 1) => {
                if minus_left {
                    SO3xS1
                } else {
                    S3centralS1
                }
            }
            (1, 3) => {
                if minus_right {
                    SO3xS1
                } else {
                    S3centralS1
                }
            }
            (3, 0) => {
                if minus_left {
                    SO3
                } else {
                    S3
                }
            }
            (0, 3) => {
                if minus_right {
                    SO3
                } else {
                    S3
                }
            }
            (1, 1) => S1xS1,
            (1, 0) | (0, 1) => S1,
            _ => Trivial,
        }
    }

    pub(crate) fn descriptor(&self) -> LieDescriptor {
        LieDescriptor::new(self.identity_component(), recognize(&self.quotient))
    }
}

/// (N_L, N_R) with N_L = Norm(L) ∩ Norm(L_K), and likewise on the right.
pub fn candidate_normalizer(t: &FiveTuple) -> Result<(SymbolicSubgroup, SymbolicSubgroup), IsometryError> {
    let left = side_normalizer(&t.l, &t.l_k_group(), false)?;
    let right = side_normalizer(&t.r, &t.r_k_group(), false)?;
    Ok((left.symbolic(), right.symbolic()))
}

/// Whether conjugation by g on L/L_K and by f on R/R_K intertwine phi.
pub fn diagram_commutes(t: &FiveTuple, g: &UnitQuaternion, f: &UnitQuaternion) -> bool {
    let (gi, fi) = (g.inv(), f.inv());
    t.l_reps.iter().enumerate().all(|(c, &x)| {
        let y = t.r_reps[t.phi[c] as usize];
        let x2 = t.l.index_of(&gi.conj_by(t.l.element(x)));
        let y2 = t.r.index_of(&fi.conj_by(t.r.element(y)));
        match (x2, y2) {
            (Some(a), Some(b)) => t.phi[t.l_coset[a as usize] as usize] == t.r_coset[b as usize],
            _ => false,
        }
    })
}

pub fn isom_plus_of(g: &ProductGroup) -> Result<LieDescriptor, IsometryError> {
    Ok(NormalizerQuotient::new(g, false)?.descriptor())
}

pub fn isom_plus(spec: &FamilySpec) -> Result<LieDescriptor, IsometryError> {
    isom_plus_of(&build(spec)?)
}

/// Whether h -> p conj(h) q^-1 normalizes the image of g, checked on generators.
fn reversed_normalizes(g: &ProductGroup, gens: &[(u32, u32)], p: &UnitQuaternion, q: &UnitQuaternion) -> bool {
    gens.iter().all(|&(x, y)| {
        let a = g.left().index_of(&p.conj_by(g.right().element(y)));
        let b = g.right().index_of(&q.conj_by(g.left().element(x)));
        matches!((a, b), (Some(a), Some(b)) if g.contains(a, b))
    })
}

/// An element p with p R p^-1 = L as sets, if one is found among 1 and the binary octahedral group.
fn transporter(from: &FinSubgroupS3, to: &FinSubgroupS3) -> Result<Option<UnitQuaternion>, IsometryError> {
    let field = from.field();
    let mut candidates = vec![UnitQuaternion::one(field)];
    if field.conductor() % 8 == 0 {
        candidates.extend(standard_group(GroupTag::BinOcta, field)?.elements().iter().cloned());
    }
    Ok(candidates.into_iter().find(|p| from.elements().iter().all(|x| to.contains(&p.conj_by(x)))))
}

pub fn or_exists_of(g: &ProductGroup) -> Result<ORWitness, IsometryError> {
    let t = tuple_of(g);
    let (lk, rk) = (t.l_k_group(), t.r_k_group());
    if t.l.order() != t.r.order() || lk.order() != rk.order() || classify(&t.l)? != classify(&t.r)? || classify(&lk)? != classify(&rk)? {
        return Ok(ORWitness::none());
    }
    let group = t.rebuild();
    let gens = pair_generators(&group);
    let field = group.field().clone();
    let one = UnitQuaternion::one(&field);
    let j = UnitQuaternion::j(&field);
    for (p, q, kind) in [(one.clone(), one.clone(), WitnessKind::PhiBar11), (j, one.clone(), WitnessKind::PhiBarJ1)] {
        if reversed_normalizes(&group, &gens, &p, &q) {
            return Ok(ORWitness { exists: true, witness: Some(IsometryS3::phibar(p, q)), kind: Some(kind) });
        }
    }
    let p0 = match transporter(&t.r, &t.l)? {
        Some(p) => p,
        None => return Err(IsometryError::Unsupported("no transporter between conjugate sides".into())),
    };
    let q0 = p0.inv();
    let left = side_normalizer(&t.l, &lk, false)?;
    let right = side_normalizer(&t.r, &rk, false)?;
    let cl = conj_tables(&left, &t.l);
    let cr = conj_tables(&right, &t.r);
    // images of generators under the fixed transporters
    let moved: Vec<(u32, u32)> = gens
        .iter()
        .map(|&(x, y)| {
            let a = t.l.index_of(&p0.conj_by(t.r.element(y)));
            let b = t.r.index_of(&q0.conj_by(t.l.element(x)));
            a.zip(b).ok_or_else(|| IsometryError::Unsupported("transporter does not map the sides".into()))
        })
        .collect::<Result<_, _>>()?;
    for a in 0..left.size() as u32 {
        for b in 0..right.size() as u32 {
            let ok = moved.iter().all(|&(x, y)| match (cl[a as usize][x as usize], cr[b as usize][y as usize]) {
                (Some(u), Some(v)) => group.contains(u, v),
                _ => false,
            });
            if ok {
                let p = left.rep_in(a, &one).mul(&p0);
                let q = right.rep_in(b, &one).mul(&q0);
                return Ok(ORWitness { exists: true, witness: Some(IsometryS3::phibar(p, q)), kind: Some(WitnessKind::Search) });
            }
        }
    }
    Ok(ORWitness::none())
}

pub fn or_exists(spec: &FamilySpec) -> Result<ORWitness, IsometryError> {
    or_exists_of(&build(spec)?)
}

/// Whether w x w^-1 lies in the image of g for every x in it.
pub fn verify_witness(g: &ProductGroup, w: &IsometryS3) -> Result<bool, IsometryError> {
    if !w.reversing() {
        return Err(IsometryError::NotReversing);
    }
    let image: HashSet<IsometryS3> = crate::duval::so4_image(g).into_iter().collect();
    let wi = inverse(w);
    for x in &image {
        let y = compose(&compose(w, x).map_err(GroupError::from)?, &wi).map_err(GroupError::from)?;
        if !image.contains(&y) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(f: &str, m: u32, n: u32, r: u32, s: i64) -> FamilySpec {
        FamilySpec::new(f, m, n, r, s).unwrap()
    }

    fn lie(c: &str, p: &str) -> LieDescriptor {
        LieDescriptor::new(c.parse().unwrap(), p.parse().unwrap())
    }

    #[test]
    fn family_22_has_d6() {
        assert_eq!(isom_plus(&FamilySpec::simple("22")).unwrap(), lie("Trivial", "D6"));
    }

    #[test]
    fn family_1_generic() {
        assert_eq!(isom_plus(&spec("1", 2, 3, 5, 2)).unwrap(), lie("S1xS1", "Z2"));
    }

    #[test]
    fn projective_space_gives_pso4() {
        assert_eq!(isom_plus(&spec("1", 1, 1, 1, 0)).unwrap(), lie("PSO4", "1"));
    }

    #[test]
    fn candidate_normalizers() {
        let t = tuple_of(&build(&spec("13", 2, 3, 1, 0)).unwrap());
        let (l, r) = candidate_normalizer(&t).unwrap();
        match (l, r) {
            (SymbolicSubgroup::Finite(a), SymbolicSubgroup::Finite(b)) => {
                assert_eq!(a.order(), 16);
                assert_eq!(b.order(), 24);
            }
            other => panic!("{:?}", other),
        }
        let t = tuple_of(&build(&spec("1", 1, 2, 1, 0)).unwrap());
        assert!(matches!(candidate_normalizer(&t).unwrap().0, SymbolicSubgroup::S3full));
    }

    #[test]
    fn diagram_on_group_elements() {
        let g = build(&FamilySpec::simple("22")).unwrap();
        let t = tuple_of(&g);
        for (a, b) in g.quat_pairs().take(20) {
            assert!(diagram_commutes(&t, a, b));
        }
        let f = g.field();
        let o = standard_group(GroupTag::BinOcta, f).unwrap();
        let tstar = standard_group(GroupTag::BinTetra, f).unwrap();
        let outside = o.elements().iter().find(|x| !tstar.contains(x)).unwrap();
        assert!(!diagram_commutes(&t, outside, &UnitQuaternion::one(f)));
    }

    #[test]
    fn diagram_matches_generator_test() {
        let g = build(&spec("11", 1, 1, 3, 1)).unwrap();
        let nq = NormalizerQuotient::new(&g, false).unwrap();
        let t = tuple_of(&g);
        let one = UnitQuaternion::one(g.field());
        for a in 0..nq.left.size() as u32 {
            for b in 0..nq.right.size() as u32 {
                let ok = diagram_commutes(&t, &nq.left.rep_in(a, &one), &nq.right.rep_in(b, &one));
                assert_eq!(ok, nq.members.contains(&(a, b)));
            }
        }
    }

    #[test]
    fn or_witnesses() {
        let w = or_exists(&spec("1", 1, 1, 5, 2)).unwrap();
        assert!(w.exists);
        assert_eq!(w.kind, Some(WitnessKind::PhiBarJ1));
        assert!(!or_exists(&spec("3", 2, 3, 1, 0)).unwrap().exists);
        let w = or_exists(&FamilySpec::simple("20")).unwrap();
        assert_eq!(w.kind, Some(WitnessKind::PhiBar11));
    }

    #[test]
    fn witness_verification() {
        let g = build(&FamilySpec::simple("30")).unwrap();
        let one = UnitQuaternion::one(g.field());
        let w = IsometryS3::phibar(one.clone(), one.clone());
        assert!(verify_witness(&g, &w).unwrap());
        let g3 = build(&spec("3", 2, 3, 1, 0)).unwrap();
        let one = UnitQuaternion::one(g3.field());
        assert!(!verify_witness(&g3, &IsometryS3::phibar(one.clone(), one.clone())).unwrap());
        assert!(matches!(verify_witness(&g3, &IsometryS3::phi(one.clone(), one)), Err(IsometryError::NotReversing)));
    }
}
