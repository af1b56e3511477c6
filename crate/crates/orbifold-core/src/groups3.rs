//! Finite subgroups of S^3: cyclic, binary dihedral, binary polyhedral.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use thiserror::Error;

use crate::cyclo::{make_field, CycloError, Field};
use crate::quat::{qmul, Quaternion, UnitQuaternion};

pub const DEFAULT_CAP: usize = 20_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error(transparent)]
    Field(#[from] CycloError),
    #[error("generated set is not finite within cap {0}")]
    CapExceeded(usize),
    #[error("not a subgroup of S^3 up to conjugacy (order {0})")]
    NotRecognized(usize),
    #[error("invalid group tag: {0}")]
    InvalidTag(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupTag {
    Cyclic(u32),
    /// Binary dihedral group of the given order.
    BinDihedral(u32),
    BinTetra,
    BinOcta,
    BinIcosa,
}

impl GroupTag {
    pub fn order(&self) -> usize {
        match *self {
            GroupTag::Cyclic(n) | GroupTag::BinDihedral(n) => n as usize,
            GroupTag::BinTetra => 24,
            GroupTag::BinOcta => 48,
            GroupTag::BinIcosa => 120,
        }
    }

    /// Smallest conductor holding the standard coordinates.
    pub fn natural_conductor(&self) -> u32 {
        match *self {
            GroupTag::Cyclic(n) => n.max(1).lcm(&4),
            GroupTag::BinDihedral(n) => (n / 2).max(1).lcm(&4),
            GroupTag::BinTetra => 4,
            GroupTag::BinOcta => 8,
            GroupTag::BinIcosa => 20,
        }
    }

    fn validate(&self) -> Result<(), GroupError> {
        match *self {
            GroupTag::Cyclic(0) => Err(GroupError::InvalidTag("C0".into())),
            GroupTag::BinDihedral(n) if n < 8 || n % 4 != 0 => Err(GroupError::InvalidTag(format!("D*{}", n))),
            _ => Ok(()),
        }
    }

    /// Number of elements of each order in the standard group.
    pub fn order_profile(&self) -> BTreeMap<u32, usize> {
        fn cyclic(n: u32, out: &mut BTreeMap<u32, usize>) {
            for d in 1..=n {
                if n % d == 0 {
                    let phi = (1..=d).filter(|k| k.gcd(&d) == 1).count();
                    *out.entry(d).or_default() += phi;
                }
            }
        }
        let mut out = BTreeMap::new();
        match *self {
            GroupTag::Cyclic(n) => cyclic(n, &mut out),
            GroupTag::BinDihedral(n) => {
                cyclic(n / 2, &mut out);
                *out.entry(4).or_default() += (n / 2) as usize;
            }
            GroupTag::BinTetra => out.extend([(1, 1), (2, 1), (3, 8), (4, 6), (6, 8)]),
            GroupTag::BinOcta => out.extend([(1, 1), (2, 1), (3, 8), (4, 18), (6, 8), (8, 12)]),
            GroupTag::BinIcosa => out.extend([(1, 1), (2, 1), (3, 20), (4, 30), (5, 24), (6, 20), (10, 24)]),
        }
        out
    }
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupTag::Cyclic(n) => write!(f, "C{}", n),
            GroupTag::BinDihedral(n) => write!(f, "D*{}", n),
            GroupTag::BinTetra => write!(f, "T*"),
            GroupTag::BinOcta => write!(f, "O*"),
            GroupTag::BinIcosa => write!(f, "I*"),
        }
    }
}

/// A finite subgroup of S^3 with its multiplication table. Element 0 is 1.
pub struct FinSubgroupS3 {
    field: Field,
    elements: Vec<UnitQuaternion>,
    index: HashMap<UnitQuaternion, u32>,
    table: Vec<u32>,
    inverses: Vec<u32>,
}

impl fmt::Debug for FinSubgroupS3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinSubgroupS3(order {}, conductor {})", self.order(), self.field.conductor())
    }
}

impl FinSubgroupS3 {
    fn from_parts(field: Field, elements: Vec<UnitQuaternion>, table: Vec<u32>) -> FinSubgroupS3 {
        let n = elements.len();
        let index: HashMap<_, _> = elements.iter().enumerate().map(|(i, e)| (e.clone(), i as u32)).collect();
        let mut inverses = vec![0u32; n];
        for a in 0..n {
            for b in 0..n {
                if table[a * n + b] == 0 {
                    inverses[a] = b as u32;
                    break;
                }
            }
        }
        FinSubgroupS3 { field, elements, index, table, inverses }
    }

    fn from_elements(field: Field, elements: Vec<UnitQuaternion>) -> FinSubgroupS3 {
        let n = elements.len();
        let index: HashMap<_, _> = elements.iter().enumerate().map(|(i, e)| (e.clone(), i as u32)).collect();
        let mut table = Vec::with_capacity(n * n);
        for a in &elements {
            for b in &elements {
                table.push(index[&a.mul(b)]);
            }
        }
        FinSubgroupS3::from_parts(field, elements, table)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[UnitQuaternion] {
        &self.elements
    }

    pub fn element(&self, i: u32) -> &UnitQuaternion {
        &self.elements[i as usize]
    }

    pub fn index_of(&self, q: &UnitQuaternion) -> Option<u32> {
        self.index.get(q).copied()
    }

    pub fn contains(&self, q: &UnitQuaternion) -> bool {
        self.index.contains_key(q)
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.elements.len() + b as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inverses[a as usize]
    }

    pub fn minus_one(&self) -> Option<u32> {
        self.index_of(&UnitQuaternion::one(&self.field).neg())
    }

    pub fn element_order(&self, a: u32) -> u32 {
        let mut k = 1;
        let mut x = a;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn order_profile(&self) -> BTreeMap<u32, usize> {
        let mut out = BTreeMap::new();
        for a in 0..self.order() as u32 {
            *out.entry(self.element_order(a)).or_default() += 1;
        }
        out
    }

    /// Whether x q x^-1 lies in the group for every element q.
    pub fn normalized_by(&self, x: &UnitQuaternion) -> bool {
        self.elements.iter().all(|q| self.contains(&x.conj_by(q)))
    }

    pub fn embed(&self, target: &Field) -> Result<FinSubgroupS3, GroupError> {
        let elements = self.elements.iter().map(|e| e.embed(target)).collect::<Result<Vec<_>, _>>()?;
        Ok(FinSubgroupS3::from_parts(target.clone(), elements, self.table.clone()))
    }

    /// Indices of the subgroup generated by the given indices.
    pub fn generated(&self, gens: &[u32]) -> Vec<u32> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut out = vec![0u32];
        let mut k = 0;
        while k < out.len() {
            let x = out[k];
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    out.push(y);
                }
            }
            k += 1;
        }
        out
    }

    /// A new group object for the subset given by indices (must be closed).
    pub fn subgroup(&self, members: &[u32]) -> FinSubgroupS3 {
        let mut members = members.to_vec();
        members.sort_unstable();
        members.dedup();
        let pos: HashMap<u32, u32> = members.iter().enumerate().map(|(i, &m)| (m, i as u32)).collect();
        let n = members.len();
        let mut table = Vec::with_capacity(n * n);
        for &a in &members {
            for &b in &members {
                table.push(pos[&self.mul(a, b)]);
            }
        }
        let elements = members.iter().map(|&m| self.elements[m as usize].clone()).collect();
        FinSubgroupS3::from_parts(self.field.clone(), elements, table)
    }
}

pub enum SymbolicSubgroup {
    Finite(Arc<FinSubgroupS3>),
    /// S^1 together with S^1 j.
    O2star,
    S3full,
}

impl fmt::Debug for SymbolicSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolicSubgroup::Finite(g) => write!(f, "Finite({:?})", classify(g).ok()),
            SymbolicSubgroup::O2star => write!(f, "O2star"),
            SymbolicSubgroup::S3full => write!(f, "S3full"),
        }
    }
}

fn cyclic_group(field: &Field, n: u32) -> Result<FinSubgroupS3, GroupError> {
    let elements = (0..n as i64)
        .map(|k| UnitQuaternion::root(field, k, n as u64))
        .collect::<Result<Vec<_>, _>>()?;
    let n = n as usize;
    let table = (0..n * n).map(|x| ((x / n + x % n) % n) as u32).collect();
    Ok(FinSubgroupS3::from_parts(field.clone(), elements, table))
}

fn bin_dihedral_group(field: &Field, order: u32) -> Result<FinSubgroupS3, GroupError> {
    let h = (order / 2) as usize;
    let j = UnitQuaternion::j(field);
    let mut elements = Vec::with_capacity(order as usize);
    for k in 0..h {
        elements.push(UnitQuaternion::root(field, k as i64, h as u64)?);
    }
    for k in 0..h {
        let z = elements[k].clone();
        elements.push(z.mul(&j));
    }
    let n = 2 * h;
    let mut table = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            let (ea, ja) = (a % h, a >= h);
            let (eb, jb) = (b % h, b >= h);
            let v = match (ja, jb) {
                (false, false) => (ea + eb) % h,
                (false, true) => h + (ea + eb) % h,
                (true, false) => h + (ea + h - eb) % h,
                (true, true) => (ea + h - eb + h / 2) % h,
            };
            table[a * n + b] = v as u32;
        }
    }
    Ok(FinSubgroupS3::from_parts(field.clone(), elements, table))
}

fn hurwitz_units(f: &Field) -> Vec<UnitQuaternion> {
    let mut out = Vec::with_capacity(24);
    for s in [1, -1] {
        let v = f.int(s);
        let z = f.zero();
        out.push(Quaternion::from_real_parts(&v, &z, &z, &z));
        out.push(Quaternion::from_real_parts(&z, &v, &z, &z));
        out.push(Quaternion::from_real_parts(&z, &z, &v, &z));
        out.push(Quaternion::from_real_parts(&z, &z, &z, &v));
    }
    for bits in 0..16 {
        let c: Vec<_> = (0..4).map(|b| f.rational(if bits >> b & 1 == 1 { -1 } else { 1 }, 2)).collect();
        out.push(Quaternion::from_real_parts(&c[0], &c[1], &c[2], &c[3]));
    }
    out.into_iter().map(UnitQuaternion::new_unchecked).collect()
}

fn polyhedral_group(tag: GroupTag) -> Result<FinSubgroupS3, GroupError> {
    let f = make_field(tag.natural_conductor());
    let tstar = hurwitz_units(&f);
    let elements = match tag {
        GroupTag::BinTetra => tstar,
        GroupTag::BinOcta => {
            let h = f.rational(1, 2);
            let r = &f.sqrt2()? * &h;
            let z = f.zero();
            let g = UnitQuaternion::new_unchecked(Quaternion::from_real_parts(&r, &z, &r, &z));
            let mut out = tstar.clone();
            out.extend(tstar.iter().map(|t| g.mul(t)));
            out
        }
        GroupTag::BinIcosa => {
            let tau = f.tau()?;
            let h = f.rational(1, 2);
            let z = f.zero();
            let g = UnitQuaternion::new_unchecked(Quaternion::from_real_parts(
                &(&tau.inv() * &h),
                &z,
                &(&tau * &h),
                &h,
            ));
            let mut out = Vec::with_capacity(120);
            let mut gr = UnitQuaternion::one(&f);
            for _ in 0..5 {
                out.extend(tstar.iter().map(|t| gr.mul(t)));
                gr = gr.mul(&g);
            }
            out
        }
        _ => unreachable!(),
    };
    Ok(FinSubgroupS3::from_elements(f, elements))
}

/// The standard copy of the group with the given tag, expressed in `field`.
pub fn standard_group(tag: GroupTag, field: &Field) -> Result<Arc<FinSubgroupS3>, GroupError> {
    static CACHE: OnceLock<Mutex<HashMap<(GroupTag, u32), Arc<FinSubgroupS3>>>> = OnceLock::new();
    tag.validate()?;
    let need = tag.natural_conductor();
    if field.conductor() % need != 0 {
        return Err(GroupError::Field(CycloError::ConductorMismatch {
            order: need as u64,
            conductor: field.conductor(),
        }));
    }
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(g) = cache.lock().expect("group cache poisoned").get(&(tag, field.conductor())) {
        return Ok(g.clone());
    }
    let natural = make_field(need);
    let cached = cache.lock().expect("group cache poisoned").get(&(tag, need)).cloned();
    let base = match cached {
        Some(g) => g,
        None => {
            let g = Arc::new(match tag {
                GroupTag::Cyclic(n) => cyclic_group(&natural, n)?,
                GroupTag::BinDihedral(n) => bin_dihedral_group(&natural, n)?,
                _ => polyhedral_group(tag)?,
            });
            cache.lock().expect("group cache poisoned").insert((tag, need), g.clone());
            g
        }
    };
    let g = if need == field.conductor() { base } else { Arc::new(base.embed(field)?) };
    cache.lock().expect("group cache poisoned").insert((tag, field.conductor()), g.clone());
    Ok(g)
}

/// Smallest subgroup containing the generators; fails past `cap` elements.
pub fn closure(gens: &[UnitQuaternion], cap: usize) -> Result<FinSubgroupS3, GroupError> {
    let field = match gens.first() {
        Some(g) => g.field().clone(),
        None => make_field(4),
    };
    let one = UnitQuaternion::one(&field);
    let mut elements = vec![one.clone()];
    let mut index: HashMap<UnitQuaternion, u32> = HashMap::from([(one, 0)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(k) = queue.pop_front() {
        for g in gens {
            if g.field().conductor() != field.conductor() {
                return Err(CycloError::FieldMismatch(field.conductor(), g.field().conductor()).into());
            }
            let y = elements[k].mul(g);
            if !index.contains_key(&y) {
                if elements.len() >= cap {
                    return Err(GroupError::CapExceeded(cap));
                }
                index.insert(y.clone(), elements.len() as u32);
                queue.push_back(elements.len());
                elements.push(y);
            }
        }
    }
    Ok(FinSubgroupS3::from_elements(field, elements))
}

pub fn classify(g: &FinSubgroupS3) -> Result<GroupTag, GroupError> {
    let n = g.order() as u32;
    let profile = g.order_profile();
    let max = *profile.keys().next_back().unwrap_or(&1);
    let candidates = [
        GroupTag::Cyclic(n),
        GroupTag::BinDihedral(n),
        GroupTag::BinTetra,
        GroupTag::BinOcta,
        GroupTag::BinIcosa,
    ];
    for tag in candidates {
        if tag.validate().is_err() || tag.order() != n as usize {
            continue;
        }
        if matches!(tag, GroupTag::BinDihedral(_)) && max != n / 2 {
            continue;
        }
        if tag.order_profile() == profile {
            return Ok(tag);
        }
    }
    Err(GroupError::NotRecognized(n as usize))
}

/// The normalizer in S^3 of the standard copy of `tag`.
pub fn normalizer_of(tag: GroupTag, field: &Field) -> Result<SymbolicSubgroup, GroupError> {
    tag.validate()?;
    Ok(match tag {
        GroupTag::Cyclic(n) if n > 2 => SymbolicSubgroup::O2star,
        GroupTag::Cyclic(_) => SymbolicSubgroup::S3full,
        GroupTag::BinDihedral(8) | GroupTag::BinTetra | GroupTag::BinOcta => {
            SymbolicSubgroup::Finite(standard_group(GroupTag::BinOcta, field)?)
        }
        GroupTag::BinDihedral(n) => SymbolicSubgroup::Finite(standard_group(GroupTag::BinDihedral(2 * n), field)?),
        GroupTag::BinIcosa => SymbolicSubgroup::Finite(standard_group(GroupTag::BinIcosa, field)?),
    })
}

pub fn conjugate_group(g: &FinSubgroupS3, by: &UnitQuaternion) -> FinSubgroupS3 {
    let elements = g.elements.iter().map(|q| by.conj_by(q)).collect();
    FinSubgroupS3::from_parts(g.field.clone(), elements, g.table.clone())
}

pub fn is_subgroup(a: &FinSubgroupS3, b: &FinSubgroupS3) -> bool {
    a.elements.iter().all(|q| b.contains(q))
}

/// The unit quaternion (i + j)/sqrt(2), which conjugates i to j. Needs 8 | N.
pub fn swap_ij(field: &Field) -> Result<UnitQuaternion, CycloError> {
    let r = &field.sqrt2()? * &field.rational(1, 2);
    let z = field.zero();
    Ok(UnitQuaternion::new_unchecked(Quaternion::from_real_parts(&z, &r, &r, &z)))
}

/// The explicit group {1, -1, j, -j}.
pub fn pm_j_group(field: &Field) -> Arc<FinSubgroupS3> {
    let one = UnitQuaternion::one(field);
    let j = UnitQuaternion::j(field);
    let elements = vec![one.clone(), j.clone(), one.neg(), j.neg()];
    let table = (0..16).map(|x| ((x / 4 + x % 4) % 4) as u32).collect();
    Arc::new(FinSubgroupS3::from_parts(field.clone(), elements, table))
}

/// Verifies a table against exact quaternion multiplication.
pub fn table_is_exact(g: &FinSubgroupS3) -> bool {
    let n = g.order() as u32;
    (0..n).all(|a| (0..n).all(|b| &qmul(g.element(a).quat(), g.element(b).quat()) == g.element(g.mul(a, b)).quat()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_orders() {
        let f = make_field(40);
        assert_eq!(standard_group(GroupTag::BinTetra, &f).unwrap().order(), 24);
        assert_eq!(standard_group(GroupTag::BinOcta, &f).unwrap().order(), 48);
        assert_eq!(standard_group(GroupTag::BinIcosa, &f).unwrap().order(), 120);
        let c1 = standard_group(GroupTag::Cyclic(1), &f).unwrap();
        assert_eq!(c1.order(), 1);
        assert!(c1.element(0).is_one());
        assert!(standard_group(GroupTag::BinOcta, &make_field(12)).is_err());
    }

    #[test]
    fn tables_match_exact_products() {
        let f = make_field(120);
        for tag in [
            GroupTag::Cyclic(6),
            GroupTag::Cyclic(5),
            GroupTag::BinDihedral(8),
            GroupTag::BinDihedral(12),
            GroupTag::BinDihedral(24),
            GroupTag::BinTetra,
            GroupTag::BinOcta,
            GroupTag::BinIcosa,
        ] {
            let g = standard_group(tag, &f).unwrap();
            assert!(table_is_exact(&g), "{}", tag);
            let closed = closure(g.elements(), DEFAULT_CAP).unwrap();
            assert_eq!(closed.order(), g.order(), "{}", tag);
        }
        assert!(table_is_exact(&pm_j_group(&f)));
    }

    #[test]
    fn closure_examples() {
        let f = make_field(24);
        let c4 = closure(&[UnitQuaternion::i(&f)], DEFAULT_CAP).unwrap();
        assert_eq!(classify(&c4).unwrap(), GroupTag::Cyclic(4));
        let t = hurwitz_units(&f)[8].clone();
        let tstar = closure(&[t, UnitQuaternion::j(&f)], DEFAULT_CAP).unwrap();
        assert_eq!(tstar.order(), 24);
        assert!(is_subgroup(&tstar, &standard_group(GroupTag::BinTetra, &f).unwrap()));
        let d = closure(&[UnitQuaternion::root(&f, 1, 12).unwrap(), UnitQuaternion::j(&f)], DEFAULT_CAP).unwrap();
        assert_eq!(classify(&d).unwrap(), GroupTag::BinDihedral(24));
        let d48 = closure(&[UnitQuaternion::root(&f, 1, 24).unwrap(), UnitQuaternion::j(&f)], DEFAULT_CAP).unwrap();
        assert_eq!(d48.order(), 48);
        assert_eq!(classify(&d48).unwrap(), GroupTag::BinDihedral(48));
    }

    #[test]
    fn closure_cap() {
        let f = make_field(4);
        let q = Quaternion::from_real_parts(&f.rational(3, 5), &f.rational(4, 5), &f.zero(), &f.zero());
        let g = UnitQuaternion::new(q).unwrap();
        assert_eq!(closure(&[g], 100).unwrap_err(), GroupError::CapExceeded(100));
    }

    #[test]
    fn classify_round_trip() {
        for n in 1..=24u32 {
            let f = make_field(n.lcm(&4));
            let g = standard_group(GroupTag::Cyclic(n), &f).unwrap();
            assert_eq!(classify(&g).unwrap(), GroupTag::Cyclic(n));
            if n % 4 == 0 && n >= 8 {
                let f = make_field((n / 2).lcm(&4));
                let g = standard_group(GroupTag::BinDihedral(n), &f).unwrap();
                assert_eq!(classify(&g).unwrap(), GroupTag::BinDihedral(n));
            }
        }
        let f = make_field(40);
        for tag in [GroupTag::BinTetra, GroupTag::BinOcta, GroupTag::BinIcosa] {
            assert_eq!(classify(&standard_group(tag, &f).unwrap()).unwrap(), tag);
        }
    }

    #[test]
    fn pm_j_is_conjugate_to_c4() {
        let f = make_field(8);
        let c = swap_ij(&f).unwrap();
        let i = UnitQuaternion::i(&f);
        assert_eq!(c.conj_by(&i), UnitQuaternion::j(&f));
        let g = pm_j_group(&f);
        assert_eq!(classify(&g).unwrap(), GroupTag::Cyclic(4));
        let back = conjugate_group(&g, &c.inv());
        let c4 = standard_group(GroupTag::Cyclic(4), &f).unwrap();
        assert!(is_subgroup(&back, &c4) && is_subgroup(&c4, &back));
    }

    #[test]
    fn normalizers() {
        let f = make_field(48);
        assert!(matches!(normalizer_of(GroupTag::Cyclic(2), &f).unwrap(), SymbolicSubgroup::S3full));
        assert!(matches!(normalizer_of(GroupTag::Cyclic(1), &f).unwrap(), SymbolicSubgroup::S3full));
        assert!(matches!(normalizer_of(GroupTag::Cyclic(6), &f).unwrap(), SymbolicSubgroup::O2star));
        let cases = [
            (GroupTag::BinDihedral(8), GroupTag::BinOcta),
            (GroupTag::BinDihedral(12), GroupTag::BinDihedral(24)),
            (GroupTag::BinDihedral(24), GroupTag::BinDihedral(48)),
            (GroupTag::BinTetra, GroupTag::BinOcta),
            (GroupTag::BinOcta, GroupTag::BinOcta),
        ];
        for (t, nt) in cases {
            match normalizer_of(t, &f).unwrap() {
                SymbolicSubgroup::Finite(n) => {
                    assert_eq!(classify(&n).unwrap(), nt);
                    let g = standard_group(t, &f).unwrap();
                    assert!(n.elements().iter().all(|x| g.normalized_by(x)));
                    assert!(is_subgroup(&g, &n));
                }
                _ => panic!("expected finite normalizer"),
            }
        }
        let f = make_field(20);
        match normalizer_of(GroupTag::BinIcosa, &f).unwrap() {
            SymbolicSubgroup::Finite(n) => assert_eq!(classify(&n).unwrap(), GroupTag::BinIcosa),
            _ => panic!(),
        }
    }

    #[test]
    fn conjugation_and_inclusion() {
        let f = make_field(24);
        let c4 = standard_group(GroupTag::Cyclic(4), &f).unwrap();
        let cj = conjugate_group(&c4, &UnitQuaternion::j(&f));
        assert!(is_subgroup(&cj, &c4) && is_subgroup(&c4, &cj));
        let t = standard_group(GroupTag::BinTetra, &f).unwrap();
        assert!(is_subgroup(&t, &standard_group(GroupTag::BinOcta, &f).unwrap()));
        let order3 = t.elements().iter().position(|x| x.order(10) == Some(3)).unwrap();
        let c3 = closure(&[t.elements()[order3].clone()], DEFAULT_CAP).unwrap();
        assert_eq!(c3.order(), 3);
        assert!(is_subgroup(&c3, &t));
        assert_eq!(t.order() % c3.order(), 0);
    }

    #[test]
    fn closure_idempotent() {
        let f = make_field(8);
        let o = standard_group(GroupTag::BinOcta, &f).unwrap();
        let gens = [o.element(5).clone(), o.element(30).clone()];
        let a = closure(&gens, DEFAULT_CAP).unwrap();
        let b = closure(a.elements(), DEFAULT_CAP).unwrap();
        assert_eq!(a.order(), b.order());
        assert!(is_subgroup(&a, &b));
        assert_eq!(o.order() % a.order(), 0);
    }
}
