use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde_json::json;

/// A finite group given by its multiplication table. Element 0 is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyTable {
    n: usize,
    t: Vec<u32>,
}

impl CayleyTable {
    /// Builds a table from a multiplication function; the identity may sit anywhere.
    pub fn from_fn(n: usize, mul: impl Fn(u32, u32) -> u32) -> Option<CayleyTable> {
        let raw: Vec<u32> = (0..n * n).map(|x| mul((x / n) as u32, (x % n) as u32)).collect();
        if raw.iter().any(|&v| v as usize >= n) {
            return None;
        }
        let e = (0..n).find(|&e| (0..n).all(|x| raw[e * n + x] as usize == x && raw[x * n + e] as usize == x))?;
        // relabel so the identity comes first
        let perm: Vec<u32> = (0..n as u32).map(|x| if x == 0 { e as u32 } else if x as usize == e { 0 } else { x }).collect();
        let t = (0..n * n).map(|x| perm[raw[perm[x / n] as usize * n + perm[x % n] as usize] as usize]).collect();
        let g = CayleyTable { n, t };
        g.is_group().then_some(g)
    }

    fn is_group(&self) -> bool {
        let n = self.n;
        let latin = (0..n).all(|a| {
            let row: HashSet<u32> = (0..n).map(|b| self.t[a * n + b]).collect();
            row.len() == n
        });
        if !latin {
            return false;
        }
        if n > 64 {
            return true;
        }
        (0..n as u32).all(|a| (0..n as u32).all(|b| (0..n as u32).all(|c| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c)))))
    }

    pub fn trivial() -> CayleyTable {
        CayleyTable { n: 1, t: vec![0] }
    }

    pub fn cyclic(k: usize) -> CayleyTable {
        CayleyTable { n: k, t: (0..k * k).map(|x| ((x / k + x % k) % k) as u32).collect() }
    }

    /// Dihedral group of order 2k, elements r^a s^b stored as a + k b.
    pub fn dihedral(order: usize) -> CayleyTable {
        let k = order / 2;
        let mut t = vec![0u32; order * order];
        for x in 0..order {
            for y in 0..order {
                let (a, b) = (x % k, x / k);
                let (c, d) = (y % k, y / k);
                let rot = if b == 0 { (a + c) % k } else { (a + k - c) % k };
                t[x * order + y] = (rot + k * ((b + d) % 2)) as u32;
            }
        }
        CayleyTable { n: order, t }
    }

    /// The symmetric group on four letters.
    pub fn sym4() -> CayleyTable {
        let mut perms: Vec<[u8; 4]> = Vec::new();
        for a in 0..4u8 {
            for b in 0..4u8 {
                for c in 0..4u8 {
                    for d in 0..4u8 {
                        let p = [a, b, c, d];
                        if p.iter().collect::<HashSet<_>>().len() == 4 {
                            perms.push(p);
                        }
                    }
                }
            }
        }
        let index: HashMap<[u8; 4], u32> = perms.iter().enumerate().map(|(i, p)| (*p, i as u32)).collect();
        CayleyTable::from_fn(24, |x, y| {
            let (p, q) = (perms[x as usize], perms[y as usize]);
            index[&[p[q[0] as usize], p[q[1] as usize], p[q[2] as usize], p[q[3] as usize]]]
        })
        .expect("S4 is a group")
    }

    pub fn product(&self, o: &CayleyTable) -> CayleyTable {
        let (n, m) = (self.n, o.n);
        let size = n * m;
        let mut t = vec![0u32; size * size];
        for x in 0..size {
            for y in 0..size {
                let a = self.t[(x / m) * n + y / m] as usize;
                let b = o.t[(x % m) * m + y % m] as usize;
                t[x * size + y] = (a * m + b) as u32;
            }
        }
        CayleyTable { n: size, t }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.t[a as usize * self.n + b as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        (0..self.n as u32).find(|&b| self.mul(a, b) == 0).expect("group element has an inverse")
    }

    pub fn element_order(&self, a: u32) -> u32 {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n as u32).all(|a| (0..self.n as u32).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn order_profile(&self) -> BTreeMap<u32, usize> {
        let mut out = BTreeMap::new();
        for a in 0..self.n as u32 {
            *out.entry(self.element_order(a)).or_insert(0) += 1;
        }
        out
    }

    fn centralizer_size(&self, a: u32) -> usize {
        (0..self.n as u32).filter(|&b| self.mul(a, b) == self.mul(b, a)).count()
    }

    pub fn center_size(&self) -> usize {
        (0..self.n as u32).filter(|&a| self.centralizer_size(a) == self.n).count()
    }

    /// Subgroup generated by the given elements.
    pub fn generated(&self, gens: &[u32]) -> Vec<u32> {
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut out = vec![0u32];
        let mut k = 0;
        while k < out.len() {
            for &g in gens {
                let y = self.mul(out[k], g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    out.push(y);
                }
            }
            k += 1;
        }
        out
    }

    pub fn derived_subgroup(&self) -> Vec<u32> {
        let n = self.n as u32;
        let mut comms: Vec<u32> = Vec::new();
        let mut seen = HashSet::new();
        for a in 0..n {
            for b in 0..n {
                let c = self.mul(self.mul(a, b), self.inv(self.mul(b, a)));
                if seen.insert(c) {
                    comms.push(c);
                }
            }
        }
        self.generated(&comms)
    }

    /// Quotient by a normal subgroup, or None if the subgroup is not normal.
    pub fn quotient(&self, normal: &[u32]) -> Option<CayleyTable> {
        let mut coset = vec![u32::MAX; self.n];
        let mut reps = Vec::new();
        for x in 0..self.n as u32 {
            if coset[x as usize] != u32::MAX {
                continue;
            }
            for &k in normal {
                let y = self.mul(x, k);
                if coset[y as usize] != u32::MAX {
                    return None;
                }
                coset[y as usize] = reps.len() as u32;
            }
            reps.push(x);
        }
        let q = reps.len();
        let mut t = vec![0u32; q * q];
        for a in 0..q {
            for b in 0..q {
                t[a * q + b] = coset[self.mul(reps[a], reps[b]) as usize];
            }
        }
        // left and right cosets must agree
        for &x in &reps {
            for &k in normal {
                if coset[self.mul(k, x) as usize] != coset[x as usize] {
                    return None;
                }
            }
        }
        Some(CayleyTable { n: q, t })
    }

    fn fingerprint(&self) -> (usize, usize, usize, BTreeMap<(u32, usize), usize>) {
        let mut classes = BTreeMap::new();
        for a in 0..self.n as u32 {
            *classes.entry((self.element_order(a), self.centralizer_size(a))).or_insert(0) += 1;
        }
        (self.n, self.center_size(), self.derived_subgroup().len(), classes)
    }

    fn generators(&self) -> Vec<u32> {
        let mut order: Vec<u32> = (1..self.n as u32).collect();
        order.sort_by_key(|&a| std::cmp::Reverse(self.element_order(a)));
        let mut gens = Vec::new();
        let mut span: HashSet<u32> = HashSet::from([0]);
        for a in order {
            if span.len() == self.n {
                break;
            }
            if !span.contains(&a) {
                gens.push(a);
                span = self.generated(&gens).into_iter().collect();
            }
        }
        gens
    }

    /// Extends generator images to a map; consistency on every Cayley-graph edge makes it a homomorphism.
    fn extend(&self, o: &CayleyTable, gens: &[u32], images: &[u32]) -> Option<Vec<u32>> {
        let mut map = vec![u32::MAX; self.n];
        map[0] = 0;
        let mut queue = vec![0u32];
        let mut k = 0;
        while k < queue.len() {
            let x = queue[k];
            for (&a, &b) in gens.iter().zip(images) {
                let y = self.mul(x, a);
                let v = o.mul(map[x as usize], b);
                if map[y as usize] == u32::MAX {
                    map[y as usize] = v;
                    queue.push(y);
                } else if map[y as usize] != v {
                    return None;
                }
            }
            k += 1;
        }
        Some(map)
    }

    pub fn is_isomorphic(&self, o: &CayleyTable) -> bool {
        if self.fingerprint() != o.fingerprint() {
            return false;
        }
        let gens = self.generators();
        let classes: Vec<Vec<u32>> = gens
            .iter()
            .map(|&g| {
                let key = (self.element_order(g), self.centralizer_size(g));
                (0..o.n as u32).filter(|&x| (o.element_order(x), o.centralizer_size(x)) == key).collect()
            })
            .collect();
        let mut images = Vec::with_capacity(gens.len());
        self.search(o, &gens, &classes, &mut images)
    }

    fn search(&self, o: &CayleyTable, gens: &[u32], classes: &[Vec<u32>], images: &mut Vec<u32>) -> bool {
        if images.len() == gens.len() {
            return match self.extend(o, gens, images) {
                Some(map) => map.iter().collect::<HashSet<_>>().len() == self.n,
                None => false,
            };
        }
        for &c in &classes[images.len()] {
            images.push(c);
            if self.extend(o, &gens[..images.len()], images).is_some() && self.search(o, gens, classes, images) {
                return true;
            }
            images.pop();
        }
        false
    }
}

/// Isomorphism type of a small finite group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FiniteGroupId {
    Cyclic(u32),
    ElemAbelian2(u32),
    /// dihedral group of the given order
    Dihedral(u32),
    /// the octahedral group, isomorphic to S4
    Oct,
    Product(Vec<FiniteGroupId>),
    Raw { order: usize, abelianization: Vec<u32>, element_orders: Vec<(u32, usize)> },
}

impl FiniteGroupId {
    pub fn trivial() -> FiniteGroupId {
        FiniteGroupId::Cyclic(1)
    }

    /// Canonical direct product: flattens, merges Z2 factors and drops trivial ones.
    pub fn product(factors: Vec<FiniteGroupId>) -> FiniteGroupId {
        let mut twos = 0;
        let mut rest = Vec::new();
        let mut stack = factors;
        while let Some(f) = stack.pop() {
            match f {
                FiniteGroupId::Product(v) => stack.extend(v),
                FiniteGroupId::Cyclic(1) => {}
                FiniteGroupId::Cyclic(2) => twos += 1,
                FiniteGroupId::ElemAbelian2(k) => twos += k,
                other => rest.push(other),
            }
        }
        match twos {
            0 => {}
            1 => rest.push(FiniteGroupId::Cyclic(2)),
            k => rest.push(FiniteGroupId::ElemAbelian2(k)),
        }
        rest.sort();
        match rest.len() {
            0 => FiniteGroupId::trivial(),
            1 => rest.pop().expect("one factor"),
            _ => FiniteGroupId::Product(rest),
        }
    }

    pub fn order(&self) -> usize {
        match self {
            FiniteGroupId::Cyclic(n) | FiniteGroupId::Dihedral(n) => *n as usize,
            FiniteGroupId::ElemAbelian2(k) => 1 << k,
            FiniteGroupId::Oct => 24,
            FiniteGroupId::Product(v) => v.iter().map(|f| f.order()).product(),
            FiniteGroupId::Raw { order, .. } => *order,
        }
    }

    pub fn is_raw(&self) -> bool {
        matches!(self, FiniteGroupId::Raw { .. })
    }

    /// A concrete multiplication table for a recognized type.
    pub fn table(&self) -> Option<CayleyTable> {
        Some(match self {
            FiniteGroupId::Cyclic(n) => CayleyTable::cyclic(*n as usize),
            FiniteGroupId::ElemAbelian2(k) => {
                (0..*k).fold(CayleyTable::trivial(), |acc, _| acc.product(&CayleyTable::cyclic(2)))
            }
            FiniteGroupId::Dihedral(n) => CayleyTable::dihedral(*n as usize),
            FiniteGroupId::Oct => CayleyTable::sym4(),
            FiniteGroupId::Product(v) => {
                let mut acc = CayleyTable::trivial();
                for f in v {
                    acc = acc.product(&f.table()?);
                }
                acc
            }
            FiniteGroupId::Raw { .. } => return None,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            FiniteGroupId::Cyclic(n) => json!({"type": "cyclic", "n": n}),
            FiniteGroupId::ElemAbelian2(k) => json!({"type": "elementary_abelian_2", "rank": k}),
            FiniteGroupId::Dihedral(n) => json!({"type": "dihedral", "order": n}),
            FiniteGroupId::Oct => json!({"type": "octahedral"}),
            FiniteGroupId::Product(v) => json!({"type": "product", "factors": v.iter().map(|f| f.to_json()).collect::<Vec<_>>()}),
            FiniteGroupId::Raw { order, abelianization, element_orders } => json!({
                "type": "raw",
                "order": order,
                "abelianization": abelianization,
                "element_orders": element_orders,
            }),
        }
    }
}

impl fmt::Display for FiniteGroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiniteGroupId::Cyclic(1) => write!(f, "1"),
            FiniteGroupId::Cyclic(n) => write!(f, "Z{}", n),
            FiniteGroupId::ElemAbelian2(k) => write!(f, "Z2^{}", k),
            FiniteGroupId::Dihedral(n) => write!(f, "D{}", n),
            FiniteGroupId::Oct => write!(f, "O"),
            FiniteGroupId::Product(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "{}", parts.join("×"))
            }
            FiniteGroupId::Raw { order, .. } => write!(f, "raw({})", order),
        }
    }
}

impl std::str::FromStr for FiniteGroupId {
    type Err = String;

    /// Parses names such as "1", "Z3", "Z2^2", "D6", "O", "D6×Z2".
    fn from_str(s: &str) -> Result<FiniteGroupId, String> {
        let parts: Vec<&str> = s.split(['×', 'x']).map(str::trim).collect();
        if parts.len() > 1 {
            let factors = parts.iter().map(|p| p.parse()).collect::<Result<Vec<_>, _>>()?;
            return Ok(FiniteGroupId::product(factors));
        }
        let bad = || format!("unknown group name {:?}", s);
        let num = |t: &str| t.parse::<u32>().map_err(|_| bad());
        match s {
            "1" => Ok(FiniteGroupId::trivial()),
            "O" => Ok(FiniteGroupId::Oct),
            _ if s.starts_with("Z2^") => Ok(FiniteGroupId::product(vec![FiniteGroupId::ElemAbelian2(num(&s[3..])?)])),
            _ if s.starts_with('Z') => Ok(FiniteGroupId::product(vec![FiniteGroupId::Cyclic(num(&s[1..])?)])),
            _ if s.starts_with('D') => Ok(FiniteGroupId::Dihedral(num(&s[1..])?)),
            _ => Err(bad()),
        }
    }
}

/// Invariant factors of an abelian group from its element-order counts.
fn abelian_invariants(g: &CayleyTable) -> Vec<u32> {
    let orders: Vec<u64> = (0..g.order() as u32).map(|a| g.element_order(a) as u64).collect();
    let ilog = |mut c: u64, p: u64| {
        let mut k = 0u32;
        while c > 1 {
            c /= p;
            k += 1;
        }
        k
    };
    let mut per_prime: Vec<(u64, Vec<u32>)> = Vec::new();
    let mut rest = g.order() as u64;
    let mut p = 2u64;
    while rest > 1 {
        if rest % p != 0 {
            p += 1;
            continue;
        }
        let mut a = 0;
        while rest % p == 0 {
            rest /= p;
            a += 1;
        }
        // d[k] counts the cyclic factors whose p-exponent is at least k
        let logs: Vec<u32> = (0..=a)
            .map(|k| ilog(orders.iter().filter(|&&o| p.pow(k) % o == 0).count() as u64, p))
            .collect();
        let d: Vec<u32> = (1..=a as usize).map(|k| logs[k] - logs[k - 1]).chain([0]).collect();
        let mut exps = Vec::new();
        for k in 1..=a as usize {
            for _ in 0..d[k - 1] - d[k] {
                exps.push(k as u32);
            }
        }
        exps.sort_unstable_by(|x, y| y.cmp(x));
        per_prime.push((p, exps));
    }
    let len = per_prime.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
    let mut factors: Vec<u32> = (0..len)
        .map(|i| per_prime.iter().map(|(p, e)| e.get(i).map(|&k| p.pow(k) as u32).unwrap_or(1)).product())
        .collect();
    factors.sort_unstable();
    factors
}

fn abelian_id(invariants: &[u32]) -> FiniteGroupId {
    FiniteGroupId::product(invariants.iter().map(|&k| FiniteGroupId::Cyclic(k)).collect())
}

fn nonabelian_candidates(n: usize) -> Vec<FiniteGroupId> {
    use FiniteGroupId::*;
    let mut out = Vec::new();
    for a in 3..=n / 4 {
        for b in a..=n / 4 {
            if 4 * a * b == n {
                out.push(FiniteGroupId::product(vec![Dihedral(2 * a as u32), Dihedral(2 * b as u32)]));
            }
        }
    }
    for e in 1..8u32 {
        let rest = n >> e;
        if rest << e != n {
            break;
        }
        if rest >= 6 && rest % 2 == 0 {
            out.push(FiniteGroupId::product(vec![Dihedral(rest as u32), ElemAbelian2(e)]));
        }
        if rest == 24 {
            out.push(FiniteGroupId::product(vec![Oct, ElemAbelian2(e)]));
        }
    }
    if n >= 6 && n % 2 == 0 {
        out.push(Dihedral(n as u32));
    }
    if n == 24 {
        out.push(Oct);
    }
    out
}

/// Recognizes the isomorphism type of a finite group given by its table.
pub fn recognize(g: &CayleyTable) -> FiniteGroupId {
    if g.is_abelian() {
        return abelian_id(&abelian_invariants(g));
    }
    for cand in nonabelian_candidates(g.order()) {
        if let Some(t) = cand.table() {
            if g.is_isomorphic(&t) {
                return cand;
            }
        }
    }
    let derived = g.derived_subgroup();
    let abelianization = g.quotient(&derived).map(|q| abelian_invariants(&q)).unwrap_or_default();
    FiniteGroupId::Raw {
        order: g.order(),
        abelianization,
        element_orders: g.order_profile().into_iter().collect(),
    }
}

/// Recognizes a group given by elements and a multiplication oracle.
pub fn recognize_elements<T: Clone + Eq + std::hash::Hash>(elements: &[T], mul: impl Fn(&T, &T) -> T) -> Option<FiniteGroupId> {
    let index: HashMap<&T, u32> = elements.iter().enumerate().map(|(i, e)| (e, i as u32)).collect();
    let n = elements.len();
    let mut t = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            t[a * n + b] = *index.get(&mul(&elements[a], &elements[b]))?;
        }
    }
    let g = CayleyTable::from_fn(n, |a, b| t[a as usize * n + b as usize])?;
    Some(recognize(&g))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sym4_is_octahedral() {
        assert_eq!(recognize(&CayleyTable::sym4()), FiniteGroupId::Oct);
    }

    #[test]
    fn small_abelian() {
        assert_eq!(recognize(&CayleyTable::cyclic(2)), FiniteGroupId::Cyclic(2));
        assert_eq!(recognize(&CayleyTable::trivial()), FiniteGroupId::trivial());
        let klein = CayleyTable::cyclic(2).product(&CayleyTable::cyclic(2));
        assert_eq!(recognize(&klein), FiniteGroupId::ElemAbelian2(2));
        let z6 = CayleyTable::cyclic(2).product(&CayleyTable::cyclic(3));
        assert_eq!(recognize(&z6), FiniteGroupId::Cyclic(6));
        let z2z4 = CayleyTable::cyclic(2).product(&CayleyTable::cyclic(4));
        assert_eq!(recognize(&z2z4), FiniteGroupId::Product(vec![FiniteGroupId::Cyclic(2), FiniteGroupId::Cyclic(4)]));
        let z2z2z2 = klein.product(&CayleyTable::cyclic(2));
        assert_eq!(recognize(&z2z2z2), FiniteGroupId::ElemAbelian2(3));
    }

    #[test]
    fn dihedral_names_prefer_products() {
        assert_eq!(recognize(&CayleyTable::dihedral(6)), FiniteGroupId::Dihedral(6));
        assert_eq!(recognize(&CayleyTable::dihedral(8)), FiniteGroupId::Dihedral(8));
        let d12 = recognize(&CayleyTable::dihedral(12));
        assert_eq!(d12, "D6×Z2".parse().unwrap());
        let d6d6 = CayleyTable::dihedral(6).product(&CayleyTable::dihedral(6));
        assert_eq!(recognize(&d6d6), "D6×D6".parse().unwrap());
        let oz2 = CayleyTable::sym4().product(&CayleyTable::cyclic(2));
        assert_eq!(recognize(&oz2), "O×Z2".parse().unwrap());
    }

    #[test]
    fn quaternion_group_falls_back_to_raw() {
        let q8 = CayleyTable::from_fn(8, |a, b| {
            // elements +-1, +-i, +-j, +-k as (sign, unit)
            let units = [[0, 1, 2, 3], [1, 4, 3, 6], [2, 7, 4, 1], [3, 2, 5, 4]];
            let (sa, ua) = (a / 4, a % 4);
            let (sb, ub) = (b / 4, b % 4);
            let v = units[ua as usize][ub as usize];
            let (sv, uv) = if v >= 4 { (1, v - 4) } else { (0, v) };
            uv + 4 * ((sa + sb + sv) % 2)
        })
        .unwrap();
        let id = recognize(&q8);
        assert!(id.is_raw());
        assert_eq!(id.order(), 8);
    }

    #[test]
    fn names_round_trip() {
        for s in ["1", "Z2", "Z3", "Z2^2", "Z2^3", "D6", "O", "D6×Z2", "D6×D6", "O×Z2", "D8×Z2"] {
            let id: FiniteGroupId = s.parse().unwrap();
            assert_eq!(id.to_string().parse::<FiniteGroupId>().unwrap(), id);
            assert_eq!(recognize(&id.table().unwrap()), id, "{}", s);
        }
    }

    #[test]
    fn quotient_of_d8_by_center() {
        let d8 = CayleyTable::dihedral(8);
        let center: Vec<u32> = (0..8).filter(|&a| (0..8).all(|b| d8.mul(a, b) == d8.mul(b, a))).collect();
        assert_eq!(recognize(&d8.quotient(&center).unwrap()), FiniteGroupId::ElemAbelian2(2));
    }
}
