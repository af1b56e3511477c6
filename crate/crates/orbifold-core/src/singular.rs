//! Singular locus of S^3 / G: fixed circles of nontrivial elements, their G-orbits (edges)
//! and the points where several circles meet (vertices).

use std::collections::HashMap;
use std::fmt;

use serde_json::json;
use thiserror::Error;

use crate::cyclo::CycloNumber;
use crate::duval::{FamilySpec, ProductGroup};
use crate::groups3::{classify, closure, GroupError, GroupTag};
use crate::quat::{qmul, IsometryS3, Quaternion, UnitQuaternion};

#[derive(Debug, Error)]
pub enum SingularError {
    #[error("fixed sets are computed for orientation-preserving isometries only")]
    Reversing,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("point stabilizer of order {0} is not a finite subgroup of SO(3)")]
    LocalGroup(usize),
}

pub type Vec4 = [CycloNumber; 4];

fn to_vec(q: &Quaternion) -> Vec4 {
    q.real_parts()
}

fn to_quat(v: &Vec4) -> Quaternion {
    Quaternion::from_real_parts(&v[0], &v[1], &v[2], &v[3])
}

fn dot(a: &Vec4, b: &Vec4) -> CycloNumber {
    let mut acc = &a[0] * &b[0];
    for k in 1..4 {
        acc = &acc + &(&a[k] * &b[k]);
    }
    acc
}

fn scale(v: &Vec4, c: &CycloNumber) -> Vec4 {
    std::array::from_fn(|k| &v[k] * c)
}

fn sub(a: &Vec4, b: &Vec4) -> Vec4 {
    std::array::from_fn(|k| &a[k] - &b[k])
}

fn add(a: &Vec4, b: &Vec4) -> Vec4 {
    std::array::from_fn(|k| &a[k] + &b[k])
}

/// Reduced row echelon form; zero rows are dropped.
fn rref(mut rows: Vec<Vec4>) -> Vec<Vec4> {
    let mut r = 0;
    for c in 0..4 {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].inv();
        rows[r] = scale(&rows[r], &inv);
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                rows[i] = sub(&rows[i], &scale(&rows[r], &f));
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

fn pivot(row: &Vec4) -> usize {
    row.iter().position(|x| !x.is_zero()).expect("nonzero row")
}

/// Basis of {x : x . row = 0 for every row}.
fn nullspace(rows: Vec<Vec4>) -> Vec<Vec4> {
    let f = rows[0][0].field().clone();
    let reduced = rref(rows);
    let pivots: Vec<usize> = reduced.iter().map(pivot).collect();
    let mut out = Vec::new();
    for free in (0..4).filter(|c| !pivots.contains(c)) {
        let mut v: Vec4 = std::array::from_fn(|_| f.zero());
        v[free] = f.one();
        for (row, &pc) in reduced.iter().zip(&pivots) {
            v[pc] = -&row[free];
        }
        out.push(v);
    }
    out
}

/// The positive ray through a nonzero vector: the first nonzero coordinate is scaled to +-1.
fn direction(v: &Vec4) -> Vec4 {
    let k = pivot(v);
    let c = v[k].inv();
    let c = if v[k].real_sign() == std::cmp::Ordering::Less { -c } else { c };
    scale(v, &c)
}

/// A great circle of S^3, stored as the reduced row echelon basis of its 2-plane.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CircleDescriptor {
    basis: [Vec4; 2],
}

impl fmt::Debug for CircleDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{:?}", self.basis)
    }
}

impl CircleDescriptor {
    fn from_span(vectors: Vec<Vec4>) -> Option<CircleDescriptor> {
        let r = rref(vectors);
        (r.len() == 2).then(|| CircleDescriptor { basis: [r[0].clone(), r[1].clone()] })
    }

    pub fn basis(&self) -> &[Vec4; 2] {
        &self.basis
    }

    pub fn contains(&self, v: &Vec4) -> bool {
        rref(vec![self.basis[0].clone(), self.basis[1].clone(), v.clone()]).len() == 2
    }

    /// a * b0 + b * b1 (not normalized).
    pub fn point(&self, a: i64, b: i64) -> Vec4 {
        let f = self.basis[0][0].field().clone();
        add(&scale(&self.basis[0], &f.int(a)), &scale(&self.basis[1], &f.int(b)))
    }

    fn image(&self, p: &UnitQuaternion, q: &UnitQuaternion) -> CircleDescriptor {
        CircleDescriptor::from_span(self.basis.iter().map(|b| act(p, q, b)).collect()).expect("isometries preserve planes")
    }

    /// Determinant of (p, q) restricted to the plane, when it preserves it.
    fn restricted_det_negative(&self, p: &UnitQuaternion, q: &UnitQuaternion) -> bool {
        let (c0, c1) = (pivot(&self.basis[0]), pivot(&self.basis[1]));
        let w0 = act(p, q, &self.basis[0]);
        let w1 = act(p, q, &self.basis[1]);
        let det = &(&w0[c0] * &w1[c1]) - &(&w0[c1] * &w1[c0]);
        det.real_sign() == std::cmp::Ordering::Less
    }

    /// The line shared with another plane, if the planes meet in exactly a line.
    fn meet(&self, o: &CircleDescriptor) -> Option<Vec4> {
        let [a0, a1] = &self.basis;
        let [b0, b1] = &o.basis;
        // columns a0, a1, -b0, -b1 as rows of the transpose
        let rows: Vec<Vec4> = (0..4).map(|k| [a0[k].clone(), a1[k].clone(), -&b0[k], -&b1[k]]).collect();
        let kernel = nullspace(rows);
        if kernel.len() != 1 {
            return None;
        }
        let c = &kernel[0];
        Some(add(&scale(a0, &c[0]), &scale(a1, &c[1])))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let row = |v: &Vec4| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        json!([row(&self.basis[0]), row(&self.basis[1])])
    }
}

fn act(p: &UnitQuaternion, q: &UnitQuaternion, v: &Vec4) -> Vec4 {
    to_vec(&qmul(&qmul(p.quat(), &to_quat(v)), q.inv().quat()))
}

fn fixes(p: &UnitQuaternion, q: &UnitQuaternion, v: &Vec4) -> bool {
    qmul(p.quat(), &to_quat(v)) == qmul(&to_quat(v), q.quat())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FixedSet {
    Empty,
    All,
    Circle(CircleDescriptor),
}

/// Fixed points of h -> p h q^-1.
pub fn fixed_set_of_pair(p: &UnitQuaternion, q: &UnitQuaternion) -> FixedSet {
    if p.quat().real_parts()[0] != q.quat().real_parts()[0] {
        return FixedSet::Empty;
    }
    let f = p.field().clone();
    let basis = [Quaternion::one(&f), Quaternion::i(&f), Quaternion::j(&f), Quaternion::k(&f)];
    // column k is the image of the k-th basis vector under h -> p h - h q
    let cols: Vec<Vec4> = basis.iter().map(|e| to_vec(&qmul(p.quat(), e).sub(&qmul(e, q.quat())))).collect();
    let rows: Vec<Vec4> = (0..4).map(|r| std::array::from_fn(|c| cols[c][r].clone())).collect();
    let kernel = nullspace(rows);
    match kernel.len() {
        4 => FixedSet::All,
        2 => FixedSet::Circle(CircleDescriptor::from_span(kernel).expect("two independent vectors")),
        _ => FixedSet::Empty,
    }
}

/// Fixed points of h -> p h q^-1 on S^3.
pub fn fixed_set(f: &IsometryS3) -> Result<FixedSet, SingularError> {
    if f.reversing() {
        return Err(SingularError::Reversing);
    }
    Ok(fixed_set_of_pair(f.p(), f.q()))
}

fn is_trivial(p: &UnitQuaternion, q: &UnitQuaternion) -> bool {
    (p.is_one() && q.is_one()) || (p.is_minus_one() && q.is_minus_one())
}

pub fn is_free_action(g: &ProductGroup) -> bool {
    g.quat_pairs().all(|(p, q)| is_trivial(p, q) || p.quat().real_parts()[0] != q.quat().real_parts()[0])
}

/// A circle of S^3 fixed pointwise by a nontrivial element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedCircle {
    pub circle: CircleDescriptor,
    /// order of the cyclic group of isometries fixing the circle pointwise
    pub index: u32,
    /// position of the circle's edge in the quotient graph
    pub edge: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LocalGroup {
    Dihedral(u32),
    Tetrahedral,
    Octahedral,
    Icosahedral,
}

impl fmt::Display for LocalGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalGroup::Dihedral(n) => write!(f, "dihedral({})", n),
            LocalGroup::Tetrahedral => f.write_str("tetra"),
            LocalGroup::Octahedral => f.write_str("octa"),
            LocalGroup::Icosahedral => f.write_str("icosa"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularEdge {
    pub index: u32,
    /// the quotient edge is a segment: some element reverses the circle with two fixed points on it
    pub arc: bool,
    pub orbit_size: usize,
    pub setwise_stabilizer: usize,
    pub representative: CircleDescriptor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularVertex {
    pub local: LocalGroup,
    /// edge of each germ orbit at the vertex
    pub edges: Vec<usize>,
    pub orbit_size: usize,
    pub representative: Vec4,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SingularGraph {
    pub edges: Vec<SingularEdge>,
    pub vertices: Vec<SingularVertex>,
    /// every fixed circle in S^3
    pub circles: Vec<FixedCircle>,
}

impl SingularGraph {
    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "edges": self.edges.iter().map(|e| json!({
                "index": e.index,
                "arc": e.arc,
                "orbit_size": e.orbit_size,
                "setwise_stabilizer": e.setwise_stabilizer,
            })).collect::<Vec<_>>(),
            "vertices": self.vertices.iter().map(|v| json!({
                "local": v.local.to_string(),
                "edges": v.edges,
                "orbit_size": v.orbit_size,
            })).collect::<Vec<_>>(),
        })
    }
}

fn local_group(stabilizer: &[&UnitQuaternion]) -> Result<Option<LocalGroup>, SingularError> {
    let gens: Vec<UnitQuaternion> = stabilizer.iter().map(|q| (*q).clone()).collect();
    let group = closure(&gens, 2 * stabilizer.len() + 2)?;
    Ok(match classify(&group)? {
        GroupTag::Cyclic(_) => None,
        GroupTag::BinDihedral(n) => Some(LocalGroup::Dihedral(n / 4)),
        GroupTag::BinTetra => Some(LocalGroup::Tetrahedral),
        GroupTag::BinOcta => Some(LocalGroup::Octahedral),
        GroupTag::BinIcosa => Some(LocalGroup::Icosahedral),
    })
}

pub fn singular_locus(g: &ProductGroup) -> Result<SingularGraph, SingularError> {
    let pairs: Vec<(&UnitQuaternion, &UnitQuaternion)> = g.quat_pairs().collect();
    let isometries = pairs.len() / 2;

    let mut circles: Vec<CircleDescriptor> = Vec::new();
    let mut fixing: HashMap<CircleDescriptor, usize> = HashMap::new();
    for (p, q) in &pairs {
        if is_trivial(p, q) {
            continue;
        }
        if let FixedSet::Circle(c) = fixed_set_of_pair(p, q) {
            let n = fixing.entry(c.clone()).or_insert(0);
            if *n == 0 {
                circles.push(c);
            }
            *n += 1;
        }
    }
    if circles.is_empty() {
        return Ok(SingularGraph::default());
    }

    let position: HashMap<&CircleDescriptor, usize> = circles.iter().enumerate().map(|(k, c)| (c, k)).collect();
    let mut edge_of = vec![usize::MAX; circles.len()];
    let mut edges = Vec::new();
    for k in 0..circles.len() {
        if edge_of[k] != usize::MAX {
            continue;
        }
        let rep = &circles[k];
        let mut orbit = 0;
        let mut arc = false;
        for (p, q) in &pairs {
            let image = rep.image(p, q);
            let j = position[&image];
            if edge_of[j] == usize::MAX {
                edge_of[j] = edges.len();
                orbit += 1;
            }
            if !arc && image == *rep && rep.restricted_det_negative(p, q) {
                arc = true;
            }
        }
        edges.push(SingularEdge {
            index: (fixing[rep] / 2 + 1) as u32,
            arc,
            orbit_size: orbit,
            setwise_stabilizer: isometries / orbit,
            representative: rep.clone(),
        });
    }

    let mut points: Vec<Vec4> = Vec::new();
    for a in 0..circles.len() {
        for b in a + 1..circles.len() {
            if let Some(v) = circles[a].meet(&circles[b]) {
                for d in [direction(&v), direction(&v.clone().map(|x| -x))] {
                    if !points.contains(&d) {
                        points.push(d);
                    }
                }
            }
        }
    }

    let mut vertex_of: HashMap<Vec4, usize> = HashMap::new();
    let mut vertices = Vec::new();
    for v in &points {
        if vertex_of.contains_key(v) {
            continue;
        }
        let mut orbit = 0;
        for (p, q) in &pairs {
            let image = direction(&act(p, q, v));
            if !vertex_of.contains_key(&image) {
                vertex_of.insert(image, vertices.len());
                orbit += 1;
            }
        }
        let stabilizer: Vec<(&UnitQuaternion, &UnitQuaternion)> = pairs.iter().copied().filter(|(p, q)| fixes(p, q, v)).collect();
        let rights: Vec<&UnitQuaternion> = stabilizer.iter().map(|&(_, q)| q).collect();
        let local = local_group(&rights)?.ok_or(SingularError::LocalGroup(rights.len()))?;

        // germs: tangent directions at v of the circles through v
        let vv = dot(v, v);
        let mut germs: Vec<(Vec4, usize)> = Vec::new();
        for (k, c) in circles.iter().enumerate() {
            if !c.contains(v) {
                continue;
            }
            let w = c.basis.iter().find(|b| rref(vec![(*b).clone(), v.clone()]).len() == 2).expect("plane has two directions");
            let t = sub(w, &scale(v, &(&dot(w, v) * &vv.inv())));
            for s in [t.clone(), t.map(|x| -x)] {
                germs.push((direction(&s), k));
            }
        }
        let mut seen = vec![false; germs.len()];
        let mut incident = Vec::new();
        for a in 0..germs.len() {
            if seen[a] {
                continue;
            }
            for (p, q) in &stabilizer {
                let image = direction(&act(p, q, &germs[a].0));
                if let Some(b) = germs.iter().position(|(d, _)| *d == image) {
                    seen[b] = true;
                }
            }
            incident.push(edge_of[germs[a].1]);
        }
        incident.sort_unstable();
        vertices.push(SingularVertex { local, edges: incident, orbit_size: orbit, representative: v.clone() });
    }

    let circles = circles
        .into_iter()
        .enumerate()
        .map(|(k, c)| FixedCircle { index: (fixing[&c] / 2 + 1) as u32, edge: edge_of[k], circle: c })
        .collect();
    Ok(SingularGraph { edges, vertices, circles })
}

/// Whether the family is among those whose singular-set complement is Seifert fibered.
pub fn complement_seifert_hint(spec: &FamilySpec) -> bool {
    matches!(spec.family.num, 1..=9 | 34)
}
