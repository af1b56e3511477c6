#![allow(dead_code)]

pub mod singular;

use orbifold_core::duval::{build, tuple_of, FamilySpec, ProductGroup};
use orbifold_core::groups3::{classify, normalizer_of, FinSubgroupS3, SymbolicSubgroup};
use orbifold_core::quat::UnitQuaternion;
use std::sync::Arc;

pub struct BruteForce {
    pub index: usize,
    pub abelian: bool,
}

fn finite_ambient(h: &FinSubgroupS3) -> Option<Arc<FinSubgroupS3>> {
    match normalizer_of(classify(h).ok()?, h.field()).ok()? {
        SymbolicSubgroup::Finite(n) => Some(n),
        _ => None,
    }
}

fn pairs_of(g: &ProductGroup) -> Vec<(UnitQuaternion, UnitQuaternion)> {
    g.quat_pairs().map(|(a, b)| (a.clone(), b.clone())).collect()
}

/// N/G for N the normalizer of G, searched over Norm(L) x Norm(R) when both are finite.
pub fn brute_force_quotient(spec: &FamilySpec) -> Option<BruteForce> {
    brute_force_filtered(spec, |_| true)
}

/// As `brute_force_quotient`, keeping only left factors in S^1 and S^1 j.
pub fn brute_force_fibered(spec: &FamilySpec) -> Option<BruteForce> {
    brute_force_filtered(spec, |a| a.in_circle() || a.in_circle_j())
}

fn brute_force_filtered(spec: &FamilySpec, keep: impl Fn(&UnitQuaternion) -> bool) -> Option<BruteForce> {
    let g = build(spec).unwrap();
    let t = tuple_of(&g);
    let (nl, nr) = (finite_ambient(&t.l)?, finite_ambient(&t.r)?);
    let pairs = pairs_of(&g);
    let in_g = |a: &UnitQuaternion, b: &UnitQuaternion| g.contains_quat(a, b);
    let mut reps: Vec<(UnitQuaternion, UnitQuaternion)> = Vec::new();
    let mut count = 0;
    for a in nl.elements().iter().filter(|a| keep(a)) {
        for b in nr.elements() {
            if !pairs.iter().all(|(x, y)| in_g(&a.conj_by(x), &b.conj_by(y))) {
                continue;
            }
            count += 1;
            if !reps.iter().any(|(p, q)| in_g(&a.mul(&p.inv()), &b.mul(&q.inv()))) {
                reps.push((a.clone(), b.clone()));
            }
        }
    }
    assert_eq!(count, reps.len() * g.order());
    let abelian = reps.iter().all(|(a1, b1)| {
        reps.iter().all(|(a2, b2)| {
            let ca = a1.mul(a2).mul(&a1.inv()).mul(&a2.inv());
            let cb = b1.mul(b2).mul(&b1.inv()).mul(&b2.inv());
            in_g(&ca, &cb)
        })
    });
    Some(BruteForce { index: reps.len(), abelian })
}

/// Order of the group of isometries fixing every Hopf fiber: lifts (a, 1) with a in S^1.
pub fn fiber_rotations(spec: &FamilySpec) -> Option<usize> {
    let g = build(spec).unwrap();
    let t = tuple_of(&g);
    let nl = finite_ambient(&t.l)?;
    let pairs = pairs_of(&g);
    let one = UnitQuaternion::one(g.left().field());
    let normalizing: Vec<&UnitQuaternion> =
        nl.elements().iter().filter(|a| a.in_circle() && pairs.iter().all(|(x, y)| g.contains_quat(&a.conj_by(x), y))).collect();
    let inside = normalizing.iter().filter(|a| g.contains_quat(a, &one)).count();
    Some(normalizing.len() / inside)
}

/// Pairs (a, b) normalizing the group with a in S^1 j, searched over a = c j for c in the
/// 4k-th roots of unity on the left and Norm(R) on the right.
pub fn reversing_normalizers(spec: &FamilySpec, k: u32) -> Option<Vec<(UnitQuaternion, UnitQuaternion)>> {
    let g = build(spec).unwrap();
    let t = tuple_of(&g);
    let nr = finite_ambient(&t.r)?;
    let f = g.left().field().clone();
    let pairs = pairs_of(&g);
    let j = UnitQuaternion::j(&f);
    let mut out = Vec::new();
    for e in 0..4 * k {
        let Ok(c) = UnitQuaternion::root(&f, e as i64, 4 * k as u64) else { return None };
        let a = c.mul(&j);
        for b in nr.elements() {
            if pairs.iter().all(|(x, y)| g.contains_quat(&a.conj_by(x), &b.conj_by(y))) {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    Some(out)
}

/// For a group whose left factor lies in S^1: whether the isometries acting nontrivially on the
/// base all reverse its orientation. Elements (1, b) must act on S^2 through the group itself, and
/// some (c j, b) must normalize. None if the left factor is not in S^1 or a search space is infinite.
pub fn base_action_reverses(spec: &FamilySpec) -> Option<bool> {
    let g = build(spec).unwrap();
    if !g.quat_pairs().all(|(x, _)| x.in_circle()) {
        return None;
    }
    let t = tuple_of(&g);
    let nr = finite_ambient(&t.r)?;
    let pairs = pairs_of(&g);
    let gamma: Vec<&UnitQuaternion> = pairs.iter().map(|(_, y)| y).collect();
    let same_rotation = |b: &UnitQuaternion| gamma.iter().any(|y| *y == b || y.neg() == *b);
    let rotations_inside = nr
        .elements()
        .iter()
        .filter(|b| pairs.iter().all(|(x, y)| g.contains_quat(x, &b.conj_by(y))))
        .all(|b| same_rotation(b));
    Some(rotations_inside && !reversing_normalizers(spec, 1)?.is_empty())
}

