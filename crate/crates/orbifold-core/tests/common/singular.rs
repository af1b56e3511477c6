use orbifold_core::cyclo::Field;
use orbifold_core::duval::{build, specs_up_to, FamilyId, FamilySpec, ProductGroup};
use orbifold_core::quat::{qmul, Quaternion, UnitQuaternion};
use orbifold_core::singular::{fixed_set_of_pair, is_free_action, singular_locus, FixedSet, Vec4};
use rand::rngs::StdRng;
use rand::Rng;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

pub fn small_groups(max: usize) -> Vec<(FamilySpec, ProductGroup)> {
    let mut out = Vec::new();
    for family in FamilyId::all() {
        for spec in specs_up_to(family, 3, 5) {
            let g = build(&spec).unwrap();
            if g.order() / 2 <= max {
                out.push((spec, g));
            }
        }
    }
    out
}

pub fn quat(v: &Vec4) -> Quaternion {
    Quaternion::from_real_parts(&v[0], &v[1], &v[2], &v[3])
}

fn fixes(p: &UnitQuaternion, q: &UnitQuaternion, v: &Vec4) -> bool {
    qmul(p.quat(), &quat(v)) == qmul(&quat(v), q.quat())
}

fn is_trivial(p: &UnitQuaternion, q: &UnitQuaternion) -> bool {
    (p.is_one() && q.is_one()) || (p.is_minus_one() && q.is_minus_one())
}

fn random_point(f: &Field, rng: &mut StdRng) -> Vec4 {
    loop {
        let v: Vec4 = std::array::from_fn(|_| f.int(rng.random_range(-9..=9)));
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

/// Soundness and completeness of the computed singular locus against direct fixed-point tests.
pub fn check_locus(spec: &FamilySpec, g: &ProductGroup, rng: &mut StdRng) -> Result<(), String> {
    let label = spec.label();
    let graph = singular_locus(g).map_err(|e| format!("{label}: {e}"))?;
    ensure!(graph.is_empty() == is_free_action(g), "{label}: empty locus disagrees with freeness");
    let pairs: Vec<(&UnitQuaternion, &UnitQuaternion)> = g.quat_pairs().collect();
    let fixed: Vec<FixedSet> = pairs.iter().map(|(p, q)| fixed_set_of_pair(p, q)).collect();

    // every nontrivial element with a fixed point fixes exactly one reported circle
    for ((p, q), set) in pairs.iter().zip(&fixed) {
        if is_trivial(p, q) {
            continue;
        }
        match set {
            FixedSet::Circle(c) => ensure!(graph.circles.iter().any(|fc| &fc.circle == c), "{label}: fixed circle missing"),
            FixedSet::Empty => ensure!(p.quat().real_parts()[0] != q.quat().real_parts()[0], "{label}: spurious empty fixed set"),
            FixedSet::All => return Err(format!("{label}: nontrivial element fixes everything")),
        }
    }

    for fc in &graph.circles {
        let pointwise: Vec<usize> =
            (0..pairs.len()).filter(|&i| matches!(&fixed[i], FixedSet::Circle(c) if c == &fc.circle)).collect();
        let mut checked = 0;
        for (a, b) in (1..=6).flat_map(|a| (-2..=2).map(move |b| (a, b))) {
            if checked == 20 {
                break;
            }
            let v = fc.circle.point(a, b);
            for &i in &pointwise {
                ensure!(fixes(pairs[i].0, pairs[i].1, &v), "{label}: circle point not fixed");
            }
            if checked < 4 && !graph.circles.iter().any(|o| o.circle != fc.circle && o.circle.contains(&v)) {
                let stabilizer = pairs.iter().filter(|(p, q)| fixes(p, q, &v)).count() / 2;
                ensure!(stabilizer as u32 == fc.index, "{label}: index {} but stabilizer {}", fc.index, stabilizer);
            }
            checked += 1;
        }
    }

    let f = g.left().field().clone();
    let mut probes: Vec<Vec4> = (0..200).map(|_| random_point(&f, rng)).collect();
    probes.extend(graph.vertices.iter().map(|v| v.representative.clone()));
    for v in &probes {
        let nontrivial = pairs.iter().any(|(p, q)| !is_trivial(p, q) && fixes(p, q, v));
        if nontrivial {
            ensure!(graph.circles.iter().any(|c| c.circle.contains(v)), "{label}: fixed point off the locus");
        }
    }

    for v in &graph.vertices {
        ensure!(v.edges.len() == 3, "{label}: vertex {} has valence {}", v.local, v.edges.len());
        ensure!(v.edges.iter().all(|&e| e < graph.edges.len()), "{label}: dangling edge");
    }
    for e in &graph.edges {
        ensure!(e.index >= 2, "{label}: edge index {}", e.index);
        ensure!(e.orbit_size * e.setwise_stabilizer == g.order() / 2, "{label}: edge orbit-stabilizer");
    }
    Ok(())
}
