//! Quaternions z1 + z2 j over a cyclotomic field and isometries of S^3.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Neg;

use crate::cyclo::{CycloError, CycloNumber, Field};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Quaternion {
    pub z1: CycloNumber,
    pub z2: CycloNumber,
}

impl fmt::Debug for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})j", self.z1, self.z2)
    }
}

impl Quaternion {
    pub fn new(z1: CycloNumber, z2: CycloNumber) -> Result<Quaternion, CycloError> {
        if z1.conductor() != z2.conductor() {
            return Err(CycloError::FieldMismatch(z1.conductor(), z2.conductor()));
        }
        Ok(Quaternion { z1, z2 })
    }

    pub fn field(&self) -> &Field {
        self.z1.field()
    }

    pub fn zero(f: &Field) -> Quaternion {
        Quaternion { z1: f.zero(), z2: f.zero() }
    }

    pub fn one(f: &Field) -> Quaternion {
        Quaternion { z1: f.one(), z2: f.zero() }
    }

    pub fn i(f: &Field) -> Quaternion {
        Quaternion { z1: f.i(), z2: f.zero() }
    }

    pub fn j(f: &Field) -> Quaternion {
        Quaternion { z1: f.zero(), z2: f.one() }
    }

    pub fn k(f: &Field) -> Quaternion {
        Quaternion { z1: f.zero(), z2: f.i() }
    }

    pub fn complex(z: CycloNumber) -> Quaternion {
        let zero = z.field().zero();
        Quaternion { z1: z, z2: zero }
    }

    /// a + b i + c j + d k with real field elements a, b, c, d.
    pub fn from_real_parts(a: &CycloNumber, b: &CycloNumber, c: &CycloNumber, d: &CycloNumber) -> Quaternion {
        let i = a.field().i();
        Quaternion { z1: a + &(b * &i), z2: c + &(d * &i) }
    }

    /// The real coordinates (a, b, c, d) as exact real field elements.
    pub fn real_parts(&self) -> [CycloNumber; 4] {
        let f = self.field();
        let half = f.rational(1, 2);
        let neg_half_i = &f.i() * &f.rational(-1, 2);
        let re = |z: &CycloNumber| &(z + &z.galois_conj()) * &half;
        let im = |z: &CycloNumber| &(z - &z.galois_conj()) * &neg_half_i;
        [re(&self.z1), im(&self.z1), re(&self.z2), im(&self.z2)]
    }

    pub fn to_float(&self) -> [f64; 4] {
        let (a, b) = self.z1.to_float();
        let (c, d) = self.z2.to_float();
        [a, b, c, d]
    }

    pub fn is_zero(&self) -> bool {
        self.z1.is_zero() && self.z2.is_zero()
    }

    pub fn norm_sq(&self) -> CycloNumber {
        &(&self.z1 * &self.z1.galois_conj()) + &(&self.z2 * &self.z2.galois_conj())
    }

    pub fn add(&self, o: &Quaternion) -> Quaternion {
        Quaternion { z1: &self.z1 + &o.z1, z2: &self.z2 + &o.z2 }
    }

    pub fn sub(&self, o: &Quaternion) -> Quaternion {
        Quaternion { z1: &self.z1 - &o.z1, z2: &self.z2 - &o.z2 }
    }

    pub fn scale(&self, c: &CycloNumber) -> Quaternion {
        Quaternion { z1: &self.z1 * c, z2: &self.z2 * c }
    }

    pub fn embed(&self, target: &Field) -> Result<Quaternion, CycloError> {
        Ok(Quaternion { z1: self.z1.embed(target)?, z2: self.z2.embed(target)? })
    }

    /// Lexicographic order on the coefficient vectors of z1 then z2.
    pub fn canonical_cmp(&self, o: &Quaternion) -> Ordering {
        self.z1.canonical_cmp(&o.z1).then_with(|| self.z2.canonical_cmp(&o.z2))
    }

    /// Sign of the first nonzero rational coefficient, scanning z1 then z2.
    pub fn leading_sign(&self) -> Ordering {
        self.z1
            .leading_sign()
            .or_else(|| self.z2.leading_sign())
            .map(|(_, s)| s)
            .unwrap_or(Ordering::Equal)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!([self.z1.coeff_strings(), self.z2.coeff_strings()])
    }
}

impl Neg for &Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion { z1: -&self.z1, z2: -&self.z2 }
    }
}

pub fn checked_qmul(a: &Quaternion, b: &Quaternion) -> Result<Quaternion, CycloError> {
    let z1 = a.z1.checked_mul(&b.z1)?.checked_sub(&a.z2.checked_mul(&b.z2.galois_conj())?)?;
    let z2 = a.z1.checked_mul(&b.z2)?.checked_add(&a.z2.checked_mul(&b.z1.galois_conj())?)?;
    Ok(Quaternion { z1, z2 })
}

pub fn qmul(a: &Quaternion, b: &Quaternion) -> Quaternion {
    checked_qmul(a, b).expect("quaternion operands in different fields")
}

pub fn qconj(a: &Quaternion) -> Quaternion {
    Quaternion { z1: a.z1.galois_conj(), z2: -&a.z2 }
}

pub fn qinv(a: &Quaternion) -> Result<Quaternion, CycloError> {
    let n = a.norm_sq().checked_inv()?;
    Ok(qconj(a).scale(&n))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuatError {
    #[error("quaternion does not have unit norm")]
    NotUnit,
    #[error(transparent)]
    Field(#[from] CycloError),
}

/// A quaternion of norm exactly one.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UnitQuaternion(Quaternion);

impl fmt::Debug for UnitQuaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl UnitQuaternion {
    pub fn new(q: Quaternion) -> Result<UnitQuaternion, QuatError> {
        if q.norm_sq().is_one() {
            Ok(UnitQuaternion(q))
        } else {
            Err(QuatError::NotUnit)
        }
    }

    pub(crate) fn new_unchecked(q: Quaternion) -> UnitQuaternion {
        debug_assert!(q.norm_sq().is_one());
        UnitQuaternion(q)
    }

    pub fn one(f: &Field) -> UnitQuaternion {
        UnitQuaternion(Quaternion::one(f))
    }

    pub fn i(f: &Field) -> UnitQuaternion {
        UnitQuaternion(Quaternion::i(f))
    }

    pub fn j(f: &Field) -> UnitQuaternion {
        UnitQuaternion(Quaternion::j(f))
    }

    pub fn k(f: &Field) -> UnitQuaternion {
        UnitQuaternion(Quaternion::k(f))
    }

    /// exp(2 pi i a / b) as a unit quaternion in the circle S^1.
    pub fn root(f: &Field, a: i64, b: u64) -> Result<UnitQuaternion, CycloError> {
        Ok(UnitQuaternion(Quaternion::complex(f.root_of_unity(a, b)?)))
    }

    pub fn quat(&self) -> &Quaternion {
        &self.0
    }

    pub fn field(&self) -> &Field {
        self.0.field()
    }

    pub fn mul(&self, o: &UnitQuaternion) -> UnitQuaternion {
        UnitQuaternion(qmul(&self.0, &o.0))
    }

    pub fn inv(&self) -> UnitQuaternion {
        UnitQuaternion(qconj(&self.0))
    }

    pub fn neg(&self) -> UnitQuaternion {
        UnitQuaternion(-&self.0)
    }

    /// self * x * self^-1
    pub fn conj_by(&self, x: &UnitQuaternion) -> UnitQuaternion {
        self.mul(x).mul(&self.inv())
    }

    pub fn is_one(&self) -> bool {
        self.0.z1.is_one() && self.0.z2.is_zero()
    }

    pub fn is_minus_one(&self) -> bool {
        self.neg().is_one()
    }

    /// Multiplicative order, searched up to `cap`.
    pub fn order(&self, cap: u64) -> Option<u64> {
        let mut acc = self.clone();
        for k in 1..=cap {
            if acc.is_one() {
                return Some(k);
            }
            acc = acc.mul(self);
        }
        None
    }

    pub fn in_circle(&self) -> bool {
        self.0.z2.is_zero()
    }

    pub fn in_circle_j(&self) -> bool {
        self.0.z1.is_zero()
    }

    pub fn embed(&self, target: &Field) -> Result<UnitQuaternion, CycloError> {
        Ok(UnitQuaternion(self.0.embed(target)?))
    }
}

/// h -> p h q^-1, or h -> p conj(h) q^-1 when `reversing`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IsometryS3 {
    p: UnitQuaternion,
    q: UnitQuaternion,
    reversing: bool,
}

impl fmt::Debug for IsometryS3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = if self.reversing { "PhiBar" } else { "Phi" };
        write!(f, "{}[{:?}, {:?}]", name, self.p, self.q)
    }
}

impl IsometryS3 {
    pub fn new(p: UnitQuaternion, q: UnitQuaternion, reversing: bool) -> Result<IsometryS3, CycloError> {
        if p.field().conductor() != q.field().conductor() {
            return Err(CycloError::FieldMismatch(p.field().conductor(), q.field().conductor()));
        }
        let (p, q) = if p.quat().leading_sign() == Ordering::Less { (p.neg(), q.neg()) } else { (p, q) };
        Ok(IsometryS3 { p, q, reversing })
    }

    pub fn phi(p: UnitQuaternion, q: UnitQuaternion) -> IsometryS3 {
        IsometryS3::new(p, q, false).expect("field mismatch")
    }

    pub fn phibar(p: UnitQuaternion, q: UnitQuaternion) -> IsometryS3 {
        IsometryS3::new(p, q, true).expect("field mismatch")
    }

    pub fn identity(f: &Field) -> IsometryS3 {
        IsometryS3::phi(UnitQuaternion::one(f), UnitQuaternion::one(f))
    }

    pub fn p(&self) -> &UnitQuaternion {
        &self.p
    }

    pub fn q(&self) -> &UnitQuaternion {
        &self.q
    }

    pub fn reversing(&self) -> bool {
        self.reversing
    }

    pub fn field(&self) -> &Field {
        self.p.field()
    }

    pub fn is_identity(&self) -> bool {
        !self.reversing && self.p.is_one() && self.q.is_one()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "p": self.p.quat().to_json(),
            "q": self.q.quat().to_json(),
            "reversing": self.reversing,
        })
    }
}

pub fn apply(f: &IsometryS3, h: &Quaternion) -> Result<Quaternion, CycloError> {
    let h = if f.reversing { qconj(h) } else { h.clone() };
    let t = checked_qmul(f.p.quat(), &h)?;
    checked_qmul(&t, f.q.inv().quat())
}

pub fn compose(f: &IsometryS3, g: &IsometryS3) -> Result<IsometryS3, CycloError> {
    if f.field().conductor() != g.field().conductor() {
        return Err(CycloError::FieldMismatch(f.field().conductor(), g.field().conductor()));
    }
    let (p, q) = match (f.reversing, g.reversing) {
        (false, false) => (f.p.mul(&g.p), f.q.mul(&g.q)),
        (false, true) => (f.p.mul(&g.p), f.q.mul(&g.q)),
        (true, false) => (f.p.mul(&g.q), f.q.mul(&g.p)),
        (true, true) => (f.p.mul(&g.q), f.q.mul(&g.p)),
    };
    IsometryS3::new(p, q, f.reversing ^ g.reversing)
}

pub fn inverse(f: &IsometryS3) -> IsometryS3 {
    if f.reversing {
        IsometryS3::phibar(f.q.inv(), f.p.inv())
    } else {
        IsometryS3::phi(f.p.inv(), f.q.inv())
    }
}
