//! Exact arithmetic in cyclotomic fields Q(zeta_N) with 4 | N.
//!
//! Numbers are stored as coefficient vectors in the power basis
//! 1, zeta, ..., zeta^(d-1) with d = phi(N), reduced modulo the N-th
//! cyclotomic polynomial. Coefficients share one denominator. Small values
//! live in machine integers and are promoted to big integers on overflow.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycloError {
    #[error("a root of unity of order {order} does not exist in the field of conductor {conductor}")]
    ConductorMismatch { order: u64, conductor: u32 },
    #[error("operands belong to different fields (conductors {0} and {1})")]
    FieldMismatch(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
}

pub struct CycloField {
    conductor: u32,
    degree: usize,
    // canonical vector of zeta^e for every 0 <= e < conductor
    powers: Vec<Vec<i64>>,
    units: Vec<u32>,
    embedding: Vec<(f64, f64)>,
}

pub type Field = Arc<CycloField>;

impl fmt::Debug for CycloField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.conductor)
    }
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qlen = num.len() - dd;
    let mut q = vec![0i64; qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dd];
        q[k] = c;
        if c != 0 {
            for (i, &b) in den.iter().enumerate() {
                rem[k + i] -= c * b;
            }
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    q
}

fn cyclotomic_poly(n: u32, memo: &mut HashMap<u32, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_poly(d, memo);
            p = poly_div_exact(&p, &phi_d);
        }
    }
    memo.insert(n, p.clone());
    p
}

impl CycloField {
    fn new(conductor: u32) -> CycloField {
        let mut memo = HashMap::new();
        let phi = cyclotomic_poly(conductor, &mut memo);
        let degree = phi.len() - 1;
        let mut powers = Vec::with_capacity(conductor as usize);
        let mut cur = vec![0i64; degree];
        cur[0] = 1;
        for _ in 0..conductor {
            powers.push(cur.clone());
            // multiply by x and reduce by the monic polynomial
            let top = cur[degree - 1];
            for i in (1..degree).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for i in 0..degree {
                    cur[i] -= top * phi[i];
                }
            }
        }
        let units = (1..conductor).filter(|k| k.gcd(&conductor) == 1).collect();
        let embedding = (0..degree)
            .map(|i| {
                let t = 2.0 * std::f64::consts::PI * i as f64 / conductor as f64;
                (t.cos(), t.sin())
            })
            .collect();
        CycloField { conductor, degree, powers, units, embedding }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn degree(&self) -> usize {
        self.degree
    }
}

/// Returns the field of conductor lcm(n, 4). Fields are cached and shared.
pub fn make_field(n: u32) -> Field {
    static CACHE: OnceLock<Mutex<HashMap<u32, Field>>> = OnceLock::new();
    let n = n.max(1);
    let conductor = n.lcm(&4);
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("field cache poisoned");
    guard
        .entry(conductor)
        .or_insert_with(|| Arc::new(CycloField::new(conductor)))
        .clone()
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Coeffs {
    Small { num: Box<[i64]>, den: i64 },
    Big { num: Box<[BigInt]>, den: BigInt },
}

impl Coeffs {
    fn zero(d: usize) -> Coeffs {
        Coeffs::Small { num: vec![0; d].into_boxed_slice(), den: 1 }
    }

    fn to_big(&self) -> (Vec<BigInt>, BigInt) {
        match self {
            Coeffs::Small { num, den } => (num.iter().map(|&x| BigInt::from(x)).collect(), BigInt::from(*den)),
            Coeffs::Big { num, den } => (num.to_vec(), den.clone()),
        }
    }

    fn from_i128(num: Vec<i128>, den: i128) -> Coeffs {
        let mut g = den.abs();
        for &x in &num {
            if g == 1 {
                break;
            }
            g = g.gcd(&x);
        }
        if num.iter().all(|&x| x == 0) {
            return Coeffs::Small { num: vec![0; num.len()].into_boxed_slice(), den: 1 };
        }
        let s = if den < 0 { -g } else { g };
        let den = den / s;
        let mut out = Vec::with_capacity(num.len());
        for &x in &num {
            match i64::try_from(x / s) {
                Ok(v) => out.push(v),
                Err(_) => {
                    return Coeffs::from_big(
                        num.iter().map(|&x| BigInt::from(x)).collect(),
                        BigInt::from(den * s),
                    )
                }
            }
        }
        match i64::try_from(den) {
            Ok(d) => Coeffs::Small { num: out.into_boxed_slice(), den: d },
            Err(_) => Coeffs::from_big(out.into_iter().map(BigInt::from).collect(), BigInt::from(den)),
        }
    }

    fn from_big(num: Vec<BigInt>, den: BigInt) -> Coeffs {
        if num.iter().all(|x| x.is_zero()) {
            return Coeffs::Small { num: vec![0; num.len()].into_boxed_slice(), den: 1 };
        }
        let mut g = den.abs();
        for x in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(x);
        }
        if den.is_negative() {
            g = -g;
        }
        let num: Vec<BigInt> = num.into_iter().map(|x| x / &g).collect();
        let den = den / &g;
        let small: Option<Vec<i64>> = num.iter().map(|x| x.to_i64()).collect();
        match (small, den.to_i64()) {
            (Some(n), Some(d)) => Coeffs::Small { num: n.into_boxed_slice(), den: d },
            _ => Coeffs::Big { num: num.into_boxed_slice(), den },
        }
    }
}

/// An element of a cyclotomic field in canonical form.
#[derive(Clone)]
pub struct CycloNumber {
    field: Field,
    c: Coeffs,
}

impl PartialEq for CycloNumber {
    fn eq(&self, other: &Self) -> bool {
        self.field.conductor == other.field.conductor && self.c == other.c
    }
}

impl Eq for CycloNumber {}

impl Hash for CycloNumber {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.conductor.hash(state);
        self.c.hash(state);
    }
}

impl CycloField {
    pub fn zero(self: &Arc<Self>) -> CycloNumber {
        CycloNumber { field: self.clone(), c: Coeffs::zero(self.degree) }
    }

    pub fn one(self: &Arc<Self>) -> CycloNumber {
        self.rational(1, 1)
    }

    pub fn int(self: &Arc<Self>, v: i64) -> CycloNumber {
        self.rational(v, 1)
    }

    pub fn rational(self: &Arc<Self>, num: i64, den: i64) -> CycloNumber {
        assert!(den != 0, "zero denominator");
        let mut v = vec![0i128; self.degree];
        v[0] = num as i128;
        CycloNumber { field: self.clone(), c: Coeffs::from_i128(v, den as i128) }
    }

    pub fn from_rational(self: &Arc<Self>, q: &BigRational) -> CycloNumber {
        let mut v = vec![BigInt::zero(); self.degree];
        v[0] = q.numer().clone();
        CycloNumber { field: self.clone(), c: Coeffs::from_big(v, q.denom().clone()) }
    }

    /// zeta_N^e for any integer exponent.
    pub fn zeta_pow(self: &Arc<Self>, e: i64) -> CycloNumber {
        let n = self.conductor as i64;
        let e = e.rem_euclid(n) as usize;
        let num = self.powers[e].iter().map(|&x| x as i128).collect();
        CycloNumber { field: self.clone(), c: Coeffs::from_i128(num, 1) }
    }

    /// exp(2 pi i a / b).
    pub fn root_of_unity(self: &Arc<Self>, a: i64, b: u64) -> Result<CycloNumber, CycloError> {
        if b == 0 || self.conductor as u64 % b != 0 {
            return Err(CycloError::ConductorMismatch { order: b, conductor: self.conductor });
        }
        Ok(self.zeta_pow(a * (self.conductor as u64 / b) as i64))
    }

    pub fn i(self: &Arc<Self>) -> CycloNumber {
        self.zeta_pow(self.conductor as i64 / 4)
    }

    /// cos(2 pi a / b) as an element of the real subfield.
    pub fn cos_2pi(self: &Arc<Self>, a: i64, b: u64) -> Result<CycloNumber, CycloError> {
        let z = self.root_of_unity(a, b)?;
        Ok(&(&z + &z.galois_conj()) * &self.rational(1, 2))
    }

    /// sin(2 pi a / b) as an element of the real subfield.
    pub fn sin_2pi(self: &Arc<Self>, a: i64, b: u64) -> Result<CycloNumber, CycloError> {
        let z = self.root_of_unity(a, b)?;
        let diff = &z - &z.galois_conj();
        // (z - z^-1) / (2i) = -(i/2)(z - z^-1)
        Ok(&diff * &(&self.i() * &self.rational(-1, 2)))
    }

    /// sqrt(2) = zeta_8 + zeta_8^-1; needs 8 | N.
    pub fn sqrt2(self: &Arc<Self>) -> Result<CycloNumber, CycloError> {
        let z = self.root_of_unity(1, 8)?;
        Ok(&z + &z.galois_conj())
    }

    /// The golden ratio (sqrt(5)+1)/2 = -(zeta_5^2 + zeta_5^3); needs 5 | N.
    pub fn tau(self: &Arc<Self>) -> Result<CycloNumber, CycloError> {
        let a = self.root_of_unity(2, 5)?;
        let b = self.root_of_unity(3, 5)?;
        Ok(-&(&a + &b))
    }
}

fn checked_dot_reduce(field: &CycloField, raw: &[i128]) -> Option<Vec<i128>> {
    let d = field.degree;
    let mut out: Vec<i128> = raw[..d.min(raw.len())].to_vec();
    out.resize(d, 0);
    for (e, &c) in raw.iter().enumerate().skip(d) {
        if c == 0 {
            continue;
        }
        for (o, &p) in out.iter_mut().zip(field.powers[e].iter()) {
            if p != 0 {
                *o = o.checked_add(c.checked_mul(p as i128)?)?;
            }
        }
    }
    Some(out)
}

impl CycloNumber {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn conductor(&self) -> u32 {
        self.field.conductor
    }

    fn same_field(&self, other: &CycloNumber) -> Result<(), CycloError> {
        if self.field.conductor != other.field.conductor {
            Err(CycloError::FieldMismatch(self.field.conductor, other.field.conductor))
        } else {
            Ok(())
        }
    }

    fn with(&self, c: Coeffs) -> CycloNumber {
        CycloNumber { field: self.field.clone(), c }
    }

    pub fn is_zero(&self) -> bool {
        match &self.c {
            Coeffs::Small { num, .. } => num.iter().all(|&x| x == 0),
            Coeffs::Big { num, .. } => num.iter().all(|x| x.is_zero()),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.c {
            Coeffs::Small { num, den } => *den == 1 && num[0] == 1 && num[1..].iter().all(|&x| x == 0),
            Coeffs::Big { .. } => false,
        }
    }

    /// Rational coefficient of zeta^i in the canonical basis.
    pub fn coeff(&self, i: usize) -> BigRational {
        match &self.c {
            Coeffs::Small { num, den } => BigRational::new(BigInt::from(num[i]), BigInt::from(*den)),
            Coeffs::Big { num, den } => BigRational::new(num[i].clone(), den.clone()),
        }
    }

    pub fn coeffs(&self) -> Vec<BigRational> {
        (0..self.field.degree).map(|i| self.coeff(i)).collect()
    }

    /// Index of the first nonzero coefficient together with its sign.
    pub fn leading_sign(&self) -> Option<(usize, Ordering)> {
        match &self.c {
            Coeffs::Small { num, .. } => num.iter().position(|&x| x != 0).map(|i| (i, num[i].cmp(&0))),
            Coeffs::Big { num, .. } => num
                .iter()
                .position(|x| !x.is_zero())
                .map(|i| (i, if num[i].is_positive() { Ordering::Greater } else { Ordering::Less })),
        }
    }

    pub fn is_rational(&self) -> bool {
        match &self.c {
            Coeffs::Small { num, .. } => num[1..].iter().all(|&x| x == 0),
            Coeffs::Big { num, .. } => num[1..].iter().all(|x| x.is_zero()),
        }
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_rational() {
            Some(self.coeff(0))
        } else {
            None
        }
    }

    pub fn checked_add(&self, other: &CycloNumber) -> Result<CycloNumber, CycloError> {
        self.same_field(other)?;
        if let (Coeffs::Small { num: a, den: da }, Coeffs::Small { num: b, den: db }) = (&self.c, &other.c) {
            let (da, db) = (*da as i128, *db as i128);
            let l = da.lcm(&db);
            let (fa, fb) = (l / da, l / db);
            let v: Option<Vec<i128>> = a
                .iter()
                .zip(b.iter())
                .map(|(&x, &y)| (x as i128).checked_mul(fa)?.checked_add((y as i128).checked_mul(fb)?))
                .collect();
            if let Some(v) = v {
                return Ok(self.with(Coeffs::from_i128(v, l)));
            }
        }
        let (a, da) = self.c.to_big();
        let (b, db) = other.c.to_big();
        let num = a.iter().zip(b.iter()).map(|(x, y)| x * &db + y * &da).collect();
        Ok(self.with(Coeffs::from_big(num, da * db)))
    }

    pub fn checked_sub(&self, other: &CycloNumber) -> Result<CycloNumber, CycloError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &CycloNumber) -> Result<CycloNumber, CycloError> {
        self.same_field(other)?;
        let d = self.field.degree;
        if let (Coeffs::Small { num: a, den: da }, Coeffs::Small { num: b, den: db }) = (&self.c, &other.c) {
            if let Some(c) = self.small_mul(a, *da, b, *db) {
                return Ok(self.with(c));
            }
        }
        let (a, da) = self.c.to_big();
        let (b, db) = other.c.to_big();
        let mut raw = vec![BigInt::zero(); 2 * d - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    raw[i + j] += x * y;
                }
            }
        }
        let mut out: Vec<BigInt> = raw[..d].to_vec();
        for (e, c) in raw.iter().enumerate().skip(d) {
            if c.is_zero() {
                continue;
            }
            for (o, &p) in out.iter_mut().zip(self.field.powers[e].iter()) {
                if p != 0 {
                    *o += c * p;
                }
            }
        }
        Ok(self.with(Coeffs::from_big(out, da * db)))
    }

    fn small_mul(&self, a: &[i64], da: i64, b: &[i64], db: i64) -> Option<Coeffs> {
        let d = self.field.degree;
        let mut raw = vec![0i128; 2 * d - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y != 0 {
                    raw[i + j] = raw[i + j].checked_add((x as i128) * (y as i128))?;
                }
            }
        }
        let out = checked_dot_reduce(&self.field, &raw)?;
        Some(Coeffs::from_i128(out, (da as i128) * (db as i128)))
    }

    /// Image under the Galois automorphism zeta -> zeta^k, gcd(k, N) = 1.
    pub fn galois(&self, k: u32) -> CycloNumber {
        let n = self.field.conductor as usize;
        let d = self.field.degree;
        if let Coeffs::Small { num, den } = &self.c {
            let mut out = vec![0i128; d];
            let mut ok = true;
            'outer: for (i, &c) in num.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let e = (i * k as usize) % n;
                for (o, &p) in out.iter_mut().zip(self.field.powers[e].iter()) {
                    match o.checked_add((c as i128) * (p as i128)) {
                        Some(v) => *o = v,
                        None => {
                            ok = false;
                            break 'outer;
                        }
                    }
                }
            }
            if ok {
                return self.with(Coeffs::from_i128(out, *den as i128));
            }
        }
        let (num, den) = self.c.to_big();
        let mut out = vec![BigInt::zero(); d];
        for (i, c) in num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = (i * k as usize) % n;
            for (o, &p) in out.iter_mut().zip(self.field.powers[e].iter()) {
                if p != 0 {
                    *o += c * p;
                }
            }
        }
        self.with(Coeffs::from_big(out, den))
    }

    /// Complex conjugation, zeta -> zeta^-1.
    pub fn galois_conj(&self) -> CycloNumber {
        self.galois(self.field.conductor - 1)
    }

    pub fn is_real(&self) -> bool {
        *self == self.galois_conj()
    }

    pub fn checked_inv(&self) -> Result<CycloNumber, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(self.field.from_rational(&q.recip()));
        }
        // product of the other Galois conjugates; x * y is the (rational) norm
        let mut y = self.field.one();
        for &k in self.field.units.iter().skip(1) {
            y = &y * &self.galois(k);
        }
        let norm = (self * &y).as_rational().expect("norm of a cyclotomic number is rational");
        Ok(&y * &self.field.from_rational(&norm.recip()))
    }

    pub fn inv(&self) -> CycloNumber {
        self.checked_inv().expect("inverse of zero")
    }

    pub fn checked_div(&self, other: &CycloNumber) -> Result<CycloNumber, CycloError> {
        self.same_field(other)?;
        self.checked_mul(&other.checked_inv()?)
    }

    pub fn pow(&self, e: u32) -> CycloNumber {
        let mut acc = self.field.one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Numerical embedding zeta -> exp(2 pi i / N).
    pub fn to_float(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for i in 0..self.field.degree {
            let c = match &self.c {
                Coeffs::Small { num, den } => num[i] as f64 / *den as f64,
                Coeffs::Big { num, den } => {
                    if num[i].is_zero() {
                        0.0
                    } else {
                        BigRational::new(num[i].clone(), den.clone()).to_f64().unwrap_or(f64::NAN)
                    }
                }
            };
            if c != 0.0 {
                let (cr, ci) = self.field.embedding[i];
                re += c * cr;
                im += c * ci;
            }
        }
        (re, im)
    }

    /// Sign of a nonzero real element, decided from its embedding.
    pub fn real_sign(&self) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        if let Some(q) = self.as_rational() {
            return q.cmp(&BigRational::zero());
        }
        let (re, im) = self.to_float();
        assert!(im.abs() < 1e-6 && re.abs() > 1e-12, "real_sign called on a non-real or tiny value");
        re.partial_cmp(&0.0).unwrap_or(Ordering::Equal)
    }

    /// Re-express the number inside a field whose conductor is a multiple.
    pub fn embed(&self, target: &Field) -> Result<CycloNumber, CycloError> {
        let from = self.field.conductor;
        if target.conductor % from != 0 {
            return Err(CycloError::FieldMismatch(from, target.conductor));
        }
        if target.conductor == from {
            return Ok(self.clone());
        }
        let step = (target.conductor / from) as i64;
        let mut acc = target.zero();
        for i in 0..self.field.degree {
            let c = self.coeff(i);
            if c.is_zero() {
                continue;
            }
            acc = &acc + &(&target.from_rational(&c) * &target.zeta_pow(step * i as i64));
        }
        Ok(acc)
    }

    /// Total order on canonical forms: lexicographic on rational coefficients.
    pub fn canonical_cmp(&self, other: &CycloNumber) -> Ordering {
        if let (Coeffs::Small { num: a, den: da }, Coeffs::Small { num: b, den: db }) = (&self.c, &other.c) {
            for (&x, &y) in a.iter().zip(b.iter()) {
                let o = ((x as i128) * (*db as i128)).cmp(&((y as i128) * (*da as i128)));
                if o != Ordering::Equal {
                    return o;
                }
            }
            return Ordering::Equal;
        }
        for i in 0..self.field.degree.min(other.field.degree) {
            let o = self.coeff(i).cmp(&other.coeff(i));
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    }

    /// Coefficients as "p/q" strings, for serialization.
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs().iter().map(|q| q.to_string()).collect()
    }
}

impl fmt::Debug for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "{}", c)?;
            } else {
                write!(f, "{}*z{}^{}", c, self.field.conductor, i)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<'a> Add<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    fn add(self, rhs: &CycloNumber) -> CycloNumber {
        self.checked_add(rhs).expect("cyclotomic add")
    }
}

impl<'a> Sub<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    fn sub(self, rhs: &CycloNumber) -> CycloNumber {
        self.checked_sub(rhs).expect("cyclotomic sub")
    }
}

impl<'a> Mul<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    fn mul(self, rhs: &CycloNumber) -> CycloNumber {
        self.checked_mul(rhs).expect("cyclotomic mul")
    }
}

impl Neg for &CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        let c = match &self.c {
            Coeffs::Small { num, den } => match num.iter().map(|x| x.checked_neg()).collect::<Option<Vec<i64>>>() {
                Some(n) => Coeffs::Small { num: n.into_boxed_slice(), den: *den },
                None => Coeffs::from_big(num.iter().map(|&x| -BigInt::from(x)).collect(), BigInt::from(*den)),
            },
            Coeffs::Big { num, den } => Coeffs::from_big(num.iter().map(|x| -x).collect(), den.clone()),
        };
        self.with(c)
    }
}

impl Neg for CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conductor_rounding() {
        assert_eq!(make_field(8).degree(), 4);
        let f = make_field(5);
        assert_eq!((f.conductor(), f.degree()), (20, 8));
        let f = make_field(1);
        assert_eq!((f.conductor(), f.degree()), (4, 2));
    }

    #[test]
    fn roots_of_unity() {
        let f = make_field(8);
        assert!(f.root_of_unity(0, 1).unwrap().is_one());
        let i = f.root_of_unity(1, 4).unwrap();
        assert_eq!(&i * &i, f.int(-1));
        let z = f.root_of_unity(1, 8).unwrap();
        let w = f.root_of_unity(-1, 8).unwrap();
        let s = &z + &w;
        assert_eq!(&s * &s, f.int(2));
        assert!(f.root_of_unity(1, 3).is_err());
    }

    #[test]
    fn fifth_roots_sum() {
        let f = make_field(5);
        let mut acc = f.zero();
        for a in 1..5 {
            acc = &acc + &f.root_of_unity(a, 5).unwrap();
        }
        assert_eq!(acc, f.int(-1));
    }

    #[test]
    fn inverse_of_zeta() {
        for n in [4u32, 8, 12, 20, 60] {
            let f = make_field(n);
            let z = f.zeta_pow(1);
            assert_eq!(z.inv(), f.zeta_pow(n as i64 - 1));
        }
        let f = make_field(4);
        assert_eq!(f.zero().checked_inv(), Err(CycloError::DivisionByZero));
    }

    #[test]
    fn conjugation() {
        let f = make_field(8);
        assert_eq!(f.i().galois_conj(), -&f.i());
        let s = f.sqrt2().unwrap();
        assert_eq!(s.galois_conj(), s);
    }

    #[test]
    fn mixed_fields_rejected() {
        let a = make_field(8).one();
        let b = make_field(12).one();
        assert!(matches!(a.checked_add(&b), Err(CycloError::FieldMismatch(8, 12))));
        assert!(a.checked_mul(&b).is_err());
    }

    #[test]
    fn floats() {
        let f = make_field(8);
        assert_eq!(f.one().to_float(), (1.0, 0.0));
        let (re, im) = f.root_of_unity(1, 8).unwrap().to_float();
        assert!((re - 0.5f64.sqrt()).abs() < 1e-12 && (im - 0.5f64.sqrt()).abs() < 1e-12);
        let t = make_field(5).tau().unwrap();
        let a = make_field(5);
        let direct = -&(&a.root_of_unity(2, 5).unwrap() + &a.root_of_unity(3, 5).unwrap());
        assert_eq!(t, direct);
        assert!((t.to_float().0 - 1.618_033_988_7).abs() < 1e-9);
    }

    #[test]
    fn zeta_order() {
        for n in [4u32, 12, 20, 24] {
            let f = make_field(n);
            let z = f.zeta_pow(1);
            let mut acc = f.one();
            for k in 1..=n {
                acc = &acc * &z;
                assert_eq!(acc.is_one(), k == n);
            }
        }
    }

    #[test]
    fn embedding_preserves_arithmetic() {
        let small = make_field(8);
        let big = make_field(24);
        let x = &small.sqrt2().unwrap() + &small.i();
        let y = x.embed(&big).unwrap();
        assert_eq!((&x * &x).embed(&big).unwrap(), &y * &y);
        assert_eq!(big.sqrt2().unwrap(), small.sqrt2().unwrap().embed(&big).unwrap());
    }

    #[test]
    fn big_fallback_round_trip() {
        let f = make_field(12);
        let mut x = &f.zeta_pow(1) + &f.rational(3, 7);
        for _ in 0..40 {
            x = &x * &(&f.zeta_pow(1) + &f.rational(5, 3));
        }
        let y = x.inv();
        assert!((&x * &y).is_one());
    }
}
