//! Exact arithmetic in cyclotomic fields Q(zeta_m).
//!
//! A [`CycScalar`] is a residue modulo the m-th cyclotomic polynomial Phi_m,
//! stored as a dense vector of exactly phi(m) rational coordinates in the
//! power basis 1, zeta, ..., zeta^{phi(m)-1}. Every operation reduces to this
//! canonical form, so equality is coordinatewise. Scalars of different orders
//! combine by embedding both into Q(zeta_lcm) through the compatible system
//! zeta_m = zeta_M^{M/m}.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary precision rational, always kept in lowest terms by the backing
/// implementation.
pub type Rational = BigRational;

pub fn rational_from(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rational_int(n: i64) -> Rational {
    Rational::from(BigInt::from(n))
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd_u64(a, b) * b
    }
}

/// Euler's totient, by trial factorization; orders in this crate are small.
pub fn euler_phi(m: u64) -> u64 {
    assert!(m >= 1, "euler_phi(0)");
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Dense integer coefficients of Phi_m, ascending, monic, length phi(m)+1.
///
/// Computed as (x^m - 1) / prod_{d | m, d < m} Phi_d by exact division, with
/// results cached per order.
pub fn cyclotomic_polynomial(m: u64) -> Arc<Vec<BigInt>> {
    assert!(m >= 1, "cyclotomic_polynomial(0)");
    static CACHE: OnceLock<Mutex<BTreeMap<u64, Arc<Vec<BigInt>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&m) {
        return Arc::clone(hit);
    }
    // x^m - 1
    let mut num = vec![BigInt::zero(); m as usize + 1];
    num[0] = BigInt::from(-1);
    num[m as usize] = BigInt::one();
    for d in 1..m {
        if m.is_multiple_of(d) {
            let phi_d = cyclotomic_polynomial(d);
            num = int_poly_div_exact(&num, &phi_d);
        }
    }
    debug_assert_eq!(num.len() as u64, euler_phi(m) + 1);
    let result = Arc::new(num);
    cache.lock().unwrap().insert(m, Arc::clone(&result));
    result
}

/// Exact division of integer polynomials; divisor must be monic and divide
/// the dividend exactly.
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    assert!(den.last().map(|c| c.is_one()).unwrap_or(false));
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    let nd = rem.len() - 1;
    assert!(nd >= dd);
    let mut quot = vec![BigInt::zero(); nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let c = rem[k + dd].clone();
        if !c.is_zero() {
            for (i, dc) in den.iter().enumerate() {
                rem[k + i] -= &c * dc;
            }
        }
        quot[k] = c;
    }
    assert!(rem.iter().all(|c| c.is_zero()), "inexact polynomial division");
    quot
}

fn poly_trim(v: &mut Vec<Rational>) {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
}

/// Remainder of a dense rational polynomial modulo a monic integer modulus.
fn poly_rem(mut a: Vec<Rational>, modulus: &[BigInt]) -> Vec<Rational> {
    let dd = modulus.len() - 1;
    while a.len() > dd {
        let c = a.pop().unwrap();
        if c.is_zero() {
            continue;
        }
        let k = a.len() - dd;
        for (i, mc) in modulus.iter().take(dd).enumerate() {
            let delta = &c * Rational::from(mc.clone());
            a[k + i] -= delta;
        }
    }
    a
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            if !cb.is_zero() {
                out[i + j] += ca * cb;
            }
        }
    }
    out
}

/// (quotient, remainder) with a nonzero divisor, over Q[x].
fn poly_divmod(num: &[Rational], den: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem: Vec<Rational> = num.to_vec();
    poly_trim(&mut rem);
    let mut den = den.to_vec();
    poly_trim(&mut den);
    assert!(!den.is_empty(), "polynomial division by zero");
    let lead = den.last().unwrap().clone();
    if rem.len() < den.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - den.len() + 1];
    while rem.len() >= den.len() {
        let c = rem.last().unwrap() / &lead;
        let k = rem.len() - den.len();
        for (i, dc) in den.iter().enumerate() {
            let delta = &c * dc;
            rem[k + i] -= delta;
        }
        quot[k] = c;
        poly_trim(&mut rem);
        if rem.is_empty() {
            break;
        }
    }
    (quot, rem)
}

/// A canonically reduced element of Q(zeta_order).
#[derive(Clone, Debug)]
pub struct CycScalar {
    order: u64,
    /// Exactly phi(order) coordinates in the power basis of zeta_order.
    coeffs: Vec<Rational>,
}

impl CycScalar {
    fn from_poly(order: u64, poly: Vec<Rational>) -> Self {
        let phi = euler_phi(order) as usize;
        let modulus = cyclotomic_polynomial(order);
        let mut coeffs = poly_rem(poly, &modulus);
        coeffs.resize(phi, Rational::zero());
        CycScalar { order, coeffs }
    }

    pub fn zero() -> Self {
        CycScalar { order: 1, coeffs: vec![Rational::zero()] }
    }

    pub fn one() -> Self {
        CycScalar { order: 1, coeffs: vec![Rational::one()] }
    }

    pub fn from_rational(q: Rational) -> Self {
        CycScalar { order: 1, coeffs: vec![q] }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(rational_int(n))
    }

    /// zeta_m itself.
    pub fn zeta(m: u64) -> Self {
        zeta_power(m, 1)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// Rational elements are exactly those supported on the basis element 1;
    /// coordinates in a basis are unique, so this test is complete.
    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn to_rational(&self) -> Option<Rational> {
        if self.is_rational() {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Reinterpret in Q(zeta_target) via zeta_order = zeta_target^{target/order}.
    pub fn embed(&self, target: u64) -> CycScalar {
        assert!(target.is_multiple_of(self.order), "embedding requires order | target");
        if target == self.order {
            return self.clone();
        }
        let k = (target / self.order) as usize;
        let mut poly = vec![Rational::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                poly[i * k] = c.clone();
            }
        }
        CycScalar::from_poly(target, poly)
    }

    fn unify(&self, other: &CycScalar) -> (CycScalar, CycScalar) {
        if self.order == other.order {
            (self.clone(), other.clone())
        } else {
            let m = lcm_u64(self.order, other.order);
            (self.embed(m), other.embed(m))
        }
    }

    pub fn scale(&self, q: &Rational) -> CycScalar {
        CycScalar {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Multiplicative inverse; `None` for zero. Phi_order is irreducible over
    /// Q, so the extended Euclidean gcd with any nonzero residue is a unit.
    pub fn inv(&self) -> Option<CycScalar> {
        if self.is_zero() {
            return None;
        }
        let modulus: Vec<Rational> = cyclotomic_polynomial(self.order)
            .iter()
            .map(|c| Rational::from(c.clone()))
            .collect();
        let mut a = self.coeffs.clone();
        poly_trim(&mut a);
        // Invariants: r0 = u0 * a (mod Phi), r1 = u1 * a (mod Phi).
        let mut r0 = modulus;
        let mut r1 = a;
        let mut u0: Vec<Rational> = Vec::new();
        let mut u1 = vec![Rational::one()];
        while !r1.is_empty() {
            let (q, r) = poly_divmod(&r0, &r1);
            let qu = poly_mul(&q, &u1);
            let mut nu: Vec<Rational> = u0.clone();
            nu.resize(nu.len().max(qu.len()), Rational::zero());
            for (i, c) in qu.into_iter().enumerate() {
                nu[i] -= c;
            }
            poly_trim(&mut nu);
            r0 = r1;
            r1 = r;
            u0 = u1;
            u1 = nu;
        }
        assert_eq!(r0.len(), 1, "cyclotomic modulus must be irreducible");
        let lead = r0[0].clone();
        let inv: Vec<Rational> = u0.iter().map(|c| c / &lead).collect();
        Some(CycScalar::from_poly(self.order, inv))
    }

    pub fn pow(&self, k: i64) -> CycScalar {
        if k < 0 {
            return self
                .inv()
                .expect("zero has no negative powers")
                .pow(-k);
        }
        let mut base = self.clone();
        let mut k = k as u64;
        let mut acc = CycScalar::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// Canonical text key at a fixed order, for deterministic hashing.
    pub fn canonical_key(&self, order: u64) -> String {
        let e = self.embed(order);
        let parts: Vec<String> = e.coeffs.iter().map(|c| c.to_string()).collect();
        parts.join(",")
    }
}

impl PartialEq for CycScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.unify(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycScalar {}

macro_rules! pointwise_op {
    ($trait:ident, $method:ident, $op:tt) => {
        impl std::ops::$trait for &CycScalar {
            type Output = CycScalar;
            fn $method(self, rhs: &CycScalar) -> CycScalar {
                let (mut a, b) = self.unify(rhs);
                for (x, y) in a.coeffs.iter_mut().zip(b.coeffs.iter()) {
                    *x = &*x $op y;
                }
                a
            }
        }
        impl std::ops::$trait for CycScalar {
            type Output = CycScalar;
            fn $method(self, rhs: CycScalar) -> CycScalar {
                (&self).$method(&rhs)
            }
        }
    };
}

pointwise_op!(Add, add, +);
pointwise_op!(Sub, sub, -);

impl std::ops::Mul for &CycScalar {
    type Output = CycScalar;
    fn mul(self, rhs: &CycScalar) -> CycScalar {
        let (a, b) = self.unify(rhs);
        let poly = poly_mul(&a.coeffs, &b.coeffs);
        CycScalar::from_poly(a.order, poly)
    }
}

impl std::ops::Mul for CycScalar {
    type Output = CycScalar;
    fn mul(self, rhs: CycScalar) -> CycScalar {
        &self * &rhs
    }
}

impl std::ops::Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        CycScalar {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl std::ops::Neg for CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        -&self
    }
}

/// zeta_m^k, with k reduced modulo m.
pub fn zeta_power(m: u64, k: i64) -> CycScalar {
    assert!(m >= 1);
    let k = k.rem_euclid(m as i64) as usize;
    let mut poly = vec![Rational::zero(); k + 1];
    poly[k] = Rational::one();
    CycScalar::from_poly(m, poly)
}

/// The quantum integer [k]_eps = 1 + eps + ... + eps^{k-1}, with [0] = 0.
pub fn quantum_integer(k: u32, eps: &CycScalar) -> CycScalar {
    let mut acc = CycScalar::zero();
    let mut pw = CycScalar::one();
    for _ in 0..k {
        acc = &acc + &pw;
        pw = &pw * eps;
    }
    acc
}

impl fmt::Display for CycScalar {
    /// Descending powers of z, where z stands for zeta_order; rationals print
    /// bare. Examples: `1/2*z^2 - 1`, `z`, `-3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for e in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[e];
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if e == 0 {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                if e == 1 {
                    write!(f, "z")?;
                } else {
                    write!(f, "z^{e}")?;
                }
            }
        }
        Ok(())
    }
}
