//! Multivariate polynomials over cyclotomic scalars, linear substitutions,
//! and elements of the skew group algebra S(V)#G.
//!
//! A polynomial in n variables is a map from exponent vectors of length n to
//! nonzero scalars; the map is ordered, so iteration and rendering are
//! deterministic. Variables are written v1, ..., vn and stand for a fixed
//! ordered basis of V.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::group::GroupData;
use crate::scalar::{CycScalar, Rational};
use crate::{Error, Result};

/// Exponent vector of a monomial; always exactly `nvars` entries.
pub type Exponents = Vec<u32>;

pub fn exp_degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

pub fn exp_add(a: &[u32], b: &[u32]) -> Exponents {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn exp_unit(n: usize, i: usize) -> Exponents {
    let mut e = vec![0u32; n];
    e[i] = 1;
    e
}

/// All exponent vectors of length n with total degree exactly d, ascending in
/// the lexicographic order on the vectors themselves.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Exponents> {
    fn rec(n: usize, d: u32, prefix: &mut Exponents, out: &mut Vec<Exponents>) {
        if n == 1 {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=d {
            prefix.push(first);
            rec(n - 1, d - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

/// All strictly increasing index tuples of length p drawn from 0..n, in
/// lexicographic order.
pub fn combinations(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, p: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if p == 0 {
            out.push(prefix.clone());
            return;
        }
        for i in start..n {
            if n - i < p {
                break;
            }
            prefix.push(i);
            rec(i + 1, n, p - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, p, &mut Vec::new(), &mut out);
    out
}

/// Binomial coefficient, exact for every argument pair that fits in u64.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Exponents, CycScalar>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, CycScalar::one())
    }

    pub fn constant(nvars: usize, c: CycScalar) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The basis vector v_{i+1} as a polynomial (i is 0-based).
    pub fn variable(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut p = Self::zero(nvars);
        p.add_term(exp_unit(nvars, i), CycScalar::one());
        p
    }

    pub fn monomial(nvars: usize, exps: Exponents, c: CycScalar) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = Self::zero(nvars);
        p.add_term(exps, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; zero for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| exp_degree(e)).max().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Exponents, &CycScalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exps: &[u32]) -> CycScalar {
        self.terms.get(exps).cloned().unwrap_or_else(CycScalar::zero)
    }

    /// Adds c * v^exps, dropping the entry if the sum cancels.
    pub fn add_term(&mut self, exps: Exponents, c: CycScalar) {
        assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: &CycScalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        let mut out = Polynomial::zero(self.nvars);
        for (e, a) in &self.terms {
            out.add_term(e.clone(), a * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Applies f(v1, ..., vn) -> f(w1, ..., wn) where w_i is given by `images`.
    pub fn substitute(&self, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.nvars);
        let out_vars = images.first().map(|p| p.nvars).unwrap_or(self.nvars);
        let mut out = Polynomial::zero(out_vars);
        for (e, c) in &self.terms {
            let mut acc = Polynomial::constant(out_vars, c.clone());
            for (j, &k) in e.iter().enumerate() {
                if k > 0 {
                    acc = &acc * &images[j].pow(k);
                }
            }
            out = &out + &acc;
        }
        out
    }
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &-rhs
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = Polynomial::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(exp_add(ea, eb), ca * cb);
            }
        }
        out
    }
}

pub(crate) fn render_monomial(e: &[u32]) -> String {
    let mut parts = Vec::new();
    for (i, &k) in e.iter().enumerate() {
        if k == 1 {
            parts.push(format!("v{}", i + 1));
        } else if k > 1 {
            parts.push(format!("v{}^{}", i + 1, k));
        }
    }
    parts.join("*")
}

/// Splits a coefficient into (use minus sign, body-or-None), where `None`
/// means the numeric part is an implicit 1.
pub(crate) fn coeff_display(c: &CycScalar) -> (bool, Option<String>) {
    let nonzero: Vec<&Rational> = c.coeffs().iter().filter(|q| !q.is_zero()).collect();
    let negate = !nonzero.is_empty() && nonzero.iter().all(|q| **q < Rational::zero());
    let c = if negate { -c } else { c.clone() };
    if c.is_one() {
        return (negate, None);
    }
    let s = c.to_string();
    // Multi-term scalars need parentheses inside a product.
    if s.contains(' ') {
        (negate, Some(format!("({s})")))
    } else {
        (negate, Some(s))
    }
}

impl std::fmt::Display for Polynomial {
    /// Terms in descending lexicographic order of exponent vectors, so the
    /// v1-dominant monomials print first: `3*v1^2*v2 - z*v3`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let (neg, body) = coeff_display(c);
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
            let mono = render_monomial(e);
            match (body, mono.is_empty()) {
                (None, true) => write!(f, "1")?,
                (None, false) => write!(f, "{mono}")?,
                (Some(b), true) => write!(f, "{b}")?,
                (Some(b), false) => write!(f, "{b}*{mono}")?,
            }
        }
        Ok(())
    }
}

/// A linear endomorphism of V in the fixed basis; entry (i, j) is the
/// coefficient of v_{i+1} in the image of v_{j+1}, so columns are images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    n: usize,
    entries: Vec<CycScalar>,
}

impl LinearMap {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> CycScalar) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        LinearMap { n, entries }
    }

    pub fn from_rows(rows: Vec<Vec<CycScalar>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n));
        LinearMap { n, entries: rows.into_iter().flatten().collect() }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| {
            if i == j {
                CycScalar::one()
            } else {
                CycScalar::zero()
            }
        })
    }

    pub fn diagonal(diag: &[CycScalar]) -> Self {
        let n = diag.len();
        Self::from_fn(n, |i, j| {
            if i == j {
                diag[i].clone()
            } else {
                CycScalar::zero()
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &CycScalar {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, c: CycScalar) {
        self.entries[i * self.n + j] = c;
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    /// Column j as a polynomial, i.e. the image of v_{j+1}.
    pub fn column_poly(&self, j: usize) -> Polynomial {
        let mut p = Polynomial::zero(self.n);
        for i in 0..self.n {
            p.add_term(exp_unit(self.n, i), self.get(i, j).clone());
        }
        p
    }

    pub fn transpose(&self) -> LinearMap {
        Self::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, rhs: &LinearMap) -> LinearMap {
        assert_eq!(self.n, rhs.n);
        Self::from_fn(self.n, |i, j| {
            let mut acc = CycScalar::zero();
            for k in 0..self.n {
                acc = &acc + &(self.get(i, k) * rhs.get(k, j));
            }
            acc
        })
    }

    /// The algebra automorphism of S(V) induced by this map: substitutes
    /// v_j -> sum_i entry(i, j) v_i multiplicatively.
    pub fn act_on_polynomial(&self, f: &Polynomial) -> Result<Polynomial> {
        if f.nvars() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: f.nvars() });
        }
        let images: Vec<Polynomial> = (0..self.n).map(|j| self.column_poly(j)).collect();
        Ok(f.substitute(&images))
    }

    pub fn det(&self) -> CycScalar {
        let mut m = self.clone();
        let mut det = CycScalar::one();
        for col in 0..m.n {
            let pivot = (col..m.n).find(|&r| !m.get(r, col).is_zero());
            let Some(p) = pivot else {
                return CycScalar::zero();
            };
            if p != col {
                for j in 0..m.n {
                    let a = m.get(p, j).clone();
                    let b = m.get(col, j).clone();
                    m.set(p, j, b);
                    m.set(col, j, a);
                }
                det = -det;
            }
            let pv = m.get(col, col).clone();
            det = &det * &pv;
            let pi = pv.inv().unwrap();
            for r in col + 1..m.n {
                let factor = &m.get(r, col).clone() * &pi;
                if factor.is_zero() {
                    continue;
                }
                for j in col..m.n {
                    let delta = &factor * m.get(col, j);
                    m.set(r, j, &m.get(r, j).clone() - &delta);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<LinearMap> {
        let n = self.n;
        let mut m = self.clone();
        let mut inv = LinearMap::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m.get(r, col).is_zero());
            let Some(p) = pivot else {
                return Err(Error::SingularMatrix);
            };
            if p != col {
                for j in 0..n {
                    let (a, b) = (m.get(p, j).clone(), m.get(col, j).clone());
                    m.set(p, j, b);
                    m.set(col, j, a);
                    let (a, b) = (inv.get(p, j).clone(), inv.get(col, j).clone());
                    inv.set(p, j, b);
                    inv.set(col, j, a);
                }
            }
            let pi = m.get(col, col).inv().unwrap();
            for j in 0..n {
                m.set(col, j, &m.get(col, j).clone() * &pi);
                inv.set(col, j, &inv.get(col, j).clone() * &pi);
            }
            for r in 0..n {
                if r == col || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for j in 0..n {
                    let dm = &factor * m.get(col, j);
                    m.set(r, j, &m.get(r, j).clone() - &dm);
                    let di = &factor * inv.get(col, j);
                    inv.set(r, j, &inv.get(r, j).clone() - &di);
                }
            }
        }
        Ok(inv)
    }

    /// Smallest k >= 1 with M^k = 1, or None past the cap.
    pub fn multiplicative_order(&self, cap: u64) -> Option<u64> {
        let mut acc = self.clone();
        for k in 1..=cap {
            if acc.is_identity() {
                return Some(k);
            }
            acc = acc.mul(self);
        }
        None
    }

    /// Canonical text key at a fixed scalar order, for deterministic hashing
    /// and deduplication.
    pub fn canonical_key(&self, order: u64) -> String {
        let parts: Vec<String> = self.entries.iter().map(|c| c.canonical_key(order)).collect();
        format!("{}|{}", self.n, parts.join(";"))
    }
}

/// An element of the skew group algebra S(V)#G: a finite sum of components
/// f_g times the group basis element for g, stored by element index.
///
/// Multiplication twists scalars past group elements: (f g)(f' h) equals
/// f (g f') (g h) where g acts on f' through its matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewElement {
    group_id: u64,
    nvars: usize,
    components: BTreeMap<usize, Polynomial>,
}

impl SkewElement {
    pub fn zero(group: &GroupData) -> Self {
        SkewElement { group_id: group.hash, nvars: group.dim, components: BTreeMap::new() }
    }

    pub fn from_component(group: &GroupData, g: usize, f: Polynomial) -> Self {
        assert!(g < group.elements.len());
        assert_eq!(f.nvars(), group.dim);
        let mut s = Self::zero(group);
        s.add_component(g, f);
        s
    }

    pub fn add_component(&mut self, g: usize, f: Polynomial) {
        if f.is_zero() {
            return;
        }
        match self.components.entry(g) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(f);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &f;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn component(&self, g: usize) -> Polynomial {
        self.components.get(&g).cloned().unwrap_or_else(|| Polynomial::zero(self.nvars))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Polynomial)> {
        self.components.iter().map(|(g, f)| (*g, f))
    }

    pub fn scale(&self, c: &CycScalar) -> SkewElement {
        let mut out = SkewElement { group_id: self.group_id, nvars: self.nvars, components: BTreeMap::new() };
        for (g, f) in &self.components {
            out.add_component(*g, f.scale(c));
        }
        out
    }

    fn check_group(&self, group: &GroupData) -> Result<()> {
        if self.group_id != group.hash {
            return Err(Error::GroupMismatch);
        }
        Ok(())
    }

    pub fn add(&self, rhs: &SkewElement) -> Result<SkewElement> {
        if self.group_id != rhs.group_id {
            return Err(Error::GroupMismatch);
        }
        let mut out = self.clone();
        for (g, f) in &rhs.components {
            out.add_component(*g, f.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &SkewElement) -> Result<SkewElement> {
        self.add(&rhs.scale(&CycScalar::from_integer(-1)))
    }

    /// Product in S(V)#G.
    pub fn skew_multiply(&self, rhs: &SkewElement, group: &GroupData) -> Result<SkewElement> {
        self.check_group(group)?;
        rhs.check_group(group)?;
        let mut out = Self::zero(group);
        for (g, f) in &self.components {
            for (h, f2) in &rhs.components {
                let twisted = group.elements[*g].act_on_polynomial(f2)?;
                out.add_component(group.mult[*g][*h], &f.clone() * &twisted);
            }
        }
        Ok(out)
    }

    /// Right multiplication by a plain polynomial v (component of the
    /// identity): (f g) v = f (g v) g.
    pub fn right_twisted_multiply(&self, v: &Polynomial, group: &GroupData) -> Result<SkewElement> {
        self.check_group(group)?;
        let mut out = Self::zero(group);
        for (g, f) in &self.components {
            let twisted = group.elements[*g].act_on_polynomial(v)?;
            out.add_component(*g, &f.clone() * &twisted);
        }
        Ok(out)
    }

    /// Left multiplication by a plain polynomial.
    pub fn left_multiply(&self, v: &Polynomial) -> SkewElement {
        let mut out = SkewElement { group_id: self.group_id, nvars: self.nvars, components: BTreeMap::new() };
        for (g, f) in &self.components {
            out.add_component(*g, &f.clone() * v);
        }
        out
    }

    /// Conjugation by a group element: a (f g) a^{-1} = (a f) (a g a^{-1}).
    pub fn conjugate(&self, a: usize, group: &GroupData) -> Result<SkewElement> {
        self.check_group(group)?;
        let ai = group.inv[a];
        let mut out = Self::zero(group);
        for (g, f) in &self.components {
            let tf = group.elements[a].act_on_polynomial(f)?;
            let tg = group.mult[group.mult[a][*g]][ai];
            out.add_component(tg, tf);
        }
        Ok(out)
    }

    /// Deterministic rendering `(f)*[name] + ...`; single-monomial
    /// coefficients print without parentheses.
    pub fn render(&self, group: &GroupData) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (g, f) in &self.components {
            let fs = f.to_string();
            let name = &group.names[*g];
            if f.num_terms() == 1 && !fs.contains(' ') {
                parts.push(format!("{fs}*[{name}]"));
            } else {
                parts.push(format!("({fs})*[{name}]"));
            }
        }
        parts.join(" + ")
    }
}
