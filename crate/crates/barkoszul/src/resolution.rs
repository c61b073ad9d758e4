//! Chains of the bar and Koszul resolutions of S(V), their differentials,
//! and the inclusion of the Koszul resolution into the bar resolution.
//!
//! A bar p-chain lives in S(V)^{tensor (p+2)} and is stored as a sum of
//! monomial tensors m_0 x m_1 x ... x m_{p+1}. A Koszul p-chain lives in
//! S(V) x S(V) x Lambda^p V and is stored as a sum of terms
//! (left monomial, right monomial, strictly increasing wedge index set).
//! Both carry their homological degree p explicitly, so the zero chain in
//! different degrees stays distinguishable.

use std::collections::BTreeMap;

use crate::poly::{
    coeff_display, combinations, exp_add, exp_degree, exp_unit, render_monomial, Exponents,
    LinearMap, Polynomial,
};
use crate::scalar::CycScalar;
use crate::{Error, Result};

fn render_slot(e: &[u32]) -> String {
    let s = render_monomial(e);
    if s.is_empty() {
        "1".to_string()
    } else {
        s
    }
}

fn render_terms<'a>(
    terms: impl Iterator<Item = (&'a CycScalar, String)>,
    f: &mut std::fmt::Formatter<'_>,
) -> std::fmt::Result {
    let mut first = true;
    for (c, body) in terms {
        let (neg, coeff) = coeff_display(c);
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
        match coeff {
            None => write!(f, "{body}")?,
            Some(s) => write!(f, "{s}*{body}")?,
        }
    }
    Ok(())
}

/// A chain of the bar resolution in homological degree p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarChain {
    p: usize,
    nvars: usize,
    terms: BTreeMap<Vec<Exponents>, CycScalar>,
}

impl BarChain {
    pub fn zero(p: usize, nvars: usize) -> Self {
        BarChain { p, nvars, terms: BTreeMap::new() }
    }

    /// Expands a (p+2)-tuple of polynomial slots into monomial tensors.
    pub fn from_slots(slots: &[Polynomial]) -> Result<BarChain> {
        if slots.len() < 2 {
            return Err(Error::DegreeOutOfRange { expected: "at least two slots", got: slots.len() });
        }
        let nvars = slots[0].nvars();
        for s in slots {
            if s.nvars() != nvars {
                return Err(Error::DimensionMismatch { expected: nvars, got: s.nvars() });
            }
        }
        let mut chain = BarChain::zero(slots.len() - 2, nvars);
        let mut partial: Vec<(Vec<Exponents>, CycScalar)> = vec![(Vec::new(), CycScalar::one())];
        for slot in slots {
            let mut next = Vec::new();
            for (key, c) in &partial {
                for (e, a) in slot.iter() {
                    let mut k = key.clone();
                    k.push(e.clone());
                    next.push((k, c * a));
                }
            }
            partial = next;
        }
        for (key, c) in partial {
            chain.add_term(key, c);
        }
        Ok(chain)
    }

    pub fn add_term(&mut self, key: Vec<Exponents>, c: CycScalar) {
        assert_eq!(key.len(), self.p + 2);
        debug_assert!(key.iter().all(|e| e.len() == self.nvars));
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
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

    pub fn degree(&self) -> usize {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<Exponents>, &CycScalar)> {
        self.terms.iter()
    }

    /// Largest total polynomial degree over all tensor slots.
    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|k| k.iter().map(|e| exp_degree(e)).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, c: &CycScalar) -> BarChain {
        let mut out = BarChain::zero(self.p, self.nvars);
        if c.is_zero() {
            return out;
        }
        for (k, a) in &self.terms {
            out.add_term(k.clone(), a * c);
        }
        out
    }

    /// Applies a linear substitution to every tensor slot.
    pub fn act_linear(&self, map: &LinearMap) -> Result<BarChain> {
        if map.dim() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: map.dim() });
        }
        let mut out = BarChain::zero(self.p, self.nvars);
        for (key, c) in &self.terms {
            let slots: Vec<Polynomial> = key
                .iter()
                .map(|e| map.act_on_polynomial(&Polynomial::monomial(self.nvars, e.clone(), CycScalar::one())))
                .collect::<Result<_>>()?;
            let expanded = BarChain::from_slots(&slots)?.scale(c);
            out = &out + &expanded;
        }
        Ok(out)
    }
}

impl std::ops::Add for &BarChain {
    type Output = BarChain;
    fn add(self, rhs: &BarChain) -> BarChain {
        assert_eq!(self.p, rhs.p);
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &BarChain {
    type Output = BarChain;
    fn sub(self, rhs: &BarChain) -> BarChain {
        self + &rhs.scale(&CycScalar::from_integer(-1))
    }
}

impl std::fmt::Display for BarChain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        render_terms(
            self.terms.iter().map(|(k, c)| {
                let slots: Vec<String> = k.iter().map(|e| render_slot(e)).collect();
                (c, format!("({})", slots.join("|")))
            }),
            f,
        )
    }
}

/// A chain of the Koszul resolution in homological degree p: a sum of
/// (left, right, wedge) monomial terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulChain {
    p: usize,
    nvars: usize,
    terms: BTreeMap<(Exponents, Exponents, Vec<usize>), CycScalar>,
}

impl KoszulChain {
    pub fn zero(p: usize, nvars: usize) -> Self {
        KoszulChain { p, nvars, terms: BTreeMap::new() }
    }

    pub fn from_parts(left: &Polynomial, right: &Polynomial, wedge: &[usize]) -> Result<KoszulChain> {
        let nvars = left.nvars();
        if right.nvars() != nvars {
            return Err(Error::DimensionMismatch { expected: nvars, got: right.nvars() });
        }
        for (i, &w) in wedge.iter().enumerate() {
            if w >= nvars {
                return Err(Error::IndexOutOfRange { index: w, bound: nvars });
            }
            if i > 0 && wedge[i - 1] >= w {
                return Err(Error::invalid("wedge indices must be strictly increasing"));
            }
        }
        let mut out = KoszulChain::zero(wedge.len(), nvars);
        for (el, cl) in left.iter() {
            for (er, cr) in right.iter() {
                out.add_term((el.clone(), er.clone(), wedge.to_vec()), cl * cr);
            }
        }
        Ok(out)
    }

    /// The generator 1 x 1 x wedge.
    pub fn generator(nvars: usize, wedge: &[usize]) -> KoszulChain {
        KoszulChain::from_parts(&Polynomial::one(nvars), &Polynomial::one(nvars), wedge)
            .expect("generator wedge must be valid")
    }

    pub fn add_term(&mut self, key: (Exponents, Exponents, Vec<usize>), c: CycScalar) {
        assert_eq!(key.2.len(), self.p);
        debug_assert!(key.0.len() == self.nvars && key.1.len() == self.nvars);
        debug_assert!(key.2.windows(2).all(|w| w[0] < w[1]));
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
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

    pub fn degree(&self) -> usize {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Exponents, Exponents, Vec<usize>), &CycScalar)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: &CycScalar) -> KoszulChain {
        let mut out = KoszulChain::zero(self.p, self.nvars);
        if c.is_zero() {
            return out;
        }
        for (k, a) in &self.terms {
            out.add_term(k.clone(), a * c);
        }
        out
    }

    /// Applies a linear substitution to the outer slots and to the wedge.
    ///
    /// The wedge transforms through the p x p minors of the substitution
    /// matrix: w_{j_1} ^ ... ^ w_{j_p} picks up det M[K, W] on each increasing
    /// target tuple K.
    pub fn act_linear(&self, map: &LinearMap) -> Result<KoszulChain> {
        if map.dim() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: map.dim() });
        }
        let targets = combinations(self.nvars, self.p);
        let mut out = KoszulChain::zero(self.p, self.nvars);
        for ((l, r, w), c) in &self.terms {
            let lp = map.act_on_polynomial(&Polynomial::monomial(self.nvars, l.clone(), CycScalar::one()))?;
            let rp = map.act_on_polynomial(&Polynomial::monomial(self.nvars, r.clone(), CycScalar::one()))?;
            for target in &targets {
                let minor = LinearMap::from_fn(self.p, |a, b| map.get(target[a], w[b]).clone());
                let det = minor.det();
                if det.is_zero() {
                    continue;
                }
                let piece = KoszulChain::from_parts(&lp, &rp, target)?.scale(&(&det * c));
                out = &out + &piece;
            }
        }
        Ok(out)
    }
}

impl std::ops::Add for &KoszulChain {
    type Output = KoszulChain;
    fn add(self, rhs: &KoszulChain) -> KoszulChain {
        assert_eq!(self.p, rhs.p);
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &KoszulChain {
    type Output = KoszulChain;
    fn sub(self, rhs: &KoszulChain) -> KoszulChain {
        self + &rhs.scale(&CycScalar::from_integer(-1))
    }
}

impl std::fmt::Display for KoszulChain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        render_terms(
            self.terms.iter().map(|((l, r, w), c)| {
                let wedge = crate::textio::render_wedge_vars(w);
                (c, format!("({}|{}|{})", render_slot(l), render_slot(r), wedge))
            }),
            f,
        )
    }
}

/// Bar differential: contracts adjacent slots with alternating signs.
pub fn bar_differential(c: &BarChain) -> Result<BarChain> {
    if c.degree() == 0 {
        return Err(Error::DegreeOutOfRange { expected: "degree >= 1", got: 0 });
    }
    let mut out = BarChain::zero(c.degree() - 1, c.nvars());
    for (key, a) in c.iter() {
        for j in 0..=c.degree() {
            let mut k = Vec::with_capacity(key.len() - 1);
            k.extend_from_slice(&key[..j]);
            k.push(exp_add(&key[j], &key[j + 1]));
            k.extend_from_slice(&key[j + 2..]);
            let sign = if j % 2 == 0 { a.clone() } else { -a };
            out.add_term(k, sign);
        }
    }
    Ok(out)
}

/// Koszul differential: contracts one wedge factor at a time into the outer
/// slots, left minus right, with alternating signs.
pub fn koszul_differential(c: &KoszulChain) -> Result<KoszulChain> {
    if c.degree() == 0 {
        return Err(Error::DegreeOutOfRange { expected: "degree >= 1", got: 0 });
    }
    let n = c.nvars();
    let mut out = KoszulChain::zero(c.degree() - 1, n);
    for ((l, r, w), a) in c.iter() {
        for (k, &j) in w.iter().enumerate() {
            let mut rest = w.clone();
            rest.remove(k);
            let sign = if k % 2 == 0 { a.clone() } else { -a };
            out.add_term((exp_add(l, &exp_unit(n, j)), r.clone(), rest.clone()), sign.clone());
            out.add_term((l.clone(), exp_add(r, &exp_unit(n, j)), rest), -&sign);
        }
    }
    Ok(out)
}

/// All permutations of 0..p with their signs, in a deterministic order.
pub fn permutations_signed(p: usize) -> Vec<(Vec<usize>, i8)> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..p).collect();
    fn heap(k: usize, perm: &mut Vec<usize>, sign: &mut i8, out: &mut Vec<(Vec<usize>, i8)>) {
        if k <= 1 {
            out.push((perm.clone(), *sign));
            return;
        }
        for i in 0..k {
            heap(k - 1, perm, sign, out);
            if i < k - 1 {
                if k.is_multiple_of(2) {
                    perm.swap(i, k - 1);
                } else {
                    perm.swap(0, k - 1);
                }
                *sign = -*sign;
            }
        }
    }
    let mut sign = 1i8;
    heap(p, &mut perm, &mut sign, &mut out);
    out
}

/// Inclusion of the Koszul resolution into the bar resolution: antisymmetrizes
/// each wedge over all orderings of its variables.
pub fn phi(c: &KoszulChain) -> BarChain {
    let n = c.nvars();
    let p = c.degree();
    let perms = permutations_signed(p);
    let mut out = BarChain::zero(p, n);
    for ((l, r, w), a) in c.iter() {
        for (perm, sign) in &perms {
            let mut key = Vec::with_capacity(p + 2);
            key.push(l.clone());
            for &slot in perm {
                key.push(exp_unit(n, w[slot]));
            }
            key.push(r.clone());
            let coeff = if *sign > 0 { a.clone() } else { -a };
            out.add_term(key, coeff);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::CycScalar;
    use proptest::prelude::*;

    fn var(n: usize, i: usize) -> Polynomial {
        Polynomial::variable(n, i)
    }

    fn one(n: usize) -> Polynomial {
        Polynomial::one(n)
    }

    #[test]
    fn bar_differential_degree_one_and_two() {
        let n = 2;
        // delta_1(1 x v1 x 1) = v1 x 1 - 1 x v1.
        let c = BarChain::from_slots(&[one(n), var(n, 0), one(n)]).unwrap();
        let d = bar_differential(&c).unwrap();
        let mut expected = BarChain::zero(0, n);
        expected.add_term(vec![vec![1, 0], vec![0, 0]], CycScalar::one());
        expected.add_term(vec![vec![0, 0], vec![1, 0]], CycScalar::from_integer(-1));
        assert_eq!(d, expected);

        // delta_2(1 x v1 x v2 x 1) = v1 x v2 x 1 - 1 x v1v2 x 1 + 1 x v1 x v2.
        let c = BarChain::from_slots(&[one(n), var(n, 0), var(n, 1), one(n)]).unwrap();
        let d = bar_differential(&c).unwrap();
        let mut expected = BarChain::zero(1, n);
        expected.add_term(vec![vec![1, 0], vec![0, 1], vec![0, 0]], CycScalar::one());
        expected.add_term(vec![vec![0, 0], vec![1, 1], vec![0, 0]], CycScalar::from_integer(-1));
        expected.add_term(vec![vec![0, 0], vec![1, 0], vec![0, 1]], CycScalar::one());
        assert_eq!(d, expected);
    }

    #[test]
    fn koszul_differential_degree_two() {
        let n = 2;
        // d_2(1 x 1 x v1 ^ v2) = (v1 x 1 - 1 x v1) x w2 - (v2 x 1 - 1 x v2) x w1.
        let c = KoszulChain::generator(n, &[0, 1]);
        let d = koszul_differential(&c).unwrap();
        let mut expected = KoszulChain::zero(1, n);
        expected.add_term((vec![1, 0], vec![0, 0], vec![1]), CycScalar::one());
        expected.add_term((vec![0, 0], vec![1, 0], vec![1]), CycScalar::from_integer(-1));
        expected.add_term((vec![0, 1], vec![0, 0], vec![0]), CycScalar::from_integer(-1));
        expected.add_term((vec![0, 0], vec![0, 1], vec![0]), CycScalar::one());
        assert_eq!(d, expected);
    }

    #[test]
    fn phi_antisymmetrizes() {
        let n = 2;
        let c = KoszulChain::generator(n, &[0, 1]);
        let b = phi(&c);
        let mut expected = BarChain::zero(2, n);
        expected.add_term(vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![0, 0]], CycScalar::one());
        expected.add_term(vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![0, 0]], CycScalar::from_integer(-1));
        assert_eq!(b, expected);
        // Degree zero: identity on the outer slots.
        let k0 = KoszulChain::from_parts(&var(n, 0), &var(n, 1), &[]).unwrap();
        let b0 = phi(&k0);
        let mut expected0 = BarChain::zero(0, n);
        expected0.add_term(vec![vec![1, 0], vec![0, 1]], CycScalar::one());
        assert_eq!(b0, expected0);
    }

    #[test]
    fn degree_zero_differentials_are_rejected() {
        let c = BarChain::from_slots(&[one(2), one(2)]).unwrap();
        assert!(matches!(bar_differential(&c), Err(Error::DegreeOutOfRange { .. })));
        let k = KoszulChain::generator(2, &[]);
        assert!(matches!(koszul_differential(&k), Err(Error::DegreeOutOfRange { .. })));
    }

    #[test]
    fn permutation_signs() {
        let perms = permutations_signed(3);
        assert_eq!(perms.len(), 6);
        let total: i32 = perms.iter().map(|(_, s)| *s as i32).sum();
        assert_eq!(total, 0);
        for (perm, sign) in &perms {
            // Independent sign check by counting inversions.
            let mut inv = 0;
            for i in 0..perm.len() {
                for j in i + 1..perm.len() {
                    if perm[i] > perm[j] {
                        inv += 1;
                    }
                }
            }
            assert_eq!(if inv % 2 == 0 { 1 } else { -1 }, *sign as i32);
        }
    }

    fn arb_bar_chain(n: usize, p: usize, maxdeg: u32) -> impl Strategy<Value = BarChain> {
        let slot = prop::collection::vec(0u32..=maxdeg, n);
        prop::collection::vec(
            (prop::collection::vec(slot, p + 2), -3i64..=3),
            1..4,
        )
        .prop_map(move |terms| {
            let mut c = BarChain::zero(p, n);
            for (key, a) in terms {
                c.add_term(key, CycScalar::from_integer(a));
            }
            c
        })
    }

    fn arb_koszul_chain(n: usize, p: usize, maxdeg: u32) -> impl Strategy<Value = KoszulChain> {
        let slot = prop::collection::vec(0u32..=maxdeg, n);
        let wedges = combinations(n, p);
        prop::collection::vec(((slot.clone(), slot), -3i64..=3, 0..wedges.len()), 1..4).prop_map(
            move |terms| {
                let mut c = KoszulChain::zero(p, n);
                for ((l, r), a, wi) in terms {
                    c.add_term((l, r, wedges[wi].clone()), CycScalar::from_integer(a));
                }
                c
            },
        )
    }

    proptest! {
        #[test]
        fn bar_differential_squares_to_zero(c in arb_bar_chain(2, 3, 2)) {
            let dd = bar_differential(&bar_differential(&c).unwrap()).unwrap();
            prop_assert!(dd.is_zero());
        }

        #[test]
        fn koszul_differential_squares_to_zero(c in arb_koszul_chain(3, 3, 2)) {
            let dd = koszul_differential(&koszul_differential(&c).unwrap()).unwrap();
            prop_assert!(dd.is_zero());
        }

        #[test]
        fn phi_is_a_chain_map(c in arb_koszul_chain(3, 2, 2)) {
            let lhs = bar_differential(&phi(&c)).unwrap();
            let rhs = phi(&koszul_differential(&c).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn phi_is_equivariant(c in arb_koszul_chain(2, 1, 2), es in prop::collection::vec(-2i64..=2, 4)) {
            let m = LinearMap::from_fn(2, |i, j| CycScalar::from_integer(es[i * 2 + j]));
            prop_assume!(!m.det().is_zero());
            let lhs = phi(&c.act_linear(&m).unwrap());
            let rhs = phi(&c).act_linear(&m).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
