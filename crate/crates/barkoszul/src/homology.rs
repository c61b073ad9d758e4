//! The induced map on Hochschild homology: tagged bar-side chains collapse
//! through the converter onto tagged forms.
//!
//! A degree-p homology chain is a sum of terms f0.[g] x f1 x ... x fp.  The
//! direct image formula differentiates each slot once per chosen variable,
//! twisting later slots by the partial reflection product, all inside the
//! eigenbasis of the tag.  An independent oracle runs the full converter on
//! the bar resolution and collapses coefficients afterwards; the two must
//! agree termwise.

use std::collections::BTreeMap;

use crate::chainmap::psi;
use crate::cochain::{eps_power, quantum_partial, twist_prefix, TaggedForm};
use crate::group::GroupData;
use crate::poly::{combinations, exp_add, Exponents, Polynomial};
use crate::resolution::BarChain;
use crate::scalar::CycScalar;
use crate::{Error, Result};

/// A sum of monomial homology chain terms (tag, head, slot tuple), with the
/// head and the slots in standard coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyChain {
    degree: usize,
    nvars: usize,
    group_id: u64,
    terms: BTreeMap<(usize, Exponents, Vec<Exponents>), CycScalar>,
}

impl HomologyChain {
    pub fn zero(degree: usize, nvars: usize, group_id: u64) -> Self {
        HomologyChain { degree, nvars, group_id, terms: BTreeMap::new() }
    }

    /// Expands head and slot polynomials into monomial terms.
    pub fn from_slots(group: &GroupData, g: usize, polys: &[Polynomial]) -> Result<HomologyChain> {
        if polys.is_empty() {
            return Err(Error::invalid("a homology chain needs a head slot"));
        }
        if g >= group.order() {
            return Err(Error::IndexOutOfRange { index: g, bound: group.order() });
        }
        for f in polys {
            if f.nvars() != group.dim {
                return Err(Error::DimensionMismatch { expected: group.dim, got: f.nvars() });
            }
        }
        let degree = polys.len() - 1;
        let mut out = HomologyChain::zero(degree, group.dim, group.hash);
        let mut stack: Vec<(Exponents, Vec<Exponents>, CycScalar)> = Vec::new();
        for (e, c) in polys[0].iter() {
            stack.push((e.clone(), Vec::new(), c.clone()));
        }
        for f in &polys[1..] {
            let mut next = Vec::new();
            for (head, tail, c) in &stack {
                for (e, a) in f.iter() {
                    let mut tail2 = tail.clone();
                    tail2.push(e.clone());
                    next.push((head.clone(), tail2, c * a));
                }
            }
            stack = next;
        }
        for (head, tail, c) in stack {
            out.add_term(g, head, tail, c);
        }
        Ok(out)
    }

    pub fn add_term(&mut self, g: usize, head: Exponents, tail: Vec<Exponents>, c: CycScalar) {
        assert_eq!(tail.len(), self.degree);
        assert_eq!(head.len(), self.nvars);
        debug_assert!(tail.iter().all(|e| e.len() == self.nvars));
        if c.is_zero() {
            return;
        }
        match self.terms.entry((g, head, tail)) {
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
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn group_id(&self) -> u64 {
        self.group_id
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, Exponents, Vec<Exponents>), &CycScalar)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: &CycScalar) -> HomologyChain {
        let mut out = HomologyChain::zero(self.degree, self.nvars, self.group_id);
        if c.is_zero() {
            return out;
        }
        for ((g, head, tail), a) in &self.terms {
            out.add_term(*g, head.clone(), tail.clone(), a * c);
        }
        out
    }

    pub fn add(&self, rhs: &HomologyChain) -> Result<HomologyChain> {
        if self.group_id != rhs.group_id {
            return Err(Error::GroupMismatch);
        }
        if self.degree != rhs.degree {
            return Err(Error::DegreeOutOfRange { expected: "matching degrees", got: rhs.degree });
        }
        let mut out = self.clone();
        for ((g, head, tail), c) in &rhs.terms {
            out.add_term(*g, head.clone(), tail.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn render(&self, group: &GroupData) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for ((g, head, tail), c) in &self.terms {
            let mut slots = vec![Polynomial::monomial(self.nvars, head.clone(), c.clone()).to_string()];
            for e in tail {
                slots.push(Polynomial::monomial(self.nvars, e.clone(), CycScalar::one()).to_string());
            }
            parts.push(format!("[{}]{}", group.names[*g], slots.join("|")));
        }
        parts.join(" + ")
    }
}

/// Direct image of a homology chain: for every increasing variable tuple the
/// k-th slot loses one letter of its chosen variable through the quantum
/// derivative, twisted by all reflections below it; the head rides along.
pub fn psi_star_twisted(group: &GroupData, chain: &HomologyChain) -> Result<TaggedForm> {
    if chain.group_id() != group.hash {
        return Err(Error::GroupMismatch);
    }
    let n = group.dim;
    let p = chain.degree();
    let mut out = TaggedForm::zero(p, n, group.hash);
    for ((g, head, tail), c) in chain.iter() {
        let eigen = &group.eigen[*g];
        let head_b = eigen
            .basis_inv
            .act_on_polynomial(&Polynomial::monomial(n, head.clone(), c.clone()))?;
        let tail_b: Vec<Polynomial> = tail
            .iter()
            .map(|e| {
                eigen
                    .basis_inv
                    .act_on_polynomial(&Polynomial::monomial(n, e.clone(), CycScalar::one()))
            })
            .collect::<Result<_>>()?;
        for idx in combinations(n, p) {
            let mut prod = head_b.clone();
            for (k, &i) in idx.iter().enumerate() {
                if prod.is_zero() {
                    break;
                }
                let d = quantum_partial(&tail_b[k], i, &eigen.eps[i]);
                prod = &prod * &twist_prefix(&d, &eigen.eps, i);
            }
            if prod.is_zero() {
                continue;
            }
            for (e, a) in prod.iter() {
                out.add_term(*g, e.clone(), idx.clone(), a.clone());
            }
        }
    }
    Ok(out)
}

/// The untwisted map, defined only on identity-tagged chains: each slot takes
/// an ordinary partial derivative, no twists and no eigen rewriting, entirely
/// in standard coordinates.  A third route, independent of both the twisted
/// formula and the functor oracle, for the case they all must agree on.
pub fn psi_star_untwisted(group: &GroupData, chain: &HomologyChain) -> Result<TaggedForm> {
    if chain.group_id() != group.hash {
        return Err(Error::GroupMismatch);
    }
    let n = group.dim;
    let p = chain.degree();
    let mut out = TaggedForm::zero(p, n, group.hash);
    for ((g, head, tail), c) in chain.iter() {
        if *g != 0 {
            return Err(Error::invalid("the untwisted map needs identity tags only"));
        }
        for idx in combinations(n, p) {
            let mut coeff = c.clone();
            let mut exps = head.clone();
            for (k, &i) in idx.iter().enumerate() {
                // Ordinary derivative of the monomial slot in variable i.
                if tail[k][i] == 0 {
                    coeff = CycScalar::zero();
                    break;
                }
                coeff = &coeff * &CycScalar::from_integer(i64::from(tail[k][i]));
                let mut reduced = tail[k].clone();
                reduced[i] -= 1;
                exps = exp_add(&exps, &reduced);
            }
            if !coeff.is_zero() {
                out.add_term(0, exps, idx, coeff);
            }
        }
    }
    Ok(out)
}

/// Renders a homology image: like a tagged form, but the wedge letters are
/// vectors rather than duals.
pub fn render_vector_form(form: &TaggedForm, group: &GroupData) -> String {
    if form.is_zero() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    let mut by_component: BTreeMap<(usize, Vec<usize>), Polynomial> = BTreeMap::new();
    for ((g, e, w), c) in form.iter() {
        by_component
            .entry((*g, w.clone()))
            .or_insert_with(|| Polynomial::zero(form.nvars()))
            .add_term(e.clone(), c.clone());
    }
    for ((g, w), poly) in by_component {
        let mut s = format!("[{}]({})", group.names[g], poly);
        for i in w {
            s.push_str(&format!("^v{}", i + 1));
        }
        parts.push(s);
    }
    parts.join(" + ")
}

/// Independent oracle: run the chain-level converter on 1 x f1 x ... x fp x 1
/// in eigencoordinates and collapse each output term x (x) y (x) w against the
/// head, with the tag twisting the right factor past it.
pub fn functor_psi_image(group: &GroupData, chain: &HomologyChain) -> Result<TaggedForm> {
    if chain.group_id() != group.hash {
        return Err(Error::GroupMismatch);
    }
    let n = group.dim;
    let p = chain.degree();
    let mut out = TaggedForm::zero(p, n, group.hash);
    for ((g, head, tail), c) in chain.iter() {
        let eigen = &group.eigen[*g];
        let head_b = eigen
            .basis_inv
            .act_on_polynomial(&Polynomial::monomial(n, head.clone(), c.clone()))?;
        let mut slots = vec![Polynomial::one(n)];
        for e in tail {
            slots.push(
                eigen
                    .basis_inv
                    .act_on_polynomial(&Polynomial::monomial(n, e.clone(), CycScalar::one()))?,
            );
        }
        slots.push(Polynomial::one(n));
        let bar = BarChain::from_slots(&slots)?;
        let kos = psi(&bar)?;
        for ((left, right, wedge), a) in kos.iter() {
            let twist = eps_power(&eigen.eps, right);
            let outer = Polynomial::monomial(n, exp_add(left, right), &twist * a);
            let value = &outer * &head_b;
            for (e, b) in value.iter() {
                out.add_term(*g, e.clone(), wedge.clone(), b.clone());
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::builtin_group;
    use crate::textio::parse_homology_chain;
    use proptest::prelude::*;

    fn klein() -> GroupData {
        builtin_group("klein4-3d").unwrap()
    }

    fn chain(s: &str, group: &GroupData, p: usize) -> HomologyChain {
        parse_homology_chain(s, group, p).unwrap()
    }

    #[test]
    fn untwisted_wedge_example() {
        let g = klein();
        let image = psi_star_twisted(&g, &chain("[1]1|v1|v2", &g, 2)).unwrap();
        assert_eq!(image.num_terms(), 1);
        assert_eq!(image.coefficient(0, &[0, 0, 0], &[0, 1]), CycScalar::one());
    }

    #[test]
    fn untwisted_power_example() {
        let g = klein();
        let image = psi_star_twisted(&g, &chain("[1]1|v1^2", &g, 1)).unwrap();
        // Ordinary derivative on the identity component: d(v1^2) = 2 v1.
        assert_eq!(image.num_terms(), 1);
        assert_eq!(image.coefficient(0, &[1, 0, 0], &[0]), CycScalar::from_integer(2));
    }

    #[test]
    fn twist_direction_is_pinned() {
        // Tag h, single slot v1*v2: the v2 choice differentiates away v2 and
        // leaves a v1 letter behind the tag, which the first reflection of h
        // negates.  The v1 choice leaves v2, which no earlier reflection sees.
        let g = klein();
        let h = g.element_by_name("h").unwrap();
        let image = psi_star_twisted(&g, &chain("[h]1|v1*v2", &g, 1)).unwrap();
        assert_eq!(image.coefficient(h, &[0, 1, 0], &[0]), CycScalar::one());
        assert_eq!(image.coefficient(h, &[1, 0, 0], &[1]), CycScalar::from_integer(-1));
        assert_eq!(image.num_terms(), 2);
    }

    #[test]
    fn quantum_bracket_collapses_even_powers() {
        // [2] at eps = -1 vanishes: a square in a negated variable dies.
        let g = klein();
        let h = g.element_by_name("h").unwrap();
        let image = psi_star_twisted(&g, &chain("[h]1|v1^2", &g, 1)).unwrap();
        assert!(image.is_zero());
        let image = psi_star_twisted(&g, &chain("[h]1|v1^3", &g, 1)).unwrap();
        // [3]_{-1} = 1.
        assert_eq!(image.coefficient(h, &[2, 0, 0], &[0]), CycScalar::one());
    }

    #[test]
    fn head_rides_untouched() {
        let g = klein();
        let h = g.element_by_name("h").unwrap();
        let image = psi_star_twisted(&g, &chain("[h]v1*v3|v2", &g, 1)).unwrap();
        assert_eq!(image.coefficient(h, &[1, 0, 1], &[1]), CycScalar::one());
        assert_eq!(image.num_terms(), 1);
    }

    #[test]
    fn oracle_agrees_on_goldens() {
        let g = klein();
        for (s, p) in [
            ("[1]1|v1|v2", 2),
            ("[1]1|v1^2", 1),
            ("[h]1|v1*v2", 1),
            ("[h]v3|v1*v2^2|v2*v3", 2),
            ("[gh]v1^2|v2^3", 1),
            ("[g]1|v1*v2*v3|v2^2", 2),
        ] {
            let c = chain(s, &g, p);
            assert_eq!(psi_star_twisted(&g, &c).unwrap(), functor_psi_image(&g, &c).unwrap(), "{s}");
        }
    }

    #[test]
    fn oracle_agrees_off_diagonal_basis() {
        // A group whose eigenbases are not the standard basis.
        let g = builtin_group("sym3-perm").unwrap();
        for (s, p) in [("[s12]1|v1*v2", 1), ("[r123]v3|v1^2|v2", 2), ("[s13]1|v1|v3", 2)] {
            let c = chain(s, &g, p);
            assert_eq!(psi_star_twisted(&g, &c).unwrap(), functor_psi_image(&g, &c).unwrap(), "{s}");
        }
    }

    #[test]
    fn untwisted_map_agrees_at_the_identity() {
        let g = klein();
        for (s, p) in [
            ("[1]1|v1|v2", 2),
            ("[1]1|v1^2", 1),
            ("[1]v3^2|v1*v2|v1", 2),
            ("[1]v1|v1^3*v2", 1),
            ("[1]1|v1*v2*v3|v2^2|v3", 3),
        ] {
            let c = chain(s, &g, p);
            let untwisted = psi_star_untwisted(&g, &c).unwrap();
            assert_eq!(untwisted, psi_star_twisted(&g, &c).unwrap(), "{s}");
            assert_eq!(untwisted, functor_psi_image(&g, &c).unwrap(), "{s}");
        }
    }

    #[test]
    fn untwisted_map_rejects_other_tags() {
        let g = klein();
        let c = chain("[h]1|v1", &g, 1);
        assert!(psi_star_untwisted(&g, &c).is_err());
    }

    #[test]
    fn vector_form_rendering() {
        let g = klein();
        let image = psi_star_twisted(&g, &chain("[1]1|v1^2", &g, 1)).unwrap();
        assert_eq!(render_vector_form(&image, &g), "[1](2*v1)^v1");
        assert_eq!(render_vector_form(&TaggedForm::zero(1, 3, g.hash), &g), "0");
    }

    #[test]
    fn from_slots_validates() {
        let g = klein();
        assert!(HomologyChain::from_slots(&g, 9, &[Polynomial::one(3)]).is_err());
        assert!(HomologyChain::from_slots(&g, 0, &[]).is_err());
        assert!(HomologyChain::from_slots(&g, 0, &[Polynomial::one(2)]).is_err());
    }

    #[test]
    fn render_round_trips() {
        let g = klein();
        let c = chain("[h]v1*v3|v2^2", &g, 1);
        assert_eq!(c.render(&g), "[h]v1*v3|v2^2");
        let c2 = parse_homology_chain(&c.render(&g), &g, 1).unwrap();
        assert_eq!(c, c2);
    }

    fn arb_chain(group: GroupData, p: usize, dmax: u32) -> impl Strategy<Value = HomologyChain> {
        let n = group.dim;
        let order = group.order();
        prop::collection::vec(
            (0..order, prop::collection::vec(prop::collection::vec(0..=dmax, n), p + 1), -3i64..=3),
            1..4,
        )
        .prop_map(move |terms| {
            let mut c = HomologyChain::zero(p, n, group.hash);
            for (g, mut slots, a) in terms {
                let head = slots.remove(0);
                c.add_term(g, head, slots, CycScalar::from_integer(a));
            }
            c
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn prop_oracle_agrees_klein(c in arb_chain(klein(), 2, 2)) {
            let g = klein();
            prop_assert_eq!(psi_star_twisted(&g, &c).unwrap(), functor_psi_image(&g, &c).unwrap());
        }

        #[test]
        fn prop_oracle_agrees_cyclic(c in arb_chain(builtin_group("cyclic-4-2d").unwrap(), 1, 3)) {
            let g = builtin_group("cyclic-4-2d").unwrap();
            prop_assert_eq!(psi_star_twisted(&g, &c).unwrap(), functor_psi_image(&g, &c).unwrap());
        }
    }
}
