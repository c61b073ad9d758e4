//! The converter chain map from the bar resolution to the Koszul resolution.
//!
//! In homological degree p each middle monomial tuple is split along every
//! strictly increasing choice of p variables; the two complementary exponent
//! vectors q and qhat describe how the remaining letters fall to the left and
//! right of the extracted wedge.  Degree 0 is the identity.  All coefficients
//! pass through unchanged, so the map is exact over any coefficient ring.

use crate::poly::{combinations, exp_add, Exponents, LinearMap};
use crate::resolution::{BarChain, KoszulChain};
use crate::{Error, Result};

/// A working basis for the converter plus a total-degree guard.  The map is
/// defined by its splitting formula in the coordinates of `basis`; chains
/// given in standard coordinates are rewritten before and after.
#[derive(Clone, Debug)]
pub struct PsiContext {
    basis: LinearMap,
    basis_inv: LinearMap,
    degree_cap: u32,
}

impl PsiContext {
    pub fn new(basis: LinearMap, degree_cap: u32) -> Result<PsiContext> {
        let basis_inv = basis.inverse()?;
        Ok(PsiContext { basis, basis_inv, degree_cap })
    }

    /// The standard-coordinates context: no rewriting.
    pub fn standard(nvars: usize, degree_cap: u32) -> PsiContext {
        PsiContext {
            basis: LinearMap::identity(nvars),
            basis_inv: LinearMap::identity(nvars),
            degree_cap,
        }
    }

    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    /// Applies the converter to a standard-coordinates chain: rewrite into
    /// the working basis, split, rewrite back.
    pub fn apply(&self, chain: &BarChain) -> Result<KoszulChain> {
        if chain.total_degree() > self.degree_cap {
            return Err(Error::DegreeCapExceeded {
                degree: chain.total_degree() as usize,
                cap: self.degree_cap as usize,
            });
        }
        let local = chain.act_linear(&self.basis_inv)?;
        psi(&local)?.act_linear(&self.basis)
    }
}

fn check_split_args(mid: &[Exponents], idx: &[usize], a: &[u32]) -> Result<usize> {
    let p = mid.len();
    if idx.len() != p || a.len() != p {
        return Err(Error::invalid("split data must have one entry per inner slot"));
    }
    let n = mid.first().map_or(0, |e| e.len());
    for w in idx.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::invalid("split indices must be strictly increasing"));
        }
    }
    for (k, &i) in idx.iter().enumerate() {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, bound: n });
        }
        if a[k] >= mid[k][i] {
            return Err(Error::invalid(format!(
                "split offset {} at position {} exceeds exponent {}",
                a[k], k, mid[k][i]
            )));
        }
    }
    Ok(n)
}

/// Left output exponents for one splitting choice.
///
/// For the variable extracted at position k the left factor keeps `a[k]`
/// letters on top of everything that earlier slots contributed; between two
/// extraction points every letter seen so far stays on the left.
pub fn q_exponent(mid: &[Exponents], idx: &[usize], a: &[u32]) -> Result<Exponents> {
    let n = check_split_args(mid, idx, a)?;
    let mut q = vec![0u32; n];
    for (i, qi) in q.iter_mut().enumerate() {
        let count = idx.iter().take_while(|&&j| j < i).count();
        let base: u32 = mid[..count].iter().map(|m| m[i]).sum();
        *qi = match idx.iter().position(|&j| j == i) {
            Some(k) => a[k] + base,
            None => base,
        };
    }
    Ok(q)
}

/// Right output exponents, complementary to `q_exponent`: together with one
/// letter per extracted variable they recover the full slot product.
pub fn qhat_exponent(mid: &[Exponents], idx: &[usize], a: &[u32]) -> Result<Exponents> {
    let q = q_exponent(mid, idx, a)?;
    let n = q.len();
    let mut qh = vec![0u32; n];
    for i in 0..n {
        let total: u32 = mid.iter().map(|m| m[i]).sum();
        let used = q[i] + u32::from(idx.contains(&i));
        qh[i] = total
            .checked_sub(used)
            .expect("complementary exponent underflow");
    }
    Ok(qh)
}

/// Converter from bar to Koszul chains.  Outer tensor factors multiply onto
/// the two output slots; the middle slots are split termwise.
pub fn psi(chain: &BarChain) -> Result<KoszulChain> {
    let p = chain.degree();
    let n = chain.nvars();
    let mut out = KoszulChain::zero(p, n);
    for (key, c) in chain.iter() {
        if p == 0 {
            out.add_term((key[0].clone(), key[1].clone(), Vec::new()), c.clone());
            continue;
        }
        let mid = &key[1..=p];
        'choice: for idx in combinations(n, p) {
            if idx.iter().enumerate().any(|(k, &i)| mid[k][i] == 0) {
                continue;
            }
            let mut a = vec![0u32; p];
            loop {
                let q = q_exponent(mid, &idx, &a)?;
                let qh = qhat_exponent(mid, &idx, &a)?;
                let left = exp_add(&key[0], &q);
                let right = exp_add(&qh, &key[p + 1]);
                out.add_term((left, right, idx.clone()), c.clone());
                let mut k = 0;
                loop {
                    if k == p {
                        continue 'choice;
                    }
                    a[k] += 1;
                    if a[k] < mid[k][idx[k]] {
                        break;
                    }
                    a[k] = 0;
                    k += 1;
                }
            }
        }
    }
    Ok(out)
}

/// Degree-1 closed form, transcribed directly rather than through the
/// splitting rule; used to cross-check `psi`.
pub fn psi_closed_form_1(chain: &BarChain) -> Result<KoszulChain> {
    if chain.degree() != 1 {
        return Err(Error::DegreeOutOfRange { expected: "exactly 1", got: chain.degree() });
    }
    let n = chain.nvars();
    let mut out = KoszulChain::zero(1, n);
    for (key, c) in chain.iter() {
        let l = &key[1];
        for i in 0..n {
            for t in 1..=l[i] {
                let mut left = vec![0u32; n];
                let mut right = vec![0u32; n];
                left[i] = l[i] - t;
                right[i] = t - 1;
                for u in 0..n {
                    if u > i {
                        left[u] = l[u];
                    }
                    if u < i {
                        right[u] = l[u];
                    }
                }
                out.add_term(
                    (exp_add(&key[0], &left), exp_add(&right, &key[2]), vec![i]),
                    c.clone(),
                );
            }
        }
    }
    Ok(out)
}

/// Degree-2 closed form, again transcribed directly: for each pair i < j the
/// first slot surrenders a letter of v_i and the second a letter of v_j.
pub fn psi_closed_form_2(chain: &BarChain) -> Result<KoszulChain> {
    if chain.degree() != 2 {
        return Err(Error::DegreeOutOfRange { expected: "exactly 2", got: chain.degree() });
    }
    let n = chain.nvars();
    let mut out = KoszulChain::zero(2, n);
    for (key, c) in chain.iter() {
        let l = &key[1];
        let m = &key[2];
        for i in 0..n {
            for j in (i + 1)..n {
                for r in 1..=m[j] {
                    for t in 1..=l[i] {
                        let mut left = vec![0u32; n];
                        let mut right = vec![0u32; n];
                        left[i] = l[i] - t;
                        left[j] = l[j] + m[j] - r;
                        right[i] = m[i] + t - 1;
                        right[j] = r - 1;
                        for u in 0..n {
                            if u > i && u < j {
                                left[u] = l[u];
                                right[u] = m[u];
                            }
                            if u > j {
                                left[u] = l[u] + m[u];
                            }
                            if u < i {
                                right[u] = l[u] + m[u];
                            }
                        }
                        out.add_term(
                            (exp_add(&key[0], &left), exp_add(&right, &key[3]), vec![i, j]),
                            c.clone(),
                        );
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Polynomial;
    use crate::resolution::{bar_differential, koszul_differential, phi};
    use crate::scalar::CycScalar;
    use crate::textio::{parse_bar_chain, parse_koszul_chain, parse_polynomial};
    use proptest::prelude::*;

    fn bar(input: &str, n: usize) -> BarChain {
        parse_bar_chain(input, n, 2).unwrap()
    }

    fn kos(input: &str, n: usize) -> KoszulChain {
        parse_koszul_chain(input, n, 2).unwrap()
    }

    #[test]
    fn split_exponents_worked_example() {
        let mid = vec![vec![1, 1], vec![0, 3]];
        let q = q_exponent(&mid, &[0, 1], &[0, 0]).unwrap();
        let qh = qhat_exponent(&mid, &[0, 1], &[0, 0]).unwrap();
        assert_eq!(q, vec![0, 1]);
        assert_eq!(qh, vec![0, 2]);
    }

    #[test]
    fn split_exponents_single_slot() {
        let mid = vec![vec![3]];
        let q = q_exponent(&mid, &[0], &[1]).unwrap();
        let qh = qhat_exponent(&mid, &[0], &[1]).unwrap();
        assert_eq!(q, vec![1]);
        assert_eq!(qh, vec![1]);
    }

    #[test]
    fn split_exponents_reject_bad_data() {
        let mid = vec![vec![1, 1], vec![0, 3]];
        assert!(q_exponent(&mid, &[1, 0], &[0, 0]).is_err());
        assert!(q_exponent(&mid, &[0, 1], &[1, 0]).is_err());
        assert!(q_exponent(&mid, &[0, 5], &[0, 0]).is_err());
        assert!(q_exponent(&mid, &[0], &[0]).is_err());
    }

    #[test]
    fn degree_zero_is_identity() {
        let c = bar("v1*v2|v2^3", 2);
        let k = psi(&c).unwrap();
        assert_eq!(k, kos("v1*v2|v2^3|1", 2));
    }

    #[test]
    fn degree_two_golden_values() {
        let k = psi(&bar("1|v1|v2|1", 2)).unwrap();
        assert_eq!(k, kos("1|1|v1^v2", 2));

        let k = psi(&bar("1|v1*v2|v2^3|1", 2)).unwrap();
        let mut expect = KoszulChain::zero(2, 2);
        for (l, r) in [("v2^3", "1"), ("v2^2", "v2"), ("v2", "v2^2")] {
            let lp = parse_polynomial(l, 2, 2).unwrap();
            let rp = parse_polynomial(r, 2, 2).unwrap();
            expect = &expect + &KoszulChain::from_parts(&lp, &rp, &[0, 1]).unwrap();
        }
        assert_eq!(k, expect);

        let k = psi(&bar("1|v1*v2|v2^2*v3|1", 3)).unwrap();
        let expect = &(&kos("v2^2*v3|1|v1^v2", 3) + &kos("v2*v3|v2|v1^v2", 3))
            + &(&kos("1|v1*v2^2|v2^v3", 3) + &kos("v2|v2^2|v1^v3", 3));
        assert_eq!(k, expect);
    }

    #[test]
    fn degree_one_golden_values() {
        let k = psi(&bar("1|v1^2|1", 1)).unwrap();
        assert_eq!(k, &kos("v1|1|v1", 1) + &kos("1|v1|v1", 1));

        let k = psi(&bar("1|v1*v2|1", 2)).unwrap();
        assert_eq!(k, &kos("v2|1|v1", 2) + &kos("1|v1|v2", 2));
    }

    fn lmap(rows: &[&[i64]]) -> LinearMap {
        LinearMap::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&e| CycScalar::from_integer(e)).collect())
                .collect(),
        )
    }

    #[test]
    fn context_rewrites_through_a_basis() {
        // apply = act(B) . psi . act(B^-1), and the standard context is psi.
        let basis = lmap(&[&[1, 0], &[1, 1]]);
        let ctx = PsiContext::new(basis.clone(), 8).unwrap();
        let chain = bar("v2|v1*v2|v1|1", 2);
        let expect = psi(&chain.act_linear(&basis.inverse().unwrap()).unwrap())
            .unwrap()
            .act_linear(&basis)
            .unwrap();
        assert_eq!(ctx.apply(&chain).unwrap(), expect);
        assert_eq!(PsiContext::standard(2, 8).apply(&chain).unwrap(), psi(&chain).unwrap());
    }

    #[test]
    fn context_enforces_the_degree_cap() {
        let ctx = PsiContext::standard(1, 3);
        let err = ctx.apply(&bar("1|v1^2|v1^2|1", 1)).unwrap_err();
        assert_eq!(err, Error::DegreeCapExceeded { degree: 4, cap: 3 });
    }

    #[test]
    fn context_rejects_singular_bases() {
        assert!(PsiContext::new(lmap(&[&[1, 1], &[1, 1]]), 8).is_err());
    }

    #[test]
    fn converter_is_basis_covariant() {
        // The converter computed in the moved basis aB, applied to the moved
        // chain a.x, is the move of the basis-B value: Psi_{aB}(a.x) = a.Psi_B(x).
        let b = lmap(&[&[1, 1, 0], &[0, 1, 0], &[2, 0, 1]]);
        let a = lmap(&[&[0, 1, 0], &[1, 0, 1], &[0, 0, 1]]);
        let ab = a.mul(&b);
        for input in ["1|v1*v3|v2^2|1", "v3|v1|v2*v3|v1"] {
            let chain = bar(input, 3);
            let lhs = PsiContext::new(ab.clone(), 16)
                .unwrap()
                .apply(&chain.act_linear(&a).unwrap())
                .unwrap();
            let rhs = PsiContext::new(b.clone(), 16)
                .unwrap()
                .apply(&chain)
                .unwrap()
                .act_linear(&a)
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn outer_slots_multiply_through() {
        let inner = psi(&bar("1|v1*v2|v2|1", 2)).unwrap();
        let outer = psi(&bar("v2|v1*v2|v2|v1^2", 2)).unwrap();
        let left = parse_polynomial("v2", 2, 2).unwrap();
        let right = parse_polynomial("v1^2", 2, 2).unwrap();
        let mut expect = KoszulChain::zero(2, 2);
        for ((l, r, w), c) in inner.iter() {
            let lp = &Polynomial::monomial(2, l.clone(), c.clone()) * &left;
            let rp = &Polynomial::monomial(2, r.clone(), CycScalar::one()) * &right;
            expect = &expect + &KoszulChain::from_parts(&lp, &rp, w).unwrap();
        }
        assert_eq!(outer, expect);
    }

    #[test]
    fn closed_forms_match_converter() {
        let samples1 = ["1|v1^3*v2|1", "v1|v2^2|v3", "v3^2|v1*v2*v3^2|v2"];
        for s in samples1 {
            let c = bar(s, 3);
            assert_eq!(psi(&c).unwrap(), psi_closed_form_1(&c).unwrap(), "{s}");
        }
        let samples2 = ["1|v1*v2|v2^3|1", "1|v1*v2|v2^2*v3|1", "v2|v1^2*v3|v1*v2^2|v1"];
        for s in samples2 {
            let c = bar(s, 3);
            assert_eq!(psi(&c).unwrap(), psi_closed_form_2(&c).unwrap(), "{s}");
        }
    }

    #[test]
    fn closed_forms_check_degree() {
        assert!(psi_closed_form_1(&bar("1|v1|v2|1", 2)).is_err());
        assert!(psi_closed_form_2(&bar("1|v1|1", 2)).is_err());
    }

    #[test]
    fn retracts_the_inclusion() {
        for n in 1..=3usize {
            for p in 0..=n {
                for wedge in combinations(n, p) {
                    let x = phi(&KoszulChain::generator(n, &wedge));
                    assert_eq!(
                        psi(&x).unwrap(),
                        KoszulChain::generator(n, &wedge),
                        "n={n} wedge={wedge:?}"
                    );
                }
            }
        }
    }

    fn arb_monomial(n: usize, dmax: u32) -> impl Strategy<Value = Exponents> {
        prop::collection::vec(0..=dmax, n)
    }

    fn arb_bar(n: usize, p: usize, dmax: u32) -> impl Strategy<Value = BarChain> {
        prop::collection::vec((prop::collection::vec(arb_monomial(n, dmax), p + 2), -3i64..=3), 1..4)
            .prop_map(move |terms| {
                let mut c = BarChain::zero(p, n);
                for (key, a) in terms {
                    c.add_term(key, CycScalar::from_integer(a));
                }
                c
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn commutes_with_differentials(c in arb_bar(3, 2, 2)) {
            let lhs = psi(&bar_differential(&c).unwrap()).unwrap();
            let rhs = koszul_differential(&psi(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn commutes_with_differentials_deep(c in arb_bar(2, 3, 2)) {
            let lhs = psi(&bar_differential(&c).unwrap()).unwrap();
            let rhs = koszul_differential(&psi(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn splits_the_inclusion_on_chains(
            l in arb_monomial(3, 2),
            r in arb_monomial(3, 2),
            wi in 0..4usize,
        ) {
            let wedges = combinations(3, 2);
            let wedge = wedges[wi % wedges.len()].clone();
            let lp = Polynomial::monomial(3, l, CycScalar::one());
            let rp = Polynomial::monomial(3, r, CycScalar::one());
            let x = KoszulChain::from_parts(&lp, &rp, &wedge).unwrap();
            prop_assert_eq!(psi(&phi(&x)).unwrap(), x);
        }

        #[test]
        fn closed_form_1_agrees(c in arb_bar(3, 1, 3)) {
            prop_assert_eq!(psi(&c).unwrap(), psi_closed_form_1(&c).unwrap());
        }

        #[test]
        fn closed_form_2_agrees(c in arb_bar(3, 2, 2)) {
            prop_assert_eq!(psi(&c).unwrap(), psi_closed_form_2(&c).unwrap());
        }
    }
}
