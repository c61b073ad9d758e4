//! Deterministic verification suites behind `verify`.
//!
//! Each suite sweeps one family of exact identities over an exhaustive basis
//! range plus a seeded random range and reports case counts together with the
//! first counterexample, if any.  Reports carry no timing or other machine
//! state, so equal configurations reproduce byte-identical output.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::chainmap::psi;
use crate::cochain::{
    demazure_partial, eps_power, group_act_on_form, is_component_coboundary,
    koszul_cochain_differential, phi_star, quantum_partial, transport_component_term,
    upsilon_cochain, upsilon_cochain_in, upsilon_evaluate, upsilon_term_apply, TaggedForm,
};
use crate::group::{builtin_group, EigenData, GroupData};
use crate::homology::{functor_psi_image, psi_star_twisted, psi_star_untwisted, HomologyChain};
use crate::poly::{combinations, exp_add, monomials_of_degree, Exponents, LinearMap, Polynomial};
use crate::resolution::{bar_differential, koszul_differential, phi, BarChain, KoszulChain};
use crate::scalar::CycScalar;
use crate::session::SessionConfig;
use crate::{Error, Result};

/// The suites, in report order.
pub const SUITE_NAMES: [&str; 6] = [
    "chainmap",
    "psi-phi",
    "phi-upsilon",
    "upsilon-psi-star",
    "change-of-basis",
    "homology-oracle",
];

/// Outcome of one suite: how many cases ran, how many failed, and the first
/// counterexample rendered as text.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
}

struct Recorder {
    cases: u64,
    failures: u64,
    first: Option<String>,
}

impl Recorder {
    fn new() -> Recorder {
        Recorder { cases: 0, failures: 0, first: None }
    }

    fn check(&mut self, ok: bool, label: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(label());
            }
        }
    }

    fn finish(self, name: &'static str) -> SuiteReport {
        SuiteReport { name, cases: self.cases, failures: self.failures, first_failure: self.first }
    }
}

/// Runs one named suite, or all of them in order.
pub fn run(group: &GroupData, config: &SessionConfig, which: &str) -> Result<Vec<SuiteReport>> {
    let names: Vec<&'static str> = match which {
        "all" => SUITE_NAMES.to_vec(),
        other => match SUITE_NAMES.iter().find(|n| **n == other) {
            Some(n) => vec![n],
            None => {
                return Err(Error::UnknownName(format!(
                    "suite '{other}', expected one of {} or all",
                    SUITE_NAMES.join("|")
                )))
            }
        },
    };
    names.into_iter().map(|name| run_one(group, config, name)).collect()
}

fn run_one(group: &GroupData, config: &SessionConfig, name: &'static str) -> Result<SuiteReport> {
    match name {
        "chainmap" => suite_chainmap(group, config),
        "psi-phi" => suite_psi_phi(group, config),
        "phi-upsilon" => suite_phi_upsilon(group, config),
        "upsilon-psi-star" => suite_upsilon_psi_star(group, config),
        "change-of-basis" => suite_change_of_basis(group, config),
        "homology-oracle" => suite_homology_oracle(group, config),
        _ => unreachable!("suite names are filtered by run"),
    }
}

fn fnv1a(s: &str) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for b in s.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Every suite draws from its own stream, so enabling or reordering suites
/// never changes the cases any one of them sees.
fn suite_rng(seed: u64, name: &str) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed ^ fnv1a(name))
}

fn clip(s: String) -> String {
    if s.len() > 160 {
        format!("{}...", &s[..160])
    } else {
        s
    }
}

fn random_coeff(rng: &mut ChaCha20Rng) -> CycScalar {
    let k = rng.random_range(1..=3i64);
    CycScalar::from_integer(if rng.random_bool(0.5) { -k } else { k })
}

fn random_exponents(rng: &mut ChaCha20Rng, n: usize, total: u32) -> Exponents {
    let mut e = vec![0u32; n];
    for _ in 0..total {
        e[rng.random_range(0..n)] += 1;
    }
    e
}

fn random_poly(rng: &mut ChaCha20Rng, n: usize, max_degree: u32, max_terms: usize) -> Polynomial {
    let mut f = Polynomial::zero(n);
    for _ in 0..rng.random_range(1..=max_terms) {
        let d = rng.random_range(0..=max_degree);
        f = &f + &Polynomial::monomial(n, random_exponents(rng, n, d), random_coeff(rng));
    }
    f
}

fn random_form(
    rng: &mut ChaCha20Rng,
    group: &GroupData,
    p: usize,
    mu_cap: u32,
    max_terms: usize,
) -> TaggedForm {
    let n = group.dim;
    let wedges = combinations(n, p);
    let mut form = TaggedForm::zero(p, n, group.hash);
    for _ in 0..rng.random_range(1..=max_terms) {
        let g = rng.random_range(0..group.order());
        let w = wedges[rng.random_range(0..wedges.len())].clone();
        let d = rng.random_range(0..=mu_cap);
        form.add_term(g, random_exponents(rng, n, d), w, random_coeff(rng));
    }
    form
}

/// Like `random_form`, but every term carries the same tag.
fn random_form_at(
    rng: &mut ChaCha20Rng,
    group: &GroupData,
    g: usize,
    p: usize,
    mu_cap: u32,
    max_terms: usize,
) -> TaggedForm {
    let n = group.dim;
    let wedges = combinations(n, p);
    let mut form = TaggedForm::zero(p, n, group.hash);
    for _ in 0..rng.random_range(1..=max_terms) {
        let w = wedges[rng.random_range(0..wedges.len())].clone();
        let d = rng.random_range(0..=mu_cap);
        form.add_term(g, random_exponents(rng, n, d), w, random_coeff(rng));
    }
    form
}

fn random_invertible(rng: &mut ChaCha20Rng, n: usize) -> LinearMap {
    loop {
        let rows: Vec<Vec<CycScalar>> = (0..n)
            .map(|_| (0..n).map(|_| CycScalar::from_integer(rng.random_range(-2..=2))).collect())
            .collect();
        let m = LinearMap::from_rows(rows);
        if !m.det().is_zero() {
            return m;
        }
    }
}

/// A random invertible matrix supported on the equal-eigenvalue blocks of an
/// eps pattern: right-multiplying an eigenbasis by it yields another
/// eigenbasis of the same element with the same eigenvalue order.
fn random_block_mix(rng: &mut ChaCha20Rng, eps: &[CycScalar]) -> LinearMap {
    let n = eps.len();
    loop {
        let rows: Vec<Vec<CycScalar>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if eps[i] == eps[j] {
                            CycScalar::from_integer(rng.random_range(-2..=2))
                        } else {
                            CycScalar::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        let m = LinearMap::from_rows(rows);
        if !m.det().is_zero() {
            return m;
        }
    }
}

fn check_chain_map(rec: &mut Recorder, chain: &BarChain) -> Result<()> {
    let lhs = psi(&bar_differential(chain)?)?;
    let rhs = koszul_differential(&psi(chain)?)?;
    rec.check(lhs == rhs, || clip(format!("delta then split differs from split then d on {chain}")));
    Ok(())
}

/// The retraction is a chain map: exhaustively over every monomial basis
/// chain at small total degree, then on seeded random multi-term chains at
/// the configured caps.
fn suite_chainmap(group: &GroupData, config: &SessionConfig) -> Result<SuiteReport> {
    let n = group.dim;
    let mut rec = Recorder::new();
    let p_hi = config.max_p.min(3);
    let d_hi = config.max_degree.min(4);
    for p in 1..=p_hi {
        let slots = p + 2;
        for s in 0..=d_hi {
            for big in monomials_of_degree(n * slots, s) {
                let mut chain = BarChain::zero(p, n);
                let key: Vec<Exponents> =
                    (0..slots).map(|k| big[k * n..(k + 1) * n].to_vec()).collect();
                chain.add_term(key, CycScalar::one());
                check_chain_map(&mut rec, &chain)?;
            }
        }
    }
    let mut rng = suite_rng(config.seed, "chainmap");
    let p = config.max_p.min(4);
    let cap = config.max_degree.min(6);
    for _ in 0..500 {
        let mut slots = Vec::with_capacity(p + 2);
        let total = rng.random_range(0..=cap);
        for budget in random_exponents(&mut rng, p + 2, total) {
            slots.push(random_poly(&mut rng, n, budget, 2));
        }
        check_chain_map(&mut rec, &BarChain::from_slots(&slots)?)?;
    }
    Ok(rec.finish("chainmap"))
}

/// The retraction splits the inclusion: composing the two is the identity on
/// every Koszul chain, first over the wedge basis, then with seeded random
/// outer polynomials riding along by bimodule linearity.
fn suite_psi_phi(group: &GroupData, config: &SessionConfig) -> Result<SuiteReport> {
    let n = group.dim;
    let mut rec = Recorder::new();
    let p_hi = config.max_p.min(4).min(n);
    let one = Polynomial::one(n);
    for p in 0..=p_hi {
        for w in combinations(n, p) {
            let k = KoszulChain::from_parts(&one, &one, &w)?;
            let back = psi(&phi(&k))?;
            rec.check(back == k, || format!("basis wedge {w:?} does not round trip"));
        }
    }
    let mut rng = suite_rng(config.seed, "psi-phi");
    let d_hi = config.max_degree.min(4);
    for _ in 0..200 {
        let p = rng.random_range(0..=p_hi);
        let wedges = combinations(n, p);
        let w = wedges[rng.random_range(0..wedges.len())].clone();
        let left = random_poly(&mut rng, n, d_hi, 2);
        let right = random_poly(&mut rng, n, d_hi, 2);
        let k = KoszulChain::from_parts(&left, &right, &w)?;
        let back = psi(&phi(&k))?;
        rec.check(back == k, || clip(format!("outer slots break the round trip on {k}")));
    }
    Ok(rec.finish("psi-phi"))
}

/// Pulling the converter image back along the inclusion returns the original
/// form: the converter is a section, exhaustively on every single-term basis
/// form at small coefficient degree, then on seeded random multi-term forms.
fn suite_phi_upsilon(group: &GroupData, config: &SessionConfig) -> Result<SuiteReport> {
    let n = group.dim;
    let mut rec = Recorder::new();
    let p_hi = config.max_p.min(3).min(n);
    let d_hi = config.max_degree.min(4);
    for p in 0..=p_hi {
        for g in 0..group.order() {
            for w in combinations(n, p) {
                for d in 0..=d_hi {
                    for mu in monomials_of_degree(n, d) {
                        let mut form = TaggedForm::zero(p, n, group.hash);
                        form.add_term(g, mu.clone(), w.clone(), CycScalar::one());
                        let back = phi_star(group, &upsilon_cochain(group, &form)?)?;
                        rec.check(back == form, || {
                            format!(
                                "basis form [{}] mu {mu:?} wedge {w:?} is not retracted",
                                group.names[g]
                            )
                        });
                    }
                }
            }
        }
    }
    let mut rng = suite_rng(config.seed, "phi-upsilon");
    for _ in 0..100 {
        let p = rng.random_range(0..=p_hi);
        let form = random_form(&mut rng, group, p, d_hi, 3);
        let back = phi_star(group, &upsilon_cochain(group, &form)?)?;
        rec.check(back == form, || {
            clip(format!("random form {} is not retracted", form.render(group)))
        });
    }
    Ok(rec.finish("phi-upsilon"))
}

/// The converter agrees with the retraction acting on cochains: evaluating a
/// g-component on bar arguments equals evaluating it on the split of those
/// arguments taken in the eigenbasis of g.  The split itself is basis-bound;
/// only its homotopy class is not, so splitting in the wrong basis fails on
/// any group with non-diagonal eigenbases.  Exhaustive over monomial tuples,
/// then seeded random forms with polynomial coefficients and arguments.
fn suite_upsilon_psi_star(group: &GroupData, config: &SessionConfig) -> Result<SuiteReport> {
    let n = group.dim;
    let mut rec = Recorder::new();
    let p_hi = config.max_p.min(3).min(n);
    let d_hi = config.max_degree.min(4);
    // Both sides are compared in the eigen coordinates of g, where the form
    // coefficients already live; converting back to standard coordinates is
    // injective and would only add dense substitutions.
    let split_local = |g: usize, args: &[Polynomial]| -> Result<KoszulChain> {
        let mut slots = Vec::with_capacity(args.len() + 2);
        slots.push(Polynomial::one(n));
        slots.extend(args.iter().cloned());
        slots.push(Polynomial::one(n));
        psi(&BarChain::from_slots(&slots)?.act_linear(&group.eigen[g].basis_inv)?)
    };
    let pair_local = |g: usize, form: &TaggedForm, local: &KoszulChain| -> Polynomial {
        let eigen = &group.eigen[g];
        let mut value = Polynomial::zero(n);
        for ((left, right, wedge), c) in local.iter() {
            let mu = form.component_poly(g, wedge);
            if mu.is_zero() {
                continue;
            }
            let twist = eps_power(&eigen.eps, right);
            let outer = Polynomial::monomial(n, exp_add(left, right), &twist * c);
            value = &value + &(&outer * &mu);
        }
        value
    };
    let converter_local = |g: usize, form: &TaggedForm, args: &[Polynomial]| -> Result<Polynomial> {
        let value = upsilon_evaluate(group, form, args)?.component(g);
        group.eigen[g].basis_inv.act_on_polynomial(&value)
    };
    for p in 1..=p_hi {
        for s in 0..=d_hi {
            for big in monomials_of_degree(n * p, s) {
                let args: Vec<Polynomial> = (0..p)
                    .map(|k| {
                        Polynomial::monomial(n, big[k * n..(k + 1) * n].to_vec(), CycScalar::one())
                    })
                    .collect();
                for g in 0..group.order() {
                    let local = split_local(g, &args)?;
                    for w in combinations(n, p) {
                        let mut form = TaggedForm::zero(p, n, group.hash);
                        form.add_term(g, vec![0; n], w.clone(), CycScalar::one());
                        let lhs = converter_local(g, &form, &args)?;
                        let rhs = pair_local(g, &form, &local);
                        rec.check(lhs == rhs, || {
                            clip(format!(
                                "component [{}] wedge {w:?} disagrees on arguments {args:?}",
                                group.names[g]
                            ))
                        });
                    }
                }
            }
        }
    }
    let mut rng = suite_rng(config.seed, "upsilon-psi-star");
    for _ in 0..100 {
        let p = rng.random_range(1..=p_hi);
        let g = rng.random_range(0..group.order());
        let form = random_form_at(&mut rng, group, g, p, d_hi, 2);
        let args: Vec<Polynomial> =
            (0..p).map(|_| random_poly(&mut rng, n, config.max_degree.min(3), 2)).collect();
        let lhs = converter_local(g, &form, &args)?;
        let rhs = pair_local(g, &form, &split_local(g, &args)?);
        rec.check(lhs == rhs, || {
            clip(format!("random form {} disagrees with its split image", form.render(group)))
        });
    }
    Ok(rec.finish("upsilon-psi-star"))
}

/// Everything that moves a basis: the two definitions of the quantum partial
/// agree, partials and the full converter transport along every group
/// element, different eigenbases change converter images by exact
/// coboundaries only, the inclusion commutes with arbitrary invertible
/// substitutions, and centralizers preserve components.
fn suite_change_of_basis(group: &GroupData, config: &SessionConfig) -> Result<SuiteReport> {
    let n = group.dim;
    let mut rec = Recorder::new();
    let mut rng = suite_rng(config.seed, "change-of-basis");
    let d_hi = config.max_degree.min(4);

    // Quotient form versus bracket form of the quantum partial.
    let mut eps_pool: Vec<CycScalar> = Vec::new();
    for e in &group.eigen {
        for eps in &e.eps {
            if !eps.is_one() && !eps_pool.contains(eps) {
                eps_pool.push(eps.clone());
            }
        }
    }
    let quotient_cases = if eps_pool.is_empty() { 0 } else { 120 };
    for _ in 0..quotient_cases {
        let eps = eps_pool[rng.random_range(0..eps_pool.len())].clone();
        let f = random_poly(&mut rng, n, d_hi, 3);
        let j = rng.random_range(0..n);
        let quotient = demazure_partial(&f, j, &eps)?;
        let bracket = quantum_partial(&f, j, &eps);
        rec.check(quotient == bracket, || {
            clip(format!("quantum partial definitions disagree on {f} at variable {j}"))
        });
    }

    // Conjugating a decorated partial equals taking it in the moved basis.
    for a in 0..group.order() {
        for _ in 0..100 {
            let g = rng.random_range(0..group.order());
            let gp = group.mult[group.mult[a][g]][group.inv[a]];
            let transported = group.eigen[g].transported(&group.elements[a], gp)?;
            let f = random_poly(&mut rng, n, d_hi, 2);
            let j = rng.random_range(0..n);
            let mu = vec![0u32; n];
            let pre = group.elements[group.inv[a]].act_on_polynomial(&f)?;
            let moved = upsilon_term_apply(&group.eigen[g], &mu, &[j], &[pre])?;
            let lhs = group.elements[a].act_on_polynomial(&moved)?;
            let rhs = upsilon_term_apply(&transported, &mu, &[j], std::slice::from_ref(&f))?;
            rec.check(lhs == rhs, || {
                format!("partial at variable {j} does not transport along {}", group.names[a])
            });
        }
    }

    // The same law for whole converter terms, at the skew algebra level.
    for a in 0..group.order() {
        for _ in 0..10 {
            let g = rng.random_range(0..group.order());
            let gp = group.mult[group.mult[a][g]][group.inv[a]];
            let p = rng.random_range(0..=config.max_p.min(n));
            let wedges = combinations(n, p);
            let w = wedges[rng.random_range(0..wedges.len())].clone();
            let deg = rng.random_range(0..=2);
            let mu = random_exponents(&mut rng, n, deg);
            let mut form = TaggedForm::zero(p, n, group.hash);
            form.add_term(g, mu.clone(), w.clone(), CycScalar::one());
            let args: Vec<Polynomial> = (0..p).map(|_| random_poly(&mut rng, n, 2, 2)).collect();
            let pre: Vec<Polynomial> = args
                .iter()
                .map(|x| group.elements[group.inv[a]].act_on_polynomial(x))
                .collect::<Result<_>>()?;
            let lhs = upsilon_evaluate(group, &form, &pre)?.conjugate(a, group)?;
            let transported = group.eigen[g].transported(&group.elements[a], gp)?;
            let rhs = upsilon_cochain_in(group, gp, &transported, &[(mu, w, CycScalar::one())], p)?
                .evaluate(&args)?;
            rec.check(lhs == rhs, || {
                format!(
                    "converter term at [{}] does not transport along {}",
                    group.names[g], group.names[a]
                )
            });
        }
    }

    // Changing the eigenbasis within eigenvalue blocks moves the converter
    // image of a closed form by an exact coboundary; blocks with no incoming
    // differential must agree on the nose.
    for &g in &group.class_reps {
        let eigen = &group.eigen[g];
        let mut closed: Vec<(Exponents, Vec<usize>, u32)> = Vec::new();
        for p in 1..=config.max_p.min(n) {
            for w in combinations(n, p) {
                for dd in 0..=2u32 {
                    for mu in monomials_of_degree(n, dd) {
                        let mut alpha = TaggedForm::zero(p, n, group.hash);
                        alpha.add_term(g, mu.clone(), w.clone(), CycScalar::one());
                        if koszul_cochain_differential(group, &alpha)?.is_zero() {
                            closed.push((mu, w.clone(), dd));
                        }
                    }
                }
            }
        }
        for _ in 0..3 {
            if closed.is_empty() {
                break;
            }
            let (mu, w, dd) = closed[rng.random_range(0..closed.len())].clone();
            let p = w.len();
            let basis = eigen.basis.mul(&random_block_mix(&mut rng, &eigen.eps));
            let alt = EigenData {
                element: g,
                basis: basis.clone(),
                basis_inv: basis.inverse()?,
                exponents: eigen.exponents.clone(),
                eps: eigen.eps.clone(),
            };
            let mut alpha = TaggedForm::zero(p, n, group.hash);
            alpha.add_term(g, mu.clone(), w.clone(), CycScalar::one());
            let canonical = phi_star(group, &upsilon_cochain(group, &alpha)?)?;
            let moved = transport_component_term(eigen, &alt, &mu, &w)?;
            let alternative = phi_star(group, &upsilon_cochain_in(group, g, &alt, &moved, p)?)?;
            let diff = canonical.sub(&alternative)?;
            rec.check(is_component_coboundary(group, g, &diff, dd, p)?, || {
                format!(
                    "basis change at [{}] moved mu {mu:?} wedge {w:?} by a non-coboundary",
                    group.names[g]
                )
            });
            if dd == 0 {
                rec.check(diff.is_zero(), || {
                    format!("degree zero block at [{}] moved under a basis change", group.names[g])
                });
            }
        }
    }

    // The inclusion commutes with every invertible substitution.
    for _ in 0..20 {
        let h = random_invertible(&mut rng, n);
        for _ in 0..3 {
            let p = rng.random_range(0..=n);
            let wedges = combinations(n, p);
            let w = wedges[rng.random_range(0..wedges.len())].clone();
            let k = KoszulChain::from_parts(
                &random_poly(&mut rng, n, 2, 2),
                &random_poly(&mut rng, n, 2, 2),
                &w,
            )?;
            let lhs = phi(&k.act_linear(&h)?);
            let rhs = phi(&k).act_linear(&h)?;
            rec.check(lhs == rhs, || clip(format!("the inclusion is not equivariant on {k}")));
        }
    }

    // Centralizer elements act within each component.
    for g in 0..group.order() {
        for &h in &group.centralizers[g] {
            let p = rng.random_range(0..=config.max_p.min(n));
            let wedges = combinations(n, p);
            let w = wedges[rng.random_range(0..wedges.len())].clone();
            let deg = rng.random_range(0..=2);
            let mut form = TaggedForm::zero(p, n, group.hash);
            form.add_term(g, random_exponents(&mut rng, n, deg), w, random_coeff(&mut rng));
            let acted = group_act_on_form(group, h, &form)?;
            let stable = acted.iter().all(|((tag, _, _), _)| *tag == g);
            rec.check(stable, || {
                format!("centralizer element {} moves component [{}]", group.names[h], group.names[g])
            });
        }
    }

    Ok(rec.finish("change-of-basis"))
}

/// The induced map on homology agrees with the image built through the
/// functor on seeded random chains, reduces to the untwisted map on identity
/// tags, and reproduces a pinned twist fingerprint.
fn suite_homology_oracle(group: &GroupData, config: &SessionConfig) -> Result<SuiteReport> {
    let n = group.dim;
    let mut rec = Recorder::new();
    let mut rng = suite_rng(config.seed, "homology-oracle");
    let p_hi = config.max_p.min(3);
    let d_slot = config.max_degree.min(3);
    let random_chain = |rng: &mut ChaCha20Rng, g: usize| -> Result<HomologyChain> {
        let p = rng.random_range(1..=p_hi);
        let mut slots = Vec::with_capacity(p + 1);
        slots.push(random_poly(rng, n, 2, 2));
        for _ in 0..p {
            slots.push(random_poly(rng, n, d_slot, 2));
        }
        HomologyChain::from_slots(group, g, &slots)
    };
    for _ in 0..500 {
        let g = rng.random_range(0..group.order());
        let chain = random_chain(&mut rng, g)?;
        let lhs = psi_star_twisted(group, &chain)?;
        let rhs = functor_psi_image(group, &chain)?;
        rec.check(lhs == rhs, || {
            clip(format!("induced map and functor image disagree on {}", chain.render(group)))
        });
    }
    for _ in 0..100 {
        let chain = random_chain(&mut rng, 0)?;
        let lhs = psi_star_untwisted(group, &chain)?;
        let rhs = psi_star_twisted(group, &chain)?;
        rec.check(lhs == rhs, || {
            clip(format!("identity tags disagree with the untwisted map on {}", chain.render(group)))
        });
    }
    // Pinned fingerprint: a reflection tag splits v1*v2 into two choices and
    // only the letter behind the first reflection picks up a sign.
    let k = builtin_group("klein4-3d")?;
    let h = k.element_by_name("h").expect("builtin name");
    let mut chain = HomologyChain::zero(1, 3, k.hash);
    chain.add_term(h, vec![0; 3], vec![vec![1, 1, 0]], CycScalar::one());
    let image = psi_star_twisted(&k, &chain)?;
    let pinned = image.coefficient(h, &[0, 1, 0], &[0]) == CycScalar::one()
        && image.coefficient(h, &[1, 0, 0], &[1]) == CycScalar::from_integer(-1)
        && image.num_terms() == 2;
    rec.check(pinned, || "the pinned twist fingerprint changed".to_string());
    Ok(rec.finish("homology-oracle"))
}
