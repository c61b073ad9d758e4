//! Cochain-level machinery: tagged exterior forms, quantum partial
//! derivatives, the converter from forms to bar cochains, the Koszul cochain
//! differential, the group action with its averaging projector, and exact
//! dimension counts for invariant cohomology.
//!
//! A tagged form stores, for every group component g, coordinates relative to
//! the canonical eigenbasis attached to g.  Evaluation against bar or Koszul
//! data converts through that basis, so callers always pass and receive
//! standard coordinates.

use std::collections::BTreeMap;
use std::rc::Rc;

use crate::group::{EigenData, GroupData};
use crate::poly::{
    binomial, combinations, exp_add, exp_unit, monomials_of_degree, Exponents, Polynomial,
    SkewElement,
};
use crate::resolution::{permutations_signed, KoszulChain};
use crate::scalar::{quantum_integer, CycScalar};
use crate::textio::render_dual_wedge;
use crate::{Error, Result};

/// A sum of decomposable cochains f.[g] x dual wedge, one coordinate system
/// per component as described in the module docs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaggedForm {
    degree: usize,
    nvars: usize,
    group_id: u64,
    terms: BTreeMap<(usize, Exponents, Vec<usize>), CycScalar>,
}

impl TaggedForm {
    pub fn zero(degree: usize, nvars: usize, group_id: u64) -> Self {
        TaggedForm { degree, nvars, group_id, terms: BTreeMap::new() }
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

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, Exponents, Vec<usize>), &CycScalar)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, g: usize, exps: Exponents, wedge: Vec<usize>, c: CycScalar) {
        assert_eq!(wedge.len(), self.degree);
        assert_eq!(exps.len(), self.nvars);
        debug_assert!(wedge.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(wedge.iter().all(|&w| w < self.nvars));
        if c.is_zero() {
            return;
        }
        match self.terms.entry((g, exps, wedge)) {
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

    pub fn add_poly_term(&mut self, g: usize, f: &Polynomial, wedge: &[usize]) {
        for (e, c) in f.iter() {
            self.add_term(g, e.clone(), wedge.to_vec(), c.clone());
        }
    }

    pub fn coefficient(&self, g: usize, exps: &[u32], wedge: &[usize]) -> CycScalar {
        self.terms
            .get(&(g, exps.to_vec(), wedge.to_vec()))
            .cloned()
            .unwrap_or_else(CycScalar::zero)
    }

    /// The polynomial sitting in one (component, wedge) slot.
    pub fn component_poly(&self, g: usize, wedge: &[usize]) -> Polynomial {
        let mut f = Polynomial::zero(self.nvars);
        for ((h, e, w), c) in &self.terms {
            if *h == g && w == wedge {
                f.add_term(e.clone(), c.clone());
            }
        }
        f
    }

    pub fn scale(&self, c: &CycScalar) -> TaggedForm {
        let mut out = TaggedForm::zero(self.degree, self.nvars, self.group_id);
        if c.is_zero() {
            return out;
        }
        for ((g, e, w), a) in &self.terms {
            out.add_term(*g, e.clone(), w.clone(), a * c);
        }
        out
    }

    pub fn add(&self, rhs: &TaggedForm) -> Result<TaggedForm> {
        if self.group_id != rhs.group_id {
            return Err(Error::GroupMismatch);
        }
        if self.degree != rhs.degree || self.nvars != rhs.nvars {
            return Err(Error::DimensionMismatch { expected: self.degree, got: rhs.degree });
        }
        let mut out = self.clone();
        for ((g, e, w), c) in &rhs.terms {
            out.add_term(*g, e.clone(), w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &TaggedForm) -> Result<TaggedForm> {
        self.add(&rhs.scale(&CycScalar::from_integer(-1)))
    }

    /// Text format accepted back by the form parser.
    pub fn render(&self, group: &GroupData) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut grouped: BTreeMap<(usize, Vec<usize>), Polynomial> = BTreeMap::new();
        for ((g, e, w), c) in &self.terms {
            grouped
                .entry((*g, w.clone()))
                .or_insert_with(|| Polynomial::zero(self.nvars))
                .add_term(e.clone(), c.clone());
        }
        let parts: Vec<String> = grouped
            .iter()
            .map(|((g, w), f)| format!("[{}]({}){}", group.names[*g], f, render_dual_wedge(w)))
            .collect();
        parts.join(" + ")
    }
}

/// Quantum partial derivative: each monomial loses one letter of the chosen
/// variable and gains the quantum bracket of its old exponent.  At eps = 1
/// this is the ordinary partial derivative.
pub fn quantum_partial(f: &Polynomial, var: usize, eps: &CycScalar) -> Polynomial {
    let n = f.nvars();
    let mut out = Polynomial::zero(n);
    for (e, c) in f.iter() {
        if e[var] == 0 {
            continue;
        }
        let mut e2 = e.clone();
        e2[var] -= 1;
        out.add_term(e2, c * &quantum_integer(e[var], eps));
    }
    out
}

/// The quotient form of the quantum partial: (f - s.f) / ((1 - eps) v) where
/// s scales the chosen variable by eps.  Every term of the numerator is
/// exactly divisible, so this is an independent route to the same operator;
/// it is undefined at eps = 1, where s degenerates to the identity.
pub fn demazure_partial(f: &Polynomial, var: usize, eps: &CycScalar) -> Result<Polynomial> {
    let denom = &CycScalar::one() - eps;
    let Some(denom_inv) = denom.inv() else {
        return Err(Error::invalid("quotient form requires eps != 1"));
    };
    let mut out = Polynomial::zero(f.nvars());
    for (e, c) in f.iter() {
        let a = e[var];
        if a == 0 {
            continue;
        }
        let numer = &CycScalar::one() - &eps.pow(i64::from(a));
        let mut e2 = e.clone();
        e2[var] -= 1;
        out.add_term(e2, &(&numer * &denom_inv) * c);
    }
    Ok(out)
}

/// Scales each monomial by the eigenvalues of the variables below `limit`,
/// one factor per letter: the action of the partial reflection product.
pub fn twist_prefix(f: &Polynomial, eps: &[CycScalar], limit: usize) -> Polynomial {
    let mut out = Polynomial::zero(f.nvars());
    for (e, c) in f.iter() {
        let mut s = c.clone();
        for (i, item) in eps.iter().enumerate().take(limit) {
            s = &s * &item.pow(i64::from(e[i]));
        }
        out.add_term(e.clone(), s);
    }
    out
}

/// Product of eigenvalue powers matching one monomial: the scalar by which
/// the group element scales that monomial in its eigenbasis.
pub fn eps_power(eps: &[CycScalar], exps: &[u32]) -> CycScalar {
    let mut s = CycScalar::one();
    for (i, e) in exps.iter().enumerate() {
        if *e > 0 {
            s = &s * &eps[i].pow(i64::from(*e));
        }
    }
    s
}

/// One decomposable term of the converter, evaluated on bar arguments given
/// in standard coordinates; the result is again standard.
pub fn upsilon_term_apply(
    eigen: &EigenData,
    mu: &Exponents,
    wedge: &[usize],
    args: &[Polynomial],
) -> Result<Polynomial> {
    let n = mu.len();
    if args.len() != wedge.len() {
        return Err(Error::invalid("argument count must match the form degree"));
    }
    let mut acc = Polynomial::monomial(n, mu.clone(), CycScalar::one());
    for (k, &j) in wedge.iter().enumerate() {
        let fk = eigen.basis_inv.act_on_polynomial(&args[k])?;
        let dk = quantum_partial(&fk, j, &eigen.eps[j]);
        if dk.is_zero() {
            return Ok(Polynomial::zero(n));
        }
        acc = &acc * &twist_prefix(&dk, &eigen.eps, j);
    }
    eigen.basis.act_on_polynomial(&acc)
}

/// Evaluates the converter image of a form on a tuple of bar arguments.
pub fn upsilon_evaluate(
    group: &GroupData,
    form: &TaggedForm,
    args: &[Polynomial],
) -> Result<SkewElement> {
    if form.group_id() != group.hash {
        return Err(Error::GroupMismatch);
    }
    if args.len() != form.degree() {
        return Err(Error::invalid(format!(
            "expected {} arguments, got {}",
            form.degree(),
            args.len()
        )));
    }
    for a in args {
        if a.nvars() != group.dim {
            return Err(Error::DimensionMismatch { expected: group.dim, got: a.nvars() });
        }
    }
    let mut out = SkewElement::zero(group);
    for ((g, mu, wedge), c) in form.iter() {
        let f = upsilon_term_apply(&group.eigen[*g], mu, wedge, args)?;
        out.add_component(*g, f.scale(c));
    }
    Ok(out)
}

/// Shared evaluation rule of a bar cochain on argument tuples.
type EvalRule = Rc<dyn Fn(&[Polynomial]) -> Result<SkewElement>>;

/// A cochain on the bar complex with skew group algebra values, carried as an
/// evaluation rule on argument tuples.
#[derive(Clone)]
pub struct BarCochain {
    p: usize,
    nvars: usize,
    eval: EvalRule,
}

impl BarCochain {
    pub fn new(
        p: usize,
        nvars: usize,
        eval: impl Fn(&[Polynomial]) -> Result<SkewElement> + 'static,
    ) -> Self {
        BarCochain { p, nvars, eval: Rc::new(eval) }
    }

    pub fn degree(&self) -> usize {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn evaluate(&self, args: &[Polynomial]) -> Result<SkewElement> {
        if args.len() != self.p {
            return Err(Error::invalid(format!(
                "expected {} arguments, got {}",
                self.p,
                args.len()
            )));
        }
        for a in args {
            if a.nvars() != self.nvars {
                return Err(Error::DimensionMismatch { expected: self.nvars, got: a.nvars() });
            }
        }
        (self.eval)(args)
    }
}

/// Wraps a form as a reusable bar cochain.
pub fn upsilon_cochain(group: &GroupData, form: &TaggedForm) -> Result<BarCochain> {
    if form.group_id() != group.hash {
        return Err(Error::GroupMismatch);
    }
    let group = group.clone();
    let form = form.clone();
    Ok(BarCochain::new(form.degree(), group.dim, move |args| {
        upsilon_evaluate(&group, &form, args)
    }))
}

/// Converter for a single g-component whose coordinate data is written in an
/// explicit eigen decomposition of g instead of the canonical one.  Used to
/// compare converter images across basis choices.
pub fn upsilon_cochain_in(
    group: &GroupData,
    g: usize,
    eigen: &EigenData,
    terms: &[(Exponents, Vec<usize>, CycScalar)],
    p: usize,
) -> Result<BarCochain> {
    if g >= group.order() {
        return Err(Error::IndexOutOfRange { index: g, bound: group.order() });
    }
    let n = group.dim;
    for (mu, w, _) in terms {
        if mu.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: mu.len() });
        }
        if w.len() != p {
            return Err(Error::invalid("wedge length must match the form degree"));
        }
    }
    let group = group.clone();
    let eigen = eigen.clone();
    let terms = terms.to_vec();
    Ok(BarCochain::new(p, n, move |args| {
        let mut value = Polynomial::zero(n);
        for (mu, w, c) in &terms {
            let f = upsilon_term_apply(&eigen, mu, w, args)?;
            value = &value + &f.scale(c);
        }
        let mut out = SkewElement::zero(&group);
        out.add_component(g, value);
        Ok(out)
    }))
}

/// Rewrites the coordinate data of one component term from one eigen
/// decomposition of g to another.  The polynomial part moves by the change of
/// basis; the dual wedge moves contravariantly, through minors.
pub fn transport_component_term(
    src: &EigenData,
    dst: &EigenData,
    mu: &Exponents,
    wedge: &[usize],
) -> Result<Vec<(Exponents, Vec<usize>, CycScalar)>> {
    let n = mu.len();
    let on_poly = dst.basis_inv.mul(&src.basis);
    let on_dual = src.basis_inv.mul(&dst.basis);
    let poly =
        on_poly.act_on_polynomial(&Polynomial::monomial(n, mu.clone(), CycScalar::one()))?;
    let mut out = Vec::new();
    for k in combinations(n, wedge.len()) {
        let minor = submatrix_det(&on_dual, wedge, &k);
        if minor.is_zero() {
            continue;
        }
        for (e, c) in poly.iter() {
            out.push((e.clone(), k.clone(), c * &minor));
        }
    }
    Ok(out)
}

/// The cochain differential on bar cochains: outer slots act on the value
/// through the bimodule structure, inner slots merge with alternating signs.
pub fn bar_cochain_differential(group: &GroupData, f: &BarCochain) -> BarCochain {
    let p = f.degree();
    let n = f.nvars();
    let f = f.clone();
    let group = group.clone();
    BarCochain::new(p + 1, n, move |args| {
        let mut total = f.evaluate(&args[1..])?.left_multiply(&args[0]);
        let mut sign = -1i64;
        for j in 1..=p {
            let mut merged: Vec<Polynomial> = Vec::with_capacity(p);
            merged.extend(args[..j - 1].iter().cloned());
            merged.push(&args[j - 1] * &args[j]);
            merged.extend(args[j + 1..].iter().cloned());
            let v = f.evaluate(&merged)?.scale(&CycScalar::from_integer(sign));
            total = total.add(&v)?;
            sign = -sign;
        }
        let last = f
            .evaluate(&args[..p])?
            .right_twisted_multiply(&args[p], &group)?
            .scale(&CycScalar::from_integer(sign));
        total.add(&last)
    })
}

/// Pulls a bar cochain back along the inclusion of the Koszul resolution and
/// reads the result off in per-component eigenbases.
pub fn phi_star(group: &GroupData, f: &BarCochain) -> Result<TaggedForm> {
    let p = f.degree();
    let n = group.dim;
    if f.nvars() != n {
        return Err(Error::DimensionMismatch { expected: n, got: f.nvars() });
    }
    let mut out = TaggedForm::zero(p, n, group.hash);
    let perms = permutations_signed(p);
    for g in 0..group.order() {
        let eigen = &group.eigen[g];
        for wedge in combinations(n, p) {
            let mut value = SkewElement::zero(group);
            for (perm, sign) in &perms {
                let args: Vec<Polynomial> =
                    perm.iter().map(|&k| eigen.basis.column_poly(wedge[k])).collect();
                let v = f.evaluate(&args)?.scale(&CycScalar::from_integer(i64::from(*sign)));
                value = value.add(&v)?;
            }
            let fg = eigen.basis_inv.act_on_polynomial(&value.component(g))?;
            out.add_poly_term(g, &fg, &wedge);
        }
    }
    Ok(out)
}

/// The Koszul cochain differential.  On a decomposable term each absent
/// variable enters the wedge with the sign of its insertion slot and the
/// factor 1 - eps produced by commuting it past the group tag.
pub fn koszul_cochain_differential(group: &GroupData, form: &TaggedForm) -> Result<TaggedForm> {
    if form.group_id() != group.hash {
        return Err(Error::GroupMismatch);
    }
    let n = form.nvars();
    let mut out = TaggedForm::zero(form.degree() + 1, n, group.hash);
    for ((g, mu, wedge), c) in form.iter() {
        let eps = &group.eigen[*g].eps;
        for (j, eps_j) in eps.iter().enumerate() {
            if wedge.contains(&j) {
                continue;
            }
            let factor = &CycScalar::one() - eps_j;
            if factor.is_zero() {
                continue;
            }
            let pos = wedge.iter().take_while(|&&w| w < j).count();
            let sign = if pos % 2 == 0 { 1 } else { -1 };
            let mut bigger = wedge.clone();
            bigger.insert(pos, j);
            let coeff = &(c * &factor) * &CycScalar::from_integer(sign);
            out.add_term(*g, exp_add(mu, &exp_unit(n, j)), bigger, coeff);
        }
    }
    Ok(out)
}

/// Determinant of the square submatrix with the given rows and columns.
fn submatrix_det(m: &crate::poly::LinearMap, rows: &[usize], cols: &[usize]) -> CycScalar {
    let p = rows.len();
    debug_assert_eq!(p, cols.len());
    let mut a: Vec<Vec<CycScalar>> = rows
        .iter()
        .map(|&r| cols.iter().map(|&c| m.get(r, c).clone()).collect())
        .collect();
    let mut det = CycScalar::one();
    for k in 0..p {
        let pivot = match (k..p).find(|&i| !a[i][k].is_zero()) {
            Some(i) => i,
            None => return CycScalar::zero(),
        };
        if pivot != k {
            a.swap(k, pivot);
            det = -&det;
        }
        det = &det * &a[k][k];
        let inv = a[k][k].inv().expect("nonzero pivot");
        for i in (k + 1)..p {
            if a[i][k].is_zero() {
                continue;
            }
            let r = &a[i][k] * &inv;
            let (top, rest) = a.split_at_mut(i);
            for (x, y) in rest[0].iter_mut().zip(top[k].iter()).skip(k) {
                let s = y * &r;
                *x = &*x - &s;
            }
        }
    }
    det
}

/// The action of a group element on forms.  The component tag conjugates;
/// polynomial and wedge coordinates transport between the two eigenbases.
pub fn group_act_on_form(group: &GroupData, h: usize, form: &TaggedForm) -> Result<TaggedForm> {
    if form.group_id() != group.hash {
        return Err(Error::GroupMismatch);
    }
    if h >= group.order() {
        return Err(Error::IndexOutOfRange { index: h, bound: group.order() });
    }
    let n = form.nvars();
    let p = form.degree();
    let hmat = &group.elements[h];
    let hinv = &group.elements[group.inv[h]];
    let mut out = TaggedForm::zero(p, n, group.hash);
    for ((g, mu, wedge), c) in form.iter() {
        let gp = group.mult[group.mult[h][*g]][group.inv[h]];
        let src = &group.eigen[*g];
        let dst = &group.eigen[gp];
        let coeff_map = dst.basis_inv.mul(&hmat.mul(&src.basis));
        let moved = coeff_map.act_on_polynomial(&Polynomial::monomial(n, mu.clone(), c.clone()))?;
        let wedge_map = src.basis_inv.mul(&hinv.mul(&dst.basis));
        for target in combinations(n, p) {
            let minor = submatrix_det(&wedge_map, wedge, &target);
            if minor.is_zero() {
                continue;
            }
            for (e, a) in moved.iter() {
                out.add_term(gp, e.clone(), target.clone(), a * &minor);
            }
        }
    }
    Ok(out)
}

/// Averages the action over a list of group elements.
pub fn reynolds_over(group: &GroupData, elements: &[usize], form: &TaggedForm) -> Result<TaggedForm> {
    if elements.is_empty() {
        return Err(Error::invalid("cannot average over an empty element list"));
    }
    let mut total = TaggedForm::zero(form.degree(), form.nvars(), form.group_id());
    for &h in elements {
        total = total.add(&group_act_on_form(group, h, form)?)?;
    }
    let count = CycScalar::from_integer(elements.len() as i64);
    Ok(total.scale(&count.inv().expect("nonzero count")))
}

/// Averages over the whole group: the projector onto invariant forms.
pub fn reynolds(group: &GroupData, form: &TaggedForm) -> Result<TaggedForm> {
    let all: Vec<usize> = (0..group.order()).collect();
    reynolds_over(group, &all, form)
}

/// Applies a form, viewed as a Koszul cochain, to a Koszul chain given in
/// standard coordinates.
pub fn evaluate_on_koszul(
    group: &GroupData,
    form: &TaggedForm,
    chain: &KoszulChain,
) -> Result<SkewElement> {
    if form.group_id() != group.hash {
        return Err(Error::GroupMismatch);
    }
    if chain.nvars() != group.dim {
        return Err(Error::DimensionMismatch { expected: group.dim, got: chain.nvars() });
    }
    if chain.degree() != form.degree() {
        return Err(Error::DegreeOutOfRange { expected: "matching form degree", got: chain.degree() });
    }
    let n = group.dim;
    let mut out = SkewElement::zero(group);
    for g in 0..group.order() {
        let eigen = &group.eigen[g];
        let local = chain.act_linear(&eigen.basis_inv)?;
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
        out.add_component(g, eigen.basis.act_on_polynomial(&value)?);
    }
    Ok(out)
}

/// In-place row reduction over the scalar field; returns the rank and leaves
/// the nonzero rows reduced.
pub fn row_reduce(rows: &mut Vec<Vec<CycScalar>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = rows[rank][col].inv().expect("nonzero pivot");
        for x in rows[rank].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i == rank || rows[i][col].is_zero() {
                continue;
            }
            let r = rows[i][col].clone();
            let (head, tail) = rows.split_at_mut(rank.max(i));
            let (pivot_row, target) =
                if i < rank { (&tail[0], &mut head[i]) } else { (&head[rank], &mut tail[0]) };
            for (x, y) in target.iter_mut().zip(pivot_row.iter()) {
                let s = y * &r;
                *x = &*x - &s;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    rank
}

/// Monomial-times-wedge basis of one component in polynomial degree d and
/// exterior degree p.
pub fn component_basis(n: usize, d: u32, p: usize) -> Vec<(Exponents, Vec<usize>)> {
    let mut out = Vec::new();
    for e in monomials_of_degree(n, d) {
        for w in combinations(n, p) {
            out.push((e.clone(), w));
        }
    }
    out
}

/// Exact dimension data for one bidegree of one invariant component complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InvariantDims {
    /// Dimension of the invariant subspace of the component.
    pub space: usize,
    /// Dimension of the kernel of the outgoing differential on that subspace.
    pub kernel: usize,
    /// Dimension of kernel modulo incoming image: the cohomology dimension.
    pub homology: usize,
}

fn form_to_vector(
    form: &TaggedForm,
    g: usize,
    index: &BTreeMap<(Exponents, Vec<usize>), usize>,
) -> Vec<CycScalar> {
    let mut row = vec![CycScalar::zero(); index.len()];
    for ((h, e, w), c) in form.iter() {
        assert_eq!(*h, g, "component must stay fixed");
        let at = index[&(e.clone(), w.clone())];
        row[at] = c.clone();
    }
    row
}

fn vector_to_form(
    row: &[CycScalar],
    g: usize,
    degree: usize,
    nvars: usize,
    group_id: u64,
    basis: &[(Exponents, Vec<usize>)],
) -> TaggedForm {
    let mut form = TaggedForm::zero(degree, nvars, group_id);
    for (at, c) in row.iter().enumerate() {
        if !c.is_zero() {
            let (e, w) = &basis[at];
            form.add_term(g, e.clone(), w.clone(), c.clone());
        }
    }
    form
}

/// Row space of the average of every basis monomial over the given elements:
/// a basis of the fixed subspace of component g in bidegree (d, p).  With the
/// identity alone this is the full component basis.
fn averaged_rows(
    group: &GroupData,
    elements: &[usize],
    g: usize,
    p: usize,
    basis: &[(Exponents, Vec<usize>)],
    index: &BTreeMap<(Exponents, Vec<usize>), usize>,
) -> Result<Vec<Vec<CycScalar>>> {
    let mut rows = Vec::new();
    for (e, w) in basis {
        let mut single = TaggedForm::zero(p, group.dim, group.hash);
        single.add_term(g, e.clone(), w.clone(), CycScalar::one());
        let averaged = reynolds_over(group, elements, &single)?;
        if averaged.is_zero() {
            continue;
        }
        rows.push(form_to_vector(&averaged, g, index));
    }
    row_reduce(&mut rows);
    Ok(rows)
}

fn index_of(basis: &[(Exponents, Vec<usize>)]) -> BTreeMap<(Exponents, Vec<usize>), usize> {
    basis.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect()
}

/// Rank of the differential restricted to the span of the given rows.
fn differential_rank(
    group: &GroupData,
    g: usize,
    rows: &[Vec<CycScalar>],
    degree: usize,
    basis: &[(Exponents, Vec<usize>)],
    target_index: &BTreeMap<(Exponents, Vec<usize>), usize>,
) -> Result<usize> {
    let mut image = Vec::new();
    for row in rows {
        let form = vector_to_form(row, g, degree, group.dim, group.hash, basis);
        let df = koszul_cochain_differential(group, &form)?;
        if df.is_zero() {
            continue;
        }
        image.push(form_to_vector(&df, g, target_index));
    }
    Ok(row_reduce(&mut image))
}

/// Shared bidegree computation: dimensions of the subspace fixed by the given
/// elements, of the kernel of the outgoing differential on it, and of the
/// cohomology at that spot.
fn cohomology_dimension_over(
    group: &GroupData,
    elements: &[usize],
    g: usize,
    d: u32,
    p: usize,
) -> Result<InvariantDims> {
    if g >= group.order() {
        return Err(Error::IndexOutOfRange { index: g, bound: group.order() });
    }
    let n = group.dim;
    if p > n {
        return Ok(InvariantDims { space: 0, kernel: 0, homology: 0 });
    }
    let basis1 = component_basis(n, d, p);
    let index1 = index_of(&basis1);
    let fixed1 = averaged_rows(group, elements, g, p, &basis1, &index1)?;
    let space = fixed1.len();

    let index2 = index_of(&component_basis(n, d + 1, p + 1));
    let out_rank = if p + 1 > n {
        0
    } else {
        differential_rank(group, g, &fixed1, p, &basis1, &index2)?
    };
    let kernel = space - out_rank;

    let in_rank = if p == 0 || d == 0 {
        0
    } else {
        let basis0 = component_basis(n, d - 1, p - 1);
        let index0 = index_of(&basis0);
        let fixed0 = averaged_rows(group, elements, g, p - 1, &basis0, &index0)?;
        differential_rank(group, g, &fixed0, p - 1, &basis0, &index1)?
    };
    Ok(InvariantDims { space, kernel, homology: kernel - in_rank })
}

/// Exact invariant cohomology dimensions for component g in bidegree (d, p):
/// polynomial degree d, exterior degree p.  Averaging runs over the
/// centralizer of g, which fixes the component.
pub fn invariant_cohomology_dimension(
    group: &GroupData,
    g: usize,
    d: u32,
    p: usize,
) -> Result<InvariantDims> {
    if g >= group.order() {
        return Err(Error::IndexOutOfRange { index: g, bound: group.order() });
    }
    cohomology_dimension_over(group, &group.centralizers[g], g, d, p)
}

/// Plain (non averaged) cohomology dimensions of one component bidegree.
pub fn component_cohomology_dimension(
    group: &GroupData,
    g: usize,
    d: u32,
    p: usize,
) -> Result<InvariantDims> {
    cohomology_dimension_over(group, &[0], g, d, p)
}

/// Differential matrix of component g from bidegree (d, p) to (d + 1, p + 1):
/// one row per basis term of the source, in target basis coordinates.  Rows
/// are empty when the target block is empty.
pub fn differential_matrix(
    group: &GroupData,
    g: usize,
    d: u32,
    p: usize,
) -> Result<Vec<Vec<CycScalar>>> {
    if g >= group.order() {
        return Err(Error::IndexOutOfRange { index: g, bound: group.order() });
    }
    let n = group.dim;
    let index2 = index_of(&component_basis(n, d + 1, p + 1));
    let mut rows = Vec::new();
    for (e, w) in component_basis(n, d, p) {
        let mut single = TaggedForm::zero(p, n, group.hash);
        single.add_term(g, e, w, CycScalar::one());
        let df = koszul_cochain_differential(group, &single)?;
        rows.push(form_to_vector(&df, g, &index2));
    }
    Ok(rows)
}

/// Whether a form supported in component g and homogeneous of bidegree (d, p)
/// is in the image of the differential from (d - 1, p - 1).  This is an exact
/// linear solve: the form extends the row space iff it is not a coboundary.
pub fn is_component_coboundary(
    group: &GroupData,
    g: usize,
    form: &TaggedForm,
    d: u32,
    p: usize,
) -> Result<bool> {
    if form.is_zero() {
        return Ok(true);
    }
    if p == 0 || d == 0 {
        return Ok(false);
    }
    let index = index_of(&component_basis(group.dim, d, p));
    let mut row = vec![CycScalar::zero(); index.len()];
    for ((h, e, w), c) in form.iter() {
        let Some(at) = (*h == g).then(|| index.get(&(e.clone(), w.clone()))).flatten() else {
            return Err(Error::invalid("form is not homogeneous of the stated bidegree"));
        };
        row[*at] = c.clone();
    }
    let mut rows = differential_matrix(group, g, d - 1, p - 1)?;
    let base = row_reduce(&mut rows);
    rows.push(row);
    Ok(row_reduce(&mut rows) == base)
}

/// One row of the dimension table: component, exterior degree, internal
/// degree D (coefficient degree minus exterior degree), and the dimensions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DimRow {
    pub g: usize,
    pub p: usize,
    pub internal: i64,
    pub dims: InvariantDims,
}

/// Largest block, in basis elements, that the dimension table accepts; the
/// exact row reduction is quadratic in this count.
const MAX_BLOCK_ROWS: u64 = 600;

/// Dimension table of one component over ranges of exterior degree p and
/// internal degree D; each row reports the bidegree (d, p) with d = D + p.
/// Bidegrees that cannot carry anything report zeros.
pub fn cohomology_dimensions(
    group: &GroupData,
    g: usize,
    p_range: (usize, usize),
    internal_range: (i64, i64),
    invariant: bool,
) -> Result<Vec<DimRow>> {
    if g >= group.order() {
        return Err(Error::IndexOutOfRange { index: g, bound: group.order() });
    }
    if p_range.0 > p_range.1 || internal_range.0 > internal_range.1 {
        return Err(Error::invalid("empty range"));
    }
    let n = group.dim;
    let zero = InvariantDims { space: 0, kernel: 0, homology: 0 };
    let mut out = Vec::new();
    for p in p_range.0..=p_range.1 {
        for internal in internal_range.0..=internal_range.1 {
            let d = internal + p as i64;
            let dims = if d < 0 || p > n {
                zero
            } else {
                let d = d as u32;
                let block_size = |d: u32, p: usize| {
                    binomial((n as u64 + u64::from(d)).saturating_sub(1), u64::from(d))
                        * binomial(n as u64, p as u64)
                };
                let block = block_size(d, p).max(block_size(d + 1, p + 1));
                if block > MAX_BLOCK_ROWS {
                    return Err(Error::RangeTooLarge(format!(
                        "block (d = {d}, p = {p}) touches {block} basis elements"
                    )));
                }
                if invariant {
                    invariant_cohomology_dimension(group, g, d, p)?
                } else {
                    component_cohomology_dimension(group, g, d, p)?
                }
            };
            out.push(DimRow { g, p, internal, dims });
        }
    }
    Ok(out)
}
