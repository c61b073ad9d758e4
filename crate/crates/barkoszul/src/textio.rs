//! Text grammar shared by the CLI, the group file format, and the tests.
//!
//! Scalars: `1/2*z^2 - 1` where z is the session root of unity.
//! Polynomials: `3*v1^2*v2 - z*v3`, variables v1..vn, explicit `*`.
//! Bar chains: `1|v1*v2|v2^3|1`, one polynomial per tensor slot.
//! Koszul chains: `v2^3|1|v1^v2`, left and right polynomials and a wedge of
//! distinct variables (`1` for the empty wedge).
//! Tagged forms: `[h](v1^2*v2)^dv1^dv3 + ...`; coordinates inside a tagged
//! component refer to the canonical eigenbasis of the tagged element.
//! Homology chains: `[g]f0|f1|...|fp`.
//!
//! Parse errors carry line and column, both 1-based.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::cochain::TaggedForm;
use crate::group::GroupData;
use crate::homology::HomologyChain;
use crate::poly::{exp_unit, Polynomial};
use crate::resolution::{BarChain, KoszulChain};
use crate::scalar::{zeta_power, CycScalar};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Pipe,
    Comma,
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
}

impl Lexer {
    fn new(input: &str, line: usize) -> Result<Lexer> {
        let mut toks = Vec::new();
        let chars: Vec<char> = input.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let col = i + 1;
            let c = chars[i];
            match c {
                ' ' | '\t' => {
                    i += 1;
                }
                '+' => {
                    toks.push((Tok::Plus, col));
                    i += 1;
                }
                '-' => {
                    toks.push((Tok::Minus, col));
                    i += 1;
                }
                '*' => {
                    toks.push((Tok::Star, col));
                    i += 1;
                }
                '/' => {
                    toks.push((Tok::Slash, col));
                    i += 1;
                }
                '^' => {
                    toks.push((Tok::Caret, col));
                    i += 1;
                }
                '(' => {
                    toks.push((Tok::LParen, col));
                    i += 1;
                }
                ')' => {
                    toks.push((Tok::RParen, col));
                    i += 1;
                }
                '[' => {
                    toks.push((Tok::LBracket, col));
                    i += 1;
                }
                ']' => {
                    toks.push((Tok::RBracket, col));
                    i += 1;
                }
                '|' => {
                    toks.push((Tok::Pipe, col));
                    i += 1;
                }
                ',' => {
                    toks.push((Tok::Comma, col));
                    i += 1;
                }
                '0'..='9' => {
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let s: String = chars[start..i].iter().collect();
                    toks.push((Tok::Num(s.parse().unwrap()), col));
                }
                c if c.is_ascii_alphabetic() => {
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                        i += 1;
                    }
                    let s: String = chars[start..i].iter().collect();
                    toks.push((Tok::Ident(s), col));
                }
                other => {
                    return Err(Error::parse(line, col, format!("unexpected character '{other}'")));
                }
            }
        }
        let end_col = chars.len() + 1;
        toks.push((Tok::End, end_col));
        Ok(Lexer { toks, pos: 0, line })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if *self.peek() == t {
            self.next();
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.line, self.col(), msg)
    }

    fn at_end(&self) -> bool {
        *self.peek() == Tok::End
    }
}

#[derive(Clone, Copy)]
struct PolyCtx {
    nvars: usize,
    zeta_order: u64,
    /// When set, the identifier `f` parses as this extra variable index.
    f_index: Option<usize>,
}

/// expr := term (('+'|'-') term)*
fn parse_expr(lex: &mut Lexer, ctx: PolyCtx) -> Result<Polynomial> {
    let mut acc = parse_term(lex, ctx)?;
    loop {
        match lex.peek() {
            Tok::Plus => {
                lex.next();
                acc = &acc + &parse_term(lex, ctx)?;
            }
            Tok::Minus => {
                lex.next();
                acc = &acc - &parse_term(lex, ctx)?;
            }
            _ => return Ok(acc),
        }
    }
}

/// term := factor (('*'|'/') factor)*
fn parse_term(lex: &mut Lexer, ctx: PolyCtx) -> Result<Polynomial> {
    let mut acc = parse_factor(lex, ctx)?;
    loop {
        match lex.peek() {
            Tok::Star => {
                lex.next();
                acc = &acc * &parse_factor(lex, ctx)?;
            }
            Tok::Slash => {
                lex.next();
                let col = lex.col();
                let d = parse_factor(lex, ctx)?;
                let c = constant_of(&d)
                    .and_then(|c| c.inv())
                    .ok_or_else(|| Error::parse(lex.line, col, "division requires a nonzero constant divisor"))?;
                acc = acc.scale(&c);
            }
            _ => return Ok(acc),
        }
    }
}

/// factor := '-' factor | atom ('^' signed-integer)?
fn parse_factor(lex: &mut Lexer, ctx: PolyCtx) -> Result<Polynomial> {
    if *lex.peek() == Tok::Minus {
        lex.next();
        return Ok(-&parse_factor(lex, ctx)?);
    }
    let base = parse_atom(lex, ctx)?;
    if *lex.peek() == Tok::Caret {
        lex.next();
        let mut negative = false;
        if *lex.peek() == Tok::Minus {
            lex.next();
            negative = true;
        }
        let col = lex.col();
        let Tok::Num(k) = lex.next() else {
            return Err(Error::parse(lex.line, col, "expected integer exponent"));
        };
        let k = u32::try_from(&k)
            .map_err(|_| Error::parse(lex.line, col, "exponent too large"))?;
        if negative {
            let c = constant_of(&base)
                .and_then(|c| c.inv())
                .ok_or_else(|| Error::parse(lex.line, col, "negative exponent requires a nonzero constant base"))?;
            return Ok(Polynomial::constant(ctx.nvars, c.pow(k as i64)));
        }
        return Ok(base.pow(k));
    }
    Ok(base)
}

fn parse_atom(lex: &mut Lexer, ctx: PolyCtx) -> Result<Polynomial> {
    let col = lex.col();
    match lex.next() {
        Tok::Num(n) => Ok(Polynomial::constant(
            ctx.nvars,
            CycScalar::from_rational(BigRational::from(n)),
        )),
        Tok::Ident(name) => ident_poly(&name, ctx, lex.line, col),
        Tok::LParen => {
            let inner = parse_expr(lex, ctx)?;
            lex.expect(Tok::RParen, "')'")?;
            Ok(inner)
        }
        _ => Err(Error::parse(lex.line, col, "expected a number, variable, or '('")),
    }
}

fn ident_poly(name: &str, ctx: PolyCtx, line: usize, col: usize) -> Result<Polynomial> {
    if name == "z" {
        return Ok(Polynomial::constant(ctx.nvars, zeta_power(ctx.zeta_order, 1)));
    }
    if name == "f" {
        if let Some(fi) = ctx.f_index {
            return Ok(Polynomial::variable(ctx.nvars, fi));
        }
        return Err(Error::parse(line, col, "the symbol f is not available here"));
    }
    if let Some(k) = parse_var_name(name) {
        if k == 0 || k > ctx.nvars {
            return Err(Error::parse(
                line,
                col,
                format!("variable v{k} out of range (1..={})", ctx.nvars),
            ));
        }
        return Ok(Polynomial::variable(ctx.nvars, k - 1));
    }
    Err(Error::parse(line, col, format!("unknown symbol '{name}'")))
}

/// `v<digits>` -> 1-based index.
fn parse_var_name(name: &str) -> Option<usize> {
    let rest = name.strip_prefix('v')?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

fn constant_of(p: &Polynomial) -> Option<CycScalar> {
    if p.is_zero() {
        return Some(CycScalar::zero());
    }
    if p.degree() == 0 {
        Some(p.coefficient(&vec![0; p.nvars()]))
    } else {
        None
    }
}

pub fn parse_polynomial(input: &str, nvars: usize, zeta_order: u64) -> Result<Polynomial> {
    parse_polynomial_line(input, nvars, zeta_order, None, 1)
}

pub fn parse_polynomial_line(
    input: &str,
    nvars: usize,
    zeta_order: u64,
    f_index: Option<usize>,
    line: usize,
) -> Result<Polynomial> {
    let mut lex = Lexer::new(input, line)?;
    let ctx = PolyCtx { nvars, zeta_order, f_index };
    let p = parse_expr(&mut lex, ctx)?;
    if !lex.at_end() {
        return Err(lex.err("trailing input after expression"));
    }
    Ok(p)
}

pub fn parse_scalar(input: &str, zeta_order: u64) -> Result<CycScalar> {
    parse_scalar_line(input, zeta_order, 1)
}

pub fn parse_scalar_line(input: &str, zeta_order: u64, line: usize) -> Result<CycScalar> {
    let p = parse_polynomial_line(input, 0, zeta_order, None, line)?;
    Ok(constant_of(&p).expect("zero-variable polynomial is constant"))
}

/// Comma-separated list of polynomials, e.g. the `--args` payload.
pub fn parse_polynomial_list(
    input: &str,
    nvars: usize,
    zeta_order: u64,
    f_index: Option<usize>,
) -> Result<Vec<Polynomial>> {
    let mut lex = Lexer::new(input, 1)?;
    let ctx = PolyCtx { nvars, zeta_order, f_index };
    let mut out = Vec::new();
    if lex.at_end() {
        return Ok(out);
    }
    loop {
        out.push(parse_expr(&mut lex, ctx)?);
        match lex.next() {
            Tok::Comma => continue,
            Tok::End => return Ok(out),
            _ => return Err(lex.err("expected ',' or end of list")),
        }
    }
}

/// `f0|f1|...|f_{p+1}` with p+2 slots; every slot is a polynomial.
pub fn parse_bar_chain(input: &str, nvars: usize, zeta_order: u64) -> Result<BarChain> {
    let slots: Vec<&str> = input.split('|').collect();
    if slots.len() < 2 {
        return Err(Error::parse(1, 1, "a bar chain needs at least two slots"));
    }
    let mut polys = Vec::with_capacity(slots.len());
    for s in &slots {
        polys.push(parse_polynomial(s, nvars, zeta_order)?);
    }
    BarChain::from_slots(&polys)
}

/// `left|right|wedge` where wedge is `1` or `v_{i HAT} ... ` like `v1^v3`.
pub fn parse_koszul_chain(input: &str, nvars: usize, zeta_order: u64) -> Result<KoszulChain> {
    let slots: Vec<&str> = input.split('|').collect();
    if slots.len() != 3 {
        return Err(Error::parse(1, 1, "a Koszul chain needs exactly three slots"));
    }
    let left = parse_polynomial(slots[0], nvars, zeta_order)?;
    let right = parse_polynomial(slots[1], nvars, zeta_order)?;
    let wedge = parse_wedge_vars(slots[2], nvars)?;
    KoszulChain::from_parts(&left, &right, &wedge)
}

/// `v1^v3` -> [0, 2]; `1` -> empty. Indices must be strictly increasing.
fn parse_wedge_vars(input: &str, nvars: usize) -> Result<Vec<usize>> {
    let mut lex = Lexer::new(input, 1)?;
    if *lex.peek() == Tok::Num(BigInt::from(1)) {
        lex.next();
        if !lex.at_end() {
            return Err(lex.err("trailing input after empty wedge"));
        }
        return Ok(Vec::new());
    }
    let mut out: Vec<usize> = Vec::new();
    loop {
        let col = lex.col();
        let Tok::Ident(name) = lex.next() else {
            return Err(Error::parse(lex.line, col, "expected a variable in the wedge"));
        };
        let k = parse_var_name(&name)
            .filter(|&k| k >= 1 && k <= nvars)
            .ok_or_else(|| Error::parse(lex.line, col, format!("bad wedge variable '{name}'")))?;
        if let Some(&last) = out.last() {
            if k - 1 <= last {
                return Err(Error::parse(lex.line, col, "wedge indices must be strictly increasing"));
            }
        }
        out.push(k - 1);
        match lex.next() {
            Tok::Caret => continue,
            Tok::End => return Ok(out),
            _ => return Err(lex.err("expected '^' or end of wedge")),
        }
    }
}

/// `dv1^dv3` -> [0, 2]; empty input -> empty wedge.
fn parse_dual_wedge(lex: &mut Lexer, nvars: usize) -> Result<Vec<usize>> {
    let mut out: Vec<usize> = Vec::new();
    while *lex.peek() == Tok::Caret {
        lex.next();
        let col = lex.col();
        let Tok::Ident(name) = lex.next() else {
            return Err(Error::parse(lex.line, col, "expected dv<k> after '^'"));
        };
        let k = name
            .strip_prefix('d')
            .and_then(parse_var_name)
            .filter(|&k| k >= 1 && k <= nvars)
            .ok_or_else(|| Error::parse(lex.line, col, format!("bad wedge factor '{name}'")))?;
        if let Some(&last) = out.last() {
            if k - 1 <= last {
                return Err(Error::parse(lex.line, col, "wedge indices must be strictly increasing"));
            }
        }
        out.push(k - 1);
    }
    Ok(out)
}

fn parse_element_tag(lex: &mut Lexer, group: &GroupData) -> Result<usize> {
    lex.expect(Tok::LBracket, "'['")?;
    let col = lex.col();
    let name = match lex.next() {
        Tok::Ident(s) => s,
        Tok::Num(n) => n.to_string(),
        _ => return Err(Error::parse(lex.line, col, "expected a group element tag")),
    };
    let idx = group
        .resolve_element(&name)
        .ok_or_else(|| Error::parse(lex.line, col, format!("unknown group element '{name}'")))?;
    lex.expect(Tok::RBracket, "']'")?;
    Ok(idx)
}

/// `[g](poly)^dv1^dv2 + [h](poly) + ...`; inside a `[g]` component the
/// variables are the canonical eigenbasis coordinates for g.
///
/// `f_index` aliases the identifier `f` to an existing variable index (the
/// CLI appends an inert variable to the group for this purpose).
pub fn parse_tagged_form(
    input: &str,
    group: &GroupData,
    degree: usize,
    f_index: Option<usize>,
) -> Result<TaggedForm> {
    let nvars = group.dim;
    let mut lex = Lexer::new(input, 1)?;
    let mut form = TaggedForm::zero(degree, nvars, group.hash);
    let mut negate = false;
    loop {
        let g = parse_element_tag(&mut lex, group)?;
        lex.expect(Tok::LParen, "'('")?;
        let ctx = PolyCtx { nvars, zeta_order: group.field_order, f_index };
        let mut coeff = parse_expr(&mut lex, ctx)?;
        lex.expect(Tok::RParen, "')'")?;
        let col = lex.col();
        let wedge = parse_dual_wedge(&mut lex, nvars)?;
        if wedge.len() != degree {
            return Err(Error::parse(
                lex.line,
                col,
                format!("wedge has {} factors, expected {degree}", wedge.len()),
            ));
        }
        if negate {
            coeff = -&coeff;
        }
        form.add_poly_term(g, &coeff, &wedge);
        match lex.next() {
            Tok::Plus => {
                negate = false;
            }
            Tok::Minus => {
                negate = true;
            }
            Tok::End => return Ok(form),
            _ => return Err(lex.err("expected '+', '-', or end of form")),
        }
    }
}

/// `[g]f0|f1|...|fp`: a homology chain component tagged by a group element.
pub fn parse_homology_chain(input: &str, group: &GroupData, degree: usize) -> Result<HomologyChain> {
    let trimmed = input.trim_start();
    let offset = input.len() - trimmed.len();
    if !trimmed.starts_with('[') {
        return Err(Error::parse(1, offset + 1, "expected a '[tag]' prefix"));
    }
    let close = trimmed
        .find(']')
        .ok_or_else(|| Error::parse(1, offset + 1, "unterminated '[tag]'"))?;
    let tag = &trimmed[1..close];
    let g = group
        .resolve_element(tag.trim())
        .ok_or_else(|| Error::parse(1, offset + 2, format!("unknown group element '{tag}'")))?;
    let rest = &trimmed[close + 1..];
    let slots: Vec<&str> = rest.split('|').collect();
    if slots.len() != degree + 1 {
        return Err(Error::parse(1, offset + close + 2, format!("expected {} slots", degree + 1)));
    }
    let mut polys = Vec::with_capacity(slots.len());
    for s in &slots {
        polys.push(parse_polynomial(s, group.dim, group.field_order)?);
    }
    HomologyChain::from_slots(group, g, &polys)
}

/// Reads the form degree off the first term: the run of `^dv<k>` factors
/// after its coefficient parenthesis.
pub fn infer_form_degree(input: &str) -> Result<usize> {
    let mut lex = Lexer::new(input, 1)?;
    let mut depth = 0usize;
    loop {
        match lex.next() {
            Tok::LParen => depth += 1,
            Tok::RParen => {
                if depth == 0 {
                    return Err(lex.err("unbalanced ')'"));
                }
                depth -= 1;
                if depth == 0 {
                    let mut count = 0;
                    while *lex.peek() == Tok::Caret {
                        lex.next();
                        match lex.next() {
                            Tok::Ident(name) if name.starts_with('d') => count += 1,
                            _ => return Err(lex.err("expected dv<k> after '^'")),
                        }
                    }
                    return Ok(count);
                }
            }
            Tok::End => return Err(Error::parse(1, 1, "expected a '[tag](coefficient)' term")),
            _ => {}
        }
    }
}

/// `parse_tagged_form` with the degree inferred from the first term.
pub fn parse_tagged_form_inferred(
    input: &str,
    group: &GroupData,
    f_index: Option<usize>,
) -> Result<TaggedForm> {
    parse_tagged_form(input, group, infer_form_degree(input)?, f_index)
}

/// `parse_homology_chain` with the degree inferred from the slot count.
pub fn parse_homology_chain_inferred(input: &str, group: &GroupData) -> Result<HomologyChain> {
    parse_homology_chain(input, group, input.matches('|').count())
}

/// Rewrites renderings of the inert extension variable back to its name `f`:
/// replaces standalone `v<index+1>` tokens, leaving longer names alone.
pub fn rename_extension_variable(s: &str, index: usize) -> String {
    let token = format!("v{}", index + 1);
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let mut out = String::with_capacity(s.len());
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let boundary_before = i == 0 || !chars[i - 1].1.is_ascii_alphanumeric();
        if boundary_before && s[pos..].starts_with(&token) {
            let after = pos + token.len();
            let next = s[after..].chars().next();
            if next.is_none_or(|c| !c.is_ascii_alphanumeric()) {
                out.push('f');
                while i < chars.len() && chars[i].0 < after {
                    i += 1;
                }
                continue;
            }
        }
        out.push(c);
        i += 1;
    }
    out
}

/// `(poly)*[name] + ...` as printed by `SkewElement::render`; also accepts
/// unparenthesized single-monomial coefficients.
pub fn parse_skew_element(
    input: &str,
    group: &GroupData,
    f_index: Option<usize>,
) -> Result<crate::poly::SkewElement> {
    let mut lex = Lexer::new(input, 1)?;
    let ctx = PolyCtx {
        nvars: group.dim,
        zeta_order: group.field_order,
        f_index,
    };
    let mut acc: Vec<(usize, Polynomial, bool)> = Vec::new();
    let mut negate = false;
    loop {
        // One summand: factors multiplied together, ending with *[tag].
        let mut coeff = Polynomial::one(ctx.nvars);
        let mut tag: Option<usize> = None;
        loop {
            if *lex.peek() == Tok::LBracket {
                tag = Some(parse_element_tag(&mut lex, group)?);
                break;
            }
            coeff = &coeff * &parse_factor(&mut lex, ctx)?;
            match lex.peek() {
                Tok::Star => {
                    lex.next();
                }
                _ => break,
            }
        }
        let g = tag.ok_or_else(|| lex.err("summand is missing its '[tag]' factor"))?;
        acc.push((g, coeff, negate));
        match lex.next() {
            Tok::Plus => negate = false,
            Tok::Minus => negate = true,
            Tok::End => break,
            _ => return Err(lex.err("expected '+', '-', or end of element")),
        }
    }
    let mut out = crate::poly::SkewElement::zero(group);
    for (g, f, neg) in acc {
        let f = if neg { -&f } else { f };
        out.add_component(g, f);
    }
    Ok(out)
}

/// Renders exponent-vector wedges like `dv1^dv3` (empty -> `1`).
pub fn render_dual_wedge(wedge: &[usize]) -> String {
    if wedge.is_empty() {
        return String::new();
    }
    let parts: Vec<String> = wedge.iter().map(|i| format!("dv{}", i + 1)).collect();
    format!("^{}", parts.join("^"))
}

pub fn render_wedge_vars(wedge: &[usize]) -> String {
    if wedge.is_empty() {
        return "1".to_string();
    }
    let parts: Vec<String> = wedge.iter().map(|i| format!("v{}", i + 1)).collect();
    parts.join("^")
}

/// Variable expansion of `exp_unit` so slot renderers can reuse it.
pub fn unit_exponents(n: usize, i: usize) -> Vec<u32> {
    exp_unit(n, i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::builtin_group;
    use crate::scalar::rational_from;

    #[test]
    fn scalar_expressions() {
        let x = parse_scalar("1/2*z^2 - 1", 12).unwrap();
        let expected = &zeta_power(12, 2).scale(&rational_from(1, 2)) - &CycScalar::one();
        assert_eq!(x, expected);
        assert_eq!(parse_scalar("-(3 - 2)/2", 4).unwrap(), CycScalar::from_rational(rational_from(-1, 2)));
        assert_eq!(parse_scalar("z^-1", 4).unwrap(), zeta_power(4, -1));
        assert!(parse_scalar("q", 4).is_err());
    }

    #[test]
    fn polynomial_round_trip() {
        let inputs = ["3*v1^2*v2 - z*v3", "v1 - 1", "0", "1", "(v1 + v2)^3 - v3^2*(z^2 + z)"];
        for s in inputs {
            let p = parse_polynomial(s, 3, 12).unwrap();
            let q = parse_polynomial(&p.to_string(), 3, 12).unwrap();
            assert_eq!(p, q, "round trip through '{s}'");
        }
    }

    #[test]
    fn variable_range_is_checked() {
        let err = parse_polynomial("v4", 3, 2).unwrap_err();
        match err {
            Error::Parse { line: 1, col: 1, .. } => {}
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn division_by_nonconstant_is_rejected() {
        assert!(parse_polynomial("v1/v2", 2, 2).is_err());
        assert!(parse_polynomial("v1/0", 2, 2).is_err());
        assert_eq!(
            parse_polynomial("v1/2", 2, 2).unwrap(),
            Polynomial::variable(2, 0).scale(&CycScalar::from_rational(rational_from(1, 2)))
        );
    }

    #[test]
    fn tagged_form_parsing() {
        let group = builtin_group("klein4-3d").unwrap();
        let form = parse_tagged_form("[h](v1^2*v2)^dv1^dv3 - [g](2)^dv1^dv2", &group, 2, None).unwrap();
        assert_eq!(form.degree(), 2);
        let h = group.element_by_name("h").unwrap();
        let g = group.element_by_name("g").unwrap();
        assert_eq!(form.coefficient(h, &[2, 1, 0], &[0, 2]), CycScalar::one());
        assert_eq!(form.coefficient(g, &[0, 0, 0], &[0, 1]), CycScalar::from_integer(-2));
        assert!(parse_tagged_form("[h](v1)^dv1^dv1", &group, 2, None).is_err());
        assert!(parse_tagged_form("[q](v1)^dv1", &group, 1, None).is_err());
    }

    #[test]
    fn skew_element_round_trip() {
        let group = builtin_group("klein4-3d").unwrap();
        let x = parse_skew_element("(v2 + 1)*[1] + v1*[h]", &group, None).unwrap();
        assert_eq!(x.render(&group), "(v2 + 1)*[1] + v1*[h]");
        let y = parse_skew_element(&x.render(&group), &group, None).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn bar_and_koszul_inputs() {
        let c = parse_bar_chain("1|v1*v2|v2^3|1", 3, 2).unwrap();
        assert_eq!(c.degree(), 2);
        let k = parse_koszul_chain("v2^3|1|v1^v2", 3, 2).unwrap();
        assert_eq!(k.degree(), 2);
        let k0 = parse_koszul_chain("v1|v2|1", 3, 2).unwrap();
        assert_eq!(k0.degree(), 0);
        assert!(parse_koszul_chain("v1|v2|v2^v1", 3, 2).is_err());
        assert!(parse_bar_chain("v1", 3, 2).is_err());
    }

    #[test]
    fn form_degree_inference() {
        assert_eq!(infer_form_degree("[h](v1^2*v2)^dv1^dv3 + [g](2)^dv1^dv2").unwrap(), 2);
        assert_eq!(infer_form_degree("[h]((v1 + 1)^2)").unwrap(), 0);
        assert_eq!(infer_form_degree("[1](v3)^dv2").unwrap(), 1);
        assert!(infer_form_degree("[h]").is_err());
        let group = builtin_group("klein4-3d").unwrap();
        let f = parse_tagged_form_inferred("[h](v3)^dv1^dv2", &group, None).unwrap();
        assert_eq!(f.degree(), 2);
    }

    #[test]
    fn homology_degree_inference() {
        let group = builtin_group("klein4-3d").unwrap();
        assert_eq!(parse_homology_chain_inferred("[h]v3|v1|v2", &group).unwrap().degree(), 2);
        assert_eq!(parse_homology_chain_inferred("[1]v1^2", &group).unwrap().degree(), 0);
    }

    #[test]
    fn extension_variable_renaming() {
        assert_eq!(rename_extension_variable("v4*[h] + v1*v4^2*[g]", 3), "f*[h] + v1*f^2*[g]");
        assert_eq!(rename_extension_variable("v41 + v4", 3), "v41 + f");
        assert_eq!(rename_extension_variable("av4", 3), "av4");
    }
}
