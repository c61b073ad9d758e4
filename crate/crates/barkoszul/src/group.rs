//! Finite matrix groups acting on V, with multiplication tables, conjugacy
//! data, and a deterministic eigenbasis decomposition per element.
//!
//! The scalar field for a loaded group is Q(zeta_m) where m is the least
//! common multiple of the group exponent and the orders of the scalars
//! appearing in the generators; `field_order` below. Each element g is
//! diagonalizable with eigenvalues that are powers of zeta_m, and `eigen[g]`
//! fixes one canonical eigenbasis so that downstream constructions are
//! reproducible byte for byte.

use crate::poly::LinearMap;
use crate::scalar::{lcm_u64, zeta_power, CycScalar, Rational};
use crate::textio::parse_scalar_line;
use crate::{Error, Result};

/// Default cap on group closure size.
pub const DEFAULT_MAX_GROUP: usize = 4096;

/// FNV-1a, used for stable content hashes in reports.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// A canonical eigenbasis for one group element.
///
/// `basis` holds the eigenvectors as columns in standard coordinates; column
/// i is an eigenvector with eigenvalue zeta_{field_order}^{exponents[i]}.
/// The basis is the one produced by [`eigen_decompose`], so it is a pure
/// function of the element matrix.
#[derive(Clone, Debug)]
pub struct EigenData {
    pub element: usize,
    pub basis: LinearMap,
    pub basis_inv: LinearMap,
    pub exponents: Vec<u64>,
    pub eps: Vec<CycScalar>,
}

impl EigenData {
    /// Transports this eigenbasis along a: columns become a * (old columns),
    /// giving an eigenbasis for the conjugate element with equal eigenvalues.
    pub fn transported(&self, a: &LinearMap, new_element: usize) -> Result<EigenData> {
        let basis = a.mul(&self.basis);
        let basis_inv = basis.inverse()?;
        Ok(EigenData {
            element: new_element,
            basis,
            basis_inv,
            exponents: self.exponents.clone(),
            eps: self.eps.clone(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct GroupData {
    pub dim: usize,
    /// Elements in deterministic closure order; index 0 is the identity.
    pub elements: Vec<LinearMap>,
    pub names: Vec<String>,
    /// mult[i][j] is the index of elements[i] * elements[j].
    pub mult: Vec<Vec<usize>>,
    pub inv: Vec<usize>,
    pub element_order: Vec<u64>,
    /// lcm of the element orders.
    pub exponent: u64,
    /// Order m of the ambient cyclotomic field Q(zeta_m).
    pub field_order: u64,
    /// Conjugacy classes, each sorted, ordered by smallest member.
    pub classes: Vec<Vec<usize>>,
    pub class_reps: Vec<usize>,
    pub centralizers: Vec<Vec<usize>>,
    pub eigen: Vec<EigenData>,
    /// Stable content hash of the element matrices.
    pub hash: u64,
}

impl GroupData {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element_by_name(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Resolves a text tag: an element name, `g<idx>`, or a bare index.
    pub fn resolve_element(&self, tag: &str) -> Option<usize> {
        if let Some(i) = self.element_by_name(tag) {
            return Some(i);
        }
        let digits = tag.strip_prefix('g').unwrap_or(tag);
        match digits.parse::<usize>() {
            Ok(i) if i < self.elements.len() => Some(i),
            _ => None,
        }
    }

    pub fn is_abelian(&self) -> bool {
        self.centralizers.iter().all(|z| z.len() == self.order())
    }

    /// One-line summary used in reports.
    pub fn summary(&self) -> String {
        format!(
            "order {}, exponent {}, field Q(zeta_{}), {} conjugacy classes, hash {:016x}",
            self.order(),
            self.exponent,
            self.field_order,
            self.classes.len(),
            self.hash
        )
    }
}

/// Closes the generators under multiplication and assembles all group data.
///
/// Generators must be invertible; the closure aborts past `max_size`.
pub fn generate_group(generators: &[LinearMap], max_size: usize) -> Result<GroupData> {
    let dim = match generators.first() {
        Some(g) => g.dim(),
        None => return Err(Error::invalid("at least one generator is required")),
    };
    for g in generators {
        if g.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: g.dim() });
        }
        if g.det().is_zero() {
            return Err(Error::NonInvertibleGenerator);
        }
    }
    // Embed every entry into one common scalar order so products stay in a
    // fixed field and canonical keys are comparable.
    let mut entry_order = 1u64;
    for g in generators {
        for i in 0..dim {
            for j in 0..dim {
                entry_order = lcm_u64(entry_order, g.get(i, j).order());
            }
        }
    }
    let gens: Vec<LinearMap> = generators
        .iter()
        .map(|g| LinearMap::from_fn(dim, |i, j| g.get(i, j).embed(entry_order)))
        .collect();

    let mut elements = vec![LinearMap::identity(dim)];
    let mut keys = std::collections::HashMap::new();
    keys.insert(elements[0].canonical_key(entry_order), 0usize);
    let mut frontier = 0;
    while frontier < elements.len() {
        let base = elements[frontier].clone();
        frontier += 1;
        for g in &gens {
            let prod = base.mul(g);
            let key = prod.canonical_key(entry_order);
            if let std::collections::hash_map::Entry::Vacant(e) = keys.entry(key) {
                if elements.len() >= max_size {
                    return Err(Error::ClosureExceeded { cap: max_size });
                }
                e.insert(elements.len());
                elements.push(prod);
            }
        }
    }

    let order = elements.len();
    let mut mult = vec![vec![0usize; order]; order];
    for i in 0..order {
        for j in 0..order {
            let prod = elements[i].mul(&elements[j]);
            let key = prod.canonical_key(entry_order);
            mult[i][j] = *keys.get(&key).expect("closure is multiplicatively closed");
        }
    }
    let inv: Vec<usize> = (0..order)
        .map(|i| (0..order).find(|&j| mult[i][j] == 0).expect("group has inverses"))
        .collect();

    let element_order: Vec<u64> = (0..order)
        .map(|i| {
            let mut acc = i;
            let mut r = 1u64;
            while acc != 0 {
                acc = mult[acc][i];
                r += 1;
            }
            r
        })
        .collect();
    let exponent = element_order.iter().fold(1u64, |a, &b| lcm_u64(a, b));
    let field_order = lcm_u64(exponent, entry_order);

    let mut seen = vec![false; order];
    let mut classes = Vec::new();
    for i in 0..order {
        if seen[i] {
            continue;
        }
        let mut class: Vec<usize> = (0..order).map(|a| mult[mult[a][i]][inv[a]]).collect();
        class.sort_unstable();
        class.dedup();
        for &c in &class {
            seen[c] = true;
        }
        classes.push(class);
    }
    let class_reps: Vec<usize> = classes.iter().map(|c| c[0]).collect();
    let centralizers: Vec<Vec<usize>> = (0..order)
        .map(|i| (0..order).filter(|&a| mult[a][i] == mult[i][a]).collect())
        .collect();

    let eigen: Result<Vec<EigenData>> = (0..order)
        .map(|i| eigen_decompose(&elements[i], i, element_order[i], field_order))
        .collect();
    let eigen = eigen?;

    let mut hash_input = format!("dim={dim};m={field_order};");
    for e in &elements {
        hash_input.push_str(&e.canonical_key(field_order));
        hash_input.push('#');
    }
    let hash = fnv1a(hash_input.as_bytes());

    let mut names: Vec<String> = (0..order).map(|i| format!("g{i}")).collect();
    names[0] = "1".to_string();

    Ok(GroupData {
        dim,
        elements,
        names,
        mult,
        inv,
        element_order,
        exponent,
        field_order,
        classes,
        class_reps,
        centralizers,
        eigen,
        hash,
    })
}

/// Canonical eigenbasis of one element of order r inside Q(zeta_m).
///
/// For each eigenvalue exponent k (0 <= k < r) the character projector
/// (1/r) sum_j zeta_r^{-kj} g^j is column reduced to a reduced echelon basis
/// of the eigenspace; the bases are then concatenated sorted by pivot row
/// first und eigenvalue exponent second. The result is a pure function of
/// the matrix, so equal groups always carry equal bases.
pub fn eigen_decompose(g: &LinearMap, element: usize, r: u64, m: u64) -> Result<EigenData> {
    let n = g.dim();
    let r_inv = CycScalar::from_rational(Rational::new(1.into(), (r as i64).into()));
    // Precompute powers of g.
    let mut powers = Vec::with_capacity(r as usize);
    let mut acc = LinearMap::identity(n);
    for _ in 0..r {
        powers.push(acc.clone());
        acc = acc.mul(g);
    }
    // (pivot_row, eigen exponent k, column)
    let mut collected: Vec<(usize, u64, Vec<CycScalar>)> = Vec::new();
    for k in 0..r {
        let mut proj = LinearMap::from_fn(n, |_, _| CycScalar::zero());
        for (j, pw) in powers.iter().enumerate() {
            let w = zeta_power(r, -((k as i64) * (j as i64)));
            for i in 0..n {
                for c in 0..n {
                    let add = &w * pw.get(i, c);
                    proj.set(i, c, &proj.get(i, c).clone() + &add);
                }
            }
        }
        let mut basis: Vec<(usize, Vec<CycScalar>)> = Vec::new();
        for c in 0..n {
            let mut col: Vec<CycScalar> = (0..n).map(|i| &r_inv * proj.get(i, c)).collect();
            // Reduce against the pivots already found for this eigenvalue.
            for (prow, pcol) in &basis {
                let factor = col[*prow].clone();
                if !factor.is_zero() {
                    for i in 0..n {
                        let delta = &factor * &pcol[i];
                        col[i] = &col[i] - &delta;
                    }
                }
            }
            let Some(pivot) = col.iter().position(|x| !x.is_zero()) else {
                continue;
            };
            let pinv = col[pivot].inv().unwrap();
            for x in col.iter_mut() {
                *x = &*x * &pinv;
            }
            // Back-substitute so earlier columns vanish on the new pivot row.
            for (_, pcol) in basis.iter_mut() {
                let factor = pcol[pivot].clone();
                if !factor.is_zero() {
                    for i in 0..n {
                        let delta = &factor * &col[i];
                        pcol[i] = &pcol[i] - &delta;
                    }
                }
            }
            basis.push((pivot, col));
        }
        for (pivot, col) in basis {
            collected.push((pivot, k, col));
        }
    }
    if collected.len() != n {
        return Err(Error::EigenRankMismatch { expected: n, got: collected.len() });
    }
    collected.sort_by_key(|(pivot, k, _)| (*pivot, *k));

    let basis = LinearMap::from_fn(n, |i, j| collected[j].2[i].clone());
    let step = m / r;
    let exponents: Vec<u64> = collected.iter().map(|(_, k, _)| k * step).collect();
    let eps: Vec<CycScalar> = exponents.iter().map(|&e| zeta_power(m, e as i64)).collect();
    // Exactness guard: g * Y = Y * diag(eps).
    let gy = g.mul(&basis);
    let yd = basis.mul(&LinearMap::diagonal(&eps));
    assert!(gy == yd, "eigen decomposition must be exact");
    let basis_inv = basis.inverse()?;
    Ok(EigenData { element, basis, basis_inv, exponents, eps })
}

fn int_matrix(n: usize, rows: &[&[i64]]) -> LinearMap {
    LinearMap::from_fn(n, |i, j| CycScalar::from_integer(rows[i][j]))
}

fn rename_by_matrix(group: &mut GroupData, matrix: &LinearMap, name: &str) {
    let idx = group
        .elements
        .iter()
        .position(|e| e == matrix)
        .expect("builtin element must appear in its own closure");
    group.names[idx] = name.to_string();
}

/// Built-in groups: `klein4-3d`, `cyclic-<r>-2d`, and `sym3-perm`.
pub fn builtin_group(name: &str) -> Result<GroupData> {
    if name == "klein4-3d" {
        let g = int_matrix(3, &[&[-1, 0, 0], &[0, 1, 0], &[0, 0, -1]]);
        let h = int_matrix(3, &[&[-1, 0, 0], &[0, -1, 0], &[0, 0, 1]]);
        let gh = g.mul(&h);
        let mut group = generate_group(&[g.clone(), h.clone()], DEFAULT_MAX_GROUP)?;
        rename_by_matrix(&mut group, &g, "g");
        rename_by_matrix(&mut group, &h, "h");
        rename_by_matrix(&mut group, &gh, "gh");
        return Ok(group);
    }
    if name == "sym3-perm" {
        let s12 = int_matrix(3, &[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
        let r123 = int_matrix(3, &[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
        let mut group = generate_group(&[s12, r123], DEFAULT_MAX_GROUP)?;
        for idx in 0..group.order() {
            let e = &group.elements[idx];
            // sigma(j) = i when column j has its 1 in row i.
            let mut sigma = [0usize; 3];
            for (j, s) in sigma.iter_mut().enumerate() {
                for i in 0..3 {
                    if e.get(i, j).is_one() {
                        *s = i;
                    }
                }
            }
            let name = match sigma {
                [0, 1, 2] => "1".to_string(),
                [1, 0, 2] => "s12".to_string(),
                [2, 1, 0] => "s13".to_string(),
                [0, 2, 1] => "s23".to_string(),
                [1, 2, 0] => "r123".to_string(),
                [2, 0, 1] => "r132".to_string(),
                _ => unreachable!("not a permutation matrix"),
            };
            group.names[idx] = name;
        }
        return Ok(group);
    }
    if let Some(r) = name
        .strip_prefix("cyclic-")
        .and_then(|rest| rest.strip_suffix("-2d"))
        .and_then(|digits| digits.parse::<u64>().ok())
    {
        if !(2..=256).contains(&r) {
            return Err(Error::invalid(format!("cyclic order {r} out of range 2..=256")));
        }
        let gen = LinearMap::diagonal(&[zeta_power(r, 1), zeta_power(r, -1)]);
        let mut group = generate_group(&[gen], DEFAULT_MAX_GROUP)?;
        // Name powers of the generator c, c2, ...
        let c = group
            .elements
            .iter()
            .position(|e| *e == LinearMap::diagonal(&[zeta_power(r, 1), zeta_power(r, -1)]))
            .expect("generator present");
        let mut acc = c;
        for k in 1..r {
            group.names[acc] = if k == 1 { "c".to_string() } else { format!("c{k}") };
            acc = group.mult[acc][c];
        }
        return Ok(group);
    }
    Err(Error::UnknownName(name.to_string()))
}

/// Parses the textual group format:
///
/// ```text
/// dim 2; order_hint 4;
/// 0, -1
/// 1, 0
/// ```
///
/// The header fixes the dimension and the order that `z` refers to inside
/// entries. Each following block of `dim` non-empty lines is one generator,
/// rows as comma-separated scalar expressions.
pub fn group_from_spec_text(text: &str) -> Result<GroupData> {
    let mut header: Option<(usize, u64)> = None;
    let mut rows: Vec<(usize, Vec<CycScalar>)> = Vec::new();
    for (lineno0, raw) in text.lines().enumerate() {
        let lineno = lineno0 + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if header.is_none() {
            let mut dim = None;
            let mut hint = None;
            for piece in line.split(';') {
                let piece = piece.trim();
                if piece.is_empty() {
                    continue;
                }
                let mut words = piece.split_whitespace();
                match (words.next(), words.next(), words.next()) {
                    (Some("dim"), Some(v), None) => {
                        dim = v.parse::<usize>().ok();
                        if dim.is_none() {
                            return Err(Error::parse(lineno, 1, "bad dim value"));
                        }
                    }
                    (Some("order_hint"), Some(v), None) => {
                        hint = v.parse::<u64>().ok();
                        if hint.is_none() {
                            return Err(Error::parse(lineno, 1, "bad order_hint value"));
                        }
                    }
                    _ => {
                        return Err(Error::parse(
                            lineno,
                            1,
                            format!("unrecognized header clause '{piece}'"),
                        ))
                    }
                }
            }
            let d = dim.ok_or_else(|| Error::parse(lineno, 1, "header must set dim"))?;
            let h = hint.ok_or_else(|| Error::parse(lineno, 1, "header must set order_hint"))?;
            if d == 0 {
                return Err(Error::parse(lineno, 1, "dim must be positive"));
            }
            if h == 0 {
                return Err(Error::parse(lineno, 1, "order_hint must be positive"));
            }
            header = Some((d, h));
            continue;
        }
        let (dim, hint) = header.unwrap();
        let mut entries = Vec::new();
        for piece in line.split(',') {
            entries.push(parse_scalar_line(piece, hint, lineno)?);
        }
        if entries.len() != dim {
            return Err(Error::parse(
                lineno,
                1,
                format!("row has {} entries, expected {dim}", entries.len()),
            ));
        }
        rows.push((lineno, entries));
    }
    let Some((dim, _)) = header else {
        return Err(Error::parse(1, 1, "missing 'dim n; order_hint m;' header"));
    };
    if rows.is_empty() || !rows.len().is_multiple_of(dim) {
        return Err(Error::parse(
            rows.last().map(|(l, _)| *l).unwrap_or(1),
            1,
            format!("expected generator blocks of {dim} rows"),
        ));
    }
    let mut generators = Vec::new();
    for block in rows.chunks(dim) {
        let mat = LinearMap::from_fn(dim, |i, j| block[i].1[j].clone());
        generators.push(mat);
    }
    generate_group(&generators, DEFAULT_MAX_GROUP)
}
