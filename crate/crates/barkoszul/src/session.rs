//! Session plumbing shared by the CLI and the foreign-function layer: group
//! loading, configuration with caps and a seed, the inert extension symbol
//! `f`, the apply dispatcher, and dimension tables.
//!
//! Everything here renders to plain strings so that front ends only route
//! text; all mathematics stays in the other modules.

use std::fmt;

use crate::chainmap::PsiContext;
use crate::cochain::{
    cohomology_dimensions, koszul_cochain_differential, reynolds, upsilon_evaluate, DimRow,
};
use crate::group::{builtin_group, generate_group, group_from_spec_text, GroupData};
use crate::homology::{psi_star_twisted, render_vector_form};
use crate::poly::LinearMap;
use crate::scalar::CycScalar;
use crate::textio::{
    parse_bar_chain, parse_homology_chain_inferred, parse_koszul_chain, parse_polynomial_list,
    parse_tagged_form_inferred, rename_extension_variable,
};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Rows,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<OutputFormat> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "rows" => Ok(OutputFormat::Rows),
            other => Err(Error::invalid(format!("unknown format '{other}', expected text|rows"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Text => "text",
            OutputFormat::Rows => "rows",
        })
    }
}

/// Immutable per-run configuration; the seed and caps appear in every report
/// so a run can be reproduced byte for byte.
#[derive(Clone, Debug)]
pub struct SessionConfig {
    /// Builtin group name or path to a group spec file.
    pub group: String,
    /// Cap on homological degrees exercised by the random suites.
    pub max_p: usize,
    /// Cap on total polynomial degrees, both for suites and for apply inputs.
    pub max_degree: u32,
    pub seed: u64,
    pub format: OutputFormat,
}

impl Default for SessionConfig {
    fn default() -> Self {
        SessionConfig {
            group: "klein4-3d".to_string(),
            max_p: 6,
            max_degree: 6,
            seed: 0,
            format: OutputFormat::Text,
        }
    }
}

impl SessionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_p == 0 {
            return Err(Error::invalid("max-p must be positive"));
        }
        if self.max_degree == 0 {
            return Err(Error::invalid("max-degree must be positive"));
        }
        Ok(())
    }
}

/// Loads a group by builtin name, falling back to a spec file path.
pub fn load_group(source: &str) -> Result<GroupData> {
    match builtin_group(source) {
        Ok(g) => Ok(g),
        Err(Error::UnknownName(_)) => {
            let text = std::fs::read_to_string(source)
                .map_err(|e| Error::Io(format!("{source}: {e}")))?;
            group_from_spec_text(&text)
        }
        Err(e) => Err(e),
    }
}

/// True when the expression uses the opaque symbol `f` as a standalone name.
pub fn uses_f_symbol(input: &str) -> bool {
    let bytes = input.as_bytes();
    for (i, &c) in bytes.iter().enumerate() {
        if c != b'f' {
            continue;
        }
        let before = i == 0 || !bytes[i - 1].is_ascii_alphanumeric();
        let after = i + 1 == bytes.len() || !bytes[i + 1].is_ascii_alphanumeric();
        if before && after {
            return true;
        }
    }
    false
}

/// Extends every element block-diagonally by a trivial action on one new
/// coordinate.  The canonical eigenbasis puts the new coordinate last, so the
/// original variable indices survive and `f` becomes variable `dim`.
pub fn extend_group_with_f(group: &GroupData) -> Result<(GroupData, usize)> {
    let n = group.dim;
    let extended: Vec<LinearMap> = group
        .elements
        .iter()
        .map(|e| {
            LinearMap::from_fn(n + 1, |i, j| {
                if i < n && j < n {
                    e.get(i, j).clone()
                } else if i == n && j == n {
                    CycScalar::one()
                } else {
                    CycScalar::zero()
                }
            })
        })
        .collect();
    let mut big = generate_group(&extended, group.order())?;
    assert_eq!(big.order(), group.order(), "extension must not change the closure");
    for idx in 0..big.order() {
        let top = LinearMap::from_fn(n, |i, j| big.elements[idx].get(i, j).clone());
        let orig = group
            .elements
            .iter()
            .position(|e| *e == top)
            .expect("extension preserves the element set");
        big.names[idx] = group.names[orig].clone();
    }
    Ok((big, n))
}

/// A loaded group plus the configuration that loaded it.
#[derive(Clone, Debug)]
pub struct Session {
    pub config: SessionConfig,
    pub group: GroupData,
}

impl Session {
    pub fn open(config: SessionConfig) -> Result<Session> {
        config.validate()?;
        let group = load_group(&config.group)?;
        Ok(Session { config, group })
    }

    /// Opens a session on a group given directly as spec text.
    pub fn from_spec_text(config: SessionConfig, text: &str) -> Result<Session> {
        config.validate()?;
        let group = group_from_spec_text(text)?;
        Ok(Session { config, group })
    }

    /// Applies one of the named maps to textual input and renders the image.
    ///
    /// `psi` and `phi` take a positional chain; `upsilon` takes `--form` and
    /// `--args`; `dstar` and `reynolds` take `--form`; `psi-star` takes a
    /// positional homology chain.  Forms may use the opaque symbol `f`.
    pub fn apply(
        &self,
        map: &str,
        input: Option<&str>,
        form: Option<&str>,
        args: Option<&str>,
    ) -> Result<String> {
        let group = &self.group;
        let n = group.dim;
        let need = |v: Option<&str>, what: &str| {
            v.map(str::to_owned).ok_or_else(|| Error::invalid(format!("{what} is required")))
        };
        match map {
            "psi" => {
                let chain = parse_bar_chain(&need(input, "a positional bar chain")?, n, group.field_order)?;
                let ctx = PsiContext::standard(n, self.config.max_degree);
                Ok(ctx.apply(&chain)?.to_string())
            }
            "phi" => {
                let chain =
                    parse_koszul_chain(&need(input, "a positional Koszul chain")?, n, group.field_order)?;
                Ok(crate::resolution::phi(&chain).to_string())
            }
            "upsilon" => {
                let form_text = need(form, "--form")?;
                let args_text = need(args, "--args")?;
                let extended = uses_f_symbol(&form_text) || uses_f_symbol(&args_text);
                let (work, f_index) = if extended {
                    let (g, idx) = extend_group_with_f(group)?;
                    (g, Some(idx))
                } else {
                    (group.clone(), None)
                };
                let alpha = parse_tagged_form_inferred(&form_text, &work, f_index)?;
                let tuple =
                    parse_polynomial_list(&args_text, work.dim, work.field_order, f_index)?;
                let value = upsilon_evaluate(&work, &alpha, &tuple)?;
                let rendered = value.render(&work);
                Ok(match f_index {
                    Some(idx) => rename_extension_variable(&rendered, idx),
                    None => rendered,
                })
            }
            "dstar" | "reynolds" => {
                let form_text = need(form, "--form")?;
                let extended = uses_f_symbol(&form_text);
                let (work, f_index) = if extended {
                    let (g, idx) = extend_group_with_f(group)?;
                    (g, Some(idx))
                } else {
                    (group.clone(), None)
                };
                let alpha = parse_tagged_form_inferred(&form_text, &work, f_index)?;
                let image = if map == "dstar" {
                    koszul_cochain_differential(&work, &alpha)?
                } else {
                    reynolds(&work, &alpha)?
                };
                let rendered = image.render(&work);
                Ok(match f_index {
                    Some(idx) => rename_extension_variable(&rendered, idx),
                    None => rendered,
                })
            }
            "psi-star" => {
                let chain =
                    parse_homology_chain_inferred(&need(input, "a positional homology chain")?, group)?;
                let image = psi_star_twisted(group, &chain)?;
                Ok(render_vector_form(&image, group))
            }
            other => Err(Error::UnknownName(format!(
                "map '{other}', expected psi|phi|upsilon|dstar|reynolds|psi-star"
            ))),
        }
    }

    /// Dimension table for the selected components, rendered per the format.
    ///
    /// Selector: an element name or index, or `all`.  Without `invariant` the
    /// table lists every selected component; with it, components are averaged
    /// over their centralizers, conjugate components collapse to their class
    /// representative, and a `total` row sums each (p, D) spot.
    pub fn dims(
        &self,
        selector: &str,
        p_range: (usize, usize),
        internal_range: (i64, i64),
        invariant: bool,
    ) -> Result<String> {
        let group = &self.group;
        let components: Vec<usize> = if selector == "all" {
            if invariant {
                group.class_reps.clone()
            } else {
                (0..group.order()).collect()
            }
        } else {
            vec![group
                .resolve_element(selector)
                .ok_or_else(|| Error::UnknownName(format!("group element '{selector}'")))?]
        };
        // Empty ranges are legal and render a header-only table.
        let empty = p_range.0 > p_range.1 || internal_range.0 > internal_range.1;
        let mut tables: Vec<(usize, Vec<DimRow>)> = Vec::new();
        for &g in &components {
            let rows = if empty {
                Vec::new()
            } else {
                cohomology_dimensions(group, g, p_range, internal_range, invariant)?
            };
            tables.push((g, rows));
        }
        let totals: Option<Vec<(usize, i64, usize)>> = (invariant && selector == "all").then(|| {
            let mut sums: Vec<(usize, i64, usize)> = Vec::new();
            for row in tables.iter().flat_map(|(_, rows)| rows) {
                match sums.iter_mut().find(|(p, d, _)| *p == row.p && *d == row.internal) {
                    Some(spot) => spot.2 += row.dims.homology,
                    None => sums.push((row.p, row.internal, row.dims.homology)),
                }
            }
            sums
        });
        Ok(self.render_dims(&tables, totals.as_deref(), invariant))
    }

    fn render_dims(
        &self,
        tables: &[(usize, Vec<DimRow>)],
        totals: Option<&[(usize, i64, usize)]>,
        invariant: bool,
    ) -> String {
        let group = &self.group;
        let mut out = String::new();
        match self.config.format {
            OutputFormat::Text => {
                out.push_str(&format!("group: {} ({})\n", self.config.group, group.summary()));
                out.push_str(&format!("table: {}\n", if invariant { "invariant" } else { "component" }));
                out.push_str("g\tp\tD\tspace\tkernel\tdim\n");
                for (g, rows) in tables {
                    for row in rows {
                        out.push_str(&format!(
                            "{}\t{}\t{}\t{}\t{}\t{}\n",
                            group.names[*g],
                            row.p,
                            row.internal,
                            row.dims.space,
                            row.dims.kernel,
                            row.dims.homology
                        ));
                    }
                }
                if let Some(totals) = totals {
                    for (p, internal, dim) in totals {
                        out.push_str(&format!("total\t{p}\t{internal}\t\t\t{dim}\n"));
                    }
                }
            }
            OutputFormat::Rows => {
                out.push_str(&format!("meta,group,{}\n", self.config.group));
                out.push_str(&format!("meta,group_hash,{:016x}\n", group.hash));
                out.push_str(&format!("meta,field_order,{}\n", group.field_order));
                out.push_str(&format!(
                    "meta,table,{}\n",
                    if invariant { "invariant" } else { "component" }
                ));
                for (g, rows) in tables {
                    for row in rows {
                        out.push_str(&format!(
                            "dim,{},{},{},{},{},{}\n",
                            group.names[*g],
                            row.p,
                            row.internal,
                            row.dims.space,
                            row.dims.kernel,
                            row.dims.homology
                        ));
                    }
                }
                if let Some(totals) = totals {
                    for (p, internal, dim) in totals {
                        out.push_str(&format!("total,{p},{internal},{dim}\n"));
                    }
                }
            }
        }
        out
    }

    /// Runs the named verification suite (or `all`) and renders the report.
    /// Returns the report and the total failure count, which the front ends
    /// turn into an exit status.
    pub fn verify(&self, suite: &str) -> Result<(String, u64)> {
        let reports = crate::suite::run(&self.group, &self.config, suite)?;
        let failures = reports.iter().map(|r| r.failures).sum();
        let overall = if failures == 0 { "pass" } else { "fail" };
        let mut out = String::new();
        match self.config.format {
            OutputFormat::Text => {
                out.push_str("report: verify\n");
                out.push_str(&format!("group: {} ({})\n", self.config.group, self.group.summary()));
                out.push_str(&format!(
                    "caps: max-p {}, max-degree {}\n",
                    self.config.max_p, self.config.max_degree
                ));
                out.push_str(&format!("seed: {}\n", self.config.seed));
                for r in &reports {
                    let verdict = if r.failures == 0 { "pass" } else { "fail" };
                    out.push_str(&format!(
                        "suite {}: {} cases, {} failures: {}\n",
                        r.name, r.cases, r.failures, verdict
                    ));
                    if let Some(first) = &r.first_failure {
                        out.push_str(&format!("  first counterexample: {first}\n"));
                    }
                }
                out.push_str(&format!("overall: {overall}\n"));
            }
            OutputFormat::Rows => {
                out.push_str("meta,command,verify\n");
                out.push_str(&format!("meta,group,{}\n", self.config.group));
                out.push_str(&format!("meta,group_hash,{:016x}\n", self.group.hash));
                out.push_str(&format!("meta,field_order,{}\n", self.group.field_order));
                out.push_str(&format!("meta,max_p,{}\n", self.config.max_p));
                out.push_str(&format!("meta,max_degree,{}\n", self.config.max_degree));
                out.push_str(&format!("meta,seed,{}\n", self.config.seed));
                for r in &reports {
                    let verdict = if r.failures == 0 { "pass" } else { "fail" };
                    match &r.first_failure {
                        Some(first) => out.push_str(&format!(
                            "suite,{},{},{},{},{}\n",
                            r.name,
                            r.cases,
                            r.failures,
                            verdict,
                            first.replace(',', ";")
                        )),
                        None => out.push_str(&format!(
                            "suite,{},{},{},{}\n",
                            r.name, r.cases, r.failures, verdict
                        )),
                    }
                }
                out.push_str(&format!("overall,{overall}\n"));
            }
        }
        Ok((out, failures))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_and_file_loading() {
        assert_eq!(load_group("klein4-3d").unwrap().order(), 4);
        assert!(matches!(load_group("nosuch-group"), Err(Error::Io(_))));
        // Out-of-range builtin parameters do not fall through to file probing.
        assert!(matches!(load_group("cyclic-1000-2d"), Err(Error::InvalidArgument(_))));
        let dir = std::env::temp_dir().join("barkoszul-session-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("rot4.group");
        std::fs::write(&path, "dim 2; order_hint 4;\n0, -1\n1, 0\n").unwrap();
        let g = load_group(path.to_str().unwrap()).unwrap();
        assert_eq!(g.order(), 4);
    }

    #[test]
    fn f_symbol_detection() {
        assert!(uses_f_symbol("[h](f)^dv1"));
        assert!(uses_f_symbol("f"));
        assert!(uses_f_symbol("2*f + v1"));
        assert!(!uses_f_symbol("[h](v1)^dv1"));
        assert!(!uses_f_symbol("foo"));
        assert!(!uses_f_symbol("af"));
        assert!(!uses_f_symbol(""));
    }

    #[test]
    fn extension_keeps_names_and_indices() {
        let group = load_group("klein4-3d").unwrap();
        let (big, f_index) = extend_group_with_f(&group).unwrap();
        assert_eq!(f_index, 3);
        assert_eq!(big.dim, 4);
        assert_eq!(big.order(), 4);
        let mut names: Vec<&str> = big.names.iter().map(String::as_str).collect();
        names.sort_unstable();
        assert_eq!(names, ["1", "g", "gh", "h"]);
        // The extension coordinate is fixed by everything and sorts last in
        // every eigenbasis, leaving the original coordinates in place.
        for e in &big.eigen {
            assert!(e.eps[f_index].is_one());
            assert_eq!(e.basis.get(f_index, f_index), &CycScalar::one());
        }
        assert_eq!(big.field_order, group.field_order);
        assert_ne!(big.hash, group.hash);
    }

    #[test]
    fn apply_golden_examples() {
        let session = Session::open(SessionConfig::default()).unwrap();
        // The second worked splitting: degree-two bar chain with a cubic slot.
        let out = session.apply("psi", Some("1|v1*v2|v2^3|1"), None, None).unwrap();
        let expect = crate::chainmap::psi(
            &parse_bar_chain("1|v1*v2|v2^3|1", 3, 2).unwrap(),
        )
        .unwrap()
        .to_string();
        assert_eq!(out, expect);
        // The opaque coefficient symbol survives the round trip.
        let out = session
            .apply("upsilon", None, Some("[h](f)^dv1^dv2"), Some("v1, v2"))
            .unwrap();
        assert_eq!(out, "f*[h]");
        let out = session
            .apply("upsilon", None, Some("[h](f)^dv1^dv2"), Some("v2, v1"))
            .unwrap();
        assert_eq!(out, "0");
        // Identity tags kill the dual differential.
        let out = session.apply("dstar", None, Some("[1](v1)^dv1"), None).unwrap();
        assert_eq!(out, "0");
    }

    #[test]
    fn apply_round_trips_and_errors() {
        let session = Session::open(SessionConfig::default()).unwrap();
        let out = session.apply("phi", Some("1|1|v1^v2"), None, None).unwrap();
        assert!(!out.is_empty());
        let out = session.apply("reynolds", None, Some("[1](v1^2)"), None).unwrap();
        assert_eq!(out, "[1](v1^2)");
        let out = session.apply("psi-star", Some("[1]1|v1^2"), None, None).unwrap();
        assert_eq!(out, "[1](2*v1)^v1");
        assert!(session.apply("nosuch", Some("x"), None, None).is_err());
        assert!(session.apply("psi", None, None, None).is_err());
        let err = session.apply("psi", Some("1|v1^9|1"), None, None).unwrap_err();
        assert!(matches!(err, Error::DegreeCapExceeded { .. }));
        let err = session.apply("upsilon", None, Some("[h](v1"), Some("v1")).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }

    #[test]
    fn dims_tables_render_in_both_formats() {
        let config = SessionConfig { format: OutputFormat::Rows, ..Default::default() };
        let session = Session::open(config).unwrap();
        let rows = session.dims("all", (0, 1), (0, 1), true).unwrap();
        assert!(rows.contains("meta,group_hash,"));
        assert!(rows.contains("total,0,0,"));
        let one = session.dims("h", (1, 1), (0, 0), false).unwrap();
        assert!(one.contains("dim,h,1,0,"));
        assert!(session.dims("nosuch", (0, 1), (0, 0), false).is_err());

        let session = Session::open(SessionConfig::default()).unwrap();
        let text = session.dims("1", (0, 0), (0, 2), false).unwrap();
        // Identity component, p = 0: dimensions are full polynomial spaces.
        assert!(text.contains("1\t0\t0\t1\t1\t1"));
        assert!(text.contains("1\t0\t2\t6\t6\t6"));
    }

    #[test]
    fn dims_reproduces_reruns_byte_for_byte() {
        let session = Session::open(SessionConfig::default()).unwrap();
        let a = session.dims("all", (0, 2), (0, 1), true).unwrap();
        let b = session.dims("all", (0, 2), (0, 1), true).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn verify_reports_embed_config_and_rerun_identically() {
        let config = SessionConfig { max_p: 2, max_degree: 2, seed: 11, ..Default::default() };
        let session = Session::open(config).unwrap();
        let (report, failures) = session.verify("psi-phi").unwrap();
        assert_eq!(failures, 0);
        assert!(report.contains("report: verify"));
        assert!(report.contains(&format!("hash {:016x}", session.group.hash)));
        assert!(report.contains("caps: max-p 2, max-degree 2"));
        assert!(report.contains("seed: 11"));
        assert!(report.contains("suite psi-phi:"));
        assert!(report.ends_with("overall: pass\n"));
        let (again, _) = session.verify("psi-phi").unwrap();
        assert_eq!(report, again);

        let config = SessionConfig {
            max_p: 2,
            max_degree: 2,
            format: OutputFormat::Rows,
            ..Default::default()
        };
        let session = Session::open(config).unwrap();
        let (rows, _) = session.verify("psi-phi").unwrap();
        assert!(rows.starts_with("meta,command,verify\n"));
        assert!(rows.contains("meta,seed,0"));
        assert!(rows.contains("suite,psi-phi,"));
        assert!(rows.ends_with("overall,pass\n"));
        assert!(session.verify("nosuch").is_err());
    }
}
