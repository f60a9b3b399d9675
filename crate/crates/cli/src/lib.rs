//! Command implementations behind the `reslat` binary.
//!
//! Every command produces an [`Output`]: a machine-readable [`ReportDocument`],
//! a text rendering of the same data, and an exit code.

pub mod dot;
pub mod format;

use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use reslat::coann::{coann_family, coannihilator, coannulet};
use reslat::filters::{all_filters, generated_filter};
use reslat::modelgen::{
    enumerate_residuated, BoundedLattice, CensusRecord, CensusStats, SearchSpec,
};
use reslat::normality::{check_normality, normality_report};
use reslat::omega::{dense_set, divisor, omega_family, sigma};
use reslat::spectra::spectrum_with;
use reslat::structure::{prelinearity_witness, ViolationKind};
use reslat::verify::{verify, Selection};
use reslat::{validate_structure, Analysis, Filter, Structure, SubsetMask};

use crate::format::StructureFile;

pub const TOOL: &str = "reslat";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub structure: String,
    pub result: Value,
}

impl ReportDocument {
    pub fn new(command: &str, structure: &str, result: Value) -> Self {
        ReportDocument {
            tool: TOOL.into(),
            version: VERSION.into(),
            command: command.into(),
            structure: structure.into(),
            result,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn header(&self) -> String {
        format!(
            "# {} {} {} {}",
            self.tool, self.version, self.command, self.structure
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Debug)]
pub struct Output {
    pub doc: ReportDocument,
    pub text: String,
    pub code: u8,
}

impl Output {
    fn ok(doc: ReportDocument, text: String) -> Self {
        Output { doc, text, code: 0 }
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => self.doc.to_json(),
            OutputFormat::Text => format!("{}\n{}", self.doc.header(), self.text),
        }
    }
}

/// Two aligned columns.
fn columns(rows: &[(String, String)]) -> String {
    let w = rows
        .iter()
        .map(|(a, _)| a.chars().count())
        .max()
        .unwrap_or(0);
    rows.iter()
        .map(|(a, b)| {
            let pad = w - a.chars().count();
            let line = format!("{a}{}  {b}", " ".repeat(pad));
            format!("{}\n", line.trim_end())
        })
        .collect()
}

fn names(s: &Structure, m: SubsetMask) -> Vec<&str> {
    m.iter().map(|x| s.name(x)).collect()
}

fn set_list(s: &Structure, fs: &[Filter]) -> String {
    if fs.is_empty() {
        return "none".into();
    }
    fs.iter()
        .map(|f| s.format_set(f.mask()))
        .collect::<Vec<_>>()
        .join(" ")
}

fn json_sets(s: &Structure, fs: &[Filter]) -> Value {
    json!(fs.iter().map(|f| names(s, f.mask())).collect::<Vec<_>>())
}

/// Reads and parses a structure file without checking the axioms.
pub fn read_structure(path: &Path) -> anyhow::Result<(String, Structure)> {
    let file = StructureFile::read(path)?;
    let s = file
        .to_structure()
        .with_context(|| format!("{}", path.display()))?;
    Ok((file.name, s))
}

/// Reads a structure and rejects it unless every axiom holds.
pub fn load_structure(path: &Path) -> anyhow::Result<(String, Structure)> {
    let (name, s) = read_structure(path)?;
    let v = validate_structure(&s);
    if let Some(first) = v.violations.first() {
        let w: Vec<&str> = first.witness.iter().map(|&x| s.name(x)).collect();
        bail!(
            "{}: not a residuated lattice ({} fails at ({}))",
            path.display(),
            first.law,
            w.join(", ")
        );
    }
    Ok((name, s))
}

/// Parses a comma-separated element list.
pub fn parse_elements(s: &Structure, arg: &str) -> anyhow::Result<SubsetMask> {
    let mut m = s.empty();
    for part in arg.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match s.find(part) {
            Some(x) => m = m.with(x),
            None => bail!("unknown element `{part}`"),
        }
    }
    Ok(m)
}

/// Parses a filter given by its elements, naming the first element that breaks the definition.
pub fn parse_filter(s: &Structure, arg: &str) -> anyhow::Result<Filter> {
    let m = parse_elements(s, arg)?;
    let set = s.format_set(m);
    if m.is_empty() {
        bail!("`{arg}` is not a filter: it is empty");
    }
    for x in m.iter() {
        if let Some(y) = s.up(x).difference(m).iter().next() {
            bail!(
                "{set} is not a filter: element `{}` lies above `{}` but is missing",
                s.name(y),
                s.name(x)
            );
        }
        for y in m.iter() {
            let p = s.times(x, y);
            if !m.contains(p) {
                bail!(
                    "{set} is not a filter: element `{}` = {} * {} is missing",
                    s.name(p),
                    s.name(x),
                    s.name(y)
                );
            }
        }
    }
    Ok(Filter::new_unchecked(m))
}

pub fn parse_proper_filter(s: &Structure, arg: &str) -> anyhow::Result<Filter> {
    let f = parse_filter(s, arg)?;
    if !f.is_proper() {
        bail!(
            "{} is the whole carrier; a proper filter is required",
            s.format_set(f.mask())
        );
    }
    Ok(f)
}

fn kind_name(k: ViolationKind) -> &'static str {
    match k {
        ViolationKind::Axiom => "axiom",
        ViolationKind::Derived => "derived",
        ViolationKind::InternalConsistency => "internal-consistency",
    }
}

pub fn cmd_validate(name: &str, s: &Structure) -> Output {
    let v = validate_structure(s);
    let prelin = prelinearity_witness(s);
    let violations: Vec<Value> = v
        .violations
        .iter()
        .map(|x| {
            json!({
                "law": x.law,
                "kind": kind_name(x.kind),
                "witness": x.witness.iter().map(|&e| s.name(e)).collect::<Vec<_>>(),
            })
        })
        .collect();
    let doc = ReportDocument::new(
        "validate",
        name,
        json!({
            "valid": v.valid,
            "size": s.size(),
            "prelinear": prelin.is_none(),
            "violations": violations,
        }),
    );
    let mut rows = vec![
        (
            "valid".to_string(),
            if v.valid { "yes" } else { "no" }.to_string(),
        ),
        ("size".to_string(), s.size().to_string()),
    ];
    if v.valid {
        rows.push((
            "prelinear".into(),
            match prelin {
                None => "yes".into(),
                Some((x, y)) => format!("no ({}, {})", s.name(x), s.name(y)),
            },
        ));
    }
    for x in &v.violations {
        let w: Vec<&str> = x.witness.iter().map(|&e| s.name(e)).collect();
        rows.push((
            format!("{} ({})", x.law, kind_name(x.kind)),
            format!("({})", w.join(", ")),
        ));
    }
    Output {
        doc,
        text: columns(&rows),
        code: if v.valid { 0 } else { 1 },
    }
}

pub fn cmd_filters(name: &str, s: &Structure) -> Output {
    let lat = all_filters(s);
    let spec = spectrum_with(s, &lat, Filter::trivial(s));
    let mut rows = Vec::new();
    let mut items = Vec::new();
    for f in lat.filters() {
        let prime = spec.primes.contains(f);
        let maximal = spec.maximals.contains(f);
        let mut tags = Vec::new();
        if prime {
            tags.push("prime");
        }
        if maximal {
            tags.push("maximal");
        }
        rows.push((s.format_set(f.mask()), tags.join(" ")));
        items.push(json!({"elements": names(s, f.mask()), "prime": prime, "maximal": maximal}));
    }
    let doc = ReportDocument::new(
        "filters",
        name,
        json!({ "count": lat.len(), "filters": items }),
    );
    let text = format!("{} filters\n{}", lat.len(), columns(&rows));
    Output::ok(doc, text)
}

pub fn cmd_spectrum(name: &str, s: &Structure, base: Filter) -> Output {
    let lat = all_filters(s);
    let rep = spectrum_with(s, &lat, base);
    let doc = ReportDocument::new(
        "spectrum",
        name,
        json!({
            "base": names(s, base.mask()),
            "primes": json_sets(s, &rep.primes),
            "maximal": json_sets(s, &rep.maximals),
            "minimal_primes": json_sets(s, &rep.minimal_primes),
        }),
    );
    let text = columns(&[
        ("base".into(), s.format_set(base.mask())),
        ("primes".into(), set_list(s, &rep.primes)),
        ("maximal".into(), set_list(s, &rep.maximals)),
        (
            "minimal primes over base".into(),
            set_list(s, &rep.minimal_primes),
        ),
    ]);
    Output::ok(doc, text)
}

/// `--of` lists elements; without it every element's coannulet is listed.
pub fn cmd_coann(
    name: &str,
    s: &Structure,
    base: Filter,
    generated: bool,
    of: Option<SubsetMask>,
) -> Output {
    let mut text = String::new();
    let mut result = serde_json::Map::new();
    if generated {
        text.push_str(&format!("generated {}\n", s.format_set(base.mask())));
    }
    result.insert("base".into(), json!(names(s, base.mask())));
    if let Some(x) = of {
        let c = coannihilator(s, &base, x);
        result.insert("of".into(), json!(names(s, x)));
        result.insert("coannihilator".into(), json!(names(s, c.mask())));
        text.push_str(&format!("{}\n", s.format_set(c.mask())));
    } else {
        let fam = coann_family(s, &base);
        let mut rows = vec![("base".to_string(), s.format_set(base.mask()))];
        let mut by_elem = serde_json::Map::new();
        for x in s.elems() {
            let c = coannulet(s, &base, x);
            rows.push((format!("(F : {})", s.name(x)), s.format_set(c.mask())));
            by_elem.insert(s.name(x).into(), json!(names(s, c.mask())));
        }
        rows.push(("coannihilators".into(), set_list(s, &fam.members)));
        result.insert("by_element".into(), Value::Object(by_elem));
        result.insert("coannihilators".into(), json_sets(s, &fam.members));
        text.push_str(&columns(&rows));
    }
    Output::ok(
        ReportDocument::new("coann", name, Value::Object(result)),
        text,
    )
}

pub fn cmd_omega(name: &str, s: &Structure, base: Filter) -> Output {
    let an = Analysis::new(s);
    let fam = omega_family(s, &base);
    let dense = dense_set(s, &base).mask;
    let sg = sigma(s, &base);
    let mut rows = vec![
        ("base".to_string(), s.format_set(base.mask())),
        ("omega-filters".into(), set_list(s, &fam.members)),
        ("dense".into(), s.format_set(dense)),
        ("sigma".into(), s.format_set(sg.mask())),
    ];
    let mut divisors = Vec::new();
    for p in an.primes_above(&base) {
        let d = divisor(s, &base, &p).expect("primes are proper");
        rows.push((
            format!("divisor {}", s.format_set(p.mask())),
            s.format_set(d),
        ));
        divisors.push(json!({"prime": names(s, p.mask()), "divisor": names(s, d)}));
    }
    let doc = ReportDocument::new(
        "omega",
        name,
        json!({
            "base": names(s, base.mask()),
            "omega_filters": json_sets(s, &fam.members),
            "dense": names(s, dense),
            "sigma": names(s, sg.mask()),
            "divisors": divisors,
        }),
    );
    Output::ok(doc, columns(&rows))
}

pub fn cmd_normality(name: &str, s: &Structure, base: Filter, assert: Option<usize>) -> Output {
    let an = Analysis::new(s);
    let rep = normality_report(&an, &base).expect("base is proper");
    let mut rows = vec![
        ("base".to_string(), s.format_set(base.mask())),
        ("index".into(), rep.index.to_string()),
    ];
    for (p, c) in &rep.per_prime {
        rows.push((
            format!("minimal primes below {}", s.format_set(p.mask())),
            c.to_string(),
        ));
    }
    let mut result = serde_json::Map::new();
    result.insert("base".into(), json!(names(s, base.mask())));
    result.insert("index".into(), json!(rep.index));
    result.insert(
        "per_prime".into(),
        json!(rep
            .per_prime
            .iter()
            .map(|(p, c)| json!({"prime": names(s, p.mask()), "minimal_primes_below": c}))
            .collect::<Vec<_>>()),
    );
    if base == Filter::trivial(s) {
        let v = check_normality(&an);
        let normal = v.value("(1)").unwrap_or(false);
        rows.push(("normal".into(), if normal { "yes" } else { "no" }.into()));
        result.insert("normal".into(), json!(normal));
        result.insert("conditions_agree".into(), json!(v.agree));
    }
    let mut code = 0;
    if let Some(n) = assert {
        let holds = rep.index <= n;
        rows.push((
            format!("{n}-normal"),
            if holds { "yes" } else { "no" }.into(),
        ));
        result.insert("assert".into(), json!({"n": n, "holds": holds}));
        code = u8::from(!holds);
    }
    Output {
        doc: ReportDocument::new("normality", name, Value::Object(result)),
        text: columns(&rows),
        code,
    }
}

pub fn cmd_verify(name: &str, s: &Structure, sel: Selection) -> Output {
    let rep = verify(s, sel);
    let mut text = String::new();
    let w = rep.checks.iter().map(|c| c.id.len()).max().unwrap_or(0);
    for c in &rep.checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        text.push_str(&format!(
            "{status} {:<9} {:<w$}  {} {}",
            c.battery.name(),
            c.id,
            c.cases,
            if c.cases == 1 { "case" } else { "cases" }
        ));
        if let Some(wit) = &c.witness {
            text.push_str(&format!("  at {wit}"));
        }
        text.push('\n');
    }
    for f in &rep.findings {
        text.push_str(&format!("NOTE {}: {}\n", f.id, f.detail));
    }
    let failed = rep.failures().count();
    text.push_str(&format!("{} checks, {failed} failed\n", rep.checks.len()));
    let doc = ReportDocument::new(
        "verify",
        name,
        serde_json::to_value(&rep).expect("plain data serializes"),
    );
    Output {
        doc,
        text,
        code: u8::from(failed > 0),
    }
}

/// One line of census output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusLine {
    pub structure: StructureFile,
    pub canonical_key: String,
    pub stats: CensusLineStats,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusLineStats {
    pub filters: usize,
    pub primes: usize,
    pub minimal_primes: usize,
    pub normality_index: usize,
    pub mtl: bool,
}

impl From<CensusStats> for CensusLineStats {
    fn from(c: CensusStats) -> Self {
        CensusLineStats {
            filters: c.filters,
            primes: c.primes,
            minimal_primes: c.minimal_primes,
            normality_index: c.normality_index,
            mtl: c.is_mtl,
        }
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn census_line(size: usize, i: usize, r: &CensusRecord) -> CensusLine {
    CensusLine {
        structure: StructureFile::from_structure(&format!("rl{size}-{}", i + 1), &r.structure),
        canonical_key: hex(&r.canonical_key),
        stats: r.stats.into(),
    }
}

/// Writes the census as NDJSON followed by a summary line, and reports the counts.
pub fn cmd_search(
    size: usize,
    base: Option<BoundedLattice>,
    limit: Option<usize>,
    all_labelings: bool,
    out: &mut dyn Write,
) -> anyhow::Result<Output> {
    let spec = SearchSpec {
        size,
        base_lattice: base,
        limit,
        canonical_only: !all_labelings,
    };
    let records = enumerate_residuated(&spec)?;
    for (i, r) in records.iter().enumerate() {
        serde_json::to_writer(&mut *out, &census_line(size, i, r))?;
        out.write_all(b"\n")?;
    }
    let mtl = records.iter().filter(|r| r.stats.is_mtl).count();
    let normal = records
        .iter()
        .filter(|r| r.stats.normality_index <= 1)
        .count();
    let summary = json!({"total": records.len(), "by_size": {size.to_string(): records.len()}, "mtl": mtl, "normal": normal});
    serde_json::to_writer(&mut *out, &json!({ "summary": summary }))?;
    out.write_all(b"\n")?;
    out.flush()?;
    let text = columns(&[
        ("size".into(), size.to_string()),
        ("structures".into(), records.len().to_string()),
        ("prelinear".into(), mtl.to_string()),
        ("normal".into(), normal.to_string()),
    ]);
    Ok(Output::ok(
        ReportDocument::new("search", &format!("size {size}"), summary),
        text,
    ))
}

pub fn cmd_export_dot(name: &str, s: &Structure, filters: bool) -> String {
    let body = if filters {
        dot::filters_dot(name, s, &all_filters(s))
    } else {
        dot::lattice_dot(name, s)
    };
    format!("// {TOOL} {VERSION} export-dot {name}\n{body}")
}

/// The filter generated by a list of elements.
pub fn parse_generated_filter(s: &Structure, arg: &str) -> anyhow::Result<Filter> {
    Ok(generated_filter(s, parse_elements(s, arg)?))
}
