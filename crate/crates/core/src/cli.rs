//! The `cellkit` command line: argument parsing, dispatch, rendering and the Euler memo cache.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Map, Value};

use crate::assembler::{fixture_report, interpret, load_fixture, to_quotient_model, Fixture, ReductionDiagram};
use crate::error::{CellError, Result};
use crate::euler::{ec_parts, euler_characteristic, euler_trace, global_cache_snapshot, seed_global_cache, EulerCache};
use crate::f2alg::{bitstring, element_word, full_mask, parse_bitstring, sign_pattern, to_quotient, SubgroupF2};
use crate::interval_orbits::{generate_se_bd_with_expressions, generate_se_with_expressions, independence_report};
use crate::invariants::{two_sided_cell_size, two_sided_cell_size_trace, ChiTable, DimTable};
use crate::partitions::{LieType, Partition};
use crate::solver::{
    orbit_label, possible_orbits_from_dims, solve_even_c, solve_four_row_bd, solve_four_row_c_from_dims,
    solve_general_sp, FourRowConstraint, MultiplicityVector,
};
use crate::springer_symbols::{admissible_permutations, springer_characters, springer_characters_quotient, symbol_of};
use crate::verify;

pub const SCHEMA_VERSION: u32 = 1;
const CACHE_FORMAT: &str = "cellkit-euler-cache";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Parser)]
#[command(name = "cellkit", version, about = "Springer fibers, cell invariants and centrally extended orbits")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Euler memo cache file (overrides CELLKIT_CACHE).
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Lie type of the partition: C, B or D.
    #[arg(long = "lie-type", global = true, default_value = "C")]
    pub lie_type: String,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Euler characteristic of the Springer fiber.
    Euler {
        partition: String,
        /// Print the recursion tree.
        #[arg(long)]
        trace: bool,
    },
    /// F-invariants and character multiplicities.
    Invariants {
        partition: String,
        /// Subgroup of A'_e, e.g. "z1*z3,z2", "110,011", "full" or "trivial".
        #[arg(long)]
        subgroup: Option<String>,
        /// Element a, e.g. "z1" or "1".
        #[arg(long)]
        element: Option<String>,
        /// Character of A'_e, e.g. "(+,-,+)" or "010".
        #[arg(long)]
        character: Option<String>,
    },
    /// Symbol, admissible permutations and Springer characters.
    Characters { partition: String },
    /// Dimensions of the irreducible modules V_(s,rho).
    Dims { partition: String },
    /// Left cell count and two-sided cell size.
    Cells { partition: String },
    /// Orbit multiplicities of Y_e.
    Solve {
        partition: String,
        /// Dims table (JSON rows {"s","rho","dim"}); required for types B and D.
        #[arg(long)]
        dims: Option<PathBuf>,
        /// For 4 rows with --dims: S_1 values on <z12,z3> and <z1,z23>, as "a,b".
        #[arg(long)]
        s1: Option<String>,
    },
    /// Orbit types generated by decorated intervals.
    Se { partition: String },
    /// Orbit types allowed by the numerical constraints.
    Possible { partition: String },
    /// Rank and span report for the class vectors.
    Conjectures { partition: String },
    /// Finite model of a reduction diagram or of a shipped fixture.
    Assemble {
        /// Diagram or fixture JSON file.
        diagram: Option<PathBuf>,
        /// Use the shipped fixture for this partition instead of a file.
        #[arg(long)]
        fixture: Option<String>,
        /// Rank of A_e for a bare diagram (default: largest generator index).
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Run the property suites on all small partitions.
    Verify {
        #[arg(long, default_value_t = 8)]
        max_part: u32,
        #[arg(long, default_value_t = 4)]
        max_rows: usize,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Table {
    headers: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn render(&self) -> String {
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for r in &self.rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |cells: Vec<String>| -> String {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
                .collect();
            padded.join("  ").trim_end().to_string()
        };
        let mut out = vec![line(self.headers.iter().map(|h| h.to_string()).collect())];
        out.push(line(widths.iter().map(|&w| "-".repeat(w)).collect()));
        for r in &self.rows {
            out.push(line(r.clone()));
        }
        out.join("\n")
    }
}

struct Response {
    command: &'static str,
    input: Value,
    provenance: Vec<&'static str>,
    output: Map<String, Value>,
    tables: Vec<(String, Table)>,
    /// Exit with 2 even though a document was produced.
    violation: bool,
}

impl Response {
    fn new(command: &'static str, input: Value) -> Self {
        Response { command, input, provenance: Vec::new(), output: Map::new(), tables: Vec::new(), violation: false }
    }

    fn put(&mut self, key: &str, v: Value) {
        self.output.insert(key.to_string(), v);
    }

    fn document(&self) -> Value {
        let mut doc = self.output.clone();
        doc.insert("schema_version".into(), json!(SCHEMA_VERSION));
        doc.insert("command".into(), json!(self.command));
        doc.insert("input".into(), self.input.clone());
        doc.insert("provenance".into(), json!(self.provenance));
        Value::Object(doc)
    }

    fn render_table(&self) -> String {
        let mut parts = Vec::new();
        for (k, v) in &self.output {
            if self.tables.iter().any(|(name, _)| name == k) {
                continue;
            }
            match v {
                Value::Array(_) | Value::Object(_) => {}
                other => parts.push(format!("{k}: {}", scalar(other))),
            }
        }
        for (name, t) in &self.tables {
            parts.push(format!("{name}:\n{}", t.render()));
        }
        parts.join("\n")
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn big(n: &BigUint) -> Value {
    serde_json::from_str(&n.to_string()).expect("integer literal")
}

/// Parses "z1*z3", "1" or a bit string (z1 first) into A'_e of a rank-k group.
pub fn parse_element(text: &str, k: usize) -> Result<u32> {
    let t = text.trim();
    let kp = k.saturating_sub(1);
    if t == "1" || t == "e" {
        return Ok(0);
    }
    let raw = if !t.is_empty() && t.chars().all(|c| c == '0' || c == '1') {
        if t.len() != kp && t.len() != k {
            return Err(CellError::Usage(format!("bit string '{t}' needs length {kp} or {k}")));
        }
        parse_bitstring(t)?
    } else {
        let mut x = 0u32;
        for w in t.split('*') {
            let w = w.trim();
            let idx: usize = w
                .strip_prefix('z')
                .and_then(|n| n.parse().ok())
                .ok_or_else(|| CellError::Usage(format!("cannot read generator '{w}' in '{t}'")))?;
            if idx == 0 || idx > k {
                return Err(CellError::IndexOutOfRange(format!("z{idx} with k = {k}")));
            }
            x ^= 1 << (idx - 1);
        }
        x
    };
    Ok(to_quotient(raw, k) & full_mask(kp))
}

/// Comma-separated generators, or "full" / "trivial".
pub fn parse_subgroup(text: &str, k: usize) -> Result<SubgroupF2> {
    let kp = k.saturating_sub(1);
    match text.trim() {
        "full" | "all" => return Ok(SubgroupF2::full(kp)),
        "trivial" | "1" | "" => return Ok(SubgroupF2::trivial(kp)),
        _ => {}
    }
    let gens = text.split(',').map(|g| parse_element(g, k)).collect::<Result<Vec<_>>>()?;
    SubgroupF2::span(kp, &gens)
}

/// "(+,-,+)", "+-+" or a bit string; a width-k character is restricted to A'_e.
pub fn parse_character(text: &str, k: usize) -> Result<u32> {
    let kp = k.saturating_sub(1);
    let t: String = text.chars().filter(|c| !matches!(c, '(' | ')' | ',' | ' ')).collect();
    let bits: String = t
        .chars()
        .map(|c| match c {
            '+' | '0' => Ok('0'),
            '-' | '1' => Ok('1'),
            _ => Err(CellError::Usage(format!("cannot read character '{text}'"))),
        })
        .collect::<Result<_>>()?;
    if bits.len() != kp && bits.len() != k {
        return Err(CellError::Usage(format!("character '{text}' needs {kp} or {k} signs")));
    }
    Ok(parse_bitstring(&bits)? & full_mask(kp))
}

fn orbit_rows(mv: &MultiplicityVector, with_zero: bool) -> (Value, Table) {
    let k = mv.k_prime();
    let mut rows = Vec::new();
    let mut trows = Vec::new();
    for (o, m) in mv.entries() {
        if !with_zero && m == &BigUint::default() {
            continue;
        }
        let label = orbit_label(o);
        rows.push(json!({
            "label": label,
            "stabilizer": o.stabilizer().to_bitstrings(),
            "form": o.form_bitstrings(),
            "cardinality": o.cardinality(),
            "multiplicity": big(m),
        }));
        let gens: Vec<String> = o.stabilizer().basis().iter().map(|&x| element_word(x, k)).collect();
        trows.push(vec![
            label.unwrap_or("-").to_string(),
            format!("<{}>", gens.join(",")),
            if o.is_special() { "special".into() } else { "ordinary".into() },
            o.cardinality().to_string(),
            m.to_string(),
        ]);
    }
    (Value::Array(rows), Table { headers: vec!["type", "stabilizer", "form", "|O|", "multiplicity"], rows: trows })
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| CellError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CellError::Usage(format!("{}: {e}", path.display())))
}

fn partition_input(p: &Partition) -> Value {
    json!({"partition": p.parts(), "lie_type": p.lie_type().to_string()})
}

fn cmd_euler(p: &Partition, trace: bool) -> Result<Response> {
    let mut r = Response::new("euler", partition_input(p));
    r.provenance.push("domino recursion");
    r.put("euler", big(&euler_characteristic(p)?));
    if trace {
        r.put("trace", euler_trace(p)?);
    }
    Ok(r)
}

fn cmd_invariants(p: &Partition, sub: Option<&str>, element: Option<&str>, character: Option<&str>) -> Result<Response> {
    let t = ChiTable::new(p)?;
    let k = p.k();
    let kp = t.k_prime();
    let h = match sub {
        Some(s) => parse_subgroup(s, k)?,
        None => SubgroupF2::full(kp),
    };
    let mut input = partition_input(p);
    input["subgroup"] = json!(h.to_bitstrings());
    let mut r = Response::new("invariants", input);
    r.provenance.push("averaged fixed-point Euler characteristics");
    let elements: Vec<u32> = match element {
        Some(e) => vec![parse_element(e, k)?],
        None => (0..(1u32 << kp)).collect(),
    };
    let mut rows = Vec::new();
    let mut trows = Vec::new();
    for a in elements {
        let v = t.f_invariant(&h, a)?;
        rows.push(json!({"a": bitstring(a, kp), "f": big(&v)}));
        trows.push(vec![element_word(a, kp), bitstring(a, kp), v.to_string()]);
    }
    r.put("f_invariants", Value::Array(rows));
    r.tables.push(("f_invariants".into(), Table { headers: vec!["a", "bits", "F_a"], rows: trows }));
    if let Some(c) = character {
        let rho = parse_character(c, k)?;
        r.input["character"] = json!(bitstring(rho, kp));
        r.put("character_multiplicity", big(&t.character_multiplicity(rho)?));
    }
    Ok(r)
}

fn cmd_characters(p: &Partition) -> Result<Response> {
    let s = symbol_of(p)?;
    let k = p.k();
    let mut r = Response::new("characters", partition_input(p));
    r.provenance.push("symbol permutations");
    let perms = admissible_permutations(&s);
    let chars = springer_characters(p)?;
    let quotient = springer_characters_quotient(p)?;
    r.put("symbol", json!({"top": s.top, "bottom": s.bottom}));
    r.put("permutations", json!(perms.len()));
    r.put("characters", json!(chars.iter().map(|&c| bitstring(c, k)).collect::<Vec<_>>()));
    let kp = k.saturating_sub(1);
    r.put("characters_quotient", json!(quotient.iter().map(|&c| bitstring(c, kp)).collect::<Vec<_>>()));
    r.put("symbol_text", json!(s.to_string()));
    let rows = perms
        .iter()
        .map(|q| {
            let c = s.character_of(q);
            vec![format!("{:?}", q.top), format!("{:?}", q.bottom), sign_pattern(c, k)]
        })
        .collect();
    r.tables.push(("permutations_table".into(), Table { headers: vec!["top", "bottom", "character"], rows }));
    Ok(r)
}

fn dims_table(dims: &DimTable) -> Table {
    let kp = dims.k_prime();
    let rows = dims
        .entries()
        .map(|(s, rho, d)| vec![element_word(s, kp), sign_pattern(rho, kp), d.to_string()])
        .collect();
    Table { headers: vec!["s", "rho", "dim"], rows }
}

fn cmd_dims(p: &Partition) -> Result<Response> {
    let dims = ChiTable::new(p)?.dim_table()?;
    let mut r = Response::new("dims", partition_input(p));
    r.provenance.push("F-invariant differences over kernels of characters");
    r.put("dims", dims.to_json());
    r.tables.push(("dims".into(), dims_table(&dims)));
    Ok(r)
}

fn cmd_cells(p: &Partition) -> Result<Response> {
    let t = ChiTable::new(p)?;
    let mut r = Response::new("cells", partition_input(p));
    r.provenance.push("dim V_(1,trivial)");
    r.put("left_cells", big(&t.dim_irreducible(0, 0)?));
    if p.is_distinguished() {
        r.provenance.push("sum of squared dims");
        r.provenance.push("trace-square identity");
        r.put("two_sided_cell_size", big(&two_sided_cell_size(p)?));
        r.put("two_sided_cell_size_trace", big(&two_sided_cell_size_trace(p)?));
    }
    Ok(r)
}

fn cmd_solve(p: &Partition, dims_path: Option<&Path>, s1: Option<&str>) -> Result<Response> {
    let mut input = partition_input(p);
    if let Some(d) = dims_path {
        input["dims"] = json!(d.display().to_string());
    }
    let mut r = Response::new("solve", input);
    let dims = match dims_path {
        Some(path) => {
            let d = DimTable::from_json(&read_json(path)?)?;
            if d.k_prime() + 1 != p.k() {
                return Err(CellError::DimensionMismatch(format!(
                    "dims table has rank {} but {} has {} rows",
                    d.k_prime(),
                    p,
                    p.k()
                )));
            }
            Some(d)
        }
        None => None,
    };
    let mv = match (p.lie_type(), dims) {
        (LieType::B | LieType::D, Some(d)) => {
            r.provenance.push("4-row type B/D system from supplied dims");
            solve_four_row_bd(&d)?
        }
        (LieType::B | LieType::D, None) => {
            return Err(CellError::Usage("types B and D need --dims".into()));
        }
        (LieType::C, Some(d)) => {
            let constraint = match s1 {
                Some(text) => {
                    let v: Vec<BigUint> = text
                        .split(',')
                        .map(|x| x.trim().parse().map_err(|_| CellError::Usage(format!("bad --s1 value '{x}'"))))
                        .collect::<Result<_>>()?;
                    if v.len() != 2 {
                        return Err(CellError::Usage("--s1 takes two values".into()));
                    }
                    r.provenance.push("4-row systems with S_1 data");
                    FourRowConstraint::FromS1 { s1_12_3: v[0].clone(), s1_1_23: v[1].clone() }
                }
                None => {
                    r.provenance.push("4-row systems with a+_{2,3} = a_0^{12} = 0");
                    FourRowConstraint::Geometric
                }
            };
            solve_four_row_c_from_dims(&d, &constraint)?
        }
        (LieType::C, None) if p.all_even() => {
            r.provenance.push(match p.k() {
                0 | 1 => "single point",
                2 => "2-row closed formula",
                3 => "3-row closed formulas",
                _ => "4-row F-invariant systems",
            });
            solve_even_c(p)?
        }
        (LieType::C, None) => {
            let g = solve_general_sp(p)?;
            r.provenance.push("odd/even separation with multinomial copy count");
            r.put("even_part", json!(g.even_part.parts()));
            r.put("copies", big(&g.copies));
            g.multiplicities
        }
    };
    let (rows, table) = orbit_rows(&mv, true);
    r.put("orbits", rows);
    r.put("mass", big(&mv.mass()));
    r.put("orbit_count", big(&mv.orbit_count()));
    r.tables.push(("orbits".into(), table));
    Ok(r)
}

fn cmd_se(p: &Partition) -> Result<Response> {
    let mut r = Response::new("se", partition_input(p));
    let list = if p.lie_type() == LieType::C {
        r.provenance.push("minimal good expressions over block intervals, on A'_e");
        generate_se_with_expressions(p)?
    } else {
        r.provenance.push("minimal good expressions over block intervals, on A_e");
        generate_se_bd_with_expressions(p)?
    };
    let mut rows = Vec::new();
    let mut trows = Vec::new();
    for (o, e) in &list {
        rows.push(json!({
            "expression": e.to_string(),
            "stabilizer": o.stabilizer().to_bitstrings(),
            "form": o.form_bitstrings(),
            "cardinality": o.cardinality(),
        }));
        trows.push(vec![
            e.to_string(),
            o.to_string(),
            if o.is_special() { "special".into() } else { "ordinary".into() },
            o.cardinality().to_string(),
        ]);
    }
    r.put("count", json!(list.len()));
    r.put("se", Value::Array(rows));
    r.tables.push(("se".into(), Table { headers: vec!["expression", "orbit", "form", "|O|"], rows: trows }));
    Ok(r)
}

fn cmd_possible(p: &Partition) -> Result<Response> {
    let dims = ChiTable::new(p)?.dim_table()?;
    let possible = possible_orbits_from_dims(&dims)?;
    let mut r = Response::new("possible", partition_input(p));
    r.provenance.push("orbit types whose Lagrangian avoids zero dims");
    let mut mv = MultiplicityVector::new(dims.k_prime());
    for o in &possible {
        mv.add(o.clone(), BigUint::from(1u32))?;
    }
    let (_, table) = orbit_rows(&mv, true);
    let rows: Vec<Value> = possible
        .iter()
        .map(|o| {
            json!({
                "label": orbit_label(o),
                "stabilizer": o.stabilizer().to_bitstrings(),
                "form": o.form_bitstrings(),
                "cardinality": o.cardinality(),
            })
        })
        .collect();
    r.put("count", json!(possible.len()));
    r.put("possible", Value::Array(rows));
    r.tables.push(("possible".into(), Table { headers: table.headers[..4].to_vec(), rows: table.rows.into_iter().map(|mut x| { x.pop(); x }).collect() }));
    Ok(r)
}

fn cmd_conjectures(p: &Partition) -> Result<Response> {
    let rep = independence_report(p)?;
    let mut r = Response::new("conjectures", partition_input(p));
    r.provenance.push("exact rational rank of class vectors");
    r.put("independence", serde_json::to_value(&rep).expect("report serializes"));
    let rows = vec![
        vec!["possible".into(), rep.possible_count.to_string(), rep.possible_rank.to_string(), rep.possible_independent.to_string()],
        vec!["S_e".into(), rep.se_count.to_string(), rep.se_rank.to_string(), rep.se_independent.to_string()],
    ];
    r.tables.push(("ranks".into(), Table { headers: vec!["set", "count", "rank", "independent"], rows }));
    r.put("se_spans_possible", json!(rep.se_spans_possible));
    r.put("se_basis_of_possible", json!(rep.se_basis_of_possible));
    Ok(r)
}

fn cmd_assemble(path: Option<&Path>, fixture: Option<&str>, rank: Option<usize>) -> Result<Response> {
    let (fx, input) = match (path, fixture) {
        (Some(_), Some(_)) => return Err(CellError::Usage("give a diagram file or --fixture, not both".into())),
        (None, None) => return Err(CellError::Usage("assemble needs a diagram file or --fixture".into())),
        (None, Some(text)) => {
            let p = Partition::parse(text, LieType::C)?;
            (load_fixture(&p)?, json!({"fixture": p.parts()}))
        }
        (Some(path), None) => {
            let v = read_json(path)?;
            let input = json!({"diagram": path.display().to_string()});
            if v.get("components").is_some() {
                (Fixture::parse(&v.to_string())?, input)
            } else {
                let d = ReductionDiagram::from_json(&v)?;
                let k = rank.unwrap_or_else(|| max_generator(&d).max(1));
                let model = interpret(&d, k)?;
                let mut r = Response::new("assemble", input);
                r.provenance.push("projective bundle, blow-up and product rules");
                r.put("rank", json!(k));
                let (rows, table) = orbit_rows(&model, false);
                r.put("model", rows);
                r.tables.push(("model".into(), table));
                if let Ok(q) = to_quotient_model(&model) {
                    r.put("model_quotient", q.to_json());
                }
                return Ok(r);
            }
        }
    };
    let mut r = Response::new("assemble", input);
    r.provenance.push("projective bundle, blow-up and product rules");
    let report = fixture_report(&fx)?;
    if let Value::Object(m) = report {
        for (key, v) in m {
            r.put(&key, v);
        }
    }
    let (_, table) = orbit_rows(&fx.census_quotient()?, false);
    r.tables.push(("census_quotient".into(), table));
    Ok(r)
}

fn max_generator(d: &ReductionDiagram) -> usize {
    match d {
        ReductionDiagram::Base { generators, .. } => generators.iter().copied().max().unwrap_or(0),
        ReductionDiagram::ProjBundle { of, .. } | ReductionDiagram::Copies { of, .. } => max_generator(of),
        ReductionDiagram::BlowUp { blowup } => max_generator(&blowup.of).max(max_generator(&blowup.center)),
        ReductionDiagram::Product { product } => product.iter().map(max_generator).max().unwrap_or(0),
    }
}

fn cmd_verify(max_part: u32, max_rows: usize) -> Result<Response> {
    if max_rows > 5 {
        return Err(CellError::TooManyRows(format!("--max-rows {max_rows} exceeds 5")));
    }
    let rep = verify::run(max_part, max_rows);
    let mut r = Response::new("verify", json!({"max_part": max_part, "max_rows": max_rows}));
    r.provenance.push("exhaustive property suites");
    let rows = rep
        .suites
        .iter()
        .map(|s| vec![s.name.to_string(), s.checked.to_string(), s.failed.to_string(), if s.passed() { "PASS" } else { "FAIL" }.to_string()])
        .collect();
    r.tables.push(("suites".into(), Table { headers: vec!["suite", "checked", "failed", "result"], rows }));
    r.put("suites", serde_json::to_value(&rep.suites).expect("suites serialize"));
    r.put("passed", json!(rep.passed));
    r.violation = !rep.passed;
    Ok(r)
}

fn dispatch(cli: &Cli) -> Result<Response> {
    let lie: LieType = cli.lie_type.parse()?;
    let part = |s: &str| Partition::parse(s, lie);
    match &cli.command {
        Command::Euler { partition, trace } => cmd_euler(&part(partition)?, *trace),
        Command::Invariants { partition, subgroup, element, character } => {
            cmd_invariants(&part(partition)?, subgroup.as_deref(), element.as_deref(), character.as_deref())
        }
        Command::Characters { partition } => cmd_characters(&part(partition)?),
        Command::Dims { partition } => cmd_dims(&part(partition)?),
        Command::Cells { partition } => cmd_cells(&part(partition)?),
        Command::Solve { partition, dims, s1 } => cmd_solve(&part(partition)?, dims.as_deref(), s1.as_deref()),
        Command::Se { partition } => cmd_se(&part(partition)?),
        Command::Possible { partition } => cmd_possible(&part(partition)?),
        Command::Conjectures { partition } => cmd_conjectures(&part(partition)?),
        Command::Assemble { diagram, fixture, rank } => cmd_assemble(diagram.as_deref(), fixture.as_deref(), *rank),
        Command::Verify { max_part, max_rows } => cmd_verify(*max_part, *max_rows),
    }
}

/// Loads a memo table. Unreadable or inconsistent files give an empty table and a warning.
pub fn load_cache(path: &Path) -> (EulerCache, Option<String>) {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return (EulerCache::new(), None),
        Err(e) => return (EulerCache::new(), Some(format!("cannot read cache {}: {e}", path.display()))),
    };
    match parse_cache(&text) {
        Ok(c) => (c, None),
        Err(msg) => (EulerCache::new(), Some(format!("ignoring cache {}: {msg}", path.display()))),
    }
}

fn parse_cache(text: &str) -> std::result::Result<EulerCache, String> {
    let v: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    if v.get("format").and_then(Value::as_str) != Some(CACHE_FORMAT) {
        return Err("unrecognized format".into());
    }
    let entries = v.get("entries").and_then(Value::as_array).ok_or("missing entries")?;
    let mut cache = EulerCache::new();
    let mut keys = Vec::new();
    for e in entries {
        let parts: Vec<u32> = serde_json::from_value(e.get("parts").cloned().ok_or("entry without parts")?)
            .map_err(|e| e.to_string())?;
        let value: BigUint = e
            .get("euler")
            .map(|x| x.to_string().trim_matches('"').to_string())
            .ok_or("entry without value")?
            .parse()
            .map_err(|_| "value is not a nonnegative integer".to_string())?;
        if !parts.is_empty() {
            Partition::validate(&parts, LieType::C).map_err(|e| e.to_string())?;
        }
        if parts.windows(2).any(|w| w[0] > w[1]) {
            return Err("parts not in ascending order".into());
        }
        keys.push(parts.clone());
        cache.insert(parts, value);
    }
    // recompute the cheapest few entries from scratch
    keys.sort_by_key(|p| (p.iter().map(|&x| x as u64).sum::<u64>(), p.clone()));
    let mut fresh = EulerCache::new();
    for p in keys.iter().take(3) {
        if cache.get(p) != Some(&fresh.ec(p)) {
            return Err(format!("entry {p:?} does not match a recomputation"));
        }
    }
    Ok(cache)
}

/// Writes the memo table atomically.
pub fn save_cache(path: &Path, cache: &EulerCache) -> Result<()> {
    let entries: Vec<Value> = cache.entries().into_iter().map(|(p, v)| json!({"parts": p, "euler": big(&v)})).collect();
    let doc = json!({"format": CACHE_FORMAT, "version": 1, "entries": entries});
    let tmp = path.with_extension("tmp");
    let io = |e: std::io::Error| CellError::Io(format!("{}: {e}", path.display()));
    fs::write(&tmp, serde_json::to_string(&doc).expect("cache serializes")).map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

fn cache_path(cli: &Cli) -> Option<PathBuf> {
    cli.cache.clone().or_else(|| std::env::var_os("CELLKIT_CACHE").map(PathBuf::from))
}

fn hint(cli: &Cli) -> &'static str {
    match cli.command {
        Command::Euler { .. } => "cellkit euler --help",
        Command::Invariants { .. } => "cellkit invariants --help",
        Command::Characters { .. } => "cellkit characters --help",
        Command::Dims { .. } => "cellkit dims --help",
        Command::Cells { .. } => "cellkit cells --help",
        Command::Solve { .. } => "cellkit solve --help",
        Command::Se { .. } => "cellkit se --help",
        Command::Possible { .. } => "cellkit possible --help",
        Command::Conjectures { .. } => "cellkit conjectures --help",
        Command::Assemble { .. } => "cellkit assemble --help",
        Command::Verify { .. } => "cellkit verify --help",
    }
}

/// Parses `args` (including the program name), runs the command and renders the result.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: 1, stdout: String::new(), stderr: text },
            };
        }
    };
    let mut stderr = String::new();
    let cache = cache_path(&cli);
    if let Some(path) = &cache {
        let (c, warning) = load_cache(path);
        if let Some(w) = warning {
            stderr.push_str(&format!("warning: {w}\n"));
        }
        seed_global_cache(&c);
    }
    let result = dispatch(&cli);
    if let Some(path) = &cache {
        // make sure the base case is present so even trivial runs leave a usable file
        ec_parts(&[]);
        if let Err(e) = save_cache(path, &global_cache_snapshot()) {
            stderr.push_str(&format!("warning: {e}\n"));
        }
    }
    match result {
        Ok(r) => {
            let stdout = match cli.format {
                Format::Json => serde_json::to_string_pretty(&r.document()).expect("document serializes"),
                Format::Table => r.render_table(),
            } + "\n";
            Outcome { code: if r.violation { 2 } else { 0 }, stdout, stderr }
        }
        Err(e) => {
            stderr.push_str(&format!("error: {e}\n"));
            if matches!(e, CellError::Usage(_)) {
                stderr.push_str(&format!("hint: see `{}`\n", hint(&cli)));
            }
            Outcome { code: e.exit_code(), stdout: String::new(), stderr }
        }
    }
}
