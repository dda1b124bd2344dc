//! Command-line front end.
//!
//! Exit codes: 0 when everything asked for was computed and every asserted
//! value reproduced, 1 on a mathematical mismatch, 2 on bad usage or input,
//! 3 when the memory cap is hit.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::cube::{build_complex_capped, Bigrading, CubeError, Ring};
use crate::diagram::{braid_closure, parse_pd, torus_knot, PlanarDiagram};
use crate::homology::{kh_homology_f2, kh_homology_z};
use crate::ops::butterfly::{butterfly_detect, parse_sq2};
use crate::ops::export::export_basis;
use crate::ops::report::{counterexample_report, Pipeline};
use crate::ops::OpsError;
use crate::specseq::{compute_pages, default_max_page, Poincare, SpectralSequence};
use crate::szabo::{diagram_hash, orientation_from_seed, szabo_on, SzaboDifferential};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "khss", version, about = "Khovanov homology, Szabó's spectral sequence and the Bockstein")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Khovanov homology over F2 or the integers
    Homology(Common),
    /// Pages of the Szabó spectral sequence with their differentials
    Pages {
        #[command(flatten)]
        common: Common,
        /// compare the pages for several orientation seeds
        #[arg(long, value_delimiter = ',')]
        seeds: Vec<u64>,
    },
    /// Reproduce the T(4,5) computation, or test one operation on another knot
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        operation: Option<Operation>,
    },
    /// Write the canonical page-2 basis as JSON
    ExportBasis {
        #[command(flatten)]
        common: Common,
        /// output file (stdout when absent)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Survey d_2 / Sq^2 butterfly sites
    Butterfly(Common),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum RingArg {
    F2,
    Z,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Operation {
    Sq1,
    X,
    Identity,
}

#[derive(Args, Debug, Clone)]
#[group(id = "input", multiple = false)]
pub struct Source {
    /// planar diagram file (`-` for stdin)
    #[arg(long, group = "input")]
    pub pd_file: Option<PathBuf>,
    /// torus knot or link T(P,Q)
    #[arg(long, num_args = 2, value_names = ["P", "Q"], group = "input")]
    pub torus: Option<Vec<usize>>,
    /// built-in knot: unknot, trefoil, figure-eight, t34, t35, t45
    #[arg(long, group = "input")]
    pub knot: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, value_enum, default_value = "f2")]
    pub ring: RingArg,
    /// orientation seed for the configuration rules
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub max_page: Option<u32>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Sq^2 matrices in the exported canonical bases
    #[arg(long)]
    pub sq2_file: Option<PathBuf>,
    /// directory for cached total differentials
    #[arg(long, env = "KHSS_CACHE")]
    pub cache: Option<PathBuf>,
    /// memory cap in bytes (suffixes K, M, G accepted)
    #[arg(long, value_parser = parse_bytes)]
    pub mem_cap: Option<u64>,
}

fn parse_bytes(s: &str) -> Result<u64, String> {
    let s = s.trim();
    let (num, mult) = match s.chars().last() {
        Some('K' | 'k') => (&s[..s.len() - 1], 1u64 << 10),
        Some('M' | 'm') => (&s[..s.len() - 1], 1 << 20),
        Some('G' | 'g') => (&s[..s.len() - 1], 1 << 30),
        _ => (s, 1),
    };
    let v: u64 = num.parse().map_err(|e| format!("{e}"))?;
    match v.checked_mul(mult) {
        Some(0) => Err("memory cap must be positive".into()),
        Some(b) => Ok(b),
        None => Err("memory cap too large".into()),
    }
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(m: impl ToString) -> Failure {
        Failure { code: EXIT_USAGE, message: m.to_string() }
    }
}

impl From<CubeError> for Failure {
    fn from(e: CubeError) -> Failure {
        Failure { code: EXIT_RESOURCE, message: e.to_string() }
    }
}

impl From<OpsError> for Failure {
    fn from(e: OpsError) -> Failure {
        match e {
            OpsError::Cube(c) => c.into(),
            OpsError::Diagram(d) => Failure::usage(d),
            OpsError::MissingBasepoint(_) => Failure::usage(e),
            other => Failure { code: EXIT_MISMATCH, message: other.to_string() },
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure::usage(e)
    }
}

pub fn builtin(name: &str) -> Option<PlanarDiagram> {
    match name {
        "unknot" => Some(PlanarDiagram::unknot()),
        "trefoil" => torus_knot(2, 3).ok(),
        "figure-eight" => braid_closure(3, &[1, -2, 1, -2]).ok(),
        "t34" => torus_knot(3, 4).ok(),
        "t35" => torus_knot(3, 5).ok(),
        "t45" => torus_knot(4, 5).ok(),
        _ => None,
    }
}

/// Resolve the input source; `None` when no source was given.
pub fn load_diagram(src: &Source) -> Result<Option<(String, PlanarDiagram)>, Failure> {
    if let Some(path) = &src.pd_file {
        let mut text = String::new();
        if path.as_os_str() == "-" {
            io::stdin().read_to_string(&mut text)?;
        } else {
            text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        }
        let d = parse_pd(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        return Ok(Some((path.display().to_string(), d)));
    }
    if let Some(pq) = &src.torus {
        let d = torus_knot(pq[0], pq[1]).map_err(Failure::usage)?;
        return Ok(Some((format!("T({},{})", pq[0], pq[1]), d)));
    }
    if let Some(name) = &src.knot {
        let d = builtin(name).ok_or_else(|| Failure::usage(format!("unknown knot {name:?}")))?;
        return Ok(Some((name.clone(), d)));
    }
    Ok(None)
}

fn require_diagram(src: &Source) -> Result<(String, PlanarDiagram), Failure> {
    load_diagram(src)?.ok_or_else(|| Failure::usage("give one of --pd-file, --torus or --knot"))
}

const CACHE_MAGIC: &[u8; 8] = b"KHSSDZ01";

fn cache_path(dir: &Path, d: &PlanarDiagram, seed: u64, ring: Ring) -> PathBuf {
    let ring = match ring {
        Ring::F2 => "f2",
        Ring::Z => "z",
    };
    dir.join(format!("{:016x}-s{seed}-{ring}.delta", diagram_hash(d)))
}

fn write_cache(path: &Path, sz: &SzaboDifferential) -> io::Result<()> {
    let mut buf: Vec<u8> = Vec::new();
    buf.extend_from_slice(CACHE_MAGIC);
    buf.extend_from_slice(&(sz.layers.len() as u64).to_le_bytes());
    for l in &sz.layers {
        buf.extend_from_slice(&l.bidegree.0.to_le_bytes());
        buf.extend_from_slice(&l.bidegree.1.to_le_bytes());
        buf.extend_from_slice(&(l.indptr.len() as u64).to_le_bytes());
        for &p in &l.indptr {
            buf.extend_from_slice(&p.to_le_bytes());
        }
        buf.extend_from_slice(&(l.targets.len() as u64).to_le_bytes());
        for &t in &l.targets {
            buf.extend_from_slice(&t.to_le_bytes());
        }
    }
    fs::create_dir_all(path.parent().unwrap_or(Path::new(".")))?;
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, &buf)?;
    fs::rename(tmp, path)
}

fn read_cache(path: &Path, dim: usize) -> Option<Vec<crate::cube::ChainMapLayer>> {
    let bytes = fs::read(path).ok()?;
    let mut pos = 0usize;
    let mut take = |n: usize| -> Option<&[u8]> {
        let s = bytes.get(pos..pos + n)?;
        pos += n;
        Some(s)
    };
    if take(8)? != CACHE_MAGIC {
        return None;
    }
    let u64_at = |s: &[u8]| u64::from_le_bytes(s.try_into().unwrap());
    let n = u64_at(take(8)?) as usize;
    let mut layers = Vec::with_capacity(n);
    for _ in 0..n {
        let a = i32::from_le_bytes(take(4)?.try_into().unwrap());
        let b = i32::from_le_bytes(take(4)?.try_into().unwrap());
        let np = u64_at(take(8)?) as usize;
        if np != dim + 1 {
            return None;
        }
        let indptr: Vec<u64> = take(8 * np)?.chunks_exact(8).map(u64_at).collect();
        let nt = u64_at(take(8)?) as usize;
        let targets: Vec<u32> =
            take(4 * nt)?.chunks_exact(4).map(|c| u32::from_le_bytes(c.try_into().unwrap())).collect();
        if indptr.last().copied() != Some(nt as u64) {
            return None;
        }
        layers.push(crate::cube::ChainMapLayer {
            bidegree: (a, b),
            ring: Some(Ring::F2),
            indptr,
            targets,
            coeffs: vec![],
        });
    }
    Some(layers)
}

/// Build the total differential, going through the cache when one is set.
pub fn load_szabo(d: &PlanarDiagram, c: &Common) -> Result<SzaboDifferential, Failure> {
    let cap = c.mem_cap.unwrap_or(u64::MAX);
    let complex = build_complex_capped(d, Ring::F2, cap)?;
    let orient = orientation_from_seed(c.seed, d.n_crossings());
    if let Some(dir) = &c.cache {
        let path = cache_path(dir, d, c.seed, Ring::F2);
        if let Some(layers) = read_cache(&path, complex.cube.dim() as usize) {
            return Ok(SzaboDifferential {
                complex,
                layers,
                orientation: orient,
                seed: Some(c.seed),
                provenance: diagram_hash(d),
            });
        }
        let mut sz = szabo_on(complex, &orient, diagram_hash(d));
        sz.seed = Some(c.seed);
        write_cache(&path, &sz)?;
        return Ok(sz);
    }
    let mut sz = szabo_on(complex, &orient, diagram_hash(d));
    sz.seed = Some(c.seed);
    Ok(sz)
}

#[derive(Serialize)]
struct RankEntry {
    t: i32,
    q: i32,
    rank: usize,
}

fn ranks(p: &Poincare) -> Vec<RankEntry> {
    p.0.iter().filter(|(_, &r)| r > 0).map(|(b, &r)| RankEntry { t: b.t, q: b.q, rank: r }).collect()
}

/// A `(t,q)` grid: one column per `t`, one row per `q` (largest on top).
pub fn chart(p: &Poincare) -> String {
    let supp: Vec<Bigrading> = p.0.iter().filter(|(_, &r)| r > 0).map(|(b, _)| *b).collect();
    if supp.is_empty() {
        return "(empty)\n".into();
    }
    let (t0, t1) = (supp.iter().map(|b| b.t).min().unwrap(), supp.iter().map(|b| b.t).max().unwrap());
    let (q0, q1) = (supp.iter().map(|b| b.q).min().unwrap(), supp.iter().map(|b| b.q).max().unwrap());
    let mut s = String::from("   q\\t");
    for t in t0..=t1 {
        s += &format!("{t:>3}");
    }
    s.push('\n');
    for q in (q0..=q1).rev().step_by(2) {
        s += &format!("{q:>6}");
        for t in t0..=t1 {
            match p.rank(t, q) {
                0 => s += "  .",
                r => s += &format!("{r:>3}"),
            }
        }
        s.push('\n');
    }
    s
}

fn emit(format: Format, text: String, value: serde_json::Value) -> io::Result<()> {
    let mut out = io::stdout().lock();
    match format {
        Format::Text => out.write_all(text.as_bytes()),
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &value)?;
            out.write_all(b"\n")
        }
    }
}

fn cmd_homology(c: &Common) -> Result<i32, Failure> {
    let (name, d) = require_diagram(&c.source)?;
    let cap = c.mem_cap.unwrap_or(u64::MAX);
    match c.ring {
        RingArg::F2 => {
            let complex = build_complex_capped(&d, Ring::F2, cap)?;
            let p = kh_homology_f2(&complex).poincare();
            let text = format!("{name}: Kh over F2\n{p}\n{}", chart(&p));
            emit(
                c.format,
                text,
                json!({"knot": name, "ring": "f2", "poincare": p.to_string(), "ranks": ranks(&p), "total": p.total()}),
            )?;
        }
        RingArg::Z => {
            let complex = build_complex_capped(&d, Ring::Z, cap)?;
            let groups =
                kh_homology_z(&complex).map_err(|e| Failure { code: EXIT_RESOURCE, message: e.to_string() })?;
            let mut text = format!("{name}: Kh over Z\n");
            for (b, g) in &groups {
                let mut parts = Vec::new();
                if g.rank > 0 {
                    parts.push(if g.rank == 1 { "Z".to_string() } else { format!("Z^{}", g.rank) });
                }
                parts.extend(g.torsion.iter().map(|k| format!("Z/{k}")));
                text += &format!("  t={:<3} q={:<4} {}\n", b.t, b.q, parts.join(" + "));
            }
            let entries: Vec<_> =
                groups.iter().map(|(b, g)| json!({"t": b.t, "q": b.q, "rank": g.rank, "torsion": g.torsion})).collect();
            emit(c.format, text, json!({"knot": name, "ring": "z", "groups": entries}))?;
        }
    }
    Ok(EXIT_OK)
}

fn pages_json(ss: &SpectralSequence) -> serde_json::Value {
    let pages: Vec<_> = ss
        .pages
        .iter()
        .map(|p| {
            let arrows: Vec<_> = p
                .arrows(ss.grading())
                .iter()
                .map(|a| json!({"from": [a.from.t, a.from.q], "to": [a.to.t, a.to.q], "rank": a.rank}))
                .collect();
            json!({"n": p.n, "poincare": p.poincare().to_string(), "ranks": ranks(&p.poincare()), "arrows": arrows})
        })
        .collect();
    json!({"pages": pages, "infinity": ss.infinity().to_string(), "collapse_page": ss.collapse_page()})
}

fn pages_text(ss: &SpectralSequence) -> String {
    let mut s = String::new();
    for p in &ss.pages {
        s += &format!("E{}: {}\n", p.n, p.poincare());
        s += &chart(&p.poincare());
        for a in p.arrows(ss.grading()) {
            s += &format!("  d{}: ({},{}) -> ({},{})  rank {}\n", p.n, a.from.t, a.from.q, a.to.t, a.to.q, a.rank);
        }
    }
    s += &format!("E_inf = E{}: {}\n", ss.collapse_page(), ss.infinity());
    s
}

fn cmd_pages(c: &Common, seeds: &[u64]) -> Result<i32, Failure> {
    let (name, d) = require_diagram(&c.source)?;
    if seeds.is_empty() {
        let sz = load_szabo(&d, c)?;
        let ss = compute_pages(&sz, c.max_page.unwrap_or_else(|| default_max_page(&sz)));
        let mut v = pages_json(&ss);
        v["knot"] = json!(name);
        v["seed"] = json!(c.seed);
        emit(c.format, format!("{name} (seed {})\n{}", c.seed, pages_text(&ss)), v)?;
        return Ok(EXIT_OK);
    }
    let mut polys: BTreeMap<u64, Vec<String>> = BTreeMap::new();
    for &seed in seeds {
        let cs = Common { seed, ..c.clone() };
        let sz = load_szabo(&d, &cs)?;
        let ss = compute_pages(&sz, c.max_page.unwrap_or_else(|| default_max_page(&sz)));
        polys.insert(seed, ss.pages.iter().map(|p| p.poincare().to_string()).collect());
    }
    let first = polys.values().next().cloned().unwrap_or_default();
    let agree = polys.values().all(|p| *p == first);
    let mut text = format!("{name}: seeds {seeds:?} {}\n", if agree { "agree" } else { "DISAGREE" });
    for (k, p) in first.iter().enumerate() {
        text += &format!("E{}: {p}\n", k + 2);
    }
    emit(c.format, text, json!({"knot": name, "seeds": seeds, "agree": agree, "pages": polys}))?;
    Ok(if agree { EXIT_OK } else { EXIT_MISMATCH })
}

fn is_t45(d: &PlanarDiagram) -> bool {
    torus_knot(4, 5).is_ok_and(|t| diagram_hash(&t) == diagram_hash(d))
}

fn cmd_verify(c: &Common, op: Option<Operation>) -> Result<i32, Failure> {
    let src = load_diagram(&c.source)?;
    let cap = c.mem_cap.unwrap_or(u64::MAX);
    if op.is_none() && src.as_ref().is_none_or(|(_, d)| is_t45(d)) {
        let r = counterexample_report(c.seed, cap)?;
        emit(c.format, r.render_text(), serde_json::to_value(&r).expect("report serializes"))?;
        if !r.ok() {
            let mut err = io::stderr().lock();
            for f in r.failures() {
                writeln!(err, "mismatch in {}: expected {}, got {}", f.name, f.expected, f.observed)?;
            }
            return Ok(EXIT_MISMATCH);
        }
        return Ok(EXIT_OK);
    }
    let (name, d) = match src {
        Some(s) => s,
        None => ("T(4,5)".to_string(), torus_knot(4, 5).map_err(Failure::usage)?),
    };
    let op = op.unwrap_or(Operation::Sq1);
    let sz = load_szabo(&d, c)?;
    let max = c.max_page.unwrap_or_else(|| default_max_page(&sz));
    let p = Pipeline::from_szabo(&d, sz, max, cap)?;
    let lifts = p.lift_reports();
    let key = match op {
        Operation::Sq1 => "sq1",
        Operation::X => "x",
        Operation::Identity => "identity",
    };
    let rep = &lifts[key];
    let verdict = match (&rep.failure, rep.checked_pages.len()) {
        (Some(f), _) => format!("fails at page {}, block ({},{})", f.page, f.block.t, f.block.q),
        (None, _) => format!("lifts (checked pages {:?})", rep.checked_pages),
    };
    let text = format!("{name}: {key} {verdict}\n");
    emit(c.format, text, json!({"knot": name, "operation": key, "lifts": rep.lifts, "report": rep}))?;
    // X and the identity are always operations; Sq^1 on other knots is informational
    Ok(if op != Operation::Sq1 && !rep.lifts { EXIT_MISMATCH } else { EXIT_OK })
}

fn cmd_export_basis(c: &Common, out: Option<&Path>) -> Result<i32, Failure> {
    let (_, d) = require_diagram(&c.source)?;
    let complex = build_complex_capped(&d, Ring::F2, c.mem_cap.unwrap_or(u64::MAX))?;
    let kh = kh_homology_f2(&complex);
    let e = export_basis(&d, &complex, &kh);
    let mut s = serde_json::to_string_pretty(&e).expect("export serializes");
    s.push('\n');
    match out {
        Some(path) => {
            fs::write(path, &s)?;
            if c.format == Format::Text {
                println!("{} basis vectors across {} bidegrees written to {}", e.total, e.blocks.len(), path.display());
            }
        }
        None => io::stdout().lock().write_all(s.as_bytes())?,
    }
    Ok(EXIT_OK)
}

fn cmd_butterfly(c: &Common) -> Result<i32, Failure> {
    let (name, d) = require_diagram(&c.source)?;
    let sz = load_szabo(&d, c)?;
    let max = c.max_page.unwrap_or_else(|| default_max_page(&sz));
    let p = Pipeline::from_szabo(&d, sz, max, c.mem_cap.unwrap_or(u64::MAX))?;
    let sq2 = match &c.sq2_file {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            Some(parse_sq2(&text, |b| p.kh.dim(b)).map_err(Failure::usage)?)
        }
        None => None,
    };
    let r = butterfly_detect(&p.bridge(), &p.reduced, &p.x_star, sq2.as_ref());
    let mut text = format!("{name}: {} butterfly site(s)\n", r.sites.len());
    for s in &r.sites {
        text += &format!("  d2 from black at ({},{}): {:?}\n", s.site.t, s.site.q, s.status);
    }
    for b in &r.unmatched_sq2 {
        text += &format!("  Sq^2 on white at ({},{}) without a d2 site\n", b.t, b.q);
    }
    emit(c.format, text, json!({"knot": name, "report": r}))?;
    Ok(EXIT_OK)
}

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match &cli.command {
        Command::Homology(c) => cmd_homology(c),
        Command::Pages { common, seeds } => cmd_pages(common, seeds),
        Command::Verify { common, operation } => cmd_verify(common, *operation),
        Command::ExportBasis { common, out } => cmd_export_basis(common, out.as_deref()),
        Command::Butterfly(c) => cmd_butterfly(c),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
