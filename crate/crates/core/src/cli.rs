//! Command-line front end. The binary is a thin wrapper around [`dispatch`].

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::arrangement::{flats, mobius_poincare, Arrangement, Lattice};
use crate::bsideals::{candidates, univariate_roots, BoundCase, CandidateWarning, Factorization};
use crate::derham::{subcomplex_cohomology, ComplexReport};
use crate::error::{Error, Result};
use crate::io::ArrangementFile;
use crate::logforms::{check_degree_bound, hilbert_dims};
use crate::verify::{self, VerifyOptions};
use crate::weights::{check_conditions, critical_grade, normalize, ConditionReport, WeightVector};

#[derive(Debug, Parser)]
#[command(
    name = "logderham",
    version,
    about = "Twisted logarithmic de Rham cohomology of hyperplane arrangements"
)]
struct Cli {
    /// Emit JSON instead of tables
    #[arg(long, global = true)]
    json: bool,
    /// Refuse to build graded pieces whose numerators exceed this degree
    #[arg(long, global = true, allow_hyphen_values = true)]
    max_degree: Option<i64>,
    /// Seed for randomized checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Intersection lattice, Möbius values, Poincaré polynomial
    Lattice { file: PathBuf },
    /// Cohomology of the twisted complex at the critical grade
    Betti {
        file: PathBuf,
        /// Comma-separated rational weights, one per hyperplane
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        weights: Option<Vec<String>>,
        /// Use this grade instead of -Σλ
        #[arg(long, allow_hyphen_values = true)]
        grade: Option<i64>,
        /// Shift the weights by the smallest integer that satisfies the conditions
        #[arg(long)]
        normalize: bool,
    },
    /// Dimensions of the graded pieces of logarithmic j-forms
    Hilbert {
        file: PathBuf,
        #[arg(short = 'j')]
        j: usize,
        /// Inclusive range such as -2..4
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        q_range: (i64, i64),
    },
    /// Candidate codimension-one Bernstein–Sato components
    BsCandidates {
        file: PathBuf,
        /// One-based blocks as JSON, e.g. [[1,2],[3]]
        #[arg(long)]
        factorization: Option<String>,
    },
    /// Run the invariant suite
    Verify {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        weights: Option<Vec<String>>,
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true, default_value = "-2..2")]
        q_range: (i64, i64),
        /// Random forms per randomized check
        #[arg(long, default_value_t = 16)]
        samples: usize,
    },
}

fn parse_range(s: &str) -> std::result::Result<(i64, i64), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected a..b, got {s:?}"))?;
    let a: i64 = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b: i64 = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    if a > b {
        return Err(format!("empty range {s}"));
    }
    Ok((a, b))
}

/// Sizes the global thread pool from `LOGDERHAM_THREADS` when it is set.
pub fn configure_threads() {
    if let Some(n) = std::env::var("LOGDERHAM_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// exit code: 0 on success, 1 on invalid input, 2 on an internal failure.
pub fn dispatch<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };
    match run(&cli) {
        Ok((text, ok)) => {
            let _ = write!(out, "{text}");
            if ok {
                0
            } else {
                2
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_internal() {
                2
            } else {
                1
            }
        }
    }
}

struct Loaded {
    file: ArrangementFile,
    arr: Arrangement,
    lattice: Lattice,
}

fn load(path: &PathBuf) -> Result<Loaded> {
    let file = ArrangementFile::read(path)?;
    let arr = file.arrangement()?;
    let lattice = flats(&arr);
    Ok(Loaded { file, arr, lattice })
}

fn weights_from(flag: &Option<Vec<String>>, loaded: &Loaded) -> Result<Option<WeightVector>> {
    let w = match flag {
        Some(items) => Some(WeightVector::parse(items)?),
        None => loaded.file.weights()?,
    };
    w.map(|w| w.for_arrangement(&loaded.arr)).transpose()
}

fn render(json: bool, value: Value, table: impl FnOnce() -> String) -> String {
    if json {
        let mut s = serde_json::to_string_pretty(&value).expect("values always serialize");
        s.push('\n');
        s
    } else {
        table()
    }
}

/// Returns the output text and whether every reported check passed.
fn run(cli: &Cli) -> Result<(String, bool)> {
    match &cli.command {
        Command::Lattice { file } => {
            let l = load(file)?;
            Ok((lattice_output(&l, cli.json), true))
        }
        Command::Betti {
            file,
            weights,
            grade,
            normalize: norm,
        } => {
            let l = load(file)?;
            let w = weights_from(weights, &l)?.unwrap_or_else(|| WeightVector::zero(l.arr.len()));
            let run = betti_run(&l.arr, &l.lattice, w, *grade, *norm, cli.max_degree)?;
            Ok((betti_output(&l, &run, cli.json), true))
        }
        Command::Hilbert { file, j, q_range } => {
            let l = load(file)?;
            if *j > l.arr.nvars() {
                return Err(Error::FormDegree {
                    j: *j,
                    n: l.arr.nvars(),
                });
            }
            check_degree_bound(&l.arr, q_range.1, cli.max_degree)?;
            let dims = hilbert_dims(&l.arr, *j, q_range.0..=q_range.1)?;
            let value = json!({
                "j": j,
                "dims": dims.iter().map(|(q, d)| json!({"q": q, "dim": d})).collect::<Vec<_>>(),
            });
            Ok((
                render(cli.json, value, || {
                    let rows = dims
                        .iter()
                        .map(|(q, d)| vec![q.to_string(), d.to_string()])
                        .collect();
                    table(&["q", &format!("dim Ω^{j}(log)_q")], rows)
                }),
                true,
            ))
        }
        Command::BsCandidates {
            file,
            factorization,
        } => {
            let l = load(file)?;
            let f = match factorization {
                Some(text) => {
                    let blocks: Vec<Vec<usize>> = serde_json::from_str(text)
                        .map_err(|e| Error::BadFactorization(e.to_string()))?;
                    Factorization::from_one_based(l.arr.len(), &blocks)?
                }
                None => l
                    .file
                    .factorization()?
                    .unwrap_or_else(|| Factorization::trivial(l.arr.len())),
            };
            Ok((bs_output(&l, &f, cli.json), true))
        }
        Command::Verify {
            file,
            weights,
            q_range,
            samples,
        } => {
            let l = load(file)?;
            let opts = VerifyOptions {
                weights: weights_from(weights, &l)?,
                q_window: q_range.0..=q_range.1,
                seed: cli.seed,
                samples: *samples,
                max_degree: cli.max_degree,
            };
            let report = verify::run(&l.arr, &l.lattice, &opts)?;
            let ok = report.ok();
            let value = json!({
                "ok": ok,
                "checks": report.checks.iter().map(|c| json!({
                    "name": c.name,
                    "ok": c.ok,
                    "detail": c.detail,
                })).collect::<Vec<_>>(),
            });
            let text = render(cli.json, value, || {
                let rows = report
                    .checks
                    .iter()
                    .map(|c| {
                        vec![
                            if c.ok { "pass" } else { "FAIL" }.to_string(),
                            c.name.clone(),
                            c.detail.clone(),
                        ]
                    })
                    .collect();
                table(&["result", "check", "detail"], rows)
            });
            Ok((text, ok))
        }
    }
}

fn one_based(hset: &[usize]) -> Vec<usize> {
    hset.iter().map(|k| k + 1).collect()
}

fn hset_labels(arr: &Arrangement, hset: &[usize]) -> String {
    let names: Vec<&str> = hset.iter().map(|&k| arr.labels()[k].as_str()).collect();
    format!("{{{}}}", names.join(", "))
}

fn join<T: ToString>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

/// `1 + 3t + 2t^2`
fn format_poly(coeffs: &[i64]) -> String {
    let mut s = String::new();
    for (i, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        if !s.is_empty() {
            s.push_str(if c < 0 { " - " } else { " + " });
        } else if c < 0 {
            s.push('-');
        }
        let a = c.abs();
        let var = match i {
            0 => String::new(),
            1 => "t".into(),
            _ => format!("t^{i}"),
        };
        if a != 1 || i == 0 {
            s.push_str(&a.to_string());
        }
        s.push_str(&var);
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

fn table(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if i + 1 == cells.len() {
                s.push_str(cell);
            } else {
                s.push_str(cell);
                s.extend(std::iter::repeat(' ').take(w - cell.chars().count() + 2));
            }
        }
        s.push('\n');
        s
    };
    let mut out = line(header.to_vec());
    for row in &rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}

/// JSON description of the lattice with Möbius values and OS Betti numbers.
pub fn lattice_json(arr: &Arrangement, lattice: &Lattice) -> Value {
    let os = mobius_poincare(arr, lattice);
    json!({
        "variables": arr.variables(),
        "hyperplanes": arr.labels(),
        "flats": lattice.flats().iter().map(|f| json!({
            "id": f.id,
            "hyperplanes": one_based(&f.hset),
            "rank": f.rank,
            "mobius": f.mobius,
            "dense": f.dense,
        })).collect::<Vec<_>>(),
        "poincare": os.poincare,
        "betti": os.betti,
    })
}

fn lattice_output(l: &Loaded, json: bool) -> String {
    let os = mobius_poincare(&l.arr, &l.lattice);
    render(json, lattice_json(&l.arr, &l.lattice), || {
        let rows = l
            .lattice
            .flats()
            .iter()
            .map(|f| {
                vec![
                    f.id.to_string(),
                    f.rank.to_string(),
                    f.mobius.to_string(),
                    if f.dense { "yes" } else { "no" }.to_string(),
                    hset_labels(&l.arr, &f.hset),
                ]
            })
            .collect();
        let mut s = table(&["flat", "rank", "mobius", "dense", "hyperplanes"], rows);
        s.push_str(&format!(
            "\nPoincaré polynomial: {}\n",
            format_poly(&os.poincare)
        ));
        s.push_str(&format!("Betti: {}\n", join(&os.betti)));
        s
    })
}

fn conditions_json(lattice: &Lattice, c: &ConditionReport) -> Value {
    json!({
        "ok": c.ok,
        "checked": c.records.len(),
        "failures": c.failures().map(|r| {
            json!({
                "flat": r.flat,
                "hyperplanes": one_based(&lattice.get(r.flat).hset),
                "residue": r.residue.to_string(),
                "threshold": r.threshold,
            })
        }).collect::<Vec<_>>(),
    })
}

/// Everything `betti` reports.
#[derive(Clone, Debug)]
pub struct BettiRun {
    pub weights: WeightVector,
    /// integer shift applied by `--normalize`
    pub shift: Option<BigInt>,
    pub conditions: ConditionReport,
    /// `None` when `Σλ` is not an integer and no grade was forced
    pub report: Option<ComplexReport>,
}

impl BettiRun {
    pub fn betti(&self, n: usize) -> Vec<usize> {
        self.report
            .as_ref()
            .map_or_else(|| vec![0; n + 1], |r| r.betti.clone())
    }
}

pub fn betti_run(
    arr: &Arrangement,
    lattice: &Lattice,
    weights: WeightVector,
    grade: Option<i64>,
    norm: bool,
    max_degree: Option<i64>,
) -> Result<BettiRun> {
    let weights = weights.for_arrangement(arr)?;
    let (weights, shift) = if norm {
        let n = normalize(lattice, &weights);
        (n.weights, Some(n.shift))
    } else {
        (weights, None)
    };
    let conditions = check_conditions(lattice, &weights);
    let report = match grade.or_else(|| critical_grade(&weights)) {
        Some(q) => {
            check_degree_bound(arr, q, max_degree)?;
            Some(subcomplex_cohomology(arr, lattice, &weights, q)?)
        }
        None => None,
    };
    Ok(BettiRun {
        weights,
        shift,
        conditions,
        report,
    })
}

pub fn betti_json(arr: &Arrangement, lattice: &Lattice, run: &BettiRun) -> Value {
    let report = run.report.as_ref();
    json!({
        "weights": run.weights.to_strings(),
        "total": run.weights.total().to_string(),
        "shift": run.shift.as_ref().map(ToString::to_string),
        "grade": report.map(|r| r.q),
        "conditions": conditions_json(lattice, &run.conditions),
        "dims": report.map(|r| r.dims.clone()),
        "ranks": report.map(|r| r.ranks.clone()),
        "betti": run.betti(arr.nvars()),
        "certified": run.conditions.ok,
    })
}

fn betti_output(l: &Loaded, run: &BettiRun, json: bool) -> String {
    let n = l.arr.nvars();
    let betti = run.betti(n);
    let conditions = &run.conditions;
    render(json, betti_json(&l.arr, &l.lattice, run), || {
        let mut s = format!("weights: {}\n", join(&run.weights.to_strings()));
        if let Some(z) = &run.shift {
            s.push_str(&format!("shift: {z}\n"));
        }
        s.push_str(&format!("Σλ = {}\n", run.weights.total()));
        if conditions.ok {
            s.push_str(&format!(
                "weight conditions: pass ({} edges)\n",
                conditions.records.len()
            ));
        } else {
            s.push_str("weight conditions: FAIL\n");
            for r in conditions.failures() {
                s.push_str(&format!(
                    "  {} residue {} threshold {}\n",
                    hset_labels(&l.arr, &l.lattice.get(r.flat).hset),
                    r.residue,
                    r.threshold
                ));
            }
        }
        match &run.report {
            Some(r) => {
                s.push_str(&format!("grade q = {}\n\n", r.q));
                let rows = (0..=n)
                    .map(|j| {
                        vec![
                            j.to_string(),
                            r.dims[j].to_string(),
                            r.ranks
                                .get(j)
                                .map_or_else(|| "-".into(), ToString::to_string),
                            r.betti[j].to_string(),
                        ]
                    })
                    .collect();
                s.push_str(&table(&["j", "dim", "rank ∇", "betti"], rows));
                s.push('\n');
            }
            None => s.push_str("Σλ is not an integer: every graded piece is acyclic\n"),
        }
        s.push_str(&format!("Betti: {}\n", join(&betti)));
        s.push_str(&format!(
            "certified: {}\n",
            if conditions.ok { "yes" } else { "no" }
        ));
        s
    })
}

fn bs_output(l: &Loaded, f: &Factorization, json: bool) -> String {
    let c = candidates(&l.arr, &l.lattice, f);
    let u = univariate_roots(&l.arr, &l.lattice);
    let case = |c: BoundCase| match c {
        BoundCase::Linears => "linears",
        BoundCase::Origin => "origin",
        BoundCase::General => "general",
    };
    let warnings: Vec<&str> = c
        .warnings
        .iter()
        .map(|w| match w {
            CandidateWarning::NotEssentialCenter => {
                "arrangement is not essential; the top edge used the general bound"
            }
        })
        .collect();
    let value = json!({
        "factorization": f.blocks().iter().map(|b| one_based(b)).collect::<Vec<_>>(),
        "components": c.components.iter().map(|k| json!({
            "flat": k.flat,
            "hyperplanes": one_based(&l.lattice.get(k.flat).hset),
            "coeffs": k.coeffs.iter().map(|(b, d)| (format!("s{}", b + 1), json!(d))).collect::<serde_json::Map<_, _>>(),
            "rank": k.rank,
            "v": k.v,
            "q_bound": k.q_bound,
            "case": case(k.case),
            "equation": k.equation(),
        })).collect::<Vec<_>>(),
        "warnings": warnings,
        "univariate": {
            "roots": u.roots.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "lower": u.lower.to_string(),
            "inside_interval": u.inside_interval,
        },
    });
    render(json, value, || {
        let rows = c
            .components
            .iter()
            .map(|k| {
                vec![
                    hset_labels(&l.arr, &l.lattice.get(k.flat).hset),
                    k.rank.to_string(),
                    format!("{}/{}", k.v, k.q_bound),
                    case(k.case).to_string(),
                    format!("{} = 0", k.equation()),
                ]
            })
            .collect();
        let mut s = table(&["edge", "rank", "v/Q", "bound", "component"], rows);
        for w in &warnings {
            s.push_str(&format!("warning: {w}\n"));
        }
        s.push_str(&format!("\nroots of b_f candidates: {}\n", join(&u.roots)));
        match u.inside_interval {
            Some(true) => s.push_str(&format!("all inside ({}, 0)\n", u.lower)),
            Some(false) => s.push_str(&format!("NOT all inside ({}, 0)\n", u.lower)),
            None => s.push_str("smooth hypersurface: no interval claim\n"),
        }
        s
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("-2..4"), Ok((-2, 4)));
        assert_eq!(parse_range("3..3"), Ok((3, 3)));
        assert!(parse_range("4..2").is_err());
        assert!(parse_range("4").is_err());
    }

    #[test]
    fn poincare_format() {
        assert_eq!(format_poly(&[1, 2, 1]), "1 + 2t + t^2");
        assert_eq!(format_poly(&[1, 3, 2]), "1 + 3t + 2t^2");
        assert_eq!(format_poly(&[]), "0");
    }

    #[test]
    fn usage_errors_exit_one() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(dispatch(["logderham", "nonsense"], &mut out, &mut err), 1);
        assert_eq!(dispatch(["logderham", "--help"], &mut out, &mut err), 0);
        assert!(!out.is_empty());
    }
}
