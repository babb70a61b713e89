//! Command-line front end: thin wrappers over the library.
//!
//! Exit codes: 0 success or positive verdict, 1 semantic negative (a failed
//! verification, an inequivalence), 2 invalid input, 3 nondegeneracy
//! violated, 4 solver failure, 5 undecided.

use clap::{Parser, Subcommand, ValueEnum};
use crnf::error::Error;
use crnf::fischer::fischer_decompose;
use crnf::io::{
    self, poly_to_file, rational_string, read_map, read_poly, read_surface, report_to_file,
    to_json_string, write_surface, PolyFile, ScalarRecord,
};
use crnf::map::apply_map;
use crnf::normalize::normalize;
use crnf::surface::surface_invariants;
use crnf::verify::{equiv_check, verify_normal_form, EquivMode, EquivVerdict};
use crnf::weights::PseudoWeightTable;
use serde::Serialize;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "crnf",
    version,
    about = "Exact normal forms for real surfaces in C^2 near a degenerate CR singularity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Tangent,
    Linear,
}

impl From<ModeArg> for EquivMode {
    fn from(mode: ModeArg) -> EquivMode {
        match mode {
            ModeArg::Tangent => EquivMode::Tangent,
            ModeArg::Linear => EquivMode::Linear,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print a surface's invariants and nondegeneracy verdict.
    Analyze {
        /// Surface file (cr-surface/1).
        surface: PathBuf,
        /// Emit machine-readable output.
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
    },
    /// Compute the normal form, the transformation, and a report.
    Normalize {
        /// Surface file (cr-surface/1).
        surface: PathBuf,
        /// Truncate the input to this order first.
        #[arg(long)]
        degree: Option<u32>,
        /// Output prefix; writes <prefix>.normal.json, <prefix>.map.json,
        /// <prefix>.report.json (default: the input path minus extension).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the normal-form conditions degree by degree.
    Verify {
        /// Surface file (cr-surface/1).
        surface: PathBuf,
        /// Emit machine-readable output.
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
    },
    /// Transform a surface by a tangent-to-identity map.
    ApplyMap {
        /// Surface file (cr-surface/1).
        surface: PathBuf,
        /// Map file (cr-map/1).
        map: PathBuf,
        /// Write the transformed surface here (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide formal equivalence of two surfaces.
    Equiv {
        /// First surface file.
        a: PathBuf,
        /// Second surface file.
        b: PathBuf,
        /// Group of transformations to quotient by.
        #[arg(long, value_enum, default_value = "tangent")]
        mode: ModeArg,
    },
    /// Fischer-divide a polynomial by a homogeneous divisor.
    Fischer {
        /// Divisor file (cr-poly/1).
        model: PathBuf,
        /// Dividend file (cr-poly/1).
        poly: PathBuf,
        /// Emit machine-readable output.
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
    },
    /// Print the pseudo-weight of z^m zbar^n.
    Weight {
        /// Singularity degree.
        #[arg(long)]
        k0: u32,
        /// Leading invariant.
        #[arg(long)]
        s: u32,
        /// z exponent.
        m: u32,
        /// zbar exponent.
        n: u32,
    },
}

fn exit_code(error: &Error) -> i32 {
    match error {
        Error::NondegeneracyViolated(_) => 3,
        Error::DegreeSystemInconsistent { .. }
        | Error::DegreeSystemUnderdetermined { .. }
        | Error::ResonanceNonAffine { .. }
        | Error::ResonanceSingular { .. }
        | Error::LowerDegreeDisturbed { .. }
        | Error::ModelNotPreserved(_) => 4,
        _ => 2,
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli.command) {
        Ok(code) => code,
        Err(error) => {
            eprintln!("error: {}", error);
            exit_code(&error)
        }
    };
    std::process::exit(code);
}

fn run(command: Command) -> crnf::Result<i32> {
    match command {
        Command::Analyze { surface, format } => cmd_analyze(&surface, format),
        Command::Normalize {
            surface,
            degree,
            out,
        } => cmd_normalize(&surface, degree, out),
        Command::Verify { surface, format } => cmd_verify(&surface, format),
        Command::ApplyMap { surface, map, out } => cmd_apply_map(&surface, &map, out),
        Command::Equiv { a, b, mode } => cmd_equiv(&a, &b, mode),
        Command::Fischer {
            model,
            poly,
            format,
        } => cmd_fischer(&model, &poly, format),
        Command::Weight { k0, s, m, n } => cmd_weight(k0, s, m, n),
    }
}

#[derive(Serialize)]
struct AnalyzeOutput {
    k0: u32,
    degree: u32,
    s: Option<u32>,
    alpha: ScalarRecord,
    remainder: PolyFile,
    nondegenerate: bool,
    failures: Vec<&'static str>,
}

fn cmd_analyze(path: &Path, format: Option<OutputFormat>) -> crnf::Result<i32> {
    let surface = read_surface(path)?;
    let inv = surface_invariants(&surface);
    let failures: Vec<&'static str> = inv.failures.iter().map(|f| f.tag()).collect();
    if format.is_some() {
        let out = AnalyzeOutput {
            k0: surface.k0(),
            degree: surface.order(),
            s: inv.s,
            alpha: ScalarRecord::from_scalar(&inv.alpha),
            remainder: poly_to_file(&inv.alpha_remainder),
            nondegenerate: inv.nondegenerate,
            failures,
        };
        print!("{}", to_json_string(&out)?);
    } else {
        println!("k0 = {}", surface.k0());
        println!("degree = {}", surface.order());
        match inv.s {
            Some(s) => println!("s = {}", s),
            None => println!("s = none within truncation"),
        }
        println!("alpha = {}", inv.alpha);
        println!("R = {}", inv.alpha_remainder);
        let clauses: [(&str, &str); 4] = [
            ("zbar-pure coefficient within truncation", "NO_S_WITHIN_TRUNCATION"),
            ("alpha nonzero", "ALPHA_ZERO"),
            ("alpha differs from s", "ALPHA_EQUALS_S"),
            ("alpha^2 differs from s", "ALPHA_SQUARED_EQUALS_S"),
        ];
        for (label, tag) in clauses {
            if failures.contains(&tag) {
                println!("{}: FAIL ({})", label, tag);
            } else {
                println!("{}: PASS", label);
            }
        }
        println!(
            "nondegenerate: {}",
            if inv.nondegenerate { "yes" } else { "no" }
        );
    }
    Ok(if inv.nondegenerate { 0 } else { 3 })
}

fn cmd_normalize(path: &Path, degree: Option<u32>, out: Option<PathBuf>) -> crnf::Result<i32> {
    let mut surface = read_surface(path)?;
    if let Some(degree) = degree {
        if degree < surface.k0() + 1 {
            return Err(Error::InvalidInput(format!(
                "--degree must be at least k0 + 1 = {}, got {}",
                surface.k0() + 1,
                degree
            )));
        }
        if degree > surface.order() {
            return Err(Error::InvalidInput(format!(
                "--degree {} exceeds the truncation order {} stored in the file",
                degree,
                surface.order()
            )));
        }
        surface = surface.truncated(degree)?;
    }
    let result = normalize(&surface)?;
    let prefix = out.unwrap_or_else(|| path.with_extension(""));
    let normal_path = path_with_suffix(&prefix, "normal.json");
    let map_path = path_with_suffix(&prefix, "map.json");
    let report_path = path_with_suffix(&prefix, "report.json");
    write_surface(&normal_path, &result.normal_form)?;
    io::write_map(&map_path, &result.map)?;
    std::fs::write(
        &report_path,
        to_json_string(&report_to_file(&result.report, 0))?,
    )?;
    println!("s = {}", result.report.s);
    println!("alpha = {}", result.report.alpha);
    println!(
        "resonance events: {}",
        result
            .report
            .resonances
            .iter()
            .map(|r| format!("{}({})", r.degree, r.case))
            .collect::<Vec<_>>()
            .join(", ")
    );
    if !result.report.boundaries.is_empty() {
        println!(
            "boundary pins: {}",
            result
                .report
                .boundaries
                .iter()
                .map(|b| {
                    let state = if b.inert {
                        "inert"
                    } else if b.pinned {
                        "pinned"
                    } else {
                        "unspent"
                    };
                    format!("{}{} from degree {} ({})", b.case, b.t, b.first_degree, state)
                })
                .collect::<Vec<_>>()
                .join(", ")
        );
    }
    println!("wrote {}", normal_path.display());
    println!("wrote {}", map_path.display());
    println!("wrote {}", report_path.display());
    Ok(0)
}

fn path_with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    PathBuf::from(format!("{}.{}", prefix.display(), suffix))
}

#[derive(Serialize)]
struct VerifyDegreeOutput {
    degree: u32,
    pass: bool,
    residual: Vec<ScalarRecord>,
}

#[derive(Serialize)]
struct VerifyTargetOutput {
    degree: u32,
    coefficient: ScalarRecord,
    pass: bool,
}

#[derive(Serialize)]
struct VerifyOutput {
    per_degree: Vec<VerifyDegreeOutput>,
    resonance_targets: Option<Vec<VerifyTargetOutput>>,
    overall: bool,
}

fn cmd_verify(path: &Path, format: Option<OutputFormat>) -> crnf::Result<i32> {
    let surface = read_surface(path)?;
    let report = verify_normal_form(&surface)?;
    if format.is_some() {
        let out = VerifyOutput {
            per_degree: report
                .per_degree
                .iter()
                .map(|d| VerifyDegreeOutput {
                    degree: d.degree,
                    pass: d.pass,
                    residual: d
                        .residual
                        .values()
                        .iter()
                        .map(ScalarRecord::from_scalar)
                        .collect(),
                })
                .collect(),
            resonance_targets: report.resonance_targets.as_ref().map(|targets| {
                targets
                    .iter()
                    .map(|t| VerifyTargetOutput {
                        degree: t.degree,
                        coefficient: ScalarRecord::from_scalar(&t.coefficient),
                        pass: t.pass,
                    })
                    .collect()
            }),
            overall: report.overall,
        };
        print!("{}", to_json_string(&out)?);
    } else {
        for check in &report.per_degree {
            if check.pass {
                println!("degree {}: PASS", check.degree);
            } else {
                let values = check
                    .residual
                    .values()
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(", ");
                println!("degree {}: FAIL (residual [{}])", check.degree, values);
            }
        }
        match &report.resonance_targets {
            None => println!("resonance targets: not applicable (no zbar-pure coefficient)"),
            Some(targets) => {
                for target in targets {
                    if target.pass {
                        println!("target a_(0,{}): PASS", target.degree);
                    } else {
                        println!(
                            "target a_(0,{}): FAIL (= {})",
                            target.degree, target.coefficient
                        );
                    }
                }
            }
        }
        println!("overall: {}", if report.overall { "PASS" } else { "FAIL" });
    }
    Ok(if report.overall { 0 } else { 1 })
}

fn cmd_apply_map(surface_path: &Path, map_path: &Path, out: Option<PathBuf>) -> crnf::Result<i32> {
    let surface = read_surface(surface_path)?;
    let map = read_map(map_path)?;
    let image = apply_map(&map, &surface)?;
    match out {
        Some(path) => {
            write_surface(&path, &image)?;
            println!("wrote {}", path.display());
        }
        None => print!("{}", to_json_string(&io::surface_to_file(&image))?),
    }
    Ok(0)
}

fn cmd_equiv(a: &Path, b: &Path, mode: ModeArg) -> crnf::Result<i32> {
    let sa = read_surface(a)?;
    let sb = read_surface(b)?;
    match equiv_check(&sa, &sb, mode.into())? {
        EquivVerdict::Equivalent { certificate } => {
            println!("equivalent: {}", certificate);
            Ok(0)
        }
        EquivVerdict::Inequivalent { certificate } => {
            println!("inequivalent: {}", certificate);
            Ok(1)
        }
        EquivVerdict::Undecided { certificate } => {
            println!("undecided: {}", certificate);
            Ok(5)
        }
    }
}

#[derive(Serialize)]
struct FischerOutput {
    quotient: PolyFile,
    remainder: PolyFile,
}

fn cmd_fischer(model_path: &Path, poly_path: &Path, format: Option<OutputFormat>) -> crnf::Result<i32> {
    let divisor = read_poly(model_path)?;
    let dividend = read_poly(poly_path)?;
    let split = fischer_decompose(&divisor, &dividend)?;
    if format.is_some() {
        let out = FischerOutput {
            quotient: poly_to_file(&split.quotient),
            remainder: poly_to_file(&split.remainder),
        };
        print!("{}", to_json_string(&out)?);
    } else {
        println!("S = {}", split.quotient);
        println!("R = {}", split.remainder);
    }
    Ok(0)
}

fn cmd_weight(k0: u32, s: u32, m: u32, n: u32) -> crnf::Result<i32> {
    let table = PseudoWeightTable::new(k0, s)?;
    let weight = table.weight(m, n)?;
    println!("{}", rational_string(&weight));
    Ok(0)
}
