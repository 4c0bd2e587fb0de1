use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sumfree::gf2n::{Fe, FieldSpec};
use sumfree::ledger;
use sumfree::pointeval::{fk_eval, theta_eval};
use sumfree::subcalc::gamma;
use sumfree::sympoly::{lambda_set, theta_sym};
use sumfree::zerosum::{
    self, census, check_all_criteria, inverse_sum, sf_table, zk_count, PolySelector,
    SearchStrategy,
};
use sumfree::{Error, Subspace};

#[derive(Parser)]
#[command(name = "sumfree", about = "zero-sum subspace toolkit for binary fields", version)]
struct Cli {
    /// worker threads for sweeps and exhaustive searches (default: all cores)
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolyArg {
    Fk,
    Theta,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Random,
    Exhaustive,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum FormatArg {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct FieldArgs {
    /// extension degree n of F_{2^n}
    n: u32,
    /// modulus polynomial as hex (default: lexicographically first minimal-weight irreducible)
    #[arg(long)]
    modulus: Option<String>,
}

impl FieldArgs {
    fn build(&self) -> Result<FieldSpec, Error> {
        match &self.modulus {
            Some(h) => {
                let m = u128::from_str_radix(h, 16).map_err(|_| Error::BadHex(h.clone()))?;
                FieldSpec::new(self.n, m)
            }
            None => FieldSpec::with_default_modulus(self.n),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the theta criterion polynomial for dimension k
    Theta {
        k: u32,
        /// print one monomial per line as space-separated exponents
        #[arg(long)]
        dump: bool,
    },
    /// List the 2-adic partitions of 2^{k-1} with at most k parts
    Partitions { k: u32 },
    /// Run all three zero-sum criteria on a basis read from a matrix file (or stdin)
    CheckSubspace {
        /// matrix file; `-` or absent reads stdin
        #[arg(long)]
        file: Option<PathBuf>,
        /// override the n recorded in the file header
        #[arg(long)]
        n: Option<u32>,
        /// override the modulus recorded in the file header (hex)
        #[arg(long)]
        modulus: Option<String>,
    },
    /// Search for a k-dimensional zero-sum subspace of F_{2^n}
    Search {
        #[command(flatten)]
        field: FieldArgs,
        k: u32,
        #[arg(long, value_enum, default_value = "random")]
        strategy: StrategyArg,
        /// number of random trials before giving up
        #[arg(long, default_value_t = 1 << 20)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// append the witness to this JSON-lines store
        #[arg(long)]
        store: Option<PathBuf>,
    },
    /// Sweep all tuples in F_{2^n}^k and count zeros of the selected polynomial
    Census {
        #[command(flatten)]
        field: FieldArgs,
        k: u32,
        #[arg(long, value_enum)]
        poly: PolyArg,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
    },
    /// Count k-dimensional zero-sum subspaces of F_{2^n} exhaustively
    Zk {
        #[command(flatten)]
        field: FieldArgs,
        k: u32,
    },
    /// Certify the full sum-free table of F_{2^n}
    SfTable {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
    /// Derive the K_n / SF_n classification with justification chains
    Derive {
        n: u32,
        /// JSON-lines witness store to import (records are re-verified)
        #[arg(long)]
        witness_store: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
    /// Print the irreducibility threshold bounds for dimension k
    Thresholds { k: u32 },
    /// Re-verify the shipped example subspaces for n = 17 and n = 19
    VerifyPaperExamples {
        /// directory with the example matrix files (or SUMFREE_DATA_DIR)
        #[arg(long)]
        data_dir: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // let --help and --version through as success
            if e.use_stderr() {
                eprintln!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::LimitExceeded(_) | Error::SplittingFieldTooLarge(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    if let Some(w) = cli.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
    }
    match cli.command {
        Command::Theta { k, dump } => {
            let t = theta_sym(k)?;
            if dump {
                print!("{}", t.dump());
            } else {
                println!("{t}");
            }
            eprintln!("theta_{k}: {} terms, degree {}", t.num_terms(), t.degree());
        }
        Command::Partitions { k } => {
            for p in lambda_set(k) {
                let parts: Vec<String> = p.parts().iter().map(|x| x.to_string()).collect();
                println!("({})", parts.join(","));
            }
        }
        Command::CheckSubspace { file, n, modulus } => {
            let text = match file.as_deref() {
                Some(p) if p != Path::new("-") => std::fs::read_to_string(p)?,
                _ => {
                    let mut s = String::new();
                    std::io::stdin().read_to_string(&mut s)?;
                    s
                }
            };
            let parsed = parse_matrix(&text)?;
            let n = n.or(parsed.n).ok_or_else(|| {
                Error::InvalidInput("n not given and not present in the file header".into())
            })?;
            let modulus = modulus.or_else(|| parsed.modulus.clone());
            let f = FieldArgs { n, modulus }.build()?;
            eprintln!("field: n = {}, modulus = {}", f.n(), f.modulus_hex());
            let e = Subspace::from_span(&parsed.rows_as_fe(&f)?, &f);
            if e.dim() != parsed.rows.len() {
                return Err(Error::InvalidInput(format!(
                    "matrix rows are dependent: rank {} of {}",
                    e.dim(),
                    parsed.rows.len()
                )));
            }
            let report = check_all_criteria(&e)?;
            println!("dim            : {}", e.dim());
            println!("inverse sum    : {}", inverse_sum(&e)?.to_hex());
            println!("zero_sum       : {}", report.zero_sum);
            println!("fk_zero        : {}", report.fk_zero);
            println!("theta_zero     : {}", report.theta_zero);
            if !report.agree() {
                println!("verdict        : CRITERIA DISAGREE");
                return Ok(ExitCode::from(3));
            }
            println!(
                "verdict        : {}",
                if report.all_zero_sum() { "zero-sum" } else { "not zero-sum" }
            );
            return Ok(ExitCode::from(if report.all_zero_sum() { 0 } else { 3 }));
        }
        Command::Search { field, k, strategy, budget, seed, store } => {
            let f = field.build()?;
            eprintln!("field: n = {}, modulus = {}, seed = {seed}", f.n(), f.modulus_hex());
            let strategy = match strategy {
                StrategyArg::Random => SearchStrategy::Random,
                StrategyArg::Exhaustive => SearchStrategy::Exhaustive,
            };
            match zerosum::find_witness(f.n(), k, strategy, budget, seed, &f)? {
                Some(w) => {
                    println!("{}", serde_json::to_string_pretty(&w)?);
                    if let Some(p) = store {
                        zerosum::append_witness(&p, &w)?;
                    }
                }
                None => {
                    println!("no witness found within budget");
                    return Ok(ExitCode::from(3));
                }
            }
        }
        Command::Census { field, k, poly, format } => {
            let f = field.build()?;
            eprintln!("field: n = {}, modulus = {}", f.n(), f.modulus_hex());
            let selector = match poly {
                PolyArg::Fk => PolySelector::Fk,
                PolyArg::Theta => PolySelector::Theta,
            };
            let r = census(selector, f.n(), k, &f)?;
            match format {
                FormatArg::Json => println!("{}", serde_json::to_string_pretty(&r)?),
                FormatArg::Csv => {
                    println!("n,k,poly,zeros_off_delta,zeros_on_delta,swept");
                    println!("{}", r.csv_row());
                }
                FormatArg::Text => {
                    println!("swept {} tuples of F_2^{}^{}", r.swept, f.n(), k);
                    println!("zeros off the determinant variety: {}", r.zeros_off_delta);
                    match r.zeros_on_delta {
                        Some(v) => println!("zeros on the determinant variety:  {v}"),
                        None => println!("zeros on the determinant variety:  not computed"),
                    }
                }
            }
        }
        Command::Zk { field, k } => {
            let f = field.build()?;
            eprintln!("field: n = {}, modulus = {}", f.n(), f.modulus_hex());
            println!("{}", zk_count(f.n(), k, &f)?);
        }
        Command::SfTable { field, seed, format } => {
            let f = field.build()?;
            eprintln!("field: n = {}, modulus = {}, seed = {seed}", f.n(), f.modulus_hex());
            let t = sf_table(f.n(), &f, seed)?;
            match format {
                FormatArg::Json => println!("{}", serde_json::to_string_pretty(&t)?),
                _ => {
                    let sf: Vec<String> = t.sf_set().iter().map(|k| k.to_string()).collect();
                    println!("SF_{} = {{{}}}", t.n, sf.join(", "));
                    for e in &t.entries {
                        let how = match &e.method {
                            zerosum::SfMethod::Witness(w) => {
                                format!("witness [{}]", w.basis.join(", "))
                            }
                            zerosum::SfMethod::Exhausted { subspaces } => {
                                format!("exhausted {subspaces} subspaces")
                            }
                        };
                        println!(
                            "  k = {:2}  {}  {how}",
                            e.k,
                            if e.sum_free { "sum-free" } else { "zero-sum" }
                        );
                    }
                }
            }
        }
        Command::Derive { n, witness_store, format } => {
            let witnesses = match witness_store {
                Some(p) => zerosum::load_witnesses(&p)?,
                None => Vec::new(),
            };
            let l = ledger::derive_with_witnesses(n, &witnesses)?;
            match format {
                FormatArg::Csv => print!("{}", l.csv()),
                _ => print!("{}", l.report_text()),
            }
            if !l.open_set().is_empty() {
                eprintln!("open cases: {:?}", l.open_set());
            }
        }
        Command::Thresholds { k } => {
            if k < 3 {
                return Err(Error::InvalidInput("thresholds need k >= 3".into()));
            }
            let r = ledger::threshold_exact(k);
            println!("exact bound          : {:.3}", r.exact_bound);
            println!("simplified bound     : {:.3}", r.simplified_bound);
            println!("quadratic root bound : {:.3}", r.quadratic_root_bound);
            println!("lemma 5.2 root       : {:.4}", ledger::lemma52_root());
        }
        Command::VerifyPaperExamples { data_dir } => {
            let dir = data_dir
                .or_else(|| std::env::var_os("SUMFREE_DATA_DIR").map(PathBuf::from))
                .unwrap_or_else(default_data_dir);
            for n in [17u32, 19] {
                if !verify_example(&dir, n)? {
                    return Ok(ExitCode::from(3));
                }
            }
            println!("all example checks passed");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn default_data_dir() -> PathBuf {
    // installed layout first, then the source tree
    let exe_relative = std::env::current_exe()
        .ok()
        .and_then(|p| p.parent().map(|d| d.join("data")));
    match exe_relative {
        Some(d) if d.is_dir() => d,
        _ => PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data"),
    }
}

struct MatrixFile {
    n: Option<u32>,
    modulus: Option<String>,
    rows: Vec<u64>,
}

impl MatrixFile {
    fn rows_as_fe(&self, f: &FieldSpec) -> Result<Vec<Fe>, Error> {
        self.rows
            .iter()
            .map(|&r| {
                if r & !f.mask() != 0 {
                    Err(Error::InvalidInput("matrix row wider than the field".into()))
                } else {
                    Ok(Fe(r))
                }
            })
            .collect()
    }
}

/// Rows of 0/1 entries, leftmost column = coefficient of X^0. `#` lines
/// are comments; `# n = ...` and `# modulus = ...` are recognized headers.
fn parse_matrix(text: &str) -> Result<MatrixFile, Error> {
    let mut out = MatrixFile { n: None, modulus: None, rows: Vec::new() };
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((key, value)) = rest.split_once('=') {
                match key.trim() {
                    "n" => {
                        out.n = Some(value.trim().parse().map_err(|_| {
                            Error::InvalidInput(format!("bad n header: {line}"))
                        })?)
                    }
                    "modulus" => out.modulus = Some(value.trim().to_string()),
                    _ => {}
                }
            }
            continue;
        }
        let mut row = 0u64;
        let mut width = 0;
        for tok in line.split_whitespace() {
            match tok {
                "0" => {}
                "1" => row |= 1 << width,
                _ => {
                    return Err(Error::InvalidInput(format!("bad matrix entry {tok:?}")));
                }
            }
            width += 1;
            if width > 64 {
                return Err(Error::InvalidInput("matrix row wider than 64 columns".into()));
            }
        }
        out.rows.push(row);
    }
    if out.rows.is_empty() {
        return Err(Error::InvalidInput("no matrix rows found".into()));
    }
    Ok(out)
}

fn verify_example(dir: &Path, n: u32) -> Result<bool, Error> {
    let u_file = dir.join(format!("example_n{n}_u.txt"));
    let v_file = dir.join(format!("example_n{n}_v.txt"));
    let u = parse_matrix(&std::fs::read_to_string(&u_file)?)?;
    let v = parse_matrix(&std::fs::read_to_string(&v_file)?)?;
    let f = FieldArgs { n, modulus: u.modulus.clone() }.build()?;
    eprintln!("field: n = {}, modulus = {}", f.n(), f.modulus_hex());

    let u_rows = u.rows_as_fe(&f)?;
    let v_rows = v.rows_as_fe(&f)?;
    let e = Subspace::from_span(&u_rows, &f);
    let mut ok = true;
    let mut check = |name: &str, good: bool| {
        println!("n = {n}: {name}: {}", if good { "pass" } else { "FAIL" });
        ok &= good;
    };
    check("u-matrix has rank 5", e.dim() == 5);
    check("inverse_sum(E) = 0", inverse_sum(&e)?.is_zero());
    check("F_5(u1..u5) = 0", fk_eval(&u_rows, &f)?.is_zero());
    let v_space = Subspace::from_span(&v_rows, &f);
    check("gamma(E) = rowspace(v)", gamma(&e) == v_space);
    check("Theta_5(v1..v5) = 0", theta_eval(&v_rows, &f)?.is_zero());
    Ok(ok)
}
