use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hydra::free_conj::conjugate_in_f;
use hydra::hnn::{collins_decide, default_search_bound};
use hydra::oracle::oracle_conjugate;
use hydra::twisted::{solve_0_twisted, solve_h_twisted, solve_i_twisted, Outcome, TwistedSolution};
use hydra::{
    decide_conjugacy, decompose, normal_form, parse_word, parse_word_rank, phi, BoundPolicy, Certificate, Word,
};
use hydra_cli::bench::{run_cl_experiment, run_growth, run_rt_experiment, write_cl_csv, write_csv};
use serde::Serialize;
use serde_json::json;

const CONJUGATE: u8 = 0;
const NOT_CONJUGATE: u8 = 1;
const INCONCLUSIVE: u8 = 3;

#[derive(Parser)]
#[command(name = "hydra", version, about = "Conjugacy in hydra groups")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print φ^r(WORD).
    Phi {
        #[arg(long)]
        rank: u32,
        #[arg(long, allow_negative_numbers = true)]
        power: i64,
        word: String,
    },
    /// CSV of |φ^r(a_i)| against the binomial sums.
    PhiGrowth {
        #[arg(long)]
        rank: u32,
        #[arg(long)]
        max_power: i64,
    },
    /// Rank-i piece decomposition, one piece per line.
    Pieces {
        #[arg(long)]
        rank: u32,
        /// Decompose at this rank instead of the rank of the word.
        #[arg(long)]
        at: Option<u32>,
        word: String,
    },
    /// Normal form ũ | s^p.
    Nf {
        #[arg(long)]
        rank: u32,
        #[arg(long)]
        json: bool,
        word: String,
    },
    /// Exit 0 if the words are equal in H_m, else 1.
    Eq {
        #[arg(long)]
        rank: u32,
        word1: String,
        word2: String,
    },
    /// Conjugacy in the free group.
    Fconj { word1: String, word2: String },
    /// Run one twisted-conjugacy solver.
    Twisted {
        solver: Solver,
        #[arg(long)]
        rank: u32,
        #[arg(short, allow_negative_numbers = true)]
        p: i64,
        u_tilde: String,
        v_tilde: String,
        #[command(flatten)]
        policy: PolicyArgs,
    },
    /// Decide conjugacy in H_m.
    Conj(ConjArgs),
    /// Brute-force deciders.
    Oracle {
        #[command(subcommand)]
        cmd: OracleCmd,
    },
    /// Growth and distortion tables.
    Growth {
        #[arg(long)]
        rank: u32,
        #[arg(long, default_value_t = 25)]
        max_power: i64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the distortion family here.
        #[arg(long)]
        distortion_out: Option<PathBuf>,
    },
    /// Witness length against input size on constructed pairs.
    ClBench(BenchArgs),
    /// Median runtime against input size.
    RtBench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Solver {
    Zero,
    I,
    H,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum ConjMethod {
    Engine,
    Hnn,
}

#[derive(Args)]
struct PolicyArgs {
    #[arg(long)]
    k_mult: Option<f64>,
    #[arg(long)]
    qp_mult: Option<f64>,
    #[arg(long)]
    r_slack: Option<u32>,
    #[arg(long)]
    cap: Option<u64>,
}

impl PolicyArgs {
    fn policy(&self) -> Result<BoundPolicy> {
        let mut p = BoundPolicy::default();
        if let Some(k) = self.k_mult {
            p.k_multiplier = k;
        }
        if let Some(q) = self.qp_mult {
            p.qp_multiplier = q;
        }
        if let Some(r) = self.r_slack {
            p.r_slack = r;
        }
        p.hard_cap = self.cap;
        p.validate()?;
        Ok(p)
    }
}

#[derive(Args)]
struct ConjArgs {
    #[arg(long)]
    rank: u32,
    #[arg(long)]
    policy_file: Option<PathBuf>,
    #[arg(long)]
    json: bool,
    /// Also print the uncompressed witness.
    #[arg(long)]
    raw: bool,
    #[arg(long, value_enum, default_value_t = ConjMethod::Engine)]
    method: ConjMethod,
    /// Tab-separated word pairs, one per line; prints one JSON certificate per line.
    #[arg(long, conflicts_with_all = ["word1", "word2"])]
    batch: Option<PathBuf>,
    #[arg(required_unless_present = "batch")]
    word1: Option<String>,
    #[arg(required_unless_present = "batch")]
    word2: Option<String>,
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Shortest conjugator of length at most --cap, by enumeration.
    Conj {
        #[arg(long)]
        rank: u32,
        #[arg(long)]
        cap: usize,
        word1: String,
        word2: String,
    },
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 3)]
    rank: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    samples: Option<usize>,
    /// Comma-separated input sizes.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct PhiGrowthRow {
    i: u32,
    r: i64,
    exact_length: u64,
    binomial_length: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn word(src: &str, m: u32) -> Result<Word> {
    parse_word_rank(src, m).with_context(|| format!("reading {src:?}"))
}

fn a_word(src: &str, m: u32) -> Result<Word> {
    let w = word(src, m)?;
    if w.has_s() {
        bail!("{src:?} must not contain s");
    }
    Ok(w)
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

fn run(cmd: Cmd) -> Result<u8> {
    match cmd {
        Cmd::Phi { rank, power, word: src } => {
            println!("{}", phi(&a_word(&src, rank)?, power));
        }
        Cmd::PhiGrowth { rank, max_power } => {
            let i_set: Vec<u32> = (1..=rank).collect();
            let rows: Vec<PhiGrowthRow> = run_growth(rank, &i_set, max_power)?
                .growth
                .into_iter()
                .map(|g| PhiGrowthRow { i: g.i, r: g.r, exact_length: g.exact_length, binomial_length: g.binomial_length })
                .collect();
            write_csv(io::stdout().lock(), &rows)?;
        }
        Cmd::Pieces { rank, at, word: src } => {
            let w = a_word(&src, rank)?;
            let i = at.unwrap_or_else(|| hydra::rank(&w));
            let d = decompose(&w, i)?;
            for (k, p) in d.pieces.iter().enumerate() {
                println!("{}\t{}\t{}", p.ptype, p.rank, d.piece_word(k));
            }
        }
        Cmd::Nf { rank, json, word: src } => {
            let h = normal_form(&word(&src, rank)?);
            if json {
                println!("{}", json!({"u_tilde": h.u_tilde.to_string(), "s_exp": h.s_exp}));
            } else {
                println!("{h}");
            }
        }
        Cmd::Eq { rank, word1, word2 } => {
            let equal = normal_form(&word(&word1, rank)?) == normal_form(&word(&word2, rank)?);
            println!("{}", if equal { "equal" } else { "not equal" });
            return Ok(if equal { CONJUGATE } else { NOT_CONJUGATE });
        }
        Cmd::Fconj { word1, word2 } => {
            let (u, v) = (parse_word(&word1)?, parse_word(&word2)?);
            if u.has_s() || v.has_s() {
                bail!("free-group words must not contain s");
            }
            return Ok(match conjugate_in_f(&u.reduced(), &v.reduced()) {
                Some(w) => {
                    println!("{w}");
                    CONJUGATE
                }
                None => {
                    println!("not conjugate");
                    NOT_CONJUGATE
                }
            });
        }
        Cmd::Twisted { solver, rank, p, u_tilde, v_tilde, policy } => {
            let (u, v) = (a_word(&u_tilde, rank)?.reduced(), a_word(&v_tilde, rank)?.reduced());
            let policy = policy.policy()?;
            let outcome = match solver {
                Solver::Zero => {
                    if p != 0 {
                        bail!("the zero solver needs -p 0");
                    }
                    solve_0_twisted(&u, &v, &policy)
                }
                Solver::I => solve_i_twisted(&u, &v, p)?.map_or(Outcome::Absent, Outcome::Found),
                Solver::H => solve_h_twisted(&u, &v, p, rank, &policy)?,
            };
            println!("{}", twisted_json(&outcome));
            return Ok(match outcome {
                Outcome::Found(_) => CONJUGATE,
                Outcome::Absent => NOT_CONJUGATE,
                Outcome::Inconclusive => INCONCLUSIVE,
            });
        }
        Cmd::Conj(args) => return conj(args),
        Cmd::Oracle { cmd: OracleCmd::Conj { rank, cap, word1, word2 } } => {
            let (u, v) = (normal_form(&word(&word1, rank)?), normal_form(&word(&word2, rank)?));
            return Ok(match oracle_conjugate(&u, &v, rank, cap) {
                Some(w) => {
                    println!("{w}");
                    CONJUGATE
                }
                None => {
                    println!("none up to length {cap}");
                    NOT_CONJUGATE
                }
            });
        }
        Cmd::Growth { rank, max_power, out, distortion_out } => {
            let i_set: Vec<u32> = (1..=rank).collect();
            let data = run_growth(rank, &i_set, max_power)?;
            write_csv(output(out.as_deref())?, &data.growth)?;
            if let Some(p) = distortion_out {
                write_csv(output(Some(&p))?, &data.distortion)?;
            }
        }
        Cmd::ClBench(b) => {
            let n_set = if b.n.is_empty() { vec![10, 20, 40, 80] } else { b.n };
            let data = run_cl_experiment(b.rank, &n_set, b.samples.unwrap_or(50), b.seed)?;
            write_cl_csv(output(b.out.as_deref())?, &data)?;
        }
        Cmd::RtBench(b) => {
            let n_set = if b.n.is_empty() { vec![8, 16, 32, 64] } else { b.n };
            let (rows, slope) = run_rt_experiment(b.rank, &n_set, b.samples.unwrap_or(30), b.seed)?;
            let mut out = output(b.out.as_deref())?;
            write_csv(&mut out, &rows)?;
            writeln!(out, "# summary,runtime_loglog_slope={slope:.2},seed={}", b.seed)?;
        }
    }
    Ok(CONJUGATE)
}

fn twisted_json(o: &Outcome) -> serde_json::Value {
    match o {
        Outcome::Found(TwistedSolution { r, w_tilde, method, .. }) => json!({
            "found": true, "r": r, "w_tilde": w_tilde.to_string(), "method": method.to_string(), "inconclusive": false
        }),
        Outcome::Absent => json!({"found": false, "r": null, "w_tilde": null, "method": null, "inconclusive": false}),
        Outcome::Inconclusive => {
            json!({"found": false, "r": null, "w_tilde": null, "method": null, "inconclusive": true})
        }
    }
}

fn cert_json(c: &Certificate) -> serde_json::Value {
    json!({
        "conjugate": c.conjugate,
        "witness": c.witness.as_ref().map(|w| w.to_string()),
        "raw_witness": c.raw_witness.as_ref().map(|w| w.to_string()),
        "method": c.method.to_string(),
        "inconclusive": c.inconclusive,
        "verified": c.verified,
    })
}

fn exit_code(c: &Certificate) -> u8 {
    if c.inconclusive {
        INCONCLUSIVE
    } else if c.conjugate {
        CONJUGATE
    } else {
        NOT_CONJUGATE
    }
}

fn conj(args: ConjArgs) -> Result<u8> {
    let policy = match &args.policy_file {
        Some(p) => BoundPolicy::parse(&std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?)?,
        None => BoundPolicy::default(),
    };
    let decide = |a: &str, b: &str| -> Result<Certificate> {
        let (u, v) = (word(a, args.rank)?, word(b, args.rank)?);
        Ok(match args.method {
            ConjMethod::Engine => decide_conjugacy(&u, &v, args.rank, &policy)?,
            ConjMethod::Hnn => collins_decide(&u, &v, args.rank, default_search_bound(&u, &v))?,
        })
    };
    if let Some(path) = &args.batch {
        let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
        let mut out = io::stdout().lock();
        for (n, line) in BufReader::new(file).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (a, b) = line.split_once('\t').with_context(|| format!("line {}: expected two tab-separated words", n + 1))?;
            writeln!(out, "{}", cert_json(&decide(a, b)?))?;
        }
        return Ok(CONJUGATE);
    }
    let (a, b) = (args.word1.as_deref().unwrap_or(""), args.word2.as_deref().unwrap_or(""));
    let c = decide(a, b)?;
    if args.json {
        println!("{}", cert_json(&c));
    } else if c.inconclusive {
        println!("inconclusive ({})", c.method);
    } else if let Some(w) = &c.witness {
        println!("conjugate ({}): {w}", c.method);
        if args.raw {
            if let Some(r) = &c.raw_witness {
                println!("raw: {r}");
            }
        }
    } else {
        println!("not conjugate ({})", c.method);
    }
    Ok(exit_code(&c))
}

