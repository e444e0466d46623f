use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use compinv::families::{run_family, Family};
use compinv::linearized::{
    count_idempotents, dickson_matrix, enumerate_idempotents, lin_inverse_full, subspace_inverse,
    circulant_subspace_inverse, Strategy,
};
use compinv::literal::{parse_elem, parse_field, parse_linpoly, parse_poly, parse_span, Params};
use compinv::poly::{brute_inverse, find_collision, interpolate_values, tabulate};
use compinv::{Elem, Error, FieldTower, Poly};
use compinv_bench::{sweep, Row, DEFAULT_SHAPES};

/// Finite-field towers, permutation checks and explicit compositional inverses.
#[derive(Parser, Debug)]
#[command(name = "compinv", version)]
struct Cli {
    /// Worker threads for the exhaustive loops (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Describe a field tower.
    Field {
        #[command(subcommand)]
        cmd: FieldCmd,
    },
    /// Permutation checks.
    Perm {
        #[command(subcommand)]
        cmd: PermCmd,
    },
    /// Compositional inverses.
    Invert {
        #[command(subcommand)]
        cmd: InvertCmd,
    },
    /// Linearized polynomial arithmetic.
    Lin {
        #[command(subcommand)]
        cmd: LinCmd,
    },
    /// Counting idempotent linear maps.
    Census {
        #[command(subcommand)]
        cmd: CensusCmd,
    },
    /// Check that INVPOLY inverts POLY on the field (or on --domain).
    /// Pass `-` for POLY to read `forward=`, `inverse=` and `domain=` from an
    /// `invert` output line on stdin.
    Verify {
        spec: String,
        poly: String,
        invpoly: Option<String>,
        #[arg(long)]
        domain: Option<String>,
    },
    /// Solver timings.
    Bench {
        #[command(subcommand)]
        cmd: BenchCmd,
    },
}

#[derive(Subcommand, Debug)]
enum FieldCmd {
    Info { spec: String },
}

#[derive(Subcommand, Debug)]
enum PermCmd {
    Check { spec: String, poly: String },
}

#[derive(Subcommand, Debug)]
enum InvertCmd {
    /// Invert by tabulation and interpolation.
    Brute { spec: String, poly: String },
    /// Invert a linearized permutation through its Dickson matrix.
    Dickson { spec: String, linpoly: String },
    /// Invert a linearized map from V onto Vbar.
    Subspace {
        spec: String,
        linpoly: String,
        #[arg(long = "V")]
        v: String,
        #[arg(long = "Vbar")]
        vbar: String,
        #[arg(long, default_value = "gauss")]
        strategy: String,
    },
    /// Build and certify the inverse of a family member from a key=value file
    /// (`-` reads stdin).
    Family {
        family: String,
        spec: String,
        paramfile: String,
    },
}

#[derive(Subcommand, Debug)]
enum LinCmd {
    /// A∘B.
    Compose { spec: String, a: String, b: String },
    Eval { spec: String, linpoly: String, elem: String },
    /// Dickson matrix and its determinant.
    Dickson { spec: String, linpoly: String },
}

#[derive(Subcommand, Debug)]
enum CensusCmd {
    Idempotents {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        q: u64,
        /// Also list every idempotent as a linearized polynomial.
        #[arg(long)]
        enumerate: bool,
    },
}

#[derive(Subcommand, Debug)]
enum BenchCmd {
    /// CSV rows p,m,n,strategy,nanos,verified.
    SubspaceInverse {
        /// Run the built-in list of shapes.
        #[arg(long)]
        sweep: bool,
        /// Extra or replacement shapes as p:m:n.
        shapes: Vec<String>,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

/// How a command ended: 0 success, 1 a checked property is false, 2 bad input.
enum Failure {
    Checked(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotPermutation { .. }
            | Error::NotBijectiveOnDomain { .. }
            | Error::NotBijectiveOnSubspace { .. }
            | Error::HypothesisViolated { .. }
            | Error::SingularDickson
            | Error::BadExponent { .. }
            | Error::TraceZero
            | Error::ZeroScalar => Failure::Checked(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read_source(path: &str) -> Result<String, Failure> {
    let mut s = String::new();
    let res = if path == "-" {
        io::stdin().read_to_string(&mut s).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| s = t)
    };
    res.map_err(|e| Failure::Usage(format!("cannot read '{path}': {e}")))?;
    Ok(s)
}

fn field_info(out: &mut impl Write, t: &FieldTower) -> io::Result<()> {
    writeln!(
        out,
        "p={} m={} n={} q={} order={} spec={}",
        t.p(),
        t.m(),
        t.n(),
        t.q(),
        t.order(),
        t.spec_string()
    )
}

fn perm_check(out: &mut impl Write, t: &FieldTower, f: &Poly) -> Outcome {
    t.check_desk()?;
    let vals = tabulate(t, |x| f.eval(t, x));
    match find_collision(&vals) {
        None => {
            writeln!(out, "permutation=true").ok();
            Ok(())
        }
        Some((a, b)) => {
            writeln!(out, "permutation=false collision={a},{b}").ok();
            Err(Failure::Checked(String::new()))
        }
    }
}

/// Whether `inv` undoes `f` on every element of `domain` (the whole field
/// when absent), and if so whether `f` undoes `inv` too.
fn verify(out: &mut impl Write, t: &FieldTower, f: &Poly, inv: &Poly, domain: Option<Vec<Elem>>) -> Outcome {
    let bad = match domain {
        Some(dom) => dom.into_iter().find(|&v| inv.eval(t, f.eval(t, v)) != v),
        None => {
            t.check_desk()?;
            t.elements()
                .find(|&x| inv.eval(t, f.eval(t, x)) != x || f.eval(t, inv.eval(t, x)) != x)
        }
    };
    match bad {
        None => {
            writeln!(out, "verified=true").ok();
            Ok(())
        }
        Some(x) => {
            writeln!(out, "verified=false counterexample={x}").ok();
            Err(Failure::Checked(String::new()))
        }
    }
}

/// Value of `key=` among whitespace-separated tokens.
fn token<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    line.split_whitespace().find_map(|tok| tok.strip_prefix(key)?.strip_prefix('='))
}

fn run(cli: Cli, out: &mut impl Write) -> Outcome {
    match cli.verb {
        Verb::Field { cmd: FieldCmd::Info { spec } } => {
            field_info(out, &parse_field(&spec)?).ok();
        }
        Verb::Perm { cmd: PermCmd::Check { spec, poly } } => {
            let t = parse_field(&spec)?;
            perm_check(out, &t, &parse_poly(&t, &poly)?)?;
        }
        Verb::Invert { cmd } => match cmd {
            InvertCmd::Brute { spec, poly } => {
                let t = parse_field(&spec)?;
                let f = parse_poly(&t, &poly)?;
                let inv = brute_inverse(&t, &f)?;
                let fwd = interpolate_values(&t, &f.values(&t)?)?;
                writeln!(out, "method=brute inverse={inv} forward={fwd}").ok();
            }
            InvertCmd::Dickson { spec, linpoly } => {
                let t = parse_field(&spec)?;
                let l = parse_linpoly(&t, &linpoly)?;
                let inv = lin_inverse_full(&t, &l)?;
                writeln!(
                    out,
                    "method=dickson inverse_lin={inv} inverse={} forward={}",
                    inv.to_poly(&t),
                    l.to_poly(&t)
                )
                .ok();
            }
            InvertCmd::Subspace { spec, linpoly, v, vbar, strategy } => {
                let t = parse_field(&spec)?;
                let l = parse_linpoly(&t, &linpoly)?;
                let (v, vbar) = (parse_span(&t, &v)?, parse_span(&t, &vbar)?);
                let (r, ran) = match strategy.parse::<Strategy>()? {
                    Strategy::Gauss => (subspace_inverse(&t, &l, &v, &vbar)?, Strategy::Gauss),
                    Strategy::Ntt => {
                        let s = circulant_subspace_inverse(&t, &l, &v, &vbar)?;
                        (s.inverse, s.strategy)
                    }
                };
                writeln!(
                    out,
                    "method=subspace strategy={ran} inverse_lin={r} inverse={} forward={} domain={v}",
                    r.to_poly(&t),
                    l.to_poly(&t)
                )
                .ok();
            }
            InvertCmd::Family { family, spec, paramfile } => {
                let fam: Family = family.parse()?;
                let t = parse_field(&spec)?;
                let params = Params::parse(&read_source(&paramfile)?)?;
                let cert = run_family(&t, fam, &params)?;
                writeln!(out, "{cert}").ok();
                if !cert.verified || !cert.cross_checks_agree() {
                    return Err(Failure::Checked(String::new()));
                }
            }
        },
        Verb::Lin { cmd } => match cmd {
            LinCmd::Compose { spec, a, b } => {
                let t = parse_field(&spec)?;
                let c = parse_linpoly(&t, &a)?.compose(&t, &parse_linpoly(&t, &b)?)?;
                writeln!(out, "lin={c}").ok();
            }
            LinCmd::Eval { spec, linpoly, elem } => {
                let t = parse_field(&spec)?;
                let v = parse_linpoly(&t, &linpoly)?.eval(&t, parse_elem(&t, &elem)?);
                writeln!(out, "value={v}").ok();
            }
            LinCmd::Dickson { spec, linpoly } => {
                let t = parse_field(&spec)?;
                let d = dickson_matrix(&t, &parse_linpoly(&t, &linpoly)?);
                writeln!(out, "det={} matrix={d}", d.determinant(&t)).ok();
            }
        },
        Verb::Census { cmd: CensusCmd::Idempotents { n, q, enumerate } } => {
            let count = count_idempotents(n, q)?;
            writeln!(out, "count={count}").ok();
            if enumerate {
                let t = FieldTower::for_prime_power(q, n)?;
                for l in enumerate_idempotents(&t)? {
                    writeln!(out, "{l}").ok();
                }
            }
        }
        Verb::Verify { spec, poly, invpoly, domain } => {
            let t = parse_field(&spec)?;
            let (f, inv, domain) = if poly == "-" {
                let text = read_source("-")?;
                let line = text
                    .lines()
                    .find(|l| token(l, "inverse").is_some())
                    .ok_or_else(|| Failure::Usage("no inverse= token on stdin".into()))?;
                let fwd = token(line, "forward")
                    .ok_or_else(|| Failure::Usage("no forward= token on stdin".into()))?;
                let dom = domain.or_else(|| token(line, "domain").map(str::to_string));
                (parse_poly(&t, fwd)?, parse_poly(&t, token(line, "inverse").unwrap())?, dom)
            } else {
                let inv = invpoly.ok_or_else(|| Failure::Usage("missing INVPOLY".into()))?;
                (parse_poly(&t, &poly)?, parse_poly(&t, &inv)?, domain)
            };
            let domain = match domain {
                Some(d) => Some(parse_span(&t, &d)?.elements(&t)?),
                None => None,
            };
            verify(out, &t, &f, &inv, domain)?;
        }
        Verb::Bench { cmd: BenchCmd::SubspaceInverse { sweep: all, shapes, reps, seed } } => {
            let mut list: Vec<(u32, u32, u32)> = if all { DEFAULT_SHAPES.to_vec() } else { Vec::new() };
            for s in &shapes {
                let t = parse_field(s)?;
                list.push((t.p(), t.m(), t.n()));
            }
            if list.is_empty() {
                return Err(Failure::Usage("give --sweep or at least one p:m:n shape".into()));
            }
            writeln!(out, "{}", Row::HEADER).ok();
            for row in sweep(&list, reps, seed)? {
                writeln!(out, "{row}").ok();
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(k) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checked(msg)) => {
            if !msg.is_empty() {
                writeln!(out, "checked=false reason=\"{msg}\"").ok();
            }
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
