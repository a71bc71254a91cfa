//! `dickson`: evaluate, scan and verify reversed Dickson polynomials of the
//! third kind over GF(p^e).
//!
//! Exit codes: 0 success, 1 usage or input error, 2 a verification failed.

mod args;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dickson_core::dickson::{
    f3_eval_coeff, f3_eval_functional, f3_eval_recurrence, jacobsthal_substitution,
    reversed_dickson_coeffs,
};
use dickson_core::permcheck::{self, FILTER_DIV3, FILTER_EVEN, FILTER_MOD6, FILTER_SUM};
use dickson_core::verify::{self, Level};
use dickson_core::{charsum, FieldSpec, Kind, OddField};

use args::{parse_element, FieldArg, FieldList};
use output::{Cell, Format, Record, RecordWriter};

#[derive(Parser, Debug)]
#[command(name = "dickson", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate F_n(1, x).
    Eval {
        #[arg(long)]
        field: FieldArg,
        #[arg(long)]
        n: u64,
        /// Integer constant or comma-separated coefficients, low-to-high.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, value_enum, default_value_t = Method::Recurrence)]
        method: Method,
    },
    /// Coefficients of D_{n,kind}(1, x) over the prime field.
    Coeffs {
        #[arg(long)]
        field: FieldArg,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 2)]
        kind: u32,
    },
    /// Permutation verdicts and filter outcomes for n = 0..=n_max.
    Scan {
        #[arg(long)]
        field: FieldArg,
        #[arg(long)]
        n_max: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// sum_{a in GF(q)} F_n(1, a), brute force against the coefficient recursion.
    Sum {
        #[arg(long)]
        field: FieldArg,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run the identity checks; exit 2 on the first failure.
    Verify {
        #[arg(long)]
        fields: Option<FieldList>,
        #[arg(long, value_enum, default_value_t = VerifyLevel::Quick)]
        level: VerifyLevel,
    },
    /// Describe a field and run an exhaustive arithmetic self-test
    /// (characteristic 2 allowed).
    Field {
        #[arg(long)]
        field: FieldArg,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Recurrence,
    Coeff,
    Functional,
    Jacobsthal,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerifyLevel {
    Quick,
    Full,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Verification(String),
}

impl From<dickson_core::Error> for Failure {
    fn from(e: dickson_core::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(format!("I/O error: {e}"))
    }
}

type CmdResult = Result<(), Failure>;

fn odd_field(arg: FieldArg) -> Result<OddField, Failure> {
    Ok(OddField::make(arg.p, arg.e)?)
}

fn sink(out: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn print_record(record: &Record) -> CmdResult {
    let mut w = RecordWriter::new(io::stdout().lock(), Format::Json);
    w.write(record)?;
    w.finish()?;
    Ok(())
}

fn cmd_eval(field: FieldArg, n: u64, x: &str, method: Method) -> CmdResult {
    let f = odd_field(field)?;
    let x = parse_element(&f, x).map_err(Failure::Input)?;
    let record = Record::new()
        .with("q", f.order())
        .with("n", n)
        .with("x", &x);
    let single = |m: Method| -> Result<_, Failure> {
        Ok(match m {
            Method::Recurrence => f3_eval_recurrence(&f, n, &x),
            Method::Coeff => f3_eval_coeff(&f, n, &f.one(), &x),
            Method::Functional => f3_eval_functional(&f, n, &x)?,
            Method::Jacobsthal => jacobsthal_substitution(&f, n, &x),
            Method::All => unreachable!(),
        })
    };
    let record = if method == Method::All {
        let rec = single(Method::Recurrence)?;
        let coeff = single(Method::Coeff)?;
        let func = single(Method::Functional)?;
        let jac = single(Method::Jacobsthal)?;
        let agree = rec == coeff && rec == func && rec == jac;
        record
            .with("method", Cell::Text("all".into()))
            .with("value", &rec)
            .with("recurrence", &rec)
            .with("coeff", &coeff)
            .with("functional", &func)
            .with("jacobsthal", &jac)
            .with("agree", agree)
    } else {
        let name = method.to_possible_value().expect("named").get_name().to_string();
        record
            .with("method", Cell::Text(name))
            .with("value", &single(method)?)
    };
    print_record(&record)
}

fn cmd_coeffs(field: FieldArg, n: u64, kind: u32) -> CmdResult {
    let f = FieldSpec::new(field.p, field.e)?;
    let kind = Kind::new(kind)?;
    let poly = reversed_dickson_coeffs(&f, n, kind);
    let coeffs = poly
        .coeffs()
        .iter()
        .map(|c| c.prime_residue().expect("prime-field coefficients"))
        .collect();
    print_record(
        &Record::new()
            .with("q", f.order())
            .with("n", n)
            .with("kind", kind.k() as u64)
            .with("coeffs", Cell::Ints(coeffs)),
    )
}

fn cmd_scan(field: FieldArg, n_max: u64, out: &Option<PathBuf>, format: Format) -> CmdResult {
    let f = odd_field(field)?;
    let reports = permcheck::scan(&f, n_max)?;
    let mut w = RecordWriter::new(sink(out)?, format);
    let mut problems = Vec::new();
    for r in &reports {
        let filter = |name| *r.filter(name).expect("all filters reported");
        let (m6, ev, d3, sm) = (filter(FILTER_MOD6), filter(FILTER_EVEN), filter(FILTER_DIV3), filter(FILTER_SUM));
        w.write(
            &Record::new()
                .with("q", r.q)
                .with("n", r.n)
                .with("is_pp", r.is_pp)
                .with("mod6_applicable", m6.applicable)
                .with("mod6_passed", m6.passed)
                .with("even_applicable", ev.applicable)
                .with("even_passed", ev.passed)
                .with("div3_applicable", d3.applicable)
                .with("div3_passed", d3.passed)
                .with("sum_applicable", sm.applicable)
                .with("sum_passed", sm.passed)
                .with("exact_criterion", r.exact_criterion)
                .with("extrapolated_criterion", r.extrapolated_criterion)
                .with("two_to_one", r.two_to_one)
                .with("value_sum", &r.value_sum),
        )?;
        problems.extend(r.violations());
    }
    w.finish()?;
    match problems.first() {
        None => Ok(()),
        Some(first) => Err(Failure::Verification(format!(
            "{} invariant violation(s); first: {first}",
            problems.len()
        ))),
    }
}

fn cmd_sum(field: FieldArg, n: Option<u64>, out: &Option<PathBuf>, format: Format) -> CmdResult {
    let f = odd_field(field)?;
    let q = f.order();
    let hi = q * q - 1;
    let range = match n {
        Some(n) if n == 0 || n > hi => {
            return Err(Failure::Input(format!("--n must lie in 1..={hi} for q = {q}")))
        }
        Some(n) => n..=n,
        None => 1..=hi,
    };
    let brute = charsum::sums_bruteforce(&f, *range.end())?;
    let mut w = RecordWriter::new(sink(out)?, format);
    let mut mismatches = Vec::new();
    for n in range {
        let b = &brute[n as usize - 1];
        let r = charsum::sum_via_recursion(&f, n)?;
        let equal = *b == r;
        if !equal {
            mismatches.push(n);
        }
        w.write(
            &Record::new()
                .with("q", q)
                .with("n", n)
                .with("brute", b)
                .with("recursive", &r)
                .with("equal", equal),
        )?;
    }
    w.finish()?;
    if mismatches.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "brute force and recursion differ at n = {mismatches:?}"
        )))
    }
}

fn cmd_verify(fields: Option<FieldList>, level: VerifyLevel) -> CmdResult {
    let level = match level {
        VerifyLevel::Quick => Level::Quick,
        VerifyLevel::Full => Level::Full,
    };
    let fields: Option<Vec<(u64, u32)>> =
        fields.map(|l| l.0.iter().map(|a| (a.p, a.e)).collect());
    let results = verify::run(level, fields.as_deref())?;
    let mut stdout = io::stdout().lock();
    let mut first_failure = None;
    for r in &results {
        let field = FieldArg { p: r.p, e: r.e };
        match &r.outcome {
            Ok(()) => writeln!(stdout, "PASS {} q={field}", r.name)?,
            Err(why) => {
                writeln!(stdout, "FAIL {} q={field}: {why}", r.name)?;
                first_failure.get_or_insert_with(|| format!("{} q={field}", r.name));
            }
        }
    }
    let passed = results.iter().filter(|r| r.passed()).count();
    writeln!(stdout, "{passed}/{} checks passed", results.len())?;
    match first_failure {
        None => Ok(()),
        Some(name) => Err(Failure::Verification(format!("first failing check: {name}"))),
    }
}

fn cmd_field(field: FieldArg) -> CmdResult {
    let f = FieldSpec::new(field.p, field.e)?;
    // exhaustive up to 81 elements, first 81 elements against everything otherwise
    let sample: Vec<_> = f.elements().take(81).collect();
    let ok = sample.iter().all(|a| {
        f.pow(a, f.order()) == *a
            && f.elements().take(81).all(|b| {
                b.is_zero() || f.mul(&f.mul(a, &b), &f.inv(&b).expect("nonzero")) == *a
            })
    });
    print_record(
        &Record::new()
            .with("p", f.p())
            .with("e", f.degree() as u64)
            .with("q", f.order())
            .with("modulus", Cell::Ints(f.modulus().to_vec()))
            .with("self_test", ok),
    )?;
    if ok {
        Ok(())
    } else {
        Err(Failure::Verification("field arithmetic self-test failed".into()))
    }
}

fn configure_threads() -> Result<(), Failure> {
    if let Ok(v) = std::env::var("DICKSON_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| Failure::Input(format!("DICKSON_THREADS={v:?} is not a count")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Input(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Eval { field, n, x, method } => cmd_eval(field, n, &x, method),
        Command::Coeffs { field, n, kind } => cmd_coeffs(field, n, kind),
        Command::Scan { field, n_max, out, format } => cmd_scan(field, n_max, &out, format),
        Command::Sum { field, n, out, format } => cmd_sum(field, n, &out, format),
        Command::Verify { fields, level } => cmd_verify(fields, level),
        Command::Field { field } => cmd_field(field),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(2)
        }
    }
}
