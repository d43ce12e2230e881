//! The `bracket` command-line tool.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use bracket_series::annulus::{expand_in_annulus, AnnulusSpec, FactoredRational};
use bracket_series::bracket::extract_coefficient;
use bracket_series::coupon::{
    expected_trials_bracket, expected_trials_formula, markov_oracle, CouponProblem,
};
use bracket_series::inversion::revert;
use bracket_series::multivar::{dixon, saalschutz, GesselStantonEvaluator, GsFactors};
use bracket_series::{Error as CoreError, Rational};

use bracket_cli::eval::{eval_bracket, eval_lseries, expr_to_laurent_poly, CliError};
use bracket_cli::expr::parse;
use bracket_cli::output::{rational_pair, terms_to_text, SeriesJson};

#[derive(Parser)]
#[command(
    name = "bracket",
    version,
    about = "Exact formal Laurent series, coefficient-of brackets, annulus \
             expansions, classical identity grids, and the coupon collector"
)]
struct Cli {
    /// Emit JSON on stdout instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand an expression as a truncated series in one variable.
    Series {
        expr: String,
        /// Highest exponent of the known window.
        #[arg(long, default_value_t = 16)]
        order: i64,
    },
    /// Print a single coefficient of an expression's expansion.
    Coeff {
        expr: String,
        /// Exponent to extract.
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        #[arg(long, default_value_t = 16)]
        order: i64,
    },
    /// Evaluate the bracket [F] G: F is read as a descending (R) series,
    /// G as an ascending (L) series.
    Bracket {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[arg(long, default_value_t = 16)]
        order: i64,
    },
    /// Compositional inverse of a series with valuation 1.
    Revert {
        expr: String,
        #[arg(long, default_value_t = 16)]
        order: i64,
    },
    /// Expand numerator·z^shift / Π (z-rootᵢ)^mᵢ in an annulus and print the
    /// coefficients for a range of exponents.
    ExpandRational {
        /// Numerator as a Laurent polynomial in z, e.g. "1/2*z^2 - 2*z + 1/2".
        #[arg(long, allow_hyphen_values = true)]
        num: String,
        /// Poles as comma-separated root^multiplicity, e.g. "2^1,1/2^1".
        #[arg(long, allow_hyphen_values = true)]
        poles: String,
        /// Overall power of z multiplying the fraction.
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        shift: i64,
        /// Inner radius of the annulus (a rational, e.g. "1/2").
        #[arg(long)]
        inner: String,
        /// Outer radius of the annulus: a rational or "inf".
        #[arg(long)]
        outer: String,
        /// First exponent to print.
        #[arg(long, allow_negative_numbers = true)]
        from: i64,
        /// Last exponent to print.
        #[arg(long, allow_negative_numbers = true)]
        to: i64,
    },
    /// Exhaustively check a classical identity over a parameter grid.
    Identity {
        #[command(subcommand)]
        identity: IdentityCommand,
    },
    /// Expected number of trials for the coupon collector.
    Coupon {
        /// Comma-separated exact probabilities summing to 1, e.g. "1/3,1/3,1/3".
        #[arg(long)]
        probs: String,
        /// Number of distinct coupons to collect.
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Method::All)]
        method: Method,
    },
}

#[derive(Subcommand)]
enum IdentityCommand {
    /// Saalschütz: Σ_r C(m,k-r)C(n,l-r)C(m+n+r,r) = C(m+l,k)C(n+k,l),
    /// three routes over (k,l,m,n) ∈ [0,max]^4.
    Saalschutz {
        #[arg(long, default_value_t = 3)]
        max: i64,
    },
    /// Dixon: the alternating cube-like sum equals
    /// (-1)^m (l+m+n)!/(l!m!n!), three routes over (l,m,n) ∈ [0,max]^3.
    Dixon {
        #[arg(long, default_value_t = 3)]
        max: i64,
    },
    /// The Gessel–Stanton transformation, on its Saalschütz and Dixon
    /// specializations plus the base case.
    GesselStanton {
        #[arg(long, default_value_t = 3)]
        max: i64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Formula,
    Bracket,
    Oracle,
    All,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CliError::Parse(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

/// Runs one subcommand; `Ok(false)` means "ran, but checks failed".
fn run(cli: &Cli) -> Result<bool, CliError> {
    match &cli.command {
        Command::Series { expr, order } => {
            let series = eval_lseries(&parse(expr)?, *order)?;
            if cli.json {
                println!("{}", serde_json::to_string(&SeriesJson::from_series(&series)).unwrap());
            } else {
                println!("{series}");
            }
            Ok(true)
        }
        Command::Coeff { expr, n, order } => {
            let series = eval_lseries(&parse(expr)?, *order)?;
            let coeff = extract_coefficient(*n, &series)?;
            if cli.json {
                println!("{}", json!({ "n": n, "coefficient": rational_pair(&coeff) }));
            } else {
                println!("{coeff}");
            }
            Ok(true)
        }
        Command::Bracket { f, g, order } => {
            let value = eval_bracket(&parse(f)?, &parse(g)?, *order)?;
            if cli.json {
                println!("{}", json!({ "value": rational_pair(&value) }));
            } else {
                println!("{value}");
            }
            Ok(true)
        }
        Command::Revert { expr, order } => {
            let series = eval_lseries(&parse(expr)?, *order)?;
            let inverse = revert(&series, *order)?;
            if cli.json {
                println!("{}", serde_json::to_string(&SeriesJson::from_series(&inverse)).unwrap());
            } else {
                println!("{inverse}");
            }
            Ok(true)
        }
        Command::ExpandRational { num, poles, shift, inner, outer, from, to } => {
            if from > to {
                return Err(CoreError::InvalidArgument(
                    "--from must not exceed --to".into(),
                )
                .into());
            }
            let numerator = expr_to_laurent_poly(&parse(num)?)?;
            let poles = parse_poles(poles)?;
            let inner = Rational::parse(inner)?;
            let outer = parse_outer(outer)?;
            let function = FactoredRational::new(numerator, poles, *shift, Rational::one())?;
            let annulus = AnnulusSpec::new(inner, outer)?;
            let expansion = expand_in_annulus(&function, &annulus)?;
            let coefficients: Vec<(i64, Rational)> =
                (*from..=*to).map(|n| (n, expansion.coefficient(n))).collect();
            if cli.json {
                let pairs: Vec<[String; 2]> =
                    coefficients.iter().map(|(_, c)| rational_pair(c)).collect();
                println!(
                    "{}",
                    json!({ "from": from, "to": to, "coefficients": pairs })
                );
            } else {
                println!("{}", terms_to_text("z", coefficients.into_iter()));
            }
            Ok(true)
        }
        Command::Identity { identity } => {
            let report = match identity {
                IdentityCommand::Saalschutz { max } => run_saalschutz(*max)?,
                IdentityCommand::Dixon { max } => run_dixon(*max)?,
                IdentityCommand::GesselStanton { max } => run_gessel_stanton(*max)?,
            };
            let ok = report.failures.is_empty();
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "identity": report.name,
                        "checked": report.checked,
                        "failures": report.failures,
                    })
                );
            } else {
                println!(
                    "{}: checked {} cases, {} failures",
                    report.name,
                    report.checked,
                    report.failures.len()
                );
                for failure in &report.failures {
                    println!("  failed at {failure}");
                }
            }
            Ok(ok)
        }
        Command::Coupon { probs, n, method } => {
            let probabilities = parse_probabilities(probs)?;
            let problem = CouponProblem::new(probabilities, *n)?;
            let mut results: Vec<(&str, Rational)> = Vec::new();
            if matches!(method, Method::Formula | Method::All) {
                results.push(("formula", expected_trials_formula(&problem)?));
            }
            if matches!(method, Method::Bracket | Method::All) {
                results.push(("bracket", expected_trials_bracket(&problem)?));
            }
            if matches!(method, Method::Oracle | Method::All) {
                results.push(("oracle", markov_oracle(&problem)?));
            }
            let expected = results[0].1.clone();
            let agree = results.iter().all(|(_, v)| *v == expected);
            if cli.json {
                println!(
                    "{}",
                    json!({ "expected": rational_pair(&expected), "methods_agree": agree })
                );
            } else {
                let names: Vec<&str> = results.iter().map(|(name, _)| *name).collect();
                if agree {
                    println!("expected trials: {expected} ({})", names.join(" = "));
                } else {
                    for (name, value) in &results {
                        println!("{name}: {value}");
                    }
                    println!("methods disagree");
                }
            }
            Ok(agree)
        }
    }
}

struct IdentityReport {
    name: &'static str,
    checked: u64,
    failures: Vec<serde_json::Value>,
}

fn run_saalschutz(max: i64) -> Result<IdentityReport, CliError> {
    check_grid_max(max)?;
    let mut report = IdentityReport { name: "saalschutz", checked: 0, failures: Vec::new() };
    for k in 0..=max {
        for l in 0..=max {
            for m in 0..=max {
                for n in 0..=max {
                    let outcome = saalschutz(k, l, m, n)?;
                    report.checked += 1;
                    if !outcome.equal {
                        report
                            .failures
                            .push(json!({ "k": k, "l": l, "m": m, "n": n }));
                    }
                }
            }
        }
    }
    Ok(report)
}

fn run_dixon(max: i64) -> Result<IdentityReport, CliError> {
    check_grid_max(max)?;
    let mut report = IdentityReport { name: "dixon", checked: 0, failures: Vec::new() };
    for l in 0..=max {
        for m in 0..=max {
            for n in 0..=max {
                let outcome = dixon(l, m, n)?;
                report.checked += 1;
                if !outcome.all_equal {
                    report.failures.push(json!({ "l": l, "m": m, "n": n }));
                }
            }
        }
    }
    Ok(report)
}

fn run_gessel_stanton(max: i64) -> Result<IdentityReport, CliError> {
    check_grid_max(max)?;
    let mut report =
        IdentityReport { name: "gessel-stanton", checked: 0, failures: Vec::new() };

    // Base case F = G = 1.
    let mut base = GesselStantonEvaluator::new("w", "z", 1, 1)?;
    report.checked += 1;
    if !base.check(0, 0, GsFactors { p: 0, q: 0, r: 0, s: 0 })?.equal {
        report.failures.push(json!({ "case": "base" }));
    }

    // Saalschütz specialization: F = w^k z^l, G = (1+w)^m (1+z)^n/(1-wz)^{m+n}.
    let mut eval = GesselStantonEvaluator::new("w", "z", max, max)?;
    for k in 0..=max {
        for l in 0..=max {
            for m in 0..=max {
                for n in 0..=max {
                    let factors =
                        GsFactors { p: m as u32, q: n as u32, r: 0, s: (m + n) as u32 };
                    report.checked += 1;
                    if !eval.check(k, l, factors)?.equal {
                        report.failures.push(
                            json!({ "case": "saalschutz", "k": k, "l": l, "m": m, "n": n }),
                        );
                    }
                }
            }
        }
    }

    // Dixon specialization: F = w^{l+n} z^{m+n}, G = (w-z)^{l+m}/(1-wz)^{l+m}.
    let mut eval = GesselStantonEvaluator::new("w", "z", 2 * max, 2 * max)?;
    for l in 0..=max {
        for m in 0..=max {
            for n in 0..=max {
                let factors = GsFactors {
                    p: 0,
                    q: 0,
                    r: (l + m) as u32,
                    s: (l + m) as u32,
                };
                report.checked += 1;
                if !eval.check(l + n, m + n, factors)?.equal {
                    report
                        .failures
                        .push(json!({ "case": "dixon", "l": l, "m": m, "n": n }));
                }
            }
        }
    }
    Ok(report)
}

fn check_grid_max(max: i64) -> Result<(), CliError> {
    if !(0..=8).contains(&max) {
        return Err(CoreError::InvalidArgument(
            "identity grids support --max between 0 and 8".into(),
        )
        .into());
    }
    Ok(())
}

/// Parses "root^multiplicity" entries, e.g. "2^1,1/2^1"; a bare root means
/// multiplicity 1.
fn parse_poles(text: &str) -> Result<Vec<(Rational, u32)>, CliError> {
    let mut poles = Vec::new();
    for entry in text.split(',') {
        let entry = entry.trim();
        if entry.is_empty() {
            continue;
        }
        let (root_text, mult) = match entry.rsplit_once('^') {
            Some((root, mult_text)) => {
                let mult: u32 = mult_text.trim().parse().map_err(|_| {
                    CoreError::InvalidArgument(format!(
                        "pole multiplicity '{mult_text}' is not a positive integer"
                    ))
                })?;
                (root, mult)
            }
            None => (entry, 1),
        };
        poles.push((Rational::parse(root_text)?, mult));
    }
    if poles.is_empty() {
        return Err(CoreError::InvalidArgument("at least one pole is required".into()).into());
    }
    Ok(poles)
}

fn parse_outer(text: &str) -> Result<Option<Rational>, CliError> {
    let trimmed = text.trim();
    if trimmed.eq_ignore_ascii_case("inf") {
        Ok(None)
    } else {
        Ok(Some(Rational::parse(trimmed)?))
    }
}

fn parse_probabilities(text: &str) -> Result<Vec<Rational>, CliError> {
    text.split(',')
        .map(|p| Ok(Rational::parse(p)?))
        .collect()
}
