use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use superband::analysis::{
    band_component_system_check, components_of, equivalence_report, n_differential_defect, n_functional_residual,
    ComponentList,
};
use superband::annihilator::annihilator_odd;
use superband::cayley::{cayley_table_verify, OPERANDS};
use superband::evolution::{
    cauchy_defect, commutativity_obstruction, laplace, lift_laurent, moving_time_check, orbit, p_defect_factor,
    resolvent_defect,
};
use superband::families::{generator_of, make_family, FamilyKind};
use superband::io::{family_from_input, parse_input, to_pretty, Input, ToJson};
use superband::verify::{run_suite, Format, Suite, SuiteConfig};
use superband::{AlgebraContext, Error, GrassmannElement, LaurentMatrix};

const SEED_VAR: &str = "SUPERBAND_SEED";

#[derive(Parser)]
#[command(name = "superband", version, about = "Exact checks for idempotent superoperator families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Number of Grassmann generators.
    #[arg(long, default_value_t = 4)]
    generators: u8,
    /// Output format: text or json.
    #[arg(long, default_value = "text")]
    format: String,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the seeded identity suites.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Overridden by SUPERBAND_SEED when that is set.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Include wall-clock durations (makes output nondeterministic).
        #[arg(long)]
        timings: bool,
    },
    /// Compute the multiplication table of the extended family.
    Table {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "xi1")]
        alpha: String,
    },
    /// Check the band component system of a family or component list.
    CheckBand {
        #[command(flatten)]
        common: Common,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Components, residuals and the linear equivalence for a family.
    Analyze {
        #[command(flatten)]
        common: Common,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Laplace resolvent of a named family or a resolvent file, and its identity defect.
    Resolvent {
        #[command(flatten)]
        common: Common,
        #[arg(long, conflicts_with = "input")]
        family: Option<String>,
        #[arg(long, default_value = "xi1")]
        alpha: String,
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// identity: expect a zero defect; generator: expect (w - z)/(z w^2) A.
        #[arg(long, default_value = "identity")]
        check: String,
    },
    /// Orbit of an initial vector under a named family.
    Orbit {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        x0: PathBuf,
        #[arg(long, default_value = "P")]
        family: String,
        #[arg(long, default_value = "xi1")]
        alpha: String,
    },
    /// Odd annihilator of the given odd elements.
    Annihilator {
        #[command(flatten)]
        common: Common,
        /// Element expressions such as "xi1 + 2*xi2*xi3*xi4".
        #[arg(long = "element")]
        elements: Vec<String>,
        /// Element or component files; elements are added to the list.
        #[arg(long = "in")]
        inputs: Vec<PathBuf>,
    },
}

/// Outcome of a command: a document plus whether every check held.
struct Outcome {
    value: Value,
    text: String,
    passed: bool,
}

impl Outcome {
    fn json(value: Value, passed: bool) -> Self {
        Self {
            text: to_pretty(&value),
            value,
            passed,
        }
    }
}

fn usage(e: Error) -> ExitCode {
    eprintln!("superband: {e}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = match &cli.command {
        Command::Verify { common, .. }
        | Command::Table { common, .. }
        | Command::CheckBand { common, .. }
        | Command::Analyze { common, .. }
        | Command::Resolvent { common, .. }
        | Command::Orbit { common, .. }
        | Command::Annihilator { common, .. } => common,
    };
    let format: Format = match common.format.parse() {
        Ok(f) => f,
        Err(e) => return usage(e),
    };
    let outcome = match run(&cli.command, common.generators, format) {
        Ok(o) => o,
        Err(e) => return usage(e),
    };
    let mut rendered = match format {
        Format::Json => to_pretty(&outcome.value),
        Format::Text => outcome.text,
    };
    if !rendered.ends_with('\n') {
        rendered.push('\n');
    }
    match &common.out {
        Some(path) => {
            if let Err(e) = fs::write(path, rendered) {
                eprintln!("superband: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{rendered}"),
    }
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn alpha(n: u8, text: &str) -> Result<GrassmannElement, Error> {
    AlgebraContext::new(n as usize)?;
    GrassmannElement::parse_expr(n, text)
}

fn seed(flag: u64) -> Result<u64, Error> {
    match std::env::var(SEED_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| Error::Config(format!("{SEED_VAR}={v:?} is not a 64-bit seed"))),
        Err(_) => Ok(flag),
    }
}

fn run(command: &Command, n: u8, format: Format) -> Result<Outcome, Error> {
    match command {
        Command::Verify {
            seed: flag,
            suite,
            samples,
            timings,
            ..
        } => {
            let cfg = SuiteConfig {
                generators: n,
                seed: seed(*flag)?,
                suite: suite.parse::<Suite>()?,
                samples: *samples,
                timings: *timings,
            };
            let report = run_suite(&cfg)?;
            Ok(Outcome {
                value: serde_json::to_value(&report).expect("report serializes"),
                text: report.render(format),
                passed: report.passed,
            })
        }
        Command::Table { alpha: a, .. } => {
            let report = cayley_table_verify(&alpha(n, a)?)?;
            let mut text = String::new();
            for (i, row) in OPERANDS.iter().enumerate() {
                let cells: Vec<String> = (0..OPERANDS.len())
                    .map(|j| {
                        let c = report.cell(i, j);
                        let label = c.computed.clone().unwrap_or_else(|| "?".into());
                        if c.matches() {
                            label
                        } else {
                            format!("{label} [printed {}]", c.printed)
                        }
                    })
                    .collect();
                text.push_str(&format!("{row:>5} | {}\n", cells.join(", ")));
            }
            text.push_str(&format!("discrepancies: {}\n", report.discrepancies().len()));
            let passed = report.closed() && report.corner_associative;
            Ok(Outcome {
                value: report.to_json(),
                text,
                passed,
            })
        }
        Command::CheckBand { input, .. } => {
            let components = components_from(parse_input(input)?)?;
            let r = band_component_system_check(&components)?;
            let value = json!({
                "holds": r.holds(),
                "band_equation": r.band_equation,
                "failures": r.failures,
            });
            Ok(Outcome::json(value, r.holds() && r.consistent()))
        }
        Command::Analyze { input, .. } => {
            let family = family_from_input(parse_input(input)?)?;
            let c = components_of(&family)?;
            let system = band_component_system_check(&c)?;
            let residual = n_functional_residual(&c)?;
            let defect = n_differential_defect(&c)?;
            let mut value = json!({
                "degree": c.degree(),
                "components": c.components().to_json(),
                "band_system": {"holds": system.holds(), "failures": system.failures},
                "band_equation": system.band_equation,
                "functional_residual": residual.raw.to_json(),
                "functional_residual_matches_expansion": residual.matches(),
                "differential_defect": defect.defect.to_json(),
                "differential_defect_matches": defect.matches(),
            });
            let mut passed = residual.matches() && defect.matches() && system.consistent();
            if c.degree() <= 1 {
                let e = equivalence_report(&family, true)?;
                value["equivalence"] = json!({
                    "band": e.band,
                    "functional": e.functional,
                    "differential": e.differential,
                    "differential_equation": e.differential_equation,
                    "generator_nilpotent": e.generator_nilpotent,
                    "generator_absorbs_base": e.generator_absorbs_base,
                    "base_idempotent": e.base_idempotent,
                    "base_orthogonal_to_generator": e.base_orthogonal_to_generator,
                    "agree": e.agree(),
                });
                passed &= e.agree();
            }
            Ok(Outcome::json(value, passed))
        }
        Command::Resolvent {
            family,
            alpha: a,
            input,
            check,
            ..
        } => {
            let (resolvent, generator): (LaurentMatrix, Option<LaurentMatrix>) = match (family, input) {
                (Some(kind), _) => {
                    let f = make_family(kind.parse::<FamilyKind>()?, &alpha(n, a)?)?;
                    (laplace(&f)?, Some(lift_laurent(&generator_of(&f)?)))
                }
                (None, Some(path)) => match parse_input(path)? {
                    Input::Resolvent(r) => (r, None),
                    other => {
                        let f = family_from_input(other)?;
                        (laplace(&f)?, Some(lift_laurent(&generator_of(&f)?)))
                    }
                },
                (None, None) => return Err(Error::Config("give --family or --in".into())),
            };
            let defect = resolvent_defect(&resolvent)?;
            let expected = match check.as_str() {
                "identity" => LaurentMatrix::zero(resolvent.generators(), resolvent.p(), resolvent.q()),
                "generator" => {
                    let a = generator.ok_or_else(|| Error::Config("generator check needs a family".into()))?;
                    a.scale_by(&p_defect_factor(resolvent.generators()))?
                }
                other => return Err(Error::Config(format!("unknown check {other:?}; expected identity or generator"))),
            };
            let passed = defect == expected;
            let value = json!({
                "resolvent": resolvent.to_json(),
                "defect": defect.to_json(),
                "expected": expected.to_json(),
                "check": check,
                "passed": passed,
            });
            Ok(Outcome::json(value, passed))
        }
        Command::Orbit { x0, family, alpha: a, .. } => {
            let start = match parse_input(x0)? {
                Input::Vector(v) => v,
                other => return Err(Error::Config(format!("expected a vector, found a {}", other.kind()))),
            };
            let al = alpha(start.generators(), a)?;
            let f = make_family(family.parse::<FamilyKind>()?, &al)?;
            let x = orbit(&f, &start)?;
            let defect = cauchy_defect(&f, &start)?;
            let value = json!({
                "orbit": x.to_json(),
                "cauchy_defect": defect.to_json(),
                "time_law": moving_time_check(&f)?,
                "obstruction": commutativity_obstruction(&start, &al)?.to_json(),
            });
            Ok(Outcome::json(value, defect.is_zero()))
        }
        Command::Annihilator { elements, inputs, .. } => {
            let mut targets = elements.iter().map(|e| alpha(n, e)).collect::<Result<Vec<_>, _>>()?;
            for path in inputs {
                match parse_input(path)? {
                    Input::Element(x) => targets.push(x),
                    other => return Err(Error::Config(format!("expected an element, found a {}", other.kind()))),
                }
            }
            let ctx_n = targets.first().map_or(n, |x| x.generators());
            let ctx = AlgebraContext::new(ctx_n as usize)?;
            let ann = annihilator_odd(&ctx, &targets)?;
            let value = json!({
                "targets": targets.to_json(),
                "dim": ann.dim(),
                "basis": ann.basis().to_json(),
            });
            Ok(Outcome::json(value, true))
        }
    }
}

fn components_from(input: Input) -> Result<ComponentList, Error> {
    match input {
        Input::Components(c) => ComponentList::new(c),
        other => components_of(&family_from_input(other)?),
    }
}
