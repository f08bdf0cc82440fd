use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use supermod::analysis::{
    default_specialization, iso_witness_check, module_axiom_check, q_operator_check, span_probe, t_operator_check,
    ProbeSpecialization, Window, Witness,
};
use supermod::dmodule::DModuleSpec;
use supermod::functor::{action_table, g_act, GModuleHandle};
use supermod::lie::{jacobi_check, Generator, LieVector, Sector};
use supermod::morphism::{hom_check, MorphismTag};
use supermod::report::{error_json, sorted};
use supermod::scalar::{parse_rational, Assignment};
use supermod::{Error, Result, Scalar};

#[derive(Parser)]
#[command(name = "supermod", version, about = "Exact checks for N=2 superconformal modules built from D-modules")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Seed for randomized cross-check specializations.
    #[arg(long, env = "SUPERMOD_SEED", default_value_t = 0, global = true)]
    rng_seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    #[value(name = "f-b")]
    Fb,
    Pi,
    Sigma,
    Quotient,
}

#[derive(Clone, Copy, ValueEnum)]
enum Morphism {
    Delta,
    DeltaInv,
    Varpi,
    SigmaB,
    Sigma,
}

#[derive(Clone, Copy, ValueEnum)]
enum Lemma {
    T,
    Q,
}

#[derive(Clone, Copy, ValueEnum)]
enum WitnessArg {
    Phi,
    Psi,
    Identity,
}

#[derive(Args)]
struct ModuleArgs {
    /// JSON spec, e.g. '{"family":"omega","lambda":"2"}', or @path.
    #[arg(long)]
    module: String,
    #[arg(long, default_value = "b")]
    b: String,
    #[arg(long, default_value = "0")]
    sector: String,
    #[arg(long, value_enum, default_value_t = Construction::Fb)]
    construction: Construction,
    /// Parameter values, e.g. a=1/3,b=2.
    #[arg(long)]
    specialize: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Super-Jacobi identity over a window.
    VerifyAlgebra {
        #[arg(long, default_value = "0")]
        sector: String,
        #[arg(long, default_value_t = 3)]
        window: i64,
    },
    /// Homomorphism property of a structure map.
    VerifyMorphism {
        #[arg(long, value_enum)]
        morphism: Morphism,
        #[arg(long, default_value = "b")]
        b: String,
        #[arg(long, default_value_t = 3)]
        window: i64,
    },
    /// One generator acting on one vector.
    Act {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long)]
        generator: String,
        /// A token such as "t^-1~" or a JSON map token -> coefficient.
        #[arg(long)]
        vector: String,
    },
    /// Every generator on every window token.
    ActionTable {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long, default_value_t = 2)]
        window: i64,
        #[arg(long, default_value_t = 2)]
        tokens: usize,
    },
    /// Module axioms over a window G,T.
    CheckModule {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long, default_value = "2,3")]
        window: String,
    },
    /// Span of a seed under generator words, window G,T,W.
    Probe {
        #[command(flatten)]
        module: ModuleArgs,
        /// A token or a JSON map token -> coefficient.
        #[arg(long)]
        seed: String,
        #[arg(long, default_value = "2,4,4")]
        window: String,
        /// Eliminate over the parameter field instead of specializing.
        #[arg(long)]
        symbolic: bool,
    },
    /// The T_{k,d} or Q_{m,d} operator identity.
    CheckLemma {
        #[arg(long, value_enum)]
        which: Lemma,
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long)]
        vector: String,
        /// k for T, m for Q.
        #[arg(long, allow_hyphen_values = true)]
        index: i64,
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
    },
    /// An isomorphism witness between two constructions.
    CheckIso {
        #[arg(long, value_enum)]
        witness: WitnessArg,
        /// JSON spec or @path.
        #[arg(long)]
        module: String,
        /// Used by the identity witness only.
        #[arg(long, default_value = "b")]
        b: String,
        #[arg(long, default_value = "2,4")]
        window: String,
    },
}

struct Outcome {
    report: Value,
    text: String,
    passed: bool,
}

impl Outcome {
    fn report(v: Value, passed: bool) -> Self {
        let text = render_text(&v);
        Outcome { report: v, text, passed }
    }
}

fn render_text(v: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(map) = v {
        for (k, x) in map {
            match x {
                Value::String(s) => out.push_str(&format!("{k}: {s}\n")),
                Value::Array(items) if !items.is_empty() => {
                    out.push_str(&format!("{k}:\n"));
                    for item in items {
                        out.push_str(&format!("  {}\n", serde_json::to_string(item).unwrap_or_default()));
                    }
                }
                other => out.push_str(&format!("{k}: {other}\n")),
            }
        }
    }
    out
}

fn load_spec(text: &str) -> Result<DModuleSpec> {
    match text.strip_prefix('@') {
        Some(path) => {
            let body = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidSpec(format!("cannot read {path}: {e}")))?;
            DModuleSpec::parse(&body)
        }
        None => DModuleSpec::parse(text),
    }
}

fn parse_assignment(text: &str, declared: &BTreeSet<String>) -> Result<Assignment> {
    let mut out = Assignment::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::InvalidSpec(format!("expected name=value, got {part:?}")))?;
        let k = k.trim();
        if !declared.contains(k) {
            return Err(Error::InvalidSpec(format!("parameter {k:?} is not declared by the module")));
        }
        out.insert(k.to_string(), parse_rational(v.trim())?);
    }
    Ok(out)
}

struct Built {
    handle: GModuleHandle,
    assignment: Assignment,
}

fn build(args: &ModuleArgs) -> Result<Built> {
    let spec = load_spec(&args.module)?;
    let b: Scalar = args.b.parse()?;
    let sector: Sector = args.sector.parse()?;
    let mut declared = spec.parameters();
    declared.extend(b.variables());
    let assignment = match &args.specialize {
        Some(text) => parse_assignment(text, &declared)?,
        None => Assignment::new(),
    };
    let base = GModuleHandle::new(spec, b).in_sector(sector);
    let handle = match args.construction {
        Construction::Fb => base,
        Construction::Pi => base.flipped(),
        Construction::Sigma => base.sigma_twisted(),
        Construction::Quotient => base.specialize(&assignment)?.quotient_by_trivial()?,
    };
    Ok(Built { handle, assignment })
}

fn sector_window(sector: &str, w: i64) -> Result<Sector> {
    if w < 1 {
        return Err(Error::InvalidWindow(format!("window must be at least 1, got {w}")));
    }
    sector.parse()
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::VerifyAlgebra { sector, window } => {
            let r = jacobi_check(sector_window(sector, *window)?, *window);
            Ok(Outcome::report(r.to_json(), r.passed))
        }
        Command::VerifyMorphism { morphism, b, window } => {
            sector_window("0", *window)?;
            let tag = match morphism {
                Morphism::Delta => MorphismTag::Delta,
                Morphism::DeltaInv => MorphismTag::DeltaInv,
                Morphism::Varpi => MorphismTag::Varpi,
                Morphism::SigmaB => MorphismTag::SigmaB(b.parse()?),
                Morphism::Sigma => MorphismTag::SigmaAut,
            };
            let r = hom_check(&tag, *window);
            Ok(Outcome::report(r.to_json(), r.passed))
        }
        Command::Act { module, generator, vector } => {
            let built = build(module)?;
            let h = built.handle.specialize(&built.assignment)?;
            let g: Generator = generator.parse()?;
            let v = h.spec.parse_vector(vector)?.specialize(&built.assignment)?;
            let image = g_act(&h, &LieVector::generator(h.sector, g)?, &v)?;
            let text = format!("{}\n", image.render(&h.spec));
            Ok(Outcome {
                report: image.to_json(&h.spec),
                text,
                passed: true,
            })
        }
        Command::ActionTable { module, window, tokens } => {
            let built = build(module)?;
            let h = built.handle.specialize(&built.assignment)?;
            Window::new(*window, *tokens, 1)?;
            let rows: Vec<Value> = action_table(&h, *window, *tokens)?
                .into_iter()
                .map(|(g, t, v)| {
                    json!({"generator": g.to_string(), "token": t.render(&h.spec), "image": v.to_json(&h.spec)})
                })
                .collect();
            let text = rows
                .iter()
                .map(|r| format!("{} . {} = {}\n", r["generator"].as_str().unwrap(), r["token"].as_str().unwrap(), r["image"]))
                .collect();
            Ok(Outcome {
                report: sorted(json!({"schema": supermod::report::SCHEMA, "module": h.describe(), "table": rows})),
                text,
                passed: true,
            })
        }
        Command::CheckModule { module, window } => {
            let built = build(module)?;
            let h = built.handle.specialize(&built.assignment)?;
            let w = Window::parse(window)?;
            let r = module_axiom_check(&h, w.gen_bound, w.token_bound);
            Ok(Outcome::report(r.to_json(), r.passed))
        }
        Command::Probe {
            module,
            seed,
            window,
            symbolic,
        } => {
            let built = build(module)?;
            let h = &built.handle;
            let seed = h.spec.parse_vector(seed)?;
            let w = Window::parse(window)?;
            let specialization = if *symbolic {
                ProbeSpecialization::Symbolic { rng_seed: cli.rng_seed }
            } else {
                let mut a = default_specialization(h);
                a.extend(built.assignment.clone());
                ProbeSpecialization::Fixed(a)
            };
            let r = span_probe(h, &seed, &w, &specialization)?;
            Ok(Outcome::report(r.to_json(), r.full))
        }
        Command::CheckLemma {
            which,
            module,
            vector,
            index,
            d,
        } => {
            let built = build(module)?;
            let h = built.handle.specialize(&built.assignment)?;
            let v = h.spec.parse_vector(vector)?;
            let r = match which {
                Lemma::T => t_operator_check(&h, *index, *d, &v)?,
                Lemma::Q => q_operator_check(&h, *index, *d, &v)?,
            };
            Ok(Outcome::report(r.to_json(), r.passed))
        }
        Command::CheckIso {
            witness,
            module,
            b,
            window,
        } => {
            let spec = load_spec(module)?;
            let w = Window::parse(window)?;
            let half = Scalar::ratio(1, 2);
            let (source, target, witness) = match witness {
                WitnessArg::Phi => (
                    GModuleHandle::new(spec.clone(), half),
                    GModuleHandle::new(spec, Scalar::zero()).sigma_twisted().flipped(),
                    Witness::Phi,
                ),
                WitnessArg::Psi => (
                    GModuleHandle::new(spec.clone(), half),
                    GModuleHandle::new(spec, Scalar::zero())
                        .quotient_by_trivial()?
                        .sigma_twisted()
                        .flipped(),
                    Witness::Psi,
                ),
                WitnessArg::Identity => {
                    let h = GModuleHandle::new(spec, b.parse()?);
                    (h.clone(), h, Witness::Identity)
                }
            };
            let r = iso_witness_check(&source, &target, witness, &w)?;
            Ok(Outcome::report(r.to_json(), r.passed))
        }
    }
}

fn emit(cli: &Cli, body: &str) -> std::io::Result<()> {
    match &cli.output {
        Some(path) => std::fs::write(path, body),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let body = match cli.format {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&outcome.report).expect("json")),
                Format::Text => outcome.text,
            };
            if let Err(e) = emit(&cli, &body) {
                eprintln!("supermod: cannot write output: {e}");
                return ExitCode::from(2);
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("{}", error_json(&e.to_string()));
            ExitCode::from(2)
        }
    }
}
