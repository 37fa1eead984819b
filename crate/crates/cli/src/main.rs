//! `titsmotive`: Tits indices, p-indices and motivic equivalence from the
//! command line. Every command prints one JSON document carrying
//! `"schema": "1"`, or a text rendering with `--format text`.
//!
//! Exit status: 0 on success, 1 for an `unknown` verdict under `--strict`,
//! 2 when the input does not parse or validate.

use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use titsmotive_core::arith::Prime;
use titsmotive_core::diagram::{flag_poincare, weyl_poincare, DynkinDiagram, VertexSet};
use titsmotive_core::equiv::{equivalent_mod_p, levi_descriptor, search_separating_extension, Verdict};
use titsmotive_core::error::Error;
use titsmotive_core::motive::{check_calcul, split_motive, ExtensionModel, Motive, UpperMotiveLabel};
use titsmotive_core::titsindex::{higher_p_index, p_index, tits_index, GroupDescriptor, RegistryEntry, TitsIndex, GROUND};
use titsmotive_core::wire;

#[derive(Parser)]
#[command(name = "titsmotive", version, about = "Tits indices, p-indices and motivic equivalence")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Tits index of a descriptor.
    Index {
        /// Descriptor: a JSON file or inline JSON.
        descriptor: String,
    },
    /// Tits p-index of a descriptor.
    PIndex {
        descriptor: String,
        #[command(flatten)]
        prime: PrimeArg,
    },
    /// Higher p-index over a registry of extensions.
    Higher {
        descriptor: String,
        #[command(flatten)]
        prime: PrimeArg,
        /// Registry: a JSON file or inline JSON; defaults to the ground field only.
        #[arg(long)]
        registry: Option<String>,
    },
    /// Poincaré polynomial of the Weyl group, or of a flag variety with --theta.
    Poincare {
        /// Diagram such as `A3` or `D4+A1`.
        diagram: String,
        /// Vertex set such as `1,3` or `{A3:1,A3:3}`.
        #[arg(long)]
        theta: Option<String>,
    },
    /// Motive of a split flag variety.
    MotiveSplit {
        diagram: String,
        #[arg(long)]
        theta: String,
    },
    /// Equivalence modulo p of two descriptors.
    Equiv {
        first: String,
        second: String,
        #[command(flatten)]
        prime: PrimeArg,
        /// Read both inputs as abstract descriptors or as `index`/`p-index`/`higher` output.
        #[arg(long = "abstract")]
        abstract_input: bool,
        /// Exit with status 1 on an `unknown` verdict.
        #[arg(long)]
        strict: bool,
        /// Random extensions to try against two algebras (0 disables the search).
        #[arg(long, default_value_t = 0)]
        oracle_draws: usize,
        /// Seed for the extension search.
        #[arg(long, env = "TITSMOTIVE_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Semisimple parts of the Levi subgroup of type Θ.
    Levi {
        descriptor: String,
        #[arg(long)]
        theta: String,
    },
    /// Checks the slice formula for a motive restricted along an extension model.
    CheckCalcul(CalculArgs),
}

#[derive(Args)]
struct PrimeArg {
    #[arg(short = 'p', long = "prime")]
    p: u64,
}

#[derive(Args)]
struct CalculArgs {
    /// Motive as a JSON term list.
    motive: String,
    /// Extension model: class id to image motive.
    #[arg(long)]
    model: String,
    /// Upper motive label as JSON.
    #[arg(long)]
    label: String,
    #[arg(long, allow_hyphen_values = true)]
    shift: i64,
}

struct Output {
    json: Value,
    text: String,
    status: u8,
}

impl Output {
    fn new(json: Value, text: String) -> Self {
        Output { json, text, status: 0 }
    }
}

fn load(input: &str) -> Result<Value, Error> {
    let trimmed = input.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') || trimmed.starts_with('"') {
        input.to_string()
    } else if Path::new(input).is_file() {
        std::fs::read_to_string(input).map_err(|e| Error::Parse(format!("{input}: {e}")))?
    } else {
        return Err(Error::Parse(format!("`{input}` is neither a file nor inline JSON")));
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{input}: {e}")))
}

fn load_as<T: serde::de::DeserializeOwned>(input: &str) -> Result<T, Error> {
    serde_json::from_value(load(input)?).map_err(|e| Error::Parse(e.to_string()))
}

fn descriptor(input: &str) -> Result<GroupDescriptor, Error> {
    wire::descriptor_from_json(&load(input)?)
}

fn with_schema(mut fields: Map<String, Value>) -> Value {
    fields.insert("schema".into(), json!(wire::SCHEMA));
    Value::Object(fields)
}

fn object(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("object literal"),
    }
}

fn render_index(idx: &TitsIndex) -> String {
    let d = idx.diagram();
    let orbits: Vec<String> = idx.distinguished().iter().map(|o| d.format_vertex_set(o)).collect();
    let mut out = d.render_ascii(&idx.distinguished_vertices());
    out.push_str(&format!("distinguished: {}\n", if orbits.is_empty() { "none".to_string() } else { orbits.join(" ") }));
    out
}

fn theta_of(d: &DynkinDiagram, s: &str) -> Result<VertexSet, Error> {
    let theta = d.parse_vertex_set(s)?;
    d.check_subset(&theta)?;
    Ok(theta)
}

fn run(cli: &Cli) -> Result<Output, Error> {
    match &cli.command {
        Command::Index { descriptor: input } => {
            let g = descriptor(input)?;
            let idx = tits_index(&g)?;
            let json = with_schema(object(json!({ "group": g.kind_name(), "index": wire::index_to_json(&idx) })));
            Ok(Output::new(json, render_index(&idx)))
        }
        Command::PIndex { descriptor: input, prime } => {
            let p = Prime::new(prime.p)?;
            let g = descriptor(input)?;
            let idx = p_index(&g, p)?;
            let json = with_schema(object(json!({ "group": g.kind_name(), "prime": p.get(), "index": wire::index_to_json(&idx) })));
            Ok(Output::new(json, render_index(&idx)))
        }
        Command::Higher { descriptor: input, prime, registry } => {
            let p = Prime::new(prime.p)?;
            let g = descriptor(input)?;
            let registry = match registry {
                Some(r) => wire::registry_from_json(&load(r)?)?,
                None => vec![RegistryEntry::new(GROUND, titsmotive_core::titsindex::ExtensionSpec::Ground)],
            };
            let table = higher_p_index(&g, p, &registry)?;
            let json = with_schema(object(json!({
                "group": g.kind_name(),
                "prime": p.get(),
                "table": wire::table_to_json(&table, Some(p)),
            })));
            let mut text = String::new();
            for (label, idx) in table.entries() {
                text.push_str(&format!("[{label}]\n{}", render_index(idx)));
            }
            Ok(Output::new(json, text))
        }
        Command::Poincare { diagram, theta } => {
            let d: DynkinDiagram = diagram.parse()?;
            let (poly, theta) = match theta {
                Some(t) => {
                    let theta = theta_of(&d, t)?;
                    (flag_poincare(&d, &theta)?, Some(theta))
                }
                None => (weyl_poincare(&d), None),
            };
            let mut fields = object(json!({ "diagram": d.to_string(), "coefficients": poly.coefficients() }));
            if let Some(t) = &theta {
                fields.insert("theta".into(), wire::vertex_set_to_json(&d, t));
            }
            Ok(Output::new(with_schema(fields), format!("{poly}\n")))
        }
        Command::MotiveSplit { diagram, theta } => {
            let d: DynkinDiagram = diagram.parse()?;
            let theta = theta_of(&d, theta)?;
            let m = split_motive(&d, &theta)?;
            let json = with_schema(object(json!({
                "diagram": d.to_string(),
                "theta": wire::vertex_set_to_json(&d, &theta),
                "rank": m.rank(),
                "motive": m,
            })));
            Ok(Output::new(json, format!("{m}\n")))
        }
        Command::Equiv { first, second, prime, abstract_input, strict, oracle_draws, seed } => {
            let p = Prime::new(prime.p)?;
            let (g, h) = if *abstract_input {
                (wire::abstract_from_output(&load(first)?, p)?, wire::abstract_from_output(&load(second)?, p)?)
            } else {
                (descriptor(first)?, descriptor(second)?)
            };
            let verdict = equivalent_mod_p(&g, &h, p)?;
            let mut fields = object(serde_json::to_value(&verdict).expect("verdicts serialize"));
            fields.entry("prime").or_insert(json!(p.get()));
            let mut text = verdict.name().to_string();
            match &verdict {
                Verdict::NotEquivalent { witness, .. } => text.push_str(&format!(": {}", json!(witness))),
                Verdict::Unknown { reason, .. } => text.push_str(&format!(": {reason}")),
                Verdict::Equivalent { .. } => {}
            }
            text.push('\n');
            if let (GroupDescriptor::SpecialLinear(a), GroupDescriptor::SpecialLinear(b), true) = (&g, &h, *oracle_draws > 0) {
                let found = search_separating_extension(a, b, p, *oracle_draws, *seed)?;
                let separating = found.map(|(sim, v)| json!({ "sim": wire::sim_to_json(&sim), "vp_indices": v }));
                text.push_str(&format!("oracle ({oracle_draws} draws, seed {seed}): {}\n", match &separating {
                    Some(s) => format!("separated by {s}"),
                    None => "no separating extension".to_string(),
                }));
                fields.insert("oracle".into(), json!({ "draws": oracle_draws, "seed": seed, "separating": separating }));
            }
            let mut out = Output::new(with_schema(fields), text);
            if *strict && verdict.is_unknown() {
                out.status = 1;
            }
            Ok(out)
        }
        Command::Levi { descriptor: input, theta } => {
            let g = descriptor(input)?;
            let theta = theta_of(&g.diagram(), theta)?;
            let factors = levi_descriptor(&g, &theta)?;
            let text: String = factors.iter().map(|f| format!("{} {}\n", f.kind_name(), f.diagram())).collect();
            let json = with_schema(object(json!({
                "theta": wire::vertex_set_to_json(&g.diagram(), &theta),
                "factors": factors.iter().map(wire::descriptor_to_json).collect::<Vec<_>>(),
            })));
            Ok(Output::new(json, text))
        }
        Command::CheckCalcul(args) => {
            let m: Motive = load_as(&args.motive)?;
            let e: ExtensionModel = load_as(&args.model)?;
            let y: UpperMotiveLabel = load_as(&args.label)?;
            let holds = check_calcul(&m, &e, &y, args.shift)?;
            let json = with_schema(object(json!({ "holds": holds, "weighted": e.is_weighted() })));
            Ok(Output::new(json, format!("{}\n", if holds { "holds" } else { "fails" })))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Json => println!("{}", out.json),
                Format::Text => print!("{}", out.text),
            }
            ExitCode::from(out.status)
        }
        Err(e) => {
            let err = json!({ "schema": wire::SCHEMA, "error": { "kind": e.kind(), "message": e.to_string() } });
            match cli.format {
                Format::Json => println!("{err}"),
                Format::Text => eprintln!("error: {e}"),
            }
            ExitCode::from(2)
        }
    }
}
