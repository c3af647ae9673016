use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use modal_succinctness::colouring::{colour, noncol_equivalence, phi_n};
use modal_succinctness::formula::parse_in;
use modal_succinctness::game::{fgf_min_cost, psi_of_tree, GameOptions};
use modal_succinctness::kripke::{
    bisimilar, find_refutation, PointedModel, Universe, DEFAULT_NODE_CAP, DEFAULT_VALIDITY_CAP_BITS,
};
use modal_succinctness::report::{reproduce, ReproduceOptions, DEFAULT_SEED};
use modal_succinctness::synth::{
    certify_bound, min_frame_separator, min_separating, CertifyOptions, Verdict, WitnessUniverse,
};
use modal_succinctness::textio::{
    load_frame, load_model, load_witnesses, write_model, write_witnesses,
};
use modal_succinctness::{Error, Language, MeasureKind};

#[derive(Parser)]
#[command(
    name = "modalgame",
    version,
    about = "Formula-complexity games and minimal modal formulas"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula at a point of a model file.
    Eval {
        #[arg(long)]
        model: String,
        /// Defaults to the file's `point` line.
        #[arg(long)]
        point: Option<usize>,
        #[arg(long)]
        formula: String,
    },
    /// Decide frame validity; prints a refuting valuation when invalid.
    Valid {
        /// Frame file or builtin:NAME.
        #[arg(long)]
        frame: String,
        #[arg(long)]
        formula: String,
        #[arg(long, default_value_t = DEFAULT_VALIDITY_CAP_BITS)]
        cap_bits: u32,
    },
    /// Decide bisimilarity of two pointed-model files.
    Bisim {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long, default_value = "basic")]
        language: Language,
    },
    /// Colour a frame with at most n colours.
    Colour {
        #[arg(long)]
        frame: String,
        #[arg(long)]
        n: usize,
    },
    /// Print the non-colourability formula and/or check it on a frame.
    Noncol {
        /// Print phi_N.
        #[arg(long, value_name = "N")]
        emit: Option<usize>,
        /// Frame to check validity of phi_n against non-colourability.
        #[arg(long, requires = "n")]
        check: Option<String>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Find a minimal separating formula.
    Synth {
        /// Pointed-model files; they form the universe.
        #[arg(long, num_args = 1.., conflicts_with = "witnesses")]
        models: Vec<String>,
        /// Indices into --models for the side the formula must hold on.
        #[arg(long, value_delimiter = ',')]
        left: Vec<usize>,
        /// Indices into --models for the side the formula must fail on.
        #[arg(long, value_delimiter = ',')]
        right: Vec<usize>,
        /// Witness file or builtin:NAME; separates positive from negative frames.
        #[arg(long)]
        witnesses: Option<String>,
        #[arg(long, default_value = "length")]
        measure: MeasureKind,
        #[arg(long, default_value_t = 1)]
        vars: usize,
        #[arg(long, default_value_t = 8)]
        length_cap: usize,
        #[arg(long, default_value = "basic")]
        language: Language,
    },
    /// Solve the game on frames against the greedy Hydra.
    Game {
        #[arg(long)]
        witnesses: String,
        #[arg(long, default_value = "length")]
        measure: MeasureKind,
        #[arg(long, default_value_t = 1)]
        vars: usize,
        /// Costs below this are searched.
        #[arg(long)]
        budget: u32,
        #[arg(long)]
        length_cap: Option<usize>,
        #[arg(long, default_value = "basic")]
        language: Language,
        /// Write the closed game tree here.
        #[arg(long)]
        emit_tree: Option<String>,
    },
    /// Certify that no formula below a bound separates a witness set.
    Certify {
        #[arg(long)]
        witnesses: String,
        #[arg(long, default_value = "length")]
        measure: MeasureKind,
        #[arg(long)]
        bound: u32,
        #[arg(long, default_value_t = 1)]
        vars: usize,
        #[arg(long)]
        length_cap: Option<usize>,
        #[arg(long, default_value = "basic")]
        language: Language,
        #[arg(long)]
        out: Option<String>,
    },
    /// Write a witness set in the frame file format.
    Export {
        #[arg(long)]
        witnesses: String,
    },
    /// Rerun every acceptance check and print the report.
    Reproduce {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: Option<String>,
    },
}

fn write_or_print(out: Option<&str>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => Ok(fs::write(path, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Eval {
            model,
            point,
            formula,
        } => {
            let (m, file_point) = load_model(&model)?;
            let point = point.or(file_point).ok_or_else(|| {
                Error::Usage("no --point and no `point` line in the model file".into())
            })?;
            if point >= m.state_count() {
                return Err(Error::Usage(format!("point {point} out of range")));
            }
            let f = parse_in(&formula, Language::Global)?;
            println!("{}", m.eval(point, &f));
        }
        Command::Valid {
            frame,
            formula,
            cap_bits,
        } => {
            let fr = load_frame(&frame)?;
            let f = parse_in(&formula, Language::Global)?;
            match find_refutation(&fr, &f, cap_bits)? {
                None => println!("VALID"),
                Some(pm) => {
                    println!("INVALID");
                    print!("{}", write_model(&pm.model, Some(pm.point)));
                }
            }
        }
        Command::Bisim {
            left,
            right,
            language,
        } => {
            let pointed = |path: &str| -> Result<PointedModel, Error> {
                let (m, p) = load_model(path)?;
                let p = p.ok_or_else(|| Error::Usage(format!("{path} has no `point` line")))?;
                Ok(PointedModel::new(m, p))
            };
            let same = bisimilar(&pointed(&left)?, &pointed(&right)?, language);
            println!("{}", if same { "BISIMILAR" } else { "NOT BISIMILAR" });
        }
        Command::Colour { frame, n } => {
            if n == 0 {
                return Err(Error::Usage("n must be positive".into()));
            }
            match colour(&load_frame(&frame)?, n) {
                Some(c) => println!(
                    "{}",
                    c.0.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                ),
                None => println!("UNCOLOURABLE"),
            }
        }
        Command::Noncol { emit, check, n } => {
            if emit.is_none() && check.is_none() {
                return Err(Error::Usage(
                    "give --emit N and/or --check FRAME --n N".into(),
                ));
            }
            if let Some(k) = emit {
                if k == 0 {
                    return Err(Error::Usage("n must be positive".into()));
                }
                println!("{}", phi_n(k));
            }
            if let (Some(frame), Some(n)) = (check, n) {
                if n == 0 {
                    return Err(Error::Usage("n must be positive".into()));
                }
                let agrees = noncol_equivalence(&load_frame(&frame)?, n)?;
                println!("{}", if agrees { "EQUIVALENT" } else { "MISMATCH" });
                if !agrees {
                    return Ok(1);
                }
            }
        }
        Command::Synth {
            models,
            left,
            right,
            witnesses,
            measure,
            vars,
            length_cap,
            language,
        } => {
            let found = match witnesses {
                Some(spec) => {
                    let w = load_witnesses(&spec)?;
                    let wu = WitnessUniverse::build(&w, vars, language, DEFAULT_NODE_CAP)?;
                    min_frame_separator(&wu, measure, vars, length_cap, language)?
                }
                None => {
                    if models.is_empty() || left.is_empty() || right.is_empty() {
                        return Err(Error::Usage(
                            "give --models with --left and --right, or --witnesses".into(),
                        ));
                    }
                    let mut loaded = Vec::new();
                    let mut points = Vec::new();
                    for path in &models {
                        let (m, p) = load_model(path)?;
                        points.push(
                            p.ok_or_else(|| Error::Usage(format!("{path} has no `point` line")))?,
                        );
                        loaded.push(m);
                    }
                    let u = Universe::from_models(loaded);
                    let side = |ids: &[usize]| -> Result<_, Error> {
                        if let Some(bad) = ids.iter().find(|&&i| i >= models.len()) {
                            return Err(Error::Usage(format!("model index {bad} out of range")));
                        }
                        Ok(u.set_of(ids.iter().map(|&i| u.index_of(i, 0, points[i]))))
                    };
                    min_separating(
                        &u,
                        &side(&left)?,
                        &side(&right)?,
                        measure,
                        vars,
                        length_cap,
                        language,
                    )?
                }
            };
            match found {
                Some((f, m)) => {
                    println!("{f}");
                    let parts: Vec<String> = m
                        .entries(language)
                        .iter()
                        .map(|(k, v)| format!("{k}={v}"))
                        .collect();
                    println!("{}", parts.join(" "));
                }
                None => println!("NO SEPARATOR"),
            }
        }
        Command::Game {
            witnesses,
            measure,
            vars,
            budget,
            length_cap,
            language,
            emit_tree,
        } => {
            let w = load_witnesses(&witnesses)?;
            let mut opts = GameOptions::new(measure, budget, language, vars);
            if let Some(cap) = length_cap {
                opts.length_cap = cap;
            }
            match fgf_min_cost(&w, &opts)? {
                Some(r) => {
                    println!("cost {}", r.cost);
                    println!("formula {}", psi_of_tree(&r.tree));
                    let choice: Vec<String> = r.choice.iter().map(|c| c.to_string()).collect();
                    println!("hercules {}", choice.join(" "));
                    if let Some(path) = emit_tree {
                        fs::write(path, r.tree.render())?;
                    }
                }
                None => println!("NO CLOSED TREE below {budget}"),
            }
        }
        Command::Certify {
            witnesses,
            measure,
            bound,
            vars,
            length_cap,
            language,
            out,
        } => {
            let w = load_witnesses(&witnesses)?;
            let mut opts = CertifyOptions::new(measure, bound);
            opts.var_bound = vars;
            opts.language = language;
            if let Some(cap) = length_cap {
                opts.length_cap = cap;
            }
            let cert = certify_bound(&w, &opts);
            write_or_print(out.as_deref(), &cert.to_string())?;
            if let Verdict::Inconclusive(reason) = &cert.verdict {
                eprintln!("inconclusive: {reason}");
                return Ok(3);
            }
        }
        Command::Export { witnesses } => {
            print!("{}", write_witnesses(&load_witnesses(&witnesses)?));
        }
        Command::Reproduce { seed, out } => {
            let report = reproduce(&ReproduceOptions {
                seed,
                ..ReproduceOptions::default()
            });
            write_or_print(out.as_deref(), &report.to_string())?;
            if !report.all_pass() {
                return Ok(1);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Resource { .. } => 3,
                _ => 2,
            })
        }
    }
}
