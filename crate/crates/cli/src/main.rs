use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use assoc_core::coherence::{
    good_elementary_sequence, pair_support, presentation_json, sequence_word, word_json,
};
use assoc_core::dynkin::{dynkin_basis, verify_chain_map, CoefficientSystem, DynkinComplex};
use assoc_core::homology::ChainComplex;
use assoc_core::linalg::Matrix;
use assoc_core::nested::{classify_two_face, f_vector, faces, nested_sets, parse_nested_set, two_face_cycle};
use assoc_core::polytope::make_realization;
use assoc_core::{parse_diagram, rational, Diagram};

const CHAIN_MAP_TRIALS: usize = 20;
const CHAIN_MAP_SEED: u64 = 0;

#[derive(Parser)]
#[command(name = "assoc", version, about = "Nested sets, associahedra and Dynkin complexes of labelled diagrams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// Diagram source file.
    #[arg(long)]
    diagram: PathBuf,
    /// Wrap the payload in {command, fingerprint, payload}.
    #[arg(long)]
    json: bool,
}

#[derive(clap::Args)]
struct Pair {
    /// Two maximal nested sets, e.g. "1 2 3;1 2;1" "1 2;2".
    #[arg(long, num_args = 2, value_names = ["F", "G"], required = true)]
    pair: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Faces of the associahedron, optionally of one dimension.
    Faces {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Number of faces per dimension.
    Fvector {
        #[command(flatten)]
        common: Common,
    },
    /// 2-faces with their shape and boundary cycle.
    Twofaces {
        #[command(flatten)]
        common: Common,
    },
    /// Vertices and inequalities of the convex realisation.
    Polytope {
        #[command(flatten)]
        common: Common,
        /// Also write the polytope as an OFF file (at most 4 vertices).
        #[arg(long)]
        off: Option<PathBuf>,
    },
    /// Integer homology of the cellular chain complex.
    Homology {
        #[command(flatten)]
        common: Common,
        /// Include the boundary matrix of this degree.
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Dynkin cochain complex and cohomology.
    Dynkin {
        #[command(flatten)]
        common: Common,
        /// Coefficient system JSON; constant coefficients when omitted.
        #[arg(long)]
        coeffs: Option<PathBuf>,
        /// Include the basis and differential of this degree.
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Generators with pentagon, hexagon and braid relations.
    Relations {
        #[command(flatten)]
        common: Common,
    },
    /// A good elementary sequence between two maximal nested sets.
    Sequence {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        pair: Pair,
    },
    /// Support and central support of a pair of maximal nested sets.
    Support {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        pair: Pair,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Faces { .. } => "faces",
            Command::Fvector { .. } => "fvector",
            Command::Twofaces { .. } => "twofaces",
            Command::Polytope { .. } => "polytope",
            Command::Homology { .. } => "homology",
            Command::Dynkin { .. } => "dynkin",
            Command::Relations { .. } => "relations",
            Command::Sequence { .. } => "sequence",
            Command::Support { .. } => "support",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Faces { common, .. }
            | Command::Fvector { common }
            | Command::Twofaces { common }
            | Command::Polytope { common, .. }
            | Command::Homology { common, .. }
            | Command::Dynkin { common, .. }
            | Command::Relations { common }
            | Command::Sequence { common, .. }
            | Command::Support { common, .. } => common,
        }
    }
}

/// Input that could not be read or parsed; exits with status 2.
#[derive(Debug)]
struct InputError(anyhow::Error);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for InputError {}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(|e| InputError(e).into())
}

fn fingerprint(d: &Diagram) -> String {
    hex::encode(Sha256::digest(d.to_string().as_bytes()))
}

fn matrix_json(m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| m.row(i).iter().map(|x| Value::String(rational::format(x))).collect())
            .collect(),
    )
}

fn pair_of(d: &Diagram, pair: &Pair) -> anyhow::Result<(assoc_core::NestedSet, assoc_core::NestedSet)> {
    Ok((parse_nested_set(d, &pair.pair[0])?, parse_nested_set(d, &pair.pair[1])?))
}

fn payload(d: &Diagram, command: &Command) -> anyhow::Result<Value> {
    Ok(match command {
        Command::Faces { dim, .. } => {
            let list = match dim {
                Some(k) => faces(d, *k)?,
                None => nested_sets(d),
            };
            json!({"faces": list.iter().map(|h| h.face_json(d)).collect::<Vec<_>>()})
        }
        Command::Fvector { .. } => json!({"f": f_vector(d)}),
        Command::Twofaces { .. } => {
            let list = if d.len() >= 3 { faces(d, 2)? } else { Vec::new() };
            let mut out = Vec::new();
            for h in &list {
                let cycle = two_face_cycle(d, h)?;
                out.push(json!({
                    "face": h.to_json(d),
                    "type": classify_two_face(d, h)?,
                    "cycle": cycle.iter().map(|v| v.to_json(d)).collect::<Vec<_>>(),
                }));
            }
            json!({"twofaces": out})
        }
        Command::Polytope { off, .. } => {
            let r = make_realization(d, None)?;
            if let Some(path) = off {
                let text = r
                    .export_off()
                    .ok_or_else(|| anyhow!("OFF export needs at most 4 vertices, diagram has {}", d.len()))?;
                std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
            }
            r.export_json()
        }
        Command::Homology { dim, .. } => {
            let cx = ChainComplex::new(d);
            let groups: Vec<Value> = cx
                .homology()?
                .iter()
                .map(|g| {
                    let mut v = json!({"betti": g.betti});
                    if !g.torsion.is_empty() {
                        v["torsion"] = g.torsion.iter().map(|t| Value::String(t.to_string())).collect();
                    }
                    v
                })
                .collect();
            let mut out = json!({"H": groups});
            if let Some(k) = dim {
                out["boundary"] = cx.boundary_matrix(*k)?.to_json();
            }
            out
        }
        Command::Dynkin { coeffs, dim, .. } => {
            let m = match coeffs {
                None => CoefficientSystem::constant(),
                Some(path) => {
                    let doc: Value = serde_json::from_str(&read(path)?)
                        .map_err(|e| InputError(anyhow!("{}: {e}", path.display())))?;
                    CoefficientSystem::from_json(d, &doc)?
                }
            };
            let c = DynkinComplex::new(d, &m)?;
            let report = verify_chain_map(d, &m, CHAIN_MAP_TRIALS, CHAIN_MAP_SEED)?;
            let mut out = json!({
                "ambient_dim": m.ambient_dim(),
                "dims": c.dims(),
                "cohomology": c.cohomology()?,
                "chain_map": report.ok,
            });
            if !report.ok {
                out["chain_map_failures"] = json!(report.failures);
            }
            if let Some(p) = dim {
                let basis: Vec<Value> = dynkin_basis(d, *p)?
                    .into_iter()
                    .map(|(b, alpha)| {
                        json!({
                            "B": d.subdiagram_json(b),
                            "alpha": alpha.iter().map(|&v| d.id_json(v)).collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                out["basis"] = Value::Array(basis);
                out["differential"] = matrix_json(&c.differential(*p)?);
            }
            out
        }
        Command::Relations { .. } => presentation_json(d, false),
        Command::Sequence { pair, .. } => {
            let (f, g) = pair_of(d, pair)?;
            let seq = good_elementary_sequence(d, &f, &g)?;
            json!({
                "sequence": seq.iter().map(|h| h.to_json(d)).collect::<Vec<_>>(),
                "word": word_json(d, &sequence_word(d, &seq)?),
            })
        }
        Command::Support { pair, .. } => {
            let (f, g) = pair_of(d, pair)?;
            let s = pair_support(d, &f, &g)?;
            json!({"supp": d.subdiagram_json(s.supp), "zsupp": d.subdiagram_json(s.zsupp)})
        }
    })
}

fn run(cli: &Cli) -> anyhow::Result<String> {
    let common = cli.command.common();
    let d = parse_diagram(&read(&common.diagram)?)?;
    let body = payload(&d, &cli.command)?;
    let doc = if common.json {
        json!({"command": cli.command.name(), "fingerprint": fingerprint(&d), "payload": body})
    } else {
        body
    };
    Ok(serde_json::to_string(&doc)?)
}

fn exit_status(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<InputError>().is_some() {
        return 2;
    }
    match e.downcast_ref::<assoc_core::Error>() {
        Some(err) if err.is_parse() => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_status(&e))
        }
    }
}
