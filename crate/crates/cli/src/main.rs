mod args;
mod report;

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::Parser;
use kk_core::experiments::{self, ExperimentConfig};
use kk_core::format::{self, GraphInput};
use kk_core::{gen, kernels, kings, Composition, Error, GenKind, GenSpec, KernelCertificate};

use args::{Cli, Command, Format, GenArgs};
use report::*;

/// Exit statuses.
const EXIT_PRECONDITION: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_ANOMALY: u8 = 3;

/// A failed run: the core error plus, for anomalies, the instance to save.
struct Failure {
    error: Error,
    instance: Option<String>,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure { error, instance: None }
    }
}

type Outcome = Result<String, Failure>;

fn read_source(path: &str) -> Result<String, Error> {
    let mut text = String::new();
    let res = if path == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Error::Precondition(format!("cannot read `{path}`: {e}")))?;
    Ok(text)
}

fn load(path: &str) -> Result<GraphInput, Error> {
    format::parse_input(&read_source(path)?)
}

fn load_composition(path: &str) -> Result<Composition, Error> {
    match load(path)? {
        GraphInput::Composition(c) => Ok(c),
        GraphInput::Digraph(_) => Err(Error::Precondition(format!(
            "`{path}` is a plain digraph; this command needs a composition"
        ))),
    }
}

fn emit<R: Report>(fmt: Format, r: &R) -> String {
    match fmt {
        Format::Json => serde_json::to_string_pretty(r).expect("report serializes") + "\n",
        Format::Text => r.text(),
    }
}

/// Attaches the instance text to anomalies so they can be saved.
fn with_instance<T>(r: Result<T, Error>, text: impl FnOnce() -> String) -> Result<T, Failure> {
    r.map_err(|error| {
        let instance = error.is_anomaly().then(text);
        Failure { error, instance }
    })
}

fn input_text(g: &GraphInput) -> String {
    match g {
        GraphInput::Digraph(d) => format::write_digraph(d),
        GraphInput::Composition(c) => format::write_composition(c),
    }
}

fn run(cli: Cli) -> Outcome {
    let fmt = cli.format;
    match cli.command {
        Command::Kings { input, k, dot } => {
            let g = load(&input.input)?;
            if dot {
                return Ok(match &g {
                    GraphInput::Digraph(d) => d.to_dot(),
                    GraphInput::Composition(c) => c.to_dot(),
                });
            }
            let report = kings::k_kings(g.digraph(), k)?;
            let (characterization, all_kings) = match &g {
                GraphInput::Composition(c) => (
                    Some(kings::has_k_king_by_characterization(c, k)?),
                    Some(kings::all_k_kings_by_characterization(c, k)?),
                ),
                GraphInput::Digraph(_) => (None, None),
            };
            Ok(emit(fmt, &KingsOut { report, characterization, all_kings }))
        }
        Command::Classify { input } => {
            let c = load_composition(&input.input)?;
            let factors = kings::classify_three_kings(&c)?;
            let three_kings = factors.three_kings(&c);
            let outer_three_kings = factors.outer_three_kings.clone();
            Ok(emit(fmt, &ClassifyOut { factors, outer_three_kings, three_kings }))
        }
        Command::Establish { input, dot } => {
            let c = load_composition(&input.input)?;
            let established = with_instance(kings::establish(&c), || format::write_composition(&c))?;
            if dot {
                return Ok(established.to_dot());
            }
            let check = kings::can_establish(c.outer())?;
            let three_kings = kings::k_kings(established.flatten(), 3)?.kings;
            Ok(emit(
                fmt,
                &EstablishOut {
                    check,
                    original_n: c.n(),
                    composition: established,
                    three_kings,
                },
            ))
        }
        Command::Quasikernel { input } => {
            let g = load(&input.input)?;
            let mut cert = kernels::quasi_kernel(g.digraph());
            let ok = kernels::validate_certificate(g.digraph(), &cert)?;
            if !ok {
                return Err(Failure {
                    error: Error::Anomaly(format!("quasi-kernel {:?} fails validation", cert.vertices)),
                    instance: Some(input_text(&g)),
                });
            }
            cert.validated = true;
            Ok(emit(fmt, &cert))
        }
        Command::DisjointQk { input } => {
            let c = load_composition(&input.input)?;
            let (first, second) = with_instance(kernels::disjoint_quasi_kernels(&c), || format::write_composition(&c))?;
            let singleton_outer_vertices = kernels::singleton_quasi_kernel_vertices(c.outer())?;
            Ok(emit(fmt, &DisjointOut { singleton_outer_vertices, first, second }))
        }
        Command::Kkernel { input, k } => {
            let c = load_composition(&input.input)?;
            let certificate = with_instance(kernels::k_kernel_strong_semicomplete(&c, k), || format::write_composition(&c))?;
            Ok(emit(
                fmt,
                &KernelOut {
                    k,
                    n: c.n(),
                    exists: certificate.is_some(),
                    certificate,
                },
            ))
        }
        Command::Oracle { input, k, max_n } => {
            let g = load(&input.input)?;
            let certificate = kernels::k_kernel_brute_force(g.digraph(), k, max_n)?;
            Ok(emit(
                fmt,
                &KernelOut {
                    k,
                    n: g.digraph().n(),
                    exists: certificate.is_some(),
                    certificate,
                },
            ))
        }
        Command::Reduce { input, dot } => {
            let g = load(&input.input)?;
            let gadget = kernels::c3_gadget(g.digraph())?;
            if dot {
                return Ok(gadget.to_dot());
            }
            let out = InstanceOut::Composition(gadget);
            Ok(match fmt {
                Format::Json => serde_json::to_string(&out).expect("instance serializes") + "\n",
                Format::Text => out.text(),
            })
        }
        Command::Gen(a) => generate(fmt, a),
        Command::Experiment(a) => {
            let mut cfg = ExperimentConfig::new(a.id).with_max_n(a.max_n);
            if let Some(n) = a.seeds {
                cfg = cfg.with_instances(n);
            }
            if let Some(s) = a.seed {
                cfg = cfg.with_seed(s);
            }
            if let Some(cap) = std::env::var("KK_MAX_N").ok().and_then(|v| v.parse().ok()) {
                cfg.oracle_cap = cap;
            }
            let summary = experiments::run(a.id, &cfg)?;
            let out = emit(fmt, &summary);
            match &summary.first_violation {
                None => Ok(out),
                Some(v) => {
                    print!("{out}");
                    Err(Failure {
                        error: Error::Anomaly(format!(
                            "{}: {} violation(s); first at instance {}: {}",
                            summary.experiment, summary.violations, v.instance, v.message
                        )),
                        instance: Some(v.instance_text.clone()),
                    })
                }
            }
        }
        Command::Validate { input, cert } => {
            let g = load(&input.input)?;
            let d = g.digraph();
            let certificate_valid = match cert {
                Some(path) => {
                    let text = read_source(&path.to_string_lossy())?;
                    let cert: KernelCertificate =
                        serde_json::from_str(&text).map_err(|e| Error::Parse {
                            line: e.line(),
                            message: e.to_string(),
                        })?;
                    Some(kernels::validate_certificate(d, &cert)?)
                }
                None => None,
            };
            let outer = match &g {
                GraphInput::Composition(c) => Some(c.outer_report()),
                GraphInput::Digraph(_) => None,
            };
            Ok(emit(
                fmt,
                &ValidateOut {
                    n: d.n(),
                    class: d.classify(),
                    outer,
                    certificate_valid,
                },
            ))
        }
    }
}

fn generate(fmt: Format, a: GenArgs) -> Outcome {
    let kind = GenKind::from(a.kind);
    let constraints: Vec<_> = a.constraints.into_iter().map(Into::into).collect();
    let spec = if kind == GenKind::Composition {
        if a.outer == args::KindArg::Composition {
            return Err(Error::Precondition("--outer must be a digraph kind".into()).into());
        }
        if a.t < 2 {
            return Err(Error::TooFewOuterVertices { t: a.t }.into());
        }
        GenSpec::composition(a.outer.into(), a.t, a.sizes, a.seed)
    } else {
        if a.n == 0 {
            return Err(Error::Precondition("--n must be at least 1".into()).into());
        }
        GenSpec::digraph(kind, a.n, a.seed)
    }
    .with_p(a.p)
    .with_p2(a.p2)
    .with_constraints(&constraints);
    let out = if kind == GenKind::Composition {
        InstanceOut::Composition(gen::random_composition(&spec)?)
    } else {
        InstanceOut::Digraph(gen::random_digraph(&spec)?)
    };
    if a.dot {
        return Ok(match &out {
            InstanceOut::Digraph(d) => d.to_dot(),
            InstanceOut::Composition(c) => c.to_dot(),
        });
    }
    match fmt {
        Format::Json => Ok(serde_json::to_string(&out).expect("instance serializes") + "\n"),
        Format::Text => Ok(out.text()),
    }
}

fn exit_code(error: &Error) -> u8 {
    if error.is_parse() {
        EXIT_PARSE
    } else if error.is_anomaly() {
        EXIT_ANOMALY
    } else {
        EXIT_PRECONDITION
    }
}

/// Writes an anomalous instance into `dir` under a fresh name.
fn save_anomaly(dir: &Path, text: &str) -> std::io::Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_nanos()).unwrap_or(0);
    let path = dir.join(format!("kk-anomaly-{stamp}.txt"));
    std::fs::write(&path, text)?;
    Ok(path)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure { error, instance }) => {
            let code = exit_code(&error);
            match code {
                EXIT_PARSE => eprintln!("parse error: {error}"),
                EXIT_ANOMALY => {
                    eprintln!("{error}");
                    // KK_ANOMALY_DIR redirects saved instances; default is the working directory
                    let dir = std::env::var_os("KK_ANOMALY_DIR").map(PathBuf::from).unwrap_or_else(|| ".".into());
                    if let Some(text) = instance {
                        match save_anomaly(&dir, &text) {
                            Ok(p) => eprintln!("instance saved to {}", p.display()),
                            Err(e) => eprintln!("could not save instance: {e}"),
                        }
                    }
                }
                _ => match error {
                    Error::Precondition(_) => eprintln!("{error}"),
                    _ => eprintln!("precondition violated: {error}"),
                },
            }
            ExitCode::from(code)
        }
    }
}
