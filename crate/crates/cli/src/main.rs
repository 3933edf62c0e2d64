//! Command-line front end. Exit status 0 means true or success, 1 false or a
//! negative answer, 2 a usage, input or evaluation error.

mod upsilon;

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use canonlogic::aristotelian::{
    benc, canonical_order, canonize, reconstruct, uenc_length, BencString,
};
use canonlogic::cfg::{Cnf, Grammar};
use canonlogic::charsets::{member_s_cfg, member_s_npconp, member_s_ord, member_s_unord, SetKind};
use canonlogic::eval::Evaluator;
use canonlogic::forms::{CanonicalForm, Class, Extra, FormKind, FormSpec};
use canonlogic::logic::{
    apply_t_ord, apply_t_unord, fragment_of, godel_decode, godel_encode, parse, psi_encode,
    psi_recognize,
};
use canonlogic::machine::{
    decode_tm, encode_tm, is_reduction_upto, library, run, Kind, Machine, RunLimits,
};
use canonlogic::{is_isomorphic, Bits, Formula, Structure, Vocabulary};

use upsilon::Config;

// Writes to stdout, ignoring a closed pipe.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = write!(std::io::stdout().lock(), $($t)*);
    }};
}

macro_rules! outln {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

#[derive(Parser)]
#[command(name = "canonlogic", version, about = "Finite-model-theory workbench")]
struct Cli {
    /// Nesting budget for characteristic leaves.
    #[arg(long, global = true, default_value_t = 8)]
    depth: u32,
    /// Worker threads for bounded enumerations; 1 runs sequentially.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Model-check a sentence on a structure.
    Mc {
        structure: PathBuf,
        sentence: PathBuf,
    },
    /// Binary encoding of a structure.
    Enc { structure: PathBuf },
    /// Structure from its binary encoding.
    Dec {
        #[arg(long)]
        vocab: String,
        bits: String,
    },
    /// Condensed encoding of an Aristotelian structure.
    Benc { structure: PathBuf },
    /// Length of the unary encoding of an Aristotelian structure.
    UencLen { structure: PathBuf },
    /// Aristotelian structure from its condensed encoding.
    Reconstruct {
        #[arg(long)]
        vocab: String,
        bits: String,
    },
    /// Isomorphism test.
    Iso { a: PathBuf, b: PathBuf },
    /// Canonical relabeling of an Aristotelian structure.
    Canon { structure: PathBuf },
    /// Move a distinguished sentence to a target vocabulary.
    OpApply {
        #[arg(long, value_enum)]
        mode: Order,
        #[arg(long)]
        tau: String,
        sentence: PathBuf,
        #[arg(long, value_enum, default_value_t = Emit::Text)]
        emit: Emit,
    },
    /// Encoding sentences.
    #[command(subcommand)]
    Psi(PsiCmd),
    /// Oracle machines.
    #[command(subcommand)]
    Tm(TmCmd),
    /// Context-free grammars.
    #[command(subcommand)]
    Cfg(CfgCmd),
    /// Characteristic sets.
    #[command(subcommand)]
    Charset(CharsetCmd),
    /// Canonical forms.
    #[command(subcommand)]
    Form(FormCmd),
    /// Search for a counter-model of size at most --nmax.
    ValidUpto {
        sentence: PathBuf,
        #[arg(long)]
        vocab: String,
        #[arg(long, default_value_t = 3)]
        nmax: usize,
    },
    /// Search for a structure of size at most --nmax separating two sentences.
    ModeqUpto {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        vocab: String,
        #[arg(long, default_value_t = 3)]
        nmax: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    Ord,
    Unord,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    /// Formula text.
    Text,
    /// Gödel code.
    Bits,
    /// Extracted components.
    Components,
}

#[derive(Clone, Copy, ValueEnum)]
enum MachineKind {
    Polytime,
    Logspace,
}

#[derive(Subcommand)]
enum PsiCmd {
    /// Encoding sentence for a nonempty bit string
    Encode { bits: String },
    /// Bits spelled by an encoding sentence
    Recognize { sentence: PathBuf },
}

#[derive(Subcommand)]
enum TmCmd {
    /// Run a machine with a model oracle.
    Run {
        machine: PathBuf,
        input: String,
        #[arg(long)]
        oracle: PathBuf,
        #[arg(long)]
        vocab: String,
        #[arg(long)]
        max_steps: Option<u64>,
    },
    /// Machine text to its code
    Encode {
        machine: PathBuf,
    },
    /// Machine code to text
    Decode {
        bits: String,
    },
    /// Print a built-in machine: copy, always-reject, always-accept or right-walk.
    Library {
        name: String,
        #[arg(long, value_enum, default_value_t = MachineKind::Polytime)]
        kind: MachineKind,
    },
    /// Search for a structure on which the machine is not a reduction.
    CheckReduction {
        machine: PathBuf,
        #[arg(long)]
        gamma: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        vocab: String,
        #[arg(long, default_value_t = 3)]
        nmax: usize,
    },
}

#[derive(Subcommand)]
enum CfgCmd {
    /// Membership of a word (`eps` for the empty word)
    Member {
        grammar: PathBuf,
        word: String,
    },
    /// Least word of length at most --lenmax outside the language.
    Missing {
        grammar: PathBuf,
        #[arg(long, default_value_t = 6)]
        lenmax: usize,
    },
    /// Chomsky normal form.
    Cnf {
        grammar: PathBuf,
    },
}

#[derive(Subcommand)]
enum CharsetCmd {
    /// Membership of a structure in a characteristic set
    Member {
        #[arg(long)]
        kind: String,
        structure: PathBuf,
        #[arg(long)]
        gamma: Option<PathBuf>,
        #[arg(long)]
        machine: Option<PathBuf>,
        #[arg(long)]
        target: Option<PathBuf>,
        #[arg(long)]
        lambda: Option<PathBuf>,
        #[arg(long)]
        grammar: Option<PathBuf>,
    },
}

#[derive(Args)]
struct FormArgs {
    #[arg(long)]
    kind: FormKind,
    /// Class tag; defaults to NP, or NPcoNP for npconp8.
    #[arg(long)]
    class: Option<Class>,
    #[arg(long)]
    tau: String,
    /// Distinguished sentence over the base vocabulary.
    #[arg(long)]
    upsilon: Option<PathBuf>,
    /// TOML file mapping class tags to distinguished sentence files.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum FormCmd {
    /// Assemble a canonical form from its components
    Build {
        #[command(flatten)]
        spec: FormArgs,
        #[arg(long)]
        gamma: PathBuf,
        #[arg(long)]
        machine: Option<PathBuf>,
        #[arg(long)]
        lambda: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Emit::Text)]
        emit: Emit,
    },
    /// Check a sentence against a form kind and print its components
    Recognize {
        #[command(flatten)]
        spec: FormArgs,
        sentence: PathBuf,
    },
    /// List forms of a kind in canonical order
    Enumerate {
        #[command(flatten)]
        spec: FormArgs,
        /// Number of forms.
        #[arg(long, default_value_t = 20)]
        budget: usize,
        #[arg(long, value_enum, default_value_t = Emit::Text)]
        emit: Emit,
    },
}

fn read_text(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub(crate) fn read_sentence(path: &Path) -> Result<Formula> {
    let text: String = read_text(path)?
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .collect::<Vec<_>>()
        .join("\n");
    parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_structure(path: &Path) -> Result<Structure> {
    Structure::parse(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn read_machine(path: &Path) -> Result<Machine> {
    read_text(path)?
        .parse()
        .with_context(|| format!("parsing {}", path.display()))
}

fn read_grammar(path: &Path) -> Result<Grammar> {
    read_text(path)?
        .parse()
        .with_context(|| format!("parsing {}", path.display()))
}

fn vocab(s: &str) -> Result<Vocabulary> {
    Vocabulary::parse(s).with_context(|| format!("vocabulary {s:?}"))
}

/// A literal bit string, or `-` for one on standard input.
fn bits(s: &str) -> Result<Bits> {
    let text = if s == "-" {
        read_text(Path::new("-"))?
    } else {
        s.to_string()
    };
    text.trim().parse().map_err(|e| anyhow!("bit string: {e}"))
}

fn verdict(b: bool) -> ExitCode {
    outln!("{b}");
    if b {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

/// `none` and success, or the structure and failure.
fn counterexample(found: Option<Structure>) -> ExitCode {
    match found {
        None => {
            outln!("none");
            ExitCode::SUCCESS
        }
        Some(s) => {
            out!("{s}");
            ExitCode::from(1)
        }
    }
}

fn form_spec(args: &FormArgs) -> Result<FormSpec> {
    let class = args.class.unwrap_or(if args.kind == FormKind::NpConp8 {
        Class::NpConp
    } else {
        Class::Np
    });
    let config = args.config.as_deref().map(Config::load).transpose()?;
    let u = upsilon::resolve(args.kind, class, args.upsilon.as_deref(), config.as_ref())?;
    Ok(FormSpec::new(
        args.kind,
        class,
        &vocab(&args.tau)?,
        u.as_ref(),
    )?)
}

fn print_components(gamma: &Formula, extra: &Extra) {
    outln!("gamma {gamma}");
    match extra {
        Extra::Machine(t) => {
            outln!("machine {}", encode_tm(t));
            out!("{t}");
        }
        Extra::Lambda(l) => outln!("lambda {l}"),
    }
}

fn emit_form(form: &CanonicalForm, emit: Emit) {
    match emit {
        Emit::Text => outln!("{}", form.formula),
        Emit::Bits => outln!("{}", godel_encode(&form.formula)),
        Emit::Components => print_components(&form.components.gamma, &form.components.extra),
    }
}

fn exec(cli: Cli) -> Result<ExitCode> {
    let ev = Evaluator::new(cli.depth, cli.jobs);
    Ok(match cli.cmd {
        Cmd::Mc {
            structure,
            sentence,
        } => verdict(ev.models(&read_structure(&structure)?, &read_sentence(&sentence)?)?),
        Cmd::Enc { structure } => {
            outln!("{}", read_structure(&structure)?.encode_bin());
            ExitCode::SUCCESS
        }
        Cmd::Dec { vocab: v, bits: b } => {
            out!("{}", Structure::decode_bin(vocab(&v)?, &bits(&b)?)?);
            ExitCode::SUCCESS
        }
        Cmd::Benc { structure } => {
            outln!("{}", benc(&read_structure(&structure)?)?.bits());
            ExitCode::SUCCESS
        }
        Cmd::UencLen { structure } => {
            outln!("{}", uenc_length(&read_structure(&structure)?)?);
            ExitCode::SUCCESS
        }
        Cmd::Reconstruct { vocab: v, bits: b } => {
            let v = vocab(&v)?;
            let m = v.len();
            let code = BencString::parse(bits(&b)?, m)?;
            out!("{}", reconstruct(&v, &code)?);
            ExitCode::SUCCESS
        }
        Cmd::Iso { a, b } => verdict(is_isomorphic(&read_structure(&a)?, &read_structure(&b)?)?),
        Cmd::Canon { structure } => {
            let a = read_structure(&structure)?;
            let perm = canonical_order(&a)?;
            outln!(
                "order {}",
                perm.iter()
                    .map(|i| i.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            );
            out!("{}", canonize(&a)?);
            ExitCode::SUCCESS
        }
        Cmd::OpApply {
            mode,
            tau,
            sentence,
            emit,
        } => {
            let u = read_sentence(&sentence)?;
            let tau = vocab(&tau)?;
            let f = match mode {
                Order::Ord => apply_t_ord(&u, &tau)?,
                Order::Unord => apply_t_unord(&u, &tau)?,
            };
            match emit {
                Emit::Bits => outln!("{}", godel_encode(&f)),
                _ => outln!("{f}"),
            }
            ExitCode::SUCCESS
        }
        Cmd::Psi(PsiCmd::Encode { bits: b }) => {
            outln!("{}", psi_encode(&bits(&b)?)?);
            ExitCode::SUCCESS
        }
        Cmd::Psi(PsiCmd::Recognize { sentence }) => match psi_recognize(&read_sentence(&sentence)?)
        {
            Some(w) => {
                outln!("{w}");
                ExitCode::SUCCESS
            }
            None => {
                outln!("none");
                ExitCode::from(1)
            }
        },
        Cmd::Tm(cmd) => tm(cmd)?,
        Cmd::Cfg(cmd) => cfg(cmd)?,
        Cmd::Charset(CharsetCmd::Member {
            kind,
            structure,
            gamma,
            machine,
            target,
            lambda,
            grammar,
        }) => {
            let a = read_structure(&structure)?;
            let need = |p: &Option<PathBuf>, flag: &str| -> Result<Formula> {
                read_sentence(
                    p.as_deref()
                        .ok_or_else(|| anyhow!("--{flag} is required"))?,
                )
            };
            let kind = SetKind::from_name(&kind).ok_or_else(|| {
                anyhow!("unknown set kind {kind:?}: expected ord, unord, npconp or cfg")
            })?;
            let b = match kind {
                SetKind::Ord | SetKind::Unord => {
                    let t = read_machine(
                        machine
                            .as_deref()
                            .ok_or_else(|| anyhow!("--machine is required"))?,
                    )?;
                    let (g, u) = (need(&gamma, "gamma")?, need(&target, "target")?);
                    if kind == SetKind::Ord {
                        member_s_ord(&a, &g, &t, &u)?
                    } else {
                        member_s_unord(&a, &g, &t, &u)?
                    }
                }
                SetKind::NpConp => {
                    member_s_npconp(&a, &need(&lambda, "lambda")?, &need(&gamma, "gamma")?)?
                }
                SetKind::Cfg => member_s_cfg(
                    &a,
                    &read_grammar(
                        grammar
                            .as_deref()
                            .ok_or_else(|| anyhow!("--grammar is required"))?,
                    )?,
                ),
            };
            verdict(b)
        }
        Cmd::Form(cmd) => form(cmd)?,
        Cmd::ValidUpto {
            sentence,
            vocab: v,
            nmax,
        } => counterexample(ev.valid_upto(&read_sentence(&sentence)?, &vocab(&v)?, nmax)?),
        Cmd::ModeqUpto {
            a,
            b,
            vocab: v,
            nmax,
        } => counterexample(ev.mod_eq_upto(
            &read_sentence(&a)?,
            &read_sentence(&b)?,
            &vocab(&v)?,
            nmax,
        )?),
    })
}

fn tm(cmd: TmCmd) -> Result<ExitCode> {
    Ok(match cmd {
        TmCmd::Run {
            machine,
            input,
            oracle,
            vocab: v,
            max_steps,
        } => {
            let t = read_machine(&machine)?;
            let out = run(
                &t,
                &bits(&input)?,
                &read_sentence(&oracle)?,
                &vocab(&v)?,
                RunLimits { max_steps },
            )?;
            outln!(
                "{} halt={:?} steps={} queries={}",
                if out.accepted() { "accept" } else { "reject" },
                out.halt,
                out.steps,
                out.queries
            );
            if out.accepted() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        TmCmd::Encode { machine } => {
            outln!("{}", encode_tm(&read_machine(&machine)?));
            ExitCode::SUCCESS
        }
        TmCmd::Decode { bits: b } => {
            out!("{}", decode_tm(&bits(&b)?)?);
            ExitCode::SUCCESS
        }
        TmCmd::Library { name, kind } => {
            let kind = match kind {
                MachineKind::Polytime => Kind::Polytime,
                MachineKind::Logspace => Kind::Logspace,
            };
            let t = library::by_name(&name, kind)
                .ok_or_else(|| anyhow!("no built-in machine {name:?}"))?;
            out!("{t}");
            ExitCode::SUCCESS
        }
        TmCmd::CheckReduction {
            machine,
            gamma,
            target,
            vocab: v,
            nmax,
        } => counterexample(is_reduction_upto(
            &read_machine(&machine)?,
            &read_sentence(&gamma)?,
            &read_sentence(&target)?,
            &vocab(&v)?,
            nmax,
        )?),
    })
}

fn cfg(cmd: CfgCmd) -> Result<ExitCode> {
    Ok(match cmd {
        CfgCmd::Member { grammar, word } => {
            let g = read_grammar(&grammar)?;
            let w = if word == "eps" { "" } else { word.as_str() };
            verdict(Cnf::new(&g).member(w)?)
        }
        CfgCmd::Missing { grammar, lenmax } => {
            match Cnf::new(&read_grammar(&grammar)?).find_missing(lenmax) {
                None => {
                    outln!("none");
                    ExitCode::SUCCESS
                }
                Some(w) => {
                    outln!("{}", if w.is_empty() { "eps" } else { &w });
                    ExitCode::from(1)
                }
            }
        }
        CfgCmd::Cnf { grammar } => {
            out!("{}", Cnf::new(&read_grammar(&grammar)?).grammar());
            ExitCode::SUCCESS
        }
    })
}

fn form(cmd: FormCmd) -> Result<ExitCode> {
    Ok(match cmd {
        FormCmd::Build {
            spec,
            gamma,
            machine,
            lambda,
            emit,
        } => {
            let s = form_spec(&spec)?;
            let extra = match (machine, lambda) {
                (Some(m), None) => Extra::Machine(read_machine(&m)?),
                (None, Some(l)) => Extra::Lambda(read_sentence(&l)?),
                _ => bail!("pass exactly one of --machine and --lambda"),
            };
            emit_form(&s.build(&read_sentence(&gamma)?, &extra)?, emit);
            ExitCode::SUCCESS
        }
        FormCmd::Recognize { spec, sentence } => {
            let s = form_spec(&spec)?;
            let text = read_text(&sentence)?;
            // accept either formula text or a Gödel code
            let phi = match text.trim().parse::<Bits>() {
                Ok(b) if !b.is_empty() => godel_decode(&b)?,
                _ => read_sentence(&sentence)?,
            };
            match s.recognize(&phi) {
                Some(c) => {
                    outln!("true");
                    print_components(&c.gamma, &c.extra);
                    ExitCode::SUCCESS
                }
                None => {
                    outln!("false");
                    ExitCode::from(1)
                }
            }
        }
        FormCmd::Enumerate { spec, budget, emit } => {
            let s = form_spec(&spec)?;
            for (i, form) in s.enumerate().take(budget).enumerate() {
                if emit == Emit::Components {
                    outln!("# {i} {}", fragment_of(&form.components.gamma));
                }
                emit_form(&form, emit);
            }
            ExitCode::SUCCESS
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match exec(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
