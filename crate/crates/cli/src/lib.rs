//! The `hybrid` command line. [`run`] returns the exit code and the full
//! report so that tests can compare output byte for byte.
//!
//! Exit codes: 0 when the property holds (or Duplicator wins), 1 when it
//! fails (or Spoiler wins), 2 on usage or input errors, 3 when a resource
//! guard trips.

use std::fmt::Write;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use hybrid_core::characterization::{
    check_invariance, verify_workspace_report, CharacterizationError, Notion, WorkspaceOptions,
};
use hybrid_core::coalgebras::{
    coalgebra_number, cover_from_json, cover_to_json, minimal_generated_cover, CoverError,
};
use hybrid_core::comonads::{build_comonad_capped, ComonadError, ComonadKind, DEFAULT_PLAY_CAP};
use hybrid_core::games::{solve, trace, GameError, GameVariant, Player};
use hybrid_core::logic::{
    characteristic_formula_with, characteristic_hybrid, eval_fo, eval_hybrid, hybrid_depth, parse_fo, parse_hybrid,
    quantifier_rank, scott_formula, standard_translation, Assignment, Direction, Term,
};
use hybrid_core::structures::{from_json, ExtNat, Structure};

#[derive(Parser, Debug)]
#[command(name = "hybrid", about = "Games, comonads and logics for hybrid and bounded first-order logic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a sentence on a structure (hybrid syntax unless --fo).
    Check {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long)]
        formula: String,
        #[arg(long)]
        fo: bool,
    },
    /// Decide whether two structures agree up to the given depth.
    Equiv(GameArgs),
    /// Solve a game and print the principal line of play.
    Game(GameArgs),
    /// Materialise a comonad applied to a structure.
    Comonad {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long, value_enum, default_value_t = KindArg::Hybrid)]
        kind: KindArg,
        #[arg(long)]
        k: usize,
        /// Add the identity relation I to the carrier.
        #[arg(long)]
        with_i: bool,
    },
    /// Generated tree depth and coalgebra number, with a witness cover; or
    /// check a given cover with --cover.
    Depth {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long, value_enum, default_value_t = KindArg::Hybrid)]
        kind: KindArg,
        #[arg(long)]
        cover: Option<PathBuf>,
        /// Height bound for --cover: height minus basepoints at most K.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Build the workspace for a structure and optionally verify the
    /// copy-cat strategy.
    Workspace {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        verify: bool,
        /// Use a deliberately broken strategy (negative control).
        #[arg(long)]
        sabotage: bool,
    },
    /// Check a sentence for invariance over a corpus of structures.
    Invariance {
        #[arg(long)]
        formula: String,
        /// generated:K, disjoint or ball:K
        #[arg(long)]
        notion: String,
        /// Directory of structure files, read in name order.
        #[arg(long)]
        corpus: PathBuf,
    },
    /// Standard translation of a hybrid sentence.
    Translate {
        #[arg(long)]
        formula: String,
        /// Anchor: a variable name, or c1 for the basepoint.
        #[arg(long, default_value = "c1")]
        at: String,
    },
    /// Characteristic formula of a structure up to the given depth.
    Characteristic {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = FormulaLogic::Bf)]
        logic: FormulaLogic,
    },
}

#[derive(Args, Debug)]
struct GameArgs {
    #[arg(long)]
    left: PathBuf,
    #[arg(long)]
    right: PathBuf,
    /// hybrid → back-forth-hybrid, hybrid-temporal → back-forth-temporal,
    /// bf → back-forth-bounded, bc/bijection → bijection, fo-ef → ef,
    /// existential-hybrid, existential-bf, existential-ef, gk → comonadic-gk
    #[arg(long, value_enum)]
    logic: LogicArg,
    #[arg(long)]
    depth: usize,
    #[arg(long)]
    trace: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LogicArg {
    Hybrid,
    HybridTemporal,
    Bf,
    Bc,
    FoEf,
    ExistentialHybrid,
    ExistentialBf,
    ExistentialEf,
    Bijection,
    Gk,
}

impl LogicArg {
    fn variant(self) -> GameVariant {
        match self {
            LogicArg::Hybrid => GameVariant::BackForthHybrid,
            LogicArg::HybridTemporal => GameVariant::BackForthTemporal,
            LogicArg::Bf => GameVariant::BackForthBounded,
            LogicArg::Bc | LogicArg::Bijection => GameVariant::Bijection,
            LogicArg::FoEf => GameVariant::Ef,
            LogicArg::ExistentialHybrid => GameVariant::ExistentialHybrid,
            LogicArg::ExistentialBf => GameVariant::ExistentialBounded,
            LogicArg::ExistentialEf => GameVariant::ExistentialEf,
            LogicArg::Gk => GameVariant::ComonadicGk,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Ef,
    Modal,
    Hybrid,
    HybridTemporal,
    Bounded,
}

impl KindArg {
    fn kind(self) -> ComonadKind {
        match self {
            KindArg::Ef => ComonadKind::Ef,
            KindArg::Modal => ComonadKind::Modal,
            KindArg::Hybrid => ComonadKind::Hybrid,
            KindArg::HybridTemporal => ComonadKind::HybridTemporal,
            KindArg::Bounded => ComonadKind::Bounded,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormulaLogic {
    Bf,
    BfTemporal,
    Hybrid,
    HybridTemporal,
    Bc,
}

/// Failure of a command, mapped onto an exit code.
enum Failure {
    Usage(String),
    Resource(String),
}

impl From<GameError> for Failure {
    fn from(e: GameError) -> Self {
        match e {
            GameError::ResourceExceeded { .. } => Failure::Resource(e.to_string()),
            e => Failure::Usage(e.to_string()),
        }
    }
}

impl From<ComonadError> for Failure {
    fn from(e: ComonadError) -> Self {
        match e {
            ComonadError::TooLarge { .. } => Failure::Resource(e.to_string()),
            e => Failure::Usage(e.to_string()),
        }
    }
}

impl From<CoverError> for Failure {
    fn from(e: CoverError) -> Self {
        match e {
            CoverError::TooLarge { .. } => Failure::Resource(e.to_string()),
            CoverError::Comonad(c) => c.into(),
            e => Failure::Usage(e.to_string()),
        }
    }
}

impl From<CharacterizationError> for Failure {
    fn from(e: CharacterizationError) -> Self {
        match e {
            CharacterizationError::Budget { .. } => Failure::Resource(e.to_string()),
            CharacterizationError::Game(g) => g.into(),
            e => Failure::Usage(e.to_string()),
        }
    }
}

impl From<hybrid_core::logic::LogicError> for Failure {
    fn from(e: hybrid_core::logic::LogicError) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(bool, String), Failure>;

fn load(path: &Path) -> Result<Structure, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    from_json(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.to_string());
        }
    };
    match dispatch(cli.command) {
        Ok((holds, out)) => (if holds { 0 } else { 1 }, out),
        Err(Failure::Usage(msg)) => (2, format!("error: {msg}\n")),
        Err(Failure::Resource(msg)) => (3, format!("resource limit: {msg}\n")),
    }
}

fn dispatch(cmd: Command) -> Outcome {
    match cmd {
        Command::Check { structure, formula, fo } => check(&structure, &formula, fo),
        Command::Equiv(args) => game(args, false),
        Command::Game(args) => game(args, true),
        Command::Comonad {
            structure,
            kind,
            k,
            with_i,
        } => comonad(&structure, kind.kind(), k, with_i),
        Command::Depth { structure, kind, cover, k } => depth(&structure, kind.kind(), cover.as_deref(), k),
        Command::Workspace {
            structure,
            q,
            verify,
            sabotage,
        } => workspace(&structure, q, verify, sabotage),
        Command::Invariance { formula, notion, corpus } => invariance(&formula, &notion, &corpus),
        Command::Translate { formula, at } => translate(&formula, &at),
        Command::Characteristic { structure, depth, logic } => characteristic(&structure, depth, logic),
    }
}

fn check(path: &Path, formula: &str, fo: bool) -> Outcome {
    let s = load(path)?;
    let holds = if fo {
        eval_fo(&parse_fo(formula)?, &s, &Assignment::new())?
    } else {
        eval_hybrid(&parse_hybrid(formula)?, &s)?
    };
    Ok((holds, format!("{}: {}\n", file_name(path), if holds { "true" } else { "false" })))
}

fn game(args: GameArgs, full: bool) -> Outcome {
    let a = load(&args.left)?;
    let b = load(&args.right)?;
    let variant = args.logic.variant();
    let result = solve(&a, &b, variant, args.depth)?;
    let duplicator = result.winner == Player::Duplicator;
    let lines = trace(&result, &a, &b);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} vs {}: {} at depth {} ({})",
        file_name(&args.left),
        file_name(&args.right),
        if duplicator { "equivalent" } else { "distinguished" },
        args.depth,
        variant
    );
    if full || args.trace {
        out.push_str(&lines);
    } else if !duplicator {
        // the last line of the principal line of play says why Spoiler wins
        if let Some(reason) = lines.lines().last() {
            let _ = writeln!(out, "reason: {reason}");
        }
    }
    Ok((duplicator, out))
}

fn comonad(path: &Path, kind: ComonadKind, k: usize, with_i: bool) -> Outcome {
    let s = load(path)?;
    let c = build_comonad_capped(&s, kind, k, with_i, DEFAULT_PLAY_CAP)?;
    let mut out = format!("{} k={} plays={}\n", kind, k, c.len());
    out.push_str(&c.dump());
    if !out.ends_with('\n') {
        out.push('\n');
    }
    Ok((true, out))
}

fn depth(path: &Path, kind: ComonadKind, cover: Option<&Path>, k: Option<usize>) -> Outcome {
    let s = load(path)?;
    if let Some(cp) = cover {
        let text = fs::read_to_string(cp).map_err(|e| Failure::Usage(format!("{}: {e}", cp.display())))?;
        let t = cover_from_json(&text, &s)?;
        if let Some(x) = (0..t.len()).find(|&x| t.branch(x).is_none()) {
            return Err(CoverError::Cyclic(s.name(x).to_string()).into());
        }
        return Ok(match t.violation(&s, kind, k) {
            None => (true, format!("generated {kind} cover of height {}\n", t.height())),
            Some(v) => (false, format!("not a generated {kind} cover: {}\n", v.describe(&s))),
        });
    }
    let witness = minimal_generated_cover(&s, kind)?;
    let number = coalgebra_number(&s, kind)?;
    let mut out = String::new();
    match &witness {
        Some(t) => {
            let _ = writeln!(out, "generated tree depth: {}", t.height());
            let _ = writeln!(out, "coalgebra number: {number}");
            let _ = writeln!(out, "witness: {}", cover_to_json(t, &s));
        }
        None => {
            let _ = writeln!(out, "generated tree depth: {}", ExtNat::Infinite);
            let _ = writeln!(out, "coalgebra number: {number}");
            let _ = writeln!(out, "witness: none");
        }
    }
    Ok((witness.is_some(), out))
}

fn workspace(path: &Path, q: usize, verify: bool, sabotage: bool) -> Outcome {
    let a = load(path)?;
    let ws = hybrid_core::characterization::build_workspace(&a, q)?;
    let mut out = String::new();
    let _ = writeln!(out, "|A| = {}, q = {q}, ball radius = {}", a.len(), ws.radius);
    let _ = writeln!(out, "|N| = {}", ws.ball.len());
    let _ = writeln!(out, "|C| = {} <= 2q|A| = {}", ws.workspace.len(), ws.bound());
    if !verify {
        return Ok((ws.workspace.len() <= ws.bound(), out));
    }
    let r = verify_workspace_report(&a, q, WorkspaceOptions { sabotage, solve: true })?;
    let _ = writeln!(out, "positions replayed: {}", r.positions);
    let _ = writeln!(out, "cases I/II/III: {}/{}/{}", r.cases[0], r.cases[1], r.cases[2]);
    let _ = writeln!(out, "invariant failures: {}", r.invariant_failures.len());
    for f in &r.invariant_failures {
        let _ = writeln!(out, "  {f}");
    }
    let _ = writeln!(out, "partial isomorphism failures: {}", r.isomorphism_failures);
    let _ = writeln!(out, "strategy verified: {}", r.strategy_verified);
    if let Some(agrees) = r.solver_agrees {
        let _ = writeln!(out, "solver: Duplicator {} the {q}-round game", if agrees { "wins" } else { "loses" });
    }
    let _ = writeln!(out, "verdict: {}", if r.passed() { "pass" } else { "fail" });
    Ok((r.passed(), out))
}

fn invariance(formula: &str, notion: &str, dir: &Path) -> Outcome {
    let notion: Notion = notion.parse().map_err(Failure::Usage)?;
    let f = parse_fo(formula)?;
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let corpus = paths.iter().map(|p| load(p)).collect::<Result<Vec<_>, _>>()?;
    let report = check_invariance(&f, notion, &corpus)?;
    let mut out = format!(
        "{} comparisons over {} structures under {notion}\n",
        report.comparisons,
        corpus.len()
    );
    for c in &report.counterexamples {
        let partner = c
            .partner
            .map(|p| format!(" + {}", file_name(&paths[p])))
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "counterexample: {}{partner}: {} before, {} after",
            file_name(&paths[c.structure]),
            c.original,
            c.transformed
        );
    }
    let _ = writeln!(out, "{}", if report.invariant() { "invariant on corpus" } else { "not invariant" });
    Ok((report.invariant(), out))
}

fn translate(formula: &str, at: &str) -> Outcome {
    let h = parse_hybrid(formula)?;
    let anchor = match at.strip_prefix('c').and_then(|n| n.parse::<usize>().ok()) {
        Some(i) if i >= 1 => Term::Const(i),
        _ => Term::Var(at.to_string()),
    };
    let f = standard_translation(&h, &anchor);
    let out = format!(
        "{f}\nhybrid depth {}, quantifier rank {}\n",
        hybrid_depth(&h),
        quantifier_rank(&f)
    );
    Ok((true, out))
}

fn characteristic(path: &Path, depth: usize, logic: FormulaLogic) -> Outcome {
    let s = load(path)?;
    let text = match logic {
        FormulaLogic::Bf => characteristic_formula_with(&s, depth, Direction::Forward).to_string(),
        FormulaLogic::BfTemporal => characteristic_formula_with(&s, depth, Direction::Both).to_string(),
        FormulaLogic::Hybrid => characteristic_hybrid(&s, depth, Direction::Forward)?.to_string(),
        FormulaLogic::HybridTemporal => characteristic_hybrid(&s, depth, Direction::Both)?.to_string(),
        FormulaLogic::Bc => scott_formula(&s, depth).to_string(),
    };
    Ok((true, format!("{text}\n")))
}
