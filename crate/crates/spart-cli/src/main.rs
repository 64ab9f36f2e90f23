//! `spart`: enumerate states, compute characters, check relations, draw diagrams.

use std::io::{IsTerminal, Write};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use spart_core::characters::{
    char_vector_window, character, laurent_csv, principal_csv, series_csv, CharFamily, CharRequest, Formula,
};
use spart_core::plane::plane_degree;
use spart_core::spart::{degree, is_admissible, render_ascii};
use spart_core::verify::{run_suite, Module, State};
use spart_core::{CharSeries, FockState, GenPartition, LayerPair, MacMahonModule, ParityContext, PlaneState};

#[derive(Parser)]
#[command(name = "spart", version, about = "Fock and MacMahon modules of quantum toroidal gl(m|n)")]
struct Cli {
    /// Worker threads; output does not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the states of a module up to a number of boxes.
    Enumerate(EnumerateArgs),
    /// Compute a character by one formula, optionally comparing with others.
    Char(CharArgs),
    /// Run relation suites; exits with 1 on any failure.
    Verify(VerifyArgs),
    /// Draw one state.
    Render(RenderArgs),
}

#[derive(Args)]
struct Common {
    /// Parity string, one sign per node, e.g. `+++--`.
    #[arg(long, default_value = "+++--")]
    parity: String,
    /// Family descriptor, e.g. `fock:+:0` or `macmahon:0:gamma=3,2`.
    #[arg(long, default_value = "fock:+:0")]
    family: String,
    /// Prohibited box `a,b,k` of a MacMahon module; repeatable.
    #[arg(long, value_name = "A,B,K")]
    forbid: Vec<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Ascii,
}

#[derive(Args)]
struct EnumerateArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 4)]
    max_boxes: u32,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Print only the number of states per box count.
    #[arg(long)]
    counts: bool,
    #[arg(long, env = "SPART_COLOR", default_value = "auto")]
    color: ColorMode,
}

#[derive(Args)]
struct CharArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value = "direct")]
    formula: String,
    /// Comma-separated formulas to compare against; prints EQUAL or DIFFERENT.
    #[arg(long)]
    compare: Option<String>,
    #[arg(long, default_value_t = 6)]
    trunc: u32,
    /// Print the principal specialization as a coefficient list.
    #[arg(long)]
    principal: bool,
    #[arg(long, value_enum, default_value_t = Format::Ascii)]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Comma-separated suites: ke, kf, ladder, ef, eeff, twist, tame.
    #[arg(long, default_value = "ke,kf,ef,eeff")]
    suite: String,
    #[arg(long, default_value_t = 4)]
    max_boxes: u32,
    #[arg(long, value_enum, default_value_t = Format::Ascii)]
    format: Format,
}

#[derive(Args)]
struct RenderArgs {
    #[command(flatten)]
    common: Common,
    /// Row part of a Fock state, e.g. `3,1`.
    #[arg(long, default_value = "")]
    lambda: String,
    /// Column part of a Fock state.
    #[arg(long, default_value = "")]
    mu: String,
    /// Layers of a plane state, `λ/μ` separated by `;`, e.g. `2,1/1;1/`.
    #[arg(long)]
    layers: Option<String>,
    #[arg(long, value_enum, default_value_t = RenderFormat::Ascii)]
    format: RenderFormat,
    #[arg(long, env = "SPART_COLOR", default_value = "auto")]
    color: ColorMode,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RenderFormat {
    Ascii,
    Svg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ColorMode {
    Auto,
    Never,
    Always,
}

impl ColorMode {
    fn enabled(self) -> bool {
        match self {
            ColorMode::Always => true,
            ColorMode::Never => false,
            ColorMode::Auto => std::io::stdout().is_terminal(),
        }
    }
}

/// A usage problem (exit 2) as opposed to a failed check (exit 1).
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(flag: &str, e: impl std::fmt::Display) -> anyhow::Error {
    anyhow!(Usage(format!("--{flag}: {e}")))
}

impl Common {
    fn ctx(&self) -> Result<ParityContext> {
        self.parity.parse().map_err(|e| usage("parity", e))
    }

    fn with_forbidden(&self, mut m: MacMahonModule, ctx: &ParityContext) -> Result<MacMahonModule> {
        for f in &self.forbid {
            let c: Vec<i64> = f.split(',').map(|x| x.trim().parse()).collect::<std::result::Result<_, _>>().map_err(|e| usage("forbid", e))?;
            let cell: [i64; 3] = c.try_into().map_err(|_| usage("forbid", "expected a,b,k"))?;
            m = m.forbid(cell);
        }
        m.validate(ctx).map_err(|e| usage("forbid", e))?;
        Ok(m)
    }

    fn module(&self, ctx: &ParityContext) -> Result<Module> {
        let m = Module::parse(&self.family, ctx).map_err(|e| usage("family", e))?;
        match m {
            Module::MacMahon(mm) => Ok(Module::MacMahon(self.with_forbidden(mm, ctx)?)),
            Module::Fock(_) if !self.forbid.is_empty() => Err(usage("forbid", "only MacMahon modules have prohibited boxes")),
            other => Ok(other),
        }
    }

    fn char_family(&self, ctx: &ParityContext) -> Result<CharFamily> {
        let fam = CharFamily::parse(&self.family, ctx).map_err(|e| usage("family", e))?;
        match fam {
            CharFamily::MacMahon { module } => Ok(CharFamily::MacMahon { module: self.with_forbidden(module, ctx)? }),
            _ if !self.forbid.is_empty() => Err(usage("forbid", "only MacMahon modules have prohibited boxes")),
            other => Ok(other),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = spart_core::set_jobs(n.max(1)) {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match cli.command {
        Command::Enumerate(a) => cmd_enumerate(a),
        Command::Char(a) => cmd_char(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Render(a) => cmd_render(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.downcast_ref::<std::io::Error>().is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if e.downcast_ref::<Usage>().is_some() { 2 } else { 3 })
        }
    }
}

fn state_degree(ctx: &ParityContext, st: &State, vacuum: &State) -> Result<Vec<u32>> {
    Ok(match (st, vacuum) {
        (State::Fock(s), _) => degree(ctx, s),
        (State::Plane(s), State::Plane(v)) => plane_degree(ctx, s, v)?,
        _ => bail!("mixed state kinds"),
    })
}

/// Colors the cell glyphs of a diagram; the header line is left alone.
fn colorize(text: &str, on: bool) -> String {
    if !on {
        return text.to_string();
    }
    let paint = |line: &str| -> String {
        line.chars()
            .map(|c| match c.to_digit(36) {
                Some(v) => format!("\x1b[{}m{c}\x1b[0m", 31 + v % 6),
                None => c.to_string(),
            })
            .collect()
    };
    text.lines()
        .enumerate()
        .map(|(i, l)| if i == 0 || l.starts_with("layer ") { l.to_string() } else { paint(l) } + "\n")
        .collect()
}

fn plane_ascii(ctx: &ParityContext, st: &PlaneState) -> String {
    let family = st.module.layer_family(ctx);
    let mut out = format!("{} {}\n", st.module.descriptor(), ctx);
    for (t, layer) in st.layers.iter().enumerate() {
        out.push_str(&format!("layer {t}: {layer}\n"));
        if layer.lambda.inf == 0 && layer.mu.inf == 0 {
            let fs = FockState { family, lambda: layer.lambda.clone(), mu: layer.mu.clone(), nu: Vec::new(), wedge: Vec::new() };
            out.extend(render_ascii(ctx, &fs).lines().skip(1).map(|l| format!("  {l}\n")));
        }
    }
    out
}

fn state_ascii(ctx: &ParityContext, st: &State) -> String {
    match st {
        State::Fock(s) => render_ascii(ctx, s),
        State::Plane(s) => plane_ascii(ctx, s),
    }
}

fn cmd_enumerate(a: EnumerateArgs) -> Result<bool> {
    let ctx = a.common.ctx()?;
    let module = a.common.module(&ctx)?;
    let states = module.states(&ctx, a.max_boxes)?;
    let vacuum = module.vacuum(&ctx)?;
    let mut counts = vec![0u64; a.max_boxes as usize + 1];
    let mut out = std::io::stdout().lock();
    if a.format == Format::Csv && !a.counts {
        writeln!(out, "index,boxes,degree,state")?;
    }
    for (index, st) in states.iter().enumerate() {
        let boxes = module.boxes(&ctx, st)?;
        counts[boxes as usize] += 1;
        if a.counts {
            continue;
        }
        let deg = state_degree(&ctx, st, &vacuum)?;
        match a.format {
            Format::Json => writeln!(out, "{}", json!({ "index": index, "boxes": boxes, "degree": deg, "state": st }))?,
            Format::Csv => {
                let d: Vec<String> = deg.iter().map(u32::to_string).collect();
                writeln!(out, "{index},{boxes},{},\"{st}\"", d.join(" "))?
            }
            Format::Ascii => writeln!(out, "#{index} boxes={boxes}\n{}", colorize(&state_ascii(&ctx, st), a.color.enabled()))?,
        }
    }
    let graded: Vec<String> = counts.iter().map(u64::to_string).collect();
    if a.counts {
        writeln!(out, "{}", graded.join(","))?;
    }
    eprintln!("{} states, graded {}", states.len(), graded.join(","));
    Ok(true)
}

fn monomial_text(e: &[u32]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, x)| **x > 0)
        .map(|(i, x)| if *x == 1 { format!("z{i}") } else { format!("z{i}^{x}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" ")
    }
}

fn series_text(s: &CharSeries) -> String {
    let mut terms: Vec<(&Vec<u32>, &i64)> = s.terms().collect();
    terms.sort_by_key(|(e, _)| (e.iter().sum::<u32>(), (*e).clone()));
    let items: Vec<String> = terms
        .into_iter()
        .map(|(e, c)| match (*c, monomial_text(e)) {
            (1, m) => m,
            (c, m) if m == "1" => c.to_string(),
            (c, m) => format!("{c} {m}"),
        })
        .collect();
    if items.is_empty() {
        "0".into()
    } else {
        items.join(" + ")
    }
}

fn first_difference(a: &CharSeries, b: &CharSeries) -> Option<(Vec<u32>, i64, i64)> {
    let mut keys: Vec<&Vec<u32>> = a.terms().map(|(e, _)| e).chain(b.terms().map(|(e, _)| e)).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter().find(|e| a.coeff(e) != b.coeff(e)).map(|e| (e.clone(), a.coeff(e), b.coeff(e)))
}

fn cmd_char(a: CharArgs) -> Result<bool> {
    let ctx = a.common.ctx()?;
    let family = a.common.char_family(&ctx)?;
    let mut out = std::io::stdout().lock();
    if let CharFamily::Window { covector, periods } = family {
        let s = char_vector_window(&ctx, covector, periods);
        match a.format {
            Format::Json => writeln!(out, "{}", json!({ "family": family.descriptor(&ctx), "terms": s.terms.iter().map(|(e, c)| json!({"exponent": e, "coeff": c})).collect::<Vec<_>>() }))?,
            _ => write!(out, "{}", laurent_csv(&s, ctx.size()))?,
        }
        return Ok(true);
    }
    let formula: Formula = a.formula.parse().map_err(|e| usage("formula", e))?;
    let req = CharRequest { ctx: ctx.clone(), family: family.clone(), trunc: a.trunc, formula };
    let main = character(&req).map_err(|e| usage("formula", e))?;
    if let Some(list) = &a.compare {
        let mut all = true;
        for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let other: Formula = name.parse().map_err(|e| usage("compare", e))?;
            if other == formula {
                continue;
            }
            let s = character(&CharRequest { formula: other, ..req.clone() }).map_err(|e| usage("compare", e))?;
            match first_difference(&main, &s) {
                None => writeln!(out, "{formula} vs {other}: EQUAL")?,
                Some((e, x, y)) => {
                    all = false;
                    writeln!(out, "{formula} vs {other}: DIFFERENT at {}: {x} vs {y}", monomial_text(&e))?
                }
            }
        }
        return Ok(all);
    }
    match (a.format, a.principal) {
        (Format::Json, _) => {
            let terms: Vec<_> = main.terms().map(|(e, c)| json!({ "exponent": e, "coeff": c })).collect();
            writeln!(out, "{}", json!({ "family": family.descriptor(&ctx), "formula": formula.to_string(), "trunc": a.trunc, "principal": main.principal(), "terms": terms }))?
        }
        (_, true) => write!(out, "{}", principal_csv(&main))?,
        (Format::Csv, false) => write!(out, "{}", series_csv(&main))?,
        (Format::Ascii, false) => writeln!(out, "{}", series_text(&main))?,
    }
    Ok(true)
}

fn cmd_verify(a: VerifyArgs) -> Result<bool> {
    let ctx = a.common.ctx()?;
    let module = a.common.module(&ctx)?;
    let mut reports = Vec::new();
    for suite in a.suite.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let rs = run_suite(&ctx, &module, suite, a.max_boxes).map_err(|e| usage("suite", e))?;
        eprintln!("{suite}: {} checks, {} ms", rs.len(), rs.iter().map(|r| r.elapsed_ms).sum::<u128>());
        reports.extend(rs);
    }
    let ok = reports.iter().all(|r| r.passed());
    let mut out = std::io::stdout().lock();
    match a.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&json!({ "passed": ok, "reports": reports }))?)?,
        Format::Csv => {
            writeln!(out, "relation,module,states,failures")?;
            for r in &reports {
                writeln!(out, "{},{},{},{}", r.relation, r.module, r.states_checked, r.failures.len())?;
            }
        }
        Format::Ascii => {
            let width = reports.iter().map(|r| r.relation.len()).max().unwrap_or(8).max(8);
            writeln!(out, "{:<width$}  {:>7}  {:>8}  result", "relation", "states", "failures")?;
            for r in &reports {
                writeln!(out, "{:<width$}  {:>7}  {:>8}  {}", r.relation, r.states_checked, r.failures.len(), if r.passed() { "pass" } else { "FAIL" })?;
                for f in r.failures.iter().take(3) {
                    writeln!(out, "    {} {:?}: {}", f.state, f.nodes, f.witness)?;
                }
            }
            writeln!(out, "{}", if ok { "all passed" } else { "FAILURES" })?;
        }
    }
    Ok(ok)
}

fn parts(flag: &str, text: &str) -> Result<Vec<u32>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(|x| x.trim().parse::<u32>().map_err(|e| usage(flag, e))).collect()
}

fn fock_svg(ctx: &ParityContext, st: &FockState) -> String {
    const CELL: i64 = 24;
    let palette = ["#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4", "#42d4f4", "#f032e6", "#bfef45"];
    let origin = st.family.origin() as i64;
    let mut cells = Vec::new();
    for b in 0..st.lambda.len() as i64 {
        for t in 0..st.lambda.fin(b as usize + 1) as i64 {
            cells.push((b + t, b, t + origin));
        }
    }
    for a in 0..st.mu.len() as i64 {
        for t in 1..=st.mu.fin(a as usize + 1) as i64 {
            cells.push((a, a + t, origin - t));
        }
    }
    let w = cells.iter().map(|c| c.0 + 1).max().unwrap_or(1) * CELL;
    let h = cells.iter().map(|c| c.1 + 1).max().unwrap_or(1) * CELL;
    let mut out = format!("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\">\n");
    for (x, y, c) in cells {
        let col = ctx.node(c);
        out.push_str(&format!(
            "<rect x=\"{}\" y=\"{}\" width=\"{CELL}\" height=\"{CELL}\" fill=\"{}\" stroke=\"black\"/><text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{col}</text>\n",
            x * CELL,
            y * CELL,
            palette[col % palette.len()],
            x * CELL + CELL / 2,
            y * CELL + CELL * 2 / 3
        ));
    }
    out.push_str("</svg>\n");
    out
}

fn cmd_render(a: RenderArgs) -> Result<bool> {
    let ctx = a.common.ctx()?;
    let module = a.common.module(&ctx)?;
    let text = match (&module, &a.layers) {
        (Module::Fock(family), None) => {
            let st = FockState {
                family: *family,
                lambda: GenPartition::new(&parts("lambda", &a.lambda)?),
                mu: GenPartition::new(&parts("mu", &a.mu)?),
                nu: Vec::new(),
                wedge: Vec::new(),
            };
            if !is_admissible(&ctx, &st) {
                return Err(usage("lambda", format!("{st} is not a state of {}", family.descriptor(&ctx))));
            }
            match a.format {
                RenderFormat::Ascii => colorize(&render_ascii(&ctx, &st), a.color.enabled()),
                RenderFormat::Svg => fock_svg(&ctx, &st),
            }
        }
        (Module::MacMahon(m), Some(spec)) => {
            if a.format == RenderFormat::Svg {
                return Err(usage("format", "svg is drawn for Fock states only"));
            }
            let mut layers = Vec::new();
            for layer in spec.split(';') {
                let (l, u) = layer.split_once('/').unwrap_or((layer, ""));
                layers.push(LayerPair::new(&parts("layers", l)?, &parts("layers", u)?));
            }
            if !m.is_pure() {
                return Err(usage("layers", "explicit layers are supported for pure MacMahon modules"));
            }
            let st = PlaneState::new(m.clone(), layers);
            st.check(&ctx).map_err(|e| usage("layers", e))?;
            colorize(&plane_ascii(&ctx, &st), a.color.enabled())
        }
        (Module::Fock(_), Some(_)) => return Err(usage("layers", "Fock families take --lambda and --mu")),
        (Module::MacMahon(_), None) => return Err(usage("layers", "MacMahon modules take --layers")),
    };
    print!("{text}");
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_text_orders_by_degree() {
        let mut s = CharSeries::one(3, 2);
        s.add_term(vec![0, 1, 1], 2);
        s.add_term(vec![1, 0, 0], 1);
        assert_eq!(series_text(&s), "1 + z0 + 2 z1 z2");
    }

    #[test]
    fn cli_parses() {
        Cli::try_parse_from(["spart", "enumerate", "--family", "macmahon:0", "--forbid", "0,0,1", "--max-boxes", "4"]).unwrap();
        Cli::try_parse_from(["spart", "--jobs", "2", "char", "--formula", "fermionic", "--compare", "direct"]).unwrap();
    }
}
