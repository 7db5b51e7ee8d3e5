use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use prismdisp::cli::scenario::{CoeffSpec, MatSpec, SeriesSpec};
use prismdisp::cli::{
    report_emit, run_scenario, run_scenario_file, selftest, Command, Format, Level, RunOptions, Scenario, CATALOG_ENV,
};
use prismdisp::displays::GroupDescriptor;
use prismdisp::Error;

#[derive(Parser)]
#[command(
    name = "prismdisp",
    version,
    about = "Exact checks on truncated prisms, Breuil-Kisin modules and banal displays"
)]
struct Cli {
    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Basis-size or enumeration budget.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Envelope depth for `descend` and the kernel lemmas.
    #[arg(long, global = true)]
    depth: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the built-in invariant suites and replay the catalog.
    Selftest {
        #[arg(long, value_enum, default_value_t = Level::Quick)]
        level: Level,
        /// Scenario directory; defaults to the shipped catalog.
        #[arg(long, env = CATALOG_ENV)]
        catalog: Option<PathBuf>,
    },
    /// Validate the prism and test elements for distinguishedness.
    PrismCheck {
        #[command(flatten)]
        ring: RingArgs,
        /// Extra element to test; may be repeated.
        #[arg(long = "element")]
        elements: Vec<String>,
    },
    /// Classify a Breuil-Kisin module given by `mu` and `X`, or by `F / E^k`.
    Bk {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        mu: Option<String>,
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        f: Option<String>,
        #[arg(long)]
        k: Option<u32>,
    },
    /// Check a banal display and, with `--g`, the action of a group element.
    Display {
        #[command(flatten)]
        ring: RingArgs,
        #[command(flatten)]
        display: DisplayArgs,
        #[arg(long)]
        g: Option<String>,
    },
    /// Solve for the descent isomorphism over the coproduct prism.
    Descend {
        #[command(flatten)]
        ring: RingArgs,
        #[command(flatten)]
        display: DisplayArgs,
    },
    /// Run a scenario file.
    Run { file: PathBuf },
}

#[derive(Args)]
struct RingArgs {
    #[arg(long, default_value_t = 2)]
    p: u64,
    /// p-adic precision.
    #[arg(long, default_value_t = 3)]
    n: u32,
    /// Number of series variables.
    #[arg(long, default_value_t = 1)]
    r: usize,
    /// Total-degree truncation.
    #[arg(long, default_value_t = 4)]
    m: u32,
    /// Orientation generator.
    #[arg(long, default_value = "2 + t")]
    e: String,
}

#[derive(Args)]
struct DisplayArgs {
    /// Weights, comma separated, e.g. `1,0`.
    #[arg(long, allow_hyphen_values = true)]
    mu: String,
    /// Rows separated by `;`, entries by `,`; the identity if omitted.
    #[arg(long)]
    x: Option<String>,
    #[arg(long, default_value = "gl")]
    group: String,
}

fn parse_mu(s: &str) -> Result<Vec<i64>, Error> {
    s.split(',').map(|w| w.trim().parse().map_err(|_| Error::Usage(format!("bad weight '{w}'")))).collect()
}

fn parse_mat(s: &str) -> MatSpec {
    s.split(';').map(|r| r.split(',').map(|a| a.trim().to_string()).collect()).collect()
}

fn identity(n: usize) -> MatSpec {
    (0..n).map(|i| (0..n).map(|j| if i == j { "1" } else { "0" }.to_string()).collect()).collect()
}

fn base(ring: &RingArgs, command: Command) -> Scenario {
    Scenario {
        id: command.name().into(),
        command,
        expect: None,
        e: ring.e.clone(),
        mu: None,
        depth: None,
        elements: None,
        x: None,
        g: None,
        f: None,
        k: None,
        coeff: CoeffSpec { p: ring.p, n: ring.n, f: None, pi: None, sigma_x: None, q: None },
        series: SeriesSpec { r: ring.r, m: ring.m },
        group: None,
    }
}

fn with_display(mut sc: Scenario, d: &DisplayArgs) -> Result<Scenario, Error> {
    let mu = parse_mu(&d.mu)?;
    let n = mu.len();
    sc.group = Some(match d.group.as_str() {
        "gl" => GroupDescriptor::Gl(n),
        "orth" => GroupDescriptor::Orth(n),
        other => return Err(Error::Usage(format!("unknown group '{other}'"))),
    });
    sc.x = Some(d.x.as_deref().map_or_else(|| identity(n), parse_mat));
    sc.mu = Some(mu);
    Ok(sc)
}

fn scenario(cmd: &Cmd) -> Result<Scenario, Error> {
    Ok(match cmd {
        Cmd::PrismCheck { ring, elements } => {
            let mut sc = base(ring, Command::PrismCheck);
            sc.elements = Some(elements.clone());
            sc
        }
        Cmd::Bk { ring, mu, x, f, k } => {
            let mut sc = base(ring, Command::Bk);
            sc.mu = mu.as_deref().map(parse_mu).transpose()?;
            sc.x = x.as_deref().map(parse_mat);
            sc.f = f.as_deref().map(parse_mat);
            sc.k = *k;
            sc
        }
        Cmd::Display { ring, display, g } => {
            let mut sc = with_display(base(ring, Command::Display), display)?;
            sc.g = g.as_deref().map(parse_mat);
            sc
        }
        Cmd::Descend { ring, display } => with_display(base(ring, Command::Descend), display)?,
        Cmd::Selftest { .. } | Cmd::Run { .. } => unreachable!("handled by the caller"),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let opts = RunOptions { seed: cli.seed, budget: cli.budget, depth: cli.depth, ..RunOptions::default() };
    let report = match &cli.cmd {
        Cmd::Selftest { level, catalog } => {
            let dir = catalog.clone().unwrap_or_else(prismdisp::cli::builtin_catalog);
            let summary = selftest(*level, cli.seed, Some(&dir));
            print!("{}", report_emit(&summary, cli.format));
            return ExitCode::from(summary.status.exit_code() as u8);
        }
        Cmd::Run { file } => run_scenario_file(file, &opts),
        cmd => scenario(cmd).and_then(|sc| run_scenario(&sc, &opts)),
    };
    match report {
        Ok(r) => {
            print!("{}", report_emit(&r, cli.format));
            ExitCode::from(r.status.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
