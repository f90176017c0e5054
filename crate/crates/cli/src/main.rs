//! `landau-pacs`: figure data, state dumps, the verification suite and the
//! cavity protocol report, all as CSV.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use landau_pacs::cavity;
use landau_pacs::diagnostics::{linspace, mandel_scan, squeezing_scan, SeriesTable};
use landau_pacs::format::{complex, g12};
use landau_pacs::measure::density_scan;
use landau_pacs::states::{parse_complex, pacs_state};
use landau_pacs::{verify, wavefun, CavityParams, Cutoffs, PhysicalScales, PolarPoint, StateLabel, C64};

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "landau-pacs", version, about = "Photon-added two-variable coherent states on Landau levels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Completeness density K_n(|beta|), n = 0..5 by default.
    Fig1(Common),
    /// Mandel Q_n(|beta|), n = 0..5 by default.
    Fig2(Common),
    /// sigma_pp vs |beta| at theta = 0 (or --theta), n = 0..5 by default.
    Fig3a(Common),
    /// sigma_pp vs |beta| at n = 2 for theta in {0, pi/6, pi/4, pi/3, pi/2}.
    Fig3b(Common),
    /// Amplitude dump of |beta, alpha; n>, or its wavefunction with --psi.
    State {
        #[command(flatten)]
        common: Common,
        /// Evaluate the wavefunction at `r,phi` (repeatable).
        #[arg(long, value_parser = parse_point)]
        psi: Vec<PolarPoint>,
    },
    /// Run every self-check; nonzero exit on any failure.
    Verify(Common),
    /// Cavity generation report.
    Cavity {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        couplings: Couplings,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// Coherent amplitude of mode a, `a+bi`.
    #[arg(long, default_value = "1", value_parser = parse_c64, allow_hyphen_values = true)]
    beta: C64,
    /// Coherent amplitude of mode b, `a+bi`.
    #[arg(long, default_value = "0.5", value_parser = parse_c64, allow_hyphen_values = true)]
    alpha: C64,
    /// Excitation order: an integer or an inclusive range `a..b`.
    #[arg(long, value_parser = parse_range)]
    n: Option<NRange>,
    /// Lower end of the |beta| grid [default: 0.05 for fig1, else 0].
    #[arg(long)]
    beta_min: Option<f64>,
    #[arg(long, default_value_t = 5.0)]
    beta_max: f64,
    #[arg(long, default_value_t = 200)]
    steps: usize,
    /// Phase of beta for fig3a.
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
    #[arg(long, default_value_t = 1.0)]
    mass: f64,
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    /// Tolerance floor for verify: a check's tolerance is max(own, tol).
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Couplings {
    /// Classical-drive coupling.
    #[arg(long, default_value_t = 20.0)]
    g: f64,
    #[arg(long, default_value_t = 1.0)]
    omega1: f64,
    #[arg(long, default_value_t = 0.5)]
    omega2: f64,
    /// Drive phase.
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    phi: f64,
    /// Photon-addition coupling.
    #[arg(long, default_value_t = 1.0)]
    mu: f64,
    /// Drive interaction time.
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    /// Photon-addition interaction time.
    #[arg(long, default_value_t = 0.05)]
    t_add: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct NRange {
    lo: usize,
    hi: usize,
}

impl NRange {
    fn list(self) -> Vec<usize> {
        (self.lo..=self.hi).collect()
    }
}

fn parse_c64(s: &str) -> Result<C64, String> {
    parse_complex(s).map_err(|e| e.to_string())
}

fn parse_range(s: &str) -> Result<NRange, String> {
    let bad = || format!("expected an integer or a range `a..b`, got `{s}`");
    match s.split_once("..") {
        Some((a, b)) => {
            let (lo, hi) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
            if lo > hi {
                return Err(format!("empty range `{s}`"));
            }
            Ok(NRange { lo, hi })
        }
        None => {
            let v = s.parse().map_err(|_| bad())?;
            Ok(NRange { lo: v, hi: v })
        }
    }
}

fn parse_point(s: &str) -> Result<PolarPoint, String> {
    let (r, phi) = s.split_once(',').ok_or_else(|| format!("expected `r,phi`, got `{s}`"))?;
    let r: f64 = r.parse().map_err(|_| format!("bad radius `{r}`"))?;
    let phi: f64 = phi.parse().map_err(|_| format!("bad angle `{phi}`"))?;
    PolarPoint::new(r, phi).map_err(|e| e.to_string())
}

enum Failure {
    Usage(String),
    Verify(Vec<String>),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

impl From<landau_pacs::Error> for Failure {
    fn from(e: landau_pacs::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

impl Common {
    fn validate(&self) -> Result<(), Failure> {
        if self.steps < 2 {
            return Err(Failure::Usage(format!("--steps must be >= 2, got {}", self.steps)));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Failure::Usage(format!("--tol must be positive, got {}", self.tol)));
        }
        Ok(())
    }

    fn scales(&self) -> Result<PhysicalScales, Failure> {
        PhysicalScales::new(self.hbar, self.mass, self.omega).map_err(|e| Failure::Usage(e.to_string()))
    }

    fn grid(&self, default_min: f64) -> Result<Vec<f64>, Failure> {
        let min = self.beta_min.unwrap_or(default_min);
        if min < 0.0 {
            return Err(Failure::Usage(format!("--beta-min must be >= 0, got {min}")));
        }
        linspace(min, self.beta_max, self.steps).map_err(|e| Failure::Usage(e.to_string()))
    }

    fn orders(&self, default: NRange) -> Vec<usize> {
        self.n.unwrap_or(default).list()
    }

    fn single_order(&self, default: usize) -> Result<usize, Failure> {
        match self.n {
            None => Ok(default),
            Some(r) if r.lo == r.hi => Ok(r.lo),
            Some(_) => Err(Failure::Usage("--n must be a single integer here".into())),
        }
    }

    fn label(&self, default_n: usize) -> Result<StateLabel, Failure> {
        StateLabel::new(self.beta, self.alpha, self.single_order(default_n)?).map_err(|e| Failure::Usage(e.to_string()))
    }

    fn stamp(&self, table: &mut SeriesTable, command: &str) {
        table.meta("command", command);
        table.meta("hbar", &g12(self.hbar));
        table.meta("mass", &g12(self.mass));
        table.meta("omega", &g12(self.omega));
        table.meta("steps", &self.steps.to_string());
    }
}

const ALL_ORDERS: NRange = NRange { lo: 0, hi: 5 };

fn fig1(c: &Common) -> Result<String, Failure> {
    let grid = c.grid(0.05)?;
    let mut t = density_scan(&c.orders(ALL_ORDERS), &grid)?;
    c.stamp(&mut t, "fig1");
    Ok(t.to_csv())
}

fn fig2(c: &Common) -> Result<String, Failure> {
    let mut t = mandel_scan(&c.orders(ALL_ORDERS), &c.grid(0.0)?);
    c.stamp(&mut t, "fig2");
    Ok(t.to_csv())
}

fn fig3a(c: &Common) -> Result<String, Failure> {
    let theta = c.theta.unwrap_or(0.0);
    let mut t = squeezing_scan(&c.orders(ALL_ORDERS), &[theta], &c.grid(0.0)?, &c.scales()?);
    c.stamp(&mut t, "fig3a");
    t.meta("theta", &g12(theta));
    Ok(t.to_csv())
}

fn fig3b(c: &Common) -> Result<String, Failure> {
    let n = c.single_order(2)?;
    let thetas = [0.0, PI / 6.0, PI / 4.0, PI / 3.0, PI / 2.0];
    let mut t = squeezing_scan(&[n], &thetas, &c.grid(0.0)?, &c.scales()?);
    c.stamp(&mut t, "fig3b");
    t.meta("n", &n.to_string());
    Ok(t.to_csv())
}

fn state(c: &Common, points: &[PolarPoint]) -> Result<String, Failure> {
    let label = c.label(1)?;
    let mut out = String::new();
    let _ = writeln!(out, "# beta={} alpha={} n={}", complex(label.beta), complex(label.alpha), label.n_exc);
    if points.is_empty() {
        let s = pacs_state(&label, label.cutoffs())?;
        let _ = writeln!(out, "# norm_sqr={}", g12(s.norm_sqr()));
        out.push_str(&s.to_dump());
        return Ok(out);
    }
    let scales = c.scales()?;
    out.push_str("r,phi,re,im\n");
    for &p in points {
        let v = wavefun::pacs_psi(&label, p, &scales);
        let _ = writeln!(out, "{},{},{},{}", g12(p.r()), g12(p.phi()), g12(v.re), g12(v.im));
    }
    Ok(out)
}

fn run_verify(c: &Common) -> Result<String, Failure> {
    let checks = verify::run_all(c.tol);
    let mut out = String::new();
    let _ = writeln!(out, "# tol_floor={}", g12(c.tol));
    out.push_str("check,status,deviation,tolerance,detail\n");
    for ch in &checks {
        out.push_str(&ch.csv_line());
        out.push('\n');
    }
    let failed: Vec<String> = checks.iter().filter(|c| !c.passed).map(|c| c.name.to_string()).collect();
    let _ = writeln!(out, "# passed {}/{}", checks.len() - failed.len(), checks.len());
    if failed.is_empty() {
        Ok(out)
    } else {
        emit(c, &out)?;
        Err(Failure::Verify(failed))
    }
}

fn run_cavity(c: &Common, k: &Couplings) -> Result<String, Failure> {
    let p = CavityParams::new(k.g, k.omega1, k.omega2, k.phi, k.mu, k.t).map_err(|e| Failure::Usage(e.to_string()))?;
    let cut = p.cutoffs();
    let effective = cavity::effective_evolve(&p, cut)?;
    let closed = cavity::closed_form_superposition(&p, cut)?;
    let h = cavity::strong_drive_hamiltonian(&p, cut)?;
    let exact = cavity::exact_evolve(&h, p.t, &cavity::initial_superposition(cut))?;
    let (lb, la) = p.labels();
    let add_cut = Cutoffs::for_parameters(c.beta.norm(), c.alpha.norm(), 2);
    let add = cavity::photon_addition(c.beta, c.alpha, k.mu, k.t_add, add_cut)?;

    let rows: Vec<(&str, String)> = vec![
        ("g", g12(p.g)),
        ("omega1", g12(p.omega1)),
        ("omega2", g12(p.omega2)),
        ("phi", g12(p.phi)),
        ("t", g12(p.t)),
        ("strong_drive", p.strong_drive().to_string()),
        ("label_beta", complex(lb)),
        ("label_alpha", complex(la)),
        ("effective_vs_closed_form_max_abs", g12(effective.max_abs_diff(&closed))),
        ("exact_vs_effective_fidelity", g12(exact.fidelity(&effective))),
        ("ground_probability_effective", g12(effective.probability(cavity::Atom::Ground))),
        ("mu", g12(p.mu)),
        ("t_add", g12(k.t_add)),
        ("beta", complex(c.beta)),
        ("alpha", complex(c.alpha)),
        ("addition_ground_probability", g12(add.ground_probability)),
        ("ground_branch_fidelity", g12(add.ground_fidelity)),
        ("excited_branch_fidelity", g12(add.excited_fidelity)),
        ("ground_branch_infidelity", g12(add.ground_infidelity)),
    ];
    let mut out = String::from("# command=cavity\nparam,value\n");
    for (k, v) in rows {
        let _ = writeln!(out, "{k},{v}");
    }
    Ok(out)
}

fn emit(c: &Common, text: &str) -> Result<(), Failure> {
    match &c.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(text.as_bytes()).context("writing to stdout")?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let (common, text) = match &cli.command {
        Command::Fig1(c) => (c, {
            c.validate()?;
            fig1(c)?
        }),
        Command::Fig2(c) => (c, {
            c.validate()?;
            fig2(c)?
        }),
        Command::Fig3a(c) => (c, {
            c.validate()?;
            fig3a(c)?
        }),
        Command::Fig3b(c) => (c, {
            c.validate()?;
            fig3b(c)?
        }),
        Command::State { common, psi } => (common, {
            common.validate()?;
            state(common, psi)?
        }),
        Command::Verify(c) => (c, {
            c.validate()?;
            run_verify(c)?
        }),
        Command::Cavity { common, couplings } => (common, {
            common.validate()?;
            run_cavity(common, couplings)?
        }),
    };
    emit(common, &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Verify(names)) => {
            eprintln!("verification failed: {}", names.join(", "));
            ExitCode::from(EXIT_VERIFY)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}
