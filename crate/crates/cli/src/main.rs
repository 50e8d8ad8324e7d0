use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use std::io::Write;
use std::path::PathBuf;
use twostep::classify::qp_representatives;
use twostep::guess::{DEFAULT_ALG_BOUNDS, DEFAULT_HELDOUT, DEFAULT_ODE_BOUNDS};
use twostep::{Dir, Plane, Rule};
use twostep_cli::commands::{self, GuessArgs, SeriesArgs};
use twostep_cli::input::{parse_dir, parse_plane, parse_rule, parse_weight};
use twostep_cli::output::{failed, input, CliError, Output, EXIT_INPUT, EXIT_MISMATCH};
use twostep_cli::spiral::spiral_asymptotics;
use twostep_cli::survey::{run_survey, Scope, SurveyConfig};

/// Walks on the square lattice obeying two-step rules.
///
/// Rules are given as 16-digit bitstrings (row-major over E, N, W, S, dots
/// optional), as the integer form 0..=65535, or as `spiral`.
#[derive(Parser)]
#[command(name = "twostep", version)]
struct Cli {
    /// Write CSV instead of JSON.
    #[arg(long, global = true)]
    csv: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct RuleArg {
    #[arg(long, value_parser = parse_rule)]
    rule: Rule,
}

#[derive(Subcommand)]
enum Cmd {
    /// Bitstring and integer form of a rule given as an integer or as rows
    /// separated by `.`, `/` or `,`.
    Encode { value: String },
    /// Integer form and matrix of a bitstring.
    Decode { bitstring: String },
    /// Classification predicates and set memberships.
    Classify(RuleArg),
    /// Census of rules by class and isomorphism type.
    Census {
        /// Compare with the published table; exit 2 on any difference.
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 1)]
        shards: usize,
        /// Count orbits directly instead of by Burnside's lemma.
        #[arg(long)]
        orbits: bool,
    },
    /// Walk counts by length, last step and axis contact.
    Series {
        #[command(flatten)]
        rule: RuleArg,
        #[arg(long, value_parser = parse_plane, default_value = "full")]
        plane: Plane,
        #[arg(long, default_value_t = 10)]
        length: usize,
        /// Boltzmann weights for the endpoint statistics.
        #[arg(long, num_args = 2, value_names = ["X", "Y"], value_parser = parse_weight)]
        weights: Option<Vec<BigRational>>,
        /// Restrict the weighted statistics to walks ending with this step.
        #[arg(long, value_parser = parse_dir)]
        theta: Option<Dir>,
        /// One row per length and endpoint.
        #[arg(long)]
        by_endpoint: bool,
        /// Fractions of walks ending on the axes and at the origin.
        #[arg(long)]
        axis_stats: bool,
    },
    /// A generating-function block in canonical text form.
    Genfun {
        #[command(flatten)]
        rule: RuleArg,
        #[arg(long, value_parser = parse_dir, default_value = "e")]
        theta: Dir,
        /// F, X, Z, A, B, C, D, L, J, G_e, G_n, G_w, G_s, H, Hstar or equation.
        #[arg(long, default_value = "F")]
        block: String,
        /// Also print the t-expansion to O(t^(N+1)).
        #[arg(long, value_name = "N")]
        series: Option<usize>,
    },
    /// Growth rate, drift and half-plane regime at weights (x, y).
    Asymptotics {
        #[command(flatten)]
        rule: RuleArg,
        #[arg(long, default_value = "1", value_parser = parse_weight)]
        x: BigRational,
        #[arg(long, default_value = "1", value_parser = parse_weight)]
        y: BigRational,
        #[arg(long)]
        half_plane: bool,
    },
    /// The group generated by the involutions fixing B_theta.
    Group {
        #[command(flatten)]
        rule: RuleArg,
        #[arg(long, value_parser = parse_dir, default_value = "e")]
        theta: Dir,
        #[arg(long, default_value_t = twostep::group::DEFAULT_CAP)]
        cap: usize,
    },
    /// Orbit-sum solution of the quarter-plane equation to O(t^(N+1)).
    OrbitSum {
        #[command(flatten)]
        rule: RuleArg,
        #[arg(long, value_parser = parse_dir, default_value = "e")]
        theta: Dir,
        #[arg(long, default_value_t = 10)]
        order: usize,
        /// Rational function giving the part of Q_theta on the y-axis.
        #[arg(long)]
        known_axis: Option<String>,
    },
    /// Guess a linear ODE or an algebraic equation for the counts at (1, 1).
    Guess {
        #[command(flatten)]
        rule: RuleArg,
        #[arg(long, value_parser = parse_plane, default_value = "quarter")]
        plane: Plane,
        /// Use the walks ending with this step instead of all walks.
        #[arg(long, value_parser = parse_dir)]
        theta: Option<Dir>,
        #[arg(long, default_value_t = 500)]
        terms: usize,
        #[arg(long)]
        algebraic: bool,
        /// Maximal (order, degree), or (Q-degree, t-degree) with --algebraic.
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        bounds: Option<Vec<usize>>,
        #[arg(long, default_value_t = DEFAULT_HELDOUT)]
        heldout: usize,
        /// Only scan the counts modulo 2^31 - 1.
        #[arg(long)]
        modular: bool,
        /// Solve over Q directly instead of modular solving and lifting.
        #[arg(long)]
        exact_solver: bool,
    },
    /// Group orders and guesses for every canonical quarter-plane rule.
    Survey {
        #[arg(long, value_parser = Scope::parse, default_value = "both")]
        scope: Scope,
        /// JSON-lines file; existing records are kept and skipped.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 500)]
        terms: usize,
        #[arg(long, default_value_t = twostep::group::DEFAULT_CAP)]
        cap: usize,
        /// Compute only G_e.
        #[arg(long)]
        assume_theta_independent: bool,
        #[arg(long, num_args = 2, value_names = ["R", "D"])]
        ode_bounds: Option<Vec<usize>>,
        #[arg(long, num_args = 2, value_names = ["DQ", "DT"])]
        alg_bounds: Option<Vec<usize>>,
        #[arg(long, default_value_t = DEFAULT_HELDOUT)]
        heldout: usize,
        /// Exact counts and lifted relations instead of scans mod 2^31 - 1.
        #[arg(long)]
        exact: bool,
        /// Survey these rules instead of all canonical representatives.
        #[arg(long, value_delimiter = ',', value_parser = parse_rule)]
        rules: Option<Vec<Rule>>,
        /// Only the first N representatives in bitstring order.
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long)]
        threads: Option<usize>,
        /// Add per-record timings (records are then no longer reproducible).
        #[arg(long)]
        timings: bool,
    },
    /// Fitted constants of the quarter-plane spiral counts.
    SpiralAsymptotics {
        #[arg(long, default_value_t = 600)]
        m_max: usize,
        /// Degree of the polynomial in 1/m.
        #[arg(long, default_value_t = 4)]
        degree: usize,
        /// Exit 2 unless every fit is within tolerance.
        #[arg(long)]
        verify: bool,
    },
}

fn pair(v: Option<Vec<usize>>, default: (usize, usize)) -> (usize, usize) {
    v.map_or(default, |v| (v[0], v[1]))
}

fn run(cmd: Cmd) -> Result<Output, CliError> {
    match cmd {
        Cmd::Encode { value } => commands::encode(&value),
        Cmd::Decode { bitstring } => commands::decode(&bitstring),
        Cmd::Classify(r) => commands::classify(r.rule),
        Cmd::Census { verify, shards, orbits } => commands::census(verify, shards, orbits),
        Cmd::Series { rule, plane, length, weights, theta, by_endpoint, axis_stats } => commands::series(&SeriesArgs {
            rule: rule.rule,
            plane,
            length,
            weights: weights.map(|w| (w[0].clone(), w[1].clone())),
            theta,
            by_endpoint,
            axis_stats,
        }),
        Cmd::Genfun { rule, theta, block, series } => commands::genfun(rule.rule, theta, &block, series),
        Cmd::Asymptotics { rule, x, y, half_plane } => commands::asymptotics(rule.rule, &x, &y, half_plane),
        Cmd::Group { rule, theta, cap } => commands::group(rule.rule, theta, cap),
        Cmd::OrbitSum { rule, theta, order, known_axis } => {
            commands::orbit_sum(rule.rule, theta, order, known_axis.as_deref())
        }
        Cmd::Guess { rule, plane, theta, terms, algebraic, bounds, heldout, modular, exact_solver } => {
            let default = if algebraic { DEFAULT_ALG_BOUNDS } else { DEFAULT_ODE_BOUNDS };
            commands::guess(&GuessArgs {
                rule: rule.rule,
                plane,
                theta,
                terms,
                algebraic,
                bounds: pair(bounds, default),
                heldout,
                modular,
                exact_solver,
            })
        }
        Cmd::Survey {
            scope,
            out,
            terms,
            cap,
            assume_theta_independent,
            ode_bounds,
            alg_bounds,
            heldout,
            exact,
            rules,
            limit,
            threads,
            timings,
        } => {
            let cfg = SurveyConfig {
                scope,
                cap,
                assume_theta_independent,
                terms,
                ode_bounds: pair(ode_bounds, DEFAULT_ODE_BOUNDS),
                alg_bounds: pair(alg_bounds, DEFAULT_ALG_BOUNDS),
                heldout,
                exact,
                timings,
            };
            let mut rules = rules.unwrap_or_else(qp_representatives);
            if let Some(n) = limit {
                rules.truncate(n);
            }
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads.unwrap_or(0)).build().map_err(failed)?;
            let mut stdout = std::io::stdout();
            let summary = pool.install(|| run_survey(&rules, &cfg, out.as_deref(), &mut stdout))?;
            Ok(Output::json(summary.to_json()))
        }
        Cmd::SpiralAsymptotics { m_max, degree, verify } => {
            if m_max < 100 {
                return Err(input("--m-max must be at least 100"));
            }
            let f = spiral_asymptotics(m_max, degree);
            let status = if verify && !f.within_tolerance() { EXIT_MISMATCH } else { 0 };
            Ok(Output::json(f.to_json()).with_table(f.table()).with_status(status))
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(cli.cmd) {
        Ok(out) => {
            let mut so = std::io::stdout().lock();
            let _ = so.write_all(out.render(cli.csv).as_bytes());
            let _ = so.flush();
            std::process::exit(out.status);
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
