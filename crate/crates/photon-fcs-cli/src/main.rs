//! Command-line front end for the photon-fcs library: photon-number
//! distributions, joint forward/backward statistics, scattering-coefficient
//! tables, long-pulse (continuum) results, parameter sweeps, and the
//! built-in validation suite, emitted as CSV or JSON for plotting.

mod output;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;

use photon_fcs::coeffs::{self, CoeffRoute};
use photon_fcs::continuum::{continuum_distribution, squeezed_distribution, InitialState};
use photon_fcs::counting::{self, Truncation};
use photon_fcs::{validation, Channel, Error, ScatterParams, StateVector};

use output::{write_output, Cell, Format, Meta, Table};

/// A command failure carrying its process exit code.
///
/// 1: I/O or internal; 2: invalid parameters; 3: numerical-conditioning
/// failure; 4: custom state fails normalization; 5: validation failure.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

/// Attach the responsible flag name to a library error and classify it.
fn flagged(err: Error) -> Failure {
    let (code, flag) = match &err {
        Error::InvalidCoupling(_) => (2, Some("--gamma")),
        Error::InvalidDetuning(_) => (2, Some("--delta")),
        Error::InvalidMeanPhotonNumber(_) => (2, Some("--nbar")),
        Error::InvalidTransmission(_) => (2, Some("--T")),
        Error::DegenerateParams => (2, Some("--gamma/--delta")),
        Error::TruncationTooSmall { .. } => (2, Some("--nmax")),
        Error::UnnormalizedState(_) => (4, Some("--state")),
        _ => (3, None),
    };
    Failure {
        code,
        message: match flag {
            Some(f) => format!("invalid {f}: {err}"),
            None => format!("numerical failure: {err}"),
        },
    }
}

#[derive(Parser)]
#[command(
    name = "photon-fcs",
    version,
    about = "Full counting statistics of photons scattered by a two-level emitter in a 1D waveguide"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Photon-number distribution of one counting channel for a coherent pulse
    Dist(DistArgs),
    /// Joint forward/backward photon-number table q(n, m)
    Joint(JointArgs),
    /// Scattering-coefficient table s_nm for n + m <= nmax
    Coeffs(CoeffsArgs),
    /// Long-pulse limit: scattered distribution of an arbitrary input state
    Continuum(ContinuumArgs),
    /// Distributions and moments over a parameter grid
    Sweep(SweepArgs),
    /// Run the built-in validation suite
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ChannelArg {
    /// Transmitted photons, co-propagating with the input pulse
    R,
    /// Reflected photons
    L,
}

impl From<ChannelArg> for Channel {
    fn from(c: ChannelArg) -> Channel {
        match c {
            ChannelArg::R => Channel::Forward,
            ChannelArg::L => Channel::Backward,
        }
    }
}

fn channel_label(c: Channel) -> &'static str {
    match c {
        Channel::Forward => "r",
        Channel::Backward => "l",
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DistArgs {
    /// Emitter-pulse coupling (dimensionless, >= 0)
    #[arg(long, allow_negative_numbers = true)]
    gamma: f64,
    /// Emitter-carrier detuning
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    delta: f64,
    /// Mean photon number of the coherent pulse
    #[arg(long, allow_negative_numbers = true)]
    nbar: f64,
    /// Counting channel
    #[arg(long, value_enum, default_value_t = ChannelArg::R)]
    channel: ChannelArg,
    /// Photon-number cutoff (defaults to an nbar-dependent automatic choice)
    #[arg(long)]
    nmax: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct JointArgs {
    #[arg(long, allow_negative_numbers = true)]
    gamma: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    delta: f64,
    #[arg(long, allow_negative_numbers = true)]
    nbar: f64,
    /// Cutoff for both photon-number indices
    #[arg(long)]
    nmax: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CoeffsArgs {
    #[arg(long, allow_negative_numbers = true)]
    gamma: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    delta: f64,
    /// Largest total order n + m in the table
    #[arg(long, default_value_t = 30)]
    nmax: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ContinuumArgs {
    /// Input state: coherent:NBAR | fock:N | squeezed:MAG,THETA | custom:FILE
    /// (custom FILE is a JSON array of [re, im] amplitude pairs indexed by n)
    #[arg(long)]
    state: String,
    /// Single-photon transmission probability T in [0, 1]
    #[arg(long = "T", allow_negative_numbers = true)]
    transmission: f64,
    /// Counting channel
    #[arg(long, value_enum, default_value_t = ChannelArg::R)]
    channel: ChannelArg,
    /// Photon-number cutoff (defaults to the state's own support)
    #[arg(long)]
    nmax: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// Coupling values: a single number, a comma list, or start:stop:count
    #[arg(long, allow_negative_numbers = true)]
    gamma: String,
    /// Detuning values, same forms as --gamma
    #[arg(long, default_value = "0", allow_negative_numbers = true)]
    delta: String,
    /// Mean photon numbers, same forms as --gamma
    #[arg(long, allow_negative_numbers = true)]
    nbar: String,
    #[arg(long, value_enum, default_value_t = ChannelArg::R)]
    channel: ChannelArg,
    /// Photon-number cutoff applied at every grid point
    #[arg(long)]
    nmax: Option<usize>,
    /// Number of worker threads (row order does not depend on this)
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ValidateArgs {
    /// Write the machine-readable per-check report to this path
    #[arg(long)]
    json: Option<PathBuf>,
    /// Fault-injection hook: offset added to one oracle input, to confirm
    /// the harness actually trips (nonzero values must exit 5)
    #[arg(long = "perturb-s", default_value_t = 0.0, allow_negative_numbers = true)]
    perturb_s: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Cmd::Dist(args) => cmd_dist(args),
        Cmd::Joint(args) => cmd_joint(args),
        Cmd::Coeffs(args) => cmd_coeffs(args),
        Cmd::Continuum(args) => cmd_continuum(args),
        Cmd::Sweep(args) => cmd_sweep(args),
        Cmd::Validate(args) => cmd_validate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn scatter(gamma: f64, delta: f64) -> Result<ScatterParams, Failure> {
    ScatterParams::new(gamma, delta).map_err(flagged)
}

fn truncation(nmax: Option<usize>) -> Truncation {
    match nmax {
        Some(n) => Truncation::Fixed(n),
        None => Truncation::Auto,
    }
}

#[allow(clippy::needless_range_loop)]
fn cmd_dist(args: &DistArgs) -> Result<(), Failure> {
    let params = scatter(args.gamma, args.delta)?;
    let channel: Channel = args.channel.into();
    let dist = counting::channel_distribution(&params, args.nbar, channel, truncation(args.nmax))
        .map_err(flagged)?;
    let coeff = coeffs::marginal_coeffs(&params, channel, dist.n_max()).map_err(flagged)?;
    let report = counting::moments(&dist);

    let mut rows = Vec::with_capacity(dist.n_max() + 1);
    for n in 0..=dist.n_max() {
        // column 2 is the literal n = 0 product, column 3 the bucket that
        // completes the norm; they differ only in the first row
        let raw = if n == 0 {
            dist.raw_zero_product
        } else {
            dist.probs[n]
        };
        rows.push(vec![
            Cell::Int(n as u64),
            Cell::F(raw),
            Cell::F(dist.probs[n]),
            Cell::F(coeff[n].value.norm_sqr()),
        ]);
    }
    Table {
        name: "dist",
        meta: vec![
            ("gamma", Meta::F(params.gamma())),
            ("delta", Meta::F(params.delta())),
            ("nbar", Meta::F(args.nbar)),
            ("channel", Meta::S(channel_label(channel).to_string())),
            ("n_max", Meta::Int(dist.n_max() as u64)),
            ("norm_defect", Meta::F(dist.norm_defect)),
            ("mean", Meta::F(report.mean)),
            ("mandel_q", Meta::F(report.mandel_q.unwrap_or(f64::NAN))),
        ],
        columns: &["n", "p_raw_n", "p_normalized_n", "s_n_abs2"],
        rows,
    }
    .emit(args.output.format, args.output.out.as_deref())
}

fn cmd_joint(args: &JointArgs) -> Result<(), Failure> {
    let params = scatter(args.gamma, args.delta)?;
    let joint = counting::joint_distribution(&params, args.nbar, truncation(args.nmax))
        .map_err(flagged)?;
    let n_max = joint.n_max();
    let (min_n, min_m, min_value) = joint.min_cell();

    let mut rows = Vec::with_capacity((n_max + 1) * (n_max + 1));
    for n in 0..=n_max {
        for m in 0..=n_max {
            rows.push(vec![
                Cell::Int(n as u64),
                Cell::Int(m as u64),
                Cell::F(joint.q(n, m)),
            ]);
        }
    }
    Table {
        name: "joint",
        meta: vec![
            ("gamma", Meta::F(params.gamma())),
            ("delta", Meta::F(params.delta())),
            ("nbar", Meta::F(args.nbar)),
            ("n_max", Meta::Int(n_max as u64)),
            ("total_mass", Meta::F(joint.total_mass())),
            ("min_cell_n", Meta::Int(min_n as u64)),
            ("min_cell_m", Meta::Int(min_m as u64)),
            ("min_cell_value", Meta::F(min_value)),
            ("conditioning_estimate", Meta::F(joint.conditioning_estimate())),
        ],
        columns: &["n", "m", "q_nm"],
        rows,
    }
    .emit(args.output.format, args.output.out.as_deref())
}

fn cmd_coeffs(args: &CoeffsArgs) -> Result<(), Failure> {
    let params = scatter(args.gamma, args.delta)?;
    let table = coeffs::coeff_table(&params, args.nmax).map_err(flagged)?;

    let mut worst_rel = 0.0f64;
    let mut rows = Vec::new();
    for (n, m, v) in table.iter() {
        worst_rel = worst_rel.max(v.rel_err());
        // the closed-form oscillation overlay applies to the forward
        // marginal only; other rows carry nan in that column
        let overlay = if m == 0 {
            coeffs::s_n_forward_asymptotic(&params, n)
        } else {
            f64::NAN
        };
        rows.push(vec![
            Cell::Int(n as u64),
            Cell::Int(m as u64),
            Cell::F(v.value.re),
            Cell::F(v.value.im),
            Cell::F(v.value.norm()),
            Cell::F(v.abs_err),
            Cell::F(overlay),
        ]);
    }
    let route = match table.route() {
        CoeffRoute::BesselSum => "bessel-sum",
        CoeffRoute::JetOracle => "jet-oracle",
    };
    Table {
        name: "coeffs",
        meta: vec![
            ("gamma", Meta::F(params.gamma())),
            ("delta", Meta::F(params.delta())),
            ("n_max", Meta::Int(table.n_max() as u64)),
            ("route", Meta::S(route.to_string())),
            ("conditioning_warnings", Meta::Int(table.warnings().len() as u64)),
            ("worst_rel_err", Meta::F(worst_rel)),
        ],
        columns: &["n", "m", "s_re", "s_im", "s_abs", "abs_err", "forward_overlay"],
        rows,
    }
    .emit(args.output.format, args.output.out.as_deref())
}

fn parse_state(spec: &str) -> Result<InitialState, Failure> {
    let bad = |why: String| Failure {
        code: 2,
        message: format!("invalid --state '{spec}': {why}"),
    };
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| bad("expected KIND:ARGS, e.g. coherent:3.5".to_string()))?;
    match kind {
        "coherent" => {
            let nbar: f64 = rest
                .parse()
                .map_err(|_| bad(format!("'{rest}' is not a mean photon number")))?;
            Ok(InitialState::Coherent { nbar })
        }
        "fock" => {
            let n: usize = rest
                .parse()
                .map_err(|_| bad(format!("'{rest}' is not a photon number")))?;
            Ok(InitialState::Fock { n })
        }
        "squeezed" => {
            let (mag, theta) = rest
                .split_once(',')
                .ok_or_else(|| bad("expected squeezed:MAG,THETA".to_string()))?;
            let magnitude: f64 = mag
                .parse()
                .map_err(|_| bad(format!("'{mag}' is not a squeeze magnitude")))?;
            let theta: f64 = theta
                .parse()
                .map_err(|_| bad(format!("'{theta}' is not a phase")))?;
            Ok(InitialState::Squeezed { magnitude, theta })
        }
        "custom" => {
            let text = fs::read_to_string(rest)
                .map_err(|e| bad(format!("cannot read '{rest}': {e}")))?;
            let pairs: Vec<[f64; 2]> = serde_json::from_str(&text)
                .map_err(|e| bad(format!("'{rest}' is not a JSON array of [re, im] pairs: {e}")))?;
            let amps: Vec<Complex64> = pairs
                .iter()
                .map(|[re, im]| Complex64::new(*re, *im))
                .collect();
            // normalization defects surface as exit 4, not 2
            let sv = StateVector::new(amps).map_err(flagged)?;
            Ok(InitialState::Custom(sv))
        }
        other => Err(bad(format!(
            "unknown state kind '{other}' (expected coherent, fock, squeezed, or custom)"
        ))),
    }
}

fn cmd_continuum(args: &ContinuumArgs) -> Result<(), Failure> {
    let state = parse_state(&args.state)?;
    let channel: Channel = args.channel.into();
    let n_max = match args.nmax {
        Some(n) => n,
        None => state.support().map_err(flagged)?,
    };
    let dist =
        continuum_distribution(&state, args.transmission, channel, n_max).map_err(flagged)?;

    let mut meta = vec![
        ("state", Meta::S(args.state.clone())),
        ("T", Meta::F(args.transmission)),
        ("R", Meta::F(1.0 - args.transmission)),
        ("channel", Meta::S(channel_label(channel).to_string())),
        ("n_max", Meta::Int(dist.n_max() as u64)),
        ("norm_defect", Meta::F(dist.norm_defect)),
    ];
    if let InitialState::Squeezed { magnitude, theta } = &state {
        // the two published routes to this distribution disagree for
        // 0 < T < 1; report how far apart they land
        let effective_t = match channel {
            Channel::Forward => args.transmission,
            Channel::Backward => 1.0 - args.transmission,
        };
        let cmp =
            squeezed_distribution(*magnitude, *theta, effective_t, n_max).map_err(flagged)?;
        meta.push(("squeezed_route_max_discrepancy", Meta::F(cmp.max_discrepancy)));
    }

    let mut rows = Vec::with_capacity(dist.n_max() + 1);
    for n in 0..=dist.n_max() {
        let raw = if n == 0 {
            dist.raw_zero_product
        } else {
            dist.probs[n]
        };
        rows.push(vec![Cell::Int(n as u64), Cell::F(raw), Cell::F(dist.probs[n])]);
    }
    Table {
        name: "continuum",
        meta,
        columns: &["n", "p_raw_n", "p_normalized_n"],
        rows,
    }
    .emit(args.output.format, args.output.out.as_deref())
}

/// Parse one sweep axis: `2.5`, `0.5,1,8`, or `start:stop:count`.
fn parse_axis(flag: &str, spec: &str) -> Result<Vec<f64>, Failure> {
    let bad = |why: String| Failure {
        code: 2,
        message: format!("invalid {flag} '{spec}': {why}"),
    };
    let number = |tok: &str| -> Result<f64, Failure> {
        let v: f64 = tok
            .trim()
            .parse()
            .map_err(|_| bad(format!("'{tok}' is not a number")))?;
        if !v.is_finite() {
            return Err(bad(format!("'{tok}' is not finite")));
        }
        Ok(v)
    };
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("ranges are start:stop:count".to_string()));
        }
        let start = number(parts[0])?;
        let stop = number(parts[1])?;
        let count: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| bad(format!("'{}' is not a count", parts[2])))?;
        if count == 0 {
            return Err(bad("count must be at least 1".to_string()));
        }
        if start > stop {
            return Err(bad("range needs start <= stop".to_string()));
        }
        if count == 1 {
            return Ok(vec![start]);
        }
        let step = (stop - start) / (count - 1) as f64;
        Ok((0..count).map(|i| start + step * i as f64).collect())
    } else {
        let values: Vec<f64> = spec
            .split(',')
            .map(number)
            .collect::<Result<_, _>>()?;
        if values.is_empty() {
            return Err(bad("no values given".to_string()));
        }
        Ok(values)
    }
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), Failure> {
    let gammas = parse_axis("--gamma", &args.gamma)?;
    let deltas = parse_axis("--delta", &args.delta)?;
    let nbars = parse_axis("--nbar", &args.nbar)?;
    let channel: Channel = args.channel.into();
    let trunc = truncation(args.nmax);

    let mut points = Vec::with_capacity(gammas.len() * deltas.len() * nbars.len());
    for &g in &gammas {
        for &d in &deltas {
            for &nb in &nbars {
                points.push((g, d, nb));
            }
        }
    }

    let worker = |&(g, d, nb): &(f64, f64, f64)| -> Result<Vec<Vec<Cell>>, Failure> {
        let params = scatter(g, d)?;
        let dist = counting::channel_distribution(&params, nb, channel, trunc).map_err(flagged)?;
        let report = counting::moments(&dist);
        let mandel = report.mandel_q.unwrap_or(f64::NAN);
        Ok((0..=dist.n_max())
            .map(|n| {
                vec![
                    Cell::F(g),
                    Cell::F(d),
                    Cell::F(nb),
                    Cell::Int(n as u64),
                    Cell::F(dist.probs[n]),
                    Cell::F(report.mean),
                    Cell::F(mandel),
                ]
            })
            .collect())
    };

    // rayon's ordered collect keeps rows in grid order no matter how many
    // threads run, so --jobs never changes the bytes emitted
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.max(1))
        .build()
        .map_err(|e| Failure {
            code: 1,
            message: format!("cannot start worker pool: {e}"),
        })?;
    let per_point: Vec<Vec<Vec<Cell>>> =
        pool.install(|| points.par_iter().map(worker).collect::<Result<_, _>>())?;

    let rows: Vec<Vec<Cell>> = per_point.into_iter().flatten().collect();
    Table {
        name: "sweep",
        meta: vec![
            ("gamma", Meta::S(args.gamma.clone())),
            ("delta", Meta::S(args.delta.clone())),
            ("nbar", Meta::S(args.nbar.clone())),
            ("channel", Meta::S(channel_label(channel).to_string())),
            ("grid_points", Meta::Int(points.len() as u64)),
        ],
        columns: &["gamma", "delta", "nbar", "n", "p_n", "mean", "mandel_q"],
        rows,
    }
    .emit(args.output.format, args.output.out.as_deref())
}

fn cmd_validate(args: &ValidateArgs) -> Result<(), Failure> {
    let results = validation::run_all(args.perturb_s);

    let mut report = String::new();
    for r in &results {
        report.push_str(&format!(
            "{} {:<28} residual {:>10.3e}  tolerance {:.1e}\n",
            if r.pass { "ok  " } else { "FAIL" },
            r.name,
            r.residual,
            r.tolerance,
        ));
    }
    let failed = results.iter().filter(|r| !r.pass).count();
    report.push_str(&format!(
        "{} checks: {} passed, {} failed\n",
        results.len(),
        results.len() - failed,
        failed,
    ));
    write_output(None, report.as_bytes())?;

    if let Some(path) = &args.json {
        let rows: Vec<serde_json::Value> = results
            .iter()
            .map(|r| {
                serde_json::json!({
                    "name": r.name,
                    "residual": r.residual,
                    "tolerance": r.tolerance,
                    "pass": r.pass,
                    "detail": r.detail,
                })
            })
            .collect();
        let doc = serde_json::json!({
            "schema_version": 1,
            "table": "validate",
            "params": { "perturb_s": args.perturb_s },
            "rows": rows,
        });
        let mut text = serde_json::to_string_pretty(&doc).expect("plain tree");
        text.push('\n');
        write_output(Some(path), text.as_bytes())?;
    }

    if failed > 0 {
        return Err(Failure {
            code: 5,
            message: format!("{failed} of {} validation checks failed", results.len()),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use output::fmt_f;

    #[test]
    fn axis_accepts_all_three_forms() {
        assert_eq!(parse_axis("--gamma", "2.5").unwrap(), vec![2.5]);
        assert_eq!(parse_axis("--gamma", "1,2,4").unwrap(), vec![1.0, 2.0, 4.0]);
        let range = parse_axis("--gamma", "0:10:5").unwrap();
        assert_eq!(range, vec![0.0, 2.5, 5.0, 7.5, 10.0]);
        assert_eq!(parse_axis("--gamma", "3:7:1").unwrap(), vec![3.0]);
    }

    #[test]
    fn axis_rejects_malformed_specs() {
        for spec in ["", "a,b", "1:2", "1:2:3:4", "5:1:3", "1:2:0", "inf"] {
            let err = parse_axis("--nbar", spec).unwrap_err();
            assert_eq!(err.code, 2, "spec {spec:?}");
            assert!(err.message.contains("--nbar"));
        }
    }

    #[test]
    fn state_specs_parse() {
        assert!(matches!(
            parse_state("coherent:3.5").unwrap(),
            InitialState::Coherent { nbar } if nbar == 3.5
        ));
        assert!(matches!(
            parse_state("fock:7").unwrap(),
            InitialState::Fock { n: 7 }
        ));
        assert!(matches!(
            parse_state("squeezed:1.2,0.4").unwrap(),
            InitialState::Squeezed { .. }
        ));
        for spec in ["coherent", "fock:-1", "squeezed:1.2", "thermal:4"] {
            assert_eq!(parse_state(spec).unwrap_err().code, 2, "spec {spec:?}");
        }
    }

    #[test]
    fn float_format_is_17_significant_digits() {
        assert_eq!(fmt_f(0.75), "7.5000000000000000e-1");
        assert_eq!(fmt_f(f64::NAN), "nan");
        let x = 0.1 + 0.2;
        let round_trip: f64 = fmt_f(x).parse().unwrap();
        assert_eq!(round_trip, x);
    }
}
