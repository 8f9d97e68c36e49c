mod config;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use ccz_core::analysis::{
    align_global_phase, build_ccz_decomposition, channel_fidelity, circuit_unitary, feasibility_from_lifetimes,
    gate_fidelities, sweep_point, GateMatrix, SweepRatio,
};
use ccz_core::dynamics::EvolutionMode;
use ccz_core::hilbert::{logical_basis_state, logical_bits};
use ccz_core::protocol::{
    compile_ccz_schedule, emit_schedule, parse_schedule, total_operation_time, SchedulePropagators,
};
use ccz_core::{Exec, C64};
use clap::{Args, Parser, Subcommand};

use config::{Format, RunConfigFile};
use report::{RunReport, Sig17, TruthRow};

const EXIT_TRUTH_TABLE: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const DECOMPOSITION_TOL: f64 = 1e-12;

/// Pulse-level simulator for a cavity-mediated three-qudit CCZ gate.
#[derive(Parser)]
#[command(name = "ccz", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML run configuration; built-in reference parameters if omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Extract the gate, check the truth table and report fidelities.
    Run {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Truth-table tolerance on amplitudes.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Also integrate the master equation with the configured decoherence.
        #[arg(long)]
        lindblad: bool,
    },
    /// Simultaneous-mode infidelity against Ω / max(g).
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Comma-separated ratios; `inf` is the idealized limit.
        #[arg(long, value_delimiter = ',', required = true)]
        ratios: Vec<String>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Compare the gate time with the cavity and level-3 lifetimes.
    Feasibility {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// List the conventional 25-gate network and verify it against CCZ.
    Decompose {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the effective configuration as normalized TOML.
    Config {
        #[command(flatten)]
        common: Common,
    },
    /// Emit the compiled pulse schedule, or re-emit a schedule file.
    Schedule {
        #[command(flatten)]
        common: Common,
        /// Schedule text to parse and re-emit instead of compiling.
        #[arg(long, conflicts_with = "config")]
        input: Option<PathBuf>,
    },
}

fn load_config(path: Option<&Path>) -> Result<RunConfigFile> {
    match path {
        Some(p) => RunConfigFile::load(p),
        None => {
            log::info!("no --config given, using reference parameters");
            Ok(RunConfigFile::reference())
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_ratio(s: &str) -> Result<SweepRatio> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("inf") {
        return Ok(SweepRatio::Idealized);
    }
    let r: f64 = s
        .parse()
        .with_context(|| format!("ratios: `{s}` is not a number or `inf`"))?;
    Ok(SweepRatio::Finite(r))
}

fn cmd_run(common: &Common, format: Option<Format>, tol: f64, lindblad: bool) -> Result<u8> {
    let file = load_config(common.config.as_deref())?;
    let cfg = file.protocol()?;
    let format = format.or(file.format()).unwrap_or(Format::Json);

    let sched = compile_ccz_schedule(&cfg);
    let props = SchedulePropagators::build(&sched, &cfg, Exec::default())?;
    let logical = cfg.space().logical_indices(cfg.encoding());
    let mut gate = ccz_core::CMatrix::zeros(8, 8);
    let mut truth_table = Vec::with_capacity(8);
    for k in 0..8 {
        let bits = logical_bits(k);
        let input = logical_basis_state(cfg.space(), cfg.encoding(), bits)?;
        let out = props.apply(&input)?;
        for (r, &idx) in logical.iter().enumerate() {
            gate[(r, k)] = out.amplitudes()[idx];
        }
        let sign: i8 = if bits == [1, 1, 1] { -1 } else { 1 };
        let diff = out.amplitudes() - input.amplitudes() * C64::new(sign.into(), 0.0);
        let deviation = diff.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let own = gate[(k, k)];
        truth_table.push(TruthRow {
            input: bits.iter().map(|b| b.to_string()).collect(),
            expected_sign: sign,
            re: Sig17(own.re),
            im: Sig17(own.im),
            deviation: Sig17(deviation),
            pass: deviation < tol,
        });
    }
    let gate = GateMatrix::new(gate)?;
    let fidelity = gate_fidelities(&gate, &GateMatrix::ccz());
    let truth_table_pass = truth_table.iter().all(|r| r.pass);

    let channel = if lindblad {
        if cfg.decoherence().is_none() {
            bail!("decoherence: section required for --lindblad");
        }
        log::info!("integrating the master equation (dimension {})", cfg.space().dim());
        Some(channel_fidelity(&cfg, &GateMatrix::ccz())?)
    } else {
        None
    };

    let report = RunReport {
        mode: match cfg.mode() {
            EvolutionMode::Idealized => "idealized",
            EvolutionMode::Simultaneous => "simultaneous",
        },
        n_max: cfg.space().n_max(),
        couplings_hz: file.couplings_hz()?.map(Sig17),
        rabi_hz: Sig17(file.rabi_hz()?),
        tau_s: Sig17(total_operation_time(&cfg)),
        gate: (&gate).into(),
        fidelity: (&fidelity).into(),
        truth_table_tolerance: Sig17(tol),
        truth_table,
        truth_table_pass,
        channel: channel.as_ref().map(Into::into),
    };
    emit(common.out.as_deref(), &report::render_run(&report, format)?)?;
    if !truth_table_pass {
        log::warn!("truth table failed at tolerance {tol:e}");
        return Ok(EXIT_TRUTH_TABLE);
    }
    Ok(0)
}

fn cmd_sweep(common: &Common, ratios: &[String], format: Option<Format>) -> Result<u8> {
    let file = load_config(common.config.as_deref())?;
    let cfg = file.protocol()?;
    let format = format.or(file.format()).unwrap_or(Format::Csv);
    let ratios = ratios.iter().map(|s| parse_ratio(s)).collect::<Result<Vec<_>>>()?;
    if ratios.len() < 2 {
        bail!("ratios: a sweep needs at least 2 ratios, got {}", ratios.len());
    }
    let rows = Exec::default()
        .map(&ratios, |&r| sweep_point(&cfg, r, Exec::Sequential))
        .into_iter()
        .collect::<ccz_core::Result<Vec<_>>>()?;
    emit(common.out.as_deref(), &report::render_sweep(&rows, format)?)?;
    Ok(0)
}

fn cmd_feasibility(common: &Common, format: Option<Format>) -> Result<u8> {
    let file = load_config(common.config.as_deref())?;
    let cfg = file.protocol()?;
    let format = format.or(file.format()).unwrap_or(Format::Json);
    let Some(life) = file.lifetimes()? else {
        bail!("decoherence: section required for feasibility");
    };
    let report = feasibility_from_lifetimes(
        total_operation_time(&cfg),
        life.kappa_inv,
        life.gamma3r_inv,
        life.gamma3p_inv,
    )?;
    emit(common.out.as_deref(), &report::render_feasibility(&report, format)?)?;
    if !report.passes() {
        log::warn!("margins at or above threshold: {}", report.flagged().join(", "));
        return Ok(EXIT_INFEASIBLE);
    }
    Ok(0)
}

fn cmd_decompose(out: Option<&Path>) -> Result<u8> {
    let circuit = build_ccz_decomposition();
    let composed = circuit_unitary(&circuit)?;
    let (aligned, _) = align_global_phase(&composed, &GateMatrix::ccz());
    let equivalent = aligned.max_elementwise_diff(&GateMatrix::ccz()) < DECOMPOSITION_TOL;
    let mut text = String::new();
    for (i, g) in circuit.elements.iter().enumerate() {
        text.push_str(&format!("{:02} {g}\n", i + 1));
    }
    text.push_str(&format!("{}\n", circuit.counts()));
    text.push_str(&format!(
        "equivalent to CCZ up to global phase: {}\n",
        if equivalent { "yes" } else { "no" }
    ));
    emit(out, &text)?;
    Ok(0)
}

fn cmd_schedule(common: &Common, input: Option<&Path>) -> Result<u8> {
    let sched = match input {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?;
            parse_schedule(&text).with_context(|| p.display().to_string())?
        }
        None => compile_ccz_schedule(&load_config(common.config.as_deref())?.protocol()?),
    };
    emit(common.out.as_deref(), &emit_schedule(&sched))?;
    Ok(0)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run {
            common,
            format,
            tol,
            lindblad,
        } => cmd_run(common, *format, *tol, *lindblad),
        Command::Sweep { common, ratios, format } => cmd_sweep(common, ratios, *format),
        Command::Feasibility { common, format } => cmd_feasibility(common, *format),
        Command::Decompose { out } => cmd_decompose(out.as_deref()),
        Command::Config { common } => load_config(common.config.as_deref())
            .and_then(|file| {
                file.protocol()?;
                emit(common.out.as_deref(), &file.to_toml())
            })
            .map(|()| 0),
        Command::Schedule { common, input } => cmd_schedule(common, input.as_deref()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
