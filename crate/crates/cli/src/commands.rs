use std::path::PathBuf;

use pwalk_core::finite::{
    build_chain, clt_variance_covariances, clt_variance_poisson, speed_from, stationary, ExactConfig,
};
use pwalk_core::infinite::hitting_table;
use pwalk_core::lab::{self, svg, McBudget, ModePolicy, SweepRow, SweepSpec, TrajectorySpec};
use pwalk_core::model::{DriftSign, OriginRule};
use pwalk_core::sim::{
    clt_experiment, cookie_equivalence, coupled_runs, range_replicas, simulate, CouplingKind, Record, RngConfig,
};
use pwalk_core::stats::Estimate;
use pwalk_core::{Bias, Memory, WalkParams};
use serde_json::json;

use crate::args::{
    Bias as BiasArgs, CltArgs, Command, CookieArgs, CoupleArgs, CouplingKindArg, ExactArgs, FigArgs, Format,
    HittingArgs, OriginArg, RangeArgs, SimulateArgs, SweepArgs, SweepConfig,
};
use crate::output::{Cell, Table};
use crate::CliError;

type CliResult<T> = Result<T, CliError>;

/// One artifact: a destination (`None` for standard output) and its bytes.
pub struct Artifact {
    pub path: Option<PathBuf>,
    pub bytes: Vec<u8>,
}

#[derive(Default)]
pub struct Report {
    pub artifacts: Vec<Artifact>,
    pub provenance: Vec<String>,
    pub notes: serde_json::Value,
    /// Raised after the outputs are written.
    pub failure: Option<String>,
}

impl Report {
    fn single(path: Option<PathBuf>, table: &Table, format: Format, provenance: &str) -> CliResult<Self> {
        Ok(Report {
            artifacts: vec![Artifact {
                path,
                bytes: table.render(format)?,
            }],
            provenance: vec![provenance.to_string(); table.rows.len()],
            ..Report::default()
        })
    }
}

pub fn run(command: &Command, exact: &ExactConfig) -> CliResult<Report> {
    match command {
        Command::Simulate(a) => simulate_cmd(a),
        Command::Exact(a) => exact_cmd(a, exact),
        Command::Hitting(a) => hitting_cmd(a),
        Command::Range(a) => range_cmd(a),
        Command::Couple(a) => couple_cmd(a),
        Command::CookieCheck(a) => cookie_cmd(a),
        Command::Clt(a) => clt_cmd(a, exact),
        Command::Sweep(a) => sweep_cmd(a, exact),
        Command::FigData(a) => fig_cmd(a, exact),
        Command::Replay(_) => unreachable!("replay is dispatched by main"),
    }
}

fn bias(b: &BiasArgs) -> CliResult<Bias> {
    Ok(Bias::new(b.p, b.q)?)
}

fn params(b: &BiasArgs, memory: Memory) -> CliResult<WalkParams> {
    Ok(WalkParams::new(b.p, b.q, memory)?)
}

fn require_finite(memory: Memory, command: &str) -> CliResult<usize> {
    memory.finite().ok_or_else(|| {
        CliError::Usage(format!(
            "{command} requires a finite --L; \"inf\" is not supported here"
        ))
    })
}

fn require_infinite(memory: Memory, command: &str) -> CliResult<()> {
    match memory {
        Memory::Infinite => Ok(()),
        Memory::Finite(_) => Err(CliError::Usage(format!("{command} is defined for --L inf only"))),
    }
}

fn simulate_cmd(a: &SimulateArgs) -> CliResult<Report> {
    let params = params(&a.bias, a.l)?;
    let record = match a.thin {
        0 => return Err(CliError::Usage("--thin must be at least 1".into())),
        1 => Record::Full,
        k => Record::Thinned(k),
    };
    let traj = simulate(&params, a.steps, RngConfig::new(a.seed, a.replica), record)?;
    let mut table = Table::new(&["step", "position"]);
    for (k, x) in traj.points() {
        table.push(vec![k.into(), x.into()]);
    }
    let mut report = Report::single(a.output.out.clone(), &table, a.output.format, "monte-carlo")?;
    report.notes = json!({ "summary": traj.summary });
    Ok(report)
}

fn exact_cmd(a: &ExactArgs, cfg: &ExactConfig) -> CliResult<Report> {
    require_finite(a.l, "exact")?;
    let params = params(&a.bias, a.l)?;
    let op = build_chain(&params, cfg)?;
    let st = stationary(&op, cfg)?;
    let sp = speed_from(&params, &op, &st);
    let poisson = clt_variance_poisson(&op, &st)?;
    let cov = clt_variance_covariances(&op, &st)?;
    let mut table = Table::new(&[
        "L",
        "p",
        "q",
        "pi_max",
        "pi_min",
        "delta",
        "recurrence",
        "sigma2",
        "sigma2_covariance",
        "covariance_tail_bound",
        "residual",
    ]);
    table.push(vec![
        sp.l.into(),
        sp.p.into(),
        sp.q.into(),
        sp.pi_max.into(),
        sp.pi_min.into(),
        sp.delta.into(),
        Cell::Text(format!("{:?}", sp.recurrence)),
        poisson.sigma2.into(),
        cov.sigma2.into(),
        cov.truncation_error_bound.into(),
        sp.residual.into(),
    ]);
    Report::single(a.output.out.clone(), &table, a.output.format, "exact")
}

fn hitting_cmd(a: &HittingArgs) -> CliResult<Report> {
    require_infinite(a.l, "hitting")?;
    let rows = hitting_table(&bias(&a.bias)?, a.n)?;
    let mut table = Table::new(&[
        "n",
        "d_max",
        "d_min",
        "p_max_renew",
        "p_min_renew",
        "pi_n",
        "e_rho_exact",
        "e_rho_asym",
    ]);
    for r in rows {
        table.push(vec![
            r.n.into(),
            r.d_max.into(),
            r.d_min.into(),
            r.p_max_renew.into(),
            r.p_min_renew.into(),
            r.pi_n.into(),
            r.e_rho_exact.into(),
            r.e_rho_asym.into(),
        ]);
    }
    Report::single(a.output.out.clone(), &table, a.output.format, "exact")
}

fn range_cmd(a: &RangeArgs) -> CliResult<Report> {
    require_infinite(a.l, "range")?;
    if a.replicas < 2 {
        return Err(CliError::Usage("--replicas must be at least 2".into()));
    }
    let params = params(&a.bias, a.l)?;
    let runs = range_replicas(&params, a.n, a.replicas, RngConfig::new(a.seed, 0))?;
    let exact = hitting_table(&params.bias, a.n)?;
    let mut table = Table::new(&[
        "n",
        "mean_rho",
        "stderr_rho",
        "at_max_fraction",
        "stderr_at_max",
        "e_rho_exact",
        "pi_n",
    ]);
    for (i, ex) in exact.iter().enumerate() {
        let rho: Vec<f64> = runs.iter().map(|ev| ev[i].rho_n as f64).collect();
        let top: Vec<f64> = runs.iter().map(|ev| ev[i].at_max as u8 as f64).collect();
        let (rho, top) = (Estimate::from_samples(&rho), Estimate::from_samples(&top));
        table.push(vec![
            ex.n.into(),
            rho.mean.into(),
            rho.stderr.into(),
            top.mean.into(),
            top.stderr.into(),
            ex.e_rho_exact.into(),
            ex.pi_n.into(),
        ]);
    }
    Report::single(a.output.out.clone(), &table, a.output.format, "monte-carlo")
}

/// Comparison chain of the dominance constructions for `(p, q)`.
fn default_partner(kind: CouplingKind, p: f64, q: f64) -> (f64, f64) {
    let upward = Bias::new(p, q).map(|b| b.drift_sign()) == Ok(DriftSign::Positive);
    match (kind, upward) {
        (CouplingKind::WindowDominance, true) | (CouplingKind::PositionDominance, false) => (p, 1.0 - p),
        (CouplingKind::WindowDominance, false) | (CouplingKind::PositionDominance, true) => (1.0 - q, q),
    }
}

fn couple_cmd(a: &CoupleArgs) -> CliResult<Report> {
    let l = require_finite(a.l, "couple")?;
    let kind = match a.kind {
        CouplingKindArg::Window => CouplingKind::WindowDominance,
        CouplingKindArg::Position => CouplingKind::PositionDominance,
    };
    let pa = params(&a.bias, a.l)?;
    let (dp, dq) = default_partner(kind, a.bias.p, a.bias.q);
    let pb = WalkParams::finite(a.p2.unwrap_or(dp), a.q2.unwrap_or(dq), l)?;
    let reports = coupled_runs(kind, &pa, &pb, a.steps, a.replicas, RngConfig::new(a.seed, 0))?;
    let mut table = Table::new(&["run", "violations", "regenerations", "final_gap", "mean_gap_growth"]);
    for (i, r) in reports.iter().enumerate() {
        table.push(vec![
            i.into(),
            r.violations.into(),
            r.regeneration_times.len().into(),
            r.final_gap.into(),
            r.mean_gap_growth.into(),
        ]);
    }
    let violations: u64 = reports.iter().map(|r| r.violations).sum();
    let mut report = Report::single(a.output.out.clone(), &table, a.output.format, "monte-carlo")?;
    report.notes = json!({
        "partner": { "p": pb.p(), "q": pb.q() },
        "orientation": reports.first().map(|r| format!("{:?}", r.orientation)),
        "total_violations": violations,
    });
    if violations > 0 {
        report.failure = Some(format!("{violations} dominance violations; the coupling is broken"));
    }
    Ok(report)
}

fn cookie_cmd(a: &CookieArgs) -> CliResult<Report> {
    require_infinite(a.l, "cookie-check")?;
    let params = params(&a.bias, a.l)?;
    let origin = match a.origin {
        OriginArg::Stacked => OriginRule::Stacked,
        OriginArg::Empty => OriginRule::Empty,
    };
    let d = cookie_equivalence(&params, a.n, origin)?;
    let mut table = Table::new(&["T", "p", "q", "origin", "max_discrepancy"]);
    table.push(vec![
        (a.n as u64).into(),
        a.bias.p.into(),
        a.bias.q.into(),
        Cell::Text(format!("{:?}", a.origin).to_lowercase()),
        d.into(),
    ]);
    Report::single(a.output.out.clone(), &table, a.output.format, "exact")
}

fn clt_cmd(a: &CltArgs, cfg: &ExactConfig) -> CliResult<Report> {
    require_finite(a.l, "clt")?;
    let params = params(&a.bias, a.l)?;
    let e = clt_experiment(&params, a.n, a.replicas, RngConfig::new(a.seed, 0), cfg)?;
    let table = if a.samples {
        let mut t = Table::new(&["replica", "z"]);
        for (i, z) in e.samples.iter().enumerate() {
            t.push(vec![i.into(), (*z).into()]);
        }
        t
    } else {
        let mut t = Table::new(&[
            "n",
            "replicas",
            "delta",
            "sigma2",
            "sigma2_covariance",
            "ks_distance",
            "mean",
            "mean_stderr",
        ]);
        t.push(vec![
            a.n.into(),
            a.replicas.into(),
            e.delta.into(),
            e.sigma2.into(),
            e.sigma2_covariance.into(),
            e.ks_distance.into(),
            e.sample_mean.mean.into(),
            e.sample_mean.stderr.into(),
        ]);
        t
    };
    Report::single(a.output.out.clone(), &table, a.output.format, "monte-carlo")
}

fn sweep_spec(b: Bias, s: &SweepConfig, cfg: &ExactConfig) -> SweepSpec {
    SweepSpec {
        bias: b,
        l_values: s.l_values.clone(),
        policy: if s.monte_carlo {
            ModePolicy::MonteCarlo
        } else {
            ModePolicy::Auto
        },
        budget: McBudget {
            steps: s.steps,
            replicas: s.replicas,
        },
        rng: RngConfig::new(s.seed, 0),
        exact: *cfg,
    }
}

fn sweep_table(rows: &[SweepRow], reference: Option<&[(usize, f64)]>) -> Table {
    let mut header = vec!["L", "delta", "stderr", "scaled", "mode"];
    if reference.is_some() {
        header.push("reference");
    }
    let mut table = Table::new(&header);
    for r in rows {
        let mut row = vec![
            r.l.into(),
            r.delta.into(),
            r.stderr.into(),
            r.scaled.into(),
            r.mode.as_str().into(),
        ];
        if let Some(refs) = reference {
            row.push(refs.iter().find(|(l, _)| *l == r.l).map(|(_, v)| *v).into());
        }
        table.push(row);
    }
    table
}

fn sweep_notes(rows: &[SweepRow]) -> serde_json::Value {
    let errors: Vec<_> = rows
        .iter()
        .filter_map(|r| r.error.as_ref().map(|e| json!({ "L": r.l, "error": e })))
        .collect();
    let fit = match lab::fit_speed_scaling(rows, 3) {
        Ok(f) => json!(f),
        Err(e) => json!({ "error": e.to_string() }),
    };
    json!({ "probe": "speed scaling", "fit": fit, "row_errors": errors })
}

fn sweep_cmd(a: &SweepArgs, cfg: &ExactConfig) -> CliResult<Report> {
    let spec = sweep_spec(bias(&a.bias)?, &a.sweep, cfg);
    let rows = lab::speed_sweep(&spec)?;
    let table = sweep_table(&rows, None);
    let mut report = Report::single(a.output.out.clone(), &table, a.output.format, "")?;
    report.provenance = rows.iter().map(|r| r.mode.as_str().to_string()).collect();
    report.notes = sweep_notes(&rows);
    Ok(report)
}

fn trajectory_table(series: &[lab::FigureSeries]) -> Table {
    let mut t = Table::new(&["series", "p", "q", "delta", "step", "position"]);
    for (i, s) in series.iter().enumerate() {
        for (k, x) in s.trajectory.points() {
            t.push(vec![
                i.into(),
                s.p.into(),
                s.q.into(),
                s.delta.into(),
                k.into(),
                x.into(),
            ]);
        }
    }
    t
}

fn trajectory_svg(title: &str, series: &[lab::FigureSeries]) -> String {
    let labels: Vec<String> = series.iter().map(|s| format!("p={} q={}", s.p, s.q)).collect();
    let lines: Vec<svg::Series> = series
        .iter()
        .zip(&labels)
        .map(|(s, label)| svg::Series {
            label,
            points: s.trajectory.points().map(|(k, x)| (k as f64, x as f64)).collect(),
        })
        .collect();
    svg::line_plot(title, &lines)
}

fn fig_cmd(a: &FigArgs, cfg: &ExactConfig) -> CliResult<Report> {
    if a.thin == 0 {
        return Err(CliError::Usage("--thin must be at least 1".into()));
    }
    let spec = TrajectorySpec {
        memory: a.l,
        steps: a.trajectory_steps,
        record: if a.thin == 1 {
            Record::Full
        } else {
            Record::Thinned(a.thin)
        },
        rng: RngConfig::new(a.sweep.seed, 0),
    };
    let f1 = lab::fig1(&spec, cfg)?;
    // the third figure draws from streams after those of the first
    let f3 = lab::fig3(
        &TrajectorySpec {
            rng: spec.rng.replica(16),
            ..spec
        },
        cfg,
    )?;
    let f2 = lab::fig2(&sweep_spec(Bias::new(a.p, a.q)?, &a.sweep, cfg))?;

    let ext = match a.format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let t1 = trajectory_table(&f1);
    let t2 = sweep_table(&f2.rows, Some(&f2.reference));
    let t3 = trajectory_table(&f3);
    let mut artifacts = vec![
        Artifact {
            path: Some(a.out.join(format!("fig1.{ext}"))),
            bytes: t1.render(a.format)?,
        },
        Artifact {
            path: Some(a.out.join(format!("fig2.{ext}"))),
            bytes: t2.render(a.format)?,
        },
        Artifact {
            path: Some(a.out.join(format!("fig3.{ext}"))),
            bytes: t3.render(a.format)?,
        },
    ];
    if a.svg {
        let speed =
            |pick: fn(&SweepRow) -> f64| -> Vec<(f64, f64)> { f2.rows.iter().map(|r| (r.l as f64, pick(r))).collect() };
        let reference: Vec<(f64, f64)> = f2.reference.iter().map(|(l, v)| (*l as f64, *v)).collect();
        let fig2_svg = svg::line_plot(
            "speed against window length",
            &[
                svg::Series {
                    label: "delta",
                    points: speed(|r| r.delta),
                },
                svg::Series {
                    label: "c / sqrt(2 L ln ln L)",
                    points: reference,
                },
            ],
        );
        for (name, body) in [
            ("fig1.svg", trajectory_svg("recurrent trajectories", &f1)),
            ("fig2.svg", fig2_svg),
            ("fig3.svg", trajectory_svg("transient trajectories at equal drift", &f3)),
        ] {
            artifacts.push(Artifact {
                path: Some(a.out.join(name)),
                bytes: body.into_bytes(),
            });
        }
    }
    let mut provenance = vec!["monte-carlo".to_string(); t1.rows.len()];
    provenance.extend(f2.rows.iter().map(|r| r.mode.as_str().to_string()));
    provenance.extend(vec!["monte-carlo".to_string(); t3.rows.len()]);
    Ok(Report {
        artifacts,
        provenance,
        notes: json!({
            "fig2": sweep_notes(&f2.rows),
            "fig3_speeds": f3.iter().map(|s| json!({ "p": s.p, "q": s.q, "delta": s.delta })).collect::<Vec<_>>(),
        }),
        failure: None,
    })
}
