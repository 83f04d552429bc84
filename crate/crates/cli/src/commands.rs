use std::io::Write;
use std::path::{Path, PathBuf};

use entdesign_core::designer::{
    linearization_error, optimize_q, synthesize, AnsatzParams, CouplingWaveform, RenormalizationParams,
    LINEARIZATION_ERROR, MIN_STEPS,
};
use entdesign_core::dynamics::{evolve_lindblad, evolve_schrodinger, ChannelKind, ChannelSpec};
use entdesign_core::experiments::{
    reproduce_design_example, reproduce_distance_curve, reproduce_entropy_curve, run_sweep, self_check,
    ExampleFamily, GridAxis, Manifest, SweepGrid, SweepSpec, AD_DEGENERACY_TOLERANCE, MONOTONE_DECAY_TOLERANCE,
    PD_ASYMMETRY_GAMMA, UNITARY_FLOOR,
};
use entdesign_core::format::{fmt_sig, round_sig};
use entdesign_core::trajectory::{read_samples, TargetTrajectory};
use serde_json::json;

use crate::args::{
    AnsatzArgs, Channel, ChannelArgs, DesignArgs, EvolveArgs, Family, Figure, Format, GridArgs, OptimizeQArgs,
    ReproduceArgs, SweepArgs, TrajectoryArgs, VerifyArgs,
};
use crate::output::{emit, waveform_input, write_atomic, Failure};

fn render_err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn trajectory(args: &TrajectoryArgs) -> Result<TargetTrajectory, Failure> {
    if let Some(path) = &args.samples {
        let samples = read_samples(path)?;
        return Ok(TargetTrajectory::sampled(&samples)?);
    }
    let t_final = |default: f64| args.t_final.unwrap_or(default);
    Ok(match args.family {
        Family::Exp => TargetTrajectory::exp_saturation(args.kappa, t_final(10.0))?,
        Family::Triangle => TargetTrajectory::triangle_wave(args.kappa, t_final(10.0))?,
        Family::Power => TargetTrajectory::power_path(args.kappa, args.p, t_final(10.0 / args.kappa))?,
    })
}

fn design_params(args: &AnsatzArgs) -> Result<(AnsatzParams, RenormalizationParams), Failure> {
    let ansatz = AnsatzParams::new(args.q)?;
    let renorm = RenormalizationParams::symmetric(args.delta0, args.lambda0)?;
    if args.steps < MIN_STEPS {
        return Err(Failure::InvalidParameter(format!("--steps {} is below the minimum of {MIN_STEPS}", args.steps)));
    }
    Ok((ansatz, renorm))
}

fn channel(args: &ChannelArgs) -> Result<ChannelSpec, Failure> {
    let kind = match args.channel {
        Channel::None => ChannelKind::None,
        Channel::Ad => ChannelKind::AmplitudeDamping,
        Channel::Pd => ChannelKind::PhaseDamping,
    };
    Ok(ChannelSpec::new(kind, args.gamma)?)
}

fn axis(flag: &str, spec: &str) -> Result<GridAxis, Failure> {
    let bad = || Failure::InvalidParameter(format!("--{flag} {spec:?}: expected LO:HI:POINTS"));
    let parts: Vec<&str> = spec.split(':').collect();
    let [lo, hi, n] = parts.as_slice() else { return Err(bad()) };
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    GridAxis::new(lo, hi, n).map_err(|e| Failure::InvalidParameter(format!("--{flag}: {e}")))
}

fn sweep_spec(grid: &GridArgs, ansatz: AnsatzParams, renorm: RenormalizationParams, steps: usize) -> Result<SweepSpec, Failure> {
    let spec = SweepSpec {
        log10_p: axis("grid-p", &grid.grid_p)?,
        gamma_over_kappa: axis("grid-gamma", &grid.grid_gamma)?,
        kappa: grid.kappa,
        n_steps: steps,
        ansatz,
        renorm,
    };
    spec.validate()?;
    if steps < MIN_STEPS {
        return Err(Failure::InvalidParameter(format!("--steps {steps} is below the minimum of {MIN_STEPS}")));
    }
    Ok(spec)
}

fn with_jobs<T: Send>(jobs: Option<usize>, work: impl FnOnce() -> T + Send) -> Result<T, Failure> {
    match jobs {
        None => Ok(work()),
        Some(0) => Err(Failure::InvalidParameter("--jobs must be ≥ 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build().map_err(Failure::compute)?;
            Ok(pool.install(work))
        }
    }
}

pub fn optimize_q_cmd(args: &OptimizeQArgs) -> Result<(), Failure> {
    let opt = optimize_q([args.q_lo, args.q_hi])?;
    let format = args.out.format;
    emit(
        args.out.output.as_deref(),
        Box::new(move |w: &mut dyn Write| match format {
            Format::Csv => writeln!(w, "q_star,d_q_star\n{},{}", fmt_sig(opt.q), fmt_sig(opt.distance)).map_err(render_err),
            Format::Json => {
                let scan: Vec<[f64; 2]> = opt.scan.iter().map(|&(q, d)| [round_sig(q), round_sig(d)]).collect();
                let doc = json!({
                    "q_star": round_sig(opt.q),
                    "d_q_star": round_sig(opt.distance),
                    "bracket": opt.bracket,
                    "scan": scan,
                });
                serde_json::to_writer_pretty(&mut *w, &doc).map_err(render_err)?;
                writeln!(w).map_err(render_err)
            }
        }),
    )
}

fn write_waveform(w: &CouplingWaveform, format: Format, out: &mut dyn Write) -> Result<(), String> {
    match format {
        Format::Csv => w.write_csv(out).map_err(render_err),
        Format::Json => {
            w.write_json(&mut *out).map_err(render_err)?;
            writeln!(out).map_err(render_err)
        }
    }
}

fn designed_waveform(trajectory_args: &TrajectoryArgs, ansatz_args: &AnsatzArgs) -> Result<CouplingWaveform, Failure> {
    let traj = trajectory(trajectory_args)?;
    let (ansatz, renorm) = design_params(ansatz_args)?;
    Ok(synthesize(&traj, ansatz, renorm, ansatz_args.steps)?)
}

pub fn design_cmd(args: &DesignArgs) -> Result<(), Failure> {
    let waveform = designed_waveform(&args.trajectory, &args.ansatz)?;
    let format = args.out.format;
    emit(args.out.output.as_deref(), Box::new(move |w: &mut dyn Write| write_waveform(&waveform, format, w)))
}

pub fn evolve_cmd(args: &EvolveArgs) -> Result<(), Failure> {
    let channel = channel(&args.channel)?;
    let waveform = match &args.waveform {
        Some(path) => CouplingWaveform::read(path).map_err(waveform_input)?,
        None => designed_waveform(&args.trajectory, &args.ansatz)?,
    };
    let result = match channel.kind {
        ChannelKind::None => evolve_schrodinger(&waveform)?,
        _ => evolve_lindblad(&waveform, channel)?,
    };
    if let Some(path) = &args.dump_states {
        write_atomic(path, Box::new(|w: &mut dyn Write| result.write_states_json(w).map_err(render_err)))?;
    }
    let format = args.out.format;
    emit(
        args.out.output.as_deref(),
        Box::new(move |w: &mut dyn Write| match format {
            Format::Csv => result.write_csv(w).map_err(render_err),
            Format::Json => result.write_json(&mut *w).map_err(render_err).and_then(|_| writeln!(w).map_err(render_err)),
        }),
    )
}

fn findings_json(grid: &SweepGrid) -> serde_json::Value {
    let f = grid.findings();
    let r = |x: Option<f64>| x.map(round_sig);
    json!({
        "channel": grid.channel,
        "max_mirror_gap": r(f.max_mirror_gap),
        "mirror_gap_tolerance": AD_DEGENERACY_TOLERANCE,
        "min_asymmetry_margin": r(f.min_asymmetry_margin),
        "asymmetry_gamma_over_kappa": PD_ASYMMETRY_GAMMA,
        "unitary_row_min": r(f.unitary_row_min),
        "unitary_floor": UNITARY_FLOOR,
        "max_decay_increase": r(f.max_decay_increase),
        "monotone_decay_tolerance": MONOTONE_DECAY_TOLERANCE,
        "missing_cells": f.missing_cells,
    })
}

fn sweep_parameters(spec: &SweepSpec) -> serde_json::Value {
    json!({
        "log10_p": spec.log10_p,
        "gamma_over_kappa": spec.gamma_over_kappa,
        "kappa": spec.kappa,
        "t_final": 10.0 / spec.kappa,
        "n_steps": spec.n_steps,
        "q": spec.ansatz.q,
        "delta0": spec.renorm.delta0,
        "delta1": spec.renorm.delta1,
        "lambda0": spec.renorm.lambda0,
        "initial_state": "|01><01|",
    })
}

fn file_name(path: &Path) -> String {
    path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
}

/// `dir/name.csv` → `dir/name.manifest.json`.
fn manifest_path(output: &Path) -> PathBuf {
    let stem = output.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "sweep".into());
    output.with_file_name(format!("{stem}.manifest.json"))
}

pub fn sweep_cmd(args: &SweepArgs) -> Result<(), Failure> {
    let kind = match args.channel {
        Channel::Ad => ChannelKind::AmplitudeDamping,
        Channel::Pd => ChannelKind::PhaseDamping,
        Channel::None => return Err(Failure::InvalidParameter("--channel must be ad or pd for a sweep".into())),
    };
    let (ansatz, renorm) = design_params(&args.ansatz)?;
    let spec = sweep_spec(&args.grid, ansatz, renorm, args.ansatz.steps)?;
    let grid = with_jobs(args.grid.jobs, || run_sweep(kind, &spec))??;
    let findings = findings_json(&grid);
    let format = args.out.format;
    {
        let findings = findings.clone();
        let grid = &grid;
        emit(
            args.out.output.as_deref(),
            Box::new(move |w: &mut dyn Write| match format {
                Format::Csv => grid.write_csv(w).map_err(render_err),
                Format::Json => {
                    serde_json::to_writer_pretty(&mut *w, &json!({ "grid": grid, "findings": findings })).map_err(render_err)?;
                    writeln!(w).map_err(render_err)
                }
            }),
        )?;
    }
    if let Some(output) = &args.out.output {
        let mut manifest = Manifest::new("sweep", sweep_parameters(&spec));
        manifest.outputs.push(file_name(output));
        manifest.results = findings;
        write_manifest(&manifest_path(output), &manifest)?;
    }
    Ok(())
}

fn write_manifest(path: &Path, manifest: &Manifest) -> Result<(), Failure> {
    write_atomic(
        path,
        Box::new(|w: &mut dyn Write| {
            manifest.write_json(&mut *w).map_err(render_err)?;
            writeln!(w).map_err(render_err)
        }),
    )
}

fn write_csv_file(
    dir: &Path,
    name: &str,
    manifest: &mut Manifest,
    render: impl FnOnce(&mut dyn Write) -> Result<(), String>,
) -> Result<(), Failure> {
    write_atomic(&dir.join(name), Box::new(render))?;
    manifest.outputs.push(name.to_string());
    Ok(())
}

pub fn reproduce_cmd(args: &ReproduceArgs) -> Result<(), Failure> {
    let wants = |f: Figure| args.figure == Figure::All || args.figure == f;
    let spec = if wants(Figure::Sweep) {
        Some(sweep_spec(&args.grid, AnsatzParams::default(), RenormalizationParams::default(), args.steps)?)
    } else {
        None
    };
    if args.grid.jobs == Some(0) {
        return Err(Failure::InvalidParameter("--jobs must be ≥ 1".into()));
    }
    std::fs::create_dir_all(&args.output)
        .map_err(|e| Failure::UnwritableOutput(format!("{}: {e}", args.output.display())))?;
    let dir = args.output.as_path();

    let figure_name = match args.figure {
        Figure::Distance => "1",
        Figure::Entropy => "2",
        Figure::Exp => "3",
        Figure::Triangle => "4",
        Figure::Sweep => "5",
        Figure::All => "all",
    };
    let mut parameters = json!({
        "figure": figure_name,
        "q": AnsatzParams::default().q,
        "delta0": RenormalizationParams::default().delta0,
        "delta1": RenormalizationParams::default().delta1,
        "lambda0": RenormalizationParams::default().lambda0,
    });
    if let Some(spec) = &spec {
        parameters["sweep"] = sweep_parameters(spec);
    }
    let mut manifest = Manifest::new("reproduce", parameters);
    let mut results = serde_json::Map::new();

    if wants(Figure::Distance) || wants(Figure::Entropy) {
        let curve = reproduce_distance_curve()?;
        let q_star = curve.optimum.q;
        let (eps, at) = linearization_error(q_star)?;
        results.insert(
            "q_optimization".into(),
            json!({
                "q_star": round_sig(q_star),
                "d_q_star": round_sig(curve.optimum.distance),
                "single_dipped": curve.is_single_dipped(),
                "linearization_error": round_sig(eps),
                "linearization_error_at_f": round_sig(at),
                "linearization_error_constant": LINEARIZATION_ERROR,
            }),
        );
        if wants(Figure::Distance) {
            write_csv_file(dir, "fig1_distance.csv", &mut manifest, |w| curve.write_csv(w).map_err(render_err))?;
        }
        if wants(Figure::Entropy) {
            let entropy = reproduce_entropy_curve(q_star)?;
            write_csv_file(dir, "fig2_entropy.csv", &mut manifest, |w| entropy.write_csv(w).map_err(render_err))?;
        }
    }
    for (figure, family, name, key) in [
        (Figure::Exp, ExampleFamily::ExpSaturation, "fig3_exp.csv", "exp_design"),
        (Figure::Triangle, ExampleFamily::TriangleWave, "fig4_triangle.csv", "triangle_design"),
    ] {
        if !wants(figure) {
            continue;
        }
        let example = reproduce_design_example(family)?;
        let fid = example.fidelity();
        results.insert(
            key.into(),
            json!({
                "sup_error": round_sig(fid.sup_error),
                "sup_error_in_band": round_sig(fid.sup_error_in_band),
                "max_entropy_step": round_sig(fid.max_entropy_jump),
                "max_abs_lambda": round_sig(fid.max_abs_lambda),
                "bound": round_sig(LINEARIZATION_ERROR + 0.01),
            }),
        );
        write_csv_file(dir, name, &mut manifest, |w| example.write_csv(w).map_err(render_err))?;
    }
    if let Some(spec) = &spec {
        for (kind, name, key) in [
            (ChannelKind::AmplitudeDamping, "fig5_ad.csv", "sweep_ad"),
            (ChannelKind::PhaseDamping, "fig5_pd.csv", "sweep_pd"),
        ] {
            let grid = with_jobs(args.grid.jobs, || run_sweep(kind, spec))??;
            results.insert(key.into(), findings_json(&grid));
            write_csv_file(dir, name, &mut manifest, |w| grid.write_csv(w).map_err(render_err))?;
        }
    }
    manifest.results = serde_json::Value::Object(results);
    write_manifest(&dir.join("manifest.json"), &manifest)
}

pub fn verify_cmd(args: &VerifyArgs) -> Result<(), Failure> {
    let checks = self_check()?;
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    let mut stdout = std::io::stdout().lock();
    let io = |e: std::io::Error| Failure::UnwritableOutput(format!("stdout: {e}"));
    if args.json {
        serde_json::to_writer_pretty(&mut stdout, &checks).map_err(|e| Failure::UnwritableOutput(e.to_string()))?;
        writeln!(stdout).map_err(io)?;
    } else {
        for c in &checks {
            writeln!(stdout, "{} {:<26} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail).map_err(io)?;
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(format!("failing checks: {}", failed.join(", "))))
    }
}
