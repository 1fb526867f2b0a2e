use std::error::Error;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use optoffload::amdahl::{aggregate, analyze, table1, BenchmarkProfile, ClassifierConfig};
use optoffload::complexity::{
    breakeven_size, log_spaced_sizes, speedup_curve, Breakeven, ComplexityClass, CrossoverConfig,
};
use optoffload::costmodel::{energy_advantage, pipeline_time, CostScenario, STAGE_NAMES};
use optoffload::io::{
    parse_converter_csv, parse_grid_csv, parse_profiles, parse_tabulated_csv, write_curve_csv, write_grid_csv,
    CONVERTER_HEADER,
};
use optoffload::optics::{simulate_4f_convolution, DetectorMode, RealGrid, SlmConfig};
use optoffload::pareto::{feasibility_gap, pareto_frontier, synthetic_survey, ConverterRecord};
use optoffload::validate::{run_all, IDEAL_FIDELITY_FLOOR};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::report::RunReport;
use crate::{Cli, Command, CostmodelArgs, CrossoverArgs, KernelArg, ParetoArgs, ProfileArgs, SimulateArgs};

pub type CmdResult<T> = Result<T, Box<dyn Error>>;

pub fn run(cli: &Cli) -> CmdResult<RunReport> {
    match &cli.command {
        Command::Simulate(a) => simulate(cli, a),
        Command::ProfileAnalyze(a) => profile_analyze(cli, a),
        Command::Pareto(a) => pareto(cli, a),
        Command::Crossover(a) => crossover(cli, a),
        Command::Costmodel(a) => costmodel(cli, a),
        Command::Oracle => oracle(cli),
    }
}

fn read(path: &Path) -> CmdResult<String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn with_path<T>(path: &Path, r: optoffload::Result<T>) -> CmdResult<T> {
    r.map_err(|e| format!("{}: {e}", path.display()).into())
}

fn real_part(path: &Path) -> CmdResult<RealGrid> {
    let g = with_path(path, parse_grid_csv(&read(path)?))?;
    let re = g.data().iter().map(|z| z.re).collect();
    Ok(RealGrid::new(g.rows(), g.cols(), re)?)
}

fn simulate(cli: &Cli, a: &SimulateArgs) -> CmdResult<RunReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let lhs = match &a.input_a {
        Some(p) => real_part(p)?,
        None => {
            let (rows, cols) = (a.rows.unwrap_or(1) as usize, a.cols.unwrap_or(1) as usize);
            RealGrid::from_fn(rows, cols, |_, _| rng.gen())?
        }
    };
    let (rows, cols) = lhs.dims();
    let rhs = match (&a.input_b, a.kernel) {
        (Some(p), _) => real_part(p)?,
        (None, KernelArg::Random) => RealGrid::from_fn(rows, cols, |_, _| rng.gen())?,
        (None, KernelArg::Delta) => RealGrid::from_fn(rows, cols, |r, c| if r == 0 && c == 0 { 1.0 } else { 0.0 })?,
    };
    let slm = SlmConfig::new(rows, cols, a.pixel_pitch, a.bit_depth, a.macro_pixel as usize)?;
    let mode: DetectorMode = a.mode.into();
    let sim = simulate_4f_convolution(&lhs, &rhs, &slm, a.encoding.into(), mode)?;

    let mut rep = RunReport::new("simulate");
    rep.input("rows", rows)
        .input("cols", cols)
        .input("mode", mode)
        .input("encoding", optoffload::optics::Encoding::from(a.encoding))
        .input("bit_depth", a.bit_depth)
        .input("macro_pixel", a.macro_pixel)
        .input("pixel_pitch_m", a.pixel_pitch)
        .input(
            "kernel",
            if a.input_b.is_some() {
                "file"
            } else if a.kernel == KernelArg::Delta {
                "delta"
            } else {
                "random"
            },
        )
        .input("seed", cli.seed);
    let (er, ec) = slm.effective_dims();
    let err = sim.result.rel_error(&sim.reference)?;
    rep.output("fidelity", sim.fidelity, "1")
        .output("relative_error", err, "1")
        .output("effective_rows", er, "px")
        .output("effective_cols", ec, "px")
        .output("phase_levels", slm.phase_levels(), "levels")
        .output("result_energy", sim.result.energy(), "arb");
    if mode == DetectorMode::IdealComplex && sim.fidelity < IDEAL_FIDELITY_FLOOR {
        rep.failures.push(format!("ideal fidelity {} below {}", sim.fidelity, IDEAL_FIDELITY_FLOOR));
    }
    rep.artifact(&cli.out_dir, "simulate_result.csv", &write_grid_csv(&sim.result))?;
    let metrics = json!({ "inputs": rep.inputs, "outputs": rep.outputs });
    rep.artifact(&cli.out_dir, "simulate_metrics.json", &(serde_json::to_string_pretty(&metrics)? + "\n"))?;
    Ok(rep)
}

fn profile_analyze(cli: &Cli, a: &ProfileArgs) -> CmdResult<RunReport> {
    let profiles: Vec<BenchmarkProfile> = match &a.input {
        Some(p) => with_path(p, parse_profiles(&read(p)?))?,
        None => table1::profiles(),
    };
    let cfg = match &a.patterns {
        Some(p) => ClassifierConfig::new(p)?,
        None => ClassifierConfig::default(),
    };
    let reports = profiles.iter().map(|p| analyze(p, &cfg, a.p)).collect::<optoffload::Result<Vec<_>>>()?;
    let agg = aggregate(&reports)?;

    let mut rep = RunReport::new("profile-analyze");
    match &a.input {
        Some(p) => rep.input("input", p.display().to_string()),
        None => rep.input("input", "table1"),
    };
    rep.input("patterns", cfg.patterns()).input("acceleration", a.p);
    rep.output("benchmarks", reports.len(), "count")
        .output("mean_speedup", agg.mean, "x")
        .output("median_speedup", agg.median, "x")
        .output("min_speedup", agg.min, "x")
        .output("max_speedup", agg.max, "x");

    let mut csv = String::from("benchmark,accel_fraction,speedup,asymptotic_speedup\n");
    let mut worst = 0.0f64;
    for (i, r) in reports.iter().enumerate() {
        let _ = writeln!(csv, "{},{},{},{}", quote(&r.name), r.accel_fraction, r.speedup, r.asymptotic_speedup);
        let mut row = json!({
            "benchmark": r.name,
            "accel_pct": 100.0 * r.accel_fraction,
            "speedup": r.speedup,
        });
        if a.table1 {
            let (_, printed_pct, printed) = table1::PRINTED[i];
            let rel = (r.speedup.to_f64() - printed) / printed;
            worst = worst.max(rel.abs());
            row["printed_pct"] = json!(printed_pct);
            row["printed_speedup"] = json!(printed);
            row["rel_diff"] = json!(rel);
        }
        rep.row(row);
    }
    if a.table1 {
        rep.output("printed_mean", table1::PRINTED_MEAN, "x")
            .output("printed_median", table1::PRINTED_MEDIAN, "x")
            .output("max_rel_diff_vs_printed", worst, "1");
    }
    rep.artifact(&cli.out_dir, "profile_speedups.csv", &csv)?;
    Ok(rep)
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

fn converter_csv(records: &[ConverterRecord]) -> String {
    let mut out = CONVERTER_HEADER.join(",") + "\n";
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{:e},{:e},{},{}",
            quote(&r.id),
            r.kind,
            r.power_w,
            r.sample_rate_hz,
            r.resolution_bits,
            r.year
        );
    }
    out
}

fn pareto(cli: &Cli, a: &ParetoArgs) -> CmdResult<RunReport> {
    let mut rep = RunReport::new("pareto");
    let records = match (&a.input, a.synthetic) {
        (Some(p), _) => {
            rep.input("input", p.display().to_string());
            with_path(p, parse_converter_csv(&read(p)?))?
        }
        (None, n) => {
            let n = n.unwrap_or(1) as usize;
            rep.input("synthetic", n).input("seed", cli.seed);
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            synthetic_survey(n, a.kind, &mut rng)
        }
    };
    rep.input("kind", a.kind.to_string());
    let of_kind: Vec<ConverterRecord> = records.iter().filter(|r| r.kind == a.kind).cloned().collect();
    if of_kind.is_empty() {
        return Err(format!("no {} records in survey", a.kind).into());
    }
    let front = pareto_frontier(&of_kind)?;
    let best = front.iter().map(ConverterRecord::energy_per_bit_j).fold(f64::INFINITY, f64::min);
    rep.output("records", of_kind.len(), "count").output("frontier_size", front.len(), "count").output(
        "best_energy_per_bit_j",
        best,
        "J/bit",
    );
    if let Some(t) = a.target {
        rep.input("target_j_per_bit", t);
        let g = feasibility_gap(&of_kind, a.kind, t)?;
        rep.output("gap", g.gap, "x").output("gap_best_record", g.best_record, "id");
    }
    for r in &front {
        rep.row(json!({
            "id": r.id,
            "power_w": r.power_w,
            "sample_rate_hz": r.sample_rate_hz,
            "bits": r.resolution_bits,
            "energy_per_bit_j": r.energy_per_bit_j(),
        }));
    }
    if a.synthetic.is_some() {
        rep.artifact(&cli.out_dir, "pareto_survey.csv", &converter_csv(&records))?;
    }
    rep.artifact(&cli.out_dir, "pareto_frontier.csv", &converter_csv(&front))?;
    Ok(rep)
}

fn crossover(cli: &Cli, a: &CrossoverArgs) -> CmdResult<RunReport> {
    let class = match &a.tabulated {
        Some(p) => {
            let label = p.file_stem().map_or("tabulated".into(), |s| s.to_string_lossy().into_owned());
            ComplexityClass::Tabulated(with_path(p, parse_tabulated_csv(&label, &read(p)?))?)
        }
        None => a.class.parse()?,
    };
    let cfg =
        CrossoverConfig::new(a.t_conv, a.t_digital, a.t_analog)?.with_conversion(a.inputs_per_n, a.outputs_per_n)?;
    let sizes = log_spaced_sizes(a.n_min, a.n_max, a.points as usize)?;
    let curve = speedup_curve(&class, &cfg, &sizes)?;

    let mut rep = RunReport::new("crossover");
    rep.input("class", class.label()).input("constants", cfg);
    rep.input("n_min", a.n_min).input("n_max", a.n_max).input("points", a.points);
    let (first, last) = (curve[0], curve[curve.len() - 1]);
    rep.output("speedup_at_n_min", first.speedup, "x").output("speedup_at_n_max", last.speedup, "x");
    if let Some(l) = last.log10_speedup {
        rep.output("log10_speedup_at_n_max", l, "log10(x)");
    }
    if let Some(t) = a.target {
        rep.input("target", t);
        match breakeven_size(&class, &cfg, t)? {
            Breakeven::At { n } => {
                rep.output("breakeven_n", n, "N");
            }
            Breakeven::NotReached { cap, log10_speedup_at_cap } => {
                rep.output("breakeven_n", "not reached", "N").output("search_cap", cap, "N");
                if let Some(l) = log10_speedup_at_cap {
                    rep.output("log10_speedup_at_cap", l, "log10(x)");
                }
            }
        }
    }
    rep.artifact(&cli.out_dir, "crossover_curve.csv", &write_curve_csv(&curve))?;
    Ok(rep)
}

fn costmodel(cli: &Cli, a: &CostmodelArgs) -> CmdResult<RunReport> {
    let mut rep = RunReport::new("costmodel");
    let scenario = match &a.config {
        Some(p) => {
            rep.input("config", p.display().to_string());
            with_path(p, CostScenario::parse(&read(p)?))?
        }
        None => {
            rep.input("config", "prototype");
            CostScenario::prototype()
        }
    };
    rep.input("hardware", scenario.hardware).input("software_total_s", scenario.software_total_s);
    let t = pipeline_time(&scenario.hardware)?;
    let ratio = optoffload::costmodel::hardware_vs_software_ratio(&scenario.hardware, scenario.software_total_s)?;
    rep.output("hardware_total_s", t.total_s, "s")
        .output("software_total_s", scenario.software_total_s, "s")
        .output("hardware_vs_software_ratio", ratio, "x")
        .output("data_movement_fraction", t.data_movement_fraction, "1");
    let mut csv = String::from("stage,time_s,fraction\n");
    for ((name, time), frac) in STAGE_NAMES.iter().zip(scenario.hardware.stages()).zip(t.per_stage_fraction) {
        let _ = writeln!(csv, "{name},{time:e},{frac}");
        rep.row(json!({ "stage": name, "time_s": time, "fraction": frac }));
    }
    if let Some(e) = &scenario.energy {
        rep.input("energy", e);
        let adv = energy_advantage(&e.model, e.macs, e.dac_samples, e.adc_samples)?;
        rep.output("energy_advantage", adv, "x");
    }
    rep.artifact(&cli.out_dir, "costmodel_breakdown.csv", &csv)?;
    Ok(rep)
}

fn oracle(cli: &Cli) -> CmdResult<RunReport> {
    let checks = run_all(cli.seed)?;
    let mut rep = RunReport::new("oracle");
    rep.input("seed", cli.seed);
    let passed = checks.iter().filter(|c| c.passed).count();
    rep.output("checks", checks.len(), "count").output("passed", passed, "count");
    let mut csv = String::from("check,metric,bound,cases,passed\n");
    for c in &checks {
        let _ = writeln!(csv, "{},{:e},{:e},{},{}", c.name, c.metric, c.bound, c.cases, c.passed);
        rep.row(json!({
            "check": c.name,
            "metric": c.metric,
            "bound": c.bound,
            "cases": c.cases,
            "passed": c.passed,
        }));
        if !c.passed {
            rep.failures.push(format!("{}: {} vs bound {}", c.name, c.metric, c.bound));
        }
    }
    rep.artifact(&cli.out_dir, "oracle_checks.csv", &csv)?;
    Ok(rep)
}
