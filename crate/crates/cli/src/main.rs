mod config;
mod failure;
mod plot;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use specdim::boxcount::{count_curve, local_slope_curve, MeshMode, SlopeConfig};
use specdim::spectra::{
    decimate, goe_spectrum, ingest_levels, renewal_spectrum, rescale_to_unit_mean, unfold_semicircle, write_levels,
    Parity, Spectrum,
};
use specdim::theory::{
    closed_form_equal_spacing, curve, find_crossing, log_grid, DimensionCurve, Evaluation, QuadratureConfig,
};
use specdim::{RngSeed, SpacingKind, SpacingModel};

use config::ConfigFile;
use failure::{Failure, Stage};
use plot::{Panel, Series, Style};

#[derive(Parser)]
#[command(name = "specdim", version, about = "Local box-counting dimension of level spectra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Theoretical D_b(r) curve of a spacing model
    Theory(TheoryArgs),
    /// Generate a spectrum and write it as a level file
    Sample(SampleArgs),
    /// Box-count a level file and estimate its local dimension
    Analyze(AnalyzeArgs),
    /// Compare two dimension-curve CSV files
    Compare(CompareArgs),
    /// Scale where the theoretical curves of two models cross
    Crossing(CrossingArgs),
}

#[derive(Args)]
struct GridArgs {
    /// Smallest r/s̄ on the grid [default: 0.02]
    #[arg(long)]
    grid_min: Option<f64>,
    /// Largest r/s̄ on the grid [default: 5]
    #[arg(long)]
    grid_max: Option<f64>,
    /// Grid density [default: 48]
    #[arg(long)]
    points_per_decade: Option<usize>,
    /// Settings file with `key = value` lines; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct TheoryArgs {
    /// poisson, goe, gue, gse, equal or tabulated:PATH
    #[arg(long)]
    model: String,
    /// Mean spacing of the model [default: 1]
    #[arg(long)]
    mean: Option<f64>,
    /// Evaluate built-in models through the integral transform
    #[arg(long)]
    transform: bool,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long)]
    plot: bool,
}

#[derive(Args)]
struct SampleArgs {
    /// poisson, goe, gue, gse, equal, tabulated:PATH or goe-matrix
    #[arg(long)]
    model: String,
    #[arg(long)]
    n: usize,
    /// Required for every model except equal
    #[arg(long)]
    seed: Option<u64>,
    /// Mean spacing of renewal spectra [default: 1]
    #[arg(long)]
    mean: Option<f64>,
    /// Output file, or a directory to write a default-named file into
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DecimateArg {
    Even,
    Odd,
}

#[derive(Clone, Copy, ValueEnum)]
enum MeshArg {
    Anchored,
    Averaged,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Level file: one value per line, `#` comments
    input: PathBuf,
    /// Unfold with the semicircle law of a GOE matrix with one eigenvalue per level
    #[arg(long)]
    unfold_semicircle: bool,
    /// Fraction of levels dropped at each edge when unfolding [default: 0.05]
    #[arg(long)]
    trim: Option<f64>,
    #[arg(long, value_enum)]
    decimate: Option<DecimateArg>,
    /// Rescale to unit mean spacing after the other steps
    #[arg(long)]
    rescale: bool,
    /// Least-squares slope window in grid points [default: 5]
    #[arg(long)]
    window: Option<usize>,
    /// Box placement [default: averaged]
    #[arg(long, value_enum)]
    mesh: Option<MeshArg>,
    /// Theory curve to write and plot next to the data
    #[arg(long)]
    overlay: Option<String>,
    /// With --overlay: fail with exit code 4 if the largest deviation exceeds this
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long)]
    plot: bool,
}

#[derive(Args)]
struct CompareArgs {
    curve_a: PathBuf,
    curve_b: PathBuf,
    /// Exit with code 4 when the largest deviation exceeds this
    #[arg(long)]
    tol: Option<f64>,
    /// Restrict the comparison to r/s̄ ≥ this
    #[arg(long)]
    grid_min: Option<f64>,
    /// Restrict the comparison to r/s̄ ≤ this
    #[arg(long)]
    grid_max: Option<f64>,
}

#[derive(Args)]
struct CrossingArgs {
    model_a: String,
    model_b: String,
    /// Search interval in units of r/s̄, as LO,HI
    #[arg(long, default_value = "0.1,1.0")]
    bracket: String,
}

/// A tabulated model keeps the mean of its table unless `mean` is given.
fn parse_model(name: &str, mean: Option<f64>) -> Result<SpacingModel, Failure> {
    if let Some(path) = name.strip_prefix("tabulated:") {
        let model = SpacingModel::load_table(Path::new(path)).input()?;
        return match mean {
            Some(m) => model.with_mean(m).usage(),
            None => Ok(model),
        };
    }
    SpacingModel::by_name(name, mean.unwrap_or(1.0)).usage()
}

fn slope_config(grid: &GridArgs, cfg: &ConfigFile, window: Option<usize>, mesh: Option<MeshArg>) -> Result<SlopeConfig, Failure> {
    let defaults = SlopeConfig::default();
    let mesh = match mesh {
        Some(MeshArg::Anchored) => Some(MeshMode::Anchored),
        Some(MeshArg::Averaged) => Some(MeshMode::OriginAveraged),
        None => None,
    };
    let slope = SlopeConfig {
        window: cfg.pick(window, "window")?.unwrap_or(defaults.window),
        points_per_decade: cfg.pick(grid.points_per_decade, "points-per-decade")?.unwrap_or(defaults.points_per_decade),
        r_min_over_sbar: cfg.pick(grid.grid_min, "grid-min")?.unwrap_or(defaults.r_min_over_sbar),
        r_max_over_sbar: cfg.pick(grid.grid_max, "grid-max")?.unwrap_or(defaults.r_max_over_sbar),
        mesh: cfg.pick(mesh, "mesh")?.unwrap_or(defaults.mesh),
    };
    slope.grid().usage()?;
    Ok(slope)
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn ensure_dir(dir: &Path) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(|e| Failure::input(format!("{}: {e}", dir.display())))
}

fn model_label(name: &str) -> String {
    if name.starts_with("tabulated:") {
        "tabulated".into()
    } else {
        name.to_string()
    }
}

fn theory_curve(model: &SpacingModel, grid: &[f64], transform: bool) -> Result<DimensionCurve, Failure> {
    let q = QuadratureConfig::default();
    let evaluation = if transform || model.kind() == SpacingKind::Tabulated {
        Evaluation::Transform
    } else {
        Evaluation::ClosedForm
    };
    if transform && model.kind() == SpacingKind::EqualSpacing {
        return Err(Failure::usage("the equal-spacing model has no density; drop --transform"));
    }
    curve(model, evaluation, grid, &q).input()
}

fn step_reference(grid: &[f64]) -> Series {
    Series {
        label: "equal spacing".into(),
        points: grid.iter().map(|&x| (x, closed_form_equal_spacing(x, 1.0).value)).collect(),
        style: Style::DashDot,
    }
}

fn dimension_series(c: &DimensionCurve, label: &str, style: Style) -> Series {
    Series { label: label.into(), points: c.points().iter().map(|p| (p.r_over_sbar, p.d_b)).collect(), style }
}

fn dimension_panel(series: Vec<Series>) -> Panel {
    Panel { x_label: "r/s̄".into(), y_label: "D_b(r)".into(), log_x: true, series }
}

fn cmd_theory(args: TheoryArgs) -> Result<(), Failure> {
    let cfg = ConfigFile::load(args.grid.config.as_deref())?;
    let mean = cfg.pick(args.mean, "mean")?;
    let model = parse_model(&args.model, mean)?;
    let slope = slope_config(&args.grid, &cfg, None, None)?;
    let grid = log_grid(slope.r_min_over_sbar, slope.r_max_over_sbar, slope.points_per_decade).usage()?;
    let theory = theory_curve(&model, &grid, args.transform)?;
    ensure_dir(&args.out)?;
    let label = model_label(&args.model);
    write_file(&args.out.join(format!("theory_{label}.csv")), &theory.to_csv())?;
    if args.plot {
        let mut series = vec![dimension_series(&theory, &label, Style::Solid)];
        if model.kind() != SpacingKind::EqualSpacing {
            series.push(step_reference(&grid));
        }
        let svg = plot::render(&dimension_panel(series), None);
        write_file(&args.out.join(format!("theory_{label}.svg")), &svg)?;
    }
    Ok(())
}

fn cmd_sample(args: SampleArgs) -> Result<(), Failure> {
    let cfg = ConfigFile::load(args.config.as_deref())?;
    let mean = cfg.pick(args.mean, "mean")?;
    let seed = cfg.pick(args.seed, "seed")?;
    if args.n < 2 {
        return Err(Failure::usage(format!("--n must be at least 2, got {}", args.n)));
    }
    let spectrum = if args.model == "goe-matrix" {
        let seed = seed.ok_or_else(|| Failure::usage("--seed is required for goe-matrix"))?;
        goe_spectrum(args.n, RngSeed(seed)).input()?
    } else {
        let model = parse_model(&args.model, mean)?;
        let seed = match (seed, model.kind()) {
            (Some(s), _) => s,
            (None, SpacingKind::EqualSpacing) => 0,
            (None, _) => return Err(Failure::usage(format!("--seed is required for model {}", args.model))),
        };
        renewal_spectrum(&model, args.n, RngSeed(seed)).usage()?
    };
    let path = if args.out.is_dir() {
        let name = match seed {
            Some(s) => format!("{}_n{}_seed{s}.txt", model_label(&args.model), args.n),
            None => format!("{}_n{}.txt", model_label(&args.model), args.n),
        };
        args.out.join(name)
    } else {
        args.out.clone()
    };
    write_levels(&spectrum, &path).input()?;
    println!("wrote {} ({} levels)", path.display(), spectrum.len());
    Ok(())
}

fn preprocess(args: &AnalyzeArgs, cfg: &ConfigFile) -> Result<Spectrum, Failure> {
    let mut s = ingest_levels(&args.input).input()?;
    if args.unfold_semicircle {
        let trim = cfg.pick(args.trim, "trim")?.unwrap_or(0.05);
        if !(0.0..=0.25).contains(&trim) {
            return Err(Failure::usage(format!("--trim must be in [0, 0.25], got {trim}")));
        }
        s = unfold_semicircle(&s, trim).input()?;
    } else if args.trim.is_some() {
        return Err(Failure::usage("--trim only applies with --unfold-semicircle"));
    }
    if let Some(parity) = args.decimate {
        let parity = match parity {
            DecimateArg::Even => Parity::Even,
            DecimateArg::Odd => Parity::Odd,
        };
        s = decimate(&s, parity).input()?;
    }
    if args.rescale {
        s = rescale_to_unit_mean(&s).input()?;
    }
    Ok(s)
}

struct Deviation {
    max: f64,
    rms: f64,
    at: f64,
    points: usize,
}

/// Deviation between two curves on the union of their grids within the
/// shared `r/s̄` range, interpolating each linearly in `ln r`.
fn deviation(a: &DimensionCurve, b: &DimensionCurve, bounds: (f64, f64)) -> Result<Deviation, Failure> {
    let lo = a.range().0.max(b.range().0).max(bounds.0);
    let hi = a.range().1.min(b.range().1).min(bounds.1);
    if !(lo <= hi) {
        return Err(Failure::input(format!(
            "curves share no r/s̄ range ({:?} vs {:?})",
            a.range(),
            b.range()
        )));
    }
    let mut xs: Vec<f64> = a
        .points()
        .iter()
        .chain(b.points())
        .map(|p| p.r_over_sbar)
        .filter(|x| (lo..=hi).contains(x))
        .collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let mut d = Deviation { max: 0.0, rms: 0.0, at: lo, points: xs.len() };
    let mut sum_sq = 0.0;
    for &x in &xs {
        let (Some(ya), Some(yb)) = (a.interpolate(x), b.interpolate(x)) else {
            continue;
        };
        let dev = (ya - yb).abs();
        sum_sq += dev * dev;
        if dev > d.max {
            d.max = dev;
            d.at = x;
        }
    }
    d.rms = (sum_sq / xs.len().max(1) as f64).sqrt();
    Ok(d)
}

fn report(d: &Deviation, tol: Option<f64>) -> Result<(), Failure> {
    println!("points: {}", d.points);
    println!("max_abs_deviation: {:.6e}", d.max);
    println!("rms_deviation: {:.6e}", d.rms);
    println!("r_over_sbar_at_max: {:.6e}", d.at);
    match tol {
        Some(t) if d.max > t => Err(Failure::tolerance(format!("max deviation {:.6e} exceeds tolerance {t}", d.max))),
        _ => Ok(()),
    }
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<(), Failure> {
    let cfg = ConfigFile::load(args.grid.config.as_deref())?;
    let slope = slope_config(&args.grid, &cfg, args.window, args.mesh)?;
    let tol = cfg.pick(args.tol, "tol")?;
    if tol.is_some() && args.overlay.is_none() {
        return Err(Failure::usage("--tol needs --overlay"));
    }
    let overlay_model = args.overlay.as_deref().map(|m| parse_model(m, None)).transpose()?;
    let spectrum = preprocess(&args, &cfg)?;
    let counts = count_curve(&spectrum, &slope).input()?;
    let dims = local_slope_curve(&counts, &slope).input()?;

    ensure_dir(&args.out)?;
    let stem = args.input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "levels".into());
    write_file(&args.out.join(format!("{stem}_boxcount.csv")), &counts.to_csv())?;
    write_file(&args.out.join(format!("{stem}_dimension.csv")), &dims.to_csv())?;
    println!("levels: {}", spectrum.len());
    println!("mean_spacing: {:.6e}", counts.sbar());

    let grid: Vec<f64> = dims.points().iter().map(|p| p.r_over_sbar).collect();
    let mut outcome = Ok(());
    let mut overlay_series = None;
    if let (Some(model), Some(name)) = (&overlay_model, &args.overlay) {
        let theory = theory_curve(model, &grid, false)?;
        let label = model_label(name);
        write_file(&args.out.join(format!("{stem}_overlay_{label}.csv")), &theory.to_csv())?;
        outcome = report(&deviation(&dims, &theory, (0.0, f64::INFINITY))?, tol);
        overlay_series = Some(dimension_series(&theory, &label, Style::Solid));
    }

    if args.plot {
        let mut series = vec![dimension_series(&dims, &stem, Style::Circles)];
        series.extend(overlay_series);
        series.push(step_reference(&grid));
        let inset = Panel {
            x_label: "ln(r/s̄)".into(),
            y_label: "ln N(r)".into(),
            log_x: false,
            series: vec![Series {
                label: stem.clone(),
                points: counts.points().iter().map(|p| ((p.r / counts.sbar()).ln(), p.n_boxes.ln())).collect(),
                style: Style::Solid,
            }],
        };
        write_file(&args.out.join(format!("{stem}.svg")), &plot::render(&dimension_panel(series), Some(&inset)))?;
    }
    outcome
}

fn read_curve(path: &Path) -> Result<DimensionCurve, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    DimensionCurve::from_csv(&text, &path.display().to_string()).input()
}

fn cmd_compare(args: CompareArgs) -> Result<(), Failure> {
    let a = read_curve(&args.curve_a)?;
    let b = read_curve(&args.curve_b)?;
    let bounds = (args.grid_min.unwrap_or(0.0), args.grid_max.unwrap_or(f64::INFINITY));
    report(&deviation(&a, &b, bounds)?, args.tol)
}

fn cmd_crossing(args: CrossingArgs) -> Result<(), Failure> {
    let a = parse_model(&args.model_a, None)?;
    let b = parse_model(&args.model_b, None)?;
    let bracket = args
        .bracket
        .split_once(',')
        .and_then(|(lo, hi)| Some((lo.trim().parse::<f64>().ok()?, hi.trim().parse::<f64>().ok()?)))
        .ok_or_else(|| Failure::usage(format!("--bracket expects LO,HI, got '{}'", args.bracket)))?;
    let r = find_crossing(&a, &b, bracket).usage()?;
    println!("r_star_over_sbar: {r:.12}");
    println!("distance_from_sbar: {:.12}", (r - 1.0).abs());
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { failure::EXIT_USAGE } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Theory(a) => cmd_theory(a),
        Command::Sample(a) => cmd_sample(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Crossing(a) => cmd_crossing(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("specdim: {f}");
            ExitCode::from(f.code)
        }
    }
}
