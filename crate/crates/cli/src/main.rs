//! `quditclass` command-line tool.
//!
//! Every command that writes files also writes `<out>.manifest.json` with
//! the full argument echo, seed, version, output list and wall time.

use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::warn;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use quditclass::capacity::{self, LmConfig};
use quditclass::datasets::{self, CirclesParams, Dataset};
use quditclass::model::{self, Model, ModelSpec, ParameterVector, ZOO_NAMES};
use quditclass::qstate;
use quditclass::training::{self, FitResult, LossKind, TrainConfig};
use quditclass::{rng, Error};

#[derive(Parser, Debug, Serialize)]
#[command(name = "quditclass", version, about = "Single-qudit variational classifiers")]
struct Cli {
    /// Worker threads for parallel restarts and labelings.
    #[arg(long, global = true, env = "QUDITCLASS_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
enum Command {
    /// Generate a synthetic dataset as CSV.
    Gen(GenArgs),
    /// Fit a model on a stratified training split.
    Train(TrainArgs),
    /// Recompute accuracy of stored parameters.
    Eval(EvalArgs),
    /// Estimate the lossless-memory dimension of a model.
    Lmdim(LmArgs),
    /// Compare the numerical and closed-form qubit kernels.
    Kernel(KernelArgs),
    /// Export mean values on a grid, or Bloch coordinates of data points.
    Grid(GridArgs),
    /// Standardize and project a CSV onto its principal components.
    Pca(PcaArgs),
    /// List the built-in models or export them as JSON specs.
    Zoo(ZooArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
enum GenKind {
    Xor,
    Circles,
    Moons,
    ThreeClass,
}

#[derive(Args, Debug, Serialize)]
struct GenArgs {
    kind: GenKind,
    #[arg(long, default_value_t = 2000)]
    n: usize,
    /// Cluster jitter (xor) or Gaussian noise (moons).
    #[arg(long)]
    noise: Option<f64>,
    /// Gap between three-class cells.
    #[arg(long, default_value_t = 0.05)]
    margin: f64,
    /// XOR layout centre as `a,b`.
    #[arg(long, default_value = "0,0", value_parser = parse_pair)]
    center: (f64, f64),
    #[arg(long, default_value_t = 0.25)]
    r_inner: f64,
    #[arg(long, default_value_t = 0.1)]
    r_gap: f64,
    #[arg(long, default_value_t = 0.5)]
    r_outer: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct DataArgs {
    #[arg(long)]
    data: PathBuf,
    /// Comma-separated feature columns; default: every non-label column.
    #[arg(long, value_delimiter = ',')]
    features: Option<Vec<String>>,
    #[arg(long, default_value = "label")]
    label: String,
}

#[derive(Args, Debug, Serialize)]
struct TrainArgs {
    /// Built-in model name or path to a JSON spec.
    #[arg(long)]
    model: String,
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, default_value_t = 0.1)]
    train_fraction: f64,
    /// JSON TrainConfig; an `sgd` section selects mini-batch SGD.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the config seed; also seeds the split.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    restarts: Option<usize>,
    /// Turn on the softmax layer of the cross-entropy loss.
    #[arg(long)]
    softmax: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize, Deserialize, PartialEq)]
enum Subset {
    All,
    Train,
    Test,
}

#[derive(Args, Debug, Serialize)]
struct EvalArgs {
    /// Defaults to the model stored with the parameters.
    #[arg(long)]
    model: Option<String>,
    /// Output of `train`.
    #[arg(long)]
    params: PathBuf,
    #[command(flatten)]
    data: DataArgs,
    /// Evaluate on the stored split (same fraction and seed as training).
    #[arg(long, value_enum, default_value = "all")]
    subset: Subset,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct LmArgs {
    #[arg(long)]
    model: String,
    #[arg(long)]
    n_start: Option<usize>,
    #[arg(long, default_value_t = 12)]
    n_max: usize,
    #[arg(long, default_value_t = 50)]
    labeling_budget: usize,
    #[arg(long, default_value_t = 10)]
    pattern_budget: usize,
    #[arg(long, default_value_t = 6)]
    exhaustive_threshold: usize,
    #[arg(long, default_value_t = 50)]
    restarts: usize,
    #[arg(long, default_value_t = 1000)]
    max_iters: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct KernelArgs {
    #[arg(long, default_value = "qubit-A")]
    model: String,
    /// Encoding weight shared by every `s` entry.
    #[arg(long, default_value_t = PI / 4.0)]
    s: f64,
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    x: Option<(f64, f64)>,
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    y: Option<(f64, f64)>,
    /// Require the closed form; a point at the origin is then an error.
    #[arg(long)]
    closed_form: bool,
    /// Compare on this many random (s, x, y) triples instead.
    #[arg(long)]
    sweep: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug, Serialize)]
struct GridArgs {
    #[arg(long)]
    model: Option<String>,
    /// Output of `train`.
    #[arg(long)]
    params: PathBuf,
    #[arg(long, default_value = "-1,1", value_parser = parse_pair, allow_hyphen_values = true)]
    xrange: (f64, f64),
    #[arg(long, default_value = "-1,1", value_parser = parse_pair, allow_hyphen_values = true)]
    yrange: (f64, f64),
    #[arg(long, default_value_t = 100)]
    resolution: usize,
    /// Per-point Bloch coordinates of this dataset instead of a grid.
    #[arg(long)]
    bloch: Option<PathBuf>,
    #[arg(long, default_value = "label")]
    label: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct PcaArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    components: usize,
    #[arg(long, value_delimiter = ',')]
    features: Option<Vec<String>>,
    #[arg(long, default_value = "label")]
    label: String,
}

#[derive(Args, Debug, Serialize)]
struct ZooArgs {
    /// Directory to write `<name>.json` specs into.
    #[arg(long)]
    export: Option<PathBuf>,
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(format!("expected two comma-separated numbers, got '{s}'"));
    }
    let a = parts[0].parse().map_err(|_| format!("'{}' is not a number", parts[0]))?;
    let b = parts[1].parse().map_err(|_| format!("'{}' is not a number", parts[1]))?;
    Ok((a, b))
}

/// Exit code 2 for usage and configuration problems, 1 for runtime ones.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    fn runtime(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::UnknownModel { .. }
            | Error::InvalidConfig(_)
            | Error::InvalidSpec(_)
            | Error::Parse { .. }
            | Error::DimensionMismatch { .. }
            | Error::ReadoutMismatch(_)
            | Error::Json(_)
            | Error::Csv(_) => 2,
            _ => 1,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::runtime(e.to_string())
    }
}

type CmdResult<T = ()> = Result<T, Failure>;

fn fmt6(v: f64) -> String {
    format!("{v:.6}")
}

fn load_model(arg: &str) -> CmdResult<Model> {
    let path = Path::new(arg);
    let spec = if path.is_file() {
        let text = fs::read_to_string(path)?;
        ModelSpec::from_json(&text).map_err(|e| Failure::usage(format!("{arg}: {e}")))?
    } else {
        model::builtin_model(arg)?
    };
    let m = Model::new(spec)?;
    for w in m.warnings() {
        warn!("{w}");
    }
    Ok(m)
}

fn load_data(args: &DataArgs) -> CmdResult<Dataset> {
    if !args.data.is_file() {
        return Err(Failure::usage(format!("data file {} not found", args.data.display())));
    }
    let data = datasets::load_csv(&args.data, args.features.as_deref(), &args.label)?;
    for c in data.empty_classes() {
        warn!("class {c} has no rows");
    }
    Ok(data)
}

fn check_k(model: &Model, data: &Dataset) -> CmdResult {
    if model.input_dim() != data.k() {
        return Err(Failure::usage(format!(
            "model {} expects k = {} inputs but the data has k = {} feature columns",
            model.spec().label(),
            model.input_dim(),
            data.k()
        )));
    }
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CmdResult {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::runtime(e.to_string()))?;
    fs::write(path, text + "\n")?;
    Ok(())
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

struct Manifest<'a> {
    cli: &'a Cli,
    started: Instant,
}

impl Manifest<'_> {
    fn write(&self, command: &str, seed: Option<u64>, primary: &Path, outputs: &[&Path]) -> CmdResult {
        let manifest = json!({
            "command": command,
            "config": self.cli,
            "seed": seed,
            "version": env!("CARGO_PKG_VERSION"),
            "outputs": outputs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
            "wall_time_s": self.started.elapsed().as_secs_f64(),
        });
        write_json(&manifest_path(primary), &manifest)
    }
}

fn cmd_gen(args: &GenArgs, manifest: &Manifest) -> CmdResult {
    let data = match args.kind {
        GenKind::Xor => datasets::gen_xor_at(
            args.n,
            args.noise.unwrap_or(0.1),
            [args.center.0, args.center.1],
            args.seed,
        )?,
        GenKind::Circles => datasets::gen_circles(
            args.n,
            CirclesParams {
                r_inner: args.r_inner,
                r_gap: args.r_gap,
                r_outer: args.r_outer,
            },
            args.seed,
        )?,
        GenKind::Moons => datasets::gen_moons(args.n, args.noise.unwrap_or(0.1), args.seed)?,
        GenKind::ThreeClass => datasets::gen_three_class(args.n, args.margin, args.seed)?,
    };
    data.save_csv(&args.out)?;
    println!("wrote {} rows to {}", data.len(), args.out.display());
    manifest.write("gen", Some(args.seed), &args.out, &[&args.out])
}

#[derive(Serialize, Deserialize)]
struct TrainOutput {
    model: ModelSpec,
    loss: LossKind,
    config: TrainConfig,
    train_fraction: f64,
    split_seed: u64,
    train_size: usize,
    test_size: usize,
    train_accuracy: f64,
    test_accuracy: Option<f64>,
    fit: FitResult,
}

fn read_train_output(path: &Path) -> CmdResult<TrainOutput> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{}: schema error: {e}", path.display())))
}

fn split(data: &Dataset, fraction: f64, seed: u64) -> CmdResult<(Dataset, Dataset)> {
    if fraction >= 1.0 {
        return Ok((data.clone(), Dataset::empty(data.classes)));
    }
    let (train, test) = datasets::stratified_split(data, fraction, seed)?;
    for (c, &n) in train.class_counts().iter().enumerate() {
        if n == 0 && data.class_counts()[c] > 0 {
            warn!("class {c} has 0 training rows");
        }
    }
    Ok((train, test))
}

fn cmd_train(args: &TrainArgs, manifest: &Manifest) -> CmdResult {
    let model = load_model(&args.model)?;
    let data = load_data(&args.data)?;
    check_k(&model, &data)?;
    if !(args.train_fraction > 0.0 && args.train_fraction <= 1.0) {
        return Err(Failure::usage(format!(
            "--train-fraction must lie in (0, 1], got {}",
            args.train_fraction
        )));
    }
    let mut config: TrainConfig = match &args.config {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?
        }
        None => TrainConfig::default(),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(r) = args.restarts {
        config.restarts = r;
    }
    config.validate()?;
    let mut loss = LossKind::for_model(&model);
    if let LossKind::CrossEntropy { use_softmax, .. } = &mut loss {
        *use_softmax = args.softmax;
    }
    let (train, test) = split(&data, args.train_fraction, config.seed)?;
    let fit = training::fit(&model, &train, &config, loss)?;
    let test_accuracy = if test.is_empty() {
        None
    } else {
        Some(training::accuracy(&model, &fit.best_params, &test)?)
    };
    println!("train accuracy {}", fmt6(fit.train_accuracy));
    if let Some(acc) = test_accuracy {
        println!("test accuracy {}", fmt6(acc));
    }
    println!("best loss {} (restart {})", fmt6(fit.best_loss), fit.best_restart_index);
    let out = TrainOutput {
        model: model.spec().clone(),
        loss,
        config: config.clone(),
        train_fraction: args.train_fraction,
        split_seed: config.seed,
        train_size: train.len(),
        test_size: test.len(),
        train_accuracy: fit.train_accuracy,
        test_accuracy,
        fit,
    };
    write_json(&args.out, &out)?;
    manifest.write("train", Some(config.seed), &args.out, &[&args.out])
}

fn cmd_eval(args: &EvalArgs, manifest: &Manifest) -> CmdResult {
    let stored = read_train_output(&args.params)?;
    let model = match &args.model {
        Some(m) => load_model(m)?,
        None => Model::new(stored.model.clone())?,
    };
    let data = load_data(&args.data)?;
    check_k(&model, &data)?;
    let subset = match args.subset {
        Subset::All => data,
        Subset::Train => split(&data, stored.train_fraction, stored.split_seed)?.0,
        Subset::Test => split(&data, stored.train_fraction, stored.split_seed)?.1,
    };
    if subset.is_empty() {
        return Err(Failure::runtime("empty dataset"));
    }
    let params = &stored.fit.best_params;
    if params.s.len() != model.spec().num_s || params.w.len() != model.spec().num_w {
        return Err(Failure::usage(format!(
            "parameter length mismatch: model needs {} (S = {}, W = {}), file has {}",
            model.num_params(),
            model.spec().num_s,
            model.spec().num_w,
            params.len()
        )));
    }
    let acc = training::accuracy(&model, params, &subset)?;
    println!("accuracy {} on {} rows", fmt6(acc), subset.len());
    if let Some(out) = &args.out {
        write_json(
            out,
            &json!({ "accuracy": acc, "rows": subset.len(), "subset": args.subset }),
        )?;
        manifest.write("eval", None, out, &[out])?;
    }
    Ok(())
}

fn cmd_lmdim(args: &LmArgs, manifest: &Manifest) -> CmdResult {
    let model = load_model(&args.model)?;
    let cfg = LmConfig {
        n_start: args.n_start,
        n_max: args.n_max,
        labeling_budget: args.labeling_budget,
        exhaustive_threshold: args.exhaustive_threshold,
        pattern_budget: args.pattern_budget,
        train: TrainConfig {
            restarts: args.restarts,
            max_iters: args.max_iters,
            ..TrainConfig::default()
        },
        seed: args.seed,
    };
    let report = capacity::estimate_lm_dimension(&model, &cfg)?;
    for r in &report.per_n {
        println!(
            "n = {:>2}: {} ({} pattern(s) tried)",
            r.n,
            if r.shattered { "shattered" } else { "not shattered" },
            r.patterns_tried
        );
    }
    println!("{:<14} {:>3} {:>3} {:>6}", "model", "k", "P", "D_LM");
    println!(
        "{:<14} {:>3} {:>3} {:>6}{}",
        report.model,
        report.k,
        report.num_params,
        report.d_lm,
        if report.capped { " (capped at n_max)" } else { "" }
    );
    if let Some(out) = &args.out {
        write_json(out, &report)?;
        manifest.write("lmdim", Some(args.seed), out, &[out])?;
    }
    Ok(())
}

fn kernel_params(model: &Model, s: f64) -> ParameterVector {
    let spec = model.spec();
    ParameterVector {
        s: vec![s; spec.num_s],
        w: vec![0.0; spec.num_w],
    }
}

fn cmd_kernel(args: &KernelArgs) -> CmdResult {
    let model = load_model(&args.model)?;
    if model.input_dim() != 2 {
        return Err(Failure::usage("kernel comparison needs a k = 2 model"));
    }
    if let Some(count) = args.sweep {
        let mut stream = rng::stream(args.seed, &[]);
        let mut max_diff = 0.0f64;
        let mut skipped = 0;
        for _ in 0..count {
            let s = stream.random_range(-PI..PI);
            let x = [stream.random_range(-1.0..1.0), stream.random_range(-1.0..1.0)];
            let y = [stream.random_range(-1.0..1.0), stream.random_range(-1.0..1.0)];
            let numeric = model.kernel(&kernel_params(&model, s), &x, &y)?;
            match model::kernel_qubit_model_a_closed_form(s, x, y) {
                Ok(closed) => max_diff = max_diff.max((numeric - closed).abs()),
                Err(_) => skipped += 1,
            }
        }
        println!("sweep of {count}: max |numeric - closed form| = {max_diff:.6e}");
        if skipped > 0 {
            println!("{skipped} triple(s) at the origin skipped");
        }
        return Ok(());
    }
    let (Some(x), Some(y)) = (args.x, args.y) else {
        return Err(Failure::usage("--x and --y are required unless --sweep is given"));
    };
    let (x, y) = ([x.0, x.1], [y.0, y.1]);
    let numeric = model.kernel(&kernel_params(&model, args.s), &x, &y)?;
    println!("numeric     {}", fmt6(numeric));
    match model::kernel_qubit_model_a_closed_form(args.s, x, y) {
        Ok(closed) => {
            println!("closed form {}", fmt6(closed));
            println!("difference  {:.6e}", (numeric - closed).abs());
        }
        Err(e) if args.closed_form => return Err(Failure::runtime(e.to_string())),
        Err(e) => println!("closed form unavailable: {e}"),
    }
    Ok(())
}

fn csv_line(out: &mut impl Write, values: &[String]) -> std::io::Result<()> {
    writeln!(out, "{}", values.join(","))
}

fn cmd_grid(args: &GridArgs, manifest: &Manifest) -> CmdResult {
    let stored = read_train_output(&args.params)?;
    let model = match &args.model {
        Some(m) => load_model(m)?,
        None => Model::new(stored.model.clone())?,
    };
    let params = &stored.fit.best_params;
    let file = fs::File::create(&args.out)?;
    let mut out = std::io::BufWriter::new(file);
    if let Some(path) = &args.bloch {
        let data = load_data(&DataArgs {
            data: path.clone(),
            features: None,
            label: args.label.clone(),
        })?;
        check_k(&model, &data)?;
        if model.dim() == 3 {
            csv_line(&mut out, &["lx".into(), "ly".into(), "lz".into(), "label".into()])?;
        } else {
            let mut header: Vec<String> = (1..=model.basis().len()).map(|i| format!("b{i}")).collect();
            header.push("label".into());
            csv_line(&mut out, &header)?;
        }
        for (x, label) in data.iter() {
            let psi = model.forward(params, x)?;
            let mut row: Vec<String> = if model.dim() == 3 {
                let (a, b, c) = qstate::su2_projection(&psi)?;
                vec![a.to_string(), b.to_string(), c.to_string()]
            } else {
                qstate::bloch_vector(&psi, model.basis())?
                    .coords
                    .iter()
                    .map(|v| v.to_string())
                    .collect()
            };
            row.push(label.to_string());
            csv_line(&mut out, &row)?;
        }
    } else {
        if model.input_dim() != 2 {
            return Err(Failure::usage(format!(
                "grid mode needs a k = 2 model, {} has k = {}",
                model.spec().label(),
                model.input_dim()
            )));
        }
        if args.resolution < 2 {
            return Err(Failure::usage("--resolution must be at least 2"));
        }
        csv_line(&mut out, &["x1".into(), "x2".into(), "expectation".into(), "class".into()])?;
        let r = args.resolution;
        let at = |(lo, hi): (f64, f64), i: usize| lo + (hi - lo) * i as f64 / (r - 1) as f64;
        for i in 0..r {
            for j in 0..r {
                let x = [at(args.xrange, i), at(args.yrange, j)];
                let psi = model.forward(params, &x)?;
                let e = qstate::expectation(&psi, model.observable_matrix())?;
                let class = model.predict(params, &x)?;
                csv_line(&mut out, &[x[0].to_string(), x[1].to_string(), e.to_string(), class.to_string()])?;
            }
        }
    }
    out.flush()?;
    manifest.write("grid", None, &args.out, &[&args.out])
}

fn cmd_pca(args: &PcaArgs, manifest: &Manifest) -> CmdResult {
    let data = load_data(&DataArgs {
        data: args.input.clone(),
        features: args.features.clone(),
        label: args.label.clone(),
    })?;
    if args.components > data.k() {
        return Err(Failure::usage(format!(
            "--components {} exceeds the {} input features",
            args.components,
            data.k()
        )));
    }
    let pca = datasets::pca_fit(&data, args.components)?;
    let projected = datasets::pca_transform(&pca, &data)?;
    projected.save_csv(&args.out)?;
    let mut model_path = args.out.as_os_str().to_owned();
    model_path.push(".pca.json");
    let model_path = PathBuf::from(model_path);
    write_json(&model_path, &pca)?;
    let total: f64 = pca.explained_variance.iter().sum();
    println!(
        "{} components, explained variance {}",
        args.components,
        pca.explained_variance.iter().map(|v| fmt6(*v)).collect::<Vec<_>>().join(", ")
    );
    println!("total {}", fmt6(total));
    manifest.write("pca", None, &args.out, &[&args.out, &model_path])
}

fn cmd_zoo(args: &ZooArgs) -> CmdResult {
    println!("{:<14} {:>3} {:>3} {:>6}  summary", "model", "k", "P", "D_LM");
    for e in model::zoo_catalog() {
        println!(
            "{:<14} {:>3} {:>3} {:>6}  {}",
            e.name,
            e.k,
            e.params,
            e.reported_lm.map_or("-".to_string(), |v| v.to_string()),
            e.summary
        );
    }
    if let Some(dir) = &args.export {
        fs::create_dir_all(dir)?;
        for name in ZOO_NAMES {
            let spec = model::builtin_model(name)?;
            fs::write(dir.join(format!("{name}.json")), spec.to_json()? + "\n")?;
        }
        println!("exported {} specs to {}", ZOO_NAMES.len(), dir.display());
    }
    Ok(())
}

fn run(cli: &Cli) -> CmdResult {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::runtime(e.to_string()))?;
    }
    let manifest = Manifest {
        cli,
        started: Instant::now(),
    };
    match &cli.command {
        Command::Gen(a) => cmd_gen(a, &manifest),
        Command::Train(a) => cmd_train(a, &manifest),
        Command::Eval(a) => cmd_eval(a, &manifest),
        Command::Lmdim(a) => cmd_lmdim(a, &manifest),
        Command::Kernel(a) => cmd_kernel(a),
        Command::Grid(a) => cmd_grid(a, &manifest),
        Command::Pca(a) => cmd_pca(a, &manifest),
        Command::Zoo(a) => cmd_zoo(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
