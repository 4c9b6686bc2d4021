use std::fs::File;
use std::io::{self, BufWriter, Write};

use anyhow::{anyhow, bail, Context, Result};
use medoidnet::bounds::{compression_deviation_bound, q_bound, BoundMode, BoundParams, Schedules};
use medoidnet::harness::{convergence_experiment, make_distribution, ExperimentConfig, LearnerId, Params};
use medoidnet::learners::{countable_med_net, ctbl_unbdd, fin_med_net, medoid_net, MedoidModel, SweepConfig, Variant};
use medoidnet::net::{assign_voronoi, build_gamma_net};
use medoidnet::space::{resolve, validate_metric_axioms, RegisteredSpace};
use medoidnet::{Error, LabeledSample};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::dataset::{self, Dataset};
use crate::spaces::CliSpace;
use crate::{Command, FormatError, Opts};

pub fn dispatch(command: &Command, o: &Opts) -> Result<()> {
    match command {
        Command::Train => train(o),
        Command::Predict => predict(o),
        Command::Experiment => experiment(o),
        Command::Bound => bound(o),
        Command::NetDump => net_dump(o),
        Command::ValidateSpace => validate_space(o),
    }
}

fn required<'a, T>(v: &'a Option<T>, flag: &str) -> Result<&'a T> {
    v.as_ref().ok_or_else(|| anyhow!(Error::Precondition(format!("missing required option --{flag}"))))
}

fn output(path: &Option<std::path::PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create `{}`", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn space(id: &str) -> Result<RegisteredSpace> {
    resolve(id).with_context(|| format!("resolving space `{id}`"))
}

/// Runs `$body` with `$xs` / `$ys` bound to the concrete instance and label
/// spaces.
macro_rules! with_spaces {
    ($x:expr, $y:expr, |$xs:ident, $ys:ident| $body:expr) => {
        match ($x, $y) {
            (RegisteredSpace::Euclidean($xs), RegisteredSpace::Euclidean($ys)) => $body,
            (RegisteredSpace::Euclidean($xs), RegisteredSpace::Finite($ys)) => $body,
            (RegisteredSpace::Finite($xs), RegisteredSpace::Euclidean($ys)) => $body,
            (RegisteredSpace::Finite($xs), RegisteredSpace::Finite($ys)) => $body,
        }
    };
}

macro_rules! with_space {
    ($x:expr, |$xs:ident| $body:expr) => {
        match $x {
            RegisteredSpace::Euclidean($xs) => $body,
            RegisteredSpace::Finite($xs) => $body,
        }
    };
}

fn scale_json(g: f64) -> Value {
    if g.is_finite() {
        json!(g)
    } else {
        json!("inf")
    }
}

fn schedules(o: &Opts) -> Schedules {
    Schedules { delta: o.delta, bits: o.bits, l_trunc: o.ltrunc, eps: o.eps }
}

// ---------------------------------------------------------------- train

fn train(o: &Opts) -> Result<()> {
    if o.distribution.is_some() {
        bail!(Error::Precondition("train reads --dataset; --distribution is for experiments".into()));
    }
    let path = required(&o.dataset, "dataset")?;
    let out = required(&o.out, "out")?;
    let data = dataset::read(path, true)?;
    if data.len() == 0 {
        bail!(Error::Precondition(format!("dataset `{}` has no rows", path.display())));
    }
    let x_id = o.instance_space.clone().unwrap_or_else(|| data.instances.default_space_id(data.dim));
    let y_id = match &o.label_space {
        Some(id) => id.clone(),
        None => data.default_label_space_id().expect("labels are required"),
    };
    let (xsp, ysp) = (space(&x_id)?, space(&y_id)?);
    let (json_model, summary) = with_spaces!(&xsp, &ysp, |xs, ys| train_in(&data, xs, ys, o)?);
    std::fs::write(out, json_model).with_context(|| format!("cannot write model `{}`", out.display()))?;
    println!("{summary}");
    Ok(())
}

fn train_in<SX: CliSpace, SY: CliSpace>(data: &Dataset, xs: &SX, ys: &SY, o: &Opts) -> Result<(String, Value)>
where
    SX::Point: serde::Serialize + serde::de::DeserializeOwned,
    SY::Point: serde::Serialize + serde::de::DeserializeOwned,
{
    let sample = LabeledSample::new(xs.instances(data)?, ys.labels(data)?)?;
    let variant = match &o.learner {
        Some(l) => Variant::parse(l)?,
        None if ys.cardinality().is_some() => Variant::Fin,
        None => Variant::Separable,
    };
    let n = sample.len();
    let sched = schedules(o);
    let delta = o.delta.unwrap_or(0.05);
    let cfg = SweepConfig::default();
    let model = match variant {
        Variant::Fin => fin_med_net(&sample, delta, xs, ys, &cfg)?,
        Variant::Countable => countable_med_net(&sample, delta, sched.bits_n(n), xs, ys, &cfg)?,
        Variant::Unbounded => ctbl_unbdd(&sample, delta, sched.bits_n(n), sched.l_n(n), xs, ys, &cfg)?,
        Variant::Separable => medoid_net(&sample, &sched, xs, ys, &cfg)?,
    };
    let summary = json!({
        "alpha_star": model.alpha_star,
        "q_star": model.q_star,
        "gamma": scale_json(model.selected_gamma),
        "d": model.d(),
    });
    Ok((model.to_json()?, summary))
}

// ---------------------------------------------------------------- predict

fn predict(o: &Opts) -> Result<()> {
    let model_path = required(&o.model, "model")?;
    let data_path = required(&o.dataset, "dataset")?;
    let text = std::fs::read_to_string(model_path)
        .with_context(|| format!("cannot read model `{}`", model_path.display()))?;
    let raw: Value = serde_json::from_str(&text).map_err(|e| FormatError(format!("{}: {e}", model_path.display())))?;
    let field = |k: &str| -> Result<String> {
        raw[k]
            .as_str()
            .map(str::to_string)
            .ok_or_else(|| FormatError(format!("{}: missing `{k}`", model_path.display())).into())
    };
    let (x_id, y_id) = (field("instance_space_id")?, field("label_space_id")?);
    if let Some(given) = &o.instance_space {
        if *given != x_id {
            bail!(Error::Precondition(format!("model was trained on instance space `{x_id}`, not `{given}`")));
        }
    }
    let data = dataset::read(data_path, false)?;
    let (xsp, ysp) = (space(&x_id)?, space(&y_id)?);
    let mut w = output(&o.out)?;
    with_spaces!(&xsp, &ysp, |xs, ys| predict_in(&text, &data, xs, ys, &mut w)?);
    w.flush()?;
    Ok(())
}

fn predict_in<SX: CliSpace, SY: CliSpace>(
    text: &str,
    data: &Dataset,
    xs: &SX,
    ys: &SY,
    w: &mut dyn Write,
) -> Result<()>
where
    SX::Point: serde::Serialize + serde::de::DeserializeOwned,
    SY::Point: serde::Serialize + serde::de::DeserializeOwned,
{
    let model: MedoidModel<SX::Point, SY::Point> = MedoidModel::from_json(text)?;
    let instances = xs.instances(data)?;
    for x in &instances {
        xs.check(x)?;
    }
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["y"])?;
    for x in &instances {
        out.write_record([ys.format_label(&model.predict(x, xs))])?;
    }
    out.flush()?;
    Ok(())
}

// ---------------------------------------------------------------- experiment

fn parse_params(o: &Opts) -> Result<Params> {
    o.params
        .iter()
        .map(|p| {
            p.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| FormatError(format!("--param expects key=value, got `{p}`")).into())
        })
        .collect()
}

fn experiment(o: &Opts) -> Result<()> {
    if o.dataset.is_some() {
        bail!(Error::Precondition("experiments sample from --distribution; --dataset is for train/predict".into()));
    }
    let dist_id = required(&o.distribution, "distribution")?;
    let seed = *required(&o.seed, "seed")?;
    let dist = make_distribution(dist_id, &parse_params(o)?)?;
    let learners = o
        .learner
        .as_deref()
        .unwrap_or("separable")
        .split(',')
        .map(|s| LearnerId::parse(s.trim()))
        .collect::<medoidnet::Result<Vec<_>>>()?;
    let grid = match &o.n_grid {
        None => Vec::new(),
        Some(s) if s.trim().is_empty() => Vec::new(),
        Some(s) => s
            .split(',')
            .map(|v| v.trim().parse::<usize>().map_err(|_| FormatError(format!("--n-grid: `{v}` is not a size"))))
            .collect::<Result<Vec<_>, _>>()?,
    };
    let trials = o.trials.unwrap_or(1);
    let mut cfg = ExperimentConfig {
        schedules: schedules(o),
        record_wall_time: o.timing,
        ..ExperimentConfig::default()
    };
    if let Some(m) = o.mc_draws {
        cfg.mc_draws = m;
    }
    let result = convergence_experiment(&learners, &dist, &grid, trials, seed, &cfg)?;
    let mut w = output(&o.out)?;
    result.write_csv(&mut w)?;
    w.flush()?;
    if let Some(p) = &o.jsonl {
        let f = File::create(p).with_context(|| format!("cannot create `{}`", p.display()))?;
        result.write_jsonl(BufWriter::new(f))?;
    }
    // keep stdout clean when the CSV goes there
    let mut summary: Box<dyn Write> = if o.out.is_some() { Box::new(io::stdout()) } else { Box::new(io::stderr()) };
    for (n, learner, median) in result.medians() {
        writeln!(summary, "median risk n={n} learner={}: {median}", learner.as_str())?;
    }
    Ok(())
}

// ---------------------------------------------------------------- bound

/// `v` with 12 significant digits.
pub fn format_significant(v: f64) -> String {
    if v == 0.0 {
        return format!("{:.11}", 0.0);
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let s = format!("{:.*}", (11 - exp) as usize, v);
        // rounding may carry into a new leading digit
        let digits = s.chars().filter(|c| c.is_ascii_digit()).skip_while(|&c| c == '0').count();
        if digits > 12 && exp < 11 {
            return format!("{:.*}", (10 - exp).max(0) as usize, v);
        }
        s
    } else {
        format!("{v:.11e}")
    }
}

fn bound(o: &Opts) -> Result<()> {
    let mode = o.bound_mode.as_deref().unwrap_or("q");
    let p = BoundParams::new(
        *required(&o.n, "n")?,
        o.alpha.unwrap_or(0.0),
        o.k.unwrap_or(0),
        u64::from(o.bits.unwrap_or(0)),
        *required(&o.delta, "delta")?,
        o.l.unwrap_or(1.0),
    );
    let value = match mode {
        "q" => q_bound(&p)?,
        other => compression_deviation_bound(&p, other.parse::<BoundMode>()?)?,
    };
    println!("{}", format_significant(value));
    Ok(())
}

// ---------------------------------------------------------------- net-dump

fn net_dump(o: &Opts) -> Result<()> {
    let path = required(&o.dataset, "dataset")?;
    let gamma = *required(&o.gamma, "gamma")?;
    let data = dataset::read(path, false)?;
    let x_id = o.instance_space.clone().unwrap_or_else(|| data.instances.default_space_id(data.dim));
    let xsp = space(&x_id)?;
    let mut w = output(&o.out)?;
    with_space!(&xsp, |xs| dump_in(&data, xs, gamma, &mut w)?);
    w.flush()?;
    Ok(())
}

fn dump_in<SX: CliSpace>(data: &Dataset, xs: &SX, gamma: f64, w: &mut dyn Write) -> Result<()>
where
    SX::Point: serde::Serialize + serde::de::DeserializeOwned,
{
    let pts = xs.instances(data)?;
    let net = build_gamma_net(&pts, gamma, xs)?;
    let cells = assign_voronoi(&pts, &net, xs)?;
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["row", "cell", "center_row", "is_center", "distance"])?;
    for (i, &cell) in cells.cell_of.iter().enumerate() {
        let c = net.centers[cell];
        out.write_record([
            i.to_string(),
            cell.to_string(),
            c.to_string(),
            (c == i).to_string(),
            xs.dist(&pts[i], &pts[c]).to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

// ---------------------------------------------------------------- validate-space

fn validate_space(o: &Opts) -> Result<()> {
    let id = required(&o.space, "space")?;
    let sp = space(id)?;
    let metric = with_space!(&sp, |s| medoidnet::Space::is_metric(s));
    let (points, report) = match &sp {
        RegisteredSpace::Finite(s) => {
            let probe: Vec<usize> = (0..s.len()).collect();
            (probe.len(), validate_metric_axioms(s, &probe))
        }
        RegisteredSpace::Euclidean(s) => {
            let probe: Vec<Vec<f64>> = match &o.dataset {
                Some(path) => s.instances(&dataset::read(path, false)?)?,
                None => {
                    let seed = *required(&o.seed, "seed")?;
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    (0..30).map(|_| (0..s.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect()
                }
            };
            (probe.len(), validate_metric_axioms(s, &probe))
        }
    };
    println!("{}", json!({ "space": id, "metric": metric, "points": points, "violations": report }));
    if report.is_empty() {
        Ok(())
    } else {
        bail!(Error::Precondition(format!("`{id}` violates the metric axioms ({} violations)", report.len())))
    }
}
