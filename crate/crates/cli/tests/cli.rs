use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn medoidnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_medoidnet"))
        .args(args)
        .env_remove("MEDOIDNET_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

const SINGLETON4: &str = "x_id,y\nx,a\nx,a\nx,a\nx,b\nx,b\nx,b\nx,c\nx,c\nx,c\n";

fn train_singleton4(dir: &TempDir) -> (String, Value) {
    let data = write(dir, "s4.csv", SINGLETON4);
    let model = path(dir, "model.json");
    let o = medoidnet(&[
        "train", "--dataset", &data, "--out", &model,
        "--instance-space", "singleton", "--label-space", "four_point",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    (model, serde_json::from_str(&stdout(&o)).unwrap())
}

#[test]
fn train_single_row() {
    let dir = TempDir::new().unwrap();
    let data = write(&dir, "one.csv", "x_1,y\n0.5,2\n");
    let model = path(&dir, "m.json");
    let o = medoidnet(&["train", "--dataset", &data, "--out", &model, "--learner", "separable"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let summary: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(summary["d"], 1);
    assert_eq!(summary["gamma"], "inf");
    assert!(Path::new(&model).exists());
}

#[test]
fn singleton4_trains_to_the_center_point() {
    let dir = TempDir::new().unwrap();
    let (model, summary) = train_singleton4(&dir);
    assert_eq!(summary["alpha_star"], 0.5);
    assert_eq!(summary["d"], 1);
    let data = write(&dir, "q.csv", "x_id\nx\nx\n");
    let o = medoidnet(&["predict", "--model", &model, "--dataset", &data]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "y\no\no\n");
}

#[test]
fn missing_dataset_is_an_io_error() {
    let dir = TempDir::new().unwrap();
    let missing = path(&dir, "absent.csv");
    let o = medoidnet(&["train", "--dataset", &missing, "--out", &path(&dir, "m.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("absent.csv"), "{}", stderr(&o));
}

#[test]
fn malformed_rows_name_the_line() {
    let dir = TempDir::new().unwrap();
    let data = write(&dir, "bad.csv", "x_1,y\n0,1\nzero,2\n");
    let o = medoidnet(&["train", "--dataset", &data, "--out", &path(&dir, "m.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bad.csv:3"), "{}", stderr(&o));
}

#[test]
fn predict_reproduces_separated_training_labels() {
    let dir = TempDir::new().unwrap();
    let data = write(&dir, "d.csv", "x_1,y\n0,u\n0.1,u\n10,v\n10.1,v\n20,w\n20.2,w\n");
    let model = path(&dir, "m.json");
    let o = medoidnet(&["train", "--dataset", &data, "--out", &model, "--delta", "0.5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let summary: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(summary["alpha_star"], 0.0);
    let out = path(&dir, "pred.csv");
    let o = medoidnet(&["predict", "--model", &model, "--dataset", &data, "--out", &out]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(fs::read_to_string(out).unwrap(), "y\nu\nu\nv\nv\nw\nw\n");
}

#[test]
fn predict_on_an_empty_file_writes_only_the_header() {
    let dir = TempDir::new().unwrap();
    let (model, _) = train_singleton4(&dir);
    let empty = write(&dir, "e.csv", "x_id\n");
    let o = medoidnet(&["predict", "--model", &model, "--dataset", &empty]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "y\n");
}

#[test]
fn predict_rejects_mismatched_instances() {
    let dir = TempDir::new().unwrap();
    let data = write(&dir, "d.csv", "x_1,y\n0,1\n1,2\n");
    let model = path(&dir, "m.json");
    assert!(medoidnet(&["train", "--dataset", &data, "--out", &model]).status.success());
    let wide = write(&dir, "w.csv", "x_1,x_2\n0,0\n");
    let o = medoidnet(&["predict", "--model", &model, "--dataset", &wide]);
    assert!(!o.status.success());
}

#[test]
fn round_trip_alpha_matches_the_model() {
    let dir = TempDir::new().unwrap();
    let rows = "x_1,y\n0,a\n1,a\n2,b\n3,a\n4,b\n5,b\n6,a\n7,b\n";
    let data = write(&dir, "d.csv", rows);
    let model = path(&dir, "m.json");
    let o = medoidnet(&["train", "--dataset", &data, "--out", &model, "--learner", "fin"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let saved: Value = serde_json::from_str(&fs::read_to_string(&model).unwrap()).unwrap();
    let o = medoidnet(&["predict", "--model", &model, "--dataset", &data]);
    let preds: Vec<String> = stdout(&o).lines().skip(1).map(str::to_string).collect();
    let truth: Vec<&str> = rows.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    // discrete metric: the empirical risk is the disagreement rate
    let alpha = preds.iter().zip(&truth).filter(|(p, t)| p.as_str() != **t).count() as f64 / truth.len() as f64;
    assert_eq!(alpha, saved["alpha_star"].as_f64().unwrap());
}

#[test]
fn experiment_single_row() {
    let o = medoidnet(&[
        "experiment", "--distribution", "singleton4", "--learner", "fin",
        "--n-grid", "9", "--trials", "1", "--seed", "7",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,trial,learner,estimated_risk,alpha_star,q_star,selected_gamma,d,wall_time");
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("9,0,fin,"));
}

#[test]
fn experiment_output_is_independent_of_threads() {
    let dir = TempDir::new().unwrap();
    let run = |threads: &str, name: &str| {
        let out = path(&dir, name);
        let o = medoidnet(&[
            "experiment", "--distribution", "finite_multiclass", "--learner", "fin,separable,knn1",
            "--n-grid", "20,40", "--trials", "3", "--seed", "5", "--threads", threads, "--out", &out,
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        fs::read(out).unwrap()
    };
    let a = run("1", "a.csv");
    let b = run("4", "b.csv");
    let c = run("4", "c.csv");
    assert_eq!(a, b);
    assert_eq!(b, c);
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 1 + 2 * 3 * 3);
}

#[test]
fn experiment_with_no_trials_writes_only_the_header() {
    let o = medoidnet(&[
        "experiment", "--distribution", "singleton4", "--n-grid", "9", "--trials", "0", "--seed", "1",
        "--learner", "fin",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 1);
}

#[test]
fn experiment_jsonl_and_params() {
    let dir = TempDir::new().unwrap();
    let jsonl = path(&dir, "rows.jsonl");
    let o = medoidnet(&[
        "experiment", "--distribution", "laplace_regression", "--param", "s=0.5", "--learner", "separable",
        "--n-grid", "16", "--trials", "2", "--seed", "3", "--mc-draws", "500", "--jsonl", &jsonl,
        "--out", &path(&dir, "rows.csv"),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(jsonl).unwrap();
    assert_eq!(text.lines().count(), 2);
    for line in text.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        assert!(v["risk_half_width"].as_f64().unwrap() > 0.0);
    }
}

#[test]
fn unknown_ids_list_the_valid_ones() {
    let o = medoidnet(&["experiment", "--distribution", "gauss", "--n-grid", "9", "--trials", "1", "--seed", "1"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("singleton4"), "{}", stderr(&o));
    let o = medoidnet(&[
        "experiment", "--distribution", "singleton4", "--learner", "svm", "--n-grid", "9", "--trials", "1",
        "--seed", "1",
    ]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("knn_sqrt"), "{}", stderr(&o));
}

#[test]
fn bound_examples() {
    let o = medoidnet(&["bound", "--bound-mode", "hoeffding", "--n", "100", "--k", "10", "--bits", "0", "--delta", "0.05", "--alpha", "0.1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!(v > 0.0);
    let digits: String = stdout(&o).trim().chars().filter(|c| c.is_ascii_digit()).collect();
    assert_eq!(digits.trim_start_matches('0').len(), 12);

    let o = medoidnet(&["bound", "--bound-mode", "hoeffding", "--n", "10", "--k", "5", "--delta", "0.05"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("n > 2k"), "{}", stderr(&o));

    let o = medoidnet(&["bound", "--n", "10", "--delta", "1.5"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn final_bound_is_q_minus_alpha() {
    let args = ["--n", "1000", "--k", "7", "--bits", "3", "--delta", "0.01", "--alpha", "0.2", "--l", "2"];
    let q = medoidnet(&[&["bound", "--bound-mode", "q"][..], &args].concat());
    let f = medoidnet(&[&["bound", "--bound-mode", "final"][..], &args].concat());
    let q: f64 = stdout(&q).trim().parse().unwrap();
    let f: f64 = stdout(&f).trim().parse().unwrap();
    assert!((q - 0.2 - f).abs() < 1e-9 * q, "{q} {f}");
}

#[test]
fn net_dump_lists_cells() {
    let dir = TempDir::new().unwrap();
    let data = write(&dir, "p.csv", "x_1,x_2\n0,0\n1,0\n5,5\n");
    let o = medoidnet(&["net-dump", "--dataset", &data, "--gamma", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        stdout(&o),
        "row,cell,center_row,is_center,distance\n0,0,0,true,0\n1,0,0,false,1\n2,1,2,true,0\n"
    );
    let o = medoidnet(&["net-dump", "--dataset", &data, "--gamma", "inf"]);
    assert!(stdout(&o).lines().skip(1).all(|l| l.split(',').nth(1) == Some("0")));
}

#[test]
fn validate_space_reports() {
    let o = medoidnet(&["validate-space", "--space", "four_point"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);

    let dir = TempDir::new().unwrap();
    // a loss that breaks the triangle inequality is accepted as a general loss
    let csv = write(&dir, "loss.csv", ",p,q,r\np,0,1,5\nq,1,0,1\nr,5,1,0\n");
    let o = medoidnet(&["validate-space", "--space", &format!("csv:{csv}")]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["metric"], false);

    // an asymmetric one is not a loss at all
    let csv = write(&dir, "asym.csv", ",p,q\np,0,1\nq,2,0\n");
    let o = medoidnet(&["validate-space", "--space", &format!("csv:{csv}")]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn config_file_supplies_defaults() {
    let dir = TempDir::new().unwrap();
    let data = write(&dir, "s4.csv", SINGLETON4);
    let model = path(&dir, "m.json");
    let cfg = write(
        &dir,
        "run.cfg",
        &format!("# training run\ndataset={data}\nout={model}\ninstance_space=singleton\nlabel_space=four_point\nlearner=fin\n"),
    );
    let o = medoidnet(&["train", "--config", &cfg]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(Path::new(&model).exists());
}
