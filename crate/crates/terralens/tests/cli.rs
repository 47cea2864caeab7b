use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn terralens(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_terralens")).args(args).env_remove("TERRALENS_SEED").output().expect("binary runs")
}

fn ok(args: &[&str]) -> Vec<u8> {
    let out = terralens(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn code(args: &[&str]) -> i32 {
    terralens(args).status.code().unwrap()
}

fn text(args: &[&str]) -> String {
    String::from_utf8(ok(args)).unwrap()
}

fn classes(svg: &str) -> Vec<&str> {
    svg.lines().filter_map(|l| l.split("class=\"").nth(1)?.split('"').next()).collect()
}

/// `d` attribute of every `<path>`, in document order.
fn path_data(svg: &str) -> Vec<(&str, &str)> {
    svg.lines()
        .filter(|l| l.starts_with("<path"))
        .map(|l| {
            let class = l.split("class=\"").nth(1).unwrap().split('"').next().unwrap();
            let d = l.split(" d=\"").nth(1).unwrap().split('"').next().unwrap();
            (class, d)
        })
        .collect()
}

fn attr(line: &str, name: &str) -> f64 {
    line.split(&format!(" {name}=\"")).nth(1).unwrap().split('"').next().unwrap().parse().unwrap()
}

const ANTARCTICA_LIKE: &str = r#"{"type":"FeatureCollection","features":[
 {"type":"Feature","properties":{"name":"south"},"geometry":{"type":"Polygon","coordinates":[[
   [-180,-84.7],[-120,-85.5],[-60,-82.0],[0,-84.0],[60,-80.0],[120,-83.0],[180,-84.7],
   [180,-90],[-180,-90],[-180,-84.7]]]}},
 {"type":"Feature","properties":{},"geometry":{"type":"MultiPolygon","coordinates":[
   [[[170,-20],[-170,-20],[-170,-10],[170,-10],[170,-20]]],
   [[[10,40],[30,40],[30,55],[10,55],[10,40]],[[15,45],[20,45],[20,50],[15,50],[15,45]]]]}},
 {"type":"Feature","properties":{},"geometry":{"type":"LineString","coordinates":[[-30,0],[-20,5],[-10,0]]}}
]}"#;

fn coast_file(dir: &TempDir) -> String {
    let p = dir.path().join("coast.geojson");
    std::fs::write(&p, ANTARCTICA_LIKE).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn flat_render_has_full_graticule() {
    let svg = text(&["render", "--tissot", "0"]);
    let c = classes(&svg);
    assert_eq!(c.iter().filter(|c| **c == "meridian").count(), 36);
    assert_eq!(c.iter().filter(|c| c.starts_with("parallel")).count(), 17);
    assert_eq!(c.iter().filter(|c| c.contains("equator")).count(), 1);
    assert!(!svg.contains("tissot\""));
}

#[test]
fn rotated_pole_tissot_is_circular() {
    // The south pole sits at the map centre; Hammer's scale there is 1 in
    // both directions, so the indicatrix is a circle of radius
    // scale · 3° (in radians), scale = 1 / (4√2) metres per Hammer unit.
    let svg = text(&["render", "--rotation", "0,90,0"]);
    let centre: Vec<&str> = svg
        .lines()
        .filter(|l| l.starts_with("<ellipse") && attr(l, "cx").abs() < 1e-6 && attr(l, "cy").abs() < 1e-6)
        .collect();
    assert_eq!(centre.len(), 1);
    let (rx, ry) = (attr(centre[0], "rx"), attr(centre[0], "ry"));
    let expected = 3f64.to_radians() / (4.0 * 2f64.sqrt());
    assert!((rx - ry).abs() <= 1e-6, "{rx} {ry}");
    assert!((rx - expected).abs() <= 1e-6, "{rx} vs {expected}");
}

#[test]
fn render_is_byte_stable() {
    for args in [
        &["render"][..],
        &["render", "--rotation", "-40,25,10", "--graticule", "15", "--tissot", "45"],
        &["render", "--projection", "curved-preview"],
        &["render", "--format", "png", "--size", "400"],
    ] {
        assert_eq!(ok(args), ok(args), "{args:?}");
    }
}

#[test]
fn coastlines_render_including_polar_ring() {
    let dir = TempDir::new().unwrap();
    let coast = coast_file(&dir);
    let svg = text(&["render", "--coastlines", &coast, "--tissot", "0"]);
    let land: Vec<&str> = path_data(&svg).into_iter().filter(|(c, _)| *c == "land").map(|(_, d)| d).collect();
    assert_eq!(land.len(), 3);
    assert_eq!(path_data(&svg).iter().filter(|(c, _)| *c == "coast").count(), 1);
    // The polar ring reaches the bottom of the map, the south pole at
    // y = −√2 / (4√2) = −0.25.
    let ys: Vec<f64> = land[0]
        .split(['M', 'L', 'Z'])
        .filter(|s| !s.is_empty())
        .map(|p| p.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    let min_y = ys.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!((min_y + 0.25).abs() < 1e-3, "{min_y}");

    // Brought to the centre, the same ring is a small closed loop around
    // (0, 0); its farthest vertex is 10° from the pole, about 0.031 m.
    let svg = text(&["render", "--coastlines", &coast, "--rotation", "0,90,0", "--tissot", "0"]);
    let (_, d) = path_data(&svg).into_iter().find(|(c, _)| *c == "land").unwrap();
    assert_eq!(d.matches('M').count(), 1);
    for p in d.split(['M', 'L', 'Z']).filter(|s| !s.is_empty()) {
        let v: Vec<f64> = p.split(',').map(|x| x.parse().unwrap()).collect();
        assert!(v[0].hypot(v[1]) < 0.0325, "{v:?}");
    }
    assert!(ok(&["render", "--coastlines", &coast, "--format", "png", "--size", "300"]).starts_with(b"\x89PNG"));
}

#[test]
fn render_errors_have_stable_exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.geojson");
    std::fs::write(&bad, r#"{"type":"Polygon","coordinates":[[[0,0],[1]]]}"#).unwrap();
    assert_eq!(code(&["render", "--coastlines", bad.to_str().unwrap()]), 2);
    std::fs::write(&bad, "not json").unwrap();
    assert_eq!(code(&["render", "--coastlines", bad.to_str().unwrap()]), 2);
    let missing = dir.path().join("missing.geojson");
    assert_eq!(code(&["render", "--coastlines", missing.to_str().unwrap()]), 2);
    let unwritable = dir.path().join("no/such/dir/map.svg");
    assert_eq!(code(&["render", "--out", unwritable.to_str().unwrap()]), 3);
    assert_eq!(code(&["render", "--graticule", "7"]), 2);
    assert_eq!(code(&["render", "--rotation", "1,2"]), 2);
    assert_eq!(code(&["render", "--size", "0"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
}

#[test]
fn generate_batches() {
    let v: Value =
        serde_json::from_slice(&ok(&["generate", "distance", "--difficulty", "easy", "--count", "3", "--seed", "7"]))
            .unwrap();
    let items = v.as_array().unwrap();
    assert_eq!(items.len(), 3);
    for (i, item) in items.iter().enumerate() {
        assert_eq!(item["id"], format!("distance-easy-7-{i:04}"));
        assert_eq!(item["seed"], 7);
        assert_eq!(item["family"], "distance");
    }
    let args = ["generate", "area", "--difficulty", "small-variation", "--count", "4", "--seed", "3"];
    assert_eq!(ok(&args), ok(&args));
    assert_ne!(ok(&args), ok(&["generate", "area", "--difficulty", "small-variation", "--count", "4", "--seed", "4"]));
    assert_eq!(code(&["generate", "distance", "--difficulty", "easy", "--count", "0"]), 2);
    assert_eq!(code(&["generate", "direction", "--difficulty", "easy"]), 2);
    assert_eq!(code(&["generate", "distance", "--difficulty", "impossible"]), 2);
}

#[test]
fn seed_falls_back_to_environment() {
    let run = |env: Option<&str>, args: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_terralens"));
        c.args(args).env_remove("TERRALENS_SEED");
        if let Some(s) = env {
            c.env("TERRALENS_SEED", s);
        }
        c.output().unwrap().stdout
    };
    let base = ["generate", "direction", "--difficulty", "far", "--count", "2"];
    let from_env = run(Some("9"), &base);
    let mut flagged = base.to_vec();
    flagged.extend(["--seed", "9"]);
    assert_eq!(from_env, run(None, &flagged));
    assert_ne!(from_env, run(None, &base));
}

#[test]
fn sessions() {
    let v: Value = serde_json::from_slice(&ok(&["generate", "session", "--participant", "0", "--seed", "1"])).unwrap();
    assert_eq!(v["entries"].as_array().unwrap().len(), 108);
    assert_eq!(
        ok(&["generate", "session", "--participant", "0", "--seed", "1"]),
        ok(&["session", "--participant", "0", "--seed", "1"])
    );
    let a = ok(&["session", "--participant", "2", "--seed", "1"]);
    assert_eq!(a, ok(&["session", "--participant", "2", "--seed", "1"]));
    assert_ne!(a, ok(&["session", "--participant", "3", "--seed", "1"]));
}

const HEADER: &str = "participant,visualisation,task,difficulty,stimulus_id,chosen,correct,response_time\n";
const VIS: [&str; 4] = ["exocentric", "flat", "egocentric", "curved"];

fn write_responses(dir: &Path, rows: &[String]) -> String {
    let p = dir.join("responses.csv");
    std::fs::write(&p, format!("{HEADER}{}", rows.join(""))).unwrap();
    p.to_str().unwrap().to_owned()
}

fn all_correct_rows() -> Vec<String> {
    let mut rows = Vec::new();
    for p in 0..3 {
        for v in VIS {
            for (task, difficulty, chosen) in
                [("distance", "easy", "first"), ("area", "far-distance", "second"), ("direction", "close", "hit")]
            {
                rows.push(format!("p{p},{v},{task},{difficulty},{p}-{v}-{task},{chosen},true,{}\n", 2 + p));
            }
        }
    }
    rows
}

#[test]
fn analyze_all_correct() {
    let dir = TempDir::new().unwrap();
    let responses = write_responses(dir.path(), &all_correct_rows());
    let logs = dir.path().join("logs");
    std::fs::create_dir(&logs).unwrap();
    let out = terralens(&["analyze", &responses, "--logs", logs.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let cells = v["cells"].as_array().unwrap();
    assert!(!cells.is_empty());
    for c in cells {
        assert_eq!(c["accuracy"]["mean"], 1.0);
        assert!(c["interaction"].is_null());
    }
    assert_eq!(v["participants"], 3);
    assert_eq!(v["logs"], 0);
    // The table goes to stderr when the JSON takes stdout.
    assert!(String::from_utf8_lossy(&out.stderr).contains("Friedman"));
}

#[test]
fn analyze_hand_computed_friedman() {
    // Times give within-participant ranks (1,2,3,4), (2,1,3,4), (1,2,4,3):
    // rank sums 4, 5, 10, 11 and
    // χ² = 12 / (3·4·5) · (16 + 25 + 100 + 121) − 3·3·5 = 7.4.
    let times = [[1.0, 2.0, 3.0, 4.0], [2.0, 1.0, 3.0, 4.0], [1.0, 2.0, 4.0, 3.0]];
    let mut rows = Vec::new();
    for (p, t) in times.iter().enumerate() {
        for (v, time) in VIS.iter().zip(t) {
            rows.push(format!("p{p},{v},distance,easy,s-{p}-{v},first,true,{time}\n"));
        }
    }
    let dir = TempDir::new().unwrap();
    let responses = write_responses(dir.path(), &rows);
    let summary = dir.path().join("summary.json");
    let out = terralens(&["analyze", &responses, "--out", summary.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("7.400"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    let tests = v["tests"].as_array().unwrap();
    let time =
        tests.iter().find(|t| t["task"] == "distance" && t["difficulty"] == "easy" && t["metric"] == "time").unwrap();
    let r = &time["result"];
    assert!((r["chi2"].as_f64().unwrap() - 7.4).abs() < 1e-12);
    assert_eq!(r["dof"], 3);
    assert!((r["p"].as_f64().unwrap() - 0.060184323871734745).abs() < 1e-9);
    let acc = tests
        .iter()
        .find(|t| t["task"] == "distance" && t["difficulty"] == "easy" && t["metric"] == "accuracy")
        .unwrap();
    assert_eq!(acc["result"]["chi2"], 0.0);
    assert_eq!(acc["result"]["p"], 1.0);
}

fn log_csv(rows: &[[f64; 15]]) -> String {
    let mut s = String::from(
        "t,head_x,head_y,head_z,head_qw,head_qx,head_qy,head_qz,ctrl_x,ctrl_y,ctrl_z,ctrl_qw,ctrl_qx,ctrl_qy,ctrl_qz\n",
    );
    for r in rows {
        s += &r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
        s.push('\n');
    }
    s
}

#[test]
fn analyze_with_pose_logs() {
    let dir = TempDir::new().unwrap();
    let responses = write_responses(dir.path(), &all_correct_rows());
    let logs = dir.path().join("logs");
    std::fs::create_dir_all(logs.join("p0")).unwrap();
    let (c, s) = (45f64.to_radians().cos(), 45f64.to_radians().sin());
    // Head walks 0.5 m and turns 90° about y; controller stays put.
    let log = log_csv(&[
        [0.0, 0.0, 1.6, 0.0, 1.0, 0.0, 0.0, 0.0, 0.2, 1.2, 0.0, 1.0, 0.0, 0.0, 0.0],
        [0.1, 0.3, 1.6, 0.0, c, 0.0, s, 0.0, 0.2, 1.2, 0.0, 1.0, 0.0, 0.0, 0.0],
        [0.2, 0.3, 1.6, 0.4, c, 0.0, s, 0.0, 0.2, 1.2, 0.0, 1.0, 0.0, 0.0, 0.0],
    ]);
    std::fs::write(logs.join("p0").join("0-flat-distance.csv"), &log).unwrap();
    let v: Value = serde_json::from_slice(&ok(&["analyze", &responses, "--logs", logs.to_str().unwrap()])).unwrap();
    assert_eq!(v["logs"], 1);
    let cell = v["cells"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["visualisation"] == "flat-map" && c["task"] == "distance" && c["difficulty"] == "easy")
        .unwrap();
    let i = &cell["interaction"];
    assert!((i["head_move_m"]["mean"].as_f64().unwrap() - 0.7).abs() < 1e-12);
    assert!((i["head_rot_deg"]["mean"].as_f64().unwrap() - 90.0).abs() < 1e-9);
    assert_eq!(i["controller_move_m"]["mean"], 0.0);
    assert_eq!(i["head_move_m"]["n"], 1);

    let args = ["analyze", &responses, "--logs", logs.to_str().unwrap()];
    assert_eq!(ok(&args), ok(&args));

    // A non-unit quaternion is malformed input.
    let bad = log.replace("0,1,0,0,0\n", "0,2,0,0,0\n");
    std::fs::write(logs.join("p0").join("0-flat-distance.csv"), bad).unwrap();
    assert_eq!(code(&args), 2);
}

#[test]
fn analyze_rejects_malformed_csv() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("r.csv");
    for body in [
        format!("{HEADER}p0,flat,distance,easy,s,first,true,abc\n"),
        format!("{HEADER}p0,flat,distance,easy,s,first\n"),
        format!("{HEADER}p0,hologram,distance,easy,s,first,true,1\n"),
        "participant,visualisation\np0,flat\n".to_string(),
        format!("{HEADER}p0,flat,distance,easy,s,first,true,-1\n"),
    ] {
        std::fs::write(&p, body).unwrap();
        assert_eq!(code(&["analyze", p.to_str().unwrap()]), 2);
    }
    assert_eq!(code(&["analyze", dir.path().join("none.csv").to_str().unwrap()]), 2);
}

#[test]
fn morph_frames() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    ok(&["morph", "--steps", "5", "--rotation", "20,-10,0", "--out", a.to_str().unwrap()]);
    ok(&["morph", "--steps", "5", "--rotation", "20,-10,0", "--out", b.to_str().unwrap()]);
    let mut names: Vec<String> =
        std::fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names, ["frame-000.svg", "frame-001.svg", "frame-002.svg", "frame-003.svg", "frame-004.svg"]);
    for n in &names {
        assert_eq!(std::fs::read(a.join(n)).unwrap(), std::fs::read(b.join(n)).unwrap());
    }
    let first = std::fs::read_to_string(a.join("frame-000.svg")).unwrap();
    let flat = text(&["render", "--rotation", "20,-10,0", "--tissot", "0"]);
    assert_eq!(path_data(&first), path_data(&flat));
    let last = std::fs::read_to_string(a.join("frame-004.svg")).unwrap();
    assert!(last.contains("back\""));

    let c = dir.path().join("c");
    ok(&["morph", "--steps", "2", "--out", c.to_str().unwrap()]);
    assert_eq!(std::fs::read_dir(&c).unwrap().count(), 2);
    assert_eq!(code(&["morph", "--steps", "1", "--out", c.to_str().unwrap()]), 2);
}

#[test]
fn scene_golden_and_schema_commands() {
    let v: Value = serde_json::from_slice(&ok(&["scene", "egocentric", "--rotation", "10,0,0"])).unwrap();
    assert_eq!(v["kind"], "egocentric");
    assert_eq!(v["params"]["radius"], 8.0);
    assert_eq!(v["rotation"][0], 10.0);
    let g: Value = serde_json::from_slice(&ok(&["golden", "--seed", "2"])).unwrap();
    assert_eq!(g["scenes"].as_array().unwrap().len(), 12);
    assert_eq!(ok(&["golden", "--seed", "2"]), ok(&["golden", "--seed", "2"]));
    for name in ["scene", "golden", "stimuli", "session", "summary"] {
        let s: Value = serde_json::from_slice(&ok(&["schema", name])).unwrap();
        assert_eq!(s["$id"], format!("urn:terralens:schema:{name}"));
    }
    assert_eq!(code(&["scene", "planetarium"]), 2);
}
