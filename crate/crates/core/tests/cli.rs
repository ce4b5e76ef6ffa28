mod common;

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::net::TcpListener;
use std::path::Path;

use common::{data_path, fixture};
use morphoprot::cli::run;
use morphoprot::pipelines::{stacked_skeleton, Method1Params};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn morphoprot(cache: &Path, args: &[&str]) -> Run {
    let mut argv = vec!["morphoprot", "--cache-dir", cache.to_str().unwrap()];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    Run { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn fx(name: &str) -> String {
    data_path(name).to_str().unwrap().to_string()
}

#[test]
fn compare_self_is_similar() {
    let tmp = tempfile::tempdir().unwrap();
    let helix = fx("helix_a.pdb");
    let r = morphoprot(tmp.path(), &["compare", &helix, &helix]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["rho"], 0.0);
    assert_eq!(v["delta_p"], 0);
    assert_eq!(v["verdict"], "similar");
    assert_eq!(v["ids"][0], "helix_a");
    assert_eq!(v["tool_version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["params"]["method1"]["resolution"], 512);
}

#[test]
fn compare_dissimilar_exits_one_and_csv_is_one_row() {
    let tmp = tempfile::tempdir().unwrap();
    let r = morphoprot(tmp.path(), &["compare", &fx("helix_a.pdb"), &fx("sheet_c.pdb"), "--format", "csv"]);
    assert_eq!(r.code, 1, "{}", r.stderr);
    let lines: Vec<&str> = r.stdout.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], "protein_id_1,d_p_1,protein_id_2,d_p_2,rho,delta_p,verdict");
    assert_eq!(lines[1].split(',').count(), 7);
    assert!(lines[1].ends_with(",dissimilar"));
}

#[test]
fn thresholds_can_be_relaxed() {
    let tmp = tempfile::tempdir().unwrap();
    let r = morphoprot(
        tmp.path(),
        &["compare", &fx("helix_a.pdb"), &fx("sheet_c.pdb"), "--rho-threshold", "1", "--delta-threshold", "100000"],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
}

#[test]
fn fd_is_deterministic_across_runs_and_threads() {
    let tmp = tempfile::tempdir().unwrap();
    let bundle = fx("bundle_b.pdb");
    let one = morphoprot(tmp.path(), &["fd", &bundle, "--threads", "1"]);
    let four = morphoprot(tmp.path(), &["fd", &bundle, "--threads", "4"]);
    let again = morphoprot(tmp.path(), &["fd", &bundle]);
    assert_eq!(one.code, 0, "{}", one.stderr);
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(one.stdout, again.stdout);
    let v: serde_json::Value = serde_json::from_str(&one.stdout).unwrap();
    let d_p = v["d_p"].as_f64().unwrap();
    assert!((1.0..=2.0).contains(&d_p));
    assert!(v["r_squared"].as_f64().is_some());
    assert_eq!(v["slice_count"].as_u64().unwrap() as usize, v["slices"].as_array().unwrap().len());
}

#[test]
fn compare_is_deterministic_across_threads() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (fx("helix_a.pdb"), fx("bundle_b.pdb"));
    let one = morphoprot(tmp.path(), &["compare", &a, &b, "--threads", "1"]);
    let many = morphoprot(tmp.path(), &["compare", &a, &b, "--threads", "3"]);
    assert_eq!(one.code, many.code);
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn fd_formats() {
    let tmp = tempfile::tempdir().unwrap();
    let r = morphoprot(tmp.path(), &["fd", &fx("helix_a.pdb"), "--format", "csv"]);
    assert_eq!(r.stdout.lines().count(), 2);
    assert!(r.stdout.starts_with("protein_id,d_p,r_squared,slice_count\nhelix_a,"));
    let r = morphoprot(tmp.path(), &["fd", &fx("helix_a.pdb"), "--format", "table"]);
    assert!(r.stdout.contains("d_p"));
}

#[test]
fn missing_file_exits_two() {
    let tmp = tempfile::tempdir().unwrap();
    let r = morphoprot(tmp.path(), &["fd", "does/not/exist.pdb"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("exist.pdb"), "{}", r.stderr);
    assert!(r.stdout.is_empty());
}

#[test]
fn file_without_atoms_exits_two() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("empty.pdb");
    fs::write(&path, "HEADER    NOTHING\nEND\n").unwrap();
    let r = morphoprot(tmp.path(), &["fd", path.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("no ATOM"), "{}", r.stderr);
}

#[test]
fn bad_usage_exits_two_and_help_exits_zero() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(morphoprot(tmp.path(), &["frobnicate"]).code, 2);
    assert_eq!(morphoprot(tmp.path(), &["fd", "x.pdb", "--thickness", "0"]).code, 2);
    let help = morphoprot(tmp.path(), &["--help"]);
    assert_eq!(help.code, 0);
    for cmd in ["fetch", "fd", "geodesic", "compare", "batch", "render"] {
        assert!(help.stdout.contains(cmd), "help lacks {cmd}");
    }
}

#[test]
fn fetch_invalid_id() {
    let tmp = tempfile::tempdir().unwrap();
    let r = morphoprot(tmp.path(), &["fetch", "zz!"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("invalid PDB id"), "{}", r.stderr);
}

#[test]
fn fetch_warm_cache_needs_no_network() {
    let tmp = tempfile::tempdir().unwrap();
    for id in ["2lep", "3v2j"] {
        fs::copy(data_path("helix_a.pdb"), tmp.path().join(format!("{id}.pdb"))).unwrap();
    }
    let r = morphoprot(tmp.path(), &["--url-template", "http://127.0.0.1:9/{id}", "fetch", "2lep", "3V2J"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout.lines().filter(|l| l.contains("cached")).count(), 2);
}

#[test]
fn fetch_partial_failure_lists_errors() {
    let tmp = tempfile::tempdir().unwrap();
    fs::copy(data_path("helix_a.pdb"), tmp.path().join("2lep.pdb")).unwrap();
    let r = morphoprot(tmp.path(), &["--url-template", "http://127.0.0.1:9/{id}", "fetch", "2lep", "1abc"]);
    assert_eq!(r.code, 2);
    assert!(r.stdout.contains("2lep"));
    assert!(r.stderr.contains("1abc"), "{}", r.stderr);
}

/// Serves `body` to `requests` HTTP requests on a loopback port.
fn serve(body: Vec<u8>, requests: usize) -> (String, std::thread::JoinHandle<Vec<String>>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    let handle = std::thread::spawn(move || {
        let mut paths = Vec::new();
        for _ in 0..requests {
            let (stream, _) = listener.accept().unwrap();
            let mut reader = BufReader::new(stream);
            let mut line = String::new();
            reader.read_line(&mut line).unwrap();
            paths.push(line.split_whitespace().nth(1).unwrap_or("").to_string());
            loop {
                let mut header = String::new();
                reader.read_line(&mut header).unwrap();
                if header.trim().is_empty() {
                    break;
                }
            }
            let mut stream = reader.into_inner();
            write!(stream, "HTTP/1.1 200 OK\r\nContent-Length: {}\r\nConnection: close\r\n\r\n", body.len()).unwrap();
            stream.write_all(&body).unwrap();
        }
        paths
    });
    (format!("http://{addr}/files/{{ID}}.pdb"), handle)
}

#[test]
fn fetch_cold_downloads_into_cache_then_compares_by_id() {
    let tmp = tempfile::tempdir().unwrap();
    let body = fs::read(data_path("helix_a.pdb")).unwrap();
    let (template, server) = serve(body.clone(), 1);
    let r = morphoprot(tmp.path(), &["--url-template", &template, "fetch", "2lep"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("downloaded"));
    assert_eq!(server.join().unwrap(), vec!["/files/2LEP.pdb"]);
    assert_eq!(fs::read(tmp.path().join("2lep.pdb")).unwrap(), body);

    let r = morphoprot(tmp.path(), &["compare", "2lep", "2LEP", "--format", "csv"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.lines().nth(1).unwrap().starts_with("2lep,"));
}

#[test]
fn cache_dir_from_environment() {
    let tmp = tempfile::tempdir().unwrap();
    fs::copy(data_path("helix_a.pdb"), tmp.path().join("9abc.pdb")).unwrap();
    std::env::set_var("MORPHOPROT_CACHE", tmp.path());
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(["morphoprot", "fetch", "9abc"], &mut out, &mut err);
    std::env::remove_var("MORPHOPROT_CACHE");
    assert_eq!(code, 0, "{}", String::from_utf8_lossy(&err));
    assert!(String::from_utf8(out).unwrap().contains("cached"));
}

#[test]
fn geodesic_reports_six_faces() {
    let tmp = tempfile::tempdir().unwrap();
    let r = morphoprot(tmp.path(), &["geodesic", &fx("helix_a.pdb"), &fx("helix_a.pdb")]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    let faces = v["faces"].as_array().unwrap();
    let names: Vec<&str> = faces.iter().map(|f| f["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["front", "left", "right", "top", "bottom", "back"]);
    assert!(faces.iter().all(|f| f["count_s"] == 1 && f["count_t"] == 1));
    let csv = morphoprot(tmp.path(), &["geodesic", &fx("helix_a.pdb"), &fx("sheet_c.pdb"), "--format", "csv"]);
    let lines: Vec<&str> = csv.stdout.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0].split(',').count(), lines[1].split(',').count());
}

fn write_manifest(dir: &Path, entries: &[String]) -> String {
    let path = dir.join("manifest.txt");
    fs::write(&path, format!("# pairs\n{}\n", entries.join("\n"))).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn batch_all_pairs_and_warm_cache() {
    let tmp = tempfile::tempdir().unwrap();
    let manifest =
        write_manifest(tmp.path(), &[fx("helix_a.pdb"), fx("bundle_b.pdb"), fx("sheet_c.pdb")]);
    let cold = morphoprot(tmp.path(), &["batch", &manifest]);
    assert_eq!(cold.code, 0, "{}", cold.stderr);
    let lines: Vec<&str> = cold.stdout.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines.iter().all(|l| l.split(',').count() == 7));
    assert!(cold.stderr.contains("3 computed"), "{}", cold.stderr);

    let warm = morphoprot(tmp.path(), &["batch", &manifest]);
    assert_eq!(warm.stdout, cold.stdout);
    assert!(warm.stderr.contains("0 computed"), "{}", warm.stderr);

    let json = morphoprot(tmp.path(), &["batch", &manifest, "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
}

#[test]
fn batch_repeated_entry_is_computed_once() {
    let tmp = tempfile::tempdir().unwrap();
    let manifest = write_manifest(tmp.path(), &[fx("helix_a.pdb"), fx("helix_a.pdb")]);
    let r = morphoprot(tmp.path(), &["batch", &manifest]);
    assert_eq!(r.code, 0);
    assert!(r.stderr.contains("1 computed"), "{}", r.stderr);
    assert!(r.stdout.lines().nth(1).unwrap().ends_with("0.000000,0,similar"));
}

#[test]
fn batch_empty_manifest_exits_two() {
    let tmp = tempfile::tempdir().unwrap();
    let manifest = write_manifest(tmp.path(), &[]);
    assert_eq!(morphoprot(tmp.path(), &["batch", &manifest]).code, 2);
}

fn listing(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> =
        fs::read_dir(dir).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    names.sort();
    names
}

#[test]
fn render_faces_writes_six_files() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("faces");
    let r = morphoprot(tmp.path(), &["render", &fx("sheet_c.pdb"), "faces", out.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(
        listing(&out),
        ["face_back.pgm", "face_bottom.pgm", "face_front.pgm", "face_left.pgm", "face_right.pgm", "face_top.pgm"]
    );
}

#[test]
fn render_skeleton_is_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for dir in [&a, &b] {
        let r = morphoprot(tmp.path(), &["render", &fx("helix_a.pdb"), "skeleton", dir.to_str().unwrap()]);
        assert_eq!(r.code, 0, "{}", r.stderr);
    }
    assert_eq!(listing(&a), ["stacked.pgm"]);
    assert_eq!(fs::read(a.join("stacked.pgm")).unwrap(), fs::read(b.join("stacked.pgm")).unwrap());
    let grid = morphoprot::grid::BinaryGrid::from_pnm(&fs::read(a.join("stacked.pgm")).unwrap()).unwrap();
    let expected = stacked_skeleton(&fixture("helix_a.pdb"), &Method1Params::default()).unwrap();
    assert_eq!(grid, expected.grid);
}

#[test]
fn render_slices_matches_pipeline_metadata() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("slices");
    let r = morphoprot(tmp.path(), &["render", &fx("sheet_c.pdb"), "slices", out.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let meta = stacked_skeleton(&fixture("sheet_c.pdb"), &Method1Params::default()).unwrap();
    let expected: Vec<String> = meta.slices.iter().map(|s| format!("slice_{:03}.pgm", s.index)).collect();
    assert_eq!(listing(&out), expected);
}

#[test]
fn fd_dump_dir() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("dump");
    let r = morphoprot(tmp.path(), &["fd", &fx("helix_a.pdb"), "--dump-dir", out.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let names = listing(&out);
    assert!(names.contains(&"stacked.pgm".to_string()));
    assert_eq!(names.iter().filter(|n| n.ends_with("_skeleton.pgm")).count(), 20);
}

#[test]
fn config_file_is_applied_and_flags_win() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.conf");
    fs::write(&cfg, "# coarse run\nresolution = 128\nbox_max = 32\nformat = csv\n").unwrap();
    let helix = fx("helix_a.pdb");
    let r = morphoprot(tmp.path(), &["--config", cfg.to_str().unwrap(), "fd", &helix]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("protein_id,"));
    let r = morphoprot(tmp.path(), &["--config", cfg.to_str().unwrap(), "fd", &helix, "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["params"]["resolution"], 128);
    fs::write(&cfg, "no_such_key = 1\n").unwrap();
    assert_eq!(morphoprot(tmp.path(), &["--config", cfg.to_str().unwrap(), "fd", &helix]).code, 2);
}
