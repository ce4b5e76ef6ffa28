//! Command-line front end.
//!
//! [`run`] parses arguments, resolves a [`RunConfig`] (defaults, then the
//! `--config` file, then `MORPHOPROT_CACHE`, then flags) and writes the
//! report to the given writers. The return value is the process exit code:
//! `compare` exits 0 for similar and 1 for dissimilar; every command exits
//! 2 on error.

mod config;

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

pub use config::{OutputFormat, RunConfig, CONFIG_KEYS};

use crate::error::{Error, Result};
use crate::fractal::BoxCount;
use crate::grid::SeSpec;
use crate::ingest::{is_valid_pdb_id, parse_pdb, FetchSource, Fetcher, Selector, StructureModel};
use crate::pipelines::{
    compare, content_digest, fractal_signature, geodesic_profile, profile_from_faces, render_faces,
    signature_from_stack, stacked_skeleton, stacked_skeleton_with_images, ComparisonReport, FractalSignature,
    GeodesicProfile, Method1Params, Method2Params, SignatureCache, SliceReport, Verdict, CSV_HEADER,
    TOOL_VERSION,
};

#[derive(Debug, Parser)]
#[command(name = "morphoprot", version, about = "Protein structure comparison by binary morphology")]
pub struct Cli {
    #[command(flatten)]
    pub opts: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Default, Args)]
pub struct GlobalOpts {
    /// Flat `key = value` settings file; flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Slice thickness in normalized units.
    #[arg(long, global = true)]
    pub thickness: Option<f64>,
    /// Slice raster resolution.
    #[arg(long, global = true)]
    pub resolution: Option<usize>,
    /// Face raster resolution.
    #[arg(long, global = true)]
    pub face_resolution: Option<usize>,
    /// Structuring element for skeletons and geodesic dilation, e.g. `square:1`.
    #[arg(long, global = true, value_name = "SHAPE[:SIZE]")]
    pub se: Option<SeSpec>,
    /// Largest box size in the box-counting fit.
    #[arg(long, global = true)]
    pub box_max: Option<usize>,
    /// Largest rho still judged similar.
    #[arg(long, global = true)]
    pub rho_threshold: Option<f64>,
    /// Largest delta_p still judged similar.
    #[arg(long, global = true)]
    pub delta_threshold: Option<usize>,
    /// Atom selection for both methods: `all_atoms` or `backbone_ca`.
    #[arg(long, global = true)]
    pub selector: Option<Selector>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Worker threads; defaults to one per core.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Structure and signature cache; overrides MORPHOPROT_CACHE.
    #[arg(long, global = true, value_name = "DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Download URL; `{id}` and `{ID}` expand to the lower/upper-case id.
    #[arg(long, global = true, value_name = "URL")]
    pub url_template: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Download structures into the local cache.
    Fetch {
        #[arg(required = true)]
        ids: Vec<String>,
    },
    /// Fractal dimension of the stacked skeleton.
    Fd {
        input: String,
        /// Write per-slice and stacked PGM images here.
        #[arg(long, value_name = "DIR")]
        dump_dir: Option<PathBuf>,
    },
    /// Six-face geodesic dilation profile of a pair.
    Geodesic { source: String, target: String },
    /// Both signatures and the similarity verdict for a pair.
    Compare { first: String, second: String },
    /// All-pairs comparison of the structures listed in a manifest.
    Batch { manifest: PathBuf },
    /// Write intermediate rasters as PGM images.
    Render {
        input: String,
        what: RenderTarget,
        out_dir: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RenderTarget {
    Slices,
    Skeleton,
    Faces,
}

impl GlobalOpts {
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            cfg.apply_config_file(path)?;
        }
        cfg.apply_env();
        if let Some(v) = self.thickness {
            cfg.method1.slice_thickness = v;
        }
        if let Some(v) = self.resolution {
            cfg.method1.resolution = v;
        }
        if let Some(v) = self.face_resolution {
            cfg.method2.resolution = v;
        }
        if let Some(v) = self.se {
            cfg.method1.skeleton_se = v;
            cfg.method2.geodesic_se = v;
        }
        if let Some(v) = self.box_max {
            cfg.method1.box_max = v;
        }
        if let Some(v) = self.rho_threshold {
            cfg.thresholds.rho = v;
        }
        if let Some(v) = self.delta_threshold {
            cfg.thresholds.delta = v;
        }
        if let Some(v) = self.selector {
            cfg.method1.selector = v;
            cfg.method2.selector = v;
        }
        if let Some(v) = self.format {
            cfg.format = Some(v);
        }
        if let Some(v) = self.threads {
            cfg.threads = Some(v);
        }
        if let Some(v) = &self.cache_dir {
            cfg.cache_dir = v.clone();
        }
        if let Some(v) = &self.url_template {
            cfg.url_template = Some(v.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Text destined for stdout and stderr plus the exit code.
#[derive(Debug, Default)]
struct Outcome {
    stdout: String,
    stderr: String,
    code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { stdout, ..Self::default() }
    }
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                2
            } else {
                let _ = stdout.write_all(text.as_bytes());
                0
            };
        }
    };
    let outcome = cli.opts.resolve().and_then(|cfg| execute_in_pool(&cli.command, &cfg));
    match outcome {
        Ok(o) => {
            let _ = stdout.write_all(o.stdout.as_bytes());
            let _ = stderr.write_all(o.stderr.as_bytes());
            o.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

fn execute_in_pool(command: &Command, cfg: &RunConfig) -> Result<Outcome> {
    match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?
            .install(|| execute(command, cfg)),
        None => execute(command, cfg),
    }
}

fn execute(command: &Command, cfg: &RunConfig) -> Result<Outcome> {
    match command {
        Command::Fetch { ids } => cmd_fetch(ids, cfg),
        Command::Fd { input, dump_dir } => cmd_fd(input, dump_dir.as_deref(), cfg),
        Command::Geodesic { source, target } => cmd_geodesic(source, target, cfg),
        Command::Compare { first, second } => cmd_compare(first, second, cfg),
        Command::Batch { manifest } => cmd_batch(manifest, cfg),
        Command::Render { input, what, out_dir } => cmd_render(input, *what, out_dir, cfg),
    }
}

fn fetcher(cfg: &RunConfig) -> Fetcher {
    let f = Fetcher::new(&cfg.cache_dir);
    match &cfg.url_template {
        Some(t) => f.url_template(t.clone()),
        None => f,
    }
}

/// A structure loaded from a file or the download cache.
struct Input {
    label: String,
    /// Signature-cache key: the id, or the file stem plus a content digest.
    key: String,
    model: StructureModel,
}

fn load_input(spec: &str, cfg: &RunConfig) -> Result<Input> {
    let path = Path::new(spec);
    if !path.exists() && is_valid_pdb_id(spec) {
        let text = fetcher(cfg).fetch(spec)?;
        let label = spec.to_ascii_lowercase();
        let mut model = parse_pdb(&text, false)?;
        model.pdb_id = label.clone();
        return Ok(Input { key: label.clone(), label, model });
    }
    let bytes = fs::read(path).map_err(|source| Error::ReadInput { path: spec.to_string(), source })?;
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| spec.to_string());
    let mut model = parse_pdb(&String::from_utf8_lossy(&bytes), false)?;
    model.pdb_id = label.clone();
    let key = format!("{label}-{}", &content_digest(&bytes)[..16]);
    Ok(Input { label, key, model })
}

fn format_or(cfg: &RunConfig, default: OutputFormat) -> OutputFormat {
    cfg.format.unwrap_or(default)
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Left-aligned columns separated by two spaces.
fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let line: Vec<String> = row.iter().enumerate().map(|(c, s)| format!("{s:<w$}", w = widths[c])).collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct FetchRow {
    id: String,
    source: &'static str,
    path: String,
}

fn cmd_fetch(ids: &[String], cfg: &RunConfig) -> Result<Outcome> {
    let fetcher = fetcher(cfg);
    let results: Vec<(String, Result<FetchSource>)> = ids
        .par_iter()
        .map(|id| (id.clone(), fetcher.fetch_with_source(id).map(|(_, src)| src)))
        .collect();
    let mut rows = Vec::new();
    let mut stderr = String::new();
    for (id, result) in results {
        match result {
            Ok(src) => rows.push(FetchRow {
                path: fetcher.cache_path(&id).display().to_string(),
                id: id.to_ascii_lowercase(),
                source: match src {
                    FetchSource::Cache => "cached",
                    FetchSource::Network => "downloaded",
                },
            }),
            Err(e) => {
                let _ = writeln!(stderr, "error: {id}: {e}");
            }
        }
    }
    let stdout = match format_or(cfg, OutputFormat::Table) {
        OutputFormat::Json => to_json(&rows)?,
        OutputFormat::Csv => {
            let mut s = String::from("id,status,path\n");
            for r in &rows {
                let _ = writeln!(s, "{},{},{}", r.id, r.source, csv_field(&r.path));
            }
            s
        }
        OutputFormat::Table => {
            table(&rows.iter().map(|r| vec![r.id.clone(), r.source.to_string(), r.path.clone()]).collect::<Vec<_>>())
        }
    };
    let code = if stderr.is_empty() { 0 } else { 2 };
    Ok(Outcome { stdout, stderr, code })
}

#[derive(Serialize)]
struct FdJson<'a> {
    pdb_id: &'a str,
    d_p: f64,
    r_squared: f64,
    slice_count: usize,
    box_counts: &'a [BoxCount],
    slices: &'a [SliceReport],
    params: &'a Method1Params,
    tool_version: &'static str,
}

fn cmd_fd(spec: &str, dump_dir: Option<&Path>, cfg: &RunConfig) -> Result<Outcome> {
    let input = load_input(spec, cfg)?;
    let params = &cfg.method1;
    let (stacked, images) = match dump_dir {
        Some(_) => {
            let (s, i) = stacked_skeleton_with_images(&input.model, params)?;
            (s, Some(i))
        }
        None => (stacked_skeleton(&input.model, params)?, None),
    };
    if let (Some(dir), Some(images)) = (dump_dir, &images) {
        fs::create_dir_all(dir)?;
        for img in images {
            img.raster.write_pgm(dir.join(format!("slice_{:03}.pgm", img.index)))?;
            img.grown.write_pgm(dir.join(format!("slice_{:03}_grown.pgm", img.index)))?;
            img.skeleton.write_pgm(dir.join(format!("slice_{:03}_skeleton.pgm", img.index)))?;
        }
        stacked.grid.write_pgm(dir.join("stacked.pgm"))?;
    }
    let sig = signature_from_stack(&input.label, &stacked, params)?;
    let stdout = match format_or(cfg, OutputFormat::Json) {
        OutputFormat::Json => to_json(&FdJson {
            pdb_id: &sig.pdb_id,
            d_p: sig.d_p,
            r_squared: sig.r_squared,
            slice_count: sig.slice_count,
            box_counts: &sig.series.entries,
            slices: &stacked.slices,
            params,
            tool_version: TOOL_VERSION,
        })?,
        OutputFormat::Csv => format!(
            "protein_id,d_p,r_squared,slice_count\n{},{:.6},{:.6},{}\n",
            csv_field(&sig.pdb_id),
            sig.d_p,
            sig.r_squared,
            sig.slice_count
        ),
        OutputFormat::Table => table(&[
            vec!["protein".into(), sig.pdb_id.clone()],
            vec!["d_p".into(), format!("{:.6}", sig.d_p)],
            vec!["r_squared".into(), format!("{:.6}", sig.r_squared)],
            vec!["slices".into(), sig.slice_count.to_string()],
        ]),
    };
    Ok(Outcome::ok(stdout))
}

#[derive(Serialize)]
struct GeodesicJson<'a> {
    ids: [&'a str; 2],
    faces: Vec<crate::pipelines::FaceRow>,
    delta_p: usize,
    params: &'a Method2Params,
    tool_version: &'static str,
}

fn face_rows(profile: &GeodesicProfile) -> Vec<crate::pipelines::FaceRow> {
    profile
        .faces
        .iter()
        .map(|c| crate::pipelines::FaceRow {
            name: c.face,
            count_s: c.source,
            count_t: c.target,
            empty_marker: c.empty_marker,
        })
        .collect()
}

fn profile_table(profile: &GeodesicProfile) -> Vec<Vec<String>> {
    let mut rows = vec![vec!["face".to_string(), "count_s".into(), "count_t".into()]];
    for c in &profile.faces {
        let flag = if c.empty_marker { " (empty marker)" } else { "" };
        rows.push(vec![c.face.name().to_string(), c.source.to_string(), format!("{}{flag}", c.target)]);
    }
    rows
}

fn cmd_geodesic(a: &str, b: &str, cfg: &RunConfig) -> Result<Outcome> {
    let (a, b) = rayon::join(|| load_input(a, cfg), || load_input(b, cfg));
    let (a, b) = (a?, b?);
    let profile = geodesic_profile(&a.model, &b.model, &cfg.method2)?;
    let stdout = match format_or(cfg, OutputFormat::Json) {
        OutputFormat::Json => to_json(&GeodesicJson {
            ids: [&a.label, &b.label],
            faces: face_rows(&profile),
            delta_p: profile.delta_p,
            params: &cfg.method2,
            tool_version: TOOL_VERSION,
        })?,
        OutputFormat::Csv => {
            let mut header = String::from("protein_id_1,protein_id_2");
            let mut row = format!("{},{}", csv_field(&a.label), csv_field(&b.label));
            for c in &profile.faces {
                let _ = write!(header, ",{0}_s,{0}_t", c.face.name());
                let _ = write!(row, ",{},{}", c.source, c.target);
            }
            format!("{header},delta_p\n{row},{}\n", profile.delta_p)
        }
        OutputFormat::Table => {
            let mut rows = profile_table(&profile);
            rows.push(vec!["delta_p".into(), profile.delta_p.to_string()]);
            table(&rows)
        }
    };
    Ok(Outcome::ok(stdout))
}

fn report_table(r: &ComparisonReport) -> String {
    let mut rows = vec![
        vec!["protein".to_string(), r.ids[0].clone(), r.ids[1].clone()],
        vec!["d_p".into(), format!("{:.6}", r.d_p[0]), format!("{:.6}", r.d_p[1])],
        vec!["rho".into(), format!("{:.6}", r.rho)],
    ];
    rows.extend(profile_table(&r.profile));
    rows.push(vec!["delta_p".into(), r.profile.delta_p.to_string()]);
    rows.push(vec!["verdict".into(), r.verdict.as_str().to_string()]);
    table(&rows)
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Similar => 0,
        Verdict::Dissimilar => 1,
    }
}

fn cmd_compare(a: &str, b: &str, cfg: &RunConfig) -> Result<Outcome> {
    let (a, b) = rayon::join(|| load_input(a, cfg), || load_input(b, cfg));
    let (a, b) = (a?, b?);
    let report = compare(&a.model, &b.model, &cfg.method1, &cfg.method2, cfg.thresholds)?;
    let stdout = match format_or(cfg, OutputFormat::Json) {
        OutputFormat::Json => format!("{}\n", report.to_json()),
        OutputFormat::Csv => format!("{CSV_HEADER}\n{}\n", report.csv_row()),
        OutputFormat::Table => report_table(&report),
    };
    Ok(Outcome { stdout, stderr: String::new(), code: verdict_code(report.verdict) })
}

/// Entries of a manifest: first token of each non-blank line, `#` comments.
pub fn read_manifest(text: &str) -> Vec<String> {
    text.lines()
        .filter_map(|l| l.split('#').next()?.split_whitespace().next())
        .map(str::to_string)
        .collect()
}

fn cmd_batch(manifest: &Path, cfg: &RunConfig) -> Result<Outcome> {
    let text = fs::read_to_string(manifest)
        .map_err(|source| Error::ReadInput { path: manifest.display().to_string(), source })?;
    let entries = read_manifest(&text);
    if entries.is_empty() {
        return Err(Error::InvalidParameter(format!("manifest {} lists no structures", manifest.display())));
    }
    let inputs = entries.par_iter().map(|e| load_input(e, cfg)).collect::<Result<Vec<_>>>()?;
    let cache = SignatureCache::with_dir(&cfg.cache_dir);
    let signatures = inputs
        .par_iter()
        .map(|i| cache.get_or_compute(&i.key, &cfg.method1, || fractal_signature(&i.model, &cfg.method1)))
        .collect::<Result<Vec<_>>>()?;
    let faces = inputs.par_iter().map(|i| render_faces(&i.model, &cfg.method2)).collect::<Result<Vec<_>>>()?;
    let pairs: Vec<(usize, usize)> =
        (0..inputs.len()).flat_map(|i| (i + 1..inputs.len()).map(move |j| (i, j))).collect();
    let reports = pairs
        .par_iter()
        .map(|&(i, j)| {
            let profile = profile_from_faces(&faces[i], &faces[j], &cfg.method2)?;
            let (mut a, mut b): (FractalSignature, FractalSignature) =
                ((*signatures[i]).clone(), (*signatures[j]).clone());
            a.pdb_id = inputs[i].label.clone();
            b.pdb_id = inputs[j].label.clone();
            ComparisonReport::from_parts(&a, &b, profile, &cfg.method2, cfg.thresholds)
        })
        .collect::<Result<Vec<_>>>()?;

    let stdout = match format_or(cfg, OutputFormat::Csv) {
        OutputFormat::Csv => {
            let mut s = format!("{CSV_HEADER}\n");
            for r in &reports {
                s.push_str(&r.csv_row());
                s.push('\n');
            }
            s
        }
        OutputFormat::Json => {
            to_json(&reports.iter().map(ComparisonReport::to_json_value).collect::<Vec<_>>())?
        }
        OutputFormat::Table => {
            let mut rows = vec![CSV_HEADER.split(',').map(str::to_string).collect::<Vec<_>>()];
            for r in &reports {
                rows.push(r.csv_row().split(',').map(str::to_string).collect());
            }
            table(&rows)
        }
    };
    let stats = cache.stats();
    let stderr = format!(
        "signatures: {} computed, {} reused ({} from disk)\n",
        stats.computed,
        stats.memory_hits + stats.disk_hits,
        stats.disk_hits
    );
    Ok(Outcome { stdout, stderr, code: 0 })
}

fn cmd_render(spec: &str, what: RenderTarget, out_dir: &Path, cfg: &RunConfig) -> Result<Outcome> {
    let input = load_input(spec, cfg)?;
    fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    match what {
        RenderTarget::Slices => {
            let (_, images) = stacked_skeleton_with_images(&input.model, &cfg.method1)?;
            for img in &images {
                let name = format!("slice_{:03}.pgm", img.index);
                img.raster.write_pgm(out_dir.join(&name))?;
                written.push(name);
            }
        }
        RenderTarget::Skeleton => {
            let stacked = stacked_skeleton(&input.model, &cfg.method1)?;
            stacked.grid.write_pgm(out_dir.join("stacked.pgm"))?;
            written.push("stacked.pgm".to_string());
        }
        RenderTarget::Faces => {
            let faces = render_faces(&input.model, &cfg.method2)?;
            for (face, grid) in faces.iter() {
                let name = format!("face_{}.pgm", face.name());
                grid.write_pgm(out_dir.join(&name))?;
                written.push(name);
            }
        }
    }
    let paths: Vec<String> = written.iter().map(|n| out_dir.join(n).display().to_string()).collect();
    let stdout = match format_or(cfg, OutputFormat::Table) {
        OutputFormat::Json => to_json(&paths)?,
        OutputFormat::Csv => {
            let mut s = String::from("file\n");
            for p in &paths {
                let _ = writeln!(s, "{}", csv_field(p));
            }
            s
        }
        OutputFormat::Table => paths.iter().map(|p| format!("{p}\n")).collect(),
    };
    Ok(Outcome::ok(stdout))
}
