//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use terralens_core::scene::{SceneEmbedding, SceneKind};
use terralens_core::sphere::SphericalRotation;
use terralens_core::stimuli::{Difficulty, GeneratorConfig, TaskFamily};

use crate::analyze::{analyze, table};
use crate::coastline::Coastlines;
use crate::draw::{morph_frame, render, Drawing, ProjectionKind, RenderOptions};
use crate::error::{CliError, Result};
use crate::formats::{generate_batch, golden_vectors, session_doc, to_json, SceneDoc};
use crate::logs::{read_log_dir, read_responses};
use crate::{raster, svg};

#[derive(Debug, Parser)]
#[command(name = "terralens", version, about = "Map renderer, stimulus generator and study analyzer")]
pub struct Cli {
    /// Random seed for generation commands.
    #[arg(long, global = true, env = "TERRALENS_SEED", default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw the flat map or curved-map preview.
    Render(RenderArgs),
    /// Generate a batch of stimuli, or a participant session with `session`.
    Generate(GenerateArgs),
    /// Build the 108-item session of one participant.
    Session(SessionArgs),
    /// Summarise responses and pose logs.
    Analyze(AnalyzeArgs),
    /// Export numbered frames of the flat-to-globe morph.
    Morph(MorphArgs),
    /// Emit the scene description JSON for a visualisation.
    Scene(SceneArgs),
    /// Emit geo-to-world test vectors for every scene.
    Golden(GoldenArgs),
    /// Print one of the bundled JSON schemas.
    Schema(SchemaArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Svg,
    Png,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Projection {
    Flat,
    CurvedPreview,
}

#[derive(Debug, Args)]
pub struct ViewArgs {
    /// Rotation λ,φ,γ in degrees.
    #[arg(long, default_value = "0,0,0", value_parser = parse_rotation, allow_hyphen_values = true)]
    pub rotation: SphericalRotation,
    /// Graticule spacing in degrees; 0 disables it.
    #[arg(long, default_value_t = 10.0)]
    pub graticule: f64,
    /// Natural Earth style GeoJSON file.
    #[arg(long)]
    pub coastlines: Option<PathBuf>,
    /// Output width in pixels.
    #[arg(long, default_value_t = 1200)]
    pub size: u32,
    #[arg(long, value_enum, default_value_t = Format::Svg)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[command(flatten)]
    pub view: ViewArgs,
    #[arg(long, value_enum, default_value_t = Projection::Flat)]
    pub projection: Projection,
    /// Tissot node spacing in degrees; 0 disables the indicatrices.
    #[arg(long, default_value_t = 30.0)]
    pub tissot: f64,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Distance,
    Area,
    Direction,
    Session,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    pub family: FamilyArg,
    #[arg(long, value_parser = parse_difficulty, required_unless_present = "participant")]
    pub difficulty: Option<Difficulty>,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    /// Participant index; only for `session`.
    #[arg(long)]
    pub participant: Option<u32>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SessionArgs {
    #[arg(long, default_value_t = 0)]
    pub participant: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Response CSV.
    pub responses: PathBuf,
    /// Directory of `<participant>/<stimulus_id>.csv` pose logs.
    #[arg(long)]
    pub logs: Option<PathBuf>,
    /// Summary JSON file. Without it the JSON goes to standard output and
    /// the table to standard error.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MorphArgs {
    #[command(flatten)]
    pub view: ViewArgs,
    #[arg(long, default_value_t = 10)]
    pub steps: usize,
    /// Directory receiving `frame-000.svg`, `frame-001.svg`, ...
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SceneArgs {
    #[arg(value_parser = parse_kind)]
    pub kind: SceneKind,
    #[arg(long, default_value = "0,0,0", value_parser = parse_rotation, allow_hyphen_values = true)]
    pub rotation: SphericalRotation,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GoldenArgs {
    /// Random positions added to the grid of each scene.
    #[arg(long, default_value_t = 32)]
    pub extra: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemaName {
    Scene,
    Golden,
    Stimuli,
    Session,
    Summary,
}

impl SchemaName {
    pub fn text(self) -> &'static str {
        match self {
            SchemaName::Scene => include_str!("../schemas/scene.schema.json"),
            SchemaName::Golden => include_str!("../schemas/golden.schema.json"),
            SchemaName::Stimuli => include_str!("../schemas/stimuli.schema.json"),
            SchemaName::Session => include_str!("../schemas/session.schema.json"),
            SchemaName::Summary => include_str!("../schemas/summary.schema.json"),
        }
    }
}

#[derive(Debug, Args)]
pub struct SchemaArgs {
    pub name: SchemaName,
}

fn parse_rotation(s: &str) -> Result<SphericalRotation, String> {
    let v: Vec<f64> =
        s.split(',').map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}"))).collect::<Result<_, _>>()?;
    match v[..] {
        [l, p, g] if v.iter().all(|x| x.is_finite()) => Ok(SphericalRotation::new(l, p, g)),
        _ => Err("expected three finite angles λ,φ,γ".into()),
    }
}

fn parse_difficulty(s: &str) -> Result<Difficulty, String> {
    Difficulty::from_name(s).ok_or_else(|| format!("unknown difficulty {s:?}"))
}

fn parse_kind(s: &str) -> Result<SceneKind, String> {
    SceneKind::from_name(s).ok_or_else(|| format!("unknown scene {s:?}"))
}

/// `None` for 0; otherwise the spacing must divide 360.
fn spacing(name: &str, v: f64) -> Result<Option<f64>> {
    if v == 0.0 {
        return Ok(None);
    }
    let n = 360.0 / v;
    if v.is_nan() || v <= 0.0 || (n - n.round()).abs() > 1e-9 {
        return Err(CliError::Argument(format!("{name} spacing {v} must divide 360")));
    }
    Ok(Some(v))
}

fn load_coast(path: Option<&Path>) -> Result<Option<Coastlines>> {
    path.map(Coastlines::load).transpose()
}

fn write_output(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, bytes).map_err(|source| CliError::Output { path: p.into(), source }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Output { path: "<stdout>".into(), source })
        }
    }
}

fn encode(drawing: &Drawing, format: Format, size: u32) -> Result<Vec<u8>> {
    if size == 0 {
        return Err(CliError::Argument("size must be positive".into()));
    }
    match format {
        Format::Svg => Ok(svg::to_svg(drawing, size).into_bytes()),
        Format::Png => raster::to_png(drawing, size),
    }
}

fn cmd_render(a: &RenderArgs) -> Result<()> {
    let opts = RenderOptions {
        projection: match a.projection {
            Projection::Flat => ProjectionKind::Flat,
            Projection::CurvedPreview => ProjectionKind::CurvedPreview,
        },
        rotation: a.view.rotation,
        graticule: spacing("graticule", a.view.graticule)?,
        tissot: spacing("tissot", a.tissot)?,
    };
    let coast = load_coast(a.view.coastlines.as_deref())?;
    let drawing = render(&opts, coast.as_ref())?;
    write_output(a.out.as_deref(), &encode(&drawing, a.view.format, a.view.size)?)
}

fn cmd_generate(a: &GenerateArgs, seed: u64) -> Result<()> {
    let family = match a.family {
        FamilyArg::Session => {
            let doc = session_doc(a.participant.unwrap_or(0), seed)?;
            return write_output(a.out.as_deref(), to_json(&doc)?.as_bytes());
        }
        FamilyArg::Distance => TaskFamily::Distance,
        FamilyArg::Area => TaskFamily::Area,
        FamilyArg::Direction => TaskFamily::Direction,
    };
    if a.participant.is_some() {
        return Err(CliError::Argument("--participant only applies to session".into()));
    }
    let difficulty = a.difficulty.ok_or_else(|| CliError::Argument("--difficulty is required".into()))?;
    if a.count == 0 {
        return Err(CliError::Argument("count must be at least 1".into()));
    }
    let batch = generate_batch(family, difficulty, a.count, seed, &GeneratorConfig::default())?;
    write_output(a.out.as_deref(), to_json(&batch)?.as_bytes())
}

fn cmd_analyze(a: &AnalyzeArgs) -> Result<()> {
    let records = read_responses(&a.responses)?;
    let logs = match &a.logs {
        Some(dir) => read_log_dir(dir)?,
        None => Default::default(),
    };
    let report = analyze(&records, &logs).map_err(|e| CliError::malformed(&a.responses, e))?;
    let json = to_json(&report)?;
    let text = table(&report);
    match &a.out {
        Some(p) => {
            write_output(Some(p), json.as_bytes())?;
            write_output(None, text.as_bytes())
        }
        None => {
            write_output(None, json.as_bytes())?;
            eprint!("{text}");
            Ok(())
        }
    }
}

fn cmd_morph(a: &MorphArgs) -> Result<()> {
    if a.steps < 2 {
        return Err(CliError::Argument("steps must be at least 2".into()));
    }
    let grat = spacing("graticule", a.view.graticule)?;
    let coast = load_coast(a.view.coastlines.as_deref())?;
    std::fs::create_dir_all(&a.out).map_err(|source| CliError::Output { path: a.out.clone(), source })?;
    let ext = match a.view.format {
        Format::Svg => "svg",
        Format::Png => "png",
    };
    for i in 0..a.steps {
        let t = i as f64 / (a.steps - 1) as f64;
        let frame = morph_frame(t, &a.view.rotation, grat, coast.as_ref())?;
        let path = a.out.join(format!("frame-{i:03}.{ext}"));
        write_output(Some(&path), &encode(&frame, a.view.format, a.view.size)?)?;
    }
    Ok(())
}

fn cmd_scene(a: &SceneArgs) -> Result<()> {
    let doc = SceneDoc::new(&SceneEmbedding::new(a.kind).with_rotation(a.rotation));
    write_output(a.out.as_deref(), to_json(&doc)?.as_bytes())
}

pub fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Render(a) => cmd_render(a),
        Command::Generate(a) => cmd_generate(a, cli.seed),
        Command::Session(a) => {
            write_output(a.out.as_deref(), to_json(&session_doc(a.participant, cli.seed)?)?.as_bytes())
        }
        Command::Analyze(a) => cmd_analyze(a),
        Command::Morph(a) => cmd_morph(a),
        Command::Scene(a) => cmd_scene(a),
        Command::Golden(a) => write_output(a.out.as_deref(), to_json(&golden_vectors(cli.seed, a.extra)?)?.as_bytes()),
        Command::Schema(a) => write_output(None, a.name.text().as_bytes()),
    }
}

/// Parses arguments, runs the command and returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("terralens: {e}");
            e.exit_code()
        }
    }
}
