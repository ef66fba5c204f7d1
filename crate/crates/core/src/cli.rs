//! The `opaque` command line.
//!
//! Exit codes: 0 success (or certified opaque), 1 usage or input error,
//! 2 non-opaque with a witness, 3 inconclusive, 4 an audited inequality failed.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::bounds::{audit, AuditConfig, DEFAULT_TOLERANCE};
use crate::constructions::{by_name, NamedParams, SceneSpec, NAMES};
use crate::error::{Error, Result};
use crate::measures::{measure_of_segments, DEFAULT_ELL_MAX};
use crate::opacity::{verify, Verdict, DEFAULT_REFINEMENTS, DEFAULT_SWEEP};
use crate::optimizer::{shorten, SearchConfig};
use crate::scene::{parse_scene, scene_to_toml};
use crate::shadows::{sample_profile, DEFAULT_GRID};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NON_OPAQUE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_VIOLATION: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "opaque", version, about = "Verify and audit opaque barriers of convex polygons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct SceneArg {
    /// Scene file, or `-` for standard input.
    #[arg(default_value = "-")]
    scene: String,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Initial number of angular sweep cells.
    #[arg(long, default_value_t = DEFAULT_SWEEP)]
    sweep: usize,
    /// Number of sweep doublings before giving up.
    #[arg(long, default_value_t = DEFAULT_REFINEMENTS)]
    refinements: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Certify opacity or print a line that escapes.
    Verify {
        #[command(flatten)]
        scene: SceneArg,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Run every check and write a key = value report.
    Audit {
        #[command(flatten)]
        scene: SceneArg,
        #[command(flatten)]
        sweep: SweepArgs,
        /// Shadow-function grid size.
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        /// Fourier truncation order.
        #[arg(long, default_value_t = DEFAULT_ELL_MAX)]
        lmax: usize,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a built-in construction as a scene file.
    Generate {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(NAMES))]
        name: String,
        #[arg(long, default_value_t = 1.0)]
        side: f64,
        #[arg(long, default_value_t = 1.0)]
        width: f64,
        #[arg(long, default_value_t = 0.01)]
        height: f64,
        #[arg(long, default_value_t = 1024)]
        n_arc: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 12)]
        n_vertices: usize,
        #[arg(long, default_value_t = 6)]
        n_segments: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Shorten an opaque barrier by local search.
    Optimize {
        #[command(flatten)]
        scene: SceneArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        iters: usize,
        #[arg(long, default_value_t = 0.1)]
        step: f64,
        #[arg(long, default_value_t = 0.997)]
        decay: f64,
        #[arg(long, default_value_t = 0.05)]
        delete_prob: f64,
        #[arg(long, default_value_t = 0.35)]
        shrink_prob: f64,
        #[arg(long, default_value_t = 0.0)]
        bias: f64,
        #[arg(long, default_value_t = 8192)]
        verify_sweep: usize,
        #[arg(long, default_value_t = DEFAULT_SWEEP)]
        sweep: usize,
        #[arg(long, default_value_t = 1)]
        restarts: usize,
        /// Where to write the optimized scene (default: standard output).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Where to write the `iter,length` trace as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Sample f, g and g − f on a uniform angle grid as CSV.
    Profile {
        #[command(flatten)]
        scene: SceneArg,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw the scene as SVG, segments colored by doubled angle.
    Render {
        #[command(flatten)]
        scene: SceneArg,
        /// Image width in pixels.
        #[arg(long, default_value_t = 600.0)]
        size: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Runs the CLI on the process streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdin = std::io::stdin();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with_io(argv, &mut stdin.lock(), &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the CLI against the given streams and returns the exit code.
pub fn run_with_io<I, T>(argv: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                EXIT_ERROR
            } else {
                let _ = write!(stdout, "{}", e.render());
                EXIT_OK
            };
            return code;
        }
    };
    match dispatch(cli.command, stdin, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn read_scene(path: &str, stdin: &mut dyn Read) -> Result<SceneSpec> {
    let mut text = String::new();
    if path == "-" {
        stdin
            .read_to_string(&mut text)
            .map_err(|e| Error::Parse(format!("reading standard input: {e}")))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("reading {path}: {e}")))?;
    }
    parse_scene(&text).map_err(|e| match e {
        Error::Parse(msg) if path != "-" => Error::Parse(format!("{path}: {msg}")),
        other => other,
    })
}

fn emit(out: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Parameter(format!("writing {}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Error::Parameter(format!("writing output: {e}"))),
    }
}

/// Fixed four decimals with trailing zeros removed: `1.5708`, `0.5`, `2`.
pub fn short_decimal(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn dispatch(command: Command, stdin: &mut dyn Read, stdout: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Verify { scene, sweep } => {
            let s = read_scene(&scene.scene, stdin)?;
            let cert = verify(&s.domain, &s.segments, sweep.sweep, sweep.refinements)?;
            let mut text = format!("{}\n", cert.verdict.as_str());
            let code = match cert.verdict {
                Verdict::CertifiedOpaque => {
                    let _ = writeln!(text, "n_sweep={} slack={:e}", cert.n_sweep, cert.slack);
                    EXIT_OK
                }
                Verdict::NonOpaque => {
                    let w = cert.witness.expect("non-opaque verdicts carry a witness");
                    let _ = writeln!(text, "theta={} offset={}", short_decimal(w.theta), short_decimal(w.offset));
                    EXIT_NON_OPAQUE
                }
                Verdict::Inconclusive => {
                    let _ = writeln!(
                        text,
                        "n_sweep={} uncertified_cells={} min_margin={:e}",
                        cert.n_sweep, cert.uncertified_cells, cert.min_margin
                    );
                    EXIT_INCONCLUSIVE
                }
            };
            emit(&None, &text, stdout)?;
            Ok(code)
        }
        Command::Audit {
            scene,
            sweep,
            grid,
            lmax,
            tolerance,
            out,
        } => {
            let s = read_scene(&scene.scene, stdin)?;
            let config = AuditConfig {
                n_grid: grid,
                n_sweep: sweep.sweep,
                ell_max: lmax,
                max_refinements: sweep.refinements,
                tolerance,
            };
            let report = audit(&s.domain, &s.segments, &config)?;
            let text = format!("scene = {}\n{}", toml::Value::String(s.name.clone()), report.to_document());
            emit(&out, &text, stdout)?;
            Ok(if report.all_satisfied() { EXIT_OK } else { EXIT_VIOLATION })
        }
        Command::Generate {
            name,
            side,
            width,
            height,
            n_arc,
            seed,
            n_vertices,
            n_segments,
            out,
        } => {
            let params = NamedParams {
                side,
                width,
                height,
                n_arc,
                seed,
                n_vertices,
                n_segments,
            };
            let s = by_name(&name, &params)?;
            emit(&out, &scene_to_toml(&s), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Optimize {
            scene,
            seed,
            iters,
            step,
            decay,
            delete_prob,
            shrink_prob,
            bias,
            verify_sweep,
            sweep,
            restarts,
            out,
            trace,
        } => {
            let s = read_scene(&scene.scene, stdin)?;
            let config = SearchConfig {
                seed,
                max_iters: iters,
                initial_step: step,
                step_decay: decay,
                delete_probability: delete_prob,
                shrink_probability: shrink_prob,
                bias_weight: bias,
                verify_sweep,
                final_sweep: sweep,
                restarts,
                ..SearchConfig::default()
            };
            let result = shorten(&s, &config)?;
            let mut best = result.best;
            best.name = format!("{}-optimized", s.name);
            if let Some(path) = trace {
                let mut csv = String::from("iter,length\n");
                for (i, l) in &result.trace {
                    let _ = writeln!(csv, "{i},{l:?}");
                }
                emit(&Some(path), &csv, stdout)?;
            }
            emit(&out, &scene_to_toml(&best), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Profile { scene, n, out } => {
            let s = read_scene(&scene.scene, stdin)?;
            let profile = sample_profile(&s.domain, &measure_of_segments(&s.segments), n)?;
            let mut csv = String::with_capacity(80 * n);
            csv.push_str("theta,f,g,gap\n");
            for k in 0..profile.n_grid() {
                let _ = writeln!(
                    csv,
                    "{:?},{:?},{:?},{:?}",
                    profile.theta(k),
                    profile.f_values()[k],
                    profile.g_values()[k],
                    profile.gap_values()[k]
                );
            }
            emit(&out, &csv, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Render { scene, size, out } => {
            let s = read_scene(&scene.scene, stdin)?;
            emit(&out, &render_svg(&s, size), stdout)?;
            Ok(EXIT_OK)
        }
    }
}

/// SVG 1.1 drawing of the domain outline and the segments. A segment at
/// angle α gets hue `2α mod 2π`, so a segment and its reversal match.
pub fn render_svg(scene: &SceneSpec, size: f64) -> String {
    let pts = scene
        .domain
        .vertices()
        .iter()
        .copied()
        .chain(scene.segments.iter().flat_map(|s| s.endpoints()));
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in pts {
        x0 = x0.min(p.x);
        y0 = y0.min(p.y);
        x1 = x1.max(p.x);
        y1 = y1.max(p.y);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    let pad = 0.05 * span;
    let scale = size / (span + 2.0 * pad);
    let px = |x: f64| (x - x0 + pad) * scale;
    let py = |y: f64| (y1 - y + pad) * scale;
    let (w, h) = ((x1 - x0 + 2.0 * pad) * scale, (y1 - y0 + 2.0 * pad) * scale);
    let stroke = (size / 200.0).max(1.0);

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.2}" height="{h:.2}" viewBox="0 0 {w:.2} {h:.2}">"#
    );
    let _ = writeln!(svg, "  <title>{}</title>", xml_escape(&scene.name));
    let outline: Vec<String> = scene
        .domain
        .vertices()
        .iter()
        .map(|v| format!("{:.3},{:.3}", px(v.x), py(v.y)))
        .collect();
    let _ = writeln!(
        svg,
        r##"  <polygon points="{}" fill="#f4f4f4" stroke="#222222" stroke-width="{:.2}"/>"##,
        outline.join(" "),
        stroke
    );
    for s in &scene.segments {
        let hue = (2.0 * s.angle()).rem_euclid(2.0 * PI).to_degrees();
        let _ = writeln!(
            svg,
            r#"  <line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="hsl({:.1},80%,45%)" stroke-width="{:.2}" stroke-linecap="round"/>"#,
            px(s.a().x),
            py(s.a().y),
            px(s.b().x),
            py(s.b().y),
            hue,
            2.0 * stroke
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
