use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};

use cartan_twistor::scene::{Scene, SceneFile, BUILTIN};
use cartan_twistor::suite::{run_suite, Report, RunOptions, SuiteTag};
use cartan_twistor::yang_mills::lagrangian_routes;

/// Verifies conformal Cartan, twistor, BRST and Yang–Mills identities on a scene.
#[derive(Parser)]
#[command(name = "cartan-twistor", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and report residuals.
    Verify {
        /// Scene file, or the name of a built-in scene.
        scene: String,
        #[arg(long, default_value = "all")]
        suite: SuiteTag,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        order: Option<usize>,
        /// Replaces every tolerance of the scene.
        #[arg(long)]
        tol: Option<f64>,
        /// Write the JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Print the three Yang–Mills density routes at one point.
    Lagrangian {
        scene: String,
        /// Point as "x0,x1,x2,x3".
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// List the built-in scenes.
    Scenes,
}

fn load_scene_file(arg: &str) -> Result<SceneFile> {
    let path = Path::new(arg);
    if path.exists() {
        let src = std::fs::read_to_string(path).with_context(|| format!("reading {arg}"))?;
        return Ok(SceneFile::from_toml(&src)?);
    }
    SceneFile::builtin(arg).ok_or_else(|| anyhow!("no scene file or built-in scene named '{arg}'"))
}

fn parse_point(s: &str) -> Result<[f64; 4]> {
    let v = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().with_context(|| format!("bad coordinate '{t}'")))
        .collect::<Result<Vec<_>>>()?;
    v.try_into().map_err(|v: Vec<f64>| anyhow!("expected 4 coordinates, got {}", v.len()))
}

fn print_report(r: &Report) {
    println!("scene {} (seed {})", r.scene, r.seed);
    for c in &r.checks {
        let status = if c.passed { "pass" } else { "FAIL" };
        println!("{status}  {:<9} {:<26} {:>10.3e}  tol {:.0e}", c.suite.name(), c.id, c.max_residual, c.tolerance);
    }
    println!("{} checks, {} passed, {} failed", r.summary.total, r.summary.passed, r.summary.failed);
}

fn verify(
    scene: &str,
    suite: SuiteTag,
    points: Option<usize>,
    seed: Option<u64>,
    order: Option<usize>,
    tol: Option<f64>,
    json: Option<&Path>,
) -> Result<bool> {
    let mut file = load_scene_file(scene)?;
    if let Some(n) = points {
        file.points = n;
    }
    if let Some(s) = seed {
        file.seed = s;
    }
    if let Some(k) = order {
        file.order = k;
    }
    if let Some(t) = tol {
        if !(t > 0.0) {
            bail!("tolerance must be positive");
        }
    }
    let scene = Scene::compile(file)?;
    let report = run_suite(&scene, RunOptions { suite, tolerance: tol })?;
    print_report(&report);
    if let Some(path) = json {
        std::fs::write(path, report.to_json()).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(report.all_passed())
}

fn lagrangian(scene: &str, point: &str) -> Result<()> {
    let scene = Scene::compile(load_scene_file(scene)?)?;
    let p = parse_point(point)?;
    let frame = scene.vierbein.at(&p, scene.file.order.max(3))?;
    let r = lagrangian_routes(&frame)?;
    let [su22, sl2c, vector] = r.values();
    println!("su(2,2) Killing form       {su22:.12e}");
    println!("sl(2,C) Killing form       {sl2c:.12e}");
    println!("so(1,3) vector Weyl tensor {vector:.12e}");
    println!("max relative difference    {:.3e}", r.max_relative_difference());
    Ok(())
}

fn scenes() {
    for (name, _) in BUILTIN {
        let f = SceneFile::builtin(name).expect("built-in scene");
        let flat = if f.expect_conformally_flat == Some(true) { "conformally flat" } else { "curved" };
        println!("{name:<18} {flat}");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify { scene, suite, points, seed, order, tol, json } => {
            verify(&scene, suite, points, seed, order, tol, json.as_deref())
        }
        Command::Lagrangian { scene, point } => lagrangian(&scene, &point).map(|()| true),
        Command::Scenes => {
            scenes();
            Ok(true)
        }
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
