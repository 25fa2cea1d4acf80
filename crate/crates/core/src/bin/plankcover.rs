use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::json;

use plankcover::contact::{check_uu_form, extract_contact_pairs, max_inscribed_homothet, recenter_homothet};
use plankcover::cover::{
    construct_witness_with, relative_width, simplex_negative_homothet, sumset_witness, verify_cover_sample,
    CoveringInstance, SumsetBody, WitnessOptions,
};
use plankcover::select::{select_bang, select_colourful, select_kadets, verify_guarantee, SelectionInstance};
use plankcover::svg::{Role, Scene};
use plankcover::{Error, Polytope, Vector};

#[derive(Parser, Debug)]
#[command(name = "plankcover", version, about = "Colourful selections, contact pairs and covering witnesses")]
struct Cli {
    /// Numerical tolerance for audits and boundary flags.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Seed for commands that draw random data.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write a planar SVG figure here (2D inputs only).
    #[arg(long, global = true)]
    svg: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Signs for a weighted sum of unit vectors avoiding every plank.
    SelectBang { input: PathBuf },
    /// One unit vector per set with the radius guarantee.
    SelectKadets { input: PathBuf },
    /// Generic colourful selection on paired vectors.
    SelectColourful { input: PathBuf },
    /// Largest homothet of K inside L.
    Inradius { input: PathBuf },
    /// Contact pairs of the maximal homothet of K in L.
    ContactPairs { input: PathBuf },
    /// Witness point against a proposed translative covering.
    Witness { input: PathBuf },
    /// Uncovered point of a sumset of projection sets.
    SumsetWitness { input: PathBuf },
    /// Regular simplex against negative homothets.
    SimplexDemo { input: PathBuf },
    /// Grid estimate of how much of B the pieces cover.
    VerifyCover { input: PathBuf },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BangInput {
    units: Vec<Vector>,
    widths: Vec<f64>,
    offsets: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct KadetsInput {
    dirs: Vec<Vec<Vector>>,
    radii: Vec<f64>,
    centers: Vec<Vector>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PairInput {
    #[serde(rename = "K")]
    k: Polytope,
    #[serde(rename = "L")]
    l: Polytope,
    #[serde(default)]
    o: Option<Vector>,
}

#[derive(Deserialize)]
struct WitnessInput {
    #[serde(flatten)]
    instance: CoveringInstance,
    #[serde(default)]
    epsilon: Option<f64>,
}

#[derive(Deserialize)]
struct CoverInput {
    #[serde(flatten)]
    instance: CoveringInstance,
    #[serde(default = "default_grid")]
    grid_n: usize,
}

fn default_grid() -> usize {
    200
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SumsetInput {
    bodies: Vec<SumsetBody>,
    shifts: Vec<Vector>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SimplexInput {
    d: usize,
    lambdas: Vec<f64>,
    #[serde(default)]
    shifts: Option<Vec<Vector>>,
}

enum Failure {
    Refused(String),
    Audit(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            e if e.is_refusal() => Failure::Refused(refusal_reason(&e)),
            Error::AuditFailed(m) => Failure::Audit(m),
            other => Failure::Input(other.to_string()),
        }
    }
}

fn refusal_reason(e: &Error) -> String {
    match e {
        Error::Refused(m) | Error::Precondition(m) => m.clone(),
        other => other.to_string(),
    }
}

fn read_input<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Failure::Input(format!("reading stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("reading {}: {e}", path.display())))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_svg(path: &Option<PathBuf>, scene: impl FnOnce() -> Result<Scene, Error>) -> Result<(), Failure> {
    let Some(path) = path else { return Ok(()) };
    let scene = scene().map_err(|e| Failure::Input(format!("svg: {e}")))?;
    fs::write(path, scene.render()).map_err(|e| Failure::Input(format!("writing {}: {e}", path.display())))
}

fn report<T: Serialize>(value: &T) -> Result<serde_json::Value, Failure> {
    serde_json::to_value(value).map_err(|e| Failure::Input(format!("serializing report: {e}")))
}

fn run(cli: &Cli) -> Result<serde_json::Value, Failure> {
    if !(cli.tol > 0.0) || !cli.tol.is_finite() {
        return Err(Failure::Input("--tol must be positive".into()));
    }
    let tol = cli.tol;
    match &cli.command {
        Command::SelectBang { input } => {
            let inp: BangInput = read_input(input)?;
            report(&select_bang(&inp.units, &inp.widths, &inp.offsets)?)
        }
        Command::SelectKadets { input } => {
            let inp: KadetsInput = read_input(input)?;
            report(&select_kadets(&inp.dirs, &inp.radii, &inp.centers)?)
        }
        Command::SelectColourful { input } => {
            let inst: SelectionInstance = read_input(input)?;
            let result = select_colourful(&inst)?;
            let audit = verify_guarantee(&inst, &result, tol)?;
            if !audit.holds {
                return Err(Failure::Audit(format!("independent audit found margin {:e}", audit.worst)));
            }
            Ok(json!({ "result": report(&result)?, "audit": report(&audit)? }))
        }
        Command::Inradius { input } => {
            let inp: PairInput = read_input(input)?;
            let h = max_inscribed_homothet(&inp.k, &inp.l)?;
            let rel = match inp.l.as_plank() {
                Some(_) => Some(relative_width(&inp.k, &inp.l)?),
                None => None,
            };
            Ok(json!({ "homothet": report(&h)?, "relative_width": rel }))
        }
        Command::ContactPairs { input } => {
            let inp: PairInput = read_input(input)?;
            let mut h = max_inscribed_homothet(&inp.k, &inp.l)?;
            let origin = match &inp.o {
                Some(o) => {
                    h = recenter_homothet(&inp.k, &inp.l, &h, o)?;
                    o.clone()
                }
                None => h.shift.clone(),
            };
            let sys = extract_contact_pairs(&inp.k, &inp.l, &h, &origin)?;
            let uu = check_uu_form(&sys, tol) || sys.align_normals(tol).map(|s| check_uu_form(&s, tol)).unwrap_or(false);
            write_svg(&cli.svg, || {
                let mut s = Scene::new();
                let inner = inp.k.scale(h.lambda)?.translate(&h.shift);
                s.polytope(Role::Body, &inp.l)?.polytope(Role::Inner, &inner)?;
                let reach = inner.vertices().map(|vs| vs.iter().map(|v| v.distance(&h.shift)).fold(0.0, f64::max)).unwrap_or(1.0);
                for p in &sys.pairs {
                    s.normal(&(&p.u + &origin), &p.v.scale(0.3 * reach.max(1e-9) / p.v.norm()))?;
                }
                Ok(s)
            })?;
            Ok(json!({ "homothet": report(&h)?, "contacts": report(&sys)?, "uu_form": uu }))
        }
        Command::Witness { input } => {
            let inp: WitnessInput = read_input(input)?;
            let opts = WitnessOptions { epsilon: inp.epsilon, tol, ..Default::default() };
            let w = construct_witness_with(&inp.instance, &opts)?;
            write_svg(&cli.svg, || {
                let mut s = covering_scene(&inp.instance)?;
                s.point(&w.point)?;
                Ok(s)
            })?;
            report(&w)
        }
        Command::SumsetWitness { input } => {
            let inp: SumsetInput = read_input(input)?;
            let w = sumset_witness(&inp.bodies, &inp.shifts, tol)?;
            write_svg(&cli.svg, || {
                let mut s = Scene::new();
                for (b, x) in inp.bodies.iter().zip(&inp.shifts) {
                    s.polytope(Role::Piece, &b.body.translate(x))?;
                }
                s.point(&w.point)?;
                Ok(s)
            })?;
            report(&w)
        }
        Command::SimplexDemo { input } => {
            let inp: SimplexInput = read_input(input)?;
            let shifts = match inp.shifts {
                Some(s) => s,
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
                    (0..inp.lambdas.len())
                        .map(|_| Vector::from((0..inp.d).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<f64>>()))
                        .collect()
                }
            };
            let w = simplex_negative_homothet(inp.d, &inp.lambdas, &shifts, tol)?;
            if inp.d == 2 {
                write_svg(&cli.svg, || {
                    let t = Polytope::regular_simplex(2)?;
                    let mut s = Scene::new();
                    s.polytope(Role::Body, &t)?;
                    for (l, x) in inp.lambdas.iter().zip(&shifts).filter(|(l, _)| **l > 0.0) {
                        s.polytope(Role::Piece, &t.scale(-l)?.translate(x))?;
                    }
                    s.point(&w.witness.point)?;
                    Ok(s)
                })?;
            }
            report(&w)
        }
        Command::VerifyCover { input } => {
            let inp: CoverInput = read_input(input)?;
            let sample = verify_cover_sample(&inp.instance, inp.grid_n)?;
            write_svg(&cli.svg, || {
                let mut s = covering_scene(&inp.instance)?;
                if let Some(p) = &sample.first_uncovered {
                    s.point(p)?;
                }
                Ok(s)
            })?;
            report(&sample)
        }
    }
}

fn covering_scene(inst: &CoveringInstance) -> Result<Scene, Error> {
    let mut s = Scene::new();
    s.polytope(Role::Body, &inst.body)?;
    for p in &inst.pieces {
        s.polytope(Role::Piece, &p.placed())?;
    }
    Ok(s)
}

fn emit(cli: &Cli, value: &serde_json::Value) -> io::Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("json values serialize");
    text.push('\n');
    match &cli.out {
        Some(path) => fs::write(path, text),
        None => io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (value, code) = match run(&cli) {
        Ok(v) => (v, 0),
        Err(Failure::Refused(reason)) => {
            eprintln!("refused: {reason}");
            (json!({ "status": "refused", "reason": reason }), 2)
        }
        Err(Failure::Audit(reason)) => {
            eprintln!("audit failed: {reason}");
            (json!({ "status": "audit_failed", "reason": reason }), 1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(3);
        }
    };
    if let Err(e) = emit(&cli, &value) {
        eprintln!("error: writing output: {e}");
        return ExitCode::from(3);
    }
    ExitCode::from(code)
}
