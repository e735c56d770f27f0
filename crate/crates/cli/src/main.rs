use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kform_cli::surface_file::SurfaceFile;
use kform_cli::{cache, presets, real, verify};
use kform_core::curves::{pairing_matrix, self_int_count, CurveTable, CurveWord, EnumConfig, HomologyBasis};
use kform_core::deform::{auxiliary_surface, check_auxiliary_bounds, twist_orbit, Regime};
use kform_core::estimator::{
    envelope, homological_systole, k_lower_bound_with, sweep_point, systole, CutoffPolicy, KEstimate,
};
use kform_core::optsearch::{minimize_k, CutoffRule, Method, OptConfig};
use kform_core::surface::{build_holonomy, validate, word_length, Holonomy};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "kform", version, about = "Geodesic lengths, intersections and K lower bounds on hyperbolic surfaces")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Directory for cached curve tables.
    #[arg(long, global = true, env = "KFORM_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Exit with status 4 when a result is not certified.
    #[arg(long, global = true)]
    require_certified: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct SurfaceArgs {
    /// Surface file.
    file: Option<PathBuf>,
    /// Named surface instead of a file.
    #[arg(long, conflicts_with = "file")]
    preset: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    #[arg(long, default_value_t = 10.0)]
    n: f64,
    /// Length of the short curve of pinched presets.
    #[arg(long, default_value_t = 1e-3)]
    pinch: f64,
}

#[derive(Args, Clone, Copy)]
struct Format {
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Lengths, homology classes and simplicity of curves.
    Lengths {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// One word per line; without it all simple curves up to --cutoff are listed.
        #[arg(long)]
        words: Option<PathBuf>,
        #[arg(long, default_value_t = 6.0)]
        cutoff: f64,
        #[command(flatten)]
        format: Format,
    },
    /// Lower bound for K with its witness pair.
    EstimateK {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, default_value_t = 8.0)]
        cutoff: f64,
        #[command(flatten)]
        format: Format,
    },
    /// Sweep over n of a genus-three family: systoles, predictor and khat.
    Asymptotics {
        #[arg(long)]
        preset: String,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        n_list: Vec<f64>,
        /// Curves up to this length count as short.
        #[arg(long, default_value_t = 1.0)]
        threshold: f64,
        #[arg(long, default_value_t = 60.0)]
        max_cutoff: f64,
    },
    /// Run invariant suites.
    Verify {
        file: Option<PathBuf>,
        #[arg(long, default_value = "all")]
        suite: String,
        /// Matrices (a b c d per line) checked by the moebius suite.
        #[arg(long)]
        fixture: Option<PathBuf>,
        #[arg(long, default_value_t = 6.0)]
        cutoff: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Compare lengths on the surface and on its auxiliary surface.
    Deform {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, default_value_t = 12.0)]
        cutoff: f64,
    },
    /// Lengths along the Dehn-twist orbit of a word.
    TwistOrbit {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        word: String,
        #[arg(long)]
        edge: usize,
        #[arg(long, default_value_t = 5)]
        window: u32,
    },
    /// Derivative-free search for small K.
    Optimize {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, default_value_t = 150)]
        budget: usize,
        #[arg(long, default_value_t = 2)]
        restarts: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        coordinate_descent: bool,
        /// Fixed cutoff; default is four times the longest pants curve.
        #[arg(long)]
        cutoff: Option<f64>,
        /// Write the best surface here.
        #[arg(long)]
        best: Option<PathBuf>,
    },
    /// Print a preset in the surface file format.
    Preset {
        #[command(flatten)]
        surface: SurfaceArgs,
    },
}

enum Failure {
    Input(String),
    Validation(String),
    Uncertified(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Validation(_) => 3,
            Failure::Uncertified(_) => 4,
        }
    }
}

impl From<kform_core::Error> for Failure {
    fn from(e: kform_core::Error) -> Self {
        use kform_core::Error::*;
        match e {
            Domain(_) | InvalidGraph(_) | InvalidWord(_) => Failure::Input(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

type Out<T> = Result<T, Failure>;

fn load_surface(a: &SurfaceArgs) -> Out<SurfaceFile> {
    if let Some(name) = &a.preset {
        return presets::preset(name, a.delta, a.n, a.pinch)
            .ok_or_else(|| Failure::Input(format!("unknown preset '{name}' (known: {})", presets::NAMES.join(", "))));
    }
    let path = a.file.as_ref().ok_or_else(|| Failure::Input("give a surface file or --preset".into()))?;
    read_surface(path)
}

fn read_surface(path: &Path) -> Out<SurfaceFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    SurfaceFile::parse(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn holonomy(sf: &SurfaceFile) -> Out<Holonomy> {
    let h = build_holonomy(&sf.graph, &sf.coords)?;
    let v = validate(&h);
    if !v.ok() {
        return Err(Failure::Validation(v.defects.join("; ")));
    }
    Ok(h)
}

struct Ctx {
    cache_dir: Option<PathBuf>,
    require_certified: bool,
}

impl Ctx {
    fn table(&self, sf: &SurfaceFile, h: &Holonomy, cutoff: f64) -> Out<CurveTable> {
        Ok(cache::table(self.cache_dir.as_deref(), sf, h, cutoff, &EnumConfig::default())?)
    }

    fn certify(&self, certified: bool, what: &str) -> Out<()> {
        if self.require_certified && !certified {
            return Err(Failure::Uncertified(format!("{what} is not certified")));
        }
        Ok(())
    }
}

fn csv_writer() -> csv::Writer<std::io::Stdout> {
    csv::Writer::from_writer(std::io::stdout())
}

fn csv_err(e: impl std::fmt::Display) -> Failure {
    Failure::Input(format!("output: {e}"))
}

fn print_json<T: Serialize>(v: &T) -> Out<()> {
    let s = serde_json::to_string_pretty(v).map_err(csv_err)?;
    println!("{s}");
    Ok(())
}

fn homology_str(c: &[i64]) -> String {
    c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

#[derive(Serialize)]
struct LengthRow {
    word: String,
    length: f64,
    homology: Vec<i64>,
    simple: bool,
}

fn cmd_lengths(ctx: &Ctx, sa: &SurfaceArgs, words: Option<&Path>, cutoff: f64, fmt: Format) -> Out<()> {
    let sf = load_surface(sa)?;
    let h = holonomy(&sf)?;
    let rows: Vec<LengthRow> = match words {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
            let hb = HomologyBasis::new(&sf.graph);
            let mut rows = Vec::new();
            for (i, line) in text.lines().enumerate() {
                let body = line.split('#').next().unwrap_or("").trim();
                if body.is_empty() {
                    continue;
                }
                let diag = |e: kform_core::Error| Failure::Input(format!("{}: line {}: {e}", p.display(), i + 1));
                let w: CurveWord = body.parse().map_err(diag)?;
                w.check_closed(&sf.graph).map_err(diag)?;
                let length = word_length(&h, &w)?;
                let simple = self_int_count(&h, &w)? == 0;
                rows.push(LengthRow { word: w.to_string(), length, homology: hb.abelianize(&w).coords, simple });
            }
            rows
        }
        None => {
            let t = ctx.table(&sf, &h, cutoff)?;
            ctx.certify(t.certified, "curve table")?;
            t.entries
                .iter()
                .map(|e| LengthRow {
                    word: e.word.to_string(),
                    length: e.length,
                    homology: e.homology.coords.clone(),
                    simple: e.simple,
                })
                .collect()
        }
    };
    if fmt.json {
        return print_json(&rows);
    }
    let mut w = csv_writer();
    w.write_record(["word", "length", "homology", "simple"]).map_err(csv_err)?;
    for r in &rows {
        w.write_record([r.word.clone(), real(r.length), homology_str(&r.homology), r.simple.to_string()])
            .map_err(csv_err)?;
    }
    w.flush().map_err(csv_err)
}

#[derive(Serialize)]
struct KReport {
    label: Option<String>,
    cutoff: f64,
    estimate: KEstimate,
    sys: f64,
    sys_h: f64,
    envelope: f64,
    certified: bool,
    warning: Option<String>,
}

fn cmd_estimate_k(ctx: &Ctx, sa: &SurfaceArgs, cutoff: f64, fmt: Format) -> Out<()> {
    let sf = load_surface(sa)?;
    let h = holonomy(&sf)?;
    let t = ctx.table(&sf, &h, cutoff)?;
    let p = pairing_matrix(&h)?;
    let k = k_lower_bound_with(&p, &t)?;
    let sh = homological_systole(&h, &t)?;
    let certified = t.certified && sh.certified;
    let rep = KReport {
        label: sf.label.clone(),
        cutoff,
        sys: systole(&h, &t)?.length,
        sys_h: sh.length,
        envelope: envelope(sh.length),
        certified,
        warning: (!certified).then(|| "curve table not certified complete up to the cutoff".to_string()),
        estimate: k,
    };
    ctx.certify(certified, "estimate")?;
    if !fmt.csv {
        return print_json(&rep);
    }
    let mut w = csv_writer();
    w.write_record(["value", "int", "alpha", "beta", "len_alpha", "len_beta", "sys", "sys_h", "envelope", "cutoff", "certified"])
        .map_err(csv_err)?;
    let e = &rep.estimate;
    w.write_record([
        real(e.value),
        e.int.to_string(),
        e.witness.0.to_string(),
        e.witness.1.to_string(),
        real(e.lengths.0),
        real(e.lengths.1),
        real(rep.sys),
        real(rep.sys_h),
        real(rep.envelope),
        real(cutoff),
        certified.to_string(),
    ])
    .map_err(csv_err)?;
    w.flush().map_err(csv_err)
}

/// One row of the asymptotics sweep.
fn sweep_row(ctx: &Ctx, preset: &str, delta: f64, n: f64, threshold: f64, max_cutoff: f64) -> Out<Vec<String>> {
    let sf = presets::preset(preset, delta, n, 1.0).expect("checked by caller");
    let h = holonomy(&sf)?;
    let d = if preset.contains("63") || preset.starts_with("separating") { 0.0 } else { delta };
    let policy = CutoffPolicy { start: 2.0 * (1.0 + d) * n.ln().max(1.0), step: 1.0, max: max_cutoff };
    let pt = sweep_point(&h, n, delta, threshold, &policy, &EnumConfig::default())?;
    ctx.certify(pt.certified, &format!("sweep point n = {n}"))?;
    Ok(vec![
        real(pt.n),
        real(pt.delta),
        real(pt.sys),
        real(pt.sys_h),
        real(pt.khat),
        real(pt.predictor),
        real(pt.normalized_product),
        real(pt.normalized_n),
        real(pt.cutoff),
        real(pt.khat_cutoff),
        pt.certified.to_string(),
    ])
}

fn cmd_asymptotics(ctx: &Ctx, preset: &str, delta: f64, ns: &[f64], threshold: f64, max_cutoff: f64) -> Out<()> {
    let known = ["fig5-example1", "fig5", "thin-family", "fig5-example63", "separating-thin-family"];
    if !known.contains(&preset) {
        return Err(Failure::Input(format!("unknown sweep preset '{preset}' (known: {})", known.join(", "))));
    }
    let mut w = csv_writer();
    w.write_record([
        "n",
        "delta",
        "sys",
        "sys_h",
        "khat",
        "predictor",
        "normalized_product",
        "normalized_n",
        "cutoff",
        "khat_cutoff",
        "certified",
    ])
    .map_err(csv_err)?;
    for &n in ns {
        let row = sweep_row(ctx, preset, delta, n, threshold, max_cutoff)?;
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(csv_err)
}

fn cmd_verify(file: Option<&Path>, suite: &str, fixture: Option<&Path>, cutoff: f64, seed: u64) -> Out<()> {
    if !verify::SUITES.contains(&suite) {
        return Err(Failure::Input(format!("unknown suite '{suite}' (known: {})", verify::SUITES.join(", "))));
    }
    let sf = file.map(read_surface).transpose()?;
    let fx = match fixture {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
            Some(verify::parse_fixture(&text).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?)
        }
        None => None,
    };
    let opts = verify::Options { surface: sf.as_ref(), fixture: fx.as_deref(), cutoff, seed };
    let rep = verify::run(suite, &opts);
    print_json(&rep)?;
    if rep.passed() {
        Ok(())
    } else {
        Err(Failure::Validation(format!("{} invariant checks failed", rep.failures.len())))
    }
}

fn cmd_deform(sa: &SurfaceArgs, cutoff: f64) -> Out<()> {
    let sf = load_surface(sa)?;
    holonomy(&sf)?;
    let y = auxiliary_surface(&sf.graph, &sf.coords);
    let rep = check_auxiliary_bounds(&sf.graph, &sf.coords, &y, cutoff)?;
    let mut w = csv_writer();
    w.write_record(["id", "word", "length_before", "length_after", "regime", "ratio"]).map_err(csv_err)?;
    for r in &rep.rows {
        let regime = match r.regime {
            Regime::DisjointFromShort => "disjoint",
            Regime::CrossingShort => "crossing",
        };
        w.write_record([
            r.id.to_string(),
            r.word.to_string(),
            real(r.length_before),
            real(r.length_after),
            regime.to_string(),
            real(r.ratio),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(csv_err)?;
    eprintln!("sys(Y) = {}  R = {}", rep.sys_y, rep.r);
    Ok(())
}

fn cmd_twist_orbit(sa: &SurfaceArgs, word: &str, edge: usize, window: u32) -> Out<()> {
    let sf = load_surface(sa)?;
    holonomy(&sf)?;
    let w: CurveWord = word.parse()?;
    w.check_closed(&sf.graph)?;
    let o = twist_orbit(&sf.graph, &sf.coords, &w, edge, window)?;
    let mut out = csv_writer();
    out.write_record(["n", "length", "argmin"]).map_err(csv_err)?;
    for &(n, l) in &o.sweep {
        out.write_record([n.to_string(), real(l), (n == o.argmin).to_string()]).map_err(csv_err)?;
    }
    out.flush().map_err(csv_err)?;
    if o.disjoint {
        eprintln!("warning: the curve misses edge {edge}; the orbit is constant");
    }
    Ok(())
}

struct OptArgs {
    budget: usize,
    restarts: usize,
    seed: u64,
    coordinate_descent: bool,
    cutoff: Option<f64>,
    best: Option<PathBuf>,
}

fn cmd_optimize(ctx: &Ctx, sa: &SurfaceArgs, a: &OptArgs) -> Out<()> {
    let sf = load_surface(sa)?;
    holonomy(&sf)?;
    let cfg = OptConfig {
        method: if a.coordinate_descent { Method::CoordinateDescent } else { Method::NelderMead },
        restarts: a.restarts,
        budget: a.budget,
        cutoff: a.cutoff.map_or(CutoffRule::MaxPantsLength(4.0), CutoffRule::Fixed),
        seed: a.seed,
        ..OptConfig::default()
    };
    let tr = minimize_k(&sf.graph, &sf.coords, &cfg)?;
    let mut w = csv_writer();
    let mut header = vec!["restart".to_string()];
    let ne = sf.graph.n_edges();
    header.extend((0..ne).map(|e| format!("length{e}")));
    header.extend((0..ne).map(|e| format!("twist{e}")));
    header.extend(["khat", "sys", "sys_h", "cutoff", "certified"].map(String::from));
    w.write_record(&header).map_err(csv_err)?;
    for it in &tr.iterates {
        let mut row = vec![it.restart.to_string()];
        row.extend(it.coords.lengths.iter().map(|&x| real(x)));
        row.extend(it.coords.twists.iter().map(|&x| real(x)));
        row.extend([real(it.khat), real(it.sys), real(it.sys_h), real(it.cutoff), it.certified.to_string()]);
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(csv_err)?;
    let best = tr.best_iterate().ok_or_else(|| Failure::Uncertified("no certified iterate".into()))?;
    if let Some(p) = &a.best {
        let out = SurfaceFile::new(Some(format!("optimized khat={}", best.khat)), sf.graph.clone(), best.coords.clone());
        std::fs::write(p, out.emit()).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
    }
    eprintln!("best khat {} (confirmed {:?})", best.khat, tr.confirmed_khat);
    ctx.certify(!tr.budget_exhausted, "optimization (budget exhausted)")
}

fn run(cli: Cli) -> Out<()> {
    let ctx = Ctx { cache_dir: cli.cache_dir, require_certified: cli.require_certified };
    match cli.cmd {
        Cmd::Lengths { surface, words, cutoff, format } => cmd_lengths(&ctx, &surface, words.as_deref(), cutoff, format),
        Cmd::EstimateK { surface, cutoff, format } => cmd_estimate_k(&ctx, &surface, cutoff, format),
        Cmd::Asymptotics { preset, delta, n_list, threshold, max_cutoff } => {
            cmd_asymptotics(&ctx, &preset, delta, &n_list, threshold, max_cutoff)
        }
        Cmd::Verify { file, suite, fixture, cutoff, seed } => {
            cmd_verify(file.as_deref(), &suite, fixture.as_deref(), cutoff, seed)
        }
        Cmd::Deform { surface, cutoff } => cmd_deform(&surface, cutoff),
        Cmd::TwistOrbit { surface, word, edge, window } => cmd_twist_orbit(&surface, &word, edge, window),
        Cmd::Optimize { surface, budget, restarts, seed, coordinate_descent, cutoff, best } => {
            cmd_optimize(&ctx, &surface, &OptArgs { budget, restarts, seed, coordinate_descent, cutoff, best })
        }
        Cmd::Preset { surface } => {
            let sf = load_surface(&surface)?;
            print!("{}", sf.emit());
            std::io::stdout().flush().map_err(csv_err)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: worker pool: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Input(m) | Failure::Validation(m) | Failure::Uncertified(m)) = &f;
            eprintln!("error: {m}");
            ExitCode::from(f.code())
        }
    }
}
