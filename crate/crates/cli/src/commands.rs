use std::collections::HashMap;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use multihelix::acceptance;
use multihelix::arrangement::{
    exhaustive_search, optimize_geometry, Arrangement, MultihelixConfig, SearchOptions,
};
use multihelix::bounds::{self, HullTable, LowerBoundKind};
use multihelix::closure::{close_link, verify_no_overlap, ClosureMode};
use multihelix::constructions::{
    self, construct_equal, construct_incremental, equal_sweep, gamma_length, infill,
    reverse_jenga, AsymptoticReport, ConstructionKind, InnerRadiusMode,
};
use multihelix::export;
use multihelix::helix::ideal_helix;

use crate::output::{num, print_json, Format, Table};
use crate::svg::{log_log_plot, Series};

#[derive(Parser)]
#[command(
    name = "multihelix",
    version,
    about = "Ropelength-minimizing concentric helices and torus-link closures"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Emit CSV instead of an aligned table.
    #[arg(long, global = true)]
    pub csv: bool,

    /// Emit JSON instead of an aligned table.
    #[arg(long, global = true)]
    pub json: bool,

    /// Omit the timestamp field from JSON output.
    #[arg(long, global = true)]
    pub no_timestamp: bool,

    /// Worker thread cap (defaults to all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Output directory for exported files (env: MULTIHELIX_OUT).
    #[arg(long, global = true, env = "MULTIHELIX_OUT")]
    pub out: Option<PathBuf>,

    /// Key=value config file overriding defaults (keys: out, jobs, verts).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Subcommand)]
pub enum Command {
    /// Tight single-shell helix geometry for a strand count or range.
    Ideal {
        /// Strand count or inclusive range, e.g. `7` or `2..10`.
        #[arg(long)]
        n: String,
    },
    /// Optimal shell arrangements for a component count or range.
    Search {
        /// Component count Q (strands including the rod), e.g. `12` or `2..20`.
        #[arg(long)]
        q: String,
        /// Shell-count window, e.g. `5..6`; defaults to a window chained from
        /// the previous count above 21 components.
        #[arg(long)]
        window: Option<String>,
        /// Rows to report per component count.
        #[arg(long, default_value_t = 1)]
        keep: usize,
    },
    /// Scalable construction families and their measured prefactors.
    Construct {
        #[command(subcommand)]
        family: ConstructCmd,
        /// Write a log-log plot of the rows to this SVG file.
        #[arg(long, global = true)]
        svg: Option<PathBuf>,
    },
    /// Close a multihelix into a T(pQ,Q) torus link.
    Close {
        /// Arrangement including the rod, e.g. `1,5,7,6`.
        #[arg(long, conflicts_with = "q")]
        arrangement: Option<String>,
        /// Component count; the best searched arrangement is used.
        #[arg(long)]
        q: Option<u32>,
        /// Number of repeating units.
        #[arg(long, default_value_t = 3)]
        p: u32,
        /// Export geometry (`vect` or `obj`) into the output directory.
        #[arg(long)]
        export: Option<ExportFormat>,
        /// Vertices per helix per unit for export and the overlap audit.
        #[arg(long, default_value_t = 199)]
        verts: usize,
        /// Major-radius rule.
        #[arg(long, value_enum, default_value_t = ModeArg::Fitted)]
        mode: ModeArg,
    },
    /// Hull-based lower bounds on the ropelength of T(3Q,Q) links.
    Bounds {
        /// Component count or range, e.g. `2` or `5..39`.
        #[arg(long)]
        q: String,
        #[arg(long, value_enum, default_value_t = BoundsMode::Circular)]
        mode: BoundsMode,
        /// Override the built-in hull perimeter table (CSV: n,perimeter,conjectural).
        #[arg(long)]
        hull_file: Option<PathBuf>,
    },
    /// Run the full acceptance matrix and print one line per criterion.
    Verify,
}

#[derive(Subcommand)]
pub enum ConstructCmd {
    /// Shells of k, 2k, ... helices at their ideal radii.
    Incremental {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        t: u32,
    },
    /// Equal strands per shell.
    Equal {
        /// Total helix count (excluding the rod).
        #[arg(long)]
        n: u32,
        /// Shell count; must divide n.
        #[arg(long, conflicts_with = "sweep_t")]
        t: Option<u32>,
        /// Sweep every divisor shell count and report all rows.
        #[arg(long)]
        sweep_t: bool,
        /// Optimize the inner radius instead of using the ideal value.
        #[arg(long)]
        optimized: bool,
    },
    /// Infill the core of the equal-per-shell construction.
    Infill {
        /// Total helix count (excluding the rod).
        #[arg(long)]
        n: u32,
        /// Follow with the greedy outermost-to-innermost rebalance.
        #[arg(long)]
        jenga: bool,
    },
    /// Analytic equal-family length at the bound-optimal shell count.
    Gamma {
        #[arg(long)]
        q: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum ExportFormat {
    Vect,
    Obj,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum ModeArg {
    /// Scale the axis circle by (p+1)/p.
    Uniform,
    /// Grow the major radius only as far as shell pitch preservation demands.
    Fitted,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum BoundsMode {
    Circular,
    Tabulated,
}

struct Settings {
    format: Format,
    timestamp: bool,
    out_dir: PathBuf,
    verts: usize,
}

pub fn run(cli: Cli) -> anyhow::Result<i32> {
    let mut file_conf: HashMap<String, String> = HashMap::new();
    if let Some(path) = &cli.config {
        file_conf = parse_config(path)?;
    }
    let jobs = cli
        .jobs
        .or_else(|| file_conf.get("jobs").and_then(|v| v.parse().ok()));
    if let Some(jobs) = jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
            .ok();
    }
    let out_dir = cli
        .out
        .clone()
        .or_else(|| file_conf.get("out").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    let settings = Settings {
        format: if cli.json {
            Format::Json
        } else if cli.csv {
            Format::Csv
        } else {
            Format::Table
        },
        timestamp: !cli.no_timestamp,
        out_dir,
        verts: file_conf
            .get("verts")
            .and_then(|v| v.parse().ok())
            .unwrap_or(199),
    };
    match cli.command {
        Command::Ideal { n } => cmd_ideal(&n, &settings),
        Command::Search { q, window, keep } => cmd_search(&q, window.as_deref(), keep, &settings),
        Command::Construct { family, svg } => cmd_construct(family, svg.as_deref(), &settings),
        Command::Close {
            arrangement,
            q,
            p,
            export,
            verts,
            mode,
        } => cmd_close(
            arrangement.as_deref(),
            q,
            p,
            export,
            verts,
            mode,
            &settings,
        ),
        Command::Bounds { q, mode, hull_file } => {
            cmd_bounds(&q, mode, hull_file.as_deref(), &settings)
        }
        Command::Verify => cmd_verify(),
    }
}

fn parse_config(path: &Path) -> anyhow::Result<HashMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let mut map = HashMap::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("config line without '=': {line:?}"))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn parse_range(text: &str) -> anyhow::Result<RangeInclusive<u32>> {
    if let Some((a, b)) = text.split_once("..") {
        let a: u32 = a.trim().parse().context("range start")?;
        let b: u32 = b.trim().trim_start_matches('=').parse().context("range end")?;
        if a > b {
            bail!("empty range {text:?}");
        }
        Ok(a..=b)
    } else {
        let v: u32 = text.trim().parse().context("count")?;
        Ok(v..=v)
    }
}

fn cmd_ideal(n_spec: &str, settings: &Settings) -> anyhow::Result<i32> {
    let range = parse_range(n_spec)?;
    if *range.start() < 2 {
        bail!(multihelix::Error::InvalidParameter(
            "single-shell geometry needs n >= 2".into()
        ));
    }
    let mut rows = Vec::new();
    for n in range {
        rows.push(ideal_helix(n)?);
    }
    if settings.format == Format::Json {
        return print_json(&rows, settings.timestamp).map(|_| 0);
    }
    let mut table = Table::new(&["n", "radius", "height", "length", "length_per_crossing"]);
    for p in &rows {
        table.row(vec![
            p.n.to_string(),
            num(p.radius, 5),
            num(p.height, 4),
            num(p.length_per_twist, 4),
            num(p.length_per_crossing.unwrap_or(f64::NAN), 5),
        ]);
    }
    table.print(settings.format);
    Ok(0)
}

fn parse_window(text: &str) -> anyhow::Result<(usize, usize)> {
    let r = parse_range(text)?;
    Ok((*r.start() as usize, *r.end() as usize))
}

fn cmd_search(
    q_spec: &str,
    window: Option<&str>,
    keep: usize,
    settings: &Settings,
) -> anyhow::Result<i32> {
    let range = parse_range(q_spec)?;
    if *range.start() < 2 {
        bail!(multihelix::Error::InvalidParameter(
            "the smallest link has q = 2 components".into()
        ));
    }
    let explicit_window = window.map(parse_window).transpose()?;
    let mut rows: Vec<MultihelixConfig> = Vec::new();
    let mut prev_shells = 1usize;
    for q in range {
        let n = q - 1;
        let window = match explicit_window {
            Some(w) => Some(w),
            None if n > 19 => Some((prev_shells.saturating_sub(1).max(1), prev_shells + 1)),
            None => None,
        };
        eprintln!("searching q={q} (window {window:?})");
        let options = SearchOptions {
            shell_count_window: window,
            keep,
            ..SearchOptions::default()
        };
        let found = exhaustive_search(n, &options)?;
        if let Some(best) = found.first() {
            prev_shells = best.arrangement.shell_count();
        }
        rows.extend(found);
    }
    if settings.format == Format::Json {
        return print_json(&rows, settings.timestamp).map(|_| 0);
    }
    let mut table = Table::new(&[
        "q",
        "arrangement",
        "inner_radius",
        "height",
        "binding_shell",
        "length",
        "length_per_crossing",
    ]);
    for cfg in &rows {
        table.row(vec![
            cfg.q().to_string(),
            cfg.arrangement.to_string(),
            num(cfg.inner_radius, 4),
            num(cfg.height, 4),
            cfg.height_setting_shell
                .map(|i| (i + 1).to_string())
                .unwrap_or_else(|| "-".into()),
            num(cfg.total_length, 4),
            num(cfg.length_per_crossing, 6),
        ]);
    }
    table.print(settings.format);
    Ok(0)
}

fn report_rows(rows: &[AsymptoticReport], settings: &Settings) -> anyhow::Result<()> {
    if settings.format == Format::Json {
        return print_json(&rows, settings.timestamp);
    }
    let mut table = Table::new(&["kind", "q", "shells", "length", "per_crossing", "prefactor"]);
    for r in rows {
        table.row(vec![
            format!("{:?}", r.kind),
            r.q.to_string(),
            r.shell_count.to_string(),
            num(r.length, 2),
            num(r.length_per_crossing, 6),
            num(r.measured_prefactor, 4),
        ]);
    }
    table.print(settings.format);
    Ok(())
}

fn cmd_construct(
    family: ConstructCmd,
    svg_path: Option<&Path>,
    settings: &Settings,
) -> anyhow::Result<i32> {
    let mut rows: Vec<AsymptoticReport> = Vec::new();
    match family {
        ConstructCmd::Incremental { k, t } => {
            let cfg = construct_incremental(k, t)?;
            rows.push(AsymptoticReport::from_length(
                ConstructionKind::Incremental,
                cfg.q() as u64,
                t as usize,
                cfg.total_length,
            ));
        }
        ConstructCmd::Equal {
            n,
            t,
            sweep_t,
            optimized,
        } => {
            let mode = if optimized {
                InnerRadiusMode::Optimized
            } else {
                InnerRadiusMode::Ideal
            };
            if sweep_t {
                rows = equal_sweep(n, mode)?;
            } else {
                let t = t.ok_or_else(|| anyhow!("--t or --sweep-t is required"))?;
                if n % t != 0 {
                    bail!(multihelix::Error::InvalidParameter(format!(
                        "{t} shells do not divide {n} helices"
                    )));
                }
                let cfg = construct_equal(n / t, t, mode)?;
                rows.push(AsymptoticReport::from_length(
                    ConstructionKind::EqualPerShell,
                    cfg.q() as u64,
                    t as usize,
                    cfg.total_length,
                ));
            }
        }
        ConstructCmd::Infill { n, jenga } => {
            let sweep = equal_sweep(n, InnerRadiusMode::Ideal)?;
            let best = sweep
                .iter()
                .min_by(|a, b| a.length.total_cmp(&b.length))
                .ok_or_else(|| anyhow!("no divisor construction for {n}"))?;
            let base = construct_equal(n / best.shell_count as u32, best.shell_count as u32,
                InnerRadiusMode::Ideal)?;
            rows.push(AsymptoticReport::from_length(
                ConstructionKind::EqualPerShell,
                base.q() as u64,
                base.arrangement.shell_count(),
                base.total_length,
            ));
            let filled = infill(&base)?;
            eprintln!(
                "infill: {} interior shells, {} helices moved, {} full shells + {} strands removed",
                filled.interior_shells,
                filled.helices_moved,
                filled.outer_shells_removed,
                filled.partial_removed
            );
            rows.push(AsymptoticReport::from_length(
                ConstructionKind::Infilled,
                filled.config.q() as u64,
                filled.config.arrangement.shell_count(),
                filled.config.total_length,
            ));
            if jenga {
                let balanced = reverse_jenga(&filled.config)?;
                let mut arr = vec![1u32];
                arr.extend(&balanced.config.arrangement.shells);
                eprintln!("rebalanced in {} moves: {:?}", balanced.moves, arr);
                rows.push(AsymptoticReport::from_length(
                    ConstructionKind::ReverseJenga,
                    balanced.config.q() as u64,
                    balanced.config.arrangement.shell_count(),
                    balanced.config.total_length,
                ));
            }
        }
        ConstructCmd::Gamma { q } => {
            let length = gamma_length(q)?;
            let mut report = AsymptoticReport::from_length(
                ConstructionKind::EqualPerShell,
                q,
                constructions::equal_bound_optimal_t(q).round() as usize,
                length,
            );
            report.measured_prefactor = length / (q as f64).powf(1.5);
            rows.push(report);
        }
    }
    report_rows(&rows, settings)?;
    if let Some(path) = svg_path {
        let series = vec![Series {
            label: "measured prefactor".into(),
            color: "#1f77b4",
            points: rows
                .iter()
                .map(|r| (r.q as f64, r.length_per_crossing))
                .collect(),
        }];
        let doc = log_log_plot(
            "ropelength per crossing",
            "components",
            "length per crossing",
            &series,
        );
        std::fs::create_dir_all(path.parent().unwrap_or(Path::new(".")))?;
        std::fs::write(path, doc)?;
        eprintln!("wrote {}", path.display());
    }
    Ok(0)
}

fn cmd_close(
    arrangement: Option<&str>,
    q: Option<u32>,
    p: u32,
    export: Option<ExportFormat>,
    verts: usize,
    mode: ModeArg,
    settings: &Settings,
) -> anyhow::Result<i32> {
    if p < 2 {
        bail!(multihelix::Error::InvalidParameter(
            "closure needs p >= 2 repeats".into()
        ));
    }
    let config = match (arrangement, q) {
        (Some(text), _) => {
            let arr = Arrangement::parse(text)?;
            optimize_geometry(&arr)?
        }
        (None, Some(q)) => {
            if q < 2 {
                bail!(multihelix::Error::InvalidParameter("q >= 2".into()));
            }
            let options = SearchOptions {
                keep: 1,
                shell_count_window: if q > 20 { Some((1, 8)) } else { None },
                ..SearchOptions::default()
            };
            exhaustive_search(q - 1, &options)?
                .into_iter()
                .next()
                .ok_or_else(|| anyhow!("search produced nothing"))?
        }
        (None, None) => bail!("either --arrangement or --q is required"),
    };
    let mode = match mode {
        ModeArg::Uniform => ClosureMode::Uniform,
        ModeArg::Fitted => ClosureMode::MinimalGrowth,
    };
    let link = close_link(&config, p, mode)?;
    let mut report = link.report.clone();
    let table = HullTable::builtin();
    if let Ok(lb) = bounds::lower_bound_link(report.q, LowerBoundKind::TabulatedHull, &table, p) {
        report.lower_bound = Some(lb.length);
        report.lower_bound_kind = Some(format!("{:?}", lb.kind));
    }
    if settings.format == Format::Json {
        print_json(&report, settings.timestamp)?;
    } else {
        println!(
            "T({},{}): C={} L={:.2} ratio={:.4} major_radius={:.4} [{:?}]",
            report.p * report.q,
            report.q,
            report.crossing_number,
            report.total_length,
            report.ratio,
            report.major_radius,
            report.mode,
        );
        if let Some(lb) = report.lower_bound {
            println!(
                "lower bound: L >= {:.1} ({})",
                lb,
                report.lower_bound_kind.as_deref().unwrap_or("-")
            );
        }
    }
    if let Some(format) = export {
        let verts = if verts == 0 { settings.verts } else { verts };
        let polys = link.polylines(verts);
        let audit = verify_no_overlap(&polys, 2.0, 0.002);
        eprintln!(
            "overlap audit at {verts} verts/unit: min distance {:.5} ({})",
            audit.min_distance,
            if audit.pass { "pass" } else { "FAIL" }
        );
        std::fs::create_dir_all(&settings.out_dir)?;
        let stem = format!("t{}_{}", report.p * report.q, report.q);
        let path = match format {
            ExportFormat::Vect => {
                let path = settings.out_dir.join(format!("{stem}.vect"));
                export::write_vect_file(&path, &polys)?;
                path
            }
            ExportFormat::Obj => {
                let path = settings.out_dir.join(format!("{stem}.obj"));
                export::write_obj_file(&path, &polys)?;
                path
            }
        };
        eprintln!("wrote {}", path.display());
        if !audit.pass {
            return Ok(3);
        }
    }
    Ok(0)
}

fn cmd_bounds(
    q_spec: &str,
    mode: BoundsMode,
    hull_file: Option<&Path>,
    settings: &Settings,
) -> anyhow::Result<i32> {
    let range = parse_range(q_spec)?;
    if *range.start() < 2 {
        bail!(multihelix::Error::InvalidParameter("q >= 2".into()));
    }
    let table = match hull_file {
        Some(path) => HullTable::from_csv(path)?,
        None => HullTable::builtin(),
    };
    let kind = match mode {
        BoundsMode::Circular => LowerBoundKind::CircularAsymptotic,
        BoundsMode::Tabulated => LowerBoundKind::TabulatedHull,
    };
    let mut rows = Vec::new();
    for q in range {
        rows.push(bounds::lower_bound_link(q, kind, &table, 3)?);
    }
    if settings.format == Format::Json {
        return print_json(&rows, settings.timestamp).map(|_| 0);
    }
    let mut out = Table::new(&["q", "crossings", "length_lower", "ratio", "kind", "conjectural"]);
    for lb in &rows {
        out.row(vec![
            lb.q.to_string(),
            lb.crossing_number.to_string(),
            num(lb.length, 2),
            num(lb.ratio, 4),
            format!("{:?}", lb.kind),
            lb.conjectural.to_string(),
        ]);
    }
    out.print(settings.format);
    Ok(0)
}

fn cmd_verify() -> anyhow::Result<i32> {
    let results = acceptance::run_all();
    print!("{}", acceptance::format_matrix(&results));
    let all = results.iter().all(|r| r.passed());
    Ok(if all { 0 } else { 1 })
}
