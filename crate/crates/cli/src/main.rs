use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mandelcomb::address::{
    angled_address_of_angle, is_purely_narrow, long_address, renormalization, side_of_ray, RenormalizationReport,
};
use mandelcomb::components::{ray_pair_of, visible_components};
use mandelcomb::kneading::{internal_address_of, kneading_of_angle, upper_lower};
use mandelcomb::monodromy::{group_report, preperiodic_report, zero_reduction_path, DEFAULT_ENUMERATE_LIMIT};
use mandelcomb::{
    Angle, Angle64, AngleInt, AngleNotation, BinaryAngle, ComponentTree, Error, HyperbolicComponent, InternalAddress,
    InternalAngle, Itinerary, RayPair,
};
use serde::Serialize;
use serde_json::json;

mod svg;

const MAX_ENUMERATED_PERIOD: usize = 24;

#[derive(Parser)]
#[command(name = "mandelcomb", version, about = "Exact combinatorics of the Mandelbrot set")]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Angled internal address of the parameter ray at an angle.
    Address {
        angle: String,
        #[arg(long, env = "MANDELCOMB_CUTOFF", default_value_t = 64)]
        cutoff: usize,
    },
    /// Kneading sequence of an angle, with both resolutions when periodic.
    Kneading { angle: String },
    /// The other angle of the periodic ray pair containing an angle.
    Conjugate { angle: String },
    /// Whether a periodic angle is the lower or upper ray of its pair.
    Side { angle: String },
    /// All periodic ray pairs up to a period.
    Pairs { max_period: usize },
    /// Hyperbolic components up to a period, nested by wake.
    Tree {
        max_period: usize,
        /// Also write the lamination as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Components visible from a narrow component in one of its subwakes.
    Visible {
        /// Either angle of the root of the narrow component (0 for the main cardioid).
        root: String,
        /// Internal angle p/q of the subwake.
        angle: String,
    },
    /// Renormalization periods read off an internal address.
    Renorm {
        /// An angle (a/b or binary) or an internal address such as 1-2-4.
        target: String,
        #[arg(long, env = "MANDELCOMB_CUTOFF", default_value_t = 64)]
        cutoff: usize,
    },
    /// Whether the component with this internal address is purely narrow.
    Narrow { address: String },
    /// All periodic ray pairs separating a component from the origin.
    LongAddress {
        address: String,
        #[arg(long, env = "MANDELCOMB_CUTOFF")]
        cutoff: usize,
    },
    /// Monodromy group of the periodic points of exact period n.
    Monodromy {
        n: usize,
        #[arg(long, default_value_t = DEFAULT_ENUMERATE_LIMIT)]
        enumerate_limit: u64,
    },
    /// Monodromy group of the preperiodic points of preperiod k and period n.
    MonodromyPreperiodic {
        k: usize,
        n: usize,
        #[arg(long, default_value_t = DEFAULT_ENUMERATE_LIMIT)]
        enumerate_limit: u64,
    },
    /// Loops at narrow roots moving a periodic point to the orbit with one 0.
    ZeroPath { itinerary: String },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Lib(#[from] Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(e) if e.is_syntax() => 2,
            _ => 1,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("values serialize");
    s.push('\n');
    s
}

fn parse_angle(text: &str) -> CliResult<(Angle, AngleNotation)> {
    Ok(Angle::parse_with_notation(text)?)
}

/// The same angle on a `u64` backing when its denominator allows fast
/// enumeration.
fn small(theta: &Angle) -> Option<Angle64> {
    let num = u64::try_from(theta.numerator()).ok()?;
    let den = u64::try_from(theta.denominator()).ok()?;
    (den < 1 << 32).then(|| Angle64::from_u64(num, den).expect("positive"))
}

fn check_period(max_period: usize) -> CliResult<()> {
    if max_period == 0 || max_period > MAX_ENUMERATED_PERIOD {
        return Err(Error::InvalidArgument(format!(
            "period must be between 1 and {MAX_ENUMERATED_PERIOD}, got {max_period}"
        ))
        .into());
    }
    Ok(())
}

fn run(cli: &Cli) -> CliResult<String> {
    match &cli.command {
        Command::Address { angle, cutoff } => {
            let (theta, _) = parse_angle(angle)?;
            let addr = angled_address_of_angle(&theta, *cutoff)?;
            Ok(if cli.json { to_json(&addr) } else { format!("{addr}\n") })
        }
        Command::Kneading { angle } => {
            let (theta, _) = parse_angle(angle)?;
            let nu = kneading_of_angle(&theta);
            let resolutions = if nu.is_star_periodic() { Some(upper_lower(&nu)?) } else { None };
            if cli.json {
                let (upper, lower) = resolutions.map(|(a, b)| (Some(a), Some(b))).unwrap_or((None, None));
                return Ok(to_json(&json!({ "angle": theta, "kneading": nu, "upper": upper, "lower": lower })));
            }
            let mut out = format!("{nu}\n");
            if let Some((a, abar)) = resolutions {
                writeln!(out, "A = {a}\nĀ = {abar}").unwrap();
            }
            Ok(out)
        }
        Command::Conjugate { angle } => {
            let (theta, notation) = parse_angle(angle)?;
            let other = match small(&theta) {
                Some(x) => {
                    let y = mandelcomb::components::conjugate_angle(&x)?;
                    Angle::from_u64(*y.numerator(), *y.denominator())?
                }
                None => mandelcomb::components::conjugate_angle(&theta)?,
            };
            if cli.json {
                let period = theta.orbit_type().period;
                return Ok(to_json(&json!({ "angle": theta, "conjugate": other, "period": period })));
            }
            Ok(format!("{}\n", other.format(notation)))
        }
        Command::Side { angle } => {
            let (theta, _) = parse_angle(angle)?;
            let side = side_of_ray(&theta)?;
            Ok(if cli.json {
                to_json(&json!({ "angle": theta, "side": side }))
            } else {
                format!("{side}\n")
            })
        }
        Command::Pairs { max_period } => {
            check_period(*max_period)?;
            let pairs = mandelcomb::components::lavaurs_pairs::<u64>(*max_period);
            if cli.json {
                return Ok(to_json(&pairs));
            }
            let mut out = String::new();
            for p in &pairs {
                writeln!(out, "{} {p}", p.period()).unwrap();
            }
            Ok(out)
        }
        Command::Tree { max_period, svg } => {
            check_period(*max_period)?;
            let tree = ComponentTree::<u64>::new(*max_period);
            if let Some(path) = svg {
                std::fs::write(path, svg::lamination(&tree)).map_err(|source| CliError::Io {
                    path: path.clone(),
                    source,
                })?;
            }
            tree_output(&tree, cli.json)
        }
        Command::Visible { root, angle } => {
            let (theta, _) = parse_angle(root)?;
            let angle: InternalAngle = angle.parse()?;
            match small(&theta) {
                Some(x) => visible_output(&x, angle, cli.json),
                None => visible_output(&theta, angle, cli.json),
            }
        }
        Command::Renorm { target, cutoff } => {
            let addr = address_or_angle(target, *cutoff)?;
            let report = renormalization(&addr);
            Ok(if cli.json {
                to_json(&json!({ "address": addr, "renormalization": report }))
            } else {
                renorm_text(&addr, &report)
            })
        }
        Command::Narrow { address } => {
            let addr: InternalAddress = address.parse()?;
            let narrow = is_purely_narrow(&addr)?;
            Ok(if cli.json {
                to_json(&json!({ "address": addr, "purely_narrow": narrow }))
            } else if narrow {
                format!("{addr} is purely narrow\n")
            } else {
                format!("{addr} is not purely narrow\n")
            })
        }
        Command::LongAddress { address, cutoff } => {
            let addr: InternalAddress = address.parse()?;
            let entries = long_address(&addr, *cutoff)?;
            if cli.json {
                return Ok(to_json(&entries));
            }
            let periods: Vec<String> = entries.iter().map(|e| e.period.to_string()).collect();
            let mut out = format!("{}\n", periods.join("-"));
            for e in &entries {
                writeln!(out, "{:>4}  {}", e.period, e.kneading).unwrap();
            }
            Ok(out)
        }
        Command::Monodromy { n, enumerate_limit } => {
            if *n == 0 || *n > 16 {
                return Err(Error::InvalidArgument(format!("period must be between 1 and 16, got {n}")).into());
            }
            let r = group_report(*n, *enumerate_limit)?;
            if cli.json {
                return Ok(to_json(&r));
            }
            let mut out = String::new();
            writeln!(out, "period               {}", r.n).unwrap();
            writeln!(out, "points               {}", r.point_count).unwrap();
            writeln!(out, "orbits               {}", r.orbit_count).unwrap();
            writeln!(out, "generators           {}", r.generator_count).unwrap();
            writeln!(out, "order                {}", r.order).unwrap();
            writeln!(out, "centralizer order    {}", r.centralizer_order).unwrap();
            writeln!(out, "transitive on points {}", r.transitive_on_points).unwrap();
            writeln!(out, "transitive on orbits {}", r.transitive_on_orbits).unwrap();
            writeln!(out, "image full           {}", r.image_full).unwrap();
            writeln!(out, "kernel full          {}", r.kernel_full).unwrap();
            Ok(out)
        }
        Command::MonodromyPreperiodic { k, n, enumerate_limit } => {
            if *n == 0 || *n > 8 || *k == 0 || *k > 8 {
                return Err(Error::InvalidArgument(format!("need 1 <= k, n <= 8, got k = {k}, n = {n}")).into());
            }
            let r = preperiodic_report(*k, *n, *enumerate_limit)?;
            if cli.json {
                return Ok(to_json(&r));
            }
            let mut out = String::new();
            writeln!(out, "preperiod            {}", r.k).unwrap();
            writeln!(out, "period               {}", r.n).unwrap();
            writeln!(out, "points               {}", r.point_count).unwrap();
            writeln!(out, "generators           {}", r.generator_count).unwrap();
            writeln!(out, "order                {}", r.order).unwrap();
            writeln!(out, "centralizer order    {}", r.centralizer_order).unwrap();
            writeln!(out, "generators commute   {}", r.all_commute).unwrap();
            Ok(out)
        }
        Command::ZeroPath { itinerary } => {
            let tau: Itinerary = itinerary.parse()?;
            if tau.period() > MAX_ENUMERATED_PERIOD {
                return Err(Error::InvalidArgument(format!("period {} is too large", tau.period())).into());
            }
            let steps = zero_reduction_path(&tau)?;
            if cli.json {
                return Ok(to_json(&steps));
            }
            let mut out = String::new();
            for s in &steps {
                writeln!(out, "{} -> {} at {}", s.from, s.to, s.pair).unwrap();
            }
            if steps.is_empty() {
                writeln!(out, "{tau} is already on the orbit with a single 0").unwrap();
            }
            Ok(out)
        }
    }
}

fn address_or_angle(target: &str, cutoff: usize) -> CliResult<InternalAddress> {
    let t = target.trim();
    if t.contains('/') || t.contains('.') || t == "0" {
        let (theta, _) = parse_angle(t)?;
        Ok(internal_address_of(&kneading_of_angle(&theta), cutoff)?)
    } else {
        Ok(t.parse()?)
    }
}

fn renorm_text(addr: &InternalAddress, report: &RenormalizationReport) -> String {
    let simple: Vec<String> = report.simple.iter().map(|m| m.to_string()).collect();
    let crossed: Vec<String> = report.crossed.iter().map(|(m, n)| format!("({m}, {n})")).collect();
    let list = |v: &[String]| if v.is_empty() { "none".to_string() } else { v.join(", ") };
    format!("address {addr}\nsimple  {}\ncrossed {}\n", list(&simple), list(&crossed))
}

#[derive(Serialize)]
struct TreeRow {
    index: usize,
    parent: Option<usize>,
    pair: RayPair<u64>,
    width: String,
    narrow: bool,
    address: mandelcomb::AngledInternalAddress,
}

fn tree_output(tree: &ComponentTree<u64>, json: bool) -> CliResult<String> {
    let mut rows = Vec::with_capacity(tree.len());
    for i in 0..tree.len() {
        let node = tree.node(i);
        rows.push(TreeRow {
            index: i,
            parent: node.parent,
            pair: node.pair.clone(),
            width: node.pair.width().to_string(),
            narrow: node.pair.is_narrow(),
            address: tree.component(i)?.angled_address,
        });
    }
    if json {
        return Ok(to_json(&rows));
    }
    let mut out = String::new();
    let mut stack = vec![(0usize, 0usize)];
    while let Some((i, depth)) = stack.pop() {
        let r = &rows[i];
        writeln!(
            out,
            "{}{} period {} width {}{} {}",
            "  ".repeat(depth),
            r.pair,
            r.pair.period(),
            r.width,
            if r.narrow { " narrow" } else { "" },
            r.address
        )
        .unwrap();
        for &c in tree.node(i).children.iter().rev() {
            stack.push((c, depth + 1));
        }
    }
    Ok(out)
}

fn visible_output<T: AngleInt>(theta: &BinaryAngle<T>, angle: InternalAngle, json: bool) -> CliResult<String> {
    let root = if theta.is_zero() { RayPair::seed() } else { ray_pair_of(theta)? };
    let visible = visible_components(&root, angle)?;
    if json {
        return Ok(to_json(&json!({ "root": root, "angle": angle, "visible": visible })));
    }
    let base = HyperbolicComponent::from_pair(root.clone())?;
    let mut out = format!("{angle}-subwake of {} {root}\n", base.angled_address);
    for v in &visible {
        writeln!(
            out,
            "{:>4}  {}  {}{}",
            v.component.period(),
            v.component.root,
            v.component.angled_address,
            if v.narrow { "  narrow" } else { "" }
        )
        .unwrap();
    }
    Ok(out)
}
