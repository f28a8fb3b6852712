//! Subcommand bodies. Each returns the process exit code.

use std::fs;
use std::path::Path;

use horodyn::group::{Group, GrowthSeries};
use horodyn::horocode::{build_coding, CodingParams};
use horodyn::randwalk::return_probabilities;
use horodyn::sft::Sft;
use horodyn::subgroup::subgroup_from_spec;
use horodyn::transfer::{Potential, PotentialFile, TransferMatrix};
use horodyn::twisted::{
    growth_gap_report, rho_lambda, CodedSystem, GapConfig, SeedFunction, Verdict,
};
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::emit::{to_csv, to_json, Cell, Format, Output};
use crate::error::{CliError, Result};
use crate::experiments::ExperimentRegistry;
use crate::report::Outcome;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_str(&read(path)?).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })
}

pub fn growth(group: &str, radius: usize, bfs_radius: usize, out: &Output) -> Result<i32> {
    let g = Group::from_spec(group)?;
    let table = horodyn::group::BallTable::build_within(
        &g,
        radius.min(bfs_radius),
        horodyn::budget::MemBudget::from_env(),
    );
    let closed = g.sphere_counts(radius);
    let bfs = table.sphere_sizes();
    if bfs[..] != closed[..bfs.len()] {
        return Err(horodyn::Error::Consistency(format!(
            "breadth-first spheres {bfs:?} disagree with the closed form"
        ))
        .into());
    }
    let series = GrowthSeries::from_spheres(closed);
    match out.format() {
        Format::Csv => {
            let rows: Vec<Vec<Cell>> = (0..=radius)
                .map(|r| {
                    vec![
                        Cell::Int(r as u128),
                        Cell::Int(series.spheres[r]),
                        Cell::Int(series.balls[r]),
                    ]
                })
                .collect();
            out.write(&to_csv(&["r", "sphere", "ball"], &rows)?)?;
        }
        Format::Json => out.write(&to_json(&json!({
            "group": g.spec(),
            "bfs_radius": table.radius(),
            "spheres": series.spheres.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "omega_hat": {"value": series.omega_hat, "method": "estimate"},
            "c1_hat": {"value": series.c1_hat, "method": "estimate"},
            "omega": g.exact_growth_rate().map(|w| json!({"value": w, "method": "exact"})),
            "subexponential": series.subexponential,
        })))?,
    }
    Ok(0)
}

pub fn sft_scc(path: &Path, out: &Output) -> Result<i32> {
    let sft = Sft::from_json(&read(path)?)?;
    let d = sft.communicating_classes();
    out.write(&to_json(&d.to_json(&sft)))?;
    Ok(0)
}

pub struct HorocodeArgs<'a> {
    pub group: &'a str,
    pub order: Option<&'a str>,
    pub r0: usize,
    pub l0: usize,
    pub r_stab: Option<usize>,
    pub backend: &'a str,
}

pub fn horocode_build(args: &HorocodeArgs, out: &Output) -> Result<i32> {
    let mut g = Group::from_spec(args.group)?;
    if let Some(order) = args.order {
        let letters: Vec<&str> = order
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect();
        g = g.with_order(&letters)?;
    }
    let params = CodingParams {
        r0: args.r0,
        l0: args.l0,
        r_stab: args.r_stab,
    };
    let coding = build_coding(&g, &params, args.backend)?;
    out.write(&to_json(&coding.to_json()))?;
    Ok(0)
}

fn potential(sft: &Sft, spec: &str) -> Result<Potential> {
    match spec.split_once(':') {
        Some(("const", v)) => {
            let v: f64 = v.parse().map_err(|_| {
                CliError::config(format!("potential `{spec}`: `{v}` is not a number"))
            })?;
            Ok(Potential::constant(sft, v)?)
        }
        Some(("table", file)) => {
            let f: PotentialFile = read_json(Path::new(file))?;
            Ok(Potential::from_file(sft, &f)?)
        }
        _ => Err(CliError::config(format!(
            "potential `{spec}`: expected const:<value> or table:<file>"
        ))),
    }
}

fn rho_rows(rows: &[horodyn::transfer::RhoRow]) -> Vec<Vec<Cell>> {
    rows.iter()
        .map(|r| {
            vec![
                Cell::Int(r.n as u128),
                Cell::Float(r.sup_norm),
                Cell::Float(r.nth_root),
            ]
        })
        .collect()
}

pub fn rho(
    sft_path: &Path,
    potential_spec: &str,
    depth: Option<usize>,
    iters: usize,
    out: &Output,
) -> Result<i32> {
    let sft = Sft::from_json(&read(sft_path)?)?;
    let f = potential(&sft, potential_spec)?;
    let tm = match depth {
        Some(m) => TransferMatrix::new(&sft, &f, m)?,
        None => TransferMatrix::with_default_depth(&sft, &f)?,
    };
    let series = tm.rho_sup_norm(iters)?;
    match out.format() {
        Format::Csv => out.write(&to_csv(
            &["n", "sup_norm", "nth_root"],
            &rho_rows(&series.rows),
        )?)?,
        Format::Json => out.write(&to_json(&json!({
            "depth": tm.depth(),
            "dimension": tm.dim(),
            "series": series,
        })))?,
    }
    Ok(0)
}

pub struct RhoLambdaArgs<'a> {
    pub group: &'a str,
    pub subgroup: &'a str,
    pub trunc: usize,
    pub depth: Option<usize>,
    pub iters: usize,
    pub seed_radius: usize,
    pub backend: &'a str,
}

pub fn rho_lambda_cmd(args: &RhoLambdaArgs, out: &Output) -> Result<i32> {
    let g = Group::from_spec(args.group)?;
    let space = subgroup_from_spec(&g, args.subgroup)?;
    let sys = CodedSystem::new(&g, args.backend)?;
    let depth = args.depth.unwrap_or_else(|| sys.default_depth());
    let (tm, schreier) = sys.twisted(space.as_ref(), args.trunc, depth)?;
    let t = rho_lambda(
        &tm,
        &SeedFunction::new(&schreier, args.seed_radius),
        args.iters,
    )?;
    match out.format() {
        Format::Csv => out.write(&to_csv(&["n", "sup_norm", "nth_root"], &rho_rows(&t.rows))?)?,
        Format::Json => out.write(&to_json(&json!({
            "group": g.spec(),
            "subgroup": space.spec(),
            "radius": args.trunc,
            "depth": depth,
            "cosets": tm.cosets(),
            "dimension": tm.dim(),
            "estimate": {"value": t.estimate, "method": "estimate", "n": t.best_n},
            "lower_bound": {"value": t.lower_bound, "method": "certified-lower-bound"},
            "rows": t.rows,
        })))?,
    }
    Ok(0)
}

pub fn gap_report(group: &str, subgroup: &str, config: Option<&Path>, out: &Output) -> Result<i32> {
    let g = Group::from_spec(group)?;
    let cfg: GapConfig = match config {
        Some(p) => read_json(p)?,
        None => GapConfig::default(),
    };
    let rep = growth_gap_report(&g, subgroup, &cfg)?;
    if out.format() == Format::Csv {
        let rows: Vec<Vec<Cell>> = rep
            .curve
            .iter()
            .map(|r| {
                vec![
                    Cell::Int(r.radius as u128),
                    Cell::Int(r.depth as u128),
                    Cell::Float(r.estimate),
                    Cell::Int(r.best_n as u128),
                    Cell::Float(r.lower_bound),
                ]
            })
            .collect();
        out.write(&to_csv(
            &["radius", "depth", "estimate", "best_n", "lower_bound"],
            &rows,
        )?)?;
    } else {
        out.write(&to_json(&rep))?;
    }
    Ok(match rep.verdict {
        Verdict::Inconclusive => Outcome::Inconclusive.exit_code(),
        _ => 0,
    })
}

pub struct WalkArgs<'a> {
    pub group: &'a str,
    pub subgroup: &'a str,
    pub ell: usize,
    pub delta: usize,
    pub n_max: usize,
    pub trunc: Option<usize>,
}

pub fn walk(args: &WalkArgs, out: &Output) -> Result<i32> {
    let g = Group::from_spec(args.group)?;
    let space = subgroup_from_spec(&g, args.subgroup)?;
    let radius = args.trunc.unwrap_or((args.n_max * args.ell).div_ceil(2));
    let s = return_probabilities(&g, space.as_ref(), args.ell, args.delta, args.n_max, radius)?;
    let root = |n: usize, p: f64| if n == 0 { 1.0 } else { p.powf(1.0 / n as f64) };
    match out.format() {
        Format::Csv => {
            let rows: Vec<Vec<Cell>> =
                s.p.iter()
                    .zip(&s.exact)
                    .enumerate()
                    .map(|(n, (p, e))| {
                        vec![
                            Cell::Int(n as u128),
                            Cell::Float(*p),
                            Cell::Float(root(n, *p)),
                            Cell::Bool(*e),
                        ]
                    })
                    .collect();
            out.write(&to_csv(&["n", "p(n)", "root", "certified"], &rows)?)?;
        }
        Format::Json => out.write(&to_json(&s))?,
    }
    Ok(0)
}

pub fn experiment_run(config: &Path, out: Option<&Output>) -> Result<i32> {
    let cfg = ExperimentConfig::load(config)?;
    let started = std::time::Instant::now();
    let report = ExperimentRegistry::default().run(&cfg)?;
    eprintln!(
        "{} {} in {:.2} s",
        report.id,
        report.outcome,
        started.elapsed().as_secs_f64()
    );
    for name in report.failed_checks() {
        eprintln!("  failed: {name}");
    }
    let text = to_json(&report);
    match (out, &cfg.out) {
        (Some(o), _) => o.write(&text)?,
        (None, Some(p)) => crate::emit::write_file(p, &text)?,
        (None, None) => Output::Stdout(Format::Json).write(&text)?,
    }
    Ok(report.outcome.exit_code())
}

pub fn experiment_list() -> Result<i32> {
    let reg = ExperimentRegistry::default();
    for id in reg.ids() {
        let e = reg.get(id)?;
        println!("{id:<4} {}", e.title());
    }
    Ok(0)
}
