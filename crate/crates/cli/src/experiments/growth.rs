use horodyn::budget::MemBudget;
use horodyn::group::{BallTable, Group, GrowthSeries};
use horodyn::randwalk::subgroup_sphere_counts;
use horodyn::subgroup::subgroup_from_spec;

use super::Experiment;
use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::report::{Method, Report, Table};
use crate::tolerances::*;

/// Sphere sizes by breadth-first search as far as the budget and
/// `bfs_radius` allow, checked against the backend's closed form.
fn checked_counts(g: &Group, r: usize, bfs_radius: usize) -> (Vec<u128>, usize, bool) {
    let table = BallTable::build_within(g, r.min(bfs_radius), MemBudget::from_env());
    let closed = g.sphere_counts(r);
    let bfs = table.sphere_sizes();
    let agree = bfs[..] == closed[..bfs.len()];
    (closed, table.radius(), agree)
}

/// 2k(2k − 1)^{n−1}.
fn free_sphere(k: usize, n: usize) -> u128 {
    if n == 0 {
        1
    } else {
        2 * k as u128 * (2 * k as u128 - 1).pow(n as u32 - 1)
    }
}

fn growth_table(series: &GrowthSeries) -> Table {
    let mut t = Table::new(Method::Exact, &["r", "sphere", "ball"]);
    for (r, (s, b)) in series.spheres.iter().zip(&series.balls).enumerate() {
        t.push(vec![r as f64, *s as f64, *b as f64]);
    }
    t
}

pub struct GrowthRate;

impl Experiment for GrowthRate {
    fn id(&self) -> &'static str {
        "A2"
    }

    fn title(&self) -> &'static str {
        "growth rate and sphere sizes of the free group"
    }

    fn time_budget(&self) -> Option<f64> {
        Some(30.0)
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Report> {
        let g = cfg.group_or("free:2")?;
        let radius = cfg.params.radius.unwrap_or(20);
        let tol = cfg.params.tol.unwrap_or(GROWTH_WINDOW);
        let (counts, bfs_radius, agree) =
            checked_counts(&g, radius, cfg.params.bfs_radius.unwrap_or(12));
        let series = GrowthSeries::from_spheres(counts);
        let mut r = Report::new(self.id(), self.title(), cfg);
        r.table("growth", growth_table(&series));
        r.value("omega_hat", series.omega_hat, Method::Estimate)
            .value("bfs_radius", bfs_radius as f64, Method::Exact);
        r.check(
            format!("breadth-first spheres match the closed form to r = {bfs_radius}"),
            agree,
        );
        if let Some(w) = g.exact_growth_rate() {
            r.value("omega", w, Method::Exact);
            r.check("|ω̂ − ω| ≤ 0.02", (series.omega_hat - w).abs() <= tol);
        }
        if let Some(k) = g.free_rank() {
            let ok = (0..=radius).all(|n| series.spheres[n] == free_sphere(k, n));
            r.check("|S(n)| = 2k(2k − 1)^{n−1}", ok);
        }
        Ok(r.finish())
    }
}

pub struct Coornaert;

impl Experiment for Coornaert {
    fn id(&self) -> &'static str {
        "A3"
    }

    fn title(&self) -> &'static str {
        "Coornaert bounds on ball sizes"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Report> {
        let g = cfg.group_or("free:2")?;
        let radius = cfg.params.radius.unwrap_or(15);
        let (counts, bfs_radius, agree) =
            checked_counts(&g, radius, cfg.params.bfs_radius.unwrap_or(12));
        let series = GrowthSeries::from_spheres(counts);
        let mut r = Report::new(self.id(), self.title(), cfg);
        let mut t = Table::new(Method::Estimate, &["r", "ball", "lower", "upper"]);
        for (i, b) in series.balls.iter().enumerate() {
            let e = (series.omega_hat * i as f64).exp();
            t.push(vec![i as f64, *b as f64, e, series.c1_hat * e]);
        }
        r.table("sandwich", t);
        r.value("omega_hat", series.omega_hat, Method::Estimate)
            .value("c1_hat", series.c1_hat, Method::Estimate)
            .value("bfs_radius", bfs_radius as f64, Method::Exact);
        r.constants.c1 = Some(series.c1_hat);
        r.check(
            format!("breadth-first spheres match the closed form to r = {bfs_radius}"),
            agree,
        )
        .check(
            "e^{ω̂r} ≤ |B(r)| ≤ Ĉ₁e^{ω̂r}",
            series.coornaert_holds(COORNAERT_SLACK),
        );
        // |B(r)| = (k(2k − 1)^r − 1)/(k − 1) < (k/(k − 1))e^{ωr}
        if let Some(k) = g.free_rank().filter(|&k| k >= 2) {
            let limit = k as f64 / (k as f64 - 1.0);
            r.check(
                format!("Ĉ₁ ≤ {limit} + 1e-12"),
                series.c1_hat <= limit + COORNAERT_SLACK,
            );
        }
        Ok(r.finish())
    }
}

pub struct KernelGrowth;

impl Experiment for KernelGrowth {
    fn id(&self) -> &'static str {
        "A15"
    }

    fn title(&self) -> &'static str {
        "growth of the abelianization kernel"
    }

    fn time_budget(&self) -> Option<f64> {
        Some(60.0)
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Report> {
        let g = cfg.group_or("free:2")?;
        let h = subgroup_from_spec(&g, cfg.subgroup_or("ker-ab"))?;
        let n_max = cfg.params.n_max.unwrap_or(30);
        let start = cfg.params.radius.unwrap_or(10).min(n_max);
        let fraction = cfg.params.tol.unwrap_or(KERNEL_GROWTH_FRACTION);
        let counts = subgroup_sphere_counts(&g, h.as_ref(), n_max)?;
        let omega = g
            .exact_growth_rate()
            .unwrap_or_else(|| GrowthSeries::exact(&g, n_max).omega_hat);
        let mut r = Report::new(self.id(), self.title(), cfg);
        let mut t = Table::new(Method::Exact, &["n", "count", "rate"]);
        let mut rates = Vec::new();
        for (n, &c) in counts.iter().enumerate().skip(1) {
            let rate = if c > 0 {
                (c as f64).ln() / n as f64
            } else {
                f64::NEG_INFINITY
            };
            t.push(vec![n as f64, c as f64, rate]);
            if n >= start && c > 0 {
                rates.push(rate);
            }
        }
        r.table("counts", t);
        let last = rates.last().copied().unwrap_or(f64::NEG_INFINITY);
        r.value("rate", last, Method::Exact)
            .value("omega_g", omega, Method::Exact)
            .value("fraction", last / omega, Method::Exact);
        r.note("the kernel is co-amenable, so its growth rate equals that of the free group");
        r.check(
            format!("(1/n) ln |N ∩ S(n)| ≥ {fraction}·ω at n = {n_max}"),
            counts[n_max] > 0 && last >= fraction * omega,
        )
        .check(
            format!("nondecreasing over nonzero n in [{start}, {n_max}]"),
            rates.windows(2).all(|w| w[1] >= w[0]),
        );
        Ok(r.finish())
    }
}
