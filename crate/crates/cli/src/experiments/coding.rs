use horodyn::group::{Element, Group};
use horodyn::horocode::{build_coding, gradient_ray_check, CodingParams, HoroCoding};

use super::Experiment;
use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::report::{Method, Report, Table};

/// Letter order with the finite-factor generators first.
fn factor_first(g: &Group) -> Result<Group> {
    let names = g.generators().names();
    let (finite, free): (Vec<&String>, Vec<&String>) =
        names.iter().partition(|n| n.starts_with('t'));
    let order: Vec<&String> = finite.into_iter().chain(free).collect();
    Ok(g.with_order(&order)?)
}

fn summarize(r: &mut Report, key: &str, c: &HoroCoding) -> Result<()> {
    let d = c.sft.communicating_classes();
    r.value(
        &format!("{key}_windows"),
        c.sft.allowed().len() as f64,
        Method::Exact,
    )
    .value(
        &format!("{key}_recurrent_classes"),
        d.component_sfts.len() as f64,
        Method::Exact,
    )
    .value(
        &format!("{key}_rays_checked"),
        gradient_ray_check(c, 6)? as f64,
        Method::Exact,
    );
    Ok(())
}

pub struct Layers;

impl Experiment for Layers {
    fn id(&self) -> &'static str {
        "A9"
    }

    fn title(&self) -> &'static str {
        "layers of the free-by-finite coding under two letter orders"
    }

    fn time_budget(&self) -> Option<f64> {
        Some(10.0)
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Report> {
        let g = cfg.group_or("product(free:2,cyclic:2)")?;
        let params = CodingParams::default();
        let last = build_coding(&g, &params, "exact")?;
        let first = build_coding(&factor_first(&g)?, &params, "exact")?;
        let mut r = Report::new(self.id(), self.title(), cfg);
        summarize(&mut r, "factor_last", &last)?;
        summarize(&mut r, "factor_first", &first)?;
        r.constants.r0 = Some(params.r0);
        r.constants.l0 = Some(params.l0);

        // factor letters last: the layer is carried along every transition
        let invariant = last
            .sft
            .allowed()
            .iter()
            .all(|w| last.layer(w[0]) == last.layer(w[1]));
        let split = last.sft.communicating_classes().component_sfts.len() == 2;

        // factor letters first: every successor sits in the identity layer
        let one = Element::Cyclic(0);
        let collapse = first
            .sft
            .allowed()
            .iter()
            .all(|w| first.layer(w[1]) == Some(&one));
        let d = first.sft.communicating_classes();
        let single = d.component_sfts.len() == 1
            && d.component_sfts[0]
                .1
                .allowed()
                .iter()
                .flatten()
                .all(|&s| first.layer(s) == Some(&one));

        let mut t = Table::new(Method::Exact, &["order", "symbol", "layer"]);
        for (k, c) in [(0.0, &last), (1.0, &first)] {
            for s in 0..c.sft.alphabet().len() as u16 {
                let layer = c
                    .layer(s)
                    .map_or(f64::NAN, |e| if *e == one { 0.0 } else { 1.0 });
                t.push(vec![k, s as f64, layer]);
            }
        }
        r.table("layers", t);
        r.check("factor last: layers preserved by every window", invariant)
            .check("factor last: one recurrent class per layer", split)
            .check(
                "factor first: successors collapse to the identity layer",
                collapse,
            )
            .check(
                "factor first: single recurrent class in the identity layer",
                single,
            )
            .check(
                "both codings pass the patch axioms",
                last.check_patches().is_ok() && first.check_patches().is_ok(),
            );
        Ok(r.finish())
    }
}

pub struct SphereLemmas;

impl Experiment for SphereLemmas {
    fn id(&self) -> &'static str {
        "A10"
    }

    fn title(&self) -> &'static str {
        "sphere embedding and cover for coded extensions"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Report> {
        let params = CodingParams::default();
        let free = build_coding(&cfg.group_or("free:2")?, &params, "exact")?;
        let ext = free.extension();
        let n_free = cfg.params.n_max.unwrap_or(8);
        let mut r = Report::new(self.id(), self.title(), cfg);

        let mut t = Table::new(
            Method::Exact,
            &["n", "preimages", "distinct_images", "cover_r", "cover_n"],
        );
        let (mut embeds, mut covers) = (true, true);
        for n in 1..=n_free {
            let (mut pre, mut distinct) = (0, 0);
            for s in free.sft.words(1) {
                let rep = ext.sphere_embedding_check(&s, n)?;
                embeds &= rep.pass;
                pre += rep.preimages;
                distinct += rep.distinct_images;
            }
            let cover = ext.sphere_cover_search(&[], n, 2, 2)?;
            let (cr, cn) = cover
                .found
                .map_or((f64::NAN, f64::NAN), |(a, b)| (a as f64, b as f64));
            covers &= cover.found == Some((0, 0));
            t.push(vec![n as f64, pre as f64, distinct as f64, cr, cn]);
        }
        r.table("free", t);

        let product = build_coding(
            &Group::from_spec("product(free:2,cyclic:2)")?,
            &params,
            "exact",
        )?;
        let pext = product.extension();
        let mut t = Table::new(Method::Exact, &["n", "symbol", "cover_r", "cover_n"]);
        let mut found = true;
        let (mut worst_r, mut worst_n) = (0, 0);
        for n in 1..=5 {
            for s in product.sft.words(1) {
                let rep = pext.sphere_cover_search(&s, n, 2, 2)?;
                match rep.found {
                    Some((a, b)) => {
                        worst_r = worst_r.max(a);
                        worst_n = worst_n.max(b);
                        t.push(vec![n as f64, s[0] as f64, a as f64, b as f64]);
                    }
                    None => {
                        found = false;
                        t.push(vec![n as f64, s[0] as f64, f64::NAN, f64::NAN]);
                    }
                }
            }
        }
        r.table("free_by_finite", t);
        r.value("free_by_finite_max_r", worst_r as f64, Method::Exact)
            .value("free_by_finite_max_n", worst_n as f64, Method::Exact);
        r.note("single-symbol cylinders of the free coding need R = 1: the first letter of g is fixed by the cylinder");
        r.check(
            format!("θ_n embeds every S(h₀, n) for n ≤ {n_free}"),
            embeds,
        )
        .check(
            format!("cover with (R, N) = (0, 0) for n ≤ {n_free}"),
            covers,
        )
        .check("free-by-finite covers with R ≤ 2, N ≤ 2 for n ≤ 5", found);
        Ok(r.finish())
    }
}
