use std::collections::BTreeMap;

use horodyn::holder::holder_data;
use horodyn::sft::{Sft, SymWord};
use horodyn::transfer::{
    perron_data, renormalize, variation_bound, Potential, TransferMatrix, VariationConstants,
};
use proptest::prelude::*;

fn golden() -> Sft {
    Sft::new(
        vec!["0".into(), "1".into()],
        2,
        vec![vec![0, 0], vec![0, 1], vec![1, 0]],
    )
    .unwrap()
}

fn full(k: u16) -> Sft {
    let allowed = (0..k)
        .flat_map(|a| (0..k).map(move |b| vec![a, b]))
        .collect();
    Sft::new((0..k).map(|s| s.to_string()).collect(), 2, allowed).unwrap()
}

fn shifts() -> Vec<Sft> {
    vec![golden(), full(2), full(3)]
}

fn potential(sft: &Sft, depth: usize, raw: &[f64]) -> Potential {
    let table: BTreeMap<SymWord, f64> = sft
        .words(depth)
        .into_iter()
        .zip(raw.iter().cycle())
        .map(|(w, v)| (w, *v))
        .collect();
    Potential::table(sft, depth, &table).unwrap()
}

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(100)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn holder_sandwich(
        which in 0usize..3,
        m in 1usize..5,
        raw in prop::collection::vec(-3.0f64..3.0, 1..64),
        alpha in 0.1f64..1.5,
        log_r in -4.0f64..0.5,
    ) {
        let sft = &shifts()[which];
        let words = sft.words(m);
        let values: Vec<f64> = raw.iter().cycle().take(words.len()).copied().collect();
        let h = holder_data(&words, &values, alpha, Some(log_r.exp()));
        prop_assert!(h.sandwich_holds(), "{h:?}");
    }

    #[test]
    fn holder_norm_is_submultiplicative(
        which in 0usize..3,
        m in 1usize..5,
        a in prop::collection::vec(-3.0f64..3.0, 1..64),
        b in prop::collection::vec(-3.0f64..3.0, 1..64),
        alpha in 0.1f64..1.5,
    ) {
        let sft = &shifts()[which];
        let words = sft.words(m);
        let f: Vec<f64> = a.iter().cycle().take(words.len()).copied().collect();
        let g: Vec<f64> = b.iter().cycle().take(words.len()).copied().collect();
        let fg: Vec<f64> = f.iter().zip(&g).map(|(x, y)| x * y).collect();
        let lhs = holder_data(&words, &fg, alpha, None).norm;
        let rhs = holder_data(&words, &f, alpha, None).norm * holder_data(&words, &g, alpha, None).norm;
        prop_assert!(lhs <= rhs * (1.0 + 1e-12) + 1e-15, "{lhs} > {rhs}");
    }

    #[test]
    fn variation_inequality(
        which in 0usize..3,
        f_depth in 1usize..3,
        raw in prop::collection::vec(0.05f64..2.0, 1..16),
        phi_raw in prop::collection::vec(-1.0f64..1.0, 1..64),
        extra in 0usize..2,
        n in 1usize..5,
        alpha in 0.2f64..1.0,
    ) {
        let sft = &shifts()[which];
        let f = potential(sft, f_depth, &raw).with_alpha(alpha).unwrap();
        let m = sft.memory().max(f_depth) + extra;
        let tm = TransferMatrix::new(sft, &f, m).unwrap();
        let phi: Vec<f64> = phi_raw.iter().cycle().take(tm.dim()).copied().collect();
        let consts = VariationConstants::for_sft(sft, alpha, 1);
        let b = variation_bound(sft, &f, &tm, &consts, &phi, n);
        prop_assert!(b.holds, "{b:?}");
    }

    #[test]
    fn renormalized_operator_is_stochastic(
        f_depth in 1usize..4,
        raw in prop::collection::vec(0.05f64..3.0, 1..16),
    ) {
        let sft = golden();
        let f = potential(&sft, f_depth, &raw);
        let tm = TransferMatrix::with_default_depth(&sft, &f).unwrap();
        let pd = perron_data(&tm, 1e-12).unwrap();
        let g = renormalize(&sft, &f, &tm, &pd).unwrap();
        let tg = TransferMatrix::with_default_depth(&sft, &g).unwrap();
        let ones = tg.apply(&vec![1.0; tg.dim()]);
        for v in ones {
            prop_assert!((v - 1.0).abs() < 1e-10, "{v}");
        }
    }

    #[test]
    fn spectral_radius_methods_agree(
        which in 0usize..3,
        raw in prop::collection::vec(0.1f64..2.0, 1..16),
    ) {
        let sft = &shifts()[which];
        let f = potential(sft, 2, &raw);
        let tm = TransferMatrix::with_default_depth(sft, &f).unwrap();
        let pd = perron_data(&tm, 1e-12).unwrap();
        let series = tm.rho_sup_norm(300).unwrap();
        prop_assert!((series.estimate - pd.rho).abs() < 1e-6 * pd.rho, "{} vs {}", series.estimate, pd.rho);
        prop_assert!(series.lower_bound <= pd.rho * (1.0 + 1e-9));
    }
}
