use horodyn::group::Group;
use horodyn::subgroup::{subgroup_from_spec, SchreierGraph};
use horodyn::transfer::VariationConstants;
use horodyn::twisted::{
    growth_gap_report, operator_bound, rho_lambda, seed_bound_check, twisted_variation_bound,
    CodedSystem, GapConfig, SeedFunction, TwistedMatrix, Verdict,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn free2() -> (Group, CodedSystem) {
    let g = Group::from_spec("free:2").unwrap();
    let sys = CodedSystem::new(&g, "exact").unwrap();
    (g, sys)
}

/// Dense power iteration on the explicit matrix, as an oracle for the
/// implicit product.
#[test]
fn implicit_product_matches_explicit_matrix() {
    let (g, sys) = free2();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for sub in ["trivial", "ker-ab", "ker-mod:3"] {
        let h = subgroup_from_spec(&g, sub).unwrap();
        let (tm, _) = sys.twisted(h.as_ref(), 3, 2).unwrap();
        let csr = tm.to_csr();
        let v: Vec<f64> = (0..tm.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let a = tm.apply(&v);
        let b = csr.matvec(&v);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-14, "{sub}");
        }
        assert!(csr.row_sums().iter().all(|s| *s <= 1.0 + 1e-15));
    }
}

#[test]
fn tree_plateau_at_radius_twelve() {
    let (g, sys) = free2();
    let h = subgroup_from_spec(&g, "trivial").unwrap();
    let scan = sys.scan(h.as_ref(), &[10, 11, 12], &[2], 0, 60).unwrap();
    let last = scan.rows.last().unwrap();
    assert!((last.estimate - 3f64.powf(-0.5)).abs() < 1e-2);
    assert!((scan.rows[1].estimate - last.estimate).abs() < 1e-3);
    assert!(scan.monotone_in_radius);
}

#[test]
fn kernel_of_abelianization_approaches_one() {
    let (g, sys) = free2();
    let h = subgroup_from_spec(&g, "ker-ab").unwrap();
    let scan = sys.scan(h.as_ref(), &[10, 20, 30], &[2], 0, 120).unwrap();
    assert!(scan.monotone_in_radius);
    let last = scan.rows.last().unwrap();
    assert!(last.estimate >= 0.95, "{:?}", scan.rows);
    assert!(scan.rows.iter().all(|r| r.estimate <= 1.0 + 1e-9));
}

#[test]
fn twisted_operator_is_bounded_by_untwisted() {
    let (g, sys) = free2();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for sub in ["trivial", "ker-ab", "whole"] {
        let h = subgroup_from_spec(&g, sub).unwrap();
        let (tm, _) = sys.twisted(h.as_ref(), 4, 3).unwrap();
        for _ in 0..10 {
            let phi: Vec<f64> = (0..tm.dim()).map(|_| rng.gen_range(-2.0..2.0)).collect();
            for n in 1..=5 {
                let (lhs, rhs) = operator_bound(&tm, &phi, n);
                assert!(lhs <= rhs * (1.0 + 1e-12), "{sub} n={n}: {lhs} > {rhs}");
            }
        }
    }
}

#[test]
fn twisted_variation_inequality() {
    let (g, sys) = free2();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let consts = VariationConstants::for_sft(sys.sft(), 0.5, 1);
    for sub in ["trivial", "ker-ab"] {
        let h = subgroup_from_spec(&g, sub).unwrap();
        let (tm, _) = sys.twisted(h.as_ref(), 3, 3).unwrap();
        for _ in 0..5 {
            let phi: Vec<f64> = (0..tm.dim()).map(|_| rng.gen_range(0.0..1.0)).collect();
            for n in 1..=3 {
                let b = twisted_variation_bound(sys.sft(), &sys.potential, &tm, &consts, &phi, n);
                assert!(b.holds, "{sub}: {b:?}");
            }
        }
    }
}

#[test]
fn seed_bound_up_to_eight() {
    let (g, sys) = free2();
    for sub in ["trivial", "ker-ab"] {
        let h = subgroup_from_spec(&g, sub).unwrap();
        let rep = seed_bound_check(&sys, h.as_ref(), 8, 4).unwrap();
        assert_eq!(rep.cover, (1, 0));
        assert!(rep.pass, "{sub}: {rep:?}");
    }
}

#[test]
fn estimates_never_exceed_rho() {
    let (g, sys) = free2();
    for sub in ["trivial", "ker-ab", "ker-mod:2", "whole"] {
        let h = subgroup_from_spec(&g, sub).unwrap();
        let scan = sys.scan(h.as_ref(), &[2, 4, 6], &[2, 3], 0, 40).unwrap();
        for r in &scan.rows {
            assert!(
                r.estimate <= 1.0 + 1e-9 && r.lower_bound <= r.estimate + 1e-9,
                "{sub}: {r:?}"
            );
        }
    }
}

#[test]
fn seed_outside_the_ball_is_rejected() {
    let (g, sys) = free2();
    let h = subgroup_from_spec(&g, "trivial").unwrap();
    let schreier = SchreierGraph::build(&g, h.as_ref(), 2).unwrap();
    let tm = TwistedMatrix::new(&sys.ext, &sys.potential, h.as_ref(), &schreier, 2).unwrap();
    let empty = SeedFunction {
        radius: 0,
        support: Vec::new(),
    };
    assert!(rho_lambda(&tm, &empty, 5).is_err());
}

#[test]
fn gap_report_verdicts() {
    let g = Group::from_spec("free:2").unwrap();
    let whole = growth_gap_report(
        &g,
        "whole",
        &GapConfig {
            radii: vec![2, 3, 4],
            n_max: 30,
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(whole.verdict, Verdict::ConsistentAmenable);
    assert!((whole.omega_h - whole.omega_g).abs() < 1e-12);

    let tree = growth_gap_report(
        &g,
        "trivial",
        &GapConfig {
            radii: vec![8, 9, 10],
            n_max: 40,
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(tree.verdict, Verdict::ConsistentGap);
    assert_eq!(tree.omega_h, 0.0);
    assert!((tree.lower_bound - 1.0 / 3.0).abs() < 1e-12);
    assert!(tree.plateau.unwrap() >= tree.lower_bound);

    let ab = growth_gap_report(
        &g,
        "ker-ab",
        &GapConfig {
            radii: vec![10, 20, 30],
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(ab.verdict, Verdict::ConsistentAmenable);
    assert!(ab.folner_ratio < tree.folner_ratio);
}
