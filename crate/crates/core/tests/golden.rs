//! Golden values for the bundled ten-actor example project.
//!
//! Published table values are asserted at the tolerance their rounding allows. Values marked
//! "oracle" come from the independent NumPy implementation in `tests/oracle/pipeline.py` and are
//! frozen here.

use approx::assert_abs_diff_eq;
use trpn_core::convergence::{convergence_divergence, scale_positions};
use trpn_core::fixtures::example_project;
use trpn_core::fmea::tprpn;
use trpn_core::influence::{
    compute_midi, net_dependence, net_influence, normalized_power, power_coefficient, power_coefficients,
};
use trpn_core::scenario::{apply_scenario, compare_scenarios, ActorStatus, Scenario};
use trpn_core::{analyze, ActorId, TreatmentAction};

const MIDI: [[u32; 10]; 10] = [
    [2, 0, 2, 2, 1, 1, 0, 0, 1, 2],
    [2, 1, 4, 5, 3, 3, 1, 0, 4, 2],
    [3, 3, 6, 6, 4, 3, 3, 2, 5, 4],
    [3, 3, 4, 6, 3, 3, 2, 2, 4, 4],
    [2, 5, 4, 6, 6, 4, 4, 3, 4, 3],
    [1, 5, 3, 6, 7, 4, 4, 2, 4, 3],
    [3, 6, 4, 7, 6, 5, 3, 2, 4, 2],
    [4, 6, 4, 5, 6, 5, 5, 2, 4, 4],
    [6, 1, 7, 5, 4, 4, 2, 2, 4, 2],
    [3, 3, 4, 5, 5, 5, 3, 3, 6, 2],
];

const MCDV: [[f64; 10]; 10] = [
    [0.05, -0.04, 0.0, -0.12, -0.17, -0.06, 0.0, 0.12, 0.0, -0.16],
    [-0.04, 0.22, -0.16, 0.06, 0.0, -0.08, 0.0, 0.15, 0.12, 0.19],
    [0.0, -0.16, 0.67, 0.0, 0.0, 0.21, 0.27, -0.58, -0.14, 0.0],
    [-0.12, 0.067, 0.0, 0.19, 0.21, 0.09, 0.0, -0.14, 0.0, 0.19],
    [-0.18, 0.0, 0.0, 0.21, 0.31, 0.0, 0.0, 0.0, 0.0, 0.0],
    [-0.07, -0.09, 0.21, 0.09, 0.0, 0.36, 0.0, -0.51, -0.17, 0.21],
    [0.0, 0.0, 0.27, 0.0, 0.0, 0.0, 0.33, 0.0, 0.0, 0.0],
    [0.12, 0.16, -0.58, -0.14, 0.0, -0.51, 0.0, 0.89, 0.28, -0.27],
    [0.0, 0.12, -0.14, 0.0, 0.0, -0.17, 0.0, 0.28, 0.1, 0.0],
    [-0.16, 0.19, 0.0, 0.19, 0.0, 0.21, 0.0, -0.27, 0.0, 0.31],
];

fn id(s: &str) -> ActorId {
    ActorId::from(s)
}

#[test]
fn midi_matches_published_table() {
    let p = example_project();
    let midi = compute_midi(&p.influence).unwrap();
    for (a, row) in MIDI.iter().enumerate() {
        assert_eq!(midi.row(a), row, "row {a}");
    }
    let influence: Vec<u32> = (0..10).map(|a| net_influence(&midi, a)).collect();
    let dependence: Vec<u32> = (0..10).map(|a| net_dependence(&midi, a)).collect();
    assert_eq!(influence, [9, 24, 33, 28, 35, 35, 39, 43, 33, 37]);
    assert_eq!(dependence, [27, 32, 36, 47, 39, 33, 24, 16, 36, 26]);
    assert_eq!(influence.iter().sum::<u32>(), 316);
    assert_eq!(dependence.iter().sum::<u32>(), 316);
}

#[test]
fn power_coefficients_match() {
    let midi = compute_midi(&example_project().influence).unwrap();
    let r1: f64 = power_coefficient(&midi, 0).unwrap();
    assert_abs_diff_eq!(r1, 7.0 / 316.0 * 9.0 / 36.0, epsilon = 1e-15);
    assert_abs_diff_eq!(r1, 0.00553, epsilon = 5e-5);

    let r: Vec<f64> = power_coefficients(&midi).unwrap();
    assert_abs_diff_eq!(r.iter().sum::<f64>(), 0.47151, epsilon = 5e-5);
    // oracle: (41/316) * (43/59)
    assert_abs_diff_eq!(r[7], 41.0 / 316.0 * 43.0 / 59.0, epsilon = 1e-15);
    assert_abs_diff_eq!(r[7], 0.09457, epsilon = 1e-4);

    let r_star = normalized_power(&r).unwrap();
    assert_abs_diff_eq!(r_star[0], 0.12, epsilon = 5e-3);
    // oracle
    assert_abs_diff_eq!(r_star[0], 0.117451391336, epsilon = 1e-9);
    assert_abs_diff_eq!(r_star[7], 2.005489616718, epsilon = 1e-9);
    assert_abs_diff_eq!(r_star.iter().sum::<f64>(), 10.0, epsilon = 1e-9);
}

#[test]
fn scaled_positions_and_pairwise_convergence() {
    let p = example_project();
    let a = analyze::<f64>(&p).unwrap();
    let r_star = &a.influence.power_normalized;
    let mao = scale_positions(&p.positions, r_star).unwrap();
    assert_abs_diff_eq!(mao[(0, 0)], 0.3522, epsilon = 1e-3);
    assert_abs_diff_eq!(mao[(0, 1)], 0.1174, epsilon = 1e-3);

    let (caa, daa) = convergence_divergence(&mao);
    // Actors 1 and 2 disagree on LK only.
    assert_eq!(caa[(0, 1)], 0.0);
    assert_abs_diff_eq!(daa[(0, 1)], 0.389507165146, epsilon = 1e-9);
    // Actors 1 and 8 agree on LK only.
    assert_abs_diff_eq!(caa[(0, 7)], 1.061470504027, epsilon = 1e-9);
    assert_eq!(daa[(0, 7)], 0.0);
    // Actors 1 and 4 disagree on LL and LK.
    assert_abs_diff_eq!(a.convergence.mcdv[(0, 3)], -0.117973397520, epsilon = 1e-9);
}

#[test]
fn mcdv_reproduces_published_table() {
    let a = analyze::<f64>(&example_project()).unwrap();
    let mut worst = 0.0f64;
    for (i, row) in MCDV.iter().enumerate() {
        for (j, &published) in row.iter().enumerate() {
            worst = worst.max((a.convergence.mcdv[(i, j)] - published).abs());
        }
    }
    assert!(worst <= 0.02, "max deviation {worst}");
    for &(i, j, v) in &[(0, 1, -0.04), (0, 7, 0.12), (0, 0, 0.05), (2, 7, -0.58), (2, 2, 0.67)] {
        assert_abs_diff_eq!(a.convergence.mcdv[(i, j)], v, epsilon = 0.02);
    }
}

#[test]
fn personal_risk_matches_published_table() {
    let p = example_project();
    let prpns: Vec<f64> = ["A1", "A3", "A6", "A7", "A8"]
        .iter()
        .flat_map(|a| tprpn::<f64>(&p, &id(a)).unwrap().per_failure)
        .map(|f| f.prpn)
        .collect();
    assert_eq!(prpns, [12.0, 3.0, 30.0, 20.0, 30.0, 16.0, 40.0, 6.0]);
    let totals: Vec<f64> = ["A1", "A3", "A6", "A7", "A8"]
        .iter()
        .map(|a| tprpn::<f64>(&p, &id(a)).unwrap().tprpn)
        .collect();
    assert_eq!(totals, [15.0, 80.0, 16.0, 40.0, 6.0]);
}

#[test]
fn interdependent_and_total_risk() {
    let report = analyze::<f64>(&example_project()).unwrap().report;
    let a1 = report.actor(&id("A1")).unwrap();
    assert_abs_diff_eq!(a1.tirpn, -5.7, epsilon = 0.15);
    assert_abs_diff_eq!(a1.trpn, 9.3, epsilon = 0.5);
    let a5 = a1.effects.iter().find(|e| e.target.as_str() == "A5").unwrap();
    assert_abs_diff_eq!(a5.irpn, -2.55, epsilon = 0.02 * 15.0);
    let a7 = report.actor(&id("A7")).unwrap();
    assert_abs_diff_eq!(a7.tirpn, 24.0, epsilon = 0.5);

    // oracle
    let expected = [
        ("A1", 9.150840786464),
        ("A3", 100.722949242744),
        ("A6", 16.471142055609),
        ("A7", 63.794588881932),
        ("A8", 5.625158312104),
    ];
    for (actor, trpn) in expected {
        assert_abs_diff_eq!(report.actor(&id(actor)).unwrap().trpn, trpn, epsilon = 1e-9);
    }
    let top: Vec<&str> = report.ranking.iter().take(5).map(ActorId::as_str).collect();
    assert_eq!(top, ["A3", "A7", "A6", "A1", "A8"]);
}

#[test]
fn single_precision_agrees() {
    let p = example_project();
    let single = analyze::<f32>(&p).unwrap().report;
    let double = analyze::<f64>(&p).unwrap().report;
    for (s, d) in single.per_actor.iter().zip(&double.per_actor) {
        assert_abs_diff_eq!(f64::from(s.trpn), d.trpn, epsilon = 1e-3);
    }
    assert_eq!(single.ranking, double.ranking);
}

#[test]
fn eliminating_actor_3() {
    let base = example_project();
    let (p, a) = apply_scenario::<f64>(&base, &[TreatmentAction::EliminateActor { actor: id("A3") }]).unwrap();
    assert_eq!(p.actors.len(), 9);
    assert!(a.report.actor(&id("A3")).is_none());
    assert_eq!(a.convergence.mcdv.rows(), 9);
    // oracle
    let top: Vec<&str> = a.report.ranking.iter().take(4).map(ActorId::as_str).collect();
    assert_eq!(top, ["A7", "A6", "A1", "A8"]);
    assert_abs_diff_eq!(a.report.actor(&id("A7")).unwrap().trpn, 55.47615098097, epsilon = 1e-9);
    assert_abs_diff_eq!(a.report.actor(&id("A6")).unwrap().trpn, 15.742054288166, epsilon = 1e-9);
    // Actor 1 only influenced actor 3, so it is isolated now.
    assert_eq!(a.report.actor(&id("A1")).unwrap().trpn, 15.0);
}

#[test]
fn mitigating_actor_7() {
    let base = example_project();
    let action = TreatmentAction::MitigateFailure {
        actor: id("A7"),
        mode: "PC".into(),
        severity: None,
        detection: None,
        occurrence: Some(1),
    };
    let baseline = Scenario::baseline(&base).unwrap();
    let mitigated = Scenario::<f64>::run("mitigate-a7", &base, vec![action]).unwrap();
    let a7 = mitigated.report.actor(&id("A7")).unwrap();
    assert_eq!(a7.tprpn, 8.0);
    // oracle
    assert_abs_diff_eq!(a7.trpn, 12.758917776386, epsilon = 1e-9);

    let cmp = compare_scenarios(&baseline, &mitigated).unwrap();
    let row = cmp.rows.iter().find(|r| r.actor.as_str() == "A7").unwrap();
    assert_eq!(row.status, ActorStatus::Present);
    assert_abs_diff_eq!(row.trpn_delta.unwrap(), -51.035671105545, epsilon = 1e-9);
    // A7 drops from 2nd to 3rd, behind A6.
    assert_eq!(
        (row.rank_before, row.rank_after, row.rank_change),
        (Some(2), Some(3), Some(-1))
    );
}
