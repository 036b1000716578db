//! End-to-end harness behaviour on a synthetic instance library.

mod common;

use std::fs;

use coeba_core::budget::EvalBudget;
use coeba_core::harness::record::{read_results_csv, CsvRow, RESULTS_CSV};
use coeba_core::harness::{
    compare_scenario, find_scenario, load_records, run_experiment, ConfigOverrides, FullReport,
    InstanceLibrary, SolverKind, Verdict,
};
use coeba_core::mfea::{Mfea, MfeaConfig};
use coeba_core::{coeba, Error};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn library() -> (tempfile::TempDir, InstanceLibrary) {
    let dir = tempfile::tempdir().unwrap();
    common::write_synthetic_library(dir.path());
    let lib = InstanceLibrary::open(dir.path()).unwrap();
    (dir, lib)
}

fn small() -> ConfigOverrides {
    ConfigOverrides {
        population_size: Some(120),
        migration_period: Some(5),
        ..ConfigOverrides::default()
    }
}

#[test]
fn rerun_writes_identical_json() {
    let (_data, lib) = library();
    let scenario = find_scenario("Test_Case_4_1").unwrap();
    let out1 = tempfile::tempdir().unwrap();
    let out2 = tempfile::tempdir().unwrap();
    for out in [&out1, &out2] {
        run_experiment(
            &lib,
            &scenario,
            SolverKind::Coeba,
            &[7],
            8_000,
            &small(),
            Some(out.path()),
        )
        .unwrap();
    }
    let rel = "Test_Case_4_1/coeba/seed-7.json";
    let a = fs::read(out1.path().join(rel)).unwrap();
    let b = fs::read(out2.path().join(rel)).unwrap();
    assert_eq!(a, b);
    let a = fs::read(out1.path().join(RESULTS_CSV)).unwrap();
    let b = fs::read(out2.path().join(RESULTS_CSV)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn records_cover_every_task_and_agree_with_csv() {
    let (_data, lib) = library();
    let scenario = find_scenario("Test_Case_8").unwrap();
    let out = tempfile::tempdir().unwrap();
    let seeds = [1, 2, 3];
    for solver in SolverKind::ALL {
        let recs = run_experiment(
            &lib,
            &scenario,
            solver,
            &seeds,
            6_000,
            &small(),
            Some(out.path()),
        )
        .unwrap();
        assert_eq!(recs.len(), 3);
        for (rec, seed) in recs.iter().zip(seeds) {
            assert_eq!(rec.seed, seed);
            assert_eq!(rec.results.len(), 8);
            assert!(rec.evaluations_used <= 6_000);
            for (res, name) in rec.results.iter().zip(&scenario.instance_names) {
                assert_eq!(&res.instance, name);
                let inst = lib.load(name).unwrap();
                assert_eq!(res.fitness, inst.tour_length(&res.tour).unwrap());
            }
        }
    }
    let rows = read_results_csv(&out.path().join(RESULTS_CSV)).unwrap();
    assert_eq!(rows.len(), 6);
    for solver in SolverKind::ALL {
        for rec in load_records(out.path(), "Test_Case_8", solver).unwrap() {
            let row = rows
                .iter()
                .find(|r| r.solver == solver && r.seed == rec.seed)
                .unwrap();
            assert_eq!(*row, CsvRow::from(&rec));
        }
    }

    let report = compare_scenario(out.path(), "Test_Case_8", Some(&lib)).unwrap();
    assert_eq!(report.instances.len(), 8);
    for c in &report.instances {
        assert_eq!(c.verdict, Verdict::from_means(c.coeba.mean, c.mfea.mean));
        assert_eq!(c.coeba.n, 3);
        assert!(c.optimum.is_none());
    }

    let full = FullReport::build(out.path(), Some(&lib)).unwrap();
    assert_eq!(full.comparisons.len(), 1);
    full.write(out.path()).unwrap();
    for name in ["report.txt", "report.json", "report.csv"] {
        assert!(out.path().join(name).is_file());
    }
    let csv = fs::read_to_string(out.path().join("report.csv")).unwrap();
    assert_eq!(csv.lines().count(), 9);
}

#[test]
fn bad_requests_are_rejected() {
    let (_data, lib) = library();
    let scenario = find_scenario("Test_Case_4_2").unwrap();
    let err =
        run_experiment(&lib, &scenario, SolverKind::Coeba, &[1], 0, &small(), None).unwrap_err();
    assert!(matches!(err, Error::BudgetTooSmall { .. }));
    let err =
        run_experiment(&lib, &scenario, SolverKind::Mfea, &[1], 0, &small(), None).unwrap_err();
    assert!(matches!(err, Error::BudgetTooSmall { .. }));
    let err = run_experiment(
        &lib,
        &scenario,
        SolverKind::Mfea,
        &[1, 1],
        10_000,
        &small(),
        None,
    )
    .unwrap_err();
    assert!(matches!(err, Error::Config(_)));
    assert!(matches!(
        find_scenario("nope"),
        Err(Error::UnknownScenario(_))
    ));

    let empty = tempfile::tempdir().unwrap();
    assert!(matches!(
        compare_scenario(empty.path(), "Test_Case_4_2", None),
        Err(Error::Comparison(_))
    ));
}

#[test]
fn missing_instance_file_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    common::write_synthetic_library(dir.path());
    fs::remove_file(dir.path().join("pr124.tsp")).unwrap();
    let lib = InstanceLibrary::open(dir.path()).unwrap();
    let scenario = find_scenario("Test_Case_4_1").unwrap();
    let err = run_experiment(
        &lib,
        &scenario,
        SolverKind::Coeba,
        &[1],
        10_000,
        &small(),
        None,
    )
    .unwrap_err();
    match err {
        Error::Io { path, .. } => assert!(path.ends_with("pr124.tsp")),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn evaluation_counter_examples() {
    let (_data, lib) = library();
    let scenario = find_scenario("Test_Case_4_1").unwrap();
    let insts = lib.load_all(&scenario.instance_names).unwrap();

    // COEBA initialisation with X = 200, K = 4.
    let cfg = coeba::CoebaConfig::default();
    let mut budget = EvalBudget::new(cfg.budget);
    coeba::initialize(&insts, &cfg, &mut budget, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
    assert_eq!(budget.used(), 800);

    // MFEA with N = 200: every generation after the first costs exactly N.
    let mut state = Mfea::new(
        &insts,
        MfeaConfig {
            budget: 800 + 200 * 5,
            ..MfeaConfig::default()
        },
    )
    .unwrap();
    assert_eq!(state.budget().used(), 800);
    let mut last = 800;
    while state.step().unwrap() {
        assert_eq!(state.budget().used() - last, 200);
        last = state.budget().used();
    }
    assert_eq!(state.budget().used(), 1800);
}

#[test]
fn budget_of_initialisation_only() {
    let (_data, lib) = library();
    let scenario = find_scenario("Test_Case_6_1").unwrap();
    let recs = run_experiment(
        &lib,
        &scenario,
        SolverKind::Coeba,
        &[1],
        1_200,
        &ConfigOverrides::default(),
        None,
    )
    .unwrap();
    assert_eq!(recs[0].evaluations_used, 1_200);
    let recs = run_experiment(
        &lib,
        &scenario,
        SolverKind::Mfea,
        &[1],
        1_200,
        &ConfigOverrides::default(),
        None,
    )
    .unwrap();
    assert_eq!(recs[0].evaluations_used, 1_200);
}
