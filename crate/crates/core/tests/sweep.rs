use proptest::prelude::*;

use lgt_resources::hilbert::Boundary;
use lgt_resources::models::{ModelConfig, ModelKind};
use lgt_resources::solver::SolverOptions;
use lgt_resources::sweep::{read_csv, run_points, write_csv, SweepResult};

fn without_time(mut rows: Vec<SweepResult>) -> Vec<SweepResult> {
    rows.iter_mut().for_each(|r| r.wall_time_ms = 0);
    rows
}

#[test]
fn parallel_and_serial_rows_agree() {
    let mut points = Vec::new();
    for g2 in [0.05, 0.5, 5.0] {
        points.push(ModelConfig::zn(4, 2, 4, g2));
        points.push(ModelConfig::d3(2, g2));
        points.push(ModelConfig::su2(6, g2));
    }
    let opts = SolverOptions::default().with_seed(99);
    let serial = without_time(run_points(&points, &opts, Some(1)).unwrap());
    let parallel = without_time(run_points(&points, &opts, Some(6)).unwrap());
    assert_eq!(serial, parallel);
    assert!(serial.iter().all(|r| r.is_ok()));
}

#[test]
fn lanczos_sized_points_are_reproducible() {
    // dim 1024 goes through the iterative solver.
    let points = vec![ModelConfig::zn(2, 1, 10, 0.8)];
    let opts = SolverOptions::default().with_seed(5);
    let a = without_time(run_points(&points, &opts, Some(1)).unwrap());
    let b = without_time(run_points(&points, &opts, Some(3)).unwrap());
    let (mut x, mut y) = (Vec::new(), Vec::new());
    write_csv(&a, &mut x).unwrap();
    write_csv(&b, &mut y).unwrap();
    assert_eq!(x, y);
}

fn opt_f64() -> impl Strategy<Value = Option<f64>> {
    prop_oneof![Just(None), any::<f64>().prop_filter("finite", |v| v.is_finite()).prop_map(Some)]
}

fn row() -> impl Strategy<Value = SweepResult> {
    (
        prop_oneof![Just(ModelKind::Su2), Just(ModelKind::Zn), Just(ModelKind::D3)],
        (1usize..20, 0.0..1.0f64, 0.0..50.0f64, 1e-3..1e3f64),
        (opt_f64(), opt_f64(), opt_f64(), opt_f64(), opt_f64()),
        (any::<u32>(), any::<u32>(), proptest::option::of("[a-z ,\"]{0,12}")),
    )
        .prop_map(|(model, (l, ggm, sre2, g2), (energy, gap, gss, plaq, faf2), (iters, ms, error))| SweepResult {
            model,
            n: (model == ModelKind::Zn).then_some(l + 1),
            k: (model == ModelKind::Zn).then_some(l / 2),
            l,
            g2,
            boundary: if l % 2 == 0 { Boundary::Open } else { Boundary::Periodic },
            energy,
            gap,
            gap_same_sector: gss,
            plaquette: plaq,
            ggm: Some(ggm),
            sre2: Some(sre2),
            faf2,
            solver_iterations: iters as usize,
            wall_time_ms: ms as u64,
            error: error.filter(|e| !e.is_empty()),
        })
}

proptest! {
    #[test]
    fn csv_round_trip_is_bit_exact(rows in proptest::collection::vec(row(), 0..8)) {
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let back = read_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(back.len(), rows.len());
        for (a, b) in back.iter().zip(&rows) {
            prop_assert_eq!(a, b);
            prop_assert_eq!(a.g2.to_bits(), b.g2.to_bits());
            prop_assert_eq!(a.energy.map(f64::to_bits), b.energy.map(f64::to_bits));
        }
    }
}
