//! Cell-by-cell comparison with the published absolute-error tables on the
//! `{0.1, ..., 0.6}²` mesh (rows ξ, columns η).

use fracburgers::operator::CollocationGrid;
use fracburgers::problems::{build_example1, build_example2};
use fracburgers::solver::{solve, table_mesh, SolverOptions};
use fracburgers::{FractionalOrder, Problem};

type Table = [[f64; 6]; 6];

const EXAMPLE1_ALPHA_09: Table = [
    [2.39e-4, 2.26e-5, 3.74e-5, 5.31e-5, 4.92e-5, 7.43e-5],
    [4.25e-4, 4.23e-5, 7.26e-5, 1.05e-4, 1.05e-4, 1.60e-4],
    [5.58e-4, 5.78e-5, 1.01e-4, 1.48e-4, 1.53e-4, 2.33e-4],
    [6.37e-4, 6.53e-5, 1.16e-4, 1.71e-4, 1.80e-4, 2.77e-4],
    [6.62e-4, 6.74e-5, 1.21e-4, 1.79e-4, 1.89e-4, 2.95e-4],
    [6.33e-4, 6.10e-5, 1.11e-4, 1.65e-4, 1.73e-4, 2.77e-4],
];

const EXAMPLE1_ALPHA_08: Table = [
    [2.46e-4, 1.09e-5, 1.47e-5, 1.97e-5, 1.14e-5, 5.62e-5],
    [4.39e-4, 1.54e-5, 3.50e-5, 4.96e-5, 4.19e-5, 1.31e-4],
    [5.78e-4, 1.54e-5, 5.50e-5, 7.80e-5, 7.29e-5, 1.97e-4],
    [6.62e-4, 1.46e-5, 6.81e-5, 9.58e-5, 9.22e-5, 2.38e-4],
    [6.91e-4, 1.07e-5, 7.71e-5, 1.05e-4, 1.02e-4, 2.57e-4],
    [6.64e-4, 8.35e-6, 7.53e-5, 1.00e-4, 9.47e-5, 2.44e-4],
];

const EXAMPLE1_ALPHA_07: Table = [
    [2.66e-4, 3.77e-5, 1.28e-6, 1.21e-6, 1.63e-5, 2.90e-5],
    [4.75e-4, 6.11e-5, 9.13e-6, 1.95e-5, 4.18e-6, 8.61e-5],
    [6.26e-4, 7.33e-5, 2.33e-5, 4.07e-5, 1.48e-5, 1.40e-4],
    [7.18e-4, 7.78e-5, 3.53e-5, 5.63e-5, 2.95e-5, 1.77e-4],
    [7.52e-4, 7.27e-5, 4.66e-5, 6.75e-5, 4.03e-5, 1.97e-4],
    [7.25e-4, 6.32e-5, 5.03e-5, 6.69e-5, 3.91e-5, 1.90e-4],
];

const EXAMPLE2_ALPHA_09: Table = [
    [2.50e-3, 1.57e-3, 5.40e-4, 6.93e-5, 2.01e-5, 9.54e-5],
    [4.63e-3, 2.70e-3, 4.81e-4, 7.72e-4, 1.37e-3, 1.66e-3],
    [6.28e-3, 3.58e-3, 4.21e-4, 1.44e-3, 2.45e-3, 3.05e-3],
    [7.32e-3, 4.13e-3, 3.64e-4, 1.89e-3, 3.15e-3, 3.94e-3],
    [7.67e-3, 4.30e-3, 3.11e-4, 2.08e-3, 3.43e-3, 4.29e-3],
    [7.30e-3, 4.07e-3, 2.64e-4, 2.02e-3, 3.30e-3, 4.10e-3],
];

const EXAMPLE2_ALPHA_08: Table = [
    [2.09e-3, 7.98e-4, 1.20e-4, 8.39e-5, 1.77e-4, 2.77e-4],
    [3.81e-3, 1.15e-3, 4.53e-4, 9.29e-4, 1.20e-3, 1.52e-3],
    [5.16e-3, 1.43e-3, 9.12e-4, 1.74e-3, 2.31e-3, 2.95e-3],
    [6.01e-3, 1.59e-3, 1.22e-3, 2.28e-3, 3.04e-3, 3.89e-3],
    [6.29e-3, 1.63e-3, 1.36e-3, 2.51e-3, 3.35e-3, 4.28e-3],
    [5.98e-3, 1.53e-3, 1.33e-3, 2.45e-3, 3.25e-3, 4.14e-3],
];

const EXAMPLE2_ALPHA_07: Table = [
    [1.52e-3, 2.87e-4, 1.56e-4, 3.31e-4, 4.56e-4, 5.71e-4],
    [2.69e-3, 7.72e-5, 5.72e-4, 6.69e-4, 8.89e-4, 1.73e-3],
    [3.62e-3, 8.15e-5, 1.15e-3, 1.46e-3, 1.96e-3, 2.55e-3],
    [4.20e-3, 1.89e-4, 1.53e-3, 2.00e-3, 2.68e-3, 3.46e-3],
    [4.39e-3, 2.50e-4, 1.71e-3, 2.26e-3, 3.00e-3, 3.87e-3],
    [4.17e-3, 2.67e-4, 1.68e-3, 2.22e-3, 2.94e-3, 3.77e-3],
];

// One percent covers three-digit rounding. The absolute floor absorbs the
// cells where the error is a near-cancellation of order 1e-5.
const REL: f64 = 1e-2;
const ABS: f64 = 1e-6;

fn errors(problem: &Problem, p: usize) -> Vec<f64> {
    let grid = CollocationGrid::uniform(p, p).unwrap();
    let s = solve(problem, &grid, &SolverOptions::default()).unwrap();
    s.error_report(&table_mesh())
        .unwrap()
        .rows
        .iter()
        .map(|r| r.abs_error)
        .collect()
}

fn compare(label: &str, ours: &[f64], published: &Table, skip: &[(usize, usize)]) {
    assert_eq!(ours.len(), 36);
    let mut bad = Vec::new();
    for (i, row) in published.iter().enumerate() {
        for (j, &want) in row.iter().enumerate() {
            let got = ours[6 * i + j];
            if !skip.contains(&(i, j)) && (got - want).abs() > REL * want + ABS {
                bad.push(format!(
                    "({:.1}, {:.1}): {got:.3e} vs {want:.2e}",
                    0.1 * (i + 1) as f64,
                    0.1 * (j + 1) as f64
                ));
            }
        }
    }
    assert!(bad.is_empty(), "{label}: {bad:?}");
}

fn order(a: f64) -> FractionalOrder {
    FractionalOrder::new(a).unwrap()
}

#[test]
fn example1_matches_published_tables() {
    for (a, t) in [
        (0.9, &EXAMPLE1_ALPHA_09),
        (0.8, &EXAMPLE1_ALPHA_08),
        (0.7, &EXAMPLE1_ALPHA_07),
    ] {
        compare(
            &format!("example 1, alpha {a}"),
            &errors(&build_example1(order(a)), 5),
            t,
            &[],
        );
    }
}

#[test]
fn example2_matches_published_tables() {
    for (a, t) in [(0.9, &EXAMPLE2_ALPHA_09), (0.8, &EXAMPLE2_ALPHA_08)] {
        compare(
            &format!("example 2, alpha {a}"),
            &errors(&build_example2(order(a)).unwrap(), 10),
            t,
            &[],
        );
    }
    // The printed 1.73e-3 at (0.2, 0.6) breaks the smooth column it sits in;
    // we get 1.17e-3 there and every other cell agrees.
    let ours = errors(&build_example2(order(0.7)).unwrap(), 10);
    compare("example 2, alpha 0.7", &ours, &EXAMPLE2_ALPHA_07, &[(1, 5)]);
    assert!((ours[11] - 1.17e-3).abs() < 1e-5);
}
