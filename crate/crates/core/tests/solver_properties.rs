use std::sync::Arc;

use proptest::prelude::*;
use proxgrad::diagnostics::{check_acceptance, check_envelope, check_level_set};
use proxgrad::prox::{LpHalf, L0, L1};
use proxgrad::smooth::Quadratic;
use proxgrad::{solve, CompositeProblem, ProxOracle, SolverConfig, Vector};

fn lasso_like(rows: Vec<Vec<f64>>, b: Vec<f64>, phi: Arc<dyn ProxOracle>) -> CompositeProblem {
    let rows = rows.into_iter().map(|r| Vector::new(r).unwrap()).collect();
    let f = Quadratic::new(rows, Vector::new(b).unwrap()).unwrap();
    CompositeProblem::new("random", Arc::new(f), phi).unwrap()
}

fn matrix(n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-2.0f64..2.0, n), n + 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn certified_descent_on_random_instances(
        rows in matrix(3),
        b in prop::collection::vec(-2.0f64..2.0, 4),
        x0 in prop::collection::vec(-2.0f64..2.0, 3),
        lambda in 0.05f64..1.0,
        which in 0usize..3,
        m in prop::sample::select(vec![0usize, 1, 5, 10]),
    ) {
        let phi: Arc<dyn ProxOracle> = match which {
            0 => Arc::new(L1::new(lambda).unwrap()),
            1 => Arc::new(L0::new(lambda).unwrap()),
            _ => Arc::new(LpHalf::new(lambda).unwrap()),
        };
        let problem = lasso_like(rows, b, phi);
        let config = SolverConfig { max_outer: 2000, ..SolverConfig::default() }.with_m(m);
        let report = solve(&problem, &config, &Vector::new(x0).unwrap()).unwrap();
        let trace = &report.trace;
        prop_assert!(check_acceptance(trace).unwrap().is_empty());
        prop_assert!(check_envelope(trace, m));
        prop_assert!(check_level_set(trace));
        prop_assert!(trace.steps().all(|(_, s)| s.gamma >= config.gamma_min && s.gamma0 <= s.gamma));
        prop_assert_eq!(trace.records.len(), report.iterations() + 1);
    }

    #[test]
    fn monotone_run_never_increases_psi(
        rows in matrix(2),
        b in prop::collection::vec(-2.0f64..2.0, 3),
        x0 in prop::collection::vec(-2.0f64..2.0, 2),
        lambda in 0.05f64..1.0,
    ) {
        let problem = lasso_like(rows, b, Arc::new(L1::new(lambda).unwrap()));
        let report = solve(&problem, &SolverConfig::monotone(), &Vector::new(x0).unwrap()).unwrap();
        // Steps accepted by the stationarity residual may move ψ by rounding.
        let psi = report.trace.psi();
        prop_assert!(psi.windows(2).all(|w| w[1] <= w[0] + 1e-12 * (1.0 + w[0].abs())));
    }
}
