use proptest::prelude::*;
use proxgrad::prox::{BoxIndicator, LpHalf, ProxOracle, SphereIndicator, Zero, L0, L1};
use proxgrad::{ExtReal, Vector};

fn scalar(x: f64) -> Vector {
    Vector::new(vec![x]).unwrap()
}

/// `(γ/2)‖x − v‖² + φ(x)`.
fn model(phi: &dyn ProxOracle, gamma: f64, v: &Vector, x: &Vector) -> ExtReal {
    let d: f64 = x.iter().zip(v.iter()).map(|(a, b)| (a - b) * (a - b)).sum();
    ExtReal::from_f64(0.5 * gamma * d) + phi.eval(x)
}

fn oracles(p: f64) -> Vec<Box<dyn ProxOracle>> {
    vec![
        Box::new(Zero),
        Box::new(L1::new(p).unwrap()),
        Box::new(L0::new(p).unwrap()),
        Box::new(LpHalf::new(p).unwrap()),
        Box::new(BoxIndicator::symmetric(1, p).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn prox_beats_every_competitor(
        v in -5.0f64..5.0,
        gamma in prop::sample::select(vec![0.1, 1.0, 10.0]),
        p in 0.1f64..2.0,
        zs in prop::collection::vec(-10.0f64..10.0, 50),
    ) {
        let v = scalar(v);
        for phi in oracles(p) {
            let x = phi.prox(gamma, &v);
            let best = model(phi.as_ref(), gamma, &v, &x);
            prop_assert!(best.finite().is_some(), "{} prox left the domain", phi.name());
            let best = best.to_f64();
            // Competitors: random points, 0, and the projection of each onto dom φ.
            for &z in zs.iter().chain([0.0, v[0]].iter()) {
                let val = model(phi.as_ref(), gamma, &v, &scalar(z)).to_f64();
                prop_assert!(best <= val + 1e-9 * (1.0 + val.abs()),
                    "{}: ψ(prox) = {best} > {val} at z = {z}", phi.name());
            }
        }
    }

    #[test]
    fn convex_proxes_are_nonexpansive(
        a in -5.0f64..5.0,
        b in -5.0f64..5.0,
        gamma in 0.1f64..10.0,
        p in 0.1f64..2.0,
    ) {
        for phi in oracles(p).into_iter().filter(|o| o.convex()) {
            let pa = phi.prox(gamma, &scalar(a))[0];
            let pb = phi.prox(gamma, &scalar(b))[0];
            prop_assert!((pa - pb).abs() <= (a - b).abs() + 1e-12, "{}", phi.name());
        }
    }

    #[test]
    fn sphere_projection_is_closest_point(
        v in prop::collection::vec(-5.0f64..5.0, 3),
        angles in prop::collection::vec((0.0f64..std::f64::consts::PI, 0.0f64..std::f64::consts::TAU), 50),
        r in 0.1f64..3.0,
    ) {
        let sphere = SphereIndicator::new(r).unwrap();
        let v = Vector::new(v).unwrap();
        let x = sphere.prox(1.0, &v);
        prop_assert_eq!(sphere.eval(&x), ExtReal::Finite(0.0));
        let dist = |y: &[f64]| y.iter().zip(v.iter()).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
        let best = dist(x.as_slice());
        for (theta, phi) in angles {
            let y = [r * theta.sin() * phi.cos(), r * theta.sin() * phi.sin(), r * theta.cos()];
            prop_assert!(best <= dist(&y) + 1e-9);
        }
    }

    #[test]
    fn separable_proxes_act_coordinatewise(
        v in prop::collection::vec(-5.0f64..5.0, 1..6),
        gamma in 0.1f64..10.0,
        p in 0.1f64..2.0,
    ) {
        let vv = Vector::new(v.clone()).unwrap();
        for phi in oracles(p).into_iter().filter(|o| o.dim().is_none()) {
            let joint = phi.prox(gamma, &vv);
            for (i, &vi) in v.iter().enumerate() {
                prop_assert_eq!(joint[i].to_bits(), phi.prox(gamma, &scalar(vi))[0].to_bits());
            }
        }
    }
}

#[test]
fn zero_prox_is_identity() {
    let v = Vector::new(vec![1.5, -2.0, 0.0]).unwrap();
    assert_eq!(Zero.prox(3.0, &v), v);
}
