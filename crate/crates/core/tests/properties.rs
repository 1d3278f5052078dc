use num_complex::Complex64;
use proptest::prelude::*;
use qprep::dqn::{ReplayPool, Transition};
use qprep::env::ControlAction;
use qprep::harness::format_sig12;
use qprep::policy::{self, BoltzmannParams};
use qprep::qsim::{self, QuantumState};
use qprep::reward::{round_weights, RoundIndicators};

fn state() -> impl Strategy<Value = QuantumState> {
    prop::array::uniform8(-1.0f64..1.0)
        .prop_filter("non-zero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3)
        .prop_map(|v| {
            let amp = std::array::from_fn(|i| Complex64::new(v[2 * i], v[2 * i + 1]));
            QuantumState::normalized(amp).unwrap()
        })
}

proptest! {
    #[test]
    fn fidelity_is_symmetric_and_bounded(a in state(), b in state()) {
        let f = qsim::fidelity(&a, &b);
        prop_assert!((0.0..=1.0).contains(&f));
        prop_assert!((f - qsim::fidelity(&b, &a)).abs() < 1e-14);
        prop_assert!((qsim::fidelity(&a, &a) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fidelity_ignores_global_phase(a in state(), b in state(), theta in -7.0f64..7.0) {
        let f = qsim::fidelity(&a, &b);
        prop_assert!((qsim::fidelity(&a.with_global_phase(theta), &b) - f).abs() < 1e-12);
    }

    #[test]
    fn propagators_are_unitary_and_preserve_norm(
        u1 in -3.0f64..3.0, u2 in -3.0f64..3.0, dt in 0.0f64..2.0, psi in state()
    ) {
        let h = qsim::build_hamiltonian(u1, u2);
        prop_assert!(qsim::hermitian_defect(&h) < 1e-15);
        let u = qsim::propagator(&h, dt).unwrap();
        prop_assert!(qsim::unitarity_defect(&u) < 1e-12);
        prop_assert!((qsim::evolve(&psi, &u).norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn boltzmann_is_shift_invariant(q in prop::collection::vec(-5.0f64..5.0, 9), c in -100.0f64..100.0) {
        let p = BoltzmannParams::default();
        let a = policy::boltzmann_probs(&q, &p).unwrap();
        let shifted: Vec<f64> = q.iter().map(|x| x + c).collect();
        let b = policy::boltzmann_probs(&shifted, &p).unwrap();
        prop_assert!((a.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn argmax_takes_the_first_maximum(q in prop::collection::vec(-2i32..3, 1..12)) {
        let q: Vec<f64> = q.into_iter().map(f64::from).collect();
        let i = policy::argmax(&q);
        prop_assert!(q.iter().all(|&v| v <= q[i]));
        prop_assert!(q[..i].iter().all(|&v| v < q[i]));
    }

    #[test]
    fn round_weights_count_improvements(bits in prop::collection::vec(any::<(bool, bool, bool)>(), 1..40)) {
        let n = bits.len();
        let ind = RoundIndicators {
            w: bits.iter().map(|b| b.0).collect(),
            y: bits.iter().map(|b| b.1).collect(),
            z: bits.iter().map(|b| b.2).collect(),
        };
        let w = round_weights(&ind, 2).unwrap();
        let count = |v: &[bool]| v.iter().filter(|&&b| b).count() as f64 / n as f64;
        prop_assert_eq!(w.w, count(&ind.w));
        prop_assert_eq!(w.y, count(&ind.y));
        prop_assert_eq!(w.z, count(&ind.z));
    }

    #[test]
    fn replay_keeps_the_newest(capacity in 1usize..30, extra in 0usize..40) {
        let mut pool = ReplayPool::new(capacity).unwrap();
        for i in 0..capacity + extra {
            pool.push(Transition {
                obs: [0.0; 8],
                action: ControlAction::from_index(i % 9).unwrap(),
                reward: i as f64,
                next_obs: [0.0; 8],
                terminal: false,
                td_error_abs: 1.0,
            });
        }
        prop_assert_eq!(pool.len(), capacity);
        let rewards: Vec<f64> = pool.iter_oldest_first().map(|t| t.reward).collect();
        let expected: Vec<f64> = (extra..capacity + extra).map(|i| i as f64).collect();
        prop_assert_eq!(rewards, expected);
    }

    #[test]
    fn sig12_round_trips_to_twelve_digits(x in -1e6f64..1e6) {
        let s = format_sig12(x);
        prop_assert!(!s.contains('e'));
        let back: f64 = s.parse().unwrap();
        prop_assert!((back - x).abs() <= 1e-11 * x.abs().max(1e-300) + 1e-300);
    }
}
