use combine::BinaryCqChannel;
use numkernel::random::random_state;
use numkernel::LN2;
use polar::{synthesize, Limits, Representation, SynthesizedChannel};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn dense(seed: u64) -> SynthesizedChannel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SynthesizedChannel::dense(&BinaryCqChannel::new(random_state(&mut rng, 2), random_state(&mut rng, 2)).unwrap())
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn plus_minus_ordering(seed in any::<u64>(), p in 0.0f64..0.5, e in 0.0f64..1.0) {
        let l = Limits::default();
        for w in [dense(seed), SynthesizedChannel::bsc(p).unwrap(), SynthesizedChannel::bec(e).unwrap()] {
            let h = w.entropy();
            let hm = w.minus(&w, &l).unwrap().entropy();
            let hp = w.plus(&w, &l).unwrap().entropy();
            prop_assert!(hp <= h + 1e-9 && h <= hm + 1e-9);
            prop_assert!((0.0..=LN2).contains(&hm) && (0.0..=LN2).contains(&hp));
        }
    }

    #[test]
    fn level_conservation(seed in any::<u64>(), p in 0.01f64..0.49) {
        let l = Limits::default();
        for (w, depth) in [(dense(seed), 2usize), (SynthesizedChannel::bsc(p).unwrap(), 4)] {
            let h = w.entropy();
            for n in 1..=depth {
                let mut total = 0.0;
                for k in 0..(1usize << n) {
                    let path: String = (0..n).map(|i| if k >> (n - 1 - i) & 1 == 1 { '+' } else { '-' }).collect();
                    total += synthesize(&w, &path, &l).unwrap().entropy();
                }
                prop_assert!((total / (1usize << n) as f64 - h).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn bec_closure_against_dense(e in 0.0f64..1.0, path in "[+-]{1,2}") {
        let l = Limits::default();
        let bec = synthesize(&SynthesizedChannel::bec(e).unwrap(), &path, &l).unwrap();
        let Representation::Bec(eps) = bec.representation else { panic!("erasure closure lost") };
        let d = synthesize(&SynthesizedChannel::dense(&BinaryCqChannel::bec(e).unwrap()).unwrap(), &path, &l).unwrap();
        prop_assert!((d.entropy() - eps * LN2).abs() < 1e-10);
    }
}
