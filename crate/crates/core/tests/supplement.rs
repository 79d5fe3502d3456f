use fiq_core::dynamics::{evolve, evolve_with, MapSpec, Model, DEFAULT_BUDGET};
use fiq_core::stats::{block_frequency_test, monobit_test, two_sample_equivalence, DigitStream};
use fiq_core::supplement::{
    born_probability, evolve_supplemented, measure_binary, run_measurement_sequence, split_bits,
    tape_bit, BinaryMeasurement, BitTape, HiddenVar, Outcome, QState,
};
use fiq_core::{Domain, Fiq, RandomSource, ReplaySource};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn tape_monobit_frequency() {
    let mut t = BitTape::new(2024);
    let n = 100_000u128;
    let ones = (1..=n).filter(|&i| tape_bit(&mut t, i)).count() as f64;
    assert!((ones / n as f64 - 0.5).abs() < 4.0 * (0.25 / n as f64).sqrt());
}

#[test]
fn distinct_seeds_give_distinct_tapes() {
    for s in 0..1000u64 {
        let mut a = BitTape::new(2 * s);
        let mut b = BitTape::new(2 * s + 1);
        assert!((1..=64).any(|n| a.bit(n) != b.bit(n)), "seed pair {s}");
    }
}

#[test]
fn supplemented_evolution_is_deterministic() {
    let x0 = Fiq::indeterminate();
    let a = evolve_supplemented(&MapSpec::Doubling, &x0, &mut BitTape::new(5), 50, 1, DEFAULT_BUDGET).unwrap();
    let b = evolve_supplemented(&MapSpec::Doubling, &x0, &mut BitTape::new(5), 50, 1, DEFAULT_BUDGET).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.manifest.model, Model::Tape);
    let c = evolve_supplemented(&MapSpec::Doubling, &x0, &mut BitTape::new(6), 50, 1, DEFAULT_BUDGET).unwrap();
    assert_ne!(a.emitted_stream(), c.emitted_stream());
}

#[test]
fn fiq_model_futures_depend_on_the_draws() {
    let x0 = Fiq::indeterminate();
    let a = evolve(&MapSpec::Doubling, &x0, 50, 1, &mut RandomSource::new(1), DEFAULT_BUDGET).unwrap();
    let b = evolve(&MapSpec::Doubling, &x0, 50, 1, &mut RandomSource::new(2), DEFAULT_BUDGET).unwrap();
    assert_ne!(a.emitted_stream(), b.emitted_stream());
}

#[test]
fn coupled_models_emit_identical_streams() {
    let x0 = Fiq::indeterminate();
    for seed in 0..20u64 {
        let tape = evolve_supplemented(&MapSpec::Doubling, &x0, &mut BitTape::new(seed), 50, 1, DEFAULT_BUDGET)
            .unwrap();
        let mut shared = RandomSource::with_domain(seed, Domain::Tape);
        let fiq = evolve(&MapSpec::Doubling, &x0, 50, 1, &mut shared, DEFAULT_BUDGET).unwrap();
        assert_eq!(tape.emitted_stream(), fiq.emitted_stream());
        assert_eq!(tape.actualized_positions(), fiq.actualized_positions());

        // The same tape digits replayed as an explicit bit list; 50 steps
        // read digits 1..=51.
        let mut t = BitTape::new(seed);
        let digits: Vec<bool> = (1..=51).map(|n| t.bit(n)).collect();
        let mut replay = ReplaySource::new(digits);
        let replayed =
            evolve_with(&MapSpec::Doubling, &x0, 50, 1, &mut replay, DEFAULT_BUDGET, Model::Fiq, seed).unwrap();
        assert_eq!(replayed.emitted_stream(), tape.emitted_stream());
    }
}

#[test]
fn tape_and_fiq_ensembles_are_indistinguishable() {
    let x0 = Fiq::indeterminate();
    let run = |model: Model, seed: u64| {
        let t = match model {
            Model::Fiq => evolve(&MapSpec::Doubling, &x0, 1000, 1, &mut RandomSource::new(seed), DEFAULT_BUDGET),
            Model::Tape => {
                evolve_supplemented(&MapSpec::Doubling, &x0, &mut BitTape::new(seed), 1000, 1, DEFAULT_BUDGET)
            }
        };
        DigitStream::new(t.unwrap().leading_stream()).unwrap()
    };
    let a: Vec<_> = (0..200).map(|s| run(Model::Fiq, s)).collect();
    let b: Vec<_> = (1000..1200).map(|s| run(Model::Tape, s)).collect();
    for k in 1..=4 {
        let r = two_sample_equivalence(&a, &b, k, 0.001).unwrap();
        assert!(r.passed(), "k = {k}: p = {}", r.p_value);
    }
}

#[test]
fn split_halves_are_uniform_and_independent() {
    let n = 100_000u64;
    let (mut s1, mut s2) = (Vec::new(), Vec::new());
    let (mut lead1, mut lead2) = (Vec::new(), Vec::new());
    for seed in 0..n {
        let (mut r1, mut r2) = split_bits(HiddenVar::uniform(seed), 16).unwrap();
        for k in 1..=8 {
            s1.push(r1.bit(k).unwrap());
            s2.push(r2.bit(k).unwrap());
        }
        lead1.push(r1.bit(1).unwrap() as u8 as f64);
        lead2.push(r2.bit(1).unwrap() as u8 as f64);
    }
    for s in [s1, s2] {
        let s = DigitStream::new(s).unwrap();
        assert!(monobit_test(&s, 0.001).unwrap().passed());
        for k in 1..=4 {
            assert!(block_frequency_test(&s, k, 0.001).unwrap().passed(), "k = {k}");
        }
    }
    let m1 = lead1.iter().sum::<f64>() / n as f64;
    let m2 = lead2.iter().sum::<f64>() / n as f64;
    let cov: f64 = lead1.iter().zip(&lead2).map(|(a, b)| (a - m1) * (b - m2)).sum::<f64>() / n as f64;
    let corr = cov / (m1 * (1.0 - m1) * m2 * (1.0 - m2)).sqrt();
    assert!(corr.abs() < 4.0 / (n as f64).sqrt(), "{corr}");
}

fn random_vector(rng: &mut RandomSource, d: usize) -> Vec<Complex64> {
    let mut u = || rng.next_u64() as f64 / u64::MAX as f64 - 0.5;
    (0..d).map(|_| Complex64::new(u(), u())).collect()
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn normalized(v: Vec<Complex64>) -> Vec<Complex64> {
    let n = inner(&v, &v).re.sqrt();
    v.into_iter().map(|x| x / n).collect()
}

#[test]
fn born_probability_matches_overlap_oracle() {
    let mut rng = RandomSource::new(77);
    for _ in 0..50 {
        let psi = normalized(random_vector(&mut rng, 4));
        let v1 = normalized(random_vector(&mut rng, 4));
        let w = random_vector(&mut rng, 4);
        let c = inner(&v1, &w);
        let v2 = normalized(w.iter().zip(&v1).map(|(x, y)| x - c * y).collect());
        let rows = (0..4)
            .map(|i| (0..4).map(|j| v1[i] * v1[j].conj() + v2[i] * v2[j].conj()).collect())
            .collect();
        let p = BinaryMeasurement::new(rows).unwrap();
        let oracle = inner(&v1, &psi).norm_sqr() + inner(&v2, &psi).norm_sqr();
        let got = born_probability(&QState::new(psi).unwrap(), &p).unwrap();
        assert!((got - oracle).abs() < 1e-10);
    }
}

#[test]
fn born_frequency_for_three_tenths() {
    let trials = 100_000u64;
    let p = q(3, 10);
    let plus = (0..trials)
        .filter(|&s| measure_binary(&p, HiddenVar::uniform(s)).unwrap().0 == Outcome::Plus)
        .count() as f64;
    assert!((plus / trials as f64 - 0.3).abs() < 4.0 * (0.21 / trials as f64).sqrt());
}

#[test]
fn measurement_sequences() {
    let ones = vec![q(1, 1); 3];
    assert_eq!(run_measurement_sequence(&ones, HiddenVar::uniform(9)).unwrap(), vec![Outcome::Plus; 3]);
    let ps: Vec<_> = (0..10).map(|i| q(i, 10)).collect();
    let a = run_measurement_sequence(&ps, HiddenVar::uniform(3)).unwrap();
    let b = run_measurement_sequence(&ps, HiddenVar::uniform(3)).unwrap();
    assert_eq!(a, b);
    // A certain outcome followed by an impossible one.
    let pair = vec![q(1, 1), q(0, 1)];
    assert_eq!(
        run_measurement_sequence(&pair, HiddenVar::uniform(1)).unwrap(),
        vec![Outcome::Plus, Outcome::Minus]
    );
}

#[test]
fn successive_fair_measurements_are_independent() {
    let trials = 10_000usize;
    let ps = vec![q(1, 2); 20];
    let rows: Vec<Vec<f64>> = (0..trials as u64)
        .map(|s| {
            run_measurement_sequence(&ps, HiddenVar::uniform(s))
                .unwrap()
                .iter()
                .map(|o| (o.value() == 1) as u8 as f64)
                .collect()
        })
        .collect();
    let n = trials as f64;
    let mean: Vec<f64> = (0..20).map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / n).collect();
    for m in &mean {
        assert!((m - 0.5).abs() < 4.0 * (0.25 / n).sqrt());
    }
    for i in 0..20 {
        for j in i + 1..20 {
            let cov = rows.iter().map(|r| (r[i] - mean[i]) * (r[j] - mean[j])).sum::<f64>() / n;
            let corr = cov / (mean[i] * (1.0 - mean[i]) * mean[j] * (1.0 - mean[j])).sqrt();
            assert!(corr.abs() < 4.0 / n.sqrt(), "({i}, {j}): {corr}");
        }
    }
}
