use ehchan_core::channel::{simulate, ChannelParams, IidStrategy};
use ehchan_core::modulo::{optimize_scheme, ModuloEncoder};
use ehchan_core::rng::{derive_seed, sim_rng};
use ehchan_core::channel::Simulator;
use ehchan_core::timing::{binary_to_timing, timing_to_binary};
use proptest::prelude::*;

#[test]
fn round_trip_on_seeded_random_traces() {
    for k in 0..10_000u64 {
        let q = 0.05 + 0.9 * ((k % 19) as f64 / 18.0);
        let p = ((k * 7) % 11) as f64 / 10.0;
        let params = ChannelParams::new(q).unwrap();
        let mut policy = IidStrategy::new(p.min(1.0), derive_seed(k, 0)).unwrap();
        let trace = simulate(params, &mut policy, 1 + (k as usize % 200), derive_seed(k, 1)).unwrap();
        let timing = binary_to_timing(&trace).unwrap();
        assert_eq!(timing.total_slots(), trace.len() as u64);
        let rebuilt = timing_to_binary(&timing, &params).unwrap();
        rebuilt.validate().unwrap();
        assert_eq!(rebuilt.inputs, trace.inputs, "trace {k}");
        assert_eq!(binary_to_timing(&rebuilt).unwrap(), timing);
    }
}

proptest! {
    #[test]
    fn round_trip_property(q in 0.01f64..=1.0, p in 0.0f64..=1.0, slots in 0usize..300, seed: u64) {
        let params = ChannelParams::new(q).unwrap();
        let mut policy = IidStrategy::new(p, seed).unwrap();
        let trace = simulate(params, &mut policy, slots, seed ^ 1).unwrap();
        let timing = binary_to_timing(&trace).unwrap();
        for s in &timing.symbols {
            prop_assert!(s.wait >= 1);
            prop_assert_eq!(s.duration, s.wait + s.idle);
        }
        let rebuilt = timing_to_binary(&timing, &params).unwrap();
        prop_assert_eq!(&rebuilt.inputs, &trace.inputs);
    }
}

/// Idle times of a long encoder run; the first symbol is dropped because the
/// empty start shifts its idle time by one slot.
fn idle_times(q: f64, seed: u64, symbols: usize) -> (Vec<u64>, Vec<usize>) {
    let scheme = optimize_scheme(q, 4).unwrap();
    let mut rng = sim_rng(seed);
    let message: Vec<usize> = (0..symbols).map(|_| scheme.pmf.sample(&mut rng)).collect();
    let mut enc = ModuloEncoder::new(&message, 4).unwrap();
    let mut sim = Simulator::new(ChannelParams::new(q).unwrap(), seed + 1);
    while !enc.finished() {
        sim.step(&mut enc).unwrap();
    }
    let timing = binary_to_timing(sim.trace()).unwrap();
    let z: Vec<u64> = timing.symbols.iter().skip(1).map(|s| s.idle).collect();
    assert_eq!(z, enc.idle_times()[1..]);
    (z, message[1..].to_vec())
}

#[test]
fn idle_time_is_geometric() {
    for &q in &[0.2, 0.5, 0.8] {
        let (z, _) = idle_times(q, 77, 200_001);
        let n = z.len() as f64;
        let max_bin = 40;
        let mut counts = vec![0u64; max_bin + 1];
        for &v in &z {
            counts[(v as usize).min(max_bin)] += 1;
        }
        for (k, &c) in counts.iter().enumerate() {
            let pk = if k < max_bin { q * (1.0 - q).powi(k as i32) } else { (1.0 - q).powi(max_bin as i32) };
            let expected = n * pk;
            let sigma = (n * pk * (1.0 - pk)).sqrt();
            assert!((c as f64 - expected).abs() <= 4.0 * sigma + 1e-9, "q={q} k={k}: {c} vs {expected}");
        }
    }
}

#[test]
fn idle_time_independent_of_message() {
    let (z, u) = idle_times(0.3, 5, 200_001);
    let n = z.len() as f64;
    let mz = z.iter().sum::<u64>() as f64 / n;
    let mu = u.iter().sum::<usize>() as f64 / n;
    let (mut szu, mut szz, mut suu) = (0.0, 0.0, 0.0);
    for (&a, &b) in z.iter().zip(&u) {
        let (da, db) = (a as f64 - mz, b as f64 - mu);
        szu += da * db;
        szz += da * da;
        suu += db * db;
    }
    let corr = szu / (szz * suu).sqrt();
    assert!(corr.abs() < 4.0 / n.sqrt(), "corr {corr}");
}
