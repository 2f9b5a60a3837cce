//! Shared helpers for the integration suites: a brute-force reference
//! dissector, independent of the streaming clock, and randomized series
//! generators covering mixed regimes (ties, gaps, duplicate stamps).

#![allow(dead_code)]

use kairos::intrinsic::{DcEvent, Direction};
use kairos::series::{PriceSeries, Tick};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Reference dissection by forward scanning: from each confirmed event,
/// walk ahead tracking the running extreme of the open segment until the
/// next reversal of at least `delta` is found. No mode state machine.
pub fn oracle_dissect(series: &PriceSeries<f64>, delta: f64) -> Vec<DcEvent<f64>> {
    let ticks = series.ticks();
    let mut events: Vec<DcEvent<f64>> = Vec::new();

    // initial segment: no preceding confirmation, track both extremes
    let mut ext_max = ticks[0].price();
    let mut ext_min = ticks[0].price();
    let mut anchor: Option<(usize, Direction)> = None;
    for (j, tick) in ticks.iter().enumerate().skip(1) {
        let p = tick.price();
        if p > ext_max {
            ext_max = p;
        }
        if p < ext_min {
            ext_min = p;
        }
        if (ext_max - p) / ext_max >= delta {
            events.push(DcEvent {
                direction: Direction::Down,
                confirm_time: tick.time(),
                confirm_price: p,
                prev_extreme_price: ext_max,
                prev_overshoot: None,
            });
            anchor = Some((j, Direction::Down));
            break;
        }
        if (p - ext_min) / ext_min >= delta {
            events.push(DcEvent {
                direction: Direction::Up,
                confirm_time: tick.time(),
                confirm_price: p,
                prev_extreme_price: ext_min,
                prev_overshoot: None,
            });
            anchor = Some((j, Direction::Up));
            break;
        }
    }

    // every later segment: scan forward from the previous confirmation
    while let Some((start, direction)) = anchor.take() {
        let confirm_price = ticks[start].price();
        let mut extreme = confirm_price;
        for (k, tick) in ticks.iter().enumerate().skip(start + 1) {
            let p = tick.price();
            match direction {
                Direction::Up => {
                    if p > extreme {
                        extreme = p;
                    }
                    if (extreme - p) / extreme >= delta {
                        events.push(DcEvent {
                            direction: Direction::Down,
                            confirm_time: tick.time(),
                            confirm_price: p,
                            prev_extreme_price: extreme,
                            prev_overshoot: Some((extreme - confirm_price) / confirm_price),
                        });
                        anchor = Some((k, Direction::Down));
                        break;
                    }
                }
                Direction::Down => {
                    if p < extreme {
                        extreme = p;
                    }
                    if (p - extreme) / extreme >= delta {
                        events.push(DcEvent {
                            direction: Direction::Up,
                            confirm_time: tick.time(),
                            confirm_price: p,
                            prev_extreme_price: extreme,
                            prev_overshoot: Some((confirm_price - extreme) / confirm_price),
                        });
                        anchor = Some((k, Direction::Up));
                        break;
                    }
                }
            }
        }
    }
    events
}

/// A random series with deliberately messy texture: exact price repeats,
/// occasional multi-threshold gaps, duplicate timestamps, and price
/// quantization, on top of a multiplicative random walk.
pub fn random_mixed_series(rng: &mut ChaCha8Rng, max_len: usize) -> PriceSeries<f64> {
    let len = rng.random_range(2..=max_len.max(2));
    let vol = 10f64.powf(rng.random_range(-4.0..-1.4));
    let tie_prob = rng.random_range(0.0..0.2);
    let jump_prob = rng.random_range(0.0..0.02);
    let dup_time_prob = rng.random_range(0.0..0.1);
    let quantized = rng.random_bool(0.3);

    let mut price: f64 = rng.random_range(0.5..500.0);
    let mut time = 0.0f64;
    let mut ticks = Vec::with_capacity(len);
    ticks.push(Tick::new(time, price).unwrap());
    for _ in 1..len {
        if !rng.random_bool(dup_time_prob) {
            time += rng.random_range(0.1..2.0);
        }
        let roll: f64 = rng.random();
        if roll < tie_prob {
            // exact repeat
        } else if roll < tie_prob + jump_prob {
            let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            price *= 1.0 + sign * rng.random_range(0.05..0.25);
        } else {
            let z: f64 = StandardNormal.sample(rng);
            price *= 1.0 + (vol * z).clamp(-0.4, 0.4);
        }
        if quantized {
            price = (price * 1e5).round() / 1e5;
        }
        price = price.max(1e-4);
        ticks.push(Tick::new(time, price).unwrap());
    }
    PriceSeries::new(ticks, "mixed").unwrap()
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn assert_events_identical(streaming: &[DcEvent<f64>], reference: &[DcEvent<f64>], context: &str) {
    assert_eq!(streaming.len(), reference.len(), "event count differs: {context}");
    for (i, (a, b)) in streaming.iter().zip(reference).enumerate() {
        assert_eq!(a.direction, b.direction, "direction at event {i}: {context}");
        assert_eq!(a.confirm_time, b.confirm_time, "time at event {i}: {context}");
        assert_eq!(a.confirm_price, b.confirm_price, "price at event {i}: {context}");
        assert_eq!(a.prev_extreme_price, b.prev_extreme_price, "extreme at event {i}: {context}");
        assert_eq!(a.prev_overshoot, b.prev_overshoot, "overshoot at event {i}: {context}");
    }
}
