use qtangles::qstate::{random_unitary_2x2, PureState, QubitSubset};
use qtangles::tangles::{three_tangle_mixed, RoofOptions};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for trial in 0..200 {
        let s = PureState::random(4, &mut rng);
        let q = 1 + (trial % 4);
        let u = random_unitary_2x2(&mut rng);
        let t = s.apply_local_unitary(q, &u).unwrap();
        if trial != 50 && trial != 100 && trial != 75 { continue; }
        let triple = QubitSubset::new(vec![1, 2, 3], 4).unwrap();
        let r1 = s.partial_trace(&triple).unwrap();
        let r2 = t.partial_trace(&triple).unwrap();
        for (restarts, iterations) in [(32usize, 400usize), (8, 20000), (32, 20000)] {
            let t0 = Instant::now();
            let opts = RoofOptions { restarts, iterations, seed: 12345 };
            let e1 = three_tangle_mixed(&r1, &opts).unwrap().estimate;
            let e2 = three_tangle_mixed(&r2, &opts).unwrap().estimate;
            println!("trial {trial:3} {restarts:3}x{iterations:5}: {e1:.14} vs {e2:.14} diff {:+.3e} ({:?})", e1 - e2, t0.elapsed());
        }
    }
}
