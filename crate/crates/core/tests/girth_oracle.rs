mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sccat::linkcert::girth;

#[test]
fn girth_matches_cycle_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut cyclic = 0;
    for _ in 0..1500 {
        let g = common::random_multigraph(&mut rng);
        let fast = girth(&g);
        let slow = common::brute_force_girth(&g);
        if slow.is_infinite() {
            assert!(fast.length.is_infinite(), "forest reported girth {}", fast.length);
            assert!(fast.cycle.is_empty());
            continue;
        }
        cyclic += 1;
        assert!(
            (fast.length - slow).abs() <= 1e-9 * slow.max(1.0),
            "girth {} vs brute force {slow} on {g:?}",
            fast.length
        );
        let arcs: f64 = fast.arcs.iter().sum();
        assert!((arcs - fast.length).abs() < 1e-9, "witness arcs sum to {arcs}");
    }
    assert!(cyclic > 1000);
}

#[test]
fn smoothing_preserves_girth() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..500 {
        let g = common::random_multigraph(&mut rng);
        let a = common::brute_force_girth(&g);
        let b = girth(&g.smoothed()).length;
        if a.is_infinite() {
            assert!(b.is_infinite());
        } else {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }
}
