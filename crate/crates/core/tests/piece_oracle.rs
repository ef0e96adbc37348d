mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sccat::pieces::{check_conditions, enumerate_pieces};

#[test]
fn enumerate_pieces_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut checked = 0;
    let mut with_pieces = 0;
    while checked < 500 {
        let Some(p) = common::random_presentation(&mut rng, 200) else {
            continue;
        };
        let fast: Vec<_> = enumerate_pieces(&p)
            .into_iter()
            .map(|pc| (pc.word, pc.occurrences))
            .collect();
        let mut fast_sorted = fast.clone();
        fast_sorted.sort();
        let slow = common::brute_force_pieces(&p);
        assert_eq!(fast_sorted, slow, "disagreement on\n{}", p.to_text());
        if !slow.is_empty() {
            with_pieces += 1;
        }
        checked += 1;
    }
    assert!(with_pieces > 250, "only {with_pieces} presentations had pieces");
}

#[test]
fn max_piece_length_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let Some(p) = common::random_presentation(&mut rng, 120) else {
            continue;
        };
        let longest = common::brute_force_pieces(&p)
            .iter()
            .map(|(w, _)| w.len())
            .max()
            .unwrap_or(0);
        assert_eq!(check_conditions(&p).max_piece_length, longest);
    }
}
