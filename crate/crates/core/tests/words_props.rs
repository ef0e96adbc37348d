use proptest::prelude::*;
use sccat::words::{
    cyclic_reduce, free_reduce, proper_power_root, symmetrized_closure, CyclicWord, Letter,
    Presentation, Word,
};
use std::collections::HashSet;

fn letter() -> impl Strategy<Value = Letter> {
    (0usize..3, any::<bool>()).prop_map(|(g, i)| Letter::new(g, i))
}

fn word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(letter(), 0..=max).prop_map(Word)
}

/// Deletes one cancelling pair per pass until none is left.
fn rescan_reduce(w: &Word) -> Word {
    let mut s = w.0.clone();
    loop {
        match (1..s.len()).find(|&i| s[i - 1].cancels(s[i])) {
            Some(i) => {
                s.drain(i - 1..=i);
            }
            None => return Word(s),
        }
    }
}

/// Free-reduces every rotation in turn until the word is cyclically reduced.
fn rotate_reduce(w: &Word) -> Word {
    let mut s = rescan_reduce(w);
    while s.len() >= 2 && s.0[0].cancels(s.0[s.len() - 1]) {
        s = rescan_reduce(&s.rotated(1));
    }
    s
}

fn least_rotation(w: &Word) -> Word {
    (0..w.len()).map(|k| w.rotated(k)).min().unwrap_or_default()
}

proptest! {
    #[test]
    fn free_reduce_is_idempotent_and_matches_rescan(w in word(40)) {
        let r = free_reduce(&w);
        prop_assert!(r.is_reduced());
        prop_assert!(r.len() <= w.len());
        prop_assert_eq!(free_reduce(&r), r.clone());
        prop_assert_eq!(r, rescan_reduce(&w));
    }

    #[test]
    fn cyclic_reduce_matches_rotation_oracle(w in word(40)) {
        let expected = rotate_reduce(&w);
        match cyclic_reduce(&w) {
            None => prop_assert!(expected.is_empty()),
            Some(c) => {
                prop_assert!(c.word().is_cyclically_reduced());
                prop_assert_eq!(c.word().clone(), least_rotation(&expected));
            }
        }
    }

    #[test]
    fn proper_power_root_reconstructs(w in word(12), e in 1usize..4) {
        let Some(base) = cyclic_reduce(&w) else { return Ok(()) };
        let powered: Vec<Letter> = base.letters().repeat(e);
        let c = CyclicWord::from_reduced(Word(powered)).unwrap();
        let (root, k) = proper_power_root(&c);
        prop_assert_eq!(c.len() % k, 0);
        prop_assert!(k >= e);
        let rebuilt = CyclicWord::from_reduced(Word(root.letters().repeat(k))).unwrap();
        prop_assert_eq!(rebuilt, c);
        prop_assert_eq!(proper_power_root(&root).1, 1);
    }

    #[test]
    fn closure_is_closed_under_rotation_and_inversion(
        ws in prop::collection::vec(word(10), 1..4)
    ) {
        let names = vec!["a".to_string(), "b".to_string(), "c".to_string()];
        let Ok(p) = Presentation::new(names, ws) else { return Ok(()) };
        let set: HashSet<Word> = symmetrized_closure(&p).into_iter().map(|e| e.word).collect();
        for w in &set {
            prop_assert!(set.contains(&w.rotated(1)));
            prop_assert!(set.contains(&w.inverse()));
        }
    }
}

#[test]
fn worked_examples() {
    let a = Letter::gen(0);
    let b = Letter::gen(1);
    assert_eq!(
        free_reduce(&Word(vec![a, b, a.inverse(), a, b.inverse(), a.inverse()])),
        Word::default()
    );
    let c = cyclic_reduce(&Word(vec![a.inverse(), b, a])).unwrap();
    assert_eq!(c.letters(), &[b]);
    let comm = Word(vec![a, b, a.inverse(), b.inverse()]);
    let p = Presentation::new(vec!["a".into(), "b".into()], vec![comm]).unwrap();
    assert_eq!(symmetrized_closure(&p).len(), 8);
}
