use forge_core::{commutator, conjugate, free_reduce, Letter, Word};

/// Every freely reduced word of length at most `n` over `k` generators.
fn reduced_words(k: usize, n: usize) -> Vec<Word> {
    let letters: Vec<Letter> = (0..k)
        .flat_map(|g| [Letter::new(g, false), Letter::new(g, true)])
        .collect();
    let mut out = vec![Word::default()];
    let mut frontier = vec![Word::default()];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &frontier {
            for &l in &letters {
                if w.letters().last().is_some_and(|&x| x == l.inverse()) {
                    continue;
                }
                let mut v = w.letters().to_vec();
                v.push(l);
                next.push(Word::from_letters_unreduced(v));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[test]
fn word_counts() {
    // 1 + 6 + 30 + 150
    assert_eq!(reduced_words(3, 3).len(), 187);
    assert!(reduced_words(3, 3).iter().all(Word::is_reduced));
}

#[test]
fn commutator_expansions_exhaustive() {
    let words = reduced_words(3, 3);
    let n = words.len();
    let table = |f: &dyn Fn(&Word, &Word) -> Word| -> Vec<Word> {
        words
            .iter()
            .flat_map(|a| words.iter().map(move |b| (a, b)))
            .map(|(a, b)| f(a, b))
            .collect()
    };
    let prod = table(&|a, b| a.mul(b));
    let comm = table(&commutator);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let (a, b, c) = (&words[i], &words[j], &words[k]);
                // [ab,c] = [a,c]^b [b,c]
                let lhs = commutator(&prod[i * n + j], c);
                assert_eq!(lhs, conjugate(&comm[i * n + k], b).mul(&comm[j * n + k]));
                // [a,bc] = [a,c] [a,b]^c
                let lhs = commutator(a, &prod[j * n + k]);
                assert_eq!(lhs, comm[i * n + k].mul(&conjugate(&comm[i * n + j], c)));
            }
        }
    }
}

#[test]
fn hall_witt_on_letters() {
    let words = reduced_words(3, 1);
    for x in &words {
        for y in &words {
            for z in &words {
                let t1 = conjugate(&commutator(&commutator(x, &y.inverse()), z), y);
                let t2 = conjugate(&commutator(&commutator(y, &z.inverse()), x), z);
                let t3 = conjugate(&commutator(&commutator(z, &x.inverse()), y), x);
                assert!(t1.mul(&t2).mul(&t3).is_empty(), "{x:?} {y:?} {z:?}");
            }
        }
    }
}

#[test]
fn reduction_examples() {
    let w = Word::from_signed(&[(0, 1), (1, 1), (1, -1), (0, -1), (2, 1)]);
    assert_eq!(free_reduce(&w), Word::generator(2));
    assert_eq!(
        commutator(&Word::generator(0), &Word::generator(0)),
        Word::default()
    );
}
