//! Gate application against an explicit `2^N × 2^N` embedding of the local
//! matrix, built from the register conventions alone.

use num_complex::Complex64;
use qqlab_core::qsim::{LocalUnitary, QubitLayout, StateVector};
use qqlab_core::{OracleTable, SeedSpec};
use rand::Rng;

/// Bit of the basis index holding qubit `p`: address half lowest, answer
/// half next, working register on top; first position of each register is
/// its most significant bit.
fn bit(work: usize, n: usize, p: usize) -> usize {
    if p <= work {
        2 * n + work - p
    } else if p <= work + n {
        n - (p - work)
    } else {
        2 * n - (p - work - n)
    }
}

/// `E ⊗ U'` with the targets permuted into place.
fn embed(work: usize, n: usize, u: &LocalUnitary<f64>) -> Vec<Vec<Complex64>> {
    let total = work + 2 * n;
    let dim = 1usize << total;
    let k = u.targets().len();
    let bits: Vec<usize> = u.targets().iter().map(|&p| bit(work, n, p)).collect();
    let local = |idx: usize| (0..k).fold(0, |acc, j| (acc << 1) | ((idx >> bits[j]) & 1));
    let rest_mask: usize = !bits.iter().fold(0, |m, &b| m | (1 << b));
    let m = u.matrix();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, e) in row.iter_mut().enumerate() {
            if r & rest_mask == c & rest_mask {
                *e = m[local(r) * (1 << k) + local(c)];
            }
        }
    }
    out
}

#[test]
fn local_unitary_matches_dense_embedding() {
    let mut rng = SeedSpec::new(2024).rng();
    for case in 0..60 {
        let n = rng.random_range(1..=3);
        let work = rng.random_range(0..=(10 - 2 * n).min(4));
        let total = work + 2 * n;
        let layout = QubitLayout::new(work, n).unwrap();
        let k = rng.random_range(1..=total.min(3));
        let mut targets: Vec<usize> = Vec::new();
        while targets.len() < k {
            let p = rng.random_range(1..=total);
            if !targets.contains(&p) {
                targets.push(p);
            }
        }
        let u = LocalUnitary::<f64>::haar(targets, &mut rng).unwrap();
        let psi = StateVector::<f64>::random(layout, &mut rng);
        let got = psi.apply_local_unitary(&u).unwrap();
        let e = embed(work, n, &u);
        for (r, row) in e.iter().enumerate() {
            let want: Complex64 = row.iter().zip(psi.amplitudes()).map(|(a, b)| a * b).sum();
            let diff = (got.amplitudes()[r] - want).norm();
            assert!(diff <= 1e-12, "case {case}: amplitude {r} off by {diff}");
        }
    }
}

#[test]
fn query_matches_permutation_matrix() {
    let mut rng = SeedSpec::new(7).rng();
    for _ in 0..20 {
        let n = rng.random_range(1..=3);
        let work = rng.random_range(0..=2);
        let layout = QubitLayout::new(work, n).unwrap();
        let f = OracleTable::sample(n, &mut rng).unwrap();
        let psi = StateVector::<f64>::random(layout, &mut rng);
        let got = psi.apply_query(&f).unwrap();
        // |w, a, b⟩ ↦ |w, a, f(a) ⊕ b⟩ with a in the low n bits, b above
        let low = (1u64 << n) - 1;
        for (idx, amp) in psi.amplitudes().iter().enumerate() {
            let idx = idx as u64;
            let a = idx & low;
            let b = (idx >> n) & low;
            let image = (idx & !(low | (low << n))) | ((f.lookup(a) ^ b) << n) | a;
            assert_eq!(got.amplitudes()[image as usize], *amp);
        }
    }
}
