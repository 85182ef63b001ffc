#![allow(dead_code)]

use ncqo::algebra::{Generator, GeneratorKind, ModeId, OperatorWord};

pub const MODE_NAMES: [&str; 3] = ["k1", "k2", "k3"];

/// Restricted growth strings of length `len` with at most `max_blocks` blocks:
/// every labelling of `len` slots by modes, up to renaming of the modes.
pub fn growth_strings(len: usize, max_blocks: usize) -> Vec<Vec<usize>> {
    fn rec(
        cur: &mut Vec<usize>,
        len: usize,
        max_blocks: usize,
        used: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for b in 0..(used + 1).min(max_blocks) {
            cur.push(b);
            rec(cur, len, max_blocks, used.max(b + 1), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), len, max_blocks, 0, &mut out);
    out
}

/// All label sequences of length `len` over `modes` modes (no quotient).
pub fn all_labellings(len: usize, modes: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..modes).map(move |m| {
                    let mut v = w.clone();
                    v.push(m);
                    v
                })
            })
            .collect();
    }
    out
}

pub fn kind_sequences(len: usize, kinds: &[GeneratorKind]) -> Vec<Vec<GeneratorKind>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w: Vec<GeneratorKind>| {
                kinds.iter().map(move |&k| {
                    let mut v = w.clone();
                    v.push(k);
                    v
                })
            })
            .collect();
    }
    out
}

pub fn build_word(kinds: &[GeneratorKind], labels: &[usize]) -> OperatorWord {
    OperatorWord::new(
        kinds
            .iter()
            .zip(labels)
            .map(|(&kind, &l)| Generator {
                kind,
                mode: ModeId::from(MODE_NAMES[l]),
            })
            .collect(),
    )
}

pub const LADDER: [GeneratorKind; 2] = [GeneratorKind::Annihilate, GeneratorKind::Create];
pub const ALL_KINDS: [GeneratorKind; 3] = [
    GeneratorKind::Annihilate,
    GeneratorKind::Create,
    GeneratorKind::Unit,
];

/// Every word of length `1..=max_len` over `kinds`, modes labelled up to renaming.
pub fn words_up_to_relabel(
    max_len: usize,
    max_modes: usize,
    kinds: &[GeneratorKind],
) -> Vec<OperatorWord> {
    let mut out = Vec::new();
    for len in 1..=max_len {
        let labels = growth_strings(len, max_modes);
        for ks in kind_sequences(len, kinds) {
            for l in &labels {
                out.push(build_word(&ks, l));
            }
        }
    }
    out
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
