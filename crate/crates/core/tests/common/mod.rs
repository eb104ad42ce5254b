//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use mpgraph::graphio::read_graph6;
use mpgraph::{Graph, RatMatrix, Rational};
use rand::Rng;

pub fn corpus_path(m: usize) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(format!("graph{m}c.g6"))
}

/// `(raw line, graph)` for every connected graph on `m` vertices.
pub fn load_corpus(m: usize) -> Vec<(String, Graph)> {
    let file = File::open(corpus_path(m)).expect("corpus file present");
    read_graph6(BufReader::new(file))
        .map(|r| {
            let r = r.expect("corpus parses");
            (r.raw, r.graph)
        })
        .collect()
}

pub fn graphs_up_to(max_m: usize) -> Vec<Graph> {
    (1..=max_m).flat_map(|m| load_corpus(m).into_iter().map(|(_, g)| g)).collect()
}

pub fn sign_pattern(h: &RatMatrix) -> Vec<i8> {
    h.entries().iter().map(Rational::signum).collect()
}

/// Exhaustive search over all `2ⁿ` signatures, `+1` preferred position by
/// position: the first hit is the lexicographically largest valid vector.
pub fn brute_force_signature(signs: &[i8], n: usize, target: i8) -> Option<Vec<i8>> {
    'outer: for idx in 0u32..(1 << n) {
        let d: Vec<i8> = (0..n).map(|i| if idx >> (n - 1 - i) & 1 == 0 { 1 } else { -1 }).collect();
        for i in 0..n {
            for j in 0..n {
                let s = signs[i * n + j] * d[i] * d[j];
                if s != 0 && s != target {
                    continue 'outer;
                }
            }
        }
        return Some(d);
    }
    None
}

pub fn random_symmetric(rng: &mut impl Rng, n: usize, lo: i64, hi: i64) -> RatMatrix {
    let mut m = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = Rational::from(rng.gen_range(lo..=hi));
            m.set(i, j, v.clone());
            m.set(j, i, v);
        }
    }
    m
}

/// The four Penrose identities, exactly.
pub fn penrose(a: &RatMatrix, p: &RatMatrix) -> bool {
    let ap = a.matmul(p).unwrap();
    let pa = p.matmul(a).unwrap();
    ap.matmul(a).unwrap() == *a
        && pa.matmul(p).unwrap() == *p
        && ap.transpose() == ap
        && pa.transpose() == pa
}

pub fn random_partition(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    loop {
        let first: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        if !first.is_empty() && first.len() < n {
            return first;
        }
    }
}
