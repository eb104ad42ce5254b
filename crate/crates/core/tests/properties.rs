mod common;

use mpgraph::blockops::{BlockSystem, Which};
use mpgraph::census::{run_census, CensusOptions};
use mpgraph::constructions::{bordered_spectrum, pendant_paths, pendant_vertices};
use mpgraph::graphio::{parse_graph6, write_graph6};
use mpgraph::signability::{find_signature, sign_report, Signature, Target};
use mpgraph::spectral::sym_eigenvalues;
use mpgraph::{Graph, RatMatrix, Rational};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

fn int_matrix(rows: usize, cols: usize, lo: i64, hi: i64) -> impl Strategy<Value = RatMatrix> {
    prop::collection::vec(lo..=hi, rows * cols).prop_map(move |v| {
        RatMatrix::from_fn(rows, cols, |i, j| Rational::from(v[i * cols + j]))
    })
}

fn symmetric(max_n: usize, lo: i64, hi: i64) -> impl Strategy<Value = RatMatrix> {
    (1..=max_n).prop_flat_map(move |n| {
        int_matrix(n, n, lo, hi).prop_map(|m| {
            let n = m.rows();
            RatMatrix::from_fn(n, n, |i, j| m.get(i.min(j), i.max(j)).clone())
        })
    })
}

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * n.saturating_sub(1) / 2).prop_map(move |bits| {
            let pairs = (1..n).flat_map(|j| (0..j).map(move |i| (i, j)));
            Graph::from_edges(n, pairs.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e))
        })
    })
}

fn to_dmatrix(a: &RatMatrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(a.rows(), a.cols(), &a.to_f64())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pinv_satisfies_penrose_rectangular(
        (r, c) in (1usize..=6, 1usize..=6),
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = RatMatrix::from_fn(r, c, |_, _| Rational::from(rand::Rng::gen_range(&mut rng, -3i64..=3)));
        prop_assert!(penrose(&a, &a.pinv()));
        prop_assert_eq!(a.pinv().pinv(), a.clone());
        prop_assert_eq!(a.transpose().pinv(), a.pinv().transpose());
    }

    #[test]
    fn pinv_matches_svd_oracle(a in symmetric(7, -3, 3)) {
        let ours = a.pinv();
        let oracle = to_dmatrix(&a).pseudo_inverse(1e-10).unwrap();
        let ours_f = to_dmatrix(&ours);
        let diff = (ours_f - oracle).abs().max();
        prop_assert!(diff < 1e-9, "max difference {diff}");
    }

    #[test]
    fn det_is_product_of_eigenvalues(a in symmetric(7, -2, 2)) {
        let det = a.det().unwrap().to_f64();
        let product: f64 = sym_eigenvalues(&a).unwrap().iter().product();
        prop_assert!((det - product).abs() <= 1e-8 * det.abs().max(1.0), "{det} vs {product}");
    }

    #[test]
    fn inverse_agrees_with_pinv_when_invertible(a in symmetric(6, -2, 2)) {
        match a.inv() {
            Ok(inv) => prop_assert_eq!(inv, a.pinv()),
            Err(_) => prop_assert!(a.det().unwrap().is_zero()),
        }
    }

    #[test]
    fn signature_matches_exhaustive_search(h in symmetric(8, -1, 1)) {
        let signs = sign_pattern(&h);
        for target in [Target::NonNeg, Target::NonPos] {
            let ours = find_signature(&h, target).unwrap().map(|s| s.as_slice().to_vec());
            prop_assert_eq!(ours, brute_force_signature(&signs, h.rows(), target.sign()));
        }
    }

    #[test]
    fn signatures_are_involutions(d in prop::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], 1..8)) {
        let s = Signature::new(d.clone());
        let m = RatMatrix::from_fn(d.len(), d.len(), |i, j| Rational::from((i * 7 + j) as i64 - 5));
        prop_assert_eq!(s.apply(&s.apply(&m)), m);
        prop_assert!(s.times(&s).as_slice().iter().all(|&x| x == 1));
    }

    #[test]
    fn graph6_round_trip(g in graph(20)) {
        let text = write_graph6(&g);
        let back = parse_graph6(&text).unwrap();
        prop_assert_eq!(&back, &g);
        let popcount: u32 = text.bytes().skip(1).map(|b| u32::from(b - 63).count_ones()).sum();
        prop_assert_eq!(popcount as usize, g.size());
    }

    #[test]
    fn graph6_rejects_out_of_range_bytes(g in graph(12), pos in any::<prop::sample::Index>(), byte in 0u8..63) {
        let mut bytes = write_graph6(&g).into_bytes();
        let i = pos.index(bytes.len());
        bytes[i] = byte;
        let text = String::from_utf8(bytes).unwrap();
        prop_assert!(parse_graph6(&text).is_err());
    }

    #[test]
    fn graph6_never_panics(s in "[\\x20-\\x7f]{0,40}") {
        let _ = parse_graph6(&s);
    }

    #[test]
    fn bipartite_iff_nonpositively_signable(g in graph(9)) {
        let signable = find_signature(&g.adjacency(), Target::NonPos).unwrap().is_some();
        prop_assert_eq!(signable, g.is_bipartite());
    }

    #[test]
    fn relabeling_preserves_classification(g in graph(7), seed in any::<u64>()) {
        let mut perm: Vec<usize> = (0..g.order()).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let h = g.relabel(&perm);
        let class = |g: &Graph| sign_report(&g.adjacency().pinv()).unwrap().class;
        prop_assert_eq!(class(&g), class(&h));
        prop_assert_eq!(g.adjacency().det().unwrap(), h.adjacency().det().unwrap());
    }

    #[test]
    fn constructions_commute_with_relabeling(g in graph(5), seed in any::<u64>(), k in 1usize..=3, l in 1usize..=4) {
        prop_assume!(!g.adjacency().det().unwrap().is_zero());
        let mut perm: Vec<usize> = (0..g.order()).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let h = g.relabel(&perm);
        for (a, b) in [
            (pendant_vertices(&g, k), pendant_vertices(&h, k)),
            (pendant_paths(&g, l), pendant_paths(&h, l)),
        ] {
            let (ca, cb) = (sign_report(&a.adjacency().pinv()).unwrap(), sign_report(&b.adjacency().pinv()).unwrap());
            prop_assert_eq!(ca.class, cb.class);
            let (ea, eb) = (sym_eigenvalues(&a.adjacency()).unwrap(), sym_eigenvalues(&b.adjacency()).unwrap());
            prop_assert!(ea.iter().zip(&eb).all(|(x, y)| (x - y).abs() < 1e-8));
        }
        let (sa, sb) = (bordered_spectrum(&g, k).unwrap(), bordered_spectrum(&h, k).unwrap());
        prop_assert!(sa.iter().zip(&sb).all(|(x, y)| (x - y).abs() < 1e-8));
    }

    #[test]
    fn bordered_spectrum_symmetry_carries_over(g in graph(6), k in 1usize..=3) {
        prop_assume!(!g.adjacency().det().unwrap().is_zero());
        let symmetric = |e: &[f64]| e.iter().zip(e.iter().rev()).all(|(a, b)| (a + b).abs() < 1e-8);
        let base = sym_eigenvalues(&g.adjacency()).unwrap();
        let built = bordered_spectrum(&g, k).unwrap();
        prop_assert_eq!(symmetric(&base), symmetric(&built));
    }

    #[test]
    fn block_forms_agree_with_pinv(a in symmetric(8, -1, 1), seed in any::<u64>()) {
        prop_assume!(a.rows() >= 2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let first = random_partition(&mut rng, a.rows());
        let (sys, perm) = BlockSystem::from_partition(&a, &first).unwrap();
        prop_assert_eq!(sys.assemble(), a.permute_symmetric(&perm));
        let expected = a.pinv().permute_symmetric(&perm);
        let c = sys.compatibility();
        if c.k_is_compatible() {
            prop_assert_eq!(sys.banachiewicz_schur(Which::A).unwrap(), expected.clone());
        }
        if c.kt_is_compatible() {
            prop_assert_eq!(sys.banachiewicz_schur(Which::B).unwrap(), expected);
        }
        if c.fully_compatible() {
            prop_assert_eq!(sys.schur_identities().unwrap(), [true; 3]);
        }
        if c.k_right {
            // Lower-left block of M times the A-form vanishes.
            let prod = sys.assemble().matmul(&sys.banachiewicz_schur_candidate(Which::A)).unwrap();
            prop_assert!(prod.block(sys.n(), 0, sys.m(), sys.n()).is_zero());
        }
    }

    #[test]
    fn sufficient_witnesses_are_valid(a in symmetric(6, -2, 2), seed in any::<u64>()) {
        prop_assume!(a.rows() >= 2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (sys, perm) = BlockSystem::from_partition(&a, &random_partition(&mut rng, a.rows())).unwrap();
        let pinv = a.pinv().permute_symmetric(&perm);
        let w = sys.sufficient_signature();
        for (d, t) in [(w.positive, 1i8), (w.negative, -1)] {
            if let Some(d) = d {
                prop_assert!(d.apply(&pinv).all_entries_have_sign(t));
                prop_assert!(brute_force_signature(&sign_pattern(&pinv), pinv.rows(), t).is_some());
            }
        }
    }

    #[test]
    fn schur_complement_of_invertible_is_invertible(a in symmetric(6, -2, 2), seed in any::<u64>()) {
        prop_assume!(a.rows() >= 2 && !a.det().unwrap().is_zero());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (sys, _) = BlockSystem::from_partition(&a, &random_partition(&mut rng, a.rows())).unwrap();
        if sys.compatibility().k_right {
            prop_assert!(sys.schur_invertibility_check().unwrap());
        }
    }
}

#[test]
fn census_is_order_and_worker_independent() {
    let lines: Vec<String> = load_corpus(6).into_iter().map(|(raw, _)| raw).collect();
    let base = run_census(lines.join("\n").as_bytes(), 6, &CensusOptions::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for jobs in [1, 2, 3] {
        let mut shuffled = lines.clone();
        shuffled.shuffle(&mut rng);
        let opts = CensusOptions {
            jobs: Some(jobs),
            ..Default::default()
        };
        assert_eq!(run_census(shuffled.join("\n").as_bytes(), 6, &opts).unwrap(), base);
        let (left, right) = shuffled.split_at(jobs * 10);
        let a = run_census(left.join("\n").as_bytes(), 6, &opts).unwrap();
        let b = run_census(right.join("\n").as_bytes(), 6, &opts).unwrap();
        assert_eq!(a.merge(&b), base);
    }
}

#[test]
fn integral_classes_match_pseudo_classes() {
    for (_, g) in load_corpus(8) {
        let r = mpgraph::census::classify_one(&g);
        if r.integral {
            assert_eq!(r.int_class, Some(r.pseudo_class));
            assert!(g.adjacency().inv().unwrap().is_integral());
        }
    }
}
