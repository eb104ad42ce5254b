//! Graph families with closed-form (pseudo-)inverses: stars, pendant-vertex
//! graphs `G_B^{k,1}`, coronas `G_B^{1,1}` and pendant-path graphs
//! `G_B^{1,l}`.
//!
//! Vertex order is fixed so the block formulas line up with the adjacency
//! matrix: the attached vertices come first in blocks of `m = |G_B|`, and
//! the vertices of `G_B` come last. In `G_B^{k,1}` vertex `p·m + v` is the
//! `p`-th pendant of base vertex `v`. In `G_B^{1,l}` vertex `i·m + v` is at
//! distance `i + 1` from base vertex `v` along its path.

use crate::error::{Error, Result};
use crate::graph::{is_isomorphic, Graph};
use crate::ratmath::{MathError, RatMatrix, Rational};
use crate::signability::{find_signature, pseudo_inverse_graph, Convention, Signature, Target};
use crate::spectral::sym_eigenvalues;

/// Star on `n + 1` vertices with hub `0`.
pub fn star(n: usize) -> Graph {
    assert!(n >= 1, "a star needs at least one leaf");
    Graph::from_edges(n + 1, (1..=n).map(|i| (0, i)))
}

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i)))
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "a cycle needs at least three vertices");
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
}

pub fn complete(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).flat_map(|j| (0..j).map(move |i| (i, j))))
}

/// Fulvene: a 5-cycle `0-1-2-3-4` with a pendant vertex `5` on vertex `4`.
pub fn fulvene() -> Graph {
    Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (4, 5)])
}

/// `G_B^{k,1}`: `k` pendant vertices on every vertex of `g_b`.
pub fn pendant_vertices(g_b: &Graph, k: usize) -> Graph {
    assert!(k >= 1, "k must be positive");
    let m = g_b.order();
    let base = k * m;
    let mut g = Graph::empty((k + 1) * m);
    for (u, v) in g_b.edges() {
        g.add_edge(base + u, base + v);
    }
    for p in 0..k {
        for v in 0..m {
            g.add_edge(p * m + v, base + v);
        }
    }
    g
}

/// The corona `G_B^{1,1}`.
pub fn corona(g_b: &Graph) -> Graph {
    pendant_vertices(g_b, 1)
}

fn invertible(b: &RatMatrix) -> Result<RatMatrix> {
    Ok(b.inv()?)
}

/// `M† = (1/k²) ((-J⊗B, kK), (kKᵀ, 0))` with `J` the `k×k` all-ones matrix
/// and `K` the stacked identities.
pub fn pendant_vertices_pinv(g_b: &Graph, k: usize) -> Result<RatMatrix> {
    assert!(k >= 1, "k must be positive");
    let b = g_b.adjacency();
    invertible(&b)?;
    let m = b.rows();
    let kk = Rational::from(k as i64);
    let ones = RatMatrix::from_i64(&vec![vec![1i64; k]; k]);
    let stacked = RatMatrix::from_i64(&vec![vec![1i64]; k]).kron(&RatMatrix::identity(m));
    let top_right = stacked.scale(&kk);
    let bottom_left = top_right.transpose();
    let zero = RatMatrix::zeros(m, m);
    let m_dag = RatMatrix::from_blocks(&[vec![&ones.kron(&b).neg(), &top_right], vec![&bottom_left, &zero]])?;
    Ok(m_dag.scale(&(kk.clone() * kk).recip()?))
}

/// Predicted spectrum of `G_B^{k,1}`, ascending: `(k-1)m` zeros and
/// `(μ ± √(μ² + 4k)) / 2` for every eigenvalue `μ` of `B`.
pub fn bordered_spectrum(g_b: &Graph, k: usize) -> Result<Vec<f64>> {
    assert!(k >= 1, "k must be positive");
    let b = g_b.adjacency();
    if b.det()?.is_zero() {
        return Err(MathError::SingularMatrix.into());
    }
    let mut out = vec![0.0; (k - 1) * g_b.order()];
    for mu in sym_eigenvalues(&b)? {
        let r = (mu * mu + 4.0 * k as f64).sqrt();
        out.push((mu - r) / 2.0);
        out.push((mu + r) / 2.0);
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// `G_B^{1,l}`: a path on `l` vertices hung from every vertex of `g_b`.
pub fn pendant_paths(g_b: &Graph, l: usize) -> Graph {
    assert!(l >= 1, "l must be positive");
    let m = g_b.order();
    let base = l * m;
    let mut g = Graph::empty((l + 1) * m);
    for (u, v) in g_b.edges() {
        g.add_edge(base + u, base + v);
    }
    for v in 0..m {
        g.add_edge(v, base + v);
        for i in 1..l {
            g.add_edge((i - 1) * m + v, i * m + v);
        }
    }
    g
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InverseMode {
    /// Assemble from the tabulated block patterns (`l <= 5`).
    #[default]
    ClosedForm,
    /// Exact elimination on the adjacency matrix.
    General,
}

pub const MAX_CLOSED_FORM_PATH: usize = 5;

// Block codes: 0, I, -I (i), B, -B (b), B⁻¹ (V), -B⁻¹ (v).
const PATH_INVERSES: [&[&str]; 5] = [
    &["bI", "I0"],
    &["0I0", "IVv", "0vV"],
    &["b0BI", "00I0", "BIbi", "I0i0"],
    &["0I0i0", "IV0vv", "000I0", "ivIVV", "0v0VV"],
    &["b0B0bI", "00I0i0", "BIb0Bi", "0000I0", "biBIbI", "I0i0I0"],
];

fn assemble_pattern(rows: &[&str], b: &RatMatrix, b_inv: &RatMatrix) -> Result<RatMatrix> {
    let m = b.rows();
    let id = RatMatrix::identity(m);
    let blocks = [
        ('0', RatMatrix::zeros(m, m)),
        ('I', id.clone()),
        ('i', id.neg()),
        ('B', b.clone()),
        ('b', b.neg()),
        ('V', b_inv.clone()),
        ('v', b_inv.neg()),
    ];
    let lookup = |c: char| &blocks.iter().find(|(k, _)| *k == c).expect("known block code").1;
    let grid: Vec<Vec<&RatMatrix>> = rows.iter().map(|r| r.chars().map(lookup).collect()).collect();
    Ok(RatMatrix::from_blocks(&grid)?)
}

/// Inverse of the adjacency matrix of `G_B^{1,l}`.
pub fn pendant_paths_inverse(g_b: &Graph, l: usize, mode: InverseMode) -> Result<RatMatrix> {
    assert!(l >= 1, "l must be positive");
    let b = g_b.adjacency();
    let b_inv = invertible(&b)?;
    match mode {
        InverseMode::General => Ok(pendant_paths(g_b, l).adjacency().inv()?),
        InverseMode::ClosedForm if l > MAX_CLOSED_FORM_PATH => Err(Error::Unsupported(format!(
            "closed form is tabulated for l <= {MAX_CLOSED_FORM_PATH}, got {l}"
        ))),
        InverseMode::ClosedForm => assemble_pattern(PATH_INVERSES[l - 1], &b, &b_inv),
    }
}

fn block_signature(parts: &[(i8, &Signature)]) -> Signature {
    let mut out = Vec::new();
    for (sign, d) in parts {
        out.extend(d.as_slice().iter().map(|x| x * sign));
    }
    Signature::new(out)
}

/// A signature of `G_B^{1,l}`'s inverse built blockwise from a signature
/// of the base:
///
/// * odd `l`, nonpositive: `diag(I, [I,-I], -[I,-I], ..., -I)`, always;
/// * odd `l`, nonnegative: `diag(D, -[D,D], [D,D], ..., D)` with
///   `D B D <= 0`, i.e. `g_b` bipartite;
/// * even `l`: `diag([D,D], -[D,D], ..., -D)` for the nonnegative and
///   `diag([D,-D], -[D,-D], ..., D)` for the nonpositive target, with `D`
///   signing `B⁻¹` to the same target.
///
/// Returns `None` when the base has no suitable `D`.
pub fn pendant_paths_signature(g_b: &Graph, l: usize, target: Target) -> Result<Option<Signature>> {
    assert!(l >= 1, "l must be positive");
    let b = g_b.adjacency();
    let b_inv = invertible(&b)?;
    let m = g_b.order();
    let half = l / 2;
    let alt = |j: usize| if j % 2 == 0 { 1i8 } else { -1 };
    let mut parts: Vec<(i8, Signature)> = Vec::new();
    if l % 2 == 1 {
        match target {
            Target::NonPos => {
                let id = Signature::all_positive(m);
                parts.push((1, id.clone()));
                for j in 0..half {
                    parts.push((alt(j), id.clone()));
                    parts.push((-alt(j), id.clone()));
                }
                parts.push((-1, id));
            }
            Target::NonNeg => {
                let Some(d) = find_signature(&b, Target::NonPos)? else {
                    return Ok(None);
                };
                parts.push((1, d.clone()));
                for j in 1..=half {
                    parts.push((alt(j), d.clone()));
                    parts.push((alt(j), d.clone()));
                }
                parts.push((1, d));
            }
        }
    } else {
        let Some(d) = find_signature(&b_inv, target)? else {
            return Ok(None);
        };
        let (second, last) = match target {
            Target::NonNeg => (1, -1),
            Target::NonPos => (-1, 1),
        };
        for j in 0..half {
            parts.push((alt(j), d.clone()));
            parts.push((alt(j) * second, d.clone()));
        }
        parts.push((last, d));
    }
    let refs: Vec<(i8, &Signature)> = parts.iter().map(|(s, d)| (*s, d)).collect();
    Ok(Some(block_signature(&refs)))
}

/// A signature of `G_B^{k,1}`'s pseudo-inverse: `diag(I, ..., I, -I)` for the
/// nonpositive target, and `diag(D, ..., D, D)` with `D B D <= 0` for the
/// nonnegative one.
pub fn pendant_vertices_signature(g_b: &Graph, k: usize, target: Target) -> Result<Option<Signature>> {
    assert!(k >= 1, "k must be positive");
    let m = g_b.order();
    let (d, last) = match target {
        Target::NonPos => (Signature::all_positive(m), -1),
        Target::NonNeg => match find_signature(&g_b.adjacency(), Target::NonPos)? {
            Some(d) => (d, 1),
            None => return Ok(None),
        },
    };
    let mut parts: Vec<(i8, &Signature)> = vec![(1, &d); k];
    parts.push((last, &d));
    Ok(Some(block_signature(&parts)))
}

/// Whether the negative pseudo-inverse graph of the corona `G_B^{1,1}` has
/// the same unweighted skeleton as the corona, up to isomorphism.
pub fn corona_self_inverse_check(g_b: &Graph) -> Result<bool> {
    let c = corona(g_b);
    let inverse = pseudo_inverse_graph(&c, Convention::Negative)?;
    Ok(match inverse.graph.support() {
        Some(skeleton) => is_isomorphic(&skeleton, &c),
        None => false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signability::{classify_matrix, SignClass};

    fn k2() -> Graph {
        complete(2)
    }

    #[test]
    fn star_pinv_is_scaled_adjacency() {
        for n in 1..=6 {
            let a = star(n).adjacency();
            let expected = a.scale(&Rational::new(1, n as i64).unwrap());
            assert_eq!(a.pinv(), expected);
            assert_eq!(classify_matrix(&a).unwrap().report.class, SignClass::Both);
        }
        let eig = sym_eigenvalues(&star(3).adjacency()).unwrap();
        let s3 = 3f64.sqrt();
        for (got, want) in eig.iter().zip([-s3, 0.0, 0.0, s3]) {
            assert!((got - want).abs() < 1e-10);
        }
    }

    #[test]
    fn pendant_vertices_shapes() {
        assert!(is_isomorphic(&pendant_vertices(&k2(), 1), &path(4)));
        let g = pendant_vertices(&k2(), 2);
        assert_eq!((g.order(), g.size()), (6, 5));
        assert_eq!(g.degrees(), vec![1, 1, 1, 1, 3, 3]);
        assert_eq!(pendant_vertices(&fulvene(), 2).order(), 18);
    }

    #[test]
    fn pendant_vertices_pinv_matches_elimination() {
        for (g, k) in [(k2(), 1), (k2(), 2), (cycle(3), 3), (fulvene(), 2), (path(4), 3)] {
            let closed = pendant_vertices_pinv(&g, k).unwrap();
            assert_eq!(closed, pendant_vertices(&g, k).adjacency().pinv());
        }
        assert_eq!(
            pendant_vertices_pinv(&k2(), 1).unwrap(),
            pendant_vertices(&k2(), 1).adjacency().inv().unwrap()
        );
        assert!(matches!(
            pendant_vertices_pinv(&path(3), 1),
            Err(Error::Math(MathError::SingularMatrix))
        ));
    }

    #[test]
    fn fulvene_pendant_vertices_are_negative_only() {
        let g = pendant_vertices(&fulvene(), 2);
        let c = classify_matrix(&g.adjacency()).unwrap();
        assert_eq!(c.report.class, SignClass::NegativeOnly);
    }

    #[test]
    fn bordered_spectrum_matches_jacobi() {
        for (g, k) in [(k2(), 1), (k2(), 2), (fulvene(), 2), (cycle(3), 3)] {
            let predicted = bordered_spectrum(&g, k).unwrap();
            let actual = sym_eigenvalues(&pendant_vertices(&g, k).adjacency()).unwrap();
            for (p, a) in predicted.iter().zip(&actual) {
                assert!((p - a).abs() < 1e-8, "{predicted:?} vs {actual:?}");
            }
        }
        let k2_twice = bordered_spectrum(&k2(), 2).unwrap();
        for (got, want) in k2_twice.iter().zip([-2.0, -1.0, 0.0, 0.0, 1.0, 2.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn pendant_paths_shapes() {
        assert_eq!(pendant_paths(&k2(), 1), pendant_vertices(&k2(), 1));
        let g = pendant_paths(&k2(), 2);
        assert_eq!((g.order(), g.size()), (6, 5));
        assert!(is_isomorphic(&g, &path(6)));
        assert!(!g.adjacency().det().unwrap().is_zero());
    }

    #[test]
    fn path_inverse_tables_match_elimination() {
        for g in [k2(), cycle(3), fulvene(), path(4), complete(4)] {
            for l in 1..=5 {
                let closed = pendant_paths_inverse(&g, l, InverseMode::ClosedForm).unwrap();
                let general = pendant_paths_inverse(&g, l, InverseMode::General).unwrap();
                assert_eq!(closed, general, "l = {l}");
            }
        }
        assert!(matches!(
            pendant_paths_inverse(&k2(), 6, InverseMode::ClosedForm),
            Err(Error::Unsupported(_))
        ));
        assert!(pendant_paths_inverse(&k2(), 7, InverseMode::General).is_ok());
    }

    #[test]
    fn odd_paths_are_integral_and_negative() {
        for g in [k2(), cycle(3), fulvene()] {
            for l in [1, 3, 5] {
                let m = pendant_paths(&g, l).adjacency();
                assert!(m.det().unwrap().abs().is_one());
                let inv = m.inv().unwrap();
                let d = pendant_paths_signature(&g, l, Target::NonPos).unwrap().unwrap();
                assert!(d.apply(&inv).all_entries_have_sign(-1));
            }
        }
    }

    #[test]
    fn path_signatures_validate() {
        for g in [k2(), cycle(3), fulvene(), path(4)] {
            let b_inv = g.adjacency().inv().unwrap();
            for l in 1..=6 {
                let inv = pendant_paths(&g, l).adjacency().inv().unwrap();
                for target in [Target::NonNeg, Target::NonPos] {
                    let premise = if l % 2 == 1 {
                        target == Target::NonPos || g.is_bipartite()
                    } else {
                        find_signature(&b_inv, target).unwrap().is_some()
                    };
                    let d = pendant_paths_signature(&g, l, target).unwrap();
                    assert_eq!(d.is_some(), premise, "l = {l}, {target:?}");
                    if let Some(d) = d {
                        assert!(d.apply(&inv).all_entries_have_sign(target.sign()), "l = {l}");
                    }
                }
            }
        }
    }

    #[test]
    fn fulvene_even_paths_are_negative() {
        let inv = pendant_paths_inverse(&fulvene(), 2, InverseMode::ClosedForm).unwrap();
        let c = classify_matrix(&pendant_paths(&fulvene(), 2).adjacency()).unwrap();
        assert_eq!(c.pinv, inv);
        assert!(c.report.class.is_negative());
    }

    #[test]
    fn pendant_vertex_signatures_validate() {
        for g in [k2(), cycle(3), fulvene(), path(4)] {
            for k in 1..=3 {
                let pinv = pendant_vertices_pinv(&g, k).unwrap();
                let neg = pendant_vertices_signature(&g, k, Target::NonPos).unwrap().unwrap();
                assert!(neg.apply(&pinv).all_entries_have_sign(-1));
                let pos = pendant_vertices_signature(&g, k, Target::NonNeg).unwrap();
                assert_eq!(pos.is_some(), g.is_bipartite());
                if let Some(pos) = pos {
                    assert!(pos.apply(&pinv).all_entries_have_sign(1));
                }
            }
        }
    }

    #[test]
    fn coronas_are_self_inverse() {
        for g in [Graph::empty(1), k2(), cycle(3), path(3), fulvene(), star(3)] {
            assert!(corona_self_inverse_check(&g).unwrap());
        }
        assert!(is_isomorphic(&corona(&Graph::empty(1)), &k2()));
    }
}
