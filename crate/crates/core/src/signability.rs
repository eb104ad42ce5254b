//! Signature-matrix signability of symmetric matrices and graphs.
//!
//! A symmetric matrix `H` is signable to a nonnegative (nonpositive) matrix
//! when some diagonal `±1` matrix `D` makes `D H D` entrywise `>= 0`
//! (`<= 0`). A matrix or graph is positively / negatively pseudo-invertible
//! when its Moore-Penrose pseudo-inverse is signable in that sense.
//!
//! Since `(D H D)_ij = d_i H_ij d_j`, the diagonal is untouched and every
//! nonzero off-diagonal entry fixes the product `d_i d_j`. Deciding
//! signability is therefore a parity propagation over the graph of nonzero
//! entries, which is what [`find_signature`] does.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, WeightedGraph};
use crate::ratmath::{MathError, RatMatrix, Rational};

/// Requested sign pattern of `D H D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Target {
    NonNeg,
    NonPos,
}

impl Target {
    pub fn sign(self) -> i8 {
        match self {
            Target::NonNeg => 1,
            Target::NonPos => -1,
        }
    }
}

/// Diagonal of a `±1` signature matrix.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Signature(Vec<i8>);

impl Signature {
    /// Panics if any entry is not `±1`.
    pub fn new(diag: Vec<i8>) -> Self {
        assert!(diag.iter().all(|&d| d == 1 || d == -1), "signature entries must be ±1");
        Signature(diag)
    }

    pub fn all_positive(n: usize) -> Self {
        Signature(vec![1; n])
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Entrywise product, i.e. the signature `D₁ D₂`.
    pub fn times(&self, other: &Signature) -> Signature {
        Signature(self.0.iter().zip(&other.0).map(|(a, b)| a * b).collect())
    }

    pub fn negated(&self) -> Signature {
        Signature(self.0.iter().map(|d| -d).collect())
    }

    pub fn concat(&self, other: &Signature) -> Signature {
        Signature(self.0.iter().chain(&other.0).copied().collect())
    }

    /// `D M D` for square `M`; `D_rows M D_cols` is [`Signature::apply_two_sided`].
    pub fn apply(&self, m: &RatMatrix) -> RatMatrix {
        self.apply_two_sided(m, self)
    }

    pub fn apply_two_sided(&self, m: &RatMatrix, right: &Signature) -> RatMatrix {
        assert_eq!(m.rows(), self.len());
        assert_eq!(m.cols(), right.len());
        RatMatrix::from_fn(m.rows(), m.cols(), |i, j| {
            let x = m.get(i, j);
            if self.0[i] * right.0[j] > 0 {
                x.clone()
            } else {
                -x
            }
        })
    }
}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SignClass {
    PositiveOnly,
    NegativeOnly,
    Both,
    Neither,
}

impl SignClass {
    pub fn from_flags(positive: bool, negative: bool) -> Self {
        match (positive, negative) {
            (true, true) => SignClass::Both,
            (true, false) => SignClass::PositiveOnly,
            (false, true) => SignClass::NegativeOnly,
            (false, false) => SignClass::Neither,
        }
    }

    pub fn is_positive(self) -> bool {
        matches!(self, SignClass::PositiveOnly | SignClass::Both)
    }

    pub fn is_negative(self) -> bool {
        matches!(self, SignClass::NegativeOnly | SignClass::Both)
    }

    pub fn name(self) -> &'static str {
        match self {
            SignClass::PositiveOnly => "PositiveOnly",
            SignClass::NegativeOnly => "NegativeOnly",
            SignClass::Both => "Both",
            SignClass::Neither => "Neither",
        }
    }
}

/// Witnesses for both sign targets of one symmetric matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignabilityReport {
    pub positive: Option<Signature>,
    pub negative: Option<Signature>,
    pub class: SignClass,
}

/// Solves `d_i d_j = s` for every constraint `(i, j, s)`, `s = ±1`, by
/// breadth-first propagation from the lowest unassigned index. The lowest
/// index of every connected component of the constraint graph gets `+1`.
pub(crate) fn solve_sign_constraints(
    n: usize,
    constraints: impl IntoIterator<Item = (usize, usize, i8)>,
) -> Option<Signature> {
    let mut adj: Vec<Vec<(usize, i8)>> = vec![Vec::new(); n];
    for (i, j, s) in constraints {
        if i == j {
            if s < 0 {
                return None;
            }
            continue;
        }
        adj[i].push((j, s));
        adj[j].push((i, s));
    }
    let mut d = vec![0i8; n];
    for start in 0..n {
        if d[start] != 0 {
            continue;
        }
        d[start] = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &(v, s) in &adj[u] {
                let want = d[u] * s;
                if d[v] == 0 {
                    d[v] = want;
                    queue.push_back(v);
                } else if d[v] != want {
                    return None;
                }
            }
        }
    }
    Some(Signature(d))
}

fn require_symmetric(h: &RatMatrix) -> Result<()> {
    if h.is_symmetric() {
        Ok(())
    } else {
        Err(MathError::Shape(format!("{}x{} matrix is not symmetric", h.rows(), h.cols())).into())
    }
}

/// Canonical signature `D` with `D H D >= 0` (or `<= 0`), if one exists.
pub fn find_signature(h: &RatMatrix, target: Target) -> Result<Option<Signature>> {
    require_symmetric(h)?;
    let t = target.sign();
    let n = h.rows();
    if (0..n).any(|i| h.get(i, i).signum() * t < 0) {
        return Ok(None);
    }
    let constraints = (0..n).flat_map(|i| {
        (i + 1..n).filter_map(move |j| {
            let s = h.get(i, j).signum();
            (s != 0).then_some((i, j, s * t))
        })
    });
    Ok(solve_sign_constraints(n, constraints))
}

/// Signability of `h` itself (not of its pseudo-inverse).
pub fn sign_report(h: &RatMatrix) -> Result<SignabilityReport> {
    let positive = find_signature(h, Target::NonNeg)?;
    let negative = find_signature(h, Target::NonPos)?;
    let class = SignClass::from_flags(positive.is_some(), negative.is_some());
    Ok(SignabilityReport {
        positive,
        negative,
        class,
    })
}

/// Pseudo-invertibility classification of a symmetric matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixClassification {
    pub pinv: RatMatrix,
    /// Signability of the pseudo-inverse.
    pub report: SignabilityReport,
    pub det: Rational,
    pub rank: usize,
    /// `det != 0`.
    pub invertible: bool,
    /// The inverse exists and is integral; for integer matrices this is `det = ±1`.
    pub integral: bool,
}

pub fn classify_matrix(a: &RatMatrix) -> Result<MatrixClassification> {
    require_symmetric(a)?;
    let det = a.det()?;
    let invertible = !det.is_zero();
    let rank = if invertible { a.rows() } else { a.rank() };
    let pinv = a.pinv();
    let integral = invertible && pinv.is_integral();
    let report = sign_report(&pinv)?;
    Ok(MatrixClassification {
        pinv,
        report,
        det,
        rank,
        invertible,
        integral,
    })
}

/// Which witness to use when building a pseudo-inverse graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    /// Positive witness when present, otherwise negative.
    #[default]
    PreferPositive,
    Positive,
    Negative,
}

/// A pseudo-inverse graph with the witness that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoInverseGraph {
    pub graph: WeightedGraph,
    pub target: Target,
    pub signature: Signature,
}

/// `D A† D` (positive case) or `-D A† D` (negative case) for a symmetric
/// weighted adjacency matrix.
pub fn pseudo_inverse_of_matrix(a: &RatMatrix, convention: Convention) -> Result<PseudoInverseGraph> {
    require_symmetric(a)?;
    let pinv = a.pinv();
    let pick = |target| find_signature(&pinv, target).map(|s| s.map(|s| (target, s)));
    let chosen = match convention {
        Convention::Positive => pick(Target::NonNeg)?,
        Convention::Negative => pick(Target::NonPos)?,
        Convention::PreferPositive => match pick(Target::NonNeg)? {
            Some(found) => Some(found),
            None => pick(Target::NonPos)?,
        },
    };
    let (target, signature) = chosen.ok_or(Error::NotSignable)?;
    let mut signed = signature.apply(&pinv);
    if target == Target::NonPos {
        signed = signed.neg();
    }
    debug_assert!(signed.all_entries_have_sign(1));
    Ok(PseudoInverseGraph {
        graph: WeightedGraph::from_symmetric(&signed),
        target,
        signature,
    })
}

pub fn pseudo_inverse_graph(g: &Graph, convention: Convention) -> Result<PseudoInverseGraph> {
    pseudo_inverse_of_matrix(&g.adjacency(), convention)
}

/// Checks `(G†)† = G`: inverting the pseudo-inverse graph with the same sign
/// convention gives back the unit-weight original.
pub fn double_pseudo_inverse_check(g: &Graph) -> Result<bool> {
    let first = pseudo_inverse_graph(g, Convention::PreferPositive)?;
    let convention = match first.target {
        Target::NonNeg => Convention::Positive,
        Target::NonPos => Convention::Negative,
    };
    let second = pseudo_inverse_of_matrix(&first.graph.adjacency(), convention)?;
    Ok(second.graph.adjacency() == g.adjacency())
}

/// A permutation bringing a symmetric matrix to the form `((0, K), (Kᵀ, 0))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OffDiagonalWitness {
    /// Position `i` of the permuted matrix holds old index `permutation[i]`.
    pub permutation: Vec<usize>,
    pub n: usize,
    pub m: usize,
    pub k_block: RatMatrix,
}

/// Two-colors the nonzero pattern of `m`. The lowest index of each
/// component is colored 0; color-1 indices come first, each class in
/// ascending order. `None` if the diagonal is nonzero or the pattern has an
/// odd cycle.
pub fn off_diagonal_form(m: &RatMatrix) -> Result<Option<OffDiagonalWitness>> {
    require_symmetric(m)?;
    let size = m.rows();
    if (0..size).any(|i| !m.get(i, i).is_zero()) {
        return Ok(None);
    }
    let pattern = Graph::from_edges(
        size,
        (0..size).flat_map(|i| (i + 1..size).filter(move |&j| !m.get(i, j).is_zero()).map(move |j| (i, j))),
    );
    let Some(colors) = pattern.two_coloring() else {
        return Ok(None);
    };
    let first: Vec<usize> = (0..size).filter(|&v| colors[v] == 1).collect();
    let second: Vec<usize> = (0..size).filter(|&v| colors[v] == 0).collect();
    let k_block = m.select(&first, &second);
    let n = first.len();
    let mut permutation = first;
    permutation.extend(second);
    Ok(Some(OffDiagonalWitness {
        permutation,
        n,
        m: size - n,
        k_block,
    }))
}

/// `((0, (K†)ᵀ), (K†, 0))`, the pseudo-inverse of `((0, K), (Kᵀ, 0))`.
pub fn bipartite_pseudo_inverse_pattern(k: &RatMatrix) -> RatMatrix {
    let kp = k.pinv();
    let kpt = kp.transpose();
    let (n, m) = (k.rows(), k.cols());
    RatMatrix::from_blocks(&[
        vec![&RatMatrix::zeros(n, n), &kpt],
        vec![&kp, &RatMatrix::zeros(m, m)],
    ])
    .expect("block shapes agree")
}

/// Whether `D_B K† D_A` is single-signed, with `D_A`, `D_B` the restrictions
/// of `signature` (indexed like the original matrix) to the two blocks of
/// the witness.
pub fn off_diagonal_block_single_signed(w: &OffDiagonalWitness, signature: &Signature) -> bool {
    let s = signature.as_slice();
    let d_a = Signature::new(w.permutation[..w.n].iter().map(|&v| s[v]).collect());
    let d_b = Signature::new(w.permutation[w.n..].iter().map(|&v| s[v]).collect());
    let block = d_b.apply_two_sided(&w.k_block.pinv(), &d_a);
    block.all_entries_have_sign(1) || block.all_entries_have_sign(-1)
}

fn inf_norm(v: &RatMatrix) -> Rational {
    v.max_abs()
}

/// Evaluates `‖A† A x‖∞ <= ‖A†‖₁ ‖b‖∞` exactly, where `‖·‖₁` sums absolute
/// values of all entries. Requires `b >= 0`, `-b <= A x <= b` and `A`
/// positively or negatively pseudo-invertible.
pub fn monotone_bound_check(a: &RatMatrix, x: &[Rational], b: &[Rational]) -> Result<bool> {
    require_symmetric(a)?;
    let n = a.rows();
    if x.len() != n || b.len() != n {
        return Err(MathError::Shape(format!("vectors must have length {n}")).into());
    }
    if b.iter().any(Rational::is_negative) {
        return Err(Error::PreconditionFailed("b must be nonnegative".into()));
    }
    let xv = RatMatrix::column(x.to_vec());
    let ax = a.matmul(&xv)?;
    if ax.entries().iter().zip(b).any(|(y, bi)| y.abs() > *bi) {
        return Err(Error::PreconditionFailed("-b <= A x <= b violated".into()));
    }
    let pinv = a.pinv();
    let report = sign_report(&pinv)?;
    if report.class == SignClass::Neither {
        return Err(Error::PreconditionFailed(
            "matrix is neither positively nor negatively pseudo-invertible".into(),
        ));
    }
    let lhs = inf_norm(&pinv.matmul(&ax)?);
    let rhs = pinv.abs_sum() * inf_norm(&RatMatrix::column(b.to_vec()));
    Ok(lhs <= rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i)))
    }

    fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i)))
    }

    fn triangle() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)])
    }

    /// Lexicographically largest valid signature (+1 before -1) over all 2^n.
    fn brute_force(h: &RatMatrix, target: Target) -> Option<Vec<i8>> {
        let n = h.rows();
        (0..1u32 << n)
            .map(|mask| (0..n).map(|i| if mask >> (n - 1 - i) & 1 == 0 { 1 } else { -1 }).collect::<Vec<i8>>())
            .find(|d| Signature::new(d.clone()).apply(h).all_entries_have_sign(target.sign()))
    }

    #[test]
    fn k2_signatures() {
        let h = path(2).adjacency().inv().unwrap();
        assert_eq!(find_signature(&h, Target::NonNeg).unwrap().unwrap().as_slice(), &[1, 1]);
        assert_eq!(find_signature(&h, Target::NonPos).unwrap().unwrap().as_slice(), &[1, -1]);
    }

    #[test]
    fn triangle_inverse_is_unsignable() {
        let h = triangle().adjacency().pinv();
        assert_eq!(find_signature(&h, Target::NonNeg).unwrap(), None);
        assert_eq!(find_signature(&h, Target::NonPos).unwrap(), None);
        assert_eq!(brute_force(&h, Target::NonNeg), None);
        assert_eq!(brute_force(&h, Target::NonPos), None);
    }

    #[test]
    fn p5_pseudo_inverse_is_unsignable() {
        let h = path(5).adjacency().pinv();
        assert_eq!(sign_report(&h).unwrap().class, SignClass::Neither);
        assert_eq!(classify_matrix(&path(5).adjacency()).unwrap().report.class, SignClass::Neither);
    }

    #[test]
    fn asymmetric_input_rejected() {
        let m = RatMatrix::from_i64(&[[0, 1], [0, 0]]);
        assert!(matches!(
            find_signature(&m, Target::NonNeg),
            Err(Error::Math(MathError::Shape(_)))
        ));
    }

    #[test]
    fn zero_matrix_is_both() {
        let r = sign_report(&RatMatrix::zeros(3, 3)).unwrap();
        assert_eq!(r.class, SignClass::Both);
        assert_eq!(r.positive.unwrap(), Signature::all_positive(3));
    }

    #[test]
    fn matches_brute_force_on_small_matrices() {
        let mut seed = 7u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) % 5) as i64 - 2
        };
        for n in 1..=6 {
            for _ in 0..60 {
                let mut m = RatMatrix::zeros(n, n);
                for i in 0..n {
                    for j in i..n {
                        let v = Rational::from(if i == j { next() / 2 } else { next() });
                        m.set(i, j, v.clone());
                        m.set(j, i, v);
                    }
                }
                for t in [Target::NonNeg, Target::NonPos] {
                    let fast = find_signature(&m, t).unwrap().map(|s| s.as_slice().to_vec());
                    assert_eq!(fast, brute_force(&m, t), "{m:?} {t:?}");
                }
            }
        }
    }

    #[test]
    fn star_classification_and_graph() {
        let c = classify_matrix(&star(5).adjacency()).unwrap();
        assert_eq!(c.report.class, SignClass::Both);
        assert!(!c.invertible);
        let pig = pseudo_inverse_graph(&star(5), Convention::PreferPositive).unwrap();
        assert_eq!(pig.target, Target::NonNeg);
        assert_eq!(pig.graph.edge_count(), 5);
        assert!(pig.graph.weights().all(|(_, w)| *w == Rational::new(1, 5).unwrap()));
        assert!(double_pseudo_inverse_check(&star(5)).unwrap());
    }

    #[test]
    fn k2_pseudo_inverse_graph_is_itself() {
        let pig = pseudo_inverse_graph(&path(2), Convention::PreferPositive).unwrap();
        assert_eq!(pig.graph.adjacency(), path(2).adjacency());
    }

    #[test]
    fn neither_class_is_not_signable() {
        assert_eq!(
            pseudo_inverse_graph(&path(5), Convention::PreferPositive),
            Err(Error::NotSignable)
        );
        assert_eq!(double_pseudo_inverse_check(&path(5)), Err(Error::NotSignable));
    }

    #[test]
    fn p5_off_diagonal_witness() {
        let w = off_diagonal_form(&path(5).adjacency()).unwrap().unwrap();
        assert_eq!((w.n, w.m), (2, 3));
        assert_eq!(w.k_block, RatMatrix::from_i64(&[[1, 1, 0], [0, 1, 1]]));
        let permuted = path(5).adjacency().permute_symmetric(&w.permutation);
        assert!(permuted.block(0, 0, 2, 2).is_zero());
        assert!(permuted.block(2, 2, 3, 3).is_zero());
        assert_eq!(permuted.block(0, 2, 2, 3), w.k_block);
        assert_eq!(off_diagonal_form(&triangle().adjacency()).unwrap(), None);
    }

    #[test]
    fn bipartite_pattern_matches_pinv() {
        let k = RatMatrix::from_i64(&[[1, 1, 0], [0, 1, 1]]);
        let m = bipartite_pseudo_inverse_pattern(&k);
        let w = off_diagonal_form(&path(5).adjacency()).unwrap().unwrap();
        assert_eq!(m, path(5).adjacency().permute_symmetric(&w.permutation).pinv());
        let star_k = RatMatrix::from_i64(&[[1], [1], [1], [1]]);
        let full = RatMatrix::from_blocks(&[
            vec![&RatMatrix::zeros(4, 4), &star_k],
            vec![&star_k.transpose(), &RatMatrix::zeros(1, 1)],
        ])
        .unwrap();
        assert_eq!(bipartite_pseudo_inverse_pattern(&star_k), full.scale(&Rational::new(1, 4).unwrap()));
        let id = RatMatrix::identity(3);
        let mi = RatMatrix::from_blocks(&[
            vec![&RatMatrix::zeros(3, 3), &id],
            vec![&id, &RatMatrix::zeros(3, 3)],
        ])
        .unwrap();
        assert_eq!(bipartite_pseudo_inverse_pattern(&id), mi);
    }

    #[test]
    fn monotone_bound_examples() {
        let k2 = path(2).adjacency();
        let one = Rational::one;
        assert!(monotone_bound_check(&k2, &[one(), Rational::zero()], &[one(), one()]).unwrap());
        let zeros = vec![Rational::zero(); 2];
        assert!(monotone_bound_check(&k2, &zeros, &zeros).unwrap());
        assert!(matches!(
            monotone_bound_check(&k2, &[one(), one()], &zeros),
            Err(Error::PreconditionFailed(_))
        ));
        let p5 = path(5).adjacency();
        let z5 = vec![Rational::zero(); 5];
        assert!(matches!(
            monotone_bound_check(&p5, &z5, &z5),
            Err(Error::PreconditionFailed(_))
        ));
    }
}
