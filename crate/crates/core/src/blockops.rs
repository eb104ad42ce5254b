//! Block symmetric matrices `M = ((A, K), (Kᵀ, B))`, their generalized
//! Schur complements and Banachiewicz-Schur pseudo-inverses.
//!
//! With `S_A = A - K B† Kᵀ` and `S_B = B - Kᵀ A† K`, the A-form
//!
//! ```text
//! M† = ( S_A†           -S_A† K B†            )
//!      ( -B† Kᵀ S_A†    B† + B† Kᵀ S_A† K B†  )
//! ```
//!
//! is valid when `K(I - B†B) = 0` and `(I - S_A S_A†)K = 0`, i.e. `K` is
//! (A,B) compatible. The B-form swaps the roles of the blocks and needs
//! `(I - A A†)K = 0` and `K(I - S_B† S_B) = 0`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ratmath::{MathError, RatMatrix};
use crate::signability::{find_signature, solve_sign_constraints, Signature, Target};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSystem {
    a: RatMatrix,
    b: RatMatrix,
    k: RatMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    A,
    B,
}

/// The four compatibility conditions, each evaluated exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CompatibilityReport {
    /// `K(I - B†B) = 0`
    pub k_right: bool,
    /// `(I - S_A S_A†)K = 0`
    pub k_schur: bool,
    /// `(I - A A†)K = 0`
    pub kt_right: bool,
    /// `K(I - S_B† S_B) = 0`
    pub kt_schur: bool,
}

impl CompatibilityReport {
    /// `K` is (A,B) compatible: the A-form applies.
    pub fn k_is_compatible(&self) -> bool {
        self.k_right && self.k_schur
    }

    /// `Kᵀ` is (B,A) compatible: the B-form applies.
    pub fn kt_is_compatible(&self) -> bool {
        self.kt_right && self.kt_schur
    }

    pub fn fully_compatible(&self) -> bool {
        self.k_is_compatible() && self.kt_is_compatible()
    }
}

/// Pseudo-inverses shared by the block formulas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchurParts {
    pub a_pinv: RatMatrix,
    pub b_pinv: RatMatrix,
    pub s_a: RatMatrix,
    pub s_b: RatMatrix,
    pub s_a_pinv: RatMatrix,
    pub s_b_pinv: RatMatrix,
}

/// Signatures certifying positive / negative pseudo-invertibility of `M`
/// through the block sufficient condition.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SufficientWitness {
    pub positive: Option<Signature>,
    pub negative: Option<Signature>,
}

fn mul(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    a.matmul(b).expect("block shapes agree")
}

fn sub(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    a.sub(b).expect("block shapes agree")
}

impl BlockSystem {
    /// `a` must be symmetric `n×n`, `b` symmetric `m×m`, `k` `n×m`.
    pub fn new(a: RatMatrix, b: RatMatrix, k: RatMatrix) -> Result<Self> {
        if !a.is_symmetric() || !b.is_symmetric() {
            return Err(MathError::Shape("diagonal blocks must be symmetric".into()).into());
        }
        if k.rows() != a.rows() || k.cols() != b.rows() {
            return Err(MathError::Shape(format!(
                "K is {}x{}, expected {}x{}",
                k.rows(),
                k.cols(),
                a.rows(),
                b.rows()
            ))
            .into());
        }
        Ok(BlockSystem { a, b, k })
    }

    /// Splits a symmetric matrix by an index set: `A` on `first`, `B` on the
    /// remaining indices (ascending), `K` the cross block. Also returns the
    /// permutation `first ++ rest` so that `assemble()` equals
    /// `m.permute_symmetric(&perm)`.
    pub fn from_partition(m: &RatMatrix, first: &[usize]) -> Result<(Self, Vec<usize>)> {
        let mut in_first = vec![false; m.rows()];
        for &i in first {
            in_first[i] = true;
        }
        let rest: Vec<usize> = (0..m.rows()).filter(|&i| !in_first[i]).collect();
        let sys = BlockSystem::new(
            m.select(first, first),
            m.select(&rest, &rest),
            m.select(first, &rest),
        )?;
        let mut perm = first.to_vec();
        perm.extend(rest);
        Ok((sys, perm))
    }

    pub fn a(&self) -> &RatMatrix {
        &self.a
    }

    pub fn b(&self) -> &RatMatrix {
        &self.b
    }

    pub fn k(&self) -> &RatMatrix {
        &self.k
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn m(&self) -> usize {
        self.b.rows()
    }

    pub fn assemble(&self) -> RatMatrix {
        let kt = self.k.transpose();
        RatMatrix::from_blocks(&[vec![&self.a, &self.k], vec![&kt, &self.b]]).expect("block shapes agree")
    }

    pub fn schur_complement(&self, which: Which) -> RatMatrix {
        match which {
            Which::A => sub(&self.a, &mul(&mul(&self.k, &self.b.pinv()), &self.k.transpose())),
            Which::B => sub(&self.b, &mul(&mul(&self.k.transpose(), &self.a.pinv()), &self.k)),
        }
    }

    pub fn schur_parts(&self) -> SchurParts {
        let a_pinv = self.a.pinv();
        let b_pinv = self.b.pinv();
        let kt = self.k.transpose();
        let s_a = sub(&self.a, &mul(&mul(&self.k, &b_pinv), &kt));
        let s_b = sub(&self.b, &mul(&mul(&kt, &a_pinv), &self.k));
        let s_a_pinv = s_a.pinv();
        let s_b_pinv = s_b.pinv();
        SchurParts {
            a_pinv,
            b_pinv,
            s_a,
            s_b,
            s_a_pinv,
            s_b_pinv,
        }
    }

    fn compatibility_with(&self, p: &SchurParts) -> CompatibilityReport {
        let (n, m) = (self.n(), self.m());
        let id_n = RatMatrix::identity(n);
        let id_m = RatMatrix::identity(m);
        let k = &self.k;
        CompatibilityReport {
            k_right: mul(k, &sub(&id_m, &mul(&p.b_pinv, &self.b))).is_zero(),
            k_schur: mul(&sub(&id_n, &mul(&p.s_a, &p.s_a_pinv)), k).is_zero(),
            kt_right: mul(&sub(&id_n, &mul(&self.a, &p.a_pinv)), k).is_zero(),
            kt_schur: mul(k, &sub(&id_m, &mul(&p.s_b_pinv, &p.s_b))).is_zero(),
        }
    }

    pub fn compatibility(&self) -> CompatibilityReport {
        self.compatibility_with(&self.schur_parts())
    }

    /// Assembles the A- or B-form without checking its premises.
    pub fn banachiewicz_schur_candidate(&self, form: Which) -> RatMatrix {
        self.candidate_with(&self.schur_parts(), form)
    }

    fn candidate_with(&self, p: &SchurParts, form: Which) -> RatMatrix {
        let k = &self.k;
        let kt = k.transpose();
        match form {
            Which::A => {
                // X = S_A† K B†
                let x = mul(&mul(&p.s_a_pinv, k), &p.b_pinv);
                let xt = x.transpose();
                let bottom = p.b_pinv.add(&mul(&mul(&mul(&p.b_pinv, &kt), &p.s_a_pinv), &mul(k, &p.b_pinv)))
                    .expect("block shapes agree");
                RatMatrix::from_blocks(&[vec![&p.s_a_pinv, &x.neg()], vec![&xt.neg(), &bottom]])
                    .expect("block shapes agree")
            }
            Which::B => {
                // Y = A† K S_B†
                let y = mul(&mul(&p.a_pinv, k), &p.s_b_pinv);
                let yt = y.transpose();
                let top = p.a_pinv.add(&mul(&y, &mul(&kt, &p.a_pinv))).expect("block shapes agree");
                RatMatrix::from_blocks(&[vec![&top, &y.neg()], vec![&yt.neg(), &p.s_b_pinv]])
                    .expect("block shapes agree")
            }
        }
    }

    /// `M†` in the requested Banachiewicz-Schur form.
    pub fn banachiewicz_schur(&self, form: Which) -> Result<RatMatrix> {
        let p = self.schur_parts();
        let c = self.compatibility_with(&p);
        let ok = match form {
            Which::A => c.k_is_compatible(),
            Which::B => c.kt_is_compatible(),
        };
        if !ok {
            return Err(Error::IncompatibleBlocks(format!("{form:?}-form premises fail: {c:?}")));
        }
        Ok(self.candidate_with(&p, form))
    }

    /// The A-form when it applies, otherwise the B-form.
    pub fn block_pinv(&self) -> Result<RatMatrix> {
        let p = self.schur_parts();
        let c = self.compatibility_with(&p);
        if c.k_is_compatible() {
            Ok(self.candidate_with(&p, Which::A))
        } else if c.kt_is_compatible() {
            Ok(self.candidate_with(&p, Which::B))
        } else {
            Err(Error::IncompatibleBlocks(format!("neither form applies: {c:?}")))
        }
    }

    /// Under full compatibility, evaluates
    /// 1. `S_A† K B† = A† K S_B†`
    /// 2. `S_A† = A† + A† K S_B† Kᵀ A†`
    /// 3. `S_B† = B† + B† Kᵀ S_A† K B†`
    pub fn schur_identities(&self) -> Result<[bool; 3]> {
        let p = self.schur_parts();
        let c = self.compatibility_with(&p);
        if !c.fully_compatible() {
            return Err(Error::IncompatibleBlocks(format!(
                "K must be (A,B) compatible and Kᵀ (B,A) compatible: {c:?}"
            )));
        }
        Ok(Self::identities_with(&self.k, &p))
    }

    /// The three identities evaluated without checking premises.
    pub fn schur_identities_unchecked(&self) -> [bool; 3] {
        Self::identities_with(&self.k, &self.schur_parts())
    }

    fn identities_with(k: &RatMatrix, p: &SchurParts) -> [bool; 3] {
        let kt = k.transpose();
        let first = mul(&mul(&p.s_a_pinv, k), &p.b_pinv) == mul(&mul(&p.a_pinv, k), &p.s_b_pinv);
        let second = p.s_a_pinv
            == p.a_pinv
                .add(&mul(&mul(&mul(&p.a_pinv, k), &p.s_b_pinv), &mul(&kt, &p.a_pinv)))
                .expect("block shapes agree");
        let third = p.s_b_pinv
            == p.b_pinv
                .add(&mul(&mul(&mul(&p.b_pinv, &kt), &p.s_a_pinv), &mul(k, &p.b_pinv)))
                .expect("block shapes agree");
        [first, second, third]
    }

    /// For invertible `M` with `K(I - B†B) = 0`, whether `S_A` is invertible
    /// (it always is).
    pub fn schur_invertibility_check(&self) -> Result<bool> {
        if self.assemble().det()?.is_zero() {
            return Err(Error::PreconditionFailed("M is singular".into()));
        }
        let p = self.schur_parts();
        if !self.compatibility_with(&p).k_right {
            return Err(Error::PreconditionFailed("K(I - B†B) != 0".into()));
        }
        Ok(!p.s_a.det()?.is_zero())
    }

    /// The block sufficient condition for signability of `M†`: `K` is
    /// (A,B) compatible, `S_A†` and `B†` are signed to the same target by
    /// `D_A`, `D_B`, and `D_A K D_B` is single-signed. Witnesses are
    /// searched over every admissible `(D_A, D_B)`, not just canonical ones.
    ///
    /// For the nonnegative target the composite signature is
    /// `diag(D_A, -D_B)` when `D_A K D_B >= 0` and `diag(D_A, D_B)` when it
    /// is `<= 0`; the nonpositive target swaps the two cases.
    pub fn sufficient_signature(&self) -> SufficientWitness {
        let p = self.schur_parts();
        if !self.compatibility_with(&p).k_is_compatible() {
            return SufficientWitness::default();
        }
        let pinv = self.candidate_with(&p, Which::A);
        let find = |target: Target| -> Option<Signature> {
            // Diagonal entries are invariant under signing.
            find_signature(&p.s_a_pinv, target).ok().flatten()?;
            find_signature(&p.b_pinv, target).ok().flatten()?;
            let t = target.sign();
            let (n, m) = (self.n(), self.m());
            for k_sign in [1i8, -1] {
                let mut cons = Vec::new();
                for i in 0..n {
                    for j in i + 1..n {
                        let s = p.s_a_pinv.get(i, j).signum();
                        if s != 0 {
                            cons.push((i, j, s * t));
                        }
                    }
                }
                for i in 0..m {
                    for j in i + 1..m {
                        let s = p.b_pinv.get(i, j).signum();
                        if s != 0 {
                            cons.push((n + i, n + j, s * t));
                        }
                    }
                }
                for i in 0..n {
                    for j in 0..m {
                        let s = self.k.get(i, j).signum();
                        if s != 0 {
                            cons.push((i, n + j, s * k_sign));
                        }
                    }
                }
                let Some(joint) = solve_sign_constraints(n + m, cons) else {
                    continue;
                };
                let d = joint.as_slice();
                let d_a = Signature::new(d[..n].to_vec());
                let d_b = Signature::new(d[n..].to_vec());
                let flip_b = (target == Target::NonNeg) == (k_sign > 0);
                let signature = d_a.concat(&if flip_b { d_b.negated() } else { d_b });
                assert!(
                    signature.apply(&pinv).all_entries_have_sign(t),
                    "block sufficient condition produced an invalid signature"
                );
                return Some(signature);
            }
            None
        };
        SufficientWitness {
            positive: find(Target::NonNeg),
            negative: find(Target::NonPos),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratmath::Rational;
    use crate::signability::sign_report;

    fn two_block_fixture() -> BlockSystem {
        BlockSystem::new(
            RatMatrix::from_i64(&[[1, 0], [0, 0]]),
            RatMatrix::from_i64(&[[0, 0], [0, 1]]),
            RatMatrix::from_i64(&[[0, 1], [0, 0]]),
        )
        .unwrap()
    }

    fn k2() -> RatMatrix {
        RatMatrix::from_i64(&[[0, 1], [1, 0]])
    }

    /// Pendant-vertex system: A = 0 (k m × k m), K = stacked identities.
    fn pendant_system(b: &RatMatrix, k: usize) -> BlockSystem {
        let m = b.rows();
        let kmat = RatMatrix::from_i64(&vec![vec![1i64]; k]).kron(&RatMatrix::identity(m));
        BlockSystem::new(RatMatrix::zeros(k * m, k * m), b.clone(), kmat).unwrap()
    }

    fn star_blocks(n: usize) -> BlockSystem {
        BlockSystem::new(
            RatMatrix::zeros(n, n),
            RatMatrix::zeros(1, 1),
            RatMatrix::from_i64(&vec![vec![1i64]; n]),
        )
        .unwrap()
    }

    #[test]
    fn two_block_fixture_conditions_are_independent() {
        let sys = two_block_fixture();
        assert!(sys.schur_complement(Which::A).is_zero());
        assert!(sys.schur_complement(Which::B).is_zero());
        let c = sys.compatibility();
        assert!(c.k_right && !c.k_schur);
        assert!(c.kt_right && !c.kt_schur);
        assert!(matches!(sys.banachiewicz_schur(Which::A), Err(Error::IncompatibleBlocks(_))));
        assert!(matches!(sys.schur_identities(), Err(Error::IncompatibleBlocks(_))));
        assert_eq!(sys.sufficient_signature(), SufficientWitness::default());
    }

    #[test]
    fn pendant_system_schur_complement() {
        for k in 1..=3 {
            let sys = pendant_system(&k2(), k);
            let ones = RatMatrix::from_i64(&vec![vec![1i64; k]; k]);
            assert_eq!(sys.schur_complement(Which::A), ones.kron(&k2().inv().unwrap()).neg());
            assert!(sys.compatibility().k_is_compatible());
        }
    }

    #[test]
    fn pendant_system_k2_block_pinv() {
        let sys = pendant_system(&k2(), 2);
        let p = sys.banachiewicz_schur(Which::A).unwrap();
        // (1/4) [[-B, -B, 2I], [-B, -B, 2I], [2I, 2I, 0]]
        let b = k2();
        let two_i = RatMatrix::identity(2).scale(&Rational::from(2));
        let z = RatMatrix::zeros(2, 2);
        let expected = RatMatrix::from_blocks(&[
            vec![&b.neg(), &b.neg(), &two_i],
            vec![&b.neg(), &b.neg(), &two_i],
            vec![&two_i, &two_i, &z],
        ])
        .unwrap()
        .scale(&Rational::new(1, 4).unwrap());
        assert_eq!(p, expected);
        assert_eq!(p, sys.assemble().pinv());
    }

    #[test]
    fn star_blocks_are_incompatible() {
        let sys = star_blocks(5);
        assert!(sys.schur_complement(Which::A).is_zero());
        let c = sys.compatibility();
        assert!(!c.k_right && !c.kt_right);
        assert!(matches!(sys.banachiewicz_schur(Which::A), Err(Error::IncompatibleBlocks(_))));
        assert!(matches!(sys.banachiewicz_schur(Which::B), Err(Error::IncompatibleBlocks(_))));
        assert_eq!(sys.sufficient_signature(), SufficientWitness::default());
        // M itself is still both-signable.
        assert_eq!(
            sign_report(&sys.assemble().pinv()).unwrap().class,
            crate::signability::SignClass::Both
        );
    }

    #[test]
    fn zero_coupling_is_fully_compatible() {
        let a = RatMatrix::from_i64(&[[0, 1, 1], [1, 0, 1], [1, 1, 0]]);
        let b = RatMatrix::from_i64(&[[0, 1], [1, 0]]);
        let sys = BlockSystem::new(a.clone(), b.clone(), RatMatrix::zeros(3, 2)).unwrap();
        assert_eq!(sys.schur_complement(Which::A), a);
        assert_eq!(sys.schur_complement(Which::B), b);
        assert!(sys.compatibility().fully_compatible());
        assert_eq!(sys.schur_identities().unwrap(), [true, true, true]);
        assert_eq!(sys.banachiewicz_schur(Which::A).unwrap(), sys.banachiewicz_schur(Which::B).unwrap());
    }

    #[test]
    fn p4_split_identities_and_schur_invertibility() {
        let p4 = RatMatrix::from_i64(&[[0, 1, 0, 0], [1, 0, 1, 0], [0, 1, 0, 1], [0, 0, 1, 0]]);
        let (halves, perm) = BlockSystem::from_partition(&p4, &[0, 1]).unwrap();
        assert_eq!(perm, vec![0, 1, 2, 3]);
        assert_eq!(halves.schur_identities().unwrap(), [true, true, true]);
        assert_eq!(halves.banachiewicz_schur(Which::B).unwrap(), p4.inv().unwrap());
        let sys = pendant_system(&k2(), 1);
        assert!(!sys.compatibility().kt_right);
        assert!(sys.schur_invertibility_check().unwrap());
        let a_form = sys.banachiewicz_schur(Which::A).unwrap();
        assert_eq!(a_form, sys.assemble().inv().unwrap());
    }

    #[test]
    fn singular_m_fails_invertibility_precondition() {
        let sys = BlockSystem::new(RatMatrix::identity(2), RatMatrix::zeros(1, 1), RatMatrix::zeros(2, 1)).unwrap();
        assert!(!sys.schur_complement(Which::A).det().unwrap().is_zero());
        assert!(matches!(sys.schur_invertibility_check(), Err(Error::PreconditionFailed(_))));
        assert!(matches!(star_blocks(3).schur_invertibility_check(), Err(Error::PreconditionFailed(_))));
    }

    #[test]
    fn sufficient_condition_on_scalar_blocks() {
        // M = [[-2, 1], [1, -1]], M⁻¹ = [[-1, -1], [-1, -2]].
        let sys = BlockSystem::new(
            RatMatrix::from_i64(&[[-2]]),
            RatMatrix::from_i64(&[[-1]]),
            RatMatrix::from_i64(&[[1]]),
        )
        .unwrap();
        let w = sys.sufficient_signature();
        assert_eq!(w.negative.unwrap().as_slice(), &[1, 1]);
        assert_eq!(w.positive, None);
    }

    #[test]
    fn pendant_system_not_certified_by_sufficient_condition() {
        // P4 is negatively pseudo-invertible, but no (D_A, D_B) makes
        // D_A K D_B single-signed for this split.
        let sys = pendant_system(&k2(), 1);
        assert_eq!(sys.sufficient_signature(), SufficientWitness::default());
        assert!(sign_report(&sys.assemble().pinv()).unwrap().negative.is_some());
    }

    #[test]
    fn mm_pinv_lower_left_block_vanishes() {
        let sys = two_block_fixture();
        assert!(sys.compatibility().k_right);
        let prod = sys.assemble().matmul(&sys.banachiewicz_schur_candidate(Which::A)).unwrap();
        assert!(prod.block(2, 0, 2, 2).is_zero());
    }
}
