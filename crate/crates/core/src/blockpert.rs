//! Efficient vectors of block perturbed consistent matrices `A_n(B)`.
//!
//! Everything here is closed form: the chains characterizing `S(x)` and
//! 3-by-3 matrices, the tail bounds that extend an efficient head to the
//! whole of `A_n(B)`, the union over `{1,2,3,j}` for 3-blocks and the
//! sufficient class for constant blocks `C_s(x)`. The digraph test is only
//! used where a statement needs it as a hypothesis (efficiency of a head for
//! `B`, of a 4-vector for `A_4(B)`).

use rand::Rng;
use serde_json::json;

use crate::efficiency::efficient;
use crate::error::{PcmError, Result};
use crate::matrix::{BlockPerturbedForm, MonomialSimilarity, ReciprocalMatrix, WeightVector};
use crate::sampling::{random_permutation, sample_closed};
use crate::scalar::Scalar;

fn check_len<S: Scalar>(expected: usize, w: &WeightVector<S>) -> Result<()> {
    if w.len() != expected {
        return Err(PcmError::DimensionMismatch {
            expected,
            found: w.len(),
        });
    }
    Ok(())
}

/// Closed bounds `[min, max]` of a head vector.
fn head_bounds<S: Scalar>(head: &[S]) -> (S, S) {
    (
        S::min_of(head).expect("non-empty"),
        S::max_of(head).expect("non-empty"),
    )
}

fn within<S: Scalar>(x: &S, bounds: &(S, S)) -> bool {
    &bounds.0 <= x && x <= &bounds.1
}

/// `S(x)`: ones except `(1,2) = x`, `(2,1) = 1/x`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoBlockMatrix<S> {
    x: S,
    n: usize,
}

impl<S: Scalar> TwoBlockMatrix<S> {
    pub fn new(x: S, n: usize) -> Result<Self> {
        if n < 3 {
            return Err(PcmError::BadShape(format!("S(x) needs n >= 3, got {n}")));
        }
        if !x.is_positive() {
            return Err(PcmError::NonPositiveEntry { row: 1, col: 2 });
        }
        Ok(Self { x, n })
    }

    pub fn x(&self) -> &S {
        &self.x
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn block(&self) -> ReciprocalMatrix<S> {
        ReciprocalMatrix::from_upper(2, std::slice::from_ref(&self.x)).expect("x > 0")
    }

    pub fn matrix(&self) -> ReciprocalMatrix<S> {
        ReciprocalMatrix::block_perturbed(&self.block(), self.n).expect("n >= 3")
    }
}

/// `w_2 <= w_3..w_n <= w_1 <= x w_2`, or the same chain reversed.
pub fn two_block_is_efficient<S: Scalar>(
    m: &TwoBlockMatrix<S>,
    w: &WeightVector<S>,
) -> Result<bool> {
    check_len(m.n, w)?;
    let (w1, w2) = (&w[0], &w[1]);
    let xw2 = m.x.clone() * w2.clone();
    let tail = &w.as_slice()[2..];
    let ascending = tail.iter().all(|t| w2 <= t && t <= w1) && *w1 <= xw2;
    let descending = tail.iter().all(|t| w2 >= t && t >= w1) && *w1 >= xw2;
    Ok(ascending || descending)
}

/// `a23 w3 <= w2 <= w1/a12 <= (a13/a12) w3`, or the same chain reversed.
pub fn three_by_three_is_efficient<S: Scalar>(
    b: &ReciprocalMatrix<S>,
    w: &WeightVector<S>,
) -> Result<bool> {
    if b.n() != 3 {
        return Err(PcmError::DimensionMismatch {
            expected: 3,
            found: b.n(),
        });
    }
    check_len(3, w)?;
    let (a12, a13, a23) = (
        b.get(0, 1).clone(),
        b.get(0, 2).clone(),
        b.get(1, 2).clone(),
    );
    let chain = [
        a23 * w[2].clone(),
        w[1].clone(),
        w[0].clone() / a12.clone(),
        a13 / a12 * w[2].clone(),
    ];
    let ascending = chain.windows(2).all(|p| p[0] <= p[1]);
    let descending = chain.windows(2).all(|p| p[0] >= p[1]);
    Ok(ascending || descending)
}

fn check_head<S: Scalar>(form: &BlockPerturbedForm<S>, head: &WeightVector<S>) -> Result<()> {
    check_len(form.s(), head)?;
    if !efficient(form.block(), head)? {
        return Err(PcmError::HeadNotEfficient);
    }
    Ok(())
}

/// For `w` whose first `s` entries are efficient for `B`: `w` is efficient for
/// `A_n(B)` iff every tail entry lies in `[min head, max head]`.
pub fn lcompl_membership<S: Scalar>(
    form: &BlockPerturbedForm<S>,
    w: &WeightVector<S>,
) -> Result<bool> {
    check_len(form.n(), w)?;
    let s = form.s();
    let head = w.subvector(&(0..s).collect::<Vec<_>>());
    check_head(form, &head)?;
    let bounds = head_bounds(head.as_slice());
    Ok(w.as_slice()[s..].iter().all(|t| within(t, &bounds)))
}

/// Endless stream of efficient vectors for `A_n(B)` sharing the head.
pub struct TailSampler<'r, S, R: ?Sized> {
    head: WeightVector<S>,
    bounds: (S, S),
    tail_count: usize,
    rng: &'r mut R,
}

impl<S: Scalar, R: Rng + ?Sized> Iterator for TailSampler<'_, S, R> {
    type Item = WeightVector<S>;

    fn next(&mut self) -> Option<WeightVector<S>> {
        let mut v = self.head.as_slice().to_vec();
        v.extend(
            (0..self.tail_count).map(|_| sample_closed(&self.bounds.0, &self.bounds.1, self.rng)),
        );
        Some(WeightVector::new(v).expect("positive"))
    }
}

pub fn lcompl_sample<'r, S: Scalar, R: Rng + ?Sized>(
    form: &BlockPerturbedForm<S>,
    head: &WeightVector<S>,
    rng: &'r mut R,
) -> Result<TailSampler<'r, S, R>> {
    check_head(form, head)?;
    Ok(TailSampler {
        head: head.clone(),
        bounds: head_bounds(head.as_slice()),
        tail_count: form.n() - form.s(),
        rng,
    })
}

/// `(I_s + Q) w`: tail entry `i` becomes the old tail entry `perm[i]`.
pub fn tail_permute<S: Scalar>(
    form: &BlockPerturbedForm<S>,
    w: &WeightVector<S>,
    perm: &[usize],
) -> Result<WeightVector<S>> {
    let (s, n) = (form.s(), form.n());
    check_len(n, w)?;
    let mut full: Vec<usize> = (0..s).collect();
    full.extend(perm.iter().map(|&p| p + s));
    MonomialSimilarity::<S>::permutation(full)?.transform(w)
}

/// `A_n(B)` with `B` in `PC_3`, `n >= 4`.
#[derive(Clone, Debug, PartialEq)]
pub struct ThreeBlockMatrix<S> {
    block: ReciprocalMatrix<S>,
    n: usize,
    /// Set when the block was reversed to make `a13 >= 1`.
    reversed: bool,
}

impl<S: Scalar> ThreeBlockMatrix<S> {
    pub fn new(block: ReciprocalMatrix<S>, n: usize) -> Result<Self> {
        if block.n() != 3 {
            return Err(PcmError::DimensionMismatch {
                expected: 3,
                found: block.n(),
            });
        }
        if n < 4 {
            return Err(PcmError::BadShape(format!(
                "3-block matrix needs n >= 4, got {n}"
            )));
        }
        Ok(Self {
            block,
            n,
            reversed: false,
        })
    }

    pub fn from_entries(a12: S, a13: S, a23: S, n: usize) -> Result<Self> {
        Self::new(ReciprocalMatrix::from_upper(3, &[a12, a13, a23])?, n)
    }

    pub fn block(&self) -> &ReciprocalMatrix<S> {
        &self.block
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a12(&self) -> &S {
        self.block.get(0, 1)
    }

    pub fn a13(&self) -> &S {
        self.block.get(0, 2)
    }

    pub fn a23(&self) -> &S {
        self.block.get(1, 2)
    }

    pub fn is_reversed(&self) -> bool {
        self.reversed
    }

    pub fn matrix(&self) -> ReciprocalMatrix<S> {
        ReciprocalMatrix::block_perturbed(&self.block, self.n).expect("n >= 4")
    }

    pub fn form(&self) -> BlockPerturbedForm<S> {
        BlockPerturbedForm::canonical(self.block.clone(), self.n).expect("n >= 4")
    }

    /// Reverses the block order when `a13 < 1`, giving
    /// `(a12, a13, a23) -> (1/a23, 1/a13, 1/a12)`.
    pub fn normalized(&self) -> Self {
        if *self.a13() >= S::one() {
            return self.clone();
        }
        let block = self.block.principal(&[2, 1, 0]);
        Self {
            block,
            n: self.n,
            reversed: !self.reversed,
        }
    }

    /// Maps a vector for this matrix to the coordinates of [`Self::normalized`].
    pub fn to_normalized(&self, w: &WeightVector<S>) -> Result<WeightVector<S>> {
        check_len(self.n, w)?;
        if *self.a13() >= S::one() {
            return Ok(w.clone());
        }
        let mut perm = vec![2, 1, 0];
        perm.extend(3..self.n);
        MonomialSimilarity::<S>::permutation(perm)?.transform(w)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeBlockMembership {
    pub member: bool,
    /// Smallest tail index `j` (0-based) whose route certifies membership.
    pub witness: Option<usize>,
}

/// Route `j`: `w[{1,2,3,j}]` is efficient for `A_4(B)` and every other tail
/// entry lies within its `[min, max]`.
pub fn three_block_route<S: Scalar>(
    a: &ThreeBlockMatrix<S>,
    w: &WeightVector<S>,
    j: usize,
) -> Result<bool> {
    check_len(a.n, w)?;
    if !(3..a.n).contains(&j) {
        return Err(PcmError::DimensionMismatch {
            expected: a.n,
            found: j + 1,
        });
    }
    let quad = w.subvector(&[0, 1, 2, j]);
    let a4 = ReciprocalMatrix::block_perturbed(&a.block, 4)?;
    if !efficient(&a4, &quad)? {
        return Ok(false);
    }
    let bounds = head_bounds(quad.as_slice());
    Ok((3..a.n).filter(|&k| k != j).all(|k| within(&w[k], &bounds)))
}

/// Membership in the union of `E(A, {1,2,3,j})` over tail indices `j`.
pub fn three_block_membership<S: Scalar>(
    a: &ThreeBlockMatrix<S>,
    w: &WeightVector<S>,
) -> Result<ThreeBlockMembership> {
    for j in 3..a.n {
        if three_block_route(a, w, j)? {
            return Ok(ThreeBlockMembership {
                member: true,
                witness: Some(j),
            });
        }
    }
    Ok(ThreeBlockMembership {
        member: false,
        witness: None,
    })
}

/// A generated vector with the data it was derived from.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratedVector<S> {
    pub vector: WeightVector<S>,
    pub seed_head: WeightVector<S>,
    pub tail_bounds: (S, S),
    /// Tail permutation applied last (identity when none).
    pub permutation: Vec<usize>,
}

impl<S: Scalar> GeneratedVector<S> {
    /// The permutation is written 1-based, like every other label in JSON output.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "vector": self.vector.to_json(),
            "seed_head": self.seed_head.to_json(),
            "tail_bounds": [self.tail_bounds.0.to_json(), self.tail_bounds.1.to_json()],
            "permutation": self.permutation.iter().map(|k| k + 1).collect::<Vec<_>>(),
        })
    }
}

/// Extends certified 4-vectors by tails within their bounds and permutes the
/// last `n - 3` entries. Candidates not efficient for `A_4(B)` are skipped.
pub struct ThreeBlockGenerator<'r, S, I, R: ?Sized> {
    a4: ReciprocalMatrix<S>,
    n: usize,
    candidates: I,
    rng: &'r mut R,
}

impl<S: Scalar, I: Iterator<Item = WeightVector<S>>, R: Rng + ?Sized> Iterator
    for ThreeBlockGenerator<'_, S, I, R>
{
    type Item = GeneratedVector<S>;

    fn next(&mut self) -> Option<GeneratedVector<S>> {
        loop {
            let quad = self.candidates.next()?;
            if quad.len() != 4 || !efficient(&self.a4, &quad).unwrap_or(false) {
                continue;
            }
            let bounds = head_bounds(quad.as_slice());
            let mut v = quad.as_slice().to_vec();
            v.extend((4..self.n).map(|_| sample_closed(&bounds.0, &bounds.1, self.rng)));
            let perm = random_permutation(self.n - 3, self.rng);
            let mut out: Vec<S> = v[..3].to_vec();
            out.extend(perm.iter().map(|&p| v[p + 3].clone()));
            return Some(GeneratedVector {
                vector: WeightVector::new(out).expect("positive"),
                seed_head: quad,
                tail_bounds: bounds,
                permutation: perm,
            });
        }
    }
}

pub fn three_block_generate<'r, S, I, R>(
    a: &ThreeBlockMatrix<S>,
    four_vectors: I,
    rng: &'r mut R,
) -> ThreeBlockGenerator<'r, S, I::IntoIter, R>
where
    S: Scalar,
    I: IntoIterator<Item = WeightVector<S>>,
    R: Rng + ?Sized,
{
    ThreeBlockGenerator {
        a4: ReciprocalMatrix::block_perturbed(&a.block, 4).expect("3 <= 4"),
        n: a.n,
        candidates: four_vectors.into_iter(),
        rng,
    }
}

/// Closed-form verdict next to the `{1,2,j}` route for every `j >= 3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoBlockCrossCheck {
    pub closed_form: bool,
    /// `(j, verdict)` pairs, `j` 0-based.
    pub routes: Vec<(usize, bool)>,
}

impl TwoBlockCrossCheck {
    pub fn agree(&self) -> bool {
        self.routes.iter().all(|&(_, r)| r == self.closed_form)
    }
}

/// Route `j`: `w[{1,2,j}]` satisfies the 3-by-3 chains for `S(x)[{1,2,j}]` and
/// the remaining entries lie within its `[min, max]`.
pub fn two_block_full_set_check<S: Scalar>(
    m: &TwoBlockMatrix<S>,
    w: &WeightVector<S>,
) -> Result<TwoBlockCrossCheck> {
    let closed_form = two_block_is_efficient(m, w)?;
    let b3 = ReciprocalMatrix::block_perturbed(&m.block(), 3)?;
    let mut routes = Vec::with_capacity(m.n - 2);
    for j in 2..m.n {
        let triple = w.subvector(&[0, 1, j]);
        let ok = three_by_three_is_efficient(&b3, &triple)? && {
            let bounds = head_bounds(triple.as_slice());
            (2..m.n).filter(|&k| k != j).all(|k| within(&w[k], &bounds))
        };
        routes.push((j, ok));
    }
    Ok(TwoBlockCrossCheck {
        closed_form,
        routes,
    })
}

/// Efficient vector for `S(x)` drawn from the chain that applies to `x`.
pub fn two_block_sample<S: Scalar, R: Rng + ?Sized>(
    m: &TwoBlockMatrix<S>,
    rng: &mut R,
) -> WeightVector<S> {
    let w2 = S::one();
    let (lo, hi) = if m.x >= S::one() {
        (S::one(), m.x.clone())
    } else {
        (m.x.clone(), S::one())
    };
    let w1 = sample_closed(&lo, &hi, rng);
    let bounds = if w1 >= w2 {
        (w2.clone(), w1.clone())
    } else {
        (w1.clone(), w2.clone())
    };
    let mut v = vec![w1, w2];
    v.extend((2..m.n).map(|_| sample_closed(&bounds.0, &bounds.1, rng)));
    WeightVector::new(v).expect("positive")
}

/// `C_s(x)` (all entries above the diagonal equal to `x`) embedded in `A_n`.
///
/// Stored normalized: inputs with `x < 1` are reversed onto `C_s(1/x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstantBlockMatrix<S> {
    x: S,
    s: usize,
    n: usize,
    reversed: bool,
}

/// `C_s(x)`.
pub fn constant_matrix<S: Scalar>(x: &S, s: usize) -> ReciprocalMatrix<S> {
    ReciprocalMatrix::from_upper(s, &vec![x.clone(); s * (s - 1) / 2]).expect("x > 0")
}

impl<S: Scalar> ConstantBlockMatrix<S> {
    pub fn new(x: S, s: usize, n: usize) -> Result<Self> {
        if !x.is_positive() {
            return Err(PcmError::NonPositiveEntry { row: 1, col: 2 });
        }
        if s == 0 || n < s {
            return Err(PcmError::BadShape(format!(
                "need 1 <= s <= n, got s = {s}, n = {n}"
            )));
        }
        let reversed = x < S::one();
        let x = if reversed { x.recip() } else { x };
        Ok(Self { x, s, n, reversed })
    }

    /// Normalized parameter, `>= 1`.
    pub fn x(&self) -> &S {
        &self.x
    }

    pub fn original_x(&self) -> S {
        if self.reversed {
            self.x.recip()
        } else {
            self.x.clone()
        }
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_reversed(&self) -> bool {
        self.reversed
    }

    /// `C_s(x)` with the normalized `x`.
    pub fn block(&self) -> ReciprocalMatrix<S> {
        constant_matrix(&self.x, self.s)
    }

    /// `A_n(C_s(x))` with the normalized `x`.
    pub fn matrix(&self) -> ReciprocalMatrix<S> {
        ReciprocalMatrix::block_perturbed(&self.block(), self.n).expect("s <= n")
    }

    /// `A_n(C_s(x))` with the caller's `x`.
    pub fn original_matrix(&self) -> ReciprocalMatrix<S> {
        let block = constant_matrix(&self.original_x(), self.s);
        ReciprocalMatrix::block_perturbed(&block, self.n).expect("s <= n")
    }

    /// Reversal of the block indices (identity when not reversed). It is an
    /// involution, so it maps both ways between original and normalized.
    pub fn reversal(&self, len: usize) -> MonomialSimilarity<S> {
        let mut perm: Vec<usize> = if self.reversed {
            (0..self.s).rev().collect()
        } else {
            (0..self.s).collect()
        };
        perm.extend(self.s..len);
        MonomialSimilarity::permutation(perm).expect("valid permutation")
    }

    pub fn to_normalized(&self, w: &WeightVector<S>) -> Result<WeightVector<S>> {
        self.reversal(w.len()).transform(w)
    }

    pub fn form(&self) -> Result<BlockPerturbedForm<S>> {
        BlockPerturbedForm::canonical(self.block(), self.n)
    }
}

/// Sufficient condition for `w` (length `s`, caller's coordinates) to be
/// efficient for `C_s(x)`:
/// `w3 <= w1/x <= w2 <= x w3` and
/// `(1/x) min{w3..w_(i-1)} <= w_i <= w1/x` for `i = 4..s`.
pub fn constant_block_class_check<S: Scalar>(
    m: &ConstantBlockMatrix<S>,
    w: &WeightVector<S>,
) -> Result<bool> {
    check_len(m.s, w)?;
    let w = m.to_normalized(w)?;
    let x = &m.x;
    match m.s {
        1 => return Ok(true),
        // C_2(x) is consistent: only multiples of its columns
        2 => return Ok(w[0] == x.clone() * w[1].clone()),
        _ => {}
    }
    let w1x = w[0].clone() / x.clone();
    if !(w[2] <= w1x && w1x <= w[1] && w[1] <= x.clone() * w[2].clone()) {
        return Ok(false);
    }
    let mut running_min = w[2].clone();
    for i in 3..m.s {
        let lo = running_min.clone() / x.clone();
        if !(lo <= w[i] && w[i] <= w1x) {
            return Ok(false);
        }
        if w[i] < running_min {
            running_min = w[i].clone();
        }
    }
    Ok(true)
}

/// `[(1/x) min{w3..w_(i-1)}, w1/x]`: the range the class allows for the entry
/// after `prefix` (normalized coordinates, `3 <= prefix.len() < s`).
pub fn constant_block_next_interval<S: Scalar>(
    m: &ConstantBlockMatrix<S>,
    prefix: &[S],
) -> Result<(S, S)> {
    if prefix.len() < 3 || prefix.len() >= m.s {
        return Err(PcmError::DimensionMismatch {
            expected: m.s - 1,
            found: prefix.len(),
        });
    }
    let lo = S::min_of(&prefix[2..]).expect("non-empty") / m.x.clone();
    Ok((lo, prefix[0].clone() / m.x.clone()))
}

/// Head vector (length `s`, caller's coordinates) satisfying
/// [`constant_block_class_check`].
pub fn constant_block_sample_head<S: Scalar, R: Rng + ?Sized>(
    m: &ConstantBlockMatrix<S>,
    rng: &mut R,
) -> WeightVector<S> {
    let x = &m.x;
    let w1 = S::from_ratio(rng.gen_range(1..=12), 1);
    let mut v = vec![w1.clone()];
    if m.s >= 2 {
        let w1x = w1.clone() / x.clone();
        if m.s == 2 {
            v.push(w1x);
        } else {
            let w2 = sample_closed(&w1x, &w1, rng);
            let w3 = sample_closed(&(w2.clone() / x.clone()), &w1x, rng);
            let mut running_min = w3.clone();
            v.push(w2);
            v.push(w3);
            for _ in 3..m.s {
                let wi = sample_closed(&(running_min.clone() / x.clone()), &w1x, rng);
                if wi < running_min {
                    running_min = wi.clone();
                }
                v.push(wi);
            }
        }
    }
    let head = WeightVector::new(v).expect("positive");
    m.reversal(m.s).transform(&head).expect("length s")
}
