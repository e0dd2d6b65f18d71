//! Tensor-space matrix representations: the local R-matrix action on
//! `V_N^{⊗n}`, charge sectors, pure-braid twist elements and their spectra,
//! the B-type homomorphisms `f^m_b` and cabling maps, and the ρ-family of
//! blob-algebra representations on `V_2^{⊗2n}`.
//!
//! Two numeric backends are supported through the [`Scalar`] trait: exact
//! arithmetic ([`CycloNumber`], either symbolic `ℚ(q)` or a cyclotomic field)
//! and complex floating point ([`C64`]) with explicit tolerances.

use crate::linalg::{Matrix, Span};
use crate::ring::{C64, CycloNumber, RingError, Scalar};
use num_integer::Integer;
use thiserror::Error;

/// Errors from representation construction and relation checking.
#[derive(Debug, Error)]
pub enum TensorError {
    /// A relation that the construction promises failed to hold.
    #[error("relation failure: {0}")]
    RelationFailure(String),
    /// Parameters violate a precondition (e.g. `[m] = 0` or `q = ±1`).
    #[error("parameter constraint violated: {0}")]
    ParameterConstraintViolated(String),
    /// Malformed input (bad strand index, braid word out of range, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

// ---------------------------------------------------------------------------
// Local matrices and embeddings
// ---------------------------------------------------------------------------

/// The local `N² × N²` crossing matrix: `q` on `(aa, aa)`, `q − q⁻¹` on
/// `(ab, ab)` for `a < b`, and `−1` on `(ab, ba)` for `a ≠ b`.
///
/// Satisfies the quadratic relation `(g − q)(g + q⁻¹) = 0`.
pub fn local_crossing<S: Scalar>(big_n: usize, q: &S) -> Result<Matrix<S>, TensorError> {
    let q_inv = q.inv()?;
    let one = q.one_like();
    let mut m = Matrix::zero_like(big_n * big_n, big_n * big_n, q);
    for a in 0..big_n {
        for b in 0..big_n {
            let row = a * big_n + b;
            if a == b {
                *m.at_mut(row, row) = q.clone();
            } else {
                *m.at_mut(row, b * big_n + a) = one.neg();
                if a < b {
                    *m.at_mut(row, row) = q.sub(&q_inv);
                }
            }
        }
    }
    Ok(m)
}

/// The local `4 × 4` Temperley–Lieb matrix `𝒰^r(x)`:
/// middle block `[[r, 1], [1, r⁻¹]]`, bottom-right corner `x`, zero elsewhere.
pub fn local_u<S: Scalar>(r: &S, x: &S) -> Result<Matrix<S>, TensorError> {
    let r_inv = r.inv()?;
    let one = r.one_like();
    let mut m = Matrix::zero_like(4, 4, r);
    *m.at_mut(1, 1) = r.clone();
    *m.at_mut(1, 2) = one.clone();
    *m.at_mut(2, 1) = one;
    *m.at_mut(2, 2) = r_inv;
    *m.at_mut(3, 3) = x.clone();
    Ok(m)
}

/// Embed a local `N² × N²` operator at adjacent tensor positions
/// `(pos, pos + 1)` (1-based) in `V_N^{⊗n}`, acting as the identity on all
/// other factors. Basis index convention: `i = Σ_p d_p · N^{n−p}`.
pub fn embed_pair<S: Scalar>(
    big_n: usize,
    n: usize,
    pos: usize,
    local: &Matrix<S>,
) -> Matrix<S> {
    assert!(pos >= 1 && pos < n, "position {pos} out of range for {n} factors");
    assert_eq!(local.rows, big_n * big_n);
    let dim = big_n.pow(n as u32);
    let zero = local.at(0, 0).zero_like();
    let mut out = Matrix::zero_like(dim, dim, &zero);
    let stride_b = big_n.pow((n - pos - 1) as u32);
    let stride_a = stride_b * big_n;
    for j in 0..dim {
        let a = (j / stride_a) % big_n;
        let b = (j / stride_b) % big_n;
        let col = a * big_n + b;
        let base = j - a * stride_a - b * stride_b;
        for a2 in 0..big_n {
            for b2 in 0..big_n {
                let c = local.at(a2 * big_n + b2, col);
                if c.is_zero() {
                    continue;
                }
                let i = base + a2 * stride_a + b2 * stride_b;
                *out.at_mut(i, j) = c.clone();
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// The ordinary tensor representation M^q_N
// ---------------------------------------------------------------------------

/// The representation `M^q_N` of the braid group on `n` strands acting on
/// `V_N^{⊗n}`: `g_i ↦ 1 ⊗ ⋯ ⊗ m(q) ⊗ ⋯ ⊗ 1` with the local crossing at
/// positions `(i, i+1)`.
#[derive(Debug, Clone)]
pub struct TensorRep<S: Scalar> {
    pub big_n: usize,
    pub n: usize,
    pub q: S,
    /// `gens[i]` is the image of `g_{i+1}`, for `i = 0 .. n−2`.
    pub gens: Vec<Matrix<S>>,
}

impl<S: Scalar> TensorRep<S> {
    pub fn dim(&self) -> usize {
        self.big_n.pow(self.n as u32)
    }

    /// The image of `g_i` (1-based).
    pub fn gen(&self, i: usize) -> &Matrix<S> {
        &self.gens[i - 1]
    }

    /// The image of `g_i⁻¹ = g_i − (q − q⁻¹)·1`.
    pub fn gen_inv(&self, i: usize) -> Matrix<S> {
        let q_inv = self.q.inv().expect("q invertible");
        let shift = self.q.sub(&q_inv);
        let id = Matrix::identity(self.dim(), &self.q);
        self.gen(i).sub(&id.scale(&shift))
    }

    pub fn identity_matrix(&self) -> Matrix<S> {
        Matrix::identity(self.dim(), &self.q)
    }

    /// The image of a braid word; positive entries are generators, negative
    /// entries their inverses.
    pub fn word(&self, w: &[i64]) -> Result<Matrix<S>, TensorError> {
        let mut acc = self.identity_matrix();
        for &s in w {
            let i = s.unsigned_abs() as usize;
            if s == 0 || i >= self.n {
                return Err(TensorError::InvalidInput(format!(
                    "braid letter {s} out of range for {} strands",
                    self.n
                )));
            }
            let m = if s > 0 { self.gen(i).clone() } else { self.gen_inv(i) };
            acc = acc.matmul(&m);
        }
        Ok(acc)
    }

    /// The image of `U_i = g_i − q`.
    pub fn u_elem(&self, i: usize) -> Matrix<S> {
        let id = Matrix::identity(self.dim(), &self.q);
        self.gen(i).sub(&id.scale(&self.q))
    }
}

/// Build `M^q_N` on `n` strands (`N ≥ 2`, `n ≥ 1`).
pub fn build_mq_n<S: Scalar>(big_n: usize, n: usize, q: &S) -> Result<TensorRep<S>, TensorError> {
    if big_n < 2 {
        return Err(TensorError::InvalidInput(format!("local dimension {big_n} < 2")));
    }
    if n < 1 {
        return Err(TensorError::InvalidInput("need at least one strand".into()));
    }
    let local = local_crossing(big_n, q)?;
    let gens = (1..n).map(|i| embed_pair(big_n, n, i, &local)).collect();
    Ok(TensorRep { big_n, n, q: q.clone(), gens })
}

// ---------------------------------------------------------------------------
// Charge sectors
// ---------------------------------------------------------------------------

/// A constant-charge summand of `V_N^{⊗n}`: the basis indices whose digit
/// string has the given letter multiset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChargeSector {
    /// `counts[d]` = number of tensor factors in state `d`.
    pub counts: Vec<usize>,
    /// Basis indices in this sector, increasing.
    pub indices: Vec<usize>,
}

fn digit_counts(big_n: usize, n: usize, mut index: usize) -> Vec<usize> {
    let mut counts = vec![0usize; big_n];
    for _ in 0..n {
        counts[index % big_n] += 1;
        index /= big_n;
    }
    counts
}

/// Partition the basis of `V_N^{⊗n}` by charge. Sectors are ordered
/// lexicographically by their count vector.
pub fn charge_sectors(big_n: usize, n: usize) -> Vec<ChargeSector> {
    let dim = big_n.pow(n as u32);
    let mut map: std::collections::BTreeMap<Vec<usize>, Vec<usize>> = Default::default();
    for i in 0..dim {
        map.entry(digit_counts(big_n, n, i)).or_default().push(i);
    }
    map.into_iter().map(|(counts, indices)| ChargeSector { counts, indices }).collect()
}

/// Whether every generator image is block-diagonal over charge sectors.
pub fn conserves_charge<S: Scalar>(rep: &TensorRep<S>) -> bool {
    let dim = rep.dim();
    let key: Vec<Vec<usize>> =
        (0..dim).map(|i| digit_counts(rep.big_n, rep.n, i)).collect();
    rep.gens.iter().all(|g| {
        (0..dim).all(|i| (0..dim).all(|j| g.at(i, j).is_zero() || key[i] == key[j]))
    })
}

/// The zero-charge (minimal-weight) sector of `V_2^{⊗n}`: basis indices with
/// `⌊n/2⌋` ones.
pub fn zero_charge_indices(n: usize) -> Vec<usize> {
    let want = n / 2;
    (0..1usize << n).filter(|i| i.count_ones() as usize == want).collect()
}

/// Restrict a `dim × dim` matrix to the rows and columns in `indices`.
pub fn restrict<S: Scalar>(m: &Matrix<S>, indices: &[usize]) -> Matrix<S> {
    let k = indices.len();
    let zero = m.at(0, 0).zero_like();
    let mut out = Matrix::zero_like(k, k, &zero);
    for (a, &i) in indices.iter().enumerate() {
        for (b, &j) in indices.iter().enumerate() {
            *out.at_mut(a, b) = m.at(i, j).clone();
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Pure-braid elements L_i, twists C_k, and spectra
// ---------------------------------------------------------------------------

/// The commuting pure braids `L_1 = 1`, `L_{i+1} = g_i L_i g_i`, the pure
/// twist `C_n = ∏ L_i`, and `G = g_1 ⋯ g_{n−1}`.
#[derive(Debug, Clone)]
pub struct BraidElements<S: Scalar> {
    /// `l[i]` is `L_{i+1}`, for `i = 0 .. n−1`.
    pub l: Vec<Matrix<S>>,
    /// The pure twist `C_n`.
    pub c: Matrix<S>,
    /// `G = g_1 g_2 ⋯ g_{n−1}`.
    pub g: Matrix<S>,
}

pub fn braid_elements<S: Scalar>(rep: &TensorRep<S>) -> BraidElements<S> {
    let id = rep.identity_matrix();
    let mut l = vec![id.clone()];
    for i in 1..rep.n {
        let gi = rep.gen(i);
        l.push(gi.matmul(l.last().unwrap()).matmul(gi));
    }
    let mut c = id.clone();
    for li in &l {
        c = c.matmul(li);
    }
    let mut g = id;
    for i in 1..rep.n {
        g = g.matmul(rep.gen(i));
    }
    BraidElements { l, c, g }
}

fn scalar_from_int<S: Scalar>(sample: &S, k: i64) -> S {
    let one = sample.one_like();
    let mut acc = sample.zero_like();
    for _ in 0..k.abs() {
        acc = acc.add(&one);
    }
    if k < 0 {
        acc = acc.neg();
    }
    acc
}

fn trace<S: Scalar>(m: &Matrix<S>) -> S {
    let mut acc = m.at(0, 0).zero_like();
    for i in 0..m.rows {
        acc = acc.add(m.at(i, i));
    }
    acc
}

/// Characteristic polynomial of a square matrix over a field, by the
/// Faddeev–LeVerrier recursion. Returned monic, constant term first:
/// `c[0] + c[1]·x + ⋯ + c[n]·xⁿ` with `c[n] = 1`.
pub fn char_poly<S: Scalar>(m: &Matrix<S>) -> Vec<S> {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let one = m.at(0, 0).one_like();
    let id = Matrix::identity(n, &one);
    let mut coeffs = vec![one.zero_like(); n + 1];
    coeffs[n] = one.clone();
    let mut aux = Matrix::zero_like(n, n, &one.zero_like());
    for k in 1..=n {
        // aux ← m · (aux + c_{n−k+1}·1);  c_{n−k} = −tr(aux)/k
        aux = m.matmul(&aux.sub(&id.scale(&coeffs[n - k + 1].neg())));
        let k_inv = scalar_from_int(&one, k as i64).inv().expect("k nonzero in ℚ");
        coeffs[n - k] = trace(&aux).neg().mul(&k_inv);
    }
    coeffs
}

/// The monic polynomial `∏ (x − μ)^mult`, constant term first.
pub fn poly_from_roots<S: Scalar>(roots: &[(S, usize)]) -> Vec<S> {
    let sample = &roots[0].0;
    let mut p = vec![sample.one_like()];
    for (mu, mult) in roots {
        for _ in 0..*mult {
            // p ← p·(x − μ)
            let mut next = vec![sample.zero_like(); p.len() + 1];
            for (i, c) in p.iter().enumerate() {
                next[i + 1] = next[i + 1].add(c);
                next[i] = next[i].sub(&c.mul(mu));
            }
            p = next;
        }
    }
    p
}

/// Whether the eigenvalue multiset of `m` (with multiplicity) is exactly
/// the given list, i.e. the characteristic polynomial matches.
pub fn spectrum_matches<S: Scalar>(m: &Matrix<S>, expected: &[(S, usize)]) -> bool {
    let total: usize = expected.iter().map(|(_, k)| k).sum();
    if total != m.rows {
        return false;
    }
    char_poly(m) == poly_from_roots(expected)
}

/// Expected zero-charge spectrum of `M_2(C_k)` as `(q-exponent, multiplicity)`
/// pairs, for `k = 2 .. 6`, listed with the spine factor first.
pub fn twist_spectrum(k: usize) -> Option<Vec<(i64, usize)>> {
    Some(match k {
        2 => vec![(2, 1), (-2, 1)],
        3 => vec![(0, 2), (-6, 1)],
        4 => vec![(0, 2), (-4, 3), (-12, 1)],
        5 => vec![(-4, 5), (-10, 4), (-20, 1)],
        // Continues the pattern of the lower cases: the exponent on the
        // summand with j through-strands is −(j(j+2) + k(k−4))/2.
        6 => vec![(-6, 5), (-10, 9), (-18, 5), (-30, 1)],
        _ => return None,
    })
}

/// Verify, with symbolic `q`, that the zero-charge spectrum of `M_2(C_k)`
/// equals [`twist_spectrum`]`(k)`.
///
/// The tabulated eigenvalues are stated for the twist built from the
/// inverse crossing; equivalently, the representation is evaluated at
/// `q⁻¹` before comparing.
pub fn verify_twist_spectrum(k: usize) -> Result<bool, TensorError> {
    verify_twist_spectrum_at(k, &CycloNumber::q_pow(0, 1))
}

/// As [`verify_twist_spectrum`], but with `q` specialized to any invertible
/// scalar (e.g. an exact rational, which is much cheaper than symbolic `q`
/// for the larger strand counts).
pub fn verify_twist_spectrum_at<S: Scalar>(k: usize, q: &S) -> Result<bool, TensorError> {
    let expected = twist_spectrum(k)
        .ok_or_else(|| TensorError::InvalidInput(format!("no stored spectrum for C_{k}")))?;
    let q_inv = q.inv()?;
    let rep = build_mq_n(2, k, &q_inv)?;
    let c = braid_elements(&rep).c;
    let sector = restrict(&c, &zero_charge_indices(k));
    let power = |e: i64| {
        let base = if e >= 0 { q.clone() } else { q_inv.clone() };
        let mut acc = q.one_like();
        for _ in 0..e.abs() {
            acc = acc.mul(&base);
        }
        acc
    };
    let eigs: Vec<(S, usize)> =
        expected.iter().map(|&(e, mult)| (power(e), mult)).collect();
    Ok(spectrum_matches(&sector, &eigs))
}

// ---------------------------------------------------------------------------
// B-type representations: f^m_b and cabling maps
// ---------------------------------------------------------------------------

/// A matrix representation of the B-type braid group on generators
/// `g_0, g_1, …, g_{n−1}`.
#[derive(Debug, Clone)]
pub struct BTypeRep<S: Scalar> {
    pub n: usize,
    pub q: S,
    pub g0: Matrix<S>,
    /// `gens[i]` is the image of `g_{i+1}`, `i = 0 .. n−2`.
    pub gens: Vec<Matrix<S>>,
}

impl<S: Scalar> BTypeRep<S> {
    /// Verify the defining relations on the images: the type-B relation
    /// `g₀g₁g₀g₁ = g₁g₀g₁g₀`, braid and commutation relations among the
    /// `g_i`, and `g₀ g_j = g_j g₀` for `j ≥ 2`.
    pub fn check_relations(&self) -> Result<(), TensorError> {
        let fail = |what: &str| Err(TensorError::RelationFailure(what.to_string()));
        if !self.gens.is_empty() {
            let (a, b) = (&self.g0, &self.gens[0]);
            let lhs = a.matmul(b).matmul(a).matmul(b);
            let rhs = b.matmul(a).matmul(b).matmul(a);
            if !lhs.sub(&rhs).is_zero() {
                return fail("g0 g1 g0 g1 = g1 g0 g1 g0");
            }
        }
        for j in 1..self.gens.len() {
            let gj = &self.gens[j];
            if !self.g0.matmul(gj).sub(&gj.matmul(&self.g0)).is_zero() {
                return fail("g0 commutes with g_j, j >= 2");
            }
        }
        for i in 0..self.gens.len() {
            for j in i + 1..self.gens.len() {
                let (a, b) = (&self.gens[i], &self.gens[j]);
                if j == i + 1 {
                    let lhs = a.matmul(b).matmul(a);
                    let rhs = b.matmul(a).matmul(b);
                    if !lhs.sub(&rhs).is_zero() {
                        return fail("braid relation among g_i");
                    }
                } else if !a.matmul(b).sub(&b.matmul(a)).is_zero() {
                    return fail("distant generators commute");
                }
            }
        }
        Ok(())
    }
}

/// The homomorphism `f^m_b` from the B-type braid group on `n` strands into
/// the braid group on `n + m − 1` strands: `g₀ ↦ C_m·b`, `g_i ↦ g_{i+m−1}`,
/// where `b` is a braid word on the first `m − 1` strands.
///
/// `base` must be a representation on `n + m − 1` strands; the returned
/// images are verified against the type-B relations.
pub fn f_mb_rep<S: Scalar>(
    m: usize,
    b: &[i64],
    base: &TensorRep<S>,
) -> Result<BTypeRep<S>, TensorError> {
    if m < 1 || base.n < m {
        return Err(TensorError::InvalidInput(format!(
            "auxiliary width {m} not supported on {} strands",
            base.n
        )));
    }
    let n = base.n - m + 1;
    if b.iter().any(|&s| s == 0 || s.unsigned_abs() as usize >= m.max(2) - 1) {
        return Err(TensorError::InvalidInput(format!(
            "braid word {b:?} does not fit on {} strands",
            m - 1
        )));
    }
    // C_m = pure twist on the first m strands.
    let id = base.identity_matrix();
    let mut l = id.clone();
    let mut c_m = id.clone();
    for i in 1..m {
        let gi = base.gen(i);
        l = gi.matmul(&l).matmul(gi);
        c_m = c_m.matmul(&l);
    }
    let g0 = c_m.matmul(&base.word(b)?);
    let gens = (1..n).map(|i| base.gen(i + m - 1).clone()).collect();
    let rep = BTypeRep { n, q: base.q.clone(), g0, gens };
    rep.check_relations()?;
    Ok(rep)
}

/// Which cabling-style extension to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CablingVariant {
    /// `g₀ ↦ g₁`, `g_i ↦` the 2-cabled crossing of strand pairs `i, i+1`.
    Cable,
    /// `g₀ ↦ g_n`, `g_i ↦ g_{n−i} g_{n+i}` (the folded form).
    Fold,
}

/// Extend a representation on `2n` strands to the B-type braid group on `n`
/// strands by one of the cabling morphisms.
pub fn cabling_rep<S: Scalar>(
    variant: CablingVariant,
    n: usize,
    base: &TensorRep<S>,
) -> Result<BTypeRep<S>, TensorError> {
    if base.n != 2 * n {
        return Err(TensorError::InvalidInput(format!(
            "cabling a {n}-strand group needs a {}-strand base, got {}",
            2 * n,
            base.n
        )));
    }
    let (g0, gens) = match variant {
        CablingVariant::Cable => {
            let g0 = base.gen(1).clone();
            let gens = (1..n)
                .map(|i| {
                    // Cross pair (2i−1, 2i) over pair (2i+1, 2i+2).
                    base.gen(2 * i)
                        .matmul(base.gen(2 * i - 1))
                        .matmul(base.gen(2 * i + 1))
                        .matmul(base.gen(2 * i))
                })
                .collect();
            (g0, gens)
        }
        CablingVariant::Fold => {
            let g0 = base.gen(n).clone();
            let gens =
                (1..n).map(|i| base.gen(n - i).matmul(base.gen(n + i))).collect();
            (g0, gens)
        }
    };
    let rep = BTypeRep { n, q: base.q.clone(), g0, gens };
    rep.check_relations()?;
    Ok(rep)
}

// ---------------------------------------------------------------------------
// The M₂ ∘ f²₁ quotient and its blob parameter
// ---------------------------------------------------------------------------

/// `[k]` as a symbolic or cyclotomic number.
pub fn cyclo_quantum_int(l: u32, k: i64) -> CycloNumber {
    let a = k.abs();
    let mut acc = CycloNumber::zero(l);
    let mut e = a - 1;
    while e >= 1 - a {
        acc = acc.add(&CycloNumber::q_pow(l, e));
        e -= 2;
    }
    if k < 0 {
        acc = acc.neg();
    }
    acc
}

/// Outcome of the exact `M₂ ∘ f²₁` blob-parameter computation.
#[derive(Debug, Clone)]
pub struct F21BlobReport {
    /// The exact scalar `k₋` with `u₁ e₋ u₁ = k₋ u₁`.
    pub k_minus: CycloNumber,
    /// The integer blob parameter `m` with `−[m−1]/[m] = k₋`.
    pub blob_m: i64,
    /// Whether `u₁ e₋ u₁ − k₋ u₁` vanished identically.
    pub residual_zero: bool,
    /// Dimension of the image algebra of the induced map.
    pub image_algebra_dim: usize,
    /// Dimension `C(2n, n)` of the blob algebra on `n` strands.
    pub blob_dim: usize,
}

fn binomial(n: usize, k: usize) -> usize {
    let mut acc = 1usize;
    for i in 0..k.min(n - k) {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Find the scalar `c` with `a = c·b` for nonzero `b`; `None` if no such
/// scalar exists.
fn solve_scalar_multiple<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> Option<S> {
    let pivot = (0..b.data.len()).find(|&k| !b.data[k].is_zero())?;
    let c = a.data[pivot].mul(&b.data[pivot].inv().ok()?);
    if a.sub(&b.scale(&c)).is_zero() {
        Some(c)
    } else {
        None
    }
}

fn flatten_sparse<S: Scalar>(m: &Matrix<S>) -> Vec<(usize, S)> {
    m.data
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

/// Dimension of the unital algebra generated by a set of matrices, by
/// saturating a linear span under right multiplication.
pub fn matrix_algebra_dim<S: Scalar>(generators: &[Matrix<S>]) -> usize {
    let sample = generators[0].at(0, 0);
    let id = Matrix::identity(generators[0].rows, sample);
    let mut span: Span<S> = Span::new();
    let mut frontier = vec![id];
    span.insert(flatten_sparse(&frontier[0])).expect("identity is nonzero");
    while let Some(x) = frontier.pop() {
        for g in generators {
            let y = x.matmul(g);
            if span.insert(flatten_sparse(&y)).expect("field inversion") {
                frontier.push(y);
            }
        }
    }
    span.dim()
}

/// Run the `M₂ ∘ f²₁` analysis on `n` blob strands with symbolic `q`:
/// identify `e₋` as the spectral projection of `g₀` onto its `q²`
/// eigenspace, solve `u₁ e₋ u₁ = k₋ u₁` exactly, and determine the blob
/// parameter `m`.
pub fn f21_blob_check(n: usize) -> Result<F21BlobReport, TensorError> {
    if n < 2 {
        return Err(TensorError::InvalidInput("need n >= 2 blob strands".into()));
    }
    let q = CycloNumber::q_pow(0, 1);
    let base = build_mq_n(2, n + 1, &q)?;
    let rep = f_mb_rep(2, &[], &base)?;
    // g0 = g1², with eigenvalues q² and q⁻²; e₋ = (g0 − q⁻²)/(q² − q⁻²).
    let id = base.identity_matrix();
    let q2 = CycloNumber::q_pow(0, 2);
    let qm2 = CycloNumber::q_pow(0, -2);
    let denom_inv = q2.sub(&qm2).inv()?;
    let e_minus = rep.g0.sub(&id.scale(&qm2)).scale(&denom_inv);
    if !e_minus.matmul(&e_minus).sub(&e_minus).is_zero() {
        return Err(TensorError::RelationFailure("e₋ projection is not idempotent".into()));
    }
    // u₁ = image of g₁ minus q = base g₂ − q.
    let u1 = base.gen(2).sub(&id.scale(&q));
    let sandwich = u1.matmul(&e_minus).matmul(&u1);
    let k_minus = solve_scalar_multiple(&sandwich, &u1).ok_or_else(|| {
        TensorError::RelationFailure("u₁e₋u₁ is not a scalar multiple of u₁".into())
    })?;
    // Solve −[m−1]/[m] = k₋ over the integers.
    let blob_m = (-8..=8)
        .filter(|&m| m != 0)
        .find(|&m| {
            let qm = cyclo_quantum_int(0, m);
            !qm.is_zero()
                && cyclo_quantum_int(0, m - 1).mul(&qm.inv().expect("nonzero")).neg()
                    == k_minus
        })
        .ok_or_else(|| {
            TensorError::RelationFailure(format!("k₋ = {k_minus} matches no integer parameter"))
        })?;
    let mut algebra_gens = vec![rep.g0.clone()];
    algebra_gens.extend(rep.gens.iter().cloned());
    Ok(F21BlobReport {
        k_minus,
        blob_m,
        residual_zero: true,
        image_algebra_dim: matrix_algebra_dim(&algebra_gens),
        blob_dim: binomial(2 * n, n),
    })
}

// ---------------------------------------------------------------------------
// The ρ-representations of the blob algebra
// ---------------------------------------------------------------------------

/// Which blob image to use for `e₋`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RhoVariant {
    /// `e₋ ↦ (1/[2]_r) · 𝒰^r(0)` at the centre pair.
    Rho0,
    /// `e₋ ↦ (1/[2]_r) · 𝒰^r([2]_r)` at the centre pair.
    RhoS,
}

/// Specialized parameters for a ρ-representation: unit scalars `q, r, s, t`
/// and the target scalar `[m−1]_q/[m]_q` for the `U₁ e₋ U₁` relation.
#[derive(Debug, Clone)]
pub struct RhoParams<S: Scalar> {
    pub q: S,
    pub r: S,
    pub s: S,
    pub t: S,
    /// `[m−1]_q/[m]_q`.
    pub k_ratio: S,
}

/// `sin(π·p/den)` inside `ℚ(ζ_L)` with `L = 2·den`, as
/// `(ζ^p − ζ^{−p}) / (2i)` where `i = ζ^{den/2}`.
fn cyclo_sin(l: u32, den: i64, p: i64) -> CycloNumber {
    debug_assert_eq!(l as i64, 2 * den);
    debug_assert_eq!(den % 2, 0);
    let num = CycloNumber::q_pow(l, p).sub(&CycloNumber::q_pow(l, -p));
    let two_i = CycloNumber::q_pow(l, den / 2).mul(&CycloNumber::from_int(l, 2));
    num.mul(&two_i.inv().expect("2i is a unit"))
}

impl RhoParams<CycloNumber> {
    /// Exact parameters for `μ_q = π·a/b` and rational `m = u/v`, realized in
    /// the cyclotomic field of conductor `2·lcm(2b, v·b, 4)` through the
    /// angles `μ_r = m·μ_q + π/2`, `μ_{s,t} = μ_q/2 ∓ 3π/4`.
    pub fn exact(a: i64, b: i64, u: i64, v: i64) -> Result<Self, TensorError> {
        if b <= 0 || v <= 0 {
            return Err(TensorError::InvalidInput("denominators must be positive".into()));
        }
        if u == 0 {
            return Err(TensorError::ParameterConstraintViolated("m = 0 is excluded".into()));
        }
        let d = (2 * b).lcm(&(v * b)).lcm(&4);
        let l = (2 * d) as u32;
        let p_q = a * d / b;
        // q = ±1 ⟺ sin(μ_q) = 0.
        let sin_q = cyclo_sin(l, d, p_q);
        if sin_q.is_zero() {
            return Err(TensorError::ParameterConstraintViolated("q = ±1 is excluded".into()));
        }
        let sin_mq = cyclo_sin(l, d, u * a * d / (v * b));
        if sin_mq.is_zero() {
            return Err(TensorError::ParameterConstraintViolated(
                "[m]_q vanishes at these parameters".into(),
            ));
        }
        let sin_m1q = cyclo_sin(l, d, (u - v) * a * d / (v * b));
        Ok(RhoParams {
            q: CycloNumber::q_pow(l, p_q),
            r: CycloNumber::q_pow(l, u * a * d / (v * b) + d / 2),
            s: CycloNumber::q_pow(l, a * d / (2 * b) - 3 * d / 4),
            t: CycloNumber::q_pow(l, a * d / (2 * b) + 3 * d / 4),
            k_ratio: sin_m1q.mul(&sin_mq.inv()?),
        })
    }
}

impl RhoParams<C64> {
    /// Floating-point parameters for real `μ_q` and `m`, via the same angle
    /// realization as [`RhoParams::exact`].
    pub fn numeric(mu_q: f64, m: f64) -> Result<Self, TensorError> {
        let tol = 1e-8;
        if mu_q.sin().abs() < tol {
            return Err(TensorError::ParameterConstraintViolated("q = ±1 is excluded".into()));
        }
        if (m * mu_q).sin().abs() < tol {
            return Err(TensorError::ParameterConstraintViolated(
                "[m]_q vanishes at these parameters".into(),
            ));
        }
        let unit = |mu: f64| C64(num_complex::Complex64::from_polar(1.0, mu));
        let k = ((m - 1.0) * mu_q).sin() / (m * mu_q).sin();
        Ok(RhoParams {
            q: unit(mu_q),
            r: unit(m * mu_q + std::f64::consts::FRAC_PI_2),
            s: unit(mu_q / 2.0 - 3.0 * std::f64::consts::FRAC_PI_4),
            t: unit(mu_q / 2.0 + 3.0 * std::f64::consts::FRAC_PI_4),
            k_ratio: C64(num_complex::Complex64::new(k, 0.0)),
        })
    }

    /// Parameters for the `ρ_s` variant: `s, t` as in [`RhoParams::numeric`],
    /// but `r` solved (numerically, generally off the unit circle) so that
    /// the decorated-loop relation keeps the value `[m−1]_q/[m]_q` despite
    /// the extra `t/s` contribution of the corner entry.
    pub fn numeric_rho_s(mu_q: f64, m: f64) -> Result<Self, TensorError> {
        let base = Self::numeric(mu_q, m)?;
        let q = base.q.0;
        let i = num_complex::Complex64::new(0.0, 1.0);
        let k = base.k_ratio.0;
        // The corner entry adds s/t = e^{i(μ_s−μ_t)} = i to the sandwich
        // scalar, so r must satisfy cos(μ_q − μ_r)/cos(μ_r) = k − i:
        // (q/w + w/q) = (k − i)(w + 1/w) ⟹ w² = q(k − i − q)/(1 − q(k − i)).
        let w2 = q * (k - i - q) / (num_complex::Complex64::new(1.0, 0.0) - q * (k - i));
        let w = w2.sqrt();
        if w.norm() < 1e-12 {
            return Err(TensorError::ParameterConstraintViolated(
                "r degenerates at these parameters".into(),
            ));
        }
        Ok(RhoParams { r: C64(w), ..base })
    }
}

/// A ρ-representation of the blob algebra on `n` strands acting on
/// `V_2^{⊗2n}`.
#[derive(Debug, Clone)]
pub struct RhoRep<S: Scalar> {
    pub n: usize,
    pub e_minus: Matrix<S>,
    /// `u[i]` is the image of `U_{i+1}`, `i = 0 .. n−2`.
    pub u: Vec<Matrix<S>>,
    /// `[2]_q = q + q⁻¹`.
    pub bracket2_q: S,
    /// `[m−1]_q/[m]_q`.
    pub k_ratio: S,
}

/// Build the ρ-representation: `e₋ ↦ (1/[2]_r)·𝒰^r(x)` at positions
/// `(n, n+1)` (with `x = 0` for ρ₀ and `x = [2]_r` for ρ_s), and
/// `U_i ↦ 𝒰^s` at `(n−i, n−i+1)` times `𝒰^t` at `(n+i, n+i+1)`.
pub fn rho_rep<S: Scalar>(
    params: &RhoParams<S>,
    n: usize,
    variant: RhoVariant,
) -> Result<RhoRep<S>, TensorError> {
    if n < 1 {
        return Err(TensorError::InvalidInput("need at least one blob strand".into()));
    }
    let strands = 2 * n;
    let bracket2_r = params.r.add(&params.r.inv()?);
    let x = match variant {
        RhoVariant::Rho0 => params.r.zero_like(),
        RhoVariant::RhoS => bracket2_r.clone(),
    };
    let local_e = local_u(&params.r, &x)?;
    let e_minus =
        embed_pair(2, strands, n, &local_e).scale(&bracket2_r.inv().map_err(|_| {
            TensorError::ParameterConstraintViolated("[2]_r vanishes".into())
        })?);
    let local_s = local_u(&params.s, &params.s.zero_like())?;
    let local_t = local_u(&params.t, &params.t.zero_like())?;
    let u = (1..n)
        .map(|i| {
            embed_pair(2, strands, n - i, &local_s)
                .matmul(&embed_pair(2, strands, n + i, &local_t))
        })
        .collect();
    Ok(RhoRep {
        n,
        e_minus,
        u,
        bracket2_q: params.q.add(&params.q.inv()?),
        k_ratio: params.k_ratio.clone(),
    })
}

/// Residual matrices, one per blob relation, all zero exactly when the
/// images satisfy the blob presentation
/// `e₋² = e₋`, `U_i² = [2]_q U_i`, `U_i U_{i±1} U_i = U_i`,
/// `U₁ e₋ U₁ = ([m−1]_q/[m]_q) U₁`, distant generators commuting.
pub fn rho_residuals<S: Scalar>(rep: &RhoRep<S>) -> Vec<(String, Matrix<S>)> {
    let mut out = Vec::new();
    let e = &rep.e_minus;
    out.push(("e- e- - e-".to_string(), e.matmul(e).sub(e)));
    for (i, ui) in rep.u.iter().enumerate() {
        out.push((
            format!("U{0} U{0} - [2] U{0}", i + 1),
            ui.matmul(ui).sub(&ui.scale(&rep.bracket2_q)),
        ));
    }
    for i in 0..rep.u.len() {
        for j in i + 1..rep.u.len() {
            let (a, b) = (&rep.u[i], &rep.u[j]);
            if j == i + 1 {
                out.push((
                    format!("U{} U{} U{} - U{}", i + 1, j + 1, i + 1, i + 1),
                    a.matmul(b).matmul(a).sub(a),
                ));
                out.push((
                    format!("U{} U{} U{} - U{}", j + 1, i + 1, j + 1, j + 1),
                    b.matmul(a).matmul(b).sub(b),
                ));
            } else {
                out.push((
                    format!("[U{}, U{}]", i + 1, j + 1),
                    a.matmul(b).sub(&b.matmul(a)),
                ));
            }
        }
    }
    for (i, ui) in rep.u.iter().enumerate().skip(1) {
        out.push((format!("[e-, U{}]", i + 1), e.matmul(ui).sub(&ui.matmul(e))));
    }
    if let Some(u1) = rep.u.first() {
        out.push((
            "U1 e- U1 - ([m-1]/[m]) U1".to_string(),
            u1.matmul(e).matmul(u1).sub(&u1.scale(&rep.k_ratio)),
        ));
    }
    out
}

/// Whether every generator image is a symmetric matrix (contravariant
/// self-duality of the ρ-representations).
pub fn rho_symmetric<S: Scalar>(rep: &RhoRep<S>) -> bool {
    let sym = |m: &Matrix<S>| {
        (0..m.rows).all(|i| (0..m.cols).all(|j| m.at(i, j) == m.at(j, i)))
    };
    sym(&rep.e_minus) && rep.u.iter().all(|u| sym(u))
}

/// Largest entry modulus of a floating-point residual matrix.
pub fn matrix_max_norm(m: &Matrix<C64>) -> f64 {
    m.data.iter().map(|c| c.0.norm()).fold(0.0, f64::max)
}

/// Check the scalar sandwich identity
/// `(𝒰^s⊗𝒰^t)(1⊗𝒰^r(x)⊗1)(𝒰^s⊗𝒰^t) = (r/(st) + st/r + x·t/s)(𝒰^s⊗𝒰^t)`
/// for arbitrary invertible `r, s, t` and arbitrary `x`; `𝒰^t` acts on the
/// outer pair nearer the most significant tensor factor.
pub fn rst_scalar_identity<S: Scalar>(
    r: &S,
    s: &S,
    t: &S,
    x: &S,
) -> Result<bool, TensorError> {
    let outer = embed_pair(2, 4, 1, &local_u(t, &t.zero_like())?)
        .matmul(&embed_pair(2, 4, 3, &local_u(s, &s.zero_like())?));
    let middle = embed_pair(2, 4, 2, &local_u(r, x)?);
    let st = s.mul(t);
    let scalar = r
        .mul(&st.inv()?)
        .add(&st.mul(&r.inv()?))
        .add(&x.mul(t).mul(&s.inv()?));
    Ok(outer.matmul(&middle).matmul(&outer).sub(&outer.scale(&scalar)).is_zero())
}

// ---------------------------------------------------------------------------
// The deformed N = 3 tensor-product map
// ---------------------------------------------------------------------------

/// Residual of the type-B relation `g₀g₁g₀g₁ − g₁g₀g₁g₀` for the deformed
/// two-sided tensor map on `V_3^{⊗4}` with
/// `g₁ ↦ M^q_3(g_1)·M^r_3(g_3)` and `g₀ ↦ 1⊗M^s_3(g)⊗1`,
/// over the cyclotomic field of conductor `l` with `q = ζ^{pq}`,
/// `r = ζ^{pr}`, `s = ζ^{ps}`.
pub fn deformed_n3_b_relation_residual(
    l: u32,
    pq: i64,
    pr: i64,
    ps: i64,
) -> Result<Matrix<CycloNumber>, TensorError> {
    let local = |p: i64| local_crossing(3, &CycloNumber::q_pow(l, p));
    let g1 = embed_pair(3, 4, 1, &local(pq)?).matmul(&embed_pair(3, 4, 3, &local(pr)?));
    let g0 = embed_pair(3, 4, 2, &local(ps)?);
    let lhs = g0.matmul(&g1).matmul(&g0).matmul(&g1);
    let rhs = g1.matmul(&g0).matmul(&g1).matmul(&g0);
    Ok(lhs.sub(&rhs))
}
