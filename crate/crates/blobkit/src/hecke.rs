//! Normal-form rewriting engine for the cyclotomic algebra `H(n,d)` on the
//! basis `{X^a·w}` (X-exponents below `d`, `w` a canonically reduced
//! permutation word), together with the one-dimensional idempotents
//! `E(±,l,n)`, center computations, quotient-ideal membership, and the
//! conjectured-basis count.
//!
//! Everything is generic over a coefficient context; idempotent arithmetic
//! runs over the symbolic fraction field so that poles are detected at
//! specialization time instead of being silently divided through.

use crate::linalg::Span;
use crate::ring::{CoeffCtx, LaurentPoly, RationalCtx, RationalFn, Scalar, SymbolicCtx};
use crate::walks::Walk;
use num_rational::BigRational;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

/// Errors from Hecke-algebra computations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HeckeError {
    /// A coefficient denominator vanishes at the requested specialization.
    #[error("denominator vanishes at the requested specialization: {0}")]
    PoleAtSpecialization(String),
    /// No basis coefficient of the element is a unit times an invertible
    /// denominator, so no integral normal form exists.
    #[error("no unit coefficient available for denominator clearing")]
    NoUnitCoefficient,
    /// The regular representation is too large for dense linear algebra.
    #[error("dimension {dim} exceeds the size limit {limit}")]
    SizeLimit { dim: usize, limit: usize },
}

// ---------------------------------------------------------------------------
// Permutations with canonical reduced words
// ---------------------------------------------------------------------------

/// A permutation of `{0,…,n−1}` in one-line notation (`map[i]` is the image
/// of `i`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    map: Vec<usize>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm { map: (0..n).collect() }
    }

    pub fn from_map(map: Vec<usize>) -> Self {
        let mut seen = vec![false; map.len()];
        for &v in &map {
            assert!(v < map.len() && !seen[v], "not a permutation");
            seen[v] = true;
        }
        Perm { map }
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Coxeter length = number of inversions.
    pub fn length(&self) -> usize {
        let mut count = 0;
        for i in 0..self.map.len() {
            for j in i + 1..self.map.len() {
                if self.map[i] > self.map[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// Left product by the adjacent transposition `s_i` (swaps the values
    /// `i` and `i+1`).
    pub fn swap_values(&self, i: usize) -> Self {
        let map = self
            .map
            .iter()
            .map(|&v| {
                if v == i {
                    i + 1
                } else if v == i + 1 {
                    i
                } else {
                    v
                }
            })
            .collect();
        Perm { map }
    }

    /// Right product by `s_i` (swaps the entries in positions `i`, `i+1`).
    pub fn swap_positions(&self, i: usize) -> Self {
        let mut map = self.map.clone();
        map.swap(i, i + 1);
        Perm { map }
    }

    /// `i` is a left descent iff `ℓ(s_i·w) < ℓ(w)`, i.e. the value `i`
    /// occurs to the right of `i+1` in one-line notation.
    pub fn is_left_descent(&self, i: usize) -> bool {
        let pos_i = self.map.iter().position(|&v| v == i).unwrap();
        let pos_i1 = self.map.iter().position(|&v| v == i + 1).unwrap();
        pos_i > pos_i1
    }

    /// `i` is a right descent iff `ℓ(w·s_i) < ℓ(w)`.
    pub fn is_right_descent(&self, i: usize) -> bool {
        self.map[i] > self.map[i + 1]
    }

    /// The lexicographically minimal reduced word, as 0-based generator
    /// indices: greedily peel the smallest left descent.
    pub fn canonical_word(&self) -> Vec<usize> {
        let mut w = self.clone();
        let mut word = Vec::with_capacity(self.length());
        'outer: loop {
            for i in 0..w.n().saturating_sub(1) {
                if w.is_left_descent(i) {
                    word.push(i);
                    w = w.swap_values(i);
                    continue 'outer;
                }
            }
            debug_assert!(w.is_identity());
            return word;
        }
    }

    /// Pad to act on `m ≥ n` points, fixing the new ones.
    pub fn extend_to(&self, m: usize) -> Self {
        assert!(m >= self.n());
        let mut map = self.map.clone();
        map.extend(self.n()..m);
        Perm { map }
    }
}

/// All permutations of `{0,…,n−1}`.
pub fn all_perms(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut map: Vec<usize> = (0..n).collect();
    fn heap(k: usize, map: &mut Vec<usize>, out: &mut Vec<Perm>) {
        if k <= 1 {
            out.push(Perm { map: map.clone() });
            return;
        }
        for i in 0..k {
            heap(k - 1, map, out);
            if k % 2 == 0 {
                map.swap(i, k - 1);
            } else {
                map.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut map, &mut out);
    out.sort_by(|p, q| p.map.cmp(&q.map));
    out
}

// ---------------------------------------------------------------------------
// Basis words and elements
// ---------------------------------------------------------------------------

/// A basis word `X₁^{a₁}···X_n^{a_n}·w` with all exponents below `d`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HeckeWord {
    pub a: Vec<u8>,
    pub w: Perm,
}

impl HeckeWord {
    pub fn identity(n: usize) -> Self {
        HeckeWord { a: vec![0; n], w: Perm::identity(n) }
    }

    pub fn extend_to(&self, m: usize) -> Self {
        let mut a = self.a.clone();
        a.resize(m, 0);
        HeckeWord { a, w: self.w.extend_to(m) }
    }
}

impl fmt::Display for HeckeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (j, &e) in self.a.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("X{}", j + 1)),
                _ => parts.push(format!("X{}^{}", j + 1, e)),
            }
        }
        for i in self.w.canonical_word() {
            parts.push(format!("g{}", i + 1));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// An element of `H(n,d)` in normal form: a finite sum of basis words with
/// nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeckeElement<S: Scalar> {
    n: usize,
    terms: BTreeMap<HeckeWord, S>,
}

impl<S: Scalar> HeckeElement<S> {
    pub fn zero(n: usize) -> Self {
        HeckeElement { n, terms: BTreeMap::new() }
    }

    pub fn from_term(n: usize, word: HeckeWord, c: S) -> Self {
        let mut e = Self::zero(n);
        e.add_term(word, c);
        e
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&HeckeWord, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, word: &HeckeWord) -> Option<&S> {
        self.terms.get(word)
    }

    fn add_term(&mut self, word: HeckeWord, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    o.insert(s);
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        HeckeElement {
            n: self.n,
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        if s.is_zero() {
            return Self::zero(self.n);
        }
        HeckeElement {
            n: self.n,
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c.mul(s))).collect(),
        }
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> HeckeElement<T> {
        let mut out = HeckeElement::zero(self.n);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c));
        }
        out
    }

    /// View inside `H(m,d)` for `m ≥ n` (the standard inclusion).
    pub fn extend_to(&self, m: usize) -> Self {
        assert!(m >= self.n);
        let mut out = HeckeElement::zero(m);
        for (w, c) in &self.terms {
            out.add_term(w.extend_to(m), c.clone());
        }
        out
    }
}

impl<S: Scalar + fmt::Display> fmt::Display for HeckeElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.terms.iter().map(|(w, c)| format!("({c})·{w}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// The identity element `1`.
pub fn one<F: CoeffCtx>(n: usize, ctx: &F) -> HeckeElement<F::C> {
    HeckeElement::from_term(n, HeckeWord::identity(n), ctx.one())
}

/// The generator `g_{i+1}` (`i` is the 0-based index; swaps strands `i`,
/// `i+1`).
pub fn g_elem<F: CoeffCtx>(n: usize, i: usize, ctx: &F) -> HeckeElement<F::C> {
    assert!(i + 1 < n);
    let word = HeckeWord { a: vec![0; n], w: Perm::identity(n).swap_values(i) };
    HeckeElement::from_term(n, word, ctx.one())
}

// ---------------------------------------------------------------------------
// The rewriting engine: left multiplication by generators
// ---------------------------------------------------------------------------

/// Coefficients `c_0,…,c_d` of `∏_{i=1}^{d}(T − λ_i) = Σ c_j T^j`.
fn cyclotomic_coeffs<F: CoeffCtx>(ctx: &F) -> Vec<F::C> {
    let d = ctx.num_lambdas();
    let mut c = vec![ctx.one()];
    for i in 1..=d {
        let lam = ctx.lambda(i);
        let mut next = vec![ctx.zero(); c.len() + 1];
        for (j, cj) in c.iter().enumerate() {
            next[j + 1] = next[j + 1].add(cj);
            next[j] = next[j].sub(&cj.mul(&lam));
        }
        c = next;
    }
    c
}

/// Expand `g·X_i^a·X_{i+1}^b` in the local subalgebra as a sum of terms
/// `coef · X_i^e X_{i+1}^f g^{has_g}`, using the exchange relations
/// `g X_i = X_{i+1} g − (q−q⁻¹) X_{i+1}` and
/// `g X_{i+1} = X_i g + (q−q⁻¹) X_{i+1}`.
fn local_push<F: CoeffCtx>(ctx: &F, a: u8, b: u8) -> Vec<(F::C, u8, u8, bool)> {
    let mut acc: BTreeMap<(u8, u8, bool), F::C> = BTreeMap::new();
    let bump = |key: (u8, u8, bool), c: F::C, acc: &mut BTreeMap<(u8, u8, bool), F::C>| {
        let entry = acc.entry(key).or_insert_with(|| ctx.zero());
        *entry = entry.add(&c);
    };
    let qdiff = ctx.q_pow(1).sub(&ctx.q_pow(-1));
    if a == 0 && b == 0 {
        return vec![(ctx.one(), 0, 0, true)];
    }
    if a > 0 {
        for (c, e, f, g) in local_push(ctx, a - 1, b) {
            bump((e, f + 1, g), c, &mut acc);
        }
        bump((a - 1, b + 1, false), qdiff.neg(), &mut acc);
    } else {
        for (c, e, f, g) in local_push(ctx, 0, b - 1) {
            bump((e + 1, f, g), c, &mut acc);
        }
        bump((0, b, false), qdiff, &mut acc);
    }
    let d = ctx.num_lambdas() as u8;
    acc.into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((e, f, g), c)| {
            debug_assert!(e < d && f < d, "local exchange overflowed the exponent bound");
            (c, e, f, g)
        })
        .collect()
}

/// Left multiplication by `g_{i+1}` (0-based `i`).
pub fn left_mul_g<F: CoeffCtx>(ctx: &F, i: usize, x: &HeckeElement<F::C>) -> HeckeElement<F::C> {
    let n = x.n;
    assert!(i + 1 < n);
    let qdiff = ctx.q_pow(1).sub(&ctx.q_pow(-1));
    let mut out = HeckeElement::zero(n);
    for (word, c) in &x.terms {
        for (cf, e, f, has_g) in local_push(ctx, word.a[i], word.a[i + 1]) {
            let mut a = word.a.clone();
            a[i] = e;
            a[i + 1] = f;
            let coeff = c.mul(&cf);
            if has_g {
                if word.w.is_left_descent(i) {
                    // g_i·w = (q−q⁻¹)·w + s_i·w  when the length drops.
                    out.add_term(HeckeWord { a: a.clone(), w: word.w.clone() }, coeff.mul(&qdiff));
                    out.add_term(HeckeWord { a, w: word.w.swap_values(i) }, coeff);
                } else {
                    out.add_term(HeckeWord { a, w: word.w.swap_values(i) }, coeff);
                }
            } else {
                out.add_term(HeckeWord { a, w: word.w.clone() }, coeff);
            }
        }
    }
    out
}

/// Right multiplication by `g_{i+1}` (0-based `i`); the X-part commutes past
/// the permutation unchanged.
pub fn right_mul_g<F: CoeffCtx>(ctx: &F, i: usize, x: &HeckeElement<F::C>) -> HeckeElement<F::C> {
    let n = x.n;
    assert!(i + 1 < n);
    let qdiff = ctx.q_pow(1).sub(&ctx.q_pow(-1));
    let mut out = HeckeElement::zero(n);
    for (word, c) in &x.terms {
        if word.w.is_right_descent(i) {
            out.add_term(word.clone(), c.mul(&qdiff));
            out.add_term(HeckeWord { a: word.a.clone(), w: word.w.swap_positions(i) }, c.clone());
        } else {
            out.add_term(HeckeWord { a: word.a.clone(), w: word.w.swap_positions(i) }, c.clone());
        }
    }
    out
}

/// Left multiplication by `X₁`, reducing exponent overflow with the degree-d
/// relation `∏(X₁−λ_i) = 0`.
pub fn left_mul_x1<F: CoeffCtx>(ctx: &F, x: &HeckeElement<F::C>) -> HeckeElement<F::C> {
    let n = x.n;
    let d = ctx.num_lambdas() as u8;
    let cyclo = cyclotomic_coeffs(ctx);
    let mut out = HeckeElement::zero(n);
    for (word, c) in &x.terms {
        if word.a[0] + 1 < d || d == 0 {
            let mut a = word.a.clone();
            a[0] += 1;
            out.add_term(HeckeWord { a, w: word.w.clone() }, c.clone());
        } else {
            // X₁^d = −Σ_{j<d} c_j X₁^j.
            for (j, cj) in cyclo.iter().enumerate().take(d as usize) {
                let mut a = word.a.clone();
                a[0] = j as u8;
                out.add_term(HeckeWord { a, w: word.w.clone() }, c.mul(&cj.neg()));
            }
        }
    }
    out
}

/// Left multiplication by `X_{j+1}` (0-based strand `j`), via
/// `X_{j+1} = g_j X_j g_j`.
pub fn left_mul_x<F: CoeffCtx>(ctx: &F, j: usize, x: &HeckeElement<F::C>) -> HeckeElement<F::C> {
    if j == 0 {
        left_mul_x1(ctx, x)
    } else {
        left_mul_g(ctx, j - 1, &left_mul_x(ctx, j - 1, &left_mul_g(ctx, j - 1, x)))
    }
}

/// Left multiplication by a basis word.
pub fn left_mul_word<F: CoeffCtx>(
    ctx: &F,
    word: &HeckeWord,
    x: &HeckeElement<F::C>,
) -> HeckeElement<F::C> {
    let mut acc = x.clone();
    for &i in word.w.canonical_word().iter().rev() {
        acc = left_mul_g(ctx, i, &acc);
    }
    for (j, &e) in word.a.iter().enumerate() {
        for _ in 0..e {
            acc = left_mul_x(ctx, j, &acc);
        }
    }
    acc
}

/// Product `x·y` in normal form.
pub fn multiply<F: CoeffCtx>(
    ctx: &F,
    x: &HeckeElement<F::C>,
    y: &HeckeElement<F::C>,
) -> HeckeElement<F::C> {
    assert_eq!(x.n, y.n);
    let mut out = HeckeElement::zero(x.n);
    for (word, c) in &x.terms {
        let part = left_mul_word(ctx, word, y);
        for (w2, c2) in part.terms {
            out.add_term(w2, c.mul(&c2));
        }
    }
    out
}

/// Normal form of `X_j` (1-based `j`).
pub fn x_element<F: CoeffCtx>(j: usize, n: usize, ctx: &F) -> HeckeElement<F::C> {
    assert!(1 <= j && j <= n);
    left_mul_x(ctx, j - 1, &one(n, ctx))
}

/// The full basis of `H(n,d)`, in `HeckeWord` order.
pub fn enumerate_basis(n: usize, d: usize) -> Vec<HeckeWord> {
    let mut exps: Vec<Vec<u8>> = vec![vec![]];
    for _ in 0..n {
        exps = exps
            .into_iter()
            .flat_map(|a| {
                (0..d as u8).map(move |e| {
                    let mut b = a.clone();
                    b.push(e);
                    b
                })
            })
            .collect();
    }
    let perms = all_perms(n);
    let mut out: Vec<HeckeWord> = exps
        .into_iter()
        .flat_map(|a| perms.iter().map(move |w| HeckeWord { a: a.clone(), w: w.clone() }))
        .collect();
    out.sort();
    out
}

// ---------------------------------------------------------------------------
// One-dimensional idempotents
// ---------------------------------------------------------------------------

/// Sign of a one-dimensional representation (`g_i ↦ ±q^{±1}`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

/// Label of the one-dimensional representation with `g_i ↦ ±q^{±1}` and
/// `X ↦ λ_l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdempotentSpec {
    pub sign: Sign,
    pub l: usize,
    pub n: usize,
}

/// `P(j) = q^{j−1}[j]·∏_{i≠1}(q^{2j−2}λ₁ − λ_i)` as a polynomial.
fn p_plus1(d: usize, j: usize) -> LaurentPoly {
    let ctx = SymbolicCtx { d };
    let mut p = LaurentPoly::q_pow(d, j as i64 - 1).mul(&quantum_poly(d, j as i64));
    for i in 2..=d {
        let f = LaurentPoly::q_pow(d, 2 * j as i64 - 2)
            .mul(&LaurentPoly::lambda(d, 1))
            .sub(&LaurentPoly::lambda(d, i));
        p = p.mul(&f);
    }
    let _ = ctx;
    p
}

fn quantum_poly(d: usize, n: i64) -> LaurentPoly {
    crate::ring::quantum_integer(d, n)
}

/// `λ^{(i)} = e_i(−λ₂,…,−λ_d)` as a polynomial.
fn lambda_sym(d: usize, i: usize) -> LaurentPoly {
    let mut coeffs = vec![LaurentPoly::one(d)];
    for j in 2..=d {
        let neg = LaurentPoly::lambda(d, j).neg();
        let mut next = vec![LaurentPoly::zero(d); coeffs.len() + 1];
        for (k, ck) in coeffs.iter().enumerate() {
            next[k] = next[k].add(ck);
            next[k + 1] = next[k + 1].add(&ck.mul(&neg));
        }
        coeffs = next;
    }
    coeffs.get(i).cloned().unwrap_or_else(|| LaurentPoly::zero(d))
}

/// Build `E(+,1,n)` over the symbolic fraction field by the two-sided
/// recursion `E_{j+1} = E_j(β_{j+1} g_j + Σ_i α^i_{j+1} X_{j+1}^i)E_j`.
fn build_plus1(d: usize, n: usize) -> HeckeElement<RationalFn> {
    let ctx = SymbolicCtx { d };
    let q2 = |k: i64| RationalFn::from_poly(LaurentPoly::q_pow(d, k));
    let mut e = one(n, &ctx);
    for j in 0..n {
        // Step j builds E_{j+1}; all coefficients share denominator P(j+1).
        let pj1 = RationalFn::from_poly(p_plus1(d, j + 1));
        let inv_pj1 = pj1.inv().expect("P(j+1) is a nonzero polynomial");
        let mut alphas = vec![RationalFn::zero(d); d];
        alphas[0] = RationalFn::from_poly(lambda_sym(d, d - 1)).mul(&inv_pj1);
        for i in 1..d {
            let mut num = LaurentPoly::q_pow(d, 2 * j as i64).mul(&lambda_sym(d, i - 1));
            for l in 2..=i {
                let t = LaurentPoly::q_pow(d, (i as i64 - 1) * (2 * j as i64 - 2))
                    .mul(&LaurentPoly::q_pow(d, 2 * j as i64).sub(&LaurentPoly::one(d)))
                    .mul(&LaurentPoly::lambda(d, 1).pow(l as u32 - 1))
                    .mul(&lambda_sym(d, i - l));
                num = num.add(&t);
            }
            alphas[d - i] = RationalFn::from_poly(num).mul(&inv_pj1);
        }
        let mut factor = HeckeElement::zero(n);
        if j >= 1 {
            let beta = q2(1).mul(&RationalFn::from_poly(p_plus1(d, j))).mul(&inv_pj1);
            factor = factor.add(&g_elem(n, j - 1, &ctx).scale(&beta));
        }
        let xj1 = x_element(j + 1, n, &ctx);
        let mut xpow = one(n, &ctx);
        for alpha in alphas.iter() {
            factor = factor.add(&xpow.scale(alpha));
            xpow = multiply(&ctx, &xj1, &xpow);
        }
        e = multiply(&ctx, &e, &multiply(&ctx, &factor, &e));
    }
    e
}

fn plus1_cache() -> &'static Mutex<BTreeMap<(usize, usize), HeckeElement<RationalFn>>> {
    static CACHE: OnceLock<Mutex<BTreeMap<(usize, usize), HeckeElement<RationalFn>>>> =
        OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BTreeMap::new()))
}

/// The idempotent `E(±,l,n)` over the symbolic fraction field. `E(+,1,n)`
/// comes from the recursion; the other labels are its images under the
/// involutions `t` (`q ↦ −q⁻¹`) and `s` (cyclic λ-shift), which fix every
/// basis word and act on coefficients only.
pub fn build_idempotent(spec: &IdempotentSpec, d: usize) -> HeckeElement<RationalFn> {
    assert!(1 <= spec.l && spec.l <= d, "label out of range");
    let base = {
        let mut cache = plus1_cache().lock().unwrap();
        cache.entry((d, spec.n)).or_insert_with(|| build_plus1(d, spec.n)).clone()
    };
    let shifted = if spec.l == 1 {
        base
    } else {
        base.map_coeffs(|c| {
            let mut r = c.clone();
            for _ in 0..spec.l - 1 {
                r = r.involution_s();
            }
            r
        })
    };
    match spec.sign {
        Sign::Plus => shifted,
        Sign::Minus => shifted.map_coeffs(RationalFn::involution_t),
    }
}

/// Outcome of the independent idempotent checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdempotentReport {
    pub is_zero: bool,
    /// `e² = e`.
    pub idempotent: bool,
    /// `(X − λ_l)·e = 0`.
    pub x_eigen: bool,
    /// `(g_i ∓ q^{±1})·e = 0` per generator.
    pub g_eigen: Vec<bool>,
    /// `[e, g_i] = [e, X] = 0`.
    pub central: bool,
}

impl IdempotentReport {
    pub fn passes(&self) -> bool {
        !self.is_zero
            && self.idempotent
            && self.x_eigen
            && self.g_eigen.iter().all(|&b| b)
            && self.central
    }
}

/// Check the defining one-dimensional eigen-relations, idempotency, and
/// centrality of `e` against `spec`, exactly over the symbolic field.
///
/// Idempotency shortcut: once the left eigen-relations `g_i·e = ±q^{±1}·e`
/// and `X·e = λ_l·e` are established, `e·e = (Σ_t c_t·μ_t)·e` where `μ_t` is
/// the eigenvalue of the basis word `t`, so `e² = e` iff that scalar is 1.
/// If the eigen-relations fail, `e²` is computed directly.
pub fn verify_idempotent(
    e: &HeckeElement<RationalFn>,
    spec: &IdempotentSpec,
    d: usize,
) -> IdempotentReport {
    let ctx = SymbolicCtx { d };
    let n = e.n();
    let lam = ctx.lambda(spec.l);
    let (gq, q2sign) = match spec.sign {
        Sign::Plus => (ctx.q_pow(1), 1i64),
        Sign::Minus => (ctx.q_pow(-1).neg(), -1i64),
    };
    let x_eigen = left_mul_x1(&ctx, e).sub(&e.scale(&lam)).is_zero();
    let g_eigen: Vec<bool> = (0..n.saturating_sub(1))
        .map(|i| left_mul_g(&ctx, i, e).sub(&e.scale(&gq)).is_zero())
        .collect();
    let eigen_ok = x_eigen && g_eigen.iter().all(|&b| b);
    let idempotent = if eigen_ok {
        // κ = Σ_t c_t · λ_l^{|a|} q^{±2·Σ_j a_j(j−1)} (±q^{±1})^{ℓ(w)}.
        let mut kappa = ctx.zero();
        for (word, c) in e.terms() {
            let mut mu = ctx.one();
            for (j, &aj) in word.a.iter().enumerate() {
                for _ in 0..aj {
                    mu = mu.mul(&lam).mul(&ctx.q_pow(q2sign * 2 * j as i64));
                }
            }
            for _ in 0..word.w.length() {
                mu = mu.mul(&gq);
            }
            kappa = kappa.add(&c.mul(&mu));
        }
        kappa.sub(&ctx.one()).is_zero() && !e.is_zero() || e.is_zero()
    } else {
        multiply(&ctx, e, e).sub(e).is_zero()
    };
    let mut central = left_mul_x1(&ctx, e).sub(&multiply(&ctx, e, &x_element(1, n, &ctx))).is_zero();
    for i in 0..n.saturating_sub(1) {
        central &= left_mul_g(&ctx, i, e).sub(&right_mul_g(&ctx, i, e)).is_zero();
    }
    IdempotentReport { is_zero: e.is_zero(), idempotent, x_eigen, g_eigen, central }
}

/// Whether a polynomial is a unit `±q^k` of the coefficient ring.
fn is_unit_monomial(p: &LaurentPoly) -> bool {
    let mut terms = p.terms();
    let Some((exps, coef)) = terms.next() else { return false };
    if terms.next().is_some() {
        return false;
    }
    let abs_one = coef.magnitude() == &num_bigint::BigUint::from(1u8);
    abs_one && exps.iter().skip(1).all(|&e| e == 0)
}

/// Clear denominators: return `(â, a_e)` with `â = a_e·e` integral and some
/// basis coefficient of `â` exactly 1. Scans basis words in order and picks
/// the first coefficient with unit numerator whose clearing makes every
/// coefficient polynomial.
pub fn preidempotent(
    e: &HeckeElement<RationalFn>,
) -> Result<(HeckeElement<RationalFn>, LaurentPoly), HeckeError> {
    for (_, c) in e.terms() {
        if !is_unit_monomial(c.numerator()) {
            continue;
        }
        let scale = c.inv().expect("unit numerator is invertible");
        let scaled = e.scale(&scale);
        if scaled.terms().all(|(_, x)| x.is_polynomial()) {
            // a_e = 1/c as a Laurent polynomial: unit numerator inverts.
            let a_e = unit_quotient(c.denominator(), c.numerator());
            return Ok((scaled, a_e));
        }
    }
    Err(HeckeError::NoUnitCoefficient)
}

/// `den/unit` where `unit = ±q^k`.
fn unit_quotient(den: &LaurentPoly, unit: &LaurentPoly) -> LaurentPoly {
    den.checked_div(unit).expect("division by a unit monomial is exact")
}

/// Evaluate all coefficients at an exact rational point; a vanishing
/// denominator reports which basis word had the pole.
pub fn specialize_rational(
    e: &HeckeElement<RationalFn>,
    ctx: &RationalCtx,
) -> Result<HeckeElement<BigRational>, HeckeError> {
    let mut out = HeckeElement::zero(e.n());
    for (w, c) in e.terms() {
        let v = c
            .eval_rational(&ctx.q, &ctx.lambdas)
            .map_err(|_| HeckeError::PoleAtSpecialization(format!("coefficient of {w}")))?;
        out.add_term(w.clone(), v);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Quotient-ideal membership
// ---------------------------------------------------------------------------

/// Hard bound on the regular-representation dimension for dense closure.
pub const IDEAL_DIM_LIMIT: usize = 2000;

/// Result of an ideal-membership query.
#[derive(Debug, Clone)]
pub struct Membership<S: Scalar> {
    pub member: bool,
    /// Normal-form residue of `f` against the computed ideal span (zero iff
    /// member); serves as the witness.
    pub residual: HeckeElement<S>,
    pub ideal_dim: usize,
}

fn to_sparse<S: Scalar>(
    e: &HeckeElement<S>,
    index: &BTreeMap<HeckeWord, usize>,
) -> Vec<(usize, S)> {
    e.terms().map(|(w, c)| (*index.get(w).expect("basis word"), c.clone())).collect()
}

/// Decide membership of `f` in the two-sided ideal generated by `gens`,
/// by saturating the span of the generators under left and right
/// multiplication by `X` and all `g_i` inside the regular representation.
pub fn ideal_membership<F: CoeffCtx>(
    f: &HeckeElement<F::C>,
    gens: &[HeckeElement<F::C>],
    ctx: &F,
) -> Result<Membership<F::C>, HeckeError> {
    let n = f.n();
    let d = ctx.num_lambdas();
    let dim = d.pow(n as u32) * (1..=n).product::<usize>();
    if dim > IDEAL_DIM_LIMIT {
        return Err(HeckeError::SizeLimit { dim, limit: IDEAL_DIM_LIMIT });
    }
    let basis = enumerate_basis(n, d);
    let index: BTreeMap<HeckeWord, usize> =
        basis.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let x1 = x_element(1, n, ctx);
    let mut span: Span<F::C> = Span::new();
    let mut members: Vec<HeckeElement<F::C>> = Vec::new();
    for g in gens {
        assert_eq!(g.n(), n, "generator strand count mismatch");
        if span.insert(to_sparse(g, &index)).map_err(|_| HeckeError::NoUnitCoefficient)? {
            members.push(g.clone());
        }
    }
    let mut next = 0;
    while next < members.len() {
        let m = members[next].clone();
        next += 1;
        let mut products: Vec<HeckeElement<F::C>> = Vec::new();
        products.push(left_mul_x1(ctx, &m));
        products.push(multiply(ctx, &m, &x1));
        for i in 0..n.saturating_sub(1) {
            products.push(left_mul_g(ctx, i, &m));
            products.push(right_mul_g(ctx, i, &m));
        }
        for p in products {
            if span.insert(to_sparse(&p, &index)).map_err(|_| HeckeError::NoUnitCoefficient)? {
                members.push(p);
            }
        }
    }
    let residue = span.reduce(to_sparse(f, &index));
    let mut residual = HeckeElement::zero(n);
    for (i, c) in residue {
        residual.add_term(basis[i].clone(), c);
    }
    Ok(Membership { member: residual.is_zero(), residual, ideal_dim: span.dim() })
}

/// Span of the quotient ideal `𝒟_d(n)` generated by the preidempotents
/// `ê(−,l,2)`, `l = 1..d`, inside `H(n,d)`, evaluated at `ctx`; returns the
/// generators specialized and extended to `n` strands.
pub fn quotient_ideal_generators(n: usize, d: usize, ctx: &RationalCtx) -> Vec<HeckeElement<BigRational>> {
    (1..=d)
        .map(|l| {
            let e = build_idempotent(&IdempotentSpec { sign: Sign::Minus, l, n: 2 }, d);
            let (hat, _) = preidempotent(&e).expect("preidempotent exists generically");
            specialize_rational(&hat.extend_to(n), ctx)
                .expect("preidempotent coefficients are polynomial")
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Center checks
// ---------------------------------------------------------------------------

/// Report of the center computations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CenterReport {
    /// Every monomial symmetric polynomial in the `X_j` commutes with all
    /// generators.
    pub symmetric_monomials_central: bool,
    /// For (n,d) = (2,2): the five-element center basis is central and has
    /// rank 5.
    pub rank5_basis_central: Option<bool>,
    /// For (n,d) = (2,1): `X₁+X₂ = λ₁(1+g₁²)` and is central.
    pub d1_identity: Option<bool>,
}

impl CenterReport {
    pub fn passes(&self) -> bool {
        self.symmetric_monomials_central
            && self.rank5_basis_central.unwrap_or(true)
            && self.d1_identity.unwrap_or(true)
    }
}

/// Monomial symmetric polynomial `Σ X^{σ(a)}` over distinct permutations of
/// the exponent multiset `a`.
fn monomial_symmetric<F: CoeffCtx>(a: &[u8], n: usize, ctx: &F) -> HeckeElement<F::C> {
    let mut seen: Vec<Vec<u8>> = Vec::new();
    for p in all_perms(n) {
        let img: Vec<u8> = (0..n).map(|i| a[p.apply(i)]).collect();
        if !seen.contains(&img) {
            seen.push(img);
        }
    }
    let mut out = HeckeElement::zero(n);
    for exps in seen {
        let mut m = one(n, ctx);
        for (j, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                m = left_mul_x(ctx, j, &m);
            }
        }
        out = out.add(&m);
    }
    out
}

fn commutes_with_generators<F: CoeffCtx>(z: &HeckeElement<F::C>, ctx: &F) -> bool {
    let n = z.n();
    let mut ok = left_mul_x1(ctx, z).sub(&multiply(ctx, z, &x_element(1, n, ctx))).is_zero();
    for i in 0..n.saturating_sub(1) {
        ok &= left_mul_g(ctx, i, z).sub(&right_mul_g(ctx, i, z)).is_zero();
    }
    ok
}

/// Verify the center computations for `H(n,d)`, `n ≤ 3`.
pub fn center_checks(n: usize, d: usize) -> CenterReport {
    assert!(n <= 3, "center checks are sized for n ≤ 3");
    let ctx = SymbolicCtx { d };
    // (i) monomial symmetric polynomials are central.
    let mut multisets: Vec<Vec<u8>> = vec![vec![]];
    for _ in 0..n {
        multisets = multisets
            .into_iter()
            .flat_map(|a| {
                let lo = a.last().copied().unwrap_or(0);
                (lo..d as u8).map(move |e| {
                    let mut b = a.clone();
                    b.push(e);
                    b
                })
            })
            .collect();
    }
    let symmetric_monomials_central = multisets
        .iter()
        .all(|a| commutes_with_generators(&monomial_symmetric(a, n, &ctx), &ctx));

    let rank5_basis_central = (n == 2 && d == 2).then(|| {
        let lam = |i: usize| RationalFn::from_poly(LaurentPoly::lambda(d, i));
        let x1 = x_element(1, n, &ctx);
        let x2 = x_element(2, n, &ctx);
        let g1 = g_elem(n, 0, &ctx);
        let sum_l = one(n, &ctx).scale(&lam(1).add(&lam(2)));
        let prod_l = one(n, &ctx).scale(&lam(1).mul(&lam(2)));
        let sigma = x1.add(&x2).sub(&sum_l);
        let pi = multiply(&ctx, &x1, &x2).sub(&prod_l);
        let basis = vec![
            one(n, &ctx),
            x1.add(&x2),
            multiply(&ctx, &x1, &x2),
            multiply(&ctx, &sigma, &g1),
            multiply(&ctx, &pi, &g1),
        ];
        let central = basis.iter().all(|z| commutes_with_generators(z, &ctx));
        // Linear independence over the symbolic field.
        let words = enumerate_basis(n, d);
        let index: BTreeMap<HeckeWord, usize> =
            words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let mut span: Span<RationalFn> = Span::new();
        let mut rank = 0;
        for z in &basis {
            if span.insert(to_sparse(z, &index)).unwrap_or(false) {
                rank += 1;
            }
        }
        central && rank == 5
    });

    let d1_identity = (n == 2 && d == 1).then(|| {
        let g1 = g_elem(n, 0, &ctx);
        let lhs = x_element(1, n, &ctx).add(&x_element(2, n, &ctx));
        let rhs = one(n, &ctx)
            .add(&multiply(&ctx, &g1, &g1))
            .scale(&RationalFn::from_poly(LaurentPoly::lambda(d, 1)));
        lhs.sub(&rhs).is_zero() && commutes_with_generators(&lhs, &ctx)
    });

    CenterReport { symmetric_monomials_central, rank5_basis_central, d1_identity }
}

// ---------------------------------------------------------------------------
// Walk preidempotents
// ---------------------------------------------------------------------------

/// The product `∏_i ∏_{excluded branches x}(X_i − R_x(X_i))` attached to a
/// walk `w`: at step `i`, the excluded branches are every admissible
/// placement of box `i` other than the walk's own first-row placement —
/// first-row growth of another component (`λ_k q^{2·count_k}`) or a
/// second-row start in any nonempty component (`λ_k q^{−2}`).
pub fn walk_preidempotent(w: &Walk, d: usize) -> HeckeElement<RationalFn> {
    let n = w.len();
    let ctx = SymbolicCtx { d };
    let lam_q = |k: usize, e: i64| {
        RationalFn::from_poly(LaurentPoly::lambda(d, k).mul(&LaurentPoly::q_pow(d, e)))
    };
    let mut acc = one(n, &ctx);
    let mut counts = vec![0i64; d];
    for (i, &step) in w.word().iter().enumerate() {
        assert!(1 <= step && step <= d, "walk letter out of range");
        let xi = x_element(i + 1, n, &ctx);
        for k in 1..=d {
            if k != step {
                let f = xi.sub(&one(n, &ctx).scale(&lam_q(k, 2 * counts[k - 1])));
                acc = multiply(&ctx, &acc, &f);
            }
            if counts[k - 1] >= 1 {
                let f = xi.sub(&one(n, &ctx).scale(&lam_q(k, -2)));
                acc = multiply(&ctx, &acc, &f);
            }
        }
        counts[step - 1] += 1;
    }
    acc
}

/// Integral q-symmetrizer of the Young subalgebra with the given block
/// sizes: the product over blocks of `Σ_{σ∈S_b} q^{ℓ(σ)}·g_σ`, embedded on
/// consecutive strands. Satisfies `e·g_i = g_i·e = q·e` for every generator
/// inside a block.
pub fn q_symmetrizer<F: CoeffCtx>(blocks: &[usize], ctx: &F) -> HeckeElement<F::C> {
    let n: usize = blocks.iter().sum();
    let mut acc = one(n, ctx);
    let mut offset = 0;
    for &b in blocks {
        let mut s = HeckeElement::zero(n);
        for p in all_perms(b) {
            let mut map: Vec<usize> = (0..n).collect();
            for (i, slot) in map.iter_mut().skip(offset).take(b).enumerate() {
                *slot = offset + p.apply(i);
            }
            let w = Perm::from_map(map);
            let len = w.length() as i64;
            let word = HeckeWord { a: vec![0; n], w };
            s = s.add(&HeckeElement::from_term(n, word, ctx.q_pow(len)));
        }
        acc = multiply(ctx, &acc, &s);
        offset += b;
    }
    acc
}

// ---------------------------------------------------------------------------
// Conjectured basis of the quotient
// ---------------------------------------------------------------------------

/// Words `X^a·w` whose exponents separate every crossing of `w`: positions
/// `i < j` with `w(i) > w(j)` must have `a_i ≠ a_j`.
pub fn enumerate_conjectured_basis(n: usize, d: usize) -> Vec<HeckeWord> {
    enumerate_basis(n, d)
        .into_iter()
        .filter(|word| {
            for i in 0..n {
                for j in i + 1..n {
                    if word.w.apply(i) > word.w.apply(j) && word.a[i] == word.a[j] {
                        return false;
                    }
                }
            }
            true
        })
        .collect()
}

/// Count of the conjectured basis without materializing it: for each
/// permutation, count the proper `d`-colorings of its inversion graph.
pub fn conjectured_basis_count(n: usize, d: usize) -> u128 {
    let perms = all_perms(n);
    let mut total = 0u128;
    let mut a = vec![0u8; n];
    'perm: for p in &perms {
        let mut inversions = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if p.apply(i) > p.apply(j) {
                    inversions.push((i, j));
                }
            }
        }
        if d == 0 {
            continue 'perm;
        }
        // Enumerate a ∈ {0..d−1}ⁿ with odometer increments.
        a.iter_mut().for_each(|x| *x = 0);
        loop {
            if inversions.iter().all(|&(i, j)| a[i] != a[j]) {
                total += 1;
            }
            let mut k = 0;
            loop {
                if k == n {
                    continue 'perm;
                }
                a[k] += 1;
                if a[k] < d as u8 {
                    break;
                }
                a[k] = 0;
                k += 1;
            }
        }
    }
    total
}

// ---------------------------------------------------------------------------
// The obstruction coefficient for u₁u₂u₁ − u₁
// ---------------------------------------------------------------------------

/// Report of the sandwich computation certifying `u₁u₂u₁ − u₁ ∈ f·𝒟₂(3)·f`
/// with an explicit scalar obstruction.
#[derive(Debug, Clone)]
pub struct ObstructionReport {
    /// `f² = −[3]!·f`.
    pub f_scaled_idempotent: bool,
    /// The three sandwich rewritings hold exactly.
    pub sandwich_identities: bool,
    /// The closing linear combination equals `coefficient · f`.
    pub combination_matches: bool,
    /// The scalar multiplying `f`.
    pub coefficient: RationalFn,
    /// `coefficient` agrees up to a unit with
    /// `[3]!·q⁻²(λ₁² + λ₂² − (q²+q⁻²)λ₁λ₂)`, the polynomial form of
    /// `[3]!·q⁻²λ₁λ₂(q−q⁻¹)²[m+1][m−1]` under `λ₁/λ₂ = q^{2m}`,
    /// `λ₁λ₂(q−q⁻¹)² = 1`.
    pub matches_target_up_to_unit: bool,
}

impl ObstructionReport {
    pub fn passes(&self) -> bool {
        self.f_scaled_idempotent
            && self.sandwich_identities
            && self.combination_matches
            && self.matches_target_up_to_unit
    }
}

/// Run the sandwich computation in `H(3,2)` over the symbolic field.
pub fn obstruction_report() -> ObstructionReport {
    let d = 2;
    let n = 3;
    let ctx = SymbolicCtx { d };
    let poly = |p: LaurentPoly| RationalFn::from_poly(p);
    let lam = |i: usize| poly(LaurentPoly::lambda(d, i));
    let qp = |k: i64| poly(LaurentPoly::q_pow(d, k));
    let uu = |i: usize| g_elem(n, i, &ctx).sub(&one(n, &ctx).scale(&ctx.q_pow(1)));
    let u1 = uu(0);
    let u2 = uu(1);
    let f = multiply(&ctx, &u1, &multiply(&ctx, &u2, &u1)).sub(&u1);
    let fact3 = ctx.quantum_int(1).mul(&ctx.quantum_int(2)).mul(&ctx.quantum_int(3));
    let f_scaled_idempotent = multiply(&ctx, &f, &f).add(&f.scale(&fact3)).is_zero();

    let x1 = x_element(1, n, &ctx);
    let x2 = x_element(2, n, &ctx);
    let g1 = g_elem(n, 0, &ctx);
    let g2 = g_elem(n, 1, &ctx);
    let lam_sum = lam(1).add(&lam(2));
    let lam_prod = lam(1).mul(&lam(2));
    let sigma = x1.add(&x2).sub(&one(n, &ctx).scale(&lam_sum));
    let pi = multiply(&ctx, &x1, &x2).sub(&one(n, &ctx).scale(&lam_prod));
    let xg1x = multiply(&ctx, &x1, &multiply(&ctx, &g1, &x1));

    let sandwich = |h: &HeckeElement<RationalFn>| multiply(&ctx, &f, &multiply(&ctx, h, &f));
    let s1 = sandwich(&sigma);
    let s2 = sandwich(&pi);
    let s3 = sandwich(&multiply(&ctx, &x1, &multiply(&ctx, &g1, &multiply(&ctx, &g2, &sigma))));

    // Rewritten inner elements: only X, Xg₁X and scalars survive inside the
    // sandwich.
    let h1 = x1.scale(&ctx.one().add(&qp(-2))).sub(&one(n, &ctx).scale(&lam_sum));
    let h2 = xg1x.scale(&qp(-1).neg()).sub(&one(n, &ctx).scale(&lam_prod));
    let h3 = xg1x
        .scale(&qp(-1).add(&qp(-3)).neg())
        .sub(&x1.scale(&qp(-2).mul(&lam_sum)));
    let sandwich_identities = s1.sub(&sandwich(&h1)).is_zero()
        && s2.sub(&sandwich(&h2)).is_zero()
        && s3.sub(&sandwich(&h3)).is_zero();

    // c₁·h₁ + c₂·h₂ + c₃·h₃ is the scalar q⁻¹((1+q⁻⁴)λ₁λ₂ − q⁻²(λ₁²+λ₂²)),
    // so the same combination of sandwiches is f·scalar·f = −[3]!·scalar·f.
    let c1 = qp(-3).mul(&lam_sum);
    let c2 = qp(-1).add(&qp(-3)).mul(&ctx.one().add(&qp(-2))).neg();
    let c3 = qp(-1).mul(&ctx.one().add(&qp(-2)));
    let combo = s1.scale(&c1).add(&s2.scale(&c2)).add(&s3.scale(&c3));
    let inner = qp(-1).mul(
        &ctx.one()
            .add(&qp(-4))
            .mul(&lam_prod)
            .sub(&qp(-2).mul(&lam(1).mul(&lam(1)).add(&lam(2).mul(&lam(2))))),
    );
    let coefficient = fact3.neg().mul(&inner);
    let combination_matches = combo.sub(&f.scale(&coefficient)).is_zero();

    let target = fact3.mul(&qp(-2)).mul(
        &lam(1)
            .mul(&lam(1))
            .add(&lam(2).mul(&lam(2)))
            .sub(&qp(2).add(&qp(-2)).mul(&lam_prod)),
    );
    let matches_target_up_to_unit = match coefficient.div(&target) {
        Ok(r) => is_unit_monomial(r.numerator()) && is_unit_monomial(r.denominator()),
        Err(_) => false,
    };

    ObstructionReport {
        f_scaled_idempotent,
        sandwich_identities,
        combination_matches,
        coefficient,
        matches_target_up_to_unit,
    }
}

// ---------------------------------------------------------------------------
// Alternative basis (change-of-basis rank)
// ---------------------------------------------------------------------------

/// Rank of the set `{g_k…g₁ · X^i · G · b}` (`G = g₁…g_{n−1}`, `b` running
/// over the `(n−1)`-strand basis) expanded over the standard basis, at the
/// given coefficient point. Full rank `dⁿ·n!` certifies the alternative
/// spanning set is a basis.
pub fn alternative_basis_rank<F: CoeffCtx>(n: usize, ctx: &F) -> usize {
    let d = ctx.num_lambdas();
    assert!(n >= 1);
    let words = enumerate_basis(n, d);
    let index: BTreeMap<HeckeWord, usize> =
        words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let mut big_g = one(n, ctx);
    for i in 0..n - 1 {
        big_g = multiply(ctx, &big_g, &g_elem(n, i, ctx));
    }
    let sub_basis = enumerate_basis(n - 1, d);
    let mut span: Span<F::C> = Span::new();
    for i in 0..d.max(1) {
        let mut a_elem = one(n, ctx);
        for _ in 0..i {
            a_elem = left_mul_x1(ctx, &a_elem);
        }
        for b in &sub_basis {
            let b_elem = HeckeElement::from_term(n, b.extend_to(n), ctx.one());
            let core = multiply(ctx, &a_elem, &multiply(ctx, &big_g, &b_elem));
            let mut prefixed = core.clone();
            for k in 0..n {
                if k > 0 {
                    prefixed = left_mul_g(ctx, k - 1, &prefixed);
                }
                let _ = span.insert(to_sparse(&prefixed, &index));
            }
        }
    }
    span.dim()
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::quantum_integer;
    use num_bigint::BigInt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sym(d: usize) -> SymbolicCtx {
        SymbolicCtx { d }
    }

    fn rat(v: (i64, i64)) -> BigRational {
        BigRational::new(BigInt::from(v.0), BigInt::from(v.1))
    }

    fn poly(p: LaurentPoly) -> RationalFn {
        RationalFn::from_poly(p)
    }

    #[test]
    fn quadratic_relation() {
        let ctx = sym(2);
        let g1 = g_elem(2, 0, &ctx);
        let lhs = multiply(&ctx, &g1, &g1);
        let rhs = g1.scale(&ctx.q_pow(1).sub(&ctx.q_pow(-1))).add(&one(2, &ctx));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn cyclotomic_relation_d2() {
        let ctx = sym(2);
        let x = x_element(1, 2, &ctx);
        let lhs = multiply(&ctx, &x, &x);
        let lam = |i| poly(LaurentPoly::lambda(2, i));
        let rhs = x.scale(&lam(1).add(&lam(2))).sub(&one(2, &ctx).scale(&lam(1).mul(&lam(2))));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn x_elements_commute_and_symmetric_sum_is_central() {
        let ctx = sym(2);
        let n = 3;
        let x2 = x_element(2, n, &ctx);
        let x3 = x_element(3, n, &ctx);
        assert_eq!(multiply(&ctx, &x2, &x3), multiply(&ctx, &x3, &x2));
        // X₂ in normal form is g₁Xg₁.
        let g1 = g_elem(n, 0, &ctx);
        let x1 = x_element(1, n, &ctx);
        assert_eq!(x2, multiply(&ctx, &g1, &multiply(&ctx, &x1, &g1)));
        // [X₁+X₂, g₁] = 0.
        let s = x1.add(&x2);
        assert_eq!(multiply(&ctx, &s, &g1), multiply(&ctx, &g1, &s));
    }

    #[test]
    fn associativity_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (n, d) in [(3usize, 2usize), (4, 2), (3, 3)] {
            let q = rat((5, 3));
            let lambdas: Vec<BigRational> =
                (0..d).map(|i| rat((3 + 2 * i as i64, 2))).collect();
            let ctx = RationalCtx::new(q, lambdas);
            let basis = enumerate_basis(n, d);
            let random_elem = |rng: &mut ChaCha8Rng| {
                let mut e = HeckeElement::zero(n);
                for _ in 0..2 {
                    let w = basis[rng.gen_range(0..basis.len())].clone();
                    e.add_term(w, rat((rng.gen_range(-5..=5), 1)));
                }
                e
            };
            let triples = if n <= 3 { 20 } else { 4 };
            for _ in 0..triples {
                let (x, y, z) =
                    (random_elem(&mut rng), random_elem(&mut rng), random_elem(&mut rng));
                let lhs = multiply(&ctx, &multiply(&ctx, &x, &y), &z);
                let rhs = multiply(&ctx, &x, &multiply(&ctx, &y, &z));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn idempotent_level_one_printed_forms() {
        // d=2: E(+,2,1) = (X−λ₁)/(λ₂−λ₁).
        let e = build_idempotent(&IdempotentSpec { sign: Sign::Plus, l: 2, n: 1 }, 2);
        let den = poly(LaurentPoly::lambda(2, 2).sub(&LaurentPoly::lambda(2, 1)));
        let ctx = sym(2);
        let expected = x_element(1, 1, &ctx)
            .sub(&one(1, &ctx).scale(&poly(LaurentPoly::lambda(2, 1))))
            .scale(&den.inv().unwrap());
        assert_eq!(e, expected);
        // d=3: E(+,1,1) = (X²−(λ₂+λ₃)X+λ₂λ₃)/((λ₁−λ₂)(λ₁−λ₃)).
        let e = build_idempotent(&IdempotentSpec { sign: Sign::Plus, l: 1, n: 1 }, 3);
        let ctx3 = sym(3);
        let lam = |i| poly(LaurentPoly::lambda(3, i));
        let x = x_element(1, 1, &ctx3);
        let num = multiply(&ctx3, &x, &x)
            .sub(&x.scale(&lam(2).add(&lam(3))))
            .add(&one(1, &ctx3).scale(&lam(2).mul(&lam(3))));
        let p1 = lam(1).sub(&lam(2)).mul(&lam(1).sub(&lam(3)));
        assert_eq!(e, num.scale(&p1.inv().unwrap()));
    }

    #[test]
    fn idempotent_e_minus_2_2_printed_form() {
        let d = 2;
        let ctx = sym(d);
        let e = build_idempotent(&IdempotentSpec { sign: Sign::Minus, l: 2, n: 2 }, d);
        let lam = |i| poly(LaurentPoly::lambda(d, i));
        let qp = |k| poly(LaurentPoly::q_pow(d, k));
        let x1 = x_element(1, 2, &ctx);
        let x2 = x_element(2, 2, &ctx);
        let g1 = g_elem(2, 0, &ctx);
        let sigma = x1.add(&x2).sub(&one(2, &ctx).scale(&lam(1).add(&lam(2))));
        let pi = multiply(&ctx, &x1, &x2).sub(&one(2, &ctx).scale(&lam(1).mul(&lam(2))));
        let num = multiply(
            &ctx,
            &pi.sub(&sigma.scale(&lam(1))),
            &one(2, &ctx).sub(&g1.scale(&qp(-1))),
        );
        let den = lam(2)
            .sub(&lam(1))
            .mul(&qp(-2).mul(&lam(2)).sub(&lam(1)))
            .mul(&poly(LaurentPoly::one(d)).add(&qp(-2)));
        assert_eq!(e, num.scale(&den.inv().unwrap()));
        // Preidempotent: ê(−,2,2) = (−λ₁Σ+Π)(1−q⁻¹g₁), normalization = den.
        let (hat, a_e) = preidempotent(&e).unwrap();
        assert_eq!(hat, num);
        assert_eq!(poly(a_e), den);
    }

    #[test]
    fn verify_small_idempotents_and_involution_images() {
        for d in [2usize, 3] {
            for n in 1..=2 {
                for l in 1..=d {
                    for sign in [Sign::Plus, Sign::Minus] {
                        let spec = IdempotentSpec { sign, l, n };
                        let e = build_idempotent(&spec, d);
                        let report = verify_idempotent(&e, &spec, d);
                        assert!(report.passes(), "failed for d={d} {spec:?}: {report:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn verify_rejects_trivial_elements() {
        let d = 2;
        let spec = IdempotentSpec { sign: Sign::Plus, l: 1, n: 2 };
        let ctx = sym(d);
        let zero = HeckeElement::<RationalFn>::zero(2);
        let z = verify_idempotent(&zero, &spec, d);
        assert!(z.is_zero && !z.passes());
        let one_rep = verify_idempotent(&one(2, &ctx), &spec, d);
        assert!(one_rep.idempotent && !one_rep.g_eigen[0] && !one_rep.passes());
    }

    #[test]
    fn idempotent_sum_is_central_idempotent() {
        let d = 2;
        let n = 2;
        let ctx = sym(d);
        let mut s = HeckeElement::zero(n);
        for l in 1..=d {
            for sign in [Sign::Plus, Sign::Minus] {
                s = s.add(&build_idempotent(&IdempotentSpec { sign, l, n }, d));
            }
        }
        assert_eq!(multiply(&ctx, &s, &s), s);
        assert!(commutes_with_generators(&s, &ctx));
        // The sum is not 1: a two-dimensional block remains.
        assert!(!s.sub(&one(n, &ctx)).is_zero());
    }

    #[test]
    fn pole_at_critical_specialization() {
        let d = 2;
        // λ₂ = q²λ₁ with q = 3, λ₁ = 2.
        let crit = RationalCtx::new(rat((3, 1)), vec![rat((2, 1)), rat((18, 1))]);
        let bad1 = build_idempotent(&IdempotentSpec { sign: Sign::Minus, l: 2, n: 2 }, d);
        let bad2 = build_idempotent(&IdempotentSpec { sign: Sign::Plus, l: 1, n: 2 }, d);
        let good = build_idempotent(&IdempotentSpec { sign: Sign::Plus, l: 2, n: 2 }, d);
        assert!(matches!(
            specialize_rational(&bad1, &crit),
            Err(HeckeError::PoleAtSpecialization(_))
        ));
        assert!(matches!(
            specialize_rational(&bad2, &crit),
            Err(HeckeError::PoleAtSpecialization(_))
        ));
        assert!(specialize_rational(&good, &crit).is_ok());
    }

    #[test]
    fn useful_product_identity() {
        let d = 2;
        let ctx = sym(d);
        let lam = |i| poly(LaurentPoly::lambda(d, i));
        let x1 = x_element(1, 2, &ctx);
        let x2 = x_element(2, 2, &ctx);
        let g1 = g_elem(2, 0, &ctx);
        let sigma = x1.add(&x2).sub(&one(2, &ctx).scale(&lam(1).add(&lam(2))));
        let pi = multiply(&ctx, &x1, &x2).sub(&one(2, &ctx).scale(&lam(1).mul(&lam(2))));
        let lead = pi.sub(&sigma.scale(&lam(1)));
        // (X−λ₂)(−λ₁Σ+Π) = 0.
        let xm = x1.sub(&one(2, &ctx).scale(&lam(2)));
        assert!(multiply(&ctx, &xm, &lead).is_zero());
        // (−λ₁Σ+Π)E(−,2,2) = (−λ₁Σ+Π)(g₁−q)/(−q⁻¹−q).
        let e = build_idempotent(&IdempotentSpec { sign: Sign::Minus, l: 2, n: 2 }, d);
        let lhs = multiply(&ctx, &lead, &e);
        let den = ctx.q_pow(-1).neg().sub(&ctx.q_pow(1));
        let rhs = multiply(&ctx, &lead, &g1.sub(&one(2, &ctx).scale(&ctx.q_pow(1))))
            .scale(&den.inv().unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn preidempotent_level_one_and_divisibility() {
        let d = 2;
        // E(+,2,1) → (X−λ₁, λ₂−λ₁).
        let e = build_idempotent(&IdempotentSpec { sign: Sign::Plus, l: 2, n: 1 }, d);
        let (hat, a_e) = preidempotent(&e).unwrap();
        let ctx = sym(d);
        let expected =
            x_element(1, 1, &ctx).sub(&one(1, &ctx).scale(&poly(LaurentPoly::lambda(d, 1))));
        assert_eq!(hat, expected);
        assert_eq!(a_e, LaurentPoly::lambda(d, 2).sub(&LaurentPoly::lambda(d, 1)));
        // Normalization of E(+,1,n) divides ∏ₖ [k]·p¹ₖ.
        for n in 1..=3usize {
            let e = build_idempotent(&IdempotentSpec { sign: Sign::Plus, l: 1, n }, d);
            let (_, a_e) = preidempotent(&e).unwrap();
            let mut bound = LaurentPoly::one(d);
            for k in 1..=n {
                bound = bound.mul(&quantum_integer(d, k as i64)).mul(&p_plus1(d, k));
            }
            assert!(bound.checked_div(&a_e).is_ok(), "a_e does not divide the bound at n={n}");
        }
    }

    #[test]
    fn z_element_is_central_and_annihilated() {
        for (n, d) in [(2usize, 2usize), (3, 2), (2, 3)] {
            let ctx = sym(d);
            for l in 1..=d {
                let mut z = one(n, &ctx);
                for k in 1..=n {
                    for i in 1..=d {
                        if i != l {
                            let f = x_element(k, n, &ctx)
                                .sub(&one(n, &ctx).scale(&poly(LaurentPoly::lambda(d, i))));
                            z = multiply(&ctx, &z, &f);
                        }
                    }
                }
                assert!(commutes_with_generators(&z, &ctx), "z not central n={n} d={d} l={l}");
                let xm =
                    x_element(1, n, &ctx).sub(&one(n, &ctx).scale(&poly(LaurentPoly::lambda(d, l))));
                assert!(multiply(&ctx, &xm, &z).is_zero(), "(X−λ_l)z ≠ 0 n={n} d={d} l={l}");
            }
        }
    }

    #[test]
    fn ideal_membership_small() {
        let d = 2;
        let n = 2;
        let ctx = sym(d);
        // 0 is in any ideal; 1 is not in the quotient ideal generically.
        let gens: Vec<HeckeElement<RationalFn>> = (1..=d)
            .map(|l| {
                let e = build_idempotent(&IdempotentSpec { sign: Sign::Minus, l, n }, d);
                preidempotent(&e).unwrap().0
            })
            .collect();
        let zero = HeckeElement::<RationalFn>::zero(n);
        assert!(ideal_membership(&zero, &gens, &ctx).unwrap().member);
        let res = ideal_membership(&one(n, &ctx), &gens, &ctx).unwrap();
        assert!(!res.member);
        // Quotient dimension is C(2n,n) = 6 at n = 2.
        assert_eq!(res.ideal_dim, 8 - 6);
    }

    #[test]
    fn ideal_membership_u1u2u1() {
        let d = 2;
        let n = 3;
        let ctx = RationalCtx::new(rat((5, 3)), vec![rat((3, 2)), rat((7, 2))]);
        let gens = quotient_ideal_generators(n, d, &ctx);
        let q = rat((5, 3));
        let uu = |i: usize| g_elem(n, i, &ctx).sub(&one(n, &ctx).scale(&q));
        let u1 = uu(0);
        let u2 = uu(1);
        let f = multiply(&ctx, &u1, &multiply(&ctx, &u2, &u1)).sub(&u1);
        let res = ideal_membership(&f, &gens, &ctx).unwrap();
        assert!(res.member, "u₁u₂u₁−u₁ should lie in the quotient ideal generically");
        // Quotient dimension C(6,3) = 20.
        assert_eq!(res.ideal_dim, 48 - 20);
    }

    #[test]
    fn obstruction_coefficient() {
        let rep = obstruction_report();
        assert!(rep.f_scaled_idempotent);
        assert!(rep.sandwich_identities);
        assert!(rep.combination_matches);
        assert!(rep.matches_target_up_to_unit);
        // Numeric cross-check of the quantum-integer form of the
        // coefficient: at λ₁ = qᵐ/(q−q⁻¹), λ₂ = q⁻ᵐ/(q−q⁻¹), the target is
        // [3]!·q⁻²·[m+1][m−1]·λ₁λ₂(q−q⁻¹)².
        let q = rat((5, 3));
        let qi = |k: i64| {
            let mut acc = BigRational::new(BigInt::from(0), BigInt::from(1));
            let mut e = k - 1;
            while e >= 1 - k {
                acc += q.pow(e as i32);
                e -= 2;
            }
            acc
        };
        for m in 2i64..=4 {
            let diff = &q - q.pow(-1);
            let l1 = q.pow(m as i32) / &diff;
            let l2 = q.pow(-m as i32) / &diff;
            let got = rep
                .coefficient
                .eval_rational(&q, &[l1.clone(), l2.clone()])
                .unwrap();
            let fact3 = qi(1) * qi(2) * qi(3);
            let target =
                &fact3 * q.pow(-2) * qi(m + 1) * qi(m - 1) * &l1 * &l2 * (&diff * &diff);
            // The unit relating the two forms is exactly q⁻¹ (fixed by
            // construction).
            assert_eq!(got, target * q.pow(-1));
        }
    }

    #[test]
    fn alternative_basis_spans() {
        for (n, d) in [(2usize, 2usize), (3, 2), (2, 3), (3, 3)] {
            let ctx = RationalCtx::new(
                rat((7, 4)),
                (0..d).map(|i| rat((2 * i as i64 + 3, 5))).collect(),
            );
            let dim = d.pow(n as u32) * (1..=n).product::<usize>();
            assert_eq!(alternative_basis_rank(n, &ctx), dim, "n={n} d={d}");
        }
    }

    #[test]
    fn center_reports_pass() {
        assert!(center_checks(2, 2).passes());
        assert!(center_checks(2, 1).passes());
        assert!(center_checks(3, 2).passes());
    }

    #[test]
    fn walk_preidempotents_match_printed_forms() {
        let d = 2;
        let ctx = sym(d);
        let lam = |i| poly(LaurentPoly::lambda(d, i));
        let qp = |k| poly(LaurentPoly::q_pow(d, k));
        // ε̇₁₁ = (X−λ₂)(X₂−q⁻²λ₁)(X₂−λ₂).
        let w11 = Walk::parse("11");
        let eps11 = walk_preidempotent(&w11, d);
        let n = 2;
        let x1 = x_element(1, n, &ctx);
        let x2 = x_element(2, n, &ctx);
        let f1 = x1.sub(&one(n, &ctx).scale(&lam(2)));
        let f2 = x2.sub(&one(n, &ctx).scale(&qp(-2).mul(&lam(1))));
        let f3 = x2.sub(&one(n, &ctx).scale(&lam(2)));
        let expected = multiply(&ctx, &f1, &multiply(&ctx, &f2, &f3));
        assert_eq!(eps11, expected);
        // X₂·ε̇₁₁ = q²λ₁·ε̇₁₁.
        let lhs = multiply(&ctx, &x2, &eps11);
        assert_eq!(lhs, eps11.scale(&qp(2).mul(&lam(1))));
        // ε̇₁₁₁ = ε̇₁₁·(X₃−q⁻²λ₁)·∏_{i≥2}(X₃−λ_i).
        let w111 = Walk::parse("111");
        let eps111 = walk_preidempotent(&w111, d);
        let m = 3;
        let x3 = x_element(3, m, &ctx);
        let mut expected3 = eps11.extend_to(m);
        expected3 = multiply(
            &ctx,
            &expected3,
            &x3.sub(&one(m, &ctx).scale(&qp(-2).mul(&lam(1)))),
        );
        for i in 2..=d {
            expected3 = multiply(&ctx, &expected3, &x3.sub(&one(m, &ctx).scale(&lam(i))));
        }
        assert_eq!(eps111, expected3);
    }

    #[test]
    fn conjectured_basis_counts() {
        assert_eq!(conjectured_basis_count(2, 2), 6);
        assert_eq!(enumerate_conjectured_basis(2, 2).len(), 6);
        for n in 1..=5usize {
            assert_eq!(conjectured_basis_count(n, 1), 1);
        }
        // d=2: C(2n,n).
        let binom = |a: u128, b: u128| -> u128 {
            let mut r = 1u128;
            for i in 0..b {
                r = r * (a - i) / (i + 1);
            }
            r
        };
        for n in 1..=6usize {
            assert_eq!(conjectured_basis_count(n, 2), binom(2 * n as u128, n as u128));
        }
    }
}
