//! Exact arithmetic in the ground ring `𝒜 = ℤ[q, q⁻¹, λ₁, …, λ_d]`, its
//! fraction field `𝒦`, and specialized cyclotomic fields `k`.
//!
//! All arithmetic here is exact: integer coefficients are arbitrary
//! precision, rational functions are normalized by multivariate gcd
//! removal, and root-of-unity specializations are realized as arithmetic
//! in `ℚ[q]/Φ_l(q)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Errors produced by ring arithmetic and specialization.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RingError {
    /// A quotient was requested that does not exist in the ring.
    #[error("inexact division: divisor does not divide dividend in the Laurent polynomial ring")]
    InexactDivision,
    /// A rational function was built with denominator zero, or a field
    /// inverse of zero was requested.
    #[error("zero denominator")]
    ZeroDenominator,
    /// A rational function's denominator vanishes under the requested
    /// specialization, so its image is undefined.
    #[error("denominator vanishes at the specialization point")]
    PoleAtSpecialization,
    /// The specialization violates the standing non-degeneracy assumptions
    /// (some λ_i ↦ 0, or two λ's collide, or an unsupported order for q).
    #[error("inadmissible specialization: {0}")]
    InadmissibleSpecialization(String),
}

// ---------------------------------------------------------------------------
// LaurentPoly
// ---------------------------------------------------------------------------

/// An element of `ℤ[q, q⁻¹, λ₁, …, λ_d]`.
///
/// Exponent vectors have length `d + 1`; slot 0 is the (possibly negative)
/// exponent of `q`, slots `1..=d` are the (non-negative) exponents of the
/// deformation parameters `λ_1, …, λ_d`. No zero coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    d: usize,
    terms: BTreeMap<Vec<i64>, BigInt>,
}

impl LaurentPoly {
    /// The zero polynomial in `d` λ-variables.
    pub fn zero(d: usize) -> Self {
        LaurentPoly { d, terms: BTreeMap::new() }
    }

    /// The unit polynomial.
    pub fn one(d: usize) -> Self {
        Self::from_int(d, 1)
    }

    /// An integer constant.
    pub fn from_int(d: usize, n: i64) -> Self {
        Self::from_bigint(d, BigInt::from(n))
    }

    /// An integer constant from a `BigInt`.
    pub fn from_bigint(d: usize, n: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !n.is_zero() {
            terms.insert(vec![0; d + 1], n);
        }
        LaurentPoly { d, terms }
    }

    /// The monomial `q^k`.
    pub fn q_pow(d: usize, k: i64) -> Self {
        let mut exps = vec![0; d + 1];
        exps[0] = k;
        Self::monomial(d, exps, BigInt::one())
    }

    /// The variable `λ_i` (1-based, `1 ≤ i ≤ d`).
    pub fn lambda(d: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= d, "lambda index {i} out of range for d={d}");
        let mut exps = vec![0; d + 1];
        exps[i] = 1;
        Self::monomial(d, exps, BigInt::one())
    }

    /// A single monomial `c · q^{e₀} λ₁^{e₁} ⋯ λ_d^{e_d}`.
    pub fn monomial(d: usize, exps: Vec<i64>, coeff: BigInt) -> Self {
        assert_eq!(exps.len(), d + 1, "exponent vector length must be d+1");
        assert!(exps[1..].iter().all(|&e| e >= 0), "λ exponents must be non-negative");
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exps, coeff);
        }
        LaurentPoly { d, terms }
    }

    /// The number of λ-variables.
    pub fn num_lambdas(&self) -> usize {
        self.d
    }

    /// Whether this is the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Whether this is the unit polynomial.
    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().map_or(false, |(e, c)| {
                e.iter().all(|&x| x == 0) && c.is_one()
            })
    }

    /// Iterate over `(exponent-vector, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &BigInt)> {
        self.terms.iter()
    }

    /// Number of stored terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    fn insert_term(terms: &mut BTreeMap<Vec<i64>, BigInt>, exps: Vec<i64>, coeff: BigInt) {
        use std::collections::btree_map::Entry;
        if coeff.is_zero() {
            return;
        }
        match terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn assert_same_d(&self, other: &Self) {
        assert_eq!(self.d, other.d, "operands must share the same number of λ-variables");
    }

    /// Sum.
    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_d(other);
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            Self::insert_term(&mut terms, e.clone(), c.clone());
        }
        LaurentPoly { d: self.d, terms }
    }

    /// Difference.
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        LaurentPoly {
            d: self.d,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    /// Product.
    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_d(other);
        let mut terms = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<i64> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                Self::insert_term(&mut terms, exps, ca * cb);
            }
        }
        LaurentPoly { d: self.d, terms }
    }

    /// Scale by an integer.
    pub fn scale(&self, n: &BigInt) -> Self {
        if n.is_zero() {
            return Self::zero(self.d);
        }
        LaurentPoly {
            d: self.d,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * n)).collect(),
        }
    }

    /// `self^k` for `k ≥ 0`.
    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.d);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Minimum exponent of `q` over all terms (0 for the zero polynomial).
    pub fn min_q_exp(&self) -> i64 {
        self.terms.keys().map(|e| e[0]).min().unwrap_or(0)
    }

    /// Multiply by `q^k`.
    pub fn shift_q(&self, k: i64) -> Self {
        LaurentPoly {
            d: self.d,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e[0] += k;
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Leading term under lexicographic order on `(e_q, e₁, …, e_d)`.
    fn leading(&self) -> Option<(&Vec<i64>, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// Sign of the lexicographically leading coefficient (0 for zero).
    pub fn leading_sign(&self) -> i32 {
        match self.leading() {
            None => 0,
            Some((_, c)) => {
                if c.is_negative() {
                    -1
                } else {
                    1
                }
            }
        }
    }

    /// Exact division; errors with [`RingError::InexactDivision`] if `other`
    /// does not divide `self` in the Laurent polynomial ring, and
    /// [`RingError::ZeroDenominator`] if `other` is zero.
    pub fn checked_div(&self, other: &Self) -> Result<Self, RingError> {
        self.assert_same_d(other);
        if other.is_zero() {
            return Err(RingError::ZeroDenominator);
        }
        if self.is_zero() {
            return Ok(Self::zero(self.d));
        }
        // Reduce to ordinary polynomial division by clearing q-denominators:
        // a/b = q^{sa−sb} · (q^{−sa}a)/(q^{−sb}b).
        let sa = self.min_q_exp();
        let sb = other.min_q_exp();
        let a = self.shift_q(-sa);
        let b = other.shift_q(-sb);
        let q = Self::poly_div_exact(&a, &b)?;
        Ok(q.shift_q(sa - sb))
    }

    /// Exact division of polynomials with all exponents ≥ 0, by repeated
    /// lexicographic leading-term elimination. If the division is exact this
    /// always succeeds; any stuck state proves inexactness.
    fn poly_div_exact(a: &Self, b: &Self) -> Result<Self, RingError> {
        let d = a.d;
        let mut rem = a.clone();
        let mut quot = Self::zero(d);
        let (lb_e, lb_c) = b.leading().expect("divisor nonzero");
        while !rem.is_zero() {
            let (lr_e, lr_c) = rem.leading().unwrap();
            let mut te = Vec::with_capacity(d + 1);
            for (x, y) in lr_e.iter().zip(lb_e) {
                let e = x - y;
                if e < 0 {
                    return Err(RingError::InexactDivision);
                }
                te.push(e);
            }
            let (tc, tr) = num_integer::Integer::div_rem(lr_c, lb_c);
            if !tr.is_zero() {
                return Err(RingError::InexactDivision);
            }
            let t = Self::monomial(d, te, tc);
            rem = rem.sub(&t.mul(b));
            quot = quot.add(&t);
        }
        Ok(quot)
    }

    /// Degree in variable `var` (0 = q, `1..=d` = λ's); 0 for the zero poly.
    fn degree_in(&self, var: usize) -> i64 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    /// Integer content (gcd of all coefficients, non-negative).
    pub fn int_content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = num_integer::Integer::gcd(&g, c);
        }
        g
    }

    /// Divide out the integer content and a `±q^k` unit so the result has
    /// minimum q-exponent 0 and positive leading coefficient. Returns zero
    /// for zero.
    pub fn primitive_normal(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.int_content();
        let mut p = LaurentPoly {
            d: self.d,
            terms: self.terms.iter().map(|(e, co)| (e.clone(), co / &c)).collect(),
        };
        p = p.shift_q(-p.min_q_exp());
        if p.leading_sign() < 0 {
            p = p.neg();
        }
        p
    }

    /// Greatest common divisor, normalized via [`Self::primitive_normal`]
    /// (gcd in a Laurent ring is defined up to the units `±q^k`; the result
    /// is primitive, i.e. integer content is not included).
    pub fn gcd(&self, other: &Self) -> Self {
        self.assert_same_d(other);
        if self.is_zero() {
            return other.primitive_normal();
        }
        if other.is_zero() {
            return self.primitive_normal();
        }
        if self.terms.len() == 1 {
            return Self::monomial_gcd(self, other);
        }
        if other.terms.len() == 1 {
            return Self::monomial_gcd(other, self);
        }
        let a = self.shift_q(-self.min_q_exp());
        let b = other.shift_q(-other.min_q_exp());
        if a == b {
            return a.primitive_normal();
        }
        Self::poly_gcd(&a, &b).primitive_normal()
    }

    /// Primitive gcd when `m` is a single monomial: the `q`-unit drops out
    /// and each λ-exponent is the minimum over `m` and all terms of `p`.
    fn monomial_gcd(m: &Self, p: &Self) -> Self {
        let me = m.terms.keys().next().expect("monomial operand nonzero");
        let mut out = vec![0i64; m.d + 1];
        for i in 1..=m.d {
            let pmin = p.terms.keys().map(|e| e[i]).min().unwrap_or(0);
            out[i] = me[i].min(pmin);
        }
        Self::monomial(m.d, out, BigInt::one())
    }

    /// Multivariate gcd of polynomials with all exponents ≥ 0 via the
    /// primitive pseudo-remainder sequence.
    fn poly_gcd(a: &Self, b: &Self) -> Self {
        let d = a.d;
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        // Main variable: the highest-index variable appearing in either.
        let var = (0..=d).rev().find(|&v| a.degree_in(v) > 0 || b.degree_in(v) > 0);
        let var = match var {
            None => {
                // Both are integer constants.
                let g = num_integer::Integer::gcd(
                    a.terms.values().next().unwrap(),
                    b.terms.values().next().unwrap(),
                );
                return Self::from_bigint(d, g);
            }
            Some(v) => v,
        };
        let ca = a.poly_content(var);
        let cb = b.poly_content(var);
        let g = Self::poly_gcd(&ca, &cb);
        let mut u = Self::poly_div_exact(a, &ca).expect("content divides");
        let mut v = Self::poly_div_exact(b, &cb).expect("content divides");
        if u.degree_in(var) < v.degree_in(var) {
            std::mem::swap(&mut u, &mut v);
        }
        loop {
            let r = Self::pseudo_rem(&u, &v, var);
            if r.is_zero() {
                break;
            }
            let rc = r.poly_content(var);
            u = v;
            v = Self::poly_div_exact(&r, &rc).expect("content divides");
        }
        let vc = v.poly_content(var);
        let vp = Self::poly_div_exact(&v, &vc).expect("content divides");
        g.mul(&vp)
    }

    /// Content of `self` viewed as a univariate polynomial in `var`: the gcd
    /// of its coefficient polynomials.
    fn poly_content(&self, var: usize) -> Self {
        let mut acc = Self::zero(self.d);
        for c in self.coeffs_in(var) {
            if !c.is_zero() {
                acc = if acc.is_zero() { c } else { Self::poly_gcd(&acc, &c) };
            }
        }
        acc
    }

    /// Coefficient polynomials of `self` in `var`, from degree 0 upward.
    fn coeffs_in(&self, var: usize) -> Vec<Self> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![Self::zero(self.d); deg + 1];
        for (e, c) in &self.terms {
            let k = e[var] as usize;
            let mut e2 = e.clone();
            e2[var] = 0;
            Self::insert_term(&mut out[k].terms, e2, c.clone());
        }
        out
    }

    fn from_coeffs_in(d: usize, var: usize, coeffs: &[Self]) -> Self {
        let mut terms = BTreeMap::new();
        for (k, c) in coeffs.iter().enumerate() {
            for (e, co) in &c.terms {
                let mut e2 = e.clone();
                e2[var] += k as i64;
                Self::insert_term(&mut terms, e2, co.clone());
            }
        }
        LaurentPoly { d, terms }
    }

    /// Pseudo-remainder of `u` by `v` in variable `var`
    /// (`lc(v)^{deg u − deg v + 1} · u ≡ prem mod v`).
    fn pseudo_rem(u: &Self, v: &Self, var: usize) -> Self {
        let d = u.d;
        let mut uc = u.coeffs_in(var);
        let vc = v.coeffs_in(var);
        let dv = vc.len() - 1;
        let lv = vc.last().unwrap().clone();
        loop {
            while uc.last().map_or(false, |c| c.is_zero()) {
                uc.pop();
            }
            if uc.len() <= dv {
                break;
            }
            let du = uc.len() - 1;
            let lead = uc.pop().unwrap();
            // u ← lc(v)·u − lead·x^{du−dv}·v  (degree du term cancels)
            for c in uc.iter_mut() {
                *c = c.mul(&lv);
            }
            for j in 0..dv {
                let idx = du - dv + j;
                uc[idx] = uc[idx].sub(&lead.mul(&vc[j]));
            }
        }
        Self::from_coeffs_in(d, var, &uc)
    }

    /// Apply the bar involution `t`: `q ↦ −q⁻¹` (so `q^k ↦ (−1)^k q^{−k}`);
    /// λ-variables are fixed.
    pub fn involution_t(&self) -> Self {
        LaurentPoly {
            d: self.d,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = e.clone();
                    e2[0] = -e[0];
                    let c2 = if e[0].rem_euclid(2) == 1 { -c } else { c.clone() };
                    (e2, c2)
                })
                .collect(),
        }
    }

    /// Apply the cyclic shift `s`: `λ_i ↦ λ_{i+1}` (indices mod d); `q` fixed.
    pub fn involution_s(&self) -> Self {
        if self.d == 0 {
            return self.clone();
        }
        LaurentPoly {
            d: self.d,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = e.clone();
                    for i in 1..=self.d {
                        let j = if i == self.d { 1 } else { i + 1 };
                        e2[j] = e[i];
                    }
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    /// Evaluate at exact rational values `q ↦ qv`, `λ_i ↦ lv[i−1]`.
    /// Errors with [`RingError::ZeroDenominator`] if `qv = 0` and a negative
    /// q-power occurs.
    pub fn eval_rational(&self, qv: &BigRational, lv: &[BigRational]) -> Result<BigRational, RingError> {
        assert_eq!(lv.len(), self.d);
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = BigRational::from(c.clone());
            t *= rat_pow(qv, e[0])?;
            for i in 1..=self.d {
                t *= rat_pow(&lv[i - 1], e[i])?;
            }
            acc += t;
        }
        Ok(acc)
    }
}

fn rat_pow(base: &BigRational, e: i64) -> Result<BigRational, RingError> {
    if e == 0 {
        return Ok(BigRational::one());
    }
    if num_traits::Zero::is_zero(base) {
        if e < 0 {
            return Err(RingError::ZeroDenominator);
        }
        return Ok(BigRational::zero());
    }
    let mut acc = BigRational::one();
    for _ in 0..e.abs() {
        acc *= base;
    }
    if e < 0 {
        acc = acc.recip();
    }
    Ok(acc)
}

/// The balanced quantum integer `[n] = q^{n−1} + q^{n−3} + ⋯ + q^{1−n}`
/// as an element of `ℤ[q, q⁻¹, λ₁…λ_d]`; `[0] = 0` and `[−n] = −[n]`.
pub fn quantum_integer(d: usize, n: i64) -> LaurentPoly {
    let a = n.abs();
    let mut p = LaurentPoly::zero(d);
    let mut k = a - 1;
    while k >= 1 - a {
        p = p.add(&LaurentPoly::q_pow(d, k));
        k -= 2;
    }
    if n < 0 {
        p = p.neg();
    }
    p
}

impl fmt::Display for LaurentPoly {
    /// Renders like `q^2*l1 - q^-2*l2`; terms in descending lexicographic
    /// order on `(e_q, e₁, …)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut parts: Vec<String> = Vec::new();
            if e[0] == 1 {
                parts.push("q".into());
            } else if e[0] != 0 {
                parts.push(format!("q^{}", e[0]));
            }
            for i in 1..=self.d {
                if e[i] == 1 {
                    parts.push(format!("l{i}"));
                } else if e[i] != 0 {
                    parts.push(format!("l{i}^{}", e[i]));
                }
            }
            if parts.is_empty() || !mag.is_one() {
                parts.insert(0, mag.to_string());
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// RationalFn
// ---------------------------------------------------------------------------

/// An element of the fraction field `𝒦` of `ℤ[q, q⁻¹, λ₁, …, λ_d]`,
/// stored as a normalized numerator/denominator pair.
///
/// Normalization: the multivariate gcd is divided out, the denominator is
/// scaled by a `±q^k` unit so its minimum q-exponent is 0 and its
/// lexicographically leading coefficient is positive, and the integer
/// content common to numerator and denominator is removed. This makes
/// equality a derived structural comparison.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalFn {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RationalFn {
    /// Build `num/den`, normalizing; errors if `den = 0`.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, RingError> {
        num.assert_same_d(&den);
        if den.is_zero() {
            return Err(RingError::ZeroDenominator);
        }
        if num.is_zero() {
            let d = num.num_lambdas();
            return Ok(RationalFn { num: LaurentPoly::zero(d), den: LaurentPoly::one(d) });
        }
        let g = num.gcd(&den);
        let mut num = num.checked_div(&g).expect("gcd divides");
        let mut den = den.checked_div(&g).expect("gcd divides");
        // Remove the residual ±q^k unit ambiguity via the denominator.
        let k = den.min_q_exp();
        den = den.shift_q(-k);
        num = num.shift_q(-k);
        if den.leading_sign() < 0 {
            den = den.neg();
            num = num.neg();
        }
        Ok(RationalFn { num, den })
    }

    /// Embed a polynomial.
    pub fn from_poly(p: LaurentPoly) -> Self {
        let d = p.num_lambdas();
        RationalFn { num: p, den: LaurentPoly::one(d) }
    }

    /// Zero in `d` λ-variables.
    pub fn zero(d: usize) -> Self {
        Self::from_poly(LaurentPoly::zero(d))
    }

    /// One in `d` λ-variables.
    pub fn one(d: usize) -> Self {
        Self::from_poly(LaurentPoly::one(d))
    }

    /// An integer constant.
    pub fn from_int(d: usize, n: i64) -> Self {
        Self::from_poly(LaurentPoly::from_int(d, n))
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn num_lambdas(&self) -> usize {
        self.num.num_lambdas()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// Whether this is a polynomial (denominator 1 after normalization).
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn add(&self, other: &Self) -> Self {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        Self::new(num, den).expect("denominator product nonzero")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFn { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("denominator product nonzero")
    }

    /// Field division; errors if `other = 0`.
    pub fn div(&self, other: &Self) -> Result<Self, RingError> {
        if other.is_zero() {
            return Err(RingError::ZeroDenominator);
        }
        Self::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self) -> Result<Self, RingError> {
        Self::one(self.num_lambdas()).div(self)
    }

    /// `self^k` for any integer `k` (negative powers require `self ≠ 0`).
    pub fn pow(&self, k: i64) -> Result<Self, RingError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one(self.num_lambdas());
        for _ in 0..k.abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Apply the bar involution `t: q ↦ −q⁻¹` componentwise.
    pub fn involution_t(&self) -> Self {
        Self::new(self.num.involution_t(), self.den.involution_t()).expect("unit image")
    }

    /// Apply the cyclic λ-shift `s` componentwise.
    pub fn involution_s(&self) -> Self {
        Self::new(self.num.involution_s(), self.den.involution_s()).expect("unit image")
    }

    /// Evaluate at exact rational values of `q` and the λ's; errors if the
    /// denominator vanishes there.
    pub fn eval_rational(&self, qv: &BigRational, lv: &[BigRational]) -> Result<BigRational, RingError> {
        let dv = self.den.eval_rational(qv, lv)?;
        if num_traits::Zero::is_zero(&dv) {
            return Err(RingError::PoleAtSpecialization);
        }
        Ok(self.num.eval_rational(qv, lv)? / dv)
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

// ---------------------------------------------------------------------------
// Dense ℚ[x] helpers (used by CycloNumber)
// ---------------------------------------------------------------------------

/// Dense polynomial over ℚ: `coeffs[i]` is the coefficient of `x^i`.
/// Always trimmed (no trailing zeros); the zero polynomial is the empty vec.
pub(crate) type QPoly = Vec<BigRational>;

pub(crate) fn qp_trim(mut p: QPoly) -> QPoly {
    while p.last().map_or(false, |c| num_traits::Zero::is_zero(c)) {
        p.pop();
    }
    p
}

pub(crate) fn qp_zero() -> QPoly {
    Vec::new()
}

pub(crate) fn qp_const(c: BigRational) -> QPoly {
    qp_trim(vec![c])
}

pub(crate) fn qp_x_pow(k: usize) -> QPoly {
    let mut p = vec![BigRational::zero(); k + 1];
    p[k] = BigRational::one();
    p
}

pub(crate) fn qp_add(a: &QPoly, b: &QPoly) -> QPoly {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    qp_trim(out)
}

pub(crate) fn qp_neg(a: &QPoly) -> QPoly {
    a.iter().map(|c| -c).collect()
}

pub(crate) fn qp_sub(a: &QPoly, b: &QPoly) -> QPoly {
    qp_add(a, &qp_neg(b))
}

pub(crate) fn qp_mul(a: &QPoly, b: &QPoly) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return qp_zero();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if num_traits::Zero::is_zero(ca) {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            out[i + j] += ca * cb;
        }
    }
    qp_trim(out)
}

/// Division with remainder over ℚ; panics if `b` is zero.
pub(crate) fn qp_divrem(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut rem = a.clone();
    let db = b.len() - 1;
    let lb = b.last().unwrap().clone();
    if rem.len() <= db {
        return (qp_zero(), qp_trim(rem));
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    while rem.len() > db && !rem.is_empty() {
        let dr = rem.len() - 1;
        let c = rem.last().unwrap() / &lb;
        quot[dr - db] = c.clone();
        for j in 0..=db {
            let v = &b[j] * &c;
            rem[dr - db + j] -= v;
        }
        rem = qp_trim(rem);
        if rem.len() <= db {
            break;
        }
    }
    (qp_trim(quot), qp_trim(rem))
}

/// Monic gcd over ℚ.
pub(crate) fn qp_gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let (mut u, mut v) = (a.clone(), b.clone());
    while !v.is_empty() {
        let (_, r) = qp_divrem(&u, &v);
        u = v;
        v = r;
    }
    qp_monic(&u)
}

pub(crate) fn qp_monic(a: &QPoly) -> QPoly {
    match a.last() {
        None => qp_zero(),
        Some(l) => {
            let l = l.clone();
            a.iter().map(|c| c / &l).collect()
        }
    }
}

/// Extended Euclid: returns `(g, s, t)` with `g = s·a + t·b`, `g` monic.
pub(crate) fn qp_ext_gcd(a: &QPoly, b: &QPoly) -> (QPoly, QPoly, QPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (qp_const(BigRational::one()), qp_zero());
    let (mut t0, mut t1) = (qp_zero(), qp_const(BigRational::one()));
    while !r1.is_empty() {
        let (q, r) = qp_divrem(&r0, &r1);
        let s = qp_sub(&s0, &qp_mul(&q, &s1));
        let t = qp_sub(&t0, &qp_mul(&q, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    if r0.is_empty() {
        return (qp_zero(), qp_zero(), qp_zero());
    }
    let l = r0.last().unwrap().clone();
    let scale = |p: &QPoly| -> QPoly { p.iter().map(|c| c / &l).collect() };
    (scale(&r0), scale(&s0), scale(&t0))
}

/// The `l`-th cyclotomic polynomial `Φ_l(x)` over ℚ, computed recursively
/// via `x^l − 1 = ∏_{d|l} Φ_d(x)`.
pub fn cyclotomic_poly(l: u32) -> Vec<BigRational> {
    assert!(l >= 1);
    let mut num: QPoly = qp_sub(&qp_x_pow(l as usize), &qp_const(BigRational::one()));
    for d in 1..l {
        if l % d == 0 {
            let phi_d = cyclotomic_poly(d);
            let (q, r) = qp_divrem(&num, &phi_d);
            debug_assert!(r.is_empty(), "cyclotomic division must be exact");
            num = q;
        }
    }
    num
}

// ---------------------------------------------------------------------------
// CycloNumber
// ---------------------------------------------------------------------------

/// An element of the specialized field `k`: `ℚ(q)` when `l = 0`, or
/// `ℚ[q]/Φ_l(q)` (the `l`-th cyclotomic field) when `l ≥ 2`.
///
/// For `l = 0` the pair `num/den` is a normalized rational function in `q`
/// (monic denominator, gcd removed); for `l ≥ 2` the denominator is always 1
/// and `num` is reduced modulo `Φ_l`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycloNumber {
    l: u32,
    num: QPoly,
    den: QPoly,
}

impl CycloNumber {
    /// Zero in the field of order-`l` arithmetic (`l = 0` means generic q).
    pub fn zero(l: u32) -> Self {
        CycloNumber { l, num: qp_zero(), den: qp_const(BigRational::one()) }
    }

    /// One.
    pub fn one(l: u32) -> Self {
        Self::from_rational(l, BigRational::one())
    }

    /// A rational constant.
    pub fn from_rational(l: u32, c: BigRational) -> Self {
        CycloNumber { l, num: qp_const(c), den: qp_const(BigRational::one()) }
    }

    /// An integer constant.
    pub fn from_int(l: u32, n: i64) -> Self {
        Self::from_rational(l, BigRational::from(BigInt::from(n)))
    }

    /// The image of `q^k` (any integer `k`).
    pub fn q_pow(l: u32, k: i64) -> Self {
        if l == 0 {
            if k >= 0 {
                CycloNumber { l, num: qp_x_pow(k as usize), den: qp_const(BigRational::one()) }
            } else {
                CycloNumber { l, num: qp_const(BigRational::one()), den: qp_x_pow((-k) as usize) }
            }
        } else {
            let k = k.rem_euclid(l as i64) as usize;
            let phi = cyclotomic_poly(l);
            let (_, r) = qp_divrem(&qp_x_pow(k), &phi);
            CycloNumber { l, num: r, den: qp_const(BigRational::one()) }
        }
    }

    /// The order parameter (0 = generic q).
    pub fn order(&self) -> u32 {
        self.l
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    fn assert_same_l(&self, other: &Self) {
        assert_eq!(self.l, other.l, "operands must live in the same field");
    }

    fn normalize(l: u32, num: QPoly, den: QPoly) -> Result<Self, RingError> {
        if l == 0 {
            if den.is_empty() {
                return Err(RingError::ZeroDenominator);
            }
            if num.is_empty() {
                return Ok(Self::zero(0));
            }
            let g = qp_gcd(&num, &den);
            let (num, _) = qp_divrem(&num, &g);
            let (den, _) = qp_divrem(&den, &g);
            let lead = den.last().unwrap().clone();
            let num = num.iter().map(|c| c / &lead).collect();
            let den = den.iter().map(|c| c / &lead).collect();
            Ok(CycloNumber { l: 0, num, den })
        } else {
            let phi = cyclotomic_poly(l);
            let (_, nr) = qp_divrem(&num, &phi);
            let (_, dr) = qp_divrem(&den, &phi);
            if dr.is_empty() {
                return Err(RingError::ZeroDenominator);
            }
            // Invert the denominator modulo Φ_l (a field since Φ_l is
            // irreducible over ℚ).
            let (g, s, _) = qp_ext_gcd(&dr, &phi);
            debug_assert_eq!(g.len(), 1, "Φ_l is irreducible, nonzero residues are units");
            let (_, num) = qp_divrem(&qp_mul(&nr, &s), &phi);
            Ok(CycloNumber { l, num, den: qp_const(BigRational::one()) })
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_l(other);
        let num = qp_add(&qp_mul(&self.num, &other.den), &qp_mul(&other.num, &self.den));
        let den = qp_mul(&self.den, &other.den);
        Self::normalize(self.l, num, den).expect("nonzero denominators")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        CycloNumber { l: self.l, num: qp_neg(&self.num), den: self.den.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_l(other);
        Self::normalize(self.l, qp_mul(&self.num, &other.num), qp_mul(&self.den, &other.den))
            .expect("nonzero denominators")
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self) -> Result<Self, RingError> {
        if self.is_zero() {
            return Err(RingError::ZeroDenominator);
        }
        Self::normalize(self.l, self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self, RingError> {
        Ok(self.mul(&other.inv()?))
    }

    /// `self^k` for any integer `k` (negative powers require `self ≠ 0`).
    pub fn pow(&self, k: i64) -> Result<Self, RingError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one(self.l);
        for _ in 0..k.abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Coefficient list of the numerator (constant term first).
    pub fn numerator_coeffs(&self) -> &[BigRational] {
        &self.num
    }

    /// Coefficient list of the denominator (constant term first).
    pub fn denominator_coeffs(&self) -> &[BigRational] {
        &self.den
    }
}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let render = |p: &QPoly| -> String {
            if p.is_empty() {
                return "0".into();
            }
            let mut parts = Vec::new();
            for (i, c) in p.iter().enumerate().rev() {
                if num_traits::Zero::is_zero(c) {
                    continue;
                }
                let var = match i {
                    0 => String::new(),
                    1 => "q".into(),
                    _ => format!("q^{i}"),
                };
                let s = if var.is_empty() {
                    format!("{c}")
                } else if c.is_one() {
                    var
                } else if (-c).is_one() {
                    format!("-{var}")
                } else {
                    format!("{c}*{var}")
                };
                parts.push(s);
            }
            parts.join(" + ").replace("+ -", "- ")
        };
        if self.den == qp_const(BigRational::one()) {
            write!(f, "{}", render(&self.num))
        } else {
            write!(f, "({}) / ({})", render(&self.num), render(&self.den))
        }
    }
}

// ---------------------------------------------------------------------------
// Specialization
// ---------------------------------------------------------------------------

/// A specialization of the ground ring: `q` becomes generic (`l = 0`) or a
/// primitive `l`-th root of unity (`l ≥ 2`, arithmetic in `ℚ[q]/Φ_l`), and
/// each `λ_i ↦ r_i · q^{c_i}` with `r_i ∈ ℚ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Specialization {
    d: usize,
    l: u32,
    lambda: Vec<(BigRational, i64)>,
}

impl Specialization {
    /// Build and validate. Rejects `l = 1`, any `λ_i ↦ 0`, and any collision
    /// `λ_i = λ_j` (i ≠ j) in the target field.
    pub fn new(l: u32, lambda: Vec<(BigRational, i64)>) -> Result<Self, RingError> {
        if l == 1 {
            return Err(RingError::InadmissibleSpecialization(
                "l = 1 (q = 1) is not supported; use l = 0 for generic q".into(),
            ));
        }
        let d = lambda.len();
        for (i, (r, _)) in lambda.iter().enumerate() {
            if num_traits::Zero::is_zero(r) {
                return Err(RingError::InadmissibleSpecialization(format!(
                    "λ_{} ↦ 0 is degenerate",
                    i + 1
                )));
            }
        }
        let spec = Specialization { d, l, lambda };
        for i in 1..=d {
            for j in (i + 1)..=d {
                if spec.lambda_value(i).sub(&spec.lambda_value(j)).is_zero() {
                    return Err(RingError::InadmissibleSpecialization(format!(
                        "λ_{i} and λ_{j} collide in the target field"
                    )));
                }
            }
        }
        Ok(spec)
    }

    /// Generic specialization for `d` parameters: `l = 0`, `λ_i ↦ q^{2(i−1)}`
    /// scaled by distinct rationals is unnecessary since distinct q-powers
    /// already separate; we use `λ_i ↦ i` (distinct rational constants).
    pub fn generic(d: usize) -> Self {
        let lambda = (1..=d)
            .map(|i| (BigRational::from(BigInt::from(i as i64)), 0))
            .collect();
        Self::new(0, lambda).expect("distinct constants are admissible")
    }

    pub fn num_lambdas(&self) -> usize {
        self.d
    }

    /// The order of `q` (0 = generic).
    pub fn order(&self) -> u32 {
        self.l
    }

    /// The assignment pair `(r_i, c_i)` for `λ_i` (1-based).
    pub fn lambda_assignment(&self, i: usize) -> &(BigRational, i64) {
        &self.lambda[i - 1]
    }

    /// The field element `λ_i` maps to.
    pub fn lambda_value(&self, i: usize) -> CycloNumber {
        let (r, c) = &self.lambda[i - 1];
        CycloNumber::from_rational(self.l, r.clone()).mul(&CycloNumber::q_pow(self.l, *c))
    }

    /// Image of a Laurent polynomial in the field `k`.
    pub fn apply(&self, x: &LaurentPoly) -> CycloNumber {
        assert_eq!(x.num_lambdas(), self.d, "specialization arity mismatch");
        let mut acc = CycloNumber::zero(self.l);
        for (e, c) in x.terms() {
            let mut qexp = e[0];
            let mut r = BigRational::from(c.clone());
            for i in 1..=self.d {
                let (ri, ci) = &self.lambda[i - 1];
                for _ in 0..e[i] {
                    r *= ri;
                }
                qexp += ci * e[i];
            }
            let t = CycloNumber::from_rational(self.l, r).mul(&CycloNumber::q_pow(self.l, qexp));
            acc = acc.add(&t);
        }
        acc
    }

    /// Image of a rational function; errors with
    /// [`RingError::PoleAtSpecialization`] if the denominator vanishes.
    pub fn apply_rational(&self, x: &RationalFn) -> Result<CycloNumber, RingError> {
        let den = self.apply(x.denominator());
        if den.is_zero() {
            return Err(RingError::PoleAtSpecialization);
        }
        self.apply(x.numerator()).div(&den)
    }
}

/// Whether `x` specializes to zero under `k`.
pub fn vanishes_under(x: &LaurentPoly, k: &Specialization) -> bool {
    k.apply(x).is_zero()
}

// ---------------------------------------------------------------------------
// Scalar trait and coefficient contexts
// ---------------------------------------------------------------------------

/// A field-like coefficient type for generic linear algebra and generic
/// representation checks. All operations are value-based and exact (the
/// floating-point instance approximates zero with a tolerance).
pub trait Scalar: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; errors on (approximate) zero.
    fn inv(&self) -> Result<Self, RingError>;
}

impl Scalar for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Result<Self, RingError> {
        if Zero::is_zero(self) {
            return Err(RingError::ZeroDenominator);
        }
        Ok(self.recip())
    }
}

impl Scalar for RationalFn {
    fn zero_like(&self) -> Self {
        RationalFn::zero(self.num_lambdas())
    }
    fn one_like(&self) -> Self {
        RationalFn::one(self.num_lambdas())
    }
    fn is_zero(&self) -> bool {
        RationalFn::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        RationalFn::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        RationalFn::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        RationalFn::mul(self, other)
    }
    fn neg(&self) -> Self {
        RationalFn::neg(self)
    }
    fn inv(&self) -> Result<Self, RingError> {
        RationalFn::inv(self)
    }
}

impl Scalar for CycloNumber {
    fn zero_like(&self) -> Self {
        CycloNumber::zero(self.l)
    }
    fn one_like(&self) -> Self {
        CycloNumber::one(self.l)
    }
    fn is_zero(&self) -> bool {
        CycloNumber::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        CycloNumber::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        CycloNumber::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        CycloNumber::mul(self, other)
    }
    fn neg(&self) -> Self {
        CycloNumber::neg(self)
    }
    fn inv(&self) -> Result<Self, RingError> {
        CycloNumber::inv(self)
    }
}

/// The prime `2⁶⁴ − 2³² + 1`. Its multiplicative group has order
/// `2³² · 3 · 5 · 17 · 257 · 641 · 65537 · 6700417`, so it contains
/// primitive `2l`-th roots of unity for every small `l` of interest.
pub const FP_PRIME: u64 = 0xffff_ffff_0000_0001;

/// A fixed generator of the multiplicative group of `𝔽_p`, `p = FP_PRIME`.
pub const FP_GENERATOR: u64 = 7;

/// An element of the prime field `𝔽_p`, `p = FP_PRIME`. Used for fast,
/// one-sided rank certificates: the rank of an integral matrix can only
/// drop under reduction mod `p`, so full rank mod `p` proves full rank in
/// characteristic zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fp(pub u64);

impl Fp {
    pub fn new(x: u64) -> Self {
        Fp(x % FP_PRIME)
    }

    pub fn from_i64(x: i64) -> Self {
        Fp((x as i128).rem_euclid(FP_PRIME as i128) as u64)
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = Scalar::mul(&acc, &base);
            }
            base = Scalar::mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// A primitive `k`-th root of unity, if `k` divides `p − 1`.
    pub fn root_of_unity(k: u64) -> Option<Self> {
        if k == 0 || (FP_PRIME - 1) % k != 0 {
            return None;
        }
        Some(Fp(FP_GENERATOR).pow((FP_PRIME - 1) / k))
    }
}

impl Scalar for Fp {
    fn zero_like(&self) -> Self {
        Fp(0)
    }
    fn one_like(&self) -> Self {
        Fp(1)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, other: &Self) -> Self {
        Fp(((self.0 as u128 + other.0 as u128) % FP_PRIME as u128) as u64)
    }
    fn sub(&self, other: &Self) -> Self {
        Fp(((self.0 as u128 + (FP_PRIME - other.0) as u128) % FP_PRIME as u128) as u64)
    }
    fn mul(&self, other: &Self) -> Self {
        Fp(((self.0 as u128 * other.0 as u128) % FP_PRIME as u128) as u64)
    }
    fn neg(&self) -> Self {
        Fp(if self.0 == 0 { 0 } else { FP_PRIME - self.0 })
    }
    fn inv(&self) -> Result<Self, RingError> {
        if self.0 == 0 {
            return Err(RingError::ZeroDenominator);
        }
        Ok(self.pow(FP_PRIME - 2))
    }
}

/// Coefficient context over `𝔽_p` with a chosen image for `q` (and no
/// `λ`s): the reduction target for modular rank certificates.
#[derive(Debug, Clone)]
pub struct FpCtx {
    pub q: Fp,
}

impl CoeffCtx for FpCtx {
    type C = Fp;
    fn num_lambdas(&self) -> usize {
        0
    }
    fn zero(&self) -> Fp {
        Fp(0)
    }
    fn one(&self) -> Fp {
        Fp(1)
    }
    fn from_int(&self, n: i64) -> Fp {
        Fp::from_i64(n)
    }
    fn q_pow(&self, k: i64) -> Fp {
        if k >= 0 {
            self.q.pow(k as u64)
        } else {
            self.q.pow((-k) as u64).inv().expect("q nonzero")
        }
    }
    fn lambda(&self, _i: usize) -> Fp {
        panic!("FpCtx carries no λ parameters")
    }
}

/// Complex floating-point scalar with an approximate zero test, for the
/// numeric representation backend.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct C64(pub num_complex::Complex64);

/// Tolerance for the approximate zero test on [`C64`].
pub const C64_EPS: f64 = 1e-12;

impl Scalar for C64 {
    fn zero_like(&self) -> Self {
        C64(num_complex::Complex64::new(0.0, 0.0))
    }
    fn one_like(&self) -> Self {
        C64(num_complex::Complex64::new(1.0, 0.0))
    }
    fn is_zero(&self) -> bool {
        self.0.norm() < C64_EPS
    }
    fn add(&self, other: &Self) -> Self {
        C64(self.0 + other.0)
    }
    fn sub(&self, other: &Self) -> Self {
        C64(self.0 - other.0)
    }
    fn mul(&self, other: &Self) -> Self {
        C64(self.0 * other.0)
    }
    fn neg(&self) -> Self {
        C64(-self.0)
    }
    fn inv(&self) -> Result<Self, RingError> {
        if Scalar::is_zero(self) {
            return Err(RingError::ZeroDenominator);
        }
        Ok(C64(self.0.inv()))
    }
}

/// A coefficient context: provides the distinguished ring constants
/// (`q^{±1}`, `λ_i`, integers) in some concrete [`Scalar`] type, so the
/// rewriting and diagram engines can run symbolically, at a cyclotomic
/// specialization, or at exact rational parameter values from one code path.
pub trait CoeffCtx: Sync {
    type C: Scalar;
    fn num_lambdas(&self) -> usize;
    fn zero(&self) -> Self::C;
    fn one(&self) -> Self::C;
    fn from_int(&self, n: i64) -> Self::C;
    fn q_pow(&self, k: i64) -> Self::C;
    /// `λ_i`, 1-based.
    fn lambda(&self, i: usize) -> Self::C;
    /// Balanced quantum integer `[n]` in this context.
    fn quantum_int(&self, n: i64) -> Self::C {
        let a = n.abs();
        let mut acc = self.zero();
        let mut k = a - 1;
        while k >= 1 - a {
            acc = acc.add(&self.q_pow(k));
            k -= 2;
        }
        if n < 0 {
            acc = acc.neg();
        }
        acc
    }
}

/// Fully symbolic context: coefficients in the fraction field `𝒦`.
#[derive(Debug, Clone)]
pub struct SymbolicCtx {
    pub d: usize,
}

impl CoeffCtx for SymbolicCtx {
    type C = RationalFn;
    fn num_lambdas(&self) -> usize {
        self.d
    }
    fn zero(&self) -> RationalFn {
        RationalFn::zero(self.d)
    }
    fn one(&self) -> RationalFn {
        RationalFn::one(self.d)
    }
    fn from_int(&self, n: i64) -> RationalFn {
        RationalFn::from_int(self.d, n)
    }
    fn q_pow(&self, k: i64) -> RationalFn {
        RationalFn::from_poly(LaurentPoly::q_pow(self.d, k))
    }
    fn lambda(&self, i: usize) -> RationalFn {
        RationalFn::from_poly(LaurentPoly::lambda(self.d, i))
    }
}

/// Specialized context: coefficients in the cyclotomic field `k`.
#[derive(Debug, Clone)]
pub struct SpecCtx {
    pub spec: Specialization,
}

impl CoeffCtx for SpecCtx {
    type C = CycloNumber;
    fn num_lambdas(&self) -> usize {
        self.spec.num_lambdas()
    }
    fn zero(&self) -> CycloNumber {
        CycloNumber::zero(self.spec.order())
    }
    fn one(&self) -> CycloNumber {
        CycloNumber::one(self.spec.order())
    }
    fn from_int(&self, n: i64) -> CycloNumber {
        CycloNumber::from_int(self.spec.order(), n)
    }
    fn q_pow(&self, k: i64) -> CycloNumber {
        CycloNumber::q_pow(self.spec.order(), k)
    }
    fn lambda(&self, i: usize) -> CycloNumber {
        self.spec.lambda_value(i)
    }
}

/// Exact-rational context: `q` and every `λ_i` take concrete rational
/// values. Used for fast randomized identity checks.
#[derive(Debug, Clone)]
pub struct RationalCtx {
    pub q: BigRational,
    pub lambdas: Vec<BigRational>,
}

impl RationalCtx {
    pub fn new(q: BigRational, lambdas: Vec<BigRational>) -> Self {
        assert!(!num_traits::Zero::is_zero(&q), "q must be invertible");
        RationalCtx { q, lambdas }
    }
}

impl CoeffCtx for RationalCtx {
    type C = BigRational;
    fn num_lambdas(&self) -> usize {
        self.lambdas.len()
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_int(&self, n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }
    fn q_pow(&self, k: i64) -> BigRational {
        rat_pow(&self.q, k).expect("q nonzero")
    }
    fn lambda(&self, i: usize) -> BigRational {
        self.lambdas[i - 1].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn q(d: usize, k: i64) -> LaurentPoly {
        LaurentPoly::q_pow(d, k)
    }

    fn lam(d: usize, i: usize) -> LaurentPoly {
        LaurentPoly::lambda(d, i)
    }

    #[test]
    fn difference_of_squares() {
        // (q + q⁻¹)(q − q⁻¹) = q² − q⁻²
        let a = q(0, 1).add(&q(0, -1));
        let b = q(0, 1).sub(&q(0, -1));
        assert_eq!(a.mul(&b), q(0, 2).sub(&q(0, -2)));
    }

    #[test]
    fn exact_division_identity_case() {
        let d = 2;
        let x = lam(d, 1).sub(&lam(d, 2));
        assert_eq!(x.checked_div(&x).unwrap(), LaurentPoly::one(d));
    }

    #[test]
    fn exact_division_forced_factorization() {
        // (λ₁² − λ₂²) / (λ₁ − λ₂) = λ₁ + λ₂
        let d = 2;
        let num = lam(d, 1).pow(2).sub(&lam(d, 2).pow(2));
        let den = lam(d, 1).sub(&lam(d, 2));
        assert_eq!(num.checked_div(&den).unwrap(), lam(d, 1).add(&lam(d, 2)));
    }

    #[test]
    fn inexact_division_detected() {
        let d = 1;
        let num = lam(d, 1).add(&LaurentPoly::one(d));
        let den = lam(d, 1).sub(&LaurentPoly::one(d));
        assert_eq!(num.checked_div(&den), Err(RingError::InexactDivision));
        assert_eq!(
            num.checked_div(&LaurentPoly::zero(d)),
            Err(RingError::ZeroDenominator)
        );
    }

    #[test]
    fn quantum_integer_basics() {
        assert_eq!(quantum_integer(0, 0), LaurentPoly::zero(0));
        assert_eq!(quantum_integer(0, 1), LaurentPoly::one(0));
        assert_eq!(quantum_integer(0, 2), q(0, 1).add(&q(0, -1)));
    }

    #[test]
    fn quantum_integer_telescopes() {
        // [n](q − q⁻¹) = qⁿ − q⁻ⁿ for 0 ≤ n ≤ 50
        let qm = q(0, 1).sub(&q(0, -1));
        for n in 0..=50 {
            assert_eq!(
                quantum_integer(0, n).mul(&qm),
                q(0, n).sub(&q(0, -n)),
                "failed at n={n}"
            );
        }
    }

    fn random_poly(rng: &mut impl Rng, d: usize) -> LaurentPoly {
        let nterms = rng.gen_range(0..5);
        let mut p = LaurentPoly::zero(d);
        for _ in 0..nterms {
            let mut e = vec![0i64; d + 1];
            e[0] = rng.gen_range(-3..=3);
            for x in e[1..].iter_mut() {
                *x = rng.gen_range(0..=2);
            }
            let c = rng.gen_range(-5..=5);
            p = p.add(&LaurentPoly::monomial(d, e, BigInt::from(c)));
        }
        p
    }

    #[test]
    fn ring_axioms_randomized() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let d = rng.gen_range(0..=2);
            let a = random_poly(&mut rng, d);
            let b = random_poly(&mut rng, d);
            let c = random_poly(&mut rng, d);
            assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            assert_eq!(a.mul(&b), b.mul(&a));
            assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }
    }

    #[test]
    fn gcd_and_rational_fn_normalization() {
        let d = 2;
        // (λ₁² − λ₂²)/(λ₁ − λ₂) normalizes to (λ₁ + λ₂)/1.
        let num = lam(d, 1).pow(2).sub(&lam(d, 2).pow(2));
        let den = lam(d, 1).sub(&lam(d, 2));
        let r = RationalFn::new(num, den).unwrap();
        assert!(r.is_polynomial());
        assert_eq!(*r.numerator(), lam(d, 1).add(&lam(d, 2)));

        // a/b = c/d iff cross-multiplication agrees, via canonical forms.
        let r1 = RationalFn::new(lam(d, 1).mul(&q(d, 3)), q(d, 1).mul(&lam(d, 2))).unwrap();
        let r2 = RationalFn::new(lam(d, 1).mul(&q(d, 2)), lam(d, 2)).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn rational_fn_field_ops() {
        let d = 2;
        let x = RationalFn::new(LaurentPoly::one(d), lam(d, 1).sub(&lam(d, 2))).unwrap();
        let y = x.inv().unwrap();
        assert_eq!(x.mul(&y), RationalFn::one(d));
        assert!(RationalFn::zero(d).inv().is_err());
        let s = x.add(&y.neg());
        assert_eq!(s.add(&y), x);
    }

    #[test]
    fn quantum_five_vanishes_at_l5() {
        let k = Specialization::new(5, vec![]).unwrap();
        assert!(vanishes_under(&quantum_integer(0, 5), &k));
        assert!(!vanishes_under(&quantum_integer(0, 4), &k));
    }

    #[test]
    fn forced_cancellation_under_lambda_assignment() {
        // λ₁ − q⁻²λ₂ with λ₁↦q⁰, λ₂↦q² → 0
        let d = 2;
        let k = Specialization::new(
            0,
            vec![(BigRational::one(), 0), (BigRational::one(), 2)],
        )
        .unwrap();
        let x = lam(d, 1).sub(&q(d, -2).mul(&lam(d, 2)));
        assert!(vanishes_under(&x, &k));
        // λ₂ − q²λ₁ under λ₂ ↦ q²λ₁ → true; generic → false.
        let y = lam(d, 2).sub(&q(d, 2).mul(&lam(d, 1)));
        assert!(vanishes_under(&y, &k));
        assert!(!vanishes_under(&y, &Specialization::generic(d)));
        assert!(vanishes_under(&LaurentPoly::zero(d), &Specialization::generic(d)));
    }

    #[test]
    fn pole_detection() {
        let d = 2;
        // 1/(λ₁−λ₂) with λ₁↦1, λ₂↦1 is rejected already at the
        // specialization level (λ collision is inadmissible).
        assert!(matches!(
            Specialization::new(0, vec![(BigRational::one(), 0), (BigRational::one(), 0)]),
            Err(RingError::InadmissibleSpecialization(_))
        ));
        // A vanishing denominator that is admissible: 1/(λ₁ − q²λ₂) at λ₁↦q²λ₂.
        let k = Specialization::new(
            0,
            vec![(BigRational::one(), 2), (BigRational::one(), 0)],
        )
        .unwrap();
        let r = RationalFn::new(LaurentPoly::one(d), lam(d, 1).sub(&q(d, 2).mul(&lam(d, 2)))).unwrap();
        assert_eq!(k.apply_rational(&r), Err(RingError::PoleAtSpecialization));
    }

    #[test]
    fn inadmissible_specializations_rejected() {
        assert!(matches!(
            Specialization::new(0, vec![(BigRational::zero(), 0)]),
            Err(RingError::InadmissibleSpecialization(_))
        ));
        assert!(matches!(
            Specialization::new(1, vec![]),
            Err(RingError::InadmissibleSpecialization(_))
        ));
        // λ₁ ↦ q⁰, λ₂ ↦ q⁴ collide when q⁴ = 1 (l = 4).
        assert!(matches!(
            Specialization::new(4, vec![(BigRational::one(), 0), (BigRational::one(), 4)]),
            Err(RingError::InadmissibleSpecialization(_))
        ));
        // ... but are distinct when l = 0.
        assert!(Specialization::new(0, vec![(BigRational::one(), 0), (BigRational::one(), 4)]).is_ok());
    }

    #[test]
    fn specialize_is_ring_homomorphism() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let specs = vec![
            Specialization::generic(2),
            Specialization::new(4, vec![(BigRational::one(), 0), (BigRational::one(), 2)]).unwrap(),
            Specialization::new(
                5,
                vec![
                    (BigRational::from(BigInt::from(3)), 1),
                    (BigRational::from(BigInt::from(2)), 0),
                ],
            )
            .unwrap(),
        ];
        for k in &specs {
            for _ in 0..200 {
                let a = random_poly(&mut rng, 2);
                let b = random_poly(&mut rng, 2);
                assert_eq!(k.apply(&a.mul(&b)), k.apply(&a).mul(&k.apply(&b)));
                assert_eq!(k.apply(&a.add(&b)), k.apply(&a).add(&k.apply(&b)));
            }
        }
    }

    #[test]
    fn cyclotomic_field_arithmetic() {
        // In ℚ[q]/Φ_4, q² = −1 and q is invertible with q⁻¹ = −q.
        let i = CycloNumber::q_pow(4, 1);
        assert_eq!(i.mul(&i), CycloNumber::from_int(4, -1));
        assert_eq!(i.inv().unwrap(), i.neg());
        assert!(CycloNumber::zero(4).inv().is_err());
        // Generic field: (q² − 1)/(q − 1) = q + 1.
        let num = CycloNumber::q_pow(0, 2).sub(&CycloNumber::one(0));
        let den = CycloNumber::q_pow(0, 1).sub(&CycloNumber::one(0));
        let r = num.div(&den).unwrap();
        assert_eq!(r, CycloNumber::q_pow(0, 1).add(&CycloNumber::one(0)));
    }

    #[test]
    fn involutions_are_ring_maps_and_involutive() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..500 {
            let a = random_poly(&mut rng, 3);
            let b = random_poly(&mut rng, 3);
            assert_eq!(a.involution_t().involution_t(), a);
            assert_eq!(a.mul(&b).involution_t(), a.involution_t().mul(&b.involution_t()));
            assert_eq!(a.mul(&b).involution_s(), a.involution_s().mul(&b.involution_s()));
            assert_eq!(
                a.involution_s().involution_s().involution_s(),
                a,
                "s has order d = 3"
            );
        }
        // t(q) = −q⁻¹.
        assert_eq!(q(0, 1).involution_t(), q(0, -1).neg());
    }

    #[test]
    fn display_format() {
        let d = 2;
        let p = q(d, 2).mul(&lam(d, 1)).sub(&q(d, -2).mul(&lam(d, 2)));
        assert_eq!(p.to_string(), "q^2*l1 - q^-2*l2");
        assert_eq!(LaurentPoly::zero(0).to_string(), "0");
        assert_eq!(quantum_integer(0, 2).to_string(), "q + q^-1");
    }

    #[test]
    fn gcd_randomized_consistency() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let d = 2;
            let a = random_poly(&mut rng, d);
            let b = random_poly(&mut rng, d);
            let m = random_poly(&mut rng, d);
            if a.is_zero() || b.is_zero() || m.is_zero() {
                continue;
            }
            let g = a.mul(&m).gcd(&b.mul(&m));
            // m divides gcd(am, bm).
            assert!(g.checked_div(&m.primitive_normal()).is_ok());
            // gcd divides both.
            assert!(a.mul(&m).checked_div(&g).is_ok());
            assert!(b.mul(&m).checked_div(&g).is_ok());
        }
    }

    #[test]
    fn rational_eval_matches_specialized_structure() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let qv = BigRational::new(BigInt::from(3), BigInt::from(2));
        let lv = vec![
            BigRational::new(BigInt::from(5), BigInt::from(7)),
            BigRational::new(BigInt::from(-2), BigInt::from(3)),
        ];
        for _ in 0..100 {
            let a = random_poly(&mut rng, 2);
            let b = random_poly(&mut rng, 2);
            let va = a.eval_rational(&qv, &lv).unwrap();
            let vb = b.eval_rational(&qv, &lv).unwrap();
            assert_eq!(a.mul(&b).eval_rational(&qv, &lv).unwrap(), &va * &vb);
        }
    }
}
