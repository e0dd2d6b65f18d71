//! Affine alcove geometry (rank 1 for `d = 2`, rank 2 for `d = 3`) and the
//! formal wall-crossing recursion computing the functions
//! `n_A : 𝔄 → ℤ[v]`.
//!
//! Rank-1 alcoves are the intervals of `ℝ ∖ (−m + lℤ)`, indexed by signed
//! integers counting from the fundamental alcove `A⁰ ∋ 0`. Rank-2 alcoves
//! are the chambers of the reflection group generated by a factor set of
//! hyperplanes `(i, j; x)` acting on the weight plane, enumerated by exact
//! rational affine transforms.

use crate::walks::Hyperplane;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

/// Errors from alcove-complex construction and the recursion.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlcoveError {
    /// A reflection hyperplane passes through the origin, so no fundamental
    /// alcove contains 0.
    #[error("a reflection hyperplane passes through the origin")]
    WallThroughOrigin,
    /// A computation needs alcoves beyond the enumerated truncation radius.
    #[error("computation requires alcoves beyond the truncation radius")]
    TruncationTooSmall,
}

// ---------------------------------------------------------------------------
// Polynomials in the formal parameter v
// ---------------------------------------------------------------------------

/// A Laurent polynomial in the formal parameter `v` with integer
/// coefficients. Final `n_A` values always lie in `ℤ[v]`; negative powers
/// can appear only in intermediate `n′` data.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VPoly {
    coeffs: BTreeMap<i64, i64>,
}

impl VPoly {
    pub fn zero() -> Self {
        VPoly::default()
    }

    pub fn one() -> Self {
        Self::v_pow(0)
    }

    pub fn v_pow(k: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(k, 1);
        VPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0) == Some(&1)
    }

    pub fn coeff(&self, k: i64) -> i64 {
        self.coeffs.get(&k).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&i64, &i64)> {
        self.coeffs.iter()
    }

    pub fn min_deg(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&k, &c) in &other.coeffs {
            let e = out.coeffs.entry(k).or_insert(0);
            *e += c;
            if *e == 0 {
                out.coeffs.remove(&k);
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, c: i64) -> Self {
        if c == 0 {
            return Self::zero();
        }
        VPoly { coeffs: self.coeffs.iter().map(|(&k, &x)| (k, x * c)).collect() }
    }

    /// Multiply by `v^k`.
    pub fn shift(&self, k: i64) -> Self {
        VPoly { coeffs: self.coeffs.iter().map(|(&e, &c)| (e + k, c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = VPoly::zero();
        for (&ka, &ca) in &self.coeffs {
            for (&kb, &cb) in &other.coeffs {
                let e = out.coeffs.entry(ka + kb).or_insert(0);
                *e += ca * cb;
                if *e == 0 {
                    out.coeffs.remove(&(ka + kb));
                }
            }
        }
        out
    }

    /// Value at `v = 1`.
    pub fn eval_one(&self) -> i64 {
        self.coeffs.values().sum()
    }
}

impl fmt::Display for VPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&k, &c) in &self.coeffs {
            let mag = c.abs();
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
                first = false;
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match (k, mag) {
                (0, m) => write!(f, "{m}")?,
                (1, 1) => write!(f, "v")?,
                (1, m) => write!(f, "{m}*v")?,
                (e, 1) => write!(f, "v^{e}")?,
                (e, m) => write!(f, "{m}*v^{e}")?,
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Alcove complexes
// ---------------------------------------------------------------------------

/// Orientation flag for the wall-crossing step. The printed two-case formula
/// admits a pair-constant reading (`PairConstant`), under which the recursion
/// collapses to identity tables, and a graded reading (`Graded`) under which
/// it produces the standard canonical-basis tables `n_A(B) = v^{|A|−|B|}`.
/// `Graded` is the default: it is the reading whose `v = 1` evaluation
/// matches the diagram-algebra Gram-rank oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orientation {
    PairConstant,
    #[default]
    Graded,
}

/// An exact affine map `μ ↦ P·μ + t` on `ℚ³` given by an index permutation
/// and a rational offset vector (`(P·μ)_i = μ_{p[i]}`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct AffineMap {
    perm: [usize; 3],
    offset: [BigRational; 3],
}

impl AffineMap {
    fn identity() -> Self {
        AffineMap {
            perm: [0, 1, 2],
            offset: [BigRational::zero(), BigRational::zero(), BigRational::zero()],
        }
    }

    /// The reflection in hyperplane `(i, j; x)`: swaps coordinates `i, j`
    /// with offsets `+x, −x`.
    fn reflection(h: &Hyperplane) -> Self {
        let (i, j) = (h.i - 1, h.j - 1);
        let mut perm = [0usize, 1, 2];
        perm.swap(i, j);
        let mut offset = [BigRational::zero(), BigRational::zero(), BigRational::zero()];
        offset[i] = BigRational::from(BigInt::from(h.x));
        offset[j] = BigRational::from(BigInt::from(-h.x));
        AffineMap { perm, offset }
    }

    fn apply(&self, p: &[BigRational; 3]) -> [BigRational; 3] {
        [
            &p[self.perm[0]] + &self.offset[0],
            &p[self.perm[1]] + &self.offset[1],
            &p[self.perm[2]] + &self.offset[2],
        ]
    }

    /// `self ∘ other` (apply `other` first).
    fn compose(&self, other: &Self) -> Self {
        let mut perm = [0usize; 3];
        let mut offset =
            [BigRational::zero(), BigRational::zero(), BigRational::zero()];
        for i in 0..3 {
            perm[i] = other.perm[self.perm[i]];
            offset[i] = &other.offset[self.perm[i]] + &self.offset[i];
        }
        AffineMap { perm, offset }
    }
}

#[derive(Debug, Clone)]
struct Rank1 {
    l: i64,
    m: i64,
    radius: i64,
    /// Absolute index of the wall immediately left of 0 (so alcove `k`
    /// spans the interval between walls `k + j0` and `k + j0 + 1`).
    j0: i64,
}

#[derive(Debug, Clone)]
struct Rank2Alcove {
    map: AffineMap,
    depth: usize,
    word: Vec<usize>,
    /// Neighbor alcove per wall-orbit id; `None` if outside the truncation.
    neighbors: Vec<Option<usize>>,
}

#[derive(Debug, Clone)]
struct Rank2 {
    alcoves: Vec<Rank2Alcove>,
    num_walls: usize,
    hyperplanes: Vec<Hyperplane>,
}

#[derive(Debug, Clone)]
enum Inner {
    R1(Rank1),
    R2(Rank2),
}

/// An alcove complex: the ambient geometry plus an enumeration of alcoves up
/// to a truncation radius, with wall-orbit pairings `B ↦ B.s`.
///
/// Alcoves are referred to by `i64` labels: rank 1 uses the signed interval
/// index (0 = fundamental alcove), rank 2 uses enumeration order (0 = `A⁰`).
#[derive(Debug, Clone)]
pub struct AlcoveComplex {
    inner: Inner,
}

impl AlcoveComplex {
    /// Rank-1 complex with reflection points at `−m + lℤ`; requires
    /// `l ≥ 2` and `m ≢ 0 (mod l)`.
    pub fn build_rank1(l: i64, m: i64, radius: i64) -> Result<Self, AlcoveError> {
        assert!(l >= 2, "period must be at least 2");
        assert!(radius >= 0);
        if m.rem_euclid(l) == 0 {
            return Err(AlcoveError::WallThroughOrigin);
        }
        // Wall j sits at −m + l·j; alcove 0 must contain the origin.
        let j0 = (BigRational::new(BigInt::from(m), BigInt::from(l))).floor().to_integer();
        let j0 = i64::try_from(j0).expect("small offset");
        Ok(AlcoveComplex { inner: Inner::R1(Rank1 { l, m, radius, j0 }) })
    }

    /// Rank-2 complex for `d = 3`: chambers of the group generated by the
    /// factor hyperplanes (expanded periodically with period `ord(q²)` when
    /// `l > 0`), truncated to gallery distance `radius` from `A⁰`.
    pub fn build_rank2(
        factors: &[Hyperplane],
        l: u32,
        radius: usize,
    ) -> Result<Self, AlcoveError> {
        for h in factors {
            assert!(h.i >= 1 && h.i <= 3 && h.j >= 1 && h.j <= 3, "rank 2 means d = 3");
        }
        // Offset bound for the truncated hyperplane arrangement.
        let gmax = factors.iter().map(|h| h.x.abs()).max().unwrap_or(0);
        let bound = (radius as i64 + 2) * (gmax + 1).max(1);
        // Periodic expansion at a root of unity: q^{2x} has period ord(q²).
        let mut expanded: Vec<Hyperplane> = Vec::new();
        if l > 0 {
            let period = if l % 2 == 0 { (l / 2) as i64 } else { l as i64 };
            for h in factors {
                let mut k = -bound;
                while k <= bound {
                    let x = h.x + k * period;
                    if x.abs() <= bound {
                        expanded.push(Hyperplane::new(h.i, h.j, x));
                    }
                    k += 1;
                }
            }
        } else {
            expanded.extend_from_slice(factors);
        }
        let hyps = crate::walks::hyperplane_closure(&expanded, bound);
        if hyps.iter().any(|h| h.x == 0) {
            return Err(AlcoveError::WallThroughOrigin);
        }
        if hyps.is_empty() {
            // Trivial group: the whole plane is a single alcove.
            let a0 = Rank2Alcove {
                map: AffineMap::identity(),
                depth: 0,
                word: vec![],
                neighbors: vec![],
            };
            return Ok(AlcoveComplex {
                inner: Inner::R2(Rank2 { alcoves: vec![a0], num_walls: 0, hyperplanes: vec![] }),
            });
        }
        // Generic interior point of A⁰, close enough to the origin that it
        // shares the origin's side of every integral-offset hyperplane.
        let p0: [BigRational; 3] = [
            BigRational::zero(),
            BigRational::new(BigInt::from(1), BigInt::from(101)),
            BigRational::new(BigInt::from(1), BigInt::from(103)),
        ];
        let eval = |h: &Hyperplane, p: &[BigRational; 3]| -> BigRational {
            &p[h.i - 1] - &p[h.j - 1] - BigRational::from(BigInt::from(h.x))
        };
        // Walls of A⁰: hyperplanes whose reflection of p0 is separated from
        // p0 by exactly one hyperplane of the arrangement.
        let mut wall_gens: Vec<Hyperplane> = Vec::new();
        for h in &hyps {
            let rp = AffineMap::reflection(h).apply(&p0);
            let separating = hyps
                .iter()
                .filter(|g| {
                    let a = eval(g, &p0);
                    let b = eval(g, &rp);
                    (a < BigRational::zero()) != (b < BigRational::zero())
                })
                .count();
            if separating == 1 {
                wall_gens.push(*h);
            }
        }
        let gens: Vec<AffineMap> = wall_gens.iter().map(AffineMap::reflection).collect();
        let num_walls = gens.len();
        // Breadth-first enumeration of chambers as group elements; the
        // canonical key of an element w is the image w(p0).
        let normalize = |p: [BigRational; 3]| -> [BigRational; 3] {
            [
                BigRational::zero(),
                &p[1] - &p[0],
                &p[2] - &p[0],
            ]
        };
        let key_of = |p: &[BigRational; 3]| -> String {
            format!("{}|{}", p[1], p[2])
        };
        let mut alcoves: Vec<Rank2Alcove> = vec![Rank2Alcove {
            map: AffineMap::identity(),
            depth: 0,
            word: vec![],
            neighbors: vec![None; num_walls],
        }];
        let mut index: HashMap<String, usize> = HashMap::new();
        index.insert(key_of(&normalize(p0.clone())), 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(id) = queue.pop_front() {
            let (depth, map, word) = {
                let a = &alcoves[id];
                (a.depth, a.map.clone(), a.word.clone())
            };
            for (s, g) in gens.iter().enumerate() {
                // Right multiplication: w·s.
                let m2 = map.compose(g);
                let key = key_of(&normalize(m2.apply(&p0)));
                if let Some(&nid) = index.get(&key) {
                    alcoves[id].neighbors[s] = Some(nid);
                    continue;
                }
                if depth + 1 > radius {
                    continue;
                }
                let mut w2 = word.clone();
                w2.push(s);
                let nid = alcoves.len();
                alcoves.push(Rank2Alcove {
                    map: m2,
                    depth: depth + 1,
                    word: w2,
                    neighbors: vec![None; num_walls],
                });
                index.insert(key, nid);
                alcoves[id].neighbors[s] = Some(nid);
                queue.push_back(nid);
            }
        }
        Ok(AlcoveComplex {
            inner: Inner::R2(Rank2 { alcoves, num_walls, hyperplanes: hyps }),
        })
    }

    pub fn rank(&self) -> usize {
        match &self.inner {
            Inner::R1(_) => 1,
            Inner::R2(_) => 2,
        }
    }

    /// The period `l` of a rank-1 complex.
    pub fn rank1_params(&self) -> Option<(i64, i64)> {
        match &self.inner {
            Inner::R1(r) => Some((r.l, r.m)),
            Inner::R2(_) => None,
        }
    }

    /// All enumerated alcove labels (rank 1: `−radius ..= radius`; rank 2:
    /// enumeration order).
    pub fn alcoves(&self) -> Vec<i64> {
        match &self.inner {
            Inner::R1(r) => (-r.radius..=r.radius).collect(),
            Inner::R2(r) => (0..r.alcoves.len() as i64).collect(),
        }
    }

    fn contains(&self, b: i64) -> bool {
        match &self.inner {
            Inner::R1(r) => b.abs() <= r.radius,
            Inner::R2(r) => b >= 0 && (b as usize) < r.alcoves.len(),
        }
    }

    /// `|B|`: the number of hyperplanes strictly between the alcove and the
    /// origin (= gallery distance from `A⁰`).
    pub fn depth(&self, b: i64) -> usize {
        match &self.inner {
            Inner::R1(_) => b.unsigned_abs() as usize,
            Inner::R2(r) => r.alcoves[b as usize].depth,
        }
    }

    /// Wall-orbit identifiers (rank 1: wall-point parity classes 0 and 1;
    /// rank 2: panel types, one per generating wall of `A⁰`).
    pub fn wall_orbits(&self) -> Vec<usize> {
        match &self.inner {
            Inner::R1(_) => vec![0, 1],
            Inner::R2(r) => (0..r.num_walls).collect(),
        }
    }

    /// The truncated hyperplane arrangement of a rank-2 complex.
    pub fn rank2_hyperplanes(&self) -> Option<&[Hyperplane]> {
        match &self.inner {
            Inner::R1(_) => None,
            Inner::R2(r) => Some(&r.hyperplanes),
        }
    }

    /// A human-readable label (rank 2: the reduced word from `A⁰`).
    pub fn label(&self, b: i64) -> String {
        match &self.inner {
            Inner::R1(_) => b.to_string(),
            Inner::R2(r) => {
                let w = &r.alcoves[b as usize].word;
                if w.is_empty() {
                    "e".into()
                } else {
                    w.iter().map(|s| format!("s{s}")).collect::<Vec<_>>().join(".")
                }
            }
        }
    }

    /// `B.s`: the reflection of `B` in its unique wall lying in orbit `s`.
    pub fn wall_pairing(&self, b: i64, s: usize) -> Result<i64, AlcoveError> {
        match &self.inner {
            Inner::R1(r) => {
                // The walls of alcove k have absolute indices k+j0 and
                // k+j0+1, of opposite parity; pick the one of parity s.
                let lo = b + r.j0;
                let j = if lo.rem_euclid(2) == s as i64 { lo } else { lo + 1 };
                debug_assert_eq!(j.rem_euclid(2), s as i64);
                let image = 2 * (j - r.j0) - b - 1;
                if image.abs() > r.radius {
                    return Err(AlcoveError::TruncationTooSmall);
                }
                Ok(image)
            }
            Inner::R2(r) => r.alcoves[b as usize]
                .neighbors
                .get(s)
                .copied()
                .flatten()
                .map(|x| x as i64)
                .ok_or(AlcoveError::TruncationTooSmall),
        }
    }

    /// The wall orbits `s` with `|B.s| > |B|` among enumerated neighbors.
    pub fn ascending_walls(&self, b: i64) -> Vec<usize> {
        self.wall_orbits()
            .into_iter()
            .filter(|&s| match self.wall_pairing(b, s) {
                Ok(c) => self.depth(c) > self.depth(b),
                Err(_) => false,
            })
            .collect()
    }

    // -- rank-1 weight geometry --------------------------------------------

    /// The alcove containing integer weight `x`, or `None` if `x` lies on a
    /// wall (a singular weight). Rank 1 only.
    pub fn alcove_of_weight(&self, x: i64) -> Option<i64> {
        let r = match &self.inner {
            Inner::R1(r) => r,
            Inner::R2(_) => panic!("weights live in rank-1 complexes"),
        };
        if (x + r.m).rem_euclid(r.l) == 0 {
            return None;
        }
        // x ∈ (w_a, w_{a+1}) with a = floor((x+m)/l).
        let a = (x + r.m).div_euclid(r.l);
        Some(a - r.j0)
    }

    /// The affine Weyl orbit of weight `x` intersected with `[−bound, bound]`,
    /// sorted. Rank 1 only.
    pub fn weight_orbit(&self, x: i64, bound: i64) -> Vec<i64> {
        let r = match &self.inner {
            Inner::R1(r) => r,
            Inner::R2(_) => panic!("weights live in rank-1 complexes"),
        };
        // Orbit = {x + 2lk} ∪ {−2m − x + 2lk}.
        let mut out = Vec::new();
        let period = 2 * r.l;
        for base in [x, -2 * r.m - x] {
            let mut k = (-bound - base).div_euclid(period);
            loop {
                let y = base + k * period;
                if y > bound {
                    break;
                }
                if y >= -bound {
                    out.push(y);
                }
                k += 1;
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    // -- the recursion ------------------------------------------------------

    /// The intermediate function `n′_{As}` for the step crossing wall orbit
    /// `s` upward out of `A` (whose table `n_a` is supplied), evaluated on
    /// all enumerated alcoves.
    pub fn nprime(
        &self,
        n_a: &NPoly,
        s: usize,
        orientation: Orientation,
    ) -> Result<BTreeMap<i64, VPoly>, AlcoveError> {
        let mut out = BTreeMap::new();
        for c in self.alcoves() {
            let cs = match self.wall_pairing(c, s) {
                Ok(cs) => cs,
                // A neighbor beyond the truncation has zero n_A value and
                // is itself out of reach; both contributions vanish
                // whenever |C| and |C.s| exceed |A| + 1, which the caller's
                // radius contract guarantees for nonzero values.
                Err(_) => {
                    if n_a.value(c).is_zero() {
                        continue;
                    }
                    return Err(AlcoveError::TruncationTooSmall);
                }
            };
            let nc = n_a.value(c);
            let ncs = n_a.value(cs);
            let lower = self.depth(c) < self.depth(cs);
            let val = match orientation {
                Orientation::PairConstant => {
                    // Pair-constant reading: n′({L,U}) = n_A(L) + v⁻¹ n_A(U),
                    // evaluated identically at both members of the pair.
                    if lower {
                        nc.add(&ncs.shift(-1))
                    } else {
                        ncs.add(&nc.shift(-1))
                    }
                }
                Orientation::Graded => {
                    // Graded reading: the v-weight sits on the alcove itself,
                    // ascending with +1 on the lower member.
                    let e = if lower { 1 } else { -1 };
                    ncs.add(&nc.shift(e))
                }
            };
            if !val.is_zero() {
                out.insert(c, val);
            }
        }
        Ok(out)
    }

    /// Compute `n_B` for every enumerated alcove with `|B| ≤ max_depth`,
    /// by induction over gallery distance. For alcoves with several
    /// descending walls the results along every path are asserted equal
    /// (the well-definedness the source construction flags as nontrivial).
    pub fn soergel_table(
        &self,
        max_depth: usize,
        orientation: Orientation,
    ) -> Result<BTreeMap<i64, NPoly>, AlcoveError> {
        let mut table: BTreeMap<i64, NPoly> = BTreeMap::new();
        let a0 = match &self.inner {
            Inner::R1(_) => 0i64,
            Inner::R2(_) => 0i64,
        };
        let mut v0 = NPoly { base: a0, values: BTreeMap::new() };
        v0.values.insert(a0, VPoly::one());
        table.insert(a0, v0);
        let mut by_depth: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
        for b in self.alcoves() {
            by_depth.entry(self.depth(b)).or_default().push(b);
        }
        for depth in 1..=max_depth {
            let layer = match by_depth.get(&depth) {
                None => break,
                Some(l) => l.clone(),
            };
            for asx in layer {
                let mut computed: Option<NPoly> = None;
                // Every descending wall provides a parent A with As = asx.
                for s in self.wall_orbits() {
                    let a = match self.wall_pairing(asx, s) {
                        Ok(a) => a,
                        Err(_) => continue,
                    };
                    if self.depth(a) + 1 != depth {
                        continue;
                    }
                    let n_a = table.get(&a).ok_or(AlcoveError::TruncationTooSmall)?;
                    let nprime = self.nprime(n_a, s, orientation)?;
                    let mut values = nprime.clone();
                    // Subtract Σ_{|B| < |As|} n′(B)|_{v⁰} · n_B.
                    for (&b, np) in &nprime {
                        if self.depth(b) >= depth {
                            continue;
                        }
                        let c0 = np.coeff(0);
                        if c0 == 0 {
                            continue;
                        }
                        let n_b = table.get(&b).ok_or(AlcoveError::TruncationTooSmall)?;
                        for (&c, val) in &n_b.values {
                            let cur = values.remove(&c).unwrap_or_else(VPoly::zero);
                            let nv = cur.sub(&val.scale(c0));
                            if !nv.is_zero() {
                                values.insert(c, nv);
                            }
                        }
                    }
                    let candidate = NPoly { base: asx, values };
                    match &computed {
                        None => computed = Some(candidate),
                        Some(prev) => assert_eq!(
                            prev.values, candidate.values,
                            "wall-crossing recursion disagrees across descent choices at {}",
                            self.label(asx)
                        ),
                    }
                }
                let n = computed.ok_or(AlcoveError::TruncationTooSmall)?;
                table.insert(asx, n);
            }
        }
        Ok(table)
    }

    /// The function `n_A` for a single alcove.
    pub fn soergel_n(&self, a: i64, orientation: Orientation) -> Result<NPoly, AlcoveError> {
        if !self.contains(a) {
            return Err(AlcoveError::TruncationTooSmall);
        }
        let depth = self.depth(a);
        // All contributing alcoves must be enumerated: |B| ≤ |A| plus one
        // crossing step.
        let max_enumerated = self.alcoves().iter().map(|&b| self.depth(b)).max().unwrap_or(0);
        if depth + 1 > max_enumerated {
            return Err(AlcoveError::TruncationTooSmall);
        }
        let table = self.soergel_table(depth, orientation)?;
        table.get(&a).cloned().ok_or(AlcoveError::TruncationTooSmall)
    }

    /// The decomposition prediction for a rank-1 complex at size `n`:
    /// entries `(λ, μ) ↦ n_{A(λ)}(B(μ))` over weights `λ, μ ∈ {−n, −n+2, …, n}`
    /// with `μ` in the affine Weyl orbit of `λ`. Weights on walls are
    /// singular: their block is the chain of wall points in one orbit,
    /// graded by the number of walls strictly between the point and the
    /// origin, with entry `v^{d(λ)−d(μ)}` whenever `d(λ) > d(μ)`.
    pub fn decomposition_prediction(
        &self,
        n: i64,
        orientation: Orientation,
    ) -> Result<DecompositionTable, AlcoveError> {
        assert_eq!(self.rank(), 1, "decomposition prediction is a rank-1 construct");
        // Size-n weights: −n, −n+2, …, n.
        let weights: Vec<i64> = (0..=n).map(|k| -n + 2 * k).collect();
        let mut max_depth = 0usize;
        for &x in &weights {
            if let Some(a) = self.alcove_of_weight(x) {
                max_depth = max_depth.max(self.depth(a));
            }
        }
        let table = self.soergel_table(max_depth, orientation)?;
        let mut entries: BTreeMap<(i64, i64), VPoly> = BTreeMap::new();
        // Number of walls strictly between the origin and a wall point.
        let (l, m) = self.rank1_params().expect("rank-1 complex");
        let wall_depth = |x: i64| -> usize {
            debug_assert_eq!((x + m).rem_euclid(l), 0, "not a wall point");
            let mut count = 0usize;
            let mut j = (-n - 1 + m).div_euclid(l);
            loop {
                let w = -m + l * j;
                if w > n + 1 {
                    break;
                }
                if (0 < w && w < x) || (x < w && w < 0) {
                    count += 1;
                }
                j += 1;
            }
            count
        };
        for &lam in &weights {
            match self.alcove_of_weight(lam) {
                None => {
                    entries.insert((lam, lam), VPoly::one());
                    let d_lam = wall_depth(lam);
                    for mu in self.weight_orbit(lam, n) {
                        if mu == lam || self.alcove_of_weight(mu).is_some() {
                            continue;
                        }
                        let d_mu = wall_depth(mu);
                        if d_lam > d_mu {
                            entries.insert((lam, mu), VPoly::v_pow((d_lam - d_mu) as i64));
                        }
                    }
                }
                Some(a) => {
                    let n_a = table.get(&a).ok_or(AlcoveError::TruncationTooSmall)?;
                    for mu in self.weight_orbit(lam, n) {
                        let b = match self.alcove_of_weight(mu) {
                            Some(b) => b,
                            None => continue,
                        };
                        let val = n_a.value(b);
                        if !val.is_zero() {
                            entries.insert((lam, mu), val.clone());
                        }
                    }
                }
            }
        }
        Ok(DecompositionTable { n, weights, entries })
    }
}

/// The function `n_A : 𝔄 → ℤ[v]` attached to a base alcove.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NPoly {
    base: i64,
    values: BTreeMap<i64, VPoly>,
}

impl NPoly {
    pub fn base(&self) -> i64 {
        self.base
    }

    pub fn value(&self, b: i64) -> VPoly {
        self.values.get(&b).cloned().unwrap_or_else(VPoly::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = (&i64, &VPoly)> {
        self.values.iter()
    }
}

/// Predicted decomposition data over `ℤ[v]`: rows λ, columns μ; the entry's
/// value at `v = 1` is the predicted multiplicity `[Δ(μ) : L(λ)]` and the
/// v-exponents are predicted Loewy layers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionTable {
    pub n: i64,
    pub weights: Vec<i64>,
    pub entries: BTreeMap<(i64, i64), VPoly>,
}

impl DecompositionTable {
    pub fn entry(&self, lam: i64, mu: i64) -> VPoly {
        self.entries.get(&(lam, mu)).cloned().unwrap_or_else(VPoly::zero)
    }

    /// The matrix of multiplicities at `v = 1`, rows/columns in `weights`
    /// order.
    pub fn at_v_one(&self) -> Vec<Vec<i64>> {
        self.weights
            .iter()
            .map(|&lam| self.weights.iter().map(|&mu| self.entry(lam, mu).eval_one()).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank1_geometry_examples() {
        // (l=4, m=1): walls at …,−5,−1,3,7,…; A⁰ = (−1,3).
        let c = AlcoveComplex::build_rank1(4, 1, 6).unwrap();
        assert_eq!(c.alcove_of_weight(0), Some(0));
        assert_eq!(c.alcove_of_weight(2), Some(0));
        assert_eq!(c.alcove_of_weight(4), Some(1)); // (3,7) has |B| = 1
        assert_eq!(c.depth(1), 1);
        assert_eq!(c.alcove_of_weight(3), None); // wall
        assert_eq!(c.alcove_of_weight(-1), None);
        assert_eq!(c.alcove_of_weight(-2), Some(-1));
        assert!(matches!(
            AlcoveComplex::build_rank1(4, 4, 3),
            Err(AlcoveError::WallThroughOrigin)
        ));
        // Negative m also positions A⁰ correctly.
        let c2 = AlcoveComplex::build_rank1(4, -1, 6).unwrap();
        assert_eq!(c2.alcove_of_weight(0), Some(0));
        assert_eq!(c2.alcove_of_weight(1), None); // wall at 1 = −(−1)
        assert_eq!(c2.alcove_of_weight(2), Some(1));
    }

    #[test]
    fn wall_pairing_involution_and_adjacency() {
        let c = AlcoveComplex::build_rank1(4, 1, 30).unwrap();
        // A⁰.s with s the orbit of the wall at 3 (absolute index 1, odd).
        assert_eq!(c.wall_pairing(0, 1).unwrap(), 1);
        assert_eq!(c.wall_pairing(0, 0).unwrap(), -1);
        for b in -20..=20i64 {
            for s in [0usize, 1] {
                let bs = c.wall_pairing(b, s).unwrap();
                assert_eq!(c.wall_pairing(bs, s).unwrap(), b, "involution at {b},{s}");
                assert_eq!((c.depth(bs) as i64 - c.depth(b) as i64).abs(), 1);
            }
        }
    }

    #[test]
    fn soergel_base_case_and_support() {
        let c = AlcoveComplex::build_rank1(4, 1, 10).unwrap();
        let n0 = c.soergel_n(0, Orientation::Graded).unwrap();
        assert!(n0.value(0).is_one());
        assert_eq!(n0.support().count(), 1);
        for a in [-4i64, -2, 3, 4] {
            let na = c.soergel_n(a, Orientation::Graded).unwrap();
            assert!(na.value(a).is_one(), "n_A(A)=1 at {a}");
            for (&b, val) in na.support() {
                assert!(!val.is_zero());
                assert!(c.depth(b) <= c.depth(a), "support bound at {a}/{b}");
                assert!(val.min_deg().unwrap() >= 0, "values lie in ℤ[v]");
            }
        }
    }

    #[test]
    fn graded_tables_are_canonical_basis_pattern() {
        // In rank 1 the graded orientation yields n_A(B) = v^{|A|−|B|} for
        // all |B| < |A| (both sides) plus n_A(A) = 1.
        let c = AlcoveComplex::build_rank1(4, 1, 12).unwrap();
        for a in [-5i64, -3, -1, 1, 2, 4, 5] {
            let na = c.soergel_n(a, Orientation::Graded).unwrap();
            for b in -6..=6i64 {
                let want = if b == a {
                    VPoly::one()
                } else if c.depth(b) < c.depth(a) {
                    VPoly::v_pow((c.depth(a) - c.depth(b)) as i64)
                } else {
                    VPoly::zero()
                };
                assert_eq!(na.value(b), want, "at A={a}, B={b}");
            }
        }
    }

    #[test]
    fn pair_constant_nprime_is_constant_on_pairs() {
        let c = AlcoveComplex::build_rank1(5, 2, 10).unwrap();
        let table = c.soergel_table(4, Orientation::PairConstant).unwrap();
        for (&a, n_a) in &table {
            for s in c.wall_orbits() {
                if c.wall_pairing(a, s).map(|x| c.depth(x)) != Ok(c.depth(a) + 1) {
                    continue;
                }
                let np = c.nprime(n_a, s, Orientation::PairConstant).unwrap();
                for b in -8..=8i64 {
                    let bs = c.wall_pairing(b, s).unwrap();
                    let vb = np.get(&b).cloned().unwrap_or_else(VPoly::zero);
                    let vbs = np.get(&bs).cloned().unwrap_or_else(VPoly::zero);
                    assert_eq!(vb, vbs, "n′ not pair-constant at {b}");
                }
            }
        }
    }

    #[test]
    fn graded_nprime_is_pair_proportional() {
        // Under the graded reading, n′(lower) = v · n′(upper) on each pair.
        let c = AlcoveComplex::build_rank1(4, 1, 10).unwrap();
        let table = c.soergel_table(3, Orientation::Graded).unwrap();
        let n_a = table.get(&2).unwrap();
        for s in c.wall_orbits() {
            let np = c.nprime(n_a, s, Orientation::Graded).unwrap();
            for b in -6..=6i64 {
                let bs = c.wall_pairing(b, s).unwrap();
                if c.depth(b) < c.depth(bs) {
                    let lo = np.get(&b).cloned().unwrap_or_else(VPoly::zero);
                    let up = np.get(&bs).cloned().unwrap_or_else(VPoly::zero);
                    assert_eq!(lo, up.shift(1));
                }
            }
        }
    }

    #[test]
    fn weight_orbits() {
        let c = AlcoveComplex::build_rank1(4, 1, 10).unwrap();
        // Orbit of 0: {8k} ∪ {8k − 2}.
        assert_eq!(c.weight_orbit(0, 8), vec![-8, -2, 0, 6, 8]);
        assert_eq!(c.weight_orbit(2, 6), vec![-6, -4, 2, 4]);
    }

    #[test]
    fn decomposition_prediction_shape() {
        let c = AlcoveComplex::build_rank1(4, 1, 10).unwrap();
        let t = c.decomposition_prediction(6, Orientation::Graded).unwrap();
        assert_eq!(t.weights, vec![-6, -4, -2, 0, 2, 4, 6]);
        // Diagonal is 1.
        for &w in &t.weights {
            assert!(t.entry(w, w).is_one());
        }
        // Weight 3-on-wall case does not arise here (odd weights excluded
        // at n=6); check a known off-diagonal: λ = −2 ∈ A⁻¹ has n(A⁰) = v,
        // and the orbit point of −2's orbit in A⁰ is 0.
        assert_eq!(t.entry(-2, 0), VPoly::v_pow(1));
        // μ not in orbit of λ → 0.
        assert!(t.entry(-4, 0).is_zero());
        // Singular weights (on-wall): n=5 has walls −5, −1, 3 among its
        // weights. The orbit {3, −5} is a chain graded by the number of
        // walls between the point and the origin (0 for 3, 1 for −5), while
        // −1 sits in its own orbit and stays simple.
        let t5 = c.decomposition_prediction(5, Orientation::Graded).unwrap();
        assert!(t5.entry(3, 3).is_one());
        assert_eq!(t5.entry(-5, 3), VPoly::v_pow(1));
        assert!(t5.entry(3, -5).is_zero());
        assert!(t5.entry(-1, 3).is_zero());
        assert_eq!(
            t5.entries.keys().filter(|(l, _)| *l == -1).count(),
            1,
            "wall orbit of −1 reaches no other size-5 weight"
        );
    }

    #[test]
    fn rank2_finite_s3_geometry() {
        // Three concurrent reflection lines: the finite group S₃ with six
        // chambers.
        let gens = [
            Hyperplane::new(2, 1, 1),
            Hyperplane::new(3, 1, 2),
            Hyperplane::new(2, 3, -1),
        ];
        let c = AlcoveComplex::build_rank2(&gens, 0, 6).unwrap();
        assert_eq!(c.alcoves().len(), 6);
        assert_eq!(c.rank2_hyperplanes().unwrap().len(), 3);
        assert_eq!(c.wall_orbits().len(), 2);
        let depths: Vec<usize> = c.alcoves().iter().map(|&b| c.depth(b)).collect();
        let mut sorted = depths.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![0, 1, 1, 2, 2, 3]);
        // Well-definedness across descent paths is asserted internally; the
        // longest element has two descents.
        let table = c.soergel_table(3, Orientation::Graded).unwrap();
        assert_eq!(table.len(), 6);
        for (&a, na) in &table {
            assert!(na.value(a).is_one());
        }
    }

    #[test]
    fn rank2_trivial_and_truncation() {
        let c = AlcoveComplex::build_rank2(&[], 0, 3).unwrap();
        assert_eq!(c.alcoves().len(), 1);
        let c = AlcoveComplex::build_rank2(&[Hyperplane::new(2, 1, 1)], 0, 0).unwrap();
        assert_eq!(c.alcoves().len(), 1); // radius 0: only A⁰
        assert!(matches!(
            AlcoveComplex::build_rank2(&[Hyperplane::new(1, 2, 0)], 0, 2),
            Err(AlcoveError::WallThroughOrigin)
        ));
    }

    #[test]
    fn rank2_affine_grows() {
        // One hyperplane family at a root of unity: the affine extension
        // has infinitely many alcoves in the line direction; truncation
        // bounds enumeration.
        let c = AlcoveComplex::build_rank2(&[Hyperplane::new(2, 1, 1)], 4, 4).unwrap();
        assert!(c.alcoves().len() > 2, "affine extension expected");
        let table = c.soergel_table(3, Orientation::Graded).unwrap();
        for (&a, na) in &table {
            assert!(na.value(a).is_one());
            for (&b, v) in na.support() {
                assert!(c.depth(b) <= c.depth(a));
                assert!(v.min_deg().unwrap() >= 0);
            }
        }
    }

    #[test]
    fn truncation_errors() {
        let c = AlcoveComplex::build_rank1(4, 1, 2).unwrap();
        assert!(matches!(
            c.soergel_n(2, Orientation::Graded),
            Err(AlcoveError::TruncationTooSmall)
        ));
        assert!(c.soergel_n(1, Orientation::Graded).is_ok());
    }
}
